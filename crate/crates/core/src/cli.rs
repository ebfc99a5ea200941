//! Command-line front end: argument types, dispatch and report rendering.

use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::{json, Value};

use crate::descriptor::{parse_function, parse_matrix, parse_row_family, parse_sequence, parse_weight, sequence_to_csv};
use crate::error::{Error, Result};
use crate::fourier::domain::DEFAULT_POINTS;
use crate::fourier::norms::seminorm_weightfn;
use crate::fourier::{
    check_bump_derivatives, check_lemma53_i, check_lemma53_ii, fourier_norm, seminorm_derivative, spectrum,
    standard_battery, theorem51_harness, CompactBox, HarnessConfig, SampledFunction,
};
use crate::matrix::chain::IDENTITY_TOL;
use crate::matrix::theorems::{min_convolution_deviation, STABILITY_LS};
use crate::matrix::{
    check_all_matrix_conditions, check_br_triangle, check_integer_identity_with, check_l_consequences,
    check_omega_stability, check_pseudo_mg, check_stability_with, comparison_report, multi_index_step,
    relation_matrix, MatrixRelation, MultiIndexChain, ReportInput, RowLabel, Sense, WeightMatrix,
};
use crate::output::{to_json, Report};
use crate::props::{conjugate_involution, hull_oracle};
use crate::quasi::{class_nq_verdict, construct_minorant, matrix_nq_verdict, sandwich_construct, small_terms_diagnostic};
use crate::seq::conditions::{
    check_beta3, check_carleman_consistency, check_in_lc, check_log_convex, check_moderate_growth, check_nq,
    check_normalized, check_root_series,
};
use crate::seq::LogWeightSequence;
use crate::verdict::{Status, Verdict};
use crate::weight::conditions::{check_omega_conditions, check_w0};
use crate::weight::relations::check_lemma_assofunc;
use crate::weight::WeightFunction;

#[derive(Debug, Clone, Parser, Serialize)]
#[command(name = "wcalc", version, about = "Weight sequences, weight functions and weight matrices")]
pub struct Cli {
    /// Length of represented prefixes.
    #[arg(long, global = true, default_value_t = 200)]
    pub pmax: usize,
    /// Tolerance for identity checks.
    #[arg(long, global = true)]
    pub tol: Option<f64>,
    /// Row labels for matrix descriptors that do not list their own.
    #[arg(long, global = true, value_delimiter = ',')]
    pub labels: Vec<f64>,
    /// Report path; CSV exports are written next to it.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    pub format: Format,
    /// Seed of randomized property sweeps.
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    #[command(subcommand)]
    pub command: Command,
}

impl Cli {
    /// Parses arguments that follow the program name.
    pub fn from_args<I: IntoIterator<Item = String>>(args: I) -> Result<Cli> {
        Cli::try_parse_from(std::iter::once("wcalc".to_string()).chain(args)).map_err(|e| Error::Parse(e.to_string()))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Format {
    Json,
    Csv,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum SenseArg {
    Roumieu,
    Beurling,
}

impl From<SenseArg> for Sense {
    fn from(s: SenseArg) -> Sense {
        match s {
            SenseArg::Roumieu => Sense::Roumieu,
            SenseArg::Beurling => Sense::Beurling,
        }
    }
}

fn senses(s: Option<SenseArg>) -> Vec<Sense> {
    match s {
        Some(s) => vec![s.into()],
        None => vec![Sense::Roumieu, Sense::Beurling],
    }
}

#[derive(Debug, Clone, Subcommand, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Command {
    /// Condition dossier of one sequence or weight function.
    Analyze(AnalyzeArgs),
    /// Weight matrix conditions, chains, stability and comparisons.
    #[command(subcommand)]
    Matrix(MatrixCmd),
    /// Quasianalyticity verdicts and minorant constructions.
    #[command(subcommand)]
    Quasi(QuasiCmd),
    /// Sampled functions, spectra, seminorms and the membership harness.
    #[command(subcommand)]
    Fourier(FourierCmd),
    /// Seeded random sweeps against exact oracles.
    Props(PropsArgs),
}

#[derive(Debug, Clone, Args, Serialize)]
#[group(required = true, multiple = false)]
pub struct SingleInput {
    /// Sequence descriptor.
    #[arg(long)]
    pub seq: Option<String>,
    /// Weight function descriptor.
    #[arg(long)]
    pub weight: Option<String>,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct AnalyzeArgs {
    #[command(flatten)]
    pub input: SingleInput,
    /// Largest Q tried for (β3).
    #[arg(long, default_value_t = 8)]
    pub q_max: usize,
    /// Grid points of the exported ω curve.
    #[arg(long, default_value_t = 400)]
    pub grid: usize,
}

#[derive(Debug, Clone, Args, Serialize)]
#[group(required = true, multiple = false)]
pub struct MatrixInput {
    /// Gevrey matrix with rows p!^{x+1}.
    #[arg(long, value_delimiter = ',')]
    pub gevrey: Option<Vec<f64>>,
    /// Matrix descriptor.
    #[arg(long)]
    pub matrix: Option<String>,
    /// Row family `expr:q=a..b` with rows p!^{expr}.
    #[arg(long)]
    pub rows: Option<String>,
}

#[derive(Debug, Clone, Subcommand, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum MatrixCmd {
    /// Every (M_…) condition in both senses.
    Conditions(MatrixInput),
    /// Iterate ω ↦ Ω^l over the given steps.
    Chain {
        #[command(flatten)]
        input: MatrixInput,
        #[arg(long, value_delimiter = ',', required = true)]
        steps: Vec<f64>,
        /// Compare with (M^x_{jL})^{1/L} for integer steps.
        #[arg(long)]
        check_identity: bool,
    },
    /// Stability under extension, pseudo-(mg) and (M_L) consequences.
    Stability {
        #[command(flatten)]
        input: MatrixInput,
        /// Extension parameters tested.
        #[arg(long = "l", value_delimiter = ',')]
        ls: Vec<f64>,
    },
    /// Relations between two matrices.
    Compare {
        #[command(flatten)]
        input: MatrixInput,
        /// Matrix descriptor of the right-hand side.
        #[arg(long)]
        with: String,
        /// One relation; all when omitted.
        #[arg(long)]
        relation: Option<String>,
    },
    /// Cross-check of sequence and weight conditions through the matrices they generate.
    Dossier(SingleInput),
}

#[derive(Debug, Clone, Subcommand, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum QuasiCmd {
    /// (nq) of a sequence, or of a matrix in one or both senses.
    Verdict {
        #[arg(long, conflicts_with_all = ["gevrey", "matrix", "rows"])]
        seq: Option<String>,
        #[arg(long, value_delimiter = ',')]
        gevrey: Option<Vec<f64>>,
        #[arg(long)]
        matrix: Option<String>,
        #[arg(long)]
        rows: Option<String>,
        #[arg(long, value_enum)]
        sense: Option<SenseArg>,
    },
    /// Non-quasianalytic minorant N of a quasianalytic matrix.
    Construct(MatrixInput),
    /// Log-convex L between N and M.
    Sandwich {
        /// Matrix descriptor of N.
        #[arg(long)]
        lower: String,
        /// Matrix descriptor of M.
        #[arg(long)]
        upper: String,
    },
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct FunctionInput {
    /// Function descriptor: bump, indicator, zero, bump:d,<seq> or file:path.
    #[arg(long, default_value = "bump")]
    pub function: String,
    /// Support interval a,b.
    #[arg(long, value_delimiter = ',', default_values_t = [-1.0, 1.0], allow_hyphen_values = true)]
    pub support: Vec<f64>,
    /// Grid size, a power of two.
    #[arg(long, default_value_t = DEFAULT_POINTS)]
    pub points: usize,
}

#[derive(Debug, Clone, Subcommand, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum FourierCmd {
    /// Sample a function; exports x,value.
    Sample(FunctionInput),
    /// |f̂| and its decay; exports xi,modulus.
    Spectrum {
        #[command(flatten)]
        f: FunctionInput,
        /// Frequency window lo,hi for the decay fit.
        #[arg(long, value_delimiter = ',', default_values_t = [1e2, 1e4])]
        fit: Vec<f64>,
    },
    /// Bracket of ∫|f̂| e^{h ω_M}.
    Norm {
        #[command(flatten)]
        f: FunctionInput,
        #[arg(long)]
        seq: String,
        #[arg(long, default_value_t = 1.0)]
        h: f64,
    },
    /// sup |f^{(k)}|/(h^k M_k), or against Ω^l of a weight.
    Seminorm {
        #[command(flatten)]
        f: FunctionInput,
        #[command(flatten)]
        input: SingleInput,
        #[arg(long, default_value_t = 1.0)]
        h: f64,
        /// Ω^l parameter for --weight.
        #[arg(long, default_value_t = 1.0)]
        l: f64,
        #[arg(long, default_value_t = 10)]
        k_max: usize,
    },
    /// Pointwise lemmas: `i` against a sequence, `ii` against a matrix row.
    Lemma {
        #[arg(value_parser = ["i", "ii"])]
        which: String,
        #[command(flatten)]
        f: FunctionInput,
        #[arg(long)]
        seq: Option<String>,
        #[arg(long, value_delimiter = ',')]
        gevrey: Option<Vec<f64>>,
        #[arg(long)]
        matrix: Option<String>,
        /// Row label x for `ii`.
        #[arg(long, default_value_t = 1.0)]
        row: f64,
        #[arg(long, default_value_t = 1.0)]
        h: f64,
        #[arg(long, default_value_t = 10)]
        k_max: usize,
    },
    /// Bump adapted to a sequence with its derivative bound check.
    Bump {
        #[arg(long)]
        seq: String,
        #[arg(long, default_value_t = 30)]
        depth: usize,
        #[arg(long, value_delimiter = ',', default_values_t = [-1.0, 1.0], allow_hyphen_values = true)]
        support: Vec<f64>,
        #[arg(long, default_value_t = DEFAULT_POINTS)]
        points: usize,
        #[arg(long, default_value_t = 8)]
        k_max: usize,
    },
    /// Derivative, weight and Fourier memberships side by side.
    Harness {
        #[command(flatten)]
        input: MatrixInput,
        #[arg(long, default_value_t = 30)]
        bump_depth: usize,
        #[arg(long, value_enum)]
        sense: Option<SenseArg>,
        #[arg(long, default_value_t = DEFAULT_POINTS)]
        points: usize,
    },
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct PropsArgs {
    /// Samples per sweep.
    #[arg(long, default_value_t = 1000)]
    pub count: usize,
}

/// A grid-valued result written as CSV.
#[derive(Debug, Clone, PartialEq)]
pub struct Export {
    pub name: &'static str,
    pub csv: String,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Outcome {
    pub command: String,
    pub status: String,
    pub result: Value,
    pub exports: Vec<Export>,
}

impl Outcome {
    fn new(command: &str, status: impl ToString, result: impl Serialize) -> Result<Self> {
        Ok(Outcome {
            command: command.into(),
            status: status.to_string(),
            result: serde_json::to_value(result)?,
            exports: Vec::new(),
        })
    }

    fn export(mut self, name: &'static str, csv: String) -> Self {
        self.exports.push(Export { name, csv });
        self
    }
}

/// The report text and the extra files to write.
pub fn render(cli: &Cli, outcome: &Outcome) -> Result<(String, Vec<(PathBuf, String)>)> {
    match cli.format {
        Format::Json => {
            let report = Report::new(&outcome.command, serde_json::to_value(cli)?, &outcome.status, &outcome.result);
            let side = match &cli.out {
                Some(out) => outcome
                    .exports
                    .iter()
                    .map(|e| (export_path(out, e.name), e.csv.clone()))
                    .collect(),
                None => Vec::new(),
            };
            Ok((to_json(&report)? + "\n", side))
        }
        Format::Csv => {
            let text = match outcome.exports.first() {
                Some(e) => e.csv.clone(),
                None => verdict_table(&outcome.result)?,
            };
            Ok((text, Vec::new()))
        }
    }
}

/// `dir/g2.json` with export `logM` becomes `dir/g2.logM.csv`.
pub fn export_path(out: &Path, name: &str) -> PathBuf {
    let stem = out.file_stem().and_then(|s| s.to_str()).unwrap_or("report");
    out.with_file_name(format!("{stem}.{name}.csv"))
}

/// `condition,status,reason` for every verdict found in the result.
fn verdict_table(result: &Value) -> Result<String> {
    fn walk(v: &Value, out: &mut Vec<[String; 3]>) {
        match v {
            Value::Object(o) if o.contains_key("condition") && o.contains_key("status") => {
                let s = |k: &str| o.get(k).and_then(Value::as_str).unwrap_or("").to_string();
                out.push([s("condition"), s("status"), s("reason")]);
            }
            Value::Object(o) => o.values().for_each(|x| walk(x, out)),
            Value::Array(a) => a.iter().for_each(|x| walk(x, out)),
            _ => {}
        }
    }
    let mut rows = Vec::new();
    walk(result, &mut rows);
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(["condition", "status", "reason"])?;
    for r in rows {
        w.write_record(&r)?;
    }
    let bytes = w.into_inner().map_err(|e| Error::Io(e.to_string()))?;
    String::from_utf8(bytes).map_err(|e| Error::Parse(e.to_string()))
}

pub fn run(cli: &Cli) -> Result<Outcome> {
    match &cli.command {
        Command::Analyze(a) => cmd_analyze(cli, a),
        Command::Matrix(m) => cmd_matrix(cli, m),
        Command::Quasi(q) => cmd_quasi(cli, q),
        Command::Fourier(f) => cmd_fourier(cli, f),
        Command::Props(p) => {
            let parts = vec![conjugate_involution(p.count, cli.seed), hull_oracle(p.count, cli.seed)];
            let v = Verdict::conjunction("props", parts);
            Outcome::new("props", v.status, v)
        }
    }
}

fn identity_tol(cli: &Cli) -> f64 {
    cli.tol.unwrap_or(IDENTITY_TOL)
}

fn sequence_csv_export(seq: &LogWeightSequence) -> Result<String> {
    sequence_to_csv(seq)
}

fn omega_csv(w: &WeightFunction, points: usize) -> String {
    let mut out = String::from("t,omega\n");
    for (t, o) in w.grid(points) {
        out.push_str(&format!("{t:.16e},{o:.16e}\n"));
    }
    out
}

fn cmd_analyze(cli: &Cli, a: &AnalyzeArgs) -> Result<Outcome> {
    if let Some(d) = &a.input.seq {
        let seq = parse_sequence(d, cli.pmax)?;
        let verdicts = sequence_dossier(&seq, a.q_max, identity_tol(cli))?;
        let status = Status::all(verdicts.iter().map(|v| v.status));
        let result = json!({ "input": seq.label(), "verdicts": verdicts });
        return Ok(Outcome::new("analyze", status, result)?.export("logM", sequence_csv_export(&seq)?));
    }
    let d = a.input.weight.as_deref().unwrap_or_default();
    let w = parse_weight(d, cli.pmax)?;
    let verdicts = weight_dossier(&w);
    let status = Status::all(verdicts.iter().map(|v| v.status));
    let result = json!({ "input": w.label, "verdicts": verdicts });
    Ok(Outcome::new("analyze", status, result)?.export("omega", omega_csv(&w, a.grid)))
}

/// (ω0)–(ω7), (ω_nq) and the class condition (W).
pub fn weight_dossier(w: &WeightFunction) -> Vec<Verdict> {
    let mut verdicts: Vec<Verdict> = check_omega_conditions(w).into_values().collect();
    verdicts.push(check_w0(w));
    verdicts
}

/// Conditions of one sequence; `tol` bounds the min-convolution identity.
pub fn sequence_dossier(seq: &LogWeightSequence, q_max: usize, tol: f64) -> Result<Vec<Verdict>> {
    let lc = check_log_convex(seq);
    let in_lc = check_in_lc(seq);
    let mut out = vec![check_normalized(seq), lc.clone(), in_lc.clone(), check_moderate_growth(seq)];
    out.push(check_nq(seq));
    out.push(check_root_series(seq));
    out.push(class_nq_verdict(seq)?);
    out.push(check_beta3(seq, q_max)?);
    if lc.is_holds() {
        out.push(check_carleman_consistency(seq)?);
        let (_, dev) = min_convolution_deviation(seq);
        out.push(
            Verdict::new("min_convolution", Status::from_bool(dev <= tol))
                .with("max_deviation", dev)
                .with("tolerance", tol),
        );
    } else {
        for name in ["carleman", "min_convolution"] {
            out.push(Verdict::inconclusive(name, "needs (lc)"));
        }
    }
    out.push(if in_lc.is_holds() {
        check_lemma_assofunc(seq)?
    } else {
        Verdict::inconclusive("lemma_assofunc", "needs membership in LC")
    });
    Ok(out)
}

/// Appends `--labels` to descriptors that leave the label set open.
fn matrix_descriptor(cli: &Cli, text: &str) -> String {
    if cli.labels.is_empty() {
        return text.to_string();
    }
    let list = cli.labels.iter().map(f64::to_string).collect::<Vec<_>>().join(",");
    match text.split_once(':') {
        Some(("omega", w)) if !w.contains('@') => format!("omega:{w}@{list}"),
        None if text == "gevrey" => format!("gevrey:{list}"),
        _ => text.to_string(),
    }
}

fn load_matrix(cli: &Cli, gevrey: Option<&[f64]>, matrix: Option<&str>, rows: Option<&str>) -> Result<WeightMatrix> {
    match (gevrey, matrix, rows) {
        (Some(xs), _, _) => WeightMatrix::gevrey(xs, cli.pmax),
        (_, Some(d), _) => parse_matrix(&matrix_descriptor(cli, d), cli.pmax),
        (_, _, Some(r)) => parse_row_family(r, cli.pmax),
        _ if !cli.labels.is_empty() => WeightMatrix::gevrey(&cli.labels, cli.pmax),
        _ => Err(Error::Parse("a matrix is required (--gevrey, --matrix or --rows)".into())),
    }
}

fn matrix_of(cli: &Cli, m: &MatrixInput) -> Result<WeightMatrix> {
    load_matrix(cli, m.gevrey.as_deref(), m.matrix.as_deref(), m.rows.as_deref())
}

fn matrix_rows_csv(m: &WeightMatrix) -> String {
    let mut out = String::from("row,p,logM\n");
    for r in m.rows() {
        for (p, v) in r.seq.log_values().iter().enumerate() {
            out.push_str(&format!("{},{p},{v:.16e}\n", r.label));
        }
    }
    out
}

fn cmd_matrix(cli: &Cli, cmd: &MatrixCmd) -> Result<Outcome> {
    match cmd {
        MatrixCmd::Conditions(input) => {
            let m = matrix_of(cli, input)?;
            let verdicts = check_all_matrix_conditions(&m);
            let status = Status::all(verdicts.iter().map(|v| v.status));
            Outcome::new("matrix conditions", status, json!({ "matrix": m.name, "verdicts": verdicts }))
        }
        MatrixCmd::Chain {
            input,
            steps,
            check_identity,
        } => {
            let m = matrix_of(cli, input)?;
            let mut chain = MultiIndexChain::new(m);
            for &l in steps {
                chain = multi_index_step(&chain, l)?;
            }
            let mut verdicts = vec![check_omega_stability(&chain)];
            if *check_identity {
                verdicts.push(check_integer_identity_with(&chain, identity_tol(cli)));
            }
            let status = Status::all(verdicts.iter().map(|v| v.status));
            let result = json!({
                "matrix": chain.base.name,
                "steps": chain.steps,
                "domains": chain.domains,
                "verdicts": verdicts,
            });
            Ok(Outcome::new("matrix chain", status, result)?.export("rows", matrix_rows_csv(&chain.current)))
        }
        MatrixCmd::Stability { input, ls } => {
            let m = matrix_of(cli, input)?;
            let ls = if ls.is_empty() { STABILITY_LS.to_vec() } else { ls.clone() };
            let verdicts = vec![
                check_stability_with(&m, &ls),
                check_pseudo_mg(&m),
                check_l_consequences(&m),
                check_br_triangle(&m),
            ];
            let status = Status::all(verdicts.iter().map(|v| v.status));
            Outcome::new("matrix stability", status, json!({ "matrix": m.name, "l": ls, "verdicts": verdicts }))
        }
        MatrixCmd::Compare { input, with, relation } => {
            let m = matrix_of(cli, input)?;
            let n = parse_matrix(&matrix_descriptor(cli, with), cli.pmax)?;
            let kinds = match relation {
                Some(r) => vec![r.parse::<MatrixRelation>()?],
                None => MatrixRelation::ALL.to_vec(),
            };
            let verdicts: Vec<Verdict> = kinds.into_iter().map(|k| relation_matrix(&m, &n, k)).collect();
            let status = Status::all(verdicts.iter().map(|v| v.status));
            Outcome::new(
                "matrix compare",
                status,
                json!({ "left": m.name, "right": n.name, "verdicts": verdicts }),
            )
        }
        MatrixCmd::Dossier(input) => {
            let report_input = match (&input.seq, &input.weight) {
                (Some(d), _) => ReportInput::Sequence(parse_sequence(d, cli.pmax)?),
                (_, Some(d)) => ReportInput::Weight(parse_weight(d, cli.pmax)?),
                _ => return Err(Error::Parse("dossier needs --seq or --weight".into())),
            };
            let report = comparison_report(&report_input)?;
            if !report.consistent {
                return Err(Error::Consistency(format!(
                    "{}: a stated equivalence came out with different sides",
                    report.input
                )));
            }
            Outcome::new("matrix dossier", report.status, report)
        }
    }
}

fn cmd_quasi(cli: &Cli, cmd: &QuasiCmd) -> Result<Outcome> {
    match cmd {
        QuasiCmd::Verdict {
            seq,
            gevrey,
            matrix,
            rows,
            sense,
        } => {
            if let Some(d) = seq {
                let s = parse_sequence(d, cli.pmax)?;
                let mut verdicts = vec![class_nq_verdict(&s)?];
                if verdicts[0].is_holds() {
                    verdicts.push(small_terms_diagnostic(&s)?);
                }
                return Outcome::new("quasi verdict", verdicts[0].status, json!({ "input": s.label(), "verdicts": verdicts }));
            }
            let m = load_matrix(cli, gevrey.as_deref(), matrix.as_deref(), rows.as_deref())?;
            let verdicts = senses(*sense)
                .into_iter()
                .map(|s| matrix_nq_verdict(&m, s))
                .collect::<Result<Vec<_>>>()?;
            let status = Status::all(verdicts.iter().map(|v| v.status));
            Outcome::new("quasi verdict", status, json!({ "matrix": m.name, "verdicts": verdicts }))
        }
        QuasiCmd::Construct(input) => {
            let m = matrix_of(cli, input)?;
            let trace = construct_minorant(&m)?;
            let status = if trace.exhausted_at.is_some() {
                "partial".to_string()
            } else {
                Status::from_bool(trace.all_checks_hold()).to_string()
            };
            let csv = trace.n_csv();
            Ok(Outcome::new("quasi construct", status, trace)?.export("N", csv))
        }
        QuasiCmd::Sandwich { lower, upper } => {
            let n = parse_matrix(&matrix_descriptor(cli, lower), cli.pmax)?;
            let m = parse_matrix(&matrix_descriptor(cli, upper), cli.pmax)?;
            let s = sandwich_construct(&n, &m)?;
            let status = Status::all(s.checks.iter().map(|v| v.status));
            let csv = sequence_to_csv(&s.l)?;
            Ok(Outcome::new("quasi sandwich", status, s)?.export("L", csv))
        }
    }
}

fn support_of(v: &[f64]) -> Result<CompactBox> {
    match v {
        [a, b] => CompactBox::interval(*a, *b),
        _ => Err(Error::Parse("support needs two numbers a,b".into())),
    }
}

fn function_of(cli: &Cli, f: &FunctionInput) -> Result<SampledFunction> {
    parse_function(&f.function, support_of(&f.support)?, f.points, cli.pmax)
}

fn spectrum_csv(f: &SampledFunction) -> String {
    let s = spectrum(f);
    let mut idx: Vec<usize> = (0..s.len()).collect();
    idx.sort_by(|&a, &b| s.xi[a].total_cmp(&s.xi[b]));
    let mut out = String::from("xi,modulus\n");
    for k in idx {
        out.push_str(&format!("{:.16e},{:.16e}\n", s.xi[k], s.modulus[k]));
    }
    out
}

fn cmd_fourier(cli: &Cli, cmd: &FourierCmd) -> Result<Outcome> {
    match cmd {
        FourierCmd::Sample(fi) => {
            let f = function_of(cli, fi)?;
            let result = json!({
                "label": f.label,
                "points": f.len(),
                "x0": f.x0(),
                "dx": f.dx(),
                "l2_norm_sq": f.l2_norm_sq(),
            });
            Ok(Outcome::new("fourier sample", Status::Holds, result)?.export("function", f.to_csv()?))
        }
        FourierCmd::Spectrum { f: fi, fit } => {
            let f = function_of(cli, fi)?;
            let s = spectrum(&f);
            let (lo, hi) = match fit.as_slice() {
                [lo, hi] => (*lo, *hi),
                _ => return Err(Error::Parse("fit needs two numbers lo,hi".into())),
            };
            let (decay, note) = match s.fit_decay(lo, hi) {
                Ok(d) => (Some(d), None),
                Err(e) => (None, Some(e.to_string())),
            };
            let result = json!({
                "label": f.label,
                "band_limit": s.band_limit,
                "nyquist": s.nyquist(),
                "max_modulus": s.max_modulus,
                "unresolved": s.is_unresolved(),
                "parseval_deviation": s.parseval_deviation(&f),
                "decay_fit": decay,
                "decay_fit_note": note,
            });
            let status = if decay.is_some() { Status::Holds } else { Status::Inconclusive };
            Ok(Outcome::new("fourier spectrum", status, result)?.export("spectrum", spectrum_csv(&f)))
        }
        FourierCmd::Norm { f: fi, seq, h } => {
            let f = function_of(cli, fi)?;
            let seq = parse_sequence(seq, cli.pmax)?;
            let n = fourier_norm(&f, &seq, *h)?;
            Outcome::new("fourier norm", Status::Holds, json!({ "function": f.label, "seq": seq.label(), "h": h, "norm": n }))
        }
        FourierCmd::Seminorm {
            f: fi,
            input,
            h,
            l,
            k_max,
        } => {
            let f = function_of(cli, fi)?;
            let semi = match (&input.seq, &input.weight) {
                (Some(d), _) => seminorm_derivative(&f, &parse_sequence(d, cli.pmax)?, f.support(), *h, *k_max)?,
                (_, Some(d)) => seminorm_weightfn(&f, &parse_weight(d, cli.pmax)?, f.support(), *l, *k_max)?,
                _ => return Err(Error::Parse("seminorm needs --seq or --weight".into())),
            };
            Outcome::new("fourier seminorm", Status::Holds, json!({ "function": f.label, "seminorm": semi }))
        }
        FourierCmd::Lemma {
            which,
            f: fi,
            seq,
            gevrey,
            matrix,
            row,
            h,
            k_max,
        } => {
            let f = function_of(cli, fi)?;
            let v = if which == "i" {
                let d = seq.as_deref().ok_or_else(|| Error::Parse("lemma i needs --seq".into()))?;
                check_lemma53_i(&f, &parse_sequence(d, cli.pmax)?, *h, *k_max)?
            } else {
                let m = load_matrix(cli, gevrey.as_deref(), matrix.as_deref(), None)?;
                check_lemma53_ii(&f, &m, &RowLabel::base(*row), *h, *k_max)?
            };
            Outcome::new("fourier lemma", v.status, json!({ "function": f.label, "verdict": v }))
        }
        FourierCmd::Bump {
            seq,
            depth,
            support,
            points,
            k_max,
        } => {
            let s = parse_sequence(seq, cli.pmax)?;
            let f = crate::fourier::bump_builder(&support_of(support)?, &s, *depth, *points)?;
            let v = check_bump_derivatives(&f, &s, *k_max)?;
            Ok(Outcome::new("fourier bump", v.status, json!({ "function": f.label, "verdict": v }))?
                .export("function", f.to_csv()?))
        }
        FourierCmd::Harness {
            input,
            bump_depth,
            sense,
            points,
        } => {
            let m = matrix_of(cli, input)?;
            let battery = standard_battery(*bump_depth, *points)?;
            let cfg = HarnessConfig::default();
            let reports = senses(*sense)
                .into_iter()
                .map(|s| theorem51_harness(&m, s, &battery, &cfg))
                .collect::<Result<Vec<_>>>()?;
            let disagreements: usize = reports.iter().map(|r| r.disagreements).sum();
            let checks = Status::all(reports.iter().flat_map(|r| r.checks.iter().map(|c| c.status)));
            let status = Status::from_bool(disagreements == 0).and(checks);
            Outcome::new("fourier harness", status, json!({ "reports": reports }))
        }
    }
}
