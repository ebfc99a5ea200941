//! Acceptance criteria, one PASS/FAIL line each. Exits non-zero when any
//! criterion fails.

use std::f64::consts::PI;
use std::process::ExitCode;
use std::time::{Duration, Instant};

use wcalc::catalogue;
use wcalc::descriptor::parse_sequence;
use wcalc::fourier::domain::DEFAULT_POINTS;
use wcalc::fourier::{check_lemma53_i, spectrum, standard_battery, theorem51_harness, CompactBox, HarnessConfig, SampledFunction};
use wcalc::matrix::{
    check_integer_identity, check_matrix_condition, check_pseudo_mg, check_stability_theorem, multi_index_step,
    MatrixCondition, MultiIndexChain, Sense, WeightMatrix,
};
use wcalc::matrix::theorems::min_convolution_deviation;
use wcalc::props::{conjugate_involution, hull_oracle};
use wcalc::quasi::{class_nq_verdict, construct_minorant, matrix_nq_verdict};
use wcalc::seq::conditions::check_nq;
use wcalc::seq::LogWeightSequence;
use wcalc::weight::conditions::check_omega_conditions;
use wcalc::weight::{associated_function, sequence_from_weight, WeightFunction};
use wcalc::{Error, Status, Verdict};

const SEED: u64 = 20_241_016;

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: impl Into<String>) -> Outcome {
    Outcome {
        pass,
        detail: detail.into(),
    }
}

type Check = fn() -> Result<Outcome, Error>;

fn main() -> ExitCode {
    let criteria: [(u32, &str, Option<Duration>, Check); 13] = [
        (1, "conjugate involution", Some(Duration::from_secs(5)), c1_conjugate),
        (2, "hull vs pairwise oracle", Some(Duration::from_secs(5)), c2_hull),
        (3, "reconstruction N^1 = M", None, c3_reconstruction),
        (4, "integer-l identity", None, c4_integer_identity),
        (5, "omega ~ omega of Omega^l", Some(Duration::from_secs(1)), c5_omega_sim),
        (6, "nq verdicts and zeta(2) bracket", None, c6_nq),
        (7, "matrix nq", None, c7_matrix_nq),
        (8, "route agreement on the catalogue", None, c8_routes),
        (9, "minorant construction", Some(Duration::from_secs(30)), c9_minorant),
        (10, "stability of the Gevrey matrix", None, c10_stability),
        (11, "pseudo-mg agreement and min-convolution", None, c11_pseudo_mg),
        (12, "Fourier battery", Some(Duration::from_secs(60)), c12_fourier),
        (13, "powerlog(2) fails only omega6", None, c13_powerlog),
    ];
    let mut failed = 0;
    for (id, name, limit, check) in criteria {
        let start = Instant::now();
        let result = check();
        let elapsed = start.elapsed();
        let (pass, detail) = match result {
            Ok(o) => (o.pass, o.detail),
            Err(e) => (false, format!("error: {e}")),
        };
        let in_time = limit.map_or(true, |l| elapsed <= l);
        let pass = pass && in_time;
        let budget = match limit {
            Some(l) if !in_time => format!(", over the {:.0} s budget", l.as_secs_f64()),
            Some(l) => format!(" of {:.0} s", l.as_secs_f64()),
            None => String::new(),
        };
        println!(
            "{} {id:>2} {name}: {detail} [{:.2} s{budget}]",
            if pass { "PASS" } else { "FAIL" },
            elapsed.as_secs_f64()
        );
        if !pass {
            failed += 1;
        }
    }
    println!("acceptance: {} passed, {failed} failed", criteria.len() - failed);
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}

fn c1_conjugate() -> Result<Outcome, Error> {
    let v = conjugate_involution(1000, SEED);
    let failures = v.witness.get("failures").and_then(|x| x.as_u64()).unwrap_or(u64::MAX);
    Ok(outcome(v.is_holds(), format!("1000 functions, {failures} mismatches at tol 1e-12")))
}

fn c2_hull() -> Result<Outcome, Error> {
    let v = hull_oracle(500, SEED);
    let dev = v.witness_f64("max_deviation").unwrap_or(f64::INFINITY);
    Ok(outcome(v.is_holds() && dev <= 1e-9, format!("500 sequences, max deviation {dev:.2e}")))
}

fn factorial_powers(pmax: usize) -> Result<Vec<LogWeightSequence>, Error> {
    [1.0, 2.0, 3.0].iter().map(|&s| LogWeightSequence::gevrey(s, pmax)).collect()
}

fn c3_reconstruction() -> Result<Outcome, Error> {
    let mut worst: f64 = 0.0;
    for m in factorial_powers(100)? {
        let n1 = sequence_from_weight(&associated_function(&m)?, 1.0, 100)?;
        for p in 0..=100 {
            worst = worst.max((n1.log_values()[p] - m.log_values()[p]).abs());
        }
    }
    Ok(outcome(worst <= 1e-9, format!("p!, p!^2, p!^3 at P = 100, max log deviation {worst:.2e}")))
}

fn c4_integer_identity() -> Result<Outcome, Error> {
    let rows = factorial_powers(100)?
        .into_iter()
        .enumerate()
        .map(|(i, s)| (wcalc::matrix::RowLabel::base((i + 1) as f64), s))
        .collect();
    let base = WeightMatrix::new("p!^s, s = 1,2,3", rows)?;
    let mut pass = true;
    let mut notes = Vec::new();
    for l in [2.0, 3.0] {
        let chain = multi_index_step(&MultiIndexChain::new(base.clone()), l)?;
        let v = check_integer_identity(&chain);
        let compared = v.witness.get("compared").and_then(|x| x.as_u64()).unwrap_or(0);
        // every j with jl <= 100, in each of the three rows
        let needed = 3 * (100 / l as u64 + 1);
        let dev = v.witness_f64("max_log_deviation").unwrap_or(f64::INFINITY);
        pass &= v.is_holds() && dev <= 1e-9 && compared >= needed;
        notes.push(format!("l = {l}: {compared}/{needed} terms, max {dev:.2e}"));
    }
    Ok(outcome(pass, notes.join("; ")))
}

fn c5_omega_sim() -> Result<Outcome, Error> {
    let w = associated_function(&LogWeightSequence::gevrey(2.0, 200)?)?;
    let top = 1e6f64;
    let mut pass = true;
    let mut notes = Vec::new();
    for l in [0.5, 2.0] {
        let wl = associated_function(&sequence_from_weight(&w, l, 200)?)?;
        let reach = w.valid_to.min(wl.valid_to);
        if reach < top.ln() {
            return Err(Error::DomainExceeded {
                requested: top.ln(),
                limit: reach,
            });
        }
        let (lo, hi) = ratio_range(&w, &wl, top, 2000);
        pass &= lo >= 0.125 && hi <= 8.0;
        notes.push(format!("l = {l}: ratio in [{lo:.3}, {hi:.3}]"));
    }
    Ok(outcome(pass, notes.join("; ")))
}

/// (min, max) of ω_l/ω on a geometric grid over [e, top].
fn ratio_range(w: &WeightFunction, wl: &WeightFunction, top: f64, points: usize) -> (f64, f64) {
    (0..points)
        .map(|i| (1.0 + (top.ln() - 1.0) * i as f64 / (points - 1) as f64).exp())
        .map(|t| wl.omega(t) / w.omega(t))
        .fold((f64::INFINITY, 0.0), |(lo, hi), r| (lo.min(r), hi.max(r)))
}

fn c6_nq() -> Result<Outcome, Error> {
    let mut pass = true;
    let mut notes = Vec::new();
    for s in [1.0, 1.5, 2.0, 3.0] {
        let seq = LogWeightSequence::gevrey(s, 200)?;
        let v = check_nq(&seq);
        let class = class_nq_verdict(&seq)?;
        let expected = Status::from_bool(s > 1.0);
        pass &= v.status == expected && class.status == expected;
        notes.push(format!("s = {s} {}", v.status));
    }
    let v = check_nq(&LogWeightSequence::gevrey(2.0, 200)?);
    let (lo, hi) = (
        v.witness_f64("sum_low").unwrap_or(f64::NAN),
        v.witness_f64("sum_high").unwrap_or(f64::NAN),
    );
    let z2 = PI * PI / 6.0;
    pass &= lo <= z2 && z2 <= hi && hi - lo <= 0.02;
    notes.push(format!("s = 2 bracket [{lo:.6}, {hi:.6}] width {:.2e}", hi - lo));
    Ok(outcome(pass, notes.join("; ")))
}

fn c7_matrix_nq() -> Result<Outcome, Error> {
    let pair = WeightMatrix::new(
        "p!, p!^2",
        vec![
            (wcalc::matrix::RowLabel::base(1.0), LogWeightSequence::gevrey(1.0, 200)?),
            (wcalc::matrix::RowLabel::base(2.0), LogWeightSequence::gevrey(2.0, 200)?),
        ],
    )?;
    let gevrey = WeightMatrix::gevrey(&[1.0, 2.0, 3.0], 200)?;
    let got = [
        matrix_nq_verdict(&pair, Sense::Roumieu)?.status,
        matrix_nq_verdict(&pair, Sense::Beurling)?.status,
        matrix_nq_verdict(&gevrey, Sense::Roumieu)?.status,
        matrix_nq_verdict(&gevrey, Sense::Beurling)?.status,
    ];
    let want = [Status::Holds, Status::Fails, Status::Holds, Status::Holds];
    Ok(outcome(
        got == want,
        format!(
            "{{p!, p!^2}}: R {} B {}; Gevrey: R {} B {}",
            got[0], got[1], got[2], got[3]
        ),
    ))
}

fn c8_routes() -> Result<Outcome, Error> {
    let mut families = 0;
    let mut disagreements = Vec::new();
    let mut seqs = catalogue::sequences(200)?;
    for m in catalogue::matrices(200)? {
        seqs.extend(m.rows().iter().map(|r| r.seq.clone()));
    }
    for seq in &seqs {
        families += 1;
        match class_nq_verdict(seq) {
            Err(Error::RoutesDisagree { .. }) => disagreements.push(seq.label().to_string()),
            Err(e) => return Err(e),
            Ok(_) => {}
        }
    }
    let distinct = catalogue::SEQUENCE_FAMILIES.len();
    Ok(outcome(
        disagreements.is_empty() && distinct >= 20,
        format!(
            "{distinct} sequence families plus matrix rows, {families} verdicts, {} disagreements",
            disagreements.len()
        ),
    ))
}

fn c9_minorant() -> Result<Outcome, Error> {
    let m = WeightMatrix::gevrey(&[1.0, 0.5, 1.0 / 3.0, 0.25], 5000)?;
    let trace = construct_minorant(&m)?;
    let named = |n: &str| trace.checks.iter().find(|c| c.condition == n).map(|c| c.status);
    let pass = trace.completed >= 3
        && trace.tail_sum_bound <= 1.0
        && named("monotone_roots") == Some(Status::Holds)
        && named("domination") == Some(Status::Holds)
        && trace.all_checks_hold();
    Ok(outcome(
        pass,
        format!(
            "completed q = {}, a = {:?}, tail_sum_bound {:.3}, checks {}",
            trace.completed,
            trace.a,
            trace.tail_sum_bound,
            trace
                .checks
                .iter()
                .map(|c| format!("{} {}", c.condition, c.status))
                .collect::<Vec<_>>()
                .join(", ")
        ),
    ))
}

fn c10_stability() -> Result<Outcome, Error> {
    let m = WeightMatrix::gevrey(&[1.0, 2.0, 3.0], 200)?;
    let mg_r = check_matrix_condition(&m, MatrixCondition::Mg(Sense::Roumieu));
    let mg_b = check_matrix_condition(&m, MatrixCondition::Mg(Sense::Beurling));
    let st = check_stability_theorem(&m);
    let all_parts_hold = all_hold(&st);
    Ok(outcome(
        mg_r.is_holds() && mg_b.is_holds() && st.is_holds() && all_parts_hold,
        format!(
            "mg R {} B {}; stability {} ({} nested verdicts)",
            mg_r.status,
            mg_b.status,
            st.status,
            count(&st)
        ),
    ))
}

fn all_hold(v: &Verdict) -> bool {
    v.is_holds() && v.parts.iter().all(all_hold)
}

fn count(v: &Verdict) -> usize {
    1 + v.parts.iter().map(count).sum::<usize>()
}

fn c11_pseudo_mg() -> Result<Outcome, Error> {
    let mut decided = 0;
    let mut disagreements = Vec::new();
    for m in catalogue::matrices(200)? {
        let v = check_pseudo_mg(&m);
        for p in v.parts.iter().filter(|p| p.condition.starts_with("agrees_with_mg")) {
            match p.status {
                Status::Holds => decided += 1,
                Status::Fails => disagreements.push(format!("{} {}", m.name, p.condition)),
                Status::Inconclusive => {}
            }
        }
    }
    let (_, dev) = min_convolution_deviation(&parse_sequence("gevrey:1", 100)?);
    Ok(outcome(
        disagreements.is_empty() && decided > 0 && dev <= 1e-9,
        format!(
            "{decided} decided comparisons, {} disagreements; min-convolution deviation {dev:.2e} for p!, P = 100",
            disagreements.len()
        ),
    ))
}

fn c12_fourier() -> Result<Outcome, Error> {
    let support = CompactBox::interval(-1.0, 1.0)?;
    let bump = SampledFunction::standard_bump(support, DEFAULT_POINTS)?;
    let fit = spectrum(&bump).fit_decay(1e2, 1e4)?;
    let a = (0.4..=0.6).contains(&fit.exponent);
    let lemma = check_lemma53_i(&bump, &LogWeightSequence::gevrey(2.0, 200)?, 0.1, 10)?;
    let b = lemma.is_holds();
    let m = WeightMatrix::gevrey(&[1.0, 2.0, 3.0], 200)?;
    let battery = standard_battery(30, DEFAULT_POINTS)?;
    let bumps = battery.iter().filter(|i| !i.control).count();
    let controls = battery.len() - bumps;
    let mut c = bumps >= 5 && controls >= 2;
    let mut notes = Vec::new();
    for sense in [Sense::Roumieu, Sense::Beurling] {
        let r = theorem51_harness(&m, sense, &battery, &HarnessConfig::default())?;
        c &= r.disagreements == 0 && r.agreements == battery.len();
        notes.push(format!(
            "{sense} {}/{} agree, {} disagree, {} inconclusive",
            r.agreements,
            battery.len(),
            r.disagreements,
            r.inconclusive
        ));
    }
    Ok(outcome(
        a && b && c,
        format!(
            "(a) exponent {:.3} over {} points; (b) lemma ratio {:.3e} {}; (c) {bumps} bumps + {controls} controls: {}",
            fit.exponent,
            fit.points,
            lemma.witness_f64("ratio").unwrap_or(f64::NAN),
            lemma.status,
            notes.join(", ")
        ),
    ))
}

fn c13_powerlog() -> Result<Outcome, Error> {
    let verdicts = check_omega_conditions(&WeightFunction::power_log(2.0)?);
    let expected = |name: &str| if name == "omega6" { Status::Fails } else { Status::Holds };
    let wrong: Vec<String> = verdicts
        .iter()
        .filter(|(k, v)| v.status != expected(k))
        .map(|(k, v)| format!("{k} {}", v.status))
        .collect();
    let names = ["omega0", "omega1", "omega2", "omega3", "omega4", "omega5", "omega6", "omega7", "omega_nq"];
    let complete = names.iter().all(|n| verdicts.contains_key(*n));
    Ok(outcome(
        wrong.is_empty() && complete,
        if wrong.is_empty() {
            format!("{} conditions as expected, omega6 fails", verdicts.len())
        } else {
            format!("unexpected: {}", wrong.join(", "))
        },
    ))
}
