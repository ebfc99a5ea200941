//! Text descriptors for sequences, weight functions and matrices.
//!
//! The inline grammar (see `docs/descriptors.md`) is `family:args`, a JSON
//! object, or `file:path` pointing to a CSV or JSON file.

use std::path::Path;

use serde_json::{Map, Value};

use crate::error::{Error, Result};
use crate::fourier::{bump_builder, CompactBox, SampledFunction};
use crate::matrix::{RowLabel, WeightMatrix};
use crate::seq::{LogWeightSequence, TailLaw};
use crate::weight::{associated_function, ConvexPL, WeightFunction};

fn parse_err(msg: impl Into<String>) -> Error {
    Error::Parse(msg.into())
}

fn numbers(args: &str) -> Result<Vec<f64>> {
    if args.trim().is_empty() {
        return Ok(Vec::new());
    }
    args.split(',')
        .map(|a| a.trim().parse::<f64>().map_err(|e| parse_err(format!("'{a}': {e}"))))
        .collect()
}

fn exactly<const N: usize>(family: &str, args: &str) -> Result<[f64; N]> {
    let v = numbers(args)?;
    v.try_into()
        .map_err(|v: Vec<f64>| parse_err(format!("{family} takes {N} numbers, got {}", v.len())))
}

/// Reads a file named by a `file:` descriptor.
fn read(path: &str) -> Result<String> {
    std::fs::read_to_string(path).map_err(|e| Error::Io(format!("{path}: {e}")))
}

fn is_json(path: &str) -> bool {
    Path::new(path).extension().is_some_and(|e| e.eq_ignore_ascii_case("json"))
}

/// Splits `a|b` at the first top-level bar.
fn split_pair<'a>(family: &str, args: &'a str) -> Result<(&'a str, &'a str)> {
    args.split_once('|')
        .ok_or_else(|| parse_err(format!("{family} needs two descriptors separated by '|'")))
}

fn law_sequence(label: String, law: TailLaw, pmax: usize) -> Result<LogWeightSequence> {
    LogWeightSequence::from_law(label, law, pmax)
}

/// The law of a sequence descriptor, for families that have one.
fn law_of(text: &str) -> Result<TailLaw> {
    let seq = parse_sequence(text, 2)?;
    seq.law()
        .cloned()
        .ok_or_else(|| parse_err(format!("'{text}' has no tail law to combine")))
}

/// A sequence from `family:args`, JSON, or `file:path` (CSV `p,logM` or JSON).
pub fn parse_sequence(text: &str, pmax: usize) -> Result<LogWeightSequence> {
    let text = text.trim();
    if text.starts_with('{') {
        return sequence_from_json(&serde_json::from_str(text)?, pmax);
    }
    let (family, args) = text.split_once(':').unwrap_or((text, ""));
    let label = text.to_string();
    match family {
        "file" => {
            let body = read(args)?;
            if is_json(args) {
                sequence_from_json(&serde_json::from_str(&body)?, pmax)
            } else {
                sequence_from_csv(args, &body)
            }
        }
        "gevrey" => {
            let [s] = exactly(family, args)?;
            LogWeightSequence::gevrey(s, pmax)
        }
        "factorial_power" => {
            let [s, a] = exactly(family, args)?;
            LogWeightSequence::factorial_power(s, a, pmax)
        }
        "power_exp" => {
            let [coef, exponent] = exactly(family, args)?;
            law_sequence(label, TailLaw::PowerExp { coef, exponent }, pmax)
        }
        "entropy_linear" => {
            let [p_log_p, linear, constant, threshold] = exactly(family, args)?;
            let law = TailLaw::EntropyLinear {
                p_log_p,
                linear,
                constant,
                threshold,
            };
            law_sequence(label, law, pmax)
        }
        "rescaled" => {
            let (l, base) = args
                .split_once(',')
                .ok_or_else(|| parse_err("rescaled needs 'l,descriptor'"))?;
            let [l] = exactly(family, l)?;
            law_sequence(label, law_of(base)?.rescaled(l), pmax)
        }
        "mean" => {
            let (a, b) = split_pair(family, args)?;
            law_sequence(label, TailLaw::mean(law_of(a)?, law_of(b)?), pmax)
        }
        "truncated" => Ok(parse_sequence(args, pmax)?.without_tail().with_label(label)),
        "values" => LogWeightSequence::prefix_only(label, numbers(args)?),
        _ => Err(parse_err(format!("unknown sequence family '{family}'"))),
    }
}

fn field(obj: &Map<String, Value>, key: &str) -> Result<f64> {
    obj.get(key)
        .and_then(Value::as_f64)
        .ok_or_else(|| parse_err(format!("missing number '{key}'")))
}

fn law_from_json(obj: &Map<String, Value>) -> Result<TailLaw> {
    let family = obj
        .get("family")
        .and_then(Value::as_str)
        .ok_or_else(|| parse_err("missing 'family'"))?;
    let nested = |key: &str| -> Result<TailLaw> {
        obj.get(key)
            .and_then(Value::as_object)
            .ok_or_else(|| parse_err(format!("missing object '{key}'")))
            .and_then(law_from_json)
    };
    Ok(match family {
        "gevrey" => TailLaw::gevrey(field(obj, "s")?),
        "factorial_power" => TailLaw::FactorialPower {
            s: field(obj, "s")?,
            a: field(obj, "a")?,
        },
        "power_exp" => TailLaw::PowerExp {
            coef: field(obj, "coef")?,
            exponent: field(obj, "exponent")?,
        },
        "entropy_linear" => TailLaw::EntropyLinear {
            p_log_p: field(obj, "p_log_p")?,
            linear: field(obj, "linear")?,
            constant: field(obj, "constant")?,
            threshold: field(obj, "threshold")?,
        },
        "rescaled" => nested("base")?.rescaled(field(obj, "l")?),
        "mean" => TailLaw::mean(nested("first")?, nested("second")?),
        other => return Err(parse_err(format!("unknown sequence family '{other}'"))),
    })
}

/// `{"family":"gevrey","s":2.0,"pmax":200,"label":"G2"}`, or
/// `{"family":"values","log_values":[...]}` for a prefix-only sequence.
pub fn sequence_from_json(v: &Value, pmax: usize) -> Result<LogWeightSequence> {
    let obj = v.as_object().ok_or_else(|| parse_err("sequence descriptor must be an object"))?;
    let pmax = match obj.get("pmax") {
        Some(p) => p.as_u64().ok_or_else(|| parse_err("pmax must be a non-negative integer"))? as usize,
        None => pmax,
    };
    let label = obj.get("label").and_then(Value::as_str);
    let seq = if obj.get("family").and_then(Value::as_str) == Some("values") {
        let values = obj
            .get("log_values")
            .and_then(Value::as_array)
            .ok_or_else(|| parse_err("values needs 'log_values'"))?
            .iter()
            .map(|x| x.as_f64().ok_or_else(|| parse_err("log_values must be numbers")))
            .collect::<Result<Vec<f64>>>()?;
        LogWeightSequence::prefix_only("values", values)?
    } else {
        let law = law_from_json(obj)?;
        let name = serde_json::to_string(v)?;
        LogWeightSequence::from_law(name, law, pmax)?
    };
    Ok(match label {
        Some(l) => seq.with_label(l),
        None => seq,
    })
}

/// Reads `p,logM` rows; p must run 0, 1, 2, … without gaps.
pub fn sequence_from_csv(label: &str, text: &str) -> Result<LogWeightSequence> {
    let mut r = csv::Reader::from_reader(text.as_bytes());
    let headers = r.headers()?.clone();
    if headers.len() < 2 || headers[0].trim() != "p" || headers[1].trim() != "logM" {
        return Err(parse_err("sequence CSV needs the header 'p,logM'"));
    }
    let mut values = Vec::new();
    for (i, row) in r.records().enumerate() {
        let row = row?;
        let cell = |k: usize| row.get(k).map(str::trim).unwrap_or("");
        let p: usize = cell(0)
            .parse()
            .map_err(|e| parse_err(format!("row {}: p '{}': {e}", i + 1, cell(0))))?;
        if p != i {
            return Err(parse_err(format!("row {}: expected p = {i}, found {p}", i + 1)));
        }
        let v: f64 = cell(1)
            .parse()
            .map_err(|e| parse_err(format!("row {}: logM '{}': {e}", i + 1, cell(1))))?;
        values.push(v);
    }
    LogWeightSequence::prefix_only(label, values)
}

/// `p,logM` rows of the stored prefix.
pub fn sequence_to_csv(seq: &LogWeightSequence) -> Result<String> {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(["p", "logM"])?;
    for (p, v) in seq.log_values().iter().enumerate() {
        w.write_record([p.to_string(), format!("{v:.17e}")])?;
    }
    let bytes = w.into_inner().map_err(|e| Error::Io(e.to_string()))?;
    String::from_utf8(bytes).map_err(|e| parse_err(e.to_string()))
}

/// `powerlog:s`, `rootpower:a,c`, `assoc:<sequence>`, JSON
/// `{"family":"powerlog","s":2}`, or `file:` with a ConvexPL φ in JSON.
pub fn parse_weight(text: &str, pmax: usize) -> Result<WeightFunction> {
    let text = text.trim();
    if text.starts_with('{') {
        let v: Value = serde_json::from_str(text)?;
        let obj = v.as_object().ok_or_else(|| parse_err("weight descriptor must be an object"))?;
        return match obj.get("family").and_then(Value::as_str) {
            Some("powerlog") => WeightFunction::power_log(field(obj, "s")?),
            Some("rootpower") => WeightFunction::root_power(field(obj, "a")?, field(obj, "c")?),
            Some("assoc") => {
                let seq = obj.get("sequence").ok_or_else(|| parse_err("assoc needs 'sequence'"))?;
                associated_function(&sequence_from_json(seq, pmax)?)
            }
            Some(other) => Err(parse_err(format!("unknown weight family '{other}'"))),
            None => {
                let phi: ConvexPL = serde_json::from_value(v.clone())?;
                WeightFunction::explicit("explicit", phi)
            }
        };
    }
    let (family, args) = text.split_once(':').unwrap_or((text, ""));
    match family {
        "powerlog" => {
            let [s] = exactly(family, args)?;
            WeightFunction::power_log(s)
        }
        "rootpower" => {
            let [a, c] = exactly(family, args)?;
            WeightFunction::root_power(a, c)
        }
        "assoc" => associated_function(&parse_sequence(args, pmax)?),
        "file" => {
            let body = read(args)?;
            let phi: ConvexPL = serde_json::from_str(&body)?;
            WeightFunction::explicit(args, phi)
        }
        _ => Err(parse_err(format!("unknown weight family '{family}'"))),
    }
}

/// `gevrey:x1,x2,…`, `omega:<weight>@l1,l2,…`, `rows:<seq>;<seq>;…`,
/// `constant:<seq>`, JSON `{"labels":[…],"rows":{"1":{…},…}}` or `file:` JSON.
pub fn parse_matrix(text: &str, pmax: usize) -> Result<WeightMatrix> {
    let text = text.trim();
    if text.starts_with('{') {
        return matrix_from_json(&serde_json::from_str(text)?, pmax);
    }
    let (family, args) = text.split_once(':').unwrap_or((text, ""));
    match family {
        "gevrey" => WeightMatrix::gevrey(&numbers(args)?, pmax),
        "omega" => {
            let (w, ls) = args
                .rsplit_once('@')
                .ok_or_else(|| parse_err("omega needs '<weight>@l1,l2,…'"))?;
            WeightMatrix::omega(&parse_weight(w, pmax)?, &numbers(ls)?, pmax)
        }
        "rows" => {
            let rows = args
                .split(';')
                .enumerate()
                .map(|(i, d)| Ok((RowLabel::base((i + 1) as f64), parse_sequence(d, pmax)?)))
                .collect::<Result<Vec<_>>>()?;
            WeightMatrix::new(text, rows)
        }
        "constant" => WeightMatrix::constant(parse_sequence(args, pmax)?),
        "file" => matrix_from_json(&serde_json::from_str(&read(args)?)?, pmax),
        _ => Err(parse_err(format!("unknown matrix family '{family}'"))),
    }
}

pub fn matrix_from_json(v: &Value, pmax: usize) -> Result<WeightMatrix> {
    let obj = v.as_object().ok_or_else(|| parse_err("matrix descriptor must be an object"))?;
    let labels = obj
        .get("labels")
        .and_then(Value::as_array)
        .ok_or_else(|| parse_err("matrix needs 'labels'"))?;
    let rows = obj
        .get("rows")
        .and_then(Value::as_object)
        .ok_or_else(|| parse_err("matrix needs 'rows'"))?;
    let mut out = Vec::new();
    for l in labels {
        let x = l.as_f64().ok_or_else(|| parse_err("labels must be numbers"))?;
        let key = l.to_string();
        let row = rows
            .get(&key)
            .ok_or_else(|| parse_err(format!("no row for label {key}")))?;
        let seq = match row {
            Value::String(s) => parse_sequence(s, pmax)?,
            other => sequence_from_json(other, pmax)?,
        };
        out.push((RowLabel::base(x), seq));
    }
    let name = obj.get("name").and_then(Value::as_str).unwrap_or("matrix");
    WeightMatrix::new(name, out)
}

/// `bump`, `indicator`, `zero`, `bump:d,<seq>` (a bump adapted to the
/// sequence, smooth of order d − 1) or `file:path` with `x,value` rows.
pub fn parse_function(text: &str, support: CompactBox, points: usize, pmax: usize) -> Result<SampledFunction> {
    let text = text.trim();
    let (family, args) = text.split_once(':').unwrap_or((text, ""));
    match family {
        "bump" if args.is_empty() => SampledFunction::standard_bump(support, points),
        "bump" => {
            let (d, seq) = args
                .split_once(',')
                .ok_or_else(|| parse_err("bump needs 'd,descriptor'"))?;
            let d = d.trim().parse::<usize>().map_err(|e| parse_err(format!("bump depth '{d}': {e}")))?;
            bump_builder(&support, &parse_sequence(seq, pmax)?, d, points)
        }
        "indicator" => SampledFunction::indicator(support, points),
        "zero" => SampledFunction::zero(support, points),
        "file" => SampledFunction::from_csv(args, &read(args)?, support),
        _ => Err(parse_err(format!("unknown function family '{family}'"))),
    }
}

/// Rows p!^{e(q)} from `expr:q=a..b`, e.g. `1+1/q:q=1..4`; labelled by
/// e(q) − 1 on the Gevrey generator.
pub fn parse_row_family(text: &str, pmax: usize) -> Result<WeightMatrix> {
    let (expr, range) = text
        .rsplit_once(':')
        .ok_or_else(|| parse_err("row family needs 'expr:q=a..b'"))?;
    let (var, bounds) = range
        .split_once('=')
        .ok_or_else(|| parse_err("range needs 'q=a..b'"))?;
    let (a, b) = bounds
        .split_once("..")
        .ok_or_else(|| parse_err("range needs 'a..b'"))?;
    let parse_int = |s: &str| s.trim().parse::<i64>().map_err(|e| parse_err(format!("'{s}': {e}")));
    let (a, b) = (parse_int(a)?, parse_int(b)?);
    if a > b {
        return Err(parse_err(format!("empty range {a}..{b}")));
    }
    let var = var.trim();
    let xs = (a..=b)
        .map(|q| Ok(Expr::new(expr, var, q as f64).eval()? - 1.0))
        .collect::<Result<Vec<f64>>>()?;
    WeightMatrix::gevrey(&xs, pmax)
}

/// Arithmetic over numbers and one variable: + − * / ^ and parentheses.
struct Expr<'a> {
    src: &'a str,
    chars: Vec<char>,
    pos: usize,
    var: &'a str,
    value: f64,
}

impl<'a> Expr<'a> {
    fn new(src: &'a str, var: &'a str, value: f64) -> Self {
        Expr {
            src,
            chars: src.chars().filter(|c| !c.is_whitespace()).collect(),
            pos: 0,
            var,
            value,
        }
    }

    fn eval(mut self) -> Result<f64> {
        let v = self.sum()?;
        if self.pos != self.chars.len() {
            return Err(self.error("trailing input"));
        }
        Ok(v)
    }

    fn error(&self, what: &str) -> Error {
        parse_err(format!("'{}': {what} at position {}", self.src, self.pos))
    }

    fn peek(&self) -> Option<char> {
        self.chars.get(self.pos).copied()
    }

    fn sum(&mut self) -> Result<f64> {
        let mut v = self.product()?;
        while let Some(op @ ('+' | '-')) = self.peek() {
            self.pos += 1;
            let r = self.product()?;
            v = if op == '+' { v + r } else { v - r };
        }
        Ok(v)
    }

    fn product(&mut self) -> Result<f64> {
        let mut v = self.power()?;
        while let Some(op @ ('*' | '/')) = self.peek() {
            self.pos += 1;
            let r = self.power()?;
            v = if op == '*' { v * r } else { v / r };
        }
        Ok(v)
    }

    fn power(&mut self) -> Result<f64> {
        let base = self.atom()?;
        if self.peek() == Some('^') {
            self.pos += 1;
            return Ok(base.powf(self.power()?));
        }
        Ok(base)
    }

    fn atom(&mut self) -> Result<f64> {
        match self.peek() {
            Some('-') => {
                self.pos += 1;
                Ok(-self.atom()?)
            }
            Some('(') => {
                self.pos += 1;
                let v = self.sum()?;
                if self.peek() != Some(')') {
                    return Err(self.error("expected ')'"));
                }
                self.pos += 1;
                Ok(v)
            }
            Some(c) if c.is_ascii_digit() || c == '.' => {
                let start = self.pos;
                while self.peek().is_some_and(|c| c.is_ascii_digit() || c == '.') {
                    self.pos += 1;
                }
                let text: String = self.chars[start..self.pos].iter().collect();
                text.parse().map_err(|_| self.error("bad number"))
            }
            Some(_) => {
                let var: Vec<char> = self.var.chars().collect();
                if self.chars[self.pos..].starts_with(&var) && !var.is_empty() {
                    self.pos += var.len();
                    Ok(self.value)
                } else {
                    Err(self.error("unexpected symbol"))
                }
            }
            None => Err(self.error("unexpected end")),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn inline_and_json_agree() {
        let a = parse_sequence("gevrey:2", 50).unwrap();
        let b = parse_sequence(r#"{"family":"gevrey","s":2.0,"pmax":50,"label":"G2"}"#, 10).unwrap();
        assert_eq!(a.log_values(), b.log_values());
        assert_eq!(b.label(), "G2");
        let m = parse_sequence("mean:gevrey:1|gevrey:3", 50).unwrap();
        for (x, y) in m.log_values().iter().zip(a.log_values()) {
            assert!((x - y).abs() < 1e-9 * y.abs().max(1.0));
        }
        let r = parse_sequence("rescaled:2,gevrey:2", 20).unwrap();
        assert!(r.law().is_some());
        assert!(parse_sequence("truncated:gevrey:2", 20).unwrap().law().is_none());
    }

    #[test]
    fn bad_descriptors() {
        for d in ["gevrey", "gevrey:x", "factorial_power:1", "nope:1", "mean:gevrey:1", "{\"family\":1}"] {
            assert!(matches!(parse_sequence(d, 20), Err(Error::Parse(_))), "{d}");
        }
    }

    #[test]
    fn csv_round_trip_and_order() {
        let g = LogWeightSequence::gevrey(1.5, 30).unwrap();
        let back = sequence_from_csv("g", &sequence_to_csv(&g).unwrap()).unwrap();
        assert_eq!(back.log_values(), g.log_values());
        let shuffled = "p,logM\n0,0\n2,1\n1,0.5\n";
        assert!(matches!(sequence_from_csv("bad", shuffled), Err(Error::Parse(_))));
        assert!(matches!(sequence_from_csv("bad", "q,logM\n0,0\n"), Err(Error::Parse(_))));
    }

    #[test]
    fn weights_and_matrices() {
        assert!(parse_weight("powerlog:2", 100).is_ok());
        assert!(parse_weight(r#"{"family":"rootpower","a":0.5,"c":1}"#, 100).is_ok());
        assert!(parse_weight("assoc:gevrey:2", 100).is_ok());
        let m = parse_matrix("gevrey:1,2,3", 100).unwrap();
        assert_eq!(m.rows().len(), 3);
        let j = parse_matrix(
            r#"{"labels":[1,2],"rows":{"1":{"family":"gevrey","s":2},"2":"gevrey:3"}}"#,
            100,
        )
        .unwrap();
        assert_eq!(j.rows()[1].seq.log_values(), m.rows()[1].seq.log_values());
        assert!(parse_matrix("omega:powerlog:2@0.5,1,2", 100).is_ok());
        assert!(parse_matrix("rows:gevrey:2;gevrey:3", 100).is_ok());
    }

    #[test]
    fn row_family() {
        let m = parse_row_family("1+1/q:q=1..4", 100).unwrap();
        let xs: Vec<f64> = m.rows().iter().map(|r| r.label.x).collect();
        assert_eq!(xs.len(), 4);
        for x in [1.0, 0.5, 1.0 / 3.0, 0.25] {
            assert!(xs.iter().any(|y| (x - y).abs() < 1e-15));
        }
        assert!(parse_row_family("1+1/q:q=4..1", 100).is_err());
        assert!(parse_row_family("1+/q:q=1..2", 100).is_err());
        assert_eq!(Expr::new("2^-(1)*(3+q)", "q", 1.0).eval().unwrap(), 2.0);
    }
}
