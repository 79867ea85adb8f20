//! Field-spec parsing, tables and check runners behind the `cmclass` binary.
//!
//! Field specs follow the grammar
//!
//! ```text
//! spec  := atom ('*' atom)*
//! atom  := 'zeta:' <m> | 'quad:' <d> | 'chars:' char ('+' char)*
//! char  := 'f=' <m> ':e=' <e1> (',' <ei>)*
//! ```
//!
//! where `*` is the compositum.

use std::fmt;
use std::io::Write;
use std::str::FromStr;

use rayon::prelude::*;
use serde_json::{json, Value};

use crate::characters::{parse_character, DirichletCharacter};
use crate::error::{Error, Result};
use crate::fieldlat::{compositum, cyclotomic_field, field_from_generators, quadratic_field, AbelianField};
use crate::hminus::{minus_class_number, MinusReport};
use crate::theorems::{self, CheckReport, Counterexample, Verdict};
use crate::unitindex::{hasse_unit_index, UnitIndexVerdict};

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum FieldSpec {
    Zeta(u64),
    Quad(i64),
    Chars(Vec<DirichletCharacter>),
    Compositum(Box<FieldSpec>, Box<FieldSpec>),
}

impl FieldSpec {
    pub fn build(&self, max_degree: usize) -> Result<AbelianField> {
        match self {
            FieldSpec::Zeta(m) => cyclotomic_field(*m, max_degree),
            FieldSpec::Quad(d) => quadratic_field(*d),
            FieldSpec::Chars(cs) => field_from_generators(cs, max_degree),
            FieldSpec::Compositum(a, b) => {
                compositum(&a.build(max_degree)?, &b.build(max_degree)?, max_degree)
            }
        }
    }
}

impl fmt::Display for FieldSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FieldSpec::Zeta(m) => write!(f, "zeta:{m}"),
            FieldSpec::Quad(d) => write!(f, "quad:{d}"),
            FieldSpec::Chars(cs) => {
                f.write_str("chars:")?;
                for (i, c) in cs.iter().enumerate() {
                    if i > 0 {
                        f.write_str("+")?;
                    }
                    write!(f, "{c}")?;
                }
                Ok(())
            }
            FieldSpec::Compositum(a, b) => write!(f, "{a}*{b}"),
        }
    }
}

impl FromStr for FieldSpec {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        parse_field_spec(s)
    }
}

fn parse_error(offset: usize, expected: &str) -> Error {
    Error::Parse {
        offset,
        expected: expected.to_string(),
    }
}

fn parse_atom(s: &str, base: usize) -> Result<FieldSpec> {
    if let Some(rest) = s.strip_prefix("zeta:") {
        let at = base + 5;
        if rest.is_empty() || !rest.bytes().all(|b| b.is_ascii_digit()) {
            return Err(parse_error(at, "positive integer level"));
        }
        let m: u64 = rest.parse().map_err(|_| parse_error(at, "level that fits in 64 bits"))?;
        if m == 0 {
            return Err(parse_error(at, "positive integer level"));
        }
        return Ok(FieldSpec::Zeta(m));
    }
    if let Some(rest) = s.strip_prefix("quad:") {
        let at = base + 5;
        let digits = rest.strip_prefix('-').unwrap_or(rest);
        if digits.is_empty() || !digits.bytes().all(|b| b.is_ascii_digit()) {
            return Err(parse_error(at, "integer discriminant"));
        }
        let d: i64 = rest.parse().map_err(|_| parse_error(at, "discriminant that fits in 64 bits"))?;
        return Ok(FieldSpec::Quad(d));
    }
    if let Some(rest) = s.strip_prefix("chars:") {
        let mut chars = Vec::new();
        let mut pos = 0;
        loop {
            let (chi, used) = parse_character(&rest[pos..], base + 6 + pos)?;
            chars.push(chi);
            pos += used;
            if pos == rest.len() {
                break;
            }
            if !rest[pos..].starts_with('+') {
                return Err(parse_error(base + 6 + pos, "'+', '*' or end of input"));
            }
            pos += 1;
        }
        return Ok(FieldSpec::Chars(chars));
    }
    Err(parse_error(base, "'zeta:', 'quad:' or 'chars:'"))
}

/// Parses a field spec; errors carry the byte offset of the problem.
pub fn parse_field_spec(text: &str) -> Result<FieldSpec> {
    let mut spec: Option<FieldSpec> = None;
    let mut base = 0;
    for part in text.split('*') {
        if part.is_empty() {
            return Err(parse_error(base, "field spec"));
        }
        let atom = parse_atom(part, base)?;
        spec = Some(match spec {
            None => atom,
            Some(prev) => FieldSpec::Compositum(Box::new(prev), Box::new(atom)),
        });
        base += part.len() + 1;
    }
    spec.ok_or_else(|| parse_error(0, "field spec"))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OutputFormat {
    Human,
    Json,
    Csv,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TableKind {
    HMinus,
    UnitIndex,
}

#[derive(Debug, Clone, Copy)]
pub struct Options {
    pub max_degree: usize,
    pub q_override: Option<u8>,
    pub strict: bool,
    pub format: OutputFormat,
}

impl Default for Options {
    fn default() -> Self {
        Options {
            max_degree: crate::fieldlat::DEFAULT_MAX_DEGREE,
            q_override: None,
            strict: false,
            format: OutputFormat::Human,
        }
    }
}

pub fn minus_report_json(spec: &str, r: &MinusReport) -> Value {
    let factors: Vec<Value> = r
        .orbit_factors
        .iter()
        .map(|f| {
            json!({
                "rep": f.rep.to_string(),
                "size": f.size,
                "norm_num": f.norm.numer().to_string(),
                "norm_den": f.norm.denom().to_string(),
            })
        })
        .collect();
    json!({
        "field": spec,
        "conductor": r.field.conductor(),
        "degree": r.field.degree(),
        "w": r.w,
        "Q": r.q,
        "rule": r.rule.tag(),
        "h_minus": r.h_minus.to_string(),
        "factors": factors,
    })
}

pub fn verdict_json(spec: &str, k: &AbelianField, v: &UnitIndexVerdict) -> Value {
    json!({
        "field": spec,
        "conductor": k.conductor(),
        "degree": k.degree(),
        "w": k.roots_of_unity_order(),
        "Q": v.q,
        "kappa": v.kappa_order,
        "rule": v.rule.tag(),
        "essential_ramification": v.essential_ramification,
        "reduced_to_two_part": v.reduced_to_two_part,
        "citation": v.rule.citation(),
    })
}

fn error_json(spec: &str, e: &Error) -> Value {
    json!({ "field": spec, "error": e.to_string() })
}

/// One computed table row: either the JSON object or an error.
type Row = std::result::Result<Value, Value>;

fn compute_row(kind: TableKind, spec: &str, opts: &Options) -> Row {
    let field = parse_field_spec(spec)
        .and_then(|s| s.build(opts.max_degree))
        .map_err(|e| error_json(spec, &e))?;
    match kind {
        TableKind::HMinus => minus_class_number(&field, opts.q_override)
            .map(|r| minus_report_json(spec, &r))
            .map_err(|e| error_json(spec, &e)),
        TableKind::UnitIndex => hasse_unit_index(&field, opts.q_override)
            .map(|v| verdict_json(spec, &field, &v))
            .map_err(|e| error_json(spec, &e)),
    }
}

const HMINUS_COLUMNS: [&str; 7] = ["field", "conductor", "degree", "w", "Q", "rule", "h_minus"];
const UNITINDEX_COLUMNS: [&str; 7] = ["field", "conductor", "degree", "w", "Q", "rule", "kappa"];

fn cell(v: &Value, key: &str) -> String {
    match v.get(key) {
        Some(Value::String(s)) => s.clone(),
        Some(Value::Null) | None => String::new(),
        Some(other) => other.to_string(),
    }
}

fn row_cells(kind: TableKind, row: &Row) -> Vec<String> {
    let columns = match kind {
        TableKind::HMinus => &HMINUS_COLUMNS,
        TableKind::UnitIndex => &UNITINDEX_COLUMNS,
    };
    match row {
        Ok(v) => columns.iter().map(|c| cell(v, c)).collect(),
        Err(v) => {
            let mut cells = vec![String::new(); columns.len()];
            cells[0] = cell(v, "field");
            cells[5] = "error".into();
            cells[6] = cell(v, "error");
            cells
        }
    }
}

fn io(e: std::io::Error) -> Error {
    Error::InvalidArgument(format!("write failed: {e}"))
}

/// Expands `a..b` (inclusive) to `zeta:m` specs with m ≢ 2 mod 4.
pub fn zeta_range_specs(range: &str) -> Result<Vec<String>> {
    let bad = || parse_error(0, "range 'a..b'");
    let (a, b) = range.split_once("..").ok_or_else(bad)?;
    let b = b.strip_prefix('=').unwrap_or(b);
    let a: u64 = a.parse().map_err(|_| bad())?;
    let b: u64 = b.parse().map_err(|_| bad())?;
    Ok((a.max(1)..=b)
        .filter(|m| m % 4 != 2)
        .map(|m| format!("zeta:{m}"))
        .collect())
}

/// Writes one row per spec in input order. Returns the exit code: 0, or 1
/// when `strict` is set and some row failed.
pub fn run_table(kind: TableKind, specs: &[String], opts: &Options, out: &mut dyn Write) -> Result<i32> {
    let rows: Vec<Row> = specs.par_iter().map(|s| compute_row(kind, s, opts)).collect();
    let any_error = rows.iter().any(|r| r.is_err());
    write_rows(kind, rows, opts.format, out)?;
    Ok(if opts.strict && any_error { 1 } else { 0 })
}

/// Writes a single h⁻ report in the given format.
pub fn write_minus_report(spec: &str, r: &MinusReport, format: OutputFormat, out: &mut dyn Write) -> Result<()> {
    match format {
        OutputFormat::Json => {
            serde_json::to_writer_pretty(&mut *out, &minus_report_json(spec, r))
                .map_err(|e| Error::InvalidArgument(e.to_string()))?;
            writeln!(out).map_err(io)
        }
        _ => write_rows(TableKind::HMinus, vec![Ok(minus_report_json(spec, r))], format, out),
    }
}

fn write_rows(kind: TableKind, rows: Vec<Row>, format: OutputFormat, out: &mut dyn Write) -> Result<()> {
    let header = match kind {
        TableKind::HMinus => HMINUS_COLUMNS,
        TableKind::UnitIndex => UNITINDEX_COLUMNS,
    };
    match format {
        OutputFormat::Json => {
            let arr: Vec<Value> = rows.into_iter().map(|r| r.unwrap_or_else(|e| e)).collect();
            serde_json::to_writer_pretty(&mut *out, &Value::Array(arr))
                .map_err(|e| Error::InvalidArgument(e.to_string()))?;
            writeln!(out).map_err(io)?;
        }
        OutputFormat::Csv => {
            let csv_err = |e: csv::Error| Error::InvalidArgument(e.to_string());
            let mut w = csv::Writer::from_writer(&mut *out);
            w.write_record(header).map_err(csv_err)?;
            for r in &rows {
                w.write_record(row_cells(kind, r)).map_err(csv_err)?;
            }
            w.flush().map_err(io)?;
        }
        OutputFormat::Human => {
            let mut table: Vec<Vec<String>> = vec![header.iter().map(|s| s.to_string()).collect()];
            table.extend(rows.iter().map(|r| row_cells(kind, r)));
            write_aligned(&table, out)?;
        }
    }
    Ok(())
}

fn write_aligned(table: &[Vec<String>], out: &mut dyn Write) -> Result<()> {
    let cols = table.first().map_or(0, Vec::len);
    let widths: Vec<usize> = (0..cols)
        .map(|i| table.iter().map(|r| r[i].chars().count()).max().unwrap_or(0))
        .collect();
    for row in table {
        let mut line = String::new();
        for (i, c) in row.iter().enumerate() {
            if i + 1 == cols {
                line.push_str(c);
            } else {
                line.push_str(c);
                line.push_str(&" ".repeat(widths[i] - c.chars().count() + 2));
            }
        }
        writeln!(out, "{}", line.trim_end()).map_err(io)?;
    }
    Ok(())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum VerifyKind {
    Masley,
    Metsankyla,
    V4,
    Counterexample,
    Martinet,
}

impl FromStr for VerifyKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Ok(match s {
            "masley" => VerifyKind::Masley,
            "metsankyla" => VerifyKind::Metsankyla,
            "v4" => VerifyKind::V4,
            "counterexample" => VerifyKind::Counterexample,
            "martinet" => VerifyKind::Martinet,
            _ => return Err(parse_error(0, "masley, metsankyla, v4, counterexample or martinet")),
        })
    }
}

fn int_param<T: FromStr>(params: &[String], i: usize, what: &str) -> Result<T> {
    params
        .get(i)
        .ok_or_else(|| Error::InvalidArgument(format!("missing parameter {what}")))?
        .parse()
        .map_err(|_| Error::InvalidArgument(format!("parameter {what} is not an integer")))
}

fn field_param(params: &[String], i: usize, what: &str, max_degree: usize) -> Result<AbelianField> {
    params
        .get(i)
        .ok_or_else(|| Error::InvalidArgument(format!("missing parameter {what}")))
        .and_then(|s| parse_field_spec(s))?
        .build(max_degree)
}

/// Runs a single check (`sweep = None`) or a sweep up to the given bound.
pub fn verify_reports(
    kind: VerifyKind,
    params: &[String],
    sweep: Option<u64>,
    max_degree: usize,
) -> Result<Vec<CheckReport>> {
    let vacuous_on_precondition = |r: Result<CheckReport>, name: &str, inputs: Vec<String>| match r {
        Err(Error::PreconditionViolated(why)) => Ok(CheckReport {
            name: name.to_string(),
            inputs,
            quantities: vec![theorems::Quantity {
                name: "reason".into(),
                value: why,
            }],
            verdict: Verdict::Vacuous,
            citation: String::new(),
        }),
        other => other,
    };
    match (kind, sweep) {
        (VerifyKind::Masley, None) => Ok(vec![theorems::check_masley(
            int_param(params, 0, "m")?,
            int_param(params, 1, "n")?,
            max_degree,
        )?]),
        (VerifyKind::Masley, Some(max)) => theorems::sweep_masley(max, max_degree),
        (VerifyKind::Metsankyla, None) => Ok(vec![theorems::check_metsankyla(
            &field_param(params, 0, "L1", max_degree)?,
            &field_param(params, 1, "L2", max_degree)?,
            max_degree,
        )?]),
        (VerifyKind::Metsankyla, Some(max)) => theorems::sweep_metsankyla(max, 48, max_degree),
        (VerifyKind::V4, None) => Ok(vec![theorems::check_v4(
            int_param(params, 0, "d1")?,
            int_param(params, 1, "d2")?,
            max_degree,
        )?]),
        (VerifyKind::V4, Some(max)) => theorems::sweep_v4(max, max_degree),
        (VerifyKind::Counterexample, None) => {
            let family: u8 = int_param(params, 0, "family")?;
            let fam = match family {
                1 => Counterexample::Unramified {
                    d1: int_param(params, 1, "d1")?,
                    d2: int_param(params, 2, "d2")?,
                },
                2 => Counterexample::Capitulation {
                    m: int_param(params, 1, "m")?,
                },
                _ => return Err(Error::InvalidArgument("family must be 1 or 2".into())),
            };
            let name = format!("counterexample-{family}");
            Ok(vec![vacuous_on_precondition(
                theorems::check_counterexample(fam, max_degree),
                &name,
                params[1..].to_vec(),
            )?])
        }
        (VerifyKind::Counterexample, Some(max)) => {
            let mut v = theorems::sweep_counterexample_unramified(max as i64, max_degree)?;
            v.extend(theorems::sweep_counterexample_capitulation(max, max_degree)?);
            Ok(v)
        }
        (VerifyKind::Martinet, None) => Ok(vec![theorems::check_martinet(
            int_param(params, 0, "p")?,
            max_degree,
        )?]),
        (VerifyKind::Martinet, Some(max)) => theorems::sweep_martinet(max, max_degree),
    }
}

/// Default sweep bound for each check.
pub fn default_sweep_bound(kind: VerifyKind) -> u64 {
    match kind {
        VerifyKind::Masley => 60,
        VerifyKind::Metsankyla => 64,
        VerifyKind::V4 => 2000,
        VerifyKind::Counterexample => 200,
        VerifyKind::Martinet => 200,
    }
}

/// Writes the reports; exit code 1 iff some non-vacuous check failed.
pub fn write_reports(reports: &[CheckReport], json: bool, out: &mut dyn Write) -> Result<i32> {
    if json {
        serde_json::to_writer_pretty(&mut *out, reports).map_err(|e| Error::InvalidArgument(e.to_string()))?;
        writeln!(out).map_err(io)?;
    } else {
        for r in reports {
            let verdict = match r.verdict {
                Verdict::Pass => "PASS",
                Verdict::Fail => "FAIL",
                Verdict::Vacuous => "VACUOUS",
            };
            let qs: Vec<String> = r
                .quantities
                .iter()
                .filter(|q| !q.name.ends_with("field") && q.name != "K" && q.name != "L")
                .map(|q| format!("{}={}", q.name, q.value))
                .collect();
            writeln!(out, "{verdict} {} {} {}", r.name, r.inputs.join(" "), qs.join(" ")).map_err(io)?;
        }
        let passed = reports.iter().filter(|r| r.passed()).count();
        let failed = reports.iter().filter(|r| r.failed()).count();
        writeln!(
            out,
            "{} checks: {passed} passed, {failed} failed, {} vacuous",
            reports.len(),
            reports.len() - passed - failed
        )
        .map_err(io)?;
    }
    Ok(if reports.iter().any(CheckReport::failed) { 1 } else { 0 })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_examples() {
        let k = parse_field_spec("zeta:20").unwrap().build(256).unwrap();
        assert_eq!(k, cyclotomic_field(20, 256).unwrap());
        let k = parse_field_spec("quad:-4*quad:40").unwrap().build(256).unwrap();
        assert_eq!((k.degree(), k.conductor()), (4, 40));
        let k = parse_field_spec("chars:f=5:e=1").unwrap().build(256).unwrap();
        assert_eq!(k, cyclotomic_field(5, 256).unwrap());
    }

    #[test]
    fn parse_errors_carry_offsets() {
        let offset = |s: &str| match parse_field_spec(s) {
            Err(Error::Parse { offset, .. }) => offset,
            other => panic!("{s}: {other:?}"),
        };
        assert_eq!(offset(""), 0);
        assert_eq!(offset("zeta:"), 5);
        assert_eq!(offset("zeta:3*"), 7);
        assert_eq!(offset("quad:-4*cyc:5"), 8);
        assert_eq!(offset("quad:-4*quad:x"), 13);
        assert_eq!(offset("chars:f=5:e=1+g"), 14);
        assert_eq!(offset("chars:f=5:q"), 9);
        assert_eq!(offset("chars:f=5:e=1x"), 13);
    }

    #[test]
    fn display_round_trip() {
        for s in ["zeta:20", "quad:-4*quad:40", "chars:f=5:e=1", "chars:f=40:e=1,0,2+f=40:e=1,1,3*zeta:3"] {
            let spec = parse_field_spec(s).unwrap();
            assert_eq!(spec.to_string(), s);
            assert_eq!(parse_field_spec(&spec.to_string()).unwrap(), spec);
        }
    }

    #[test]
    fn field_spec_of_field_rebuilds_it() {
        let k = parse_field_spec("quad:-3*zeta:16").unwrap().build(256).unwrap();
        let again = parse_field_spec(&k.to_spec()).unwrap().build(256).unwrap();
        assert_eq!(k, again);
    }

    #[test]
    fn tables() {
        let opts = Options {
            format: OutputFormat::Csv,
            ..Options::default()
        };
        let mut out = Vec::new();
        let specs = vec!["zeta:15".to_string(), "zeta:16".to_string()];
        assert_eq!(run_table(TableKind::UnitIndex, &specs, &opts, &mut out).unwrap(), 0);
        let text = String::from_utf8(out).unwrap();
        let lines: Vec<&str> = text.lines().collect();
        assert_eq!(lines[0], "field,conductor,degree,w,Q,rule,kappa");
        assert!(lines[1].starts_with("zeta:15,15,8,30,2,R2"));
        assert!(lines[2].starts_with("zeta:16,16,8,16,1,R2"));

        let mut out = Vec::new();
        assert_eq!(run_table(TableKind::HMinus, &[], &opts, &mut out).unwrap(), 0);
        assert_eq!(String::from_utf8(out).unwrap().trim(), HMINUS_COLUMNS.join(","));

        let strict = Options { strict: true, ..opts };
        let mut out = Vec::new();
        let bad = vec!["quad:5".to_string()];
        assert_eq!(run_table(TableKind::HMinus, &bad, &strict, &mut out).unwrap(), 1);
        assert_eq!(run_table(TableKind::HMinus, &bad, &opts, &mut Vec::new()).unwrap(), 0);
    }

    #[test]
    fn zeta_ranges() {
        let specs = zeta_range_specs("3..8").unwrap();
        assert_eq!(specs, ["zeta:3", "zeta:4", "zeta:5", "zeta:7", "zeta:8"]);
        assert!(zeta_range_specs("3-8").is_err());
    }
}
