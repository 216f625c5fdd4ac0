//! Check records (JSON lines) and sweep tables (CSV).
//!
//! Field order is fixed by the struct layout, floats go through serde_json's
//! shortest round-trip formatting, so equal inputs give equal bytes.

use std::io::Write;

use qfourier_core::verify::CheckReport;
use serde::Serialize;

/// Version tag written in the first line of every CSV file.
pub const CSV_VERSION: &str = "qfourier-sweep v1";

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Relation {
    /// `lhs <= rhs + slack`
    Le,
    /// `|lhs - rhs| <= slack`
    Eq,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Verdict {
    Pass,
    Fail,
}

impl Relation {
    pub fn as_str(self) -> &'static str {
        match self {
            Relation::Le => "le",
            Relation::Eq => "eq",
        }
    }
}

impl Verdict {
    pub fn as_str(self) -> &'static str {
        match self {
            Verdict::Pass => "pass",
            Verdict::Fail => "fail",
        }
    }
}

impl From<bool> for Verdict {
    fn from(pass: bool) -> Self {
        if pass {
            Verdict::Pass
        } else {
            Verdict::Fail
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Params {
    /// Exponent as text so that `inf` survives JSON.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub p: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub x: Option<f64>,
    pub labels: Vec<u64>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Record {
    pub suite: &'static str,
    pub case: u32,
    pub name: &'static str,
    pub model: String,
    pub seed: u64,
    pub params: Params,
    pub relation: Relation,
    pub lhs: f64,
    pub rhs: f64,
    /// Imaginary parts, for complex identities only.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub lhs_im: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub rhs_im: Option<f64>,
    pub slack: f64,
    pub verdict: Verdict,
    pub substitution: Option<&'static str>,
}

impl Record {
    pub fn passed(&self) -> bool {
        self.verdict == Verdict::Pass
    }

    pub fn from_check(suite: &'static str, case: u32, model: &str, seed: u64, r: &CheckReport) -> Self {
        Self {
            suite,
            case,
            name: r.name,
            model: model.to_string(),
            seed,
            params: Params {
                p: Some(r.p.to_string()),
                x: r.x,
                labels: r.labels.iter().map(|l| l.0).collect(),
            },
            relation: Relation::Le,
            lhs: r.lhs,
            rhs: r.rhs,
            lhs_im: None,
            rhs_im: None,
            slack: r.slack,
            verdict: r.pass.into(),
            substitution: r.substitution.map(|s| s.describe()),
        }
    }
}

pub fn write_jsonl<W: Write>(out: &mut W, records: &[Record]) -> std::io::Result<()> {
    for r in records {
        serde_json::to_writer(&mut *out, r)?;
        out.write_all(b"\n")?;
    }
    Ok(())
}

/// Numeric cell: shortest round-trip form, `inf`/`-inf`/`nan` spelled out.
pub fn cell(v: f64) -> String {
    if v.is_nan() {
        "nan".into()
    } else if v.is_infinite() {
        if v > 0.0 { "inf" } else { "-inf" }.into()
    } else {
        // `{:?}` is locale independent and round-trips
        format!("{v:?}")
    }
}

/// CSV table with a versioned comment line ahead of the header.
pub fn write_csv<W: Write>(
    out: W,
    quantity: &str,
    seed: Option<u64>,
    header: &[&str],
    rows: &[Vec<String>],
) -> Result<(), csv::Error> {
    let mut out = out;
    match seed {
        Some(s) => writeln!(out, "# {CSV_VERSION} {quantity} seed={s}")?,
        None => writeln!(out, "# {CSV_VERSION} {quantity}")?,
    }
    let mut w = csv::Writer::from_writer(out);
    w.write_record(header)?;
    for r in rows {
        w.write_record(r)?;
    }
    w.flush()?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn record_field_order_is_fixed() {
        let r = Record {
            suite: "kms",
            case: 3,
            name: "kms",
            model: "suq2(q=0.5)".into(),
            seed: 7,
            params: Params {
                p: Some("inf".into()),
                x: Some(-1.0),
                labels: vec![2],
            },
            relation: Relation::Eq,
            lhs: 0.25,
            rhs: 0.25,
            lhs_im: None,
            rhs_im: None,
            slack: 0.0,
            verdict: Verdict::Pass,
            substitution: None,
        };
        let mut buf = Vec::new();
        write_jsonl(&mut buf, &[r]).unwrap();
        assert_eq!(
            String::from_utf8(buf).unwrap(),
            "{\"suite\":\"kms\",\"case\":3,\"name\":\"kms\",\"model\":\"suq2(q=0.5)\",\"seed\":7,\
             \"params\":{\"p\":\"inf\",\"x\":-1.0,\"labels\":[2]},\"relation\":\"eq\",\"lhs\":0.25,\
             \"rhs\":0.25,\"slack\":0.0,\"verdict\":\"pass\",\"substitution\":null}\n"
        );
    }

    #[test]
    fn csv_has_version_line_and_plain_decimals() {
        let mut buf = Vec::new();
        let rows = vec![vec!["1".into(), cell(0.1 + 0.2)], vec!["2".into(), cell(f64::INFINITY)]];
        write_csv(&mut buf, "growth-profile", None, &["k", "value"], &rows).unwrap();
        assert_eq!(
            String::from_utf8(buf).unwrap(),
            "# qfourier-sweep v1 growth-profile\nk,value\n1,0.30000000000000004\n2,inf\n"
        );
    }
}
