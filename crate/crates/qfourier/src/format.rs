//! JSON file formats for models, dual elements, permutation elements,
//! functionals and interval results.
//!
//! All readers reject unknown fields.

use std::collections::BTreeMap;
use std::path::Path;

use qfourier_core::interval::{IntervalBounds, IntervalSet, OfInvariants};
use qfourier_core::linalg::CMatrix;
use qfourier_core::model::{Label, ModelKind, QGModel};
use qfourier_core::similarity::FunctionalRep;
use qfourier_core::transform::{PermElement, PermTerm};
use qfourier_core::{Complex64, DualElement};
use serde::{Deserialize, Serialize};

#[derive(Debug, thiserror::Error)]
pub enum FormatError {
    #[error("{path}: {err}")]
    Io { path: String, err: std::io::Error },
    /// Syntax or schema error; the message carries line and column.
    #[error("{context}: {err}")]
    Json { context: String, err: serde_json::Error },
    #[error("{context}: field `{field}`: {reason}")]
    Field {
        context: String,
        field: String,
        reason: String,
    },
    #[error("{context}: {err}")]
    Model { context: String, err: qfourier_core::Error },
}

fn field_err(context: &str, field: impl Into<String>, reason: impl Into<String>) -> FormatError {
    FormatError::Field {
        context: context.to_string(),
        field: field.into(),
        reason: reason.into(),
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct IrrepEntry {
    pub label: u64,
    pub qdiag: Vec<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub length: Option<u64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ModelFile {
    pub kind: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub q: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub lambdas: Option<Vec<f64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub sign: Option<i8>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub irreps: Option<Vec<IrrepEntry>>,
}

impl ModelFile {
    pub fn into_model(self, context: &str) -> Result<QGModel, FormatError> {
        let model_err = |err| FormatError::Model {
            context: context.to_string(),
            err,
        };
        let reject = |name: &str, present: bool| -> Result<(), FormatError> {
            if present {
                Err(field_err(
                    context,
                    name,
                    format!("not allowed for kind `{}`", self.kind),
                ))
            } else {
                Ok(())
            }
        };
        match self.kind.as_str() {
            "generic" => {
                reject("q", self.q.is_some())?;
                reject("lambdas", self.lambdas.is_some())?;
                reject("sign", self.sign.is_some())?;
                let irreps = self.irreps.ok_or_else(|| field_err(context, "irreps", "missing"))?;
                let list = irreps
                    .into_iter()
                    .map(|e| (Label(e.label), e.qdiag, e.length))
                    .collect();
                QGModel::generic(list).map_err(model_err)
            }
            "suq2" => {
                reject("lambdas", self.lambdas.is_some())?;
                reject("sign", self.sign.is_some())?;
                reject("irreps", self.irreps.is_some())?;
                let q = self.q.ok_or_else(|| field_err(context, "q", "missing"))?;
                QGModel::suq2(q).map_err(model_err)
            }
            "ofplus" => {
                reject("q", self.q.is_some())?;
                reject("irreps", self.irreps.is_some())?;
                let lambdas = self.lambdas.ok_or_else(|| field_err(context, "lambdas", "missing"))?;
                QGModel::ofplus(lambdas, self.sign.unwrap_or(1)).map_err(model_err)
            }
            other => Err(field_err(
                context,
                "kind",
                format!("`{other}` is not one of generic, suq2, ofplus"),
            )),
        }
    }

    /// Bundled models keep their parameters; generic ones list every irrep.
    pub fn from_model(model: &QGModel) -> Self {
        match model.kind() {
            ModelKind::SuQ2 { q } => Self {
                kind: "suq2".into(),
                q: Some(*q),
                lambdas: None,
                sign: None,
                irreps: None,
            },
            ModelKind::OfPlus { lambdas, sign } => Self {
                kind: "ofplus".into(),
                q: None,
                lambdas: Some(lambdas.clone()),
                sign: Some(*sign),
                irreps: None,
            },
            ModelKind::Generic => Self::materialize(model, u64::MAX),
        }
    }

    /// A generic model file holding every full block with label `<= kmax`
    /// (scalar-only labels are skipped).
    pub fn materialize(model: &QGModel, kmax: u64) -> Self {
        let mut irreps = Vec::new();
        for l in model.labels(kmax) {
            if let Ok(irrep) = model.irrep(l) {
                irreps.push(IrrepEntry {
                    label: l.0,
                    qdiag: irrep.qdiag,
                    length: model.length(l).ok(),
                });
            }
        }
        Self {
            kind: "generic".into(),
            q: None,
            lambdas: None,
            sign: None,
            irreps: Some(irreps),
        }
    }
}

fn read(path: &Path) -> Result<String, FormatError> {
    std::fs::read_to_string(path).map_err(|err| FormatError::Io {
        path: path.display().to_string(),
        err,
    })
}

fn parse<T: for<'de> Deserialize<'de>>(text: &str, context: &str) -> Result<T, FormatError> {
    serde_json::from_str(text).map_err(|err| FormatError::Json {
        context: context.to_string(),
        err,
    })
}

pub fn parse_model(text: &str, context: &str) -> Result<QGModel, FormatError> {
    parse::<ModelFile>(text, context)?.into_model(context)
}

pub fn read_model(path: &Path) -> Result<QGModel, FormatError> {
    parse_model(&read(path)?, &path.display().to_string())
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BlockEntry {
    pub label: u64,
    pub re: Vec<Vec<f64>>,
    pub im: Vec<Vec<f64>>,
}

impl BlockEntry {
    fn to_matrix(&self, context: &str) -> Result<CMatrix, FormatError> {
        CMatrix::from_parts(&self.re, &self.im)
            .map_err(|e| field_err(context, format!("blocks[label={}]", self.label), e.to_string()))
    }

    fn from_matrix(label: Label, m: &CMatrix) -> Self {
        let rows = |f: fn(&Complex64) -> f64| -> Vec<Vec<f64>> {
            (0..m.rows())
                .map(|i| (0..m.cols()).map(|j| f(&m[(i, j)])).collect())
                .collect()
        };
        Self {
            label: label.0,
            re: rows(|z| z.re),
            im: rows(|z| z.im),
        }
    }
}

fn blocks_to_map(blocks: &[BlockEntry], context: &str) -> Result<BTreeMap<Label, CMatrix>, FormatError> {
    let mut out = BTreeMap::new();
    for b in blocks {
        if out.insert(Label(b.label), b.to_matrix(context)?).is_some() {
            return Err(field_err(context, "label", format!("duplicate block {}", b.label)));
        }
    }
    Ok(out)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DualFile {
    pub blocks: Vec<BlockEntry>,
}

impl DualFile {
    pub fn from_element(a: &DualElement) -> Self {
        Self {
            blocks: a.blocks().map(|(l, m)| BlockEntry::from_matrix(l, m)).collect(),
        }
    }

    pub fn into_element(self, context: &str) -> Result<DualElement, FormatError> {
        Ok(DualElement::from_blocks(blocks_to_map(&self.blocks, context)?))
    }
}

pub fn parse_dual(text: &str, context: &str) -> Result<DualElement, FormatError> {
    parse::<DualFile>(text, context)?.into_element(context)
}

pub fn read_dual(path: &Path) -> Result<DualElement, FormatError> {
    parse_dual(&read(path)?, &path.display().to_string())
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PermEntry {
    pub label: u64,
    pub perm: Vec<usize>,
    pub y_re: Vec<f64>,
    pub y_im: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PermFile {
    pub terms: Vec<PermEntry>,
}

impl PermFile {
    pub fn into_element(self, context: &str) -> Result<PermElement, FormatError> {
        let mut e = PermElement::new();
        for t in self.terms {
            if t.y_re.len() != t.y_im.len() {
                return Err(field_err(context, "y_im", "length differs from y_re"));
            }
            let y = t
                .y_re
                .iter()
                .zip(&t.y_im)
                .map(|(r, i)| Complex64::new(*r, *i))
                .collect();
            let term = PermTerm::new(t.perm, y).map_err(|e| field_err(context, "perm", e.to_string()))?;
            e.insert(Label(t.label), term);
        }
        Ok(e)
    }

    pub fn from_element(e: &PermElement) -> Self {
        Self {
            terms: e
                .terms()
                .map(|(l, t)| PermEntry {
                    label: l.0,
                    perm: t.perm.clone(),
                    y_re: t.y.iter().map(|z| z.re).collect(),
                    y_im: t.y.iter().map(|z| z.im).collect(),
                })
                .collect(),
        }
    }
}

pub fn parse_perm(text: &str, context: &str) -> Result<PermElement, FormatError> {
    parse::<PermFile>(text, context)?.into_element(context)
}

pub fn read_perm(path: &Path) -> Result<PermElement, FormatError> {
    parse_perm(&read(path)?, &path.display().to_string())
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FunctionalFile {
    #[serde(rename = "P")]
    pub p: Vec<BlockEntry>,
    #[serde(rename = "M")]
    pub m: Vec<BlockEntry>,
}

impl FunctionalFile {
    pub fn from_rep(f: &FunctionalRep) -> Self {
        Self {
            p: f.p.iter().map(|(l, m)| BlockEntry::from_matrix(*l, m)).collect(),
            m: f.m.iter().map(|(l, m)| BlockEntry::from_matrix(*l, m)).collect(),
        }
    }

    pub fn into_rep(self, context: &str) -> Result<FunctionalRep, FormatError> {
        Ok(FunctionalRep::new(
            blocks_to_map(&self.p, context)?,
            blocks_to_map(&self.m, context)?,
        ))
    }
}

pub fn parse_functional(text: &str, context: &str) -> Result<FunctionalRep, FormatError> {
    parse::<FunctionalFile>(text, context)?.into_rep(context)
}

/// Serialized interval analysis result.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct IntervalFile {
    pub inner: Vec<[f64; 2]>,
    pub outer: Vec<[f64; 2]>,
    pub r: f64,
    pub predicate_cor: bool,
    pub witness: Option<f64>,
}

impl IntervalFile {
    pub fn new(inv: &OfInvariants, bounds: &IntervalBounds, predicate: bool, witness: Option<f64>) -> Self {
        let conv = |s: &IntervalSet| s.parts().iter().map(|&(a, b)| [a, b]).collect();
        Self {
            inner: conv(&bounds.inner),
            outer: conv(&bounds.outer),
            r: inv.r,
            predicate_cor: predicate,
            witness,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn generic_model_round_trip() {
        let text = r#"{"kind":"generic","irreps":[{"label":0,"qdiag":[1.0]},{"label":1,"qdiag":[2.0,0.5]}]}"#;
        let m = parse_model(text, "inline").unwrap();
        assert_eq!(m.irrep(Label(1)).unwrap().qdiag, vec![2.0, 0.5]);
        let again = ModelFile::from_model(&m).into_model("again").unwrap();
        assert_eq!(again, m);
    }

    #[test]
    fn unknown_fields_rejected_with_position() {
        let text = "{\n  \"kind\": \"suq2\",\n  \"q\": 0.5,\n  \"extra\": 1\n}";
        let err = parse_model(text, "f.model").unwrap_err().to_string();
        assert!(err.contains("extra") && err.contains("line 4"), "{err}");
    }

    #[test]
    fn kind_specific_fields_enforced() {
        assert!(parse_model(r#"{"kind":"suq2"}"#, "x")
            .unwrap_err()
            .to_string()
            .contains("`q`"));
        assert!(parse_model(r#"{"kind":"suq2","q":0.5,"lambdas":[1,1]}"#, "x").is_err());
        assert!(parse_model(r#"{"kind":"sun","q":0.5}"#, "x").is_err());
        assert!(parse_model(r#"{"kind":"suq2","q":1.5}"#, "x").is_err());
        let of = parse_model(r#"{"kind":"ofplus","lambdas":[0.5,1,2],"sign":1}"#, "x").unwrap();
        assert!(matches!(of.kind(), ModelKind::OfPlus { .. }));
    }

    #[test]
    fn dual_perm_functional_round_trip() {
        let d = parse_dual(
            r#"{"blocks":[{"label":1,"re":[[0,0],[0.2,0]],"im":[[0,0],[0,0.5]]}]}"#,
            "d",
        )
        .unwrap();
        assert_eq!(d.get(Label(1)).unwrap()[(1, 1)], Complex64::new(0.0, 0.5));
        assert_eq!(DualFile::from_element(&d).into_element("d").unwrap(), d);
        let p = parse_perm(r#"{"terms":[{"label":1,"perm":[1,0],"y_re":[1,0],"y_im":[0,0]}]}"#, "p").unwrap();
        assert_eq!(PermFile::from_element(&p).into_element("p").unwrap(), p);
        assert!(parse_perm(r#"{"terms":[{"label":1,"perm":[0,0],"y_re":[1,0],"y_im":[0,0]}]}"#, "p").is_err());
        let f = parse_functional(r#"{"P":[{"label":0,"re":[[1]],"im":[[0]]}],"M":[]}"#, "f").unwrap();
        assert_eq!(FunctionalFile::from_rep(&f).into_rep("f").unwrap(), f);
    }
}
