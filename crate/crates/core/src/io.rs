//! JSON model and polynomial files.
//!
//! A model file:
//!
//! ```json
//! {
//!   "name": "M.I",
//!   "n": 2,
//!   "A": [["1", "0"], ["0", "-1"]],
//!   "B": [["1/3", "0"], ["0", "1/2"]],
//!   "E": "z1^2*zbar1^2"
//! }
//! ```
//!
//! Entries are Gaussian rationals, written either as `["re", "im"]` pairs or
//! as strings such as `"1/2-3/4i"`. `E` (optional) and polynomial files hold
//! either a polynomial string or a list of `[coefficient, "monomial"]` terms.

use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exactalg::{ExactMatrix, GaussianRational};
use crate::poly::{parse_monomial, parse_polynomial, Polynomial};
use crate::quadric::{GraphModel, HermitianForm, PerturbedModel, QuadricModel, SymmetricForm};

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Scalar {
    Pair([String; 2]),
    Text(String),
    Int(i64),
}

impl Scalar {
    pub fn to_gaussian(&self, location: &str) -> Result<GaussianRational> {
        let parsed = match self {
            Scalar::Pair([re, im]) => GaussianRational::from_pair(re, im),
            Scalar::Text(t) => t.parse(),
            Scalar::Int(v) => Ok(GaussianRational::from_int(*v)),
        };
        parsed.map_err(|e| Error::parse(location, e.to_string()))
    }

    pub fn from_gaussian(value: &GaussianRational) -> Self {
        Scalar::Pair(value.to_pair())
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(untagged)]
pub enum PolyData {
    Text(String),
    Terms(Vec<(Scalar, String)>),
}

impl PolyData {
    pub fn to_polynomial(&self, n: usize, location: &str) -> Result<Polynomial> {
        match self {
            PolyData::Text(t) => parse_polynomial(n, t).map_err(|e| relocate(e, location)),
            PolyData::Terms(terms) => {
                let mut out = Vec::with_capacity(terms.len());
                for (i, (c, m)) in terms.iter().enumerate() {
                    let loc = format!("{location}[{i}]");
                    let coeff = c.to_gaussian(&loc)?;
                    let mono = parse_monomial(n, m).map_err(|e| relocate(e, &loc))?;
                    out.push((mono, coeff));
                }
                Polynomial::from_terms(n, out)
            }
        }
    }

    pub fn from_polynomial(p: &Polynomial) -> Self {
        PolyData::Terms(
            p.terms()
                .map(|(m, c)| (Scalar::from_gaussian(c), m.to_string()))
                .collect(),
        )
    }
}

fn relocate(e: Error, location: &str) -> Error {
    match e {
        Error::Parse {
            location: inner,
            message,
        } => Error::Parse {
            location: format!("{location}: {inner}"),
            message,
        },
        other => other,
    }
}

fn json_error(e: serde_json::Error) -> Error {
    Error::parse(
        format!("line {} column {}", e.line(), e.column()),
        e.to_string(),
    )
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ModelFile {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub name: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub comments: Option<String>,
    pub n: usize,
    #[serde(rename = "A")]
    pub a: Vec<Vec<Scalar>>,
    #[serde(rename = "B")]
    pub b: Vec<Vec<Scalar>>,
    #[serde(rename = "E", default, skip_serializing_if = "Option::is_none")]
    pub e: Option<PolyData>,
}

/// A model as loaded from a file.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LoadedModel {
    pub name: Option<String>,
    pub model: PerturbedModel,
}

impl LoadedModel {
    pub fn quadric(&self) -> &QuadricModel {
        self.model.base()
    }

    pub fn is_perturbed(&self) -> bool {
        self.model.is_perturbed()
    }

    pub fn n(&self) -> usize {
        self.model.n()
    }

    pub fn to_file(&self) -> ModelFile {
        let grid = |m: &ExactMatrix| {
            m.to_rows()
                .iter()
                .map(|r| r.iter().map(Scalar::from_gaussian).collect())
                .collect()
        };
        let q = self.quadric();
        ModelFile {
            name: self.name.clone(),
            comments: None,
            n: q.n(),
            a: grid(q.a().matrix()),
            b: grid(q.b().matrix()),
            e: (!self.model.e().is_zero()).then(|| PolyData::from_polynomial(self.model.e())),
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(&self.to_file()).expect("model serializes")
    }
}

fn read_grid(rows: &[Vec<Scalar>], n: usize, label: &str) -> Result<ExactMatrix> {
    if rows.len() != n {
        return Err(Error::parse(
            label,
            format!("expected {n} rows, found {}", rows.len()),
        ));
    }
    let mut out = Vec::with_capacity(n);
    for (i, row) in rows.iter().enumerate() {
        if row.len() != n {
            return Err(Error::parse(
                format!("{label}[{}]", i + 1),
                format!("expected {n} entries, found {}", row.len()),
            ));
        }
        let parsed = row
            .iter()
            .enumerate()
            .map(|(j, s)| s.to_gaussian(&format!("{label}[{}][{}]", i + 1, j + 1)))
            .collect::<Result<Vec<_>>>()?;
        out.push(parsed);
    }
    if n == 0 {
        return Ok(ExactMatrix::zeros(0, 0));
    }
    ExactMatrix::from_rows(out)
}

impl ModelFile {
    pub fn into_model(self) -> Result<LoadedModel> {
        if self.n == 0 {
            return Err(Error::parse("n", "n must be at least 1"));
        }
        let a = HermitianForm::new(read_grid(&self.a, self.n, "A")?)?;
        let b = SymmetricForm::new(read_grid(&self.b, self.n, "B")?)?;
        let base = QuadricModel::new(a, b)?;
        let e = match &self.e {
            Some(data) => data.to_polynomial(self.n, "E")?,
            None => Polynomial::zero(self.n),
        };
        Ok(LoadedModel {
            name: self.name,
            model: PerturbedModel::new(base, e)?,
        })
    }
}

pub fn parse_model_str(text: &str) -> Result<LoadedModel> {
    let file: ModelFile = serde_json::from_str(text).map_err(json_error)?;
    file.into_model()
}

pub fn parse_model(path: &Path) -> Result<LoadedModel> {
    parse_model_str(&read(path)?)
}

fn read(path: &Path) -> Result<String> {
    std::fs::read_to_string(path)
        .map_err(|e| Error::parse(path.display().to_string(), e.to_string()))
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PolyFile {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub n: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub poly: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub terms: Option<Vec<(Scalar, String)>>,
    /// Degree through which the data is known.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub precision: Option<u32>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LoadedPoly {
    pub poly: Polynomial,
    pub precision: Option<u32>,
}

impl PolyFile {
    /// `default_n` applies when the file does not name its dimension.
    pub fn into_poly(self, default_n: usize) -> Result<LoadedPoly> {
        let n = self.n.unwrap_or(default_n);
        if self.n.is_some_and(|m| m != default_n) {
            return Err(Error::DimensionMismatch {
                expected: default_n,
                found: n,
            });
        }
        let data = match (self.poly, self.terms) {
            (Some(text), None) => PolyData::Text(text),
            (None, Some(terms)) => PolyData::Terms(terms),
            _ => {
                return Err(Error::parse(
                    "poly",
                    "exactly one of \"poly\" and \"terms\" must be given",
                ))
            }
        };
        let field = if matches!(data, PolyData::Text(_)) {
            "poly"
        } else {
            "terms"
        };
        Ok(LoadedPoly {
            poly: data.to_polynomial(n, field)?,
            precision: self.precision,
        })
    }
}

/// Accepts a JSON polynomial file, or a bare polynomial string.
pub fn parse_poly_str(text: &str, n: usize) -> Result<LoadedPoly> {
    let trimmed = text.trim_start();
    if trimmed.starts_with('{') {
        let file: PolyFile = serde_json::from_str(text).map_err(json_error)?;
        file.into_poly(n)
    } else {
        Ok(LoadedPoly {
            poly: parse_polynomial(n, text.trim())?,
            precision: None,
        })
    }
}

pub fn parse_poly(path: &Path, n: usize) -> Result<LoadedPoly> {
    parse_poly_str(&read(path)?, n)
}

pub fn poly_to_json(p: &Polynomial, precision: Option<u32>) -> String {
    let file = PolyFile {
        n: Some(p.n()),
        poly: None,
        terms: Some(
            p.terms()
                .map(|(m, c)| (Scalar::from_gaussian(c), m.to_string()))
                .collect(),
        ),
        precision,
    };
    serde_json::to_string_pretty(&file).expect("polynomial serializes")
}
