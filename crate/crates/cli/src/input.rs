//! JSON input formats: polytope files, characteristic functions and
//! fixture bundles.

use std::collections::BTreeMap;
use std::fs;
use std::path::Path;

use serde::{Deserialize, Serialize};
use smallcover_core::{CharacteristicFunction, Gf2Matrix, Gf2Vector, SimplePolytope};

use crate::error::CliError;

/// `{"dim": n, "facets": m, "vertices": [[facet indices], …]}`, 0-based.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PolytopeFile {
    pub dim: usize,
    pub facets: usize,
    pub vertices: Vec<Vec<usize>>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum PolytopeSource {
    Incidence(PolytopeFile),
    /// `{"generator": "simplex" | "cube" | "polygon", "n": k}`
    Generator { generator: String, n: usize },
}

/// A λ-row, either `"101"` or `[1, 0, 1]`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum LambdaRow {
    Bits(String),
    Array(Vec<u8>),
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Expected {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub orientable: Option<bool>,
    #[serde(rename = "betti_X", default, skip_serializing_if = "Option::is_none")]
    pub betti_x: Option<Vec<usize>>,
    #[serde(rename = "betti_Q", default, skip_serializing_if = "Option::is_none")]
    pub betti_q: Option<Vec<usize>>,
    /// Where each expected value comes from.
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub provenance: BTreeMap<String, String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FixtureFile {
    pub name: String,
    pub polytope: PolytopeSource,
    pub lambda: Vec<LambdaRow>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub expected: Option<Expected>,
}

/// A polytope with optional characteristic data, ready for the core library.
#[derive(Debug, Clone)]
pub struct Instance {
    pub name: String,
    pub polytope: SimplePolytope,
    pub lambda: Option<CharacteristicFunction>,
    pub expected: Option<Expected>,
}

pub fn parse_json<T: serde::de::DeserializeOwned>(text: &str, what: &str) -> Result<T, CliError> {
    serde_json::from_str(text).map_err(|e| CliError::Schema(format!("{what}: {e}")))
}

pub fn read_text(path: &Path) -> Result<String, CliError> {
    fs::read_to_string(path).map_err(|e| CliError::io(path, e))
}

impl PolytopeSource {
    pub fn build(&self) -> Result<SimplePolytope, CliError> {
        let math = |e: smallcover_core::PolytopeError| CliError::Math(e.to_string());
        match self {
            PolytopeSource::Incidence(f) => {
                SimplePolytope::new(f.dim, f.facets, f.vertices.clone()).map_err(math)
            }
            PolytopeSource::Generator { generator, n } => match generator.as_str() {
                "simplex" => SimplePolytope::simplex(*n).map_err(math),
                "cube" => SimplePolytope::cube(*n).map_err(math),
                "polygon" => SimplePolytope::polygon(*n).map_err(math),
                other => Err(CliError::Schema(format!(
                    "unknown generator {other:?} (expected simplex, cube or polygon)"
                ))),
            },
        }
    }
}

impl LambdaRow {
    fn to_vector(&self, row: usize) -> Result<Gf2Vector, CliError> {
        match self {
            LambdaRow::Bits(s) => {
                Gf2Vector::parse(s).map_err(|e| CliError::Schema(format!("lambda row {row}: {e}")))
            }
            LambdaRow::Array(bits) => {
                if let Some(pos) = bits.iter().position(|&b| b > 1) {
                    return Err(CliError::Schema(format!(
                        "lambda row {row}: entry {pos} is {}, expected 0 or 1",
                        bits[pos]
                    )));
                }
                Ok(Gf2Vector::from_bits(&bits.iter().map(|&b| b == 1).collect::<Vec<_>>()))
            }
        }
    }

    pub fn from_vector(v: &Gf2Vector) -> Self {
        LambdaRow::Bits(v.to_bit_string())
    }
}

/// Rows must all have length `dim`; the row count is checked later against
/// the facets.
pub fn lambda_from_rows(rows: &[LambdaRow], dim: usize) -> Result<CharacteristicFunction, CliError> {
    let vectors = rows
        .iter()
        .enumerate()
        .map(|(i, r)| r.to_vector(i))
        .collect::<Result<Vec<_>, _>>()?;
    if let Some((i, v)) = vectors.iter().enumerate().find(|(_, v)| v.len() != dim) {
        return Err(CliError::Schema(format!(
            "lambda row {i} has {} entries, expected {dim}",
            v.len()
        )));
    }
    let matrix = Gf2Matrix::from_rows(dim, vectors).map_err(|e| CliError::Schema(e.to_string()))?;
    Ok(CharacteristicFunction::new(matrix))
}

impl FixtureFile {
    pub fn instance(&self) -> Result<Instance, CliError> {
        let polytope = self.polytope.build()?;
        let lambda = lambda_from_rows(&self.lambda, polytope.dim())?;
        Ok(Instance {
            name: self.name.clone(),
            polytope,
            lambda: Some(lambda),
            expected: self.expected.clone(),
        })
    }
}

/// Loads either a fixture bundle or a bare polytope file, with λ optionally
/// from a separate file holding a JSON array of rows.
pub fn load_instance(path: &Path, lambda_path: Option<&Path>) -> Result<Instance, CliError> {
    let text = read_text(path)?;
    let value: serde_json::Value = parse_json(&text, &path.display().to_string())?;
    let mut instance = if value.get("polytope").is_some() {
        let fixture: FixtureFile = parse_json(&text, &path.display().to_string())?;
        fixture.instance()?
    } else {
        let file: PolytopeFile = parse_json(&text, &path.display().to_string())?;
        let name = path
            .file_stem()
            .map_or_else(String::new, |s| s.to_string_lossy().into_owned());
        Instance {
            name,
            polytope: PolytopeSource::Incidence(file).build()?,
            lambda: None,
            expected: None,
        }
    };
    if let Some(lp) = lambda_path {
        let rows: Vec<LambdaRow> = parse_json(&read_text(lp)?, &lp.display().to_string())?;
        instance.lambda = Some(lambda_from_rows(&rows, instance.polytope.dim())?);
    }
    Ok(instance)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn row_formats_agree() {
        let a = lambda_from_rows(&[LambdaRow::Bits("101".into())], 3).unwrap();
        let b = lambda_from_rows(&[LambdaRow::Array(vec![1, 0, 1])], 3).unwrap();
        assert_eq!(a, b);
        assert!(lambda_from_rows(&[LambdaRow::Array(vec![2, 0, 1])], 3).is_err());
        assert!(lambda_from_rows(&[LambdaRow::Bits("10".into())], 3).is_err());
    }

    #[test]
    fn schema_errors_carry_positions() {
        let err = parse_json::<PolytopeFile>("{\n  \"dim\": 2,\n  \"facets\": x\n}", "p.json").unwrap_err();
        assert!(err.to_string().contains("line 3"), "{err}");
        assert_eq!(err.exit_code(), 1);
    }

    #[test]
    fn generator_sources() {
        let src: PolytopeSource = parse_json(r#"{"generator": "cube", "n": 3}"#, "g").unwrap();
        assert_eq!(src.build().unwrap().vertex_count(), 8);
        let bad: PolytopeSource = parse_json(r#"{"generator": "prism", "n": 3}"#, "g").unwrap();
        assert_eq!(bad.build().unwrap_err().exit_code(), 1);
    }
}
