//! Matrix-set files: `{"dim": d, "matrices": [[row-major entries]], "labels": [...]}`.

use std::collections::HashSet;
use std::path::Path;

use serde::Deserialize;
use sha2::{Digest, Sha256};
use switchstab_core::instances::{by_name, INSTANCE_NAMES};
use switchstab_core::{Matrix, MatrixSet64};

use crate::error::{CliError, Result};

#[derive(Clone, Debug, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MatrixSetFile {
    pub dim: usize,
    pub matrices: Vec<Vec<f64>>,
    #[serde(default)]
    pub labels: Option<Vec<String>>,
}

impl MatrixSetFile {
    pub fn parse(text: &str) -> Result<Self> {
        let file: Self = serde_json::from_str(text)
            .map_err(|e| CliError::Input(format!("malformed matrix-set file: {e}")))?;
        file.validate()?;
        Ok(file)
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |m: String| Err(CliError::Input(m));
        if self.dim == 0 {
            return bad("dim: must be at least 1".into());
        }
        if self.matrices.is_empty() {
            return bad("matrices: at least one matrix is required".into());
        }
        let n = self.dim * self.dim;
        for (i, m) in self.matrices.iter().enumerate() {
            if m.len() != n {
                return bad(format!(
                    "matrices[{i}]: expected {n} entries for dim {}, found {}",
                    self.dim,
                    m.len()
                ));
            }
            if let Some(j) = m.iter().position(|x| !x.is_finite()) {
                return bad(format!("matrices[{i}][{j}]: entry must be finite"));
            }
        }
        if let Some(labels) = &self.labels {
            if labels.len() != self.matrices.len() {
                return bad(format!(
                    "labels: {} labels for {} matrices",
                    labels.len(),
                    self.matrices.len()
                ));
            }
            let mut seen = HashSet::new();
            for (i, l) in labels.iter().enumerate() {
                if !seen.insert(l) {
                    return bad(format!("labels[{i}]: duplicate label {l:?}"));
                }
            }
        }
        Ok(())
    }

    pub fn from_set(set: &MatrixSet64) -> Self {
        Self {
            dim: set.dim(),
            matrices: set.modes().iter().map(|m| m.as_slice().to_vec()).collect(),
            labels: Some(set.labels().to_vec()),
        }
    }

    pub fn to_set(&self) -> Result<MatrixSet64> {
        let modes = self
            .matrices
            .iter()
            .map(|m| Matrix::new(self.dim, m.clone()))
            .collect::<std::result::Result<Vec<_>, _>>()?;
        let labels = match &self.labels {
            Some(l) => l.clone(),
            None => (1..=modes.len()).map(|i| format!("A{i}")).collect(),
        };
        Ok(MatrixSet64::new(modes, labels)?)
    }

    /// Canonical JSON with every entry written to 17 significant digits.
    pub fn to_json(&self) -> String {
        let mut out = format!("{{\n  \"dim\": {},\n  \"matrices\": [\n", self.dim);
        for (i, m) in self.matrices.iter().enumerate() {
            let entries: Vec<String> = m.iter().map(|x| format!("{x:.16e}")).collect();
            let sep = if i + 1 < self.matrices.len() { "," } else { "" };
            out.push_str(&format!("    [{}]{sep}\n", entries.join(", ")));
        }
        out.push_str("  ]");
        if let Some(labels) = &self.labels {
            let quoted: Vec<String> = labels
                .iter()
                .map(|l| serde_json::to_string(l).expect("string serializes"))
                .collect();
            out.push_str(&format!(",\n  \"labels\": [{}]", quoted.join(", ")));
        }
        out.push_str("\n}\n");
        out
    }
}

/// A resolved matrix-set argument.
#[derive(Clone, Debug)]
pub struct LoadedInput {
    pub set: MatrixSet64,
    pub source: String,
    /// Hex SHA-256 of the file bytes, or of the canonical file of a built-in instance.
    pub digest: String,
}

pub fn digest(bytes: &[u8]) -> String {
    format!("{:x}", Sha256::digest(bytes))
}

/// Built-in instance name or path to a matrix-set file.
pub fn load(arg: &str) -> Result<LoadedInput> {
    if let Some(inst) = by_name::<f64>(arg) {
        return Ok(builtin(arg, &inst.set));
    }
    let path = Path::new(arg);
    if !path.exists() {
        return Err(CliError::Input(format!(
            "{arg:?} is neither a built-in instance ({}) nor an existing file",
            INSTANCE_NAMES.join(", ")
        )));
    }
    let bytes = std::fs::read(path).map_err(|e| CliError::io(path, e))?;
    let text = String::from_utf8(bytes.clone())
        .map_err(|_| CliError::Input(format!("{arg}: not valid UTF-8")))?;
    let file = MatrixSetFile::parse(&text)?;
    Ok(LoadedInput {
        set: file.to_set()?,
        source: arg.to_string(),
        digest: digest(&bytes),
    })
}

pub(crate) fn builtin(name: &str, set: &MatrixSet64) -> LoadedInput {
    LoadedInput {
        set: set.clone(),
        source: name.to_string(),
        digest: digest(MatrixSetFile::from_set(set).to_json().as_bytes()),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn round_trip_is_bit_exact() {
        for name in INSTANCE_NAMES {
            let set = by_name::<f64>(name).unwrap().set;
            let file = MatrixSetFile::from_set(&set);
            let back = MatrixSetFile::parse(&file.to_json()).unwrap();
            assert_eq!(back, file);
            let again = back.to_set().unwrap();
            for (a, b) in set.modes().iter().zip(again.modes()) {
                for (x, y) in a.as_slice().iter().zip(b.as_slice()) {
                    assert_eq!(x.to_bits(), y.to_bits());
                }
            }
        }
    }

    #[test]
    fn validation_names_the_field() {
        let err = |s: &str| MatrixSetFile::parse(s).unwrap_err().to_string();
        assert!(err(r#"{"dim": 2, "matrices": [[1, 2, 3]]}"#).contains("matrices[0]"));
        assert!(err(r#"{"dim": 0, "matrices": [[]]}"#).contains("dim"));
        assert!(err(r#"{"dim": 1, "matrices": []}"#).contains("matrices"));
        assert!(err(r#"{"dim": 1, "matrices": [[1], [2]], "labels": ["a"]}"#).contains("labels"));
        assert!(
            err(r#"{"dim": 1, "matrices": [[1], [2]], "labels": ["a", "a"]}"#)
                .contains("labels[1]")
        );
        assert!(err(r#"{"dim": 1, "matrices": [[1]], "extra": 3}"#).contains("extra"));
    }

    #[test]
    fn default_labels() {
        let f = MatrixSetFile::parse(r#"{"dim": 1, "matrices": [[1], [2]]}"#).unwrap();
        assert_eq!(f.to_set().unwrap().labels(), ["A1", "A2"]);
    }

    #[test]
    fn unknown_input() {
        assert_eq!(load("/nonexistent/set.json").unwrap_err().exit_code(), 1);
        assert_eq!(load("stanford-urbano").unwrap().set.len(), 2);
    }
}
