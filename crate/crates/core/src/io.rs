//! JSON model and result files.
//!
//! Conformal weights travel as `"p/q"` strings, matrices as row-major
//! integer arrays, and the fusion tensor as a list of its non-zero entries
//! `[λ, μ, ν, N_{λμ}^ν]`.

use std::collections::BTreeMap;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::classify::InvariantReport;
use crate::error::{Error, Result};
use crate::fusion::FusionRing;
use crate::matrix::IntMatrix;
use crate::modular::ModelSpec;
use crate::spin::{format_rational, parse_rational, SpinAssignment};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LabelEntry {
    pub index: usize,
    pub name: String,
    pub conformal_weight: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ModelFile {
    pub name: String,
    pub labels: Vec<LabelEntry>,
    pub fusion: Vec<[u32; 4]>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub conjugation: Option<Vec<usize>>,
}

impl ModelFile {
    pub fn from_spec(spec: &ModelSpec) -> Self {
        let ring = &spec.ring;
        let m = ring.rank();
        let labels = (0..m)
            .map(|l| LabelEntry {
                index: l,
                name: ring.name(l).to_string(),
                conformal_weight: format_rational(spec.spins.weight(l)),
            })
            .collect();
        let mut fusion = Vec::new();
        for l in 0..m {
            for mu in 0..m {
                for nu in 0..m {
                    let c = ring.n(l, mu, nu);
                    if c != 0 {
                        fusion.push([l as u32, mu as u32, nu as u32, c]);
                    }
                }
            }
        }
        ModelFile { name: spec.name.clone(), labels, fusion, conjugation: Some(ring.conjugation().to_vec()) }
    }

    /// Parses into a model whose fusion axioms hold and whose modular data
    /// builds.
    pub fn to_spec(&self) -> Result<ModelSpec> {
        let m = self.labels.len();
        let mut labels = self.labels.clone();
        labels.sort_by_key(|l| l.index);
        if labels.iter().enumerate().any(|(i, l)| l.index != i) {
            return Err(Error::Parse("label indices must be 0..m".into()));
        }
        let mut n = vec![0u32; m * m * m];
        for &[l, mu, nu, c] in &self.fusion {
            let (l, mu, nu) = (l as usize, mu as usize, nu as usize);
            if l >= m || mu >= m || nu >= m {
                return Err(Error::Parse(format!("fusion entry [{l}, {mu}, {nu}, {c}] out of range")));
            }
            n[(l * m + mu) * m + nu] = c;
        }
        let conj = match &self.conjugation {
            Some(c) => c.clone(),
            None => (0..m)
                .map(|l| {
                    (0..m)
                        .find(|&mu| n[(l * m + mu) * m] == 1)
                        .ok_or_else(|| Error::Parse(format!("label {l} has no conjugate")))
                })
                .collect::<Result<_>>()?,
        };
        let ring = FusionRing::new(labels.iter().map(|l| l.name.clone()).collect(), n, conj)?;
        let report = ring.verify_axioms();
        if !report.is_valid() {
            return Err(Error::InvalidRing(format!("{:?}", report.violations)));
        }
        let h = labels.iter().map(|l| parse_rational(&l.conformal_weight)).collect::<Result<Vec<_>>>()?;
        let spec = ModelSpec::new(self.name.clone(), ring, SpinAssignment::new(h))?;
        spec.build()?;
        Ok(spec)
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }

    pub fn from_json(s: &str) -> Result<Self> {
        Ok(serde_json::from_str(s)?)
    }

    pub fn load(path: &Path) -> Result<Self> {
        let s = std::fs::read_to_string(path).map_err(|e| Error::Parse(format!("{}: {e}", path.display())))?;
        Self::from_json(&s)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct InvariantEntry {
    pub matrix: IntMatrix,
    pub report: InvariantReport,
    /// Names of the graphs whose nimrep matches, when assigned.
    #[serde(default)]
    pub graphs: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ResultFile {
    pub model: String,
    pub invariants: Vec<InvariantEntry>,
    #[serde(default)]
    pub residuals: BTreeMap<String, f64>,
}

impl ResultFile {
    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }

    pub fn from_json(s: &str) -> Result<Self> {
        Ok(serde_json::from_str(s)?)
    }
}
