//! JSON problem and solution documents.
//!
//! Problem: `{"triple": {...}, "b": [...], "c": [...], "lambda": x, "forcing": <series>}`.
//! Solution: the solution series plus `G`, `U` and a pole/residue table.

use serde::{Deserialize, Serialize};

use super::{IvProblem, PartialFractionDecomposition, SolutionExpression};
use crate::error::{Error, Result};
use crate::kernels::{make_triple, KernelTriple, TripleKind};
use crate::series::GeneralizedPowerSeries as Series;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ProblemDocument {
    pub triple: TripleKind,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub b: Option<Vec<f64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub c: Option<Vec<f64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub lambda: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub forcing: Option<Series>,
}

impl ProblemDocument {
    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::InvalidParameter(format!("problem document: {e}")))
    }

    pub fn build_triple(&self, order: usize) -> Result<KernelTriple> {
        make_triple(&self.triple, order)
    }

    /// `c[0]`, or 0 when no initial values are given.
    pub fn y0(&self) -> f64 {
        self.c.as_ref().and_then(|c| c.first().copied()).unwrap_or(0.0)
    }

    pub fn lambda(&self) -> Result<f64> {
        self.lambda
            .ok_or_else(|| Error::InvalidParameter("problem document has no \"lambda\"".into()))
    }

    pub fn forcing(&self) -> Series {
        self.forcing.clone().unwrap_or_else(Series::zero)
    }

    /// The equation coefficients: `b` if present, otherwise the relaxation
    /// equation `D y - lambda y = f`.
    pub fn coefficients(&self) -> Result<Vec<f64>> {
        match (&self.b, self.lambda) {
            (Some(b), _) => Ok(b.clone()),
            (None, Some(l)) => Ok(vec![-l, 1.0]),
            (None, None) => Err(Error::InvalidParameter(
                "problem document needs \"b\" or \"lambda\"".into(),
            )),
        }
    }

    pub fn to_problem(&self, order: usize) -> Result<IvProblem> {
        let b = self.coefficients()?;
        let m = b.len().saturating_sub(1);
        let c = self.c.clone().unwrap_or_else(|| vec![0.0; m]);
        IvProblem::new(self.build_triple(order)?, b, c, self.forcing())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PoleEntry {
    /// Which operator the pole belongs to: `"G"` or `"U"`.
    pub part: String,
    pub pole: [f64; 2],
    pub multiplicity: usize,
    pub residues: Vec<[f64; 2]>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SolutionDocument {
    pub solution: Series,
    #[serde(rename = "G")]
    pub g: Series,
    #[serde(rename = "U")]
    pub u: Series,
    pub forcing: Series,
    pub k1: Series,
    #[serde(default)]
    pub poles: Vec<PoleEntry>,
}

fn pole_entries<'a>(part: &str, pfd: &'a PartialFractionDecomposition) -> impl Iterator<Item = PoleEntry> + 'a {
    let part = part.to_string();
    pfd.poles.iter().zip(&pfd.residues).map(move |(p, res)| PoleEntry {
        part: part.clone(),
        pole: [p.value.re, p.value.im],
        multiplicity: p.multiplicity,
        residues: res.iter().map(|a| [a.re, a.im]).collect(),
    })
}

impl From<&SolutionExpression> for SolutionDocument {
    fn from(sol: &SolutionExpression) -> Self {
        let mut poles = Vec::new();
        if let Some(pfd) = &sol.g_decomposition {
            poles.extend(pole_entries("G", pfd));
        }
        if let Some(pfd) = &sol.u_decomposition {
            poles.extend(pole_entries("U", pfd));
        }
        SolutionDocument {
            solution: sol.series().clone(),
            g: sol.g.clone(),
            u: sol.u.clone(),
            forcing: sol.forcing.clone(),
            k1: sol.k1.clone(),
            poles,
        }
    }
}
