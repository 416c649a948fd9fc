//! JSON input format describing a domain, its representation and W.
//!
//! ```json
//! {
//!   "algebra": {"kind": "sym_real", "n": 2},
//!   "representation": {"kind": "standard", "multiplicity": 1},
//!   "W": {"basis": [[1, 0, 0, 0]]},
//!   "tolerances": {"sub": 1e-8},
//!   "sampling": {"samples": 20, "seed": 0}
//! }
//! ```
//!
//! Algebra kinds: `rank1`, `diagonal` (`r`), `sym_real` (`n`), `herm_complex`
//! (`n`). Representation kinds: `standard` with an optional multiplicity, or
//! `matrices` giving R of each basis element as rows of `[re, im]` pairs.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::catalog::{CatalogEntry, WVariant};
use crate::domain::{JordanRepresentation, SiegelDomain};
use crate::error::{Error, Result};
use crate::jordan::{AlgebraKind, EuclideanJordanAlgebra};
use crate::json;
use crate::linalg::{CMat, RMat};
use crate::subspace::RealSubspace;
use crate::tol::Tolerances;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AlgebraSpec {
    pub kind: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub n: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub r: Option<usize>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RepresentationSpec {
    pub kind: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub multiplicity: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub matrices: Option<Vec<Vec<Vec<[f64; 2]>>>>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct WSpec {
    pub basis: Vec<Vec<f64>>,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SamplingSpec {
    pub samples: Option<usize>,
    pub seed: Option<u64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DomainSpecFile {
    pub algebra: AlgebraSpec,
    pub representation: RepresentationSpec,
    #[serde(rename = "W")]
    pub w: WSpec,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub tolerances: Option<Tolerances>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub sampling: Option<SamplingSpec>,
}

/// A validated input: the domain with its tolerances, and W.
#[derive(Debug, Clone)]
pub struct Loaded {
    pub domain: SiegelDomain,
    pub w: RealSubspace,
    pub sampling: Option<SamplingSpec>,
}

impl DomainSpecFile {
    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::Schema(e.to_string()))
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("spec files serialize")
    }

    pub fn algebra_kind(&self) -> Result<AlgebraKind> {
        AlgebraKind::parse(&self.algebra.kind, self.algebra.n.or(self.algebra.r))
    }

    /// Builds and validates the domain, using `tol` when given and the
    /// file's own tolerances otherwise.
    pub fn load(&self, tol: Option<Tolerances>) -> Result<Loaded> {
        let tol = tol.or(self.tolerances).unwrap_or_default();
        let alg = EuclideanJordanAlgebra::new(self.algebra_kind()?)?.with_tolerances(tol);
        let rep = match self.representation.kind.as_str() {
            "standard" => {
                if self.representation.matrices.is_some() {
                    return Err(Error::Schema("standard representation takes no matrices".into()));
                }
                let m = self.representation.multiplicity.unwrap_or(1);
                if m == 0 {
                    return Err(Error::Schema("multiplicity must be positive".into()));
                }
                JordanRepresentation::standard(&alg, m)
            }
            "matrices" => {
                let ms = self.representation.matrices.as_ref().ok_or_else(|| Error::Schema("representation 'matrices' needs a matrices array".into()))?;
                let mats = ms.iter().map(|m| complex_matrix(m)).collect::<Result<Vec<_>>>()?;
                JordanRepresentation::from_matrices(&alg, mats)?
            }
            other => return Err(Error::Schema(format!("unknown representation kind '{other}'"))),
        };
        let domain = SiegelDomain::new(alg, rep).with_tolerances(tol);
        let w = self.subspace(&domain)?;
        Ok(Loaded { domain, w, sampling: self.sampling })
    }

    fn subspace(&self, dom: &SiegelDomain) -> Result<RealSubspace> {
        let m = 2 * dom.n();
        let basis = &self.w.basis;
        for (i, b) in basis.iter().enumerate() {
            if b.len() != m {
                return Err(Error::Schema(format!("W basis vector {i} has length {}, expected {m}", b.len())));
            }
            if b.iter().any(|x| !x.is_finite()) {
                return Err(Error::Schema(format!("W basis vector {i} is not finite")));
            }
        }
        if basis.is_empty() {
            return Ok(RealSubspace::zero(m));
        }
        let mat = RMat::from_fn(m, basis.len(), |i, j| basis[j][i]);
        let w = RealSubspace::span(&mat, dom.tol().rank);
        if w.dim() != basis.len() {
            return Err(Error::Schema(format!("W basis is dependent: rank {} for {} vectors", w.dim(), basis.len())));
        }
        Ok(w)
    }

    pub fn from_catalog(entry: &CatalogEntry, variant: &WVariant) -> Self {
        let (kind, n, r) = match entry.algebra {
            AlgebraKind::Diagonal { r: 1 } => ("rank1", None, None),
            AlgebraKind::Diagonal { r } => ("diagonal", None, Some(r)),
            AlgebraKind::SymReal { n } => ("sym_real", Some(n), None),
            AlgebraKind::HermComplex { n } => ("herm_complex", Some(n), None),
        };
        DomainSpecFile {
            algebra: AlgebraSpec { kind: kind.into(), n, r },
            representation: RepresentationSpec { kind: "standard".into(), multiplicity: Some(entry.multiplicity), matrices: None },
            w: WSpec { basis: variant.basis.clone() },
            tolerances: None,
            sampling: None,
        }
    }
}

fn complex_matrix(rows: &[Vec<[f64; 2]>]) -> Result<CMat> {
    let n = rows.len();
    if n == 0 || rows.iter().any(|r| r.len() != n) {
        return Err(Error::Schema("representation matrices must be square and non-empty".into()));
    }
    Ok(CMat::from_fn(n, n, |i, j| Complex64::new(rows[i][j][0], rows[i][j][1])))
}

/// Serializes R matrices in the `matrices` representation layout.
pub fn matrices_json(rep: &JordanRepresentation) -> Vec<Vec<Vec<[f64; 2]>>> {
    rep.matrices()
        .iter()
        .map(|m| (0..m.nrows()).map(|i| (0..m.ncols()).map(|j| json::pair(m[(i, j)])).collect()).collect())
        .collect()
}
