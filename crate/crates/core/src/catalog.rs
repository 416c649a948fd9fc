//! Built-in example domains with W-variants and their frozen verdicts.
//!
//! Real coordinates on V = ℂⁿ are (Re v₁, …, Re vₙ, Im v₁, …, Im vₙ).

use crate::domain::{JordanRepresentation, SiegelDomain};
use crate::error::{Error, Result};
use crate::jordan::{AlgebraKind, EuclideanJordanAlgebra};
use crate::linalg::RVec;
use crate::subspace::RealSubspace;

#[derive(Debug, Clone, PartialEq)]
pub struct WVariant {
    pub name: &'static str,
    pub basis: Vec<Vec<f64>>,
    pub expected_mf: bool,
    pub note: &'static str,
}

#[derive(Debug, Clone, PartialEq)]
pub struct CatalogEntry {
    pub name: &'static str,
    pub algebra: AlgebraKind,
    /// Copies of the standard representation.
    pub multiplicity: usize,
    pub variants: Vec<WVariant>,
    /// Primitive idempotent used for the scalar kernel check, if any.
    pub e1: Option<Vec<f64>>,
}

impl CatalogEntry {
    pub fn domain(&self) -> Result<SiegelDomain> {
        let alg = EuclideanJordanAlgebra::new(self.algebra)?;
        let rep = JordanRepresentation::standard(&alg, self.multiplicity);
        Ok(SiegelDomain::new(alg, rep))
    }

    pub fn variant(&self, name: &str) -> Result<&WVariant> {
        self.variants
            .iter()
            .find(|v| v.name == name)
            .ok_or_else(|| Error::UnknownEntry(format!("{}:{name}", self.name)))
    }

    pub fn subspace(&self, dom: &SiegelDomain, v: &WVariant) -> RealSubspace {
        let vs: Vec<RVec> = v.basis.iter().map(|b| RVec::from_column_slice(b)).collect();
        RealSubspace::span_vectors(2 * dom.n(), &vs, dom.tol().rank)
    }
}

fn variant(name: &'static str, basis: &[&[f64]], expected_mf: bool, note: &'static str) -> WVariant {
    WVariant { name, basis: basis.iter().map(|b| b.to_vec()).collect(), expected_mf, note }
}

const NAMES: [&str; 5] = ["heisenberg-rank1", "sym2-main2", "sym2-skew", "diag2", "herm2"];

pub fn catalog_list() -> Vec<&'static str> {
    NAMES.to_vec()
}

pub fn catalog_get(name: &str) -> Result<CatalogEntry> {
    let e = match name {
        "heisenberg-rank1" => CatalogEntry {
            name: "heisenberg-rank1",
            algebra: AlgebraKind::Diagonal { r: 1 },
            multiplicity: 1,
            variants: vec![
                variant("C", &[&[1.0, 0.0], &[0.0, 1.0]], true, "W = V, open orbit"),
                variant("R", &[&[1.0, 0.0]], true, "S = ℝ, Q real on S"),
                variant("0", &[], false, "S = ℂ, Q(1, i) = -i"),
            ],
            e1: None,
        },
        "sym2-main2" => CatalogEntry {
            name: "sym2-main2",
            algebra: AlgebraKind::SymReal { n: 2 },
            multiplicity: 1,
            variants: vec![variant(
                "main2",
                &[&[1.0, 0.0, 0.0, 0.0], &[0.0, 1.0, 0.0, 0.0], &[0.0, 0.0, 0.0, 1.0]],
                true,
                "W = (ℝ × {0}) ⊕ ({0} × ℂ) = P ⊕ S for the frame e₁ = E₁₁",
            )],
            e1: Some(vec![1.0, 0.0, 0.0]),
        },
        "sym2-skew" => CatalogEntry {
            name: "sym2-skew",
            algebra: AlgebraKind::SymReal { n: 2 },
            multiplicity: 1,
            variants: vec![variant(
                "skew",
                &[&[1.0, 0.0, 0.0, 0.0], &[0.0, 0.0, 0.0, 1.0]],
                false,
                "W = span{(1, 0), (0, i)}; S = span{(1, 0), (0, i)}, Q((1, 0), (0, i)) has imaginary off-diagonal part",
            )],
            e1: None,
        },
        "diag2" => CatalogEntry {
            name: "diag2",
            algebra: AlgebraKind::Diagonal { r: 2 },
            multiplicity: 1,
            variants: vec![
                variant("R2", &[&[1.0, 0.0, 0.0, 0.0], &[0.0, 1.0, 0.0, 0.0]], true, "S = ℝ², P = {0}"),
                variant("V", &[&[1.0, 0.0, 0.0, 0.0], &[0.0, 1.0, 0.0, 0.0], &[0.0, 0.0, 1.0, 0.0], &[0.0, 0.0, 0.0, 1.0]], true, "S = {0}"),
                variant("CxO", &[&[1.0, 0.0, 0.0, 0.0], &[0.0, 0.0, 1.0, 0.0]], false, "S = {0} × ℂ"),
                variant("RxC", &[&[1.0, 0.0, 0.0, 0.0], &[0.0, 1.0, 0.0, 0.0], &[0.0, 0.0, 0.0, 1.0]], true, "S = ℝ × {0}, P = {0} × ℂ"),
            ],
            e1: Some(vec![1.0, 0.0]),
        },
        "herm2" => CatalogEntry {
            name: "herm2",
            algebra: AlgebraKind::HermComplex { n: 2 },
            multiplicity: 1,
            variants: vec![
                variant("R2", &[&[1.0, 0.0, 0.0, 0.0], &[0.0, 1.0, 0.0, 0.0]], false, "S = ℝ², Q(e₁, e₂) = ½E₁₂ is not real"),
                variant("V", &[&[1.0, 0.0, 0.0, 0.0], &[0.0, 1.0, 0.0, 0.0], &[0.0, 0.0, 1.0, 0.0], &[0.0, 0.0, 0.0, 1.0]], true, "S = {0}"),
                variant("main2", &[&[1.0, 0.0, 0.0, 0.0], &[0.0, 1.0, 0.0, 0.0], &[0.0, 0.0, 0.0, 1.0]], true, "S = ℝ × {0}"),
            ],
            e1: Some(vec![1.0, 0.0, 0.0, 0.0]),
        },
        _ => return Err(Error::UnknownEntry(name.to_string())),
    };
    Ok(e)
}

/// Resolves `entry` or `entry:variant`; without a variant the first one is used.
pub fn resolve(id: &str) -> Result<(CatalogEntry, WVariant)> {
    let (name, var) = match id.split_once(':') {
        Some((n, v)) => (n, Some(v)),
        None => (id, None),
    };
    let entry = catalog_get(name)?;
    let v = match var {
        Some(v) => entry.variant(v)?.clone(),
        None => entry.variants[0].clone(),
    };
    Ok((entry, v))
}
