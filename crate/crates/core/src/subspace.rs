//! Real subspaces of R^m in orthonormal-basis form.

use crate::linalg::{self, RMat, RVec};

#[derive(Debug, Clone)]
pub struct RealSubspace {
    basis: RMat,
}

impl RealSubspace {
    /// Column span of `m`, rank cut at `tol_rank`.
    pub fn span(m: &RMat, tol_rank: f64) -> Self {
        RealSubspace { basis: linalg::orth(m, tol_rank) }
    }

    pub fn span_vectors(ambient: usize, vs: &[RVec], tol_rank: f64) -> Self {
        let mut m = RMat::zeros(ambient, vs.len());
        for (i, v) in vs.iter().enumerate() {
            m.set_column(i, v);
        }
        Self::span(&m, tol_rank)
    }

    /// Takes `basis` as is; columns must already be orthonormal.
    pub fn from_orthonormal(basis: RMat) -> Self {
        RealSubspace { basis }
    }

    pub fn zero(m: usize) -> Self {
        RealSubspace { basis: RMat::zeros(m, 0) }
    }

    pub fn full(m: usize) -> Self {
        RealSubspace { basis: RMat::identity(m, m) }
    }

    pub fn dim(&self) -> usize {
        self.basis.ncols()
    }

    pub fn ambient(&self) -> usize {
        self.basis.nrows()
    }

    pub fn basis(&self) -> &RMat {
        &self.basis
    }

    pub fn vectors(&self) -> Vec<RVec> {
        (0..self.dim()).map(|i| self.basis.column(i).into_owned()).collect()
    }

    pub fn projector(&self) -> RMat {
        &self.basis * self.basis.transpose()
    }

    pub fn project(&self, v: &RVec) -> RVec {
        &self.basis * (self.basis.transpose() * v)
    }

    /// ‖v − Πv‖.
    pub fn residual(&self, v: &RVec) -> f64 {
        (v - self.project(v)).norm()
    }

    /// Frobenius distance between orthogonal projectors.
    pub fn distance(&self, other: &RealSubspace) -> f64 {
        (self.projector() - other.projector()).norm()
    }

    pub fn approx_eq(&self, other: &RealSubspace, tol: f64) -> bool {
        self.distance(other) <= tol
    }

    /// Largest distance from a unit vector of `self` to `other`; zero iff `self ⊆ other`.
    pub fn subset_residual(&self, other: &RealSubspace) -> f64 {
        if self.dim() == 0 {
            return 0.0;
        }
        let r = &self.basis - other.projector() * &self.basis;
        linalg::spectral_norm(&r)
    }

    pub fn sum(&self, other: &RealSubspace, tol_rank: f64) -> Self {
        Self::span(&linalg::hcat(&[&self.basis, &other.basis]), tol_rank)
    }

    pub fn intersection(&self, other: &RealSubspace, tol_rank: f64) -> Self {
        let m = self.ambient();
        if self.dim() == 0 || other.dim() == 0 {
            return Self::zero(m);
        }
        let stacked = linalg::hcat(&[&self.basis, &(-&other.basis)]);
        let k = linalg::null_space(&stacked, tol_rank);
        let top = k.rows(0, self.dim()).into_owned();
        Self::span(&(&self.basis * top), tol_rank)
    }

    /// Euclidean orthogonal complement.
    pub fn orth_complement(&self) -> Self {
        RealSubspace { basis: linalg::complement(&self.basis, self.ambient()) }
    }

    /// {v : b(v, w) = 0 for all w in self}.
    pub fn complement_wrt(&self, b: &RMat, tol_rank: f64) -> Self {
        let m = self.ambient();
        if self.dim() == 0 {
            return Self::full(m);
        }
        RealSubspace { basis: linalg::null_space(&(self.basis.transpose() * b), tol_rank) }
    }

    /// Image under a linear map R^m → R^k.
    pub fn image(&self, map: &RMat, tol_rank: f64) -> Self {
        if self.dim() == 0 {
            return Self::zero(map.nrows());
        }
        Self::span(&(map * &self.basis), tol_rank)
    }
}
