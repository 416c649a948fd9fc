//! Euclidean Jordan algebras over an orthonormal basis of the trace form.
//!
//! Every built-in algebra is realized inside a matrix model (diagonal,
//! real symmetric or complex Hermitian matrices) with the product
//! `A∘B = (AB + BA)/2`. The structure tensor is computed once from that
//! model; all arithmetic afterwards goes through the tensor, and only the
//! spectral decomposition goes back to the matrices.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{self, CMat, RMat, RVec};
use crate::tol::Tolerances;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum AlgebraKind {
    Diagonal { r: usize },
    SymReal { n: usize },
    HermComplex { n: usize },
}

impl AlgebraKind {
    /// Accepts the spec-file names, including `rank1`.
    pub fn parse(kind: &str, param: Option<usize>) -> Result<Self> {
        let need = |p: Option<usize>| p.filter(|&v| v > 0).ok_or_else(|| Error::Schema(format!("algebra '{kind}' needs a positive size parameter")));
        match kind {
            "rank1" => Ok(AlgebraKind::Diagonal { r: 1 }),
            "diagonal" => Ok(AlgebraKind::Diagonal { r: need(param)? }),
            "sym_real" => Ok(AlgebraKind::SymReal { n: need(param)? }),
            "herm_complex" => Ok(AlgebraKind::HermComplex { n: need(param)? }),
            other => Err(Error::Schema(format!("unknown algebra kind '{other}'"))),
        }
    }

    /// Size of the matrix model, which is also the rank.
    pub fn matrix_size(&self) -> usize {
        match *self {
            AlgebraKind::Diagonal { r } => r,
            AlgebraKind::SymReal { n } | AlgebraKind::HermComplex { n } => n,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ConeMode {
    Open,
    Closed,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum SpectralFn {
    Exp,
    Log,
    /// `λ ↦ 1/λ` on nonzero eigenvalues; zero goes to 1 when
    /// `proof_convention` is set and to 0 otherwise.
    PseudoInverse { proof_convention: bool },
    Abs,
    /// Heaviside step with step(0) = 0.
    Step,
}

#[derive(Debug, Clone)]
pub struct SpectralDecomposition {
    pub idempotents: Vec<RVec>,
    pub eigenvalues: Vec<f64>,
    /// Rank of each idempotent.
    pub multiplicities: Vec<usize>,
}

impl SpectralDecomposition {
    pub fn is_frame(&self) -> bool {
        self.multiplicities.iter().all(|&m| m == 1)
    }
}

#[derive(Debug, Clone)]
pub struct PeirceSystem {
    pub c: RVec,
    pub p1: RMat,
    pub p_half: RMat,
    pub p0: RMat,
}

impl PeirceSystem {
    pub fn split(&self, x: &RVec) -> (RVec, RVec, RVec) {
        (&self.p1 * x, &self.p_half * x, &self.p0 * x)
    }
}

#[derive(Debug, Clone)]
pub struct EuclideanJordanAlgebra {
    kind: AlgebraKind,
    dim: usize,
    rank: usize,
    labels: Vec<String>,
    basis: Vec<CMat>,
    /// `mult[i]` is the matrix of T_{b_i}.
    mult: Vec<RMat>,
    unit: RVec,
    tol: Tolerances,
}

fn jordan_product(a: &CMat, b: &CMat) -> CMat {
    (a * b + b * a) * Complex64::new(0.5, 0.0)
}

fn trace_inner(a: &CMat, b: &CMat) -> f64 {
    (a * b).trace().re
}

impl EuclideanJordanAlgebra {
    pub fn new(kind: AlgebraKind) -> Result<Self> {
        let m = kind.matrix_size();
        if m == 0 {
            return Err(Error::Schema("algebra size must be positive".into()));
        }
        let one = Complex64::new(1.0, 0.0);
        let s = std::f64::consts::FRAC_1_SQRT_2;
        let mut basis = Vec::new();
        let mut labels = Vec::new();
        for i in 0..m {
            let mut b = CMat::zeros(m, m);
            b[(i, i)] = one;
            basis.push(b);
            labels.push(format!("E{}{}", i + 1, i + 1));
        }
        if !matches!(kind, AlgebraKind::Diagonal { .. }) {
            for i in 0..m {
                for j in i + 1..m {
                    let mut b = CMat::zeros(m, m);
                    b[(i, j)] = Complex64::new(s, 0.0);
                    b[(j, i)] = Complex64::new(s, 0.0);
                    basis.push(b);
                    labels.push(format!("S{}{}", i + 1, j + 1));
                }
            }
        }
        if matches!(kind, AlgebraKind::HermComplex { .. }) {
            for i in 0..m {
                for j in i + 1..m {
                    let mut b = CMat::zeros(m, m);
                    b[(i, j)] = Complex64::new(0.0, s);
                    b[(j, i)] = Complex64::new(0.0, -s);
                    basis.push(b);
                    labels.push(format!("A{}{}", i + 1, j + 1));
                }
            }
        }
        let dim = basis.len();
        let mut mult = vec![RMat::zeros(dim, dim); dim];
        for i in 0..dim {
            for j in 0..dim {
                let p = jordan_product(&basis[i], &basis[j]);
                for k in 0..dim {
                    mult[i][(k, j)] = trace_inner(&p, &basis[k]);
                }
            }
        }
        let unit = RVec::from_fn(dim, |i, _| if i < m { 1.0 } else { 0.0 });
        Ok(EuclideanJordanAlgebra { kind, dim, rank: m, labels, basis, mult, unit, tol: Tolerances::default() })
    }

    pub fn with_tolerances(mut self, tol: Tolerances) -> Self {
        self.tol = tol;
        self
    }

    pub fn tol(&self) -> &Tolerances {
        &self.tol
    }

    pub fn kind(&self) -> AlgebraKind {
        self.kind
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn unit(&self) -> RVec {
        self.unit.clone()
    }

    /// Gram matrix of the inner product in the working basis (orthonormal).
    pub fn inner_matrix(&self) -> RMat {
        RMat::identity(self.dim, self.dim)
    }

    /// Coordinate k of b_i∘b_j.
    pub fn structure_constant(&self, i: usize, j: usize, k: usize) -> f64 {
        self.mult[i][(k, j)]
    }

    /// Matrices of T_{b_i}.
    pub fn basis_left_mult(&self) -> &[RMat] {
        &self.mult
    }

    /// Matrix model of the basis element b_i.
    pub fn basis_matrix(&self, i: usize) -> &CMat {
        &self.basis[i]
    }

    pub fn check(&self, x: &RVec) -> Result<()> {
        if x.len() != self.dim {
            return Err(Error::DimensionMismatch { expected: self.dim, got: x.len() });
        }
        Ok(())
    }

    pub fn inner(&self, x: &RVec, y: &RVec) -> f64 {
        x.dot(y)
    }

    /// Matrix of T_x; checks the length of `x`.
    pub fn left_mult(&self, x: &RVec) -> Result<RMat> {
        self.check(x)?;
        Ok(self.t(x))
    }

    pub(crate) fn t(&self, x: &RVec) -> RMat {
        let mut out = RMat::zeros(self.dim, self.dim);
        for (i, l) in self.mult.iter().enumerate() {
            if x[i] != 0.0 {
                out += l * x[i];
            }
        }
        out
    }

    pub fn product(&self, x: &RVec, y: &RVec) -> RVec {
        self.t(x) * y
    }

    pub fn square(&self, x: &RVec) -> RVec {
        self.product(x, x)
    }

    /// P(x) = 2T_x² − T_{x²}.
    pub fn quad_rep(&self, x: &RVec) -> RMat {
        let tx = self.t(x);
        &tx * &tx * 2.0 - self.t(&self.square(x))
    }

    pub fn invert(&self, x: &RVec) -> Result<RVec> {
        self.check(x)?;
        let p = self.quad_rep(x);
        let (lo, hi) = linalg::singular_range(&p);
        if lo <= self.tol.rank * hi || hi == 0.0 {
            return Err(Error::Singular { sigma_min: lo });
        }
        p.lu().solve(x).ok_or(Error::Singular { sigma_min: lo })
    }

    /// τ(x, y) = tr T_{xy}.
    pub fn trace_form(&self, x: &RVec, y: &RVec) -> f64 {
        self.t(&self.product(x, y)).trace()
    }

    /// Box operator u□u' = T_{uu'} + [T_u, T_{u'}].
    pub fn box_operator(&self, u: &RVec, u2: &RVec) -> RMat {
        let a = self.t(u);
        let b = self.t(u2);
        self.t(&self.product(u, u2)) + &a * &b - &b * &a
    }

    pub fn to_matrix(&self, x: &RVec) -> CMat {
        let m = self.rank;
        let mut out = CMat::zeros(m, m);
        for (i, b) in self.basis.iter().enumerate() {
            if x[i] != 0.0 {
                out += b * Complex64::new(x[i], 0.0);
            }
        }
        out
    }

    pub fn from_matrix(&self, a: &CMat) -> RVec {
        RVec::from_fn(self.dim, |i, _| trace_inner(&self.basis[i], a))
    }

    /// Primitive idempotents and eigenvalues (descending), one per rank unit.
    pub fn jordan_frame(&self, x: &RVec) -> Result<(Vec<RVec>, Vec<f64>)> {
        self.check(x)?;
        if !x.iter().all(|v| v.is_finite()) {
            return Err(Error::EigSolverFailure);
        }
        if let AlgebraKind::Diagonal { r } = self.kind {
            let mut idx: Vec<usize> = (0..r).collect();
            idx.sort_by(|&a, &b| x[b].partial_cmp(&x[a]).unwrap());
            let frame = idx.iter().map(|&i| RVec::from_fn(r, |k, _| if k == i { 1.0 } else { 0.0 })).collect();
            return Ok((frame, idx.iter().map(|&i| x[i]).collect()));
        }
        let (vals, vecs) = linalg::herm_eigen(&self.to_matrix(x))?;
        let frame = (0..self.rank)
            .map(|k| {
                let u = vecs.column(k);
                self.from_matrix(&(&u * u.adjoint()))
            })
            .collect();
        Ok((frame, vals.iter().cloned().collect()))
    }

    pub fn spectral_decompose(&self, x: &RVec) -> Result<SpectralDecomposition> {
        let (frame, vals) = self.jordan_frame(x)?;
        let gap = self.tol.eig * x.norm().max(1.0);
        let mut out = SpectralDecomposition { idempotents: vec![], eigenvalues: vec![], multiplicities: vec![] };
        let mut sum = 0.0;
        for (k, (c, l)) in frame.into_iter().zip(vals.iter()).enumerate() {
            let new_group = k == 0 || vals[k - 1] - l > gap;
            if new_group {
                if k > 0 {
                    let m = *out.multiplicities.last().unwrap() as f64;
                    *out.eigenvalues.last_mut().unwrap() = sum / m;
                }
                out.idempotents.push(c);
                out.eigenvalues.push(*l);
                out.multiplicities.push(1);
                sum = *l;
            } else {
                *out.idempotents.last_mut().unwrap() += c;
                *out.multiplicities.last_mut().unwrap() += 1;
                sum += l;
            }
        }
        let m = *out.multiplicities.last().unwrap() as f64;
        *out.eigenvalues.last_mut().unwrap() = sum / m;
        Ok(out)
    }

    pub fn eigenvalues(&self, x: &RVec) -> Result<Vec<f64>> {
        Ok(self.jordan_frame(x)?.1)
    }

    pub fn det(&self, x: &RVec) -> Result<f64> {
        Ok(self.eigenvalues(x)?.iter().product())
    }

    /// Applies `f` eigenvalue-wise.
    pub fn spectral_apply(&self, x: &RVec, f: impl Fn(f64) -> f64) -> Result<RVec> {
        let (frame, vals) = self.jordan_frame(x)?;
        let mut out = RVec::zeros(self.dim);
        for (c, l) in frame.iter().zip(vals) {
            out += c * f(l);
        }
        Ok(out)
    }

    pub fn spectral_map(&self, x: &RVec, f: SpectralFn) -> Result<RVec> {
        let zero = self.tol.eig * x.norm().max(1.0);
        match f {
            SpectralFn::Exp => self.spectral_apply(x, f64::exp),
            SpectralFn::Log => {
                let vals = self.eigenvalues(x)?;
                if let Some(bad) = vals.iter().find(|&&l| l <= 0.0) {
                    return Err(Error::DomainError(format!("log of an element with eigenvalue {bad}")));
                }
                self.spectral_apply(x, f64::ln)
            }
            SpectralFn::PseudoInverse { proof_convention } => self.spectral_apply(x, |l| {
                if l.abs() <= zero {
                    if proof_convention {
                        1.0
                    } else {
                        0.0
                    }
                } else {
                    1.0 / l
                }
            }),
            SpectralFn::Abs => self.spectral_apply(x, f64::abs),
            SpectralFn::Step => self.spectral_apply(x, |l| if l > zero { 1.0 } else { 0.0 }),
        }
    }

    pub fn min_eigenvalue(&self, x: &RVec) -> Result<f64> {
        Ok(*self.eigenvalues(x)?.last().unwrap())
    }

    pub fn cone_contains(&self, x: &RVec, mode: ConeMode) -> bool {
        match self.min_eigenvalue(x) {
            Ok(l) => match mode {
                ConeMode::Open => l > self.tol.cone,
                ConeMode::Closed => l >= -self.tol.cone,
            },
            Err(_) => false,
        }
    }

    /// e^{T_u} = P(exp(u/2)).
    pub fn exp_left_mult(&self, u: &RVec) -> Result<RMat> {
        let h = self.spectral_apply(u, |l| (0.5 * l).exp())?;
        Ok(self.quad_rep(&h))
    }

    pub fn peirce_system(&self, c: &RVec) -> Result<PeirceSystem> {
        self.check(c)?;
        let residual = (self.square(c) - c).norm();
        if residual > self.tol.zero * c.norm().max(1.0) {
            return Err(Error::NotIdempotent { residual });
        }
        let (vals, vecs) = linalg::sym_eigen(&self.t(c))?;
        let cluster = self.tol.eig * c.norm().max(1.0);
        let mut cols: [Vec<usize>; 3] = [vec![], vec![], vec![]];
        for (k, l) in vals.iter().enumerate() {
            let (slot, target) = [(0, 1.0), (1, 0.5), (2, 0.0)]
                .into_iter()
                .min_by(|a, b| (l - a.1).abs().partial_cmp(&(l - b.1).abs()).unwrap())
                .unwrap();
            if (l - target).abs() > cluster {
                return Err(Error::NotIdempotent { residual: (l - target).abs() });
            }
            cols[slot].push(k);
        }
        let proj = |idx: &Vec<usize>| {
            let mut p = RMat::zeros(self.dim, self.dim);
            for &k in idx {
                let v = vecs.column(k);
                p += &v * v.transpose();
            }
            p
        };
        Ok(PeirceSystem { c: c.clone(), p1: proj(&cols[0]), p_half: proj(&cols[1]), p0: proj(&cols[2]) })
    }
}

/// Convenience for building coordinate vectors.
pub fn coords(v: &[f64]) -> RVec {
    DVector::from_column_slice(v)
}

/// Coordinates of a real symmetric matrix in a `SymReal` or `HermComplex` algebra.
pub fn from_real_matrix(alg: &EuclideanJordanAlgebra, m: &DMatrix<f64>) -> RVec {
    alg.from_matrix(&m.map(|a| Complex64::new(a, 0.0)))
}
