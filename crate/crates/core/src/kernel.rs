//! Admissible parameters Λ, the operators A^x, the extremal invariant
//! kernels L^{x,χ}, Fock kernels, Gram checks and the rank-two scalar formula.

use num_complex::Complex64;
use serde::Serialize;

use crate::domain::{SiegelDomain, SiegelPoint};
use crate::error::{Error, Result};
use crate::linalg::{self, CMat, CVec, RMat, RVec};
use crate::spaces::{radical_on_p, BaseSpaces, DerivedSpaces};
use crate::subspace::RealSubspace;

const I: Complex64 = Complex64 { re: 0.0, im: 1.0 };

/// ⟨x, ζ⟩ extended complex-bilinearly.
fn pair(x: &RVec, zeta: &CVec) -> Complex64 {
    x.iter().zip(zeta.iter()).map(|(a, b)| b * *a).sum()
}

/// Outcome of the Λ test for one x.
#[derive(Debug, Clone)]
pub enum LambdaStatus {
    In { k: usize },
    Indefinite { min_eig: f64 },
    RadicalNotInKernel { residual: f64 },
    RadicalNotComplex { residual: f64 },
}

pub fn lambda_status(dom: &SiegelDomain, w: &RealSubspace, x: &RVec) -> Result<LambdaStatus> {
    dom.algebra().check(x)?;
    let tol = dom.tol();
    let base = BaseSpaces::new(dom, w);
    let n_x = match radical_on_p(dom, &base.p, x) {
        Ok(n) => n,
        Err(Error::NotALinearSpace { min_eig }) => return Ok(LambdaStatus::Indefinite { min_eig }),
        Err(e) => return Err(e),
    };
    let g = dom.g_form(x);
    let scale = linalg::spectral_norm(&g).max(1.0);
    let in_ker = linalg::spectral_norm(&(&g * n_x.basis())) / scale;
    if n_x.dim() > 0 && in_ker > tol.sub {
        return Ok(LambdaStatus::RadicalNotInKernel { residual: in_ker });
    }
    let jn = n_x.image(&linalg::j_matrix(dom.n()), tol.rank);
    let cx = jn.subset_residual(&n_x);
    if jn.dim() != n_x.dim() || cx > tol.sub {
        return Ok(LambdaStatus::RadicalNotComplex { residual: cx });
    }
    Ok(LambdaStatus::In { k: n_x.dim() / 2 })
}

/// k = dim_C N_x when x ∈ Λ_k.
pub fn classify_lambda(dom: &SiegelDomain, w: &RealSubspace, x: &RVec) -> Option<usize> {
    match lambda_status(dom, w, x) {
        Ok(LambdaStatus::In { k }) => Some(k),
        _ => None,
    }
}

#[derive(Debug, Clone)]
pub struct KernelParams {
    pub x: RVec,
    pub k: usize,
    /// χ as a vector of S, paired through re h.
    pub chi: RVec,
    pub spaces: DerivedSpaces,
    /// A^x = 2 (p^x)* R_x p^x as a complex n×n matrix.
    pub a_x: CMat,
    /// Orthogonal projector onto S ⊕ jS.
    ss_proj: RMat,
    /// Left inverse of [B_S | J B_S].
    ss_coeff: RMat,
    s_basis: RMat,
    tol_sub: f64,
}

pub fn build_kernel_params(dom: &SiegelDomain, w: &RealSubspace, x: &RVec, chi: &RVec) -> Result<KernelParams> {
    build_kernel_params_with(dom, w, x, chi, None)
}

/// Same as [`build_kernel_params`] with an explicit complement S^x of N_x in S_x.
pub fn build_kernel_params_with(dom: &SiegelDomain, w: &RealSubspace, x: &RVec, chi: &RVec, s_upper: Option<&RealSubspace>) -> Result<KernelParams> {
    let k = match lambda_status(dom, w, x)? {
        LambdaStatus::In { k } => k,
        other => return Err(Error::NotInLambda(format!("{other:?}"))),
    };
    let spaces = DerivedSpaces::new(dom, w, x, s_upper)?;
    finish(dom, spaces, x, chi, k)
}

/// Skips the Λ test; N_x is taken to be {0}. Only for negative controls.
pub fn build_kernel_params_unchecked(dom: &SiegelDomain, w: &RealSubspace, x: &RVec, chi: &RVec) -> Result<KernelParams> {
    let spaces = DerivedSpaces::with_radical(dom, w, x, RealSubspace::zero(2 * dom.n()))?;
    finish(dom, spaces, x, chi, 0)
}

fn finish(dom: &SiegelDomain, spaces: DerivedSpaces, x: &RVec, chi: &RVec, k: usize) -> Result<KernelParams> {
    let tol = dom.tol();
    let m = 2 * dom.n();
    if chi.len() != m {
        return Err(Error::DimensionMismatch { expected: m, got: chi.len() });
    }
    let s = &spaces.base.s;
    let off = s.residual(chi);
    if off > tol.sub * chi.norm().max(1.0) {
        return Err(Error::InvalidCharacter(format!("component {off:e} outside S")));
    }
    if !spaces.base.is_direct(tol.rank) {
        return Err(Error::DecompositionFailure { residual: f64::NAN });
    }
    let px = spaces.px.clone().ok_or_else(|| Error::NotInLambda("V is not P ⊕ S^x ⊕ jS^x".into()))?;
    let pc = linalg::real_to_complex(&px);
    let a_x = pc.adjoint() * dom.r_of(x) * pc * Complex64::new(2.0, 0.0);
    let j = linalg::j_matrix(dom.n());
    let bs = s.basis().clone();
    let mm = linalg::hcat(&[&bs, &(&j * &bs)]);
    let ss_coeff = if mm.ncols() == 0 {
        RMat::zeros(0, m)
    } else {
        (mm.transpose() * &mm).try_inverse().ok_or(Error::DecompositionFailure { residual: f64::NAN })? * mm.transpose()
    };
    let ss_proj = spaces.base.s.sum(&spaces.base.js, tol.rank).projector();
    Ok(KernelParams { x: x.clone(), k, chi: chi.clone(), spaces, a_x, ss_proj, ss_coeff, s_basis: bs, tol_sub: tol.sub })
}

impl KernelParams {
    /// Splits u ∈ S ⊕ jS as a + jb with a, b ∈ S.
    fn split_s(&self, u: &RVec) -> (RVec, RVec) {
        let d = self.s_basis.ncols();
        let c = &self.ss_coeff * u;
        (&self.s_basis * c.rows(0, d), &self.s_basis * c.rows(d, d))
    }

    fn j(&self, a: &RVec) -> RVec {
        let n = a.len() / 2;
        RVec::from_fn(2 * n, |i, _| if i < n { -a[i + n] } else { a[i - n] })
    }

    /// s-part of v in S ⊕ jS.
    pub fn s_part(&self, v: &CVec) -> Result<RVec> {
        let vr = linalg::to_real(v);
        let s = &self.ss_proj * &vr;
        let (a, b) = self.split_s(&s);
        let residual = (&a + self.j(&b) - &s).norm();
        if residual > self.tol_sub * vr.norm().max(1.0) {
            return Err(Error::DecompositionFailure { residual });
        }
        Ok(s)
    }

    /// conj^S(a + jb) = a − jb.
    pub fn conj_s(&self, u: &RVec) -> RVec {
        let (a, b) = self.split_s(u);
        a - self.j(&b)
    }

    /// χ(a + jb) = χ(a) + iχ(b).
    pub fn chi_c(&self, u: &RVec) -> Complex64 {
        let (a, b) = self.split_s(u);
        Complex64::new(self.chi.dot(&a), self.chi.dot(&b))
    }

    /// h(w, A^x w2) for w, w2 ∈ S ⊕ jS.
    pub fn h_a(&self, w: &RVec, w2: &RVec) -> Complex64 {
        let wc = linalg::from_real(w);
        let w2c = linalg::from_real(w2);
        SiegelDomain::h(&wc, &(&self.a_x * w2c))
    }

    pub fn eval(&self, dom: &SiegelDomain, p1: &SiegelPoint, p2: &SiegelPoint) -> Result<Complex64> {
        let s1 = self.s_part(&p1.v)?;
        let s2 = self.s_part(&p2.v)?;
        let zeta = &p1.z - p2.z.conjugate() - dom.q_eval(&p1.v, &p2.v) * (I * 2.0);
        let f1 = I * pair(&self.x, &zeta);
        let w = &s1 - self.conj_s(&s2);
        let w2 = self.conj_s(&s1) - &s2;
        let f2 = self.h_a(&w, &w2);
        let f3 = -I * self.chi_c(&w);
        Ok((f1 + f2 + f3).exp())
    }
}

/// e^{2⟨x, Q(q, q')⟩}.
pub fn fock_kernel(dom: &SiegelDomain, x: &RVec, q: &CVec, q2: &CVec) -> Complex64 {
    (pair(x, &dom.q_eval(q, q2)) * 2.0).exp()
}

#[derive(Debug, Clone, Serialize)]
pub struct GramReport {
    pub points: usize,
    pub min_eigenvalue: f64,
    pub norm: f64,
    pub hermitian_residual: f64,
    pub psd: bool,
}

pub fn gram_matrix(dom: &SiegelDomain, params: &KernelParams, points: &[SiegelPoint]) -> Result<CMat> {
    let n = points.len();
    let mut g = CMat::zeros(n, n);
    for i in 0..n {
        for j in 0..n {
            g[(i, j)] = params.eval(dom, &points[i], &points[j])?;
        }
    }
    Ok(g)
}

pub fn gram_report(g: &CMat, tol_psd: f64) -> Result<GramReport> {
    let hermitian_residual = (g - g.adjoint()).norm();
    let (vals, _) = linalg::herm_eigen(g)?;
    let min_eigenvalue = vals.iter().cloned().fold(f64::INFINITY, f64::min);
    let norm = vals.iter().map(|l| l.abs()).fold(0.0, f64::max);
    Ok(GramReport { points: g.nrows(), min_eigenvalue, norm, hermitian_residual, psd: min_eigenvalue >= -tol_psd * norm.max(1.0) })
}

pub fn gram_psd_report(dom: &SiegelDomain, params: &KernelParams, points: &[SiegelPoint]) -> Result<GramReport> {
    for p in points {
        if !dom.contains(p) {
            return Err(Error::NotInDomain);
        }
    }
    gram_report(&gram_matrix(dom, params, points)?, dom.tol().psd)
}

#[derive(Debug, Clone, Serialize)]
pub struct Rank2Report {
    pub c: f64,
    pub y: Vec<f64>,
    pub factor_residual: f64,
    /// max |h(s, A^x s̄) − c h(s, s̄)| over the samples.
    pub deviation: f64,
}

/// Scalar c = ⟨x1 − 2T_{e1}(T_y)² x0, e1⟩ where x_{1/2} = 2T_y x0, y ∈ U(e1, 1/2).
pub fn rank2_scalar(dom: &SiegelDomain, e1: &RVec, x: &RVec) -> Result<(f64, RVec, f64)> {
    let alg = dom.algebra();
    let tol = dom.tol();
    alg.check(e1)?;
    alg.check(x)?;
    if (alg.inner(e1, e1) - 1.0).abs() > 1e-8 {
        return Err(Error::FrameInvalid("e1 must have unit norm".into()));
    }
    let ps = alg.peirce_system(e1).map_err(|e| Error::FrameInvalid(e.to_string()))?;
    if (ps.p1.trace() - 1.0).abs() > 1e-6 {
        return Err(Error::FrameInvalid("e1 is not primitive".into()));
    }
    let (x1, xh, x0) = ps.split(x);
    let t0 = alg.t(&x0);
    let t0_on_u0 = &ps.p0 * &t0 * &ps.p0;
    let (vals, _) = linalg::sym_eigen(&t0_on_u0)?;
    if vals[vals.len() - 1] < -tol.psd * x.norm().max(1.0) {
        return Err(Error::FrameInvalid("T_{x0} is not positive semi-definite on U(e1, 0)".into()));
    }
    let half = RealSubspace::span(&ps.p_half, tol.rank);
    let ybasis = half.vectors();
    let mut fac = RMat::zeros(alg.dim(), ybasis.len());
    for (c, yb) in ybasis.iter().enumerate() {
        fac.set_column(c, &(alg.product(yb, &x0) * 2.0));
    }
    let y = if ybasis.is_empty() {
        RVec::zeros(alg.dim())
    } else {
        let svd = fac.clone().svd(true, true);
        let coef = svd.solve(&xh, tol.rank * svd.singular_values.max().max(1.0)).map_err(|_| Error::FactorizationResidualTooLarge { residual: f64::NAN })?;
        half.basis() * coef
    };
    let residual = (alg.product(&y, &x0) * 2.0 - &xh).norm();
    if residual > tol.sub * x.norm().max(1.0) {
        return Err(Error::FactorizationResidualTooLarge { residual });
    }
    let ty = alg.t(&y);
    let inner = &x1 - alg.t(e1) * (&ty * (&ty * &x0)) * 2.0;
    Ok((alg.inner(&inner, e1), y, residual))
}

/// Compares h(s, A^x s̄) with c h(s, s̄) over `samples`.
pub fn rank2_scalar_check(dom: &SiegelDomain, params: &KernelParams, e1: &RVec, samples: &[CVec]) -> Result<Rank2Report> {
    let (c, y, factor_residual) = rank2_scalar(dom, e1, &params.x)?;
    let mut deviation: f64 = 0.0;
    for v in samples {
        let s = params.s_part(v)?;
        let sb = params.conj_s(&s);
        let lhs = params.h_a(&s, &sb);
        let rhs = SiegelDomain::h(&linalg::from_real(&s), &linalg::from_real(&sb)) * c;
        deviation = deviation.max((lhs - rhs).norm());
    }
    Ok(Rank2Report { c, y: y.iter().cloned().collect(), factor_residual, deviation })
}
