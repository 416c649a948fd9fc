//! The cone integrals I(u), I_Q(u), the Bergman kernel and the Bergman
//! metric at (ie, 0), by closed forms, adaptive quadrature or Monte Carlo.

use num_complex::Complex64;
use rand::Rng;
use rayon::prelude::*;
use serde::Serialize;
use statrs::function::gamma::ln_gamma;
use std::f64::consts::PI;

use crate::domain::{SiegelDomain, SiegelPoint};
use crate::error::{Error, Result};
use crate::jordan::{AlgebraKind, ConeMode, EuclideanJordanAlgebra};
use crate::linalg::{self, RMat, RVec};
use crate::sampling::{self, stream_rng};

const CHUNK: usize = 4096;
/// Stream offset separating the I(e) estimate from other estimates.
const UNIT_STREAM: u64 = 1 << 40;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Method {
    Auto,
    Quadrature,
    MonteCarlo,
}

#[derive(Debug, Clone, Serialize)]
pub struct ConeIntegrals {
    pub i: f64,
    pub i_closed: bool,
    pub i_std_error: f64,
    pub i_q: f64,
    pub samples: usize,
    pub seed: u64,
}

/// I_Q(u) = π^n det(2 G_u)^{-1/2}, G_u the matrix of g_u on V_R.
pub fn i_q(dom: &SiegelDomain, u: &RVec) -> Result<f64> {
    if !dom.algebra().cone_contains(u, ConeMode::Open) {
        return Err(Error::NotInCone);
    }
    let m = dom.g_form(u) * 2.0;
    let det = m.determinant();
    Ok(PI.powi(dom.n() as i32) / det.sqrt())
}

/// |det P(u^{-1/2})| = det(u)^{-N/r}.
fn det_p_inv_sqrt(alg: &EuclideanJordanAlgebra, u: &RVec) -> Result<f64> {
    let d = alg.det(u)?;
    Ok(d.powf(-(alg.dim() as f64) / alg.rank() as f64))
}

/// Sampler on the slice B = {t ⊥ e : e/√r + t ∈ Ω}. A direction θ is drawn
/// uniformly, the exit radius ρ(θ) = 1/(√r·(−λ_min(θ))) is exact, and t is
/// uniform on the segment measure of that ray, so that `w·f(e/√r + t)` is
/// an unbiased estimate of ∫_B f with `w = V_d ρ(θ)^d`.
struct Slice {
    e_hat: RVec,
    perp: RMat,
    sqrt_r: f64,
    /// ln of the volume of the d-dimensional unit ball.
    ln_unit_ball: f64,
}

impl Slice {
    fn new(alg: &EuclideanJordanAlgebra) -> Self {
        let r = alg.rank() as f64;
        let e_hat = alg.unit() / r.sqrt();
        let q = RMat::from_column_slice(alg.dim(), 1, e_hat.as_slice());
        let perp = linalg::complement(&q, alg.dim());
        let d = perp.ncols() as f64;
        let ln_unit_ball = 0.5 * d * PI.ln() - ln_gamma(0.5 * d + 1.0);
        Slice { e_hat, perp, sqrt_r: r.sqrt(), ln_unit_ball }
    }

    fn dim(&self) -> usize {
        self.perp.ncols()
    }

    /// A point e/√r + t of Ω and its weight.
    fn draw(&self, alg: &EuclideanJordanAlgebra, rng: &mut impl Rng) -> (RVec, f64) {
        let d = self.dim();
        if d == 0 {
            return (self.e_hat.clone(), 1.0);
        }
        let g = sampling::gaussian(rng, d);
        let theta = &self.perp * (&g / g.norm().max(f64::MIN_POSITIVE));
        let lmin = alg.min_eigenvalue(&theta).unwrap_or(-1.0).min(-f64::MIN_POSITIVE);
        let rho = 1.0 / (self.sqrt_r * -lmin);
        let rad = rho * rng.random::<f64>().powf(1.0 / d as f64);
        (&self.e_hat + theta * rad, (self.ln_unit_ball + d as f64 * rho.ln()).exp())
    }
}

/// Runs `f` over `samples` indices in seeded chunks and returns per-chunk
/// partial results in chunk order.
fn chunked<T: Send>(samples: usize, seed: u64, offset: u64, f: impl Fn(&mut rand_chacha::ChaCha8Rng, usize) -> T + Sync) -> Vec<T> {
    let chunks = samples.div_ceil(CHUNK);
    (0..chunks)
        .into_par_iter()
        .map(|c| {
            let mut rng = stream_rng(seed, offset + c as u64);
            let len = CHUNK.min(samples - c * CHUNK);
            f(&mut rng, len)
        })
        .collect()
}

/// I(e) and its standard error; exact for diagonal algebras.
pub fn i_unit(alg: &EuclideanJordanAlgebra, samples: usize, seed: u64) -> Result<(f64, f64)> {
    if let AlgebraKind::Diagonal { r } = alg.kind() {
        return Ok((0.5f64.powi(r as i32), 0.0));
    }
    slice_mc(alg, samples, seed)
}

/// I(u) = I(e) |det P(u^{-1/2})| and I_Q(u).
pub fn cone_integrals(dom: &SiegelDomain, u: &RVec, method: Method, samples: usize, seed: u64) -> Result<ConeIntegrals> {
    let alg = dom.algebra();
    alg.check(u)?;
    if !alg.cone_contains(u, ConeMode::Open) {
        return Err(Error::NotInCone);
    }
    let diagonal = matches!(alg.kind(), AlgebraKind::Diagonal { .. });
    let iq = i_q(dom, u)?;
    let (ie, se, closed) = if diagonal && method != Method::MonteCarlo {
        (0.5f64.powi(alg.rank() as i32), 0.0, true)
    } else if diagonal {
        let (v, s) = slice_mc(alg, samples, seed)?;
        (v, s, false)
    } else {
        let (v, s) = i_unit(alg, samples, seed)?;
        (v, s, false)
    };
    let f = det_p_inv_sqrt(alg, u)?;
    Ok(ConeIntegrals { i: ie * f, i_closed: closed, i_std_error: se * f, i_q: iq, samples: if closed { 0 } else { samples }, seed })
}

/// I(e) = |B| Γ(N) / (2√r)^N with |B| the volume of the cone slice.
fn slice_mc(alg: &EuclideanJordanAlgebra, samples: usize, seed: u64) -> Result<(f64, f64)> {
    if samples == 0 {
        return Err(Error::MCVarianceTooHigh { rel_se: f64::INFINITY });
    }
    let nn = alg.dim() as f64;
    let slice = Slice::new(alg);
    let parts = chunked(samples, seed, UNIT_STREAM, |rng, len| {
        let mut acc = [0.0f64; 2];
        for _ in 0..len {
            let (_, w) = slice.draw(alg, rng);
            acc[0] += w;
            acc[1] += w * w;
        }
        acc
    });
    let (s1, s2) = parts.iter().fold((0.0, 0.0), |a, p| (a.0 + p[0], a.1 + p[1]));
    let n = samples as f64;
    let mean = s1 / n;
    let se = ((s2 / n - mean * mean).max(0.0) / n).sqrt();
    let scale = (ln_gamma(nn) - nn * (2.0 * slice.sqrt_r).ln()).exp();
    let rel = se / mean;
    if rel > 0.01 {
        return Err(Error::MCVarianceTooHigh { rel_se: rel });
    }
    Ok((mean * scale, se * scale))
}

#[derive(Debug, Clone, Serialize)]
pub struct BergmanEstimate {
    pub value: [f64; 2],
    pub std_error: f64,
    pub method: Method,
    pub samples: usize,
    pub seed: u64,
}

impl BergmanEstimate {
    pub fn complex(&self) -> Complex64 {
        Complex64::new(self.value[0], self.value[1])
    }
}

/// 1 / (I(u) I_Q(u)) with I(e) supplied.
fn inv_i_iq(dom: &SiegelDomain, u: &RVec, ie: f64) -> Result<f64> {
    let alg = dom.algebra();
    let i = ie * det_p_inv_sqrt(alg, u)?;
    Ok(1.0 / (i * i_q(dom, u)?))
}

/// w = z − z̄' − 2iQ(v, v').
fn kernel_argument(dom: &SiegelDomain, p1: &SiegelPoint, p2: &SiegelPoint) -> (RVec, RVec) {
    let w = &p1.z - p2.z.conjugate() - dom.q_eval(&p1.v, &p2.v) * Complex64::new(0.0, 2.0);
    (linalg::re(&w), linalg::im(&w))
}

pub fn bergman_kernel(dom: &SiegelDomain, p1: &SiegelPoint, p2: &SiegelPoint, method: Method, samples: usize, seed: u64) -> Result<BergmanEstimate> {
    if !dom.contains(p1) || !dom.contains(p2) {
        return Err(Error::NotInDomain);
    }
    let method = match method {
        Method::Auto if dom.dim_u() == 1 => Method::Quadrature,
        Method::Auto => Method::MonteCarlo,
        m => m,
    };
    match method {
        Method::Quadrature => bergman_quadrature(dom, p1, p2, seed),
        _ => bergman_mc(dom, p1, p2, samples, seed),
    }
}

fn bergman_quadrature(dom: &SiegelDomain, p1: &SiegelPoint, p2: &SiegelPoint, seed: u64) -> Result<BergmanEstimate> {
    if dom.dim_u() != 1 {
        return Err(Error::QuadratureFailure("one-dimensional quadrature needs dim U = 1".into()));
    }
    let (a, b) = kernel_argument(dom, p1, p2);
    let ie = i_unit(dom.algebra(), 0, seed)?.0;
    let f = |t: f64| -> Complex64 {
        if t <= 0.0 || t >= 1.0 {
            return Complex64::new(0.0, 0.0);
        }
        let u = t / (1.0 - t);
        let jac = 1.0 / ((1.0 - t) * (1.0 - t));
        let uv = RVec::from_element(1, u);
        let g = inv_i_iq(dom, &uv, ie).unwrap_or(0.0);
        Complex64::new(0.0, u * a[0]).exp() * ((-u * b[0]).exp() * g * jac / (2.0 * PI))
    };
    let (value, err) = adaptive_gk(&f, 0.0, 1.0, 1e-13, 60)?;
    Ok(BergmanEstimate { value: [value.re, value.im], std_error: err, method: Method::Quadrature, samples: 0, seed })
}

/// Substitutes u = a P(c^{-1/2}) x with c = Im w and x on the slice; the
/// integral over a is done exactly using the homogeneity of 1/(I I_Q)
/// (degree N + n), the slice is sampled.
fn bergman_mc(dom: &SiegelDomain, p1: &SiegelPoint, p2: &SiegelPoint, samples: usize, seed: u64) -> Result<BergmanEstimate> {
    let alg = dom.algebra();
    let nn = alg.dim() as f64;
    let k = 2.0 * nn + dom.n() as f64;
    let (re_w, c) = kernel_argument(dom, p1, p2);
    let (ie, ie_se) = i_unit(alg, samples, seed)?;
    let c_inv_sqrt = alg.spectral_apply(&c, |l| 1.0 / l.sqrt())?;
    let l = alg.quad_rep(&c_inv_sqrt);
    let ln_const = l.determinant().abs().ln() - nn * (2.0 * PI).ln() + ln_gamma(k);
    let slice = Slice::new(alg);
    let sqrt_r = slice.sqrt_r;
    let parts = chunked(samples, seed, 0, |rng, len| {
        let mut acc = [0.0f64; 4];
        for _ in 0..len {
            let (x, w) = slice.draw(alg, rng);
            let lx = &l * x;
            let g = match inv_i_iq(dom, &lx, ie) {
                Ok(g) => g,
                Err(_) => continue,
            };
            let beta = lx.dot(&re_w);
            let radial = (Complex64::new(sqrt_r, -beta).ln() * -k + ln_const).exp();
            let z = radial * (g * w);
            acc[0] += z.re;
            acc[1] += z.im;
            acc[2] += z.re * z.re;
            acc[3] += z.im * z.im;
        }
        acc
    });
    let mut tot = [0.0f64; 4];
    for p in parts {
        for i in 0..4 {
            tot[i] += p[i];
        }
    }
    let n = samples as f64;
    let mean = Complex64::new(tot[0] / n, tot[1] / n);
    let var = (tot[2] / n - mean.re * mean.re) + (tot[3] / n - mean.im * mean.im);
    let se_k = (var.max(0.0) / n).sqrt();
    let rel_ie = if ie_se > 0.0 { ie_se / ie } else { 0.0 };
    // rounding floor for estimators that are exact along every ray
    let floor = 64.0 * f64::EPSILON * mean.norm();
    let se = (se_k * se_k + (mean.norm() * rel_ie).powi(2)).sqrt().max(floor);
    Ok(BergmanEstimate { value: [mean.re, mean.im], std_error: se, method: Method::MonteCarlo, samples, seed })
}

const GK_X: [f64; 8] = [
    0.991455371120812639206854697526329,
    0.949107912342758524526189684047851,
    0.864864423359769072789712788640926,
    0.741531185599394439863864773280788,
    0.586087235467691130294144845693013,
    0.405845151377397166906606412076961,
    0.207784955007898467600689403773245,
    0.000000000000000000000000000000000,
];
const GK_WK: [f64; 8] = [
    0.022935322010529224963732008058970,
    0.063092092629978553290700663189204,
    0.104790010322250183839876322541518,
    0.140653259715525918745189590510238,
    0.169004726639267902826583426598550,
    0.190350578064785409913256402421014,
    0.204432940075298892414161999234649,
    0.209482141084727828012999174891714,
];
const GK_WG: [f64; 4] = [
    0.129484966168869693270611432679082,
    0.279705391489276667901467771423780,
    0.381830050505118944950369775488975,
    0.417959183673469387755102040816327,
];

/// One Gauss–Kronrod 7/15 panel: (Kronrod value, |Kronrod − Gauss|).
fn gk15(f: &impl Fn(f64) -> Complex64, a: f64, b: f64) -> (Complex64, f64) {
    let c = 0.5 * (a + b);
    let h = 0.5 * (b - a);
    let fc = f(c);
    let mut k = fc * GK_WK[7];
    let mut g = fc * GK_WG[3];
    for i in 0..7 {
        let s = f(c - h * GK_X[i]) + f(c + h * GK_X[i]);
        k += s * GK_WK[i];
        if i % 2 == 1 {
            g += s * GK_WG[i / 2];
        }
    }
    (k * h, ((k - g) * h).norm())
}

/// Globally adaptive bisection: the panel with the largest error estimate is
/// split until the summed estimate drops below `tol` relative to the integral.
pub fn adaptive_gk(f: &impl Fn(f64) -> Complex64, a: f64, b: f64, tol: f64, max_depth: usize) -> Result<(Complex64, f64)> {
    let (v, e) = gk15(f, a, b);
    let mut panels = vec![(a, b, v, e, 0usize)];
    loop {
        let total: Complex64 = panels.iter().map(|p| p.2).sum();
        let err: f64 = panels.iter().map(|p| p.3).sum();
        if err <= tol * total.norm() || err == 0.0 {
            return Ok((total, err));
        }
        let worst = (0..panels.len()).max_by(|&i, &j| panels[i].3.total_cmp(&panels[j].3)).unwrap_or(0);
        let (lo, hi, _, _, depth) = panels.swap_remove(worst);
        if depth >= max_depth {
            return Err(Error::QuadratureFailure(format!("no convergence on [{lo}, {hi}]")));
        }
        let mid = 0.5 * (lo + hi);
        for (l, h) in [(lo, mid), (mid, hi)] {
            let (v, e) = gk15(f, l, h);
            panels.push((l, h, v, e, depth + 1));
        }
    }
}

/// Bergman metric at (ie, 0) in (Re ζ, Im ζ, Re γ, Im γ) coordinates:
/// U-block diag(C, C), C the covariance of u under e^{−2⟨u,e⟩} du/(I I_Q),
/// and V-block 2 g_{E[u]}.
pub fn quadrature_metric(dom: &SiegelDomain, samples: usize, seed: u64) -> Result<RMat> {
    let alg = dom.algebra();
    let nn = alg.dim();
    let k = 2.0 * nn as f64 + dom.n() as f64;
    let slice = Slice::new(alg);
    let r = slice.sqrt_r * slice.sqrt_r;
    // u = a x / 2 with a ~ a^{k-1} e^{-a√r}; moments in a are exact.
    let parts = chunked(samples, seed, 0, |rng, len| {
        let mut w_sum = 0.0;
        let mut m1 = RVec::zeros(nn);
        let mut m2 = RMat::zeros(nn, nn);
        for _ in 0..len {
            let (x, w) = slice.draw(alg, rng);
            let g = match inv_i_iq(dom, &x, 1.0) {
                Ok(g) => g * w,
                Err(_) => continue,
            };
            w_sum += g;
            m1 += &x * g;
            m2 += &x * x.transpose() * g;
        }
        (w_sum, m1, m2)
    });
    let mut w = 0.0;
    let mut m1 = RVec::zeros(nn);
    let mut m2 = RMat::zeros(nn, nn);
    for (a, b, c) in parts {
        w += a;
        m1 += b;
        m2 += c;
    }
    if w <= 0.0 {
        return Err(Error::MCVarianceTooHigh { rel_se: f64::INFINITY });
    }
    let mean = m1 * (k / r.sqrt() / (2.0 * w));
    let second = m2 * (k * (k + 1.0) / r / (4.0 * w));
    let cov = second - &mean * mean.transpose();
    let gv = dom.g_form(&mean) * 2.0;
    Ok(linalg::block_diag(&[&cov, &cov, &gv]))
}
