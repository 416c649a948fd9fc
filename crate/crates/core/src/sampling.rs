//! Seeded sampling of algebra elements, cone points and domain points.
//!
//! Every draw is keyed by `(seed, index)` through a ChaCha stream, so a
//! batch gives the same values regardless of how it is split across threads.

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::domain::{SiegelDomain, SiegelPoint};
use crate::jordan::EuclideanJordanAlgebra;
use crate::linalg::{CVec, RVec};

pub fn stream_rng(seed: u64, index: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index);
    rng
}

pub fn gaussian(rng: &mut impl Rng, n: usize) -> RVec {
    RVec::from_fn(n, |_, _| rng.sample(StandardNormal))
}

pub fn gaussian_c(rng: &mut impl Rng, n: usize) -> CVec {
    CVec::from_fn(n, |_, _| Complex64::new(rng.sample(StandardNormal), rng.sample(StandardNormal)))
}

/// Random Jordan frame with eigenvalues uniform in `[lo, hi]`.
pub fn cone_point(alg: &EuclideanJordanAlgebra, rng: &mut impl Rng, lo: f64, hi: f64) -> RVec {
    let g = gaussian(rng, alg.dim());
    let (frame, _) = alg.jordan_frame(&g).expect("finite gaussian sample");
    let mut out = RVec::zeros(alg.dim());
    for c in frame {
        out += c * rng.random_range(lo..hi);
    }
    out
}

/// Random frame with some eigenvalues set to zero: a point of the cone
/// boundary, or 0 in rank one.
pub fn boundary_point(alg: &EuclideanJordanAlgebra, rng: &mut impl Rng) -> RVec {
    let g = gaussian(rng, alg.dim());
    let (frame, _) = alg.jordan_frame(&g).expect("finite gaussian sample");
    let r = frame.len();
    let keep = if r >= 2 { rng.random_range(1..r) } else { 0 };
    let mut out = RVec::zeros(alg.dim());
    for c in frame.iter().take(keep) {
        out += c * rng.random_range(0.2..5.0);
    }
    out
}

/// Vector of V with norm uniform in `[0, radius]`.
pub fn ball_c(rng: &mut impl Rng, n: usize, radius: f64) -> CVec {
    let g = gaussian_c(rng, n);
    let norm = g.norm();
    if norm == 0.0 {
        return g;
    }
    g * Complex64::new(rng.random_range(0.0..radius) / norm, 0.0)
}

/// z = x0 + i(Q(v, v) + y0) with y0 having eigenvalues in [0.2, 5] and |v| ≤ 2.
pub fn domain_point(dom: &SiegelDomain, rng: &mut impl Rng) -> SiegelPoint {
    let alg = dom.algebra();
    let x0 = gaussian(rng, alg.dim());
    let v = ball_c(rng, dom.n(), 2.0);
    let y = cone_point(alg, rng, 0.2, 5.0) + dom.q_real(&v);
    let z = CVec::from_fn(alg.dim(), |k, _| Complex64::new(x0[k], y[k]));
    SiegelPoint::new(z, v)
}
