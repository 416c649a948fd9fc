mod common;

use std::f64::consts::{E, PI};

use common::*;
use num_complex::Complex64;
use proptest::prelude::*;
use qsiegel_core::domain::{GroupElement, SiegelPoint};
use qsiegel_core::integrals::*;
use qsiegel_core::jordan::AlgebraKind;
use qsiegel_core::sampling::{cone_point, domain_point, gaussian, gaussian_c, stream_rng};
use qsiegel_core::Error;

/// ∫_{ℂ^n} e^{-2 v* U v} dv = π^n / det(2U) in the matrix model, one factor per copy.
fn i_q_oracle(kind: AlgebraKind, mult: usize, u: &qsiegel_core::linalg::RVec) -> f64 {
    let alg = algebra(kind);
    let m = alg.to_matrix(u);
    let det: f64 = jacobi_eigenvalues(&m).iter().map(|l| 2.0 * l).product();
    (PI.powi(m.nrows() as i32) / det).powi(mult as i32)
}

/// Rank one: K = 4 / (π² (−i w)³) with w = z − z̄' − 2i v v̄'.
fn rank1_bergman(p1: &SiegelPoint, p2: &SiegelPoint) -> Complex64 {
    let w = p1.z[0] - p2.z[0].conj() - Complex64::new(0.0, 2.0) * p1.v[0] * p2.v[0].conj();
    Complex64::new(4.0 / (PI * PI), 0.0) / (-Complex64::i() * w).powi(3)
}

fn base_point(kind: AlgebraKind, mult: usize) -> SiegelPoint {
    let d = domain(kind, mult);
    let e = d.algebra().unit();
    SiegelPoint::new(qsiegel_core::linalg::cvec_from_real(&e) * Complex64::i(), qsiegel_core::linalg::CVec::zeros(d.n()))
}

#[test]
fn i_unit_matches_gindikin() {
    for k in KINDS {
        let alg = algebra(k);
        let (v, se) = i_unit(&alg, 200_000, 3).unwrap();
        let want = i_unit_exact(k);
        assert!((v - want).abs() <= (3.0 * se).max(1e-12 * want), "{k:?}: {v} ± {se} vs {want}");
        assert!(se <= 0.01 * want);
    }
    // the sampler itself on a diagonal algebra, where the answer is known
    let d = domain(AlgebraKind::Diagonal { r: 3 }, 1);
    let c = cone_integrals(&d, &d.algebra().unit(), Method::MonteCarlo, 200_000, 4).unwrap();
    assert!(!c.i_closed);
    assert!((c.i - 0.125).abs() <= 3.0 * c.i_std_error, "{} ± {}", c.i, c.i_std_error);
}

#[test]
fn closed_form_examples() {
    let d1 = domain(AlgebraKind::Diagonal { r: 1 }, 1);
    let c = cone_integrals(&d1, &rvec(&[1.0]), Method::Auto, 0, 0).unwrap();
    assert!(c.i_closed && (c.i - 0.5).abs() < 1e-15 && (c.i_q - PI / 2.0).abs() < 1e-14);
    let d2 = domain(AlgebraKind::Diagonal { r: 2 }, 1);
    let c = cone_integrals(&d2, &rvec(&[1.0, 1.0]), Method::Auto, 0, 0).unwrap();
    assert!((c.i - 0.25).abs() < 1e-15);
    let u = rvec(&[0.3, 1.7]);
    let c = cone_integrals(&d2, &u, Method::Auto, 0, 0).unwrap();
    assert!((c.i - 1.0 / (4.0 * 0.3 * 1.7)).abs() < 1e-14);
    let c2 = cone_integrals(&d2, &(&u * 2.0), Method::Auto, 0, 0).unwrap();
    assert!((c2.i - c.i / 4.0).abs() < 1e-15);
    assert!(matches!(cone_integrals(&d2, &rvec(&[1.0, -0.1]), Method::Auto, 0, 0), Err(Error::NotInCone)));
    assert!(matches!(i_q(&d2, &rvec(&[1.0, 0.0])), Err(Error::NotInCone)));
}

#[test]
fn scaling_law_on_sampled_algebras() {
    for k in [AlgebraKind::SymReal { n: 3 }, AlgebraKind::HermComplex { n: 2 }] {
        let d = domain(k, 1);
        let u = cone_point(d.algebra(), &mut stream_rng(6, 0), 0.5, 2.0);
        let a = cone_integrals(&d, &u, Method::Auto, 50_000, 9).unwrap();
        let b = cone_integrals(&d, &(&u * 2.0), Method::Auto, 50_000, 9).unwrap();
        let nn = d.dim_u() as i32;
        assert!((b.i - a.i * 2f64.powi(-nn)).abs() < 1e-12 * a.i);
        // and I(u) = I(e) det(u)^{-N/r} against the exact I(e)
        let want = i_unit_exact(k) * d.algebra().det(&u).unwrap().powf(-(nn as f64) / d.algebra().rank() as f64);
        assert!((a.i - want).abs() <= 3.0 * a.i_std_error);
    }
}

#[test]
fn i_q_monte_carlo_oracle() {
    // E[e^{-2⟨u,Q(v,v)⟩} / φ(v)] with Re v, Im v standard normal, φ their density
    let d = domain(AlgebraKind::SymReal { n: 2 }, 1);
    let u = d.algebra().from_matrix(&qsiegel_core::linalg::CMat::from_row_slice(2, 2, &[1.0, 0.3, 0.3, 0.8].map(|a| Complex64::new(a, 0.0))));
    let mut rng = stream_rng(12, 0);
    let n = 200_000;
    let (mut s1, mut s2) = (0.0, 0.0);
    for _ in 0..n {
        let v = gaussian_c(&mut rng, 2);
        let q = d.q_real(&v);
        let phi = (-0.5 * v.norm_squared()).exp() / (2.0 * PI).powi(2);
        let f = (-2.0 * u.dot(&q)).exp() / phi;
        s1 += f;
        s2 += f * f;
    }
    let mean = s1 / n as f64;
    let se = ((s2 / n as f64 - mean * mean) / n as f64).sqrt();
    let exact = i_q(&d, &u).unwrap();
    assert!((mean - exact).abs() <= 4.0 * se, "{mean} ± {se} vs {exact}");
}

#[test]
fn bergman_rank1_closed_form() {
    let d = domain(AlgebraKind::Diagonal { r: 1 }, 1);
    let base = base_point(AlgebraKind::Diagonal { r: 1 }, 1);
    let q = bergman_kernel(&d, &base, &base, Method::Quadrature, 0, 0).unwrap();
    assert!((q.complex() - Complex64::new(1.0 / (2.0 * PI * PI), 0.0)).norm() < 1e-12);
    assert!((q.value[0] - 0.050660).abs() < 1e-6);
    for t in 0..10 {
        let mut rng = stream_rng(13, t);
        let (a, b) = (domain_point(&d, &mut rng), domain_point(&d, &mut rng));
        let want = rank1_bergman(&a, &b);
        let q = bergman_kernel(&d, &a, &b, Method::Quadrature, 0, 0).unwrap();
        assert!((q.complex() - want).norm() <= 1e-9 * want.norm(), "{} vs {want}", q.complex());
        let m = bergman_kernel(&d, &a, &b, Method::MonteCarlo, 20_000, 1).unwrap();
        assert!((m.complex() - want).norm() <= (3.0 * m.std_error).max(1e-12 * want.norm()));
    }
}

#[test]
fn bergman_at_base_point() {
    let cases = [
        (AlgebraKind::Diagonal { r: 2 }, 1),
        (AlgebraKind::Diagonal { r: 2 }, 2),
        (AlgebraKind::SymReal { n: 2 }, 1),
        (AlgebraKind::SymReal { n: 3 }, 1),
        (AlgebraKind::HermComplex { n: 2 }, 1),
    ];
    for (k, mult) in cases {
        let d = domain(k, mult);
        let p = base_point(k, mult);
        let est = bergman_kernel(&d, &p, &p, Method::Auto, 200_000, 2).unwrap();
        let want = bergman_at_base(k, mult);
        let got = est.complex();
        assert!(got.im.abs() <= 1e-12 * want);
        assert!((got.re - want).abs() <= (3.0 * est.std_error).max(1e-12 * want), "{k:?} x{mult}: {} ± {} vs {want}", got.re, est.std_error);
        assert!((got.re - want).abs() <= 0.02 * want);
    }
}

#[test]
fn errors() {
    let d = domain(AlgebraKind::Diagonal { r: 1 }, 1);
    let out = SiegelPoint::new(cvec(&[(0.0, 0.5)]), cvec(&[(1.0, 0.0)]));
    let ok = base_point(AlgebraKind::Diagonal { r: 1 }, 1);
    assert!(matches!(bergman_kernel(&d, &out, &ok, Method::Auto, 10, 0), Err(Error::NotInDomain)));
    let d2 = domain(AlgebraKind::Diagonal { r: 2 }, 1);
    let p = base_point(AlgebraKind::Diagonal { r: 2 }, 1);
    assert!(bergman_kernel(&d2, &p, &p, Method::Quadrature, 10, 0).is_err());
}

#[test]
fn gauss_kronrod() {
    let (v, err) = adaptive_gk(&|x: f64| Complex64::new(x.exp(), x.sin()), 0.0, 1.0, 1e-13, 30).unwrap();
    assert!((v - Complex64::new(E - 1.0, 1.0 - 1f64.cos())).norm() < 1e-13 && err < 1e-12);
    let (v, _) = adaptive_gk(&|x: f64| Complex64::new(x.sqrt(), 0.0), 0.0, 1.0, 1e-12, 50).unwrap();
    assert!((v.re - 2.0 / 3.0).abs() < 1e-10);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn i_q_matches_matrix_model(ki in 0..KINDS.len(), mult in 1..3usize, seed in any::<u64>()) {
        let k = KINDS[ki];
        let d = domain(k, mult);
        let u = cone_point(d.algebra(), &mut stream_rng(seed, 0), 0.3, 2.0);
        let got = i_q(&d, &u).unwrap();
        let want = i_q_oracle(k, mult, &u);
        prop_assert!((got - want).abs() <= 1e-9 * want);
    }

    /// Hermitian symmetry and invariance under the Heisenberg group, with a shared seed.
    #[test]
    fn bergman_symmetries(ki in 0..4usize, seed in any::<u64>()) {
        let k = [AlgebraKind::Diagonal { r: 1 }, AlgebraKind::Diagonal { r: 2 }, AlgebraKind::SymReal { n: 2 }, AlgebraKind::HermComplex { n: 2 }][ki];
        let d = domain(k, 1);
        let mut rng = stream_rng(seed, 0);
        let (a, b) = (domain_point(&d, &mut rng), domain_point(&d, &mut rng));
        let n = 20_000;
        let kab = bergman_kernel(&d, &a, &b, Method::Auto, n, 5).unwrap();
        let kba = bergman_kernel(&d, &b, &a, Method::Auto, n, 5).unwrap();
        let scale = kab.complex().norm() + kab.std_error;
        prop_assert!((kab.complex() - kba.complex().conj()).norm() <= 1e-10 * scale);
        let g = GroupElement { x0: gaussian(&mut rng, d.dim_u()), v0: gaussian_c(&mut rng, d.n()) };
        let kg = bergman_kernel(&d, &d.group_act(&g, &a), &d.group_act(&g, &b), Method::Auto, n, 5).unwrap();
        prop_assert!((kg.complex() - kab.complex()).norm() <= 1e-8 * scale, "{} vs {}", kg.complex(), kab.complex());
    }
}
