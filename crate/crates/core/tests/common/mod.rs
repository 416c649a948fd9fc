#![allow(dead_code)]

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use rand::Rng;
use statrs::function::gamma::gamma;

use qsiegel_core::catalog::{catalog_get, catalog_list, CatalogEntry, WVariant};
use qsiegel_core::domain::{JordanRepresentation, SiegelDomain};
use qsiegel_core::jordan::{AlgebraKind, EuclideanJordanAlgebra};
use qsiegel_core::linalg::{CMat, CVec, RMat, RVec};
use qsiegel_core::sampling;
use qsiegel_core::subspace::RealSubspace;

pub const KINDS: [AlgebraKind; 8] = [
    AlgebraKind::Diagonal { r: 1 },
    AlgebraKind::Diagonal { r: 2 },
    AlgebraKind::Diagonal { r: 3 },
    AlgebraKind::SymReal { n: 2 },
    AlgebraKind::SymReal { n: 3 },
    AlgebraKind::SymReal { n: 4 },
    AlgebraKind::HermComplex { n: 2 },
    AlgebraKind::HermComplex { n: 3 },
];

pub fn algebra(kind: AlgebraKind) -> EuclideanJordanAlgebra {
    EuclideanJordanAlgebra::new(kind).unwrap()
}

pub fn domain(kind: AlgebraKind, multiplicity: usize) -> SiegelDomain {
    let alg = algebra(kind);
    let rep = JordanRepresentation::standard(&alg, multiplicity);
    SiegelDomain::new(alg, rep)
}

/// Every (entry, variant, domain, W) of the catalog.
pub fn catalog_cases() -> Vec<(CatalogEntry, WVariant, SiegelDomain, RealSubspace)> {
    let mut out = Vec::new();
    for name in catalog_list() {
        let e = catalog_get(name).unwrap();
        let d = e.domain().unwrap();
        for v in e.variants.clone() {
            let w = e.subspace(&d, &v);
            out.push((e.clone(), v, d.clone(), w));
        }
    }
    out
}

pub fn mf_cases() -> Vec<(CatalogEntry, WVariant, SiegelDomain, RealSubspace)> {
    catalog_cases().into_iter().filter(|c| c.1.expected_mf).collect()
}

pub fn rvec(x: &[f64]) -> RVec {
    RVec::from_column_slice(x)
}

pub fn cvec(x: &[(f64, f64)]) -> CVec {
    CVec::from_iterator(x.len(), x.iter().map(|&(a, b)| Complex64::new(a, b)))
}

/// Element with eigenvalues of modulus in [0.5, 2] and random signs.
pub fn invertible(alg: &EuclideanJordanAlgebra, rng: &mut impl Rng) -> RVec {
    let c = sampling::cone_point(alg, rng, 0.5, 2.0);
    let signs: Vec<f64> = (0..alg.rank()).map(|_| if rng.random::<bool>() { 1.0 } else { -1.0 }).collect();
    let dec = alg.spectral_decompose(&c).unwrap();
    let mut out = RVec::zeros(alg.dim());
    let mut k = 0;
    for (lam, (idem, &m)) in dec.eigenvalues.iter().zip(dec.idempotents.iter().zip(dec.multiplicities.iter())) {
        out += idem * (lam * signs[k]);
        k += m;
    }
    out
}

/// Random real subspace of ℝ^m of random dimension.
pub fn random_subspace(m: usize, rng: &mut impl Rng) -> RealSubspace {
    let d = rng.random_range(0..=m);
    let vs: Vec<RVec> = (0..d).map(|_| sampling::gaussian(rng, m)).collect();
    RealSubspace::span_vectors(m, &vs, 1e-9)
}

/// Jordan product through the matrix model, (XY + YX) / 2.
pub fn matrix_product(alg: &EuclideanJordanAlgebra, x: &RVec, y: &RVec) -> RVec {
    let a = alg.to_matrix(x);
    let b = alg.to_matrix(y);
    alg.from_matrix(&((&a * &b + &b * &a) * Complex64::new(0.5, 0.0)))
}

/// Eigenvalues of a Hermitian matrix by cyclic Jacobi rotations on its real
/// symmetric embedding; each eigenvalue appears once, sorted descending.
pub fn jacobi_eigenvalues(h: &CMat) -> Vec<f64> {
    let n = h.nrows();
    let mut a = DMatrix::<f64>::zeros(2 * n, 2 * n);
    for i in 0..n {
        for j in 0..n {
            let z = h[(i, j)];
            a[(i, j)] = z.re;
            a[(i + n, j + n)] = z.re;
            a[(i, j + n)] = -z.im;
            a[(i + n, j)] = z.im;
        }
    }
    let m = 2 * n;
    for _ in 0..100 {
        let off: f64 = (0..m).flat_map(|i| (0..m).filter(move |&j| j != i).map(move |j| (i, j))).map(|(i, j)| a[(i, j)].powi(2)).sum();
        if off < 1e-30 {
            break;
        }
        for p in 0..m {
            for q in p + 1..m {
                if a[(p, q)].abs() < 1e-300 {
                    continue;
                }
                let theta = (a[(q, q)] - a[(p, p)]) / (2.0 * a[(p, q)]);
                let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
                let t = if theta == 0.0 { 1.0 } else { t };
                let c = 1.0 / (t * t + 1.0).sqrt();
                let s = t * c;
                for k in 0..m {
                    let akp = a[(k, p)];
                    let akq = a[(k, q)];
                    a[(k, p)] = c * akp - s * akq;
                    a[(k, q)] = s * akp + c * akq;
                }
                for k in 0..m {
                    let apk = a[(p, k)];
                    let aqk = a[(q, k)];
                    a[(p, k)] = c * apk - s * aqk;
                    a[(q, k)] = s * apk + c * aqk;
                }
            }
        }
    }
    let mut d: Vec<f64> = (0..m).map(|i| a[(i, i)]).collect();
    d.sort_by(|x, y| y.partial_cmp(x).unwrap());
    d.into_iter().step_by(2).collect()
}

/// Peirce multiplicity d: 0 for diagonal algebras, 1 for Sym(n, ℝ), 2 for Herm(n, ℂ).
pub fn peirce_d(kind: AlgebraKind) -> f64 {
    match kind {
        AlgebraKind::Diagonal { .. } => 0.0,
        AlgebraKind::SymReal { .. } => 1.0,
        AlgebraKind::HermComplex { .. } => 2.0,
    }
}

/// Gindikin gamma function of the cone, for Lebesgue measure in orthonormal
/// trace-form coordinates: ∫_Ω e^{-tr(xy)} det(x)^{s - N/r} dx = Γ_Ω(s) det(y)^{-s}.
pub fn gindikin_gamma(kind: AlgebraKind, s: f64) -> f64 {
    let alg = algebra(kind);
    let (nn, r) = (alg.dim() as f64, alg.rank());
    let d = peirce_d(kind);
    let mut g = (2.0 * std::f64::consts::PI).powf((nn - r as f64) / 2.0);
    for j in 0..r {
        g *= gamma(s - j as f64 * d / 2.0);
    }
    g
}

/// I(e) = ∫_Ω e^{-2 tr y} dy.
pub fn i_unit_exact(kind: AlgebraKind) -> f64 {
    let nn = algebra(kind).dim() as f64;
    gindikin_gamma(kind, gindikin_s0(kind)) * 2f64.powf(-nn)
}

fn gindikin_s0(kind: AlgebraKind) -> f64 {
    let alg = algebra(kind);
    alg.dim() as f64 / alg.rank() as f64
}

/// K((ie, 0), (ie, 0)) for `multiplicity` copies of the standard representation.
pub fn bergman_at_base(kind: AlgebraKind, multiplicity: usize) -> f64 {
    let alg = algebra(kind);
    let (nn, r, p) = (alg.dim() as f64, alg.rank() as f64, multiplicity as f64);
    let s = 2.0 * nn / r + p;
    let pi = std::f64::consts::PI;
    (2.0 * pi).powf(-nn) * (2.0 / pi).powf(r * p) * gindikin_gamma(kind, s) * 2f64.powf(-r * s) / i_unit_exact(kind)
}

/// Orthonormal basis of the kernel of `a` by SVD, independent of the
/// library's subspace code.
pub fn kernel_basis(a: &DMatrix<f64>, m: usize) -> DMatrix<f64> {
    if a.nrows() == 0 {
        return DMatrix::identity(m, m);
    }
    // zero rows pad A to at least m rows so the SVD returns a full right basis
    let k = a.nrows().max(m);
    let padded = DMatrix::from_fn(k, m, |i, j| if i < a.nrows() { a[(i, j)] } else { 0.0 });
    let svd = nalgebra::linalg::SVD::new(padded, false, true);
    let vt = svd.v_t.unwrap();
    let smax = svd.singular_values.max();
    let cols: Vec<DVector<f64>> = (0..m)
        .filter(|&i| svd.singular_values[i] <= 1e-9 * smax)
        .map(|i| vt.row(i).transpose())
        .collect();
    if cols.is_empty() {
        DMatrix::zeros(m, 0)
    } else {
        DMatrix::from_columns(&cols)
    }
}

/// Whether Im Q vanishes on S = j W^⊥ computed from first principles:
/// ⟨b_k, Q(v, v')⟩ = 2 v'* R_k v on a basis of S.
pub fn imq_oracle(dom: &SiegelDomain, w_basis: &[Vec<f64>]) -> bool {
    let n = dom.n();
    let m = 2 * n;
    let b = DMatrix::from_fn(w_basis.len(), m, |i, j| w_basis[i][j]);
    let perp = kernel_basis(&b, m);
    let to_c = |col: DVector<f64>| CVec::from_fn(n, |i, _| Complex64::new(col[i], col[i + n]) * Complex64::new(0.0, 1.0));
    let s: Vec<CVec> = (0..perp.ncols()).map(|k| to_c(perp.column(k).into_owned())).collect();
    let mut worst: f64 = 0.0;
    for a in &s {
        for c in &s {
            for r in dom.representation().matrices() {
                let q = c.adjoint() * r * a;
                worst = worst.max((q[(0, 0)] * 2.0).im.abs());
            }
        }
    }
    worst < 1e-10
}

pub fn max_abs(m: &RMat) -> f64 {
    m.iter().fold(0.0f64, |a, &b| a.max(b.abs()))
}
