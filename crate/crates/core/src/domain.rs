//! Representations x ↦ R_x on V = C^n, the Hermitian map Q, the forms g_x
//! and ω_x, the Siegel domain and the Heisenberg-type group G^W.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::jordan::{ConeMode, EuclideanJordanAlgebra};
use crate::linalg::{self, CMat, CVec, RMat, RVec};
use crate::subspace::RealSubspace;
use crate::tol::Tolerances;

const I: Complex64 = Complex64 { re: 0.0, im: 1.0 };

fn c(x: f64) -> Complex64 {
    Complex64::new(x, 0.0)
}

/// The family of self-adjoint operators R_{b_k}, one per basis element of U.
#[derive(Debug, Clone)]
pub struct JordanRepresentation {
    n: usize,
    r: Vec<CMat>,
}

impl JordanRepresentation {
    /// R_x = ½ X acting on `multiplicity` copies of the defining module.
    pub fn standard(alg: &EuclideanJordanAlgebra, multiplicity: usize) -> Self {
        let m = alg.rank();
        let n = m * multiplicity;
        let r = (0..alg.dim())
            .map(|k| {
                let b = alg.basis_matrix(k);
                let mut out = CMat::zeros(n, n);
                for p in 0..multiplicity {
                    out.view_mut((p * m, p * m), (m, m)).copy_from(&(b * c(0.5)));
                }
                out
            })
            .collect();
        JordanRepresentation { n, r }
    }

    /// User-supplied R_{b_k}; validated before use.
    pub fn from_matrices(alg: &EuclideanJordanAlgebra, r: Vec<CMat>) -> Result<Self> {
        if r.len() != alg.dim() {
            return Err(Error::InvalidRepresentation(format!("expected {} matrices, got {}", alg.dim(), r.len())));
        }
        let n = r[0].nrows();
        if n == 0 || r.iter().any(|m| m.nrows() != n || m.ncols() != n) {
            return Err(Error::InvalidRepresentation("matrices must be square of a common positive size".into()));
        }
        let rep = JordanRepresentation { n, r };
        rep.validate(alg)?;
        Ok(rep)
    }

    pub fn validate(&self, alg: &EuclideanJordanAlgebra) -> Result<()> {
        let tol = alg.tol().zero;
        for (k, m) in self.r.iter().enumerate() {
            let d = (m - m.adjoint()).norm();
            if d > tol {
                return Err(Error::InvalidRepresentation(format!("R of basis element {k} is not self-adjoint ({d:e})")));
            }
        }
        let re = self.r_of(&alg.unit());
        let d = (&re - CMat::identity(self.n, self.n) * c(0.5)).norm();
        if d > tol {
            return Err(Error::InvalidRepresentation(format!("R_e differs from Id/2 by {d:e}")));
        }
        for i in 0..alg.dim() {
            for j in i..alg.dim() {
                let bi = basis_vec(alg.dim(), i);
                let bj = basis_vec(alg.dim(), j);
                let lhs = self.r_of(&alg.product(&bi, &bj)) * c(2.0);
                let (a, b) = (&self.r[i] * c(2.0), &self.r[j] * c(2.0));
                let rhs = (&a * &b + &b * &a) * c(0.5);
                let d = (lhs - rhs).norm();
                if d > tol {
                    return Err(Error::InvalidRepresentation(format!("homomorphism fails on basis pair ({i},{j}) by {d:e}")));
                }
            }
        }
        Ok(())
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn matrices(&self) -> &[CMat] {
        &self.r
    }

    pub fn r_of(&self, x: &RVec) -> CMat {
        let mut out = CMat::zeros(self.n, self.n);
        for (k, m) in self.r.iter().enumerate() {
            if x[k] != 0.0 {
                out += m * c(x[k]);
            }
        }
        out
    }
}

fn basis_vec(n: usize, i: usize) -> RVec {
    RVec::from_fn(n, |k, _| if k == i { 1.0 } else { 0.0 })
}

#[derive(Debug, Clone, PartialEq)]
pub struct SiegelPoint {
    pub z: CVec,
    pub v: CVec,
}

impl SiegelPoint {
    pub fn new(z: CVec, v: CVec) -> Self {
        SiegelPoint { z, v }
    }

    /// Coordinates (Re z, Im z, Re v, Im v).
    pub fn to_real(&self) -> RVec {
        let a = linalg::to_real(&self.z);
        let b = linalg::to_real(&self.v);
        RVec::from_iterator(a.len() + b.len(), a.iter().chain(b.iter()).cloned())
    }
}

/// 𝐧(x0, v0).
#[derive(Debug, Clone, PartialEq)]
pub struct GroupElement {
    pub x0: RVec,
    pub v0: CVec,
}

impl GroupElement {
    pub fn inverse(&self) -> Self {
        GroupElement { x0: -&self.x0, v0: -&self.v0 }
    }
}

/// Result of moving a point to (ie, 0).
#[derive(Debug, Clone)]
pub struct Transport {
    pub image: SiegelPoint,
    /// Real derivative in (Re ζ, Im ζ, Re γ, Im γ) coordinates.
    pub derivative: RMat,
    /// u = log(Im z − Q(v, v)).
    pub u: RVec,
}

#[derive(Debug, Clone)]
pub struct SiegelDomain {
    alg: EuclideanJordanAlgebra,
    rep: JordanRepresentation,
}

impl SiegelDomain {
    pub fn new(alg: EuclideanJordanAlgebra, rep: JordanRepresentation) -> Self {
        SiegelDomain { alg, rep }
    }

    pub fn algebra(&self) -> &EuclideanJordanAlgebra {
        &self.alg
    }

    pub fn representation(&self) -> &JordanRepresentation {
        &self.rep
    }

    pub fn tol(&self) -> &Tolerances {
        self.alg.tol()
    }

    pub fn with_tolerances(mut self, tol: Tolerances) -> Self {
        self.alg = self.alg.with_tolerances(tol);
        self
    }

    /// N = dim U.
    pub fn dim_u(&self) -> usize {
        self.alg.dim()
    }

    /// n = dim_C V.
    pub fn n(&self) -> usize {
        self.rep.n()
    }

    /// Real dimension of the tangent space, 2N + 2n.
    pub fn real_dim(&self) -> usize {
        2 * self.dim_u() + 2 * self.n()
    }

    pub fn r_of(&self, x: &RVec) -> CMat {
        self.rep.r_of(x)
    }

    /// Q(v, v') with ⟨b_k, Q(v, v')⟩ = 2h(R_k v, v'), h(a, b) = b* a.
    pub fn q_eval(&self, v: &CVec, v2: &CVec) -> CVec {
        CVec::from_iterator(
            self.dim_u(),
            self.rep.matrices().iter().map(|r| v2.dotc(&(r * v)) * c(2.0)),
        )
    }

    /// Real part of Q(v, v), an element of the closed cone.
    pub fn q_real(&self, v: &CVec) -> RVec {
        linalg::re(&self.q_eval(v, v))
    }

    /// h(a, b) = b* a.
    pub fn h(a: &CVec, b: &CVec) -> Complex64 {
        b.dotc(a)
    }

    /// Matrix of g_x on V_R.
    pub fn g_form(&self, x: &RVec) -> RMat {
        linalg::complex_to_real(&(self.r_of(x) * c(2.0)))
    }

    /// ω_x(v, v') = g_x(v, jv').
    pub fn omega_form(&self, x: &RVec) -> RMat {
        self.g_form(x) * linalg::j_matrix(self.n())
    }

    /// Im z − Q(v, v).
    pub fn height(&self, p: &SiegelPoint) -> RVec {
        linalg::im(&p.z) - self.q_real(&p.v)
    }

    pub fn contains(&self, p: &SiegelPoint) -> bool {
        p.z.len() == self.dim_u() && p.v.len() == self.n() && self.alg.cone_contains(&self.height(p), ConeMode::Open)
    }

    /// [v1, v2] = 4 Im Q(v1, v2).
    pub fn bracket(&self, v1: &CVec, v2: &CVec) -> RVec {
        linalg::im(&self.q_eval(v1, v2)) * 4.0
    }

    pub fn group_mul(&self, g1: &GroupElement, g2: &GroupElement) -> GroupElement {
        GroupElement {
            x0: &g1.x0 + &g2.x0 + self.bracket(&g1.v0, &g2.v0) * 0.5,
            v0: &g1.v0 + &g2.v0,
        }
    }

    pub fn group_act(&self, g: &GroupElement, p: &SiegelPoint) -> SiegelPoint {
        let z = &p.z + linalg::cvec_from_real(&g.x0) + self.q_eval(&p.v, &g.v0) * (I * 2.0) + self.q_eval(&g.v0, &g.v0) * I;
        SiegelPoint { z, v: &p.v + &g.v0 }
    }

    /// Tangent space of the G^W orbit through `p`; `w` lives in V_R.
    pub fn orbit_tangent(&self, w: &RealSubspace, p: &SiegelPoint) -> RealSubspace {
        let nu = self.dim_u();
        let m = self.real_dim();
        let mut cols: Vec<RVec> = (0..nu).map(|k| basis_vec(m, k)).collect();
        for wr in w.vectors() {
            let wc = linalg::from_real(&wr);
            let zeta = self.q_eval(&p.v, &wc) * (I * 2.0);
            cols.push(self.join(&zeta, &wc));
        }
        RealSubspace::span_vectors(m, &cols, self.tol().rank)
    }

    /// Real coordinates of a tangent vector (ζ, γ).
    pub fn join(&self, zeta: &CVec, gamma: &CVec) -> RVec {
        SiegelPoint::new(zeta.clone(), gamma.clone()).to_real()
    }

    /// Inverse of [`join`](Self::join).
    pub fn split(&self, x: &RVec) -> (CVec, CVec) {
        let nu = self.dim_u();
        let n = self.n();
        let zeta = linalg::from_real(&x.rows(0, 2 * nu).into_owned());
        let gamma = linalg::from_real(&x.rows(2 * nu, 2 * n).into_owned());
        (zeta, gamma)
    }

    /// e^{β(T_u)} = e^{R_u}.
    pub fn exp_r(&self, u: &RVec) -> Result<CMat> {
        linalg::herm_fn(&self.r_of(u), f64::exp)
    }

    /// β(u□u') = R_{uu'} + [R_u, R_{u'}].
    pub fn beta_box(&self, u: &RVec, u2: &RVec) -> CMat {
        let a = self.r_of(u);
        let b = self.r_of(u2);
        self.r_of(&self.alg.product(u, u2)) + &a * &b - &b * &a
    }

    /// The map 𝐧(0, −v) ∘ 𝐧(−Re z, 0) ∘ t(−T_u) sending `p` to (ie, 0).
    pub fn transport_to_base(&self, p: &SiegelPoint) -> Result<Transport> {
        if !self.contains(p) {
            return Err(Error::NotInDomain);
        }
        let y = self.height(p);
        let u = self.alg.spectral_map(&y, crate::jordan::SpectralFn::Log)?;
        let exp_neg_t = self.alg.exp_left_mult(&(-&u))?;
        let exp_neg_r = self.exp_r(&(-&u))?;
        let v = p.v.clone();
        let m = self.real_dim();
        let mut d = RMat::zeros(m, m);
        for k in 0..m {
            let (zeta, gamma) = self.split(&basis_vec(m, k));
            let zeta1 = zeta - self.q_eval(&gamma, &v) * (I * 2.0);
            let zr = exp_neg_t.clone() * linalg::re(&zeta1);
            let zi = exp_neg_t.clone() * linalg::im(&zeta1);
            let zeta3 = CVec::from_fn(zr.len(), |i, _| Complex64::new(zr[i], zi[i]));
            let gamma3 = &exp_neg_r * gamma;
            d.set_column(k, &self.join(&zeta3, &gamma3));
        }
        let image = SiegelPoint::new(self.alg.unit().map(|a| Complex64::new(0.0, a)), CVec::zeros(self.n()));
        Ok(Transport { image, derivative: d, u })
    }

    /// Applies the point map of [`transport_to_base`](Self::transport_to_base) to any point.
    pub fn transport_point(&self, base: &SiegelPoint, q: &SiegelPoint) -> Result<SiegelPoint> {
        let tr = self.transport_to_base(base)?;
        let step1 = self.group_act(&GroupElement { x0: RVec::zeros(self.dim_u()), v0: -&base.v }, q);
        let step2 = self.group_act(&GroupElement { x0: -linalg::re(&base.z), v0: CVec::zeros(self.n()) }, &step1);
        let t = self.alg.exp_left_mult(&(-&tr.u))?;
        let zr = &t * linalg::re(&step2.z);
        let zi = &t * linalg::im(&step2.z);
        let z = CVec::from_fn(zr.len(), |i, _| Complex64::new(zr[i], zi[i]));
        Ok(SiegelPoint::new(z, self.exp_r(&(-&tr.u))? * step2.v))
    }

    /// ⟨e', x⟩ = 2(tr T_x + tr_C R_x).
    pub fn e_prime(&self) -> RVec {
        RVec::from_fn(self.dim_u(), |k, _| 2.0 * (self.alg.basis_left_mult()[k].trace() + self.rep.matrices()[k].trace().re))
    }
}
