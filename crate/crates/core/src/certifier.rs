//! Certificates for the three equivalent multiplicity-freeness conditions:
//! Im Q(S, S) = 0, coisotropy of the G^W-orbits for the Bergman metric, and
//! multiplicity one of the orbit projections.

use rayon::prelude::*;
use serde::Serialize;

use crate::domain::{SiegelDomain, SiegelPoint};
use crate::error::{Error, Result};
use crate::integrals;
use crate::json::PointJson;
use crate::linalg::{self, CVec, RMat, RVec};
use crate::sampling::{self, stream_rng};
use crate::spaces::{radical_on_p, BaseSpaces};
use crate::subspace::RealSubspace;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Condition {
    ImqVanishes,
    Coisotropic,
    OrbitMultiplicityOne,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Witness {
    pub vectors: Vec<Vec<f64>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub point: Option<PointJson>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub x: Option<Vec<f64>>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Certificate {
    pub condition: Condition,
    pub verdict: bool,
    pub residual: f64,
    pub witness: Option<Witness>,
    pub tol: f64,
    pub seed: Option<u64>,
    pub samples: usize,
    pub metric_scale: Option<f64>,
}

fn to_vec(v: &RVec) -> Vec<f64> {
    v.iter().cloned().collect()
}

/// Closed-form Bergman metric at (ie, 0).
#[derive(Debug, Clone)]
pub struct BaseMetric {
    /// Full (2N + 2n)-dimensional form.
    pub matrix: RMat,
    /// M_kl = ½(tr T_{u_k u_l} + tr_C R_{u_k u_l}); the U-block is diag(M, M).
    pub g_u: RMat,
    pub e_prime: RVec,
}

pub fn base_metric(dom: &SiegelDomain) -> Result<BaseMetric> {
    let alg = dom.algebra();
    let nn = alg.dim();
    let mut g_u = RMat::zeros(nn, nn);
    for k in 0..nn {
        for l in 0..nn {
            let mut ek = RVec::zeros(nn);
            ek[k] = 1.0;
            let mut el = RVec::zeros(nn);
            el[l] = 1.0;
            let p = alg.product(&ek, &el);
            g_u[(k, l)] = 0.5 * (alg.left_mult(&p)?.trace() + dom.r_of(&p).trace().re);
        }
    }
    let e_prime = dom.e_prime();
    let g_v = dom.g_form(&e_prime);
    let matrix = linalg::block_diag(&[&g_u, &g_u, &g_v]);
    let (vals, _) = linalg::sym_eigen(&matrix)?;
    let min_eig = vals[vals.len() - 1];
    if min_eig <= 0.0 {
        return Err(Error::NotPositiveDefinite { min_eig });
    }
    Ok(BaseMetric { matrix, g_u, e_prime })
}

/// Complex structure on (ζ, γ) coordinates.
pub fn j_full(dom: &SiegelDomain) -> RMat {
    linalg::block_diag(&[&linalg::j_matrix(dom.dim_u()), &linalg::j_matrix(dom.n())])
}

/// Least-squares factor t with `quad ≈ t · base`.
pub fn metric_scale(base: &RMat, quad: &RMat) -> f64 {
    base.dot(quad) / base.dot(base)
}

pub fn check_imq_vanishes(dom: &SiegelDomain, w: &RealSubspace) -> Certificate {
    let tol = dom.tol().zero;
    let s = BaseSpaces::new(dom, w).s;
    let vs: Vec<CVec> = s.vectors().iter().map(linalg::from_real).collect();
    let mut residual: f64 = 0.0;
    let mut scale: f64 = 1.0;
    let mut worst = None;
    for a in 0..vs.len() {
        for b in a + 1..vs.len() {
            let q = dom.q_eval(&vs[a], &vs[b]);
            let im = linalg::im(&q).norm();
            scale = scale.max(q.norm());
            if im > residual {
                residual = im;
                worst = Some((a, b));
            }
        }
    }
    let verdict = residual <= tol * scale;
    let witness = if verdict {
        None
    } else {
        let (a, b) = worst.expect("positive residual has a pair");
        Some(Witness { vectors: vec![to_vec(&s.vectors()[a]), to_vec(&s.vectors()[b])], point: None, x: None })
    };
    Certificate { condition: Condition::ImqVanishes, verdict, residual, witness, tol: tol * scale, seed: None, samples: 0, metric_scale: None }
}

/// Worst unit vector of `c` outside `target`, and its distance.
fn worst_vector(c: &RealSubspace, target: &RealSubspace) -> (f64, RVec) {
    if c.dim() == 0 {
        return (0.0, RVec::zeros(c.ambient()));
    }
    let r = c.basis() - target.projector() * c.basis();
    let svd = r.svd(false, true);
    let (i, s) = svd.singular_values.iter().enumerate().fold((0, -1.0), |acc, (i, &s)| if s > acc.1 { (i, s) } else { acc });
    let coef = svd.v_t.expect("v_t requested").row(i).transpose();
    (s, c.basis() * coef)
}

struct CoisoSample {
    residual: f64,
    witness: RVec,
    point: SiegelPoint,
}

fn coisotropic_at(dom: &SiegelDomain, w: &RealSubspace, metric: &RMat, jf: &RMat, p: SiegelPoint) -> Result<CoisoSample> {
    let tol = dom.tol().rank;
    let t = dom.orbit_tangent(w, &p);
    let tr = dom.transport_to_base(&p)?;
    let t_base = t.image(&tr.derivative, tol);
    let c = t_base.complement_wrt(metric, tol);
    let jt = t_base.image(jf, tol);
    let (residual, v) = worst_vector(&c, &jt);
    let witness = tr.derivative.clone().lu().solve(&v).unwrap_or(v);
    Ok(CoisoSample { residual, witness, point: p })
}

pub fn check_coisotropic(dom: &SiegelDomain, w: &RealSubspace, n_samples: usize, seed: u64) -> Result<Certificate> {
    check_coisotropic_scaled(dom, w, n_samples, seed, 1.0)
}

/// Same as [`check_coisotropic`] with the base metric multiplied by `t`.
pub fn check_coisotropic_scaled(dom: &SiegelDomain, w: &RealSubspace, n_samples: usize, seed: u64, t: f64) -> Result<Certificate> {
    let tol = dom.tol().sub;
    let metric = base_metric(dom)?.matrix * t;
    let jf = j_full(dom);
    let results: Vec<Result<CoisoSample>> = (0..n_samples)
        .into_par_iter()
        .map(|i| {
            let mut rng = stream_rng(seed, i as u64);
            coisotropic_at(dom, w, &metric, &jf, sampling::domain_point(dom, &mut rng))
        })
        .collect();
    let mut residual: f64 = 0.0;
    let mut witness = None;
    for r in results {
        let s = r?;
        if s.residual > tol && witness.is_none() {
            witness = Some(Witness { vectors: vec![to_vec(&s.witness)], point: Some(PointJson::from(&s.point)), x: None });
        }
        residual = residual.max(s.residual);
    }
    Ok(Certificate { condition: Condition::Coisotropic, verdict: residual <= tol, residual, witness, tol, seed: Some(seed), samples: n_samples, metric_scale: None })
}

/// jW^{⊥,g_x} ⊆ N_x + W, for x with g_x positive semi-definite on V.
pub fn check_orbit_multiplicity(dom: &SiegelDomain, w: &RealSubspace, x: &RVec) -> Result<Certificate> {
    let (residual, v) = orbit_multiplicity_residual(dom, w, x)?;
    let tol = dom.tol().sub;
    let verdict = residual <= tol;
    let witness = (!verdict).then(|| Witness { vectors: vec![to_vec(&v)], point: None, x: Some(to_vec(x)) });
    Ok(Certificate { condition: Condition::OrbitMultiplicityOne, verdict, residual, witness, tol, seed: None, samples: 1, metric_scale: None })
}

fn orbit_multiplicity_residual(dom: &SiegelDomain, w: &RealSubspace, x: &RVec) -> Result<(f64, RVec)> {
    dom.algebra().check(x)?;
    let tol = dom.tol();
    let g = dom.g_form(x);
    let (vals, _) = linalg::sym_eigen(&g)?;
    let lmin = vals[vals.len() - 1];
    let scale = vals.iter().map(|l| l.abs()).fold(0.0, f64::max).max(1.0);
    if lmin < -tol.psd * scale {
        return Err(Error::NotPSD { min_eig: lmin });
    }
    let base = BaseSpaces::new(dom, w);
    let n_x = radical_on_p(dom, &base.p, x)?;
    let lhs = w.complement_wrt(&g, tol.rank).image(&linalg::j_matrix(dom.n()), tol.rank);
    let target = n_x.sum(w, tol.rank);
    Ok(worst_vector(&lhs, &target))
}

/// Orbit multiplicity at `n_samples` random points of the open cone.
pub fn check_orbit_multiplicity_sampled(dom: &SiegelDomain, w: &RealSubspace, n_samples: usize, seed: u64) -> Result<Certificate> {
    let tol = dom.tol().sub;
    let results: Vec<Result<(f64, RVec, RVec)>> = (0..n_samples)
        .into_par_iter()
        .map(|i| {
            let mut rng = stream_rng(seed, i as u64);
            let x = sampling::cone_point(dom.algebra(), &mut rng, 0.2, 5.0);
            let (r, v) = orbit_multiplicity_residual(dom, w, &x)?;
            Ok((r, v, x))
        })
        .collect();
    let mut residual: f64 = 0.0;
    let mut witness = None;
    for r in results {
        let (res, v, x) = r?;
        if res > tol && witness.is_none() {
            witness = Some(Witness { vectors: vec![to_vec(&v)], point: None, x: Some(to_vec(&x)) });
        }
        residual = residual.max(res);
    }
    Ok(Certificate { condition: Condition::OrbitMultiplicityOne, verdict: residual <= tol, residual, witness, tol, seed: Some(seed), samples: n_samples, metric_scale: None })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct OrthocomplementReport {
    pub max_distance: f64,
    pub samples: usize,
    pub seed: u64,
}

/// Distance between the metric orthocomplement of the orbit tangent at
/// c = (iy, js) and J applied to the tangent of H_c, maximized over samples.
pub fn check_orthocomplement(dom: &SiegelDomain, w: &RealSubspace, n_samples: usize, seed: u64) -> Result<OrthocomplementReport> {
    if !check_imq_vanishes(dom, w).verdict {
        return Err(Error::HypothesisViolated("Im Q(S, S) is not zero".into()));
    }
    let tol = dom.tol().rank;
    let bm = base_metric(dom)?;
    let jf = j_full(dom);
    let jv = linalg::j_matrix(dom.n());
    let s = BaseSpaces::new(dom, w).s;
    let sprime = w.complement_wrt(&dom.g_form(&bm.e_prime), tol).image(&jv, tol);
    let alg = dom.algebra();
    let nn = alg.dim();
    let m = dom.real_dim();
    let dists: Vec<Result<f64>> = (0..n_samples)
        .into_par_iter()
        .map(|i| {
            let mut rng = stream_rng(seed, i as u64);
            let coef = sampling::gaussian(&mut rng, s.dim());
            let s_vec = if s.dim() == 0 { RVec::zeros(2 * dom.n()) } else { s.basis() * coef * 0.7 };
            let sc = linalg::from_real(&s_vec);
            let js = linalg::from_real(&(&jv * &s_vec));
            let cone = sampling::cone_point(alg, &mut rng, 0.2, 5.0);
            let y = dom.q_real(&sc) + &cone;
            let c = SiegelPoint::new(y.map(|a| num_complex::Complex64::new(0.0, a)), js.clone());
            let tr = dom.transport_to_base(&c)?;
            let g_c = tr.derivative.transpose() * &bm.matrix * &tr.derivative;
            let t = dom.orbit_tangent(w, &c);
            let lhs = t.complement_wrt(&g_c, tol);
            let r = dom.r_of(&cone);
            let mut cols: Vec<RVec> = (0..nn)
                .map(|k| {
                    let mut e = RVec::zeros(m);
                    e[k] = 1.0;
                    e
                })
                .collect();
            for sp in sprime.vectors() {
                let gamma = &r * linalg::from_real(&sp);
                let zeta = dom.q_eval(&js, &gamma) * num_complex::Complex64::new(0.0, 2.0);
                cols.push(dom.join(&zeta, &gamma));
            }
            let h = RealSubspace::span_vectors(m, &cols, tol);
            Ok(lhs.distance(&h.image(&jf, tol)))
        })
        .collect();
    let mut max_distance: f64 = 0.0;
    for d in dists {
        max_distance = max_distance.max(d?);
    }
    Ok(OrthocomplementReport { max_distance, samples: n_samples, seed })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CertifyConfig {
    pub coisotropic_samples: usize,
    pub orbit_samples: usize,
    pub orthocomplement_samples: usize,
    pub metric_samples: usize,
    pub seed: u64,
}

impl Default for CertifyConfig {
    fn default() -> Self {
        CertifyConfig { coisotropic_samples: 20, orbit_samples: 50, orthocomplement_samples: 20, metric_samples: 200_000, seed: 0 }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CombinedReport {
    pub consistent: bool,
    /// Common verdict when consistent.
    pub mf: Option<bool>,
    pub certificates: Vec<Certificate>,
    pub orthocomplement: Option<OrthocomplementReport>,
    pub metric_scale: Option<f64>,
}

pub fn certify_all(dom: &SiegelDomain, w: &RealSubspace, cfg: &CertifyConfig) -> Result<CombinedReport> {
    let scale = if cfg.metric_samples > 0 {
        let bm = base_metric(dom)?;
        let q = integrals::quadrature_metric(dom, cfg.metric_samples, cfg.seed)?;
        Some(metric_scale(&bm.matrix, &q))
    } else {
        None
    };
    let mut certs = vec![
        check_imq_vanishes(dom, w),
        check_coisotropic(dom, w, cfg.coisotropic_samples, cfg.seed)?,
        check_orbit_multiplicity_sampled(dom, w, cfg.orbit_samples, cfg.seed)?,
    ];
    for c in &mut certs {
        c.metric_scale = scale;
    }
    let first = certs[0].verdict;
    let consistent = certs.iter().all(|c| c.verdict == first);
    let orthocomplement = if first && cfg.orthocomplement_samples > 0 { Some(check_orthocomplement(dom, w, cfg.orthocomplement_samples, cfg.seed)?) } else { None };
    Ok(CombinedReport { consistent, mf: consistent.then_some(first), certificates: certs, orthocomplement, metric_scale: scale })
}
