//! The subspaces attached to W ⊂ V and to a point x of U:
//! P = W ∩ jW, S = j W^{⊥, re h}, ker g_x, S_x, N_x, S^x, P^x and p^x.

use crate::domain::SiegelDomain;
use crate::error::{Error, Result};
use crate::linalg::{self, RMat, RVec};
use crate::subspace::RealSubspace;

/// x-independent spaces.
#[derive(Debug, Clone)]
pub struct BaseSpaces {
    pub w: RealSubspace,
    pub jw: RealSubspace,
    pub p: RealSubspace,
    pub s: RealSubspace,
    pub js: RealSubspace,
}

impl BaseSpaces {
    pub fn new(dom: &SiegelDomain, w: &RealSubspace) -> Self {
        let tol = dom.tol().rank;
        let j = linalg::j_matrix(dom.n());
        let jw = w.image(&j, tol);
        let p = w.intersection(&jw, tol);
        let g_e = dom.g_form(&dom.algebra().unit());
        let s = w.complement_wrt(&g_e, tol).image(&j, tol);
        let js = s.image(&j, tol);
        BaseSpaces { w: w.clone(), jw, p, s, js }
    }

    /// True when S ∩ jS = {0}, so that V = P ⊕ S ⊕ jS.
    pub fn is_direct(&self, tol_rank: f64) -> bool {
        self.s.sum(&self.js, tol_rank).dim() == 2 * self.s.dim()
    }
}

#[derive(Debug, Clone)]
pub struct DerivedSpaces {
    pub base: BaseSpaces,
    pub x: RVec,
    pub ker_gx: RealSubspace,
    /// j W^{⊥, g_x}.
    pub jw_perp_gx: RealSubspace,
    pub s_x: RealSubspace,
    pub n_x: RealSubspace,
    /// S^x, a complement of N_x inside S_x.
    pub s_upper: RealSubspace,
    /// P^x = N_x^{⊥, re h} ∩ P.
    pub p_upper: RealSubspace,
    /// Projection of V onto S^x ⊕ jS^x along P, when V = P ⊕ S^x ⊕ jS^x.
    pub px: Option<RMat>,
}

/// Radical of g_x restricted to P; fails when that restriction is indefinite.
pub fn radical_on_p(dom: &SiegelDomain, p: &RealSubspace, x: &RVec) -> Result<RealSubspace> {
    let m = p.ambient();
    if p.dim() == 0 {
        return Ok(RealSubspace::zero(m));
    }
    let tol = dom.tol();
    let g = dom.g_form(x);
    let gp = p.basis().transpose() * &g * p.basis();
    let (vals, vecs) = linalg::sym_eigen(&gp)?;
    let lmax = vals.iter().map(|l| l.abs()).fold(0.0, f64::max);
    let scale = lmax.max(1.0);
    let lmin = vals[vals.len() - 1];
    if lmin < -tol.psd * scale {
        return Err(Error::NotALinearSpace { min_eig: lmin });
    }
    let idx: Vec<usize> = (0..vals.len()).filter(|&i| vals[i] <= tol.psd * scale).collect();
    let mut cols = RMat::zeros(p.dim(), idx.len());
    for (c, &i) in idx.iter().enumerate() {
        cols.set_column(c, &vecs.column(i));
    }
    Ok(RealSubspace::span(&(p.basis() * cols), tol.rank))
}

impl DerivedSpaces {
    /// `s_upper` overrides the default S^x = S_x ∩ N_x^{⊥, re h}.
    pub fn new(dom: &SiegelDomain, w: &RealSubspace, x: &RVec, s_upper: Option<&RealSubspace>) -> Result<Self> {
        let base = BaseSpaces::new(dom, w);
        let n_x = radical_on_p(dom, &base.p, x)?;
        Self::assemble(dom, base, x, n_x, s_upper)
    }

    /// Same as [`new`](Self::new) with N_x forced to `n_x` (no positivity check).
    pub fn with_radical(dom: &SiegelDomain, w: &RealSubspace, x: &RVec, n_x: RealSubspace) -> Result<Self> {
        let base = BaseSpaces::new(dom, w);
        Self::assemble(dom, base, x, n_x, None)
    }

    fn assemble(dom: &SiegelDomain, base: BaseSpaces, x: &RVec, n_x: RealSubspace, s_upper: Option<&RealSubspace>) -> Result<Self> {
        let tol = dom.tol().rank;
        let j = linalg::j_matrix(dom.n());
        let g = dom.g_form(x);
        let ker_gx = RealSubspace::from_orthonormal(linalg::null_space(&g, tol));
        let jw_perp_gx = base.w.complement_wrt(&g, tol).image(&j, tol);
        let s_x = jw_perp_gx.intersection(&base.w, tol);
        let s_upper = match s_upper {
            Some(s) => s.clone(),
            None => s_x.intersection(&n_x.orth_complement(), tol),
        };
        let p_upper = n_x.orth_complement().intersection(&base.p, tol);
        let px = projector_along_p(&base.p, &s_upper, &j);
        Ok(DerivedSpaces { base, x: x.clone(), ker_gx, jw_perp_gx, s_x, n_x, s_upper, p_upper, px })
    }
}

fn projector_along_p(p: &RealSubspace, s_upper: &RealSubspace, j: &RMat) -> Option<RMat> {
    let m = p.ambient();
    let bs = s_upper.basis();
    let jbs = j * bs;
    if p.dim() + 2 * s_upper.dim() != m {
        return None;
    }
    let basis = linalg::hcat(&[p.basis(), bs, &jbs]);
    let (lo, hi) = linalg::singular_range(&basis);
    if m > 0 && lo <= 1e-8 * hi {
        return None;
    }
    let target = linalg::hcat(&[&RMat::zeros(m, p.dim()), bs, &jbs]);
    let inv = basis.try_inverse()?;
    Some(target * inv)
}
