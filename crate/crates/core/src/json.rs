//! JSON shapes shared by reports and spec files: complex scalars are
//! `[re, im]` pairs, points are `{"z": [...], "v": [...]}`.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::domain::SiegelPoint;
use crate::linalg::CVec;

pub fn pair(z: Complex64) -> [f64; 2] {
    [z.re, z.im]
}

pub fn pairs(v: &CVec) -> Vec<[f64; 2]> {
    v.iter().map(|&z| pair(z)).collect()
}

pub fn from_pairs(p: &[[f64; 2]]) -> CVec {
    CVec::from_iterator(p.len(), p.iter().map(|a| Complex64::new(a[0], a[1])))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PointJson {
    pub z: Vec<[f64; 2]>,
    pub v: Vec<[f64; 2]>,
}

impl From<&SiegelPoint> for PointJson {
    fn from(p: &SiegelPoint) -> Self {
        PointJson { z: pairs(&p.z), v: pairs(&p.v) }
    }
}

impl From<&PointJson> for SiegelPoint {
    fn from(p: &PointJson) -> Self {
        SiegelPoint::new(from_pairs(&p.z), from_pairs(&p.v))
    }
}
