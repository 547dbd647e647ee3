//! `ℤ/pʳ(i)` as the fibre of `φᵢ − 1` on the torus models and on the 𝔸_crys model.

mod acrys;
mod contraction;
mod orbits;

pub use acrys::{k_theory_table, syntomic_acrys, AcrysSyntomic, KTheoryRow};
pub use contraction::{contraction_bound, contraction_bound_check, degree_bound_check, ContractionReport};
pub use orbits::{
    minimal_orbit_cap, orbit_representatives, syntomic_charp, syntomic_q, total_complex, OrbitEngine, TotalComplex,
};

use crate::linalg::PGroup;
use crate::report::Item;
use serde::Serialize;

pub const DEFAULT_PRECISION_BOUND: u32 = 64;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Model {
    Charp,
    Q,
    Acrys,
}

impl Model {
    pub fn tag(self) -> &'static str {
        match self {
            Model::Charp => "charp",
            Model::Q => "q",
            Model::Acrys => "acrys",
        }
    }
}

/// Membership of `dlog T_I` in the fibre complex.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DlogMembership {
    pub subset: Vec<usize>,
    pub degree: usize,
    pub closed: bool,
    pub nonzero: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SyntomicResult {
    pub model: Model,
    pub p: u64,
    pub d: usize,
    pub i: i64,
    pub r: u32,
    /// (q−1)-adic truncation, 1 for the integral model
    pub n_trunc: usize,
    pub weight_box: i64,
    pub orbit_cap: u32,
    /// `H^k` for the reported degrees `k = 0, 1, …`
    pub groups: Vec<PGroup>,
    pub orbits: usize,
    pub dlog_classes: Vec<DlogMembership>,
    pub certificates: Vec<Item>,
    /// set when some reported group only exists on global sections
    pub global_model: bool,
}
