//! Ext between complexes concentrated in degree 0, computed in the category of chain complexes.
//!
//! A complex over R is a graded module over `S = R[ε]/ε²` with ε of degree 1. The module
//! `M = R` (degree 0, ε = 0) has the resolution `… → S{-2} → S{-1} → S → M` where each map
//! sends a generator to ε times the next one.

use crate::error::Result;
use crate::linalg::{cohomology_mod, IntMatrix, ModPn, PGroup};

#[derive(Clone, Debug)]
pub struct ExtReport {
    pub p: u64,
    pub shift: i32,
    pub steps: usize,
    /// the truncated resolution is exact in graded degrees `0..=steps`
    pub resolution_exact: bool,
    /// `Ext^i` for `0 ≤ i < steps`
    pub ext: Vec<PGroup>,
    pub expected: Vec<PGroup>,
    pub holds: bool,
}

/// Rank of the graded piece of degree j of `P_k = S{-k}`: generator in degree k, ε·generator in k+1.
fn piece(k: usize, j: usize) -> usize {
    usize::from(j == k || j == k + 1)
}

/// Checks exactness of `P_steps → … → P_0 → M → 0` degree by degree.
fn resolution_is_exact(ring: &ModPn, steps: usize) -> Result<bool> {
    for j in 0..=steps {
        // cochain order: P_steps, …, P_0, M
        let mut ranks: Vec<usize> = (0..=steps).rev().map(|k| piece(k, j)).collect();
        ranks.push(usize::from(j == 0));
        let mut diffs = Vec::new();
        for t in 0..ranks.len() - 1 {
            let (src, dst) = (ranks[t], ranks[t + 1]);
            let mut m = IntMatrix::zeros(dst, src);
            if src == 1 && dst == 1 {
                // P_{k+1} → P_k is g ↦ εg, P_0 → M is g ↦ 1; in a fixed degree both are the identity
                m[(0, 0)] = 1.into();
            }
            diffs.push(m);
        }
        let h = cohomology_mod(&ranks, &diffs, ring)?;
        // the first slot is the truncation end and may have kernel only in degree steps+1
        if h.iter().any(|g| !g.is_zero()) {
            return Ok(false);
        }
    }
    Ok(true)
}

/// `Ext^i(R, R{c})` over ℤ/p via `Hom_{S,gr}` out of the truncated resolution.
pub fn ext_in_ch_check(p: u64, shift: i32, steps: usize) -> Result<ExtReport> {
    let ring = ModPn::new(p, 1);
    let resolution_exact = resolution_is_exact(&ring, steps)?;
    // Hom_{S,gr}(S{-k}, N{c}) = (N{c})^k = N^{k+c}; N = R sits in degree 0
    let ranks: Vec<usize> = (0..=steps).map(|k| usize::from(k as i64 + shift as i64 == 0)).collect();
    // precomposition with g ↦ εg is ε_N = 0
    let diffs: Vec<IntMatrix> = (0..steps).map(|k| IntMatrix::zeros(ranks[k + 1], ranks[k])).collect();
    let mut ext = cohomology_mod(&ranks, &diffs, &ring)?;
    ext.truncate(steps);
    // R is free over itself, so Ext_R(R,R) is R in degree 0 and the shift law puts it at i = -c
    let expected: Vec<PGroup> = (0..steps)
        .map(|i| if shift <= 0 && i as i64 == -(shift as i64) { PGroup::new(p, 0, vec![1]) } else { PGroup::zero(p) })
        .collect();
    let holds = resolution_exact && ext == expected;
    Ok(ExtReport { p, shift, steps, resolution_exact, ext, expected, holds })
}
