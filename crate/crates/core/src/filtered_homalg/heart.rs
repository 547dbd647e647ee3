//! The heart of the Beilinson t-structure: chain complexes `(H^i(gr^i F), d)`.

use super::filtered::FilteredComplex;
use crate::error::Result;
use crate::linalg::{AbelianGroup, IntMatrix, Lattice};

#[derive(Clone, Debug)]
pub struct HeartTerm {
    pub index: i64,
    pub group: AbelianGroup,
    /// `{x ∈ Fil^i F^i : dx ∈ Fil^{i+1}F^{i+1}}`
    pub cocycles: Lattice,
    /// `Fil^{i+1}F^i + d Fil^i F^{i-1}`
    pub boundaries: Lattice,
}

/// A chain complex of finitely generated abelian groups given as lattice subquotients.
#[derive(Clone, Debug)]
pub struct ChainComplexObject {
    pub terms: Vec<HeartTerm>,
    /// ambient differential from term t to term t+1
    pub diffs: Vec<IntMatrix>,
    /// whether the induced map on term t is nonzero
    pub nonzero: Vec<bool>,
    /// `H^*(gr^i F)` for each index of the window, as `(i, groups by degree)`
    pub e1: Vec<(i64, Vec<AbelianGroup>)>,
}

impl ChainComplexObject {
    pub fn is_zero(&self) -> bool {
        self.terms.iter().all(|t| t.group.is_zero())
    }

    /// `d²` sends cocycles of term t into boundaries of term t+2.
    pub fn d_squared_zero(&self) -> bool {
        (0..self.diffs.len().saturating_sub(1)).all(|t| {
            let dd = self.diffs[t + 1].mul(&self.diffs[t]);
            self.terms[t + 2].boundaries.contains_lattice(&self.terms[t].cocycles.image(&dd))
        })
    }

    pub fn nonzero_count(&self) -> usize {
        self.nonzero.iter().filter(|&&b| b).count()
    }
}

/// Terms `H^i(gr^i F)` with the Bockstein of `Fil^i/Fil^{i+2}` as differential.
pub fn beilinson_h0(f: &FilteredComplex) -> Result<ChainComplexObject> {
    let c = &f.ambient;
    let (lo, hi) = f.interesting_range();
    let mut e1 = Vec::new();
    for i in lo..=hi {
        e1.push((i, f.gr_cohomology(i)?));
    }
    let mut terms = Vec::new();
    for k in 0..c.len() {
        let i = c.start as i64 + k as i64;
        let gr = f.gr(i)?;
        let cocycles = gr.cocycles(k);
        let boundaries = gr.coboundaries(k);
        terms.push(HeartTerm { index: i, group: cocycles.quotient(&boundaries), cocycles, boundaries });
    }
    let diffs = c.diffs.clone();
    let nonzero = (0..diffs.len())
        .map(|t| !terms[t + 1].boundaries.contains_lattice(&terms[t].cocycles.image(&diffs[t])))
        .collect();
    Ok(ChainComplexObject { terms, diffs, nonzero, e1 })
}
