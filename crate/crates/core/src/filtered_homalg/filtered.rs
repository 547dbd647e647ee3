//! Filtered complexes on a finite index window and the filtration décalée.

use super::complex::{Complex, LatticeComplex, Scalar};
use crate::error::{Error, Result};
use crate::linalg::{AbelianGroup, IntMatrix, Lattice, SubquotientComplex};

/// How the filtration continues outside the stored window.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Pattern {
    Constant,
    Zero,
    /// `Fil^{i} = f^{i-i1} Fil^{i1}` above, resp. not representable below
    FAdic,
}

/// Decreasing filtration by d-stable lattices inside a free ambient complex over ℤ.
#[derive(Clone, Debug)]
pub struct FilteredComplex {
    pub ambient: Complex,
    /// multiplication by f per degree, required by the f-adic pattern
    pub f_action: Option<Vec<IntMatrix>>,
    pub i0: i64,
    /// `levels[i - i0][k]`
    pub levels: Vec<Vec<Lattice>>,
    pub below: Pattern,
    pub above: Pattern,
}

impl FilteredComplex {
    pub fn new(
        ambient: Complex,
        f_action: Option<Vec<IntMatrix>>,
        i0: i64,
        levels: Vec<Vec<Lattice>>,
        below: Pattern,
        above: Pattern,
    ) -> Result<Self> {
        if levels.is_empty() {
            return Err(Error::Invalid("empty filtration window".into()));
        }
        let needs_f = below == Pattern::FAdic || above == Pattern::FAdic;
        if needs_f && f_action.is_none() {
            return Err(Error::Invalid("f-adic pattern without an f-action".into()));
        }
        let dims = ambient.z_ranks();
        for (i, lv) in levels.iter().enumerate() {
            if lv.len() != dims.len() || lv.iter().zip(&dims).any(|(l, &d)| l.dim() != d) {
                return Err(Error::Dimension(format!("filtration level {}", i0 + i as i64)));
            }
            for (k, d) in ambient.diffs.iter().enumerate() {
                if !lv[k + 1].contains_lattice(&lv[k].image(d)) {
                    return Err(Error::Invalid(format!("Fil^{} is not d-stable", i0 + i as i64)));
                }
            }
            if i > 0 && !(0..dims.len()).all(|k| levels[i - 1][k].contains_lattice(&lv[k])) {
                return Err(Error::Invalid(format!("Fil^{} is not decreasing", i0 + i as i64)));
            }
        }
        if above == Pattern::FAdic {
            let f = f_action.as_ref().unwrap();
            let top = levels.last().unwrap();
            if !(0..dims.len()).all(|k| top[k].contains_lattice(&top[k].image(&f[k]))) {
                return Err(Error::Invalid("f-adic continuation is not decreasing".into()));
            }
        }
        Ok(FilteredComplex { ambient, f_action, i0, levels, below, above })
    }

    /// `Fil^i = f^i C` for `0 ≤ i ≤ top`, f-adic on both sides.
    pub fn f_adic(f: &Scalar, c: &Complex, top: i64) -> Result<Self> {
        let f_mats = super::eta::action_matrices(f, c)?;
        let mut levels = Vec::new();
        let mut cur: Vec<Lattice> = c.z_ranks().iter().map(|&r| Lattice::full(r)).collect();
        for _ in 0..=top.max(0) {
            levels.push(cur.clone());
            cur = cur.iter().zip(&f_mats).map(|(l, m)| l.image(m)).collect();
        }
        Self::new(c.clone(), Some(f_mats), 0, levels, Pattern::FAdic, Pattern::FAdic)
    }

    /// `Fil^0 = C`, `Fil^1 = 0`.
    pub fn trivial(c: &Complex) -> Result<Self> {
        let full = c.z_ranks().iter().map(|&r| Lattice::full(r)).collect();
        Self::new(c.clone(), None, 0, vec![full], Pattern::Constant, Pattern::Zero)
    }

    pub fn i1(&self) -> i64 {
        self.i0 + self.levels.len() as i64 - 1
    }

    pub fn level(&self, i: i64) -> Result<Vec<Lattice>> {
        if i < self.i0 {
            return match self.below {
                Pattern::Constant => Ok(self.levels[0].clone()),
                Pattern::Zero => Ok(self.zero_level()),
                Pattern::FAdic => Err(Error::WindowTooSmall(i)),
            };
        }
        let i1 = self.i1();
        if i <= i1 {
            return Ok(self.levels[(i - self.i0) as usize].clone());
        }
        let top = self.levels.last().unwrap();
        match self.above {
            Pattern::Constant => Ok(top.clone()),
            Pattern::Zero => Ok(self.zero_level()),
            Pattern::FAdic => {
                let f = self.f_action.as_ref().unwrap();
                let mut cur = top.clone();
                for _ in i1..i {
                    cur = cur.iter().zip(f).map(|(l, m)| l.image(m)).collect();
                }
                Ok(cur)
            }
        }
    }

    fn zero_level(&self) -> Vec<Lattice> {
        self.ambient.z_ranks().iter().map(|&r| Lattice::zero(r)).collect()
    }

    /// The filtered object forgetting the filtration; needs a constant pattern below.
    pub fn underlying(&self) -> Result<LatticeComplex> {
        if self.below != Pattern::Constant {
            return Err(Error::WindowTooSmall(self.i0 - 1));
        }
        Ok(LatticeComplex { start: self.ambient.start, diffs: self.ambient.diffs.clone(), lattices: self.levels[0].clone() })
    }

    pub fn gr(&self, i: i64) -> Result<SubquotientComplex> {
        SubquotientComplex::new(self.ambient.diffs.clone(), self.level(i)?, self.level(i + 1)?)
    }

    pub fn gr_cohomology(&self, i: i64) -> Result<Vec<AbelianGroup>> {
        Ok(self.gr(i)?.cohomology())
    }

    /// Index range on which the filtration can change, plus one step beyond.
    pub fn interesting_range(&self) -> (i64, i64) {
        (self.i0, self.i1() + 1)
    }
}

/// The décalée `(τF)(i)ⁿ = {x ∈ Fil^{max(i,n)}Fⁿ : dx ∈ Fil^{max(i,n+1)}F^{n+1}}`.
pub fn beilinson_truncate(f: &FilteredComplex) -> Result<FilteredComplex> {
    let c = &f.ambient;
    if c.is_empty() {
        return Ok(f.clone());
    }
    let start = c.start as i64;
    let end = c.end() as i64;
    let hi = f.i1().max(end + 1);
    let lo = start.min(hi);
    let mut levels = Vec::new();
    for i in lo..=hi {
        let mut lv = Vec::with_capacity(c.len());
        for k in 0..c.len() {
            let n = start + k as i64;
            let top = f.level(i.max(n))?[k].clone();
            let l = if k < c.diffs.len() {
                let target = f.level(i.max(n + 1))?[k + 1].clone();
                top.preimage(&c.diffs[k], &target)
            } else {
                top
            };
            lv.push(l);
        }
        levels.push(lv);
    }
    FilteredComplex::new(c.clone(), f.f_action.clone(), lo, levels, Pattern::Constant, f.above)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GradedLawRow {
    pub index: i64,
    pub degree: i32,
    /// `H^n(gr^i τF)`
    pub truncated: AbelianGroup,
    /// `H^n(τ^{≤i} gr^i F)`
    pub expected: AbelianGroup,
    pub holds: bool,
}

/// Compares `gr^i(τF)` with `τ^{≤i} gr^i F` on all indices where either can vary.
pub fn graded_law_check(f: &FilteredComplex) -> Result<Vec<GradedLawRow>> {
    let t = beilinson_truncate(f)?;
    let c = &f.ambient;
    let (lo, hi) = t.interesting_range();
    let mut rows = Vec::new();
    for i in lo..=hi {
        let ht = t.gr_cohomology(i)?;
        let hf = f.gr_cohomology(i)?;
        for k in 0..c.len() {
            let n = c.start + k as i32;
            let expected = if (n as i64) <= i { hf[k].clone() } else { AbelianGroup::zero() };
            rows.push(GradedLawRow {
                index: i,
                degree: n,
                holds: ht[k] == expected,
                truncated: ht[k].clone(),
                expected,
            });
        }
    }
    Ok(rows)
}
