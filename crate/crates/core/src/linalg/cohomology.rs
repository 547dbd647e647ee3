//! Cohomology of cochain complexes of free modules and of lattice subquotients.

use super::group::{AbelianGroup, PGroup};
use super::lattice::Lattice;
use super::local::{local_smith, ModPn};
use super::matrix::IntMatrix;
use super::smith::smith_invariants;
use crate::error::{Error, Result};
use num_bigint::BigInt;
use num_traits::Zero;

fn check_shapes(ranks: &[usize], diffs: &[IntMatrix]) -> Result<()> {
    if diffs.len() + 1 != ranks.len() && !(ranks.is_empty() && diffs.is_empty()) {
        return Err(Error::Dimension(format!("{} ranks but {} differentials", ranks.len(), diffs.len())));
    }
    for (k, d) in diffs.iter().enumerate() {
        if d.cols() != ranks[k] || d.rows() != ranks[k + 1] {
            return Err(Error::Dimension(format!(
                "d^{k} is {}x{}, expected {}x{}",
                d.rows(),
                d.cols(),
                ranks[k + 1],
                ranks[k]
            )));
        }
    }
    Ok(())
}

fn check_composites(diffs: &[IntMatrix], modulus: Option<&BigInt>) -> Result<()> {
    for k in 1..diffs.len() {
        let c = diffs[k].mul(&diffs[k - 1]);
        let c = match modulus {
            Some(m) => c.reduce_mod(m),
            None => c,
        };
        if !c.is_zero() {
            return Err(Error::CompositeNonzero { degree: k as i32 - 1 });
        }
    }
    Ok(())
}

/// Cohomology over ℤ of `C^0 → C^1 → …` with `diffs[k] : C^k → C^{k+1}`.
pub fn cohomology_z(ranks: &[usize], diffs: &[IntMatrix]) -> Result<Vec<AbelianGroup>> {
    check_shapes(ranks, diffs)?;
    check_composites(diffs, None)?;
    let inv: Vec<Vec<BigInt>> = diffs.iter().map(smith_invariants).collect();
    let mut out = Vec::with_capacity(ranks.len());
    for k in 0..ranks.len() {
        let rk_out = if k < diffs.len() { inv[k].len() } else { 0 };
        let (rk_in, tors) = if k > 0 { (inv[k - 1].len(), inv[k - 1].clone()) } else { (0, Vec::new()) };
        let free = ranks[k] - rk_out - rk_in;
        let mut g = AbelianGroup::from_relations(rk_in, &tors);
        g.free_rank = free;
        out.push(g);
    }
    Ok(out)
}

/// Cohomology over ℤ/pⁿ; matrices are read modulo pⁿ.
pub fn cohomology_mod(ranks: &[usize], diffs: &[IntMatrix], ring: &ModPn) -> Result<Vec<PGroup>> {
    check_shapes(ranks, diffs)?;
    check_composites(diffs, Some(&ring.modulus))?;
    let mut out = Vec::with_capacity(ranks.len());
    for k in 0..ranks.len() {
        let r = ranks[k];
        // kernel of d^k: p^{c_j} V e_j
        let (c, v_inv) = if k < diffs.len() {
            let ls = local_smith(&diffs[k], ring);
            let mut c = vec![0u32; r];
            for (j, &val) in ls.vals.iter().enumerate() {
                c[j] = ring.n - val;
            }
            (c, ls.v_inv)
        } else {
            (vec![0u32; r], IntMatrix::identity(r))
        };
        let prev_cols = if k > 0 { diffs[k - 1].cols() } else { 0 };
        let mut rel = IntMatrix::zeros(r, prev_cols + r);
        if k > 0 {
            let y = v_inv.mul(&diffs[k - 1]).reduce_mod(&ring.modulus);
            for i in 0..r {
                let pc = ring.p_pow(c[i]);
                for j in 0..prev_cols {
                    let x = &y[(i, j)];
                    if x.is_zero() {
                        continue;
                    }
                    if !(x % &pc).is_zero() {
                        return Err(Error::CompositeNonzero { degree: k as i32 - 1 });
                    }
                    rel[(i, j)] = x / &pc;
                }
            }
        }
        for i in 0..r {
            rel[(i, prev_cols + i)] = ring.p_pow(ring.n - c[i]);
        }
        let ls = local_smith(&rel, ring);
        let mut exps: Vec<u32> = ls.vals.clone();
        exps.extend(std::iter::repeat(ring.n).take(r - ls.rank()));
        out.push(PGroup::new(ring.p, 0, exps));
    }
    Ok(out)
}

/// Complex of lattice subquotients `A^j / R^j` inside `ℤ^{dims[j]}`, with ambient differentials.
#[derive(Clone, Debug)]
pub struct SubquotientComplex {
    pub dims: Vec<usize>,
    pub diffs: Vec<IntMatrix>,
    pub top: Vec<Lattice>,
    pub bottom: Vec<Lattice>,
}

impl SubquotientComplex {
    pub fn new(diffs: Vec<IntMatrix>, top: Vec<Lattice>, bottom: Vec<Lattice>) -> Result<Self> {
        let dims: Vec<usize> = top.iter().map(|l| l.dim()).collect();
        if bottom.len() != top.len() || diffs.len() + 1 != top.len().max(1) {
            return Err(Error::Dimension("subquotient complex shape".into()));
        }
        for (k, d) in diffs.iter().enumerate() {
            if d.cols() != dims[k] || d.rows() != dims[k + 1] {
                return Err(Error::Dimension(format!("subquotient differential {k}")));
            }
        }
        let s = SubquotientComplex { dims, diffs, top, bottom };
        s.validate()?;
        Ok(s)
    }

    /// The full free complex `ℤ^{dims}` (modulo nothing).
    pub fn free(ranks: &[usize], diffs: Vec<IntMatrix>) -> Result<Self> {
        let top = ranks.iter().map(|&r| Lattice::full(r)).collect();
        let bottom = ranks.iter().map(|&r| Lattice::zero(r)).collect();
        Self::new(diffs, top, bottom)
    }

    fn validate(&self) -> Result<()> {
        for j in 0..self.top.len() {
            if !self.top[j].contains_lattice(&self.bottom[j]) {
                return Err(Error::Invalid(format!("bottom lattice not inside top in degree {j}")));
            }
        }
        for k in 1..self.diffs.len() {
            let dd = self.diffs[k].mul(&self.diffs[k - 1]);
            if !self.bottom[k + 1].contains_lattice(&self.top[k - 1].image(&dd)) {
                return Err(Error::CompositeNonzero { degree: k as i32 - 1 });
            }
        }
        for (k, d) in self.diffs.iter().enumerate() {
            if !self.top[k + 1].contains_lattice(&self.top[k].image(d)) {
                return Err(Error::Invalid(format!("differential leaves the top lattice in degree {k}")));
            }
            if !self.bottom[k + 1].contains_lattice(&self.bottom[k].image(d)) {
                return Err(Error::Invalid(format!("differential leaves the bottom lattice in degree {k}")));
            }
        }
        Ok(())
    }

    pub fn len(&self) -> usize {
        self.top.len()
    }

    pub fn is_empty(&self) -> bool {
        self.top.is_empty()
    }

    /// Cocycles of degree j as a lattice in `A^j`.
    pub fn cocycles(&self, j: usize) -> Lattice {
        if j < self.diffs.len() {
            self.top[j].preimage(&self.diffs[j], &self.bottom[j + 1])
        } else {
            self.top[j].clone()
        }
    }

    pub fn coboundaries(&self, j: usize) -> Lattice {
        if j > 0 {
            self.bottom[j].sum(&self.top[j - 1].image(&self.diffs[j - 1]))
        } else {
            self.bottom[j].clone()
        }
    }

    pub fn cohomology(&self) -> Vec<AbelianGroup> {
        (0..self.len()).map(|j| self.cocycles(j).quotient(&self.coboundaries(j))).collect()
    }

    pub fn cohomology_local(&self, p: u64) -> Vec<PGroup> {
        self.cohomology().iter().map(|g| g.localize(p)).collect()
    }

    /// Mapping cone of `f : self → other`, with `maps[j] : ℤ^{dims[j]} → ℤ^{other.dims[j]}`.
    /// Cone degree j is `self^{j+1} ⊕ other^j`; degrees run from -1.
    pub fn cone(&self, other: &SubquotientComplex, maps: &[IntMatrix]) -> Result<SubquotientComplex> {
        let n = self.len();
        if other.len() != n || maps.len() != n {
            return Err(Error::Dimension("cone: length mismatch".into()));
        }
        for j in 0..n {
            let img_top = self.top[j].image(&maps[j]);
            let img_bot = self.bottom[j].image(&maps[j]);
            if !other.top[j].contains_lattice(&img_top) || !other.bottom[j].contains_lattice(&img_bot) {
                return Err(Error::Invalid(format!("cone: map does not respect lattices in degree {j}")));
            }
            if j + 1 < n {
                let a = maps[j + 1].mul(&self.diffs[j]);
                let b = other.diffs[j].mul(&maps[j]);
                let diff = a.sub(&b);
                let ok = self.top[j].basis().iter().all(|x| other.bottom[j + 1].contains(&diff.apply(x)));
                if !ok {
                    return Err(Error::Invalid(format!("cone: map is not a chain map in degree {j}")));
                }
            }
        }
        // cone degrees -1 .. n-1
        let zero_l = |d: usize| Lattice::zero(d);
        let mut top = Vec::new();
        let mut bottom = Vec::new();
        for c in 0..=n {
            // cone degree c-1: self^{c} ⊕ other^{c-1}
            let st = if c < n { self.top[c].clone() } else { zero_l(0) };
            let sb = if c < n { self.bottom[c].clone() } else { zero_l(0) };
            let ot = if c >= 1 { other.top[c - 1].clone() } else { zero_l(0) };
            let ob = if c >= 1 { other.bottom[c - 1].clone() } else { zero_l(0) };
            top.push(st.direct_sum(&ot));
            bottom.push(sb.direct_sum(&ob));
        }
        let mut diffs = Vec::new();
        for c in 0..n {
            // from cone degree c-1 to c: (s^c, o^{c-1}) ↦ (-d s^c, f s^c + d o^{c-1})
            let s_in = if c < n { self.dims[c] } else { 0 };
            let o_in = if c >= 1 { other.dims[c - 1] } else { 0 };
            let s_out = if c + 1 < n { self.dims[c + 1] } else { 0 };
            let o_out = other.dims[c];
            let mut m = IntMatrix::zeros(s_out + o_out, s_in + o_in);
            if c + 1 < n {
                m.set_block(0, 0, &self.diffs[c].neg());
            }
            m.set_block(s_out, 0, &maps[c]);
            if c >= 1 {
                m.set_block(s_out, s_in, &other.diffs[c - 1]);
            }
            diffs.push(m);
        }
        SubquotientComplex::new(diffs, top, bottom)
    }
}

/// A subquotient `top / bottom` of some `ℤ^n`.
#[derive(Clone, Debug)]
pub struct Subquotient {
    pub top: Lattice,
    pub bottom: Lattice,
}

impl Subquotient {
    pub fn new(top: Lattice, bottom: Lattice) -> Self {
        Subquotient { top, bottom }
    }
}

/// Which part of `0 → A →f B →g C → 0` failed, if any.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ExactnessFailure {
    NotWellDefined,
    NotInjective,
    NotComplex,
    NotExactInMiddle,
    NotSurjective,
}

/// Exactness of `0 → A →f B →g C → 0` for subquotients, with `f`, `g` given on ambient lattices.
pub fn short_exact_failure(
    a: &Subquotient,
    b: &Subquotient,
    c: &Subquotient,
    f: &IntMatrix,
    g: &IntMatrix,
) -> Option<ExactnessFailure> {
    let respects = |x: &Subquotient, y: &Subquotient, m: &IntMatrix| {
        y.top.contains_lattice(&x.top.image(m)) && y.bottom.contains_lattice(&x.bottom.image(m))
    };
    if !respects(a, b, f) || !respects(b, c, g) {
        return Some(ExactnessFailure::NotWellDefined);
    }
    if !a.bottom.contains_lattice(&a.top.preimage(f, &b.bottom)) {
        return Some(ExactnessFailure::NotInjective);
    }
    if !c.bottom.contains_lattice(&a.top.image(&g.mul(f))) {
        return Some(ExactnessFailure::NotComplex);
    }
    let ker_g = b.top.preimage(g, &c.bottom);
    if !a.top.image(f).sum(&b.bottom).contains_lattice(&ker_g) {
        return Some(ExactnessFailure::NotExactInMiddle);
    }
    if !b.top.image(g).sum(&c.bottom).contains_lattice(&c.top) {
        return Some(ExactnessFailure::NotSurjective);
    }
    None
}
