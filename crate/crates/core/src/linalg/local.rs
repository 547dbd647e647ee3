//! Linear algebra over the local ring ℤ/pⁿ: valuation-pivoted Smith form and Howell form.

use super::matrix::{inv_mod, pow_big, valuation_capped, IntMatrix};
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::Zero;

/// Coefficient ring ℤ/pⁿ.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct ModPn {
    pub p: u64,
    pub n: u32,
    pub modulus: BigInt,
}

impl ModPn {
    pub fn new(p: u64, n: u32) -> Self {
        ModPn { p, n, modulus: pow_big(p, n) }
    }

    pub fn reduce(&self, x: &BigInt) -> BigInt {
        x.mod_floor(&self.modulus)
    }

    pub fn val(&self, x: &BigInt) -> u32 {
        valuation_capped(&self.reduce(x), self.p, self.n)
    }

    pub fn p_pow(&self, e: u32) -> BigInt {
        pow_big(self.p, e)
    }

    /// Unit part inverse of `x = p^v u`, returned as `(v, u^{-1})`.
    pub fn split(&self, x: &BigInt) -> (u32, BigInt) {
        let x = self.reduce(x);
        let v = valuation_capped(&x, self.p, self.n);
        if v >= self.n {
            return (self.n, BigInt::zero());
        }
        let u = &x / self.p_pow(v);
        (v, inv_mod(&u, &self.modulus).expect("unit part is invertible"))
    }
}

/// `P A V ≡ diag(p^{vals}) (mod pⁿ)` for some invertible `P`; `V`, `V⁻¹` are kept.
#[derive(Clone, Debug)]
pub struct LocalSmith {
    pub vals: Vec<u32>,
    pub v: IntMatrix,
    pub v_inv: IntMatrix,
}

impl LocalSmith {
    pub fn rank(&self) -> usize {
        self.vals.len()
    }
}

pub fn local_smith(a: &IntMatrix, ring: &ModPn) -> LocalSmith {
    let m = &ring.modulus;
    let (rows, cols) = (a.rows(), a.cols());
    let mut w = a.reduce_mod(m);
    let mut v = IntMatrix::identity(cols);
    let mut v_inv = IntMatrix::identity(cols);
    let mut vals = Vec::new();
    let mut t = 0;
    while t < rows.min(cols) {
        let mut best: Option<(usize, usize, u32)> = None;
        for j in t..cols {
            for i in t..rows {
                let x = &w[(i, j)];
                if x.is_zero() {
                    continue;
                }
                let vx = ring.val(x);
                if best.map_or(true, |(_, _, b)| vx < b) {
                    best = Some((i, j, vx));
                }
            }
        }
        let Some((bi, bj, val)) = best else { break };
        w.swap_rows(t, bi);
        w.swap_cols(t, bj);
        v.swap_cols(t, bj);
        v_inv.swap_rows(t, bj);
        let (_, uinv) = ring.split(&w[(t, t)]);
        let pv = ring.p_pow(val);
        for i in t + 1..rows {
            if w[(i, t)].is_zero() {
                continue;
            }
            let c = (-(&w[(i, t)] / &pv) * &uinv).mod_floor(m);
            w.add_row_multiple(i, t, &c);
            for j in t..cols {
                let x = w[(i, j)].mod_floor(m);
                w[(i, j)] = x;
            }
        }
        for j in t + 1..cols {
            if w[(t, j)].is_zero() {
                continue;
            }
            let c = (-(&w[(t, j)] / &pv) * &uinv).mod_floor(m);
            w.add_col_multiple(j, t, &c);
            v.add_col_multiple(j, t, &c);
            // E adds c*col t to col j; E^{-1} adds -c*row j to row t
            v_inv.add_row_multiple(t, j, &(-&c));
            for i in t..rows {
                let x = w[(i, j)].mod_floor(m);
                w[(i, j)] = x;
            }
        }
        vals.push(val);
        t += 1;
    }
    LocalSmith { vals, v: v.reduce_mod(m), v_inv: v_inv.reduce_mod(m) }
}

/// Howell form of the row span of `a` over ℤ/pⁿ: rows in echelon order with pivots `p^v`,
/// entries above each pivot reduced into `[0, p^v)`. Two matrices have the same row span
/// iff their Howell forms agree.
pub fn howell_form(a: &IntMatrix, ring: &ModPn) -> IntMatrix {
    let m = &ring.modulus;
    let cols = a.cols();
    let mut pending: Vec<Vec<BigInt>> = a.reduce_mod(m).row_vecs();
    let mut out: Vec<Vec<BigInt>> = Vec::new();
    for col in 0..cols {
        pending.retain(|r| r.iter().any(|x| !x.is_zero()));
        // lowest valuation in this column, leftmost row wins ties
        let mut best: Option<(usize, u32)> = None;
        for (i, r) in pending.iter().enumerate() {
            if !r[col].is_zero() {
                let vx = ring.val(&r[col]);
                if best.map_or(true, |(_, b)| vx < b) {
                    best = Some((i, vx));
                }
            }
        }
        let Some((bi, val)) = best else { continue };
        let mut piv = pending.remove(bi);
        let (_, uinv) = ring.split(&piv[col]);
        for x in piv.iter_mut() {
            *x = (&*x * &uinv).mod_floor(m);
        }
        let pv = ring.p_pow(val);
        for r in pending.iter_mut() {
            if r[col].is_zero() {
                continue;
            }
            let c = &r[col] / &pv;
            for (x, y) in r.iter_mut().zip(&piv) {
                *x = (&*x - &c * y).mod_floor(m);
            }
        }
        // annihilator multiple keeps the span of rows with leading zeros complete
        let ann = ring.p_pow(ring.n - val);
        let extra: Vec<BigInt> = piv.iter().map(|y| (y * &ann).mod_floor(m)).collect();
        if extra.iter().any(|x| !x.is_zero()) {
            pending.push(extra);
        }
        for r in out.iter_mut() {
            if r[col].is_zero() {
                continue;
            }
            let c = r[col].div_floor(&pv);
            for (x, y) in r.iter_mut().zip(&piv) {
                *x = (&*x - &c * y).mod_floor(m);
            }
        }
        out.push(piv);
    }
    IntMatrix::from_rows(&out, cols)
}

/// Membership of `v` in the row span described by a Howell form.
pub fn howell_contains(h: &IntMatrix, v: &[BigInt], ring: &ModPn) -> bool {
    let m = &ring.modulus;
    let mut rest: Vec<BigInt> = v.iter().map(|x| x.mod_floor(m)).collect();
    for i in 0..h.rows() {
        let row = h.row(i);
        let c = row.iter().position(|x| !x.is_zero()).unwrap();
        if rest[..c].iter().any(|x| !x.is_zero()) {
            return false;
        }
        let (q, r) = rest[c].div_rem(&row[c]);
        if !r.is_zero() {
            return false;
        }
        for (x, y) in rest.iter_mut().zip(&row) {
            *x = (&*x - &q * y).mod_floor(m);
        }
    }
    rest.iter().all(|x| x.is_zero())
}

/// Kernel of `a` on `(ℤ/pⁿ)^{cols}`: its isomorphism type and generators.
pub fn kernel_mod(a: &IntMatrix, ring: &ModPn) -> (super::group::PGroup, Vec<Vec<BigInt>>) {
    let ls = local_smith(a, ring);
    let mut exps = Vec::new();
    let mut gens = Vec::new();
    for t in 0..a.cols() {
        let val = ls.vals.get(t).copied().unwrap_or(ring.n);
        if val == 0 {
            continue;
        }
        // y_t ranges over p^{n−val} ℤ/pⁿ ≅ ℤ/p^{val}
        let scale = ring.p_pow(ring.n - val.min(ring.n));
        gens.push(ls.v.column(t).iter().map(|x| (x * &scale).mod_floor(&ring.modulus)).collect());
        exps.push(val.min(ring.n));
    }
    (super::group::PGroup::new(ring.p, 0, exps), gens)
}

/// Cokernel of `a : (ℤ/pⁿ)^{cols} → (ℤ/pⁿ)^{rows}`.
pub fn cokernel_mod(a: &IntMatrix, ring: &ModPn) -> super::group::PGroup {
    let ls = local_smith(a, ring);
    let mut exps: Vec<u32> = ls.vals.clone();
    exps.extend(std::iter::repeat(ring.n).take(a.rows() - ls.rank()));
    super::group::PGroup::new(ring.p, 0, exps)
}
