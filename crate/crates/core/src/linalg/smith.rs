//! Smith normal form over ℤ with unimodular transforms.

use super::matrix::IntMatrix;
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, Zero};

#[derive(Clone, Debug)]
pub struct Smith {
    pub u: IntMatrix,
    pub d: IntMatrix,
    pub v: IntMatrix,
}

impl Smith {
    /// Nonzero diagonal entries, in order.
    pub fn invariants(&self) -> Vec<BigInt> {
        let k = self.d.rows().min(self.d.cols());
        (0..k).map(|i| self.d[(i, i)].clone()).filter(|x| !x.is_zero()).collect()
    }

    pub fn rank(&self) -> usize {
        self.invariants().len()
    }
}

struct Work {
    a: IntMatrix,
    u: Option<IntMatrix>,
    v: Option<IntMatrix>,
}

impl Work {
    fn swap_rows(&mut self, i: usize, j: usize) {
        self.a.swap_rows(i, j);
        if let Some(u) = &mut self.u {
            u.swap_rows(i, j);
        }
    }
    fn swap_cols(&mut self, i: usize, j: usize) {
        self.a.swap_cols(i, j);
        if let Some(v) = &mut self.v {
            v.swap_cols(i, j);
        }
    }
    fn add_row(&mut self, dst: usize, src: usize, c: &BigInt) {
        self.a.add_row_multiple(dst, src, c);
        if let Some(u) = &mut self.u {
            u.add_row_multiple(dst, src, c);
        }
    }
    fn add_col(&mut self, dst: usize, src: usize, c: &BigInt) {
        self.a.add_col_multiple(dst, src, c);
        if let Some(v) = &mut self.v {
            v.add_col_multiple(dst, src, c);
        }
    }
    fn negate_row(&mut self, i: usize) {
        self.a.negate_row(i);
        if let Some(u) = &mut self.u {
            u.negate_row(i);
        }
    }
}

fn run(m: &IntMatrix, transforms: bool) -> Work {
    let (rows, cols) = (m.rows(), m.cols());
    let mut w = Work {
        a: m.clone(),
        u: transforms.then(|| IntMatrix::identity(rows)),
        v: transforms.then(|| IntMatrix::identity(cols)),
    };
    let mut t = 0;
    while t < rows.min(cols) {
        // smallest nonzero entry of the trailing block
        let mut best: Option<(usize, usize)> = None;
        for i in t..rows {
            for j in t..cols {
                let x = &w.a[(i, j)];
                if x.is_zero() {
                    continue;
                }
                match best {
                    Some((bi, bj)) if w.a[(bi, bj)].abs() <= x.abs() => {}
                    _ => best = Some((i, j)),
                }
            }
        }
        let Some((bi, bj)) = best else { break };
        w.swap_rows(t, bi);
        w.swap_cols(t, bj);
        loop {
            let mut clean = true;
            for i in t + 1..rows {
                if w.a[(i, t)].is_zero() {
                    continue;
                }
                let q = -(&w.a[(i, t)] / &w.a[(t, t)]);
                w.add_row(i, t, &q);
                if !w.a[(i, t)].is_zero() {
                    clean = false;
                }
            }
            for j in t + 1..cols {
                if w.a[(t, j)].is_zero() {
                    continue;
                }
                let q = -(&w.a[(t, j)] / &w.a[(t, t)]);
                w.add_col(j, t, &q);
                if !w.a[(t, j)].is_zero() {
                    clean = false;
                }
            }
            if !clean {
                // bring the smallest entry of row/column t to the pivot
                let mut best = (t, t);
                for i in t + 1..rows {
                    let x = &w.a[(i, t)];
                    if !x.is_zero() && x.abs() < w.a[best].abs() {
                        best = (i, t);
                    }
                }
                for j in t + 1..cols {
                    let x = &w.a[(t, j)];
                    if !x.is_zero() && x.abs() < w.a[best].abs() {
                        best = (t, j);
                    }
                }
                if best.0 != t {
                    w.swap_rows(t, best.0);
                }
                if best.1 != t {
                    w.swap_cols(t, best.1);
                }
                continue;
            }
            // divisibility of the trailing block by the pivot
            let mut bad = None;
            'outer: for i in t + 1..rows {
                for j in t + 1..cols {
                    if !w.a[(i, j)].is_multiple_of(&w.a[(t, t)]) {
                        bad = Some(i);
                        break 'outer;
                    }
                }
            }
            match bad {
                Some(i) => {
                    let one = BigInt::from(1);
                    w.add_row(t, i, &one);
                }
                None => break,
            }
        }
        if w.a[(t, t)].is_negative() {
            w.negate_row(t);
        }
        t += 1;
    }
    w
}

/// `U * M * V = D` with `U`, `V` unimodular and `D` diagonal with `d_i | d_{i+1}`.
pub fn smith_form(m: &IntMatrix) -> Smith {
    let w = run(m, true);
    Smith { u: w.u.unwrap(), d: w.a, v: w.v.unwrap() }
}

/// Diagonal of the Smith form only.
pub fn smith_invariants(m: &IntMatrix) -> Vec<BigInt> {
    let w = run(m, false);
    let k = m.rows().min(m.cols());
    (0..k).map(|i| w.a[(i, i)].clone()).filter(|x| !x.is_zero()).collect()
}
