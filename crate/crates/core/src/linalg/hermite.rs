//! Row Hermite normal forms over ℤ and kernels.

use super::matrix::IntMatrix;
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, Zero};

fn sub_multiple(dst: &mut [BigInt], src: &[BigInt], q: &BigInt) {
    if q.is_zero() {
        return;
    }
    for (d, s) in dst.iter_mut().zip(src) {
        if !s.is_zero() {
            *d -= q * s;
        }
    }
}

/// Echelon reduction in place; returns the number of nonzero rows, which end up first.
/// When `track` is given, the same row operations are applied to it.
fn echelon(rows: &mut Vec<Vec<BigInt>>, ncols: usize, mut track: Option<&mut Vec<Vec<BigInt>>>) -> usize {
    let mut piv = 0;
    for col in 0..ncols {
        if piv >= rows.len() {
            break;
        }
        loop {
            let mut best: Option<usize> = None;
            for i in piv..rows.len() {
                if !rows[i][col].is_zero() {
                    match best {
                        Some(b) if rows[b][col].abs() <= rows[i][col].abs() => {}
                        _ => best = Some(i),
                    }
                }
            }
            let Some(b) = best else { break };
            rows.swap(piv, b);
            if let Some(t) = track.as_deref_mut() {
                t.swap(piv, b);
            }
            let mut clean = true;
            for i in piv + 1..rows.len() {
                if rows[i][col].is_zero() {
                    continue;
                }
                let q = &rows[i][col] / &rows[piv][col];
                let (head, tail) = rows.split_at_mut(i);
                sub_multiple(&mut tail[0], &head[piv], &q);
                if let Some(t) = track.as_deref_mut() {
                    let (th, tt) = t.split_at_mut(i);
                    sub_multiple(&mut tt[0], &th[piv], &q);
                }
                if !rows[i][col].is_zero() {
                    clean = false;
                }
            }
            if clean {
                break;
            }
        }
        if piv < rows.len() && !rows[piv][col].is_zero() {
            if rows[piv][col].is_negative() {
                for v in rows[piv].iter_mut() {
                    *v = -&*v;
                }
                if let Some(t) = track.as_deref_mut() {
                    for v in t[piv].iter_mut() {
                        *v = -&*v;
                    }
                }
            }
            for i in 0..piv {
                if rows[i][col].is_zero() {
                    continue;
                }
                let q = rows[i][col].div_floor(&rows[piv][col]);
                let (head, tail) = rows.split_at_mut(piv);
                sub_multiple(&mut head[i], &tail[0], &q);
                if let Some(t) = track.as_deref_mut() {
                    let (th, tt) = t.split_at_mut(piv);
                    sub_multiple(&mut th[i], &tt[0], &q);
                }
            }
            piv += 1;
        }
    }
    piv
}

/// Row-style Hermite normal form of the span of `rows`: nonzero rows only,
/// strictly increasing pivot columns, positive pivots, entries above pivots reduced into `[0, pivot)`.
pub fn row_hnf(rows: &[Vec<BigInt>], ncols: usize) -> Vec<Vec<BigInt>> {
    let mut r: Vec<Vec<BigInt>> = rows.iter().filter(|v| v.iter().any(|x| !x.is_zero())).cloned().collect();
    let k = echelon(&mut r, ncols, None);
    r.truncate(k);
    r
}

/// Row HNF together with a unimodular transform: returns `(H, T)` with `T * G = H`,
/// where `H` keeps zero rows at the bottom.
pub fn row_hnf_with_transform(g: &IntMatrix) -> (IntMatrix, IntMatrix) {
    let mut rows = g.row_vecs();
    let mut t = IntMatrix::identity(g.rows()).row_vecs();
    echelon(&mut rows, g.cols(), Some(&mut t));
    (IntMatrix::from_rows(&rows, g.cols()), IntMatrix::from_rows(&t, g.rows()))
}

/// Saturated basis (as rows) of the integer kernel `{x : A x = 0}`.
pub fn kernel_basis(a: &IntMatrix) -> Vec<Vec<BigInt>> {
    let n = a.cols();
    let m = a.rows();
    // rows (A^T row i | e_i)
    let rows: Vec<Vec<BigInt>> = (0..n)
        .map(|i| {
            let mut v = a.column(i);
            let mut e = vec![BigInt::zero(); n];
            e[i] = BigInt::from(1);
            v.extend(e);
            v
        })
        .collect();
    let mut r = rows;
    let k = echelon(&mut r, m + n, None);
    r.truncate(k);
    r.into_iter()
        .filter(|v| v[..m].iter().all(|x| x.is_zero()))
        .map(|v| v[m..].to_vec())
        .collect()
}

/// Pivot column of each HNF row.
pub fn pivots(h: &[Vec<BigInt>]) -> Vec<usize> {
    h.iter().map(|r| r.iter().position(|x| !x.is_zero()).expect("zero row in HNF")).collect()
}

/// Coordinates of `v` with respect to an HNF basis, if `v` lies in its span.
pub fn solve_in_hnf(h: &[Vec<BigInt>], v: &[BigInt]) -> Option<Vec<BigInt>> {
    let piv = pivots(h);
    let mut rest = v.to_vec();
    let mut coords = Vec::with_capacity(h.len());
    for (row, &c) in h.iter().zip(&piv) {
        // entries left of this pivot must already be cleared
        if rest[..c].iter().any(|x| !x.is_zero()) {
            return None;
        }
        let (q, r) = rest[c].div_rem(&row[c]);
        if !r.is_zero() {
            return None;
        }
        sub_multiple(&mut rest, row, &q);
        coords.push(q);
    }
    if rest.iter().all(|x| x.is_zero()) {
        Some(coords)
    } else {
        None
    }
}
