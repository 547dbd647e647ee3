//! Contraction of `φᵢ` on deep Nygaard levels, and invertibility of `ξ̃^{j−i}φ − 1` above degree i.
//!
//! Both are statements about single B-blocks: Frobenius matrices do not depend on the weight, and
//! along an orbit the operator only picks up the weight shift, so nilpotence on one block gives
//! nilpotence on every orbit.

use crate::error::{Error, Result};
use crate::linalg::{IntMatrix, Lattice};
use crate::report::{item, ItemReport};
use crate::torus::KoszulTorus;
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::ToPrimitive;
use serde::Serialize;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ContractionReport {
    pub p: u64,
    pub d: usize,
    pub i: i64,
    pub m: i64,
    pub n_trunc: usize,
    /// `m ≥ (pi+1)/(p−1)`
    pub in_contract: bool,
    /// `φᵢ(𝒩^{≥m}) ⊆ 𝒩^{≥m+1} + pX`
    pub containment: bool,
    /// `φᵢ` descends to the image of `𝒩^{≥m}` in `X/p`
    pub well_defined: bool,
    /// smallest K with `φᵢ^K = 0` there
    pub nilpotency_index: Option<usize>,
    /// `(φᵢ − 1)·(−Σ φᵢ^k) = 1`
    pub inverse_verified: bool,
    pub holds: bool,
}

/// `⌈(pi+1)/(p−1)⌉`
pub fn contraction_bound(p: u64, i: i64) -> i64 {
    let num = p as i64 * i + 1;
    let den = p as i64 - 1;
    Integer::div_ceil(&num, &den)
}

type FpMat = Vec<Vec<u64>>;

fn fp_mul(a: &FpMat, b: &FpMat, p: u64) -> FpMat {
    let n = a.len();
    let k = b.len();
    let m = if k == 0 { 0 } else { b[0].len() };
    let mut out = vec![vec![0u64; m]; n];
    for r in 0..n {
        for t in 0..k {
            if a[r][t] == 0 {
                continue;
            }
            for c in 0..m {
                out[r][c] = (out[r][c] + a[r][t] * b[t][c]) % p;
            }
        }
    }
    out
}

fn fp_is_zero(a: &FpMat) -> bool {
    a.iter().all(|r| r.iter().all(|&x| x == 0))
}

fn to_fp(x: &BigInt, p: u64) -> u64 {
    x.mod_floor(&BigInt::from(p)).to_u64().unwrap()
}

/// Nilpotency index and verified inverse of `F − 1` over F_p.
fn nilpotent_inverse(f: &FpMat, p: u64) -> (Option<usize>, bool) {
    let n = f.len();
    let ident: FpMat = (0..n).map(|r| (0..n).map(|c| u64::from(r == c)).collect()).collect();
    let mut power = ident.clone();
    let mut sum = vec![vec![0u64; n]; n];
    for k in 0..=n + 1 {
        if fp_is_zero(&power) {
            // G = −Σ F^t, check (F − 1)G = 1
            let g: FpMat = sum.iter().map(|r| r.iter().map(|&x| (p - x) % p).collect()).collect();
            let fm1: FpMat = (0..n).map(|r| (0..n).map(|c| (f[r][c] + p - ident[r][c]) % p).collect()).collect();
            return (Some(k), fp_mul(&fm1, &g, p) == ident);
        }
        for r in 0..n {
            for c in 0..n {
                sum[r][c] = (sum[r][c] + power[r][c]) % p;
            }
        }
        power = fp_mul(&power, f, p);
    }
    (None, false)
}

/// The q-model mod p at Nygaard level m: containment, descent, nilpotence and the geometric-series inverse.
pub fn contraction_bound_check(p: u64, d: usize, i: i64, m: i64, n_trunc: usize) -> Result<ContractionReport> {
    if i < 0 || m < i {
        return Err(Error::Invalid(format!("contraction check needs 0 ≤ i ≤ m, got i={i}, m={m}")));
    }
    let torus = KoszulTorus::new(p, d, n_trunc)?;
    let n = n_trunc;
    let pb = BigInt::from(p);
    let mut containment = true;
    let mut well_defined = true;
    let mut nil: Option<usize> = Some(0);
    let mut inverse_verified = true;
    for j in 0..=d {
        let e_i = KoszulTorus::nygaard_exponent(i, j);
        let e_m = KoszulTorus::nygaard_exponent(m, j);
        let lift = torus.scalar(j, &torus.base.pow(&torus.xi(), e_m - e_i));
        let phi_m = torus.divided_frobenius(i, j)?.mul(&lift);
        let rank = torus.z_rank(j);
        let target = torus.nygaard_lattice(m + 1, j).sum(&Lattice::scaled_full(rank, &pb));
        containment &= target.contains_lattice(&Lattice::column_span(&phi_m));

        // mod p, ξ^e ≡ μ^{(p−1)e}: the image of 𝒩^{≥m} is spanned by μ^s e_t with s ≥ (p−1)e_m
        let shift = (p as usize - 1) * e_m as usize;
        let basis: Vec<(usize, usize)> =
            (0..torus.rank(j)).flat_map(|t| (shift..n).map(move |s| (t, s))).collect();
        for t in 0..torus.rank(j) {
            for s in n.saturating_sub(shift)..n {
                well_defined &= phi_m.column(t * n + s).iter().all(|x| x.is_multiple_of(&pb));
            }
        }
        let f: FpMat = basis
            .iter()
            .map(|&(t, s)| {
                basis
                    .iter()
                    .map(|&(t2, s2)| to_fp(&phi_m[(t * n + s, t2 * n + s2 - shift)], p))
                    .collect()
            })
            .collect();
        let (k, inv) = nilpotent_inverse(&f, p);
        nil = match (nil, k) {
            (Some(a), Some(b)) => Some(a.max(b)),
            _ => None,
        };
        inverse_verified &= inv;
    }
    let in_contract = m >= contraction_bound(p, i);
    if in_contract && !containment {
        return Err(Error::BoundViolated(format!(
            "φ_{i} does not map Nygaard level {m} into level {} mod p (p={p}, d={d}, N={n_trunc})",
            m + 1
        )));
    }
    let holds = containment && well_defined && nil.is_some() && inverse_verified;
    Ok(ContractionReport {
        p,
        d,
        i,
        m,
        n_trunc,
        in_contract,
        containment,
        well_defined,
        nilpotency_index: nil,
        inverse_verified,
        holds,
    })
}

/// In Koszul degrees `j > i`, `ξ̃^{j−i}φ − 1` on `B/pʳ` is inverted by `−Σ (ξ̃^{j−i}φ)^k`, a finite sum.
pub fn degree_bound_check(p: u64, d: usize, i: i64, r: u32, n_trunc: usize) -> Result<ItemReport> {
    let torus = KoszulTorus::new(p, d, n_trunc)?;
    let base = &torus.base;
    let modulus = BigInt::from(p).pow(r);
    let ident = IntMatrix::identity(n_trunc);
    let mut items = Vec::new();
    for j in 0..=d as i64 {
        if j <= i {
            continue;
        }
        let a = base
            .mult_matrix(&base.pow(&base.xi_tilde(), (j - i) as u64))
            .mul(&base.phi_matrix())
            .reduce_mod(&modulus);
        let mut power = ident.clone();
        let mut sum = IntMatrix::zeros(n_trunc, n_trunc);
        let mut steps = None;
        for k in 0..=(64 * r as usize + n_trunc) {
            if power.is_zero() {
                steps = Some(k);
                break;
            }
            sum = sum.add(&power).reduce_mod(&modulus);
            power = power.mul(&a).reduce_mod(&modulus);
        }
        let verified = steps.is_some() && {
            let g = sum.neg();
            a.sub(&ident).mul(&g).reduce_mod(&modulus) == ident
        };
        let detail = match steps {
            Some(k) => format!("series stops after {k} terms"),
            None => "series did not terminate".to_string(),
        };
        items.push(item(format!("degree {j}"), verified, detail));
    }
    Ok(ItemReport::new("degree_bound", items))
}
