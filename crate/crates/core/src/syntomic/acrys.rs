//! `ℤ/pʳ(i)` of `S = F_p[x^{1/p^e}]/(x)` through the 𝔸_crys model.

use super::Model;
use crate::error::Result;
use crate::linalg::PGroup;
use crate::pd_crystalline::{FpSpan, PdAlgebra};
use crate::report::{item, Item, ItemReport};
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::ToPrimitive;
use serde::Serialize;
use std::collections::BTreeMap;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct AcrysSyntomic {
    pub model: Model,
    pub p: u64,
    pub vars: usize,
    pub depth: u32,
    pub i: i64,
    pub r: u32,
    pub weight_bound: u32,
    /// `𝔸_crys^{φ=pⁱ}/pʳ`, certified at W and W+p
    pub h0: PGroup,
    /// cokernel of `φᵢ − 1` on global sections of the truncation
    pub h1: PGroup,
    pub certificates: Vec<Item>,
    pub span_identity: Option<ItemReport>,
    pub global_model: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct KTheoryRow {
    /// K-group degree 2i
    pub degree: u32,
    pub group: PGroup,
}

/// Image of `φᵢ − ι` mod p against `Fil^{i+1}_pd + Fil^conj_{i−1}`, and the monomial identity
/// `Fil^conj_{i−1} + Fil^{pi}_pd = 𝔸/p`.
///
/// Monomials whose fractional exponents are not divisible by p have no Frobenius preimage at
/// finite depth, so low-weight ones are only asked of the depth `e−1` part.
fn span_identity(a: &PdAlgebra, i: i64) -> ItemReport {
    let p = a.p;
    let iu = i as u32;
    let basis = a.basis();
    let everything = basis.iter().all(|m| a.conj_level(m) + 1 <= iu || m.weight() >= p as u32 * iu);

    let mut missing = 0;
    let mut asked = 0;
    for chain in a.frobenius_chains() {
        let mut span = FpSpan::new(p, chain.len());
        for t in 0..chain.len() {
            let mut col = BTreeMap::new();
            let level = a.nygaard_level(&chain[t]) as i64;
            let e = (i - level).max(0) as u32;
            let (c, next) = a.phi_mono(&chain[t]);
            let pb = BigInt::from(p);
            let phi_i = (&c * pb.pow(e) / pb.pow(iu)).mod_floor(&pb).to_u64().unwrap();
            let iota = if e == 0 { p - 1 } else { 0 };
            if next == chain[t] {
                col.insert(t, (phi_i + iota) % p);
            } else {
                col.insert(t, iota);
                if t + 1 < chain.len() {
                    col.insert(t + 1, phi_i);
                }
            }
            span.insert_sparse(col);
        }
        for (t, m) in chain.iter().enumerate() {
            let wanted = m.weight() > iu
                || (a.conj_level(m) + 1 <= iu && m.frac.iter().all(|f| f % p == 0));
            if wanted {
                asked += 1;
                let mut v = vec![0u64; chain.len()];
                v[t] = 1;
                if !span.contains(&v) {
                    missing += 1;
                }
            }
        }
    }
    ItemReport::new(
        "surjectivity_mod_p",
        vec![
            item("filtration_union", everything, format!("Fil^conj_{} + Fil^{}_pd", i - 1, p as i64 * i)),
            item("image_contains", missing == 0, format!("{asked} monomials asked, {missing} missing")),
        ],
    )
}

pub fn syntomic_acrys(a: &PdAlgebra, i: i64) -> Result<AcrysSyntomic> {
    let fixed = a.frobenius_fixed_points(i)?;
    let (_, _, h1) = a.phi_minus_one(i)?;
    let certificates = vec![item(
        "weight_stable",
        true,
        format!("fixed points agree at W={} and W={}", a.weight_bound, a.weight_bound + a.p as u32),
    )];
    let span = (i > 0 && a.depth >= 1).then(|| span_identity(a, i));
    Ok(AcrysSyntomic {
        model: Model::Acrys,
        p: a.p,
        vars: a.vars,
        depth: a.depth,
        i,
        r: a.n,
        weight_bound: a.weight_bound,
        global_model: !h1.is_zero(),
        h0: fixed.group,
        h1,
        certificates,
        span_identity: span,
    })
}

/// `H⁰(ℤ/pʳ(i))` for `i = 0..=i_max`, the candidates for `K_{2i}(S; ℤ/pʳ)`.
pub fn k_theory_table(a: &PdAlgebra, i_max: u32) -> Result<Vec<KTheoryRow>> {
    (0..=i_max)
        .map(|i| Ok(KTheoryRow { degree: 2 * i, group: a.frobenius_fixed_points(i as i64)?.group }))
        .collect()
}
