//! Fibre of `φᵢ − ι : 𝒩^{≥i} → X` on a torus model, split into Frobenius orbits of weights.
//!
//! Weight 0 is its own orbit. A primitive weight `m'` spans `{m', pm', p²m', …}`; we keep the
//! source through step V and the target through step V+1, where step V+1 only keeps Koszul
//! degrees `≤ i`. Once the Koszul differential of step V+1 vanishes mod pʳ the tail beyond V
//! contributes exactly that top block in the integral model, so the finite complex computes the
//! orbit. The certificate is that vanishing plus agreement of the answers at V and V+1.

use super::{DlogMembership, Model, SyntomicResult, DEFAULT_PRECISION_BOUND};
use crate::error::{Error, Result};
use crate::linalg::{cohomology_mod, howell_contains, howell_form, IntMatrix, ModPn, PGroup};
use crate::report::item;
use crate::torus::{KoszulTorus, Weight};
use num_bigint::BigInt;
use num_traits::Zero;
use rayon::prelude::*;

/// `fib(φᵢ − ι)` on one orbit: degree k is `𝒩^k ⊕ X^{k−1}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TotalComplex {
    pub ranks: Vec<usize>,
    pub diffs: Vec<IntMatrix>,
}

#[derive(Clone, Debug)]
pub struct OrbitEngine {
    pub torus: KoszulTorus,
    pub i: i64,
    pub r: u32,
    ring: ModPn,
}

/// Nonzero weights of the box that are not divisible by p; every nonzero box weight is `p^v m'` for one of them.
pub fn orbit_representatives(torus: &KoszulTorus, bound: i64) -> Vec<Weight> {
    torus
        .weight_box(bound)
        .into_iter()
        .filter(|m| m.iter().any(|&x| x != 0) && !torus.is_p_divisible(m))
        .collect()
}

fn check_precision(r: u32, i: i64) -> Result<()> {
    if r == 0 {
        return Err(Error::Invalid("syntomic coefficients need r ≥ 1".into()));
    }
    let needed = r as i64 + i.max(0);
    if needed > DEFAULT_PRECISION_BOUND as i64 {
        return Err(Error::PrecisionExhausted { needed: needed as u32, bound: DEFAULT_PRECISION_BOUND });
    }
    Ok(())
}

/// Total complex of the orbit of `m'` truncated at V (weight 0 ignores V).
pub fn total_complex(torus: &KoszulTorus, i: i64, m: &[i64], cap: u32) -> Result<TotalComplex> {
    let d = torus.d;
    let zero = m.iter().all(|&x| x == 0);
    let steps: Vec<Weight> = if zero {
        vec![m.to_vec()]
    } else {
        (0..=cap + 1).map(|v| torus.scale_weight(m, (torus.p as i64).pow(v))).collect()
    };
    let src_steps = if zero { 1 } else { cap as usize + 1 };
    // target blocks present in degree j
    let tgt_steps = |j: usize| -> usize {
        if zero {
            1
        } else if (j as i64) <= i {
            src_steps + 1
        } else {
            src_steps
        }
    };
    let z = |j: usize| torus.z_rank(j);
    let s_dim = |j: usize| if j <= d { z(j) * src_steps } else { 0 };
    let x_dim = |j: i64| if j >= 0 && j as usize <= d { z(j as usize) * tgt_steps(j as usize) } else { 0 };
    let ranks: Vec<usize> = (0..=d + 1).map(|k| s_dim(k) + x_dim(k as i64 - 1)).collect();

    let phi: Vec<IntMatrix> = (0..=d).map(|j| torus.divided_frobenius(i, j)).collect::<Result<_>>()?;
    let iota: Vec<IntMatrix> = (0..=d).map(|j| torus.nygaard_inclusion(i, j)).collect();
    let nyg: Vec<_> = steps.iter().take(src_steps).map(|w| torus.nygaard_block(i, w)).collect();

    let mut diffs = Vec::with_capacity(d + 1);
    for k in 0..=d {
        let mut dk = IntMatrix::zeros(ranks[k + 1], ranks[k]);
        let (s_k, s_next) = (s_dim(k), s_dim(k + 1));
        // d_S
        if k < d {
            for (v, block) in nyg.iter().enumerate() {
                dk.set_block(v * z(k + 1), v * z(k), &block.diffs[k]);
            }
        }
        // F = φᵢ·shift − ι from 𝒩^k into X^k
        for v in 0..src_steps {
            let (r0, c0) = (s_next + v * z(k), v * z(k));
            if zero {
                dk.set_block(r0, c0, &phi[k].sub(&iota[k]));
                continue;
            }
            dk.set_block(r0, c0, &iota[k].neg());
            if v + 1 < tgt_steps(k) {
                dk.set_block(s_next + (v + 1) * z(k), c0, &phi[k]);
            }
        }
        // −d_X from X^{k−1} into X^k
        if k >= 1 {
            let j = k - 1;
            for v in 0..tgt_steps(j).min(tgt_steps(k)) {
                let dx = torus.differential(&steps[v], j).neg();
                dk.set_block(s_next + v * z(k), s_k + v * z(j), &dx);
            }
        }
        diffs.push(dk);
    }
    Ok(TotalComplex { ranks, diffs })
}

impl OrbitEngine {
    pub fn new(p: u64, d: usize, n_trunc: usize, i: i64, r: u32) -> Result<Self> {
        check_precision(r, i)?;
        Ok(OrbitEngine { torus: KoszulTorus::new(p, d, n_trunc)?, i, r, ring: ModPn::new(p, r) })
    }

    pub fn cohomology(&self, m: &[i64], cap: u32) -> Result<Vec<PGroup>> {
        let t = total_complex(&self.torus, self.i, m, cap)?;
        cohomology_mod(&t.ranks, &t.diffs, &self.ring)
    }

    /// The Koszul differential of step V+1 vanishes mod pʳ.
    pub fn tail_is_flat(&self, m: &[i64], cap: u32) -> bool {
        let w = self.torus.scale_weight(m, (self.torus.p as i64).pow(cap + 1));
        (0..self.torus.d).all(|j| self.torus.differential(&w, j).reduce_mod(&self.ring.modulus).is_zero())
    }

    /// `dlog T_I` with `|I| = i` on weight 0: cocycle and non-boundary flags.
    pub fn dlog_classes(&self) -> Result<Vec<DlogMembership>> {
        if self.i < 0 || self.i as usize > self.torus.d {
            return Ok(Vec::new());
        }
        let deg = self.i as usize;
        let zero = vec![0; self.torus.d];
        let t = total_complex(&self.torus, self.i, &zero, 0)?;
        let image = (deg > 0).then(|| howell_form(&t.diffs[deg - 1].transpose(), &self.ring));
        let n = self.torus.n_trunc();
        let mut out = Vec::new();
        for (idx, &mask) in self.torus.subsets(deg).iter().enumerate() {
            let mut v = vec![BigInt::zero(); t.ranks[deg]];
            v[idx * n] = BigInt::from(1);
            let closed = deg >= t.diffs.len()
                || t.diffs[deg].apply(&v).iter().all(|x| (x % &self.ring.modulus).is_zero());
            let boundary = image.as_ref().is_some_and(|h| howell_contains(h, &v, &self.ring));
            out.push(DlogMembership {
                subset: (0..self.torus.d).filter(|k| mask & (1 << k) != 0).collect(),
                degree: deg,
                closed,
                nonzero: !boundary,
            });
        }
        Ok(out)
    }
}

fn direct_sum_all(p: u64, parts: &[Vec<PGroup>], len: usize) -> Vec<PGroup> {
    (0..len)
        .map(|k| parts.iter().fold(PGroup::zero(p), |acc, g| acc.direct_sum(&g[k])))
        .collect()
}

fn run(model: Model, engine: OrbitEngine, bound: i64, cap: u32, reported: usize) -> Result<SyntomicResult> {
    let torus = &engine.torus;
    let reps = orbit_representatives(torus, bound);
    let zero = vec![0; torus.d];
    let w0 = engine.cohomology(&zero, 0)?;
    let per_orbit = reps
        .par_iter()
        .map(|m| -> Result<(Vec<PGroup>, bool, bool)> {
            let a = engine.cohomology(m, cap)?;
            let b = engine.cohomology(m, cap + 1)?;
            let stable = a[..reported] == b[..reported];
            Ok((a, stable, engine.tail_is_flat(m, cap)))
        })
        .collect::<Result<Vec<_>>>()?;
    let unstable: Vec<&Weight> = reps.iter().zip(&per_orbit).filter(|(_, x)| !x.1).map(|(m, _)| m).collect();
    let rough: Vec<&Weight> = reps.iter().zip(&per_orbit).filter(|(_, x)| !x.2).map(|(m, _)| m).collect();
    if !unstable.is_empty() || !rough.is_empty() {
        let show = |v: &[&Weight]| v.iter().take(3).map(|m| format!("{m:?}")).collect::<Vec<_>>().join(", ");
        return Err(Error::NotStabilized(format!(
            "orbit cap V={cap}: {} orbits change at V+1 ({}), {} orbits have a non-flat tail ({})",
            unstable.len(),
            show(&unstable),
            rough.len(),
            show(&rough)
        )));
    }
    let mut parts: Vec<Vec<PGroup>> = vec![w0];
    parts.extend(per_orbit.into_iter().map(|x| x.0));
    let groups = direct_sum_all(torus.p, &parts, reported);
    let global_model = groups.iter().enumerate().any(|(k, g)| k as i64 > engine.i && !g.is_zero());
    let certificates = vec![
        item("orbit_stable", true, format!("{} orbits agree at V={cap} and V={}", reps.len(), cap + 1)),
        item("tail_flat", true, format!("Koszul differential of step {} vanishes mod p^{}", cap + 1, engine.r)),
    ];
    Ok(SyntomicResult {
        model,
        p: torus.p,
        d: torus.d,
        i: engine.i,
        r: engine.r,
        n_trunc: torus.n_trunc(),
        weight_box: bound,
        orbit_cap: cap,
        groups,
        orbits: reps.len(),
        dlog_classes: engine.dlog_classes()?,
        certificates,
        global_model,
    })
}

/// `ℤ/pʳ(i)` of the torus through the integral model, all degrees `0..=d+1`.
pub fn syntomic_charp(p: u64, d: usize, i: i64, r: u32, bound: i64, cap: u32) -> Result<SyntomicResult> {
    let engine = OrbitEngine::new(p, d, 1, i, r)?;
    run(Model::Charp, engine, bound, cap, d + 2)
}

/// `τ^{≤i}` of `ℤ/pʳ(i)` through the q-model over `ℤ[q]/(q−1)^N`.
pub fn syntomic_q(p: u64, d: usize, i: i64, r: u32, n_trunc: usize, bound: i64, cap: u32) -> Result<SyntomicResult> {
    if n_trunc < 2 {
        return Err(Error::Invalid(format!("q-model needs N ≥ 2, got {n_trunc}")));
    }
    let engine = OrbitEngine::new(p, d, n_trunc, i, r)?;
    // negative twists: every Koszul degree sits above i and the whole fibre is certified
    let reported = if i < 0 { d + 2 } else { (i + 1).min(d as i64 + 2) as usize };
    run(Model::Q, engine, bound, cap, reported)
}

/// Smallest orbit cap `≤ limit` whose certificates fire.
pub fn minimal_orbit_cap(
    model: Model,
    p: u64,
    d: usize,
    i: i64,
    r: u32,
    n_trunc: usize,
    bound: i64,
    limit: u32,
) -> Result<SyntomicResult> {
    let mut last = None;
    for cap in 0..=limit {
        let res = match model {
            Model::Charp => syntomic_charp(p, d, i, r, bound, cap),
            Model::Q => syntomic_q(p, d, i, r, n_trunc, bound, cap),
            Model::Acrys => return Err(Error::Invalid("orbit caps do not apply to the acrys model".into())),
        };
        match res {
            Err(Error::NotStabilized(msg)) => last = Some(msg),
            other => return other,
        }
    }
    Err(Error::NotStabilized(last.unwrap_or_default()))
}
