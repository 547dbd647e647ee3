//! The twelve acceptance criteria, each timed against its budget. One PASS/FAIL line per criterion.

use nygaard_cli::commands::witt_laws;
use nygaard_cli::envelope::canonical;
use nygaard_cli::regress::{fixture_paths, recompute};
use nygaard_core::derham_witt::{build_torus, default_box};
use nygaard_core::filtered_homalg::*;
use nygaard_core::linalg::{IntMatrix, Lattice, PGroup};
use nygaard_core::pd_crystalline::PdAlgebra;
use nygaard_core::q_derham::{build_qtorus, QBase};
use nygaard_core::syntomic::{self, Model};
use nygaard_core::witt::{build_perfectoid_square, SquareModel};
use num_bigint::BigInt;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::path::PathBuf;
use std::time::{Duration, Instant};

type Outcome = Result<String, String>;

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn ok<T, E: std::fmt::Debug>(r: Result<T, E>) -> Result<T, String> {
    r.map_err(|e| format!("{e:?}"))
}

fn unimodular(rng: &mut impl Rng, n: usize) -> (IntMatrix, IntMatrix) {
    let (mut u, mut inv) = (IntMatrix::identity(n), IntMatrix::identity(n));
    if n < 2 {
        return (u, inv);
    }
    for _ in 0..3 * n {
        let i = rng.gen_range(0..n);
        let j = (i + rng.gen_range(1..n)) % n;
        let c = BigInt::from(rng.gen_range(-2i64..=2));
        u.add_row_multiple(i, j, &c);
        inv.add_col_multiple(j, i, &(-&c));
    }
    (u, inv)
}

/// Bounded complex over ℤ in degrees `0..len`, ranks ≤ 4, with p-power-ish elementary divisors in random bases.
fn random_complex(rng: &mut impl Rng, len: usize) -> Complex {
    let ranks: Vec<usize> = (0..len).map(|_| rng.gen_range(1..=4)).collect();
    let mut hit = vec![0usize; len];
    let mut std_diffs = Vec::new();
    for k in 0..len - 1 {
        let s = rng.gen_range(0..=(ranks[k] - hit[k]).min(ranks[k + 1]));
        let mut d = IntMatrix::zeros(ranks[k + 1], ranks[k]);
        for t in 0..s {
            let a: i64 = (0..rng.gen_range(0..3)).map(|_| [2i64, 3][rng.gen_range(0..2)]).product();
            d[(t, hit[k] + t)] = BigInt::from(a);
        }
        hit[k + 1] = s;
        std_diffs.push(d);
    }
    let bases: Vec<_> = ranks.iter().map(|&r| unimodular(rng, r)).collect();
    let diffs = (0..len - 1).map(|k| bases[k + 1].0.mul(&std_diffs[k]).mul(&bases[k].1)).collect();
    Complex::integers(0, ranks, diffs).expect("d² = 0 by construction")
}

fn random_filtered(rng: &mut impl Rng, c: &Complex, p: i64) -> FilteredComplex {
    let dims = c.z_ranks();
    let mut levels = vec![dims.iter().map(|&d| Lattice::full(d)).collect::<Vec<_>>()];
    for _ in 0..3 {
        let prev = levels.last().unwrap().clone();
        let mut w: Vec<Lattice> = Vec::new();
        for k in 0..dims.len() {
            let mut gens = Vec::new();
            if prev[k].rank() > 0 && rng.gen_bool(0.5) {
                let mut v = vec![BigInt::from(0); dims[k]];
                for b in prev[k].basis() {
                    let cf = BigInt::from(rng.gen_range(-2..=2));
                    for (x, y) in v.iter_mut().zip(b) {
                        *x += &cf * y;
                    }
                }
                gens.push(v);
            }
            let mut l = Lattice::span(dims[k], &gens).sum(&prev[k].scale(&BigInt::from(p)));
            if k > 0 {
                l = l.sum(&w[k - 1].image(&c.diffs[k - 1]));
            }
            w.push(l);
        }
        levels.push(w);
    }
    let act = action_matrices(&Scalar::int(p), c).unwrap();
    FilteredComplex::new(c.clone(), Some(act), 0, levels, Pattern::Constant, Pattern::FAdic).unwrap()
}

fn c01_witt_laws() -> Outcome {
    for p in [2u64, 3, 5] {
        let laws = ok(witt_laws(p, 4, 3, 200, 0xacce97))?;
        ensure(laws.holds(), || format!("p={p}: {laws:?}"))?;
    }
    Ok("ghost, FV=p, F[a]=[a^p], V(x)y=V(xF(y)) on 3×200 instances".into())
}

fn c02_decalage_laws() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    let scalars = [2i64, 3, 4, 6, 9];
    for t in 0..20 {
        let len = rng.gen_range(2..=5);
        let c = random_complex(&mut rng, len);
        let f = scalars[rng.gen_range(0..scalars.len())];
        let g = scalars[rng.gen_range(0..scalars.len())];
        let eg = ok(eta(&Scalar::int(g), &c))?;
        let iterated = ok(ok(eta(&Scalar::int(f), &eg.complex))?.cohomology())?;
        let direct = ok(ok(eta(&Scalar::int(f * g), &c))?.cohomology())?;
        ensure(iterated == direct, || format!("complex {t}: η_{f}η_{g} ≠ η_{}", f * g))?;
        let law = ok(eta_cohomology_law_check(&Scalar::int(f), &c))?;
        ensure(law.holds, || format!("complex {t}: H(η_{f}C) ≠ H/H[{f}]"))?;
    }
    Ok("20 complexes, composition and quotient laws exact".into())
}

fn c03_beilinson() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    for t in 0..20 {
        let len = rng.gen_range(2..=4);
        let c = random_complex(&mut rng, len);
        let f = Scalar::int([2, 3, 4][rng.gen_range(0..3)]);
        let truncated = ok(beilinson_truncate(&ok(FilteredComplex::f_adic(&f, &c, 2))?))?;
        let e = ok(eta(&f, &c))?;
        ensure(ok(truncated.underlying())?.lattices == e.lattices.lattices, || format!("complex {t}: τ^{{≤0}} ≠ η"))?;
    }
    for t in 0..20 {
        let len = rng.gen_range(2..=3);
        let c = random_complex(&mut rng, len);
        let p = [2, 3][rng.gen_range(0..2)];
        let fil = random_filtered(&mut rng, &c, p);
        let rows = ok(graded_law_check(&fil))?;
        ensure(rows.iter().all(|r| r.holds), || format!("filtered complex {t}: graded law fails"))?;
    }
    Ok("20 lattice equalities, 20 graded laws".into())
}

fn c04_nygaard_frobenius() -> Outcome {
    let mut weights = 0;
    for d in 1..=3 {
        for n in 1..=4u32 {
            let x = ok(build_torus(2, d, n))?;
            for i in 0..=4 {
                let rep = ok(x.frobenius_eta_check(i, 8))?;
                ensure(rep.holds, || format!("d={d} n={n} i={i}: {:?}", rep.failures().next()))?;
                weights += rep.rows.len();
            }
        }
    }
    Ok(format!("p=2, {weights} weight blocks over d≤3, n≤4, i≤4, M=8"))
}

fn c05_conjugate() -> Outcome {
    let mut weights = 0;
    for p in [2u64, 3] {
        let m = 2 * (p * p) as i64;
        for d in 1..=2 {
            let x = ok(build_torus(p, d, 1))?;
            for i in 0..=3 {
                let rep = ok(x.conjugate_check(i, m))?;
                ensure(rep.holds, || format!("p={p} d={d} i={i}: {:?}", rep.failures().next()))?;
                weights += rep.rows.len();
            }
        }
    }
    Ok(format!("p∈{{2,3}}, {weights} weight blocks, M=2p²"))
}

fn c06_hodge_quotient() -> Outcome {
    let mut weights = 0;
    for p in [2u64, 3] {
        for d in 1..=2 {
            for n in 1..=3 {
                let x = ok(build_torus(p, d, n))?;
                for i in 0..=3 {
                    let rep = ok(x.hodge_quotient_check(i, default_box(p)))?;
                    ensure(rep.holds, || format!("p={p} d={d} n={n} i={i}: {:?}", rep.failures().next()))?;
                    weights += rep.rows.len();
                }
            }
        }
    }
    Ok(format!("p∈{{2,3}}, {weights} weight blocks"))
}

fn c07_q_model() -> Outcome {
    for p in [2u64, 3] {
        for d in 1..=2 {
            let q = ok(build_qtorus(d, p, 4))?;
            let x = ok(build_torus(p, d, 3))?;
            for m in x.weights(4) {
                for j in 0..d {
                    ensure(q.specialize(&q.differential(&m, j)) == x.differential(&m, j), || {
                        format!("p={p} d={d} m={m:?}: differential mod μ")
                    })?;
                }
            }
            for j in 0..=d {
                ensure(q.specialize(&q.frobenius(j)) == x.frobenius(j), || format!("p={p} d={d}: φ mod μ"))?;
                for i in 0..=2 {
                    let a = q.specialize(&ok(q.q_divided_frobenius(i, j))?);
                    ensure(a == ok(x.divided_frobenius(i, j))?, || format!("p={p} d={d} i={i}: φᵢ mod μ"))?;
                }
            }
            // φ(dlog T_k) = ξ̃ dlog T_k: the first B-column of each dlog block
            let base = q.base().clone();
            let phi1 = q.frobenius(1);
            for k in 0..d {
                ensure(phi1.column(k * 4)[k * 4..k * 4 + 4] == base.xi_tilde().0[..], || {
                    format!("p={p} d={d}: φ(dlog T_{k})")
                })?;
            }
        }
        let base = QBase::new(p, 6);
        ensure(base.phi(&base.mu()) == base.mul(&base.mu(), &base.q_integer(p as i64)), || {
            format!("p={p}: φ(q−1) ≠ (q−1)[p]_q")
        })?;
        let rep = ok(ok(build_qtorus(1, p, 4))?.lnu_identification_check(2, 3, 2 * p as i64))?;
        ensure(rep.holds, || format!("p={p}: graded identification fails"))?;
    }
    Ok("mod-μ reduction, dlog and q−1 Frobenius, graded checks at (n,N)=(3,4)".into())
}

fn c08_acrys() -> Outcome {
    for p in [2u64, 3] {
        let a = ok(PdAlgebra::new(p, 1, 3, 1, 3 * (p * p) as u32))?;
        let conj = a.conj_descriptions_agree(2);
        ensure(conj.holds, || format!("p={p}: conj descriptions {conj:?}"))?;
        let graded = a.conj_graded_map_check();
        ensure(graded.holds, || format!("p={p}: graded map {graded:?}"))?;
        for i in 0..=2 {
            let img = ok(a.nygaard_graded_image_check(i))?;
            ensure(img.holds, || format!("p={p} i={i}: {img:?}"))?;
        }
        let pth = ok(a.phi_pth_power_check(&[]))?;
        ensure(pth.holds, || format!("p={p}: φ(x) ≢ x^p: {pth:?}"))?;
    }
    Ok("S = F_p[x^{1/p³}]/x, W = 3p², p∈{2,3}".into())
}

fn c09_syntomic_low_weights() -> Outcome {
    let mut caps = Vec::new();
    for p in [2u64, 3] {
        for r in 1..=3u32 {
            let cyclic = PGroup::cyclic_power(p, r, 1);
            let limit = r + 2;
            let charp = ok(syntomic::minimal_orbit_cap(Model::Charp, p, 1, 0, r, 1, 8, limit))?;
            let q = ok(syntomic::minimal_orbit_cap(Model::Q, p, 1, 0, r, 4, 4, limit))?;
            let acrys = ok(syntomic::syntomic_acrys(&ok(PdAlgebra::new(p, 1, 2, r, 2 * (p * p) as u32))?, 0))?;
            ensure(charp.groups[0] == cyclic && q.groups[0] == cyclic && acrys.h0 == cyclic, || {
                format!("p={p} r={r}: H⁰(0) ≠ ℤ/p^{r}")
            })?;
            let one = ok(syntomic::minimal_orbit_cap(Model::Charp, p, 1, 1, r, 1, 8, limit))?;
            ensure(one.dlog_classes.iter().all(|c| c.closed && c.nonzero), || format!("p={p} r={r}: dlog T is zero"))?;
            let neg_c = ok(syntomic::minimal_orbit_cap(Model::Charp, p, 1, -1, r, 1, 8, limit))?;
            let neg_q = ok(syntomic::minimal_orbit_cap(Model::Q, p, 1, -1, r, 4, 4, limit))?;
            let neg_a = ok(syntomic::syntomic_acrys(&ok(PdAlgebra::new(p, 1, 2, r, 2 * (p * p) as u32))?, -1))?;
            ensure(
                neg_c.groups.iter().chain(&neg_q.groups).all(PGroup::is_zero) && neg_a.h0.is_zero() && neg_a.h1.is_zero(),
                || format!("p={p} r={r}: twist −1 nonzero"),
            )?;
            caps.push(charp.orbit_cap.max(q.orbit_cap).max(one.orbit_cap).max(neg_c.orbit_cap).max(neg_q.orbit_cap));
        }
    }
    Ok(format!("H⁰(0)=ℤ/pʳ in charp, q, acrys; dlog nonzero; i<0 vanishes; caps {caps:?}"))
}

fn c10_contraction() -> Outcome {
    let mut detail = Vec::new();
    for p in [2u64, 3] {
        for i in 0..=2 {
            let m = syntomic::contraction_bound(p, i);
            for n in [4usize, 8] {
                let rep = ok(syntomic::contraction_bound_check(p, 2, i, m, n))?;
                ensure(rep.in_contract && rep.containment && rep.holds, || format!("{rep:?}"))?;
            }
            detail.push(format!("p={p},i={i}:m={m}"));
        }
    }
    Ok(detail.join(" "))
}

fn c11_perfectoid_square() -> Outcome {
    for p in [2u64, 3, 5] {
        for model in [SquareModel::Fp { p, n: 4 }, SquareModel::Q { p, n: 4, n_trunc: 4 }] {
            let checks = build_perfectoid_square(model.clone()).verify();
            ensure(checks.len() == 8 && checks.iter().all(|c| c.holds), || {
                format!("{model:?}: {:?}", checks.iter().filter(|c| !c.holds).map(|c| &c.name).collect::<Vec<_>>())
            })?;
        }
    }
    Ok("8 relations, F_p and q-models at (n,N)=(4,4), p∈{2,3,5}".into())
}

fn c12_determinism() -> Outcome {
    let dir = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../fixtures");
    let paths = ok(fixture_paths(&dir))?;
    let run_all = |threads: usize| -> Result<Vec<(String, String)>, String> {
        let pool = ok(rayon::ThreadPoolBuilder::new().num_threads(threads).build())?;
        pool.install(|| {
            paths
                .iter()
                .map(|p| {
                    let (expected, fresh) = ok(recompute(p))?;
                    Ok((canonical(&expected), canonical(&fresh)))
                })
                .collect()
        })
    };
    let one = run_all(1)?;
    let four = run_all(4)?;
    for ((path, (expected, a)), (_, b)) in paths.iter().zip(&one).zip(&four) {
        ensure(a == b, || format!("{}: differs between 1 and 4 threads", path.display()))?;
        ensure(a == expected, || format!("{}: differs from fixture", path.display()))?;
    }
    Ok(format!("{} fixtures byte-identical at 1 and 4 threads", paths.len()))
}

#[test]
fn acceptance() {
    let criteria: [(u32, &str, u64, fn() -> Outcome); 12] = [
        (1, "Witt laws", 10, c01_witt_laws),
        (2, "décalage laws", 10, c02_decalage_laws),
        (3, "Beilinson truncation is décalage", 20, c03_beilinson),
        (4, "Nygaard-Frobenius lattice identity", 60, c04_nygaard_frobenius),
        (5, "conjugate quasi-isomorphism", 60, c05_conjugate),
        (6, "Hodge-quotient exactness", 30, c06_hodge_quotient),
        (7, "q-model consistency", 120, c07_q_model),
        (8, "A_crys structure", 120, c08_acrys),
        (9, "syntomic weights 0 and 1", 60, c09_syntomic_low_weights),
        (10, "contraction bound", 30, c10_contraction),
        (11, "perfectoid square", 5, c11_perfectoid_square),
        (12, "determinism and regression", 600, c12_determinism),
    ];
    let total = Instant::now();
    let mut failed = Vec::new();
    for (no, name, budget, check) in criteria {
        let start = Instant::now();
        let outcome = check();
        let elapsed = start.elapsed();
        let in_budget = elapsed <= Duration::from_secs(budget);
        let (status, detail) = match (&outcome, in_budget) {
            (Ok(d), true) => ("PASS", d.clone()),
            (Ok(d), false) => ("FAIL", format!("over budget {budget}s: {d}")),
            (Err(e), _) => ("FAIL", e.clone()),
        };
        println!("criterion {no:>2} {status} {:>8.2}s / {budget}s  {name}: {detail}", elapsed.as_secs_f64());
        if status == "FAIL" {
            failed.push(no);
        }
    }
    println!("acceptance total {:.2}s", total.elapsed().as_secs_f64());
    assert!(failed.is_empty(), "failed criteria: {failed:?}");
}
