mod common;

use common::*;
use nygaard_core::error::Error;
use nygaard_core::filtered_homalg::*;
use nygaard_core::linalg::*;
use nygaard_core::q_derham::QBase;
use num_bigint::BigInt;
use num_integer::Integer;
use proptest::prelude::*;
use rand::Rng;

fn zc(start: i32, k: &KnownComplex) -> Complex {
    Complex::integers(start, k.ranks.clone(), k.diffs.clone()).unwrap()
}

fn ab(free: usize, torsion: &[i64]) -> AbelianGroup {
    AbelianGroup { free_rank: free, torsion: torsion.iter().map(|&t| BigInt::from(t)).collect() }
}

/// `H/H[f]` from the known invariants: ℤ/a becomes ℤ/(a / gcd(a, f)).
fn quotient_oracle(k: &KnownComplex, f: i64) -> Vec<AbelianGroup> {
    (0..k.ranks.len())
        .map(|j| {
            let mut t: Vec<i64> = k.torsion[j].iter().map(|&a| a / a.gcd(&f)).filter(|&a| a != 1).collect();
            t.sort();
            ab(k.free[j], &t)
        })
        .collect()
}

fn known_group(k: &KnownComplex, j: usize) -> AbelianGroup {
    let mut t = k.torsion[j].clone();
    t.sort();
    ab(k.free[j], &t)
}


fn same_group(a: &AbelianGroup, b: &AbelianGroup) -> bool {
    a.free_rank == b.free_rank && [2u64, 3, 5, 7].iter().all(|&p| a.localize(p) == b.localize(p)) && {
        let oa = a.torsion.iter().fold(BigInt::from(1), |x, y| x * y);
        let ob = b.torsion.iter().fold(BigInt::from(1), |x, y| x * y);
        oa == ob
    }
}

#[test]
fn eta_one_is_identity() {
    let mut r = rng(1);
    for _ in 0..10 {
        let k = random_known_complex(&mut r, 4, 3, &[2, 3]);
        let c = zc(0, &k);
        let e = eta(&Scalar::int(1), &c).unwrap();
        for (k, l) in e.lattices.lattices.iter().enumerate() {
            assert_eq!(*l, Lattice::full(c.z_rank(k)));
        }
    }
}

#[test]
fn eta_p_kills_multiplication_by_p() {
    let c = Complex::integers(0, vec![1, 1], vec![IntMatrix::from_i64(1, 1, &[3])]).unwrap();
    let e = eta(&Scalar::int(3), &c).unwrap();
    assert_eq!(e.cohomology().unwrap(), vec![AbelianGroup::zero(), AbelianGroup::zero()]);
    // η^0 = ℤ, η^1 = 3ℤ
    assert_eq!(e.lattices.lattices[0], Lattice::full(1));
    assert_eq!(e.lattices.lattices[1], Lattice::scaled_full(1, &BigInt::from(3)));
}

#[test]
fn eta_composite_law_random() {
    let mut r = rng(2);
    let choices = [2i64, 3, 4, 6, 9];
    for _ in 0..20 {
        let k = random_known_complex(&mut r, 4, 3, &[2, 3]);
        let c = zc(0, &k);
        let f = choices[r.gen_range(0..choices.len())];
        let g = choices[r.gen_range(0..choices.len())];
        let eg = eta(&Scalar::int(g), &c).unwrap();
        let act = eg.transport(&action_matrices(&Scalar::int(f), &c).unwrap()).unwrap();
        let efg_iter = eta_by_action(&act, &eg.complex).unwrap();
        let efg = eta(&Scalar::int(f * g), &c).unwrap();
        let h1 = efg_iter.cohomology().unwrap();
        let h2 = efg.cohomology().unwrap();
        for (a, b) in h1.iter().zip(&h2) {
            assert!(same_group(a, b), "{a} vs {b}");
        }
        // the iterated lattices land exactly on η_{fg}
        for j in 0..c.len() {
            let img = efg_iter.lattices.lattices[j].image(&eg.inclusion[j]);
            assert_eq!(img, efg.lattices.lattices[j]);
        }
    }
}

#[test]
fn eta_law_example_torsion_and_free() {
    // H^1 = ℤ/9 ⊕ ℤ
    let c = Complex::integers(0, vec![1, 2], vec![IntMatrix::from_i64(2, 1, &[9, 0])]).unwrap();
    let rep = eta_cohomology_law_check(&Scalar::int(3), &c).unwrap();
    assert!(rep.holds);
    let h = eta(&Scalar::int(3), &c).unwrap().cohomology().unwrap();
    assert_eq!(h[0], AbelianGroup::zero());
    assert_eq!(h[1], ab(1, &[3]));
}

#[test]
fn eta_law_torsion_free_unchanged() {
    let c = Complex::integers(0, vec![2, 2], vec![IntMatrix::from_i64(2, 2, &[1, 0, 0, 0])]).unwrap();
    let h = c.cohomology_z().unwrap();
    let he = eta(&Scalar::int(5), &c).unwrap().cohomology().unwrap();
    assert_eq!(h, he);
}

#[test]
fn eta_law_random_p_squared() {
    let mut r = rng(3);
    for _ in 0..20 {
        let k = random_known_complex(&mut r, 4, 3, &[2, 3]);
        let c = zc(0, &k);
        let rep = eta_cohomology_law_check(&Scalar::int(4), &c).unwrap();
        assert!(rep.holds);
        let he = eta(&Scalar::int(4), &c).unwrap().cohomology().unwrap();
        let oracle = quotient_oracle(&k, 4);
        for j in 0..c.len() {
            assert!(same_group(&he[j], &oracle[j]), "degree {j}: {} vs {}", he[j], oracle[j]);
            assert!(same_group(&c.cohomology_z().unwrap()[j], &known_group(&k, j)));
        }
    }
}

#[test]
fn eta_negative_start_degree() {
    let mut r = rng(4);
    for _ in 0..10 {
        let k = random_known_complex(&mut r, 4, 3, &[2, 3]);
        let c = zc(-2, &k);
        let e = eta(&Scalar::int(3), &c).unwrap();
        assert_eq!(e.scale_exp, -2);
        let oracle = quotient_oracle(&k, 3);
        for (a, b) in e.cohomology().unwrap().iter().zip(&oracle) {
            assert!(same_group(a, b));
        }
    }
}

fn koszul_b(base: &QBase, a: &nygaard_core::q_derham::QElem, b: &nygaard_core::q_derham::QElem) -> Complex {
    let d0 = vec![vec![a.clone()], vec![b.clone()]];
    let d1 = vec![vec![base.neg(b), a.clone()]];
    Complex::from_b_matrices(base, 0, vec![1, 2, 1], &[d0, d1]).unwrap()
}

#[test]
fn eta_over_q_base() {
    let base = QBase::new(3, 3);
    let xi = base.xi();
    let c = koszul_b(&base, &base.q_integer(2), &base.add(&base.mu(), &base.int(6)));
    let rep = eta_cohomology_law_check(&Scalar::Q(xi.clone()), &c).unwrap();
    assert!(rep.holds, "{:?}", rep.rows);
    assert!(matches!(eta(&Scalar::Q(base.mu()), &c), Err(Error::NotNonzerodivisor)));
    assert!(eta(&Scalar::Q(base.q_integer(3)), &c).is_ok());
    let e = eta(&Scalar::Q(xi), &c).unwrap();
    assert!(e.lattices.is_d_stable());
}

#[test]
fn eta_over_mod_pn() {
    let c = Complex::new(BaseTag::ModPrimePower { p: 3, n: 2 }, 0, vec![1, 1], vec![IntMatrix::from_i64(1, 1, &[3])])
        .unwrap();
    assert!(matches!(eta(&Scalar::int(3), &c), Err(Error::NotNonzerodivisor)));
    let rep = eta_cohomology_law_check(&Scalar::int(4), &c).unwrap();
    assert!(rep.holds);
    assert_eq!(c.cohomology_local(3).unwrap(), vec![PGroup::new(3, 0, vec![1]), PGroup::new(3, 0, vec![1])]);
}

#[test]
fn complex_rejects_bad_composite() {
    let d0 = IntMatrix::from_i64(1, 1, &[1]);
    let d1 = IntMatrix::from_i64(1, 1, &[2]);
    let r = Complex::integers(0, vec![1, 1, 1], vec![d0, d1]);
    assert!(matches!(r, Err(Error::CompositeNonzero { degree: 0 })));
}

/// Random decreasing d-stable filtration on window [0, len]: each step is p·Fil plus a random d-closed span.
fn random_filtered(r: &mut impl Rng, c: &Complex, p: i64, len: usize) -> FilteredComplex {
    let dims = c.z_ranks();
    let mut levels = vec![dims.iter().map(|&d| Lattice::full(d)).collect::<Vec<_>>()];
    for _ in 0..len {
        let prev = levels.last().unwrap().clone();
        let mut w: Vec<Lattice> = Vec::new();
        for k in 0..dims.len() {
            let mut gens = Vec::new();
            for _ in 0..r.gen_range(0..2) {
                if prev[k].rank() == 0 {
                    break;
                }
                let coeffs: Vec<BigInt> = (0..prev[k].rank()).map(|_| BigInt::from(r.gen_range(-2..=2))).collect();
                let mut v = vec![BigInt::from(0); dims[k]];
                for (cf, b) in coeffs.iter().zip(prev[k].basis()) {
                    for (x, y) in v.iter_mut().zip(b) {
                        *x += cf * y;
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
    let above = [Pattern::Zero, Pattern::Constant, Pattern::FAdic][r.gen_range(0..3)];
    let act = action_matrices(&Scalar::int(p), c).unwrap();
    FilteredComplex::new(c.clone(), Some(act), 0, levels, Pattern::Constant, above).unwrap()
}

#[test]
fn decalee_of_f_adic_is_eta() {
    let mut r = rng(5);
    for _ in 0..20 {
        let k = random_known_complex(&mut r, 4, 3, &[2, 3]);
        let start = r.gen_range(0..2);
        let c = zc(start, &k);
        let f = Scalar::int([2, 3, 4][r.gen_range(0..3)]);
        let fil = FilteredComplex::f_adic(&f, &c, 2).unwrap();
        let t = beilinson_truncate(&fil).unwrap();
        let e = eta(&f, &c).unwrap();
        assert_eq!(t.underlying().unwrap().lattices, e.lattices.lattices);
    }
}

#[test]
fn decalee_window_too_small_for_negative_degrees() {
    let c = Complex::integers(-1, vec![1, 1], vec![IntMatrix::from_i64(1, 1, &[2])]).unwrap();
    let fil = FilteredComplex::f_adic(&Scalar::int(2), &c, 2).unwrap();
    assert!(matches!(beilinson_truncate(&fil), Err(Error::WindowTooSmall(-1))));
}

#[test]
fn decalee_of_trivial_filtration_is_connective_cover() {
    // ℤ → ℤ² → ℤ with H^0 = 0, H^1 = ℤ ⊕ ℤ/2
    let d0 = IntMatrix::from_i64(2, 1, &[2, 0]);
    let d1 = IntMatrix::from_i64(1, 2, &[0, 1]);
    let c = Complex::integers(0, vec![1, 2, 1], vec![d0.clone(), d1]).unwrap();
    let t = beilinson_truncate(&FilteredComplex::trivial(&c).unwrap()).unwrap();
    let u = t.underlying().unwrap();
    assert_eq!(u.lattices[0], Lattice::full(1).kernel_of(&d0));
    assert_eq!(u.lattices[1].rank(), 0);
    assert_eq!(u.lattices[2].rank(), 0);
    assert!(u.cohomology().unwrap().iter().all(|g| g.is_zero()));
}

#[test]
fn graded_law_random() {
    let mut r = rng(6);
    for _ in 0..20 {
        let k = random_known_complex(&mut r, 3, 3, &[2, 3]);
        let c = zc(r.gen_range(0..2), &k);
        let p = [2, 3][r.gen_range(0..2)];
        let fil = random_filtered(&mut r, &c, p, 3);
        let rows = graded_law_check(&fil).unwrap();
        assert!(rows.iter().all(|row| row.holds), "{:?}", rows.iter().find(|r| !r.holds));
    }
}

#[test]
fn heart_of_p_adic_point() {
    let c = Complex::integers(0, vec![1], vec![]).unwrap();
    let fil = FilteredComplex::f_adic(&Scalar::int(5), &c, 3).unwrap();
    let h = beilinson_h0(&fil).unwrap();
    assert_eq!(h.terms.len(), 1);
    assert_eq!(h.terms[0].group, ab(0, &[5]));
    assert!(h.d_squared_zero());
    assert_eq!(h.nonzero_count(), 0);
    // every E1 slot is ℤ/5
    for (_, g) in &h.e1 {
        assert_eq!(g[0], ab(0, &[5]));
    }
}

#[test]
fn heart_of_zero_complex() {
    let c = Complex::integers(0, vec![0, 0], vec![IntMatrix::zeros(0, 0)]).unwrap();
    let h = beilinson_h0(&FilteredComplex::trivial(&c).unwrap()).unwrap();
    assert!(h.is_zero());
    assert!(h.d_squared_zero());
}

#[test]
fn heart_of_multiplication_by_p() {
    let c = Complex::integers(0, vec![1, 1], vec![IntMatrix::from_i64(1, 1, &[3])]).unwrap();
    let fil = FilteredComplex::f_adic(&Scalar::int(3), &c, 3).unwrap();
    let h = beilinson_h0(&fil).unwrap();
    assert_eq!(h.terms[0].group, ab(0, &[3]));
    assert_eq!(h.terms[1].group, ab(0, &[3]));
    assert_eq!(h.nonzero_count(), 1);
    assert!(h.d_squared_zero());
}

#[test]
fn heart_d_squared_random() {
    let mut r = rng(7);
    for _ in 0..15 {
        let k = random_known_complex(&mut r, 4, 3, &[2, 3]);
        let c = zc(0, &k);
        let fil = random_filtered(&mut r, &c, 2, 4);
        assert!(beilinson_h0(&fil).unwrap().d_squared_zero());
    }
}

#[test]
fn ext_in_chain_complexes() {
    let pos = ext_in_ch_check(3, 1, 10).unwrap();
    assert!(pos.holds && pos.ext.iter().all(|g| g.is_zero()));
    let zero = ext_in_ch_check(3, 0, 10).unwrap();
    assert!(zero.holds);
    assert_eq!(zero.ext[0], PGroup::new(3, 0, vec![1]));
    assert!(zero.ext[1..].iter().all(|g| g.is_zero()));
    let neg = ext_in_ch_check(2, -1, 10).unwrap();
    assert!(neg.holds && neg.resolution_exact);
    for (i, g) in neg.ext.iter().enumerate() {
        assert_eq!(!g.is_zero(), i == 1);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn prop_eta_is_subcomplex(seed in any::<u64>(), f in 2i64..7) {
        let mut r = rng(seed);
        let k = random_known_complex(&mut r, 4, 3, &[2, 3, 5]);
        let c = zc(0, &k);
        let e = eta(&Scalar::int(f), &c).unwrap();
        prop_assert!(e.lattices.is_d_stable());
        for (j, incl) in e.inclusion.iter().enumerate() {
            if j + 1 < c.len() {
                prop_assert_eq!(c.diffs[j].mul(incl), e.inclusion[j + 1].mul(&e.complex.diffs[j]));
            }
        }
    }

    #[test]
    fn prop_graded_vanishing_above_index(seed in any::<u64>()) {
        let mut r = rng(seed);
        let k = random_known_complex(&mut r, 3, 3, &[2, 3]);
        let c = zc(0, &k);
        let fil = random_filtered(&mut r, &c, 2, 3);
        let t = beilinson_truncate(&fil).unwrap();
        let (lo, hi) = t.interesting_range();
        for i in lo..=hi {
            let h = t.gr_cohomology(i).unwrap();
            for (j, g) in h.iter().enumerate() {
                if (c.start + j as i32) as i64 > i {
                    prop_assert!(g.is_zero());
                }
            }
        }
    }

    #[test]
    fn prop_eta_law(seed in any::<u64>(), f in prop::sample::select(vec![2i64, 3, 4, 8, 9])) {
        let mut r = rng(seed);
        let k = random_known_complex(&mut r, 4, 3, &[2, 3]);
        let c = zc(0, &k);
        prop_assert!(eta_cohomology_law_check(&Scalar::int(f), &c).unwrap().holds);
    }
}
