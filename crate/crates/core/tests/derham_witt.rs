use nygaard_core::derham_witt::*;
use nygaard_core::error::Error;
use nygaard_core::filtered_homalg::{beilinson_truncate, FilteredComplex, Scalar};
use nygaard_core::linalg::*;
use num_bigint::BigInt;
use proptest::prelude::*;

fn b(v: i64) -> BigInt {
    BigInt::from(v)
}

fn binom(n: usize, k: usize) -> usize {
    if k > n {
        return 0;
    }
    (0..k).fold(1, |acc, t| acc * (n - t) / (t + 1))
}

#[test]
fn rank_one_blocks_match_hand_computation() {
    for p in [2u64, 3, 5] {
        let x = build_torus(p, 1, 1).unwrap();
        for k in -12i64..=12 {
            let h = x.block_cohomology(&[k]).unwrap();
            // [F_p --k--> F_p]
            let expect = if k % p as i64 == 0 { PGroup::cyclic_power(p, 1, 1) } else { PGroup::zero(p) };
            assert_eq!(h[0], expect, "p={p} k={k}");
            assert_eq!(h[1], expect, "p={p} k={k}");
        }
    }
}

#[test]
fn weight_zero_block_is_free_over_truncated_base() {
    let x = build_torus(3, 1, 4).unwrap();
    assert!(x.differential(&[0], 0).is_zero());
    let h = x.block_cohomology(&[0]).unwrap();
    assert_eq!(h, vec![PGroup::cyclic_power(3, 4, 1), PGroup::cyclic_power(3, 4, 1)]);
}

#[test]
fn top_degree_of_plane_in_weight_zero() {
    let x = build_torus(2, 2, 1).unwrap();
    let h = x.block_cohomology(&[0, 0]).unwrap();
    assert_eq!(h[2], PGroup::cyclic_power(2, 1, 1));
    // Koszul ranks for every weight of a small box
    for m in x.weights(3) {
        let h = x.block_cohomology(&m).unwrap();
        let divisible = m.iter().all(|v| v % 2 == 0);
        for (j, g) in h.iter().enumerate() {
            let expect = if divisible { binom(2, j) } else { 0 };
            assert_eq!(g.exponents.len(), expect, "m={m:?} j={j}");
        }
    }
}

#[test]
fn koszul_squares_to_zero_and_is_weight_homogeneous() {
    let x = build_torus(3, 3, 2).unwrap();
    for m in x.weights(2) {
        for j in 0..2 {
            assert!(x.differential(&m, j + 1).mul(&x.differential(&m, j)).is_zero());
        }
    }
}

#[test]
fn frobenius_on_units_and_forms() {
    let x = build_torus(5, 1, 2).unwrap();
    assert_eq!(x.frobenius(0), IntMatrix::identity(1));
    assert_eq!(x.frobenius(1), IntMatrix::scalar(1, &b(5)));
    let y = build_torus(2, 2, 3).unwrap();
    assert!(y.frobenius_is_chain_map(3));
    assert_eq!(y.frobenius(2), IntMatrix::scalar(1, &b(4)));
}

#[test]
fn nygaard_lattices_shape_and_nesting() {
    let x = build_torus(3, 1, 2).unwrap();
    let n0 = x.nygaard_lattice(0).unwrap();
    assert!(n0.lattices.iter().all(|l| *l == Lattice::full(1)));
    let n1 = x.nygaard_lattice(1).unwrap();
    assert_eq!(n1.lattices[0], Lattice::scaled_full(1, &b(3)));
    assert_eq!(n1.lattices[1], Lattice::full(1));

    let y = build_torus(2, 3, 2).unwrap();
    for i in 0..=4 {
        let a = y.nygaard_lattice(i).unwrap();
        let next = y.nygaard_lattice(i + 1).unwrap();
        assert!(a.contains(&next));
        assert!(next.contains(&a.scale(&b(2))));
        assert!(y.nygaard_is_d_stable(&a, 2));
    }
}

#[test]
fn precision_bound_is_enforced() {
    let x = build_torus(2, 1, 3).unwrap().with_precision_bound(5);
    assert!(x.nygaard_lattice(2).is_ok());
    assert_eq!(x.nygaard_lattice(3).unwrap_err(), Error::PrecisionExhausted { needed: 6, bound: 5 });
    assert!(matches!(x.divided_frobenius(4, 0), Err(Error::PrecisionExhausted { .. })));
}

#[test]
fn divided_frobenius_unit_cases() {
    let x = build_torus(3, 1, 2).unwrap();
    // Nygaard basis in degree 0 at i=1 is p·1
    assert_eq!(x.divided_frobenius(1, 0).unwrap(), IntMatrix::identity(1));
    assert_eq!(x.divided_frobenius(1, 1).unwrap(), IntMatrix::identity(1));
}

#[test]
fn divided_frobenius_recovers_frobenius_and_composes() {
    let p = 2u64;
    let x = build_torus(p, 3, 3).unwrap();
    for i in 0..=3i64 {
        for j in 0..=3usize {
            let phi_i = x.divided_frobenius(i, j).unwrap();
            let e_i = (i - j as i64).max(0) as u32;
            let incl = IntMatrix::scalar(x.rank(j), &pow_big(p, e_i));
            assert_eq!(phi_i.scale(&pow_big(p, i as u32)), x.frobenius(j).mul(&incl));
            // restriction to 𝒩^{≥i+1} equals p·φ_{i+1}
            let e_next = (i + 1 - j as i64).max(0) as u32;
            let sub = IntMatrix::scalar(x.rank(j), &pow_big(p, e_next - e_i));
            let next = x.divided_frobenius(i + 1, j).unwrap();
            assert_eq!(phi_i.mul(&sub), next.scale(&b(p as i64)));
            // the mod pⁿ route through precision n+i agrees
            assert_eq!(x.divided_frobenius_mod(i, j).unwrap(), phi_i.reduce_mod(&pow_big(p, 3)));
        }
    }
}

#[test]
fn conjugate_in_degree_zero() {
    for p in [2u64, 3] {
        let x = build_torus(p, 1, 1).unwrap();
        let r = x.conjugate_check(0, default_box(p)).unwrap();
        assert!(r.holds, "{:?}", r.failures().collect::<Vec<_>>());
        assert_eq!(r.rows.len(), 2 * default_box(p) as usize + 1);
    }
}

#[test]
fn conjugate_above_dimension_is_whole_complex() {
    let x = build_torus(3, 1, 1).unwrap();
    for i in 2..=3 {
        assert!(x.conjugate_check(i, 9).unwrap().holds);
    }
}

#[test]
fn conjugate_plane_degree_one_box_six() {
    let x = build_torus(2, 2, 1).unwrap();
    let r = x.conjugate_check(1, 6).unwrap();
    assert_eq!(r.rows.len(), 13 * 13);
    assert!(r.holds);
}

/// Cartier oracle: on weights pm both sides have `H^j = F_p^{C(d,j)}` for `j ≤ i`.
#[test]
fn conjugate_graded_cohomology_matches_binomial_oracle() {
    let p = 3u64;
    let x = build_torus(p, 2, 1).unwrap();
    for i in 0..=2i64 {
        let r = x.conjugate_check(i, 6).unwrap();
        assert!(r.holds);
        for row in &r.rows {
            let divisible = row.weight.iter().all(|v| v % 3 == 0);
            assert_eq!(row.kind, if divisible { "cone acyclic" } else { "target acyclic" });
        }
        let w = [3i64, -6];
        let h = x.block_cohomology(&w).unwrap();
        for j in 0..=2 {
            assert_eq!(h[j].exponents.len(), binom(2, j));
        }
    }
}

#[test]
fn frobenius_eta_degree_zero_line() {
    for p in [2u64, 3, 5] {
        let x = build_torus(p, 1, 1).unwrap();
        let r = x.frobenius_eta_check(0, 2 * p as i64).unwrap();
        assert!(r.holds);
    }
}

#[test]
fn frobenius_eta_high_degrees_are_pure_powers() {
    let p = 3u64;
    let x = build_torus(p, 2, 2).unwrap();
    for i in 0..=3i64 {
        for j in (i.max(0) as usize)..=2 {
            let expect = Lattice::scaled_full(x.rank(j), &pow_big(p, j as u32));
            assert_eq!(x.frobenius_image(i, j), expect);
        }
    }
}

#[test]
fn frobenius_eta_plane_box_four() {
    let x = build_torus(2, 2, 3).unwrap();
    let r = x.frobenius_eta_check(2, 4).unwrap();
    assert_eq!(r.rows.len(), 81);
    assert!(r.holds);
}

/// `Fil^i η_p` through the décalée of the p-adic filtration agrees with `pⁱX ∩ η_pX`.
#[test]
fn fil_eta_agrees_with_decalee() {
    let p = 2u64;
    let x = build_torus(p, 2, 2).unwrap();
    for w in [[0i64, 0], [2, 4], [4, -2], [1, 2]] {
        let c = x.block(&w);
        let f = FilteredComplex::f_adic(&Scalar::Int(b(p as i64)), &c, 6).unwrap();
        let t = beilinson_truncate(&f).unwrap();
        for i in 0..=3 {
            let direct = x.fil_eta(&w, i).unwrap();
            let via = t.level(i).unwrap();
            assert_eq!(direct, via, "w={w:?} i={i}");
        }
    }
}

#[test]
fn hodge_quotient_cases() {
    let x = build_torus(3, 1, 1).unwrap();
    assert!(x.hodge_quotient_check(0, 4).unwrap().holds);
    let x = build_torus(2, 1, 2).unwrap();
    assert!(x.hodge_quotient_check(1, 8).unwrap().holds);
    let x = build_torus(2, 2, 2).unwrap();
    assert!(x.hodge_quotient_check(2, 4).unwrap().holds);
}

#[test]
fn short_exact_checker_rejects_bad_sequences() {
    let full = Lattice::full(1);
    let p2 = Lattice::scaled_full(1, &b(2));
    let p4 = Lattice::scaled_full(1, &b(4));
    let a = Subquotient::new(full.clone(), p2.clone());
    let bq = Subquotient::new(full.clone(), p4.clone());
    let c = Subquotient::new(full.clone(), p2.clone());
    let two = IntMatrix::scalar(1, &b(2));
    let one = IntMatrix::identity(1);
    // 0 → ℤ/2 →2 ℤ/4 → ℤ/2 → 0
    assert_eq!(short_exact_failure(&a, &bq, &c, &two, &one), None);
    let c4 = Subquotient::new(full.clone(), p4.clone());
    assert_eq!(short_exact_failure(&a, &bq, &c4, &two, &one), Some(ExactnessFailure::NotComplex));
    assert_eq!(short_exact_failure(&a, &bq, &c, &one, &one), Some(ExactnessFailure::NotWellDefined));
    let zero = IntMatrix::zeros(1, 1);
    assert_eq!(short_exact_failure(&a, &bq, &c, &two, &zero), Some(ExactnessFailure::NotExactInMiddle));
    let big = Subquotient::new(full.clone(), Lattice::scaled_full(1, &b(8)));
    assert_eq!(short_exact_failure(&a, &big, &c, &two, &one), Some(ExactnessFailure::NotWellDefined));
}

#[test]
fn dlog_classes() {
    let x = build_torus(3, 3, 2).unwrap();
    let t1 = x.dlog_class(&[vec![1, 0, 0]]).unwrap();
    assert!(t1.closed && t1.phi_fixed);
    assert_eq!(t1.vector, vec![b(1), b(0), b(0)]);
    let sq = x.dlog_class(&[vec![1, 0, 0], vec![1, 0, 0]]).unwrap();
    assert!(sq.vector.iter().all(|v| *v == b(0)));
    let top = x.dlog_class(&[vec![1, 0, 0], vec![0, 1, 0], vec![0, 0, 1]]).unwrap();
    assert_eq!(top.vector, vec![b(1)]);
    assert!(top.closed && top.phi_fixed);
    // dlog T^{(1,2)} ∧ dlog T^{(3,4)} = (1·4 − 2·3) dlog T₁∧dlog T₂
    let y = build_torus(2, 2, 1).unwrap();
    let c = y.dlog_class(&[vec![1, 2], vec![3, 4]]).unwrap();
    assert_eq!(c.vector, vec![b(-2)]);
    assert!(x.dlog_class(&[vec![1, 0]]).is_err());
}

#[test]
fn rejects_degenerate_tori() {
    assert!(build_torus(2, 0, 1).is_err());
    assert!(build_torus(2, 1, 0).is_err());
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn frobenius_chain_map_on_random_weights(p in prop::sample::select(vec![2u64, 3, 5]),
                                            m in prop::collection::vec(-20i64..=20, 2)) {
        let x = build_torus(p, 2, 2).unwrap();
        let pm: Vec<i64> = m.iter().map(|v| v * p as i64).collect();
        for j in 0..2 {
            prop_assert_eq!(x.differential(&pm, j).mul(&x.frobenius(j)),
                            x.frobenius(j + 1).mul(&x.differential(&m, j)));
        }
    }

    #[test]
    fn divided_frobenius_is_chain_map_on_nygaard(m in prop::collection::vec(-6i64..=6, 2), i in 0i64..=4) {
        let p = 3u64;
        let x = build_torus(p, 2, 1).unwrap();
        let pm: Vec<i64> = m.iter().map(|v| v * p as i64).collect();
        for j in 0..2usize {
            let drop = (i - j as i64).max(0) - (i - j as i64 - 1).max(0);
            let dn = IntMatrix::scalar(x.rank(j + 1), &pow_big(p, drop as u32)).mul(&x.differential(&m, j));
            prop_assert_eq!(x.differential(&pm, j).mul(&x.divided_frobenius(i, j).unwrap()),
                            x.divided_frobenius(i, j + 1).unwrap().mul(&dn));
        }
    }

    #[test]
    fn single_weight_eta_identity(m in prop::collection::vec(-5i64..=5, 3), i in 0i64..=4) {
        let p = 2u64;
        let x = build_torus(p, 3, 2).unwrap();
        let w: Vec<i64> = m.iter().map(|v| v * p as i64).collect();
        let fil = x.fil_eta(&w, i).unwrap();
        for j in 0..=3 {
            prop_assert!(x.frobenius_image(i, j).p_local_eq(&fil[j], p));
        }
    }
}
