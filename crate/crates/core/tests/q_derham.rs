use nygaard_core::derham_witt::build_torus;
use nygaard_core::error::Error;
use nygaard_core::linalg::*;
use nygaard_core::q_derham::*;
use num_bigint::BigInt;
use num_integer::binomial;
use proptest::prelude::*;

fn b(v: i64) -> BigInt {
    BigInt::from(v)
}

/// Expand a polynomial in q (ascending coefficients) into the μ = q − 1 basis, truncated.
fn q_poly_to_mu(coeffs: &[i64], n: usize) -> Vec<BigInt> {
    let mut out = vec![b(0); n];
    for (e, &c) in coeffs.iter().enumerate() {
        // q^e = Σ C(e,k) μ^k
        for (k, o) in out.iter_mut().enumerate().take(e + 1) {
            *o += b(c) * binomial(b(e as i64), b(k as i64));
        }
    }
    out
}

#[test]
fn q_integers_against_polynomial_oracle() {
    for p in [2u64, 3, 5] {
        let base = QBase::new(p, 6);
        for k in 0..12i64 {
            let expect = q_poly_to_mu(&vec![1; k as usize], 6);
            assert_eq!(base.q_integer(k).0, expect, "k={k}");
        }
        assert_eq!(base.q_integer(1), base.one());
        assert_eq!(base.xi().augmentation(), b(p as i64));
        // [−k]_q · q^k = −[k]_q
        for k in 1..6i64 {
            let lhs = base.mul(&base.q_integer(-k), &base.q_pow(k));
            assert_eq!(lhs, base.neg(&base.q_integer(k)));
        }
    }
}

#[test]
fn xi_is_a_power_of_mu_mod_p() {
    for p in [2u64, 3, 5, 7] {
        let n = p as usize + 2;
        let base = QBase::new(p, n);
        let xi = base.reduce_mod(&base.xi(), &b(p as i64));
        let mut expect = vec![b(0); n];
        expect[p as usize - 1] = b(1);
        assert_eq!(xi.0, expect, "p={p}");
    }
}

#[test]
fn frobenius_of_mu_and_xi() {
    for p in [2u64, 3] {
        let base = QBase::new(p, 5);
        // φ(q−1) = q^p − 1 = (q−1)[p]_q
        let mut qp = vec![0i64; p as usize + 1];
        qp[p as usize] = 1;
        qp[0] = -1;
        assert_eq!(base.phi(&base.mu()).0, q_poly_to_mu(&qp, 5));
        assert_eq!(base.phi(&base.mu()), base.mul(&base.mu(), &base.xi()));
        assert_eq!(base.phi(&base.xi()), base.xi_tilde());
        for x in [base.mu(), base.xi(), base.xi_tilde()] {
            assert!(base.mult_matrix(&x).rank() <= 5);
        }
        assert!(base.is_nonzerodivisor(&base.xi()));
        assert!(base.is_nonzerodivisor(&base.xi_tilde()));
        assert!(!base.is_nonzerodivisor(&base.mu()));
    }
}

#[test]
fn specialization_recovers_integral_torus() {
    for d in 1..=2 {
        for n_trunc in 2..=4 {
            let q = build_qtorus(d, 3, n_trunc).unwrap();
            let x = build_torus(3, d, 2).unwrap();
            for m in x.weights(4) {
                for j in 0..d {
                    assert_eq!(q.specialize(&q.differential(&m, j)), x.differential(&m, j));
                }
            }
            for j in 0..=d {
                assert_eq!(q.specialize(&q.frobenius(j)), x.frobenius(j));
                for i in 0..=3 {
                    assert_eq!(q.specialize(&q.q_divided_frobenius(i, j).unwrap()), x.divided_frobenius(i, j).unwrap());
                    assert_eq!(
                        Lattice::column_span(&q.specialize(&q.nygaard_inclusion(i, j))),
                        x.nygaard_lattice(i).unwrap().lattices[j]
                    );
                }
            }
        }
    }
}

#[test]
fn rank_one_block_is_q_integer_multiplication() {
    let q = build_qtorus(1, 2, 4).unwrap();
    let base = q.base().clone();
    for m in -5..=5i64 {
        assert_eq!(q.differential(&[m], 0), base.mult_matrix(&base.q_integer_base(m, 2)));
    }
}

#[test]
fn koszul_squares_to_zero_on_mixed_weights() {
    let q = build_qtorus(2, 3, 4).unwrap();
    for m in q.torus.weight_box(4) {
        assert!(q.differential(&m, 1).mul(&q.differential(&m, 0)).is_zero());
    }
    assert!(build_qtorus(1, 2, 1).is_err());
}

#[test]
fn frobenius_scales_dlog_by_xi_tilde() {
    let q = build_qtorus(1, 3, 4).unwrap();
    let base = q.base().clone();
    // φ(1·dlog T) = ξ̃·dlog T, read off the first column
    let col = q.frobenius(1).column(0);
    assert_eq!(col, base.xi_tilde().0);
    assert!(q.frobenius_is_chain_map(4));
    let q2 = build_qtorus(2, 2, 3).unwrap();
    assert!(q2.frobenius_is_chain_map(3));
}

#[test]
fn nygaard_is_nested_and_xi_stable() {
    let q = build_qtorus(2, 2, 3).unwrap();
    let base = q.base().clone();
    let full = q.q_nygaard(0).unwrap();
    assert!((0..=2).all(|j| full.lattices[j] == Lattice::full(q.z_rank(j))));
    for i in 0..=3 {
        let a = q.q_nygaard(i).unwrap();
        let next = q.q_nygaard(i + 1).unwrap();
        assert!(a.contains(&next));
        for j in 0..=2 {
            let xi = Lattice::column_span(&q.torus.scalar(j, &base.xi()));
            let xi_a = a.lattices[j].image(&q.torus.scalar(j, &base.xi()));
            assert!(next.lattices[j].contains_lattice(&xi_a));
            assert!(xi.dim() == q.z_rank(j));
        }
        for m in q.torus.weight_box(2) {
            assert!(q.nygaard_block(i, &m).diffs.len() == 2);
        }
    }
}

#[test]
fn divided_frobenius_identities() {
    let q = build_qtorus(2, 3, 4).unwrap();
    let base = q.base().clone();
    // φ₁(ξ·1) = 1
    let phi1 = q.q_divided_frobenius(1, 0).unwrap();
    assert_eq!(phi1.column(0), base.one().0);
    for i in 0..=3i64 {
        for j in 0..=2usize {
            let phi_i = q.q_divided_frobenius(i, j).unwrap();
            let xt = q.torus.scalar(j, &base.pow(&base.xi_tilde(), i as u64));
            assert_eq!(xt.mul(&phi_i), q.frobenius(j).mul(&q.nygaard_inclusion(i, j)));
            let e_i = (i - j as i64).max(0) as u64;
            let e_next = (i + 1 - j as i64).max(0) as u64;
            let sub = q.torus.scalar(j, &base.pow(&base.xi(), e_next - e_i));
            let next = q.q_divided_frobenius(i + 1, j).unwrap();
            assert_eq!(phi_i.mul(&sub), q.torus.scalar(j, &base.xi_tilde()).mul(&next));
        }
    }
    // dlog T₁∧dlog T₂ is fixed by φ₂
    let phi2 = q.q_divided_frobenius(2, 2).unwrap();
    assert_eq!(phi2.column(0), base.one().0);
}

#[test]
fn division_failure_is_reported() {
    let base = QBase::new(2, 3);
    assert!(matches!(base.div_exact(&base.one(), &base.xi()), Err(Error::DivisionFailure(_))));
}

#[test]
fn stable_under_increasing_truncation() {
    let top = build_qtorus(2, 2, 6).unwrap();
    for n_trunc in 2..=6usize {
        let q = build_qtorus(2, 2, n_trunc).unwrap();
        for m in [[1i64, -2], [3, 0], [-4, 5]] {
            for j in 0..2 {
                assert_eq!(truncate_matrix(&top.differential(&m, j), 6, n_trunc), q.differential(&m, j));
            }
        }
        for j in 0..=2 {
            assert_eq!(truncate_matrix(&top.frobenius(j), 6, n_trunc), q.frobenius(j));
            for i in 0..=3 {
                assert_eq!(
                    truncate_matrix(&top.q_divided_frobenius(i, j).unwrap(), 6, n_trunc),
                    q.q_divided_frobenius(i, j).unwrap()
                );
            }
        }
    }
}

#[test]
fn lnu_identification_on_the_line() {
    for p in [2u64, 3] {
        let q = build_qtorus(1, p, 4).unwrap();
        let r = q.lnu_identification_check(2, 3, 2 * p as i64).unwrap();
        assert!(r.frobenius_in_eta.holds);
        assert!(r.holds, "{:?}", r.graded.iter().flat_map(|g| g.failures()).collect::<Vec<_>>());
        assert_eq!(r.graded.len(), 3);
        assert_eq!(r.graded[1].rows.len(), 4 * p as usize + 1);
    }
}

#[test]
fn weight_zero_graded_piece_is_dlog_monomials() {
    let q = build_qtorus(1, 2, 3).unwrap();
    // gr^1 of η_ξ̃ on weight 0: ξ̃ in degree 0 and 1 modulo ξ̃²
    let t = q.graded_target(&[0], 1).unwrap();
    let h = t.cohomology_local(2);
    assert_eq!(h.len(), 2);
    assert!(!h[1].is_zero());
}

#[test]
fn plane_lnu_small_box() {
    let q = build_qtorus(2, 2, 3).unwrap();
    assert!(q.lnu_identification_check(1, 2, 2).unwrap().holds);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(20))]

    #[test]
    fn q_frobenius_chain_map_random(m in prop::collection::vec(-9i64..=9, 2), n_trunc in 2usize..=5) {
        let q = build_qtorus(2, 3, n_trunc).unwrap();
        let pm: Vec<i64> = m.iter().map(|v| v * 3).collect();
        for j in 0..2 {
            prop_assert_eq!(q.differential(&pm, j).mul(&q.frobenius(j)), q.frobenius(j + 1).mul(&q.differential(&m, j)));
        }
    }

    #[test]
    fn phi_is_a_ring_map(a in prop::collection::vec(-20i64..=20, 4), c in prop::collection::vec(-20i64..=20, 4)) {
        let base = QBase::new(3, 4);
        let x = base.from_coeffs(a.iter().map(|&v| b(v)).collect());
        let y = base.from_coeffs(c.iter().map(|&v| b(v)).collect());
        prop_assert_eq!(base.phi(&base.mul(&x, &y)), base.mul(&base.phi(&x), &base.phi(&y)));
        prop_assert_eq!(base.phi(&base.add(&x, &y)), base.add(&base.phi(&x), &base.phi(&y)));
    }
}
