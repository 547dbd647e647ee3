#![allow(dead_code)]

use nygaard_core::linalg::IntMatrix;
use num_bigint::BigInt;
use rand::Rng;
use rand_chacha::ChaCha8Rng;
use rand::SeedableRng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn random_matrix(rng: &mut impl Rng, rows: usize, cols: usize, bound: i64) -> IntMatrix {
    let v: Vec<i64> = (0..rows * cols).map(|_| rng.gen_range(-bound..=bound)).collect();
    IntMatrix::from_i64(rows, cols, &v)
}

/// Random unimodular matrix and its inverse, as a product of elementary operations.
pub fn random_unimodular(rng: &mut impl Rng, n: usize, steps: usize) -> (IntMatrix, IntMatrix) {
    let mut u = IntMatrix::identity(n);
    let mut inv = IntMatrix::identity(n);
    if n < 2 {
        return (u, inv);
    }
    for _ in 0..steps {
        let i = rng.gen_range(0..n);
        let mut j = rng.gen_range(0..n);
        while j == i {
            j = rng.gen_range(0..n);
        }
        let c = BigInt::from(rng.gen_range(-2i64..=2));
        // u <- E u with E = I + c e_ij ; inv <- inv E^{-1}
        u.add_row_multiple(i, j, &c);
        inv.add_col_multiple(j, i, &(-&c));
    }
    (u, inv)
}

/// A random complex over ℤ with known cohomology.
/// Returns ranks, differentials, and per degree (free rank, torsion invariants).
pub struct KnownComplex {
    pub ranks: Vec<usize>,
    pub diffs: Vec<IntMatrix>,
    pub free: Vec<usize>,
    pub torsion: Vec<Vec<i64>>,
}

pub fn random_known_complex(rng: &mut impl Rng, len: usize, max_rank: usize, primes: &[i64]) -> KnownComplex {
    let ranks: Vec<usize> = (0..len).map(|_| rng.gen_range(1..=max_rank)).collect();
    // how many basis vectors of degree k are hit from degree k-1 (`hit`), and how many map out (`out`)
    let mut hit = vec![0usize; len];
    let mut out = vec![0usize; len];
    let mut entries: Vec<Vec<i64>> = vec![Vec::new(); len];
    for k in 0..len.saturating_sub(1) {
        let avail_src = ranks[k] - hit[k];
        let avail_dst = ranks[k + 1];
        let s = rng.gen_range(0..=avail_src.min(avail_dst));
        out[k] = s;
        hit[k + 1] = s;
        for _ in 0..s {
            let mut a: i64 = 1;
            for _ in 0..rng.gen_range(0..3) {
                a *= primes[rng.gen_range(0..primes.len())];
            }
            if rng.gen_bool(0.5) {
                a = -a;
            }
            entries[k].push(a);
        }
    }
    // block layout in degree k: [hit from k-1 | mapping out | free rest]
    let mut d_std = Vec::new();
    for k in 0..len.saturating_sub(1) {
        let mut d = IntMatrix::zeros(ranks[k + 1], ranks[k]);
        for (t, a) in entries[k].iter().enumerate() {
            d[(t, hit[k] + t)] = BigInt::from(*a);
        }
        d_std.push(d);
    }
    let bases: Vec<(IntMatrix, IntMatrix)> = ranks.iter().map(|&r| random_unimodular(rng, r, 3 * r)).collect();
    let diffs: Vec<IntMatrix> =
        (0..d_std.len()).map(|k| bases[k + 1].0.mul(&d_std[k]).mul(&bases[k].1)).collect();
    let free = (0..len).map(|k| ranks[k] - hit[k] - out[k]).collect();
    let torsion = (0..len)
        .map(|k| {
            if k == 0 {
                Vec::new()
            } else {
                entries[k - 1].iter().map(|a| a.abs()).filter(|&a| a != 1).collect()
            }
        })
        .collect();
    KnownComplex { ranks, diffs, free, torsion }
}
