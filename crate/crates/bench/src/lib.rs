//! Inputs shared by the criterion benches.

use nygaard_core::linalg::IntMatrix;
use num_bigint::BigInt;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Seeded dense matrix whose entries are products of up to two factors of `p` times a unit-ish small integer.
pub fn p_heavy_matrix(p: u64, rows: usize, cols: usize, seed: u64) -> IntMatrix {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut m = IntMatrix::zeros(rows, cols);
    for i in 0..rows {
        for j in 0..cols {
            let unit: i64 = rng.gen_range(-4..=4);
            let pk = (p as i64).pow(rng.gen_range(0..3));
            m[(i, j)] = BigInt::from(unit * pk);
        }
    }
    m
}
