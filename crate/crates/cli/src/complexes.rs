//! Named integral complexes for the `eta` command.

use crate::{CliError, Result};
use nygaard_core::filtered_homalg::Complex;
use nygaard_core::linalg::IntMatrix;

pub const NAMES: &[&str] = &["koszul_p", "koszul_p2", "two_step", "smith3", "torus_block"];

/// `koszul_p`: `ℤ →p ℤ`. `koszul_p2`: `ℤ →p² ℤ`. `two_step`: `ℤ → ℤ² → ℤ` with entries `p`, `p²`.
/// `smith3`: a triangular 3×3 map with diagonal `p, p², p³`. `torus_block`: weight `(p, 1)` of the
/// 2-dimensional de Rham torus.
pub fn named(name: &str, p: u64) -> Result<Complex> {
    let p = p as i64;
    let m = IntMatrix::from_i64_rows;
    let c = match name {
        "koszul_p" => Complex::integers(0, vec![1, 1], vec![m(&[vec![p]])]),
        "koszul_p2" => Complex::integers(0, vec![1, 1], vec![m(&[vec![p * p]])]),
        "two_step" => Complex::integers(0, vec![1, 2, 1], vec![m(&[vec![p], vec![0]]), m(&[vec![0, p * p]])]),
        "smith3" => Complex::integers(
            0,
            vec![3, 3],
            vec![m(&[vec![p, 0, 0], vec![p, p * p, 0], vec![0, 1, p * p * p]])],
        ),
        "torus_block" => Complex::integers(
            0,
            vec![1, 2, 1],
            vec![m(&[vec![p], vec![1]]), m(&[vec![-1, p]])],
        ),
        other => {
            return Err(CliError::Usage(format!("unknown fixture complex `{other}` (one of {})", NAMES.join(", "))))
        }
    };
    Ok(c?)
}
