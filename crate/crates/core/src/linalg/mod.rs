//! Exact linear algebra over ℤ and ℤ/pⁿ.

pub mod cohomology;
pub mod group;
pub mod hermite;
pub mod lattice;
pub mod local;
pub mod matrix;
pub mod smith;

pub use cohomology::{cohomology_mod, cohomology_z, short_exact_failure, ExactnessFailure, Subquotient, SubquotientComplex};
pub use group::{AbelianGroup, PGroup};
pub use hermite::{kernel_basis, row_hnf};
pub use lattice::Lattice;
pub use local::{cokernel_mod, howell_contains, howell_form, kernel_mod, local_smith, ModPn};
pub use matrix::{big, pow_big, valuation, IntMatrix};
pub use smith::{smith_form, smith_invariants, Smith};

/// Coefficient ring of a cohomology computation.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Coefficients {
    Integers,
    ModPrimePower { p: u64, n: u32 },
}

/// `H^i` degree by degree, reported as p-groups; over ℤ the result is localized at `p`.
pub fn complex_cohomology(
    ranks: &[usize],
    diffs: &[IntMatrix],
    coeffs: &Coefficients,
    p: u64,
) -> crate::error::Result<Vec<PGroup>> {
    match coeffs {
        Coefficients::Integers => Ok(cohomology_z(ranks, diffs)?.iter().map(|g| g.localize(p)).collect()),
        Coefficients::ModPrimePower { p, n } => cohomology_mod(ranks, diffs, &ModPn::new(*p, *n)),
    }
}
