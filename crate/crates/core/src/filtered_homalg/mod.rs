//! Filtered complexes, the Beilinson t-structure and décalage.

pub mod complex;
pub mod eta;
pub mod ext;
pub mod filtered;
pub mod heart;

pub use complex::{b_matrix_to_z, BaseTag, Complex, LatticeComplex, Scalar};
pub use eta::{action_matrices, eta, eta_by_action, eta_cohomology_law_check, EtaComplex, EtaLawReport, EtaLawRow};
pub use ext::{ext_in_ch_check, ExtReport};
pub use filtered::{beilinson_truncate, graded_law_check, FilteredComplex, GradedLawRow, Pattern};
pub use heart::{beilinson_h0, ChainComplexObject, HeartTerm};
