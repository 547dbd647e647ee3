//! q-de Rham complexes of tori over ℤ[q]/((q−1)^N).

pub mod base;
pub mod complex;

pub use base::{QBase, QElem};
pub use complex::{build_qtorus, truncate_matrix, LnuReport, QNygaard, QTorus};
