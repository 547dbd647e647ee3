pub mod error;
pub mod filtered_homalg;
pub mod linalg;
pub mod pd_crystalline;
pub mod derham_witt;
pub mod q_derham;
pub mod report;
pub mod syntomic;
pub mod torus;
pub mod witt;
