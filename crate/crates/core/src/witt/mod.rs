//! p-typical Witt vectors and the perfectoid square of graded rings.

pub mod perfectoid;
pub mod ring;
pub mod universal;
pub mod vector;

pub use perfectoid::{build_perfectoid_square, PerfectoidPresentation, SquareModel};
pub use ring::BaseRing;
pub use universal::universal_polynomials;
pub use vector::{Route, WittVector};
