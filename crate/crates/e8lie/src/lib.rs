//! Exact-arithmetic E8 toolkit: Chevalley basis, graded centralizers of the
//! rigid orbits A5+A1 and D5(a1)+A2, degree-8 slice sums and weight arithmetic.

pub mod algebra;
pub mod cli;
pub mod error;
pub mod linear;
pub mod orbits;
pub mod report;
pub mod roots;
pub mod slice;
pub mod sweep;
pub mod weights;

pub use algebra::{bracket, build_chevalley_table, invariant_form, ChevalleyTable, LieElement, Q};
pub use error::{Error, Result};
pub use orbits::{orbit_data, OrbitData, OrbitLabel};
pub use roots::{build_root_system, Root, RootSystem};
