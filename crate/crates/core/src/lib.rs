pub mod bitset;
pub mod cli;
pub mod complex;
pub mod corner;
pub mod currents;
pub mod cycles;
pub mod error;
pub mod exterior;
pub mod gen;
pub mod io;
pub mod linalg;
pub mod oracle;
pub mod poly;
pub mod ring;
pub mod polyhedron;
pub mod pph;
pub mod scalar;

pub use error::{Error, Result};

/// The exact scalar used throughout: arbitrary-precision rationals.
pub type Q = num_rational::BigRational;
