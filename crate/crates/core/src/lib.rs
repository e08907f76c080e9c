//! Exact enumeration of direct-sum decomposition structures over finite
//! fields, with a brute-force oracle over small prime fields.
//!
//! * [`arith`]: big integers, rationals, `|GL_n(F_q)|` and Gaussian multinomials.
//! * [`series`]: truncated bivariate series and hand tables.
//! * [`families`]: deck specifications and the exponential formula.
//! * [`qcombinatorics`]: q-Stirling, q-Bell, diagonalization and projection counts.
//! * [`oracle`]: exhaustive enumeration of matrices and subspaces over `F_p`.

pub mod arith;
pub mod error;
pub mod families;
pub mod oracle;
pub mod qcombinatorics;
pub mod series;

pub use arith::{FieldOrder, Natural, Rational};
pub use error::{Error, Result};
