pub mod bernstein;
pub mod error;
pub mod expr;
pub mod inversion;
pub mod jet;
pub mod precision;
pub mod quad;
pub mod spectral;
pub mod tails;
pub mod real;

pub use error::{Error, Result};
pub use expr::Expression;
pub use precision::PrecisionConfig;
pub use real::Real;
