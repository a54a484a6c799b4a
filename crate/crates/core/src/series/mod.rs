//! Power series, jets and generalized log-power series: the arithmetic that
//! every other module computes in.

pub mod generalized;
pub mod jet;
pub mod poly;
pub mod power;
pub mod scalar;

pub use generalized::{class_offset, GeneralizedSeries, GsTerm};
pub use jet::Jet;
pub use power::{series_arith, Series, SeriesOp};
pub use scalar::Scalar;

/// Default truncation order.
pub const DEFAULT_TRUNC: usize = 32;
