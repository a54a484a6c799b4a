//! Frobenius series solutions for linear ODEs of order two and three.

pub mod error;
pub mod classify;
pub mod cli;
pub mod frobenius;
pub mod indicial;
pub mod nonhom;
pub mod ode;
pub mod riccati;
pub mod series;

pub use error::{Error, Result};
