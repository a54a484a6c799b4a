//! Frobenius fundamental systems, Euler equations, formal solutions at
//! irregular points, wronskians and residual checks.

mod probe;
mod recurrence;
mod residual;
mod solve;
mod wronskian;

pub(crate) use wronskian::determinant;

pub use probe::{formal_probe, radius_estimate, FormalProbe, ProbeStatus};
pub use recurrence::{coefficient_jets, coefficients_at};
pub use residual::{residual, residual_from, Residual, RESIDUAL_TOL};
pub use solve::{frobenius_solve, solve_euler, solve_ode, FundamentalSystem, LogConstant};
pub use wronskian::{abel, wronskian_of, wronskian_of_system, wronskian_ode_solution, OdeWronskian};
