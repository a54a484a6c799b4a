//! Riccati models of second-order equations, their numerical continuation,
//! global holonomy as Moebius maps and Liouvillian solution formulas.

mod continuation;
mod holonomy;
mod liouvillian;
mod model;

pub use continuation::{continue_along_path, ContinuationOptions, Path, Projective};
pub use holonomy::{cross_ratio, global_holonomy, standard_loops, HolonomyGenerator, MoebiusMap, CHECK_POINT, MOEBIUS_TOL};
pub use liouvillian::{liouvillian_solution, LiouvillianSolution, QuadratureSpec, RationalFunction};
pub use model::{inverse_riccati_model, riccati_model, RiccatiModel};
