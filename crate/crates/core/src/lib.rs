//! Numerical dynamics engine for a periodic predator-prey system with
//! disease in the prey:
//!
//! ```text
//! S' = Λ(t) - β(t) S I - μ(t) S
//! I' = β(t) S I - c(t) I - η(t) Y I
//! Y' = Y (r(t) - b(t) Y + k(t) η(t) I)
//! ```
//!
//! All coefficients are ω-periodic. The crate builds the two disease-free
//! periodic orbits, computes the sharp permanence/extinction threshold 𝓡
//! by two independent routes, locates the endemic periodic orbit by Newton
//! shooting on the period map, computes Floquet multipliers along orbits,
//! and evaluates the a priori bounds / averaged-system root / degree
//! determinant used by the continuation-degree existence argument.

pub mod aux_orbits;
pub mod endemic;
pub mod integrate;
pub mod linalg;
pub mod mawhin;
pub mod model;
pub mod periodic;
pub mod presets;
pub mod quad;
pub mod scenario;
pub mod threshold;

pub use aux_orbits::{disease_free_orbits, s0, y0, AuxOrbit, DiseaseFreeOrbit, OrbitLabel};
pub use endemic::{find_endemic_orbit, poincare, PeriodicOrbit, Stability};
pub use integrate::{monodromy, Method, Monodromy, Trajectory};
pub use mawhin::{
    compute_bounds, degree_determinant, estimate_permanence_floor, solve_algebraic_root,
    AlgebraicRoot, MawhinBounds,
};
pub use model::{Coefficients, LogState, State};
pub use periodic::PeriodicFn;
pub use scenario::{parse_config, Scenario};
pub use threshold::{compute_r, lambda_root, Regime, ThresholdReport};
