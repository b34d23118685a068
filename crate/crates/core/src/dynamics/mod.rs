//! Coarse-grained open dynamics of the target qubit.
//!
//! Two independent routes are kept side by side: the closed-form solution
//! ([`table`]) and brute-force evolution built from the exact collision
//! channel ([`master`], [`stochastic`]).

pub mod master;
pub mod snapshots;
pub mod stochastic;
pub mod table;

pub use master::{generator_apply, integrate_master_equation, liouvillian, Bath, INTEGRATION_TOL};
pub use snapshots::{intra_collision_snapshots, CollisionSnapshot};
pub use stochastic::{stochastic_trajectories, TrajectoryEnsemble};
pub use table::{
    alpha, analytic_populations, analytic_state, eta, eta_over_alpha, lindblad_rates, table_one_coefficients,
    LindbladRates, TableOneCoefficients,
};
