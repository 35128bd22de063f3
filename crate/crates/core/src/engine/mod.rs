//! Collision propagation: exact and second-order one-collision maps,
//! trajectories, fixed points and the ℓ₁ coherence.

mod coherence;
mod model;
mod propagate;
mod steady;

pub use coherence::{l1_coherence, l1_coherence_in_basis};
pub use model::{AnalyticMap, CollisionModel, PropagatorKind};
pub use propagate::{
    exact_collision, run_trajectory, truncated_step, CollisionOutcome, Observables, Trajectory,
};
pub use steady::{fixed_point, steady_state, SteadyStateOptions};
