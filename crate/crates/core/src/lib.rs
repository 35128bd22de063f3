//! Discrete quantum collision models whose ancillae are structured, i.e.
//! composite systems with internal interactions.
//!
//! The crate is organised bottom-up:
//!
//! * [`qcore`]: dense linear algebra on small Hilbert spaces (tensor products,
//!   partial traces, Hermitian eigensystems, Gibbs states, entropies).
//! * [`ancilla`]: structured ancilla Hamiltonians and their correlation functions.
//! * [`engine`]: exact and second-order collision maps, trajectories, steady states.
//! * [`thermo`]: per-collision heat, work and entropy production.
//! * [`models`]: the two-qubit-ancilla models together with their closed forms.

pub mod ancilla;
pub mod engine;
pub mod error;
pub mod models;
pub mod qcore;
pub mod thermo;

pub use error::{Error, Result};
pub use num_complex::Complex64 as C64;
