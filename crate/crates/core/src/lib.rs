//! Density-matrix simulation of Grover search under local Kraus noise.
//!
//! * [`linalg`]: dense complex matrices, Kronecker products, partial traces.
//! * [`state`]: pure states, density matrices and their validation.
//! * [`channel`]: Kraus channels and the six one-qubit noise families.
//! * [`grover`]: oracle, diffusion and the noisy Grover procedure.
//! * [`analysis`]: rerun budgets, `p_min`, sweeps and noise thresholds.
//! * [`cli`]: the experiment harness behind the `noisy-grover` binary.

// `!(x > 0.0)` style checks are deliberate: they also reject NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod analysis;
pub mod channel;
pub mod cli;
pub mod error;
pub mod grover;
pub mod linalg;
pub mod state;

pub use channel::{KrausChannel, NoiseFamily, NoiseKind};
pub use error::{Error, Result};
pub use grover::GroverInstance;
pub use linalg::ComplexMatrix;
pub use state::{DensityMatrix, PureState};
