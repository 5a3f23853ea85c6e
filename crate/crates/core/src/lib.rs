//! Two-qutrit amplitude-damping dynamics and entanglement-criteria analysis.
//!
//! Modules, bottom up:
//! - [`linalg`]: dense complex matrices, Hermitian eigenvalues, singular values.
//! - [`states`]: validated density matrices, the Horodecki and isotropic
//!   families, partial transpose, realignment, text I/O.
//! - [`dynamics`]: closed-form and RK4 evolution under amplitude damping.
//! - [`measures`]: negativity, CCNR score, PPT test.
//! - [`dsd`]: death-time detection and trajectory classification.
//! - [`cli`]: the `qutrit-dsd` command-line front end.

pub mod error;
pub mod linalg;
pub mod states;
pub mod dynamics;
pub mod measures;
pub mod dsd;
pub mod cli;

pub use error::{Error, Result};
