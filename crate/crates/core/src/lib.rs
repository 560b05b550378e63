//! Homogeneous de Branges spaces: structure functions, Hamiltonians,
//! reproducing kernels and spectral measures.
//!
//! Three independent evaluators are provided for the pair `(A, B)` attached
//! to a parameter `(p, P, psi)`: the coefficient recurrence
//! ([`recurrence`]), confluent hypergeometric closed forms ([`closedform`])
//! and direct integration of the canonical system ([`canonical`]).

pub mod canonical;
pub mod closedform;
pub mod dd;
pub mod error;
pub mod hamiltonian;
pub mod measures;
pub mod ode;
pub mod quad;
pub mod recurrence;
pub mod spaces;
pub mod specfun;

pub use error::{Error, Result};
pub use hamiltonian::{ClassTag, Matrix2};
pub use recurrence::{CoeffSeq, ParamPair};

pub use num_complex::Complex64;
