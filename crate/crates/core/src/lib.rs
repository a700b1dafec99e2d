//! Distance-like multipartite entanglement measures and the LOCC state
//! discrimination bounds they imply.
//!
//! The crate is organised bottom-up:
//!
//! - [`space`], [`state`], [`ops`], [`families`]: exact multipartite state
//!   algebra in a fixed big-endian index convention (party 0 most significant).
//! - [`product_opt`]: alternating maximisation of the overlap with pure product
//!   states (a feasible-point lower bound on the separable overlap).
//! - [`sdp`]: an interior-point solver for Hermitian cone programs with
//!   partial-transpose constraints, and the three PPT relaxations built on it
//!   (overlap, global robustness, discrimination quantity).
//! - [`measures`]: per-state measure records and the hierarchy checker.
//! - [`discrimination`]: necessary conditions for perfect LOCC discrimination,
//!   bounds on the number of discriminable states, and the GHZ construction
//!   with its exact local-measurement simulator.
//! - [`io`]: the plain-text state-set file format.
//!
//! Every PPT quantity is a relaxation of its separable counterpart; the bound
//! direction of each one is documented where it is computed.

#![forbid(unsafe_code)]

pub mod discrimination;
pub mod families;
pub mod io;
pub mod linalg;
pub mod measures;
pub mod ops;
pub mod product_opt;
pub mod sdp;
pub mod space;
pub mod state;

mod error;

pub use error::{Error, Result};
pub use linalg::{CMatrix, CVector, C64};
pub use space::{Bipartition, MultipartiteSpace};
pub use state::{DensityOperator, ProductState, PureState, QuantumState, SupportProjector};

/// Default relative eigenvalue threshold separating genuine rank from round-off.
pub const DEFAULT_RANK_TOL: f64 = 1e-10;
