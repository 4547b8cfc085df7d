//! Restricted Boltzmann machine representations of stabilizer code states.
//!
//! Composable groups (only `X`/`Z`, `Y`/`Z` or `X`/`Y` generators) get an
//! exact closed-form RBM; groups with mixed generators are handled by
//! fitting a dense RBM to a small subsystem and composing it with the
//! analytic part.
//!
//! ```
//! use stabrbm::{analytic, lattice, oracle};
//!
//! let code = lattice::build_toric(2, 2).unwrap();
//! let rbm = analytic::construct_planar(&code).unwrap();
//! let state = rbm.full_state(1 << 20).unwrap();
//! let overlap = oracle::code_projector_overlap(&code.group, &state).unwrap();
//! assert!((overlap - 1.0).abs() < 1e-10);
//! ```
//!
//! The `examples/` directory has one runnable program per capability.

pub mod analytic;
pub mod error;
pub mod lattice;
pub mod optimize;
pub mod oracle;
pub mod pauli;
pub mod rbm;

pub mod cli;

pub use error::{Error, Result};
pub use num_complex::Complex64;
pub use oracle::DenseState;
pub use pauli::{GeneratorType, GroupClass, PauliString, StabilizerGroup};
pub use rbm::RbmState;
