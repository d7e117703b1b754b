//! Dense complex linear algebra: operators, states, hermitian
//! eigendecomposition and unitary time evolution.

mod eigen;
mod evolve;
mod operator;
mod state;

pub use eigen::{hermitian_eig, EigenSystem};
pub use evolve::{evolve, Propagator};
pub use operator::{Operator, Structure};
pub use state::{apply, StateVector};
