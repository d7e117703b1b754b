//! Simulation of quantum signal transfer along lattices and spin chains.
//!
//! The building blocks are generic over the real scalar ([`Scalar`], either
//! `f32` or `f64`); the `*64` aliases below fix double precision, which is
//! what the tolerances in this crate are written for.

pub mod cli;
pub mod error;
pub mod lattice;
pub mod numerics;
pub mod optimizer;
pub mod pst;
pub mod scalar;
pub mod spinchain;
pub mod weyl;

pub use error::{Error, Result};
pub use scalar::Scalar;

pub type C64 = num_complex::Complex<f64>;
pub type Operator64 = numerics::Operator<f64>;
pub type StateVector64 = numerics::StateVector<f64>;
pub type EigenSystem64 = numerics::EigenSystem<f64>;
pub type Propagator64 = numerics::Propagator<f64>;
pub type WeylPair64 = weyl::WeylPair<f64>;
pub type ChainSpec64 = lattice::ChainSpec<f64>;
pub type FidelityCurve64 = pst::FidelityCurve<f64>;
pub type TransferReport64 = pst::TransferReport<f64>;
pub type OptimizeConfig64 = optimizer::OptimizeConfig<f64>;
pub type OptimizeResult64 = optimizer::OptimizeResult<f64>;
