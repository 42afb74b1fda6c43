//! Simulation and analysis of a heralded single-photon source characterized by
//! homodyne tomography.
//!
//! The crate covers the whole chain: a photon-number model of the heralded
//! state ([`opo`]), synthetic homodyne time traces ([`synth`]), temporal-mode
//! quadrature extraction ([`extract`]), and maximum-likelihood state
//! reconstruction ([`tomography`]) on the truncated Fock basis ([`fock`]).

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod error;
pub mod extract;
pub mod fock;
pub mod numeric;
pub mod opo;
pub mod synth;
pub mod tomography;

pub use error::{Error, Result};
pub use fock::{DensityMatrix, QuadratureSample, WignerGrid};
pub use synth::{TemporalMode, TimeTrace};
