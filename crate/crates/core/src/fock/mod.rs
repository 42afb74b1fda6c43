//! Truncated Fock-basis state algebra.

pub mod loss;
pub mod quadrature;
pub mod state;
pub mod wavefunction;
pub mod wigner;

pub use loss::{apply_loss, invert_loss, InversionStatus, LossInversion};
pub use quadrature::{projector_amplitudes, quadrature_pdf, QuadratureDistribution, QuadratureSample};
pub use state::{fidelity_with_fock, DensityMatrix, DEFAULT_N_MAX};
pub use wavefunction::{fill_fock_wavefunctions, fock_wavefunction, fock_wavefunctions};
pub use wigner::{wigner, wigner_grid, WignerGrid};
