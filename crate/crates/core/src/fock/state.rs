use nalgebra::DMatrix;
use num_complex::Complex64;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

pub const HERMITIAN_TOL: f64 = 1e-12;
pub const TRACE_TOL: f64 = 1e-10;
pub const PSD_TOL: f64 = 1e-9;

/// Default Fock-space truncation.
pub const DEFAULT_N_MAX: usize = 10;

/// Density matrix on the truncated Fock basis `|0>, ..., |n_max>`.
///
/// Hermiticity and unit trace are enforced on construction. Positivity is
/// enforced by [`DensityMatrix::new`]; matrices produced by loss inversion may
/// carry small negative eigenvalues and are flagged through
/// [`DensityMatrix::is_physical`] instead.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityMatrix {
    entries: DMatrix<Complex64>,
    min_eigenvalue: f64,
}

impl DensityMatrix {
    /// Builds a physical state, rejecting non-Hermitian, non-normalized or
    /// non-positive input.
    pub fn new(entries: DMatrix<Complex64>) -> Result<Self> {
        let rho = Self::from_hermitian(entries)?;
        if !rho.is_physical() {
            return Err(Error::InvalidState(format!(
                "smallest eigenvalue {:.3e} below -{PSD_TOL:e}",
                rho.min_eigenvalue
            )));
        }
        Ok(rho)
    }

    /// Builds a Hermitian unit-trace matrix without requiring positivity.
    pub fn from_hermitian(entries: DMatrix<Complex64>) -> Result<Self> {
        if entries.nrows() != entries.ncols() || entries.nrows() == 0 {
            return Err(Error::InvalidState(format!(
                "matrix must be square and non-empty, got {}x{}",
                entries.nrows(),
                entries.ncols()
            )));
        }
        if entries.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(Error::InvalidState("non-finite entry".into()));
        }
        let dim = entries.nrows();
        for m in 0..dim {
            for n in m..dim {
                let dev = (entries[(m, n)] - entries[(n, m)].conj()).norm();
                if dev > HERMITIAN_TOL {
                    return Err(Error::InvalidState(format!(
                        "not Hermitian at ({m},{n}): deviation {dev:.3e}"
                    )));
                }
            }
        }
        let trace: f64 = (0..dim).map(|k| entries[(k, k)].re).sum();
        if (trace - 1.0).abs() > TRACE_TOL {
            return Err(Error::InvalidState(format!("trace {trace} differs from 1")));
        }
        let min_eigenvalue = min_eigenvalue(&entries);
        Ok(Self {
            entries,
            min_eigenvalue,
        })
    }

    /// Symmetrizes `(A + A^†)/2` and rescales to unit trace before validating.
    /// Used by iterative algorithms whose rounding drifts off the constraints.
    pub(crate) fn from_approximate(entries: DMatrix<Complex64>) -> Result<Self> {
        let mut h = (&entries + entries.adjoint()) * Complex64::new(0.5, 0.0);
        let trace: f64 = (0..h.nrows()).map(|k| h[(k, k)].re).sum();
        if !(trace.is_finite() && trace > 0.0) {
            return Err(Error::InvalidState(format!("cannot normalize trace {trace}")));
        }
        h /= Complex64::new(trace, 0.0);
        for k in 0..h.nrows() {
            h[(k, k)].im = 0.0;
        }
        Self::from_hermitian(h)
    }

    pub fn from_diagonal(populations: &[f64]) -> Result<Self> {
        if populations.iter().any(|p| !p.is_finite()) {
            return Err(Error::InvalidState("non-finite population".into()));
        }
        let dim = populations.len();
        let entries =
            DMatrix::from_fn(dim, dim, |m, n| if m == n { Complex64::new(populations[m], 0.0) } else { Complex64::new(0.0, 0.0) });
        Self::new(entries)
    }

    /// Pure Fock state `|n><n|`.
    pub fn fock(n: usize, n_max: usize) -> Result<Self> {
        if n > n_max {
            return Err(Error::PhotonNumberOutOfRange { n, n_max });
        }
        let mut pops = vec![0.0; n_max + 1];
        pops[n] = 1.0;
        Self::from_diagonal(&pops)
    }

    pub fn vacuum(n_max: usize) -> Self {
        Self::fock(0, n_max).expect("vacuum is always representable")
    }

    pub fn maximally_mixed(n_max: usize) -> Self {
        let dim = n_max + 1;
        Self::from_diagonal(&vec![1.0 / dim as f64; dim]).expect("uniform mixture is valid")
    }

    /// Pure state from (not necessarily normalized) Fock amplitudes.
    pub fn pure(amplitudes: &[Complex64]) -> Result<Self> {
        let norm2: f64 = amplitudes.iter().map(|a| a.norm_sqr()).sum();
        if !(norm2 > 0.0 && norm2.is_finite()) {
            return Err(Error::InvalidState("zero or non-finite state vector".into()));
        }
        let dim = amplitudes.len();
        let entries = DMatrix::from_fn(dim, dim, |m, n| amplitudes[m] * amplitudes[n].conj() / norm2);
        Self::from_approximate(entries)
    }

    pub fn n_max(&self) -> usize {
        self.entries.nrows() - 1
    }

    pub fn dim(&self) -> usize {
        self.entries.nrows()
    }

    pub fn entries(&self) -> &DMatrix<Complex64> {
        &self.entries
    }

    pub fn element(&self, m: usize, n: usize) -> Complex64 {
        self.entries[(m, n)]
    }

    /// Photon-number populations `rho_nn`.
    pub fn diagonal(&self) -> Vec<f64> {
        (0..self.dim()).map(|k| self.entries[(k, k)].re).collect()
    }

    pub fn trace(&self) -> f64 {
        self.diagonal().iter().sum()
    }

    pub fn min_eigenvalue(&self) -> f64 {
        self.min_eigenvalue
    }

    /// Sum of the magnitudes of the negative eigenvalues; zero for physical states.
    pub fn psd_distance(&self) -> f64 {
        self.entries
            .clone()
            .symmetric_eigenvalues()
            .iter()
            .filter(|&&l| l < 0.0)
            .map(|l| -l)
            .sum()
    }

    pub fn is_physical(&self) -> bool {
        self.min_eigenvalue >= -PSD_TOL
    }

    pub fn ensure_physical(&self) -> Result<()> {
        if self.is_physical() {
            Ok(())
        } else {
            Err(Error::InvalidState(format!(
                "not positive semidefinite (smallest eigenvalue {:.3e})",
                self.min_eigenvalue
            )))
        }
    }

    /// True when every off-diagonal element vanishes to `tol`.
    pub fn is_diagonal(&self, tol: f64) -> bool {
        let dim = self.dim();
        (0..dim).all(|m| (0..dim).all(|n| m == n || self.entries[(m, n)].norm() <= tol))
    }

    /// Populations `rho_00..rho_kk` rescaled to sum to one.
    pub fn renormalized_diagonal(&self, k: usize) -> Vec<f64> {
        let diag = self.diagonal();
        let head = &diag[..=k.min(self.n_max())];
        let total: f64 = head.iter().sum();
        head.iter().map(|p| p / total).collect()
    }

    /// Re-embeds the state in a basis truncated at `n_max`.
    /// Truncation discards weight above `n_max` and renormalizes.
    pub fn with_n_max(&self, n_max: usize) -> Result<Self> {
        let dim = n_max + 1;
        let old = self.dim();
        let entries = DMatrix::from_fn(dim, dim, |m, n| {
            if m < old && n < old {
                self.entries[(m, n)]
            } else {
                Complex64::new(0.0, 0.0)
            }
        });
        if dim >= old {
            Self::from_hermitian(entries)
        } else {
            Self::from_approximate(entries)
        }
    }

    /// Hilbert-Schmidt distance `||A - B||_F`.
    pub fn frobenius_distance(&self, other: &DensityMatrix) -> f64 {
        let dim = self.dim().max(other.dim());
        let get = |rho: &DensityMatrix, m: usize, n: usize| {
            if m < rho.dim() && n < rho.dim() {
                rho.entries[(m, n)]
            } else {
                Complex64::new(0.0, 0.0)
            }
        };
        let mut acc = 0.0;
        for m in 0..dim {
            for n in 0..dim {
                acc += (get(self, m, n) - get(other, m, n)).norm_sqr();
            }
        }
        acc.sqrt()
    }
}

fn min_eigenvalue(entries: &DMatrix<Complex64>) -> f64 {
    entries
        .clone()
        .symmetric_eigenvalues()
        .iter()
        .copied()
        .fold(f64::INFINITY, f64::min)
}

/// Fidelity with the Fock state `|n>`, i.e. the population `rho_nn`.
pub fn fidelity_with_fock(rho: &DensityMatrix, n: usize) -> Result<f64> {
    if n > rho.n_max() {
        return Err(Error::PhotonNumberOutOfRange { n, n_max: rho.n_max() });
    }
    Ok(rho.element(n, n).re)
}

#[derive(Serialize, Deserialize)]
struct DensityMatrixJson {
    n_max: usize,
    re: Vec<Vec<f64>>,
    im: Vec<Vec<f64>>,
}

impl Serialize for DensityMatrix {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        let dim = self.dim();
        let rows = |f: fn(&Complex64) -> f64| -> Vec<Vec<f64>> {
            (0..dim).map(|m| (0..dim).map(|n| f(&self.entries[(m, n)])).collect()).collect()
        };
        DensityMatrixJson {
            n_max: self.n_max(),
            re: rows(|z| z.re),
            im: rows(|z| z.im),
        }
        .serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for DensityMatrix {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        use serde::de::Error as _;
        let raw = DensityMatrixJson::deserialize(deserializer)?;
        let dim = raw.n_max + 1;
        let shape_ok = |m: &Vec<Vec<f64>>| m.len() == dim && m.iter().all(|r| r.len() == dim);
        if !shape_ok(&raw.re) || !shape_ok(&raw.im) {
            return Err(D::Error::custom(format!("expected {dim}x{dim} `re` and `im` arrays")));
        }
        let entries = DMatrix::from_fn(dim, dim, |m, n| Complex64::new(raw.re[m][n], raw.im[m][n]));
        DensityMatrix::from_hermitian(entries).map_err(D::Error::custom)
    }
}
