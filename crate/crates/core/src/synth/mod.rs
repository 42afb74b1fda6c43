//! Synthetic homodyne acquisition: temporal mode, quadrature sampling,
//! trace synthesis and the on-disk trace format.

pub mod acquisition;
pub mod file;
pub mod mode;
pub mod sampler;
pub mod trace;

pub use acquisition::{event_rng, run_acquisition, Acquisition, AcquisitionManifest, PhaseSchedule, DEFAULT_EVENTS};
pub use file::{read_trace_csv, read_trace_file, write_trace_file, TraceSet};
pub use mode::{analytic_overlap, build_temporal_mode, mode_amplitude, TemporalMode};
pub use sampler::{sample_quadrature, QuadratureSampler};
pub use trace::{synthesize_trace, NoiseModel, TimeTrace, VACUUM_VARIANCE};
