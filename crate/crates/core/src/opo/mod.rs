//! Source and apparatus model: parameter bundles, efficiency budget,
//! heralded-state construction, comb filtering and rate arithmetic.

pub mod budget;
pub mod filter;
pub mod heralding;
pub mod params;
pub mod rates;

pub use budget::{escape_efficiency, expected_vacuum, total_detection_efficiency};
pub use filter::{cascade_rejection, fp_transmission};
pub use heralding::{heralded_state, two_photon_fraction};
pub use params::{ConditioningPath, EfficiencyBudget, FilterSpec, OpoParams};
pub use rates::{heralding_stats, HeraldingStats};
