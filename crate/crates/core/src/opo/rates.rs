use serde::Serialize;

use super::params::ConditioningPath;
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct HeraldingStats {
    pub herald_rate: f64,
    /// Heralds per second per MHz of bandwidth.
    pub brightness: f64,
    /// Heralding rate with the conditioning-path losses divided out, Hz.
    pub corrected_rate: f64,
}

pub fn heralding_stats(path: &ConditioningPath, bandwidth: f64) -> Result<HeraldingStats> {
    path.validate()?;
    if !(bandwidth > 0.0) {
        return Err(Error::param("bandwidth", format!("{bandwidth} must be positive")));
    }
    let eta_c = path.eta_c();
    let corrected_rate = if eta_c > 0.0 { path.herald_rate / eta_c } else { f64::INFINITY };
    Ok(HeraldingStats {
        herald_rate: path.herald_rate,
        brightness: path.herald_rate / (bandwidth / 1e6),
        corrected_rate,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn brightness_and_corrected_rate() {
        let path = ConditioningPath::reference();
        let s = heralding_stats(&path, 75e6).unwrap();
        assert_eq!(s.brightness, 400.0);
        assert!((s.corrected_rate - 1.0714285714e6).abs() < 1.0);
        let idle = ConditioningPath { herald_rate: 0.0, ..path };
        assert_eq!(heralding_stats(&idle, 75e6).unwrap().brightness, 0.0);
        assert!(heralding_stats(&path, 0.0).is_err());
    }
}
