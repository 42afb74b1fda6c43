use super::params::EfficiencyBudget;
use crate::error::{Error, Result};

/// OPO escape efficiency `T / (T + L)`.
pub fn escape_efficiency(t_out: f64, l_intra: f64) -> Result<f64> {
    if t_out < 0.0 || l_intra < 0.0 || t_out + l_intra == 0.0 {
        return Err(Error::param(
            "t_out",
            format!("need t_out > 0 and l_intra >= 0, got ({t_out}, {l_intra})"),
        ));
    }
    Ok(t_out / (t_out + l_intra))
}

/// Overall detection efficiency `eta_noise * eta_phot * visibility^2 * eta_prop`.
pub fn total_detection_efficiency(budget: &EfficiencyBudget) -> f64 {
    budget.eta_noise * budget.eta_phot * budget.eta_vis() * budget.eta_prop
}

/// Vacuum admixture expected from losses alone, `1 - eta_tot * eta_opo`.
/// Multi-photon terms are neglected.
pub fn expected_vacuum(eta_tot: f64, eta_opo: f64) -> f64 {
    1.0 - eta_tot * eta_opo
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn escape_efficiency_values() {
        assert!((escape_efficiency(0.10, 0.004).unwrap() - 0.961_538_461_5).abs() < 1e-9);
        assert_eq!(escape_efficiency(0.3, 0.0).unwrap(), 1.0);
        assert_eq!(escape_efficiency(0.07, 0.07).unwrap(), 0.5);
        assert!(escape_efficiency(0.0, 0.0).is_err());
    }

    #[test]
    fn detection_budget_product() {
        let eta = total_detection_efficiency(&EfficiencyBudget::reference());
        assert!((eta - 0.849_608_256).abs() < 1e-9);
        let ones = EfficiencyBudget { eta_noise: 1.0, eta_phot: 1.0, eta_prop: 1.0, visibility: 1.0 };
        assert_eq!(total_detection_efficiency(&ones), 1.0);
        let half = EfficiencyBudget { eta_phot: 0.5, ..ones };
        assert_eq!(total_detection_efficiency(&half), 0.5);
    }

    #[test]
    fn vacuum_expectation() {
        assert!((expected_vacuum(0.85, 0.96) - 0.184).abs() < 1e-12);
        assert_eq!(expected_vacuum(1.0, 1.0), 0.0);
        assert_eq!(expected_vacuum(0.5, 1.0), 0.5);
    }
}
