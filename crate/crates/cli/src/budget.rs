use herald_core::opo::filter::to_db;
use herald_core::opo::{
    cascade_rejection, escape_efficiency, expected_vacuum, heralding_stats, total_detection_efficiency,
    two_photon_fraction,
};
use serde::Serialize;

use crate::config::Config;
use crate::error::CliResult;
use crate::model::source_model;

#[derive(Debug, Clone, Serialize)]
pub struct BudgetReport {
    pub efficiencies: Efficiencies,
    pub heralding: Heralding,
    pub filters: Filters,
    /// Absent when the configuration cannot be simulated as given.
    pub source: Option<Source>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub source_error: Option<String>,
}

#[derive(Debug, Clone, Serialize)]
pub struct Efficiencies {
    pub eta_noise: f64,
    pub eta_phot: f64,
    pub eta_vis: f64,
    pub eta_prop: f64,
    pub eta_tot: f64,
    pub eta_opo: f64,
    pub expected_vacuum: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct Heralding {
    pub eta_c: f64,
    pub herald_rate: f64,
    pub brightness_bandwidth: f64,
    /// Counts per second per MHz.
    pub brightness: f64,
    pub corrected_rate: f64,
    pub quoted_corrected_rate: f64,
    pub note: String,
}

#[derive(Debug, Clone, Serialize)]
pub struct Filters {
    pub finesse: f64,
    pub comb_orders: usize,
    pub rejection: f64,
    pub rejection_db: f64,
    pub quoted_rejection: f64,
    pub quoted_rejection_db: f64,
    pub note: String,
}

#[derive(Debug, Clone, Serialize)]
pub struct Source {
    pub lambda_sq: f64,
    pub two_photon_fraction: f64,
    pub leakage: f64,
    pub eta_optical: f64,
    pub eta_electronic: f64,
    pub populations: Vec<f64>,
}

pub fn budget_report(cfg: &Config) -> CliResult<BudgetReport> {
    let eta_tot = total_detection_efficiency(&cfg.budget);
    let eta_opo = escape_efficiency(cfg.opo.t_out, cfg.opo.l_intra)?;
    let stats = heralding_stats(&cfg.conditioning, cfg.report.brightness_bandwidth)?;
    let orders = cfg.acquisition.comb_orders.max(1);
    let rejection = cascade_rejection(&cfg.filters, &cfg.opo, orders)?;
    let (source, source_error) = match source_model(cfg) {
        Ok(model) => (
            Some(Source {
                lambda_sq: cfg.opo.lambda_sq(),
                two_photon_fraction: two_photon_fraction(cfg.opo.lambda_sq(), cfg.conditioning.eta_c())?,
                leakage: model.conditioning.leakage,
                eta_optical: model.eta_optical,
                eta_electronic: model.eta_electronic,
                populations: model.state.diagonal().into_iter().take(4).collect(),
            }),
            None,
        ),
        Err(e) => (None, Some(e.to_string())),
    };
    let note = format!(
        "corrected heralding rate: computed {:.2} MHz = {:.0} kHz / ({:.0}% x {:.0}%), quoted {:.0} kHz; \
         the arithmetic behind the quoted figure is not stated",
        stats.corrected_rate / 1e6,
        stats.herald_rate / 1e3,
        cfg.conditioning.eta_det * 100.0,
        cfg.conditioning.transmission * 100.0,
        cfg.report.quoted_corrected_rate / 1e3,
    );
    let filter_note = format!(
        "Lorentzian interferential filter and Airy Fabry-Perot over +-{orders} comb orders give {:.2}% \
         ({:.1} dB) against {:.1}% ({:.1} dB) quoted; the interferential line shape is an assumption",
        rejection * 100.0,
        to_db(rejection),
        cfg.report.quoted_rejection * 100.0,
        to_db(cfg.report.quoted_rejection),
    );
    Ok(BudgetReport {
        efficiencies: Efficiencies {
            eta_noise: cfg.budget.eta_noise,
            eta_phot: cfg.budget.eta_phot,
            eta_vis: cfg.budget.eta_vis(),
            eta_prop: cfg.budget.eta_prop,
            eta_tot,
            eta_opo,
            expected_vacuum: expected_vacuum(eta_tot, eta_opo),
        },
        heralding: Heralding {
            eta_c: cfg.conditioning.eta_c(),
            herald_rate: stats.herald_rate,
            brightness_bandwidth: cfg.report.brightness_bandwidth,
            brightness: stats.brightness,
            corrected_rate: stats.corrected_rate,
            quoted_corrected_rate: cfg.report.quoted_corrected_rate,
            note,
        },
        filters: Filters {
            finesse: cfg.filters.finesse(),
            comb_orders: orders,
            rejection,
            rejection_db: to_db(rejection),
            quoted_rejection: cfg.report.quoted_rejection,
            quoted_rejection_db: to_db(cfg.report.quoted_rejection),
            note: filter_note,
        },
        source,
        source_error,
    })
}
