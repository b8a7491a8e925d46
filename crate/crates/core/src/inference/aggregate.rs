//! Inverse-variance aggregation of per-voltage susceptibilities with the
//! configured exclusion rule.

use crate::error::{Error, Result};

/// One per-voltage result entering the aggregation.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct VoltageEntry {
    pub voltage: f64,
    pub chi: f64,
    pub sigma_stat: f64,
    /// Fitted visibility at this voltage over the paired reference visibility,
    /// when available (feeds the visibility exclusion rule).
    pub visibility_ratio: Option<f64>,
}

/// Which entries to exclude from the weighted mean.
#[derive(Debug, Clone, PartialEq)]
pub enum ExclusionRule {
    None,
    /// Exclude explicit voltages (V); matching within 0.5 V.
    Voltages(Vec<f64>),
    /// Exclude entries whose visibility ratio dropped below the threshold.
    VisibilityRatioBelow(f64),
    /// Union of an explicit list and the visibility threshold.
    Both { voltages: Vec<f64>, threshold: f64 },
}

impl ExclusionRule {
    /// Default visibility threshold for the ratio rule.
    pub const DEFAULT_VISIBILITY_THRESHOLD: f64 = 0.3;

    fn excludes(&self, e: &VoltageEntry) -> bool {
        let by_voltage = |list: &[f64]| list.iter().any(|&u| (u - e.voltage).abs() < 0.5);
        let by_visibility =
            |thr: f64| e.visibility_ratio.map(|r| r < thr).unwrap_or(false);
        match self {
            ExclusionRule::None => false,
            ExclusionRule::Voltages(list) => by_voltage(list),
            ExclusionRule::VisibilityRatioBelow(thr) => by_visibility(*thr),
            ExclusionRule::Both {
                voltages,
                threshold,
            } => by_voltage(voltages) || by_visibility(*threshold),
        }
    }
}

/// Per-voltage susceptibilities with the aggregated weighted mean.
#[derive(Debug, Clone, PartialEq)]
pub struct SusceptibilityEstimate {
    /// (voltage, chi, sigma_stat, included).
    pub per_voltage: Vec<(f64, f64, f64, bool)>,
    pub weighted_mean_chi: f64,
    pub weighted_mean_sigma: f64,
    pub systematic_notes: Vec<String>,
}

/// Inverse-variance weighted mean over the entries surviving the exclusion
/// rule; excluded entries are retained with their flag cleared.
pub fn aggregate_weighted_mean(
    entries: &[VoltageEntry],
    rule: &ExclusionRule,
) -> Result<SusceptibilityEstimate> {
    if entries.is_empty() {
        return Err(Error::Aggregation("no per-voltage entries".into()));
    }
    for e in entries {
        if e.sigma_stat <= 0.0 || !e.sigma_stat.is_finite() {
            return Err(Error::Aggregation(format!(
                "entry at {} V has non-positive sigma {}",
                e.voltage, e.sigma_stat
            )));
        }
    }
    let mut per_voltage = Vec::with_capacity(entries.len());
    let mut wsum = 0.0;
    let mut xsum = 0.0;
    let mut included_count = 0usize;
    for e in entries {
        let included = !rule.excludes(e);
        if included {
            let w = 1.0 / (e.sigma_stat * e.sigma_stat);
            wsum += w;
            xsum += w * e.chi;
            included_count += 1;
        }
        per_voltage.push((e.voltage, e.chi, e.sigma_stat, included));
    }
    if included_count == 0 {
        return Err(Error::Aggregation(
            "exclusion rule removed every entry".into(),
        ));
    }
    Ok(SusceptibilityEstimate {
        per_voltage,
        weighted_mean_chi: xsum / wsum,
        weighted_mean_sigma: (1.0 / wsum).sqrt(),
        systematic_notes: Vec::new(),
    })
}
