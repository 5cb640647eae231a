use crate::domain::ProductionTotals;
use crate::error::Result;

/// Weight applied to produced and injected water.
pub const WATER_WEIGHT: f64 = 0.1;

/// Weighted cumulative fluid: oil produced minus 0.1 × (water produced + water injected).
pub fn wcf(totals: &ProductionTotals) -> Result<f64> {
    wcf_weighted(totals, WATER_WEIGHT)
}

pub fn wcf_weighted(totals: &ProductionTotals, water_weight: f64) -> Result<f64> {
    totals.validate()?;
    Ok(totals.q_op - water_weight * (totals.q_wp + totals.q_wi))
}
