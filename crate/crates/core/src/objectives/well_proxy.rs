//! Analytic stand-in for a reservoir simulation with joint well placement
//! and bottom-hole-pressure (BHP) control.
//!
//! # Decision vector
//!
//! 90 values, each in `[0, 1]`:
//!
//! * `x[6w .. 6w+6]` for movable well `w ∈ {0, 1, 2}`: heel `(x, y, z)` then
//!   toe `(x, y, z)`, normalized to the field box. One unit is 9 km along x,
//!   3 km along y and 50 m along z.
//! * `x[18 + 4k .. 18 + 4k + 4]` for well `k ∈ 0..18`: normalized BHP at the
//!   four control times. Wells `0..3` are the movable producers, the next ones
//!   are the existing producers, the rest are injectors. For producers a low
//!   value means a deep drawdown; for injectors a high value means more
//!   injection.
//!
//! # Model
//!
//! Placement quality of a well is the mean of a "sweet spot" field sampled
//! along its heel-toe segment. The field is a constant floor plus a sum of
//! Gaussian bumps, one local optimum per bump. Wells whose midpoints lie
//! close together lose part of their quality through a proximity penalty.
//! The three new wells pool their placement score into one productivity
//! index shared equally, so the value does not depend on which coordinate
//! block belongs to which well.
//!
//! For each control period, every producer yields oil
//! `PI · decline · support · (1 − exp(−curvature · drawdown))` and water
//! `PI · water_cut · drawdown²` per year; injectors add water
//! `II · bhp` per year and raise pressure support for all producers. The
//! cumulative volumes are combined through [`wcf_weighted`].
//!
//! All coefficients come from a [`KeyValueFile`] fixture. The default one is
//! compiled in from `fixtures/well_proxy_v1.txt`.

use std::path::Path;

use serde::{Deserialize, Serialize};

use super::fixture::KeyValueFile;
use super::wcf::wcf_weighted;
use crate::domain::{ProductionTotals, SearchSpace};
use crate::error::{Error, Result};

pub const DEFAULT_FIXTURE: &str = include_str!("../../fixtures/well_proxy_v1.txt");
const FIXTURE_VERSION: f64 = 1.0;

/// Variable layout of the proxy.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct WellProxyConfig {
    pub n_movable_wells: usize,
    pub coords_per_well: usize,
    pub n_wells_total: usize,
    pub n_control_times: usize,
    pub weight_water: f64,
}

impl Default for WellProxyConfig {
    fn default() -> Self {
        Self {
            n_movable_wells: 3,
            coords_per_well: 6,
            n_wells_total: 18,
            n_control_times: 4,
            weight_water: 0.1,
        }
    }
}

impl WellProxyConfig {
    pub fn n_variables(&self) -> usize {
        self.n_movable_wells * self.coords_per_well + self.n_wells_total * self.n_control_times
    }

    pub fn placement_len(&self) -> usize {
        self.n_movable_wells * self.coords_per_well
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SweetSpot {
    pub center: [f64; 3],
    pub sigma: f64,
    pub weight: f64,
}

/// Local optimum recorded in the fixture.
#[derive(Debug, Clone, PartialEq)]
pub struct ReferenceOptimum {
    pub input: Vec<f64>,
    pub wcf: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct WellProxyModel {
    pub config: WellProxyConfig,
    pub base_quality: f64,
    pub sweet_spots: Vec<SweetSpot>,
    pub trajectory_samples: usize,
    pub interference_strength: f64,
    pub interference_range: f64,
    pub pi_scale: f64,
    pub existing_producer_pi: Vec<f64>,
    pub injector_ii: Vec<f64>,
    pub period_years: f64,
    pub decline: Vec<f64>,
    pub water_cut: Vec<f64>,
    pub oil_curvature: f64,
    pub support_gap: f64,
    pub support_rate: f64,
    /// Minimum distance for two local optima to count as distinct.
    pub optimum_separation: f64,
    pub reference: Option<ReferenceOptimum>,
}

impl WellProxyModel {
    pub fn default_fixture() -> Self {
        Self::from_fixture_str(DEFAULT_FIXTURE).expect("bundled fixture is valid")
    }

    pub fn from_fixture_path(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::config(format!("cannot read fixture {}: {e}", path.display())))?;
        Self::from_fixture_str(&text)
    }

    pub fn from_fixture_str(text: &str) -> Result<Self> {
        let kv = KeyValueFile::parse(text)?;
        const KNOWN: &[&str] = &[
            "version",
            "base_quality",
            "sweet_spot",
            "trajectory_samples",
            "interference_strength",
            "interference_range",
            "pi_scale",
            "existing_producer_pi",
            "injector_ii",
            "period_years",
            "decline",
            "water_cut",
            "oil_curvature",
            "support_gap",
            "support_rate",
            "optimum_separation",
            "reference_wcf",
            "reference_input",
        ];
        if let Some(unknown) = kv.keys().find(|k| !KNOWN.contains(k)) {
            return Err(Error::Fixture {
                line: 0,
                message: format!("unknown key {unknown:?}"),
            });
        }
        let version = kv.scalar("version")?;
        if version != FIXTURE_VERSION {
            return Err(Error::Fixture {
                line: 0,
                message: format!("unsupported fixture version {version}"),
            });
        }
        let sweet_spots = kv
            .rows("sweet_spot", 5)?
            .into_iter()
            .map(|r| SweetSpot {
                center: [r[0], r[1], r[2]],
                sigma: r[3],
                weight: r[4],
            })
            .collect();
        let reference = match (
            kv.optional_scalar("reference_wcf")?,
            kv.contains("reference_input"),
        ) {
            (Some(wcf), true) => Some(ReferenceOptimum {
                input: kv.list("reference_input")?.to_vec(),
                wcf,
            }),
            (None, false) => None,
            _ => {
                return Err(Error::Fixture {
                    line: 0,
                    message: "reference_wcf and reference_input must appear together".into(),
                })
            }
        };
        let samples = kv.scalar("trajectory_samples")?;
        let model = Self {
            config: WellProxyConfig::default(),
            base_quality: kv.scalar("base_quality")?,
            sweet_spots,
            trajectory_samples: samples as usize,
            interference_strength: kv.scalar("interference_strength")?,
            interference_range: kv.scalar("interference_range")?,
            pi_scale: kv.scalar("pi_scale")?,
            existing_producer_pi: kv.list("existing_producer_pi")?.to_vec(),
            injector_ii: kv.list("injector_ii")?.to_vec(),
            period_years: kv.scalar("period_years")?,
            decline: kv.list("decline")?.to_vec(),
            water_cut: kv.list("water_cut")?.to_vec(),
            oil_curvature: kv.scalar("oil_curvature")?,
            support_gap: kv.scalar("support_gap")?,
            support_rate: kv.scalar("support_rate")?,
            optimum_separation: kv.scalar("optimum_separation")?,
            reference,
        };
        if samples < 2.0 || samples.fract() != 0.0 {
            return Err(Error::Fixture {
                line: 0,
                message: format!("trajectory_samples must be an integer ≥ 2, got {samples}"),
            });
        }
        model.validate()?;
        Ok(model)
    }

    fn validate(&self) -> Result<()> {
        let bad = |message: String| Err(Error::Fixture { line: 0, message });
        let c = &self.config;
        let wells = c.n_movable_wells + self.existing_producer_pi.len() + self.injector_ii.len();
        if wells != c.n_wells_total {
            return bad(format!(
                "fixture describes {wells} wells, layout expects {}",
                c.n_wells_total
            ));
        }
        if self.decline.len() != c.n_control_times || self.water_cut.len() != c.n_control_times {
            return bad(format!(
                "decline and water_cut need {} values each",
                c.n_control_times
            ));
        }
        if self
            .sweet_spots
            .iter()
            .any(|s| s.sigma <= 0.0 || s.weight < 0.0)
        {
            return bad("sweet spots need sigma > 0 and weight ≥ 0".into());
        }
        let non_negative = [
            self.base_quality,
            self.pi_scale,
            self.period_years,
            self.oil_curvature,
            self.support_rate,
            self.optimum_separation,
        ];
        if non_negative.iter().any(|v| *v < 0.0)
            || self
                .existing_producer_pi
                .iter()
                .chain(&self.injector_ii)
                .chain(&self.decline)
                .chain(&self.water_cut)
                .any(|v| *v < 0.0)
        {
            return bad("rates, weights and scales must be non-negative".into());
        }
        if !(0.0..1.0).contains(&self.interference_strength) {
            return bad("interference_strength must lie in [0, 1)".into());
        }
        if !(0.0..=1.0).contains(&self.support_gap) {
            return bad("support_gap must lie in [0, 1]".into());
        }
        if self.interference_range <= 0.0 {
            return bad("interference_range must be positive".into());
        }
        if let Some(r) = &self.reference {
            if r.input.len() != c.n_variables() {
                return bad(format!("reference_input needs {} values", c.n_variables()));
            }
        }
        Ok(())
    }

    pub fn space(&self) -> SearchSpace {
        SearchSpace::unit(self.config.n_variables())
    }

    fn field(&self, p: [f64; 3]) -> f64 {
        self.base_quality
            + self
                .sweet_spots
                .iter()
                .map(|s| {
                    let d2: f64 = (0..3).map(|k| (p[k] - s.center[k]).powi(2)).sum();
                    s.weight * (-d2 / (2.0 * s.sigma * s.sigma)).exp()
                })
                .sum::<f64>()
    }

    fn well_quality(&self, coords: &[f64]) -> f64 {
        let n = self.trajectory_samples;
        let total: f64 = (0..n)
            .map(|k| {
                let s = k as f64 / (n - 1) as f64;
                self.field([
                    coords[0] + s * (coords[3] - coords[0]),
                    coords[1] + s * (coords[4] - coords[1]),
                    coords[2] + s * (coords[5] - coords[2]),
                ])
            })
            .sum();
        total / n as f64
    }

    /// Pooled placement score of the movable wells. Strictly positive.
    pub fn placement_score(&self, placement: &[f64]) -> f64 {
        let c = &self.config;
        let wells: Vec<&[f64]> = placement
            .chunks(c.coords_per_well)
            .take(c.n_movable_wells)
            .collect();
        let quality: Vec<f64> = wells.iter().map(|w| self.well_quality(w)).collect();
        let midpoint = |w: &[f64]| {
            [
                (w[0] + w[3]) / 2.0,
                (w[1] + w[4]) / 2.0,
                (w[2] + w[5]) / 2.0,
            ]
        };
        let mut score: f64 = quality.iter().sum();
        let two_r2 = 2.0 * self.interference_range * self.interference_range;
        for a in 0..wells.len() {
            for b in a + 1..wells.len() {
                let (ma, mb) = (midpoint(wells[a]), midpoint(wells[b]));
                let d2: f64 = (0..3).map(|k| (ma[k] - mb[k]).powi(2)).sum();
                // each well's quality shows up in (n - 1) pairs at half weight
                score -=
                    self.interference_strength * (-d2 / two_r2).exp() * (quality[a] + quality[b])
                        / (wells.len() - 1) as f64;
            }
        }
        score
    }

    pub fn production_totals(&self, x: &[f64]) -> Result<ProductionTotals> {
        let c = &self.config;
        if x.len() != c.n_variables() {
            return Err(Error::config(format!(
                "well proxy expects {} variables, got {}",
                c.n_variables(),
                x.len()
            )));
        }
        let (placement, bhp) = x.split_at(c.placement_len());
        let pooled_pi = self.pi_scale * self.placement_score(placement) / c.n_movable_wells as f64;
        let n_producers = c.n_movable_wells + self.existing_producer_pi.len();
        let producer_pi = |w: usize| {
            if w < c.n_movable_wells {
                pooled_pi
            } else {
                self.existing_producer_pi[w - c.n_movable_wells]
            }
        };
        let control = |well: usize, k: usize| bhp[well * c.n_control_times + k];

        let (mut q_op, mut q_wp, mut q_wi) = (0.0, 0.0, 0.0);
        for k in 0..c.n_control_times {
            let mut deficit = 0.0;
            for (j, ii) in self.injector_ii.iter().enumerate() {
                let rate = ii * control(n_producers + j, k);
                q_wi += self.period_years * rate;
                deficit += (-self.support_rate * rate).exp();
            }
            let support = if self.injector_ii.is_empty() {
                1.0 - self.support_gap
            } else {
                1.0 - self.support_gap * deficit / self.injector_ii.len() as f64
            };
            for w in 0..n_producers {
                let pi = producer_pi(w);
                let drawdown = 1.0 - control(w, k);
                q_op += self.period_years
                    * pi
                    * self.decline[k]
                    * support
                    * (1.0 - (-self.oil_curvature * drawdown).exp());
                q_wp += self.period_years * pi * self.water_cut[k] * drawdown * drawdown;
            }
        }
        ProductionTotals::new(q_op, q_wp, q_wi)
    }
}

/// WCF of the proxy at `x` (larger is better).
pub fn well_proxy_eval(x: &[f64], model: &WellProxyModel) -> Result<f64> {
    let totals = model.production_totals(x)?;
    wcf_weighted(&totals, model.config.weight_water)
}
