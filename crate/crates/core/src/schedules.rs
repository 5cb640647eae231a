//! Inertia and acceleration coefficient schedules.
//!
//! All three kinds read the run-global iteration clock; stage boundaries do
//! not reset it.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Canonical constant inertia (constriction-equivalent).
pub const DEFAULT_OMEGA: f64 = 0.729;
/// Canonical constant acceleration coefficient, used for both c1 and c2.
pub const DEFAULT_C: f64 = 1.49445;
pub const DEFAULT_OMEGA_MAX: f64 = 0.9;
pub const DEFAULT_OMEGA_MIN: f64 = 0.4;
pub const DEFAULT_C_MAX: f64 = 2.5;
pub const DEFAULT_C_MIN: f64 = 0.5;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct IterationClock {
    pub t: usize,
    pub t_max: usize,
}

impl IterationClock {
    pub fn new(t: usize, t_max: usize) -> Result<Self> {
        let clock = Self { t, t_max };
        clock.validate()?;
        Ok(clock)
    }

    pub fn validate(&self) -> Result<()> {
        if self.t_max == 0 {
            return Err(Error::config("t_max must be at least 1"));
        }
        if self.t > self.t_max {
            return Err(Error::config(format!(
                "iteration {} exceeds t_max {}",
                self.t, self.t_max
            )));
        }
        Ok(())
    }

    /// `t / t_max`, computed before any scaling.
    pub fn fraction(&self) -> f64 {
        self.t as f64 / self.t_max as f64
    }

    pub fn is_done(&self) -> bool {
        self.t >= self.t_max
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ScheduleKind {
    Constant,
    Ldiw,
    Tvac,
}

impl ScheduleKind {
    pub fn as_str(&self) -> &'static str {
        match self {
            ScheduleKind::Constant => "constant",
            ScheduleKind::Ldiw => "ldiw",
            ScheduleKind::Tvac => "tvac",
        }
    }
}

impl std::str::FromStr for ScheduleKind {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "constant" => Ok(ScheduleKind::Constant),
            "ldiw" => Ok(ScheduleKind::Ldiw),
            "tvac" => Ok(ScheduleKind::Tvac),
            other => Err(Error::config(format!("unknown schedule kind {other:?}"))),
        }
    }
}

/// Every coefficient a schedule may need. Fields a kind does not read are
/// carried along so a spec can be switched between kinds without losing values.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ScheduleSpec {
    pub kind: ScheduleKind,
    pub omega_const: f64,
    pub c1_const: f64,
    pub c2_const: f64,
    pub omega_max: f64,
    pub omega_min: f64,
    pub c1_max: f64,
    pub c1_min: f64,
    pub c2_max: f64,
    pub c2_min: f64,
}

impl Default for ScheduleSpec {
    fn default() -> Self {
        Self {
            kind: ScheduleKind::Constant,
            omega_const: DEFAULT_OMEGA,
            c1_const: DEFAULT_C,
            c2_const: DEFAULT_C,
            omega_max: DEFAULT_OMEGA_MAX,
            omega_min: DEFAULT_OMEGA_MIN,
            c1_max: DEFAULT_C_MAX,
            c1_min: DEFAULT_C_MIN,
            c2_max: DEFAULT_C_MAX,
            c2_min: DEFAULT_C_MIN,
        }
    }
}

impl ScheduleSpec {
    pub fn constant() -> Self {
        Self::default()
    }

    pub fn ldiw() -> Self {
        Self {
            kind: ScheduleKind::Ldiw,
            ..Self::default()
        }
    }

    pub fn tvac() -> Self {
        Self {
            kind: ScheduleKind::Tvac,
            ..Self::default()
        }
    }

    pub fn of_kind(kind: ScheduleKind) -> Self {
        Self {
            kind,
            ..Self::default()
        }
    }

    /// Every violated invariant, one message each.
    pub fn violations(&self) -> Vec<String> {
        let mut out = Vec::new();
        let fields = [
            ("omega_const", self.omega_const),
            ("c1_const", self.c1_const),
            ("c2_const", self.c2_const),
            ("omega_max", self.omega_max),
            ("omega_min", self.omega_min),
            ("c1_max", self.c1_max),
            ("c1_min", self.c1_min),
            ("c2_max", self.c2_max),
            ("c2_min", self.c2_min),
        ];
        for (name, v) in fields {
            if !v.is_finite() || v < 0.0 {
                out.push(format!(
                    "schedule.{name} must be finite and non-negative, got {v}"
                ));
            }
        }
        if matches!(self.kind, ScheduleKind::Ldiw | ScheduleKind::Tvac)
            && self.omega_max < self.omega_min
        {
            out.push(format!(
                "schedule.omega_max ({}) is below omega_min ({})",
                self.omega_max, self.omega_min
            ));
        }
        if self.kind == ScheduleKind::Tvac {
            if self.c1_max < self.c1_min {
                out.push(format!(
                    "schedule.c1_max ({}) is below c1_min ({})",
                    self.c1_max, self.c1_min
                ));
            }
            if self.c2_max < self.c2_min {
                out.push(format!(
                    "schedule.c2_max ({}) is below c2_min ({})",
                    self.c2_max, self.c2_min
                ));
            }
        }
        out
    }

    pub fn validate(&self) -> Result<()> {
        match self.violations().as_slice() {
            [] => Ok(()),
            v => Err(Error::config(v.join("; "))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Coefficients {
    pub omega: f64,
    pub c1: f64,
    pub c2: f64,
}

/// Linear move from `start` towards `end`; exact at both endpoints.
fn interpolate(clock: &IterationClock, start: f64, end: f64) -> f64 {
    if clock.t == 0 {
        start
    } else if clock.t == clock.t_max {
        end
    } else {
        start + clock.fraction() * (end - start)
    }
}

/// Linearly decreasing inertia weight.
pub fn ldiw_weight(clock: IterationClock, omega_max: f64, omega_min: f64) -> Result<f64> {
    clock.validate()?;
    if omega_max < omega_min {
        return Err(Error::config(format!(
            "omega_max ({omega_max}) is below omega_min ({omega_min})"
        )));
    }
    Ok(interpolate(&clock, omega_max, omega_min))
}

/// Cognitive coefficient falls from `c1_max` to `c1_min` while the social
/// one rises from `c2_min` to `c2_max`.
pub fn tvac_coeffs(clock: IterationClock, spec: &ScheduleSpec) -> Result<(f64, f64)> {
    clock.validate()?;
    if spec.kind != ScheduleKind::Tvac {
        return Err(Error::config(format!(
            "tvac coefficients requested from a {} schedule",
            spec.kind.as_str()
        )));
    }
    let c1 = interpolate(&clock, spec.c1_max, spec.c1_min);
    let c2 = interpolate(&clock, spec.c2_min, spec.c2_max);
    Ok((c1, c2))
}

pub fn coefficients_at(spec: &ScheduleSpec, clock: IterationClock) -> Result<Coefficients> {
    clock.validate()?;
    let coeffs = match spec.kind {
        ScheduleKind::Constant => Coefficients {
            omega: spec.omega_const,
            c1: spec.c1_const,
            c2: spec.c2_const,
        },
        ScheduleKind::Ldiw => Coefficients {
            omega: ldiw_weight(clock, spec.omega_max, spec.omega_min)?,
            c1: spec.c1_const,
            c2: spec.c2_const,
        },
        ScheduleKind::Tvac => {
            let (c1, c2) = tvac_coeffs(clock, spec)?;
            Coefficients {
                omega: ldiw_weight(clock, spec.omega_max, spec.omega_min)?,
                c1,
                c2,
            }
        }
    };
    Ok(coeffs)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn clock(t: usize, t_max: usize) -> IterationClock {
        IterationClock::new(t, t_max).unwrap()
    }

    #[test]
    fn ldiw_endpoints_and_midrun() {
        assert_eq!(ldiw_weight(clock(0, 125), 0.9, 0.4).unwrap(), 0.9);
        assert_eq!(ldiw_weight(clock(125, 125), 0.9, 0.4).unwrap(), 0.4);
        let mid = ldiw_weight(clock(50, 125), 0.9, 0.4).unwrap();
        assert!((mid - 0.7).abs() < 1e-12, "{mid}");
    }

    #[test]
    fn zero_t_max_is_a_config_error() {
        let bad = IterationClock { t: 0, t_max: 0 };
        assert!(matches!(ldiw_weight(bad, 0.9, 0.4), Err(Error::Config(_))));
        assert!(tvac_coeffs(bad, &ScheduleSpec::tvac()).is_err());
        assert!(IterationClock::new(3, 2).is_err());
    }

    #[test]
    fn tvac_endpoints_and_midpoint() {
        let spec = ScheduleSpec::tvac();
        assert_eq!(tvac_coeffs(clock(0, 100), &spec).unwrap(), (2.5, 0.5));
        assert_eq!(tvac_coeffs(clock(100, 100), &spec).unwrap(), (0.5, 2.5));
        assert_eq!(tvac_coeffs(clock(50, 100), &spec).unwrap(), (1.5, 1.5));
    }

    #[test]
    fn tvac_requires_tvac_kind() {
        assert!(tvac_coeffs(clock(0, 10), &ScheduleSpec::ldiw()).is_err());
    }

    #[test]
    fn constant_kind_ignores_time() {
        let spec = ScheduleSpec {
            omega_const: 0.729,
            c1_const: 1.494,
            c2_const: 1.494,
            ..ScheduleSpec::constant()
        };
        for t in 0..=30 {
            let c = coefficients_at(&spec, clock(t, 30)).unwrap();
            assert_eq!((c.omega, c.c1, c.c2), (0.729, 1.494, 1.494));
        }
    }

    #[test]
    fn ldiw_kind_keeps_constant_accelerations() {
        let spec = ScheduleSpec::ldiw();
        let c = coefficients_at(&spec, clock(125, 125)).unwrap();
        assert_eq!(
            (c.omega, c.c1, c.c2),
            (spec.omega_min, spec.c1_const, spec.c2_const)
        );
    }

    #[test]
    fn tvac_kind_starts_at_extremes() {
        let spec = ScheduleSpec::tvac();
        let c = coefficients_at(&spec, clock(0, 125)).unwrap();
        assert_eq!(
            (c.omega, c.c1, c.c2),
            (spec.omega_max, spec.c1_max, spec.c2_min)
        );
    }

    #[test]
    fn kind_parses_from_str() {
        assert_eq!("tvac".parse::<ScheduleKind>().unwrap(), ScheduleKind::Tvac);
        assert!("adaptive".parse::<ScheduleKind>().is_err());
    }

    #[test]
    fn violations_list_every_problem() {
        let spec = ScheduleSpec {
            kind: ScheduleKind::Tvac,
            omega_max: 0.1,
            omega_min: 0.5,
            c1_max: 0.1,
            c2_min: -1.0,
            ..ScheduleSpec::default()
        };
        assert_eq!(spec.violations().len(), 3);
    }

    proptest! {
        #[test]
        fn tvac_is_monotone(
            t_max in 1usize..400,
            w in (0.0f64..1.0, 0.0f64..1.0),
            c1 in (0.0f64..3.0, 0.0f64..3.0),
            c2 in (0.0f64..3.0, 0.0f64..3.0),
        ) {
            let spec = ScheduleSpec {
                kind: ScheduleKind::Tvac,
                omega_max: w.0.max(w.1), omega_min: w.0.min(w.1),
                c1_max: c1.0.max(c1.1), c1_min: c1.0.min(c1.1),
                c2_max: c2.0.max(c2.1), c2_min: c2.0.min(c2.1),
                ..ScheduleSpec::default()
            };
            let mut prev = coefficients_at(&spec, clock(0, t_max)).unwrap();
            prop_assert_eq!(prev.omega, spec.omega_max);
            for t in 1..=t_max {
                let cur = coefficients_at(&spec, clock(t, t_max)).unwrap();
                prop_assert!(cur.omega <= prev.omega);
                prop_assert!(cur.c1 <= prev.c1);
                prop_assert!(cur.c2 >= prev.c2);
                prev = cur;
            }
            prop_assert_eq!((prev.omega, prev.c1, prev.c2), (spec.omega_min, spec.c1_min, spec.c2_max));
        }
    }
}
