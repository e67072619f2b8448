//! Scenario configuration: a flat `key = value` file, overridden field by
//! field from the command line.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::CliError;

/// Named protocols.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Scenario {
    Epr2,
    /// W state of `N` atoms, `None` when `N` comes from the `atoms` field.
    W(Option<usize>),
    GhzProject,
    QutritProject,
    Custom,
}

impl Scenario {
    pub fn is_projection(self) -> bool {
        matches!(self, Scenario::GhzProject | Scenario::QutritProject)
    }
}

impl FromStr for Scenario {
    type Err = CliError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let lower = s.trim().to_ascii_lowercase();
        Ok(match lower.as_str() {
            "epr2" => Scenario::Epr2,
            "w" | "wn" | "w(n)" => Scenario::W(None),
            "ghz_project" => Scenario::GhzProject,
            "qutrit_project" => Scenario::QutritProject,
            "custom" => Scenario::Custom,
            other => {
                let digits = other
                    .strip_prefix("w(")
                    .and_then(|r| r.strip_suffix(')'))
                    .or_else(|| other.strip_prefix('w'));
                match digits.and_then(|d| d.parse::<usize>().ok()) {
                    Some(n) => Scenario::W(Some(n)),
                    None => {
                        return Err(CliError::Config(format!(
                            "unknown scenario `{s}` (expected epr2, w<N>, ghz_project, qutrit_project or custom)"
                        )))
                    }
                }
            }
        })
    }
}

impl fmt::Display for Scenario {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Scenario::Epr2 => f.write_str("epr2"),
            Scenario::W(Some(n)) => write!(f, "w{n}"),
            Scenario::W(None) => f.write_str("w"),
            Scenario::GhzProject => f.write_str("ghz_project"),
            Scenario::QutritProject => f.write_str("qutrit_project"),
            Scenario::Custom => f.write_str("custom"),
        }
    }
}

/// Raw file / flag values; every field optional so that layers can be merged.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ConfigOverrides {
    pub scenario: Option<String>,
    #[serde(alias = "N")]
    pub atoms: Option<usize>,
    #[serde(alias = "n")]
    pub n_photons: Option<u32>,
    pub mu: Option<u32>,
    pub g10_tau: Option<f64>,
    pub g20_tau: Option<f64>,
    pub delta_tau: Option<f64>,
    #[serde(alias = "T_over_tau")]
    pub t_sep: Option<f64>,
    pub steps: Option<usize>,
    #[serde(alias = "t_freeze_over_tau")]
    pub t_freeze: Option<f64>,
    pub record_every: Option<usize>,
}

impl ConfigOverrides {
    /// Parse config file text. Errors carry the offending line and key.
    pub fn parse(text: &str) -> Result<Self, CliError> {
        toml::from_str(text).map_err(|e| {
            let location = e
                .span()
                .map(|span| {
                    let line = text[..span.start.min(text.len())].matches('\n').count() + 1;
                    format!("line {line}: ")
                })
                .unwrap_or_default();
            CliError::Config(format!("{location}{}", e.message()))
        })
    }

    /// Fields set in `other` win.
    pub fn merge(self, other: ConfigOverrides) -> ConfigOverrides {
        ConfigOverrides {
            scenario: other.scenario.or(self.scenario),
            atoms: other.atoms.or(self.atoms),
            n_photons: other.n_photons.or(self.n_photons),
            mu: other.mu.or(self.mu),
            g10_tau: other.g10_tau.or(self.g10_tau),
            g20_tau: other.g20_tau.or(self.g20_tau),
            delta_tau: other.delta_tau.or(self.delta_tau),
            t_sep: other.t_sep.or(self.t_sep),
            steps: other.steps.or(self.steps),
            t_freeze: other.t_freeze.or(self.t_freeze),
            record_every: other.record_every.or(self.record_every),
        }
    }
}

pub const DEFAULT_G0_TAU: f64 = 15.0;
pub const DEFAULT_T_SEP: f64 = 4.0 / 3.0;
pub const DEFAULT_STEPS: usize = stirap_core::dynamics::DEFAULT_STEPS;
pub const DEFAULT_RECORD_EVERY: usize = 40;

/// A validated scenario. Times are in units of `τ`, couplings in `1/τ`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ScenarioConfig {
    #[serde(serialize_with = "as_display")]
    pub scenario: Scenario,
    pub atoms: usize,
    pub n_photons: u32,
    pub mu: u32,
    pub g10_tau: f64,
    pub g20_tau: f64,
    pub delta_tau: f64,
    pub t_sep: f64,
    pub steps: usize,
    pub t_freeze: Option<f64>,
    pub record_every: usize,
}

fn as_display<S: serde::Serializer>(s: &Scenario, ser: S) -> Result<S::Ok, S::Error> {
    ser.collect_str(s)
}

impl ScenarioConfig {
    /// Standard protocol parameters for `scenario`.
    pub fn defaults(scenario: Scenario) -> Self {
        let (atoms, n_photons) = match scenario {
            Scenario::Epr2 => (2, 1),
            Scenario::W(n) => (n.unwrap_or(3), 1),
            Scenario::GhzProject | Scenario::QutritProject => (2, 2),
            Scenario::Custom => (2, 1),
        };
        Self {
            scenario,
            atoms,
            n_photons,
            mu: 0,
            g10_tau: DEFAULT_G0_TAU,
            g20_tau: DEFAULT_G0_TAU,
            delta_tau: 0.0,
            t_sep: DEFAULT_T_SEP,
            steps: DEFAULT_STEPS,
            t_freeze: scenario.is_projection().then_some(DEFAULT_T_SEP / 2.0),
            record_every: DEFAULT_RECORD_EVERY,
        }
    }

    /// Resolve layered overrides into a validated config.
    pub fn resolve(raw: &ConfigOverrides) -> Result<Self, CliError> {
        let name = raw
            .scenario
            .as_deref()
            .ok_or_else(|| CliError::Config("field `scenario` is required".into()))?;
        let scenario: Scenario = name.parse()?;
        let mut c = Self::defaults(scenario);
        if let Some(v) = raw.atoms {
            c.atoms = v;
        }
        if let Some(v) = raw.n_photons {
            c.n_photons = v;
        }
        if let Some(v) = raw.mu {
            c.mu = v;
        }
        if let Some(v) = raw.g10_tau {
            c.g10_tau = v;
        }
        if let Some(v) = raw.g20_tau {
            c.g20_tau = v;
        }
        if let Some(v) = raw.delta_tau {
            c.delta_tau = v;
        }
        if let Some(v) = raw.t_sep {
            c.t_sep = v;
        }
        if let Some(v) = raw.steps {
            c.steps = v;
        }
        if raw.t_freeze.is_some() {
            c.t_freeze = raw.t_freeze;
        }
        if let Some(v) = raw.record_every {
            c.record_every = v;
        }
        c.validate()?;
        Ok(c)
    }

    pub fn validate(&self) -> Result<(), CliError> {
        let bad = |field: &str, msg: String| Err(CliError::Config(format!("field `{field}`: {msg}")));
        if self.atoms == 0 {
            return bad("atoms", "at least one atom is required".into());
        }
        for (field, v) in [("g10_tau", self.g10_tau), ("g20_tau", self.g20_tau)] {
            if !v.is_finite() || v < 0.0 {
                return bad(field, format!("must be a finite non-negative number, got {v}"));
            }
        }
        if !self.delta_tau.is_finite() {
            return bad("delta_tau", format!("must be finite, got {}", self.delta_tau));
        }
        if !self.t_sep.is_finite() || self.t_sep <= 0.0 {
            return bad("t_sep", format!("must be positive, got {}", self.t_sep));
        }
        if self.steps == 0 {
            return bad("steps", "must be positive".into());
        }
        if self.record_every == 0 {
            return bad("record_every", "must be positive".into());
        }
        match self.scenario {
            Scenario::Epr2 => {
                if self.atoms != 2 {
                    return bad("atoms", format!("epr2 uses two atoms, got {}", self.atoms));
                }
                if self.n_photons != 1 {
                    return bad("n_photons", format!("epr2 starts with one photon, got {}", self.n_photons));
                }
            }
            Scenario::W(n) => {
                if let Some(n) = n {
                    if n != self.atoms {
                        return bad("atoms", format!("scenario w{n} conflicts with atoms = {}", self.atoms));
                    }
                }
                if self.n_photons != 1 {
                    return bad("n_photons", format!("W states start from one photon, got {}", self.n_photons));
                }
            }
            Scenario::GhzProject => {
                if self.atoms < 2 {
                    return bad("atoms", "ghz_project needs at least two atoms".into());
                }
                if (self.n_photons as usize) < self.atoms {
                    return bad(
                        "n_photons",
                        format!("ghz_project needs n ≥ atoms ({} < {})", self.n_photons, self.atoms),
                    );
                }
            }
            Scenario::QutritProject => {
                if self.atoms != 2 {
                    return bad("atoms", format!("qutrit_project uses two atoms, got {}", self.atoms));
                }
                if self.n_photons < 1 {
                    return bad("n_photons", "qutrit_project needs at least one photon".into());
                }
            }
            Scenario::Custom => {}
        }
        if self.scenario.is_projection() {
            match self.t_freeze {
                Some(t) if t.is_finite() => {}
                Some(t) => return bad("t_freeze", format!("must be finite, got {t}")),
                None => return bad("t_freeze", "projection scenarios need a freeze time".into()),
            }
        }
        Ok(())
    }

    /// Numeric fields a sweep may vary. `g0_tau` sets both peak couplings.
    pub const SWEEP_AXES: &'static [&'static str] = &[
        "g0_tau",
        "g10_tau",
        "g20_tau",
        "delta_tau",
        "t_sep",
        "t_freeze",
        "steps",
        "atoms",
        "n_photons",
        "mu",
    ];

    /// Copy with `axis` set to `value`, re-validated.
    pub fn with_axis(&self, axis: &str, value: f64) -> Result<Self, CliError> {
        let integer = |v: f64| -> Result<u64, CliError> {
            if v.fract() != 0.0 || v < 0.0 || !v.is_finite() {
                Err(CliError::Config(format!("axis `{axis}` takes non-negative integers, got {v}")))
            } else {
                Ok(v as u64)
            }
        };
        let mut c = self.clone();
        match axis {
            "g0_tau" => {
                c.g10_tau = value;
                c.g20_tau = value;
            }
            "g10_tau" => c.g10_tau = value,
            "g20_tau" => c.g20_tau = value,
            "delta_tau" => c.delta_tau = value,
            "t_sep" | "T_over_tau" => c.t_sep = value,
            "t_freeze" | "t_freeze_over_tau" => c.t_freeze = Some(value),
            "steps" => c.steps = integer(value)? as usize,
            "atoms" | "N" => {
                c.atoms = integer(value)? as usize;
                if let Scenario::W(Some(_)) = c.scenario {
                    c.scenario = Scenario::W(Some(c.atoms));
                }
            }
            "n_photons" | "n" => c.n_photons = integer(value)? as u32,
            "mu" => c.mu = integer(value)? as u32,
            other => {
                return Err(CliError::Config(format!(
                    "`{other}` is not a numeric field (sweepable: {})",
                    Self::SWEEP_AXES.join(", ")
                )))
            }
        }
        c.validate()?;
        Ok(c)
    }
}
