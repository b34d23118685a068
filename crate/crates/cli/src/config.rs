//! Run configuration: TOML file, command-line overrides, validation.

use std::f64::consts::PI;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use qrayleigh::measures::LogUnit;
use qrayleigh::states::coherence_bounds;
use qrayleigh::{BathParams, ProjectileKind, QubitSpec, Scenario};

use crate::error::{CliError, CliResult};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Experiment {
    Fig3,
    Fig4,
    Fig5,
    Fig6,
    Fig7,
    Onsager,
    Checks,
    Sweep,
}

impl Experiment {
    pub fn name(self) -> &'static str {
        match self {
            Experiment::Fig3 => "fig3",
            Experiment::Fig4 => "fig4",
            Experiment::Fig5 => "fig5",
            Experiment::Fig6 => "fig6",
            Experiment::Fig7 => "fig7",
            Experiment::Onsager => "onsager",
            Experiment::Checks => "checks",
            Experiment::Sweep => "sweep",
        }
    }

    pub fn is_figure(self) -> bool {
        !matches!(self, Experiment::Checks | Experiment::Sweep)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct QubitConfig {
    pub e_g: f64,
    pub e_e: f64,
}

impl Default for QubitConfig {
    fn default() -> Self {
        Self { e_g: 1.0, e_e: 2.0 }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct BathConfig {
    /// Entangled for fig7, discordant otherwise.
    pub kind: Option<ProjectileKind>,
    pub beta_b: f64,
    /// Coherence as a fraction of its positivity bound.
    pub chi: Option<f64>,
    /// Absolute coherence; takes precedence over `chi`.
    pub coherence: Option<f64>,
    /// Restricts figures to one scenario; both by default.
    pub scenario: Option<Scenario>,
    /// Defaults to the figure's `J tau` divided by `tau`.
    pub coupling: Option<f64>,
    pub tau: f64,
    pub rate: f64,
}

impl Default for BathConfig {
    fn default() -> Self {
        Self {
            kind: None,
            beta_b: 2.0,
            chi: None,
            coherence: None,
            scenario: None,
            coupling: None,
            tau: 1.0,
            rate: 1.0,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SystemConfig {
    /// Initial inverse temperature of the qubit; figure default otherwise.
    pub beta_s0: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct GridConfig {
    pub t_max: Option<f64>,
    pub t_points: usize,
    pub chi_points: usize,
    pub j_tau_min: f64,
    pub j_tau_max: f64,
    pub j_tau_points: usize,
    /// Time of the lower panels of the current figures.
    pub t_probe: f64,
    /// `(beta_B, beta_S)` pairs of the intra-collision figure.
    pub beta_pairs: Vec<[f64; 2]>,
    pub snapshot_points: usize,
    pub onsager_betas: Vec<f64>,
}

impl Default for GridConfig {
    fn default() -> Self {
        Self {
            t_max: None,
            t_points: 41,
            chi_points: 21,
            j_tau_min: 0.05,
            j_tau_max: PI,
            j_tau_points: 32,
            t_probe: 0.1,
            beta_pairs: vec![[10.0, 10.0], [10.0, 4.0], [4.0, 4.0], [4.0, 2.0]],
            snapshot_points: 101,
            onsager_betas: vec![0.01, 0.02, 0.05, 0.1, 0.2, 0.5, 1.0, 2.0],
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ChecksConfig {
    pub n_traj: usize,
    pub stochastic_configs: usize,
    pub draws: usize,
}

impl Default for ChecksConfig {
    fn default() -> Self {
        Self {
            n_traj: 10_000,
            stochastic_configs: 10,
            draws: 100,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub experiment: Experiment,
    #[serde(default)]
    pub seed: u64,
    #[serde(default)]
    pub units: LogUnit,
    #[serde(default)]
    pub output: Option<PathBuf>,
    #[serde(default)]
    pub qubit: QubitConfig,
    #[serde(default)]
    pub bath: BathConfig,
    #[serde(default)]
    pub system: SystemConfig,
    #[serde(default)]
    pub grid: GridConfig,
    #[serde(default)]
    pub checks: ChecksConfig,
}

fn bad(msg: impl Into<String>) -> CliError {
    CliError::Config(msg.into())
}

fn positive(name: &str, v: f64) -> CliResult<()> {
    if v > 0.0 && v.is_finite() {
        Ok(())
    } else {
        Err(bad(format!("{name} must be positive and finite, got {v}")))
    }
}

fn non_empty(name: &str, n: usize) -> CliResult<()> {
    if n == 0 {
        Err(bad(format!("{name} must be at least 1")))
    } else {
        Ok(())
    }
}

impl RunConfig {
    pub fn from_toml(text: &str) -> CliResult<Self> {
        toml::from_str(text).map_err(|e| bad(format!("invalid config: {e}")))
    }

    pub fn load(path: &Path) -> CliResult<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| bad(format!("cannot read {}: {e}", path.display())))?;
        Self::from_toml(&text)
    }

    pub fn spec(&self) -> CliResult<QubitSpec> {
        Ok(QubitSpec::new(self.qubit.e_g, self.qubit.e_e)?)
    }

    /// `J tau` used by the figure when no coupling is configured.
    pub fn default_j_tau(&self) -> f64 {
        match self.experiment {
            Experiment::Fig7 => 0.2,
            _ => 0.05,
        }
    }

    pub fn kind(&self) -> ProjectileKind {
        self.bath.kind.unwrap_or(match self.experiment {
            Experiment::Fig7 => ProjectileKind::Entangled,
            _ => ProjectileKind::Discordant,
        })
    }

    pub fn coupling(&self) -> f64 {
        self.bath.coupling.unwrap_or(self.default_j_tau() / self.bath.tau)
    }

    pub fn scenarios(&self) -> Vec<Scenario> {
        match self.bath.scenario {
            Some(s) => vec![s],
            None => vec![Scenario::Sequential, Scenario::Collective],
        }
    }

    pub fn beta_s0(&self) -> f64 {
        self.system.beta_s0.unwrap_or(match self.experiment {
            Experiment::Fig5 => 1.0 / 0.6,
            _ => self.bath.beta_b,
        })
    }

    pub fn t_max(&self) -> f64 {
        self.grid.t_max.unwrap_or(match self.experiment {
            Experiment::Fig4 | Experiment::Fig5 => 300.0,
            Experiment::Fig6 => PI / (2.0 * 2f64.sqrt() * self.coupling()),
            Experiment::Fig7 => 10.0,
            _ => 10.0,
        })
    }

    /// Absolute coherence for `kind` at `beta_B`, from `coherence` or `chi`.
    pub fn coherence_for(&self, kind: ProjectileKind, beta_b: f64, default_chi: f64) -> CliResult<f64> {
        if let Some(c) = self.bath.coherence {
            return Ok(c);
        }
        let (_, hi) = coherence_bounds(kind, beta_b, &self.spec()?)?;
        Ok(self.bath.chi.unwrap_or(default_chi) * hi)
    }

    /// Bath with the configured collision settings.
    pub fn bath_params(
        &self,
        kind: ProjectileKind,
        beta_b: f64,
        coherence: f64,
        scenario: Scenario,
        coupling: f64,
        tau: f64,
    ) -> CliResult<BathParams> {
        Ok(BathParams::new(
            kind,
            beta_b,
            coherence,
            scenario,
            coupling,
            tau,
            self.bath.rate,
            self.spec()?,
        )?)
    }

    pub fn validate(&self) -> CliResult<()> {
        let spec = self.spec()?;
        positive("bath.beta_b", self.bath.beta_b)?;
        positive("bath.tau", self.bath.tau)?;
        if !(self.bath.rate >= 0.0) || !self.bath.rate.is_finite() {
            return Err(bad(format!("bath.rate must be >= 0, got {}", self.bath.rate)));
        }
        if let Some(j) = self.bath.coupling {
            if !j.is_finite() {
                return Err(bad("bath.coupling must be finite"));
            }
        }
        if let Some(chi) = self.bath.chi {
            if !(-1.0..=1.0).contains(&chi) {
                return Err(bad(format!("bath.chi must lie in [-1, 1], got {chi}")));
            }
        }
        if let Some(b) = self.system.beta_s0 {
            positive("system.beta_s0", b)?;
        }
        if let Some(c) = self.bath.coherence {
            BathParams::new(
                self.kind(),
                self.bath.beta_b,
                c,
                Scenario::Collective,
                self.coupling(),
                self.bath.tau,
                self.bath.rate,
                spec,
            )?;
        }
        let g = &self.grid;
        positive("grid.t_max", self.t_max())?;
        non_empty("grid.t_points", g.t_points)?;
        non_empty("grid.chi_points", g.chi_points)?;
        non_empty("grid.j_tau_points", g.j_tau_points)?;
        non_empty("grid.snapshot_points", g.snapshot_points)?;
        if !(g.j_tau_min >= 0.0) || !(g.j_tau_max >= g.j_tau_min) || !g.j_tau_max.is_finite() {
            return Err(bad(format!(
                "grid J tau range [{}, {}] is invalid",
                g.j_tau_min, g.j_tau_max
            )));
        }
        if !(g.t_probe >= 0.0) || !g.t_probe.is_finite() {
            return Err(bad("grid.t_probe must be >= 0"));
        }
        if self.experiment == Experiment::Fig6 && g.beta_pairs.is_empty() {
            return Err(bad("grid.beta_pairs must not be empty"));
        }
        for pair in &g.beta_pairs {
            positive("grid.beta_pairs", pair[0])?;
            positive("grid.beta_pairs", pair[1])?;
        }
        if self.experiment == Experiment::Onsager && g.onsager_betas.is_empty() {
            return Err(bad("grid.onsager_betas must not be empty"));
        }
        for &b in &g.onsager_betas {
            positive("grid.onsager_betas", b)?;
        }
        non_empty("checks.n_traj", self.checks.n_traj)?;
        non_empty("checks.stochastic_configs", self.checks.stochastic_configs)?;
        non_empty("checks.draws", self.checks.draws)?;
        Ok(())
    }
}

/// `n` evenly spaced points from `a` to `b`; `[a]` when `n == 1`.
pub fn linspace(a: f64, b: f64, n: usize) -> Vec<f64> {
    if n == 1 {
        return vec![a];
    }
    (0..n).map(|k| a + (b - a) * k as f64 / (n - 1) as f64).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn minimal_config_uses_defaults() {
        let cfg = RunConfig::from_toml("experiment = \"fig4\"").unwrap();
        cfg.validate().unwrap();
        assert_eq!(cfg.bath.beta_b, 2.0);
        assert_eq!(cfg.coupling(), 0.05);
        assert_eq!(cfg.scenarios().len(), 2);
        assert_eq!(cfg.units, LogUnit::Nats);
    }

    #[test]
    fn unknown_keys_rejected() {
        assert!(RunConfig::from_toml("experiment = \"fig4\"\nbogus = 1").is_err());
        assert!(RunConfig::from_toml("experiment = \"fig9\"").is_err());
    }

    #[test]
    fn out_of_bounds_coherence_rejected() {
        let cfg = RunConfig::from_toml("experiment = \"fig4\"\n[bath]\ncoherence = 0.2").unwrap();
        let err = cfg.validate().unwrap_err();
        assert_eq!(err.exit_code(), 2);
        assert!(err.to_string().contains("lambda_max"));
    }

    #[test]
    fn empty_grid_rejected() {
        let cfg = RunConfig::from_toml("experiment = \"fig4\"\n[grid]\nt_points = 0").unwrap();
        assert!(cfg.validate().is_err());
    }

    #[test]
    fn linspace_endpoints() {
        assert_eq!(linspace(-1.0, 1.0, 3), vec![-1.0, 0.0, 1.0]);
        assert_eq!(linspace(0.5, 2.0, 1), vec![0.5]);
    }
}
