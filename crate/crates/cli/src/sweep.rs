//! Onsager coefficient surfaces over the collision strength `J tau`.

use std::f64::consts::PI;

use qrayleigh::dynamics::{alpha, eta};
use qrayleigh::thermo::{onsager_coefficients, OnsagerSetup};
use qrayleigh::{BathParams, ProjectileKind, Scenario};

use crate::config::{linspace, RunConfig};
use crate::error::CliResult;
use crate::figures::{par_rows, scenario_name};
use crate::output::{num, Table};

/// Relative tolerance of the small-`J tau` scaling checks.
pub const SCALING_TOL: f64 = 0.01;
/// Tolerance on the collective coefficient at its first zero, relative to
/// its peak at half that collision strength.
pub const ZERO_TOL: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq)]
pub struct SweepCheck {
    pub name: &'static str,
    pub value: f64,
    pub expected: f64,
    pub passed: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepReport {
    pub checks: Vec<SweepCheck>,
}

impl SweepReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn lines(&self) -> Vec<String> {
        self.checks
            .iter()
            .map(|c| {
                format!(
                    "[{}] {}: {:.6e} (expected {:.6e})",
                    if c.passed { "PASS" } else { "FAIL" },
                    c.name,
                    c.value,
                    c.expected
                )
            })
            .collect()
    }
}

fn transient_l(cfg: &RunConfig, scenario: Scenario, j_tau: f64) -> CliResult<(f64, f64)> {
    let p = cfg.bath_params(
        ProjectileKind::Discordant,
        cfg.bath.beta_b,
        0.0,
        scenario,
        j_tau / cfg.bath.tau,
        cfg.bath.tau,
    )?;
    let one = onsager_coefficients(OnsagerSetup::Transient {
        params: &p,
        beta_s0: p.beta_b,
    })?;
    let two = onsager_coefficients(OnsagerSetup::TwoBath {
        bath: &p,
        bath_prime: &p,
    })?;
    Ok((one.l_hh, two.l_hh))
}

fn prefactor(p: &BathParams) -> f64 {
    let gap = p.qubit.gap();
    gap * gap / 4.0 * p.rate_p
}

pub fn run_sweep(cfg: &RunConfig) -> CliResult<(Table, SweepReport)> {
    cfg.validate()?;
    let j_taus = linspace(cfg.grid.j_tau_min, cfg.grid.j_tau_max, cfg.grid.j_tau_points);
    let points: Vec<(Scenario, f64)> = cfg
        .scenarios()
        .into_iter()
        .flat_map(|s| j_taus.iter().map(move |&x| (s, x)))
        .collect();
    let rows = par_rows(&points, |&(scenario, j_tau)| {
        let (l, l2) = transient_l(cfg, scenario, j_tau)?;
        Ok(vec![
            scenario_name(scenario).to_string(),
            num(j_tau),
            num(alpha(scenario, j_tau)),
            num(eta(scenario, j_tau)),
            num(l),
            num(l2),
            num(l / (j_tau * j_tau)),
        ])
    })?;
    let mut table = Table::new(&[
        "scenario",
        "j_tau",
        "alpha",
        "eta",
        "l_tilde",
        "l_two_bath",
        "l_over_j_tau_sq",
    ]);
    table.rows = rows;
    Ok((table, scaling_report(cfg)?))
}

/// Small-`J tau` fit, sequential/collective ratio and the collective zero,
/// probed independently of the output grid.
pub fn scaling_report(cfg: &RunConfig) -> CliResult<SweepReport> {
    let reference = cfg.bath_params(
        ProjectileKind::Discordant,
        cfg.bath.beta_b,
        0.0,
        Scenario::Collective,
        0.0,
        cfg.bath.tau,
    )?;
    let pre = prefactor(&reference);

    // least squares through the origin of L / prefactor against (J tau)^2
    let probes: Vec<f64> = (0..10).map(|k| 1e-3 * 10f64.powf(k as f64 / 9.0)).collect();
    let (mut sxy, mut sxx) = (0.0, 0.0);
    for &x in &probes {
        let (l, _) = transient_l(cfg, Scenario::Collective, x)?;
        let (u, y) = (x * x, l / pre);
        sxy += u * y;
        sxx += u * u;
    }
    let slope = sxy / sxx;

    let small = probes[0];
    let ratio = transient_l(cfg, Scenario::Sequential, small)?.0 / transient_l(cfg, Scenario::Collective, small)?.0;

    let zero = PI / (2.0 * 2f64.sqrt());
    let at_zero = transient_l(cfg, Scenario::Collective, zero)?.0;
    let scale = transient_l(cfg, Scenario::Collective, zero / 2.0)?.0;

    Ok(SweepReport {
        checks: vec![
            SweepCheck {
                name: "collective small-J tau coefficient",
                value: slope,
                expected: 8.0,
                passed: ((slope - 8.0) / 8.0).abs() < SCALING_TOL,
            },
            SweepCheck {
                name: "sequential/collective ratio",
                value: ratio,
                expected: 0.25,
                passed: ((ratio - 0.25) / 0.25).abs() < SCALING_TOL,
            },
            SweepCheck {
                name: "collective coefficient at first zero",
                value: at_zero,
                expected: 0.0,
                passed: at_zero.abs() <= ZERO_TOL * scale.abs(),
            },
        ],
    })
}
