//! Figure datasets. Every grid point is evaluated on the worker pool and rows
//! come back in grid order.

use rayon::prelude::*;

use qrayleigh::dynamics::{analytic_state, intra_collision_snapshots, Bath};
use qrayleigh::measures::{
    classical_correlations, entanglement_of_formation, l1_coherence, quantum_discord, rel_entropy_coherence,
};
use qrayleigh::states::{coherence_bounds, projectile_state, thermal_qubit};
use qrayleigh::thermo::{
    anomalous_heat_current, bath_heat_current, coherence_current, extract_onsager_numeric, heat_current,
    onsager_coefficients, population_rates, steady_temperature, temperature_of, OnsagerSetup,
};
use qrayleigh::{DensityMatrix, ProjectileKind, Scenario};

use crate::config::{linspace, Experiment, RunConfig};
use crate::error::{CliError, CliResult};
use crate::output::{num, Table};

/// Finite-difference steps of the numeric Onsager extraction.
pub const ONSAGER_STEPS: (f64, f64) = (1e-3, 1e-3);

pub fn scenario_name(s: Scenario) -> &'static str {
    match s {
        Scenario::Sequential => "sequential",
        Scenario::Collective => "collective",
    }
}

fn kind_name(k: ProjectileKind) -> &'static str {
    match k {
        ProjectileKind::Classical => "classical",
        ProjectileKind::Discordant => "discordant",
        ProjectileKind::Entangled => "entangled",
        ProjectileKind::Product => "product",
    }
}

/// Evaluates `f` over `points` in parallel, keeping grid order.
pub fn par_rows<T, F>(points: &[T], f: F) -> CliResult<Vec<Vec<String>>>
where
    T: Sync,
    F: Fn(&T) -> CliResult<Vec<String>> + Sync + Send,
{
    points.par_iter().map(f).collect()
}

pub fn run_figure(cfg: &RunConfig) -> CliResult<Table> {
    cfg.validate()?;
    match cfg.experiment {
        Experiment::Fig3 => fig3(cfg),
        Experiment::Fig4 => fig4(cfg),
        Experiment::Fig5 => fig5(cfg),
        Experiment::Fig6 => fig6(cfg),
        Experiment::Fig7 => fig7(cfg),
        Experiment::Onsager => onsager(cfg),
        other => Err(CliError::Config(format!("{other:?} is not a figure"))),
    }
}

/// Coherence and correlation measures of the discordant and entangled pairs
/// across the normalized coherence `chi`.
fn fig3(cfg: &RunConfig) -> CliResult<Table> {
    let spec = cfg.spec()?;
    let chis = linspace(-1.0, 1.0, cfg.grid.chi_points);
    let points: Vec<(ProjectileKind, f64)> = [ProjectileKind::Discordant, ProjectileKind::Entangled]
        .into_iter()
        .flat_map(|k| chis.iter().map(move |&c| (k, c)))
        .collect();
    let unit = cfg.units;
    let rows = par_rows(&points, |&(kind, chi)| {
        let (_, hi) = coherence_bounds(kind, cfg.bath.beta_b, &spec)?;
        let p = cfg.bath_params(kind, cfg.bath.beta_b, chi * hi, Scenario::Collective, 1.0, cfg.bath.tau)?;
        let rho = projectile_state(&p)?;
        Ok(vec![
            kind_name(kind).to_string(),
            num(chi),
            num(p.coherence),
            num(unit.from_nats(rel_entropy_coherence(&rho)?)),
            num(l1_coherence(&rho)?),
            num(unit.from_nats(classical_correlations(&rho)?.value)),
            num(unit.from_nats(quantum_discord(&rho)?.value)),
            num(unit.from_nats(entanglement_of_formation(&rho)?)),
        ])
    })?;
    let mut t = Table::new(&[
        "state",
        "chi",
        "coherence",
        "rel_entropy_coherence",
        "l1_coherence",
        "classical_correlations",
        "quantum_discord",
        "entanglement_of_formation",
    ]);
    t.rows = rows;
    Ok(t)
}

#[derive(Clone, Copy)]
struct GridPoint {
    panel: &'static str,
    scenario: Scenario,
    j_tau: f64,
    chi: f64,
    t: f64,
}

/// Time panels on the configured `J tau`, then `J tau` panels at `t_late`.
fn panel_points(cfg: &RunConfig, late_panel: &'static str, t_late: f64) -> Vec<GridPoint> {
    let chis = linspace(-1.0, 1.0, cfg.grid.chi_points);
    let times = linspace(0.0, cfg.t_max(), cfg.grid.t_points);
    let j_taus = linspace(cfg.grid.j_tau_min, cfg.grid.j_tau_max, cfg.grid.j_tau_points);
    let j_tau = cfg.coupling() * cfg.bath.tau;
    let mut out = Vec::new();
    for &scenario in &cfg.scenarios() {
        for &chi in &chis {
            for &t in &times {
                out.push(GridPoint {
                    panel: "time",
                    scenario,
                    j_tau,
                    chi,
                    t,
                });
            }
        }
    }
    for &scenario in &cfg.scenarios() {
        for &jt in &j_taus {
            for &chi in &chis {
                out.push(GridPoint {
                    panel: late_panel,
                    scenario,
                    j_tau: jt,
                    chi,
                    t: t_late,
                });
            }
        }
    }
    out
}

fn point_params(cfg: &RunConfig, g: &GridPoint) -> CliResult<qrayleigh::BathParams> {
    let kind = cfg.kind();
    let coherence = if cfg.bath.coherence.is_some() {
        cfg.coherence_for(kind, cfg.bath.beta_b, g.chi)?
    } else {
        g.chi * coherence_bounds(kind, cfg.bath.beta_b, &cfg.spec()?)?.1
    };
    cfg.bath_params(
        kind,
        cfg.bath.beta_b,
        coherence,
        g.scenario,
        g.j_tau / cfg.bath.tau,
        cfg.bath.tau,
    )
}

fn point_prefix(g: &GridPoint) -> Vec<String> {
    vec![
        g.panel.to_string(),
        scenario_name(g.scenario).to_string(),
        num(g.j_tau),
        num(g.chi),
        num(g.t),
    ]
}

/// Qubit temperature: transients at the configured `J tau`, steady state over `J tau`.
fn fig4(cfg: &RunConfig) -> CliResult<Table> {
    let beta_s0 = cfg.beta_s0();
    let points = panel_points(cfg, "steady", f64::INFINITY);
    let rows = par_rows(&points, |g| {
        let p = point_params(cfg, g)?;
        let temp = if g.t.is_infinite() {
            steady_temperature(&p)?
        } else {
            temperature_of(&analytic_state(g.t, beta_s0, &p)?, &p.qubit)?
        };
        let mut row = point_prefix(g);
        row.push(num(temp));
        Ok(row)
    })?;
    let mut t = Table::new(&["panel", "scenario", "j_tau", "chi", "t", "T_S"]);
    t.rows = rows;
    Ok(t)
}

/// Net and anomalous heat currents: transients, then `J tau` panels at `t_probe`.
fn fig5(cfg: &RunConfig) -> CliResult<Table> {
    let beta_s0 = cfg.beta_s0();
    let points = panel_points(cfg, "probe", cfg.grid.t_probe);
    let rows = par_rows(&points, |g| {
        let p = point_params(cfg, g)?;
        let mut row = point_prefix(g);
        row.push(num(heat_current(g.t, beta_s0, &p)?));
        row.push(num(anomalous_heat_current(g.t, &p)?.value));
        Ok(row)
    })?;
    let mut t = Table::new(&["panel", "scenario", "j_tau", "chi", "t", "j_net", "j_anomalous"]);
    t.rows = rows;
    Ok(t)
}

/// Inside one collective collision: the macroscopic currents for a collision
/// of duration `t`, and the correlations built up after elapsed time `t`.
fn fig6(cfg: &RunConfig) -> CliResult<Table> {
    let spec = cfg.spec()?;
    let coupling = cfg.coupling();
    let times = linspace(0.0, cfg.t_max(), cfg.grid.snapshot_points);
    let kind = cfg.kind();
    let blocks = cfg
        .grid
        .beta_pairs
        .par_iter()
        .map(|&[beta_b, beta_s]| -> CliResult<Vec<Vec<String>>> {
            let coherence = cfg.coherence_for(kind, beta_b, 1.0)?;
            let base = cfg.bath_params(kind, beta_b, coherence, Scenario::Collective, coupling, cfg.bath.tau)?;
            let rho_s = thermal_qubit(beta_s, &spec)?;
            let rho_b = projectile_state(&base)?;
            let snaps = intra_collision_snapshots(&rho_s, &rho_b, Scenario::Collective, coupling, &times)?;
            snaps
                .iter()
                .map(|s| {
                    let p = cfg.bath_params(kind, beta_b, coherence, Scenario::Collective, coupling, s.elapsed)?;
                    Ok(vec![
                        num(beta_b),
                        num(beta_s),
                        num(s.elapsed),
                        num(heat_current(0.0, beta_s, &p)?),
                        num(coherence_current(0.0, beta_s, &p)?),
                        num(s.l1_b1b2),
                        num(s.sb1_upper.im),
                        num(s.sb1_lower.im),
                        num(s.single_qubit_offdiag),
                    ])
                })
                .collect()
        })
        .collect::<CliResult<Vec<_>>>()?;
    let mut t = Table::new(&[
        "beta_b",
        "beta_s",
        "t",
        "jh_macro",
        "jc_macro",
        "l1_b1b2",
        "im_sb1_upper",
        "im_sb1_lower",
        "single_qubit_offdiag",
    ]);
    t.rows = blocks.into_iter().flatten().collect();
    Ok(t)
}

/// Qubit bombarded by pairs of entangled pairs, one five-qubit collision each;
/// temperature and heat current against the entangled coherence `mu`.
fn fig7(cfg: &RunConfig) -> CliResult<Table> {
    let spec = cfg.spec()?;
    let beta_b = cfg.bath.beta_b;
    let (_, mu_max) = coherence_bounds(ProjectileKind::Entangled, beta_b, &spec)?;
    let chis = linspace(0.0, 1.0, cfg.grid.chi_points);
    let mut times = linspace(0.0, cfg.t_max(), cfg.grid.t_points);
    times.push(f64::INFINITY);
    let rho0 = thermal_qubit(cfg.beta_s0(), &spec)?;
    let q_e = rho0.populations()[1];
    let blocks = chis
        .par_iter()
        .map(|&chi| -> CliResult<Vec<Vec<String>>> {
            let mu = chi * mu_max;
            let p = cfg.bath_params(
                ProjectileKind::Entangled,
                beta_b,
                mu,
                Scenario::Collective,
                cfg.coupling(),
                cfg.bath.tau,
            )?;
            let bath = Bath::extended(&p)?;
            let (k_down, k_up) = population_rates(std::slice::from_ref(&bath))?;
            let total = k_down + k_up;
            let e_inf = if total > 0.0 { k_up / total } else { q_e };
            times
                .iter()
                .map(|&t| {
                    let ee = if t.is_infinite() {
                        e_inf
                    } else {
                        e_inf + (q_e - e_inf) * (-total * t).exp()
                    };
                    let rho = DensityMatrix::diagonal(&[1.0 - ee, ee])?;
                    Ok(vec![
                        num(chi),
                        num(mu),
                        num(t),
                        num(temperature_of(&rho, &spec)?),
                        num(bath_heat_current(&rho, std::slice::from_ref(&bath), &spec)?),
                    ])
                })
                .collect()
        })
        .collect::<CliResult<Vec<_>>>()?;
    let mut t = Table::new(&["chi", "mu", "t", "T_S", "J"]);
    t.rows = blocks.into_iter().flatten().collect();
    Ok(t)
}

/// Closed-form transient coefficients against the ones extracted from the
/// exact currents, over bath temperature.
fn onsager(cfg: &RunConfig) -> CliResult<Table> {
    let points: Vec<(Scenario, f64)> = cfg
        .scenarios()
        .into_iter()
        .flat_map(|s| cfg.grid.onsager_betas.iter().map(move |&b| (s, b)))
        .collect();
    let rows = par_rows(&points, |&(scenario, beta)| {
        let p = cfg.bath_params(
            ProjectileKind::Discordant,
            beta,
            0.0,
            scenario,
            cfg.coupling(),
            cfg.bath.tau,
        )?;
        let closed = onsager_coefficients(OnsagerSetup::Transient {
            params: &p,
            beta_s0: beta,
        })?;
        let fit = extract_onsager_numeric(&p, ONSAGER_STEPS.0, ONSAGER_STEPS.1)?;
        Ok(vec![
            scenario_name(scenario).to_string(),
            num(beta),
            num(p.j_tau()),
            num(closed.l_hh),
            num(fit.l_hh),
            num(fit.l_hc),
            num(fit.l_ch),
            num(fit.l_cc),
            num(fit.residual.unwrap_or(f64::NAN)),
            fit.warning.is_some().to_string(),
        ])
    })?;
    let mut t = Table::new(&[
        "scenario", "beta_b", "j_tau", "l_closed", "l_hh", "l_hc", "l_ch", "l_cc", "residual", "warning",
    ]);
    t.rows = rows;
    Ok(t)
}
