//! Invariant suite behind `qrayleigh checks`, reported as JSON.

use std::f64::consts::PI;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use qrayleigh::collision::{collective_unitary, excitation_number, sequential_unitary, total_free_hamiltonian};
use qrayleigh::dynamics::{
    analytic_populations, generator_apply, integrate_master_equation, intra_collision_snapshots, lindblad_rates,
    stochastic_trajectories, table_one_coefficients, Bath,
};
use qrayleigh::fpcheck::moment_consistency_check;
use qrayleigh::measures::{entanglement_of_formation, quantum_discord, LogUnit};
use qrayleigh::qmath::{c, commutator, diag_real, max_abs, max_abs_diff, validate_density_matrix, CMatrix};
use qrayleigh::states::{coherence_bounds, projectile_state, thermal_qubit};
use qrayleigh::thermo::{
    entropy_production, extract_onsager_numeric, heat_current, steady_populations, steady_temperature, two_bath_steady,
};
use qrayleigh::{BathParams, DensityMatrix, ProjectileKind, QubitSpec, Scenario};

use crate::config::RunConfig;
use crate::error::{CliError, CliResult};

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CheckOutcome {
    pub name: String,
    pub passed: bool,
    pub residual: f64,
    pub tolerance: f64,
    pub detail: String,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CheckReport {
    pub passed: bool,
    pub seed: u64,
    pub checks: Vec<CheckOutcome>,
}

/// Reference values at `beta_B = 2`, `E = (1, 2)`.
const T_INF_LAMBDA_MAX: f64 = 0.675_255_424_739_586_2;
const EOF_BITS_MU_MAX: f64 = 0.527_065_341_003_161_6;

fn below(name: &str, residual: f64, tolerance: f64, detail: String) -> CheckOutcome {
    CheckOutcome {
        name: name.to_string(),
        passed: residual <= tolerance,
        residual,
        tolerance,
        detail,
    }
}

struct Draws {
    rng: ChaCha8Rng,
    n: usize,
}

impl Draws {
    fn scenario(&mut self) -> Scenario {
        if self.rng.random_bool(0.5) {
            Scenario::Sequential
        } else {
            Scenario::Collective
        }
    }

    fn kind(&mut self) -> ProjectileKind {
        match self.rng.random_range(0..4) {
            0 => ProjectileKind::Classical,
            1 => ProjectileKind::Discordant,
            2 => ProjectileKind::Entangled,
            _ => ProjectileKind::Product,
        }
    }

    fn beta(&mut self) -> f64 {
        self.rng.random_range(0.3..3.0)
    }

    fn bath(&mut self, kind: ProjectileKind) -> CliResult<BathParams> {
        let spec = QubitSpec::default();
        let scenario = self.scenario();
        let beta_b = self.beta();
        let (_, hi) = coherence_bounds(kind, beta_b, &spec)?;
        let coherence = if hi > 0.0 { self.rng.random_range(-hi..hi) } else { 0.0 };
        let coupling = self.rng.random_range(0.2..1.5);
        let tau = self.rng.random_range(0.05..2.0);
        let rate = self.rng.random_range(0.5..2.0);
        Ok(BathParams::new(
            kind, beta_b, coherence, scenario, coupling, tau, rate, spec,
        )?)
    }

    /// Qubit state from a Bloch vector inside the unit ball.
    fn qubit_state(&mut self) -> CliResult<DensityMatrix> {
        let r = self.rng.random_range(0.0..1.0);
        let th = self.rng.random_range(0.0..PI);
        let ph = self.rng.random_range(0.0..2.0 * PI);
        let (x, y, z) = (r * th.sin() * ph.cos(), r * th.sin() * ph.sin(), r * th.cos());
        let m = CMatrix::from_row_slice(
            2,
            2,
            &[
                c(0.5 * (1.0 + z), 0.0),
                c(0.5 * x, -0.5 * y),
                c(0.5 * x, 0.5 * y),
                c(0.5 * (1.0 - z), 0.0),
            ],
        );
        Ok(DensityMatrix::new(m)?)
    }

    fn any_bath(&mut self) -> CliResult<BathParams> {
        let k = self.kind();
        self.bath(k)
    }
}

type Check = fn(&RunConfig, &mut Draws) -> CliResult<CheckOutcome>;

const SUITE: &[(&str, Check)] = &[
    ("config_rejection", config_rejection),
    ("unitary_conservation", unitary_conservation),
    ("projectile_positivity", projectile_positivity),
    ("lindblad_vs_brute_force", lindblad_vs_brute_force),
    ("analytic_vs_master_equation", analytic_vs_master_equation),
    ("stochastic_vs_analytic", stochastic_vs_analytic),
    ("steady_state_stationarity", steady_state_stationarity),
    ("steady_temperature_reference", steady_temperature_reference),
    ("heat_flow_inhibition", heat_flow_inhibition),
    ("entropy_production_non_negative", entropy_production_non_negative),
    ("two_bath_first_law", two_bath_first_law),
    ("onsager_reciprocity", onsager_reciprocity),
    ("kramers_moyal_moments", kramers_moyal_moments),
    ("micro_current_structure", micro_current_structure),
    ("entangled_coherence_population_invariance", entangled_invariance),
    ("measure_references", measure_references),
];

pub fn run_checks(cfg: &RunConfig) -> CliResult<CheckReport> {
    cfg.validate()?;
    let mut checks = Vec::with_capacity(SUITE.len());
    for (k, (name, check)) in SUITE.iter().enumerate() {
        let mut draws = Draws {
            rng: ChaCha8Rng::seed_from_u64(cfg.seed),
            n: cfg.checks.draws,
        };
        draws.rng.set_stream(k as u64);
        let outcome = match check(cfg, &mut draws) {
            Ok(o) => o,
            Err(e) => CheckOutcome {
                name: name.to_string(),
                passed: false,
                residual: f64::NAN,
                tolerance: f64::NAN,
                detail: e.to_string(),
            },
        };
        checks.push(outcome);
    }
    Ok(CheckReport {
        passed: checks.iter().all(|c| c.passed),
        seed: cfg.seed,
        checks,
    })
}

pub fn report_json(report: &CheckReport) -> CliResult<Vec<u8>> {
    let mut bytes = serde_json::to_vec_pretty(report).map_err(|e| CliError::Config(format!("json: {e}")))?;
    bytes.push(b'\n');
    Ok(bytes)
}

fn config_rejection(_: &RunConfig, _: &mut Draws) -> CliResult<CheckOutcome> {
    let (_, hi) = coherence_bounds(ProjectileKind::Discordant, 2.0, &QubitSpec::default())?;
    let text = format!("experiment = \"fig4\"\n[bath]\ncoherence = {}\n", 1.5 * hi);
    let code = match RunConfig::from_toml(&text).and_then(|c| c.validate()) {
        Ok(()) => 0,
        Err(e) => e.exit_code(),
    };
    Ok(CheckOutcome {
        name: "config_rejection".into(),
        passed: code == 2,
        residual: 0.0,
        tolerance: 0.0,
        detail: format!("lambda = 1.5 lambda_max rejected with exit code {code}"),
    })
}

fn unitary_conservation(_: &RunConfig, d: &mut Draws) -> CliResult<CheckOutcome> {
    let h0 = total_free_hamiltonian(&QubitSpec::default(), 3);
    let n = excitation_number(3);
    let mut worst: f64 = 0.0;
    for _ in 0..d.n {
        let j = d.rng.random_range(0.0..2.0);
        let tau = d.rng.random_range(0.0..3.0);
        for u in [sequential_unitary(j, tau)?, collective_unitary(j, tau)?] {
            worst = worst
                .max(u.unitarity_deviation())
                .max(max_abs(&commutator(u.matrix(), &h0)))
                .max(max_abs(&commutator(u.matrix(), &n)));
        }
    }
    Ok(below(
        "unitary_conservation",
        worst,
        1e-12,
        format!("{} draws, both scenarios", d.n),
    ))
}

fn projectile_positivity(_: &RunConfig, d: &mut Draws) -> CliResult<CheckOutcome> {
    let mut worst: f64 = 0.0;
    for _ in 0..d.n {
        let p = d.any_bath()?;
        let r = validate_density_matrix(projectile_state(&p)?.matrix(), 1e-10);
        worst = worst
            .max(r.trace_deviation)
            .max(r.hermiticity_deviation)
            .max(-r.min_eigenvalue);
    }
    Ok(below(
        "projectile_positivity",
        worst,
        1e-10,
        format!("{} draws, all kinds", d.n),
    ))
}

fn lindblad_vs_brute_force(_: &RunConfig, d: &mut Draws) -> CliResult<CheckOutcome> {
    let mut worst: f64 = 0.0;
    for _ in 0..d.n {
        let p = d.bath(ProjectileKind::Discordant)?;
        let rho = d.qubit_state()?;
        let brute = generator_apply(&rho, &[Bath::from_params(&p)?])?;
        worst = worst.max(max_abs_diff(&lindblad_rates(&p)?.generator(rho.matrix()), &brute));
    }
    Ok(below(
        "lindblad_vs_brute_force",
        worst,
        1e-12,
        format!("{} discordant draws on random qubit states", d.n),
    ))
}

fn analytic_vs_master_equation(_: &RunConfig, d: &mut Draws) -> CliResult<CheckOutcome> {
    let grid: Vec<f64> = (0..=20).map(|k| 0.25 * k as f64).collect();
    let draws = d.n.min(50);
    let mut worst: f64 = 0.0;
    for _ in 0..draws {
        let p = d.any_bath()?;
        let beta_s0 = d.beta();
        let traj = integrate_master_equation(&thermal_qubit(beta_s0, &p.qubit)?, &[Bath::from_params(&p)?], &grid)?;
        for (t, rho) in grid.iter().zip(&traj) {
            let (gg, ee) = analytic_populations(*t, beta_s0, &p)?;
            let pops = rho.populations();
            worst = worst.max((pops[0] - gg).abs()).max((pops[1] - ee).abs());
        }
    }
    Ok(below(
        "analytic_vs_master_equation",
        worst,
        1e-8,
        format!("{draws} draws, RK4 integration"),
    ))
}

fn stochastic_vs_analytic(cfg: &RunConfig, d: &mut Draws) -> CliResult<CheckOutcome> {
    let mut worst: f64 = 0.0;
    for c in 0..cfg.checks.stochastic_configs {
        let p = d.any_bath()?;
        let beta_s0 = d.beta();
        let decay = table_one_coefficients(&p)?.decay_rate;
        let t_max = (3.0 / decay).min(20.0);
        let times: Vec<f64> = (0..=15).map(|k| t_max * k as f64 / 15.0).collect();
        let seed = cfg.seed.wrapping_add(c as u64);
        let ens = stochastic_trajectories(
            &thermal_qubit(beta_s0, &p.qubit)?,
            &Bath::from_params(&p)?,
            &times,
            cfg.checks.n_traj,
            seed,
        )?;
        for (i, t) in times.iter().enumerate() {
            let (_, ee) = analytic_populations(*t, beta_s0, &p)?;
            let dev = (ens.mean_excited_population[i] - ee).abs();
            let se = ens.std_error[i];
            let z = if se > 1e-14 {
                dev / se
            } else if dev < 1e-12 {
                0.0
            } else {
                f64::INFINITY
            };
            worst = worst.max(z);
        }
    }
    Ok(below(
        "stochastic_vs_analytic",
        worst,
        4.0,
        format!(
            "{} configs x {} trajectories over three relaxation times; residual in standard errors",
            cfg.checks.stochastic_configs, cfg.checks.n_traj
        ),
    ))
}

fn steady_state_stationarity(_: &RunConfig, d: &mut Draws) -> CliResult<CheckOutcome> {
    let mut worst: f64 = 0.0;
    for _ in 0..d.n {
        let p = d.any_bath()?;
        let t = table_one_coefficients(&p)?;
        let rho = DensityMatrix::new(diag_real(&[t.gamma_g, t.gamma_e]))?;
        worst = worst.max(max_abs(&generator_apply(&rho, &[Bath::from_params(&p)?])?));
    }
    Ok(below(
        "steady_state_stationarity",
        worst,
        1e-12,
        format!("{} draws, all kinds", d.n),
    ))
}

fn steady_temperature_reference(_: &RunConfig, _: &mut Draws) -> CliResult<CheckOutcome> {
    let (_, hi) = coherence_bounds(ProjectileKind::Discordant, 2.0, &QubitSpec::default())?;
    let p = BathParams::discordant(2.0, hi, Scenario::Collective, 0.3)?;
    let formula = steady_temperature(&p)?;
    let (gg, ee) = steady_populations(&[Bath::from_params(&p)?])?;
    let brute = (p.qubit.e_g - p.qubit.e_e) / (ee / gg).ln();
    let residual = (formula - T_INF_LAMBDA_MAX).abs().max((brute - formula).abs());
    Ok(below(
        "steady_temperature_reference",
        residual,
        1e-10,
        format!("T_inf = {formula:.12} at lambda_max, channel fixed point {brute:.12}"),
    ))
}

fn heat_flow_inhibition(_: &RunConfig, d: &mut Draws) -> CliResult<CheckOutcome> {
    let mut worst: f64 = 0.0;
    for _ in 0..d.n {
        let p = d.bath(ProjectileKind::Discordant)?;
        let beta_s0 = 1.0 / steady_temperature(&p)?;
        for t in [0.0, 0.1, 1.0, 10.0] {
            worst = worst.max(heat_current(t, beta_s0, &p)?.abs());
        }
    }
    Ok(below(
        "heat_flow_inhibition",
        worst,
        1e-14,
        format!("{} draws started at T_inf", d.n),
    ))
}

fn entropy_production_non_negative(_: &RunConfig, d: &mut Draws) -> CliResult<CheckOutcome> {
    let mut worst: f64 = 0.0;
    for _ in 0..d.n {
        let p = d.any_bath()?;
        let beta_s0 = d.beta();
        let t = d.rng.random_range(0.0..5.0);
        let r = entropy_production(t, beta_s0, &p)?;
        worst = worst
            .max(-r.entropy_production)
            .max((r.entropy_rate + r.entropy_flux - r.entropy_production).abs());
    }
    Ok(below(
        "entropy_production_non_negative",
        worst,
        1e-12,
        format!("{} draws; residual is max(-Pi, balance error)", d.n),
    ))
}

fn two_bath_first_law(_: &RunConfig, d: &mut Draws) -> CliResult<CheckOutcome> {
    let mut worst: f64 = 0.0;
    for _ in 0..d.n {
        let a = d.bath(ProjectileKind::Discordant)?;
        let beta2 = d.beta();
        let (_, hi) = coherence_bounds(ProjectileKind::Discordant, beta2, &a.qubit)?;
        let l2 = d.rng.random_range(-hi..hi);
        let b = BathParams::new(a.kind, beta2, l2, a.scenario, a.coupling, a.tau, a.rate_p, a.qubit)?;
        let s = two_bath_steady(&a, &b)?;
        worst = worst.max((s.j_h_bath1 + s.j_h_bath2).abs()).max(-s.pi);
    }
    Ok(below(
        "two_bath_first_law",
        worst,
        1e-12,
        format!("{} bath pairs; residual is |J_h + J_h'|", d.n),
    ))
}

fn onsager_reciprocity(_: &RunConfig, _: &mut Draws) -> CliResult<CheckOutcome> {
    let p = BathParams::discordant(0.05, 0.0, Scenario::Collective, 0.05)?;
    let fit = extract_onsager_numeric(&p, 1e-3, 1e-3)?;
    let residual = fit.residual.unwrap_or(f64::INFINITY);
    Ok(below(
        "onsager_reciprocity",
        residual,
        0.02,
        format!("beta_B = 0.05: L_hc = {:.6e}, L_ch = {:.6e}", fit.l_hc, fit.l_ch),
    ))
}

fn kramers_moyal_moments(_: &RunConfig, d: &mut Draws) -> CliResult<CheckOutcome> {
    let draws = d.n.min(50);
    let mut worst: f64 = 0.0;
    for _ in 0..draws {
        let p = d.bath(ProjectileKind::Discordant)?;
        worst = worst.max(moment_consistency_check(&p)?.max_residual());
    }
    Ok(below(
        "kramers_moyal_moments",
        worst,
        1e-10,
        format!("{draws} discordant draws"),
    ))
}

fn micro_current_structure(_: &RunConfig, _: &mut Draws) -> CliResult<CheckOutcome> {
    let spec = QubitSpec::default();
    let coupling = 1.0;
    let tau = PI / (2.0 * 2f64.sqrt() * coupling);
    let (_, hi) = coherence_bounds(ProjectileKind::Discordant, 2.0, &spec)?;
    let p = BathParams::discordant(2.0, hi, Scenario::Collective, tau)?;
    let times: Vec<f64> = (0..=100).map(|k| tau * k as f64 / 100.0).collect();
    let snaps = intra_collision_snapshots(
        &thermal_qubit(2.0, &spec)?,
        &projectile_state(&p)?,
        Scenario::Collective,
        coupling,
        &times,
    )?;
    let residual = snaps
        .iter()
        .map(|s| s.single_qubit_offdiag.max(s.sb_real_part).max(s.b1b2_imag_part))
        .fold(0.0, f64::max)
        .max(heat_current(0.0, 2.0, &p)?.abs());
    Ok(below(
        "micro_current_structure",
        residual,
        1e-12,
        "101 snapshots over one collective collision; currents at the zero".into(),
    ))
}

fn entangled_invariance(_: &RunConfig, d: &mut Draws) -> CliResult<CheckOutcome> {
    let spec = QubitSpec::default();
    let mut worst: f64 = 0.0;
    for _ in 0..d.n.min(50) {
        let beta = d.beta();
        let (_, mu_max) = coherence_bounds(ProjectileKind::Entangled, beta, &spec)?;
        let scenario = d.scenario();
        let mu = d.rng.random_range(-mu_max..mu_max);
        let tau = d.rng.random_range(0.05..2.5);
        let ent = BathParams::new(ProjectileKind::Entangled, beta, mu, scenario, 1.0, tau, 1.0, spec)?;
        let cl = BathParams::new(ProjectileKind::Classical, beta, 0.0, scenario, 1.0, tau, 1.0, spec)?;
        let q = d.rng.random_range(0.0..1.0);
        let rho = DensityMatrix::diagonal(&[q, 1.0 - q])?;
        let ge = generator_apply(&rho, &[Bath::from_params(&ent)?])?;
        let gc = generator_apply(&rho, &[Bath::from_params(&cl)?])?;
        worst = worst.max(max_abs_diff(&ge, &gc));
    }
    Ok(below(
        "entangled_coherence_population_invariance",
        worst,
        1e-12,
        "generator on diagonal states, entangled vs classical pairs".into(),
    ))
}

fn measure_references(_: &RunConfig, _: &mut Draws) -> CliResult<CheckOutcome> {
    let spec = QubitSpec::default();
    let (_, mu_max) = coherence_bounds(ProjectileKind::Entangled, 2.0, &spec)?;
    let ent = BathParams::new(
        ProjectileKind::Entangled,
        2.0,
        mu_max,
        Scenario::Collective,
        1.0,
        1.0,
        1.0,
        spec,
    )?;
    let eof = LogUnit::Bits.from_nats(entanglement_of_formation(&projectile_state(&ent)?)?);
    let cl = BathParams::new(
        ProjectileKind::Classical,
        2.0,
        0.0,
        Scenario::Collective,
        1.0,
        1.0,
        1.0,
        spec,
    )?;
    let discord_c = quantum_discord(&projectile_state(&cl)?)?.value;

    let (_, l_max) = coherence_bounds(ProjectileKind::Discordant, 2.0, &spec)?;
    let mut prev = -1.0;
    let mut drop: f64 = 0.0;
    for k in 0..=20 {
        let p = BathParams::discordant(2.0, l_max * k as f64 / 20.0, Scenario::Collective, 1.0)?;
        let q = quantum_discord(&projectile_state(&p)?)?.value;
        drop = drop.max(prev - q);
        prev = q;
    }
    let eof_err = (eof - EOF_BITS_MU_MAX).abs();
    Ok(CheckOutcome {
        name: "measure_references".into(),
        passed: eof_err < 1e-3 && discord_c <= 1e-12 && drop <= 1e-9,
        residual: eof_err,
        tolerance: 1e-3,
        detail: format!("EoF = {eof:.6} bits, discord(classical) = {discord_c:.1e}, largest discord drop {drop:.1e}"),
    })
}
