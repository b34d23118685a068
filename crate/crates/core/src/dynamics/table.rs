//! Closed-form solution of the coarse-grained dynamics and its Lindblad rates.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::qmath::{c, diag_real, sigma_minus, sigma_plus, CMatrix, DensityMatrix};
use crate::states::{BathParams, ProjectileKind, Scenario};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TableOneCoefficients {
    pub alpha: f64,
    pub gamma_g: f64,
    pub gamma_e: f64,
    /// Relaxation rate: `gamma(t) = exp(-decay_rate t)`. Includes `rate_p`.
    pub decay_rate: f64,
    /// `eta / alpha` in its simplified, singularity-free form.
    pub eta_over_alpha: f64,
    pub eta: f64,
}

impl TableOneCoefficients {
    /// `gamma(t)`; `gamma(0) = 1`.
    pub fn gamma(&self, t: f64) -> f64 {
        if t == 0.0 || self.decay_rate == 0.0 {
            1.0
        } else {
            (-self.decay_rate * t).exp()
        }
    }
}

/// Collectivity factor `alpha(J tau)`.
pub fn alpha(scenario: Scenario, j_tau: f64) -> f64 {
    match scenario {
        Scenario::Sequential => {
            let cs = j_tau.cos();
            2.0 * cs / (1.0 + cs * cs)
        }
        Scenario::Collective => 1.0,
    }
}

/// `eta`: `sin(J tau) sin(2 J tau)` sequential, `sin^2(2 sqrt2 J tau)` collective.
pub fn eta(scenario: Scenario, j_tau: f64) -> f64 {
    match scenario {
        Scenario::Sequential => j_tau.sin() * (2.0 * j_tau).sin(),
        Scenario::Collective => (2.0 * 2f64.sqrt() * j_tau).sin().powi(2),
    }
}

/// `eta / alpha`; sequential reduces to `sin^2(J tau)(1 + cos^2(J tau))`,
/// finite at `alpha = 0`.
pub fn eta_over_alpha(scenario: Scenario, j_tau: f64) -> f64 {
    match scenario {
        Scenario::Sequential => {
            let (s, cs) = j_tau.sin_cos();
            s * s * (1.0 + cs * cs)
        }
        Scenario::Collective => eta(scenario, j_tau),
    }
}

/// `alpha * lambda` with the thermal-steady-state condition `1 + 2 alpha lambda > 0`.
pub(crate) fn alpha_lambda(params: &BathParams) -> Result<(f64, f64)> {
    let a = alpha(params.scenario, params.j_tau());
    let lambda = params.lambda();
    let al = a * lambda;
    if 1.0 + 2.0 * al <= 0.0 {
        return Err(Error::NonThermalSteadyState {
            lambda,
            limit: -1.0 / (2.0 * a),
        });
    }
    Ok((a, al))
}

pub fn table_one_coefficients(params: &BathParams) -> Result<TableOneCoefficients> {
    params.check()?;
    let (a, al) = alpha_lambda(params)?;
    let (p_g, p_e) = params.gibbs();
    let scale = 1.0 + 2.0 * al;
    let ea = eta_over_alpha(params.scenario, params.j_tau());
    Ok(TableOneCoefficients {
        alpha: a,
        gamma_g: (p_g + al) / scale,
        gamma_e: (p_e + al) / scale,
        decay_rate: params.rate_p * scale * ea,
        eta_over_alpha: ea,
        eta: eta(params.scenario, params.j_tau()),
    })
}

/// Populations `(rho_gg, rho_ee)` at time `t` from an initial Gibbs state.
pub fn analytic_populations(t: f64, beta_s0: f64, params: &BathParams) -> Result<(f64, f64)> {
    if !(t >= 0.0) {
        return Err(Error::Argument(format!("time must be non-negative, got {t}")));
    }
    let coef = table_one_coefficients(params)?;
    let (q_g, q_e) = params.qubit.gibbs_weights(beta_s0)?;
    if t == 0.0 {
        return Ok((q_g, q_e));
    }
    let g = coef.gamma(t);
    let rho_gg = coef.gamma_g + (q_g - coef.gamma_g) * g;
    let rho_ee = coef.gamma_e + (q_e - coef.gamma_e) * g;
    Ok((rho_gg, rho_ee))
}

/// Qubit state at time `t` (diagonal; `t = inf` gives the steady state).
pub fn analytic_state(t: f64, beta_s0: f64, params: &BathParams) -> Result<DensityMatrix> {
    let (gg, ee) = analytic_populations(t, beta_s0, params)?;
    DensityMatrix::from_matrix_unchecked(diag_real(&[gg, ee]))
}

/// Dissipator rates, Poisson factor included.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LindbladRates {
    /// `e -> g` (jump operator `sigma^-`).
    pub kappa_1: f64,
    /// `g -> e` (jump operator `sigma^+`).
    pub kappa_2: f64,
    pub c_dephase: f64,
}

/// Rates of the heat and dephasing dissipators. Defined for discordant
/// (and product) projectiles only.
pub fn lindblad_rates(params: &BathParams) -> Result<LindbladRates> {
    if params.kind != ProjectileKind::Discordant {
        return Err(Error::UnsupportedConfiguration(format!(
            "Lindblad form is defined for discordant projectiles, got {:?}",
            params.kind
        )));
    }
    params.check()?;
    let (_, al) = alpha_lambda(params)?;
    let (p_g, p_e) = params.gibbs();
    let j_tau = params.j_tau();
    let k = params.rate_p * eta_over_alpha(params.scenario, j_tau);
    let c_dephase = params.rate_p
        * match params.scenario {
            Scenario::Sequential => j_tau.sin().powi(4) / 2.0,
            Scenario::Collective => 2.0 * (p_g * p_g + p_e * p_e) * (2f64.sqrt() * j_tau).sin().powi(4),
        };
    Ok(LindbladRates {
        kappa_1: (p_g + al) * k,
        kappa_2: (p_e + al) * k,
        c_dephase,
    })
}

fn dissipator(op: &CMatrix, rho: &CMatrix) -> CMatrix {
    let op_dag = op.adjoint();
    let n = &op_dag * op;
    op * rho * &op_dag - (&n * rho + rho * &n) * c(0.5, 0.)
}

impl LindbladRates {
    /// Heat dissipator `D_h`.
    pub fn heat_dissipator(&self, rho: &CMatrix) -> CMatrix {
        dissipator(&sigma_minus(), rho) * c(self.kappa_1, 0.) + dissipator(&sigma_plus(), rho) * c(self.kappa_2, 0.)
    }

    /// Dephasing dissipator `D_d`: damps coherences at rate `c`.
    pub fn dephasing_dissipator(&self, rho: &CMatrix) -> CMatrix {
        let mut out = CMatrix::zeros(2, 2);
        out[(0, 1)] = rho[(0, 1)] * (-self.c_dephase);
        out[(1, 0)] = rho[(1, 0)] * (-self.c_dephase);
        out
    }

    /// Interaction-picture generator `D_h + D_d`.
    pub fn generator(&self, rho: &CMatrix) -> CMatrix {
        self.heat_dissipator(rho) + self.dephasing_dissipator(rho)
    }
}
