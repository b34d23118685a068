//! Heat-equation (Fokker–Planck) coefficients of the phase-space description
//! and their consistency with the two-state jump process.
//!
//! The inversion variable is `m = rho_ee - rho_gg`, so `m = +1` is the excited
//! state and relaxes through `e -> g` jumps at rate `kappa_1`.

use serde::{Deserialize, Serialize};

use crate::dynamics::master::{generator_apply, Bath};
use crate::dynamics::table::{alpha_lambda, analytic_state, eta_over_alpha, table_one_coefficients};
use crate::error::{Error, Result};
use crate::qmath::diag_real;
use crate::states::{BathParams, ProjectileKind};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FPCoefficients {
    /// Coefficient of the polarization diffusion term.
    pub d_polarization: f64,
    /// Coefficient of the mixed inversion–polarization terms.
    pub drift_coupling: f64,
    pub d_inversion_const: f64,
    pub d_inversion_slope: f64,
}

impl FPCoefficients {
    /// Inversion diffusion `(1 + m (p_g - p_e) + 2 alpha lambda) eta / alpha * rate`.
    pub fn d_inversion(&self, m: f64) -> f64 {
        self.d_inversion_const + self.d_inversion_slope * m
    }
}

/// Coefficients split into the purely thermal part and the `alpha lambda` part.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct HeatEquationSplit {
    pub total: FPCoefficients,
    pub thermal: FPCoefficients,
    pub coherent: FPCoefficients,
}

fn require_discordant(params: &BathParams) -> Result<()> {
    if params.kind != ProjectileKind::Discordant {
        return Err(Error::UnsupportedConfiguration(format!(
            "heat-equation coefficients need discordant or product projectiles, got {:?}",
            params.kind
        )));
    }
    params.check()
}

pub fn heat_equation_split(params: &BathParams) -> Result<HeatEquationSplit> {
    require_discordant(params)?;
    let (_, al) = alpha_lambda(params)?;
    let (p_g, p_e) = params.gibbs();
    let k = params.rate_p * eta_over_alpha(params.scenario, params.j_tau());
    let thermal = FPCoefficients {
        d_polarization: p_e * k,
        drift_coupling: -2.0 * p_e * k,
        d_inversion_const: k,
        d_inversion_slope: (p_g - p_e) * k,
    };
    let coherent = FPCoefficients {
        d_polarization: al * k,
        drift_coupling: -2.0 * al * k,
        d_inversion_const: 2.0 * al * k,
        d_inversion_slope: 0.0,
    };
    let total = FPCoefficients {
        d_polarization: (p_e + al) * k,
        drift_coupling: -2.0 * (p_e + al) * k,
        d_inversion_const: (1.0 + 2.0 * al) * k,
        d_inversion_slope: (p_g - p_e) * k,
    };
    Ok(HeatEquationSplit {
        total,
        thermal,
        coherent,
    })
}

pub fn heat_equation_coefficients(params: &BathParams) -> Result<FPCoefficients> {
    Ok(heat_equation_split(params)?.total)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MomentReport {
    /// Jump rates read off the exact collision channel.
    pub kappa_1: f64,
    pub kappa_2: f64,
    /// `max_{m = ±1} |2 D_m(m) - M_2(m)|`, with `M_2 = sum rate (dm)^2 = 4 kappa_state`.
    pub kramers_moyal: f64,
    /// Largest `|d<m>/dt - [(kappa_2 - kappa_1) - (kappa_1 + kappa_2) <m>]|`
    /// along the closed-form trajectory, `d<m>/dt` from the brute-force generator.
    pub first_moment: f64,
    /// `|(kappa_1 + kappa_2) - decay_rate|`.
    pub relaxation_rate: f64,
    /// Largest gap between the solved first-moment equation and the closed-form
    /// population difference.
    pub trajectory: f64,
}

impl MomentReport {
    pub fn max_residual(&self) -> f64 {
        self.kramers_moyal.max(self.first_moment).max(self.relaxation_rate)
    }

    pub fn passed(&self) -> bool {
        self.max_residual() < 1e-12 && self.trajectory < 1e-10
    }
}

const PROBE_TIMES: [f64; 6] = [0.0, 0.1, 0.5, 1.0, 5.0, 20.0];

/// Checks the heat-equation coefficients against the jump process built from
/// the exact collision channel.
pub fn moment_consistency_check(params: &BathParams) -> Result<MomentReport> {
    let fp = heat_equation_coefficients(params)?;
    let coef = table_one_coefficients(params)?;
    let bath = Bath::from_params(params)?;
    let kappa_2 = bath.rate * bath.channel(&diag_real(&[1.0, 0.0]))[(1, 1)].re;
    let kappa_1 = bath.rate * bath.channel(&diag_real(&[0.0, 1.0]))[(0, 0)].re;

    let kramers_moyal = (2.0 * fp.d_inversion(1.0) - 4.0 * kappa_1)
        .abs()
        .max((2.0 * fp.d_inversion(-1.0) - 4.0 * kappa_2).abs());

    let beta_s0 = 0.5 * params.beta_b;
    let total = kappa_1 + kappa_2;
    let m_inf = (kappa_2 - kappa_1) / total;
    let (mut first_moment, mut trajectory) = (0.0_f64, 0.0_f64);
    let mut m0 = None;
    for t in PROBE_TIMES {
        let rho = analytic_state(t, beta_s0, params)?;
        let pops = rho.populations();
        let m = pops[1] - pops[0];
        let m0 = *m0.get_or_insert(m);
        let g = generator_apply(&rho, std::slice::from_ref(&bath))?;
        let dm = g[(1, 1)].re - g[(0, 0)].re;
        first_moment = first_moment.max((dm - ((kappa_2 - kappa_1) - total * m)).abs());
        let solved = m_inf + (m0 - m_inf) * (-total * t).exp();
        trajectory = trajectory.max((solved - m).abs());
    }

    Ok(MomentReport {
        kappa_1,
        kappa_2,
        kramers_moyal,
        first_moment,
        relaxation_rate: (total - coef.decay_rate).abs(),
        trajectory,
    })
}
