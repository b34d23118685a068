//! Temperatures, heat and coherence currents, entropy production and the
//! thermocoherent Onsager coefficients.
//!
//! Conventions: a positive heat current flows from the bath into the qubit.
//! Inverse temperatures are reported as `beta = ln(rho_gg / rho_ee) / gap`.

use serde::{Deserialize, Serialize};

use crate::dynamics::master::{generator_apply, Bath};
use crate::dynamics::table::{alpha_lambda, eta_over_alpha, table_one_coefficients};
use crate::error::{Error, Result};
use crate::qmath::{diag_real, CMatrix, DensityMatrix};
use crate::states::{BathParams, ProjectileKind, QubitSpec};

/// Off-diagonal magnitude above which a qubit state has no temperature.
const DIAGONAL_TOL: f64 = 1e-12;

fn diagonal_populations(rho: &DensityMatrix) -> Result<(f64, f64)> {
    if rho.n_qubits() != 1 {
        return Err(Error::Dimension("temperature is defined for a single qubit".into()));
    }
    let m = rho.matrix();
    if m[(0, 1)].norm() > DIAGONAL_TOL {
        return Err(Error::UndefinedTemperature(format!(
            "state carries coherence {:.3e}",
            m[(0, 1)].norm()
        )));
    }
    let (gg, ee) = (m[(0, 0)].re, m[(1, 1)].re);
    if !(gg > 0.0) || !(ee > 0.0) {
        return Err(Error::UndefinedTemperature(format!(
            "populations ({gg}, {ee}) must both be positive"
        )));
    }
    Ok((gg, ee))
}

/// Inverse temperature `ln(rho_gg / rho_ee) / (E_e - E_g)`; zero for equal
/// populations, negative under inversion.
pub fn inverse_temperature_of(rho: &DensityMatrix, spec: &QubitSpec) -> Result<f64> {
    let (gg, ee) = diagonal_populations(rho)?;
    Ok((gg / ee).ln() / spec.gap())
}

/// Temperature of a diagonal qubit state. Equal populations give `+inf`.
pub fn temperature_of(rho: &DensityMatrix, spec: &QubitSpec) -> Result<f64> {
    let (gg, ee) = diagonal_populations(rho)?;
    if gg == ee {
        return Ok(f64::INFINITY);
    }
    Ok((spec.e_g - spec.e_e) / (ee / gg).ln())
}

/// Inverse temperature the qubit reaches with this bath alone.
pub fn steady_inverse_temperature(params: &BathParams) -> Result<f64> {
    let (_, al) = alpha_lambda(params)?;
    let (p_g, p_e) = params.gibbs();
    Ok(((p_g + al) / (p_e + al)).ln() / params.qubit.gap())
}

/// `T_S(inf) = (E_g - E_e) / ln[(p_e + alpha lambda) / (p_g + alpha lambda)]`.
pub fn steady_temperature(params: &BathParams) -> Result<f64> {
    params.check()?;
    let (_, al) = alpha_lambda(params)?;
    let (p_g, p_e) = params.gibbs();
    Ok((params.qubit.e_g - params.qubit.e_e) / ((p_e + al) / (p_g + al)).ln())
}

/// Leading high-temperature form `T_B (1 + 2 alpha lambda)`.
pub fn steady_temperature_high_t(params: &BathParams) -> Result<f64> {
    let (_, al) = alpha_lambda(params)?;
    Ok((1.0 + 2.0 * al) / params.beta_b)
}

/// Total population rates `(kappa_1, kappa_2)` (`e -> g`, `g -> e`) of one or
/// two brute-force baths, read off the exact collision channels.
pub fn population_rates(baths: &[Bath]) -> Result<(f64, f64)> {
    if baths.is_empty() || baths.len() > 2 {
        return Err(Error::Argument(format!(
            "one or two baths supported, got {}",
            baths.len()
        )));
    }
    let (mut down, mut up) = (0.0, 0.0);
    for b in baths {
        up += b.rate * b.channel(&diag_real(&[1.0, 0.0]))[(1, 1)].re;
        down += b.rate * b.channel(&diag_real(&[0.0, 1.0]))[(0, 0)].re;
    }
    Ok((down, up))
}

/// Steady populations `(rho_gg, rho_ee)` of one or two brute-force baths.
pub fn steady_populations(baths: &[Bath]) -> Result<(f64, f64)> {
    let (down, up) = population_rates(baths)?;
    if !(up + down > 0.0) {
        return Err(Error::Domain("baths induce no population transfer".into()));
    }
    Ok((down / (up + down), up / (up + down)))
}

/// `tr[H_S L(rho_S)]` for brute-force baths.
pub fn bath_heat_current(rho_s: &DensityMatrix, baths: &[Bath], spec: &QubitSpec) -> Result<f64> {
    let g: CMatrix = generator_apply(rho_s, baths)?;
    Ok((spec.hamiltonian() * g).trace().re)
}

/// Time-independent amplitude `J_0` of the heat current.
pub fn heat_current_amplitude(beta_s0: f64, params: &BathParams) -> Result<f64> {
    params.check()?;
    let (_, al) = alpha_lambda(params)?;
    let (q_g, q_e) = params.qubit.gibbs_weights(beta_s0)?;
    let (p_g, p_e) = params.gibbs();
    let ea = eta_over_alpha(params.scenario, params.j_tau());
    Ok(((q_g * p_e - q_e * p_g) + al * (q_g - q_e)) * params.qubit.gap() * params.rate_p * ea)
}

/// Heat current `J(t) = J_0 gamma(t)` into the qubit.
pub fn heat_current(t: f64, beta_s0: f64, params: &BathParams) -> Result<f64> {
    if !(t >= 0.0) {
        return Err(Error::Argument(format!("time must be non-negative, got {t}")));
    }
    let coef = table_one_coefficients(params)?;
    Ok(heat_current_amplitude(beta_s0, params)? * coef.gamma(t))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AnomalousCurrent {
    pub value: f64,
    /// False when the projectile kind carries no heat-exchange coherence;
    /// `value` is then exactly zero.
    pub discordant: bool,
}

/// Heat current at equal initial temperatures,
/// `lambda eta (q_g - q_e) (E_e - E_g) rate_p gamma(t)`.
pub fn anomalous_heat_current(t: f64, params: &BathParams) -> Result<AnomalousCurrent> {
    if params.kind != ProjectileKind::Discordant {
        params.check()?;
        return Ok(AnomalousCurrent {
            value: 0.0,
            discordant: false,
        });
    }
    let coef = table_one_coefficients(params)?;
    if !(t >= 0.0) {
        return Err(Error::Argument(format!("time must be non-negative, got {t}")));
    }
    let (p_g, p_e) = params.gibbs();
    let value = params.lambda() * coef.eta * (p_g - p_e) * params.qubit.gap() * params.rate_p * coef.gamma(t);
    Ok(AnomalousCurrent {
        value,
        discordant: true,
    })
}

/// Coherence-potential differences, kept in one place.
pub mod potential {
    /// Transient: bath coherence against the qubit's zero, `alpha (0 - 2 lambda)`.
    pub fn delta_c_transient(alpha: f64, lambda: f64) -> f64 {
        alpha * (0.0 - 2.0 * lambda)
    }

    /// Two baths: `2 alpha (lambda' - lambda)`.
    pub fn delta_c_two_bath(alpha: f64, lambda: f64, lambda_prime: f64) -> f64 {
        2.0 * alpha * (lambda_prime - lambda)
    }

    /// `lambda` realizing a transient difference `delta_c`.
    pub fn lambda_for_transient(alpha: f64, delta_c: f64) -> f64 {
        -delta_c / (2.0 * alpha)
    }
}

/// `(E_e - E_g)^2 eta / (4 alpha) * rate_p`.
fn l_tilde(params: &BathParams) -> f64 {
    let gap = params.qubit.gap();
    gap * gap * eta_over_alpha(params.scenario, params.j_tau()) / 4.0 * params.rate_p
}

/// Linear-response coherence current,
/// `-J_c(t) = gamma(t) (L_ch dbeta - L_cc beta_S(0) dC)`.
pub fn coherence_current(t: f64, beta_s0: f64, params: &BathParams) -> Result<f64> {
    if !(t >= 0.0) {
        return Err(Error::Argument(format!("time must be non-negative, got {t}")));
    }
    let coef = table_one_coefficients(params)?;
    let l = l_tilde(params);
    let dc = potential::delta_c_transient(coef.alpha, params.lambda());
    let dbeta = beta_s0 - params.beta_b;
    Ok(-coef.gamma(t) * (l * dbeta - l * beta_s0 * dc))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CurrentRecord {
    pub t: f64,
    pub j_heat: f64,
    pub j_coherence: f64,
    /// `Pi = J (beta_S(t) - beta_S(inf)) = dS/dt + Phi`.
    pub entropy_production: f64,
    /// `Phi = sum_i dp_i/dt ln Gamma_i`.
    pub entropy_flux: f64,
    /// von Neumann entropy rate `-sum_i dp_i/dt ln p_i`.
    pub entropy_rate: f64,
    pub t_system: f64,
}

/// Currents and entropy balance at time `t` of the single-bath relaxation.
pub fn entropy_production(t: f64, beta_s0: f64, params: &BathParams) -> Result<CurrentRecord> {
    let j = heat_current(t, beta_s0, params)?;
    let rho = crate::dynamics::table::analytic_state(t, beta_s0, params)?;
    let beta_t = inverse_temperature_of(&rho, &params.qubit)?;
    let beta_inf = steady_inverse_temperature(params)?;
    Ok(CurrentRecord {
        t,
        j_heat: j,
        j_coherence: coherence_current(t, beta_s0, params)?,
        entropy_production: j * (beta_t - beta_inf),
        entropy_flux: -j * beta_inf,
        entropy_rate: j * beta_t,
        t_system: temperature_of(&rho, &params.qubit)?,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TwoBathSteady {
    /// Exact steady inverse temperature.
    pub beta_infinity: f64,
    /// `(beta_B + beta_B') / (2 (1 + alpha lambda + alpha lambda'))`.
    pub beta_infinity_high_t: f64,
    pub j_h_bath1: f64,
    pub j_h_bath2: f64,
    /// `L_hh dbeta - L_hc beta_inf dC`.
    pub j_h_linear: f64,
    pub j_c: f64,
    /// `-J_h beta_S|B - J_h' beta_S|B'`.
    pub pi: f64,
}

fn check_matched(a: &BathParams, b: &BathParams) -> Result<()> {
    for p in [a, b] {
        if p.kind != ProjectileKind::Discordant {
            return Err(Error::UnsupportedConfiguration(format!(
                "two-bath analysis needs discordant or product projectiles, got {:?}",
                p.kind
            )));
        }
    }
    if a.coupling != b.coupling
        || a.tau != b.tau
        || a.rate_p != b.rate_p
        || a.scenario != b.scenario
        || a.qubit != b.qubit
    {
        return Err(Error::UnsupportedConfiguration(
            "both baths must share coupling, duration, rate, scenario and qubit".into(),
        ));
    }
    Ok(())
}

/// Largest `|J_h + J_h'|` accepted at the exact steady state.
pub const FIRST_LAW_TOL: f64 = 1e-12;

/// Exact steady state of the qubit between two discordant baths.
pub fn two_bath_steady(bath: &BathParams, bath_prime: &BathParams) -> Result<TwoBathSteady> {
    bath.check()?;
    bath_prime.check()?;
    check_matched(bath, bath_prime)?;
    let (alpha, al) = alpha_lambda(bath)?;
    let (_, al2) = alpha_lambda(bath_prime)?;
    let k = bath.rate_p * eta_over_alpha(bath.scenario, bath.j_tau());
    let (p_g, p_e) = bath.gibbs();
    let (p_g2, p_e2) = bath_prime.gibbs();
    let (k1, k2) = ((p_g + al) * k, (p_e + al) * k);
    let (k1b, k2b) = ((p_g2 + al2) * k, (p_e2 + al2) * k);
    let total = k1 + k2 + k1b + k2b;
    if !(total > 0.0) {
        return Err(Error::Domain("baths induce no population transfer".into()));
    }
    let gamma_g = (k1 + k1b) / total;
    let gamma_e = (k2 + k2b) / total;
    let gap = bath.qubit.gap();
    let j1 = gap * (k2 * gamma_g - k1 * gamma_e);
    let j2 = gap * (k2b * gamma_g - k1b * gamma_e);
    if (j1 + j2).abs() > FIRST_LAW_TOL {
        return Err(Error::Numerical {
            message: format!("steady currents do not balance: {j1} + {j2}"),
            best: Some(j1 + j2),
        });
    }

    let beta_hi = (bath.beta_b + bath_prime.beta_b) / (2.0 * (1.0 + al + al2));
    let l = l_tilde(bath) / 2.0;
    let dbeta = bath_prime.beta_b - bath.beta_b;
    let dc = potential::delta_c_two_bath(alpha, bath.lambda(), bath_prime.lambda());
    let j_lin = l * dbeta - l * beta_hi * dc;
    let pi = -j1 * steady_inverse_temperature(bath)? - j2 * steady_inverse_temperature(bath_prime)?;
    Ok(TwoBathSteady {
        beta_infinity: (gamma_g / gamma_e).ln() / gap,
        beta_infinity_high_t: beta_hi,
        j_h_bath1: j1,
        j_h_bath2: j2,
        j_h_linear: j_lin,
        j_c: -j_lin,
        pi,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum OnsagerRegime {
    TransientHighT,
    TwoBathSteadyHighT,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OnsagerMatrix {
    pub l_hh: f64,
    pub l_hc: f64,
    pub l_ch: f64,
    pub l_cc: f64,
    pub regime: OnsagerRegime,
    pub delta_beta: f64,
    pub delta_c: f64,
    /// Nonlinearity and asymmetry estimate for extracted matrices.
    pub residual: Option<f64>,
    pub warning: Option<String>,
}

#[derive(Debug, Clone, Copy)]
pub enum OnsagerSetup<'a> {
    Transient {
        params: &'a BathParams,
        beta_s0: f64,
    },
    TwoBath {
        bath: &'a BathParams,
        bath_prime: &'a BathParams,
    },
}

/// Closed-form coefficients. Every entry equals `(E_e - E_g)^2 eta / (4 alpha)`
/// times `rate_p` in the transient setting and half of that between two baths.
pub fn onsager_coefficients(setup: OnsagerSetup<'_>) -> Result<OnsagerMatrix> {
    let (l, regime, dbeta, dc) = match setup {
        OnsagerSetup::Transient { params, beta_s0 } => {
            params.check()?;
            let (a, _) = alpha_lambda(params)?;
            (
                l_tilde(params),
                OnsagerRegime::TransientHighT,
                beta_s0 - params.beta_b,
                potential::delta_c_transient(a, params.lambda()),
            )
        }
        OnsagerSetup::TwoBath { bath, bath_prime } => {
            bath.check()?;
            bath_prime.check()?;
            check_matched(bath, bath_prime)?;
            let (a, _) = alpha_lambda(bath)?;
            (
                l_tilde(bath) / 2.0,
                OnsagerRegime::TwoBathSteadyHighT,
                bath_prime.beta_b - bath.beta_b,
                potential::delta_c_two_bath(a, bath.lambda(), bath_prime.lambda()),
            )
        }
    };
    Ok(OnsagerMatrix {
        l_hh: l,
        l_hc: l,
        l_ch: l,
        l_cc: l,
        regime,
        delta_beta: dbeta,
        delta_c: dc,
        residual: None,
        warning: None,
    })
}

/// Residual above which the linear form is flagged.
pub const NONLINEARITY_WARN: f64 = 0.05;

/// Transient linear-response coefficients extracted from the exact `t = 0`
/// currents by central differences about `beta_S(0) = beta_B`, `lambda = 0`.
///
/// Forces are `X_h = dbeta` and `X_c = -beta_S(0) dC`. `L_hh`, `L_hc` come from
/// the heat current; `L_ch`, `L_cc` from `-J_c = (1/2) dPi/dX_c`, with `Pi` the
/// exact entropy production.
pub fn extract_onsager_numeric(
    params_base: &BathParams,
    delta_beta_step: f64,
    delta_c_step: f64,
) -> Result<OnsagerMatrix> {
    if !(delta_beta_step > 0.0) || !(delta_c_step > 0.0) {
        return Err(Error::Argument("finite-difference steps must be positive".into()));
    }
    if params_base.kind != ProjectileKind::Discordant {
        return Err(Error::UnsupportedConfiguration(
            "extraction varies lambda; needs a discordant bath".into(),
        ));
    }
    let base = params_base.with_coherence(0.0)?;
    let (alpha, _) = alpha_lambda(&base)?;
    if alpha.abs() < 1e-8 {
        return Err(Error::Domain(
            "alpha vanishes; coherence potential is degenerate".into(),
        ));
    }
    let beta_b = base.beta_b;

    // exact (J_h, Pi) at t = 0 as functions of the forces
    let point = |x_h: f64, x_c: f64| -> Result<(f64, f64)> {
        let beta_s0 = beta_b + x_h;
        let dc = -x_c / beta_s0;
        let p = base.with_coherence(potential::lambda_for_transient(alpha, dc))?;
        let j = heat_current_amplitude(beta_s0, &p)?;
        let pi = j * (beta_s0 - steady_inverse_temperature(&p)?);
        Ok((j, pi))
    };

    let h = delta_beta_step;
    let k = beta_b * delta_c_step;
    let (jhp, _) = point(h, 0.0)?;
    let (jhm, _) = point(-h, 0.0)?;
    let (jcp, pi_cp) = point(0.0, k)?;
    let (jcm, pi_cm) = point(0.0, -k)?;
    let (_, pi_00) = point(0.0, 0.0)?;
    let (_, pi_pp) = point(h, k)?;
    let (_, pi_pm) = point(h, -k)?;
    let (_, pi_mp) = point(-h, k)?;
    let (_, pi_mm) = point(-h, -k)?;

    let l_hh = (jhp - jhm) / (2.0 * h);
    let l_hc = (jcp - jcm) / (2.0 * k);
    let l_ch = 0.5 * (pi_pp - pi_pm - pi_mp + pi_mm) / (4.0 * h * k);
    let l_cc = 0.5 * (pi_cp - 2.0 * pi_00 + pi_cm) / (k * k);

    let closed = l_tilde(&base);
    let deviation = [l_hh, l_hc, l_ch, l_cc]
        .iter()
        .map(|l| ((l - closed) / closed).abs())
        .fold(0.0, f64::max);
    let asymmetry = ((l_hc - l_ch) / l_hc).abs();
    let residual = deviation.max(asymmetry);
    let warning = (residual > NONLINEARITY_WARN).then(|| {
        format!(
            "linear response residual {residual:.3e} exceeds {NONLINEARITY_WARN}; beta*gap = {:.3} is outside the high-temperature regime",
            beta_b * base.qubit.gap()
        )
    });
    Ok(OnsagerMatrix {
        l_hh,
        l_hc,
        l_ch,
        l_cc,
        regime: OnsagerRegime::TransientHighT,
        delta_beta: delta_beta_step,
        delta_c: delta_c_step,
        residual: Some(residual),
        warning,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dynamics::table::analytic_state;
    use crate::states::{thermal_qubit, Scenario};

    const LAMBDA_MAX: f64 = 0.104_993_585_403_506_52;
    const T_INF: f64 = 0.675_255_424_739_586_2;

    fn discordant(lambda: f64, scenario: Scenario, j_tau: f64) -> BathParams {
        BathParams::discordant(2.0, lambda, scenario, j_tau).unwrap()
    }

    #[test]
    fn temperature_round_trip() {
        let spec = QubitSpec::default();
        let t = temperature_of(&thermal_qubit(2.0, &spec).unwrap(), &spec).unwrap();
        assert!((t - 0.5).abs() < 1e-15);
        let mixed = DensityMatrix::new(diag_real(&[0.5, 0.5])).unwrap();
        assert_eq!(temperature_of(&mixed, &spec).unwrap(), f64::INFINITY);
        let pure = DensityMatrix::new(diag_real(&[1.0, 0.0])).unwrap();
        assert!(matches!(
            temperature_of(&pure, &spec),
            Err(Error::UndefinedTemperature(_))
        ));
    }

    #[test]
    fn steady_temperature_values() {
        let p = discordant(LAMBDA_MAX, Scenario::Collective, 0.3);
        assert!((steady_temperature(&p).unwrap() - T_INF).abs() < 1e-12);
        let rho = analytic_state(f64::INFINITY, 1.0, &p).unwrap();
        assert!((temperature_of(&rho, &p.qubit).unwrap() - T_INF).abs() < 1e-12);
        assert_eq!(
            steady_temperature(&discordant(0.0, Scenario::Collective, 0.3)).unwrap(),
            0.5
        );
        let cold = steady_temperature(&discordant(-LAMBDA_MAX, Scenario::Collective, 0.3)).unwrap();
        assert!((cold - 0.25).abs() < 1e-12);
    }

    #[test]
    fn heat_current_examples() {
        let p = discordant(0.0, Scenario::Collective, 0.05);
        let j = heat_current(0.0, 1.0 / 0.6, &p).unwrap();
        assert!((j - -7.880_489_161_964_58e-4).abs() < 1e-15);
        let eq = heat_current(0.7, 2.0, &p).unwrap();
        assert_eq!(eq, 0.0);
    }

    #[test]
    fn heat_current_matches_generator() {
        for scenario in [Scenario::Sequential, Scenario::Collective] {
            let p = discordant(0.06, scenario, 0.9);
            let bath = Bath::from_params(&p).unwrap();
            for t in [0.0, 0.3, 2.0] {
                let rho = analytic_state(t, 0.8, &p).unwrap();
                let brute = bath_heat_current(&rho, std::slice::from_ref(&bath), &p.qubit).unwrap();
                assert!((heat_current(t, 0.8, &p).unwrap() - brute).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn inhibition() {
        let p = discordant(LAMBDA_MAX, Scenario::Collective, 0.05);
        let beta = 1.0 / steady_temperature(&p).unwrap();
        assert!(heat_current_amplitude(beta, &p).unwrap().abs() < 1e-16);
    }

    #[test]
    fn anomalous_example_and_flag() {
        let p = discordant(LAMBDA_MAX, Scenario::Collective, 0.05);
        let a = anomalous_heat_current(0.0, &p).unwrap();
        assert!((a.value - 1.588_616_744_847_268_4e-3).abs() < 1e-15);
        assert!((a.value - heat_current(0.0, 2.0, &p).unwrap()).abs() < 1e-15);
        let cl = BathParams::new(
            ProjectileKind::Entangled,
            2.0,
            0.3,
            Scenario::Collective,
            1.0,
            0.05,
            1.0,
            QubitSpec::default(),
        )
        .unwrap();
        assert_eq!(
            anomalous_heat_current(0.0, &cl).unwrap(),
            AnomalousCurrent {
                value: 0.0,
                discordant: false
            }
        );
        // alpha < 0 between pi/2 and pi flips the sign
        let neg = discordant(LAMBDA_MAX, Scenario::Sequential, 2.0);
        assert!(anomalous_heat_current(0.0, &neg).unwrap().value < 0.0);
    }

    #[test]
    fn entropy_balance() {
        let p = discordant(LAMBDA_MAX, Scenario::Collective, 0.4);
        for t in [0.0, 0.5, 3.0] {
            let r = entropy_production(t, 2.0, &p).unwrap();
            assert!(r.entropy_production > 0.0);
            assert!((r.entropy_rate + r.entropy_flux - r.entropy_production).abs() < 1e-15);
        }
        let r = entropy_production(f64::INFINITY, 2.0, &p).unwrap();
        assert_eq!(r.entropy_production, 0.0);
    }

    #[test]
    fn coherence_current_opposes_heat() {
        let p = discordant(LAMBDA_MAX, Scenario::Collective, 0.05);
        let jc = coherence_current(0.0, 2.0, &p).unwrap();
        let jh = heat_current(0.0, 2.0, &p).unwrap();
        assert!(jc < 0.0 && jh > 0.0);
        let closed = onsager_coefficients(OnsagerSetup::Transient {
            params: &p,
            beta_s0: 2.0,
        })
        .unwrap();
        assert!((jc.abs() - closed.l_cc * 2.0 * closed.delta_c.abs()).abs() < 1e-15);
        assert_eq!(
            coherence_current(0.0, 2.0, &discordant(0.0, Scenario::Collective, 0.05)).unwrap(),
            0.0
        );
    }

    #[test]
    fn closed_form_coefficients() {
        let col = discordant(0.0, Scenario::Collective, 0.05);
        let seq = discordant(0.0, Scenario::Sequential, 0.05);
        let a = onsager_coefficients(OnsagerSetup::Transient {
            params: &col,
            beta_s0: 2.0,
        })
        .unwrap();
        let b = onsager_coefficients(OnsagerSetup::Transient {
            params: &seq,
            beta_s0: 2.0,
        })
        .unwrap();
        assert!((a.l_hh - 4.966_755_428_684_235e-3).abs() < 1e-16);
        assert!((b.l_hh - 1.247_398_782_707_978e-3).abs() < 1e-16);
        assert_eq!(a.l_hc, a.l_ch);
        let two = onsager_coefficients(OnsagerSetup::TwoBath {
            bath: &col,
            bath_prime: &col.with_beta(2.1).unwrap(),
        })
        .unwrap();
        assert_eq!(two.l_cc, a.l_cc / 2.0);
        assert!(onsager_coefficients(OnsagerSetup::TwoBath {
            bath: &col,
            bath_prime: &seq
        })
        .is_err());
    }

    #[test]
    fn extraction_high_and_low_temperature() {
        let hot = BathParams::discordant(0.05, 0.0, Scenario::Collective, 0.05).unwrap();
        let m = extract_onsager_numeric(&hot, 1e-3, 1e-3).unwrap();
        assert!(m.residual.unwrap() < 0.02, "{m:?}");
        assert!(m.warning.is_none());
        let cold = BathParams::discordant(1.0, 0.0, Scenario::Collective, 0.05).unwrap();
        let m = extract_onsager_numeric(&cold, 1e-3, 1e-3).unwrap();
        assert!(m.warning.is_some(), "{m:?}");
    }

    #[test]
    fn two_bath_cases() {
        let a = discordant(0.05, Scenario::Collective, 0.3);
        let sym = two_bath_steady(&a, &a).unwrap();
        assert!(sym.j_h_bath1.abs() < 1e-16 && sym.j_c.abs() < 1e-16);

        let peltier = two_bath_steady(
            &discordant(LAMBDA_MAX, Scenario::Collective, 0.3),
            &discordant(0.0, Scenario::Collective, 0.3),
        )
        .unwrap();
        assert!(peltier.j_h_bath1 > 0.0);
        assert!((peltier.j_h_bath1 + peltier.j_h_bath2).abs() < 1e-12);
        assert!(peltier.pi > 0.0);

        let b1 = discordant(0.0, Scenario::Collective, 0.3);
        let b2 = b1.with_beta(2.1).unwrap();
        let s = two_bath_steady(&b1, &b2).unwrap();
        assert!(s.j_h_bath1 > 0.0 && s.j_c != 0.0);
    }

    #[test]
    fn two_bath_brute_force_steady_state() {
        let b1 = discordant(LAMBDA_MAX, Scenario::Sequential, 0.7);
        let b2 = discordant(-0.03, Scenario::Sequential, 0.7).with_beta(1.5).unwrap();
        let s = two_bath_steady(&b1, &b2).unwrap();
        let baths = [Bath::from_params(&b1).unwrap(), Bath::from_params(&b2).unwrap()];
        let (gg, ee) = steady_populations(&baths).unwrap();
        assert!(((gg / ee).ln() - s.beta_infinity).abs() < 1e-12);
    }
}
