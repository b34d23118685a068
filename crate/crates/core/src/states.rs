//! Thermal qubit and the three correlated projectile families.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::qmath::{c, diag_real, CMatrix, DensityMatrix};

/// Two-level energies `E_g < E_e`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct QubitSpec {
    pub e_g: f64,
    pub e_e: f64,
}

impl QubitSpec {
    pub fn new(e_g: f64, e_e: f64) -> Result<Self> {
        if !(e_e > e_g) || !e_g.is_finite() || !e_e.is_finite() {
            return Err(Error::Argument(format!(
                "qubit energies need E_e > E_g, got E_g = {e_g}, E_e = {e_e}"
            )));
        }
        Ok(Self { e_g, e_e })
    }

    pub fn gap(&self) -> f64 {
        self.e_e - self.e_g
    }

    /// Diagonal free Hamiltonian.
    pub fn hamiltonian(&self) -> CMatrix {
        diag_real(&[self.e_g, self.e_e])
    }

    /// Gibbs weights `(p_g, p_e)` at inverse temperature `beta`.
    pub fn gibbs_weights(&self, beta: f64) -> Result<(f64, f64)> {
        if !(beta > 0.0) {
            return Err(Error::Argument(format!(
                "inverse temperature must be positive, got {beta}"
            )));
        }
        // 1/(1 + e^{-beta gap}) stays exact in the low-temperature limit.
        let boltz = (-beta * self.gap()).exp();
        let p_g = 1.0 / (1.0 + boltz);
        let p_e = boltz / (1.0 + boltz);
        Ok((p_g, p_e))
    }
}

impl Default for QubitSpec {
    fn default() -> Self {
        Self { e_g: 1.0, e_e: 2.0 }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ProjectileKind {
    /// `rho_C`: perfectly correlated populations, no coherence.
    Classical,
    /// `rho_D`: product of Gibbs states plus a `|ge><eg|` coherence.
    Discordant,
    /// `rho_E`: `rho_C` plus a `|gg><ee|` coherence.
    Entangled,
    /// Uncorrelated pair; normalized to `Discordant` with zero coherence.
    Product,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Scenario {
    Sequential,
    Collective,
}

/// One projectile bath.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BathParams {
    pub kind: ProjectileKind,
    pub beta_b: f64,
    /// `lambda` for discordant pairs, `mu` for entangled pairs, ignored otherwise.
    pub coherence: f64,
    pub scenario: Scenario,
    pub coupling: f64,
    pub tau: f64,
    pub rate_p: f64,
    pub qubit: QubitSpec,
}

impl BathParams {
    /// Builds and checks a bath. `Product` is normalized to `Discordant` with
    /// `coherence = 0`; the coherence of classical pairs is forced to zero.
    #[allow(clippy::too_many_arguments)]
    pub fn new(
        kind: ProjectileKind,
        beta_b: f64,
        coherence: f64,
        scenario: Scenario,
        coupling: f64,
        tau: f64,
        rate_p: f64,
        qubit: QubitSpec,
    ) -> Result<Self> {
        let (kind, coherence) = match kind {
            ProjectileKind::Product => (ProjectileKind::Discordant, 0.0),
            ProjectileKind::Classical => (ProjectileKind::Classical, 0.0),
            k => (k, coherence),
        };
        let params = Self {
            kind,
            beta_b,
            coherence,
            scenario,
            coupling,
            tau,
            rate_p,
            qubit,
        };
        params.check()?;
        Ok(params)
    }

    /// Discordant bath with the figure defaults `E = (1, 2)`, `rate_p = 1`.
    pub fn discordant(beta_b: f64, lambda: f64, scenario: Scenario, j_tau: f64) -> Result<Self> {
        Self::new(
            ProjectileKind::Discordant,
            beta_b,
            lambda,
            scenario,
            j_tau,
            1.0,
            1.0,
            QubitSpec::default(),
        )
    }

    pub fn check(&self) -> Result<()> {
        if !(self.beta_b > 0.0) {
            return Err(Error::Argument(format!(
                "bath inverse temperature must be positive, got {}",
                self.beta_b
            )));
        }
        if !(self.rate_p >= 0.0) || !self.rate_p.is_finite() {
            return Err(Error::Argument(format!(
                "arrival rate must be finite and non-negative, got {}",
                self.rate_p
            )));
        }
        if !(self.tau >= 0.0) || !self.tau.is_finite() || !self.coupling.is_finite() {
            return Err(Error::Argument(format!(
                "collision needs finite J and tau >= 0, got J = {}, tau = {}",
                self.coupling, self.tau
            )));
        }
        QubitSpec::new(self.qubit.e_g, self.qubit.e_e)?;
        let (lo, hi) = coherence_bounds(self.kind, self.beta_b, &self.qubit)?;
        let slack = BOUND_SLACK * hi.max(f64::MIN_POSITIVE);
        if self.coherence < lo - slack || self.coherence > hi + slack || !self.coherence.is_finite() {
            let name = match self.kind {
                ProjectileKind::Entangled => "|mu| <= mu_max = sqrt(p_g p_e)",
                _ => "|lambda| <= lambda_max = p_g p_e",
            };
            return Err(Error::Domain(format!(
                "coherence {} violates positivity bound {name} = {hi}",
                self.coherence
            )));
        }
        Ok(())
    }

    pub fn j_tau(&self) -> f64 {
        self.coupling * self.tau
    }

    pub fn gibbs(&self) -> (f64, f64) {
        self.qubit.gibbs_weights(self.beta_b).expect("checked at construction")
    }

    /// `lambda` for discordant pairs, zero for every other kind.
    pub fn lambda(&self) -> f64 {
        match self.kind {
            ProjectileKind::Discordant => self.coherence,
            _ => 0.0,
        }
    }

    pub fn with_coherence(&self, coherence: f64) -> Result<Self> {
        Self::new(
            self.kind,
            self.beta_b,
            coherence,
            self.scenario,
            self.coupling,
            self.tau,
            self.rate_p,
            self.qubit,
        )
    }

    pub fn with_beta(&self, beta_b: f64) -> Result<Self> {
        Self::new(
            self.kind,
            beta_b,
            self.coherence,
            self.scenario,
            self.coupling,
            self.tau,
            self.rate_p,
            self.qubit,
        )
    }
}

/// Diagonal Gibbs state of the qubit.
pub fn thermal_qubit(beta: f64, spec: &QubitSpec) -> Result<DensityMatrix> {
    let (q_g, q_e) = spec.gibbs_weights(beta)?;
    DensityMatrix::from_matrix_unchecked(diag_real(&[q_g, q_e]))
}

/// Relative slack on the positivity bound, so that a bound quoted to full
/// precision is accepted even when it rounds a few ulps above `p_g p_e`.
pub const BOUND_SLACK: f64 = 1e-12;

/// Admissible coherence interval `[-bound, bound]` from positivity.
pub fn coherence_bounds(kind: ProjectileKind, beta_b: f64, spec: &QubitSpec) -> Result<(f64, f64)> {
    let (p_g, p_e) = spec.gibbs_weights(beta_b)?;
    let bound = match kind {
        ProjectileKind::Classical => 0.0,
        ProjectileKind::Discordant | ProjectileKind::Product => p_g * p_e,
        ProjectileKind::Entangled => (p_g * p_e).sqrt(),
    };
    Ok((-bound, bound))
}

/// Two-qubit projectile state, ordered `(B1, B2)`.
pub fn projectile_state(params: &BathParams) -> Result<DensityMatrix> {
    params.check()?;
    let (p_g, p_e) = params.gibbs();
    let m = match params.kind {
        ProjectileKind::Classical => diag_real(&[p_g, 0.0, 0.0, p_e]),
        ProjectileKind::Discordant | ProjectileKind::Product => {
            let mut m = diag_real(&[p_g * p_g, p_g * p_e, p_g * p_e, p_e * p_e]);
            m[(1, 2)] = c(params.lambda(), 0.0);
            m[(2, 1)] = c(params.lambda(), 0.0);
            m
        }
        ProjectileKind::Entangled => {
            let mut m = diag_real(&[p_g, 0.0, 0.0, p_e]);
            m[(0, 3)] = c(params.coherence, 0.0);
            m[(3, 0)] = c(params.coherence, 0.0);
            m
        }
    };
    DensityMatrix::from_matrix_unchecked(m)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qmath::{max_abs_diff, partial_trace, validate_density_matrix};

    const BETA_B: f64 = 2.0;
    // Gibbs weights at beta = 2, E = (1, 2), evaluated in 30-digit arithmetic.
    const P_G: f64 = 0.880_797_077_977_882_4;
    const P_E: f64 = 0.119_202_922_022_117_56;
    const LAMBDA_MAX: f64 = 0.104_993_585_403_506_52;
    const MU_MAX: f64 = 0.324_027_136_831_942_7;

    fn bath(kind: ProjectileKind, coherence: f64) -> Result<BathParams> {
        BathParams::new(
            kind,
            BETA_B,
            coherence,
            Scenario::Collective,
            1.0,
            0.05,
            1.0,
            QubitSpec::default(),
        )
    }

    #[test]
    fn thermal_qubit_values() {
        let spec = QubitSpec::default();
        let rho = thermal_qubit(2.0, &spec).unwrap();
        let pops = rho.populations();
        assert!((pops[0] - P_G).abs() < 1e-15);
        assert!((pops[1] - P_E).abs() < 1e-15);

        let rho = thermal_qubit(1.0 / 0.6, &spec).unwrap();
        assert!((rho.populations()[0] - 0.841_130_895_119_084_8).abs() < 1e-15);

        let cold = thermal_qubit(50.0, &spec).unwrap().populations();
        assert_eq!(cold[0], 1.0);
        assert!(cold[1] < 2e-22 && cold[1] > 0.0);
    }

    #[test]
    fn thermal_qubit_rejects_nonpositive_beta() {
        let spec = QubitSpec::default();
        assert!(matches!(thermal_qubit(0.0, &spec), Err(Error::Argument(_))));
        assert!(matches!(thermal_qubit(-1.0, &spec), Err(Error::Argument(_))));
    }

    #[test]
    fn qubit_spec_requires_ordered_levels() {
        assert!(QubitSpec::new(2.0, 1.0).is_err());
        assert!(QubitSpec::new(1.0, 1.0).is_err());
    }

    #[test]
    fn bounds() {
        let spec = QubitSpec::default();
        let (lo, hi) = coherence_bounds(ProjectileKind::Discordant, 2.0, &spec).unwrap();
        assert!((hi - LAMBDA_MAX).abs() < 1e-15 && lo == -hi);
        let (lo, hi) = coherence_bounds(ProjectileKind::Entangled, 2.0, &spec).unwrap();
        assert!((hi - MU_MAX).abs() < 1e-15 && lo == -hi);
        assert_eq!(
            coherence_bounds(ProjectileKind::Classical, 2.0, &spec).unwrap(),
            (-0.0, 0.0)
        );
    }

    #[test]
    fn product_is_discordant_at_zero() {
        let p = bath(ProjectileKind::Product, 0.05).unwrap();
        assert_eq!(p.kind, ProjectileKind::Discordant);
        assert_eq!(p.coherence, 0.0);
        let rho = projectile_state(&p).unwrap();
        let expected = diag_real(&[P_G * P_G, P_G * P_E, P_G * P_E, P_E * P_E]);
        assert!(max_abs_diff(rho.matrix(), &expected) < 1e-15);
    }

    #[test]
    fn entangled_at_zero_is_classical() {
        let e = projectile_state(&bath(ProjectileKind::Entangled, 0.0).unwrap()).unwrap();
        let cl = projectile_state(&bath(ProjectileKind::Classical, 0.0).unwrap()).unwrap();
        assert_eq!(e, cl);
    }

    #[test]
    fn discordant_at_lambda_max() {
        let rho = projectile_state(&bath(ProjectileKind::Discordant, LAMBDA_MAX).unwrap()).unwrap();
        let m = rho.matrix();
        assert!((m[(1, 2)].re - 0.104_994).abs() < 1e-6);
        assert!((m[(2, 1)].re - 0.104_994).abs() < 1e-6);
        for (i, want) in [0.775_803_492_574_376, LAMBDA_MAX, LAMBDA_MAX, 0.014_209_336_618_611]
            .iter()
            .enumerate()
        {
            assert!((m[(i, i)].re - want).abs() < 1e-14);
        }
        assert!(validate_density_matrix(m, 1e-10).passed());
        // a single-qubit reduction is the bath Gibbs state
        let first = partial_trace(&rho, &[0]).unwrap();
        assert!(max_abs_diff(first.matrix(), &diag_real(&[P_G, P_E])) < 1e-15);
    }

    #[test]
    fn positivity_bound_enforced() {
        let err = bath(ProjectileKind::Discordant, 1.01 * LAMBDA_MAX).unwrap_err();
        assert!(matches!(err, Error::Domain(ref msg) if msg.contains("lambda_max")));
        let err = bath(ProjectileKind::Entangled, -1.01 * MU_MAX).unwrap_err();
        assert!(matches!(err, Error::Domain(ref msg) if msg.contains("mu_max")));
        assert!(bath(ProjectileKind::Discordant, -LAMBDA_MAX).is_ok());
    }

    #[test]
    fn beyond_bound_state_is_not_positive() {
        // Build rho_D by hand just beyond lambda_max: middle block eigenvalue p_g p_e - lambda < 0.
        let lambda = 1.01 * LAMBDA_MAX;
        let mut m = diag_real(&[P_G * P_G, P_G * P_E, P_G * P_E, P_E * P_E]);
        m[(1, 2)] = c(lambda, 0.);
        m[(2, 1)] = c(lambda, 0.);
        let report = validate_density_matrix(&m, 1e-10);
        assert!(!report.positive_ok());
        assert!((report.min_eigenvalue - (P_G * P_E - lambda)).abs() < 1e-14);
    }

    #[test]
    fn entangled_reduction_independent_of_mu() {
        let a = projectile_state(&bath(ProjectileKind::Entangled, 0.0).unwrap()).unwrap();
        let b = projectile_state(&bath(ProjectileKind::Entangled, MU_MAX).unwrap()).unwrap();
        let ra = partial_trace(&a, &[0]).unwrap();
        let rb = partial_trace(&b, &[0]).unwrap();
        assert!(max_abs_diff(ra.matrix(), rb.matrix()) < 1e-16);
    }
}
