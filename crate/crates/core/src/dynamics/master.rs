//! Brute-force master-equation generator built from the collision channel,
//! and its fixed-step RK4 integration.

use std::sync::Arc;

use nalgebra::{Matrix4, Vector4};

use crate::collision::{apply_channel, cached_unitary, CollisionScenario, CollisionUnitary, SequentialOrder};
use crate::error::{Error, Result};
use crate::qmath::{c, validate_density_matrix, CMatrix, DensityMatrix, C64};
use crate::states::{projectile_state, BathParams};

/// A stream of identical projectiles hitting the qubit at Poisson rate `rate`.
#[derive(Debug, Clone)]
pub struct Bath {
    pub rate: f64,
    unitary: Arc<CollisionUnitary>,
    projectile: DensityMatrix,
}

impl Bath {
    pub fn new(rate: f64, unitary: Arc<CollisionUnitary>, projectile: DensityMatrix) -> Result<Self> {
        if !(rate >= 0.0) || !rate.is_finite() {
            return Err(Error::Argument(format!("arrival rate must be >= 0, got {rate}")));
        }
        if projectile.n_qubits() + 1 != unitary.n_qubits() {
            return Err(Error::Dimension(format!(
                "{}-qubit projectile does not fit a {}-qubit collision",
                projectile.n_qubits(),
                unitary.n_qubits()
            )));
        }
        Ok(Self {
            rate,
            unitary,
            projectile,
        })
    }

    pub fn from_params(params: &BathParams) -> Result<Self> {
        Self::from_params_ordered(params, SequentialOrder::default())
    }

    pub fn from_params_ordered(params: &BathParams, order: SequentialOrder) -> Result<Self> {
        let unitary = cached_unitary(params.scenario.into(), params.coupling, params.tau, order)?;
        Self::new(params.rate_p, unitary, projectile_state(params)?)
    }

    /// Two independent pairs `rho_B ⊗ rho_B` striking together in one
    /// collective five-qubit collision. The scenario field of `params` is ignored.
    pub fn extended(params: &BathParams) -> Result<Self> {
        let pair = projectile_state(params)?;
        let block = pair.tensor(&pair)?;
        let unitary = cached_unitary(
            CollisionScenario::ExtendedCollective,
            params.coupling,
            params.tau,
            SequentialOrder::default(),
        )?;
        Self::new(params.rate_p, unitary, block)
    }

    pub fn unitary(&self) -> &CollisionUnitary {
        &self.unitary
    }

    pub fn projectile(&self) -> &DensityMatrix {
        &self.projectile
    }

    /// Channel applied to an arbitrary 2x2 operator.
    pub(crate) fn channel(&self, m: &CMatrix) -> CMatrix {
        apply_channel(self.unitary.matrix(), self.projectile.matrix(), m)
    }

    /// Single-collision channel as a superoperator on row-major `vec(rho)`.
    pub fn channel_superoperator(&self) -> Matrix4<C64> {
        superoperator(|m| self.channel(m))
    }
}

fn check_bath_count(baths: &[Bath]) -> Result<()> {
    if baths.is_empty() || baths.len() > 2 {
        return Err(Error::Argument(format!(
            "one or two baths supported, got {}",
            baths.len()
        )));
    }
    Ok(())
}

fn generator_raw(rho: &CMatrix, baths: &[Bath]) -> CMatrix {
    baths.iter().fold(CMatrix::zeros(2, 2), |acc, b| {
        acc + (b.channel(rho) - rho) * c(b.rate, 0.)
    })
}

/// `sum_baths p (tr_B[U (rho_S ⊗ rho_B) U^dagger] - rho_S)`.
pub fn generator_apply(rho_s: &DensityMatrix, baths: &[Bath]) -> Result<CMatrix> {
    check_bath_count(baths)?;
    if rho_s.n_qubits() != 1 {
        return Err(Error::Dimension("generator acts on a single qubit".into()));
    }
    Ok(generator_raw(rho_s.matrix(), baths))
}

fn vec4(m: &CMatrix) -> Vector4<C64> {
    Vector4::new(m[(0, 0)], m[(0, 1)], m[(1, 0)], m[(1, 1)])
}

fn unvec4(v: &Vector4<C64>) -> CMatrix {
    CMatrix::from_row_slice(2, 2, &[v[0], v[1], v[2], v[3]])
}

fn superoperator(f: impl Fn(&CMatrix) -> CMatrix) -> Matrix4<C64> {
    let mut s = Matrix4::zeros();
    for k in 0..4 {
        let mut unit = CMatrix::zeros(2, 2);
        unit[(k / 2, k % 2)] = c(1., 0.);
        s.set_column(k, &vec4(&f(&unit)));
    }
    s
}

/// Generator as a 4x4 matrix acting on row-major `vec(rho_S)`.
pub fn liouvillian(baths: &[Bath]) -> Result<Matrix4<C64>> {
    check_bath_count(baths)?;
    Ok(superoperator(|m| generator_raw(m, baths)))
}

/// Largest admissible invariant violation during integration.
pub const INTEGRATION_TOL: f64 = 1e-8;

/// Fixed-step RK4 integration of the master equation; returns the state at
/// every point of `t_grid`, which must start at 0 and increase.
pub fn integrate_master_equation(rho0: &DensityMatrix, baths: &[Bath], t_grid: &[f64]) -> Result<Vec<DensityMatrix>> {
    let l = liouvillian(baths)?;
    if rho0.n_qubits() != 1 {
        return Err(Error::Dimension("master equation acts on a single qubit".into()));
    }
    if t_grid.first() != Some(&0.0) {
        return Err(Error::Argument("time grid must start at 0".into()));
    }
    if t_grid.windows(2).any(|w| !(w[1] > w[0])) || t_grid.iter().any(|t| !t.is_finite()) {
        return Err(Error::Argument(
            "time grid must be finite and strictly increasing".into(),
        ));
    }
    let max_rate = baths.iter().map(|b| b.rate).fold(0.0, f64::max);
    let h_max = if max_rate > 0.0 { 1e-3 / max_rate } else { f64::INFINITY };

    let mut y = vec4(rho0.matrix());
    let mut out = Vec::with_capacity(t_grid.len());
    out.push(rho0.clone());
    for w in t_grid.windows(2) {
        let span = w[1] - w[0];
        let steps = (span / h_max).ceil().max(1.0) as usize;
        let h = c(span / steps as f64, 0.);
        for _ in 0..steps {
            let k1 = l * y;
            let k2 = l * (y + k1 * (h * 0.5));
            let k3 = l * (y + k2 * (h * 0.5));
            let k4 = l * (y + k3 * h);
            y += (k1 + k2 * c(2., 0.) + k3 * c(2., 0.) + k4) * (h / 6.0);
        }
        let m = unvec4(&y);
        let report = validate_density_matrix(&m, INTEGRATION_TOL);
        if !report.passed() {
            return Err(Error::Numerical {
                message: format!("state left the physical set at t = {}: {report}", w[1]),
                best: None,
            });
        }
        out.push(DensityMatrix::from_matrix_unchecked(m)?);
    }
    Ok(out)
}
