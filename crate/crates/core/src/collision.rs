//! Exchange interaction and the collision unitaries.
//!
//! Register order is `S, B1, B2 (, B3, B4)`. All unitaries are interaction
//! picture operators; the exchange coupling commutes with the free
//! Hamiltonian of identical qubits, so populations are picture independent.

use std::collections::HashMap;
use std::sync::{Arc, OnceLock, RwLock};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::qmath::{
    c, commutator, embed, identity, max_abs, max_abs_diff, partial_trace_matrix, sigma_x, sigma_y, sigma_z,
    unitary_from_hamiltonian, CMatrix, DensityMatrix, HermitianOperator, MAX_QUBITS,
};
use crate::states::{QubitSpec, Scenario};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum CollisionScenario {
    Sequential,
    Collective,
    /// Target against two projectile pairs at once (`S, B1..B4`).
    ExtendedCollective,
}

impl From<Scenario> for CollisionScenario {
    fn from(s: Scenario) -> Self {
        match s {
            Scenario::Sequential => CollisionScenario::Sequential,
            Scenario::Collective => CollisionScenario::Collective,
        }
    }
}

/// Factor order of the sequential unitary.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
pub enum SequentialOrder {
    /// `U_SB1(tau/2) U_SB2(tau/2)`: the B2 half acts first on the state.
    #[default]
    AsWritten,
    /// `U_SB2(tau/2) U_SB1(tau/2)`.
    Reversed,
}

#[derive(Debug, Clone, PartialEq)]
pub struct CollisionUnitary {
    pub scenario: CollisionScenario,
    pub coupling: f64,
    pub tau: f64,
    matrix: CMatrix,
}

impl CollisionUnitary {
    pub fn matrix(&self) -> &CMatrix {
        &self.matrix
    }

    pub fn n_qubits(&self) -> usize {
        self.matrix.nrows().trailing_zeros() as usize
    }

    /// `max |U U^dagger - I|`.
    pub fn unitarity_deviation(&self) -> f64 {
        let n = self.matrix.nrows();
        max_abs_diff(&(&self.matrix * self.matrix.adjoint()), &identity(n))
    }

    /// `max |[U, H_tot]|` with `H_tot` the free Hamiltonian of all qubits.
    pub fn energy_commutator(&self, spec: &QubitSpec) -> f64 {
        let h = total_free_hamiltonian(spec, self.n_qubits());
        max_abs(&commutator(&self.matrix, &h))
    }
}

/// Sum of identical single-qubit Hamiltonians over an `n`-qubit register.
pub fn total_free_hamiltonian(spec: &QubitSpec, n_qubits: usize) -> CMatrix {
    let hs = spec.hamiltonian();
    (0..n_qubits).fold(CMatrix::zeros(1 << n_qubits, 1 << n_qubits), |acc, q| {
        acc + embed(&[(q, &hs)], n_qubits)
    })
}

/// Total excitation number `sum_q |e><e|_q`.
pub fn excitation_number(n_qubits: usize) -> CMatrix {
    let dim = 1 << n_qubits;
    let half = (identity(2) - sigma_z()) * c(0.5, 0.);
    (0..n_qubits).fold(CMatrix::zeros(dim, dim), |acc, q| acc + embed(&[(q, &half)], n_qubits))
}

/// `J (sigma_x sigma_x + sigma_y sigma_y)` on the pair `(i, j)`.
pub fn pair_interaction_hamiltonian(coupling: f64, pair: (usize, usize), n_qubits: usize) -> Result<HermitianOperator> {
    let (i, j) = pair;
    if i == j || i >= n_qubits || j >= n_qubits || n_qubits > MAX_QUBITS {
        return Err(Error::Argument(format!(
            "invalid exchange pair ({i}, {j}) on {n_qubits} qubits"
        )));
    }
    let (x, y) = (sigma_x(), sigma_y());
    let h = (embed(&[(i, &x), (j, &x)], n_qubits) + embed(&[(i, &y), (j, &y)], n_qubits)) * c(coupling, 0.);
    HermitianOperator::new(h)
}

fn check_duration(tau: f64, coupling: f64) -> Result<()> {
    if !(tau >= 0.0) || !tau.is_finite() || !coupling.is_finite() {
        return Err(Error::Argument(format!(
            "collision needs finite J and tau >= 0, got J = {coupling}, tau = {tau}"
        )));
    }
    Ok(())
}

fn collective_generator(coupling: f64, n_qubits: usize) -> Result<HermitianOperator> {
    let mut h = pair_interaction_hamiltonian(coupling, (0, 1), n_qubits)?;
    for b in 2..n_qubits {
        h = &h + &pair_interaction_hamiltonian(coupling, (0, b), n_qubits)?;
    }
    Ok(h)
}

pub fn sequential_unitary(coupling: f64, tau: f64) -> Result<CollisionUnitary> {
    sequential_unitary_ordered(coupling, tau, SequentialOrder::default())
}

/// Product of two half-duration pair unitaries on `S, B1, B2`.
pub fn sequential_unitary_ordered(coupling: f64, tau: f64, order: SequentialOrder) -> Result<CollisionUnitary> {
    check_duration(tau, coupling)?;
    let u1 = unitary_from_hamiltonian(&pair_interaction_hamiltonian(coupling, (0, 1), 3)?, tau / 2.0);
    let u2 = unitary_from_hamiltonian(&pair_interaction_hamiltonian(coupling, (0, 2), 3)?, tau / 2.0);
    let matrix = match order {
        SequentialOrder::AsWritten => u1 * u2,
        SequentialOrder::Reversed => u2 * u1,
    };
    Ok(CollisionUnitary {
        scenario: CollisionScenario::Sequential,
        coupling,
        tau,
        matrix,
    })
}

/// `exp(-i tau (H_SB1 + H_SB2))`.
pub fn collective_unitary(coupling: f64, tau: f64) -> Result<CollisionUnitary> {
    check_duration(tau, coupling)?;
    let h = collective_generator(coupling, 3)?;
    Ok(CollisionUnitary {
        scenario: CollisionScenario::Collective,
        coupling,
        tau,
        matrix: unitary_from_hamiltonian(&h, tau),
    })
}

/// `exp(-i tau sum_{j=1..4} H_SBj)` on `S, B1..B4`.
pub fn extended_collective_unitary(coupling: f64, tau: f64) -> Result<CollisionUnitary> {
    check_duration(tau, coupling)?;
    let h = collective_generator(coupling, 5)?;
    Ok(CollisionUnitary {
        scenario: CollisionScenario::ExtendedCollective,
        coupling,
        tau,
        matrix: unitary_from_hamiltonian(&h, tau),
    })
}

/// Collective unitary over an arbitrary partial duration, used for
/// snapshots inside a collision. Not cached.
pub(crate) fn partial_collective_unitary(coupling: f64, elapsed: f64) -> Result<CMatrix> {
    Ok(unitary_from_hamiltonian(&collective_generator(coupling, 3)?, elapsed))
}

type CacheKey = (CollisionScenario, SequentialOrder, u64, u64);

fn cache() -> &'static RwLock<HashMap<CacheKey, Arc<CollisionUnitary>>> {
    static CACHE: OnceLock<RwLock<HashMap<CacheKey, Arc<CollisionUnitary>>>> = OnceLock::new();
    CACHE.get_or_init(|| RwLock::new(HashMap::new()))
}

/// Memoized unitary for `(scenario, J, tau)`.
pub fn cached_unitary(
    scenario: CollisionScenario,
    coupling: f64,
    tau: f64,
    order: SequentialOrder,
) -> Result<Arc<CollisionUnitary>> {
    let key = (scenario, order, coupling.to_bits(), tau.to_bits());
    if let Some(u) = cache().read().expect("unitary cache poisoned").get(&key) {
        return Ok(Arc::clone(u));
    }
    let u = Arc::new(match scenario {
        CollisionScenario::Sequential => sequential_unitary_ordered(coupling, tau, order)?,
        CollisionScenario::Collective => collective_unitary(coupling, tau)?,
        CollisionScenario::ExtendedCollective => extended_collective_unitary(coupling, tau)?,
    });
    let mut guard = cache().write().expect("unitary cache poisoned");
    Ok(Arc::clone(guard.entry(key).or_insert(u)))
}

/// `tr_B[U (m ⊗ rho_B) U^dagger]` for any 2x2 operator `m`; linear in `m`.
pub(crate) fn apply_channel(u: &CMatrix, rho_b: &CMatrix, m: &CMatrix) -> CMatrix {
    let joint = m.kronecker(rho_b);
    let n = u.nrows().trailing_zeros() as usize;
    let evolved = u * joint * u.adjoint();
    partial_trace_matrix(&evolved, n, &[0]).expect("register shape fixed by the unitary")
}

/// One collision with a fresh projectile.
pub fn single_collision_map(
    rho_s: &DensityMatrix,
    rho_b: &DensityMatrix,
    u: &CollisionUnitary,
) -> Result<DensityMatrix> {
    if rho_s.n_qubits() != 1 || rho_s.n_qubits() + rho_b.n_qubits() != u.n_qubits() {
        return Err(Error::Dimension(format!(
            "collision acts on {} qubits, got system {} + projectile {}",
            u.n_qubits(),
            rho_s.n_qubits(),
            rho_b.n_qubits()
        )));
    }
    DensityMatrix::from_matrix_unchecked(apply_channel(u.matrix(), rho_b.matrix(), rho_s.matrix()))
}
