//! Observables inside a single collective collision: where the projectile
//! coherence goes while the collision is under way.

use serde::{Deserialize, Serialize};

use crate::collision::partial_collective_unitary;
use crate::error::{Error, Result};
use crate::measures::l1_offdiagonal;
use crate::qmath::{partial_trace_matrix, CMatrix, DensityMatrix, C64};
use crate::states::Scenario;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CollisionSnapshot {
    pub elapsed: f64,
    /// l1 coherence of `rho_B1B2`.
    pub l1_b1b2: f64,
    /// `<ge| rho_SBj |eg>` and `<eg| rho_SBj |ge>` for `j = 1, 2`.
    pub sb1_upper: C64,
    pub sb1_lower: C64,
    pub sb2_upper: C64,
    pub sb2_lower: C64,
    /// Largest off-diagonal modulus among the three single-qubit reductions.
    pub single_qubit_offdiag: f64,
    /// Largest `|Re|` among off-diagonal entries of `rho_SB1`, `rho_SB2`.
    pub sb_real_part: f64,
    /// Largest `|Im|` among all entries of `rho_B1B2`.
    pub b1b2_imag_part: f64,
}

fn max_offdiag<F: Fn(&C64) -> f64>(m: &CMatrix, f: F) -> f64 {
    let n = m.nrows();
    let mut out: f64 = 0.0;
    for i in 0..n {
        for j in 0..n {
            if i != j {
                out = out.max(f(&m[(i, j)]));
            }
        }
    }
    out
}

/// Evolves `rho_S ⊗ rho_B` under the collective interaction for each elapsed
/// time in `times` and reports the reduced-state observables.
pub fn intra_collision_snapshots(
    rho_s: &DensityMatrix,
    rho_b: &DensityMatrix,
    scenario: Scenario,
    coupling: f64,
    times: &[f64],
) -> Result<Vec<CollisionSnapshot>> {
    if scenario != Scenario::Collective {
        return Err(Error::UnsupportedConfiguration(
            "intra-collision snapshots are defined for collective collisions".into(),
        ));
    }
    if rho_s.n_qubits() != 1 || rho_b.n_qubits() != 2 {
        return Err(Error::Dimension(
            "snapshots need a qubit and a two-qubit projectile".into(),
        ));
    }
    let joint = rho_s.matrix().kronecker(rho_b.matrix());
    times
        .iter()
        .map(|&t| {
            if !(t >= 0.0) {
                return Err(Error::Argument(format!("elapsed time must be >= 0, got {t}")));
            }
            let u = partial_collective_unitary(coupling, t)?;
            let state = &u * &joint * u.adjoint();
            let b1b2 = partial_trace_matrix(&state, 3, &[1, 2])?;
            let sb1 = partial_trace_matrix(&state, 3, &[0, 1])?;
            let sb2 = partial_trace_matrix(&state, 3, &[0, 2])?;
            let single = (0..3)
                .map(|q| partial_trace_matrix(&state, 3, &[q]).map(|m| m[(0, 1)].norm()))
                .collect::<Result<Vec<_>>>()?
                .into_iter()
                .fold(0.0, f64::max);
            Ok(CollisionSnapshot {
                elapsed: t,
                l1_b1b2: l1_offdiagonal(&b1b2),
                sb1_upper: sb1[(1, 2)],
                sb1_lower: sb1[(2, 1)],
                sb2_upper: sb2[(1, 2)],
                sb2_lower: sb2[(2, 1)],
                single_qubit_offdiag: single,
                sb_real_part: max_offdiag(&sb1, |z| z.re.abs()).max(max_offdiag(&sb2, |z| z.re.abs())),
                b1b2_imag_part: b1b2.iter().map(|z| z.im.abs()).fold(0.0, f64::max),
            })
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::measures::l1_coherence;
    use crate::states::{projectile_state, thermal_qubit, BathParams, QubitSpec};

    #[test]
    fn initial_snapshot_is_the_product_state() {
        let spec = QubitSpec::default();
        let (_, lmax) = crate::states::coherence_bounds(crate::ProjectileKind::Discordant, 2.0, &spec).unwrap();
        let p = BathParams::discordant(2.0, lmax, Scenario::Collective, 0.05).unwrap();
        let rho_b = projectile_state(&p).unwrap();
        let rho_s = thermal_qubit(2.0, &spec).unwrap();
        let snaps = intra_collision_snapshots(&rho_s, &rho_b, Scenario::Collective, 0.05, &[0.0]).unwrap();
        let s = snaps[0];
        assert!((s.l1_b1b2 - l1_coherence(&rho_b).unwrap()).abs() < 1e-15);
        assert!(s.sb1_upper.norm() < 1e-15 && s.sb2_lower.norm() < 1e-15);
    }

    #[test]
    fn sequential_rejected() {
        let spec = QubitSpec::default();
        let rho_s = thermal_qubit(2.0, &spec).unwrap();
        let rho_b = projectile_state(&BathParams::discordant(2.0, 0.0, Scenario::Sequential, 0.05).unwrap()).unwrap();
        assert!(intra_collision_snapshots(&rho_s, &rho_b, Scenario::Sequential, 0.05, &[0.0]).is_err());
    }
}
