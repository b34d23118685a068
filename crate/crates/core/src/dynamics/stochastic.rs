//! Repeated-interaction oracle: Poisson arrivals, one exact collision per
//! arrival, ensemble-averaged over independently seeded trajectories.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Exp};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::master::Bath;
use crate::error::{Error, Result};
use crate::qmath::DensityMatrix;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TrajectoryEnsemble {
    pub seed: u64,
    pub n_traj: usize,
    pub times: Vec<f64>,
    pub mean_excited_population: Vec<f64>,
    pub std_error: Vec<f64>,
}

/// Trajectory `index` draws from stream `index` of the master-seeded ChaCha8
/// generator, so results do not depend on scheduling.
fn trajectory_rng(seed: u64, index: usize) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index as u64);
    rng
}

fn run_one(rho0: &DensityMatrix, bath: &Bath, times: &[f64], seed: u64, index: usize) -> Vec<f64> {
    let channel = bath.channel_superoperator();
    let m = rho0.matrix();
    let mut state = nalgebra::Vector4::new(m[(0, 0)], m[(0, 1)], m[(1, 0)], m[(1, 1)]);
    let mut out = Vec::with_capacity(times.len());
    if bath.rate == 0.0 {
        out.resize(times.len(), state[3].re);
        return out;
    }
    let mut rng = trajectory_rng(seed, index);
    let waiting = Exp::new(bath.rate).expect("positive rate");
    let mut next = waiting.sample(&mut rng);
    for &t in times {
        while next <= t {
            state = channel * state;
            next += waiting.sample(&mut rng);
        }
        out.push(state[3].re);
    }
    out
}

/// Ensemble mean and standard error of the excited population on `times`.
pub fn stochastic_trajectories(
    rho0: &DensityMatrix,
    bath: &Bath,
    times: &[f64],
    n_traj: usize,
    seed: u64,
) -> Result<TrajectoryEnsemble> {
    if n_traj == 0 {
        return Err(Error::Argument("need at least one trajectory".into()));
    }
    if rho0.n_qubits() != 1 {
        return Err(Error::Dimension("trajectories evolve a single qubit".into()));
    }
    if times.iter().any(|t| !(*t >= 0.0) || !t.is_finite()) || times.windows(2).any(|w| w[1] < w[0]) {
        return Err(Error::Argument("times must be finite, non-negative and sorted".into()));
    }

    let runs: Vec<Vec<f64>> = (0..n_traj)
        .into_par_iter()
        .map(|i| run_one(rho0, bath, times, seed, i))
        .collect();

    // reduce in trajectory order for bit-stable sums
    let n = n_traj as f64;
    let mut mean = vec![0.0; times.len()];
    for run in &runs {
        for (acc, v) in mean.iter_mut().zip(run) {
            *acc += v;
        }
    }
    mean.iter_mut().for_each(|m| *m /= n);
    let mut var = vec![0.0; times.len()];
    for run in &runs {
        for ((acc, v), m) in var.iter_mut().zip(run).zip(&mean) {
            *acc += (v - m) * (v - m);
        }
    }
    let std_error = var
        .iter()
        .map(|s| if n_traj > 1 { (s / (n - 1.0) / n).sqrt() } else { 0.0 })
        .collect();

    Ok(TrajectoryEnsemble {
        seed,
        n_traj,
        times: times.to_vec(),
        mean_excited_population: mean,
        std_error,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::states::{thermal_qubit, BathParams, ProjectileKind, QubitSpec, Scenario};

    fn bath(rate: f64) -> Bath {
        let p = BathParams::new(
            ProjectileKind::Discordant,
            2.0,
            0.05,
            Scenario::Collective,
            1.0,
            0.4,
            rate,
            QubitSpec::default(),
        )
        .unwrap();
        Bath::from_params(&p).unwrap()
    }

    #[test]
    fn zero_rate_is_constant() {
        let rho0 = thermal_qubit(1.0, &QubitSpec::default()).unwrap();
        let ens = stochastic_trajectories(&rho0, &bath(0.0), &[0.0, 1.0, 5.0], 16, 3).unwrap();
        let q_e = rho0.populations()[1];
        assert!(ens.mean_excited_population.iter().all(|&m| (m - q_e).abs() < 1e-16));
        assert!(ens.std_error.iter().all(|&s| s < 1e-16));
    }

    #[test]
    fn reproducible_for_fixed_seed() {
        let rho0 = thermal_qubit(1.0, &QubitSpec::default()).unwrap();
        let times = [0.0, 0.5, 1.0, 2.0];
        let a = stochastic_trajectories(&rho0, &bath(1.0), &times, 200, 42).unwrap();
        let b = stochastic_trajectories(&rho0, &bath(1.0), &times, 200, 42).unwrap();
        assert_eq!(a, b);
        let c = stochastic_trajectories(&rho0, &bath(1.0), &times, 200, 43).unwrap();
        assert_ne!(a.mean_excited_population, c.mean_excited_population);
    }

    #[test]
    fn rejects_bad_input() {
        let rho0 = thermal_qubit(1.0, &QubitSpec::default()).unwrap();
        assert!(stochastic_trajectories(&rho0, &bath(1.0), &[0.0], 0, 1).is_err());
        assert!(stochastic_trajectories(&rho0, &bath(1.0), &[1.0, 0.5], 4, 1).is_err());
    }
}
