//! Coherence and correlation quantifiers for qubit states.
//!
//! Everything is computed in nats; [`LogUnit`] converts for reporting.

use std::f64::consts::{LN_2, PI};

use nalgebra::SymmetricEigen;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::qmath::{c, partial_trace_matrix, sigma_y, validate_density_matrix, CMatrix, DensityMatrix, C64, STATE_TOL};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum LogUnit {
    #[default]
    Nats,
    Bits,
}

impl LogUnit {
    /// Converts a value given in nats.
    pub fn from_nats(self, value: f64) -> f64 {
        match self {
            LogUnit::Nats => value,
            LogUnit::Bits => value / LN_2,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum MeasureId {
    VonNeumannEntropy,
    L1Coherence,
    RelativeEntropyOfCoherence,
    ClassicalCorrelations,
    QuantumDiscord,
    EntanglementOfFormation,
}

/// Optimal projective measurement on subsystem B, as Bloch angles.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct OptimizerInfo {
    pub theta: f64,
    pub phi: f64,
    /// Objective change over the final refinement sweep.
    pub residual: f64,
    pub evaluations: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MeasureResult {
    pub value: f64,
    pub measure: MeasureId,
    pub optimizer: Option<OptimizerInfo>,
}

fn checked(rho: &DensityMatrix) -> Result<()> {
    let report = validate_density_matrix(rho.matrix(), STATE_TOL);
    if report.passed() {
        Ok(())
    } else {
        Err(Error::Validation(report.to_string()))
    }
}

fn two_qubit(rho: &DensityMatrix) -> Result<()> {
    if rho.n_qubits() != 2 {
        return Err(Error::Dimension(format!(
            "two-qubit state required, got {} qubits",
            rho.n_qubits()
        )));
    }
    checked(rho)
}

fn shannon(values: impl IntoIterator<Item = f64>) -> f64 {
    values.into_iter().filter(|&v| v > 0.0).map(|v| -v * v.ln()).sum()
}

/// Binary entropy in nats.
pub fn binary_entropy(x: f64) -> f64 {
    shannon([x, 1.0 - x])
}

fn entropy_of_matrix(m: &CMatrix) -> f64 {
    if m.nrows() == 2 {
        return entropy_2x2(m[(0, 0)].re, m[(1, 1)].re, m[(0, 1)]);
    }
    shannon(SymmetricEigen::new(m.clone()).eigenvalues.iter().copied())
}

/// Entropy of a 2x2 Hermitian block `[[a, z], [z*, d]]` via closed-form eigenvalues.
fn entropy_2x2(a: f64, d: f64, z: C64) -> f64 {
    let mean = 0.5 * (a + d);
    let half_gap = (0.25 * (a - d) * (a - d) + z.norm_sqr()).sqrt();
    shannon([mean + half_gap, mean - half_gap])
}

pub fn von_neumann_entropy(rho: &DensityMatrix) -> Result<f64> {
    checked(rho)?;
    Ok(entropy_of_matrix(rho.matrix()))
}

/// Sum of moduli of all off-diagonal entries in the energy eigenbasis.
pub fn l1_coherence(rho: &DensityMatrix) -> Result<f64> {
    checked(rho)?;
    Ok(l1_offdiagonal(rho.matrix()))
}

pub(crate) fn l1_offdiagonal(m: &CMatrix) -> f64 {
    let n = m.nrows();
    (0..n)
        .flat_map(|i| (0..n).map(move |j| (i, j)))
        .filter(|(i, j)| i != j)
        .map(|(i, j)| m[(i, j)].norm())
        .sum()
}

/// `S(diag rho) - S(rho)`.
pub fn rel_entropy_coherence(rho: &DensityMatrix) -> Result<f64> {
    checked(rho)?;
    let dephased = shannon(rho.populations());
    Ok((dephased - entropy_of_matrix(rho.matrix())).max(0.0))
}

/// `S(A) + S(B) - S(AB)` for a two-qubit state.
pub fn mutual_information(rho_ab: &DensityMatrix) -> Result<f64> {
    two_qubit(rho_ab)?;
    let m = rho_ab.matrix();
    let a = partial_trace_matrix(m, 2, &[0])?;
    let b = partial_trace_matrix(m, 2, &[1])?;
    Ok(entropy_of_matrix(&a) + entropy_of_matrix(&b) - entropy_of_matrix(m))
}

/// Average post-measurement entropy of A after a rank-1 projective
/// measurement of B along the Bloch direction `(theta, phi)`.
struct ConditionalEntropy {
    // rho_AB entries as blocks: rho[(a b), (a' b')]
    m: [[C64; 4]; 4],
}

impl ConditionalEntropy {
    fn new(rho: &CMatrix) -> Self {
        let mut m = [[C64::new(0., 0.); 4]; 4];
        for (i, row) in m.iter_mut().enumerate() {
            for (j, v) in row.iter_mut().enumerate() {
                *v = rho[(i, j)];
            }
        }
        Self { m }
    }

    fn eval(&self, theta: f64, phi: f64) -> f64 {
        let (s, co) = (0.5 * theta).sin_cos();
        let ph = C64::from_polar(1.0, phi);
        // outcome 0: |psi> = cos|g> + e^{i phi} sin|e>; outcome 1 orthogonal
        let kets = [[c(co, 0.), ph * s], [c(-s, 0.), ph * co]];
        kets.iter()
            .map(|psi| {
                // (I ⊗ <psi|) rho (I ⊗ |psi>) as a 2x2 block on A
                let mut block = [[C64::new(0., 0.); 2]; 2];
                for (a, brow) in block.iter_mut().enumerate() {
                    for (a2, v) in brow.iter_mut().enumerate() {
                        let mut acc = C64::new(0., 0.);
                        for b in 0..2 {
                            for b2 in 0..2 {
                                acc += psi[b].conj() * self.m[2 * a + b][2 * a2 + b2] * psi[b2];
                            }
                        }
                        *v = acc;
                    }
                }
                let p = block[0][0].re + block[1][1].re;
                if p <= 1e-300 {
                    return 0.0;
                }
                p * entropy_2x2(block[0][0].re / p, block[1][1].re / p, block[0][1] / p)
            })
            .sum()
    }
}

const GRID_STEP: f64 = 5.0 * PI / 180.0;
const ANGLE_TOL: f64 = 1e-9;
const MAX_SWEEPS: usize = 30;
const RESIDUAL_LIMIT: f64 = 1e-10;
const INV_PHI: f64 = 0.618_033_988_749_894_9;

/// Golden-section minimization of `f` on `[lo, hi]` to width `ANGLE_TOL`.
fn golden_section(mut lo: f64, mut hi: f64, f: impl Fn(f64) -> f64, evals: &mut usize) -> (f64, f64) {
    let mut x1 = hi - INV_PHI * (hi - lo);
    let mut x2 = lo + INV_PHI * (hi - lo);
    let mut f1 = f(x1);
    let mut f2 = f(x2);
    *evals += 2;
    while hi - lo > ANGLE_TOL {
        if f1 <= f2 {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - INV_PHI * (hi - lo);
            f1 = f(x1);
        } else {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + INV_PHI * (hi - lo);
            f2 = f(x2);
        }
        *evals += 1;
    }
    let x = 0.5 * (lo + hi);
    *evals += 1;
    (x, f(x))
}

/// Minimizes the conditional entropy over projective measurements on B:
/// 5-degree grid, then alternating golden-section refinement of each angle.
fn minimize_conditional_entropy(rho: &CMatrix) -> Result<(f64, OptimizerInfo)> {
    let obj = ConditionalEntropy::new(rho);
    let n_theta = (PI / GRID_STEP).round() as usize;
    let n_phi = (2.0 * PI / GRID_STEP).round() as usize;
    let mut evals = 0;
    let mut best = (f64::INFINITY, 0.0, 0.0);
    for i in 0..=n_theta {
        let theta = i as f64 * GRID_STEP;
        for k in 0..n_phi {
            let phi = k as f64 * GRID_STEP;
            let v = obj.eval(theta, phi);
            evals += 1;
            if v < best.0 {
                best = (v, theta, phi);
            }
        }
    }

    let (mut value, mut theta, mut phi) = best;
    let mut residual = f64::INFINITY;
    for _ in 0..MAX_SWEEPS {
        let before = value;
        let (t, vt) = golden_section(theta - GRID_STEP, theta + GRID_STEP, |t| obj.eval(t, phi), &mut evals);
        if vt < value {
            theta = t;
            value = vt;
        }
        let (p, vp) = golden_section(phi - GRID_STEP, phi + GRID_STEP, |p| obj.eval(theta, p), &mut evals);
        if vp < value {
            phi = p;
            value = vp;
        }
        residual = before - value;
        if residual <= RESIDUAL_LIMIT * 1e-4 {
            break;
        }
    }
    let info = OptimizerInfo {
        theta: theta.rem_euclid(2.0 * PI),
        phi: phi.rem_euclid(2.0 * PI),
        residual,
        evaluations: evals,
    };
    if residual > RESIDUAL_LIMIT {
        return Err(Error::Numerical {
            message: format!("measurement optimizer did not settle, residual {residual:e}"),
            best: Some(value),
        });
    }
    Ok((value, info))
}

/// Classical correlations `J(A|B)`: the information about A gained by the
/// best projective measurement on B.
pub fn classical_correlations(rho_ab: &DensityMatrix) -> Result<MeasureResult> {
    two_qubit(rho_ab)?;
    let m = rho_ab.matrix();
    let s_a = entropy_of_matrix(&partial_trace_matrix(m, 2, &[0])?);
    let (cond, info) = minimize_conditional_entropy(m).map_err(|e| match e {
        Error::Numerical { message, best } => Error::Numerical {
            message,
            best: best.map(|b| s_a - b),
        },
        other => other,
    })?;
    Ok(MeasureResult {
        value: (s_a - cond).max(0.0),
        measure: MeasureId::ClassicalCorrelations,
        optimizer: Some(info),
    })
}

/// Quantum discord with measurement on B: `I(A:B) - J(A|B)`.
pub fn quantum_discord(rho_ab: &DensityMatrix) -> Result<MeasureResult> {
    let mi = mutual_information(rho_ab)?;
    let cc = classical_correlations(rho_ab)?;
    let mut value = mi - cc.value;
    if value < 0.0 {
        if value >= -1e-10 {
            value = 0.0;
        } else {
            return Err(Error::Numerical {
                message: format!("negative discord {value:e}"),
                best: Some(value),
            });
        }
    }
    Ok(MeasureResult {
        value,
        measure: MeasureId::QuantumDiscord,
        optimizer: cc.optimizer,
    })
}

/// Wootters concurrence.
pub fn concurrence(rho_ab: &DensityMatrix) -> Result<f64> {
    two_qubit(rho_ab)?;
    let rho = rho_ab.matrix();
    let yy = sigma_y().kronecker(&sigma_y());
    let flipped = &yy * rho.conjugate() * &yy;
    // eigenvalues of sqrt(rho) rho~ sqrt(rho) are the squares of the
    // Wootters lambdas, and the product is Hermitian
    let eig = SymmetricEigen::new(rho.clone());
    let sqrt_vals = CMatrix::from_diagonal(&eig.eigenvalues.map(|v| c(v.max(0.0).sqrt(), 0.)));
    let sqrt_rho = &eig.eigenvectors * sqrt_vals * eig.eigenvectors.adjoint();
    let r = &sqrt_rho * flipped * &sqrt_rho;
    let mut lambdas: Vec<f64> = SymmetricEigen::new((&r + r.adjoint()) * c(0.5, 0.))
        .eigenvalues
        .iter()
        .map(|v| v.max(0.0).sqrt())
        .collect();
    lambdas.sort_by(|a, b| b.total_cmp(a));
    Ok((lambdas[0] - lambdas[1] - lambdas[2] - lambdas[3]).max(0.0))
}

/// Entanglement of formation, in nats.
pub fn entanglement_of_formation(rho_ab: &DensityMatrix) -> Result<f64> {
    let conc = concurrence(rho_ab)?;
    if conc == 0.0 {
        return Ok(0.0);
    }
    let x = 0.5 * (1.0 + (1.0 - conc * conc).max(0.0).sqrt());
    Ok(binary_entropy(x))
}
