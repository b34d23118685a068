//! Dense complex linear algebra on small multi-qubit Hilbert spaces.
//!
//! Basis convention: `|g>` is index 0 and `|e>` is index 1. In a multi-qubit
//! register the leftmost subsystem is the most significant bit of the index.

use nalgebra::{DMatrix, DVector, SymmetricEigen};
use num_complex::Complex64;

use crate::error::{Error, Result};

pub type C64 = Complex64;
pub type CMatrix = DMatrix<C64>;

/// Largest register handled by this crate.
pub const MAX_QUBITS: usize = 5;

/// Tolerance used when a [`DensityMatrix`] is constructed from raw entries.
pub const STATE_TOL: f64 = 1e-10;

pub fn c(re: f64, im: f64) -> C64 {
    C64::new(re, im)
}

pub fn identity(dim: usize) -> CMatrix {
    CMatrix::identity(dim, dim)
}

pub fn sigma_x() -> CMatrix {
    CMatrix::from_row_slice(2, 2, &[c(0., 0.), c(1., 0.), c(1., 0.), c(0., 0.)])
}

pub fn sigma_y() -> CMatrix {
    CMatrix::from_row_slice(2, 2, &[c(0., 0.), c(0., -1.), c(0., 1.), c(0., 0.)])
}

pub fn sigma_z() -> CMatrix {
    CMatrix::from_row_slice(2, 2, &[c(1., 0.), c(0., 0.), c(0., 0.), c(-1., 0.)])
}

/// Lowering operator `|g><e|`.
pub fn sigma_minus() -> CMatrix {
    CMatrix::from_row_slice(2, 2, &[c(0., 0.), c(1., 0.), c(0., 0.), c(0., 0.)])
}

/// Raising operator `|e><g|`.
pub fn sigma_plus() -> CMatrix {
    sigma_minus().adjoint()
}

pub fn diag_real(values: &[f64]) -> CMatrix {
    CMatrix::from_diagonal(&DVector::from_iterator(values.len(), values.iter().map(|&v| c(v, 0.))))
}

/// Largest entry-wise modulus of `a - b`.
pub fn max_abs_diff(a: &CMatrix, b: &CMatrix) -> f64 {
    assert_eq!(a.shape(), b.shape(), "shape mismatch in max_abs_diff");
    a.iter().zip(b.iter()).map(|(x, y)| (x - y).norm()).fold(0.0, f64::max)
}

pub fn max_abs(a: &CMatrix) -> f64 {
    a.iter().map(|x| x.norm()).fold(0.0, f64::max)
}

pub fn commutator(a: &CMatrix, b: &CMatrix) -> CMatrix {
    a * b - b * a
}

pub fn hermiticity_deviation(m: &CMatrix) -> f64 {
    max_abs_diff(m, &m.adjoint())
}

fn qubit_count(dim: usize) -> Option<usize> {
    if dim.is_power_of_two() && dim >= 2 {
        Some(dim.trailing_zeros() as usize)
    } else {
        None
    }
}

/// Real eigenvalues of the Hermitian part of `m`, ascending.
pub fn hermitian_eigenvalues(m: &CMatrix) -> Vec<f64> {
    let herm = (m + m.adjoint()) * c(0.5, 0.);
    let mut vals: Vec<f64> = SymmetricEigen::new(herm).eigenvalues.iter().copied().collect();
    vals.sort_by(|a, b| a.total_cmp(b));
    vals
}

/// Kronecker product; the left factor indexes the more significant subsystem.
pub fn tensor_product(a: &CMatrix, b: &CMatrix) -> Result<CMatrix> {
    if !a.is_square() || !b.is_square() {
        return Err(Error::Dimension(format!(
            "tensor product needs square factors, got {:?} and {:?}",
            a.shape(),
            b.shape()
        )));
    }
    Ok(a.kronecker(b))
}

/// Folds [`tensor_product`] over a non-empty list of factors.
pub fn tensor_all(factors: &[&CMatrix]) -> Result<CMatrix> {
    let (first, rest) = factors
        .split_first()
        .ok_or_else(|| Error::Argument("empty tensor product".into()))?;
    rest.iter().try_fold((*first).clone(), |acc, f| tensor_product(&acc, f))
}

/// Places single-qubit operators on the given sites of an `n`-qubit register,
/// identity elsewhere.
pub fn embed(ops: &[(usize, &CMatrix)], n_qubits: usize) -> CMatrix {
    let id = identity(2);
    let mut out = identity(1);
    for site in 0..n_qubits {
        let factor = ops.iter().find(|(s, _)| *s == site).map(|(_, m)| *m).unwrap_or(&id);
        out = out.kronecker(factor);
    }
    out
}

/// Partial trace of an arbitrary square matrix on `n_qubits`, keeping the
/// listed subsystems in register order.
pub fn partial_trace_matrix(m: &CMatrix, n_qubits: usize, keep: &[usize]) -> Result<CMatrix> {
    if keep.is_empty() {
        return Err(Error::Argument("partial trace needs a non-empty keep set".into()));
    }
    let dim = 1usize << n_qubits;
    if m.shape() != (dim, dim) {
        return Err(Error::Dimension(format!(
            "matrix shape {:?} does not match {n_qubits} qubits",
            m.shape()
        )));
    }
    let mut kept: Vec<usize> = keep.to_vec();
    kept.sort_unstable();
    kept.dedup();
    if let Some(&bad) = kept.iter().find(|&&q| q >= n_qubits) {
        return Err(Error::Argument(format!(
            "subsystem index {bad} out of range for {n_qubits} qubits"
        )));
    }
    let bit = |i: usize, q: usize| (i >> (n_qubits - 1 - q)) & 1;
    let traced_mask = (0..n_qubits)
        .filter(|q| !kept.contains(q))
        .fold(0usize, |acc, q| acc | (1 << (n_qubits - 1 - q)));
    let reduce = |i: usize| kept.iter().fold(0usize, |acc, &q| (acc << 1) | bit(i, q));

    let out_dim = 1usize << kept.len();
    let mut out = CMatrix::zeros(out_dim, out_dim);
    for i in 0..dim {
        for j in 0..dim {
            if i & traced_mask == j & traced_mask {
                out[(reduce(i), reduce(j))] += m[(i, j)];
            }
        }
    }
    Ok(out)
}

/// Quantum state on 1 to 5 qubits.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityMatrix {
    matrix: CMatrix,
    n_qubits: usize,
}

impl DensityMatrix {
    /// Validates shape, trace, Hermiticity and positivity at [`STATE_TOL`].
    pub fn new(matrix: CMatrix) -> Result<Self> {
        let state = Self::from_matrix_unchecked(matrix)?;
        let report = validate_density_matrix(&state.matrix, STATE_TOL);
        if !report.passed() {
            return Err(Error::Validation(report.to_string()));
        }
        Ok(state)
    }

    /// Checks only the shape; used for intermediate results whose validity
    /// follows from construction.
    pub fn from_matrix_unchecked(matrix: CMatrix) -> Result<Self> {
        if !matrix.is_square() {
            return Err(Error::Dimension(format!("non-square state {:?}", matrix.shape())));
        }
        let n_qubits = qubit_count(matrix.nrows())
            .filter(|&n| n <= MAX_QUBITS)
            .ok_or_else(|| {
                Error::Dimension(format!(
                    "state dimension {} is not 2^n with 1 <= n <= {MAX_QUBITS}",
                    matrix.nrows()
                ))
            })?;
        Ok(Self { matrix, n_qubits })
    }

    pub fn diagonal(populations: &[f64]) -> Result<Self> {
        Self::new(diag_real(populations))
    }

    pub fn matrix(&self) -> &CMatrix {
        &self.matrix
    }

    pub fn into_matrix(self) -> CMatrix {
        self.matrix
    }

    pub fn dim(&self) -> usize {
        self.matrix.nrows()
    }

    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    pub fn qubit_dims(&self) -> Vec<usize> {
        vec![2; self.n_qubits]
    }

    pub fn populations(&self) -> Vec<f64> {
        self.matrix.diagonal().iter().map(|z| z.re).collect()
    }

    pub fn trace(&self) -> C64 {
        self.matrix.trace()
    }

    pub fn eigenvalues(&self) -> Vec<f64> {
        hermitian_eigenvalues(&self.matrix)
    }

    pub fn tensor(&self, other: &DensityMatrix) -> Result<DensityMatrix> {
        if self.n_qubits + other.n_qubits > MAX_QUBITS {
            return Err(Error::Dimension("joint state exceeds 5 qubits".into()));
        }
        DensityMatrix::from_matrix_unchecked(self.matrix.kronecker(&other.matrix))
    }

    /// `U rho U^dagger`.
    pub fn conjugate_by(&self, u: &CMatrix) -> Result<DensityMatrix> {
        if u.shape() != self.matrix.shape() {
            return Err(Error::Dimension(format!(
                "unitary {:?} does not act on state {:?}",
                u.shape(),
                self.matrix.shape()
            )));
        }
        DensityMatrix::from_matrix_unchecked(u * &self.matrix * u.adjoint())
    }
}

/// Reduced state over the `keep` subsystems.
pub fn partial_trace(rho: &DensityMatrix, keep: &[usize]) -> Result<DensityMatrix> {
    let reduced = partial_trace_matrix(rho.matrix(), rho.n_qubits(), keep)?;
    DensityMatrix::from_matrix_unchecked(reduced)
}

#[derive(Debug, Clone, PartialEq)]
pub struct HermitianOperator {
    matrix: CMatrix,
}

impl HermitianOperator {
    pub const TOL: f64 = 1e-12;

    pub fn new(matrix: CMatrix) -> Result<Self> {
        if !matrix.is_square() {
            return Err(Error::Dimension(format!("non-square operator {:?}", matrix.shape())));
        }
        let dev = hermiticity_deviation(&matrix);
        if dev > Self::TOL {
            return Err(Error::Validation(format!(
                "operator not Hermitian: max |H - H^dagger| = {dev:e}"
            )));
        }
        Ok(Self { matrix })
    }

    pub fn matrix(&self) -> &CMatrix {
        &self.matrix
    }

    pub fn dim(&self) -> usize {
        self.matrix.nrows()
    }

    pub fn eigenvalues(&self) -> Vec<f64> {
        hermitian_eigenvalues(&self.matrix)
    }
}

impl std::ops::Add for &HermitianOperator {
    type Output = HermitianOperator;

    fn add(self, rhs: &HermitianOperator) -> HermitianOperator {
        HermitianOperator {
            matrix: &self.matrix + &rhs.matrix,
        }
    }
}

/// `exp(-i t H)` by full spectral decomposition.
pub fn unitary_from_hamiltonian(h: &HermitianOperator, t: f64) -> CMatrix {
    let eig = SymmetricEigen::new(h.matrix().clone());
    let v = &eig.eigenvectors;
    let phases = DVector::from_iterator(
        eig.eigenvalues.len(),
        eig.eigenvalues.iter().map(|&e| C64::from_polar(1.0, -t * e)),
    );
    v * CMatrix::from_diagonal(&phases) * v.adjoint()
}

/// Outcome of [`validate_density_matrix`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ValidationReport {
    pub tol: f64,
    pub trace_deviation: f64,
    pub hermiticity_deviation: f64,
    pub min_eigenvalue: f64,
}

impl ValidationReport {
    pub fn trace_ok(&self) -> bool {
        self.trace_deviation <= self.tol
    }

    pub fn hermitian_ok(&self) -> bool {
        self.hermiticity_deviation <= self.tol
    }

    pub fn positive_ok(&self) -> bool {
        self.min_eigenvalue >= -self.tol
    }

    pub fn passed(&self) -> bool {
        self.trace_ok() && self.hermitian_ok() && self.positive_ok()
    }
}

impl std::fmt::Display for ValidationReport {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(
            f,
            "|tr - 1| = {:e} ({}), hermiticity {:e} ({}), min eigenvalue {:e} ({})",
            self.trace_deviation,
            if self.trace_ok() { "ok" } else { "FAIL" },
            self.hermiticity_deviation,
            if self.hermitian_ok() { "ok" } else { "FAIL" },
            self.min_eigenvalue,
            if self.positive_ok() { "ok" } else { "FAIL" },
        )
    }
}

/// Reports trace, Hermiticity and positivity deviations of a candidate state.
/// Non-square input reports as failing every check.
pub fn validate_density_matrix(m: &CMatrix, tol: f64) -> ValidationReport {
    if !m.is_square() || m.nrows() == 0 {
        return ValidationReport {
            tol,
            trace_deviation: f64::INFINITY,
            hermiticity_deviation: f64::INFINITY,
            min_eigenvalue: f64::NEG_INFINITY,
        };
    }
    let trace = m.trace();
    let min_eigenvalue = hermitian_eigenvalues(m).first().copied().unwrap_or(f64::NEG_INFINITY);
    ValidationReport {
        tol,
        trace_deviation: (trace - c(1., 0.)).norm(),
        hermiticity_deviation: hermiticity_deviation(m),
        min_eigenvalue,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ket(bits: &[usize]) -> DVector<C64> {
        let idx = bits.iter().fold(0, |acc, &b| (acc << 1) | b);
        let mut v = DVector::zeros(1 << bits.len());
        v[idx] = c(1., 0.);
        v
    }

    #[test]
    fn identity_tensor_identity() {
        let out = tensor_product(&identity(2), &identity(2)).unwrap();
        assert_eq!(out, identity(4));
    }

    #[test]
    fn diagonal_tensor_diagonal() {
        let a = diag_real(&[0.7, 0.3]);
        let b = diag_real(&[0.6, 0.4]);
        let out = tensor_product(&a, &b).unwrap();
        let expected = diag_real(&[0.42, 0.28, 0.18, 0.12]);
        assert!(max_abs_diff(&out, &expected) < 1e-15);
    }

    #[test]
    fn xx_flips_gg_to_ee() {
        let xx = tensor_product(&sigma_x(), &sigma_x()).unwrap();
        let out = &xx * ket(&[0, 0]);
        assert_eq!(out, ket(&[1, 1]));
        // Index formula: (X⊗X)[i,j] = X[i>>1, j>>1] X[i&1, j&1].
        let x = sigma_x();
        for i in 0..4 {
            for j in 0..4 {
                assert_eq!(xx[(i, j)], x[(i >> 1, j >> 1)] * x[(i & 1, j & 1)]);
            }
        }
    }

    #[test]
    fn non_square_tensor_is_rejected() {
        let a = CMatrix::zeros(2, 3);
        assert!(matches!(tensor_product(&a, &identity(2)), Err(Error::Dimension(_))));
    }

    #[test]
    fn partial_trace_of_product_recovers_factor() {
        let a = diag_real(&[0.8, 0.2]);
        let mut b = diag_real(&[0.5, 0.25, 0.125, 0.125]);
        b[(1, 2)] = c(0.1, 0.);
        b[(2, 1)] = c(0.1, 0.);
        let joint = DensityMatrix::new(a.kronecker(&b)).unwrap();
        let reduced = partial_trace(&joint, &[0]).unwrap();
        assert!(max_abs_diff(reduced.matrix(), &a) < 1e-15);
        let reduced_b = partial_trace(&joint, &[1, 2]).unwrap();
        assert!(max_abs_diff(reduced_b.matrix(), &b) < 1e-15);
    }

    #[test]
    fn partial_trace_rejects_empty_and_out_of_range() {
        let rho = DensityMatrix::new(identity(4) * c(0.25, 0.)).unwrap();
        assert!(matches!(partial_trace(&rho, &[]), Err(Error::Argument(_))));
        assert!(matches!(partial_trace(&rho, &[2]), Err(Error::Argument(_))));
    }

    #[test]
    fn partial_trace_keeps_middle_subsystem() {
        // |g e g> keeps qubit 1 as |e>.
        let v = ket(&[0, 1, 0]);
        let rho = DensityMatrix::new(&v * v.adjoint()).unwrap();
        let mid = partial_trace(&rho, &[1]).unwrap();
        assert!(max_abs_diff(mid.matrix(), &diag_real(&[0., 1.])) < 1e-15);
    }

    #[test]
    fn unitary_at_zero_time_is_identity() {
        let h = HermitianOperator::new(sigma_x() + sigma_z()).unwrap();
        assert!(max_abs_diff(&unitary_from_hamiltonian(&h, 0.0), &identity(2)) < 1e-14);
    }

    #[test]
    fn sigma_z_exponential_at_pi() {
        let h = HermitianOperator::new(sigma_z()).unwrap();
        let u = unitary_from_hamiltonian(&h, std::f64::consts::PI);
        assert!((u[(0, 0)].norm() - 1.0).abs() < 1e-14);
        assert!((u[(0, 0)] - c(-1., 0.)).norm() < 1e-14);
        assert!((u[(1, 1)] - c(-1., 0.)).norm() < 1e-14);
    }

    #[test]
    fn exchange_block_swaps_at_quarter_period() {
        // J(XX + YY) with J tau = pi/4 fully transfers |ge> into |eg>.
        let j = 1.0;
        let h = (tensor_product(&sigma_x(), &sigma_x()).unwrap() + tensor_product(&sigma_y(), &sigma_y()).unwrap())
            * c(j, 0.);
        let h = HermitianOperator::new(h).unwrap();
        let tau = std::f64::consts::FRAC_PI_4 / j;
        let out = unitary_from_hamiltonian(&h, tau) * ket(&[0, 1]);
        assert!(out[1].norm_sqr() < 1e-24);
        assert!((out[2].norm_sqr() - 1.0).abs() < 1e-12);
        // -i sin(2 J tau) phase on the transferred amplitude
        assert!((out[2] - c(0., -1.)).norm() < 1e-12);
    }

    #[test]
    fn non_hermitian_operator_rejected() {
        assert!(matches!(
            HermitianOperator::new(sigma_minus()),
            Err(Error::Validation(_))
        ));
    }

    #[test]
    fn validation_reports() {
        assert!(validate_density_matrix(&(identity(2) * c(0.5, 0.)), 1e-10).passed());
        let bad = validate_density_matrix(&diag_real(&[1.5, -0.5]), 1e-10);
        assert!(bad.trace_ok() && bad.hermitian_ok());
        assert!(!bad.positive_ok());
        assert!((bad.min_eigenvalue + 0.5).abs() < 1e-14);
        let skew = validate_density_matrix(&(identity(2) * c(0.5, 0.) + sigma_minus()), 1e-10);
        assert!(!skew.hermitian_ok());
    }

    #[test]
    fn density_matrix_shape_checks() {
        assert!(DensityMatrix::new(identity(3) * c(1. / 3., 0.)).is_err());
        assert!(DensityMatrix::new(identity(64) * c(1. / 64., 0.)).is_err());
        let rho = DensityMatrix::new(identity(8) * c(0.125, 0.)).unwrap();
        assert_eq!(rho.qubit_dims(), vec![2, 2, 2]);
    }
}
