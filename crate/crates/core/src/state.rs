//! Pure and mixed register states and computational-basis measurement.

use std::fmt;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::linalg::{hermitian_min_eigenvalue, ComplexMatrix, ONE, ZERO};

/// Largest register the simulator accepts.
pub const MAX_QUBITS: usize = 12;

/// Default bound on `max|rho - rho^dagger|` and `|tr(rho) - 1|`.
pub const DEFAULT_TOLERANCE: f64 = 1e-10;

/// Smallest eigenvalue still accepted as positive semi-definite is `-EIGENVALUE_FLOOR`.
pub const EIGENVALUE_FLOOR: f64 = 1e-9;

const NORM_TOLERANCE: f64 = 1e-10;

pub(crate) fn check_qubits(qubits: usize) -> Result<usize> {
    if qubits == 0 || qubits > MAX_QUBITS {
        return Err(Error::InvalidQubitCount(qubits));
    }
    Ok(1 << qubits)
}

/// Normalized state vector of an `n`-qubit register.
#[derive(Debug, Clone, PartialEq)]
pub struct PureState {
    qubits: usize,
    amplitudes: Vec<Complex64>,
}

impl PureState {
    pub fn new(qubits: usize, amplitudes: Vec<Complex64>) -> Result<Self> {
        let dim = check_qubits(qubits)?;
        if amplitudes.len() != dim {
            return Err(Error::DimensionMismatch(format!(
                "{qubits} qubits need {dim} amplitudes, got {}",
                amplitudes.len()
            )));
        }
        let norm: f64 = amplitudes.iter().map(|a| a.norm_sqr()).sum();
        let deviation = (norm - 1.0).abs();
        if !(deviation <= NORM_TOLERANCE) {
            return Err(Error::NotNormalized { deviation });
        }
        Ok(Self { qubits, amplitudes })
    }

    pub fn qubits(&self) -> usize {
        self.qubits
    }

    pub fn dim(&self) -> usize {
        self.amplitudes.len()
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amplitudes
    }

    /// Applies a unitary to the state. The result is renormalization-checked.
    pub fn apply(&self, unitary: &ComplexMatrix) -> Result<PureState> {
        PureState::new(self.qubits, unitary.mul_vec(&self.amplitudes)?)
    }
}

/// `|index>` in the computational basis; qubit 0 is the most significant bit.
pub fn basis_state(qubits: usize, index: usize) -> Result<PureState> {
    let dim = check_qubits(qubits)?;
    if index >= dim {
        return Err(Error::IndexOutOfRange { index, dim });
    }
    let mut amplitudes = vec![ZERO; dim];
    amplitudes[index] = ONE;
    Ok(PureState { qubits, amplitudes })
}

/// Equal-weight superposition of all `2^n` basis states.
pub fn uniform_superposition(qubits: usize) -> Result<PureState> {
    let dim = check_qubits(qubits)?;
    let amp = Complex64::new(1.0 / (dim as f64).sqrt(), 0.0);
    Ok(PureState {
        qubits,
        amplitudes: vec![amp; dim],
    })
}

/// A validated density matrix over `n` qubits.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityMatrix {
    qubits: usize,
    matrix: ComplexMatrix,
}

impl DensityMatrix {
    /// Wraps `matrix` after full validation at the default tolerances.
    pub fn new(matrix: ComplexMatrix) -> Result<Self> {
        let qubits = qubits_for_dim(&matrix)?;
        let report = validate_density(&matrix, DEFAULT_TOLERANCE)?;
        if !report.passed() {
            return Err(Error::InvalidDensity {
                context: "on construction".into(),
                report,
            });
        }
        Ok(Self { qubits, matrix })
    }

    /// Wraps a matrix produced by a trace-preserving map of a valid state.
    pub(crate) fn from_trusted(qubits: usize, matrix: ComplexMatrix) -> Self {
        debug_assert_eq!(matrix.rows(), 1 << qubits);
        Self { qubits, matrix }
    }

    pub fn maximally_mixed(qubits: usize) -> Result<Self> {
        let dim = check_qubits(qubits)?;
        Ok(Self {
            qubits,
            matrix: ComplexMatrix::identity(dim).scale_real(1.0 / dim as f64),
        })
    }

    pub fn qubits(&self) -> usize {
        self.qubits
    }

    pub fn dim(&self) -> usize {
        self.matrix.rows()
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.matrix
    }

    pub fn into_matrix(self) -> ComplexMatrix {
        self.matrix
    }

    /// Real parts of the diagonal, i.e. the computational-basis distribution.
    pub fn probabilities(&self) -> Vec<f64> {
        self.matrix.diagonal().iter().map(|z| z.re).collect()
    }
}

fn qubits_for_dim(matrix: &ComplexMatrix) -> Result<usize> {
    if !matrix.is_square() {
        return Err(Error::NotSquare {
            rows: matrix.rows(),
            cols: matrix.cols(),
        });
    }
    let dim = matrix.rows();
    if !dim.is_power_of_two() || dim < 2 {
        return Err(Error::DimensionMismatch(format!(
            "density matrix side {dim} is not a power of two >= 2"
        )));
    }
    let qubits = dim.trailing_zeros() as usize;
    check_qubits(qubits)?;
    Ok(qubits)
}

/// `|psi><psi|`.
pub fn density_from_pure(psi: &PureState) -> DensityMatrix {
    DensityMatrix {
        qubits: psi.qubits,
        matrix: ComplexMatrix::outer(&psi.amplitudes, &psi.amplitudes),
    }
}

/// Probability of observing basis state `xi`: the real part of `rho[xi, xi]`.
pub fn success_probability(rho: &DensityMatrix, xi: usize) -> Result<f64> {
    let dim = rho.dim();
    if xi >= dim {
        return Err(Error::IndexOutOfRange { index: xi, dim });
    }
    Ok(rho.matrix[(xi, xi)].re)
}

/// Measured deviations from the three density-matrix laws.
#[derive(Debug, Clone, PartialEq)]
pub struct ValidationReport {
    pub tolerance: f64,
    /// `max |rho - rho^dagger|`.
    pub hermitian_deviation: f64,
    /// `|tr(rho) - 1|`.
    pub trace_deviation: f64,
    pub min_diagonal: f64,
    /// `None` when the eigenvalue check was skipped or the matrix was not Hermitian.
    pub min_eigenvalue: Option<f64>,
}

impl ValidationReport {
    pub fn hermitian_ok(&self) -> bool {
        self.hermitian_deviation <= self.tolerance
    }

    pub fn trace_ok(&self) -> bool {
        self.trace_deviation <= self.tolerance
    }

    /// Positivity. Without an eigenvalue this falls back to the necessary
    /// condition that every diagonal entry is non-negative.
    pub fn positive_ok(&self) -> bool {
        let floor = -self.eigenvalue_floor();
        self.min_diagonal >= floor && self.min_eigenvalue.is_none_or(|e| e >= floor)
    }

    pub fn passed(&self) -> bool {
        self.hermitian_ok() && self.trace_ok() && self.positive_ok()
    }

    fn eigenvalue_floor(&self) -> f64 {
        self.tolerance.max(EIGENVALUE_FLOOR)
    }
}

impl fmt::Display for ValidationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mark = |ok: bool| if ok { "ok" } else { "FAIL" };
        write!(
            f,
            "hermitian {} ({:.3e}), trace {} ({:.3e}), positive {} (min diag {:.3e}",
            mark(self.hermitian_ok()),
            self.hermitian_deviation,
            mark(self.trace_ok()),
            self.trace_deviation,
            mark(self.positive_ok()),
            self.min_diagonal,
        )?;
        if let Some(e) = self.min_eigenvalue {
            write!(f, ", min eig {e:.3e}")?;
        }
        write!(f, ")")
    }
}

/// How much work a validation pass does.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum ValidationLevel {
    /// No checks.
    Off,
    /// Hermiticity, trace and non-negative diagonal; `O(d^2)`.
    #[default]
    Structural,
    /// Structural checks plus the minimum eigenvalue; `O(d^3)`.
    Full,
}

/// Full check of all three density-matrix laws. Hermiticity and trace are
/// judged against `tol`; positivity against `-max(tol, 1e-9)`.
pub fn validate_density(rho: &ComplexMatrix, tol: f64) -> Result<ValidationReport> {
    check_density(rho, tol, ValidationLevel::Full)
}

pub fn check_density(
    rho: &ComplexMatrix,
    tol: f64,
    level: ValidationLevel,
) -> Result<ValidationReport> {
    let trace = rho.trace()?;
    let hermitian_deviation = rho.hermiticity_deviation();
    let min_diagonal = rho
        .diagonal()
        .iter()
        .map(|z| z.re)
        .fold(f64::INFINITY, f64::min);
    let min_eigenvalue = match level {
        ValidationLevel::Full if hermitian_deviation <= crate::linalg::HERMITIAN_TOLERANCE => {
            Some(hermitian_min_eigenvalue(rho)?)
        }
        _ => None,
    };
    let mut report = ValidationReport {
        tolerance: tol,
        hermitian_deviation,
        trace_deviation: (trace - ONE).norm(),
        min_diagonal,
        min_eigenvalue,
    };
    if level == ValidationLevel::Off {
        report.hermitian_deviation = 0.0;
        report.trace_deviation = 0.0;
        report.min_diagonal = 0.0;
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::gates::pauli_x;

    fn c(re: f64) -> Complex64 {
        Complex64::new(re, 0.0)
    }

    #[test]
    fn basis_states() {
        assert_eq!(basis_state(1, 0).unwrap().amplitudes(), &[ONE, ZERO]);
        assert_eq!(basis_state(2, 3).unwrap().amplitudes(), &[ZERO, ZERO, ZERO, ONE]);
        let e4 = basis_state(3, 4).unwrap();
        assert_eq!(e4.amplitudes()[4], ONE);
        assert_eq!(e4.amplitudes().iter().filter(|a| **a == ZERO).count(), 7);
    }

    #[test]
    fn basis_state_out_of_range() {
        assert!(matches!(
            basis_state(2, 4),
            Err(Error::IndexOutOfRange { index: 4, dim: 4 })
        ));
        assert!(matches!(basis_state(0, 0), Err(Error::InvalidQubitCount(0))));
    }

    #[test]
    fn uniform_superpositions() {
        let s = std::f64::consts::FRAC_1_SQRT_2;
        let one = uniform_superposition(1).unwrap();
        assert!(one.amplitudes().iter().all(|a| (a - c(s)).norm() < 1e-15));
        let two = uniform_superposition(2).unwrap();
        assert!(two.amplitudes().iter().all(|a| (a - c(0.5)).norm() < 1e-15));
    }

    #[test]
    fn pure_state_rejects_unnormalized() {
        assert!(matches!(
            PureState::new(1, vec![ONE, ONE]),
            Err(Error::NotNormalized { .. })
        ));
        assert!(PureState::new(1, vec![ONE]).is_err());
    }

    #[test]
    fn density_from_pure_examples() {
        let rho0 = density_from_pure(&basis_state(1, 0).unwrap());
        assert_eq!(rho0.matrix(), &ComplexMatrix::from_real_diagonal(&[1., 0.]));

        let plus = density_from_pure(&uniform_superposition(1).unwrap());
        let expected = ComplexMatrix::from_real(2, 2, &[0.5, 0.5, 0.5, 0.5]).unwrap();
        assert!(plus.matrix().max_abs_diff(&expected) < 1e-15);

        let s = std::f64::consts::FRAC_1_SQRT_2;
        let minus = PureState::new(1, vec![c(s), c(-s)]).unwrap();
        let expected = ComplexMatrix::from_real(2, 2, &[0.5, -0.5, -0.5, 0.5]).unwrap();
        assert!(density_from_pure(&minus).matrix().max_abs_diff(&expected) < 1e-15);
    }

    #[test]
    fn pure_density_is_idempotent() {
        let psi = PureState::new(2, vec![c(0.5), Complex64::new(0.0, 0.5), c(-0.5), c(0.5)]).unwrap();
        let rho = density_from_pure(&psi);
        let sq = rho.matrix().matmul(rho.matrix()).unwrap();
        assert!((sq.trace().unwrap() - ONE).norm() < 1e-10);
        assert!(validate_density(rho.matrix(), 1e-10).unwrap().passed());
    }

    #[test]
    fn success_probability_examples() {
        let rho = density_from_pure(&basis_state(3, 5).unwrap());
        assert_eq!(success_probability(&rho, 5).unwrap(), 1.0);

        let mixed = DensityMatrix::maximally_mixed(3).unwrap();
        assert!((success_probability(&mixed, 2).unwrap() - 0.125).abs() < 1e-15);

        for n in 1..=5 {
            let flat = density_from_pure(&uniform_superposition(n).unwrap());
            let expected = 1.0 / (1usize << n) as f64;
            for xi in 0..(1 << n) {
                assert!((success_probability(&flat, xi).unwrap() - expected).abs() < 1e-15);
            }
        }
    }

    #[test]
    fn success_probability_out_of_range() {
        let rho = DensityMatrix::maximally_mixed(2).unwrap();
        assert!(matches!(
            success_probability(&rho, 4),
            Err(Error::IndexOutOfRange { .. })
        ));
    }

    #[test]
    fn validation_examples() {
        let half = ComplexMatrix::identity(2).scale_real(0.5);
        assert!(validate_density(&half, 1e-10).unwrap().passed());

        let r = validate_density(&ComplexMatrix::from_real_diagonal(&[1.5, -0.5]), 1e-10).unwrap();
        assert!(r.trace_ok());
        assert!(r.hermitian_ok());
        assert!(!r.positive_ok());
        assert!((r.min_eigenvalue.unwrap() + 0.5).abs() < 1e-12);

        let r = validate_density(&pauli_x(), 1e-10).unwrap();
        assert!(r.hermitian_ok());
        assert!(!r.trace_ok());
        assert!(!r.passed());
    }

    #[test]
    fn validation_flags_non_hermitian() {
        let m = ComplexMatrix::from_real(2, 2, &[0.5, 0.3, 0.0, 0.5]).unwrap();
        let r = validate_density(&m, 1e-10).unwrap();
        assert!(!r.hermitian_ok());
        assert!(r.min_eigenvalue.is_none());
        assert!(!r.passed());
    }

    #[test]
    fn density_constructor_validates() {
        assert!(DensityMatrix::new(ComplexMatrix::identity(2).scale_real(0.5)).is_ok());
        assert!(matches!(
            DensityMatrix::new(ComplexMatrix::from_real_diagonal(&[1.5, -0.5])),
            Err(Error::InvalidDensity { .. })
        ));
        assert!(DensityMatrix::new(ComplexMatrix::identity(3).scale_real(1.0 / 3.0)).is_err());
    }

    #[test]
    fn structural_check_skips_eigenvalues() {
        // Hermitian, unit trace, non-negative diagonal but indefinite.
        let m = ComplexMatrix::from_real(2, 2, &[0.5, 0.9, 0.9, 0.5]).unwrap();
        let cheap = check_density(&m, 1e-10, ValidationLevel::Structural).unwrap();
        assert!(cheap.passed());
        let full = check_density(&m, 1e-10, ValidationLevel::Full).unwrap();
        assert!(!full.passed());
    }
}
