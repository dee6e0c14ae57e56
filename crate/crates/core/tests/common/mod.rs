//! Shared generators and reference computations for integration tests.
#![allow(dead_code)]

use noisy_grover::linalg::ComplexMatrix;
use noisy_grover::state::{DensityMatrix, PureState};
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn random_matrix(rng: &mut impl Rng, rows: usize, cols: usize) -> ComplexMatrix {
    let data = (0..rows * cols)
        .map(|_| Complex64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0)))
        .collect();
    ComplexMatrix::from_vec(rows, cols, data).unwrap()
}

pub fn random_hermitian(rng: &mut impl Rng, dim: usize) -> ComplexMatrix {
    let a = random_matrix(rng, dim, dim);
    a.add(&a.dagger()).unwrap().scale_real(0.5)
}

/// `A A^dagger / tr(A A^dagger)` for a random square `A`.
pub fn random_density(rng: &mut impl Rng, qubits: usize) -> DensityMatrix {
    let dim = 1 << qubits;
    let a = random_matrix(rng, dim, dim);
    let m = a.matmul(&a.dagger()).unwrap();
    let tr = m.trace().unwrap().re;
    // Symmetrize to remove rounding asymmetry from the product.
    let m = m.add(&m.dagger()).unwrap().scale_real(0.5 / tr);
    DensityMatrix::new(m).unwrap()
}

pub fn random_pure(rng: &mut impl Rng, qubits: usize) -> PureState {
    let dim = 1 << qubits;
    let raw: Vec<Complex64> = (0..dim)
        .map(|_| Complex64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0)))
        .collect();
    let norm = raw.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
    PureState::new(qubits, raw.iter().map(|z| z / norm).collect()).unwrap()
}

/// Characteristic polynomial coefficients `c_0..=c_n` (monic, `c_n = 1`) by
/// the Faddeev-LeVerrier recursion.
pub fn characteristic_polynomial(a: &ComplexMatrix) -> Vec<Complex64> {
    let n = a.rows();
    let id = ComplexMatrix::identity(n);
    let mut coeffs = vec![Complex64::new(0.0, 0.0); n + 1];
    coeffs[n] = Complex64::new(1.0, 0.0);
    let mut m = ComplexMatrix::zeros(n, n);
    for k in 1..=n {
        m = a.matmul(&m).unwrap().add(&id.scale(coeffs[n - k + 1])).unwrap();
        let am = a.matmul(&m).unwrap();
        coeffs[n - k] = -am.trace().unwrap() / k as f64;
    }
    coeffs
}

/// Smallest root of the characteristic polynomial of a Hermitian matrix.
///
/// All roots are real, so Newton's method started left of every root
/// (below `-||A||_F`) increases monotonically to the smallest one.
pub fn min_eigenvalue_by_charpoly(a: &ComplexMatrix) -> f64 {
    let c: Vec<f64> = characteristic_polynomial(a).iter().map(|z| z.re).collect();
    let frob = a.as_slice().iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
    let mut x = -frob - 1.0;
    for _ in 0..500 {
        let (mut p, mut dp) = (0.0, 0.0);
        for &ci in c.iter().rev() {
            dp = dp * x + p;
            p = p * x + ci;
        }
        if dp == 0.0 {
            break;
        }
        let step = p / dp;
        x -= step;
        if step.abs() < 1e-15 * (1.0 + x.abs()) {
            break;
        }
    }
    x
}

/// Integer-valued complex matrix, exact in floating point.
pub fn integer_matrix(rng: &mut impl Rng, rows: usize, cols: usize) -> ComplexMatrix {
    let data = (0..rows * cols)
        .map(|_| {
            Complex64::new(
                rng.random_range(-5i32..=5) as f64,
                rng.random_range(-5i32..=5) as f64,
            )
        })
        .collect();
    ComplexMatrix::from_vec(rows, cols, data).unwrap()
}
