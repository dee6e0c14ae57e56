//! Grover search on a density matrix, with a local noise channel applied
//! after every iteration.
//!
//! The oracle is the phase oracle `O = I - 2|xi><xi|` acting directly on the
//! register. [`run_noisy`] executes:
//!
//! 1. `rho = |0...0><0...0|`
//! 2. `rho = H^n rho H^n`
//! 3. `floor(pi/4 sqrt(N))` times: `rho = G rho G^dagger`, then the local noise channel
//! 4. return `<xi|rho|xi>`

use std::f64::consts::FRAC_PI_4;

use num_complex::Complex64;

use crate::channel::{KrausChannel, NoiseFamily, QubitSuperoperator};
use crate::error::{Error, Result};
use crate::linalg::{gates, ComplexMatrix, ZERO};
use crate::state::{
    basis_state, check_density, check_qubits, density_from_pure, success_probability,
    DensityMatrix, ValidationLevel,
};

/// A search problem: `n` qubits, `N = 2^n` elements, one marked element.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct GroverInstance {
    qubits: usize,
    size: usize,
    marked: usize,
    iterations: usize,
}

impl GroverInstance {
    pub fn new(qubits: usize, marked: usize) -> Result<Self> {
        let size = check_qubits(qubits)?;
        if marked >= size {
            return Err(Error::IndexOutOfRange {
                index: marked,
                dim: size,
            });
        }
        Ok(Self {
            qubits,
            size,
            marked,
            iterations: iteration_count(size),
        })
    }

    /// Marks the element in the middle of the search space, `2^(n-1)`.
    pub fn with_default_marked(qubits: usize) -> Result<Self> {
        check_qubits(qubits)?;
        Self::new(qubits, default_marked(qubits))
    }

    pub fn qubits(&self) -> usize {
        self.qubits
    }

    pub fn size(&self) -> usize {
        self.size
    }

    pub fn marked(&self) -> usize {
        self.marked
    }

    pub fn iterations(&self) -> usize {
        self.iterations
    }

    /// The angle with `sin(theta) = 1/sqrt(N)`.
    pub fn theta(&self) -> f64 {
        (1.0 / (self.size as f64).sqrt()).asin()
    }
}

pub fn default_marked(qubits: usize) -> usize {
    1 << qubits.saturating_sub(1)
}

/// `floor(pi/4 * sqrt(N))`.
pub fn iteration_count(size: usize) -> usize {
    (FRAC_PI_4 * (size as f64).sqrt()).floor() as usize
}

/// `diag(1, ..., -1, ..., 1)` with the sign flip at the marked element.
pub fn oracle_matrix(inst: &GroverInstance) -> ComplexMatrix {
    let mut diag = vec![1.0; inst.size];
    diag[inst.marked] = -1.0;
    ComplexMatrix::from_real_diagonal(&diag)
}

/// `2|psi><psi| - I` for the flat state `|psi>`: `2/N - 1` on the diagonal
/// and `2/N` elsewhere.
pub fn diffusion_matrix(qubits: usize) -> Result<ComplexMatrix> {
    let size = check_qubits(qubits)?;
    let off = 2.0 / size as f64;
    let mut m = ComplexMatrix::zeros(size, size);
    for i in 0..size {
        for j in 0..size {
            m[(i, j)] = Complex64::new(if i == j { off - 1.0 } else { off }, 0.0);
        }
    }
    Ok(m)
}

/// `H^{(x) n}`.
pub fn hadamard_transform(qubits: usize) -> Result<ComplexMatrix> {
    check_qubits(qubits)?;
    let h = gates::hadamard();
    Ok((1..qubits).fold(h.clone(), |acc, _| acc.kron(&h)))
}

/// The Grover iteration `G = D O`.
pub fn grover_step(inst: &GroverInstance) -> ComplexMatrix {
    let d = diffusion_matrix(inst.qubits).expect("instance qubit count is valid");
    d.matmul(&oracle_matrix(inst)).expect("matching dimensions")
}

/// `(alpha_k, beta_k)`: amplitudes of each unmarked element and of the
/// marked element after `k` noiseless iterations from the flat state.
pub fn closed_form_amplitudes(inst: &GroverInstance, k: usize) -> (f64, f64) {
    let angle = (2 * k + 1) as f64 * inst.theta();
    let unmarked = angle.cos() / ((inst.size - 1) as f64).sqrt();
    (unmarked, angle.sin())
}

/// `sin^2((2k + 1) theta)`.
pub fn closed_form_success(inst: &GroverInstance, k: usize) -> f64 {
    let (_, beta) = closed_form_amplitudes(inst, k);
    beta * beta
}

/// How `G rho G^dagger` is computed.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Propagation {
    /// Exploits the structure of `O` and `D`: the oracle negates one row and
    /// one column and the diffusion inverts rows and columns about their
    /// mean. `O(N^2)` per iteration.
    #[default]
    Structured,
    /// Dense `N x N` matrix products with the explicit `G` and `H^n`.
    Dense,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RunOptions {
    pub propagation: Propagation,
    /// Checks applied to the state after initialization and after every
    /// Grover iteration and noise application.
    pub validation: ValidationLevel,
    pub tolerance: f64,
}

impl Default for RunOptions {
    fn default() -> Self {
        Self {
            propagation: Propagation::Structured,
            validation: ValidationLevel::Structural,
            tolerance: 1e-9,
        }
    }
}

impl RunOptions {
    pub fn dense() -> Self {
        Self {
            propagation: Propagation::Dense,
            ..Self::default()
        }
    }

    pub fn fully_validated() -> Self {
        Self {
            validation: ValidationLevel::Full,
            ..Self::default()
        }
    }
}

/// Success probability of the noisy procedure with default options.
pub fn run_noisy(inst: &GroverInstance, family: NoiseFamily) -> Result<f64> {
    run_noisy_with(inst, family, &RunOptions::default())
}

pub fn run_noisy_with(
    inst: &GroverInstance,
    family: NoiseFamily,
    opts: &RunOptions,
) -> Result<f64> {
    let rho = simulate_noisy(inst, family, opts)?;
    // Rounding can push a validated diagonal entry a few ulps outside [0, 1].
    Ok(success_probability(&rho, inst.marked)?.clamp(0.0, 1.0))
}

/// The final state of the noisy procedure, before measurement.
pub fn simulate_noisy(
    inst: &GroverInstance,
    family: NoiseFamily,
    opts: &RunOptions,
) -> Result<DensityMatrix> {
    let n = inst.qubits;
    let noise = QubitSuperoperator::from_family(family);
    let ground = density_from_pure(&basis_state(n, 0)?).into_matrix();

    let mut rho = match opts.propagation {
        Propagation::Structured => {
            let h = QubitSuperoperator::new(&KrausChannel::unitary(gates::hadamard())?)?;
            let mut m = ground;
            h.apply_all_in_place(m.as_mut_slice(), n);
            m
        }
        Propagation::Dense => ground.conjugate_by(&hadamard_transform(n)?)?,
    };
    validate_step(&rho, opts, || "after initialization".into())?;

    let step = match opts.propagation {
        Propagation::Dense => Some(grover_step(inst)),
        Propagation::Structured => None,
    };
    for it in 1..=inst.iterations {
        match &step {
            Some(g) => rho = rho.conjugate_by(g)?,
            None => conjugate_grover_in_place(rho.as_mut_slice(), inst.size, inst.marked),
        }
        validate_step(&rho, opts, || format!("after Grover iteration {it}"))?;
        noise.apply_all_in_place(rho.as_mut_slice(), n);
        validate_step(&rho, opts, || format!("after noise application {it}"))?;
    }
    Ok(DensityMatrix::from_trusted(n, rho))
}

fn validate_step(
    rho: &ComplexMatrix,
    opts: &RunOptions,
    context: impl FnOnce() -> String,
) -> Result<()> {
    if opts.validation == ValidationLevel::Off {
        return Ok(());
    }
    let report = check_density(rho, opts.tolerance, opts.validation)?;
    if report.passed() {
        Ok(())
    } else {
        Err(Error::InvalidDensity {
            context: context(),
            report,
        })
    }
}

/// `rho <- D O rho O D` for a row-major `size x size` matrix.
pub(crate) fn conjugate_grover_in_place(data: &mut [Complex64], size: usize, marked: usize) {
    debug_assert_eq!(data.len(), size * size);
    // Oracle: negate row and column `marked`; the corner is negated twice.
    for j in 0..size {
        data[marked * size + j] = -data[marked * size + j];
        data[j * size + marked] = -data[j * size + marked];
    }

    // D rho: (D rho)_ij = 2 * mean_i(rho_ij) - rho_ij, column by column.
    let scale = 2.0 / size as f64;
    let mut col_sums = vec![ZERO; size];
    for row in data.chunks_exact(size) {
        for (s, z) in col_sums.iter_mut().zip(row) {
            *s += z;
        }
    }
    for row in data.chunks_exact_mut(size) {
        for (z, s) in row.iter_mut().zip(&col_sums) {
            *z = s * scale - *z;
        }
    }
    // (D rho) D: the same reflection across each row, since D is real symmetric.
    for row in data.chunks_exact_mut(size) {
        let shift = row.iter().sum::<Complex64>() * scale;
        for z in row.iter_mut() {
            *z = shift - *z;
        }
    }
}
