//! Kraus-form quantum channels.
//!
//! Six one-parameter families of one-qubit noise are provided. A family is
//! lifted to an `n`-qubit register as a local channel: the same one-qubit
//! channel acts independently on every qubit. Two routes compute the lifted
//! channel:
//!
//! * [`apply_local_noise`] applies the one-qubit channel to each qubit in
//!   turn through index arithmetic, never forming a `2^n x 2^n` operator.
//! * [`expand_local_kraus`] builds every tensor product
//!   `e_{i_1} (x) ... (x) e_{i_n}` explicitly. It is kept as a reference for
//!   small registers only.
//!
//! Qubit 0 is the leftmost tensor factor, i.e. the most significant bit of a
//! basis index.

use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::gates::{pauli_x, pauli_y, pauli_z};
use crate::linalg::{ComplexMatrix, ZERO};
use crate::state::DensityMatrix;

/// Completeness tolerance on `max |sum E^dagger E - I|`.
pub const COMPLETENESS_TOLERANCE: f64 = 1e-10;

/// Largest register for which [`expand_local_kraus`] will build operators.
pub const EXPANSION_LIMIT: usize = 4;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum NoiseKind {
    Depolarizing,
    AmplitudeDamping,
    PhaseDamping,
    BitFlip,
    PhaseFlip,
    BitPhaseFlip,
}

impl NoiseKind {
    pub const ALL: [NoiseKind; 6] = [
        NoiseKind::Depolarizing,
        NoiseKind::AmplitudeDamping,
        NoiseKind::PhaseDamping,
        NoiseKind::BitFlip,
        NoiseKind::PhaseFlip,
        NoiseKind::BitPhaseFlip,
    ];

    pub fn name(self) -> &'static str {
        match self {
            NoiseKind::Depolarizing => "depolarizing",
            NoiseKind::AmplitudeDamping => "amplitude-damping",
            NoiseKind::PhaseDamping => "phase-damping",
            NoiseKind::BitFlip => "bit-flip",
            NoiseKind::PhaseFlip => "phase-flip",
            NoiseKind::BitPhaseFlip => "bit-phase-flip",
        }
    }

    /// Whether the channel fixes the maximally mixed state.
    pub fn is_unital(self) -> bool {
        self != NoiseKind::AmplitudeDamping
    }
}

impl fmt::Display for NoiseKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for NoiseKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        NoiseKind::ALL
            .into_iter()
            .find(|k| k.name() == s)
            .ok_or_else(|| Error::InvalidConfig(format!("unknown noise family '{s}'")))
    }
}

/// A noise family together with its strength `alpha` in `[0, 1]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NoiseFamily {
    kind: NoiseKind,
    alpha: f64,
}

impl NoiseFamily {
    pub fn new(kind: NoiseKind, alpha: f64) -> Result<Self> {
        if !(0.0..=1.0).contains(&alpha) {
            return Err(Error::AlphaOutOfRange(alpha));
        }
        Ok(Self { kind, alpha })
    }

    pub fn kind(&self) -> NoiseKind {
        self.kind
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }
}

/// A set of Kraus operators satisfying `sum E_k^dagger E_k = I`.
#[derive(Debug, Clone, PartialEq)]
pub struct KrausChannel {
    operators: Vec<ComplexMatrix>,
    dim: usize,
}

impl KrausChannel {
    pub fn new(operators: Vec<ComplexMatrix>) -> Result<Self> {
        let first = operators.first().ok_or(Error::EmptyKraus)?;
        let dim = first.rows();
        for op in &operators {
            if op.rows() != dim || op.cols() != dim {
                return Err(Error::DimensionMismatch(format!(
                    "Kraus operator {}x{} in a set of {dim}x{dim} operators",
                    op.rows(),
                    op.cols()
                )));
            }
        }
        let channel = Self { operators, dim };
        let deviation = channel.completeness_deviation();
        if !(deviation <= COMPLETENESS_TOLERANCE) {
            return Err(Error::IncompleteKraus { deviation });
        }
        Ok(channel)
    }

    /// The channel `rho -> U rho U^dagger`. Fails if `u` is not unitary.
    pub fn unitary(u: ComplexMatrix) -> Result<Self> {
        Self::new(vec![u])
    }

    pub fn operators(&self) -> &[ComplexMatrix] {
        &self.operators
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn len(&self) -> usize {
        self.operators.len()
    }

    pub fn is_empty(&self) -> bool {
        self.operators.is_empty()
    }

    /// `max |sum E_k^dagger E_k - I|`.
    pub fn completeness_deviation(&self) -> f64 {
        let mut sum = ComplexMatrix::zeros(self.dim, self.dim);
        for op in &self.operators {
            let term = op.dagger().matmul(op).expect("square operators");
            sum = sum.add(&term).expect("same dimension");
        }
        sum.max_abs_diff(&ComplexMatrix::identity(self.dim))
    }
}

/// The one-qubit Kraus set of a noise family.
pub fn make_family(family: NoiseFamily) -> KrausChannel {
    let a = family.alpha;
    let id = ComplexMatrix::identity(2);
    let keep = (1.0 - a).sqrt();
    let operators = match family.kind {
        NoiseKind::Depolarizing => {
            let s = (a / 3.0).sqrt();
            vec![
                id.scale_real(keep),
                pauli_x().scale_real(s),
                pauli_y().scale_real(s),
                pauli_z().scale_real(s),
            ]
        }
        NoiseKind::AmplitudeDamping => vec![
            ComplexMatrix::from_real_diagonal(&[1.0, keep]),
            ComplexMatrix::from_real(2, 2, &[0.0, a.sqrt(), 0.0, 0.0]).unwrap(),
        ],
        NoiseKind::PhaseDamping => vec![
            ComplexMatrix::from_real_diagonal(&[1.0, keep]),
            ComplexMatrix::from_real_diagonal(&[0.0, a.sqrt()]),
        ],
        NoiseKind::BitFlip => vec![id.scale_real(keep), pauli_x().scale_real(a.sqrt())],
        NoiseKind::PhaseFlip => vec![id.scale_real(keep), pauli_z().scale_real(a.sqrt())],
        NoiseKind::BitPhaseFlip => vec![id.scale_real(keep), pauli_y().scale_real(a.sqrt())],
    };
    KrausChannel::new(operators).expect("family Kraus sets are complete for alpha in [0, 1]")
}

/// `sum_k E_k rho E_k^dagger` with explicit matrix products.
pub fn apply_kraus(rho: &DensityMatrix, channel: &KrausChannel) -> Result<DensityMatrix> {
    if rho.dim() != channel.dim {
        return Err(Error::DimensionMismatch(format!(
            "channel of dimension {} applied to state of dimension {}",
            channel.dim,
            rho.dim()
        )));
    }
    let mut out = ComplexMatrix::zeros(rho.dim(), rho.dim());
    for op in &channel.operators {
        out = out.add(&rho.matrix().conjugate_by(op)?)?;
    }
    Ok(DensityMatrix::from_trusted(rho.qubits(), out))
}

/// All `m^n` tensor products of the family's `m` one-qubit operators.
///
/// Operator tuples are enumerated with the first qubit's index varying
/// slowest, so the result is ordered like the Cartesian product
/// `{e_i1} x {e_i2} x ... x {e_in}`.
pub fn expand_local_kraus(family: NoiseFamily, qubits: usize) -> Result<KrausChannel> {
    if qubits == 0 {
        return Err(Error::InvalidQubitCount(qubits));
    }
    if qubits > EXPANSION_LIMIT {
        return Err(Error::ExpansionLimit {
            qubits,
            limit: EXPANSION_LIMIT,
        });
    }
    let single = make_family(family);
    let mut operators = single.operators.clone();
    for _ in 1..qubits {
        operators = operators
            .iter()
            .flat_map(|acc| single.operators.iter().map(move |e| acc.kron(e)))
            .collect();
    }
    let dim = 1 << qubits;
    let channel = KrausChannel { operators, dim };
    // Rounding grows with the number of products; the looser bound applies here.
    let deviation = channel.completeness_deviation();
    if !(deviation <= 1e-9) {
        return Err(Error::IncompleteKraus { deviation });
    }
    Ok(channel)
}

/// A one-qubit channel in superoperator form, ready to act on any qubit of a
/// register.
///
/// With the local 2x2 block of `rho` flattened as `(row bit, col bit)`, the
/// channel is the 4x4 matrix `S[(r,c),(a,b)] = sum_k E_k[r,a] conj(E_k[c,b])`.
/// Applying it costs `O(4^n)` per qubit regardless of the number of Kraus
/// operators.
#[derive(Debug, Clone, PartialEq)]
pub struct QubitSuperoperator {
    matrix: [[Complex64; 4]; 4],
}

impl QubitSuperoperator {
    pub fn new(channel: &KrausChannel) -> Result<Self> {
        if channel.dim != 2 {
            return Err(Error::DimensionMismatch(format!(
                "expected a one-qubit channel, got dimension {}",
                channel.dim
            )));
        }
        let mut matrix = [[ZERO; 4]; 4];
        for op in &channel.operators {
            for r in 0..2 {
                for c in 0..2 {
                    for a in 0..2 {
                        for b in 0..2 {
                            matrix[r * 2 + c][a * 2 + b] += op[(r, a)] * op[(c, b)].conj();
                        }
                    }
                }
            }
        }
        Ok(Self { matrix })
    }

    pub fn from_family(family: NoiseFamily) -> Self {
        Self::new(&make_family(family)).expect("families are one-qubit channels")
    }

    /// Applies the channel in place to qubit `qubit` of a `2^n x 2^n`
    /// row-major matrix.
    pub(crate) fn apply_in_place(&self, data: &mut [Complex64], qubits: usize, qubit: usize) {
        let dim = 1usize << qubits;
        debug_assert_eq!(data.len(), dim * dim);
        debug_assert!(qubit < qubits);
        let bit = 1usize << (qubits - 1 - qubit);
        let s = &self.matrix;
        for r0 in (0..dim).filter(|r| r & bit == 0) {
            let r1 = r0 | bit;
            for c0 in (0..dim).filter(|c| c & bit == 0) {
                let c1 = c0 | bit;
                let idx = [r0 * dim + c0, r0 * dim + c1, r1 * dim + c0, r1 * dim + c1];
                let v = [data[idx[0]], data[idx[1]], data[idx[2]], data[idx[3]]];
                for (row, &i) in s.iter().zip(&idx) {
                    data[i] = row[0] * v[0] + row[1] * v[1] + row[2] * v[2] + row[3] * v[3];
                }
            }
        }
    }

    /// Applies the channel to every qubit, qubit 0 first.
    pub(crate) fn apply_all_in_place(&self, data: &mut [Complex64], qubits: usize) {
        for q in 0..qubits {
            self.apply_in_place(data, qubits, q);
        }
    }
}

/// Applies a one-qubit channel to a single qubit of the register.
pub fn apply_to_qubit(
    rho: &DensityMatrix,
    channel: &KrausChannel,
    qubit: usize,
) -> Result<DensityMatrix> {
    if qubit >= rho.qubits() {
        return Err(Error::IndexOutOfRange {
            index: qubit,
            dim: rho.qubits(),
        });
    }
    let sup = QubitSuperoperator::new(channel)?;
    let mut m = rho.matrix().clone();
    sup.apply_in_place(m.as_mut_slice(), rho.qubits(), qubit);
    Ok(DensityMatrix::from_trusted(rho.qubits(), m))
}

/// The local channel of `family` on every qubit of `rho`, applied qubit by
/// qubit from 0 to `n - 1`.
pub fn apply_local_noise(rho: &DensityMatrix, family: NoiseFamily) -> DensityMatrix {
    let sup = QubitSuperoperator::from_family(family);
    let mut m = rho.matrix().clone();
    sup.apply_all_in_place(m.as_mut_slice(), rho.qubits());
    DensityMatrix::from_trusted(rho.qubits(), m)
}
