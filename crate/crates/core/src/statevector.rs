//! Exact sparse state-vector mechanics.
//!
//! Qubit 0 is the leftmost position of a ket, so for a layout with registers
//! A, B and C the A qubits come first. A [`BasisLabel`] packs the bits into a
//! `u64` with qubit 0 as the most significant bit, which makes the natural
//! integer order of labels coincide with the lexicographic order of bit
//! strings.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use nalgebra::{Complex, DMatrix, SymmetricEigen};

use crate::distribution::{JointDistribution, Variable};
use crate::error::StateError;

pub type C64 = Complex<f64>;

/// Amplitudes below this magnitude are dropped.
pub const PRUNE_TOLERANCE: f64 = 1e-15;
/// Norm, unitarity and Hermiticity tolerance.
pub const NORM_TOLERANCE: f64 = 1e-12;
/// Slack allowed on the smallest eigenvalue of a density matrix.
pub const PSD_TOLERANCE: f64 = 1e-10;
pub const MAX_QUBITS: usize = 64;
/// Largest `keep` set for which a reduced density matrix is built.
pub const MAX_REDUCED_QUBITS: usize = 12;

/// A computational basis string, one bit per qubit.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct BasisLabel {
    width: u8,
    value: u64,
}

impl BasisLabel {
    /// Label from an integer whose most significant of `width` bits is qubit 0.
    pub fn new(value: u64, width: usize) -> Self {
        assert!(width <= MAX_QUBITS, "label width {width} exceeds {MAX_QUBITS}");
        debug_assert!(width == 64 || value >> width == 0);
        BasisLabel {
            width: width as u8,
            value,
        }
    }

    pub fn zero(width: usize) -> Self {
        Self::new(0, width)
    }

    pub fn from_bits(bits: &[u8]) -> Result<Self, StateError> {
        if bits.len() > MAX_QUBITS {
            return Err(StateError::TooManyQubits {
                requested: bits.len(),
                max: MAX_QUBITS,
            });
        }
        let mut value = 0u64;
        for &b in bits {
            if b > 1 {
                return Err(StateError::InvalidLabel(format!("{bits:?}")));
            }
            value = (value << 1) | u64::from(b);
        }
        Ok(Self::new(value, bits.len()))
    }

    pub fn width(&self) -> usize {
        self.width as usize
    }

    pub fn value(&self) -> u64 {
        self.value
    }

    fn shift(&self, qubit: usize) -> usize {
        debug_assert!(qubit < self.width());
        self.width() - 1 - qubit
    }

    pub fn bit(&self, qubit: usize) -> u8 {
        ((self.value >> self.shift(qubit)) & 1) as u8
    }

    #[must_use]
    pub fn with_bit(&self, qubit: usize, bit: u8) -> Self {
        let s = self.shift(qubit);
        let value = (self.value & !(1u64 << s)) | (u64::from(bit & 1) << s);
        BasisLabel { value, ..*self }
    }

    /// Reads `len` consecutive qubits starting at `start` as an integer (first qubit most significant).
    pub fn field(&self, start: usize, len: usize) -> u64 {
        if len == 0 {
            return 0;
        }
        let low = self.width() - start - len;
        (self.value >> low) & mask(len)
    }

    #[must_use]
    pub fn with_field(&self, start: usize, len: usize, field: u64) -> Self {
        if len == 0 {
            return *self;
        }
        let low = self.width() - start - len;
        let m = mask(len) << low;
        let value = (self.value & !m) | ((field << low) & m);
        BasisLabel { value, ..*self }
    }

    pub fn bits(&self) -> Vec<u8> {
        (0..self.width()).map(|q| self.bit(q)).collect()
    }
}

fn mask(len: usize) -> u64 {
    if len >= 64 {
        u64::MAX
    } else {
        (1u64 << len) - 1
    }
}

impl fmt::Display for BasisLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for q in 0..self.width() {
            write!(f, "{}", self.bit(q))?;
        }
        Ok(())
    }
}

impl fmt::Debug for BasisLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "|{self}⟩")
    }
}

impl FromStr for BasisLabel {
    type Err = StateError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let bits: Vec<u8> = s
            .chars()
            .filter(|c| !matches!(c, ',' | '_' | ' '))
            .map(|c| match c {
                '0' => Ok(0),
                '1' => Ok(1),
                _ => Err(StateError::InvalidLabel(s.to_string())),
            })
            .collect::<Result<_, _>>()?;
        Self::from_bits(&bits)
    }
}

/// Partition of the qubits into an input register A, a payload register B
/// and a marker or counter register C, laid out in that order.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct RegisterLayout {
    pub a_width: usize,
    pub b_width: usize,
    pub c_width: usize,
}

impl RegisterLayout {
    pub fn new(a_width: usize, b_width: usize, c_width: usize) -> Result<Self, StateError> {
        if a_width == 0 {
            return Err(StateError::InvalidLayout("register A is empty".into()));
        }
        if c_width == 0 {
            return Err(StateError::InvalidLayout("register C is empty".into()));
        }
        let total = a_width + b_width + c_width;
        if total > MAX_QUBITS {
            return Err(StateError::TooManyQubits {
                requested: total,
                max: MAX_QUBITS,
            });
        }
        Ok(RegisterLayout {
            a_width,
            b_width,
            c_width,
        })
    }

    pub fn total(&self) -> usize {
        self.a_width + self.b_width + self.c_width
    }

    pub fn b_start(&self) -> usize {
        self.a_width
    }

    pub fn c_start(&self) -> usize {
        self.a_width + self.b_width
    }

    /// Splits a label into its (A, B, C) register values.
    pub fn split(&self, label: &BasisLabel) -> (u64, u64, u64) {
        (
            label.field(0, self.a_width),
            label.field(self.b_start(), self.b_width),
            label.field(self.c_start(), self.c_width),
        )
    }

    pub fn join(&self, a: u64, b: u64, c: u64) -> BasisLabel {
        BasisLabel::zero(self.total())
            .with_field(0, self.a_width, a)
            .with_field(self.b_start(), self.b_width, b)
            .with_field(self.c_start(), self.c_width, c)
    }
}

/// A normalized pure state stored as a sparse map from basis labels to amplitudes.
#[derive(Clone, PartialEq)]
pub struct SparseState {
    qubit_count: usize,
    terms: BTreeMap<BasisLabel, C64>,
}

/// Terms in label order, e.g. `(0.7071067811865476+0i)|00⟩ + (0.7071067811865476+0i)|11⟩`.
impl fmt::Display for SparseState {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        for (i, (label, amp)) in self.terms.iter().enumerate() {
            if i > 0 {
                f.write_str(" + ")?;
            }
            write!(f, "({amp}){label:?}")?;
        }
        Ok(())
    }
}

impl SparseState {
    /// The basis state `|label⟩`.
    pub fn basis(label: BasisLabel) -> Self {
        let mut terms = BTreeMap::new();
        terms.insert(label, C64::new(1.0, 0.0));
        SparseState {
            qubit_count: label.width(),
            terms,
        }
    }

    /// Builds a state from explicit terms. Duplicate labels are summed and
    /// the result must already be normalized.
    pub fn from_terms<I>(qubit_count: usize, terms: I) -> Result<Self, StateError>
    where
        I: IntoIterator<Item = (BasisLabel, C64)>,
    {
        let state = Self::collect(qubit_count, terms)?;
        let n = state.norm_sqr();
        if (n - 1.0).abs() > NORM_TOLERANCE {
            return Err(StateError::NotNormalized(n));
        }
        Ok(state)
    }

    /// Like [`SparseState::from_terms`] but rescales to unit norm.
    pub fn normalized<I>(qubit_count: usize, terms: I) -> Result<Self, StateError>
    where
        I: IntoIterator<Item = (BasisLabel, C64)>,
    {
        let mut state = Self::collect(qubit_count, terms)?;
        let n = state.norm_sqr();
        if n == 0.0 || !n.is_finite() {
            return Err(StateError::NotNormalized(n));
        }
        let scale = 1.0 / n.sqrt();
        for a in state.terms.values_mut() {
            *a *= scale;
        }
        Ok(state)
    }

    /// Equal-weight superposition of the given labels.
    pub fn uniform<I>(qubit_count: usize, labels: I) -> Result<Self, StateError>
    where
        I: IntoIterator<Item = BasisLabel>,
    {
        Self::normalized(
            qubit_count,
            labels.into_iter().map(|l| (l, C64::new(1.0, 0.0))),
        )
    }

    /// `(|0…0⟩ + |…1_a…1_b…⟩)/√2` on `qubit_count` qubits, other qubits in `|0⟩`.
    pub fn bell_pair(qubit_count: usize, a: usize, b: usize) -> Result<Self, StateError> {
        check_qubits(&[a, b], qubit_count)?;
        let zero = BasisLabel::zero(qubit_count);
        Self::uniform(qubit_count, [zero, zero.with_bit(a, 1).with_bit(b, 1)])
    }

    fn collect<I>(qubit_count: usize, terms: I) -> Result<Self, StateError>
    where
        I: IntoIterator<Item = (BasisLabel, C64)>,
    {
        if qubit_count > MAX_QUBITS {
            return Err(StateError::TooManyQubits {
                requested: qubit_count,
                max: MAX_QUBITS,
            });
        }
        let mut map: BTreeMap<BasisLabel, C64> = BTreeMap::new();
        for (label, amp) in terms {
            if label.width() != qubit_count {
                return Err(StateError::WidthMismatch {
                    label: label.width(),
                    expected: qubit_count,
                });
            }
            *map.entry(label).or_default() += amp;
        }
        map.retain(|_, a| a.norm() >= PRUNE_TOLERANCE);
        Ok(SparseState {
            qubit_count,
            terms: map,
        })
    }

    /// Builds a state from a map whose norm the caller guarantees.
    pub(crate) fn from_map_unchecked(qubit_count: usize, terms: BTreeMap<BasisLabel, C64>) -> Self {
        SparseState { qubit_count, terms }
    }

    pub fn qubit_count(&self) -> usize {
        self.qubit_count
    }

    /// Number of stored (non-pruned) terms.
    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn amplitude(&self, label: &BasisLabel) -> C64 {
        self.terms.get(label).copied().unwrap_or_default()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&BasisLabel, &C64)> {
        self.terms.iter()
    }

    pub fn norm_sqr(&self) -> f64 {
        self.terms.values().map(|a| a.norm_sqr()).sum()
    }

    /// Largest per-amplitude difference over the union of supports.
    pub fn max_amplitude_diff(&self, other: &SparseState) -> f64 {
        let mut worst: f64 = 0.0;
        for (l, a) in &self.terms {
            worst = worst.max((a - other.amplitude(l)).norm());
        }
        for (l, b) in &other.terms {
            if !self.terms.contains_key(l) {
                worst = worst.max(b.norm());
            }
        }
        worst
    }

    /// Applies `gate` to `targets`; `targets[0]` is the most significant local index.
    pub fn apply_unitary(
        &self,
        gate: &DMatrix<C64>,
        targets: &[usize],
    ) -> Result<SparseState, StateError> {
        check_qubits(targets, self.qubit_count)?;
        if targets.is_empty() {
            return Err(StateError::EmptyQubitSet);
        }
        if targets.len() > MAX_REDUCED_QUBITS {
            return Err(StateError::TooManyQubits {
                requested: targets.len(),
                max: MAX_REDUCED_QUBITS,
            });
        }
        let dim = 1usize << targets.len();
        if gate.nrows() != dim || gate.ncols() != dim {
            return Err(StateError::GateDimension {
                rows: gate.nrows(),
                cols: gate.ncols(),
                targets: targets.len(),
                expected: dim,
            });
        }
        let deviation = unitarity_deviation(gate);
        if deviation > NORM_TOLERANCE {
            return Err(StateError::NonUnitary { deviation });
        }

        let groups = self.group_by_rest(targets);
        let mut out = BTreeMap::new();
        for (rest, local) in groups {
            for (row, gate_row) in gate.row_iter().enumerate() {
                let amp: C64 = local.iter().map(|&(col, a)| gate_row[col] * a).sum();
                if amp.norm() >= PRUNE_TOLERANCE {
                    out.insert(with_local_index(rest, targets, row), amp);
                }
            }
        }
        let state = SparseState::from_map_unchecked(self.qubit_count, out);
        debug_assert!((state.norm_sqr() - self.norm_sqr()).abs() <= NORM_TOLERANCE);
        Ok(state)
    }

    /// Groups terms by the bits outside `qubits`; each group lists `(local index, amplitude)`.
    fn group_by_rest(&self, qubits: &[usize]) -> BTreeMap<BasisLabel, Vec<(usize, C64)>> {
        let mut groups: BTreeMap<BasisLabel, Vec<(usize, C64)>> = BTreeMap::new();
        for (label, &amp) in &self.terms {
            let (rest, local) = split_label(*label, qubits);
            groups.entry(rest).or_default().push((local, amp));
        }
        groups
    }

    /// Partial trace onto `keep` (ordered; `keep[0]` is the most significant index).
    pub fn reduced_density(&self, keep: &[usize]) -> Result<DensityMatrix, StateError> {
        if keep.is_empty() {
            return Err(StateError::EmptyQubitSet);
        }
        check_qubits(keep, self.qubit_count)?;
        if keep.len() > MAX_REDUCED_QUBITS {
            return Err(StateError::TooManyQubits {
                requested: keep.len(),
                max: MAX_REDUCED_QUBITS,
            });
        }
        let dim = 1usize << keep.len();
        let mut rho = DMatrix::<C64>::zeros(dim, dim);
        for local in self.group_by_rest(keep).values() {
            for &(i, ai) in local {
                for &(j, aj) in local {
                    rho[(i, j)] += ai * aj.conj();
                }
            }
        }
        DensityMatrix::new(rho)
    }

    /// Computational-basis measurement statistics of `targets`, as a joint
    /// distribution over binary variables named `q<index>`.
    pub fn measurement_distribution(
        &self,
        targets: &[usize],
    ) -> Result<JointDistribution, StateError> {
        if targets.is_empty() {
            return Err(StateError::EmptyQubitSet);
        }
        check_qubits(targets, self.qubit_count)?;
        if targets.len() > MAX_REDUCED_QUBITS {
            return Err(StateError::TooManyQubits {
                requested: targets.len(),
                max: MAX_REDUCED_QUBITS,
            });
        }
        let mut probs = vec![0.0; 1 << targets.len()];
        for (label, amp) in &self.terms {
            let (_, local) = split_label(*label, targets);
            probs[local] += amp.norm_sqr();
        }
        let total: f64 = probs.iter().sum();
        for p in &mut probs {
            *p /= total;
        }
        let vars = targets
            .iter()
            .map(|q| Variable::new(format!("q{q}"), 2))
            .collect();
        JointDistribution::new(vars, probs)
            .map_err(|e| StateError::InvalidDensityMatrix(e.to_string()))
    }
}

impl fmt::Debug for SparseState {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (l, a) in &self.terms {
            if !first {
                f.write_str(" + ")?;
            }
            first = false;
            write!(f, "({:.6}{:+.6}i){l:?}", a.re, a.im)?;
        }
        if first {
            f.write_str("0")?;
        }
        Ok(())
    }
}

fn check_qubits(qubits: &[usize], qubit_count: usize) -> Result<(), StateError> {
    for (i, &q) in qubits.iter().enumerate() {
        if q >= qubit_count {
            return Err(StateError::QubitOutOfRange {
                index: q,
                qubit_count,
            });
        }
        if qubits[..i].contains(&q) {
            return Err(StateError::DuplicateQubit(q));
        }
    }
    Ok(())
}

/// Clears `qubits` in `label` and returns it with the cleared bits packed as a local index.
fn split_label(label: BasisLabel, qubits: &[usize]) -> (BasisLabel, usize) {
    let mut rest = label;
    let mut local = 0usize;
    for &q in qubits {
        local = (local << 1) | label.bit(q) as usize;
        rest = rest.with_bit(q, 0);
    }
    (rest, local)
}

fn with_local_index(rest: BasisLabel, qubits: &[usize], local: usize) -> BasisLabel {
    let k = qubits.len();
    qubits.iter().enumerate().fold(rest, |l, (i, &q)| {
        l.with_bit(q, ((local >> (k - 1 - i)) & 1) as u8)
    })
}

fn unitarity_deviation(gate: &DMatrix<C64>) -> f64 {
    let product = gate.adjoint() * gate;
    let n = gate.nrows();
    let mut worst: f64 = 0.0;
    for i in 0..n {
        for j in 0..n {
            let expected = if i == j { 1.0 } else { 0.0 };
            worst = worst.max((product[(i, j)] - C64::new(expected, 0.0)).norm());
        }
    }
    worst
}

/// A validated density matrix: Hermitian, unit trace, positive semidefinite.
#[derive(Clone, PartialEq)]
pub struct DensityMatrix {
    matrix: DMatrix<C64>,
}

impl DensityMatrix {
    pub fn new(matrix: DMatrix<C64>) -> Result<Self, StateError> {
        let n = matrix.nrows();
        if n == 0 || matrix.ncols() != n {
            return Err(StateError::InvalidDensityMatrix(format!(
                "matrix is {}x{}",
                n,
                matrix.ncols()
            )));
        }
        for i in 0..n {
            for j in i..n {
                let d = (matrix[(i, j)] - matrix[(j, i)].conj()).norm();
                if d > NORM_TOLERANCE {
                    return Err(StateError::InvalidDensityMatrix(format!(
                        "not Hermitian at ({i}, {j}), deviation {d:.3e}"
                    )));
                }
            }
        }
        let trace = matrix.trace();
        if (trace.re - 1.0).abs() > NORM_TOLERANCE || trace.im.abs() > NORM_TOLERANCE {
            return Err(StateError::InvalidDensityMatrix(format!(
                "trace is {trace}"
            )));
        }
        let rho = DensityMatrix { matrix };
        let min = rho.eigenvalues().into_iter().fold(f64::INFINITY, f64::min);
        if min < -PSD_TOLERANCE {
            return Err(StateError::InvalidDensityMatrix(format!(
                "negative eigenvalue {min:.3e}"
            )));
        }
        Ok(rho)
    }

    /// The pure state `|ψ⟩⟨ψ|` for a single-label basis state on `qubits` qubits.
    pub fn basis(qubits: usize, index: usize) -> Result<Self, StateError> {
        let dim = 1usize << qubits;
        if index >= dim {
            return Err(StateError::DimensionMismatch(index, dim));
        }
        let mut m = DMatrix::zeros(dim, dim);
        m[(index, index)] = C64::new(1.0, 0.0);
        Self::new(m)
    }

    pub fn maximally_mixed(qubits: usize) -> Result<Self, StateError> {
        let dim = 1usize << qubits;
        Self::new(DMatrix::from_diagonal_element(
            dim,
            dim,
            C64::new(1.0 / dim as f64, 0.0),
        ))
    }

    pub fn dim(&self) -> usize {
        self.matrix.nrows()
    }

    pub fn entry(&self, row: usize, col: usize) -> C64 {
        self.matrix[(row, col)]
    }

    pub fn matrix(&self) -> &DMatrix<C64> {
        &self.matrix
    }

    /// Eigenvalues in ascending order.
    pub fn eigenvalues(&self) -> Vec<f64> {
        hermitian_eigenvalues(self.matrix.clone())
    }

    /// Largest entrywise difference.
    pub fn max_entry_diff(&self, other: &DensityMatrix) -> Result<f64, StateError> {
        if self.dim() != other.dim() {
            return Err(StateError::DimensionMismatch(self.dim(), other.dim()));
        }
        Ok((&self.matrix - &other.matrix)
            .iter()
            .map(|z| z.norm())
            .fold(0.0, f64::max))
    }
}

impl fmt::Debug for DensityMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "DensityMatrix{}", self.matrix)
    }
}

fn hermitian_eigenvalues(m: DMatrix<C64>) -> Vec<f64> {
    let mut ev: Vec<f64> = SymmetricEigen::new(m).eigenvalues.iter().copied().collect();
    ev.sort_by(f64::total_cmp);
    ev
}

/// `½ Σ |λ|` over the eigenvalues of `rho − sigma`, clamped to `[0, 1]`.
pub fn trace_distance(rho: &DensityMatrix, sigma: &DensityMatrix) -> Result<f64, StateError> {
    if rho.dim() != sigma.dim() {
        return Err(StateError::DimensionMismatch(rho.dim(), sigma.dim()));
    }
    let diff = &rho.matrix - &sigma.matrix;
    let d: f64 = 0.5 * hermitian_eigenvalues(diff).iter().map(|l| l.abs()).sum::<f64>();
    Ok(d.clamp(0.0, 1.0))
}

/// Common single-qubit gates.
pub mod gates {
    use super::C64;
    use nalgebra::DMatrix;

    fn real(rows: &[[f64; 2]; 2]) -> DMatrix<C64> {
        DMatrix::from_fn(2, 2, |i, j| C64::new(rows[i][j], 0.0))
    }

    pub fn identity() -> DMatrix<C64> {
        DMatrix::identity(2, 2)
    }

    pub fn pauli_x() -> DMatrix<C64> {
        real(&[[0.0, 1.0], [1.0, 0.0]])
    }

    pub fn pauli_y() -> DMatrix<C64> {
        DMatrix::from_row_slice(
            2,
            2,
            &[
                C64::new(0.0, 0.0),
                C64::new(0.0, -1.0),
                C64::new(0.0, 1.0),
                C64::new(0.0, 0.0),
            ],
        )
    }

    pub fn pauli_z() -> DMatrix<C64> {
        real(&[[1.0, 0.0], [0.0, -1.0]])
    }

    pub fn hadamard() -> DMatrix<C64> {
        let h = std::f64::consts::FRAC_1_SQRT_2;
        real(&[[h, h], [h, -h]])
    }

    /// Rotation about Y by `theta`.
    pub fn ry(theta: f64) -> DMatrix<C64> {
        let (s, c) = (theta / 2.0).sin_cos();
        real(&[[c, -s], [s, c]])
    }

    /// Rotation about Z by `theta`.
    pub fn rz(theta: f64) -> DMatrix<C64> {
        let half = theta / 2.0;
        DMatrix::from_row_slice(
            2,
            2,
            &[
                C64::from_polar(1.0, -half),
                C64::new(0.0, 0.0),
                C64::new(0.0, 0.0),
                C64::from_polar(1.0, half),
            ],
        )
    }

    pub fn cnot() -> DMatrix<C64> {
        let mut m = DMatrix::zeros(4, 4);
        for (r, c) in [(0, 0), (1, 1), (2, 3), (3, 2)] {
            m[(r, c)] = C64::new(1.0, 0.0);
        }
        m
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::FRAC_1_SQRT_2;

    fn label(s: &str) -> BasisLabel {
        s.parse().unwrap()
    }

    fn bell() -> SparseState {
        SparseState::bell_pair(2, 0, 1).unwrap()
    }

    #[test]
    fn label_bits_and_fields() {
        let l = label("10110");
        assert_eq!(l.bit(0), 1);
        assert_eq!(l.bit(1), 0);
        assert_eq!(l.field(1, 3), 0b011);
        assert_eq!(l.with_field(1, 3, 0b100).to_string(), "11000");
        assert_eq!(l.with_bit(4, 1).to_string(), "10111");
        assert_eq!(label("1,01,0").to_string(), "1010");
        assert!("102".parse::<BasisLabel>().is_err());
    }

    #[test]
    fn identity_leaves_state_alone() {
        let s = bell();
        let out = s.apply_unitary(&gates::identity(), &[1]).unwrap();
        assert_eq!(out, s);
    }

    #[test]
    fn x_flips_zero() {
        let s = SparseState::basis(label("0"));
        let out = s.apply_unitary(&gates::pauli_x(), &[0]).unwrap();
        assert_eq!(out, SparseState::basis(label("1")));
    }

    #[test]
    fn hadamard_on_zero() {
        let out = SparseState::basis(label("0"))
            .apply_unitary(&gates::hadamard(), &[0])
            .unwrap();
        for l in ["0", "1"] {
            let a = out.amplitude(&label(l));
            assert!((a.re - std::f64::consts::FRAC_1_SQRT_2).abs() < 1e-15);
            assert_eq!(a.im, 0.0);
        }
    }

    #[test]
    fn cnot_target_order_matters() {
        let s = SparseState::basis(label("10"));
        assert_eq!(
            s.apply_unitary(&gates::cnot(), &[0, 1]).unwrap(),
            SparseState::basis(label("11"))
        );
        assert_eq!(
            s.apply_unitary(&gates::cnot(), &[1, 0]).unwrap(),
            SparseState::basis(label("10"))
        );
    }

    #[test]
    fn gate_errors() {
        let s = bell();
        let bad = DMatrix::from_element(2, 2, C64::new(1.0, 0.0));
        assert!(matches!(
            s.apply_unitary(&bad, &[0]),
            Err(StateError::NonUnitary { .. })
        ));
        assert!(matches!(
            s.apply_unitary(&gates::pauli_x(), &[2]),
            Err(StateError::QubitOutOfRange { index: 2, .. })
        ));
        assert_eq!(
            s.apply_unitary(&gates::cnot(), &[1, 1]),
            Err(StateError::DuplicateQubit(1))
        );
        assert!(matches!(
            s.apply_unitary(&gates::cnot(), &[0]),
            Err(StateError::GateDimension { .. })
        ));
    }

    #[test]
    fn bell_reduced_state_is_maximally_mixed() {
        let rho = bell().reduced_density(&[1]).unwrap();
        let mixed = DensityMatrix::maximally_mixed(1).unwrap();
        assert!(rho.max_entry_diff(&mixed).unwrap() < 1e-15);
    }

    #[test]
    fn product_state_reduces_to_pure() {
        let rho = SparseState::basis(label("01")).reduced_density(&[0]).unwrap();
        assert_eq!(rho, DensityMatrix::basis(1, 0).unwrap());
        let rho = SparseState::basis(label("00")).reduced_density(&[1]).unwrap();
        assert_eq!(rho, DensityMatrix::basis(1, 0).unwrap());
    }

    #[test]
    fn reduced_density_errors() {
        assert_eq!(bell().reduced_density(&[]), Err(StateError::EmptyQubitSet));
        assert!(matches!(
            bell().reduced_density(&[5]),
            Err(StateError::QubitOutOfRange { .. })
        ));
    }

    #[test]
    fn trace_distance_cases() {
        let zero = DensityMatrix::basis(1, 0).unwrap();
        let one = DensityMatrix::basis(1, 1).unwrap();
        let mixed = DensityMatrix::maximally_mixed(1).unwrap();
        assert_eq!(trace_distance(&zero, &zero).unwrap(), 0.0);
        assert!((trace_distance(&zero, &one).unwrap() - 1.0).abs() < 1e-15);
        assert!((trace_distance(&mixed, &zero).unwrap() - 0.5).abs() < 1e-15);
        let two = DensityMatrix::maximally_mixed(2).unwrap();
        assert_eq!(
            trace_distance(&zero, &two),
            Err(StateError::DimensionMismatch(2, 4))
        );
    }

    #[test]
    fn density_matrix_validation() {
        let mut m = DMatrix::<C64>::zeros(2, 2);
        m[(0, 0)] = C64::new(0.5, 0.0);
        assert!(DensityMatrix::new(m.clone()).is_err());
        m[(1, 1)] = C64::new(0.5, 0.0);
        m[(0, 1)] = C64::new(0.1, 0.0);
        assert!(DensityMatrix::new(m.clone()).is_err());
        m[(1, 0)] = C64::new(0.1, 0.0);
        assert!(DensityMatrix::new(m.clone()).is_ok());
        m[(0, 1)] = C64::new(0.9, 0.0);
        m[(1, 0)] = C64::new(0.9, 0.0);
        assert!(DensityMatrix::new(m).is_err());
    }

    #[test]
    fn measurement_statistics() {
        let d = SparseState::basis(label("1")).measurement_distribution(&[0]).unwrap();
        assert_eq!(d.probabilities(), &[0.0, 1.0]);

        let plus = SparseState::uniform(1, [label("0"), label("1")]).unwrap();
        let d = plus.measurement_distribution(&[0]).unwrap();
        assert!((d.prob(&[0]) - 0.5).abs() < 1e-15);

        let d = bell().measurement_distribution(&[0, 1]).unwrap();
        assert!((d.prob(&[0, 0]) - 0.5).abs() < 1e-15);
        assert!((d.prob(&[1, 1]) - 0.5).abs() < 1e-15);
        assert_eq!(d.prob(&[0, 1]), 0.0);
        assert_eq!(d.prob(&[1, 0]), 0.0);
        assert!(bell().measurement_distribution(&[3]).is_err());
    }

    #[test]
    fn from_terms_checks_norm_and_prunes() {
        let h = C64::new(FRAC_1_SQRT_2, 0.0);
        assert!(SparseState::from_terms(1, [(label("0"), h)]).is_err());
        let s = SparseState::from_terms(
            1,
            [(label("0"), h), (label("1"), h), (label("1"), C64::new(1e-17, 0.0))],
        )
        .unwrap();
        assert_eq!(s.len(), 2);
        let tiny = SparseState::from_terms(
            2,
            [(label("00"), C64::new(1.0, 0.0)), (label("11"), C64::new(1e-16, 0.0))],
        )
        .unwrap();
        assert_eq!(tiny.len(), 1);
        assert!(SparseState::from_terms(2, [(label("0"), C64::new(1.0, 0.0))]).is_err());
    }
}
