//! Error types for every layer of the simulator.

use thiserror::Error;

use crate::statevector::SparseState;

/// Failures of the linear state-vector layer.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum StateError {
    #[error("gate is not unitary (max deviation from U†U = I is {deviation:.3e})")]
    NonUnitary { deviation: f64 },
    #[error("gate is {rows}x{cols} but {targets} target qubit(s) need {expected}x{expected}")]
    GateDimension {
        rows: usize,
        cols: usize,
        targets: usize,
        expected: usize,
    },
    #[error("qubit index {index} out of range for a {qubit_count}-qubit state")]
    QubitOutOfRange { index: usize, qubit_count: usize },
    #[error("qubit index {0} listed more than once")]
    DuplicateQubit(usize),
    #[error("qubit set is empty")]
    EmptyQubitSet,
    #[error("{requested} qubits requested, at most {max} supported here")]
    TooManyQubits { requested: usize, max: usize },
    #[error("state is not normalized (squared norm {0})")]
    NotNormalized(f64),
    #[error("basis label has width {label}, state has {expected} qubits")]
    WidthMismatch { label: usize, expected: usize },
    #[error("dimension mismatch: {0} vs {1}")]
    DimensionMismatch(usize, usize),
    #[error("invalid density matrix: {0}")]
    InvalidDensityMatrix(String),
    #[error("invalid basis label {0:?}")]
    InvalidLabel(String),
    #[error("invalid register layout: {0}")]
    InvalidLayout(String),
}

/// Failures of the nonlinear gates and the signaling analysis.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum GateError {
    /// The input lies outside the set of states on which the gate is defined.
    #[error("gate domain error: {0}")]
    GateDomain(String),
    /// The gate is a joint operation on every qubit and cannot be localized to one side of a cut.
    #[error("not locally applicable: {0}")]
    NotLocallyApplicable(String),
    #[error("action touches qubit {0}, which is outside the acting party's set")]
    ActionOutsideParty(usize),
    #[error("party qubit sets overlap at qubit {0}")]
    OverlappingParties(usize),
    #[error("register layout ({a}, {b}, {c}) does not match a {qubits}-qubit state")]
    LayoutMismatch {
        a: usize,
        b: usize,
        c: usize,
        qubits: usize,
    },
    #[error("counter overflow: {value} does not fit in {width} bit(s)")]
    CounterOverflow { value: u64, width: usize },
    #[error(transparent)]
    State(#[from] StateError),
}

/// Failures of the search and counting algorithms.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum AlgorithmError {
    #[error("oracle width {n} exceeds the configured maximum {max}")]
    TooLarge { n: usize, max: usize },
    #[error("invalid oracle: {0}")]
    InvalidOracle(String),
    /// The marker-mode final state is not a single-payload state; the state is kept for inspection.
    #[error("search ended with several surviving payloads ({payloads} distinct register-B labels)")]
    MultipleSolutionOutcome {
        payloads: usize,
        final_state: Box<SparseState>,
    },
    #[error("algorithm invariant violated: {0}")]
    Invariant(String),
    #[error(transparent)]
    Gate(#[from] GateError),
}

/// Failures of the causal-model toolkit.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum CausalError {
    #[error("unknown node or variable {0:?}")]
    UnknownNode(String),
    #[error("duplicate node or variable {0:?}")]
    DuplicateNode(String),
    #[error("edge {0} -> {1} closes a directed cycle")]
    Cycle(String, String),
    #[error("node {0:?} has cardinality zero")]
    ZeroCardinality(String),
    #[error("node sets are not disjoint (shared node {0:?})")]
    NotDisjoint(String),
    #[error("{0} must not be empty")]
    EmptySet(&'static str),
    #[error("invalid conditional probability table for {node:?}: {reason}")]
    InvalidCpt { node: String, reason: String },
    #[error("invalid distribution: {0}")]
    InvalidDistribution(String),
    #[error("variables of the distribution do not match the graph: {0}")]
    VariableMismatch(String),
    #[error("scenario is not binary: {0}")]
    NotBinary(String),
    #[error("measurement angles missing for the Bell-state resource")]
    MissingAngles,
    #[error("conditional distribution is not normalized: {0}")]
    Unnormalized(String),
    #[error("target lets Bob's setting influence Alice's outcome (deviation {0:.3e})")]
    TargetSignalsToAlice(f64),
    #[error("expected relation kind {0}")]
    WrongRelationKind(&'static str),
    #[error(transparent)]
    State(#[from] StateError),
}

/// Malformed text input in one of the file formats.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum FormatError {
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },
    #[error("{0}")]
    Invalid(String),
    #[error(transparent)]
    Causal(#[from] CausalError),
}

impl FormatError {
    pub(crate) fn at(line: usize, message: impl Into<String>) -> Self {
        FormatError::Parse {
            line,
            message: message.into(),
        }
    }
}

/// Umbrella error used by the CLI and the C ABI.
#[derive(Debug, Error)]
pub enum Error {
    #[error(transparent)]
    State(#[from] StateError),
    #[error(transparent)]
    Gate(#[from] GateError),
    #[error(transparent)]
    Algorithm(#[from] AlgorithmError),
    #[error(transparent)]
    Causal(#[from] CausalError),
    #[error(transparent)]
    Format(#[from] FormatError),
    #[error("{path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
