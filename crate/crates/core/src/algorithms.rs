//! Search and counting with the nonlinear gate against truth-table oracles.
//!
//! Marker search prepares `2^{-n/2} Σ_j |j⟩_A |j⟩_B |f(j)⟩_C` and applies Ξ
//! once per qubit of A. Each step pairs branches that differ in the active
//! qubit and copies the marked payload onto its partner, so with a unique
//! solution the number of marked branches doubles each step and every branch
//! ends up carrying the solution in register B.
//!
//! Counter mode drops register B and starts register C at `f(j)`. Each step
//! adds the counters of paired branches, so after `n` steps every branch holds
//! `Σ_j f(j)`.

use std::collections::BTreeSet;
use std::fmt;

use crate::error::AlgorithmError;
use crate::nonlinear::{apply_xi, XiMode};
use crate::statevector::{BasisLabel, RegisterLayout, SparseState, C64};

/// Default largest oracle width; a marker-mode state then has at most 4096 terms.
pub const DEFAULT_MAX_N: usize = 12;

/// An explicit truth table `f: {0,1}^n → {0,1}`. Input `j` is read with bit 0 leftmost.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct OracleFunction {
    n: usize,
    table: Vec<bool>,
}

impl OracleFunction {
    pub fn new(n: usize, table: Vec<bool>) -> Result<Self, AlgorithmError> {
        if n == 0 {
            return Err(AlgorithmError::InvalidOracle("input width must be at least 1".into()));
        }
        if n >= 32 {
            return Err(AlgorithmError::InvalidOracle(format!("input width {n} is not representable")));
        }
        if table.len() != 1 << n {
            return Err(AlgorithmError::InvalidOracle(format!(
                "table has {} entries, expected {}",
                table.len(),
                1u64 << n
            )));
        }
        Ok(OracleFunction { n, table })
    }

    pub fn from_fn(n: usize, f: impl Fn(u64) -> bool) -> Result<Self, AlgorithmError> {
        if n == 0 || n >= 32 {
            return Self::new(n, Vec::new());
        }
        Self::new(n, (0..1u64 << n).map(f).collect())
    }

    /// Oracle whose satisfying inputs are exactly `solutions`.
    pub fn from_solutions<I>(n: usize, solutions: I) -> Result<Self, AlgorithmError>
    where
        I: IntoIterator<Item = u64>,
    {
        let set: BTreeSet<u64> = solutions.into_iter().collect();
        if n > 0 && n < 32 {
            if let Some(&bad) = set.iter().find(|&&s| s >> n != 0) {
                return Err(AlgorithmError::InvalidOracle(format!(
                    "solution {bad} does not fit in {n} bits"
                )));
            }
        }
        Self::from_fn(n, |j| set.contains(&j))
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn eval(&self, input: u64) -> bool {
        self.table[input as usize]
    }

    pub fn table(&self) -> &[bool] {
        &self.table
    }

    pub fn solutions(&self) -> impl Iterator<Item = u64> + '_ {
        self.table
            .iter()
            .enumerate()
            .filter(|(_, &v)| v)
            .map(|(j, _)| j as u64)
    }

    /// The oracle on the remaining `n − prefix_len` bits after fixing the leading bits to `prefix`.
    pub fn restrict(&self, prefix: u64, prefix_len: usize) -> Result<Self, AlgorithmError> {
        if prefix_len >= self.n {
            return Err(AlgorithmError::InvalidOracle(format!(
                "cannot fix {prefix_len} of {} bits and keep a nonempty oracle",
                self.n
            )));
        }
        let rest = self.n - prefix_len;
        Self::from_fn(rest, |suffix| self.eval((prefix << rest) | suffix))
    }

    /// Formats `input` as an `n`-bit string, bit 0 first.
    pub fn format_input(&self, input: u64) -> String {
        BasisLabel::new(input, self.n).to_string()
    }
}

impl fmt::Debug for OracleFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let sols: Vec<String> = self.solutions().map(|s| self.format_input(s)).collect();
        write!(f, "OracleFunction(n={}, solutions={:?})", self.n, sols)
    }
}

/// Outcome of [`np_search`].
#[derive(Debug, Clone, PartialEq)]
pub struct SearchResult {
    pub solution: Option<u64>,
    pub gate_applications: usize,
    pub final_state: SparseState,
    /// Number of marker-1 terms before the first step and after each step.
    pub marked_terms: Vec<usize>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Limits {
    pub max_n: usize,
}

impl Default for Limits {
    fn default() -> Self {
        Limits { max_n: DEFAULT_MAX_N }
    }
}

fn check_size(oracle: &OracleFunction, limits: Limits) -> Result<(), AlgorithmError> {
    if oracle.n() > limits.max_n {
        return Err(AlgorithmError::TooLarge {
            n: oracle.n(),
            max: limits.max_n,
        });
    }
    Ok(())
}

pub fn layout_for(n: usize, mode: XiMode) -> RegisterLayout {
    let (a, b, c) = match mode {
        XiMode::Marker => (n, n, 1),
        XiMode::Counter => (n, 0, n + 1),
    };
    RegisterLayout::new(a, b, c).expect("oracle widths are validated")
}

/// Prepares the algorithm's starting superposition with the default size limit.
pub fn prepare_initial(
    oracle: &OracleFunction,
    mode: XiMode,
) -> Result<(SparseState, RegisterLayout), AlgorithmError> {
    prepare_initial_with(oracle, mode, Limits::default())
}

pub fn prepare_initial_with(
    oracle: &OracleFunction,
    mode: XiMode,
    limits: Limits,
) -> Result<(SparseState, RegisterLayout), AlgorithmError> {
    check_size(oracle, limits)?;
    let n = oracle.n();
    let layout = layout_for(n, mode);
    let amp = C64::new((0.5f64).powf(n as f64 / 2.0), 0.0);
    let terms = (0..1u64 << n).map(|j| {
        let f = u64::from(oracle.eval(j));
        let label = match mode {
            XiMode::Marker => layout.join(j, j, f),
            XiMode::Counter => layout.join(j, 0, f),
        };
        (label, amp)
    });
    let state = SparseState::from_terms(layout.total(), terms)
        .map_err(|e| AlgorithmError::Invariant(e.to_string()))?;
    Ok((state, layout))
}

fn marked_terms(state: &SparseState, layout: &RegisterLayout) -> usize {
    state
        .terms()
        .filter(|(l, _)| layout.split(l).2 == 1)
        .count()
}

/// Marker-mode search with the active qubits taken in order `0..n`.
pub fn np_search(oracle: &OracleFunction) -> Result<SearchResult, AlgorithmError> {
    let order: Vec<usize> = (0..oracle.n()).collect();
    np_search_with_order(oracle, &order, Limits::default())
}

/// Marker-mode search with an explicit order of active qubits (a permutation of `0..n`).
pub fn np_search_with_order(
    oracle: &OracleFunction,
    order: &[usize],
    limits: Limits,
) -> Result<SearchResult, AlgorithmError> {
    let n = oracle.n();
    let mut sorted = order.to_vec();
    sorted.sort_unstable();
    if sorted != (0..n).collect::<Vec<_>>() {
        return Err(AlgorithmError::InvalidOracle(format!(
            "active-qubit order {order:?} is not a permutation of 0..{n}"
        )));
    }
    let (mut state, layout) = prepare_initial_with(oracle, XiMode::Marker, limits)?;
    let mut marked = vec![marked_terms(&state, &layout)];
    let mut gate_applications = 0;
    for &q in order {
        state = apply_xi(&state, &layout, q, XiMode::Marker).map_err(|e| {
            AlgorithmError::Invariant(format!("Ξ rejected an algorithm state: {e}"))
        })?;
        gate_applications += 1;
        marked.push(marked_terms(&state, &layout));
    }

    let markers: BTreeSet<u64> = state.terms().map(|(l, _)| layout.split(l).2).collect();
    let solution = if markers == BTreeSet::from([0]) {
        None
    } else {
        let payloads: BTreeSet<u64> = state.terms().map(|(l, _)| layout.split(l).1).collect();
        if markers != BTreeSet::from([1]) || payloads.len() != 1 {
            return Err(AlgorithmError::MultipleSolutionOutcome {
                payloads: payloads.len(),
                final_state: Box::new(state),
            });
        }
        payloads.into_iter().next()
    };
    if let Some(s) = solution {
        debug_assert!(oracle.eval(s), "surviving payload must satisfy the oracle");
    }
    Ok(SearchResult {
        solution,
        gate_applications,
        final_state: state,
        marked_terms: marked,
    })
}

/// The unique-solution end state `2^{-n/2} Σ_j |j, solution, 1⟩`.
pub fn solved_state(n: usize, solution: u64) -> Result<SparseState, AlgorithmError> {
    let layout = layout_for(n, XiMode::Marker);
    SparseState::uniform(
        layout.total(),
        (0..1u64 << n).map(|j| layout.join(j, solution, 1)),
    )
    .map_err(|e| AlgorithmError::Invariant(e.to_string()))
}

/// Outcome of [`sharp_p_count_traced`].
#[derive(Debug, Clone, PartialEq)]
pub struct CountResult {
    pub count: u64,
    pub gate_applications: usize,
    pub final_state: SparseState,
}

/// Number of satisfying inputs, computed with counter-mode Ξ.
pub fn sharp_p_count(oracle: &OracleFunction) -> Result<u64, AlgorithmError> {
    Ok(sharp_p_count_traced(oracle, Limits::default())?.count)
}

pub fn sharp_p_count_traced(
    oracle: &OracleFunction,
    limits: Limits,
) -> Result<CountResult, AlgorithmError> {
    let (mut state, layout) = prepare_initial_with(oracle, XiMode::Counter, limits)?;
    for q in 0..oracle.n() {
        state = apply_xi(&state, &layout, q, XiMode::Counter).map_err(|e| {
            AlgorithmError::Invariant(format!("counter-mode Ξ failed on an algorithm state: {e}"))
        })?;
    }
    let counters: BTreeSet<u64> = state.terms().map(|(l, _)| layout.split(l).2).collect();
    if counters.len() != 1 {
        return Err(AlgorithmError::Invariant(format!(
            "branches disagree on the final count: {counters:?}"
        )));
    }
    Ok(CountResult {
        count: *counters.iter().next().expect("state is nonempty"),
        gate_applications: oracle.n(),
        final_state: state,
    })
}

/// Outcome of [`search_via_counting_traced`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CountingSearch {
    pub solution: Option<u64>,
    pub counting_calls: usize,
}

/// Lexicographically smallest solution, found by prefix descent on solution counts.
pub fn search_via_counting(oracle: &OracleFunction) -> Result<Option<u64>, AlgorithmError> {
    Ok(search_via_counting_traced(oracle, Limits::default())?.solution)
}

/// Prefix descent with `n` counting calls when a solution exists.
///
/// The first call counts the whole oracle; a zero count ends the search.
/// Calls 2..n count the restricted oracle with the next bit fixed to 0 and
/// follow the 0 branch whenever it holds a solution. The subtree counts
/// that follow from these calls leave only the last bit open when the final
/// two-leaf subtree holds a single solution; that bit is settled by reading
/// the oracle at one input.
pub fn search_via_counting_traced(
    oracle: &OracleFunction,
    limits: Limits,
) -> Result<CountingSearch, AlgorithmError> {
    check_size(oracle, limits)?;
    let n = oracle.n();
    let mut calls = 0;
    let mut count = |o: &OracleFunction| -> Result<u64, AlgorithmError> {
        calls += 1;
        Ok(sharp_p_count_traced(o, limits)?.count)
    };

    let mut subtree = count(oracle)?;
    if subtree == 0 {
        return Ok(CountingSearch {
            solution: None,
            counting_calls: calls,
        });
    }
    let mut prefix = 0u64;
    for fixed in 0..n - 1 {
        let zero_branch = oracle.restrict(prefix << 1, fixed + 1)?;
        let zeros = count(&zero_branch)?;
        if zeros >= 1 {
            prefix <<= 1;
            subtree = zeros;
        } else {
            prefix = (prefix << 1) | 1;
        }
    }
    let last = if subtree >= 2 || oracle.eval(prefix << 1) {
        0
    } else {
        1
    };
    let solution = (prefix << 1) | last;
    if !oracle.eval(solution) {
        return Err(AlgorithmError::Invariant(format!(
            "descent ended on a non-solution {}",
            oracle.format_input(solution)
        )));
    }
    Ok(CountingSearch {
        solution: Some(solution),
        counting_calls: calls,
    })
}
