//! The nonlinear gate Ξ, the local Weinberg map and signaling analysis.
//!
//! Ξ acts on one qubit of register A (the *active* qubit) together with the
//! whole of registers B and C. Fixing every other A qubit selects a subspace
//! in which the state holds at most one basis term for each value of the
//! active qubit; those two terms form a [`BranchPair`]. Ξ only rewrites the
//! (B, C) labels of the two sides, never the amplitudes, so the norm is
//! preserved exactly.
//!
//! Marker mode, per pair with markers `(c0, c1)` and payloads `(g0, g1)`:
//!
//! | c0 | c1 | result                         |
//! |----|----|--------------------------------|
//! | 0  | 1  | both sides become `(g1, 1)`    |
//! | 1  | 0  | both sides become `(g0, 1)`    |
//! | 0  | 0  | unchanged                      |
//! | 1  | 1  | unchanged                      |
//!
//! Counter mode writes `c0 + c1` into both counters and leaves B alone.
//! A pair with one absent side is left as it is in both modes.

use std::collections::BTreeMap;

use nalgebra::DMatrix;

use crate::error::{GateError, StateError};
use crate::statevector::{
    trace_distance, BasisLabel, RegisterLayout, SparseState, C64, NORM_TOLERANCE,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum XiMode {
    Marker,
    Counter,
}

/// One side of a [`BranchPair`]: the single basis term with a given active-qubit value.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BranchSide {
    pub label: BasisLabel,
    pub payload: u64,
    pub control: u64,
    pub amplitude: C64,
}

/// The two terms of one subspace, keyed by the value of the active qubit.
#[derive(Debug, Clone, PartialEq)]
pub struct BranchPair {
    /// Register A with the active qubit cleared.
    pub subspace_label: u64,
    pub branch0: Option<BranchSide>,
    pub branch1: Option<BranchSide>,
}

fn check_layout(state: &SparseState, layout: &RegisterLayout) -> Result<(), GateError> {
    if layout.total() != state.qubit_count() {
        return Err(GateError::LayoutMismatch {
            a: layout.a_width,
            b: layout.b_width,
            c: layout.c_width,
            qubits: state.qubit_count(),
        });
    }
    Ok(())
}

/// Decomposes `state` into branch pairs for `active_qubit`.
///
/// Fails with [`GateError::GateDomain`] if some side is a superposition over (B, C).
pub fn branch_pairs(
    state: &SparseState,
    layout: &RegisterLayout,
    active_qubit: usize,
) -> Result<Vec<BranchPair>, GateError> {
    check_layout(state, layout)?;
    if active_qubit >= layout.a_width {
        return Err(StateError::QubitOutOfRange {
            index: active_qubit,
            qubit_count: layout.a_width,
        }
        .into());
    }
    let mut pairs: BTreeMap<u64, BranchPair> = BTreeMap::new();
    for (label, &amplitude) in state.terms() {
        let (_, payload, control) = layout.split(label);
        let bit = label.bit(active_qubit);
        let subspace_label = label.with_bit(active_qubit, 0).field(0, layout.a_width);
        let pair = pairs.entry(subspace_label).or_insert(BranchPair {
            subspace_label,
            branch0: None,
            branch1: None,
        });
        let side = if bit == 0 {
            &mut pair.branch0
        } else {
            &mut pair.branch1
        };
        if side.is_some() {
            return Err(GateError::GateDomain(format!(
                "register A value {} carries a superposition over registers B and C",
                label.field(0, layout.a_width)
            )));
        }
        *side = Some(BranchSide {
            label: *label,
            payload,
            control,
            amplitude,
        });
    }
    Ok(pairs.into_values().collect())
}

/// Applies Ξ with the given active qubit of register A.
pub fn apply_xi(
    state: &SparseState,
    layout: &RegisterLayout,
    active_qubit: usize,
    mode: XiMode,
) -> Result<SparseState, GateError> {
    if mode == XiMode::Marker && layout.c_width != 1 {
        return Err(StateError::InvalidLayout(format!(
            "marker mode needs a one-qubit register C, got {}",
            layout.c_width
        ))
        .into());
    }
    let pairs = branch_pairs(state, layout, active_qubit)?;
    let mut out = BTreeMap::new();
    let mut emit = |side: &BranchSide, payload: u64, control: u64| {
        let label = side
            .label
            .with_field(layout.b_start(), layout.b_width, payload)
            .with_field(layout.c_start(), layout.c_width, control);
        out.insert(label, side.amplitude);
    };
    for pair in &pairs {
        match (&pair.branch0, &pair.branch1) {
            (Some(s0), Some(s1)) => {
                let (payload0, payload1, control) = match mode {
                    XiMode::Marker => match (s0.control, s1.control) {
                        (0, 1) => (s1.payload, s1.payload, Some(1)),
                        (1, 0) => (s0.payload, s0.payload, Some(1)),
                        _ => (s0.payload, s1.payload, None),
                    },
                    XiMode::Counter => {
                        let sum = s0.control + s1.control;
                        if layout.c_width < 64 && sum >> layout.c_width != 0 {
                            return Err(GateError::CounterOverflow {
                                value: sum,
                                width: layout.c_width,
                            });
                        }
                        (s0.payload, s1.payload, Some(sum))
                    }
                };
                emit(s0, payload0, control.unwrap_or(s0.control));
                emit(s1, payload1, control.unwrap_or(s1.control));
            }
            (Some(s), None) | (None, Some(s)) => emit(s, s.payload, s.control),
            (None, None) => unreachable!("pairs are created from a populated side"),
        }
    }
    Ok(SparseState::from_map_unchecked(state.qubit_count(), out))
}

/// The single-qubit Weinberg map on the states where it is defined.
///
/// Basis states are fixed points. A state `(|…0_q…0_p…⟩ + |…1_q…1_p…⟩)/√2`,
/// where `q` is `qubit` and `p` is its unique partner, is sent to the
/// `|…0_q…0_p…⟩` term (the amplitude's phase is kept). Everything else is a
/// domain error.
pub fn apply_weinberg_local(state: &SparseState, qubit: usize) -> Result<SparseState, GateError> {
    if qubit >= state.qubit_count() {
        return Err(StateError::QubitOutOfRange {
            index: qubit,
            qubit_count: state.qubit_count(),
        }
        .into());
    }
    let terms: Vec<(BasisLabel, C64)> = state.terms().map(|(l, a)| (*l, *a)).collect();
    match terms.as_slice() {
        [_] => Ok(state.clone()),
        [(l0, a0), (l1, a1)] => {
            let differing = (l0.value() ^ l1.value()).count_ones();
            let same_amplitude = (a0 - a1).norm() <= NORM_TOLERANCE;
            let (zero, one) = if l0.bit(qubit) == 0 { (l0, l1) } else { (l1, l0) };
            if differing == 2 && zero.bit(qubit) == 0 && one.bit(qubit) == 1 && same_amplitude {
                // The partner qubit is the other differing position; it must be 0 in the `zero` term.
                let partner = (0..state.qubit_count())
                    .find(|&p| p != qubit && zero.bit(p) != one.bit(p))
                    .expect("two differing positions");
                if zero.bit(partner) == 0 {
                    let phase = a0 / a0.norm();
                    return Ok(SparseState::from_map_unchecked(
                        state.qubit_count(),
                        BTreeMap::from([(*zero, phase)]),
                    ));
                }
            }
            Err(GateError::GateDomain(format!(
                "Weinberg map is only defined on basis states and the correlated pair |00⟩+|11⟩, got {state:?}"
            )))
        }
        _ => Err(GateError::GateDomain(format!(
            "Weinberg map is only defined on basis states and the correlated pair |00⟩+|11⟩, got {} terms",
            terms.len()
        ))),
    }
}

/// An operation one party may apply to a shared state.
#[derive(Debug, Clone, PartialEq)]
pub enum LocalAction {
    Identity,
    Unitary {
        gate: DMatrix<C64>,
        targets: Vec<usize>,
    },
    Weinberg {
        qubit: usize,
    },
    /// Ξ acts jointly on every qubit of its layout.
    Xi {
        layout: RegisterLayout,
        active_qubit: usize,
        mode: XiMode,
    },
}

impl LocalAction {
    pub fn unitary(gate: DMatrix<C64>, targets: &[usize]) -> Self {
        LocalAction::Unitary {
            gate,
            targets: targets.to_vec(),
        }
    }

    /// Qubits the action touches, given the total qubit count.
    pub fn support(&self, qubit_count: usize) -> Vec<usize> {
        match self {
            LocalAction::Identity => Vec::new(),
            LocalAction::Unitary { targets, .. } => targets.clone(),
            LocalAction::Weinberg { qubit } => vec![*qubit],
            LocalAction::Xi { layout, .. } => (0..layout.total().max(qubit_count)).collect(),
        }
    }

    pub fn is_joint(&self) -> bool {
        matches!(self, LocalAction::Xi { .. })
    }

    pub fn apply(&self, state: &SparseState) -> Result<SparseState, GateError> {
        match self {
            LocalAction::Identity => Ok(state.clone()),
            LocalAction::Unitary { gate, targets } => Ok(state.apply_unitary(gate, targets)?),
            LocalAction::Weinberg { qubit } => apply_weinberg_local(state, *qubit),
            LocalAction::Xi {
                layout,
                active_qubit,
                mode,
            } => apply_xi(state, layout, *active_qubit, *mode),
        }
    }
}

fn check_parties(alice: &[usize], bob: &[usize]) -> Result<(), GateError> {
    if let Some(&q) = alice.iter().find(|q| bob.contains(q)) {
        return Err(GateError::OverlappingParties(q));
    }
    Ok(())
}

/// Checks that `action` stays inside `party`; joint gates that reach `other` are
/// rejected as not locally applicable.
fn check_action_support(
    action: &LocalAction,
    party: &[usize],
    other: &[usize],
    qubit_count: usize,
) -> Result<(), GateError> {
    let support = action.support(qubit_count);
    if action.is_joint() {
        if let Some(q) = support.iter().find(|q| other.contains(q)) {
            return Err(GateError::NotLocallyApplicable(format!(
                "Ξ acts jointly on all qubits and reaches qubit {q} across the cut"
            )));
        }
    }
    if let Some(&q) = support.iter().find(|q| !party.contains(q)) {
        return Err(GateError::ActionOutsideParty(q));
    }
    Ok(())
}

/// Trace distance between Bob's reduced state with and without Alice's action.
pub fn signaling_advantage(
    shared_state: &SparseState,
    alice_qubits: &[usize],
    bob_qubits: &[usize],
    alice_action: &LocalAction,
) -> Result<f64, GateError> {
    check_parties(alice_qubits, bob_qubits)?;
    check_action_support(
        alice_action,
        alice_qubits,
        bob_qubits,
        shared_state.qubit_count(),
    )?;
    let before = shared_state.reduced_density(bob_qubits)?;
    let after_state = alice_action.apply(shared_state)?;
    let after = after_state.reduced_density(bob_qubits)?;
    Ok(trace_distance(&before, &after)?)
}

/// Largest number of qubits for which every basis state is probed.
pub const MAX_PROBE_QUBITS: usize = 10;
/// Distances at or below this count as no signal.
pub const SIGNALING_TOLERANCE: f64 = 1e-12;

/// Outcome of [`no_signaling_check`].
#[derive(Debug, Clone, PartialEq)]
pub struct NoSignalingReport {
    pub signals: bool,
    pub max_distance: f64,
    pub witness: Option<SparseState>,
    pub probes_checked: usize,
    /// Probes outside the action's domain (only the Weinberg map has a restricted domain).
    pub probes_skipped: usize,
}

/// Probes `action` (acting on `sender`) for an effect on `receiver`'s marginal.
///
/// The probe family is every computational-basis state of the combined
/// system plus a Bell pair `(|0…0⟩ + |1_s 1_t⟩)/√2` for every `s` in
/// `sender` and `t` in `receiver`.
pub fn no_signaling_check(
    action: &LocalAction,
    sender: &[usize],
    receiver: &[usize],
) -> Result<NoSignalingReport, GateError> {
    check_parties(sender, receiver)?;
    if sender.is_empty() || receiver.is_empty() {
        return Err(StateError::EmptyQubitSet.into());
    }
    let qubit_count = sender.iter().chain(receiver).max().map_or(0, |m| m + 1);
    if let LocalAction::Xi { layout, .. } = action {
        if layout.total() != qubit_count {
            return Err(GateError::LayoutMismatch {
                a: layout.a_width,
                b: layout.b_width,
                c: layout.c_width,
                qubits: qubit_count,
            });
        }
    }
    check_action_support(action, sender, receiver, qubit_count)?;
    if qubit_count > MAX_PROBE_QUBITS {
        return Err(StateError::TooManyQubits {
            requested: qubit_count,
            max: MAX_PROBE_QUBITS,
        }
        .into());
    }

    let basis = (0..1u64 << qubit_count).map(|v| SparseState::basis(BasisLabel::new(v, qubit_count)));
    let mut bell = Vec::new();
    for &s in sender {
        for &t in receiver {
            bell.push(SparseState::bell_pair(qubit_count, s, t)?);
        }
    }

    let mut report = NoSignalingReport {
        signals: false,
        max_distance: 0.0,
        witness: None,
        probes_checked: 0,
        probes_skipped: 0,
    };
    for probe in basis.chain(bell) {
        let after = match action.apply(&probe) {
            Ok(s) => s,
            Err(GateError::GateDomain(_)) => {
                report.probes_skipped += 1;
                continue;
            }
            Err(e) => return Err(e),
        };
        let d = trace_distance(
            &probe.reduced_density(receiver)?,
            &after.reduced_density(receiver)?,
        )?;
        report.probes_checked += 1;
        if d > report.max_distance {
            report.max_distance = d;
            report.witness = Some(probe);
        }
    }
    report.signals = report.max_distance > SIGNALING_TOLERANCE;
    if !report.signals {
        report.witness = None;
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::statevector::gates;

    fn label(s: &str) -> BasisLabel {
        s.parse().unwrap()
    }

    fn uniform(width: usize, labels: &[&str]) -> SparseState {
        SparseState::uniform(width, labels.iter().map(|l| label(l))).unwrap()
    }

    fn layout(a: usize, b: usize, c: usize) -> RegisterLayout {
        RegisterLayout::new(a, b, c).unwrap()
    }

    // Single-qubit A and B, marker C: labels are "a g c".
    fn xi1(labels: &[&str]) -> SparseState {
        apply_xi(&uniform(3, labels), &layout(1, 1, 1), 0, XiMode::Marker).unwrap()
    }

    #[test]
    fn marker_first_line() {
        // |0,g0,0⟩ + |1,g1,1⟩ with g0 = 0, g1 = 1
        assert_eq!(xi1(&["000", "111"]), uniform(3, &["011", "111"]));
    }

    #[test]
    fn marker_second_line() {
        // |0,g0,1⟩ + |1,g1,0⟩ with g0 = 1, g1 = 0
        assert_eq!(xi1(&["011", "100"]), uniform(3, &["011", "111"]));
    }

    #[test]
    fn marker_third_line_and_saturated_pair() {
        assert_eq!(xi1(&["000", "110"]), uniform(3, &["000", "110"]));
        assert_eq!(xi1(&["001", "111"]), uniform(3, &["001", "111"]));
    }

    #[test]
    fn half_pairs_are_untouched() {
        let s = uniform(3, &["000"]);
        assert_eq!(apply_xi(&s, &layout(1, 1, 1), 0, XiMode::Marker).unwrap(), s);
        let s = uniform(3, &["101"]);
        assert_eq!(apply_xi(&s, &layout(1, 1, 1), 0, XiMode::Marker).unwrap(), s);
    }

    #[test]
    fn two_qubit_oracle_first_step() {
        let before = uniform(5, &["00000", "01010", "10101", "11110"]);
        let after = apply_xi(&before, &layout(2, 2, 1), 0, XiMode::Marker).unwrap();
        assert_eq!(after, uniform(5, &["00101", "01010", "10101", "11110"]));
    }

    #[test]
    fn unequal_amplitudes_keep_their_weights() {
        let s = SparseState::from_terms(
            3,
            [
                (label("000"), C64::new(0.6, 0.0)),
                (label("111"), C64::new(0.0, 0.8)),
            ],
        )
        .unwrap();
        let out = apply_xi(&s, &layout(1, 1, 1), 0, XiMode::Marker).unwrap();
        assert_eq!(out.amplitude(&label("011")), C64::new(0.6, 0.0));
        assert_eq!(out.amplitude(&label("111")), C64::new(0.0, 0.8));
    }

    #[test]
    fn counter_sums_into_both_branches() {
        // n = 1, counter width 2: |0, c=0⟩ + |1, c=1⟩
        let s = uniform(3, &["000", "101"]);
        let out = apply_xi(&s, &layout(1, 0, 2), 0, XiMode::Counter).unwrap();
        assert_eq!(out, uniform(3, &["001", "101"]));
    }

    #[test]
    fn counter_overflow_is_an_error() {
        let s = uniform(2, &["01", "11"]);
        assert_eq!(
            apply_xi(&s, &layout(1, 0, 1), 0, XiMode::Counter),
            Err(GateError::CounterOverflow { value: 2, width: 1 })
        );
    }

    #[test]
    fn superposed_side_is_a_domain_error() {
        let s = uniform(3, &["000", "011"]);
        assert!(matches!(
            apply_xi(&s, &layout(1, 1, 1), 0, XiMode::Marker),
            Err(GateError::GateDomain(_))
        ));
    }

    #[test]
    fn layout_errors() {
        let s = uniform(3, &["000"]);
        assert!(matches!(
            apply_xi(&s, &layout(1, 0, 1), 0, XiMode::Marker),
            Err(GateError::LayoutMismatch { .. })
        ));
        assert!(matches!(
            apply_xi(&s, &layout(1, 0, 2), 0, XiMode::Marker),
            Err(GateError::State(StateError::InvalidLayout(_)))
        ));
        assert!(matches!(
            apply_xi(&s, &layout(1, 1, 1), 1, XiMode::Marker),
            Err(GateError::State(StateError::QubitOutOfRange { .. }))
        ));
    }

    #[test]
    fn branch_pairs_expose_subspaces() {
        let s = uniform(5, &["00000", "01010", "10101", "11110"]);
        let pairs = branch_pairs(&s, &layout(2, 2, 1), 0).unwrap();
        assert_eq!(pairs.len(), 2);
        assert_eq!(pairs[0].subspace_label, 0b00);
        assert_eq!(pairs[0].branch1.unwrap().payload, 0b10);
        assert_eq!(pairs[1].subspace_label, 0b01);
        assert_eq!(pairs[1].branch0.unwrap().control, 0);
    }

    #[test]
    fn weinberg_collapses_bell_pair() {
        let bell = SparseState::bell_pair(2, 0, 1).unwrap();
        assert_eq!(
            apply_weinberg_local(&bell, 0).unwrap(),
            SparseState::basis(label("00"))
        );
        assert_eq!(
            apply_weinberg_local(&bell, 1).unwrap(),
            SparseState::basis(label("00"))
        );
    }

    #[test]
    fn weinberg_fixes_basis_states() {
        for l in ["00", "01", "10", "11"] {
            let s = SparseState::basis(label(l));
            assert_eq!(apply_weinberg_local(&s, 0).unwrap(), s);
        }
    }

    #[test]
    fn weinberg_domain() {
        let anti = uniform(2, &["01", "10"]);
        assert!(matches!(
            apply_weinberg_local(&anti, 0),
            Err(GateError::GateDomain(_))
        ));
        let plus = uniform(2, &["00", "10"]);
        assert!(apply_weinberg_local(&plus, 0).is_err());
        let ghz_like = uniform(3, &["000", "011"]);
        assert!(apply_weinberg_local(&ghz_like, 0).is_err());
        assert!(apply_weinberg_local(&ghz_like, 1).is_ok());
    }

    #[test]
    fn signaling_with_weinberg() {
        let bell = SparseState::bell_pair(2, 0, 1).unwrap();
        let d = signaling_advantage(&bell, &[0], &[1], &LocalAction::Weinberg { qubit: 0 }).unwrap();
        assert!((d - 0.5).abs() < 1e-12);
    }

    #[test]
    fn no_signaling_with_unitaries() {
        let bell = SparseState::bell_pair(2, 0, 1).unwrap();
        for gate in [gates::pauli_x(), gates::hadamard(), gates::ry(0.3), gates::rz(1.1)] {
            let d = signaling_advantage(&bell, &[0], &[1], &LocalAction::unitary(gate, &[0])).unwrap();
            assert!(d < 1e-12, "{d}");
        }
        let product = SparseState::basis(label("00"));
        let d = signaling_advantage(
            &product,
            &[0],
            &[1],
            &LocalAction::unitary(gates::pauli_x(), &[0]),
        )
        .unwrap();
        assert_eq!(d, 0.0);
    }

    #[test]
    fn signaling_party_errors() {
        let bell = SparseState::bell_pair(2, 0, 1).unwrap();
        assert_eq!(
            signaling_advantage(&bell, &[0, 1], &[1], &LocalAction::Identity),
            Err(GateError::OverlappingParties(1))
        );
        assert_eq!(
            signaling_advantage(
                &bell,
                &[0],
                &[1],
                &LocalAction::unitary(gates::pauli_x(), &[1])
            ),
            Err(GateError::ActionOutsideParty(1))
        );
    }

    #[test]
    fn check_reports_weinberg_witness() {
        let report = no_signaling_check(&LocalAction::Weinberg { qubit: 0 }, &[0], &[1]).unwrap();
        assert!(report.signals);
        assert!((report.max_distance - 0.5).abs() < 1e-12);
        assert_eq!(report.witness, Some(SparseState::bell_pair(2, 0, 1).unwrap()));
        assert_eq!(report.probes_checked, 5);
    }

    #[test]
    fn check_passes_unitaries() {
        let report =
            no_signaling_check(&LocalAction::unitary(gates::hadamard(), &[0]), &[0], &[1]).unwrap();
        assert!(!report.signals);
        assert_eq!(report.witness, None);
        assert_eq!(report.probes_checked, 5);
    }

    #[test]
    fn check_rejects_xi_across_cut() {
        let xi = LocalAction::Xi {
            layout: layout(1, 1, 1),
            active_qubit: 0,
            mode: XiMode::Marker,
        };
        assert!(matches!(
            no_signaling_check(&xi, &[0, 2], &[1]),
            Err(GateError::NotLocallyApplicable(_))
        ));
        assert!(matches!(
            no_signaling_check(&xi, &[0], &[1, 2]),
            Err(GateError::NotLocallyApplicable(_))
        ));
    }
}
