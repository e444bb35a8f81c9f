//! The Bell scenario: local graph, signaling graph, resources and CHSH.
//!
//! Alice chooses setting `X` and observes `A`; Bob chooses `Y` and observes
//! `B`; `Lambda` is the shared resource. In the local graph the only arrows
//! are `Lambda → A`, `Lambda → B`, `X → A` and `Y → B`. The signaling graph
//! adds `X → B` and `A → B`.

use std::f64::consts::{FRAC_PI_2, FRAC_PI_4};

use crate::distribution::{JointDistribution, Variable};
use crate::error::CausalError;
use crate::statevector::{gates, SparseState};

use super::dag::Dag;
use super::model::{CausalModel, Cpt, Prob};

pub const LAMBDA: &str = "Lambda";
pub const X: &str = "X";
pub const Y: &str = "Y";
pub const A: &str = "A";
pub const B: &str = "B";

/// Tolerance for normalization and no-signaling of behaviors.
pub const BEHAVIOR_TOLERANCE: f64 = 1e-12;

/// Local Bell graph with a shared resource of `lambda_card` values.
pub fn bell_dag(lambda_card: usize) -> Result<Dag, CausalError> {
    Dag::build(
        &[(LAMBDA, lambda_card), (X, 2), (Y, 2), (A, 2), (B, 2)],
        &[(LAMBDA, A), (LAMBDA, B), (X, A), (Y, B)],
    )
}

/// The local graph plus the signaling arrows `X → B` and `A → B`.
pub fn signaling_dag(lambda_card: usize) -> Result<Dag, CausalError> {
    let mut dag = bell_dag(lambda_card)?;
    dag.add_edge(X, B)?;
    dag.add_edge(A, B)?;
    Ok(dag)
}

/// A binary Bell behavior `P(a, b | x, y)`, stored as `p[x][y][a][b]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BellBehavior {
    p: [[[[f64; 2]; 2]; 2]; 2],
}

impl BellBehavior {
    #[allow(clippy::needless_range_loop)]
    pub fn new(p: [[[[f64; 2]; 2]; 2]; 2]) -> Result<Self, CausalError> {
        for x in 0..2 {
            for y in 0..2 {
                let block = p[x][y];
                if block.iter().flatten().any(|v| !(v.is_finite() && *v >= 0.0)) {
                    return Err(CausalError::Unnormalized(format!(
                        "negative entry for x={x}, y={y}"
                    )));
                }
                let total: f64 = block.iter().flatten().sum();
                if (total - 1.0).abs() > BEHAVIOR_TOLERANCE {
                    return Err(CausalError::Unnormalized(format!(
                        "P(·,·|x={x}, y={y}) sums to {total}"
                    )));
                }
            }
        }
        Ok(BellBehavior { p })
    }

    /// `f(a, b, x, y)` for every entry.
    pub fn from_fn(f: impl Fn(usize, usize, usize, usize) -> f64) -> Result<Self, CausalError> {
        let mut p = [[[[0.0; 2]; 2]; 2]; 2];
        for (x, px) in p.iter_mut().enumerate() {
            for (y, pxy) in px.iter_mut().enumerate() {
                for (a, row) in pxy.iter_mut().enumerate() {
                    for (b, v) in row.iter_mut().enumerate() {
                        *v = f(a, b, x, y);
                    }
                }
            }
        }
        Self::new(p)
    }

    pub fn prob(&self, a: usize, b: usize, x: usize, y: usize) -> f64 {
        self.p[x][y][a][b]
    }

    pub fn alice_marginal(&self, a: usize, x: usize, y: usize) -> f64 {
        self.p[x][y][a][0] + self.p[x][y][a][1]
    }

    pub fn bob_marginal(&self, b: usize, x: usize, y: usize) -> f64 {
        self.p[x][y][0][b] + self.p[x][y][1][b]
    }

    /// Largest change of Alice's marginal with `y` and of Bob's with `x`.
    pub fn signaling_deviation(&self) -> (f64, f64) {
        let mut to_alice: f64 = 0.0;
        let mut to_bob: f64 = 0.0;
        for s in 0..2 {
            for o in 0..2 {
                to_alice = to_alice.max((self.alice_marginal(o, s, 0) - self.alice_marginal(o, s, 1)).abs());
                to_bob = to_bob.max((self.bob_marginal(o, 0, s) - self.bob_marginal(o, 1, s)).abs());
            }
        }
        (to_alice, to_bob)
    }

    /// `E(x, y) = Σ (−1)^{a⊕b} P(a, b | x, y)`.
    pub fn correlator(&self, x: usize, y: usize) -> f64 {
        let q = &self.p[x][y];
        q[0][0] + q[1][1] - q[0][1] - q[1][0]
    }

    /// Joint over `(X, Y, A, B)` with the settings as uniform inputs.
    pub fn to_joint(&self) -> JointDistribution {
        let vars = [X, Y, A, B].iter().map(|n| Variable::new(*n, 2)).collect();
        JointDistribution::from_fn(vars, |v| 0.25 * self.p[v[0]][v[1]][v[2]][v[3]])
            .and_then(|d| d.with_inputs([X, Y]))
            .expect("normalized behavior gives a normalized joint")
    }

    /// Reads `P(A, B | X, Y)` from a joint that contains binary `X`, `Y`, `A`, `B`.
    #[allow(clippy::needless_range_loop)]
    pub fn from_joint(dist: &JointDistribution) -> Result<Self, CausalError> {
        for name in [X, Y, A, B] {
            let card = dist.variables()[dist.var_index(name)?].card;
            if card != 2 {
                return Err(CausalError::NotBinary(format!("{name} has {card} values")));
            }
        }
        let m = dist.marginal(&[X, Y, A, B])?;
        let mut p = [[[[0.0; 2]; 2]; 2]; 2];
        for x in 0..2 {
            for y in 0..2 {
                let pxy: f64 = (0..4).map(|ab| m.prob(&[x, y, ab / 2, ab % 2])).sum();
                if pxy <= 0.0 {
                    return Err(CausalError::Unnormalized(format!(
                        "settings x={x}, y={y} have probability zero"
                    )));
                }
                for a in 0..2 {
                    for b in 0..2 {
                        p[x][y][a][b] = m.prob(&[x, y, a, b]) / pxy;
                    }
                }
            }
        }
        Self::new(p)
    }
}

/// `E(0,0) + E(0,1) + E(1,0) − E(1,1)`.
pub fn chsh_value(behavior: &BellBehavior) -> f64 {
    behavior.correlator(0, 0) + behavior.correlator(0, 1) + behavior.correlator(1, 0)
        - behavior.correlator(1, 1)
}

/// CHSH value of a joint distribution holding a Bell behavior.
pub fn chsh_value_of_joint(dist: &JointDistribution) -> Result<f64, CausalError> {
    Ok(chsh_value(&BellBehavior::from_joint(dist)?))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Resource {
    SharedRandomness,
    BellState,
    PrBox,
}

/// Measurement directions in the Z–X plane, as angles from Z.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MeasurementAngles {
    pub alice: [f64; 2],
    pub bob: [f64; 2],
}

impl MeasurementAngles {
    /// Alice `{0, π/2}`, Bob `{π/4, −π/4}`.
    pub fn tsirelson() -> Self {
        MeasurementAngles {
            alice: [0.0, FRAC_PI_2],
            bob: [FRAC_PI_4, -FRAC_PI_4],
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct BellScenario {
    pub resource: Resource,
    pub settings: [usize; 2],
    pub outcomes: [usize; 2],
    pub angles: Option<MeasurementAngles>,
}

impl BellScenario {
    pub fn new(resource: Resource) -> Self {
        BellScenario {
            resource,
            settings: [2, 2],
            outcomes: [2, 2],
            angles: None,
        }
    }

    pub fn quantum(angles: MeasurementAngles) -> Self {
        BellScenario {
            angles: Some(angles),
            ..Self::new(Resource::BellState)
        }
    }

    fn check_binary(&self) -> Result<(), CausalError> {
        if self.settings != [2, 2] || self.outcomes != [2, 2] {
            return Err(CausalError::NotBinary(format!(
                "settings {:?}, outcomes {:?}",
                self.settings, self.outcomes
            )));
        }
        Ok(())
    }
}

/// Behavior of the deterministic local strategy `a = alice[x]`, `b = bob[y]`.
pub fn deterministic_behavior(alice: [usize; 2], bob: [usize; 2]) -> BellBehavior {
    BellBehavior::from_fn(|a, b, x, y| f64::from(u8::from(a == alice[x] && b == bob[y])))
        .expect("deterministic strategies are normalized")
}

/// Every deterministic local strategy pair with its CHSH value.
pub fn deterministic_strategies() -> impl Iterator<Item = ([usize; 2], [usize; 2], f64)> {
    (0..16).map(|s| {
        let alice = [s & 1, (s >> 1) & 1];
        let bob = [(s >> 2) & 1, (s >> 3) & 1];
        (alice, bob, chsh_value(&deterministic_behavior(alice, bob)))
    })
}

/// Largest CHSH value over behaviors that factorize through shared randomness.
///
/// Such behaviors are mixtures of deterministic local strategies and CHSH is
/// linear, so the maximum is attained by one of the 16 deterministic pairs.
pub fn classical_chsh_max(scenario: &BellScenario) -> Result<f64, CausalError> {
    scenario.check_binary()?;
    if scenario.resource != Resource::SharedRandomness {
        return Err(CausalError::InvalidDistribution(
            "classical bound needs the shared-randomness resource".into(),
        ));
    }
    Ok(deterministic_strategies()
        .map(|(_, _, v)| v)
        .fold(f64::NEG_INFINITY, f64::max))
}

/// Outcome statistics of Z–X plane measurements on `(|00⟩ + |11⟩)/√2`.
#[allow(clippy::needless_range_loop)]
pub fn quantum_bell_distribution(scenario: &BellScenario) -> Result<BellBehavior, CausalError> {
    scenario.check_binary()?;
    let angles = scenario.angles.ok_or(CausalError::MissingAngles)?;
    let bell = SparseState::bell_pair(2, 0, 1)?;
    let mut p = [[[[0.0; 2]; 2]; 2]; 2];
    for (x, &alpha) in angles.alice.iter().enumerate() {
        for (y, &beta) in angles.bob.iter().enumerate() {
            let rotated = bell
                .apply_unitary(&gates::ry(-alpha), &[0])?
                .apply_unitary(&gates::ry(-beta), &[1])?;
            let stats = rotated.measurement_distribution(&[0, 1])?;
            for a in 0..2 {
                for b in 0..2 {
                    p[x][y][a][b] = stats.prob(&[a, b]);
                }
            }
        }
    }
    BellBehavior::new(p)
}

/// `P(a, b | x, y) = 1/2` iff `a ⊕ b = x·y`.
pub fn pr_box_distribution() -> BellBehavior {
    BellBehavior::from_fn(|a, b, x, y| if (a ^ b) == (x & y) { 0.5 } else { 0.0 })
        .expect("PR box is normalized")
}

/// A shared-coin model on the local graph: `A = λ`, and `B = λ` for `y = 0`
/// while `B` copies `λ` with probability 3/4 for `y = 1`. Its CHSH value is 2.
pub fn classical_bell_model() -> Result<CausalModel, CausalError> {
    let r = Prob::ratio;
    let copy = vec![vec![r(1, 1), r(0, 1)], vec![r(0, 1), r(1, 1)]];
    let mut a_rows = copy.clone();
    a_rows.extend(copy.clone());
    // B | Lambda, Y
    let b_rows = vec![
        vec![r(1, 1), r(0, 1)],
        vec![r(3, 4), r(1, 4)],
        vec![r(0, 1), r(1, 1)],
        vec![r(1, 4), r(3, 4)],
    ];
    CausalModel::new(
        bell_dag(2)?,
        vec![
            Cpt::uniform(LAMBDA, 2),
            Cpt::uniform(X, 2),
            Cpt::uniform(Y, 2),
            Cpt::new(A, &[X, LAMBDA], a_rows),
            Cpt::new(B, &[LAMBDA, Y], b_rows),
        ],
    )?
    .with_latent([LAMBDA])
}

/// A model on the signaling graph (trivial `Lambda`) whose joint reproduces `target`.
///
/// `P(A | X)` is the target's marginal and `P(B | A, X, Y)` its conditional;
/// rows with `P(a | x) = 0` are filled uniformly.
pub fn finetuned_signaling_model(target: &BellBehavior) -> Result<CausalModel, CausalError> {
    let (to_alice, _) = target.signaling_deviation();
    if to_alice > BEHAVIOR_TOLERANCE {
        return Err(CausalError::TargetSignalsToAlice(to_alice));
    }
    let dag = signaling_dag(1)?;
    let alice_rows: Vec<Vec<Prob>> = (0..2)
        .map(|x| (0..2).map(|a| Prob::Real(target.alice_marginal(a, x, 0))).collect())
        .collect();
    // Rows keyed by (X, Y, A).
    let mut bob_rows = Vec::with_capacity(8);
    for x in 0..2 {
        for y in 0..2 {
            for a in 0..2 {
                let pa = target.alice_marginal(a, x, y);
                let row = if pa > 0.0 {
                    let p0 = target.prob(a, 0, x, y) / pa;
                    vec![Prob::Real(p0), Prob::Real(1.0 - p0)]
                } else {
                    vec![Prob::ratio(1, 2); 2]
                };
                bob_rows.push(row);
            }
        }
    }
    CausalModel::new(
        dag,
        vec![
            Cpt::new(LAMBDA, &[], vec![vec![Prob::ratio(1, 1)]]),
            Cpt::uniform(X, 2),
            Cpt::uniform(Y, 2),
            Cpt::new(A, &[X, LAMBDA], alice_rows),
            Cpt::new(B, &[X, Y, A, LAMBDA], bob_rows),
        ],
    )?
    .with_latent([LAMBDA])
}

/// Largest entry difference between the model's `(X, Y, A, B)` marginal and `target`.
pub fn reproduction_error(model: &CausalModel, target: &BellBehavior) -> Result<f64, CausalError> {
    let got = model.joint_distribution().marginal(&[X, Y, A, B])?;
    got.max_abs_diff(&target.to_joint())
}
