//! Classical probabilistic circuits compiled from causal models.
//!
//! Every node of a model becomes one element in topological order: root
//! nodes are sources drawing from their prior, other nodes are stochastic
//! gates reading their parents' wires. Observed nodes additionally get a
//! measurement element; latent nodes stay internal.
//!
//! Sampling is ancestral and reproducible. Shots are split into fixed-size
//! chunks and chunk `c` draws from a ChaCha8 stream `c` keyed by the seed, so
//! sequential and parallel sampling yield the same counts.

use std::collections::BTreeSet;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::causal::model::{CausalModel, Prob};
use crate::distribution::{decode, table_size, JointDistribution, Variable};
use crate::error::CausalError;

/// Shots drawn from one RNG stream.
pub const SHOTS_PER_CHUNK: u64 = 1 << 16;

#[derive(Debug, Clone, PartialEq)]
pub enum ElementKind {
    /// Draws a value from a fixed prior.
    Source { prior: Vec<Prob> },
    /// Draws a value from the row selected by the input wires (first input most significant).
    Gate {
        inputs: Vec<usize>,
        table: Vec<Vec<Prob>>,
    },
    /// Exposes the value on wire `input` as a named output.
    Measurement { input: usize },
}

#[derive(Debug, Clone, PartialEq)]
pub struct Element {
    pub name: String,
    /// Number of values on the element's output wire (measurements copy their input's).
    pub card: usize,
    pub kind: ElementKind,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ClassicalCircuit {
    elements: Vec<Element>,
}

fn invalid(msg: impl Into<String>) -> CausalError {
    CausalError::InvalidDistribution(format!("invalid circuit: {}", msg.into()))
}

fn check_row(name: &str, row: &[Prob], card: usize) -> Result<(), CausalError> {
    if row.len() != card {
        return Err(invalid(format!("{name}: row has {} entries, expected {card}", row.len())));
    }
    let sum: f64 = row.iter().map(Prob::value).sum();
    if row.iter().any(|p| p.value() < 0.0) || (sum - 1.0).abs() > 1e-12 {
        return Err(invalid(format!("{name}: row is not a distribution")));
    }
    Ok(())
}

impl ClassicalCircuit {
    /// Validates wiring and tables.
    pub fn new(elements: Vec<Element>) -> Result<Self, CausalError> {
        let mut wires = BTreeSet::new();
        let mut outputs = BTreeSet::new();
        for (i, e) in elements.iter().enumerate() {
            if e.card == 0 {
                return Err(CausalError::ZeroCardinality(e.name.clone()));
            }
            let is_wire = |j: usize| {
                j < i && !matches!(elements[j].kind, ElementKind::Measurement { .. })
            };
            match &e.kind {
                ElementKind::Source { prior } => check_row(&e.name, prior, e.card)?,
                ElementKind::Gate { inputs, table } => {
                    if inputs.is_empty() {
                        return Err(invalid(format!("gate {} has no inputs", e.name)));
                    }
                    if let Some(&j) = inputs.iter().find(|&&j| !is_wire(j)) {
                        return Err(invalid(format!(
                            "gate {} reads element {j}, which is not an earlier wire",
                            e.name
                        )));
                    }
                    let rows = table_size(inputs.iter().map(|&j| elements[j].card));
                    if table.len() != rows {
                        return Err(invalid(format!(
                            "gate {} has {} rows, inputs need {rows}",
                            e.name,
                            table.len()
                        )));
                    }
                    for row in table {
                        check_row(&e.name, row, e.card)?;
                    }
                }
                ElementKind::Measurement { input } => {
                    if !is_wire(*input) {
                        return Err(invalid(format!(
                            "measurement {} reads element {input}, which is not an earlier wire",
                            e.name
                        )));
                    }
                    if elements[*input].card != e.card {
                        return Err(invalid(format!("measurement {} changes cardinality", e.name)));
                    }
                    if !outputs.insert(e.name.as_str()) {
                        return Err(CausalError::DuplicateNode(e.name.clone()));
                    }
                    continue;
                }
            }
            if !wires.insert(e.name.as_str()) {
                return Err(CausalError::DuplicateNode(e.name.clone()));
            }
        }
        Ok(ClassicalCircuit { elements })
    }

    pub fn elements(&self) -> &[Element] {
        &self.elements
    }

    /// Indices of sources and gates.
    pub fn wires(&self) -> Vec<usize> {
        (0..self.elements.len())
            .filter(|&i| !matches!(self.elements[i].kind, ElementKind::Measurement { .. }))
            .collect()
    }

    pub fn measurements(&self) -> Vec<usize> {
        (0..self.elements.len())
            .filter(|&i| matches!(self.elements[i].kind, ElementKind::Measurement { .. }))
            .collect()
    }

    fn output_variables(&self) -> Vec<Variable> {
        self.measurements()
            .into_iter()
            .map(|i| Variable::new(self.elements[i].name.clone(), self.elements[i].card))
            .collect()
    }

    fn row<'a>(&'a self, i: usize, values: &[usize]) -> &'a [Prob] {
        match &self.elements[i].kind {
            ElementKind::Source { prior } => prior,
            ElementKind::Gate { inputs, table } => {
                let r = inputs
                    .iter()
                    .fold(0, |acc, &j| acc * self.elements[j].card + values[j]);
                &table[r]
            }
            ElementKind::Measurement { .. } => unreachable!("measurements carry no table"),
        }
    }

    fn measured(&self, values: &[usize]) -> Vec<usize> {
        self.measurements()
            .into_iter()
            .map(|i| match self.elements[i].kind {
                ElementKind::Measurement { input } => values[input],
                _ => unreachable!(),
            })
            .collect()
    }

    /// Output distribution by enumerating every wire assignment.
    pub fn exact_distribution(&self) -> Result<JointDistribution, CausalError> {
        let wires = self.wires();
        let cards: Vec<usize> = wires.iter().map(|&i| self.elements[i].card).collect();
        let out_vars = self.output_variables();
        let out_cards: Vec<usize> = out_vars.iter().map(|v| v.card).collect();
        let mut probs = vec![0.0; table_size(out_cards.iter().copied())];
        let mut local = vec![0; wires.len()];
        let mut values = vec![0; self.elements.len()];
        for idx in 0..table_size(cards.iter().copied()) {
            decode(idx, &cards, &mut local);
            for (&w, &v) in wires.iter().zip(&local) {
                values[w] = v;
            }
            let weight: f64 = wires
                .iter()
                .map(|&w| self.row(w, &values)[values[w]].value())
                .product();
            if weight == 0.0 {
                continue;
            }
            let out = self.measured(&values);
            let k = out.iter().zip(&out_cards).fold(0, |acc, (&v, &c)| acc * c + v);
            probs[k] += weight;
        }
        JointDistribution::new(out_vars, probs)
    }

    fn run_chunk(&self, seed: u64, chunk: u64, shots: u64, counts: &mut [u64]) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        rng.set_stream(chunk);
        let wires = self.wires();
        let out_cards: Vec<usize> = self.output_variables().iter().map(|v| v.card).collect();
        let mut values = vec![0; self.elements.len()];
        for _ in 0..shots {
            for &w in &wires {
                let row = self.row(w, &values);
                values[w] = inverse_cdf(row, rng.random::<f64>());
            }
            let out = self.measured(&values);
            let k = out.iter().zip(&out_cards).fold(0, |acc, (&v, &c)| acc * c + v);
            counts[k] += 1;
        }
    }

    fn chunks(shots: u64) -> Vec<(u64, u64)> {
        (0..shots.div_ceil(SHOTS_PER_CHUNK))
            .map(|c| (c, SHOTS_PER_CHUNK.min(shots - c * SHOTS_PER_CHUNK)))
            .collect()
    }

    fn empirical(&self, counts: Vec<u64>, shots: u64) -> Result<JointDistribution, CausalError> {
        let probs = counts.into_iter().map(|c| c as f64 / shots as f64).collect();
        JointDistribution::new(self.output_variables(), probs)
    }

    fn count_slots(&self) -> usize {
        table_size(self.output_variables().iter().map(|v| v.card))
    }
}

/// First index whose cumulative probability exceeds `u`; never a zero-probability entry.
fn inverse_cdf(row: &[Prob], u: f64) -> usize {
    let mut cumulative = 0.0;
    let mut last_nonzero = 0;
    for (i, p) in row.iter().enumerate() {
        let p = p.value();
        if p > 0.0 {
            cumulative += p;
            last_nonzero = i;
            if u < cumulative {
                return i;
            }
        }
    }
    last_nonzero
}

/// Outcome of [`sample_with_stats`].
#[derive(Debug, Clone, PartialEq)]
pub struct SampleRun {
    pub distribution: JointDistribution,
    pub shots: u64,
    /// Source and gate evaluations performed: `shots × wires`.
    pub element_evaluations: u64,
}

/// Compiles a model into a circuit, one element per node in topological order.
pub fn compile_dag_to_circuit(model: &CausalModel) -> ClassicalCircuit {
    let dag = model.dag();
    let order = dag.topological_order();
    let mut position = vec![usize::MAX; dag.len()];
    let mut elements = Vec::with_capacity(2 * dag.len());
    for &node in &order {
        position[node] = elements.len();
        let cpt = model.cpt(node);
        let parents = model.cpt_parent_indices(node);
        let kind = if parents.is_empty() {
            ElementKind::Source {
                prior: cpt.rows[0].clone(),
            }
        } else {
            ElementKind::Gate {
                inputs: parents.iter().map(|&p| position[p]).collect(),
                table: cpt.rows.clone(),
            }
        };
        elements.push(Element {
            name: dag.name(node).to_string(),
            card: dag.card(node),
            kind,
        });
    }
    for &node in &order {
        if !model.is_latent(node) {
            elements.push(Element {
                name: dag.name(node).to_string(),
                card: dag.card(node),
                kind: ElementKind::Measurement {
                    input: position[node],
                },
            });
        }
    }
    ClassicalCircuit::new(elements).expect("a valid model compiles to a valid circuit")
}

/// Empirical output distribution from `shots` ancestral samples.
pub fn sample(circuit: &ClassicalCircuit, shots: u64, seed: u64) -> Result<JointDistribution, CausalError> {
    Ok(sample_with_stats(circuit, shots, seed)?.distribution)
}

pub fn sample_with_stats(
    circuit: &ClassicalCircuit,
    shots: u64,
    seed: u64,
) -> Result<SampleRun, CausalError> {
    if shots == 0 {
        return Err(CausalError::EmptySet("shots"));
    }
    let mut counts = vec![0u64; circuit.count_slots()];
    for (chunk, n) in ClassicalCircuit::chunks(shots) {
        circuit.run_chunk(seed, chunk, n, &mut counts);
    }
    Ok(SampleRun {
        distribution: circuit.empirical(counts, shots)?,
        shots,
        element_evaluations: shots * circuit.wires().len() as u64,
    })
}

/// Same schedule as [`sample`] with chunks drawn on the rayon pool.
pub fn sample_parallel(
    circuit: &ClassicalCircuit,
    shots: u64,
    seed: u64,
) -> Result<JointDistribution, CausalError> {
    if shots == 0 {
        return Err(CausalError::EmptySet("shots"));
    }
    let slots = circuit.count_slots();
    let counts = ClassicalCircuit::chunks(shots)
        .into_par_iter()
        .map(|(chunk, n)| {
            let mut c = vec![0u64; slots];
            circuit.run_chunk(seed, chunk, n, &mut c);
            c
        })
        .reduce(
            || vec![0u64; slots],
            |mut a, b| {
                a.iter_mut().zip(b).for_each(|(x, y)| *x += y);
                a
            },
        );
    circuit.empirical(counts, shots)
}
