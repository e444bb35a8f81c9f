//! Line-oriented text formats for oracles, causal models, distributions and
//! circuits.
//!
//! Blank lines are ignored and `#` starts a comment everywhere.
//!
//! Oracle:
//!
//! ```text
//! n=3
//! 101
//! ```
//!
//! Causal model:
//!
//! ```text
//! node Lambda 2 latent
//! node A 2
//! edge Lambda -> A
//! cpt Lambda
//! : 1/2 1/2
//! cpt A | Lambda
//! 0 : 1 0
//! 1 : 0 1
//! ```
//!
//! Distribution:
//!
//! ```text
//! vars X:2 A:2
//! inputs X
//! 0 0 : 0.5
//! 1 1 : 0.5
//! ```
//!
//! Circuit:
//!
//! ```text
//! circuit
//! source Lambda 2 : 1/2 1/2
//! gate A 2 <- Lambda
//! 0 : 1 0
//! 1 : 0 1
//! measure A <- A
//! ```

use std::collections::BTreeSet;
use std::fmt::Write as _;

use crate::algorithms::OracleFunction;
use crate::causal::{CausalModel, Cpt, Dag, Prob};
use crate::circuit::{ClassicalCircuit, Element, ElementKind};
use crate::distribution::{table_size, JointDistribution, Variable};
use crate::error::FormatError;
use crate::statevector::BasisLabel;

/// Non-empty lines with comments removed, numbered from 1.
fn lines(text: &str) -> impl Iterator<Item = (usize, &str)> {
    text.lines().enumerate().filter_map(|(i, raw)| {
        let line = raw.split('#').next().unwrap_or("").trim();
        (!line.is_empty()).then_some((i + 1, line))
    })
}

fn parse_usize(line: usize, s: &str, what: &str) -> Result<usize, FormatError> {
    s.parse()
        .map_err(|_| FormatError::at(line, format!("{what} {s:?} is not a non-negative integer")))
}

fn parse_probs(line: usize, s: &str) -> Result<Vec<Prob>, FormatError> {
    s.split_whitespace()
        .map(|t| t.parse::<Prob>().map_err(|e| FormatError::at(line, e)))
        .collect()
}

/// Splits `values : probs` at the colon.
fn split_row(line: usize, s: &str) -> Result<(&str, &str), FormatError> {
    s.split_once(':')
        .map(|(a, b)| (a.trim(), b.trim()))
        .ok_or_else(|| FormatError::at(line, "expected `values : probabilities`"))
}

/// Mixed-radix index of a row of values.
fn row_index(line: usize, values: &str, cards: &[usize]) -> Result<usize, FormatError> {
    let vals: Vec<usize> = values
        .split_whitespace()
        .map(|t| parse_usize(line, t, "value"))
        .collect::<Result<_, _>>()?;
    if vals.len() != cards.len() {
        return Err(FormatError::at(
            line,
            format!("{} values given, expected {}", vals.len(), cards.len()),
        ));
    }
    let mut idx = 0;
    for (&v, &c) in vals.iter().zip(cards) {
        if v >= c {
            return Err(FormatError::at(line, format!("value {v} out of range 0..{c}")));
        }
        idx = idx * c + v;
    }
    Ok(idx)
}

fn row_values(idx: usize, cards: &[usize]) -> String {
    let mut vals = vec![0; cards.len()];
    crate::distribution::decode(idx, cards, &mut vals);
    vals.iter().map(|v| v.to_string()).collect::<Vec<_>>().join(" ")
}

fn join_probs(row: &[Prob]) -> String {
    row.iter().map(|p| p.to_string()).collect::<Vec<_>>().join(" ")
}

/// Collects table rows following a header until the next keyword line.
struct TableBuilder {
    name: String,
    header_line: usize,
    cards: Vec<usize>,
    rows: Vec<Option<Vec<Prob>>>,
}

impl TableBuilder {
    fn new(name: &str, header_line: usize, cards: Vec<usize>) -> Self {
        let n = table_size(cards.iter().copied());
        TableBuilder {
            name: name.to_string(),
            header_line,
            cards,
            rows: vec![None; n],
        }
    }

    fn push(&mut self, line: usize, text: &str) -> Result<(), FormatError> {
        let (values, probs) = split_row(line, text)?;
        let idx = row_index(line, values, &self.cards)?;
        if self.rows[idx].is_some() {
            return Err(FormatError::at(line, format!("row {values:?} of {} repeated", self.name)));
        }
        self.rows[idx] = Some(parse_probs(line, probs)?);
        Ok(())
    }

    fn finish(self) -> Result<Vec<Vec<Prob>>, FormatError> {
        let TableBuilder {
            name,
            header_line,
            cards,
            rows,
        } = self;
        rows.into_iter()
            .enumerate()
            .map(|(i, r)| {
                r.ok_or_else(|| {
                    FormatError::at(
                        header_line,
                        format!("{name} is missing the row `{} :`", row_values(i, &cards)),
                    )
                })
            })
            .collect()
    }
}

// ---- oracle ----

pub fn parse_oracle(text: &str) -> Result<OracleFunction, FormatError> {
    let mut it = lines(text);
    let (first, header) = it
        .next()
        .ok_or_else(|| FormatError::Invalid("empty oracle file".into()))?;
    let n = header
        .strip_prefix("n=")
        .or_else(|| header.strip_prefix("n ="))
        .ok_or_else(|| FormatError::at(first, "expected `n=<int>`"))?;
    let n = parse_usize(first, n.trim(), "input width")?;
    if n == 0 || n >= 32 {
        return Err(FormatError::at(first, format!("input width {n} out of range 1..31")));
    }
    let mut solutions = BTreeSet::new();
    for (line, s) in it {
        if s.len() != n || !s.chars().all(|c| c == '0' || c == '1') {
            return Err(FormatError::at(line, format!("expected an {n}-bit string, got {s:?}")));
        }
        let label: BasisLabel = s
            .parse()
            .map_err(|_| FormatError::at(line, format!("bad bit string {s:?}")))?;
        if !solutions.insert(label.value()) {
            return Err(FormatError::at(line, format!("input {s} listed twice")));
        }
    }
    OracleFunction::from_solutions(n, solutions).map_err(|e| FormatError::Invalid(e.to_string()))
}

pub fn write_oracle(oracle: &OracleFunction) -> String {
    let mut out = format!("n={}\n", oracle.n());
    for s in oracle.solutions() {
        out.push_str(&oracle.format_input(s));
        out.push('\n');
    }
    out
}

// ---- causal model ----

pub fn parse_model(text: &str) -> Result<CausalModel, FormatError> {
    let mut dag = Dag::new();
    let mut latent = Vec::new();
    let mut cpts = Vec::new();
    let mut open: Option<(TableBuilder, Vec<String>)> = None;

    let close = |open: &mut Option<(TableBuilder, Vec<String>)>,
                 cpts: &mut Vec<Cpt>|
     -> Result<(), FormatError> {
        if let Some((table, parents)) = open.take() {
            let node = table.name.clone();
            let rows = table.finish()?;
            cpts.push(Cpt {
                node,
                parents,
                rows,
            });
        }
        Ok(())
    };

    for (line, s) in lines(text) {
        let mut words = s.split_whitespace();
        match words.next() {
            Some("node") => {
                close(&mut open, &mut cpts)?;
                let w: Vec<&str> = words.collect();
                let (name, card, flag) = match w.as_slice() {
                    [name, card] => (*name, *card, None),
                    [name, card, flag] => (*name, *card, Some(*flag)),
                    _ => return Err(FormatError::at(line, "expected `node <name> <card> [latent]`")),
                };
                let card = parse_usize(line, card, "cardinality")?;
                dag.add_node(name, card).map_err(|e| FormatError::at(line, e.to_string()))?;
                match flag {
                    None => {}
                    Some("latent") => latent.push(name.to_string()),
                    Some(other) => {
                        return Err(FormatError::at(line, format!("unknown node flag {other:?}")))
                    }
                }
            }
            Some("edge") => {
                close(&mut open, &mut cpts)?;
                let w: Vec<&str> = words.collect();
                match w.as_slice() {
                    [from, "->", to] => dag
                        .add_edge(from, to)
                        .map_err(|e| FormatError::at(line, e.to_string()))?,
                    _ => return Err(FormatError::at(line, "expected `edge <from> -> <to>`")),
                }
            }
            Some("cpt") => {
                close(&mut open, &mut cpts)?;
                let rest = s["cpt".len()..].trim();
                let (node, parents) = match rest.split_once('|') {
                    Some((n, p)) => (n.trim(), p.split_whitespace().map(String::from).collect()),
                    None => (rest, Vec::new()),
                };
                if node.is_empty() || node.contains(char::is_whitespace) {
                    return Err(FormatError::at(line, "expected `cpt <node> [| parents...]`"));
                }
                dag.index(node).map_err(|e| FormatError::at(line, e.to_string()))?;
                let cards = parents
                    .iter()
                    .map(|p: &String| dag.index(p).map(|i| dag.card(i)))
                    .collect::<Result<Vec<_>, _>>()
                    .map_err(|e| FormatError::at(line, e.to_string()))?;
                open = Some((TableBuilder::new(node, line, cards), parents));
            }
            _ => match open.as_mut() {
                Some((table, _)) => table.push(line, s)?,
                None => return Err(FormatError::at(line, format!("unexpected line {s:?}"))),
            },
        }
    }
    close(&mut open, &mut cpts)?;
    Ok(CausalModel::new(dag, cpts)?.with_latent(latent)?)
}

pub fn write_model(model: &CausalModel) -> String {
    let dag = model.dag();
    let mut out = String::new();
    for (i, v) in dag.nodes().iter().enumerate() {
        let flag = if model.is_latent(i) { " latent" } else { "" };
        let _ = writeln!(out, "node {} {}{flag}", v.name, v.card);
    }
    for (f, t) in dag.edges() {
        let _ = writeln!(out, "edge {} -> {}", dag.name(f), dag.name(t));
    }
    for (i, cpt) in model.cpts().iter().enumerate() {
        if cpt.parents.is_empty() {
            let _ = writeln!(out, "cpt {}", cpt.node);
        } else {
            let _ = writeln!(out, "cpt {} | {}", cpt.node, cpt.parents.join(" "));
        }
        let cards: Vec<usize> = model.cpt_parent_indices(i).iter().map(|&p| dag.card(p)).collect();
        for (r, row) in cpt.rows.iter().enumerate() {
            let vals = row_values(r, &cards);
            let sep = if vals.is_empty() { "" } else { " " };
            let _ = writeln!(out, "{vals}{sep}: {}", join_probs(row));
        }
    }
    out
}

// ---- distribution ----

pub fn parse_distribution(text: &str) -> Result<JointDistribution, FormatError> {
    let mut vars: Option<Vec<Variable>> = None;
    let mut inputs: Vec<String> = Vec::new();
    let mut probs: Vec<Option<f64>> = Vec::new();
    for (line, s) in lines(text) {
        if let Some(rest) = s.strip_prefix("vars") {
            if vars.is_some() {
                return Err(FormatError::at(line, "`vars` given twice"));
            }
            let v = rest
                .split_whitespace()
                .map(|t| {
                    let (name, card) = t
                        .split_once(':')
                        .ok_or_else(|| FormatError::at(line, format!("expected name:card, got {t:?}")))?;
                    Ok(Variable::new(name, parse_usize(line, card, "cardinality")?))
                })
                .collect::<Result<Vec<_>, FormatError>>()?;
            probs = vec![None; table_size(v.iter().map(|v| v.card))];
            vars = Some(v);
        } else if let Some(rest) = s.strip_prefix("inputs") {
            inputs.extend(rest.split_whitespace().map(String::from));
        } else {
            let v = vars
                .as_ref()
                .ok_or_else(|| FormatError::at(line, "rows must follow `vars`"))?;
            let cards: Vec<usize> = v.iter().map(|v| v.card).collect();
            let (values, p) = split_row(line, s)?;
            let idx = row_index(line, values, &cards)?;
            if probs[idx].is_some() {
                return Err(FormatError::at(line, format!("assignment {values:?} repeated")));
            }
            let p: Prob = p.parse().map_err(|e: String| FormatError::at(line, e))?;
            probs[idx] = Some(p.value());
        }
    }
    let vars = vars.ok_or_else(|| FormatError::Invalid("missing `vars` line".into()))?;
    let probs = probs.into_iter().map(|p| p.unwrap_or(0.0)).collect();
    Ok(JointDistribution::new(vars, probs)?.with_inputs(inputs)?)
}

/// Lists every assignment with nonzero probability; reals print round-trip exact.
pub fn write_distribution(dist: &JointDistribution) -> String {
    let mut out = String::from("vars");
    for v in dist.variables() {
        let _ = write!(out, " {}:{}", v.name, v.card);
    }
    out.push('\n');
    if !dist.inputs().is_empty() {
        out.push_str("inputs");
        for name in dist.inputs() {
            let _ = write!(out, " {name}");
        }
        out.push('\n');
    }
    for (assignment, p) in dist.iter() {
        if p != 0.0 {
            let vals: Vec<String> = assignment.iter().map(|v| v.to_string()).collect();
            let _ = writeln!(out, "{} : {p:?}", vals.join(" "));
        }
    }
    out
}

// ---- circuit ----

pub fn parse_circuit(text: &str) -> Result<ClassicalCircuit, FormatError> {
    let mut it = lines(text).peekable();
    match it.next() {
        Some((_, "circuit")) => {}
        Some((line, _)) => return Err(FormatError::at(line, "expected `circuit`")),
        None => return Err(FormatError::Invalid("empty circuit file".into())),
    }
    let mut elements: Vec<Element> = Vec::new();
    let mut open: Option<(usize, TableBuilder)> = None;

    let wire = |elements: &[Element], line: usize, name: &str| -> Result<usize, FormatError> {
        elements
            .iter()
            .position(|e| e.name == name && !matches!(e.kind, ElementKind::Measurement { .. }))
            .ok_or_else(|| FormatError::at(line, format!("no wire named {name:?}")))
    };
    let close = |open: &mut Option<(usize, TableBuilder)>,
                 elements: &mut Vec<Element>|
     -> Result<(), FormatError> {
        if let Some((at, table)) = open.take() {
            let rows = table.finish()?;
            if let ElementKind::Gate { table, .. } = &mut elements[at].kind {
                *table = rows;
            }
        }
        Ok(())
    };

    for (line, s) in it {
        let mut words = s.split_whitespace();
        match words.next() {
            Some("source") => {
                close(&mut open, &mut elements)?;
                let (head, probs) = split_row(line, &s["source".len()..])?;
                let (name, card) = match head.split_whitespace().collect::<Vec<_>>().as_slice() {
                    [name, card] => (name.to_string(), parse_usize(line, card, "cardinality")?),
                    _ => return Err(FormatError::at(line, "expected `source <name> <card> : probs`")),
                };
                elements.push(Element {
                    name,
                    card,
                    kind: ElementKind::Source {
                        prior: parse_probs(line, probs)?,
                    },
                });
            }
            Some("gate") => {
                close(&mut open, &mut elements)?;
                let (head, ins) = s["gate".len()..]
                    .split_once("<-")
                    .ok_or_else(|| FormatError::at(line, "expected `gate <name> <card> <- inputs`"))?;
                let (name, card) = match head.split_whitespace().collect::<Vec<_>>().as_slice() {
                    [name, card] => (name.to_string(), parse_usize(line, card, "cardinality")?),
                    _ => return Err(FormatError::at(line, "expected `gate <name> <card> <- inputs`")),
                };
                let inputs = ins
                    .split_whitespace()
                    .map(|w| wire(&elements, line, w))
                    .collect::<Result<Vec<_>, _>>()?;
                let cards = inputs.iter().map(|&i| elements[i].card).collect();
                open = Some((elements.len(), TableBuilder::new(&name, line, cards)));
                elements.push(Element {
                    name,
                    card,
                    kind: ElementKind::Gate {
                        inputs,
                        table: Vec::new(),
                    },
                });
            }
            Some("measure") => {
                close(&mut open, &mut elements)?;
                let w: Vec<&str> = words.collect();
                let (name, input) = match w.as_slice() {
                    [name, "<-", input] => (name.to_string(), wire(&elements, line, input)?),
                    _ => return Err(FormatError::at(line, "expected `measure <name> <- <wire>`")),
                };
                let card = elements[input].card;
                elements.push(Element {
                    name,
                    card,
                    kind: ElementKind::Measurement { input },
                });
            }
            _ => match open.as_mut() {
                Some((_, table)) => table.push(line, s)?,
                None => return Err(FormatError::at(line, format!("unexpected line {s:?}"))),
            },
        }
    }
    close(&mut open, &mut elements)?;
    Ok(ClassicalCircuit::new(elements)?)
}

pub fn write_circuit(circuit: &ClassicalCircuit) -> String {
    let elements = circuit.elements();
    let mut out = String::from("circuit\n");
    for e in elements {
        match &e.kind {
            ElementKind::Source { prior } => {
                let _ = writeln!(out, "source {} {} : {}", e.name, e.card, join_probs(prior));
            }
            ElementKind::Gate { inputs, table } => {
                let names: Vec<&str> = inputs.iter().map(|&i| elements[i].name.as_str()).collect();
                let _ = writeln!(out, "gate {} {} <- {}", e.name, e.card, names.join(" "));
                let cards: Vec<usize> = inputs.iter().map(|&i| elements[i].card).collect();
                for (r, row) in table.iter().enumerate() {
                    let _ = writeln!(out, "{} : {}", row_values(r, &cards), join_probs(row));
                }
            }
            ElementKind::Measurement { input } => {
                let _ = writeln!(out, "measure {} <- {}", e.name, elements[*input].name);
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::causal::bell::classical_bell_model;
    use crate::circuit::compile_dag_to_circuit;
    use proptest::prelude::*;

    const SPRINKLER: &str = "\
# rain and sprinkler
node R 2
node S 2
node W 2
edge R -> W
edge S -> W
cpt R
: 1/5 4/5
cpt S
: 0.5 0.5
cpt W | S R
0 0 : 1 0
0 1 : 1/10 9/10
1 0 : 1/10 9/10
1 1 : 1/100 99/100
";

    #[test]
    fn oracle_round_trip() {
        let o = parse_oracle("n=3\n101 # the solution\n\n").unwrap();
        assert_eq!(o.solutions().collect::<Vec<_>>(), vec![0b101]);
        assert_eq!(write_oracle(&o), "n=3\n101\n");
        assert_eq!(parse_oracle(&write_oracle(&o)).unwrap(), o);
    }

    #[test]
    fn oracle_bit_zero_is_leftmost() {
        let o = parse_oracle("n=4\n1000\n").unwrap();
        assert!(o.eval(8));
    }

    #[test]
    fn oracle_errors() {
        assert!(matches!(parse_oracle(""), Err(FormatError::Invalid(_))));
        assert_eq!(
            parse_oracle("m=3"),
            Err(FormatError::at(1, "expected `n=<int>`"))
        );
        assert!(matches!(parse_oracle("n=3\n10\n"), Err(FormatError::Parse { line: 2, .. })));
        assert!(matches!(parse_oracle("n=2\n10\n10"), Err(FormatError::Parse { line: 3, .. })));
        assert!(parse_oracle("n=0").is_err());
    }

    #[test]
    fn model_parses_with_reordered_parents() {
        let m = parse_model(SPRINKLER).unwrap();
        assert_eq!(m.cpt(2).parents, vec!["S", "R"]);
        let d = m.joint_distribution();
        // P(R=1, S=0, W=1) = 4/5 · 1/2 · 9/10
        assert!((d.prob(&[1, 0, 1]) - 0.36).abs() < 1e-15);
    }

    #[test]
    fn model_round_trip_is_exact() {
        let m = parse_model(SPRINKLER).unwrap();
        let text = write_model(&m);
        assert_eq!(parse_model(&text).unwrap(), m);
        assert_eq!(write_model(&parse_model(&text).unwrap()), text);
    }

    #[test]
    fn latent_nodes_round_trip() {
        let m = classical_bell_model().unwrap();
        let back = parse_model(&write_model(&m)).unwrap();
        assert_eq!(back, m);
        assert!(back.is_latent(0));
    }

    #[test]
    fn model_errors_carry_lines() {
        let missing_row = "node A 2\nnode B 2\nedge A -> B\ncpt A\n: 1/2 1/2\ncpt B | A\n0 : 1 0\n";
        assert!(matches!(parse_model(missing_row), Err(FormatError::Parse { line: 6, .. })));
        let cycle = "node A 2\nnode B 2\nedge A -> B\nedge B -> A\n";
        assert!(matches!(parse_model(cycle), Err(FormatError::Parse { line: 4, .. })));
        let bad_sum = "node A 2\ncpt A\n: 1/2 1/3\n";
        assert!(matches!(parse_model(bad_sum), Err(FormatError::Causal(_))));
        assert!(matches!(parse_model("bogus"), Err(FormatError::Parse { line: 1, .. })));
    }

    #[test]
    fn distribution_round_trip() {
        let d = parse_distribution("vars X:2 A:2\ninputs X\n0 0 : 0.5\n1 1 : 1/2\n").unwrap();
        assert_eq!(d.prob(&[1, 1]), 0.5);
        assert_eq!(d.prob(&[0, 1]), 0.0);
        assert!(d.inputs().contains("X"));
        let text = write_distribution(&d);
        assert_eq!(text, "vars X:2 A:2\ninputs X\n0 0 : 0.5\n1 1 : 0.5\n");
        assert_eq!(parse_distribution(&text).unwrap(), d);
    }

    #[test]
    fn distribution_errors() {
        assert!(parse_distribution("0 : 1").is_err());
        assert!(parse_distribution("vars A:2\n0 : 0.5\n").is_err());
        assert!(parse_distribution("vars A:2\n2 : 1\n").is_err());
        assert!(parse_distribution("vars A:2\n0 : 1\n0 : 0\n").is_err());
    }

    #[test]
    fn circuit_round_trip() {
        let c = compile_dag_to_circuit(&classical_bell_model().unwrap());
        let text = write_circuit(&c);
        let back = parse_circuit(&text).unwrap();
        assert_eq!(back, c);
        assert_eq!(write_circuit(&back), text);
    }

    #[test]
    fn circuit_errors() {
        assert!(parse_circuit("").is_err());
        assert!(parse_circuit("source A 2 : 1 0").is_err());
        assert!(matches!(
            parse_circuit("circuit\nmeasure M <- A\n"),
            Err(FormatError::Parse { line: 2, .. })
        ));
        assert!(parse_circuit("circuit\nsource A 2 : 1 0\ngate B 2 <- A\n0 : 1 0\n").is_err());
    }

    fn rational_row(card: usize) -> impl Strategy<Value = Vec<Prob>> {
        prop::collection::vec(0i64..50, card).prop_map(|weights| {
            let mut w = weights;
            w[0] += 1;
            let total: i64 = w.iter().sum();
            w.into_iter().map(|x| Prob::ratio(x, total)).collect()
        })
    }

    proptest! {
        #[test]
        fn rational_cpts_round_trip_bit_exact(
            ca in 2usize..4,
            cb in 2usize..4,
            seed_rows in prop::collection::vec(rational_row(3), 4),
            prior in rational_row(3),
        ) {
            let dag = Dag::build(&[("A", ca), ("B", cb), ("C", 3)], &[("A", "C"), ("B", "C")]).unwrap();
            let trim = |row: &Vec<Prob>, card: usize| -> Vec<Prob> {
                let w: Vec<i64> = row.iter().take(card).map(|p| match p {
                    Prob::Rational(r) => *r.numer() + 1,
                    Prob::Real(_) => 1,
                }).collect();
                let total: i64 = w.iter().sum();
                w.into_iter().map(|x| Prob::ratio(x, total)).collect()
            };
            let rows: Vec<Vec<Prob>> = (0..ca * cb).map(|i| seed_rows[i % 4].clone()).collect();
            let m = CausalModel::new(dag, vec![
                Cpt::new("A", &[], vec![trim(&prior, ca)]),
                Cpt::new("B", &[], vec![trim(&prior, cb)]),
                Cpt::new("C", &["A", "B"], rows),
            ]).unwrap();
            let text = write_model(&m);
            let back = parse_model(&text).unwrap();
            prop_assert_eq!(&back, &m);
            prop_assert_eq!(write_model(&back), text);
        }

        #[test]
        fn real_distributions_round_trip_bit_exact(raw in prop::collection::vec(0.0f64..1.0, 8)) {
            let total: f64 = raw.iter().sum::<f64>() + 1.0;
            let mut probs: Vec<f64> = raw.iter().map(|x| x / total).collect();
            probs[7] = 1.0 - probs[..7].iter().sum::<f64>();
            let d = JointDistribution::new(
                ["X", "Y", "Z"].iter().map(|n| Variable::new(*n, 2)).collect(),
                probs,
            );
            if let Ok(d) = d {
                let back = parse_distribution(&write_distribution(&d)).unwrap();
                prop_assert_eq!(back.probabilities(), d.probabilities());
            }
        }
    }
}
