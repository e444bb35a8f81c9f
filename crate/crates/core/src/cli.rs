//! Command-line front end. Each subcommand parses its inputs, calls the
//! library and assembles a [`RunReport`].

use std::fs;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};

use crate::algorithms::{
    np_search, search_via_counting_traced, sharp_p_count_traced, solved_state, Limits,
};
use crate::causal::bell::{
    classical_chsh_max, finetuned_signaling_model, pr_box_distribution, quantum_bell_distribution,
    reproduction_error, BellBehavior, BellScenario, MeasurementAngles, Resource,
};
use crate::causal::{chsh_value, faithfulness_audit, markov_audit, CausalModel};
use crate::circuit::{compile_dag_to_circuit, sample_with_stats};
use crate::error::{AlgorithmError, Error, GateError};
use crate::format;
use crate::nonlinear::{no_signaling_check, signaling_advantage, LocalAction, XiMode};
use crate::report::RunReport;
use crate::statevector::{gates, RegisterLayout, SparseState};

#[derive(Debug, Parser)]
#[command(name = "xisim", version, about = "Nonlinear quantum search and causal-model toolkit")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ResourceArg {
    Classical,
    Quantum,
    Pr,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum GateArg {
    Weinberg,
    X,
    H,
    Xi,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Marker-mode search for the satisfying input of an oracle.
    Search {
        #[arg(long)]
        oracle: PathBuf,
        #[arg(long, default_value_t = 1e-12)]
        tol: f64,
    },
    /// Counter-mode count of satisfying inputs.
    Count {
        #[arg(long)]
        oracle: PathBuf,
    },
    /// Solution search by prefix descent on counts.
    SearchCount {
        #[arg(long)]
        oracle: PathBuf,
    },
    /// Bob's marginal change when Alice applies the Weinberg map to a Bell pair.
    SignalDemo {
        #[arg(long, default_value_t = 1e-12)]
        tol: f64,
    },
    /// Probes a gate on qubit 0 for signaling to the remaining qubits.
    NosignalCheck {
        #[arg(long, value_enum)]
        gate: GateArg,
        #[arg(long, default_value_t = 1e-12)]
        tol: f64,
    },
    /// d-separation of node sets in a model's graph.
    Dsep {
        #[arg(long)]
        model: PathBuf,
        #[arg(long)]
        j: String,
        #[arg(long)]
        k: String,
        #[arg(long, default_value = "")]
        l: String,
    },
    MarkovAudit {
        #[arg(long)]
        model: PathBuf,
        #[arg(long, default_value_t = 1e-9)]
        tol: f64,
    },
    /// Statistical independences the model's graph does not encode.
    Faithfulness {
        #[arg(long)]
        model: PathBuf,
        /// Audits this distribution instead of the model's own joint.
        #[arg(long)]
        dist: Option<PathBuf>,
        #[arg(long, default_value_t = 1e-9)]
        tol: f64,
    },
    Chsh {
        #[arg(long, value_enum)]
        resource: ResourceArg,
        /// Alice's two angles, then Bob's.
        #[arg(long, num_args = 4, allow_negative_numbers = true)]
        angles: Option<Vec<f64>>,
        #[arg(long, default_value_t = 1e-9)]
        tol: f64,
    },
    /// Signaling-graph model reproducing a PR-box or quantum behavior.
    BuildFinetuned {
        #[arg(long, value_enum)]
        resource: ResourceArg,
        #[arg(long, num_args = 4, allow_negative_numbers = true)]
        angles: Option<Vec<f64>>,
        #[arg(long, default_value_t = 1e-12)]
        tol: f64,
    },
    Compile {
        #[arg(long)]
        model: PathBuf,
        #[arg(long, default_value_t = 1e-12)]
        tol: f64,
    },
    Sample {
        #[arg(long)]
        model: PathBuf,
        #[arg(long, default_value_t = 1_000_000)]
        shots: u64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Total-variation bound against the exact distribution.
        #[arg(long, default_value_t = 0.01)]
        tol: f64,
    },
}

fn read(path: &Path) -> Result<String, Error> {
    fs::read_to_string(path).map_err(|source| Error::Io {
        path: path.display().to_string(),
        source,
    })
}

fn load_model(path: &Path) -> Result<CausalModel, Error> {
    Ok(format::parse_model(&read(path)?)?)
}

fn load_oracle(path: &Path) -> Result<crate::algorithms::OracleFunction, Error> {
    Ok(format::parse_oracle(&read(path)?)?)
}

fn names(list: &str) -> Vec<String> {
    list.split([',', ' '])
        .filter(|s| !s.is_empty())
        .map(String::from)
        .collect()
}

fn angles(given: Option<Vec<f64>>) -> MeasurementAngles {
    match given {
        Some(a) => MeasurementAngles {
            alice: [a[0], a[1]],
            bob: [a[2], a[3]],
        },
        None => MeasurementAngles::tsirelson(),
    }
}

fn behavior_for(resource: ResourceArg, given: Option<Vec<f64>>) -> Result<BellBehavior, Error> {
    match resource {
        ResourceArg::Pr => Ok(pr_box_distribution()),
        ResourceArg::Quantum => Ok(quantum_bell_distribution(&BellScenario::quantum(angles(given)))?),
        ResourceArg::Classical => Err(Error::Format(crate::error::FormatError::Invalid(
            "a fine-tuned model needs a quantum or pr target".into(),
        ))),
    }
}

/// Runs one parsed command.
pub fn execute(command: Command) -> Result<RunReport, Error> {
    match command {
        Command::Search { oracle, tol } => {
            let o = load_oracle(&oracle)?;
            let mut r = RunReport::new("search");
            r.input("oracle", oracle.display()).input("n", o.n());
            match np_search(&o) {
                Ok(res) => {
                    let solution = res.solution.map_or("none".to_string(), |s| o.format_input(s));
                    r.output("solution", solution)
                        .output("gate_applications", res.gate_applications)
                        .output("marked_terms", format!("{:?}", res.marked_terms));
                    r.check(
                        "gate_applications",
                        res.gate_applications == o.n(),
                        res.gate_applications as f64,
                        0.0,
                    );
                    if let Some(s) = res.solution {
                        let expected = solved_state(o.n(), s)?;
                        let err = res
                            .final_state
                            .max_amplitude_diff(&expected)
                            .max(expected.max_amplitude_diff(&res.final_state));
                        r.check_at_most("final_state", err, tol);
                    }
                }
                Err(AlgorithmError::MultipleSolutionOutcome {
                    payloads,
                    final_state,
                }) => {
                    r.output("solution", "ambiguous")
                        .output("surviving_payloads", payloads)
                        .output("final_terms", final_state.len());
                    r.check("unique_solution", false, payloads as f64, 1.0);
                }
                Err(e) => return Err(e.into()),
            }
            Ok(r)
        }
        Command::Count { oracle } => {
            let o = load_oracle(&oracle)?;
            let res = sharp_p_count_traced(&o, Limits::default())?;
            let mut r = RunReport::new("count");
            r.input("oracle", oracle.display())
                .input("n", o.n())
                .output("count", res.count)
                .output("gate_applications", res.gate_applications);
            Ok(r)
        }
        Command::SearchCount { oracle } => {
            let o = load_oracle(&oracle)?;
            let res = search_via_counting_traced(&o, Limits::default())?;
            let mut r = RunReport::new("search-count");
            r.input("oracle", oracle.display())
                .input("n", o.n())
                .output(
                    "solution",
                    res.solution.map_or("none".to_string(), |s| o.format_input(s)),
                )
                .output("counting_calls", res.counting_calls);
            if let Some(s) = res.solution {
                r.check("solution_satisfies", o.eval(s), 1.0, 0.0);
                r.check(
                    "counting_calls",
                    res.counting_calls == o.n(),
                    res.counting_calls as f64,
                    0.0,
                );
            }
            Ok(r)
        }
        Command::SignalDemo { tol } => {
            let bell = SparseState::bell_pair(2, 0, 1)?;
            let weinberg = signaling_advantage(&bell, &[0], &[1], &LocalAction::Weinberg { qubit: 0 })?;
            let unitary = signaling_advantage(
                &bell,
                &[0],
                &[1],
                &LocalAction::unitary(gates::hadamard(), &[0]),
            )?;
            let mut r = RunReport::new("signal-demo");
            r.input("state", "(|00⟩+|11⟩)/√2")
                .input("alice", "qubit 0")
                .input("bob", "qubit 1")
                .output("weinberg_advantage", weinberg)
                .output("hadamard_advantage", unitary);
            r.check_at_most("weinberg_advantage", (weinberg - 0.5).abs(), tol);
            r.check_at_most("hadamard_advantage", unitary, tol);
            Ok(r)
        }
        Command::NosignalCheck { gate, tol } => {
            let (action, receiver): (LocalAction, Vec<usize>) = match gate {
                GateArg::Weinberg => (LocalAction::Weinberg { qubit: 0 }, vec![1]),
                GateArg::X => (LocalAction::unitary(gates::pauli_x(), &[0]), vec![1]),
                GateArg::H => (LocalAction::unitary(gates::hadamard(), &[0]), vec![1]),
                GateArg::Xi => (
                    LocalAction::Xi {
                        layout: RegisterLayout::new(1, 1, 1)?,
                        active_qubit: 0,
                        mode: XiMode::Marker,
                    },
                    vec![1, 2],
                ),
            };
            let mut r = RunReport::new("nosignal-check");
            r.input("gate", format!("{gate:?}").to_lowercase())
                .input("sender", "0")
                .input(
                    "receiver",
                    receiver.iter().map(|q| q.to_string()).collect::<Vec<_>>().join(","),
                );
            match no_signaling_check(&action, &[0], &receiver) {
                Ok(rep) => {
                    r.output("applicable", true)
                        .output("signals", rep.signals)
                        .output("max_distance", rep.max_distance)
                        .output(
                            "witness",
                            rep.witness.map_or("none".to_string(), |w| w.to_string()),
                        )
                        .output("probes_checked", rep.probes_checked)
                        .output("probes_skipped", rep.probes_skipped);
                    if matches!(action, LocalAction::Unitary { .. }) {
                        r.check_at_most("unitary_no_signal", rep.max_distance, tol);
                    }
                }
                Err(GateError::NotLocallyApplicable(why)) => {
                    r.output("applicable", false).output("reason", why);
                }
                Err(e) => return Err(e.into()),
            }
            Ok(r)
        }
        Command::Dsep { model, j, k, l } => {
            let m = load_model(&model)?;
            let (js, ks, ls) = (names(&j), names(&k), names(&l));
            let sep = m.dag().d_separated(&js, &ks, &ls)?;
            let mut r = RunReport::new("dsep");
            r.input("model", model.display())
                .input("j", js.join(","))
                .input("k", ks.join(","))
                .input("l", ls.join(","))
                .output("d_separated", sep);
            Ok(r)
        }
        Command::MarkovAudit { model, tol } => {
            let m = load_model(&model)?;
            let rep = markov_audit(&m, tol)?;
            let worst = rep.violations.iter().map(|v| v.deviation).fold(0.0, f64::max);
            let mut r = RunReport::new("markov-audit");
            r.input("model", model.display())
                .input("tol", tol)
                .output("nodes_checked", rep.nodes_checked)
                .output("violations", rep.violations.len());
            for v in &rep.violations {
                r.output(format!("violation {}", v.node), format!("{} deviation={:e}", v.relation, v.deviation));
            }
            r.check("markov", rep.is_clean(), worst, tol);
            Ok(r)
        }
        Command::Faithfulness { model, dist, tol } => {
            let m = load_model(&model)?;
            let joint = match &dist {
                Some(p) => format::parse_distribution(&read(p)?)?,
                None => m.joint_distribution(),
            };
            let rep = faithfulness_audit(m.dag(), &joint, tol)?;
            let mut r = RunReport::new("faithfulness");
            r.input("model", model.display())
                .input("dist", dist.as_ref().map_or("model joint".to_string(), |p| p.display().to_string()))
                .input("tol", tol)
                .output("relations_checked", rep.relations_checked)
                .output("finetuned", rep.finetuned)
                .output("mismatches", rep.mismatches.len());
            for rel in &rep.mismatches {
                r.output("mismatch", rel);
            }
            for rel in &rep.markov_violations {
                r.output("markov_violation", rel);
            }
            r.check(
                "graph_is_markov",
                rep.markov_violations.is_empty(),
                rep.markov_violations.len() as f64,
                0.0,
            );
            Ok(r)
        }
        Command::Chsh {
            resource,
            angles: given,
            tol,
        } => {
            let mut r = RunReport::new("chsh");
            r.input("resource", format!("{resource:?}").to_lowercase());
            match resource {
                ResourceArg::Classical => {
                    let v = classical_chsh_max(&BellScenario::new(Resource::SharedRandomness))?;
                    r.output("value", v);
                    r.check_at_most("classical_bound", v - 2.0, 0.0);
                }
                ResourceArg::Quantum | ResourceArg::Pr => {
                    let a = angles(given);
                    if resource == ResourceArg::Quantum {
                        r.input("angles", format!("{:?} {:?}", a.alice, a.bob));
                    }
                    let b = behavior_for(resource, Some(vec![a.alice[0], a.alice[1], a.bob[0], a.bob[1]]))?;
                    let v = chsh_value(&b);
                    let (to_alice, to_bob) = b.signaling_deviation();
                    r.output("value", v);
                    let bound = if resource == ResourceArg::Pr { 4.0 } else { 8f64.sqrt() };
                    r.check_at_most("bound", v - bound, tol);
                    r.check_at_most("no_signaling", to_alice.max(to_bob), tol);
                }
            }
            Ok(r)
        }
        Command::BuildFinetuned {
            resource,
            angles: given,
            tol,
        } => {
            let target = behavior_for(resource, given)?;
            let m = finetuned_signaling_model(&target)?;
            let err = reproduction_error(&m, &target)?;
            let rep = faithfulness_audit(m.dag(), &m.joint_distribution(), 1e-9)?;
            let mut r = RunReport::new("build-finetuned");
            r.input("resource", format!("{resource:?}").to_lowercase())
                .output("model", format::write_model(&m).trim_end())
                .output("target_chsh", chsh_value(&target))
                .output("finetuned", rep.finetuned);
            for rel in &rep.mismatches {
                r.output("mismatch", rel);
            }
            r.check_at_most("reproduction", err, tol);
            Ok(r)
        }
        Command::Compile { model, tol } => {
            let m = load_model(&model)?;
            let c = compile_dag_to_circuit(&m);
            let exact = c.exact_distribution()?;
            let reference = m.joint_distribution();
            let observed: Vec<&str> = exact.variables().iter().map(|v| v.name.as_str()).collect();
            let err = exact.max_abs_diff(&reference.marginal(&observed)?)?;
            let mut r = RunReport::new("compile");
            r.input("model", model.display())
                .output("elements", c.elements().len())
                .output("circuit", format::write_circuit(&c).trim_end());
            r.check_at_most("exact_matches_joint", err, tol);
            Ok(r)
        }
        Command::Sample {
            model,
            shots,
            seed,
            tol,
        } => {
            let m = load_model(&model)?;
            let c = compile_dag_to_circuit(&m);
            let run = sample_with_stats(&c, shots, seed)?;
            let exact = c.exact_distribution()?;
            let tv = run.distribution.total_variation(&exact)?;
            let mut r = RunReport::new("sample");
            r.input("model", model.display())
                .input("shots", shots)
                .input("seed", seed)
                .output("element_evaluations", run.element_evaluations)
                .output("total_variation", tv)
                .output("distribution", format::write_distribution(&run.distribution).trim_end());
            r.check_at_most("total_variation", tv, tol);
            Ok(r)
        }
    }
}

/// Parses `args` (program name first) and runs; returns the exit code and
/// the text for standard output and standard error.
pub fn run<I, T>(args: I) -> (i32, String, String)
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let text = e.render().to_string();
            return if code == 0 {
                (0, text, String::new())
            } else {
                (2, String::new(), text)
            };
        }
    };
    match execute(cli.command) {
        Ok(report) => {
            let code = if report.all_passed() { 0 } else { 1 };
            (code, report.to_string(), String::new())
        }
        Err(e) => (2, String::new(), format!("error: {e}\n")),
    }
}
