//! Causal structures: graphs, conditional independence, Markov and
//! faithfulness audits, and the Bell scenario.

pub mod audit;
pub mod bell;
pub mod ci;
pub mod dag;
pub mod model;

pub use audit::{
    faithfulness_audit, markov_audit, markov_audit_joint, FaithfulnessReport, MarkovReport,
    MarkovViolation,
};
pub use bell::{
    bell_dag, chsh_value, chsh_value_of_joint, classical_bell_model, classical_chsh_max,
    finetuned_signaling_model, pr_box_distribution, quantum_bell_distribution, signaling_dag,
    BellBehavior, BellScenario, MeasurementAngles, Resource,
};
pub use ci::{ci_deviation, ci_holds, CiKind, CiRelation};
pub use dag::{Dag, Genealogy};
pub use model::{joint_distribution, CausalModel, Cpt, Prob};
