//! Decision procedures and the executable lemma suite.

pub mod lemmas;
pub mod predicates;
pub mod random;
pub mod scc;

pub use lemmas::{run_batch, run_trial, BatchSpec, LemmaId, LemmaSummary, Outcome, TrialRecord};
pub use predicates::*;
pub use random::{random_instance, trial_seed, Instance, MapFamily, RandomSpec};
pub use scc::{scc_decompose, SccDecomposition};
