//! Simulation laboratory for learning set-valued predictors from
//! positive-only feedback.
//!
//! A *world* couples a finite hypothesis class (functions from input ids to
//! label sets) with a target rule and an input distribution. Training data
//! consists of inputs paired with a single label drawn uniformly from the
//! target set — the learner never sees the full target, and never sees
//! negatives. The crate provides:
//!
//! - exact interval-backed label sets ([`LabelSet`]) that stay cheap even
//!   when a single output spans millions of ids,
//! - precision/recall/scalar losses and Pareto frontiers over a class,
//! - world constructors used throughout the experiments, including the
//!   hard instances behind the lower-bound demonstrations,
//! - four selection rules ([`learners`]) and the pair-mass surrogate
//!   machinery ([`surrogate`]) they are compared against,
//! - randomized verifiers ([`oracle`]) that check the inequalities the
//!   whole construction rests on, instance by instance.
//!
//! Everything is deterministic given a seed: randomized targets are pure
//! functions of (world seed, input id), and stream splitting is
//! counter-based, so results never depend on scheduling.

pub mod error;
pub mod hypothesis;
pub mod label_set;
pub mod learners;
pub mod loss;
pub mod oracle;
pub mod stream;
pub mod surrogate;
pub mod world;

pub use error::{CoreError, Result};
pub use hypothesis::{Hypothesis, HypothesisClass, HypothesisId, HypothesisKind};
pub use label_set::{Interval, LabelSet};
pub use learners::{LearnerOutput, LearnerSpec};
pub use loss::{EvalMethod, EvalMode, LossEstimate, LossReport};
pub use world::{TrainingSet, World, WorldSide, WorldSpec};
