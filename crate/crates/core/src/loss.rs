//! Precision and recall losses of set-valued predictions.
//!
//! For an output set `g(x)` and target set `t(x)`:
//!
//! - precision loss = |g(x) \ t(x)| / |g(x)|  (share of the output that is wrong)
//! - recall loss    = |t(x) \ g(x)| / |t(x)|  (share of the target that is missed)
//! - scalar loss    = their average; payoff = 1 − scalar loss.
//!
//! An empty output asserts nothing, so its precision loss is 0 (and its
//! recall loss is 1 whenever the target is non-empty). Empty *targets* are
//! a model violation and are rejected.

use serde::{Deserialize, Serialize};

use crate::error::{CoreError, Result};
use crate::hypothesis::{Hypothesis, HypothesisClass, HypothesisId};
use crate::label_set::LabelSet;
use crate::stream;
use crate::world::{InputModel, World};

/// A (precision, recall, scalar) loss triple with `scalar = (p + r) / 2`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct LossReport {
    pub precision_loss: f64,
    pub recall_loss: f64,
    pub scalar_loss: f64,
}

impl LossReport {
    pub fn new(precision_loss: f64, recall_loss: f64) -> Self {
        Self {
            precision_loss,
            recall_loss,
            scalar_loss: 0.5 * (precision_loss + recall_loss),
        }
    }

    /// 1 − scalar loss.
    pub fn payoff(&self) -> f64 {
        1.0 - self.scalar_loss
    }
}

/// Precision loss of `g` at a single input, against a materialized target.
pub fn precision_loss_at(g: &Hypothesis, target: &LabelSet, x: u64) -> Result<f64> {
    if target.is_empty() {
        return Err(CoreError::EmptyTarget { input: x });
    }
    let out = g.eval(x);
    if out.is_empty() {
        return Ok(0.0);
    }
    Ok(out.difference_len(target) as f64 / out.len() as f64)
}

/// Recall loss of `g` at a single input, against a materialized target.
pub fn recall_loss_at(g: &Hypothesis, target: &LabelSet, x: u64) -> Result<f64> {
    if target.is_empty() {
        return Err(CoreError::EmptyTarget { input: x });
    }
    let out = g.eval(x);
    Ok(target.difference_len(&out) as f64 / target.len() as f64)
}

/// Mean losses of `g` over the inputs `xs`, with targets materialized by
/// `world`. Sums run in ascending index order so results are bit-stable.
pub fn empirical_losses(g: &Hypothesis, world: &World, xs: &[u64]) -> Result<LossReport> {
    if xs.is_empty() {
        return Err(CoreError::InvalidParameter("empirical_losses needs at least one input".into()));
    }
    let mut p = 0.0;
    let mut r = 0.0;
    for &x in xs {
        let t = world.target(x);
        p += precision_loss_at(g, &t, x)?;
        r += recall_loss_at(g, &t, x)?;
    }
    let m = xs.len() as f64;
    Ok(LossReport::new(p / m, r / m))
}

/// How an expectation should be computed.
#[derive(Clone, Copy, Debug)]
pub enum EvalMode {
    /// Closed form if the world ships one, otherwise exact enumeration of a
    /// finite input distribution. Errors on fresh-stream worlds without a
    /// closed form.
    Exact,
    /// Sample mean over `inputs` fresh draws from the input model, with
    /// targets materialized per input. Deterministic given `seed`.
    MonteCarlo { inputs: u64, seed: u64 },
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub enum EvalMethod {
    ClosedForm,
    Enumeration,
    MonteCarlo { inputs: u64 },
}

#[derive(Clone, Copy, Debug, Serialize, Deserialize)]
pub struct LossEstimate {
    pub report: LossReport,
    pub method: EvalMethod,
}

/// Expected losses of `g` under the world's input and target distribution.
pub fn expected_losses(g: &Hypothesis, world: &World, mode: EvalMode) -> Result<LossEstimate> {
    match mode {
        EvalMode::Exact => {
            if let Some(report) = world.closed_form(g.id()) {
                return Ok(LossEstimate { report, method: EvalMethod::ClosedForm });
            }
            match world.input_model() {
                InputModel::Categorical { inputs, weights, .. } => {
                    let mut p = 0.0;
                    let mut r = 0.0;
                    for (&x, &w) in inputs.iter().zip(weights) {
                        let t = world.target(x);
                        p += w * precision_loss_at(g, &t, x)?;
                        r += w * recall_loss_at(g, &t, x)?;
                    }
                    Ok(LossEstimate {
                        report: LossReport::new(p, r),
                        method: EvalMethod::Enumeration,
                    })
                }
                InputModel::FreshStream { .. } => Err(CoreError::NoExactExpectation {
                    world: world.name().to_owned(),
                    hypothesis: g.id().0.clone(),
                }),
            }
        }
        EvalMode::MonteCarlo { inputs, seed } => {
            if inputs == 0 {
                return Err(CoreError::InvalidParameter("Monte Carlo needs inputs >= 1".into()));
            }
            let mut rng = stream::rng(seed, &[stream::tag::EVAL]);
            let mut p = 0.0;
            let mut r = 0.0;
            for _ in 0..inputs {
                let x = world.sample_input(&mut rng);
                let t = world.target(x);
                p += precision_loss_at(g, &t, x)?;
                r += recall_loss_at(g, &t, x)?;
            }
            let n = inputs as f64;
            Ok(LossEstimate {
                report: LossReport::new(p / n, r / n),
                method: EvalMethod::MonteCarlo { inputs },
            })
        }
    }
}

/// A class member together with its exact expected losses.
#[derive(Clone, Debug, Serialize)]
pub struct FrontierPoint {
    pub id: HypothesisId,
    pub index: usize,
    pub losses: LossReport,
}

/// The members of `class` not dominated in (precision loss, recall loss).
///
/// `h` dominates `g` when it is no worse in both coordinates and strictly
/// better in at least one; members with identical loss pairs are all kept.
/// Requires exact expectations for every member. Returned in class order.
pub fn pareto_frontier(class: &HypothesisClass, world: &World) -> Result<Vec<FrontierPoint>> {
    let losses: Vec<LossReport> = class
        .iter()
        .map(|g| expected_losses(g, world, EvalMode::Exact).map(|e| e.report))
        .collect::<Result<_>>()?;
    let dominated = |i: usize| {
        losses.iter().enumerate().any(|(j, b)| {
            let a = &losses[i];
            j != i
                && b.precision_loss <= a.precision_loss
                && b.recall_loss <= a.recall_loss
                && (b.precision_loss < a.precision_loss || b.recall_loss < a.recall_loss)
        })
    };
    Ok((0..class.len())
        .filter(|&i| !dominated(i))
        .map(|i| FrontierPoint {
            id: class.get(i).id().clone(),
            index: i,
            losses: losses[i],
        })
        .collect())
}
