//! Executes a config: one job per (experiment, m, trial), run in
//! parallel. Every random draw in a trial descends from a seed derived
//! from (root seed, experiment index, m, trial), so results do not depend
//! on thread scheduling, job order, or which other experiments run.

use anyhow::Context;
use rayon::prelude::*;

use prlab_core::loss::{expected_losses, EvalMode};
use prlab_core::stream::{self, tag};
use prlab_core::world::{build_world, sample_training_set, World};
use prlab_core::{CoreError, Hypothesis, LossReport};

use crate::config::Config;

#[derive(Clone, Debug)]
pub struct TrialRecord {
    pub experiment: String,
    pub learner: &'static str,
    pub m: usize,
    pub trial: usize,
    /// Expected losses of the chosen member, absent when the trial failed.
    pub losses: Option<LossReport>,
    pub chosen: Option<String>,
    /// Per-trial root; the world, data, and evaluation streams are derived
    /// from it, so a single trial can be replayed in isolation.
    pub seed: u64,
    pub status: &'static str,
}

impl TrialRecord {
    pub fn is_ok(&self) -> bool {
        self.status == "ok"
    }
}

/// Stable one-token labels for per-trial failures. Learner failures are
/// ordinary data outcomes and become rows, not batch errors.
fn status_code(e: &CoreError) -> &'static str {
    match e {
        CoreError::NoConsistentHypothesis { .. } => "no_consistent_hypothesis",
        CoreError::EmptyPlausibleSet { .. } => "empty_plausible_set",
        CoreError::SurrogateConditionsUnsatisfied => "surrogate_unsatisfied",
        CoreError::NoExactExpectation { .. } => "no_exact_expectation",
        CoreError::InvalidParameter(_) => "invalid_parameter",
        CoreError::EmptyTarget { .. } => "empty_target",
        CoreError::IncomparablePairVectors(_) => "incomparable_pair_vectors",
        CoreError::EmptyClass | CoreError::DuplicateId(_) => "invalid_class",
    }
}

/// Exact expectation when the world supports it, Monte Carlo otherwise.
fn eval_expected(
    g: &Hypothesis,
    world: &World,
    mc_inputs: usize,
    seed: u64,
) -> prlab_core::Result<LossReport> {
    match expected_losses(g, world, EvalMode::Exact) {
        Ok(est) => Ok(est.report),
        Err(CoreError::NoExactExpectation { .. }) => {
            let mode = EvalMode::MonteCarlo { inputs: mc_inputs as u64, seed };
            let est = expected_losses(g, world, mode)?;
            Ok(est.report)
        }
        Err(e) => Err(e),
    }
}

fn run_trial(cfg: &Config, ei: usize, m: usize, trial: usize) -> anyhow::Result<Vec<TrialRecord>> {
    let exp = &cfg.experiments[ei];
    let trial_seed = stream::derive_seed(cfg.seed, &[ei as u64, m as u64, trial as u64]);
    // A fresh world per trial: seeded targets and fresh-input counters must
    // not leak across trials.
    let world = build_world(&exp.world, stream::derive_seed(trial_seed, &[tag::WORLD]))
        .with_context(|| format!("building world for experiment `{}`", exp.id))?;
    let mut data_rng = stream::rng(trial_seed, &[tag::DATA]);
    let data = sample_training_set(&world, m, &mut data_rng)
        .with_context(|| format!("sampling m = {m} for experiment `{}`", exp.id))?;

    let mut out = Vec::with_capacity(exp.learners.len());
    for (li, spec) in exp.learners.iter().enumerate() {
        let mut rec = TrialRecord {
            experiment: exp.id.clone(),
            learner: spec.name(),
            m,
            trial,
            losses: None,
            chosen: None,
            seed: trial_seed,
            status: "ok",
        };
        match spec.run(world.class(), &data) {
            Ok(res) => {
                rec.chosen = Some(res.chosen.0.clone());
                let eval_seed = stream::derive_seed(trial_seed, &[tag::EVAL, li as u64]);
                let g = world.class().get(res.chosen_index);
                match eval_expected(g, &world, exp.eval.mc_inputs, eval_seed) {
                    Ok(report) => rec.losses = Some(report),
                    Err(e) => rec.status = status_code(&e),
                }
            }
            Err(e) => rec.status = status_code(&e),
        }
        out.push(rec);
    }
    Ok(out)
}

/// Runs all trials of all experiments. Rows come back in config order
/// (experiment, then m, then trial, then learner); parallel scheduling
/// cannot reorder them because collection preserves job indices.
pub fn run_config(cfg: &Config) -> anyhow::Result<Vec<TrialRecord>> {
    cfg.validate()?;
    let mut jobs = Vec::new();
    for (ei, exp) in cfg.experiments.iter().enumerate() {
        for &m in &exp.m_schedule {
            for trial in 0..exp.trials {
                jobs.push((ei, m, trial));
            }
        }
    }
    let nested: Vec<anyhow::Result<Vec<TrialRecord>>> = jobs
        .par_iter()
        .map(|&(ei, m, trial)| run_trial(cfg, ei, m, trial))
        .collect();
    let mut records = Vec::with_capacity(jobs.len());
    for batch in nested {
        records.extend(batch?);
    }
    Ok(records)
}
