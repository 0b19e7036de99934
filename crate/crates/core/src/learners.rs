//! Hypothesis-selection algorithms. All of them see only the hypothesis
//! class and the training set — never the target — and break ties by
//! first-in-class order so runs are reproducible.

use serde::{Deserialize, Serialize};

use crate::error::{CoreError, Result};
use crate::hypothesis::{HypothesisClass, HypothesisId};
use crate::label_set::LabelSet;
use crate::world::TrainingSet;

/// Shared per-(class, training set) working state: member outputs cached
/// per distinct input, membership of each observed label, and mistake
/// counts. Built once and reused by every selection rule.
pub(crate) struct Prepared<'a> {
    pub(crate) class: &'a HypothesisClass,
    pub(crate) m: usize,
    /// Distinct inputs in first-occurrence order.
    pub(crate) xs: Vec<u64>,
    /// Multiplicity of each distinct input in the sample.
    pub(crate) counts: Vec<usize>,
    /// Sample index -> index into `xs`.
    pub(crate) sample_x: Vec<usize>,
    /// `sets[j][d]` = member j's output at distinct input d.
    pub(crate) sets: Vec<Vec<LabelSet>>,
    /// Output sizes as f64, same indexing as `sets`.
    pub(crate) sizes: Vec<Vec<f64>>,
    /// `has[j][i]` = observed label v_i lies in member j's output at x_i.
    pub(crate) has: Vec<Vec<bool>>,
    /// Per-member count of samples with v_i outside the output.
    pub(crate) mistakes: Vec<usize>,
}

impl<'a> Prepared<'a> {
    pub(crate) fn new(class: &'a HypothesisClass, data: &TrainingSet) -> Result<Self> {
        let m = data.m();
        if m == 0 {
            return Err(CoreError::InvalidParameter("training set is empty".into()));
        }
        let mut xs = Vec::new();
        let mut counts = Vec::new();
        let mut sample_x = Vec::with_capacity(m);
        let mut labels = Vec::with_capacity(m);
        let mut index = std::collections::HashMap::new();
        for &(x, v) in &data.samples {
            let d = *index.entry(x).or_insert_with(|| {
                xs.push(x);
                counts.push(0);
                xs.len() - 1
            });
            counts[d] += 1;
            sample_x.push(d);
            labels.push(v);
        }
        let k = class.len();
        let mut sets = Vec::with_capacity(k);
        let mut sizes = Vec::with_capacity(k);
        let mut has = Vec::with_capacity(k);
        let mut mistakes = Vec::with_capacity(k);
        for h in class.iter() {
            let member_sets: Vec<LabelSet> = xs.iter().map(|&x| h.eval(x)).collect();
            sizes.push(member_sets.iter().map(|s| s.len() as f64).collect());
            let member_has: Vec<bool> = (0..m)
                .map(|i| member_sets[sample_x[i]].contains(labels[i]))
                .collect();
            mistakes.push(member_has.iter().filter(|&&b| !b).count());
            sets.push(member_sets);
            has.push(member_has);
        }
        Ok(Prepared { class, m, xs, counts, sample_x, sets, sizes, has, mistakes })
    }

    pub(crate) fn output(&self, j: usize, diagnostics: Vec<MemberDiagnostics>) -> LearnerOutput {
        LearnerOutput {
            chosen: self.class.get(j).id().clone(),
            chosen_index: j,
            diagnostics,
        }
    }

    fn diagnostics(
        &self,
        objective: impl Fn(usize) -> Option<f64>,
        plausible: impl Fn(usize) -> bool,
    ) -> Vec<MemberDiagnostics> {
        (0..self.class.len())
            .map(|j| MemberDiagnostics {
                id: self.class.get(j).id().clone(),
                mistakes: self.mistakes[j],
                objective: objective(j),
                plausible: plausible(j),
            })
            .collect()
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct MemberDiagnostics {
    pub id: HypothesisId,
    /// Number of training samples whose label the member fails to output.
    pub mistakes: usize,
    /// Selection-rule objective, where the rule defines one for this member.
    pub objective: Option<f64>,
    /// Member survived the rule's pre-filter (consistency, plausibility,
    /// or near-maximal statistic, depending on the rule).
    pub plausible: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct LearnerOutput {
    pub chosen: HypothesisId,
    pub chosen_index: usize,
    pub diagnostics: Vec<MemberDiagnostics>,
}

/// Deliberately naive baseline: the first member consistent with every
/// observed label, regardless of how much else it outputs.
pub fn erm_consistent(class: &HypothesisClass, data: &TrainingSet) -> Result<LearnerOutput> {
    let prep = Prepared::new(class, data)?;
    let diagnostics = prep.diagnostics(|_| None, |j| prep.mistakes[j] == 0);
    match prep.mistakes.iter().position(|&mk| mk == 0) {
        Some(j) => Ok(prep.output(j, diagnostics)),
        None => Err(CoreError::NoConsistentHypothesis { m: prep.m }),
    }
}

/// Among consistent members, minimizes the summed log2 output size —
/// equivalently, maximizes the likelihood of the observed labels under
/// uniform label draws.
pub fn ml_realizable(class: &HypothesisClass, data: &TrainingSet) -> Result<LearnerOutput> {
    let prep = Prepared::new(class, data)?;
    let log_sizes: Vec<Vec<f64>> = prep
        .sizes
        .iter()
        .map(|row| row.iter().map(|&s| if s > 0.0 { s.log2() } else { 0.0 }).collect())
        .collect();
    let mut best: Option<(usize, f64)> = None;
    let mut objectives: Vec<Option<f64>> = vec![None; class.len()];
    for j in 0..class.len() {
        if prep.mistakes[j] != 0 {
            continue;
        }
        // Consistency forces non-empty outputs at every sampled input.
        let mut sum = 0.0;
        for i in 0..prep.m {
            sum += log_sizes[j][prep.sample_x[i]];
        }
        objectives[j] = Some(sum);
        if best.map_or(true, |(_, b)| sum < b) {
            best = Some((j, sum));
        }
    }
    let diagnostics = prep.diagnostics(|j| objectives[j], |j| prep.mistakes[j] == 0);
    match best {
        Some((j, _)) => Ok(prep.output(j, diagnostics)),
        None => Err(CoreError::NoConsistentHypothesis { m: prep.m }),
    }
}

/// Per-sample truncated log size ratio between two output sizes, with the
/// truncation factor fixed at 4. Empty outputs are handled as limits of
/// vanishing size: both empty gives ratio 1, one empty clamps the ratio at
/// its truncation extreme (1/4 or 4).
fn truncated_log_ratio(na: f64, nb: f64) -> f64 {
    if na == 0.0 && nb == 0.0 {
        0.0
    } else if na == 0.0 {
        -2.0
    } else if nb == 0.0 {
        2.0
    } else {
        (na.min(4.0 * nb) / (nb.min(4.0 * na))).log2()
    }
}

/// Targets a recall budget `r`: restricts to the plausible set of members
/// whose mistake count is at most m·(r + slack), then minimizes the worst
/// pairwise mean truncated log-size ratio against other plausible members.
pub fn modified_ml(
    class: &HypothesisClass,
    data: &TrainingSet,
    r: f64,
    slack: f64,
) -> Result<LearnerOutput> {
    if !(r >= 0.0) || !(slack >= 0.0) {
        return Err(CoreError::InvalidParameter(
            "modified_ml needs r >= 0 and slack >= 0".into(),
        ));
    }
    let prep = Prepared::new(class, data)?;
    let threshold = prep.m as f64 * (r + slack);
    let plausible: Vec<usize> = (0..class.len())
        .filter(|&j| prep.mistakes[j] as f64 <= threshold)
        .collect();
    if plausible.is_empty() {
        return Err(CoreError::EmptyPlausibleSet { threshold });
    }
    let m_f = prep.m as f64;
    let mut objectives: Vec<Option<f64>> = vec![None; class.len()];
    let mut best: Option<(usize, f64)> = None;
    for &a in &plausible {
        let mut worst = f64::NEG_INFINITY;
        for &b in &plausible {
            // Fixed i-ascending summation keeps the comparison exact and
            // reproducible across runs.
            let mut sum = 0.0;
            for i in 0..prep.m {
                let d = prep.sample_x[i];
                sum += truncated_log_ratio(prep.sizes[a][d], prep.sizes[b][d]);
            }
            worst = worst.max(sum / m_f);
        }
        objectives[a] = Some(worst);
        if best.map_or(true, |(_, bv)| worst < bv) {
            best = Some((a, worst));
        }
    }
    let (j, _) = best.unwrap();
    let plausible_flags: Vec<bool> = {
        let mut f = vec![false; class.len()];
        for &a in &plausible {
            f[a] = true;
        }
        f
    };
    let diagnostics = prep.diagnostics(|j| objectives[j], |j| plausible_flags[j]);
    Ok(prep.output(j, diagnostics))
}

/// Scores each member by the mean of 1{v_i ∈ g(x_i)}/n_g(x_i) — the
/// per-sample likelihood of the observed label — and keeps members within
/// `tol` of the maximum score. Among those, picks the one with the fewest
/// mistakes. Maximizing this statistic favors members contained in the
/// target: any label they output is observed proportionally often, and a
/// small output concentrates that credit.
pub fn semi_realizable_learner(
    class: &HypothesisClass,
    data: &TrainingSet,
    tol: f64,
) -> Result<LearnerOutput> {
    if !(tol >= 0.0) {
        return Err(CoreError::InvalidParameter("semi_realizable needs tol >= 0".into()));
    }
    let prep = Prepared::new(class, data)?;
    let m_f = prep.m as f64;
    let scores: Vec<f64> = (0..class.len())
        .map(|j| {
            let mut sum = 0.0;
            for i in 0..prep.m {
                if prep.has[j][i] {
                    sum += 1.0 / prep.sizes[j][prep.sample_x[i]];
                }
            }
            sum / m_f
        })
        .collect();
    let smax = scores.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    let mut best: Option<(usize, usize)> = None; // (index, mistakes)
    for j in 0..class.len() {
        if scores[j] >= smax - tol {
            if best.map_or(true, |(_, bm)| prep.mistakes[j] < bm) {
                best = Some((j, prep.mistakes[j]));
            }
        }
    }
    let (j, _) = best.unwrap();
    let diagnostics = prep.diagnostics(|j| Some(scores[j]), |j| scores[j] >= smax - tol);
    Ok(prep.output(j, diagnostics))
}

/// Default plausibility slack for [`modified_ml`]: 2·sqrt(log2(|H|/δ)/m),
/// twice the concentration width of the empirical mistake rate.
pub fn default_slack(class_size: usize, delta: f64, m: usize) -> f64 {
    2.0 * ((class_size as f64 / delta).log2() / m as f64).sqrt()
}

fn default_delta() -> f64 {
    0.1
}

/// Serializable learner selection: algorithm plus parameters.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "algorithm", rename_all = "snake_case")]
pub enum LearnerSpec {
    ErmConsistent,
    MlRealizable,
    ModifiedMl {
        r: f64,
        /// Explicit plausibility slack; computed from `delta` when absent.
        #[serde(default, skip_serializing_if = "Option::is_none")]
        slack: Option<f64>,
        #[serde(default = "default_delta")]
        delta: f64,
    },
    SemiRealizable { tol: f64 },
    SurrogateRealizable { epsilon: f64 },
    SurrogateAgnostic,
}

impl LearnerSpec {
    pub fn name(&self) -> &'static str {
        match self {
            LearnerSpec::ErmConsistent => "erm_consistent",
            LearnerSpec::MlRealizable => "ml_realizable",
            LearnerSpec::ModifiedMl { .. } => "modified_ml",
            LearnerSpec::SemiRealizable { .. } => "semi_realizable",
            LearnerSpec::SurrogateRealizable { .. } => "surrogate_realizable",
            LearnerSpec::SurrogateAgnostic => "surrogate_agnostic",
        }
    }

    pub fn run(&self, class: &HypothesisClass, data: &TrainingSet) -> Result<LearnerOutput> {
        match self {
            LearnerSpec::ErmConsistent => erm_consistent(class, data),
            LearnerSpec::MlRealizable => ml_realizable(class, data),
            LearnerSpec::ModifiedMl { r, slack, delta } => {
                let s = slack.unwrap_or_else(|| default_slack(class.len(), *delta, data.m()));
                modified_ml(class, data, *r, s)
            }
            LearnerSpec::SemiRealizable { tol } => semi_realizable_learner(class, data, *tol),
            LearnerSpec::SurrogateRealizable { epsilon } => {
                crate::surrogate::surrogate_realizable(class, data, *epsilon)
            }
            LearnerSpec::SurrogateAgnostic => crate::surrogate::surrogate_agnostic(class, data),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hypothesis::Hypothesis;
    use crate::stream;
    use crate::world::{example1_world, sample_training_set};
    use std::collections::BTreeMap;

    fn table(entries: &[(u64, LabelSet)]) -> BTreeMap<u64, LabelSet> {
        entries.iter().cloned().collect()
    }

    #[test]
    fn erm_returns_first_consistent_member() {
        let w = example1_world(10).unwrap();
        let mut rng = stream::rng(1, &[]);
        let data = sample_training_set(&w, 50, &mut rng).unwrap();
        let out = erm_consistent(w.class(), &data).unwrap();
        // The complete function is listed first and never makes a mistake.
        assert_eq!(out.chosen.0, "complete");
        assert!(out.diagnostics[0].plausible);
    }

    #[test]
    fn ml_prefers_small_consistent_outputs() {
        let w = example1_world(10).unwrap();
        let mut rng = stream::rng(2, &[]);
        let data = sample_training_set(&w, 50, &mut rng).unwrap();
        let out = ml_realizable(w.class(), &data).unwrap();
        assert_eq!(out.chosen.0, "target");
        // 50·log2(10) beats 50·log2(200).
        let obj = |id: &str| {
            out.diagnostics
                .iter()
                .find(|d| d.id.0 == id)
                .unwrap()
                .objective
                .unwrap()
        };
        assert!(obj("target") < obj("complete"));
    }

    #[test]
    fn ml_two_member_class_with_smaller_sizes() {
        let complete = Hypothesis::table(
            "complete",
            table(&[(0, LabelSet::range(0, 5)), (1, LabelSet::range(0, 5))]),
        );
        let small = Hypothesis::table(
            "small",
            table(&[(0, LabelSet::range(0, 1)), (1, LabelSet::singleton(3))]),
        );
        let class = HypothesisClass::new(vec![complete, small]).unwrap();
        let data = TrainingSet { samples: vec![(0, 0), (0, 1), (1, 3), (0, 0)] };
        let out = ml_realizable(&class, &data).unwrap();
        assert_eq!(out.chosen.0, "small");
    }

    #[test]
    fn ml_errors_without_consistent_member() {
        let g = Hypothesis::table("g", table(&[(0, LabelSet::singleton(0))]));
        let class = HypothesisClass::new(vec![g]).unwrap();
        let data = TrainingSet { samples: vec![(0, 5)] };
        assert!(matches!(
            ml_realizable(&class, &data),
            Err(CoreError::NoConsistentHypothesis { m: 1 })
        ));
        assert!(erm_consistent(&class, &data).is_err());
    }

    #[test]
    fn modified_ml_singleton_plausible_set() {
        let a = Hypothesis::table("a", table(&[(0, LabelSet::singleton(0))]));
        let b = Hypothesis::table("b", table(&[(0, LabelSet::singleton(9))]));
        let class = HypothesisClass::new(vec![b, a]).unwrap();
        let data = TrainingSet { samples: vec![(0, 0), (0, 0)] };
        let out = modified_ml(&class, &data, 0.0, 0.0).unwrap();
        assert_eq!(out.chosen.0, "a");
        assert!(!out.diagnostics[0].plausible);
        assert!(out.diagnostics[1].plausible);
    }

    #[test]
    fn modified_ml_identical_sizes_fall_back_to_first() {
        // Same output size everywhere => every pairwise ratio is 1 and all
        // objectives are exactly 0, so the first plausible member wins.
        let a = Hypothesis::table("a", table(&[(0, LabelSet::range(0, 1))]));
        let b = Hypothesis::table("b", table(&[(0, LabelSet::range(1, 2))]));
        let class = HypothesisClass::new(vec![a, b]).unwrap();
        let data = TrainingSet { samples: vec![(0, 1), (0, 1)] };
        let out = modified_ml(&class, &data, 1.0, 0.0).unwrap();
        assert_eq!(out.chosen.0, "a");
        assert_eq!(out.diagnostics[0].objective, Some(0.0));
        assert_eq!(out.diagnostics[1].objective, Some(0.0));
    }

    #[test]
    fn modified_ml_empty_plausible_set_errors() {
        let a = Hypothesis::table("a", table(&[(0, LabelSet::singleton(0))]));
        let class = HypothesisClass::new(vec![a]).unwrap();
        let data = TrainingSet { samples: vec![(0, 7)] };
        assert!(matches!(
            modified_ml(&class, &data, 0.0, 0.0),
            Err(CoreError::EmptyPlausibleSet { .. })
        ));
    }

    #[test]
    fn modified_ml_prefers_tighter_outputs_under_truncation() {
        // Both consistent; "wide" outputs 16 labels against "tight"'s 4.
        // The ratio objective penalizes the wide member by log2(16/4) = 2.
        let tight = Hypothesis::table("tight", table(&[(0, LabelSet::range(0, 3))]));
        let wide = Hypothesis::table("wide", table(&[(0, LabelSet::range(0, 15))]));
        let class = HypothesisClass::new(vec![wide, tight]).unwrap();
        let data = TrainingSet { samples: vec![(0, 0), (0, 2)] };
        let out = modified_ml(&class, &data, 0.0, 0.5).unwrap();
        assert_eq!(out.chosen.0, "tight");
        let wide_obj = out.diagnostics[0].objective.unwrap();
        assert!((wide_obj - 2.0).abs() < 1e-12);
    }

    #[test]
    fn semi_prefers_subset_over_disjoint_member() {
        let sub = Hypothesis::intensional("sub", |_| LabelSet::range(0, 1));
        let dis = Hypothesis::intensional("dis", |_| LabelSet::range(10, 11));
        let class = HypothesisClass::new(vec![dis, sub]).unwrap();
        // Labels uniform over target {0..3}: sub scores ~ P(v<=1)/2 = 1/4,
        // the disjoint member scores exactly 0.
        let mut rng = stream::rng(7, &[]);
        let samples: Vec<(u64, u64)> = (0..400)
            .map(|i| {
                use rand::Rng;
                (i, rng.random_range(0..4u64))
            })
            .collect();
        let data = TrainingSet { samples };
        let out = semi_realizable_learner(&class, &data, 0.05).unwrap();
        assert_eq!(out.chosen.0, "sub");
        let d = &out.diagnostics;
        assert_eq!(d[0].objective, Some(0.0));
        assert!(d[1].objective.unwrap() > 0.15);
    }

    #[test]
    fn semi_ties_resolved_by_fewest_mistakes() {
        // sub = {0,1} and exact = {0,1,2,3} both score exactly 1/4 in
        // expectation under uniform labels from {0..3}; exact never makes
        // a mistake, sub misses half the labels.
        let sub = Hypothesis::intensional("sub", |_| LabelSet::range(0, 1));
        let exact = Hypothesis::intensional("exact", |_| LabelSet::range(0, 3));
        let class = HypothesisClass::new(vec![sub, exact]).unwrap();
        let mut rng = stream::rng(8, &[]);
        let samples: Vec<(u64, u64)> = (0..2000)
            .map(|i| {
                use rand::Rng;
                (i, rng.random_range(0..4u64))
            })
            .collect();
        let data = TrainingSet { samples };
        let out = semi_realizable_learner(&class, &data, 0.1).unwrap();
        assert_eq!(out.chosen.0, "exact");
    }

    #[test]
    fn default_slack_matches_formula() {
        let s = default_slack(32, 0.1, 1239);
        assert!((s - 2.0 * ((320.0f64).log2() / 1239.0).sqrt()).abs() < 1e-15);
        assert!((s - 0.16391).abs() < 1e-4);
    }

    #[test]
    fn learner_spec_round_trips_and_dispatches() {
        let spec = LearnerSpec::ModifiedMl { r: 0.25, slack: None, delta: 0.1 };
        let json = serde_json::to_string(&spec).unwrap();
        assert!(json.contains("modified_ml"));
        let back: LearnerSpec = serde_json::from_str(&json).unwrap();
        assert_eq!(back, spec);

        let w = example1_world(10).unwrap();
        let mut rng = stream::rng(3, &[]);
        let data = sample_training_set(&w, 100, &mut rng).unwrap();
        let out = LearnerSpec::MlRealizable.run(w.class(), &data).unwrap();
        assert_eq!(out.chosen.0, "target");
    }
}
