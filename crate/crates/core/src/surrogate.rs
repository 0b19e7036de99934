//! Pair vectors and the distances built from them, plus the two selection
//! rules that operate purely through those statistics.
//!
//! A pair vector profiles one reference distribution against every ordered
//! pair of class members: entry (a, b) is the average mass the reference
//! puts on `a(x) \ b(x)`. The reference is either a hypothesis (uniform
//! mass over its output) or the training set itself (point mass on each
//! observed label). Distances between pair vectors are a cheap stand-in
//! for loss comparisons that only need positive observations.

use crate::error::{CoreError, Result};
use crate::hypothesis::{Hypothesis, HypothesisClass, HypothesisId};
use crate::label_set::LabelSet;
use crate::learners::{LearnerOutput, MemberDiagnostics, Prepared};
use crate::world::TrainingSet;

#[derive(Clone, Debug, PartialEq)]
pub struct PairVector {
    ids: Vec<HypothesisId>,
    /// Row-major k×k; entry (a, b) at index a·k + b.
    entries: Vec<f64>,
    m: usize,
}

impl PairVector {
    pub fn ids(&self) -> &[HypothesisId] {
        &self.ids
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn get(&self, a: usize, b: usize) -> f64 {
        self.entries[a * self.ids.len() + b]
    }

    pub fn entries(&self) -> &[f64] {
        &self.entries
    }
}

/// Mass a hypothesis's uniform output distribution at `x` places on `a`:
/// |g(x) ∩ a| / n_g(x), and 0 when the output is empty.
pub fn uniform_mass(g: &Hypothesis, x: u64, a: &LabelSet) -> f64 {
    let out = g.eval(x);
    let n = out.len();
    if n == 0 {
        return 0.0;
    }
    out.intersection_len(a) as f64 / n as f64
}

/// Distinct inputs of `xs` in first-occurrence order with multiplicities.
fn group_inputs(xs: &[u64]) -> (Vec<u64>, Vec<usize>) {
    let mut distinct = Vec::new();
    let mut counts = Vec::new();
    let mut index = std::collections::HashMap::new();
    for &x in xs {
        let d = *index.entry(x).or_insert_with(|| {
            distinct.push(x);
            counts.push(0);
            distinct.len() - 1
        });
        counts[d] += 1;
    }
    (distinct, counts)
}

/// Reference mass on `a(x) \ b(x)` via inclusion–exclusion on interval
/// sets: |ref ∩ a| − |ref ∩ a ∩ b|, normalized by the reference size.
fn mass_on_difference(reference: &LabelSet, a: &LabelSet, b: &LabelSet) -> f64 {
    let n = reference.len();
    if n == 0 {
        return 0.0;
    }
    let ra = reference.intersection(a);
    let hit = ra.len() - ra.intersection_len(b);
    hit as f64 / n as f64
}

/// Pair vector of a hypothesis (which need not belong to the class):
/// entry (a, b) = mean over xs of the uniform mass `reference` puts on
/// a(x)\b(x). Inputs repeated in `xs` count once per occurrence; the mean
/// is accumulated per distinct input with multiplicities, which matches
/// index-by-index summation to within float reassociation (≤ 1e-12).
pub fn pair_vector(
    reference: &Hypothesis,
    class: &HypothesisClass,
    xs: &[u64],
) -> Result<PairVector> {
    if xs.is_empty() {
        return Err(CoreError::InvalidParameter("pair_vector needs at least one input".into()));
    }
    let (distinct, counts) = group_inputs(xs);
    let ref_sets: Vec<LabelSet> = distinct.iter().map(|&x| reference.eval(x)).collect();
    let member_sets: Vec<Vec<LabelSet>> = class
        .iter()
        .map(|h| distinct.iter().map(|&x| h.eval(x)).collect())
        .collect();
    let k = class.len();
    let m_f = xs.len() as f64;
    let mut entries = vec![0.0; k * k];
    for a in 0..k {
        for b in 0..k {
            if a == b {
                continue;
            }
            let mut sum = 0.0;
            for d in 0..distinct.len() {
                let v = mass_on_difference(&ref_sets[d], &member_sets[a][d], &member_sets[b][d]);
                sum += counts[d] as f64 * v;
            }
            entries[a * k + b] = sum / m_f;
        }
    }
    Ok(PairVector { ids: class.ids(), entries, m: xs.len() })
}

/// Integer counts #{i : v_i ∈ a(x_i) \ b(x_i)} for every ordered pair.
fn pair_counts(prep: &Prepared<'_>) -> Vec<u64> {
    let k = prep.class.len();
    let mut counts = vec![0u64; k * k];
    for a in 0..k {
        for b in 0..k {
            if a == b {
                continue;
            }
            let mut c = 0u64;
            for i in 0..prep.m {
                if prep.has[a][i] && !prep.has[b][i] {
                    c += 1;
                }
            }
            counts[a * k + b] = c;
        }
    }
    counts
}

/// Pair vector of the training set itself: entry (a, b) is the fraction of
/// indices whose observed label lies in a(x_i)\b(x_i). Repeated inputs are
/// kept as distinct indices.
pub fn pair_vector_empirical(data: &TrainingSet, class: &HypothesisClass) -> Result<PairVector> {
    let prep = Prepared::new(class, data)?;
    let counts = pair_counts(&prep);
    let m_f = prep.m as f64;
    Ok(PairVector {
        ids: class.ids(),
        entries: counts.iter().map(|&c| c as f64 / m_f).collect(),
        m: prep.m,
    })
}

/// ℓ∞ distance between pair vectors over the same class and sample count.
pub fn d_h(u: &PairVector, v: &PairVector) -> Result<f64> {
    if u.ids != v.ids || u.m != v.m {
        return Err(CoreError::IncomparablePairVectors(format!(
            "classes {:?} (m={}) vs {:?} (m={})",
            u.ids, u.m, v.ids, v.m
        )));
    }
    Ok(u.entries
        .iter()
        .zip(&v.entries)
        .map(|(x, y)| (x - y).abs())
        .fold(0.0, f64::max))
}

/// Symmetrized cross-loss distance: mean over xs of the mass g1 puts
/// outside g2 plus the mass g2 puts outside g1. When g2 plays the target,
/// this is exactly empirical precision loss + recall loss of g1.
pub fn d_pr(g1: &Hypothesis, g2: &Hypothesis, xs: &[u64]) -> f64 {
    if xs.is_empty() {
        return 0.0;
    }
    let (distinct, counts) = group_inputs(xs);
    let mut sum = 0.0;
    for (d, &x) in distinct.iter().enumerate() {
        let s1 = g1.eval(x);
        let s2 = g2.eval(x);
        let inter = s1.intersection_len(&s2);
        let t1 = if s1.is_empty() { 0.0 } else { (s1.len() - inter) as f64 / s1.len() as f64 };
        let t2 = if s2.is_empty() { 0.0 } else { (s2.len() - inter) as f64 / s2.len() as f64 };
        sum += counts[d] as f64 * (t1 + t2);
    }
    sum / xs.len() as f64
}

/// Model-side pair-vector entry (ref_j's output vs member b) accumulated
/// over the prepared sample.
fn model_entry(prep: &Prepared<'_>, ref_j: usize, b: usize) -> f64 {
    let mut sum = 0.0;
    for d in 0..prep.xs.len() {
        let v = mass_on_difference(&prep.sets[ref_j][d], &prep.sets[ref_j][d], &prep.sets[b][d]);
        sum += prep.counts[d] as f64 * v;
    }
    sum / prep.m as f64
}

/// Positive-only consistency filter: returns the first member g_out whose
/// outputs cover every observation that any member explains —
/// (1) no observed label ever falls in g(x_i) \ g_out(x_i) for any g —
/// and whose own excess mass is corroborated —
/// (2) whenever g_out's mean mass outside g reaches `epsilon`, some
/// observed label actually landed in g_out(x_i) \ g(x_i).
/// Condition (1) uses exact integer counts; condition (2) reads "observed
/// at least once". Failing both for every member is a retryable sampling
/// anomaly, reported as an error.
pub fn surrogate_realizable(
    class: &HypothesisClass,
    data: &TrainingSet,
    epsilon: f64,
) -> Result<LearnerOutput> {
    if !(epsilon > 0.0) {
        return Err(CoreError::InvalidParameter("surrogate_realizable needs epsilon > 0".into()));
    }
    let prep = Prepared::new(class, data)?;
    let k = class.len();
    let counts = pair_counts(&prep);
    let covers: Vec<bool> = (0..k)
        .map(|j| (0..k).all(|g| counts[g * k + j] == 0))
        .collect();
    let mut chosen = None;
    for j in 0..k {
        if !covers[j] {
            continue;
        }
        let corroborated =
            (0..k).all(|g| g == j || model_entry(&prep, j, g) < epsilon || counts[j * k + g] > 0);
        if corroborated {
            chosen = Some(j);
            break;
        }
    }
    let diagnostics: Vec<MemberDiagnostics> = (0..k)
        .map(|j| MemberDiagnostics {
            id: class.get(j).id().clone(),
            mistakes: prep.mistakes[j],
            objective: None,
            plausible: covers[j],
        })
        .collect();
    match chosen {
        Some(j) => Ok(prep.output(j, diagnostics)),
        None => Err(CoreError::SurrogateConditionsUnsatisfied),
    }
}

/// Picks the member whose pair vector is closest (in ℓ∞) to the training
/// set's pair vector; first member wins ties. Diagnostics record every
/// distance.
pub fn surrogate_agnostic(class: &HypothesisClass, data: &TrainingSet) -> Result<LearnerOutput> {
    let prep = Prepared::new(class, data)?;
    let k = class.len();
    let counts = pair_counts(&prep);
    let m_f = prep.m as f64;
    let empirical: Vec<f64> = counts.iter().map(|&c| c as f64 / m_f).collect();
    let mut best: Option<(usize, f64)> = None;
    let mut distances = Vec::with_capacity(k);
    for j in 0..k {
        let mut dist = 0.0f64;
        for a in 0..k {
            for b in 0..k {
                if a == b {
                    continue;
                }
                let mut sum = 0.0;
                for d in 0..prep.xs.len() {
                    let v = mass_on_difference(&prep.sets[j][d], &prep.sets[a][d], &prep.sets[b][d]);
                    sum += prep.counts[d] as f64 * v;
                }
                dist = dist.max((sum / m_f - empirical[a * k + b]).abs());
            }
        }
        distances.push(dist);
        if best.map_or(true, |(_, bd)| dist < bd) {
            best = Some((j, dist));
        }
    }
    let (j, _) = best.unwrap();
    let diagnostics: Vec<MemberDiagnostics> = (0..k)
        .map(|i| MemberDiagnostics {
            id: class.get(i).id().clone(),
            mistakes: prep.mistakes[i],
            objective: Some(distances[i]),
            plausible: i == j,
        })
        .collect();
    Ok(prep.output(j, diagnostics))
}
