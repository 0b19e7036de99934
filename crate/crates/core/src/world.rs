//! Worlds: hypothesis class + target rule + input distribution.
//!
//! A world is the complete environment of an experiment. Targets may be
//! randomized per input; they are materialized as a pure function of
//! (world seed, input id), so repeated queries of the same input always
//! return the identical set — train and eval see one consistent target
//! realization — without any shared mutable state.
//!
//! Input models come in two flavors:
//! - `Categorical`: a finite weighted support; expectations are exactly
//!   enumerable.
//! - `FreshStream`: counter-based ids 0,1,2,… that never repeat, modeling
//!   the regime where no input is ever seen twice. Expectations come from
//!   shipped closed forms or Monte Carlo.

use std::collections::BTreeMap;
use std::sync::atomic::{AtomicU64, Ordering};
use std::sync::Arc;

use rand::Rng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{CoreError, Result};
use crate::hypothesis::{Hypothesis, HypothesisClass, HypothesisId};
use crate::label_set::LabelSet;
use crate::loss::LossReport;
use crate::stream::{self, tag};

pub enum InputModel {
    /// Finite support with normalized weights; `cumulative` is the running
    /// sum used for sampling.
    Categorical {
        inputs: Vec<u64>,
        weights: Vec<f64>,
        cumulative: Vec<f64>,
    },
    /// Never-repeating counter-based ids.
    FreshStream { next: AtomicU64 },
}

impl InputModel {
    pub fn categorical(inputs: Vec<u64>, raw_weights: Vec<f64>) -> Result<Self> {
        if inputs.is_empty() || inputs.len() != raw_weights.len() {
            return Err(CoreError::InvalidParameter(
                "categorical input model needs matching non-empty inputs/weights".into(),
            ));
        }
        if raw_weights.iter().any(|&w| !(w > 0.0) || !w.is_finite()) {
            return Err(CoreError::InvalidParameter(
                "categorical weights must be positive and finite".into(),
            ));
        }
        let total: f64 = raw_weights.iter().sum();
        let weights: Vec<f64> = raw_weights.iter().map(|w| w / total).collect();
        let mut cumulative = Vec::with_capacity(weights.len());
        let mut acc = 0.0;
        for &w in &weights {
            acc += w;
            cumulative.push(acc);
        }
        Ok(InputModel::Categorical { inputs, weights, cumulative })
    }

    pub fn fresh_stream() -> Self {
        InputModel::FreshStream { next: AtomicU64::new(0) }
    }
}

pub enum TargetRule {
    /// Deterministic target.
    Fixed(Hypothesis),
    /// Randomized target, materialized per input from (seed, input id).
    Seeded {
        seed: u64,
        gen: Arc<dyn Fn(u64, &mut ChaCha8Rng) -> LabelSet + Send + Sync>,
    },
}

pub struct World {
    name: String,
    class: HypothesisClass,
    target: TargetRule,
    inputs: InputModel,
    closed_forms: BTreeMap<HypothesisId, LossReport>,
}

impl World {
    /// Assembles a world and validates that targets are non-empty on the
    /// support (all categorical inputs; the first few fresh ids otherwise).
    pub fn new(
        name: impl Into<String>,
        class: HypothesisClass,
        target: TargetRule,
        inputs: InputModel,
        closed_forms: BTreeMap<HypothesisId, LossReport>,
    ) -> Result<Self> {
        let world = World {
            name: name.into(),
            class,
            target,
            inputs,
            closed_forms,
        };
        let probe: Vec<u64> = match &world.inputs {
            InputModel::Categorical { inputs, .. } => inputs.clone(),
            InputModel::FreshStream { .. } => (0..4).collect(),
        };
        for x in probe {
            if world.target(x).is_empty() {
                return Err(CoreError::EmptyTarget { input: x });
            }
        }
        Ok(world)
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn class(&self) -> &HypothesisClass {
        &self.class
    }

    pub fn input_model(&self) -> &InputModel {
        &self.inputs
    }

    /// The (materialized) target set at `x`. Pure: repeated calls agree.
    pub fn target(&self, x: u64) -> LabelSet {
        match &self.target {
            TargetRule::Fixed(h) => h.eval(x),
            TargetRule::Seeded { seed, gen } => {
                let mut rng = stream::rng(*seed, &[tag::TARGET, x]);
                gen(x, &mut rng)
            }
        }
    }

    /// Shipped exact expected losses for a member, if any.
    pub fn closed_form(&self, id: &HypothesisId) -> Option<LossReport> {
        self.closed_forms.get(id).copied()
    }

    /// Draws one input id. Categorical models consume one uniform variate;
    /// fresh streams return the next counter value and ignore the rng.
    pub fn sample_input<R: Rng + ?Sized>(&self, rng: &mut R) -> u64 {
        match &self.inputs {
            InputModel::Categorical { inputs, cumulative, .. } => {
                let u: f64 = rng.random();
                let idx = cumulative.partition_point(|&c| c <= u).min(inputs.len() - 1);
                inputs[idx]
            }
            InputModel::FreshStream { next } => next.fetch_add(1, Ordering::Relaxed),
        }
    }

    /// A canonical JSON description of the world's observable behavior on
    /// its support (or the first `fresh_probes` fresh ids): class ids plus
    /// per-input member outputs and target sets. Two worlds built from the
    /// same spec and seed serialize identically.
    pub fn fingerprint(&self, fresh_probes: u64) -> serde_json::Value {
        let probe: Vec<u64> = match &self.inputs {
            InputModel::Categorical { inputs, .. } => inputs.clone(),
            InputModel::FreshStream { .. } => (0..fresh_probes).collect(),
        };
        let per_input: Vec<serde_json::Value> = probe
            .iter()
            .map(|&x| {
                serde_json::json!({
                    "input": x,
                    "target": self.target(x),
                    "outputs": self.class.iter().map(|h| h.eval(x)).collect::<Vec<_>>(),
                })
            })
            .collect();
        serde_json::json!({
            "name": self.name,
            "members": self.class.ids(),
            "inputs": per_input,
        })
    }
}

/// Positive-only training data: inputs paired with one label drawn
/// uniformly from the target set at that input.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TrainingSet {
    pub samples: Vec<(u64, u64)>,
}

impl TrainingSet {
    pub fn m(&self) -> usize {
        self.samples.len()
    }

    pub fn inputs(&self) -> Vec<u64> {
        self.samples.iter().map(|&(x, _)| x).collect()
    }
}

/// Draws `m` i.i.d. samples from the world.
pub fn sample_training_set<R: Rng + ?Sized>(
    world: &World,
    m: usize,
    rng: &mut R,
) -> Result<TrainingSet> {
    if m == 0 {
        return Err(CoreError::InvalidParameter("training set size must be >= 1".into()));
    }
    let mut samples = Vec::with_capacity(m);
    for _ in 0..m {
        let x = world.sample_input(rng);
        let t = world.target(x);
        let v = t
            .sample_uniform(rng)
            .ok_or(CoreError::EmptyTarget { input: x })?;
        samples.push((x, v));
    }
    Ok(TrainingSet { samples })
}

/// Uniform k-subset of `lo..=hi` (Floyd's algorithm).
pub(crate) fn sample_distinct<R: Rng + ?Sized>(lo: u64, hi: u64, k: u64, rng: &mut R) -> LabelSet {
    let n = hi - lo + 1;
    debug_assert!(k <= n, "cannot draw {k} distinct labels from {n}");
    let mut chosen = std::collections::BTreeSet::new();
    for j in (n - k)..n {
        let t = lo + rng.random_range(0..=j);
        if !chosen.insert(t) {
            chosen.insert(lo + j);
        }
    }
    LabelSet::from_labels(chosen)
}

fn block_base(x: u64, width: u64) -> u64 {
    x.checked_mul(width)
        .expect("input id too large for per-input label blocks")
}

/// Which of the two statistically-close sibling worlds to build.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum WorldSide {
    I,
    II,
}

impl std::fmt::Display for WorldSide {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            WorldSide::I => f.write_str("I"),
            WorldSide::II => f.write_str("II"),
        }
    }
}

/// Single-input world separating likelihood-style selection from bare
/// consistency. The target outputs labels `0..n`; the class is, in order:
/// the complete function over a universe of `20n` labels (always
/// consistent, terrible precision), the target itself, a one-true-label
/// member, a one-false-label member, and the empty function.
pub fn example1_world(n: u64) -> Result<World> {
    if n == 0 {
        return Err(CoreError::InvalidParameter("example1 world needs n >= 1".into()));
    }
    let universe_hi = 20 * n - 1;
    let table = |set: LabelSet| {
        let mut map = BTreeMap::new();
        map.insert(0u64, set);
        map
    };
    let target = Hypothesis::table("target", table(LabelSet::range(0, n - 1)));
    let class = HypothesisClass::new(vec![
        Hypothesis::table("complete", table(LabelSet::range(0, universe_hi))),
        target.clone(),
        Hypothesis::table("g1", table(LabelSet::singleton(n - 1))),
        Hypothesis::table("g2", table(LabelSet::singleton(n))),
        Hypothesis::table("empty", BTreeMap::new()),
    ])?;
    World::new(
        "example1",
        class,
        TargetRule::Fixed(target),
        InputModel::categorical(vec![0], vec![1.0])?,
        BTreeMap::new(),
    )
}

/// Fresh-stream world with per-input blocks of `n` labels split into halves
/// N1, N2. Member `g1` outputs N1, member `g2` the whole block. The target
/// draws `3βn/4` labels from N1 and `βn/4` from N2, so the observed-label
/// marginal does not depend on β, while the scalar-optimal member flips
/// between g2 (small β) and g1 (large β).
pub fn scalar_lb_world(beta: f64, n: u64, seed: u64) -> Result<World> {
    if n < 4 || n % 2 != 0 {
        return Err(CoreError::InvalidParameter("scalar_lb world needs even n >= 4".into()));
    }
    if !(0.125 - 1e-9..=2.0 / 3.0 + 1e-9).contains(&beta) {
        return Err(CoreError::InvalidParameter(format!(
            "beta = {beta} outside [1/8, 2/3]"
        )));
    }
    let nf = n as f64;
    let k1f = 3.0 * beta * nf / 4.0;
    let k2f = beta * nf / 4.0;
    let (k1, k2) = (k1f.round() as u64, k2f.round() as u64);
    if (k1f - k1 as f64).abs() > 1e-6 || (k2f - k2 as f64).abs() > 1e-6 {
        return Err(CoreError::InvalidParameter(format!(
            "beta*n = {} must make beta*n/4 and 3*beta*n/4 integral",
            beta * nf
        )));
    }
    if k2 == 0 || k1 > n / 2 {
        return Err(CoreError::InvalidParameter(
            "selection counts out of range; increase n or adjust beta".into(),
        ));
    }
    let half = n / 2;
    let class = HypothesisClass::new(vec![
        Hypothesis::intensional("g1", move |x| {
            let b = block_base(x, n);
            LabelSet::range(b, b + half - 1)
        }),
        Hypothesis::intensional("g2", move |x| {
            let b = block_base(x, n);
            LabelSet::range(b, b + n - 1)
        }),
    ])?;
    let gen = move |x: u64, rng: &mut ChaCha8Rng| {
        let b = block_base(x, n);
        let from_n1 = sample_distinct(b, b + half - 1, k1, rng);
        let from_n2 = sample_distinct(b + half, b + n - 1, k2, rng);
        from_n1.union(&from_n2)
    };
    let mut closed = BTreeMap::new();
    closed.insert(
        "g1".into(),
        LossReport::new(
            (half - k1) as f64 / half as f64,
            k2 as f64 / (k1 + k2) as f64,
        ),
    );
    closed.insert(
        "g2".into(),
        LossReport::new((n - k1 - k2) as f64 / nf, 0.0),
    );
    World::new(
        format!("scalar_lb(beta={beta},n={n})"),
        class,
        TargetRule::Seeded { seed, gen: Arc::new(gen) },
        InputModel::fresh_stream(),
        closed,
    )
}

/// Fresh-stream world with 12-label blocks and two overlapping members:
/// `g1` = labels 1..8 of the block, `g2` = labels 5..12. In world I the
/// target is g1's set half the time, otherwise a two-label set {u1, u2}
/// with u1 uniform in positions 5..8 and u2 uniform in positions 9..12;
/// world II mirrors the construction. The observed-label marginal is
/// identical across the two worlds.
pub fn pareto_lb_world(which: WorldSide, seed: u64) -> Result<World> {
    let class = HypothesisClass::new(vec![
        Hypothesis::intensional("g1", |x| {
            let b = block_base(x, 12);
            LabelSet::range(b, b + 7)
        }),
        Hypothesis::intensional("g2", |x| {
            let b = block_base(x, 12);
            LabelSet::range(b + 4, b + 11)
        }),
    ])?;
    let gen = move |x: u64, rng: &mut ChaCha8Rng| {
        let b = block_base(x, 12);
        let big: bool = rng.random();
        let u1 = b + 4 + rng.random_range(0..4u64);
        match which {
            WorldSide::I => {
                if big {
                    LabelSet::range(b, b + 7)
                } else {
                    let u2 = b + 8 + rng.random_range(0..4u64);
                    LabelSet::from_labels([u1, u2])
                }
            }
            WorldSide::II => {
                if big {
                    LabelSet::range(b + 4, b + 11)
                } else {
                    let u2 = b + rng.random_range(0..4u64);
                    LabelSet::from_labels([u1, u2])
                }
            }
        }
    };
    let (lo, hi) = (LossReport::new(7.0 / 16.0, 0.25), LossReport::new(0.625, 0.25));
    let mut closed = BTreeMap::new();
    match which {
        WorldSide::I => {
            closed.insert("g1".into(), lo);
            closed.insert("g2".into(), hi);
        }
        WorldSide::II => {
            closed.insert("g1".into(), hi);
            closed.insert("g2".into(), lo);
        }
    }
    World::new(
        format!("pareto_lb({which})"),
        class,
        TargetRule::Seeded { seed, gen: Arc::new(gen) },
        InputModel::fresh_stream(),
        closed,
    )
}

/// Fresh-stream world with n-label blocks and two singleton members,
/// `g1` = {v1}, `g2` = {v2}. In world I the target is the whole block
/// minus v2 half the time and {v1, v2} otherwise; world II swaps v1 and
/// v2. The per-sample distinguishing probability vanishes as n grows,
/// while the zero-precision member differs between the worlds.
pub fn semi_lb_world(which: WorldSide, n: u64, seed: u64) -> Result<World> {
    if n < 3 {
        return Err(CoreError::InvalidParameter("semi_lb world needs n >= 3".into()));
    }
    let class = HypothesisClass::new(vec![
        Hypothesis::intensional("g1", move |x| LabelSet::singleton(block_base(x, n))),
        Hypothesis::intensional("g2", move |x| LabelSet::singleton(block_base(x, n) + 1)),
    ])?;
    let gen = move |x: u64, rng: &mut ChaCha8Rng| {
        let b = block_base(x, n);
        let big: bool = rng.random();
        match (which, big) {
            (WorldSide::I, true) => LabelSet::from_intervals([(b, b), (b + 2, b + n - 1)]),
            (WorldSide::II, true) => LabelSet::range(b + 1, b + n - 1),
            (_, false) => LabelSet::range(b, b + 1),
        }
    };
    let good = LossReport::new(0.0, 0.75 - 1.0 / (2.0 * (n - 1) as f64));
    let bad = LossReport::new(0.5, 0.75);
    let mut closed = BTreeMap::new();
    match which {
        WorldSide::I => {
            closed.insert("g1".into(), good);
            closed.insert("g2".into(), bad);
        }
        WorldSide::II => {
            closed.insert("g1".into(), bad);
            closed.insert("g2".into(), good);
        }
    }
    World::new(
        format!("semi_lb({which},n={n})"),
        class,
        TargetRule::Seeded { seed, gen: Arc::new(gen) },
        InputModel::fresh_stream(),
        closed,
    )
}

/// Randomized finite world for sweeps: categorical inputs with random
/// weights in [1, 2) before normalization, extensional members whose
/// per-input set sizes are uniform in 1..=max_set_size and whose sets are
/// uniform among subsets of that size. If `realizable`, the target is a
/// uniformly chosen member; otherwise an independent random table.
pub fn random_finite_world(
    num_inputs: u64,
    label_universe: u64,
    class_size: usize,
    max_set_size: u64,
    realizable: bool,
    seed: u64,
) -> Result<World> {
    if num_inputs == 0 || class_size == 0 || max_set_size == 0 || label_universe < max_set_size {
        return Err(CoreError::InvalidParameter(
            "random_finite world needs num_inputs, class_size, max_set_size >= 1 and universe >= max_set_size".into(),
        ));
    }
    let mut rng = stream::rng(seed, &[tag::WORLD]);
    let weights: Vec<f64> = (0..num_inputs).map(|_| 1.0 + rng.random::<f64>()).collect();
    let random_table = |rng: &mut ChaCha8Rng| {
        let mut map = BTreeMap::new();
        for x in 0..num_inputs {
            let s = rng.random_range(1..=max_set_size);
            map.insert(x, sample_distinct(0, label_universe - 1, s, rng));
        }
        map
    };
    let members: Vec<Hypothesis> = (0..class_size)
        .map(|j| {
            let tbl = random_table(&mut rng);
            Hypothesis::table(format!("h{j:02}"), tbl)
        })
        .collect();
    let target = if realizable {
        let idx = rng.random_range(0..class_size);
        members[idx].with_id("target")
    } else {
        Hypothesis::table("target", random_table(&mut rng))
    };
    let class = HypothesisClass::new(members)?;
    World::new(
        "random_finite",
        class,
        TargetRule::Fixed(target),
        InputModel::categorical((0..num_inputs).collect(), weights)?,
        BTreeMap::new(),
    )
}

pub const BATTERY_NAMES: [&str; 3] = ["decoys", "skewed", "bounded_targets"];

/// Hand-built finite worlds with engineered loss structure, used as a
/// benchmark battery. All are exactly enumerable.
///
/// - `decoys`: one member nearly matches the target (scalar loss 0.025);
///   the rest are traps (too big, too small, shifted, empty, noisy).
/// - `skewed`: the best member deliberately misses a quarter of every
///   target; alternatives trade recall for precision badly.
/// - `bounded_targets`: targets of size 4 with subset/superset/disjoint
///   members, two of which have exactly zero precision loss.
pub fn battery_world(name: &str, seed: u64) -> Result<World> {
    match name {
        "decoys" => {
            let mut rng = stream::rng(seed, &[tag::WORLD, 1]);
            let num_inputs = 10u64;
            let targets: BTreeMap<u64, LabelSet> = (0..num_inputs)
                .map(|x| (x, sample_distinct(0, 47, 4, &mut rng)))
                .collect();
            let pick = |x: u64, k: usize| -> LabelSet {
                LabelSet::from_labels((0..k).map(|i| targets[&x].nth(i as u128).unwrap()))
            };
            let near: BTreeMap<u64, LabelSet> = targets
                .iter()
                .map(|(&x, t)| {
                    let set = if x == 0 { t.union(&LabelSet::range(48, 51)) } else { t.clone() };
                    (x, set)
                })
                .collect();
            let half: BTreeMap<u64, LabelSet> = (0..num_inputs).map(|x| (x, pick(x, 2))).collect();
            let noisy: BTreeMap<u64, LabelSet> = (0..num_inputs)
                .map(|x| (x, pick(x, 2).union(&LabelSet::range(52, 53))))
                .collect();
            let shifted: BTreeMap<u64, LabelSet> = (0..num_inputs)
                .map(|x| (x, targets[&((x + 1) % num_inputs)].clone()))
                .collect();
            let complete: BTreeMap<u64, LabelSet> =
                (0..num_inputs).map(|x| (x, LabelSet::range(0, 63))).collect();
            let class = HypothesisClass::new(vec![
                Hypothesis::table("complete", complete),
                Hypothesis::table("near", near),
                Hypothesis::table("half", half),
                Hypothesis::table("noisy", noisy),
                Hypothesis::table("shifted", shifted),
                Hypothesis::table("empty", BTreeMap::new()),
            ])?;
            World::new(
                "battery(decoys)",
                class,
                TargetRule::Fixed(Hypothesis::table("target", targets)),
                InputModel::categorical((0..num_inputs).collect(), vec![1.0; num_inputs as usize])?,
                BTreeMap::new(),
            )
        }
        "skewed" => {
            let mut rng = stream::rng(seed, &[tag::WORLD, 2]);
            let num_inputs = 8u64;
            let targets: BTreeMap<u64, LabelSet> = (0..num_inputs)
                .map(|x| (x, sample_distinct(0, 47, 4, &mut rng)))
                .collect();
            let pick = |x: u64, k: usize| -> LabelSet {
                LabelSet::from_labels((0..k).map(|i| targets[&x].nth(i as u128).unwrap()))
            };
            let overfull: BTreeMap<u64, LabelSet> = targets
                .iter()
                .map(|(&x, t)| (x, t.union(&LabelSet::range(48, 59))))
                .collect();
            let threequarters: BTreeMap<u64, LabelSet> =
                (0..num_inputs).map(|x| (x, pick(x, 3))).collect();
            let quarter: BTreeMap<u64, LabelSet> =
                (0..num_inputs).map(|x| (x, pick(x, 1))).collect();
            let complete: BTreeMap<u64, LabelSet> =
                (0..num_inputs).map(|x| (x, LabelSet::range(0, 63))).collect();
            let junk: BTreeMap<u64, LabelSet> =
                (0..num_inputs).map(|x| (x, LabelSet::range(48, 51))).collect();
            let class = HypothesisClass::new(vec![
                Hypothesis::table("overfull", overfull),
                Hypothesis::table("threequarters", threequarters),
                Hypothesis::table("quarter", quarter),
                Hypothesis::table("complete", complete),
                Hypothesis::table("junk", junk),
            ])?;
            World::new(
                "battery(skewed)",
                class,
                TargetRule::Fixed(Hypothesis::table("target", targets)),
                InputModel::categorical((0..num_inputs).collect(), vec![1.0; num_inputs as usize])?,
                BTreeMap::new(),
            )
        }
        "bounded_targets" => {
            let num_inputs = 6u64;
            let targets: BTreeMap<u64, LabelSet> = (0..num_inputs)
                .map(|x| (x, LabelSet::range(10 * x, 10 * x + 3)))
                .collect();
            let table = |f: &dyn Fn(u64) -> LabelSet| -> BTreeMap<u64, LabelSet> {
                (0..num_inputs).map(|x| (x, f(x))).collect()
            };
            let class = HypothesisClass::new(vec![
                Hypothesis::table("mixed", table(&|x| LabelSet::from_labels([10 * x, 10 * x + 4]))),
                Hypothesis::table("sub", table(&|x| LabelSet::range(10 * x, 10 * x + 1))),
                Hypothesis::table("exact", table(&|x| LabelSet::range(10 * x, 10 * x + 3))),
                Hypothesis::table("wide", table(&|x| LabelSet::range(10 * x, 10 * x + 5))),
                Hypothesis::table("off", table(&|x| LabelSet::range(10 * x + 4, 10 * x + 7))),
            ])?;
            World::new(
                "battery(bounded_targets)",
                class,
                TargetRule::Fixed(Hypothesis::table("target", targets)),
                InputModel::categorical((0..num_inputs).collect(), vec![1.0; num_inputs as usize])?,
                BTreeMap::new(),
            )
        }
        other => Err(CoreError::InvalidParameter(format!("unknown battery world `{other}`"))),
    }
}

/// Serializable description of a world: kind + parameters. Combined with a
/// seed this reproduces a world exactly.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum WorldSpec {
    Example1 { n: u64 },
    ScalarLb { beta: f64, n: u64 },
    ParetoLb { which: WorldSide },
    SemiLb { which: WorldSide, n: u64 },
    RandomFinite {
        num_inputs: u64,
        label_universe: u64,
        class_size: usize,
        max_set_size: u64,
        realizable: bool,
    },
    Battery { name: String },
}

/// Builds the world described by `spec` under `seed`.
pub fn build_world(spec: &WorldSpec, seed: u64) -> Result<World> {
    match spec {
        WorldSpec::Example1 { n } => example1_world(*n),
        WorldSpec::ScalarLb { beta, n } => scalar_lb_world(*beta, *n, seed),
        WorldSpec::ParetoLb { which } => pareto_lb_world(*which, seed),
        WorldSpec::SemiLb { which, n } => semi_lb_world(*which, *n, seed),
        WorldSpec::RandomFinite {
            num_inputs,
            label_universe,
            class_size,
            max_set_size,
            realizable,
        } => random_finite_world(
            *num_inputs,
            *label_universe,
            *class_size,
            *max_set_size,
            *realizable,
            seed,
        ),
        WorldSpec::Battery { name } => battery_world(name, seed),
    }
}

/// The benchmark battery used by the agnostic experiments: two crafted
/// finite worlds plus two fresh-stream worlds with closed-form losses.
pub fn agnostic_battery() -> Vec<WorldSpec> {
    vec![
        WorldSpec::Battery { name: "decoys".into() },
        WorldSpec::Battery { name: "skewed".into() },
        WorldSpec::ScalarLb { beta: 2.0 / 3.0, n: 96 },
        WorldSpec::ParetoLb { which: WorldSide::I },
    ]
}

/// Kind names and parameter summaries for CLI listing.
pub fn catalog() -> Vec<(&'static str, &'static str)> {
    vec![
        ("example1", "n — single input; target {0..n-1}; class [complete, target, g1, g2, empty] over 20n labels"),
        ("scalar_lb", "beta in [1/8, 2/3] (beta*n/4 integral), even n — fresh stream; beta-independent label marginal"),
        ("pareto_lb", "which in {I, II} — fresh stream, 12-label blocks, identical label marginals across sides"),
        ("semi_lb", "which in {I, II}, n >= 3 — fresh stream; per-sample distinguishing probability <= 2/n"),
        ("random_finite", "num_inputs, label_universe, class_size, max_set_size, realizable — randomized finite world"),
        ("battery", "name in {decoys, skewed, bounded_targets} — crafted finite benchmark worlds"),
    ]
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::loss::{expected_losses, EvalMode};
    use rand::SeedableRng;

    fn exact(world: &World, id: &str) -> LossReport {
        let (_, h) = world.class().by_id(&id.into()).unwrap();
        expected_losses(h, world, EvalMode::Exact).unwrap().report
    }

    #[test]
    fn example1_exact_losses() {
        let w = example1_world(10).unwrap();
        let g1 = exact(&w, "g1");
        assert_eq!((g1.precision_loss, g1.recall_loss), (0.0, 0.9));
        let g2 = exact(&w, "g2");
        assert_eq!((g2.precision_loss, g2.recall_loss), (1.0, 1.0));
        let complete = exact(&w, "complete");
        // 190 of the 200-label universe are outside the target
        assert_eq!((complete.precision_loss, complete.recall_loss), (0.95, 0.0));
        let target = exact(&w, "target");
        assert_eq!((target.precision_loss, target.recall_loss), (0.0, 0.0));
        let empty = exact(&w, "empty");
        assert_eq!((empty.precision_loss, empty.recall_loss), (0.0, 1.0));
    }

    #[test]
    fn example1_training_labels_are_uniform_over_target() {
        let w = example1_world(10).unwrap();
        let mut rng = crate::stream::rng(11, &[]);
        let data = sample_training_set(&w, 100_000, &mut rng).unwrap();
        let mut counts = [0u32; 10];
        for &(x, v) in &data.samples {
            assert_eq!(x, 0);
            counts[v as usize] += 1;
        }
        let sigma = (100_000.0f64 * 0.1 * 0.9).sqrt();
        for c in counts {
            assert!((c as f64 - 10_000.0).abs() < 3.5 * sigma, "label frequency off: {c}");
        }
    }

    #[test]
    fn scalar_lb_closed_forms_match_hand_computation() {
        let w = scalar_lb_world(2.0 / 3.0, 96, 5).unwrap();
        let g1 = w.closed_form(&"g1".into()).unwrap();
        assert_eq!((g1.precision_loss, g1.recall_loss, g1.scalar_loss), (0.0, 0.25, 0.125));
        assert_eq!(g1.payoff(), 0.875); // 3β/4 + 3/8 at β = 2/3
        let g2 = w.closed_form(&"g2".into()).unwrap();
        assert!((g2.payoff() - (0.5 + 1.0 / 3.0)).abs() < 1e-12); // β/2 + 1/2

        let w = scalar_lb_world(0.125, 96, 5).unwrap();
        let g2 = w.closed_form(&"g2".into()).unwrap();
        assert_eq!(g2.payoff(), 0.5625); // 9/16
        let g1 = w.closed_form(&"g1".into()).unwrap();
        assert_eq!(g1.payoff(), 0.46875); // 15/32
    }

    #[test]
    fn scalar_lb_marginal_is_beta_independent() {
        // Each N1 label appears with probability 3/(2n), each N2 label with
        // 1/(2n), for any admissible beta.
        let n = 16u64;
        let draws = 60_000usize;
        for beta in [0.5, 0.25] {
            let w = scalar_lb_world(beta, n, 3).unwrap();
            let mut rng = crate::stream::rng(17, &[n, (beta * 100.0) as u64]);
            let mut counts = std::collections::HashMap::new();
            let data = sample_training_set(&w, draws, &mut rng).unwrap();
            for &(x, v) in &data.samples {
                *counts.entry(v - x * n).or_insert(0u64) += 1;
            }
            for pos in 0..n {
                let p = if pos < n / 2 { 3.0 / (2.0 * n as f64) } else { 1.0 / (2.0 * n as f64) };
                let expect = p * draws as f64;
                let sigma = (draws as f64 * p * (1.0 - p)).sqrt();
                let got = *counts.get(&pos).unwrap_or(&0) as f64;
                assert!(
                    (got - expect).abs() < 4.0 * sigma,
                    "beta={beta} pos={pos}: got {got}, want {expect}"
                );
            }
        }
    }

    #[test]
    fn scalar_lb_rejects_non_integral_selections() {
        assert!(scalar_lb_world(0.5, 10, 0).is_err()); // βn/4 = 1.25
        assert!(scalar_lb_world(0.05, 96, 0).is_err()); // β below range
        assert!(scalar_lb_world(0.5, 7, 0).is_err()); // odd n
    }

    #[test]
    fn pareto_lb_closed_forms() {
        let w1 = pareto_lb_world(WorldSide::I, 9).unwrap();
        let g1 = w1.closed_form(&"g1".into()).unwrap();
        assert_eq!((g1.precision_loss, g1.recall_loss), (0.4375, 0.25));
        let g2 = w1.closed_form(&"g2".into()).unwrap();
        assert_eq!((g2.precision_loss, g2.recall_loss), (0.625, 0.25));
        let w2 = pareto_lb_world(WorldSide::II, 9).unwrap();
        assert_eq!(w2.closed_form(&"g2".into()).unwrap(), g1);
    }

    // Exact observed-label marginal over block positions, re-derived from
    // the generative definition: half the mass follows the "big" target
    // (uniform over its 8 positions), half splits evenly between u1
    // (positions 4..8) and u2 (positions 8..12 in world I, 0..4 in II).
    fn pareto_marginal(which: WorldSide) -> [f64; 3] {
        let mut probs = [0.0f64; 3]; // first 4 / middle 4 / last 4 positions
        let big_positions: Vec<u64> = match which {
            WorldSide::I => (0..8).collect(),
            WorldSide::II => (4..12).collect(),
        };
        for &pos in &big_positions {
            probs[(pos / 4) as usize] += 0.5 / big_positions.len() as f64;
        }
        for u1 in 4..8u64 {
            probs[(u1 / 4) as usize] += 0.5 * (1.0 / 4.0) * 0.5;
        }
        let u2_range = match which {
            WorldSide::I => 8..12u64,
            WorldSide::II => 0..4u64,
        };
        for u2 in u2_range {
            probs[(u2 / 4) as usize] += 0.5 * (1.0 / 4.0) * 0.5;
        }
        probs
    }

    #[test]
    fn pareto_lb_marginals_identical_across_sides() {
        let a = pareto_marginal(WorldSide::I);
        let b = pareto_marginal(WorldSide::II);
        for k in 0..3 {
            assert!((a[k] - b[k]).abs() < 1e-12, "position class {k}: {a:?} vs {b:?}");
        }
        assert_eq!(a, [0.25, 0.5, 0.25]);
        // And the worlds actually sample from that marginal.
        for which in [WorldSide::I, WorldSide::II] {
            let w = pareto_lb_world(which, 21).unwrap();
            let mut rng = crate::stream::rng(23, &[which as u64]);
            let data = sample_training_set(&w, 60_000, &mut rng).unwrap();
            let mut counts = [0u64; 3];
            for &(x, v) in &data.samples {
                counts[((v - x * 12) / 4) as usize] += 1;
            }
            for k in 0..3 {
                let expect = a[k] * 60_000.0;
                let sigma = (60_000.0 * a[k] * (1.0 - a[k])).sqrt();
                assert!((counts[k] as f64 - expect).abs() < 4.0 * sigma);
            }
        }
    }

    #[test]
    fn semi_lb_closed_forms_and_distinguishing_probability() {
        for n in [3u64, 10, 100, 1_000_000] {
            let w = semi_lb_world(WorldSide::I, n, 2).unwrap();
            let g1 = w.closed_form(&"g1".into()).unwrap();
            let exact_recall = 0.75 - 1.0 / (2.0 * (n - 1) as f64);
            assert_eq!((g1.precision_loss, g1.recall_loss), (0.0, exact_recall));
            // The commonly quoted approximation 3/4 - 1/(2n) agrees to O(1/n^2).
            assert!((g1.recall_loss - (0.75 - 1.0 / (2.0 * n as f64))).abs() <= 1.0 / (n * n) as f64 + 1e-15);
            let g2 = w.closed_form(&"g2".into()).unwrap();
            assert_eq!((g2.precision_loss, g2.recall_loss), (0.5, 0.75));

            // Exact marginals: P(v = v1) differs across sides by 1/(2(n-1)),
            // elsewhere they agree, so total variation = 1/(2(n-1)) <= 2/n.
            let tv = 1.0 / (2.0 * (n - 1) as f64);
            assert!(tv <= 2.0 / n as f64);
        }
    }

    #[test]
    fn semi_lb_observed_marginal_sanity() {
        let n = 10u64;
        let w = semi_lb_world(WorldSide::I, n, 4).unwrap();
        let mut rng = crate::stream::rng(29, &[]);
        let data = sample_training_set(&w, 80_000, &mut rng).unwrap();
        let mut v1 = 0u64;
        let mut v2 = 0u64;
        for &(x, v) in &data.samples {
            let pos = v - x * n;
            if pos == 0 {
                v1 += 1;
            } else if pos == 1 {
                v2 += 1;
            }
        }
        let p1 = 0.25 + 1.0 / (2.0 * (n - 1) as f64);
        let p2 = 0.25;
        for (count, p) in [(v1, p1), (v2, p2)] {
            let sigma = (80_000.0 * p * (1.0 - p)).sqrt();
            assert!((count as f64 - 80_000.0 * p).abs() < 4.0 * sigma);
        }
    }

    #[test]
    fn fresh_stream_ids_never_repeat() {
        let w = scalar_lb_world(0.5, 8, 1).unwrap();
        let mut rng = crate::stream::rng(3, &[]);
        let data = sample_training_set(&w, 500, &mut rng).unwrap();
        let ids: std::collections::BTreeSet<u64> = data.samples.iter().map(|&(x, _)| x).collect();
        assert_eq!(ids.len(), 500);
        // Counter-based: continues past the training draw.
        assert_eq!(w.sample_input(&mut rng), 500);
    }

    #[test]
    fn seeded_targets_are_memoized_pure_functions() {
        let w = pareto_lb_world(WorldSide::I, 77).unwrap();
        for x in 0..64 {
            assert_eq!(w.target(x), w.target(x));
        }
        let w2 = pareto_lb_world(WorldSide::I, 77).unwrap();
        assert_eq!(w.fingerprint(32), w2.fingerprint(32));
        let w3 = pareto_lb_world(WorldSide::I, 78).unwrap();
        assert_ne!(w.fingerprint(32), w3.fingerprint(32));
    }

    #[test]
    fn random_finite_world_is_reproducible_and_valid() {
        let spec = WorldSpec::RandomFinite {
            num_inputs: 12,
            label_universe: 32,
            class_size: 8,
            max_set_size: 5,
            realizable: true,
        };
        let w = build_world(&spec, 100).unwrap();
        assert_eq!(w.fingerprint(0), build_world(&spec, 100).unwrap().fingerprint(0));
        assert_ne!(w.fingerprint(0), build_world(&spec, 101).unwrap().fingerprint(0));
        // Realizable: some member has zero expected loss.
        let zero = w.class().iter().any(|h| {
            let r = expected_losses(h, &w, EvalMode::Exact).unwrap().report;
            r.scalar_loss == 0.0
        });
        assert!(zero);
        for x in 0..12 {
            assert!(!w.target(x).is_empty());
            assert!(w.target(x).len() <= 5);
        }
    }

    #[test]
    fn battery_worlds_have_engineered_minima() {
        // Weighted enumeration sums ten 0.1-weight terms, so allow float slack.
        let close = |got: f64, want: f64| (got - want).abs() < 1e-12;

        let w = battery_world("decoys", 1).unwrap();
        let near = exact(&w, "near");
        assert!(close(near.scalar_loss, 0.025));
        assert!(close(near.recall_loss, 0.0) && close(near.precision_loss, 0.05));
        assert!(close(exact(&w, "half").scalar_loss, 0.25));
        assert!(close(exact(&w, "complete").precision_loss, 0.9375));
        assert!(close(exact(&w, "empty").recall_loss, 1.0));

        let w = battery_world("skewed", 1).unwrap();
        assert!(close(exact(&w, "threequarters").scalar_loss, 0.125));
        assert!(close(exact(&w, "overfull").precision_loss, 0.75));
        assert!(close(exact(&w, "junk").scalar_loss, 1.0));

        let w = battery_world("bounded_targets", 1).unwrap();
        assert!(close(exact(&w, "sub").precision_loss, 0.0));
        assert!(close(exact(&w, "exact").scalar_loss, 0.0));
        assert!(close(exact(&w, "mixed").precision_loss, 0.5));
        assert!(close(exact(&w, "wide").precision_loss, 1.0 / 3.0));
        assert!(close(exact(&w, "off").scalar_loss, 1.0));
    }

    #[test]
    fn world_spec_round_trips_through_json() {
        let specs = vec![
            WorldSpec::Example1 { n: 10 },
            WorldSpec::ScalarLb { beta: 2.0 / 3.0, n: 96 },
            WorldSpec::ParetoLb { which: WorldSide::II },
            WorldSpec::SemiLb { which: WorldSide::I, n: 1_000_000 },
            WorldSpec::Battery { name: "decoys".into() },
        ];
        for spec in specs {
            let json = serde_json::to_string(&spec).unwrap();
            let back: WorldSpec = serde_json::from_str(&json).unwrap();
            assert_eq!(back, spec);
        }
    }

    #[test]
    fn floyd_sampling_is_uniform_over_subsets() {
        // All 2-subsets of a 4-element range should be equally likely.
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(5);
        let mut counts = std::collections::HashMap::new();
        let draws = 30_000;
        for _ in 0..draws {
            let s = sample_distinct(10, 13, 2, &mut rng);
            let key: Vec<u64> = s.iter().collect();
            *counts.entry(key).or_insert(0u32) += 1;
        }
        assert_eq!(counts.len(), 6);
        let expect = draws as f64 / 6.0;
        let sigma = (draws as f64 * (1.0 / 6.0) * (5.0 / 6.0)).sqrt();
        for (_, c) in counts {
            assert!((c as f64 - expect).abs() < 4.0 * sigma);
        }
    }
}
