//! Result serialization: a flat CSV of trial rows and a JSON summary of
//! per-(experiment, learner, m) aggregates. Both are deterministic byte
//! streams for a given set of records.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use prlab_core::LossReport;

use crate::config::Config;
use crate::runner::TrialRecord;

pub const CSV_HEADER: &str =
    "experiment,learner,m,trial,precision_loss,recall_loss,scalar_loss,chosen_id,seed,status";

/// Renders records as CSV. Loss cells use f64's shortest round-trip
/// display, and failed trials leave the loss and chosen cells empty, so
/// identical runs serialize to identical bytes.
pub fn csv_string(records: &[TrialRecord]) -> String {
    let mut s = String::with_capacity(64 * (records.len() + 1));
    s.push_str(CSV_HEADER);
    s.push('\n');
    for r in records {
        let (p, rr, sc) = match &r.losses {
            Some(l) => (
                l.precision_loss.to_string(),
                l.recall_loss.to_string(),
                l.scalar_loss.to_string(),
            ),
            None => (String::new(), String::new(), String::new()),
        };
        writeln!(
            s,
            "{},{},{},{},{},{},{},{},{},{}",
            r.experiment,
            r.learner,
            r.m,
            r.trial,
            p,
            rr,
            sc,
            r.chosen.as_deref().unwrap_or(""),
            r.seed,
            r.status
        )
        .expect("writing to a String cannot fail");
    }
    s
}

/// Wilson 95% score interval for `successes` out of `n` Bernoulli trials.
pub fn wilson95(successes: usize, n: usize) -> (f64, f64) {
    const Z: f64 = 1.959963984540054;
    assert!(n > 0, "wilson interval needs at least one trial");
    let n_f = n as f64;
    let p = successes as f64 / n_f;
    let z2 = Z * Z;
    let denom = 1.0 + z2 / n_f;
    let center = (p + z2 / (2.0 * n_f)) / denom;
    let half = Z * (p * (1.0 - p) / n_f + z2 / (4.0 * n_f * n_f)).sqrt() / denom;
    ((center - half).max(0.0), (center + half).min(1.0))
}

/// Aggregates records per (experiment, learner, m): mean losses over
/// completed trials, plus a success fraction with its Wilson interval for
/// experiments that declare `success_epsilon`. Failed trials count against
/// success but are excluded from loss means.
pub fn summary_json(cfg: &Config, records: &[TrialRecord]) -> serde_json::Value {
    let eps_by_exp: BTreeMap<&str, Option<f64>> = cfg
        .experiments
        .iter()
        .map(|e| (e.id.as_str(), e.success_epsilon))
        .collect();

    let mut order: Vec<(String, &'static str, usize)> = Vec::new();
    let mut groups: BTreeMap<(String, &'static str, usize), Vec<&TrialRecord>> = BTreeMap::new();
    for r in records {
        let key = (r.experiment.clone(), r.learner, r.m);
        if !groups.contains_key(&key) {
            order.push(key.clone());
        }
        groups.entry(key).or_default().push(r);
    }

    let mut out = Vec::with_capacity(order.len());
    for key in order {
        let rows = &groups[&key];
        let ok: Vec<&LossReport> = rows.iter().filter_map(|r| r.losses.as_ref()).collect();
        let mean = |f: fn(&LossReport) -> f64| -> Option<f64> {
            if ok.is_empty() {
                None
            } else {
                Some(ok.iter().map(|l| f(l)).sum::<f64>() / ok.len() as f64)
            }
        };
        let mut entry = serde_json::json!({
            "experiment": key.0,
            "learner": key.1,
            "m": key.2,
            "trials": rows.len(),
            "completed": ok.len(),
            "mean_precision_loss": mean(|l| l.precision_loss),
            "mean_recall_loss": mean(|l| l.recall_loss),
            "mean_scalar_loss": mean(|l| l.scalar_loss),
        });
        if let Some(&Some(eps)) = eps_by_exp.get(key.0.as_str()) {
            let successes = rows
                .iter()
                .filter(|r| r.losses.as_ref().is_some_and(|l| l.scalar_loss <= eps))
                .count();
            let (lo, hi) = wilson95(successes, rows.len());
            entry["success"] = serde_json::json!({
                "epsilon": eps,
                "successes": successes,
                "fraction": successes as f64 / rows.len() as f64,
                "wilson95": [lo, hi],
            });
        }
        out.push(entry);
    }
    serde_json::json!({ "schema_version": 1, "groups": out })
}
