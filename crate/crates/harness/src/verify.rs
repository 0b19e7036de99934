//! One-shot wrapper over the brute-force verifiers in `prlab_core::oracle`,
//! with a renderer and an aggregate pass/fail for CLI exit codes.

use prlab_core::oracle::{
    enumerate_pareto_lb, verify_bounded_deg, verify_constrained_opt, verify_dh_dpr_sandwich,
    verify_prec_recall_inequality, verify_scalar_lb_payoffs, VerificationReport,
};
use prlab_core::stream;

#[derive(Clone, Copy, Debug)]
pub struct VerifySettings {
    /// Randomized instances per sampled-instance verifier.
    pub trials: usize,
    pub seed: u64,
    /// Monte Carlo inputs for the payoff-gap verifier.
    pub scalar_inputs: usize,
}

impl Default for VerifySettings {
    fn default() -> Self {
        VerifySettings { trials: 1000, seed: 7, scalar_inputs: 100_000 }
    }
}

/// Runs every verifier and returns one report each: the distance sandwich,
/// the grid-search bound for the truncated-ratio objective, the
/// precision-from-recall inequality, the output-size degree bounds, the
/// exact worst-pair enumeration, and the two-world payoff gaps.
pub fn verify_all(s: &VerifySettings) -> prlab_core::Result<Vec<VerificationReport>> {
    let mut reports = Vec::with_capacity(6);
    reports.push(verify_dh_dpr_sandwich(s.trials, &mut stream::rng(s.seed, &[1])));
    reports.push(verify_constrained_opt(6, &[0.0, 0.5, 1.0, 2.0], 1.0 / 64.0)?);
    reports.push(verify_prec_recall_inequality(
        s.trials,
        &[0.25, 0.5, 1.0],
        &mut stream::rng(s.seed, &[2]),
    )?);
    reports.push(verify_bounded_deg(s.trials, &mut stream::rng(s.seed, &[3])));
    reports.push(enumerate_pareto_lb());
    reports.push(verify_scalar_lb_payoffs(
        &[0.125, 2.0 / 3.0],
        96,
        s.scalar_inputs,
        stream::derive_seed(s.seed, &[4]),
    )?);
    Ok(reports)
}

pub fn all_pass(reports: &[VerificationReport]) -> bool {
    reports.iter().all(|r| r.pass())
}

/// One line per report; violations and notes indented under failures.
pub fn render_reports(reports: &[VerificationReport]) -> String {
    let mut out = String::new();
    for r in reports {
        if r.pass() {
            out.push_str(&format!("PASS {} ({} instances)\n", r.name, r.instances_checked));
        } else {
            out.push_str(&format!(
                "FAIL {} ({} instances, {} violations)\n",
                r.name,
                r.instances_checked,
                r.violations.len()
            ));
            for v in r.violations.iter().take(5) {
                out.push_str(&format!(
                    "  {} observed {} vs bound {}\n",
                    v.instance, v.observed, v.bound
                ));
            }
            if r.violations.len() > 5 {
                out.push_str(&format!("  ... {} more\n", r.violations.len() - 5));
            }
        }
        for note in &r.notes {
            out.push_str(&format!("  note: {note}\n"));
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn quick_verify_pass_end_to_end() {
        let reports =
            verify_all(&VerifySettings { trials: 60, seed: 5, scalar_inputs: 20_000 }).unwrap();
        assert_eq!(reports.len(), 6);
        assert!(all_pass(&reports), "{}", render_reports(&reports));
        let text = render_reports(&reports);
        assert_eq!(text.lines().filter(|l| l.starts_with("PASS")).count(), 6);
    }
}
