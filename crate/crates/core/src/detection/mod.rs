// SPDX-License-Identifier: Apache-2.0

//! Detection capability of a set of response bits.
//!
//! Both distance distributions are binomial: a fresh device's distance to
//! its enrolled reference follows `B(n, p_intra)`, an aged device's follows
//! `B(n, p_inter)`. A device is flagged as recycled when its distance
//! reaches the threshold `n_th`, so
//!
//! - `frr(n_th) = P(B(n, p_intra) >= n_th)`: a fresh device is flagged,
//! - `far(n_th) = P(B(n, p_inter) <  n_th)`: an aged device passes as fresh.
//!
//! The equal-error threshold minimises `max(far, frr)`; planning looks for
//! the shortest response achieving an equal error rate below a target.

pub mod binomial;
mod table;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::bitcore::{hamming_distance, BitError, ResponseVector};

pub use table::{render_csv, render_text, PlanCell, CSV_HEADER};

/// Largest response length `minimal_n` will consider by default.
pub const DEFAULT_N_CEILING: u64 = 1_000_000;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum DetectionError {
    #[error("{name} = {value} must lie strictly between 0 and 1")]
    Probability { name: &'static str, value: f64 },
    #[error("p_intra ({p_intra}) must be below p_inter ({p_inter}) for planning")]
    NotSeparable { p_intra: f64, p_inter: f64 },
    #[error("response length must be at least 1")]
    ZeroLength,
    #[error("threshold {n_th} out of range for n = {n}")]
    ThresholdRange { n: u64, n_th: u64 },
    #[error("target EER {0} must lie strictly between 0 and 0.5")]
    Target(f64),
    #[error("infeasible under ceiling: no n <= {ceiling} reaches EER < {target}")]
    Infeasible { target: f64, ceiling: u64 },
    #[error(transparent)]
    Bits(#[from] BitError),
}

/// Binomial bit-flip estimators of the intraA and interA distributions.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ErrorModel {
    p_intra: f64,
    p_inter: f64,
}

fn check_probability(name: &'static str, value: f64) -> Result<(), DetectionError> {
    if value > 0.0 && value < 1.0 {
        Ok(())
    } else {
        Err(DetectionError::Probability { name, value })
    }
}

impl ErrorModel {
    pub fn new(p_intra: f64, p_inter: f64) -> Result<Self, DetectionError> {
        check_probability("p_intra", p_intra)?;
        check_probability("p_inter", p_inter)?;
        Ok(Self { p_intra, p_inter })
    }

    pub fn p_intra(&self) -> f64 {
        self.p_intra
    }

    pub fn p_inter(&self) -> f64 {
        self.p_inter
    }

    /// Planning only makes sense when aged devices flip more bits than fresh ones.
    pub fn ensure_separable(&self) -> Result<(), DetectionError> {
        if self.p_intra < self.p_inter {
            Ok(())
        } else {
            Err(DetectionError::NotSeparable {
                p_intra: self.p_intra,
                p_inter: self.p_inter,
            })
        }
    }
}

fn check_threshold(n: u64, n_th: u64) -> Result<(), DetectionError> {
    if n == 0 {
        return Err(DetectionError::ZeroLength);
    }
    if n_th > n + 1 {
        return Err(DetectionError::ThresholdRange { n, n_th });
    }
    Ok(())
}

/// Probability that a fresh device reaches distance `n_th` over `n` bits.
///
/// `n_th` may run up to `n + 1`, the threshold that never flags anything.
pub fn frr(model: &ErrorModel, n: u64, n_th: u64) -> Result<f64, DetectionError> {
    check_threshold(n, n_th)?;
    Ok(binomial::upper_tail(n, model.p_intra, n_th))
}

/// Probability that an aged device stays below distance `n_th` over `n` bits.
pub fn far(model: &ErrorModel, n: u64, n_th: u64) -> Result<f64, DetectionError> {
    check_threshold(n, n_th)?;
    Ok(binomial::lower_tail(n, model.p_inter, n_th))
}

/// A response length, a threshold and the error rates they produce.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct OperatingPoint {
    pub n: u64,
    pub n_th: u64,
    pub far: f64,
    pub frr: f64,
}

impl OperatingPoint {
    pub fn eer(&self) -> f64 {
        self.far.max(self.frr)
    }
}

fn point(model: &ErrorModel, n: u64, n_th: u64) -> OperatingPoint {
    OperatingPoint {
        n,
        n_th,
        far: binomial::lower_tail(n, model.p_inter, n_th),
        frr: binomial::upper_tail(n, model.p_intra, n_th),
    }
}

/// Resolves the argmin of `max(far, frr)` given the crossing `t`, the
/// smallest threshold with `far >= frr`. Only `t - 1` and `t` can win
/// because `far` never decreases and `frr` never increases in the threshold.
fn best_around_crossing(model: &ErrorModel, n: u64, t: u64) -> OperatingPoint {
    let at = (t <= n).then(|| point(model, n, t));
    let below = (t > 0).then(|| point(model, n, t - 1));
    match (below, at) {
        (Some(b), Some(a)) => {
            if a.eer() < b.eer() {
                a
            } else {
                b
            }
        }
        (Some(b), None) => b,
        (None, Some(a)) => a,
        (None, None) => unreachable!("n >= 1 leaves at least one candidate"),
    }
}

fn crosses(model: &ErrorModel, n: u64, t: u64) -> bool {
    binomial::ln_lower_tail(n, model.p_inter, t) >= binomial::ln_upper_tail(n, model.p_intra, t)
}

/// Equal-error operating point at response length `n`.
///
/// Returns the threshold in `[0, n]` minimising `max(far, frr)`, the
/// smallest one on ties.
pub fn eer_search(model: &ErrorModel, n: u64) -> Result<OperatingPoint, DetectionError> {
    if n == 0 {
        return Err(DetectionError::ZeroLength);
    }
    // far(n + 1) = 1 >= frr(n + 1) = 0, so the crossing lies in [0, n + 1]
    let (mut lo, mut hi) = (0u64, n + 1);
    while lo < hi {
        let mid = lo + (hi - lo) / 2;
        if crosses(model, n, mid) {
            hi = mid;
        } else {
            lo = mid + 1;
        }
    }
    Ok(best_around_crossing(model, n, lo))
}

/// Incremental equal-error search over `n = 1, 2, ...`.
///
/// The crossing threshold never moves down as `n` grows (more bits shift
/// both distributions right), so it is carried over between lengths.
struct EerScan<'a> {
    model: &'a ErrorModel,
    crossing: u64,
}

impl<'a> EerScan<'a> {
    fn new(model: &'a ErrorModel) -> Self {
        Self { model, crossing: 0 }
    }

    fn at(&mut self, n: u64) -> OperatingPoint {
        let mut t = self.crossing;
        while t <= n && !crosses(self.model, n, t) {
            t += 1;
        }
        self.crossing = t;
        best_around_crossing(self.model, n, t)
    }
}

/// Minimal response length and its equal-error operating point.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DetectionPlan {
    pub error_model: ErrorModel,
    pub target_eer: f64,
    pub n: u64,
    pub n_eer: u64,
    pub eer: f64,
    pub far: f64,
    pub frr: f64,
}

impl DetectionPlan {
    pub fn operating_point(&self) -> OperatingPoint {
        OperatingPoint {
            n: self.n,
            n_th: self.n_eer,
            far: self.far,
            frr: self.frr,
        }
    }

    pub fn log10_far(&self) -> f64 {
        self.far.log10()
    }

    pub fn log10_frr(&self) -> f64 {
        self.frr.log10()
    }
}

pub fn minimal_n(model: &ErrorModel, target_eer: f64) -> Result<DetectionPlan, DetectionError> {
    minimal_n_with_ceiling(model, target_eer, DEFAULT_N_CEILING)
}

/// Smallest `n` whose equal error rate is strictly below `target_eer`.
///
/// The equal error rate is not monotone in `n`: it saw-tooths as the best
/// threshold steps up, and a dip can clear the target several lengths before
/// its neighbours do. Every length from 1 upward is therefore evaluated, which
/// makes the result minimal by construction.
pub fn minimal_n_with_ceiling(
    model: &ErrorModel,
    target_eer: f64,
    ceiling: u64,
) -> Result<DetectionPlan, DetectionError> {
    if !(target_eer > 0.0 && target_eer < 0.5) {
        return Err(DetectionError::Target(target_eer));
    }
    model.ensure_separable()?;
    let mut scan = EerScan::new(model);
    for n in 1..=ceiling {
        let op = scan.at(n);
        if op.eer() < target_eer {
            return Ok(DetectionPlan {
                error_model: *model,
                target_eer,
                n,
                n_eer: op.n_th,
                eer: op.eer(),
                far: op.far,
                frr: op.frr,
            });
        }
    }
    Err(DetectionError::Infeasible {
        target: target_eer,
        ceiling,
    })
}

/// One plan per `(model, target)` pair, rows in input order.
///
/// Cells are independent and evaluated in parallel; each cell is a pure
/// function of its inputs so the output does not depend on scheduling.
pub fn plan_table(models: &[(String, ErrorModel)], targets: &[f64]) -> Vec<PlanCell> {
    plan_table_with_ceiling(models, targets, DEFAULT_N_CEILING)
}

pub fn plan_table_with_ceiling(
    models: &[(String, ErrorModel)],
    targets: &[f64],
    ceiling: u64,
) -> Vec<PlanCell> {
    let jobs: Vec<(&String, &ErrorModel, f64)> = models
        .iter()
        .flat_map(|(label, m)| targets.iter().map(move |&t| (label, m, t)))
        .collect();
    jobs.par_iter()
        .map(|&(label, model, target)| PlanCell {
            label: label.clone(),
            model: *model,
            target,
            outcome: minimal_n_with_ceiling(model, target, ceiling),
        })
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    New,
    Recycled,
}

impl std::fmt::Display for Verdict {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Verdict::New => "new",
            Verdict::Recycled => "recycled",
        })
    }
}

/// Outcome of comparing one probe against its reference.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Classification {
    pub verdict: Verdict,
    pub hd: u64,
    pub n: u64,
    pub n_th: u64,
    /// `P(B(n, p_intra) >= hd)`: how unusual the distance is for a fresh device.
    pub fresh_tail: f64,
    /// `P(B(n, p_inter) <= hd)`: how unusual the distance is for an aged device.
    pub aged_tail: f64,
}

/// Flags the probe as recycled when its distance to the reference reaches `n_th`.
pub fn classify(
    reference: &ResponseVector,
    probe: &ResponseVector,
    n_th: u64,
    model: &ErrorModel,
) -> Result<Classification, DetectionError> {
    let hd = hamming_distance(reference, probe)? as u64;
    let n = reference.len() as u64;
    check_threshold(n, n_th)?;
    let verdict = if hd >= n_th {
        Verdict::Recycled
    } else {
        Verdict::New
    };
    Ok(Classification {
        verdict,
        hd,
        n,
        n_th,
        fresh_tail: binomial::upper_tail(n, model.p_intra, hd),
        aged_tail: binomial::lower_tail(n, model.p_inter, hd + 1),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn model(p_intra: f64, p_inter: f64) -> ErrorModel {
        ErrorModel::new(p_intra, p_inter).unwrap()
    }

    #[test]
    fn error_model_rejects_degenerate_probabilities() {
        for (a, b) in [(0.0, 0.5), (0.5, 1.0), (-0.1, 0.2), (0.2, f64::NAN)] {
            assert!(ErrorModel::new(a, b).is_err(), "{a} {b}");
        }
        assert!(model(0.3, 0.2).ensure_separable().is_err());
        assert!(model(0.2, 0.2).ensure_separable().is_err());
        assert!(model(0.1, 0.2).ensure_separable().is_ok());
    }

    #[test]
    fn frr_examples() {
        let m = model(0.0926, 0.1578);
        let v = frr(&m, 551, 68).unwrap().log10();
        assert!((v - -2.00).abs() <= 0.02, "{v}");
        // full mass: nothing reaches n + 1
        assert_eq!(frr(&model(0.37, 0.5), 1, 2).unwrap(), 0.0);
        // P(B(4, 1/2) >= 2) = 11/16
        let v = frr(&model(0.5, 0.6), 4, 2).unwrap();
        assert!((v - 0.6875).abs() < 1e-15);
        assert!(frr(&m, 4, 6).is_err());
    }

    #[test]
    fn far_examples() {
        let m = model(0.0926, 0.1578);
        let v = far(&m, 551, 68).unwrap().log10();
        assert!((v - -2.01).abs() <= 0.02, "{v}");
        let near_one = model(0.5, 1.0 - 1e-12);
        assert!(far(&near_one, 1, 1).unwrap() < 1e-11);
        assert_eq!(far(&near_one, 1, 0).unwrap(), 0.0);
        // P(B(4, 1/2) < 2) = 5/16
        let v = far(&model(0.4, 0.5), 4, 2).unwrap();
        assert!((v - 0.3125).abs() < 1e-15);
        assert!(far(&m, 0, 0).is_err());
    }

    #[test]
    fn eer_search_reproduces_table_thresholds() {
        assert_eq!(eer_search(&model(0.0926, 0.1578), 551).unwrap().n_th, 68);
        assert_eq!(eer_search(&model(0.2070, 0.2545), 1706).unwrap().n_th, 393);
    }

    #[test]
    fn eer_search_on_identical_distributions() {
        for n in [1u64, 2, 17, 100, 1000] {
            for p in [0.05, 0.3, 0.5, 0.77] {
                let op = eer_search(&model(p, p), n).unwrap();
                assert!(op.eer() >= 0.5 - f64::powi(2.0, -20), "n={n} p={p}");
            }
        }
    }

    #[test]
    fn eer_search_matches_exhaustive_argmin() {
        for (pi, pe) in [(0.0926, 0.1578), (0.2, 0.4), (0.45, 0.55), (0.01, 0.9)] {
            let m = model(pi, pe);
            for n in (1..120).chain([300, 551]) {
                let brute = (0..=n)
                    .map(|t| point(&m, n, t))
                    .fold(None::<OperatingPoint>, |best, op| match best {
                        Some(b) if b.eer() <= op.eer() => Some(b),
                        _ => Some(op),
                    })
                    .unwrap();
                assert_eq!(eer_search(&m, n).unwrap(), brute, "p=({pi},{pe}) n={n}");
            }
        }
    }

    #[test]
    fn incremental_scan_agrees_with_eer_search() {
        let m = model(0.1755, 0.2284);
        let mut scan = EerScan::new(&m);
        for n in 1..=1300 {
            assert_eq!(scan.at(n), eer_search(&m, n).unwrap(), "n={n}");
        }
    }

    // (n, n_eer) below come from an independent brute-force scan in SciPy
    // (binom.sf / binom.cdf, every n from 1) at the printed estimators.
    #[test]
    fn minimal_n_examples() {
        let plan = minimal_n(&model(0.0926, 0.1578), 1e-3).unwrap();
        assert_eq!((plan.n, plan.n_eer), (974, 120));
        let plan = minimal_n(&model(0.1498, 0.2087), 1e-3).unwrap();
        assert_eq!((plan.n, plan.n_eer), (1616, 288));
        let plan = minimal_n(&model(0.1755, 0.2284), 1e-4).unwrap();
        assert_eq!((plan.n, plan.n_eer), (3176, 639));
    }

    #[test]
    fn minimal_n_is_certified_minimal() {
        let m = model(0.1755, 0.2284);
        let plan = minimal_n(&m, 1e-2).unwrap();
        assert_eq!(plan.n, 1246);
        assert!(plan.eer < 1e-2);
        for n in 1..plan.n {
            assert!(eer_search(&m, n).unwrap().eer() >= 1e-2, "n={n}");
        }
        // the saw-tooth: 1246 clears the target but the next four lengths do not
        for n in 1247..=1250 {
            assert!(eer_search(&m, n).unwrap().eer() >= 1e-2, "n={n}");
        }
    }

    #[test]
    fn minimal_n_errors() {
        let m = model(0.0926, 0.1578);
        assert!(matches!(
            minimal_n_with_ceiling(&m, 1e-3, 500),
            Err(DetectionError::Infeasible { ceiling: 500, .. })
        ));
        assert!(matches!(minimal_n(&m, 0.5), Err(DetectionError::Target(_))));
        assert!(matches!(minimal_n(&m, 0.0), Err(DetectionError::Target(_))));
        assert!(matches!(
            minimal_n(&model(0.3, 0.2), 1e-3),
            Err(DetectionError::NotSeparable { .. })
        ));
    }

    #[test]
    fn plan_table_examples() {
        assert!(plan_table(&[], &[1e-2, 1e-3]).is_empty());
        let rows = vec![
            ("22.1".to_string(), model(0.0926, 0.1578)),
            ("bad".to_string(), model(0.3, 0.2)),
        ];
        let cells = plan_table(&rows, &[1e-2, 1e-3, 1e-4]);
        assert_eq!(cells.len(), 6);
        let got: Vec<(u64, u64)> = cells[..3]
            .iter()
            .map(|c| {
                let p = c.outcome.as_ref().unwrap();
                (p.n, p.n_eer)
            })
            .collect();
        assert_eq!(got, vec![(551, 68), (974, 120), (1406, 173)]);
        assert!(cells[3..].iter().all(|c| c.outcome.is_err()));
        assert_eq!(cells[4].target, 1e-3);
    }

    #[test]
    fn classify_examples() {
        let m = model(0.0926, 0.1578);
        let r = ResponseVector::from_fn(551, |i| i % 3 == 0).unwrap();
        let c = classify(&r, &r, 68, &m).unwrap();
        assert_eq!((c.verdict, c.hd), (Verdict::New, 0));
        assert_eq!(c.fresh_tail, 1.0);

        let flips: Vec<usize> = (0..69).collect();
        let c = classify(&r, &r.with_flipped(&flips), 68, &m).unwrap();
        assert_eq!((c.verdict, c.hd), (Verdict::Recycled, 69));
        let c = classify(&r, &r.with_flipped(&flips[..67]), 68, &m).unwrap();
        assert_eq!(c.verdict, Verdict::New);

        let flips: Vec<usize> = (0..120).map(|k| k * 4).collect();
        let c = classify(&r, &r.with_flipped(&flips), 68, &m).unwrap();
        assert_eq!((c.verdict, c.hd, c.n), (Verdict::Recycled, 120, 551));
        assert!(c.fresh_tail < 1e-12 && c.aged_tail > 0.9);

        let short = ResponseVector::zeros(550).unwrap();
        assert!(classify(&r, &short, 68, &m).is_err());
    }

    proptest! {
        #[test]
        fn tails_are_monotone_in_threshold(
            pi in 0.001f64..0.999, pe in 0.001f64..0.999, n in 1u64..=512
        ) {
            let m = model(pi, pe);
            let mut prev_far = -1.0;
            let mut prev_frr = 2.0;
            for t in 0..=n + 1 {
                let fa = far(&m, n, t).unwrap();
                let fr = frr(&m, n, t).unwrap();
                // tails are accurate to about 1e-13 relative, so allow that much jitter
                prop_assert!(fa >= prev_far * (1.0 - 1e-12) && fr <= prev_frr * (1.0 + 1e-12));
                prev_far = fa;
                prev_frr = fr;
            }
        }

        #[test]
        fn threshold_endpoints(pi in 0.001f64..0.999, pe in 0.001f64..0.999, n in 1u64..=512) {
            let m = model(pi, pe);
            prop_assert_eq!(far(&m, n, 0).unwrap(), 0.0);
            prop_assert_eq!(frr(&m, n, 0).unwrap(), 1.0);
            prop_assert_eq!(far(&m, n, n + 1).unwrap(), 1.0);
            prop_assert_eq!(frr(&m, n, n + 1).unwrap(), 0.0);
            let tol = 1e-12;
            let want_far = (1.0 - pe).powi(n as i32);
            let want_frr = 1.0 - (1.0 - pi).powi(n as i32);
            prop_assert!((far(&m, n, 1).unwrap() - want_far).abs() <= tol * want_far.max(1e-300));
            prop_assert!((frr(&m, n, 1).unwrap() - want_frr).abs() <= tol);
        }

        #[test]
        fn equal_estimators_make_errors_complementary(p in 0.001f64..0.999, n in 1u64..=512, t in 0u64..=513) {
            let t = t.min(n + 1);
            let m = model(p, p);
            let s = far(&m, n, t).unwrap() + frr(&m, n, t).unwrap();
            prop_assert!((s - 1.0).abs() < 1e-12, "{}", s);
        }
    }
}
