//! The disjoint-conjunction lower-bound experiment.
//!
//! Two monotone conjunctions on disjoint blocks of `2ρ` variables are
//! indistinguishable from a sample that both label all-zero. Each trial picks
//! one uniformly as target, draws `m = 2^{⌈κρ⌉}` uniform points, runs a
//! learner and measures `R^E_ρ(h, c)` exactly.

use std::fmt::Write as _;

use rand::Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::concepts::{AnyConcept, Concept, MonotoneConjunction};
use crate::distributions::{Distribution, LabeledSample};
use crate::error::{Error, Result};
use crate::hypercube::PointSet;
use crate::learners::{learn_decision_list, learn_monotone_conjunction};
use crate::risk::robust_risk_exact;
use crate::rng;

/// The expected-risk floor `5/48`.
pub const FLOOR: f64 = 5.0 / 48.0;

/// `c₁` on variables `0..2ρ`, `c₂` on `2ρ..4ρ`.
pub fn disjoint_conjunction_pair(
    n: usize,
    rho: usize,
) -> Result<(MonotoneConjunction, MonotoneConjunction)> {
    if rho == 0 {
        return Err(Error::invalid("rho must be at least 1"));
    }
    if 4 * rho > n {
        return Err(Error::invalid(format!(
            "need 4·rho ≤ n, got rho = {rho}, n = {n}"
        )));
    }
    Ok((
        MonotoneConjunction::new(n, 0..2 * rho)?,
        MonotoneConjunction::new(n, 2 * rho..4 * rho)?,
    ))
}

/// `(1 − 2^{−2ρ})^{2m}`.
pub fn allzero_probability(rho: usize, m: u64) -> f64 {
    let q = (-2.0 * rho as f64).exp2();
    match i32::try_from(2 * m) {
        Ok(e) => (1.0 - q).powi(e),
        Err(_) => (2.0 * m as f64 * (-q).ln_1p()).exp(),
    }
}

/// `ln 2 / (2 ln(2^{2ρ} / (2^{2ρ} − 1)))`: every `m` up to this keeps the
/// all-zero probability at least 1/2.
pub fn eq2_sample_threshold(rho: usize) -> f64 {
    let q = (-2.0 * rho as f64).exp2();
    std::f64::consts::LN_2 / (2.0 * -(-q).ln_1p())
}

/// `2^{⌈κρ⌉}`.
pub fn sample_size(kappa: f64, rho: usize) -> u64 {
    let e = (kappa * rho as f64 - 1e-12).ceil().max(0.0) as u32;
    1u64 << e
}

/// Empirical frequency of the all-zero event over `sims` samples of size `m`,
/// simulation `i` using stream `i` of `seed`.
pub fn simulate_allzero_frequency(rho: usize, m: u64, sims: u64, seed: u64) -> Result<f64> {
    if rho == 0 || 4 * rho > 64 {
        return Err(Error::invalid(format!("rho must lie in 1..=16, got {rho}")));
    }
    let block = (1u64 << (2 * rho)) - 1;
    let hits: u64 = (0..sims)
        .into_par_iter()
        .map(|i| {
            let mut r = rng::stream(seed, i);
            let all_zero = (0..m).all(|_| {
                let x: u64 = r.gen();
                x & block != block && (x >> (2 * rho)) & block != block
            });
            all_zero as u64
        })
        .sum();
    Ok(hits as f64 / sims as f64)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case", tag = "name")]
pub enum AttackedLearner {
    MonotoneConjunction,
    DecisionList {
        k: usize,
    },
    /// Returns the target itself.
    Oracle,
    /// Among `c₁`, `c₂`, constant 0, the candidate consistent with the sample
    /// with least posterior expected risk under the uniform prior.
    Bayes,
}

impl std::str::FromStr for AttackedLearner {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "monconj" | "monotone-conjunction" => Ok(AttackedLearner::MonotoneConjunction),
            "oracle" => Ok(AttackedLearner::Oracle),
            "bayes" => Ok(AttackedLearner::Bayes),
            _ => match s.strip_prefix("dl") {
                Some(k) => k
                    .trim_start_matches(':')
                    .parse()
                    .ok()
                    .filter(|&k| k >= 1)
                    .map(|k| AttackedLearner::DecisionList { k })
                    .ok_or_else(|| Error::invalid(format!("bad learner {s:?}; use dl1, dl2, ..."))),
                None => Err(Error::invalid(format!("unknown learner {s:?}"))),
            },
        }
    }
}

impl AttackedLearner {
    pub fn label(&self) -> String {
        match self {
            AttackedLearner::MonotoneConjunction => "monconj".into(),
            AttackedLearner::DecisionList { k } => format!("dl{k}"),
            AttackedLearner::Oracle => "oracle".into(),
            AttackedLearner::Bayes => "bayes".into(),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct LowerBoundConfig {
    pub n: usize,
    pub rho: usize,
    pub kappa: f64,
    pub trials: u64,
    pub learner: AttackedLearner,
    pub seed: u64,
}

impl LowerBoundConfig {
    pub fn validate(&self) -> Result<()> {
        PointSet::check_cap(self.n)?;
        disjoint_conjunction_pair(self.n, self.rho)?;
        if !(self.kappa > 0.0 && self.kappa < 2.0) {
            return Err(Error::invalid(format!(
                "kappa must lie in (0, 2), got {}",
                self.kappa
            )));
        }
        if self.trials == 0 {
            return Err(Error::invalid("trials must be at least 1"));
        }
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct TrialRow {
    pub trial: u64,
    /// Index of the target, 1 or 2.
    pub target: u8,
    pub allzero: bool,
    pub robust_risk: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct LowerBoundReport {
    pub config: LowerBoundConfig,
    pub m: u64,
    pub allzero_freq: f64,
    pub allzero_exact: f64,
    /// Binomial standard deviation of `allzero_freq` at `allzero_exact`.
    pub allzero_sigma: f64,
    pub mean_robust_risk: f64,
    pub floor: f64,
    pub pass: bool,
    /// Exact `R^E_ρ(c₁, c₂)` and its lower bound `(1 − 2^{−2ρ})/2`.
    pub pair_robust_risk: f64,
    pub pair_floor: f64,
    /// `R_ρ(c₁,c₂) ≤ R_ρ(h,c₁) + R_ρ(h,c₂)` held in every trial.
    pub triangle_holds: bool,
    /// On all-zero samples the output did not depend on the target.
    pub symmetric_on_allzero: bool,
    pub eq2_threshold: f64,
    #[serde(skip)]
    pub rows: Vec<TrialRow>,
}

impl LowerBoundReport {
    pub fn to_csv(&self) -> String {
        let mut s = String::from("trial,seed,target,m,allzero,robust_risk\n");
        for r in &self.rows {
            writeln!(
                s,
                "{},{},{},{},{},{}",
                r.trial, self.config.seed, r.target, self.m, r.allzero as u8, r.robust_risk
            )
            .expect("string write");
        }
        s
    }
}

struct Setup {
    c: [MonotoneConjunction; 2],
    zero: AnyConcept,
    /// `risk[g][t]` for candidates `g ∈ {c₁, c₂, 0}` against targets `t`.
    risk: [[f64; 2]; 3],
}

impl Setup {
    fn candidate(&self, g: usize) -> AnyConcept {
        match g {
            0 | 1 => AnyConcept::Monotone(self.c[g].clone()),
            _ => self.zero.clone(),
        }
    }

    fn bayes(&self, sample: &LabeledSample) -> AnyConcept {
        let consistent = |h: &dyn Concept| sample.iter().all(|(p, l)| h.eval_raw(p.bits()) == l);
        let alive: Vec<bool> = (0..2).map(|t| consistent(&self.c[t])).collect();
        let live = alive.iter().filter(|&&a| a).count().max(1) as f64;
        let mut best: Option<(usize, f64)> = None;
        for g in 0..3 {
            if !consistent(&self.candidate(g)) {
                continue;
            }
            let e: f64 = (0..2)
                .filter(|&t| alive[t])
                .map(|t| self.risk[g][t])
                .sum::<f64>()
                / live;
            if best.is_none_or(|(_, b)| e < b) {
                best = Some((g, e));
            }
        }
        // a realizable sample is consistent with its target, so `best` is set
        self.candidate(best.map_or(2, |(g, _)| g))
    }

    fn run(
        &self,
        learner: AttackedLearner,
        sample: &LabeledSample,
        target: usize,
        n: usize,
    ) -> Result<AnyConcept> {
        Ok(match learner {
            AttackedLearner::MonotoneConjunction => {
                AnyConcept::Monotone(learn_monotone_conjunction(sample, n)?)
            }
            AttackedLearner::DecisionList { k } => {
                AnyConcept::DecisionList(learn_decision_list(sample, n, k)?)
            }
            AttackedLearner::Oracle => AnyConcept::Monotone(self.c[target].clone()),
            AttackedLearner::Bayes => self.bayes(sample),
        })
    }
}

struct TrialResult {
    row: TrialRow,
    triangle: bool,
    symmetric: bool,
}

pub fn run_lowerbound_experiment(cfg: &LowerBoundConfig) -> Result<LowerBoundReport> {
    cfg.validate()?;
    let n = cfg.n;
    let rho = cfg.rho;
    let (c1, c2) = disjoint_conjunction_pair(n, rho)?;
    let uniform = Distribution::uniform(n)?;
    let zero = AnyConcept::Constant { n, value: false };
    let mut risk = [[0.0; 2]; 3];
    for (g, h) in [
        AnyConcept::Monotone(c1.clone()),
        AnyConcept::Monotone(c2.clone()),
        zero.clone(),
    ]
    .iter()
    .enumerate()
    {
        for (t, c) in [&c1, &c2].into_iter().enumerate() {
            risk[g][t] = robust_risk_exact(h, c, rho, &uniform)?.value;
        }
    }
    let pair_robust_risk = risk[0][1];
    let setup = Setup {
        c: [c1, c2],
        zero,
        risk,
    };
    let m = sample_size(cfg.kappa, rho);

    let results = (0..cfg.trials)
        .into_par_iter()
        .map(|trial| -> Result<TrialResult> {
            let mut r = rng::stream(cfg.seed, trial);
            let target = r.gen_range(0..2usize);
            let points = uniform.sample_with(m as usize, &mut r);
            let sample = LabeledSample::label(points, &setup.c[target])?;
            let h = setup.run(cfg.learner, &sample, target, n)?;
            let allzero = sample
                .points
                .iter()
                .all(|p| !setup.c[0].eval_raw(p.bits()) && !setup.c[1].eval_raw(p.bits()));
            let to_target = robust_risk_exact(&h, &setup.c[target], rho, &uniform)?.value;
            let to_other = robust_risk_exact(&h, &setup.c[1 - target], rho, &uniform)?.value;
            let symmetric = !allzero || {
                let swapped = LabeledSample::label(sample.points.clone(), &setup.c[1 - target])?;
                setup.run(cfg.learner, &swapped, 1 - target, n)? == h
            };
            Ok(TrialResult {
                row: TrialRow {
                    trial,
                    target: target as u8 + 1,
                    allzero,
                    robust_risk: to_target,
                },
                triangle: pair_robust_risk <= to_target + to_other + 1e-12,
                symmetric,
            })
        })
        .collect::<Result<Vec<_>>>()?;

    let trials = cfg.trials as f64;
    let allzero_count = results.iter().filter(|t| t.row.allzero).count() as f64;
    let mean_robust_risk =
        crate::compensated_sum(results.iter().map(|t| t.row.robust_risk)) / trials;
    let allzero_exact = allzero_probability(rho, m);
    Ok(LowerBoundReport {
        config: *cfg,
        m,
        allzero_freq: allzero_count / trials,
        allzero_exact,
        allzero_sigma: (allzero_exact * (1.0 - allzero_exact) / trials).sqrt(),
        mean_robust_risk,
        floor: FLOOR,
        pass: mean_robust_risk > FLOOR,
        pair_robust_risk,
        pair_floor: (1.0 - (-2.0 * rho as f64).exp2()) / 2.0,
        triangle_holds: results.iter().all(|t| t.triangle),
        symmetric_on_allzero: results.iter().all(|t| t.symmetric),
        eq2_threshold: eq2_sample_threshold(rho),
        rows: results.into_iter().map(|t| t.row).collect(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn pair_construction() {
        let (c1, c2) = disjoint_conjunction_pair(8, 2).unwrap();
        assert_eq!(c1.vars(), vec![0, 1, 2, 3]);
        assert_eq!(c2.vars(), vec![4, 5, 6, 7]);
        for n in 4..=20 {
            for rho in 1..=n / 4 {
                let (a, b) = disjoint_conjunction_pair(n, rho).unwrap();
                assert_eq!(a.mask() & b.mask(), 0);
                assert_eq!((a.len(), b.len()), (2 * rho, 2 * rho));
            }
        }
        assert!(disjoint_conjunction_pair(7, 2).is_err());
        assert!(disjoint_conjunction_pair(8, 0).is_err());
    }

    #[test]
    fn allzero_values() {
        assert_eq!(allzero_probability(3, 0), 1.0);
        assert_eq!(allzero_probability(1, 1), 0.5625);
        assert!((allzero_probability(2, 8) - (15.0f64 / 16.0).powi(16)).abs() < 1e-15);
        assert!((allzero_probability(2, 8) - 0.35607).abs() < 1e-5);
        let big = allzero_probability(10, 1 << 40);
        assert!((0.0..1e-300).contains(&big));
    }

    #[test]
    fn eq2_threshold_values() {
        let t1 = eq2_sample_threshold(1);
        assert!((t1 - std::f64::consts::LN_2 / (2.0 * (4.0f64 / 3.0).ln())).abs() < 1e-12);
        assert!((t1 - 1.2047).abs() < 1e-4);
        for rho in 1..=12 {
            let t = eq2_sample_threshold(rho);
            for m in 0..=t.floor() as u64 {
                assert!(allzero_probability(rho, m) >= 0.5);
            }
        }
        let t3 = eq2_sample_threshold(3);
        assert!((t3 - 22.0).abs() < 0.2);
        assert!(2f64.powf(1.7 * 3.0) > t3);
    }

    #[test]
    fn threshold_tail_decreases() {
        let v: Vec<f64> = (4..=20)
            .map(|rho| 2f64.powf(1.5 * rho as f64) * -(-(-2.0 * rho as f64).exp2()).ln_1p())
            .collect();
        assert!(v.windows(2).all(|w| w[1] < w[0]));
    }

    #[test]
    fn sample_sizes() {
        assert_eq!(sample_size(1.5, 3), 32);
        assert_eq!(sample_size(1.0, 3), 8);
        assert_eq!(sample_size(1.7, 6), 1 << 11);
    }

    #[test]
    fn oracle_learner_has_zero_risk() {
        let cfg = LowerBoundConfig {
            n: 8,
            rho: 2,
            kappa: 1.0,
            trials: 40,
            learner: AttackedLearner::Oracle,
            seed: 5,
        };
        let rep = run_lowerbound_experiment(&cfg).unwrap();
        assert_eq!(rep.mean_robust_risk, 0.0);
        assert!(!rep.pass);
        assert_eq!(rep.rows.len(), 40);
        assert!(rep.triangle_holds);
    }

    #[test]
    fn experiment_is_deterministic() {
        let cfg = LowerBoundConfig {
            n: 8,
            rho: 2,
            kappa: 1.5,
            trials: 64,
            learner: AttackedLearner::MonotoneConjunction,
            seed: 9,
        };
        let a = run_lowerbound_experiment(&cfg).unwrap();
        let b = run_lowerbound_experiment(&cfg).unwrap();
        assert_eq!(a, b);
        assert_eq!(a.to_csv(), b.to_csv());
        assert!(a.symmetric_on_allzero && a.triangle_holds);
        assert!(a.pair_robust_risk >= a.pair_floor);
    }

    #[test]
    fn learner_names() {
        assert_eq!(
            "dl2".parse::<AttackedLearner>().unwrap(),
            AttackedLearner::DecisionList { k: 2 }
        );
        assert_eq!(
            "monconj".parse::<AttackedLearner>().unwrap(),
            AttackedLearner::MonotoneConjunction
        );
        assert!("dl0".parse::<AttackedLearner>().is_err());
        assert!("svm".parse::<AttackedLearner>().is_err());
    }

    #[test]
    fn bayes_prefers_a_consistent_conjunction() {
        let cfg = LowerBoundConfig {
            n: 8,
            rho: 2,
            kappa: 1.0,
            trials: 50,
            learner: AttackedLearner::Bayes,
            seed: 1,
        };
        let rep = run_lowerbound_experiment(&cfg).unwrap();
        assert!(rep.symmetric_on_allzero);
        assert!(rep.mean_robust_risk <= rep.pair_robust_risk);
    }
}
