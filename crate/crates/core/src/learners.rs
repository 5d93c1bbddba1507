//! Proper learners for monotone conjunctions and k-decision lists, and the
//! robust wrapper that runs the k-DL learner at a tightened accuracy.

use rand::seq::index::sample as sample_indices;
use rand::Rng;
use serde::{Serialize, Serializer};

use crate::concepts::{
    AnyConcept, Concept, DecisionList, DlItem, Literal, MonotoneConjunction, Term,
};
use crate::distributions::LabeledSample;
use crate::error::{check_dim, Error, Result};
use crate::expansion::{theorem1_constants, ConstantsVariant};
use crate::hypercube::dim_mask;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum LearnMode {
    /// Learn at the tightened accuracy `ε₀` and report its sample requirement.
    Theory,
    /// Learn at the requested ε itself.
    Direct,
}

impl std::str::FromStr for LearnMode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "theory" => Ok(LearnMode::Theory),
            "direct" => Ok(LearnMode::Direct),
            other => Err(Error::invalid(format!("unknown learner mode {other:?}"))),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct LearnerConfig {
    pub k: usize,
    pub epsilon: f64,
    pub delta: f64,
    pub alpha: f64,
    pub mode: LearnMode,
    pub seed: u64,
}

impl LearnerConfig {
    pub fn validate(&self) -> Result<()> {
        if self.k == 0 {
            return Err(Error::invalid("width k must be at least 1"));
        }
        for (name, v) in [("epsilon", self.epsilon), ("delta", self.delta)] {
            if !(v > 0.0 && v < 0.5) {
                return Err(Error::invalid(format!(
                    "{name} must lie in (0, 1/2), got {v}"
                )));
            }
        }
        if !(self.alpha >= 1.0 && self.alpha.is_finite()) {
            return Err(Error::invalid(format!(
                "alpha must be at least 1, got {}",
                self.alpha
            )));
        }
        Ok(())
    }
}

fn as_text<S: Serializer>(h: &AnyConcept, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(&h.to_text())
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct LearnOutcome {
    #[serde(serialize_with = "as_text")]
    pub hypothesis: AnyConcept,
    pub sample_size_used: usize,
    /// `log₂ ε₀`, theory mode only.
    pub log2_epsilon0: Option<f64>,
    /// `log₂` of the consistent-learner sample requirement at the accuracy
    /// actually targeted.
    pub log2_required_sample_size: f64,
    pub requirement_met: bool,
    pub consistent_on_sample: bool,
}

fn sample_dim(sample: &LabeledSample, n: usize) -> Result<()> {
    match sample.dim() {
        Some(d) => check_dim(n, d),
        None => Ok(()),
    }
}

/// Training error count of `h` on `sample`.
pub fn training_errors<C: Concept + ?Sized>(h: &C, sample: &LabeledSample) -> usize {
    sample
        .iter()
        .filter(|(p, l)| h.eval_raw(p.bits()) != *l)
        .count()
}

/// The conjunction of every variable set in all positive examples; the full
/// conjunction when there are none.
pub fn learn_monotone_conjunction(sample: &LabeledSample, n: usize) -> Result<MonotoneConjunction> {
    sample_dim(sample, n)?;
    let mask = sample
        .iter()
        .filter(|(_, l)| *l)
        .fold(dim_mask(n), |acc, (p, _)| acc & p.bits());
    let h = MonotoneConjunction::from_mask(n, mask)?;
    if let Some((p, _)) = sample.iter().find(|(p, l)| !*l && h.eval_raw(p.bits())) {
        return Err(Error::Realizability(format!(
            "negative example {p} satisfies every consistent monotone conjunction"
        )));
    }
    Ok(h)
}

/// A candidate term as `(positive mask, negative mask)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
struct Cand {
    pos: u64,
    neg: u64,
}

impl Cand {
    #[inline]
    fn covers(self, bits: u64) -> bool {
        bits & self.pos == self.pos && bits & self.neg == 0
    }

    fn term(self, n: usize) -> Term {
        let lits = (0..n).filter_map(|v| {
            if (self.pos >> v) & 1 == 1 {
                Some(Literal::pos(v))
            } else if (self.neg >> v) & 1 == 1 {
                Some(Literal::neg(v))
            } else {
                None
            }
        });
        Term::new(lits).expect("distinct variables")
    }
}

/// Terms of width `0..=k`: ascending width, then variable combinations in
/// lexicographic order, then sign patterns counting up from all-positive.
fn candidate_terms(n: usize, k: usize) -> Vec<Cand> {
    let mut out = vec![Cand { pos: 0, neg: 0 }];
    for w in 1..=k.min(n) {
        let mut combo: Vec<usize> = (0..w).collect();
        loop {
            for signs in 0u64..(1 << w) {
                let mut pos = 0;
                let mut neg = 0;
                for (j, &v) in combo.iter().enumerate() {
                    if (signs >> (w - 1 - j)) & 1 == 1 {
                        neg |= 1u64 << v;
                    } else {
                        pos |= 1u64 << v;
                    }
                }
                out.push(Cand { pos, neg });
            }
            // next combination
            let mut i = w;
            while i > 0 && combo[i - 1] == n - w + i - 1 {
                i -= 1;
            }
            if i == 0 {
                break;
            }
            combo[i - 1] += 1;
            for j in i..w {
                combo[j] = combo[j - 1] + 1;
            }
        }
    }
    out
}

/// Rivest's greedy k-DL learner with deterministic tie-breaking.
pub fn learn_decision_list(sample: &LabeledSample, n: usize, k: usize) -> Result<DecisionList> {
    sample_dim(sample, n)?;
    if k == 0 {
        return Err(Error::invalid("width k must be at least 1"));
    }
    if sample.is_empty() {
        return DecisionList::constant(n, k, false);
    }
    let cands = candidate_terms(n, k);
    let mut remaining: Vec<(u64, bool)> = sample.iter().map(|(p, l)| (p.bits(), l)).collect();
    let mut items = Vec::new();
    while !remaining.is_empty() {
        let found = cands.iter().find_map(|&c| {
            let mut label = None;
            for &(b, l) in &remaining {
                if c.covers(b) {
                    match label {
                        None => label = Some(l),
                        Some(prev) if prev != l => return None,
                        _ => {}
                    }
                }
            }
            label.map(|l| (c, l))
        });
        let (c, output) = found.ok_or_else(|| {
            Error::Realizability(format!(
                "no width-{k} term separates the {} remaining examples",
                remaining.len()
            ))
        })?;
        items.push(DlItem {
            term: c.term(n),
            output,
        });
        remaining.retain(|&(b, _)| !c.covers(b));
    }
    if !items.last().expect("non-empty").term.is_truth() {
        items.push(DlItem {
            term: Term::truth(),
            output: false,
        });
    }
    DecisionList::new(n, k, items)
}

/// `log₂ ε₀` together with the pair-count estimate behind the union bound.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct Epsilon0 {
    /// `log₂(16ε / (e⁴ n^{2k+2}))`.
    pub log2_inner: f64,
    pub log2_epsilon0: f64,
    /// `log₂(k² (en/k)^{2k})`.
    pub log2_pair_count: f64,
    /// `log₂(e⁴ n^{2k+2} / 16)`.
    pub log2_pair_bound: f64,
    pub pair_bound_holds: bool,
}

pub fn corollary1_epsilon0(eps: f64, n: usize, k: usize, alpha: f64) -> Result<Epsilon0> {
    if !(eps > 0.0 && eps < 0.5) {
        return Err(Error::invalid(format!(
            "epsilon must lie in (0, 1/2), got {eps}"
        )));
    }
    if n < 2 {
        return Err(Error::invalid(format!(
            "dimension must be at least 2, got {n}"
        )));
    }
    let b = theorem1_constants(k, alpha, ConstantsVariant::ExactRecurrence)?;
    let log2_e = std::f64::consts::LOG2_E;
    let ln = (n as f64).log2();
    let kf = k as f64;
    let log2_inner = (16.0 * eps).log2() - 4.0 * log2_e - (2.0 * kf + 2.0) * ln;
    let log2_epsilon0 = b.log2_c1 + b.c2 * log2_inner + (b.c3 * log2_inner).min(-b.c4 * ln);
    let log2_pair_count = 2.0 * kf.log2() + 2.0 * kf * (log2_e + ln - kf.log2());
    let log2_pair_bound = 4.0 * log2_e + (2.0 * kf + 2.0) * ln - 4.0;
    Ok(Epsilon0 {
        log2_inner,
        log2_epsilon0,
        log2_pair_count,
        log2_pair_bound,
        pair_bound_holds: log2_pair_count <= log2_pair_bound,
    })
}

/// `log₂` of `(1/ε)(ln|H| + ln(1/δ))` for the k-DL class, with the number of
/// candidate terms estimated by `T = k(en/k)^k` and `ln|H| ≤ T ln 3 + T ln T`.
pub fn log2_sample_requirement(log2_eps: f64, n: usize, k: usize, delta: f64) -> f64 {
    let kf = k as f64;
    let t = (kf * (std::f64::consts::E * n as f64 / kf).powf(kf)).max(1.0);
    let ln_h = t * 3f64.ln() + t * t.ln();
    -log2_eps + (ln_h + (1.0 / delta).ln()).log2()
}

/// Runs the k-DL learner and records the accuracy it is held to.
pub fn robust_learn(sample: &LabeledSample, n: usize, cfg: &LearnerConfig) -> Result<LearnOutcome> {
    cfg.validate()?;
    let h = learn_decision_list(sample, n, cfg.k)?;
    let log2_epsilon0 = match cfg.mode {
        LearnMode::Theory => {
            Some(corollary1_epsilon0(cfg.epsilon, n.max(2), cfg.k, cfg.alpha)?.log2_epsilon0)
        }
        LearnMode::Direct => None,
    };
    let target = log2_epsilon0.unwrap_or_else(|| cfg.epsilon.log2());
    let log2_required_sample_size = log2_sample_requirement(target, n, cfg.k, cfg.delta);
    let m = sample.len();
    Ok(LearnOutcome {
        consistent_on_sample: training_errors(&h, sample) == 0,
        hypothesis: AnyConcept::DecisionList(h),
        sample_size_used: m,
        log2_epsilon0,
        log2_required_sample_size,
        requirement_met: m > 0 && (m as f64).log2() >= log2_required_sample_size,
    })
}

/// A random k-DL with `len` non-default items of width `1..=k` and random
/// outputs, drawn from `rng`.
pub fn random_decision_list<R: Rng + ?Sized>(
    n: usize,
    k: usize,
    len: usize,
    rng: &mut R,
) -> Result<DecisionList> {
    if k == 0 || k > n {
        return Err(Error::invalid(format!(
            "width must lie in 1..={n}, got {k}"
        )));
    }
    let mut items = Vec::with_capacity(len + 1);
    for _ in 0..len {
        let w = rng.gen_range(1..=k);
        let vars = sample_indices(rng, n, w);
        let lits: Vec<Literal> = vars
            .iter()
            .map(|v| {
                if rng.gen() {
                    Literal::neg(v)
                } else {
                    Literal::pos(v)
                }
            })
            .collect();
        items.push(DlItem {
            term: Term::new(lits)?,
            output: rng.gen(),
        });
    }
    items.push(DlItem {
        term: Term::truth(),
        output: rng.gen(),
    });
    DecisionList::new(n, k, items)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::distributions::Distribution;
    use crate::hypercube::Point;
    use crate::rng;

    fn pts(v: &[&str]) -> Vec<Point> {
        v.iter().map(|s| s.parse().unwrap()).collect()
    }

    #[test]
    fn monotone_examples() {
        let s = LabeledSample::new(pts(&["111", "110"]), vec![true, true]).unwrap();
        assert_eq!(
            learn_monotone_conjunction(&s, 3).unwrap().vars(),
            vec![0, 1]
        );
        let s = LabeledSample::new(pts(&["0101", "0000"]), vec![false, false]).unwrap();
        assert_eq!(learn_monotone_conjunction(&s, 4).unwrap().len(), 4);
        let s = LabeledSample::new(pts(&["1111"]), vec![true]).unwrap();
        assert_eq!(learn_monotone_conjunction(&s, 4).unwrap().len(), 4);
        let empty = LabeledSample::new(vec![], vec![]).unwrap();
        assert_eq!(learn_monotone_conjunction(&empty, 5).unwrap().len(), 5);
    }

    #[test]
    fn monotone_flags_unrealizable() {
        let s = LabeledSample::new(pts(&["110", "111"]), vec![true, false]).unwrap();
        assert!(matches!(
            learn_monotone_conjunction(&s, 3),
            Err(Error::Realizability(_))
        ));
    }

    #[test]
    fn candidate_order() {
        let c = candidate_terms(3, 2);
        assert_eq!(c.len(), 1 + 6 + 3 * 4);
        assert_eq!(c[0], Cand { pos: 0, neg: 0 });
        assert_eq!(c[1], Cand { pos: 1, neg: 0 });
        assert_eq!(c[2], Cand { pos: 0, neg: 1 });
        // first width-2 term is x1 ∧ x2, then x1 ∧ ¬x2
        assert_eq!(c[7], Cand { pos: 0b011, neg: 0 });
        assert_eq!(
            c[8],
            Cand {
                pos: 0b001,
                neg: 0b010
            }
        );
        assert_eq!(candidate_terms(2, 5).len(), 1 + 4 + 4);
    }

    #[test]
    fn all_zero_labels_give_constant() {
        let s = LabeledSample::new(pts(&["101", "011"]), vec![false, false]).unwrap();
        let h = learn_decision_list(&s, 3, 2).unwrap();
        assert_eq!(h.len(), 1);
        assert!(!h.items()[0].output && h.items()[0].term.is_truth());
    }

    #[test]
    fn learns_width_two_conjunction_exactly() {
        let n = 10;
        let c = MonotoneConjunction::new(n, [0, 1]).unwrap();
        let all: Vec<Point> = (0..1u64 << n).map(|b| Point::new(n, b).unwrap()).collect();
        let s = LabeledSample::label(all.clone(), &c).unwrap();
        let h = learn_decision_list(&s, n, 2).unwrap();
        for p in &all {
            assert_eq!(h.eval_raw(p.bits()), c.eval_raw(p.bits()));
        }
        assert!(matches!(
            learn_decision_list(&s, n, 1),
            Ok(_) | Err(Error::Realizability(_))
        ));
    }

    #[test]
    fn consistent_on_random_realizable_samples() {
        let d = Distribution::uniform(9).unwrap();
        for t in 0..30 {
            let mut r = rng::stream(11, t);
            let c = random_decision_list(9, 2, 5, &mut r).unwrap();
            let s = LabeledSample::draw(&d, &c, 150, t).unwrap();
            let h = learn_decision_list(&s, 9, 2).unwrap();
            assert_eq!(training_errors(&h, &s), 0);
            assert!(h.width() <= 2);
        }
    }

    #[test]
    fn unrealizable_sample_is_flagged() {
        // parity on two variables is not a 1-DL
        let s = LabeledSample::new(
            pts(&["00", "01", "10", "11"]),
            vec![false, true, true, false],
        )
        .unwrap();
        assert!(matches!(
            learn_decision_list(&s, 2, 1),
            Err(Error::Realizability(_))
        ));
        assert!(learn_decision_list(&s, 2, 2).is_ok());
    }

    #[test]
    fn epsilon0_k1() {
        let e = corollary1_epsilon0(0.25, 8, 1, 1.0).unwrap();
        let inner = (16.0 * 0.25 / (1f64.exp().powi(4) * 8f64.powi(4))).log2();
        assert!((e.log2_inner - inner).abs() < 1e-12);
        assert!((e.log2_epsilon0 - (16.0 * inner).min(-12.0)).abs() < 1e-9);
        let mut last = f64::NEG_INFINITY;
        for &eps in &[0.01, 0.1, 0.3, 0.49] {
            let v = corollary1_epsilon0(eps, 8, 1, 1.0).unwrap().log2_epsilon0;
            assert!(v >= last);
            last = v;
        }
    }

    #[test]
    fn pair_count_bound() {
        for k in 1..=4 {
            for n in (k.max(2)..=1024).step_by(7) {
                assert!(
                    corollary1_epsilon0(0.1, n, k, 1.0)
                        .unwrap()
                        .pair_bound_holds,
                    "k={k} n={n}"
                );
            }
        }
    }

    #[test]
    fn theory_mode_flags_requirement() {
        let d = Distribution::uniform(8).unwrap();
        let c = MonotoneConjunction::new(8, [1, 4]).unwrap();
        let s = LabeledSample::draw(&d, &c, 200, 3).unwrap();
        let cfg = LearnerConfig {
            k: 2,
            epsilon: 0.1,
            delta: 0.05,
            alpha: 1.0,
            mode: LearnMode::Theory,
            seed: 0,
        };
        let out = robust_learn(&s, 8, &cfg).unwrap();
        assert!(out.log2_epsilon0.unwrap() < -1000.0);
        assert!(!out.requirement_met);
        assert!(out.consistent_on_sample);
        let direct = robust_learn(
            &s,
            8,
            &LearnerConfig {
                mode: LearnMode::Direct,
                ..cfg
            },
        )
        .unwrap();
        assert!(direct.log2_epsilon0.is_none());
        assert!(direct.consistent_on_sample);
        assert_eq!(direct.hypothesis, out.hypothesis);
    }
}
