//! ρ-expansion of satisfying sets and the k-CNF expansion bound.
//!
//! All logarithms are base 2. Threshold arithmetic stays in log space: for
//! `k = 2, α = 1` the threshold is already below `2^-1024`.

use serde::Serialize;

use crate::concepts::{
    maximal_disjoint_clauses, restrict, satisfying_set, CnfFormula, Concept, Constant,
    DisjointClauses, PartialAssignment,
};
use crate::distributions::Distribution;
use crate::error::{check_dim, Error, Result};
use crate::hypercube::{ball, PointSet, EXACT_CAP};
use crate::numeric::hoeffding_radius;
use crate::risk::{robust_risk_mc, EstimateMode, McConfig};

/// `⌊log₂ n⌋`, the radius of a logarithmically bounded adversary.
pub fn log_radius(n: usize) -> usize {
    assert!(n >= 1, "dimension must be positive");
    (usize::BITS - 1 - n.leading_zeros()) as usize
}

fn check_epsilon(eps: f64) -> Result<()> {
    if !(eps > 0.0 && eps < 0.5) {
        return Err(Error::invalid(format!(
            "epsilon must lie in (0, 1/2), got {eps}"
        )));
    }
    Ok(())
}

fn check_alpha(alpha: f64) -> Result<()> {
    if !(alpha >= 1.0 && alpha.is_finite()) {
        return Err(Error::invalid(format!(
            "alpha must be at least 1, got {alpha}"
        )));
    }
    Ok(())
}

// Ceil/floor with slack so that exact integer results computed in floating
// point do not move by one.
const ROUNDING_SLACK: f64 = 1e-9;

fn ceil_slack(x: f64) -> u64 {
    (x - ROUNDING_SLACK).ceil().max(0.0) as u64
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ExpansionReport {
    pub s0: f64,
    pub s_rho: f64,
    pub rho: usize,
    pub mode: EstimateMode,
    pub trials: Option<u64>,
    pub confidence_radius: f64,
    pub disjoint_set_size: usize,
    /// `log₂` of the `A_{n,ε}` bound, when an ε was supplied.
    pub a_bound: Option<f64>,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub enum ExpansionMode {
    Exact,
    MonteCarlo(McConfig),
}

/// `S_0(φ)` and `S_ρ(φ) = Pr_{x∼D}[∃ z ∈ B_ρ(x) : z ⊨ φ]`.
pub fn s_rho(
    phi: &CnfFormula,
    radius: usize,
    dist: &Distribution,
    mode: ExpansionMode,
) -> Result<ExpansionReport> {
    check_dim(phi.dim(), dist.dim())?;
    if radius > phi.dim() {
        return Err(Error::invalid(format!(
            "radius {radius} exceeds dimension {}",
            phi.dim()
        )));
    }
    let disjoint_set_size = maximal_disjoint_clauses(phi).size();
    match mode {
        ExpansionMode::Exact => {
            let (s0, s) = exact_expansion(phi, radius, dist)?;
            Ok(ExpansionReport {
                s0,
                s_rho: s,
                rho: radius,
                mode: EstimateMode::Exact,
                trials: None,
                confidence_radius: 0.0,
                disjoint_set_size,
                a_bound: None,
            })
        }
        ExpansionMode::MonteCarlo(cfg) => {
            let never = Constant {
                n: phi.dim(),
                value: false,
            };
            // a disagreement with the constant-false function is a satisfying point
            let s0 = robust_risk_mc(phi, &never, 0, dist, &cfg)?;
            let s = robust_risk_mc(phi, &never, radius, dist, &cfg)?;
            Ok(ExpansionReport {
                s0: s0.value,
                s_rho: s.value,
                rho: radius,
                mode: EstimateMode::MonteCarlo,
                trials: Some(cfg.trials),
                confidence_radius: hoeffding_radius(cfg.trials, cfg.delta),
                disjoint_set_size,
                a_bound: None,
            })
        }
    }
}

/// Exact `(S_0, S_ρ)` for any concept.
pub fn exact_expansion<C: Concept + ?Sized>(
    phi: &C,
    radius: usize,
    dist: &Distribution,
) -> Result<(f64, f64)> {
    check_dim(phi.dim(), dist.dim())?;
    let sat = satisfying_set(phi)?;
    let s0 = dist.mass(&sat)?;
    let s = dist.mass(&sat.expand(radius))?;
    Ok((s0, s.max(s0)))
}

/// Largest `d` such that `S_0(φ) < threshold` certifies, for a conjunction
/// `φ` under an α-log-Lipschitz distribution, at least `d` literals:
/// `⌊−log_{1+α} threshold⌋`.
pub fn lemma1_min_length(alpha: f64, threshold: f64) -> Result<u64> {
    check_alpha(alpha)?;
    if !(threshold > 0.0 && threshold < 1.0) {
        return Err(Error::invalid(format!(
            "threshold must lie in (0, 1), got {threshold}"
        )));
    }
    let d = -threshold.log2() / (1.0 + alpha).log2();
    Ok((d + ROUNDING_SLACK).floor() as u64)
}

fn min_size(eps: f64, radius: usize, eta: f64) -> u64 {
    let by_eps = 4.0 / (eta * eta) * (1.0 / eps).log2();
    let by_rho = 2.0 * radius as f64 / eta;
    ceil_slack(by_eps.max(by_rho))
}

/// Conjunction length `⌈max{(4/η²) log(1/ε), 2ρ/η}⌉` with `η = 1/(1+α)`
/// beyond which `S_ρ ≤ ε`.
pub fn lemma2_min_d(eps: f64, radius: usize, alpha: f64) -> Result<u64> {
    check_epsilon(eps)?;
    check_alpha(alpha)?;
    Ok(min_size(eps, radius, 1.0 / (1.0 + alpha)))
}

/// Number of variable-disjoint clauses `⌈max{(4/η²) log(1/ε), 2ρ/η}⌉` with
/// `η = (1+α)^{-k}` beyond which a k-CNF has `S_ρ ≤ ε`.
pub fn lemma3_min_m(eps: f64, radius: usize, k: usize, alpha: f64) -> Result<u64> {
    check_epsilon(eps)?;
    check_alpha(alpha)?;
    if k == 0 {
        return Err(Error::invalid("clause width k must be at least 1"));
    }
    Ok(min_size(eps, radius, (1.0 + alpha).powi(-(k as i32))))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum ConstantsVariant {
    /// The four-term recurrence with level-dependent `η_i = (1+α)^{-i}`.
    ExactRecurrence,
    /// Closed forms from fixing `η = (1+α)^{-k}` at every level.
    DominatingClosedForm,
}

impl std::str::FromStr for ConstantsVariant {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "exact" | "exact-recurrence" => Ok(ConstantsVariant::ExactRecurrence),
            "closed" | "closed-form" | "dominating-closed-form" => {
                Ok(ConstantsVariant::DominatingClosedForm)
            }
            other => Err(Error::invalid(format!(
                "unknown constants variant {other:?}"
            ))),
        }
    }
}

/// `(C₁, C₂, C₃, C₄)` with `C₁` carried as `log₂ C₁`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct ConstantsBundle {
    pub k: usize,
    pub alpha: f64,
    pub eta: f64,
    pub log2_c1: f64,
    pub c2: f64,
    pub c3: f64,
    pub c4: f64,
    pub variant: ConstantsVariant,
}

impl ConstantsBundle {
    /// `log₂ C₁ + C₂ log₂ ε + min{C₃ log₂ ε, −C₄ log₂ n}`.
    pub fn log_threshold(&self, eps: f64, n: usize) -> Result<f64> {
        check_epsilon(eps)?;
        if n < 2 {
            return Err(Error::invalid(format!(
                "dimension must be at least 2, got {n}"
            )));
        }
        let le = eps.log2();
        let ln = (n as f64).log2();
        Ok(self.log2_c1 + self.c2 * le + (self.c3 * le).min(-self.c4 * ln))
    }

    /// True if `C₃ ≥ (η/2) C₄`.
    pub fn satisfies_c3_c4_invariant(&self) -> bool {
        self.c3 >= self.eta / 2.0 * self.c4
    }
}

pub fn theorem1_constants(
    k: usize,
    alpha: f64,
    variant: ConstantsVariant,
) -> Result<ConstantsBundle> {
    check_alpha(alpha)?;
    if k == 0 {
        return Err(Error::invalid("clause width k must be at least 1"));
    }
    let base = 1.0 + alpha;
    match variant {
        ConstantsVariant::ExactRecurrence => {
            let eta1 = 1.0 / base;
            let (mut log2_c1, mut c2, mut c3, mut c4) =
                (0.0f64, 0.0f64, 4.0 / (eta1 * eta1), 2.0 / eta1);
            let mut eta = eta1;
            for level in 2..=k {
                eta = base.powi(-(level as i32));
                let top = c2.max(c3);
                log2_c1 -= level as f64 * (c2 + c3);
                c2 += c3;
                c3 = 8.0 / (eta * eta) * top;
                c4 = 2.0 / eta * top;
            }
            Ok(ConstantsBundle {
                k,
                alpha,
                eta,
                log2_c1,
                c2,
                c3,
                c4,
                variant,
            })
        }
        ConstantsVariant::DominatingClosedForm => {
            let kf = k as f64;
            let eta = base.powi(-(k as i32));
            let q = 8.0 * base.powi(2 * k as i32);
            let q_km1 = q.powi(k as i32 - 1);
            Ok(ConstantsBundle {
                k,
                alpha,
                eta,
                log2_c1: -2.0 * kf * kf * q_km1,
                c2: 2.0 * q_km1,
                c3: q_km1 * q,
                c4: 2.0 * base.powi(k as i32) * q_km1,
                variant,
            })
        }
    }
}

pub fn theorem1_log_threshold(
    eps: f64,
    n: usize,
    k: usize,
    alpha: f64,
    variant: ConstantsVariant,
) -> Result<f64> {
    theorem1_constants(k, alpha, variant)?.log_threshold(eps, n)
}

/// The restrictions `φ'_a` over every assignment `a` of `I_𝓜`.
#[derive(Clone, Debug)]
pub struct Decomposition {
    pub disjoint: DisjointClauses,
    pub parts: Vec<(PartialAssignment, CnfFormula)>,
}

/// Largest `|I_𝓜|` for which [`decompose`] materializes all assignments.
pub const MAX_DECOMPOSITION_VARS: usize = EXACT_CAP;

pub fn decompose(phi: &CnfFormula) -> Result<Decomposition> {
    let disjoint = maximal_disjoint_clauses(phi);
    let width = disjoint.vars.len();
    if width > MAX_DECOMPOSITION_VARS {
        return Err(Error::CapExceeded {
            n: width,
            cap: MAX_DECOMPOSITION_VARS,
        });
    }
    let parts = (0..1u64 << width)
        .map(|pattern| {
            let a = PartialAssignment::from_pattern(&disjoint.vars, pattern);
            restrict(phi, &a).map(|r| (a, r))
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(Decomposition { disjoint, parts })
}

/// The `A_{n,ε}` size check: whenever `|𝓜| < M`,
/// `log₂|𝓐_𝓜| = |I_𝓜| ≤ k + max{(4/η²) log(1/ε), (2/η) log n}`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ABoundCheck {
    pub disjoint_set_size: usize,
    pub threshold_m: f64,
    pub log2_assignments: f64,
    pub log2_bound: f64,
    pub small_case: bool,
    pub holds: bool,
}

pub fn a_bound_check(phi: &CnfFormula, eps: f64, alpha: f64) -> Result<ABoundCheck> {
    check_epsilon(eps)?;
    check_alpha(alpha)?;
    let k = phi.width().max(1);
    let eta = (1.0 + alpha).powi(-(k as i32));
    let n = phi.dim().max(2) as f64;
    let by_eps = 4.0 / (eta * eta) * (1.0 / eps).log2();
    let by_n = 2.0 / eta * n.log2();
    let threshold_m = by_eps.max(by_n);
    let disjoint = maximal_disjoint_clauses(phi);
    let log2_assignments = disjoint.vars.len() as f64;
    let log2_bound = k as f64 + by_eps.max(by_n);
    let small_case = (disjoint.size() as f64) < threshold_m;
    Ok(ABoundCheck {
        disjoint_set_size: disjoint.size(),
        threshold_m,
        log2_assignments,
        log2_bound,
        small_case,
        holds: !small_case || log2_assignments <= log2_bound,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Verdict {
    Pass,
    Fail,
    /// The premise `S_0 < threshold` is unmet, so nothing was tested.
    Vacuous,
}

/// A size-triggered sufficient condition (conjunction length or disjoint
/// clause count) and whether its conclusion `S_ρ ≤ ε` held.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SizeLemmaCheck {
    pub size: u64,
    pub required: u64,
    pub applicable: bool,
    pub holds: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Theorem1Check {
    pub n: usize,
    pub k: usize,
    pub alpha: f64,
    pub epsilon: f64,
    pub rho: usize,
    pub s0: f64,
    pub s_rho: f64,
    pub log2_s0: f64,
    pub log2_threshold: f64,
    pub constants: ConstantsBundle,
    pub premise_met: bool,
    pub verdict: Verdict,
    /// Present when φ is a conjunction.
    pub conjunction_length: Option<SizeLemmaCheck>,
    pub disjoint_clauses: SizeLemmaCheck,
    pub a_bound: ABoundCheck,
}

impl Theorem1Check {
    /// Theorem verdict is not `Fail` and every applicable lemma held.
    pub fn consistent(&self) -> bool {
        self.verdict != Verdict::Fail
            && self.conjunction_length.as_ref().is_none_or(|c| c.holds)
            && self.disjoint_clauses.holds
            && self.a_bound.holds
    }
}

/// Checks the expansion bound on one formula at radius `ρ` (default
/// `⌊log₂ n⌋`), reporting a vacuous verdict when the premise is unmet.
pub fn verify_theorem1_on_instance(
    phi: &CnfFormula,
    dist: &Distribution,
    eps: f64,
    radius: Option<usize>,
    variant: ConstantsVariant,
) -> Result<Theorem1Check> {
    check_epsilon(eps)?;
    let n = phi.dim();
    PointSet::check_cap(n)?;
    let rho = radius.unwrap_or_else(|| log_radius(n)).min(n);
    let alpha = dist.log_lipschitz_constant()?;
    let k = phi.width().max(1);
    let constants = theorem1_constants(k, alpha, variant)?;
    let log2_threshold = constants.log_threshold(eps, n.max(2))?;
    let (s0, s) = exact_expansion(phi, rho, dist)?;
    let log2_s0 = if s0 > 0.0 {
        s0.log2()
    } else {
        f64::NEG_INFINITY
    };
    let premise_met = log2_s0 < log2_threshold;
    let within = s <= eps;
    let verdict = match (premise_met, within) {
        (false, _) => Verdict::Vacuous,
        (true, true) => Verdict::Pass,
        (true, false) => Verdict::Fail,
    };

    let conjunction_length = match phi.as_conjunction() {
        Some(conj) => {
            let required = lemma2_min_d(eps, rho, alpha)?;
            let size = conj.len() as u64;
            let applicable = size >= required;
            Some(SizeLemmaCheck {
                size,
                required,
                applicable,
                holds: !applicable || within,
            })
        }
        None => None,
    };
    let m = maximal_disjoint_clauses(phi).size() as u64;
    let required = lemma3_min_m(eps, rho, k, alpha)?;
    let disjoint_clauses = SizeLemmaCheck {
        size: m,
        required,
        applicable: m >= required,
        holds: m < required || within,
    };
    let a_bound = a_bound_check(phi, eps, alpha)?;

    Ok(Theorem1Check {
        n,
        k,
        alpha,
        epsilon: eps,
        rho,
        s0,
        s_rho: s,
        log2_s0,
        log2_threshold,
        constants,
        premise_met,
        verdict,
        conjunction_length,
        disjoint_clauses,
        a_bound,
    })
}

/// Points of `B_ρ(x)` satisfying φ, in ball order. Used by MC diagnostics.
pub fn satisfying_neighbors<'a>(
    phi: &'a CnfFormula,
    x: crate::hypercube::Point,
    radius: usize,
) -> impl Iterator<Item = crate::hypercube::Point> + 'a {
    ball(x, radius).filter(move |z| phi.eval_raw(z.bits()))
}
