//! Standard, exact-in-the-ball, and constant-in-the-ball risks.
//!
//! Exact values are masses of expanded disagreement sets. The Monte-Carlo
//! estimator draws `x ∼ D` and searches `B_ρ(x)` for a disagreement,
//! attaching a Hoeffding radius.

use rayon::prelude::*;
use serde::Serialize;

use crate::concepts::{disagreement_set, satisfying_set, Concept};
use crate::distributions::Distribution;
use crate::error::{check_dim, Error, Result};
use crate::hypercube::{ball, Point, PointSet};
use crate::numeric::hoeffding_radius;
use crate::rng;

/// Default number of ball points examined per Monte-Carlo draw.
pub const DEFAULT_SEARCH_BUDGET: u64 = 1_000_000;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum EstimateMode {
    Exact,
    MonteCarlo,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct RiskReport {
    pub value: f64,
    pub mode: EstimateMode,
    pub trials: Option<u64>,
    pub confidence_radius: f64,
    pub search_budget_exhausted: bool,
}

impl RiskReport {
    pub(crate) fn exact(value: f64) -> Self {
        RiskReport {
            value: value.clamp(0.0, 1.0),
            mode: EstimateMode::Exact,
            trials: None,
            confidence_radius: 0.0,
            search_budget_exhausted: false,
        }
    }
}

fn check_pair<H, C>(h: &H, c: &C, dist: &Distribution) -> Result<usize>
where
    H: Concept + ?Sized,
    C: Concept + ?Sized,
{
    check_dim(c.dim(), h.dim())?;
    check_dim(c.dim(), dist.dim())?;
    Ok(c.dim())
}

fn check_radius(n: usize, radius: usize) -> Result<()> {
    if radius > n {
        return Err(Error::invalid(format!(
            "radius {radius} exceeds dimension {n}"
        )));
    }
    Ok(())
}

/// `Pr_{x∼D}[h(x) ≠ c(x)]`.
pub fn standard_risk<H, C>(h: &H, c: &C, dist: &Distribution) -> Result<RiskReport>
where
    H: Concept + ?Sized,
    C: Concept + ?Sized,
{
    robust_risk_exact(h, c, 0, dist)
}

/// `R^E_ρ(h, c) = Pr_{x∼D}[∃ z ∈ B_ρ(x) : h(z) ≠ c(z)]`.
pub fn robust_risk_exact<H, C>(
    h: &H,
    c: &C,
    radius: usize,
    dist: &Distribution,
) -> Result<RiskReport>
where
    H: Concept + ?Sized,
    C: Concept + ?Sized,
{
    let n = check_pair(h, c, dist)?;
    check_radius(n, radius)?;
    let dis = disagreement_set(h, c)?;
    robust_risk_of_disagreement(&dis, radius, dist)
}

/// Exact robust risk given a precomputed disagreement set.
pub fn robust_risk_of_disagreement(
    dis: &PointSet,
    radius: usize,
    dist: &Distribution,
) -> Result<RiskReport> {
    check_radius(dis.dim(), radius)?;
    Ok(RiskReport::exact(dist.mass(&dis.expand(radius))?))
}

/// `R^C_ρ(h, c) = Pr_{x∼D}[∃ z ∈ B_ρ(x) : h(z) ≠ c(x)]`.
pub fn constant_in_ball_risk_exact<H, C>(
    h: &H,
    c: &C,
    radius: usize,
    dist: &Distribution,
) -> Result<RiskReport>
where
    H: Concept + ?Sized,
    C: Concept + ?Sized,
{
    let n = check_pair(h, c, dist)?;
    check_radius(n, radius)?;
    let h_true = satisfying_set(h)?;
    let c_true = satisfying_set(c)?;
    let near_h_false = h_true.complement().expand(radius);
    let near_h_true = h_true.expand(radius);
    let bad = c_true
        .intersection(&near_h_false)?
        .union(&c_true.complement().intersection(&near_h_true)?)?;
    Ok(RiskReport::exact(dist.mass(&bad)?))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "outcome", content = "point", rename_all = "kebab-case")]
pub enum SearchOutcome {
    Found(Point),
    /// The whole ball was scanned without a witness.
    Absent,
    /// The budget ran out before the ball was covered.
    Truncated,
}

/// Scans `B_ρ(x)` by increasing distance for `z` with `h(z) ≠ c(z)`,
/// examining at most `budget` points.
pub fn adversarial_example_search<H, C>(
    x: &Point,
    h: &H,
    c: &C,
    radius: usize,
    budget: u64,
) -> Result<SearchOutcome>
where
    H: Concept + ?Sized,
    C: Concept + ?Sized,
{
    check_dim(c.dim(), h.dim())?;
    check_dim(c.dim(), x.dim())?;
    if budget == 0 {
        return Err(Error::invalid("search budget must be at least 1"));
    }
    Ok(search_unchecked(x, h, c, radius, budget))
}

fn search_unchecked<H, C>(x: &Point, h: &H, c: &C, radius: usize, budget: u64) -> SearchOutcome
where
    H: Concept + ?Sized,
    C: Concept + ?Sized,
{
    for (examined, z) in ball(*x, radius).enumerate() {
        if examined as u64 >= budget {
            return SearchOutcome::Truncated;
        }
        if h.eval_raw(z.bits()) != c.eval_raw(z.bits()) {
            return SearchOutcome::Found(z);
        }
    }
    SearchOutcome::Absent
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct McConfig {
    pub trials: u64,
    pub delta: f64,
    pub seed: u64,
    pub budget: u64,
}

impl McConfig {
    pub fn new(trials: u64, delta: f64, seed: u64) -> Self {
        McConfig {
            trials,
            delta,
            seed,
            budget: DEFAULT_SEARCH_BUDGET,
        }
    }

    fn validate(&self) -> Result<()> {
        if self.trials == 0 {
            return Err(Error::invalid("trials must be at least 1"));
        }
        if !(self.delta > 0.0 && self.delta < 1.0) {
            return Err(Error::invalid(format!(
                "delta must lie in (0, 1), got {}",
                self.delta
            )));
        }
        if self.budget == 0 {
            return Err(Error::invalid("search budget must be at least 1"));
        }
        Ok(())
    }
}

/// Monte-Carlo estimate of `R^E_ρ(h, c)`. Trial `t` uses RNG stream `t` of
/// `cfg.seed`. When any search is truncated the value is a lower-bound
/// estimate and `search_budget_exhausted` is set.
pub fn robust_risk_mc<H, C>(
    h: &H,
    c: &C,
    radius: usize,
    dist: &Distribution,
    cfg: &McConfig,
) -> Result<RiskReport>
where
    H: Concept + ?Sized,
    C: Concept + ?Sized,
{
    let n = check_pair(h, c, dist)?;
    check_radius(n, radius)?;
    cfg.validate()?;
    let (hits, truncated) = (0..cfg.trials)
        .into_par_iter()
        .map(|t| {
            let mut r = rng::stream(cfg.seed, t);
            let x = dist.sample_point(&mut r);
            match search_unchecked(&x, h, c, radius, cfg.budget) {
                SearchOutcome::Found(_) => (1u64, false),
                SearchOutcome::Absent => (0, false),
                SearchOutcome::Truncated => (0, true),
            }
        })
        .reduce(|| (0, false), |a, b| (a.0 + b.0, a.1 || b.1));
    Ok(RiskReport {
        value: hits as f64 / cfg.trials as f64,
        mode: EstimateMode::MonteCarlo,
        trials: Some(cfg.trials),
        confidence_radius: hoeffding_radius(cfg.trials, cfg.delta),
        search_budget_exhausted: truncated,
    })
}
