//! α-log-Lipschitz distributions on `{0,1}^n`: uniform, product, and explicit
//! tables, with exact pmf, seeded sampling, and edge-scan certification of α.

use std::fmt::Write as _;

use rand::Rng;
use serde::Serialize;

use crate::concepts::Concept;
use crate::error::{check_dim, Error, Result};
use crate::hypercube::{Point, PointSet, MAX_DIM};
use crate::numeric::{compensated_sum, Compensated};
use crate::rng;

const NORMALIZATION_TOL: f64 = 1e-12;

#[derive(Clone, Debug, PartialEq)]
pub enum DistributionKind {
    Uniform,
    /// `Pr[x_i = 1] = means[i]`, independently.
    Product(Vec<f64>),
    /// Explicit pmf indexed by raw point bits.
    Table(Vec<f64>),
}

#[derive(Clone, Debug, PartialEq)]
pub struct Distribution {
    n: usize,
    kind: DistributionKind,
    /// Cumulative pmf for table sampling.
    cdf: Vec<f64>,
}

fn check_dim_range(n: usize) -> Result<()> {
    if n == 0 || n > MAX_DIM {
        return Err(Error::invalid(format!(
            "distribution dimension must be in 1..={MAX_DIM}, got {n}"
        )));
    }
    Ok(())
}

impl Distribution {
    pub fn uniform(n: usize) -> Result<Self> {
        check_dim_range(n)?;
        Ok(Distribution {
            n,
            kind: DistributionKind::Uniform,
            cdf: Vec::new(),
        })
    }

    pub fn product(means: Vec<f64>) -> Result<Self> {
        check_dim_range(means.len())?;
        for (i, &p) in means.iter().enumerate() {
            if !(p > 0.0 && p < 1.0) {
                return Err(Error::invalid(format!(
                    "product mean {p} for variable {} must lie strictly inside (0, 1)",
                    i + 1
                )));
            }
        }
        Ok(Distribution {
            n: means.len(),
            kind: DistributionKind::Product(means),
            cdf: Vec::new(),
        })
    }

    /// A product distribution whose means are validated against
    /// `[1/(1+α), α/(1+α)]`, the range in which it is α-log-Lipschitz.
    pub fn product_with_alpha(means: Vec<f64>, alpha: f64) -> Result<Self> {
        if !(alpha >= 1.0) {
            return Err(Error::invalid(format!(
                "alpha must be at least 1, got {alpha}"
            )));
        }
        let lo = 1.0 / (1.0 + alpha);
        let hi = alpha / (1.0 + alpha);
        for (i, &p) in means.iter().enumerate() {
            if p < lo - 1e-15 || p > hi + 1e-15 {
                return Err(Error::invalid(format!(
                    "mean {p} for variable {} outside [{lo}, {hi}] required by alpha = {alpha}",
                    i + 1
                )));
            }
        }
        Self::product(means)
    }

    /// Explicit pmf over all `2^n` points, indexed by raw bits.
    pub fn table(n: usize, pmf: Vec<f64>) -> Result<Self> {
        PointSet::check_cap(n)?;
        if pmf.len() != 1usize << n {
            return Err(Error::invalid(format!(
                "table for dimension {n} needs {} entries, got {}",
                1usize << n,
                pmf.len()
            )));
        }
        if let Some(raw) = pmf.iter().position(|&p| !(p > 0.0) || !p.is_finite()) {
            return Err(Error::ZeroMass(format!(
                "point {} has probability {}; log-Lipschitz tables need full support",
                Point::from_raw(n, raw as u64),
                pmf[raw]
            )));
        }
        let total = compensated_sum(pmf.iter().copied());
        if (total - 1.0).abs() > NORMALIZATION_TOL {
            return Err(Error::invalid(format!("table pmf sums to {total}, not 1")));
        }
        let mut cdf = Vec::with_capacity(pmf.len());
        let mut acc = 0.0;
        for &p in &pmf {
            acc += p;
            cdf.push(acc);
        }
        Ok(Distribution {
            n,
            kind: DistributionKind::Table(pmf),
            cdf,
        })
    }

    /// Normalizes nonnegative weights into a table.
    pub fn table_from_weights(n: usize, weights: Vec<f64>) -> Result<Self> {
        let total = compensated_sum(weights.iter().copied());
        if !(total > 0.0) {
            return Err(Error::ZeroMass("weights sum to zero".into()));
        }
        Self::table(n, weights.into_iter().map(|w| w / total).collect())
    }

    /// Random table with pairwise interactions whose log-pmf changes by at
    /// most `ln α` across every hypercube edge.
    pub fn random_log_lipschitz_table<R: Rng + ?Sized>(
        n: usize,
        alpha: f64,
        rng: &mut R,
    ) -> Result<Self> {
        PointSet::check_cap(n)?;
        if !(alpha >= 1.0) {
            return Err(Error::invalid(format!(
                "alpha must be at least 1, got {alpha}"
            )));
        }
        let linear: Vec<f64> = (0..n).map(|_| rng.gen_range(-1.0..1.0)).collect();
        let mut pair = vec![vec![0.0; n]; n];
        for i in 0..n {
            for j in i + 1..n {
                let b = rng.gen_range(-1.0..1.0) * 0.5;
                pair[i][j] = b;
                pair[j][i] = b;
            }
        }
        // worst-case edge change along coordinate i
        let worst = (0..n)
            .map(|i| linear[i].abs() + pair[i].iter().map(|b: &f64| b.abs()).sum::<f64>())
            .fold(0.0, f64::max);
        let scale = if worst > 0.0 {
            alpha.ln() / worst * rng.gen_range(0.5..=1.0)
        } else {
            0.0
        };
        let weights = (0..1u64 << n)
            .map(|raw| {
                let mut logw = 0.0;
                for i in 0..n {
                    if (raw >> i) & 1 == 1 {
                        logw += linear[i];
                        for j in i + 1..n {
                            if (raw >> j) & 1 == 1 {
                                logw += pair[i][j];
                            }
                        }
                    }
                }
                (logw * scale).exp()
            })
            .collect();
        Self::table_from_weights(n, weights)
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn kind(&self) -> &DistributionKind {
        &self.kind
    }

    pub fn kind_name(&self) -> &'static str {
        match self.kind {
            DistributionKind::Uniform => "uniform",
            DistributionKind::Product(_) => "product",
            DistributionKind::Table(_) => "table",
        }
    }

    pub fn is_uniform(&self) -> bool {
        matches!(self.kind, DistributionKind::Uniform)
    }

    #[inline]
    pub(crate) fn pmf_raw(&self, raw: u64) -> f64 {
        match &self.kind {
            DistributionKind::Uniform => (-(self.n as f64)).exp2(),
            DistributionKind::Product(means) => means
                .iter()
                .enumerate()
                .map(|(i, &p)| if (raw >> i) & 1 == 1 { p } else { 1.0 - p })
                .product(),
            DistributionKind::Table(pmf) => pmf[raw as usize],
        }
    }

    fn ln_pmf_raw(&self, raw: u64) -> f64 {
        match &self.kind {
            DistributionKind::Uniform => -(self.n as f64) * std::f64::consts::LN_2,
            DistributionKind::Product(means) => means
                .iter()
                .enumerate()
                .map(|(i, &p)| {
                    if (raw >> i) & 1 == 1 {
                        p.ln()
                    } else {
                        (-p).ln_1p()
                    }
                })
                .sum(),
            DistributionKind::Table(pmf) => pmf[raw as usize].ln(),
        }
    }

    pub fn pmf(&self, x: &Point) -> Result<f64> {
        check_dim(self.n, x.dim())?;
        Ok(self.pmf_raw(x.bits()))
    }

    /// One draw.
    pub fn sample_point<R: Rng + ?Sized>(&self, rng: &mut R) -> Point {
        let raw = match &self.kind {
            DistributionKind::Uniform => rng.gen::<u64>(),
            DistributionKind::Product(means) => {
                means.iter().enumerate().fold(0u64, |acc, (i, &p)| {
                    acc | ((rng.gen::<f64>() < p) as u64) << i
                })
            }
            DistributionKind::Table(_) => {
                let total = *self.cdf.last().expect("non-empty table");
                let u = rng.gen::<f64>() * total;
                let idx = self.cdf.partition_point(|&c| c <= u);
                idx.min(self.cdf.len() - 1) as u64
            }
        };
        Point::from_raw(self.n, raw)
    }

    pub fn sample_with<R: Rng + ?Sized>(&self, m: usize, rng: &mut R) -> Vec<Point> {
        (0..m).map(|_| self.sample_point(rng)).collect()
    }

    /// `m` i.i.d. draws from stream 0 of `seed`.
    pub fn sample(&self, m: usize, seed: u64) -> Vec<Point> {
        self.sample_with(m, &mut rng::stream(seed, 0))
    }

    /// `Σ_{x ∈ S} D(x)`.
    pub fn mass(&self, set: &PointSet) -> Result<f64> {
        check_dim(self.n, set.dim())?;
        Ok(match self.kind {
            DistributionKind::Uniform => set.len() as f64 * (-(self.n as f64)).exp2(),
            _ => compensated_sum(set.iter_raw().map(|raw| self.pmf_raw(raw))),
        })
    }

    /// The least `α` with `|ln D(x) − ln D(x')| ≤ ln α` on every edge.
    pub fn log_lipschitz_constant(&self) -> Result<f64> {
        match &self.kind {
            DistributionKind::Uniform => Ok(1.0),
            DistributionKind::Product(means) => Ok(means
                .iter()
                .map(|&p| (p / (1.0 - p)).max((1.0 - p) / p))
                .fold(1.0, f64::max)),
            DistributionKind::Table(_) => Ok(self.edge_scan_log_ratio().exp()),
        }
    }

    /// Largest `|ln D(x) − ln D(x ⊕ e_i)|` over all edges.
    pub fn edge_scan_log_ratio(&self) -> f64 {
        let mut worst = 0.0f64;
        for raw in 0..(1u64 << self.n) {
            let here = self.ln_pmf_raw(raw);
            for i in 0..self.n {
                let other = raw ^ (1u64 << i);
                if other > raw {
                    worst = worst.max((here - self.ln_pmf_raw(other)).abs());
                }
            }
        }
        worst
    }

    /// Materializes the pmf as a table.
    pub fn to_table(&self) -> Result<Distribution> {
        if let DistributionKind::Table(_) = self.kind {
            return Ok(self.clone());
        }
        PointSet::check_cap(self.n)?;
        let pmf: Vec<f64> = (0..1u64 << self.n).map(|raw| self.pmf_raw(raw)).collect();
        let total = compensated_sum(pmf.iter().copied());
        Self::table(self.n, pmf.into_iter().map(|p| p / total).collect())
    }

    fn table_pmf(&self) -> Result<std::borrow::Cow<'_, [f64]>> {
        match &self.kind {
            DistributionKind::Table(pmf) => Ok(std::borrow::Cow::Borrowed(pmf)),
            _ => {
                PointSet::check_cap(self.n)?;
                Ok(std::borrow::Cow::Owned(
                    (0..1u64 << self.n).map(|raw| self.pmf_raw(raw)).collect(),
                ))
            }
        }
    }

    fn validate_vars(&self, vars: &[usize]) -> Result<Vec<usize>> {
        let mut v = vars.to_vec();
        v.sort_unstable();
        v.dedup();
        if v.len() != vars.len() {
            return Err(Error::invalid("variable listed twice"));
        }
        if let Some(&bad) = v.iter().find(|&&i| i >= self.n) {
            return Err(Error::invalid(format!(
                "variable {} outside dimension {}",
                bad + 1,
                self.n
            )));
        }
        Ok(v)
    }

    /// `D_S(y) = Σ_{y'} D(y y')`: sums out every variable not in `keep`.
    /// Kept variables are renumbered in increasing order.
    pub fn marginal(&self, keep: &[usize]) -> Result<Distribution> {
        let keep = self.validate_vars(keep)?;
        if keep.is_empty() {
            return Err(Error::invalid("marginal must keep at least one variable"));
        }
        let pmf = self.table_pmf()?;
        let mut acc = vec![Compensated::default(); 1usize << keep.len()];
        for (raw, &p) in pmf.iter().enumerate() {
            acc[project(raw as u64, &keep) as usize].add(p);
        }
        let out: Vec<f64> = acc.iter().map(Compensated::value).collect();
        let total = compensated_sum(out.iter().copied());
        Self::table(keep.len(), out.into_iter().map(|p| p / total).collect())
    }

    /// `(D | π_S)` marginalized onto the complement of `vars`, where the event
    /// `π_S` is `event(pattern)` and bit `j` of `pattern` is `x[vars[j]]`.
    pub fn condition(&self, vars: &[usize], event: impl Fn(u64) -> bool) -> Result<Distribution> {
        let vars = self.validate_vars(vars)?;
        let rest: Vec<usize> = (0..self.n).filter(|i| !vars.contains(i)).collect();
        if rest.is_empty() {
            return Err(Error::invalid(
                "conditioning on every variable leaves nothing to marginalize onto",
            ));
        }
        let pmf = self.table_pmf()?;
        let mut acc = vec![Compensated::default(); 1usize << rest.len()];
        for (raw, &p) in pmf.iter().enumerate() {
            if event(project(raw as u64, &vars)) {
                acc[project(raw as u64, &rest) as usize].add(p);
            }
        }
        let out: Vec<f64> = acc.iter().map(Compensated::value).collect();
        let total = compensated_sum(out.iter().copied());
        if !(total > 0.0) {
            return Err(Error::ZeroMass("conditioning event has zero mass".into()));
        }
        Self::table(rest.len(), out.into_iter().map(|p| p / total).collect())
    }

    /// `Pr[x_{vars[j]} = bit j of pattern for all j]`.
    pub fn pattern_probability(&self, vars: &[usize], pattern: u64) -> Result<f64> {
        self.validate_vars(vars)?;
        if let DistributionKind::Product(means) = &self.kind {
            return Ok(vars
                .iter()
                .enumerate()
                .map(|(j, &v)| {
                    if (pattern >> j) & 1 == 1 {
                        means[v]
                    } else {
                        1.0 - means[v]
                    }
                })
                .product());
        }
        if self.is_uniform() {
            return Ok((-(vars.len() as f64)).exp2());
        }
        let pmf = self.table_pmf()?;
        Ok(compensated_sum(pmf.iter().enumerate().filter_map(
            |(raw, &p)| {
                let hit = vars
                    .iter()
                    .enumerate()
                    .all(|(j, &v)| ((raw >> v) & 1 == 1) == ((pattern >> j) & 1 == 1));
                hit.then_some(p)
            },
        )))
    }

    pub fn to_csv(&self) -> Result<String> {
        let pmf = self.table_pmf()?;
        let mut s = String::from("point,probability\n");
        for (raw, p) in pmf.iter().enumerate() {
            writeln!(s, "{},{}", Point::from_raw(self.n, raw as u64), p).expect("string write");
        }
        Ok(s)
    }

    /// Reads `point,probability` rows. Every point must appear exactly once.
    pub fn from_csv(text: &str) -> Result<Distribution> {
        let mut entries: Vec<(usize, Point, f64)> = Vec::new();
        for (i, line) in text.lines().enumerate() {
            let lineno = i + 1;
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') || line.starts_with("point") {
                continue;
            }
            let (pt, prob) = line
                .split_once(',')
                .ok_or_else(|| Error::parse(lineno, "expected `point,probability`"))?;
            let point: Point = pt
                .trim()
                .parse()
                .map_err(|e: Error| Error::parse(lineno, e.to_string()))?;
            let prob: f64 = prob
                .trim()
                .parse()
                .map_err(|_| Error::parse(lineno, format!("invalid probability {prob:?}")))?;
            entries.push((lineno, point, prob));
        }
        let n = entries
            .first()
            .map(|(_, p, _)| p.dim())
            .ok_or_else(|| Error::parse(1, "empty distribution table"))?;
        PointSet::check_cap(n)?;
        let mut pmf = vec![f64::NAN; 1usize << n];
        for (lineno, point, prob) in entries {
            if point.dim() != n {
                return Err(Error::parse(
                    lineno,
                    format!("point {point} is not {n}-dimensional"),
                ));
            }
            let slot = &mut pmf[point.bits() as usize];
            if !slot.is_nan() {
                return Err(Error::parse(lineno, format!("point {point} listed twice")));
            }
            *slot = prob;
        }
        if let Some(raw) = pmf.iter().position(|p| p.is_nan()) {
            return Err(Error::invalid(format!(
                "point {} missing from table",
                Point::from_raw(n, raw as u64)
            )));
        }
        Self::table(n, pmf)
    }
}

/// Packs `raw[vars[j]]` into bit `j`.
#[inline]
fn project(raw: u64, vars: &[usize]) -> u64 {
    vars.iter()
        .enumerate()
        .fold(0u64, |acc, (j, &v)| acc | ((raw >> v) & 1) << j)
}

/// A labeled sample `S ∼ D^m` with `labels[i] = c(points[i])`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct LabeledSample {
    pub points: Vec<Point>,
    pub labels: Vec<bool>,
    pub seed: Option<u64>,
    pub concept: Option<String>,
}

impl LabeledSample {
    pub fn new(points: Vec<Point>, labels: Vec<bool>) -> Result<Self> {
        if points.len() != labels.len() {
            return Err(Error::invalid(format!(
                "{} points but {} labels",
                points.len(),
                labels.len()
            )));
        }
        if let Some(first) = points.first() {
            let n = first.dim();
            if let Some(bad) = points.iter().find(|p| p.dim() != n) {
                return Err(Error::DimensionMismatch {
                    expected: n,
                    actual: bad.dim(),
                });
            }
        }
        Ok(LabeledSample {
            points,
            labels,
            seed: None,
            concept: None,
        })
    }

    /// Labels `points` by `concept`.
    pub fn label<C: Concept + ?Sized>(points: Vec<Point>, concept: &C) -> Result<Self> {
        let labels = points
            .iter()
            .map(|p| concept.evaluate(p))
            .collect::<Result<Vec<_>>>()?;
        Self::new(points, labels)
    }

    /// Draws `m` points from `dist` with `seed` and labels them by `concept`.
    pub fn draw<C: Concept + ?Sized>(
        dist: &Distribution,
        concept: &C,
        m: usize,
        seed: u64,
    ) -> Result<Self> {
        check_dim(dist.dim(), concept.dim())?;
        let mut s = Self::label(dist.sample(m, seed), concept)?;
        s.seed = Some(seed);
        Ok(s)
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn dim(&self) -> Option<usize> {
        self.points.first().map(Point::dim)
    }

    pub fn iter(&self) -> impl Iterator<Item = (&Point, bool)> {
        self.points.iter().zip(self.labels.iter().copied())
    }

    pub fn to_csv(&self) -> String {
        let mut s = String::from("point,label\n");
        for (p, l) in self.iter() {
            writeln!(s, "{p},{}", l as u8).expect("string write");
        }
        s
    }

    pub fn from_csv(text: &str) -> Result<Self> {
        let mut points = Vec::new();
        let mut labels = Vec::new();
        for (i, line) in text.lines().enumerate() {
            let lineno = i + 1;
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') || line.starts_with("point") {
                continue;
            }
            let (pt, lab) = line
                .split_once(',')
                .ok_or_else(|| Error::parse(lineno, "expected `point,label`"))?;
            let p: Point = pt
                .trim()
                .parse()
                .map_err(|e: Error| Error::parse(lineno, e.to_string()))?;
            if let Some(first) = points.first() {
                let first: &Point = first;
                if first.dim() != p.dim() {
                    return Err(Error::parse(lineno, "inconsistent point dimension"));
                }
            }
            let l = match lab.trim() {
                "0" => false,
                "1" => true,
                other => return Err(Error::parse(lineno, format!("invalid label {other:?}"))),
            };
            points.push(p);
            labels.push(l);
        }
        Self::new(points, labels)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(s: &str) -> Point {
        s.parse().unwrap()
    }

    #[test]
    fn pmf_examples() {
        let u = Distribution::uniform(4).unwrap();
        assert_eq!(u.pmf(&p("0110")).unwrap(), 1.0 / 16.0);
        let half = Distribution::product(vec![0.5; 4]).unwrap();
        for raw in 0..16 {
            let x = Point::from_raw(4, raw);
            assert_eq!(half.pmf(&x).unwrap(), u.pmf(&x).unwrap());
        }
        let d = Distribution::product(vec![0.6, 0.6]).unwrap();
        assert!((d.pmf(&p("11")).unwrap() - 0.36).abs() < 1e-15);
        assert!(d.pmf(&p("1")).is_err());
    }

    #[test]
    fn invalid_constructions() {
        assert!(Distribution::product(vec![0.0, 0.5]).is_err());
        assert!(Distribution::product(vec![0.5, 1.0]).is_err());
        assert!(Distribution::table(2, vec![0.5, 0.5, 0.0, 0.0]).is_err());
        assert!(Distribution::table(2, vec![0.3; 4]).is_err());
        assert!(Distribution::table(2, vec![0.25; 3]).is_err());
        assert!(Distribution::product_with_alpha(vec![0.65], 2.0).is_ok());
        assert!(Distribution::product_with_alpha(vec![0.65], 1.5).is_err());
    }

    #[test]
    fn sample_contract() {
        let u = Distribution::uniform(10).unwrap();
        assert!(u.sample(0, 1).is_empty());
        assert_eq!(u.sample(50, 9), u.sample(50, 9));
        assert_ne!(u.sample(50, 9), u.sample(50, 10));
        let m = 100_000;
        let pts = u.sample(m, 42);
        let sigma = (0.25 / m as f64).sqrt();
        for i in 0..10 {
            let mean = pts.iter().filter(|x| x.get(i)).count() as f64 / m as f64;
            assert!((mean - 0.5).abs() < 4.0 * sigma, "coordinate {i}: {mean}");
        }
    }

    #[test]
    fn mass_examples() {
        let d = Distribution::product(vec![0.3, 0.6, 0.8, 0.55]).unwrap();
        let full = PointSet::full(4).unwrap();
        assert!((d.mass(&full).unwrap() - 1.0).abs() < 1e-12);
        assert_eq!(d.mass(&PointSet::empty(4).unwrap()).unwrap(), 0.0);
        let u = Distribution::uniform(4).unwrap();
        let s = PointSet::from_points(4, [p("0000"), p("1010"), p("1111")]).unwrap();
        assert_eq!(u.mass(&s).unwrap(), 3.0 / 16.0);
    }

    #[test]
    fn alpha_examples() {
        assert_eq!(
            Distribution::uniform(5)
                .unwrap()
                .log_lipschitz_constant()
                .unwrap(),
            1.0
        );
        let d = Distribution::product(vec![0.6; 5]).unwrap();
        assert!((d.log_lipschitz_constant().unwrap() - 1.5).abs() < 1e-9);
        let t = Distribution::product(vec![0.75; 6])
            .unwrap()
            .to_table()
            .unwrap();
        assert!((t.log_lipschitz_constant().unwrap() - 3.0).abs() < 1e-9);
    }

    #[test]
    fn product_alpha_matches_edge_scan() {
        let means = vec![
            0.3, 0.45, 0.62, 0.5, 0.71, 0.4, 0.58, 0.35, 0.66, 0.52, 0.49, 0.61,
        ];
        let d = Distribution::product(means).unwrap();
        let t = d.to_table().unwrap();
        let a = d.log_lipschitz_constant().unwrap();
        let b = t.log_lipschitz_constant().unwrap();
        assert!((a - b).abs() < 1e-9, "{a} vs {b}");
    }

    #[test]
    fn marginal_examples() {
        let d = Distribution::product(vec![0.3, 0.6, 0.8]).unwrap();
        let t = d.to_table().unwrap();
        let same = t.marginal(&[0, 1, 2]).unwrap();
        assert_eq!(same, t);
        let m = t.marginal(&[0, 2]).unwrap();
        let expected = Distribution::product(vec![0.3, 0.8]).unwrap();
        for raw in 0..4 {
            assert!((m.pmf_raw(raw) - expected.pmf_raw(raw)).abs() < 1e-15);
        }
        assert!(t.marginal(&[]).is_err());
        assert!(t.marginal(&[0, 0]).is_err());
        assert!(t.marginal(&[3]).is_err());
    }

    #[test]
    fn condition_examples() {
        let t = Distribution::product(vec![0.3, 0.6, 0.8])
            .unwrap()
            .to_table()
            .unwrap();
        let same = t.condition(&[], |_| true).unwrap();
        for raw in 0..8 {
            assert!((same.pmf_raw(raw) - t.pmf_raw(raw)).abs() < 1e-15);
        }
        let u = Distribution::uniform(5).unwrap();
        let c = u.condition(&[0], |pat| pat == 1).unwrap();
        assert_eq!(c.dim(), 4);
        for raw in 0..16 {
            assert!((c.pmf_raw(raw) - 1.0 / 16.0).abs() < 1e-15);
        }
        assert!(matches!(
            u.condition(&[0], |_| false),
            Err(Error::ZeroMass(_))
        ));
    }

    #[test]
    fn pattern_probability_routes_agree() {
        let d = Distribution::product(vec![0.3, 0.6, 0.8, 0.45]).unwrap();
        let t = d.to_table().unwrap();
        for pattern in 0..4 {
            let a = d.pattern_probability(&[3, 1], pattern).unwrap();
            let b = t.pattern_probability(&[3, 1], pattern).unwrap();
            assert!((a - b).abs() < 1e-15);
        }
    }

    #[test]
    fn table_csv_round_trip() {
        let t = Distribution::product(vec![0.3, 0.6, 0.8])
            .unwrap()
            .to_table()
            .unwrap();
        let text = t.to_csv().unwrap();
        assert!(text.starts_with("point,probability\n000,"));
        assert_eq!(Distribution::from_csv(&text).unwrap(), t);
        let err = Distribution::from_csv("point,probability\n00,0.5\n01,x\n").unwrap_err();
        assert!(matches!(err, Error::Parse { line: 3, .. }));
        assert!(Distribution::from_csv("00,0.5\n01,0.5\n").is_err());
    }

    #[test]
    fn table_sampling_follows_pmf() {
        let t = Distribution::table(2, vec![0.1, 0.2, 0.3, 0.4]).unwrap();
        let m = 200_000;
        let pts = t.sample(m, 5);
        for raw in 0..4u64 {
            let freq = pts.iter().filter(|x| x.bits() == raw).count() as f64 / m as f64;
            let pr = t.pmf_raw(raw);
            let sigma = (pr * (1.0 - pr) / m as f64).sqrt();
            assert!((freq - pr).abs() < 5.0 * sigma);
        }
    }

    #[test]
    fn labeled_sample_csv() {
        let s = LabeledSample::new(vec![p("101"), p("011")], vec![true, false]).unwrap();
        let text = s.to_csv();
        assert_eq!(text, "point,label\n101,1\n011,0\n");
        assert_eq!(LabeledSample::from_csv(&text).unwrap().labels, s.labels);
        assert!(LabeledSample::new(vec![p("101")], vec![]).is_err());
        assert!(LabeledSample::from_csv("101,1\n01,0\n").is_err());
    }
}
