//! Independent brute-force oracles shared by the integration tests.
//!
//! Nothing here calls the library's set algebra, expansion or ball
//! iterators: radii are handled by an explicit flip-mask double loop.

#![allow(dead_code)]

use rand::Rng;
use robustpac::concepts::{Clause, CnfFormula, Concept, DecisionList, DlItem, Literal, Term};

/// All flip masks of weight `≤ radius` over `n` bits.
pub fn flip_masks(n: usize, radius: usize) -> Vec<u64> {
    (0..1u64 << n)
        .filter(|m| m.count_ones() as usize <= radius)
        .collect()
}

/// Number of `x` with some `z = x ⊕ mask` where `h(z) ≠ c(z)`.
pub fn robust_count<H: Concept, C: Concept>(h: &H, c: &C, n: usize, radius: usize) -> u64 {
    let masks = flip_masks(n, radius);
    (0..1u64 << n)
        .filter(|&x| {
            masks
                .iter()
                .any(|&m| h.eval_raw(x ^ m) != c.eval_raw(x ^ m))
        })
        .count() as u64
}

/// `Σ_x pmf(x)·[∃ z ∈ B_ρ(x) : h(z) ≠ c(z)]` with naive summation.
pub fn robust_mass<H: Concept, C: Concept>(
    h: &H,
    c: &C,
    n: usize,
    radius: usize,
    pmf: impl Fn(u64) -> f64,
) -> f64 {
    let masks = flip_masks(n, radius);
    (0..1u64 << n)
        .filter(|&x| {
            masks
                .iter()
                .any(|&m| h.eval_raw(x ^ m) != c.eval_raw(x ^ m))
        })
        .map(pmf)
        .sum()
}

/// Number of `x` within `radius` of a satisfying point of `phi`.
pub fn expansion_count<C: Concept>(phi: &C, n: usize, radius: usize) -> u64 {
    let masks = flip_masks(n, radius);
    (0..1u64 << n)
        .filter(|&x| masks.iter().any(|&m| phi.eval_raw(x ^ m)))
        .count() as u64
}

pub fn binomial(n: u64, k: u64) -> u128 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut r: u128 = 1;
    for i in 0..k {
        r = r * (n - i) as u128 / (i + 1) as u128;
    }
    r
}

/// `2^{-d} Σ_{i ≤ ρ} C(d, i)`: `S_ρ` of a `d`-literal conjunction under the
/// uniform distribution.
pub fn conjunction_expansion(d: u64, radius: u64) -> f64 {
    let s: u128 = (0..=radius.min(d)).map(|i| binomial(d, i)).sum();
    s as f64 * (-(d as f64)).exp2()
}

pub fn product_pmf(means: &[f64]) -> impl Fn(u64) -> f64 + '_ {
    move |x| {
        means
            .iter()
            .enumerate()
            .map(|(i, &p)| if (x >> i) & 1 == 1 { p } else { 1.0 - p })
            .product()
    }
}

fn random_term<R: Rng>(rng: &mut R, n: usize, width: usize) -> Term {
    let mut vars: Vec<usize> = (0..n).collect();
    for i in 0..width {
        let j = rng.gen_range(i..n);
        vars.swap(i, j);
    }
    Term::new(vars[..width].iter().map(|&v| {
        if rng.gen() {
            Literal::neg(v)
        } else {
            Literal::pos(v)
        }
    }))
    .unwrap()
}

/// A k-DL with `len` items of width `1..=k` before the default.
pub fn random_dl<R: Rng>(rng: &mut R, n: usize, k: usize, len: usize) -> DecisionList {
    let mut items: Vec<DlItem> = (0..len)
        .map(|_| {
            let w = rng.gen_range(1..=k);
            DlItem {
                term: random_term(rng, n, w),
                output: rng.gen(),
            }
        })
        .collect();
    items.push(DlItem {
        term: Term::truth(),
        output: rng.gen(),
    });
    DecisionList::new(n, k, items).unwrap()
}

/// A 2-CNF with `m` clauses of width 1 or 2.
pub fn random_2cnf<R: Rng>(rng: &mut R, n: usize, m: usize) -> CnfFormula {
    let clauses = (0..m)
        .map(|_| {
            let w = if n >= 2 && rng.gen_bool(0.8) { 2 } else { 1 };
            let t = random_term(rng, n, w);
            Clause::new(t.literals().iter().copied()).unwrap()
        })
        .collect();
    CnfFormula::new(n, clauses).unwrap()
}
