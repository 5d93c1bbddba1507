mod common;

use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use common::*;
use robustpac::concepts::{disagreement_cnfs, Concept, Constant};
use robustpac::distributions::Distribution;
use robustpac::risk::{constant_in_ball_risk_exact, robust_risk_exact, standard_risk};

fn pair(
    seed: u64,
    n: usize,
    k: usize,
) -> (
    robustpac::concepts::DecisionList,
    robustpac::concepts::DecisionList,
) {
    let mut r = ChaCha8Rng::seed_from_u64(seed);
    (random_dl(&mut r, n, k, 4), random_dl(&mut r, n, k, 5))
}

/// `Pr[∃ z ∈ B_ρ(x) : h(z) ≠ c(x)]` by the flip-mask double loop.
fn constant_in_ball_count<H: Concept, C: Concept>(h: &H, c: &C, n: usize, radius: usize) -> u64 {
    let masks = flip_masks(n, radius);
    (0..1u64 << n)
        .filter(|&x| masks.iter().any(|&m| h.eval_raw(x ^ m) != c.eval_raw(x)))
        .count() as u64
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn exact_risk_matches_oracle(seed in any::<u64>(), n in 3usize..=9, rho in 0usize..=3) {
        let (h, c) = pair(seed, n, 2);
        let u = Distribution::uniform(n).unwrap();
        let got = robust_risk_exact(&h, &c, rho.min(n), &u).unwrap().value;
        let want = robust_count(&h, &c, n, rho.min(n)) as f64 / (1u64 << n) as f64;
        prop_assert_eq!(got, want);
    }

    #[test]
    fn constant_in_ball_matches_oracle(seed in any::<u64>(), n in 3usize..=9, rho in 0usize..=3) {
        let (h, c) = pair(seed, n, 2);
        let u = Distribution::uniform(n).unwrap();
        let got = constant_in_ball_risk_exact(&h, &c, rho.min(n), &u).unwrap().value;
        let want = constant_in_ball_count(&h, &c, n, rho.min(n)) as f64 / (1u64 << n) as f64;
        prop_assert_eq!(got, want);
    }

    #[test]
    fn risks_start_at_standard_risk_and_grow(seed in any::<u64>(), n in 3usize..=10) {
        let (h, c) = pair(seed, n, 2);
        let means: Vec<f64> = (0..n).map(|i| 0.35 + 0.3 * ((seed >> i) & 1) as f64).collect();
        let d = Distribution::product(means).unwrap();
        let std = standard_risk(&h, &c, &d).unwrap().value;
        prop_assert_eq!(robust_risk_exact(&h, &c, 0, &d).unwrap().value, std);
        prop_assert_eq!(constant_in_ball_risk_exact(&h, &c, 0, &d).unwrap().value, std);
        let mut last = std;
        for rho in 1..=n.min(4) {
            let r = robust_risk_exact(&h, &c, rho, &d).unwrap().value;
            prop_assert!(r + 1e-15 >= last);
            last = r;
        }
    }

    #[test]
    fn robust_risk_triangle_inequality(seed in any::<u64>(), n in 3usize..=9, rho in 0usize..=2) {
        let mut r = ChaCha8Rng::seed_from_u64(seed);
        let a = random_dl(&mut r, n, 2, 3);
        let b = random_dl(&mut r, n, 2, 3);
        let h = random_dl(&mut r, n, 2, 3);
        let u = Distribution::uniform(n).unwrap();
        let ab = robust_risk_exact(&a, &b, rho, &u).unwrap().value;
        let ha = robust_risk_exact(&h, &a, rho, &u).unwrap().value;
        let hb = robust_risk_exact(&h, &b, rho, &u).unwrap().value;
        prop_assert!(ab <= ha + hb + 1e-15);
    }

    #[test]
    fn disagreement_formulas_partition_the_disagreement(seed in any::<u64>(), n in 3usize..=9) {
        let (h, c) = pair(seed, n, 2);
        let parts = disagreement_cnfs(&c, &h).unwrap();
        for x in 0..1u64 << n {
            let hits = parts.iter().filter(|p| p.formula.eval_raw(x)).count();
            prop_assert_eq!(hits, (c.eval_raw(x) != h.eval_raw(x)) as usize);
        }
        for p in &parts {
            prop_assert!(p.formula.width() <= 2);
        }
    }
}

#[test]
fn agreeing_concepts_have_zero_risk_at_every_radius() {
    let u = Distribution::uniform(6).unwrap();
    let zero = Constant { n: 6, value: false };
    for rho in 0..=6 {
        assert_eq!(robust_risk_exact(&zero, &zero, rho, &u).unwrap().value, 0.0);
    }
}
