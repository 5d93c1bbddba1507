//! Small numeric helpers shared by the exact oracles.

/// Neumaier-compensated running sum.
#[derive(Clone, Copy, Debug, Default)]
pub struct Compensated {
    sum: f64,
    comp: f64,
}

impl Compensated {
    #[inline]
    pub fn add(&mut self, v: f64) {
        let t = self.sum + v;
        if self.sum.abs() >= v.abs() {
            self.comp += (self.sum - t) + v;
        } else {
            self.comp += (v - t) + self.sum;
        }
        self.sum = t;
    }

    pub fn value(&self) -> f64 {
        self.sum + self.comp
    }
}

pub fn compensated_sum(values: impl IntoIterator<Item = f64>) -> f64 {
    let mut acc = Compensated::default();
    values.into_iter().for_each(|v| acc.add(v));
    acc.value()
}

/// Hoeffding radius `sqrt(ln(2/δ) / (2 T))`.
pub fn hoeffding_radius(trials: u64, delta: f64) -> f64 {
    ((2.0 / delta).ln() / (2.0 * trials as f64)).sqrt()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn compensated_sum_recovers_small_terms() {
        let vals = [1.0, 1e-16, 1e-16, -1.0];
        assert_eq!(compensated_sum(vals), 2e-16);
    }

    #[test]
    fn hoeffding_radius_value() {
        let r = hoeffding_radius(1000, 1e-3);
        assert!((r - ((2000f64).ln() / 2000.0).sqrt()).abs() < 1e-15);
    }
}
