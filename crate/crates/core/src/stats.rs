//! Counting estimators for Monte Carlo frequencies.

use serde::Serialize;

/// Successes out of independent Bernoulli trials.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize)]
pub struct BinomialCount {
    pub successes: u64,
    pub trials: u64,
}

impl BinomialCount {
    pub fn new(successes: u64, trials: u64) -> Self {
        debug_assert!(successes <= trials);
        Self { successes, trials }
    }

    pub fn record(&mut self, success: bool) {
        self.trials += 1;
        self.successes += u64::from(success);
    }

    pub fn merge(self, other: Self) -> Self {
        Self {
            successes: self.successes + other.successes,
            trials: self.trials + other.trials,
        }
    }

    pub fn rate(&self) -> f64 {
        if self.trials == 0 {
            return f64::NAN;
        }
        self.successes as f64 / self.trials as f64
    }

    /// Standard error of the empirical rate, sqrt(r(1-r)/N).
    pub fn std_error(&self) -> f64 {
        let r = self.rate();
        (r * (1.0 - r) / self.trials as f64).sqrt()
    }

    /// Binomial standard deviation of the rate under the hypothesis `p`.
    pub fn sigma_under(&self, p: f64) -> f64 {
        (p * (1.0 - p) / self.trials as f64).sqrt()
    }

    /// Signed distance of the empirical rate from `p`, in units of the
    /// binomial sigma under `p`. Degenerate hypotheses (p = 0 or 1) give 0
    /// when the data agree exactly and infinity otherwise.
    pub fn z_score(&self, p: f64) -> f64 {
        let diff = self.rate() - p;
        let sigma = self.sigma_under(p);
        if sigma == 0.0 {
            if diff == 0.0 {
                0.0
            } else {
                diff.signum() * f64::INFINITY
            }
        } else {
            diff / sigma
        }
    }

    pub fn within_sigmas(&self, p: f64, k: f64) -> bool {
        self.z_score(p).abs() <= k
    }
}

impl std::iter::Sum for BinomialCount {
    fn sum<I: Iterator<Item = Self>>(iter: I) -> Self {
        iter.fold(Self::default(), Self::merge)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn z_score_of_exact_match_is_zero() {
        let c = BinomialCount::new(50, 100);
        assert_eq!(c.z_score(0.5), 0.0);
        assert!((c.sigma_under(0.5) - 0.05).abs() < 1e-15);
    }

    #[test]
    fn degenerate_hypothesis() {
        assert_eq!(BinomialCount::new(0, 10).z_score(0.0), 0.0);
        assert!(BinomialCount::new(1, 10).z_score(0.0).is_infinite());
    }

    #[test]
    fn merge_adds_counts() {
        let total: BinomialCount = [BinomialCount::new(1, 4), BinomialCount::new(2, 6)]
            .into_iter()
            .sum();
        assert_eq!(total, BinomialCount::new(3, 10));
    }
}
