//! Compensated (Neumaier) summation and moment accumulators whose merge is
//! order-fixed, so parallel reductions are bit-reproducible.

use std::iter::FromIterator;

#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct NeumaierSum {
    sum: f64,
    comp: f64,
}

impl NeumaierSum {
    pub fn add(&mut self, v: f64) {
        let t = self.sum + v;
        if self.sum.abs() >= v.abs() {
            self.comp += (self.sum - t) + v;
        } else {
            self.comp += (v - t) + self.sum;
        }
        self.sum = t;
    }

    pub fn merge(&mut self, other: &NeumaierSum) {
        self.add(other.sum);
        self.add(other.comp);
    }

    pub fn value(&self) -> f64 {
        self.sum + self.comp
    }
}

impl FromIterator<f64> for NeumaierSum {
    fn from_iter<I: IntoIterator<Item = f64>>(iter: I) -> Self {
        let mut s = NeumaierSum::default();
        for v in iter {
            s.add(v);
        }
        s
    }
}

/// Running sums for one estimator: its values, squared errors about the
/// target, and squared squared-errors (for the Monte Carlo standard error of
/// the MSE).
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct ErrorMoments {
    pub count: u64,
    pub rejected: u64,
    pub sum: NeumaierSum,
    pub sum_sq_err: NeumaierSum,
    pub sum_sq_err2: NeumaierSum,
}

impl ErrorMoments {
    pub fn push(&mut self, value: f64, target: f64) {
        let e = value - target;
        let e2 = e * e;
        self.count += 1;
        self.sum.add(value);
        self.sum_sq_err.add(e2);
        self.sum_sq_err2.add(e2 * e2);
    }

    pub fn reject(&mut self) {
        self.rejected += 1;
    }

    pub fn merge(&mut self, other: &ErrorMoments) {
        self.count += other.count;
        self.rejected += other.rejected;
        self.sum.merge(&other.sum);
        self.sum_sq_err.merge(&other.sum_sq_err);
        self.sum_sq_err2.merge(&other.sum_sq_err2);
    }

    pub fn mean(&self) -> f64 {
        self.sum.value() / self.count as f64
    }

    pub fn mse(&self) -> f64 {
        self.sum_sq_err.value() / self.count as f64
    }

    /// Standard error of [`Self::mse`]; `None` with fewer than two values.
    pub fn mse_std_error(&self) -> Option<f64> {
        if self.count < 2 {
            return None;
        }
        let n = self.count as f64;
        let m = self.mse();
        let var = ((self.sum_sq_err2.value() - n * m * m) / (n - 1.0)).max(0.0);
        Some((var / n).sqrt())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn recovers_cancelled_terms() {
        let s: NeumaierSum = [1.0, 1e100, 1.0, -1e100].into_iter().collect();
        assert_eq!(s.value(), 2.0);
        let naive: f64 = [1.0, 1e100, 1.0, -1e100].iter().sum();
        assert_eq!(naive, 0.0);
    }

    #[test]
    fn merge_matches_sequential_for_exact_inputs() {
        let values: Vec<f64> = (0..1000).map(|i| (i as f64) * 0.125).collect();
        let whole: NeumaierSum = values.iter().copied().collect();
        let mut left: NeumaierSum = values[..300].iter().copied().collect();
        let right: NeumaierSum = values[300..].iter().copied().collect();
        left.merge(&right);
        assert_eq!(whole.value(), left.value());
    }

    #[test]
    fn moments_of_known_errors() {
        let mut m = ErrorMoments::default();
        for v in [1.0, 3.0, 5.0] {
            m.push(v, 3.0);
        }
        assert_eq!(m.mean(), 3.0);
        // squared errors 4, 0, 4
        assert!((m.mse() - 8.0 / 3.0).abs() < 1e-15);
        // sample variance of {4, 0, 4} is 16/3; se = sqrt(16/9)
        assert!((m.mse_std_error().unwrap() - 4.0 / 3.0).abs() < 1e-12);
    }
}
