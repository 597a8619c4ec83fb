/// Compensated summation: each addition's rounding error is recovered
/// exactly with a branch-free two-sum and accumulated separately.
///
/// The result depends only on the sequence of terms, so a fixed term order
/// gives bit-identical sums however the surrounding work is scheduled.
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct CompensatedSum {
    sum: f64,
    compensation: f64,
}

impl CompensatedSum {
    pub const fn new() -> Self {
        CompensatedSum {
            sum: 0.0,
            compensation: 0.0,
        }
    }

    #[inline(always)]
    pub fn add(&mut self, value: f64) {
        let t = self.sum + value;
        let v = t - self.sum;
        self.compensation += (self.sum - (t - v)) + (value - v);
        self.sum = t;
    }

    #[inline(always)]
    pub(crate) fn parts(&self) -> (f64, f64) {
        (self.sum, self.compensation)
    }

    #[inline(always)]
    pub(crate) fn from_parts(sum: f64, compensation: f64) -> Self {
        CompensatedSum { sum, compensation }
    }

    #[inline]
    pub fn value(&self) -> f64 {
        self.sum + self.compensation
    }
}

impl FromIterator<f64> for CompensatedSum {
    fn from_iter<I: IntoIterator<Item = f64>>(iter: I) -> Self {
        let mut s = CompensatedSum::new();
        for v in iter {
            s.add(v);
        }
        s
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn recovers_cancelled_terms() {
        let s: CompensatedSum = [1.0, 1e100, 1.0, -1e100].into_iter().collect();
        assert_eq!(s.value(), 2.0);
        let naive: f64 = [1.0, 1e100, 1.0, -1e100].iter().sum();
        assert_eq!(naive, 0.0);
    }

    #[test]
    fn many_small_terms() {
        let s: CompensatedSum = std::iter::repeat_n(0.1, 1_000_000).collect();
        assert!((s.value() - 100_000.0).abs() < 1e-9);
    }

    #[test]
    fn empty_is_zero() {
        assert_eq!(CompensatedSum::new().value(), 0.0);
    }
}
