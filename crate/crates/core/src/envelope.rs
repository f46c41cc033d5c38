//! Envelopes fitted to finite samples of paired distances.

use num_rational::Ratio;
use serde::{Deserialize, Serialize};

/// Multiplicative and additive constants `(λ, ε)` with
/// `d₁/λ − ε ≤ d₂ ≤ λ·d₁ + ε` on every sample.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct QiFit {
    #[serde(with = "crate::exact")]
    pub lambda: Ratio<i64>,
    #[serde(with = "crate::exact")]
    pub epsilon: Ratio<i64>,
    /// No sample had both distances positive, so `λ` defaulted to 1.
    pub degenerate: bool,
}

/// `λ` is the largest ratio `max(d₂/d₁, d₁/d₂)` over samples with both
/// distances at least `scale` (and positive); `ε` is then the least additive
/// constant making every sample satisfy both inequalities.
pub fn fit_qi(samples: &[(u64, u64)], scale: u64) -> QiFit {
    let floor = scale.max(1);
    let mut lambda = Ratio::from_integer(1i64);
    let mut degenerate = true;
    for &(d1, d2) in samples {
        if d1 >= floor && d2 >= floor {
            degenerate = false;
            let (a, b) = (d1 as i64, d2 as i64);
            lambda = lambda.max(Ratio::new(a.max(b), a.min(b)));
        }
    }
    let zero = Ratio::from_integer(0i64);
    let epsilon = samples.iter().fold(zero, |eps, &(d1, d2)| {
        let (a, b) = (Ratio::from_integer(d1 as i64), Ratio::from_integer(d2 as i64));
        eps.max(b - lambda * a).max(a / lambda - b)
    });
    QiFit { lambda, epsilon, degenerate }
}

/// Constants `a ≥ 1`, `b ≥ 0` with `x ≤ a·y + b` and `y ≤ a·x + b` on every sample.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LinearFit {
    #[serde(with = "crate::exact")]
    pub a: Ratio<i64>,
    #[serde(with = "crate::exact")]
    pub b: Ratio<i64>,
    /// Largest `|x - y|` over the sample.
    pub max_residual: u64,
    /// No sample had both values positive: `a` defaulted to 1 and `b` absorbs everything.
    pub degenerate: bool,
}

/// `a` is the largest ratio between the two values over samples where both
/// are positive; `b` is the least additive constant for that `a`.
pub fn fit_linear(samples: &[(u64, u64)]) -> LinearFit {
    let mut a = Ratio::from_integer(1i64);
    let mut degenerate = true;
    for &(x, y) in samples {
        if x > 0 && y > 0 {
            degenerate = false;
            let (x, y) = (x as i64, y as i64);
            a = a.max(Ratio::new(x.max(y), x.min(y)));
        }
    }
    let b = samples.iter().fold(Ratio::from_integer(0i64), |b, &(x, y)| {
        let (x, y) = (Ratio::from_integer(x as i64), Ratio::from_integer(y as i64));
        b.max(x - a * y).max(y - a * x)
    });
    let max_residual = samples.iter().map(|&(x, y)| x.abs_diff(y)).max().unwrap_or(0);
    LinearFit { a, b, max_residual, degenerate }
}

/// The tightest nondecreasing `f` with `y ≤ f(x)` on every sample, tabulated
/// for `x = 0..=max x`.
pub fn monotone_envelope(samples: &[(u64, u64)]) -> Vec<(u64, u64)> {
    let Some(top) = samples.iter().map(|s| s.0).max() else {
        return Vec::new();
    };
    let mut raw = vec![0u64; top as usize + 1];
    for &(x, y) in samples {
        raw[x as usize] = raw[x as usize].max(y);
    }
    let mut running = 0;
    raw.into_iter()
        .enumerate()
        .map(|(x, y)| {
            running = running.max(y);
            (x as u64, running)
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn isometric_samples() {
        let fit = fit_qi(&[(0, 0), (3, 3), (7, 7)], 1);
        assert_eq!(fit.lambda, Ratio::from_integer(1));
        assert_eq!(fit.epsilon, Ratio::from_integer(0));
        assert!(!fit.degenerate);
    }

    #[test]
    fn scaled_samples() {
        let fit = fit_qi(&[(2, 4), (3, 6), (1, 3)], 2);
        assert_eq!(fit.lambda, Ratio::from_integer(2));
        assert_eq!(fit.epsilon, Ratio::from_integer(1));
        assert_eq!(fit_qi(&[(2, 4), (3, 6), (1, 3)], 1).lambda, Ratio::from_integer(3));
    }

    #[test]
    fn linear_fit_of_zero_column_is_degenerate() {
        let fit = fit_linear(&[(0, 3), (0, 5)]);
        assert!(fit.degenerate);
        assert_eq!(fit.b, Ratio::from_integer(5));
        let fit = fit_linear(&[(2, 4), (1, 1), (0, 1)]);
        assert_eq!((fit.a, fit.b, fit.max_residual), (Ratio::from_integer(2), Ratio::from_integer(1), 2));
    }

    #[test]
    fn envelope_is_monotone() {
        assert_eq!(monotone_envelope(&[(0, 1), (2, 5), (3, 2)]), vec![(0, 1), (1, 1), (2, 5), (3, 5)]);
        assert!(monotone_envelope(&[]).is_empty());
    }
}
