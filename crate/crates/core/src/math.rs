//! Scalar math that works without `std`.

#[inline]
pub fn exp(x: f64) -> f64 {
    libm::exp(x)
}

#[inline]
pub fn ln(x: f64) -> f64 {
    libm::log(x)
}

#[inline]
pub fn sqrt(x: f64) -> f64 {
    libm::sqrt(x)
}

#[inline]
pub fn pow(x: f64, y: f64) -> f64 {
    libm::pow(x, y)
}

/// Logistic sigmoid `1 / (1 + e^{-x})`, evaluated without overflow.
#[inline]
pub fn expit(x: f64) -> f64 {
    if x >= 0.0 {
        1.0 / (1.0 + exp(-x))
    } else {
        let e = exp(x);
        e / (1.0 + e)
    }
}

/// Log-odds of `p`.
#[inline]
pub fn logit(p: f64) -> f64 {
    ln(p / (1.0 - p))
}

/// `n` equally spaced points from `start` to `end` inclusive.
pub fn linspace(start: f64, end: f64, n: usize) -> alloc::vec::Vec<f64> {
    match n {
        0 => alloc::vec::Vec::new(),
        1 => alloc::vec![start],
        _ => {
            let step = (end - start) / (n - 1) as f64;
            (0..n)
                .map(|i| if i == n - 1 { end } else { start + step * i as f64 })
                .collect()
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn expit_is_symmetric_and_saturates() {
        assert_eq!(expit(0.0), 0.5);
        assert!((expit(2.0) + expit(-2.0) - 1.0).abs() < 1e-15);
        assert_eq!(expit(800.0), 1.0);
        assert_eq!(expit(-800.0), 0.0);
        assert!((logit(expit(1.3)) - 1.3).abs() < 1e-12);
    }

    #[test]
    fn linspace_hits_endpoints() {
        let v = linspace(-15.0, 15.0, 4);
        assert_eq!(v, [-15.0, -5.0, 5.0, 15.0]);
        assert_eq!(linspace(3.0, 9.0, 1), [3.0]);
    }
}
