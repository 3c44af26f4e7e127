//! Lebesgue norms by Riemann-sum quadrature.

use crate::{Error, Result};

/// Reject exponents outside `[1, ∞]` (NaN included).
pub fn check_exponent(p: f64) -> Result<()> {
    if p >= 1.0 {
        Ok(())
    } else {
        Err(Error::InvalidExponent(p))
    }
}

/// `(Σ |v|^p · cell)^{1/p}`, or `max |v|` for `p = ∞`.
pub fn lp_norm(values: impl IntoIterator<Item = f64>, cell_volume: f64, p: f64) -> Result<f64> {
    check_exponent(p)?;
    let iter = values.into_iter();
    if p.is_infinite() {
        return Ok(iter.fold(0.0, |m, v| m.max(v.abs())));
    }
    if p == 1.0 {
        return Ok(iter.map(f64::abs).sum::<f64>() * cell_volume);
    }
    if p == 2.0 {
        return Ok(libm::sqrt(iter.map(|v| v * v).sum::<f64>() * cell_volume));
    }
    // Scale by the maximum to keep |v|^p representable for large p.
    let values: alloc::vec::Vec<f64> = iter.map(f64::abs).collect();
    let max = values.iter().cloned().fold(0.0, f64::max);
    if max == 0.0 {
        return Ok(0.0);
    }
    let sum: f64 = values.iter().map(|v| libm::pow(v / max, p)).sum();
    Ok(max * libm::pow(sum * cell_volume, 1.0 / p))
}

/// `‖a‖_{l^r}` of a finite sequence.
pub fn lr_norm(terms: impl IntoIterator<Item = f64>, r: f64) -> Result<f64> {
    lp_norm(terms, 1.0, r)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sequence_norms() {
        let a = [3.0, -4.0];
        assert_eq!(lr_norm(a, 2.0).unwrap(), 5.0);
        assert_eq!(lr_norm(a, 1.0).unwrap(), 7.0);
        assert_eq!(lr_norm(a, f64::INFINITY).unwrap(), 4.0);
        assert!((lr_norm(a, 3.0).unwrap() - libm::cbrt(91.0)).abs() < 1e-13);
    }

    #[test]
    fn exponent_below_one_rejected() {
        assert_eq!(lr_norm([1.0], 0.5), Err(Error::InvalidExponent(0.5)));
        assert!(lr_norm([1.0], f64::NAN).is_err());
    }
}
