//! Index-`n` downsampling of absolutely convergent cosine series.
//!
//! If `f(t) = Σ a_k cos kt` then `g(t) = Σ a_{nk} cos kt` equals the average
//! `(1/n) Σ_{j<n} f((t + 2πj)/n)`. Both sides are available here so they can be
//! checked against each other; the dimension-2 closed kernel is this identity
//! applied to the Jacobi–Anger expansion.

use num_complex::Complex;

use crate::error::{Error, Result};
use crate::scalar::{quarter_turns, ComplexSum, Scalar};
use crate::specfun::{bessel_j, RealOrder};

/// Finite cosine series `Σ_{k<=K} a_k cos kt` with its absolute coefficient sum.
#[derive(Debug, Clone, PartialEq)]
pub struct CosineSeries<T> {
    coeffs: Vec<Complex<T>>,
    abs_sum: T,
}

impl<T: Scalar> CosineSeries<T> {
    pub fn new(coeffs: Vec<Complex<T>>) -> Self {
        let abs_sum = coeffs.iter().map(|c| c.norm()).sum();
        Self { coeffs, abs_sum }
    }

    pub fn coeffs(&self) -> &[Complex<T>] {
        &self.coeffs
    }

    /// `Σ |a_k|`, a uniform bound on `|f(t)|`.
    pub fn abs_sum(&self) -> T {
        self.abs_sum
    }

    pub fn len(&self) -> usize {
        self.coeffs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coeffs.is_empty()
    }
}

/// `Σ a_k cos kt`, compensated.
pub fn eval_series<T: Scalar>(s: &CosineSeries<T>, t: T) -> Complex<T> {
    let mut acc = ComplexSum::new();
    for (k, &a) in s.coeffs.iter().enumerate() {
        acc.add(a * (T::from_count(k) * t).cos());
    }
    acc.value()
}

/// `(a_0, a_n, a_{2n}, …)`.
pub fn downsample_coeffs<T: Scalar>(s: &CosineSeries<T>, n: usize) -> Result<CosineSeries<T>> {
    if n == 0 {
        return Err(Error::InvalidParameter(
            "downsampling factor must be >= 1".into(),
        ));
    }
    Ok(CosineSeries::new(
        s.coeffs.iter().step_by(n).copied().collect(),
    ))
}

/// `(1/n) Σ_{j<n} f((t + 2πj)/n)`.
pub fn downsample_by_shifts<T, F>(f: F, n: usize, t: T) -> Result<Complex<T>>
where
    T: Scalar,
    F: Fn(T) -> Complex<T>,
{
    if n == 0 {
        return Err(Error::InvalidParameter(
            "downsampling factor must be >= 1".into(),
        ));
    }
    let nf = T::from_count(n);
    let mut acc = ComplexSum::new();
    for j in 0..n {
        acc.add(f((t + T::TAU() * T::from_count(j)) / nf));
    }
    Ok(acc.value() / nf)
}

/// Jacobi–Anger coefficients of `e^{-iz cos t}`: `[J_0(z), 2(-i)J_1(z), …, 2(-i)^K J_K(z)]`.
///
/// The caller picks `K` so that `2|J_K(z)|` is negligible.
pub fn jacobi_anger_coeffs<T: Scalar>(z: T, order: usize) -> Result<CosineSeries<T>> {
    let mut coeffs = Vec::with_capacity(order + 1);
    for k in 0..=order {
        let j = bessel_j(RealOrder::new(T::from_count(k))?, z)?;
        let scale = if k == 0 { T::one() } else { T::lit(2.0) };
        coeffs.push(quarter_turns::<T>(k as u64) * (scale * j));
    }
    Ok(CosineSeries::new(coeffs))
}

/// Smallest order with `2|J_K(z)| < tol` past the oscillatory region.
pub fn jacobi_anger_order<T: Scalar>(z: T, tol: T) -> Result<usize> {
    let mut k = z.ceil().to_usize().unwrap_or(0);
    loop {
        let j = bessel_j(RealOrder::new(T::from_count(k))?, z)?;
        if T::lit(2.0) * j.abs() < tol {
            return Ok(k);
        }
        k += 1;
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    fn c(x: f64) -> Complex<f64> {
        Complex::new(x, 0.0)
    }

    #[test]
    fn evaluation_examples() {
        assert_eq!(eval_series(&CosineSeries::new(vec![c(1.0)]), 0.7), c(1.0));
        let v = eval_series(&CosineSeries::new(vec![c(0.0), c(1.0)]), PI / 3.0);
        assert!((v - c(0.5)).norm() < 1e-15);
        let v = eval_series(&CosineSeries::new(vec![c(0.0), c(0.0), c(1.0)]), 0.4);
        assert!((v - c((0.8_f64).cos())).norm() < 1e-15);
    }

    #[test]
    fn coefficient_selection() {
        let s = CosineSeries::new((0..5).map(|k| c(k as f64)).collect());
        assert_eq!(
            downsample_coeffs(&s, 2).unwrap().coeffs(),
            &[c(0.0), c(2.0), c(4.0)]
        );
        assert_eq!(downsample_coeffs(&s, 1).unwrap(), s);
        let s = CosineSeries::new(vec![c(0.0), c(1.0)]);
        assert_eq!(downsample_coeffs(&s, 2).unwrap().coeffs(), &[c(0.0)]);
        assert!(downsample_coeffs(&s, 0).is_err());
    }

    #[test]
    fn shift_average_examples() {
        for t in [0.0, 0.3, 2.0, 5.9] {
            let v = downsample_by_shifts(|u: f64| c(u.cos()), 2, t).unwrap();
            assert!(v.norm() < 1e-15);
            let v = downsample_by_shifts(|u: f64| c((2.0 * u).cos()), 2, t).unwrap();
            assert!((v - c(t.cos())).norm() < 1e-14);
        }
    }

    #[test]
    fn jacobi_anger_examples() {
        let s = jacobi_anger_coeffs(0.0_f64, 6).unwrap();
        assert_eq!(s.coeffs()[0], c(1.0));
        assert!(s.coeffs()[1..].iter().all(|&a| a == c(0.0)));
        let v = eval_series(&jacobi_anger_coeffs(1.0, 30).unwrap(), 0.0);
        assert!((v - Complex::new(0.0, -1.0).exp()).norm() < 1e-14);
        let v = eval_series(&jacobi_anger_coeffs(5.0, 40).unwrap(), PI / 2.0);
        assert!((v - c(1.0)).norm() < 1e-14);
    }

    #[test]
    fn order_selection_reaches_tolerance() {
        let k = jacobi_anger_order(12.0_f64, 1e-16).unwrap();
        let s = jacobi_anger_coeffs(12.0, k).unwrap();
        for t in [0.0_f64, 1.0, 2.5] {
            let want = Complex::new(0.0, -12.0 * t.cos()).exp();
            assert!((eval_series(&s, t) - want).norm() < 1e-13);
        }
    }
}
