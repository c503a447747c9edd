//! Gegenbauer and generalized Laguerre polynomials by three-term recurrence.

use crate::error::{domain, Result};
use crate::scalar::Scalar;
use crate::specfun::gamma::ln_gamma;

fn check_gegenbauer_args<T: Scalar>(lambda: T, w: T) -> Result<()> {
    if lambda.is_nan() || lambda <= T::zero() {
        return Err(domain(
            "gegenbauer",
            format!("lambda = {lambda} must be > 0"),
        ));
    }
    if w.is_nan() || w.abs() > T::one() {
        return Err(domain("gegenbauer", format!("|w| = {} > 1", w.abs())));
    }
    Ok(())
}

/// `C_k^λ(w)` for `λ > 0`, `|w| <= 1`.
pub fn gegenbauer<T: Scalar>(k: usize, lambda: T, w: T) -> Result<T> {
    check_gegenbauer_args(lambda, w)?;
    Ok(GegenbauerSeq::new(lambda, w)
        .nth(k)
        .expect("unbounded iterator"))
}

/// Successive values `C_0^λ(w), C_1^λ(w), …` without domain checks.
#[derive(Debug, Clone)]
pub(crate) struct GegenbauerSeq<T> {
    lambda: T,
    w: T,
    k: usize,
    prev: T,
    cur: T,
}

impl<T: Scalar> GegenbauerSeq<T> {
    pub(crate) fn new(lambda: T, w: T) -> Self {
        Self {
            lambda,
            w,
            k: 0,
            prev: T::zero(),
            cur: T::one(),
        }
    }
}

impl<T: Scalar> Iterator for GegenbauerSeq<T> {
    type Item = T;

    fn next(&mut self) -> Option<T> {
        let out = self.cur;
        let k = self.k + 1;
        let next = if k == 1 {
            T::lit(2.0) * self.lambda * self.w
        } else {
            // k C_k = 2(k+λ-1) w C_{k-1} - (k+2λ-2) C_{k-2}
            let kk = T::from_count(k);
            let two = T::lit(2.0);
            (two * (kk + self.lambda - T::one()) * self.w * self.cur
                - (kk + two * self.lambda - two) * self.prev)
                / kk
        };
        self.prev = self.cur;
        self.cur = next;
        self.k = k;
        Some(out)
    }
}

/// `ln C_k^λ(1) = ln[(2λ)_k / k!]`.
pub(crate) fn ln_gegenbauer_at_one<T: Scalar>(k: usize, lambda: T) -> Result<T> {
    if k == 0 {
        return Ok(T::zero());
    }
    let two_l = T::lit(2.0) * lambda;
    let kk = T::from_count(k);
    Ok(ln_gamma(kk + two_l)? - ln_gamma(two_l)? - ln_gamma(kk + T::one())?)
}

/// `lim_{λ→0} λ^{-1} C_k^λ(cos t) = (2/k) cos kt` for `k >= 1`; the `k = 0` value is 1.
pub fn gegenbauer_limit<T: Scalar>(k: usize, t: T) -> Result<T> {
    if t.is_nan() {
        return Err(domain("gegenbauer_limit", "NaN angle"));
    }
    if k == 0 {
        return Ok(T::one());
    }
    let kk = T::from_count(k);
    Ok(T::lit(2.0) / kk * (kk * t).cos())
}

/// `L_j^α(u)` for `α > -1`, `u >= 0`.
pub fn laguerre<T: Scalar>(j: usize, alpha: T, u: T) -> Result<T> {
    if alpha.is_nan() || alpha <= -T::one() {
        return Err(domain("laguerre", format!("alpha = {alpha} must be > -1")));
    }
    if u.is_nan() || u < T::zero() {
        return Err(domain("laguerre", format!("u = {u} must be >= 0")));
    }
    let mut prev = T::one();
    if j == 0 {
        return Ok(prev);
    }
    let mut cur = T::one() + alpha - u;
    for i in 1..j {
        // (i+1) L_{i+1} = (2i+1+α-u) L_i - (i+α) L_{i-1}
        let ii = T::from_count(i);
        let next = ((T::lit(2.0) * ii + T::one() + alpha - u) * cur - (ii + alpha) * prev)
            / (ii + T::one());
        prev = cur;
        cur = next;
    }
    Ok(cur)
}

#[cfg(test)]
mod tests {
    use super::*;

    /// C_k^λ by the explicit sum Σ_i (-1)^i Γ(k-i+λ)/(Γ(λ) i! (k-2i)!) (2w)^{k-2i}.
    fn gegenbauer_explicit(k: usize, lambda: f64, w: f64) -> f64 {
        let mut s = 0.0;
        for i in 0..=k / 2 {
            let lg = ln_gamma((k - i) as f64 + lambda).unwrap()
                - ln_gamma(lambda).unwrap()
                - ln_gamma(i as f64 + 1.0).unwrap()
                - ln_gamma((k - 2 * i) as f64 + 1.0).unwrap();
            let sign = if i % 2 == 0 { 1.0 } else { -1.0 };
            s += sign * lg.exp() * (2.0 * w).powi((k - 2 * i) as i32);
        }
        s
    }

    /// L_j^α by the explicit sum Σ_i (-1)^i binom(j+α, j-i) u^i / i!.
    fn laguerre_explicit(j: usize, alpha: f64, u: f64) -> f64 {
        let mut s = 0.0;
        let mut fact = 1.0;
        for i in 0..=j {
            if i > 0 {
                fact *= i as f64;
            }
            // binom(j+α, j-i) = Π_{r=1}^{j-i} (α+i+r)/r
            let binom: f64 = (1..=j - i)
                .map(|r| (alpha + (i + r) as f64) / r as f64)
                .product();
            let sign = if i % 2 == 0 { 1.0 } else { -1.0 };
            s += sign * binom * u.powi(i as i32) / fact;
        }
        s
    }

    #[test]
    fn gegenbauer_seeds_and_small_cases() {
        assert_eq!(gegenbauer(0, 2.3, 0.1).unwrap(), 1.0);
        assert!((gegenbauer(1, 1.5_f64, 0.4).unwrap() - 1.2).abs() < 1e-15);
        // C_2^1(w) = 2·1·2·w² - 1 = 0 at w = 1/2
        assert!(gegenbauer(2, 1.0_f64, 0.5).unwrap().abs() < 1e-15);
    }

    #[test]
    fn gegenbauer_matches_explicit_sum() {
        for k in 0..15 {
            for &lambda in &[0.5, 1.0, 2.5, 4.0] {
                for &w in &[-1.0, -0.3, 0.2, 0.77, 1.0] {
                    let a = gegenbauer(k, lambda, w).unwrap();
                    let b = gegenbauer_explicit(k, lambda, w);
                    assert!(
                        (a - b).abs() < 1e-10 * b.abs().max(1.0),
                        "k={k} λ={lambda} w={w}"
                    );
                }
            }
        }
    }

    #[test]
    fn gegenbauer_at_one_closed_form() {
        for k in 0..30 {
            for &lambda in &[0.5, 1.5, 3.0] {
                let v: f64 = gegenbauer(k, lambda, 1.0).unwrap();
                let lg = ln_gegenbauer_at_one(k, lambda).unwrap();
                assert!((v.ln() - lg).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn gegenbauer_domain_errors() {
        assert!(gegenbauer(3, 0.0, 0.5).is_err());
        assert!(gegenbauer(3, 1.0, 1.01).is_err());
    }

    #[test]
    fn limit_values() {
        assert_eq!(gegenbauer_limit(1, 0.0).unwrap(), 2.0);
        assert!(
            gegenbauer_limit(3, std::f64::consts::FRAC_PI_2)
                .unwrap()
                .abs()
                < 1e-15
        );
        assert_eq!(gegenbauer_limit(0, 1.234).unwrap(), 1.0);
        // small-λ numerical limit
        let lam = 1e-8;
        let t: f64 = 0.7;
        let num = gegenbauer(4, lam, t.cos()).unwrap() / lam;
        assert!((num - gegenbauer_limit(4, t).unwrap()).abs() < 1e-6);
    }

    #[test]
    fn laguerre_values() {
        assert_eq!(laguerre(0, 0.7, 3.0).unwrap(), 1.0);
        assert!((laguerre(1, 2.0_f64, 0.5).unwrap() - 2.5).abs() < 1e-15);
        // L_3^{1/2}(1) from the explicit sum
        let want = laguerre_explicit(3, 0.5, 1.0);
        assert!((laguerre(3, 0.5, 1.0).unwrap() - want).abs() < 1e-14);
        assert!(laguerre(2, -1.0, 1.0).is_err());
        assert!(laguerre(2, 0.0, -1.0).is_err());
    }

    #[test]
    fn laguerre_matches_explicit_sum() {
        for j in 0..=10 {
            for &alpha in &[-0.5, 0.0, 0.5, 1.0, 3.0, 6.0] {
                for &u in &[0.0, 0.3, 1.0, 2.5, 7.0, 12.0] {
                    let a = laguerre(j, alpha, u).unwrap();
                    let b = laguerre_explicit(j, alpha, u);
                    assert!(
                        (a - b).abs() < 1e-10 * b.abs().max(1.0),
                        "j={j} α={alpha} u={u}: {a} vs {b}"
                    );
                }
            }
        }
    }
}
