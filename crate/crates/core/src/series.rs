//! Kernel evaluation by the Bessel–Gegenbauer series with a certified stopping rule.
//!
//! For `m >= 3` the `k`-th term is
//! `a^{2λ/a} Γ((2λ+a)/a) e^{-iπk/a} (λ+k)/λ z^{-λ} J_{2(k+λ)/a}((2/a) z^{a/2}) C_k^λ(w)`;
//! for `m = 2` the `λ → 0` form `J_0(x) + 2 Σ_{k>=1} e^{-iπk/a} J_{2k/a}(x) cos kt` is used.
//!
//! The radial factor is evaluated as `Γ(2λ/a+1) a^{-2k/a} z^k J̃_ν(x)`, which is the
//! same quantity with the powers of `z` combined before exponentiation; its value at
//! `z = 0` is exactly `δ_{k0}`.

use num_complex::Complex;

use crate::error::{Error, Result};
use crate::params::{DeformParams, KernelArgs};
use crate::scalar::{quarter_turns, ComplexSum, Scalar};
use crate::specfun::{
    ascending_is_stable, ascending_normalized, bessel_j, gegenbauer, ln_gamma,
    ln_gegenbauer_at_one, GegenbauerSeq, RealOrder,
};

/// Stopping rule for the kernel series.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TruncationPolicy<T> {
    abs_tol: T,
    max_terms: usize,
    consecutive_small: usize,
}

impl<T: Scalar> TruncationPolicy<T> {
    pub fn new(abs_tol: T, max_terms: usize, consecutive_small: usize) -> Result<Self> {
        if !(abs_tol >= T::lit(1e-15)) || !abs_tol.is_finite() {
            return Err(Error::InvalidParameter(format!(
                "abs_tol = {abs_tol} must be >= 1e-15"
            )));
        }
        if max_terms < 8 {
            return Err(Error::InvalidParameter(format!(
                "max_terms = {max_terms} must be >= 8"
            )));
        }
        if consecutive_small < 3 {
            return Err(Error::InvalidParameter(format!(
                "consecutive_small = {consecutive_small} must be >= 3"
            )));
        }
        Ok(Self {
            abs_tol,
            max_terms,
            consecutive_small,
        })
    }

    pub fn abs_tol(&self) -> T {
        self.abs_tol
    }

    pub fn max_terms(&self) -> usize {
        self.max_terms
    }

    pub fn consecutive_small(&self) -> usize {
        self.consecutive_small
    }

    /// Same policy with a different tolerance.
    pub fn with_abs_tol(self, abs_tol: T) -> Result<Self> {
        Self::new(abs_tol, self.max_terms, self.consecutive_small)
    }

    pub fn with_max_terms(self, max_terms: usize) -> Result<Self> {
        Self::new(self.abs_tol, max_terms, self.consecutive_small)
    }
}

impl<T: Scalar> Default for TruncationPolicy<T> {
    fn default() -> Self {
        Self {
            abs_tol: T::lit(1e-15),
            max_terms: 4096,
            consecutive_small: 3,
        }
    }
}

/// Partial sum of a kernel series and the number of terms it used.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SeriesValue<T> {
    pub value: Complex<T>,
    pub terms: usize,
}

/// `e^{-iπk/a}`; exact quarter turns when `a = 2/n`.
pub fn phase<T: Scalar>(params: &DeformParams<T>, k: usize) -> Complex<T> {
    match params.rational_n() {
        Some(n) => quarter_turns(k as u64 * u64::from(n)),
        None => {
            let two = T::lit(2.0);
            let turns = T::from_count(k) / params.a();
            let turns = turns - two * (turns / two).floor();
            let angle = -T::PI() * turns;
            Complex::new(angle.cos(), angle.sin())
        }
    }
}

/// Bessel order `2(k+λ)/a` of the `k`-th term.
#[inline]
fn order_of<T: Scalar>(a: T, lambda: T, k: usize) -> T {
    T::lit(2.0) * (T::from_count(k) + lambda) / a
}

/// Bessel argument `(2/a) z^{a/2}`.
#[inline]
pub(crate) fn bessel_arg<T: Scalar>(a: T, z: T) -> T {
    T::lit(2.0) / a * z.powf(a * T::lit(0.5))
}

/// `Γ(2λ/a+1) a^{-2k/a} z^{k-p} J̃_ν(x)`, equal to `a^{2λ/a} Γ(2λ/a+1) z^{-λ-p} J_ν(x)`.
pub(crate) fn radial_factor<T: Scalar>(a: T, lambda: T, k: usize, z: T, p: usize) -> Result<T> {
    let two = T::lit(2.0);
    let nu = order_of(a, lambda, k);
    let base = two * lambda / a;
    let ln_norm = ln_gamma(base + T::one())?;
    if z == T::zero() {
        if k != p {
            return Ok(T::zero());
        }
        let l = ln_norm - two * T::from_count(k) / a * a.ln() - ln_gamma(nu + T::one())?;
        return Ok(l.exp());
    }
    let x = bessel_arg(a, z);
    if ascending_is_stable(nu, x) {
        let kp = T::from_count(k) - T::from_count(p);
        let l =
            ln_norm - two * T::from_count(k) / a * a.ln() + kp * z.ln() - ln_gamma(nu + T::one())?;
        return Ok(l.exp() * ascending_normalized(nu, x));
    }
    let j = bessel_j(RealOrder::new(nu)?, x)?;
    let l = ln_norm + base * a.ln() - (lambda + T::from_count(p)) * z.ln();
    Ok(l.exp() * j)
}

/// Series for `z^{-s} ∂_w^s K_a^m` scaled by the dimension-lift prefactor; `s = 0` is the kernel itself.
#[derive(Debug, Clone, Copy)]
pub(crate) struct SeriesPlan<T> {
    params: DeformParams<T>,
    steps: usize,
    /// `e^{isπ/a} a^{2s/a} Γ((2(λ+s)+a)/a) / (Γ((2λ+a)/a) Π_{i=1}^s 2(λ+i))`
    lift: Complex<T>,
}

impl<T: Scalar> SeriesPlan<T> {
    pub(crate) fn new(params: DeformParams<T>, steps: usize) -> Result<Self> {
        let lift = if steps == 0 {
            Complex::new(T::one(), T::zero())
        } else {
            lift_prefactor(&params, steps)?
        };
        Ok(Self {
            params,
            steps,
            lift,
        })
    }

    /// Derivative series with an explicitly supplied prefactor.
    pub(crate) fn with_prefactor(params: DeformParams<T>, steps: usize, lift: Complex<T>) -> Self {
        Self {
            params,
            steps,
            lift,
        }
    }

    fn lambda(&self) -> T {
        self.params.lambda()
    }

    /// Constant part of the angular factor for term `k >= steps`.
    fn angular_coef(&self, k: usize) -> T {
        let lambda = self.lambda();
        let kk = T::from_count(k);
        if self.steps == 0 {
            if lambda == T::zero() {
                return if k == 0 { T::one() } else { T::lit(2.0) };
            }
            return (lambda + kk) / lambda;
        }
        // ∂^s[(λ+k)/λ C_k^λ] = 2^s (λ+k) (λ+1)_{s-1} C_{k-s}^{λ+s}
        let mut c = T::lit(2.0).powi(self.steps as i32) * (lambda + kk);
        for i in 1..self.steps {
            c = c * (lambda + T::from_count(i));
        }
        c
    }

    /// ln of an upper bound on |angular factor| over `w ∈ [-1, 1]`.
    fn ln_angular_bound(&self, k: usize) -> Result<T> {
        let lambda = self.lambda();
        let coef = self.angular_coef(k).ln();
        if self.steps == 0 {
            if lambda == T::zero() {
                return Ok(coef);
            }
            return Ok(coef + ln_gegenbauer_at_one(k, lambda)?);
        }
        Ok(coef + ln_gegenbauer_at_one(k - self.steps, lambda + T::from_count(self.steps))?)
    }

    /// ln of the envelope `|term_k| <= ...` using `|J̃_ν| <= 1/Γ(ν+1)`; `None` when the bound is 0.
    fn ln_envelope(&self, k: usize, z: T) -> Result<Option<T>> {
        if k < self.steps {
            return Ok(None);
        }
        let a = self.params.a();
        let lambda = self.lambda();
        let two = T::lit(2.0);
        let zpow = k - self.steps;
        let ln_z = if zpow == 0 {
            T::zero()
        } else if z == T::zero() {
            return Ok(None);
        } else {
            T::from_count(zpow) * z.ln()
        };
        let nu = order_of(a, lambda, k);
        let l = self.lift.norm().ln() + ln_gamma(two * lambda / a + T::one())?
            - two * T::from_count(k) / a * a.ln()
            + ln_z
            - ln_gamma(nu + T::one())?
            + self.ln_angular_bound(k)?;
        Ok(Some(l))
    }

    /// Index at which the stopping rule fires, judged on the envelope alone.
    fn envelope_says_stop(
        &self,
        k: usize,
        z: T,
        x: T,
        prev: Option<T>,
        tol: T,
    ) -> Result<(bool, Option<T>)> {
        let env = self.ln_envelope(k, z)?;
        let nu = order_of(self.params.a(), self.lambda(), k);
        let small = match env {
            None => nu > x || k < self.steps,
            Some(l) => {
                let below = l < (tol * T::lit(0.25)).ln();
                let decaying = match prev {
                    None => true,
                    Some(p) => l <= p - T::LN_2(),
                };
                nu > x && below && decaying
            }
        };
        Ok((small, env))
    }

    pub(crate) fn evaluate(
        &self,
        args: &KernelArgs<T>,
        policy: &TruncationPolicy<T>,
    ) -> Result<SeriesValue<T>> {
        let a = self.params.a();
        let lambda = self.lambda();
        let z = args.z();
        let x = bessel_arg(a, z);
        let s = self.steps;
        let mut geg = if s == 0 && lambda == T::zero() {
            None
        } else {
            Some(GegenbauerSeq::new(lambda + T::from_count(s), args.w()))
        };
        let mut sum = ComplexSum::new();
        let mut run = 0;
        let mut prev_env = None;
        for k in 0..policy.max_terms() {
            if k >= s {
                let poly = match geg.as_mut() {
                    Some(g) => g.next().expect("unbounded iterator"),
                    None if k == 0 => T::one(),
                    None => (T::from_count(k) * args.t()).cos(),
                };
                let ang = self.angular_coef(k) * poly;
                let rad = radial_factor(a, lambda, k, z, s)?;
                sum.add(self.lift * phase(&self.params, k) * (ang * rad));
            }
            let (small, env) = self.envelope_says_stop(k, z, x, prev_env, policy.abs_tol())?;
            prev_env = env;
            run = if small { run + 1 } else { 0 };
            if run >= policy.consecutive_small() {
                return Ok(SeriesValue {
                    value: sum.value(),
                    terms: k + 1,
                });
            }
        }
        Err(Error::NonConvergence {
            max_terms: policy.max_terms(),
            z: z.to_f64().unwrap_or(f64::NAN),
        })
    }

    /// Term count the stopping rule reaches at `z_max`; an upper bound for every `z <= z_max`.
    pub(crate) fn required_terms(
        &self,
        z_max: T,
        tol: T,
        consecutive_small: usize,
    ) -> Result<usize> {
        let x = bessel_arg(self.params.a(), z_max);
        let mut run = 0;
        let mut prev_env = None;
        let mut k = 0;
        loop {
            let (small, env) = self.envelope_says_stop(k, z_max, x, prev_env, tol)?;
            prev_env = env;
            run = if small { run + 1 } else { 0 };
            if run >= consecutive_small {
                return Ok(k + 1);
            }
            k += 1;
        }
    }
}

/// Combined prefactor of `steps` applications of the dimension-raising identity.
pub(crate) fn lift_prefactor<T: Scalar>(
    params: &DeformParams<T>,
    steps: usize,
) -> Result<Complex<T>> {
    let a = params.a();
    let lambda = params.lambda();
    let two = T::lit(2.0);
    let s = T::from_count(steps);
    let mut ln_mag = two * s / a * a.ln() + ln_gamma((two * (lambda + s) + a) / a)?
        - ln_gamma((two * lambda + a) / a)?;
    for i in 1..=steps {
        ln_mag = ln_mag - (two * (lambda + T::from_count(i))).ln();
    }
    Ok(phase(params, steps).conj() * ln_mag.exp())
}

/// The `k`-th summand of the kernel series, prefactor included.
pub fn series_term<T: Scalar>(
    params: &DeformParams<T>,
    args: &KernelArgs<T>,
    k: usize,
) -> Result<Complex<T>> {
    let lambda = params.lambda();
    let angular = if lambda == T::zero() {
        if k == 0 {
            T::one()
        } else {
            T::lit(2.0) * (T::from_count(k) * args.t()).cos()
        }
    } else {
        (lambda + T::from_count(k)) / lambda * gegenbauer(k, lambda, args.w())?
    };
    let rad = radial_factor(params.a(), lambda, k, args.z(), 0)?;
    Ok(phase(params, k) * (angular * rad))
}

/// `K_a^m(z, w)` by the truncated series.
pub fn kernel_series<T: Scalar>(
    params: &DeformParams<T>,
    args: &KernelArgs<T>,
    policy: &TruncationPolicy<T>,
) -> Result<SeriesValue<T>> {
    SeriesPlan::new(*params, 0)?.evaluate(args, policy)
}

/// Term count beyond which every tail term is below `tol` for all `z <= z_max`
/// (with the default `consecutive_small`).
pub fn required_terms<T: Scalar>(params: &DeformParams<T>, z_max: T, tol: T) -> usize {
    let policy = TruncationPolicy::<T>::default();
    SeriesPlan::new(*params, 0)
        .and_then(|p| p.required_terms(z_max.max(T::zero()), tol, policy.consecutive_small()))
        .unwrap_or(usize::MAX)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(a: f64, m: u32) -> DeformParams<f64> {
        DeformParams::new(a, m).unwrap()
    }

    fn args(z: f64, w: f64) -> KernelArgs<f64> {
        KernelArgs::new(z, w).unwrap()
    }

    fn series(a: f64, m: u32, z: f64, w: f64) -> SeriesValue<f64> {
        kernel_series(&p(a, m), &args(z, w), &TruncationPolicy::default()).unwrap()
    }

    #[test]
    fn policy_validation() {
        assert!(TruncationPolicy::new(1e-16_f64, 100, 3).is_err());
        assert!(TruncationPolicy::new(1e-12_f64, 7, 3).is_err());
        assert!(TruncationPolicy::new(1e-12_f64, 100, 2).is_err());
        assert!(TruncationPolicy::new(1e-12_f64, 100, 3).is_ok());
    }

    #[test]
    fn term_at_zero_argument() {
        let params = p(2.0, 4);
        let at0 = args(0.0, 0.3);
        let t0 = series_term(&params, &at0, 0).unwrap();
        assert_eq!(t0, Complex::new(1.0, 0.0));
        for k in 1..6 {
            assert_eq!(
                series_term(&params, &at0, k).unwrap(),
                Complex::new(0.0, 0.0)
            );
        }
    }

    #[test]
    fn phase_of_first_term_for_two_thirds() {
        // e^{-3iπ/2} = i
        let params = DeformParams::<f64>::from_n(3, 2).unwrap();
        assert_eq!(phase(&params, 1), Complex::new(0.0, 1.0));
        let a = args(1.7, 0.25);
        let x = 3.0 * 1.7_f64.powf(1.0 / 3.0);
        let j3 = bessel_j(RealOrder::new(3.0).unwrap(), x).unwrap();
        let want = Complex::new(0.0, 2.0 * j3 * a.t().cos());
        let got = series_term(&params, &a, 1).unwrap();
        assert!((got - want).norm() < 1e-15);
    }

    #[test]
    fn term_zero_for_a1_m3() {
        // Γ(2)·z^{-1/2} J_1(2 z^{1/2}) C_0 at z = 1: J_1(2)
        let got = series_term(&p(1.0, 3), &args(1.0, 1.0), 0).unwrap();
        assert!((got.re - 0.576_724_807_756_873_387_2).abs() < 1e-15);
        assert_eq!(got.im, 0.0);
    }

    #[test]
    fn phase_pattern_is_exact() {
        for n in 1..=6u32 {
            let params = DeformParams::<f64>::from_n(n, 3).unwrap();
            for k in 0..=100usize {
                let want = match (k as u32 * n) % 4 {
                    0 => Complex::new(1.0, 0.0),
                    1 => Complex::new(0.0, -1.0),
                    2 => Complex::new(-1.0, 0.0),
                    _ => Complex::new(0.0, 1.0),
                };
                assert_eq!(phase(&params, k), want);
            }
        }
    }

    #[test]
    fn generic_phase_matches_exponential() {
        let params = p(0.7, 3);
        for k in 0..40 {
            let ang = -std::f64::consts::PI * k as f64 / 0.7;
            let want = Complex::new(ang.cos(), ang.sin());
            assert!((phase(&params, k) - want).norm() < 1e-13);
        }
    }

    #[test]
    fn a2_series_is_the_exponential() {
        let v = series(2.0, 3, 5.0, 0.3);
        let want = Complex::new(0.0, -1.5).exp();
        assert!((v.value - want).norm() < 1e-13);
    }

    #[test]
    fn a1_dim2_series_is_cosine() {
        let v = series(1.0, 2, 2.0, 0.5);
        assert!((v.value.re - 6.0_f64.sqrt().cos()).abs() < 1e-13);
        assert!(v.value.im.abs() < 1e-13);
    }

    #[test]
    fn zero_argument_normalization() {
        for &a in &[2.0, 1.0, 2.0 / 3.0, 0.5, 0.7, 2.6] {
            for m in [2, 3, 4, 7] {
                for w in [-1.0, 0.0, 0.6] {
                    let v = series(a, m, 0.0, w);
                    assert!((v.value - Complex::new(1.0, 0.0)).norm() < 1e-15);
                    assert!(v.terms <= 8);
                }
                // continuity towards z = 0: the k = 0 correction is O(x²), x = (2/a) z^{a/2}
                let x = bessel_arg(a, 1e-8);
                let v = series(a, m, 1e-8, 0.2);
                // k = 1 contributes O((x/2)^{2/a})
                let bound = x * x + 4.0 * (x / 2.0).powf(2.0 / a);
                assert!(
                    (v.value - Complex::new(1.0, 0.0)).norm() < bound,
                    "a={a} m={m}"
                );
            }
        }
    }

    #[test]
    fn irrational_deformations_match_reference() {
        // reference values summed to 200 terms at 40 digits
        let cases = [
            (
                0.7,
                3,
                2.5,
                0.3,
                0.072_152_145_506_577_321_029,
                0.098_982_106_622_343_379_805,
            ),
            (
                1.3,
                4,
                4.0,
                -0.6,
                0.566_721_391_790_222_536_9,
                0.395_735_230_538_689_283_85,
            ),
            (
                0.4,
                3,
                3.0,
                0.8,
                -0.026_914_934_315_068_119_943,
                -0.049_060_778_504_576_981_818,
            ),
            (0.5, 6, 7.0, -0.2, 0.279_514_127_099_118_386_59, 0.0),
            (
                2.6,
                2,
                3.5,
                0.45,
                1.136_275_623_473_921_5,
                -0.550_077_550_100_291_990_97,
            ),
        ];
        for (a, m, z, w, re, im) in cases {
            let v = series(a, m, z, w).value;
            assert!(
                (v - Complex::new(re, im)).norm() < 1e-12,
                "a={a} m={m}: {v}"
            );
        }
    }

    #[test]
    fn required_terms_examples() {
        assert!(required_terms(&p(2.0, 2), 0.0, 1e-12) <= 8);
        let n2 = required_terms(&p(2.0, 2), 10.0, 1e-12);
        // the term right after the bound is already below tolerance
        let t = series_term(&p(2.0, 2), &args(10.0, 1.0), n2).unwrap();
        assert!(t.norm() < 1e-12);
        let n23 = required_terms(&DeformParams::<f64>::from_n(3, 2).unwrap(), 10.0, 1e-12);
        assert!(n23 > 0);
    }

    #[test]
    fn non_convergence_is_reported() {
        let policy = TruncationPolicy::new(1e-15, 8, 3).unwrap();
        let err = kernel_series(&p(2.0, 3), &args(50.0, 0.1), &policy).unwrap_err();
        assert!(matches!(err, Error::NonConvergence { .. }));
    }

    #[test]
    fn single_precision_series() {
        let params = DeformParams::new(2.0_f32, 3).unwrap();
        let v = kernel_series(
            &params,
            &KernelArgs::new(2.0_f32, 0.5).unwrap(),
            &TruncationPolicy::new(1e-6, 200, 3).unwrap(),
        )
        .unwrap();
        assert!((v.value - Complex::new(0.0_f32, -1.0).exp()).norm() < 1e-4);
    }
}
