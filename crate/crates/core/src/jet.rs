//! Truncated Taylor series ("jets") in one variable with complex coefficients.
//!
//! A jet of order `d` at base point `w₀` stores `c_0 … c_d`, the Taylor
//! coefficients of a function in powers of `(w - w₀)`. All operations are exact
//! truncated-series algebra, so `f^{(j)}(w₀) = j! c_j` for the composed function.

use std::ops::{Add, Mul, Neg, Sub};

use num_complex::Complex;

use crate::scalar::Scalar;

#[derive(Debug, Clone, PartialEq)]
pub struct Jet<T> {
    basepoint: T,
    coeffs: Vec<Complex<T>>,
}

impl<T: Scalar> Jet<T> {
    /// Jet from raw coefficients; the order is `coeffs.len() - 1`.
    pub fn from_coeffs(basepoint: T, coeffs: Vec<Complex<T>>) -> Self {
        assert!(!coeffs.is_empty(), "a jet needs at least one coefficient");
        Self { basepoint, coeffs }
    }

    pub fn constant(basepoint: T, order: usize, value: Complex<T>) -> Self {
        let mut coeffs = vec![Complex::new(T::zero(), T::zero()); order + 1];
        coeffs[0] = value;
        Self { basepoint, coeffs }
    }

    /// The identity function `w ↦ w` expanded at `w₀`.
    pub fn variable(basepoint: T, order: usize) -> Self {
        let mut j = Self::constant(basepoint, order, Complex::new(basepoint, T::zero()));
        if order >= 1 {
            j.coeffs[1] = Complex::new(T::one(), T::zero());
        }
        j
    }

    #[inline]
    pub fn order(&self) -> usize {
        self.coeffs.len() - 1
    }

    #[inline]
    pub fn basepoint(&self) -> T {
        self.basepoint
    }

    #[inline]
    pub fn coeffs(&self) -> &[Complex<T>] {
        &self.coeffs
    }

    #[inline]
    pub fn value(&self) -> Complex<T> {
        self.coeffs[0]
    }

    /// `j`-th derivative at the base point, `j! c_j`.
    pub fn derivative(&self, j: usize) -> Complex<T> {
        let mut f = T::one();
        for i in 2..=j {
            f = f * T::from_count(i);
        }
        self.coeffs[j] * f
    }

    fn zeros_like(&self) -> Vec<Complex<T>> {
        vec![Complex::new(T::zero(), T::zero()); self.coeffs.len()]
    }

    fn check_compatible(&self, other: &Self) {
        assert_eq!(self.coeffs.len(), other.coeffs.len(), "jet orders differ");
    }

    pub fn scale(&self, s: Complex<T>) -> Self {
        Self {
            basepoint: self.basepoint,
            coeffs: self.coeffs.iter().map(|&c| c * s).collect(),
        }
    }

    pub fn add_const(&self, s: Complex<T>) -> Self {
        let mut out = self.clone();
        out.coeffs[0] = out.coeffs[0] + s;
        out
    }

    /// `1 / f`; requires `f(w₀) != 0`.
    pub fn recip(&self) -> Self {
        let mut out = self.zeros_like();
        let inv0 = self.coeffs[0].inv();
        out[0] = inv0;
        for k in 1..out.len() {
            let mut acc = Complex::new(T::zero(), T::zero());
            for i in 1..=k {
                acc = acc + self.coeffs[i] * out[k - i];
            }
            out[k] = -acc * inv0;
        }
        Self {
            basepoint: self.basepoint,
            coeffs: out,
        }
    }

    /// Principal square root; requires `f(w₀) != 0`.
    pub fn sqrt(&self) -> Self {
        let mut out = self.zeros_like();
        let b0 = self.coeffs[0].sqrt();
        out[0] = b0;
        let two_b0 = b0 * T::lit(2.0);
        for k in 1..out.len() {
            let mut acc = self.coeffs[k];
            for i in 1..k {
                acc = acc - out[i] * out[k - i];
            }
            out[k] = acc / two_b0;
        }
        Self {
            basepoint: self.basepoint,
            coeffs: out,
        }
    }

    pub fn exp(&self) -> Self {
        let mut out = self.zeros_like();
        out[0] = self.coeffs[0].exp();
        for k in 1..out.len() {
            let mut acc = Complex::new(T::zero(), T::zero());
            for i in 1..=k {
                acc = acc + self.coeffs[i] * out[k - i] * T::from_count(i);
            }
            out[k] = acc / T::from_count(k);
        }
        Self {
            basepoint: self.basepoint,
            coeffs: out,
        }
    }

    /// `(sin f, cos f)` by the coupled recurrence.
    pub fn sin_cos(&self) -> (Self, Self) {
        let mut s = self.zeros_like();
        let mut c = self.zeros_like();
        s[0] = self.coeffs[0].sin();
        c[0] = self.coeffs[0].cos();
        for k in 1..s.len() {
            let mut acc_s = Complex::new(T::zero(), T::zero());
            let mut acc_c = Complex::new(T::zero(), T::zero());
            for i in 1..=k {
                let ia = self.coeffs[i] * T::from_count(i);
                acc_s = acc_s + ia * c[k - i];
                acc_c = acc_c + ia * s[k - i];
            }
            let kk = T::from_count(k);
            s[k] = acc_s / kk;
            c[k] = -acc_c / kk;
        }
        (
            Self {
                basepoint: self.basepoint,
                coeffs: s,
            },
            Self {
                basepoint: self.basepoint,
                coeffs: c,
            },
        )
    }

    pub fn cos(&self) -> Self {
        self.sin_cos().1
    }

    pub fn sin(&self) -> Self {
        self.sin_cos().0
    }

    /// Derivative jet, one order lower (order 0 stays order 0 with a zero value).
    pub fn differentiate(&self) -> Self {
        if self.order() == 0 {
            return Self::constant(self.basepoint, 0, Complex::new(T::zero(), T::zero()));
        }
        let coeffs = (1..self.coeffs.len())
            .map(|i| self.coeffs[i] * T::from_count(i))
            .collect();
        Self {
            basepoint: self.basepoint,
            coeffs,
        }
    }

    /// Antiderivative with the given constant term, one order higher.
    pub fn integrate(&self, constant: Complex<T>) -> Self {
        let mut coeffs = Vec::with_capacity(self.coeffs.len() + 1);
        coeffs.push(constant);
        for (i, &c) in self.coeffs.iter().enumerate() {
            coeffs.push(c / T::from_count(i + 1));
        }
        Self {
            basepoint: self.basepoint,
            coeffs,
        }
    }

    /// Principal `arccos` of a real-valued jet with `|f(w₀)| < 1`, via `(arccos f)' = -f'/sqrt(1-f²)`.
    pub fn acos(&self) -> Self {
        let v0 = self.coeffs[0];
        let value = Complex::new(v0.re.acos(), T::zero());
        if self.order() == 0 {
            return Self::constant(self.basepoint, 0, value);
        }
        let lower = self.truncate(self.order() - 1);
        let one_minus_sq = (&lower * &lower)
            .neg()
            .add_const(Complex::new(T::one(), T::zero()));
        let slope = -(&self.differentiate() * &one_minus_sq.sqrt().recip());
        slope.integrate(value)
    }

    /// Keep coefficients `0..=order`.
    pub fn truncate(&self, order: usize) -> Self {
        Self {
            basepoint: self.basepoint,
            coeffs: self.coeffs[..=order.min(self.order())].to_vec(),
        }
    }

    /// Evaluate the Taylor polynomial at `w`.
    pub fn eval(&self, w: T) -> Complex<T> {
        let d = w - self.basepoint;
        self.coeffs
            .iter()
            .rev()
            .fold(Complex::new(T::zero(), T::zero()), |acc, &c| acc * d + c)
    }
}

impl<T: Scalar> Add for &Jet<T> {
    type Output = Jet<T>;

    fn add(self, rhs: &Jet<T>) -> Jet<T> {
        self.check_compatible(rhs);
        let coeffs = self
            .coeffs
            .iter()
            .zip(&rhs.coeffs)
            .map(|(&a, &b)| a + b)
            .collect();
        Jet {
            basepoint: self.basepoint,
            coeffs,
        }
    }
}

impl<T: Scalar> Sub for &Jet<T> {
    type Output = Jet<T>;

    fn sub(self, rhs: &Jet<T>) -> Jet<T> {
        self.check_compatible(rhs);
        let coeffs = self
            .coeffs
            .iter()
            .zip(&rhs.coeffs)
            .map(|(&a, &b)| a - b)
            .collect();
        Jet {
            basepoint: self.basepoint,
            coeffs,
        }
    }
}

impl<T: Scalar> Mul for &Jet<T> {
    type Output = Jet<T>;

    fn mul(self, rhs: &Jet<T>) -> Jet<T> {
        self.check_compatible(rhs);
        let mut out = self.zeros_like();
        for (k, slot) in out.iter_mut().enumerate() {
            let mut acc = Complex::new(T::zero(), T::zero());
            for i in 0..=k {
                acc = acc + self.coeffs[i] * rhs.coeffs[k - i];
            }
            *slot = acc;
        }
        Jet {
            basepoint: self.basepoint,
            coeffs: out,
        }
    }
}

impl<T: Scalar> Neg for Jet<T> {
    type Output = Jet<T>;

    fn neg(self) -> Jet<T> {
        Jet {
            basepoint: self.basepoint,
            coeffs: self.coeffs.into_iter().map(|c| -c).collect(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    type C = Complex<f64>;

    fn c(re: f64) -> C {
        Complex::new(re, 0.0)
    }

    #[test]
    fn variable_and_constant() {
        let v = Jet::variable(0.3_f64, 3);
        assert_eq!(v.coeffs(), &[c(0.3), c(1.0), c(0.0), c(0.0)]);
        assert_eq!(v.derivative(1), c(1.0));
    }

    #[test]
    fn exp_of_linear() {
        // e^{2w} at w₀ = 0.1: derivatives 2^j e^{0.2}
        let j = Jet::variable(0.1_f64, 5).scale(c(2.0)).exp();
        for d in 0..=5 {
            let want = 2f64.powi(d as i32) * 0.2_f64.exp();
            assert!((j.derivative(d) - c(want)).norm() < 1e-12 * want);
        }
    }

    #[test]
    fn acos_derivatives() {
        let w0: f64 = 0.4;
        let j = Jet::variable(w0, 3).acos();
        let s = 1.0 - w0 * w0;
        assert!((j.derivative(0).re - w0.acos()).abs() < 1e-15);
        assert!((j.derivative(1).re + 1.0 / s.sqrt()).abs() < 1e-14);
        assert!((j.derivative(2).re + w0 / s.powf(1.5)).abs() < 1e-14);
        assert!((j.derivative(3).re + (1.0 + 2.0 * w0 * w0) / s.powf(2.5)).abs() < 1e-13);
    }

    #[test]
    fn cos_of_acos_is_identity() {
        let j = Jet::variable(-0.55_f64, 6).acos().cos();
        let v = Jet::variable(-0.55_f64, 6);
        for (a, b) in j.coeffs().iter().zip(v.coeffs()) {
            assert!((a - b).norm() < 1e-13);
        }
    }

    #[test]
    fn sqrt_and_recip_invert() {
        let base = Jet::from_coeffs(0.0_f64, vec![c(2.0), c(0.5), c(-1.0), c(0.25)]);
        let sq = base.sqrt();
        let back = &sq * &sq;
        let one = &base * &base.recip();
        for k in 0..=3 {
            assert!((back.coeffs()[k] - base.coeffs()[k]).norm() < 1e-14);
            let want = if k == 0 { c(1.0) } else { c(0.0) };
            assert!((one.coeffs()[k] - want).norm() < 1e-14);
        }
    }

    fn poly_eval(p: &[f64], x: f64) -> f64 {
        p.iter().rev().fold(0.0, |acc, &c| acc * x + c)
    }

    proptest! {
        // jet of a product = truncated product of jets, checked against the
        // Taylor coefficients of the full polynomial product
        #[test]
        fn product_is_truncated_polynomial_product(
            p in proptest::collection::vec(-2.0f64..2.0, 1..7),
            q in proptest::collection::vec(-2.0f64..2.0, 1..7),
            order in 0usize..6,
        ) {
            let pj = Jet::from_coeffs(0.0, (0..=order).map(|i| c(*p.get(i).unwrap_or(&0.0))).collect());
            let qj = Jet::from_coeffs(0.0, (0..=order).map(|i| c(*q.get(i).unwrap_or(&0.0))).collect());
            let prod = &pj * &qj;
            let mut full = vec![0.0; p.len() + q.len()];
            for (i, a) in p.iter().enumerate() {
                for (j, b) in q.iter().enumerate() {
                    full[i + j] += a * b;
                }
            }
            for k in 0..=order {
                prop_assert!((prod.coeffs()[k].re - full.get(k).copied().unwrap_or(0.0)).abs() < 1e-13);
            }
            // evaluation of the truncated product agrees near the base point
            let x = 1e-3;
            let exact = poly_eval(&p, x) * poly_eval(&q, x);
            prop_assert!((prod.eval(x).re - exact).abs() < 40.0 * 1e-3f64.powi(order as i32 + 1) + 1e-13);
        }
    }
}
