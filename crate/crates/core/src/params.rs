//! Deformation parameters and bi-radial kernel arguments.

use crate::error::{Error, Result};
use crate::scalar::Scalar;

/// Largest `n` recognised when detecting `a = 2/n`.
const MAX_RATIONAL_N: f64 = 1.0e6;

/// Deformation parameter `a`, dimension `m` and the derived index `λ = (m-2)/2`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DeformParams<T> {
    a: T,
    m: u32,
    lambda: T,
    rational_n: Option<u32>,
}

impl<T: Scalar> DeformParams<T> {
    /// Validates `a > 0`, `m >= 2` and detects whether `a = 2/n` for a positive integer `n`.
    pub fn new(a: T, m: u32) -> Result<Self> {
        if !(a > T::zero()) || !a.is_finite() {
            return Err(Error::InvalidParameter(format!(
                "deformation a = {a} must be positive"
            )));
        }
        if m < 2 {
            return Err(Error::InvalidParameter(format!(
                "dimension m = {m} must be >= 2"
            )));
        }
        let ratio = T::lit(2.0) / a;
        let nearest = ratio.round();
        let rational_n = if nearest >= T::one()
            && nearest <= T::lit(MAX_RATIONAL_N)
            && (ratio - nearest).abs() <= T::lit(64.0) * T::epsilon() * nearest
        {
            nearest.to_u32()
        } else {
            None
        };
        Ok(Self {
            a,
            m,
            lambda: Self::lambda_for(m),
            rational_n,
        })
    }

    /// `a = 2/n` exactly, with `n` recorded.
    pub fn from_n(n: u32, m: u32) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidParameter("n must be >= 1".into()));
        }
        let mut p = Self::new(T::lit(2.0) / T::lit(f64::from(n)), m)?;
        p.rational_n = Some(n);
        Ok(p)
    }

    fn lambda_for(m: u32) -> T {
        (T::lit(f64::from(m)) - T::lit(2.0)) * T::lit(0.5)
    }

    #[inline]
    pub fn a(&self) -> T {
        self.a
    }

    #[inline]
    pub fn m(&self) -> u32 {
        self.m
    }

    #[inline]
    pub fn lambda(&self) -> T {
        self.lambda
    }

    /// `Some(n)` iff `a = 2/n`.
    #[inline]
    pub fn rational_n(&self) -> Option<u32> {
        self.rational_n
    }

    /// Same deformation in dimension `m + 2·steps`.
    pub fn lifted(&self, steps: u32) -> Self {
        let m = self.m + 2 * steps;
        Self {
            m,
            lambda: Self::lambda_for(m),
            ..*self
        }
    }
}

/// Bi-radial coordinates `z = |x||y|`, `w = <x,y>/z` and `t = arccos w`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct KernelArgs<T> {
    z: T,
    w: T,
    t: T,
}

impl<T: Scalar> KernelArgs<T> {
    /// Roundoff slack accepted beyond `|w| = 1` before clamping.
    pub fn clamp_slack() -> T {
        T::lit(1e-12)
    }

    pub fn new(z: T, w: T) -> Result<Self> {
        if z.is_nan() || z < T::zero() || z.is_infinite() {
            return Err(Error::InvalidParameter(format!(
                "z = {z} must be finite and >= 0"
            )));
        }
        if w.is_nan() || w.abs() > T::one() + Self::clamp_slack() {
            return Err(Error::InvalidParameter(format!("w = {w} outside [-1, 1]")));
        }
        let w = w.max(-T::one()).min(T::one());
        Ok(Self { z, w, t: w.acos() })
    }

    /// Builds the coordinates from two points of `R^m`.
    pub fn from_points(x: &[T], y: &[T]) -> Result<Self> {
        if x.len() != y.len() || x.is_empty() {
            return Err(Error::InvalidParameter(
                "points must share a nonzero dimension".into(),
            ));
        }
        let nx = x.iter().map(|&v| v * v).sum::<T>().sqrt();
        let ny = y.iter().map(|&v| v * v).sum::<T>().sqrt();
        let z = nx * ny;
        if z == T::zero() {
            return Self::new(z, T::one());
        }
        let dot = x.iter().zip(y).map(|(&p, &q)| p * q).sum::<T>();
        Self::new(z, dot / z)
    }

    #[inline]
    pub fn z(&self) -> T {
        self.z
    }

    #[inline]
    pub fn w(&self) -> T {
        self.w
    }

    /// Principal `arccos w ∈ [0, π]`.
    #[inline]
    pub fn t(&self) -> T {
        self.t
    }
}
