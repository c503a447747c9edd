//! Scalar abstraction shared by every numerical routine in the crate.

use std::fmt::{Debug, Display};
use std::iter::Sum;

use num_complex::Complex;
use num_traits::{Float, FloatConst, FromPrimitive, ToPrimitive};

/// Floating-point scalar the kernel evaluators are generic over (`f32` or `f64`).
pub trait Scalar:
    Float
    + FloatConst
    + FromPrimitive
    + ToPrimitive
    + Debug
    + Display
    + Default
    + Sum
    + Send
    + Sync
    + 'static
{
    /// Converts an `f64` literal into the scalar type.
    #[inline]
    fn lit(x: f64) -> Self {
        Self::from_f64(x).expect("literal representable in scalar type")
    }

    /// Converts a count or index into the scalar type.
    #[inline]
    fn from_count(n: usize) -> Self {
        Self::from_usize(n).expect("count representable in scalar type")
    }
}

impl Scalar for f32 {}
impl Scalar for f64 {}

/// Neumaier compensated accumulator for real sums.
#[derive(Debug, Clone, Copy, Default)]
pub struct NeumaierSum<T> {
    sum: T,
    comp: T,
}

impl<T: Scalar> NeumaierSum<T> {
    pub fn new() -> Self {
        Self {
            sum: T::zero(),
            comp: T::zero(),
        }
    }

    #[inline]
    pub fn add(&mut self, x: T) {
        let t = self.sum + x;
        if self.sum.abs() >= x.abs() {
            self.comp = self.comp + ((self.sum - t) + x);
        } else {
            self.comp = self.comp + ((x - t) + self.sum);
        }
        self.sum = t;
    }

    #[inline]
    pub fn value(&self) -> T {
        self.sum + self.comp
    }
}

/// Compensated accumulator for complex sums (independent real and imaginary parts).
#[derive(Debug, Clone, Copy, Default)]
pub struct ComplexSum<T> {
    re: NeumaierSum<T>,
    im: NeumaierSum<T>,
}

impl<T: Scalar> ComplexSum<T> {
    pub fn new() -> Self {
        Self {
            re: NeumaierSum::new(),
            im: NeumaierSum::new(),
        }
    }

    #[inline]
    pub fn add(&mut self, z: Complex<T>) {
        self.re.add(z.re);
        self.im.add(z.im);
    }

    #[inline]
    pub fn value(&self) -> Complex<T> {
        Complex::new(self.re.value(), self.im.value())
    }
}

/// `e^{-iπ q/2}` for an integer number of quarter turns `q`, exact in floating point.
pub(crate) fn quarter_turns<T: Scalar>(q: u64) -> Complex<T> {
    match q % 4 {
        0 => Complex::new(T::one(), T::zero()),
        1 => Complex::new(T::zero(), -T::one()),
        2 => Complex::new(-T::one(), T::zero()),
        _ => Complex::new(T::zero(), T::one()),
    }
}

/// `i^q`, exact.
pub(crate) fn i_pow<T: Scalar>(q: u64) -> Complex<T> {
    quarter_turns(q).conj()
}
