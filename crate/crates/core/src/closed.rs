//! Closed-form kernels and the dimension recursion.
//!
//! - `a = 2`: `e^{-izw}`.
//! - `a = 1`: `Γ((m-1)/2) J̃_{(m-3)/2}(sqrt(2z(1+w)))`.
//! - `a = 2/n`, `m = 2`: the average of `n` unimodular exponentials, also in
//!   the parity-split real/imaginary forms.
//! - `a = 2/n`, `m = 2k`: `(k-1)` w-derivatives of the dimension-2 form, taken
//!   with jets.
//! - any `a`, `m -> m + 2s`: term-wise differentiation of the series.

use num_complex::Complex;

use crate::error::{Error, Result};
use crate::jet::Jet;
use crate::params::{DeformParams, KernelArgs};
use crate::scalar::{i_pow, Scalar};
use crate::series::{kernel_series, phase, SeriesPlan, SeriesValue, TruncationPolicy};
use crate::specfun::{bessel_j_tilde, gamma_fn, ln_gamma, RealOrder};

/// Distance from `w = ±1` inside which the jet route is refused.
pub const JET_GUARD: f64 = 1e-3;

/// `K_2^m(z, w) = e^{-izw}` (any `m`).
pub fn kernel_a2<T: Scalar>(args: &KernelArgs<T>) -> Complex<T> {
    let (s, c) = (args.z() * args.w()).sin_cos();
    Complex::new(c, -s)
}

/// `K_1^m(z, w) = Γ((m-1)/2) J̃_{(m-3)/2}(sqrt(2z(1+w)))`, real-valued.
pub fn kernel_a1<T: Scalar>(m: u32, args: &KernelArgs<T>) -> Result<T> {
    if m < 2 {
        return Err(Error::InvalidParameter(format!(
            "dimension m = {m} must be >= 2"
        )));
    }
    let mf = T::lit(f64::from(m));
    let nu = (mf - T::lit(3.0)) * T::lit(0.5);
    let arg = (T::lit(2.0) * args.z() * (T::one() + args.w()))
        .max(T::zero())
        .sqrt();
    if m == 2 {
        return Ok(arg.cos());
    }
    let g = gamma_fn((mf - T::one()) * T::lit(0.5))?;
    Ok(g * bessel_j_tilde(RealOrder::new(nu)?, arg)?)
}

fn check_n(n: u32) -> Result<()> {
    if n == 0 {
        return Err(Error::InvalidParameter("n must be >= 1".into()));
    }
    Ok(())
}

/// `R = n z^{1/n}`, the common amplitude of the dimension-2 closed forms.
fn dim2_amplitude<T: Scalar>(n: u32, z: T) -> T {
    let nf = T::lit(f64::from(n));
    nf * z.powf(nf.recip())
}

/// `K_{2/n}^2(z, w) = (1/n) Σ_{ℓ<n} exp(-i n z^{1/n} cos((t + 2πℓ)/n))`.
pub fn kernel_dim2_closed<T: Scalar>(n: u32, args: &KernelArgs<T>) -> Result<Complex<T>> {
    check_n(n)?;
    let nf = T::lit(f64::from(n));
    let r = dim2_amplitude(n, args.z());
    let mut re = T::zero();
    let mut im = T::zero();
    for l in 0..n {
        let theta = (args.t() + T::TAU() * T::lit(f64::from(l))) / nf;
        let (s, c) = (r * theta.cos()).sin_cos();
        re = re + c;
        im = im - s;
    }
    Ok(Complex::new(re / nf, im / nf))
}

/// Parity-split trigonometric form of `kernel_dim2_closed`; the imaginary part is
/// identically zero for even `n`.
pub fn kernel_dim2_parity<T: Scalar>(n: u32, args: &KernelArgs<T>) -> Result<Complex<T>> {
    check_n(n)?;
    let nf = T::lit(f64::from(n));
    let r = dim2_amplitude(n, args.z());
    let (st, ct) = (args.t() / nf).sin_cos();
    if n % 2 == 0 {
        let half = n / 2;
        let hf = T::lit(f64::from(half));
        let mut acc = T::zero();
        for l in 0..half {
            let (sl, cl) = (T::PI() * T::lit(f64::from(l)) / hf).sin_cos();
            acc = acc + (r * ct * cl).cos() * (r * st * sl).cos();
        }
        return Ok(Complex::new(acc / hf, T::zero()));
    }
    let half = (n - 1) / 2;
    let mut re = (r * ct).cos();
    let mut im = -(r * ct).sin();
    for l in 1..=half {
        let (sl, cl) = (T::TAU() * T::lit(f64::from(l)) / nf).sin_cos();
        let damp = (r * st * sl).cos();
        re = re + T::lit(2.0) * (r * ct * cl).cos() * damp;
        im = im - T::lit(2.0) * (r * ct * cl).sin() * damp;
    }
    Ok(Complex::new(re / nf, im / nf))
}

/// `K_a^{m+2}` from the `K_a^m` series differentiated term by term in `w`.
pub fn dim_step_series<T: Scalar>(
    params: &DeformParams<T>,
    args: &KernelArgs<T>,
    policy: &TruncationPolicy<T>,
) -> Result<SeriesValue<T>> {
    dimension_lift(params, 1, args, policy)
}

/// `K_a^{m+2s}` from `s` term-wise w-derivatives of the `K_a^m` series, each step
/// carrying `e^{iπ/a} a^{2/a} Γ((2λ+a+2)/a) / (2(λ+1) Γ((2λ+a)/a)) z^{-1}`.
pub fn dimension_lift<T: Scalar>(
    params: &DeformParams<T>,
    steps: u32,
    args: &KernelArgs<T>,
    policy: &TruncationPolicy<T>,
) -> Result<SeriesValue<T>> {
    SeriesPlan::new(*params, steps as usize)?.evaluate(args, policy)
}

fn double_factorial<T: Scalar>(n: u32) -> T {
    let mut acc = T::one();
    let mut i = n;
    while i > 1 {
        acc = acc * T::lit(f64::from(i));
        i -= 2;
    }
    acc
}

/// One-shot prefactor expressing `K_a^m` through `z^{-s} ∂_w^s` of the base kernel
/// (`m = 2` for even `m`, `m = 3` for odd `m`), `s = (m - base)/2`.
pub fn reduction_prefactor<T: Scalar>(a: T, m: u32) -> Result<Complex<T>> {
    if m < 2 {
        return Err(Error::InvalidParameter(format!(
            "dimension m = {m} must be >= 2"
        )));
    }
    let two = T::lit(2.0);
    let base = DeformParams::new(a, 2 + m % 2)?;
    let nm1 = (m - base.m()) / 2;
    let nm1f = T::lit(f64::from(nm1));
    let rot = phase(&base, nm1 as usize).conj();
    let pow = (two * nm1f / a * a.ln()).exp();
    let mag = if m % 2 == 0 {
        // e^{i(n-1)π/a} a^{2(n-1)/a} / (2n-2)!! Γ((2n-2+a)/a), m = 2n
        pow / double_factorial::<T>(m - 2) * gamma_fn((two * nm1f + a) / a)?
    } else {
        // e^{i(n-1)π/a} a^{2(n-1)/a} / (2n-1)!! Γ((2n-1+a)/a) / Γ((1+a)/a), m = 2n+1
        let lg = ln_gamma((two * nm1f + T::one() + a) / a)? - ln_gamma((T::one() + a) / a)?;
        pow / double_factorial::<T>(m - 2) * lg.exp()
    };
    Ok(rot * mag)
}

/// `K_a^m` from the base dimension (2 or 3) with the one-shot reduction prefactor.
pub fn kernel_by_reduction<T: Scalar>(
    params: &DeformParams<T>,
    args: &KernelArgs<T>,
    policy: &TruncationPolicy<T>,
) -> Result<SeriesValue<T>> {
    let base = DeformParams::new(params.a(), 2 + params.m() % 2)?;
    let steps = ((params.m() - base.m()) / 2) as usize;
    let pref = reduction_prefactor(params.a(), params.m())?;
    SeriesPlan::with_prefactor(base, steps, pref).evaluate(args, policy)
}

/// `K_{2/n}^{2k}(z, w) = (2i/n)^{n(k-1)} (nk-n)!/(2k-2)!! z^{1-k} ∂_w^{k-1} K_{2/n}^2(z, w)`.
pub fn kernel_even_dim<T: Scalar>(n: u32, k: u32, args: &KernelArgs<T>) -> Result<Complex<T>> {
    check_n(n)?;
    if k == 0 {
        return Err(Error::InvalidParameter("k must be >= 1 (m = 2k)".into()));
    }
    if k == 1 {
        return kernel_dim2_closed(n, args);
    }
    let guard = T::lit(JET_GUARD);
    let w = args.w();
    if w.abs() > T::one() - guard {
        return Err(Error::JetSingularity {
            w: w.to_f64().unwrap_or(f64::NAN),
            guard: JET_GUARD,
        });
    }
    let z = args.z();
    if z == T::zero() {
        return Ok(Complex::new(T::one(), T::zero()));
    }
    let order = (k - 1) as usize;
    let nf = T::lit(f64::from(n));
    let r = dim2_amplitude(n, z);
    let t = Jet::variable(w, order).acos();
    let minus_ir = Complex::new(T::zero(), -r);
    let mut acc = Jet::constant(w, order, Complex::new(T::zero(), T::zero()));
    for l in 0..n {
        let shift = Complex::new(T::TAU() * T::lit(f64::from(l)), T::zero());
        let theta = t
            .add_const(shift)
            .scale(Complex::new(nf.recip(), T::zero()));
        acc = &acc + &theta.cos().scale(minus_ir).exp();
    }
    let deriv = acc.derivative(order) / nf;

    let big_n = u64::from(n) * u64::from(k - 1);
    let km1 = T::lit(f64::from(k - 1));
    let ln_mag = T::lit(big_n as f64) * (T::lit(2.0) / nf).ln()
        + ln_gamma(T::lit(big_n as f64) + T::one())?
        - ln_gamma(km1 + T::one())?
        - km1 * T::LN_2()
        - km1 * z.ln();
    Ok(i_pow::<T>(big_n) * deriv * ln_mag.exp())
}

/// Evaluation route chosen by [`kernel_dispatch`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum KernelMethod {
    ClosedA2,
    ClosedA1,
    ClosedDim2,
    ClosedEvenDim,
    Series,
}

impl KernelMethod {
    pub fn as_str(self) -> &'static str {
        match self {
            KernelMethod::ClosedA2 => "closed_a2",
            KernelMethod::ClosedA1 => "closed_a1",
            KernelMethod::ClosedDim2 => "closed_dim2",
            KernelMethod::ClosedEvenDim => "closed_even_dim",
            KernelMethod::Series => "series",
        }
    }

    pub fn is_closed(self) -> bool {
        self != KernelMethod::Series
    }
}

impl std::fmt::Display for KernelMethod {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Kernel value with the route that produced it; `terms` is set for the series route.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DispatchValue<T> {
    pub value: Complex<T>,
    pub method: KernelMethod,
    pub terms: Option<usize>,
}

/// Closed-form route available for these parameters at this point, if any.
pub fn closed_method<T: Scalar>(
    params: &DeformParams<T>,
    args: &KernelArgs<T>,
) -> Option<KernelMethod> {
    match params.rational_n() {
        Some(1) => Some(KernelMethod::ClosedA2),
        Some(2) => Some(KernelMethod::ClosedA1),
        Some(_) if params.m() == 2 => Some(KernelMethod::ClosedDim2),
        Some(_) if params.m() % 2 == 0 && args.w().abs() <= T::one() - T::lit(JET_GUARD) => {
            Some(KernelMethod::ClosedEvenDim)
        }
        _ => None,
    }
}

/// Evaluates a specific closed-form route.
pub fn eval_closed<T: Scalar>(
    method: KernelMethod,
    params: &DeformParams<T>,
    args: &KernelArgs<T>,
) -> Result<Complex<T>> {
    let no_closed = || Error::NoClosedForm {
        a: params.a().to_f64().unwrap_or(f64::NAN),
        m: params.m(),
    };
    match method {
        KernelMethod::ClosedA2 => Ok(kernel_a2(args)),
        KernelMethod::ClosedA1 => Ok(Complex::new(kernel_a1(params.m(), args)?, T::zero())),
        KernelMethod::ClosedDim2 => {
            kernel_dim2_closed(params.rational_n().ok_or_else(no_closed)?, args)
        }
        KernelMethod::ClosedEvenDim => kernel_even_dim(
            params.rational_n().ok_or_else(no_closed)?,
            params.m() / 2,
            args,
        ),
        KernelMethod::Series => Err(no_closed()),
    }
}

/// Best available evaluator: closed form when one applies, series otherwise.
pub fn kernel_dispatch<T: Scalar>(
    params: &DeformParams<T>,
    args: &KernelArgs<T>,
    policy: &TruncationPolicy<T>,
) -> Result<DispatchValue<T>> {
    match closed_method(params, args) {
        Some(method) => Ok(DispatchValue {
            value: eval_closed(method, params, args)?,
            method,
            terms: None,
        }),
        None => {
            let s = kernel_series(params, args, policy)?;
            Ok(DispatchValue {
                value: s.value,
                method: KernelMethod::Series,
                terms: Some(s.terms),
            })
        }
    }
}
