//! Kernel of the radially deformed Fourier transform `F_a` on `R^m`.
//!
//! The kernel depends on `z = |x||y|` and `w = <x,y>/z` only. It is evaluated by
//! its Bessel–Gegenbauer series for any `a > 0`, by closed forms when `a = 2/n`,
//! and by a dimension recursion that raises `m` by two. The transform itself is
//! realized by quadrature in dimension 2 and checked against its eigenbasis.
//!
//! All numerics are generic over [`Scalar`] (`f32`, `f64`); the `*64` and `*32`
//! aliases below fix the precision.

#![allow(
    clippy::neg_cmp_op_on_partial_ord,
    clippy::excessive_precision,
    clippy::manual_is_multiple_of
)]

pub mod closed;
pub mod downsample;
pub mod error;
pub mod jet;
pub mod params;
pub mod quadrature;
pub mod scalar;
pub mod series;
pub mod specfun;
pub mod transform;
pub mod verify;

pub use closed::{
    dim_step_series, kernel_a1, kernel_a2, kernel_dim2_closed, kernel_dim2_parity, kernel_dispatch,
    kernel_even_dim, DispatchValue, KernelMethod,
};
pub use downsample::CosineSeries;
pub use error::{Error, Result};
pub use jet::Jet;
pub use num_complex::{Complex, Complex32, Complex64};
pub use params::{DeformParams, KernelArgs};
pub use scalar::Scalar;
pub use series::{kernel_series, required_terms, SeriesValue, TruncationPolicy};
pub use transform::{EigenIndex, Harmonic, QuadSpec};

pub type DeformParams64 = DeformParams<f64>;
pub type KernelArgs64 = KernelArgs<f64>;
pub type TruncationPolicy64 = TruncationPolicy<f64>;
pub type CosineSeries64 = CosineSeries<f64>;
pub type QuadSpec64 = QuadSpec<f64>;
pub type Jet64 = Jet<f64>;

pub type DeformParams32 = DeformParams<f32>;
pub type KernelArgs32 = KernelArgs<f32>;
pub type TruncationPolicy32 = TruncationPolicy<f32>;
pub type CosineSeries32 = CosineSeries<f32>;
pub type QuadSpec32 = QuadSpec<f32>;
pub type Jet32 = Jet<f32>;
