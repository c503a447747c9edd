//! Classical special functions the kernel formulas are built from.

mod bessel;
mod gamma;
mod orthopoly;

pub use bessel::{bessel_j, bessel_j_tilde, RealOrder};
pub use gamma::{gamma_fn, ln_gamma};
pub use orthopoly::{gegenbauer, gegenbauer_limit, laguerre};

pub(crate) use bessel::{ascending_is_stable, ascending_normalized};
pub(crate) use orthopoly::{ln_gegenbauer_at_one, GegenbauerSeq};
