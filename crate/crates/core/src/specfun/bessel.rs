//! Bessel functions of the first kind for real order `ν >= -1/2` and real `x >= 0`.
//!
//! Three regimes:
//! - ascending power series where the terms decrease monotonically from the
//!   first one (`x²/4 <= (ν+1)/2`), so no cancellation can occur;
//! - Hankel asymptotic expansion for `x >= 40 + ν²/10`;
//! - Miller backward recurrence otherwise, normalized with the Neumann sum
//!   `(x/2)^μ = Σ_k (μ+2k) Γ(μ+k)/k! J_{μ+2k}(x)`.

use crate::error::{domain, Result};
use crate::scalar::Scalar;
use crate::specfun::gamma::{gamma_fn, ln_gamma};

/// Bessel order, restricted to `ν >= -1/2`.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd)]
pub struct RealOrder<T>(T);

impl<T: Scalar> RealOrder<T> {
    pub fn new(nu: T) -> Result<Self> {
        if nu.is_nan() || nu < T::lit(-0.5) {
            return Err(domain("RealOrder", format!("order {nu} < -1/2")));
        }
        Ok(Self(nu))
    }

    #[inline]
    pub fn nu(self) -> T {
        self.0
    }
}

fn check_x<T: Scalar>(func: &'static str, x: T) -> Result<()> {
    if x.is_nan() || x < T::zero() {
        return Err(domain(func, format!("argument {x} < 0")));
    }
    if x.is_infinite() {
        return Err(domain(func, "infinite argument"));
    }
    Ok(())
}

/// True where the ascending series has monotonically shrinking terms.
#[inline]
pub(crate) fn ascending_is_stable<T: Scalar>(nu: T, x: T) -> bool {
    x * x * T::lit(0.25) <= T::lit(0.5) * (nu + T::one())
}

/// `Γ(ν+1) (x/2)^{-ν} J_ν(x) = Σ_j (-x²/4)^j / (j! (ν+1)_j)`; equals 1 at `x = 0`.
pub(crate) fn ascending_normalized<T: Scalar>(nu: T, x: T) -> T {
    let q = -(x * x) * T::lit(0.25);
    let mut term = T::one();
    let mut sum = T::one();
    let eps = T::epsilon() * T::lit(0.5);
    let mut j = T::zero();
    for _ in 0..500 {
        j = j + T::one();
        term = term * q / (j * (nu + j));
        sum = sum + term;
        if term.abs() <= eps * sum.abs() {
            break;
        }
    }
    sum
}

/// `J_ν(x)`.
pub fn bessel_j<T: Scalar>(order: RealOrder<T>, x: T) -> Result<T> {
    let nu = order.nu();
    check_x("bessel_j", x)?;
    if x == T::zero() {
        if nu == T::zero() {
            return Ok(T::one());
        }
        if nu < T::zero() {
            return Err(domain("bessel_j", "negative order requires x > 0"));
        }
        return Ok(T::zero());
    }
    if ascending_is_stable(nu, x) {
        let log_lead = nu * (x * T::lit(0.5)).ln() - ln_gamma(nu + T::one())?;
        if log_lead < T::min_positive_value().ln() {
            // below the normal range; J flushes to zero
            return Ok(T::zero());
        }
        return Ok(log_lead.exp() * ascending_normalized(nu, x));
    }
    if x >= T::lit(40.0) + nu * nu / T::lit(10.0) {
        return Ok(hankel_asymptotic(nu, x));
    }
    miller(nu, x)
}

/// `J̃_ν(x) = (x/2)^{-ν} J_ν(x)`, finite at `x = 0` where it equals `1/Γ(ν+1)`.
pub fn bessel_j_tilde<T: Scalar>(order: RealOrder<T>, x: T) -> Result<T> {
    let nu = order.nu();
    check_x("bessel_j_tilde", x)?;
    if ascending_is_stable(nu, x) {
        let g = ln_gamma(nu + T::one())?;
        return Ok((-g).exp() * ascending_normalized(nu, x));
    }
    let j = bessel_j(order, x)?;
    Ok(j * (x * T::lit(0.5)).powf(-nu))
}

/// Hankel expansion `sqrt(2/(πx)) (P cos χ - Q sin χ)`, `χ = x - (ν/2 + 1/4)π`.
fn hankel_asymptotic<T: Scalar>(nu: T, x: T) -> T {
    let mu4 = T::lit(4.0) * nu * nu;
    let eightx = T::lit(8.0) * x;
    let mut p = T::one();
    let mut q = T::zero();
    let mut term = T::one();
    let mut last = T::infinity();
    for k in 1..200 {
        let kk = T::from_count(k);
        let odd = T::from_count(2 * k - 1);
        term = term * (mu4 - odd * odd) / (kk * eightx);
        // past the turning point (2k-1)² > 4ν² the terms eventually diverge
        if odd * odd > mu4 && term.abs() > last {
            break;
        }
        last = term.abs();
        // a_k / x^k with sign (-1)^{floor(k/2)}
        match k % 4 {
            1 => q = q + term,
            2 => p = p - term,
            3 => q = q - term,
            _ => p = p + term,
        }
        if term.abs() < T::epsilon() * T::lit(1e-2) {
            break;
        }
    }
    // reduce (ν/2 + 1/4) modulo 2 before scaling by π
    let two = T::lit(2.0);
    let turns = nu * T::lit(0.5) + T::lit(0.25);
    let turns = turns - two * (turns / two).floor();
    let phi = turns * T::PI();
    let (sx, cx) = x.sin_cos();
    let (sp, cp) = phi.sin_cos();
    let cos_chi = cx * cp + sx * sp;
    let sin_chi = sx * cp - cx * sp;
    (two / (T::PI() * x)).sqrt() * (p * cos_chi - q * sin_chi)
}

/// Miller backward recurrence from a start order well above `max(ν, x)`.
fn miller<T: Scalar>(nu: T, x: T) -> Result<T> {
    let mu = if nu >= T::zero() { nu - nu.floor() } else { nu };
    let n = (nu - mu).round().to_usize().unwrap_or(0);
    let scale_ref = nu.max(x).max(T::one());
    let extra = T::lit(20.0) + T::lit(12.0) * scale_ref.cbrt();
    let top = (scale_ref + extra)
        .ceil()
        .to_usize()
        .unwrap_or(0)
        .max(n + 2);

    let big = T::max_value().sqrt();
    let small = big.recip();
    let two_over_x = T::lit(2.0) / x;

    // f_{k+1} = 0, f_k = tiny, recurse downward through orders μ + k
    let mut f_next = T::zero();
    let mut f_cur = T::min_positive_value().sqrt();
    let mut target = if top == n { f_cur } else { T::zero() };
    let mut norm = T::zero();
    let mut k = top;
    if k % 2 == 0 {
        norm = norm + neumann_weight(mu, k / 2)? * f_cur;
    }
    while k > 0 {
        let order = mu + T::from_count(k);
        let f_prev = two_over_x * order * f_cur - f_next;
        f_next = f_cur;
        f_cur = f_prev;
        k -= 1;
        if k == n {
            target = f_cur;
        }
        if k % 2 == 0 {
            norm = norm + neumann_weight(mu, k / 2)? * f_cur;
        }
        if f_cur.abs() > big {
            f_cur = f_cur * small;
            f_next = f_next * small;
            norm = norm * small;
            target = target * small;
        }
    }
    let lhs = (x * T::lit(0.5)).powf(mu);
    Ok(target * lhs / norm)
}

/// `(μ+2k) Γ(μ+k)/k!` with the `k = 0` value `Γ(μ+1)`.
fn neumann_weight<T: Scalar>(mu: T, k: usize) -> Result<T> {
    if k == 0 {
        return gamma_fn(mu + T::one());
    }
    let kk = T::from_count(k);
    if mu == T::zero() {
        return Ok(T::lit(2.0));
    }
    let lg = ln_gamma(mu + kk)? - ln_gamma(kk + T::one())?;
    Ok((mu + T::lit(2.0) * kk) * lg.exp())
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    fn j(nu: f64, x: f64) -> f64 {
        bessel_j(RealOrder::new(nu).unwrap(), x).unwrap()
    }

    // 40-digit reference values, chosen away from zeros so that relative
    // error is meaningful.
    const TABLE: [(f64, f64, f64); 24] = [
        (0.0, 0.3, 0.977_626_246_538_296_089_22),
        (0.0, 5.5, -0.006_843_869_417_819_196_824),
        (0.25, 1.7, 0.538_363_650_117_689_233_92),
        (0.5, 3.3, -0.069_285_220_754_157_515_691),
        (1.0, 1.0, 0.440_050_585_744_933_515_96),
        (1.5, 12.5, -0.226_376_338_194_465_985_75),
        (2.7, 7.1, -0.261_075_692_634_925_711_89),
        (3.3, 25.2, 0.132_393_093_819_894_090_01),
        (7.5, 9.9, 0.295_738_659_895_519_091_99),
        (10.0, 0.5, 2.613_177_360_822_803_086_2e-13),
        (12.25, 30.1, 0.152_072_393_396_536_834_97),
        (20.0, 20.0, 0.164_747_773_775_326_532_34),
        (33.3, 45.7, 0.088_154_176_677_194_117_233),
        (50.0, 50.0, 0.121_409_021_897_615_063_82),
        (50.0, 99.1, 0.026_312_298_511_241_184_972),
        (80.0, 60.4, 1.726_121_499_230_656_689_4e-6),
        (120.0, 30.5, 2.116_193_482_299_098_502e-58),
        (150.0, 99.5, 1.549_927_014_745_866_310_4e-16),
        (200.0, 80.2, 1.530_739_778_586_280_075_4e-58),
        (0.0, 99.3, -0.034_598_068_239_212_592_582),
        (2.5, 87.6, 0.027_657_711_292_609_634_665),
        (17.5, 73.1, -0.092_907_466_067_554_092_168),
        (0.75, 44.4, 0.003_414_977_843_554_389_622_2),
        (5.0, 41.3, 0.003_263_324_370_490_022_142_8),
    ];

    #[test]
    fn reference_table_relative_error() {
        for (nu, x, want) in TABLE {
            let got = j(nu, x);
            let rel = ((got - want) / want).abs();
            assert!(
                rel <= 1e-12,
                "J_{nu}({x}) = {got:e}, want {want:e}, rel {rel:e}"
            );
        }
    }

    #[test]
    fn trivial_and_closed_form_values() {
        assert_eq!(j(0.0, 0.0), 1.0);
        assert_eq!(j(2.5, 0.0), 0.0);
        // J_{1/2}(π) = sqrt(2/π²) sin π
        assert!(j(0.5, PI).abs() < 1e-15);
        for x in [0.1, 1.0, 3.0, 17.0, 60.0] {
            let half = (2.0 / (PI * x)).sqrt();
            assert!((j(0.5, x) - half * x.sin()).abs() < 1e-14);
            assert!((j(-0.5, x) - half * x.cos()).abs() < 1e-14);
        }
    }

    #[test]
    fn tilde_values() {
        let t = |nu: f64, x: f64| bessel_j_tilde(RealOrder::new(nu).unwrap(), x).unwrap();
        assert_eq!(t(0.0, 0.0), 1.0);
        // J̃_{-1/2}(x) = cos x / Γ(1/2)
        for x in [0.0, 0.4, 2.0, 9.0, 55.0] {
            assert!((t(-0.5, x) - x.cos() / PI.sqrt()).abs() < 1e-14);
        }
        // (0.25)^{-2} J_2(0.5)
        assert!((t(2.0, 0.5) - 0.489_664_375_338_922_260_918_6).abs() < 1e-15);
        // continuity across the regime switch
        for x in [1.99, 2.0, 2.01] {
            let direct = j(3.0, x) / (x / 2.0).powi(3);
            assert!((t(3.0, x) - direct).abs() < 1e-14);
        }
    }

    #[test]
    fn domain_errors() {
        assert!(RealOrder::new(-0.6_f64).is_err());
        let o = RealOrder::new(1.0_f64).unwrap();
        assert!(bessel_j(o, -1.0).is_err());
        assert!(bessel_j(RealOrder::new(-0.5).unwrap(), 0.0).is_err());
    }

    #[test]
    fn deep_underflow_flushes_to_zero() {
        // J_200(1) ≈ 7.9e-436 is below the f64 range
        assert_eq!(j(200.0, 1.0), 0.0);
    }

    #[test]
    fn regimes_agree_at_their_boundaries() {
        // Hankel boundary at x = 40 + ν²/10
        for nu in [0.0, 1.3, 5.0, 9.0] {
            let xb: f64 = 40.0 + nu * nu / 10.0;
            let asym = hankel_asymptotic(nu, xb + 1e-9);
            let back = miller(nu, xb + 1e-9).unwrap();
            assert!((asym - back).abs() < 2e-15, "nu={nu}: {asym} vs {back}");
        }
        // ascending / backward boundary
        for nu in [0.0, 4.5, 30.0] {
            let x = (2.0_f64 * (nu + 1.0)).sqrt();
            let lead = (nu * (x / 2.0).ln() - ln_gamma(nu + 1.0).unwrap()).exp();
            let asc = lead * ascending_normalized(nu, x);
            let back = miller(nu, x).unwrap();
            assert!(((asc - back) / asc).abs() < 1e-13);
        }
    }
}
