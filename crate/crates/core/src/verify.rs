//! Self-check suites over the public API, as reported by `rdkernel verify`.

use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::closed::{
    dim_step_series, dimension_lift, kernel_a1, kernel_a2, kernel_dim2_closed, kernel_dim2_parity,
    kernel_even_dim,
};
use crate::downsample::{
    downsample_by_shifts, downsample_coeffs, eval_series, jacobi_anger_coeffs, CosineSeries,
};
use crate::error::{Error, Result};
use crate::params::{DeformParams, KernelArgs};
use crate::series::{kernel_series, TruncationPolicy};
use crate::specfun::{bessel_j, gamma_fn, gegenbauer, gegenbauer_limit, laguerre, RealOrder};
use crate::transform::{
    build_quadrature, gram_matrix, hankel_laguerre_check, moment_error, reproducing_kernel_check,
    transform_norm_ratio, verify_eigenrelation, EigenIndex, DEFAULT_MAX_MOMENT,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Suite {
    Specfun,
    Kernel,
    Downsample,
    Transform,
    All,
}

impl Suite {
    pub fn as_str(self) -> &'static str {
        match self {
            Suite::Specfun => "specfun",
            Suite::Kernel => "kernel",
            Suite::Downsample => "downsample",
            Suite::Transform => "transform",
            Suite::All => "all",
        }
    }
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Suite {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "specfun" => Ok(Suite::Specfun),
            "kernel" => Ok(Suite::Kernel),
            "downsample" => Ok(Suite::Downsample),
            "transform" => Ok(Suite::Transform),
            "all" => Ok(Suite::All),
            other => Err(Error::InvalidParameter(format!(
                "unknown suite '{other}' (expected specfun, kernel, downsample, transform or all)"
            ))),
        }
    }
}

/// One named residual against its threshold.
#[derive(Debug, Clone, PartialEq)]
pub struct Check {
    pub name: String,
    pub residual: f64,
    pub threshold: f64,
    pub pass: bool,
}

impl Check {
    pub fn new(name: impl Into<String>, residual: f64, threshold: f64) -> Self {
        Self {
            name: name.into(),
            residual,
            threshold,
            pass: residual <= threshold,
        }
    }
}

/// Runs a suite. `tol_override` replaces every check's default threshold.
pub fn run_suite(suite: Suite, tol_override: Option<f64>) -> Result<Vec<Check>> {
    let mut checks = Vec::new();
    let wants = |s: Suite| suite == Suite::All || suite == s;
    if wants(Suite::Specfun) {
        checks.extend(specfun_checks()?);
    }
    if wants(Suite::Kernel) {
        checks.extend(kernel_checks()?);
    }
    if wants(Suite::Downsample) {
        checks.extend(downsample_checks()?);
    }
    if wants(Suite::Transform) {
        checks.extend(transform_checks()?);
    }
    if let Some(tol) = tol_override {
        for c in &mut checks {
            *c = Check::new(std::mem::take(&mut c.name), c.residual, tol);
        }
    }
    Ok(checks)
}

fn linspace(lo: f64, hi: f64, n: usize) -> impl Iterator<Item = f64> + Clone {
    (0..n).map(move |i| {
        if n == 1 {
            lo
        } else {
            lo + (hi - lo) * i as f64 / (n - 1) as f64
        }
    })
}

fn args(z: f64, w: f64) -> Result<KernelArgs<f64>> {
    KernelArgs::new(z, w)
}

fn series(params: &DeformParams<f64>, z: f64, w: f64) -> Result<Complex64> {
    Ok(kernel_series(params, &args(z, w)?, &TruncationPolicy::default())?.value)
}

fn specfun_checks() -> Result<Vec<Check>> {
    let mut out = Vec::new();

    let mut worst = 0.0_f64;
    for nu in linspace(0.5, 50.0, 23) {
        for x in linspace(0.25, 50.0, 41) {
            let j = |v: f64| bessel_j(RealOrder::new(v)?, x);
            let jn = j(nu)?;
            let r = (j(nu - 1.0)? + j(nu + 1.0)? - 2.0 * nu / x * jn).abs() / jn.abs().max(1.0);
            worst = worst.max(r);
        }
    }
    out.push(Check::new(
        "specfun.bessel_three_term_recurrence",
        worst,
        1e-10,
    ));

    let mut worst = 0.0_f64;
    for x in linspace(0.1, 100.0, 200) {
        let got = bessel_j(RealOrder::new(0.5)?, x)?;
        let want = (2.0 / (std::f64::consts::PI * x)).sqrt() * x.sin();
        worst = worst.max((got - want).abs());
    }
    out.push(Check::new(
        "specfun.bessel_half_order_closed_form",
        worst,
        1e-13,
    ));

    let mut worst = 0.0_f64;
    let h = 1e-4;
    for k in 1..=20 {
        for lambda in [0.5, 1.0, 2.5, 5.0] {
            // errors relative to the derivative's sup over the sampled w
            let mut gap = 0.0_f64;
            let mut scale = 1.0_f64;
            for w in linspace(-0.9, 0.9, 7) {
                let c = |d: f64| gegenbauer(k, lambda, w + d * h);
                // five-point central stencil
                let fd = (8.0 * (c(1.0)? - c(-1.0)?) - (c(2.0)? - c(-2.0)?)) / (12.0 * h);
                let exact = 2.0 * lambda * gegenbauer(k - 1, lambda + 1.0, w)?;
                gap = gap.max((fd - exact).abs());
                scale = scale.max(exact.abs());
            }
            worst = worst.max(gap / scale);
        }
    }
    out.push(Check::new("specfun.gegenbauer_derivative", worst, 1e-6));

    let mut worst = 0.0_f64;
    let lambda = 1e-8;
    for k in 1..=12 {
        for t in linspace(0.0, std::f64::consts::PI, 9) {
            let lim = gegenbauer_limit(k, t)?;
            worst = worst.max((gegenbauer(k, lambda, t.cos())? / lambda - lim).abs());
        }
    }
    out.push(Check::new(
        "specfun.gegenbauer_small_lambda_limit",
        worst,
        1e-6,
    ));

    let mut worst = 0.0_f64;
    for j in 0..=10 {
        for alpha in [0.0, 0.5, 1.7, 4.0] {
            for u in [0.0, 0.3, 1.0, 2.5, 6.0] {
                let explicit = laguerre_explicit(j, alpha, u);
                worst =
                    worst.max((laguerre(j, alpha, u)? - explicit).abs() / explicit.abs().max(1.0));
            }
        }
    }
    out.push(Check::new("specfun.laguerre_explicit_sum", worst, 1e-10));

    let mut worst = 0.0_f64;
    for x in linspace(0.1, 30.0, 300) {
        let lhs = gamma_fn(x + 1.0)?;
        worst = worst.max((lhs - x * gamma_fn(x)?).abs() / lhs.abs());
    }
    out.push(Check::new(
        "specfun.gamma_functional_equation",
        worst,
        1e-12,
    ));

    Ok(out)
}

/// `Σ_i (-1)^i binom(j+α, j-i) u^i / i!` with the binomial as a finite product.
pub fn laguerre_explicit(j: usize, alpha: f64, u: f64) -> f64 {
    (0..=j)
        .map(|i| {
            let binom: f64 = (1..=j - i)
                .map(|m| (alpha + (i + m) as f64) / m as f64)
                .product();
            let fact: f64 = (1..=i).map(|m| m as f64).product();
            let sign = if i % 2 == 0 { 1.0 } else { -1.0 };
            sign * binom * u.powi(i as i32) / fact
        })
        .sum()
}

fn kernel_checks() -> Result<Vec<Check>> {
    let mut out = Vec::new();
    let zs: Vec<f64> = linspace(0.0, 20.0, 21).collect();
    let ws: Vec<f64> = linspace(-1.0, 1.0, 11).collect();

    for m in 2..=5 {
        let params = DeformParams::new(2.0, m)?;
        let mut worst = 0.0_f64;
        for &z in &zs {
            for &w in &ws {
                worst = worst.max((series(&params, z, w)? - kernel_a2(&args(z, w)?)).norm());
            }
        }
        out.push(Check::new(
            format!("kernel.exponential_anchor.m{m}"),
            worst,
            1e-10,
        ));
    }

    for m in 2..=4 {
        let params = DeformParams::new(1.0, m)?;
        let mut worst = 0.0_f64;
        for &z in &zs {
            for &w in &ws {
                let closed = kernel_a1(m, &args(z, w)?)?;
                worst = worst.max((series(&params, z, w)? - Complex64::new(closed, 0.0)).norm());
            }
        }
        out.push(Check::new(
            format!("kernel.a1_closed_form.m{m}"),
            worst,
            1e-9,
        ));
    }

    for n in 1..=6 {
        let params = DeformParams::from_n(n, 2)?;
        let mut worst = 0.0_f64;
        for &z in &zs {
            for &w in &ws {
                worst = worst
                    .max((series(&params, z, w)? - kernel_dim2_closed(n, &args(z, w)?)?).norm());
            }
        }
        out.push(Check::new(
            format!("kernel.dim2_closed_vs_series.n{n}"),
            worst,
            1e-9,
        ));
    }

    let mut sup = 0.0_f64;
    for n in 1..=8 {
        for z in linspace(0.0, 50.0, 101) {
            for w in linspace(-1.0, 1.0, 41) {
                sup = sup.max(kernel_dim2_closed(n, &args(z, w)?)?.norm());
            }
        }
    }
    out.push(Check::new(
        "kernel.dim2_bound_excess",
        (sup - 1.0).max(0.0),
        1e-12,
    ));

    let mut imag = 0.0_f64;
    let mut agree = 0.0_f64;
    for n in 1..=6 {
        for &z in &zs {
            for &w in &ws {
                let a = args(z, w)?;
                let p = kernel_dim2_parity(n, &a)?;
                if n % 2 == 0 {
                    imag = imag.max(p.im.abs());
                }
                agree = agree.max((p - kernel_dim2_closed(n, &a)?).norm());
            }
        }
    }
    out.push(Check::new(
        "kernel.parity_even_n_imaginary_part",
        imag,
        1e-13,
    ));
    out.push(Check::new("kernel.parity_vs_closed", agree, 1e-13));

    let policy = TruncationPolicy::default();
    for a in [2.0, 1.0, 2.0 / 3.0] {
        for m in 2..=4 {
            let lo = DeformParams::new(a, m)?;
            let hi = DeformParams::new(a, m + 2)?;
            let mut worst = 0.0_f64;
            for z in linspace(0.0, 10.0, 11) {
                for &w in &ws {
                    let step = dim_step_series(&lo, &args(z, w)?, &policy)?.value;
                    worst = worst.max((step - series(&hi, z, w)?).norm());
                }
            }
            out.push(Check::new(
                format!("kernel.dimension_step.a{a:.4}.m{m}"),
                worst,
                1e-8,
            ));
        }
    }

    for a in [2.0, 1.0, 2.0 / 3.0] {
        let base = DeformParams::new(a, 3)?;
        let target = DeformParams::new(a, 7)?;
        let mut worst = 0.0_f64;
        for z in linspace(0.0, 10.0, 11) {
            for &w in &ws {
                let lifted = dimension_lift(&base, 2, &args(z, w)?, &policy)?.value;
                worst = worst.max((lifted - series(&target, z, w)?).norm());
            }
        }
        out.push(Check::new(
            format!("kernel.odd_reduction_m7.a{a:.4}"),
            worst,
            1e-7,
        ));
    }

    for n in 1..=4 {
        for k in 2..=3 {
            let params = DeformParams::from_n(n, 2 * k)?;
            let mut worst = 0.0_f64;
            for z in linspace(0.0, 10.0, 11) {
                for w in linspace(-0.99, 0.99, 11) {
                    let closed = kernel_even_dim(n, k, &args(z, w)?)?;
                    worst = worst.max((closed - series(&params, z, w)?).norm());
                }
            }
            out.push(Check::new(
                format!("kernel.even_dimension.n{n}.k{k}"),
                worst,
                1e-7,
            ));
        }
    }

    let mut worst = 0.0_f64;
    for a in [2.0, 1.0, 2.0 / 3.0, 0.5, 0.3] {
        for m in [2, 3, 4, 7] {
            let params = DeformParams::new(a, m)?;
            for &w in &ws {
                worst = worst.max((series(&params, 0.0, w)? - Complex64::new(1.0, 0.0)).norm());
            }
        }
    }
    out.push(Check::new("kernel.origin_normalization", worst, 1e-15));

    Ok(out)
}

fn random_series(rng: &mut ChaCha8Rng) -> CosineSeries<f64> {
    let len = rng.gen_range(1..=64);
    let coeffs = (0..len)
        .map(|k| {
            let scale = 0.5_f64.powi(k);
            Complex64::new(rng.gen_range(-scale..=scale), rng.gen_range(-scale..=scale))
                / std::f64::consts::SQRT_2
        })
        .collect();
    CosineSeries::new(coeffs)
}

fn downsample_checks() -> Result<Vec<Check>> {
    let mut out = Vec::new();
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed);
    let angles: Vec<f64> = linspace(0.0, std::f64::consts::TAU, 32).collect();
    let mut identity = 0.0_f64;
    let mut composition = 0.0_f64;
    for _ in 0..200 {
        let s = random_series(&mut rng);
        for n in 1..=8 {
            let sub = downsample_coeffs(&s, n)?;
            for &t in &angles {
                let shifted = downsample_by_shifts(|u| eval_series(&s, u), n, t)?;
                identity = identity.max((eval_series(&sub, t) - shifted).norm());
            }
        }
        for (n, m) in [(2, 3), (3, 2), (2, 4)] {
            let twice = downsample_coeffs(&downsample_coeffs(&s, n)?, m)?;
            let once = downsample_coeffs(&s, n * m)?;
            let coeff_gap = twice
                .coeffs()
                .iter()
                .zip(once.coeffs())
                .map(|(a, b)| (a - b).norm())
                .fold(0.0, f64::max);
            composition = composition.max(coeff_gap);
            for &t in &angles[..8] {
                let nested = downsample_by_shifts(
                    |u| downsample_by_shifts(|v| eval_series(&s, v), n, u).unwrap(),
                    m,
                    t,
                )?;
                let direct = downsample_by_shifts(|u| eval_series(&s, u), n * m, t)?;
                composition = composition.max((nested - direct).norm());
            }
        }
    }
    out.push(Check::new(
        "downsample.shift_average_matches_subsampling",
        identity,
        1e-12,
    ));
    out.push(Check::new("downsample.composition", composition, 1e-12));

    let mut replay = 0.0_f64;
    for n in 1..=6 {
        for z in linspace(0.0, 20.0, 9) {
            let amp = f64::from(n) * z.powf(1.0 / f64::from(n));
            let order = crate::downsample::jacobi_anger_order(amp, 1e-17)?;
            let seed = jacobi_anger_coeffs(amp, order * n as usize + n as usize)?;
            let sub = downsample_coeffs(&seed, n as usize)?;
            for w in linspace(-1.0, 1.0, 9) {
                let a = args(z, w)?;
                let closed = kernel_dim2_closed(n, &a)?;
                let by_coeffs = eval_series(&sub, a.t());
                let by_shifts = downsample_by_shifts(|u| eval_series(&seed, u), n as usize, a.t())?;
                replay = replay
                    .max((by_coeffs - closed).norm())
                    .max((by_shifts - closed).norm());
            }
        }
    }
    out.push(Check::new("downsample.jacobi_anger_replay", replay, 1e-11));
    Ok(out)
}

fn eigen_samples() -> Vec<(f64, f64)> {
    (0..24)
        .map(|i| (0.15 + 0.17 * i as f64, 0.3 + 0.61 * i as f64))
        .collect()
}

fn transform_checks() -> Result<Vec<Check>> {
    let mut out = Vec::new();
    let samples = eigen_samples();
    for (label, a) in [("2", 2.0), ("1", 1.0), ("2/3", 2.0 / 3.0)] {
        let params = DeformParams::new(a, 2)?;
        let quad = build_quadrature(&params, 16, 1e-10)?;
        let moments = (0..=DEFAULT_MAX_MOMENT)
            .map(|p| moment_error(&params, &quad, p))
            .collect::<Result<Vec<_>>>()?;
        out.push(Check::new(
            format!("transform.moments.a{label}"),
            moments.into_iter().fold(0.0, f64::max),
            1e-10,
        ));

        let mut worst = 0.0_f64;
        let idxs = EigenIndex::all_up_to(2, 2);
        for idx in &idxs {
            worst = worst.max(verify_eigenrelation(&params, idx, &quad, &samples)?);
        }
        out.push(Check::new(
            format!("transform.eigenrelation.a{label}"),
            worst,
            1e-5,
        ));

        let mut worst = 0.0_f64;
        for idx in idxs.iter().filter(|i| i.j <= 1) {
            worst = worst.max((transform_norm_ratio(&params, idx, &quad)? - 1.0).abs());
        }
        out.push(Check::new(
            format!("transform.norm_preservation.a{label}"),
            worst,
            1e-6,
        ));

        let gram = gram_matrix(&params, &quad, &EigenIndex::all_up_to(3, 3))?;
        out.push(Check::new(
            format!("transform.gram_off_diagonal.a{label}"),
            off_diagonal_mass(&gram),
            1e-8,
        ));
    }

    let mut worst = 0.0_f64;
    for j in 0..=5 {
        for alpha in [0.0, 0.5, 1.0, 2.0] {
            for s in [0.5, 1.0, 2.0] {
                worst = worst.max(hankel_laguerre_check(j, alpha, s)?);
            }
        }
    }
    out.push(Check::new("transform.hankel_laguerre", worst, 1e-8));

    for m in [2, 3] {
        let mut worst = 0.0_f64;
        for k in 0..=4 {
            for l in 0..=4 {
                worst = worst.max(reproducing_kernel_check::<f64>(k, l, m)?);
            }
        }
        out.push(Check::new(
            format!("transform.reproducing_kernel.m{m}"),
            worst,
            1e-10,
        ));
    }
    Ok(out)
}

/// `max_{i≠j} |G_ij| / sqrt(G_ii G_jj)`.
pub fn off_diagonal_mass(gram: &[Vec<f64>]) -> f64 {
    let mut worst = 0.0_f64;
    for (i, row) in gram.iter().enumerate() {
        for (j, &g) in row.iter().enumerate() {
            if i != j {
                worst = worst.max(g.abs() / (gram[i][i] * gram[j][j]).sqrt());
            }
        }
    }
    worst
}
