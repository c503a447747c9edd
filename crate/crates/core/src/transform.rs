//! The deformed transform realized by quadrature in dimension 2, its eigenbasis,
//! and quadrature checks of the two structural identities behind the series.
//!
//! Radial integrals are taken in `s = r^{a/2}`: the measure `r^{a-1} dr` becomes
//! `(2/a) s ds`, and both the eigenfunctions and the kernel are smooth in `s`
//! (the kernel's Bessel argument `(2/a)(rρ)^{a/2}` is linear in `s`).

use num_complex::Complex;
use rayon::prelude::*;

use crate::closed::kernel_dispatch;
use crate::error::{Error, Result};
use crate::params::{DeformParams, KernelArgs};
use crate::quadrature::composite_gauss_legendre;
use crate::scalar::{quarter_turns, ComplexSum, NeumaierSum, Scalar};
use crate::series::TruncationPolicy;
use crate::specfun::{bessel_j, gamma_fn, gegenbauer, laguerre, ln_gamma, RealOrder};

/// Gauss–Legendre points per radial panel.
const PANEL_ORDER: usize = 16;
/// Moment order the default quadrature must integrate.
pub const DEFAULT_MAX_MOMENT: usize = 40;

/// Circular harmonic `r^k cos kθ` or `r^k sin kθ`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Harmonic {
    Cos,
    Sin,
}

/// `(j, k, harmonic)` addressing the eigenfunction `φ_{j,k}` in dimension 2.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct EigenIndex {
    pub j: usize,
    pub k: usize,
    pub harmonic: Harmonic,
}

impl EigenIndex {
    pub fn new(j: usize, k: usize, harmonic: Harmonic) -> Result<Self> {
        if k == 0 && harmonic == Harmonic::Sin {
            return Err(Error::InvalidParameter(
                "k = 0 admits only the cosine harmonic".into(),
            ));
        }
        Ok(Self { j, k, harmonic })
    }

    pub fn cos(j: usize, k: usize) -> Self {
        Self {
            j,
            k,
            harmonic: Harmonic::Cos,
        }
    }

    /// All indices with `j <= j_max`, `k <= k_max`, both harmonics where allowed.
    pub fn all_up_to(j_max: usize, k_max: usize) -> Vec<Self> {
        let mut out = Vec::new();
        for j in 0..=j_max {
            for k in 0..=k_max {
                out.push(Self::cos(j, k));
                if k > 0 {
                    out.push(Self {
                        j,
                        k,
                        harmonic: Harmonic::Sin,
                    });
                }
            }
        }
        out
    }

    fn trig<T: Scalar>(&self, theta: T) -> T {
        let arg = T::from_count(self.k) * theta;
        match self.harmonic {
            Harmonic::Cos => arg.cos(),
            Harmonic::Sin => arg.sin(),
        }
    }
}

fn require_dim2<T: Scalar>(params: &DeformParams<T>) -> Result<()> {
    if params.m() != 2 {
        return Err(Error::InvalidParameter(format!(
            "transform quadrature is implemented for m = 2 only (got m = {})",
            params.m()
        )));
    }
    Ok(())
}

/// `φ_{j,k}(r, θ) = L_j^{2k/a}((2/a) r^a) r^k trig(kθ) e^{-r^a/a}` (dimension 2).
pub fn eigenfunction<T: Scalar>(
    params: &DeformParams<T>,
    idx: &EigenIndex,
    r: T,
    theta: T,
) -> Result<T> {
    require_dim2(params)?;
    if r < T::zero() {
        return Err(Error::InvalidParameter(format!("radius {r} < 0")));
    }
    let a = params.a();
    let ra = r.powf(a);
    let alpha = T::lit(2.0) * T::from_count(idx.k) / a;
    let radial = laguerre(idx.j, alpha, T::lit(2.0) / a * ra)?;
    Ok(radial * r.powi(idx.k as i32) * idx.trig(theta) * (-ra / a).exp())
}

/// Eigenvalue `e^{-iπ(j + k/a)}`.
pub fn eigenvalue<T: Scalar>(params: &DeformParams<T>, idx: &EigenIndex) -> Complex<T> {
    match params.rational_n() {
        Some(n) => quarter_turns((2 * idx.j + idx.k * n as usize) as u64),
        None => {
            let turns = T::from_count(idx.j) + T::from_count(idx.k) / params.a();
            let two = T::lit(2.0);
            let turns = turns - two * (turns / two).floor();
            let ang = -T::PI() * turns;
            Complex::new(ang.cos(), ang.sin())
        }
    }
}

/// `Γ(m/2) / (Γ((2λ+a)/a) 2 a^{2λ/a} π^{m/2})`; `1/(2π)` for `m = 2`.
pub fn transform_constant<T: Scalar>(params: &DeformParams<T>) -> Result<T> {
    let a = params.a();
    let lambda = params.lambda();
    let half_m = T::lit(f64::from(params.m())) * T::lit(0.5);
    let two = T::lit(2.0);
    Ok(gamma_fn(half_m)?
        / (gamma_fn((two * lambda + a) / a)?
            * two
            * (two * lambda / a * a.ln()).exp()
            * T::PI().powf(half_m)))
}

/// Product rule on the plane: radial nodes/weights (measure `r^{a-1} dr` absorbed)
/// times a uniform angular rule.
#[derive(Debug, Clone, PartialEq)]
pub struct QuadSpec<T> {
    radial_nodes: Vec<T>,
    radial_weights: Vec<T>,
    angular_count: usize,
    r_cutoff: T,
}

impl<T: Scalar> QuadSpec<T> {
    pub fn radial_nodes(&self) -> &[T] {
        &self.radial_nodes
    }

    pub fn radial_weights(&self) -> &[T] {
        &self.radial_weights
    }

    pub fn angular_count(&self) -> usize {
        self.angular_count
    }

    pub fn r_cutoff(&self) -> T {
        self.r_cutoff
    }

    fn angles(&self) -> Vec<T> {
        let q = T::from_count(self.angular_count);
        (0..self.angular_count)
            .map(|i| T::TAU() * T::from_count(i) / q)
            .collect()
    }

    fn angular_weight(&self) -> T {
        T::TAU() / T::from_count(self.angular_count)
    }
}

/// `Σ_i w_i r_i^p e^{-r_i^a/a}` against `a^{p/a} Γ(p/a + 1)`, as a relative error.
pub fn moment_error<T: Scalar>(
    params: &DeformParams<T>,
    quad: &QuadSpec<T>,
    p: usize,
) -> Result<T> {
    let a = params.a();
    let pf = T::from_count(p);
    let mut acc = NeumaierSum::new();
    for (r, w) in quad.radial_nodes.iter().zip(&quad.radial_weights) {
        acc.add(*w * r.powi(p as i32) * (-r.powf(a) / a).exp());
    }
    let exact = (pf / a * a.ln() + ln_gamma(pf / a + T::one())?).exp();
    Ok(((acc.value() - exact) / exact).abs())
}

/// Default planar quadrature certified on moments up to order 40.
pub fn build_quadrature<T: Scalar>(
    params: &DeformParams<T>,
    degree: usize,
    tol: T,
) -> Result<QuadSpec<T>> {
    build_quadrature_with_moments(params, degree, tol, DEFAULT_MAX_MOMENT)
}

/// Planar quadrature with cutoff `R` such that `e^{-R^a/a} R^{max_moment} < 1e-18`,
/// radial panels in `s = r^{a/2}` of width `8/degree`, and `4·degree + 8` angles.
pub fn build_quadrature_with_moments<T: Scalar>(
    params: &DeformParams<T>,
    degree: usize,
    tol: T,
    max_moment: usize,
) -> Result<QuadSpec<T>> {
    require_dim2(params)?;
    if degree < 16 {
        return Err(Error::InvalidParameter(format!(
            "quadrature degree {degree} must be >= 16"
        )));
    }
    let a = params.a();
    let two = T::lit(2.0);
    let pm = T::from_count(max_moment.max(1));
    let target = T::lit(18.0) * T::LN_10();
    // in s: s²/a - (2p/a) ln s is increasing past s = sqrt(p)
    let mut s_max = pm.sqrt().max(T::one());
    while s_max * s_max / a - two * pm / a * s_max.ln() <= target {
        s_max = s_max + T::lit(0.05);
    }
    let r_cutoff = s_max.powf(two / a);
    let panels = (s_max * T::from_count(degree) / T::lit(8.0))
        .ceil()
        .to_usize()
        .unwrap_or(1)
        .max(1);
    let (s_nodes, s_weights) = composite_gauss_legendre(T::zero(), s_max, panels, PANEL_ORDER);
    let radial_nodes = s_nodes.iter().map(|&s| s.powf(two / a)).collect();
    let radial_weights = s_nodes
        .iter()
        .zip(&s_weights)
        .map(|(&s, &w)| two / a * s * w)
        .collect();
    let quad = QuadSpec {
        radial_nodes,
        radial_weights,
        angular_count: 4 * degree + 8,
        r_cutoff,
    };
    for p in 0..=max_moment {
        let err = moment_error(params, &quad, p)?;
        if !(err < tol) {
            return Err(Error::Quadrature(format!(
                "moment r^{p}: relative error {err} exceeds {tol}"
            )));
        }
    }
    Ok(quad)
}

/// Samples `f` on the product grid, row-major in the radial index.
fn sample_grid<T, F>(quad: &QuadSpec<T>, f: &F) -> Vec<T>
where
    T: Scalar,
    F: Fn(T, T) -> T,
{
    let angles = quad.angles();
    quad.radial_nodes
        .iter()
        .flat_map(|&r| angles.iter().map(move |&th| (r, th)))
        .map(|(r, th)| f(r, th))
        .collect()
}

/// Ratio of the largest weighted integrand value on the outermost radial node to
/// the largest over the whole grid.
pub fn cutoff_leakage<T, F>(quad: &QuadSpec<T>, f: F) -> T
where
    T: Scalar,
    F: Fn(T, T) -> T,
{
    let grid = sample_grid(quad, &f);
    let q = quad.angular_count;
    let row_max = |i: usize| {
        grid[i * q..(i + 1) * q]
            .iter()
            .fold(T::zero(), |m, v| m.max(v.abs()))
            * quad.radial_weights[i]
    };
    let n = quad.radial_nodes.len();
    let overall = (0..n).map(row_max).fold(T::zero(), T::max);
    if overall == T::zero() {
        return T::zero();
    }
    row_max(n - 1) / overall
}

/// `F_a f(y)` at one point `y = (ρ, ψ)`.
pub fn apply_transform<T, F>(
    params: &DeformParams<T>,
    f: F,
    quad: &QuadSpec<T>,
    y: (T, T),
) -> Result<Complex<T>>
where
    T: Scalar,
    F: Fn(T, T) -> T + Sync,
{
    Ok(apply_transform_many(params, f, quad, &[y])?[0])
}

/// `F_a f` at many points, sampling `f` once.
pub fn apply_transform_many<T, F>(
    params: &DeformParams<T>,
    f: F,
    quad: &QuadSpec<T>,
    ys: &[(T, T)],
) -> Result<Vec<Complex<T>>>
where
    T: Scalar,
    F: Fn(T, T) -> T + Sync,
{
    require_dim2(params)?;
    let grid = sample_grid(quad, &f);
    let q = quad.angular_count;
    let angles = quad.angles();
    let wq = quad.angular_weight();
    let row_max: Vec<T> = (0..quad.radial_nodes.len())
        .map(|i| {
            grid[i * q..(i + 1) * q]
                .iter()
                .fold(T::zero(), |m, v| m.max(v.abs()))
                * quad.radial_weights[i]
        })
        .collect();
    let overall = row_max.iter().copied().fold(T::zero(), T::max);
    if let Some(&last) = row_max.last() {
        if overall > T::zero() && last > T::lit(1e-14) * overall {
            log::warn!(
                "integrand at the radial cutoff is {} of its maximum; cutoff too small",
                last / overall
            );
        }
    }
    // rows that cannot contribute at double precision
    let active: Vec<usize> = (0..row_max.len())
        .filter(|&i| row_max[i] > T::lit(1e-18) * overall)
        .collect();
    let constant = transform_constant(params)?;
    let policy = TruncationPolicy::default();

    ys.par_iter()
        .map(|&(rho, psi)| {
            let mut acc = ComplexSum::new();
            for &i in &active {
                let r = quad.radial_nodes[i];
                let mut row = ComplexSum::new();
                for (qi, &th) in angles.iter().enumerate() {
                    let fv = grid[i * q + qi];
                    if fv == T::zero() {
                        continue;
                    }
                    let args = KernelArgs::new(r * rho, (th - psi).cos())?;
                    let k = kernel_dispatch(params, &args, &policy)?.value;
                    row.add(k * fv);
                }
                acc.add(row.value() * quad.radial_weights[i]);
            }
            Ok(acc.value() * (wq * constant))
        })
        .collect()
}

/// Max over samples of `|F_a φ(y) - e^{-iπ(j+k/a)} φ(y)|`, relative where
/// `|φ(y)| > 1e-3 · max|φ|` and absolute elsewhere.
pub fn verify_eigenrelation<T: Scalar>(
    params: &DeformParams<T>,
    idx: &EigenIndex,
    quad: &QuadSpec<T>,
    samples: &[(T, T)],
) -> Result<T> {
    require_dim2(params)?;
    let phi = |r: T, th: T| eigenfunction(params, idx, r, th).unwrap_or_else(|_| T::nan());
    let transformed = apply_transform_many(params, phi, quad, samples)?;
    let ev = eigenvalue(params, idx);
    let direct: Vec<T> = samples.iter().map(|&(r, th)| phi(r, th)).collect();
    let scale = direct.iter().fold(T::zero(), |m, v| m.max(v.abs()));
    let mut worst = T::zero();
    for (got, &want) in transformed.iter().zip(&direct) {
        let diff = (*got - ev * want).norm();
        let res = if want.abs() > T::lit(1e-3) * scale {
            diff / want.abs()
        } else {
            diff
        };
        worst = worst.max(res);
    }
    Ok(worst)
}

/// `<f, g>` in `L²(R², r^{a-2} dx)` by the planar quadrature.
pub fn inner_product<T, F, G>(quad: &QuadSpec<T>, f: F, g: G) -> T
where
    T: Scalar,
    F: Fn(T, T) -> T,
    G: Fn(T, T) -> T,
{
    let angles = quad.angles();
    let wq = quad.angular_weight();
    let mut acc = NeumaierSum::new();
    for (&r, &w) in quad.radial_nodes.iter().zip(&quad.radial_weights) {
        let row: T = angles.iter().map(|&th| f(r, th) * g(r, th)).sum();
        acc.add(w * wq * row);
    }
    acc.value()
}

/// Gram matrix of the given eigenfunctions.
pub fn gram_matrix<T: Scalar>(
    params: &DeformParams<T>,
    quad: &QuadSpec<T>,
    idxs: &[EigenIndex],
) -> Result<Vec<Vec<T>>> {
    require_dim2(params)?;
    let mut g = vec![vec![T::zero(); idxs.len()]; idxs.len()];
    for (i, a) in idxs.iter().enumerate() {
        for (j, b) in idxs.iter().enumerate().skip(i) {
            let v = inner_product(
                quad,
                |r, th| eigenfunction(params, a, r, th).unwrap_or_else(|_| T::nan()),
                |r, th| eigenfunction(params, b, r, th).unwrap_or_else(|_| T::nan()),
            );
            g[i][j] = v;
            g[j][i] = v;
        }
    }
    Ok(g)
}

/// `‖F_a φ‖ / ‖φ‖` in the quadrature norm. `F_a φ` is sampled on the radial nodes
/// along one ray; its angular profile is `trig(kψ)` because the kernel depends on
/// `θ - ψ` only. Output radii stop where the weighted input `w_i φ(r_i)²` falls
/// below `1e-30` of its peak: beyond that the angular rule no longer resolves the
/// kernel at `z = rρ`, and the true output is below double precision anyway.
pub fn transform_norm_ratio<T: Scalar>(
    params: &DeformParams<T>,
    idx: &EigenIndex,
    quad: &QuadSpec<T>,
) -> Result<T> {
    require_dim2(params)?;
    let psi0 = match idx.harmonic {
        Harmonic::Cos => T::zero(),
        Harmonic::Sin => T::FRAC_PI_2() / T::from_count(idx.k),
    };
    let phi = |r: T, th: T| eigenfunction(params, idx, r, th).unwrap_or_else(|_| T::nan());
    let mass: Vec<T> = quad
        .radial_nodes
        .iter()
        .zip(&quad.radial_weights)
        .map(|(&r, &w)| w * phi(r, psi0).powi(2))
        .collect();
    let peak = mass.iter().copied().fold(T::zero(), T::max);
    let last = mass
        .iter()
        .rposition(|&v| v > T::lit(1e-30) * peak)
        .unwrap_or(0);
    let ys: Vec<(T, T)> = quad.radial_nodes[..=last]
        .iter()
        .map(|&r| (r, psi0))
        .collect();
    let fphi = apply_transform_many(params, phi, quad, &ys)?;
    let ang_norm = if idx.k == 0 { T::TAU() } else { T::PI() };
    let trig0 = idx.trig(psi0);
    let mut out = NeumaierSum::new();
    for (v, &w) in fphi.iter().zip(&quad.radial_weights) {
        out.add(w * (*v / trig0).norm_sqr() * ang_norm);
    }
    let inn = inner_product(quad, phi, phi);
    Ok((out.value() / inn).sqrt())
}

/// `|∫_0^∞ r^{α+1} J_α(rs) L_j^α(r²) e^{-r²/2} dr - (-1)^j s^α L_j^α(s²) e^{-s²/2}|`.
pub fn hankel_laguerre_check<T: Scalar>(j: usize, alpha: T, s: T) -> Result<T> {
    if !(s > T::zero()) {
        return Err(Error::InvalidParameter(format!("s = {s} must be > 0")));
    }
    if !(alpha > -T::one()) {
        return Err(Error::InvalidParameter(format!(
            "alpha = {alpha} must be > -1"
        )));
    }
    let p = T::lit(2.0) * alpha + T::lit(2.0) + T::lit(2.0) * T::from_count(j);
    let target = T::lit(20.0) * T::LN_10();
    let mut r_max = p.sqrt().max(T::lit(4.0));
    while r_max * r_max * T::lit(0.5) - p * r_max.ln() <= target {
        r_max = r_max + T::lit(0.25);
    }
    let panels = (r_max * T::lit(2.0) * s.max(T::one()))
        .ceil()
        .to_usize()
        .unwrap_or(1);
    let (nodes, weights) = composite_gauss_legendre(T::zero(), r_max, panels, 20);
    let order = RealOrder::new(alpha)?;
    let mut acc = NeumaierSum::new();
    for (&r, &w) in nodes.iter().zip(&weights) {
        let v = r.powf(alpha + T::one())
            * bessel_j(order, r * s)?
            * laguerre(j, alpha, r * r)?
            * (-r * r * T::lit(0.5)).exp();
        acc.add(w * v);
    }
    let sign = if j % 2 == 0 { T::one() } else { -T::one() };
    let rhs = sign * s.powf(alpha) * laguerre(j, alpha, s * s)? * (-s * s * T::lit(0.5)).exp();
    Ok((acc.value() - rhs).abs())
}

/// Residual of `(λ+k)/λ ∫_{S^{m-1}} C_k^λ(<ξ,η>) H_ℓ(ξ) dσ(ξ) = σ_m δ_{kℓ} H_ℓ(η)` over a
/// fixed set of points `η` and harmonics `H_ℓ`, for `m ∈ {2, 3}`.
pub fn reproducing_kernel_check<T: Scalar>(k: usize, l: usize, m: u32) -> Result<T> {
    match m {
        2 => Ok(reproducing_circle(k, l)),
        3 => reproducing_sphere(k, l),
        _ => Err(Error::InvalidParameter(format!(
            "reproducing-kernel check supports m = 2, 3 (got {m})"
        ))),
    }
}

fn reproducing_circle<T: Scalar>(k: usize, l: usize) -> T {
    // (λ+k)/λ C_k^λ(cos θ) → 2 cos kθ (k >= 1), 1 (k = 0) as λ → 0
    let q = 4 * (k + l) + 16;
    let qf = T::from_count(q);
    let sigma = T::TAU();
    let kernel = |th: T| {
        if k == 0 {
            T::one()
        } else {
            T::lit(2.0) * (T::from_count(k) * th).cos()
        }
    };
    let mut worst = T::zero();
    let harmonics: Vec<Box<dyn Fn(T) -> T>> = if l == 0 {
        vec![Box::new(|_| T::one())]
    } else {
        let lf = T::from_count(l);
        vec![
            Box::new(move |th: T| (lf * th).cos()),
            Box::new(move |th: T| (lf * th).sin()),
        ]
    };
    for h in &harmonics {
        for e in 0..7 {
            let eta = T::lit(0.37) + T::lit(0.91) * T::from_count(e);
            let mut acc = NeumaierSum::new();
            for i in 0..q {
                let th = T::TAU() * T::from_count(i) / qf;
                acc.add(kernel(th - eta) * h(th));
            }
            let lhs = acc.value() * T::TAU() / qf;
            let rhs = if k == l { sigma * h(eta) } else { T::zero() };
            worst = worst.max((lhs - rhs).abs());
        }
    }
    worst
}

fn legendre_p<T: Scalar>(l: usize, x: T) -> T {
    gegenbauer(l, T::lit(0.5), x.max(-T::one()).min(T::one())).unwrap_or_else(|_| T::nan())
}

fn reproducing_sphere<T: Scalar>(k: usize, l: usize) -> Result<T> {
    use crate::quadrature::gauss_legendre;
    let lambda = T::lit(0.5);
    let sigma = T::lit(4.0) * T::PI();
    let (cos_nodes, cos_weights) = gauss_legendre::<T>(k + l + 8);
    let q = 2 * (k + l) + 8;
    let qf = T::from_count(q);
    let unit = |v: [T; 3]| {
        let n = (v[0] * v[0] + v[1] * v[1] + v[2] * v[2]).sqrt();
        [v[0] / n, v[1] / n, v[2] / n]
    };
    let dot = |u: [T; 3], v: [T; 3]| u[0] * v[0] + u[1] * v[1] + u[2] * v[2];
    let axis = unit([T::lit(0.3), T::lit(-0.5), T::lit(0.8)]);
    let lf = l as i32;
    // zonal P_ℓ(<ξ, axis>) and sectoral Re (ξ₁ + iξ₂)^ℓ, both harmonic of degree ℓ
    let zonal = move |xi: [T; 3]| legendre_p(l, dot(xi, axis));
    let sectoral = move |xi: [T; 3]| Complex::new(xi[0], xi[1]).powi(lf).re;
    let harmonics: [&dyn Fn([T; 3]) -> T; 2] = [&zonal, &sectoral];
    let etas = [
        unit([T::lit(0.0), T::lit(0.0), T::lit(1.0)]),
        unit([T::lit(0.6), T::lit(0.2), T::lit(-0.4)]),
        unit([T::lit(-0.1), T::lit(0.9), T::lit(0.3)]),
        unit([T::lit(1.0), T::lit(-1.0), T::lit(0.05)]),
    ];
    let coef = (lambda + T::from_count(k)) / lambda;
    let mut worst = T::zero();
    for h in harmonics {
        for &eta in &etas {
            let mut acc = NeumaierSum::new();
            for (&c, &wc) in cos_nodes.iter().zip(&cos_weights) {
                let sn = (T::one() - c * c).sqrt();
                for i in 0..q {
                    let ph = T::TAU() * T::from_count(i) / qf;
                    let xi = [sn * ph.cos(), sn * ph.sin(), c];
                    acc.add(
                        wc * gegenbauer(k, lambda, dot(xi, eta).max(-T::one()).min(T::one()))?
                            * h(xi),
                    );
                }
            }
            let lhs = coef * acc.value() * T::TAU() / qf;
            let rhs = if k == l { sigma * h(eta) } else { T::zero() };
            worst = worst.max((lhs - rhs).abs());
        }
    }
    Ok(worst)
}
