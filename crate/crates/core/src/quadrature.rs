//! Gauss–Legendre rules and composite panels.

use crate::scalar::Scalar;

/// Nodes and weights of the `n`-point Gauss–Legendre rule on `[-1, 1]`, ascending.
pub fn gauss_legendre<T: Scalar>(n: usize) -> (Vec<T>, Vec<T>) {
    assert!(n >= 1, "rule needs at least one node");
    let mut nodes = vec![T::zero(); n];
    let mut weights = vec![T::zero(); n];
    let nf = T::from_count(n);
    let half = T::lit(0.5);
    for i in 0..n.div_ceil(2) {
        // Tricomi initial guess, then Newton on P_n
        let mut x = (T::PI() * (T::from_count(i) + T::lit(0.75)) / (nf + half)).cos();
        let mut dp = T::one();
        for _ in 0..100 {
            let (p, d) = legendre_with_derivative(n, x);
            dp = d;
            let dx = p / d;
            x = x - dx;
            if dx.abs() <= T::epsilon() * T::lit(4.0) {
                let (_, d) = legendre_with_derivative(n, x);
                dp = d;
                break;
            }
        }
        let w = T::lit(2.0) / ((T::one() - x * x) * dp * dp);
        nodes[i] = -x;
        nodes[n - 1 - i] = x;
        weights[i] = w;
        weights[n - 1 - i] = w;
    }
    if n % 2 == 1 {
        nodes[n / 2] = T::zero();
    }
    (nodes, weights)
}

fn legendre_with_derivative<T: Scalar>(n: usize, x: T) -> (T, T) {
    let mut p0 = T::one();
    let mut p1 = x;
    for k in 2..=n {
        let kf = T::from_count(k);
        let p2 = ((T::lit(2.0) * kf - T::one()) * x * p1 - (kf - T::one()) * p0) / kf;
        p0 = p1;
        p1 = p2;
    }
    let nf = T::from_count(n);
    let d = nf * (x * p1 - p0) / (x * x - T::one());
    (p1, d)
}

/// Composite rule on `[lo, hi]` with `panels` equal panels of an `order`-point rule.
pub fn composite_gauss_legendre<T: Scalar>(
    lo: T,
    hi: T,
    panels: usize,
    order: usize,
) -> (Vec<T>, Vec<T>) {
    let (x, w) = gauss_legendre::<T>(order);
    let h = (hi - lo) / T::from_count(panels);
    let half = h * T::lit(0.5);
    let mut nodes = Vec::with_capacity(panels * order);
    let mut weights = Vec::with_capacity(panels * order);
    for p in 0..panels {
        let mid = lo + h * (T::from_count(p) + T::lit(0.5));
        for (xi, wi) in x.iter().zip(&w) {
            nodes.push(mid + half * *xi);
            weights.push(half * *wi);
        }
    }
    (nodes, weights)
}
