//! Quadrature rules used as oracles and for Stieltjes inversion.

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::error::{Error, Result};

/// Result of an adaptive rule: value plus an estimate of the absolute error.
#[derive(Debug, Clone, Copy)]
pub struct QuadResult {
    pub value: Complex64,
    pub error: f64,
    pub evaluations: usize,
}

/// Fixed n-point Gauss–Legendre rule on `[a, b]` for real integrands.
pub fn gauss_legendre<F: Fn(f64) -> f64>(f: F, a: f64, b: f64, n: usize) -> f64 {
    let (nodes, weights) = legendre_nodes(n);
    let mid = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    nodes
        .iter()
        .zip(&weights)
        .map(|(x, w)| w * f(mid + half * x))
        .sum::<f64>()
        * half
}

fn legendre_nodes(n: usize) -> (Vec<f64>, Vec<f64>) {
    let mut nodes = vec![0.0; n];
    let mut weights = vec![0.0; n];
    for i in 0..n {
        let mut x = (PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        let mut dp = 1.0;
        for _ in 0..100 {
            let (mut p0, mut p1) = (1.0, x);
            for k in 2..=n {
                let p2 = ((2 * k - 1) as f64 * x * p1 - (k - 1) as f64 * p0) / k as f64;
                p0 = p1;
                p1 = p2;
            }
            let p = if n == 0 { 1.0 } else { p1 };
            dp = n as f64 * (x * p - p0) / (x * x - 1.0);
            let dx = p / dp;
            x -= dx;
            if dx.abs() < 1e-16 {
                break;
            }
        }
        nodes[i] = x;
        weights[i] = 2.0 / ((1.0 - x * x) * dp * dp);
    }
    (nodes, weights)
}

const GK_NODES: [f64; 8] = [
    0.991_455_371_120_812_6,
    0.949_107_912_342_758_5,
    0.864_864_423_359_769_1,
    0.741_531_185_599_394_4,
    0.586_087_235_467_691_1,
    0.405_845_151_377_397_2,
    0.207_784_955_007_898_5,
    0.0,
];
const GK_WEIGHTS_K: [f64; 8] = [
    0.022_935_322_010_529_22,
    0.063_092_092_629_978_55,
    0.104_790_010_322_250_2,
    0.140_653_259_715_525_9,
    0.169_004_726_639_267_9,
    0.190_350_578_064_785_4,
    0.204_432_940_075_298_9,
    0.209_482_141_084_728_0,
];
const GK_WEIGHTS_G: [f64; 4] = [
    0.129_484_966_168_869_7,
    0.279_705_391_489_276_7,
    0.381_830_050_505_118_9,
    0.417_959_183_673_469_4,
];

fn gk15<F: Fn(f64) -> Complex64>(f: &F, a: f64, b: f64) -> (Complex64, f64) {
    let mid = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    let fc = f(mid);
    let mut kronrod = fc * GK_WEIGHTS_K[7];
    let mut gauss = fc * GK_WEIGHTS_G[3];
    for j in 0..7 {
        let dx = half * GK_NODES[j];
        let pair = f(mid - dx) + f(mid + dx);
        kronrod += pair * GK_WEIGHTS_K[j];
        if j % 2 == 1 {
            gauss += pair * GK_WEIGHTS_G[j / 2];
        }
    }
    ((kronrod * half), ((kronrod - gauss) * half).norm())
}

/// Globally adaptive Gauss–Kronrod (7/15) quadrature of a complex integrand.
///
/// `breakpoints` are interior points where the integrand is known to be
/// rough; they seed the initial partition.
pub fn adaptive_gk<F: Fn(f64) -> Complex64>(
    f: F,
    a: f64,
    b: f64,
    breakpoints: &[f64],
    abs_tol: f64,
    rel_tol: f64,
    max_intervals: usize,
) -> Result<QuadResult> {
    let mut cuts: Vec<f64> = std::iter::once(a)
        .chain(breakpoints.iter().copied().filter(|&x| x > a && x < b))
        .chain(std::iter::once(b))
        .collect();
    cuts.sort_by(f64::total_cmp);
    cuts.dedup();

    let mut intervals: Vec<(f64, f64, Complex64, f64)> = cuts
        .windows(2)
        .map(|w| {
            let (v, e) = gk15(&f, w[0], w[1]);
            (w[0], w[1], v, e)
        })
        .collect();
    let mut evaluations = 15 * intervals.len();

    loop {
        let value: Complex64 = intervals.iter().map(|iv| iv.2).sum();
        let error: f64 = intervals.iter().map(|iv| iv.3).sum();
        if error <= abs_tol.max(rel_tol * value.norm()) {
            return Ok(QuadResult {
                value,
                error,
                evaluations,
            });
        }
        if intervals.len() >= max_intervals {
            return Err(Error::NoConvergence {
                what: "adaptive Gauss-Kronrod",
                detail: format!("error estimate {error:e} after {max_intervals} intervals"),
            });
        }
        let worst = intervals
            .iter()
            .enumerate()
            .max_by(|x, y| x.1 .3.total_cmp(&y.1 .3))
            .map(|(i, _)| i)
            .unwrap_or(0);
        let (lo, hi, _, _) = intervals.swap_remove(worst);
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            return Err(Error::NoConvergence {
                what: "adaptive Gauss-Kronrod",
                detail: "interval cannot be split further".into(),
            });
        }
        let (v1, e1) = gk15(&f, lo, mid);
        let (v2, e2) = gk15(&f, mid, hi);
        evaluations += 30;
        intervals.push((lo, mid, v1, e1));
        intervals.push((mid, hi, v2, e2));
    }
}

/// Tanh–sinh (double exponential) rule on `[a, b]`.
///
/// Nodes cluster doubly exponentially at both endpoints, so integrands with
/// an endpoint singularity or a near-singularity sitting at an endpoint are
/// resolved. The step is halved until two successive levels agree.
pub fn tanh_sinh<F: Fn(f64) -> Complex64>(
    f: F,
    a: f64,
    b: f64,
    abs_tol: f64,
    rel_tol: f64,
    max_level: usize,
) -> Result<QuadResult> {
    let mid = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    const T_MAX: f64 = 3.5;

    // Abscissa/weight at parameter t, with the distance to the nearest
    // endpoint computed without cancellation.
    let node = |t: f64| -> (f64, f64, f64) {
        let s = 0.5 * PI * t.sinh();
        let c = 0.5 * PI * t.cosh();
        let e = (-2.0 * s.abs()).exp();
        let x = (1.0 - e) / (1.0 + e) * s.signum();
        let one_minus = 2.0 * e / (1.0 + e); // 1 - |x|
        let ch = 1.0 / s.cosh();
        (x, one_minus, c * ch * ch)
    };
    let eval = |t: f64| -> Complex64 {
        let (x, one_minus, w) = node(t);
        if one_minus == 0.0 || w == 0.0 {
            return Complex64::new(0.0, 0.0);
        }
        let d = half * one_minus;
        let arg = if x > 0.0 { b - d } else { a + d };
        let arg = if x == 0.0 { mid } else { arg };
        if arg <= a || arg >= b {
            return Complex64::new(0.0, 0.0);
        }
        f(arg) * w
    };

    let mut h = 1.0;
    let mut sum = eval(0.0);
    let mut evaluations = 1;
    let mut k = 1;
    while (k as f64) * h <= T_MAX {
        let t = k as f64 * h;
        sum += eval(t) + eval(-t);
        evaluations += 2;
        k += 1;
    }
    let mut estimate = sum * h * half;

    for _level in 1..=max_level {
        h *= 0.5;
        let mut k = 1;
        while (k as f64) * h <= T_MAX {
            let t = k as f64 * h;
            sum += eval(t) + eval(-t);
            evaluations += 2;
            k += 2;
        }
        let next = sum * h * half;
        let error = (next - estimate).norm();
        estimate = next;
        if error <= abs_tol.max(rel_tol * next.norm()) {
            return Ok(QuadResult {
                value: next,
                error,
                evaluations,
            });
        }
    }
    Err(Error::NoConvergence {
        what: "tanh-sinh",
        detail: format!("no agreement after {max_level} levels"),
    })
}

/// Polynomial (or Richardson) extrapolation to `h = 0` of values sampled at
/// step sizes `hs` using Neville's scheme. Returns the extrapolated value and
/// the difference between the last two diagonal entries.
pub fn neville_extrapolate(hs: &[f64], values: &[Complex64]) -> (Complex64, f64) {
    let n = hs.len();
    let mut p = values.to_vec();
    let mut last_diag = p[0];
    let mut prev_diag = p[0];
    for m in 1..n {
        for i in 0..n - m {
            p[i] = (p[i + 1] * hs[i] - p[i] * hs[i + m]) / (hs[i] - hs[i + m]);
        }
        prev_diag = last_diag;
        last_diag = p[0];
    }
    (last_diag, (last_diag - prev_diag).norm())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn gauss_legendre_polynomials() {
        let v = gauss_legendre(|x| x.powi(9) + 3.0 * x * x, -1.0, 2.0, 6);
        let exact = (2f64.powi(10) - 1.0) / 10.0 + (8.0 + 1.0);
        assert!((v - exact).abs() < 1e-12);
    }

    #[test]
    fn gk_handles_lorentzian() {
        let eps = 1e-4;
        let r = adaptive_gk(
            |t| Complex64::new(eps / (t * t + eps * eps) / PI, 0.0),
            -1.0,
            1.0,
            &[],
            1e-12,
            0.0,
            2000,
        )
        .unwrap();
        let exact = 2.0 / PI * (1.0 / eps).atan();
        assert!((r.value.re - exact).abs() < 1e-10);
    }

    #[test]
    fn tanh_sinh_endpoint_singularity() {
        let r = tanh_sinh(|t| Complex64::new(1.0 / t.sqrt(), 0.0), 0.0, 1.0, 1e-12, 1e-12, 10).unwrap();
        assert!((r.value.re - 2.0).abs() < 1e-10);
    }

    #[test]
    fn neville_removes_linear_and_quadratic_terms() {
        let hs = [0.1, 0.05, 0.025, 0.0125];
        let vals: Vec<Complex64> = hs
            .iter()
            .map(|h| Complex64::new(3.0 + 2.0 * h - 5.0 * h * h, 0.0))
            .collect();
        let (v, _) = neville_extrapolate(&hs, &vals);
        assert!((v.re - 3.0).abs() < 1e-12);
    }
}
