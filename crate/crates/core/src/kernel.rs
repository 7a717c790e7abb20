//! Sampled Nevanlinna (Pick) kernels and their signature.

use nalgebra::DMatrix;
use num_complex::Complex64;
use serde::Serialize;

use crate::error::Result;

/// First `n` points of the 2-D Halton sequence (bases 2 and 3) mapped into
/// `[x0, x1] × [y0, y1]`.
pub fn halton_points(n: usize, x: (f64, f64), y: (f64, f64)) -> Vec<Complex64> {
    (1..=n)
        .map(|k| {
            let u = radical_inverse(k, 2);
            let v = radical_inverse(k, 3);
            Complex64::new(x.0 + (x.1 - x.0) * u, y.0 + (y.1 - y.0) * v)
        })
        .collect()
}

fn radical_inverse(mut k: usize, base: usize) -> f64 {
    let mut inv = 1.0 / base as f64;
    let mut r = 0.0;
    while k > 0 {
        r += (k % base) as f64 * inv;
        k /= base;
        inv /= base as f64;
    }
    r
}

/// `[(f(z_i) - conj f(z_j)) / (z_i - conj z_j)]`.
pub fn pick_matrix<F>(f: F, points: &[Complex64]) -> Result<DMatrix<Complex64>>
where
    F: Fn(Complex64) -> Result<Complex64>,
{
    let values = points.iter().map(|&z| f(z)).collect::<Result<Vec<_>>>()?;
    let n = points.len();
    Ok(DMatrix::from_fn(n, n, |i, j| {
        (values[i] - values[j].conj()) / (points[i] - points[j].conj())
    }))
}

#[derive(Debug, Clone, Serialize)]
pub struct KernelSignature {
    pub negative: usize,
    pub positive: usize,
    pub near_zero: usize,
    pub min_eigenvalue: f64,
    /// Largest eigenvalue magnitude.
    pub norm: f64,
    pub eigenvalues: Vec<f64>,
}

/// Counts eigenvalues below `-rel·norm`, above `rel·norm`, and in between.
pub fn kernel_signature(matrix: &DMatrix<Complex64>, rel: f64) -> KernelSignature {
    // Symmetrize to remove rounding asymmetry before the Hermitian solver.
    let h = (matrix + matrix.adjoint()) * Complex64::new(0.5, 0.0);
    let mut eigenvalues: Vec<f64> = h.symmetric_eigen().eigenvalues.iter().copied().collect();
    eigenvalues.sort_by(f64::total_cmp);
    let norm = eigenvalues.iter().fold(0.0f64, |m, e| m.max(e.abs()));
    let threshold = rel * norm;
    KernelSignature {
        negative: eigenvalues.iter().filter(|&&e| e < -threshold).count(),
        positive: eigenvalues.iter().filter(|&&e| e > threshold).count(),
        near_zero: eigenvalues.iter().filter(|&&e| e.abs() <= threshold).count(),
        min_eigenvalue: eigenvalues.first().copied().unwrap_or(0.0),
        norm,
        eigenvalues,
    }
}
