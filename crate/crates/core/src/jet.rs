//! Truncated Taylor expansions ("jets") of holomorphic functions.
//!
//! A `Jet<N>` at a base point `z0` stores the first `N` Taylor coefficients
//! `f^(k)(z0) / k!`. Arithmetic on jets is truncated power-series arithmetic,
//! which gives exact derivatives of compositions without finite differences.

use std::ops::{Add, Div, Mul, Neg, Sub};

use num_complex::Complex64;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Jet<const N: usize>(pub [Complex64; N]);

/// Value and first three derivatives; enough for Newton steps and the
/// second/third-order contact models.
pub type Jet4 = Jet<4>;

const ZERO: Complex64 = Complex64::new(0.0, 0.0);

impl<const N: usize> Jet<N> {
    pub fn constant(c: Complex64) -> Self {
        let mut a = [ZERO; N];
        a[0] = c;
        Jet(a)
    }

    /// The identity function `z` expanded at `z0`.
    pub fn variable(z0: Complex64) -> Self {
        let mut a = [ZERO; N];
        a[0] = z0;
        if N > 1 {
            a[1] = Complex64::new(1.0, 0.0);
        }
        Jet(a)
    }

    pub fn from_coeffs(coeffs: [Complex64; N]) -> Self {
        Jet(coeffs)
    }

    pub fn value(&self) -> Complex64 {
        self.0[0]
    }

    /// k-th derivative at the base point.
    pub fn derivative(&self, k: usize) -> Complex64 {
        if k >= N {
            return ZERO;
        }
        let mut fact = 1.0;
        for j in 2..=k {
            fact *= j as f64;
        }
        self.0[k] * fact
    }

    pub fn scale(&self, s: Complex64) -> Self {
        let mut a = self.0;
        for c in a.iter_mut() {
            *c *= s;
        }
        Jet(a)
    }

    pub fn add_constant(&self, c: Complex64) -> Self {
        let mut a = self.0;
        a[0] += c;
        Jet(a)
    }

    pub fn recip(&self) -> Self {
        Jet::constant(Complex64::new(1.0, 0.0)) / *self
    }

    /// Expansion of `1 / (c - z)` at `z0`: coefficients `1/(c - z0)^(k+1)`.
    pub fn pole(c: Complex64, z0: Complex64) -> Self {
        let w = (c - z0).inv();
        let mut a = [ZERO; N];
        let mut p = w;
        for coeff in a.iter_mut() {
            *coeff = p;
            p *= w;
        }
        Jet(a)
    }

    /// Evaluates a real-coefficient polynomial (ascending powers) on the jet.
    pub fn poly(coeffs: &[f64], x: &Self) -> Self {
        let mut acc = Jet::constant(ZERO);
        for &c in coeffs.iter().rev() {
            acc = acc * *x;
            acc.0[0] += c;
        }
        acc
    }

    pub fn is_finite(&self) -> bool {
        self.0.iter().all(|c| c.re.is_finite() && c.im.is_finite())
    }

    /// Reduces to a shorter jet at the same base point.
    pub fn truncate<const M: usize>(&self) -> Jet<M> {
        let mut a = [ZERO; M];
        for (k, c) in a.iter_mut().enumerate().take(N) {
            *c = self.0[k];
        }
        Jet(a)
    }
}

impl<const N: usize> Add for Jet<N> {
    type Output = Self;
    fn add(self, rhs: Self) -> Self {
        let mut a = self.0;
        for (x, y) in a.iter_mut().zip(rhs.0) {
            *x += y;
        }
        Jet(a)
    }
}

impl<const N: usize> Sub for Jet<N> {
    type Output = Self;
    fn sub(self, rhs: Self) -> Self {
        let mut a = self.0;
        for (x, y) in a.iter_mut().zip(rhs.0) {
            *x -= y;
        }
        Jet(a)
    }
}

impl<const N: usize> Neg for Jet<N> {
    type Output = Self;
    fn neg(self) -> Self {
        self.scale(Complex64::new(-1.0, 0.0))
    }
}

impl<const N: usize> Mul for Jet<N> {
    type Output = Self;
    fn mul(self, rhs: Self) -> Self {
        let mut a = [ZERO; N];
        for i in 0..N {
            for j in 0..N - i {
                a[i + j] += self.0[i] * rhs.0[j];
            }
        }
        Jet(a)
    }
}

impl<const N: usize> Div for Jet<N> {
    type Output = Self;
    fn div(self, rhs: Self) -> Self {
        let inv0 = rhs.0[0].inv();
        let mut q = [ZERO; N];
        for k in 0..N {
            let mut s = self.0[k];
            for j in 1..=k {
                s -= rhs.0[j] * q[k - j];
            }
            q[k] = s * inv0;
        }
        Jet(q)
    }
}
