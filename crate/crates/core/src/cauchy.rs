//! Cauchy (Stieltjes) transforms `∫ φ(t) / (t - z) dt` of polynomial densities
//! on a compact interval, together with their continuation across the interval.
//!
//! Branch convention: `I_0(z) = Log((hi - z)/(lo - z))` with the principal
//! logarithm. The continuation from the upper half-plane through `(lo, hi)`
//! takes the boundary value `ln((hi - x)/(x - lo)) + iπ` on the interval and
//! adds `2πi` to the principal logarithm below it. Because the density is the
//! coefficient of `I_0`, the lower sheet differs from the reflected transform
//! by exactly `2πi·φ(z)`.

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::jet::Jet;
use crate::measures::taylor_shift;
use crate::quad::{tanh_sinh, QuadResult};

const FAR_FIELD_RATIO: f64 = 3.0;
const FAR_FIELD_TERMS: usize = 56;

/// Which branch of the logarithm a point is evaluated on.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Sheet {
    /// Principal branch; the symmetric (reflected) transform.
    Principal,
    /// On the open interval: Plemelj boundary value from above.
    Boundary,
    /// Below the open interval, continued from above.
    Lower,
}

/// A polynomial density piece prepared for repeated transform evaluation.
#[derive(Debug, Clone)]
pub struct CauchyPiece {
    pub lo: f64,
    pub hi: f64,
    mid: f64,
    half: f64,
    coeffs: Vec<f64>,
    /// Coefficients in powers of `(t - mid)`.
    centered: Vec<f64>,
    /// `∫ φ(t) (t - mid)^k dt`.
    moments: Vec<f64>,
}

impl CauchyPiece {
    pub fn new(lo: f64, hi: f64, coeffs: &[f64]) -> Self {
        let mid = 0.5 * (lo + hi);
        let half = 0.5 * (hi - lo);
        let centered = taylor_shift(coeffs, mid);
        let moments = (0..FAR_FIELD_TERMS)
            .map(|k| {
                centered
                    .iter()
                    .enumerate()
                    .filter(|(j, _)| (j + k) % 2 == 0)
                    .map(|(j, d)| d * 2.0 * half.powi((j + k + 1) as i32) / (j + k + 1) as f64)
                    .sum()
            })
            .collect();
        CauchyPiece {
            lo,
            hi,
            mid,
            half,
            coeffs: coeffs.to_vec(),
            centered,
            moments,
        }
    }

    pub fn density(&self, z: Complex64) -> Complex64 {
        self.coeffs
            .iter()
            .rev()
            .fold(Complex64::new(0.0, 0.0), |acc, &c| acc * z + c)
    }

    /// The sheet used by the continuation from the upper half-plane.
    pub fn continued_sheet(&self, z: Complex64) -> Result<Sheet> {
        if z.im > 0.0 {
            return Ok(Sheet::Principal);
        }
        let inside = self.lo < z.re && z.re < self.hi;
        if z.im == 0.0 {
            if inside {
                Ok(Sheet::Boundary)
            } else if z.re == self.lo || z.re == self.hi {
                Err(Error::domain(z, "endpoint of a density piece"))
            } else {
                Ok(Sheet::Principal)
            }
        } else if inside {
            Ok(Sheet::Lower)
        } else if z.re == self.lo || z.re == self.hi {
            Err(Error::domain(z, "below an endpoint of a density piece"))
        } else {
            // Below the real axis but outside the interval: the continuation
            // from above is not defined there (the vertical lines under the
            // endpoints are cuts).
            Err(Error::domain(z, "outside the continuation window"))
        }
    }

    /// Symmetric transform; requires `z` off the closed interval.
    pub fn jet<const N: usize>(&self, z: Complex64) -> Result<Jet<N>> {
        if z.im == 0.0 && self.lo <= z.re && z.re <= self.hi {
            return Err(Error::domain(z, "on the support of the density"));
        }
        Ok(self.jet_on_sheet(z, Sheet::Principal))
    }

    /// Transform continued from the upper half-plane across `(lo, hi)`.
    pub fn continued_jet<const N: usize>(&self, z: Complex64) -> Result<Jet<N>> {
        let sheet = self.continued_sheet(z)?;
        Ok(self.jet_on_sheet(z, sheet))
    }

    pub fn jet_on_sheet<const N: usize>(&self, z: Complex64, sheet: Sheet) -> Jet<N> {
        let u0 = z - self.mid;
        if u0.norm() > FAR_FIELD_RATIO * self.half {
            let mut value = self.far_field::<N>(u0);
            if sheet == Sheet::Lower {
                let x = Jet::<N>::variable(z);
                value = value + Jet::poly(&self.coeffs, &x).scale(Complex64::new(0.0, 2.0 * PI));
            }
            return value;
        }
        let log = self.log_jet::<N>(u0, sheet);
        let u = Jet::<N>::variable(u0);
        // I_0 = L, I_n = u I_{n-1} + (h^n - (-h)^n)/n
        let mut i_n = log;
        let mut acc = i_n.scale(Complex64::new(self.centered[0], 0.0));
        for (n, &d) in self.centered.iter().enumerate().skip(1) {
            let boundary = if n % 2 == 1 {
                2.0 * self.half.powi(n as i32) / n as f64
            } else {
                0.0
            };
            i_n = (u * i_n).add_constant(Complex64::new(boundary, 0.0));
            acc = acc + i_n.scale(Complex64::new(d, 0.0));
        }
        acc
    }

    fn log_jet<const N: usize>(&self, u0: Complex64, sheet: Sheet) -> Jet<N> {
        let h = self.half;
        let mut coeffs = [Complex64::new(0.0, 0.0); N];
        coeffs[0] = match sheet {
            Sheet::Principal => ((h - u0) / (-h - u0)).ln(),
            Sheet::Boundary => {
                let x = u0.re;
                Complex64::new(((h - x) / (x + h)).ln(), PI)
            }
            Sheet::Lower => ((h - u0) / (-h - u0)).ln() + Complex64::new(0.0, 2.0 * PI),
        };
        let a = (u0 - h).inv();
        let b = (u0 + h).inv();
        let (mut pa, mut pb) = (a, b);
        for (k, c) in coeffs.iter_mut().enumerate().skip(1) {
            let sign = if k % 2 == 1 { 1.0 } else { -1.0 };
            *c = (pa - pb) * (sign / k as f64);
            pa *= a;
            pb *= b;
        }
        Jet(coeffs)
    }

    fn far_field<const N: usize>(&self, u0: Complex64) -> Jet<N> {
        let w = Jet::<N>::variable(u0).recip();
        let ratio = self.half / u0.norm();
        let terms = if ratio == 0.0 {
            1
        } else {
            // Enough terms for ~1e-18 relative accuracy, plus slack for derivatives.
            ((-41.0 / ratio.ln()).ceil() as usize + 8).clamp(1, FAR_FIELD_TERMS)
        };
        let mut acc = Jet::<N>::constant(Complex64::new(0.0, 0.0));
        for k in (0..terms).rev() {
            acc = (acc * w).add_constant(Complex64::new(self.moments[k], 0.0));
        }
        -(acc * w)
    }

    /// Exact `∫ φ(t) dt` over the piece.
    pub fn total_mass(&self) -> f64 {
        self.moments[0]
    }

    pub fn centered_coeffs(&self) -> &[f64] {
        &self.centered
    }
}

/// `∫_{lo}^{hi} p(t) / (t - z) dt` for `z` off the closed interval.
pub fn cauchy_poly(lo: f64, hi: f64, coeffs: &[f64], z: Complex64) -> Result<Complex64> {
    Ok(CauchyPiece::new(lo, hi, coeffs).jet::<1>(z)?.value())
}

/// The transform continued from the upper half-plane into the window
/// `{lo < Re z < hi} ∪ ℂ⁺`.
pub fn cauchy_extended(lo: f64, hi: f64, coeffs: &[f64], z: Complex64) -> Result<Complex64> {
    Ok(CauchyPiece::new(lo, hi, coeffs).continued_jet::<1>(z)?.value())
}

/// The logarithm `Log((hi - z)/(lo - z))` continued from the upper half-plane
/// across `(lo, hi)`.
pub fn branched_log(lo: f64, hi: f64, z: Complex64) -> Result<Complex64> {
    cauchy_extended(lo, hi, &[1.0], z)
}

/// Adaptive quadrature of `∫ φ(t)/(t - z) dt`; an oracle independent of the
/// closed form. The interval is split at `Re z` so that a near-singularity
/// always sits at an endpoint of a tanh–sinh rule.
pub fn cauchy_quad<F: Fn(f64) -> f64>(density: F, lo: f64, hi: f64, z: Complex64) -> Result<QuadResult> {
    if z.im == 0.0 && lo <= z.re && z.re <= hi {
        return Err(Error::domain(z, "on the integration interval"));
    }
    let integrand = |t: f64| Complex64::new(density(t), 0.0) / (t - z);
    let run = |a: f64, b: f64| tanh_sinh(integrand, a, b, 1e-13, 1e-13, 14);
    let result = if lo < z.re && z.re < hi {
        let left = run(lo, z.re)?;
        let right = run(z.re, hi)?;
        QuadResult {
            value: left.value + right.value,
            error: left.error + right.error,
            evaluations: left.evaluations + right.evaluations,
        }
    } else {
        run(lo, hi)?
    };
    if result.error > 1e-10 * (1.0 + result.value.norm()) {
        return Err(Error::NoConvergence {
            what: "Cauchy quadrature",
            detail: format!("error estimate {:e}", result.error),
        });
    }
    Ok(result)
}

/// Regularized full-line transform of the constant density `c`:
/// `c ∫ (1/(t-z) - t/(t²+1)) dt = iπc·sign(Im z)`.
pub fn fullline_constant(z: Complex64, c: f64) -> Result<Complex64> {
    if z.im == 0.0 {
        return Err(Error::domain(z, "on the real axis"));
    }
    Ok(Complex64::new(0.0, PI * c * z.im.signum()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn closed_form_examples() {
        let v = cauchy_poly(-1.0, 1.0, &[1.0], c(0.0, 1.0)).unwrap();
        assert!((v - c(0.0, PI / 2.0)).norm() < 1e-15);

        let v = cauchy_poly(-1.0, 1.0, &[1.0], c(2.0, 0.0)).unwrap();
        assert!((v - c((1.0f64 / 3.0).ln(), 0.0)).norm() < 1e-15);

        let v = cauchy_poly(-1.0, 1.0, &[0.0, 1.0], c(0.0, 1.0)).unwrap();
        assert!((v - c(2.0 - PI / 2.0, 0.0)).norm() < 1e-15);

        assert!(cauchy_poly(-1.0, 1.0, &[1.0], c(0.3, 0.0)).is_err());
        assert!(cauchy_poly(-1.0, 1.0, &[1.0], c(1.0, 0.0)).is_err());
    }

    #[test]
    fn extended_examples() {
        let v = cauchy_extended(-1.0, 1.0, &[1.0], c(0.0, 0.0)).unwrap();
        assert!((v - c(0.0, PI)).norm() < 1e-15);

        // I_0(0.5i) = 2i·atan(2)
        let upper = cauchy_extended(-1.0, 1.0, &[1.0], c(0.0, 0.5)).unwrap();
        assert!((upper - c(0.0, 2.0 * 2f64.atan())).norm() < 1e-14);
        assert!((upper.im - 2.2143).abs() < 1e-4);

        let lower = cauchy_extended(-1.0, 1.0, &[1.0], c(0.0, -0.5)).unwrap();
        assert!((lower - (upper.conj() + c(0.0, 2.0 * PI))).norm() < 1e-14);
        assert!((lower.im - 4.0689).abs() < 1e-4);

        assert!(cauchy_extended(-1.0, 1.0, &[1.0], c(2.0, -0.5)).is_err());
        assert!(cauchy_extended(-1.0, 1.0, &[1.0], c(-1.0, 0.0)).is_err());
    }

    #[test]
    fn quadrature_oracle_examples() {
        let q = cauchy_quad(|_| 1.0, -1.0, 1.0, c(0.0, 1.0)).unwrap();
        assert!((q.value - c(0.0, PI / 2.0)).norm() < 1e-9);

        let z = c(0.0, 2.0);
        let q = cauchy_quad(|t| t * t, -1.0, 1.0, z).unwrap();
        let exact = cauchy_poly(-1.0, 1.0, &[0.0, 0.0, 1.0], z).unwrap();
        assert!((q.value - exact).norm() < 1e-9);

        let z = c(0.001, 1e-6);
        let q = cauchy_quad(|_| 1.0, -1.0, 1.0, z).unwrap();
        let exact = cauchy_poly(-1.0, 1.0, &[1.0], z).unwrap();
        assert!(q.value.norm().is_finite());
        assert!((q.value - exact).norm() < 1e-6);
    }

    #[test]
    fn fullline_examples() {
        assert!((fullline_constant(c(0.0, 1.0), 1.0 / PI).unwrap() - c(0.0, 1.0)).norm() < 1e-15);
        assert!((fullline_constant(c(0.0, -1.0), 1.0 / PI).unwrap() - c(0.0, -1.0)).norm() < 1e-15);
        assert!((fullline_constant(c(5.0, 2.0), 1.0 / PI).unwrap() - c(0.0, 1.0)).norm() < 1e-15);
        assert!(fullline_constant(c(1.0, 0.0), 1.0).is_err());
    }

    #[test]
    fn fullline_matches_truncated_quadrature() {
        // Truncate to [-L, L] and add the analytic tail of the regularized kernel.
        let z = c(5.0, 2.0);
        let cst = 1.0 / PI;
        let l = 1000.0;
        let body = crate::quad::adaptive_gk(
            |t| (1.0 / (t - z) - t / (t * t + 1.0)) * cst,
            -l,
            l,
            &[5.0],
            1e-12,
            1e-12,
            4000,
        )
        .unwrap()
        .value;
        // Tail ∫_{|t|>L} (1/(t-z) - t/(t²+1)) dt = Log((-L-z)/(L-z)) - (-iπ) ... evaluated in closed form.
        let tail = (((l - z) / (-l - z)).ln() - c(0.0, PI)) * -cst;
        let total = body + tail;
        assert!((total - c(0.0, 1.0)).norm() < 1e-8, "{total}");
    }

    #[test]
    fn far_field_agrees_with_recurrence() {
        let piece = CauchyPiece::new(-1.0, 2.0, &[0.5, -0.3, 0.2, 0.1, 0.05]);
        for z in [c(4.9, 0.1), c(-3.6, 1.3), c(0.5, -4.6)] {
            let far = piece.jet_on_sheet::<4>(z, Sheet::Principal);
            let near = {
                // Force the recurrence by evaluating on a piece with the
                // far-field switch out of reach.
                let u0 = z - piece.mid;
                let log = piece.log_jet::<4>(u0, Sheet::Principal);
                let u = Jet::<4>::variable(u0);
                let mut i_n = log;
                let mut acc = i_n.scale(c(piece.centered[0], 0.0));
                for (n, &d) in piece.centered.iter().enumerate().skip(1) {
                    let b = if n % 2 == 1 {
                        2.0 * piece.half.powi(n as i32) / n as f64
                    } else {
                        0.0
                    };
                    i_n = (u * i_n).add_constant(c(b, 0.0));
                    acc = acc + i_n.scale(c(d, 0.0));
                }
                acc
            };
            for k in 0..4 {
                assert!((far.0[k] - near.0[k]).norm() < 1e-11 * (1.0 + near.0[k].norm()));
            }
        }
    }

    #[test]
    fn derivatives_match_differentiated_integral() {
        // d/dz ∫ φ/(t-z) = ∫ φ/(t-z)^2
        let piece = CauchyPiece::new(-1.0, 1.0, &[1.0, 0.0, 1.0]);
        let z = c(0.3, 0.7);
        let jet = piece.jet::<3>(z).unwrap();
        let d1 = crate::quad::adaptive_gk(
            |t| c(1.0 + t * t, 0.0) / ((t - z) * (t - z)),
            -1.0,
            1.0,
            &[],
            1e-13,
            1e-13,
            500,
        )
        .unwrap()
        .value;
        assert!((jet.derivative(1) - d1).norm() < 1e-10);
    }

    proptest! {
        #[test]
        fn jump_identity(x in -0.99f64..0.99, y in 0.001f64..3.0, a in 0.1f64..2.0, b in -1.0f64..1.0) {
            let coeffs = [a, b, 0.3];
            let z = c(x, -y);
            let lower = cauchy_extended(-1.0, 1.0, &coeffs, z).unwrap();
            let reflected = cauchy_extended(-1.0, 1.0, &coeffs, z.conj()).unwrap().conj();
            let phi = CauchyPiece::new(-1.0, 1.0, &coeffs).density(z);
            let jump = phi * c(0.0, 2.0 * PI);
            prop_assert!((lower - reflected - jump).norm() <= 1e-10 * (1.0 + lower.norm()));
        }

        #[test]
        fn continuity_across_axis(x in -0.95f64..0.95) {
            let coeffs = [1.0, 0.0, 1.0];
            let d = 1e-6;
            let above = cauchy_extended(-1.0, 1.0, &coeffs, c(x, d)).unwrap();
            let below = cauchy_extended(-1.0, 1.0, &coeffs, c(x, -d)).unwrap();
            prop_assert!((above - below).norm() <= 1e-4 * (1.0 + above.norm()));
        }

        #[test]
        fn herglotz_sign(x in -4.0f64..4.0, y in 1e-3f64..4.0, a in 0.0f64..2.0, b in 0.01f64..2.0) {
            // φ = a + b t² ≥ 0 and not identically zero.
            let v = cauchy_poly(-1.0, 1.0, &[a, 0.0, b], c(x, y)).unwrap();
            prop_assert!(v.im > 0.0);
        }
    }

    #[test]
    fn oracle_equivalence_grid() {
        // 100 points at distance >= 1e-2 from [-1, 1].
        let coeffs = [0.2, -0.1, 1.0, 0.0, 0.5];
        let density = |t: f64| 0.2 - 0.1 * t + t * t + 0.5 * t.powi(4);
        let mut count = 0;
        for i in 0..10 {
            for j in 0..10 {
                let x = -2.0 + 4.0 * i as f64 / 9.0;
                let y = if j < 5 {
                    0.01 * 4f64.powi(j)
                } else {
                    -0.01 * 4f64.powi(j - 5)
                };
                let z = c(x, y);
                let exact = cauchy_poly(-1.0, 1.0, &coeffs, z).unwrap();
                let q = cauchy_quad(density, -1.0, 1.0, z).unwrap().value;
                assert!((exact - q).norm() < 1e-9, "z={z} exact={exact} quad={q}");
                count += 1;
            }
        }
        assert_eq!(count, 100);
    }
}
