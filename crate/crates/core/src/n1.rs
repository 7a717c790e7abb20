//! Functions of class N₁ written as `Q = R·M` with `M` Nevanlinna and `R` one
//! of the three rational factors below; their continuation across the real
//! axis and the local behaviour at a real generalized zero.

use std::f64::consts::PI;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::jet::Jet;
use crate::nevanlinna::{ExtensionWindow, NevanlinnaFunction};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum FactorKind {
    /// `(z-α)(z-ᾱ) / ((z-β)(z-β̄))`
    ZeroPole,
    /// `(z-α)(z-ᾱ)`, pole at infinity.
    ZeroOnly,
    /// `1 / ((z-β)(z-β̄))`, zero at infinity.
    PoleOnly,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FactorR {
    kind: FactorKind,
    alpha: Option<Complex64>,
    beta: Option<Complex64>,
}

fn check_closed_upper(p: Complex64, name: &str) -> Result<()> {
    if !p.re.is_finite() || !p.im.is_finite() || p.im < 0.0 {
        return Err(Error::InvalidFunction(format!(
            "{name} = {p} must lie in the closed upper half-plane"
        )));
    }
    Ok(())
}

impl FactorR {
    pub fn zero_pole(alpha: Complex64, beta: Complex64) -> Result<Self> {
        check_closed_upper(alpha, "alpha")?;
        check_closed_upper(beta, "beta")?;
        if alpha == beta {
            return Err(Error::InvalidFunction("alpha and beta coincide".into()));
        }
        Ok(FactorR {
            kind: FactorKind::ZeroPole,
            alpha: Some(alpha),
            beta: Some(beta),
        })
    }

    pub fn zero_only(alpha: Complex64) -> Result<Self> {
        check_closed_upper(alpha, "alpha")?;
        Ok(FactorR {
            kind: FactorKind::ZeroOnly,
            alpha: Some(alpha),
            beta: None,
        })
    }

    pub fn pole_only(beta: Complex64) -> Result<Self> {
        check_closed_upper(beta, "beta")?;
        Ok(FactorR {
            kind: FactorKind::PoleOnly,
            alpha: None,
            beta: Some(beta),
        })
    }

    pub fn kind(&self) -> FactorKind {
        self.kind
    }

    /// `None` stands for the point at infinity.
    pub fn alpha(&self) -> Option<Complex64> {
        self.alpha
    }

    pub fn beta(&self) -> Option<Complex64> {
        self.beta
    }

    pub fn numerator_jet<const N: usize>(&self, z: Complex64) -> Jet<N> {
        match self.alpha {
            Some(a) => {
                let x = Jet::<N>::variable(z);
                x.add_constant(-a) * x.add_constant(-a.conj())
            }
            None => Jet::constant(Complex64::new(1.0, 0.0)),
        }
    }

    pub fn denominator_jet<const N: usize>(&self, z: Complex64) -> Jet<N> {
        match self.beta {
            Some(b) => {
                let x = Jet::<N>::variable(z);
                x.add_constant(-b) * x.add_constant(-b.conj())
            }
            None => Jet::constant(Complex64::new(1.0, 0.0)),
        }
    }

    pub fn eval(&self, z: Complex64) -> Result<Complex64> {
        let den = self.denominator_jet::<1>(z).value();
        if den == Complex64::new(0.0, 0.0) {
            return Err(Error::pole(z));
        }
        Ok(self.numerator_jet::<1>(z).value() / den)
    }
}

#[derive(Debug, Clone)]
pub struct N1Function {
    factor: FactorR,
    base: NevanlinnaFunction,
    window: Option<ExtensionWindow>,
    /// Mass of the base measure at a real `α` and the base without it.
    split: Option<(f64, NevanlinnaFunction)>,
}

/// Derivatives `Q̃^(k)(z0)`, `k = 0..=k_max`, from Cauchy circle integrals.
#[derive(Debug, Clone, Serialize)]
pub struct DerivativeEstimate {
    pub values: Vec<Complex64>,
    pub errors: Vec<f64>,
    pub radius: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum LocalCase {
    Case1,
    Case2,
    Case3,
}

impl LocalCase {
    pub fn number(self) -> u8 {
        match self {
            LocalCase::Case1 => 1,
            LocalCase::Case2 => 2,
            LocalCase::Case3 => 3,
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct CaseReport {
    pub z0: f64,
    pub case: LocalCase,
    /// `arg Q''(z0)` in `[0, π]`, present for the second case only.
    pub theta0: Option<f64>,
    /// Set when `θ₀` sits numerically at 0 or π.
    pub theta0_boundary: bool,
    /// `Q'`, `Q''`, `Q'''` at `z0`.
    pub derivatives: [Complex64; 3],
    pub errors: [f64; 3],
    pub tol: f64,
}

const CIRCLE_NODES: usize = 256;

impl N1Function {
    pub fn new(factor: FactorR, base: NevanlinnaFunction, window: Option<ExtensionWindow>) -> Result<Self> {
        let real_alpha = factor.alpha.filter(|a| a.im == 0.0).map(|a| a.re);
        if let Some(w) = window {
            let checked = ExtensionWindow::new(base.measure(), w.lo, w.hi, real_alpha)?;
            if let Some(b) = factor.beta {
                if b.im == 0.0 && checked.lo < b.re && b.re < checked.hi {
                    return Err(Error::Precondition(format!(
                        "the pole {} lies in the extension window",
                        b.re
                    )));
                }
            }
        }
        let split = real_alpha.map(|a| base.split_atom(a));
        Ok(N1Function {
            factor,
            base,
            window,
            split,
        })
    }

    pub fn factor(&self) -> &FactorR {
        &self.factor
    }

    pub fn base(&self) -> &NevanlinnaFunction {
        &self.base
    }

    pub fn window(&self) -> Option<ExtensionWindow> {
        self.window
    }

    /// The generalized zero of nonpositive type of `Q` (`None` = ∞).
    pub fn gznt(&self) -> Option<Complex64> {
        self.factor.alpha
    }

    /// The generalized pole of nonpositive type of `Q` (`None` = ∞).
    pub fn gpnt(&self) -> Option<Complex64> {
        self.factor.beta
    }

    fn designated_atom(&self) -> Option<f64> {
        self.factor.alpha.filter(|a| a.im == 0.0).map(|a| a.re)
    }

    /// `R(z) M(z)` off the real axis (symmetric path below it).
    pub fn eval(&self, z: Complex64) -> Result<Complex64> {
        let r = self.factor.eval(z)?;
        Ok(r * self.base.eval(z)?)
    }

    /// The window used to continue to `z`: the stored one when it covers `z`,
    /// otherwise the largest admissible window above `z`.
    pub fn window_for(&self, z: Complex64) -> Result<ExtensionWindow> {
        if z.im > 0.0 {
            return Ok(ExtensionWindow::whole_line());
        }
        if let Some(w) = self.window {
            if w.lo < z.re && z.re < w.hi {
                return Ok(w);
            }
        }
        ExtensionWindow::around(self.base.measure(), z.re, self.designated_atom())
    }

    fn base_part<const N: usize>(&self, z: Complex64) -> Result<Jet<N>> {
        let w = self.window_for(z)?;
        match (&self.split, self.factor.alpha) {
            (Some((m0, rest)), Some(a)) if *m0 > 0.0 => {
                // (z-α)² m0/(α-z) = -m0 (z-α), with the atom removed from M.
                let x = Jet::<N>::variable(z);
                let lin = x.add_constant(-a);
                let m1 = rest.jet_extended::<N>(&w, z)?;
                Ok(lin * lin * m1 - lin.scale(Complex64::new(*m0, 0.0)))
            }
            _ => {
                let m = self.base.jet_extended::<N>(&w, z)?;
                Ok(self.factor.numerator_jet::<N>(z) * m)
            }
        }
    }

    /// Numerator and denominator of `Q̃ = num/den` with `den` the pole factor.
    pub fn parts_jet<const N: usize>(&self, z: Complex64) -> Result<(Jet<N>, Jet<N>)> {
        Ok((self.base_part::<N>(z)?, self.factor.denominator_jet::<N>(z)))
    }

    /// Continuation `Q̃` of `Q` to `ℂ⁺ ∪ window ∪ ℝ` (minus cuts and β).
    pub fn jet_extended<const N: usize>(&self, z: Complex64) -> Result<Jet<N>> {
        let den = self.factor.denominator_jet::<N>(z);
        if den.value() == Complex64::new(0.0, 0.0) {
            let beta = self.factor.beta.unwrap_or_default();
            if z == beta || z.im >= 0.0 {
                return Err(Error::pole(z));
            }
            return self.removable_jet::<N>(z);
        }
        let num = self.base_part::<N>(z)?;
        Ok(num / den)
    }

    pub fn eval_extended(&self, z: Complex64) -> Result<Complex64> {
        Ok(self.jet_extended::<1>(z)?.value())
    }

    /// `-1/Q̃` computed as `-den/num`, finite at β.
    pub fn neg_recip_jet<const N: usize>(&self, z: Complex64) -> Result<Jet<N>> {
        let (num, den) = self.parts_jet::<N>(z)?;
        if num.value() == Complex64::new(0.0, 0.0) {
            return Err(Error::ZeroDenominator { re: z.re, im: z.im });
        }
        Ok(-(den / num))
    }

    /// `Q̃` at `β̄` where the pole factor vanishes: finite only when `M̃`
    /// cancels it, and then recovered from a circle average.
    fn removable_jet<const N: usize>(&self, z: Complex64) -> Result<Jet<N>> {
        let num = self.base_part::<1>(z)?.value();
        let scale = 1.0 + self.base_part::<1>(z + 1e-3)?.value().norm();
        if num.norm() > 1e-10 * scale {
            return Err(Error::pole(z));
        }
        let r = 1e-2 * (1.0 + z.norm());
        let coeffs = circle_coefficients(|w| self.eval_extended(w), z, r, 64, N)?;
        let mut a = [Complex64::new(0.0, 0.0); N];
        a.copy_from_slice(&coeffs[..N]);
        Ok(Jet(a))
    }

    /// `(m0, M1)` with `M = M1 + m0/(α - z)`.
    pub fn split_point_mass(&self, alpha: f64) -> (f64, NevanlinnaFunction) {
        self.base.split_atom(alpha)
    }

    /// Largest circle radius about a real `z0` used for derivatives:
    /// `min(0.1, half the distance to window ends, other atoms and β)`.
    pub fn default_radius(&self, z0: f64) -> Result<f64> {
        let w = ExtensionWindow::around(self.base.measure(), z0, self.designated_atom())?;
        let mut d = (z0 - w.lo).min(w.hi - z0);
        if let Some(b) = self.factor.beta {
            d = d.min((Complex64::new(z0, 0.0) - b).norm());
        }
        Ok(0.1f64.min(0.5 * d))
    }

    pub fn derivatives_at(&self, z0: f64, k_max: usize, radius: Option<f64>) -> Result<DerivativeEstimate> {
        let k_max = k_max.min(4);
        let limit = self.default_radius(z0)?;
        let r = match radius {
            Some(r) if r > 0.0 && r <= 2.0 * limit => r,
            Some(r) => {
                return Err(Error::domain(
                    Complex64::new(z0, r),
                    "derivative circle leaves the analyticity region",
                ))
            }
            None => limit,
        };
        let center = Complex64::new(z0, 0.0);
        let fine = circle_coefficients(|w| self.eval_extended(w), center, r, CIRCLE_NODES, k_max + 1)?;
        let coarse = circle_coefficients(|w| self.eval_extended(w), center, r, CIRCLE_NODES / 2, k_max + 1)?;
        let mut values = Vec::with_capacity(k_max + 1);
        let mut errors = Vec::with_capacity(k_max + 1);
        let mut fact = 1.0;
        for k in 0..=k_max {
            if k > 1 {
                fact *= k as f64;
            }
            values.push(fine[k] * fact);
            let roundoff = 1e-15 * fact / r.powi(k as i32) * fine[0].norm().max(1.0);
            errors.push(((fine[k] - coarse[k]).norm() * fact).max(roundoff));
        }
        Ok(DerivativeEstimate {
            values,
            errors,
            radius: r,
        })
    }

    /// Case analysis at a real generalized zero `z0` of `Q`.
    pub fn local_case(&self, z0: f64) -> Result<CaseReport> {
        self.local_case_at_level(z0, 0.0)
    }

    /// Case analysis at `z0` for `Q_τ` where `Q̃(z0) = τ`. The derivatives of
    /// `Q_τ` at such a point are those of `Q̃` divided by `1 + τ²`.
    pub fn local_case_at_level(&self, z0: f64, tau: f64) -> Result<CaseReport> {
        let d = self.derivatives_at(z0, 3, None)?;
        let scale = 1.0 / (1.0 + tau * tau);
        let err_max = d.errors.iter().cloned().fold(0.0, f64::max) * scale;
        let tol = 1e-8f64.max(1e3 * err_max);
        let residual = (d.values[0] - tau).norm() * scale;
        if residual > tol {
            return Err(Error::NotAZero { z0, residual, tol });
        }
        let q1 = d.values[1] * scale;
        let q2 = d.values[2] * scale;
        let q3 = d.values[3] * scale;
        let derivatives = [q1, q2, q3];
        let errors = [d.errors[1] * scale, d.errors[2] * scale, d.errors[3] * scale];
        let report = |case, theta0, boundary| CaseReport {
            z0,
            case,
            theta0,
            theta0_boundary: boundary,
            derivatives,
            errors,
            tol,
        };
        match magnitude_class(q1.norm(), tol) {
            Magnitude::Dead => Err(Error::Unclassifiable(format!(
                "|Q'({z0})| = {:e} is inside the tolerance band around {tol:e}",
                q1.norm()
            ))),
            Magnitude::Nonzero => {
                if q1.re < 0.0 && q1.im.abs() <= tol {
                    Ok(report(LocalCase::Case1, None, false))
                } else {
                    Err(Error::Unclassifiable(format!(
                        "Q'({z0}) = {q1} is not a negative real number"
                    )))
                }
            }
            Magnitude::Zero => match magnitude_class(q2.norm(), tol) {
                Magnitude::Dead => Err(Error::Unclassifiable(format!(
                    "|Q''({z0})| = {:e} is inside the tolerance band around {tol:e}",
                    q2.norm()
                ))),
                Magnitude::Nonzero => {
                    if q2.im < -tol {
                        return Err(Error::Unclassifiable(format!("Im Q''({z0}) = {:e} is negative", q2.im)));
                    }
                    let boundary = q2.im.abs() <= tol;
                    let theta = if q2.im >= 0.0 {
                        q2.arg()
                    } else if q2.re > 0.0 {
                        0.0
                    } else {
                        PI
                    };
                    Ok(report(LocalCase::Case2, Some(theta), boundary))
                }
                Magnitude::Zero => {
                    if q3.re > tol && q3.im.abs() <= tol {
                        Ok(report(LocalCase::Case3, None, false))
                    } else {
                        Err(Error::Unclassifiable(format!(
                            "Q'''({z0}) = {q3} is not a positive real number"
                        )))
                    }
                }
            },
        }
    }
}

enum Magnitude {
    Zero,
    Dead,
    Nonzero,
}

fn magnitude_class(v: f64, tol: f64) -> Magnitude {
    if v < 0.1 * tol {
        Magnitude::Zero
    } else if v > tol {
        Magnitude::Nonzero
    } else {
        Magnitude::Dead
    }
}

/// Taylor coefficients `f^(k)(c)/k!`, `k < count`, by the trapezoidal rule on
/// the circle `|z - c| = r` with `n` nodes.
pub fn circle_coefficients<F>(f: F, c: Complex64, r: f64, n: usize, count: usize) -> Result<Vec<Complex64>>
where
    F: Fn(Complex64) -> Result<Complex64>,
{
    let samples = (0..n)
        .map(|j| {
            let e = Complex64::from_polar(1.0, 2.0 * PI * j as f64 / n as f64);
            f(c + e * r)
        })
        .collect::<Result<Vec<_>>>()?;
    Ok((0..count)
        .map(|k| {
            let sum: Complex64 = samples
                .iter()
                .enumerate()
                .map(|(j, s)| s * Complex64::from_polar(1.0, -2.0 * PI * ((j * k) % n) as f64 / n as f64))
                .sum();
            sum / (n as f64 * r.powi(k as i32))
        })
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::measures::{Atom, PolynomialDensityPiece, SpectralMeasure};

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn a_simple() -> N1Function {
        let m = NevanlinnaFunction::new(
            0.0,
            0.0,
            1.0,
            SpectralMeasure::new(vec![], vec![Atom { at: 0.0, mass: 1.0 }]),
        )
        .unwrap();
        N1Function::new(FactorR::zero_pole(c(0.0, 0.0), c(0.0, 1.0)).unwrap(), m, None).unwrap()
    }

    fn zero_only(coeffs: Vec<f64>, a_eff: f64) -> N1Function {
        let m = NevanlinnaFunction::new(
            a_eff,
            0.0,
            0.0,
            SpectralMeasure::new(vec![PolynomialDensityPiece::new(-1.0, 1.0, coeffs)], vec![]),
        )
        .unwrap();
        N1Function::new(FactorR::zero_only(c(0.0, 0.0)).unwrap(), m, None).unwrap()
    }

    fn b_theta(theta: f64) -> N1Function {
        let m = NevanlinnaFunction::new(theta.cos(), 0.0, theta.sin(), SpectralMeasure::empty()).unwrap();
        N1Function::new(FactorR::zero_only(c(0.0, 0.0)).unwrap(), m, None).unwrap()
    }

    #[test]
    fn eval_examples() {
        let q = a_simple();
        let z = c(0.0, 2.0);
        let closed = c(0.0, 1.0) * z / (z - c(0.0, 1.0));
        assert!((q.eval(z).unwrap() - closed).norm() < 1e-15);
        assert!(matches!(q.eval(c(0.0, 1.0)), Err(Error::PoleHit { .. })));

        let b = zero_only(vec![1.0], 0.0);
        assert!((b.eval(c(0.0, 1.0)).unwrap() - c(0.0, -PI / 2.0)).norm() < 1e-14);
    }

    #[test]
    fn extended_agrees_above_axis() {
        let q = zero_only(vec![1.0], 0.0);
        for z in [c(0.3, 0.2), c(-2.0, 1.0), c(0.0, 1e-3)] {
            let diff = (q.eval_extended(z).unwrap() - q.eval(z).unwrap()).norm();
            assert!(diff < 1e-13 * (1.0 + q.eval(z).unwrap().norm()));
        }
        let qa = a_simple();
        for z in [c(0.3, 0.2), c(-2.0, 1.0), c(1e-7, 1e-7)] {
            let closed = c(0.0, 1.0) * z / (z - c(0.0, 1.0));
            assert!((qa.eval_extended(z).unwrap() - closed).norm() < 1e-13);
        }
    }

    #[test]
    fn a_simple_extension_is_rational() {
        let q = a_simple();
        for z in [c(0.5, -0.5), c(-1.5, -2.0), c(0.0, 0.0), c(2.0, 0.0)] {
            let closed = c(0.0, 1.0) * z / (z - c(0.0, 1.0));
            assert!((q.eval_extended(z).unwrap() - closed).norm() < 1e-13);
        }
        // removable point at β̄ = -i
        let v = q.eval_extended(c(0.0, -1.0)).unwrap();
        assert!((v - c(0.0, 0.5)).norm() < 1e-10);
        assert!(matches!(q.eval_extended(c(0.0, 1.0)), Err(Error::PoleHit { .. })));
    }

    #[test]
    fn b_log_continuity_across_axis() {
        let q = zero_only(vec![1.0], 0.0);
        for x in [-0.8, -0.3, 0.1, 0.7] {
            let up = q.eval_extended(c(x, 1e-7)).unwrap();
            let down = q.eval_extended(c(x, -1e-7)).unwrap();
            let on = q.eval_extended(c(x, 0.0)).unwrap();
            assert!((up - down).norm() < 1e-5);
            assert!((up - on).norm() < 1e-5);
        }
        let z = c(0.0, -0.5);
        let jump = q.eval(z).unwrap() + z * z * c(0.0, 2.0 * PI);
        assert!((q.eval_extended(z).unwrap() - jump).norm() < 1e-13);
    }

    #[test]
    fn split_examples() {
        let m = NevanlinnaFunction::from_measure(SpectralMeasure::new(
            vec![PolynomialDensityPiece::new(-1.0, 1.0, vec![0.0, 0.0, 1.0])],
            vec![Atom { at: 0.0, mass: 0.5 }],
        ))
        .unwrap();
        let q = N1Function::new(FactorR::zero_only(c(0.0, 0.0)).unwrap(), m, None).unwrap();
        let (m0, rest) = q.split_point_mass(0.0);
        assert_eq!(m0, 0.5);
        assert!(rest.measure().atoms.is_empty());
        let (m0, same) = q.split_point_mass(0.5);
        assert_eq!(m0, 0.0);
        assert_eq!(same.measure(), q.base().measure());
    }

    #[test]
    fn derivative_examples() {
        let d = b_theta(PI / 2.0).derivatives_at(0.0, 3, None).unwrap();
        assert!(d.values[1].norm() < 1e-12);
        assert!((d.values[2] - c(0.0, 2.0)).norm() < 1e-10);

        let m = NevanlinnaFunction::new(
            0.0,
            0.0,
            1.0,
            SpectralMeasure::new(vec![], vec![Atom { at: 0.0, mass: 1.0 }]),
        )
        .unwrap();
        let a_poly = N1Function::new(FactorR::zero_only(c(0.0, 0.0)).unwrap(), m, None).unwrap();
        let d = a_poly.derivatives_at(0.0, 2, None).unwrap();
        assert!((d.values[1] + 1.0).norm() < 1e-12);

        let d = zero_only(vec![0.0, 0.0, 1.0], 0.0)
            .derivatives_at(0.0, 3, None)
            .unwrap();
        assert!(d.values[1].norm() < 1e-10);
        assert!(d.values[2].norm() < 1e-10);
        assert!((d.values[3] - c(12.0, 0.0)).norm() < 1e-8);
    }

    #[test]
    fn derivatives_match_jets() {
        let q = zero_only(vec![1.0], 0.0);
        let d = q.derivatives_at(0.3, 3, None).unwrap();
        let j = q.jet_extended::<4>(c(0.3, 0.0)).unwrap();
        for k in 0..4 {
            assert!((d.values[k] - j.derivative(k)).norm() < 1e-9 * (1.0 + j.derivative(k).norm()));
        }
    }

    #[test]
    fn case_examples() {
        let m = NevanlinnaFunction::new(
            0.0,
            0.0,
            1.0,
            SpectralMeasure::new(vec![], vec![Atom { at: 0.0, mass: 1.0 }]),
        )
        .unwrap();
        let a_poly = N1Function::new(FactorR::zero_only(c(0.0, 0.0)).unwrap(), m, None).unwrap();
        assert_eq!(a_poly.local_case(0.0).unwrap().case, LocalCase::Case1);

        let r = b_theta(PI / 2.0).local_case(0.0).unwrap();
        assert_eq!(r.case, LocalCase::Case2);
        assert!((r.theta0.unwrap() - PI / 2.0).abs() < 1e-10);
        assert!(!r.theta0_boundary);

        let r = zero_only(vec![0.0, 0.0, 0.0, 0.0, 1.0], 0.0).local_case(0.0).unwrap();
        assert_eq!(r.case, LocalCase::Case3);
        assert!((r.derivatives[2] - c(4.0, 0.0)).norm() < 1e-8);

        let r = zero_only(vec![0.0, 0.0, 1.0], 1.0).local_case(0.0).unwrap();
        assert_eq!(r.case, LocalCase::Case2);
        assert_eq!(r.theta0, Some(0.0));
        assert!(r.theta0_boundary);

        let r = zero_only(vec![1.0], 0.0).local_case(0.0).unwrap();
        assert!((r.derivatives[1] - c(0.0, 2.0 * PI)).norm() < 1e-9);

        assert!(matches!(
            zero_only(vec![1.0], 0.0).local_case(0.5),
            Err(Error::NotAZero { .. })
        ));
    }

    #[test]
    fn neg_recip_is_finite_at_beta() {
        let q = a_simple();
        let g = q.neg_recip_jet::<2>(c(0.0, 1.0)).unwrap();
        assert!(g.value().norm() < 1e-15);
        let z = c(0.4, 0.3);
        let direct = -1.0 / q.eval(z).unwrap();
        assert!((q.neg_recip_jet::<1>(z).unwrap().value() - direct).norm() < 1e-14);
        assert!(matches!(
            q.neg_recip_jet::<1>(c(0.0, 0.0)),
            Err(Error::ZeroDenominator { .. })
        ));
    }

    #[test]
    fn factor_validation() {
        assert!(FactorR::zero_only(c(0.0, -1.0)).is_err());
        assert!(FactorR::zero_pole(c(0.0, 1.0), c(0.0, 1.0)).is_err());
        assert_eq!(FactorR::pole_only(c(1.0, 1.0)).unwrap().alpha(), None);
    }
}
