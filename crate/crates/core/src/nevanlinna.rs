//! Nevanlinna functions `M(z) = a + b z + iπc·sign(Im z) + ∫ dσ(t)/(t - z)`.
//!
//! The regularizing term `-t/(t²+1)` of the integral representation is
//! absorbed into the constant `a_eff`; this is possible because every
//! supported measure integrates `|t|/(t²+1)`. A constant density `c` on the
//! whole line is carried separately as `fullline_im = πc`, which is its
//! (constant) contribution to `Im M` on the upper half-plane.

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::cauchy::{CauchyPiece, Sheet};
use crate::error::{Error, Result};
use crate::jet::Jet;
use crate::measures::{Atom, SpectralMeasure};
use crate::quad::adaptive_gk;

#[derive(Debug, Clone)]
pub struct NevanlinnaFunction {
    a_eff: f64,
    b: f64,
    fullline_im: f64,
    measure: SpectralMeasure,
    pieces: Vec<CauchyPiece>,
}

/// Open real interval `(lo, hi)` across which `M` is continued from `ℂ⁺`.
///
/// No piece endpoint and no atom other than the designated one lies inside.
/// Points of the lower half-plane with real part in `(lo, hi)` belong to the
/// window; bounds may be infinite.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ExtensionWindow {
    pub lo: f64,
    pub hi: f64,
    pub designated_atom: Option<f64>,
}

impl ExtensionWindow {
    pub fn new(measure: &SpectralMeasure, lo: f64, hi: f64, designated_atom: Option<f64>) -> Result<Self> {
        if !(lo < hi) {
            return Err(Error::Precondition(format!("empty window ({lo}, {hi})")));
        }
        for p in &measure.pieces {
            for e in [p.lo, p.hi] {
                if lo < e && e < hi {
                    return Err(Error::Precondition(format!(
                        "window ({lo}, {hi}) contains the piece endpoint {e}"
                    )));
                }
            }
        }
        for a in &measure.atoms {
            if lo < a.at && a.at < hi && Some(a.at) != designated_atom {
                return Err(Error::Precondition(format!(
                    "window ({lo}, {hi}) contains the atom at {}",
                    a.at
                )));
            }
        }
        Ok(ExtensionWindow {
            lo,
            hi,
            designated_atom,
        })
    }

    /// The largest admissible window containing `x`.
    pub fn around(measure: &SpectralMeasure, x: f64, designated_atom: Option<f64>) -> Result<Self> {
        let mut lo = f64::NEG_INFINITY;
        let mut hi = f64::INFINITY;
        let blockers = measure.pieces.iter().flat_map(|p| [p.lo, p.hi]).chain(
            measure
                .atoms
                .iter()
                .map(|a| a.at)
                .filter(|&a| Some(a) != designated_atom),
        );
        for e in blockers {
            if e == x {
                return if measure.pieces.iter().any(|p| p.is_endpoint(x)) {
                    Err(Error::AmbiguousBoundary { at: x })
                } else {
                    Err(Error::AtomCollision { at: x })
                };
            }
            if e < x {
                lo = lo.max(e);
            } else {
                hi = hi.min(e);
            }
        }
        Ok(ExtensionWindow {
            lo,
            hi,
            designated_atom,
        })
    }

    pub fn whole_line() -> Self {
        ExtensionWindow {
            lo: f64::NEG_INFINITY,
            hi: f64::INFINITY,
            designated_atom: None,
        }
    }

    pub fn contains(&self, z: Complex64) -> bool {
        z.im >= 0.0 || (self.lo < z.re && z.re < self.hi)
    }

    /// Distance from `z` to the part of the boundary that matters for
    /// continuation (the vertical cuts below the window ends).
    pub fn distance_to_boundary(&self, z: Complex64) -> f64 {
        let d_lo = (z.re - self.lo).abs();
        let d_hi = (self.hi - z.re).abs();
        d_lo.min(d_hi)
    }
}

/// Recovered mass and the last Richardson correction.
#[derive(Debug, Clone, Copy)]
pub struct InversionResult {
    pub value: f64,
    pub residual: f64,
}

impl NevanlinnaFunction {
    pub fn new(a_eff: f64, b: f64, fullline_im: f64, measure: SpectralMeasure) -> Result<Self> {
        if !a_eff.is_finite() || !b.is_finite() || !fullline_im.is_finite() {
            return Err(Error::InvalidFunction("non-finite coefficient".into()));
        }
        if b < 0.0 {
            return Err(Error::InvalidFunction(format!("linear coefficient b = {b} < 0")));
        }
        if fullline_im < 0.0 {
            return Err(Error::InvalidFunction(format!(
                "full-line density contribution {fullline_im} < 0"
            )));
        }
        let report = measure.validate();
        if !report.is_valid() {
            let msg: Vec<String> = report.violations.iter().map(|v| v.to_string()).collect();
            return Err(Error::InvalidMeasure(msg.join("; ")));
        }
        let pieces = measure
            .pieces
            .iter()
            .map(|p| CauchyPiece::new(p.lo, p.hi, &p.coeffs))
            .collect();
        Ok(NevanlinnaFunction {
            a_eff,
            b,
            fullline_im,
            measure,
            pieces,
        })
    }

    /// Pure measure transform `∫ dσ(t)/(t - z)`.
    pub fn from_measure(measure: SpectralMeasure) -> Result<Self> {
        Self::new(0.0, 0.0, 0.0, measure)
    }

    pub fn a_eff(&self) -> f64 {
        self.a_eff
    }

    pub fn b(&self) -> f64 {
        self.b
    }

    /// `πc` for the constant full-line density `c`.
    pub fn fullline_im(&self) -> f64 {
        self.fullline_im
    }

    pub fn fullline_density(&self) -> f64 {
        self.fullline_im / PI
    }

    pub fn measure(&self) -> &SpectralMeasure {
        &self.measure
    }

    /// The constant `a` of the regularized representation, recovered from
    /// `a_eff = a - ∫ t/(1+t²) dσ`. The full-line constant density contributes
    /// nothing (its regularized integral is odd).
    pub fn representation_a(&self) -> f64 {
        let atoms: f64 = self
            .measure
            .atoms
            .iter()
            .map(|a| a.mass * a.at / (a.at * a.at + 1.0))
            .sum();
        let pieces: f64 = self
            .measure
            .pieces
            .iter()
            .map(|p| crate::quad::gauss_legendre(|t| p.density(t) * t / (t * t + 1.0), p.lo, p.hi, 64))
            .sum();
        self.a_eff + atoms + pieces
    }

    /// `M - m δ_α` split: returns the atom mass at `alpha` and the function
    /// with that atom removed.
    pub fn split_atom(&self, alpha: f64) -> (f64, NevanlinnaFunction) {
        let m0 = self.measure.mass_at(alpha);
        let rest = NevanlinnaFunction {
            measure: self.measure.without_atom(alpha),
            ..self.clone()
        };
        (m0, rest)
    }

    /// `M(z)` off the real axis; the lower half-plane uses `M(z̄)‾`.
    pub fn eval(&self, z: Complex64) -> Result<Complex64> {
        Ok(self.jet::<1>(z)?.value())
    }

    pub fn jet<const N: usize>(&self, z: Complex64) -> Result<Jet<N>> {
        if z.im == 0.0 {
            return Err(Error::domain(z, "M is evaluated off the real axis only"));
        }
        if !z.re.is_finite() || !z.im.is_finite() {
            return Err(Error::domain(z, "non-finite argument"));
        }
        let x = Jet::<N>::variable(z);
        let mut acc = x
            .scale(Complex64::new(self.b, 0.0))
            .add_constant(Complex64::new(self.a_eff, self.fullline_im * z.im.signum()));
        for p in &self.pieces {
            acc = acc + p.jet_on_sheet::<N>(z, Sheet::Principal);
        }
        for a in &self.measure.atoms {
            acc = acc + atom_jet::<N>(a, z);
        }
        Ok(acc)
    }

    /// The continuation of `M|ℂ⁺` into `window ∪ ℂ⁺ ∪ ℝ`-points where it is
    /// defined (real points off piece endpoints and atoms).
    pub fn eval_extended(&self, window: &ExtensionWindow, z: Complex64) -> Result<Complex64> {
        Ok(self.jet_extended::<1>(window, z)?.value())
    }

    pub fn jet_extended<const N: usize>(&self, window: &ExtensionWindow, z: Complex64) -> Result<Jet<N>> {
        if !z.re.is_finite() || !z.im.is_finite() {
            return Err(Error::domain(z, "non-finite argument"));
        }
        if !window.contains(z) {
            return Err(Error::domain(z, "outside the extension window"));
        }
        let x = Jet::<N>::variable(z);
        let mut acc = x
            .scale(Complex64::new(self.b, 0.0))
            .add_constant(Complex64::new(self.a_eff, self.fullline_im));
        for p in &self.pieces {
            let jet = if z.im < 0.0 {
                let hosts = p.lo <= window.lo && window.hi <= p.hi;
                let sheet = if hosts { Sheet::Lower } else { Sheet::Principal };
                p.jet_on_sheet::<N>(z, sheet)
            } else {
                p.continued_jet::<N>(z)?
            };
            acc = acc + jet;
        }
        for a in &self.measure.atoms {
            if z.im == 0.0 && z.re == a.at {
                return Err(Error::AtomCollision { at: a.at });
            }
            acc = acc + atom_jet::<N>(a, z);
        }
        Ok(acc)
    }

    /// `σ([t1, t2])` recovered from `(1/π) ∫ Im M(t + iε) dt` as `ε → 0`,
    /// using 2-point Richardson extrapolation over `eps` (decreasing).
    pub fn stieltjes_invert(&self, t1: f64, t2: f64, eps: &[f64]) -> Result<InversionResult> {
        if !(t1 < t2) {
            return Err(Error::Precondition(format!("t1 = {t1} must be below t2 = {t2}")));
        }
        if let Some(a) = self.measure.atoms.iter().find(|a| a.at == t1 || a.at == t2) {
            return Err(Error::Precondition(format!(
                "integration endpoint coincides with the atom at {}",
                a.at
            )));
        }
        if eps.len() < 3 {
            return Err(Error::Precondition("need at least three ε values".into()));
        }
        let breaks: Vec<f64> = self
            .measure
            .atoms
            .iter()
            .map(|a| a.at)
            .chain(self.measure.pieces.iter().flat_map(|p| [p.lo, p.hi]))
            .collect();
        let smeared = eps
            .iter()
            .map(|&e| {
                adaptive_gk(
                    |t| {
                        let v = self.eval(Complex64::new(t, e)).map(|m| m.im).unwrap_or(f64::NAN);
                        Complex64::new(v / PI, 0.0)
                    },
                    t1,
                    t2,
                    &breaks,
                    1e-12,
                    1e-12,
                    20_000,
                )
                .map(|r| r.value.re)
            })
            .collect::<Result<Vec<f64>>>()?;
        // ε_{k+1} = ε_k / 2 removes the O(ε) term.
        let extrapolated: Vec<f64> = smeared
            .windows(2)
            .zip(eps.windows(2))
            .map(|(s, e)| {
                let r = e[0] / e[1];
                (r * s[1] - s[0]) / (r - 1.0)
            })
            .collect();
        let n = extrapolated.len();
        let value = extrapolated[n - 1];
        let residual = (extrapolated[n - 1] - extrapolated[n - 2]).abs();
        if residual > 1e-5 * (1.0 + value.abs()) {
            return Err(Error::NoConvergence {
                what: "Stieltjes inversion",
                detail: format!("Richardson residual {residual:e}"),
            });
        }
        Ok(InversionResult { value, residual })
    }

    /// Default `ε_k = 0.1 · 2^{-k}`, `k = 0..=8`.
    pub fn default_inversion_eps() -> Vec<f64> {
        (0..=8).map(|k| 0.1 * 0.5f64.powi(k)).collect()
    }

    /// Stored `σ([t1, t2])`, including the full-line density.
    pub fn stored_mass(&self, t1: f64, t2: f64) -> f64 {
        self.measure.mass_on(t1, t2) + self.fullline_density() * (t2 - t1)
    }
}

fn atom_jet<const N: usize>(a: &Atom, z: Complex64) -> Jet<N> {
    Jet::<N>::pole(Complex64::new(a.at, 0.0), z).scale(Complex64::new(a.mass, 0.0))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::measures::PolynomialDensityPiece;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn flat() -> NevanlinnaFunction {
        NevanlinnaFunction::from_measure(SpectralMeasure::new(
            vec![PolynomialDensityPiece::new(-1.0, 1.0, vec![1.0])],
            vec![],
        ))
        .unwrap()
    }

    #[test]
    fn eval_examples() {
        let atom =
            NevanlinnaFunction::from_measure(SpectralMeasure::new(vec![], vec![Atom { at: 0.0, mass: 1.0 }])).unwrap();
        assert!((atom.eval(c(0.0, 1.0)).unwrap() - c(0.0, 1.0)).norm() < 1e-15);

        assert!((flat().eval(c(0.0, 1.0)).unwrap() - c(0.0, PI / 2.0)).norm() < 1e-15);

        let lin = NevanlinnaFunction::new(0.0, 1.0, 0.0, SpectralMeasure::empty()).unwrap();
        assert_eq!(lin.eval(c(2.0, 3.0)).unwrap(), c(2.0, 3.0));

        assert!(flat().eval(c(0.5, 0.0)).is_err());
    }

    #[test]
    fn symmetric_path() {
        let m = flat();
        let z = c(0.3, 0.8);
        assert!((m.eval(z.conj()).unwrap() - m.eval(z).unwrap().conj()).norm() < 1e-15);
    }

    #[test]
    fn extended_examples() {
        let m = flat();
        let w = ExtensionWindow::around(m.measure(), 0.0, None).unwrap();
        assert_eq!((w.lo, w.hi), (-1.0, 1.0));
        assert!((m.eval_extended(&w, c(0.0, 0.0)).unwrap() - c(0.0, PI)).norm() < 1e-15);
        let v = m.eval_extended(&w, c(0.0, -0.5)).unwrap();
        assert!((v.im - 4.0689).abs() < 1e-4 && v.re.abs() < 1e-14);
        let up = c(0.0, 2.0);
        assert_eq!(m.eval_extended(&w, up).unwrap(), m.eval(up).unwrap());
        assert!(m.eval_extended(&w, c(1.5, -0.5)).is_err());
    }

    #[test]
    fn window_construction() {
        let m = SpectralMeasure::new(
            vec![PolynomialDensityPiece::new(-1.0, 1.0, vec![1.0])],
            vec![Atom { at: 2.0, mass: 1.0 }, Atom { at: 0.5, mass: 1.0 }],
        );
        let w = ExtensionWindow::around(&m, 1.5, None).unwrap();
        assert_eq!((w.lo, w.hi), (1.0, 2.0));
        let w = ExtensionWindow::around(&m, 0.5, Some(0.5)).unwrap();
        assert_eq!((w.lo, w.hi), (-1.0, 1.0));
        assert!(ExtensionWindow::around(&m, 0.0, None).is_ok());
        assert_eq!(
            ExtensionWindow::around(&m, 1.0, None),
            Err(Error::AmbiguousBoundary { at: 1.0 })
        );
        assert!(ExtensionWindow::new(&m, -1.0, 1.0, None).is_err());
        assert!(ExtensionWindow::new(&m, 1.0, 2.0, None).is_ok());
    }

    #[test]
    fn gap_window_uses_reflection() {
        // In a gap the continuation is the Schwarz reflection.
        let m = flat();
        let w = ExtensionWindow::around(m.measure(), 2.0, None).unwrap();
        let z = c(2.0, -0.3);
        assert!((m.eval_extended(&w, z).unwrap() - m.eval(z).unwrap()).norm() < 1e-15);
    }

    #[test]
    fn stieltjes_examples() {
        let eps = NevanlinnaFunction::default_inversion_eps();
        let r = flat().stieltjes_invert(-0.5, 0.5, &eps).unwrap();
        assert!((r.value - 1.0).abs() < 1e-4);

        let sq = NevanlinnaFunction::from_measure(SpectralMeasure::new(
            vec![PolynomialDensityPiece::new(-1.0, 1.0, vec![0.0, 0.0, 1.0])],
            vec![],
        ))
        .unwrap();
        let r = sq.stieltjes_invert(0.0, 1.5, &eps).unwrap();
        assert!((r.value - 1.0 / 3.0).abs() < 1e-4);

        let atom =
            NevanlinnaFunction::from_measure(SpectralMeasure::new(vec![], vec![Atom { at: 0.0, mass: 2.0 }])).unwrap();
        let r = atom.stieltjes_invert(-0.1, 0.1, &eps).unwrap();
        assert!((r.value - 2.0).abs() < 1e-4);

        assert!(atom.stieltjes_invert(0.0, 0.1, &eps).is_err());
    }

    #[test]
    fn representation_constant() {
        let m = NevanlinnaFunction::new(
            0.25,
            0.0,
            0.0,
            SpectralMeasure::new(vec![], vec![Atom { at: 1.0, mass: 2.0 }]),
        )
        .unwrap();
        assert!((m.representation_a() - 1.25).abs() < 1e-15);
    }

    #[test]
    fn split_reconstructs() {
        let m = NevanlinnaFunction::from_measure(SpectralMeasure::new(
            vec![PolynomialDensityPiece::new(-1.0, 1.0, vec![0.0, 0.0, 1.0])],
            vec![Atom { at: 0.0, mass: 0.5 }],
        ))
        .unwrap();
        let (m0, rest) = m.split_atom(0.0);
        assert_eq!(m0, 0.5);
        assert!(rest.measure().atoms.is_empty());
        let z = c(0.0, 1.0);
        let recon = rest.eval(z).unwrap() + m0 / (0.0 - z);
        assert!((m.eval(z).unwrap() - recon).norm() <= 1e-12);
    }
}
