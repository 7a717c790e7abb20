//! Spectral measures: finitely many compact pieces with polynomial density
//! plus finitely many atoms.

use std::fmt;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Density `φ(t) = Σ c_k t^k` on the closed interval `[lo, hi]`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PolynomialDensityPiece {
    pub lo: f64,
    pub hi: f64,
    pub coeffs: Vec<f64>,
}

impl PolynomialDensityPiece {
    pub fn new(lo: f64, hi: f64, coeffs: Vec<f64>) -> Self {
        PolynomialDensityPiece { lo, hi, coeffs }
    }

    pub fn density(&self, t: f64) -> f64 {
        self.coeffs.iter().rev().fold(0.0, |acc, &c| acc * t + c)
    }

    /// The density continued to a complex argument.
    pub fn density_complex(&self, z: Complex64) -> Complex64 {
        self.coeffs
            .iter()
            .rev()
            .fold(Complex64::new(0.0, 0.0), |acc, &c| acc * z + c)
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len().saturating_sub(1)
    }

    pub fn contains_interior(&self, x: f64) -> bool {
        self.lo < x && x < self.hi
    }

    pub fn is_endpoint(&self, x: f64) -> bool {
        x == self.lo || x == self.hi
    }

    /// Mass `∫ φ` over `[max(lo, a), min(hi, b)]`.
    pub fn mass_on(&self, a: f64, b: f64) -> f64 {
        let lo = a.max(self.lo);
        let hi = b.min(self.hi);
        if hi <= lo {
            return 0.0;
        }
        let anti = |t: f64| {
            self.coeffs
                .iter()
                .enumerate()
                .rev()
                .fold(0.0, |acc, (k, &c)| acc * t + c / (k as f64 + 1.0))
                * t
        };
        anti(hi) - anti(lo)
    }
}

/// Point mass `mass · δ_at`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Atom {
    pub at: f64,
    pub mass: f64,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct SpectralMeasure {
    pub pieces: Vec<PolynomialDensityPiece>,
    pub atoms: Vec<Atom>,
}

#[derive(Debug, Clone, PartialEq)]
pub enum Violation {
    NonFinite { what: String },
    EmptyInterval { piece: usize },
    NegativeDensity { piece: usize, from: f64, to: f64 },
    OverlappingPieces { first: usize, second: usize },
    DuplicateAtom { at: f64 },
    NonpositiveMass { at: f64, mass: f64 },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::NonFinite { what } => write!(f, "non-finite value in {what}"),
            Violation::EmptyInterval { piece } => write!(f, "piece {piece} has lo >= hi"),
            Violation::NegativeDensity { piece, from, to } => {
                write!(f, "density of piece {piece} negative on [{from}, {to}]")
            }
            Violation::OverlappingPieces { first, second } => {
                write!(f, "pieces {first} and {second} overlap")
            }
            Violation::DuplicateAtom { at } => write!(f, "duplicate atom at {at}"),
            Violation::NonpositiveMass { at, mass } => {
                write!(f, "nonpositive mass {mass} at {at}")
            }
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct ValidationReport {
    pub violations: Vec<Violation>,
}

impl ValidationReport {
    pub fn is_valid(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Local behaviour of the measure at a real point.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LocalOrder {
    Atom,
    /// α is interior to a piece; the density vanishes there to exactly this order.
    Order(usize),
    NoDensity,
}

/// Coefficients of `p(t)` in powers of `(t - center)`.
pub fn taylor_shift(coeffs: &[f64], center: f64) -> Vec<f64> {
    // Repeated synthetic division.
    let mut d = coeffs.to_vec();
    let n = d.len();
    for j in 0..n {
        for k in (j..n - 1).rev() {
            d[k] += center * d[k + 1];
        }
    }
    d
}

impl SpectralMeasure {
    pub fn new(pieces: Vec<PolynomialDensityPiece>, atoms: Vec<Atom>) -> Self {
        SpectralMeasure { pieces, atoms }
    }

    pub fn empty() -> Self {
        Self::default()
    }

    pub fn is_empty(&self) -> bool {
        self.pieces.is_empty() && self.atoms.is_empty()
    }

    pub fn validate(&self) -> ValidationReport {
        validate_measure(self)
    }

    pub fn mass_at(&self, alpha: f64) -> f64 {
        mass_at(self, alpha)
    }

    pub fn local_order(&self, alpha: f64) -> Result<LocalOrder> {
        local_order(self, alpha)
    }

    /// The measure with any atom at `alpha` removed.
    pub fn without_atom(&self, alpha: f64) -> SpectralMeasure {
        SpectralMeasure {
            pieces: self.pieces.clone(),
            atoms: self.atoms.iter().copied().filter(|a| a.at != alpha).collect(),
        }
    }

    /// `σ([a, b])`.
    pub fn mass_on(&self, a: f64, b: f64) -> f64 {
        let cont: f64 = self.pieces.iter().map(|p| p.mass_on(a, b)).sum();
        let atoms: f64 = self
            .atoms
            .iter()
            .filter(|at| a <= at.at && at.at <= b)
            .map(|at| at.mass)
            .sum();
        cont + atoms
    }

    /// `∫ dσ(t) / (t² + 1)`; finite for every measure of this model.
    pub fn poisson_mass(&self) -> f64 {
        let atoms: f64 = self.atoms.iter().map(|a| a.mass / (a.at * a.at + 1.0)).sum();
        let pieces: f64 = self
            .pieces
            .iter()
            .map(|p| crate::quad::gauss_legendre(|t| p.density(t) / (t * t + 1.0), p.lo, p.hi, 64))
            .sum();
        atoms + pieces
    }

    /// Translates the whole measure by `shift`.
    pub fn translated(&self, shift: f64) -> SpectralMeasure {
        let pieces = self
            .pieces
            .iter()
            .map(|p| PolynomialDensityPiece {
                lo: p.lo + shift,
                hi: p.hi + shift,
                coeffs: taylor_shift(&p.coeffs, -shift),
            })
            .collect();
        let atoms = self
            .atoms
            .iter()
            .map(|a| Atom {
                at: a.at + shift,
                mass: a.mass,
            })
            .collect();
        SpectralMeasure { pieces, atoms }
    }
}

fn chebyshev_samples(lo: f64, hi: f64, n: usize) -> impl Iterator<Item = f64> {
    let mid = 0.5 * (lo + hi);
    let half = 0.5 * (hi - lo);
    let nodes = (0..n).map(move |k| {
        let theta = std::f64::consts::PI * (2 * k + 1) as f64 / (2 * n) as f64;
        mid - half * theta.cos()
    });
    std::iter::once(lo).chain(nodes).chain(std::iter::once(hi))
}

pub fn validate_measure(sigma: &SpectralMeasure) -> ValidationReport {
    let mut violations = Vec::new();

    for (i, p) in sigma.pieces.iter().enumerate() {
        if !p.lo.is_finite() || !p.hi.is_finite() || p.coeffs.iter().any(|c| !c.is_finite()) {
            violations.push(Violation::NonFinite {
                what: format!("piece {i}"),
            });
            continue;
        }
        if p.lo >= p.hi {
            violations.push(Violation::EmptyInterval { piece: i });
            continue;
        }
        let n = p.degree() * 8 + 16;
        let negative: Vec<f64> = chebyshev_samples(p.lo, p.hi, n)
            .filter(|&t| p.density(t) < 0.0)
            .collect();
        if let (Some(from), Some(to)) = (
            negative.iter().copied().reduce(f64::min),
            negative.iter().copied().reduce(f64::max),
        ) {
            violations.push(Violation::NegativeDensity { piece: i, from, to });
        }
    }

    for i in 0..sigma.pieces.len() {
        for j in i + 1..sigma.pieces.len() {
            let (a, b) = (&sigma.pieces[i], &sigma.pieces[j]);
            if a.lo < b.hi && b.lo < a.hi {
                violations.push(Violation::OverlappingPieces { first: i, second: j });
            }
        }
    }

    for (i, a) in sigma.atoms.iter().enumerate() {
        if !a.at.is_finite() || !a.mass.is_finite() {
            violations.push(Violation::NonFinite {
                what: format!("atom {i}"),
            });
            continue;
        }
        if a.mass <= 0.0 {
            violations.push(Violation::NonpositiveMass { at: a.at, mass: a.mass });
        }
        if sigma.atoms[..i].iter().any(|b| b.at == a.at) {
            violations.push(Violation::DuplicateAtom { at: a.at });
        }
    }

    ValidationReport { violations }
}

pub fn mass_at(sigma: &SpectralMeasure, alpha: f64) -> f64 {
    sigma
        .atoms
        .iter()
        .filter(|a| a.at == alpha)
        .map(|a| a.mass.max(0.0))
        .sum()
}

pub fn local_order(sigma: &SpectralMeasure, alpha: f64) -> Result<LocalOrder> {
    if sigma.atoms.iter().any(|a| a.at == alpha) {
        return Ok(LocalOrder::Atom);
    }
    if sigma.pieces.iter().any(|p| p.is_endpoint(alpha)) {
        return Err(Error::AmbiguousBoundary { at: alpha });
    }
    let Some(piece) = sigma.pieces.iter().find(|p| p.contains_interior(alpha)) else {
        return Ok(LocalOrder::NoDensity);
    };
    let shifted = taylor_shift(&piece.coeffs, alpha);
    // Roundoff scale of each shifted coefficient.
    let scale: Vec<f64> = taylor_shift(&piece.coeffs.iter().map(|c| c.abs()).collect::<Vec<_>>(), alpha.abs());
    Ok(shifted
        .iter()
        .zip(&scale)
        .position(|(d, s)| d.abs() > 1e-12 * s.max(f64::MIN_POSITIVE))
        .map(LocalOrder::Order)
        .unwrap_or(LocalOrder::NoDensity))
}
