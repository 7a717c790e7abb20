//! Classification of a real generalized zero `α` of `Q(z) = (z-α)² M(z)` into
//! the cases A–E from the atom mass `δ_α`, the limit
//! `γ_α = lim Q(z)/(z-α)²` and the moments `∫ dσ(t)/(t-α)^k`, `k = 2, 4`.

use std::fmt;

use num_complex::Complex64;
use serde::{Serialize, Serializer};

use crate::error::{Error, Result};
use crate::measures::{taylor_shift, LocalOrder, SpectralMeasure};
use crate::n1::{FactorKind, LocalCase, N1Function};
use crate::quad::neville_extrapolate;

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Moment {
    Value(f64),
    Divergent,
}

impl Moment {
    pub fn value(self) -> Option<f64> {
        match self {
            Moment::Value(v) => Some(v),
            Moment::Divergent => None,
        }
    }

    pub fn is_divergent(self) -> bool {
        self == Moment::Divergent
    }
}

impl Serialize for Moment {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            Moment::Value(v) => s.serialize_f64(*v),
            Moment::Divergent => s.serialize_str("divergent"),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum ZeroClass {
    A,
    B,
    C,
    D,
    E,
}

impl ZeroClass {
    /// The local case that accompanies each class.
    pub fn expected_case(self) -> LocalCase {
        match self {
            ZeroClass::A => LocalCase::Case1,
            ZeroClass::B | ZeroClass::C => LocalCase::Case2,
            ZeroClass::D | ZeroClass::E => LocalCase::Case3,
        }
    }
}

impl fmt::Display for ZeroClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            ZeroClass::A => "A",
            ZeroClass::B => "B",
            ZeroClass::C => "C",
            ZeroClass::D => "D",
            ZeroClass::E => "E",
        };
        f.write_str(s)
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct ClassificationEvidence {
    pub alpha: f64,
    pub delta_alpha: f64,
    /// `None` when the limit does not exist (an atom at `α`).
    pub gamma_alpha: Option<Complex64>,
    pub moment2: Moment,
    pub moment4: Moment,
    pub class: ZeroClass,
    pub tol: f64,
}

/// `∫ dσ(t)/(t - α)^k`, divergence decided from the vanishing order of the
/// density at `α`; convergent values in closed form.
pub fn moment_integral(sigma: &SpectralMeasure, alpha: f64, k: usize) -> Result<Moment> {
    match sigma.local_order(alpha)? {
        LocalOrder::Atom => return Ok(Moment::Divergent),
        LocalOrder::Order(p) if p < k => return Ok(Moment::Divergent),
        _ => {}
    }
    let mut total = 0.0;
    for piece in &sigma.pieces {
        let d = taylor_shift(&piece.coeffs, alpha);
        let (a, b) = (piece.lo - alpha, piece.hi - alpha);
        let local = piece.contains_interior(alpha);
        for (j, &dj) in d.iter().enumerate() {
            let m = j as i64 - k as i64;
            if local && m < 0 {
                // Vanishes to order ≥ k at α; these coefficients are roundoff.
                continue;
            }
            total += dj * power_integral(a, b, m);
        }
    }
    for atom in &sigma.atoms {
        total += atom.mass / (atom.at - alpha).powi(k as i32);
    }
    Ok(Moment::Value(total))
}

/// `∫_a^b u^m du` for an interval not containing 0 when `m < 0`.
fn power_integral(a: f64, b: f64, m: i64) -> f64 {
    if m == -1 {
        (b / a).abs().ln()
    } else {
        let e = (m + 1) as i32;
        (b.powi(e) - a.powi(e)) / e as f64
    }
}

/// `lim_{h↓0} Q(α + ih)/(ih)²` by Neville extrapolation over
/// `h = 0.1·2^{-k}`, `k = 0..=10`.
pub fn gamma_alpha(q: &N1Function, alpha: f64) -> Result<Complex64> {
    if q.factor().kind() != FactorKind::ZeroOnly {
        return Err(Error::Precondition(
            "the limit γ_α is defined for factors without a finite pole".into(),
        ));
    }
    let hs: Vec<f64> = (0..=10).map(|k| 0.1 * 0.5f64.powi(k)).collect();
    let values = hs
        .iter()
        .map(|&h| {
            let z = Complex64::new(alpha, h);
            let w = z - alpha;
            Ok(q.eval(z)? / (w * w))
        })
        .collect::<Result<Vec<_>>>()?;
    let (value, residual) = neville_extrapolate(&hs, &values);
    if !(residual <= 1e-6 * (1.0 + value.norm())) {
        return Err(Error::NoConvergence {
            what: "limit extrapolation",
            detail: format!("residual {residual:e}"),
        });
    }
    Ok(value)
}

/// The class of a real generalized zero `α` of a function with `β = ∞`.
pub fn classify(q: &N1Function, alpha: f64) -> Result<ClassificationEvidence> {
    if q.factor().kind() != FactorKind::ZeroOnly {
        return Err(Error::Precondition(
            "classification is defined only when the generalized pole is at infinity".into(),
        ));
    }
    let base = q.base();
    let sigma = base.measure();
    let tol = 1e-8 * (1.0 + base.a_eff().abs() + base.b() + sigma.poisson_mass() + base.fullline_density());
    let band = |v: f64, what: &str| -> Result<bool> {
        if v.abs() > tol {
            Ok(true)
        } else if v.abs() < 0.1 * tol {
            Ok(false)
        } else {
            Err(Error::Unclassifiable(format!(
                "{what} = {v:e} is inside the tolerance band {tol:e}"
            )))
        }
    };

    let delta = sigma.mass_at(alpha) + 0.0;
    if band(delta, "δ_α")? {
        return Ok(ClassificationEvidence {
            alpha,
            delta_alpha: delta,
            gamma_alpha: None,
            moment2: Moment::Divergent,
            moment4: Moment::Divergent,
            class: ZeroClass::A,
            tol,
        });
    }

    let with_fullline = |m: Moment| {
        if base.fullline_density() > 0.0 {
            Moment::Divergent
        } else {
            m
        }
    };
    let moment2 = with_fullline(moment_integral(sigma, alpha, 2)?);
    let moment4 = with_fullline(moment_integral(sigma, alpha, 4)?);
    let gamma = match gamma_alpha(q, alpha) {
        Ok(g) => Some(g),
        Err(_) if moment2.is_divergent() => None,
        Err(e) => return Err(e),
    };
    let evidence = |class| ClassificationEvidence {
        alpha,
        delta_alpha: delta,
        gamma_alpha: gamma,
        moment2,
        moment4,
        class,
        tol,
    };
    if moment2.is_divergent() {
        return Ok(evidence(ZeroClass::B));
    }
    let g = gamma.expect("limit exists when the second moment converges");
    if g.im.abs() > tol {
        return Err(Error::Unclassifiable(format!(
            "γ_α = {g} is not real although the second moment converges"
        )));
    }
    if band(g.re, "γ_α")? {
        return Ok(evidence(ZeroClass::C));
    }
    if moment4.is_divergent() {
        Ok(evidence(ZeroClass::D))
    } else {
        Ok(evidence(ZeroClass::E))
    }
}
