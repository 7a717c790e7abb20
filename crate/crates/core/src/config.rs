//! JSON description of an N₁ function: a builtin name or explicit data.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::builtins::builtin;
use crate::error::{Error, Result};
use crate::measures::{Atom, PolynomialDensityPiece, SpectralMeasure};
use crate::n1::{FactorKind, FactorR, N1Function};
use crate::nevanlinna::{ExtensionWindow, NevanlinnaFunction};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum FunctionSpec {
    Builtin { builtin: String },
    Explicit(ExplicitSpec),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FactorSpec {
    pub kind: FactorKind,
    /// `[re, im]`
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub alpha: Option<[f64; 2]>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub beta: Option<[f64; 2]>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "lowercase", deny_unknown_fields)]
pub enum MeasureItem {
    Poly { interval: [f64; 2], coeffs: Vec<f64> },
    Atom { at: f64, mass: f64 },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExplicitSpec {
    pub factor: FactorSpec,
    #[serde(default)]
    pub a_eff: f64,
    #[serde(default)]
    pub b: f64,
    /// Constant imaginary part `π·c` contributed by a density `c` on all of ℝ.
    #[serde(default)]
    pub fullline_im: f64,
    /// Alternative to `fullline_im`, given as the density `c`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub fullline_density: Option<f64>,
    #[serde(default)]
    pub measure: Vec<MeasureItem>,
    /// Continuation window `[lo, hi]`; `null` bounds are infinite.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub window: Option<[Option<f64>; 2]>,
}

fn point(p: Option<[f64; 2]>, name: &str) -> Result<Complex64> {
    p.map(|[re, im]| Complex64::new(re, im))
        .ok_or_else(|| Error::InvalidFunction(format!("factor needs {name}")))
}

impl FunctionSpec {
    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::InvalidFunction(format!("config: {e}")))
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("spec serializes")
    }

    /// Explicit data for an existing function.
    pub fn describe(q: &N1Function) -> Self {
        let pair = |z: Complex64| [z.re, z.im];
        let factor = q.factor();
        let base = q.base();
        let mut measure: Vec<MeasureItem> = base
            .measure()
            .pieces
            .iter()
            .map(|p| MeasureItem::Poly {
                interval: [p.lo, p.hi],
                coeffs: p.coeffs.clone(),
            })
            .collect();
        measure.extend(
            base.measure()
                .atoms
                .iter()
                .map(|a| MeasureItem::Atom { at: a.at, mass: a.mass }),
        );
        let finite = |x: f64| x.is_finite().then_some(x);
        FunctionSpec::Explicit(ExplicitSpec {
            factor: FactorSpec {
                kind: factor.kind(),
                alpha: factor.alpha().map(pair),
                beta: factor.beta().map(pair),
            },
            a_eff: base.a_eff(),
            b: base.b(),
            fullline_im: base.fullline_im(),
            fullline_density: None,
            measure,
            window: q.window().map(|w| [finite(w.lo), finite(w.hi)]),
        })
    }

    pub fn build(&self) -> Result<N1Function> {
        let s = match self {
            FunctionSpec::Builtin { builtin: name } => return builtin(name),
            FunctionSpec::Explicit(s) => s,
        };
        let factor = match s.factor.kind {
            FactorKind::ZeroPole => FactorR::zero_pole(point(s.factor.alpha, "alpha")?, point(s.factor.beta, "beta")?)?,
            FactorKind::ZeroOnly => FactorR::zero_only(point(s.factor.alpha, "alpha")?)?,
            FactorKind::PoleOnly => FactorR::pole_only(point(s.factor.beta, "beta")?)?,
        };
        let mut pieces = Vec::new();
        let mut atoms = Vec::new();
        for item in &s.measure {
            match item {
                MeasureItem::Poly { interval, coeffs } => {
                    pieces.push(PolynomialDensityPiece::new(interval[0], interval[1], coeffs.clone()))
                }
                MeasureItem::Atom { at, mass } => atoms.push(Atom { at: *at, mass: *mass }),
            }
        }
        let measure = SpectralMeasure::new(pieces, atoms);
        let fullline_im = match s.fullline_density {
            Some(c) if s.fullline_im != 0.0 => {
                return Err(Error::InvalidFunction(format!(
                    "both fullline_im = {} and fullline_density = {c} given",
                    s.fullline_im
                )))
            }
            Some(c) => std::f64::consts::PI * c,
            None => s.fullline_im,
        };
        let base = NevanlinnaFunction::new(s.a_eff, s.b, fullline_im, measure)?;
        let window = match s.window {
            None => None,
            Some([lo, hi]) => {
                let designated = factor.alpha().filter(|a| a.im == 0.0).map(|a| a.re);
                Some(ExtensionWindow::new(
                    base.measure(),
                    lo.unwrap_or(f64::NEG_INFINITY),
                    hi.unwrap_or(f64::INFINITY),
                    designated,
                )?)
            }
        };
        N1Function::new(factor, base, window)
    }
}
