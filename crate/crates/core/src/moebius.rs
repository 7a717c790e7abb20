//! The rotation family `Q_τ = (Q - τ)/(1 + τQ)`, `τ ∈ ℝ ∪ {∞}`, `Q_∞ = -1/Q`.

use std::fmt;

use num_complex::Complex64;
use serde::{Serialize, Serializer};

use crate::error::{Error, Result};
use crate::n1::N1Function;
use crate::tracker::solve_root;

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum TauParam {
    Finite(f64),
    Infinity,
}

impl TauParam {
    pub fn finite(self) -> Option<f64> {
        match self {
            TauParam::Finite(t) => Some(t),
            TauParam::Infinity => None,
        }
    }

    pub fn is_infinite(self) -> bool {
        self == TauParam::Infinity
    }

    /// `s = -1/τ`, the coordinate of the chart around `τ = ∞`.
    pub fn chart_s(self) -> Option<f64> {
        match self {
            TauParam::Infinity => Some(0.0),
            TauParam::Finite(t) if t != 0.0 => Some(-1.0 / t),
            TauParam::Finite(_) => None,
        }
    }

    /// Point of `ℝ ∪ {∞}` with chart coordinate `s`.
    pub fn from_s(s: f64) -> Self {
        if s == 0.0 {
            TauParam::Infinity
        } else {
            TauParam::Finite(-1.0 / s)
        }
    }

    /// Angle `φ ∈ (-π/2, π/2]` with `τ = tan φ`.
    pub fn angle(self) -> f64 {
        match self {
            TauParam::Finite(t) => t.atan(),
            TauParam::Infinity => std::f64::consts::FRAC_PI_2,
        }
    }
}

impl From<f64> for TauParam {
    fn from(t: f64) -> Self {
        if t.is_infinite() {
            TauParam::Infinity
        } else {
            TauParam::Finite(t)
        }
    }
}

impl fmt::Display for TauParam {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            TauParam::Finite(t) => write!(f, "{t}"),
            TauParam::Infinity => write!(f, "inf"),
        }
    }
}

impl Serialize for TauParam {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            TauParam::Finite(t) => s.serialize_f64(*t),
            TauParam::Infinity => s.serialize_str("inf"),
        }
    }
}

/// `(w - τ)/(1 + τw)`, or `-1/w` for `τ = ∞`.
pub fn moebius_apply(w: Complex64, tau: TauParam) -> Result<Complex64> {
    match tau {
        TauParam::Finite(t) => {
            let den = 1.0 + t * w;
            if den == Complex64::new(0.0, 0.0) {
                return Err(Error::PoleHit { re: w.re, im: w.im });
            }
            Ok((w - t) / den)
        }
        TauParam::Infinity => {
            if w == Complex64::new(0.0, 0.0) {
                return Err(Error::ZeroDenominator { re: w.re, im: w.im });
            }
            Ok(-1.0 / w)
        }
    }
}

/// `Q_τ(z)` through the continuation of `Q`.
pub fn q_tau(q: &N1Function, tau: TauParam, z: Complex64) -> Result<Complex64> {
    let w = q.eval_extended(z)?;
    moebius_apply(w, tau).map_err(|e| match e {
        Error::PoleHit { .. } => Error::pole(z),
        Error::ZeroDenominator { .. } => Error::ZeroDenominator { re: z.re, im: z.im },
        other => other,
    })
}

/// Parameter of `(Q_τ)_σ` within the family: tangent addition.
pub fn compose_tau(tau: TauParam, sigma: f64) -> TauParam {
    match tau {
        TauParam::Infinity => {
            if sigma == 0.0 {
                TauParam::Infinity
            } else {
                TauParam::Finite(-1.0 / sigma)
            }
        }
        TauParam::Finite(t) => {
            let den = 1.0 - t * sigma;
            if den.abs() <= 1e-12 * (1.0 + (t + sigma).abs()) {
                TauParam::Infinity
            } else {
                TauParam::Finite((t + sigma) / den)
            }
        }
    }
}

/// The pole `β(τ)` of `Q_τ`: the root of `1 + τQ = 0` near `guess`.
pub fn solve_beta(q: &N1Function, tau: TauParam, guess: Complex64) -> Result<Complex64> {
    match tau {
        TauParam::Finite(t) if t != 0.0 => solve_root(q, TauParam::Finite(-1.0 / t), guess),
        TauParam::Finite(_) => q
            .gpnt()
            .ok_or_else(|| Error::Precondition("the pole of Q is at infinity".into())),
        TauParam::Infinity => solve_root(q, TauParam::Finite(0.0), guess),
    }
}
