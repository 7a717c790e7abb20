//! Registry of worked example functions, one per classification case.

use std::f64::consts::{FRAC_PI_2, PI};

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::measures::{Atom, PolynomialDensityPiece, SpectralMeasure};
use crate::n1::{FactorR, N1Function};
use crate::nevanlinna::{ExtensionWindow, NevanlinnaFunction};

/// Names accepted by [`builtin`]; `B-theta` takes an optional `:θ₀` suffix.
pub const BUILTIN_NAMES: [&str; 7] = ["A-simple", "A-poly", "B-theta", "B-log", "C", "D", "E"];

fn origin() -> Complex64 {
    Complex64::new(0.0, 0.0)
}

/// `M(z) = i - 1/z`: unit atom at 0 plus the constant density `1/π`.
fn atom_plus_constant() -> Result<NevanlinnaFunction> {
    NevanlinnaFunction::new(
        0.0,
        0.0,
        1.0,
        SpectralMeasure::new(vec![], vec![Atom { at: 0.0, mass: 1.0 }]),
    )
}

fn piece_on_unit_interval(a_eff: f64, coeffs: Vec<f64>) -> Result<N1Function> {
    let measure = SpectralMeasure::new(vec![PolynomialDensityPiece::new(-1.0, 1.0, coeffs)], vec![]);
    let window = ExtensionWindow::new(&measure, -1.0, 1.0, None)?;
    let m = NevanlinnaFunction::new(a_eff, 0.0, 0.0, measure)?;
    N1Function::new(FactorR::zero_only(origin())?, m, Some(window))
}

/// `Q(z) = iz/(z - i)`.
pub fn a_simple() -> N1Function {
    let factor = FactorR::zero_pole(origin(), Complex64::new(0.0, 1.0)).expect("valid factor");
    N1Function::new(
        factor,
        atom_plus_constant().expect("valid base"),
        Some(ExtensionWindow::whole_line()),
    )
    .expect("valid function")
}

/// `Q(z) = z²(i - 1/z) = iz² - z`.
pub fn a_poly() -> N1Function {
    let factor = FactorR::zero_only(origin()).expect("valid factor");
    N1Function::new(
        factor,
        atom_plus_constant().expect("valid base"),
        Some(ExtensionWindow::whole_line()),
    )
    .expect("valid function")
}

/// `Q(z) = z² e^{iθ₀}`, `θ₀ ∈ [0, π]`.
pub fn b_theta(theta0: f64) -> Result<N1Function> {
    if !(0.0..=PI).contains(&theta0) {
        return Err(Error::InvalidFunction(format!("θ₀ = {theta0} is outside [0, π]")));
    }
    let m = NevanlinnaFunction::new(theta0.cos(), 0.0, theta0.sin().max(0.0), SpectralMeasure::empty())?;
    N1Function::new(FactorR::zero_only(origin())?, m, Some(ExtensionWindow::whole_line()))
}

/// `Q(z) = z² ∫_{-1}^{1} dt/(t - z)`.
pub fn b_log() -> N1Function {
    piece_on_unit_interval(0.0, vec![1.0]).expect("valid function")
}

/// `Q(z) = z² (1 + ∫_{-1}^{1} t² dt/(t - z))`.
pub fn c_example() -> N1Function {
    piece_on_unit_interval(1.0, vec![0.0, 0.0, 1.0]).expect("valid function")
}

/// `Q(z) = z² ∫_{-1}^{1} t² dt/(t - z)`.
pub fn d_example() -> N1Function {
    piece_on_unit_interval(0.0, vec![0.0, 0.0, 1.0]).expect("valid function")
}

/// `Q(z) = z² ∫_{-1}^{1} t⁴ dt/(t - z)`.
pub fn e_example() -> N1Function {
    piece_on_unit_interval(0.0, vec![0.0, 0.0, 0.0, 0.0, 1.0]).expect("valid function")
}

/// Looks up a builtin by name, e.g. `D`, `B-theta`, `B-theta:0.785`.
pub fn builtin(name: &str) -> Result<N1Function> {
    let (head, arg) = match name.split_once(':') {
        Some((h, a)) => (h, Some(a)),
        None => (name, None),
    };
    let no_arg = |f: fn() -> N1Function| -> Result<N1Function> {
        match arg {
            None => Ok(f()),
            Some(a) => Err(Error::InvalidFunction(format!(
                "builtin {head} takes no argument (got {a})"
            ))),
        }
    };
    match head {
        "A-simple" => no_arg(a_simple),
        "A-poly" => no_arg(a_poly),
        "B-log" => no_arg(b_log),
        "C" => no_arg(c_example),
        "D" => no_arg(d_example),
        "E" => no_arg(e_example),
        "B-theta" | "Btheta" | "Bθ" => {
            let theta = match arg {
                None => FRAC_PI_2,
                Some(a) => a
                    .trim()
                    .parse::<f64>()
                    .map_err(|_| Error::InvalidFunction(format!("bad θ₀ value {a:?}")))?,
            };
            b_theta(theta)
        }
        _ => Err(Error::InvalidFunction(format!(
            "unknown builtin {name:?}; expected one of {}",
            BUILTIN_NAMES.join(", ")
        ))),
    }
}
