//! Continuation of the generalized zero `α(τ)` of `Q_τ`, i.e. the admissible
//! solution of `Q̃(z) = τ` in the closed upper half-plane, along a schedule of
//! parameters on the circle `ℝ ∪ {∞}`.
//!
//! Two charts cover the circle: `Q̃(z) = τ` for `|τ| ≤ 1` and
//! `-1/Q̃(z) = s` with `s = -1/τ` otherwise. Between schedule points the
//! parameter moves along the angle `φ = atan τ`. Near a real critical point of
//! `Q̃` the Newton predictor is replaced by the local Puiseux expansion, and the
//! crossing is recorded as a contact event.

use std::f64::consts::{FRAC_PI_2, PI};

use num_complex::Complex64;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::jet::Jet;
use crate::moebius::TauParam;
use crate::n1::{CaseReport, LocalCase, N1Function};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Chart {
    /// Solve `Q̃(z) = τ`.
    Finite,
    /// Solve `-1/Q̃(z) = -1/τ`.
    Infinite,
}

impl Chart {
    pub fn for_tau(tau: TauParam) -> Chart {
        match tau {
            TauParam::Finite(t) if t.abs() <= 1.0 => Chart::Finite,
            _ => Chart::Infinite,
        }
    }

    pub fn label(self) -> &'static str {
        match self {
            Chart::Finite => "tau",
            Chart::Infinite => "s",
        }
    }

    /// Coordinate of `tau` in this chart, if finite.
    pub fn coordinate(self, tau: TauParam) -> Option<f64> {
        match self {
            Chart::Finite => tau.finite(),
            Chart::Infinite => tau.chart_s(),
        }
    }

    fn tau_of(self, p: f64) -> TauParam {
        match self {
            Chart::Finite => TauParam::Finite(p),
            Chart::Infinite => TauParam::from_s(p),
        }
    }

    fn jet<const N: usize>(self, q: &N1Function, z: Complex64) -> Result<Jet<N>> {
        match self {
            Chart::Finite => q.jet_extended::<N>(z),
            Chart::Infinite => q.neg_recip_jet::<N>(z),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum PointFlag {
    InUpperHalfPlane,
    OnRealAxis,
}

impl PointFlag {
    pub fn of(z: Complex64) -> PointFlag {
        if z.im.abs() <= 1e-12 * (1.0 + z.norm()) {
            PointFlag::OnRealAxis
        } else {
            PointFlag::InUpperHalfPlane
        }
    }

    pub fn letter(self) -> char {
        match self {
            PointFlag::InUpperHalfPlane => 'U',
            PointFlag::OnRealAxis => 'R',
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct PathSample {
    pub tau: TauParam,
    pub alpha: Complex64,
    pub flag: PointFlag,
    pub chart: Chart,
}

/// Solution at `τ* + offset` close to a contact, used for angle fits.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct FanSample {
    pub offset: f64,
    pub alpha: Complex64,
}

#[derive(Debug, Clone, Serialize)]
pub struct ContactEvent {
    pub tau_star: f64,
    pub z0: f64,
    /// Case seen by the tracker's local model.
    pub case: LocalCase,
    /// `arg Q̃''(z0)` from the tracker's jet, second case only.
    pub theta0: Option<f64>,
    /// Independent analysis from circle derivatives, when it succeeds.
    pub report: Option<CaseReport>,
    pub report_error: Option<String>,
    pub fan: Vec<FanSample>,
}

impl ContactEvent {
    pub fn case(&self) -> LocalCase {
        self.report.as_ref().map_or(self.case, |r| r.case)
    }

    pub fn theta0(&self) -> Option<f64> {
        match &self.report {
            Some(r) => r.theta0,
            None => self.theta0,
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct ZeroPath {
    pub samples: Vec<PathSample>,
    pub events: Vec<ContactEvent>,
    /// Diagnostics such as ties between admissible roots.
    pub notes: Vec<String>,
}

#[derive(Debug, Clone, Copy, Serialize)]
pub struct CurveReport {
    pub max_chordal_step: f64,
    /// `None` when no pair of samples is more than five indices apart.
    pub min_pairwise_separation: Option<f64>,
    pub closure_gap: f64,
}

const NEWTON_BUDGET: usize = 100;
const FAN_POINTS: usize = 25;

/// `τ_k = τ_min + (τ_max - τ_min) k / steps`, `k = 0..=steps`.
pub fn linear_schedule(tau_min: f64, tau_max: f64, steps: usize) -> Vec<TauParam> {
    let steps = steps.max(1);
    (0..=steps)
        .map(|k| {
            if k == steps {
                TauParam::Finite(tau_max)
            } else {
                TauParam::Finite(tau_min + (tau_max - tau_min) * k as f64 / steps as f64)
            }
        })
        .collect()
}

/// The whole circle: `τ = tan φ`, `φ` uniform in `[-π/2, π/2]`, starting and
/// ending at `τ = ∞`.
pub fn full_circle_schedule(steps: usize) -> Vec<TauParam> {
    let steps = steps.max(2);
    (0..=steps)
        .map(|k| {
            let num = 2 * k as i64 - steps as i64;
            if num.unsigned_abs() as usize == steps {
                TauParam::Infinity
            } else {
                TauParam::Finite((PI * num as f64 / (2 * steps) as f64).tan())
            }
        })
        .collect()
}

fn chordal(z: Complex64, w: Complex64) -> f64 {
    2.0 * (z - w).norm() / ((1.0 + z.norm_sqr()) * (1.0 + w.norm_sqr())).sqrt()
}

/// Newton's method on `H(z) = p` with backtracking; returns the root and the
/// number of iterations.
fn newton(q: &N1Function, chart: Chart, p: f64, guess: Complex64) -> Result<(Complex64, usize)> {
    let mut z = guess;
    let mut jet = chart.jet::<2>(q, z)?;
    for it in 1..=NEWTON_BUDGET {
        let f = jet.value() - p;
        if f == Complex64::new(0.0, 0.0) {
            return Ok((z, it - 1));
        }
        let d = jet.derivative(1);
        if d == Complex64::new(0.0, 0.0) || !d.re.is_finite() || !d.im.is_finite() {
            return Err(Error::NoConvergence {
                what: "Newton iteration",
                detail: format!("vanishing derivative at {z}"),
            });
        }
        let step = f / d;
        let mut lambda = 1.0;
        let mut accepted = None;
        for _ in 0..30 {
            let cand = z - step * lambda;
            if let Ok(j) = chart.jet::<2>(q, cand) {
                let fc = j.value() - p;
                if fc.norm() < f.norm() || (step * lambda).norm() <= 1e-13 * (1.0 + z.norm()) {
                    accepted = Some((cand, j));
                    break;
                }
            }
            lambda *= 0.5;
        }
        let Some((cand, j)) = accepted else {
            return Err(Error::NoConvergence {
                what: "Newton iteration",
                detail: format!("line search failed at {z}"),
            });
        };
        let moved = (cand - z).norm();
        z = cand;
        jet = j;
        if z.norm() > 1e10 {
            return Err(Error::NoConvergence {
                what: "Newton iteration",
                detail: "iterates diverge to infinity".into(),
            });
        }
        // Residual at rounding level: further steps only chase noise.
        let floor = 2e-15 * (1.0 + jet.value().norm());
        if moved <= 4e-16 * (1.0 + z.norm())
            || (lambda == 1.0 && moved <= 1e-14 * (1.0 + z.norm()))
            || (jet.value() - p).norm() <= floor
        {
            return Ok((z, it));
        }
    }
    Err(Error::NoConvergence {
        what: "Newton iteration",
        detail: format!("no convergence within {NEWTON_BUDGET} iterations near {z}"),
    })
}

/// Any root of `Q̃(z) = τ` (or `-1/Q̃ = -1/τ`) near `guess`.
pub fn solve_root(q: &N1Function, tau: TauParam, guess: Complex64) -> Result<Complex64> {
    let chart = Chart::for_tau(tau);
    let p = chart.coordinate(tau).expect("chart covers its own parameters");
    newton(q, chart, p, guess).map(|(z, _)| z)
}

fn admissible(q: &N1Function, chart: Chart, z: Complex64) -> Result<()> {
    if z.im < -1e-8 * (1.0 + z.norm()) {
        return Err(Error::NoConvergence {
            what: "GZNT solve",
            detail: format!("converged to {z} below the real axis"),
        });
    }
    if PointFlag::of(z) == PointFlag::OnRealAxis {
        let d = chart.jet::<2>(q, z)?.derivative(1);
        if d.re > 1e-8 * (1.0 + d.norm()) && d.norm() > 1e-8 {
            return Err(Error::NotNonpositiveType { re: z.re, im: z.im });
        }
    }
    Ok(())
}

/// The generalized zero of `Q_τ` near `guess`: a root of `Q̃ = τ` in the
/// closed upper half-plane which, when real, has `Re Q̃' ≤ 0`.
pub fn solve_alpha(q: &N1Function, tau: TauParam, guess: Complex64) -> Result<Complex64> {
    let chart = Chart::for_tau(tau);
    let p = chart.coordinate(tau).expect("chart covers its own parameters");
    let (z, _) = newton(q, chart, p, guess)?;
    admissible(q, chart, z)?;
    Ok(z)
}

/// Multi-start search for `α(τ)`; ties are broken by distance to `hint`.
fn locate_alpha(q: &N1Function, tau: TauParam, hint: Option<Complex64>, notes: &mut Vec<String>) -> Result<Complex64> {
    if tau == TauParam::Finite(0.0) {
        if let Some(a) = q.gznt() {
            return Ok(a);
        }
    }
    let mut guesses: Vec<Complex64> = hint.into_iter().collect();
    for r in [0.05, 0.2, 0.5, 1.0, 2.0, 4.0, 8.0] {
        for k in 1..12 {
            guesses.push(Complex64::from_polar(r, PI * k as f64 / 12.0));
        }
        guesses.push(Complex64::new(r, 0.0));
        guesses.push(Complex64::new(-r, 0.0));
    }
    let mut roots: Vec<Complex64> = Vec::new();
    for g in guesses {
        if let Ok(z) = solve_alpha(q, tau, g) {
            if !roots.iter().any(|r| (r - z).norm() <= 1e-7 * (1.0 + z.norm())) {
                roots.push(z);
            }
        }
    }
    match roots.len() {
        0 => Err(Error::PathLost {
            tau: tau.finite().unwrap_or(f64::INFINITY),
            detail: "no admissible root found for the starting parameter".into(),
        }),
        1 => Ok(roots[0]),
        _ => {
            let anchor = hint.or(q.gznt()).unwrap_or(Complex64::new(0.0, 1.0));
            roots.sort_by(|a, b| (a - anchor).norm().total_cmp(&(b - anchor).norm()));
            notes.push(format!(
                "{} admissible roots at tau = {tau}; kept {} (closest to {anchor})",
                roots.len(),
                roots[0]
            ));
            Ok(roots[0])
        }
    }
}

/// Parameter angle `φ ∈ [-π/2, π/2]` of each schedule point. `∞` takes the
/// sign of its neighbour.
fn schedule_angles(schedule: &[TauParam]) -> Vec<f64> {
    let base: Vec<Option<f64>> = schedule.iter().map(|t| t.finite().map(f64::atan)).collect();
    (0..schedule.len())
        .map(|k| match base[k] {
            Some(a) => a,
            None => {
                let neighbour = base
                    .get(k + 1)
                    .copied()
                    .flatten()
                    .or_else(|| if k > 0 { base[k - 1] } else { None })
                    .unwrap_or(1.0);
                if neighbour < 0.0 {
                    -FRAC_PI_2
                } else {
                    FRAC_PI_2
                }
            }
        })
        .collect()
}

fn tau_at_angle(phi: f64) -> TauParam {
    if phi.abs() >= FRAC_PI_2 {
        TauParam::Infinity
    } else {
        TauParam::Finite(phi.tan())
    }
}

fn angle_of(tau: TauParam, reference: f64) -> f64 {
    match tau {
        TauParam::Finite(t) => t.atan(),
        TauParam::Infinity => FRAC_PI_2.copysign(reference),
    }
}

/// A critical point of the chart function on the real axis with real
/// critical value.
#[derive(Debug, Clone, Copy)]
struct Critical {
    z: Complex64,
    p: f64,
    order: usize,
    /// `H^(order)(z_c) / order!`
    lead: Complex64,
}

fn find_critical(q: &N1Function, chart: Chart, start: Complex64) -> Option<Critical> {
    let mut z = start;
    for _ in 0..120 {
        let j = chart.jet::<4>(q, z).ok()?;
        let (d1, d2) = (j.derivative(1), j.derivative(2));
        if d2 == Complex64::new(0.0, 0.0) {
            break;
        }
        let step = d1 / d2;
        z -= step;
        if !z.re.is_finite() || !z.im.is_finite() {
            return None;
        }
        if step.norm() <= 1e-15 * (1.0 + z.norm()) {
            break;
        }
    }
    let mut j = chart.jet::<4>(q, z).ok()?;
    let mut order = 2;
    if j.derivative(2).norm() <= 1e-6 * j.derivative(3).norm() {
        order = 3;
        for _ in 0..20 {
            let step = j.derivative(2) / j.derivative(3);
            z -= step;
            j = chart.jet::<4>(q, z).ok()?;
            if step.norm() <= 1e-15 * (1.0 + z.norm()) {
                break;
            }
        }
    }
    let scale = 1.0 + z.norm();
    if z.im.abs() > 1e-8 * scale {
        return None;
    }
    let zr = Complex64::new(z.re, 0.0);
    let j = chart.jet::<4>(q, zr).ok()?;
    let value = j.value();
    if value.im.abs() > 1e-8 * (1.0 + value.norm()) {
        return None;
    }
    Some(Critical {
        z: zr,
        p: value.re,
        order,
        lead: j.0[order],
    })
}

/// Root of the local model `lead·w^order = Δ` continuing the path into the
/// closed upper half-plane; among real candidates the one where the model
/// derivative is negative.
fn puiseux_predict(c: &Critical, delta: f64) -> Complex64 {
    let k = c.order as f64;
    let rhs = Complex64::new(delta, 0.0) / c.lead;
    let mag = rhs.norm().powf(1.0 / k);
    let arg = rhs.arg();
    let roots: Vec<Complex64> = (0..c.order)
        .map(|m| Complex64::from_polar(mag, (arg + 2.0 * PI * m as f64) / k))
        .collect();
    let tol = 1e-9 * mag;
    let upper: Vec<&Complex64> = roots.iter().filter(|w| w.im > tol).collect();
    let w = if upper.len() == 1 {
        *upper[0]
    } else {
        *roots
            .iter()
            .filter(|w| w.im >= -tol)
            .min_by(|a, b| {
                let da = (c.lead * a.powf(k - 1.0)).re;
                let db = (c.lead * b.powf(k - 1.0)).re;
                da.total_cmp(&db)
            })
            .unwrap_or(&roots[0])
    };
    c.z + w
}

struct Tracker<'a> {
    q: &'a N1Function,
    z: Complex64,
    tau: TauParam,
    phi: f64,
    h: f64,
    events: Vec<ContactEvent>,
    notes: Vec<String>,
}

impl<'a> Tracker<'a> {
    fn lost(&self, detail: impl Into<String>) -> Error {
        Error::PathLost {
            tau: self.tau.finite().unwrap_or(f64::INFINITY),
            detail: detail.into(),
        }
    }

    fn substep_chart(&self, target: TauParam) -> Chart {
        let preferred = Chart::for_tau(target);
        if preferred.coordinate(self.tau).is_some() && preferred.coordinate(target).is_some() {
            preferred
        } else if preferred == Chart::Finite {
            Chart::Infinite
        } else {
            Chart::Finite
        }
    }

    fn has_event(&self, z0: f64, tau_star: f64) -> bool {
        self.events.iter().any(|e| {
            (e.z0 - z0).abs() <= 1e-6 * (1.0 + z0.abs())
                && (e.tau_star - tau_star).abs() <= 1e-8 * (1.0 + tau_star.abs())
        })
    }

    fn record_event(&mut self, z0: f64, tau_star: f64, case: LocalCase, theta0: Option<f64>, crit: Option<Critical>) {
        if self.has_event(z0, tau_star) {
            return;
        }
        let (report, report_error) = match self.q.local_case_at_level(z0, tau_star) {
            Ok(r) => (Some(r), None),
            Err(e) => (None, Some(e.to_string())),
        };
        let fan = self.fan(z0, tau_star, crit);
        self.events.push(ContactEvent {
            tau_star,
            z0,
            case,
            theta0,
            report,
            report_error,
            fan,
        });
    }

    /// Solutions at `τ* ± 10^{-2-j/4}`, `j = 0..25`.
    fn fan(&self, z0: f64, tau_star: f64, crit: Option<Critical>) -> Vec<FanSample> {
        let chart = Chart::for_tau(TauParam::Finite(tau_star));
        let Some(p_star) = chart.coordinate(TauParam::Finite(tau_star)) else {
            return Vec::new();
        };
        let center = Complex64::new(z0, 0.0);
        let first = chart.jet::<2>(self.q, center).ok();
        let mut out = Vec::new();
        for side in [-1.0, 1.0] {
            for j in 0..FAN_POINTS {
                let delta = 10f64.powf(-2.0 - j as f64 / 4.0);
                let tau = TauParam::Finite(tau_star + side * delta);
                let Some(p) = chart.coordinate(tau) else { continue };
                let guess = match (crit, first) {
                    (Some(c), _) => puiseux_predict(&c, p - p_star),
                    (None, Some(jet)) => {
                        let d1 = jet.derivative(1);
                        let d2 = jet.derivative(2);
                        let w = (p - p_star) / d1;
                        center + w - d2 * w * w / (2.0 * d1)
                    }
                    (None, None) => continue,
                };
                if let Ok((z, _)) = newton(self.q, chart, p, guess) {
                    if admissible(self.q, chart, z).is_ok()
                        && (z - guess).norm() <= 0.5 * (guess - center).norm() + 1e-12
                    {
                        out.push(FanSample {
                            offset: tau.finite().unwrap() - tau_star,
                            alpha: z,
                        });
                    }
                }
            }
        }
        out
    }

    /// Sign of `d(Im α)/dφ`, from `Im(1/H')`.
    fn im_slope(&self, chart: Chart, z: Complex64) -> Option<f64> {
        let d = chart.jet::<2>(self.q, z).ok()?.derivative(1);
        if d == Complex64::new(0.0, 0.0) {
            None
        } else {
            Some(d.inv().im)
        }
    }

    /// Looks for a first-case touch of the real axis between two accepted
    /// points in the upper half-plane where `Im α` turns from decreasing to
    /// increasing.
    fn detect_touch(&mut self, chart: Chart, phi_a: f64, z_a: Complex64, phi_b: f64, z_b: Complex64) {
        let dir = (phi_b - phi_a).signum();
        let (Some(ga), Some(gb)) = (self.im_slope(chart, z_a), self.im_slope(chart, z_b)) else {
            return;
        };
        if !(ga * dir < 0.0 && gb * dir > 0.0) {
            return;
        }
        if z_a.im.min(z_b.im) > (z_b - z_a).norm() {
            return;
        }
        let (mut lo, mut hi) = (phi_a, phi_b);
        let (mut zl, mut zh) = (z_a, z_b);
        let mut best = if z_a.im < z_b.im { z_a } else { z_b };
        for _ in 0..60 {
            let mid = 0.5 * (lo + hi);
            let tau = tau_at_angle(mid);
            let Some(p) = chart.coordinate(tau) else { return };
            let Ok((zm, _)) = newton(self.q, chart, p, 0.5 * (zl + zh)) else {
                return;
            };
            if zm.im < best.im {
                best = zm;
            }
            match self.im_slope(chart, zm) {
                Some(g) if g * dir < 0.0 => {
                    lo = mid;
                    zl = zm;
                }
                Some(_) => {
                    hi = mid;
                    zh = zm;
                }
                None => break,
            }
            if (hi - lo).abs() < 1e-15 {
                break;
            }
        }
        if best.im.abs() <= 1e-9 * (1.0 + best.norm()) {
            let z0 = best.re;
            if let Ok(v) = self.q.eval_extended(Complex64::new(z0, 0.0)) {
                self.record_event(z0, v.re, LocalCase::Case1, None, None);
            }
        }
    }

    /// Continues from the current point to the schedule point `target`.
    fn advance(&mut self, target: TauParam, phi_target: f64) -> Result<Chart> {
        let span = phi_target - self.phi;
        if span == 0.0 {
            return Ok(Chart::for_tau(target));
        }
        let dir = span.signum();
        let mut h = self.h.min(span.abs()).max(span.abs() * 1e-12);
        let mut failures = 0;
        let mut substeps = 0;
        let mut last_chart = Chart::for_tau(target);
        while self.phi != phi_target {
            substeps += 1;
            if substeps > 200_000 {
                return Err(self.lost("substep budget exhausted"));
            }
            let remaining = (phi_target - self.phi).abs();
            let (phi_next, tau_next) = if h >= remaining * (1.0 - 1e-9) {
                (phi_target, target)
            } else {
                let p = self.phi + dir * h;
                (p, tau_at_angle(p))
            };
            let chart = self.substep_chart(tau_next);
            last_chart = chart;
            let (Some(p_cur), Some(p_next)) = (chart.coordinate(self.tau), chart.coordinate(tau_next)) else {
                return Err(self.lost("no chart covers the substep"));
            };
            let jet = chart
                .jet::<4>(self.q, self.z)
                .map_err(|e| self.lost(format!("evaluation failed: {e}")))?;
            let (h1, h2, h3) = (jet.derivative(1), jet.derivative(2), jet.derivative(3));
            let dp = p_next - p_cur;
            let disp = dp.abs() / h1.norm();
            let quad_scale = h1.norm() / h2.norm().max(1e-300);
            let cubic_scale = (2.0 * h1.norm() / h3.norm().max(1e-300)).sqrt();
            let near_critical =
                h1.norm() <= 1e-14 * (1.0 + jet.value().norm()) || disp > 0.2 * quad_scale || disp > 0.2 * cubic_scale;

            let mut crit_used = None;
            let predicted = if near_critical {
                match find_critical(self.q, chart, self.z) {
                    Some(c) if (c.z - self.z).norm() <= 4.0 * disp.max(quad_scale.min(cubic_scale)) + 1e-12 => {
                        let t = (c.p - p_cur) / dp;
                        if t > 1e-9 && t <= 1.0 + 1e-9 {
                            // The critical value lies in this substep: stop there.
                            let tau_c = if t >= 1.0 - 1e-12 { tau_next } else { chart.tau_of(c.p) };
                            let phi_c = if t >= 1.0 - 1e-12 {
                                phi_next
                            } else {
                                angle_of(tau_c, dir)
                            };
                            self.z = c.z;
                            self.tau = tau_c;
                            self.phi = phi_c;
                            if let TauParam::Finite(ts) = tau_c {
                                let (case, theta) = if c.order == 2 {
                                    let th = c.lead.arg();
                                    let th = if th < 0.0 {
                                        if c.lead.re > 0.0 {
                                            0.0
                                        } else {
                                            PI
                                        }
                                    } else {
                                        th
                                    };
                                    (LocalCase::Case2, Some(th))
                                } else {
                                    (LocalCase::Case3, None)
                                };
                                self.record_event(c.z.re, ts, case, theta, Some(c));
                            }
                            failures = 0;
                            continue;
                        }
                        crit_used = Some(c);
                        puiseux_predict(&c, p_next - c.p)
                    }
                    _ => {
                        let w = dp / h1;
                        self.z + w
                    }
                }
            } else {
                let w = dp / h1;
                self.z + w - h2 * w * w / (2.0 * h1)
            };

            let accepted = newton(self.q, chart, p_next, predicted).and_then(|(z, its)| {
                admissible(self.q, chart, z)?;
                let base = match crit_used {
                    Some(c) => (predicted - c.z).norm(),
                    None => (predicted - self.z).norm(),
                };
                if (z - predicted).norm() > 0.5 * base + 1e-11 * (1.0 + z.norm()) {
                    return Err(Error::NoConvergence {
                        what: "corrector",
                        detail: "jumped away from the predicted point".into(),
                    });
                }
                Ok((z, its))
            });
            match accepted {
                Ok((z, its)) => {
                    let (z_prev, phi_prev) = (self.z, self.phi);
                    self.z = z;
                    self.tau = tau_next;
                    self.phi = phi_next;
                    failures = 0;
                    if PointFlag::of(z_prev) == PointFlag::InUpperHalfPlane
                        && PointFlag::of(z) == PointFlag::InUpperHalfPlane
                    {
                        self.detect_touch(chart, phi_prev, z_prev, phi_next, z);
                    } else if PointFlag::of(z_prev) == PointFlag::InUpperHalfPlane
                        && PointFlag::of(z) == PointFlag::OnRealAxis
                        && crit_used.is_none()
                        && !near_critical
                    {
                        if let TauParam::Finite(ts) = tau_next {
                            self.record_event(z.re, ts, LocalCase::Case1, None, None);
                        }
                    }
                    if its <= 3 {
                        h = (2.0 * h).min(0.05);
                    } else if its > 8 {
                        h *= 0.5;
                    }
                }
                Err(_) => {
                    failures += 1;
                    if failures > 3 {
                        return Err(self.lost("corrector failed on three consecutive halvings"));
                    }
                    h *= 0.5;
                }
            }
        }
        self.h = h;
        Ok(last_chart)
    }
}

/// Tracks `α(τ)` over `schedule`; samples sit exactly at the schedule points.
pub fn track_path(q: &N1Function, schedule: &[TauParam]) -> Result<ZeroPath> {
    track_path_from(q, schedule, None)
}

/// As [`track_path`], starting from the root nearest to `guess`.
pub fn track_path_from(q: &N1Function, schedule: &[TauParam], guess: Option<Complex64>) -> Result<ZeroPath> {
    if schedule.is_empty() {
        return Err(Error::Precondition("empty parameter schedule".into()));
    }
    let angles = schedule_angles(schedule);
    let mut notes = Vec::new();
    let start = match guess {
        Some(g) => solve_alpha(q, schedule[0], g).or_else(|_| locate_alpha(q, schedule[0], Some(g), &mut notes))?,
        None => locate_alpha(q, schedule[0], None, &mut notes)?,
    };
    let mut tracker = Tracker {
        q,
        z: start,
        tau: schedule[0],
        phi: angles[0],
        h: 0.05,
        events: Vec::new(),
        notes,
    };
    if let (TauParam::Finite(t0), PointFlag::OnRealAxis) = (schedule[0], PointFlag::of(start)) {
        if let Some(c) = find_critical(q, Chart::for_tau(schedule[0]), start) {
            if (c.z - start).norm() <= 1e-8 * (1.0 + start.norm()) {
                let case = if c.order == 2 {
                    LocalCase::Case2
                } else {
                    LocalCase::Case3
                };
                let theta = (c.order == 2).then(|| c.lead.arg().clamp(0.0, PI));
                tracker.record_event(start.re, t0, case, theta, Some(c));
            }
        }
    }
    let mut samples = vec![PathSample {
        tau: schedule[0],
        alpha: start,
        flag: PointFlag::of(start),
        chart: Chart::for_tau(schedule[0]),
    }];
    for k in 1..schedule.len() {
        tracker.advance(schedule[k], angles[k])?;
        tracker.tau = schedule[k];
        tracker.phi = angles[k];
        let chart = Chart::for_tau(schedule[k]);
        let prev_chart = samples[k - 1].chart;
        if chart != prev_chart {
            // Overlap check: both charts must agree on the root.
            if let Some(p) = prev_chart.coordinate(schedule[k]) {
                if let Ok((w, _)) = newton(q, prev_chart, p, tracker.z) {
                    if (w - tracker.z).norm() > 1e-8 * (1.0 + w.norm()) {
                        return Err(tracker.lost("charts disagree on the overlap"));
                    }
                }
            }
        }
        samples.push(PathSample {
            tau: schedule[k],
            alpha: tracker.z,
            flag: PointFlag::of(tracker.z),
            chart,
        });
    }
    Ok(ZeroPath {
        samples,
        events: tracker.events,
        notes: tracker.notes,
    })
}

/// One-sided limits of `arg(α(τ) - z0)` as `τ → τ*`, from a least-squares
/// line in `|τ - τ*|^{1/q}` (`q` = case number) over `|τ - τ*| ≤ window`.
pub fn contact_angles(path: &ZeroPath, z0: f64, window: f64) -> Result<(f64, f64)> {
    let event = path
        .events
        .iter()
        .filter(|e| (e.z0 - z0).abs() <= 1e-6 * (1.0 + z0.abs()))
        .min_by(|a, b| (a.z0 - z0).abs().total_cmp(&(b.z0 - z0).abs()))
        .ok_or_else(|| Error::InsufficientSamples(format!("no contact event at {z0}")))?;
    let q = event.case().number() as f64;
    let center = Complex64::new(event.z0, 0.0);
    let mut left = Vec::new();
    let mut right = Vec::new();
    let mut push = |offset: f64, alpha: Complex64| {
        if offset == 0.0 || offset.abs() > window {
            return;
        }
        let w = alpha - center;
        if w == Complex64::new(0.0, 0.0) {
            return;
        }
        let mut a = w.arg();
        if a < 0.0 {
            a = if a > -FRAC_PI_2 { 0.0 } else { PI };
        }
        let x = offset.abs().powf(1.0 / q);
        if offset < 0.0 {
            left.push((x, a));
        } else {
            right.push((x, a));
        }
    };
    for s in &path.samples {
        if let TauParam::Finite(t) = s.tau {
            push(t - event.tau_star, s.alpha);
        }
    }
    for f in &event.fan {
        push(f.offset, f.alpha);
    }
    let fit = |pts: &Vec<(f64, f64)>, side: &str| -> Result<f64> {
        if pts.len() < 3 {
            return Err(Error::InsufficientSamples(format!(
                "{} samples on the {side} of the contact within {window:e}",
                pts.len()
            )));
        }
        let n = pts.len() as f64;
        let mx = pts.iter().map(|p| p.0).sum::<f64>() / n;
        let my = pts.iter().map(|p| p.1).sum::<f64>() / n;
        let sxx: f64 = pts.iter().map(|p| (p.0 - mx).powi(2)).sum();
        let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
        let slope = if sxx > 0.0 { sxy / sxx } else { 0.0 };
        Ok((my - slope * mx).clamp(0.0, PI))
    };
    Ok((fit(&left, "left")?, fit(&right, "right")?))
}

/// Continuity, injectivity and closure of the sampled curve in the chordal
/// metric of the Riemann sphere.
pub fn curve_diagnostics(path: &ZeroPath) -> CurveReport {
    let pts: Vec<Complex64> = path.samples.iter().map(|s| s.alpha).collect();
    let max_chordal_step = pts.windows(2).map(|w| chordal(w[0], w[1])).fold(0.0, f64::max);
    let mut min_sep: Option<f64> = None;
    for i in 0..pts.len() {
        for j in (i + 6)..pts.len() {
            // The closing pair of a full loop is the same point of the curve.
            if i == 0 && j == pts.len() - 1 && path.samples[0].tau == path.samples[j].tau {
                continue;
            }
            let d = chordal(pts[i], pts[j]);
            min_sep = Some(min_sep.map_or(d, |m| m.min(d)));
        }
    }
    let closure_gap = match (pts.first(), pts.last()) {
        (Some(a), Some(b)) => chordal(*a, *b),
        _ => 0.0,
    };
    CurveReport {
        max_chordal_step,
        min_pairwise_separation: min_sep,
        closure_gap,
    }
}
