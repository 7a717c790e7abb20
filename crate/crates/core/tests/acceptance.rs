//! Acceptance checks, one line per criterion. Exits non-zero if any fails.

use std::f64::consts::{FRAC_PI_2, FRAC_PI_4, PI};
use std::process::ExitCode;
use std::time::Instant;

use gznt_core::builtins::{a_poly, a_simple, b_log, b_theta, c_example, d_example, e_example};
use gznt_core::classifier::{classify, ZeroClass};
use gznt_core::kernel::{halton_points, kernel_signature, pick_matrix};
use gznt_core::levelset::{departure_points, trace_im_zero, BoundingBox};
use gznt_core::moebius::{compose_tau, moebius_apply, q_tau, solve_beta, TauParam};
use gznt_core::n1::N1Function;
use gznt_core::nevanlinna::NevanlinnaFunction;
use gznt_core::tracker::{contact_angles, curve_diagnostics, full_circle_schedule, linear_schedule, track_path};
use gznt_core::Complex64;
use proptest::prelude::*;
use proptest::test_runner::{Config, RngAlgorithm, TestRng, TestRunner};

type Check = Result<String, String>;
type Criterion = (&'static str, &'static str, fn() -> Check);

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

fn ensure(ok: bool, msg: String) -> Check {
    if ok {
        Ok(msg)
    } else {
        Err(msg)
    }
}

fn closed_form_trajectory() -> Check {
    let q = a_simple();
    let path = track_path(&q, &linear_schedule(-10.0, 10.0, 2000)).map_err(|e| e.to_string())?;
    let mut worst = 0.0f64;
    for s in &path.samples {
        let t = s.tau.finite().ok_or("infinite parameter in a finite schedule")?;
        let exact = c(-t, t * t) / (t * t + 1.0);
        worst = worst.max((s.alpha - exact).norm());
    }
    ensure(
        path.samples.len() == 2001 && worst <= 1e-8,
        format!("{} samples, max error {worst:.3e}", path.samples.len()),
    )
}

fn closure_and_injectivity() -> Check {
    let q = a_simple();
    let path = track_path(&q, &full_circle_schedule(1000)).map_err(|e| e.to_string())?;
    let d = curve_diagnostics(&path);
    let at_inf = path.samples[0].alpha;
    let sep = d.min_pairwise_separation.unwrap_or(0.0);
    ensure(
        d.closure_gap <= 1e-6 && (at_inf - c(0.0, 1.0)).norm() <= 1e-6 && d.max_chordal_step <= 1e-2 && sep > 0.0,
        format!(
            "alpha(inf) = {at_inf:.3e}, closure {:.2e}, max chordal step {:.2e}, min separation {sep:.2e}",
            d.closure_gap, d.max_chordal_step
        ),
    )
}

fn angles_case_two() -> Check {
    let mut lines = Vec::new();
    let mut ok = true;
    for theta in [FRAC_PI_4, FRAC_PI_2, 3.0 * FRAC_PI_4] {
        let q = b_theta(theta).map_err(|e| e.to_string())?;
        let path = track_path(&q, &linear_schedule(-1.0, 1.0, 200)).map_err(|e| e.to_string())?;
        let (l, r) = contact_angles(&path, 0.0, 1e-4).map_err(|e| e.to_string())?;
        let (el, er) = ((PI - theta) / 2.0, (2.0 * PI - theta) / 2.0);
        let dev = (l - el).abs().max((r - er).abs());
        ok &= dev <= 1e-3;
        lines.push(format!("θ₀={theta:.4}: dev {dev:.1e}"));
    }
    ensure(ok, lines.join(", "))
}

fn angles_case_three() -> Check {
    let mut lines = Vec::new();
    let mut ok = true;
    for (name, q) in [("D", d_example()), ("E", e_example())] {
        let path = track_path(&q, &linear_schedule(-1.0, 1.0, 200)).map_err(|e| e.to_string())?;
        let (l, r) = contact_angles(&path, 0.0, 1e-4).map_err(|e| e.to_string())?;
        let dev = (l - PI / 3.0).abs().max((r - 2.0 * PI / 3.0).abs());
        ok &= dev <= 5e-2;
        lines.push(format!("{name}: ({l:.4}, {r:.4}) dev {dev:.1e}"));
    }
    ensure(ok, lines.join(", "))
}

fn five_builtins() -> [(&'static str, N1Function, ZeroClass); 5] {
    [
        ("A-poly", a_poly(), ZeroClass::A),
        ("B-log", b_log(), ZeroClass::B),
        ("C", c_example(), ZeroClass::C),
        ("D", d_example(), ZeroClass::D),
        ("E", e_example(), ZeroClass::E),
    ]
}

fn classification() -> Check {
    let mut got = Vec::new();
    let mut ok = true;
    for (name, q, expected) in five_builtins() {
        let ev = classify(&q, 0.0).map_err(|e| format!("{name}: {e}"))?;
        ok &= ev.class == expected;
        match expected {
            ZeroClass::C => {
                let g = ev.gamma_alpha.ok_or("no γ for C")?;
                ok &= (g - 1.0).norm() <= 1e-6;
                got.push(format!("γ₀(C)={:.8}", g.re));
            }
            ZeroClass::D => {
                let m = ev.moment2.value().ok_or("moment2(D) diverges")?;
                ok &= (m - 2.0).abs() <= 1e-6;
                got.push(format!("moment2(D)={m:.8}"));
            }
            ZeroClass::E => {
                let m = ev.moment4.value().ok_or("moment4(E) diverges")?;
                ok &= (m - 2.0).abs() <= 1e-6;
                got.push(format!("moment4(E)={m:.8}"));
            }
            _ => {}
        }
        got.push(format!("{name}→{}", ev.class));
    }
    ensure(ok, got.join(" "))
}

fn pairing_law() -> Check {
    let mut got = Vec::new();
    let mut ok = true;
    for (name, q, _) in five_builtins() {
        let class = classify(&q, 0.0).map_err(|e| format!("{name}: {e}"))?.class;
        let case = q.local_case(0.0).map_err(|e| format!("{name}: {e}"))?.case;
        ok &= class.expected_case() == case;
        got.push(format!("{class}↔{}", case.number()));
    }
    ensure(ok, got.join(" "))
}

fn jump_continuity() -> Check {
    let q = b_log();
    let mut worst = 0.0f64;
    for k in 0..50 {
        let x = -0.9 + 1.8 * (k as f64 + 0.5) / 50.0;
        let up = q.eval_extended(c(x, 1e-6)).map_err(|e| e.to_string())?;
        let down = q.eval_extended(c(x, -1e-6)).map_err(|e| e.to_string())?;
        let mid = q.eval_extended(c(x, 0.0)).map_err(|e| e.to_string())?;
        worst = worst.max((up - down).norm() / (1.0 + mid.norm()));
    }
    ensure(worst <= 1e-4, format!("max relative jump {worst:.2e} over 50 points"))
}

fn stieltjes_recovery() -> Check {
    let bases: Vec<(&str, NevanlinnaFunction)> = vec![
        ("A-simple", a_simple().base().clone()),
        ("A-poly", a_poly().base().clone()),
        ("B-theta", b_theta(FRAC_PI_2).map_err(|e| e.to_string())?.base().clone()),
        ("B-log", b_log().base().clone()),
        ("C", c_example().base().clone()),
        ("D", d_example().base().clone()),
        ("E", e_example().base().clone()),
    ];
    let intervals = [(-0.7, -0.2), (-0.3, 0.4), (0.25, 0.9)];
    let eps = NevanlinnaFunction::default_inversion_eps();
    let mut worst = 0.0f64;
    for (name, m) in &bases {
        for &(a, b) in &intervals {
            let got = m
                .stieltjes_invert(a, b, &eps)
                .map_err(|e| format!("{name} [{a},{b}]: {e}"))?;
            worst = worst.max((got.value - m.stored_mass(a, b)).abs());
        }
    }
    ensure(
        worst <= 1e-4,
        format!("max mass error {worst:.2e} over {} intervals", 3 * bases.len()),
    )
}

fn group_law_and_duality() -> Check {
    let q = a_simple();
    let mut runner = TestRunner::new_with_rng(
        Config {
            cases: 200,
            failure_persistence: None,
            ..Config::default()
        },
        TestRng::deterministic_rng(RngAlgorithm::ChaCha),
    );
    let strategy = (-3.0f64..3.0, 0.05f64..3.0, -3.0f64..3.0, -3.0f64..3.0)
        .prop_filter("away from the pole and from τσ = 1", |&(x, y, t, s)| {
            (1.0 - t * s).abs() > 0.1 && (c(x, y) - c(0.0, 1.0)).norm() > 1e-3
        });
    let outcome = runner.run(&strategy, |(x, y, t, s)| {
        let z = c(x, y);
        let twice = moebius_apply(q_tau(&q, TauParam::Finite(t), z).unwrap(), TauParam::Finite(s)).unwrap();
        let once = q_tau(&q, compose_tau(TauParam::Finite(t), s), z).unwrap();
        let r = (twice - once).norm() / (1.0 + once.norm());
        prop_assert!(r <= 1e-10, "residual {r:e}");
        Ok(())
    });
    if let Err(e) = outcome {
        return Err(format!("group law: {e}"));
    }
    let schedule: Vec<TauParam> = [2.0, -0.5, 0.5, -2.0].iter().map(|&t| TauParam::Finite(t)).collect();
    let path = track_path(&q, &schedule).map_err(|e| e.to_string())?;
    let mut duality = 0.0f64;
    for (k, tau) in [-0.5, 2.0, -2.0, 0.5].into_iter().enumerate() {
        let beta = solve_beta(&q, TauParam::Finite(tau), c(0.0, 0.5)).map_err(|e| e.to_string())?;
        let alpha = path.samples[k].alpha;
        duality = duality.max((beta - alpha).norm());
    }
    ensure(
        duality <= 1e-8,
        format!("200 random triples within 1e-10; max |β(τ) - α(-1/τ)| {duality:.1e}"),
    )
}

fn pick_signature() -> Check {
    let pts = halton_points(8, (-2.0, 2.0), (0.1, 2.1));
    let functions: Vec<(&str, N1Function)> = vec![
        ("A-simple", a_simple()),
        ("A-poly", a_poly()),
        ("B-theta", b_theta(FRAC_PI_2).map_err(|e| e.to_string())?),
        ("B-log", b_log()),
        ("C", c_example()),
        ("D", d_example()),
        ("E", e_example()),
    ];
    let mut ok = true;
    let mut counts = Vec::new();
    let mut worst_m = f64::INFINITY;
    for (name, q) in &functions {
        let nq = pick_matrix(|z| q.eval(z), &pts).map_err(|e| format!("{name}: {e}"))?;
        let s = kernel_signature(&nq, 1e-9);
        ok &= s.negative == 1;
        counts.push(format!("{name}:{}", s.negative));
        let nm = pick_matrix(|z| q.base().eval(z), &pts).map_err(|e| format!("{name}: {e}"))?;
        let sm = kernel_signature(&nm, 1e-9);
        let rel = sm.min_eigenvalue / sm.norm.max(1e-300);
        ok &= sm.min_eigenvalue >= -1e-9 * sm.norm;
        worst_m = worst_m.min(rel);
    }
    ensure(
        ok,
        format!(
            "negative eigenvalues {}; min M-kernel eigenvalue/norm {worst_m:.1e}",
            counts.join(" ")
        ),
    )
}

fn level_set_fidelity() -> Check {
    let toy = b_theta(FRAC_PI_2).map_err(|e| e.to_string())?;
    let bbox = BoundingBox::new(-2.0, 2.0, 0.0, 2.0).map_err(|e| e.to_string())?;
    let set = trace_im_zero(&toy, bbox, 400, 200).map_err(|e| e.to_string())?;
    let diag = (2.0f64).sqrt() * 0.01;
    let mut ray_dev = 0.0f64;
    for p in set.polylines.iter().flatten() {
        if p.norm() > 2.0 * diag {
            let a = p.arg();
            ray_dev = ray_dev.max((a - FRAC_PI_4).abs().min((a - 3.0 * FRAC_PI_4).abs()));
        }
    }

    let q = b_log();
    let (nx, width) = (600, 6.0);
    let cell = width / nx as f64;
    let bbox = BoundingBox::new(-3.0, 3.0, 0.0, 2.0).map_err(|e| e.to_string())?;
    let set = trace_im_zero(&q, bbox, nx, 200).map_err(|e| e.to_string())?;
    let d = departure_points(&set);
    let left = d.iter().copied().filter(|&x| x < -1.0).collect::<Vec<_>>();
    let right = d.iter().copied().filter(|&x| x > 1.0).collect::<Vec<_>>();
    if left.len() != 1 || right.len() != 1 {
        return Err(format!("ray deviation {ray_dev:.1e}; B-log departures {d:?}"));
    }
    let slope = |x: f64| {
        let h = 1e-5;
        let f = |t: f64| q.eval_extended(c(t, 0.0)).map(|v| v.re).unwrap_or(f64::NAN);
        (f(x + h) - f(x - h)) / (2.0 * h)
    };
    let (mut a, mut b) = (1.0 + 1e-3, 3.0);
    for _ in 0..80 {
        let m = 0.5 * (a + b);
        if slope(a) * slope(m) <= 0.0 {
            b = m
        } else {
            a = m
        }
    }
    let x_c = 0.5 * (a + b);
    let symmetric = (left[0] + right[0]).abs() <= 1e-2;
    let matches = (right[0] - x_c).abs() <= cell;
    ensure(
        ray_dev <= 0.01 && symmetric && matches,
        format!(
            "ray deviation {ray_dev:.1e}; departures ({:.4}, {:.4}), root of Q' on (1,∞) {x_c:.6}, grid cell {cell}; plotted estimate near 1.7 (recorded, not asserted)",
            left[0], right[0]
        ),
    )
}

fn main() -> ExitCode {
    let checks: [Criterion; 11] = [
        ("AC1", "closed-form trajectory", closed_form_trajectory),
        ("AC2", "closure and injectivity", closure_and_injectivity),
        ("AC3", "contact angles, second case", angles_case_two),
        ("AC4", "contact angles, third case", angles_case_three),
        ("AC5", "classification", classification),
        ("AC6", "pairing of class and local case", pairing_law),
        ("AC7", "continuity across the axis", jump_continuity),
        ("AC8", "Stieltjes inversion", stieltjes_recovery),
        ("AC9", "group law and duality", group_law_and_duality),
        ("AC10", "Pick signature", pick_signature),
        ("AC11", "level-set fidelity", level_set_fidelity),
    ];
    let mut failed = 0;
    for (id, title, check) in checks {
        let start = Instant::now();
        let outcome = std::panic::catch_unwind(check).unwrap_or_else(|_| Err("panicked".into()));
        let secs = start.elapsed().as_secs_f64();
        match outcome {
            Ok(msg) => println!("{id} PASS {title}: {msg} [{secs:.2}s]"),
            Err(msg) => {
                failed += 1;
                println!("{id} FAIL {title}: {msg} [{secs:.2}s]");
            }
        }
    }
    println!("acceptance: {} passed, {failed} failed", 11 - failed);
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
