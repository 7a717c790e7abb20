use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{anyhow, bail, Context, Result};
use clap::{Parser, Subcommand};
use gznt_core::config::FunctionSpec;
use gznt_core::export::{events_json, fmt_complex, path_csv};
use gznt_core::levelset::{departure_points, trace_im_zero, BoundingBox};
use gznt_core::moebius::TauParam;
use gznt_core::n1::{FactorKind, N1Function};
use gznt_core::tracker::{contact_angles, curve_diagnostics, full_circle_schedule, linear_schedule, track_path};
use gznt_core::{classifier, init_thread_pool, Complex64, Error};
use serde_json::{json, Value};

#[derive(Parser)]
#[command(
    name = "gznt-lab",
    version,
    about = "Zeros of N1 functions and their paths under Möbius perturbation"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Print Q(z).
    Eval {
        /// `builtin:NAME` or a JSON config file.
        #[arg(long)]
        spec: String,
        /// Point as `re,im`.
        #[arg(long, allow_hyphen_values = true)]
        z: String,
        /// Use the continuation across the real axis below it.
        #[arg(long)]
        extended: bool,
    },
    /// Track the zero α(τ) of Q - τ and write CSV plus `<out>.events.json`.
    Track {
        #[arg(long)]
        spec: String,
        #[arg(long, allow_hyphen_values = true, required_unless_present = "full_circle")]
        tau_min: Option<f64>,
        #[arg(long, allow_hyphen_values = true, required_unless_present = "full_circle")]
        tau_max: Option<f64>,
        #[arg(long)]
        steps: usize,
        /// Go once around ℝ ∪ {∞}, starting and ending at τ = ∞.
        #[arg(long)]
        full_circle: bool,
        #[arg(long)]
        out: PathBuf,
    },
    /// Print the class A-E of a real zero and the evidence as JSON.
    Classify {
        #[arg(long)]
        spec: String,
        #[arg(long, allow_hyphen_values = true)]
        alpha: f64,
    },
    /// Trace Im Q = 0 in a box of the closed upper half-plane.
    Levelset {
        #[arg(long)]
        spec: String,
        /// `x0,x1,y0,y1`
        #[arg(long = "box", allow_hyphen_values = true)]
        bbox: String,
        #[arg(long)]
        nx: usize,
        #[arg(long)]
        ny: usize,
        #[arg(long)]
        out: PathBuf,
        #[arg(long)]
        svg: Option<PathBuf>,
    },
    /// Classification, local case, a tracked path through the contact and its angles.
    Report {
        #[arg(long)]
        spec: String,
        /// Write the JSON here instead of standard output.
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

fn load_spec(arg: &str) -> Result<(FunctionSpec, N1Function)> {
    let spec = if let Some(name) = arg.strip_prefix("builtin:") {
        FunctionSpec::Builtin {
            builtin: name.to_string(),
        }
    } else {
        let text = fs::read_to_string(arg).with_context(|| format!("reading {arg}"))?;
        FunctionSpec::from_json(&text)?
    };
    let q = spec.build()?;
    Ok((spec, q))
}

fn parse_list(s: &str, n: usize, what: &str) -> Result<Vec<f64>> {
    let v = s
        .split(',')
        .map(|p| p.trim().parse::<f64>())
        .collect::<std::result::Result<Vec<_>, _>>()
        .map_err(|e| anyhow!("{what} {s:?}: {e}"))?;
    if v.len() != n {
        bail!("{what} {s:?}: expected {n} comma-separated numbers");
    }
    Ok(v)
}

fn events_path(out: &Path) -> PathBuf {
    let stem = out
        .file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_default();
    out.with_file_name(format!("{stem}.events.json"))
}

fn write(path: &Path, text: &str) -> Result<()> {
    fs::write(path, text).with_context(|| format!("writing {}", path.display()))
}

fn run(cli: Cli) -> Result<()> {
    match cli.command {
        Command::Eval { spec, z, extended } => {
            let (_, q) = load_spec(&spec)?;
            let p = parse_list(&z, 2, "point")?;
            let z = Complex64::new(p[0], p[1]);
            let v = if extended { q.eval_extended(z)? } else { q.eval(z)? };
            println!("{}", fmt_complex(v));
        }
        Command::Track {
            spec,
            tau_min,
            tau_max,
            steps,
            full_circle,
            out,
        } => {
            let (_, q) = load_spec(&spec)?;
            let schedule = if full_circle {
                full_circle_schedule(steps)
            } else {
                let (a, b) = (tau_min.expect("required"), tau_max.expect("required"));
                if !(a < b) || steps == 0 {
                    bail!(Error::Precondition(format!(
                        "need tau-min < tau-max and steps > 0, got {a}, {b}, {steps}"
                    )));
                }
                linear_schedule(a, b, steps)
            };
            let path = track_path(&q, &schedule)?;
            write(&out, &path_csv(&path))?;
            write(&events_path(&out), &events_json(&path))?;
            for note in &path.notes {
                eprintln!("note: {note}");
            }
        }
        Command::Classify { spec, alpha } => {
            let (_, q) = load_spec(&spec)?;
            let evidence = classifier::classify(&q, alpha)?;
            println!("{}", evidence.class);
            println!("{}", serde_json::to_string_pretty(&evidence)?);
        }
        Command::Levelset {
            spec,
            bbox,
            nx,
            ny,
            out,
            svg,
        } => {
            let (_, q) = load_spec(&spec)?;
            let b = parse_list(&bbox, 4, "box")?;
            let bbox = BoundingBox::new(b[0], b[1], b[2], b[3])?;
            let set = trace_im_zero(&q, bbox, nx, ny)?;
            write(&out, &set.to_csv())?;
            if let Some(svg) = svg {
                write(&svg, &set.to_svg())?;
            }
            println!("polylines: {}", set.polylines.len());
            println!("departure points: {:?}", departure_points(&set));
        }
        Command::Report { spec, out } => {
            let (spec, q) = load_spec(&spec)?;
            let report = build_report(&spec, &q)?;
            let text = serde_json::to_string_pretty(&report)? + "\n";
            match out {
                Some(p) => write(&p, &text)?,
                None => print!("{text}"),
            }
        }
    }
    Ok(())
}

fn attempt<T: serde::Serialize>(r: gznt_core::Result<T>) -> Value {
    match r {
        Ok(v) => serde_json::to_value(v).unwrap_or(Value::Null),
        Err(e) => json!({ "error": e.to_string() }),
    }
}

fn build_report(spec: &FunctionSpec, q: &N1Function) -> Result<Value> {
    let alpha = q.gznt();
    let real_alpha = alpha.filter(|a| a.im == 0.0).map(|a| a.re);
    let classification = match real_alpha {
        Some(a) if q.factor().kind() == FactorKind::ZeroOnly => attempt(classifier::classify(q, a)),
        _ => Value::Null,
    };
    let local_case = match real_alpha {
        Some(a) => attempt(q.local_case(a)),
        None => Value::Null,
    };
    let (tau_min, tau_max, steps) = (-1.0, 1.0, 400);
    let path = track_path(q, &linear_schedule(tau_min, tau_max, steps))?;
    let events: Vec<Value> = path
        .events
        .iter()
        .map(|e| {
            let angles = match contact_angles(&path, e.z0, 1e-4) {
                Ok((l, r)) => json!({ "left": l, "right": r }),
                Err(err) => json!({ "error": err.to_string() }),
            };
            json!({
                "tau_star": e.tau_star,
                "z0": e.z0,
                "case": e.case().number(),
                "theta0": e.theta0(),
                "angles": angles,
            })
        })
        .collect();
    let alpha_at = |t: TauParam| {
        path.samples
            .iter()
            .find(|s| s.tau == t)
            .map(|s| [s.alpha.re, s.alpha.im])
    };
    Ok(json!({
        "function": spec,
        "explicit": FunctionSpec::describe(q),
        "gznt": alpha.map(|a| [a.re, a.im]),
        "gpnt": q.gpnt().map(|b| [b.re, b.im]),
        "classification": classification,
        "local_case": local_case,
        "track": {
            "tau_min": tau_min,
            "tau_max": tau_max,
            "steps": steps,
            "alpha_start": alpha_at(TauParam::Finite(tau_min)),
            "alpha_end": alpha_at(TauParam::Finite(tau_max)),
            "diagnostics": curve_diagnostics(&path),
            "events": events,
            "notes": path.notes,
        },
    }))
}

fn exit_code(err: &anyhow::Error) -> u8 {
    match err.downcast_ref::<Error>() {
        Some(e) if e.is_numerical() => 3,
        _ => 2,
    }
}

fn main() -> ExitCode {
    if let Ok(n) = std::env::var("GZNT_LAB_THREADS") {
        match n.trim().parse::<usize>() {
            Ok(n) if n > 0 => {
                init_thread_pool(n);
            }
            _ => eprintln!("warning: ignoring GZNT_LAB_THREADS={n:?}"),
        }
    }
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(exit_code(&e))
        }
    }
}
