//! Text formats for paths, events and complex values.

use std::fmt::Write as _;

use num_complex::Complex64;
use serde::Serialize;

use crate::moebius::TauParam;
use crate::tracker::ZeroPath;

/// 17 significant digits in exponent form; `inf`/`-inf`/`nan` otherwise.
pub fn fmt_f64(x: f64) -> String {
    if x.is_nan() {
        "nan".into()
    } else if x.is_infinite() {
        if x > 0.0 {
            "inf".into()
        } else {
            "-inf".into()
        }
    } else {
        format!("{:.16e}", if x == 0.0 { 0.0 } else { x })
    }
}

fn fmt_tau(t: TauParam) -> String {
    match t {
        TauParam::Finite(v) => fmt_f64(v),
        TauParam::Infinity => "inf".into(),
    }
}

/// `a+bi` with up to 15 significant digits, trailing zeros dropped.
pub fn fmt_complex(z: Complex64) -> String {
    let part = |x: f64| {
        let x = if x == 0.0 { 0.0 } else { x };
        let s = format!("{:.14e}", x);
        let v: f64 = s.parse().expect("formatted float parses");
        format!("{v}")
    };
    let re = part(z.re);
    let im = part(z.im);
    if im.starts_with('-') {
        format!("{re}{im}i")
    } else {
        format!("{re}+{im}i")
    }
}

/// `tau,re_alpha,im_alpha,flag,chart` rows.
pub fn path_csv(path: &ZeroPath) -> String {
    let mut out = String::from("tau,re_alpha,im_alpha,flag,chart\n");
    for s in &path.samples {
        let _ = writeln!(
            out,
            "{},{},{},{},{}",
            fmt_tau(s.tau),
            fmt_f64(s.alpha.re),
            fmt_f64(s.alpha.im),
            s.flag.letter(),
            s.chart.label()
        );
    }
    out
}

#[derive(Serialize)]
struct EventRecord {
    tau_star: f64,
    z0: f64,
    case: u8,
    theta0: Option<f64>,
}

pub fn events_json(path: &ZeroPath) -> String {
    let records: Vec<EventRecord> = path
        .events
        .iter()
        .map(|e| EventRecord {
            tau_star: e.tau_star,
            z0: e.z0,
            case: e.case().number(),
            theta0: e.theta0(),
        })
        .collect();
    let mut s = serde_json::to_string_pretty(&records).expect("events serialize");
    s.push('\n');
    s
}
