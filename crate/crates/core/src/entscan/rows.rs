use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::renyi::Variant;
use crate::{Error, Result};

pub const CSV_HEADER: &str =
    "model,param_name,param_value,temp,alpha,variant,e_1_23,e_1_2,e_1_3,m,converged,restarts_used,seed,walltime_ms";

/// One sweep point at one Rényi parameter.
///
/// Float fields are rounded to nine significant digits on construction so
/// that a CSV round trip is exact.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SweepRow {
    pub model: String,
    pub param_name: String,
    pub param_value: f64,
    pub temp: f64,
    pub alpha: f64,
    pub variant: Variant,
    pub e_1_23: f64,
    pub e_1_2: f64,
    pub e_1_3: f64,
    pub m: f64,
    pub converged: bool,
    pub restarts_used: usize,
    pub seed: u64,
    pub walltime_ms: u64,
}

impl SweepRow {
    /// Rounds every float field to what [`format_float`] prints.
    pub fn quantized(mut self) -> Self {
        for v in [
            &mut self.param_value,
            &mut self.temp,
            &mut self.alpha,
            &mut self.e_1_23,
            &mut self.e_1_2,
            &mut self.e_1_3,
            &mut self.m,
        ] {
            *v = quantize(*v);
        }
        self
    }

    pub fn to_csv_line(&self) -> String {
        let f = format_float;
        format!(
            "{},{},{},{},{},{},{},{},{},{},{},{},{},{}",
            self.model,
            self.param_name,
            f(self.param_value),
            f(self.temp),
            f(self.alpha),
            self.variant.short_name(),
            f(self.e_1_23),
            f(self.e_1_2),
            f(self.e_1_3),
            f(self.m),
            self.converged,
            self.restarts_used,
            self.seed,
            self.walltime_ms
        )
    }

    pub fn from_csv_line(line: &str) -> Result<Self> {
        let fields: Vec<&str> = line.trim_end_matches(['\r', '\n']).split(',').collect();
        if fields.len() != 14 {
            return Err(Error::InvalidArgument(format!("CSV row has {} fields, expected 14: {line:?}", fields.len())));
        }
        let bad = |name: &str, v: &str| Error::InvalidArgument(format!("CSV field {name}: cannot parse {v:?}"));
        let float = |i: usize, name: &str| parse_float(fields[i]).ok_or_else(|| bad(name, fields[i]));
        Ok(Self {
            model: fields[0].to_string(),
            param_name: fields[1].to_string(),
            param_value: float(2, "param_value")?,
            temp: float(3, "temp")?,
            alpha: float(4, "alpha")?,
            variant: fields[5].parse().map_err(|_| bad("variant", fields[5]))?,
            e_1_23: float(6, "e_1_23")?,
            e_1_2: float(7, "e_1_2")?,
            e_1_3: float(8, "e_1_3")?,
            m: float(9, "m")?,
            converged: fields[10].parse().map_err(|_| bad("converged", fields[10]))?,
            restarts_used: fields[11].parse().map_err(|_| bad("restarts_used", fields[11]))?,
            seed: fields[12].parse().map_err(|_| bad("seed", fields[12]))?,
            walltime_ms: fields[13].parse().map_err(|_| bad("walltime_ms", fields[13]))?,
        })
    }
}

pub fn to_csv(rows: &[SweepRow]) -> String {
    let mut out = String::with_capacity(64 * (rows.len() + 1));
    out.push_str(CSV_HEADER);
    out.push('\n');
    for r in rows {
        let _ = writeln!(out, "{}", r.to_csv_line());
    }
    out
}

pub fn parse_csv(text: &str) -> Result<Vec<SweepRow>> {
    let mut lines = text.lines();
    match lines.next() {
        Some(h) if h.trim_end() == CSV_HEADER => {}
        other => {
            return Err(Error::InvalidArgument(format!("unexpected CSV header {other:?}")));
        }
    }
    lines.filter(|l| !l.trim().is_empty()).map(SweepRow::from_csv_line).collect()
}

/// `%.9g`: nine significant digits, trailing zeros trimmed, exponent form
/// outside `1e-4 ≤ |x| < 1e9`. Infinities print as `inf` / `-inf`.
pub fn format_float(x: f64) -> String {
    if x.is_nan() {
        return "nan".into();
    }
    if x.is_infinite() {
        return if x > 0.0 { "inf".into() } else { "-inf".into() };
    }
    if x == 0.0 {
        return if x.is_sign_negative() { "-0".into() } else { "0".into() };
    }
    let sci = format!("{x:.8e}");
    let (mantissa, exp) = sci.split_once('e').expect("exponent");
    let exp: i32 = exp.parse().expect("integer exponent");
    if (-4..9).contains(&exp) {
        let decimals = (8 - exp).max(0) as usize;
        trim_zeros(&format!("{x:.decimals$}"))
    } else {
        let m = trim_zeros(mantissa);
        let sign = if exp < 0 { '-' } else { '+' };
        format!("{m}e{sign}{:02}", exp.abs())
    }
}

fn trim_zeros(s: &str) -> String {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.').to_string()
    } else {
        s.to_string()
    }
}

pub fn parse_float(s: &str) -> Option<f64> {
    match s {
        "inf" => Some(f64::INFINITY),
        "-inf" => Some(f64::NEG_INFINITY),
        _ => s.parse().ok(),
    }
}

fn quantize(x: f64) -> f64 {
    parse_float(&format_float(x)).unwrap_or(x)
}
