//! Angle scans and plot-ready serialization.
//!
//! Output files always carry angles in radians. Coincidence tables are
//! normalized per pair, so a `p_vv` curve peaks at ½ rather than 1.

use std::f64::consts::PI;
use std::io::Write;

use serde::{Deserialize, Serialize};

use crate::chsh::ChshResult;
use crate::error::{Error, Result};
use crate::models::{predict_table, visibility_with_source, ModelKind, Visibility};
use crate::montecarlo::{run_trials_chunked, TrialPlan};
use crate::types::{table_from_counts, Angle, CoincidenceTable, SourceConfig};

/// Exact CSV header line.
pub const CSV_HEADER: &str = "model,theta1_rad,theta2_rad,p_vv,p_vh,p_hv,p_hh,chi";

/// Channel-1 angles of the six reference curves.
pub const FIGURE1_THETA1: [f64; 6] = [
    0.0,
    PI / 8.0,
    3.0 * PI / 16.0,
    PI / 4.0,
    3.0 * PI / 8.0,
    PI / 2.0,
];

pub const DEFAULT_STEPS: usize = 181;

/// A family of `p(θ2)` curves, one per entry of `theta1_list`.
#[derive(Debug, Clone, PartialEq)]
pub struct ScanSpec {
    pub theta1_list: Vec<f64>,
    pub theta2_start: f64,
    pub theta2_end: f64,
    pub steps: usize,
    pub model: ModelKind,
    pub src: SourceConfig<f64>,
}

impl ScanSpec {
    /// The six reference curves over θ2 ∈ [0, π] at one-degree resolution.
    pub fn figure1(model: ModelKind) -> Self {
        ScanSpec {
            theta1_list: FIGURE1_THETA1.to_vec(),
            theta2_start: 0.0,
            theta2_end: PI,
            steps: DEFAULT_STEPS,
            model,
            src: SourceConfig::default(),
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.theta1_list.is_empty() {
            return Err(Error::domain("theta1 list is empty"));
        }
        if let Some(bad) = self.theta1_list.iter().find(|x| !x.is_finite()) {
            return Err(Error::domain(format!("theta1 value {bad} is not finite")));
        }
        if !self.theta2_start.is_finite() || !self.theta2_end.is_finite() {
            return Err(Error::domain("theta2 range must be finite"));
        }
        if self.theta2_end <= self.theta2_start {
            return Err(Error::domain(format!(
                "theta2 range end {} must exceed start {}",
                self.theta2_end, self.theta2_start
            )));
        }
        if self.steps < 2 {
            return Err(Error::domain("a scan needs at least 2 steps"));
        }
        Ok(())
    }

    /// θ2 sample points, both endpoints included.
    pub fn theta2_points(&self) -> Vec<f64> {
        let last = self.steps - 1;
        (0..self.steps)
            .map(|i| {
                if i == last {
                    self.theta2_end
                } else {
                    let t = i as f64 / last as f64;
                    self.theta2_start + (self.theta2_end - self.theta2_start) * t
                }
            })
            .collect()
    }

    fn points(&self) -> impl Iterator<Item = (f64, f64)> + '_ {
        let theta2 = self.theta2_points();
        self.theta1_list
            .iter()
            .flat_map(move |&t1| theta2.clone().into_iter().map(move |t2| (t1, t2)))
    }
}

/// One sample of a scan. Field names double as CSV and JSON column names.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScanRow {
    pub model: String,
    pub theta1_rad: f64,
    pub theta2_rad: f64,
    pub p_vv: f64,
    pub p_vh: f64,
    pub p_hv: f64,
    pub p_hh: f64,
    pub chi: f64,
}

impl ScanRow {
    pub fn new(model: ModelKind, theta1: f64, theta2: f64, table: &CoincidenceTable<f64>) -> Self {
        let [p_vv, p_vh, p_hv, p_hh] = table.cells();
        ScanRow {
            model: model.tag().to_string(),
            theta1_rad: theta1,
            theta2_rad: theta2,
            p_vv,
            p_vh,
            p_hv,
            p_hh,
            chi: table.chi(),
        }
    }
}

/// Analytic scan: rows ordered by `theta1_list`, then θ2 ascending.
pub fn scan(spec: &ScanSpec) -> Result<Vec<ScanRow>> {
    spec.validate()?;
    spec.points()
        .map(|(t1, t2)| {
            let table = predict_table(spec.model, Angle::new(t1)?, Angle::new(t2)?, &spec.src);
            Ok(ScanRow::new(spec.model, t1, t2, &table))
        })
        .collect()
}

/// Simulated counterpart of [`scan`]. Point `k` (in row order) is simulated
/// with seed `seed + k` (wrapping).
pub fn mc_scan(spec: &ScanSpec, trials: u64, seed: u64, chunks: usize) -> Result<Vec<ScanRow>> {
    spec.validate()?;
    spec.points()
        .enumerate()
        .map(|(k, (t1, t2))| {
            let plan = TrialPlan::new(
                trials,
                Angle::new(t1)?,
                Angle::new(t2)?,
                spec.model,
                spec.src,
                seed.wrapping_add(k as u64),
            )?;
            let table = table_from_counts(&run_trials_chunked(&plan, chunks)?)?;
            Ok(ScanRow::new(spec.model, t1, t2, &table))
        })
        .collect()
}

/// Renders `x` with 12 significant digits, trailing zeros removed, switching
/// to exponent notation below 1e-4 or from 1e12 on (C `%.12g`). Negative
/// zero prints as `0`.
pub fn format_real(x: f64) -> String {
    const DIGITS: i32 = 12;
    if x == 0.0 {
        return "0".to_string();
    }
    if x.is_nan() {
        return "NaN".to_string();
    }
    if x.is_infinite() {
        return if x > 0.0 { "inf" } else { "-inf" }.to_string();
    }
    let sci = format!("{:.*e}", (DIGITS - 1) as usize, x);
    let (mantissa, exp) = sci.split_once('e').expect("exponent present");
    let exp: i32 = exp.parse().expect("integer exponent");
    if !(-4..DIGITS).contains(&exp) {
        let m = trim_fraction(mantissa);
        let sign = if exp < 0 { '-' } else { '+' };
        format!("{m}e{sign}{:02}", exp.abs())
    } else {
        let decimals = (DIGITS - 1 - exp) as usize;
        trim_fraction(&format!("{x:.decimals$}")).to_string()
    }
}

fn trim_fraction(s: &str) -> &str {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.')
    } else {
        s
    }
}

/// Writes the CSV header and one line per row, `\n` terminated.
pub fn emit_csv<W: Write>(rows: &[ScanRow], mut out: W) -> Result<()> {
    if rows.is_empty() {
        return Err(Error::domain("no rows to emit"));
    }
    writeln!(out, "{CSV_HEADER}")?;
    for r in rows {
        writeln!(
            out,
            "{},{},{},{},{},{},{},{}",
            r.model,
            format_real(r.theta1_rad),
            format_real(r.theta2_rad),
            format_real(r.p_vv),
            format_real(r.p_vh),
            format_real(r.p_hv),
            format_real(r.p_hh),
            format_real(r.chi),
        )?;
    }
    out.flush()?;
    Ok(())
}

/// Parses CSV produced by [`emit_csv`].
pub fn parse_csv(text: &str) -> Result<Vec<ScanRow>> {
    let mut lines = text.lines();
    match lines.next() {
        Some(h) if h == CSV_HEADER => {}
        other => {
            return Err(Error::domain(format!("unexpected CSV header {other:?}")));
        }
    }
    lines
        .filter(|l| !l.is_empty())
        .map(|line| {
            let fields: Vec<&str> = line.split(',').collect();
            if fields.len() != 8 {
                return Err(Error::domain(format!("expected 8 fields in `{line}`")));
            }
            let num = |i: usize| {
                fields[i]
                    .parse::<f64>()
                    .map_err(|e| Error::domain(format!("field `{}`: {e}", fields[i])))
            };
            Ok(ScanRow {
                model: fields[0].to_string(),
                theta1_rad: num(1)?,
                theta2_rad: num(2)?,
                p_vv: num(3)?,
                p_vh: num(4)?,
                p_hv: num(5)?,
                p_hh: num(6)?,
                chi: num(7)?,
            })
        })
        .collect()
}

/// Run description stored under `"spec"` in JSON output.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReportSpec {
    pub kind: String,
    pub model: String,
    pub theta1_rad: Vec<f64>,
    pub theta2_start_rad: f64,
    pub theta2_end_rad: f64,
    pub steps: usize,
    pub source_axis_rad: f64,
    pub mode_weight: f64,
    /// How tables are normalized; `p_vv` peaks at 0.5.
    pub normalization: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub trials: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
}

impl ReportSpec {
    pub fn analytic(spec: &ScanSpec) -> Self {
        ReportSpec {
            kind: "scan".to_string(),
            model: spec.model.tag().to_string(),
            theta1_rad: spec.theta1_list.clone(),
            theta2_start_rad: spec.theta2_start,
            theta2_end_rad: spec.theta2_end,
            steps: spec.steps,
            source_axis_rad: spec.src.axis().radians(),
            mode_weight: spec.src.mode_weight(),
            normalization: "per-pair probabilities summing to 1".to_string(),
            trials: None,
            seed: None,
        }
    }

    pub fn monte_carlo(spec: &ScanSpec, trials: u64, seed: u64) -> Self {
        ReportSpec {
            kind: "mc".to_string(),
            trials: Some(trials),
            seed: Some(seed),
            ..Self::analytic(spec)
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct JsonReport {
    pub spec: ReportSpec,
    pub rows: Vec<ScanRow>,
}

pub fn emit_json<W: Write>(spec: &ReportSpec, rows: &[ScanRow], mut out: W) -> Result<()> {
    if rows.is_empty() {
        return Err(Error::domain("no rows to emit"));
    }
    let report = JsonReport {
        spec: spec.clone(),
        rows: rows.to_vec(),
    };
    serde_json::to_writer_pretty(&mut out, &report)?;
    writeln!(out)?;
    out.flush()?;
    Ok(())
}

/// Visibility of each `p_vv(θ2)` curve in `rows`, in first-appearance order
/// of `theta1_rad`.
pub fn curve_visibilities(rows: &[ScanRow]) -> Vec<(f64, Visibility<f64>)> {
    let mut curves: Vec<(f64, Vec<f64>)> = Vec::new();
    for r in rows {
        match curves.iter_mut().find(|(t1, _)| *t1 == r.theta1_rad) {
            Some((_, v)) => v.push(r.p_vv),
            None => curves.push((r.theta1_rad, vec![r.p_vv])),
        }
    }
    curves
        .into_iter()
        .map(|(t1, v)| (t1, Visibility::of_samples(&v).expect("non-empty curve")))
        .collect()
}

/// Analytic visibility per channel-1 angle as CSV.
pub fn emit_visibility_csv<W: Write>(
    model: ModelKind,
    theta1_list: &[f64],
    src: &SourceConfig<f64>,
    mut out: W,
) -> Result<()> {
    writeln!(out, "model,theta1_rad,visibility,p_vv_max,p_vv_min,degenerate")?;
    for &t1 in theta1_list {
        let v = visibility_with_source(model, Angle::new(t1)?, src);
        writeln!(
            out,
            "{},{},{},{},{},{}",
            model.tag(),
            format_real(t1),
            format_real(v.value),
            format_real(v.max),
            format_real(v.min),
            v.degenerate
        )?;
    }
    out.flush()?;
    Ok(())
}

/// Plain-text CHSH report, one `key: value` per line.
pub fn format_chsh(result: &ChshResult<f64>) -> String {
    let st = result.settings;
    format!(
        "model: {}\ns: {:.9}\na_rad: {}\na_prime_rad: {}\nb_rad: {}\nb_prime_rad: {}\nexceeds_2: {}\n",
        result.model.tag(),
        result.s,
        format_real(st.a.radians()),
        format_real(st.a_prime.radians()),
        format_real(st.b.radians()),
        format_real(st.b_prime.radians()),
        result.s > crate::chsh::CLASSICAL_BOUND + 1e-9,
    )
}
