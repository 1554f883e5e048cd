//! Serializable run report and the CSV artifact formats.
//!
//! All formats are deterministic: struct fields serialize in declaration
//! order and every float is printed with fifteen significant digits.

use std::fmt::Write as _;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use diskbvp::{ComplexField, PolarGrid, RealField, SolveReport};

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct BoundMonitorJson {
    pub verdict: String,
    pub flagged: Vec<usize>,
    pub measured_m: f64,
    pub margin: f64,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ProbeRow {
    pub theta: f64,
    pub target: f64,
    pub estimate: f64,
    pub spread: f64,
    pub residual: f64,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ReportJson {
    pub iterations: Vec<usize>,
    pub residual_fixed_point: f64,
    pub residual_pde: f64,
    pub boundary_residual_median: f64,
    pub norm_history: Vec<f64>,
    pub tau_schedule: Vec<f64>,
    pub bound_monitor: BoundMonitorJson,
    pub probes: Vec<ProbeRow>,
}

/// Machine-readable error block written when a pipeline run fails.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ErrorReport {
    pub error: ErrorBlock,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ErrorBlock {
    pub code: i32,
    pub message: String,
}

impl ReportJson {
    pub fn from_parts(
        report: &SolveReport,
        residual_pde: f64,
        probes: Vec<ProbeRow>,
    ) -> Self {
        let residuals: Vec<f64> = probes.iter().map(|p| p.residual).collect();
        ReportJson {
            iterations: report.stage_iterations.clone(),
            residual_fixed_point: report.residual_fixed_point,
            residual_pde,
            boundary_residual_median: median(&residuals),
            norm_history: report.norm_history.clone(),
            tau_schedule: report.tau_schedule.clone(),
            bound_monitor: BoundMonitorJson {
                verdict: report.bound.describe(),
                flagged: report.bound.flagged.clone(),
                measured_m: report.bound.measured_m,
                margin: report.bound.margin,
            },
            probes,
        }
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("report serializes");
        s.push('\n');
        s
    }
}

pub fn median(values: &[f64]) -> f64 {
    if values.is_empty() {
        return 0.0;
    }
    let mut sorted = values.to_vec();
    sorted.sort_by(|a, b| a.partial_cmp(b).expect("finite residuals"));
    let mid = sorted.len() / 2;
    if sorted.len() % 2 == 1 {
        sorted[mid]
    } else {
        0.5 * (sorted[mid - 1] + sorted[mid])
    }
}

fn push_float(out: &mut String, v: f64) {
    // fifteen significant digits, deterministic
    write!(out, "{v:.14e}").expect("write to string");
}

/// Field dump: `r,theta,re_z,im_z,value_re,value_im`, radial-major rows.
pub fn fields_csv_complex(field: &ComplexField) -> String {
    let grid = field.grid();
    let mut out = String::from("r,theta,re_z,im_z,value_re,value_im\n");
    write_rows(&mut out, grid, |i, j| {
        let v = field.value(i, j);
        (v.re, v.im)
    });
    out
}

/// Real-field dump with `value_im = 0`.
pub fn fields_csv_real(field: &RealField) -> String {
    let grid = field.grid();
    let mut out = String::from("r,theta,re_z,im_z,value_re,value_im\n");
    write_rows(&mut out, grid, |i, j| (field.value(i, j), 0.0));
    out
}

fn write_rows(out: &mut String, grid: &PolarGrid, mut value: impl FnMut(usize, usize) -> (f64, f64)) {
    for i in 0..grid.n_r {
        for j in 0..grid.n_theta {
            let z = grid.node(i, j);
            let (re, im) = value(i, j);
            push_float(out, grid.radii()[i]);
            out.push(',');
            push_float(out, grid.thetas()[j]);
            out.push(',');
            push_float(out, z.re);
            out.push(',');
            push_float(out, z.im);
            out.push(',');
            push_float(out, re);
            out.push(',');
            push_float(out, im);
            out.push('\n');
        }
    }
}

/// Boundary-probe table: `theta,target,estimate,spread,residual`.
pub fn boundary_csv(rows: &[ProbeRow]) -> String {
    let mut out = String::from("theta,target,estimate,spread,residual\n");
    for row in rows {
        push_float(&mut out, row.theta);
        out.push(',');
        push_float(&mut out, row.target);
        out.push(',');
        push_float(&mut out, row.estimate);
        out.push(',');
        push_float(&mut out, row.spread);
        out.push(',');
        push_float(&mut out, row.residual);
        out.push('\n');
    }
    out
}

/// Boundary-signal file: `theta,value_re,value_im`.
pub fn signal_csv(values: &[Complex64]) -> String {
    let n = values.len();
    let mut out = String::from("theta,value_re,value_im\n");
    for (j, v) in values.iter().enumerate() {
        push_float(&mut out, 2.0 * std::f64::consts::PI * j as f64 / n as f64);
        out.push(',');
        push_float(&mut out, v.re);
        out.push(',');
        push_float(&mut out, v.im);
        out.push('\n');
    }
    out
}
