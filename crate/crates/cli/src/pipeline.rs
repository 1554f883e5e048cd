//! The solve/verify pipeline: build the problem from a configuration, run the
//! continuation solver, verify boundary behaviour along nontangential cones,
//! and emit deterministic artifacts.

use std::f64::consts::PI;
use std::path::Path;

use num_complex::Complex64;

use diskbvp::probe::PdeResidualInput;
use diskbvp::{
    pde_residual, picard_continuation, ComplexField, ConeProbe, Field, HilbertEvaluator,
    HilbertProblem, PoincareEvaluator, PoincareProblem, RealField, SemilinearProblem,
    SemilinearSolution, UnimodularSignal, angular_limit_estimate,
};

use crate::config::{
    discontinuity_angles, parse_chart, parse_coefficient, parse_nonlinearity, parse_signal,
    parse_unimodular, ProblemKind, RunConfig,
};
use crate::report::{
    boundary_csv, fields_csv_complex, fields_csv_real, ErrorBlock, ErrorReport, ProbeRow,
    ReportJson,
};
use crate::PipelineError;

const TAU: f64 = 2.0 * PI;

/// Deterministic artifact bundle of one pipeline run.
#[derive(Debug, Clone)]
pub struct PipelineArtifacts {
    pub report: ReportJson,
    pub fields_csv: String,
    pub boundary_csv: String,
}

impl PipelineArtifacts {
    pub fn report_json(&self) -> String {
        self.report.to_json()
    }

    pub fn write_to(&self, dir: &Path) -> Result<(), PipelineError> {
        std::fs::create_dir_all(dir)?;
        std::fs::write(dir.join("report.json"), self.report_json())?;
        std::fs::write(dir.join("fields.csv"), &self.fields_csv)?;
        std::fs::write(dir.join("boundary.csv"), &self.boundary_csv)?;
        Ok(())
    }
}

/// Write a machine-readable error block for a failed run.
pub fn write_error_report(dir: &Path, err: &PipelineError) -> std::io::Result<()> {
    std::fs::create_dir_all(dir)?;
    let block = ErrorReport {
        error: ErrorBlock {
            code: err.exit_code(),
            message: err.to_string(),
        },
    };
    let mut s = serde_json::to_string_pretty(&block).expect("error block serializes");
    s.push('\n');
    std::fs::write(dir.join("report.json"), s)
}

/// Evaluate the configured boundary-data function at an arbitrary angle.
fn signal_value(spec: &str, theta: f64) -> Result<f64, PipelineError> {
    // sample the grammar on a two-point grid positioned so that one node
    // lands exactly on theta — cheaper: re-parse and evaluate analytically
    let (name, args): (&str, Vec<&str>) = {
        let mut parts = spec.split(':');
        (parts.next().unwrap_or(""), parts.collect())
    };
    let num = |s: &str| -> Result<f64, PipelineError> {
        s.parse::<f64>()
            .map_err(|_| PipelineError::config(format!("invalid number in '{spec}'")))
    };
    match name {
        "const" => num(args.first().unwrap_or(&"0")),
        "coskt" => Ok((num(args.first().unwrap_or(&"1"))? * theta).cos()),
        "sinkt" => Ok((num(args.first().unwrap_or(&"1"))? * theta).sin()),
        "step" => {
            let a = num(args.first().ok_or_else(|| PipelineError::config("step"))?)?;
            let b = num(args.get(1).ok_or_else(|| PipelineError::config("step"))?)?;
            Ok(if theta.rem_euclid(TAU) < PI { a } else { b })
        }
        "scaled" => {
            let factor = num(args.first().ok_or_else(|| PipelineError::config("scaled"))?)?;
            Ok(factor * signal_value(&args[1..].join(":"), theta)?)
        }
        _ => Err(PipelineError::config(format!("unknown signal '{spec}'"))),
    }
}

fn unimodular_value(spec: &str, theta: f64) -> Result<Complex64, PipelineError> {
    let sampled = parse_unimodular(spec, 4)?;
    let _ = sampled; // grammar check
    let (name, args): (&str, Vec<&str>) = {
        let mut parts = spec.split(':');
        (parts.next().unwrap_or(""), parts.collect())
    };
    let num = |s: &str| -> Result<f64, PipelineError> {
        s.parse::<f64>()
            .map_err(|_| PipelineError::config(format!("invalid number in '{spec}'")))
    };
    match name {
        "const" => {
            let parts: Vec<&str> = args.first().unwrap_or(&"1,0").split(',').collect();
            let v = Complex64::new(num(parts[0])?, num(parts[1])?);
            Ok(v / v.norm())
        }
        "winding" => Ok(Complex64::from_polar(1.0, num(args.first().unwrap_or(&"1"))? * theta)),
        "phase-step" => {
            let a = num(args.first().ok_or_else(|| PipelineError::config("phase-step"))?)?;
            let b = num(args.get(1).ok_or_else(|| PipelineError::config("phase-step"))?)?;
            Ok(Complex64::from_polar(
                1.0,
                if theta.rem_euclid(TAU) < PI { a } else { b },
            ))
        }
        "phase-sin" => {
            let a = num(args.first().ok_or_else(|| PipelineError::config("phase-sin"))?)?;
            let k = num(args.get(1).ok_or_else(|| PipelineError::config("phase-sin"))?)?;
            Ok(Complex64::from_polar(1.0, a * (k * theta).sin()))
        }
        "normal" => Ok(Complex64::from_polar(1.0, PI + theta)),
        "rotated-normal" => {
            let angle = num(args.first().unwrap_or(&"0"))?;
            Ok(Complex64::from_polar(1.0, PI + theta + angle))
        }
        _ => Err(PipelineError::config(format!("unknown coefficient '{spec}'"))),
    }
}

/// Probe angles: 64 candidates offset from the data nodes, skipping any
/// within a small arc of a configured data discontinuity.
fn probe_angles(config: &RunConfig) -> Vec<f64> {
    let exclusions = discontinuity_angles(config);
    let guard = 3.0 * TAU / config.grid.n_theta as f64;
    let mut out = Vec::with_capacity(64);
    for m in 0..96 {
        let theta = TAU * (m as f64 + 0.5) / 96.0;
        let near = exclusions.iter().any(|&e| {
            let d = (theta - e).rem_euclid(TAU);
            d.min(TAU - d) < guard
        });
        if !near {
            out.push(theta);
            if out.len() == 64 {
                break;
            }
        }
    }
    out
}

fn probe_for(theta0: f64, r_max: f64) -> ConeProbe {
    let mut distances = Vec::new();
    let cos_aperture = (PI / 6.0).cos();
    let mut d = 1e-1;
    while d >= 1e-4 * (1.0 - 1e-12) {
        if 1.0 - d * cos_aperture + d * d <= r_max {
            distances.push(d);
        }
        d *= 0.1;
    }
    ConeProbe::new(theta0, PI / 6.0, 8, distances).expect("valid probe")
}

/// The continuation solve plus verification for one configuration.
pub fn run_pipeline(config: &RunConfig) -> Result<PipelineArtifacts, PipelineError> {
    let grid = config.build_grid()?;
    let n = config.grid.n_theta;
    let rho = config.coefficient.support_radius;
    let chart = parse_chart(&config.chart.spec)?;
    let nl = parse_nonlinearity(&config.nonlinearity)?;
    let solver_config = config.solver_config()?;
    let phi = parse_signal(&config.data.phi, n)?;
    let coeff_spec = parse_coefficient(&config.coefficient.spec)?;
    let angles = probe_angles(config);

    if config.problem.kind.is_poisson() {
        let nu_spec = config.data.nu.clone().unwrap_or_else(|| "normal".into());
        let nu = if config.problem.kind == ProblemKind::Neumann {
            UnimodularSignal::from_phase(n, |t| PI + t)
        } else {
            parse_unimodular(&nu_spec, n)?
        };
        let problem = PoincareProblem::new(nu, phi, config.closure(), config.singular())
            .map_err(PipelineError::from_core_config)?;
        let coefficient = coeff_spec.real_field(&grid, rho, &chart)?;
        let (solution, report) = picard_continuation(
            SemilinearProblem::Poisson {
                problem: &problem,
                coefficient: &coefficient,
            },
            &nl,
            &solver_config,
        )
        .map_err(PipelineError::from_core_config)?;
        let SemilinearSolution::Poisson { source, solution } = solution else {
            unreachable!("poisson problem returns poisson solution");
        };
        let residual_pde = pde_residual(
            PdeResidualInput::Poisson {
                solution: &solution,
                coefficient: &coefficient,
            },
            &nl,
        )
        .map_err(PipelineError::from_core_config)?;

        // nontangential verification of ∂U/∂ν → φ
        let evaluator =
            PoincareEvaluator::new(&problem, &source).map_err(PipelineError::from_core_config)?;
        let nu_value = |theta: f64| -> Result<Complex64, PipelineError> {
            if config.problem.kind == ProblemKind::Neumann {
                Ok(Complex64::from_polar(1.0, PI + theta))
            } else {
                unimodular_value(&nu_spec, theta)
            }
        };
        let mut probes = Vec::with_capacity(angles.len());
        for &theta0 in &angles {
            let probe = probe_for(theta0, config.grid.r_max);
            let nu0 = nu_value(theta0)?;
            let (estimate, spread) = angular_limit_estimate(&probe, |z| {
                evaluator.derivative_at(z, nu0)
            })
            .map_err(PipelineError::from_core_config)?;
            let target = signal_value(&config.data.phi, theta0)?;
            probes.push(ProbeRow {
                theta: theta0,
                target,
                estimate,
                spread,
                residual: (estimate - target).abs(),
            });
        }

        let solution = if config.output.negate {
            negate_real(&solution)
        } else {
            solution
        };
        let report = ReportJson::from_parts(&report, residual_pde, probes);
        let boundary = boundary_csv(&report.probes);
        Ok(PipelineArtifacts {
            report,
            fields_csv: fields_csv_real(&solution),
            boundary_csv: boundary,
        })
    } else {
        let lambda_spec = config
            .data
            .lambda
            .clone()
            .unwrap_or_else(|| "const:1,0".into());
        let lambda = if config.problem.kind == ProblemKind::Dirichlet {
            UnimodularSignal::constant(n, Complex64::new(1.0, 0.0))
                .map_err(PipelineError::from_core_config)?
        } else {
            parse_unimodular(&lambda_spec, n)?
        };
        let problem = HilbertProblem::new(lambda, phi, config.closure(), config.singular())
            .map_err(PipelineError::from_core_config)?;
        let coefficient = coeff_spec.complex_field(&grid, rho, &chart)?;
        let (solution, report) = picard_continuation(
            SemilinearProblem::Vekua {
                problem: &problem,
                coefficient: &coefficient,
            },
            &nl,
            &solver_config,
        )
        .map_err(PipelineError::from_core_config)?;
        let SemilinearSolution::Vekua { source, solution } = solution else {
            unreachable!("vekua problem returns vekua solution");
        };
        let residual_pde = pde_residual(
            PdeResidualInput::Vekua {
                solution: &solution,
                coefficient: &coefficient,
            },
            &nl,
        )
        .map_err(PipelineError::from_core_config)?;

        // nontangential verification of Re{conj(λ) f} → φ
        let evaluator =
            HilbertEvaluator::new(&problem, &source).map_err(PipelineError::from_core_config)?;
        let lambda_value = |theta: f64| -> Result<Complex64, PipelineError> {
            if config.problem.kind == ProblemKind::Dirichlet {
                Ok(Complex64::new(1.0, 0.0))
            } else {
                unimodular_value(&lambda_spec, theta)
            }
        };
        let mut probes = Vec::with_capacity(angles.len());
        for &theta0 in &angles {
            let probe = probe_for(theta0, config.grid.r_max);
            let l0 = lambda_value(theta0)?;
            let (estimate, spread) = angular_limit_estimate(&probe, |z| {
                Ok((l0.conj() * evaluator.eval(z)?).re)
            })
            .map_err(PipelineError::from_core_config)?;
            let target = signal_value(&config.data.phi, theta0)?;
            probes.push(ProbeRow {
                theta: theta0,
                target,
                estimate,
                spread,
                residual: (estimate - target).abs(),
            });
        }

        let report = ReportJson::from_parts(&report, residual_pde, probes);
        let boundary = boundary_csv(&report.probes);
        Ok(PipelineArtifacts {
            report,
            fields_csv: fields_csv_complex(&solution),
            boundary_csv: boundary,
        })
    }
}

fn negate_real(field: &RealField) -> RealField {
    RealField::new(
        field.grid().clone(),
        field.values().iter().map(|v| -v).collect(),
        field.support_radius(),
    )
    .expect("negation preserves support")
}

/// Thresholds applied by `verify`: convergence, interior residual for
/// nontrivial coefficients, and boundary medians for continuous data (probes
/// at configured discontinuities are already excluded).
pub fn verify(config: &RunConfig) -> Result<PipelineArtifacts, PipelineError> {
    let artifacts = run_pipeline(config)?;
    let report = &artifacts.report;
    let fp_gate = (10.0 * config.solver.tol).max(1e-6);
    if !(report.residual_fixed_point <= fp_gate) {
        return Err(PipelineError::Verification(format!(
            "fixed-point residual {:.3e} exceeds {fp_gate:.1e}",
            report.residual_fixed_point
        )));
    }
    let coeff = parse_coefficient(&config.coefficient.spec)?;
    if coeff.amp != 0.0 && !(report.residual_pde < 1e-3) {
        return Err(PipelineError::Verification(format!(
            "pde residual {:.3e} exceeds 1e-3",
            report.residual_pde
        )));
    }
    let phi_smooth = {
        let head = config.data.phi.split(':').next().unwrap_or("");
        matches!(head, "const" | "coskt" | "sinkt")
            || (head == "scaled"
                && matches!(
                    config.data.phi.split(':').nth(1).map(|_| {
                        config.data.phi.split(':').nth(2).unwrap_or("")
                    }),
                    Some("const") | Some("coskt") | Some("sinkt")
                ))
    };
    if phi_smooth && !(report.boundary_residual_median < 5e-3) {
        return Err(PipelineError::Verification(format!(
            "boundary residual median {:.3e} exceeds 5e-3",
            report.boundary_residual_median
        )));
    }
    Ok(artifacts)
}
