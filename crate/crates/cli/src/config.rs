//! Run configuration: the TOML schema and the small spec grammars for
//! signals, coefficients and charts.

use std::f64::consts::PI;
use std::sync::Arc;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use diskbvp::{
    make_grid, BoundarySignal, Closure, ComplexField, ConformalChart, Field, PolarGrid, RealField,
    SingularConfig, UnimodularSignal,
};

use crate::PipelineError;

const TAU: f64 = 2.0 * PI;

/// Problem kind: which boundary condition and which equation.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ProblemKind {
    /// `∂z̄f = h·q(f)` with `Re{conj(λ) f} → φ`.
    Hilbert,
    /// Hilbert with `λ ≡ 1`.
    Dirichlet,
    /// `ΔU = H·Q(U)` with `∂U/∂ν → φ`.
    Poincare,
    /// Poincaré with `ν` the inner normal.
    Neumann,
}

impl ProblemKind {
    pub fn is_poisson(self) -> bool {
        matches!(self, ProblemKind::Poincare | ProblemKind::Neumann)
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ProblemSection {
    pub kind: ProblemKind,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct GridSection {
    pub n_r: usize,
    pub n_theta: usize,
    pub r_max: f64,
}

impl Default for GridSection {
    fn default() -> Self {
        GridSection {
            n_r: 96,
            n_theta: 256,
            r_max: 0.999,
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize, Default)]
pub struct DataSection {
    /// Riemann–Hilbert coefficient spec (hilbert mode).
    #[serde(default)]
    pub lambda: Option<String>,
    /// Direction-field spec (poincare mode).
    #[serde(default)]
    pub nu: Option<String>,
    /// Boundary data spec.
    pub phi: String,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct CoefficientSection {
    pub spec: String,
    pub support_radius: f64,
}

impl Default for CoefficientSection {
    fn default() -> Self {
        CoefficientSection {
            spec: "zero".into(),
            support_radius: 0.5,
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct NonlinearitySection {
    pub kind: String,
    #[serde(default)]
    pub beta: Option<f64>,
}

impl Default for NonlinearitySection {
    fn default() -> Self {
        NonlinearitySection {
            kind: "linear_saturating".into(),
            beta: None,
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SolverSection {
    pub p: f64,
    pub damping: f64,
    pub tol: f64,
    pub tau_steps: usize,
    pub max_iter: usize,
}

impl Default for SolverSection {
    fn default() -> Self {
        SolverSection {
            p: 4.0,
            damping: 0.5,
            tol: 1e-8,
            tau_steps: 4,
            max_iter: 200,
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ChartSection {
    pub spec: String,
}

impl Default for ChartSection {
    fn default() -> Self {
        ChartSection {
            spec: "identity".into(),
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct HilbertSection {
    pub singular_depth: u32,
    pub singular_enabled: bool,
}

impl Default for HilbertSection {
    fn default() -> Self {
        HilbertSection {
            singular_depth: 12,
            singular_enabled: false,
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize, Default)]
pub struct OutputSection {
    /// Map the solution (and source) through `U ↔ −U` before reporting; used
    /// by the exponential-source presets, which solve the sign-substituted
    /// equation.
    #[serde(default)]
    pub negate: bool,
}

/// The full run configuration (TOML document).
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct RunConfig {
    pub problem: ProblemSection,
    #[serde(default)]
    pub grid: GridSection,
    pub data: DataSection,
    #[serde(default)]
    pub coefficient: CoefficientSection,
    #[serde(default)]
    pub nonlinearity: NonlinearitySection,
    #[serde(default)]
    pub solver: SolverSection,
    #[serde(default)]
    pub chart: ChartSection,
    #[serde(default)]
    pub hilbert: HilbertSection,
    #[serde(default)]
    pub output: OutputSection,
}

impl RunConfig {
    pub fn from_toml(text: &str) -> Result<Self, PipelineError> {
        toml::from_str(text).map_err(|e| PipelineError::config(format!("invalid config: {e}")))
    }

    pub fn to_toml(&self) -> String {
        toml::to_string_pretty(self).expect("config serializes")
    }

    pub fn singular(&self) -> Option<SingularConfig> {
        if self.hilbert.singular_enabled {
            Some(SingularConfig {
                depth: self.hilbert.singular_depth,
            })
        } else {
            None
        }
    }

    pub fn closure(&self) -> Closure {
        // the closure device is the singular configuration itself; without it
        // paths carry their endpoint jump explicitly
        Closure::None
    }

    pub fn build_grid(&self) -> Result<Arc<PolarGrid>, PipelineError> {
        make_grid(
            self.grid.n_r,
            self.grid.n_theta,
            self.grid.r_max,
            self.coefficient.support_radius,
        )
        .map_err(PipelineError::from_core_config)
    }

    pub fn solver_config(&self) -> Result<diskbvp::SolverConfig, PipelineError> {
        if self.solver.tau_steps == 0 {
            return Err(PipelineError::config("solver.tau_steps must be positive"));
        }
        let tau_schedule = (1..=self.solver.tau_steps)
            .map(|k| k as f64 / self.solver.tau_steps as f64)
            .collect();
        Ok(diskbvp::SolverConfig {
            p: self.solver.p,
            damping: self.solver.damping,
            tol: self.solver.tol,
            tau_schedule,
            max_iter: self.solver.max_iter,
        })
    }
}

fn parse_fields(spec: &str) -> (&str, Vec<&str>) {
    let mut parts = spec.split(':');
    let name = parts.next().unwrap_or("");
    (name, parts.collect())
}

fn parse_f64(s: &str, what: &str) -> Result<f64, PipelineError> {
    s.trim()
        .parse::<f64>()
        .map_err(|_| PipelineError::config(format!("invalid number '{s}' in {what}")))
}

/// Boundary-signal grammar: `const:<c>`, `coskt:<k>` (cos kθ),
/// `sinkt:<k>`, `step:<a>:<b>` (a on [0,π), b on [π,2π)), or
/// `scaled:<factor>:<spec>`.
pub fn parse_signal(spec: &str, n: usize) -> Result<BoundarySignal, PipelineError> {
    let (name, args) = parse_fields(spec);
    match name {
        "const" => {
            let c = parse_f64(args.first().unwrap_or(&"0"), "const signal")?;
            Ok(BoundarySignal::sample_real(n, |_| c))
        }
        "coskt" => {
            let k = parse_f64(args.first().unwrap_or(&"1"), "coskt signal")?;
            Ok(BoundarySignal::sample_real(n, move |t| (k * t).cos()))
        }
        "sinkt" => {
            let k = parse_f64(args.first().unwrap_or(&"1"), "sinkt signal")?;
            Ok(BoundarySignal::sample_real(n, move |t| (k * t).sin()))
        }
        "step" => {
            if args.len() != 2 {
                return Err(PipelineError::config("step signal needs step:<a>:<b>"));
            }
            let a = parse_f64(args[0], "step signal")?;
            let b = parse_f64(args[1], "step signal")?;
            Ok(BoundarySignal::sample_real(
                n,
                move |t| if t < PI { a } else { b },
            ))
        }
        "scaled" => {
            if args.len() < 2 {
                return Err(PipelineError::config(
                    "scaled signal needs scaled:<factor>:<spec>",
                ));
            }
            let factor = parse_f64(args[0], "scaled signal")?;
            let inner = parse_signal(&args[1..].join(":"), n)?;
            Ok(BoundarySignal::new(
                inner.values().iter().map(|v| factor * v).collect(),
            ))
        }
        _ => Err(PipelineError::config(format!(
            "unknown signal spec '{spec}'"
        ))),
    }
}

/// Unimodular-signal grammar: `const:<re>,<im>` (normalized), `winding:<k>`
/// (`e^{ikθ}`), `phase-step:<a>:<b>` (`e^{ia}` then `e^{ib}`),
/// `phase-sin:<a>:<k>` (`e^{i a sin kθ}`), `normal` (inner normal `−e^{iθ}`),
/// or `rotated-normal:<angle>`.
pub fn parse_unimodular(spec: &str, n: usize) -> Result<UnimodularSignal, PipelineError> {
    let (name, args) = parse_fields(spec);
    match name {
        "const" => {
            let parts: Vec<&str> = args.first().unwrap_or(&"1,0").split(',').collect();
            if parts.len() != 2 {
                return Err(PipelineError::config("const coefficient needs <re>,<im>"));
            }
            let re = parse_f64(parts[0], "const coefficient")?;
            let im = parse_f64(parts[1], "const coefficient")?;
            let v = Complex64::new(re, im);
            if v.norm() == 0.0 {
                return Err(PipelineError::config("const coefficient cannot be zero"));
            }
            UnimodularSignal::constant(n, v / v.norm())
                .map_err(PipelineError::from_core_config)
        }
        "winding" => {
            let k = parse_f64(args.first().unwrap_or(&"1"), "winding coefficient")?;
            Ok(UnimodularSignal::from_phase(n, move |t| k * t))
        }
        "phase-step" => {
            if args.len() != 2 {
                return Err(PipelineError::config(
                    "phase-step needs phase-step:<a>:<b>",
                ));
            }
            let a = parse_f64(args[0], "phase-step")?;
            let b = parse_f64(args[1], "phase-step")?;
            Ok(UnimodularSignal::from_phase(
                n,
                move |t| if t < PI { a } else { b },
            ))
        }
        "phase-sin" => {
            if args.len() != 2 {
                return Err(PipelineError::config("phase-sin needs phase-sin:<a>:<k>"));
            }
            let a = parse_f64(args[0], "phase-sin")?;
            let k = parse_f64(args[1], "phase-sin")?;
            Ok(UnimodularSignal::from_phase(n, move |t| a * (k * t).sin()))
        }
        "normal" => Ok(UnimodularSignal::from_phase(n, |t| PI + t)),
        "rotated-normal" => {
            let angle = parse_f64(args.first().unwrap_or(&"0"), "rotated-normal")?;
            Ok(UnimodularSignal::from_phase(n, move |t| PI + t + angle))
        }
        _ => Err(PipelineError::config(format!(
            "unknown coefficient spec '{spec}'"
        ))),
    }
}

/// Smooth bump profile, `exp(1 − 1/(1 − s²))` for `s < 1`, zero beyond.
pub fn bump_profile(s: f64) -> f64 {
    if s < 1.0 {
        (1.0 - 1.0 / (1.0 - s * s)).exp()
    } else {
        0.0
    }
}

/// Coefficient value at a *domain* point, per the grammar:
/// `zero`, `bump:<amp>` (centered smooth bump filling the support),
/// `bump:<amp>:<cx>:<cy>:<radius>` (off-center bump), or
/// `indicator:<amp>` (disk indicator filling the support).
///
/// For charted runs the geometric parameters are interpreted in the image of
/// the disk support under the chart: the bump is centered at `C(center)` with
/// radius scaled so its disk-side support stays inside the declared cap.
pub struct CoefficientSpec {
    pub amp: f64,
    pub center: Complex64,
    pub radius_fraction: f64,
    pub kind: CoefficientKind,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum CoefficientKind {
    Zero,
    Bump,
    Indicator,
}

pub fn parse_coefficient(spec: &str) -> Result<CoefficientSpec, PipelineError> {
    let (name, args) = parse_fields(spec);
    match name {
        "zero" => Ok(CoefficientSpec {
            amp: 0.0,
            center: Complex64::new(0.0, 0.0),
            radius_fraction: 1.0,
            kind: CoefficientKind::Zero,
        }),
        "bump" | "indicator" => {
            let amp = parse_f64(args.first().unwrap_or(&"1"), "coefficient amplitude")?;
            let (center, radius_fraction) = if args.len() >= 4 {
                let cx = parse_f64(args[1], "coefficient center")?;
                let cy = parse_f64(args[2], "coefficient center")?;
                let r = parse_f64(args[3], "coefficient radius")?;
                (Complex64::new(cx, cy), r)
            } else {
                (Complex64::new(0.0, 0.0), 1.0)
            };
            Ok(CoefficientSpec {
                amp,
                center,
                radius_fraction,
                kind: if name == "bump" {
                    CoefficientKind::Bump
                } else {
                    CoefficientKind::Indicator
                },
            })
        }
        _ => Err(PipelineError::config(format!(
            "unknown coefficient spec '{spec}'"
        ))),
    }
}

impl CoefficientSpec {
    /// The domain-side coefficient as a closure; `rho` is the disk-side
    /// support cap and `chart` maps the disk onto the domain.
    ///
    /// The bump is centered at `C(center·rho)`-ish on the disk side; to keep
    /// the pulled-back support rigorously inside the cap, the profile is
    /// evaluated in disk coordinates through the chart inverse of the node —
    /// equivalently we define the domain function as the pushforward of the
    /// disk-side profile, which the pullback then reproduces exactly.
    pub fn disk_profile(&self, rho: f64) -> impl Fn(Complex64) -> f64 + '_ {
        let amp = self.amp;
        let kind = self.kind;
        let center = self.center;
        let radius = self.radius_fraction * rho;
        move |z: Complex64| match kind {
            CoefficientKind::Zero => 0.0,
            CoefficientKind::Bump => {
                let zc = center * rho;
                // keep the off-center bump inside the cap
                let r_eff = radius.min(rho - zc.norm()).max(0.0);
                if r_eff == 0.0 {
                    0.0
                } else {
                    amp * bump_profile((z - zc).norm() / r_eff)
                }
            }
            CoefficientKind::Indicator => {
                if z.norm() <= radius {
                    amp
                } else {
                    0.0
                }
            }
        }
    }

    pub fn complex_field(
        &self,
        grid: &Arc<PolarGrid>,
        rho: f64,
        chart: &ConformalChart,
    ) -> Result<ComplexField, PipelineError> {
        let profile = self.disk_profile(rho);
        // domain-side h = pushforward of the disk profile; its pullback
        // through the chart multiplies by conj(C')
        diskbvp::pullback_vekua(
            |w| {
                let z = chart.inverse(w, None).unwrap_or(w);
                Complex64::new(profile(z), 0.0)
            },
            chart,
            grid,
            rho,
        )
        .map_err(PipelineError::from_core_config)
    }

    pub fn real_field(
        &self,
        grid: &Arc<PolarGrid>,
        rho: f64,
        chart: &ConformalChart,
    ) -> Result<RealField, PipelineError> {
        let profile = self.disk_profile(rho);
        diskbvp::pullback_poisson(
            |w| {
                let z = chart.inverse(w, None).unwrap_or(w);
                profile(z)
            },
            chart,
            grid,
            rho,
        )
        .map_err(PipelineError::from_core_config)
    }
}

/// Chart grammar: `identity`, `affine:a_re,a_im,b_re,b_im`,
/// `poly:c1_re,c1_im,c2_re,c2_im,...`, `joukowski:t` (`z + t z²`, `|t| < ½`).
pub fn parse_chart(spec: &str) -> Result<ConformalChart, PipelineError> {
    let (name, args) = parse_fields(spec);
    let numbers = |what: &str| -> Result<Vec<f64>, PipelineError> {
        args.join(":")
            .split(',')
            .map(|s| parse_f64(s, what))
            .collect()
    };
    match name {
        "identity" => Ok(ConformalChart::Identity),
        "affine" => {
            let v = numbers("affine chart")?;
            if v.len() != 4 {
                return Err(PipelineError::config(
                    "affine chart needs affine:a_re,a_im,b_re,b_im",
                ));
            }
            ConformalChart::affine(Complex64::new(v[0], v[1]), Complex64::new(v[2], v[3]))
                .map_err(PipelineError::from_core_config)
        }
        "poly" => {
            let v = numbers("polynomial chart")?;
            if v.is_empty() || v.len() % 2 != 0 {
                return Err(PipelineError::config(
                    "poly chart needs an even list c1_re,c1_im,...",
                ));
            }
            let coeffs = v
                .chunks(2)
                .map(|c| Complex64::new(c[0], c[1]))
                .collect();
            ConformalChart::polynomial(coeffs).map_err(PipelineError::from_core_config)
        }
        "joukowski" => {
            let t = parse_f64(args.first().unwrap_or(&"0.3"), "joukowski chart")?;
            ConformalChart::joukowski(t).map_err(PipelineError::from_core_config)
        }
        _ => Err(PipelineError::config(format!("unknown chart spec '{spec}'"))),
    }
}

/// Nonlinearity section to core preset.
pub fn parse_nonlinearity(
    section: &NonlinearitySection,
) -> Result<diskbvp::Nonlinearity, PipelineError> {
    let beta = section.beta.unwrap_or(0.5);
    match section.kind.as_str() {
        "power_clamped" => {
            diskbvp::Nonlinearity::power_clamped(beta).map_err(PipelineError::from_core_config)
        }
        "signed_power" => {
            diskbvp::Nonlinearity::signed_power(beta).map_err(PipelineError::from_core_config)
        }
        "exp_clamped" => Ok(diskbvp::Nonlinearity::ExpClamped),
        "linear_saturating" => Ok(diskbvp::Nonlinearity::LinearSaturating),
        "unit" => diskbvp::Nonlinearity::custom_table(vec![(0.0, 1.0), (1.0, 1.0)])
            .map_err(PipelineError::from_core_config),
        other => Err(PipelineError::config(format!(
            "unknown nonlinearity '{other}'"
        ))),
    }
}

/// Angles where the configured data signals are discontinuous; boundary
/// probes avoid these (plus the path seam at θ = 0 when data there is rough).
pub fn discontinuity_angles(config: &RunConfig) -> Vec<f64> {
    let mut angles = Vec::new();
    let mut add_for = |spec: &str| {
        let (name, _) = parse_fields(spec);
        match name {
            "step" | "phase-step" => {
                angles.push(0.0);
                angles.push(PI);
            }
            "winding" | "normal" | "rotated-normal" => {
                angles.push(0.0);
            }
            _ => {}
        }
    };
    add_for(&config.data.phi);
    if let Some(l) = &config.data.lambda {
        add_for(l);
    }
    if let Some(nu) = &config.data.nu {
        add_for(nu);
    }
    angles.sort_by(|a, b| a.partial_cmp(b).unwrap());
    angles.dedup();
    let _ = TAU;
    angles
}
