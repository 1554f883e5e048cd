//! Assembly of generalized analytic functions with prescribed source and
//! Riemann–Hilbert boundary behaviour.
//!
//! For measurable `λ` (unimodular) and real `φ` on the circle and a source
//! `g` supported in `|z| ≤ ρ < 1`, the assembled field is
//!
//! ```text
//! f = T_g + A · S_Ψ,        Ψ = Φ − Φ_g,
//! ```
//!
//! where `A = e^{ia}` with `a` the analytic completion of `α = arg λ`
//! (so `Re a → α` on the boundary and `β = Im a` is the conjugate function),
//! `Φ` is an antiderivative of `φ e^β`, and `Φ_g` is the explicit
//! antiderivative of `φ_g e^β` built from the boundary trace
//! `φ_g = Re{conj(λ) T_g}` and the θ-derivative of `T_g`.  Then `∂z̄ f = g`
//! and `Re{conj(λ) f}` has angular limit `φ` almost everywhere; both claims
//! are enforced by residual tests, not assumed.
//!
//! The optional singular device adds Cantor-ladder terms that move interior
//! values without changing any almost-everywhere boundary limit, exhibiting
//! the non-uniqueness of the problem.

use alloc::vec::Vec;
use core::f64::consts::PI;

use num_complex::Complex64;
use num_traits::Float;

use crate::boundary::{
    antiderivative, arg_principal, cantor_ladder, harmonic_conjugate, AntiderivativePath, Closure,
    LadderPair, SingularTerm,
};
use crate::circle::{analytic_completion, spectral_cumint, Polynomial, SchwartzEvaluator};
use crate::error::{Error, Result};
use crate::grid::{BoundarySignal, ComplexField, UnimodularSignal};
use crate::transforms::{boundary_theta_derivative, pompeiu_transform};

const TAU: f64 = 2.0 * PI;

/// Configuration of the singular (Cantor ladder) device.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SingularConfig {
    pub depth: u32,
}

/// Relative amplitude of the ladder-pair perturbation added to the data
/// antiderivative when the singular device is enabled.
const PAIR_AMPLITUDE: f64 = 0.25;

/// A Riemann–Hilbert boundary-value problem on the unit circle, with every
/// `g`-independent ingredient precomputed.
#[derive(Debug, Clone)]
pub struct HilbertProblem {
    lambda: UnimodularSignal,
    phi: BoundarySignal,
    closure: Closure,
    singular: Option<SingularConfig>,
    alpha: BoundarySignal,
    beta: BoundarySignal,
    weight: BoundarySignal,
    phi_path: AntiderivativePath,
    lambda_path: AntiderivativePath,
    a_poly: Polynomial,
}

impl HilbertProblem {
    /// Precompute `α`, `β = conj(α)`, the weight `e^β`, the data
    /// antiderivative `Φ` and the coefficient antiderivative `Λ`.
    pub fn new(
        lambda: UnimodularSignal,
        phi: BoundarySignal,
        closure: Closure,
        singular: Option<SingularConfig>,
    ) -> Result<Self> {
        if lambda.len() != phi.len() {
            return Err(Error::LengthMismatch {
                expected: lambda.len(),
                got: phi.len(),
            });
        }
        if !phi.is_real() {
            return Err(Error::NonRealSignal);
        }
        let alpha = arg_principal(&lambda)?;
        let beta = harmonic_conjugate(&alpha)?;
        let weight = BoundarySignal::new(
            beta.values()
                .iter()
                .map(|b| Complex64::new(b.re.exp(), 0.0))
                .collect(),
        );
        let mut phi_path = antiderivative(&phi, &weight, Closure::None)?;
        if let Some(cfg) = singular {
            // Remark-1 style perturbation: a ladder pair with equal endpoints,
            // scaled to the magnitude of the data antiderivative.
            let scale = phi_path
                .base()
                .iter()
                .map(|v| v.norm())
                .fold(0.0, f64::max)
                .max(1.0);
            phi_path = phi_path.with_singular(
                Complex64::new(PAIR_AMPLITUDE * scale, 0.0),
                SingularTerm::Pair(LadderPair::new(cfg.depth)?),
            );
        }
        let conj_lambda = BoundarySignal::new(lambda.values().iter().map(|v| v.conj()).collect());
        let lambda_path = antiderivative(&conj_lambda, &weight, Closure::None)?;
        let a_poly = analytic_completion(&alpha.real_values()?)?;
        Ok(HilbertProblem {
            lambda,
            phi,
            closure,
            singular,
            alpha,
            beta,
            weight,
            phi_path,
            lambda_path,
            a_poly,
        })
    }

    pub fn n_theta(&self) -> usize {
        self.lambda.len()
    }

    pub fn lambda(&self) -> &UnimodularSignal {
        &self.lambda
    }

    pub fn phi(&self) -> &BoundarySignal {
        &self.phi
    }

    pub fn alpha(&self) -> &BoundarySignal {
        &self.alpha
    }

    pub fn beta(&self) -> &BoundarySignal {
        &self.beta
    }

    /// The boundary weight `e^β`.
    pub fn weight(&self) -> &BoundarySignal {
        &self.weight
    }

    pub fn phi_path(&self) -> &AntiderivativePath {
        &self.phi_path
    }

    pub fn lambda_path(&self) -> &AntiderivativePath {
        &self.lambda_path
    }

    pub fn closure(&self) -> Closure {
        self.closure
    }

    pub fn singular(&self) -> Option<SingularConfig> {
        self.singular
    }

    /// The analytic function `a(z)` with `Re a → α` and `Im a(0) = 0`.
    pub fn a_at(&self, z: Complex64) -> Complex64 {
        self.a_poly.eval(z)
    }

    /// The multiplier `A(z) = e^{i a(z)}`.
    pub fn multiplier_at(&self, z: Complex64) -> Complex64 {
        (Complex64::new(0.0, 1.0) * self.a_poly.eval(z)).exp()
    }
}

/// The analytic multiplier `A = e^{ia}` at the given interior points.
pub fn build_analytic_multiplier(
    problem: &HilbertProblem,
    points: &[Complex64],
) -> Result<Vec<Complex64>> {
    points
        .iter()
        .map(|&z| {
            if z.norm() >= 1.0 {
                Err(Error::PointOutsideDomain)
            } else {
                Ok(problem.multiplier_at(z))
            }
        })
        .collect()
}

/// Boundary trace `φ_g(ζ) = Re{conj(λ(ζ)) · T_g(ζ)}` at the circle nodes.
pub fn boundary_trace(problem: &HilbertProblem, g: &ComplexField) -> Result<BoundarySignal> {
    let rho = g.support_radius().ok_or(Error::MissingSupportRadius)?;
    if rho >= 1.0 - 1e-6 {
        return Err(Error::SupportTouchesBoundary);
    }
    let n = problem.n_theta();
    let circle: Vec<Complex64> = (0..n)
        .map(|j| Complex64::from_polar(1.0, TAU * j as f64 / n as f64))
        .collect();
    let trace = pompeiu_transform(g, &circle)?;
    Ok(BoundarySignal::new(
        problem
            .lambda
            .values()
            .iter()
            .zip(trace)
            .map(|(l, t)| Complex64::new((l.conj() * t).re, 0.0))
            .collect(),
    ))
}

/// The explicit antiderivative `Φ_g` of `φ_g e^β`:
///
/// ```text
/// Φ_g(θ) = Re{ Λ(θ) T_g(e^{iθ}) − ∫₀^θ Λ {T_g}_θ dt [+ S(θ)] },
/// S(θ) = C(θ) ∮ Λ {T_g}_θ dt  (only when the singular device is enabled).
/// ```
///
/// `Λ` is the raw (unclosed) antiderivative of `conj(λ) e^β`; its mean ramp
/// is integrated against `{T_g}_θ` exactly by parts so every cumulative
/// integral acts on periodic data.
pub fn source_antiderivative(
    problem: &HilbertProblem,
    g: &ComplexField,
) -> Result<AntiderivativePath> {
    let n = problem.n_theta();
    let phi_g = boundary_trace(problem, g)?;
    let circle: Vec<Complex64> = (0..n)
        .map(|j| Complex64::from_polar(1.0, TAU * j as f64 / n as f64))
        .collect();
    let t_circle = pompeiu_transform(g, &circle)?;
    let thetas: Vec<f64> = (0..n).map(|j| TAU * j as f64 / n as f64).collect();
    let mut d = boundary_theta_derivative(g, &thetas)?;
    // {T_g}_θ integrates to zero over the circle; remove the (tiny) discrete
    // mean so downstream cumulative integrals act on periodic data.
    let mean = d.values().iter().sum::<Complex64>() / n as f64;
    d = BoundarySignal::new(d.values().iter().map(|v| v - mean).collect());

    let lam = problem.lambda_path();
    let ramp = lam.jump() / TAU;
    let h = TAU / n as f64;
    let lam_per: Vec<Complex64> = (0..n)
        .map(|j| lam.base()[j] - ramp * (h * j as f64))
        .collect();

    let prod: Vec<Complex64> = lam_per
        .iter()
        .zip(d.values())
        .map(|(l, dv)| l * dv)
        .collect();
    let k1 = spectral_cumint(&prod)?;
    let e = spectral_cumint(d.values())?;
    let f = spectral_cumint(&e[..n])?;
    // ∫ θ D dθ = θ E(θ) − ∫ E dθ
    let k2: Vec<Complex64> = (0..=n)
        .map(|j| e[j] * (h * j as f64) - f[j])
        .collect();

    let full = k1[n] + ramp * k2[n];
    let mut base = Vec::with_capacity(n + 1);
    for j in 0..=n {
        let t_here = t_circle[j % n];
        let lam_here = lam.base()[j];
        let k_here = k1[j] + ramp * k2[j];
        base.push(Complex64::new((lam_here * t_here - k_here).re, 0.0));
    }

    let derivative = BoundarySignal::new(
        phi_g
            .values()
            .iter()
            .zip(problem.weight.values())
            .map(|(p, w)| p * w)
            .collect(),
    );
    let mut path = AntiderivativePath::from_parts(base, Vec::new(), derivative)?;
    if let Some(cfg) = problem.singular {
        let coeff = Complex64::new(full.re, 0.0);
        path = path.with_singular(coeff, SingularTerm::Ladder(cantor_ladder(cfg.depth)?));
    }
    Ok(path)
}

/// A fully assembled solution `f = T_g + A·S_Ψ`, cheap to evaluate anywhere
/// in the open disk (and on the closed disk for the `T_g` part).
#[derive(Debug, Clone)]
pub struct HilbertEvaluator {
    a_poly: Polynomial,
    s_psi: SchwartzEvaluator,
    source: Option<ComplexField>,
}

impl HilbertEvaluator {
    pub fn new(problem: &HilbertProblem, g: &ComplexField) -> Result<Self> {
        let zero_source = g.values().iter().all(|v| v.norm_sqr() == 0.0);
        let mut psi = if zero_source {
            problem.phi_path().clone()
        } else {
            let phi_g = source_antiderivative(problem, g)?;
            problem
                .phi_path()
                .add_scaled(&phi_g, Complex64::new(-1.0, 0.0))?
        };
        if let Closure::Cantor(depth) = problem.closure {
            psi = psi.closed_with(cantor_ladder(depth)?);
        }
        let s_psi = SchwartzEvaluator::new(&psi.node_values(), psi.jump())?;
        Ok(HilbertEvaluator {
            a_poly: problem.a_poly.clone(),
            s_psi,
            source: if zero_source { None } else { Some(g.clone()) },
        })
    }

    /// The analytic correction `A(z) · S_Ψ(z)` (the full solution when the
    /// source vanishes).
    pub fn analytic_part(&self, z: Complex64) -> Complex64 {
        let a = (Complex64::new(0.0, 1.0) * self.a_poly.eval(z)).exp();
        a * self.s_psi.eval(z)
    }

    /// Evaluate `f` at a batch of points with `|z| < 1` (the source term is
    /// defined on `|z| ≤ 1`).
    pub fn eval_many(&self, points: &[Complex64]) -> Result<Vec<Complex64>> {
        let mut out: Vec<Complex64> = match &self.source {
            Some(g) => pompeiu_transform(g, points)?,
            None => alloc::vec![Complex64::new(0.0, 0.0); points.len()],
        };
        for (v, &z) in out.iter_mut().zip(points) {
            if z.norm() >= 1.0 {
                return Err(Error::PointOutsideDomain);
            }
            *v += self.analytic_part(z);
        }
        Ok(out)
    }

    pub fn eval(&self, z: Complex64) -> Result<Complex64> {
        Ok(self.eval_many(core::slice::from_ref(&z))?[0])
    }
}

/// Assemble `f = T_g + A (S_Φ − S_{Φ_g})` and sample it at `points`.
pub fn assemble_hilbert(
    problem: &HilbertProblem,
    g: &ComplexField,
    points: &[Complex64],
) -> Result<Vec<Complex64>> {
    HilbertEvaluator::new(problem, g)?.eval_many(points)
}
