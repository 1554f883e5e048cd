//! Generalized harmonic functions with prescribed source and directional
//! boundary derivative.
//!
//! The assembled potential is `U = N_G + γ` with `N_G` the logarithmic
//! potential of the source and
//!
//! ```text
//! γ(z) = Re ∫₀^z  A(ξ) S_Ψ(ξ) dξ,
//! ```
//!
//! the real primitive of the analytic correction of the sub-problem for
//! `g = G/2` with `λ = conj(ν)` (the `T` terms of that sub-problem cancel in
//! the integrand, so the integrand is analytic and the line integral is
//! path-independent).  Then `ΔU = G` and `∂U/∂ν = Re{ν · H*_{G/2}}` has
//! angular limit `φ` almost everywhere; the directional derivative at a point
//! uses the same identity, `∂_z U = H*_{G/2}/2`.

use alloc::vec::Vec;
use core::f64::consts::PI;

use num_complex::Complex64;
use num_traits::Float;

use crate::boundary::Closure;
use crate::error::{Error, Result};
use crate::fd;
use crate::grid::{BoundarySignal, ComplexField, RealField, UnimodularSignal};
use crate::hilbert::{HilbertEvaluator, HilbertProblem, SingularConfig};
use crate::transforms::newtonian_potential;

/// Gauss–Legendre 8-point rule on `[-1, 1]`; the γ-integrand is analytic, so
/// composite panels of this rule integrate it to near machine precision.
const GL8_X: [f64; 8] = [
    -0.960_289_856_497_536_3,
    -0.796_666_477_413_626_7,
    -0.525_532_409_916_329_0,
    -0.183_434_642_495_649_8,
    0.183_434_642_495_649_8,
    0.525_532_409_916_329_0,
    0.796_666_477_413_626_7,
    0.960_289_856_497_536_3,
];
const GL8_W: [f64; 8] = [
    0.101_228_536_290_376_3,
    0.222_381_034_453_374_5,
    0.313_706_645_877_887_3,
    0.362_683_783_378_362_0,
    0.362_683_783_378_362_0,
    0.313_706_645_877_887_3,
    0.222_381_034_453_374_5,
    0.101_228_536_290_376_3,
];

/// A Poincaré problem: direction field `ν`, boundary data `φ`, and the
/// underlying Riemann–Hilbert sub-problem with `λ = conj(ν)`.
#[derive(Debug, Clone)]
pub struct PoincareProblem {
    nu: UnimodularSignal,
    hilbert: HilbertProblem,
}

impl PoincareProblem {
    pub fn new(
        nu: UnimodularSignal,
        phi: BoundarySignal,
        closure: Closure,
        singular: Option<SingularConfig>,
    ) -> Result<Self> {
        let hilbert = HilbertProblem::new(nu.conj(), phi, closure, singular)?;
        Ok(PoincareProblem { nu, hilbert })
    }

    pub fn nu(&self) -> &UnimodularSignal {
        &self.nu
    }

    pub fn hilbert(&self) -> &HilbertProblem {
        &self.hilbert
    }

    pub fn phi(&self) -> &BoundarySignal {
        self.hilbert.phi()
    }

    /// Direction at the boundary node angle `θ_j`.
    pub fn nu_at(&self, j: usize) -> Complex64 {
        self.nu.values()[j]
    }
}

/// The Neumann problem: `ν` is the unit inner normal `n(ζ) = −ζ`.
pub fn neumann_problem(
    phi: &BoundarySignal,
    closure: Closure,
    singular: Option<SingularConfig>,
) -> Result<PoincareProblem> {
    let nu = UnimodularSignal::from_phase(phi.len(), |t| PI + t);
    PoincareProblem::new(nu, phi.clone(), closure, singular)
}

/// An assembled potential, cheap to evaluate anywhere in the open disk.
#[derive(Debug, Clone)]
pub struct PoincareEvaluator {
    hilbert_eval: HilbertEvaluator,
    source: RealField,
}

impl PoincareEvaluator {
    pub fn new(problem: &PoincareProblem, source: &RealField) -> Result<Self> {
        let rho = source.support_radius().ok_or(Error::MissingSupportRadius)?;
        let half = ComplexField::new(
            source.grid().clone(),
            source
                .values()
                .iter()
                .map(|&v| Complex64::new(0.5 * v, 0.0))
                .collect(),
            Some(rho),
        )?;
        let hilbert_eval = HilbertEvaluator::new(problem.hilbert(), &half)?;
        Ok(PoincareEvaluator {
            hilbert_eval,
            source: source.clone(),
        })
    }

    /// The analytic integrand `C(ξ) = H*_{G/2}(ξ) − T_{G/2}(ξ) = A·S_Ψ`.
    pub fn analytic_integrand(&self, z: Complex64) -> Complex64 {
        self.hilbert_eval.analytic_part(z)
    }

    /// Line integral of the analytic integrand along the straight segment
    /// `[z0, z1]`, with composite Gauss–Legendre panels.
    pub fn segment_integral(&self, z0: Complex64, z1: Complex64) -> Complex64 {
        let length = (z1 - z0).norm();
        let panels = (length / 0.05).ceil().max(1.0) as usize;
        let mut acc = Complex64::new(0.0, 0.0);
        for p in 0..panels {
            let a = z0 + (z1 - z0) * (p as f64 / panels as f64);
            let b = z0 + (z1 - z0) * ((p + 1) as f64 / panels as f64);
            let mid = 0.5 * (a + b);
            let halfstep = 0.5 * (b - a);
            let mut panel = Complex64::new(0.0, 0.0);
            for (x, w) in GL8_X.iter().zip(GL8_W.iter()) {
                panel += *w * self.analytic_integrand(mid + halfstep * *x);
            }
            acc += panel * halfstep;
        }
        acc
    }

    /// `γ(z) = Re ∫₀^z C dξ` along the radial segment (γ(0) = 0).
    pub fn gamma_at(&self, z: Complex64) -> f64 {
        self.segment_integral(Complex64::new(0.0, 0.0), z).re
    }

    /// γ at every grid node, sharing segment integrals along each ray.
    pub fn gamma_on_grid(&self) -> RealField {
        let grid = self.source.grid().clone();
        let values = self.gamma_on_layers(grid.n_r);
        RealField::new(grid, values, None).expect("grid-sized values")
    }

    /// γ at the nodes of the first `layers` radial layers (radial-major
    /// order), sharing segment integrals along each ray.
    pub fn gamma_on_layers(&self, layers: usize) -> Vec<f64> {
        let grid = self.source.grid().clone();
        let mut values = alloc::vec![0.0f64; layers * grid.n_theta];
        for j in 0..grid.n_theta {
            let mut acc = Complex64::new(0.0, 0.0);
            let mut prev = Complex64::new(0.0, 0.0);
            for i in 0..layers {
                let z = grid.node(i, j);
                acc += self.segment_integral(prev, z);
                prev = z;
                values[i * grid.n_theta + j] = acc.re;
            }
        }
        values
    }

    /// `U(z) = N_G(z) + γ(z)`.
    pub fn potential_at(&self, z: Complex64) -> Result<f64> {
        let n = newtonian_potential(&self.source, core::slice::from_ref(&z))?;
        Ok(n[0] + self.gamma_at(z))
    }

    /// The potential sampled on the whole grid.
    pub fn potential_on_grid(&self) -> Result<RealField> {
        let grid = self.source.grid().clone();
        let nodes = grid.nodes();
        let n = newtonian_potential(&self.source, &nodes)?;
        let gamma = self.gamma_on_grid();
        let values = n
            .iter()
            .zip(gamma.values())
            .map(|(a, b)| a + b)
            .collect();
        RealField::new(grid, values, None)
    }

    /// Directional derivative `∂U/∂ν (z) = Re{ν · H*_{G/2}(z)}` through the
    /// operator identity `∂_z U = H*_{G/2}/2`.
    pub fn derivative_at(&self, z: Complex64, nu: Complex64) -> Result<f64> {
        let f = self.hilbert_eval.eval(z)?;
        Ok((nu * f).re)
    }
}

/// The harmonic summand `γ` of the potential at the given points.
pub fn build_gamma(
    problem: &PoincareProblem,
    source: &RealField,
    points: &[Complex64],
) -> Result<Vec<f64>> {
    let ev = PoincareEvaluator::new(problem, source)?;
    Ok(points.iter().map(|&z| ev.gamma_at(z)).collect())
}

/// The potential `U = N_G + γ` at the given points.
pub fn assemble_poincare(
    problem: &PoincareProblem,
    source: &RealField,
    points: &[Complex64],
) -> Result<Vec<f64>> {
    let ev = PoincareEvaluator::new(problem, source)?;
    let n = newtonian_potential(source, points)?;
    Ok(points
        .iter()
        .zip(n)
        .map(|(&z, nv)| nv + ev.gamma_at(z))
        .collect())
}

/// Directional derivative of a gridded field by centered finite differences:
/// `∂U/∂ν = 2 Re{ν ∂_z U}` at the grid node nearest to `point`.
pub fn directional_derivative(
    field: &RealField,
    nu: Complex64,
    point: Complex64,
) -> Result<f64> {
    let grid = field.grid().clone();
    let (i, j) = grid.nearest_node_within(point, grid.r_max);
    if !fd::radial_interior(grid.n_r).contains(&i) {
        return Err(Error::StencilOutOfRange);
    }
    let complexified = ComplexField::new(
        grid.clone(),
        field
            .values()
            .iter()
            .map(|&v| Complex64::new(v, 0.0))
            .collect(),
        None,
    )?;
    let dz = fd::dz(&complexified);
    let v = dz[grid.index(i, j)].ok_or(Error::StencilOutOfRange)?;
    Ok(2.0 * (nu * v).re)
}
