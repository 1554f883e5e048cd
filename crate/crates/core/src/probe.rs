//! Nontangential boundary probes and PDE residuals.
//!
//! A [`ConeProbe`] samples a field along rays inside a Stolz angle at a
//! boundary point; the angular-limit estimate is the mean over rays at the
//! innermost approach distance and the spread is a Cauchy-type convergence
//! proxy over the last two distances.  PDE residuals compare independent
//! finite-difference derivatives of the sampled solution against the
//! right-hand side on interior nodes with full stencils.

use alloc::vec::Vec;
use core::f64::consts::PI;

use num_complex::Complex64;
use num_traits::Float;

use crate::error::{Error, Result};
use crate::fd;
use crate::grid::{ComplexField, RealField};
use crate::semilinear::Nonlinearity;

/// A Stolz-angle probe at one boundary point.
#[derive(Debug, Clone)]
pub struct ConeProbe {
    pub theta0: f64,
    /// Half-angle of the cone, strictly below π/2.
    pub aperture: f64,
    pub rays: usize,
    /// Approach distances to the boundary, strictly decreasing.
    pub distances: Vec<f64>,
}

impl ConeProbe {
    pub fn new(theta0: f64, aperture: f64, rays: usize, distances: Vec<f64>) -> Result<Self> {
        if !(aperture > 0.0 && aperture < PI / 2.0) {
            return Err(Error::ParameterOutOfRange {
                what: "probe aperture must stay below 90 degrees",
            });
        }
        if rays == 0 || distances.is_empty() {
            return Err(Error::ParameterOutOfRange {
                what: "probe needs at least one ray and one distance",
            });
        }
        if distances.windows(2).any(|w| w[1] >= w[0]) {
            return Err(Error::ParameterOutOfRange {
                what: "probe distances must strictly decrease",
            });
        }
        Ok(ConeProbe {
            theta0,
            aperture,
            rays,
            distances,
        })
    }

    /// Default probe: 30° aperture, 8 rays, geometric distances from 1e-1
    /// down to 1e-4.
    pub fn standard(theta0: f64) -> Self {
        Self::with_min_distance(theta0, 1e-4)
    }

    /// Geometric distances from 1e-1 down to `min_distance` (decades).
    pub fn with_min_distance(theta0: f64, min_distance: f64) -> Self {
        let mut distances = Vec::new();
        let mut d = 1e-1;
        while d > min_distance * (1.0 - 1e-12) {
            distances.push(d);
            d *= 0.1;
        }
        if distances.is_empty() {
            distances.push(min_distance);
        }
        ConeProbe {
            theta0,
            aperture: PI / 6.0,
            rays: 8,
            distances,
        }
    }

    /// Probe points, outermost distance first: `z = ζ (1 − d e^{iψ})` with
    /// ray angles ψ spread over the cone.
    pub fn points(&self) -> Vec<Vec<Complex64>> {
        let zeta = Complex64::from_polar(1.0, self.theta0);
        self.distances
            .iter()
            .map(|&d| {
                (0..self.rays)
                    .map(|k| {
                        let psi = if self.rays == 1 {
                            0.0
                        } else {
                            -self.aperture
                                + 2.0 * self.aperture * k as f64 / (self.rays - 1) as f64
                        };
                        zeta * (Complex64::new(1.0, 0.0)
                            - Complex64::from_polar(d, psi))
                    })
                    .collect()
            })
            .collect()
    }

    /// Error if any probe point leaves the disk of radius `r_max`.
    pub fn validate_within(&self, r_max: f64) -> Result<()> {
        for ring in self.points() {
            for z in ring {
                if z.norm() > r_max {
                    return Err(Error::StencilOutOfRange);
                }
            }
        }
        Ok(())
    }
}

/// Estimate the angular limit of a scalar quantity along the cone.
///
/// Returns `(estimate, spread)`: the mean over rays at the innermost
/// distance, and the max pairwise deviation across rays at the last two
/// distances.
pub fn angular_limit_estimate(
    probe: &ConeProbe,
    mut eval: impl FnMut(Complex64) -> Result<f64>,
) -> Result<(f64, f64)> {
    let rings = probe.points();
    let mut values: Vec<Vec<f64>> = Vec::with_capacity(rings.len());
    for ring in &rings {
        let mut vs = Vec::with_capacity(ring.len());
        for &z in ring {
            vs.push(eval(z)?);
        }
        values.push(vs);
    }
    let innermost = values.last().expect("probe has distances");
    let estimate = innermost.iter().sum::<f64>() / innermost.len() as f64;
    let last_two: Vec<f64> = values
        .iter()
        .rev()
        .take(2)
        .flat_map(|ring| ring.iter().copied())
        .collect();
    let max = last_two.iter().fold(f64::MIN, |a, &b| a.max(b));
    let min = last_two.iter().fold(f64::MAX, |a, &b| a.min(b));
    Ok((estimate, max - min))
}

/// Which equation a residual is measured against.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum PdeMode {
    Vekua,
    Poisson,
}

/// Solution/coefficient pair for [`pde_residual`].
pub enum PdeResidualInput<'a> {
    Vekua {
        solution: &'a ComplexField,
        coefficient: &'a ComplexField,
    },
    Poisson {
        solution: &'a RealField,
        coefficient: &'a RealField,
    },
}

/// Relative L² residual of the semi-linear equation on interior nodes:
/// `‖D(sol) − coeff·q(sol)‖₂ / (‖coeff·q(sol)‖₂ + ε)` with `D` the
/// finite-difference `∂z̄` or `Δ`.
///
/// Interior means full five-point stencils and node radius at most
/// `0.9 · r_max`, keeping the differencing away from both the center
/// clustering and the outer evaluation rim.
pub fn pde_residual(input: PdeResidualInput<'_>, nl: &Nonlinearity) -> Result<f64> {
    match input {
        PdeResidualInput::Vekua {
            solution,
            coefficient,
        } => {
            let grid = solution.grid().clone();
            if grid.n_r < 5 {
                return Err(Error::StencilOutOfRange);
            }
            if coefficient.grid().node_count() != grid.node_count() {
                return Err(Error::LengthMismatch {
                    expected: grid.node_count(),
                    got: coefficient.grid().node_count(),
                });
            }
            let derivative = fd::dbar(solution);
            let rim = 0.9 * grid.r_max;
            let mut num = 0.0;
            let mut den = 0.0;
            for i in fd::radial_interior(grid.n_r) {
                if grid.radii()[i] > rim {
                    continue;
                }
                let w = grid.weight(i, 0);
                for j in 0..grid.n_theta {
                    let idx = grid.index(i, j);
                    let d = match derivative[idx] {
                        Some(v) => v,
                        None => continue,
                    };
                    let rhs = coefficient.values()[idx] * nl.eval_complex(solution.values()[idx]);
                    num += (d - rhs).norm_sqr() * w;
                    den += rhs.norm_sqr() * w;
                }
            }
            let num = num.sqrt();
            let den = den.sqrt();
            Ok(num / (den + 1e-12 * num.max(1.0)))
        }
        PdeResidualInput::Poisson {
            solution,
            coefficient,
        } => {
            let grid = solution.grid().clone();
            if grid.n_r < 5 {
                return Err(Error::StencilOutOfRange);
            }
            if coefficient.grid().node_count() != grid.node_count() {
                return Err(Error::LengthMismatch {
                    expected: grid.node_count(),
                    got: coefficient.grid().node_count(),
                });
            }
            let derivative = fd::laplacian(solution);
            let rim = 0.9 * grid.r_max;
            let mut num = 0.0;
            let mut den = 0.0;
            for i in fd::radial_interior(grid.n_r) {
                if grid.radii()[i] > rim {
                    continue;
                }
                let w = grid.weight(i, 0);
                for j in 0..grid.n_theta {
                    let idx = grid.index(i, j);
                    let d = match derivative[idx] {
                        Some(v) => v,
                        None => continue,
                    };
                    let rhs = coefficient.values()[idx] * nl.eval_real(solution.values()[idx]);
                    num += (d - rhs) * (d - rhs) * w;
                    den += rhs * rhs * w;
                }
            }
            let num = num.sqrt();
            let den = den.sqrt();
            Ok(num / (den + 1e-12 * num.max(1.0)))
        }
    }
}
