//! The integral operators: the Pompeiu area transform `T_g`, its boundary
//! θ-derivative, the Schwarz and Poisson circle integrals, and the
//! logarithmic (Newtonian) potential `N_G`.
//!
//! Area integrals are direct quadrature, `O(points × support nodes)`.  The
//! weak singularities are removed by subtracting the value of the source at
//! the nearest grid node over the whole support disk, whose transform has a
//! closed form; the subtracted quadrature integrand then vanishes at the
//! singular node.  For a constant source (a disk indicator) this evaluates
//! the closed form exactly.

use alloc::vec::Vec;
use core::f64::consts::PI;

use num_complex::Complex64;
use num_traits::Float;

use crate::boundary::AntiderivativePath;
use crate::circle::{harmonic_extension, SchwartzEvaluator};
use crate::error::{Error, Result};
use crate::grid::{BoundarySignal, ComplexField, RealField};

/// Closed-form Pompeiu transform of the indicator of the disk `|w| ≤ rho`:
/// `conj(z)` inside, `rho²/z` outside.
pub fn disk_indicator_transform(rho: f64, z: Complex64) -> Complex64 {
    if z.norm() <= rho {
        z.conj()
    } else {
        rho * rho / z
    }
}

/// Closed-form logarithmic potential of the same indicator:
/// `(|z|² − ρ²)/4 + (ρ²/2) ln ρ` inside, `(ρ²/2) ln |z|` outside.
pub fn disk_indicator_potential(rho: f64, z: Complex64) -> f64 {
    let r = z.norm();
    if r <= rho {
        (r * r - rho * rho) / 4.0 + 0.5 * rho * rho * rho.ln()
    } else {
        0.5 * rho * rho * r.ln()
    }
}

struct SupportNodes {
    positions: Vec<Complex64>,
    weights: Vec<f64>,
    rho: f64,
}

fn collect_support<T: crate::grid::Scalar>(
    field: &crate::grid::Field<T>,
) -> Result<(SupportNodes, Vec<T>)> {
    let rho = field.support_radius().ok_or(Error::MissingSupportRadius)?;
    let grid = field.grid();
    let layers = grid.layers_within(rho);
    let mut positions = Vec::with_capacity(layers * grid.n_theta);
    let mut weights = Vec::with_capacity(layers * grid.n_theta);
    let mut values = Vec::with_capacity(layers * grid.n_theta);
    for i in 0..layers {
        let w = grid.weight(i, 0);
        for j in 0..grid.n_theta {
            positions.push(grid.node(i, j));
            weights.push(w);
            values.push(field.value(i, j));
        }
    }
    Ok((
        SupportNodes {
            positions,
            weights,
            rho,
        },
        values,
    ))
}

/// `T_g(z) = (1/π) ∫ g(w) dm(w) / (z − w)`, the right inverse of `∂z̄` on
/// compactly supported sources.  Valid on all of `|z| ≤ 1`.
pub fn pompeiu_transform(g: &ComplexField, points: &[Complex64]) -> Result<Vec<Complex64>> {
    let (support, values) = collect_support(g)?;
    let grid = g.grid();
    let mut out = Vec::with_capacity(points.len());
    for &z in points {
        if z.norm() > 1.0 + 1e-12 {
            return Err(Error::PointOutsideDomain);
        }
        let (i0, j0) = grid.nearest_node_within(z, support.rho);
        let c = g.value(i0, j0);
        let mut acc = Complex64::new(0.0, 0.0);
        for ((&w, &weight), &gv) in support
            .positions
            .iter()
            .zip(&support.weights)
            .zip(&values)
        {
            let d = z - w;
            if d.norm_sqr() == 0.0 {
                continue; // the subtracted integrand vanishes at the singular node
            }
            acc += (gv - c) * weight / d;
        }
        out.push(acc / PI + c * disk_indicator_transform(support.rho, z));
    }
    Ok(out)
}

/// Boundary θ-derivative of `T_g` on the unit circle:
/// `{T_g}_θ(ζ) = i ζ T_g'(ζ) = (ζ/πi) ∫ g(w) dm(w)/(ζ − w)²`.
///
/// Requires the support to stay away from the circle so the kernel is regular.
pub fn boundary_theta_derivative(g: &ComplexField, thetas: &[f64]) -> Result<BoundarySignal> {
    let (support, values) = collect_support(g)?;
    if support.rho >= 1.0 - 1e-6 {
        return Err(Error::SupportTouchesBoundary);
    }
    let inv_pi_i = Complex64::new(0.0, -1.0 / PI); // 1/(πi)
    let mut out = Vec::with_capacity(thetas.len());
    for &theta in thetas {
        let zeta = Complex64::from_polar(1.0, theta);
        let mut acc = Complex64::new(0.0, 0.0);
        for ((&w, &weight), &gv) in support
            .positions
            .iter()
            .zip(&support.weights)
            .zip(&values)
        {
            let d = zeta - w;
            acc += gv * weight / (d * d);
        }
        out.push(zeta * inv_pi_i * acc);
    }
    Ok(BoundarySignal::new(out))
}

/// Schwarz–Stieltjes integral `S_Φ(z) = (z/π) ∮ Φ(ζ)(ζ − z)^{-2} dζ` of an
/// antiderivative path, through its circle modes (see [`SchwartzEvaluator`]).
pub fn schwartz_integral(path: &AntiderivativePath, points: &[Complex64]) -> Result<Vec<Complex64>> {
    let ev = SchwartzEvaluator::new(&path.node_values(), path.jump())?;
    points
        .iter()
        .map(|&z| {
            if z.norm() >= 1.0 {
                Err(Error::PointOutsideDomain)
            } else {
                Ok(ev.eval(z))
            }
        })
        .collect()
}

/// Poisson integral of a real boundary signal at interior points.
pub fn poisson_integral(phi: &BoundarySignal, points: &[Complex64]) -> Result<Vec<f64>> {
    if !phi.is_real() {
        return Err(Error::NonRealSignal);
    }
    for &z in points {
        if z.norm() >= 1.0 {
            return Err(Error::PointOutsideDomain);
        }
    }
    let u = harmonic_extension(phi.values(), points)?;
    Ok(u.into_iter().map(|v| v.re).collect())
}

/// Logarithmic (Newtonian) potential
/// `N_G(z) = (1/2π) ∫ ln|z − w| G(w) dm(w)`, so that `ΔN_G = G`.
pub fn newtonian_potential(big_g: &RealField, points: &[Complex64]) -> Result<Vec<f64>> {
    let (support, values) = collect_support(big_g)?;
    let grid = big_g.grid();
    let mut out = Vec::with_capacity(points.len());
    for &z in points {
        let (i0, j0) = grid.nearest_node_within(z, support.rho);
        let c = big_g.value(i0, j0);
        let mut acc = 0.0;
        for ((&w, &weight), &gv) in support
            .positions
            .iter()
            .zip(&support.weights)
            .zip(&values)
        {
            let d2 = (z - w).norm_sqr();
            if d2 == 0.0 {
                continue;
            }
            acc += (gv - c) * weight * 0.5 * d2.ln();
        }
        out.push(acc / (2.0 * PI) + c * disk_indicator_potential(support.rho, z));
    }
    Ok(out)
}

/// The constants controlling `T_g` and the source antiderivative on a fixed
/// support: `c_ρ = 3/(1−ρ)²`, `C_ρ = 3π/(1−ρ)²`, Hölder exponent
/// `α = (p−2)/p`, and empirically measured `M₁`, `M₂` for
/// `|T_g| ≤ M₁‖g‖_p` and `|T_g(z₁) − T_g(z₂)| ≤ M₂‖g‖_p |z₁−z₂|^α`.
#[derive(Debug, Clone, Copy)]
pub struct TransformBounds {
    pub m1: f64,
    pub m2: f64,
    pub alpha: f64,
    pub c_rho: f64,
    pub c_rho_cap: f64,
}

impl TransformBounds {
    /// The closed-form constants for a support radius and integrability index.
    pub fn constants(rho: f64, p: f64) -> Result<Self> {
        if !(rho > 0.0 && rho < 1.0) || !(p > 2.0) {
            return Err(Error::ParameterOutOfRange {
                what: "bounds need rho in (0,1) and p > 2",
            });
        }
        let denom = (1.0 - rho) * (1.0 - rho);
        Ok(TransformBounds {
            m1: 0.0,
            m2: 0.0,
            alpha: (p - 2.0) / p,
            c_rho: 3.0 / denom,
            c_rho_cap: 3.0 * PI / denom,
        })
    }

    /// Measure `M₁`, `M₂` over a family of sources and a point cloud.
    pub fn measure(
        sources: &[ComplexField],
        points: &[Complex64],
        p: f64,
    ) -> Result<Self> {
        let rho = sources
            .first()
            .and_then(|s| s.support_radius())
            .ok_or(Error::MissingSupportRadius)?;
        let mut bounds = Self::constants(rho, p)?;
        for g in sources {
            let norm = crate::grid::lp_norm(g, crate::grid::Norm::P(p))?;
            if norm == 0.0 {
                continue;
            }
            let tg = pompeiu_transform(g, points)?;
            for &v in &tg {
                bounds.m1 = bounds.m1.max(v.norm() / norm);
            }
            for (a, &za) in tg.iter().zip(points) {
                for (b, &zb) in tg.iter().zip(points) {
                    let dz = (za - zb).norm();
                    if dz > 1e-9 {
                        let ratio = (a - b).norm() / (norm * dz.powf(bounds.alpha));
                        bounds.m2 = bounds.m2.max(ratio);
                    }
                }
            }
        }
        Ok(bounds)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grid::{make_grid, Field};

    const TAU: f64 = 2.0 * PI;

    #[test]
    fn pompeiu_of_zero_source_is_zero() {
        let grid = make_grid(16, 32, 0.9, 0.5).unwrap();
        let g = ComplexField::zeros(grid, Some(0.5));
        let out = pompeiu_transform(&g, &[Complex64::new(0.3, 0.2)]).unwrap();
        assert_eq!(out[0], Complex64::new(0.0, 0.0));
    }

    #[test]
    fn pompeiu_requires_support_radius() {
        let grid = make_grid(8, 16, 0.9, 0.5).unwrap();
        let g = ComplexField::zeros(grid, None);
        assert!(matches!(
            pompeiu_transform(&g, &[]),
            Err(Error::MissingSupportRadius)
        ));
    }

    #[test]
    fn pompeiu_disk_indicator_closed_form() {
        let grid = make_grid(32, 64, 0.9, 0.5).unwrap();
        let g = ComplexField::from_fn(grid, Some(0.5), |_| Complex64::new(1.0, 0.0));
        let pts = [Complex64::new(0.25, 0.0), Complex64::new(1.0, 0.0)];
        let out = pompeiu_transform(&g, &pts).unwrap();
        assert!((out[0] - Complex64::new(0.25, 0.0)).norm() < 1e-12);
        assert!((out[1] - Complex64::new(0.25, 0.0)).norm() < 1e-12);
    }

    #[test]
    fn pompeiu_smooth_source_matches_fine_quadrature() {
        // brute-force oracle: plain midpoint quadrature at 8x the resolution,
        // evaluated at points away from the support
        let bump = |z: Complex64| {
            let s = z.norm() / 0.5;
            if s < 1.0 {
                Complex64::new((1.0 - 1.0 / (1.0 - s * s)).exp(), 0.0)
            } else {
                Complex64::new(0.0, 0.0)
            }
        };
        let grid = make_grid(48, 96, 0.9, 0.5).unwrap();
        let g = ComplexField::from_fn(grid, Some(0.5), bump);
        let fine = make_grid(192, 384, 0.9, 0.5).unwrap();
        let z = Complex64::new(0.7, 0.1);
        let coarse = pompeiu_transform(&g, &[z]).unwrap()[0];
        let mut brute = Complex64::new(0.0, 0.0);
        for i in 0..fine.layers_within(0.5) {
            for j in 0..fine.n_theta {
                let w = fine.node(i, j);
                brute += bump(w) * fine.weight(i, 0) / (z - w);
            }
        }
        brute /= PI;
        assert!(
            (coarse - brute).norm() < 1e-4,
            "coarse {coarse} vs brute {brute}"
        );
    }

    #[test]
    fn theta_derivative_of_indicator_matches_closed_form() {
        let grid = make_grid(64, 128, 0.9, 0.5).unwrap();
        let g = ComplexField::from_fn(grid.clone(), Some(0.5), |_| Complex64::new(1.0, 0.0));
        let thetas: Vec<f64> = (0..16).map(|k| TAU * k as f64 / 16.0).collect();
        let d = boundary_theta_derivative(&g, &thetas).unwrap();
        for (k, v) in d.values().iter().enumerate() {
            let want = Complex64::new(0.0, -0.25) * Complex64::from_polar(1.0, -thetas[k]);
            assert!((v - want).norm() < 1e-10, "θ = {}", thetas[k]);
        }
    }

    #[test]
    fn theta_derivative_matches_circle_finite_differences() {
        let bump = |z: Complex64| {
            let s = z.norm() / 0.5;
            if s < 1.0 {
                let v = (1.0 - 1.0 / (1.0 - s * s)).exp();
                Complex64::new(v, 0.5 * v * z.re)
            } else {
                Complex64::new(0.0, 0.0)
            }
        };
        let grid = make_grid(48, 96, 0.9, 0.5).unwrap();
        let g = ComplexField::from_fn(grid, Some(0.5), bump);
        let theta = 1.1;
        let d = boundary_theta_derivative(&g, &[theta]).unwrap();
        let h = 1e-4;
        let pts = [
            Complex64::from_polar(1.0, theta - h),
            Complex64::from_polar(1.0, theta + h),
        ];
        let t = pompeiu_transform(&g, &pts).unwrap();
        let fd = (t[1] - t[0]) / (2.0 * h);
        assert!((d.values()[0] - fd).norm() < 1e-6);
    }

    #[test]
    fn theta_derivative_rejects_boundary_touching_support() {
        let grid = make_grid(8, 16, 0.9999999, 0.9999995).unwrap();
        let g = ComplexField::from_fn(grid, Some(0.9999995), |_| Complex64::new(1.0, 0.0));
        assert!(matches!(
            boundary_theta_derivative(&g, &[0.0]),
            Err(Error::SupportTouchesBoundary)
        ));
    }

    #[test]
    fn schwartz_integral_examples() {
        let n = 128;
        let one = BoundarySignal::sample_real(n, |_| 1.0);
        let zero_weight = BoundarySignal::sample_real(n, |_| 0.0);
        let constant =
            crate::boundary::antiderivative(&one, &zero_weight, crate::boundary::Closure::None)
                .unwrap();
        // Φ ≡ 0 is the antiderivative of 0; a constant path shifts by c:
        // S of a constant vanishes because only modes k ≥ 1 enter.
        let pts = [Complex64::new(0.4, -0.2)];
        assert!(schwartz_integral(&constant, &pts).unwrap()[0].norm() < 1e-13);

        let cos = BoundarySignal::sample_real(n, |t| t.cos());
        let sin_path = crate::boundary::antiderivative(&cos, &one, crate::boundary::Closure::None)
            .unwrap();
        let got = schwartz_integral(&sin_path, &pts).unwrap()[0];
        assert!((got - pts[0]).norm() < 1e-12);

        assert!(matches!(
            schwartz_integral(&sin_path, &[Complex64::new(1.0, 0.0)]),
            Err(Error::PointOutsideDomain)
        ));
    }

    #[test]
    fn poisson_integral_examples() {
        let n = 128;
        let c = BoundarySignal::sample_real(n, |_| 2.5);
        let pts = [
            Complex64::new(0.0, 0.0),
            Complex64::new(0.5, 0.0),
            Complex64::new(-0.1, 0.8),
        ];
        for v in poisson_integral(&c, &pts).unwrap() {
            assert!((v - 2.5).abs() < 1e-12);
        }
        let cos = BoundarySignal::sample_real(n, |t| t.cos());
        let u = poisson_integral(&cos, &[Complex64::new(0.5, 0.0)]).unwrap();
        assert!((u[0] - 0.5).abs() < 1e-12);
        let mixed = BoundarySignal::sample_real(n, |t| 0.75 + (3.0 * t).sin());
        let u = poisson_integral(&mixed, &[Complex64::new(0.0, 0.0)]).unwrap();
        assert!((u[0] - 0.75).abs() < 1e-12);
    }

    #[test]
    fn newtonian_potential_of_indicator_at_origin() {
        let grid = make_grid(32, 64, 0.9, 0.5).unwrap();
        let g = RealField::from_fn(grid, Some(0.5), |_| 1.0);
        let rho: f64 = 0.5;
        let want = rho * rho * (2.0 * rho.ln() - 1.0) / 4.0;
        let got = newtonian_potential(&g, &[Complex64::new(0.0, 0.0)]).unwrap()[0];
        assert!((got - want).abs() < 1e-12, "got {got}, want {want}");
        assert!((want - (-0.149143397569993)).abs() < 1e-12);
    }

    #[test]
    fn newtonian_potential_of_zero_is_zero() {
        let grid = make_grid(8, 16, 0.9, 0.5).unwrap();
        let g = RealField::zeros(grid, Some(0.5));
        let out = newtonian_potential(&g, &[Complex64::new(0.3, 0.1)]).unwrap();
        assert_eq!(out[0], 0.0);
    }

    #[test]
    fn bounds_constants_formulas() {
        let b = TransformBounds::constants(0.5, 4.0).unwrap();
        assert!((b.c_rho - 12.0).abs() < 1e-12);
        assert!((b.c_rho_cap - 12.0 * PI).abs() < 1e-12);
        assert!((b.alpha - 0.5).abs() < 1e-15);
        assert!(TransformBounds::constants(0.5, 2.0).is_err());
    }
}
