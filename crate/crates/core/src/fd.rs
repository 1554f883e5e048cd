//! Finite-difference stencils on the polar grid.
//!
//! Radial derivatives use Fornberg weights on the (possibly nonuniform)
//! five-node neighbourhood of each layer; angular derivatives use the
//! periodic five-point central formulas.  These are the independent oracles
//! against which the integral operators are checked, so nothing here may
//! consult the operator implementations.

use alloc::vec::Vec;
use core::f64::consts::PI;

use num_complex::Complex64;
use num_traits::Float;

use crate::grid::{ComplexField, RealField};

const TAU: f64 = 2.0 * PI;

/// Fornberg weights for derivatives of order `0..=m` at `z` from nodes `x`.
///
/// Returns `weights[k][i]`: the coefficient of `f(x_i)` in the order-`k`
/// derivative approximation.
pub fn fornberg_weights(z: f64, x: &[f64], m: usize) -> Vec<Vec<f64>> {
    let n = x.len();
    let mut c = alloc::vec![alloc::vec![0.0f64; n]; m + 1];
    let mut c1 = 1.0;
    let mut c4 = x[0] - z;
    c[0][0] = 1.0;
    for i in 1..n {
        let mn = i.min(m);
        let mut c2 = 1.0;
        let c5 = c4;
        c4 = x[i] - z;
        for j in 0..i {
            let c3 = x[i] - x[j];
            c2 *= c3;
            if j == i - 1 {
                for k in (1..=mn).rev() {
                    c[k][i] = c1 * (k as f64 * c[k - 1][i - 1] - c5 * c[k][i - 1]) / c2;
                }
                c[0][i] = -c1 * c5 * c[0][i - 1] / c2;
            }
            for k in (1..=mn).rev() {
                c[k][j] = (c4 * c[k][j] - k as f64 * c[k - 1][j]) / c3;
            }
            c[0][j] = c4 * c[0][j] / c3;
        }
        c1 = c2;
    }
    c
}

/// Interior radial window of half-width 2: layers `2 ..= n_r - 3`.
pub fn radial_interior(n_r: usize) -> core::ops::Range<usize> {
    if n_r < 5 {
        0..0
    } else {
        2..n_r - 2
    }
}

struct RadialStencil {
    first: [f64; 5],
    second: [f64; 5],
}

fn radial_stencils(radii: &[f64]) -> Vec<Option<RadialStencil>> {
    let n_r = radii.len();
    let mut out = Vec::with_capacity(n_r);
    for i in 0..n_r {
        if i < 2 || i + 2 >= n_r {
            out.push(None);
            continue;
        }
        let window = &radii[i - 2..=i + 2];
        let w = fornberg_weights(radii[i], window, 2);
        let mut first = [0.0; 5];
        let mut second = [0.0; 5];
        first.copy_from_slice(&w[1]);
        second.copy_from_slice(&w[2]);
        out.push(Some(RadialStencil { first, second }));
    }
    out
}

macro_rules! theta_derivs {
    ($values:expr, $grid:expr, $i:expr, $j:expr, $zero:expr) => {{
        let n = $grid.n_theta;
        let h = TAU / n as f64;
        let at = |dj: isize| {
            let jj = ((($j as isize + dj) % n as isize) + n as isize) as usize % n;
            $values[$grid.index($i, jj)]
        };
        let d1 = (-at(2) + at(1) * 8.0 - at(-1) * 8.0 + at(-2)) / (12.0 * h);
        let d2 =
            (-at(2) + at(1) * 16.0 - at(0) * 30.0 + at(-1) * 16.0 - at(-2)) / (12.0 * h * h);
        let _ = $zero;
        (d1, d2)
    }};
}

/// Wirtinger derivative `∂z̄ = e^{iθ}/2 (∂_r + i/r ∂_θ)` of a complex field at
/// interior nodes; `None` where the radial stencil leaves the grid.
pub fn dbar(field: &ComplexField) -> Vec<Option<Complex64>> {
    wirtinger(field, 1.0)
}

/// Wirtinger derivative `∂_z = e^{-iθ}/2 (∂_r − i/r ∂_θ)`.
pub fn dz(field: &ComplexField) -> Vec<Option<Complex64>> {
    wirtinger(field, -1.0)
}

fn wirtinger(field: &ComplexField, sign: f64) -> Vec<Option<Complex64>> {
    let grid = field.grid().clone();
    let stencils = radial_stencils(grid.radii());
    let values = field.values();
    let mut out = alloc::vec![None; grid.node_count()];
    for i in radial_interior(grid.n_r) {
        let st = stencils[i].as_ref().expect("interior stencil");
        let r = grid.radii()[i];
        for j in 0..grid.n_theta {
            let mut dr = Complex64::new(0.0, 0.0);
            for (k, w) in st.first.iter().enumerate() {
                dr += w * values[grid.index(i - 2 + k, j)];
            }
            let (dt, _) = theta_derivs!(values, grid, i, j, Complex64::new(0.0, 0.0));
            let theta = grid.thetas()[j];
            let phase = Complex64::from_polar(0.5, sign * theta);
            out[grid.index(i, j)] = Some(phase * (dr + Complex64::new(0.0, sign) * dt / r));
        }
    }
    out
}

/// Laplacian `u_rr + u_r / r + u_θθ / r²` of a real field at interior nodes.
pub fn laplacian(field: &RealField) -> Vec<Option<f64>> {
    let grid = field.grid().clone();
    let stencils = radial_stencils(grid.radii());
    let values = field.values();
    let mut out = alloc::vec![None; grid.node_count()];
    for i in radial_interior(grid.n_r) {
        let st = stencils[i].as_ref().expect("interior stencil");
        let r = grid.radii()[i];
        for j in 0..grid.n_theta {
            let mut dr = 0.0;
            let mut drr = 0.0;
            for k in 0..5 {
                let v = values[grid.index(i - 2 + k, j)];
                dr += st.first[k] * v;
                drr += st.second[k] * v;
            }
            let (_, dtt) = theta_derivs!(values, grid, i, j, 0.0f64);
            out[grid.index(i, j)] = Some(drr + dr / r + dtt / (r * r));
        }
    }
    out
}

/// Relative L² distance between an interior-masked derivative field and a
/// reference sampled on the same grid, weighted by cell areas.
pub fn relative_l2_error<T, F>(
    derived: &[Option<T>],
    grid: &crate::grid::PolarGrid,
    mut reference: F,
    mut modulus: impl FnMut(T, (usize, usize)) -> f64,
) -> f64
where
    T: Copy,
    F: FnMut(usize, usize) -> f64,
{
    let mut num = 0.0;
    let mut den = 0.0;
    for i in 0..grid.n_r {
        let w = grid.weight(i, 0);
        for j in 0..grid.n_theta {
            if let Some(v) = derived[grid.index(i, j)] {
                let diff = modulus(v, (i, j));
                num += diff * diff * w;
                let r = reference(i, j);
                den += r * r * w;
            }
        }
    }
    (num / den.max(1e-300)).sqrt()
}
