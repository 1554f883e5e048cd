//! Polar discretization of the unit disk and the sampled objects living on it.
//!
//! The grid is a tensor product of uniform angles with a composite-midpoint
//! radial rule.  Radial cell edges are placed so that one edge falls exactly
//! on the declared support radius; the node of a cell sits at its radial
//! midpoint, which makes every cell weight equal to the exact cell area and
//! the quadrature of a constant exact.  Angular uniformity gives the
//! trapezoid rule its spectral accuracy for the periodic circle kernels.

use alloc::sync::Arc;
use alloc::vec::Vec;
use core::f64::consts::PI;

use num_complex::Complex64;
use num_traits::Float;

use crate::error::{Error, Result};

const TAU: f64 = 2.0 * PI;

/// Tensor-product polar grid over the disk of radius `r_max < 1`.
#[derive(Debug, Clone)]
pub struct PolarGrid {
    pub n_r: usize,
    pub n_theta: usize,
    pub r_max: f64,
    /// Radius used to grade the radial layers; fields sampled on this grid
    /// normally declare their support inside it.
    pub support_radius: f64,
    radii: Vec<f64>,
    thetas: Vec<f64>,
    /// Cell area per radial layer (shared by all angles of the layer).
    layer_weights: Vec<f64>,
    /// Radial cell edges, `n_r + 1` of them, with one edge at `support_radius`.
    edges: Vec<f64>,
}

impl PolarGrid {
    pub fn radii(&self) -> &[f64] {
        &self.radii
    }

    pub fn thetas(&self) -> &[f64] {
        &self.thetas
    }

    pub fn node_count(&self) -> usize {
        self.n_r * self.n_theta
    }

    pub fn index(&self, i: usize, j: usize) -> usize {
        i * self.n_theta + j
    }

    /// Node location `z = r_i e^{iθ_j}`.
    pub fn node(&self, i: usize, j: usize) -> Complex64 {
        Complex64::from_polar(self.radii[i], self.thetas[j])
    }

    /// Quadrature weight of node `(i, j)`: the exact area of its cell.
    pub fn weight(&self, i: usize, _j: usize) -> f64 {
        self.layer_weights[i]
    }

    /// All node positions in radial-major order.
    pub fn nodes(&self) -> Vec<Complex64> {
        let mut out = Vec::with_capacity(self.node_count());
        for i in 0..self.n_r {
            for j in 0..self.n_theta {
                out.push(self.node(i, j));
            }
        }
        out
    }

    /// Sum of cell weights over the layers covered by radius `rho`.
    pub fn weight_within(&self, rho: f64) -> f64 {
        let mut acc = 0.0;
        for i in 0..self.n_r {
            if self.radii[i] <= rho {
                acc += self.layer_weights[i] * self.n_theta as f64;
            }
        }
        acc
    }

    /// Index of the radial layer whose node is nearest to radius `r`.
    pub fn nearest_layer(&self, r: f64) -> usize {
        match self
            .radii
            .binary_search_by(|probe| probe.partial_cmp(&r).expect("finite radius"))
        {
            Ok(i) => i,
            Err(pos) => {
                if pos == 0 {
                    0
                } else if pos >= self.n_r {
                    self.n_r - 1
                } else if (self.radii[pos] - r).abs() < (r - self.radii[pos - 1]).abs() {
                    pos
                } else {
                    pos - 1
                }
            }
        }
    }

    /// Index of the angular node nearest to angle `theta`.
    pub fn nearest_angle(&self, theta: f64) -> usize {
        let h = TAU / self.n_theta as f64;
        let mut t = theta % TAU;
        if t < 0.0 {
            t += TAU;
        }
        let j = (t / h).round() as usize;
        j % self.n_theta
    }

    /// Grid node nearest to `z` among layers with radius at most `rho_cap`.
    pub fn nearest_node_within(&self, z: Complex64, rho_cap: f64) -> (usize, usize) {
        let mut i = self.nearest_layer(z.norm());
        while i > 0 && self.radii[i] > rho_cap {
            i -= 1;
        }
        let j = self.nearest_angle(z.arg());
        (i, j)
    }

    /// Largest layer index with node radius inside `rho` (inclusive), if any.
    pub fn layers_within(&self, rho: f64) -> usize {
        self.radii.iter().filter(|&&r| r <= rho).count()
    }
}

/// Build a polar grid.
///
/// Radial layers are split between the support disk `[0, ρ]` and the annulus
/// `(ρ, r_max]` so that at least half resolve the support; near-boundary
/// evaluation needs no source resolution.
pub fn make_grid(
    n_r: usize,
    n_theta: usize,
    r_max: f64,
    support_radius: f64,
) -> Result<Arc<PolarGrid>> {
    if n_r < 4 || n_theta < 4 {
        return Err(Error::ParameterOutOfRange {
            what: "grid needs n_r, n_theta >= 4",
        });
    }
    if !(r_max > 0.0 && r_max < 1.0) {
        return Err(Error::ParameterOutOfRange {
            what: "r_max must lie in (0, 1)",
        });
    }
    if !(support_radius > 0.0 && support_radius <= r_max) {
        return Err(Error::ParameterOutOfRange {
            what: "support_radius must lie in (0, r_max]",
        });
    }

    // Proportional split, but never fewer than half the layers inside the
    // support; keeps the radial spacing nearly continuous across the edge at
    // the support radius when the support covers half of r_max.
    let proportional = (n_r as f64 * support_radius / r_max).ceil() as usize;
    let mut n_in = proportional.max(n_r.div_ceil(2)).min(n_r);
    if support_radius < r_max && n_in == n_r {
        n_in = n_r - 1;
    }
    let n_out = n_r - n_in;

    let mut edges = Vec::with_capacity(n_r + 1);
    for k in 0..=n_in {
        edges.push(support_radius * k as f64 / n_in as f64);
    }
    for k in 1..=n_out {
        edges.push(support_radius + (r_max - support_radius) * k as f64 / n_out as f64);
    }

    let dtheta = TAU / n_theta as f64;
    let mut radii = Vec::with_capacity(n_r);
    let mut layer_weights = Vec::with_capacity(n_r);
    for i in 0..n_r {
        let (a, b) = (edges[i], edges[i + 1]);
        radii.push(0.5 * (a + b));
        // midpoint radius times radial width times angular width = cell area
        layer_weights.push(0.5 * (b * b - a * a) * dtheta);
    }
    let thetas = (0..n_theta).map(|j| dtheta * j as f64).collect();

    Ok(Arc::new(PolarGrid {
        n_r,
        n_theta,
        r_max,
        support_radius,
        radii,
        thetas,
        layer_weights,
        edges,
    }))
}

impl PolarGrid {
    pub fn edges(&self) -> &[f64] {
        &self.edges
    }
}

/// Scalar sample types a field can hold.
pub trait Scalar: Copy + PartialEq {
    fn modulus(self) -> f64;
    fn zero() -> Self;
}

impl Scalar for f64 {
    fn modulus(self) -> f64 {
        self.abs()
    }
    fn zero() -> Self {
        0.0
    }
}

impl Scalar for Complex64 {
    fn modulus(self) -> f64 {
        self.norm()
    }
    fn zero() -> Self {
        Complex64::new(0.0, 0.0)
    }
}

/// Per-node samples over a [`PolarGrid`], with an optional declared support
/// radius outside of which every value is exactly zero.
#[derive(Debug, Clone)]
pub struct Field<T: Scalar> {
    grid: Arc<PolarGrid>,
    values: Vec<T>,
    support_radius: Option<f64>,
}

pub type RealField = Field<f64>;
pub type ComplexField = Field<Complex64>;

impl<T: Scalar> Field<T> {
    /// Wrap explicit values; enforces the declared-support invariant.
    pub fn new(grid: Arc<PolarGrid>, values: Vec<T>, support_radius: Option<f64>) -> Result<Self> {
        if values.len() != grid.node_count() {
            return Err(Error::LengthMismatch {
                expected: grid.node_count(),
                got: values.len(),
            });
        }
        if let Some(rho) = support_radius {
            if !(rho > 0.0 && rho < 1.0) {
                return Err(Error::ParameterOutOfRange {
                    what: "field support radius must lie in (0, 1)",
                });
            }
            for i in 0..grid.n_r {
                if grid.radii()[i] > rho {
                    for j in 0..grid.n_theta {
                        if values[grid.index(i, j)].modulus() != 0.0 {
                            return Err(Error::ParameterOutOfRange {
                                what: "field values must vanish outside the support radius",
                            });
                        }
                    }
                }
            }
        }
        Ok(Field {
            grid,
            values,
            support_radius,
        })
    }

    /// Sample a closure on the grid, zeroing nodes outside the support radius.
    pub fn from_fn(
        grid: Arc<PolarGrid>,
        support_radius: Option<f64>,
        mut f: impl FnMut(Complex64) -> T,
    ) -> Self {
        let mut values = Vec::with_capacity(grid.node_count());
        for i in 0..grid.n_r {
            for j in 0..grid.n_theta {
                let inside = support_radius.map_or(true, |rho| grid.radii()[i] <= rho);
                let z = grid.node(i, j);
                values.push(if inside { f(z) } else { T::zero() });
            }
        }
        Field {
            grid,
            values,
            support_radius,
        }
    }

    pub fn zeros(grid: Arc<PolarGrid>, support_radius: Option<f64>) -> Self {
        let values = alloc::vec![T::zero(); grid.node_count()];
        Field {
            grid,
            values,
            support_radius,
        }
    }

    pub fn grid(&self) -> &Arc<PolarGrid> {
        &self.grid
    }

    pub fn values(&self) -> &[T] {
        &self.values
    }

    pub fn values_mut(&mut self) -> &mut [T] {
        &mut self.values
    }

    pub fn support_radius(&self) -> Option<f64> {
        self.support_radius
    }

    pub fn value(&self, i: usize, j: usize) -> T {
        self.values[self.grid.index(i, j)]
    }
}

/// Norm selector for [`lp_norm`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Norm {
    P(f64),
    Inf,
}

/// Weighted L^p norm of a field, `(Σ |v|^p w)^{1/p}`, or the sup norm.
pub fn lp_norm<T: Scalar>(field: &Field<T>, norm: Norm) -> Result<f64> {
    match norm {
        Norm::Inf => Ok(field
            .values
            .iter()
            .map(|v| v.modulus())
            .fold(0.0, f64::max)),
        Norm::P(p) => {
            if !(p >= 1.0) || !p.is_finite() {
                return Err(Error::ParameterOutOfRange {
                    what: "lp_norm needs p >= 1",
                });
            }
            let grid = &field.grid;
            let mut acc = 0.0;
            for i in 0..grid.n_r {
                let w = grid.weight(i, 0);
                for j in 0..grid.n_theta {
                    let m = field.values[grid.index(i, j)].modulus();
                    if m > 0.0 {
                        acc += m.powf(p) * w;
                    }
                }
            }
            Ok(acc.powf(1.0 / p))
        }
    }
}

/// Complex samples of a function on the unit circle at the grid angles.
#[derive(Debug, Clone, PartialEq)]
pub struct BoundarySignal {
    values: Vec<Complex64>,
}

impl BoundarySignal {
    pub fn new(values: Vec<Complex64>) -> Self {
        BoundarySignal { values }
    }

    pub fn from_real(values: Vec<f64>) -> Self {
        BoundarySignal {
            values: values.into_iter().map(|v| Complex64::new(v, 0.0)).collect(),
        }
    }

    /// Sample a real function of the angle at `n` uniform angles.
    pub fn sample_real(n: usize, mut f: impl FnMut(f64) -> f64) -> Self {
        let h = TAU / n as f64;
        BoundarySignal {
            values: (0..n)
                .map(|j| Complex64::new(f(h * j as f64), 0.0))
                .collect(),
        }
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn values(&self) -> &[Complex64] {
        &self.values
    }

    /// True when every imaginary part is negligible against the signal scale.
    pub fn is_real(&self) -> bool {
        let scale = self
            .values
            .iter()
            .map(|v| v.norm())
            .fold(0.0, f64::max)
            .max(1.0);
        self.values.iter().all(|v| v.im.abs() <= 1e-12 * scale)
    }

    pub fn real_values(&self) -> Result<Vec<f64>> {
        if !self.is_real() {
            return Err(Error::NonRealSignal);
        }
        Ok(self.values.iter().map(|v| v.re).collect())
    }

    pub fn angle(&self, j: usize) -> f64 {
        TAU * j as f64 / self.values.len() as f64
    }
}

/// Boundary samples constrained to modulus one (direction fields and
/// Riemann–Hilbert coefficients).
#[derive(Debug, Clone, PartialEq)]
pub struct UnimodularSignal {
    values: Vec<Complex64>,
}

impl UnimodularSignal {
    pub fn new(values: Vec<Complex64>) -> Result<Self> {
        for (index, v) in values.iter().enumerate() {
            if (v.norm() - 1.0).abs() > 1e-12 {
                return Err(Error::NonUnimodular { index });
            }
        }
        Ok(UnimodularSignal { values })
    }

    /// Sample a phase function: `λ(θ) = e^{i φ(θ)}`.
    pub fn from_phase(n: usize, mut phase: impl FnMut(f64) -> f64) -> Self {
        let h = TAU / n as f64;
        UnimodularSignal {
            values: (0..n)
                .map(|j| Complex64::from_polar(1.0, phase(h * j as f64)))
                .collect(),
        }
    }

    pub fn constant(n: usize, value: Complex64) -> Result<Self> {
        Self::new(alloc::vec![value; n])
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn values(&self) -> &[Complex64] {
        &self.values
    }

    pub fn conj(&self) -> UnimodularSignal {
        UnimodularSignal {
            values: self.values.iter().map(|v| v.conj()).collect(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn grid_weights_tile_the_disk_exactly() {
        for &(n_r, n_theta) in &[(4usize, 8usize), (7, 12), (64, 256), (33, 48)] {
            let grid = make_grid(n_r, n_theta, 0.999, 0.5).unwrap();
            let total: f64 = (0..n_r)
                .map(|i| grid.weight(i, 0) * n_theta as f64)
                .sum();
            let exact = PI * 0.999 * 0.999;
            assert!(
                ((total / exact) - 1.0).abs() < 1e-10,
                "grid {n_r}x{n_theta}: got {total}, want {exact}"
            );
        }
    }

    #[test]
    fn grid_covers_support_disk_exactly() {
        let grid = make_grid(4, 8, 0.9, 0.5).unwrap();
        assert_eq!(grid.node_count(), 32);
        let covered = grid.weight_within(0.5);
        assert!((covered - PI * 0.25).abs() < 1e-12);
        let total = grid.weight_within(1.0);
        assert!((total - PI * 0.81).abs() < 1e-12);
    }

    #[test]
    fn grid_grading_puts_half_the_layers_inside_support() {
        let grid = make_grid(9, 8, 0.9, 0.1).unwrap();
        assert!(grid.layers_within(0.1) >= 5);
        let grid = make_grid(16, 8, 0.999, 0.5).unwrap();
        assert!(grid.layers_within(0.5) >= 8);
    }

    #[test]
    fn grid_rejects_bad_parameters() {
        assert!(matches!(
            make_grid(3, 8, 0.9, 0.5),
            Err(Error::ParameterOutOfRange { .. })
        ));
        assert!(make_grid(4, 3, 0.9, 0.5).is_err());
        assert!(make_grid(4, 8, 1.0, 0.5).is_err());
        assert!(make_grid(4, 8, 0.9, 0.95).is_err());
        assert!(make_grid(4, 8, 0.9, 0.0).is_err());
    }

    #[test]
    fn thetas_are_uniform_on_the_half_open_circle() {
        let grid = make_grid(4, 8, 0.9, 0.5).unwrap();
        for (j, &t) in grid.thetas().iter().enumerate() {
            assert!((t - TAU * j as f64 / 8.0).abs() < 1e-15);
        }
        assert!(grid.thetas().last().copied().unwrap() < TAU);
    }

    #[test]
    fn nearest_node_roundtrips_grid_nodes() {
        let grid = make_grid(12, 16, 0.95, 0.5).unwrap();
        for i in 0..grid.n_r {
            for j in 0..grid.n_theta {
                let z = grid.node(i, j);
                let (ni, nj) = grid.nearest_node_within(z, 1.0);
                assert_eq!((ni, nj), (i, j));
            }
        }
    }

    #[test]
    fn field_support_invariant_is_enforced() {
        let grid = make_grid(8, 8, 0.9, 0.5).unwrap();
        let mut values = alloc::vec![Complex64::new(0.0, 0.0); grid.node_count()];
        values[grid.index(grid.n_r - 1, 0)] = Complex64::new(1.0, 0.0);
        assert!(Field::new(grid.clone(), values, Some(0.5)).is_err());

        let f = ComplexField::from_fn(grid, Some(0.5), |_| Complex64::new(1.0, 0.0));
        for i in 0..f.grid().n_r {
            for j in 0..f.grid().n_theta {
                let expect_zero = f.grid().radii()[i] > 0.5;
                assert_eq!(f.value(i, j).norm() == 0.0, expect_zero);
            }
        }
    }

    #[test]
    fn lp_norm_examples() {
        let grid = make_grid(16, 32, 0.9, 0.5).unwrap();
        let zero = RealField::zeros(grid.clone(), None);
        assert_eq!(lp_norm(&zero, Norm::P(4.0)).unwrap(), 0.0);

        let one = RealField::from_fn(grid.clone(), Some(0.5), |_| 1.0);
        let got = lp_norm(&one, Norm::P(2.0)).unwrap();
        assert!((got - (PI * 0.25).sqrt()).abs() < 1e-12);

        assert!(lp_norm(&one, Norm::P(0.5)).is_err());
    }

    #[test]
    fn sup_norm_matches_direct_scan() {
        let grid = make_grid(10, 16, 0.9, 0.5).unwrap();
        // deterministic pseudo-random values
        let mut state = 0x9e3779b97f4a7c15u64;
        let mut next = move || {
            state ^= state << 13;
            state ^= state >> 7;
            state ^= state << 17;
            (state % 10_000) as f64 / 10_000.0 - 0.5
        };
        let f = RealField::from_fn(grid, None, |_| next());
        let direct = f.values().iter().fold(0.0f64, |m, v| m.max(v.abs()));
        assert_eq!(lp_norm(&f, Norm::Inf).unwrap(), direct);
    }

    #[test]
    fn unimodular_signal_validates_modulus() {
        let good = UnimodularSignal::new(alloc::vec![Complex64::from_polar(1.0, 0.3); 8]);
        assert!(good.is_ok());
        let bad = UnimodularSignal::new(alloc::vec![Complex64::new(0.9, 0.0); 8]);
        assert!(matches!(bad, Err(Error::NonUnimodular { index: 0 })));
    }
}
