//! Rough boundary data: principal arguments, conjugate functions, and
//! antiderivatives with optional singular (Cantor-ladder) parts.
//!
//! An [`AntiderivativePath`] is a continuous function on `[0, 2π]` split into
//! an absolutely continuous part (cumulative-integral samples) and singular
//! terms whose derivative vanishes almost everywhere.  Ladder terms change
//! endpoint values and interior values without changing the a.e. derivative,
//! which is the device behind the non-uniqueness of the boundary-value
//! problems solved downstream.

use alloc::vec::Vec;
use core::f64::consts::PI;

use num_complex::Complex64;
use num_traits::Float;

use crate::circle::spectral_cumint;
use crate::error::{Error, Result};
use crate::grid::BoundarySignal;

const TAU: f64 = 2.0 * PI;

/// Middle-thirds Cantor function rescaled to `[0, 2π] → [0, 1]`, truncated at
/// a finite construction depth.
///
/// At depth `d` the function is constant except on `2^d` intervals of total
/// length `(2/3)^d · 2π`, where it rises linearly.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CantorLadder {
    depth: u32,
}

/// Build a [`CantorLadder`]; depth must lie in `1..=30`.
pub fn cantor_ladder(depth: u32) -> Result<CantorLadder> {
    if !(1..=30).contains(&depth) {
        return Err(Error::ParameterOutOfRange {
            what: "cantor ladder depth must lie in 1..=30",
        });
    }
    Ok(CantorLadder { depth })
}

impl CantorLadder {
    pub fn depth(&self) -> u32 {
        self.depth
    }

    /// Evaluate at any `θ ∈ [0, 2π]` (clamped outside).
    pub fn eval(&self, theta: f64) -> f64 {
        let mut x = (theta / TAU).clamp(0.0, 1.0);
        let mut acc = 0.0;
        let mut scale = 1.0;
        for _ in 0..self.depth {
            if x < 1.0 / 3.0 {
                x *= 3.0;
                scale *= 0.5;
            } else if x > 2.0 / 3.0 {
                acc += scale * 0.5;
                x = 3.0 * x - 2.0;
                scale *= 0.5;
            } else {
                return acc + scale * 0.5;
            }
        }
        acc + scale * x
    }

    /// Total length of the intervals where the truncated ladder still rises.
    pub fn rising_measure(&self) -> f64 {
        (2.0f64 / 3.0).powi(self.depth as i32) * TAU
    }

    /// True when `θ` lies inside one of the rising intervals at this depth.
    pub fn on_rising_interval(&self, theta: f64) -> bool {
        let mut x = theta / TAU;
        if !(0.0..=1.0).contains(&x) {
            return false;
        }
        for _ in 0..self.depth {
            if x < 1.0 / 3.0 {
                x *= 3.0;
            } else if x > 2.0 / 3.0 {
                x = 3.0 * x - 2.0;
            } else {
                return false;
            }
        }
        true
    }
}

/// Nondecreasing/nonincreasing pair of ladders on `[0, 2π]` with equal
/// endpoints σ(0) = σ(2π) = 0: rises like the ladder on `[0, π]` and falls
/// symmetrically on `[π, 2π]`.  Its derivative vanishes a.e., so adding a
/// multiple of it to an antiderivative leaves the a.e. derivative (and hence
/// the boundary condition) unchanged while moving every interior value.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LadderPair {
    ladder: CantorLadder,
}

impl LadderPair {
    pub fn new(depth: u32) -> Result<Self> {
        Ok(LadderPair {
            ladder: cantor_ladder(depth)?,
        })
    }

    pub fn eval(&self, theta: f64) -> f64 {
        let t = theta.clamp(0.0, TAU);
        if t <= PI {
            self.ladder.eval(2.0 * t)
        } else {
            self.ladder.eval(2.0 * (TAU - t))
        }
    }

    /// Angles where the pair is locally constant (off the rising intervals).
    pub fn on_plateau(&self, theta: f64) -> bool {
        let t = theta.clamp(0.0, TAU);
        let mapped = if t <= PI { 2.0 * t } else { 2.0 * (TAU - t) };
        !self.ladder.on_rising_interval(mapped)
    }
}

/// One singular summand of a path.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum SingularTerm {
    Ladder(CantorLadder),
    Pair(LadderPair),
}

impl SingularTerm {
    pub fn eval(&self, theta: f64) -> f64 {
        match self {
            SingularTerm::Ladder(l) => l.eval(theta),
            SingularTerm::Pair(p) => p.eval(theta),
        }
    }
}

/// Endpoint-closure mode for antiderivatives.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Closure {
    /// Keep the raw cumulative integral; a nonzero endpoint jump is carried
    /// explicitly and treated as an atom at θ = 0 by the circle operators.
    None,
    /// Subtract `jump · C(θ)` with a ladder of the given depth so the
    /// endpoints agree; the removed mass is spread over the Cantor set.
    Cantor(u32),
}

/// A continuous function `Φ` on `[0, 2π]`: cumulative-integral samples plus
/// optional singular terms.
#[derive(Debug, Clone)]
pub struct AntiderivativePath {
    /// `n + 1` samples of the absolutely continuous part; `base[0] = 0`.
    base: Vec<Complex64>,
    singular: Vec<(Complex64, SingularTerm)>,
    derivative: BoundarySignal,
}

impl AntiderivativePath {
    pub fn from_parts(
        base: Vec<Complex64>,
        singular: Vec<(Complex64, SingularTerm)>,
        derivative: BoundarySignal,
    ) -> Result<Self> {
        if base.len() != derivative.len() + 1 {
            return Err(Error::LengthMismatch {
                expected: derivative.len() + 1,
                got: base.len(),
            });
        }
        Ok(AntiderivativePath {
            base,
            singular,
            derivative,
        })
    }

    pub fn zero(n: usize) -> Self {
        AntiderivativePath {
            base: alloc::vec![Complex64::new(0.0, 0.0); n + 1],
            singular: Vec::new(),
            derivative: BoundarySignal::new(alloc::vec![Complex64::new(0.0, 0.0); n]),
        }
    }

    pub fn len(&self) -> usize {
        self.derivative.len()
    }

    pub fn is_empty(&self) -> bool {
        self.derivative.is_empty()
    }

    pub fn base(&self) -> &[Complex64] {
        &self.base
    }

    pub fn singular(&self) -> &[(Complex64, SingularTerm)] {
        &self.singular
    }

    pub fn derivative_signal(&self) -> &BoundarySignal {
        &self.derivative
    }

    /// Path value at node angle `θ_j` (including singular terms).
    pub fn node_value(&self, j: usize) -> Complex64 {
        let theta = TAU * j as f64 / self.len() as f64;
        let mut v = self.base[j];
        for (c, s) in &self.singular {
            v += c * s.eval(theta);
        }
        v
    }

    /// All node values `j = 0..n`.
    pub fn node_values(&self) -> Vec<Complex64> {
        (0..self.len()).map(|j| self.node_value(j)).collect()
    }

    /// Value at arbitrary `θ ∈ [0, 2π]`: linear interpolation of the base
    /// samples plus exact singular terms.
    pub fn value_at(&self, theta: f64) -> Complex64 {
        let n = self.len() as f64;
        let t = theta.clamp(0.0, TAU);
        let x = t / TAU * n;
        let j = (x.floor() as usize).min(self.len());
        let frac = x - j as f64;
        let mut v = if j >= self.len() {
            self.base[self.len()]
        } else {
            self.base[j] * (1.0 - frac) + self.base[j + 1] * frac
        };
        for (c, s) in &self.singular {
            v += c * s.eval(t);
        }
        v
    }

    /// Endpoint jump `Φ(2π) − Φ(0)`.
    pub fn jump(&self) -> Complex64 {
        let mut j = self.base[self.len()] - self.base[0];
        for (c, s) in &self.singular {
            j += c * (s.eval(TAU) - s.eval(0.0));
        }
        j
    }

    /// Node-wise linear combination `self + scale · other`.
    pub fn add_scaled(&self, other: &AntiderivativePath, scale: Complex64) -> Result<Self> {
        if other.len() != self.len() {
            return Err(Error::LengthMismatch {
                expected: self.len(),
                got: other.len(),
            });
        }
        let base = self
            .base
            .iter()
            .zip(other.base.iter())
            .map(|(a, b)| a + scale * b)
            .collect();
        let mut singular = self.singular.clone();
        for (c, s) in &other.singular {
            singular.push((scale * c, *s));
        }
        let derivative = BoundarySignal::new(
            self.derivative
                .values()
                .iter()
                .zip(other.derivative.values())
                .map(|(a, b)| a + scale * b)
                .collect(),
        );
        AntiderivativePath::from_parts(base, singular, derivative)
    }

    /// Append a singular term.
    pub fn with_singular(mut self, coeff: Complex64, term: SingularTerm) -> Self {
        self.singular.push((coeff, term));
        self
    }

    /// Equalize the endpoints by subtracting `jump · C(θ)`.
    pub fn closed_with(mut self, ladder: CantorLadder) -> Self {
        let jump = self.jump();
        if jump.norm() > 0.0 {
            self.singular.push((-jump, SingularTerm::Ladder(ladder)));
        }
        self
    }
}

/// Cumulative antiderivative of `signal · weight` from 0 to each node angle.
///
/// The absolutely continuous part integrates the band-limited interpolant of
/// the sampled product exactly (mean ramp plus oscillatory modes), so exact
/// antiderivatives of trigonometric data are reproduced to rounding.  With
/// `Closure::Cantor(d)` the endpoint jump is removed by a ladder term,
/// leaving the a.e. derivative unchanged.
pub fn antiderivative(
    signal: &BoundarySignal,
    weight: &BoundarySignal,
    closure: Closure,
) -> Result<AntiderivativePath> {
    if signal.len() != weight.len() {
        return Err(Error::LengthMismatch {
            expected: signal.len(),
            got: weight.len(),
        });
    }
    let product: Vec<Complex64> = signal
        .values()
        .iter()
        .zip(weight.values())
        .map(|(a, b)| a * b)
        .collect();
    let base = spectral_cumint(&product)?;
    let path = AntiderivativePath::from_parts(base, Vec::new(), BoundarySignal::new(product))?;
    Ok(match closure {
        Closure::None => path,
        Closure::Cantor(depth) => path.closed_with(cantor_ladder(depth)?),
    })
}

/// Conjugate function of a real boundary signal: the multiplier
/// `−i · sign(k)` in frequency space, zero mean, zero Nyquist mode.
pub fn harmonic_conjugate(alpha: &BoundarySignal) -> Result<BoundarySignal> {
    if !alpha.is_real() {
        return Err(Error::NonRealSignal);
    }
    let n = alpha.len();
    let coeffs = crate::circle::dft(alpha.values())?;
    let half = n / 2;
    let mut out = alloc::vec![Complex64::new(0.0, 0.0); n];
    let minus_i = Complex64::new(0.0, -1.0);
    let plus_i = Complex64::new(0.0, 1.0);
    for k in 1..half {
        out[k] = minus_i * coeffs[k];
        out[n - k] = plus_i * coeffs[n - k];
    }
    let beta = crate::circle::idft(&out)?;
    Ok(BoundarySignal::new(
        beta.into_iter().map(|v| Complex64::new(v.re, 0.0)).collect(),
    ))
}

/// Principal value of the argument of each unimodular sample, in `(−π, π]`.
pub fn arg_principal(lambda: &crate::grid::UnimodularSignal) -> Result<BoundarySignal> {
    let mut out = Vec::with_capacity(lambda.len());
    for (index, v) in lambda.values().iter().enumerate() {
        if v.norm() == 0.0 {
            return Err(Error::ZeroModulus { index });
        }
        let mut a = v.im.atan2(v.re);
        if a <= -PI {
            a = PI;
        }
        out.push(Complex64::new(a, 0.0));
    }
    Ok(BoundarySignal::new(out))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grid::UnimodularSignal;

    /// Independent recursive middle-thirds evaluation on [0, 1].
    fn cantor_recursive(x: f64, depth: u32) -> f64 {
        if depth == 0 {
            return x;
        }
        if x < 1.0 / 3.0 {
            0.5 * cantor_recursive(3.0 * x, depth - 1)
        } else if x <= 2.0 / 3.0 {
            0.5
        } else {
            0.5 + 0.5 * cantor_recursive(3.0 * x - 2.0, depth - 1)
        }
    }

    #[test]
    fn ladder_endpoints_and_midpoint() {
        let c = cantor_ladder(12).unwrap();
        assert_eq!(c.eval(0.0), 0.0);
        assert_eq!(c.eval(TAU), 1.0);
        assert_eq!(c.eval(PI), 0.5);
        assert!(cantor_ladder(0).is_err());
        assert!(cantor_ladder(31).is_err());
    }

    #[test]
    fn ladder_matches_recursive_oracle() {
        for depth in [1u32, 2, 5, 9] {
            let c = cantor_ladder(depth).unwrap();
            for k in 0..=200 {
                let x = k as f64 / 200.0;
                let want = cantor_recursive(x, depth);
                let got = c.eval(x * TAU);
                assert!(
                    (got - want).abs() < 1e-12,
                    "depth {depth}, x = {x}: {got} vs {want}"
                );
            }
        }
    }

    #[test]
    fn ladder_is_nondecreasing_and_flat_off_rising_intervals() {
        let c = cantor_ladder(6).unwrap();
        let mut prev = -1.0;
        let mut rising = 0usize;
        let n = 4000;
        for k in 0..=n {
            let t = TAU * k as f64 / n as f64;
            let v = c.eval(t);
            assert!(v >= prev - 1e-15);
            prev = v;
            if c.on_rising_interval(t) {
                rising += 1;
            }
        }
        let frac = rising as f64 / (n + 1) as f64;
        assert!((frac - (2.0f64 / 3.0).powi(6)).abs() < 0.02);
    }

    #[test]
    fn ladder_pair_closes_endpoints() {
        let p = LadderPair::new(8).unwrap();
        assert_eq!(p.eval(0.0), 0.0);
        assert_eq!(p.eval(TAU), 0.0);
        assert_eq!(p.eval(PI), 1.0);
        assert!(p.on_plateau(PI / 2.0));
    }

    #[test]
    fn conjugate_of_constants_and_cosines() {
        let n = 64;
        let c = BoundarySignal::sample_real(n, |_| 3.25);
        let b = harmonic_conjugate(&c).unwrap();
        for v in b.values() {
            assert!(v.norm() < 1e-13);
        }
        for k in [1usize, 3] {
            let a = BoundarySignal::sample_real(n, |t| (k as f64 * t).cos());
            let b = harmonic_conjugate(&a).unwrap();
            for (j, v) in b.values().iter().enumerate() {
                let theta = TAU * j as f64 / n as f64;
                assert!((v.re - (k as f64 * theta).sin()).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn conjugate_rejects_non_real_input() {
        let s = BoundarySignal::new(alloc::vec![Complex64::new(0.0, 1.0); 16]);
        assert!(matches!(harmonic_conjugate(&s), Err(Error::NonRealSignal)));
    }

    #[test]
    fn conjugate_involution_is_minus_identity_plus_mean() {
        let n = 128;
        let a = BoundarySignal::sample_real(n, |t| 1.5 + t.cos() - 0.25 * (5.0 * t).sin());
        let bb = harmonic_conjugate(&harmonic_conjugate(&a).unwrap()).unwrap();
        for (v, w) in a.values().iter().zip(bb.values()) {
            // conj(conj(α)) = −α + mean(α); mean = 1.5
            assert!((w.re - (1.5 - v.re)).abs() < 1e-10);
        }
    }

    #[test]
    fn antiderivative_examples() {
        let n = 64;
        let one = BoundarySignal::sample_real(n, |_| 1.0);
        let phi = antiderivative(&one, &one, Closure::None).unwrap();
        for j in 0..=n {
            let theta = TAU * j as f64 / n as f64;
            assert!((phi.value_at(theta).re - theta).abs() < 1e-12);
        }

        let cos = BoundarySignal::sample_real(n, |t| t.cos());
        let phi = antiderivative(&cos, &one, Closure::None).unwrap();
        for j in 0..n {
            let theta = TAU * j as f64 / n as f64;
            assert!((phi.node_value(j).re - theta.sin()).abs() < 1e-12);
        }
        assert!(phi.jump().norm() < 1e-12);
    }

    #[test]
    fn cantor_closure_zeroes_the_endpoints_and_keeps_the_derivative() {
        let n = 256;
        let one = BoundarySignal::sample_real(n, |_| 1.0);
        let phi = antiderivative(&one, &one, Closure::Cantor(12)).unwrap();
        assert!(phi.value_at(0.0).norm() < 1e-12);
        assert!(phi.value_at(TAU).norm() < 1e-12);

        // midpoint finite differences stay ≈ 1 on intervals carrying no
        // ladder mass (the steps cluster near the Cantor set, so endpoint
        // checks are not enough)
        let ladder = cantor_ladder(12).unwrap();
        let h = TAU / n as f64;
        let mut checked = 0;
        for j in 0..n {
            let (t0, t1) = (h * j as f64, h * (j + 1) as f64);
            if ladder.eval(t1) > ladder.eval(t0) {
                continue;
            }
            let fd = (phi.value_at(t1) - phi.value_at(t0)).re / h;
            assert!((fd - 1.0).abs() < 1e-10, "j = {j}: fd = {fd}");
            checked += 1;
        }
        assert!(checked > n / 2, "only {checked} mass-free intervals");
    }

    #[test]
    fn antiderivative_is_linear() {
        let n = 64;
        let w = BoundarySignal::sample_real(n, |t| 1.0 + 0.5 * t.sin());
        let f1 = BoundarySignal::sample_real(n, |t| t.cos());
        let f2 = BoundarySignal::sample_real(n, |t| (2.0 * t).sin() - 0.25);
        let combo = BoundarySignal::new(
            f1.values()
                .iter()
                .zip(f2.values())
                .map(|(a, b)| 2.0 * a - 3.0 * b)
                .collect(),
        );
        let p1 = antiderivative(&f1, &w, Closure::None).unwrap();
        let p2 = antiderivative(&f2, &w, Closure::None).unwrap();
        let pc = antiderivative(&combo, &w, Closure::None).unwrap();
        let manual = p1
            .add_scaled(&p2, Complex64::new(-1.5, 0.0))
            .unwrap();
        for j in 0..=n {
            let lin = 2.0 * manual.base()[j];
            assert!((pc.base()[j] - lin).norm() < 1e-11);
        }
    }

    #[test]
    fn antiderivative_rejects_length_mismatch() {
        let a = BoundarySignal::sample_real(32, |t| t.cos());
        let b = BoundarySignal::sample_real(64, |_| 1.0);
        assert!(matches!(
            antiderivative(&a, &b, Closure::None),
            Err(Error::LengthMismatch { .. })
        ));
    }

    #[test]
    fn arg_principal_examples() {
        let n = 16;
        let one = UnimodularSignal::constant(n, Complex64::new(1.0, 0.0)).unwrap();
        for v in arg_principal(&one).unwrap().values() {
            assert_eq!(v.re, 0.0);
        }
        let minus = UnimodularSignal::constant(n, Complex64::new(-1.0, 0.0)).unwrap();
        for v in arg_principal(&minus).unwrap().values() {
            assert!((v.re - PI).abs() < 1e-15);
        }
        let winding = UnimodularSignal::from_phase(n, |t| t);
        let a = arg_principal(&winding).unwrap();
        for (j, v) in a.values().iter().enumerate() {
            let theta = TAU * j as f64 / n as f64;
            let want = if theta <= PI { theta } else { theta - TAU };
            assert!((v.re - want).abs() < 1e-12, "θ = {theta}");
        }
    }
}
