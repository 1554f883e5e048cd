//! Singular-integral operators and fixed-point solvers for boundary-value
//! problems on the unit disk.
//!
//! The crate evaluates the classical building blocks — the Pompeiu area
//! transform, Schwarz/Poisson circle integrals and the logarithmic potential —
//! on a tensor-product polar grid, assembles from them operators that produce
//! solutions of `∂z̄f = g` and `ΔU = G` with prescribed boundary behaviour in
//! the sense of angular (nontangential) limits, and solves the semi-linear
//! problems `∂z̄f = h·q(f)` and `ΔU = H·Q(U)` by damped Picard iteration with
//! homotopy continuation.
//!
//! Everything here is pure computation over immutable values; IO, file
//! formats and the CLI live in the companion `diskbvp-cli` crate.

#![cfg_attr(not(test), no_std)]

extern crate alloc;

pub mod boundary;
pub mod circle;
pub mod domains;
mod error;
pub mod fd;
pub mod grid;
pub mod hilbert;
pub mod poincare;
pub mod probe;
pub mod semilinear;
pub mod transforms;

pub use boundary::{
    antiderivative, arg_principal, cantor_ladder, harmonic_conjugate, AntiderivativePath,
    CantorLadder, Closure, LadderPair,
};
pub use domains::{
    cone_angle_deviation, pullback_boundary_real, pullback_boundary_unimodular, pullback_poisson,
    pullback_vekua, pushforward_complex, pushforward_real, ConformalChart,
};
pub use error::{Error, Result};
pub use grid::{
    lp_norm, make_grid, BoundarySignal, ComplexField, Field, Norm, PolarGrid, RealField,
    UnimodularSignal,
};
pub use hilbert::{
    assemble_hilbert, boundary_trace, build_analytic_multiplier, source_antiderivative,
    HilbertEvaluator, HilbertProblem, SingularConfig,
};
pub use poincare::{
    assemble_poincare, build_gamma, directional_derivative, neumann_problem, PoincareEvaluator,
    PoincareProblem,
};
pub use probe::{angular_limit_estimate, pde_residual, ConeProbe, PdeMode};
pub use semilinear::{
    bound_monitor, majorant, picard_continuation, BoundVerdict, Nonlinearity, SemilinearProblem,
    SemilinearSolution, SolveReport, SolverConfig,
};
pub use transforms::{
    boundary_theta_derivative, newtonian_potential, poisson_integral, schwartz_integral,
    pompeiu_transform, TransformBounds,
};
