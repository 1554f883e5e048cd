use std::f64::consts::PI;
use num_complex::Complex64;
use diskbvp::probe::PdeResidualInput;
use diskbvp::{
    make_grid, pde_residual, picard_continuation, BoundarySignal, Closure, Field, Nonlinearity,
    PoincareProblem, RealField, SemilinearProblem, SemilinearSolution, SolverConfig,
    UnimodularSignal,
};

fn bump(z: Complex64, rho: f64) -> f64 {
    let s = z.norm() / rho;
    if s < 1.0 { (1.0 - 1.0 / (1.0 - s * s)).exp() } else { 0.0 }
}

#[test]
#[ignore]
fn tune_centered_poisson() {
    for (n_r, n) in [(64usize, 128usize), (96, 256)] {
        let grid = make_grid(n_r, n, 0.9, 0.5).unwrap();
        for (amp, phi_amp) in [(-2.0, 0.05), (-4.0, 0.02), (-4.0, 0.05), (-4.0, 0.1)] {
            let phi = BoundarySignal::sample_real(n, |t| phi_amp * t.cos());
            let nu = UnimodularSignal::from_phase(n, |t| PI + t + 0.3);
            let problem = PoincareProblem::new(nu, phi, Closure::None, None).unwrap();
            let coeff = RealField::from_fn(grid.clone(), Some(0.5), |z| amp * bump(z, 0.5));
            let nl = Nonlinearity::power_clamped(0.5).unwrap();
            match picard_continuation(
                SemilinearProblem::Poisson { problem: &problem, coefficient: &coeff },
                &nl,
                &SolverConfig::default(),
            ) {
                Ok((solution, report)) => {
                    let SemilinearSolution::Poisson { solution, .. } = solution else { panic!() };
                    let mut min_u = f64::MAX;
                    for i in 0..grid.layers_within(0.5) {
                        for j in 0..grid.n_theta {
                            min_u = min_u.min(solution.value(i, j));
                        }
                    }
                    let res = pde_residual(
                        PdeResidualInput::Poisson { solution: &solution, coefficient: &coeff },
                        &nl,
                    ).unwrap();
                    println!(
                        "{n_r}x{n} amp {amp:+.1} phi {phi_amp:.2}: minU {min_u:+.4}, res {res:.3e}, iters {:?}",
                        report.stage_iterations
                    );
                }
                Err(e) => println!("{n_r}x{n} amp {amp:+.1} phi {phi_amp:.2}: ERR {e}"),
            }
        }
    }
}
