//! Broyden's method on a small nonlinear system, then on the seed point of
//! the reference branch.
//!
//! `cargo run --release --example broyden_solve`

use hydroelastic::broyden::solve;
use hydroelastic::continuation::seed_point;
use hydroelastic::{BranchSign, BroydenConfig, GridSpec, LinearMode, PhysParams};

fn main() -> hydroelastic::Result<()> {
    let cfg = BroydenConfig::default();
    let rep = solve(|x| Ok(vec![x[0] * x[0] + x[1] * x[1] - 4.0, x[0] - x[1].sin()]), &[1.0, 1.0], &cfg);
    println!("circle/sine: x = {:?}, {} iterations, |F| = {:.1e}", rep.solution, rep.iterations, rep.final_residual);

    let p = PhysParams::reference();
    let g = GridSpec::with_nodes(64)?;
    let mode = LinearMode::new(1, BranchSign::Plus, &p)?;
    let seed = seed_point(&mode, 1e-3, &p, &g, &cfg)?;
    println!(
        "seed at amplitude 1e-3: converged {} in {} iterations, c = {:.9} (linear {:.9})",
        seed.converged, seed.iterations, seed.solution.c, mode.c
    );
    Ok(())
}
