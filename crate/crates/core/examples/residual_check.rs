//! The traveling-wave residual: zero on the flat state, quadratic along the
//! linear eigen direction.
//!
//! `cargo run --example residual_check`

use hydroelastic::{eval_residual, residual_norm, BranchSign, ConstraintSpec, GridSpec, LinearMode, PhysParams, WaveState};

fn main() -> hydroelastic::Result<()> {
    let p = PhysParams::reference();
    let g = GridSpec::with_nodes(128)?;
    let mode = LinearMode::new(1, BranchSign::Plus, &p)?;

    let flat = eval_residual(&WaveState::flat(g.n_modes(), mode.c), &p, &ConstraintSpec::speed(mode.c), &g)?;
    println!("flat state at c_+(1): |R| = {:.2e}", residual_norm(&flat));

    let dir = mode.direction(&p, g.n_modes())?;
    let mut prev: Option<f64> = None;
    for eps in [1e-2, 5e-3, 2.5e-3, 1.25e-3] {
        let x = WaveState { a: dir.a.iter().map(|v| v * eps).collect(), b: dir.b.iter().map(|v| v * eps).collect(), c: mode.c };
        let r = residual_norm(&eval_residual(&x, &p, &ConstraintSpec::speed(mode.c), &g)?);
        match prev {
            Some(q) => println!("eps = {eps:.2e}: |R| = {r:.3e}, ratio {:.3}", q / r),
            None => println!("eps = {eps:.2e}: |R| = {r:.3e}"),
        }
        prev = Some(r);
    }
    Ok(())
}
