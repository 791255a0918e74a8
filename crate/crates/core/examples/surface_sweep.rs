//! One branch per Atilde value on a coarse grid, summarized by terminal
//! amplitude and termination.
//!
//! `cargo run --release --example surface_sweep`

use hydroelastic::{sweep_surface, BranchSign, ContinuationConfig, GridSpec, LinearMode, PhysParams};

fn main() -> hydroelastic::Result<()> {
    let p = PhysParams::reference();
    let g = GridSpec::with_nodes(32)?;
    let mode = LinearMode::new(1, BranchSign::Plus, &p)?;
    let cfg = ContinuationConfig { max_points: 60, ..Default::default() };
    let atildes = [0.1, 0.2, 0.4, 0.8];
    for (a, res) in atildes.iter().zip(sweep_surface(&p, &atildes, &mode, &cfg, &g)?) {
        match res {
            Ok(b) => println!(
                "Atilde = {a:<4} points {:>3}  c {:>9.5}  h {:>8.5}  {}",
                b.points.len(),
                b.last().state.c,
                b.last().h,
                b.termination.label()
            ),
            Err(e) => println!("Atilde = {a:<4} failed: {e}"),
        }
    }
    Ok(())
}
