//! Follows the k = 1, c_+ branch for the reference parameters until the
//! profile touches itself, and writes the branch file and plot data.
//!
//! `cargo run --release --example reference_branch [out_dir]`

use hydroelastic::io::write_branch_outputs;
use hydroelastic::{run_branch, RunConfig};

fn main() -> hydroelastic::Result<()> {
    let out = std::env::args().nth(1).unwrap_or_else(|| "out/reference".into());
    let cfg = RunConfig { output_path: out, ..RunConfig::default() };
    let branch = run_branch(&cfg.mode()?, &cfg.continuation, &cfg.params, &cfg.grid)?;

    println!("{:>5} {:>12} {:>12} {:>12} {:>14}", "point", "c", "h", "y0", "constraint");
    let step = (branch.points.len() / 12).max(1);
    for (i, pt) in branch.points.iter().enumerate().filter(|(i, _)| i % step == 0) {
        println!("{i:>5} {:>12.6} {:>12.6} {:>12.6} {:>14?}", pt.state.c, pt.h, pt.y0, pt.constraint.kind);
    }
    let written = write_branch_outputs(&cfg.out_dir(), branch, &cfg)?;
    println!("\ntermination: {}", written.branch.termination.label());
    println!("wrote {} and {} profiles", written.branch_file.display(), written.profiles.len());
    Ok(())
}
