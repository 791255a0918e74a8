//! Writes a short branch, verifies it, then corrupts one coefficient and
//! verifies again.
//!
//! `cargo run --release --example verify_branch`

use hydroelastic::io::{cmd_branch, verify_file, BranchFile};
use hydroelastic::{ContinuationConfig, GridSpec, RunConfig};

fn main() -> hydroelastic::Result<()> {
    let dir = std::env::temp_dir().join("hydrowave-verify-example");
    let cfg = RunConfig {
        grid: GridSpec::with_nodes(64)?,
        continuation: ContinuationConfig { max_points: 20, ..Default::default() },
        output_path: dir.to_string_lossy().into_owned(),
        ..RunConfig::default()
    };
    let out = cmd_branch(&cfg)?;
    let mut file = BranchFile::read(&out.branch_file)?;
    print!("clean file:\n{}", verify_file(&file, 1e-9).summary());

    file.points[7].a[2] += 1e-4;
    print!("\nafter corrupting point 7:\n{}", verify_file(&file, 1e-9).summary());
    Ok(())
}
