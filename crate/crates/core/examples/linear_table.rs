//! Bifurcation speeds and odd-crossing membership for the first wavenumbers.
//!
//! `cargo run --example linear_table`

use hydroelastic::io::{format_linear_table, linear_table};
use hydroelastic::{c_pm, lambda_k, lambda_perturb, BranchSign, PhysParams};

fn main() -> hydroelastic::Result<()> {
    let p = PhysParams::reference();
    print!("{}", format_linear_table(&linear_table(&p, 8)));

    let c = c_pm(1, BranchSign::Plus, &p).expect("k = 1 has real speeds here");
    println!("\nlambda_1 near c_+(1):");
    for eps in [1e-2, 1e-3, 1e-4] {
        let exact = lambda_k(c + eps, 1, &p);
        let approx = lambda_perturb(1, eps, BranchSign::Plus, &p).unwrap();
        println!("  eps = {eps:e}: lambda = {exact:+.6e}, expansion = {approx:+.6e}");
    }

    let standing = PhysParams { atwood: 0.0, gamma_bar: 0.0, ..p };
    let cs = c_pm(1, BranchSign::Plus, &standing).unwrap();
    println!("\nA = 0, gamma_bar = 0: c_+(1) = {cs:.6}, c_-(1) = {:.6}", c_pm(1, BranchSign::Minus, &standing).unwrap());
    Ok(())
}
