//! Birkhoff-Rott velocity of a vortex sheet: the flat sheet against its
//! closed form, then spectral convergence on a curved sheet.
//!
//! `cargo run --example birkhoff_rott`

use hydroelastic::geometry::renormalized_curve;
use hydroelastic::{birkhoff_rott, GridSpec, Parity, PeriodicField, PhysParams, SheetStrength};

fn main() -> hydroelastic::Result<()> {
    let p = PhysParams::reference();

    let g = GridSpec::with_nodes(64)?;
    let flat = renormalized_curve(&PeriodicField::new(vec![0.0; 64], Parity::Odd), &p, &g)?;
    let gamma = PeriodicField::from_fn(&g, Parity::Even, f64::cos);
    let w = birkhoff_rott(&flat, &SheetStrength::new(gamma), &g)?;
    let err = g.nodes().iter().zip(&w).map(|(a, w)| (w.im + 0.5 * a.sin()).abs().max(w.re.abs())).fold(0.0, f64::max);
    println!("flat sheet, gamma = cos: max |W* + (i/2) sin| = {err:.2e}");

    let velocity_at_quarter = |n: usize| -> hydroelastic::Result<num_complex::Complex64> {
        let g = GridSpec::with_nodes(n)?;
        let theta = PeriodicField::from_fn(&g, Parity::Odd, |a| 0.2 * a.sin());
        let curve = renormalized_curve(&theta, &p, &g)?;
        let gamma = PeriodicField::from_fn(&g, Parity::Even, |a| 1.0 / (1.25 - a.cos()));
        Ok(birkhoff_rott(&curve, &SheetStrength::new(gamma), &g)?[n / 4])
    };
    let reference = velocity_at_quarter(512)?;
    println!("\ncurved sheet, W* at alpha = pi/2 vs 512 nodes:");
    for n in [8, 16, 32, 64, 128] {
        println!("  n = {n:3}: error {:.2e}", (velocity_at_quarter(n)? - reference).norm());
    }
    Ok(())
}
