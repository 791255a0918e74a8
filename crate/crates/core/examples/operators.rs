//! Spectral operators on a periodic grid: derivatives, Hilbert transform,
//! inverse fourth derivative and the zero-mean projection.
//!
//! `cargo run --example operators`

use hydroelastic::spectral::{deriv, hilbert, inv_deriv4, project_zero_mean, to_modes};
use hydroelastic::{GridSpec, Parity, PeriodicField};

fn main() -> hydroelastic::Result<()> {
    let g = GridSpec::with_nodes(64)?;
    let f = PeriodicField::from_fn(&g, Parity::None, |a| 0.5 + (2.0 * a).sin() + 0.25 * (5.0 * a).cos());

    let df = deriv(&f, 1)?;
    let exact = PeriodicField::from_fn(&g, Parity::None, |a| 2.0 * (2.0 * a).cos() - 1.25 * (5.0 * a).sin());
    println!("d/da error:            {:.2e}", df.max_abs_diff(&exact));

    let hh = hilbert(&hilbert(&f)?)?;
    let pf = project_zero_mean(&f)?;
    let minus_pf = pf.map(Parity::None, |v| -v);
    println!("H^2 + P error:         {:.2e}", hh.max_abs_diff(&minus_pf));

    let back = inv_deriv4(&deriv(&f, 4)?)?;
    println!("inv4(d4 f) - Pf:       {:.2e}", back.max_abs_diff(&pf));

    let s = to_modes(&f, &g)?;
    println!("d4 inv4 - P (modes):   {:.2e}", s.inv_deriv4().deriv(4).max_abs_diff(&s.project_zero_mean()));
    println!("\nnonzero modes:");
    for (k, c) in s.centered().into_iter().filter(|(k, c)| *k >= 0 && c.norm() > 1e-12) {
        println!("  k = {k:2}: {c:.4}");
    }
    Ok(())
}
