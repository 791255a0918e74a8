//! Interface reconstruction from a tangent angle, with displacement and
//! self-intersection diagnostics.
//!
//! `cargo run --example curve_geometry`

use hydroelastic::geometry::{chord_arc_min, displacement_stats, renormalized_curve, self_intersects};
use hydroelastic::{GridSpec, PeriodicField, PhysParams};

fn main() -> hydroelastic::Result<()> {
    let p = PhysParams::reference();
    let g = GridSpec::with_nodes(128)?;
    println!("{:>6} {:>10} {:>10} {:>10} {:>10} {:>6}", "amp", "sigma", "h", "y0", "chord-arc", "cross");
    for amp in [0.0, 0.5, 1.0, 1.5, 2.0, 2.2, 2.3, 2.38, 2.45] {
        let theta = PeriodicField::sine_series(&g, &[amp]);
        let c = match renormalized_curve(&theta, &p, &g) {
            Ok(c) => c,
            Err(e) => {
                println!("{amp:>6.2} {e}");
                continue;
            }
        };
        let d = displacement_stats(&c);
        println!(
            "{amp:>6.2} {:>10.5} {:>10.5} {:>10.5} {:>10.5} {:>6}",
            c.sigma,
            d.h,
            d.y0,
            chord_arc_min(&c),
            self_intersects(&c, 1e-2)
        );
    }
    Ok(())
}
