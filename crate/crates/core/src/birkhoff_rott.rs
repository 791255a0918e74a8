//! Periodic Birkhoff–Rott integral on a discretized vortex sheet.
//!
//! For a curve with `z(α + 2π) = z(α) + M` the conjugate velocity induced on
//! the sheet is
//!
//! ```text
//! W*(α) = 1/(2iM) PV ∫₀^{2π} γ(α') cot(π(z(α) - z(α'))/M) dα'
//!       = 1/(2i) H[γ/z_α](α) + K[z]γ(α)
//! ```
//!
//! where `H` is the periodic Hilbert transform (applied spectrally) and the
//! remainder `K` has a smooth integrand, evaluated with the alternating-point
//! trapezoid rule: targets at even nodes sum over odd sources and vice versa,
//! each with weight `2Δα`.

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::geometry::CurveSample;
use crate::spectral::{hilbert, GridSpec, Parity, PeriodicField};

/// Chord-arc ratio (over quadrature pairs) below which the remainder
/// quadrature is rejected.
pub const QUADRATURE_FLOOR: f64 = 1e-6;

/// Sheet strength `γ = γ̄ + γ₁` sampled on the grid.
#[derive(Debug, Clone)]
pub struct SheetStrength {
    pub gamma: PeriodicField,
    pub gamma_bar: f64,
}

impl SheetStrength {
    /// Strength with prescribed mean `gamma_bar` and zero-mean part `gamma1`.
    pub fn from_parts(gamma_bar: f64, gamma1: &PeriodicField) -> Self {
        let mean1 = gamma1.mean();
        let gamma = gamma1.map(gamma1.parity, |v| gamma_bar + v - mean1);
        Self { gamma, gamma_bar }
    }

    /// Strength whose mean is read off the samples.
    pub fn new(gamma: PeriodicField) -> Self {
        let gamma_bar = gamma.mean();
        Self { gamma, gamma_bar }
    }
}

/// `cot` of a complex argument, stable for large imaginary parts.
pub(crate) fn cot(w: Complex64) -> Complex64 {
    let (x2, y2) = (2.0 * w.re, 2.0 * w.im);
    if y2.abs() > 40.0 {
        // cosh(2y) dominates: cot → -i sgn(y) with exponentially small corrections.
        let e = (-y2.abs()).exp();
        let denom_inv = 2.0 * e;
        return Complex64::new(x2.sin() * denom_inv, -y2.signum() * (1.0 + 2.0 * x2.cos() * e));
    }
    let denom = y2.cosh() - x2.cos();
    Complex64::new(x2.sin() / denom, -y2.sinh() / denom)
}

/// Remainder `K[z]γ` at every node by the alternating trapezoid rule.
pub fn remainder_kernel(c: &CurveSample, s: &SheetStrength, grid: &GridSpec) -> Result<Vec<Complex64>> {
    let n = grid.n_nodes();
    grid.check_len(c.len())?;
    grid.check_len(s.gamma.len())?;

    let weight = 2.0 * grid.spacing();
    let period = c.period;
    let scale = Complex64::new(PI, 0.0) / period;
    // Coefficients 1/(2iP) and 1/(4πi) of the two kernels.
    let outer = Complex64::new(0.0, -0.5) / period;
    let inner = Complex64::new(0.0, -0.25 / PI);
    // cot((α_j - α_l)/2) depends only on (j - l) mod n.
    let flat_cot: Vec<f64> = (0..n)
        .map(|d| if d == 0 { 0.0 } else { 1.0 / (PI * d as f64 / n as f64).tan() })
        .collect();
    let source: Vec<Complex64> = s
        .gamma
        .values
        .iter()
        .zip(&c.z_alpha)
        .map(|(&g, za)| inner * g / za)
        .collect();

    let mut out = Vec::with_capacity(n);
    let mut min_ratio = f64::INFINITY;
    for j in 0..n {
        let mut acc = Complex64::new(0.0, 0.0);
        for l in ((j + 1) % 2..n).step_by(2) {
            let dz = c.z[j] - c.z[l];
            let d = j.abs_diff(l);
            let arc = 2.0 * PI * d.min(n - d) as f64 / n as f64;
            let chord = dz.norm().min((dz - period).norm()).min((dz + period).norm());
            min_ratio = min_ratio.min(chord / arc);
            let k = (j + n - l) % n;
            acc += outer * s.gamma.values[l] * cot(scale * dz) - source[l] * flat_cot[k];
        }
        out.push(acc * weight);
    }
    if min_ratio.is_nan() || min_ratio < QUADRATURE_FLOOR {
        return Err(Error::QuadratureUnreliable { ratio: min_ratio, floor: QUADRATURE_FLOOR });
    }
    Ok(out)
}

/// Conjugate velocity `W*` on the sheet at every node.
pub fn birkhoff_rott(c: &CurveSample, s: &SheetStrength, grid: &GridSpec) -> Result<Vec<Complex64>> {
    let remainder = remainder_kernel(c, s, grid)?;
    let ratio: Vec<Complex64> = s.gamma.values.iter().zip(&c.z_alpha).map(|(&g, za)| g / za).collect();
    let re = hilbert(&PeriodicField::new(ratio.iter().map(|q| q.re).collect(), Parity::None))?;
    let im = hilbert(&PeriodicField::new(ratio.iter().map(|q| q.im).collect(), Parity::None))?;
    let half_over_i = Complex64::new(0.0, -0.5);
    Ok(re
        .values
        .iter()
        .zip(&im.values)
        .zip(remainder)
        .map(|((&hr, &hi), k)| half_over_i * Complex64::new(hr, hi) + k)
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::renormalized_curve;
    use crate::params::PhysParams;

    fn line(n: usize, slope: f64) -> CurveSample {
        let g = GridSpec::with_nodes(n).unwrap();
        CurveSample {
            z: g.nodes().iter().map(|&a| Complex64::new(slope * a, 0.0)).collect(),
            z_alpha: vec![Complex64::new(slope, 0.0); n],
            sigma: slope,
            tangent: vec![Complex64::new(1.0, 0.0); n],
            normal: vec![Complex64::i(); n],
            period: Complex64::new(2.0 * PI, 0.0),
        }
    }

    #[test]
    fn complex_cot_matches_definition() {
        for &w in &[Complex64::new(0.3, 0.2), Complex64::new(-1.1, 2.5), Complex64::new(2.0, -0.01)] {
            let direct = w.cos() / w.sin();
            assert!((cot(w) - direct).norm() < 1e-13, "{w}");
        }
        let far = cot(Complex64::new(0.4, 30.0));
        assert!((far - Complex64::new(0.0, -1.0)).norm() < 1e-20);
    }

    #[test]
    fn remainder_vanishes_on_flat_sheet() {
        let g = GridSpec::with_nodes(64).unwrap();
        let c = line(64, 1.0);
        let gamma = PeriodicField::from_fn(&g, Parity::Even, |a| 0.4 + a.cos() - 0.3 * (3.0 * a).cos());
        let k = remainder_kernel(&c, &SheetStrength::new(gamma), &g).unwrap();
        assert!(k.iter().all(|v| v.norm() < 1e-14));
    }

    #[test]
    fn flat_sheet_constant_strength_induces_nothing() {
        let g = GridSpec::with_nodes(32).unwrap();
        let c = line(32, 1.0);
        let s = SheetStrength::new(PeriodicField::new(vec![1.3; 32], Parity::Even));
        let w = birkhoff_rott(&c, &s, &g).unwrap();
        assert!(w.iter().all(|v| v.norm() < 1e-14));
    }

    #[test]
    fn flat_sheet_cosine_strength() {
        // W* = (1/2i) H[cos] = -(i/2) sin α: purely normal velocity ½ sin α.
        let g = GridSpec::with_nodes(64).unwrap();
        let c = line(64, 1.0);
        let s = SheetStrength::new(PeriodicField::from_fn(&g, Parity::Even, f64::cos));
        let w = birkhoff_rott(&c, &s, &g).unwrap();
        for (v, a) in w.iter().zip(g.nodes()) {
            assert!((v - Complex64::new(0.0, -0.5 * a.sin())).norm() < 1e-14);
            let normal_velocity = (v * Complex64::i()).re;
            assert!((normal_velocity - 0.5 * a.sin()).abs() < 1e-14);
        }
    }

    #[test]
    fn parity_of_velocity_components() {
        let g = GridSpec::with_nodes(64).unwrap();
        let theta = PeriodicField::from_fn(&g, Parity::Odd, |a| 0.4 * a.sin() - 0.1 * (2.0 * a).sin());
        let c = renormalized_curve(&theta, &PhysParams::reference(), &g).unwrap();
        let gamma = PeriodicField::from_fn(&g, Parity::Even, |a| 0.2 + 0.5 * a.cos() + 0.1 * (2.0 * a).cos());
        let w = birkhoff_rott(&c, &SheetStrength::new(gamma), &g).unwrap();
        let n = 64;
        for j in 1..n {
            let (wt, wt_m) = ((w[j] * c.tangent[j]).re, (w[n - j] * c.tangent[n - j]).re);
            let (wn, wn_m) = ((w[j] * c.normal[j]).re, (w[n - j] * c.normal[n - j]).re);
            assert!((wt - wt_m).abs() < 1e-10);
            assert!((wn + wn_m).abs() < 1e-10);
        }
    }

    #[test]
    fn translation_invariance() {
        let g = GridSpec::with_nodes(32).unwrap();
        let theta = PeriodicField::from_fn(&g, Parity::Odd, |a| 0.3 * a.sin());
        let c = renormalized_curve(&theta, &PhysParams::reference(), &g).unwrap();
        let s = SheetStrength::new(PeriodicField::from_fn(&g, Parity::Even, |a| 1.0 + a.cos()));
        let w = birkhoff_rott(&c, &s, &g).unwrap();
        let shifted = birkhoff_rott(&c.translated(Complex64::new(0.7, 0.0)), &s, &g).unwrap();
        for (a, b) in w.iter().zip(&shifted) {
            assert!((a - b).norm() < 1e-13);
        }
    }

    #[test]
    fn coincident_nodes_are_rejected() {
        let g = GridSpec::with_nodes(16).unwrap();
        let mut c = line(16, 1.0);
        c.z[3] = c.z[6];
        let s = SheetStrength::new(PeriodicField::new(vec![1.0; 16], Parity::Even));
        assert!(matches!(remainder_kernel(&c, &s, &g), Err(Error::QuadratureUnreliable { .. })));
    }
}
