//! The interface as a curve: reconstruction from the tangent angle, the
//! chord-arc diagnostic and displacement measures.

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::params::PhysParams;
use crate::spectral::{self, GridSpec, PeriodicField};

/// Floor on `mean(cos θ)` below which the curve is treated as having
/// unbounded length.
pub const DEFAULT_COS_FLOOR: f64 = 1e-8;

/// Default threshold of [`self_intersects`] on the chord-arc ratio.
pub const DEFAULT_SELF_INTERSECTION_TOL: f64 = 1e-2;

/// Nodal geometry of one period of the interface.
#[derive(Debug, Clone)]
pub struct CurveSample {
    pub z: Vec<Complex64>,
    pub z_alpha: Vec<Complex64>,
    /// Arclength density `|z_α|`, constant along the curve.
    pub sigma: f64,
    pub tangent: Vec<Complex64>,
    pub normal: Vec<Complex64>,
    /// Shift `z(α + 2π) - z(α)` between consecutive periods.
    pub period: Complex64,
}

impl CurveSample {
    pub fn len(&self) -> usize {
        self.z.len()
    }

    pub fn is_empty(&self) -> bool {
        self.z.is_empty()
    }

    pub fn x(&self) -> Vec<f64> {
        self.z.iter().map(|z| z.re).collect()
    }

    pub fn y(&self) -> Vec<f64> {
        self.z.iter().map(|z| z.im).collect()
    }

    /// Copy of the curve moved by `shift` (tangents and normals unchanged).
    pub fn translated(&self, shift: Complex64) -> CurveSample {
        let mut c = self.clone();
        c.z.iter_mut().for_each(|z| *z += shift);
        c
    }

    /// Copy of the curve rotated by `angle` about the origin.
    pub fn rotated(&self, angle: f64) -> CurveSample {
        let r = Complex64::from_polar(1.0, angle);
        let rot = |v: &Vec<Complex64>| v.iter().map(|z| z * r).collect::<Vec<_>>();
        CurveSample {
            z: rot(&self.z),
            z_alpha: rot(&self.z_alpha),
            sigma: self.sigma,
            tangent: rot(&self.tangent),
            normal: rot(&self.normal),
            period: self.period * r,
        }
    }

    /// Copy of the curve dilated by `factor`.
    pub fn scaled(&self, factor: f64) -> CurveSample {
        CurveSample {
            z: self.z.iter().map(|z| z * factor).collect(),
            z_alpha: self.z_alpha.iter().map(|z| z * factor).collect(),
            sigma: self.sigma * factor,
            tangent: self.tangent.clone(),
            normal: self.normal.clone(),
            period: self.period * factor,
        }
    }
}

pub fn mean_cos(theta: &PeriodicField) -> f64 {
    theta.values.iter().map(|t| t.cos()).sum::<f64>() / theta.len() as f64
}

/// `σ = M / (2π mean(cos θ))`.
pub fn sigma_of_theta(theta: &PeriodicField, params: &PhysParams) -> Result<f64> {
    sigma_of_theta_with_floor(theta, params, DEFAULT_COS_FLOOR)
}

pub fn sigma_of_theta_with_floor(theta: &PeriodicField, params: &PhysParams, cos_floor: f64) -> Result<f64> {
    if theta.is_empty() {
        return Err(Error::InvalidInput("empty tangent-angle field".into()));
    }
    let mc = mean_cos(theta);
    if mc.is_nan() || mc <= cos_floor {
        return Err(Error::LengthBlowUp { mean_cos: mc, floor: cos_floor });
    }
    Ok(params.period / (2.0 * PI * mc))
}

/// Curve with tangent angle `θ`, rescaled so that one period spans exactly
/// `M` horizontally and anchored at `z(0) = 0`.
///
/// The antiderivative of `e^{iθ}` is split into its mean times `α` plus the
/// spectral antiderivative of the zero-mean remainder. The mean of `sin θ` is
/// removed together with the imaginary part of the secular term, leaving the
/// secular part `Mα/2π`.
pub fn renormalized_curve(theta: &PeriodicField, params: &PhysParams, grid: &GridSpec) -> Result<CurveSample> {
    grid.check_len(theta.len())?;
    let sigma = sigma_of_theta(theta, params)?;
    let n = grid.n_nodes();

    let tangent: Vec<Complex64> = theta.values.iter().map(|&t| Complex64::from_polar(1.0, t)).collect();
    let mut spec = tangent.clone();
    spectral::forward(&mut spec);
    for (idx, c) in spec.iter_mut().enumerate() {
        let k = spectral::wavenumber(idx, n);
        if k == 0 || 2 * idx == n {
            *c = Complex64::new(0.0, 0.0);
        } else {
            *c /= Complex64::new(0.0, k as f64);
        }
    }
    spectral::inverse(&mut spec);
    let anchor = spec[0];

    let slope = params.period / (2.0 * PI);
    let z: Vec<Complex64> = grid
        .nodes()
        .iter()
        .zip(&spec)
        .map(|(&a, &f)| Complex64::new(slope * a, 0.0) + sigma * (f - anchor))
        .collect();
    let z_alpha = tangent.iter().map(|t| t * sigma).collect();
    let normal = tangent.iter().map(|t| t * Complex64::i()).collect();

    Ok(CurveSample {
        z,
        z_alpha,
        sigma,
        tangent,
        normal,
        period: Complex64::new(params.period, 0.0),
    })
}

fn periodic_distance(n: usize, j: usize, l: usize) -> f64 {
    let d = j.abs_diff(l);
    let d = d.min(n - d);
    2.0 * PI * d as f64 / n as f64
}

/// Smallest ratio of chord length to periodic parameter distance over all
/// node pairs, with the neighbouring period images included in the chord.
pub fn chord_arc_min(c: &CurveSample) -> f64 {
    let n = c.len();
    let mut min = f64::INFINITY;
    for j in 0..n {
        for l in (j + 1)..n {
            let d = c.z[j] - c.z[l];
            let chord = [d, d - c.period, d + c.period]
                .iter()
                .map(|w| w.norm())
                .fold(f64::INFINITY, f64::min);
            min = min.min(chord / periodic_distance(n, j, l));
        }
    }
    min
}

fn orientation(a: Complex64, b: Complex64, p: Complex64) -> f64 {
    let u = b - a;
    let v = p - a;
    u.re * v.im - u.im * v.re
}

fn segments_cross(p1: Complex64, p2: Complex64, q1: Complex64, q2: Complex64) -> bool {
    orientation(p1, p2, q1) * orientation(p1, p2, q2) < 0.0
        && orientation(q1, q2, p1) * orientation(q1, q2, p2) < 0.0
}

/// Whether the polygon through the nodes crosses itself or one of its
/// neighbouring period images. Catches overturned profiles that have passed
/// through each other between two nodes.
pub fn polygon_crosses(c: &CurveSample) -> bool {
    let n = c.len();
    // Vertices of three consecutive periods plus the closing vertex.
    let verts: Vec<Complex64> = (-1i64..=1)
        .flat_map(|m| c.z.iter().map(move |z| z + c.period * m as f64))
        .chain(std::iter::once(c.z[0] + c.period * 2.0))
        .collect();
    for i in n..2 * n {
        for j in 0..verts.len() - 1 {
            if i.abs_diff(j) <= 1 {
                continue;
            }
            if segments_cross(verts[i], verts[i + 1], verts[j], verts[j + 1]) {
                return true;
            }
        }
    }
    false
}

/// Self-intersection test: the chord-arc ratio falls below `tol` or the
/// nodal polygon crosses itself.
pub fn self_intersects(c: &CurveSample, tol: f64) -> bool {
    chord_arc_min(c) < tol || polygon_crosses(c)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DisplacementStats {
    /// Total displacement `max y - min y`.
    pub h: f64,
    /// Height of the `α = 0` node above the mean height.
    pub y0: f64,
}

pub fn displacement_stats(c: &CurveSample) -> DisplacementStats {
    let y = c.y();
    let max = y.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let min = y.iter().copied().fold(f64::INFINITY, f64::min);
    let mean = y.iter().sum::<f64>() / y.len() as f64;
    DisplacementStats { h: max - min, y0: y[0] - mean }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spectral::Parity;

    fn params(m: f64) -> PhysParams {
        PhysParams { period: m, ..PhysParams::reference() }
    }

    fn flat(n: usize, m: f64) -> CurveSample {
        let g = GridSpec::with_nodes(n).unwrap();
        renormalized_curve(&PeriodicField::new(vec![0.0; n], Parity::Odd), &params(m), &g).unwrap()
    }

    #[test]
    fn flat_sigma() {
        let theta = PeriodicField::new(vec![0.0; 16], Parity::Odd);
        assert!((sigma_of_theta(&theta, &params(2.0 * PI)).unwrap() - 1.0).abs() < 1e-15);
        assert!((sigma_of_theta(&theta, &params(4.0 * PI)).unwrap() - 2.0).abs() < 1e-15);
    }

    #[test]
    fn sigma_of_small_wave_matches_trapezoid_quadrature() {
        let g = GridSpec::with_nodes(64).unwrap();
        let theta = PeriodicField::from_fn(&g, Parity::Odd, |a| 0.3 * a.sin());
        // Trapezoid oracle of (1/2π)∫cos(0.3 sin α) dα on a much finer grid.
        let m = 4096;
        let quad = (0..m).map(|j| (0.3 * (2.0 * PI * j as f64 / m as f64).sin()).cos()).sum::<f64>() / m as f64;
        let sigma = sigma_of_theta(&theta, &params(2.0 * PI)).unwrap();
        assert!((sigma - 1.0 / quad).abs() < 1e-12);
    }

    #[test]
    fn length_blow_up() {
        let theta = PeriodicField::new(vec![PI / 2.0; 8], Parity::None);
        assert!(matches!(sigma_of_theta(&theta, &params(2.0 * PI)), Err(Error::LengthBlowUp { .. })));
    }

    #[test]
    fn flat_curve_is_a_line() {
        let c = flat(32, 2.0 * PI);
        let g = GridSpec::with_nodes(32).unwrap();
        for (z, a) in c.z.iter().zip(g.nodes()) {
            assert!((z - Complex64::new(a, 0.0)).norm() < 1e-14);
        }
        assert!(c.tangent.iter().all(|t| (t - 1.0).norm() < 1e-15));
        let d = displacement_stats(&c);
        assert_eq!((d.h, d.y0), (0.0, 0.0));
        assert!(!self_intersects(&c, DEFAULT_SELF_INTERSECTION_TOL));
    }

    #[test]
    fn flat_chord_arc_ratio_is_one() {
        let c = flat(32, 2.0 * PI);
        assert!((chord_arc_min(&c) - 1.0).abs() < 1e-12);
        assert!((chord_arc_min(&c.scaled(2.0)) - 2.0).abs() < 1e-12);
    }

    #[test]
    fn small_amplitude_height_is_first_order_cosine() {
        let g = GridSpec::with_nodes(64).unwrap();
        let eps = 1e-3;
        let theta = PeriodicField::from_fn(&g, Parity::Odd, |a| eps * a.sin());
        let c = renormalized_curve(&theta, &params(2.0 * PI), &g).unwrap();
        // y = σ∫ sin θ ≈ ε(1 - cos α) to first order.
        for (z, a) in c.z.iter().zip(g.nodes()) {
            assert!((z.im - eps * (1.0 - a.cos())).abs() < 2.0 * eps * eps);
        }
        let d = displacement_stats(&c);
        assert!((d.h - 2.0 * eps).abs() < 2.0 * eps * eps);
        assert!((d.y0 + eps).abs() < 2.0 * eps * eps);
        let lifted = c.translated(Complex64::new(0.0, 3.0));
        assert!((displacement_stats(&lifted).h - d.h).abs() < 1e-15);
    }

    #[test]
    fn curve_invariants_for_a_steep_wave() {
        let g = GridSpec::with_nodes(128).unwrap();
        let m = 3.0;
        let theta = PeriodicField::from_fn(&g, Parity::Odd, |a| 0.9 * a.sin() + 0.2 * (2.0 * a).sin());
        let c = renormalized_curve(&theta, &params(m), &g).unwrap();
        for za in &c.z_alpha {
            assert!((za.norm() - c.sigma).abs() / c.sigma < 1e-12);
        }
        for (t, nrm) in c.tangent.iter().zip(&c.normal) {
            assert!((nrm - t * Complex64::i()).norm() < 1e-15);
        }
        // y is even: y(α_j) = y(α_{n-j}).
        let n = g.n_nodes();
        for j in 1..n {
            assert!((c.z[j].im - c.z[n - j].im).abs() < 1e-10);
        }
        // Continuing the antiderivative one node past the end reaches z(0) + M.
        let extrapolated = c.z[n - 1] + 0.5 * g.spacing() * (c.z_alpha[n - 1] + c.z_alpha[0]);
        assert!((extrapolated - Complex64::new(m, 0.0)).norm() < 1e-3);
        let ratio = chord_arc_min(&c);
        assert!((chord_arc_min(&c.translated(Complex64::new(1.0, -2.0))) - ratio).abs() < 1e-12);
        assert!((chord_arc_min(&c.rotated(0.7)) - ratio).abs() < 1e-12);
    }

    /// An Ω-shaped period: two flat feet joined by a loop of radius 1 whose
    /// neck has width `gap`. `drop` lowers the loop so that it cuts the feet.
    fn omega(n: usize, gap: f64, drop: f64) -> CurveSample {
        let g = GridSpec::with_nodes(n).unwrap();
        let r = 1.0_f64;
        let delta = (gap / (2.0 * r)).asin();
        let centre = Complex64::new(0.0, r * delta.cos() - drop);
        let z: Vec<Complex64> = g
            .nodes()
            .iter()
            .map(|&a| {
                let s = a / (2.0 * PI);
                if s < 0.25 {
                    Complex64::new(-PI + (PI - gap / 2.0) * s / 0.25, 0.0)
                } else if s < 0.75 {
                    let phi = -PI / 2.0 - delta - (s - 0.25) / 0.5 * (2.0 * PI - 2.0 * delta);
                    centre + Complex64::from_polar(r, phi)
                } else {
                    Complex64::new(gap / 2.0 + (PI - gap / 2.0) * (s - 0.75) / 0.25, 0.0)
                }
            })
            .collect();
        CurveSample {
            z_alpha: vec![Complex64::new(1.0, 0.0); n],
            tangent: vec![Complex64::new(1.0, 0.0); n],
            normal: vec![Complex64::i(); n],
            sigma: 1.0,
            z,
            period: Complex64::new(2.0 * PI, 0.0),
        }
    }

    #[test]
    fn closing_gap_drives_ratio_to_zero() {
        let wide = chord_arc_min(&omega(64, 0.5, 0.0));
        let near = chord_arc_min(&omega(64, 1e-2, 0.0));
        let touching = chord_arc_min(&omega(64, 1e-4, 0.0));
        assert!(wide > near && near > touching);
        assert!(touching < 1e-3);
        assert!(self_intersects(&omega(64, 1e-4, 0.0), DEFAULT_SELF_INTERSECTION_TOL));
        assert!(!self_intersects(&omega(64, 0.5, 0.0), DEFAULT_SELF_INTERSECTION_TOL));
    }

    #[test]
    fn crossing_polygon_is_detected() {
        assert!(polygon_crosses(&omega(64, 0.3, 0.4)));
        assert!(!polygon_crosses(&omega(64, 0.3, 0.0)));
    }
}
