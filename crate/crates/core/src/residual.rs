//! The square nonlinear system for a traveling wave.
//!
//! Unknowns are the sine coefficients `a_k` of the tangent angle, the cosine
//! coefficients `b_k` of the zero-mean sheet strength and the speed `c`. The
//! equations are the sine projections of the tangential (bending) balance
//! `R₁`, the sine projections of the kinematic normal condition `R₂` and one
//! scalar constraint that selects a point on the branch.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::birkhoff_rott::{birkhoff_rott, SheetStrength};
use crate::error::{Error, Result};
use crate::geometry::{displacement_stats, renormalized_curve, CurveSample};
use crate::params::PhysParams;
use crate::spectral::{deriv, sine_coefficients, GridSpec, Parity, PeriodicField};

/// Truncated Fourier representation of a traveling wave.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WaveState {
    /// `θ = Σ a_k sin(kα)`.
    pub a: Vec<f64>,
    /// `γ = γ̄ + Σ b_k cos(kα)`.
    pub b: Vec<f64>,
    pub c: f64,
}

impl WaveState {
    /// Flat interface moving at speed `c`.
    pub fn flat(n_modes: usize, c: f64) -> Self {
        Self { a: vec![0.0; n_modes], b: vec![0.0; n_modes], c }
    }

    pub fn n_modes(&self) -> usize {
        self.a.len()
    }

    /// Unknown vector `[a_1..a_N, b_1..b_N, c]`.
    pub fn to_vec(&self) -> Vec<f64> {
        let mut v = Vec::with_capacity(2 * self.a.len() + 1);
        v.extend_from_slice(&self.a);
        v.extend_from_slice(&self.b);
        v.push(self.c);
        v
    }

    pub fn from_slice(x: &[f64]) -> Result<Self> {
        if x.len() < 3 || x.len().is_multiple_of(2) {
            return Err(Error::InvalidInput(format!("unknown vector must have odd length 2N+1, got {}", x.len())));
        }
        let n = (x.len() - 1) / 2;
        Ok(Self { a: x[..n].to_vec(), b: x[n..2 * n].to_vec(), c: x[2 * n] })
    }

    pub fn is_finite(&self) -> bool {
        self.a.iter().chain(&self.b).all(|v| v.is_finite()) && self.c.is_finite()
    }

    /// Same wave with the coefficient arrays zero-padded (or truncated) to
    /// `n_modes` entries.
    pub fn resized(&self, n_modes: usize) -> Self {
        let mut a = self.a.clone();
        let mut b = self.b.clone();
        a.resize(n_modes, 0.0);
        b.resize(n_modes, 0.0);
        Self { a, b, c: self.c }
    }

    pub fn theta_field(&self, g: &GridSpec) -> PeriodicField {
        PeriodicField::sine_series(g, &self.a)
    }

    pub fn gamma_field(&self, g: &GridSpec, gamma_bar: f64) -> PeriodicField {
        PeriodicField::cosine_series(g, gamma_bar, &self.b)
    }

    pub fn curve(&self, p: &PhysParams, g: &GridSpec) -> Result<CurveSample> {
        renormalized_curve(&self.theta_field(g), p, g)
    }
}

/// Which scalar quantity the extra equation pins.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ConstraintKind {
    /// Height of the `α = 0` node above the mean height.
    DisplacementY0,
    /// Sine coefficient `a_m` of the tangent angle.
    FourierMode,
    /// The wave speed itself.
    Speed,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ConstraintSpec {
    pub kind: ConstraintKind,
    /// Mode `m` for [`ConstraintKind::FourierMode`]; ignored otherwise.
    pub mode_index: usize,
    pub target: f64,
}

impl ConstraintSpec {
    pub fn displacement(target: f64) -> Self {
        Self { kind: ConstraintKind::DisplacementY0, mode_index: 0, target }
    }

    pub fn fourier_mode(mode_index: usize, target: f64) -> Self {
        Self { kind: ConstraintKind::FourierMode, mode_index, target }
    }

    pub fn speed(target: f64) -> Self {
        Self { kind: ConstraintKind::Speed, mode_index: 0, target }
    }

    pub fn validate(&self, n_modes: usize) -> Result<()> {
        if !self.target.is_finite() {
            return Err(Error::InvalidInput("constraint target must be finite".into()));
        }
        if self.kind == ConstraintKind::FourierMode && !(1..=n_modes).contains(&self.mode_index) {
            return Err(Error::InvalidInput(format!(
                "fourier constraint mode {} outside 1..={n_modes}",
                self.mode_index
            )));
        }
        Ok(())
    }

    /// Current value of the constrained quantity.
    pub fn measure(&self, x: &WaveState, curve: &CurveSample) -> f64 {
        match self.kind {
            ConstraintKind::DisplacementY0 => displacement_stats(curve).y0,
            ConstraintKind::FourierMode => x.a[self.mode_index - 1],
            ConstraintKind::Speed => x.c,
        }
    }
}

/// Projected residual, laid out like the unknowns.
#[derive(Debug, Clone, PartialEq)]
pub struct ResidualVector {
    pub r_theta: Vec<f64>,
    pub r_gamma: Vec<f64>,
    pub r_constraint: f64,
}

impl ResidualVector {
    pub fn to_vec(&self) -> Vec<f64> {
        let mut v = Vec::with_capacity(2 * self.r_theta.len() + 1);
        v.extend_from_slice(&self.r_theta);
        v.extend_from_slice(&self.r_gamma);
        v.push(self.r_constraint);
        v
    }

    pub fn len(&self) -> usize {
        self.r_theta.len() + self.r_gamma.len() + 1
    }

    pub fn is_empty(&self) -> bool {
        false
    }
}

/// Infinity norm over every entry.
pub fn residual_norm(r: &ResidualVector) -> f64 {
    r.r_theta
        .iter()
        .chain(&r.r_gamma)
        .chain(std::iter::once(&r.r_constraint))
        .fold(0.0, |m, v| m.max(v.abs()))
}

/// Nodal residual fields of the two balance laws.
#[derive(Debug, Clone)]
pub struct ResidualFields {
    pub tangential: PeriodicField,
    pub normal: PeriodicField,
    pub curve: CurveSample,
}

fn zip_map(a: &[f64], b: &[f64], f: impl Fn(f64, f64) -> f64) -> Vec<f64> {
    a.iter().zip(b).map(|(&x, &y)| f(x, y)).collect()
}

pub fn residual_fields(x: &WaveState, p: &PhysParams, g: &GridSpec) -> Result<ResidualFields> {
    if x.a.len() != g.n_modes() || x.b.len() != g.n_modes() {
        return Err(Error::InvalidInput(format!(
            "state has {}/{} coefficients but the grid retains {} modes",
            x.a.len(),
            x.b.len(),
            g.n_modes()
        )));
    }
    if !x.is_finite() {
        return Err(Error::EvaluationFailure("non-finite state".into()));
    }
    let theta = x.theta_field(g);
    let gamma = x.gamma_field(g, p.gamma_bar);
    let curve = renormalized_curve(&theta, p, g)?;
    let sigma = curve.sigma;
    let w = birkhoff_rott(&curve, &SheetStrength { gamma: gamma.clone(), gamma_bar: p.gamma_bar }, g)?;

    let proj = |v: &[Complex64]| -> Vec<f64> { w.iter().zip(v).map(|(w, v)| (w * v).re).collect() };
    let w_t = proj(&curve.tangent);
    let w_n = proj(&curve.normal);
    let field = |v: Vec<f64>| PeriodicField::new(v, Parity::None);

    let th = &theta.values;
    let t1 = deriv(&theta, 1)?.values;
    let t2 = deriv(&theta, 2)?.values;
    let t4 = deriv(&theta, 4)?.values;
    let cos_t: Vec<f64> = th.iter().map(|t| t.cos()).collect();
    let sin_t: Vec<f64> = th.iter().map(|t| t.sin()).collect();
    let v_w = zip_map(&cos_t, &w_t, |ct, wt| x.c * ct - wt);

    let d_cos = deriv(&field(cos_t.clone()), 1)?.values;
    let d_vg = deriv(&field(zip_map(&v_w, &gamma.values, |v, g| v * g)), 1)?.values;
    let d_g2 = deriv(&field(gamma.values.iter().map(|g| g * g).collect()), 1)?.values;
    let d_v2 = deriv(&field(v_w.iter().map(|v| v * v).collect()), 1)?.values;

    let bend = p.bending / sigma.powi(3);
    let stretch = p.tau1 * sigma * sigma;
    let tangential: Vec<f64> = (0..g.n_nodes())
        .map(|j| {
            -bend * (t4[j] + 1.5 * t1[j] * t1[j] * t2[j] - stretch * t2[j]) - 2.0 * p.atilde * d_cos[j]
                + d_vg[j] / sigma
                - p.atwood * (d_g2[j] / (4.0 * sigma * sigma) + 2.0 * sigma * sin_t[j] + d_v2[j])
        })
        .collect();
    let normal = zip_map(&w_n, &sin_t, |wn, st| wn + x.c * st);

    if tangential.iter().chain(&normal).any(|v| !v.is_finite()) {
        return Err(Error::EvaluationFailure("non-finite residual".into()));
    }
    Ok(ResidualFields {
        tangential: PeriodicField::new(tangential, Parity::Odd),
        normal: PeriodicField::new(normal, Parity::Odd),
        curve,
    })
}

/// Residual of the `2N+1` equations at `x`.
pub fn eval_residual(x: &WaveState, p: &PhysParams, cs: &ConstraintSpec, g: &GridSpec) -> Result<ResidualVector> {
    cs.validate(g.n_modes())?;
    let f = residual_fields(x, p, g)?;
    let n = g.n_modes();
    Ok(ResidualVector {
        r_theta: sine_coefficients(&f.tangential.values, n),
        r_gamma: sine_coefficients(&f.normal.values, n),
        r_constraint: cs.measure(x, &f.curve) - cs.target,
    })
}
