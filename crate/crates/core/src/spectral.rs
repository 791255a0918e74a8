//! Discrete Fourier machinery on a uniform periodic grid over `α ∈ [0, 2π)`.
//!
//! Every operator here is an exact Fourier multiplier: derivatives carry the
//! symbol `(ik)^order`, the Hilbert transform `-i sgn(k)`, the fourth-order
//! inverse derivative `k^-4` (zero on the mean), and the zero-mean projection
//! removes the `k = 0` coefficient. At the Nyquist wavenumber the symbol is
//! replaced by the average of its values at `±n/2`, which keeps real fields
//! real (odd-order symbols vanish there).

use std::cell::RefCell;
use std::f64::consts::PI;
use std::sync::Arc;

use num_complex::Complex64;
use rustfft::{Fft, FftPlanner};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

thread_local! {
    static PLANNER: RefCell<FftPlanner<f64>> = RefCell::new(FftPlanner::new());
}

fn plan(n: usize, inverse: bool) -> Arc<dyn Fft<f64>> {
    PLANNER.with(|p| {
        let mut p = p.borrow_mut();
        if inverse {
            p.plan_fft_inverse(n)
        } else {
            p.plan_fft_forward(n)
        }
    })
}

/// Forward transform normalized so that `out[k] = (1/n) Σ_j f_j e^{-ikα_j}`.
pub(crate) fn forward(buf: &mut [Complex64]) {
    let n = buf.len();
    plan(n, false).process(buf);
    let scale = 1.0 / n as f64;
    buf.iter_mut().for_each(|c| *c *= scale);
}

/// Inverse of [`forward`]: `f_j = Σ_k c_k e^{ikα_j}`.
pub(crate) fn inverse(buf: &mut [Complex64]) {
    let n = buf.len();
    plan(n, true).process(buf);
}

/// Signed wavenumber stored at FFT index `idx`.
pub(crate) fn wavenumber(idx: usize, n: usize) -> i64 {
    if idx < n / 2 {
        idx as i64
    } else {
        idx as i64 - n as i64
    }
}

/// Collocation grid: `n_nodes` equispaced nodes and the retained wavenumbers
/// `1..=n_modes` of the truncated sine/cosine series.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "RawGrid")]
pub struct GridSpec {
    n_nodes: usize,
    n_modes: usize,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawGrid {
    n_nodes: usize,
    n_modes: Option<usize>,
}

impl TryFrom<RawGrid> for GridSpec {
    type Error = Error;

    fn try_from(raw: RawGrid) -> Result<Self> {
        match raw.n_modes {
            Some(m) => GridSpec::new(raw.n_nodes, m),
            None => GridSpec::with_nodes(raw.n_nodes),
        }
    }
}

impl GridSpec {
    pub fn new(n_nodes: usize, n_modes: usize) -> Result<Self> {
        if n_nodes < 4 || !n_nodes.is_multiple_of(2) {
            return Err(Error::InvalidInput(format!(
                "n_nodes must be an even integer >= 4, got {n_nodes}"
            )));
        }
        if n_modes == 0 || n_modes > n_nodes / 2 - 1 {
            return Err(Error::InvalidInput(format!(
                "n_modes must lie in 1..={} for {n_nodes} nodes, got {n_modes}",
                n_nodes / 2 - 1
            )));
        }
        Ok(Self { n_nodes, n_modes })
    }

    /// Grid retaining every non-aliased mode: `n_modes = n_nodes/2 - 1`, the
    /// Nyquist mode is dropped.
    pub fn with_nodes(n_nodes: usize) -> Result<Self> {
        if n_nodes < 4 {
            return Err(Error::InvalidInput(format!(
                "n_nodes must be an even integer >= 4, got {n_nodes}"
            )));
        }
        Self::new(n_nodes, n_nodes / 2 - 1)
    }

    pub fn n_nodes(&self) -> usize {
        self.n_nodes
    }

    pub fn n_modes(&self) -> usize {
        self.n_modes
    }

    /// Node spacing `Δα = 2π / n_nodes`.
    pub fn spacing(&self) -> f64 {
        2.0 * PI / self.n_nodes as f64
    }

    pub fn node(&self, j: usize) -> f64 {
        self.spacing() * j as f64
    }

    pub fn nodes(&self) -> Vec<f64> {
        (0..self.n_nodes).map(|j| self.node(j)).collect()
    }

    /// The grid with twice as many nodes, keeping all non-aliased modes.
    pub fn doubled(&self) -> Self {
        Self::with_nodes(2 * self.n_nodes).expect("doubling a valid grid stays valid")
    }

    pub(crate) fn check_len(&self, len: usize) -> Result<()> {
        if len != self.n_nodes {
            return Err(Error::InvalidInput(format!(
                "field has {len} samples but the grid has {} nodes",
                self.n_nodes
            )));
        }
        Ok(())
    }
}

/// Symmetry class of a periodic field about `α = 0`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Parity {
    Odd,
    Even,
    None,
}

impl Parity {
    fn flipped(self) -> Self {
        match self {
            Parity::Odd => Parity::Even,
            Parity::Even => Parity::Odd,
            Parity::None => Parity::None,
        }
    }
}

/// Nodal samples of a real 2π-periodic function.
#[derive(Debug, Clone, PartialEq)]
pub struct PeriodicField {
    pub values: Vec<f64>,
    pub parity: Parity,
}

impl PeriodicField {
    pub fn new(values: Vec<f64>, parity: Parity) -> Self {
        Self { values, parity }
    }

    pub fn from_fn(grid: &GridSpec, parity: Parity, f: impl Fn(f64) -> f64) -> Self {
        Self::new(grid.nodes().into_iter().map(f).collect(), parity)
    }

    /// `Σ_k coeffs[k-1] sin(kα)` sampled on `grid`.
    pub fn sine_series(grid: &GridSpec, coeffs: &[f64]) -> Self {
        let n = grid.n_nodes();
        let mut buf = vec![Complex64::new(0.0, 0.0); n];
        for (i, &s) in coeffs.iter().enumerate() {
            let k = i + 1;
            if k >= n / 2 {
                break;
            }
            buf[k] += Complex64::new(0.0, -0.5 * s);
            buf[n - k] += Complex64::new(0.0, 0.5 * s);
        }
        inverse(&mut buf);
        Self::new(buf.iter().map(|c| c.re).collect(), Parity::Odd)
    }

    /// `mean + Σ_k coeffs[k-1] cos(kα)` sampled on `grid`.
    pub fn cosine_series(grid: &GridSpec, mean: f64, coeffs: &[f64]) -> Self {
        let n = grid.n_nodes();
        let mut buf = vec![Complex64::new(0.0, 0.0); n];
        buf[0] = Complex64::new(mean, 0.0);
        for (i, &c) in coeffs.iter().enumerate() {
            let k = i + 1;
            if k >= n / 2 {
                break;
            }
            buf[k] += Complex64::new(0.5 * c, 0.0);
            buf[n - k] += Complex64::new(0.5 * c, 0.0);
        }
        inverse(&mut buf);
        Self::new(buf.iter().map(|c| c.re).collect(), Parity::Even)
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn mean(&self) -> f64 {
        self.values.iter().sum::<f64>() / self.values.len() as f64
    }

    pub fn max_abs(&self) -> f64 {
        self.values.iter().fold(0.0, |m, v| m.max(v.abs()))
    }

    pub fn max_abs_diff(&self, other: &PeriodicField) -> f64 {
        self.values
            .iter()
            .zip(&other.values)
            .fold(0.0, |m, (a, b)| m.max((a - b).abs()))
    }

    pub fn map(&self, parity: Parity, f: impl Fn(f64) -> f64) -> PeriodicField {
        PeriodicField::new(self.values.iter().map(|&v| f(v)).collect(), parity)
    }
}

/// Discrete Fourier coefficients of a nodal field, stored in FFT order.
#[derive(Debug, Clone, PartialEq)]
pub struct Spectrum {
    coeffs: Vec<Complex64>,
}

impl Spectrum {
    pub fn n_nodes(&self) -> usize {
        self.coeffs.len()
    }

    /// Coefficient of `e^{ikα}` for `k ∈ -n/2..n/2`.
    pub fn get(&self, k: i64) -> Complex64 {
        let n = self.coeffs.len() as i64;
        assert!(
            (-n / 2..n / 2).contains(&k),
            "wavenumber {k} outside -{}..{}",
            n / 2,
            n / 2
        );
        self.coeffs[k.rem_euclid(n) as usize]
    }

    /// Pairs `(k, coefficient)` ordered from `-n/2` to `n/2 - 1`.
    pub fn centered(&self) -> Vec<(i64, Complex64)> {
        let n = self.coeffs.len() as i64;
        (-n / 2..n / 2).map(|k| (k, self.get(k))).collect()
    }

    pub fn as_fft_order(&self) -> &[Complex64] {
        &self.coeffs
    }
}

pub fn to_modes(f: &PeriodicField, grid: &GridSpec) -> Result<Spectrum> {
    grid.check_len(f.len())?;
    let mut buf: Vec<Complex64> = f.values.iter().map(|&v| Complex64::new(v, 0.0)).collect();
    forward(&mut buf);
    Ok(Spectrum { coeffs: buf })
}

/// Real part of the inverse transform; the spectrum of a real field is
/// Hermitian so nothing is discarded.
pub fn to_nodes(s: &Spectrum, parity: Parity) -> PeriodicField {
    let mut buf = s.coeffs.clone();
    inverse(&mut buf);
    PeriodicField::new(buf.iter().map(|c| c.re).collect(), parity)
}

fn deriv_symbol(order: u32) -> impl Fn(i64) -> Complex64 {
    move |k| Complex64::new(0.0, k as f64).powu(order)
}

fn hilbert_symbol(k: i64) -> Complex64 {
    Complex64::new(0.0, -(k.signum() as f64))
}

fn inv_deriv4_symbol(k: i64) -> Complex64 {
    if k == 0 {
        Complex64::new(0.0, 0.0)
    } else {
        Complex64::new((k as f64).powi(-4), 0.0)
    }
}

fn projection_symbol(k: i64) -> Complex64 {
    Complex64::new(if k == 0 { 0.0 } else { 1.0 }, 0.0)
}

fn multiply(coeffs: &mut [Complex64], symbol: impl Fn(i64) -> Complex64) {
    let n = coeffs.len();
    for (idx, c) in coeffs.iter_mut().enumerate() {
        let k = wavenumber(idx, n);
        let m = if 2 * idx == n {
            0.5 * (symbol(k) + symbol(-k))
        } else {
            symbol(k)
        };
        *c *= m;
    }
}

/// The same multipliers acting directly on coefficients. Compositions here
/// are exact up to one rounding per coefficient, whereas composing the nodal
/// operators also carries the round-off of the intermediate nodal values
/// through the symbols (which for `∂⁴` grows like `(n/2)⁴ ε`).
impl Spectrum {
    fn with_symbol(&self, symbol: impl Fn(i64) -> Complex64) -> Spectrum {
        let mut coeffs = self.coeffs.clone();
        multiply(&mut coeffs, symbol);
        Spectrum { coeffs }
    }

    pub fn deriv(&self, order: u32) -> Spectrum {
        self.with_symbol(deriv_symbol(order))
    }

    pub fn hilbert(&self) -> Spectrum {
        self.with_symbol(hilbert_symbol)
    }

    pub fn inv_deriv4(&self) -> Spectrum {
        self.with_symbol(inv_deriv4_symbol)
    }

    pub fn project_zero_mean(&self) -> Spectrum {
        self.with_symbol(projection_symbol)
    }

    pub fn max_abs_diff(&self, other: &Spectrum) -> f64 {
        self.coeffs.iter().zip(&other.coeffs).fold(0.0, |m, (a, b)| m.max((a - b).norm()))
    }
}

fn apply_multiplier(values: &[f64], symbol: impl Fn(i64) -> Complex64) -> Vec<f64> {
    let mut buf: Vec<Complex64> = values.iter().map(|&v| Complex64::new(v, 0.0)).collect();
    forward(&mut buf);
    multiply(&mut buf, symbol);
    inverse(&mut buf);
    buf.iter().map(|c| c.re).collect()
}

fn ensure_nonempty(f: &PeriodicField) -> Result<()> {
    if f.len() < 2 || !f.len().is_multiple_of(2) {
        return Err(Error::InvalidInput(format!(
            "periodic field needs an even number (>= 2) of samples, got {}",
            f.len()
        )));
    }
    Ok(())
}

/// `order`-th derivative in α.
pub fn deriv(f: &PeriodicField, order: u32) -> Result<PeriodicField> {
    ensure_nonempty(f)?;
    if order == 0 {
        return Err(Error::InvalidInput("derivative order must be positive".into()));
    }
    let values = apply_multiplier(&f.values, deriv_symbol(order));
    let parity = if order % 2 == 1 { f.parity.flipped() } else { f.parity };
    Ok(PeriodicField::new(values, parity))
}

/// Periodic Hilbert transform, symbol `-i sgn(k)`.
pub fn hilbert(f: &PeriodicField) -> Result<PeriodicField> {
    ensure_nonempty(f)?;
    let values = apply_multiplier(&f.values, hilbert_symbol);
    Ok(PeriodicField::new(values, f.parity.flipped()))
}

/// Fourth-order inverse derivative. The mean is projected out first, so the
/// operator is defined on every field.
pub fn inv_deriv4(f: &PeriodicField) -> Result<PeriodicField> {
    ensure_nonempty(f)?;
    let values = apply_multiplier(&f.values, inv_deriv4_symbol);
    Ok(PeriodicField::new(values, f.parity))
}

pub fn project_zero_mean(f: &PeriodicField) -> Result<PeriodicField> {
    ensure_nonempty(f)?;
    let mean = f.mean();
    Ok(f.map(f.parity, |v| v - mean))
}

/// Coefficients `s_k`, `k = 1..=n_modes`, of the sine part of the field:
/// `s_k = (2/n) Σ_j f_j sin(kα_j)`.
pub fn sine_coefficients(values: &[f64], n_modes: usize) -> Vec<f64> {
    let mut buf: Vec<Complex64> = values.iter().map(|&v| Complex64::new(v, 0.0)).collect();
    forward(&mut buf);
    (1..=n_modes).map(|k| -2.0 * buf[k].im).collect()
}

/// Coefficients `c_k`, `k = 1..=n_modes`, of the cosine part of the field.
pub fn cosine_coefficients(values: &[f64], n_modes: usize) -> Vec<f64> {
    let mut buf: Vec<Complex64> = values.iter().map(|&v| Complex64::new(v, 0.0)).collect();
    forward(&mut buf);
    (1..=n_modes).map(|k| 2.0 * buf[k].re).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn grid() -> GridSpec {
        GridSpec::with_nodes(128).unwrap()
    }

    #[test]
    fn grid_rejects_aliased_modes() {
        assert!(GridSpec::new(128, 64).is_err());
        assert!(GridSpec::new(127, 10).is_err());
        assert!(GridSpec::new(128, 0).is_err());
        assert_eq!(GridSpec::with_nodes(128).unwrap().n_modes(), 63);
    }

    #[test]
    fn single_cosine_has_two_half_coefficients() {
        let g = grid();
        let f = PeriodicField::from_fn(&g, Parity::Even, |a| (3.0 * a).cos());
        let s = to_modes(&f, &g).unwrap();
        for (k, c) in s.centered() {
            let expected = if k.abs() == 3 { 0.5 } else { 0.0 };
            assert!((c.re - expected).abs() < 1e-15 && c.im.abs() < 1e-15, "k={k} c={c}");
        }
    }

    #[test]
    fn constant_lives_in_mode_zero() {
        let g = grid();
        let f = PeriodicField::new(vec![1.0; 128], Parity::Even);
        let s = to_modes(&f, &g).unwrap();
        assert!((s.get(0).re - 1.0).abs() < 1e-15);
        assert!(s.centered().iter().filter(|(k, _)| *k != 0).all(|(_, c)| c.norm() < 1e-15));
    }

    #[test]
    fn length_mismatch_is_rejected() {
        let g = grid();
        let f = PeriodicField::new(vec![0.0; 64], Parity::None);
        assert!(matches!(to_modes(&f, &g), Err(Error::InvalidInput(_))));
    }

    #[test]
    fn derivative_of_trig_monomials() {
        let g = grid();
        let s2 = PeriodicField::from_fn(&g, Parity::Odd, |a| (2.0 * a).sin());
        let d = deriv(&s2, 1).unwrap();
        assert_eq!(d.parity, Parity::Even);
        let exact = PeriodicField::from_fn(&g, Parity::Even, |a| 2.0 * (2.0 * a).cos());
        assert!(d.max_abs_diff(&exact) < 1e-13);

        let c5 = PeriodicField::from_fn(&g, Parity::Even, |a| (5.0 * a).cos());
        let d2 = deriv(&c5, 2).unwrap();
        let exact = PeriodicField::from_fn(&g, Parity::Even, |a| -25.0 * (5.0 * a).cos());
        // Round-off in mode k is amplified by k²; (n/2)² ε · 25 ≈ 1e-11.
        assert!(d2.max_abs_diff(&exact) < 2e-11);
        assert!(deriv(&c5, 0).is_err());
    }

    #[test]
    fn hilbert_maps_cosine_to_sine() {
        let g = grid();
        for k in 1..10 {
            let f = PeriodicField::from_fn(&g, Parity::Even, |a| (k as f64 * a).cos());
            let h = hilbert(&f).unwrap();
            let exact = PeriodicField::from_fn(&g, Parity::Odd, |a| (k as f64 * a).sin());
            assert!(h.max_abs_diff(&exact) < 1e-14);
            assert_eq!(h.parity, Parity::Odd);
        }
        let c = PeriodicField::new(vec![2.5; 128], Parity::Even);
        assert!(hilbert(&c).unwrap().max_abs() < 1e-15);
    }

    #[test]
    fn inverse_fourth_derivative() {
        let g = grid();
        let f = PeriodicField::from_fn(&g, Parity::Even, |a| (3.0 * a).cos());
        let exact = PeriodicField::from_fn(&g, Parity::Even, |a| (3.0 * a).cos() / 81.0);
        assert!(inv_deriv4(&f).unwrap().max_abs_diff(&exact) < 1e-15);
        let c = PeriodicField::new(vec![-4.0; 128], Parity::Even);
        assert!(inv_deriv4(&c).unwrap().max_abs() < 1e-15);
        let s = PeriodicField::from_fn(&g, Parity::Odd, |a| (3.0 * a).sin());
        let back = to_modes(&s, &g).unwrap().inv_deriv4().deriv(4);
        assert!(back.max_abs_diff(&to_modes(&s, &g).unwrap()) < 1e-15);
        let back = inv_deriv4(&deriv(&s, 4).unwrap()).unwrap();
        assert!(back.max_abs_diff(&s) < 1e-13);
    }

    #[test]
    fn projection_removes_mean() {
        let g = grid();
        let f = PeriodicField::from_fn(&g, Parity::Even, |a| 5.0 + a.cos());
        let exact = PeriodicField::from_fn(&g, Parity::Even, |a| a.cos());
        assert!(project_zero_mean(&f).unwrap().max_abs_diff(&exact) < 1e-14);
        let p = project_zero_mean(&exact).unwrap();
        assert!(p.max_abs_diff(&exact) < 1e-15);
    }

    #[test]
    fn series_synthesis_matches_projection() {
        let g = GridSpec::with_nodes(32).unwrap();
        let a: Vec<f64> = (1..=15).map(|k| 1.0 / (k * k) as f64).collect();
        let f = PeriodicField::sine_series(&g, &a);
        let back = sine_coefficients(&f.values, 15);
        for (x, y) in a.iter().zip(&back) {
            assert!((x - y).abs() < 1e-15);
        }
        let c = PeriodicField::cosine_series(&g, 0.7, &a);
        assert!((c.mean() - 0.7).abs() < 1e-15);
        let back = cosine_coefficients(&c.values, 15);
        for (x, y) in a.iter().zip(&back) {
            assert!((x - y).abs() < 1e-15);
        }
    }
}
