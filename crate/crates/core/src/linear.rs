//! Linearization about the flat interface.
//!
//! The linearized operator acts diagonally on Fourier modes. On mode `k` its
//! nontrivial eigenvalue is
//!
//! ```text
//! λ_k(c) = 1 + M²τ₁/(4π²k²) + (−c²M³ + 2Acγ̄M²π − γ̄²Mπ²)/(4π³Sk³) + AM⁴/(8π⁴Sk⁴)
//! ```
//!
//! which vanishes at the two speeds `c_±(k)`. A zero of `λ_k` is simple in the
//! sense of odd crossing unless another integer wavenumber `l` shares the
//! same speed; those are exactly the positive-integer roots of the cubic
//! `p(l; k)`.

use std::f64::consts::PI;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::params::PhysParams;
use crate::residual::WaveState;

/// Tolerance of the integer test on the root `l(k)`.
pub const INTEGER_ROOT_TOL: f64 = 1e-8;

/// Which of the two bifurcation speeds.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "i32", into = "i32")]
pub enum BranchSign {
    Plus,
    Minus,
}

impl BranchSign {
    pub fn value(self) -> f64 {
        match self {
            BranchSign::Plus => 1.0,
            BranchSign::Minus => -1.0,
        }
    }
}

impl TryFrom<i32> for BranchSign {
    type Error = String;

    fn try_from(v: i32) -> std::result::Result<Self, String> {
        match v {
            1 => Ok(BranchSign::Plus),
            -1 => Ok(BranchSign::Minus),
            _ => Err(format!("branch sign must be +1 or -1, got {v}")),
        }
    }
}

impl From<BranchSign> for i32 {
    fn from(s: BranchSign) -> i32 {
        match s {
            BranchSign::Plus => 1,
            BranchSign::Minus => -1,
        }
    }
}

impl FromStr for BranchSign {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s.trim() {
            "+1" | "1" | "+" | "plus" => Ok(BranchSign::Plus),
            "-1" | "-" | "minus" => Ok(BranchSign::Minus),
            other => Err(format!("branch sign must be +1 or -1, got `{other}`")),
        }
    }
}

impl fmt::Display for BranchSign {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            BranchSign::Plus => "+1",
            BranchSign::Minus => "-1",
        })
    }
}

pub fn lambda_k(c: f64, k: u32, p: &PhysParams) -> f64 {
    let (m, s, a, gb) = (p.period, p.bending, p.atwood, p.gamma_bar);
    let k = k as f64;
    1.0 + m * m * p.tau1 / (4.0 * PI * PI) / (k * k)
        + (-c * c * m.powi(3) + 2.0 * a * c * gb * m * m * PI - gb * gb * m * PI * PI) / (4.0 * PI.powi(3) * s) / k.powi(3)
        + a * m.powi(4) / (8.0 * PI.powi(4) * s) / k.powi(4)
}

/// `AM⁴ + (−2γ̄²Mπ³ + 2A²γ̄²Mπ³)k + 2M²π²Sτ₁k² + 8π⁴Sk⁴`: the speeds `c_±(k)`
/// are real iff this is non-negative.
pub fn discriminant(k: u32, p: &PhysParams) -> f64 {
    let (m, s, a, gb) = (p.period, p.bending, p.atwood, p.gamma_bar);
    let k = k as f64;
    a * m.powi(4)
        + (-2.0 * gb * gb * m * PI.powi(3) + 2.0 * a * a * gb * gb * m * PI.powi(3)) * k
        + 2.0 * m * m * PI * PI * s * p.tau1 * k * k
        + 8.0 * PI.powi(4) * s * k.powi(4)
}

/// Square of the half-gap between the two speeds, `(c_± − Aγ̄π/M)²`.
pub fn radicand(k: u32, p: &PhysParams) -> f64 {
    discriminant(k, p) / (2.0 * k as f64 * p.period.powi(3) * PI)
}

/// Bifurcation speed `c_±(k)`, or `None` when it is complex.
pub fn c_pm(k: u32, sign: BranchSign, p: &PhysParams) -> Option<f64> {
    let r = radicand(k, p);
    (r >= 0.0).then(|| p.atwood * p.gamma_bar * PI / p.period + sign.value() * r.sqrt())
}

/// `p(l; k) = −AM⁴ + 2klπ²S(4(k² + kl + l²)π² + M²τ₁)`.
pub fn cubic_p(l: f64, k: u32, p: &PhysParams) -> f64 {
    let k = k as f64;
    -p.atwood * p.period.powi(4)
        + 2.0 * k * l * PI * PI * p.bending * (4.0 * (k * k + k * l + l * l) * PI * PI + p.period.powi(2) * p.tau1)
}

fn cubic_p_prime(l: f64, k: u32, p: &PhysParams) -> f64 {
    let k = k as f64;
    2.0 * k * PI * PI * p.bending * (4.0 * PI * PI * (k * k + 2.0 * k * l + 3.0 * l * l) + p.period.powi(2) * p.tau1)
}

/// The unique real root of `p(·; k)`. The cubic is strictly increasing in
/// `l`, so bracketing plus bisection always succeeds; Newton polishes.
pub fn real_root_l(k: u32, p: &PhysParams) -> f64 {
    let f = |l| cubic_p(l, k, p);
    if f(0.0) == 0.0 {
        return 0.0;
    }
    let (mut lo, mut hi) = if f(0.0) < 0.0 { (0.0, 1.0) } else { (-1.0, 0.0) };
    while f(lo) > 0.0 {
        lo *= 2.0;
    }
    while f(hi) < 0.0 {
        hi *= 2.0;
    }
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if f(mid) < 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    let mut l = 0.5 * (lo + hi);
    for _ in 0..3 {
        let d = cubic_p_prime(l, k, p);
        let next = l - f(l) / d;
        if !(lo..=hi).contains(&next) {
            break;
        }
        l = next;
    }
    l
}

/// Outcome of the odd-crossing test for wavenumber `k`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "reason", rename_all = "snake_case")]
pub enum KMembership {
    Member,
    /// The discriminant is not strictly positive.
    NonPositiveDiscriminant { discriminant: f64 },
    /// Another integer wavenumber shares the bifurcation speed.
    TwoDimensionalKernel { l: u64 },
}

impl KMembership {
    pub fn is_member(&self) -> bool {
        matches!(self, KMembership::Member)
    }

    pub fn reason(&self) -> String {
        match self {
            KMembership::Member => "odd crossing".into(),
            KMembership::NonPositiveDiscriminant { .. } => "complex speed".into(),
            KMembership::TwoDimensionalKernel { l } => format!("two-dimensional kernel (l = {l})"),
        }
    }
}

pub fn in_k(k: u32, p: &PhysParams) -> KMembership {
    let d = discriminant(k, p);
    if d.is_nan() || d <= 0.0 {
        return KMembership::NonPositiveDiscriminant { discriminant: d };
    }
    let l = real_root_l(k, p);
    let r = l.round();
    if r >= 1.0 && r != k as f64 && (l - r).abs() < INTEGER_ROOT_TOL {
        return KMembership::TwoDimensionalKernel { l: r as u64 };
    }
    KMembership::Member
}

/// `λ_k(c_± + ε)` from its exact expansion in `ε`.
pub fn lambda_perturb(k: u32, eps: f64, sign: BranchSign, p: &PhysParams) -> Option<f64> {
    let r = radicand(k, p);
    if r < 0.0 {
        return None;
    }
    let m3 = p.period.powi(3);
    let kp = (k as f64).powi(3) * PI.powi(3) * p.bending;
    Some(-sign.value() * m3 / (2.0 * kp) * r.sqrt() * eps - m3 / (4.0 * kp) * eps * eps)
}

/// Null direction of the linearization at speed `c` on mode `k`:
/// `θ ∝ −(π/(cM)) sin(kα)`, `γ ∝ cos(kα)`, scaled so `|a_k| = 1`.
pub fn eigen_direction(k: u32, c: f64, p: &PhysParams, n_modes: usize) -> Result<WaveState> {
    if c == 0.0 || !c.is_finite() {
        return Err(Error::InvalidInput(format!("eigen direction needs a finite nonzero speed, got {c}")));
    }
    let k = k as usize;
    if k == 0 || k > n_modes {
        return Err(Error::InvalidInput(format!("wavenumber {k} outside retained modes 1..={n_modes}")));
    }
    let a_k = -PI / (c * p.period);
    let mut x = WaveState::flat(n_modes, c);
    x.a[k - 1] = a_k / a_k.abs();
    x.b[k - 1] = 1.0 / a_k.abs();
    Ok(x)
}

/// A bifurcation point on the trivial branch.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LinearMode {
    pub k: u32,
    pub sign: BranchSign,
    pub c: f64,
}

impl LinearMode {
    pub fn new(k: u32, sign: BranchSign, p: &PhysParams) -> Result<Self> {
        if k == 0 {
            return Err(Error::InvalidInput("wavenumber must be at least 1".into()));
        }
        let c = c_pm(k, sign, p).ok_or_else(|| Error::SeedFailure {
            k: k as usize,
            reason: format!("c_{}({k}) is complex", if sign == BranchSign::Plus { "+" } else { "-" }),
        })?;
        if c == 0.0 {
            return Err(Error::SeedFailure { k: k as usize, reason: "bifurcation speed is zero".into() });
        }
        Ok(Self { k, sign, c })
    }

    pub fn direction(&self, p: &PhysParams, n_modes: usize) -> Result<WaveState> {
        eigen_direction(self.k, self.c, p, n_modes)
    }
}
