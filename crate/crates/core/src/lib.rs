//! Periodic traveling waves on an elastic sheet separating two fluids.
//!
//! The interface is described by its tangent angle `θ(α)` and vortex-sheet
//! strength `γ(α)`; a traveling wave with speed `c` solves a pair of balance
//! laws that are discretized spectrally. The crate provides
//!
//! * [`spectral`]: Fourier multipliers on a periodic grid,
//! * [`geometry`]: the curve rebuilt from `θ` and its self-intersection test,
//! * [`birkhoff_rott`]: the velocity the sheet induces on itself,
//! * [`residual`]: the square nonlinear system,
//! * [`linear`]: closed-form bifurcation speeds and null directions,
//! * [`broyden`]: a quasi-Newton solver,
//! * [`continuation`]: branch following and parameter sweeps,
//! * [`io`]: configuration, branch files and plot data.
//!
//! ```
//! use hydroelastic::{c_pm, BranchSign, PhysParams};
//!
//! let p = PhysParams::reference();
//! let c = c_pm(1, BranchSign::Plus, &p).unwrap();
//! assert!((c - 1.375f64.sqrt()).abs() < 1e-14);
//! ```

pub mod birkhoff_rott;
pub mod broyden;
pub mod continuation;
pub mod error;
pub mod geometry;
pub mod io;
pub mod linear;
pub mod params;
pub mod residual;
pub mod spectral;

pub use birkhoff_rott::{birkhoff_rott, remainder_kernel, SheetStrength};
pub use broyden::{BroydenConfig, FailureKind, SolveReport};
pub use continuation::{
    continue_branch, refine_point, run_branch, seed_point, sweep_surface, Branch, BranchPoint, ContinuationConfig,
    Termination,
};
pub use error::{Error, Result};
pub use geometry::{
    chord_arc_min, displacement_stats, renormalized_curve, self_intersects, sigma_of_theta, CurveSample,
    DisplacementStats,
};
pub use io::{BranchFile, RunConfig};
pub use linear::{c_pm, eigen_direction, in_k, lambda_k, lambda_perturb, real_root_l, BranchSign, KMembership, LinearMode};
pub use params::PhysParams;
pub use residual::{eval_residual, residual_norm, ConstraintKind, ConstraintSpec, ResidualVector, WaveState};
pub use spectral::{GridSpec, Parity, PeriodicField};
