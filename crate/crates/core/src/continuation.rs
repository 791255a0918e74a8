//! Branch following from a linear bifurcation point.
//!
//! Each new point is found by shifting the target of the scalar constraint
//! and re-solving from the previous point. Failed solves halve the shift.
//! When the shift underflows, the constraint changes: displacement `y0`
//! first, then the tangent-angle modes `a_1, a_2, ...`, and finally the speed.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::broyden::{self, BroydenConfig, SolveReport};
use crate::error::{Error, Result};
use crate::geometry::{displacement_stats, self_intersects, CurveSample, DEFAULT_SELF_INTERSECTION_TOL};
use crate::linear::LinearMode;
use crate::params::PhysParams;
use crate::residual::{eval_residual, ConstraintKind, ConstraintSpec, WaveState};
use crate::spectral::GridSpec;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ContinuationConfig {
    /// Seed amplitude along the eigen direction.
    pub amp0: f64,
    pub initial_step: f64,
    pub step_floor: f64,
    pub c_trivial_tol: f64,
    pub h_trivial_tol: f64,
    /// Threshold on the mean magnitude of the top tenth of the `a_k`.
    pub tail_tol: f64,
    pub max_points: usize,
    pub self_intersection_tol: f64,
    /// Highest `a_m` tried before falling back to the speed constraint.
    pub max_fourier_mode: usize,
    /// Largest accepted change of `c` between consecutive points.
    pub max_speed_jump: f64,
    pub solver: BroydenConfig,
}

impl Default for ContinuationConfig {
    fn default() -> Self {
        Self {
            amp0: 1e-3,
            initial_step: 5e-3,
            step_floor: 1e-6,
            c_trivial_tol: 1e-4,
            h_trivial_tol: 1e-4,
            tail_tol: 1e-7,
            max_points: 2000,
            self_intersection_tol: DEFAULT_SELF_INTERSECTION_TOL,
            max_fourier_mode: 3,
            max_speed_jump: 0.05,
            solver: BroydenConfig::default(),
        }
    }
}

impl ContinuationConfig {
    pub fn validate(&self) -> Result<()> {
        let positive = [
            ("initial_step", self.initial_step),
            ("step_floor", self.step_floor),
            ("c_trivial_tol", self.c_trivial_tol),
            ("h_trivial_tol", self.h_trivial_tol),
            ("tail_tol", self.tail_tol),
            ("self_intersection_tol", self.self_intersection_tol),
            ("max_speed_jump", self.max_speed_jump),
            ("solver.tol", self.solver.tol),
            ("solver.fd_step", self.solver.fd_step),
        ];
        for (name, v) in positive {
            if !(v > 0.0 && v.is_finite()) {
                return Err(Error::Config(format!("{name} must be positive and finite")));
            }
        }
        if !(self.amp0 >= 0.0 && self.amp0.is_finite()) {
            return Err(Error::Config("amp0 must be non-negative and finite".into()));
        }
        if self.max_points == 0 || self.solver.max_iter == 0 || self.solver.refresh_after == 0 {
            return Err(Error::Config("max_points, solver.max_iter and solver.refresh_after must be at least 1".into()));
        }
        if self.step_floor >= self.initial_step {
            return Err(Error::Config("step_floor must be below initial_step".into()));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BranchPoint {
    pub state: WaveState,
    pub h: f64,
    pub y0: f64,
    pub sigma: f64,
    pub residual: f64,
    pub constraint: ConstraintSpec,
}

impl BranchPoint {
    fn from_state(state: WaveState, residual: f64, constraint: ConstraintSpec, curve: &CurveSample) -> Self {
        let d = displacement_stats(curve);
        Self { state, h: d.h, y0: d.y0, sigma: curve.sigma, residual, constraint }
    }

    pub fn curve(&self, p: &PhysParams, g: &GridSpec) -> Result<CurveSample> {
        self.state.curve(p, g)
    }
}

/// Why a branch stopped.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Termination {
    SelfIntersection,
    ReturnToTrivial,
    UnresolvedGrowth,
    MaxSteps,
    StepUnderflow,
}

impl Termination {
    pub fn label(self) -> &'static str {
        match self {
            Termination::SelfIntersection => "self_intersection",
            Termination::ReturnToTrivial => "return_to_trivial",
            Termination::UnresolvedGrowth => "unresolved_growth",
            Termination::MaxSteps => "max_steps",
            Termination::StepUnderflow => "step_underflow",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Branch {
    pub params: PhysParams,
    pub grid: GridSpec,
    pub seed: LinearMode,
    pub points: Vec<BranchPoint>,
    pub termination: Termination,
}

impl Branch {
    pub fn last(&self) -> &BranchPoint {
        self.points.last().expect("a branch holds at least its seed point")
    }
}

/// Solves for the state satisfying `constraint`, starting from `guess`.
pub fn solve_point(
    guess: &WaveState,
    constraint: ConstraintSpec,
    p: &PhysParams,
    g: &GridSpec,
    solver: &BroydenConfig,
) -> Result<SolveReport<WaveState>> {
    constraint.validate(g.n_modes())?;
    if guess.n_modes() != g.n_modes() {
        return Err(Error::InvalidInput(format!(
            "guess has {} modes but the grid retains {}",
            guess.n_modes(),
            g.n_modes()
        )));
    }
    let f = |v: &[f64]| -> Result<Vec<f64>> {
        let x = WaveState::from_slice(v)?;
        Ok(eval_residual(&x, p, &constraint, g)?.to_vec())
    };
    let report = broyden::solve(f, &guess.to_vec(), solver);
    Ok(report.map(|v| WaveState::from_slice(&v).expect("solver preserves the layout")))
}

/// First point on the branch: the eigen direction scaled by `amp0`, solved
/// with `y0` pinned at the value of the guess.
pub fn seed_point(
    mode: &LinearMode,
    amp0: f64,
    p: &PhysParams,
    g: &GridSpec,
    solver: &BroydenConfig,
) -> Result<SolveReport<WaveState>> {
    let dir = mode.direction(p, g.n_modes())?;
    let guess = WaveState {
        a: dir.a.iter().map(|v| v * amp0).collect(),
        b: dir.b.iter().map(|v| v * amp0).collect(),
        c: mode.c,
    };
    let curve = guess.curve(p, g).map_err(|e| seed_error(mode, e.to_string()))?;
    let constraint = ConstraintSpec::displacement(displacement_stats(&curve).y0);
    let report = solve_point(&guess, constraint, p, g, solver)?;
    if !report.converged {
        return Err(seed_error(
            mode,
            format!("solver stopped with {:?} at residual {:e}; try a smaller amp0", report.failure, report.final_residual),
        ));
    }
    Ok(report)
}

fn seed_error(mode: &LinearMode, reason: String) -> Error {
    Error::SeedFailure { k: mode.k as usize, reason }
}

fn tail_indicator(a: &[f64]) -> f64 {
    let count = (a.len() / 10).max(1);
    a[a.len() - count..].iter().map(|v| v.abs()).sum::<f64>() / count as f64
}

fn sign_or(v: f64, fallback: f64) -> f64 {
    if v > 0.0 {
        1.0
    } else if v < 0.0 {
        -1.0
    } else {
        fallback
    }
}

/// Active continuation variable and its marching direction.
#[derive(Debug, Clone, Copy)]
enum Phase {
    Displacement { dir: f64 },
    Fourier { m: usize, dir: f64 },
    Speed { dir: f64 },
}

impl Phase {
    fn constraint(&self, last: &BranchPoint, step: f64) -> ConstraintSpec {
        match *self {
            Phase::Displacement { dir } => ConstraintSpec::displacement(last.y0 + dir * step),
            Phase::Fourier { m, dir } => ConstraintSpec::fourier_mode(m, last.state.a[m - 1] + dir * step),
            Phase::Speed { dir } => ConstraintSpec::speed(last.state.c + dir * step),
        }
    }

    /// Next fallback once the step has underflowed, marching in the
    /// direction the new variable moved over the last two points.
    fn next(&self, points: &[BranchPoint], max_mode: usize, n_modes: usize) -> Option<Phase> {
        let last = &points[points.len() - 1];
        let prev = points.len().checked_sub(2).map(|i| &points[i]);
        let trend = |f: &dyn Fn(&BranchPoint) -> f64, fallback: f64| {
            prev.map_or(fallback, |p| sign_or(f(last) - f(p), fallback))
        };
        let fourier = |m: usize| Phase::Fourier { m, dir: trend(&|pt| pt.state.a[m - 1], -sign_or(last.state.a[m - 1], 1.0)) };
        let top = max_mode.min(n_modes);
        match *self {
            Phase::Displacement { .. } if top >= 1 => Some(fourier(1)),
            Phase::Fourier { m, .. } if m < top => Some(fourier(m + 1)),
            Phase::Displacement { .. } | Phase::Fourier { .. } => {
                Some(Phase::Speed { dir: trend(&|pt| pt.state.c, -sign_or(last.state.c, 1.0)) })
            }
            Phase::Speed { .. } => None,
        }
    }
}

/// Marches along the branch from a converged seed until a termination
/// condition fires.
pub fn continue_branch(
    seed: &SolveReport<WaveState>,
    mode: &LinearMode,
    cfg: &ContinuationConfig,
    p: &PhysParams,
    g: &GridSpec,
) -> Result<Branch> {
    cfg.validate()?;
    if !seed.converged {
        return Err(seed_error(mode, "seed solve did not converge".into()));
    }
    let seed_curve = seed.solution.curve(p, g)?;
    let seed_y0 = displacement_stats(&seed_curve).y0;
    let first = BranchPoint::from_state(
        seed.solution.clone(),
        seed.final_residual,
        ConstraintSpec::displacement(seed_y0),
        &seed_curve,
    );
    // Crest-up at α = 0 unless the seed says otherwise.
    let dir = if seed_y0 != 0.0 {
        sign_or(seed_y0, 1.0)
    } else {
        let probe = mode.direction(p, g.n_modes())?;
        sign_or(displacement_stats(&probe.curve(p, g)?).y0, 1.0)
    };
    let speed_sign = sign_or(mode.c, 1.0);

    let mut points = vec![first];
    let mut phase = Phase::Displacement { dir };
    let mut step = cfg.initial_step;

    let termination = loop {
        if points.len() >= cfg.max_points {
            break Termination::MaxSteps;
        }
        let last = points.last().expect("seed is present");
        let constraint = phase.constraint(last, step);
        let report = solve_point(&last.state, constraint, p, g, &cfg.solver)?;
        let accepted = report.converged && (report.solution.c - last.state.c).abs() <= cfg.max_speed_jump;
        let curve = if accepted { report.solution.curve(p, g).ok() } else { None };

        let Some(curve) = curve else {
            step *= 0.5;
            if step < cfg.step_floor {
                match phase.next(&points, cfg.max_fourier_mode, g.n_modes()) {
                    Some(next) => {
                        phase = next;
                        step = cfg.initial_step;
                    }
                    None => break Termination::StepUnderflow,
                }
            }
            continue;
        };

        let point = BranchPoint::from_state(report.solution, report.final_residual, constraint, &curve);
        let (c, h) = (point.state.c, point.h);
        let tail = tail_indicator(&point.state.a);
        points.push(point);

        if self_intersects(&curve, cfg.self_intersection_tol) {
            break Termination::SelfIntersection;
        }
        if c.abs() <= cfg.c_trivial_tol || sign_or(c, 0.0) != speed_sign || h <= cfg.h_trivial_tol {
            break Termination::ReturnToTrivial;
        }
        if tail > cfg.tail_tol {
            break Termination::UnresolvedGrowth;
        }
    };

    Ok(Branch { params: *p, grid: *g, seed: *mode, points, termination })
}

/// Seeds and follows one branch.
pub fn run_branch(mode: &LinearMode, cfg: &ContinuationConfig, p: &PhysParams, g: &GridSpec) -> Result<Branch> {
    cfg.validate()?;
    let seed = seed_point(mode, cfg.amp0, p, g, &cfg.solver)?;
    continue_branch(&seed, mode, cfg, p, g)
}

/// Runs one independent branch per `Ã` value, in parallel. Results keep the
/// order of `atilde_values`; a failed branch does not stop the others.
pub fn sweep_surface(
    p_base: &PhysParams,
    atilde_values: &[f64],
    mode: &LinearMode,
    cfg: &ContinuationConfig,
    g: &GridSpec,
) -> Result<Vec<Result<Branch>>> {
    if atilde_values.is_empty() {
        return Err(Error::InvalidInput("the Atilde list is empty".into()));
    }
    Ok(atilde_values
        .par_iter()
        .map(|&at| {
            let p = p_base.with_atilde(at);
            p.validate()?;
            run_branch(mode, cfg, &p, g)
        })
        .collect())
}

/// Re-solves a stored point on a different grid with the same constraint,
/// starting from its coefficients zero-padded or truncated to the new grid.
pub fn refine_point(
    point: &BranchPoint,
    p: &PhysParams,
    g: &GridSpec,
    solver: &BroydenConfig,
) -> Result<SolveReport<BranchPoint>> {
    let guess = point.state.resized(g.n_modes());
    let report = solve_point(&guess, point.constraint, p, g, solver)?;
    let curve = report.solution.curve(p, g)?;
    let residual = report.final_residual;
    let constraint = point.constraint;
    Ok(report.map(|s| BranchPoint::from_state(s, residual, constraint, &curve)))
}

/// Whether a point's constraint kind is the tangent-angle mode `m`.
pub fn uses_fourier_mode(point: &BranchPoint) -> Option<usize> {
    (point.constraint.kind == ConstraintKind::FourierMode).then_some(point.constraint.mode_index)
}
