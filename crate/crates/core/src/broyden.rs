//! Broyden's "good" quasi-Newton method for square systems.
//!
//! The Jacobian starts from forward differences and is corrected by the
//! rank-one secant update `J += (Δf − J s) sᵀ / (sᵀ s)`. There is no line
//! search; a diverging solve is left to the caller.

use nalgebra::{DMatrix, DVector};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::Result;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct BroydenConfig {
    /// Convergence threshold on the infinity norm of the residual.
    pub tol: f64,
    pub max_iter: usize,
    /// Relative forward-difference step, scaled by `max(1, |x_i|)`.
    pub fd_step: f64,
    /// Consecutive residual increases that trigger one Jacobian rebuild.
    pub refresh_after: usize,
}

impl Default for BroydenConfig {
    fn default() -> Self {
        Self { tol: 1e-9, max_iter: 200, fd_step: 1e-7, refresh_after: 5 }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum FailureKind {
    MaxIter,
    EvaluationError,
    SingularUpdate,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SolveReport<T> {
    /// Last iterate (the converged point when `converged`).
    pub solution: T,
    pub iterations: usize,
    pub final_residual: f64,
    pub converged: bool,
    pub failure: Option<FailureKind>,
}

impl<T> SolveReport<T> {
    pub fn map<U>(self, f: impl FnOnce(T) -> U) -> SolveReport<U> {
        SolveReport {
            solution: f(self.solution),
            iterations: self.iterations,
            final_residual: self.final_residual,
            converged: self.converged,
            failure: self.failure,
        }
    }
}

fn inf_norm(v: &[f64]) -> f64 {
    v.iter().fold(0.0, |m, x| m.max(x.abs()))
}

fn finite(v: &[f64]) -> bool {
    v.iter().all(|x| x.is_finite())
}

fn fd_jacobian<F>(f: &F, x: &[f64], fx: &[f64], rel: f64) -> Option<DMatrix<f64>>
where
    F: Fn(&[f64]) -> Result<Vec<f64>> + Sync,
{
    let n = x.len();
    let columns: Vec<Option<Vec<f64>>> = (0..n)
        .into_par_iter()
        .map(|i| {
            let h = rel * x[i].abs().max(1.0);
            let mut xp = x.to_vec();
            xp[i] += h;
            let h = xp[i] - x[i];
            let fp = f(&xp).ok().filter(|v| v.len() == fx.len() && finite(v))?;
            Some(fp.iter().zip(fx).map(|(a, b)| (a - b) / h).collect())
        })
        .collect();
    let mut j = DMatrix::zeros(fx.len(), n);
    for (i, col) in columns.into_iter().enumerate() {
        j.set_column(i, &DVector::from_vec(col?));
    }
    Some(j)
}

/// Solves `f(x) = 0` from `x0`. `f` must map `n` unknowns to `n` residuals.
pub fn solve<F>(f: F, x0: &[f64], cfg: &BroydenConfig) -> SolveReport<Vec<f64>>
where
    F: Fn(&[f64]) -> Result<Vec<f64>> + Sync,
{
    let fail = |x: Vec<f64>, it, r, kind| SolveReport {
        solution: x,
        iterations: it,
        final_residual: r,
        converged: false,
        failure: Some(kind),
    };
    let mut x = x0.to_vec();
    let mut fx = match f(&x) {
        Ok(v) if v.len() == x.len() && finite(&v) => v,
        _ => return fail(x, 0, f64::INFINITY, FailureKind::EvaluationError),
    };
    let mut r = inf_norm(&fx);
    if r <= cfg.tol {
        return SolveReport { solution: x, iterations: 0, final_residual: r, converged: true, failure: None };
    }
    let Some(mut jac) = fd_jacobian(&f, &x, &fx, cfg.fd_step) else {
        return fail(x, 0, r, FailureKind::EvaluationError);
    };
    let mut increases = 0;
    let mut refreshed = false;

    for it in 1..=cfg.max_iter {
        let rhs = -DVector::from_column_slice(&fx);
        let step = match jac.clone().lu().solve(&rhs) {
            Some(s) if s.iter().all(|v| v.is_finite()) => s,
            _ => return fail(x, it - 1, r, FailureKind::SingularUpdate),
        };
        let ss = step.dot(&step);
        if ss == 0.0 {
            return fail(x, it - 1, r, FailureKind::SingularUpdate);
        }
        let x_new: Vec<f64> = x.iter().zip(step.iter()).map(|(a, s)| a + s).collect();
        let f_new = match f(&x_new) {
            Ok(v) if finite(&v) => v,
            _ => return fail(x, it, r, FailureKind::EvaluationError),
        };
        let r_new = inf_norm(&f_new);
        increases = if r_new > r { increases + 1 } else { 0 };

        if increases >= cfg.refresh_after && !refreshed {
            match fd_jacobian(&f, &x_new, &f_new, cfg.fd_step) {
                Some(j) => jac = j,
                None => return fail(x_new, it, r_new, FailureKind::EvaluationError),
            }
            refreshed = true;
            increases = 0;
        } else {
            let df = DVector::from_column_slice(&f_new) - DVector::from_column_slice(&fx);
            let u = (df - &jac * &step) / ss;
            jac.ger(1.0, &u, &step, 1.0);
        }
        x = x_new;
        fx = f_new;
        r = r_new;
        if r <= cfg.tol {
            return SolveReport { solution: x, iterations: it, final_residual: r, converged: true, failure: None };
        }
    }
    fail(x, cfg.max_iter, r, FailureKind::MaxIter)
}
