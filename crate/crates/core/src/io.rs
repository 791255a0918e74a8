//! Run configuration, branch files, plot data and the four commands behind
//! the `hydrowave` binary.
//!
//! Branch files are pretty-printed JSON whose floats use the shortest
//! round-trip representation, so reading and rewriting a file reproduces it
//! byte for byte. Plot data is plain CSV with a header row.

use std::fs;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::continuation::{run_branch, sweep_surface, Branch, BranchPoint, ContinuationConfig, Termination};
use crate::error::{Error, Result};
use crate::geometry::CurveSample;
use crate::linear::{c_pm, in_k, radicand, real_root_l, BranchSign, LinearMode};
use crate::params::PhysParams;
use crate::residual::{eval_residual, residual_norm, ConstraintSpec, WaveState};
use crate::spectral::GridSpec;

/// Format tag written into every branch file.
pub const BRANCH_FORMAT: &str = "hydrowave-branch-v1";

/// Number of profiles exported along a branch.
pub const PROFILE_COUNT: usize = 8;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SeedConfig {
    pub k: u32,
    pub sign: BranchSign,
}

impl Default for SeedConfig {
    fn default() -> Self {
        Self { k: 1, sign: BranchSign::Plus }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    #[serde(default = "PhysParams::reference")]
    pub params: PhysParams,
    #[serde(default = "default_grid")]
    pub grid: GridSpec,
    #[serde(default)]
    pub seed: SeedConfig,
    #[serde(default)]
    pub continuation: ContinuationConfig,
    /// Largest wavenumber in the linear table.
    #[serde(default = "default_kmax")]
    pub kmax: u32,
    /// `Ã` values for a surface sweep.
    #[serde(default)]
    pub atilde_list: Vec<f64>,
    #[serde(default = "default_output")]
    pub output_path: String,
}

fn default_grid() -> GridSpec {
    GridSpec::with_nodes(128).expect("128 nodes is a valid grid")
}

fn default_kmax() -> u32 {
    10
}

fn default_output() -> String {
    "out".into()
}

impl Default for RunConfig {
    fn default() -> Self {
        Self {
            params: PhysParams::reference(),
            grid: default_grid(),
            seed: SeedConfig::default(),
            continuation: ContinuationConfig::default(),
            kmax: default_kmax(),
            atilde_list: Vec::new(),
            output_path: default_output(),
        }
    }
}

impl RunConfig {
    pub fn from_toml_str(text: &str) -> Result<Self> {
        let cfg: RunConfig = toml::from_str(text).map_err(|e| Error::Config(e.to_string()))?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = fs::read_to_string(path)
            .map_err(|e| Error::Config(format!("cannot read {}: {e}", path.display())))?;
        Self::from_toml_str(&text)
    }

    pub fn validate(&self) -> Result<()> {
        self.params.validate().map_err(|e| Error::Config(e.to_string()))?;
        self.continuation.validate()?;
        if self.seed.k == 0 || self.seed.k as usize > self.grid.n_modes() {
            return Err(Error::Config(format!(
                "seed k must lie in 1..={}, got {}",
                self.grid.n_modes(),
                self.seed.k
            )));
        }
        if self.kmax == 0 {
            return Err(Error::Config("kmax must be at least 1".into()));
        }
        if let Some(bad) = self.atilde_list.iter().find(|v| !(**v >= 0.0 && v.is_finite())) {
            return Err(Error::Config(format!("Atilde values must be non-negative, got {bad}")));
        }
        if self.output_path.is_empty() {
            return Err(Error::Config("output_path is empty".into()));
        }
        Ok(())
    }

    pub fn out_dir(&self) -> PathBuf {
        PathBuf::from(&self.output_path)
    }

    pub fn mode(&self) -> Result<LinearMode> {
        LinearMode::new(self.seed.k, self.seed.sign, &self.params)
    }
}

/// One converged point as stored on disk.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PointRecord {
    pub c: f64,
    pub h: f64,
    pub y0: f64,
    pub sigma: f64,
    pub residual: f64,
    pub constraint: ConstraintSpec,
    pub a: Vec<f64>,
    pub b: Vec<f64>,
}

impl From<&BranchPoint> for PointRecord {
    fn from(p: &BranchPoint) -> Self {
        Self {
            c: p.state.c,
            h: p.h,
            y0: p.y0,
            sigma: p.sigma,
            residual: p.residual,
            constraint: p.constraint,
            a: p.state.a.clone(),
            b: p.state.b.clone(),
        }
    }
}

impl PointRecord {
    pub fn state(&self) -> WaveState {
        WaveState { a: self.a.clone(), b: self.b.clone(), c: self.c }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BranchFile {
    pub format: String,
    pub code_version: String,
    /// Resolved configuration, defaults applied.
    pub config: RunConfig,
    pub seed: LinearMode,
    pub termination: Termination,
    /// How the resolution-loss termination is decided.
    pub tail_indicator: String,
    pub points: Vec<PointRecord>,
}

impl BranchFile {
    pub fn new(branch: &Branch, config: &RunConfig) -> Self {
        let mut config = config.clone();
        config.params = branch.params;
        config.grid = branch.grid;
        let tail_tol = config.continuation.tail_tol;
        Self {
            format: BRANCH_FORMAT.into(),
            code_version: env!("CARGO_PKG_VERSION").into(),
            config,
            seed: branch.seed,
            termination: branch.termination,
            tail_indicator: format!(
                "mean |a_k| over the top tenth of modes exceeds {:e}",
                tail_tol
            ),
            points: branch.points.iter().map(PointRecord::from).collect(),
        }
    }

    pub fn to_json(&self) -> Result<String> {
        let mut s = serde_json::to_string_pretty(self)?;
        s.push('\n');
        Ok(s)
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let file: BranchFile = serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
        file.check()?;
        Ok(file)
    }

    pub fn write(&self, path: &Path) -> Result<()> {
        fs::write(path, self.to_json()?)?;
        Ok(())
    }

    pub fn read(path: &Path) -> Result<Self> {
        let text = fs::read_to_string(path).map_err(|e| Error::Parse(format!("cannot read {}: {e}", path.display())))?;
        Self::from_json(&text)
    }

    fn check(&self) -> Result<()> {
        if self.format != BRANCH_FORMAT {
            return Err(Error::Parse(format!("unknown format `{}`", self.format)));
        }
        self.config.params.validate().map_err(|e| Error::Parse(e.to_string()))?;
        let n = self.config.grid.n_modes();
        for (i, p) in self.points.iter().enumerate() {
            if p.a.len() != n || p.b.len() != n {
                return Err(Error::Parse(format!("point {i} has {}/{} coefficients, expected {n}", p.a.len(), p.b.len())));
            }
            if p.constraint.validate(n).is_err() {
                return Err(Error::Parse(format!("point {i} has an invalid constraint")));
            }
        }
        if self.points.is_empty() {
            return Err(Error::Parse("branch file holds no points".into()));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
struct SpeedAmplitudeRow {
    c: f64,
    h: f64,
    y0: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
struct ProfileRow {
    x: f64,
    y: f64,
}

/// `c,h,y0` for every point of the branch.
pub fn write_speed_amplitude_csv(path: &Path, branch: &Branch) -> Result<()> {
    let mut w = csv::Writer::from_path(path)?;
    for p in &branch.points {
        w.serialize(SpeedAmplitudeRow { c: p.state.c, h: p.h, y0: p.y0 })?;
    }
    w.flush()?;
    Ok(())
}

/// `x,y` for one period of the profile, closed by repeating the first node
/// shifted by the period.
pub fn write_profile_csv(path: &Path, curve: &CurveSample) -> Result<()> {
    let mut w = csv::Writer::from_path(path)?;
    for z in curve.z.iter().chain(std::iter::once(&(curve.z[0] + curve.period))) {
        w.serialize(ProfileRow { x: z.re, y: z.im })?;
    }
    w.flush()?;
    Ok(())
}

/// `count` indices spread evenly over `0..n`, always including both ends.
pub fn profile_indices(n: usize, count: usize) -> Vec<usize> {
    if n == 0 || count == 0 {
        return Vec::new();
    }
    if count == 1 || n == 1 {
        return vec![n - 1];
    }
    let mut idx: Vec<usize> = (0..count)
        .map(|i| ((i as f64) * (n - 1) as f64 / (count - 1) as f64).round() as usize)
        .collect();
    idx.dedup();
    idx
}

/// One row of the linear-theory table.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LinearRow {
    pub k: u32,
    pub c_plus: Option<f64>,
    pub c_minus: Option<f64>,
    pub radicand: f64,
    pub l: f64,
    pub in_k: bool,
    pub reason: String,
}

pub fn linear_table(p: &PhysParams, kmax: u32) -> Vec<LinearRow> {
    (1..=kmax)
        .map(|k| {
            let m = in_k(k, p);
            LinearRow {
                k,
                c_plus: c_pm(k, BranchSign::Plus, p),
                c_minus: c_pm(k, BranchSign::Minus, p),
                radicand: radicand(k, p),
                l: real_root_l(k, p),
                in_k: m.is_member(),
                reason: m.reason(),
            }
        })
        .collect()
}

pub fn format_linear_table(rows: &[LinearRow]) -> String {
    let speed = |c: Option<f64>| c.map_or_else(|| "complex".to_string(), |v| format!("{v:.12}"));
    let mut s = format!("{:>4} {:>16} {:>16} {:>14} {:>14} {:>6}  {}\n", "k", "c_+", "c_-", "radicand", "l(k)", "in_K", "reason");
    for r in rows {
        s.push_str(&format!(
            "{:>4} {:>16} {:>16} {:>14.6e} {:>14.6e} {:>6}  {}\n",
            r.k,
            speed(r.c_plus),
            speed(r.c_minus),
            r.radicand,
            r.l,
            r.in_k,
            r.reason
        ));
    }
    s
}

fn ensure_dir(dir: &Path) -> Result<()> {
    fs::create_dir_all(dir)?;
    Ok(())
}

/// Linear table for `k = 1..=kmax`, also written to `linear.csv` when an
/// output directory is given.
pub fn cmd_linear(cfg: &RunConfig, out: Option<&Path>) -> Result<Vec<LinearRow>> {
    cfg.validate()?;
    let rows = linear_table(&cfg.params, cfg.kmax);
    if let Some(dir) = out {
        ensure_dir(dir)?;
        let mut w = csv::Writer::from_path(dir.join("linear.csv"))?;
        for r in &rows {
            w.serialize(r)?;
        }
        w.flush()?;
    }
    Ok(rows)
}

/// Files produced by [`cmd_branch`].
#[derive(Debug, Clone)]
pub struct BranchOutput {
    pub branch: Branch,
    pub branch_file: PathBuf,
    pub speed_amplitude: PathBuf,
    pub profiles: Vec<PathBuf>,
}

/// Writes the branch file, the speed-amplitude table and sampled profiles
/// into `dir`.
pub fn write_branch_outputs(dir: &Path, branch: Branch, cfg: &RunConfig) -> Result<BranchOutput> {
    ensure_dir(dir)?;
    let branch_file = dir.join("branch.json");
    BranchFile::new(&branch, cfg).write(&branch_file)?;
    let speed_amplitude = dir.join("speed_amplitude.csv");
    write_speed_amplitude_csv(&speed_amplitude, &branch)?;
    let mut profiles = Vec::new();
    for (n, i) in profile_indices(branch.points.len(), PROFILE_COUNT).into_iter().enumerate() {
        let path = dir.join(format!("profile_{n:02}.csv"));
        write_profile_csv(&path, &branch.points[i].curve(&branch.params, &branch.grid)?)?;
        profiles.push(path);
    }
    Ok(BranchOutput { branch, branch_file, speed_amplitude, profiles })
}

pub fn cmd_branch(cfg: &RunConfig) -> Result<BranchOutput> {
    cfg.validate()?;
    let branch = run_branch(&cfg.mode()?, &cfg.continuation, &cfg.params, &cfg.grid)?;
    write_branch_outputs(&cfg.out_dir(), branch, cfg)
}

/// Re-evaluation of one stored point.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PointCheck {
    pub index: usize,
    pub residual: f64,
    /// Residual on the doubled grid, projected onto the stored modes.
    pub residual_doubled: f64,
    /// Largest distance between the stored-grid profile and the doubled-grid
    /// profile built from the same coefficients, over the shared nodes.
    pub profile_discrepancy: f64,
    pub violates: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct VerifyReport {
    pub tol: f64,
    pub points: Vec<PointCheck>,
    pub max_residual: f64,
    pub max_residual_doubled: f64,
    pub max_profile_discrepancy: f64,
    pub violations: Vec<usize>,
}

impl VerifyReport {
    pub fn passed(&self) -> bool {
        self.violations.is_empty()
    }

    pub fn summary(&self) -> String {
        format!(
            "points: {}\nmax residual: {:e}\nmax residual (doubled grid): {:e}\nmax profile discrepancy: {:e}\nviolations (> {:e}): {}\n",
            self.points.len(),
            self.max_residual,
            self.max_residual_doubled,
            self.max_profile_discrepancy,
            self.tol,
            if self.violations.is_empty() {
                "none".to_string()
            } else {
                self.violations.iter().map(|i| i.to_string()).collect::<Vec<_>>().join(",")
            }
        )
    }
}

fn check_point(index: usize, rec: &PointRecord, p: &PhysParams, g: &GridSpec, tol: f64) -> PointCheck {
    let fine = g.doubled();
    let state = rec.state();
    let fine_state = state.resized(fine.n_modes());
    let coarse = eval_residual(&state, p, &rec.constraint, g);
    let doubled = eval_residual(&fine_state, p, &rec.constraint, &fine);
    let residual = coarse.as_ref().map_or(f64::INFINITY, residual_norm);
    // Only the stored modes: the truncated system says nothing about the rest.
    let n = g.n_modes();
    let residual_doubled = doubled.as_ref().map_or(f64::INFINITY, |r| {
        r.r_theta[..n].iter().chain(&r.r_gamma[..n]).fold(r.r_constraint.abs(), |m, v| m.max(v.abs()))
    });
    let profile_discrepancy = match (state.curve(p, g), fine_state.curve(p, &fine)) {
        (Ok(c), Ok(f)) => c.z.iter().enumerate().fold(0.0f64, |m, (j, z)| m.max((z - f.z[2 * j]).norm())),
        _ => f64::INFINITY,
    };
    PointCheck { index, residual, residual_doubled, profile_discrepancy, violates: residual.is_nan() || residual > tol }
}

/// Re-evaluates every stored point at its own grid and at twice the nodes.
pub fn verify_file(file: &BranchFile, tol: f64) -> VerifyReport {
    let p = &file.config.params;
    let g = &file.config.grid;
    let points: Vec<PointCheck> = file.points.iter().enumerate().map(|(i, r)| check_point(i, r, p, g, tol)).collect();
    let max = |f: fn(&PointCheck) -> f64| points.iter().map(f).fold(0.0, f64::max);
    VerifyReport {
        tol,
        max_residual: max(|c| c.residual),
        max_residual_doubled: max(|c| c.residual_doubled),
        max_profile_discrepancy: max(|c| c.profile_discrepancy),
        violations: points.iter().filter(|c| c.violates).map(|c| c.index).collect(),
        points,
    }
}

pub fn cmd_verify(path: &Path, tol: f64) -> Result<VerifyReport> {
    if tol.is_nan() || tol <= 0.0 {
        return Err(Error::Config(format!("tolerance must be positive, got {tol}")));
    }
    Ok(verify_file(&BranchFile::read(path)?, tol))
}

/// One line of the surface summary.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SurfaceRow {
    pub atilde: f64,
    pub terminal_h: Option<f64>,
    pub terminal_abs_c: Option<f64>,
    pub termination: String,
    pub points: usize,
    pub file: String,
}

/// Runs one branch per `Ã`, writes `branch_XX.json` per success and
/// `summary.csv`. Fails only if every branch failed.
pub fn cmd_surface(cfg: &RunConfig) -> Result<Vec<SurfaceRow>> {
    cfg.validate()?;
    if cfg.atilde_list.is_empty() {
        return Err(Error::Config("surface needs a non-empty atilde_list".into()));
    }
    let dir = cfg.out_dir();
    ensure_dir(&dir)?;
    let results = sweep_surface(&cfg.params, &cfg.atilde_list, &cfg.mode()?, &cfg.continuation, &cfg.grid)?;
    let mut rows = Vec::with_capacity(results.len());
    let mut last_err = None;
    for (i, (res, &atilde)) in results.into_iter().zip(&cfg.atilde_list).enumerate() {
        let row = match res {
            Ok(branch) => {
                let name = format!("branch_{i:02}.json");
                BranchFile::new(&branch, cfg).write(&dir.join(&name))?;
                let last = branch.last();
                SurfaceRow {
                    atilde,
                    terminal_h: Some(last.h),
                    terminal_abs_c: Some(last.state.c.abs()),
                    termination: branch.termination.label().into(),
                    points: branch.points.len(),
                    file: name,
                }
            }
            Err(e) => {
                let row = SurfaceRow {
                    atilde,
                    terminal_h: None,
                    terminal_abs_c: None,
                    termination: format!("error: {e}"),
                    points: 0,
                    file: String::new(),
                };
                last_err = Some(e);
                row
            }
        };
        rows.push(row);
    }
    let mut w = csv::Writer::from_path(dir.join("summary.csv"))?;
    for r in &rows {
        w.serialize(r)?;
    }
    w.flush()?;
    match last_err {
        Some(e) if rows.iter().all(|r| r.terminal_h.is_none()) => Err(e),
        _ => Ok(rows),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn defaults_resolve() {
        let cfg = RunConfig::from_toml_str("").unwrap();
        assert_eq!(cfg, RunConfig::default());
        assert_eq!(cfg.grid.n_nodes(), 128);
        assert_eq!(cfg.grid.n_modes(), 63);
    }

    #[test]
    fn partial_config() {
        let cfg = RunConfig::from_toml_str(
            r#"
            output_path = "runs/a"
            atilde_list = [0.1, 0.5]
            [params]
            S = 0.25
            tau1 = 2.0
            A = 0.0
            Atilde = 0.0
            [grid]
            n_nodes = 64
            [seed]
            sign = -1
            [continuation]
            max_points = 10
            [continuation.solver]
            tol = 1e-10
            "#,
        )
        .unwrap();
        assert_eq!(cfg.grid.n_modes(), 31);
        assert_eq!(cfg.seed.sign, BranchSign::Minus);
        assert_eq!(cfg.continuation.max_points, 10);
        assert_eq!(cfg.continuation.solver.tol, 1e-10);
        assert_eq!(cfg.continuation.initial_step, 5e-3);
    }

    #[test]
    fn unknown_and_invalid_keys_fail() {
        for bad in [
            "colour = 1",
            "[params]\nS = 1\ntau1 = 1\nA = 0\nAtilde = 0\ng = 9.8",
            "[grid]\nn_nodes = 63",
            "[grid]\nn_nodes = 64\nn_modes = 32",
            "[seed]\nk = 0",
            "[seed]\nsign = 2",
            "[continuation]\nstep = 1",
            "kmax = 0",
        ] {
            assert!(matches!(RunConfig::from_toml_str(bad), Err(Error::Config(_))), "{bad}");
        }
    }

    #[test]
    fn profile_sampling() {
        assert_eq!(profile_indices(1, 8), vec![0]);
        assert_eq!(profile_indices(3, 8), vec![0, 1, 2]);
        assert_eq!(profile_indices(100, 4), vec![0, 33, 66, 99]);
        assert!(profile_indices(0, 8).is_empty());
    }

    #[test]
    fn linear_table_reports_complex_speeds() {
        let p = PhysParams { gamma_bar: 40.0, atwood: 0.0, ..PhysParams::reference() };
        let rows = linear_table(&p, 3);
        assert_eq!(rows[0].c_plus, None);
        assert!(!rows[0].in_k);
        assert!(format_linear_table(&rows).contains("complex"));
    }
}
