//! Ridge and LASSO penalties, penalized gradient steps, coordinate-descent
//! LASSO and regularization paths.
//!
//! Closed-form and path work uses the sum convention
//! `Σ_m (θᵀx_m - y_m)² + λ·Ω(θ)`; a mean-convention penalty maps to
//! `λ_sum = M·λ_mean`. The bias (coordinate 0) is never penalized here.

use alloc::vec;
use alloc::vec::Vec;

use crate::dataset::column_scaling;
use crate::error::{Error, Result};
use crate::glm::{self, LinearParams};
use crate::linalg::{dot, Matrix, Vector};
use crate::math;

/// Coefficients with `|θ_n|` at or below this count as zero.
pub const ZERO_TOL: f64 = 1e-10;
pub const DEFAULT_PATH_POINTS: usize = 60;
/// The default grid spans `λ_max` down to `λ_max·DEFAULT_PATH_RATIO`.
pub const DEFAULT_PATH_RATIO: f64 = 1e-4;
pub const DEFAULT_MAX_SWEEPS: usize = 10_000;
pub const DEFAULT_TOL: f64 = 1e-10;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "lowercase"))]
pub enum PenaltyKind {
    None,
    L2,
    L1,
}

#[derive(Clone, Copy, Debug, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct PenaltySpec {
    pub kind: PenaltyKind,
    pub lambda: f64,
}

impl PenaltySpec {
    pub fn new(kind: PenaltyKind, lambda: f64) -> Result<Self> {
        if !(lambda >= 0.0) || !lambda.is_finite() {
            return Err(Error::param("penalty lambda must be finite and >= 0"));
        }
        Ok(Self { kind, lambda })
    }

    pub fn none() -> Self {
        Self {
            kind: PenaltyKind::None,
            lambda: 0.0,
        }
    }

    /// `λ·Ω(θ)` over the non-bias coordinates.
    pub fn value(&self, theta: &[f64]) -> f64 {
        let rest = theta.get(1..).unwrap_or(&[]);
        match self.kind {
            PenaltyKind::None => 0.0,
            PenaltyKind::L2 => self.lambda * dot(rest, rest),
            PenaltyKind::L1 => self.lambda * rest.iter().map(|v| math::abs(*v)).sum::<f64>(),
        }
    }
}

/// One penalized gradient step:
/// `θ - η·g`, minus `η·λ·θ_n` (L2) or `η·λ·sign(θ_n)` (L1) off the bias.
pub fn penalized_step(theta: &[f64], grad: &[f64], eta: f64, penalty: &PenaltySpec) -> Result<Vector> {
    if theta.len() != grad.len() {
        return Err(Error::shape("penalized_step", theta.len(), grad.len()));
    }
    let out = theta
        .iter()
        .zip(grad)
        .enumerate()
        .map(|(n, (&t, &g))| {
            let base = t - eta * g;
            if n == 0 {
                return base;
            }
            match penalty.kind {
                PenaltyKind::None => base,
                PenaltyKind::L2 => base - eta * penalty.lambda * t,
                PenaltyKind::L1 => base - eta * penalty.lambda * math::sign(t),
            }
        })
        .collect();
    Ok(Vector::from_vec(out))
}

/// `sign(ρ)·max(|ρ| - t, 0)`.
pub fn soft_threshold(rho: f64, t: f64) -> f64 {
    if rho > t {
        rho - t
    } else if rho < -t {
        rho + t
    } else {
        0.0
    }
}

/// Sum-convention LASSO objective `Σ(θᵀx_m - y_m)² + λ Σ_{n≥1} |θ_n|`.
pub fn lasso_objective(x: &Matrix, y: &[f64], theta: &[f64], lambda: f64) -> Result<f64> {
    let fit = x.matvec(theta)?;
    let rss: f64 = fit.iter().zip(y).map(|(a, b)| (a - b) * (a - b)).sum();
    Ok(rss + lambda * theta[1..].iter().map(|v| math::abs(*v)).sum::<f64>())
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "snake_case"))]
pub enum SolveStatus {
    Converged,
    /// The sweep budget ran out; the last iterate is returned.
    NotConverged,
}

#[derive(Clone, Debug, PartialEq)]
pub struct LassoFit {
    pub params: LinearParams,
    pub status: SolveStatus,
    pub sweeps: usize,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct LassoConfig {
    pub max_sweeps: usize,
    /// Stop once a sweep changes no coordinate by more than `tol`.
    pub tol: f64,
}

impl Default for LassoConfig {
    fn default() -> Self {
        Self {
            max_sweeps: DEFAULT_MAX_SWEEPS,
            tol: DEFAULT_TOL,
        }
    }
}

fn check_design(x: &Matrix, y: &[f64]) -> Result<()> {
    if x.rows() != y.len() {
        return Err(Error::shape("lasso design", x.rows(), y.len()));
    }
    if x.rows() == 0 {
        return Err(Error::EmptyInput);
    }
    if x.cols() == 0 {
        return Err(Error::param("design needs a bias column"));
    }
    Ok(())
}

/// Cyclic coordinate descent for the sum-convention LASSO on a bias-augmented design.
///
/// Each coordinate takes its exact 1-D minimizer `soft(ρ_n, λ/2)/z_n`; the bias
/// takes `ρ_0/z_0`. All-zero columns are pinned at 0.
pub fn lasso_cd(
    x: &Matrix,
    y: &[f64],
    lambda: f64,
    cfg: &LassoConfig,
    warm_start: Option<&[f64]>,
) -> Result<LassoFit> {
    check_design(x, y)?;
    if !(lambda >= 0.0) || !lambda.is_finite() {
        return Err(Error::param("lasso lambda must be finite and >= 0"));
    }
    let n = x.cols();
    let mut theta = match warm_start {
        Some(w) if w.len() == n => w.to_vec(),
        Some(w) => return Err(Error::shape("lasso warm start", n, w.len())),
        None => vec![0.0; n],
    };
    let cols: Vec<Vec<f64>> = (0..n).map(|j| x.column(j)).collect();
    let z: Vec<f64> = cols.iter().map(|c| dot(c, c)).collect();
    let fit = x.matvec(&theta)?;
    let mut resid: Vec<f64> = y.iter().zip(fit.iter()).map(|(a, b)| a - b).collect();
    for sweep in 1..=cfg.max_sweeps {
        let mut moved: f64 = 0.0;
        for j in 0..n {
            let old = theta[j];
            let new = if z[j] == 0.0 {
                0.0
            } else {
                // ρ_j = x_jᵀ(y - ŷ without coordinate j)
                let rho = dot(&cols[j], &resid) + z[j] * old;
                if j == 0 {
                    rho / z[j]
                } else {
                    soft_threshold(rho, lambda / 2.0) / z[j]
                }
            };
            if new != old {
                let d = new - old;
                for (r, c) in resid.iter_mut().zip(&cols[j]) {
                    *r -= d * c;
                }
                theta[j] = new;
                moved = moved.max(math::abs(d));
            }
        }
        if !theta.iter().all(|v| v.is_finite()) {
            return Err(Error::NonFinite { op: "lasso_cd" });
        }
        if moved <= cfg.tol {
            return Ok(LassoFit {
                params: LinearParams {
                    theta: Vector::from_vec(theta),
                },
                status: SolveStatus::Converged,
                sweeps: sweep,
            });
        }
    }
    Ok(LassoFit {
        params: LinearParams {
            theta: Vector::from_vec(theta),
        },
        status: SolveStatus::NotConverged,
        sweeps: cfg.max_sweeps,
    })
}

/// Smallest λ whose LASSO solution has all non-bias coefficients zero:
/// `2·max_n |x_nᵀ(y - ȳ)|` over the columns after the bias.
pub fn lambda_max(x: &Matrix, y: &[f64]) -> Result<f64> {
    check_design(x, y)?;
    let mean = y.iter().sum::<f64>() / y.len() as f64;
    let centered: Vec<f64> = y.iter().map(|v| v - mean).collect();
    let c = x.tr_matvec(&centered)?;
    Ok(2.0 * c[1..].iter().fold(0.0f64, |m, v| m.max(math::abs(*v))))
}

/// Largest violation of the LASSO optimality conditions, with `r = y - Xθ`:
/// `|2x_nᵀr| ≤ λ` where `θ_n = 0`, `2x_nᵀr = λ·sign(θ_n)` elsewhere, and
/// `x_0ᵀr = 0` for the bias.
pub fn kkt_violation(x: &Matrix, y: &[f64], theta: &[f64], lambda: f64) -> Result<f64> {
    check_design(x, y)?;
    let fit = x.matvec(theta)?;
    let r: Vec<f64> = y.iter().zip(fit.iter()).map(|(a, b)| a - b).collect();
    let c = x.tr_matvec(&r)?;
    let mut worst = math::abs(2.0 * c[0]);
    for j in 1..theta.len() {
        let g = 2.0 * c[j];
        let v = if math::abs(theta[j]) <= ZERO_TOL {
            (math::abs(g) - lambda).max(0.0)
        } else {
            math::abs(g - lambda * math::sign(theta[j]))
        };
        worst = worst.max(v);
    }
    Ok(worst)
}

#[derive(Clone, Debug, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct PathPoint {
    pub lambda: f64,
    pub theta: Vector,
    /// `#{n ≥ 1 : |θ_n| > ZERO_TOL}`.
    pub nonzero_count: usize,
    pub train_mse: f64,
}

/// `count` log-spaced values from `hi` down to `hi·ratio`.
pub fn log_grid(hi: f64, ratio: f64, count: usize) -> Result<Vec<f64>> {
    if !(hi > 0.0) || !(ratio > 0.0 && ratio < 1.0) || count < 2 {
        return Err(Error::param("log grid needs hi > 0, 0 < ratio < 1, count >= 2"));
    }
    let step = math::ln(ratio) / (count - 1) as f64;
    Ok((0..count).map(|i| hi * math::exp(step * i as f64)).collect())
}

/// The default path grid: 60 values from `λ_max` to `λ_max·1e-4`.
pub fn default_lambda_grid(x: &Matrix, y: &[f64]) -> Result<Vec<f64>> {
    let lm = lambda_max(x, y)?;
    if !(lm > 0.0) {
        return Err(Error::param("lambda_max is 0 (constant target); supply a grid"));
    }
    log_grid(lm, DEFAULT_PATH_RATIO, DEFAULT_PATH_POINTS)
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PathOptions {
    /// Standardize the non-bias columns before fitting; coefficients are
    /// reported on the standardized scale.
    pub standardize: bool,
    pub lasso: LassoConfig,
}

impl Default for PathOptions {
    fn default() -> Self {
        Self {
            standardize: true,
            lasso: LassoConfig::default(),
        }
    }
}

fn standardized_design(x: &Matrix) -> Result<Matrix> {
    let raw = Matrix::new(
        x.rows(),
        x.cols() - 1,
        (0..x.rows()).flat_map(|i| x.row(i)[1..].to_vec()).collect(),
    )?;
    let s = column_scaling(&raw);
    Ok(s.apply(&raw)?.with_bias())
}

fn nonzero(theta: &[f64]) -> usize {
    theta[1..].iter().filter(|v| math::abs(**v) > ZERO_TOL).count()
}

/// Fits one point per λ (strictly descending, positive) on a bias-augmented design.
///
/// L2 points use the closed form with an unpenalized bias; L1 points use
/// [`lasso_cd`] warm-started from the previous point.
pub fn regularization_path(
    x: &Matrix,
    y: &[f64],
    kind: PenaltyKind,
    lambdas: &[f64],
    opts: &PathOptions,
) -> Result<Vec<PathPoint>> {
    check_design(x, y)?;
    if lambdas.is_empty() {
        return Err(Error::param("empty lambda grid"));
    }
    if lambdas.iter().any(|l| !(*l > 0.0)) || lambdas.windows(2).any(|w| !(w[1] < w[0])) {
        return Err(Error::param("lambdas must be positive and strictly descending"));
    }
    let design = if opts.standardize {
        standardized_design(x)?
    } else {
        x.clone()
    };
    let mut out = Vec::with_capacity(lambdas.len());
    let mut warm: Option<Vec<f64>> = None;
    for &lambda in lambdas {
        let theta = match kind {
            PenaltyKind::L1 => {
                let fit = lasso_cd(&design, y, lambda, &opts.lasso, warm.as_deref())?;
                fit.params.theta
            }
            PenaltyKind::L2 => ridge_unpenalized_bias(&design, y, lambda)?,
            PenaltyKind::None => return Err(Error::param("path needs an l1 or l2 penalty")),
        };
        let fit = design.matvec(&theta)?;
        let mse = fit.iter().zip(y).map(|(a, b)| (a - b) * (a - b)).sum::<f64>() / y.len() as f64;
        warm = Some(theta.to_vec());
        out.push(PathPoint {
            lambda,
            nonzero_count: nonzero(&theta),
            theta,
            train_mse: mse,
        });
    }
    Ok(out)
}

/// Ridge `min Σ(θᵀx_m - y_m)² + λ Σ_{n≥1} θ_n²` with the bias left free.
pub fn ridge_unpenalized_bias(x: &Matrix, y: &[f64], lambda: f64) -> Result<Vector> {
    check_design(x, y)?;
    let mut a = x.gram();
    for i in 1..a.rows() {
        a[(i, i)] += lambda;
    }
    let rhs = x.tr_matvec(y)?;
    crate::linalg::cholesky_solve(&a, &rhs).or_else(|_| {
        glm::fit_ridge_closed(x, y, lambda).map(|p| p.theta)
    })
}
