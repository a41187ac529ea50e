//! Gradient descent with learning-rate schedules and batching, and
//! coordinate descent (with partial derivatives or derivative-free).

use alloc::boxed::Box;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::linalg::{norm_inf, Vector};
use crate::math;
use crate::rng::Rng;

pub const DEFAULT_LEARNING_RATE: f64 = 0.1;
pub const DEFAULT_DELTA: f64 = 1e-8;
pub const DEFAULT_MAX_ITERS: usize = 10_000;
/// A loss above `DIVERGENCE_FACTOR·|L(θ0)|` counts as divergence.
pub const DIVERGENCE_FACTOR: f64 = 1e12;

#[derive(Clone, Copy, Debug, PartialEq, Default)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(tag = "kind", rename_all = "lowercase"))]
pub enum Schedule {
    #[default]
    Constant,
    /// `η0·γ^⌊t/every⌋`
    Step { gamma: f64, every: usize },
    /// `η0·γ^t`
    Exponential { gamma: f64 },
    /// `η0·(1 + cos(πt/T))/2`, held at 0 once `t ≥ T`.
    Cosine { period: usize },
}

impl Schedule {
    pub fn validate(&self) -> Result<()> {
        match *self {
            Schedule::Step { gamma, every } => {
                if !(gamma > 0.0 && gamma <= 1.0) || every == 0 {
                    return Err(Error::param("step schedule needs 0 < gamma <= 1 and every >= 1"));
                }
            }
            Schedule::Exponential { gamma } => {
                if !(gamma > 0.0 && gamma <= 1.0) {
                    return Err(Error::param("exponential schedule needs 0 < gamma <= 1"));
                }
            }
            Schedule::Cosine { period } => {
                if period == 0 {
                    return Err(Error::param("cosine schedule needs period >= 1"));
                }
            }
            Schedule::Constant => {}
        }
        Ok(())
    }
}

/// Learning rate at iteration `t` (0-based).
pub fn schedule_eval(schedule: &Schedule, eta0: f64, t: usize) -> f64 {
    match *schedule {
        Schedule::Constant => eta0,
        Schedule::Step { gamma, every } => eta0 * math::pow(gamma, (t / every) as f64),
        Schedule::Exponential { gamma } => eta0 * math::pow(gamma, t as f64),
        Schedule::Cosine { period } => {
            if t >= period {
                0.0
            } else {
                let c = math::cos(core::f64::consts::PI * t as f64 / period as f64);
                eta0 * (1.0 + c) / 2.0
            }
        }
    }
}

/// Which rows feed each gradient evaluation.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(tag = "kind", rename_all = "lowercase"))]
pub enum GradientStrategy {
    #[default]
    Batch,
    Stochastic,
    Minibatch { size: usize },
}

#[derive(Clone, Debug, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(default, deny_unknown_fields))]
pub struct GdConfig {
    pub learning_rate: f64,
    pub schedule: Schedule,
    pub strategy: GradientStrategy,
    /// Stop once `0 ≤ L(θ(t)) - L(θ(t+1)) < delta`; 0 disables the rule.
    pub delta: f64,
    pub max_iters: usize,
    pub seed: u64,
}

impl Default for GdConfig {
    fn default() -> Self {
        Self {
            learning_rate: DEFAULT_LEARNING_RATE,
            schedule: Schedule::Constant,
            strategy: GradientStrategy::Batch,
            delta: DEFAULT_DELTA,
            max_iters: DEFAULT_MAX_ITERS,
            seed: 0,
        }
    }
}

impl GdConfig {
    pub fn validate(&self) -> Result<()> {
        if !(self.learning_rate >= 0.0) || !self.learning_rate.is_finite() {
            return Err(Error::param("learning rate must be finite and >= 0"));
        }
        if !(self.delta >= 0.0) {
            return Err(Error::param("delta must be >= 0"));
        }
        if self.max_iters == 0 {
            return Err(Error::param("max_iters must be >= 1"));
        }
        if let GradientStrategy::Minibatch { size: 0 } = self.strategy {
            return Err(Error::param("minibatch size must be >= 1"));
        }
        self.schedule.validate()
    }
}

/// One row of the optimization trace.
#[derive(Clone, Copy, Debug, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct TraceStep {
    /// Number of updates applied so far.
    pub t: usize,
    /// Full-data loss at the current iterate.
    pub loss: f64,
    /// Learning rate of the update that produced this iterate (0 for `t = 0`).
    pub eta: f64,
    /// `‖g‖∞` of the gradient used by that update (0 for `t = 0`).
    pub grad_inf_norm: f64,
}

#[derive(Clone, Debug, Default, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct TraceRecord {
    pub steps: Vec<TraceStep>,
}

impl TraceRecord {
    pub fn last_loss(&self) -> Option<f64> {
        self.steps.last().map(|s| s.loss)
    }

    pub fn iterations(&self) -> usize {
        self.steps.last().map_or(0, |s| s.t)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "snake_case"))]
pub enum StopReason {
    LossDecrease,
    MaxIters,
}

#[derive(Clone, Debug, PartialEq)]
pub struct GdOutcome {
    pub theta: Vector,
    pub trace: TraceRecord,
    pub stop: StopReason,
}

fn diverged(iteration: usize, trace: &TraceRecord) -> Error {
    Error::Diverged {
        iteration,
        trace: Box::new(trace.clone()),
    }
}

/// Plain gradient descent `θ(t+1) = θ(t) - η_t·g(θ(t))`.
///
/// `grad_fn` is called once per iteration and may return a stochastic
/// estimate; `loss_fn` is always the full-data loss. The run stops when the
/// loss decreases by less than `delta` (an increase never stops it) or after
/// `max_iters` updates, returning the last iterate.
pub fn gd_minimize<L, G>(mut loss_fn: L, mut grad_fn: G, theta0: &[f64], cfg: &GdConfig) -> Result<GdOutcome>
where
    L: FnMut(&[f64]) -> Result<f64>,
    G: FnMut(&[f64]) -> Result<Vector>,
{
    cfg.validate()?;
    let mut theta = theta0.to_vec();
    let mut trace = TraceRecord::default();
    let l0 = loss_fn(&theta)?;
    trace.steps.push(TraceStep {
        t: 0,
        loss: l0,
        eta: 0.0,
        grad_inf_norm: 0.0,
    });
    if !l0.is_finite() {
        return Err(diverged(0, &trace));
    }
    let limit = DIVERGENCE_FACTOR * math::abs(l0).max(f64::MIN_POSITIVE);
    let mut prev = l0;
    for t in 0..cfg.max_iters {
        let g = grad_fn(&theta)?;
        if g.len() != theta.len() {
            return Err(Error::shape("gradient", theta.len(), g.len()));
        }
        let gnorm = norm_inf(&g);
        if !g.iter().all(|v| v.is_finite()) {
            return Err(diverged(t, &trace));
        }
        let eta = schedule_eval(&cfg.schedule, cfg.learning_rate, t);
        for (th, gi) in theta.iter_mut().zip(g.iter()) {
            *th -= eta * gi;
        }
        let cur = loss_fn(&theta)?;
        trace.steps.push(TraceStep {
            t: t + 1,
            loss: cur,
            eta,
            grad_inf_norm: gnorm,
        });
        if !cur.is_finite() || cur > limit {
            return Err(diverged(t + 1, &trace));
        }
        let decrease = prev - cur;
        prev = cur;
        if decrease >= 0.0 && decrease < cfg.delta {
            return Ok(GdOutcome {
                theta: Vector::from_vec(theta),
                trace,
                stop: StopReason::LossDecrease,
            });
        }
    }
    Ok(GdOutcome {
        theta: Vector::from_vec(theta),
        trace,
        stop: StopReason::MaxIters,
    })
}

/// Yields the row indices of each gradient evaluation.
///
/// Stochastic and mini-batch sampling walk a seeded permutation that is
/// redrawn every epoch; each block is returned in ascending row order so that
/// a single block of all rows reproduces the batch gradient bit for bit.
#[derive(Clone, Debug)]
pub struct BatchSampler {
    m: usize,
    block: usize,
    shuffle: bool,
    order: Vec<usize>,
    pos: usize,
    rng: Rng,
}

impl BatchSampler {
    pub fn new(strategy: GradientStrategy, m: usize, seed: u64) -> Result<Self> {
        if m == 0 {
            return Err(Error::EmptyInput);
        }
        let (block, shuffle) = match strategy {
            GradientStrategy::Batch => (m, false),
            GradientStrategy::Stochastic => (1, true),
            GradientStrategy::Minibatch { size } => {
                if size == 0 || size > m {
                    return Err(Error::param("minibatch size must satisfy 1 <= B <= M"));
                }
                (size, true)
            }
        };
        Ok(Self {
            m,
            block,
            shuffle,
            order: (0..m).collect(),
            pos: m,
            rng: Rng::new(seed),
        })
    }

    pub fn next_batch(&mut self) -> Vec<usize> {
        if self.pos >= self.m {
            self.order = (0..self.m).collect();
            if self.shuffle {
                self.rng.shuffle(&mut self.order);
            }
            self.pos = 0;
        }
        let end = (self.pos + self.block).min(self.m);
        let mut b = self.order[self.pos..end].to_vec();
        self.pos = end;
        b.sort_unstable();
        b
    }
}

/// A gradient source for [`gd_minimize`] built from a per-subset gradient.
pub struct StrategyGradient<F> {
    sampler: BatchSampler,
    subset_grad: F,
}

impl<F> StrategyGradient<F>
where
    F: FnMut(&[f64], &[usize]) -> Result<Vector>,
{
    pub fn next(&mut self, theta: &[f64]) -> Result<Vector> {
        let idx = self.sampler.next_batch();
        (self.subset_grad)(theta, &idx)
    }
}

/// Couples a sampler for `strategy` with `subset_grad(θ, rows)`, the mean
/// gradient over the given rows.
pub fn make_gradient_strategy<F>(
    strategy: GradientStrategy,
    m: usize,
    seed: u64,
    subset_grad: F,
) -> Result<StrategyGradient<F>>
where
    F: FnMut(&[f64], &[usize]) -> Result<Vector>,
{
    Ok(StrategyGradient {
        sampler: BatchSampler::new(strategy, m, seed)?,
        subset_grad,
    })
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct CdConfig {
    pub eta: f64,
    pub max_sweeps: usize,
    /// Stop when no coordinate moves by more than `tol` during a sweep.
    pub tol: f64,
}

impl Default for CdConfig {
    fn default() -> Self {
        Self {
            eta: DEFAULT_LEARNING_RATE,
            max_sweeps: DEFAULT_MAX_ITERS,
            tol: 0.0,
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct CdOutcome {
    pub theta: Vector,
    pub sweeps: usize,
    pub converged: bool,
}

/// `∂L/∂θ_k` at `θ` for coordinate `k`.
pub type PartialDerivative<'a> = &'a mut dyn FnMut(&[f64], usize) -> Result<f64>;

/// Cyclic coordinate descent over `θ_1..θ_n`.
///
/// With `partial`, each coordinate takes `θ_k ← θ_k - η·∂L/∂θ_k`. Without it
/// the update is derivative-free: step to `θ_k ± η` when that neighbor has a
/// strictly lower loss than both the current point and the other neighbor;
/// otherwise the coordinate stays put.
pub fn coordinate_descent<L>(
    mut loss_fn: L,
    theta0: &[f64],
    cfg: &CdConfig,
    mut partial: Option<PartialDerivative<'_>>,
) -> Result<CdOutcome>
where
    L: FnMut(&[f64]) -> Result<f64>,
{
    if !(cfg.eta > 0.0) {
        return Err(Error::param("coordinate descent step must be positive"));
    }
    let mut theta = theta0.to_vec();
    let mut trace = TraceRecord::default();
    let mut cur = loss_fn(&theta)?;
    trace.steps.push(TraceStep {
        t: 0,
        loss: cur,
        eta: cfg.eta,
        grad_inf_norm: 0.0,
    });
    if !cur.is_finite() {
        return Err(diverged(0, &trace));
    }
    for sweep in 1..=cfg.max_sweeps {
        let mut moved: f64 = 0.0;
        for k in 0..theta.len() {
            let old = theta[k];
            match partial.as_mut() {
                Some(p) => {
                    let d = p(&theta, k)?;
                    theta[k] = old - cfg.eta * d;
                    cur = loss_fn(&theta)?;
                }
                None => {
                    theta[k] = old + cfg.eta;
                    let up = loss_fn(&theta)?;
                    theta[k] = old - cfg.eta;
                    let down = loss_fn(&theta)?;
                    if cur.min(down) > up {
                        theta[k] = old + cfg.eta;
                        cur = up;
                    } else if cur.min(up) > down {
                        theta[k] = old - cfg.eta;
                        cur = down;
                    } else {
                        theta[k] = old;
                    }
                }
            }
            moved = moved.max(math::abs(theta[k] - old));
        }
        trace.steps.push(TraceStep {
            t: sweep,
            loss: cur,
            eta: cfg.eta,
            grad_inf_norm: 0.0,
        });
        if !cur.is_finite() {
            return Err(diverged(sweep, &trace));
        }
        if moved <= cfg.tol {
            return Ok(CdOutcome {
                theta: Vector::from_vec(theta),
                sweeps: sweep,
                converged: true,
            });
        }
    }
    Ok(CdOutcome {
        theta: Vector::from_vec(theta),
        sweeps: cfg.max_sweeps,
        converged: false,
    })
}
