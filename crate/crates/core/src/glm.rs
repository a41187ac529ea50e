//! Linear, logistic and softmax regression: predictions, losses, gradients and
//! closed-form estimators.
//!
//! Parameters travel as flat slices. Linear and logistic models use `N+1`
//! values with the bias first. Softmax uses the `(N+1)×K` matrix `Θ` flattened
//! row by row, so `θ[n*K + k]` is the weight of feature `n` for class `k`.
//!
//! The mean loss for linear regression is `(1/2M) Σ (ŷ - y)²`; the factor ½
//! makes `(1/M) Σ (ŷ - y) x` its exact gradient, the same form shared by the
//! logistic and softmax losses.

use alloc::vec;
use alloc::vec::Vec;

use crate::dataset::Dataset;
use crate::error::{Error, Result};
use crate::linalg::{self, dot, Cholesky, Matrix, Vector};
use crate::math;

#[derive(Clone, Debug, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct LinearParams {
    pub theta: Vector,
}

#[derive(Clone, Debug, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct SoftmaxParams {
    /// `(N+1)×K`; column `k` holds `θ_k`.
    pub thetas: Matrix,
}

impl SoftmaxParams {
    pub fn new(thetas: Matrix) -> Result<Self> {
        if thetas.cols() < 2 {
            return Err(Error::param("softmax needs at least 2 classes"));
        }
        Ok(Self { thetas })
    }

    pub fn classes(&self) -> usize {
        self.thetas.cols()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "lowercase"))]
pub enum ModelKind {
    Linear,
    Logistic,
    Softmax { classes: usize },
}

impl ModelKind {
    /// Length of the flat parameter vector for `cols` design columns (bias included).
    pub fn param_len(&self, cols: usize) -> usize {
        match self {
            ModelKind::Softmax { classes } => cols * classes,
            _ => cols,
        }
    }

    pub fn outputs(&self) -> usize {
        match self {
            ModelKind::Softmax { classes } => *classes,
            _ => 1,
        }
    }
}

/// Labels in the form each model consumes.
#[derive(Clone, Copy, Debug)]
pub enum Targets<'a> {
    /// Real targets (linear) or 0/1 labels (logistic).
    Real(&'a [f64]),
    /// One-hot rows (softmax).
    OneHot(&'a Matrix),
}

impl Targets<'_> {
    fn rows(&self) -> usize {
        match self {
            Targets::Real(y) => y.len(),
            Targets::OneHot(m) => m.rows(),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Reduction {
    Mean,
    Sum,
}

fn check_dims(kind: ModelKind, theta: &[f64], x: &Matrix, t: &Targets) -> Result<()> {
    let expect = kind.param_len(x.cols());
    if theta.len() != expect {
        return Err(Error::shape("glm parameters", expect, theta.len()));
    }
    if t.rows() != x.rows() {
        return Err(Error::shape("glm targets", x.rows(), t.rows()));
    }
    match (kind, t) {
        (ModelKind::Softmax { classes }, Targets::OneHot(m)) if m.cols() == classes => Ok(()),
        (ModelKind::Softmax { classes }, Targets::OneHot(m)) => {
            Err(Error::shape("glm one-hot targets", classes, m.cols()))
        }
        (ModelKind::Softmax { .. }, Targets::Real(_)) => Err(Error::Configuration(
            "softmax regression needs one-hot targets".into(),
        )),
        (_, Targets::OneHot(_)) => Err(Error::Configuration(
            "linear and logistic regression need a real target vector".into(),
        )),
        _ => Ok(()),
    }
}

/// Softmax logits `z_k = Σ_n θ[n*K + k] x_n` for one row.
fn logits(theta: &[f64], row: &[f64], k: usize) -> Vec<f64> {
    let mut z = vec![0.0; k];
    for (n, xn) in row.iter().enumerate() {
        let w = &theta[n * k..(n + 1) * k];
        for (zk, wk) in z.iter_mut().zip(w) {
            *zk += wk * xn;
        }
    }
    z
}

fn softmax_in_place(z: &mut [f64]) {
    let mx = z.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let mut s = 0.0;
    for v in z.iter_mut() {
        *v = math::exp(*v - mx);
        s += *v;
    }
    for v in z.iter_mut() {
        *v /= s;
    }
}

fn log_sum_exp(z: &[f64]) -> f64 {
    let mx = z.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    mx + math::ln(z.iter().map(|v| math::exp(v - mx)).sum::<f64>())
}

/// Normalized exponentials with max-subtraction.
pub fn softmax(z: &[f64]) -> Vector {
    let mut out = z.to_vec();
    softmax_in_place(&mut out);
    Vector::from_vec(out)
}

/// Index of the largest entry; ties go to the lowest index.
pub fn argmax(v: &[f64]) -> usize {
    let mut best = 0;
    for (i, x) in v.iter().enumerate() {
        if *x > v[best] {
            best = i;
        }
    }
    best
}

pub fn sigmoid(z: f64) -> f64 {
    math::sigmoid(z)
}

pub fn predict_linear(p: &LinearParams, x_aug: &[f64]) -> Result<f64> {
    p.theta.dot(x_aug)
}

pub fn predict_logistic(p: &LinearParams, x_aug: &[f64]) -> Result<f64> {
    Ok(math::sigmoid(p.theta.dot(x_aug)?))
}

/// Class decision of a logistic model: 1 iff the probability exceeds `threshold`.
pub fn classify_logistic(p: &LinearParams, x_aug: &[f64], threshold: f64) -> Result<usize> {
    Ok(usize::from(predict_logistic(p, x_aug)? > threshold))
}

pub fn predict_softmax(p: &SoftmaxParams, x_aug: &[f64]) -> Result<Vector> {
    if x_aug.len() != p.thetas.rows() {
        return Err(Error::shape("predict_softmax", p.thetas.rows(), x_aug.len()));
    }
    let mut z = logits(p.thetas.as_slice(), x_aug, p.classes());
    softmax_in_place(&mut z);
    Ok(Vector::from_vec(z))
}

/// Model outputs for every row: `M×1` for linear/logistic, `M×K` probabilities for softmax.
pub fn predict_rows(kind: ModelKind, theta: &[f64], x: &Matrix) -> Result<Matrix> {
    let expect = kind.param_len(x.cols());
    if theta.len() != expect {
        return Err(Error::shape("glm parameters", expect, theta.len()));
    }
    let k = kind.outputs();
    let mut out = Vec::with_capacity(x.rows() * k);
    for i in 0..x.rows() {
        let row = x.row(i);
        match kind {
            ModelKind::Linear => out.push(dot(theta, row)),
            ModelKind::Logistic => out.push(math::sigmoid(dot(theta, row))),
            ModelKind::Softmax { classes } => {
                let mut z = logits(theta, row, classes);
                softmax_in_place(&mut z);
                out.extend(z);
            }
        }
    }
    Ok(Matrix::from_raw(x.rows(), k, out))
}

/// Per-row loss contribution (before averaging).
fn row_loss(kind: ModelKind, theta: &[f64], row: &[f64], t: &Targets, i: usize) -> f64 {
    match (kind, t) {
        (ModelKind::Linear, Targets::Real(y)) => {
            let e = dot(theta, row) - y[i];
            0.5 * e * e
        }
        (ModelKind::Logistic, Targets::Real(y)) => {
            let z = dot(theta, row);
            math::softplus(z) - y[i] * z
        }
        (ModelKind::Softmax { classes }, Targets::OneHot(yk)) => {
            let z = logits(theta, row, classes);
            log_sum_exp(&z) - dot(&z, yk.row(i))
        }
        _ => unreachable!("checked by check_dims"),
    }
}

/// Adds `scale·(ŷ - y)·xᵀ` for one row into `g`.
fn add_row_gradient(kind: ModelKind, theta: &[f64], row: &[f64], t: &Targets, i: usize, g: &mut [f64]) {
    match (kind, t) {
        (ModelKind::Linear, Targets::Real(y)) => {
            let r = dot(theta, row) - y[i];
            for (gn, xn) in g.iter_mut().zip(row) {
                *gn += r * xn;
            }
        }
        (ModelKind::Logistic, Targets::Real(y)) => {
            let r = math::sigmoid(dot(theta, row)) - y[i];
            for (gn, xn) in g.iter_mut().zip(row) {
                *gn += r * xn;
            }
        }
        (ModelKind::Softmax { classes }, Targets::OneHot(yk)) => {
            let mut p = logits(theta, row, classes);
            softmax_in_place(&mut p);
            for (pk, tk) in p.iter_mut().zip(yk.row(i)) {
                *pk -= tk;
            }
            for (n, xn) in row.iter().enumerate() {
                for (gk, rk) in g[n * classes..(n + 1) * classes].iter_mut().zip(&p) {
                    *gk += rk * xn;
                }
            }
        }
        _ => unreachable!("checked by check_dims"),
    }
}

/// Loss averaged over the rows listed in `idx`.
pub fn loss_on(kind: ModelKind, theta: &[f64], x: &Matrix, t: Targets, idx: &[usize]) -> Result<f64> {
    check_dims(kind, theta, x, &t)?;
    if idx.is_empty() {
        return Err(Error::EmptyInput);
    }
    let s: f64 = idx.iter().map(|&i| row_loss(kind, theta, x.row(i), &t, i)).sum();
    Ok(s / idx.len() as f64)
}

/// Gradient averaged over the rows listed in `idx`, accumulated in that order.
pub fn gradient_on(
    kind: ModelKind,
    theta: &[f64],
    x: &Matrix,
    t: Targets,
    idx: &[usize],
) -> Result<Vector> {
    check_dims(kind, theta, x, &t)?;
    if idx.is_empty() {
        return Err(Error::EmptyInput);
    }
    let mut g = vec![0.0; theta.len()];
    for &i in idx {
        add_row_gradient(kind, theta, x.row(i), &t, i, &mut g);
    }
    let m = idx.len() as f64;
    for v in g.iter_mut() {
        *v /= m;
    }
    Ok(Vector::from_vec(g))
}

fn all_rows(x: &Matrix) -> Vec<usize> {
    (0..x.rows()).collect()
}

/// Loss over the whole design; `Sum` is exactly `M` times `Mean`.
pub fn loss(kind: ModelKind, theta: &[f64], x: &Matrix, t: Targets, red: Reduction) -> Result<f64> {
    let mean = loss_on(kind, theta, x, t, &all_rows(x))?;
    Ok(match red {
        Reduction::Mean => mean,
        Reduction::Sum => mean * x.rows() as f64,
    })
}

/// `(1/M or 1)·Σ_m (ŷ_m - y_m) x_m`, column-wise for softmax.
pub fn gradient(
    kind: ModelKind,
    theta: &[f64],
    x: &Matrix,
    t: Targets,
    red: Reduction,
) -> Result<Vector> {
    let mut g = gradient_on(kind, theta, x, t, &all_rows(x))?;
    if red == Reduction::Sum {
        let m = x.rows() as f64;
        for v in g.iter_mut() {
            *v *= m;
        }
    }
    Ok(g)
}

/// Least squares through the normal equations `XᵀXθ = Xᵀy`.
pub fn fit_ols(x: &Matrix, y: &[f64]) -> Result<LinearParams> {
    if x.rows() < x.cols() {
        return Err(Error::MulticollinearOrUnderdetermined);
    }
    let theta = linalg::solve_normal_equations(x, y, 0.0)?;
    Ok(LinearParams { theta })
}

/// Ridge solution of `(XᵀX + λI)θ = Xᵀy` (sum convention, every coordinate penalized).
pub fn fit_ridge_closed(x: &Matrix, y: &[f64], lambda: f64) -> Result<LinearParams> {
    if !(lambda > 0.0) || !lambda.is_finite() {
        return Err(Error::param("ridge lambda must be positive and finite"));
    }
    let theta = linalg::solve_normal_equations(x, y, lambda)?;
    Ok(LinearParams { theta })
}

/// Class-conditional Gaussians with a shared covariance.
#[derive(Clone, Debug, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct GaussianClassModel {
    pub mus: Vec<Vector>,
    pub sigma: Matrix,
    pub priors: Vector,
}

/// Discriminative parameters implied by a [`GaussianClassModel`].
#[derive(Clone, Debug, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub enum GenerativeParams {
    Binary(LinearParams),
    Multiclass(SoftmaxParams),
}

impl GaussianClassModel {
    /// Plug-in parameters. Two classes give logistic `(b, w)` with
    /// `w = Σ⁻¹(μ1 - μ0)`; more classes give softmax columns `(b_k, Σ⁻¹μ_k)`.
    pub fn params(&self) -> Result<GenerativeParams> {
        let k = self.mus.len();
        if k < 2 || self.priors.len() != k {
            return Err(Error::param("need at least 2 classes with matching priors"));
        }
        let n = self.sigma.rows();
        let chol = Cholesky::factor(&self.sigma)?;
        let sol: Vec<Vector> = self
            .mus
            .iter()
            .map(|mu| chol.solve(mu))
            .collect::<Result<_>>()?;
        if k == 2 {
            let mut theta = vec![0.0; n + 1];
            for j in 0..n {
                theta[j + 1] = sol[1][j] - sol[0][j];
            }
            theta[0] = 0.5 * (dot(&self.mus[0], &sol[0]) - dot(&self.mus[1], &sol[1]))
                + math::ln(self.priors[1] / self.priors[0]);
            Ok(GenerativeParams::Binary(LinearParams {
                theta: Vector::from_vec(theta),
            }))
        } else {
            let mut th = Matrix::zeros(n + 1, k);
            for c in 0..k {
                th[(0, c)] = math::ln(self.priors[c]) - 0.5 * dot(&self.mus[c], &sol[c]);
                for j in 0..n {
                    th[(j + 1, c)] = sol[c][j];
                }
            }
            Ok(GenerativeParams::Multiclass(SoftmaxParams { thetas: th }))
        }
    }

    /// `ln p(x | k) + ln π_k` up to a constant shared by all classes.
    pub fn log_joint(&self, x: &[f64], k: usize) -> Result<f64> {
        let chol = Cholesky::factor(&self.sigma)?;
        let d: Vec<f64> = x.iter().zip(self.mus[k].iter()).map(|(a, b)| a - b).collect();
        let s = chol.solve(&d)?;
        Ok(-0.5 * dot(&d, &s) + math::ln(self.priors[k]))
    }
}

/// Estimates priors, class means and the pooled covariance (normalized by `M`),
/// then returns the implied discriminative parameters.
pub fn fit_gaussian_generative(
    d: &Dataset,
    k: usize,
) -> Result<(GaussianClassModel, GenerativeParams)> {
    let y = d
        .y_class()
        .ok_or_else(|| Error::Configuration("generative fit needs class labels".into()))?;
    let off = usize::from(d.is_bias_augmented());
    let x = d.x();
    let n = x.cols() - off;
    let m = x.rows();
    let mut counts = vec![0usize; k];
    let mut sums = vec![vec![0.0; n]; k];
    for (i, &c) in y.iter().enumerate() {
        if c >= k {
            return Err(Error::ClassRange { id: c, classes: k });
        }
        counts[c] += 1;
        for j in 0..n {
            sums[c][j] += x[(i, j + off)];
        }
    }
    if counts.iter().any(|&c| c < 2) {
        return Err(Error::param("every class needs at least 2 samples"));
    }
    let mus: Vec<Vector> = sums
        .into_iter()
        .zip(&counts)
        .map(|(s, &c)| Vector::from_vec(s.into_iter().map(|v| v / c as f64).collect()))
        .collect();
    let mut sigma = Matrix::zeros(n, n);
    for (i, &c) in y.iter().enumerate() {
        let dev: Vec<f64> = (0..n).map(|j| x[(i, j + off)] - mus[c][j]).collect();
        for a in 0..n {
            for b in a..n {
                sigma[(a, b)] += dev[a] * dev[b];
            }
        }
    }
    for a in 0..n {
        for b in a..n {
            let v = sigma[(a, b)] / m as f64;
            sigma[(a, b)] = v;
            sigma[(b, a)] = v;
        }
    }
    let priors = Vector::from_vec(counts.iter().map(|&c| c as f64 / m as f64).collect());
    let model = GaussianClassModel { mus, sigma, priors };
    let params = model.params()?;
    Ok((model, params))
}
