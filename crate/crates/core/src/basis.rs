//! Fixed feature maps `φ(x)` and the least-squares fit on the expanded design.
//!
//! Every expansion emits a leading column of ones followed by one column per
//! basis function (two per frequency for Fourier: sine then cosine).

use alloc::vec;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::glm::{self, LinearParams};
use crate::linalg::{self, Matrix, Vector};
use crate::math;
use crate::rng::Rng;

/// Largest number of monomials a polynomial basis may produce.
pub const MAX_MONOMIALS: u128 = 10_000;
/// Lloyd iterations used by k-means initialization.
pub const KMEANS_ITERS: usize = 50;

/// Exponents of one monomial `x_1^a_1 ⋯ x_N^a_N`.
#[derive(Clone, Debug, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct MultiIndex(pub Vec<u32>);

impl MultiIndex {
    pub fn degree(&self) -> u32 {
        self.0.iter().sum()
    }

    pub fn eval(&self, x: &[f64]) -> f64 {
        self.0
            .iter()
            .zip(x)
            .map(|(&e, &v)| math::powi(v, e))
            .product()
    }
}

fn binomial(n: u128, k: u128) -> u128 {
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        acc = acc.saturating_mul(n - i) / (i + 1);
        if acc > u64::MAX as u128 {
            return acc;
        }
    }
    acc
}

/// Number of monomials in `n` variables of total degree at most `k`.
pub fn monomial_count(n: usize, k: u32) -> u128 {
    binomial(n as u128 + k as u128, k as u128)
}

fn push_degree(n: usize, d: u32, prefix: &mut Vec<u32>, out: &mut Vec<MultiIndex>) {
    if prefix.len() + 1 == n {
        prefix.push(d);
        out.push(MultiIndex(prefix.clone()));
        prefix.pop();
        return;
    }
    for e in (0..=d).rev() {
        prefix.push(e);
        push_degree(n, d - e, prefix, out);
        prefix.pop();
    }
}

/// All multi-indices with total degree `≤ k` in graded order: degree by
/// degree, and within a degree by decreasing exponent of the first variable
/// (for `n = 2, k = 2`: `00, 10, 01, 20, 11, 02`).
pub fn enumerate_multi_indices(n: usize, k: u32) -> Result<Vec<MultiIndex>> {
    if n == 0 {
        return Err(Error::param("multi-index needs at least one variable"));
    }
    let count = monomial_count(n, k);
    if count > MAX_MONOMIALS {
        return Err(Error::CombinatorialBlowup { count });
    }
    let mut out = Vec::with_capacity(count as usize);
    let mut prefix = Vec::with_capacity(n);
    for d in 0..=k {
        push_degree(n, d, &mut prefix, &mut out);
    }
    Ok(out)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "lowercase"))]
pub enum BasisKind {
    Polynomial,
    Rbf,
    Sigmoid,
    Fourier,
}

/// A fully parameterized feature map.
#[derive(Clone, Debug, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(tag = "kind", rename_all = "lowercase"))]
pub enum BasisSpec {
    /// All monomials of total degree `1..=degree` in `dims` variables.
    Polynomial { dims: usize, degree: u32 },
    /// `exp(-‖x - μ_k‖² / 2σ²)` for each row `μ_k` of `centers`.
    Rbf { centers: Matrix, width: f64 },
    /// `σ(w_kᵀx + b_k)` for each row `w_k` of `weights`.
    Sigmoid { weights: Matrix, offsets: Vector },
    /// `sin(w_kᵀx)`, `cos(w_kᵀx)` for each row `w_k` of `frequencies`.
    Fourier { frequencies: Matrix },
}

impl BasisSpec {
    pub fn polynomial(dims: usize, degree: u32) -> Result<Self> {
        enumerate_multi_indices(dims, degree)?;
        Ok(BasisSpec::Polynomial { dims, degree })
    }

    pub fn rbf(centers: Matrix, width: f64) -> Result<Self> {
        if !(width > 0.0) || !width.is_finite() {
            return Err(Error::param("rbf width must be positive"));
        }
        Ok(BasisSpec::Rbf { centers, width })
    }

    pub fn sigmoid(weights: Matrix, offsets: Vector) -> Result<Self> {
        if weights.rows() != offsets.len() {
            return Err(Error::shape("sigmoid basis", weights.rows(), offsets.len()));
        }
        Ok(BasisSpec::Sigmoid { weights, offsets })
    }

    pub fn kind(&self) -> BasisKind {
        match self {
            BasisSpec::Polynomial { .. } => BasisKind::Polynomial,
            BasisSpec::Rbf { .. } => BasisKind::Rbf,
            BasisSpec::Sigmoid { .. } => BasisKind::Sigmoid,
            BasisSpec::Fourier { .. } => BasisKind::Fourier,
        }
    }

    /// Number of raw input features the map expects.
    pub fn dims(&self) -> usize {
        match self {
            BasisSpec::Polynomial { dims, .. } => *dims,
            BasisSpec::Rbf { centers, .. } => centers.cols(),
            BasisSpec::Sigmoid { weights, .. } => weights.cols(),
            BasisSpec::Fourier { frequencies } => frequencies.cols(),
        }
    }

    /// Columns of the expanded design, the constant column included.
    pub fn columns(&self) -> usize {
        match self {
            BasisSpec::Polynomial { dims, degree } => monomial_count(*dims, *degree) as usize,
            BasisSpec::Rbf { centers, .. } => centers.rows() + 1,
            BasisSpec::Sigmoid { weights, .. } => weights.rows() + 1,
            BasisSpec::Fourier { frequencies } => 2 * frequencies.rows() + 1,
        }
    }

    fn validate(&self) -> Result<()> {
        match self {
            BasisSpec::Rbf { width, .. } if !(*width > 0.0) => {
                Err(Error::param("rbf width must be positive"))
            }
            BasisSpec::Sigmoid { weights, offsets } if weights.rows() != offsets.len() => {
                Err(Error::shape("sigmoid basis", weights.rows(), offsets.len()))
            }
            BasisSpec::Polynomial { dims, degree } => enumerate_multi_indices(*dims, *degree).map(|_| ()),
            _ => Ok(()),
        }
    }
}

/// The design matrix `Φ` for raw inputs `x` (no bias column in `x`).
pub fn expand(spec: &BasisSpec, x: &Matrix) -> Result<Matrix> {
    if x.cols() != spec.dims() {
        return Err(Error::shape("expand", spec.dims(), x.cols()));
    }
    spec.validate()?;
    let cols = spec.columns();
    let mut out = Vec::with_capacity(x.rows() * cols);
    let indices = match spec {
        BasisSpec::Polynomial { dims, degree } => enumerate_multi_indices(*dims, *degree)?,
        _ => Vec::new(),
    };
    for i in 0..x.rows() {
        let r = x.row(i);
        match spec {
            // The all-zero index is first and evaluates to 1.
            BasisSpec::Polynomial { .. } => out.extend(indices.iter().map(|a| a.eval(r))),
            BasisSpec::Rbf { centers, width } => {
                out.push(1.0);
                let s2 = 2.0 * width * width;
                for k in 0..centers.rows() {
                    let d2: f64 = r.iter().zip(centers.row(k)).map(|(a, b)| (a - b) * (a - b)).sum();
                    out.push(math::exp(-d2 / s2));
                }
            }
            BasisSpec::Sigmoid { weights, offsets } => {
                out.push(1.0);
                for k in 0..weights.rows() {
                    out.push(math::sigmoid(linalg::dot(weights.row(k), r) + offsets[k]));
                }
            }
            BasisSpec::Fourier { frequencies } => {
                out.push(1.0);
                for k in 0..frequencies.rows() {
                    let z = linalg::dot(frequencies.row(k), r);
                    out.push(math::sin(z));
                    out.push(math::cos(z));
                }
            }
        }
    }
    Ok(Matrix::from_raw(x.rows(), cols, out))
}

/// Frequencies `kπ/L`, `k = 1..=count`, for a 1-D domain `[-L, L]`.
pub fn fourier_ladder(half_period: f64, count: usize) -> Result<Matrix> {
    if !(half_period > 0.0) {
        return Err(Error::param("fourier half-period must be positive"));
    }
    Ok(Matrix::from_raw(
        count,
        1,
        (1..=count)
            .map(|k| k as f64 * core::f64::consts::PI / half_period)
            .collect(),
    ))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "lowercase"))]
pub enum InitStrategy {
    Grid,
    Random,
    Kmeans,
}

fn bounding_box(x: &Matrix) -> (Vec<f64>, Vec<f64>) {
    let n = x.cols();
    let mut lo = vec![f64::INFINITY; n];
    let mut hi = vec![f64::NEG_INFINITY; n];
    for i in 0..x.rows() {
        for (j, v) in x.row(i).iter().enumerate() {
            lo[j] = lo[j].min(*v);
            hi[j] = hi[j].max(*v);
        }
    }
    (lo, hi)
}

fn grid_centers(lo: &[f64], hi: &[f64], k: usize) -> Matrix {
    let n = lo.len();
    // Points per axis so that the product grid holds at least k points;
    // centers are its first k nodes in row-major order.
    let mut per = 1usize;
    while per.checked_pow(n as u32).is_some_and(|p| p < k) {
        per += 1;
    }
    let axis = |j: usize, t: usize| {
        if per == 1 {
            0.5 * (lo[j] + hi[j])
        } else {
            lo[j] + (hi[j] - lo[j]) * t as f64 / (per - 1) as f64
        }
    };
    let mut data = Vec::with_capacity(k * n);
    for c in 0..k {
        let mut rem = c;
        let mut coords = vec![0usize; n];
        for j in (0..n).rev() {
            coords[j] = rem % per;
            rem /= per;
        }
        data.extend(coords.iter().enumerate().map(|(j, &t)| axis(j, t)));
    }
    Matrix::from_raw(k, n, data)
}

fn random_centers(lo: &[f64], hi: &[f64], k: usize, rng: &mut Rng) -> Matrix {
    let n = lo.len();
    let mut data = Vec::with_capacity(k * n);
    for _ in 0..k {
        for j in 0..n {
            data.push(rng.uniform(lo[j], hi[j]));
        }
    }
    Matrix::from_raw(k, n, data)
}

fn sq_dist(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(u, v)| (u - v) * (u - v)).sum()
}

/// Lloyd's algorithm from a Forgy start (k distinct rows chosen by a seeded shuffle).
pub fn kmeans(x: &Matrix, k: usize, iters: usize, rng: &mut Rng) -> Result<Matrix> {
    if k == 0 || k > x.rows() {
        return Err(Error::param("k-means needs 1 <= K <= M"));
    }
    let mut order: Vec<usize> = (0..x.rows()).collect();
    rng.shuffle(&mut order);
    let mut centers = x.select_rows(&order[..k]);
    let n = x.cols();
    let mut assign = vec![0usize; x.rows()];
    for _ in 0..iters {
        for (i, a) in assign.iter_mut().enumerate() {
            let r = x.row(i);
            let mut best = 0;
            let mut bd = f64::INFINITY;
            for c in 0..k {
                let d = sq_dist(r, centers.row(c));
                if d < bd {
                    bd = d;
                    best = c;
                }
            }
            *a = best;
        }
        let mut sums = vec![0.0; k * n];
        let mut counts = vec![0usize; k];
        for (i, &c) in assign.iter().enumerate() {
            counts[c] += 1;
            for (s, v) in sums[c * n..(c + 1) * n].iter_mut().zip(x.row(i)) {
                *s += v;
            }
        }
        let mut next = centers.clone();
        for c in 0..k {
            // An empty cluster keeps its previous center.
            if counts[c] > 0 {
                for j in 0..n {
                    next[(c, j)] = sums[c * n + j] / counts[c] as f64;
                }
            }
        }
        if next == centers {
            break;
        }
        centers = next;
    }
    Ok(centers)
}

/// Mean distance from each center to its nearest other center.
fn mean_nearest_distance(c: &Matrix) -> f64 {
    if c.rows() < 2 {
        return 0.0;
    }
    let mut total = 0.0;
    for a in 0..c.rows() {
        let mut best = f64::INFINITY;
        for b in 0..c.rows() {
            if a != b {
                best = best.min(sq_dist(c.row(a), c.row(b)));
            }
        }
        total += math::sqrt(best);
    }
    total / c.rows() as f64
}

/// Default width: the grid spacing for a 1-D grid, otherwise the mean
/// nearest-center distance; falls back to the data range, then 1.
fn default_width(centers: &Matrix, lo: &[f64], hi: &[f64], grid_1d: bool) -> f64 {
    let k = centers.rows();
    let w = if grid_1d && k > 1 {
        (hi[0] - lo[0]) / (k - 1) as f64
    } else {
        mean_nearest_distance(centers)
    };
    if w > 0.0 && w.is_finite() {
        return w;
    }
    let range = lo.iter().zip(hi).map(|(a, b)| b - a).fold(0.0, f64::max);
    if range > 0.0 {
        range
    } else {
        1.0
    }
}

/// Places `count` basis functions over the data.
///
/// Polynomial bases ignore the strategy and use `count` as the degree. RBF
/// centers come from the strategy with the default width rule. Sigmoid units
/// are centered the same way with slope `1/width`: each unit crosses 0.5 at its
/// center (in several dimensions along a seeded random direction). Fourier
/// frequencies follow the harmonic ladder `kπ/L` over the half-range `L` of each
/// axis for `grid`/`kmeans`, or are drawn as `N(0, (π/L)²)` for `random`.
pub fn init_basis_params(
    kind: BasisKind,
    x: &Matrix,
    count: usize,
    strategy: InitStrategy,
    rng: &mut Rng,
) -> Result<BasisSpec> {
    if x.rows() == 0 {
        return Err(Error::EmptyInput);
    }
    if kind == BasisKind::Polynomial {
        return BasisSpec::polynomial(x.cols(), count as u32);
    }
    if count == 0 {
        return Err(Error::param("basis count must be at least 1"));
    }
    let (lo, hi) = bounding_box(x);
    let n = x.cols();
    if kind == BasisKind::Fourier {
        let half: Vec<f64> = lo
            .iter()
            .zip(&hi)
            .map(|(a, b)| {
                let l = math::abs(*a).max(math::abs(*b));
                if l > 0.0 {
                    l
                } else {
                    1.0
                }
            })
            .collect();
        let mut f = Matrix::zeros(count, n);
        for k in 0..count {
            match strategy {
                InitStrategy::Random => {
                    for j in 0..n {
                        f[(k, j)] = rng.normal() * core::f64::consts::PI / half[j];
                    }
                }
                _ => {
                    let axis = k % n;
                    let harmonic = (k / n + 1) as f64;
                    f[(k, axis)] = harmonic * core::f64::consts::PI / half[axis];
                }
            }
        }
        return Ok(BasisSpec::Fourier { frequencies: f });
    }
    let centers = match strategy {
        InitStrategy::Grid => grid_centers(&lo, &hi, count),
        InitStrategy::Random => random_centers(&lo, &hi, count, rng),
        InitStrategy::Kmeans => kmeans(x, count, KMEANS_ITERS, rng)?,
    };
    let width = default_width(&centers, &lo, &hi, strategy == InitStrategy::Grid && n == 1);
    match kind {
        BasisKind::Rbf => BasisSpec::rbf(centers, width),
        BasisKind::Sigmoid => {
            let mut w = Matrix::zeros(count, n);
            let mut b = vec![0.0; count];
            for k in 0..count {
                let dir: Vec<f64> = if n == 1 {
                    vec![1.0]
                } else {
                    let v: Vec<f64> = (0..n).map(|_| rng.normal()).collect();
                    let norm = math::sqrt(linalg::dot(&v, &v)).max(f64::MIN_POSITIVE);
                    v.iter().map(|e| e / norm).collect()
                };
                for j in 0..n {
                    w[(k, j)] = dir[j] / width;
                }
                b[k] = -linalg::dot(w.row(k), centers.row(k));
            }
            BasisSpec::sigmoid(w, Vector::from_vec(b))
        }
        BasisKind::Polynomial | BasisKind::Fourier => unreachable!(),
    }
}

/// Least squares (`lambda = 0`) or ridge (`lambda > 0`) on the expanded design.
pub fn fit_lbfm_closed(spec: &BasisSpec, x: &Matrix, y: &[f64], lambda: f64) -> Result<LinearParams> {
    let phi = expand(spec, x)?;
    if lambda == 0.0 {
        glm::fit_ols(&phi, y)
    } else {
        glm::fit_ridge_closed(&phi, y, lambda)
    }
}

/// Like [`fit_lbfm_closed`] with `lambda = 0`, but falls back to the
/// minimum-norm interpolant when the design has more columns than rows.
pub fn fit_lbfm_interpolating(spec: &BasisSpec, x: &Matrix, y: &[f64]) -> Result<LinearParams> {
    let phi = expand(spec, x)?;
    Ok(LinearParams {
        theta: linalg::least_squares_or_min_norm(&phi, y)?,
    })
}

/// Predictions `Φ(x)·θ`.
pub fn predict_lbfm(spec: &BasisSpec, p: &LinearParams, x: &Matrix) -> Result<Vector> {
    expand(spec, x)?.matvec(&p.theta)
}
