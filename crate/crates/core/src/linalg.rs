//! Dense row-major matrices and the solvers the estimators need.

use alloc::vec;
use alloc::vec::Vec;
use core::ops::{Deref, DerefMut};

use crate::error::{Error, Result};
use crate::math;

/// Relative tolerance for symmetry: `|a_ij - a_ji| <= SYMMETRY_RTOL * max|a|`.
pub const SYMMETRY_RTOL: f64 = 1e-10;
/// LU declares a matrix singular when a pivot is below `SINGULAR_RTOL * max|a|`.
pub const SINGULAR_RTOL: f64 = 1e-12;
/// Cholesky rejects a pivot `d_k <= CHOLESKY_PIVOT_RTOL * a_kk`.
///
/// Measuring against the original diagonal entry keeps well-conditioned but
/// badly scaled systems (high-degree polynomial designs) while still catching
/// exact rank deficiency, where the pivot collapses to rounding noise.
pub const CHOLESKY_PIVOT_RTOL: f64 = 1e-14;
/// Refinement sweeps applied after a Cholesky solve of the normal equations.
const REFINE_STEPS: usize = 10;

/// Dense matrix stored row by row.
#[derive(Clone, Debug, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct Matrix {
    rows: usize,
    cols: usize,
    data: Vec<f64>,
}

/// Dense vector of finite values.
#[derive(Clone, Debug, Default, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(transparent))]
pub struct Vector(Vec<f64>);

fn check_finite(op: &'static str, data: &[f64]) -> Result<()> {
    if data.iter().all(|v| v.is_finite()) {
        Ok(())
    } else {
        Err(Error::NonFinite { op })
    }
}

impl Vector {
    pub fn new(data: Vec<f64>) -> Result<Self> {
        check_finite("Vector::new", &data)?;
        Ok(Self(data))
    }

    pub fn zeros(n: usize) -> Self {
        Self(vec![0.0; n])
    }

    /// Wraps data produced by internal arithmetic; callers guarantee finiteness.
    pub(crate) fn from_vec(data: Vec<f64>) -> Self {
        Self(data)
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.0
    }

    pub fn into_vec(self) -> Vec<f64> {
        self.0
    }

    pub fn dot(&self, other: &[f64]) -> Result<f64> {
        if self.len() != other.len() {
            return Err(Error::shape("dot", self.len(), other.len()));
        }
        Ok(dot(&self.0, other))
    }

    pub fn norm2(&self) -> f64 {
        math::sqrt(dot(&self.0, &self.0))
    }

    pub fn norm_inf(&self) -> f64 {
        norm_inf(&self.0)
    }
}

impl Deref for Vector {
    type Target = [f64];
    fn deref(&self) -> &[f64] {
        &self.0
    }
}

impl DerefMut for Vector {
    fn deref_mut(&mut self) -> &mut [f64] {
        &mut self.0
    }
}

impl From<Vector> for Vec<f64> {
    fn from(v: Vector) -> Self {
        v.0
    }
}

pub(crate) fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

pub(crate) fn norm_inf(a: &[f64]) -> f64 {
    a.iter().fold(0.0, |m, v| if math::abs(*v) > m { math::abs(*v) } else { m })
}

impl Matrix {
    pub fn new(rows: usize, cols: usize, data: Vec<f64>) -> Result<Self> {
        if data.len() != rows * cols {
            return Err(Error::shape("Matrix::new", rows * cols, data.len()));
        }
        check_finite("Matrix::new", &data)?;
        Ok(Self { rows, cols, data })
    }

    pub fn from_rows(rows: &[Vec<f64>]) -> Result<Self> {
        let cols = rows.first().map_or(0, Vec::len);
        let mut data = Vec::with_capacity(rows.len() * cols);
        for r in rows {
            if r.len() != cols {
                return Err(Error::shape("Matrix::from_rows", cols, r.len()));
            }
            data.extend_from_slice(r);
        }
        Self::new(rows.len(), cols, data)
    }

    pub(crate) fn from_raw(rows: usize, cols: usize, data: Vec<f64>) -> Self {
        debug_assert_eq!(data.len(), rows * cols);
        Self { rows, cols, data }
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self::from_raw(rows, cols, vec![0.0; rows * cols])
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = 1.0;
        }
        m
    }

    pub fn diag(values: &[f64]) -> Self {
        let mut m = Self::zeros(values.len(), values.len());
        for (i, v) in values.iter().enumerate() {
            m[(i, i)] = *v;
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.data
    }

    pub fn row(&self, i: usize) -> &[f64] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub(crate) fn row_mut(&mut self, i: usize) -> &mut [f64] {
        &mut self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn column(&self, j: usize) -> Vec<f64> {
        (0..self.rows).map(|i| self[(i, j)]).collect()
    }

    pub fn transpose(&self) -> Matrix {
        let mut t = Matrix::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t[(j, i)] = self[(i, j)];
            }
        }
        t
    }

    pub fn max_abs(&self) -> f64 {
        norm_inf(&self.data)
    }

    pub fn matvec(&self, x: &[f64]) -> Result<Vector> {
        if x.len() != self.cols {
            return Err(Error::shape("matvec", self.cols, x.len()));
        }
        Ok(Vector::from_vec(
            (0..self.rows).map(|i| dot(self.row(i), x)).collect(),
        ))
    }

    /// `selfᵀ · x` without forming the transpose.
    pub fn tr_matvec(&self, x: &[f64]) -> Result<Vector> {
        if x.len() != self.rows {
            return Err(Error::shape("tr_matvec", self.rows, x.len()));
        }
        let mut out = vec![0.0; self.cols];
        for (i, xi) in x.iter().enumerate() {
            for (o, a) in out.iter_mut().zip(self.row(i)) {
                *o += a * xi;
            }
        }
        Ok(Vector::from_vec(out))
    }

    /// `selfᵀ · self`, exactly symmetric.
    pub fn gram(&self) -> Matrix {
        let n = self.cols;
        let mut g = Matrix::zeros(n, n);
        for i in 0..self.rows {
            let r = self.row(i);
            for a in 0..n {
                for b in a..n {
                    g.data[a * n + b] += r[a] * r[b];
                }
            }
        }
        for a in 0..n {
            for b in 0..a {
                g.data[a * n + b] = g.data[b * n + a];
            }
        }
        g
    }

    /// `self · selfᵀ`, exactly symmetric.
    pub fn outer_gram(&self) -> Matrix {
        let m = self.rows;
        let mut g = Matrix::zeros(m, m);
        for a in 0..m {
            for b in a..m {
                let v = dot(self.row(a), self.row(b));
                g.data[a * m + b] = v;
                g.data[b * m + a] = v;
            }
        }
        g
    }

    /// Rows picked by index, in the given order.
    pub fn select_rows(&self, idx: &[usize]) -> Matrix {
        let mut data = Vec::with_capacity(idx.len() * self.cols);
        for &i in idx {
            data.extend_from_slice(self.row(i));
        }
        Matrix::from_raw(idx.len(), self.cols, data)
    }

    /// Prepends a column of ones.
    pub fn with_bias(&self) -> Matrix {
        let mut data = Vec::with_capacity(self.rows * (self.cols + 1));
        for i in 0..self.rows {
            data.push(1.0);
            data.extend_from_slice(self.row(i));
        }
        Matrix::from_raw(self.rows, self.cols + 1, data)
    }

    pub fn is_symmetric(&self) -> bool {
        if self.rows != self.cols {
            return false;
        }
        let tol = SYMMETRY_RTOL * self.max_abs();
        (0..self.rows).all(|i| (0..i).all(|j| math::abs(self[(i, j)] - self[(j, i)]) <= tol))
    }
}

impl core::ops::Index<(usize, usize)> for Matrix {
    type Output = f64;
    fn index(&self, (i, j): (usize, usize)) -> &f64 {
        &self.data[i * self.cols + j]
    }
}

impl core::ops::IndexMut<(usize, usize)> for Matrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut f64 {
        &mut self.data[i * self.cols + j]
    }
}

/// Standard matrix product.
pub fn matmul(a: &Matrix, b: &Matrix) -> Result<Matrix> {
    if a.cols != b.rows {
        return Err(Error::shape("matmul", a.cols, b.rows));
    }
    let mut c = Matrix::zeros(a.rows, b.cols);
    for i in 0..a.rows {
        for k in 0..a.cols {
            let aik = a[(i, k)];
            if aik == 0.0 {
                continue;
            }
            let brow = b.row(k);
            let crow = c.row_mut(i);
            for (cv, bv) in crow.iter_mut().zip(brow) {
                *cv += aik * bv;
            }
        }
    }
    Ok(c)
}

/// Lower-triangular Cholesky factor `L` with `A = L·Lᵀ`.
#[derive(Clone, Debug)]
pub struct Cholesky {
    l: Matrix,
}

impl Cholesky {
    pub fn factor(a: &Matrix) -> Result<Self> {
        if a.rows != a.cols {
            return Err(Error::shape("cholesky", a.rows, a.cols));
        }
        if !a.is_symmetric() {
            return Err(Error::NotSymmetric);
        }
        let n = a.rows;
        let mut l = Matrix::zeros(n, n);
        for j in 0..n {
            let mut d = a[(j, j)];
            for k in 0..j {
                d -= l[(j, k)] * l[(j, k)];
            }
            let ajj = a[(j, j)];
            if !(d > CHOLESKY_PIVOT_RTOL * ajj) || !(ajj > 0.0) {
                return Err(Error::NotPositiveDefinite { pivot: j });
            }
            let djj = math::sqrt(d);
            l[(j, j)] = djj;
            for i in (j + 1)..n {
                let mut s = a[(i, j)];
                for k in 0..j {
                    s -= l[(i, k)] * l[(j, k)];
                }
                l[(i, j)] = s / djj;
            }
        }
        Ok(Self { l })
    }

    pub fn lower(&self) -> &Matrix {
        &self.l
    }

    pub fn solve(&self, b: &[f64]) -> Result<Vector> {
        let n = self.l.rows;
        if b.len() != n {
            return Err(Error::shape("cholesky_solve", n, b.len()));
        }
        let l = &self.l;
        let mut z = b.to_vec();
        for i in 0..n {
            let mut s = z[i];
            for k in 0..i {
                s -= l[(i, k)] * z[k];
            }
            z[i] = s / l[(i, i)];
        }
        for i in (0..n).rev() {
            let mut s = z[i];
            for k in (i + 1)..n {
                s -= l[(k, i)] * z[k];
            }
            z[i] = s / l[(i, i)];
        }
        Ok(Vector::from_vec(z))
    }
}

/// Solves `a·x = b` for symmetric positive definite `a`.
pub fn cholesky_solve(a: &Matrix, b: &[f64]) -> Result<Vector> {
    if a.rows != b.len() {
        return Err(Error::shape("cholesky_solve", a.rows, b.len()));
    }
    Cholesky::factor(a)?.solve(b)
}

/// Solves a general square system by Gaussian elimination with partial pivoting.
pub fn lu_solve(a: &Matrix, b: &[f64]) -> Result<Vector> {
    if a.rows != a.cols {
        return Err(Error::shape("lu_solve", a.rows, a.cols));
    }
    let n = a.rows;
    if b.len() != n {
        return Err(Error::shape("lu_solve", n, b.len()));
    }
    let tol = SINGULAR_RTOL * a.max_abs();
    let mut m = a.clone();
    let mut x = b.to_vec();
    for k in 0..n {
        let mut p = k;
        for i in (k + 1)..n {
            if math::abs(m[(i, k)]) > math::abs(m[(p, k)]) {
                p = i;
            }
        }
        if !(math::abs(m[(p, k)]) >= tol) || m[(p, k)] == 0.0 {
            return Err(Error::Singular { pivot: k });
        }
        if p != k {
            for j in 0..n {
                m.data.swap(k * n + j, p * n + j);
            }
            x.swap(k, p);
        }
        let piv = m[(k, k)];
        for i in (k + 1)..n {
            let f = m[(i, k)] / piv;
            if f == 0.0 {
                continue;
            }
            for j in k..n {
                m[(i, j)] -= f * m[(k, j)];
            }
            x[i] -= f * x[k];
        }
    }
    for i in (0..n).rev() {
        let mut s = x[i];
        for j in (i + 1)..n {
            s -= m[(i, j)] * x[j];
        }
        x[i] = s / m[(i, i)];
    }
    Ok(Vector::from_vec(x))
}

/// True iff Cholesky factorization succeeds.
pub fn is_positive_definite(a: &Matrix) -> Result<bool> {
    if a.rows != a.cols {
        return Err(Error::shape("is_positive_definite", a.rows, a.cols));
    }
    Ok(Cholesky::factor(a).is_ok())
}

/// Solves `(XᵀX + ridge·I) θ = Xᵀy`.
///
/// Cholesky first, followed by iterative refinement on the normal-equation
/// residual. Rank deficiency maps to [`Error::MulticollinearOrUnderdetermined`].
pub fn solve_normal_equations(x: &Matrix, y: &[f64], ridge: f64) -> Result<Vector> {
    if x.rows != y.len() {
        return Err(Error::shape("normal equations", x.rows, y.len()));
    }
    let mut a = x.gram();
    for i in 0..a.rows {
        a[(i, i)] += ridge;
    }
    let rhs = x.tr_matvec(y)?;
    let chol = Cholesky::factor(&a).map_err(|e| match e {
        Error::NotPositiveDefinite { .. } => Error::MulticollinearOrUnderdetermined,
        other => other,
    })?;
    let mut theta = chol.solve(&rhs)?;
    for _ in 0..REFINE_STEPS {
        // r = Xᵀ(y − Xθ) − ridge·θ, computed from X to avoid the squared conditioning of XᵀX.
        let fit = x.matvec(&theta)?;
        let resid: Vec<f64> = y.iter().zip(fit.iter()).map(|(a, b)| a - b).collect();
        let mut r = x.tr_matvec(&resid)?;
        for (ri, ti) in r.iter_mut().zip(theta.iter()) {
            *ri -= ridge * ti;
        }
        let delta = chol.solve(&r)?;
        let step = delta.norm_inf();
        for (t, d) in theta.iter_mut().zip(delta.iter()) {
            *t += d;
        }
        if step <= f64::EPSILON * theta.norm_inf() {
            break;
        }
    }
    if !theta.iter().all(|v| v.is_finite()) {
        return Err(Error::MulticollinearOrUnderdetermined);
    }
    Ok(theta)
}

/// Minimum-norm solution `θ = Xᵀ(XXᵀ)⁻¹y` of an underdetermined system.
pub fn solve_min_norm(x: &Matrix, y: &[f64]) -> Result<Vector> {
    if x.rows != y.len() {
        return Err(Error::shape("min-norm solve", x.rows, y.len()));
    }
    let g = x.outer_gram();
    let alpha = match Cholesky::factor(&g) {
        Ok(c) => c.solve(y)?,
        Err(_) => lu_solve(&g, y).map_err(|_| Error::MulticollinearOrUnderdetermined)?,
    };
    x.tr_matvec(&alpha)
}

/// Exact least squares when `XᵀX` is invertible, otherwise the minimum-norm
/// interpolant. Used by sweeps that deliberately visit underdetermined fits.
pub fn least_squares_or_min_norm(x: &Matrix, y: &[f64]) -> Result<Vector> {
    if x.rows >= x.cols {
        match solve_normal_equations(x, y, 0.0) {
            Err(Error::MulticollinearOrUnderdetermined) => {}
            other => return other,
        }
    }
    solve_min_norm(x, y)
}
