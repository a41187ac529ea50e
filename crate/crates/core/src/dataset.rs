//! Datasets, label encodings, standardization and seeded generators.

use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::linalg::{Cholesky, Matrix, Vector};
use crate::math;
use crate::rng::Rng;

/// Labels attached to a dataset: real targets or 0-based class ids.
#[derive(Clone, Debug, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub enum Labels {
    Real(Vector),
    Class(Vec<usize>),
}

impl Labels {
    pub fn len(&self) -> usize {
        match self {
            Labels::Real(v) => v.len(),
            Labels::Class(c) => c.len(),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }
}

/// Feature matrix plus one label column.
#[derive(Clone, Debug, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct Dataset {
    x: Matrix,
    labels: Labels,
    feature_names: Vec<String>,
    bias_augmented: bool,
}

impl Dataset {
    pub fn new(x: Matrix, labels: Labels, feature_names: Vec<String>) -> Result<Self> {
        if labels.len() != x.rows() {
            return Err(Error::shape("Dataset::new", x.rows(), labels.len()));
        }
        if feature_names.len() != x.cols() {
            return Err(Error::shape("Dataset::new", x.cols(), feature_names.len()));
        }
        Ok(Self {
            x,
            labels,
            feature_names,
            bias_augmented: false,
        })
    }

    /// Dataset with generated names `x1..xN`.
    pub fn unnamed(x: Matrix, labels: Labels) -> Result<Self> {
        let names = (1..=x.cols()).map(|i| format!("x{i}")).collect();
        Self::new(x, labels, names)
    }

    pub fn x(&self) -> &Matrix {
        &self.x
    }

    pub fn labels(&self) -> &Labels {
        &self.labels
    }

    pub fn feature_names(&self) -> &[String] {
        &self.feature_names
    }

    pub fn is_bias_augmented(&self) -> bool {
        self.bias_augmented
    }

    pub fn rows(&self) -> usize {
        self.x.rows()
    }

    /// Number of raw features (the bias column is not counted).
    pub fn features(&self) -> usize {
        self.x.cols() - usize::from(self.bias_augmented)
    }

    pub fn y_real(&self) -> Option<&Vector> {
        match &self.labels {
            Labels::Real(v) => Some(v),
            Labels::Class(_) => None,
        }
    }

    pub fn y_class(&self) -> Option<&[usize]> {
        match &self.labels {
            Labels::Class(c) => Some(c),
            Labels::Real(_) => None,
        }
    }

    /// Prepends a column of ones; a no-op on an already augmented dataset.
    pub fn with_bias(&self) -> Dataset {
        if self.bias_augmented {
            return self.clone();
        }
        let mut names = Vec::with_capacity(self.feature_names.len() + 1);
        names.push(String::from("bias"));
        names.extend(self.feature_names.iter().cloned());
        Dataset {
            x: self.x.with_bias(),
            labels: self.labels.clone(),
            feature_names: names,
            bias_augmented: true,
        }
    }

    /// Rows picked by index, in the given order.
    pub fn select_rows(&self, idx: &[usize]) -> Dataset {
        let labels = match &self.labels {
            Labels::Real(v) => Labels::Real(Vector::from_vec(idx.iter().map(|&i| v[i]).collect())),
            Labels::Class(c) => Labels::Class(idx.iter().map(|&i| c[i]).collect()),
        };
        Dataset {
            x: self.x.select_rows(idx),
            labels,
            feature_names: self.feature_names.clone(),
            bias_augmented: self.bias_augmented,
        }
    }

    /// Largest class id plus one, or `None` for real labels.
    pub fn class_count(&self) -> Option<usize> {
        self.y_class()
            .map(|c| c.iter().copied().max().map_or(0, |m| m + 1))
    }
}

/// The six (area, rent) pairs of the rental-price example.
pub fn fixture_rental() -> Dataset {
    let pairs = [
        (78.0, 6600.0),
        (71.0, 6500.0),
        (60.0, 4900.0),
        (48.0, 4500.0),
        (52.0, 3800.0),
        (45.0, 4300.0),
    ];
    let x = Matrix::from_raw(6, 1, pairs.iter().map(|p| p.0).collect());
    let y = Vector::from_vec(pairs.iter().map(|p| p.1).collect());
    Dataset::new(x, Labels::Real(y), vec![String::from("area")]).expect("fixture shape")
}

/// `M×k` indicator matrix with a single 1 per row.
pub fn one_hot_encode(y_class: &[usize], k: usize) -> Result<Matrix> {
    let mut m = Matrix::zeros(y_class.len(), k);
    for (i, &c) in y_class.iter().enumerate() {
        if c >= k {
            return Err(Error::ClassRange { id: c, classes: k });
        }
        m[(i, c)] = 1.0;
    }
    Ok(m)
}

/// Column means and population standard deviations used by [`standardize`].
#[derive(Clone, Debug, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct Scaling {
    pub means: Vector,
    pub stds: Vector,
}

impl Scaling {
    /// Applies the stored scaling to new raw features.
    pub fn apply(&self, x: &Matrix) -> Result<Matrix> {
        if x.cols() != self.means.len() {
            return Err(Error::shape("Scaling::apply", self.means.len(), x.cols()));
        }
        let mut out = x.clone();
        for i in 0..x.rows() {
            for j in 0..x.cols() {
                out[(i, j)] = (x[(i, j)] - self.means[j]) / self.stds[j];
            }
        }
        Ok(out)
    }
}

/// Column statistics of a raw feature matrix (population std, constants get 1).
pub fn column_scaling(x: &Matrix) -> Scaling {
    let m = x.rows() as f64;
    let n = x.cols();
    let mut means = vec![0.0; n];
    let mut stds = vec![0.0; n];
    for j in 0..n {
        let col = x.column(j);
        let mu = col.iter().sum::<f64>() / m;
        let var = col.iter().map(|v| (v - mu) * (v - mu)).sum::<f64>() / m;
        means[j] = mu;
        let sd = math::sqrt(var);
        stds[j] = if sd > 0.0 { sd } else { 1.0 };
    }
    Scaling {
        means: Vector::from_vec(means),
        stds: Vector::from_vec(stds),
    }
}

/// Centers each feature and scales it to unit population std.
///
/// Constant columns are centered but left unscaled (their std is recorded as 1).
pub fn standardize(d: &Dataset) -> Result<(Dataset, Scaling)> {
    if d.bias_augmented {
        return Err(Error::param("standardize expects raw features without a bias column"));
    }
    if d.rows() < 2 {
        return Err(Error::param("standardize needs at least 2 rows"));
    }
    let s = column_scaling(&d.x);
    let x = s.apply(&d.x)?;
    let out = Dataset {
        x,
        labels: d.labels.clone(),
        feature_names: d.feature_names.clone(),
        bias_augmented: false,
    };
    Ok((out, s))
}

/// `m` equally spaced points on `[0, 1]`.
pub fn unit_grid(m: usize) -> Vec<f64> {
    if m == 1 {
        return vec![0.0];
    }
    (0..m).map(|i| i as f64 / (m - 1) as f64).collect()
}

/// `y = sin(2πx) + ε` on an inclusive equally spaced grid over `[0, 1]`.
pub fn gen_sine(m: usize, noise_std: f64, rng: &mut Rng) -> Result<Dataset> {
    if m < 2 {
        return Err(Error::param("gen_sine needs m >= 2"));
    }
    if !(noise_std >= 0.0) || !noise_std.is_finite() {
        return Err(Error::param("noise_std must be finite and >= 0"));
    }
    let xs = unit_grid(m);
    let ys: Vec<f64> = xs
        .iter()
        .map(|&x| {
            let clean = math::sin(2.0 * core::f64::consts::PI * x);
            if noise_std > 0.0 {
                clean + noise_std * rng.normal()
            } else {
                clean
            }
        })
        .collect();
    Dataset::new(
        Matrix::from_raw(m, 1, xs),
        Labels::Real(Vector::from_vec(ys)),
        vec![String::from("x")],
    )
}

/// Noiseless `sin(2πx)` on `m` grid points; the reference curve for test error.
pub fn sine_grid(m: usize) -> Dataset {
    let mut rng = Rng::new(0);
    gen_sine(m.max(2), 0.0, &mut rng).expect("valid arguments")
}

/// Two Gaussian classes with a shared covariance; class 0 rows come first.
pub fn gen_two_gaussians(
    m_per_class: usize,
    mu0: &[f64],
    mu1: &[f64],
    sigma: &Matrix,
    rng: &mut Rng,
) -> Result<Dataset> {
    let n = mu0.len();
    if mu1.len() != n {
        return Err(Error::shape("gen_two_gaussians", n, mu1.len()));
    }
    if sigma.rows() != n || sigma.cols() != n {
        return Err(Error::shape("gen_two_gaussians", n, sigma.rows()));
    }
    let l = Cholesky::factor(sigma)?;
    let l = l.lower();
    let mut data = Vec::with_capacity(2 * m_per_class * n);
    let mut labels = Vec::with_capacity(2 * m_per_class);
    for (c, mu) in [mu0, mu1].into_iter().enumerate() {
        for _ in 0..m_per_class {
            let z: Vec<f64> = (0..n).map(|_| rng.normal()).collect();
            for i in 0..n {
                let lz: f64 = (0..=i).map(|k| l[(i, k)] * z[k]).sum();
                data.push(mu[i] + lz);
            }
            labels.push(c);
        }
    }
    Dataset::unnamed(
        Matrix::from_raw(2 * m_per_class, n, data),
        Labels::Class(labels),
    )
}

/// Linear data with a sparse coefficient vector: `y = b + Σ θ_n x_n + ε`,
/// features i.i.d. standard normal.
pub fn gen_sparse_linear(
    m: usize,
    theta: &[f64],
    bias: f64,
    noise_std: f64,
    rng: &mut Rng,
) -> Result<Dataset> {
    if m == 0 {
        return Err(Error::EmptyInput);
    }
    let n = theta.len();
    let mut data = Vec::with_capacity(m * n);
    let mut ys = Vec::with_capacity(m);
    for _ in 0..m {
        let row: Vec<f64> = (0..n).map(|_| rng.normal()).collect();
        let mut y = bias;
        for (x, t) in row.iter().zip(theta) {
            y += x * t;
        }
        ys.push(y + noise_std * rng.normal());
        data.extend(row);
    }
    Dataset::unnamed(
        Matrix::from_raw(m, n, data),
        Labels::Real(Vector::from_vec(ys)),
    )
}
