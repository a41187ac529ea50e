//! Kernel functions, Gram matrices and kernel ridge regression in dual form.

use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::linalg::{self, dot, Cholesky, Matrix, Vector};
use crate::math;

/// Jitter added to the Gram diagonal when `λ = 0`, relative to `trace(K)/M`.
pub const JITTER_RTOL: f64 = 1e-10;

#[derive(Clone, Debug, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(tag = "kind", rename_all = "lowercase"))]
pub enum KernelSpec {
    /// `xᵀx'`
    Linear,
    /// `(xᵀx' + c)^d`
    Polynomial { degree: u32, bias: f64 },
    /// `exp(-‖x - x'‖² / 2σ²)`
    Rbf { bandwidth: f64 },
    /// `exp(-‖x - x'‖ / σ)`
    Laplacian { bandwidth: f64 },
    /// `tanh(β xᵀx' + θ)`
    Sigmoid { beta: f64, theta: f64 },
    /// `cos(wᵀ(x - x'))`
    Fourier { frequency: Vector },
}

impl KernelSpec {
    pub fn validate(&self) -> Result<()> {
        match self {
            KernelSpec::Polynomial { degree, bias } if *degree < 1 || !(*bias >= 0.0) => {
                Err(Error::param("polynomial kernel needs degree >= 1 and bias >= 0"))
            }
            KernelSpec::Rbf { bandwidth } | KernelSpec::Laplacian { bandwidth }
                if !(*bandwidth > 0.0) =>
            {
                Err(Error::param("kernel bandwidth must be positive"))
            }
            KernelSpec::Sigmoid { beta, theta } if !(*beta > 0.0) || !(*theta < 0.0) => {
                Err(Error::param("sigmoid kernel needs beta > 0 and theta < 0"))
            }
            _ => Ok(()),
        }
    }
}

fn sq_dist(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(u, v)| (u - v) * (u - v)).sum()
}

pub fn kernel_eval(spec: &KernelSpec, xi: &[f64], xj: &[f64]) -> Result<f64> {
    if xi.len() != xj.len() {
        return Err(Error::shape("kernel_eval", xi.len(), xj.len()));
    }
    Ok(match spec {
        KernelSpec::Linear => dot(xi, xj),
        KernelSpec::Polynomial { degree, bias } => math::powi(dot(xi, xj) + bias, *degree),
        KernelSpec::Rbf { bandwidth } => {
            math::exp(-sq_dist(xi, xj) / (2.0 * bandwidth * bandwidth))
        }
        KernelSpec::Laplacian { bandwidth } => math::exp(-math::sqrt(sq_dist(xi, xj)) / bandwidth),
        KernelSpec::Sigmoid { beta, theta } => math::tanh(beta * dot(xi, xj) + theta),
        KernelSpec::Fourier { frequency } => {
            if frequency.len() != xi.len() {
                return Err(Error::shape("fourier kernel", frequency.len(), xi.len()));
            }
            let z: f64 = frequency
                .iter()
                .zip(xi.iter().zip(xj))
                .map(|(w, (a, b))| w * (a - b))
                .sum();
            math::cos(z)
        }
    })
}

/// Kernel matrix plus the diagonal jitter actually added to it.
#[derive(Clone, Debug, PartialEq)]
pub struct GramMatrix {
    pub k: Matrix,
    pub jitter: f64,
}

/// `K[i][j] = κ(x_i, x_j)`; the upper triangle is computed and mirrored.
pub fn gram(spec: &KernelSpec, x: &Matrix) -> Result<GramMatrix> {
    spec.validate()?;
    let m = x.rows();
    let mut k = Matrix::zeros(m, m);
    for i in 0..m {
        for j in i..m {
            let v = kernel_eval(spec, x.row(i), x.row(j))?;
            k[(i, j)] = v;
            k[(j, i)] = v;
        }
    }
    Ok(GramMatrix { k, jitter: 0.0 })
}

/// `κ(X, x')` for every pair of rows: `M_train × M_new`.
pub fn cross_kernel(spec: &KernelSpec, a: &Matrix, b: &Matrix) -> Result<Matrix> {
    let mut out = Matrix::zeros(a.rows(), b.rows());
    for i in 0..a.rows() {
        for j in 0..b.rows() {
            out[(i, j)] = kernel_eval(spec, a.row(i), b.row(j))?;
        }
    }
    Ok(out)
}

/// A fitted kernel ridge model: dual coefficients `α = (K + λI)⁻¹y`.
#[derive(Clone, Debug, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct KernelRidge {
    pub spec: KernelSpec,
    pub x_train: Matrix,
    pub alpha: Vector,
    pub lambda: f64,
    pub jitter: f64,
}

impl KernelRidge {
    pub fn fit(spec: &KernelSpec, x_train: &Matrix, y: &[f64], lambda: f64) -> Result<Self> {
        if !(lambda >= 0.0) || !lambda.is_finite() {
            return Err(Error::param("kernel ridge lambda must be finite and >= 0"));
        }
        if x_train.rows() != y.len() {
            return Err(Error::shape("kernel ridge", x_train.rows(), y.len()));
        }
        if y.is_empty() {
            return Err(Error::EmptyInput);
        }
        let mut g = gram(spec, x_train)?;
        let m = x_train.rows();
        if lambda == 0.0 {
            let trace: f64 = (0..m).map(|i| g.k[(i, i)]).sum();
            g.jitter = JITTER_RTOL * math::abs(trace) / m as f64;
        }
        let shift = lambda + g.jitter;
        for i in 0..m {
            g.k[(i, i)] += shift;
        }
        let alpha = match Cholesky::factor(&g.k) {
            Ok(c) => c.solve(y)?,
            Err(_) => linalg::lu_solve(&g.k, y)?,
        };
        Ok(Self {
            spec: spec.clone(),
            x_train: x_train.clone(),
            alpha,
            lambda,
            jitter: g.jitter,
        })
    }

    /// `ŷ = Σ_m α_m κ(x_m, x')` for each new row.
    pub fn predict(&self, x_new: &Matrix) -> Result<Vector> {
        let kx = cross_kernel(&self.spec, &self.x_train, x_new)?;
        kx.tr_matvec(&self.alpha)
    }

    /// Weights `w_m(x')` with `ŷ(x') = Σ_m w_m y_m`, i.e. `(K + λI)⁻¹ κ(X, x')`.
    pub fn label_weights(&self, x_new: &[f64], y: &[f64]) -> Result<Vector> {
        let m = self.x_train.rows();
        if y.len() != m {
            return Err(Error::shape("label_weights", m, y.len()));
        }
        let mut g = gram(&self.spec, &self.x_train)?.k;
        for i in 0..m {
            g[(i, i)] += self.lambda + self.jitter;
        }
        let kx: Vec<f64> = (0..m)
            .map(|i| kernel_eval(&self.spec, self.x_train.row(i), x_new))
            .collect::<Result<_>>()?;
        linalg::lu_solve(&g, &kx)
    }
}

/// Fits on `(x_train, y)` and predicts at `x_new`.
pub fn kernel_ridge_fit_predict(
    spec: &KernelSpec,
    x_train: &Matrix,
    y: &[f64],
    lambda: f64,
    x_new: &Matrix,
) -> Result<Vector> {
    KernelRidge::fit(spec, x_train, y, lambda)?.predict(x_new)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::Rng;
    use alloc::vec;
    use proptest::prelude::*;

    fn random(rng: &mut Rng, r: usize, c: usize) -> Matrix {
        Matrix::new(r, c, (0..r * c).map(|_| rng.uniform(-1.0, 1.0)).collect()).unwrap()
    }

    #[test]
    fn eval_examples() {
        let a = [0.3, -1.2, 2.0];
        let b = [1.0, 0.5, -0.25];
        assert_eq!(kernel_eval(&KernelSpec::Linear, &a, &b).unwrap(), dot(&a, &b));
        assert_eq!(kernel_eval(&KernelSpec::Rbf { bandwidth: 0.3 }, &a, &a).unwrap(), 1.0);
        let p = KernelSpec::Polynomial { degree: 2, bias: 1.0 };
        assert_eq!(kernel_eval(&p, &[1.0, 0.0], &[1.0, 1.0]).unwrap(), 4.0);
        let l = KernelSpec::Laplacian { bandwidth: 2.0 };
        assert!((kernel_eval(&l, &[0.0, 0.0], &[3.0, 4.0]).unwrap() - (-2.5f64).exp()).abs() < 1e-15);
        let s = KernelSpec::Sigmoid { beta: 0.5, theta: -1.0 };
        assert!((kernel_eval(&s, &[2.0], &[1.0]).unwrap()).abs() < 1e-15);
        assert!(kernel_eval(&KernelSpec::Linear, &a, &[1.0]).is_err());
        assert!(KernelSpec::Sigmoid { beta: 1.0, theta: 0.5 }.validate().is_err());
    }

    #[test]
    fn gram_examples() {
        let x = Matrix::from_rows(&[vec![0.5, 2.0]]).unwrap();
        let g = gram(&KernelSpec::Polynomial { degree: 3, bias: 1.0 }, &x).unwrap();
        assert_eq!(g.k.as_slice(), &[(4.25f64 + 1.0).powi(3)]);
        let mut rng = Rng::new(2);
        let x = random(&mut rng, 7, 3);
        let g = gram(&KernelSpec::Linear, &x).unwrap();
        let xxt = crate::linalg::matmul(&x, &x.transpose()).unwrap();
        for (a, b) in g.k.as_slice().iter().zip(xxt.as_slice()) {
            assert!((a - b).abs() < 1e-12);
        }
        let g = gram(&KernelSpec::Rbf { bandwidth: 0.5 }, &x).unwrap();
        assert!(linalg::is_positive_definite(&g.k).unwrap());
    }

    #[test]
    fn interpolates_single_point_and_shrinks() {
        let x = Matrix::from_rows(&[vec![0.2, 0.4]]).unwrap();
        let kr = KernelRidge::fit(&KernelSpec::Rbf { bandwidth: 1.0 }, &x, &[3.5], 0.0).unwrap();
        assert!(kr.jitter > 0.0);
        assert!((kr.predict(&x).unwrap()[0] - 3.5).abs() < 1e-6);

        let mut rng = Rng::new(5);
        let x = random(&mut rng, 10, 2);
        let y: Vec<f64> = (0..10).map(|_| rng.uniform(-4.0, 4.0)).collect();
        let p = kernel_ridge_fit_predict(&KernelSpec::Rbf { bandwidth: 0.7 }, &x, &y, 1e12, &x).unwrap();
        let ymax = y.iter().fold(0.0f64, |m, v| m.max(v.abs()));
        assert!(p.norm_inf() < 1e-6 * ymax);
    }

    #[test]
    fn label_weights_reproduce_prediction() {
        let mut rng = Rng::new(6);
        let x = random(&mut rng, 8, 2);
        let y: Vec<f64> = (0..8).map(|_| rng.normal()).collect();
        let kr = KernelRidge::fit(&KernelSpec::Rbf { bandwidth: 0.5 }, &x, &y, 0.1).unwrap();
        let q = [0.1, -0.3];
        let w = kr.label_weights(&q, &y).unwrap();
        let via_weights = dot(&w, &y);
        let direct = kr.predict(&Matrix::from_rows(&[q.to_vec()]).unwrap()).unwrap()[0];
        assert!((via_weights - direct).abs() < 1e-10);
    }

    proptest! {
        #[test]
        fn gram_is_exactly_symmetric(seed in any::<u64>(), m in 1usize..9) {
            let mut rng = Rng::new(seed);
            let x = random(&mut rng, m, 3);
            for spec in [
                KernelSpec::Linear,
                KernelSpec::Polynomial { degree: 3, bias: 0.5 },
                KernelSpec::Rbf { bandwidth: 0.8 },
                KernelSpec::Laplacian { bandwidth: 0.8 },
                KernelSpec::Sigmoid { beta: 0.7, theta: -0.2 },
                KernelSpec::Fourier { frequency: Vector::new(vec![1.0, -2.0, 0.5]).unwrap() },
            ] {
                let g = gram(&spec, &x).unwrap();
                prop_assert_eq!(&g.k, &g.k.transpose());
            }
        }

        #[test]
        fn predictions_ignore_training_order(seed in any::<u64>()) {
            let mut rng = Rng::new(seed);
            let m = 12;
            let x = random(&mut rng, m, 2);
            let y: Vec<f64> = (0..m).map(|_| rng.normal()).collect();
            let q = random(&mut rng, 5, 2);
            let spec = KernelSpec::Rbf { bandwidth: 0.6 };
            let a = kernel_ridge_fit_predict(&spec, &x, &y, 0.3, &q).unwrap();
            let mut perm: Vec<usize> = (0..m).collect();
            rng.shuffle(&mut perm);
            let xp = x.select_rows(&perm);
            let yp: Vec<f64> = perm.iter().map(|&i| y[i]).collect();
            let b = kernel_ridge_fit_predict(&spec, &xp, &yp, 0.3, &q).unwrap();
            for (u, v) in a.iter().zip(b.iter()) {
                prop_assert!((u - v).abs() < 1e-10);
            }
        }
    }
}
