//! Central finite-difference checks of the analytic gradients.
//!
//! The step for coordinate `i` is `1e-6·(1 + |θ_i|)`. The error of one
//! coordinate is `|a - n| / max(|a|, |n|, REL_FLOOR)`; the floor keeps
//! coordinates whose gradient is near zero from being judged on rounding noise.

use alloc::string::String;
use alloc::vec::Vec;

use crate::basis::{init_basis_params, expand, BasisKind, BasisSpec, InitStrategy};
use crate::dataset::one_hot_encode;
use crate::error::Result;
use crate::glm::{self, ModelKind, Reduction, Targets};
use crate::linalg::Matrix;
use crate::math;
use crate::nn::{self, Activation, LossKind, OutputKind};
use crate::rng::Rng;

pub const STEP_SCALE: f64 = 1e-6;
pub const REL_FLOOR: f64 = 1e-4;
pub const DEFAULT_TOLERANCE: f64 = 1e-5;

/// Largest coordinate-wise error between `analytic` and central differences of `f`.
pub fn max_relative_error<F>(mut f: F, theta: &[f64], analytic: &[f64]) -> Result<f64>
where
    F: FnMut(&[f64]) -> Result<f64>,
{
    let mut p = theta.to_vec();
    let mut worst: f64 = 0.0;
    for i in 0..p.len() {
        let h = STEP_SCALE * (1.0 + math::abs(theta[i]));
        p[i] = theta[i] + h;
        let up = f(&p)?;
        p[i] = theta[i] - h;
        let down = f(&p)?;
        p[i] = theta[i];
        let numeric = (up - down) / (2.0 * h);
        let a = analytic[i];
        let denom = math::abs(a).max(math::abs(numeric)).max(REL_FLOOR);
        worst = worst.max(math::abs(a - numeric) / denom);
    }
    Ok(worst)
}

#[derive(Clone, Debug, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct GradcheckReport {
    pub model: String,
    pub draws: usize,
    pub max_rel_error: f64,
    pub tolerance: f64,
    pub passed: bool,
}

fn report(model: &str, draws: usize, worst: f64) -> GradcheckReport {
    GradcheckReport {
        model: model.into(),
        draws,
        max_rel_error: worst,
        tolerance: DEFAULT_TOLERANCE,
        passed: worst < DEFAULT_TOLERANCE,
    }
}

fn random_design(rng: &mut Rng, m: usize, n: usize) -> Matrix {
    let raw = Matrix::new(m, n, (0..m * n).map(|_| rng.uniform(-1.0, 1.0)).collect())
        .expect("finite");
    raw.with_bias()
}

fn check_glm(kind: ModelKind, draws: usize, rng: &mut Rng) -> Result<f64> {
    let (m, n) = (8, 3);
    let mut worst: f64 = 0.0;
    for _ in 0..draws {
        let x = random_design(rng, m, n);
        let theta: Vec<f64> = (0..kind.param_len(n + 1)).map(|_| rng.normal()).collect();
        let err = match kind {
            ModelKind::Softmax { classes } => {
                let ids: Vec<usize> = (0..m).map(|_| rng.below(classes)).collect();
                let oh = one_hot_encode(&ids, classes)?;
                let g = glm::gradient(kind, &theta, &x, Targets::OneHot(&oh), Reduction::Mean)?;
                max_relative_error(
                    |t| glm::loss(kind, t, &x, Targets::OneHot(&oh), Reduction::Mean),
                    &theta,
                    &g,
                )?
            }
            _ => {
                let y: Vec<f64> = match kind {
                    ModelKind::Logistic => (0..m).map(|_| rng.below(2) as f64).collect(),
                    _ => (0..m).map(|_| rng.normal()).collect(),
                };
                let g = glm::gradient(kind, &theta, &x, Targets::Real(&y), Reduction::Mean)?;
                max_relative_error(
                    |t| glm::loss(kind, t, &x, Targets::Real(&y), Reduction::Mean),
                    &theta,
                    &g,
                )?
            }
        };
        worst = worst.max(err);
    }
    Ok(worst)
}

fn check_lbfm(draws: usize, rng: &mut Rng) -> Result<f64> {
    let m = 10;
    let mut worst: f64 = 0.0;
    for d in 0..draws {
        let raw = Matrix::new(m, 2, (0..2 * m).map(|_| rng.uniform(-1.0, 1.0)).collect())?;
        let spec = match d % 4 {
            0 => BasisSpec::polynomial(2, 3)?,
            1 => init_basis_params(BasisKind::Rbf, &raw, 5, InitStrategy::Random, rng)?,
            2 => init_basis_params(BasisKind::Sigmoid, &raw, 5, InitStrategy::Random, rng)?,
            _ => init_basis_params(BasisKind::Fourier, &raw, 3, InitStrategy::Random, rng)?,
        };
        let phi = expand(&spec, &raw)?;
        let y: Vec<f64> = (0..m).map(|_| rng.normal()).collect();
        let theta: Vec<f64> = (0..phi.cols()).map(|_| rng.normal()).collect();
        let g = glm::gradient(ModelKind::Linear, &theta, &phi, Targets::Real(&y), Reduction::Mean)?;
        let err = max_relative_error(
            |t| glm::loss(ModelKind::Linear, t, &phi, Targets::Real(&y), Reduction::Mean),
            &theta,
            &g,
        )?;
        worst = worst.max(err);
    }
    Ok(worst)
}

fn check_mlp(draws: usize, rng: &mut Rng) -> Result<f64> {
    let m = 3;
    let mut worst: f64 = 0.0;
    for d in 0..draws {
        let activation = if d % 2 == 0 { Activation::Sigmoid } else { Activation::Tanh };
        let (output, loss, outs) = match d % 3 {
            0 => (OutputKind::Linear, LossKind::Mse, 1 + rng.below(2)),
            1 => (OutputKind::Logistic, LossKind::Xent, 1),
            _ => (OutputKind::Softmax, LossKind::Xent, 2 + rng.below(2)),
        };
        let inputs = 1 + rng.below(3);
        let mut sizes = Vec::from([inputs]);
        for _ in 0..1 + rng.below(2) {
            sizes.push(2 + rng.below(7));
        }
        sizes.push(outs);
        let net = nn::init_mlp(&sizes, activation, output, rng, 1.0)?;
        let x = Matrix::new(m, inputs, (0..m * inputs).map(|_| rng.uniform(-1.0, 1.0)).collect())?;
        let y = match output {
            OutputKind::Linear => Matrix::new(m, outs, (0..m * outs).map(|_| rng.normal()).collect())?,
            OutputKind::Logistic => Matrix::new(m, 1, (0..m).map(|_| rng.below(2) as f64).collect())?,
            OutputKind::Softmax => {
                let ids: Vec<usize> = (0..m).map(|_| rng.below(outs)).collect();
                one_hot_encode(&ids, outs)?
            }
        };
        let all: Vec<usize> = (0..m).collect();
        let theta = net.flat_params();
        let g = nn::mean_gradient(&net, &x, &y, loss, &all)?;
        let mut probe = net.clone();
        let err = max_relative_error(
            |t| {
                probe.set_flat_params(t)?;
                nn::mean_loss(&probe, &x, &y, loss, &all)
            },
            &theta,
            &g,
        )?;
        worst = worst.max(err);
    }
    Ok(worst)
}

/// Runs `draws` random parameter draws for every model family.
pub fn run_suite(seed: u64, draws: usize) -> Result<Vec<GradcheckReport>> {
    let mut rng = Rng::new(seed);
    Ok(Vec::from([
        report("linear", draws, check_glm(ModelKind::Linear, draws, &mut rng)?),
        report("logistic", draws, check_glm(ModelKind::Logistic, draws, &mut rng)?),
        report(
            "softmax",
            draws,
            check_glm(ModelKind::Softmax { classes: 3 }, draws, &mut rng)?,
        ),
        report("lbfm", draws, check_lbfm(draws, &mut rng)?),
        report("mlp", draws, check_mlp(draws, &mut rng)?),
    ]))
}
