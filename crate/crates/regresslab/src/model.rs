//! Fitted models as saved to and loaded from JSON.

use std::path::Path;

use regresslab_core::basis::{self, BasisSpec};
use regresslab_core::dataset::{one_hot_encode, Dataset, Labels, Scaling};
use regresslab_core::glm::{self, LinearParams, ModelKind, Reduction, Targets};
use regresslab_core::kernel::KernelRidge;
use regresslab_core::metrics::{self, ClassificationMetrics, RegressionMetrics};
use regresslab_core::nn::{self, Activation, LossKind, MlpNet, OutputKind};
use regresslab_core::{Matrix, Vector};
use serde::{Deserialize, Serialize};

use crate::error::{CliError, Result};
use crate::io::LabelKind;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case", deny_unknown_fields)]
pub enum ModelBody {
    Linear {
        theta: Vector,
    },
    Logistic {
        theta: Vector,
        threshold: f64,
    },
    /// Row-major `(N+1)×K` parameters.
    Softmax {
        thetas: Matrix,
    },
    Lbfm {
        basis: BasisSpec,
        theta: Vector,
    },
    KernelRidge {
        ridge: KernelRidge,
    },
    Mlp {
        layer_sizes: Vec<usize>,
        activation: Activation,
        output: OutputKind,
        loss: LossKind,
        /// Layer by layer, each `units × (fan_in + 1)` row-major with the bias first.
        weights: Vec<f64>,
    },
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SavedModel {
    pub feature_names: Vec<String>,
    pub label: String,
    pub label_kind: LabelKind,
    /// Feature scaling applied before the model sees the data.
    pub scaling: Option<Scaling>,
    pub model: ModelBody,
}

/// Metrics of a model on one dataset.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Evaluation {
    pub model: String,
    pub rows: usize,
    /// Mean training loss of the model family.
    pub loss: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub regression: Option<RegressionMetrics>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub classification: Option<ClassificationMetrics>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub cross_entropy: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub auc: Option<f64>,
}

pub fn net_from_body(body: &ModelBody) -> Result<MlpNet> {
    let ModelBody::Mlp {
        layer_sizes,
        activation,
        output,
        weights,
        ..
    } = body
    else {
        return Err(CliError::Schema("not a network model".into()));
    };
    let shapes: Vec<Matrix> = layer_sizes
        .windows(2)
        .map(|w| Matrix::zeros(w[1], w[0] + 1))
        .collect();
    let mut net = MlpNet::from_weights(layer_sizes, *activation, *output, shapes)?;
    net.set_flat_params(weights)?;
    Ok(net)
}

pub fn body_from_net(net: &MlpNet, loss: LossKind) -> ModelBody {
    ModelBody::Mlp {
        layer_sizes: net.layer_sizes().to_vec(),
        activation: net.activation(),
        output: net.output_kind(),
        loss,
        weights: net.flat_params(),
    }
}

impl ModelBody {
    pub fn name(&self) -> &'static str {
        match self {
            ModelBody::Linear { .. } => "linear",
            ModelBody::Logistic { .. } => "logistic",
            ModelBody::Softmax { .. } => "softmax",
            ModelBody::Lbfm { .. } => "lbfm",
            ModelBody::KernelRidge { .. } => "kernel-ridge",
            ModelBody::Mlp { .. } => "mlp",
        }
    }

    /// Mean loss on prepared (scaled, unaugmented) features: half squared
    /// error for regressors, cross-entropy for classifiers, and the network's
    /// own loss for networks.
    pub fn loss(&self, x: &Matrix, labels: &Labels) -> Result<f64> {
        let aug = || x.with_bias();
        Ok(match self {
            ModelBody::Linear { theta } => {
                glm::loss(ModelKind::Linear, theta, &aug(), Targets::Real(real(labels)?), Reduction::Mean)?
            }
            ModelBody::Logistic { theta, .. } => {
                let y: Vec<f64> = classes(labels)?.iter().map(|&c| c as f64).collect();
                glm::loss(ModelKind::Logistic, theta, &aug(), Targets::Real(&y), Reduction::Mean)?
            }
            ModelBody::Softmax { thetas } => {
                let k = thetas.cols();
                let oh = one_hot_encode(classes(labels)?, k)?;
                glm::loss(
                    ModelKind::Softmax { classes: k },
                    thetas.as_slice(),
                    &aug(),
                    Targets::OneHot(&oh),
                    Reduction::Mean,
                )?
            }
            ModelBody::Lbfm { basis, theta } => glm::loss(
                ModelKind::Linear,
                theta,
                &basis::expand(basis, x)?,
                Targets::Real(real(labels)?),
                Reduction::Mean,
            )?,
            ModelBody::KernelRidge { ridge } => {
                let yhat = ridge.predict(x)?;
                half_mse(&yhat, real(labels)?)
            }
            ModelBody::Mlp { loss, .. } => {
                let net = net_from_body(self)?;
                let y = nn::targets_matrix(&net, labels)?;
                let all: Vec<usize> = (0..x.rows()).collect();
                nn::mean_loss(&net, x, &y, *loss, &all)?
            }
        })
    }

    /// Real-valued predictions, or `None` for classifiers.
    pub fn predict_real(&self, x: &Matrix) -> Result<Option<Vector>> {
        Ok(Some(match self {
            ModelBody::Linear { theta } => x.with_bias().matvec(theta)?,
            ModelBody::Lbfm { basis, theta } => basis::predict_lbfm(
                basis,
                &LinearParams {
                    theta: theta.clone(),
                },
                x,
            )?,
            ModelBody::KernelRidge { ridge } => ridge.predict(x)?,
            ModelBody::Mlp {
                output: OutputKind::Linear,
                ..
            } => {
                let net = net_from_body(self)?;
                let mut out = Vec::with_capacity(x.rows());
                for i in 0..x.rows() {
                    out.push(nn::forward(&net, x.row(i))?.0[0]);
                }
                Vector::new(out)?
            }
            _ => return Ok(None),
        }))
    }

    /// Class probabilities (one column per class), or `None` for regressors.
    pub fn predict_proba(&self, x: &Matrix) -> Result<Option<Matrix>> {
        let p = match self {
            ModelBody::Logistic { theta, .. } => {
                let p1 = glm::predict_rows(ModelKind::Logistic, theta, &x.with_bias())?;
                two_column(p1.as_slice())?
            }
            ModelBody::Softmax { thetas } => glm::predict_rows(
                ModelKind::Softmax {
                    classes: thetas.cols(),
                },
                thetas.as_slice(),
                &x.with_bias(),
            )?,
            ModelBody::Mlp { output, .. } if *output != OutputKind::Linear => {
                let net = net_from_body(self)?;
                let mut rows = Vec::with_capacity(x.rows());
                for i in 0..x.rows() {
                    rows.push(nn::forward(&net, x.row(i))?.0.into_vec());
                }
                let m = Matrix::from_rows(&rows)?;
                if *output == OutputKind::Logistic {
                    two_column(m.as_slice())?
                } else {
                    m
                }
            }
            _ => return Ok(None),
        };
        Ok(Some(p))
    }

    fn threshold(&self) -> f64 {
        match self {
            ModelBody::Logistic { threshold, .. } => *threshold,
            _ => 0.5,
        }
    }
}

fn two_column(p1: &[f64]) -> Result<Matrix> {
    Ok(Matrix::new(
        p1.len(),
        2,
        p1.iter().flat_map(|&p| [1.0 - p, p]).collect(),
    )?)
}

fn half_mse(yhat: &[f64], y: &[f64]) -> f64 {
    yhat.iter().zip(y).map(|(a, b)| 0.5 * (a - b) * (a - b)).sum::<f64>() / y.len() as f64
}

fn real(labels: &Labels) -> Result<&[f64]> {
    match labels {
        Labels::Real(v) => Ok(v),
        Labels::Class(_) => Err(CliError::Schema("this model needs real-valued labels".into())),
    }
}

fn classes(labels: &Labels) -> Result<&[usize]> {
    match labels {
        Labels::Class(c) => Ok(c),
        Labels::Real(_) => Err(CliError::Schema("this model needs class labels".into())),
    }
}

impl SavedModel {
    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
        serde_json::from_str(&text)
            .map_err(|e| CliError::Schema(format!("{}: not a model file: {e}", path.display())))
    }

    pub fn save(&self, path: &Path) -> Result<()> {
        crate::io::save_json(self, path)
    }

    /// Scaled raw features after checking the column names.
    pub fn prepare(&self, d: &Dataset) -> Result<Matrix> {
        if d.feature_names() != self.feature_names.as_slice() {
            return Err(CliError::Schema(format!(
                "feature columns [{}] do not match the model's [{}]",
                d.feature_names().join(", "),
                self.feature_names.join(", ")
            )));
        }
        Ok(match &self.scaling {
            Some(s) => s.apply(d.x())?,
            None => d.x().clone(),
        })
    }

    pub fn loss(&self, d: &Dataset) -> Result<f64> {
        self.model.loss(&self.prepare(d)?, d.labels())
    }

    pub fn evaluate(&self, d: &Dataset) -> Result<Evaluation> {
        let x = self.prepare(d)?;
        let mut ev = Evaluation {
            model: self.model.name().into(),
            rows: d.rows(),
            loss: self.model.loss(&x, d.labels())?,
            regression: None,
            classification: None,
            cross_entropy: None,
            auc: None,
        };
        if let Some(yhat) = self.model.predict_real(&x)? {
            ev.regression = Some(metrics::regression_metrics(&yhat, real(d.labels())?)?);
        }
        if let Some(p) = self.model.predict_proba(&x)? {
            let y = classes(d.labels())?;
            let k = p.cols();
            let yhat: Vec<usize> = (0..p.rows())
                .map(|i| {
                    if k == 2 {
                        usize::from(p[(i, 1)] > self.model.threshold())
                    } else {
                        glm::argmax(p.row(i))
                    }
                })
                .collect();
            ev.classification = Some(metrics::classification_metrics(&yhat, y, 1)?);
            ev.cross_entropy = Some(metrics::cross_entropy(&p, &one_hot_encode(y, k)?)?);
            if k == 2 && y.contains(&0) && y.contains(&1) {
                ev.auc = Some(metrics::auc(&p.column(1), y)?);
            }
        }
        Ok(ev)
    }
}
