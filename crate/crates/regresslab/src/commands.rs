//! What each subcommand does, independent of argument parsing.

use std::path::{Path, PathBuf};

use regresslab_core::basis::{self, BasisKind, BasisSpec};
use regresslab_core::cv::{self, CvScores, SplitKind};
use regresslab_core::dataset::{self, column_scaling, Dataset, Labels};
use regresslab_core::glm::{self, GenerativeParams, ModelKind, Targets};
use regresslab_core::gradcheck::{self, GradcheckReport};
use regresslab_core::kernel::KernelRidge;
use regresslab_core::linalg;
use regresslab_core::metrics;
use regresslab_core::nn::{self, LossKind, OutputKind};
use regresslab_core::optim::{self, GdConfig, GdOutcome, StopReason, TraceRecord};
use regresslab_core::regpath::{self, LassoConfig, PathOptions, PathPoint, PenaltyKind, PenaltySpec, SolveStatus};
use regresslab_core::{Error as CoreError, Matrix, Rng, Vector};
use serde::Serialize;

use crate::config::{effective_seed, GeneratorConfig, Method, ModelChoice, RunConfig, SweepConfig};
use crate::error::{CliError, Result};
use crate::io::{self, LabelKind, LabelSpec};
use crate::model::{body_from_net, Evaluation, ModelBody, SavedModel};

pub const DEFAULT_CV: SplitKind = SplitKind::Kfold { k: 5 };

/// Builds a generated dataset.
pub fn generate(g: &GeneratorConfig, seed: u64) -> Result<Dataset> {
    let mut rng = Rng::new(seed);
    Ok(match g {
        GeneratorConfig::Rental => dataset::fixture_rental(),
        GeneratorConfig::Sine { m, noise_std } => dataset::gen_sine(*m, *noise_std, &mut rng)?,
        GeneratorConfig::TwoGaussians {
            m_per_class,
            mu0,
            mu1,
            sigma,
        } => {
            let s = Matrix::from_rows(sigma)?;
            dataset::gen_two_gaussians(*m_per_class, mu0, mu1, &s, &mut rng)?
        }
        GeneratorConfig::SparseLinear {
            m,
            theta,
            bias,
            noise_std,
        } => dataset::gen_sparse_linear(*m, theta, *bias, *noise_std, &mut rng)?,
    })
}

/// The configured dataset, read from disk or generated from the run seed.
pub fn load_data(cfg: &RunConfig, seed: u64) -> Result<Dataset> {
    match (&cfg.data.path, &cfg.data.generator) {
        (Some(p), None) => io::load_csv(
            p,
            &LabelSpec {
                column: cfg.data.label.clone(),
                kind: cfg.data.label_kind,
                one_based: cfg.data.one_based,
            },
        ),
        (None, Some(g)) => generate(g, seed),
        _ => Err(CliError::Config("data: one of path or generator is required".into())),
    }
}

fn label_kind(d: &Dataset) -> LabelKind {
    match d.labels() {
        Labels::Real(_) => LabelKind::Real,
        Labels::Class(_) => LabelKind::Class,
    }
}

fn real_labels(d: &Dataset) -> Result<&[f64]> {
    d.y_real()
        .map(|v| v.as_slice())
        .ok_or_else(|| CliError::Schema("this model needs real-valued labels".into()))
}

/// Real labels inside cross-validation callbacks, which report core errors.
fn cv_labels(d: &Dataset) -> std::result::Result<&[f64], CoreError> {
    d.y_real()
        .map(|v| v.as_slice())
        .ok_or_else(|| CoreError::Configuration("this model needs real-valued labels".into()))
}

fn class_labels(d: &Dataset) -> Result<&[usize]> {
    d.y_class()
        .ok_or_else(|| CliError::Schema("this model needs class labels".into()))
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Coefficient {
    pub name: String,
    pub value: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct FitReport {
    pub model: String,
    pub method: Method,
    pub seed: u64,
    pub rows: usize,
    pub penalty: PenaltySpec,
    pub standardized: bool,
    /// Mean training loss of the fitted model, as `eval` computes it.
    pub final_loss: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub iterations: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub stop: Option<StopReason>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub solver_converged: Option<bool>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub coefficients: Vec<Coefficient>,
}

#[derive(Clone, Debug)]
pub struct FitResult {
    pub model: SavedModel,
    pub report: FitReport,
    pub trace: Option<TraceRecord>,
}

/// Extra state from a single parameter fit.
#[derive(Default)]
struct FitExtras {
    gd: Option<GdOutcome>,
    lasso_status: Option<SolveStatus>,
}

/// `Σ` over non-bias entries of the gradient of the penalty matching
/// `penalized_step`: `λθ` for L2 and `λ·sign(θ)` for L1.
fn add_penalty_gradient(g: &mut [f64], theta: &[f64], pen: &PenaltySpec, bias_len: usize) {
    for n in bias_len..theta.len() {
        g[n] += match pen.kind {
            PenaltyKind::None => 0.0,
            PenaltyKind::L2 => pen.lambda * theta[n],
            PenaltyKind::L1 => pen.lambda * theta[n].signum() * f64::from(u8::from(theta[n] != 0.0)),
        };
    }
}

/// The penalty whose gradient [`add_penalty_gradient`] adds.
fn penalty_objective(theta: &[f64], pen: &PenaltySpec, bias_len: usize) -> f64 {
    let rest = &theta[bias_len.min(theta.len())..];
    match pen.kind {
        PenaltyKind::None => 0.0,
        PenaltyKind::L2 => 0.5 * pen.lambda * rest.iter().map(|v| v * v).sum::<f64>(),
        PenaltyKind::L1 => pen.lambda * rest.iter().map(|v| v.abs()).sum::<f64>(),
    }
}

/// Gradient descent on a linear-in-θ model's mean loss plus a penalty on
/// everything but the bias parameters.
pub fn glm_gradient_descent(
    kind: ModelKind,
    x: &Matrix,
    t: Targets,
    pen: &PenaltySpec,
    gd: &GdConfig,
) -> std::result::Result<GdOutcome, CoreError> {
    let bias_len = kind.outputs();
    let theta0 = vec![0.0; kind.param_len(x.cols())];
    let all: Vec<usize> = (0..x.rows()).collect();
    let mut src = optim::make_gradient_strategy(gd.strategy, x.rows(), gd.seed, |p: &[f64], idx: &[usize]| {
        let mut g = glm::gradient_on(kind, p, x, t, idx)?;
        add_penalty_gradient(&mut g, p, pen, bias_len);
        Ok(g)
    })?;
    optim::gd_minimize(
        |p: &[f64]| Ok(glm::loss_on(kind, p, x, t, &all)? + penalty_objective(p, pen, bias_len)),
        |p| src.next(p),
        &theta0,
        gd,
    )
}

/// Linear-in-θ least squares on a design whose first column is the constant.
fn fit_design(
    design: &Matrix,
    y: &[f64],
    method: Method,
    pen: &PenaltySpec,
    gd: &GdConfig,
    allow_min_norm: bool,
    extras: &mut FitExtras,
) -> Result<Vector> {
    Ok(match (method, pen.kind) {
        (Method::ClosedForm, PenaltyKind::None) if allow_min_norm => linalg::least_squares_or_min_norm(design, y)?,
        (Method::ClosedForm, PenaltyKind::None) => glm::fit_ols(design, y)?.theta,
        (Method::ClosedForm, PenaltyKind::L2) => regpath::ridge_unpenalized_bias(design, y, pen.lambda)?,
        (Method::ClosedForm, PenaltyKind::L1) => {
            let fit = regpath::lasso_cd(design, y, pen.lambda, &LassoConfig::default(), None)?;
            extras.lasso_status = Some(fit.status);
            fit.params.theta
        }
        (Method::Gd, _) => {
            let out = glm_gradient_descent(ModelKind::Linear, design, Targets::Real(y), pen, gd)?;
            let theta = Vector::new(out.theta.to_vec())?;
            extras.gd = Some(out);
            theta
        }
    })
}

/// Places basis functions over the training inputs.
pub fn build_basis(cfg: &crate::config::BasisConfig, x: &Matrix, rng: &mut Rng) -> Result<BasisSpec> {
    let mut spec = basis::init_basis_params(cfg.kind, x, cfg.count, cfg.strategy, rng)?;
    if let Some(w) = cfg.width {
        match &mut spec {
            BasisSpec::Rbf { width, .. } => {
                if !(w > 0.0) || !w.is_finite() {
                    return Err(CliError::Config("model.basis.width must be positive".into()));
                }
                *width = w;
            }
            _ => return Err(CliError::Config("model.basis.width applies to rbf bases only".into())),
        }
    }
    Ok(spec)
}

fn class_count(cfg: &RunConfig, y: &[usize]) -> Result<usize> {
    let seen = y.iter().max().map_or(0, |m| m + 1);
    let k = match cfg.model.kind {
        ModelChoice::Logistic => 2,
        _ => cfg.model.classes.unwrap_or(seen.max(2)),
    };
    if let Some(&bad) = y.iter().find(|&&c| c >= k) {
        return Err(CoreError::ClassRange { id: bad, classes: k }.into());
    }
    Ok(k)
}

fn coefficient_names(cfg: &RunConfig, features: &[String], body: &ModelBody) -> Vec<String> {
    match body {
        ModelBody::Linear { .. } | ModelBody::Logistic { .. } => {
            std::iter::once("bias".to_string()).chain(features.iter().cloned()).collect()
        }
        ModelBody::Lbfm { theta, .. } => {
            let basis_name = cfg.model.basis.as_ref().map_or(BasisKind::Polynomial, |b| b.kind);
            let prefix = match basis_name {
                BasisKind::Polynomial => "poly",
                BasisKind::Rbf => "rbf",
                BasisKind::Sigmoid => "sigmoid",
                BasisKind::Fourier => "fourier",
            };
            (0..theta.len())
                .map(|i| if i == 0 { "bias".into() } else { format!("{prefix}{i}") })
                .collect()
        }
        _ => Vec::new(),
    }
}

/// Fits the configured model.
pub fn fit(cfg: &RunConfig) -> Result<FitResult> {
    cfg.validate()?;
    let seed = effective_seed(cfg.seed)?;
    let data = load_data(cfg, seed)?;
    let (x, scaling) = if cfg.data.standardize {
        let (d, s) = dataset::standardize(&data)?;
        (d.x().clone(), Some(s))
    } else {
        (data.x().clone(), None)
    };
    let method = cfg.method();
    let pen = PenaltySpec::new(cfg.penalty.kind, cfg.lambda()?)?;
    let mut gd = cfg.training.gd.clone();
    gd.seed = seed;
    let mut rng = Rng::new(seed);
    let mut extras = FitExtras::default();

    let body = match cfg.model.kind {
        ModelChoice::Linear => ModelBody::Linear {
            theta: fit_design(&x.with_bias(), real_labels(&data)?, method, &pen, &gd, false, &mut extras)?,
        },
        ModelChoice::Lbfm => {
            let bcfg = cfg.model.basis.as_ref().expect("validated");
            let spec = build_basis(bcfg, &x, &mut rng)?;
            let phi = basis::expand(&spec, &x)?;
            let theta = fit_design(&phi, real_labels(&data)?, method, &pen, &gd, true, &mut extras)?;
            ModelBody::Lbfm { basis: spec, theta }
        }
        ModelChoice::KernelRidge => ModelBody::KernelRidge {
            ridge: KernelRidge::fit(
                cfg.model.kernel.as_ref().expect("validated"),
                &x,
                real_labels(&data)?,
                pen.lambda,
            )?,
        },
        ModelChoice::Logistic | ModelChoice::Softmax => {
            let y = class_labels(&data)?;
            let k = class_count(cfg, y)?;
            let xa = x.with_bias();
            let thetas = match method {
                Method::ClosedForm => {
                    let scaled = Dataset::new(x.clone(), data.labels().clone(), data.feature_names().to_vec())?;
                    let (_, params) = glm::fit_gaussian_generative(&scaled, k)?;
                    match params {
                        GenerativeParams::Binary(p) => p.theta.into_vec(),
                        GenerativeParams::Multiclass(p) => p.thetas.as_slice().to_vec(),
                    }
                }
                Method::Gd => {
                    let kind = if cfg.model.kind == ModelChoice::Logistic {
                        ModelKind::Logistic
                    } else {
                        ModelKind::Softmax { classes: k }
                    };
                    let yf: Vec<f64> = y.iter().map(|&c| c as f64).collect();
                    let oh = dataset::one_hot_encode(y, k)?;
                    let t = match kind {
                        ModelKind::Softmax { .. } => Targets::OneHot(&oh),
                        _ => Targets::Real(&yf),
                    };
                    let out = glm_gradient_descent(kind, &xa, t, &pen, &gd)?;
                    let th = out.theta.to_vec();
                    extras.gd = Some(out);
                    th
                }
            };
            if cfg.model.kind == ModelChoice::Logistic {
                ModelBody::Logistic {
                    theta: Vector::new(thetas)?,
                    threshold: cfg.model.threshold,
                }
            } else if thetas.len() == xa.cols() {
                // Two classes from the generative fit: class 0 gets the zero column.
                let mut full = vec![0.0; 2 * xa.cols()];
                for (n, v) in thetas.iter().enumerate() {
                    full[2 * n + 1] = *v;
                }
                ModelBody::Softmax {
                    thetas: Matrix::new(xa.cols(), 2, full)?,
                }
            } else {
                ModelBody::Softmax {
                    thetas: Matrix::new(xa.cols(), k, thetas)?,
                }
            }
        }
        ModelChoice::Mlp => {
            let ncfg = cfg.model.net.as_ref().expect("validated");
            let output = ncfg.output.unwrap_or(match data.labels() {
                Labels::Real(_) => OutputKind::Linear,
                Labels::Class(_) => OutputKind::Softmax,
            });
            let loss = ncfg.loss.unwrap_or(match output {
                OutputKind::Linear => LossKind::Mse,
                _ => LossKind::Xent,
            });
            let outputs = match (output, data.labels()) {
                (OutputKind::Softmax, Labels::Class(c)) => class_count(cfg, c)?,
                (OutputKind::Softmax, Labels::Real(_)) => {
                    return Err(CliError::Config("a softmax network needs class labels".into()))
                }
                _ => 1,
            };
            let mut sizes = vec![x.cols()];
            sizes.extend(&ncfg.hidden);
            sizes.push(outputs);
            let net = nn::init_mlp(&sizes, ncfg.activation, output, &mut rng, ncfg.init_scale)?;
            let y = nn::targets_matrix(&net, data.labels())?;
            let (trained, out) = nn::train_mlp(&net, &x, &y, &gd, loss)?;
            extras.gd = Some(out);
            body_from_net(&trained, loss)
        }
    };

    let model = SavedModel {
        feature_names: data.feature_names().to_vec(),
        label: cfg.data.label.clone(),
        label_kind: label_kind(&data),
        scaling,
        model: body,
    };
    let final_loss = model.loss(&data)?;
    let coefficients = match &model.model {
        ModelBody::Linear { theta } | ModelBody::Logistic { theta, .. } | ModelBody::Lbfm { theta, .. } => {
            coefficient_names(cfg, data.feature_names(), &model.model)
                .into_iter()
                .zip(theta.iter())
                .map(|(name, &value)| Coefficient { name, value })
                .collect()
        }
        _ => Vec::new(),
    };
    let report = FitReport {
        model: cfg.model.kind.name().into(),
        method,
        seed,
        rows: data.rows(),
        penalty: pen,
        standardized: cfg.data.standardize,
        final_loss,
        iterations: extras.gd.as_ref().map(|o| o.trace.iterations()),
        stop: extras.gd.as_ref().map(|o| o.stop),
        solver_converged: extras.lasso_status.map(|s| s == SolveStatus::Converged),
        coefficients,
    };
    Ok(FitResult {
        model,
        report,
        trace: extras.gd.map(|o| o.trace),
    })
}

/// Writes `model.json`, `report.json` and, for gradient descent, `trace.csv`.
pub fn write_fit(res: &FitResult, dir: &Path) -> Result<Vec<PathBuf>> {
    let mut written = vec![dir.join("model.json"), dir.join("report.json")];
    res.model.save(&written[0])?;
    io::save_json(&res.report, &written[1])?;
    if let Some(t) = &res.trace {
        let p = dir.join("trace.csv");
        io::save_trace_csv(t, &p)?;
        written.push(p);
    }
    Ok(written)
}

/// Evaluates a saved model on a CSV file.
pub fn eval(model_path: &Path, data_path: &Path, one_based: bool) -> Result<Evaluation> {
    let model = SavedModel::load(model_path)?;
    let d = io::load_csv(
        data_path,
        &LabelSpec {
            column: model.label.clone(),
            kind: model.label_kind,
            one_based,
        },
    )?;
    model.evaluate(&d)
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct DegreeRow {
    pub degree: u32,
    pub train_rmse: f64,
    pub max_abs_coef: f64,
    pub cv: CvScores,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct LambdaRow {
    pub lambda: f64,
    pub cv: CvScores,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum SweepResult {
    Degree {
        split: SplitKind,
        best_degree: u32,
        rows: Vec<DegreeRow>,
    },
    Lambda {
        split: SplitKind,
        penalty: PenaltyKind,
        coef_names: Vec<String>,
        best_lambda: f64,
        path: Vec<PathPoint>,
        scores: Vec<LambdaRow>,
    },
}

fn rmse_of(theta: &[f64], design: &Matrix, y: &[f64]) -> Result<f64> {
    Ok(metrics::rmse(&design.matvec(theta)?, y)?)
}

/// Scales every column but the first (the constant) to zero mean and unit
/// population std.
fn standardize_design(design: &Matrix) -> Result<Matrix> {
    let rest: Vec<Vec<f64>> = (0..design.rows()).map(|i| design.row(i)[1..].to_vec()).collect();
    if design.cols() == 1 {
        return Ok(design.clone());
    }
    let raw = Matrix::from_rows(&rest)?;
    Ok(column_scaling(&raw).apply(&raw)?.with_bias())
}

/// Degree sweep or λ path with cross-validated scores (validation RMSE).
pub fn sweep(cfg: &RunConfig) -> Result<SweepResult> {
    cfg.validate()?;
    let seed = effective_seed(cfg.seed)?;
    let data = load_data(cfg, seed)?;
    let y = real_labels(&data)?.to_vec();
    let split = cfg.cv.unwrap_or(DEFAULT_CV);
    let split = match split {
        SplitKind::Kfold { k } if k > data.rows() => SplitKind::Kfold { k: data.rows() },
        s => s,
    };
    let plan = cv::split(data.rows(), split, seed)?;
    let x = if cfg.data.standardize {
        dataset::standardize(&data)?.0.x().clone()
    } else {
        data.x().clone()
    };
    let sweep = cfg.sweep.clone().unwrap_or(if cfg.penalty.kind == PenaltyKind::None {
        SweepConfig::Degree {
            degrees: (0..=9).collect(),
        }
    } else {
        SweepConfig::Lambda
    });
    match sweep {
        SweepConfig::Degree { degrees } => {
            if degrees.is_empty() {
                return Err(CliError::Config("sweep: no degrees given".into()));
            }
            let d = Dataset::new(x.clone(), data.labels().clone(), data.feature_names().to_vec())?;
            let mut rows = Vec::with_capacity(degrees.len());
            for &k in &degrees {
                let spec = BasisSpec::polynomial(x.cols(), k)?;
                let full = basis::fit_lbfm_interpolating(&spec, &x, &y)?;
                let phi = basis::expand(&spec, &x)?;
                let cv = cv::cross_validate(
                    &d,
                    &plan,
                    |tr| basis::fit_lbfm_interpolating(&spec, tr.x(), cv_labels(tr)?),
                    |p, va| {
                        let yhat = basis::predict_lbfm(&spec, p, va.x())?;
                        metrics::rmse(&yhat, cv_labels(va)?)
                    },
                )?;
                rows.push(DegreeRow {
                    degree: k,
                    train_rmse: rmse_of(&full.theta, &phi, &y)?,
                    max_abs_coef: full.theta.norm_inf(),
                    cv,
                });
            }
            let best = rows
                .iter()
                .enumerate()
                .fold(0, |b, (i, r)| if r.cv.mean < rows[b].cv.mean { i } else { b });
            Ok(SweepResult::Degree {
                split,
                best_degree: rows[best].degree,
                rows,
            })
        }
        SweepConfig::Lambda => {
            if cfg.penalty.kind == PenaltyKind::None {
                return Err(CliError::Config("sweep: a lambda sweep needs an l1 or l2 penalty".into()));
            }
            let (design, coef_names) = match cfg.model.kind {
                ModelChoice::Linear => (
                    x.with_bias(),
                    std::iter::once("bias".to_string())
                        .chain(data.feature_names().iter().cloned())
                        .collect::<Vec<_>>(),
                ),
                ModelChoice::Lbfm => {
                    let mut rng = Rng::new(seed);
                    let spec = build_basis(cfg.model.basis.as_ref().expect("validated"), &x, &mut rng)?;
                    let phi = basis::expand(&spec, &x)?;
                    let names = (0..phi.cols())
                        .map(|i| if i == 0 { "bias".into() } else { format!("phi{i}") })
                        .collect();
                    (phi, names)
                }
                other => {
                    return Err(CliError::Config(format!(
                        "sweep: lambda paths are for linear and lbfm models, not {}",
                        other.name()
                    )))
                }
            };
            let design = if cfg.penalty.standardize {
                standardize_design(&design)?
            } else {
                design
            };
            let grid = match &cfg.penalty.grid {
                Some(g) => g.clone(),
                None => regpath::default_lambda_grid(&design, &y)?,
            };
            let opts = PathOptions {
                standardize: false,
                lasso: LassoConfig::default(),
            };
            let path = regpath::regularization_path(&design, &y, cfg.penalty.kind, &grid, &opts)?;
            let dd = Dataset::unnamed(design.clone(), Labels::Real(Vector::new(y.clone())?))?;
            let kind = cfg.penalty.kind;
            let sel = cv::select_hyperparameter(
                &dd,
                &grid,
                &plan,
                |&lambda: &f64, tr: &Dataset| {
                    let ytr = cv_labels(tr)?;
                    Ok::<Vector, CoreError>(match kind {
                        PenaltyKind::L1 => regpath::lasso_cd(tr.x(), ytr, lambda, &opts.lasso, None)?.params.theta,
                        _ => regpath::ridge_unpenalized_bias(tr.x(), ytr, lambda)?,
                    })
                },
                |theta: &Vector, va: &Dataset| metrics::rmse(&va.x().matvec(theta)?, cv_labels(va)?),
            )?;
            let scores = grid
                .iter()
                .zip(sel.table)
                .map(|(&lambda, cv)| LambdaRow { lambda, cv })
                .collect();
            Ok(SweepResult::Lambda {
                split,
                penalty: kind,
                coef_names,
                best_lambda: sel.best,
                path,
                scores,
            })
        }
    }
}

/// Writes `cv_scores.csv`, `sweep.json`, and `path.csv` or `degree_fit.csv`.
pub fn write_sweep(res: &SweepResult, dir: &Path) -> Result<Vec<PathBuf>> {
    let scores = dir.join("cv_scores.csv");
    let summary = dir.join("sweep.json");
    let mut written = vec![scores.clone(), summary.clone()];
    match res {
        SweepResult::Degree { rows, .. } => {
            let names: Vec<String> = rows.iter().map(|r| format!("degree={}", r.degree)).collect();
            let table: Vec<CvScores> = rows.iter().map(|r| r.cv.clone()).collect();
            io::save_scores_csv(&names, &table, &scores)?;
            let fit_rows: Vec<Vec<String>> = rows
                .iter()
                .map(|r| {
                    vec![
                        r.degree.to_string(),
                        crate::json::format_f64(r.train_rmse),
                        crate::json::format_f64(r.max_abs_coef),
                    ]
                })
                .collect();
            let p = dir.join("degree_fit.csv");
            io::save_table_csv(&["degree", "train_rmse", "max_abs_coef"], &fit_rows, &p)?;
            written.push(p);
        }
        SweepResult::Lambda {
            path,
            scores: s,
            coef_names,
            ..
        } => {
            let names: Vec<String> = s
                .iter()
                .map(|r| format!("lambda={}", crate::json::format_f64(r.lambda)))
                .collect();
            let table: Vec<CvScores> = s.iter().map(|r| r.cv.clone()).collect();
            io::save_scores_csv(&names, &table, &scores)?;
            let p = dir.join("path.csv");
            io::save_path_csv(path, coef_names, &p)?;
            written.push(p);
        }
    }
    io::save_json(res, &summary)?;
    Ok(written)
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct GradcheckSummary {
    pub seed: u64,
    pub passed: bool,
    pub reports: Vec<GradcheckReport>,
}

pub fn gradcheck(seed: u64, draws: usize) -> Result<GradcheckSummary> {
    let reports = gradcheck::run_suite(seed, draws)?;
    Ok(GradcheckSummary {
        seed,
        passed: reports.iter().all(|r| r.passed),
        reports,
    })
}
