//! Run configuration files.

use std::path::{Path, PathBuf};

use regresslab_core::basis::{BasisKind, InitStrategy};
use regresslab_core::cv::SplitKind;
use regresslab_core::kernel::KernelSpec;
use regresslab_core::nn::{Activation, LossKind, OutputKind, DEFAULT_INIT_SCALE};
use regresslab_core::optim::GdConfig;
use regresslab_core::regpath::PenaltyKind;
use serde::{Deserialize, Serialize};

use crate::error::{CliError, Result};
use crate::io::LabelKind;

/// Environment variable that replaces the configured seed.
pub const SEED_ENV: &str = "REGRESSLAB_SEED";
pub const DEFAULT_SEED: u64 = 42;

fn default_seed() -> u64 {
    DEFAULT_SEED
}

fn default_label() -> String {
    "y".into()
}

fn default_true() -> bool {
    true
}

fn default_threshold() -> f64 {
    0.5
}

fn default_init_scale() -> f64 {
    DEFAULT_INIT_SCALE
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    #[serde(default = "default_seed")]
    pub seed: u64,
    pub data: DataConfig,
    pub model: ModelConfig,
    #[serde(default)]
    pub training: TrainingConfig,
    #[serde(default)]
    pub penalty: PenaltyConfig,
    #[serde(default)]
    pub cv: Option<SplitKind>,
    #[serde(default)]
    pub sweep: Option<SweepConfig>,
    #[serde(default)]
    pub output: OutputConfig,
}

/// Exactly one of `path` and `generator`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DataConfig {
    #[serde(default)]
    pub path: Option<PathBuf>,
    #[serde(default)]
    pub generator: Option<GeneratorConfig>,
    #[serde(default = "default_label")]
    pub label: String,
    #[serde(default)]
    pub label_kind: LabelKind,
    #[serde(default)]
    pub one_based: bool,
    /// Center and scale features before fitting; the scaling is saved with the model.
    #[serde(default)]
    pub standardize: bool,
}

impl Default for DataConfig {
    fn default() -> Self {
        Self {
            path: None,
            generator: None,
            label: default_label(),
            label_kind: LabelKind::Real,
            one_based: false,
            standardize: false,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case", deny_unknown_fields)]
pub enum GeneratorConfig {
    Rental,
    Sine {
        m: usize,
        noise_std: f64,
    },
    TwoGaussians {
        m_per_class: usize,
        mu0: Vec<f64>,
        mu1: Vec<f64>,
        /// Shared covariance, row by row.
        sigma: Vec<Vec<f64>>,
    },
    SparseLinear {
        m: usize,
        theta: Vec<f64>,
        bias: f64,
        noise_std: f64,
    },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ModelChoice {
    Linear,
    Logistic,
    Softmax,
    Lbfm,
    KernelRidge,
    Mlp,
}

impl ModelChoice {
    pub fn name(self) -> &'static str {
        match self {
            ModelChoice::Linear => "linear",
            ModelChoice::Logistic => "logistic",
            ModelChoice::Softmax => "softmax",
            ModelChoice::Lbfm => "lbfm",
            ModelChoice::KernelRidge => "kernel-ridge",
            ModelChoice::Mlp => "mlp",
        }
    }

    pub fn parse(s: &str) -> Result<Self> {
        serde_json::from_value(serde_json::Value::String(s.into()))
            .map_err(|_| CliError::Config(format!("unknown model kind '{s}'")))
    }

    pub fn needs_classes(self) -> bool {
        matches!(self, ModelChoice::Logistic | ModelChoice::Softmax)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ModelConfig {
    pub kind: ModelChoice,
    #[serde(default)]
    pub basis: Option<BasisConfig>,
    #[serde(default)]
    pub kernel: Option<KernelSpec>,
    #[serde(default)]
    pub net: Option<NetConfig>,
    /// Softmax class count; defaults to one more than the largest label.
    #[serde(default)]
    pub classes: Option<usize>,
    /// Logistic decision threshold.
    #[serde(default = "default_threshold")]
    pub threshold: f64,
}

impl ModelConfig {
    pub fn of_kind(kind: ModelChoice) -> Self {
        Self {
            kind,
            basis: None,
            kernel: None,
            net: None,
            classes: None,
            threshold: default_threshold(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BasisConfig {
    pub kind: BasisKind,
    /// Number of basis functions, or the degree for polynomials.
    pub count: usize,
    #[serde(default = "default_strategy")]
    pub strategy: InitStrategy,
    /// Replaces the default RBF width.
    #[serde(default)]
    pub width: Option<f64>,
}

fn default_strategy() -> InitStrategy {
    InitStrategy::Grid
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct NetConfig {
    pub hidden: Vec<usize>,
    pub activation: Activation,
    /// Defaults to linear for real labels and softmax for class labels.
    #[serde(default)]
    pub output: Option<OutputKind>,
    /// Defaults to squared error for a linear output and cross-entropy otherwise.
    #[serde(default)]
    pub loss: Option<LossKind>,
    #[serde(default = "default_init_scale")]
    pub init_scale: f64,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Method {
    ClosedForm,
    Gd,
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TrainingConfig {
    /// Defaults to `gd` for networks and `closed-form` otherwise.
    #[serde(default)]
    pub method: Option<Method>,
    /// Its `seed` is replaced by the run seed.
    #[serde(default)]
    pub gd: GdConfig,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PenaltyConfig {
    pub kind: PenaltyKind,
    #[serde(default)]
    pub lambda: Option<f64>,
    /// Strictly descending λ values for sweeps; defaults to a log grid from λ_max.
    #[serde(default)]
    pub grid: Option<Vec<f64>>,
    /// Standardize non-constant design columns before a λ sweep.
    #[serde(default = "default_true")]
    pub standardize: bool,
}

impl Default for PenaltyConfig {
    fn default() -> Self {
        Self {
            kind: PenaltyKind::None,
            lambda: None,
            grid: None,
            standardize: true,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase", deny_unknown_fields)]
pub enum SweepConfig {
    /// Polynomial degrees for a basis-function model.
    Degree { degrees: Vec<u32> },
    /// The penalty's λ grid.
    Lambda,
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OutputConfig {
    #[serde(default)]
    pub dir: Option<PathBuf>,
}

impl RunConfig {
    pub fn new(data: DataConfig, model: ModelConfig) -> Self {
        Self {
            seed: DEFAULT_SEED,
            data,
            model,
            training: TrainingConfig::default(),
            penalty: PenaltyConfig::default(),
            cv: None,
            sweep: None,
            output: OutputConfig::default(),
        }
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
        let mut cfg: RunConfig = serde_json::from_str(&text)
            .map_err(|e| CliError::Config(format!("{}: {e}", path.display())))?;
        // Relative data paths are taken relative to the config file.
        if let (Some(p), Some(dir)) = (cfg.data.path.as_mut(), path.parent()) {
            if p.is_relative() {
                *p = dir.join(&*p);
            }
        }
        Ok(cfg)
    }

    pub fn method(&self) -> Method {
        self.training.method.unwrap_or(match self.model.kind {
            ModelChoice::Mlp => Method::Gd,
            _ => Method::ClosedForm,
        })
    }

    /// Cross-field checks that serde cannot express.
    pub fn validate(&self) -> Result<()> {
        let bad = |m: &str| Err(CliError::Config(m.into()));
        match (&self.data.path, &self.data.generator) {
            (Some(_), Some(_)) => return bad("data: give either path or generator, not both"),
            (None, None) => return bad("data: one of path or generator is required"),
            _ => {}
        }
        let kind = self.model.kind;
        if kind.needs_classes()
            && self.data.label_kind != LabelKind::Class
            && !matches!(self.data.generator, Some(GeneratorConfig::TwoGaussians { .. }))
        {
            return bad("data: logistic and softmax models need label_kind = class");
        }
        if kind == ModelChoice::Lbfm && self.model.basis.is_none() {
            return bad("model: lbfm needs a basis section");
        }
        if kind == ModelChoice::KernelRidge && self.model.kernel.is_none() {
            return bad("model: kernel-ridge needs a kernel section");
        }
        if kind == ModelChoice::Mlp && self.model.net.is_none() {
            return bad("model: mlp needs a net section");
        }
        match (kind, self.method()) {
            (ModelChoice::Mlp, Method::ClosedForm) => return bad("training: mlp has no closed form"),
            (ModelChoice::KernelRidge, Method::Gd) => return bad("training: kernel-ridge is closed-form only"),
            _ => {}
        }
        if self.penalty.kind != PenaltyKind::None {
            if matches!(kind, ModelChoice::Mlp) {
                return bad("penalty: networks are trained without a penalty");
            }
            if kind.needs_classes() && self.method() == Method::ClosedForm {
                return bad("penalty: the closed-form classifier fit takes no penalty");
            }
            if kind == ModelChoice::KernelRidge && self.penalty.kind == PenaltyKind::L1 {
                return bad("penalty: kernel ridge takes an l2 penalty");
            }
        }
        if let Some(l) = self.penalty.lambda {
            if !(l >= 0.0) || !l.is_finite() {
                return bad("penalty: lambda must be finite and >= 0");
            }
        }
        self.training.gd.validate().map_err(|e| CliError::Config(format!("training.gd: {e}")))?;
        Ok(())
    }

    /// Penalty strength for a single fit.
    pub fn lambda(&self) -> Result<f64> {
        match (self.penalty.kind, self.penalty.lambda) {
            (PenaltyKind::None, _) => Ok(0.0),
            (_, Some(l)) => Ok(l),
            (_, None) => Err(CliError::Config("penalty: lambda is required for a fit".into())),
        }
    }
}

/// The seed after applying the environment override.
pub fn effective_seed(configured: u64) -> Result<u64> {
    match std::env::var(SEED_ENV) {
        Ok(v) => v
            .trim()
            .parse()
            .map_err(|_| CliError::Config(format!("{SEED_ENV}='{v}' is not an unsigned integer"))),
        Err(std::env::VarError::NotPresent) => Ok(configured),
        Err(e) => Err(CliError::Config(format!("{SEED_ENV}: {e}"))),
    }
}
