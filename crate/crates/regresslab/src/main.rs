use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use regresslab::commands::{self, FitResult, SweepResult};
use regresslab::config::{
    effective_seed, DataConfig, GeneratorConfig, Method, ModelChoice, ModelConfig, RunConfig, SweepConfig,
    DEFAULT_SEED,
};
use regresslab::io::{self, LabelKind};
use regresslab::json::{self, format_f64};
use regresslab::{CliError, Result};
use regresslab_core::cv::SplitKind;
use regresslab_core::regpath::PenaltyKind;

#[derive(Parser)]
#[command(name = "regresslab", version, about = "Regression, classification and kernel models from CSV data")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum SynthKind {
    Rental,
    Sine,
    TwoGaussians,
    SparseLinear,
}

#[derive(Clone, Copy, ValueEnum)]
enum PenaltyArg {
    L1,
    L2,
}

#[derive(Subcommand)]
enum Command {
    /// Write a synthetic dataset as CSV (label column `y`).
    Synth {
        #[arg(long, value_enum)]
        kind: SynthKind,
        /// Rows (rows per class for two-gaussians).
        #[arg(long)]
        m: Option<usize>,
        /// Label noise standard deviation.
        #[arg(long)]
        noise: Option<f64>,
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long)]
        out: PathBuf,
        /// Write class labels starting at 1.
        #[arg(long)]
        one_based: bool,
    },
    /// Fit a model and report its parameters.
    Fit {
        #[arg(long)]
        config: Option<PathBuf>,
        #[arg(long)]
        data: Option<PathBuf>,
        #[arg(long)]
        label: Option<String>,
        #[arg(long)]
        classes: bool,
        #[arg(long)]
        one_based: bool,
        /// linear, logistic, softmax, lbfm, kernel-ridge or mlp.
        #[arg(long)]
        model: Option<String>,
        #[arg(long, conflicts_with = "gd")]
        closed_form: bool,
        #[arg(long)]
        gd: bool,
        #[arg(long)]
        standardize: bool,
        /// Where to write model.json, report.json and trace.csv.
        #[arg(long)]
        out_dir: Option<PathBuf>,
    },
    /// Evaluate a saved model on a CSV file.
    Eval {
        #[arg(long)]
        model: PathBuf,
        #[arg(long)]
        data: PathBuf,
        #[arg(long)]
        one_based: bool,
        /// Write the metrics here instead of standard output.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Polynomial degree sweep or regularization path with cross-validation.
    Sweep {
        #[arg(long)]
        config: Option<PathBuf>,
        #[arg(long)]
        data: Option<PathBuf>,
        #[arg(long)]
        label: Option<String>,
        #[arg(long, value_enum)]
        penalty: Option<PenaltyArg>,
        /// Comma-separated polynomial degrees.
        #[arg(long, value_delimiter = ',')]
        degrees: Option<Vec<u32>>,
        /// loocv, kfold:K or holdout:FRAC.
        #[arg(long)]
        cv: Option<String>,
        #[arg(long)]
        out_dir: Option<PathBuf>,
    },
    /// Compare analytic gradients with finite differences.
    Gradcheck {
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long, default_value_t = 500)]
        draws: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Print the version.
    Version,
}

fn flag_seed(flag: Option<u64>) -> Result<u64> {
    match flag {
        Some(s) => Ok(s),
        None => effective_seed(DEFAULT_SEED),
    }
}

fn parse_cv(s: &str) -> Result<SplitKind> {
    let bad = || CliError::Config(format!("--cv '{s}': expected loocv, kfold:K or holdout:FRAC"));
    match s.split_once(':') {
        None if s == "loocv" => Ok(SplitKind::Loocv),
        Some(("kfold", k)) => Ok(SplitKind::Kfold {
            k: k.parse().map_err(|_| bad())?,
        }),
        Some(("holdout", f)) => Ok(SplitKind::Holdout {
            frac: f.parse().map_err(|_| bad())?,
        }),
        _ => Err(bad()),
    }
}

fn base_config(config: Option<&Path>, model: Option<&str>, default_model: Option<ModelChoice>) -> Result<RunConfig> {
    let mut cfg = match config {
        Some(p) => RunConfig::load(p)?,
        None => {
            let kind = match model {
                Some(m) => ModelChoice::parse(m)?,
                None => default_model.ok_or_else(|| CliError::Config("give --config or --model".into()))?,
            };
            RunConfig::new(DataConfig::default(), ModelConfig::of_kind(kind))
        }
    };
    if let Some(m) = model {
        cfg.model.kind = ModelChoice::parse(m)?;
    }
    Ok(cfg)
}

fn set_data(cfg: &mut RunConfig, data: Option<PathBuf>, label: Option<String>) {
    if let Some(p) = data {
        cfg.data.path = Some(p);
        cfg.data.generator = None;
    }
    if let Some(l) = label {
        cfg.data.label = l;
    }
}

fn print_fit(res: &FitResult) {
    let r = &res.report;
    println!(
        "model {} ({}), {} rows, final loss {}",
        r.model,
        match r.method {
            Method::ClosedForm => "closed-form",
            Method::Gd => "gd",
        },
        r.rows,
        format_f64(r.final_loss)
    );
    if let (Some(it), Some(stop)) = (r.iterations, r.stop) {
        println!("iterations {it}, stopped by {stop:?}");
    }
    for c in &r.coefficients {
        println!("{} = {}", c.name, format_f64(c.value));
    }
}

fn print_sweep(res: &SweepResult) {
    match res {
        SweepResult::Degree { best_degree, rows, .. } => {
            for r in rows {
                println!(
                    "degree {}: train rmse {}, cv rmse {}",
                    r.degree,
                    format_f64(r.train_rmse),
                    format_f64(r.cv.mean)
                );
            }
            println!("best degree {best_degree}");
        }
        SweepResult::Lambda { best_lambda, path, .. } => {
            println!("{} path points", path.len());
            println!("best lambda {}", format_f64(*best_lambda));
        }
    }
}

fn run(cmd: Command) -> Result<()> {
    match cmd {
        Command::Synth {
            kind,
            m,
            noise,
            seed,
            out,
            one_based,
        } => {
            let g = match kind {
                SynthKind::Rental => GeneratorConfig::Rental,
                SynthKind::Sine => GeneratorConfig::Sine {
                    m: m.unwrap_or(10),
                    noise_std: noise.unwrap_or(0.2),
                },
                SynthKind::TwoGaussians => GeneratorConfig::TwoGaussians {
                    m_per_class: m.unwrap_or(1000),
                    mu0: vec![-1.0, 0.0],
                    mu1: vec![1.0, 0.0],
                    sigma: vec![vec![1.0, 0.0], vec![0.0, 1.0]],
                },
                SynthKind::SparseLinear => GeneratorConfig::SparseLinear {
                    m: m.unwrap_or(100),
                    theta: vec![3.0, -2.0, 1.5, 0.0, 0.0, 0.0, 0.0, 0.0],
                    bias: 0.5,
                    noise_std: noise.unwrap_or(0.1),
                },
            };
            let d = commands::generate(&g, flag_seed(seed)?)?;
            io::save_csv(&d, &out, "y", one_based)?;
            println!("wrote {} rows to {}", d.rows(), out.display());
        }
        Command::Fit {
            config,
            data,
            label,
            classes,
            one_based,
            model,
            closed_form,
            gd,
            standardize,
            out_dir,
        } => {
            let mut cfg = base_config(config.as_deref(), model.as_deref(), None)?;
            set_data(&mut cfg, data, label);
            if classes {
                cfg.data.label_kind = LabelKind::Class;
            }
            cfg.data.one_based |= one_based;
            cfg.data.standardize |= standardize;
            if closed_form {
                cfg.training.method = Some(Method::ClosedForm);
            } else if gd {
                cfg.training.method = Some(Method::Gd);
            }
            if out_dir.is_some() {
                cfg.output.dir = out_dir;
            }
            let res = commands::fit(&cfg)?;
            print_fit(&res);
            if let Some(dir) = &cfg.output.dir {
                commands::write_fit(&res, dir)?;
            }
        }
        Command::Eval {
            model,
            data,
            one_based,
            out,
        } => {
            let ev = commands::eval(&model, &data, one_based)?;
            match out {
                Some(p) => io::save_json(&ev, &p)?,
                None => print!("{}", json::to_string(&ev)?),
            }
        }
        Command::Sweep {
            config,
            data,
            label,
            penalty,
            degrees,
            cv,
            out_dir,
        } => {
            let mut cfg = base_config(config.as_deref(), None, Some(ModelChoice::Linear))?;
            set_data(&mut cfg, data, label);
            if let Some(p) = penalty {
                cfg.penalty.kind = match p {
                    PenaltyArg::L1 => PenaltyKind::L1,
                    PenaltyArg::L2 => PenaltyKind::L2,
                };
                cfg.sweep = Some(SweepConfig::Lambda);
            }
            if let Some(d) = degrees {
                cfg.sweep = Some(SweepConfig::Degree { degrees: d });
            }
            if let Some(s) = cv {
                cfg.cv = Some(parse_cv(&s)?);
            }
            if out_dir.is_some() {
                cfg.output.dir = out_dir;
            }
            let res = commands::sweep(&cfg)?;
            print_sweep(&res);
            let dir = cfg.output.dir.clone().unwrap_or_else(|| PathBuf::from("."));
            commands::write_sweep(&res, &dir)?;
        }
        Command::Gradcheck { seed, draws, out } => {
            let summary = commands::gradcheck(flag_seed(seed)?, draws)?;
            for r in &summary.reports {
                println!(
                    "{}: max relative error {} over {} draws: {}",
                    r.model,
                    format_f64(r.max_rel_error),
                    r.draws,
                    if r.passed { "ok" } else { "FAILED" }
                );
            }
            if let Some(p) = out {
                io::save_json(&summary, &p)?;
            }
            if !summary.passed {
                let failed: Vec<&str> = summary
                    .reports
                    .iter()
                    .filter(|r| !r.passed)
                    .map(|r| r.model.as_str())
                    .collect();
                return Err(CliError::GradcheckFailed(failed.join(", ")));
            }
        }
        Command::Version => println!("regresslab {}", env!("CARGO_PKG_VERSION")),
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            if !e.use_stderr() {
                let _ = e.print();
                return ExitCode::SUCCESS;
            }
            let text = e.to_string();
            eprintln!("{}", text.lines().next().unwrap_or("invalid arguments"));
            return ExitCode::from(2);
        }
    };
    match run(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
