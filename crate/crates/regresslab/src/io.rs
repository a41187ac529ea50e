//! CSV datasets and tabular reports.

use std::fs;
use std::path::Path;

use regresslab_core::dataset::{Dataset, Labels};
use regresslab_core::optim::TraceRecord;
use regresslab_core::regpath::PathPoint;
use regresslab_core::{Matrix, Vector};
use serde::{Deserialize, Serialize};

use crate::error::{CliError, Result};
use crate::json::format_f64;

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum LabelKind {
    #[default]
    Real,
    Class,
}

/// How to read the label column of a CSV file.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LabelSpec {
    pub column: String,
    pub kind: LabelKind,
    /// Class labels in the file start at 1.
    pub one_based: bool,
}

impl LabelSpec {
    pub fn real(column: &str) -> Self {
        Self {
            column: column.into(),
            kind: LabelKind::Real,
            one_based: false,
        }
    }

    pub fn class(column: &str) -> Self {
        Self {
            column: column.into(),
            kind: LabelKind::Class,
            one_based: false,
        }
    }
}

fn parse_error(path: &Path, row: usize, column: &str, message: impl Into<String>) -> CliError {
    CliError::Parse {
        path: path.to_path_buf(),
        row,
        column: column.into(),
        message: message.into(),
    }
}

fn parse_class(cell: &str, one_based: bool) -> std::result::Result<usize, String> {
    let v: f64 = cell.parse().map_err(|_| format!("'{cell}' is not a number"))?;
    if !(v >= 0.0) || v.fract() != 0.0 || v > u32::MAX as f64 {
        return Err(format!("'{cell}' is not a non-negative integer class label"));
    }
    let id = v as usize;
    if one_based {
        id.checked_sub(1).ok_or_else(|| "class label 0 in a 1-based file".to_string())
    } else {
        Ok(id)
    }
}

/// Reads a headered CSV; every column except the label becomes a feature,
/// in header order. Rows are numbered from 1 with the header as row 1.
pub fn load_csv(path: &Path, label: &LabelSpec) -> Result<Dataset> {
    let text = fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
    if text.trim().is_empty() {
        return Err(CliError::Core(regresslab_core::Error::EmptyInput));
    }
    let mut rdr = csv::ReaderBuilder::new()
        .has_headers(true)
        .trim(csv::Trim::All)
        .from_reader(text.as_bytes());
    let headers: Vec<String> = rdr.headers()?.iter().map(str::to_string).collect();
    let label_idx = headers
        .iter()
        .position(|h| *h == label.column)
        .ok_or_else(|| {
            CliError::Schema(format!(
                "{}: label column '{}' not found (columns: {})",
                path.display(),
                label.column,
                headers.join(", ")
            ))
        })?;
    let names: Vec<String> = headers
        .iter()
        .enumerate()
        .filter(|(i, _)| *i != label_idx)
        .map(|(_, h)| h.clone())
        .collect();
    let mut data = Vec::new();
    let mut real = Vec::new();
    let mut class = Vec::new();
    let mut rows = 0;
    for (r, rec) in rdr.records().enumerate() {
        let rec = rec?;
        let row = r + 2;
        if rec.len() != headers.len() {
            return Err(parse_error(
                path,
                row,
                "*",
                format!("expected {} fields, found {}", headers.len(), rec.len()),
            ));
        }
        for (c, cell) in rec.iter().enumerate() {
            if c == label_idx {
                match label.kind {
                    LabelKind::Real => real.push(parse_real(path, row, &headers[c], cell)?),
                    LabelKind::Class => class.push(
                        parse_class(cell, label.one_based)
                            .map_err(|m| parse_error(path, row, &headers[c], m))?,
                    ),
                }
            } else {
                data.push(parse_real(path, row, &headers[c], cell)?);
            }
        }
        rows += 1;
    }
    if rows == 0 {
        return Err(CliError::Core(regresslab_core::Error::EmptyInput));
    }
    let x = Matrix::new(rows, names.len(), data)?;
    let labels = match label.kind {
        LabelKind::Real => Labels::Real(Vector::new(real)?),
        LabelKind::Class => Labels::Class(class),
    };
    Ok(Dataset::new(x, labels, names)?)
}

fn parse_real(path: &Path, row: usize, column: &str, cell: &str) -> Result<f64> {
    match cell.parse::<f64>() {
        Ok(v) if v.is_finite() => Ok(v),
        Ok(_) => Err(parse_error(path, row, column, format!("'{cell}' is not finite"))),
        Err(_) => Err(parse_error(path, row, column, format!("'{cell}' is not a number"))),
    }
}

fn write_file(path: &Path, contents: &str) -> Result<()> {
    if let Some(dir) = path.parent() {
        if !dir.as_os_str().is_empty() {
            fs::create_dir_all(dir).map_err(|e| CliError::io(dir, e))?;
        }
    }
    fs::write(path, contents).map_err(|e| CliError::io(path, e))
}

fn csv_text(header: &[String], rows: &[Vec<String>]) -> Result<String> {
    let mut w = csv::WriterBuilder::new().from_writer(Vec::new());
    w.write_record(header)?;
    for r in rows {
        w.write_record(r)?;
    }
    let bytes = w
        .into_inner()
        .map_err(|e| CliError::Schema(format!("csv buffer: {e}")))?;
    Ok(String::from_utf8(bytes).expect("csv output is UTF-8"))
}

/// Writes features then the label column; class labels are written 0-based
/// unless `one_based` is set.
pub fn save_csv(d: &Dataset, path: &Path, label_column: &str, one_based: bool) -> Result<()> {
    let raw = if d.is_bias_augmented() {
        return Err(CliError::Schema("refusing to save a bias-augmented dataset".into()));
    } else {
        d.x()
    };
    let mut header: Vec<String> = d.feature_names().to_vec();
    header.push(label_column.to_string());
    let rows: Vec<Vec<String>> = (0..d.rows())
        .map(|i| {
            let mut r: Vec<String> = raw.row(i).iter().map(|v| format_f64(*v)).collect();
            r.push(match d.labels() {
                Labels::Real(y) => format_f64(y[i]),
                Labels::Class(c) => (c[i] + usize::from(one_based)).to_string(),
            });
            r
        })
        .collect();
    write_file(path, &csv_text(&header, &rows)?)
}

/// `t, loss, eta, grad_inf_norm`
pub fn save_trace_csv(trace: &TraceRecord, path: &Path) -> Result<()> {
    let header: Vec<String> = ["t", "loss", "eta", "grad_inf_norm"].map(String::from).to_vec();
    let rows: Vec<Vec<String>> = trace
        .steps
        .iter()
        .map(|s| {
            vec![
                s.t.to_string(),
                format_f64(s.loss),
                format_f64(s.eta),
                format_f64(s.grad_inf_norm),
            ]
        })
        .collect();
    write_file(path, &csv_text(&header, &rows)?)
}

/// `lambda, <one column per coefficient>, nonzero_count, train_mse`
pub fn save_path_csv(points: &[PathPoint], coef_names: &[String], path: &Path) -> Result<()> {
    let mut header = vec!["lambda".to_string()];
    header.extend(coef_names.iter().cloned());
    header.push("nonzero_count".into());
    header.push("train_mse".into());
    let rows: Vec<Vec<String>> = points
        .iter()
        .map(|p| {
            let mut r = vec![format_f64(p.lambda)];
            r.extend(p.theta.iter().map(|v| format_f64(*v)));
            r.push(p.nonzero_count.to_string());
            r.push(format_f64(p.train_mse));
            r
        })
        .collect();
    write_file(path, &csv_text(&header, &rows)?)
}

/// `candidate, fold_1..fold_k, mean`
pub fn save_scores_csv(
    candidates: &[String],
    table: &[regresslab_core::cv::CvScores],
    path: &Path,
) -> Result<()> {
    let folds = table.first().map_or(0, |s| s.folds.len());
    let mut header = vec!["candidate".to_string()];
    header.extend((1..=folds).map(|f| format!("fold_{f}")));
    header.push("mean".into());
    let rows: Vec<Vec<String>> = candidates
        .iter()
        .zip(table)
        .map(|(c, s)| {
            let mut r = vec![c.clone()];
            r.extend(s.folds.iter().map(|v| format_f64(*v)));
            r.push(format_f64(s.mean));
            r
        })
        .collect();
    write_file(path, &csv_text(&header, &rows)?)
}

/// Generic numeric table.
pub fn save_table_csv(header: &[&str], rows: &[Vec<String>], path: &Path) -> Result<()> {
    let header: Vec<String> = header.iter().map(|s| s.to_string()).collect();
    write_file(path, &csv_text(&header, rows)?)
}

pub fn save_json<T: Serialize + ?Sized>(value: &T, path: &Path) -> Result<()> {
    write_file(path, &crate::json::to_string(value)?)
}
