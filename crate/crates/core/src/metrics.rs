//! Regression and classification error metrics.

use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::linalg::Matrix;
use crate::math;

/// Probabilities are clamped to `[PROB_CLAMP, 1 - PROB_CLAMP]` before taking logs.
pub const PROB_CLAMP: f64 = 1e-12;

#[derive(Clone, Copy, Debug, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct RegressionMetrics {
    pub mse: f64,
    pub rmse: f64,
    pub mae: f64,
    /// `None` when some target is zero.
    pub mape: Option<f64>,
}

pub fn regression_metrics(yhat: &[f64], y: &[f64]) -> Result<RegressionMetrics> {
    if yhat.len() != y.len() {
        return Err(Error::shape("regression_metrics", y.len(), yhat.len()));
    }
    if y.is_empty() {
        return Err(Error::EmptyInput);
    }
    let m = y.len() as f64;
    let mut se = 0.0;
    let mut ae = 0.0;
    let mut ape = 0.0;
    let mut mape_ok = true;
    for (p, t) in yhat.iter().zip(y) {
        let e = p - t;
        se += e * e;
        ae += math::abs(e);
        if *t == 0.0 {
            mape_ok = false;
        } else {
            ape += math::abs(e / t);
        }
    }
    let mse = se / m;
    Ok(RegressionMetrics {
        mse,
        rmse: math::sqrt(mse),
        mae: ae / m,
        mape: mape_ok.then(|| ape / m),
    })
}

/// Root mean squared error; lengths must agree.
pub fn rmse(yhat: &[f64], y: &[f64]) -> Result<f64> {
    regression_metrics(yhat, y).map(|r| r.rmse)
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct ConfusionCounts {
    pub tp: usize,
    pub fp: usize,
    pub tn: usize,
    #[cfg_attr(feature = "serde", serde(rename = "fn"))]
    pub fn_: usize,
}

#[derive(Clone, Copy, Debug, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct ClassificationMetrics {
    pub accuracy: f64,
    pub precision: f64,
    pub recall: f64,
    pub f1: f64,
    pub counts: ConfusionCounts,
    /// Set when precision was 0/0 and reported as 0.
    pub precision_degenerate: bool,
    pub recall_degenerate: bool,
    pub f1_degenerate: bool,
}

fn ratio(num: f64, den: f64) -> (f64, bool) {
    if den == 0.0 {
        (0.0, true)
    } else {
        (num / den, false)
    }
}

/// Accuracy over all classes; precision, recall and F1 for `positive` versus the rest.
pub fn classification_metrics(
    yhat: &[usize],
    y: &[usize],
    positive: usize,
) -> Result<ClassificationMetrics> {
    if yhat.len() != y.len() {
        return Err(Error::shape("classification_metrics", y.len(), yhat.len()));
    }
    if y.is_empty() {
        return Err(Error::EmptyInput);
    }
    let mut c = ConfusionCounts::default();
    let mut errors = 0usize;
    for (&p, &t) in yhat.iter().zip(y) {
        if p != t {
            errors += 1;
        }
        match (p == positive, t == positive) {
            (true, true) => c.tp += 1,
            (true, false) => c.fp += 1,
            (false, true) => c.fn_ += 1,
            (false, false) => c.tn += 1,
        }
    }
    let (precision, pd) = ratio(c.tp as f64, (c.tp + c.fp) as f64);
    let (recall, rd) = ratio(c.tp as f64, (c.tp + c.fn_) as f64);
    let (f1, fd) = ratio(2.0 * precision * recall, precision + recall);
    Ok(ClassificationMetrics {
        accuracy: 1.0 - errors as f64 / y.len() as f64,
        precision,
        recall,
        f1,
        counts: c,
        precision_degenerate: pd,
        recall_degenerate: rd,
        f1_degenerate: fd,
    })
}

pub(crate) fn clamp_prob(p: f64) -> f64 {
    p.clamp(PROB_CLAMP, 1.0 - PROB_CLAMP)
}

/// Mean over rows of `-Σ_k y_k ln ŷ_k` with clamped probabilities.
pub fn cross_entropy(yhat_prob: &Matrix, y_onehot: &Matrix) -> Result<f64> {
    if yhat_prob.rows() != y_onehot.rows() {
        return Err(Error::shape("cross_entropy", y_onehot.rows(), yhat_prob.rows()));
    }
    if yhat_prob.cols() != y_onehot.cols() {
        return Err(Error::shape("cross_entropy", y_onehot.cols(), yhat_prob.cols()));
    }
    if y_onehot.rows() == 0 {
        return Err(Error::EmptyInput);
    }
    let mut total = 0.0;
    for (p, t) in yhat_prob.as_slice().iter().zip(y_onehot.as_slice()) {
        if *t != 0.0 {
            total -= t * math::ln(clamp_prob(*p));
        }
    }
    Ok(total / y_onehot.rows() as f64)
}

/// Binary cross-entropy `-(y ln p + (1-y) ln(1-p))` for a soft target `y`.
pub fn binary_cross_entropy(y: f64, p: f64) -> f64 {
    let p = clamp_prob(p);
    let mut s = 0.0;
    if y != 0.0 {
        s -= y * math::ln(p);
    }
    if y != 1.0 {
        s -= (1.0 - y) * math::ln(1.0 - p);
    }
    s
}

/// Entropy of a Bernoulli(`p`) variable in nats.
pub fn bernoulli_entropy(p: f64) -> f64 {
    binary_cross_entropy(p, p)
}

/// `KL(Bern(p) ‖ Bern(q))` in nats.
pub fn bernoulli_kl(p: f64, q: f64) -> f64 {
    let q = clamp_prob(q);
    let mut s = 0.0;
    if p != 0.0 {
        s += p * math::ln(p / q);
    }
    if p != 1.0 {
        s += (1.0 - p) * math::ln((1.0 - p) / (1.0 - q));
    }
    s
}

/// Area under the ROC curve as the Mann–Whitney statistic with average ranks for ties.
pub fn auc(scores: &[f64], labels: &[usize]) -> Result<f64> {
    if scores.len() != labels.len() {
        return Err(Error::shape("auc", labels.len(), scores.len()));
    }
    if labels.iter().any(|&l| l > 1) {
        return Err(Error::param("auc expects labels in {0, 1}"));
    }
    let n_pos = labels.iter().filter(|&&l| l == 1).count();
    let n_neg = labels.len() - n_pos;
    if n_pos == 0 || n_neg == 0 {
        return Err(Error::UndefinedMetric("auc needs both classes"));
    }
    let mut order: Vec<usize> = (0..scores.len()).collect();
    order.sort_by(|&a, &b| scores[a].total_cmp(&scores[b]));
    let mut ranks = alloc::vec![0.0; scores.len()];
    let mut i = 0;
    while i < order.len() {
        let mut j = i;
        while j + 1 < order.len() && scores[order[j + 1]] == scores[order[i]] {
            j += 1;
        }
        // 1-based ranks i+1..=j+1 share their average.
        let avg = (i + j) as f64 / 2.0 + 1.0;
        for &k in &order[i..=j] {
            ranks[k] = avg;
        }
        i = j + 1;
    }
    let rank_sum: f64 = labels
        .iter()
        .zip(&ranks)
        .filter(|(l, _)| **l == 1)
        .map(|(_, r)| r)
        .sum();
    let np = n_pos as f64;
    Ok((rank_sum - np * (np + 1.0) / 2.0) / (np * n_neg as f64))
}
