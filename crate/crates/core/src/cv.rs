//! Hold-out, k-fold and leave-one-out cross-validation.

use alloc::vec;
use alloc::vec::Vec;

use crate::dataset::Dataset;
use crate::error::{Error, Result};
use crate::math;
use crate::rng::Rng;

#[derive(Clone, Copy, Debug, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(tag = "kind", rename_all = "lowercase"))]
pub enum SplitKind {
    /// One validation block of `⌈frac·m⌉` rows.
    Holdout { frac: f64 },
    Kfold { k: usize },
    Loocv,
}

/// Assignment of every row to a fold.
///
/// For k-fold and LOOCV each fold serves once as the validation set. A
/// hold-out plan has two folds: fold 0 is the validation block and fold 1 is
/// only ever used for training.
#[derive(Clone, Debug, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct FoldPlan {
    pub assignment: Vec<usize>,
    pub k: usize,
    pub seed: u64,
    pub holdout: bool,
}

impl FoldPlan {
    pub fn rows(&self) -> usize {
        self.assignment.len()
    }

    /// Folds that are scored.
    pub fn validation_folds(&self) -> usize {
        if self.holdout {
            1
        } else {
            self.k
        }
    }

    /// `(training rows, validation rows)` for fold `f`, each ascending.
    pub fn fold(&self, f: usize) -> (Vec<usize>, Vec<usize>) {
        let mut train = Vec::new();
        let mut valid = Vec::new();
        for (i, &a) in self.assignment.iter().enumerate() {
            if a == f {
                valid.push(i);
            } else {
                train.push(i);
            }
        }
        (train, valid)
    }

    pub fn fold_sizes(&self) -> Vec<usize> {
        let mut s = vec![0; self.k];
        for &a in &self.assignment {
            s[a] += 1;
        }
        s
    }
}

/// Shuffles the rows with `seed`, then assigns contiguous blocks; the first
/// `m mod k` folds receive one extra row.
pub fn split(m: usize, kind: SplitKind, seed: u64) -> Result<FoldPlan> {
    if m == 0 {
        return Err(Error::EmptyInput);
    }
    let mut order: Vec<usize> = (0..m).collect();
    Rng::new(seed).shuffle(&mut order);
    let mut assignment = vec![0; m];
    let (k, holdout) = match kind {
        SplitKind::Holdout { frac } => {
            if !(frac > 0.0 && frac < 1.0) {
                return Err(Error::param("holdout fraction must lie in (0, 1)"));
            }
            let nv = math::ceil(frac * m as f64) as usize;
            if nv >= m {
                return Err(Error::param("holdout leaves no training rows"));
            }
            for &i in &order[nv..] {
                assignment[i] = 1;
            }
            (2, true)
        }
        SplitKind::Kfold { .. } | SplitKind::Loocv => {
            let k = match kind {
                SplitKind::Kfold { k } => k,
                _ => m,
            };
            if k < 2 || k > m {
                return Err(Error::param("k-fold needs 2 <= k <= m"));
            }
            let base = m / k;
            let extra = m % k;
            let mut pos = 0;
            for f in 0..k {
                let size = base + usize::from(f < extra);
                for &i in &order[pos..pos + size] {
                    assignment[i] = f;
                }
                pos += size;
            }
            (k, false)
        }
    };
    Ok(FoldPlan {
        assignment,
        k,
        seed,
        holdout,
    })
}

#[derive(Clone, Debug, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct CvScores {
    pub folds: Vec<f64>,
    pub mean: f64,
}

/// Fits on each fold's complement and scores on the fold.
pub fn cross_validate<M, F, S>(d: &Dataset, plan: &FoldPlan, mut fit: F, mut score: S) -> Result<CvScores>
where
    F: FnMut(&Dataset) -> Result<M>,
    S: FnMut(&M, &Dataset) -> Result<f64>,
{
    if plan.rows() != d.rows() {
        return Err(Error::shape("cross_validate", d.rows(), plan.rows()));
    }
    let mut folds = Vec::with_capacity(plan.validation_folds());
    for f in 0..plan.validation_folds() {
        let (train, valid) = plan.fold(f);
        if train.is_empty() {
            return Err(Error::param("fold has no training rows"));
        }
        if valid.is_empty() {
            return Err(Error::param("fold has no validation rows"));
        }
        let model = fit(&d.select_rows(&train))?;
        folds.push(score(&model, &d.select_rows(&valid))?);
    }
    let mean = folds.iter().sum::<f64>() / folds.len() as f64;
    Ok(CvScores { folds, mean })
}

#[derive(Clone, Debug, PartialEq)]
pub struct Selection<C> {
    pub best_index: usize,
    pub best: C,
    /// One row per candidate, in candidate order.
    pub table: Vec<CvScores>,
}

/// Cross-validates every candidate on the same plan and keeps the one with
/// the lowest mean score; ties go to the earliest candidate.
pub fn select_hyperparameter<C, M, F, S>(
    d: &Dataset,
    candidates: &[C],
    plan: &FoldPlan,
    mut fit: F,
    mut score: S,
) -> Result<Selection<C>>
where
    C: Clone,
    F: FnMut(&C, &Dataset) -> Result<M>,
    S: FnMut(&M, &Dataset) -> Result<f64>,
{
    if candidates.is_empty() {
        return Err(Error::param("no candidates to select from"));
    }
    let mut table = Vec::with_capacity(candidates.len());
    for c in candidates {
        table.push(cross_validate(d, plan, |tr| fit(c, tr), &mut score)?);
    }
    let mut best = 0;
    for (i, s) in table.iter().enumerate() {
        if s.mean < table[best].mean {
            best = i;
        }
    }
    Ok(Selection {
        best_index: best,
        best: candidates[best].clone(),
        table,
    })
}
