use rayon::prelude::*;

use super::model::LangIdModel;
use super::train::TestSet;
use crate::error::{Error, Result};

/// Scores at k = 1 and k = 2.
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct AtK {
    pub precision: f64,
    pub recall: f64,
    pub f1: f64,
}

impl AtK {
    fn from_hits(hits: u64, n: u64, k: usize) -> AtK {
        if n == 0 {
            return AtK::default();
        }
        let precision = hits as f64 / (k as f64 * n as f64);
        let recall = hits as f64 / n as f64;
        let f1 = if precision + recall > 0.0 {
            2.0 * precision * recall / (precision + recall)
        } else {
            0.0
        };
        AtK { precision, recall, f1 }
    }

    fn mean<'a>(items: impl Iterator<Item = &'a AtK>) -> AtK {
        let v: Vec<&AtK> = items.collect();
        if v.is_empty() {
            return AtK::default();
        }
        let n = v.len() as f64;
        AtK {
            precision: v.iter().map(|a| a.precision).sum::<f64>() / n,
            recall: v.iter().map(|a| a.recall).sum::<f64>() / n,
            f1: v.iter().map(|a| a.f1).sum::<f64>() / n,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct LabelScores {
    pub label: String,
    pub n: u64,
    pub at1: AtK,
    pub at2: AtK,
}

#[derive(Debug, Clone, PartialEq)]
pub struct LangIdEval {
    pub labels: Vec<String>,
    pub per_label: Vec<LabelScores>,
    /// Unweighted mean over labels with test examples.
    pub macro_at1: AtK,
    pub macro_at2: AtK,
    /// `confusion[gold][predicted]`, top-1 predictions.
    pub confusion: Vec<Vec<u64>>,
}

impl LangIdEval {
    /// Share of misclassifications with gold label in `group` that were
    /// predicted as another member of `group`. `None` without such errors.
    pub fn in_group_share(&self, group: &[&str]) -> Option<f64> {
        let idx: Vec<usize> = group
            .iter()
            .filter_map(|g| self.labels.iter().position(|l| l == g))
            .collect();
        let (mut inside, mut total) = (0u64, 0u64);
        for &g in &idx {
            for (p, &c) in self.confusion[g].iter().enumerate() {
                if p != g {
                    total += c;
                    if idx.contains(&p) {
                        inside += c;
                    }
                }
            }
        }
        (total > 0).then(|| inside as f64 / total as f64)
    }

    pub const CSV_HEADER: &'static str = "label,n,p@1,r@1,f@1,p@2,r@2,f@2";

    /// Per-label rows and a final `macro` row.
    pub fn to_csv(&self) -> String {
        let mut out = format!("{}\n", Self::CSV_HEADER);
        let row = |name: &str, n: u64, a: &AtK, b: &AtK| {
            format!(
                "{name},{n},{:.4},{:.4},{:.4},{:.4},{:.4},{:.4}\n",
                a.precision, a.recall, a.f1, b.precision, b.recall, b.f1
            )
        };
        for s in &self.per_label {
            out.push_str(&row(&s.label, s.n, &s.at1, &s.at2));
        }
        let total = self.per_label.iter().map(|s| s.n).sum();
        out.push_str(&row("macro", total, &self.macro_at1, &self.macro_at2));
        out
    }

    pub fn confusion_csv(&self) -> String {
        let mut out = format!("gold\\predicted,{}\n", self.labels.join(","));
        for (label, row) in self.labels.iter().zip(&self.confusion) {
            let cells: Vec<String> = row.iter().map(u64::to_string).collect();
            out.push_str(&format!("{label},{}\n", cells.join(",")));
        }
        out
    }
}

/// Precision, recall and F1 at k = 1, 2 per label, their macro averages,
/// and the top-1 confusion matrix.
pub fn eval_langid(model: &LangIdModel, test: &TestSet) -> Result<LangIdEval> {
    if test.examples.is_empty() {
        return Err(Error::InvalidInput("empty test set".into()));
    }
    let n_labels = model.labels().len();
    let k_max = n_labels.min(2);
    let golds: Vec<usize> = test
        .examples
        .iter()
        .map(|e| {
            model
                .label_index(&e.label)
                .ok_or_else(|| Error::InvalidInput(format!("label {} is not in the model", e.label)))
        })
        .collect::<Result<_>>()?;
    let predictions: Vec<Vec<String>> = test
        .examples
        .par_iter()
        .map(|e| Ok(model.predict_topk(&e.text, k_max)?.into_iter().map(|(l, _)| l).collect()))
        .collect::<Result<_>>()?;

    let mut n = vec![0u64; n_labels];
    let mut hits1 = vec![0u64; n_labels];
    let mut hits2 = vec![0u64; n_labels];
    let mut confusion = vec![vec![0u64; n_labels]; n_labels];
    for (&g, top) in golds.iter().zip(&predictions) {
        let gold = &model.labels()[g];
        n[g] += 1;
        let p1 = model.label_index(&top[0]).expect("model label");
        confusion[g][p1] += 1;
        if &top[0] == gold {
            hits1[g] += 1;
        }
        if top.iter().any(|l| l == gold) {
            hits2[g] += 1;
        }
    }
    let per_label: Vec<LabelScores> = (0..n_labels)
        .map(|i| LabelScores {
            label: model.labels()[i].clone(),
            n: n[i],
            at1: AtK::from_hits(hits1[i], n[i], 1),
            at2: AtK::from_hits(hits2[i], n[i], 2),
        })
        .collect();
    let present = || per_label.iter().filter(|s| s.n > 0);
    Ok(LangIdEval {
        labels: model.labels().to_vec(),
        macro_at1: AtK::mean(present().map(|s| &s.at1)),
        macro_at2: AtK::mean(present().map(|s| &s.at2)),
        per_label,
        confusion,
    })
}
