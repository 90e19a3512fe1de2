//! BLEU, chrF and sequence accuracy, and the copy-baseline evaluation.

mod bleu;
mod chrf;
mod seqacc;

use std::collections::BTreeMap;
use std::path::Path;

pub use bleu::{corpus_bleu, Bleu, BleuStats};
pub use chrf::{chrf_score, Chrf, ChrfStats};
pub use seqacc::{sequence_accuracy, SeqAcc};

use crate::error::{read_utf8, Error, Result};
use crate::noise::read_dataset_tsv;

/// A corpus-level score over aligned hypothesis and reference lists.
pub trait Metric: Send + Sync {
    fn name(&self) -> &'static str;
    fn score(&self, hyps: &[String], refs: &[String]) -> Result<f64>;
}

/// Metrics by name.
pub struct MetricRegistry {
    metrics: BTreeMap<&'static str, Box<dyn Metric>>,
}

impl MetricRegistry {
    pub fn empty() -> Self {
        MetricRegistry {
            metrics: BTreeMap::new(),
        }
    }

    pub fn register(&mut self, metric: Box<dyn Metric>) {
        self.metrics.insert(metric.name(), metric);
    }

    pub fn get(&self, name: &str) -> Result<&dyn Metric> {
        self.metrics.get(name).map(|m| m.as_ref()).ok_or_else(|| Error::Unknown {
            kind: "metric",
            name: name.to_string(),
        })
    }

    pub fn names(&self) -> impl Iterator<Item = &'static str> + '_ {
        self.metrics.keys().copied()
    }
}

impl Default for MetricRegistry {
    fn default() -> Self {
        let mut r = MetricRegistry::empty();
        r.register(Box::new(Bleu));
        r.register(Box::new(Chrf));
        r.register(Box::new(SeqAcc));
        r
    }
}

pub(crate) fn check_inputs(hyps: &[String], refs: &[String]) -> Result<()> {
    if hyps.len() != refs.len() {
        return Err(Error::InvalidInput(format!(
            "{} hypotheses but {} references",
            hyps.len(),
            refs.len()
        )));
    }
    if hyps.is_empty() {
        return Err(Error::InvalidInput("no sentences to score".into()));
    }
    Ok(())
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EvalReport {
    pub bleu: f64,
    pub chrf: f64,
    pub seq_acc: f64,
    pub n_pairs: usize,
}

impl EvalReport {
    pub fn compute(hyps: &[String], refs: &[String]) -> Result<Self> {
        Ok(EvalReport {
            bleu: corpus_bleu(hyps, refs)?,
            chrf: chrf_score(hyps, refs)?,
            seq_acc: sequence_accuracy(hyps, refs)?,
            n_pairs: hyps.len(),
        })
    }

    /// `bleu\tchrf\tseq_acc\tn_pairs`.
    pub fn to_tsv_line(&self) -> String {
        format!("{:.2}\t{:.2}\t{:.4}\t{}", self.bleu, self.chrf, self.seq_acc, self.n_pairs)
    }

    pub const CSV_HEADER: &'static str = "label,level,bleu,chrf,seq_acc,n_pairs";

    pub fn to_csv_row(&self, label: &str, level: &str) -> String {
        format!(
            "{label},{level},{:.4},{:.4},{:.6},{}",
            self.bleu, self.chrf, self.seq_acc, self.n_pairs
        )
    }
}

fn read_lines(path: &Path) -> Result<Vec<String>> {
    Ok(read_utf8(path)?.lines().map(str::to_string).collect())
}

/// Scores a hypothesis file against a reference file, line by line.
pub fn evaluate_files(hyp_file: &Path, ref_file: &Path) -> Result<EvalReport> {
    let hyps = read_lines(hyp_file)?;
    let refs = read_lines(ref_file)?;
    EvalReport::compute(&hyps, &refs)
}

/// The copy baseline: the noisy column of a dataset scored against its clean column.
pub fn evaluate_baseline(dataset: &Path) -> Result<EvalReport> {
    let text = read_utf8(dataset)?;
    let (hyps, refs): (Vec<String>, Vec<String>) =
        read_dataset_tsv(&text, &dataset.display().to_string())?.into_iter().unzip();
    EvalReport::compute(&hyps, &refs)
}

/// `baseline_mode` reads `hyp_file` as a `noisy\tclean` dataset and ignores `ref_file`.
pub fn evaluate(hyp_file: &Path, ref_file: Option<&Path>, baseline_mode: bool) -> Result<EvalReport> {
    if baseline_mode {
        return evaluate_baseline(hyp_file);
    }
    let ref_file = ref_file.ok_or_else(|| Error::Config("a reference file is required".into()))?;
    evaluate_files(hyp_file, ref_file)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn registry_lookup() {
        let r = MetricRegistry::default();
        assert_eq!(r.names().collect::<Vec<_>>(), vec!["bleu", "chrf", "seqacc"]);
        assert!(r.get("ter").is_err());
        let x = vec!["a b c d".to_string()];
        assert_eq!(r.get("seqacc").unwrap().score(&x, &x).unwrap(), 1.0);
    }

    #[test]
    fn perfect_report() {
        let x: Vec<String> = vec!["یەک دوو سێ چوار پێنج".into()];
        let rep = EvalReport::compute(&x, &x).unwrap();
        assert!((rep.bleu - 100.0).abs() < 1e-9 && (rep.chrf - 100.0).abs() < 1e-9);
        assert_eq!(rep.seq_acc, 1.0);
    }
}
