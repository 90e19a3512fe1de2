use rayon::prelude::*;

use super::{check_inputs, Metric};
use crate::corpus::tokenize;
use crate::error::Result;

/// (positions where hypothesis and reference tokens agree, reference tokens).
pub fn sentence_counts(hyp: &str, reference: &str) -> (u64, u64) {
    let h = tokenize(hyp);
    let r = tokenize(reference);
    let hits = h.iter().zip(&r).filter(|(a, b)| a == b).count();
    (hits as u64, r.len() as u64)
}

/// Positional token matches over total reference tokens. Extra hypothesis
/// tokens are ignored; missing ones count as wrong.
pub fn sequence_accuracy(hyps: &[String], refs: &[String]) -> Result<f64> {
    check_inputs(hyps, refs)?;
    let (hits, total) = hyps
        .par_iter()
        .zip(refs.par_iter())
        .map(|(h, r)| sentence_counts(h, r))
        .reduce(|| (0, 0), |a, b| (a.0 + b.0, a.1 + b.1));
    Ok(if total == 0 { 1.0 } else { hits as f64 / total as f64 })
}

pub struct SeqAcc;

impl Metric for SeqAcc {
    fn name(&self) -> &'static str {
        "seqacc"
    }

    fn score(&self, hyps: &[String], refs: &[String]) -> Result<f64> {
        sequence_accuracy(hyps, refs)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn acc(h: &str, r: &str) -> f64 {
        sequence_accuracy(&[h.to_string()], &[r.to_string()]).unwrap()
    }

    #[test]
    fn worked_examples() {
        assert_eq!(acc("a b c", "a b c"), 1.0);
        assert!((acc("a x c", "a b c") - 2.0 / 3.0).abs() < 1e-12);
        assert!((acc("a b", "a b c") - 2.0 / 3.0).abs() < 1e-12);
        assert_eq!(acc("a b c d", "a b c"), 1.0);
    }
}
