use std::collections::HashMap;

use rayon::prelude::*;

use super::{check_inputs, Metric};
use crate::corpus::tokenize;
use crate::error::Result;

const MAX_ORDER: usize = 4;

/// Corpus statistics: clipped matches and hypothesis n-gram totals per order,
/// plus hypothesis and reference lengths.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct BleuStats {
    pub correct: [u64; MAX_ORDER],
    pub total: [u64; MAX_ORDER],
    pub hyp_len: u64,
    pub ref_len: u64,
}

impl BleuStats {
    fn add(mut self, o: BleuStats) -> BleuStats {
        for n in 0..MAX_ORDER {
            self.correct[n] += o.correct[n];
            self.total[n] += o.total[n];
        }
        self.hyp_len += o.hyp_len;
        self.ref_len += o.ref_len;
        self
    }

    /// Geometric mean of precisions with exponential smoothing of zero
    /// matches, times the brevity penalty. 0 when some order has no
    /// hypothesis n-grams at all, or when nothing matches at any order.
    pub fn score(&self) -> f64 {
        if self.hyp_len == 0 || self.correct.iter().all(|&c| c == 0) {
            return 0.0;
        }
        let mut smooth = 1.0;
        let mut log_sum = 0.0;
        for n in 0..MAX_ORDER {
            if self.total[n] == 0 {
                return 0.0;
            }
            let p = if self.correct[n] == 0 {
                smooth *= 2.0;
                1.0 / (smooth * self.total[n] as f64)
            } else {
                self.correct[n] as f64 / self.total[n] as f64
            };
            log_sum += p.ln();
        }
        let bp = if self.hyp_len < self.ref_len {
            (1.0 - self.ref_len as f64 / self.hyp_len as f64).exp()
        } else {
            1.0
        };
        100.0 * bp * (log_sum / MAX_ORDER as f64).exp()
    }
}

fn ngram_counts(tokens: &[String], n: usize) -> HashMap<&[String], u64> {
    let mut m = HashMap::new();
    for w in tokens.windows(n) {
        *m.entry(w).or_default() += 1;
    }
    m
}

pub fn sentence_stats(hyp: &str, reference: &str) -> BleuStats {
    let h = tokenize(hyp);
    let r = tokenize(reference);
    let mut s = BleuStats {
        hyp_len: h.len() as u64,
        ref_len: r.len() as u64,
        ..Default::default()
    };
    for n in 1..=MAX_ORDER {
        let hc = ngram_counts(&h, n);
        let rc = ngram_counts(&r, n);
        s.total[n - 1] = h.len().saturating_sub(n - 1) as u64;
        s.correct[n - 1] = hc.iter().map(|(g, c)| (*c).min(rc.get(g).copied().unwrap_or(0))).sum();
    }
    s
}

pub fn corpus_stats(hyps: &[String], refs: &[String]) -> BleuStats {
    hyps.par_iter()
        .zip(refs.par_iter())
        .map(|(h, r)| sentence_stats(h, r))
        .reduce(BleuStats::default, BleuStats::add)
}

pub fn corpus_bleu(hyps: &[String], refs: &[String]) -> Result<f64> {
    check_inputs(hyps, refs)?;
    Ok(corpus_stats(hyps, refs).score())
}

pub struct Bleu;

impl Metric for Bleu {
    fn name(&self) -> &'static str {
        "bleu"
    }

    fn score(&self, hyps: &[String], refs: &[String]) -> Result<f64> {
        corpus_bleu(hyps, refs)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn v(s: &[&str]) -> Vec<String> {
        s.iter().map(|x| x.to_string()).collect()
    }

    #[test]
    fn identical_is_100() {
        let r = v(&["a b c d e", "f g h i"]);
        assert!((corpus_bleu(&r, &r).unwrap() - 100.0).abs() < 1e-9);
    }

    #[test]
    fn disjoint_is_near_zero() {
        let s = corpus_bleu(&v(&["a b c d e"]), &v(&["v w x y z"])).unwrap();
        assert!(s < 0.1, "{s}");
    }

    #[test]
    fn short_hypothesis_scores_zero() {
        assert_eq!(corpus_bleu(&v(&["a b"]), &v(&["a b"])).unwrap(), 0.0);
    }

    #[test]
    fn brevity_penalty() {
        let s = corpus_bleu(&v(&["a b c d"]), &v(&["a b c d e f g h"])).unwrap();
        assert!((s - 100.0 * (1.0f64 - 2.0).exp()).abs() < 1e-9);
    }

    #[test]
    fn mismatched_lengths() {
        assert!(corpus_bleu(&v(&["a"]), &v(&[])).is_err());
        assert!(corpus_bleu(&[], &[]).is_err());
    }
}
