use std::collections::HashMap;

use rayon::prelude::*;

use super::{check_inputs, Metric};
use crate::error::Result;

const CHAR_ORDER: usize = 6;
const BETA: f64 = 2.0;
const EPS: f64 = 1e-16;

/// Per order: hypothesis n-grams, reference n-grams, matches.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct ChrfStats(pub [[u64; 3]; CHAR_ORDER]);

impl ChrfStats {
    fn add(mut self, o: ChrfStats) -> ChrfStats {
        for n in 0..CHAR_ORDER {
            for k in 0..3 {
                self.0[n][k] += o.0[n][k];
            }
        }
        self
    }

    /// Mean of per-order F-beta over the orders present on both sides, times 100.
    pub fn score(&self) -> f64 {
        let factor = BETA * BETA;
        let mut total = 0.0;
        let mut effective = 0;
        for &[n_hyp, n_ref, n_match] in &self.0 {
            let prec = if n_hyp > 0 { n_match as f64 / n_hyp as f64 } else { EPS };
            let rec = if n_ref > 0 { n_match as f64 / n_ref as f64 } else { EPS };
            let denom = factor * prec + rec;
            total += if denom > 0.0 {
                (1.0 + factor) * prec * rec / denom
            } else {
                EPS
            };
            if n_hyp > 0 && n_ref > 0 {
                effective += 1;
            }
        }
        if effective == 0 {
            0.0
        } else {
            100.0 * total / effective as f64
        }
    }
}

fn char_ngrams(chars: &[char], n: usize) -> HashMap<&[char], u64> {
    let mut m = HashMap::new();
    for w in chars.windows(n) {
        *m.entry(w).or_default() += 1;
    }
    m
}

pub fn sentence_stats(hyp: &str, reference: &str) -> ChrfStats {
    let h: Vec<char> = hyp.chars().filter(|c| !c.is_whitespace()).collect();
    let r: Vec<char> = reference.chars().filter(|c| !c.is_whitespace()).collect();
    let mut s = ChrfStats::default();
    for n in 1..=CHAR_ORDER {
        let hc = char_ngrams(&h, n);
        let rc = char_ngrams(&r, n);
        let matches = hc.iter().map(|(g, c)| (*c).min(rc.get(g).copied().unwrap_or(0))).sum();
        s.0[n - 1] = [hc.values().sum(), rc.values().sum(), matches];
    }
    s
}

pub fn corpus_stats(hyps: &[String], refs: &[String]) -> ChrfStats {
    hyps.par_iter()
        .zip(refs.par_iter())
        .map(|(h, r)| sentence_stats(h, r))
        .reduce(ChrfStats::default, ChrfStats::add)
}

pub fn chrf_score(hyps: &[String], refs: &[String]) -> Result<f64> {
    check_inputs(hyps, refs)?;
    Ok(corpus_stats(hyps, refs).score())
}

pub struct Chrf;

impl Metric for Chrf {
    fn name(&self) -> &'static str {
        "chrf"
    }

    fn score(&self, hyps: &[String], refs: &[String]) -> Result<f64> {
        chrf_score(hyps, refs)
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
        let r = v(&["کتاب خوب", "ab"]);
        assert!((chrf_score(&r, &r).unwrap() - 100.0).abs() < 1e-9);
    }

    #[test]
    fn disjoint_is_zero() {
        assert!(chrf_score(&v(&["abc"]), &v(&["xyz"])).unwrap() < 1e-9);
    }

    #[test]
    fn whitespace_ignored() {
        let a = chrf_score(&v(&["ab cd"]), &v(&["abcd"])).unwrap();
        assert!((a - 100.0).abs() < 1e-9);
    }
}
