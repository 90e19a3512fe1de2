//! Noisy-channel normalization: an inverted alignment matrix as the channel,
//! a character n-gram LM as the prior, and a beam decoder.

mod beam;
mod channel;
mod lm;

use std::collections::BTreeMap;
use std::path::Path;

use rayon::prelude::*;

pub use beam::beam_normalize;
pub use channel::{fit_channel, ChannelModel};
pub use lm::{CharLM, LmState};

use crate::error::{Error, Result};
use crate::grapheme::Segmenter;
use crate::metrics::{evaluate_files, EvalReport};

pub const DEFAULT_ORDER: usize = 5;
pub const DEFAULT_ALPHA: f64 = 0.1;
pub const DEFAULT_BEAM: usize = 8;

/// Maps noisy sentences to normalized ones.
pub trait Normalizer: Send + Sync {
    fn name(&self) -> &'static str;

    fn normalize(&self, noisy: &str) -> String;

    /// Order-preserving, parallel over sentences.
    fn normalize_all(&self, lines: &[String]) -> Vec<String> {
        lines.par_iter().map(|l| self.normalize(l)).collect()
    }
}

/// Returns its input: the naive baseline.
pub struct CopyNormalizer;

impl Normalizer for CopyNormalizer {
    fn name(&self) -> &'static str {
        "copy"
    }

    fn normalize(&self, noisy: &str) -> String {
        noisy.to_string()
    }
}

pub struct BeamNormalizer {
    channel: ChannelModel,
    segmenter: Segmenter,
    lm: CharLM,
    beam_width: usize,
}

impl BeamNormalizer {
    pub fn new(channel: ChannelModel, lm: CharLM, beam_width: usize) -> Result<Self> {
        if beam_width == 0 {
            return Err(Error::Config("beam width must be at least 1".into()));
        }
        Ok(BeamNormalizer {
            segmenter: channel.segmenter(),
            channel,
            lm,
            beam_width,
        })
    }
}

impl Normalizer for BeamNormalizer {
    fn name(&self) -> &'static str {
        "beam"
    }

    fn normalize(&self, noisy: &str) -> String {
        beam::beam_normalize_with(noisy, &self.channel, &self.segmenter, &self.lm, self.beam_width)
    }
}

/// Normalizers by name.
#[derive(Default)]
pub struct NormalizerRegistry {
    entries: BTreeMap<&'static str, Box<dyn Normalizer>>,
}

impl NormalizerRegistry {
    /// `copy` only; add `beam` once models are available.
    pub fn with_baseline() -> Self {
        let mut r = NormalizerRegistry::default();
        r.register(Box::new(CopyNormalizer));
        r
    }

    pub fn register(&mut self, n: Box<dyn Normalizer>) {
        self.entries.insert(n.name(), n);
    }

    pub fn get(&self, name: &str) -> Result<&dyn Normalizer> {
        self.entries.get(name).map(|n| n.as_ref()).ok_or_else(|| Error::Unknown {
            kind: "normalizer",
            name: name.to_string(),
        })
    }

    pub fn names(&self) -> impl Iterator<Item = &'static str> + '_ {
        self.entries.keys().copied()
    }
}

/// Scores externally produced hypotheses against references.
pub fn score_hypotheses(hyp_file: &Path, ref_file: &Path) -> Result<EvalReport> {
    evaluate_files(hyp_file, ref_file)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::alignment::{CharAlignmentMatrix, Origin};
    use crate::grapheme::Grapheme;
    use crate::inventory::LangCode;

    fn g(c: char) -> Vec<Grapheme> {
        vec![Grapheme::from_char(c)]
    }

    fn xy_channel(self_weight: f64) -> ChannelModel {
        let m = CharAlignmentMatrix::from_entries(LangCode::Ckb, LangCode::Arb, [(g('x'), g('y'), 1.0, Origin::Rule)])
            .unwrap();
        fit_channel(&m, self_weight).unwrap()
    }

    #[test]
    fn identity_channel_copies() {
        let lm = CharLM::train(["abc abd"], 5, 0.1).unwrap();
        let ch = ChannelModel::identity(1.0);
        for s in ["abc", "zzz q", "a  b", ""] {
            assert_eq!(beam_normalize(s, &ch, &lm, 8), s);
        }
    }

    #[test]
    fn recovers_with_lm() {
        let lm = CharLM::train(["xa xa xa", "ax xa"], 5, 0.1).unwrap();
        assert_eq!(beam_normalize("ya ay", &xy_channel(1.0), &lm, 8), "xa ax");
    }

    #[test]
    fn huge_self_weight_copies() {
        let lm = CharLM::train(["xa xa xa"], 5, 0.1).unwrap();
        assert_eq!(beam_normalize("ya", &xy_channel(1e300), &lm, 8), "ya");
    }

    #[test]
    fn registry() {
        let lm = CharLM::train(["xa"], 5, 0.1).unwrap();
        let mut r = NormalizerRegistry::with_baseline();
        r.register(Box::new(BeamNormalizer::new(xy_channel(1.0), lm, 4).unwrap()));
        assert_eq!(r.names().collect::<Vec<_>>(), vec!["beam", "copy"]);
        assert_eq!(r.get("copy").unwrap().normalize("ya"), "ya");
        assert_eq!(r.get("beam").unwrap().normalize_all(&["ya".into()]), vec!["xa".to_string()]);
        assert!(r.get("transformer").is_err());
    }
}
