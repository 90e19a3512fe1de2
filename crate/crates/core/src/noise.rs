//! Synthetic noisy/clean parallel data at graded noise levels.

use std::collections::HashSet;
use std::fmt;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use rand::seq::index::sample;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::alignment::{CharAlignmentMatrix, MatrixEntry};
use crate::checksum::sha256_hex;
use crate::error::{write_file, Error, Result};
use crate::grapheme::{Grapheme, Segmenter};

pub const LEVELS: [u8; 5] = [20, 40, 60, 80, 100];

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum NoiseLevel {
    Percent(u8),
    All,
}

impl NoiseLevel {
    pub fn file_tag(self) -> String {
        match self {
            NoiseLevel::Percent(p) => p.to_string(),
            NoiseLevel::All => "all".into(),
        }
    }
}

impl fmt::Display for NoiseLevel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.file_tag())
    }
}

impl FromStr for NoiseLevel {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        if s.eq_ignore_ascii_case("all") {
            return Ok(NoiseLevel::All);
        }
        let p: u8 = s
            .trim_end_matches('%')
            .parse()
            .map_err(|_| Error::Config(format!("bad noise level `{s}`")))?;
        if !LEVELS.contains(&p) {
            return Err(Error::Config(format!("noise level must be one of {LEVELS:?} or all, got {p}")));
        }
        Ok(NoiseLevel::Percent(p))
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NoiseConfig {
    pub seed: u64,
    pub dedup: bool,
}

impl NoiseConfig {
    pub fn new(seed: u64) -> Self {
        NoiseConfig { seed, dedup: true }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SentencePair {
    pub noisy: String,
    pub clean: String,
    pub level: u8,
    pub pair_index: usize,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParallelDataset {
    pub level: NoiseLevel,
    pub pairs: Vec<SentencePair>,
    /// Pairs dropped as duplicates (ALL only).
    pub duplicates_removed: usize,
}

impl ParallelDataset {
    /// `noisy\tclean` per line.
    pub fn to_tsv(&self) -> String {
        self.pairs
            .iter()
            .map(|p| format!("{}\t{}\n", p.noisy, p.clean))
            .collect()
    }

    pub fn word_count(&self) -> usize {
        self.pairs.iter().map(|p| p.clean.split_whitespace().count()).sum()
    }
}

/// Reads `noisy\tclean` lines.
pub fn read_dataset_tsv(text: &str, origin: &str) -> Result<Vec<(String, String)>> {
    text.lines()
        .enumerate()
        .filter(|(_, l)| !l.is_empty())
        .map(|(idx, line)| {
            line.split_once('\t')
                .filter(|(_, clean)| !clean.contains('\t'))
                .map(|(n, c)| (n.to_string(), c.to_string()))
                .ok_or_else(|| Error::parse(origin, idx + 1, "expected noisy<TAB>clean"))
        })
        .collect()
}

/// Finds replaceable spans and applies substitutions from a matrix.
pub struct NoiseInjector<'m> {
    matrix: &'m CharAlignmentMatrix,
    segmenter: Segmenter,
    max_len: usize,
}

/// What one call to `inject` did.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Injection {
    pub noisy: String,
    pub replaceable: usize,
    pub replaced: usize,
}

impl<'m> NoiseInjector<'m> {
    pub fn new(matrix: &'m CharAlignmentMatrix) -> Self {
        let graphemes: Vec<&Grapheme> = matrix.rows().keys().flatten().collect();
        NoiseInjector {
            matrix,
            segmenter: Segmenter::new(graphemes),
            max_len: matrix.max_source_len(),
        }
    }

    /// Replaceable spans, left to right, longest source first.
    fn spans(&self, graphemes: &[Grapheme]) -> Vec<(usize, usize, &'m [MatrixEntry])> {
        let mut spans = Vec::new();
        let mut i = 0;
        while i < graphemes.len() {
            let hit = (1..=self.max_len.min(graphemes.len() - i))
                .rev()
                .find_map(|len| self.matrix.row(&graphemes[i..i + len]).map(|row| (len, row)));
            match hit {
                Some((len, row)) => {
                    spans.push((i, len, row));
                    i += len;
                }
                None => i += 1,
            }
        }
        spans
    }

    pub fn inject<R: Rng + ?Sized>(&self, sentence: &str, level: u8, rng: &mut R) -> Injection {
        let graphemes = self.segmenter.segment(sentence);
        let spans = self.spans(&graphemes);
        let k = replacement_count(level, spans.len());
        if k == 0 {
            return Injection {
                noisy: sentence.to_string(),
                replaceable: spans.len(),
                replaced: 0,
            };
        }
        let mut chosen = sample(rng, spans.len(), k).into_vec();
        chosen.sort_unstable();

        let mut out = String::with_capacity(sentence.len() + 8);
        let mut cursor = 0;
        for idx in chosen {
            let (start, len, row) = spans[idx];
            for g in &graphemes[cursor..start] {
                out.push_str(g.as_str());
            }
            let alt = &row[rng.gen_range(0..row.len())];
            for g in &alt.target {
                out.push_str(g.as_str());
            }
            cursor = start + len;
        }
        for g in &graphemes[cursor..] {
            out.push_str(g.as_str());
        }
        Injection {
            noisy: out,
            replaceable: spans.len(),
            replaced: k,
        }
    }
}

/// round(level/100 * n), halves away from zero.
pub fn replacement_count(level: u8, n: usize) -> usize {
    (f64::from(level) / 100.0 * n as f64).round() as usize
}

/// Replaces exactly `replacement_count(level, |P|)` replaceable spans,
/// chosen uniformly without replacement, each with a uniformly drawn alternative.
pub fn inject_noise<R: Rng + ?Sized>(sentence: &str, matrix: &CharAlignmentMatrix, level: u8, rng: &mut R) -> String {
    NoiseInjector::new(matrix).inject(sentence, level, rng).noisy
}

fn splitmix64(mut x: u64) -> u64 {
    x = x.wrapping_add(0x9E37_79B9_7F4A_7C15);
    x = (x ^ (x >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    x = (x ^ (x >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    x ^ (x >> 31)
}

/// The RNG for sentence `index` at `level`, independent of processing order.
pub fn sentence_rng(seed: u64, level: u8, index: usize) -> ChaCha8Rng {
    let s = splitmix64(splitmix64(splitmix64(seed) ^ u64::from(level)) ^ index as u64);
    ChaCha8Rng::seed_from_u64(s)
}

/// One noised copy of the corpus at a single level.
pub fn generate_level(corpus: &[String], matrix: &CharAlignmentMatrix, level: u8, seed: u64) -> ParallelDataset {
    let injector = NoiseInjector::new(matrix);
    let pairs = corpus
        .par_iter()
        .enumerate()
        .map(|(i, clean)| {
            let mut rng = sentence_rng(seed, level, i);
            SentencePair {
                noisy: injector.inject(clean, level, &mut rng).noisy,
                clean: clean.clone(),
                level,
                pair_index: i,
            }
        })
        .collect();
    ParallelDataset {
        level: NoiseLevel::Percent(level),
        pairs,
        duplicates_removed: 0,
    }
}

/// The five level datasets followed by ALL, their concatenation.
pub fn generate_parallel_datasets(
    corpus: &[String],
    matrix: &CharAlignmentMatrix,
    cfg: &NoiseConfig,
) -> Result<Vec<ParallelDataset>> {
    if corpus.is_empty() {
        return Err(Error::InvalidInput("empty corpus".into()));
    }
    if matrix.is_empty() {
        return Err(Error::InvalidInput("alignment matrix has no replacement entries".into()));
    }
    let mut out: Vec<ParallelDataset> = LEVELS
        .iter()
        .map(|&level| generate_level(corpus, matrix, level, cfg.seed))
        .collect();
    let mut all: Vec<SentencePair> = out.iter().flat_map(|d| d.pairs.iter().cloned()).collect();
    let before = all.len();
    if cfg.dedup {
        let mut seen = HashSet::new();
        all.retain(|p| seen.insert((p.noisy.clone(), p.clean.clone())));
    }
    out.push(ParallelDataset {
        level: NoiseLevel::All,
        duplicates_removed: before - all.len(),
        pairs: all,
    });
    Ok(out)
}

pub fn dataset_file_name(src: &str, dom: &str, level: NoiseLevel) -> String {
    format!("{src}_{dom}.{}.tsv", level.file_tag())
}

/// Writes each dataset plus a `{src}_{dom}.manifest` sidecar with the seed,
/// matrix checksum and per-file counts. Returns the written paths.
pub fn write_datasets(
    dir: &Path,
    datasets: &[ParallelDataset],
    matrix: &CharAlignmentMatrix,
    cfg: &NoiseConfig,
) -> Result<Vec<PathBuf>> {
    std::fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))?;
    let (src, dom) = (matrix.src_lang().as_str(), matrix.dom_lang().as_str());
    let mut manifest = format!(
        "seed\t{}\ndedup\t{}\nmatrix_sha256\t{}\n",
        cfg.seed,
        cfg.dedup,
        matrix.checksum()
    );
    let mut written = Vec::new();
    for d in datasets {
        let name = dataset_file_name(src, dom, d.level);
        let path = dir.join(&name);
        let tsv = d.to_tsv();
        write_file(&path, &tsv)?;
        manifest.push_str(&format!(
            "file\t{name}\tpairs={}\twords={}\tduplicates_removed={}\tsha256={}\n",
            d.pairs.len(),
            d.word_count(),
            d.duplicates_removed,
            sha256_hex(&tsv)
        ));
        written.push(path);
    }
    let path = dir.join(format!("{src}_{dom}.manifest"));
    write_file(&path, manifest)?;
    written.push(path);
    Ok(written)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::alignment::Origin;
    use crate::inventory::LangCode;

    fn xy() -> CharAlignmentMatrix {
        let x = vec![Grapheme::from_char('x')];
        let y = vec![Grapheme::from_char('y')];
        CharAlignmentMatrix::from_entries(LangCode::Ckb, LangCode::Arb, [(x, y, 1.0, Origin::Rule)]).unwrap()
    }

    #[test]
    fn level_zero_is_identity() {
        let mut rng = sentence_rng(1, 0, 0);
        assert_eq!(inject_noise("xax", &xy(), 0, &mut rng), "xax");
    }

    #[test]
    fn full_level_forced() {
        let mut rng = sentence_rng(1, 100, 0);
        assert_eq!(inject_noise("xax", &xy(), 100, &mut rng), "yay");
    }

    #[test]
    fn half_level_exact_counts() {
        let m = xy();
        for seed in 0..100 {
            let mut rng = sentence_rng(seed, 50, 0);
            let out = inject_noise("xxxx", &m, 50, &mut rng);
            assert_eq!(out.matches('y').count(), 2);
            assert_eq!(out.matches('x').count(), 2);
        }
    }

    #[test]
    fn compound_source_wins() {
        let a = Grapheme::from_char('a');
        let b = Grapheme::from_char('b');
        let m = CharAlignmentMatrix::from_entries(
            LangCode::Ckb,
            LangCode::Arb,
            [
                (vec![a.clone(), b.clone()], vec![Grapheme::from_char('z')], 1.0, Origin::Rule),
                (vec![a.clone()], vec![b.clone()], 1.0, Origin::Rule),
            ],
        )
        .unwrap();
        let inj = NoiseInjector::new(&m).inject("aba", 100, &mut sentence_rng(0, 100, 0));
        assert_eq!(inj.replaceable, 2);
        assert_eq!(inj.noisy, "zb");
    }

    #[test]
    fn all_concatenates_levels() {
        let corpus: Vec<String> = (0..10).map(|i| format!("x{i} xx x")).collect();
        let sets = generate_parallel_datasets(&corpus, &xy(), &NoiseConfig::new(3)).unwrap();
        assert_eq!(sets.len(), 6);
        let all = &sets[5];
        assert_eq!(all.level, NoiseLevel::All);
        assert_eq!(all.pairs.len() + all.duplicates_removed, 50);
        for d in &sets[..5] {
            let cleans: Vec<&String> = d.pairs.iter().map(|p| &p.clean).collect();
            assert_eq!(cleans, corpus.iter().collect::<Vec<_>>());
        }
    }

    #[test]
    fn empty_corpus_rejected() {
        assert!(generate_parallel_datasets(&[], &xy(), &NoiseConfig::new(1)).is_err());
    }

    #[test]
    fn level_parsing() {
        assert_eq!("40".parse::<NoiseLevel>().unwrap(), NoiseLevel::Percent(40));
        assert_eq!("ALL".parse::<NoiseLevel>().unwrap(), NoiseLevel::All);
        assert!("30".parse::<NoiseLevel>().is_err());
    }
}
