use std::collections::BTreeMap;

use crate::alignment::CharAlignmentMatrix;
use crate::error::{Error, Result};
use crate::grapheme::{parse_seq_token, seq_token, Grapheme, Segmenter};

/// Inverse of an alignment matrix: for each noisy grapheme sequence, the
/// clean sequences that could have produced it.
#[derive(Debug, Clone, PartialEq)]
pub struct ChannelModel {
    inverse: BTreeMap<Vec<Grapheme>, Vec<(Vec<Grapheme>, f64)>>,
    self_weight: f64,
    matrix_checksum: String,
}

impl ChannelModel {
    /// A channel with identity candidates only.
    pub fn identity(self_weight: f64) -> Self {
        ChannelModel {
            inverse: BTreeMap::new(),
            self_weight,
            matrix_checksum: String::new(),
        }
    }

    pub fn self_weight(&self) -> f64 {
        self.self_weight
    }

    pub fn matrix_checksum(&self) -> &str {
        &self.matrix_checksum
    }

    pub fn candidates(&self, noisy: &[Grapheme]) -> Option<&[(Vec<Grapheme>, f64)]> {
        self.inverse.get(noisy).map(Vec::as_slice)
    }

    pub fn entries(&self) -> &BTreeMap<Vec<Grapheme>, Vec<(Vec<Grapheme>, f64)>> {
        &self.inverse
    }

    pub fn max_key_len(&self) -> usize {
        self.inverse.keys().map(Vec::len).max().unwrap_or(1)
    }

    pub fn segmenter(&self) -> Segmenter {
        Segmenter::new(self.inverse.keys().flatten())
    }

    /// `# channel matrix_sha256 <hex> self_weight <w>` then `noisy\tclean\tweight`.
    pub fn to_tsv(&self) -> String {
        let mut out = format!(
            "# channel matrix_sha256 {} self_weight {}\n",
            if self.matrix_checksum.is_empty() { "-" } else { &self.matrix_checksum },
            self.self_weight
        );
        for (noisy, cands) in &self.inverse {
            for (clean, w) in cands {
                out.push_str(&format!("{}\t{}\t{w}\n", seq_token(noisy), seq_token(clean)));
            }
        }
        out
    }

    pub fn from_tsv(text: &str, origin: &str) -> Result<Self> {
        let mut lines = text.lines().enumerate();
        let header = lines.next().map(|(_, l)| l).unwrap_or_default();
        let words: Vec<&str> = header.split_whitespace().collect();
        let ["#", "channel", "matrix_sha256", checksum, "self_weight", w] = words[..] else {
            return Err(Error::parse(origin, 1, "expected `# channel matrix_sha256 .. self_weight ..` header"));
        };
        let self_weight: f64 = w
            .parse()
            .ok()
            .filter(|w: &f64| *w > 0.0)
            .ok_or_else(|| Error::parse(origin, 1, format!("bad self weight `{w}`")))?;
        let mut inverse: BTreeMap<Vec<Grapheme>, Vec<(Vec<Grapheme>, f64)>> = BTreeMap::new();
        for (idx, line) in lines {
            if line.trim().is_empty() {
                continue;
            }
            let f: Vec<&str> = line.split('\t').collect();
            if f.len() != 3 {
                return Err(Error::parse(origin, idx + 1, "expected noisy<TAB>clean<TAB>weight"));
            }
            let noisy = parse_seq_token(f[0]).map_err(|e| Error::parse(origin, idx + 1, e))?;
            let clean = parse_seq_token(f[1]).map_err(|e| Error::parse(origin, idx + 1, e))?;
            let weight: f64 = f[2]
                .parse()
                .ok()
                .filter(|w: &f64| *w > 0.0)
                .ok_or_else(|| Error::parse(origin, idx + 1, format!("bad weight `{}`", f[2])))?;
            if noisy.is_empty() || clean.is_empty() {
                return Err(Error::parse(origin, idx + 1, "empty grapheme sequence"));
            }
            inverse.entry(noisy).or_default().push((clean, weight));
        }
        Ok(ChannelModel {
            inverse,
            self_weight,
            matrix_checksum: if checksum == "-" { String::new() } else { checksum.to_string() },
        })
    }
}

/// Inverts every matrix entry `s -> t` (score σ) into `t -> s` with weight σ
/// and adds `y -> y` at `self_weight` for every grapheme the matrix mentions.
/// Deletions have no noisy side to key on and are skipped.
pub fn fit_channel(matrix: &CharAlignmentMatrix, self_weight: f64) -> Result<ChannelModel> {
    if matrix.is_empty() {
        return Err(Error::InvalidInput("cannot fit a channel to an empty matrix".into()));
    }
    if !(self_weight > 0.0) {
        return Err(Error::Config(format!("self weight must be positive, got {self_weight}")));
    }
    let mut inverse: BTreeMap<Vec<Grapheme>, BTreeMap<Vec<Grapheme>, f64>> = BTreeMap::new();
    for (source, row) in matrix.rows() {
        for entry in row.iter().filter(|e| !e.target.is_empty()) {
            let w = inverse
                .entry(entry.target.clone())
                .or_default()
                .entry(source.clone())
                .or_insert(0.0);
            *w = w.max(entry.score);
        }
    }
    let graphemes: Vec<Grapheme> = matrix
        .rows()
        .iter()
        .flat_map(|(s, row)| s.iter().chain(row.iter().flat_map(|e| e.target.iter())))
        .cloned()
        .collect();
    for g in graphemes {
        inverse.entry(vec![g.clone()]).or_default().insert(vec![g], self_weight);
    }
    Ok(ChannelModel {
        inverse: inverse
            .into_iter()
            .map(|(k, v)| (k, v.into_iter().collect()))
            .collect(),
        self_weight,
        matrix_checksum: matrix.checksum(),
    })
}
