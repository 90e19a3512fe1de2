use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;

use super::nw::{needleman_wunsch, AlignmentParams};
use super::pairs::SpellingPair;
use crate::checksum::sha256_hex;
use crate::error::{Error, Result};
use crate::grapheme::{parse_seq_token, seq_token, Grapheme};
use crate::inventory::{LangCode, MappingRuleSet, ScriptInventory};

/// Count-derived scores below this are pruned.
pub const MIN_SCORE: f64 = 0.1;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Origin {
    Rule,
    Count,
}

impl Origin {
    pub fn as_str(self) -> &'static str {
        match self {
            Origin::Rule => "rule",
            Origin::Count => "count",
        }
    }
}

impl fmt::Display for Origin {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Origin {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "rule" => Ok(Origin::Rule),
            "count" => Ok(Origin::Count),
            other => Err(format!("unknown origin `{other}`")),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct MatrixEntry {
    /// Empty for a deletion.
    pub target: Vec<Grapheme>,
    pub score: f64,
    pub origin: Origin,
}

/// Scored replacement alternatives per source grapheme sequence.
///
/// Identity correspondences are kept apart in `identities` so that every
/// alternative in `rows` changes the text.
#[derive(Debug, Clone, PartialEq)]
pub struct CharAlignmentMatrix {
    src_lang: LangCode,
    dom_lang: LangCode,
    rows: BTreeMap<Vec<Grapheme>, Vec<MatrixEntry>>,
    identities: BTreeMap<Vec<Grapheme>, MatrixEntry>,
}

impl CharAlignmentMatrix {
    /// Builds a matrix from raw `(source, target, score, origin)` entries,
    /// routing identities to the diagnostics table.
    pub fn from_entries(
        src_lang: LangCode,
        dom_lang: LangCode,
        entries: impl IntoIterator<Item = (Vec<Grapheme>, Vec<Grapheme>, f64, Origin)>,
    ) -> Result<Self> {
        let mut rows: BTreeMap<Vec<Grapheme>, BTreeMap<Vec<Grapheme>, MatrixEntry>> = BTreeMap::new();
        let mut identities = BTreeMap::new();
        for (source, target, score, origin) in entries {
            if source.is_empty() || source.len() > 2 || target.len() > 2 {
                return Err(Error::InvalidInput(format!(
                    "matrix entry {} -> {} has a bad length",
                    seq_token(&source),
                    seq_token(&target)
                )));
            }
            if !(MIN_SCORE..=1.0).contains(&score) || (origin == Origin::Rule && score != 1.0) {
                return Err(Error::InvalidInput(format!(
                    "matrix entry {} -> {} has score {score} ({origin})",
                    seq_token(&source),
                    seq_token(&target)
                )));
            }
            let entry = MatrixEntry {
                target: target.clone(),
                score,
                origin,
            };
            if target == source {
                identities.insert(source, entry);
            } else {
                rows.entry(source).or_default().insert(target, entry);
            }
        }
        Ok(CharAlignmentMatrix {
            src_lang,
            dom_lang,
            rows: rows
                .into_iter()
                .map(|(s, row)| (s, row.into_values().collect()))
                .collect(),
            identities,
        })
    }

    pub fn src_lang(&self) -> LangCode {
        self.src_lang
    }

    pub fn dom_lang(&self) -> LangCode {
        self.dom_lang
    }

    /// Replacement alternatives, ordered by target.
    pub fn rows(&self) -> &BTreeMap<Vec<Grapheme>, Vec<MatrixEntry>> {
        &self.rows
    }

    pub fn row(&self, source: &[Grapheme]) -> Option<&[MatrixEntry]> {
        self.rows.get(source).map(Vec::as_slice)
    }

    pub fn identities(&self) -> &BTreeMap<Vec<Grapheme>, MatrixEntry> {
        &self.identities
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }

    pub fn entry_count(&self) -> usize {
        self.rows.values().map(Vec::len).sum()
    }

    /// Longest source sequence, in graphemes.
    pub fn max_source_len(&self) -> usize {
        self.rows.keys().map(Vec::len).max().unwrap_or(0)
    }

    /// `src\ttarget\tscore\torigin`, code point tokens, `∅` for deletion.
    pub fn to_tsv(&self) -> String {
        let mut out = format!("# src {} dom {}\n", self.src_lang, self.dom_lang);
        for (source, row) in &self.rows {
            for e in row {
                out.push_str(&entry_line(source, e));
            }
        }
        out
    }

    /// The identity diagnostics in the same layout as `to_tsv`.
    pub fn identities_tsv(&self) -> String {
        let mut out = format!("# src {} dom {} identities\n", self.src_lang, self.dom_lang);
        for (source, e) in &self.identities {
            out.push_str(&entry_line(source, e));
        }
        out
    }

    pub fn checksum(&self) -> String {
        sha256_hex(self.to_tsv())
    }

    pub fn from_tsv(text: &str, origin: &str) -> Result<Self> {
        let mut langs = None;
        let mut entries = Vec::new();
        for (idx, line) in text.lines().enumerate() {
            let line_no = idx + 1;
            if let Some(header) = line.strip_prefix('#') {
                let words: Vec<&str> = header.split_whitespace().collect();
                if let ["src", s, "dom", d, ..] = words[..] {
                    langs = Some((s.parse::<LangCode>()?, d.parse::<LangCode>()?));
                }
                continue;
            }
            if line.trim().is_empty() {
                continue;
            }
            let fields: Vec<&str> = line.split('\t').collect();
            if fields.len() != 4 {
                return Err(Error::parse(origin, line_no, "expected 4 tab-separated fields"));
            }
            let source = parse_seq_token(fields[0]).map_err(|e| Error::parse(origin, line_no, e))?;
            let target = parse_seq_token(fields[1]).map_err(|e| Error::parse(origin, line_no, e))?;
            let score: f64 = fields[2]
                .parse()
                .map_err(|_| Error::parse(origin, line_no, format!("bad score `{}`", fields[2])))?;
            let kind: Origin = fields[3].parse().map_err(|e: String| Error::parse(origin, line_no, e))?;
            entries.push((source, target, score, kind));
        }
        let (src, dom) = langs.ok_or_else(|| Error::parse(origin, 0, "missing `# src .. dom ..` header"))?;
        Self::from_entries(src, dom, entries).map_err(|e| Error::parse(origin, 0, e.to_string()))
    }
}

fn entry_line(source: &[Grapheme], e: &MatrixEntry) -> String {
    format!("{}\t{}\t{}\t{}\n", seq_token(source), seq_token(&e.target), e.score, e.origin)
}

type Counts = HashMap<(Grapheme, Grapheme), u64>;

fn merge(mut a: Counts, b: Counts) -> Counts {
    for (k, v) in b {
        *a.entry(k).or_default() += v;
    }
    a
}

/// Correspondence counts over the non-gap columns of every pair alignment.
pub fn alignment_counts(pairs: &[SpellingPair], src: &ScriptInventory, dom: &ScriptInventory) -> Result<Counts> {
    let params = AlignmentParams::default();
    pairs
        .par_iter()
        .map(|pair| {
            let a = src.segment(&pair.src_word);
            let b = dom.segment(&pair.dom_word);
            let al = needleman_wunsch(&a, &b, &params)?;
            let mut counts = Counts::new();
            for (s, t) in al.columns {
                if let (Some(s), Some(t)) = (s, t) {
                    *counts.entry((s, t)).or_default() += 1;
                }
            }
            Ok(counts)
        })
        .try_reduce(Counts::new, |a, b| Ok(merge(a, b)))
}

/// Aligns every pair, L2-normalizes the counts per source grapheme, prunes
/// scores below `MIN_SCORE`, then lays the rules over the result at 1.0.
/// Rule positions are not carried into the matrix.
pub fn build_alignment_matrix(
    pairs: &[SpellingPair],
    rules: &MappingRuleSet,
    src: &ScriptInventory,
    dom: &ScriptInventory,
) -> Result<CharAlignmentMatrix> {
    if pairs.is_empty() && rules.is_empty() {
        return Err(Error::InvalidInput("no spelling pairs and no rules to build a matrix from".into()));
    }
    let counts = alignment_counts(pairs, src, dom)?;

    let mut by_source: BTreeMap<Grapheme, Vec<(Grapheme, u64)>> = BTreeMap::new();
    for ((s, t), c) in counts {
        by_source.entry(s).or_default().push((t, c));
    }
    let mut merged: BTreeMap<(Vec<Grapheme>, Vec<Grapheme>), (f64, Origin)> = BTreeMap::new();
    for (s, row) in by_source {
        let norm = row.iter().map(|(_, c)| (*c as f64).powi(2)).sum::<f64>().sqrt();
        for (t, c) in row {
            let score = c as f64 / norm;
            if score >= MIN_SCORE {
                merged.insert((vec![s.clone()], vec![t]), (score.min(1.0), Origin::Count));
            }
        }
    }
    for rule in rules.rules() {
        for target in &rule.targets {
            merged.insert((rule.source.clone(), target.clone()), (1.0, Origin::Rule));
        }
    }
    CharAlignmentMatrix::from_entries(
        rules.src_lang(),
        rules.dom_lang(),
        merged.into_iter().map(|((s, t), (score, o))| (s, t, score, o)),
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::alignment::Provenance;
    use crate::inventory::shipped;

    fn empty_rules() -> MappingRuleSet {
        MappingRuleSet::new(LangCode::Ckb, LangCode::Fas, Vec::new()).unwrap()
    }

    fn invs() -> (ScriptInventory, ScriptInventory) {
        (shipped::inventory(LangCode::Ckb), shipped::inventory(LangCode::Fas))
    }

    #[test]
    fn identity_pair_leaves_no_replacements() {
        let (a, b) = invs();
        let pairs = [SpellingPair::new("با", "با", Provenance::Dictionary).unwrap()];
        let m = build_alignment_matrix(&pairs, &empty_rules(), &a, &b).unwrap();
        assert!(m.is_empty());
        assert_eq!(m.identities().len(), 2);
    }

    #[test]
    fn rules_pass_through() {
        let (a, b) = invs();
        let rules = shipped::rules(LangCode::Ckb, LangCode::Fas).unwrap();
        let m = build_alignment_matrix(&[], &rules, &a, &b).unwrap();
        assert!(m.rows().values().flatten().all(|e| e.score == 1.0 && e.origin == Origin::Rule));
        assert!(!m.is_empty());
    }

    #[test]
    fn vietnam_row() {
        let (a, b) = invs();
        let pairs = [SpellingPair::new("فیەتنام", "ویتنام", Provenance::Dictionary).unwrap()];
        let m = build_alignment_matrix(&pairs, &empty_rules(), &a, &b).unwrap();
        let row = m.row(&[Grapheme::from_char('ف')]).unwrap();
        assert_eq!(row.len(), 1);
        assert_eq!(row[0].target, vec![Grapheme::from_char('و')]);
        assert_eq!(row[0].score, 1.0);
        assert!(m.row(&[Grapheme::from_char('ە')]).is_none());
    }

    #[test]
    fn nothing_to_build() {
        let (a, b) = invs();
        assert!(build_alignment_matrix(&[], &empty_rules(), &a, &b).is_err());
    }

    #[test]
    fn tsv_round_trip() {
        let (a, b) = invs();
        let rules = shipped::rules(LangCode::Ckb, LangCode::Fas).unwrap();
        let pairs = [SpellingPair::new("فیەتنام", "ویتنام", Provenance::Dictionary).unwrap()];
        let m = build_alignment_matrix(&pairs, &rules, &a, &b).unwrap();
        assert_eq!(CharAlignmentMatrix::from_tsv(&m.to_tsv(), "t").unwrap().to_tsv(), m.to_tsv());
    }

    #[test]
    fn rejects_out_of_range_scores() {
        let x = vec![Grapheme::from_char('x')];
        let y = vec![Grapheme::from_char('y')];
        let bad = CharAlignmentMatrix::from_entries(LangCode::Ckb, LangCode::Fas, [(x, y, 0.05, Origin::Count)]);
        assert!(bad.is_err());
    }
}
