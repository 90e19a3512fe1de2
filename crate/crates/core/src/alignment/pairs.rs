use std::collections::{BTreeSet, HashSet};
use std::fmt;
use std::str::FromStr;

use crate::corpus::Vocabulary;
use crate::error::{Error, Result};
use crate::grapheme::Grapheme;
use crate::inventory::{MappingRuleSet, ScriptInventory};

pub const MAX_VARIANTS: usize = 256;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Provenance {
    RuleDerived,
    Dictionary,
}

impl Provenance {
    pub fn as_str(self) -> &'static str {
        match self {
            Provenance::RuleDerived => "rule_derived",
            Provenance::Dictionary => "dictionary",
        }
    }
}

impl fmt::Display for Provenance {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Provenance {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "rule_derived" => Ok(Provenance::RuleDerived),
            "dictionary" => Ok(Provenance::Dictionary),
            other => Err(format!("unknown provenance `{other}`")),
        }
    }
}

/// A source-language word and a dominant-language word spelled alike.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct SpellingPair {
    pub src_word: String,
    pub dom_word: String,
    pub provenance: Provenance,
}

impl SpellingPair {
    pub fn new(src_word: &str, dom_word: &str, provenance: Provenance) -> Result<Self> {
        for w in [src_word, dom_word] {
            if w.is_empty() || w.chars().any(char::is_whitespace) {
                return Err(Error::InvalidInput(format!("bad spelling pair word `{w}`")));
            }
        }
        Ok(SpellingPair {
            src_word: src_word.to_string(),
            dom_word: dom_word.to_string(),
            provenance,
        })
    }
}

/// `src\tdom\tprovenance` per line.
pub fn pairs_to_tsv(pairs: &[SpellingPair]) -> String {
    pairs
        .iter()
        .map(|p| format!("{}\t{}\t{}\n", p.src_word, p.dom_word, p.provenance))
        .collect()
}

/// Parses pair TSV; a missing third column means `dictionary`.
pub fn pairs_from_tsv(text: &str, origin: &str) -> Result<Vec<SpellingPair>> {
    let mut out = Vec::new();
    for (idx, line) in text.lines().enumerate() {
        if line.trim().is_empty() || line.starts_with('#') {
            continue;
        }
        let fields: Vec<&str> = line.split('\t').collect();
        if !(2..=3).contains(&fields.len()) {
            return Err(Error::parse(origin, idx + 1, "expected src<TAB>dom[<TAB>provenance]"));
        }
        let provenance = match fields.get(2) {
            Some(p) => p.parse().map_err(|e: String| Error::parse(origin, idx + 1, e))?,
            None => Provenance::Dictionary,
        };
        out.push(
            SpellingPair::new(fields[0], fields[1], provenance)
                .map_err(|e| Error::parse(origin, idx + 1, e.to_string()))?,
        );
    }
    Ok(out)
}

/// One way to rewrite the span starting at some position.
struct Rewrite {
    len: usize,
    target: Vec<Grapheme>,
}

/// Rule-derived spelling variants of one word, fewest substitutions first,
/// capped at `MAX_VARIANTS`. The word itself comes first.
pub fn spelling_variants(word: &str, rules: &MappingRuleSet, src: &ScriptInventory) -> Vec<String> {
    let graphemes = src.segment(word);
    let n = graphemes.len();

    // substitution options per start position
    let mut options: Vec<Vec<Rewrite>> = (0..n).map(|_| Vec::new()).collect();
    for (i, slot) in options.iter_mut().enumerate() {
        let mut seen: BTreeSet<(usize, Vec<Grapheme>)> = BTreeSet::new();
        for rule in rules.rules() {
            let len = rule.source.len();
            if i + len > n || graphemes[i..i + len] != rule.source[..] || !rule.position.admits(i, len, n) {
                continue;
            }
            for target in &rule.targets {
                if *target != rule.source && seen.insert((len, target.clone())) {
                    slot.push(Rewrite {
                        len,
                        target: target.clone(),
                    });
                }
            }
        }
        if src.is_diacritic(&graphemes[i]) && seen.insert((1, Vec::new())) {
            slot.push(Rewrite {
                len: 1,
                target: Vec::new(),
            });
        }
    }

    let mut found: Vec<String> = Vec::new();
    let mut unique: HashSet<String> = HashSet::new();
    let mut buf: Vec<&Grapheme> = Vec::with_capacity(n * 2);
    for budget in 0..=n {
        let full = enumerate(&graphemes, &options, 0, budget, &mut buf, &mut found, &mut unique);
        if full {
            log::debug!("variant cap reached for `{word}`");
            break;
        }
    }
    found
}

// Depth-first enumeration of rewrites using exactly `budget` substitutions.
// Returns true once the cap is reached.
fn enumerate<'a>(
    graphemes: &'a [Grapheme],
    options: &'a [Vec<Rewrite>],
    pos: usize,
    budget: usize,
    buf: &mut Vec<&'a Grapheme>,
    found: &mut Vec<String>,
    unique: &mut HashSet<String>,
) -> bool {
    if pos == graphemes.len() {
        if budget == 0 {
            let s: String = buf.iter().map(|g| g.as_str()).collect();
            if unique.insert(s.clone()) {
                found.push(s);
            }
        }
        return found.len() >= MAX_VARIANTS;
    }
    if budget > graphemes.len() - pos {
        return false;
    }
    buf.push(&graphemes[pos]);
    let stop = enumerate(graphemes, options, pos + 1, budget, buf, found, unique);
    buf.pop();
    if stop {
        return true;
    }
    if budget == 0 {
        return false;
    }
    for opt in &options[pos] {
        let mark = buf.len();
        buf.extend(opt.target.iter());
        let stop = enumerate(graphemes, options, pos + opt.len, budget - 1, buf, found, unique);
        buf.truncate(mark);
        if stop {
            return true;
        }
    }
    false
}

/// Pairs each vocabulary word with every variant of it found in `dom_lexicon`.
pub fn extract_spelling_pairs(
    src_vocab: &Vocabulary,
    dom_lexicon: &HashSet<String>,
    rules: &MappingRuleSet,
    src: &ScriptInventory,
) -> Vec<SpellingPair> {
    let mut out = BTreeSet::new();
    for (word, _) in src_vocab.sorted() {
        for variant in spelling_variants(word, rules, src) {
            if dom_lexicon.contains(&variant) {
                out.insert(SpellingPair {
                    src_word: word.to_string(),
                    dom_word: variant,
                    provenance: Provenance::RuleDerived,
                });
            }
        }
    }
    out.into_iter().collect()
}
