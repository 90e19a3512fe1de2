use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::path::Path;
use std::str::FromStr;

use super::{strip_comment, LangCode, ScriptInventory};
use crate::error::{read_utf8, Error, Result};
use crate::grapheme::{parse_codepoints, seq_token, Grapheme, DELETION};

/// Where in a word a rule may fire.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Position {
    Anywhere,
    WordInitial,
    WordFinal,
}

impl Position {
    pub fn as_str(self) -> &'static str {
        match self {
            Position::Anywhere => "anywhere",
            Position::WordInitial => "word_initial",
            Position::WordFinal => "word_final",
        }
    }

    /// Whether a match of `len` graphemes starting at `start` in a word of
    /// `word_len` graphemes satisfies this constraint.
    pub fn admits(self, start: usize, len: usize, word_len: usize) -> bool {
        match self {
            Position::Anywhere => true,
            Position::WordInitial => start == 0,
            Position::WordFinal => start + len == word_len,
        }
    }
}

impl fmt::Display for Position {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Position {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "anywhere" => Ok(Position::Anywhere),
            "word_initial" => Ok(Position::WordInitial),
            "word_final" => Ok(Position::WordFinal),
            other => Err(format!("unknown position `{other}`")),
        }
    }
}

/// One source grapheme sequence and the dominant-script spellings it may take.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MappingRule {
    pub source: Vec<Grapheme>,
    /// An empty target is a deletion.
    pub targets: Vec<Vec<Grapheme>>,
    pub position: Position,
}

impl MappingRule {
    /// True for a rule `c -> [c]`.
    pub fn is_identity(&self) -> bool {
        self.targets.len() == 1 && self.targets[0] == self.source
    }
}

#[derive(Debug, Clone)]
pub struct MappingRuleSet {
    src_lang: LangCode,
    dom_lang: LangCode,
    rules: Vec<MappingRule>,
}

impl MappingRuleSet {
    /// Checks the structural invariants: sources of 1-2 graphemes, non-empty
    /// duplicate-free target lists of 0-2 graphemes each, and at most one rule
    /// per (source, position).
    pub fn new(src_lang: LangCode, dom_lang: LangCode, rules: Vec<MappingRule>) -> Result<Self> {
        let mut seen = BTreeSet::new();
        for rule in &rules {
            let shown = seq_token(&rule.source);
            if rule.source.is_empty() || rule.source.len() > 2 {
                return Err(Error::InvalidInput(format!("rule source {shown} must be 1-2 graphemes")));
            }
            if rule.targets.is_empty() {
                return Err(Error::InvalidInput(format!("rule for {shown} has no targets")));
            }
            if let Some(t) = rule.targets.iter().find(|t| t.len() > 2) {
                return Err(Error::InvalidInput(format!(
                    "target {} of {shown} exceeds two graphemes",
                    seq_token(t)
                )));
            }
            let distinct: BTreeSet<_> = rule.targets.iter().collect();
            if distinct.len() != rule.targets.len() {
                return Err(Error::InvalidInput(format!("rule for {shown} repeats a target")));
            }
            if !seen.insert((rule.source.clone(), rule.position)) {
                return Err(Error::InvalidInput(format!(
                    "duplicate rule for {shown} at position {}",
                    rule.position
                )));
            }
        }
        Ok(MappingRuleSet {
            src_lang,
            dom_lang,
            rules,
        })
    }

    pub fn src_lang(&self) -> LangCode {
        self.src_lang
    }

    pub fn dom_lang(&self) -> LangCode {
        self.dom_lang
    }

    pub fn rules(&self) -> &[MappingRule] {
        &self.rules
    }

    pub fn is_empty(&self) -> bool {
        self.rules.is_empty()
    }

    /// Rejects rules whose source is outside `src` or whose targets are outside `dom`.
    pub fn validate(&self, src: &ScriptInventory, dom: &ScriptInventory) -> Result<()> {
        for rule in &self.rules {
            if let Some(g) = rule.source.iter().find(|g| !src.contains(g)) {
                return Err(Error::InvalidInput(format!(
                    "unknown source grapheme {} ({g}) for {}",
                    g.to_token(),
                    src.lang()
                )));
            }
            for target in &rule.targets {
                if let Some(g) = target.iter().find(|g| !dom.contains(g)) {
                    return Err(Error::InvalidInput(format!(
                        "unknown target grapheme {} ({g}) for {}",
                        g.to_token(),
                        dom.lang()
                    )));
                }
            }
        }
        Ok(())
    }

    /// Swaps the direction of every (source, target) correspondence.
    /// Deletion targets have no inverse and are dropped.
    pub fn inverted(&self) -> MappingRuleSet {
        let mut merged: BTreeMap<(Vec<Grapheme>, Position), Vec<Vec<Grapheme>>> = BTreeMap::new();
        for rule in &self.rules {
            for target in rule.targets.iter().filter(|t| !t.is_empty()) {
                let slot = merged.entry((target.clone(), rule.position)).or_default();
                if !slot.contains(&rule.source) {
                    slot.push(rule.source.clone());
                }
            }
        }
        let rules = merged
            .into_iter()
            .map(|((source, position), targets)| MappingRule {
                source,
                targets,
                position,
            })
            .collect();
        MappingRuleSet {
            src_lang: self.dom_lang,
            dom_lang: self.src_lang,
            rules,
        }
    }
}

/// Reads and validates a rule file against both inventories.
///
/// Rule lines are `<source>\t<position>\t<target>[|<target>...]`, with `∅`
/// standing for deletion. Code point tokens are segmented with the inventory
/// they belong to, so `U+0626+U+06C6` names a two-grapheme source when the
/// inventory has no such compound.
pub fn compile_rules(path: &Path, src: &ScriptInventory, dom: &ScriptInventory) -> Result<MappingRuleSet> {
    let text = read_utf8(path)?;
    parse_rules(&text, &path.display().to_string(), src, dom)
}

pub fn parse_rules(text: &str, origin: &str, src: &ScriptInventory, dom: &ScriptInventory) -> Result<MappingRuleSet> {
    let mut rules = Vec::new();
    let mut seen: BTreeSet<(Vec<Grapheme>, Position)> = BTreeSet::new();

    for (idx, raw) in text.lines().enumerate() {
        let line_no = idx + 1;
        let line = strip_comment(raw);
        if line.trim().is_empty() {
            continue;
        }
        let err = |m: String| Error::parse(origin, line_no, m);
        let fields: Vec<&str> = line.split('\t').map(str::trim).filter(|f| !f.is_empty()).collect();
        match fields.as_slice() {
            ["src", code] => {
                let lang: LangCode = code.parse().map_err(|e: Error| err(e.to_string()))?;
                if lang != src.lang() {
                    return Err(err(format!("rule file is for {lang}, inventory is {}", src.lang())));
                }
            }
            ["dom", code] => {
                let lang: LangCode = code.parse().map_err(|e: Error| err(e.to_string()))?;
                if lang != dom.lang() {
                    return Err(err(format!("rule file targets {lang}, inventory is {}", dom.lang())));
                }
            }
            [source, position, targets] => {
                let source = parse_side(source, src, false).map_err(err)?;
                if source.len() > 2 {
                    return Err(err("rule source must be 1-2 graphemes".into()));
                }
                let position: Position = position.parse().map_err(err)?;
                let mut parsed = Vec::new();
                for t in targets.split('|').map(str::trim) {
                    if t.is_empty() {
                        return Err(err("empty target in list".into()));
                    }
                    let seq = parse_side(t, dom, true).map_err(err)?;
                    if seq.len() > 2 {
                        return Err(err(format!("target {t} exceeds two graphemes")));
                    }
                    if parsed.contains(&seq) {
                        return Err(err(format!("duplicate target {t}")));
                    }
                    parsed.push(seq);
                }
                if !seen.insert((source.clone(), position)) {
                    return Err(err(format!(
                        "duplicate rule for {} at position {position}",
                        seq_token(&source)
                    )));
                }
                rules.push(MappingRule {
                    source,
                    targets: parsed,
                    position,
                });
            }
            [_, _] => return Err(err("rule has an empty targets list".into())),
            _ => return Err(err(format!("unrecognized line `{}`", line.trim()))),
        }
    }

    let set = MappingRuleSet::new(src.lang(), dom.lang(), rules)?;
    set.validate(src, dom)?;
    Ok(set)
}

fn parse_side(token: &str, inv: &ScriptInventory, allow_empty: bool) -> Result<Vec<Grapheme>, String> {
    if token == DELETION {
        return if allow_empty {
            Ok(Vec::new())
        } else {
            Err("a rule source cannot be a deletion".into())
        };
    }
    let text = parse_codepoints(token)?;
    let seq = inv.segment(&text);
    if let Some(g) = seq.iter().find(|g| !inv.contains(g)) {
        return Err(format!(
            "unknown grapheme {} ({g}) in the {} inventory",
            g.to_token(),
            inv.lang()
        ));
    }
    Ok(seq)
}
