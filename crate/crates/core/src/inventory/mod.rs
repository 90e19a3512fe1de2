//! Script inventories, grapheme mapping rules and the script-ratio measure.

mod ratio;
mod rules;
pub mod shipped;

pub use ratio::script_ratio;
pub use rules::{compile_rules, parse_rules, MappingRule, MappingRuleSet, Position};

use std::collections::BTreeSet;
use std::fmt;
use std::path::Path;
use std::str::FromStr;

use crate::error::{read_utf8, Error, Result};
use crate::grapheme::{Grapheme, Segmenter};

/// ISO 639-3 codes of the supported languages.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum LangCode {
    Azb,
    Mzn,
    Glk,
    Ckb,
    Kmr,
    Hac,
    Kas,
    Snd,
    Fas,
    Arb,
    Urd,
}

impl LangCode {
    pub const ALL: [LangCode; 11] = [
        LangCode::Azb,
        LangCode::Mzn,
        LangCode::Glk,
        LangCode::Ckb,
        LangCode::Kmr,
        LangCode::Hac,
        LangCode::Kas,
        LangCode::Snd,
        LangCode::Fas,
        LangCode::Arb,
        LangCode::Urd,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            LangCode::Azb => "azb",
            LangCode::Mzn => "mzn",
            LangCode::Glk => "glk",
            LangCode::Ckb => "ckb",
            LangCode::Kmr => "kmr",
            LangCode::Hac => "hac",
            LangCode::Kas => "kas",
            LangCode::Snd => "snd",
            LangCode::Fas => "fas",
            LangCode::Arb => "arb",
            LangCode::Urd => "urd",
        }
    }

    /// Persian, Arabic and Urdu act as dominant scripts; the rest are source languages.
    pub fn is_dominant(self) -> bool {
        matches!(self, LangCode::Fas | LangCode::Arb | LangCode::Urd)
    }
}

impl fmt::Display for LangCode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for LangCode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        LangCode::ALL
            .into_iter()
            .find(|l| l.as_str() == s.trim().to_ascii_lowercase())
            .ok_or_else(|| Error::Unknown {
                kind: "language code",
                name: s.to_string(),
            })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ScriptKind {
    Abjad,
    Alphabet,
}

impl FromStr for ScriptKind {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "abjad" => Ok(ScriptKind::Abjad),
            "alphabet" => Ok(ScriptKind::Alphabet),
            other => Err(format!("unknown script kind `{other}`")),
        }
    }
}

/// The grapheme set of one language's script.
///
/// Immutable after construction; `diacritics` is always a subset of `chars`.
#[derive(Debug, Clone)]
pub struct ScriptInventory {
    lang: LangCode,
    chars: BTreeSet<Grapheme>,
    diacritics: BTreeSet<Grapheme>,
    uses_zwnj: bool,
    script_kind: ScriptKind,
    segmenter: Segmenter,
}

impl ScriptInventory {
    pub fn new(
        lang: LangCode,
        chars: BTreeSet<Grapheme>,
        diacritics: BTreeSet<Grapheme>,
        uses_zwnj: bool,
        script_kind: ScriptKind,
    ) -> Result<Self> {
        if let Some(d) = diacritics.iter().find(|d| !chars.contains(*d)) {
            return Err(Error::InvalidInput(format!(
                "diacritic {} is not in the {lang} inventory",
                d.to_token()
            )));
        }
        if let Some(g) = chars
            .iter()
            .find(|g| g.char_len() > 2 || g.as_str().chars().any(|c| c.is_ascii_whitespace()))
        {
            return Err(Error::InvalidInput(format!(
                "grapheme {} must be 1-2 non-whitespace code points",
                g.to_token()
            )));
        }
        let segmenter = Segmenter::new(&chars);
        Ok(ScriptInventory {
            lang,
            chars,
            diacritics,
            uses_zwnj,
            script_kind,
            segmenter,
        })
    }

    pub fn lang(&self) -> LangCode {
        self.lang
    }

    pub fn chars(&self) -> &BTreeSet<Grapheme> {
        &self.chars
    }

    pub fn diacritics(&self) -> &BTreeSet<Grapheme> {
        &self.diacritics
    }

    pub fn uses_zwnj(&self) -> bool {
        self.uses_zwnj
    }

    pub fn script_kind(&self) -> ScriptKind {
        self.script_kind
    }

    pub fn contains(&self, g: &Grapheme) -> bool {
        self.chars.contains(g)
    }

    pub fn is_diacritic(&self, g: &Grapheme) -> bool {
        self.diacritics.contains(g)
    }

    /// Whether any inventory grapheme uses `c`.
    pub fn covers_char(&self, c: char) -> bool {
        self.chars.iter().any(|g| g.as_str().contains(c))
    }

    /// Splits `text` into graphemes, longest inventory match first.
    pub fn segment(&self, text: &str) -> Vec<Grapheme> {
        self.segmenter.segment(text)
    }
}

/// Loads an inventory file.
///
/// Line-oriented, tab-separated, `#` starts a comment:
///
/// ```text
/// lang        ckb
/// script_kind alphabet
/// uses_zwnj   false
/// char        U+06C6
/// diacritic   U+064E
/// ```
pub fn load_inventory(path: &Path) -> Result<ScriptInventory> {
    let text = read_utf8(path)?;
    parse_inventory(&text, &path.display().to_string())
}

pub fn parse_inventory(text: &str, origin: &str) -> Result<ScriptInventory> {
    let mut lang = None;
    let mut kind = None;
    let mut zwnj = None;
    let mut chars = BTreeSet::new();
    let mut diacritics = BTreeSet::new();

    for (idx, raw) in text.lines().enumerate() {
        let line_no = idx + 1;
        let line = strip_comment(raw);
        if line.trim().is_empty() {
            continue;
        }
        let fields: Vec<&str> = line.split('\t').map(str::trim).filter(|f| !f.is_empty()).collect();
        let err = |m: String| Error::parse(origin, line_no, m);
        match fields.as_slice() {
            ["lang", code] => {
                lang = Some(code.parse::<LangCode>().map_err(|e| err(e.to_string()))?);
            }
            ["script_kind", k] => kind = Some(k.parse::<ScriptKind>().map_err(err)?),
            ["uses_zwnj", v] => {
                zwnj = Some(match *v {
                    "true" => true,
                    "false" => false,
                    other => return Err(err(format!("expected true/false, got `{other}`"))),
                })
            }
            [tag @ ("char" | "diacritic"), token] => {
                let g: Grapheme = token.parse().map_err(|e: Error| err(e.to_string()))?;
                if g.char_len() > 2 {
                    return Err(err(format!("grapheme {token} has more than two code points")));
                }
                if g.as_str().chars().any(|c| c.is_ascii_whitespace()) {
                    return Err(err(format!("grapheme {token} contains whitespace")));
                }
                if !chars.insert(g.clone()) {
                    return Err(err(format!("duplicate grapheme {token}")));
                }
                if *tag == "diacritic" {
                    diacritics.insert(g);
                }
            }
            _ => return Err(err(format!("unrecognized line `{}`", line.trim()))),
        }
    }

    let missing = |what: &str| Error::parse(origin, 0, format!("missing `{what}` declaration"));
    let lang = lang.ok_or_else(|| missing("lang"))?;
    let kind = kind.ok_or_else(|| missing("script_kind"))?;
    let zwnj = zwnj.ok_or_else(|| missing("uses_zwnj"))?;
    ScriptInventory::new(lang, chars, diacritics, zwnj, kind)
}

pub(crate) fn strip_comment(line: &str) -> &str {
    match line.find('#') {
        Some(i) => &line[..i],
        None => line,
    }
}
