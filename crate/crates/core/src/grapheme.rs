//! Graphemes as short code-point sequences, and longest-match segmentation.
//!
//! A grapheme here is one or two Unicode scalar values (e.g. a letter, a
//! harakat mark, or a digraph such as U+062C U+06BE). Text is split into
//! graphemes by scanning left to right and preferring the longest known
//! multi-code-point grapheme; anything else becomes a single-char grapheme.

use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use crate::error::Error;

#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Grapheme(String);

impl Grapheme {
    pub fn new(s: impl Into<String>) -> Option<Self> {
        let s = s.into();
        if s.is_empty() {
            None
        } else {
            Some(Grapheme(s))
        }
    }

    pub fn from_char(c: char) -> Self {
        Grapheme(c.to_string())
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }

    pub fn char_len(&self) -> usize {
        self.0.chars().count()
    }

    /// `U+0686+U+06BE` style token.
    pub fn to_token(&self) -> String {
        codepoint_token(&self.0)
    }

    pub fn is_whitespace(&self) -> bool {
        self.0.chars().all(char::is_whitespace)
    }
}

impl fmt::Debug for Grapheme {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}({})", self.0, self.to_token())
    }
}

impl fmt::Display for Grapheme {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl FromStr for Grapheme {
    type Err = Error;

    fn from_str(token: &str) -> Result<Self, Self::Err> {
        let s = parse_codepoints(token).map_err(Error::InvalidInput)?;
        Ok(Grapheme(s))
    }
}

/// Renders every scalar of `s` as `U+XXXX`, joined by `+`.
pub fn codepoint_token(s: &str) -> String {
    s.chars()
        .map(|c| format!("U+{:04X}", c as u32))
        .collect::<Vec<_>>()
        .join("+")
}

/// Parses `U+XXXX` or `U+XXXX+U+YYYY...` into the string it denotes.
pub fn parse_codepoints(token: &str) -> Result<String, String> {
    let mut out = String::new();
    for part in token.split('+').collect::<Vec<_>>().chunks(2) {
        // "U+0626+U+06C6" splits into ["U", "0626", "U", "06C6"]
        let [u, hex] = part else {
            return Err(format!("malformed code point token `{token}`"));
        };
        if *u != "U" || hex.len() < 4 || hex.len() > 6 {
            return Err(format!("malformed code point token `{token}`"));
        }
        let value =
            u32::from_str_radix(hex, 16).map_err(|_| format!("malformed code point token `{token}`"))?;
        let c = char::from_u32(value).ok_or_else(|| format!("invalid scalar value in `{token}`"))?;
        out.push(c);
    }
    if out.is_empty() {
        return Err(format!("empty code point token `{token}`"));
    }
    Ok(out)
}

/// A grapheme sequence rendered as space-separated tokens, `∅` when empty.
pub fn seq_token(seq: &[Grapheme]) -> String {
    if seq.is_empty() {
        DELETION.to_string()
    } else {
        seq.iter().map(Grapheme::to_token).collect::<Vec<_>>().join(" ")
    }
}

pub fn parse_seq_token(token: &str) -> Result<Vec<Grapheme>, String> {
    if token == DELETION {
        return Ok(Vec::new());
    }
    token
        .split(' ')
        .map(|t| parse_codepoints(t).map(Grapheme))
        .collect()
}

pub fn seq_string(seq: &[Grapheme]) -> String {
    seq.iter().map(Grapheme::as_str).collect()
}

/// Marker for an empty target (deletion).
pub const DELETION: &str = "∅";

/// Longest-match segmenter over a set of known multi-code-point graphemes.
#[derive(Debug, Clone, Default)]
pub struct Segmenter {
    // only graphemes longer than one scalar need lookups
    multi: BTreeSet<String>,
    max_chars: usize,
}

impl Segmenter {
    pub fn new<'a>(graphemes: impl IntoIterator<Item = &'a Grapheme>) -> Self {
        let multi: BTreeSet<String> = graphemes
            .into_iter()
            .filter(|g| g.char_len() > 1)
            .map(|g| g.0.clone())
            .collect();
        let max_chars = multi.iter().map(|s| s.chars().count()).max().unwrap_or(1);
        Segmenter { multi, max_chars }
    }

    pub fn segment(&self, text: &str) -> Vec<Grapheme> {
        let chars: Vec<char> = text.chars().collect();
        let mut out = Vec::with_capacity(chars.len());
        let mut i = 0;
        while i < chars.len() {
            let mut taken = 1;
            for len in (2..=self.max_chars.min(chars.len() - i)).rev() {
                let candidate: String = chars[i..i + len].iter().collect();
                if self.multi.contains(&candidate) {
                    taken = len;
                    break;
                }
            }
            out.push(Grapheme(chars[i..i + taken].iter().collect()));
            i += taken;
        }
        out
    }
}
