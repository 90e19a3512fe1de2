//! Raw-text cleaning, tokenization, sentence extraction and vocabularies.

use std::collections::{BTreeMap, HashMap};
use std::sync::LazyLock;

use regex::Regex;

use crate::error::{Error, Result};
use crate::inventory::ScriptInventory;

pub const ZWNJ: char = '\u{200C}';

static URL: LazyLock<Regex> =
    LazyLock::new(|| Regex::new(r"(?i)(?:https?://|ftp://|www\.)\S+").unwrap());
static EMAIL: LazyLock<Regex> =
    LazyLock::new(|| Regex::new(r"[\w.+\-]+@[\w\-]+(?:\.[\w\-]+)+").unwrap());
// numeric dates only (2022/12/01, ۱۴۰۱-۰۹-۱۰, 01.12.2022); prose dates are left alone
static DATE: LazyLock<Regex> =
    LazyLock::new(|| Regex::new(r"\b\d{1,4}[/.\-]\d{1,2}[/.\-]\d{1,4}\b").unwrap());

/// Punctuation detached by the tokenizer.
pub fn is_punctuation(c: char) -> bool {
    c.is_ascii_punctuation()
        || matches!(
            c,
            '\u{060C}' // arabic comma
                | '\u{061B}' // arabic semicolon
                | '\u{061F}' // arabic question mark
                | '\u{06D4}' // arabic full stop
                | '\u{066A}'
                | '\u{066B}'
                | '\u{066C}'
                | '«'
                | '»'
        )
}

fn is_sentence_end(c: char) -> bool {
    matches!(c, '.' | '\u{06D4}' | '\u{061F}' | '?' | '!' | '\n')
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CleanConfig {
    pub strip_urls_emails_dates: bool,
    pub unify_numerals: bool,
    pub strip_zwnj: bool,
    pub keep_only_perso_arabic: bool,
}

impl CleanConfig {
    /// Everything on, with ZWNJ kept for scripts that use it systematically.
    pub fn for_inventory(inv: &ScriptInventory) -> Self {
        CleanConfig {
            strip_urls_emails_dates: true,
            unify_numerals: true,
            strip_zwnj: !inv.uses_zwnj(),
            keep_only_perso_arabic: true,
        }
    }

    pub fn validate(&self, inv: &ScriptInventory) -> Result<()> {
        if self.strip_zwnj && inv.uses_zwnj() {
            return Err(Error::Config(format!(
                "{} uses ZWNJ systematically; strip_zwnj must be false",
                inv.lang()
            )));
        }
        Ok(())
    }
}

/// What cleaning removed, for auditing.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct RemovalLog {
    pub urls: usize,
    pub emails: usize,
    pub dates: usize,
    pub symbols: BTreeMap<char, usize>,
}

impl RemovalLog {
    pub fn to_tsv(&self) -> String {
        let mut out = format!("urls\t{}\nemails\t{}\ndates\t{}\n", self.urls, self.emails, self.dates);
        for (c, n) in &self.symbols {
            out.push_str(&format!("U+{:04X}\t{n}\n", *c as u32));
        }
        out
    }
}

/// Maps Eastern Arabic and Farsi digits to ASCII.
pub fn unify_digit(c: char) -> char {
    match c {
        '\u{0660}'..='\u{0669}' => char::from(b'0' + (c as u32 - 0x0660) as u8),
        '\u{06F0}'..='\u{06F9}' => char::from(b'0' + (c as u32 - 0x06F0) as u8),
        _ => c,
    }
}

fn is_native_digit(c: char) -> bool {
    matches!(c, '\u{0660}'..='\u{0669}' | '\u{06F0}'..='\u{06F9}')
}

/// Cleans raw bytes, rejecting invalid UTF-8 with the offending byte offset.
pub fn clean_bytes(raw: &[u8], cfg: &CleanConfig, inv: &ScriptInventory) -> Result<String> {
    let text = std::str::from_utf8(raw).map_err(|e| Error::InvalidUtf8 {
        offset: e.valid_up_to(),
    })?;
    Ok(clean_text(text, cfg, inv))
}

pub fn clean_text(raw: &str, cfg: &CleanConfig, inv: &ScriptInventory) -> String {
    clean_text_audited(raw, cfg, inv).0
}

/// Cleans text line by line and reports what was dropped.
///
/// Repeats the pass until the text is stable, so the result is a fixed
/// point: cleaning it again changes nothing.
pub fn clean_text_audited(raw: &str, cfg: &CleanConfig, inv: &ScriptInventory) -> (String, RemovalLog) {
    let mut log = RemovalLog::default();
    let mut current = clean_pass(raw, cfg, inv, &mut log);
    loop {
        let next = clean_pass(&current, cfg, inv, &mut log);
        if next == current {
            return (current, log);
        }
        current = next;
    }
}

fn clean_pass(raw: &str, cfg: &CleanConfig, inv: &ScriptInventory, log: &mut RemovalLog) -> String {
    let mut text = raw.to_string();
    if cfg.strip_urls_emails_dates {
        for (re, counter) in [(&*URL, &mut log.urls), (&*EMAIL, &mut log.emails), (&*DATE, &mut log.dates)] {
            let n = re.find_iter(&text).count();
            if n > 0 {
                *counter += n;
                text = re.replace_all(&text, " ").into_owned();
            }
        }
    }

    let mut out_lines = Vec::new();
    for line in text.lines() {
        let mut cleaned = String::with_capacity(line.len());
        for c in line.chars() {
            let c = if cfg.unify_numerals { unify_digit(c) } else { c };
            if c == ZWNJ && cfg.strip_zwnj {
                continue;
            }
            if cfg.keep_only_perso_arabic && !is_relevant(c, cfg, inv) {
                *log.symbols.entry(c).or_default() += 1;
                // dropped runs become word breaks
                cleaned.push(' ');
                continue;
            }
            cleaned.push(c);
        }
        let collapsed = cleaned.split_whitespace().collect::<Vec<_>>().join(" ");
        if !collapsed.is_empty() {
            out_lines.push(collapsed);
        }
    }
    out_lines.join("\n")
}

fn is_relevant(c: char, cfg: &CleanConfig, inv: &ScriptInventory) -> bool {
    c.is_whitespace()
        || c.is_ascii_digit()
        || is_punctuation(c)
        || (c == ZWNJ && !cfg.strip_zwnj)
        || (!cfg.unify_numerals && is_native_digit(c))
        || inv.covers_char(c)
        || (is_arabic_script(c) && c.is_alphabetic())
}

/// Arabic-script blocks, presentation forms included. Letters from these
/// are kept even outside the inventory: they are the noise being studied.
pub fn is_arabic_script(c: char) -> bool {
    matches!(
        c,
        '\u{0600}'..='\u{06FF}'
            | '\u{0750}'..='\u{077F}'
            | '\u{08A0}'..='\u{08FF}'
            | '\u{FB50}'..='\u{FDFF}'
            | '\u{FE70}'..='\u{FEFF}'
    )
}

/// Whitespace tokenization with punctuation split off into its own tokens.
/// ZWNJ stays inside the word it joins.
pub fn tokenize(text: &str) -> Vec<String> {
    let mut tokens = Vec::new();
    for chunk in text.split_whitespace() {
        let mut word = String::new();
        for c in chunk.chars() {
            if is_punctuation(c) {
                if !word.is_empty() {
                    tokens.push(std::mem::take(&mut word));
                }
                tokens.push(c.to_string());
            } else {
                word.push(c);
            }
        }
        if !word.is_empty() {
            tokens.push(word);
        }
    }
    tokens
}

/// Splits on terminal punctuation and newlines, returning tokenized sentences
/// (tokens joined by single spaces) whose length lies in `[min_tokens, max_tokens]`.
pub fn extract_sentences(corpus: &str, min_tokens: usize, max_tokens: usize) -> Vec<String> {
    corpus
        .split(is_sentence_end)
        .filter_map(|segment| {
            let tokens = tokenize(segment);
            (min_tokens..=max_tokens)
                .contains(&tokens.len())
                .then(|| tokens.join(" "))
        })
        .collect()
}

pub const DEFAULT_MIN_TOKENS: usize = 5;
pub const DEFAULT_MAX_TOKENS: usize = 20;

/// Word frequencies at or above a minimum count.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Vocabulary {
    entries: HashMap<String, u64>,
    min_freq: u32,
}

impl Vocabulary {
    pub fn min_freq(&self) -> u32 {
        self.min_freq
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn get(&self, word: &str) -> Option<u64> {
        self.entries.get(word).copied()
    }

    /// Descending count, then code point order.
    pub fn sorted(&self) -> Vec<(&str, u64)> {
        let mut items: Vec<(&str, u64)> = self.entries.iter().map(|(w, c)| (w.as_str(), *c)).collect();
        items.sort_by(|a, b| b.1.cmp(&a.1).then_with(|| a.0.cmp(b.0)));
        items
    }

    pub fn to_tsv(&self) -> String {
        self.sorted()
            .into_iter()
            .map(|(w, c)| format!("{w}\t{c}\n"))
            .collect()
    }

    pub fn from_tsv(text: &str, min_freq: u32) -> Result<Self> {
        check_min_freq(min_freq)?;
        let mut entries = HashMap::new();
        for (idx, line) in text.lines().enumerate() {
            if line.trim().is_empty() {
                continue;
            }
            let (word, count) = line
                .split_once('\t')
                .ok_or_else(|| Error::parse("vocabulary", idx + 1, "expected word<TAB>count"))?;
            let count: u64 = count
                .trim()
                .parse()
                .map_err(|_| Error::parse("vocabulary", idx + 1, format!("bad count `{count}`")))?;
            if word.is_empty() || word.chars().any(char::is_whitespace) {
                return Err(Error::parse("vocabulary", idx + 1, "word is empty or contains whitespace"));
            }
            if count >= u64::from(min_freq) {
                entries.insert(word.to_string(), count);
            }
        }
        Ok(Vocabulary { entries, min_freq })
    }
}

fn check_min_freq(min_freq: u32) -> Result<()> {
    if !(3..=10).contains(&min_freq) {
        return Err(Error::Config(format!("min_freq must be in [3, 10], got {min_freq}")));
    }
    Ok(())
}

/// Counts tokens (punctuation excluded) and keeps those seen at least `min_freq` times.
pub fn build_vocabulary(corpus: &str, min_freq: u32) -> Result<Vocabulary> {
    check_min_freq(min_freq)?;
    let mut counts: HashMap<String, u64> = HashMap::new();
    for token in tokenize(corpus) {
        if token.chars().all(is_punctuation) {
            continue;
        }
        *counts.entry(token).or_default() += 1;
    }
    counts.retain(|_, c| *c >= u64::from(min_freq));
    Ok(Vocabulary {
        entries: counts,
        min_freq,
    })
}
