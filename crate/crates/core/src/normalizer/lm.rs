use std::collections::{BTreeMap, HashMap};

use crate::checksum::sha256_hex;
use crate::error::{Error, Result};
use crate::grapheme::{codepoint_token, parse_codepoints};

pub const BOS: u32 = 0;
pub const EOS: u32 = 1;
pub const UNK: u32 = 2;
const FIRST_CHAR: u32 = 3;
const ID_BITS: u32 = 24;

/// Character n-gram model with add-α smoothing, backed off through
/// shorter contexts.
#[derive(Debug, Clone, PartialEq)]
pub struct CharLM {
    order: usize,
    alpha: f64,
    chars: Vec<char>,
    ids: HashMap<char, u32>,
    /// per context length: context -> next -> count
    counts: Vec<HashMap<u128, HashMap<u32, u64>>>,
    /// per context length: context -> total
    totals: Vec<HashMap<u128, u64>>,
    corpus_checksum: String,
}

/// The last `order - 1` symbol ids, newest in the low bits.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct LmState(u128);

fn push(ctx: u128, id: u32, keep: usize) -> u128 {
    if keep == 0 {
        return 0;
    }
    let mask = if keep as u32 * ID_BITS >= 128 {
        u128::MAX
    } else {
        (1u128 << (keep as u32 * ID_BITS)) - 1
    };
    ((ctx << ID_BITS) | u128::from(id)) & mask
}

fn suffix(ctx: u128, len: usize) -> u128 {
    if len == 0 {
        0
    } else {
        ctx & ((1u128 << (len as u32 * ID_BITS)) - 1)
    }
}

impl CharLM {
    pub fn train<'a>(sentences: impl IntoIterator<Item = &'a str>, order: usize, alpha: f64) -> Result<Self> {
        if !(1..=5).contains(&order) {
            return Err(Error::Config(format!("LM order must be in 1..=5, got {order}")));
        }
        if !(alpha > 0.0) {
            return Err(Error::Config(format!("alpha must be positive, got {alpha}")));
        }
        let sentences: Vec<&str> = sentences.into_iter().collect();
        let mut chars: Vec<char> = sentences.iter().flat_map(|s| s.chars()).collect();
        chars.sort_unstable();
        chars.dedup();
        let mut lm = CharLM::empty(order, alpha, chars);
        let mut hasher_input = String::new();
        for s in &sentences {
            hasher_input.push_str(s);
            hasher_input.push('\n');
            let ids: Vec<u32> = s.chars().map(|c| lm.id(c)).chain(std::iter::once(EOS)).collect();
            let mut ctx = lm.start();
            for id in ids {
                lm.count(ctx.0, id, 1);
                ctx = lm.advance(ctx, id);
            }
        }
        lm.corpus_checksum = sha256_hex(hasher_input);
        Ok(lm)
    }

    fn empty(order: usize, alpha: f64, chars: Vec<char>) -> Self {
        let ids = chars
            .iter()
            .enumerate()
            .map(|(i, c)| (*c, FIRST_CHAR + i as u32))
            .collect();
        CharLM {
            order,
            alpha,
            chars,
            ids,
            counts: vec![HashMap::new(); order],
            totals: vec![HashMap::new(); order],
            corpus_checksum: String::new(),
        }
    }

    fn count(&mut self, ctx: u128, id: u32, n: u64) {
        for len in 0..self.order {
            let c = suffix(ctx, len);
            *self.counts[len].entry(c).or_default().entry(id).or_default() += n;
            *self.totals[len].entry(c).or_default() += n;
        }
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    /// Predictable symbols: every training character, EOS and UNK.
    pub fn vocab_size(&self) -> usize {
        self.chars.len() + 2
    }

    pub fn id(&self, c: char) -> u32 {
        self.ids.get(&c).copied().unwrap_or(UNK)
    }

    /// The state before the first character: all BOS.
    pub fn start(&self) -> LmState {
        let mut ctx = 0;
        for _ in 0..self.order - 1 {
            ctx = push(ctx, BOS, self.order - 1);
        }
        LmState(ctx)
    }

    pub fn advance(&self, state: LmState, id: u32) -> LmState {
        LmState(push(state.0, id, self.order - 1))
    }

    /// ln P(id | state).
    ///
    /// Add-α at every order, with the α·|V| pseudo-counts spread according
    /// to the next shorter context's estimate instead of uniformly. At the
    /// unigram order this is plain add-α.
    pub fn log_prob(&self, state: LmState, id: u32) -> f64 {
        let prior = self.alpha * self.vocab_size() as f64;
        let mut p = 1.0 / self.vocab_size() as f64;
        for len in 0..self.order {
            let c = suffix(state.0, len);
            let Some(&total) = self.totals[len].get(&c) else {
                // longer contexts contain this one, so they are unseen too
                break;
            };
            let n = self.counts[len][&c].get(&id).copied().unwrap_or(0);
            p = (n as f64 + prior * p) / (total as f64 + prior);
        }
        p.ln()
    }

    /// Scores `text` from `state`, returning the new state and ln-probability.
    pub fn score_str(&self, mut state: LmState, text: &str) -> (LmState, f64) {
        let mut lp = 0.0;
        for c in text.chars() {
            let id = self.id(c);
            lp += self.log_prob(state, id);
            state = self.advance(state, id);
        }
        (state, lp)
    }

    /// ln P(sentence, EOS).
    pub fn sentence_log_prob(&self, sentence: &str) -> f64 {
        let (state, lp) = self.score_str(self.start(), sentence);
        lp + self.log_prob(state, EOS)
    }

    /// Probability of every predictable symbol after `state`, in id order
    /// (EOS, UNK, then characters).
    pub fn distribution(&self, state: LmState) -> Vec<f64> {
        std::iter::once(EOS)
            .chain(std::iter::once(UNK))
            .chain(FIRST_CHAR..FIRST_CHAR + self.chars.len() as u32)
            .map(|id| self.log_prob(state, id).exp())
            .collect()
    }

    fn symbol_token(&self, id: u32) -> String {
        match id {
            BOS => "<s>".into(),
            EOS => "</s>".into(),
            UNK => "<unk>".into(),
            _ => codepoint_token(&self.chars[(id - FIRST_CHAR) as usize].to_string()),
        }
    }

    fn parse_symbol(&self, tok: &str) -> std::result::Result<u32, String> {
        match tok {
            "<s>" => Ok(BOS),
            "</s>" => Ok(EOS),
            "<unk>" => Ok(UNK),
            _ => {
                let s = parse_codepoints(tok)?;
                let mut it = s.chars();
                match (it.next(), it.next()) {
                    (Some(c), None) => self.ids.get(&c).copied().ok_or_else(|| format!("{tok} is not in the vocabulary")),
                    _ => Err(format!("`{tok}` is not a single character")),
                }
            }
        }
    }

    /// Header, `char` lines in id order, then `ngram\tcontext\tnext\tcount`
    /// lines for full-length contexts (shorter orders are re-derived on load).
    pub fn to_tsv(&self) -> String {
        let mut out = format!(
            "# charlm order {} alpha {} corpus_sha256 {}\n",
            self.order,
            self.alpha,
            if self.corpus_checksum.is_empty() { "-" } else { &self.corpus_checksum }
        );
        for c in &self.chars {
            out.push_str(&format!("char\t{}\n", codepoint_token(&c.to_string())));
        }
        let top = self.order - 1;
        let mut rows: BTreeMap<(Vec<u32>, u32), u64> = BTreeMap::new();
        for (ctx, nexts) in &self.counts[top] {
            let ids: Vec<u32> = (0..top)
                .rev()
                .map(|k| ((ctx >> (k as u32 * ID_BITS)) & ((1 << ID_BITS) - 1)) as u32)
                .collect();
            for (next, n) in nexts {
                rows.insert((ids.clone(), *next), *n);
            }
        }
        for ((ctx, next), n) in rows {
            let ctx_tok: Vec<String> = ctx.iter().map(|id| self.symbol_token(*id)).collect();
            out.push_str(&format!(
                "ngram\t{}\t{}\t{n}\n",
                if ctx_tok.is_empty() { "-".to_string() } else { ctx_tok.join(" ") },
                self.symbol_token(next)
            ));
        }
        out
    }

    pub fn from_tsv(text: &str, origin: &str) -> Result<Self> {
        let mut lines = text.lines().enumerate();
        let header = lines.next().map(|(_, l)| l).unwrap_or_default();
        let words: Vec<&str> = header.split_whitespace().collect();
        let ["#", "charlm", "order", order, "alpha", alpha, "corpus_sha256", checksum] = words[..] else {
            return Err(Error::parse(origin, 1, "expected `# charlm order .. alpha .. corpus_sha256 ..` header"));
        };
        let order: usize = order.parse().map_err(|_| Error::parse(origin, 1, "bad order"))?;
        let alpha: f64 = alpha.parse().map_err(|_| Error::parse(origin, 1, "bad alpha"))?;
        if !(1..=5).contains(&order) || !(alpha > 0.0) {
            return Err(Error::parse(origin, 1, "order must be 1..=5 and alpha positive"));
        }
        let mut chars = Vec::new();
        let mut ngrams = Vec::new();
        for (idx, line) in lines {
            let f: Vec<&str> = line.split('\t').collect();
            match f[..] {
                ["char", tok] => {
                    let s = parse_codepoints(tok).map_err(|e| Error::parse(origin, idx + 1, e))?;
                    let c = s.chars().next().filter(|_| s.chars().count() == 1);
                    chars.push(c.ok_or_else(|| Error::parse(origin, idx + 1, "expected one character"))?);
                }
                ["ngram", ctx, next, n] => ngrams.push((idx + 1, ctx, next, n)),
                [""] => {}
                _ => return Err(Error::parse(origin, idx + 1, "expected a `char` or `ngram` line")),
            }
        }
        let mut lm = CharLM::empty(order, alpha, chars);
        for (line, ctx, next, n) in ngrams {
            let err = |e: String| Error::parse(origin, line, e);
            let mut packed = 0u128;
            let ctx_ids: Vec<&str> = if ctx == "-" { Vec::new() } else { ctx.split(' ').collect() };
            if ctx_ids.len() != order - 1 {
                return Err(err(format!("context must have {} symbols", order - 1)));
            }
            for tok in ctx_ids {
                packed = push(packed, lm.parse_symbol(tok).map_err(err)?, order - 1);
            }
            let next = lm.parse_symbol(next).map_err(err)?;
            let n: u64 = n.parse().map_err(|_| err(format!("bad count `{n}`")))?;
            lm.count(packed, next, n);
        }
        lm.corpus_checksum = if checksum == "-" { String::new() } else { checksum.to_string() };
        Ok(lm)
    }
}
