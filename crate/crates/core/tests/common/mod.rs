//! Deterministic synthetic corpora for the integration and acceptance tests.
//!
//! Each language gets a Zipfian lexicon built from its own inventory letters.
//! {azb, glk, mzn} and {ckb, kmr, hac} additionally share a pool of words
//! spelled with letters all members have, so group members are genuinely
//! confusable on short sentences.
#![allow(dead_code)]

pub mod oracle;

use std::collections::{BTreeSet, HashSet};

use rand::distributions::WeightedIndex;
use rand::prelude::*;
use rand_chacha::ChaCha8Rng;

use scriptnorm::alignment::{build_alignment_matrix, extract_spelling_pairs, CharAlignmentMatrix};
use scriptnorm::corpus::build_vocabulary;
use scriptnorm::inventory::{shipped, LangCode};
use scriptnorm::ScriptInventory;

pub const GROUP_WEST: [LangCode; 3] = [LangCode::Azb, LangCode::Glk, LangCode::Mzn];
pub const GROUP_KURDISH: [LangCode; 3] = [LangCode::Ckb, LangCode::Kmr, LangCode::Hac];

const LEXICON: usize = 1500;
const SHARED: usize = 1500;
const P_SHARED: f64 = 0.5;

fn lang_seed(lang: LangCode) -> u64 {
    LangCode::ALL.iter().position(|l| *l == lang).unwrap() as u64 + 1
}

fn letters(inv: &ScriptInventory) -> Vec<char> {
    inv.chars()
        .iter()
        .filter(|g| !inv.is_diacritic(g) && g.char_len() == 1)
        .map(|g| g.as_str().chars().next().unwrap())
        .collect()
}

fn diacritics(inv: &ScriptInventory) -> Vec<char> {
    inv.diacritics()
        .iter()
        .filter(|g| g.char_len() == 1)
        .map(|g| g.as_str().chars().next().unwrap())
        .collect()
}

fn make_words(letters: &[char], marks: &[char], zwnj: bool, n: usize, rng: &mut ChaCha8Rng) -> Vec<String> {
    let mut seen = HashSet::new();
    let mut out = Vec::with_capacity(n);
    while out.len() < n {
        let len = rng.gen_range(2..=7);
        let mut w = String::new();
        for i in 0..len {
            w.push(*letters.choose(rng).unwrap());
            if !marks.is_empty() && rng.gen_bool(0.08) {
                w.push(*marks.choose(rng).unwrap());
            }
            if zwnj && i + 1 < len && i > 0 && rng.gen_bool(0.03) {
                w.push('\u{200C}');
            }
        }
        if seen.insert(w.clone()) {
            out.push(w);
        }
    }
    out
}

pub fn group_of(lang: LangCode) -> Option<&'static [LangCode; 3]> {
    if GROUP_WEST.contains(&lang) {
        Some(&GROUP_WEST)
    } else if GROUP_KURDISH.contains(&lang) {
        Some(&GROUP_KURDISH)
    } else {
        None
    }
}

fn shared_pool(group: &[LangCode; 3]) -> Vec<String> {
    let invs: Vec<ScriptInventory> = group.iter().map(|l| shipped::inventory(*l)).collect();
    let common: BTreeSet<char> = invs
        .iter()
        .map(|inv| letters(inv).into_iter().collect::<BTreeSet<char>>())
        .reduce(|a, b| a.intersection(&b).copied().collect())
        .unwrap();
    let common: Vec<char> = common.into_iter().collect();
    let mut rng = ChaCha8Rng::seed_from_u64(1000 + lang_seed(group[0]));
    make_words(&common, &[], false, SHARED, &mut rng)
}

/// The language's own words, most frequent first.
pub fn lexicon(lang: LangCode) -> Vec<String> {
    let inv = shipped::inventory(lang);
    let mut rng = ChaCha8Rng::seed_from_u64(lang_seed(lang));
    make_words(&letters(&inv), &diacritics(&inv), inv.uses_zwnj(), LEXICON, &mut rng)
}

fn zipf(n: usize) -> WeightedIndex<f64> {
    WeightedIndex::new((0..n).map(|r| 1.0 / (r as f64 + 1.0))).unwrap()
}

/// `n` sentences of 5-20 space-separated words. `stream` selects an
/// independent draw from the same distribution.
pub fn sentences(lang: LangCode, n: usize, stream: u64) -> Vec<String> {
    let own = lexicon(lang);
    let shared = group_of(lang).map(shared_pool);
    let own_z = zipf(own.len());
    let shared_z = zipf(SHARED);
    let mut rng = ChaCha8Rng::seed_from_u64(lang_seed(lang) * 7919 + stream * 104_729);
    (0..n)
        .map(|_| {
            let len = rng.gen_range(5..=20);
            (0..len)
                .map(|_| match &shared {
                    Some(pool) if rng.gen_bool(P_SHARED) => pool[shared_z.sample(&mut rng)].as_str(),
                    _ => own[own_z.sample(&mut rng)].as_str(),
                })
                .collect::<Vec<_>>()
                .join(" ")
        })
        .collect()
}

/// The pipeline's matrix for a pair: spelling pairs mined from the two
/// fixture corpora, aligned and merged with the shipped rules.
pub fn pair_matrix(src: LangCode, dom: LangCode, src_sentences: &[String]) -> CharAlignmentMatrix {
    let src_inv = shipped::inventory(src);
    let dom_inv = shipped::inventory(dom);
    let rules = shipped::rules(src, dom).unwrap();
    let vocab = build_vocabulary(&src_sentences.join("\n"), 3).unwrap();
    let dom_lex: HashSet<String> = sentences(dom, 500, 99)
        .iter()
        .flat_map(|s| s.split(' ').map(str::to_string).collect::<Vec<_>>())
        .collect();
    let pairs = extract_spelling_pairs(&vocab, &dom_lex, &rules, &src_inv);
    build_alignment_matrix(&pairs, &rules, &src_inv, &dom_inv).unwrap()
}

/// A one-to-one rule-only matrix sending CKB letters to ARB letters that
/// CKB does not have, so every substitution is recoverable.
pub fn bijective_matrix() -> CharAlignmentMatrix {
    use scriptnorm::alignment::Origin;
    use scriptnorm::Grapheme;
    let ckb = shipped::inventory(LangCode::Ckb);
    let arb = shipped::inventory(LangCode::Arb);
    let sources = letters(&ckb);
    let targets: Vec<char> = letters(&arb).into_iter().filter(|c| !ckb.covers_char(*c)).collect();
    assert!(targets.len() >= 5);
    CharAlignmentMatrix::from_entries(
        LangCode::Ckb,
        LangCode::Arb,
        sources.iter().zip(&targets).map(|(s, t)| {
            (vec![Grapheme::from_char(*s)], vec![Grapheme::from_char(*t)], 1.0, Origin::Rule)
        }),
    )
    .unwrap()
}

/// Clean sentences for all 11 labels plus pooled ALL-level noisy sentences
/// for every source language, across all of its shipped pairs.
pub fn langid_data(n_clean: usize, n_per_pair: usize, seed: u64) -> scriptnorm::langid::LangIdData {
    use scriptnorm::langid::{LabelData, LangIdData};
    use scriptnorm::noise::{generate_parallel_datasets, NoiseConfig, NoiseLevel};
    let mut data = LangIdData::new();
    for lang in LangCode::ALL {
        let mut label = LabelData {
            clean: sentences(lang, n_clean, 10),
            ..Default::default()
        };
        let mut pooled = Vec::new();
        for (src, dom) in shipped::PAIRS.iter().copied().filter(|(s, _)| *s == lang) {
            let corpus = sentences(src, n_per_pair, 20);
            let m = pair_matrix(src, dom, &corpus);
            let sets = generate_parallel_datasets(&corpus, &m, &NoiseConfig::new(seed)).unwrap();
            pooled.extend(sets.last().unwrap().pairs.iter().map(|p| p.noisy.clone()));
        }
        if !pooled.is_empty() {
            label.noisy.insert(NoiseLevel::All, pooled);
        }
        data.insert(lang.as_str().to_string(), label);
    }
    data
}
