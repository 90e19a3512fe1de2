mod common;

use std::collections::HashMap;

use proptest::prelude::*;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use scriptnorm::corpus::{
    build_vocabulary, clean_text, extract_sentences, is_arabic_script, is_punctuation, tokenize, CleanConfig, ZWNJ,
};
use scriptnorm::inventory::{shipped, LangCode};

// fixture lines with the kinds of debris a dump contains
fn dirty_lines(lang: LangCode, n: usize) -> Vec<String> {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let junk = [
        "https://fa.wikipedia.org/wiki/x",
        "www.example.com",
        "user@mail.org",
        "۱۴۰۱/۰۹/۱۰",
        "2022-12-01",
        "Latin",
        "Кириллица",
        "हिन्दी",
        "٣٤",
        "  \t ",
        "،",
        "؟",
        "(",
    ];
    common::sentences(lang, n, 3)
        .into_iter()
        .map(|s| {
            let mut words: Vec<String> = s.split(' ').map(str::to_string).collect();
            for _ in 0..rng.gen_range(0..4) {
                let at = rng.gen_range(0..=words.len());
                words.insert(at, junk.choose(&mut rng).unwrap().to_string());
            }
            words.join(" ")
        })
        .collect()
}

#[test]
fn cleaning_is_idempotent_on_fixture_lines() {
    for lang in [LangCode::Ckb, LangCode::Fas, LangCode::Snd] {
        let inv = shipped::inventory(lang);
        let cfg = CleanConfig::for_inventory(&inv);
        for line in dirty_lines(lang, 100) {
            let once = clean_text(&line, &cfg, &inv);
            assert_eq!(clean_text(&once, &cfg, &inv), once, "{line}");
        }
    }
}

#[test]
fn cleaning_removes_scripts_and_debris() {
    let inv = shipped::inventory(LangCode::Fas);
    let cfg = CleanConfig::for_inventory(&inv);
    let out = clean_text("کتاب Latin Кириллица https://x.y a@b.cd ۱۴۰۱/۰۹/۱۰ خوب ۱۲", &cfg, &inv);
    assert_eq!(out, "کتاب خوب 12");
}

#[test]
fn foreign_perso_arabic_letters_stay_in_words() {
    // U+0647 and U+0643 are not Sorani letters but are what noisy text contains
    let inv = shipped::inventory(LangCode::Ckb);
    let cfg = CleanConfig::for_inventory(&inv);
    assert_eq!(clean_text("ڕۆژهەڵات كورد 😀 ©", &cfg, &inv), "ڕۆژهەڵات كورد");
}

#[test]
fn example_line_token_count() {
    let line = "فيه تمام";
    assert_eq!(tokenize(line).len(), line.split(' ').count());
}

#[test]
fn sentence_count_matches_recount() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let words = common::lexicon(LangCode::Kmr);
    let lines: Vec<String> = (0..100)
        .map(|_| {
            let n = rng.gen_range(1..=25);
            let mut s: Vec<&str> = (0..n).map(|_| words.choose(&mut rng).unwrap().as_str()).collect();
            if rng.gen_bool(0.3) {
                let at = rng.gen_range(0..s.len());
                s.insert(at, ".");
            }
            s.join(" ")
        })
        .collect();
    let corpus = lines.join("\n");
    // independent recount: split on the terminal marks, count space-separated chunks
    let expected = corpus
        .split(['.', '\n', '؟', '?', '!', '۔'])
        .filter(|seg| (5..=20).contains(&seg.split_whitespace().count()))
        .count();
    let got = extract_sentences(&corpus, 5, 20);
    assert_eq!(got.len(), expected);
    assert!(got.iter().all(|s| (5..=20).contains(&tokenize(s).len())));
}

#[test]
fn vocabulary_matches_hash_count() {
    let text = common::sentences(LangCode::Ckb, 300, 1).join("\n");
    let vocab = build_vocabulary(&text, 5).unwrap();
    let mut oracle: HashMap<&str, u64> = HashMap::new();
    for w in text.split_whitespace() {
        *oracle.entry(w).or_default() += 1;
    }
    oracle.retain(|_, c| *c >= 5);
    assert_eq!(vocab.len(), oracle.len());
    for (w, c) in &oracle {
        assert_eq!(vocab.get(w), Some(*c), "{w}");
    }
    let total: u64 = vocab.sorted().iter().map(|(_, c)| c).sum();
    assert_eq!(total, oracle.values().sum::<u64>());
}

fn arbitrary_text() -> impl Strategy<Value = String> {
    let pieces = prop::sample::select(vec![
        "ک", "ۆ", "ڕ", "ە", "ی", "ھ", "ه", "ك", " ", "\n", "\u{200C}", "a", "Ж", "क", "٣", "۷", "1", "،", "؟", ".", "@", "/",
        "http://", "www.", "-", "\t", "😀", "\u{064E}",
    ]);
    prop::collection::vec(pieces, 0..40).prop_map(|v| v.concat())
}

proptest! {
    #[test]
    fn clean_output_alphabet_and_fixpoint(text in arbitrary_text()) {
        let inv = shipped::inventory(LangCode::Ckb);
        let cfg = CleanConfig::for_inventory(&inv);
        let out = clean_text(&text, &cfg, &inv);
        prop_assert_eq!(clean_text(&out, &cfg, &inv), out.clone());
        for c in out.chars() {
            prop_assert!(
                inv.covers_char(c)
                    || (is_arabic_script(c) && c.is_alphabetic())
                    || c.is_ascii_digit()
                    || is_punctuation(c)
                    || c.is_whitespace(),
                "unexpected {:?}", c
            );
            prop_assert!(c != ZWNJ);
        }
    }

    #[test]
    fn tokenize_join_identity(text in arbitrary_text()) {
        let once = tokenize(&text).join(" ");
        prop_assert_eq!(tokenize(&once).join(" "), once);
    }
}
