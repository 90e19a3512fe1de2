mod common;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use scriptnorm::inventory::LangCode;
use scriptnorm::metrics::{chrf_score, corpus_bleu, evaluate, sequence_accuracy, EvalReport, MetricRegistry};

pub fn fixture_pairs(n: usize, seed: u64) -> (Vec<String>, Vec<String>) {
    let refs = common::sentences(LangCode::Ckb, n, seed);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let words = common::lexicon(LangCode::Ckb);
    let hyps = refs
        .iter()
        .map(|r| {
            let mut toks: Vec<String> = r.split(' ').map(str::to_string).collect();
            for t in toks.iter_mut() {
                if rng.gen_bool(0.25) {
                    *t = words.choose(&mut rng).unwrap().clone();
                }
            }
            if rng.gen_bool(0.3) {
                toks.truncate(rng.gen_range(1..=toks.len()));
            }
            toks.join(" ")
        })
        .collect();
    (hyps, refs)
}

#[test]
fn scores_ignore_pair_order() {
    let (h, r) = fixture_pairs(50, 1);
    let a = EvalReport::compute(&h, &r).unwrap();
    let mut idx: Vec<usize> = (0..h.len()).collect();
    idx.shuffle(&mut ChaCha8Rng::seed_from_u64(2));
    let h2: Vec<String> = idx.iter().map(|&i| h[i].clone()).collect();
    let r2: Vec<String> = idx.iter().map(|&i| r[i].clone()).collect();
    let b = EvalReport::compute(&h2, &r2).unwrap();
    assert!((a.bleu - b.bleu).abs() < 1e-9);
    assert!((a.chrf - b.chrf).abs() < 1e-9);
    assert_eq!(a.seq_acc, b.seq_acc);
}

#[test]
fn seq_acc_decomposes_by_reference_length() {
    let (h, r) = fixture_pairs(50, 3);
    let total: usize = r.iter().map(|s| s.split(' ').count()).sum();
    let weighted: f64 = h
        .iter()
        .zip(&r)
        .map(|(h, r)| {
            let n = r.split(' ').count() as f64;
            sequence_accuracy(std::slice::from_ref(h), std::slice::from_ref(r)).unwrap() * n
        })
        .sum::<f64>()
        / total as f64;
    assert!((sequence_accuracy(&h, &r).unwrap() - weighted).abs() < 1e-12);
}

#[test]
fn ranges_hold() {
    for seed in 0..5 {
        let (h, r) = fixture_pairs(20, seed);
        let rep = EvalReport::compute(&h, &r).unwrap();
        assert!((0.0..=100.0).contains(&rep.bleu));
        assert!((0.0..=100.0).contains(&rep.chrf));
        assert!((0.0..=1.0).contains(&rep.seq_acc));
    }
}

#[test]
fn registry_matches_functions() {
    let (h, r) = fixture_pairs(30, 4);
    let reg = MetricRegistry::default();
    assert_eq!(reg.get("bleu").unwrap().score(&h, &r).unwrap(), corpus_bleu(&h, &r).unwrap());
    assert_eq!(reg.get("chrf").unwrap().score(&h, &r).unwrap(), chrf_score(&h, &r).unwrap());
}

#[test]
fn evaluate_from_files() {
    let dir = tempfile::tempdir().unwrap();
    let refs = common::sentences(LangCode::Fas, 20, 0);
    let ref_path = dir.path().join("ref.txt");
    std::fs::write(&ref_path, refs.join("\n")).unwrap();
    let rep = evaluate(&ref_path, Some(&ref_path), false).unwrap();
    assert!((rep.bleu - 100.0).abs() < 1e-9 && rep.seq_acc == 1.0);

    let identity: String = refs.iter().map(|s| format!("{s}\t{s}\n")).collect();
    let ds = dir.path().join("x.0.tsv");
    std::fs::write(&ds, identity).unwrap();
    let base = evaluate(&ds, None, true).unwrap();
    assert!((base.bleu - 100.0).abs() < 1e-9 && (base.chrf - 100.0).abs() < 1e-9 && base.seq_acc == 1.0);

    let short = dir.path().join("short.txt");
    std::fs::write(&short, "a b c").unwrap();
    assert!(evaluate(&short, Some(&ref_path), false).is_err());
}

#[test]
fn bleu_and_chrf_match_oracles() {
    for seed in 0..4 {
        let (h, r) = fixture_pairs(50, 10 + seed);
        assert!((corpus_bleu(&h, &r).unwrap() - common::oracle::bleu(&h, &r)).abs() < 1e-6);
        assert!((chrf_score(&h, &r).unwrap() - common::oracle::chrf(&h, &r)).abs() < 1e-6);
    }
}
