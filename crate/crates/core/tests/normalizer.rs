mod common;

use scriptnorm::alignment::build_alignment_matrix;
use scriptnorm::inventory::{shipped, LangCode};
use scriptnorm::metrics::{corpus_bleu, EvalReport};
use scriptnorm::noise::{generate_level, inject_noise, sentence_rng};
use scriptnorm::normalizer::{
    beam_normalize, fit_channel, score_hypotheses, BeamNormalizer, CharLM, ChannelModel, Normalizer,
};

fn clean_lm(lang: LangCode) -> CharLM {
    let train = common::sentences(lang, 3000, 50);
    CharLM::train(train.iter().map(String::as_str), 5, 0.1).unwrap()
}

#[test]
fn bijective_round_trip_is_exact() {
    let m = common::bijective_matrix();
    let channel = fit_channel(&m, 1.0).unwrap();
    let lm = clean_lm(LangCode::Ckb);
    let corpus = common::sentences(LangCode::Ckb, 200, 1);
    for level in [40, 100] {
        let d = generate_level(&corpus, &m, level, 2);
        let ok = d
            .pairs
            .iter()
            .filter(|p| beam_normalize(&p.noisy, &channel, &lm, 8) == p.clean)
            .count();
        assert!(ok as f64 >= 0.99 * corpus.len() as f64, "level {level}: {ok}");
    }
}

#[test]
fn identity_channel_and_huge_self_weight_copy() {
    let m = common::bijective_matrix();
    let lm = clean_lm(LangCode::Ckb);
    let corpus = common::sentences(LangCode::Ckb, 50, 1);
    let heavy = fit_channel(&m, 1e200).unwrap();
    let identity = ChannelModel::identity(1.0);
    for (i, s) in corpus.iter().enumerate() {
        let noisy = inject_noise(s, &m, 60, &mut sentence_rng(1, 60, i));
        assert_eq!(beam_normalize(&noisy, &heavy, &lm, 4), noisy);
        assert_eq!(beam_normalize(&noisy, &identity, &lm, 4), noisy);
    }
}

#[test]
fn wider_beam_is_not_worse() {
    let src = shipped::inventory(LangCode::Ckb);
    let dom = shipped::inventory(LangCode::Arb);
    let rules = shipped::rules(LangCode::Ckb, LangCode::Arb).unwrap();
    let m = build_alignment_matrix(&[], &rules, &src, &dom).unwrap();
    let channel = fit_channel(&m, 1.0).unwrap();
    let lm = clean_lm(LangCode::Ckb);
    let corpus = common::sentences(LangCode::Ckb, 300, 1);
    let d = generate_level(&corpus, &m, 100, 4);
    let noisy: Vec<String> = d.pairs.iter().map(|p| p.noisy.clone()).collect();
    let bleu = |w| {
        let n = BeamNormalizer::new(channel.clone(), lm.clone(), w).unwrap();
        corpus_bleu(&n.normalize_all(&noisy), &corpus).unwrap()
    };
    let (b1, b8) = (bleu(1), bleu(8));
    assert!(b8 >= b1, "{b8} < {b1}");
    assert!(b8 > corpus_bleu(&noisy, &corpus).unwrap());
}

#[test]
fn decoding_is_deterministic() {
    let m = common::bijective_matrix();
    let channel = fit_channel(&m, 1.0).unwrap();
    let lm = clean_lm(LangCode::Ckb);
    let corpus = common::sentences(LangCode::Ckb, 50, 3);
    let n = BeamNormalizer::new(channel, lm, 8).unwrap();
    let a = n.normalize_all(&corpus);
    let b = rayon::ThreadPoolBuilder::new()
        .num_threads(3)
        .build()
        .unwrap()
        .install(|| n.normalize_all(&corpus));
    assert_eq!(a, b);
}

#[test]
fn lm_and_channel_survive_serialization() {
    let lm = clean_lm(LangCode::Kmr);
    assert_eq!(CharLM::from_tsv(&lm.to_tsv(), "lm").unwrap(), lm);
    let ch = fit_channel(&common::bijective_matrix(), 1.0).unwrap();
    assert_eq!(ChannelModel::from_tsv(&ch.to_tsv(), "ch").unwrap(), ch);
}

#[test]
fn scoring_adapter() {
    let dir = tempfile::tempdir().unwrap();
    let corpus = common::sentences(LangCode::Ckb, 40, 8);
    let d = generate_level(&corpus, &common::bijective_matrix(), 60, 1);
    let refs = dir.path().join("ref.txt");
    let noisy = dir.path().join("noisy.txt");
    let ds = dir.path().join("ds.tsv");
    std::fs::write(&refs, corpus.join("\n")).unwrap();
    std::fs::write(&noisy, d.pairs.iter().map(|p| p.noisy.as_str()).collect::<Vec<_>>().join("\n")).unwrap();
    std::fs::write(&ds, d.to_tsv()).unwrap();

    let perfect = score_hypotheses(&refs, &refs).unwrap();
    assert_eq!(perfect.seq_acc, 1.0);
    let from_noisy = score_hypotheses(&noisy, &refs).unwrap();
    let baseline = scriptnorm::metrics::evaluate_baseline(&ds).unwrap();
    assert_eq!(from_noisy, baseline);
    let _: EvalReport = baseline;
}
