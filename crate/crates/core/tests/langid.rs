mod common;

use scriptnorm::inventory::LangCode;
use scriptnorm::langid::{eval_langid, train_langid, LangIdConfig, LangIdModel, Setup};

fn small_cfg(seed: u64) -> LangIdConfig {
    LangIdConfig {
        cap: 150,
        epochs: 10,
        ..LangIdConfig::new(seed)
    }
}

#[test]
fn eleven_label_clean_run() {
    let data = common::langid_data(200, 40, 1);
    let (model, test, log) = train_langid(&data, Setup::Clean, &small_cfg(5)).unwrap();
    assert_eq!(model.labels().len(), 11);
    assert!(log.used.values().all(|(c, n)| *c == 150 && *n == 0));
    let ev = eval_langid(&model, &test).unwrap();
    for (i, s) in ev.per_label.iter().enumerate() {
        assert_eq!(ev.confusion[i].iter().sum::<u64>(), s.n);
        assert!(s.at2.recall >= s.at1.recall);
        assert!(s.at2.precision <= 0.5 + 1e-12);
        assert!((s.at2.precision - s.at2.recall / 2.0).abs() < 1e-12);
        for v in [s.at1.precision, s.at1.recall, s.at1.f1, s.at2.precision, s.at2.recall, s.at2.f1] {
            assert!((0.0..=1.0).contains(&v));
        }
    }
    // labels outside the two look-alike groups are easy
    for lang in [LangCode::Fas, LangCode::Arb, LangCode::Urd, LangCode::Snd, LangCode::Kas] {
        let s = ev.per_label.iter().find(|s| s.label == lang.as_str()).unwrap();
        assert!(s.at1.recall > 0.9, "{}: {}", s.label, s.at1.recall);
    }
    assert_eq!(ev.to_csv().lines().count(), 13);
    assert_eq!(ev.confusion_csv().lines().count(), 12);
}

#[test]
fn toy_labels_land_in_top_two() {
    let mut data = common::langid_data(200, 40, 1);
    data.retain(|label, _| ["ckb", "azb", "snd", "urd"].contains(&label.as_str()));
    let (model, test, _) = train_langid(&data, Setup::Clean, &small_cfg(2)).unwrap();
    let hits = test
        .examples
        .iter()
        .filter(|e| model.predict_topk(&e.text, 2).unwrap().iter().any(|(l, _)| *l == e.label))
        .count();
    assert!(hits as f64 >= 0.95 * test.examples.len() as f64, "{hits}/{}", test.examples.len());
}

#[test]
fn training_is_reproducible_and_round_trips() {
    let data = common::langid_data(120, 30, 3);
    let cfg = LangIdConfig {
        cap: 60,
        epochs: 3,
        ..LangIdConfig::new(9)
    };
    let (a, ta, _) = train_langid(&data, Setup::Merged, &cfg).unwrap();
    let (b, tb, _) = train_langid(&data, Setup::Merged, &cfg).unwrap();
    assert_eq!(a.to_bytes(), b.to_bytes());
    assert_eq!(ta, tb);
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("m.bin");
    a.save(&path).unwrap();
    assert_eq!(LangIdModel::load(&path).unwrap(), a);
    assert!(a.is_finite());
}
