use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::str::FromStr;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::features::features;
use super::model::{softmax, LangIdModel, Row, DIM};
use crate::error::{Error, Result};
use crate::noise::NoiseLevel;

/// Which sentences each label contributes to training.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Setup {
    Clean,
    Noisy(NoiseLevel),
    /// Clean plus ALL-level noisy data, at twice the cap.
    Merged,
}

impl fmt::Display for Setup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Setup::Clean => f.write_str("clean"),
            Setup::Noisy(level) => write!(f, "noisy-{level}"),
            Setup::Merged => f.write_str("merged"),
        }
    }
}

impl FromStr for Setup {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "clean" => Ok(Setup::Clean),
            "merged" => Ok(Setup::Merged),
            other => match other.strip_prefix("noisy") {
                Some("") => Ok(Setup::Noisy(NoiseLevel::All)),
                Some(rest) => Ok(Setup::Noisy(rest.trim_start_matches(['-', ':', '=']).parse()?)),
                None => Err(Error::Config(format!("unknown langid setup `{s}`"))),
            },
        }
    }
}

/// Sentences available for one label. Dominant-script labels have no noisy data.
#[derive(Debug, Clone, Default)]
pub struct LabelData {
    pub clean: Vec<String>,
    pub noisy: BTreeMap<NoiseLevel, Vec<String>>,
}

pub type LangIdData = BTreeMap<String, LabelData>;

#[derive(Debug, Clone, PartialEq)]
pub struct LangIdConfig {
    pub cap: usize,
    pub split: f64,
    pub seed: u64,
    pub lr: f32,
    pub epochs: usize,
}

impl LangIdConfig {
    pub fn new(seed: u64) -> Self {
        LangIdConfig {
            cap: 6000,
            split: 0.8,
            seed,
            lr: 0.1,
            epochs: 25,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Example {
    pub text: String,
    pub label: String,
    pub is_noisy: bool,
}

/// Held-out examples, frozen at training time.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct TestSet {
    pub examples: Vec<Example>,
}

impl TestSet {
    pub fn noisy_only(&self) -> TestSet {
        TestSet {
            examples: self.examples.iter().filter(|e| e.is_noisy).cloned().collect(),
        }
    }

    /// `label\tnoisy(0|1)\ttext` per line.
    pub fn to_tsv(&self) -> String {
        self.examples
            .iter()
            .map(|e| format!("{}\t{}\t{}\n", e.label, u8::from(e.is_noisy), e.text))
            .collect()
    }

    pub fn from_tsv(text: &str, origin: &str) -> Result<Self> {
        let mut examples = Vec::new();
        for (idx, line) in text.lines().enumerate() {
            if line.is_empty() {
                continue;
            }
            let mut parts = line.splitn(3, '\t');
            let (Some(label), Some(flag), Some(text)) = (parts.next(), parts.next(), parts.next()) else {
                return Err(Error::parse(origin, idx + 1, "expected label<TAB>noisy<TAB>text"));
            };
            let is_noisy = match flag {
                "0" => false,
                "1" => true,
                _ => return Err(Error::parse(origin, idx + 1, format!("bad noisy flag `{flag}`"))),
            };
            examples.push(Example {
                text: text.to_string(),
                label: label.to_string(),
                is_noisy,
            });
        }
        Ok(TestSet { examples })
    }
}

/// Counts behind a training run, for logs and manifests.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct SelectionLog {
    /// label -> (clean used, noisy used)
    pub used: BTreeMap<String, (usize, usize)>,
    /// label -> (wanted, available) for labels short of the cap
    pub shortfalls: BTreeMap<String, (usize, usize)>,
    /// label -> clean sentences added to match the merged noisy share
    pub rebalanced: BTreeMap<String, usize>,
}

fn take_sample(pool: &[String], n: usize, rng: &mut ChaCha8Rng) -> Vec<String> {
    let mut v = pool.to_vec();
    v.shuffle(rng);
    v.truncate(n);
    v
}

fn pick(
    label: &str,
    pool: &[String],
    want: usize,
    rng: &mut ChaCha8Rng,
    log: &mut SelectionLog,
) -> Vec<String> {
    if pool.len() < want {
        log::info!("{label}: wanted {want} sentences, only {} available", pool.len());
        log.shortfalls.insert(label.to_string(), (want, pool.len()));
    }
    take_sample(pool, want, rng)
}

/// Per-label selection for a setup, before the train/test split.
pub fn select_examples(data: &LangIdData, setup: Setup, cfg: &LangIdConfig) -> Result<(Vec<Vec<Example>>, SelectionLog)> {
    if data.len() < 2 {
        return Err(Error::InvalidInput("language identification needs at least 2 labels".into()));
    }
    let mut log = SelectionLog::default();
    let mut per_label = Vec::new();
    for (i, (label, d)) in data.iter().enumerate() {
        if d.clean.is_empty() && d.noisy.values().all(Vec::is_empty) {
            return Err(Error::InvalidInput(format!("label {label} has no sentences")));
        }
        let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed ^ ((i as u64 + 1) << 32));
        let mk = |texts: Vec<String>, is_noisy: bool| {
            texts.into_iter().map(move |text| Example {
                text,
                label: label.clone(),
                is_noisy,
            })
        };
        let mut examples: Vec<Example> = Vec::new();
        match setup {
            Setup::Clean => examples.extend(mk(pick(label, &d.clean, cfg.cap, &mut rng, &mut log), false)),
            Setup::Noisy(level) => match d.noisy.get(&level).filter(|v| !v.is_empty()) {
                Some(noisy) => examples.extend(mk(pick(label, noisy, cfg.cap, &mut rng, &mut log), true)),
                None => examples.extend(mk(pick(label, &d.clean, cfg.cap, &mut rng, &mut log), false)),
            },
            Setup::Merged => match d.noisy.get(&NoiseLevel::All).filter(|v| !v.is_empty()) {
                Some(noisy) => {
                    examples.extend(mk(pick(label, &d.clean, cfg.cap, &mut rng, &mut log), false));
                    examples.extend(mk(pick(label, noisy, cfg.cap, &mut rng, &mut log), true));
                }
                None => {
                    let clean = pick(label, &d.clean, 2 * cfg.cap, &mut rng, &mut log);
                    let added = clean.len().saturating_sub(cfg.cap);
                    log.rebalanced.insert(label.clone(), added);
                    examples.extend(mk(clean, false));
                }
            },
        }
        if examples.len() < 10 {
            return Err(Error::InvalidInput(format!(
                "label {label} has {} sentences, at least 10 are needed",
                examples.len()
            )));
        }
        let noisy = examples.iter().filter(|e| e.is_noisy).count();
        log.used.insert(label.clone(), (examples.len() - noisy, noisy));
        per_label.push(examples);
    }
    Ok((per_label, log))
}

/// Selects, splits each label `split`/`1-split`, and trains on the first part.
pub fn train_langid(
    data: &LangIdData,
    setup: Setup,
    cfg: &LangIdConfig,
) -> Result<(LangIdModel, TestSet, SelectionLog)> {
    if !(0.0 < cfg.split && cfg.split < 1.0) {
        return Err(Error::Config(format!("split must lie in (0, 1), got {}", cfg.split)));
    }
    let (per_label, log) = select_examples(data, setup, cfg)?;
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let mut train = Vec::new();
    let mut test = Vec::new();
    for mut examples in per_label {
        examples.shuffle(&mut rng);
        let cut = (examples.len() as f64 * cfg.split).round() as usize;
        test.extend(examples.split_off(cut));
        train.extend(examples);
    }
    let labels: Vec<String> = data.keys().cloned().collect();
    let model = fit(&labels, &train, cfg)?;
    Ok((model, TestSet { examples: test }, log))
}

/// Trains the classifier with plain SGD on the softmax loss and a linearly
/// decaying learning rate. Single-threaded so the result depends only on the seed.
pub fn fit(labels: &[String], train: &[Example], cfg: &LangIdConfig) -> Result<LangIdModel> {
    let index: HashMap<&str, usize> = labels.iter().enumerate().map(|(i, l)| (l.as_str(), i)).collect();

    // dense row per distinct bucket seen in training
    let mut slot: HashMap<u32, usize> = HashMap::new();
    let mut buckets: Vec<u32> = Vec::new();
    let mut rows: Vec<(Vec<usize>, usize)> = Vec::with_capacity(train.len());
    for ex in train {
        let target = *index
            .get(ex.label.as_str())
            .ok_or_else(|| Error::InvalidInput(format!("unknown label {}", ex.label)))?;
        let feats: Vec<usize> = features(&ex.text)
            .into_iter()
            .map(|f| {
                *slot.entry(f).or_insert_with(|| {
                    buckets.push(f);
                    buckets.len() - 1
                })
            })
            .collect();
        if !feats.is_empty() {
            rows.push((feats, target));
        }
    }
    if rows.is_empty() {
        return Err(Error::InvalidInput("no training sentences".into()));
    }

    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed.wrapping_add(0x5EED));
    let bound = 1.0 / DIM as f32;
    let mut output: Vec<Row> = (0..labels.len())
        .map(|_| std::array::from_fn(|_| rng.gen_range(-bound..bound)))
        .collect();
    let mut input: Vec<Row> = vec![[0.0; DIM]; buckets.len()];

    let total_steps = (cfg.epochs * rows.len()) as f32;
    let mut step = 0usize;
    let mut order: Vec<usize> = (0..rows.len()).collect();
    for _ in 0..cfg.epochs {
        order.shuffle(&mut rng);
        for &r in &order {
            let lr = cfg.lr * (1.0 - step as f32 / total_steps);
            step += 1;
            let (feats, target) = &rows[r];
            let mut hidden = [0f32; DIM];
            for &f in feats {
                for (h, x) in hidden.iter_mut().zip(&input[f]) {
                    *h += x;
                }
            }
            let inv = 1.0 / feats.len() as f32;
            hidden.iter_mut().for_each(|h| *h *= inv);

            let probs = softmax(&output, &hidden);
            let mut grad = [0f32; DIM];
            for (l, w) in output.iter_mut().enumerate() {
                let truth = if l == *target { 1.0 } else { 0.0 };
                let alpha = lr * (truth - probs[l] as f32);
                for d in 0..DIM {
                    grad[d] += alpha * w[d];
                    w[d] += alpha * hidden[d];
                }
            }
            grad.iter_mut().for_each(|g| *g *= inv);
            for &f in feats {
                for (x, g) in input[f].iter_mut().zip(&grad) {
                    *x += g;
                }
            }
        }
    }

    let input = buckets
        .into_iter()
        .zip(input)
        .filter(|(_, row)| row.iter().any(|x| *x != 0.0))
        .collect();
    let model = LangIdModel {
        labels: labels.to_vec(),
        input,
        output,
    };
    debug_assert!(model.is_finite());
    Ok(model)
}
