use std::collections::HashSet;
use std::fs;
use std::path::{Path, PathBuf};

use scriptnorm::alignment::{build_alignment_matrix, extract_spelling_pairs, pairs_from_tsv, pairs_to_tsv, CharAlignmentMatrix};
use scriptnorm::corpus::{
    build_vocabulary, clean_text_audited, extract_sentences, CleanConfig, RemovalLog, Vocabulary, DEFAULT_MAX_TOKENS,
    DEFAULT_MIN_TOKENS,
};
use scriptnorm::error::read_utf8;
use scriptnorm::inventory::{compile_rules, load_inventory, script_ratio, shipped};
use scriptnorm::langid::{eval_langid, train_langid, LangIdConfig, LangIdData, LangIdModel, SelectionLog, Setup, TestSet};
use scriptnorm::metrics::{evaluate, EvalReport, MetricRegistry};
use scriptnorm::noise::{generate_level, generate_parallel_datasets, read_dataset_tsv, write_datasets, NoiseConfig, NoiseLevel};
use scriptnorm::normalizer::{
    fit_channel, BeamNormalizer, CharLM, ChannelModel, NormalizerRegistry, DEFAULT_ALPHA, DEFAULT_BEAM, DEFAULT_ORDER,
};
use scriptnorm::{LangCode, MappingRuleSet, ScriptInventory};

use crate::args::*;
use crate::error::{CliError, CliResult};
use crate::manifest::Manifest;

/// What every command needs besides its own arguments.
pub struct Ctx {
    pub argv: Vec<String>,
    pub params: Vec<(String, String)>,
    pub config_sha: Option<String>,
}

impl Ctx {
    fn manifest(&self, command: &str) -> Manifest {
        Manifest::new(command, &self.argv, &self.params, self.config_sha.as_deref())
    }
}

pub fn dispatch(cmd: Command, ctx: &Ctx) -> CliResult {
    let name = cmd.name();
    let m = ctx.manifest(name);
    match cmd {
        Command::Clean(a) => clean(a, m),
        Command::Vocab(a) => vocab(a, m),
        Command::Pairs(a) => pairs(a, m),
        Command::Align(a) => align(a, m),
        Command::Noise(a) => noise(a, m),
        Command::Eval(a) => eval(a, m),
        Command::LangidTrain(a) => langid_train(a, m),
        Command::LangidEval(a) => langid_eval(a, m),
        Command::Normalize(a) => normalize(a, m),
        Command::Score(a) => score(a, m),
        Command::Ratio(a) => ratio(a, m),
    }
}

fn need<T>(value: Option<T>, key: &str) -> CliResult<T> {
    value.ok_or_else(|| CliError::missing(key))
}

fn read_text(path: &Path) -> CliResult<String> {
    read_utf8(path).map_err(|e| CliError::data(anyhow::anyhow!("{}: {e}", path.display())))
}

/// Non-empty lines.
fn read_sentences(path: &Path) -> CliResult<Vec<String>> {
    Ok(read_text(path)?
        .lines()
        .map(str::trim)
        .filter(|l| !l.is_empty())
        .map(str::to_string)
        .collect())
}

fn out_dir(out: Option<PathBuf>) -> CliResult<PathBuf> {
    let dir = need(out, "out")?;
    fs::create_dir_all(&dir).map_err(|e| CliError::data(anyhow::anyhow!("{}: {e}", dir.display())))?;
    Ok(dir)
}

fn write_output(m: &mut Manifest, path: &Path, contents: impl AsRef<[u8]>) -> CliResult {
    fs::write(path, contents).map_err(|e| CliError::data(anyhow::anyhow!("{}: {e}", path.display())))?;
    m.output(path)
}

fn inventory(lang: LangCode, file: Option<&Path>, m: &mut Manifest) -> CliResult<ScriptInventory> {
    match file {
        Some(p) => {
            m.input(p)?;
            let inv = load_inventory(p)?;
            if inv.lang() != lang {
                return Err(CliError::Usage(format!("{} declares {}, expected {lang}", p.display(), inv.lang())));
            }
            Ok(inv)
        }
        None => Ok(shipped::inventory(lang)),
    }
}

struct Pair {
    src: LangCode,
    dom: LangCode,
    src_inv: ScriptInventory,
    dom_inv: ScriptInventory,
    rules: MappingRuleSet,
}

fn load_pair(a: &PairArgs, m: &mut Manifest) -> CliResult<Pair> {
    let src = need(a.src, "src")?;
    let dom = need(a.dom, "dom")?;
    let src_inv = inventory(src, a.src_inventory.as_deref(), m)?;
    let dom_inv = inventory(dom, a.dom_inventory.as_deref(), m)?;
    let rules = match &a.rules {
        Some(p) => {
            m.input(p)?;
            compile_rules(p, &src_inv, &dom_inv)?
        }
        None => shipped::rules(src, dom)?,
    };
    Ok(Pair {
        src,
        dom,
        src_inv,
        dom_inv,
        rules,
    })
}

fn clean(a: CleanArgs, mut m: Manifest) -> CliResult {
    let lang = need(a.lang, "lang")?;
    if a.input.is_empty() {
        return Err(CliError::missing("input"));
    }
    let inv = inventory(lang, a.inventory.as_deref(), &mut m)?;
    let mut cfg = CleanConfig::for_inventory(&inv);
    if let Some(v) = a.strip_zwnj {
        cfg.strip_zwnj = v;
    }
    if let Some(v) = a.unify_numerals {
        cfg.unify_numerals = v;
    }
    cfg.validate(&inv)?;
    let min = a.min_tokens.unwrap_or(DEFAULT_MIN_TOKENS);
    let max = a.max_tokens.unwrap_or(DEFAULT_MAX_TOKENS);
    if min == 0 || min > max {
        return Err(CliError::Usage(format!("need 0 < min-tokens <= max-tokens, got {min} and {max}")));
    }
    let dir = out_dir(a.out)?;

    let mut cleaned = String::new();
    let mut removed = RemovalLog::default();
    for path in &a.input {
        m.input(path)?;
        let (text, log) = clean_text_audited(&read_text(path)?, &cfg, &inv);
        removed.urls += log.urls;
        removed.emails += log.emails;
        removed.dates += log.dates;
        for (c, n) in log.symbols {
            *removed.symbols.entry(c).or_default() += n;
        }
        if !text.is_empty() {
            cleaned.push_str(&text);
            cleaned.push('\n');
        }
    }
    let sentences = extract_sentences(&cleaned, min, max);
    let mut joined = sentences.join("\n");
    if !joined.is_empty() {
        joined.push('\n');
    }
    write_output(&mut m, &dir.join(format!("{lang}.clean.txt")), &cleaned)?;
    write_output(&mut m, &dir.join(format!("{lang}.sentences.txt")), &joined)?;
    write_output(&mut m, &dir.join(format!("{lang}.removed.tsv")), removed.to_tsv())?;
    m.set("count.clean_lines", cleaned.lines().count());
    m.set("count.sentences", sentences.len());
    m.write(&dir)?;
    println!("{lang}\t{} sentences", sentences.len());
    Ok(())
}

fn vocab(a: VocabArgs, mut m: Manifest) -> CliResult {
    let input = need(a.input, "input")?;
    let dir = out_dir(a.out)?;
    m.input(&input)?;
    let v = build_vocabulary(&read_text(&input)?, a.min_freq.unwrap_or(3))?;
    let name = match a.lang {
        Some(l) => format!("{l}.vocab.tsv"),
        None => "vocab.tsv".to_string(),
    };
    write_output(&mut m, &dir.join(name), v.to_tsv())?;
    m.set("count.words", v.len());
    m.write(&dir)?;
    println!("{} words", v.len());
    Ok(())
}

fn pairs(a: PairsArgs, mut m: Manifest) -> CliResult {
    let p = load_pair(&a.pair, &mut m)?;
    let vocab_path = need(a.vocab, "vocab")?;
    let lexicon_path = need(a.lexicon, "lexicon")?;
    let dir = out_dir(a.out)?;
    m.input(&vocab_path)?;
    m.input(&lexicon_path)?;
    let vocab = Vocabulary::from_tsv(&read_text(&vocab_path)?, a.min_freq.unwrap_or(3))?;
    let lexicon: HashSet<String> = read_text(&lexicon_path)?
        .lines()
        .filter_map(|l| l.split('\t').next())
        .map(str::trim)
        .filter(|w| !w.is_empty())
        .map(str::to_string)
        .collect();
    let found = extract_spelling_pairs(&vocab, &lexicon, &p.rules, &p.src_inv);
    write_output(&mut m, &dir.join(format!("{}_{}.pairs.tsv", p.src, p.dom)), pairs_to_tsv(&found))?;
    m.set("count.pairs", found.len());
    m.write(&dir)?;
    println!("{}_{}\t{} pairs", p.src, p.dom, found.len());
    Ok(())
}

fn align(a: AlignArgs, mut m: Manifest) -> CliResult {
    let p = load_pair(&a.pair, &mut m)?;
    let pairs_path = need(a.pairs, "pairs")?;
    let dir = out_dir(a.out)?;
    m.input(&pairs_path)?;
    let found = pairs_from_tsv(&read_text(&pairs_path)?, &pairs_path.display().to_string())?;
    let matrix = build_alignment_matrix(&found, &p.rules, &p.src_inv, &p.dom_inv)?;
    write_output(&mut m, &dir.join(format!("{}_{}.matrix.tsv", p.src, p.dom)), matrix.to_tsv())?;
    write_output(
        &mut m,
        &dir.join(format!("{}_{}.identities.tsv", p.src, p.dom)),
        matrix.identities_tsv(),
    )?;
    m.set("matrix_sha256", matrix.checksum());
    m.set("count.entries", matrix.entry_count());
    m.write(&dir)?;
    println!("{}_{}\t{} entries", p.src, p.dom, matrix.entry_count());
    Ok(())
}

fn load_matrix(path: &Path, m: &mut Manifest) -> CliResult<CharAlignmentMatrix> {
    m.input(path)?;
    Ok(CharAlignmentMatrix::from_tsv(&read_text(path)?, &path.display().to_string())?)
}

fn noise(a: NoiseArgs, mut m: Manifest) -> CliResult {
    let seed = need(a.seed, "seed")?;
    let matrix = load_matrix(&need(a.matrix, "matrix")?, &mut m)?;
    let corpus_path = need(a.corpus, "corpus")?;
    let dir = out_dir(a.out)?;
    m.input(&corpus_path)?;
    let corpus = read_sentences(&corpus_path)?;
    let cfg = NoiseConfig { seed, dedup: !a.no_dedup };
    let datasets = match a.level {
        Some(NoiseLevel::Percent(level)) => {
            if corpus.is_empty() {
                return Err(CliError::data(anyhow::anyhow!("{}: no sentences", corpus_path.display())));
            }
            vec![generate_level(&corpus, &matrix, level, seed)]
        }
        Some(NoiseLevel::All) => generate_parallel_datasets(&corpus, &matrix, &cfg)?.split_off(5),
        None => generate_parallel_datasets(&corpus, &matrix, &cfg)?,
    };
    for path in write_datasets(&dir, &datasets, &matrix, &cfg)? {
        m.output(&path)?;
    }
    m.set("seed", seed);
    m.set("matrix_sha256", matrix.checksum());
    for d in &datasets {
        m.set(&format!("count.{}.pairs", d.level), d.pairs.len());
        m.set(&format!("count.{}.words", d.level), d.word_count());
        m.set(&format!("count.{}.duplicates_removed", d.level), d.duplicates_removed);
        println!("{}\t{} pairs", d.level, d.pairs.len());
    }
    m.write(&dir)?;
    Ok(())
}

fn file_label(path: &Path) -> (String, String) {
    let name = path.file_name().map(|n| n.to_string_lossy().into_owned()).unwrap_or_default();
    let name = name.strip_suffix(".tsv").or_else(|| name.strip_suffix(".txt")).unwrap_or(&name).to_string();
    match name.split_once('.') {
        Some((label, level)) => (label.to_string(), level.to_string()),
        None => (name, "-".to_string()),
    }
}

fn eval(a: EvalArgs, mut m: Manifest) -> CliResult {
    let (report, source) = if a.baseline {
        let ds = need(a.dataset, "dataset")?;
        m.input(&ds)?;
        (evaluate(&ds, None, true)?, ds)
    } else {
        let hyp = need(a.hyp, "hyp")?;
        let reference = need(a.reference, "ref")?;
        m.input(&hyp)?;
        m.input(&reference)?;
        (evaluate(&hyp, Some(&reference), false)?, hyp)
    };
    println!("{}", report.to_tsv_line());
    if a.out.is_some() {
        let dir = out_dir(a.out)?;
        let (label, level) = file_label(&source);
        let label = a.label.unwrap_or(label);
        let csv = format!("{}\n{}\n", EvalReport::CSV_HEADER, report.to_csv_row(&label, &level));
        write_output(&mut m, &dir.join("eval.csv"), csv)?;
        m.write(&dir)?;
    }
    Ok(())
}

/// `<label>.txt` files hold clean sentences; `<src>_<dom>.<level>.tsv`
/// datasets contribute their noisy column to label `<src>`.
fn load_langid_data(dir: &Path, m: &mut Manifest) -> CliResult<LangIdData> {
    let mut paths: Vec<PathBuf> = fs::read_dir(dir)
        .map_err(|e| CliError::data(anyhow::anyhow!("{}: {e}", dir.display())))?
        .filter_map(|e| e.ok().map(|e| e.path()))
        .filter(|p| p.is_file())
        .collect();
    paths.sort();
    let mut data = LangIdData::new();
    for path in paths {
        let name = path.file_name().unwrap().to_string_lossy().into_owned();
        if let Some(label) = name.strip_suffix(".txt") {
            m.input(&path)?;
            data.entry(label.to_string()).or_default().clean = read_sentences(&path)?;
        } else if let Some(stem) = name.strip_suffix(".tsv") {
            let Some((pair, tag)) = stem.split_once('.') else { continue };
            let Some((src, _)) = pair.split_once('_') else { continue };
            let level: NoiseLevel = tag.parse()?;
            m.input(&path)?;
            let noisy = read_dataset_tsv(&read_text(&path)?, &name)?.into_iter().map(|(n, _)| n);
            data.entry(src.to_string()).or_default().noisy.entry(level).or_default().extend(noisy);
        }
    }
    if data.is_empty() {
        return Err(CliError::data(anyhow::anyhow!("{}: no .txt or .tsv data files", dir.display())));
    }
    Ok(data)
}

fn selection_tsv(log: &SelectionLog) -> String {
    let mut out = String::from("label\tclean_used\tnoisy_used\trebalanced\twanted\tavailable\n");
    for (label, (clean, noisy)) in &log.used {
        let rebalanced = log.rebalanced.get(label).copied().unwrap_or(0);
        let (wanted, available) = match log.shortfalls.get(label) {
            Some((w, a)) => (w.to_string(), a.to_string()),
            None => ("-".into(), "-".into()),
        };
        out.push_str(&format!("{label}\t{clean}\t{noisy}\t{rebalanced}\t{wanted}\t{available}\n"));
    }
    out
}

fn langid_train(a: LangidTrainArgs, mut m: Manifest) -> CliResult {
    let seed = need(a.seed, "seed")?;
    let data_dir = need(a.data, "data")?;
    let dir = out_dir(a.out)?;
    let defaults = LangIdConfig::new(seed);
    let cfg = LangIdConfig {
        cap: a.cap.unwrap_or(defaults.cap),
        split: a.split.unwrap_or(defaults.split),
        lr: a.lr.unwrap_or(defaults.lr),
        epochs: a.epochs.unwrap_or(defaults.epochs),
        seed,
    };
    let setup = a.setup.unwrap_or(Setup::Merged);
    let data = load_langid_data(&data_dir, &mut m)?;
    let (model, test, log) = train_langid(&data, setup, &cfg)?;

    let model_path = dir.join("langid.bin");
    model.save(&model_path)?;
    m.output(&model_path)?;
    write_output(&mut m, &dir.join("test.tsv"), test.to_tsv())?;
    write_output(&mut m, &dir.join("selection.tsv"), selection_tsv(&log))?;
    m.set("seed", seed);
    m.set("setup", setup);
    m.set("count.labels", model.labels().len());
    m.set("count.test", test.examples.len());
    m.write(&dir)?;
    println!("{} labels, {} test sentences", model.labels().len(), test.examples.len());
    Ok(())
}

fn langid_eval(a: LangidEvalArgs, mut m: Manifest) -> CliResult {
    let model_path = need(a.model, "model")?;
    let test_path = need(a.test, "test")?;
    let dir = out_dir(a.out)?;
    m.input(&model_path)?;
    m.input(&test_path)?;
    let model = LangIdModel::load(&model_path)?;
    let mut test = TestSet::from_tsv(&read_text(&test_path)?, &test_path.display().to_string())?;
    if a.noisy_only {
        test = test.noisy_only();
    }
    let ev = eval_langid(&model, &test)?;
    write_output(&mut m, &dir.join("eval.csv"), ev.to_csv())?;
    write_output(&mut m, &dir.join("confusion.csv"), ev.confusion_csv())?;
    m.set("count.test", test.examples.len());
    m.write(&dir)?;
    println!(
        "macro\tf@1\t{:.4}\tf@2\t{:.4}\tn\t{}",
        ev.macro_at1.f1,
        ev.macro_at2.f1,
        test.examples.len()
    );
    Ok(())
}

fn normalize(a: NormalizeArgs, mut m: Manifest) -> CliResult {
    let method = a.method.unwrap_or_else(|| "beam".to_string());
    let input = need(a.input, "input")?;
    let dir = out_dir(a.out)?;
    let mut registry = NormalizerRegistry::with_baseline();
    if method == "beam" {
        let channel = match (&a.channel, &a.matrix) {
            (Some(p), _) => {
                m.input(p)?;
                ChannelModel::from_tsv(&read_text(p)?, &p.display().to_string())?
            }
            (None, Some(p)) => {
                let matrix = load_matrix(p, &mut m)?;
                let ch = fit_channel(&matrix, a.self_weight.unwrap_or(1.0))?;
                write_output(&mut m, &dir.join("channel.tsv"), ch.to_tsv())?;
                ch
            }
            (None, None) => return Err(CliError::Usage("beam needs --channel or --matrix".into())),
        };
        let lm = match (&a.lm, &a.lm_corpus) {
            (Some(p), _) => {
                m.input(p)?;
                CharLM::from_tsv(&read_text(p)?, &p.display().to_string())?
            }
            (None, Some(p)) => {
                m.input(p)?;
                let sentences = read_sentences(p)?;
                let lm = CharLM::train(
                    sentences.iter().map(String::as_str),
                    a.order.unwrap_or(DEFAULT_ORDER),
                    a.alpha.unwrap_or(DEFAULT_ALPHA),
                )?;
                write_output(&mut m, &dir.join("lm.tsv"), lm.to_tsv())?;
                lm
            }
            (None, None) => return Err(CliError::Usage("beam needs --lm or --lm-corpus".into())),
        };
        registry.register(Box::new(BeamNormalizer::new(
            channel,
            lm,
            a.beam_width.unwrap_or(DEFAULT_BEAM),
        )?));
    }
    let normalizer = registry.get(&method)?;
    m.input(&input)?;
    let lines: Vec<String> = read_text(&input)?.lines().map(str::to_string).collect();
    let out: Vec<String> = normalizer.normalize_all(&lines);
    let mut text = out.join("\n");
    text.push('\n');
    write_output(&mut m, &dir.join("normalized.txt"), text)?;
    m.set("count.lines", out.len());
    m.write(&dir)?;
    println!("{method}\t{} lines", out.len());
    Ok(())
}

fn score(a: ScoreArgs, mut m: Manifest) -> CliResult {
    let hyp = need(a.hyp, "hyp")?;
    let reference = need(a.reference, "ref")?;
    m.input(&hyp)?;
    m.input(&reference)?;
    let registry = MetricRegistry::default();
    let names: Vec<String> = if a.metric.is_empty() {
        registry.names().map(str::to_string).collect()
    } else {
        a.metric
    };
    let metrics = names.iter().map(|n| registry.get(n)).collect::<Result<Vec<_>, _>>()?;
    let hyps: Vec<String> = read_text(&hyp)?.lines().map(str::to_string).collect();
    let refs: Vec<String> = read_text(&reference)?.lines().map(str::to_string).collect();
    let mut out = String::new();
    for metric in metrics {
        out.push_str(&format!("{}\t{:.4}\n", metric.name(), metric.score(&hyps, &refs)?));
    }
    print!("{out}");
    if a.out.is_some() {
        let dir = out_dir(a.out)?;
        write_output(&mut m, &dir.join("score.tsv"), &out)?;
        m.write(&dir)?;
    }
    Ok(())
}

fn ratio(a: RatioArgs, mut m: Manifest) -> CliResult {
    let p = load_pair(&a.pair, &mut m)?;
    let r = script_ratio(&p.rules, &p.src_inv, &p.dom_inv);
    let line = format!("{}_{}\t{r:.4}\n", p.src, p.dom);
    print!("{line}");
    if a.out.is_some() {
        let dir = out_dir(a.out)?;
        write_output(&mut m, &dir.join("ratio.tsv"), &line)?;
        m.write(&dir)?;
    }
    Ok(())
}
