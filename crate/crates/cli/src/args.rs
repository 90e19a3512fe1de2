use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};

use scriptnorm::langid::Setup;
use scriptnorm::noise::NoiseLevel;
use scriptnorm::LangCode;

/// Script normalization pipeline for Perso-Arabic minority languages.
///
/// Every option can also come from the `--config` file as `key = value`,
/// using the long option name as key. Command-line flags win.
#[derive(Parser, Debug)]
#[command(name = "scriptnorm", version)]
pub struct Cli {
    /// Key-value config file shared by all stages.
    #[arg(long, global = true, value_name = "FILE")]
    pub config: Option<PathBuf>,

    /// Maximum worker threads for parallel stages.
    #[arg(long, global = true, value_name = "N")]
    pub threads: Option<usize>,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Clean raw text and split it into sentences.
    Clean(CleanArgs),
    /// Count words of a sentence file.
    Vocab(VocabArgs),
    /// Mine spelling pairs between a source vocabulary and a dominant lexicon.
    Pairs(PairsArgs),
    /// Build the character-alignment matrix from spelling pairs and rules.
    Align(AlignArgs),
    /// Generate noisy/clean parallel datasets.
    Noise(NoiseArgs),
    /// Score hypotheses, or the copy baseline of a dataset.
    Eval(EvalArgs),
    /// Train a language identification model.
    LangidTrain(LangidTrainArgs),
    /// Evaluate a language identification model on a test set.
    LangidEval(LangidEvalArgs),
    /// Normalize noisy text with a registered method.
    Normalize(NormalizeArgs),
    /// Compute selected metrics for hypotheses against references.
    Score(ScoreArgs),
    /// Script ratio of a source/dominant pair.
    Ratio(RatioArgs),
}

impl Command {
    pub fn name(&self) -> &'static str {
        match self {
            Command::Clean(_) => "clean",
            Command::Vocab(_) => "vocab",
            Command::Pairs(_) => "pairs",
            Command::Align(_) => "align",
            Command::Noise(_) => "noise",
            Command::Eval(_) => "eval",
            Command::LangidTrain(_) => "langid-train",
            Command::LangidEval(_) => "langid-eval",
            Command::Normalize(_) => "normalize",
            Command::Score(_) => "score",
            Command::Ratio(_) => "ratio",
        }
    }
}

/// Language pair, with optional replacement data files.
#[derive(Args, Debug, Clone)]
pub struct PairArgs {
    #[arg(long)]
    pub src: Option<LangCode>,
    #[arg(long)]
    pub dom: Option<LangCode>,
    /// Rule table (defaults to the shipped table for the pair).
    #[arg(long, value_name = "FILE")]
    pub rules: Option<PathBuf>,
    #[arg(long, value_name = "FILE")]
    pub src_inventory: Option<PathBuf>,
    #[arg(long, value_name = "FILE")]
    pub dom_inventory: Option<PathBuf>,
}

#[derive(Args, Debug)]
pub struct CleanArgs {
    #[arg(long)]
    pub lang: Option<LangCode>,
    /// Inventory file (defaults to the shipped one).
    #[arg(long, value_name = "FILE")]
    pub inventory: Option<PathBuf>,
    /// Raw text files; repeat or comma-separate in the config.
    #[arg(long, value_name = "FILE")]
    pub input: Vec<PathBuf>,
    #[arg(long, value_name = "DIR")]
    pub out: Option<PathBuf>,
    /// Defaults to true unless the script uses ZWNJ.
    #[arg(long, value_name = "BOOL")]
    pub strip_zwnj: Option<bool>,
    #[arg(long, value_name = "BOOL")]
    pub unify_numerals: Option<bool>,
    #[arg(long)]
    pub min_tokens: Option<usize>,
    #[arg(long)]
    pub max_tokens: Option<usize>,
}

#[derive(Args, Debug)]
pub struct VocabArgs {
    /// Sentence file, one sentence per line.
    #[arg(long, value_name = "FILE")]
    pub input: Option<PathBuf>,
    /// Used to name the output file.
    #[arg(long)]
    pub lang: Option<LangCode>,
    #[arg(long)]
    pub min_freq: Option<u32>,
    #[arg(long, value_name = "DIR")]
    pub out: Option<PathBuf>,
}

#[derive(Args, Debug)]
pub struct PairsArgs {
    #[command(flatten)]
    pub pair: PairArgs,
    /// Source vocabulary TSV.
    #[arg(long, value_name = "FILE")]
    pub vocab: Option<PathBuf>,
    /// Dominant-language words, one per line (extra tab fields ignored).
    #[arg(long, value_name = "FILE")]
    pub lexicon: Option<PathBuf>,
    #[arg(long)]
    pub min_freq: Option<u32>,
    #[arg(long, value_name = "DIR")]
    pub out: Option<PathBuf>,
}

#[derive(Args, Debug)]
pub struct AlignArgs {
    #[command(flatten)]
    pub pair: PairArgs,
    /// Spelling pairs TSV.
    #[arg(long, value_name = "FILE")]
    pub pairs: Option<PathBuf>,
    #[arg(long, value_name = "DIR")]
    pub out: Option<PathBuf>,
}

#[derive(Args, Debug)]
pub struct NoiseArgs {
    #[arg(long, value_name = "FILE")]
    pub matrix: Option<PathBuf>,
    /// Clean sentences, one per line.
    #[arg(long, value_name = "FILE")]
    pub corpus: Option<PathBuf>,
    #[arg(long)]
    pub seed: Option<u64>,
    /// One of 20, 40, 60, 80, 100, all. Without it every level and ALL are written.
    #[arg(long)]
    pub level: Option<NoiseLevel>,
    /// Keep duplicate pairs in the ALL dataset.
    #[arg(long)]
    pub no_dedup: bool,
    #[arg(long, value_name = "DIR")]
    pub out: Option<PathBuf>,
}

#[derive(Args, Debug)]
pub struct EvalArgs {
    /// Score the noisy column of `--dataset` against its clean column.
    #[arg(long)]
    pub baseline: bool,
    #[arg(long, value_name = "FILE")]
    pub dataset: Option<PathBuf>,
    #[arg(long, value_name = "FILE")]
    pub hyp: Option<PathBuf>,
    #[arg(long = "ref", value_name = "FILE")]
    pub reference: Option<PathBuf>,
    /// CSV label; defaults to the file name up to the first dot.
    #[arg(long)]
    pub label: Option<String>,
    /// Also write eval.csv and a manifest here.
    #[arg(long, value_name = "DIR")]
    pub out: Option<PathBuf>,
}

#[derive(Args, Debug)]
pub struct LangidTrainArgs {
    /// Directory with `<label>.txt` clean sentence files and
    /// `<src>_<dom>.<level>.tsv` noise datasets.
    #[arg(long, value_name = "DIR")]
    pub data: Option<PathBuf>,
    /// clean, noisy-<level> or merged.
    #[arg(long)]
    pub setup: Option<Setup>,
    #[arg(long)]
    pub seed: Option<u64>,
    #[arg(long)]
    pub cap: Option<usize>,
    #[arg(long)]
    pub epochs: Option<usize>,
    #[arg(long)]
    pub lr: Option<f32>,
    #[arg(long)]
    pub split: Option<f64>,
    #[arg(long, value_name = "DIR")]
    pub out: Option<PathBuf>,
}

#[derive(Args, Debug)]
pub struct LangidEvalArgs {
    #[arg(long, value_name = "FILE")]
    pub model: Option<PathBuf>,
    /// Test set TSV written by langid-train.
    #[arg(long, value_name = "FILE")]
    pub test: Option<PathBuf>,
    /// Only score the noisy test sentences.
    #[arg(long)]
    pub noisy_only: bool,
    #[arg(long, value_name = "DIR")]
    pub out: Option<PathBuf>,
}

#[derive(Args, Debug)]
pub struct NormalizeArgs {
    /// Registered normalizer: beam or copy.
    #[arg(long)]
    pub method: Option<String>,
    /// Noisy sentences, one per line.
    #[arg(long, value_name = "FILE")]
    pub input: Option<PathBuf>,
    /// Alignment matrix to fit the channel from.
    #[arg(long, value_name = "FILE")]
    pub matrix: Option<PathBuf>,
    /// Previously fitted channel TSV (instead of --matrix).
    #[arg(long, value_name = "FILE")]
    pub channel: Option<PathBuf>,
    /// Clean sentences to train the character LM on.
    #[arg(long, value_name = "FILE")]
    pub lm_corpus: Option<PathBuf>,
    /// Previously trained LM TSV (instead of --lm-corpus).
    #[arg(long, value_name = "FILE")]
    pub lm: Option<PathBuf>,
    #[arg(long)]
    pub self_weight: Option<f64>,
    #[arg(long)]
    pub order: Option<usize>,
    #[arg(long)]
    pub alpha: Option<f64>,
    #[arg(long)]
    pub beam_width: Option<usize>,
    #[arg(long, value_name = "DIR")]
    pub out: Option<PathBuf>,
}

#[derive(Args, Debug)]
pub struct ScoreArgs {
    #[arg(long, value_name = "FILE")]
    pub hyp: Option<PathBuf>,
    #[arg(long = "ref", value_name = "FILE")]
    pub reference: Option<PathBuf>,
    /// Registered metric name; repeatable. Defaults to all.
    #[arg(long)]
    pub metric: Vec<String>,
    #[arg(long, value_name = "DIR")]
    pub out: Option<PathBuf>,
}

#[derive(Args, Debug)]
pub struct RatioArgs {
    #[command(flatten)]
    pub pair: PairArgs,
    #[arg(long, value_name = "DIR")]
    pub out: Option<PathBuf>,
}
