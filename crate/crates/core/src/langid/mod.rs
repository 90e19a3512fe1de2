//! Character n-gram language identification and the clean/noisy/merged
//! experiment harness.

mod eval;
mod features;
mod model;
mod train;

pub use eval::{eval_langid, AtK, LabelScores, LangIdEval};
pub use features::{features, BUCKETS, MAX_N, MIN_N};
pub use model::{LangIdModel, DIM};
pub use train::{
    fit, select_examples, train_langid, Example, LabelData, LangIdConfig, LangIdData, SelectionLog, Setup, TestSet,
};

/// The `k` most probable labels for a sentence.
pub fn predict_topk(model: &LangIdModel, sentence: &str, k: usize) -> crate::Result<Vec<(String, f64)>> {
    model.predict_topk(sentence, k)
}
