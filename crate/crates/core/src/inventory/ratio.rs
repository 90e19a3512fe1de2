use std::collections::{BTreeMap, BTreeSet};

use super::{MappingRuleSet, ScriptInventory};
use crate::grapheme::Grapheme;

/// Similarity of two scripts under a rule set:
/// `(|M| / |A ∪ B|) * (|M| / |A ∩ B|)`.
///
/// `M` holds the shared graphemes whose only rule (as a single-grapheme
/// source, at any position) is the identity mapping. Graphemes are atomic,
/// so a compound counts as one member. Returns 0 for disjoint scripts.
pub fn script_ratio(rules: &MappingRuleSet, a: &ScriptInventory, b: &ScriptInventory) -> f64 {
    let shared: BTreeSet<&Grapheme> = a.chars().intersection(b.chars()).collect();
    if shared.is_empty() {
        return 0.0;
    }
    let union = a.chars().union(b.chars()).count();

    let mut by_source: BTreeMap<&Grapheme, Vec<bool>> = BTreeMap::new();
    for rule in rules.rules() {
        if let [g] = rule.source.as_slice() {
            by_source.entry(g).or_default().push(rule.is_identity());
        }
    }
    let unique = shared
        .iter()
        .filter(|g| matches!(by_source.get(*g).map(Vec::as_slice), Some([true])))
        .count();

    let m = unique as f64;
    (m / union as f64) * (m / shared.len() as f64)
}
