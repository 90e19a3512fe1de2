//! Spelling pairs, Needleman-Wunsch alignment and the character-alignment matrix.

mod matrix;
mod nw;
mod pairs;

pub use matrix::{alignment_counts, build_alignment_matrix, CharAlignmentMatrix, MatrixEntry, Origin, MIN_SCORE};
pub use nw::{needleman_wunsch, Alignment, AlignmentParams, Column};
pub use pairs::{
    extract_spelling_pairs, pairs_from_tsv, pairs_to_tsv, spelling_variants, Provenance, SpellingPair, MAX_VARIANTS,
};
