//! Script normalization for Perso-Arabic minority languages.
//!
//! The crate covers the whole pipeline: script inventories and mapping rules
//! ([`inventory`]), corpus cleaning ([`corpus`]), character alignment
//! ([`alignment`]), synthetic noise ([`noise`]), evaluation ([`metrics`]),
//! language identification ([`langid`]) and a noisy-channel normalizer
//! ([`normalizer`]).

pub mod alignment;
pub mod checksum;
pub mod corpus;
pub mod error;
pub mod grapheme;
pub mod inventory;
pub mod langid;
pub mod metrics;
pub mod noise;
pub mod normalizer;

pub use error::{Error, Result};
pub use grapheme::{Grapheme, Segmenter};
pub use inventory::{LangCode, MappingRuleSet, ScriptInventory};
