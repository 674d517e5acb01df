//! Functional load of phonological contrasts, measured from corpora.
//!
//! A schema describes the value space (atomic inventories, fixed-arity
//! composites, variable-length strings). A corpus is either a token stream
//! with utterance boundaries or a weighted lexicon. A contrast is a
//! deterministic map over values: relabelings of an atomic partition,
//! guarded insertions, and guarded deletions. The functional load of a
//! contrast is the relative drop in n-gram entropy rate when the contrast
//! is neutralized:
//!
//! ```text
//! FL = (H_before - H_after) / H_before
//! ```
//!
//! On top of that sit pairwise FL matrices with percentile ranks, cohort
//! statistics for weighted lexicons (Shipman, Huttenlocher, Carter, PIE),
//! a Pearson consistency score between two FL reports, and expected FL of
//! a single phoneme over a similarity model.
//!
//! All computations are deterministic: collections are ordered, entropy
//! terms are summed in sorted order with compensated summation, and
//! reported numbers are reproducible bit-for-bit across runs.

// `!(x > 0.0)` is used deliberately so NaN weights and entropies fail the
// same validation as non-positive ones
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod analysis;
pub mod cli;
pub mod contrast;
pub mod corpus;
pub mod error;
pub mod infotheory;
pub mod schema;

pub use analysis::{
    consistency_alpha, fl_matrix, parse_similarity, rank_entry, single_phoneme_fl, FlMatrix,
    PhonemeFlReport, SimilarityModel, WeightingMode,
};
pub use contrast::{binary_oppositions, parse_contrast, ContrastSpec, Guard, Partition, Rule};
pub use corpus::{
    join_lexicon, parse_pronunciations, parse_token_stream, parse_weighted_lexicon, CorpusSource,
    MissPolicy, NGramTable, TokenStreamCorpus, WeightedLexicon,
};
pub use error::{Error, Result};
pub use infotheory::{
    cohort_analysis, entropy, functional_load, hockett_fl, CohortReport, EntropyEstimate, FlReport,
};
pub use schema::{parse_schema, parse_single_value, parse_value_sequence, Schema, TypeDef, Value};
