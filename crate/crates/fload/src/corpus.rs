//! Corpus ingestion and n-gram counting.
//!
//! Two corpus kinds share one count-table type: token streams (one
//! utterance per line) and weighted lexicons (word-frequency pairs with a
//! single pronunciation per word). n-grams are counted within utterances
//! only; for a single-line corpus the denominator reduces to N - n + 1.

use std::collections::{BTreeMap, BTreeSet};
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::schema::{
    parse_single_value, parse_value_sequence, strip_comment, valid_token, Schema, Value,
};

/// A sequence of utterances, each a non-empty run of well-typed values.
#[derive(Debug, Clone)]
pub struct TokenStreamCorpus {
    pub schema: Arc<Schema>,
    pub object_type: String,
    pub utterances: Vec<Vec<Value>>,
}

impl TokenStreamCorpus {
    pub fn new(
        schema: Arc<Schema>,
        object_type: impl Into<String>,
        utterances: Vec<Vec<Value>>,
    ) -> Result<Self> {
        let object_type = object_type.into();
        schema.require(&object_type)?;
        if utterances.iter().any(|u| u.is_empty()) {
            return Err(Error::invalid("empty utterance"));
        }
        Ok(TokenStreamCorpus {
            schema,
            object_type,
            utterances,
        })
    }

    /// Total object count N.
    pub fn n_objects(&self) -> usize {
        self.utterances.iter().map(|u| u.len()).sum()
    }

    /// Counts contiguous n-grams within utterances. Utterances shorter than
    /// `n` contribute nothing; the total is sum over utterances of
    /// max(0, len - n + 1).
    pub fn count_ngrams(&self, n: usize) -> Result<NGramTable> {
        if n < 1 {
            return Err(Error::invalid("n-gram order must be at least 1"));
        }
        let mut table = NGramTable::new(n);
        for utt in &self.utterances {
            let canon: Vec<String> = utt.iter().map(|v| v.canonical()).collect();
            for window in canon.windows(n) {
                table.add(window.to_vec(), 1.0);
            }
        }
        Ok(table)
    }
}

/// Word-frequency list keyed by canonical pronunciation value.
#[derive(Debug, Clone)]
pub struct WeightedLexicon {
    pub schema: Arc<Schema>,
    pub object_type: String,
    /// canonical serialization -> (value, weight > 0), in canonical order
    entries: BTreeMap<String, (Value, f64)>,
}

impl WeightedLexicon {
    pub fn new(schema: Arc<Schema>, object_type: impl Into<String>) -> Result<Self> {
        let object_type = object_type.into();
        schema.require(&object_type)?;
        Ok(WeightedLexicon {
            schema,
            object_type,
            entries: BTreeMap::new(),
        })
    }

    /// Inserts an entry; duplicate keys are an error, non-positive weights
    /// are an error.
    pub fn insert(&mut self, value: Value, weight: f64) -> Result<()> {
        if !(weight > 0.0) {
            return Err(Error::invalid(format!(
                "non-positive weight {weight} for `{}`",
                value.canonical()
            )));
        }
        let key = value.canonical();
        if self.entries.contains_key(&key) {
            return Err(Error::invalid(format!("duplicate lexicon entry `{key}`")));
        }
        self.entries.insert(key, (value, weight));
        Ok(())
    }

    /// Adds weight to an entry, creating it if absent. Used when a contrast
    /// map makes distinct words collide.
    pub fn add_weight(&mut self, value: Value, weight: f64) -> Result<()> {
        if !(weight > 0.0) {
            return Err(Error::invalid("non-positive weight"));
        }
        let key = value.canonical();
        match self.entries.entry(key) {
            std::collections::btree_map::Entry::Occupied(mut e) => e.get_mut().1 += weight,
            std::collections::btree_map::Entry::Vacant(e) => {
                e.insert((value, weight));
            }
        }
        Ok(())
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// Entries in canonical key order.
    pub fn iter(&self) -> impl Iterator<Item = (&str, &Value, f64)> {
        self.entries.iter().map(|(k, (v, w))| (k.as_str(), v, *w))
    }

    pub fn total_weight(&self) -> f64 {
        // summed in canonical key order
        self.entries.values().map(|(_, w)| *w).sum()
    }

    /// The n=1 table whose counts are the entry weights.
    pub fn to_table(&self) -> Result<NGramTable> {
        if self.entries.is_empty() {
            return Err(Error::degenerate("empty lexicon"));
        }
        let mut table = NGramTable::new(1);
        for (key, (_, w)) in &self.entries {
            table.add(vec![key.clone()], *w);
        }
        Ok(table)
    }
}

/// Counts of n-tuples of canonical value serializations.
#[derive(Debug, Clone, PartialEq)]
pub struct NGramTable {
    pub n: usize,
    counts: BTreeMap<Vec<String>, f64>,
    total: f64,
}

impl NGramTable {
    pub fn new(n: usize) -> Self {
        NGramTable {
            n,
            counts: BTreeMap::new(),
            total: 0.0,
        }
    }

    pub fn add(&mut self, key: Vec<String>, count: f64) {
        debug_assert_eq!(key.len(), self.n);
        debug_assert!(count >= 0.0);
        *self.counts.entry(key).or_insert(0.0) += count;
        self.total += count;
    }

    pub fn get(&self, key: &[String]) -> f64 {
        self.counts.get(key).copied().unwrap_or(0.0)
    }

    pub fn total(&self) -> f64 {
        self.total
    }

    pub fn distinct(&self) -> usize {
        self.counts.values().filter(|c| **c > 0.0).count()
    }

    /// Keys and counts in canonical key order.
    pub fn iter(&self) -> impl Iterator<Item = (&[String], f64)> {
        self.counts.iter().map(|(k, c)| (k.as_slice(), *c))
    }

    /// Key-wise sum; both tables must have the same order. Counts are merged
    /// per key in canonical key order.
    pub fn merge(&self, other: &NGramTable) -> Result<NGramTable> {
        if self.n != other.n {
            return Err(Error::invalid("cannot merge tables of different order"));
        }
        let mut out = NGramTable::new(self.n);
        for (k, c) in self.counts.iter().chain(other.counts.iter()) {
            out.add(k.clone(), *c);
        }
        Ok(out)
    }
}

/// Parses the token-stream format: one utterance per line, each a
/// whitespace-separated sequence of canonical `object_type` values.
pub fn parse_token_stream(
    text: &str,
    schema: Arc<Schema>,
    object_type: &str,
) -> Result<TokenStreamCorpus> {
    schema.require(object_type)?;
    let mut utterances = Vec::new();
    for (idx, raw) in text.lines().enumerate() {
        let line = strip_comment(raw).trim();
        if line.is_empty() {
            continue;
        }
        let vals = parse_value_sequence(&schema, object_type, line, idx + 1)?;
        if !vals.is_empty() {
            utterances.push(vals);
        }
    }
    TokenStreamCorpus::new(schema, object_type, utterances)
}

/// Parses the lexicon format: each line `<weight> TAB <canonical value>`.
pub fn parse_weighted_lexicon(
    text: &str,
    schema: Arc<Schema>,
    object_type: &str,
) -> Result<WeightedLexicon> {
    let mut lexicon = WeightedLexicon::new(schema.clone(), object_type)?;
    for (idx, raw) in text.lines().enumerate() {
        let line_no = idx + 1;
        let line = strip_comment(raw);
        if line.trim().is_empty() {
            continue;
        }
        let (weight_str, value_str) = line
            .split_once('\t')
            .ok_or_else(|| Error::parse(line_no, "expected `<weight> TAB <value>`"))?;
        let weight: f64 = weight_str.trim().parse().map_err(|_| {
            Error::parse(line_no, format!("bad weight `{}`", weight_str.trim()))
        })?;
        if !(weight > 0.0) || !weight.is_finite() {
            return Err(Error::parse(line_no, format!("non-positive weight {weight}")));
        }
        let value = parse_single_value(&schema, object_type, value_str, line_no)?;
        lexicon
            .insert(value, weight)
            .map_err(|e| Error::parse(line_no, e.to_string()))?;
    }
    Ok(lexicon)
}

/// What to do with stream keys missing from the pronunciation map.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MissPolicy {
    Skip,
    Error,
}

#[derive(Debug, Clone, Default)]
pub struct JoinDiagnostic {
    pub misses: usize,
    pub missing_keys: BTreeSet<String>,
}

/// Parses a pronouncing dictionary: each line `<key> TAB <canonical value>`
/// with values of `target_type`.
pub fn parse_pronunciations(
    text: &str,
    schema: &Schema,
    target_type: &str,
) -> Result<BTreeMap<String, Value>> {
    schema.require(target_type)?;
    let mut map = BTreeMap::new();
    for (idx, raw) in text.lines().enumerate() {
        let line_no = idx + 1;
        let line = strip_comment(raw);
        if line.trim().is_empty() {
            continue;
        }
        let (key, value_str) = line
            .split_once('\t')
            .ok_or_else(|| Error::parse(line_no, "expected `<key> TAB <value>`"))?;
        let key = key.trim();
        if !valid_token(key) {
            return Err(Error::parse(line_no, format!("illegal key `{key}`")));
        }
        let value = parse_single_value(schema, target_type, value_str, line_no)?;
        if map.insert(key.to_string(), value).is_some() {
            return Err(Error::parse(line_no, format!("duplicate key `{key}`")));
        }
    }
    Ok(map)
}

/// Replaces each atomic word key by its pronunciation, preserving utterance
/// boundaries and order. With [`MissPolicy::Skip`], unmapped keys are
/// dropped and counted; utterances that lose every key are dropped.
pub fn join_lexicon(
    word_keys: &TokenStreamCorpus,
    pronunciations: &BTreeMap<String, Value>,
    target_schema: Arc<Schema>,
    target_type: &str,
    policy: MissPolicy,
) -> Result<(TokenStreamCorpus, JoinDiagnostic)> {
    if !word_keys.schema.is_atomic(&word_keys.object_type) {
        return Err(Error::invalid(format!(
            "join source type `{}` is not atomic",
            word_keys.object_type
        )));
    }
    let mut diagnostic = JoinDiagnostic::default();
    let mut utterances = Vec::new();
    for utt in &word_keys.utterances {
        let mut mapped = Vec::new();
        for v in utt {
            let key = match v {
                Value::Atomic(tok) => tok,
                _ => return Err(Error::invalid("non-atomic value in join source")),
            };
            match pronunciations.get(key) {
                Some(p) => mapped.push(p.clone()),
                None => match policy {
                    MissPolicy::Error => {
                        return Err(Error::invalid(format!(
                            "no pronunciation for key `{key}`"
                        )))
                    }
                    MissPolicy::Skip => {
                        diagnostic.misses += 1;
                        diagnostic.missing_keys.insert(key.clone());
                    }
                },
            }
        }
        if !mapped.is_empty() {
            utterances.push(mapped);
        }
    }
    let corpus = TokenStreamCorpus::new(target_schema, target_type, utterances)?;
    Ok((corpus, diagnostic))
}

/// Either corpus kind, so FL operations share one code path.
#[derive(Debug, Clone)]
pub enum CorpusSource {
    Stream(TokenStreamCorpus),
    Lexicon(WeightedLexicon),
}

impl CorpusSource {
    pub fn schema(&self) -> &Arc<Schema> {
        match self {
            CorpusSource::Stream(c) => &c.schema,
            CorpusSource::Lexicon(l) => &l.schema,
        }
    }

    pub fn object_type(&self) -> &str {
        match self {
            CorpusSource::Stream(c) => &c.object_type,
            CorpusSource::Lexicon(l) => &l.object_type,
        }
    }

    /// The order-n count table. Lexicons carry no sequence information, so
    /// n must be 1 for them.
    pub fn table(&self, n: usize) -> Result<NGramTable> {
        match self {
            CorpusSource::Stream(c) => c.count_ngrams(n),
            CorpusSource::Lexicon(l) => {
                if n != 1 {
                    return Err(Error::invalid(format!(
                        "n={n} is not supported on a lexicon (only n=1)"
                    )));
                }
                l.to_table()
            }
        }
    }
}
