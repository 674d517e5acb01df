//! Brute-force reference implementations shared by the integration tests.
//!
//! Everything here recomputes results from first principles with different
//! code paths than the library: direct -sum p*log2(p) entropy, explicit
//! index loops for n-gram windows, and naive summation. Library results are
//! checked against these.

#![allow(dead_code)]

use std::collections::BTreeMap;
use std::sync::Arc;

use fload::contrast::ContrastSpec;
use fload::corpus::{CorpusSource, TokenStreamCorpus, WeightedLexicon};
use fload::schema::{parse_schema, Schema};

/// Shannon entropy of a count multiset, in bits, computed directly as
/// -sum (c/T) log2 (c/T).
pub fn oracle_entropy(counts: &[f64]) -> f64 {
    let total: f64 = counts.iter().sum();
    assert!(total > 0.0, "oracle_entropy needs a non-empty table");
    let mut h = 0.0;
    for &c in counts {
        if c > 0.0 {
            let p = c / total;
            h -= p * p.log2();
        }
    }
    h
}

/// n-gram counts of a token-stream corpus by explicit enumeration, with
/// windows confined to single utterances.
pub fn oracle_ngram_counts(
    utterances: &[Vec<String>],
    n: usize,
) -> BTreeMap<Vec<String>, f64> {
    let mut counts: BTreeMap<Vec<String>, f64> = BTreeMap::new();
    for utt in utterances {
        if utt.len() < n {
            continue;
        }
        for start in 0..=(utt.len() - n) {
            let gram: Vec<String> = utt[start..start + n].to_vec();
            *counts.entry(gram).or_insert(0.0) += 1.0;
        }
    }
    counts
}

/// Entropy rate H(D_n)/n of a stream corpus, brute force.
pub fn oracle_stream_rate(utterances: &[Vec<String>], n: usize) -> f64 {
    let counts = oracle_ngram_counts(utterances, n);
    let values: Vec<f64> = counts.values().copied().collect();
    oracle_entropy(&values) / n as f64
}

fn stream_canonical(corpus: &TokenStreamCorpus) -> Vec<Vec<String>> {
    corpus
        .utterances
        .iter()
        .map(|utt| utt.iter().map(|v| v.canonical()).collect())
        .collect()
}

fn lexicon_counts(lexicon: &WeightedLexicon) -> Vec<f64> {
    let mut by_key: BTreeMap<String, f64> = BTreeMap::new();
    for (key, _, weight) in lexicon.iter() {
        *by_key.entry(key.to_string()).or_insert(0.0) += weight;
    }
    by_key.values().copied().collect()
}

/// Brute-force functional load of a contrast at order n, sharing only the
/// contrast map itself with the library.
pub fn oracle_fl(source: &CorpusSource, spec: &ContrastSpec, n: usize) -> f64 {
    let (before, after) = match source {
        CorpusSource::Stream(corpus) => {
            let before = oracle_stream_rate(&stream_canonical(corpus), n);
            let mapped: Vec<Vec<String>> = corpus
                .utterances
                .iter()
                .map(|utt| {
                    utt.iter()
                        .map(|v| spec.apply(v).expect("contrast map").canonical())
                        .collect()
                })
                .collect();
            (before, oracle_stream_rate(&mapped, n))
        }
        CorpusSource::Lexicon(lexicon) => {
            assert_eq!(n, 1, "lexicons are order-1 only");
            let before = oracle_entropy(&lexicon_counts(lexicon));
            let mut mapped: BTreeMap<String, f64> = BTreeMap::new();
            for (_, value, weight) in lexicon.iter() {
                let image = spec.apply(value).expect("contrast map").canonical();
                *mapped.entry(image).or_insert(0.0) += weight;
            }
            let values: Vec<f64> = mapped.values().copied().collect();
            (before, oracle_entropy(&values))
        }
    };
    assert!(before > 0.0, "degenerate oracle corpus");
    (before - after) / before
}

/// Pearson correlation, textbook form with naive sums.
pub fn oracle_pearson(xs: &[f64], ys: &[f64]) -> f64 {
    let k = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / k;
    let my = ys.iter().sum::<f64>() / k;
    let mut num = 0.0;
    let mut dx = 0.0;
    let mut dy = 0.0;
    for (x, y) in xs.iter().zip(ys) {
        num += (x - mx) * (y - my);
        dx += (x - mx) * (x - mx);
        dy += (y - my) * (y - my);
    }
    num / (dx.sqrt() * dy.sqrt())
}

// ---------------------------------------------------------------------------
// Fixtures

pub const TOY_STREAM: &str = "a b a c c a a c c a a b b a c a b a b";

pub fn toy_schema() -> Arc<Schema> {
    Arc::new(parse_schema("atomic phn = a b c").unwrap())
}

pub fn syllable_schema() -> Arc<Schema> {
    Arc::new(
        parse_schema(
            "atomic phone = p b t d k g s z n m ae eh ih iy uw ax jh y\n\
             atomic stress = primary secondary unstressed\n\
             composite syl = phones:string<phone> str:stress\n\
             composite word = syls:string<syl>\n",
        )
        .unwrap(),
    )
}
