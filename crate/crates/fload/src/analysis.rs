//! Higher-order analyses: all-pairs FL matrices, the consistency
//! correlation between two FL measures, and expected single-phoneme FL over
//! a set of plausible mergers.

use std::collections::{BTreeMap, BTreeSet};

use crate::contrast::binary_oppositions;
use crate::corpus::CorpusSource;
use crate::error::{Error, Result};
use crate::infotheory::functional_load;
use crate::schema::{for_each_atomic, strip_comment, valid_token, TypeRef, Value};

/// FL of every unordered pair over a phoneme subset, at one order.
#[derive(Debug, Clone, PartialEq)]
pub struct FlMatrix {
    pub atomic_type: String,
    pub n: usize,
    /// (x, y) with x < y lexicographically, in pair order.
    pub entries: Vec<((String, String), f64)>,
}

impl FlMatrix {
    pub fn get(&self, x: &str, y: &str) -> Option<f64> {
        let key = ordered_pair(x, y);
        self.entries
            .iter()
            .find(|(k, _)| *k == key)
            .map(|(_, v)| *v)
    }
}

fn ordered_pair(x: &str, y: &str) -> (String, String) {
    if x <= y {
        (x.to_string(), y.to_string())
    } else {
        (y.to_string(), x.to_string())
    }
}

/// One pairwise functional-load evaluation per unordered pair of `phi0`,
/// in lexicographic pair order.
pub fn fl_matrix(
    source: &CorpusSource,
    atomic_type: &str,
    phi0: &[String],
    n: usize,
) -> Result<FlMatrix> {
    let schema = source.schema().clone();
    let specs = binary_oppositions(schema, atomic_type, phi0)?;
    let mut entries = Vec::with_capacity(specs.len());
    for spec in specs {
        let spec = spec.for_object_type(source.object_type())?;
        let report = functional_load(source, &spec, n)?;
        // recover the pair from the spec's single two-member class
        let pair = match &spec.rules[0] {
            crate::contrast::Rule::Relabel { partition, .. } => {
                let class: Vec<&String> = partition.classes()[0].iter().collect();
                (class[0].clone(), class[1].clone())
            }
            _ => unreachable!(),
        };
        entries.push((pair, report.fl));
    }
    Ok(FlMatrix {
        atomic_type: atomic_type.to_string(),
        n,
        entries,
    })
}

/// Sample Pearson correlation between two FL value lists taken over the
/// same contrast set.
pub fn consistency_alpha(xs: &[f64], ys: &[f64]) -> Result<f64> {
    if xs.len() != ys.len() {
        return Err(Error::invalid("FL value lists have different lengths"));
    }
    if xs.len() < 3 {
        return Err(Error::invalid("need at least 3 contrasts for a correlation"));
    }
    let n = xs.len() as f64;
    let mean = |v: &[f64]| v.iter().sum::<f64>() / n;
    let mx = mean(xs);
    let my = mean(ys);
    let mut sxy = 0.0;
    let mut sxx = 0.0;
    let mut syy = 0.0;
    for (x, y) in xs.iter().zip(ys) {
        sxy += (x - mx) * (y - my);
        sxx += (x - mx) * (x - mx);
        syy += (y - my) * (y - my);
    }
    if sxx == 0.0 || syy == 0.0 {
        return Err(Error::degenerate(
            "undefined correlation: an input list is constant",
        ));
    }
    Ok(sxy / (sxx * syy).sqrt())
}

/// Fraction of matrix entries strictly smaller than the given pair's value.
pub fn rank_entry(matrix: &FlMatrix, x: &str, y: &str) -> Result<f64> {
    let value = matrix
        .get(x, y)
        .ok_or_else(|| Error::invalid(format!("pair ({x}, {y}) not in matrix")))?;
    let smaller = matrix.entries.iter().filter(|(_, v)| *v < value).count();
    Ok(smaller as f64 / matrix.entries.len() as f64)
}

/// How merger probabilities P(x, y) over the similarity set are chosen.
#[derive(Debug, Clone, PartialEq)]
pub enum WeightingMode {
    /// P(x, y) proportional to the corpus frequency of y.
    FrequencyProportional,
    /// Explicit P(x, y); per x they must sum to 1 within 1e-9.
    ExplicitWeights(BTreeMap<(String, String), f64>),
}

/// Similarity sets S(x) plus a weighting mode.
#[derive(Debug, Clone, PartialEq)]
pub struct SimilarityModel {
    pub atomic_type: String,
    pub similar: BTreeMap<String, BTreeSet<String>>,
    pub mode: WeightingMode,
}

impl SimilarityModel {
    pub fn validate(&self) -> Result<()> {
        for (x, set) in &self.similar {
            if set.contains(x) {
                return Err(Error::invalid(format!(
                    "similarity set of `{x}` must not contain `{x}`"
                )));
            }
        }
        if let WeightingMode::ExplicitWeights(weights) = &self.mode {
            for (x, set) in &self.similar {
                if set.is_empty() {
                    continue;
                }
                let sum: f64 = set
                    .iter()
                    .map(|y| {
                        weights
                            .get(&(x.clone(), y.clone()))
                            .copied()
                            .unwrap_or(0.0)
                    })
                    .sum();
                if (sum - 1.0).abs() > 1e-9 {
                    return Err(Error::invalid(format!(
                        "weights over S({x}) sum to {sum}, expected 1"
                    )));
                }
            }
        }
        Ok(())
    }
}

/// Parses the similarity-model format: lines `similar <x> : <y> <y> ...`
/// and optional `weight <x> <y> = <p>`. A model with any `weight` lines is
/// explicit; otherwise frequency-proportional.
pub fn parse_similarity(text: &str, atomic_type: &str) -> Result<SimilarityModel> {
    let mut similar = BTreeMap::new();
    let mut weights = BTreeMap::new();
    for (idx, raw) in text.lines().enumerate() {
        let line_no = idx + 1;
        let line = strip_comment(raw).trim();
        if line.is_empty() {
            continue;
        }
        let words: Vec<&str> = line.split_whitespace().collect();
        match words.first() {
            Some(&"similar") => {
                if words.len() < 4 || words[2] != ":" {
                    return Err(Error::parse(line_no, "expected `similar <x> : <y> ...`"));
                }
                let x = words[1].to_string();
                let set: BTreeSet<String> = words[3..].iter().map(|s| s.to_string()).collect();
                if !valid_token(&x) || set.iter().any(|t| !valid_token(t)) {
                    return Err(Error::parse(line_no, "illegal token"));
                }
                if similar.insert(x.clone(), set).is_some() {
                    return Err(Error::parse(line_no, format!("duplicate entry for `{x}`")));
                }
            }
            Some(&"weight") => {
                if words.len() != 5 || words[3] != "=" {
                    return Err(Error::parse(line_no, "expected `weight <x> <y> = <p>`"));
                }
                let p: f64 = words[4]
                    .parse()
                    .map_err(|_| Error::parse(line_no, format!("bad weight `{}`", words[4])))?;
                weights.insert((words[1].to_string(), words[2].to_string()), p);
            }
            _ => return Err(Error::parse(line_no, "expected `similar` or `weight`")),
        }
    }
    let mode = if weights.is_empty() {
        WeightingMode::FrequencyProportional
    } else {
        WeightingMode::ExplicitWeights(weights)
    };
    let model = SimilarityModel {
        atomic_type: atomic_type.to_string(),
        similar,
        mode,
    };
    model.validate()?;
    Ok(model)
}

/// Weighted occurrence counts of `atomic_type` tokens across a corpus
/// (lexicon entries weighted by their entry weight).
pub fn atomic_frequencies(source: &CorpusSource, atomic_type: &str) -> BTreeMap<String, f64> {
    let schema = source.schema();
    let ty = TypeRef::Named(source.object_type().to_string());
    let mut freqs: BTreeMap<String, f64> = BTreeMap::new();
    let mut tally = |value: &Value, weight: f64| {
        for_each_atomic(schema, &ty, value, &mut |t, tok| {
            if t == atomic_type {
                *freqs.entry(tok.to_string()).or_insert(0.0) += weight;
            }
        });
    };
    match source {
        CorpusSource::Stream(corpus) => {
            for utt in &corpus.utterances {
                for v in utt {
                    tally(v, 1.0);
                }
            }
        }
        CorpusSource::Lexicon(lexicon) => {
            for (_, v, w) in lexicon.iter() {
                tally(v, w);
            }
        }
    }
    freqs
}

/// Expected FL of a single phoneme over its plausible mergers.
#[derive(Debug, Clone, PartialEq)]
pub struct PhonemeFlReport {
    pub phoneme: String,
    pub n: usize,
    pub fl: f64,
    /// True when S(x) is empty and the value 0 is by convention.
    pub empty_similarity_set: bool,
    /// (y, P(x, y), FL(x, y)) in lexicographic y order.
    pub breakdown: Vec<(String, f64, f64)>,
}

/// FL(x) = sum over y in S(x) of P(x, y) * FL(x, y), the expected FL of x
/// over its possible absolute mergers.
pub fn single_phoneme_fl(
    source: &CorpusSource,
    phoneme: &str,
    model: &SimilarityModel,
    n: usize,
) -> Result<PhonemeFlReport> {
    model.validate()?;
    let similar = model.similar.get(phoneme).cloned().unwrap_or_default();
    if similar.is_empty() {
        return Ok(PhonemeFlReport {
            phoneme: phoneme.to_string(),
            n,
            fl: 0.0,
            empty_similarity_set: true,
            breakdown: Vec::new(),
        });
    }
    let probs: BTreeMap<String, f64> = match &model.mode {
        WeightingMode::ExplicitWeights(weights) => similar
            .iter()
            .map(|y| {
                let p = weights
                    .get(&(phoneme.to_string(), y.clone()))
                    .copied()
                    .unwrap_or(0.0);
                (y.clone(), p)
            })
            .collect(),
        WeightingMode::FrequencyProportional => {
            let freqs = atomic_frequencies(source, &model.atomic_type);
            let total: f64 = similar
                .iter()
                .map(|y| freqs.get(y).copied().unwrap_or(0.0))
                .sum();
            if !(total > 0.0) {
                return Err(Error::degenerate(format!(
                    "no phoneme in S({phoneme}) occurs in the reference corpus"
                )));
            }
            similar
                .iter()
                .map(|y| {
                    (
                        y.clone(),
                        freqs.get(y).copied().unwrap_or(0.0) / total,
                    )
                })
                .collect()
        }
    };
    let mut breakdown = Vec::new();
    let mut fl = 0.0;
    for y in &similar {
        let p = probs[y];
        let specs = binary_oppositions(
            source.schema().clone(),
            &model.atomic_type,
            &[phoneme.to_string(), y.clone()],
        )?;
        let spec = specs[0].for_object_type(source.object_type())?;
        let pair_fl = functional_load(source, &spec, n)?.fl;
        fl += p * pair_fl;
        breakdown.push((y.clone(), p, pair_fl));
    }
    Ok(PhonemeFlReport {
        phoneme: phoneme.to_string(),
        n,
        fl,
        empty_similarity_set: false,
        breakdown,
    })
}
