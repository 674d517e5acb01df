//! Entropy estimates and functional load.
//!
//! The entropy of a count table with total T is computed as
//! `log2(T) - (sum c*log2 c)/T`; the sum runs over positive counts only
//! (a zero count contributes zero) with compensated summation over
//! value-sorted terms, so the result does not depend on key order or on
//! bijective relabelings of the keys.

use std::collections::BTreeMap;

use crate::contrast::ContrastSpec;
use crate::corpus::{CorpusSource, NGramTable, WeightedLexicon};
use crate::error::{Error, Result};

/// Order-n entropy estimate of a corpus: raw n-gram entropy in bits and the
/// per-object rate raw/n.
#[derive(Debug, Clone, PartialEq)]
pub struct EntropyEstimate {
    pub n: usize,
    /// H of the empirical n-gram distribution, bits.
    pub raw: f64,
    /// raw / n, bits per object.
    pub rate: f64,
    pub total: f64,
    pub distinct: usize,
}

/// Compensated (Kahan) sum over terms sorted by value. Sorting makes the
/// result an exact function of the term multiset.
fn kahan_sorted(mut terms: Vec<f64>) -> f64 {
    terms.sort_by(|a, b| a.total_cmp(b));
    let mut sum = 0.0;
    let mut comp = 0.0;
    for t in terms {
        let y = t - comp;
        let s = sum + y;
        comp = (s - sum) - y;
        sum = s;
    }
    sum
}

/// Entropy of the normalized count table, in bits.
pub fn entropy(table: &NGramTable) -> Result<EntropyEstimate> {
    let total = table.total();
    if !(total > 0.0) {
        return Err(Error::degenerate("empty table (total count 0)"));
    }
    let terms: Vec<f64> = table
        .iter()
        .filter(|(_, c)| *c > 0.0)
        .map(|(_, c)| c * c.log2())
        .collect();
    let distinct = terms.len();
    let raw = (total.log2() - kahan_sorted(terms) / total).max(0.0);
    Ok(EntropyEstimate {
        n: table.n,
        raw,
        rate: raw / table.n as f64,
        total,
        distinct,
    })
}

/// Functional load of one contrast at one order.
#[derive(Debug, Clone, PartialEq)]
pub struct FlReport {
    pub contrast: String,
    pub n: usize,
    /// Entropy rate of the corpus, bits/object.
    pub h_before: f64,
    /// Entropy rate of the contrast-mapped corpus, bits/object.
    pub h_after: f64,
    /// (h_before - h_after) / h_before.
    pub fl: f64,
    pub total_before: f64,
    pub distinct_before: usize,
}

/// Estimates the order-n functional load of `spec` on `source`: the
/// normalized entropy-rate drop between the corpus and its image under the
/// contrast map.
pub fn functional_load(source: &CorpusSource, spec: &ContrastSpec, n: usize) -> Result<FlReport> {
    let before = entropy(&source.table(n)?)?;
    if !(before.rate > 0.0) {
        return Err(Error::degenerate(
            "degenerate corpus: zero entropy before the contrast",
        ));
    }
    let mapped = spec.apply_to_corpus(source)?;
    let after = entropy(&mapped.table(n)?)?;
    Ok(FlReport {
        contrast: spec.describe(),
        n,
        h_before: before.rate,
        h_after: after.rate,
        fl: (before.rate - after.rate) / before.rate,
        total_before: before.total,
        distinct_before: before.distinct,
    })
}

/// Pairwise-opposition functional load: `functional_load` with the contrast
/// that merges exactly `{x, y}`. The corpus must be a stream of atomic
/// objects.
pub fn hockett_fl(source: &CorpusSource, x: &str, y: &str, n: usize) -> Result<FlReport> {
    let schema = source.schema().clone();
    let object_type = source.object_type().to_string();
    if !schema.is_atomic(&object_type) {
        return Err(Error::invalid(format!(
            "pairwise FL needs an atomic object type, got `{object_type}`"
        )));
    }
    let partition = crate::contrast::Partition::pair(&schema, &object_type, x, y)?;
    let spec = ContrastSpec::new(
        schema,
        object_type,
        vec![crate::contrast::Rule::Relabel {
            partition,
            guard: crate::contrast::Guard::unconditional(),
        }],
    )?;
    functional_load(source, &spec, n)
}

/// Cohort statistics of a lexicon under a contrast. Cohorts are the
/// preimage classes of the contrast map over lexicon keys.
#[derive(Debug, Clone, PartialEq)]
pub struct CohortReport {
    pub cohort_count: usize,
    /// Average cohort size (unweighted).
    pub shipman_avg_size: f64,
    /// Expected cohort size under word probabilities.
    pub huttenlocher_expected_size: f64,
    /// Expected within-cohort entropy, bits; equals H(W) - H(W_theta).
    pub carter_expected_entropy: f64,
    pub h_w: f64,
    pub h_wtheta: f64,
    /// Percentage of information extracted: 100 * H(W_theta) / H(W).
    pub pie: f64,
}

pub fn cohort_analysis(lexicon: &WeightedLexicon, spec: &ContrastSpec) -> Result<CohortReport> {
    if lexicon.is_empty() {
        return Err(Error::degenerate("empty lexicon"));
    }
    if lexicon.object_type != spec.object_type {
        return Err(Error::invalid(format!(
            "lexicon object type `{}` does not match contrast object type `{}`",
            lexicon.object_type, spec.object_type
        )));
    }
    // cohorts keyed by mapped canonical value, in canonical order
    let mut cohorts: BTreeMap<String, Vec<f64>> = BTreeMap::new();
    for (_, value, weight) in lexicon.iter() {
        let image = spec.apply(value)?.canonical();
        cohorts.entry(image).or_default().push(weight);
    }
    let total: f64 = lexicon.total_weight();

    let h_w = entropy(&lexicon.to_table()?)?.raw;
    let mut theta_table = NGramTable::new(1);
    for (image, weights) in &cohorts {
        theta_table.add(vec![image.clone()], weights.iter().sum());
    }
    let h_wtheta = entropy(&theta_table)?.raw;

    let cohort_count = cohorts.len();
    let shipman_avg_size =
        cohorts.values().map(|ws| ws.len() as f64).sum::<f64>() / cohort_count as f64;
    let mut huttenlocher = 0.0;
    let mut carter = 0.0;
    for weights in cohorts.values() {
        let p_c: f64 = weights.iter().sum::<f64>() / total;
        huttenlocher += p_c * weights.len() as f64;
        let w_c: f64 = weights.iter().sum();
        let h_c = -kahan_sorted(
            weights
                .iter()
                .map(|w| {
                    let p = w / w_c;
                    p * p.log2()
                })
                .collect(),
        );
        carter += p_c * h_c;
    }

    if !(h_w > 0.0) {
        return Err(Error::degenerate(
            "degenerate lexicon: H(W) = 0, PIE undefined",
        ));
    }
    Ok(CohortReport {
        cohort_count,
        shipman_avg_size,
        huttenlocher_expected_size: huttenlocher,
        carter_expected_entropy: carter,
        h_w,
        h_wtheta,
        pie: 100.0 * h_wtheta / h_w,
    })
}
