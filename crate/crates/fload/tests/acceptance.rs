//! Acceptance gate. Each test is one criterion and prints a PASS line with
//! the measured numbers; the suite as a whole is the release check.
//!
//! Run with:
//!
//! ```text
//! cargo test --test acceptance -- --nocapture
//! ```

mod common;

use std::collections::BTreeMap;
use std::sync::Arc;

use rand::prelude::*;
use rand_chacha::ChaCha8Rng;

use fload::analysis::{consistency_alpha, fl_matrix};
use fload::contrast::{parse_contrast, ContrastSpec, Partition, Rule};
use fload::corpus::{parse_token_stream, parse_weighted_lexicon, CorpusSource, TokenStreamCorpus, WeightedLexicon};
use fload::infotheory::{cohort_analysis, entropy, functional_load};
use fload::schema::{parse_schema, parse_single_value, Schema, Value};

use common::{oracle_fl, syllable_schema, toy_schema, TOY_STREAM};

// ---------------------------------------------------------------------------
// 1. Toy golden example

#[test]
fn criterion_1_toy_golden_example() {
    let schema = toy_schema();
    let corpus = parse_token_stream(TOY_STREAM, schema.clone(), "phn").unwrap();
    let source = CorpusSource::Stream(corpus);

    let table = source.table(2).unwrap();
    let expect = [
        ("a a", 2.0),
        ("a b", 4.0),
        ("a c", 3.0),
        ("b a", 3.0),
        ("b b", 1.0),
        ("c a", 3.0),
        ("c c", 2.0),
    ];
    assert_eq!(table.distinct(), expect.len());
    for (gram, count) in expect {
        let key: Vec<String> = gram.split(' ').map(|s| s.to_string()).collect();
        assert_eq!(table.get(&key), count, "bigram {gram}");
    }
    assert_eq!(table.total(), 18.0);

    let before = entropy(&table).unwrap();
    assert!((before.raw - 2.7108).abs() < 1e-4, "raw {}", before.raw);
    assert!((before.rate - 1.3554).abs() < 1e-4, "rate {}", before.rate);

    let spec = parse_contrast("partition phn : {b c}", schema, "phn").unwrap();
    let mapped = spec.apply_to_corpus(&source).unwrap();
    let CorpusSource::Stream(mapped_stream) = &mapped else {
        panic!("stream in, stream out")
    };
    let merged: String = mapped_stream.utterances[0]
        .iter()
        .map(|v| {
            let t = v.canonical();
            if t == "b+c" { "d".to_string() } else { t }
        })
        .collect();
    assert_eq!(merged, "adaddaaddaaddadadad");

    let merged_table = mapped.table(2).unwrap();
    let merged_expect = [("a a", 2.0), ("a b+c", 7.0), ("b+c a", 6.0), ("b+c b+c", 3.0)];
    assert_eq!(merged_table.distinct(), merged_expect.len());
    for (gram, count) in merged_expect {
        let key: Vec<String> = gram.split(' ').map(|s| s.to_string()).collect();
        assert_eq!(merged_table.get(&key), count, "merged bigram {gram}");
    }

    let after = entropy(&merged_table).unwrap();
    assert!((after.raw - 1.8413).abs() < 1e-4, "merged raw {}", after.raw);

    let report = functional_load(&source, &spec, 2).unwrap();
    assert!((report.fl - 0.3208).abs() < 1e-3, "fl {}", report.fl);
    let brute = oracle_fl(&source, &spec, 2);
    assert!((report.fl - brute).abs() < 1e-12);

    println!(
        "PASS criterion 1: toy golden example (raw {:.4}, merged raw {:.4}, fl {:.4})",
        before.raw, after.raw, report.fl
    );
}

// ---------------------------------------------------------------------------
// Random-instance helpers

const SEGS: [&str; 6] = ["s0", "s1", "s2", "s3", "s4", "s5"];

fn seg_schema(alphabet: usize) -> Arc<Schema> {
    Arc::new(
        parse_schema(&format!(
            "atomic seg = {}\ncomposite wordform = segs:string<seg>",
            SEGS[..alphabet].join(" ")
        ))
        .unwrap(),
    )
}

/// A uniformly random partition of a subset of the alphabet into classes of
/// size >= 2 (possibly just one class), as a relabel spec.
fn random_partition(rng: &mut ChaCha8Rng, schema: &Arc<Schema>, alphabet: usize) -> Partition {
    loop {
        let mut toks: Vec<String> = SEGS[..alphabet].iter().map(|s| s.to_string()).collect();
        toks.shuffle(rng);
        let picked = rng.gen_range(2..=alphabet);
        toks.truncate(picked);
        let n_classes = rng.gen_range(1..=picked / 2);
        let mut classes: Vec<std::collections::BTreeSet<String>> =
            vec![Default::default(); n_classes];
        for (i, tok) in toks.into_iter().enumerate() {
            classes[i % n_classes].insert(tok);
        }
        classes.retain(|c| c.len() >= 2);
        if classes.is_empty() {
            continue;
        }
        return Partition::new(schema, "seg", classes).unwrap();
    }
}

fn random_stream(
    rng: &mut ChaCha8Rng,
    schema: Arc<Schema>,
    alphabet: usize,
    max_objects: usize,
) -> TokenStreamCorpus {
    loop {
        let n_objects = rng.gen_range(4..=max_objects);
        let mut utterances = Vec::new();
        let mut current = Vec::new();
        for _ in 0..n_objects {
            let tok = SEGS[rng.gen_range(0..alphabet)];
            current.push(Value::Atomic(tok.to_string()));
            if rng.gen_bool(0.15) && !current.is_empty() {
                utterances.push(std::mem::take(&mut current));
            }
        }
        if !current.is_empty() {
            utterances.push(current);
        }
        let corpus = TokenStreamCorpus::new(schema.clone(), "seg", utterances).unwrap();
        // at least two distinct unigrams, so no order is degenerate
        if corpus.count_ngrams(1).unwrap().distinct() >= 2 {
            return corpus;
        }
    }
}

fn random_lexicon(rng: &mut ChaCha8Rng, schema: Arc<Schema>, alphabet: usize) -> WeightedLexicon {
    loop {
        let mut lex = WeightedLexicon::new(schema.clone(), "wordform").unwrap();
        let entries = rng.gen_range(2..=50);
        for _ in 0..entries {
            let len = rng.gen_range(1..=4);
            let segs: Vec<Value> = (0..len)
                .map(|_| Value::Atomic(SEGS[rng.gen_range(0..alphabet)].to_string()))
                .collect();
            let value = Value::Composite(vec![Value::Str(segs)]);
            let weight = rng.gen_range(1..=100) as f64 / rng.gen_range(1..=4) as f64;
            lex.add_weight(value, weight).unwrap();
        }
        if lex.len() >= 2 {
            return lex;
        }
    }
}

// ---------------------------------------------------------------------------
// 2. Carter identity

#[test]
fn criterion_2_carter_identity() {
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    let schema = seg_schema(6);
    let mut worst: f64 = 0.0;
    for _ in 0..100 {
        let lex = random_lexicon(&mut rng, schema.clone(), 6);
        let partition = random_partition(&mut rng, &schema, 6);
        let spec = ContrastSpec::new(
            schema.clone(),
            "wordform",
            vec![Rule::Relabel {
                partition,
                guard: fload::contrast::Guard::unconditional(),
            }],
        )
        .unwrap();
        let r = cohort_analysis(&lex, &spec).unwrap();
        let gap = (r.carter_expected_entropy - (r.h_w - r.h_wtheta)).abs();
        worst = worst.max(gap);
        assert!(gap < 1e-9, "identity gap {gap}");
    }
    println!("PASS criterion 2: Carter identity on 100 random lexicons (worst gap {worst:.3e})");
}

// ---------------------------------------------------------------------------
// 3. Oracle equivalence

#[test]
fn criterion_3_oracle_equivalence() {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let mut worst: f64 = 0.0;
    for trial in 0..200 {
        let alphabet = rng.gen_range(3..=6);
        let schema = seg_schema(alphabet);
        let n = rng.gen_range(1..=3usize);
        let corpus = random_stream(&mut rng, schema.clone(), alphabet, 30);
        let source = CorpusSource::Stream(corpus);
        let partition = random_partition(&mut rng, &schema, alphabet);
        let spec = ContrastSpec::new(
            schema.clone(),
            "seg",
            vec![Rule::Relabel {
                partition,
                guard: fload::contrast::Guard::unconditional(),
            }],
        )
        .unwrap();
        match functional_load(&source, &spec, n) {
            Ok(report) => {
                let brute = oracle_fl(&source, &spec, n);
                let gap = (report.fl - brute).abs();
                worst = worst.max(gap);
                assert!(gap < 1e-12, "trial {trial}: library {} vs oracle {brute}", report.fl);
                assert!((0.0..=1.0).contains(&report.fl), "trial {trial}: fl {}", report.fl);
            }
            Err(fload::Error::Degenerate(_)) => {
                // short corpus at high n can have a single n-gram; not an
                // estimator discrepancy
            }
            Err(e) => panic!("trial {trial}: {e}"),
        }
    }

    // guarded structured rules against the oracle as well
    let schema = syllable_schema();
    let rules = [
        "partition phone : {ae eh ih} when str=unstressed",
        "insert t in syl.phones after n before s",
        "delete y in syl.phones when right-in {iy ih uw}",
        "partition phone : {p b} when string-initial",
    ];
    for rule in rules {
        let spec = parse_contrast(rule, schema.clone(), "syl").unwrap();
        let corpus = parse_token_stream(
            "(k ae n s ; primary) (y uw ; unstressed) (p ih t ; unstressed)\n\
             (b ae n ; primary) (n ih y iy ; unstressed)",
            schema.clone(),
            "syl",
        )
        .unwrap();
        let source = CorpusSource::Stream(corpus);
        for n in 1..=2 {
            let report = functional_load(&source, &spec, n).unwrap();
            let brute = oracle_fl(&source, &spec, n);
            assert!((report.fl - brute).abs() < 1e-12, "rule `{rule}` n={n}");
        }
    }
    println!("PASS criterion 3: oracle equivalence on 200 random + 4 structured specs (worst gap {worst:.3e})");
}

// ---------------------------------------------------------------------------
// 4. Bounds and monotonicity

#[test]
fn criterion_4_bounds_and_monotonicity() {
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    let schema = seg_schema(6);

    for trial in 0..100 {
        let corpus = random_stream(&mut rng, schema.clone(), 6, 40);
        let source = CorpusSource::Stream(corpus);
        let n = rng.gen_range(1..=2usize);

        // finer partition, then coarsen it by merging two classes
        let finer = random_partition(&mut rng, &schema, 6);
        let mut classes: Vec<_> = finer.classes().to_vec();
        if classes.len() >= 2 {
            let merged = classes.remove(0);
            classes[0].extend(merged);
        } else {
            let extra: std::collections::BTreeSet<String> = SEGS
                .iter()
                .map(|s| s.to_string())
                .filter(|s| !classes[0].contains(s))
                .take(2)
                .collect();
            if extra.len() >= 2 {
                classes.push(extra);
            }
        }
        let coarser = Partition::new(&schema, "seg", classes).unwrap();
        assert!(finer.refines(&coarser));

        let as_spec = |p: Partition| {
            ContrastSpec::new(
                schema.clone(),
                "seg",
                vec![Rule::Relabel {
                    partition: p,
                    guard: fload::contrast::Guard::unconditional(),
                }],
            )
            .unwrap()
        };
        let fl_fine = match functional_load(&source, &as_spec(finer), n) {
            Ok(r) => r.fl,
            Err(fload::Error::Degenerate(_)) => continue,
            Err(e) => panic!("trial {trial}: {e}"),
        };
        let fl_coarse = functional_load(&source, &as_spec(coarser), n).unwrap().fl;
        assert!((0.0..=1.0).contains(&fl_fine));
        assert!((0.0..=1.0).contains(&fl_coarse));
        assert!(
            fl_coarse >= fl_fine - 1e-12,
            "trial {trial}: coarser {fl_coarse} < finer {fl_fine}"
        );
    }

    let corpus = parse_token_stream(TOY_STREAM, toy_schema(), "phn").unwrap();
    let source = CorpusSource::Stream(corpus);
    let identity = ContrastSpec::identity(toy_schema(), "phn").unwrap();
    assert_eq!(functional_load(&source, &identity, 2).unwrap().fl, 0.0);
    let full = ContrastSpec::new(
        toy_schema(),
        "phn",
        vec![Rule::Relabel {
            partition: Partition::full_merge(&toy_schema(), "phn").unwrap(),
            guard: fload::contrast::Guard::unconditional(),
        }],
    )
    .unwrap();
    assert_eq!(functional_load(&source, &full, 2).unwrap().fl, 1.0);

    println!("PASS criterion 4: fl bounds, refinement monotonicity, identity = 0, full merge = 1");
}

// ---------------------------------------------------------------------------
// 5. Estimator convergence on a known Markov chain

const STATES: [&str; 5] = ["u0", "u1", "u2", "u3", "u4"];

fn chain_p(i: usize, j: usize) -> f64 {
    if j == (i + 1) % 5 {
        0.4
    } else if j == (i + 2) % 5 {
        0.3
    } else {
        0.1
    }
}

/// Exact n-gram distribution of the chain at stationarity (uniform, since
/// the transition matrix is doubly stochastic).
fn analytic_ngram_dist(n: usize) -> BTreeMap<Vec<usize>, f64> {
    let mut dist = BTreeMap::new();
    let mut stack: Vec<Vec<usize>> = (0..5).map(|s| vec![s]).collect();
    while let Some(seq) = stack.pop() {
        if seq.len() == n {
            let mut p = 0.2;
            for w in seq.windows(2) {
                p *= chain_p(w[0], w[1]);
            }
            dist.insert(seq, p);
            continue;
        }
        for next in 0..5 {
            let mut longer = seq.clone();
            longer.push(next);
            stack.push(longer);
        }
    }
    dist
}

fn analytic_fl(n: usize, x: usize, y: usize) -> f64 {
    let dist = analytic_ngram_dist(n);
    let h = |probs: &[f64]| -> f64 {
        probs
            .iter()
            .filter(|p| **p > 0.0)
            .map(|p| -p * p.log2())
            .sum::<f64>()
    };
    let before: Vec<f64> = dist.values().copied().collect();
    let mut merged: BTreeMap<Vec<usize>, f64> = BTreeMap::new();
    for (seq, p) in &dist {
        let image: Vec<usize> = seq.iter().map(|&s| if s == y { x } else { s }).collect();
        *merged.entry(image).or_insert(0.0) += p;
    }
    let after: Vec<f64> = merged.values().copied().collect();
    (h(&before) - h(&after)) / h(&before)
}

fn sample_chain(rng: &mut ChaCha8Rng, len: usize) -> TokenStreamCorpus {
    let schema = Arc::new(parse_schema(&format!("atomic u = {}", STATES.join(" "))).unwrap());
    let mut state = rng.gen_range(0..5);
    let mut symbols = Vec::with_capacity(len);
    for _ in 0..len {
        symbols.push(Value::Atomic(STATES[state].to_string()));
        let roll: f64 = rng.gen();
        let mut acc = 0.0;
        let mut next = 4;
        for j in 0..5 {
            acc += chain_p(state, j);
            if roll < acc {
                next = j;
                break;
            }
        }
        state = next;
    }
    TokenStreamCorpus::new(schema, "u", vec![symbols]).unwrap()
}

#[test]
fn criterion_5_markov_estimator_convergence() {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let spec_text = "partition u : {u0 u1}";
    for n in 1..=2usize {
        let target = analytic_fl(n, 0, 1);
        let mut last_err = f64::NAN;
        for &len in &[1_000usize, 10_000, 100_000] {
            let corpus = sample_chain(&mut rng, len);
            let spec = parse_contrast(spec_text, corpus.schema.clone(), "u").unwrap();
            let est = functional_load(&CorpusSource::Stream(corpus), &spec, n)
                .unwrap()
                .fl;
            last_err = (est - target).abs();
            println!(
                "  n={n} len={len:>6}: estimate {est:.5}, analytic {target:.5}, error {last_err:.5}"
            );
        }
        assert!(
            last_err < 0.01,
            "n={n}: error {last_err} at 10^5 symbols exceeds 0.01"
        );
    }
    println!("PASS criterion 5: estimator converges to analytic Markov-chain FL (n=1,2)");
}

// ---------------------------------------------------------------------------
// 6. Consistency alpha diagnostics

#[test]
fn criterion_6_alpha_diagnostics() {
    let xs = [0.12, 0.5, 0.03, 0.9, 0.31, 0.44];
    let neg: Vec<f64> = xs.iter().map(|x| -x).collect();
    let ys = [0.2, 0.41, 0.1, 0.8, 0.25, 0.5];

    assert_eq!(consistency_alpha(&xs, &xs).unwrap(), 1.0);
    assert!((consistency_alpha(&xs, &neg).unwrap() + 1.0).abs() < 1e-12);

    let base = consistency_alpha(&xs, &ys).unwrap();
    let rescaled: Vec<f64> = xs.iter().map(|x| 3.25 * x + 0.7).collect();
    let affine = consistency_alpha(&rescaled, &ys).unwrap();
    assert!((base - affine).abs() < 1e-12, "affine shift {}", (base - affine).abs());

    // cross-order consistency on the Markov corpus
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    let corpus = sample_chain(&mut rng, 100_000);
    let source = CorpusSource::Stream(corpus);
    let phi0: Vec<String> = STATES.iter().map(|s| s.to_string()).collect();
    let m1 = fl_matrix(&source, "u", &phi0, 1).unwrap();
    let m2 = fl_matrix(&source, "u", &phi0, 2).unwrap();
    let xs: Vec<f64> = m1.entries.iter().map(|(_, v)| *v).collect();
    let ys: Vec<f64> = m2.entries.iter().map(|(_, v)| *v).collect();
    let alpha = consistency_alpha(&xs, &ys).unwrap();
    assert!(alpha.is_finite() && (-1.0..=1.0).contains(&alpha));
    let verdict = if alpha > 0.9 {
        "consistent by the 0.9 rule of thumb"
    } else {
        "below the 0.9 rule of thumb"
    };
    println!("PASS criterion 6: alpha identities hold; n=1 vs n=2 alpha = {alpha:.4} ({verdict})");
}

// ---------------------------------------------------------------------------
// 7. Rule contrasts

#[test]
fn criterion_7_rule_contrasts() {
    let schema = syllable_schema();

    // vowel reduction: only unstressed vowels collapse
    let reduce = parse_contrast(
        "partition phone : {ae eh ih iy uw} when str=unstressed",
        schema.clone(),
        "syl",
    )
    .unwrap();
    let stressed = parse_single_value(&schema, "syl", "(b ae t ; primary)", 1).unwrap();
    let unstressed = parse_single_value(&schema, "syl", "(b ae t ; unstressed)", 1).unwrap();
    assert_eq!(reduce.apply(&stressed).unwrap(), stressed);
    assert_eq!(
        reduce.apply(&unstressed).unwrap().canonical(),
        "(b ae+eh+ih+iy+uw t ; unstressed)"
    );

    // epenthesis: the minimal pair falls into one class
    let epenthesis =
        parse_contrast("insert t in syl.phones after n before s", schema.clone(), "syl").unwrap();
    let cans = parse_single_value(&schema, "syl", "(k ae n s ; primary)", 1).unwrap();
    let cants = parse_single_value(&schema, "syl", "(k ae n t s ; primary)", 1).unwrap();
    assert_eq!(
        epenthesis.apply(&cans).unwrap(),
        epenthesis.apply(&cants).unwrap()
    );

    // word-initial-only merger
    let initial = parse_contrast(
        "partition phone : {n m} when outermost-initial",
        schema.clone(),
        "word",
    )
    .unwrap();
    let word = parse_single_value(
        &schema,
        "word",
        "((n ih n ; primary) (m ae n ; unstressed))",
        1,
    )
    .unwrap();
    assert_eq!(
        initial.apply(&word).unwrap().canonical(),
        "((m+n ih n ; primary) (m ae n ; unstressed))"
    );

    // [j]-deletion before high vowels, matched occurrences only
    let jdrop =
        parse_contrast("delete y in syl.phones when right-in {iy ih uw}", schema.clone(), "syl")
            .unwrap();
    let v = parse_single_value(&schema, "syl", "(n y uw s y ae ; primary)", 1).unwrap();
    assert_eq!(jdrop.apply(&v).unwrap().canonical(), "(n uw s y ae ; primary)");

    println!("PASS criterion 7: vowel reduction, epenthesis, initial-only merger, y-deletion");
}

// ---------------------------------------------------------------------------
// 8. Cohort fixture

#[test]
fn criterion_8_cohort_fixture() {
    let schema = Arc::new(
        parse_schema(
            "atomic phn = b p k ae t\n\
             atomic str = primary\n\
             composite syl = phones:string<phn> stress:str\n\
             composite wrd = syls:string<syl>\n",
        )
        .unwrap(),
    );
    let lex = parse_weighted_lexicon(
        "4\t((b ae t ; primary))\n2\t((p ae t ; primary))\n2\t((k ae t ; primary))",
        schema.clone(),
        "wrd",
    )
    .unwrap();
    let spec = parse_contrast("partition phn : {b p}", schema, "wrd").unwrap();
    let r = cohort_analysis(&lex, &spec).unwrap();
    assert_eq!(r.shipman_avg_size, 1.5);
    assert!((r.huttenlocher_expected_size - 1.75).abs() < 1e-12);
    assert!((r.carter_expected_entropy - 0.6887).abs() < 1e-4);
    assert!((r.pie - 54.09).abs() < 0.01);
    println!(
        "PASS criterion 8: cohort fixture (shipman {}, huttenlocher {}, carter {:.4}, pie {:.2})",
        r.shipman_avg_size, r.huttenlocher_expected_size, r.carter_expected_entropy, r.pie
    );
}

// ---------------------------------------------------------------------------
// 9. CLI determinism (exercised in depth in tests/cli.rs)

#[test]
fn criterion_9_cli_determinism() {
    use std::process::Command;
    let bin = env!("CARGO_BIN_EXE_fload");
    let dir = tempfile::tempdir().unwrap();
    let schema = dir.path().join("toy.schema");
    let corpus = dir.path().join("toy.corpus");
    let contrast = dir.path().join("merge.contrast");
    std::fs::write(&schema, "atomic phn = a b c\n").unwrap();
    std::fs::write(&corpus, format!("{TOY_STREAM}\n")).unwrap();
    std::fs::write(&contrast, "partition phn : {b c}\n").unwrap();

    let run = |format: &str| {
        let out = Command::new(bin)
            .args([
                "fl",
                "--schema",
                schema.to_str().unwrap(),
                "--corpus",
                corpus.to_str().unwrap(),
                "--type",
                "phn",
                "--contrast",
                contrast.to_str().unwrap(),
                "-n",
                "2",
                "--output",
                format,
            ])
            .output()
            .unwrap();
        assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
        out.stdout
    };

    let tsv1 = run("tsv");
    let tsv2 = run("tsv");
    assert_eq!(tsv1, tsv2, "TSV output differs between runs");
    let json1 = run("json");
    let json2 = run("json");
    assert_eq!(json1, json2, "JSON output differs between runs");

    // numeric parity between the two formats
    let tsv_text = String::from_utf8(tsv1).unwrap();
    let row: Vec<&str> = tsv_text.lines().nth(1).unwrap().split('\t').collect();
    let tsv_fl: f64 = row[4].parse().unwrap();
    let doc: serde_json::Value = serde_json::from_slice(&json1).unwrap();
    let json_fl = doc["results"][0]["fl"].as_f64().unwrap();
    assert_eq!(tsv_fl, json_fl, "TSV and JSON disagree on fl");

    // exit codes: 1 for a bad input, 2 for a degenerate corpus
    let bad = dir.path().join("bad.corpus");
    std::fs::write(&bad, "a b q\n").unwrap();
    let status = Command::new(bin)
        .args([
            "fl",
            "--schema",
            schema.to_str().unwrap(),
            "--corpus",
            bad.to_str().unwrap(),
            "--type",
            "phn",
            "--contrast",
            contrast.to_str().unwrap(),
        ])
        .output()
        .unwrap();
    assert_eq!(status.status.code(), Some(1));

    let flat = dir.path().join("flat.corpus");
    std::fs::write(&flat, "a a a a a\n").unwrap();
    let status = Command::new(bin)
        .args([
            "fl",
            "--schema",
            schema.to_str().unwrap(),
            "--corpus",
            flat.to_str().unwrap(),
            "--type",
            "phn",
            "--contrast",
            contrast.to_str().unwrap(),
        ])
        .output()
        .unwrap();
    assert_eq!(status.status.code(), Some(2));

    println!("PASS criterion 9: CLI byte-identical reruns, TSV/JSON parity, exit codes 0/1/2");
}
