//! Functional load of a single merger on a tiny three-phoneme corpus.
//!
//! Counts bigrams, merges the b/c opposition, and reports the relative
//! entropy-rate drop.

use std::sync::Arc;

use fload::{entropy, functional_load, parse_contrast, parse_schema, parse_token_stream};
use fload::corpus::CorpusSource;

fn main() -> fload::Result<()> {
    let schema = Arc::new(parse_schema("atomic phn = a b c")?);
    let corpus = parse_token_stream(
        "a b a c c a a c c a a b b a c a b a b",
        schema.clone(),
        "phn",
    )?;
    let source = CorpusSource::Stream(corpus);

    let table = source.table(2)?;
    println!("bigram counts:");
    for (gram, count) in table.iter() {
        println!("  {}  {count}", gram.join(" "));
    }
    let h = entropy(&table)?;
    println!("raw bigram entropy {:.4} bits, rate {:.4} bits/object", h.raw, h.rate);

    let spec = parse_contrast("partition phn : {b c}", schema, "phn")?;
    let report = functional_load(&source, &spec, 2)?;
    println!(
        "merging b and c: {:.4} -> {:.4} bits/object, functional load {:.4}",
        report.h_before, report.h_after, report.fl
    );
    Ok(())
}
