//! Expected functional load of a single phoneme: the frequency-weighted
//! average of its pairwise loads over a set of plausible mergers.

use std::sync::Arc;

use fload::{parse_schema, parse_token_stream, single_phoneme_fl};
use fload::analysis::parse_similarity;
use fload::corpus::CorpusSource;

fn main() -> fload::Result<()> {
    let schema = Arc::new(parse_schema("atomic phn = a b c")?);
    let corpus = parse_token_stream(
        "a b a c c a a c c a a b b a c a b a b",
        schema,
        "phn",
    )?;
    let source = CorpusSource::Stream(corpus);

    // b and c are each other's plausible mergers; a is close to both
    let model = parse_similarity(
        "similar a : b c\n\
         similar b : c\n\
         similar c : b",
        "phn",
    )?;

    for phoneme in ["a", "b", "c"] {
        let r = single_phoneme_fl(&source, phoneme, &model, 2)?;
        println!("FL({phoneme}) = {:.4}", r.fl);
        for (y, p, fl) in &r.breakdown {
            println!("  merge with {y}: P = {p:.3}, pairwise fl = {fl:.4}");
        }
    }
    Ok(())
}
