//! Pairwise functional load over a phoneme subset at two orders, plus the
//! Pearson consistency score between the two rankings.

use std::sync::Arc;

use fload::{consistency_alpha, fl_matrix, parse_schema, parse_token_stream, rank_entry};
use fload::corpus::CorpusSource;

fn main() -> fload::Result<()> {
    let schema = Arc::new(parse_schema("atomic phn = a b c d")?);
    let corpus = parse_token_stream(
        "a b a c d a b c a d\n\
         b a d c a a b d c a\n\
         c a b a d d a c b a",
        schema,
        "phn",
    )?;
    let source = CorpusSource::Stream(corpus);
    let phi0: Vec<String> = ["a", "b", "c", "d"].iter().map(|s| s.to_string()).collect();

    let m1 = fl_matrix(&source, "phn", &phi0, 1)?;
    let m2 = fl_matrix(&source, "phn", &phi0, 2)?;

    println!("pair        n=1 fl    n=2 fl    n=2 rank");
    for ((x, y), fl2) in &m2.entries {
        let fl1 = m1.get(x, y).unwrap();
        let rank = rank_entry(&m2, x, y)?;
        println!("({x}, {y})    {fl1:.4}    {fl2:.4}    {rank:.2}");
    }

    let xs: Vec<f64> = m1.entries.iter().map(|(_, v)| *v).collect();
    let ys: Vec<f64> = m2.entries.iter().map(|(_, v)| *v).collect();
    let alpha = consistency_alpha(&xs, &ys)?;
    println!("consistency alpha between orders: {alpha:.4}");
    println!("rule-of-thumb consistent (> 0.9): {}", alpha > 0.9);
    Ok(())
}
