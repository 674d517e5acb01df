//! A guarded contrast: unstressed vowels collapse to a single class while
//! stressed syllables keep their full vowel inventory.

use std::sync::Arc;

use fload::{functional_load, parse_contrast, parse_schema, parse_token_stream};
use fload::corpus::CorpusSource;
use fload::schema::parse_single_value;

fn main() -> fload::Result<()> {
    let schema = Arc::new(parse_schema(
        "atomic phone = p b t d k s n m ae eh ih iy uw\n\
         atomic stress = primary unstressed\n\
         composite syl = phones:string<phone> str:stress",
    )?);

    let spec = parse_contrast(
        "partition phone : {ae eh ih iy uw} when str=unstressed",
        schema.clone(),
        "syl",
    )?;

    for text in ["(b ae t ; primary)", "(b ae t ; unstressed)"] {
        let syl = parse_single_value(&schema, "syl", text, 1)?;
        println!("{text}  ->  {}", spec.apply(&syl)?.canonical());
    }

    let corpus = parse_token_stream(
        "(p ih t ; primary) (b ae n ; unstressed) (t iy ; unstressed)\n\
         (s eh t ; primary) (b ih n ; unstressed) (m ih t ; primary)\n\
         (b uw n ; unstressed) (t ae ; unstressed) (p ih t ; primary)",
        schema,
        "syl",
    )?;
    let report = functional_load(&CorpusSource::Stream(corpus), &spec, 1)?;
    println!("functional load of reduction on this corpus: {:.4}", report.fl);
    Ok(())
}
