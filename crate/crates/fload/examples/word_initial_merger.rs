//! A positional merger: two phonemes merge only word-initially, via the
//! outermost-initial guard on nested syllable strings.

use std::sync::Arc;

use fload::{parse_contrast, parse_schema};
use fload::schema::parse_single_value;

fn main() -> fload::Result<()> {
    let schema = Arc::new(parse_schema(
        "atomic phone = n l ih ae m\n\
         atomic stress = primary unstressed\n\
         composite syl = phones:string<phone> str:stress\n\
         composite word = syls:string<syl>",
    )?);
    let spec = parse_contrast(
        "partition phone : {n l} when outermost-initial",
        schema.clone(),
        "word",
    )?;

    let word = parse_single_value(
        &schema,
        "word",
        "((n ih n ; primary) (l ae n ; unstressed))",
        1,
    )?;
    println!("before: {}", word.canonical());
    println!("after:  {}", spec.apply(&word)?.canonical());
    println!("(only the word-initial segment is affected)");
    Ok(())
}
