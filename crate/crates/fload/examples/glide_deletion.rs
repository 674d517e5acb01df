//! A deletion contrast: [y] drops before high vowels, erasing pairs like
//! "nyuw"/"nuw" while leaving other [y] occurrences alone.

use std::sync::Arc;

use fload::{parse_contrast, parse_schema};
use fload::schema::parse_single_value;

fn main() -> fload::Result<()> {
    let schema = Arc::new(parse_schema(
        "atomic phone = n y uw iy ih s ae\n\
         atomic stress = primary unstressed\n\
         composite syl = phones:string<phone> str:stress",
    )?);
    let spec = parse_contrast(
        "delete y in syl.phones when right-in {iy ih uw}",
        schema.clone(),
        "syl",
    )?;

    for text in ["(n y uw s ; primary)", "(n uw s ; primary)", "(y ae s ; primary)"] {
        let syl = parse_single_value(&schema, "syl", text, 1)?;
        println!("{text}  ->  {}", spec.apply(&syl)?.canonical());
    }
    Ok(())
}
