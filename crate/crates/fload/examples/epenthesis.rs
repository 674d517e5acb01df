//! An insertion contrast: epenthetic [t] between [n] and [s] makes word
//! pairs like "cans"/"cants" indistinguishable.

use std::sync::Arc;

use fload::{parse_contrast, parse_schema};
use fload::schema::parse_single_value;

fn main() -> fload::Result<()> {
    let schema = Arc::new(parse_schema(
        "atomic phone = k ae n s t\n\
         atomic stress = primary unstressed\n\
         composite syl = phones:string<phone> str:stress",
    )?);
    let spec = parse_contrast("insert t in syl.phones after n before s", schema.clone(), "syl")?;

    let cans = parse_single_value(&schema, "syl", "(k ae n s ; primary)", 1)?;
    let cants = parse_single_value(&schema, "syl", "(k ae n t s ; primary)", 1)?;
    let a = spec.apply(&cans)?;
    let b = spec.apply(&cants)?;
    println!("cans  -> {}", a.canonical());
    println!("cants -> {}", b.canonical());
    println!("same equivalence class: {}", a == b);
    Ok(())
}
