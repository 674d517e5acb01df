//! Cohort statistics of a weighted lexicon under a merger: average and
//! expected cohort sizes, residual entropy, and the percentage of
//! information extracted.

use std::sync::Arc;

use fload::{cohort_analysis, parse_contrast, parse_schema};
use fload::corpus::parse_weighted_lexicon;

fn main() -> fload::Result<()> {
    let schema = Arc::new(parse_schema(
        "atomic phn = b p k ae t\n\
         atomic str = primary\n\
         composite syl = phones:string<phn> stress:str\n\
         composite wrd = syls:string<syl>",
    )?);
    let lexicon = parse_weighted_lexicon(
        "4\t((b ae t ; primary))\n\
         2\t((p ae t ; primary))\n\
         2\t((k ae t ; primary))",
        schema.clone(),
        "wrd",
    )?;
    let spec = parse_contrast("partition phn : {b p}", schema, "wrd")?;
    let r = cohort_analysis(&lexicon, &spec)?;

    println!("cohorts after merging b/p: {}", r.cohort_count);
    println!("average cohort size:       {:.4}", r.shipman_avg_size);
    println!("expected cohort size:      {:.4}", r.huttenlocher_expected_size);
    println!("expected cohort entropy:   {:.4} bits", r.carter_expected_entropy);
    println!("H(W) = {:.4}, H(W_theta) = {:.4}", r.h_w, r.h_wtheta);
    println!("information extracted:     {:.2}%", r.pie);
    Ok(())
}
