//! Builds a tower for a gene word, prints the per-level data and verifies it.
//!
//! cargo run --release --example build_weave -- "F:s1,W,F:s1" 2

use asw_tower::gene::{Antecedent, GeneWord};
use asw_tower::weave::{build_weave, verify_weave, z_valuations, BuildOptions};

fn main() -> asw_tower::Result<()> {
    let mut args = std::env::args().skip(1);
    let word = GeneWord::parse(&args.next().unwrap_or_else(|| "F:s1,W,F:s1".into()))?;
    let p: u8 = args.next().map(|s| s.parse().expect("prime")).unwrap_or(2);
    let r = word.alphabet().into_iter().max().unwrap_or(0).max(1);

    let cert = build_weave(&word, p, r, &BuildOptions::default())?;
    println!("word {word} (genome {}), p = {p}, N = {}", word.genome(), cert.big_n);
    let vz = z_valuations(&cert)?;
    for (k, lv) in cert.levels.iter().enumerate() {
        let i = k + 1;
        let ante = match word.antecedent(i)? {
            Antecedent::Index(j) => format!("z_{j}"),
            Antecedent::First(g) => format!("first {g}"),
        };
        println!("  level {i}: l = {:>3}, relation on {ante:<8} v(z) = {}", lv.l, vz[k]);
    }

    let report = verify_weave(&cert);
    for lv in &report.levels {
        println!(
            "  level {}: e = {:?}, f = {:?}, residue of z = {}",
            lv.i,
            lv.value_group_index,
            lv.residue_degree,
            lv.residue_z.as_deref().unwrap_or("-")
        );
    }
    println!("sigma order {:?}; {}", report.sigma_order, if report.pass { "verified" } else { "REJECTED" });
    for f in &report.failures {
        println!("  {f}");
    }
    Ok(())
}
