//! Ramification class of `x^p - x = alpha` for a few inputs, with the
//! optimal representative the classifier actually judged.
//!
//! cargo run --example classify -- 3 "s1/t^3 + 1/t"

use asw_tower::algebra::FieldCtx;
use asw_tower::expr::parse_field;
use asw_tower::valued_field::classify;

fn main() -> asw_tower::Result<()> {
    let args: Vec<String> = std::env::args().skip(1).collect();
    let (p, inputs): (u64, Vec<String>) = match args.split_first() {
        Some((p, rest)) if !rest.is_empty() => (p.parse().expect("prime"), rest.to_vec()),
        _ => (2, ["1/t", "s1/t^2", "s1", "t", "s1^2/t^2", "s1^2/t^4 + 1/t^3"].map(String::from).to_vec()),
    };
    let ctx = FieldCtx::new(p, 2)?;
    println!("{:<22} {:<12} {:<18} {:>6}", "alpha", "class", "optimal", "v");
    for src in &inputs {
        let alpha = parse_field(ctx, src)?;
        let (opt, class) = classify(&ctx, &alpha)?;
        println!(
            "{:<22} {:<12} {:<18} {:>6}",
            src,
            format!("{class:?}"),
            opt.alpha_opt.to_string(),
            opt.v_alpha.to_string()
        );
    }
    Ok(())
}
