//! Two first steps `s1/t^{p^l}` with different `l` give different
//! extensions; shifting by `w^p - w` does not.

use asw_tower::algebra::FieldCtx;
use asw_tower::valued_field::{as_equivalent, Equivalence};
use asw_tower::weave::nonuniqueness_demo;

fn show(e: &Equivalence) -> String {
    match e {
        Equivalence::NonEquivalent { certificates } => certificates
            .iter()
            .map(|(c, class, o)| format!("c={c}: {class:?} (v = {})", o.v_alpha))
            .collect::<Vec<_>>()
            .join(", "),
        Equivalence::Equivalent { c, witness } => format!("equivalent with c={c}, w = {witness}"),
        Equivalence::Undetermined => "undetermined".into(),
    }
}

fn main() -> asw_tower::Result<()> {
    for p in [2u64, 3] {
        let ctx = FieldCtx::new(p, 1)?;
        let s1 = ctx.s(1);
        for (l, l2) in [(4, 5), (5, 7)] {
            println!("p={p} l={l} l'={l2}: {}", show(&nonuniqueness_demo(&ctx, &s1, l, l2)?));
        }
        let a = s1.div(&ctx.t_pow((p as i64).pow(4)))?;
        let w = s1.div(&ctx.t())?;
        let b = a.add(&w.frobenius_power(1)?).sub(&w);
        println!("p={p} a vs a + P(s1/t): {}", show(&as_equivalent(&ctx, &a, &b)?));
    }
    Ok(())
}
