//! Arithmetic in a hand-built two-step tower over F_2(s1)(t): Frobenius,
//! the generator sigma, traces, an Albert element and valuations.

use asw_tower::algebra::FieldCtx;
use asw_tower::gene::Letter;
use asw_tower::tower::{Tower, TowerElem, ValuationOracle};

fn main() -> asw_tower::Result<()> {
    let ctx = FieldCtx::new(2, 1)?;
    let mut tower = Tower::new(ctx);
    let mut oracle = ValuationOracle::new(ctx, vec![0]);

    // x1^2 - x1 = 1/t^3: a wild step.
    tower.push_level(tower.base(ctx.t_pow(-3), 0), tower.one(0))?;
    let x1 = tower.x(1, 1);
    // z1 = t^2 x1 satisfies z1^2 - t^2 z1 = t.
    let z1 = x1.scale(&ctx.t_pow(2));
    oracle.push_level(&tower, &z1, &tower.base(ctx.t_pow(2), 0), Letter::W)?;
    println!("v(x1) = {}", oracle.valuation(&tower, &x1));
    println!("v(z1) = {}  (z1 = t^2 x1)", oracle.valuation(&tower, &z1));

    let albert = tower.albert_element(1)?;
    let names = ctx.var_names();
    println!("beta = {}", albert.beta.fmt_with(&names));
    println!("alpha = {}", albert.alpha.fmt_with(&names));
    println!("Tr(beta) = {}", tower.trace_to_k(&albert.beta, 1)?);

    // Second step x2^2 - x2 = alpha + 1/t^5, sigma(x2) = x2 + beta.
    let rhs2 = albert.alpha.add(&tower.base(ctx.t_pow(-5), 1));
    tower.push_level(rhs2, albert.beta.clone())?;
    println!("sigma has order {:?} on L2", tower.sigma_order(2));

    let x2 = tower.x(2, 2);
    let u = tower.mul(&x2, &x1.lift(2)).add(&TowerElem::from_base(ctx.s(1), &ctx, 2));
    println!("u = x1 x2 + s1, Tr_(L2/K)(u) = {}", tower.trace_to_k(&u, 2)?);
    println!("Frobenius of x2 = x2 + rhs: {}", tower.frobenius(&x2)? == x2.add(&tower.rhs(2).lift(2)));
    Ok(())
}
