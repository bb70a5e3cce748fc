//! Universal Witt addition polynomials, a concrete sum over `K`, and the
//! split-shift check `(x_1, ..., x_m) + (a, 0, ..., 0)`.

use asw_tower::algebra::FieldCtx;
use asw_tower::expr::parse_field;
use asw_tower::witt::{binary_var_names, split_shift_check, universal_sum_polys, Witt, WittVec};

fn main() -> asw_tower::Result<()> {
    let names = binary_var_names();
    for p in [2u8, 3] {
        println!("p = {p}");
        for (k, s) in universal_sum_polys(p, 3)?.iter().enumerate() {
            let text = s.fmt_with(&names);
            let shown = if text.len() > 100 { format!("{}... ({} terms)", &text[..100], s.len()) } else { text };
            println!("  S{} = {shown}", k + 1);
        }
    }

    let ctx = FieldCtx::new(3, 1)?;
    let w = Witt::new(ctx, 3, 2)?;
    let u = WittVec::new(vec![parse_field(ctx, "s1/t")?, parse_field(ctx, "t")?]);
    let v = WittVec::new(vec![parse_field(ctx, "1/t")?, ctx.zero()]);
    let s = w.add(&u, &v)?;
    println!("(s1/t, t) + (1/t, 0) = ({}, {}) over F_3(s1)(t)", s.comps[0], s.comps[1]);
    let fu = w.asw_operator(&u)?;
    println!("F(u) - u = ({}, {})", fu.comps[0], fu.comps[1]);

    for (p, m) in [(2u8, 3usize), (3, 2)] {
        let rep = split_shift_check(p, m)?;
        println!("split shift p={p} m={m}: ok = {}", rep.ok);
        for (k, h) in rep.h.iter().enumerate() {
            println!("  h{} = {h}", k + 1);
        }
    }
    Ok(())
}
