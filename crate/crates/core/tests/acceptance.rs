//! Acceptance criteria 1-10, one PASS/FAIL line each. Runs without the
//! libtest harness so the lines always reach the test log.

mod common;

use std::panic::{catch_unwind, AssertUnwindSafe};
use std::time::{Duration, Instant};

use asw_tower::algebra::FieldElem;
use asw_tower::expr::parse_field;
use asw_tower::gene::{GeneWord, Letter};
use asw_tower::tower::TowerElem;
use asw_tower::valued_field::{as_equivalent, classify, Equivalence, RamClass, Valuation};
use asw_tower::weave::faults::Fault;
use asw_tower::weave::{build_weave, oracle_for, verify_weave, z_valuations, BuildOptions, WeaveCertificate};
use asw_tower::witt::{split_shift_check, universal_sum_polys, IntPoly, Integers, Witt, WittVec, BINARY_VARS};
use num_bigint::BigInt;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use common::{char_poly_as, k, newton_root_valuation, random_field};

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

macro_rules! ensure {
    ($cond:expr, $($fmt:tt)+) => {
        if !$cond {
            return Err(format!($($fmt)+));
        }
    };
}

fn build(word: &str, p: u8, r: usize, big_n: Option<u32>) -> Result<WeaveCertificate, String> {
    let w = GeneWord::parse(word).map_err(|e| e.to_string())?;
    build_weave(&w, p, r, &BuildOptions { big_n, ..Default::default() }).map_err(|e| format!("{word}: {e}"))
}

fn denominator(v: Valuation) -> Option<i64> {
    v.finite().map(|q| *q.denom())
}

fn c1_sweep() -> Outcome {
    let mut words = vec![];
    let letters = ["W", "F:s1", "F:s2"];
    for a in letters {
        words.push(a.to_string());
    }
    for a in letters {
        for b in letters {
            words.push(format!("{a},{b}"));
        }
    }
    ensure!(words.len() == 12, "expected 12 words, got {}", words.len());
    let mut slowest = Duration::ZERO;
    for w in &words {
        let start = Instant::now();
        let cert = build(w, 2, 2, None)?;
        let rep = verify_weave(&cert);
        let el = start.elapsed();
        slowest = slowest.max(el);
        ensure!(rep.pass, "{w}: {:?}", rep.failures);
        ensure!(rep.sigma_order == Some(1 << cert.levels.len()), "{w}: sigma order {:?}", rep.sigma_order);
        ensure!(el < Duration::from_secs(60), "{w}: took {el:?}");
    }
    Ok(format!("12 words verified, slowest {slowest:.2?}"))
}

/// `zbar_i^{p^{R}}` equals the embedded `s_a`, i.e. `zbar_i = s_a^{1/p^R}`.
fn residue_root_of(cert: &WeaveCertificate, i: usize, a: usize, depth: u32) -> Result<(), String> {
    let (tower, oracle) = oracle_for(cert).map_err(|e| e.to_string())?;
    let ctx = cert.ctx().unwrap();
    let zbar = oracle.residue(&tower, oracle.z(i)).map_err(|e| e.to_string())?;
    let lhs = zbar.frobenius_power(depth).map_err(|e| e.to_string())?;
    let rhs = oracle.embed_residue(&ctx.s(a)).map_err(|e| e.to_string())?;
    ensure!(lhs == rhs, "level {i}: residue {zbar} is not s{a}^(1/{})", (cert.p as u32).pow(depth));
    Ok(())
}

fn c2_theorem_instance() -> Outcome {
    let cert = build("F:s1,F:s2", 2, 2, None)?;
    let rep = verify_weave(&cert);
    ensure!(rep.pass, "{:?}", rep.failures);
    let last = rep.levels.last().unwrap();
    ensure!(last.value_group_index == Some(1), "e = {:?}", last.value_group_index);
    ensure!(last.residue_degree == Some(4), "f = {:?}", last.residue_degree);
    ensure!(rep.sigma_order == Some(4), "sigma order {:?}", rep.sigma_order);
    residue_root_of(&cert, 1, 1, 1)?;
    residue_root_of(&cert, 2, 2, 1)?;
    Ok("[L:K] = [l:k] = 4, l = k(s1^(1/2), s2^(1/2))".into())
}

fn c3_wild_tower() -> Outcome {
    let ww = build("W,W", 2, 1, None)?;
    let rep = verify_weave(&ww);
    ensure!(rep.pass, "WW: {:?}", rep.failures);
    let v = z_valuations(&ww).map_err(|e| e.to_string())?;
    ensure!(denominator(v[1]) == Some(4), "WW: v(z2) = {}", v[1]);
    ensure!(rep.levels[1].value_group_index == Some(4), "WW: e = {:?}", rep.levels[1].value_group_index);
    let start = Instant::now();
    let www = build("W,W,W", 2, 1, None)?;
    let rep = verify_weave(&www);
    let el = start.elapsed();
    ensure!(rep.pass, "WWW: {:?}", rep.failures);
    let v3 = z_valuations(&www).map_err(|e| e.to_string())?;
    ensure!(denominator(v3[2]) == Some(8), "WWW: v(z3) = {}", v3[2]);
    ensure!(el < Duration::from_secs(600), "WWW took {el:?}");
    Ok(format!("v(z2) = {}, v(z3) = {} (WWW in {el:.2?})", v[1], v3[2]))
}

fn c4_mixed_depth3() -> Outcome {
    let cert = build("F:s1,W,F:s1", 2, 1, Some(7))?;
    let rep = verify_weave(&cert);
    ensure!(rep.pass, "{:?}", rep.failures);
    ensure!(cert.big_n == 7, "N = {}", cert.big_n);
    let last = rep.levels.last().unwrap();
    ensure!(last.value_group_index == Some(2), "Gamma index {:?}", last.value_group_index);
    ensure!(last.residue_degree == Some(4), "residue degree {:?}", last.residue_degree);
    ensure!(rep.sigma_order == Some(8), "sigma order {:?}", rep.sigma_order);
    residue_root_of(&cert, 3, 1, 2)?;
    Ok("l = k(s1^(1/4)), Gamma = (1/2)Z, sigma order 8".into())
}

fn c5_classifier() -> Outcome {
    let ctx = k(2, 1);
    let table = [
        ("1/t", RamClass::Wild),
        ("s1/t^2", RamClass::Ferocious),
        ("s1", RamClass::Unramified),
        ("t", RamClass::Split),
        ("s1^2/t^2", RamClass::Wild),
    ];
    for (src, want) in table {
        let a = parse_field(ctx, src).unwrap();
        let (opt, got) = classify(&ctx, &a).map_err(|e| e.to_string())?;
        ensure!(got == want, "{src}: {got:?}, expected {want:?}");
        if src == "s1^2/t^2" {
            let expect = parse_field(ctx, "s1/t").unwrap();
            ensure!(opt.alpha_opt == expect, "{src} reduced to {}", opt.alpha_opt);
        }
    }
    Ok("5/5 classes".into())
}

fn c6_nonuniqueness() -> Outcome {
    let ctx = k(2, 1);
    let a = parse_field(ctx, "s1/t^128").unwrap();
    let b = parse_field(ctx, "s1/t^256").unwrap();
    match as_equivalent(&ctx, &a, &b).map_err(|e| e.to_string())? {
        Equivalence::NonEquivalent { certificates } => {
            ensure!(certificates.len() == 1, "expected one certificate per c, got {}", certificates.len());
            for (c, class, opt) in &certificates {
                ensure!(*class != RamClass::Split, "c = {c}: split");
                ensure!(!opt.v_alpha.is_positive(), "c = {c}: v = {}", opt.v_alpha);
            }
        }
        other => return Err(format!("expected NonEquivalent, got {other:?}")),
    }
    let shift = parse_field(ctx, "s1/t").unwrap();
    let b2 = a.add(&shift.frobenius_power(1).unwrap()).sub(&shift);
    match as_equivalent(&ctx, &a, &b2).map_err(|e| e.to_string())? {
        Equivalence::Equivalent { c, witness } => {
            let lhs = a.sub(&b2.scale(c as i64));
            let rhs = witness.frobenius_power(1).unwrap().sub(&witness);
            ensure!(lhs == rhs, "witness does not satisfy w^p - w = a - c b");
        }
        other => return Err(format!("expected Equivalent, got {other:?}")),
    }
    Ok("distinct l give non-isomorphic steps; P-shift is equivalent".into())
}

/// `w_i = sum_{j <= i} p^{j-1} v_j^{p^{i-j}}`.
fn ghost(p: u8, v: &[IntPoly], i: usize) -> IntPoly {
    let mut acc = IntPoly::zero(BINARY_VARS);
    for j in 1..=i {
        let c = BigInt::from(p).pow(j as u32 - 1);
        acc = acc.add(&v[j - 1].pow((p as u64).pow((i - j) as u32)).scale(&c));
    }
    acc
}

fn c7_witt() -> Outcome {
    let var = |i| IntPoly::var(BINARY_VARS, i);
    let mut n = 0;
    for p in [2u8, 3] {
        for m in 1..=3 {
            let w = Witt::new(Integers { nvars: BINARY_VARS }, p, m).map_err(|e| e.to_string())?;
            let x: Vec<IntPoly> = (0..m).map(|j| var(2 * j)).collect();
            let y: Vec<IntPoly> = (0..m).map(|j| var(2 * j + 1)).collect();
            let (xv, yv) = (WittVec::new(x.clone()), WittVec::new(y.clone()));
            let s = w.add(&xv, &yv).map_err(|e| e.to_string())?;
            let pr = w.mul(&xv, &yv).map_err(|e| e.to_string())?;
            let ng = w.neg(&xv).map_err(|e| e.to_string())?;
            for i in 1..=m {
                let (gx, gy) = (ghost(p, &x, i), ghost(p, &y, i));
                ensure!(ghost(p, &s.comps, i) == gx.add(&gy), "p={p} m={m}: sum ghost {i}");
                ensure!(ghost(p, &pr.comps, i) == gx.mul(&gy), "p={p} m={m}: product ghost {i}");
                ensure!(ghost(p, &ng.comps, i) == gx.neg(), "p={p} m={m}: negation ghost {i}");
                n += 3;
            }
        }
    }
    for p in [2u8, 3] {
        for m in 1..=4 {
            let rep = split_shift_check(p, m).map_err(|e| e.to_string())?;
            for (k, h) in rep.polys.iter().enumerate() {
                ensure!(h.terms().all(|(e, _)| e[0] >= 1), "p={p} m={m}: h{} = {} not in (a)", k + 1, rep.h[k]);
            }
            ensure!(rep.ok, "p={p} m={m}: report not ok");
        }
    }
    let s = universal_sum_polys(2, 2).map_err(|e| e.to_string())?;
    let s1 = var(0).add(&var(1));
    let s2 = var(2).add(&var(3)).sub(&var(0).mul(&var(1)));
    ensure!(s == vec![s1, s2], "S-polynomials differ");
    Ok(format!("{n} ghost identities, split shift m <= 4, S = (x1+y1, x2+y2-x1y1)"))
}

fn c8_albert() -> Outcome {
    let mut levels = 0;
    for (word, p, r) in [("F:s1,W,F:s1", 2u8, 1usize), ("W,W,W", 2, 1), ("F:s1,F:s2", 2, 2), ("W,F:s1", 3, 1)] {
        let cert = build(word, p, r, None)?;
        let (tower, _) = oracle_for(&cert).map_err(|e| e.to_string())?;
        for (k, lv) in cert.levels.iter().enumerate() {
            let i = k;
            if i == 0 {
                continue;
            }
            let (beta, alpha) = (lv.albert.beta.lift(i), lv.albert.alpha.lift(i));
            let mut tr = tower.zero(i);
            let mut cur = beta.clone();
            for _ in 0..(p as u64).pow(i as u32) {
                tr = tr.add(&cur);
                cur = tower.apply_sigma(&cur);
            }
            ensure!(tr == tower.one(i), "{word}: Tr(beta_{i}) != 1");
            let wp = |u: &TowerElem| tower.mul(&tower.pow(u, p as u64), &tower.one(i)).sub(u);
            ensure!(
                tower.apply_sigma(&alpha).sub(&alpha) == wp(&beta),
                "{word}: sigma(alpha_{i}) - alpha_{i} != P(beta_{i})"
            );
            levels += 1;
        }
    }
    let cert = build("W,W", 2, 2, None)?;
    let (tower, _) = oracle_for(&cert).map_err(|e| e.to_string())?;
    let ctx = cert.ctx().unwrap();
    let d = &cert.levels[1].albert;
    for n in 0..=3 {
        for c in [ctx.zero(), ctx.t(), ctx.s(1)] {
            let a = tower.frobenius_power(&d.alpha, n).unwrap().add(&tower.base(c.clone(), 1));
            let b = tower.frobenius_power(&d.beta, n).unwrap();
            let lhs = tower.apply_sigma(&a).sub(&a);
            let rhs = tower.pow(&b, 2).sub(&b);
            ensure!(lhs == rhs, "N={n} c={c}: identity fails");
        }
    }
    Ok(format!("{levels} levels re-verified, Frobenius transport for N <= 3"))
}

fn c9_oracle() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    let mut total = 0;
    for (word, p) in [("W", 2u8), ("F:s1", 2), ("W", 3), ("F:s1", 3)] {
        let cert = build(word, p, 1, None)?;
        let (tower, oracle) = oracle_for(&cert).map_err(|e| e.to_string())?;
        let ctx = cert.ctx().unwrap();
        let rhs = tower.rhs(1).base_part().clone();
        for _ in 0..20 {
            let coeffs: Vec<FieldElem> = (0..p).map(|_| random_field(&mut rng, &ctx, -4, 4)).collect();
            let u = TowerElem::from_coeffs(1, coeffs.clone()).unwrap();
            let want = newton_root_valuation(&ctx, &char_poly_as(&ctx, &rhs, &coeffs));
            let got = oracle.valuation(&tower, &u);
            ensure!(got == want, "{word} p={p}: oracle {got}, Newton polygon {want} for {u:?}");
            total += 1;
        }
    }
    Ok(format!("{total} random elements agree"))
}

fn c10_faults() -> Outcome {
    let cert = build("W,W", 2, 1, None)?;
    ensure!(verify_weave(&cert).pass, "base certificate fails");
    for f in Fault::ALL {
        let bad = f.apply(&cert).map_err(|e| e.to_string())?;
        let rep = verify_weave(&bad);
        ensure!(!rep.pass, "{}: accepted", f.name());
        ensure!(
            rep.failed(f.level(&cert), f.expected()),
            "{}: expected {} to fail, got {:?}",
            f.name(),
            f.expected(),
            rep.failures
        );
    }
    ensure!(cert.word.letters().contains(&Letter::W), "no W");
    Ok(format!("{} mutations rejected at the expected check", Fault::ALL.len()))
}

fn main() {
    let criteria: [Criterion; 10] = [
        ("small-gene sweep", c1_sweep),
        ("ferocious pair F:s1,F:s2", c2_theorem_instance),
        ("totally wild W^2, W^3", c3_wild_tower),
        ("mixed depth 3 F:s1,W,F:s1", c4_mixed_depth3),
        ("classifier table", c5_classifier),
        ("non-uniqueness", c6_nonuniqueness),
        ("Witt suite", c7_witt),
        ("Albert suite", c8_albert),
        ("oracle cross-check", c9_oracle),
        ("fault injection", c10_faults),
    ];
    let mut failed = 0;
    for (n, (name, f)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let out = catch_unwind(AssertUnwindSafe(f)).unwrap_or_else(|e| {
            Err(e
                .downcast_ref::<String>()
                .cloned()
                .or(e.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_default())
        });
        let el = start.elapsed();
        match out {
            Ok(detail) => println!("criterion {:>2} PASS  {name}: {detail} [{el:.2?}]", n + 1),
            Err(why) => {
                failed += 1;
                println!("criterion {:>2} FAIL  {name}: {why} [{el:.2?}]", n + 1)
            }
        }
    }
    println!("acceptance: {} passed, {failed} failed", criteria.len() - failed);
    if failed > 0 {
        std::process::exit(1);
    }
}
