mod common;

use std::sync::OnceLock;

use asw_tower::algebra::linsolve::{linear_solve, mat_vec};
use asw_tower::algebra::{FieldCtx, FieldElem};
use asw_tower::gene::GeneWord;
use asw_tower::tower::{Tower, TowerElem, ValuationOracle};
use asw_tower::valued_field::{valuation, Valuation};
use asw_tower::weave::{build_weave, oracle_for, BuildOptions};
use asw_tower::witt::{Witt, WittVec};
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use common::{k, random_field};

fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

struct Built {
    ctx: FieldCtx,
    tower: Tower,
    oracle: ValuationOracle,
}

fn built(word: &str) -> Built {
    let cert = build_weave(&GeneWord::parse(word).unwrap(), 2, 1, &BuildOptions::default()).unwrap();
    let (tower, oracle) = oracle_for(&cert).unwrap();
    Built { ctx: cert.ctx().unwrap(), tower, oracle }
}

fn towers() -> &'static [(&'static str, Built)] {
    static T: OnceLock<Vec<(&'static str, Built)>> = OnceLock::new();
    T.get_or_init(|| ["W", "F:s1", "W,W", "F:s1,W", "W,F:s1"].into_iter().map(|w| (w, built(w))).collect())
}

fn random_tower_elem(r: &mut ChaCha8Rng, b: &Built, level: usize) -> TowerElem {
    let dim = 1usize << level;
    let coeffs: Vec<FieldElem> = (0..dim)
        .map(|_| if rand::Rng::gen_bool(r, 0.7) { random_field(r, &b.ctx, -3, 3) } else { b.ctx.zero() })
        .collect();
    TowerElem::from_coeffs(level, coeffs).unwrap()
}

fn cfg(cases: u32) -> ProptestConfig {
    ProptestConfig { cases, ..ProptestConfig::default() }
}

proptest! {
    #![proptest_config(cfg(48))]

    #[test]
    fn base_valuation_is_additive(seed in any::<u64>(), p in prop::sample::select(vec![2u64, 3, 5])) {
        let ctx = k(p, 2);
        let mut r = rng(seed);
        let (x, y) = (random_field(&mut r, &ctx, -5, 5), random_field(&mut r, &ctx, -5, 5));
        prop_assert_eq!(valuation(&ctx, &x.mul(&y)), valuation(&ctx, &x) + valuation(&ctx, &y));
        prop_assert!(valuation(&ctx, &x.add(&y)) >= valuation(&ctx, &x).min(valuation(&ctx, &y)));
    }

    #[test]
    fn tower_valuation_is_additive(seed in any::<u64>(), which in 0usize..5) {
        let (_, b) = &towers()[which];
        let mut r = rng(seed);
        let n = b.oracle.height();
        let (u, v) = (random_tower_elem(&mut r, b, n), random_tower_elem(&mut r, b, n));
        let vu = b.oracle.valuation(&b.tower, &u);
        let vv = b.oracle.valuation(&b.tower, &v);
        prop_assert_eq!(b.oracle.valuation(&b.tower, &b.tower.mul(&u, &v)), vu + vv);
        prop_assert!(b.oracle.valuation(&b.tower, &u.add(&v)) >= vu.min(vv));
    }

    #[test]
    fn sigma_preserves_valuation(seed in any::<u64>(), which in 0usize..5) {
        let (_, b) = &towers()[which];
        let mut r = rng(seed);
        let u = random_tower_elem(&mut r, b, b.oracle.height());
        let su = b.tower.apply_sigma(&u);
        prop_assert_eq!(b.oracle.valuation(&b.tower, &su), b.oracle.valuation(&b.tower, &u));
    }

    #[test]
    fn value_group_is_prescribed(seed in any::<u64>(), which in 0usize..5) {
        let (word, b) = &towers()[which];
        let wild = word.split(',').filter(|l| *l == "W").count() as u32;
        let mut r = rng(seed);
        let u = random_tower_elem(&mut r, b, b.oracle.height());
        if let Valuation::Finite(q) = b.oracle.valuation(&b.tower, &u) {
            prop_assert_eq!(2i64.pow(wild) % q.denom(), 0, "v = {} in {}", q, word);
        }
    }

    #[test]
    fn trace_of_integral_elements_is_in_max_ideal(seed in any::<u64>(), which in 0usize..2) {
        let (_, b) = &towers()[which];
        let mut r = rng(seed);
        let u = random_tower_elem(&mut r, b, 1);
        prop_assume!(b.oracle.valuation(&b.tower, &u).is_positive());
        let tr = b.tower.trace_to_k(&u, 1).unwrap();
        prop_assert!(valuation(&b.ctx, &tr).is_positive());
    }

    #[test]
    fn z_basis_round_trip(seed in any::<u64>(), which in 0usize..5) {
        let (_, b) = &towers()[which];
        let mut r = rng(seed);
        let n = b.oracle.height();
        let u = random_tower_elem(&mut r, b, n);
        let mut back = b.tower.zero(n);
        for (e, c) in b.oracle.to_z_basis(&b.tower, &u).unwrap() {
            let mut term = b.tower.base(c, n);
            for (j, &ej) in e.iter().enumerate() {
                let z = b.oracle.z(j + 1).lift(n);
                term = b.tower.mul(&term, &b.tower.pow(&z, ej as u64));
            }
            back = back.add(&term);
        }
        prop_assert_eq!(back, u);
    }

    #[test]
    fn pth_root_inverts_frobenius(seed in any::<u64>(), p in prop::sample::select(vec![2u64, 3, 5])) {
        let ctx = k(p, 2);
        let x = random_field(&mut rng(seed), &ctx, -4, 4);
        prop_assert_eq!(x.frobenius_power(1).unwrap().pth_root().unwrap(), x);
    }

    #[test]
    fn linear_solve_solves(seed in any::<u64>(), n in 1usize..4) {
        let ctx = k(3, 1);
        let mut r = rng(seed);
        let a: Vec<Vec<FieldElem>> = (0..n).map(|_| (0..n).map(|_| random_field(&mut r, &ctx, -2, 2)).collect()).collect();
        prop_assume!(!common::det(&ctx, a.clone()).is_zero());
        let b: Vec<FieldElem> = (0..n).map(|_| random_field(&mut r, &ctx, -2, 2)).collect();
        let x = linear_solve(&a, &b).unwrap();
        prop_assert_eq!(mat_vec(&a, &x), b.clone());
        prop_assert_eq!(x, common::solve(a, b));
    }
}

fn witt_vec(r: &mut ChaCha8Rng, ctx: &FieldCtx, m: usize) -> WittVec<FieldElem> {
    WittVec::new((0..m).map(|_| random_field(r, ctx, -2, 2)).collect())
}

proptest! {
    #![proptest_config(cfg(24))]

    #[test]
    fn witt_ring_laws(seed in any::<u64>(), p in prop::sample::select(vec![2u64, 3]), m in 1usize..4) {
        let ctx = k(p, 1);
        let w = Witt::new(ctx, ctx.p, m).unwrap();
        let mut r = rng(seed);
        let (a, b, c) = (witt_vec(&mut r, &ctx, m), witt_vec(&mut r, &ctx, m), witt_vec(&mut r, &ctx, m));
        prop_assert_eq!(w.add(&a, &b).unwrap(), w.add(&b, &a).unwrap());
        prop_assert_eq!(w.add(&w.add(&a, &b).unwrap(), &c).unwrap(), w.add(&a, &w.add(&b, &c).unwrap()).unwrap());
        prop_assert_eq!(w.mul(&a, &b).unwrap(), w.mul(&b, &a).unwrap());
        prop_assert_eq!(w.mul(&w.mul(&a, &b).unwrap(), &c).unwrap(), w.mul(&a, &w.mul(&b, &c).unwrap()).unwrap());
        prop_assert_eq!(w.add(&a, &w.neg(&a).unwrap()).unwrap(), w.zero());
    }

    #[test]
    fn frobenius_and_asw_operator_are_additive(seed in any::<u64>(), p in prop::sample::select(vec![2u64, 3]), m in 1usize..4) {
        let ctx = k(p, 1);
        let w = Witt::new(ctx, ctx.p, m).unwrap();
        let mut r = rng(seed);
        let (a, b) = (witt_vec(&mut r, &ctx, m), witt_vec(&mut r, &ctx, m));
        let s = w.add(&a, &b).unwrap();
        prop_assert_eq!(w.frobenius(&s).unwrap(), w.add(&w.frobenius(&a).unwrap(), &w.frobenius(&b).unwrap()).unwrap());
        prop_assert_eq!(w.asw_operator(&s).unwrap(), w.add(&w.asw_operator(&a).unwrap(), &w.asw_operator(&b).unwrap()).unwrap());
    }
}
