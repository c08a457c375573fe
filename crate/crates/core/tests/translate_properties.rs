//! Properties of strictness, the encoding, the translations, the
//! λProlog emitter and the inverter.

mod common;

use common::*;
use lfhohh::hohh::Formula;
use lfhohh::invert::invert;
use lfhohh::lf::subst::Instantiate;
use lfhohh::lf::{beta_normalize_object, Checker, Context};
use lfhohh::strictness::{explain, strict_binders, strict_binders_in_order};
use lfhohh::translate::{
    clause_for, emit_lambdaprolog, emit_split, encode, parse_lambdaprolog, simplify_program, translate_signature, Mode,
};
use proptest::prelude::*;

/// Number of leading binders of a clause whose premise is not `true`.
fn real_premises(f: &Formula) -> usize {
    match f {
        Formula::All(_, _, b) => real_premises(b),
        Formula::Imp(g, b) => (**g != Formula::True) as usize + real_premises(b),
        _ => 0,
    }
}

proptest! {
    #![proptest_config(config())]

    #[test]
    fn fixpoint_ignores_visiting_order(xs in tape(), seed in any::<u64>()) {
        let a = family(&mut Tape::new(xs), &Vec::new(), 4);
        let n = a.arity();
        let mut order: Vec<usize> = (0..n).collect();
        // Fisher-Yates driven by the seed.
        let mut r = seed;
        for i in (1..n).rev() {
            r = r.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
            order.swap(i, (r >> 33) as usize % (i + 1));
        }
        prop_assert_eq!(strict_binders_in_order(&a, &order), strict_binders(&a));
        let rev: Vec<usize> = (0..n).rev().collect();
        prop_assert_eq!(strict_binders_in_order(&a, &rev), strict_binders(&a));
    }

    #[test]
    fn verdicts_agree_with_fixpoint(xs in tape()) {
        let a = family(&mut Tape::new(xs), &Vec::new(), 4);
        let explained: std::collections::BTreeSet<usize> =
            explain(&a).into_iter().filter(|v| v.is_strict()).map(|v| v.index).collect();
        prop_assert_eq!(explained, strict_binders(&a));
    }

    #[test]
    fn strictness_ignores_binder_names(xs in tape(), ys in tape()) {
        let a = family(&mut Tape::new(xs), &Vec::new(), 4);
        let b = rename_family(&a, &mut Tape::new(ys));
        prop_assert_eq!(&a, &b);
        let strict = |a| explain(a).iter().map(|v| v.is_strict()).collect::<Vec<_>>();
        prop_assert_eq!(strict(&a), strict(&b));
    }

    /// Optimised clauses keep a typing premise for exactly the non-strict
    /// binders.
    #[test]
    fn premises_match_non_strict_binders(xs in tape()) {
        let a = family(&mut Tape::new(xs), &Vec::new(), 4);
        let clause = clause_for(Mode::Optimized, "k", &a);
        let strict = strict_binders(&a);
        prop_assert_eq!(real_premises(&clause), a.arity() - strict.len());
        prop_assert_eq!(clause.simplify_top().premise_count(), a.arity() - strict.len());
        prop_assert_eq!(clause_for(Mode::Naive, "k", &a).premise_count(), a.arity());
    }

    /// The encoding commutes with substitution.
    #[test]
    fn encode_commutes_with_substitution(xs in tape()) {
        let mut t = Tape::new(xs);
        let a = Ty::random(&mut t, 1);
        let b = Ty::random(&mut t, 1);
        let m = canonical(&mut t, &vec![a.family()], &b, 3);
        let n = canonical(&mut t, &Vec::new(), &a, 2);
        let lhs = encode(&beta_normalize_object(&m.instantiate(std::slice::from_ref(&n))).unwrap());
        let rhs = encode(&m).instantiate(&[encode(&n)]);
        prop_assert_eq!(lhs, rhs);
    }

    /// Inversion recovers canonical objects from their encodings, and its
    /// output checks at the given type.
    #[test]
    fn inversion_undoes_encoding(xs in tape()) {
        let sig = sig();
        let mut t = Tape::new(xs);
        let ty = Ty::random(&mut t, 2);
        let m = canonical(&mut t, &Vec::new(), &ty, 3);
        let back = invert(&sig, &Context::new(), &encode(&m), &ty.family()).unwrap();
        prop_assert!(Checker::new(&sig).check_object_at(&Context::new(), &back, &ty.family()).is_ok());
        prop_assert_eq!(encode(&back), encode(&m));
        prop_assert_eq!(back, m);
    }

    #[test]
    fn emitted_programs_read_back(xs in tape(), mode_naive in any::<bool>(), simplify in any::<bool>()) {
        let mut sig = sig();
        let mut t = Tape::new(xs);
        for i in 0..3 {
            sig.declare_type(&format!("k{i}"), family(&mut t, &Vec::new(), 3)).unwrap();
        }
        let mode = if mode_naive { Mode::Naive } else { Mode::Optimized };
        let mut p = translate_signature(&sig, mode);
        if simplify {
            p = simplify_program(&p);
        }
        prop_assert_eq!(&parse_lambdaprolog(&emit_lambdaprolog(&p)).unwrap(), &p);
        let (s, m) = emit_split(&p, "gen");
        prop_assert_eq!(&parse_lambdaprolog(&format!("{s}\n{m}")).unwrap(), &p);
    }
}

/// The family generator reaches strict, non-strict and CTX_t binders.
#[test]
fn generator_covers_strictness_cases() {
    use lfhohh::strictness::Derivation;
    let (mut strict, mut lax, mut ctx) = (0, 0, 0);
    for seed in 0..2000u32 {
        let xs: Vec<u32> = (0..96).map(|i| seed.wrapping_mul(2654435761).rotate_left(i % 32) ^ i.wrapping_mul(40503)).collect();
        for v in explain(&family(&mut Tape::new(xs), &Vec::new(), 4)) {
            match v.derivation {
                Some(Derivation::CtxT { .. }) => ctx += 1,
                Some(_) => strict += 1,
                None => lax += 1,
            }
        }
    }
    println!("strict {strict}, via CTX_t {ctx}, not strict {lax}");
    assert!(strict > 0 && lax > 0 && ctx > 0, "strict {strict}, via CTX_t {ctx}, not strict {lax}");
}
