//! Algebraic and semantic laws, checked on generated inputs.

use std::collections::BTreeSet;

use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use sav_core::fuzz::{
    check_closure, check_preservation, check_round_trip_sa, check_round_trip_while,
    check_triple_soundness, check_version_stability, gen_assertion, gen_loop_free, gen_program,
    gen_renaming, gen_state, generate_case, sa_pool, GenParams,
};
use sav_core::lang::{
    AnnCommand, Assertion, BoolExpr, Expr, Identifier, Program, Renaming, RenamingError, SaVar,
    Triple, Variable, Version,
};
use sav_core::semantics::{exec, EvalContext, ExecOutcome, Grid, Validity};
use sav_core::smt::emit_all;
use sav_core::symbols::SymbolTable;
use sav_core::translate::{tsa_cmd, Translator, VersionMap};
use sav_core::vcgen::{vcs, verify_bounded};

fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn program(seed: u64) -> AnnCommand<Identifier> {
    gen_program(&GenParams::default(), &mut rng(seed))
}

fn condition(seed: u64) -> BoolExpr<Identifier> {
    // a generated quantifier-free assertion, read back as a condition
    let p = GenParams::default();
    let mut r = rng(seed);
    match gen_assertion(&p, &p.pool(), 2, &mut r).to_bool_expr() {
        Some(b) => b,
        None => BoolExpr::Const(seed.is_multiple_of(2)),
    }
}

fn sa_var() -> impl Strategy<Value = SaVar> {
    ("[a-z][a-z0-9_]{0,3}", prop::collection::vec(0u32..12, 1..4)).prop_filter_map(
        "reserved word",
        |(b, v)| {
            Some(SaVar::new(
                Identifier::parse(&b).ok()?,
                Version::new(v).ok()?,
            ))
        },
    )
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn assigned_variables_occur(seed in any::<u64>()) {
        let c = program(seed);
        prop_assert!(c.assd().is_subset(&c.vars()));
        let erased = c.erase();
        prop_assert!(erased.vars().is_subset(&c.vars()));
        prop_assert_eq!(erased.assd(), c.assd());
    }

    #[test]
    fn substituting_a_variable_for_itself_is_identity(seed in any::<u64>()) {
        let p = GenParams::default();
        let mut r = rng(seed);
        let a = gen_assertion(&p, &p.pool(), 3, &mut r);
        for x in p.pool() {
            prop_assert_eq!(a.subst(&x, &Expr::Var(x.clone())), a.clone());
        }
    }

    #[test]
    fn renamings_keep_variables_distinct(seed in any::<u64>()) {
        let pool = sa_pool(&GenParams::default());
        let r = gen_renaming(&pool, &mut rng(seed));
        prop_assert!(r.domain().is_disjoint(&r.range()));
        prop_assert_eq!(r.domain().len() + r.range().len(), 2 * r.len());
        if let Some((t, s)) = r.pairs().first() {
            // reusing a source as a target is rejected
            let bad = Renaming::new([(t.clone(), s.clone()), (s.clone(), t.clone())]);
            prop_assert!(matches!(bad, Err(RenamingError::Repeated(_))));
        }
    }

    #[test]
    fn printing_round_trips_and_is_injective(a in any::<u64>(), b in any::<u64>()) {
        let p = GenParams::default();
        let (ca, cb) = (generate_case(&p, a), generate_case(&p, b));
        prop_assert_eq!(check_round_trip_while(&ca.unit), Ok(()));
        if ca.unit != cb.unit {
            prop_assert_ne!(ca.unit.to_string(), cb.unit.to_string());
        }
        let (t, _) = sav_core::translate::tsa_triple(&ca.unit.pre, &ca.unit.program, &ca.unit.post, None).unwrap();
        let sa = sav_core::parser::SourceUnit { declarations: Vec::new(), pre: t.pre, post: t.post, program: t.program };
        prop_assert_eq!(check_round_trip_sa(&sa), Ok(()));
    }

    #[test]
    fn more_fuel_gives_the_same_result(seed in any::<u64>(), fuel in 0u64..40, extra in 0u64..100) {
        let p = GenParams::default();
        let c = program(seed).erase();
        let s = gen_state(&p, &p.pool(), &mut rng(!seed));
        let before = s.clone();
        let defs = SymbolTable::default();
        let ctx = EvalContext::new(&defs);
        let first = exec(&c, &s, fuel, &ctx).unwrap();
        prop_assert_eq!(&s, &before);
        if let ExecOutcome::Terminated(_) = first {
            prop_assert_eq!(exec(&c, &s, fuel + extra, &ctx).unwrap(), first);
        }
    }

    #[test]
    fn embedded_conditions_agree(seed in any::<u64>()) {
        let p = GenParams::default();
        let b = condition(seed);
        let s = gen_state(&p, &p.pool(), &mut rng(seed ^ 0x5a5a));
        let defs = SymbolTable::default();
        let ctx = EvalContext::new(&defs);
        prop_assert_eq!(ctx.eval_bool(&b, &s).unwrap(), ctx.eval_assert(&b.embed(), &s).unwrap());
    }

    #[test]
    fn translation_properties(seed in any::<u64>(), state_seed in any::<u64>()) {
        let p = GenParams::default();
        let c = program(seed);
        let s = gen_state(&p, &p.pool(), &mut rng(state_seed));
        let defs = SymbolTable::default();
        let ctx = EvalContext::new(&defs);
        let t = Translator::new();
        let v0 = VersionMap::initial(&p.pool());
        prop_assert_eq!(check_preservation(&c, &s, 200, &t, &ctx), Ok(()));
        prop_assert_eq!(check_version_stability(&c, &v0, &t), Ok(()));
        prop_assert_eq!(check_closure(&c, &v0, &t), Ok(()));
        // a pure function: identical text on a second run
        let once = tsa_cmd(&v0, &c).unwrap();
        let twice = tsa_cmd(&v0, &c).unwrap();
        prop_assert_eq!(once.program.to_string(), twice.program.to_string());
    }

    #[test]
    fn translation_from_later_versions(seed in any::<u64>(), start in prop::collection::vec(0u32..4, 1..3)) {
        let c = program(seed);
        let mut v = VersionMap::new();
        for x in GenParams::default().pool() {
            v.set(x, Version::new(start.clone()).unwrap());
        }
        let t = Translator::new();
        prop_assert_eq!(check_version_stability(&c, &v, &t), Ok(()));
        prop_assert_eq!(check_closure(&c, &v, &t), Ok(()));
    }

    #[test]
    fn condition_count(seed in any::<u64>()) {
        let c = program(seed);
        let n = c.while_count();
        let t = Triple::new(Assertion::Const(true), c, Assertion::Const(true));
        prop_assert_eq!(vcs(&t).len(), 1 + 2 * n);
    }

    #[test]
    fn loop_free_counterexamples_falsify_the_postcondition(seed in any::<u64>()) {
        let p = GenParams { pool_size: 2, ..GenParams::default() };
        let mut r = rng(seed);
        let xy = p.pool();
        let c = gen_loop_free(&p, &mut r);
        let t = Triple::new(gen_assertion(&p, &xy, 1, &mut r), c, gen_assertion(&p, &xy, 2, &mut r));
        let defs = SymbolTable::default();
        let ctx = EvalContext::new(&defs);
        let conditions = vcs(&t);
        let verdicts = verify_bounded(&conditions, &Grid::new(-2, 2), &ctx).unwrap();
        if let Validity::Counterexample(s) = &verdicts[0] {
            prop_assert!(ctx.eval_assert(&t.pre, s).unwrap());
            let ExecOutcome::Terminated(f) = exec(&t.program.erase(), s, 0, &ctx).unwrap() else {
                return Err(TestCaseError::fail("loop-free program ran out of fuel"));
            };
            prop_assert!(!ctx.eval_assert(&t.post, &f).unwrap());
        }
        prop_assert_eq!(check_triple_soundness(&t, &Grid::new(-2, 2), &Translator::new(), &ctx), Ok(()));
    }

    #[test]
    fn mangled_names_are_distinct(a in sa_var(), b in sa_var()) {
        if a != b {
            prop_assert_ne!(a.smt_symbol(), b.smt_symbol());
        }
    }

    #[test]
    fn emission_is_deterministic(seed in any::<u64>()) {
        let c = program(seed);
        let t = Triple::new(Assertion::Const(true), c, Assertion::Const(true));
        let conditions = vcs(&t);
        let defs = SymbolTable::default();
        prop_assert_eq!(emit_all(&conditions, &defs).unwrap(), emit_all(&conditions, &defs).unwrap());
    }
}

#[test]
fn mangling_separates_underscores_from_versions() {
    let names: BTreeSet<String> = ["a_1", "a__1", "a_1.0", "a_10", "a_1_0"]
        .iter()
        .filter_map(|s| SaVar::parse(s).ok())
        .map(|v| v.smt_symbol())
        .collect();
    let parsed = ["a_1", "a__1", "a_1.0", "a_10", "a_1_0"]
        .iter()
        .filter(|s| SaVar::parse(s).is_ok())
        .count();
    assert_eq!(names.len(), parsed);
}
