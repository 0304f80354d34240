//! Executable forms of the translation and verification properties, each
//! checked against the interpreter.

use std::collections::BTreeSet;

use num_bigint::BigInt;
use thiserror::Error;

use crate::lang::{
    check_sa_wellformed, AnnCommand, Assertion, Identifier, Program, Renaming, SaVar, Triple,
    Variable, Version, VersionContractError, Violation, WhileTriple,
};
use crate::parser::{parse, parse_sa, SaUnit, WhileUnit};
use crate::semantics::{
    apply_renaming_assert, apply_renaming_state, exec, CheckError, EvalContext, EvalError,
    ExecOutcome, Grid, GridStates, State,
};
use crate::translate::{t_inv, Translator, VersionMap};
use crate::vcgen::{vcs, verify_bounded};

/// `x_{v(x)} ↦ s(x)` for every `x` in the map.
pub fn lift(v: &VersionMap, s: &State<Identifier>) -> State<SaVar> {
    State::from_pairs(v.iter().map(|(x, _)| (v.sa_var(x), s.get(x).clone())))
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PreservationFailure {
    #[error("translation failed: {0}")]
    Translation(#[from] VersionContractError),
    #[error("evaluation failed: {0}")]
    Eval(#[from] EvalError),
    #[error("the original program {} but the translation {}", verb(*original), verb(*translated))]
    Termination { original: bool, translated: bool },
    #[error("`{var}` ends as {original} but `{version}` ends as {translated}")]
    Value {
        var: Identifier,
        version: SaVar,
        original: BigInt,
        translated: BigInt,
    },
}

fn verb(terminated: bool) -> &'static str {
    if terminated {
        "terminates"
    } else {
        "runs out of fuel"
    }
}

impl PreservationFailure {
    /// The variable whose final values differ, if that is the failure.
    pub fn variable(&self) -> Option<&Identifier> {
        match self {
            PreservationFailure::Value { var, .. } => Some(var),
            _ => None,
        }
    }
}

/// Runs `c` from `s` and its translation from the lifted state with the
/// same fuel. Both must run out of fuel, or both must terminate with every
/// variable agreeing with its final version.
pub fn check_preservation(
    c: &AnnCommand<Identifier>,
    s: &State<Identifier>,
    fuel: u64,
    translator: &Translator,
    ctx: &EvalContext<'_>,
) -> Result<(), PreservationFailure> {
    let mut universe = c.vars();
    universe.extend(s.iter().map(|(x, _)| x.clone()));
    let v0 = VersionMap::initial(&universe);
    let (v1, sa) = translator.translate(&v0, c)?;

    let original = exec(&c.erase(), s, fuel, ctx)?;
    let translated = exec(&t_inv(&sa).erase(), &lift(&v0, s), fuel, ctx)?;
    match (original, translated) {
        (ExecOutcome::FuelExhausted, ExecOutcome::FuelExhausted) => Ok(()),
        (ExecOutcome::Terminated(sf), ExecOutcome::Terminated(tf)) => {
            for x in &universe {
                let version = v1.sa_var(x);
                if sf.get(x) != tf.get(&version) {
                    return Err(PreservationFailure::Value {
                        var: x.clone(),
                        original: sf.get(x).clone(),
                        translated: tf.get(&version).clone(),
                        version,
                    });
                }
            }
            Ok(())
        }
        (o, t) => Err(PreservationFailure::Termination {
            original: matches!(o, ExecOutcome::Terminated(_)),
            translated: matches!(t, ExecOutcome::Terminated(_)),
        }),
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum StabilityFailure {
    #[error("translation failed: {0}")]
    Translation(#[from] VersionContractError),
    #[error("unassigned `{var}` moved from version {before} to {after}")]
    Moved {
        var: Identifier,
        before: Version,
        after: Version,
    },
}

/// Variables the program does not assign keep their version.
pub fn check_version_stability(
    c: &AnnCommand<Identifier>,
    v: &VersionMap,
    translator: &Translator,
) -> Result<(), StabilityFailure> {
    let mut v = v.clone();
    v.extend_universe(&c.vars());
    let (after, _) = translator.translate(&v, c)?;
    let assigned = c.assd();
    for x in v.keys().filter(|x| !assigned.contains(*x)) {
        if v.get(x) != after.get(x) {
            return Err(StabilityFailure::Moved {
                var: x.clone(),
                before: v.get(x),
                after: after.get(x),
            });
        }
    }
    Ok(())
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ClosureFailure {
    #[error("translation failed: {0}")]
    Translation(#[from] VersionContractError),
    #[error("translation is not single-assignment: {0}")]
    IllFormed(#[from] Violation),
}

/// The translation is a well-formed single-assignment program.
pub fn check_closure(
    c: &AnnCommand<Identifier>,
    v: &VersionMap,
    translator: &Translator,
) -> Result<(), ClosureFailure> {
    let mut v = v.clone();
    v.extend_universe(&c.vars());
    let (_, sa) = translator.translate(&v, c)?;
    check_sa_wellformed(&sa)?;
    Ok(())
}

/// Executing a renaming is applying it to the state.
pub fn check_renaming_state(
    r: &Renaming,
    s: &State<SaVar>,
    ctx: &EvalContext<'_>,
) -> Result<(), String> {
    let expected = apply_renaming_state(r, s);
    match exec(&r.to_command(), s, 0, ctx) {
        Ok(ExecOutcome::Terminated(got)) if got == expected => Ok(()),
        Ok(ExecOutcome::Terminated(got)) => Err(format!(
            "executing {r} gives {got}, applying it gives {expected}"
        )),
        Ok(ExecOutcome::FuelExhausted) => Err(format!("executing {r} ran out of fuel")),
        Err(e) => Err(e.to_string()),
    }
}

/// A renamed assertion holds in a state iff the original holds in the
/// renamed state.
pub fn check_renaming_assert(
    r: &Renaming,
    a: &Assertion<SaVar>,
    s: &State<SaVar>,
    ctx: &EvalContext<'_>,
) -> Result<(), String> {
    let lhs = ctx
        .eval_assert(&apply_renaming_assert(r, a), s)
        .map_err(|e| e.to_string())?;
    let rhs = ctx
        .eval_assert(a, &apply_renaming_state(r, s))
        .map_err(|e| e.to_string())?;
    if lhs == rhs {
        Ok(())
    } else {
        Err(format!("{r} applied to `{a}` evaluates to {lhs} in {s}, the original in the renamed state to {rhs}"))
    }
}

fn reparse_failure<T: std::fmt::Debug>(printed: &str, got: T) -> String {
    format!("printed as\n{printed}\nreparsed as {got:?}")
}

pub fn check_round_trip_while(unit: &WhileUnit) -> Result<(), String> {
    let printed = unit.to_string();
    match parse(&printed) {
        Ok(back) if back == *unit => Ok(()),
        Ok(back) => Err(reparse_failure(&printed, back)),
        Err(e) => Err(reparse_failure(&printed, e)),
    }
}

pub fn check_round_trip_sa(unit: &SaUnit) -> Result<(), String> {
    let printed = unit.to_string();
    match parse_sa(&printed) {
        Ok(back) if back == *unit => Ok(()),
        Ok(back) => Err(reparse_failure(&printed, back)),
        Err(e) => Err(reparse_failure(&printed, e)),
    }
}

/// Partial correctness checked state by state: from every grid state
/// satisfying `pre`, a terminating run ends in `post`. The first failing
/// start state is returned.
pub fn brute_force_validity<V: Variable>(
    t: &Triple<V, AnnCommand<V>>,
    vars: &BTreeSet<V>,
    grid: &Grid,
    fuel: u64,
    ctx: &EvalContext<'_>,
) -> Result<Option<State<V>>, CheckError> {
    let program = t.program.erase();
    for s in GridStates::new(vars, grid)? {
        if !ctx.eval_assert(&t.pre, &s)? {
            continue;
        }
        if let ExecOutcome::Terminated(f) = exec(&program, &s, fuel, ctx)? {
            if !ctx.eval_assert(&t.post, &f)? {
                return Ok(Some(s));
            }
        }
    }
    Ok(None)
}

fn triple_vars(t: &WhileTriple) -> BTreeSet<Identifier> {
    let mut vars = t.program.vars();
    vars.extend(t.pre.free_vars());
    vars.extend(t.post.free_vars());
    vars
}

/// For a loop-free triple, all conditions holding on the grid agrees with
/// direct validity on the grid.
pub fn check_vc_oracle(
    t: &WhileTriple,
    grid: &Grid,
    ctx: &EvalContext<'_>,
) -> Result<bool, String> {
    let conditions = vcs(t);
    let by_vcs = verify_bounded(&conditions, grid, ctx)
        .map_err(|e| e.to_string())?
        .iter()
        .all(|v| v.is_valid());
    let by_runs = brute_force_validity(t, &triple_vars(t), grid, 0, ctx)
        .map_err(|e| e.to_string())?
        .is_none();
    if by_vcs == by_runs {
        Ok(by_runs)
    } else {
        Err(format!("conditions say {by_vcs}, execution says {by_runs}"))
    }
}

/// If the translated triple holds on the grid, so does the original.
pub fn check_triple_soundness(
    t: &WhileTriple,
    grid: &Grid,
    translator: &Translator,
    ctx: &EvalContext<'_>,
) -> Result<(), String> {
    let universe = triple_vars(t);
    let v0 = VersionMap::initial(&universe);
    let (v1, sa) = translator
        .translate(&v0, &t.program)
        .map_err(|e| e.to_string())?;
    let image = Triple::new(
        t.pre.map_vars(&|x| v0.sa_var(x)),
        t_inv(&sa),
        t.post.map_vars(&|x| v1.sa_var(x)),
    );
    let start: BTreeSet<SaVar> = universe.iter().map(|x| v0.sa_var(x)).collect();
    let translated_ok = brute_force_validity(&image, &start, grid, 0, ctx)
        .map_err(|e| e.to_string())?
        .is_none();
    let original_ok = brute_force_validity(t, &universe, grid, 0, ctx)
        .map_err(|e| e.to_string())?
        .is_none();
    if translated_ok && !original_ok {
        Err("the translated triple holds on the grid but the original does not".into())
    } else {
        Ok(())
    }
}
