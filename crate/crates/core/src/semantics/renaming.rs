use crate::lang::{Assertion, Renaming, SaVar};

use super::state::State;

/// `R(s)`: each target reads its source, everything else is unchanged.
pub fn apply_renaming_state(r: &Renaming, s: &State<SaVar>) -> State<SaVar> {
    let mut out = s.clone();
    for (target, source) in r.pairs() {
        out.set(target.clone(), s.get(source).clone());
    }
    out
}

/// `R(a)`: simultaneous substitution of each target by its source.
pub fn apply_renaming_assert(r: &Renaming, a: &Assertion<SaVar>) -> Assertion<SaVar> {
    a.subst_many(&r.as_substitution())
}
