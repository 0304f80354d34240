//! Randomized checking of the translation: seeded generators for programs,
//! states, renamings and assertions, executable property checks, and a
//! driver that writes replayable failure files.

mod checks;
mod gen;
mod harness;

pub use checks::{
    brute_force_validity, check_closure, check_preservation, check_renaming_assert,
    check_renaming_state, check_round_trip_sa, check_round_trip_while, check_triple_soundness,
    check_vc_oracle, check_version_stability, lift, ClosureFailure, PreservationFailure,
    StabilityFailure,
};
pub use gen::{
    gen_assertion, gen_loop_free, gen_program, gen_renaming, gen_rich_assertion, gen_state,
    sa_pool, GenParams, GenParamsError, DEFAULT_LOOP_PROBABILITY,
};
pub use harness::{
    case_rng, generate_case, run, run_case, write_artifacts, Case, FuzzConfig, FuzzFailure,
    FuzzReport, Property, DEFAULT_FUZZ_FUEL, ORACLE_GRID,
};
