//! Single-assignment translation, its version bookkeeping, and the
//! back-translation to While code.

mod tinv;
mod tsa;
mod versions;

pub use tinv::{t_inv, t_inv_loop_origins};
pub use tsa::{tsa_cmd, tsa_triple, Fault, TranslateError, TranslationResult, Translator};
pub use versions::{merge, sup, upd, VersionMap};
