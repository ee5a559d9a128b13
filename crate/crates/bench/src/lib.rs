//! Shared fixtures for the criterion benches.

use ternquart::algebra::{eta0, random_traceless};
use ternquart::Algebra;

/// η₀ and one seeded random algebra, labelled for benchmark ids.
pub fn fixtures() -> Vec<(&'static str, Algebra)> {
    vec![("eta0", eta0()), ("random-17", random_traceless(17))]
}
