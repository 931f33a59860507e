//! Shared fixtures for the benchmarks.

use conjugate_codes::catalog::builtin;
use conjugate_codes::{ConjugatePair, LinearCode, PauliChannel, SchemeInstance};

/// A built-in pair by name.
pub fn pair(name: &str) -> ConjugatePair {
    builtin(name).expect("built-in pair")
}

/// The scheme on a built-in pair with the channel `depolarizing(p)`.
pub fn depolarizing_instance(name: &str, p: f64) -> (SchemeInstance, PauliChannel) {
    let pair = pair(name);
    let ch = PauliChannel::depolarizing(pair.field(), pair.n(), p).expect("valid probability");
    (SchemeInstance::new(&pair).expect("small pair"), ch)
}

/// Systematic generator rows `[I_k | P]` of an `[n, k]` binary code, with a
/// fixed irregular pattern in `P`.
pub fn binary_rows(n: usize, k: usize) -> Vec<Vec<u32>> {
    (0..k)
        .map(|r| {
            (0..n)
                .map(|c| if c < k { u32::from(c == r) } else { u32::from((r * 7 + c * 13 + r * c) % 5 < 2) })
                .collect()
        })
        .collect()
}

/// A `[n, k]` binary code built from [`binary_rows`].
pub fn binary_code(n: usize, k: usize) -> LinearCode {
    let f = conjugate_codes::Field::prime(2).expect("GF(2)");
    LinearCode::from_generators(&f, n, &binary_rows(n, k)).expect("valid rows")
}
