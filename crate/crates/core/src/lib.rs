//! Conjugate code pairs over finite fields and the quantum codes and
//! cryptographic codes built from them.
//!
//! The layers build on each other:
//!
//! - [`finite_field`]: GF(p^m) arithmetic, trace, trace-dual bases.
//! - [`linear_codes`]: vectors, RREF, duals, coset-leader syndrome tables.
//! - [`conjugate_pair`]: pairs with `C2^⊥ ≤ C1`, quotient codes, expansion
//!   to the prime field, manifest files.
//! - [`symplectic`]: the symplectic form, CSS lift, error sets.
//! - [`quantum_sim`]: exact dense simulation of the encoded states,
//!   recovery, entanglement fidelity and entropy exchange.
//! - [`crypto_scheme`]: encryption/decryption, channel accounting, the
//!   leakage bound and Monte Carlo runs.
//! - [`catalog`]: built-in example pairs.

pub mod catalog;
pub mod conjugate_pair;
pub mod crypto_scheme;
pub mod error;
pub mod finite_field;
pub mod linear_codes;
pub mod quantum_sim;
pub mod symplectic;

pub use conjugate_pair::{make_pair, ConjugatePair, PairManifest, PairSummary, QuotientCode};
pub use crypto_scheme::{ChannelSpec, SchemeInstance, SimulationReport, XDist};
pub use error::{Error, Result};
pub use finite_field::{Basis, Field, FieldElement};
pub use linear_codes::{LinearCode, Matrix, SyndromeTable, VectorFq};
pub use quantum_sim::{CssCode, DensityOperator, PauliChannel, QuantumState, SimLimits, StateVector};
pub use symplectic::{SympCode, SympVector};
