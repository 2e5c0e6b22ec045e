//! Toolkit for measuring Bargmann invariants with the quantum switch.
//!
//! The crate is organized around five modules:
//!
//! - [`linalg`]: dense complex matrices, state vectors, density operators,
//!   and seeded Haar-random generation.
//! - [`perm`]: exact symmetric-group arithmetic, the permutation families
//!   used by the measurement protocols, and their tensor-factor unitary
//!   representation.
//! - [`invariants`]: three independent evaluators of the multivariate trace
//!   `Tr(rho_1 ... rho_n)`, used as mutual oracles throughout.
//! - [`switch`]: the unitary quantum switch as a concrete channel, with
//!   control-qubit statistics extracted both by the Born rule and in
//!   closed form.
//! - [`protocol`]: end-to-end measurement protocols (odd order, even-order
//!   workarounds, shot-based estimation, the cycle test, and a
//!   Hadamard-test simulation of the switch).
//!
//! All values are immutable after construction and all operations are pure
//! functions, so everything is safe to share across threads. With the
//! default `parallel` feature, embarrassingly parallel inner loops (shot
//! sampling, exhaustive group searches, batch verification) run on rayon;
//! without it they fall back to equivalent sequential code. Results are
//! identical either way.
//!
//! Randomness is always an explicit function of a 64-bit seed: generators
//! are `ChaCha12` instances created with `seed_from_u64(seed)`, with
//! independent sub-streams selected via `set_stream` where work is chunked.

pub mod error;
pub mod invariants;
pub mod linalg;
pub mod perm;
pub mod protocol;
pub mod switch;

pub(crate) mod exec;

pub use error::Error;

/// Crate-wide tolerance for derived-quantity comparisons.
pub const TOL_DERIVED: f64 = 1e-10;
/// Crate-wide tolerance for direct invariant checks.
pub const TOL_DIRECT: f64 = 1e-12;
/// Largest tensor-product dimension any operation will materialize.
pub const SIZE_CAP: usize = 4096;
