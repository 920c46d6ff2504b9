//! Numerical evaluation of the elliptic gamma function and its relatives,
//! together with an exact-arithmetic verifier for its modular cocycle
//! structure over SL(3,Z) ⋉ Z³.
//!
//! The numeric half of the crate ([`qseries`], [`gamma`], [`special`],
//! [`phase`]) evaluates infinite products and summation formulas with
//! rigorous geometric tail control, and exposes every functional identity
//! of the function family as a computable residual. The exact half
//! ([`cocycle`]) performs polynomial and group arithmetic over big
//! rationals with no floating point anywhere.
//!
//! All evaluations are pure functions of their arguments; there is no
//! shared mutable state, so everything here is safe to call concurrently.

pub mod cocycle;
pub mod diophantine;
pub mod err;
pub mod eval;
pub mod gamma;
pub mod phase;
pub mod policy;
pub mod qseries;
pub mod report;
pub mod rng;
pub mod special;
pub mod suites;

pub use err::{EgError, EgResult};
pub use eval::{Eval, EvalFlags};
pub use num_complex::Complex64;
pub use policy::{Nome, PsiPolicy, TailBoundMode, TruncationPolicy};
pub use report::ResidualReport;
