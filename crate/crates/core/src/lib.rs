//! Effective Euclidean arithmetic in quotients of rings of integers.
//!
//! The crate provides, bottom up:
//!
//! * [`residue`]: `Z/NZ` with deterministic basic operations (exact division,
//!   Euclidean division, extended gcd with a unimodular certificate,
//!   annihilators, canonical associates),
//! * [`intmat`]: exact integer matrices: Hermite and Smith normal forms,
//!   solving modulo `N`, lattice intersection and CRT reconstruction,
//! * [`ring`]: rings of rank `d` over `Z` given by structure constants,
//! * [`ideal`]: integral and fractional ideals as full-rank lattices,
//! * [`quotient`]: the Euclidean ring `O/m` with the randomized basic
//!   operations (B1)–(B6),
//! * [`echelon`]: a ring-generic strong echelon form engine with CRT
//!   split/recombine,
//! * [`pseudo`]: the modular pseudo-HNF pipeline for modules over `O`,
//!   including modulus finding and the Z-split optimization.
//!
//! All randomized operations are Las Vegas with an injectable, seeded PRNG and
//! a hard sampling budget; results are deterministic for a fixed seed.

pub mod bench;
pub mod echelon;
pub mod error;
pub mod ideal;
pub mod intmat;
pub mod io;
pub mod pseudo;
pub mod quotient;
pub mod residue;
pub mod ring;
pub mod rng;
pub mod selftest;

pub use error::Error;
pub use rng::Prng;

/// Hard cap on Las Vegas sampling loops; exceeding it turns a silent hang
/// into [`Error::SamplingBudgetExhausted`].
pub const SAMPLING_BUDGET: u64 = 1_000_000;
