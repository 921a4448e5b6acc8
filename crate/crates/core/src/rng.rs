//! Seeded PRNG plumbing. Every randomized operation takes a `&mut Prng`
//! explicitly; rings never own generator state, so concurrent callers can
//! thread independent streams.

use num_bigint::BigInt;
use rand::SeedableRng;
use sha2::{Digest, Sha256};

/// The crate-wide PRNG. ChaCha is stable across platforms and releases, which
/// keeps seeded runs byte-reproducible.
pub type Prng = rand_chacha::ChaCha12Rng;

pub fn from_seed(seed: u64) -> Prng {
    Prng::seed_from_u64(seed)
}

/// Derive a PRNG from a list of integers. Used for canonical (deterministic)
/// generator searches: the stream depends only on the listed values, not on
/// the caller's sampling history.
pub fn canonical(values: &[&BigInt]) -> Prng {
    let mut h = Sha256::new();
    for v in values {
        h.update(v.to_string().as_bytes());
        h.update(b";");
    }
    let digest = h.finalize();
    let mut seed = [0u8; 32];
    seed.copy_from_slice(&digest);
    Prng::from_seed(seed)
}
