//! Deterministic seed derivation for parallel replicates.
//!
//! Every replicate gets its own generator seeded by a splittable,
//! counter-based mix of the base seed and the replicate coordinates, so
//! results do not depend on scheduling or worker count.

/// SplitMix64 finalizer: a bijective avalanche on 64 bits.
#[inline]
fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Derives an independent stream seed from a base seed and one counter.
pub fn derive_seed(base: u64, index: u64) -> u64 {
    splitmix64(base ^ splitmix64(index))
}

/// Derives an independent stream seed from a base seed and two counters
/// (e.g. sweep point and replicate).
pub fn derive_seed2(base: u64, a: u64, b: u64) -> u64 {
    derive_seed(derive_seed(base, a), b)
}
