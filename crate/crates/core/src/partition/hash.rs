//! Deterministic 64-bit hashing shared by the edge assigners, master
//! election and the Kronecker generator.

/// SplitMix64 finalizer. Bit-exact across platforms.
#[inline]
pub fn hash64(x: u64) -> u64 {
    let mut y = x.wrapping_add(0x9E37_79B9_7F4A_7C15);
    y = (y ^ (y >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    y = (y ^ (y >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    y ^ (y >> 31)
}

/// Maps a hash to `[0, 1)` using its top 53 bits.
#[inline]
pub fn unit_f64(h: u64) -> f64 {
    (h >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
}
