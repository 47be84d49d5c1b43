//! Per-window RNG seeds.

use sha2::{Digest, Sha256};

/// Hashes the master seed, a series id and window coordinates into a seed.
///
/// Seeds of different windows are independent of each other, so adding or
/// dropping one window leaves every other forecast unchanged.
pub fn derive_seed(master: u64, id: &str, parts: &[usize]) -> u64 {
    let mut hasher = Sha256::new();
    hasher.update(master.to_le_bytes());
    hasher.update((id.len() as u64).to_le_bytes());
    hasher.update(id.as_bytes());
    for &p in parts {
        hasher.update((p as u64).to_le_bytes());
    }
    let digest = hasher.finalize();
    let mut bytes = [0u8; 8];
    bytes.copy_from_slice(&digest[..8]);
    u64::from_le_bytes(bytes)
}
