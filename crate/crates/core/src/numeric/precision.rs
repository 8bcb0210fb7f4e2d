use core::sync::atomic::{AtomicU32, Ordering};

use crate::error::{Error, Result};

/// Default ceiling for adaptive refinement.
pub const DEFAULT_MAX_BITS: u32 = 16384;

/// Starting precision for certified comparisons.
pub const START_BITS: u32 = 64;

static MAX_BITS: AtomicU32 = AtomicU32::new(DEFAULT_MAX_BITS);

/// Current global precision cap.
pub fn max_bits() -> u32 {
    MAX_BITS.load(Ordering::Relaxed)
}

/// Override the global precision cap (clamped to at least 64 bits).
pub fn set_max_bits(bits: u32) {
    MAX_BITS.store(bits.max(64), Ordering::Relaxed);
}

/// Runs `attempt` at `start`, `2*start`, ... bits until it decides or the cap is exceeded.
pub(crate) fn refine<T>(
    start: u32,
    mut attempt: impl FnMut(u32) -> Result<Option<T>>,
) -> Result<T> {
    let cap = max_bits();
    let mut bits = start.min(cap);
    loop {
        if let Some(found) = attempt(bits)? {
            return Ok(found);
        }
        if bits >= cap {
            return Err(Error::AmbiguousComparison { bits });
        }
        bits = bits.saturating_mul(2).min(cap);
    }
}
