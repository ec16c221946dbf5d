//! Per-thread counter of complex multiplications.
//!
//! The factorization kernels report every scalar complex multiply here so
//! tests can witness the asymptotic cost of an algorithm (e.g. the Schur
//! recursion is O(N²M³) while one recursive time-update is O(N·M³)).

use std::cell::Cell;

thread_local! {
    static MULTIPLIES: Cell<u64> = const { Cell::new(0) };
}

/// Reset this thread's multiply counter to zero.
pub fn reset_multiply_count() {
    MULTIPLIES.with(|c| c.set(0));
}

/// Complex multiplies recorded on this thread since the last reset.
pub fn multiply_count() -> u64 {
    MULTIPLIES.with(|c| c.get())
}

pub(crate) fn record_multiplies(n: u64) {
    MULTIPLIES.with(|c| c.set(c.get() + n));
}
