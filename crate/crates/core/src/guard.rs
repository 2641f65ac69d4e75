//! Process-wide dimension guard.
//!
//! Constructions whose largest degreewise dimension would exceed the guard are
//! refused with [`Error::GuardExceeded`] instead of being attempted.

use std::sync::atomic::{AtomicUsize, Ordering};

use crate::error::{Error, Result};

pub const DEFAULT_GUARD: usize = 4096;

static GUARD: AtomicUsize = AtomicUsize::new(DEFAULT_GUARD);

pub fn dimension_guard() -> usize {
    GUARD.load(Ordering::Relaxed)
}

/// Set the guard; meant to be called once at startup.
pub fn set_dimension_guard(bound: usize) {
    GUARD.store(bound.max(1), Ordering::Relaxed);
}

pub(crate) fn check(what: &str, needed: usize) -> Result<()> {
    let guard = dimension_guard();
    if needed > guard {
        return Err(Error::GuardExceeded { what: what.to_string(), needed, guard });
    }
    Ok(())
}
