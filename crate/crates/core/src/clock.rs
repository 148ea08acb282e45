//! Time sources and budgets.
//!
//! The core crate has no access to a wall clock; callers pass something
//! implementing [`Clock`]. Searches poll [`Deadline::expired`] between units
//! of work, so no external interruption is needed.

use core::cell::Cell;
use core::sync::atomic::{AtomicU64, Ordering};
use core::time::Duration;

/// A monotonic time source.
pub trait Clock: Sync {
    /// Time elapsed since an arbitrary fixed origin.
    fn now(&self) -> Duration;
}

/// Limits for a single synthesis call.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SynthesisBudget {
    pub timeout: Duration,
    /// Cap on states popped by the enumerative search.
    pub max_states: usize,
}

impl SynthesisBudget {
    pub const DEFAULT_MAX_STATES: usize = 2_000_000;

    pub fn new(timeout: Duration) -> Self {
        assert!(!timeout.is_zero(), "timeout must be positive");
        SynthesisBudget {
            timeout,
            max_states: Self::DEFAULT_MAX_STATES,
        }
    }

    pub fn with_max_states(mut self, max_states: usize) -> Self {
        self.max_states = max_states;
        self
    }
}

/// A point in time after which work should stop.
#[derive(Clone, Copy)]
pub struct Deadline<'c> {
    clock: &'c dyn Clock,
    end: Duration,
}

impl<'c> Deadline<'c> {
    pub fn after(clock: &'c dyn Clock, timeout: Duration) -> Self {
        Deadline {
            clock,
            end: clock.now().saturating_add(timeout),
        }
    }

    /// A deadline that never expires (for oracles and tests).
    pub fn never(clock: &'c dyn Clock) -> Self {
        Deadline { clock, end: Duration::MAX }
    }

    pub fn expired(&self) -> bool {
        self.clock.now() >= self.end
    }

    pub fn remaining(&self) -> Duration {
        self.end.saturating_sub(self.clock.now())
    }

    pub fn now(&self) -> Duration {
        self.clock.now()
    }

    pub fn clock(&self) -> &'c dyn Clock {
        self.clock
    }
}

impl core::fmt::Debug for Deadline<'_> {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        f.debug_struct("Deadline").field("remaining", &self.remaining()).finish()
    }
}

/// A clock that advances by a fixed tick on every reading. Deterministic,
/// so tests can exercise timeouts without sleeping.
#[derive(Debug, Default)]
pub struct TickClock {
    nanos: AtomicU64,
    tick: u64,
}

impl TickClock {
    pub fn new(tick: Duration) -> Self {
        TickClock {
            nanos: AtomicU64::new(0),
            tick: tick.as_nanos() as u64,
        }
    }
}

impl Clock for TickClock {
    fn now(&self) -> Duration {
        Duration::from_nanos(self.nanos.fetch_add(self.tick, Ordering::Relaxed))
    }
}

/// Polls the clock only every `every` calls.
pub(crate) struct Throttle {
    left: Cell<u32>,
    every: u32,
}

impl Throttle {
    pub(crate) fn new(every: u32) -> Self {
        Throttle {
            left: Cell::new(0),
            every,
        }
    }

    pub(crate) fn expired(&self, deadline: &Deadline<'_>) -> bool {
        let left = self.left.get();
        if left > 0 {
            self.left.set(left - 1);
            return false;
        }
        self.left.set(self.every);
        deadline.expired()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn tick_clock_expires_deadline() {
        let clock = TickClock::new(Duration::from_millis(10));
        let d = Deadline::after(&clock, Duration::from_millis(25));
        assert!(!d.expired());
        assert!(!d.expired());
        assert!(d.expired());
        assert!(!Deadline::never(&clock).expired());
    }

    #[test]
    fn throttle_polls_sparsely() {
        let clock = TickClock::new(Duration::from_secs(1));
        let d = Deadline::after(&clock, Duration::from_millis(1500));
        let t = Throttle::new(3);
        // first poll reads the clock (t=1s, not expired), next three skip
        assert!(!t.expired(&d));
        assert!(!t.expired(&d));
        assert!(!t.expired(&d));
        assert!(!t.expired(&d));
        assert!(t.expired(&d));
    }

    #[test]
    #[should_panic(expected = "timeout must be positive")]
    fn zero_timeout_rejected() {
        SynthesisBudget::new(Duration::ZERO);
    }
}
