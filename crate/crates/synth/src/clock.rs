//! Wall-clock time and thread-backed part execution.

use std::time::{Duration, Instant};

use regsynth_core::clock::Clock;
use regsynth_core::framework::{PartExecutor, PartOutcome};

/// Monotonic wall clock measured from construction.
#[derive(Debug, Clone, Copy)]
pub struct StdClock {
    origin: Instant,
}

impl StdClock {
    pub fn new() -> Self {
        StdClock { origin: Instant::now() }
    }
}

impl Default for StdClock {
    fn default() -> Self {
        StdClock::new()
    }
}

impl Clock for StdClock {
    fn now(&self) -> Duration {
        self.origin.elapsed()
    }
}

/// Runs every part job on its own scoped thread.
#[derive(Debug, Clone, Copy, Default)]
pub struct Threads;

impl PartExecutor for Threads {
    fn run(&self, jobs: usize, job: &(dyn Fn(usize) -> PartOutcome + Sync)) -> Vec<PartOutcome> {
        std::thread::scope(|s| {
            let handles: Vec<_> = (0..jobs).map(|k| s.spawn(move || job(k))).collect();
            handles
                .into_iter()
                .map(|h| h.join().expect("part job panicked"))
                .collect()
        })
    }
}
