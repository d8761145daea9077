//! Wall-clock abstraction used for per-kernel-class timing.
//!
//! The solver reads time through a trait object so the algorithm core does
//! not depend on the OS. A solve driven with [`NullClock`] produces all-zero
//! timing columns at effectively no cost; the CLI injects [`StdClock`].

/// Monotonic time source. `now` returns seconds from an arbitrary origin.
pub trait Clock: Sync {
    fn now(&self) -> f64;
}

/// Clock that always reads zero; disables timing instrumentation.
#[derive(Clone, Copy, Debug, Default)]
pub struct NullClock;

impl Clock for NullClock {
    #[inline]
    fn now(&self) -> f64 {
        0.0
    }
}

pub(crate) static NULL_CLOCK: NullClock = NullClock;

/// Monotonic clock backed by `std::time::Instant`.
#[cfg(feature = "std")]
#[derive(Clone, Copy, Debug)]
pub struct StdClock {
    origin: std::time::Instant,
}

#[cfg(feature = "std")]
impl StdClock {
    pub fn new() -> Self {
        Self {
            origin: std::time::Instant::now(),
        }
    }
}

#[cfg(feature = "std")]
impl Default for StdClock {
    fn default() -> Self {
        Self::new()
    }
}

#[cfg(feature = "std")]
impl Clock for StdClock {
    #[inline]
    fn now(&self) -> f64 {
        self.origin.elapsed().as_secs_f64()
    }
}
