use crate::clock::Clock;

/// Kernel classes timed inside the solve loop.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum KernelClass {
    /// Dense vector-vector work: steps, reductions, residual norms.
    K1 = 0,
    /// Mixed sparse/dense matrix-vector products.
    K2 = 1,
    /// Fused KKT compression assembly.
    K3 = 2,
    /// Dense factorization and triangular solves.
    K4 = 3,
}

/// Accumulates wall-clock seconds per kernel class through an injected
/// clock. With [`crate::clock::NullClock`] the accumulators stay zero.
pub struct KernelTimers<'a> {
    clock: &'a dyn Clock,
    acc: [f64; 4],
}

impl<'a> KernelTimers<'a> {
    pub fn new(clock: &'a dyn Clock) -> Self {
        Self {
            clock,
            acc: [0.0; 4],
        }
    }

    #[inline]
    pub fn time<R>(&mut self, class: KernelClass, f: impl FnOnce() -> R) -> R {
        let t0 = self.clock.now();
        let r = f();
        self.acc[class as usize] += self.clock.now() - t0;
        r
    }

    pub fn seconds(&self, class: KernelClass) -> f64 {
        self.acc[class as usize]
    }

    pub fn reset(&mut self) {
        self.acc = [0.0; 4];
    }
}
