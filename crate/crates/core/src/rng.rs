//! Seeded, splittable random streams.
//!
//! Every stochastic operator takes an explicit [`RngStream`]. Streams are
//! ChaCha8 generators keyed by `(seed, stream_id)`, so independent workers
//! can each own a stream and still reproduce the same draws regardless of
//! scheduling.

use rand::{Rng, RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Poisson};

#[derive(Debug, Clone)]
pub struct RngStream {
    inner: ChaCha8Rng,
}

impl RngStream {
    pub fn new(seed: u64) -> Self {
        Self::derive(seed, 0)
    }

    /// Independent stream `stream_id` under the same master seed.
    pub fn derive(seed: u64, stream_id: u64) -> Self {
        let mut inner = ChaCha8Rng::seed_from_u64(seed);
        inner.set_stream(stream_id);
        Self { inner }
    }

    /// Uniform draw in `[low, high)`; returns `low` when the range is empty.
    pub fn uniform(&mut self, low: f64, high: f64) -> f64 {
        if high > low {
            self.inner.random_range(low..high)
        } else {
            low
        }
    }

    /// Uniform integer in the closed range `[low, high]`.
    pub fn int_range(&mut self, low: usize, high: usize) -> usize {
        assert!(low <= high, "empty integer range {low}..={high}");
        self.inner.random_range(low..=high)
    }

    /// Poisson draw with mean `lambda`. Panics unless `lambda > 0` and finite.
    pub fn poisson(&mut self, lambda: f64) -> u64 {
        let dist = Poisson::new(lambda).expect("poisson mean must be positive and finite");
        dist.sample(&mut self.inner) as u64
    }

    /// Bernoulli trial with success probability `p` (clamped to `[0, 1]`).
    pub fn chance(&mut self, p: f64) -> bool {
        self.inner.random::<f64>() < p.clamp(0.0, 1.0)
    }

    /// `count` distinct indices from `0..len`, in draw order.
    pub fn distinct_indices(&mut self, len: usize, count: usize) -> Vec<usize> {
        assert!(count <= len);
        rand::seq::index::sample(&mut self.inner, len, count).into_vec()
    }
}

impl RngCore for RngStream {
    fn next_u32(&mut self) -> u32 {
        self.inner.next_u32()
    }

    fn next_u64(&mut self) -> u64 {
        self.inner.next_u64()
    }

    fn fill_bytes(&mut self, dst: &mut [u8]) {
        self.inner.fill_bytes(dst)
    }
}
