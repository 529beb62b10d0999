//! Seeded random streams.
//!
//! Every Monte Carlo replicate owns one [`RngStream`] derived from
//! `(master seed, replicate index)`, so results never depend on how the
//! replicates are scheduled across threads.

use rand::{Rng, RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;

#[derive(Debug, Clone)]
pub struct RngStream(ChaCha8Rng);

impl RngStream {
    pub fn new(seed: u64) -> Self {
        RngStream(ChaCha8Rng::seed_from_u64(seed))
    }

    /// Independent stream for replicate `index` under `seed`.
    pub fn for_replicate(seed: u64, index: u64) -> Self {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        rng.set_stream(index);
        RngStream(rng)
    }

    /// Uniform draw in `(0, 1]`, the domain of the quantile functions.
    pub fn unit_open_closed(&mut self) -> f64 {
        1.0 - self.0.random::<f64>()
    }
}

impl RngCore for RngStream {
    fn next_u32(&mut self) -> u32 {
        self.0.next_u32()
    }

    fn next_u64(&mut self) -> u64 {
        self.0.next_u64()
    }

    fn fill_bytes(&mut self, dst: &mut [u8]) {
        self.0.fill_bytes(dst)
    }
}
