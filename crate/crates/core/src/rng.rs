//! Seeded, counter-based random streams.
//!
//! A [`RngSeed`] names a ChaCha8 key (`seed`) and a 64-bit stream id. Work that
//! is split across threads is cut into fixed-size chunks; chunk `c` reads the
//! keystream starting at word `c << CHUNK_WORD_SHIFT`, so results depend only on
//! the seed and never on the number of worker threads.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

pub type StreamRng = ChaCha8Rng;

/// Samples handled by one chunk of a parallel loop.
pub const CHUNK: usize = 1 << 12;

const CHUNK_WORD_SHIFT: u32 = 40;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct RngSeed {
    pub seed: u64,
    pub stream: u64,
}

impl RngSeed {
    pub const fn new(seed: u64, stream: u64) -> Self {
        Self { seed, stream }
    }

    pub fn rng(&self) -> StreamRng {
        let mut rng = ChaCha8Rng::seed_from_u64(self.seed);
        rng.set_stream(self.stream);
        rng
    }

    /// Generator positioned at the start of chunk `index`.
    pub fn chunk_rng(&self, index: usize) -> StreamRng {
        let mut rng = self.rng();
        rng.set_word_pos((index as u128) << CHUNK_WORD_SHIFT);
        rng
    }

    /// Independent stream for a named sub-task.
    pub fn derive(&self, tag: u64) -> RngSeed {
        RngSeed {
            seed: self.seed,
            stream: splitmix64(self.stream ^ splitmix64(tag.wrapping_add(0x9e37_79b9_7f4a_7c15))),
        }
    }
}

impl Default for RngSeed {
    fn default() -> Self {
        Self::new(0x5eed, 0)
    }
}

fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

/// Evaluates `f` for sample indices `0..m` in parallel and returns the results
/// in index order. Sample `i` draws from the generator of chunk `i / CHUNK`.
pub fn par_samples<X, F>(seed: RngSeed, m: usize, f: F) -> Vec<X>
where
    X: Send,
    F: Fn(&mut StreamRng, usize) -> X + Sync,
{
    let chunks = m.div_ceil(CHUNK);
    let per_chunk: Vec<Vec<X>> = (0..chunks)
        .into_par_iter()
        .map(|c| {
            let mut rng = seed.chunk_rng(c);
            let lo = c * CHUNK;
            let hi = (lo + CHUNK).min(m);
            (lo..hi).map(|i| f(&mut rng, i)).collect()
        })
        .collect();
    per_chunk.into_iter().flatten().collect()
}

/// Like [`par_samples`] but the per-sample result is fallible; the first error
/// in index order wins.
pub fn try_par_samples<X, E, F>(seed: RngSeed, m: usize, f: F) -> Result<Vec<X>, E>
where
    X: Send,
    E: Send,
    F: Fn(&mut StreamRng, usize) -> Result<X, E> + Sync,
{
    par_samples(seed, m, f).into_iter().collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::Rng;

    #[test]
    fn same_seed_same_sequence() {
        let s = RngSeed::new(7, 3);
        let a: Vec<u64> = (0..16).map(|_| s.rng().random()).collect();
        let mut r1 = s.rng();
        let mut r2 = s.rng();
        let b: Vec<u64> = (0..16).map(|_| r1.random()).collect();
        let c: Vec<u64> = (0..16).map(|_| r2.random()).collect();
        assert_eq!(b, c);
        assert!(a.iter().all(|&x| x == a[0]));
    }

    #[test]
    fn streams_differ() {
        let a: u64 = RngSeed::new(7, 0).rng().random();
        let b: u64 = RngSeed::new(7, 1).rng().random();
        let c: u64 = RngSeed::new(7, 0).derive(1).rng().random();
        assert_ne!(a, b);
        assert_ne!(a, c);
    }

    #[test]
    fn par_samples_independent_of_thread_count() {
        let seed = RngSeed::new(11, 2);
        let m = 3 * CHUNK + 17;
        let reference: Vec<f64> = par_samples(seed, m, |rng, _| rng.random());
        let pool = rayon::ThreadPoolBuilder::new().num_threads(1).build().unwrap();
        let single: Vec<f64> = pool.install(|| par_samples(seed, m, |rng, _| rng.random()));
        assert_eq!(reference, single);
    }
}
