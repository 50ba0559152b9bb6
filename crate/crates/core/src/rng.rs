//! Seeded substreams.
//!
//! Replicate `i` of any resampling loop draws from ChaCha8 keyed by the
//! run seed with stream id `i`, so replicates are independent of each other
//! and of the order (or thread) they run on.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub type StreamRng = ChaCha8Rng;

pub fn substream(seed: u64, index: u64) -> StreamRng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index);
    rng
}
