//! Deterministic stream management.
//!
//! Every path owns a counter-derived substream keyed by (master seed, path
//! index); checks own disjoint seed namespaces derived from the master seed
//! and a label. Results are therefore invariant to worker count and
//! reproducible from the master seed alone.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// FNV-1a, used for stable label-to-seed derivation (std hashers do not
/// guarantee stability across releases).
fn fnv1a(bytes: &[u8]) -> u64 {
    let mut h: u64 = 0xcbf29ce484222325;
    for &b in bytes {
        h ^= b as u64;
        h = h.wrapping_mul(0x100000001b3);
    }
    h
}

fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9e3779b97f4a7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58476d1ce4e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d049bb133111eb);
    z ^ (z >> 31)
}

#[derive(Clone, Copy, Debug)]
pub struct Streams {
    master: u64,
}

impl Streams {
    pub fn new(master: u64) -> Self {
        Streams { master }
    }

    pub fn master(&self) -> u64 {
        self.master
    }

    /// Disjoint namespace for an independent check or sub-experiment.
    pub fn namespaced(&self, label: &str) -> Streams {
        Streams {
            master: splitmix64(self.master ^ fnv1a(label.as_bytes())),
        }
    }

    /// Substream for one path. ChaCha streams are non-overlapping by
    /// construction, so paths are independent and order-free.
    pub fn path(&self, index: u64) -> ChaCha8Rng {
        let mut rng = ChaCha8Rng::seed_from_u64(self.master);
        rng.set_stream(index);
        rng
    }
}
