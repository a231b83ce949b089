//! Seed plumbing shared by samplers, probes, and the experiment harness.
//!
//! All randomness in the crate flows through [`Seed`]. A seed owns a ChaCha8
//! stream (stable across platforms and releases), and child seeds are derived
//! with a SplitMix64 mix so that independent call sites can fan out from one
//! root seed without correlated streams.

use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// Root of a deterministic random stream.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Seed(pub u64);

impl Seed {
    /// Opens the ChaCha8 stream for this seed.
    pub fn rng(self) -> ChaCha8Rng {
        ChaCha8Rng::seed_from_u64(self.0)
    }

    /// Derives an independent child seed for the given stream index.
    ///
    /// Distinct `stream` values yield decorrelated children; the map is
    /// deterministic and platform-independent.
    pub fn derive(self, stream: u64) -> Seed {
        Seed(splitmix64(self.0 ^ splitmix64(stream.wrapping_add(0x9E37_79B9_7F4A_7C15))))
    }
}

impl From<u64> for Seed {
    fn from(v: u64) -> Seed {
        Seed(v)
    }
}

fn splitmix64(x: u64) -> u64 {
    let mut z = x.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}
