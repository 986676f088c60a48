//! Seeding contract: every random draw in the crate comes from a PCG32
//! stream whose state is a [`Seed`], and per-round seeds are derived with a
//! SplitMix64 finalizer so that round `c` never depends on scheduling.

use rand::Rng;
use serde::{Deserialize, Serialize};

pub use rand_pcg::Pcg32;

const GOLDEN_GAMMA: u64 = 0x9E37_79B9_7F4A_7C15;
/// Default PCG32 stream selector from the reference implementation.
const PCG_STREAM: u64 = 0x0a02_bdbf_7bb3_c0a7;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Default, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Seed(pub u64);

impl Seed {
    pub fn rng(self) -> Pcg32 {
        Pcg32::new(self.0, PCG_STREAM)
    }

    pub fn derive(self, index: u64) -> Seed {
        derive_round_seed(self, index)
    }
}

impl From<u64> for Seed {
    fn from(v: u64) -> Self {
        Seed(v)
    }
}

/// One step of SplitMix64 from state `x`: advances by the golden gamma and
/// applies the avalanche finalizer. Bijective on `u64`.
pub fn splitmix64(x: u64) -> u64 {
    let mut z = x.wrapping_add(GOLDEN_GAMMA);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Injective in `round_idx` for a fixed master seed.
pub fn derive_round_seed(master: Seed, round_idx: u64) -> Seed {
    Seed(splitmix64(master.0 ^ round_idx))
}

/// Uniform integer in `0..n` by Lemire's multiply-and-reject method.
pub fn uniform_below<R: Rng + ?Sized>(rng: &mut R, n: u32) -> u32 {
    assert!(n > 0, "uniform_below requires n > 0");
    let mut m = u64::from(rng.next_u32()) * u64::from(n);
    if (m as u32) < n {
        let threshold = n.wrapping_neg() % n;
        while (m as u32) < threshold {
            m = u64::from(rng.next_u32()) * u64::from(n);
        }
    }
    (m >> 32) as u32
}
