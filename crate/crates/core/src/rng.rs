//! Deterministic random-stream derivation.
//!
//! Every stochastic component of a run draws from its own ChaCha8 stream,
//! keyed by `(base seed, domain, trial, round)`. Rounds and trials can
//! therefore execute in any order (or in parallel) and still reproduce the
//! same simulation bit for bit.

use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// Stream domains. Party choice streams are keyed off each party's own seed;
/// the physics and adversary streams are keyed off the scenario seed.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Domain {
    ChoiceA,
    ChoiceB,
    World,
    Eve,
}

impl Domain {
    fn tag(self) -> u64 {
        match self {
            Domain::ChoiceA => 0x01,
            Domain::ChoiceB => 0x02,
            Domain::World => 0x03,
            Domain::Eve => 0x04,
        }
    }
}

/// The three base seeds a run derives every stream from.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct RunSeeds {
    /// Drives party A's detector choices.
    pub party_a: u64,
    /// Drives party B's detector choices.
    pub party_b: u64,
    /// Drives coincidence outcomes, delay samples and the eavesdropper.
    pub world: u64,
}

impl RunSeeds {
    /// Derive an independent seed set for one trial of a multi-trial batch.
    pub fn for_trial(&self, trial: u64) -> RunSeeds {
        RunSeeds {
            party_a: mix64(self.party_a ^ mix64(trial.wrapping_add(0x5113_54a1))),
            party_b: mix64(self.party_b ^ mix64(trial.wrapping_add(0x9a3e_77c3))),
            world: mix64(self.world ^ mix64(trial.wrapping_add(0xc2b2_ae35))),
        }
    }
}

/// SplitMix64 finalizer; bijective on u64.
pub fn mix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

/// Build the ChaCha8 stream for `(seed, domain, round)`.
///
/// The four key lanes are each diffused independently, so distinct inputs
/// always produce distinct 256-bit keys.
pub fn derive_rng(seed: u64, domain: Domain, round: u64) -> ChaCha8Rng {
    let lanes = [
        mix64(seed),
        mix64(domain.tag().wrapping_add(0x1000_0000_0000_0001)),
        mix64(round.wrapping_add(0x2000_0000_0000_0002)),
        mix64(seed ^ round.rotate_left(17) ^ domain.tag().rotate_left(41)),
    ];
    let mut key = [0u8; 32];
    for (i, lane) in lanes.iter().enumerate() {
        key[i * 8..(i + 1) * 8].copy_from_slice(&lane.to_le_bytes());
    }
    ChaCha8Rng::from_seed(key)
}
