//! Discrete-event Monte Carlo simulator for a quantum key distribution
//! protocol whose security rests on the time-energy uncertainty relation.
//!
//! Two parties detect the halves of a biphoton with randomly chosen wide- or
//! narrow-band detectors. Fired narrow-narrow rounds yield perfectly
//! correlated key bits, because only complementary frequencies ω₁ + ω₂ = ω₀
//! fire jointly; fired wide-wide rounds have reduced registration times that
//! coincide to within 1/γ, and their publicly disclosed delays T = t_B − t_A
//! form the eavesdropping test. An intercept-resend attacker needs a
//! frequency resolution γ★ below the split |ω₂ − ω₁| to read bits, and the
//! uncertainty relation then forces a measurement delay of order 1/γ★ that
//! the delay test sees.
//!
//! Module map:
//!
//! - [`physics`] — the biphoton correlation function, coincidence
//!   probability, and the sampleable delay distribution
//! - [`channel`] — reduced registration times, the public transcript, and
//!   the newline-delimited wire format
//! - [`protocol`] — detector choices, round execution, announcements,
//!   sifting, and the bit mapping
//! - [`adversary`] — the uncertainty-limited intercept-resend attacker
//! - [`stats`] — the delay test, detection-probability estimation, and run
//!   summaries
//! - [`scenario`] / [`runner`] — configuration files, end-to-end runs,
//!   parameter sweeps, and on-disk artifacts
//!
//! Conventions: ħ = 1, angular frequencies in s⁻¹, times in seconds.

pub mod adversary;
pub mod channel;
pub mod physics;
pub mod protocol;
pub mod rng;
pub mod runner;
pub mod scenario;
pub mod stats;
pub mod validate;

pub use adversary::{AdversaryConfig, EveDelayModel, EveStrategy, InterceptOutcome};
pub use channel::{ChannelSpec, DetectorClass, Party, Payload, PublicMessage, Transcript};
pub use physics::{DelayDistribution, DetectorSpec, FireOutcome, SourceKind, SourceSpec};
pub use protocol::{DetectorChoice, PartyConfig, RoundRecord, SiftedKey};
pub use runner::{run_trial, TrialResult};
pub use scenario::ScenarioConfig;
pub use stats::{Decision, DecisionRule, RunSummary, TestVerdict};
