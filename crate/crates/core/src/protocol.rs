//! The key generation protocol.
//!
//! 1. Both parties fix complementary frequencies ω₁ + ω₂ = ω₀. Each round,
//!    each party independently picks the wide-band detector or one of the
//!    two narrow-band ones.
//! 2. Rounds where at least one detector did not fire are discarded.
//! 3. Each party announces wide/narrow per round on the public channel —
//!    never which narrow detector.
//! 4. Fired narrow–narrow rounds form the key: if A used ω₁, B can only
//!    have fired on ω₂ (logical 1), and vice versa (logical 0). Fired
//!    wide–wide rounds are set aside for the eavesdropping test; fired
//!    mixed rounds are useless and dropped.
//!
//! Round execution is pure given the round index and the base seeds, so
//! rounds replay identically in any order.

use rand::Rng;
use serde_json::json;
use thiserror::Error;

use crate::adversary::{self, AdversaryConfig, InterceptOutcome};
use crate::channel::{
    self, ChannelError, ChannelSpec, DetectorClass, Party, Payload, PublicMessage, Transcript,
    WireError,
};
use crate::physics::{self, DetectorSpec, FireOutcome, SourceKind, SourceSpec};
use crate::rng::{derive_rng, Domain, RunSeeds};
use crate::validate::ValidationReport;

/// A party's per-round detector selection.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DetectorChoice {
    Wide,
    /// The narrow detector at ω₁.
    NarrowLow,
    /// The narrow detector at ω₂.
    NarrowHigh,
}

impl DetectorChoice {
    pub fn class(self) -> DetectorClass {
        match self {
            DetectorChoice::Wide => DetectorClass::Wide,
            _ => DetectorClass::Narrow,
        }
    }

    pub fn is_narrow(self) -> bool {
        self != DetectorChoice::Wide
    }

    pub fn as_str(self) -> &'static str {
        match self {
            DetectorChoice::Wide => "wide",
            DetectorChoice::NarrowLow => "narrow_low",
            DetectorChoice::NarrowHigh => "narrow_high",
        }
    }

    fn from_str(s: &str) -> Option<Self> {
        match s {
            "wide" => Some(DetectorChoice::Wide),
            "narrow_low" => Some(DetectorChoice::NarrowLow),
            "narrow_high" => Some(DetectorChoice::NarrowHigh),
            _ => None,
        }
    }
}

/// One party's detectors and choice distribution.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PartyConfig {
    /// Narrow-band detector centered on ω₁.
    pub narrow_low: DetectorSpec,
    /// Narrow-band detector centered on ω₂.
    pub narrow_high: DetectorSpec,
    pub wide: DetectorSpec,
    /// Probability of picking the wide detector; the two narrow detectors
    /// split the rest evenly.
    pub p_wide: f64,
    pub rng_seed: u64,
}

impl PartyConfig {
    pub fn detector(&self, choice: DetectorChoice) -> &DetectorSpec {
        match choice {
            DetectorChoice::Wide => &self.wide,
            DetectorChoice::NarrowLow => &self.narrow_low,
            DetectorChoice::NarrowHigh => &self.narrow_high,
        }
    }

    pub fn frequency_split(&self) -> f64 {
        (self.narrow_high.center_frequency - self.narrow_low.center_frequency).abs()
    }

    pub fn validate(&self, source: &SourceSpec) -> ValidationReport {
        let mut report = ValidationReport::new();
        report.absorb("narrow_low", self.narrow_low.validate());
        report.absorb("narrow_high", self.narrow_high.validate());
        report.absorb("wide", self.wide.validate());
        if self.narrow_low.center_frequency + self.narrow_high.center_frequency
            != source.sum_frequency
        {
            report.error(format!(
                "narrow centers must satisfy omega_1 + omega_2 = omega_0 exactly \
                 ({} + {} != {})",
                self.narrow_low.center_frequency,
                self.narrow_high.center_frequency,
                source.sum_frequency
            ));
        }
        if !(self.p_wide > 0.0 && self.p_wide < 1.0) {
            report.error(format!(
                "p_wide must lie strictly in (0, 1), got {}",
                self.p_wide
            ));
        }
        let split = self.frequency_split();
        if split > 0.0 {
            // Role checks: narrow detectors must resolve the two
            // frequencies, the wide one must not.
            for (name, det) in [
                ("narrow_low", &self.narrow_low),
                ("narrow_high", &self.narrow_high),
            ] {
                if det.bandwidth * 10.0 > split {
                    report.warn(format!(
                        "{name} bandwidth {} s^-1 is not well below the frequency split {} s^-1; \
                         it may not resolve omega_1 from omega_2",
                        det.bandwidth, split
                    ));
                }
            }
            if self.wide.bandwidth < split * 10.0 {
                report.warn(format!(
                    "wide bandwidth {} s^-1 is not well above the frequency split {} s^-1",
                    self.wide.bandwidth, split
                ));
            }
        }
        for (name, det) in [
            ("narrow_low", &self.narrow_low),
            ("narrow_high", &self.narrow_high),
            ("wide", &self.wide),
        ] {
            if let Some(warning) = source.check_detector(det) {
                report.warn(format!("{name}: {warning}"));
            }
        }
        report
    }
}

/// Everything one round produced, as recorded by the simulation.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RoundRecord {
    pub round_index: u64,
    pub choice_a: DetectorChoice,
    pub choice_b: DetectorChoice,
    /// Present iff both detectors fired; a no-fire round carries no timing.
    pub timing: Option<RoundTiming>,
}

/// Reduced registration moments of a fired round.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RoundTiming {
    /// A's reduced registration time, seconds.
    pub t_a: f64,
    /// B's reduced registration time, seconds.
    pub t_b: f64,
}

impl RoundTiming {
    /// T = t_B − t_A.
    pub fn delay(&self) -> f64 {
        self.t_b - self.t_a
    }
}

impl RoundRecord {
    pub fn fired(&self) -> bool {
        self.timing.is_some()
    }

    /// T = t_B − t_A, present iff the round fired.
    pub fn delay(&self) -> Option<f64> {
        self.timing.map(|t| t.delay())
    }

    /// Event-log value for this record. The delay field is included for
    /// readability but is derived; decoding recomputes it from t_a and t_b.
    pub fn to_log_value(&self) -> serde_json::Value {
        match self.timing {
            Some(t) => json!({
                "choice_a": self.choice_a.as_str(),
                "choice_b": self.choice_b.as_str(),
                "fired": true,
                "t_a": channel::format_seconds(t.t_a),
                "t_b": channel::format_seconds(t.t_b),
                "delay": channel::format_seconds(t.delay()),
            }),
            None => json!({
                "choice_a": self.choice_a.as_str(),
                "choice_b": self.choice_b.as_str(),
                "fired": false,
            }),
        }
    }

    pub fn from_log_value(round_index: u64, value: &serde_json::Value) -> Result<Self, WireError> {
        let bad = |detail: &str| WireError::BadValue {
            kind: "round".to_string(),
            detail: detail.to_string(),
        };
        let choice = |field: &str| -> Result<DetectorChoice, WireError> {
            value[field]
                .as_str()
                .and_then(DetectorChoice::from_str)
                .ok_or_else(|| bad(&format!("bad {field}")))
        };
        let choice_a = choice("choice_a")?;
        let choice_b = choice("choice_b")?;
        let fired = value["fired"].as_bool().ok_or_else(|| bad("bad fired"))?;
        let timing = if fired {
            let time = |field: &str| -> Result<f64, WireError> {
                value[field]
                    .as_str()
                    .and_then(|s| s.parse().ok())
                    .ok_or_else(|| bad(&format!("bad {field}")))
            };
            Some(RoundTiming {
                t_a: time("t_a")?,
                t_b: time("t_b")?,
            })
        } else {
            None
        };
        Ok(RoundRecord {
            round_index,
            choice_a,
            choice_b,
            timing,
        })
    }
}

/// Pick a detector: wide with probability p_wide, otherwise a fair coin
/// between the two narrow ones. One uniform draw.
pub fn choose_detector<R: Rng + ?Sized>(cfg: &PartyConfig, rng: &mut R) -> DetectorChoice {
    let u = rng.random::<f64>();
    if u < cfg.p_wide {
        DetectorChoice::Wide
    } else if u < cfg.p_wide + (1.0 - cfg.p_wide) * 0.5 {
        DetectorChoice::NarrowLow
    } else {
        DetectorChoice::NarrowHigh
    }
}

#[derive(Debug, Error, PartialEq)]
pub enum ProtocolError {
    /// Only narrow choices map to key bits.
    #[error("a wide-band measurement carries no key bit")]
    WideHasNoBit,
}

/// The ω₁/ω₂ ↔ bit convention of protocol step 4. A firing on ω₁ tells A
/// that B fired on ω₂: logical 1. The mappings are complementary so the two
/// parties' bits agree.
pub fn bit_from_choice(own_choice: DetectorChoice, party: Party) -> Result<u8, ProtocolError> {
    match (party, own_choice) {
        (_, DetectorChoice::Wide) => Err(ProtocolError::WideHasNoBit),
        (Party::A, DetectorChoice::NarrowLow) | (Party::B, DetectorChoice::NarrowHigh) => Ok(1),
        (Party::A, DetectorChoice::NarrowHigh) | (Party::B, DetectorChoice::NarrowLow) => Ok(0),
    }
}

/// A round plus the eavesdropper's private outcome, which exists only in
/// omniscient logs.
#[derive(Debug, Clone, PartialEq)]
pub struct RoundOutput {
    pub record: RoundRecord,
    pub intercept: Option<InterceptOutcome>,
}

/// Execute one protocol round.
///
/// Both parties choose detectors from their own seeded streams; the
/// coincidence outcome comes from the world stream; an enabled adversary
/// consumes only her own stream, so disabling her reproduces the
/// no-adversary run bit for bit.
pub fn run_round(
    round_index: u64,
    party_a: &PartyConfig,
    party_b: &PartyConfig,
    source: &SourceSpec,
    channel_spec: &ChannelSpec,
    adversary: Option<&AdversaryConfig>,
    seeds: &RunSeeds,
) -> RoundOutput {
    let mut rng_a = derive_rng(seeds.party_a, Domain::ChoiceA, round_index);
    let mut rng_b = derive_rng(seeds.party_b, Domain::ChoiceB, round_index);
    let choice_a = choose_detector(party_a, &mut rng_a);
    let choice_b = choose_detector(party_b, &mut rng_b);
    let det_a = party_a.detector(choice_a);
    let det_b = party_b.detector(choice_b);

    let mut world = derive_rng(seeds.world, Domain::World, round_index);
    let eve = adversary.filter(|cfg| cfg.enabled);

    let (outcome, intercept) = match eve {
        None => (
            physics::fire_outcome(det_a, det_b, source, &mut world),
            None,
        ),
        Some(cfg) => {
            // Eve's measurement collapses the pair: the tapped photon takes
            // a definite frequency, its partner the exact complement, and
            // the joint correlation is replaced by two single-photon
            // acceptances.
            let photon_is_low = world.random::<f64>() < 0.5;
            let tapped_frequency = if photon_is_low {
                party_a.narrow_low.center_frequency
            } else {
                party_a.narrow_high.center_frequency
            };
            let mut eve_rng = derive_rng(seeds.world, Domain::Eve, round_index);
            let intercept = adversary::intercept(tapped_frequency, cfg, source, &mut eve_rng);
            let outcome = match intercept.resent_frequency {
                None => FireOutcome::NoCoincidence,
                Some(resent) => {
                    let partner = source.sum_frequency - tapped_frequency;
                    let (freq_a, freq_b) = match cfg.tapped_arm {
                        Party::A => (resent, partner),
                        Party::B => (partner, resent),
                    };
                    let p = physics::definite_frequency_acceptance(freq_a, det_a, source)
                        * physics::definite_frequency_acceptance(freq_b, det_b, source);
                    if world.random::<f64>() < p {
                        let dist = physics::delay_distribution(det_a, det_b);
                        FireOutcome::Coincidence {
                            delay: physics::sample_delay(&dist, &mut world),
                        }
                    } else {
                        FireOutcome::NoCoincidence
                    }
                }
            };
            (outcome, Some(intercept))
        }
    };

    let timing = match outcome {
        FireOutcome::NoCoincidence => None,
        FireOutcome::Coincidence { delay } => {
            // Split the relative delay into per-arm registration latencies
            // (one of them zero), then add whatever each arm suffered.
            let mut latency_a = (-delay).max(0.0);
            let mut latency_b = delay.max(0.0);
            if let (Some(cfg), Some(out)) = (eve, intercept.as_ref()) {
                match cfg.tapped_arm {
                    Party::A => latency_a = adversary::apply_to_round(out, latency_a),
                    Party::B => latency_b = adversary::apply_to_round(out, latency_b),
                }
            }
            if source.kind == SourceKind::DualSinglePhoton && source.emission_time_jitter > 0.0 {
                latency_a += world.random::<f64>() * source.emission_time_jitter;
                latency_b += world.random::<f64>() * source.emission_time_jitter;
            }
            let raw_a = channel_spec.distance_a / channel_spec.light_speed + latency_a;
            let raw_b = channel_spec.distance_b / channel_spec.light_speed + latency_b;
            Some(RoundTiming {
                t_a: channel_spec.register(Party::A, raw_a),
                t_b: channel_spec.register(Party::B, raw_b),
            })
        }
    };

    RoundOutput {
        record: RoundRecord {
            round_index,
            choice_a,
            choice_b,
            timing,
        },
        intercept,
    }
}

/// Step 3: publish detector class and fired flag for every round, in round
/// order, A before B. Narrow center frequencies never appear.
pub fn announce(records: &[RoundRecord], transcript: &mut Transcript) -> Result<(), ChannelError> {
    for record in records {
        let fired = record.fired();
        for (party, choice) in [(Party::A, record.choice_a), (Party::B, record.choice_b)] {
            transcript.exchange(PublicMessage::new(
                record.round_index,
                party,
                Payload::DetectorClass(choice.class()),
            ))?;
            transcript.exchange(PublicMessage::new(
                record.round_index,
                party,
                Payload::Fired(fired),
            ))?;
        }
    }
    Ok(())
}

/// Publish both parties' reduced registration times for the test rounds,
/// making T = t_B − t_A public. Wide-band rounds carry no frequency
/// information, so this leaks nothing about the key.
pub fn disclose_test_times(
    records: &[RoundRecord],
    test_rounds: &[u64],
    transcript: &mut Transcript,
) -> Result<(), ChannelError> {
    for record in records {
        if !test_rounds.contains(&record.round_index) {
            continue;
        }
        if let Some(timing) = record.timing {
            transcript.exchange(PublicMessage::new(
                record.round_index,
                Party::A,
                Payload::TestDisclosure(timing.t_a),
            ))?;
            transcript.exchange(PublicMessage::new(
                record.round_index,
                Party::B,
                Payload::TestDisclosure(timing.t_b),
            ))?;
        }
    }
    Ok(())
}

/// The sifted outcome: each party's bit string plus the public partition of
/// round indices.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct SiftedKey {
    pub bits_a: Vec<u8>,
    pub bits_b: Vec<u8>,
    /// Fired narrow–narrow rounds, one per key bit.
    pub source_rounds: Vec<u64>,
    /// Fired wide–wide rounds, reserved for the delay test.
    pub test_rounds: Vec<u64>,
}

impl SiftedKey {
    /// Number of key-bit positions where the parties disagree. Omniscient:
    /// the parties themselves cannot evaluate this without sacrificing bits.
    pub fn disagreements(&self) -> usize {
        self.bits_a
            .iter()
            .zip(&self.bits_b)
            .filter(|(a, b)| a != b)
            .count()
    }
}

#[derive(Debug, Error, PartialEq)]
pub enum SiftError {
    /// A partition came out empty. The partial sift is carried along: when
    /// only the key partition is empty the delay test can still run.
    #[error(
        "insufficient rounds: {} (the run cannot proceed past sifting{})",
        match (.key_empty, .test_empty) {
            (true, true) => "no key rounds and no test rounds survived",
            (true, false) => "no key rounds survived",
            _ => "no test rounds survived",
        },
        if *.test_empty { "" } else { "; the delay test is still possible" }
    )]
    InsufficientRounds {
        sifted: SiftedKey,
        key_empty: bool,
        test_empty: bool,
    },
}

impl SiftError {
    /// Recover whatever sifting did produce.
    pub fn into_partial(self) -> SiftedKey {
        match self {
            SiftError::InsufficientRounds { sifted, .. } => sifted,
        }
    }
}

/// Per-round public facts extracted from the transcript.
#[derive(Debug, Clone, Copy, Default)]
struct Announced {
    class_a: Option<DetectorClass>,
    class_b: Option<DetectorClass>,
    fired_a: bool,
    fired_b: bool,
}

/// Step 2 and step 4: keep fired rounds, turn narrow–narrow rounds into key
/// bits and wide–wide rounds into the test partition; drop mixed rounds.
///
/// The partition is computed from the announcements alone, so both parties
/// derive identical partitions independently; only the bit values come from
/// private records.
pub fn sift(records: &[RoundRecord], transcript: &Transcript) -> Result<SiftedKey, SiftError> {
    let mut announced: std::collections::BTreeMap<u64, Announced> = Default::default();
    for message in transcript.messages() {
        let entry = announced.entry(message.round_index).or_default();
        match (message.sender, message.payload) {
            (Party::A, Payload::DetectorClass(c)) => entry.class_a = Some(c),
            (Party::B, Payload::DetectorClass(c)) => entry.class_b = Some(c),
            (Party::A, Payload::Fired(f)) => entry.fired_a = f,
            (Party::B, Payload::Fired(f)) => entry.fired_b = f,
            _ => {}
        }
    }

    let mut key = SiftedKey::default();
    for record in records {
        let Some(ann) = announced.get(&record.round_index) else {
            continue; // never announced: unusable
        };
        if !(ann.fired_a && ann.fired_b) {
            continue; // step 2: discard if any detector stayed silent
        }
        match (ann.class_a, ann.class_b) {
            (Some(DetectorClass::Narrow), Some(DetectorClass::Narrow)) => {
                let bit_a = bit_from_choice(record.choice_a, Party::A)
                    .expect("announced narrow, so the choice is narrow");
                let bit_b = bit_from_choice(record.choice_b, Party::B)
                    .expect("announced narrow, so the choice is narrow");
                key.bits_a.push(bit_a);
                key.bits_b.push(bit_b);
                key.source_rounds.push(record.round_index);
            }
            (Some(DetectorClass::Wide), Some(DetectorClass::Wide)) => {
                key.test_rounds.push(record.round_index);
            }
            _ => {} // mixed or unannounced class: discarded
        }
    }

    let key_empty = key.source_rounds.is_empty();
    let test_empty = key.test_rounds.is_empty();
    if key_empty || test_empty {
        Err(SiftError::InsufficientRounds {
            sifted: key,
            key_empty,
            test_empty,
        })
    } else {
        Ok(key)
    }
}
