//! Propagation timing and the authenticated public channel.
//!
//! Raw detection moments are reduced by the one-way propagation delay,
//! t = t⁰ − r/c, aligning both parties to the source's clock. Everything the
//! parties say to each other goes through a shared append-only transcript:
//! it is authenticated but public, so the eavesdropper reads every message.
//! Detector-class announcements deliberately cannot carry the narrow center
//! frequency — the payload type has no field for it.
//!
//! Wire format: newline-delimited records, one JSON object per line with
//! fields `{round, sender, kind, value}` in that order. Times are serialized
//! as decimal seconds with 12 significant digits, and every time entering a
//! record is normalized to that precision first so encoding round-trips
//! exactly.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::validate::ValidationReport;

/// One of the two legitimate parties.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Party {
    A,
    B,
}

impl Party {
    pub fn as_str(self) -> &'static str {
        match self {
            Party::A => "A",
            Party::B => "B",
        }
    }

    pub fn other(self) -> Party {
        match self {
            Party::A => Party::B,
            Party::B => Party::A,
        }
    }
}

impl std::fmt::Display for Party {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Line geometry and clock granularity.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ChannelSpec {
    /// Source-to-A distance r_A, meters.
    pub distance_a: f64,
    /// Source-to-B distance r_B, meters.
    pub distance_b: f64,
    /// Velocity of light in the medium, m/s. Defaults to 3e8 (the vacuum
    /// value reproduces the 10⁻⁵ s ↔ 3 km conversion); use ~2e8 for fiber.
    pub light_speed: f64,
    /// Clock granularity, seconds; 0 disables quantization. The default
    /// 1e-10 sits below the 1e-9 s wide-band timing scale, so quantization
    /// never masks an eavesdropper's delay.
    pub timing_resolution: f64,
}

impl Default for ChannelSpec {
    fn default() -> Self {
        ChannelSpec {
            distance_a: 0.0,
            distance_b: 0.0,
            light_speed: 3e8,
            timing_resolution: 1e-10,
        }
    }
}

impl ChannelSpec {
    pub fn distance(&self, party: Party) -> f64 {
        match party {
            Party::A => self.distance_a,
            Party::B => self.distance_b,
        }
    }

    /// Full registration pipeline for one arm: reduce by the propagation
    /// delay, then quantize to the clock granularity.
    pub fn register(&self, party: Party, raw_time: f64) -> f64 {
        let reduced = reduce_time(raw_time, self.distance(party), self.light_speed);
        quantize(reduced, self.timing_resolution)
    }

    pub fn validate(&self) -> ValidationReport {
        let mut report = ValidationReport::new();
        if !self.distance_a.is_finite() || self.distance_a < 0.0 {
            report.error(format!(
                "distance_a must be non-negative, got {}",
                self.distance_a
            ));
        }
        if !self.distance_b.is_finite() || self.distance_b < 0.0 {
            report.error(format!(
                "distance_b must be non-negative, got {}",
                self.distance_b
            ));
        }
        if !self.light_speed.is_finite() || self.light_speed <= 0.0 {
            report.error(format!(
                "light_speed must be positive, got {}",
                self.light_speed
            ));
        }
        if !self.timing_resolution.is_finite() || self.timing_resolution < 0.0 {
            report.error(format!(
                "timing_resolution must be non-negative, got {}",
                self.timing_resolution
            ));
        }
        report
    }
}

/// Reduced registration moment: t = t⁰ − r/c.
pub fn reduce_time(raw_time: f64, distance: f64, light_speed: f64) -> f64 {
    raw_time - distance / light_speed
}

/// Snap to the clock grid; resolution 0 means no quantization.
pub fn quantize(time: f64, resolution: f64) -> f64 {
    if resolution > 0.0 {
        (time / resolution).round() * resolution
    } else {
        time
    }
}

/// Serialize a time as decimal seconds with 12 significant digits.
pub fn format_seconds(time: f64) -> String {
    format!("{time:.11e}")
}

/// The fixed point of format-then-parse at wire precision. Applied to every
/// time entering a public message, so decode(encode(m)) == m holds bitwise.
pub fn normalize_seconds(time: f64) -> f64 {
    format_seconds(time)
        .parse()
        .expect("formatted f64 always parses")
}

/// What a party may say on the public channel. There is intentionally no
/// variant that can name which narrow detector (ω₁ or ω₂) was used.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Payload {
    /// Wide- or narrow-band, never the center frequency.
    DetectorClass(DetectorClass),
    Fired(bool),
    /// The sender's reduced registration time for a test round, seconds.
    /// With both parties' disclosures public, T = t_B − t_A is public.
    TestDisclosure(f64),
    Verdict(Verdict),
}

impl Payload {
    pub fn kind(&self) -> &'static str {
        match self {
            Payload::DetectorClass(_) => "detector_class",
            Payload::Fired(_) => "fired",
            Payload::TestDisclosure(_) => "test_disclosure",
            Payload::Verdict(_) => "verdict",
        }
    }
}

/// The announced detector class.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DetectorClass {
    Wide,
    Narrow,
}

impl DetectorClass {
    pub fn as_str(self) -> &'static str {
        match self {
            DetectorClass::Wide => "wide",
            DetectorClass::Narrow => "narrow",
        }
    }
}

/// The publicly announced outcome of the delay test.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Verdict {
    Clean,
    Compromised,
}

impl Verdict {
    pub fn as_str(self) -> &'static str {
        match self {
            Verdict::Clean => "clean",
            Verdict::Compromised => "compromised",
        }
    }
}

/// One record on the public channel.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PublicMessage {
    pub round_index: u64,
    pub sender: Party,
    pub payload: Payload,
}

impl PublicMessage {
    pub fn new(round_index: u64, sender: Party, payload: Payload) -> Self {
        let payload = match payload {
            // Times are normalized on entry so wire encoding is lossless.
            Payload::TestDisclosure(t) => Payload::TestDisclosure(normalize_seconds(t)),
            other => other,
        };
        PublicMessage {
            round_index,
            sender,
            payload,
        }
    }
}

#[derive(Debug, Error, PartialEq)]
pub enum ChannelError {
    /// A sender's round index regressed within one message kind; each
    /// sender's stream of a given kind only accepts monotone non-decreasing
    /// indices. (A later protocol phase — e.g. a test disclosure — may
    /// reference an earlier round than the last announcement, so the
    /// constraint is per kind.)
    #[error(
        "ordering violation: sender {sender} sent {kind} for round {attempted} after round {last}"
    )]
    OrderingViolation {
        sender: Party,
        kind: &'static str,
        last: u64,
        attempted: u64,
    },
}

/// The shared append-only transcript. Everyone — including the adversary —
/// can read it; appends are totally ordered.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct Transcript {
    messages: Vec<PublicMessage>,
    last_round: std::collections::HashMap<(Party, &'static str), u64>,
}

impl Transcript {
    pub fn new() -> Self {
        Self::default()
    }

    /// Append one message, enforcing per-sender per-kind round monotonicity.
    pub fn exchange(&mut self, message: PublicMessage) -> Result<(), ChannelError> {
        let kind = message.payload.kind();
        if let Some(&last) = self.last_round.get(&(message.sender, kind)) {
            if message.round_index < last {
                return Err(ChannelError::OrderingViolation {
                    sender: message.sender,
                    kind,
                    last,
                    attempted: message.round_index,
                });
            }
        }
        self.last_round
            .insert((message.sender, kind), message.round_index);
        self.messages.push(message);
        Ok(())
    }

    pub fn messages(&self) -> &[PublicMessage] {
        &self.messages
    }

    pub fn len(&self) -> usize {
        self.messages.len()
    }

    pub fn is_empty(&self) -> bool {
        self.messages.is_empty()
    }

    /// Encode the whole transcript in the wire format, one record per line.
    pub fn to_wire(&self) -> String {
        let mut out = String::new();
        for message in &self.messages {
            out.push_str(&encode_message(message));
            out.push('\n');
        }
        out
    }

    /// Replay a wire-format transcript, re-validating ordering.
    pub fn from_wire(text: &str) -> Result<Transcript, WireError> {
        let mut transcript = Transcript::new();
        for (i, line) in text.lines().enumerate() {
            let message = decode_message(line).map_err(|e| WireError::at_line(i + 1, e))?;
            transcript
                .exchange(message)
                .map_err(|e| WireError::at_line(i + 1, WireError::Ordering(e)))?;
        }
        Ok(transcript)
    }
}

#[derive(Debug, Error, PartialEq)]
pub enum WireError {
    #[error("malformed record: {0}")]
    Malformed(String),
    #[error("unknown kind {0:?}")]
    UnknownKind(String),
    #[error("unknown sender {0:?}")]
    UnknownSender(String),
    #[error("bad value for kind {kind}: {detail}")]
    BadValue { kind: String, detail: String },
    #[error("{0}")]
    Ordering(#[from] ChannelError),
    #[error("line {line}: {inner}")]
    AtLine { line: usize, inner: Box<WireError> },
}

impl WireError {
    fn at_line(line: usize, inner: WireError) -> WireError {
        WireError::AtLine {
            line,
            inner: Box::new(inner),
        }
    }
}

/// The shared line shape for transcripts and event logs. Field order is
/// fixed: round, sender, kind, value.
#[derive(Debug, Serialize, Deserialize)]
struct WireRecord {
    round: u64,
    sender: String,
    kind: String,
    value: serde_json::Value,
}

/// Encode an arbitrary event-log record (round records, intercept records
/// and the scenario header share this shape with public messages).
pub fn encode_record(round: u64, sender: &str, kind: &str, value: serde_json::Value) -> String {
    serde_json::to_string(&WireRecord {
        round,
        sender: sender.to_string(),
        kind: kind.to_string(),
        value,
    })
    .expect("wire records always serialize")
}

/// Split a wire line into its four fields.
pub fn decode_record(line: &str) -> Result<(u64, String, String, serde_json::Value), WireError> {
    let record: WireRecord =
        serde_json::from_str(line).map_err(|e| WireError::Malformed(e.to_string()))?;
    Ok((record.round, record.sender, record.kind, record.value))
}

pub fn encode_message(message: &PublicMessage) -> String {
    let value = match &message.payload {
        Payload::DetectorClass(class) => serde_json::json!(class.as_str()),
        Payload::Fired(fired) => serde_json::json!(fired),
        Payload::TestDisclosure(t) => serde_json::json!(format_seconds(*t)),
        Payload::Verdict(v) => serde_json::json!(v.as_str()),
    };
    encode_record(
        message.round_index,
        message.sender.as_str(),
        message.payload.kind(),
        value,
    )
}

pub fn decode_message(line: &str) -> Result<PublicMessage, WireError> {
    let (round, sender, kind, value) = decode_record(line)?;
    let sender = match sender.as_str() {
        "A" => Party::A,
        "B" => Party::B,
        other => return Err(WireError::UnknownSender(other.to_string())),
    };
    let bad = |detail: &str| WireError::BadValue {
        kind: kind.clone(),
        detail: detail.to_string(),
    };
    let payload = match kind.as_str() {
        "detector_class" => match value.as_str() {
            Some("wide") => Payload::DetectorClass(DetectorClass::Wide),
            Some("narrow") => Payload::DetectorClass(DetectorClass::Narrow),
            _ => return Err(bad("expected \"wide\" or \"narrow\"")),
        },
        "fired" => Payload::Fired(value.as_bool().ok_or_else(|| bad("expected a bool"))?),
        "test_disclosure" => {
            let text = value
                .as_str()
                .ok_or_else(|| bad("expected a time string"))?;
            let t: f64 = text.parse().map_err(|_| bad("unparseable time"))?;
            Payload::TestDisclosure(t)
        }
        "verdict" => match value.as_str() {
            Some("clean") => Payload::Verdict(Verdict::Clean),
            Some("compromised") => Payload::Verdict(Verdict::Compromised),
            _ => return Err(bad("expected \"clean\" or \"compromised\"")),
        },
        other => return Err(WireError::UnknownKind(other.to_string())),
    };
    Ok(PublicMessage {
        round_index: round,
        sender,
        payload,
    })
}
