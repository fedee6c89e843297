//! End-to-end scenario execution and artifact output.
//!
//! A run executes every round, performs the public announcements, sifts,
//! discloses the test-round times, runs the delay test and publishes the
//! verdict. Artifacts on disk: `events.log` (the complete machine-readable
//! record in the shared wire format), `transcript.log` (the public view),
//! `summary.txt` / `summary.csv`, a histogram CSV, and — only in omniscient
//! mode — both parties' keys as hex.

use std::fs;
use std::io;
use std::path::Path;

use serde_json::json;
use thiserror::Error;

use crate::adversary::{self, InterceptOutcome};
use crate::channel::{self, Party, Payload, PublicMessage, Transcript, Verdict};
use crate::protocol::{self, RoundRecord, SiftedKey};
use crate::rng::mix64;
use crate::scenario::{ScenarioConfig, SweepSpec};
use crate::stats::{self, Decision, RunSummary, TestVerdict};

/// Everything one trial produced.
#[derive(Debug, Clone)]
pub struct TrialResult {
    pub records: Vec<RoundRecord>,
    /// Eve's per-round internals, keyed by round index. Omniscient data.
    pub intercepts: Vec<(u64, InterceptOutcome)>,
    pub transcript: Transcript,
    pub key: SiftedKey,
    pub verdict: TestVerdict,
    pub summary: RunSummary,
}

impl TrialResult {
    pub fn decision(&self) -> Decision {
        self.verdict.decision
    }

    /// Process exit status: 0 clean, 2 compromised, 3 inconclusive.
    pub fn exit_code(&self) -> i32 {
        match self.verdict.decision {
            Decision::Clean => 0,
            Decision::Compromised => 2,
            Decision::Inconclusive => 3,
        }
    }
}

/// Execute one complete protocol run. `trial` selects an independent seed
/// derivation of the same scenario; trial 0 is "the" run of a scenario.
pub fn run_trial(config: &ScenarioConfig, trial: u64) -> TrialResult {
    let seeds = config.run_seeds().for_trial(trial);
    let adversary = config.adversary.enabled.then_some(&config.adversary);

    let mut records = Vec::with_capacity(config.n_rounds as usize);
    let mut intercepts = Vec::new();
    for round_index in 0..config.n_rounds {
        let output = protocol::run_round(
            round_index,
            &config.party_a,
            &config.party_b,
            &config.source,
            &config.channel,
            adversary,
            &seeds,
        );
        if let Some(intercept) = output.intercept {
            intercepts.push((round_index, intercept));
        }
        records.push(output.record);
    }

    let mut transcript = Transcript::new();
    protocol::announce(&records, &mut transcript).expect("round indices ascend");

    // Sifting may come up short on one or both partitions; the partial
    // result still drives whatever remains possible (an empty test
    // partition yields an inconclusive verdict).
    let key = match protocol::sift(&records, &transcript) {
        Ok(key) => key,
        Err(e) => e.into_partial(),
    };

    protocol::disclose_test_times(&records, &key.test_rounds, &mut transcript)
        .expect("disclosures follow announcements");

    let test_records: Vec<RoundRecord> = records
        .iter()
        .filter(|r| key.test_rounds.contains(&r.round_index))
        .cloned()
        .collect();
    let verdict = stats::eavesdrop_test(&test_records, config.threshold);

    if let Some(wire_verdict) = match verdict.decision {
        Decision::Clean => Some(Verdict::Clean),
        Decision::Compromised => Some(Verdict::Compromised),
        Decision::Inconclusive => None,
    } {
        let last_round = config.n_rounds.saturating_sub(1);
        for party in [Party::A, Party::B] {
            transcript
                .exchange(PublicMessage::new(
                    last_round,
                    party,
                    Payload::Verdict(wire_verdict),
                ))
                .expect("verdict follows all announcements");
        }
    }

    let summary = stats::summarize(&records, &key, verdict.clone());
    TrialResult {
        records,
        intercepts,
        transcript,
        key,
        verdict,
        summary,
    }
}

/// The complete machine-readable record of a trial: a scenario header, one
/// round record per round, and (omniscient only) the intercept records.
pub fn events_log(config: &ScenarioConfig, result: &TrialResult, omniscient: bool) -> String {
    let mut out = String::new();
    out.push_str(&channel::encode_record(
        0,
        "sim",
        "scenario",
        scenario_value(config),
    ));
    out.push('\n');
    for record in &result.records {
        out.push_str(&channel::encode_record(
            record.round_index,
            "sim",
            "round",
            record.to_log_value(),
        ));
        out.push('\n');
    }
    if omniscient {
        for (round_index, intercept) in &result.intercepts {
            out.push_str(&channel::encode_record(
                *round_index,
                "sim",
                "intercept",
                intercept_value(intercept),
            ));
            out.push('\n');
        }
    }
    out
}

fn scenario_value(config: &ScenarioConfig) -> serde_json::Value {
    let det = |d: &crate::physics::DetectorSpec| {
        json!({
            "center": d.center_frequency,
            "bandwidth": d.bandwidth,
            "efficiency": d.efficiency,
        })
    };
    let party = |p: &crate::protocol::PartyConfig| {
        json!({
            "narrow_low": det(&p.narrow_low),
            "narrow_high": det(&p.narrow_high),
            "wide": det(&p.wide),
            "p_wide": p.p_wide,
            "seed": p.rng_seed,
        })
    };
    json!({
        "source": {
            "sum_frequency": config.source.sum_frequency,
            "kind": config.source.kind.as_str(),
            "emission_time_jitter": config.source.emission_time_jitter,
            "spectral_width": config.source.spectral_width,
        },
        "party_a": party(&config.party_a),
        "party_b": party(&config.party_b),
        "channel": {
            "distance_a": config.channel.distance_a,
            "distance_b": config.channel.distance_b,
            "light_speed": config.channel.light_speed,
            "timing_resolution": config.channel.timing_resolution,
        },
        "adversary": {
            "enabled": config.adversary.enabled,
            "tapped_arm": config.adversary.tapped_arm.as_str(),
            "bandwidth": config.adversary.gamma_star(),
            "strategy": config.adversary.strategy.as_str(),
            "resend_on_miss": config.adversary.resend_on_miss,
            "delay_model": config.adversary.delay_model.as_str(),
        },
        "n_rounds": config.n_rounds,
        "threshold": channel::format_seconds(config.threshold),
        "seed": config.seed,
    })
}

fn intercept_value(intercept: &InterceptOutcome) -> serde_json::Value {
    json!({
        "learned_bit": intercept.learned_bit,
        "resent": intercept.resent,
        "added_delay": channel::format_seconds(intercept.added_delay),
        "resent_frequency": intercept.resent_frequency,
    })
}

/// Pack a bit sequence into lowercase hex, most significant bit first,
/// zero-padded to a whole byte.
pub fn bits_to_hex(bits: &[u8]) -> String {
    let mut out = String::new();
    for chunk in bits.chunks(8) {
        let mut byte = 0u8;
        for (i, &bit) in chunk.iter().enumerate() {
            byte |= (bit & 1) << (7 - i);
        }
        out.push_str(&format!("{byte:02x}"));
    }
    out
}

/// Write every artifact of a finished trial into `dir`.
pub fn write_artifacts(
    dir: &Path,
    config: &ScenarioConfig,
    result: &TrialResult,
    omniscient: bool,
) -> io::Result<()> {
    fs::create_dir_all(dir)?;
    fs::write(
        dir.join("events.log"),
        events_log(config, result, omniscient),
    )?;
    fs::write(dir.join("transcript.log"), result.transcript.to_wire())?;
    fs::write(dir.join("summary.txt"), result.summary.to_text_block())?;
    let mut csv = String::from(RunSummary::CSV_HEADER);
    csv.push('\n');
    csv.push_str(&result.summary.to_csv_row(0));
    csv.push('\n');
    fs::write(dir.join("summary.csv"), csv)?;
    fs::write(dir.join("histogram.csv"), result.summary.histogram_csv())?;
    if omniscient {
        fs::write(
            dir.join("key_A.hex"),
            bits_to_hex(&result.key.bits_a) + "\n",
        )?;
        fs::write(
            dir.join("key_B.hex"),
            bits_to_hex(&result.key.bits_b) + "\n",
        )?;
    }
    Ok(())
}

/// One row of a parameter sweep.
#[derive(Debug, Clone, PartialEq)]
pub struct SweepRow {
    pub value: f64,
    /// Key bits per round with the adversary disabled.
    pub key_rate: f64,
    /// Fraction of adversary-enabled trials flagged compromised.
    pub detection_probability: f64,
    /// Fraction of adversary-disabled trials flagged compromised.
    pub false_positive_rate: f64,
    /// Eve's bit accuracy and mean delay; present when the sweep touches an
    /// enabled adversary.
    pub eve_accuracy: Option<f64>,
    pub eve_mean_delay: Option<f64>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepTable {
    pub parameter: String,
    pub rows: Vec<SweepRow>,
    pub trials_per_row: u64,
}

#[derive(Debug, Error)]
pub enum SweepError {
    #[error("the configuration has no sweep block")]
    MissingSweep,
    #[error("sweep.values is empty")]
    EmptyValues,
    #[error("{0}")]
    BadParameter(String),
}

/// Run the configured sweep: one row per value, derived seed per row.
///
/// Per row, the adversary-enabled scenario estimates the detection
/// probability and an adversary-disabled twin estimates the false-positive
/// rate and the honest key rate. Sweeping `adversary.bandwidth` also
/// samples Eve's accuracy/delay tradeoff at each point.
pub fn run_sweep(config: &ScenarioConfig) -> Result<SweepTable, SweepError> {
    let sweep: &SweepSpec = config.sweep.as_ref().ok_or(SweepError::MissingSweep)?;
    if sweep.values.is_empty() {
        return Err(SweepError::EmptyValues);
    }
    let mut rows = Vec::with_capacity(sweep.values.len());
    for (row_index, &value) in sweep.values.iter().enumerate() {
        let mut scenario = config.clone();
        scenario.seed = mix64(config.seed ^ mix64(row_index as u64));
        scenario.sweep = None;
        scenario
            .set_parameter(&sweep.parameter, value)
            .map_err(SweepError::BadParameter)?;
        let report = scenario.validate();
        if !report.is_ok() {
            return Err(SweepError::BadParameter(format!(
                "value {value} breaks the scenario: {}",
                report.errors.join("; ")
            )));
        }

        let detection = stats::detection_probability(&scenario, scenario.n_rounds, sweep.trials);

        let mut honest = scenario.clone();
        honest.adversary.enabled = false;
        let false_positive = stats::detection_probability(&honest, honest.n_rounds, sweep.trials);
        let mut key_bits = 0usize;
        for trial in 0..sweep.trials {
            key_bits += run_trial(&honest, trial).key.bits_a.len();
        }
        let key_rate = key_bits as f64 / (sweep.trials * honest.n_rounds) as f64;

        let (eve_accuracy, eve_mean_delay) = if scenario.adversary.enabled {
            let point = adversary::tradeoff_point(
                &scenario.adversary,
                &scenario.source,
                scenario.party_a.narrow_low.center_frequency,
                scenario.party_a.narrow_high.center_frequency,
                100_000,
                // Common random numbers across rows: tradeoff curves stay
                // coupled even though the protocol trials above are not.
                config.seed,
            );
            (Some(point.accuracy), Some(point.mean_delay))
        } else {
            (None, None)
        };

        rows.push(SweepRow {
            value,
            key_rate,
            detection_probability: detection.probability,
            false_positive_rate: false_positive.probability,
            eve_accuracy,
            eve_mean_delay,
        });
    }
    Ok(SweepTable {
        parameter: sweep.parameter.clone(),
        rows,
        trials_per_row: sweep.trials,
    })
}

impl SweepTable {
    pub fn to_csv(&self) -> String {
        let with_eve = self.rows.iter().any(|r| r.eve_accuracy.is_some());
        let mut out =
            String::from("parameter,value,key_rate,detection_probability,false_positive_rate");
        if with_eve {
            out.push_str(",eve_accuracy,eve_mean_delay_s");
        }
        out.push('\n');
        for row in &self.rows {
            out.push_str(&format!(
                "{},{},{:.6},{:.6},{:.6}",
                self.parameter,
                row.value,
                row.key_rate,
                row.detection_probability,
                row.false_positive_rate
            ));
            if with_eve {
                match (row.eve_accuracy, row.eve_mean_delay) {
                    (Some(acc), Some(delay)) => {
                        out.push_str(&format!(",{:.6},{}", acc, channel::format_seconds(delay)))
                    }
                    _ => out.push_str(",,"),
                }
            }
            out.push('\n');
        }
        out
    }
}
