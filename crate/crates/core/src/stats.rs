//! The eavesdropping-detection test and run-level statistics.
//!
//! Honest wide–wide rounds have |T| ~ 1/γ (1e-9 s at γ = 1e9 s⁻¹); an
//! interceptor resolving a 1e5 s⁻¹ frequency split leaves delays of order
//! 1e-5 s — four orders of magnitude apart. The default decision rule is
//! therefore outlier detection: any single |T| beyond the threshold flags
//! the run. A mean-shift rule ships as an alternative for regimes where the
//! scales are not separated.

use std::collections::BTreeMap;

use crate::channel::{Party, Payload, Transcript};
use crate::protocol::RoundRecord;
use crate::runner;
use crate::scenario::ScenarioConfig;

/// The verdict of the delay test.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Decision {
    Clean,
    Compromised,
    /// No wide–wide rounds fired: nothing to test.
    Inconclusive,
}

impl Decision {
    pub fn as_str(self) -> &'static str {
        match self {
            Decision::Clean => "clean",
            Decision::Compromised => "compromised",
            Decision::Inconclusive => "inconclusive",
        }
    }
}

impl std::fmt::Display for Decision {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.as_str())
    }
}

/// How the test decides.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum DecisionRule {
    /// Any |T| beyond the threshold flags the run. Default.
    #[default]
    AnyExceedance,
    /// |mean T| beyond threshold/√n flags the run.
    MeanShift,
}

/// Outcome of the wide–wide delay test.
#[derive(Debug, Clone, PartialEq)]
pub struct TestVerdict {
    pub decision: Decision,
    pub n_test: usize,
    pub max_abs_delay: f64,
    pub mean_delay: f64,
    pub threshold: f64,
    /// Round indices whose |T| exceeded the threshold.
    pub flagged_rounds: Vec<u64>,
}

/// Run the delay test over the fired wide–wide records with the default
/// single-exceedance rule.
pub fn eavesdrop_test(test_records: &[RoundRecord], threshold: f64) -> TestVerdict {
    eavesdrop_test_with_rule(test_records, threshold, DecisionRule::AnyExceedance)
}

pub fn eavesdrop_test_with_rule(
    test_records: &[RoundRecord],
    threshold: f64,
    rule: DecisionRule,
) -> TestVerdict {
    let delays: Vec<(u64, f64)> = test_records
        .iter()
        .filter_map(|r| r.delay().map(|t| (r.round_index, t)))
        .collect();
    verdict_from_delays(&delays, threshold, rule)
}

fn verdict_from_delays(delays: &[(u64, f64)], threshold: f64, rule: DecisionRule) -> TestVerdict {
    let n_test = delays.len();
    if n_test == 0 {
        return TestVerdict {
            decision: Decision::Inconclusive,
            n_test: 0,
            max_abs_delay: 0.0,
            mean_delay: 0.0,
            threshold,
            flagged_rounds: Vec::new(),
        };
    }
    let flagged_rounds: Vec<u64> = delays
        .iter()
        .filter(|(_, t)| t.abs() > threshold)
        .map(|(round, _)| *round)
        .collect();
    let max_abs_delay = delays.iter().map(|(_, t)| t.abs()).fold(0.0, f64::max);
    let mean_delay = delays.iter().map(|(_, t)| t).sum::<f64>() / n_test as f64;
    let compromised = match rule {
        DecisionRule::AnyExceedance => !flagged_rounds.is_empty(),
        DecisionRule::MeanShift => mean_delay.abs() > threshold / (n_test as f64).sqrt(),
    };
    TestVerdict {
        decision: if compromised {
            Decision::Compromised
        } else {
            Decision::Clean
        },
        n_test,
        max_abs_delay,
        mean_delay,
        threshold,
        flagged_rounds,
    }
}

/// Recompute the verdict from public data alone: the transcript's
/// test-disclosure pairs give every test round's T = t_B − t_A, so either
/// party (or an auditor) reaches the same verdict.
pub fn verdict_from_transcript(
    transcript: &Transcript,
    threshold: f64,
    rule: DecisionRule,
) -> TestVerdict {
    let mut disclosed: BTreeMap<u64, (Option<f64>, Option<f64>)> = BTreeMap::new();
    for message in transcript.messages() {
        if let Payload::TestDisclosure(t) = message.payload {
            let entry = disclosed.entry(message.round_index).or_default();
            match message.sender {
                Party::A => entry.0 = Some(t),
                Party::B => entry.1 = Some(t),
            }
        }
    }
    let delays: Vec<(u64, f64)> = disclosed
        .into_iter()
        .filter_map(|(round, pair)| match pair {
            (Some(t_a), Some(t_b)) => Some((round, t_b - t_a)),
            _ => None,
        })
        .collect();
    verdict_from_delays(&delays, threshold, rule)
}

/// Detection-probability estimate over independent end-to-end simulations.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DetectionEstimate {
    /// Fraction of trials whose verdict was compromised.
    pub probability: f64,
    /// Binomial standard error of that fraction.
    pub std_error: f64,
    pub n_trials: u64,
    pub n_compromised: u64,
    /// Trials whose test partition was empty.
    pub n_inconclusive: u64,
}

/// Run `n_trials` independent simulations of the scenario (overriding its
/// round count) and estimate the probability of a compromised verdict.
/// Trials derive their seeds from the scenario seed; aggregation is a plain
/// count, so execution order cannot matter.
pub fn detection_probability(
    scenario: &ScenarioConfig,
    n_rounds: u64,
    n_trials: u64,
) -> DetectionEstimate {
    let mut config = scenario.clone();
    config.n_rounds = n_rounds;
    let mut n_compromised = 0u64;
    let mut n_inconclusive = 0u64;
    for trial in 0..n_trials {
        let outcome = runner::run_trial(&config, trial);
        match outcome.verdict.decision {
            Decision::Compromised => n_compromised += 1,
            Decision::Inconclusive => n_inconclusive += 1,
            Decision::Clean => {}
        }
    }
    let p = n_compromised as f64 / n_trials as f64;
    DetectionEstimate {
        probability: p,
        std_error: (p * (1.0 - p) / n_trials as f64).sqrt(),
        n_trials,
        n_compromised,
        n_inconclusive,
    }
}

/// A histogram with equal-width bins, emitted as (left, right, count) rows.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct Histogram {
    pub bins: Vec<(f64, f64, u64)>,
}

impl Histogram {
    /// Bin `values` into `n_bins` equal-width bins spanning their range.
    pub fn from_values(values: &[f64], n_bins: usize) -> Histogram {
        if values.is_empty() || n_bins == 0 {
            return Histogram::default();
        }
        let lo = values.iter().cloned().fold(f64::INFINITY, f64::min);
        let hi = values.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
        let width = if hi > lo {
            (hi - lo) / n_bins as f64
        } else {
            1.0
        };
        let mut counts = vec![0u64; n_bins];
        for &v in values {
            let idx = (((v - lo) / width) as usize).min(n_bins - 1);
            counts[idx] += 1;
        }
        Histogram {
            bins: counts
                .iter()
                .enumerate()
                .map(|(i, &c)| (lo + width * i as f64, lo + width * (i + 1) as f64, c))
                .collect(),
        }
    }

    pub fn total(&self) -> u64 {
        self.bins.iter().map(|(_, _, c)| c).sum()
    }
}

/// Everything a run reports.
#[derive(Debug, Clone, PartialEq)]
pub struct RunSummary {
    pub n_rounds: u64,
    pub n_fired: u64,
    /// Fired rounds / total rounds.
    pub coincidence_rate: f64,
    pub key_length: usize,
    /// Omniscient: fraction of key positions where the parties disagree.
    /// The parties themselves cannot compute this without sacrificing bits.
    /// Rare same-frequency narrow firings put a config-dependent floor here.
    pub key_disagreement_rate: f64,
    /// Omniscient: fired narrow–narrow rounds whose choices were not
    /// complementary (the error-floor events themselves).
    pub non_complementary_key_rounds: u64,
    pub verdict: TestVerdict,
    /// Histogram of T over the test partition.
    pub delay_histogram: Histogram,
}

/// Condense a completed run.
pub fn summarize(
    records: &[RoundRecord],
    key: &crate::protocol::SiftedKey,
    verdict: TestVerdict,
) -> RunSummary {
    let n_rounds = records.len() as u64;
    let n_fired = records.iter().filter(|r| r.fired()).count() as u64;
    let key_length = key.bits_a.len();
    let key_disagreement_rate = if key_length == 0 {
        0.0
    } else {
        key.disagreements() as f64 / key_length as f64
    };
    let non_complementary_key_rounds = records
        .iter()
        .filter(|r| {
            key.source_rounds.contains(&r.round_index)
                && r.choice_a.is_narrow()
                && r.choice_a == r.choice_b
        })
        .count() as u64;
    let test_delays: Vec<f64> = records
        .iter()
        .filter(|r| key.test_rounds.contains(&r.round_index))
        .filter_map(|r| r.delay())
        .collect();
    RunSummary {
        n_rounds,
        n_fired,
        coincidence_rate: if n_rounds == 0 {
            0.0
        } else {
            n_fired as f64 / n_rounds as f64
        },
        key_length,
        key_disagreement_rate,
        non_complementary_key_rounds,
        verdict,
        delay_histogram: Histogram::from_values(&test_delays, 40),
    }
}

impl RunSummary {
    /// The flat key = value block written to summary.txt.
    pub fn to_text_block(&self) -> String {
        let v = &self.verdict;
        let mut out = String::new();
        let mut line = |k: &str, val: String| {
            out.push_str(k);
            out.push_str(" = ");
            out.push_str(&val);
            out.push('\n');
        };
        line("rounds", self.n_rounds.to_string());
        line("fired", self.n_fired.to_string());
        line("coincidence_rate", format!("{:.6}", self.coincidence_rate));
        line("key_length", self.key_length.to_string());
        line(
            "key_disagreement_rate",
            format!("{:.6}", self.key_disagreement_rate),
        );
        line(
            "non_complementary_key_rounds",
            self.non_complementary_key_rounds.to_string(),
        );
        line("test_rounds", v.n_test.to_string());
        line("verdict", v.decision.to_string());
        line("threshold_s", crate::channel::format_seconds(v.threshold));
        line(
            "max_abs_delay_s",
            crate::channel::format_seconds(v.max_abs_delay),
        );
        line("mean_delay_s", crate::channel::format_seconds(v.mean_delay));
        line(
            "flagged_rounds",
            if v.flagged_rounds.is_empty() {
                "none".to_string()
            } else {
                v.flagged_rounds
                    .iter()
                    .map(|r| r.to_string())
                    .collect::<Vec<_>>()
                    .join(" ")
            },
        );
        out
    }

    pub const CSV_HEADER: &'static str = "trial,rounds,fired,coincidence_rate,key_length,\
key_disagreement_rate,test_rounds,verdict,max_abs_delay_s,mean_delay_s,flagged";

    /// One CSV row per trial for plotting.
    pub fn to_csv_row(&self, trial: u64) -> String {
        let v = &self.verdict;
        format!(
            "{trial},{},{},{:.6},{},{:.6},{},{},{},{},{}",
            self.n_rounds,
            self.n_fired,
            self.coincidence_rate,
            self.key_length,
            self.key_disagreement_rate,
            v.n_test,
            v.decision,
            crate::channel::format_seconds(v.max_abs_delay),
            crate::channel::format_seconds(v.mean_delay),
            v.flagged_rounds.len(),
        )
    }

    /// Histogram rows: bin_left, bin_right, count.
    pub fn histogram_csv(&self) -> String {
        let mut out = String::from("bin_left_s,bin_right_s,count\n");
        for (left, right, count) in &self.delay_histogram.bins {
            out.push_str(&format!(
                "{},{},{count}\n",
                crate::channel::format_seconds(*left),
                crate::channel::format_seconds(*right)
            ));
        }
        out
    }
}
