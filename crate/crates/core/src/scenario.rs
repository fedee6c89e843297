//! Scenario configuration: a flat `key = value` file with dotted section
//! paths, loaded with line/field-precise diagnostics.
//!
//! Angular frequencies are plain numbers in s⁻¹ (scientific notation
//! encouraged), times in seconds, distances in meters. Validation collects
//! every violated invariant instead of stopping at the first.

use std::collections::BTreeMap;

use thiserror::Error;

use crate::adversary::{AdversaryConfig, EveDelayModel, EveStrategy};
use crate::channel::{ChannelSpec, Party};
use crate::physics::{DetectorSpec, SourceKind, SourceSpec};
use crate::protocol::PartyConfig;
use crate::rng::RunSeeds;
use crate::validate::ValidationReport;

/// A parameter sweep request.
#[derive(Debug, Clone, PartialEq)]
pub struct SweepSpec {
    /// Dotted path of the swept parameter; see [`ScenarioConfig::set_parameter`].
    pub parameter: String,
    pub values: Vec<f64>,
    /// Trials per swept value for the probability columns.
    pub trials: u64,
}

/// Everything one simulation needs.
#[derive(Debug, Clone, PartialEq)]
pub struct ScenarioConfig {
    pub source: SourceSpec,
    pub party_a: PartyConfig,
    pub party_b: PartyConfig,
    pub channel: ChannelSpec,
    pub adversary: AdversaryConfig,
    pub n_rounds: u64,
    /// Delay-test threshold, seconds.
    pub threshold: f64,
    pub seed: u64,
    pub sweep: Option<SweepSpec>,
}

/// All violations found while loading a configuration.
#[derive(Debug, Error, PartialEq)]
#[error("invalid configuration:\n{}", .violations.join("\n"))]
pub struct ConfigError {
    pub violations: Vec<String>,
}

impl ScenarioConfig {
    pub fn run_seeds(&self) -> RunSeeds {
        RunSeeds {
            party_a: self.party_a.rng_seed,
            party_b: self.party_b.rng_seed,
            world: self.seed,
        }
    }

    /// |ω₂ − ω₁| as configured for party A (validation forces both parties
    /// to agree on the frequencies).
    pub fn frequency_split(&self) -> f64 {
        self.party_a.frequency_split()
    }

    /// The scenario from the estimates the protocol was sized with:
    /// ω ≈ 1e15 s⁻¹ at the fiber transparency window, a 1e5 s⁻¹ frequency
    /// split, 1e9 s⁻¹ wide-band and 1e2 s⁻¹ narrow-band detectors, a
    /// threshold of 10/γ_wide, no adversary.
    pub fn baseline() -> ScenarioConfig {
        let omega_low = 1e15 - 5e4;
        let omega_high = 1e15 + 5e4;
        let party = |seed: u64| PartyConfig {
            narrow_low: DetectorSpec::ideal(omega_low, 1e2),
            narrow_high: DetectorSpec::ideal(omega_high, 1e2),
            wide: DetectorSpec::ideal(1e15, 1e9),
            p_wide: 0.5,
            rng_seed: seed,
        };
        ScenarioConfig {
            source: SourceSpec::biphoton(2e15, 1e12),
            party_a: party(101),
            party_b: party(202),
            channel: ChannelSpec {
                distance_a: 1000.0,
                distance_b: 1000.0,
                ..ChannelSpec::default()
            },
            adversary: AdversaryConfig::disabled(),
            n_rounds: 200,
            threshold: 1e-8,
            seed: 42,
            sweep: None,
        }
    }

    /// The baseline with the canonical eavesdropper: γ★ = 1e5 s⁻¹ on arm B.
    pub fn baseline_with_eve() -> ScenarioConfig {
        let mut config = Self::baseline();
        config.adversary = AdversaryConfig::intercept_resend(
            Party::B,
            config.party_a.narrow_low.center_frequency,
            config.party_a.narrow_high.center_frequency,
            1e5,
        );
        config
    }

    /// Check every invariant; errors carry dotted field paths.
    pub fn validate(&self) -> ValidationReport {
        let mut report = ValidationReport::new();
        report.absorb("source", self.source.validate());
        report.absorb("party_a", self.party_a.validate(&self.source));
        report.absorb("party_b", self.party_b.validate(&self.source));
        report.absorb("channel", self.channel.validate());
        report.absorb("adversary", self.adversary.validate(self.frequency_split()));
        if self.party_a.narrow_low.center_frequency != self.party_b.narrow_low.center_frequency
            || self.party_a.narrow_high.center_frequency
                != self.party_b.narrow_high.center_frequency
        {
            report.error("party_a/party_b: the parties must agree on omega_1 and omega_2");
        }
        if self.n_rounds < 1 {
            report.error(format!(
                "n_rounds: must be at least 1, got {}",
                self.n_rounds
            ));
        }
        if !self.threshold.is_finite() || self.threshold <= 0.0 {
            report.error(format!(
                "threshold: must be positive, got {}",
                self.threshold
            ));
        }
        if let Some(sweep) = &self.sweep {
            if sweep.values.is_empty() {
                report.error("sweep.values: the value list is empty");
            }
            if sweep.trials < 1 {
                report.error("sweep.trials: must be at least 1");
            }
            // Probe every swept value: the row configurations must validate
            // before the sweep ever runs.
            for (i, &value) in sweep.values.iter().enumerate() {
                let mut probe = self.clone();
                probe.sweep = None;
                match probe.set_parameter(&sweep.parameter, value) {
                    Err(e) => {
                        report.error(format!("sweep.parameter: {e}"));
                        break;
                    }
                    Ok(()) => {
                        for e in probe.validate().errors {
                            report.error(format!("sweep.values[{i}] = {value}: {e}"));
                        }
                    }
                }
            }
        }
        report
    }

    /// Overwrite one sweepable parameter by dotted path.
    pub fn set_parameter(&mut self, path: &str, value: f64) -> Result<(), String> {
        match path {
            "p_wide" => {
                self.party_a.p_wide = value;
                self.party_b.p_wide = value;
            }
            "party_a.p_wide" => self.party_a.p_wide = value,
            "party_b.p_wide" => self.party_b.p_wide = value,
            "adversary.bandwidth" => {
                let split = self.frequency_split();
                self.adversary = self.adversary.with_gamma_star(value, split);
            }
            "n_rounds" => {
                if value < 1.0 || value.fract() != 0.0 {
                    return Err(format!("n_rounds must be a positive integer, got {value}"));
                }
                self.n_rounds = value as u64;
            }
            "threshold" => self.threshold = value,
            other => {
                return Err(format!(
                    "unknown parameter path {other:?}; sweepable paths are p_wide, \
                     party_a.p_wide, party_b.p_wide, adversary.bandwidth, n_rounds, threshold"
                ))
            }
        }
        Ok(())
    }

    /// Parse and validate a configuration file. On success the warnings
    /// (non-fatal validation notes) come along.
    pub fn parse(text: &str) -> Result<(ScenarioConfig, Vec<String>), ConfigError> {
        let mut reader = Reader::lex(text)?;

        let source = SourceSpec {
            sum_frequency: reader.req_f64("source.sum_frequency"),
            kind: reader.source_kind("source.kind"),
            emission_time_jitter: reader.opt_f64("source.emission_time_jitter", 0.0),
            spectral_width: reader.opt_f64("source.spectral_width", 1e12),
        };
        let party_a = reader.party("party_a", &source);
        let party_b = reader.party("party_b", &source);
        let channel = ChannelSpec {
            distance_a: reader.opt_f64("channel.distance_a", 0.0),
            distance_b: reader.opt_f64("channel.distance_b", 0.0),
            light_speed: reader.opt_f64("channel.light_speed", 3e8),
            timing_resolution: reader.opt_f64("channel.timing_resolution", 1e-10),
        };
        let adversary = reader.adversary(&party_a);
        let n_rounds = reader.req_u64("n_rounds");
        // Ten honest correlation times: false alarms cost ~e^-20 per round.
        let threshold = reader.opt_f64("threshold", 10.0 / party_a.wide.bandwidth);
        let seed = reader.req_u64("seed");
        let sweep = reader.sweep();

        reader.reject_unknown_keys();
        reader.finish()?;

        let config = ScenarioConfig {
            source,
            party_a,
            party_b,
            channel,
            adversary,
            n_rounds,
            threshold,
            seed,
            sweep,
        };
        let report = config.validate();
        if report.is_ok() {
            Ok((config, report.warnings))
        } else {
            Err(ConfigError {
                violations: report.errors,
            })
        }
    }
}

/// Lexed key/value pairs plus accumulated per-field errors.
struct Reader {
    entries: BTreeMap<String, (String, usize)>,
    taken: Vec<String>,
    errors: Vec<String>,
}

impl Reader {
    fn lex(text: &str) -> Result<Reader, ConfigError> {
        let mut entries = BTreeMap::new();
        let mut errors = Vec::new();
        for (i, raw) in text.lines().enumerate() {
            let line_no = i + 1;
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let Some((key, value)) = line.split_once('=') else {
                errors.push(format!(
                    "line {line_no}: expected `key = value`, got {raw:?}"
                ));
                continue;
            };
            let key = key.trim().to_string();
            let value = value.trim().to_string();
            if key.is_empty() || value.is_empty() {
                errors.push(format!("line {line_no}: empty key or value in {raw:?}"));
                continue;
            }
            if let Some((_, first)) = entries.get(&key) {
                errors.push(format!(
                    "line {line_no}: duplicate key {key:?} (first set on line {first})"
                ));
                continue;
            }
            entries.insert(key, (value, line_no));
        }
        if errors.is_empty() {
            Ok(Reader {
                entries,
                taken: Vec::new(),
                errors,
            })
        } else {
            Err(ConfigError { violations: errors })
        }
    }

    fn raw(&mut self, key: &str) -> Option<(String, usize)> {
        self.taken.push(key.to_string());
        self.entries.get(key).cloned()
    }

    fn req_f64(&mut self, key: &str) -> f64 {
        match self.raw(key) {
            Some((value, line)) => value.parse().unwrap_or_else(|_| {
                self.errors.push(format!(
                    "line {line}: {key}: expected a number, got {value:?}"
                ));
                f64::NAN
            }),
            None => {
                self.errors.push(format!("{key}: required key is missing"));
                f64::NAN
            }
        }
    }

    fn opt_f64(&mut self, key: &str, default: f64) -> f64 {
        match self.raw(key) {
            Some((value, line)) => value.parse().unwrap_or_else(|_| {
                self.errors.push(format!(
                    "line {line}: {key}: expected a number, got {value:?}"
                ));
                default
            }),
            None => default,
        }
    }

    fn req_u64(&mut self, key: &str) -> u64 {
        match self.raw(key) {
            Some((value, line)) => value.parse().unwrap_or_else(|_| {
                self.errors.push(format!(
                    "line {line}: {key}: expected a non-negative integer, got {value:?}"
                ));
                0
            }),
            None => {
                self.errors.push(format!("{key}: required key is missing"));
                0
            }
        }
    }

    fn opt_bool(&mut self, key: &str, default: bool) -> bool {
        match self.raw(key) {
            Some((value, line)) => match value.as_str() {
                "true" => true,
                "false" => false,
                other => {
                    self.errors.push(format!(
                        "line {line}: {key}: expected true or false, got {other:?}"
                    ));
                    default
                }
            },
            None => default,
        }
    }

    fn source_kind(&mut self, key: &str) -> SourceKind {
        match self.raw(key) {
            Some((value, line)) => match value.as_str() {
                "biphoton" => SourceKind::Biphoton,
                "dual_single_photon" => SourceKind::DualSinglePhoton,
                other => {
                    self.errors.push(format!(
                        "line {line}: {key}: expected biphoton or dual_single_photon, got {other:?}"
                    ));
                    SourceKind::Biphoton
                }
            },
            None => SourceKind::Biphoton,
        }
    }

    fn detector(&mut self, prefix: &str) -> DetectorSpec {
        DetectorSpec {
            center_frequency: self.req_f64(&format!("{prefix}.center")),
            bandwidth: self.req_f64(&format!("{prefix}.bandwidth")),
            efficiency: self.opt_f64(&format!("{prefix}.efficiency"), 1.0),
        }
    }

    fn party(&mut self, prefix: &str, _source: &SourceSpec) -> PartyConfig {
        PartyConfig {
            narrow_low: self.detector(&format!("{prefix}.narrow_low")),
            narrow_high: self.detector(&format!("{prefix}.narrow_high")),
            wide: self.detector(&format!("{prefix}.wide")),
            p_wide: self.req_f64(&format!("{prefix}.p_wide")),
            rng_seed: self.req_u64(&format!("{prefix}.seed")),
        }
    }

    fn adversary(&mut self, party_a: &PartyConfig) -> AdversaryConfig {
        let enabled = self.opt_bool("adversary.enabled", false);
        let tapped_arm = match self.raw("adversary.tapped_arm") {
            Some((value, line)) => match value.as_str() {
                "A" => Party::A,
                "B" => Party::B,
                other => {
                    self.errors.push(format!(
                        "line {line}: adversary.tapped_arm: expected A or B, got {other:?}"
                    ));
                    Party::B
                }
            },
            None => Party::B,
        };
        if !enabled {
            // Consume the remaining adversary keys so a disabled block with
            // leftover settings does not trip the unknown-key check.
            for key in [
                "adversary.bandwidth",
                "adversary.efficiency",
                "adversary.strategy",
                "adversary.resend_on_miss",
                "adversary.delay_model",
            ] {
                self.raw(key);
            }
            return AdversaryConfig::disabled();
        }
        let gamma_star = self.req_f64("adversary.bandwidth");
        let efficiency = self.opt_f64("adversary.efficiency", 1.0);
        let omega_low = party_a.narrow_low.center_frequency;
        let omega_high = party_a.narrow_high.center_frequency;
        let strategy = match self.raw("adversary.strategy") {
            Some((value, line)) => match value.as_str() {
                "narrowband_intercept" => EveStrategy::NarrowbandIntercept,
                "wideband_intercept" => EveStrategy::WidebandIntercept,
                other => {
                    self.errors.push(format!(
                        "line {line}: adversary.strategy: expected narrowband_intercept or \
                         wideband_intercept, got {other:?}"
                    ));
                    EveStrategy::classify(gamma_star, (omega_high - omega_low).abs())
                }
            },
            None => EveStrategy::classify(gamma_star, (omega_high - omega_low).abs()),
        };
        let resend_on_miss = self.opt_bool("adversary.resend_on_miss", true);
        let delay_model = match self.raw("adversary.delay_model") {
            Some((value, line)) => match value.as_str() {
                "exponential" => EveDelayModel::Exponential,
                "deterministic_floor" => EveDelayModel::DeterministicFloor,
                other => {
                    self.errors.push(format!(
                        "line {line}: adversary.delay_model: expected exponential or \
                         deterministic_floor, got {other:?}"
                    ));
                    EveDelayModel::Exponential
                }
            },
            None => EveDelayModel::Exponential,
        };
        AdversaryConfig {
            enabled,
            tapped_arm,
            detector_low: DetectorSpec {
                center_frequency: omega_low,
                bandwidth: gamma_star,
                efficiency,
            },
            detector_high: DetectorSpec {
                center_frequency: omega_high,
                bandwidth: gamma_star,
                efficiency,
            },
            strategy,
            resend_on_miss,
            delay_model,
        }
    }

    fn sweep(&mut self) -> Option<SweepSpec> {
        let parameter = self.raw("sweep.parameter");
        let values = self.raw("sweep.values");
        let trials = self.raw("sweep.trials");
        match (parameter, values) {
            (None, None) => {
                if let Some((_, line)) = trials {
                    self.errors.push(format!(
                        "line {line}: sweep.trials given without sweep.parameter/sweep.values"
                    ));
                }
                None
            }
            (Some((parameter, _)), Some((values_text, line))) => {
                let mut values = Vec::new();
                for part in values_text.split(',') {
                    let part = part.trim();
                    if part.is_empty() {
                        continue;
                    }
                    match part.parse() {
                        Ok(v) => values.push(v),
                        Err(_) => self.errors.push(format!(
                            "line {line}: sweep.values: {part:?} is not a number"
                        )),
                    }
                }
                let trials = match trials {
                    Some((t, t_line)) => t.parse().unwrap_or_else(|_| {
                        self.errors.push(format!(
                            "line {t_line}: sweep.trials: expected a positive integer, got {t:?}"
                        ));
                        100
                    }),
                    None => 100,
                };
                Some(SweepSpec {
                    parameter,
                    values,
                    trials,
                })
            }
            (Some(_), None) => {
                self.errors
                    .push("sweep.values: required alongside sweep.parameter".into());
                None
            }
            (None, Some(_)) => {
                self.errors
                    .push("sweep.parameter: required alongside sweep.values".into());
                None
            }
        }
    }

    fn reject_unknown_keys(&mut self) {
        for (key, (_, line)) in &self.entries {
            if !self.taken.contains(key) {
                self.errors
                    .push(format!("line {line}: unknown key {key:?}"));
            }
        }
    }

    fn finish(self) -> Result<(), ConfigError> {
        if self.errors.is_empty() {
            Ok(())
        } else {
            Err(ConfigError {
                violations: self.errors,
            })
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn baseline_is_valid() {
        let report = ScenarioConfig::baseline().validate();
        assert!(report.is_ok(), "errors: {:?}", report.errors);
        assert!(
            report.warnings.is_empty(),
            "warnings: {:?}",
            report.warnings
        );
        assert!(ScenarioConfig::baseline_with_eve().validate().is_ok());
    }

    #[test]
    fn baseline_frequencies_are_exactly_complementary() {
        let config = ScenarioConfig::baseline();
        assert_eq!(
            config.party_a.narrow_low.center_frequency
                + config.party_a.narrow_high.center_frequency,
            config.source.sum_frequency
        );
        assert_eq!(config.frequency_split(), 1e5);
    }

    fn minimal_config() -> String {
        "
        # paper-scale scenario
        source.sum_frequency = 2e15
        party_a.narrow_low.center = 999999999950000
        party_a.narrow_low.bandwidth = 1e2
        party_a.narrow_high.center = 1000000000050000
        party_a.narrow_high.bandwidth = 1e2
        party_a.wide.center = 1e15
        party_a.wide.bandwidth = 1e9
        party_a.p_wide = 0.5
        party_a.seed = 101
        party_b.narrow_low.center = 999999999950000
        party_b.narrow_low.bandwidth = 1e2
        party_b.narrow_high.center = 1000000000050000
        party_b.narrow_high.bandwidth = 1e2
        party_b.wide.center = 1e15
        party_b.wide.bandwidth = 1e9
        party_b.p_wide = 0.5
        party_b.seed = 202
        n_rounds = 200
        threshold = 1e-8
        seed = 42
        "
        .to_string()
    }

    #[test]
    fn minimal_config_parses_with_defaults() {
        let (config, warnings) = ScenarioConfig::parse(&minimal_config()).unwrap();
        assert!(warnings.is_empty());
        assert_eq!(config.channel.light_speed, 3e8);
        assert_eq!(config.channel.timing_resolution, 1e-10);
        assert!(!config.adversary.enabled);
        assert_eq!(config.source.kind, SourceKind::Biphoton);
        assert_eq!(config.n_rounds, 200);
    }

    #[test]
    fn threshold_defaults_to_ten_wide_correlation_times() {
        let text = minimal_config().replace("threshold = 1e-8", "");
        let (config, _) = ScenarioConfig::parse(&text).unwrap();
        assert_eq!(config.threshold, 10.0 / 1e9);
    }

    #[test]
    fn adversary_block_parses() {
        let text = minimal_config()
            + "
        adversary.enabled = true
        adversary.tapped_arm = B
        adversary.bandwidth = 1e4
        adversary.resend_on_miss = true
        ";
        let (config, _) = ScenarioConfig::parse(&text).unwrap();
        assert!(config.adversary.enabled);
        assert_eq!(config.adversary.gamma_star(), 1e4);
        assert_eq!(config.adversary.strategy, EveStrategy::NarrowbandIntercept);
        assert_eq!(
            config.adversary.detector_low.center_frequency,
            config.party_a.narrow_low.center_frequency
        );
    }

    #[test]
    fn every_violation_is_reported_with_location() {
        let text = "
        source.sum_frequency = banana
        party_a.p_wide = 1.5
        n_rounds = 200
        mystery.key = 1
        ";
        let err = ScenarioConfig::parse(text).unwrap_err();
        let joined = err.violations.join("\n");
        // A parse error with its line, a missing required key, an unknown
        // key with its line: all present at once.
        assert!(joined.contains("line 2: source.sum_frequency"), "{joined}");
        assert!(
            joined.contains("party_a.narrow_low.center: required key is missing"),
            "{joined}"
        );
        assert!(
            joined.contains("line 5: unknown key \"mystery.key\""),
            "{joined}"
        );
        assert!(joined.contains("seed: required key is missing"), "{joined}");
    }

    #[test]
    fn cross_field_invariants_are_checked() {
        let text = minimal_config().replace(
            "party_b.narrow_high.center = 1000000000050000",
            "party_b.narrow_high.center = 1000000000050001",
        );
        let err = ScenarioConfig::parse(&text).unwrap_err();
        let joined = err.violations.join("\n");
        assert!(joined.contains("omega_1 + omega_2"), "{joined}");
        assert!(
            joined.contains("must agree on omega_1 and omega_2"),
            "{joined}"
        );
    }

    #[test]
    fn duplicate_keys_are_rejected() {
        let text = minimal_config() + "\nseed = 43\n";
        let err = ScenarioConfig::parse(&text).unwrap_err();
        assert!(err.violations[0].contains("duplicate key \"seed\""));
    }

    #[test]
    fn narrowband_claim_with_wide_detector_is_an_error() {
        let text = minimal_config()
            + "
        adversary.enabled = true
        adversary.bandwidth = 1e7
        adversary.strategy = narrowband_intercept
        ";
        let err = ScenarioConfig::parse(&text).unwrap_err();
        assert!(err
            .violations
            .iter()
            .any(|v| v.contains("cannot distinguish")));
    }

    #[test]
    fn sweep_block_parses_and_validates() {
        let text = minimal_config()
            + "
        sweep.parameter = p_wide
        sweep.values = 0.1, 0.3, 0.5, 0.7, 0.9
        sweep.trials = 50
        ";
        let (config, _) = ScenarioConfig::parse(&text).unwrap();
        let sweep = config.sweep.unwrap();
        assert_eq!(sweep.values, vec![0.1, 0.3, 0.5, 0.7, 0.9]);
        assert_eq!(sweep.trials, 50);

        let unknown = minimal_config()
            + "
        sweep.parameter = warp.factor
        sweep.values = 1, 2
        ";
        let err = ScenarioConfig::parse(&unknown).unwrap_err();
        assert!(err
            .violations
            .iter()
            .any(|v| v.contains("unknown parameter path")));
    }

    #[test]
    fn integer_parameters_sweep_cleanly() {
        // Regression: validation must probe the actual swept values, not a
        // placeholder that no integer parameter would accept.
        let text = minimal_config()
            + "
        sweep.parameter = n_rounds
        sweep.values = 50, 100, 200
        ";
        let (config, _) = ScenarioConfig::parse(&text).unwrap();
        assert_eq!(config.sweep.unwrap().values.len(), 3);
    }

    #[test]
    fn out_of_range_sweep_values_are_rejected_at_load() {
        let text = minimal_config()
            + "
        sweep.parameter = p_wide
        sweep.values = 0.5, 1.5
        ";
        let err = ScenarioConfig::parse(&text).unwrap_err();
        assert!(
            err.violations
                .iter()
                .any(|v| v.contains("sweep.values[1] = 1.5") && v.contains("p_wide")),
            "{err}"
        );
    }

    #[test]
    fn set_parameter_paths() {
        let mut config = ScenarioConfig::baseline_with_eve();
        config.set_parameter("p_wide", 0.7).unwrap();
        assert_eq!(config.party_a.p_wide, 0.7);
        assert_eq!(config.party_b.p_wide, 0.7);
        config.set_parameter("adversary.bandwidth", 1e7).unwrap();
        assert_eq!(config.adversary.gamma_star(), 1e7);
        assert_eq!(config.adversary.strategy, EveStrategy::WidebandIntercept);
        config.set_parameter("n_rounds", 50.0).unwrap();
        assert_eq!(config.n_rounds, 50);
        assert!(config.set_parameter("n_rounds", 1.5).is_err());
        assert!(config.set_parameter("bogus", 1.0).is_err());
    }

    #[test]
    fn jitter_requires_dual_single_photon_kind_to_matter() {
        let text = minimal_config()
            + "
        source.kind = dual_single_photon
        source.emission_time_jitter = 1e-9
        ";
        let (config, _) = ScenarioConfig::parse(&text).unwrap();
        assert_eq!(config.source.kind, SourceKind::DualSinglePhoton);
        assert_eq!(config.source.emission_time_jitter, 1e-9);
    }
}
