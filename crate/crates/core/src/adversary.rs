//! The intercept-resend eavesdropper.
//!
//! To learn a key bit Eve must tell photons at ω₁ and ω₂ apart, which takes
//! a detector with bandwidth γ★ < |ω₂ − ω₁|. The time-energy uncertainty
//! relation then forces her measurement to last of order 1/γ★, so every
//! photon she touches reaches the line late. Her delay is modeled, like any
//! narrow-band receiver's registration time, as an exponential with rate
//! 2γ★ (mean 1/(2γ★)); a deterministic 1/γ★ floor ships as an alternative
//! for sensitivity analysis.
//!
//! The information/disturbance tradeoff is the whole story: shrinking γ★
//! sharpens her frequency discrimination but stretches her delay, and
//! growing γ★ past |ω₂ − ω₁| makes both her detectors accept both
//! frequencies, driving her bit accuracy to a coin flip.

use rand::Rng;

use crate::channel::Party;
use crate::physics::{self, DetectorSpec, SourceSpec};
use crate::rng::{derive_rng, Domain};
use crate::validate::ValidationReport;

/// Which regime the attack is declared to operate in. Behaviour is the same
/// set of formulas either way; the label is validated against γ★ so a
/// configuration cannot claim narrow-band discrimination it does not have.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EveStrategy {
    NarrowbandIntercept,
    WidebandIntercept,
}

impl EveStrategy {
    pub fn as_str(self) -> &'static str {
        match self {
            EveStrategy::NarrowbandIntercept => "narrowband_intercept",
            EveStrategy::WidebandIntercept => "wideband_intercept",
        }
    }

    /// The regime a bandwidth actually falls in.
    pub fn classify(gamma_star: f64, frequency_split: f64) -> EveStrategy {
        if gamma_star < frequency_split {
            EveStrategy::NarrowbandIntercept
        } else {
            EveStrategy::WidebandIntercept
        }
    }
}

/// How Eve's measurement duration is drawn.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EveDelayModel {
    /// Exponential with rate 2γ★, matching the positive branch of the
    /// correlation function for a narrow-band receiver. Default.
    Exponential,
    /// A hard floor: exactly 1/γ★ every time.
    DeterministicFloor,
}

impl EveDelayModel {
    pub fn as_str(self) -> &'static str {
        match self {
            EveDelayModel::Exponential => "exponential",
            EveDelayModel::DeterministicFloor => "deterministic_floor",
        }
    }
}

/// Eve's strategy and equipment.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AdversaryConfig {
    pub enabled: bool,
    /// Which arm of the line she taps. One arm per run.
    pub tapped_arm: Party,
    /// Her detector at ω₁; bandwidth γ★.
    pub detector_low: DetectorSpec,
    /// Her detector at ω₂; same bandwidth γ★.
    pub detector_high: DetectorSpec,
    pub strategy: EveStrategy,
    /// When her detector misses, forward a photon at her best guess anyway
    /// (default). With `false` the round is lost downstream, which depresses
    /// the coincidence rate — a second observable.
    pub resend_on_miss: bool,
    pub delay_model: EveDelayModel,
}

impl AdversaryConfig {
    /// A disabled adversary; the round engine treats this identically to
    /// having no adversary at all.
    pub fn disabled() -> Self {
        AdversaryConfig {
            enabled: false,
            tapped_arm: Party::B,
            detector_low: DetectorSpec::ideal(1.0, 1.0),
            detector_high: DetectorSpec::ideal(2.0, 1.0),
            strategy: EveStrategy::NarrowbandIntercept,
            resend_on_miss: true,
            delay_model: EveDelayModel::Exponential,
        }
    }

    /// An intercept-resend attacker with detectors at the given frequencies
    /// and measurement bandwidth γ★. The strategy label follows from γ★.
    pub fn intercept_resend(
        tapped_arm: Party,
        omega_low: f64,
        omega_high: f64,
        gamma_star: f64,
    ) -> Self {
        AdversaryConfig {
            enabled: true,
            tapped_arm,
            detector_low: DetectorSpec::ideal(omega_low, gamma_star),
            detector_high: DetectorSpec::ideal(omega_high, gamma_star),
            strategy: EveStrategy::classify(gamma_star, omega_high - omega_low),
            resend_on_miss: true,
            delay_model: EveDelayModel::Exponential,
        }
    }

    /// Measurement bandwidth γ★, s⁻¹ (ΔE of the uncertainty relation).
    pub fn gamma_star(&self) -> f64 {
        self.detector_low.bandwidth
    }

    /// Replace γ★ on both detectors, reclassifying the strategy label.
    pub fn with_gamma_star(mut self, gamma_star: f64, frequency_split: f64) -> Self {
        self.detector_low.bandwidth = gamma_star;
        self.detector_high.bandwidth = gamma_star;
        self.strategy = EveStrategy::classify(gamma_star, frequency_split);
        self
    }

    pub fn validate(&self, frequency_split: f64) -> ValidationReport {
        let mut report = ValidationReport::new();
        if !self.enabled {
            return report;
        }
        report.absorb("detector_low", self.detector_low.validate());
        report.absorb("detector_high", self.detector_high.validate());
        if self.detector_low.bandwidth != self.detector_high.bandwidth {
            report.error(format!(
                "both detectors must share one bandwidth gamma_star, got {} and {}",
                self.detector_low.bandwidth, self.detector_high.bandwidth
            ));
        }
        if self.strategy == EveStrategy::NarrowbandIntercept && self.gamma_star() >= frequency_split
        {
            report.error(format!(
                "narrowband_intercept requires gamma_star < |omega_2 - omega_1| \
                 ({} >= {}): a wide-band detector cannot distinguish the two photons",
                self.gamma_star(),
                frequency_split
            ));
        }
        report
    }
}

/// What one interception produced.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct InterceptOutcome {
    /// The key bit Eve learned, when her detector fired.
    pub learned_bit: Option<u8>,
    /// Whether a substitute photon went back onto the line. `false` means
    /// the downstream detector cannot fire this round.
    pub resent: bool,
    /// Measurement duration added to the tapped arm, seconds. Never
    /// negative: she can delay a photon, not advance it.
    pub added_delay: f64,
    /// Frequency of the substitute photon, present iff resent.
    pub resent_frequency: Option<f64>,
}

impl InterceptOutcome {
    /// An untouched photon (adversary disabled).
    pub fn pass_through(photon_frequency: f64) -> Self {
        InterceptOutcome {
            learned_bit: None,
            resent: true,
            added_delay: 0.0,
            resent_frequency: Some(photon_frequency),
        }
    }

    /// Eve's best estimate of the key bit: what she measured when her
    /// detector fired, otherwise the bit of the frequency she guessed.
    pub fn believed_bit(&self, cfg: &AdversaryConfig) -> Option<u8> {
        self.learned_bit.or_else(|| {
            self.resent_frequency
                .map(|f| bit_of_frequency(f == cfg.detector_low.center_frequency, cfg.tapped_arm))
        })
    }
}

/// The key bit carried by a photon on the given arm. Matches the sifting
/// convention: A's photon at ω₁ (and hence B's at ω₂) is logical 1.
pub fn bit_of_frequency(is_low: bool, arm: Party) -> u8 {
    match (arm, is_low) {
        (Party::A, true) | (Party::B, false) => 1,
        (Party::A, false) | (Party::B, true) => 0,
    }
}

/// Intercept one photon of known (collapsed) frequency.
///
/// Eve does not know the bit, so she picks one of her two detectors at
/// random. The pick fires with the Lorentzian acceptance of a
/// definite-frequency photon at her γ★; on a fire she learns the bit and
/// resends at the measured frequency. On a miss she infers the opposite
/// frequency (the binary world leaves no other candidate) and, with
/// `resend_on_miss`, forwards a photon there — learning nothing. Every
/// forwarded photon is late by her measurement duration.
pub fn intercept<R: Rng + ?Sized>(
    photon_frequency: f64,
    cfg: &AdversaryConfig,
    source: &SourceSpec,
    rng: &mut R,
) -> InterceptOutcome {
    if !cfg.enabled {
        return InterceptOutcome::pass_through(photon_frequency);
    }
    let tried_low = rng.random::<f64>() < 0.5;
    let tried = if tried_low {
        &cfg.detector_low
    } else {
        &cfg.detector_high
    };
    let acceptance = physics::definite_frequency_acceptance(photon_frequency, tried, source);
    let fired = rng.random::<f64>() < acceptance;

    let (learned_bit, resent, resent_frequency) = if fired {
        let bit = bit_of_frequency(tried_low, cfg.tapped_arm);
        (Some(bit), true, Some(tried.center_frequency))
    } else if cfg.resend_on_miss {
        let guess = if tried_low {
            &cfg.detector_high
        } else {
            &cfg.detector_low
        };
        (None, true, Some(guess.center_frequency))
    } else {
        (None, false, None)
    };

    let added_delay = if resent {
        match cfg.delay_model {
            EveDelayModel::Exponential => {
                -(1.0 - rng.random::<f64>()).ln() / (2.0 * cfg.gamma_star())
            }
            EveDelayModel::DeterministicFloor => 1.0 / cfg.gamma_star(),
        }
    } else {
        0.0
    };

    InterceptOutcome {
        learned_bit,
        resent,
        added_delay,
        resent_frequency,
    }
}

/// Inject the measurement delay into the tapped arm's raw detection time.
pub fn apply_to_round(outcome: &InterceptOutcome, arm_time: f64) -> f64 {
    arm_time + outcome.added_delay
}

/// One point of the information/disturbance curve.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TradeoffPoint {
    pub gamma_star: f64,
    /// Fraction of intercepts where Eve's belief matched the key bit.
    pub accuracy: f64,
    /// Empirical mean of her added delay, seconds.
    pub mean_delay: f64,
    pub samples: u64,
}

/// Closed-form bit accuracy for ideal-efficiency detectors: on a matched
/// pick she always fires and is right; on a mismatched pick she is wrong
/// exactly when the tail acceptance fires her detector anyway.
pub fn analytic_accuracy(gamma_star: f64, frequency_split: f64) -> f64 {
    let width = 2.0 * gamma_star;
    let tail = width * width / (frequency_split * frequency_split + width * width);
    1.0 - 0.5 * tail
}

/// Measure one tradeoff point by direct Monte Carlo over intercepts.
///
/// Every γ★ evaluated with the same seed consumes identical uniforms
/// (interceptions draw a fixed three uniforms when `resend_on_miss` holds),
/// so sweep curves are coupled: the per-sample correctness indicator is
/// monotone in γ★ and the sampled accuracy column inherits monotonicity.
pub fn tradeoff_point(
    cfg: &AdversaryConfig,
    source: &SourceSpec,
    omega_low: f64,
    omega_high: f64,
    n_samples: u64,
    seed: u64,
) -> TradeoffPoint {
    let mut rng = derive_rng(seed, Domain::Eve, 0);
    let mut correct = 0u64;
    let mut delay_sum = 0.0;
    for _ in 0..n_samples {
        let is_low = rng.random::<f64>() < 0.5;
        let photon = if is_low { omega_low } else { omega_high };
        let truth = bit_of_frequency(is_low, cfg.tapped_arm);
        let outcome = intercept(photon, cfg, source, &mut rng);
        if outcome.believed_bit(cfg) == Some(truth) {
            correct += 1;
        }
        delay_sum += outcome.added_delay;
    }
    TradeoffPoint {
        gamma_star: cfg.gamma_star(),
        accuracy: correct as f64 / n_samples as f64,
        mean_delay: delay_sum / n_samples as f64,
        samples: n_samples,
    }
}

/// Sweep γ★ with common random numbers across the rows.
pub fn tradeoff_curve(
    base: &AdversaryConfig,
    source: &SourceSpec,
    omega_low: f64,
    omega_high: f64,
    gamma_stars: &[f64],
    n_samples: u64,
    seed: u64,
) -> Vec<TradeoffPoint> {
    gamma_stars
        .iter()
        .map(|&gamma| {
            let cfg = base.with_gamma_star(gamma, omega_high - omega_low);
            tradeoff_point(&cfg, source, omega_low, omega_high, n_samples, seed)
        })
        .collect()
}
