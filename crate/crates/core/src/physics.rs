//! Biphoton coincidence statistics.
//!
//! A photon pair with sum frequency ω₀ is registered by two detectors with
//! central frequencies ω_A, ω_B and bandwidths γ_A, γ_B. The joint
//! observable is the relative delay of the reduced registration moments
//! T = t_B − t_A, whose (unnormalized) correlation function is
//!
//! ```text
//!            (2π γ_A γ_B)² · [ θ(T)·exp(−2γ_B T) + θ(−T)·exp(2γ_A T) ]
//!   P(T) =   ─────────────────────────────────────────────────────────
//!                            Ω² + (γ_A + γ_B)²
//! ```
//!
//! with detuning Ω = ω₀ − ω_A − ω_B. This module factors P(T) into a
//! coincidence probability (the Lorentzian lineshape in Ω, scaled by the
//! detector efficiencies so that Ω = 0 with unit efficiencies is certain)
//! and a normalized two-sided exponential delay density, with a seeded
//! inverse-transform sampler for the latter.
//!
//! Natural units throughout: ħ = 1, angular frequencies in s⁻¹, times in
//! seconds. The two limiting behaviours fall out of the factorization:
//! narrow-band detectors (γ → 0) only fire jointly on complementary
//! frequencies (energy correlation), wide-band detectors (γ → ∞) fire at
//! delays |T| ≲ 1/γ → 0 (time correlation).

use std::f64::consts::PI;

use rand::Rng;

use crate::validate::ValidationReport;

/// A photodetector: central frequency, registration bandwidth, efficiency.
///
/// "Wide" versus "narrow" is a protocol-level role, not a physical one; the
/// formulas here treat every bandwidth uniformly.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DetectorSpec {
    /// Central angular frequency ω, s⁻¹.
    pub center_frequency: f64,
    /// Registration bandwidth γ, s⁻¹. Must be positive and finite; the
    /// γ → 0 and γ → ∞ limits are represented by finite extreme values.
    pub bandwidth: f64,
    /// Detection efficiency in [0, 1].
    pub efficiency: f64,
}

impl DetectorSpec {
    pub fn new(center_frequency: f64, bandwidth: f64, efficiency: f64) -> Self {
        DetectorSpec {
            center_frequency,
            bandwidth,
            efficiency,
        }
    }

    /// An ideal (unit-efficiency) detector.
    pub fn ideal(center_frequency: f64, bandwidth: f64) -> Self {
        Self::new(center_frequency, bandwidth, 1.0)
    }

    pub fn validate(&self) -> ValidationReport {
        let mut report = ValidationReport::new();
        if !self.center_frequency.is_finite() || self.center_frequency <= 0.0 {
            report.error(format!(
                "center_frequency must be positive and finite, got {}",
                self.center_frequency
            ));
        }
        if !self.bandwidth.is_finite() || self.bandwidth <= 0.0 {
            report.error(format!(
                "bandwidth must be positive and finite, got {}",
                self.bandwidth
            ));
        }
        if !(0.0..=1.0).contains(&self.efficiency) {
            report.error(format!(
                "efficiency must lie in [0, 1], got {}",
                self.efficiency
            ));
        }
        report
    }
}

/// How the photon pair is produced.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SourceKind {
    /// A biphoton: the two photons' frequencies sum to ω₀ exactly in the
    /// detection model.
    Biphoton,
    /// Two synchronized single-photon emitters at complementary frequencies.
    /// Detection statistics are identical to the biphoton case except that
    /// each arm's registration time gains an emission-time jitter drawn
    /// uniformly from [0, emission_time_jitter).
    DualSinglePhoton,
}

impl SourceKind {
    pub fn as_str(self) -> &'static str {
        match self {
            SourceKind::Biphoton => "biphoton",
            SourceKind::DualSinglePhoton => "dual_single_photon",
        }
    }
}

/// The photon-pair source.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SourceSpec {
    /// Sum frequency ω₀ of the pair, s⁻¹.
    pub sum_frequency: f64,
    pub kind: SourceKind,
    /// Emission-time uncertainty, seconds. Only the dual-single-photon kind
    /// uses it (a biphoton's common emission time cancels in T).
    pub emission_time_jitter: f64,
    /// Width of the pair spectrum g(ω), s⁻¹. Recorded and checked against
    /// detector bandwidths at validation; the correlation function itself
    /// assumes g is broadband and does not depend on it.
    pub spectral_width: f64,
}

impl SourceSpec {
    pub fn biphoton(sum_frequency: f64, spectral_width: f64) -> Self {
        SourceSpec {
            sum_frequency,
            kind: SourceKind::Biphoton,
            emission_time_jitter: 0.0,
            spectral_width,
        }
    }

    pub fn validate(&self) -> ValidationReport {
        let mut report = ValidationReport::new();
        if !self.sum_frequency.is_finite() || self.sum_frequency <= 0.0 {
            report.error(format!(
                "sum_frequency must be positive and finite, got {}",
                self.sum_frequency
            ));
        }
        if !self.emission_time_jitter.is_finite() || self.emission_time_jitter < 0.0 {
            report.error(format!(
                "emission_time_jitter must be non-negative, got {}",
                self.emission_time_jitter
            ));
        }
        if !self.spectral_width.is_finite() || self.spectral_width <= 0.0 {
            report.error(format!(
                "spectral_width must be positive and finite, got {}",
                self.spectral_width
            ));
        }
        report
    }

    /// Broadband-spectrum check: the correlation function is only valid when
    /// g(ω) is wide compared to every detector bandwidth.
    pub fn check_detector(&self, det: &DetectorSpec) -> Option<String> {
        if det.bandwidth > self.spectral_width {
            Some(format!(
                "detector bandwidth {} s^-1 exceeds the source spectral width {} s^-1; \
                 the broadband-spectrum assumption behind the correlation function breaks down",
                det.bandwidth, self.spectral_width
            ))
        } else {
            None
        }
    }
}

/// The normalized distribution of the relative delay T = t_B − t_A.
///
/// Mass `weight_positive` sits on T > 0 as an exponential with rate
/// `rate_positive` = 2γ_B; the rest sits on T < 0 as an exponential with
/// rate `rate_negative` = 2γ_A.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DelayDistribution {
    /// Decay rate of the T > 0 tail, s⁻¹ (= 2γ_B).
    pub rate_positive: f64,
    /// Decay rate of the T < 0 tail, s⁻¹ (= 2γ_A).
    pub rate_negative: f64,
    /// Probability mass on T ≥ 0 (= γ_A / (γ_A + γ_B)).
    pub weight_positive: f64,
}

impl DelayDistribution {
    pub fn weight_negative(&self) -> f64 {
        1.0 - self.weight_positive
    }

    /// Normalized probability density at `delay`.
    pub fn density(&self, delay: f64) -> f64 {
        if delay >= 0.0 {
            self.weight_positive * self.rate_positive * (-self.rate_positive * delay).exp()
        } else {
            self.weight_negative() * self.rate_negative * (self.rate_negative * delay).exp()
        }
    }

    /// Cumulative distribution function.
    pub fn cdf(&self, delay: f64) -> f64 {
        if delay >= 0.0 {
            1.0 - self.weight_positive * (-self.rate_positive * delay).exp()
        } else {
            self.weight_negative() * (self.rate_negative * delay).exp()
        }
    }

    /// Inverse of [`Self::cdf`], the inverse-transform map used by the
    /// sampler. Total on u ∈ [0, 1).
    pub fn inverse_cdf(&self, u: f64) -> f64 {
        let w_neg = self.weight_negative();
        if u < w_neg {
            (u / w_neg).max(f64::MIN_POSITIVE).ln() / self.rate_negative
        } else {
            -(((1.0 - u) / self.weight_positive).ln()) / self.rate_positive
        }
    }

    /// The mean delay (γ_A − γ_B) / (2 γ_A γ_B).
    pub fn mean(&self) -> f64 {
        self.weight_positive / self.rate_positive - self.weight_negative() / self.rate_negative
    }

    /// The delay variance, from the per-side second moments 2/rate².
    pub fn variance(&self) -> f64 {
        let m = self.mean();
        self.weight_positive * 2.0 / (self.rate_positive * self.rate_positive)
            + self.weight_negative() * 2.0 / (self.rate_negative * self.rate_negative)
            - m * m
    }

    /// Quantile of |T|; for γ_A = γ_B = γ this is ln(1/(1−p)) / (2γ).
    pub fn abs_delay_quantile(&self, p: f64) -> f64 {
        // Bisection on P(|T| <= x); monotone, so this is robust for any
        // rate asymmetry.
        let mut lo = 0.0_f64;
        let mut hi = 1.0 / self.rate_positive.min(self.rate_negative);
        let mass = |x: f64| self.cdf(x) - self.cdf(-x);
        while mass(hi) < p {
            hi *= 2.0;
        }
        for _ in 0..200 {
            let mid = 0.5 * (lo + hi);
            if mass(mid) < p {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        0.5 * (lo + hi)
    }
}

/// Detuning Ω = ω₀ − ω_A − ω_B.
pub fn detuning(det_a: &DetectorSpec, det_b: &DetectorSpec, source: &SourceSpec) -> f64 {
    source.sum_frequency - det_a.center_frequency - det_b.center_frequency
}

/// The unnormalized correlation function P(T) of a joint registration.
///
/// Continuous everywhere and maximal at T = 0; the T = 0 point is assigned
/// to the positive branch (both branches equal the peak there, so the choice
/// is not observable).
pub fn correlation_density(
    delay: f64,
    det_a: &DetectorSpec,
    det_b: &DetectorSpec,
    source: &SourceSpec,
) -> f64 {
    correlation_peak(det_a, det_b, source) * delay_shape(delay, det_a.bandwidth, det_b.bandwidth)
}

/// P(0): the (2π γ_A γ_B)² / (Ω² + (γ_A+γ_B)²) prefactor.
pub fn correlation_peak(det_a: &DetectorSpec, det_b: &DetectorSpec, source: &SourceSpec) -> f64 {
    let omega = detuning(det_a, det_b, source);
    let gamma_sum = det_a.bandwidth + det_b.bandwidth;
    let prefactor = 2.0 * PI * det_a.bandwidth * det_b.bandwidth;
    prefactor * prefactor / (omega * omega + gamma_sum * gamma_sum)
}

/// The T-dependent factor of the correlation function, normalized to 1 at
/// T = 0.
fn delay_shape(delay: f64, gamma_a: f64, gamma_b: f64) -> f64 {
    if delay >= 0.0 {
        (-2.0 * gamma_b * delay).exp()
    } else {
        (2.0 * gamma_a * delay).exp()
    }
}

/// Probability that the two detectors register a coincidence.
///
/// The lineshape factor of the correlation function scaled by the detector
/// efficiencies: η_A η_B (γ_A+γ_B)² / (Ω² + (γ_A+γ_B)²). Equals η_A η_B on
/// resonance and decreases strictly with |Ω|.
pub fn coincidence_probability(
    det_a: &DetectorSpec,
    det_b: &DetectorSpec,
    source: &SourceSpec,
) -> f64 {
    let omega = detuning(det_a, det_b, source);
    let gamma_sum = det_a.bandwidth + det_b.bandwidth;
    det_a.efficiency * det_b.efficiency * gamma_sum * gamma_sum
        / (omega * omega + gamma_sum * gamma_sum)
}

/// Detection probability of a photon with a definite (collapsed) frequency.
///
/// After an intercept-resend measurement the pair correlation no longer
/// applies: each detector faces a monochromatic photon. The acceptance is
/// the coincidence lineshape taken against an ideal reference detector of
/// the same bandwidth centered on the photon's complement, i.e.
/// η (2γ)² / ((ν − ω_c)² + (2γ)²).
pub fn definite_frequency_acceptance(
    photon_frequency: f64,
    det: &DetectorSpec,
    source: &SourceSpec,
) -> f64 {
    let reference = DetectorSpec::ideal(source.sum_frequency - photon_frequency, det.bandwidth);
    coincidence_probability(det, &reference, source)
}

/// The normalized delay distribution for a detector pair.
pub fn delay_distribution(det_a: &DetectorSpec, det_b: &DetectorSpec) -> DelayDistribution {
    DelayDistribution {
        rate_positive: 2.0 * det_b.bandwidth,
        rate_negative: 2.0 * det_a.bandwidth,
        weight_positive: det_a.bandwidth / (det_a.bandwidth + det_b.bandwidth),
    }
}

/// Draw one delay by inverse transform; a fixed rng seed therefore yields a
/// reproducible sample sequence.
pub fn sample_delay<R: Rng + ?Sized>(dist: &DelayDistribution, rng: &mut R) -> f64 {
    dist.inverse_cdf(rng.random::<f64>())
}

/// Outcome of one joint detection attempt.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum FireOutcome {
    /// At least one detector did not fire; no timing information exists.
    NoCoincidence,
    /// Both detectors fired with relative delay T = t_B − t_A.
    Coincidence {
        /// Relative delay of the reduced registration moments, seconds.
        delay: f64,
    },
}

impl FireOutcome {
    pub fn fired(&self) -> bool {
        matches!(self, FireOutcome::Coincidence { .. })
    }
}

/// One coincidence trial: fire with `coincidence_probability`, then draw the
/// delay from `delay_distribution`.
pub fn fire_outcome<R: Rng + ?Sized>(
    det_a: &DetectorSpec,
    det_b: &DetectorSpec,
    source: &SourceSpec,
    rng: &mut R,
) -> FireOutcome {
    let p = coincidence_probability(det_a, det_b, source);
    if rng.random::<f64>() < p {
        let delay = sample_delay(&delay_distribution(det_a, det_b), rng);
        FireOutcome::Coincidence { delay }
    } else {
        FireOutcome::NoCoincidence
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::{derive_rng, Domain};
    use proptest::prelude::*;

    fn source(sum: f64) -> SourceSpec {
        SourceSpec::biphoton(sum, 1e12)
    }

    /// Trapezoid quadrature of the normalized density over [lo, hi].
    fn quadrature_mass(dist: &DelayDistribution, lo: f64, hi: f64, n: usize) -> f64 {
        let h = (hi - lo) / n as f64;
        let mut acc = 0.5 * (dist.density(lo) + dist.density(hi));
        for i in 1..n {
            acc += dist.density(lo + h * i as f64);
        }
        acc * h
    }

    #[test]
    fn symmetric_density_reduces_to_two_sided_exponential() {
        // For gamma_a = gamma_b = gamma and zero detuning the correlation
        // function collapses to pi^2 gamma^2 exp(-2 gamma |T|). Check by
        // direct numeric substitution at ten (gamma, T) points.
        let points = [
            (1e2, 0.0),
            (1e2, 3.1e-3),
            (1e2, -8.4e-3),
            (1e5, 2.2e-6),
            (1e5, -9.9e-6),
            (1e9, 1.4e-10),
            (1e9, -7.7e-10),
            (3.7e4, 5.0e-5),
            (5.5e7, -1.0e-8),
            (2.0e3, 1.0e-4),
        ];
        for &(gamma, delay) in &points {
            let det_a = DetectorSpec::ideal(5e14, gamma);
            let det_b = DetectorSpec::ideal(5e14, gamma);
            let src = source(1e15);
            let got = correlation_density(delay, &det_a, &det_b, &src);
            let expected = PI * PI * gamma * gamma * (-2.0 * gamma * delay.abs()).exp();
            assert!(
                (got / expected - 1.0).abs() < 1e-12,
                "gamma={gamma} T={delay}: got {got}, expected {expected}"
            );
        }
    }

    #[test]
    fn density_decays_with_detuning_at_fixed_delay() {
        let src = source(1e15);
        let det_b = DetectorSpec::ideal(5e14, 1e3);
        let mut last = f64::INFINITY;
        for k in 1..8 {
            let det_a = DetectorSpec::ideal(5e14 + 10f64.powi(k), 1e3);
            let value = correlation_density(0.0, &det_a, &det_b, &src);
            assert!(value < last, "not monotone at detuning 1e{k}");
            last = value;
        }
    }

    #[test]
    fn density_symmetric_under_delay_sign_for_equal_bandwidths() {
        let det = DetectorSpec::ideal(5e14, 4.2e5);
        let src = source(1e15);
        for delay in [1e-7, 3e-6, 9e-6] {
            let plus = correlation_density(delay, &det, &det, &src);
            let minus = correlation_density(-delay, &det, &det, &src);
            assert_eq!(plus, minus);
        }
    }

    #[test]
    fn coincidence_certain_on_resonance_with_ideal_detectors() {
        let det_a = DetectorSpec::ideal(4e14, 1e9);
        let det_b = DetectorSpec::ideal(6e14, 1e2);
        assert_eq!(coincidence_probability(&det_a, &det_b, &source(1e15)), 1.0);
    }

    #[test]
    fn coincidence_half_at_half_width_detuning() {
        // Lorentzian half-width-at-half-maximum: detuning equal to the
        // bandwidth sum halves the peak.
        let det_a = DetectorSpec::ideal(4e14, 3e3);
        let det_b = DetectorSpec::ideal(6e14, 7e3);
        let gamma_sum = 1e4;
        let src = source(1e15 + gamma_sum);
        assert!((coincidence_probability(&det_a, &det_b, &src) - 0.5).abs() < 1e-15);
    }

    #[test]
    fn complementary_narrow_detectors_fire_but_mismatched_ones_do_not() {
        // omega_1 + omega_2 = omega_0 fires with certainty; using omega_1
        // twice leaves detuning 1e5 and the Lorentzian drops to ~4e-6.
        let omega_low = 1e15 - 5e4;
        let omega_high = 1e15 + 5e4;
        let src = source(2e15);
        let at_low = DetectorSpec::ideal(omega_low, 1e2);
        let at_high = DetectorSpec::ideal(omega_high, 1e2);
        assert_eq!(coincidence_probability(&at_low, &at_high, &src), 1.0);

        let expected = 4e4 / (1e10 + 4e4);
        let got = coincidence_probability(&at_low, &at_low, &src);
        assert!((got / expected - 1.0).abs() < 1e-12);
        assert!((got / 4e-6 - 1.0).abs() < 1e-4);
    }

    #[test]
    fn narrow_band_limit_kills_off_resonance_coincidences() {
        // Energy-correlation limit: fixed detuning, shrinking bandwidths.
        let src = source(1e15);
        let mut last = 1.0;
        for k in 0..6 {
            let gamma = 1e4 / 10f64.powi(k);
            let det = DetectorSpec::ideal(5e14 + 5e4, gamma);
            let other = DetectorSpec::ideal(5e14, gamma);
            let p = coincidence_probability(&det, &other, &src);
            assert!(p < last);
            last = p;
        }
        assert!(last < 1e-9);

        // On resonance the probability stays eta_a * eta_b at any bandwidth.
        for gamma in [1e-2, 1e2, 1e6, 1e10] {
            let det_a = DetectorSpec {
                center_frequency: 4e14,
                bandwidth: gamma,
                efficiency: 0.7,
            };
            let det_b = DetectorSpec {
                center_frequency: 6e14,
                bandwidth: gamma,
                efficiency: 0.5,
            };
            let p = coincidence_probability(&det_a, &det_b, &source(1e15));
            assert!((p - 0.35).abs() < 1e-15);
        }
    }

    #[test]
    fn wide_band_limit_shrinks_delays() {
        // Time-correlation limit: the 99th percentile of |T| stays below 3/gamma.
        for gamma in [1e6, 1e8, 1e10] {
            let det = DetectorSpec::ideal(5e14, gamma);
            let dist = delay_distribution(&det, &det);
            let q99 = dist.abs_delay_quantile(0.99);
            assert!(q99 <= 3.0 / gamma, "q99={q99} at gamma={gamma}");
            // ln(100)/(2 gamma) analytically.
            assert!((q99 * 2.0 * gamma / 100f64.ln() - 1.0).abs() < 1e-6);
        }
    }

    #[test]
    fn delay_weight_splits_evenly_for_equal_bandwidths() {
        let det = DetectorSpec::ideal(5e14, 2e3);
        let dist = delay_distribution(&det, &det);
        assert_eq!(dist.weight_positive, 0.5);
        // Independent check by numeric quadrature of the two sides.
        let plus = quadrature_mass(&dist, 0.0, 20.0 / dist.rate_positive, 40_000);
        let minus = quadrature_mass(&dist, -20.0 / dist.rate_negative, 0.0, 40_000);
        assert!((plus - 0.5).abs() < 1e-6);
        assert!((minus - 0.5).abs() < 1e-6);
    }

    #[test]
    fn delay_mean_matches_closed_form_and_monte_carlo() {
        let det_a = DetectorSpec::ideal(4e14, 8e3);
        let det_b = DetectorSpec::ideal(6e14, 2e3);
        let dist = delay_distribution(&det_a, &det_b);
        let expected =
            (det_a.bandwidth - det_b.bandwidth) / (2.0 * det_a.bandwidth * det_b.bandwidth);
        assert!((dist.mean() / expected - 1.0).abs() < 1e-12);

        let n = 1_000_000u64;
        let mut rng = derive_rng(7, Domain::World, 0);
        let mut sum = 0.0;
        let mut sum_sq = 0.0;
        for _ in 0..n {
            let t = sample_delay(&dist, &mut rng);
            sum += t;
            sum_sq += t * t;
        }
        let mc_mean = sum / n as f64;
        let mc_var = sum_sq / n as f64 - mc_mean * mc_mean;
        let se = (dist.variance() / n as f64).sqrt();
        assert!(
            (mc_mean - expected).abs() < 3.0 * se,
            "MC mean {mc_mean} vs {expected} (se {se})"
        );
        assert!((mc_var / dist.variance() - 1.0).abs() < 0.01);
    }

    #[test]
    fn positive_mass_matches_weight_under_sampling() {
        let det = DetectorSpec::ideal(5e14, 1e4);
        let dist = delay_distribution(&det, &det);
        let n = 1_000_000u64;
        let mut rng = derive_rng(11, Domain::World, 0);
        let positives = (0..n)
            .filter(|_| sample_delay(&dist, &mut rng) > 0.0)
            .count();
        let frac = positives as f64 / n as f64;
        assert!((frac - 0.5).abs() < 0.002, "positive fraction {frac}");
    }

    #[test]
    fn sampler_is_reproducible() {
        let det_a = DetectorSpec::ideal(4e14, 1e3);
        let det_b = DetectorSpec::ideal(6e14, 9e2);
        let dist = delay_distribution(&det_a, &det_b);
        let mut r1 = derive_rng(99, Domain::World, 3);
        let mut r2 = derive_rng(99, Domain::World, 3);
        for _ in 0..1000 {
            assert_eq!(sample_delay(&dist, &mut r1), sample_delay(&dist, &mut r2));
        }
    }

    #[test]
    fn narrow_receiver_is_locally_flat() {
        // Wide A, narrow B: nearly all mass on T > 0 and the positive-side
        // density is almost constant over windows much shorter than 1/gamma_b.
        let det_a = DetectorSpec::ideal(5e14, 1e9);
        let det_b = DetectorSpec::ideal(5e14, 1e2);
        let dist = delay_distribution(&det_a, &det_b);
        assert!(dist.weight_positive > 1.0 - 1e-6);
        let window = 1e-5; // 1/gamma_b = 1e-2
        let ratio = dist.density(window) / dist.density(0.0);
        assert!((ratio - 1.0).abs() < 3e-3, "density ratio {ratio}");
    }

    #[test]
    fn fire_outcome_edge_cases() {
        let src = source(1e15);
        let dead = DetectorSpec {
            center_frequency: 5e14,
            bandwidth: 1e6,
            efficiency: 0.0,
        };
        let live = DetectorSpec::ideal(5e14, 1e6);
        let mut rng = derive_rng(1, Domain::World, 0);
        for _ in 0..200 {
            assert_eq!(
                fire_outcome(&dead, &live, &src, &mut rng),
                FireOutcome::NoCoincidence
            );
        }
        for _ in 0..200 {
            assert!(fire_outcome(&live, &live, &src, &mut rng).fired());
        }
    }

    #[test]
    fn fire_outcome_rate_at_half_width() {
        let det_a = DetectorSpec::ideal(4e14, 3e3);
        let det_b = DetectorSpec::ideal(6e14, 7e3);
        let src = source(1e15 + 1e4);
        let n = 100_000u64;
        let mut rng = derive_rng(5, Domain::World, 0);
        let fired = (0..n)
            .filter(|_| fire_outcome(&det_a, &det_b, &src, &mut rng).fired())
            .count();
        let frac = fired as f64 / n as f64;
        assert!((frac - 0.5).abs() < 0.01, "fired fraction {frac}");
    }

    #[test]
    fn definite_frequency_acceptance_matches_matched_filter_form() {
        let src = source(2e15);
        let det = DetectorSpec::ideal(1e15 - 5e4, 1e5);
        // On-center photon: acceptance equals the efficiency.
        let on = definite_frequency_acceptance(1e15 - 5e4, &det, &src);
        assert!((on - 1.0).abs() < 1e-15);
        // Offset photon: eta (2 gamma)^2 / (delta^2 + (2 gamma)^2).
        let off = definite_frequency_acceptance(1e15 + 5e4, &det, &src);
        let delta = 1e5_f64;
        let expected = (2e5 * 2e5) / (delta * delta + 2e5 * 2e5);
        assert!((off / expected - 1.0).abs() < 1e-12);
    }

    #[test]
    fn validation_catches_bad_fields() {
        let bad = DetectorSpec {
            center_frequency: 1e15,
            bandwidth: 0.0,
            efficiency: 1.3,
        };
        let report = bad.validate();
        assert_eq!(report.errors.len(), 2);
        assert!(DetectorSpec::ideal(1e15, 1e5).validate().is_ok());

        let mut src = source(1e15);
        src.emission_time_jitter = -1.0;
        assert_eq!(src.validate().errors.len(), 1);
    }

    #[test]
    fn spectral_width_warning() {
        let src = source(1e15);
        let too_wide = DetectorSpec::ideal(5e14, 1e13);
        assert!(src.check_detector(&too_wide).is_some());
        assert!(src
            .check_detector(&DetectorSpec::ideal(5e14, 1e9))
            .is_none());
    }

    proptest! {
        /// The normalized tail shape is exact to round-off: P(T)/P(0) equals
        /// exp(-2 gamma_b T) for T >= 0 and exp(2 gamma_a T) for T < 0.
        /// The delay is drawn in units of the relevant correlation time.
        #[test]
        fn tail_ratio_identity(
            log_ga in 0.0f64..9.0,
            log_gb in 0.0f64..9.0,
            scaled_t in -30.0f64..30.0,
            detune in -1e6f64..1e6,
        ) {
            let det_a = DetectorSpec::ideal(5e14, 10f64.powf(log_ga));
            let det_b = DetectorSpec::ideal(5e14 + detune, 10f64.powf(log_gb));
            let src = source(1e15);
            let t = scaled_t
                / (2.0 * if scaled_t >= 0.0 { det_b.bandwidth } else { det_a.bandwidth });
            let ratio = correlation_density(t, &det_a, &det_b, &src)
                / correlation_density(0.0, &det_a, &det_b, &src);
            let expected = if t >= 0.0 {
                (-2.0 * det_b.bandwidth * t).exp()
            } else {
                (2.0 * det_a.bandwidth * t).exp()
            };
            prop_assert!(
                (ratio / expected - 1.0).abs() < 5e-16,
                "ratio {} vs {}", ratio, expected
            );
        }

        /// Density is strictly positive wherever exp is representable, and
        /// maximal at 0.
        #[test]
        fn density_positive_and_peaked(
            scaled_t in -30.0f64..30.0,
            log_g in 0.0f64..8.0,
        ) {
            let det = DetectorSpec::ideal(5e14, 10f64.powf(log_g));
            let src = source(1e15);
            let t = scaled_t / (2.0 * det.bandwidth);
            let value = correlation_density(t, &det, &det, &src);
            prop_assert!(value > 0.0);
            prop_assert!(value <= correlation_density(0.0, &det, &det, &src));
        }

        /// The inverse CDF really inverts the CDF.
        #[test]
        fn inverse_cdf_round_trip(
            u in 1e-9f64..1.0,
            log_ga in 0.0f64..8.0,
            log_gb in 0.0f64..8.0,
        ) {
            let det_a = DetectorSpec::ideal(4e14, 10f64.powf(log_ga));
            let det_b = DetectorSpec::ideal(6e14, 10f64.powf(log_gb));
            let dist = delay_distribution(&det_a, &det_b);
            let t = dist.inverse_cdf(u);
            prop_assert!((dist.cdf(t) - u).abs() < 1e-9);
        }

        /// Probability mass always splits into weight_positive + weight_negative = 1
        /// with weight_positive in (0, 1).
        #[test]
        fn weights_partition_unity(
            log_ga in -2.0f64..9.0,
            log_gb in -2.0f64..9.0,
        ) {
            let det_a = DetectorSpec::ideal(4e14, 10f64.powf(log_ga));
            let det_b = DetectorSpec::ideal(6e14, 10f64.powf(log_gb));
            let dist = delay_distribution(&det_a, &det_b);
            prop_assert!(dist.weight_positive > 0.0 && dist.weight_positive < 1.0);
            prop_assert_eq!(dist.weight_positive + dist.weight_negative(), 1.0);
        }
    }
}
