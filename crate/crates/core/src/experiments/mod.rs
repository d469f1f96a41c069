//! End-to-end experiment runners that produce [`ExperimentReport`]s.

pub mod binomial;
pub mod report;
pub mod stats;

use std::f64::consts::FRAC_PI_2;

use rand::Rng;

pub use binomial::{
    binomial_coefficient, binomial_pmf, central_pmf, central_pmf_asymptotic, discrimination_power,
    BinomialSpec,
};
pub use report::{ExperimentReport, ResultRow};
pub use stats::{chi_square, ChiSquare};

use crate::cloning::{
    average_fidelity, bob_unconditioned_state, flash_experiment, shrinking_factor, standard_probes,
    CloningChannel, MeasurementSetting,
};
use crate::ensemble::{Ensemble, MAX_WINDOW};
use crate::error::{Error, Result};
use crate::rng;
use crate::state::trace_distance;

/// Probability that each palette state passes the `|0⟩⟨0|` filter.
fn pass_probabilities(e: &Ensemble) -> Vec<f64> {
    e.palette()
        .iter()
        .map(|s| s.amplitudes()[0].norm_sqr())
        .collect()
}

/// Probability that each palette state yields `σ_z = +1`; same as passing the filter.
fn up_probabilities(e: &Ensemble) -> Result<Vec<f64>> {
    if e.palette().iter().any(|s| s.dim() != 2) {
        return Err(Error::InvalidArgument(
            "σ_z sampling needs qubit ensembles".into(),
        ));
    }
    Ok(pass_probabilities(e))
}

fn mean_and_error(sum: f64, sum_sq: f64, n: usize) -> (f64, f64) {
    let n = n as f64;
    let mean = sum / n;
    let var = if n > 1.0 {
        ((sum_sq - n * mean * mean) / (n - 1.0)).max(0.0)
    } else {
        0.0
    };
    (mean, (var / n).sqrt())
}

/// Sends `trials` batches of `n` photons through a `|0⟩⟨0|` filter and tallies how many pass.
///
/// Trial `t` uses substream `t` of `seed`. The reference column is the binomial law for
/// independent photons with the ensemble's single-particle pass probability.
pub fn filter_experiment(
    ensemble: &Ensemble,
    name: &str,
    n: usize,
    trials: usize,
    seed: u64,
) -> Result<ExperimentReport> {
    if n < 2 || !n.is_multiple_of(2) {
        return Err(Error::InvalidArgument(format!(
            "N must be even and at least 2, got {n}"
        )));
    }
    if trials == 0 {
        return Err(Error::InvalidArgument("need at least one trial".into()));
    }
    if let Some(size) = ensemble.fixed_size() {
        if size != n {
            return Err(Error::InvalidArgument(format!(
                "{name} holds exactly {size} particles, not {n}"
            )));
        }
    }
    let pass = pass_probabilities(ensemble);
    let mut histogram = vec![0u64; n + 1];
    for t in 0..trials {
        let mut rng = rng::substream(seed, t as u64);
        let indices = ensemble.sample_indices_with(n, &mut rng)?;
        let count = indices
            .iter()
            .filter(|&&k| rng.random::<f64>() < pass[k])
            .count();
        histogram[count] += 1;
    }

    let p_single = ensemble.single_particle_operator().matrix()[(0, 0)]
        .re
        .clamp(0.0, 1.0);
    let reference: Vec<f64> = (0..=n as u64)
        .map(|k| BinomialSpec::new(n as u64, k, p_single).map(|s| binomial_pmf(&s)))
        .collect::<Result<_>>()?;

    let mut report = ExperimentReport::new("filter", seed)
        .param("ensemble", name)
        .param("n", n)
        .param("trials", trials);
    let (mut sum, mut sum_sq) = (0.0, 0.0);
    for (k, (&count, &p_ref)) in histogram.iter().zip(&reference).enumerate() {
        sum += k as f64 * count as f64;
        sum_sq += (k * k) as f64 * count as f64;
        report.results.push(
            ResultRow::new(format!("count_{k}"))
                .with("count", k as f64)
                .with("frequency", count as f64 / trials as f64)
                .with("reference_pmf", p_ref),
        );
    }
    let (mean, se) = mean_and_error(sum, sum_sq, trials);
    let chi = chi_square(&histogram, &reference);
    report.results.push(
        ResultRow::new("summary")
            .with("mean", mean)
            .with("mean_std_error", se)
            .with("half_frequency", histogram[n / 2] as f64 / trials as f64)
            .with("half_reference", reference[n / 2])
            .with("pass_probability", p_single)
            .with("chi_square", chi.statistic)
            .with("chi_square_dof", chi.dof as f64)
            .with("chi_square_p_value", chi.p_value),
    );
    report.notes.push(
        "reference_pmf is the binomial law for independent photons with the single-particle pass probability"
            .into(),
    );
    Ok(report)
}

/// Success probability of the count-based discrimination for `N = 2, 4, …, n_max`.
pub fn discrimination_curve(n_max: usize) -> Result<ExperimentReport> {
    if n_max < 2 {
        return Err(Error::InvalidArgument(format!(
            "n_max must be at least 2, got {n_max}"
        )));
    }
    let mut report = ExperimentReport::new("discriminate", 0).param("n_max", n_max);
    for n in (2..=n_max as u64).step_by(2) {
        let central = central_pmf(n)?;
        report.results.push(
            ResultRow::new(format!("n_{n}"))
                .with("n", n as f64)
                .with("central_pmf", central)
                .with("central_pmf_asymptotic", central_pmf_asymptotic(n))
                .with("success_probability", discrimination_power(n)?),
        );
    }
    report.notes.push(
        "decision rule supplied by this tool: equal priors, declare the |+>/|-> ensemble unless exactly N/2 photons pass"
            .into(),
    );
    Ok(report)
}

/// Exact and sampled `Σ_z` moments of two ensembles for window sizes `1..=m_max`.
///
/// Sample `s` of window size `m` for ensemble `e` (0 or 1) uses substream
/// `(e << 56) | (m << 48) | s`. Fixed-composition ensembles draw their full `N` particles
/// and keep the first `m`.
pub fn moments_experiment(
    pair: [(&str, &Ensemble); 2],
    m_max: usize,
    mc_samples: usize,
    seed: u64,
) -> Result<ExperimentReport> {
    if !(1..=MAX_WINDOW).contains(&m_max) {
        return Err(Error::OutOfRange {
            what: "m_max",
            value: m_max,
            min: 1,
            max: MAX_WINDOW,
        });
    }
    if mc_samples >= 1 << 48 {
        return Err(Error::InvalidArgument(
            "too many Monte Carlo samples".into(),
        ));
    }
    let mut report = ExperimentReport::new("moments", seed)
        .param("a", pair[0].0)
        .param("b", pair[1].0)
        .param("m_max", m_max)
        .param("mc_samples", mc_samples);
    let ups = [up_probabilities(pair[0].1)?, up_probabilities(pair[1].1)?];
    for m in 1..=m_max {
        let mut row = ResultRow::new(format!("m_{m}")).with("m", m as f64);
        for (slot, ((_, e), label)) in pair.into_iter().zip(["a", "b"]).enumerate() {
            let exact = e.sigma_z_moments(m)?;
            row = row
                .with(&format!("{label}_mean"), exact.mean)
                .with(&format!("{label}_second_moment"), exact.second_moment);
            if mc_samples == 0 {
                continue;
            }
            let draw = e.fixed_size().unwrap_or(m);
            let up = &ups[slot];
            let (mut s1, mut s1_sq, mut s2, mut s2_sq) = (0.0, 0.0, 0.0, 0.0);
            for s in 0..mc_samples {
                let stream = ((slot as u64) << 56) | ((m as u64) << 48) | s as u64;
                let mut rng = rng::substream(seed, stream);
                let indices = e.sample_indices_with(draw, &mut rng)?;
                let total: i64 = indices[..m]
                    .iter()
                    .map(|&k| if rng.random::<f64>() < up[k] { 1 } else { -1 })
                    .sum();
                let x = total as f64;
                s1 += x;
                s1_sq += x * x;
                s2 += x * x;
                s2_sq += x * x * x * x;
            }
            let (mean, mean_se) = mean_and_error(s1, s1_sq, mc_samples);
            let (second, second_se) = mean_and_error(s2, s2_sq, mc_samples);
            row = row
                .with(&format!("{label}_mc_mean"), mean)
                .with(&format!("{label}_mc_mean_std_error"), mean_se)
                .with(&format!("{label}_mc_second_moment"), second)
                .with(&format!("{label}_mc_second_moment_std_error"), second_se);
        }
        report.results.push(row);
    }
    Ok(report)
}

/// Bob's two-clone state distance between Alice measuring `σ_φ` and `σ_3`, for the perfect
/// and the Bužek–Hillery cloner, plus the single-particle distance.
pub fn flash_report(phis: &[f64]) -> Result<ExperimentReport> {
    if let Some(bad) = phis.iter().find(|p| !p.is_finite()) {
        return Err(Error::InvalidArgument(format!("angle {bad} is not finite")));
    }
    let perfect = CloningChannel::perfect();
    let bh = CloningChannel::buzek_hillery_default();
    let base_perfect = flash_experiment(&perfect, MeasurementSetting::Sigma3)?;
    let base_bh = flash_experiment(&bh, MeasurementSetting::Sigma3)?;
    let base_single = bob_unconditioned_state(MeasurementSetting::Sigma3)?;
    let mut report = ExperimentReport::new("flash", 0).param(
        "phis",
        phis.iter()
            .map(|&p| serde_json::Value::from(p))
            .collect::<Vec<_>>(),
    );
    for (i, &phi) in phis.iter().enumerate() {
        let setting = MeasurementSetting::SigmaPhi(phi);
        report.results.push(
            ResultRow::new(format!("phi_{i}"))
                .with("phi", phi)
                .with(
                    "perfect",
                    trace_distance(&flash_experiment(&perfect, setting)?, &base_perfect)?,
                )
                .with(
                    "buzek_hillery",
                    trace_distance(&flash_experiment(&bh, setting)?, &base_bh)?,
                )
                .with(
                    "single_particle",
                    trace_distance(&bob_unconditioned_state(setting)?, &base_single)?,
                ),
        );
    }
    Ok(report)
}

/// Shrinking factors and exact fidelities of both cloners. With `samples > 0` the average
/// single-clone fidelity over that many Haar-random inputs is added.
pub fn clone_report(samples: usize, seed: u64) -> Result<ExperimentReport> {
    let bh = CloningChannel::buzek_hillery_default();
    let perfect = CloningChannel::perfect();
    let mut report = ExperimentReport::new("clone", seed).param("samples", samples);
    for (name, channel, exact) in [
        ("buzek_hillery", &bh, 5.0 / 6.0),
        ("perfect", &perfect, 1.0),
    ] {
        let eta = shrinking_factor(channel, &standard_probes())?;
        let mut row = ResultRow::new(name)
            .with("shrinking_factor", eta)
            .with("fidelity_from_shrinking", 0.5 * (1.0 + eta))
            .with("exact_fidelity", exact);
        if samples > 0 {
            row = row.with(
                "average_fidelity",
                average_fidelity(channel, samples, seed)?,
            );
        }
        report.results.push(row);
    }
    report.notes.push(
        "the perfect cloner is the non-physical map |psi> -> |psi>|psi>, shown for contrast".into(),
    );
    Ok(report)
}

/// A perpendicular measurement axis, where the perfect cloner signals most clearly.
pub const ORTHOGONAL_ANGLE: f64 = FRAC_PI_2;
