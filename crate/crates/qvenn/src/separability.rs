//! Separability diagnostics: conditional-spectrum classicality,
//! conditional-entropy non-negativity, the positive-partial-transpose
//! test, and threshold scans along the Werner family.
//!
//! Separable states have conditional amplitude operators whose spectra
//! stay at or below one in both orientations; a single eigenvalue above
//! one certifies entanglement. On the Werner family this classicality
//! boundary coincides with the PPT boundary at singlet weight x = 1/3,
//! and `locate_werner_thresholds` pins both by bisection.

use crate::entropy::{
    conditional_amplitude_operator, conditional_entropy, nonclassical_eigenvalue_count,
};
use crate::error::{Error, Result};
use crate::linalg::{partition_positions, DensityOperator, SubsystemLayout};
use crate::states::{random_separable, werner_state};
use crate::tol;

/// Outcome of the PPT test.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PptVerdict {
    /// A negative partial-transpose eigenvalue: the state is entangled.
    Entangled,
    /// Partial transpose is positive semidefinite; nothing detected.
    NotDetected,
}

/// Everything the separability diagnostics measure on one bipartite state.
#[derive(Debug, Clone)]
pub struct SeparabilityReport {
    /// Largest eigenvalue of ρ_{A|B}.
    pub max_conditional_eigenvalue_ab: f64,
    /// Largest eigenvalue of ρ_{B|A}.
    pub max_conditional_eigenvalue_ba: f64,
    pub s_a_given_b: f64,
    pub s_b_given_a: f64,
    pub ppt_min_eigenvalue: f64,
    /// Passes iff every eigenvalue of both conditional operators is
    /// classical (≤ 1 + 1e-9). Failing is a proof of entanglement.
    pub classicality_passed: bool,
    /// Passes iff both conditional entropies are non-negative.
    pub conditional_entropy_nonnegative: bool,
    /// Passes iff the partial transpose is positive semidefinite.
    pub ppt_passed: bool,
    /// Two-epsilon stability of the reported spectra (max eigenvalue
    /// disagreement between the default and the check regularization).
    pub spectrum_stability: f64,
}

impl SeparabilityReport {
    /// The state definitely carries entanglement (some necessary
    /// condition for separability failed).
    pub fn entanglement_detected(&self) -> bool {
        !self.classicality_passed || !self.conditional_entropy_nonnegative || !self.ppt_passed
    }
}

fn max_eigenvalue_at(rho: &DensityOperator, given: &[&str], epsilon: f64) -> Result<f64> {
    let op = conditional_amplitude_operator(rho, given, epsilon)?;
    Ok(op.spectral_decompose()?.max_eigenvalue())
}

/// Evaluate the conditional-spectrum classicality test in both
/// orientations, together with conditional entropies and the PPT test.
///
/// Spectra are computed at two regularizations and the disagreement is
/// reported; a disagreement above the stability tolerance means the
/// numbers should not be trusted.
pub fn conditional_spectrum_test(
    rho: &DensityOperator,
    parts: (&[&str], &[&str]),
) -> Result<SeparabilityReport> {
    partition_positions(rho.layout(), &[parts.0, parts.1])?;
    let (a, b) = parts;

    let max_ab = max_eigenvalue_at(rho, b, tol::DEFAULT_EPSILON)?;
    let max_ba = max_eigenvalue_at(rho, a, tol::DEFAULT_EPSILON)?;
    let stability = (max_ab - max_eigenvalue_at(rho, b, tol::STABILITY_EPSILON)?)
        .abs()
        .max((max_ba - max_eigenvalue_at(rho, a, tol::STABILITY_EPSILON)?).abs());

    let s_a_given_b = conditional_entropy(rho, b)?;
    let s_b_given_a = conditional_entropy(rho, a)?;
    let ppt_min = ppt_min_eigenvalue(rho, b)?;

    Ok(SeparabilityReport {
        max_conditional_eigenvalue_ab: max_ab,
        max_conditional_eigenvalue_ba: max_ba,
        s_a_given_b,
        s_b_given_a,
        ppt_min_eigenvalue: ppt_min,
        classicality_passed: max_ab <= tol::CLASSICALITY_THRESHOLD
            && max_ba <= tol::CLASSICALITY_THRESHOLD,
        conditional_entropy_nonnegative: s_a_given_b >= -1e-9 && s_b_given_a >= -1e-9,
        ppt_passed: ppt_min >= tol::PPT_NEGATIVITY,
        spectrum_stability: stability,
    })
}

fn ppt_min_eigenvalue(rho: &DensityOperator, block: &[&str]) -> Result<f64> {
    let mut transposed = rho.as_hermitian().clone();
    for label in block {
        transposed = transposed.partial_transpose(label)?;
    }
    Ok(transposed.spectral_decompose()?.min_eigenvalue())
}

/// Minimum partial-transpose eigenvalue and the resulting verdict.
pub fn ppt_test(rho: &DensityOperator, part: &str) -> Result<(f64, PptVerdict)> {
    let min = ppt_min_eigenvalue(rho, &[part])?;
    let verdict = if min < tol::PPT_NEGATIVITY {
        PptVerdict::Entangled
    } else {
        PptVerdict::NotDetected
    };
    Ok((min, verdict))
}

/// One row of a Werner-family scan.
#[derive(Debug, Clone, Copy)]
pub struct WernerScanRow {
    pub x: f64,
    pub max_conditional_eigenvalue: f64,
    pub s_a_given_b: f64,
    pub ppt_min_eigenvalue: f64,
}

/// Evaluate the diagnostics along a grid of singlet weights.
pub fn werner_scan(x_grid: &[f64]) -> Result<Vec<WernerScanRow>> {
    x_grid
        .iter()
        .map(|&x| {
            let rho = werner_state(x)?;
            let max_eig = max_eigenvalue_at(&rho, &["B"], tol::DEFAULT_EPSILON)?;
            let s = conditional_entropy(&rho, &["B"])?;
            let ppt_min = ppt_min_eigenvalue(&rho, &["B"])?;
            Ok(WernerScanRow {
                x,
                max_conditional_eigenvalue: max_eig,
                s_a_given_b: s,
                ppt_min_eigenvalue: ppt_min,
            })
        })
        .collect()
}

/// Crossing points of the two diagnostics along the Werner family.
#[derive(Debug, Clone, Copy)]
pub struct WernerThresholds {
    /// Where the max conditional eigenvalue crosses 1.
    pub x_classicality: f64,
    /// Where the minimum partial-transpose eigenvalue crosses 0.
    pub x_ppt: f64,
}

/// Locate both thresholds by bisection on x in [0, 1].
pub fn locate_werner_thresholds() -> Result<WernerThresholds> {
    let classicality = |x: f64| -> Result<f64> {
        let rho = werner_state(x)?;
        Ok(max_eigenvalue_at(&rho, &["B"], tol::DEFAULT_EPSILON)? - 1.0)
    };
    let ppt = |x: f64| -> Result<f64> {
        let rho = werner_state(x)?;
        ppt_min_eigenvalue(&rho, &["B"])
    };
    Ok(WernerThresholds {
        x_classicality: bisect(&classicality, 0.0, 1.0)?,
        x_ppt: bisect(&ppt, 0.0, 1.0)?,
    })
}

/// Bisection for the sign change of `f` on [lo, hi].
fn bisect(f: &dyn Fn(f64) -> Result<f64>, mut lo: f64, mut hi: f64) -> Result<f64> {
    let f_lo = f(lo)?;
    let f_hi = f(hi)?;
    if f_lo == 0.0 {
        return Ok(lo);
    }
    if f_hi == 0.0 {
        return Ok(hi);
    }
    if f_lo.signum() == f_hi.signum() {
        return Err(Error::RangeError {
            name: "bracket",
            value: f_lo,
            min: f_lo.min(f_hi),
            max: f_lo.max(f_hi),
        });
    }
    while hi - lo > tol::THRESHOLD_BISECTION {
        let mid = 0.5 * (lo + hi);
        let f_mid = f(mid)?;
        if f_mid == 0.0 {
            return Ok(mid);
        }
        if f_mid.signum() == f_lo.signum() {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(0.5 * (lo + hi))
}

/// Aggregate of a seeded random-separable survey.
#[derive(Debug, Clone)]
pub struct SurveyReport {
    pub n_trials: usize,
    pub dims: (usize, usize),
    pub seed: u64,
    /// Trials where some conditional eigenvalue exceeded the classicality
    /// threshold (expected to stay 0).
    pub classicality_violations: usize,
    /// Trials with a conditional entropy below −1e-9.
    pub negative_conditional_entropies: usize,
    pub max_eigenvalue_observed: f64,
    pub min_conditional_entropy: f64,
    /// (trial index, offending value) for the first few violations.
    pub violation_log: Vec<(usize, f64)>,
}

/// Run the classicality test on `n_trials` random mixtures of product
/// states with local dimensions `dims`. Trial k uses seed `seed + k`, so
/// reports are reproducible regardless of scheduling.
pub fn random_separable_survey(
    n_trials: usize,
    dims: (usize, usize),
    seed: u64,
) -> Result<SurveyReport> {
    if n_trials == 0 {
        return Err(Error::BadArity("n_trials must be at least 1".into()));
    }
    let layout_a = SubsystemLayout::new([("A", dims.0)])?;
    let layout_b = SubsystemLayout::new([("B", dims.1)])?;
    let mut report = SurveyReport {
        n_trials,
        dims,
        seed,
        classicality_violations: 0,
        negative_conditional_entropies: 0,
        max_eigenvalue_observed: f64::NEG_INFINITY,
        min_conditional_entropy: f64::INFINITY,
        violation_log: Vec::new(),
    };
    for trial in 0..n_trials {
        let trial_seed = seed + trial as u64;
        // term count cycles over 1..=4·max(dim) for variety
        let n_terms = 1 + trial % (4 * dims.0.max(dims.1));
        let (rho, _) = random_separable(&layout_a, &layout_b, n_terms, trial_seed)?;
        for given in [["B"], ["A"]] {
            let op = conditional_amplitude_operator(&rho, &given, tol::DEFAULT_EPSILON)?;
            let max_eig = op.spectral_decompose()?.max_eigenvalue();
            report.max_eigenvalue_observed = report.max_eigenvalue_observed.max(max_eig);
            if nonclassical_eigenvalue_count(&op, tol::CLASSICALITY_THRESHOLD)? > 0 {
                report.classicality_violations += 1;
                if report.violation_log.len() < 10 {
                    report.violation_log.push((trial, max_eig));
                }
            }
            let s = conditional_entropy(&rho, &given)?;
            report.min_conditional_entropy = report.min_conditional_entropy.min(s);
            if s < -1e-9 {
                report.negative_conditional_entropies += 1;
            }
        }
    }
    Ok(report)
}
