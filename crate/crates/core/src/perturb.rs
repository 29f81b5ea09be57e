//! Stability certification for perturbed windows: given a frame with
//! bounds A₀ ≤ B₀ and perturbations V_j with
//! sup ‖𝓕(E_{m/M}(W_j+V_j))(ξ)‖ ≤ θ, the condition 2^{M+P}θ²S < A₀
//! certifies that the V_j generate a frame with bounds
//! (√A₀ − √(2^{M+P}θ²S))² and 2^{M+P+1}θ²S + 2B₀.

use serde::Serialize;
use thiserror::Error;

use crate::gabor::{empirical_frame_ratio, GaborError, GaborSpec};
use crate::lambda::XiGrid;
use crate::transform::{modulated_transform, sup_norm_on_grid};

#[derive(Debug, Error, PartialEq)]
pub enum PerturbError {
    #[error("invalid frame bounds: need 0 < A0 ≤ B0, got A0 = {a0}, B0 = {b0}")]
    InvalidBounds { a0: f64, b0: f64 },
    #[error("theta must be nonnegative, got {0}")]
    NegativeTheta(f64),
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("report is not certified; the perturbed system carries no guaranteed bounds")]
    Uncertified,
    #[error(transparent)]
    Gabor(#[from] GaborError),
}

/// Grid estimate of θ = ess sup over m, j, ξ of ‖𝓕(E_{m/M}(W_j+V_j))(ξ)‖.
pub fn compute_theta(
    spec_w: &GaborSpec,
    perturbations: &[crate::sequences::NuSequence],
    grid: &XiGrid,
) -> Result<f64, PerturbError> {
    if perturbations.len() != spec_w.windows().len() {
        return Err(PerturbError::DimensionMismatch(format!(
            "{} perturbations for {} windows",
            perturbations.len(),
            spec_w.windows().len()
        )));
    }
    let mut theta: f64 = 0.0;
    for (w, v) in spec_w.windows().iter().zip(perturbations) {
        let sum = w
            .add(v)
            .map_err(|e| PerturbError::DimensionMismatch(e.to_string()))?;
        for m in 0..spec_w.m_count() {
            let f = modulated_transform(&sum, m, spec_w.m_count())
                .expect("m is within the modulation range");
            theta = theta.max(sup_norm_on_grid(&f, grid));
        }
    }
    Ok(theta)
}

/// Certified stability verdict. `lower` is positive only when
/// `certified`; `upper` is a valid Bessel bound for the perturbed system
/// whenever θ bounds the perturbed transforms.
#[derive(Debug, Clone, Serialize)]
pub struct PerturbationReport {
    pub theta: f64,
    /// θ re-estimated at doubled grid resolution; certification uses the
    /// larger of the two since both are inner estimates of the sup.
    pub theta_refined: Option<f64>,
    pub condition_value: f64,
    pub certified: bool,
    pub lower: f64,
    pub upper: f64,
    pub a0: f64,
    pub b0: f64,
}

/// Plugs θ into the smallness condition 2^{M+P}θ²S < A₀ and the bound
/// formulas.
pub fn certify(
    theta: f64,
    a0: f64,
    b0: f64,
    m_count: i64,
    p_max: i64,
    dim: usize,
) -> Result<PerturbationReport, PerturbError> {
    if !(a0 > 0.0) || b0 < a0 {
        return Err(PerturbError::InvalidBounds { a0, b0 });
    }
    if theta < 0.0 {
        return Err(PerturbError::NegativeTheta(theta));
    }
    let condition_value = 2f64.powi((m_count + p_max) as i32) * theta * theta * dim as f64;
    let certified = condition_value < a0;
    let lower = if certified {
        let d = a0.sqrt() - condition_value.sqrt();
        d * d
    } else {
        0.0
    };
    let upper = 2.0 * condition_value + 2.0 * b0;
    Ok(PerturbationReport {
        theta,
        theta_refined: None,
        condition_value,
        certified,
        lower,
        upper,
        a0,
        b0,
    })
}

/// End-to-end report for concrete perturbations: θ estimated at the
/// given resolution and re-checked at 2Q.
pub fn perturbation_report(
    spec_w: &GaborSpec,
    perturbations: &[crate::sequences::NuSequence],
    a0: f64,
    b0: f64,
    grid: &XiGrid,
) -> Result<PerturbationReport, PerturbError> {
    let theta = compute_theta(spec_w, perturbations, grid)?;
    let fine = XiGrid::new(*spec_w.params(), 2 * grid.resolution())
        .expect("doubling a valid resolution");
    let theta_refined = compute_theta(spec_w, perturbations, &fine)?;
    let mut report = certify(
        theta.max(theta_refined),
        a0,
        b0,
        spec_w.m_count(),
        spec_w.p_max(),
        spec_w.dim(),
    )?;
    report.theta = theta;
    report.theta_refined = Some(theta_refined);
    Ok(report)
}

/// Empirical check of a certified report against the perturbed system.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PerturbVerification {
    pub min_ratio: f64,
    pub max_ratio: f64,
    pub pass: bool,
}

/// Runs random signals through the perturbed system and checks that the
/// observed energy ratios respect the certified bounds. Refuses
/// uncertified reports.
pub fn verify_perturbed(
    spec_v: &GaborSpec,
    report: &PerturbationReport,
    trials: i64,
    seed: u64,
    tol: f64,
) -> Result<PerturbVerification, PerturbError> {
    if !report.certified {
        return Err(PerturbError::Uncertified);
    }
    let (min_ratio, max_ratio) = empirical_frame_ratio(spec_v, trials, seed)?;
    let pass = min_ratio >= report.lower - tol && max_ratio <= report.upper + tol;
    Ok(PerturbVerification {
        min_ratio,
        max_ratio,
        pass,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bounds::grid_b0;
    use crate::demos;
    use crate::sequences::NuSequence;
    use crate::transform::forward;
    use approx::assert_abs_diff_eq;
    use num_complex::Complex64;

    #[test]
    fn theta_for_reference_perturbation() {
        let spec = demos::tight_frame_spec();
        let v = demos::perturbing_windows();
        let grid = XiGrid::new(*spec.params(), 64).unwrap();
        let theta = compute_theta(&spec, &v, &grid).unwrap();
        assert_abs_diff_eq!(theta, 1.0 / 17.0, epsilon = 1e-12);
    }

    #[test]
    fn theta_degenerate_cases() {
        let spec = demos::tight_frame_spec();
        let grid = XiGrid::new(*spec.params(), 32).unwrap();
        // V_j = −W_j: transforms vanish identically and θ = 0 exactly
        let neg: Vec<NuSequence> = spec
            .windows()
            .iter()
            .map(|w| w.scale(Complex64::new(-1.0, 0.0)))
            .collect();
        assert_eq!(compute_theta(&spec, &neg, &grid).unwrap(), 0.0);
        for (w, v) in spec.windows().iter().zip(&neg) {
            assert!(forward(&w.add(v).unwrap()).is_zero());
        }
        // V_j = 0 reduces θ to the window sup
        let zeros: Vec<NuSequence> = spec
            .windows()
            .iter()
            .map(|w| NuSequence::zero(*w.params(), w.dim()))
            .collect();
        assert_eq!(
            compute_theta(&spec, &zeros, &grid).unwrap(),
            grid_b0(&spec, &grid)
        );
        assert!(compute_theta(&spec, &zeros[..3], &grid).is_err());
    }

    #[test]
    fn certification_formulas() {
        // θ = 1/17, M = 2, P = 7, S = 2, A0 = 4, B0 = 2^12
        let report = certify(1.0 / 17.0, 4.0, 4096.0, 2, 7, 2).unwrap();
        assert_abs_diff_eq!(report.condition_value, 1024.0 / 289.0, epsilon = 1e-12);
        assert!(report.certified);
        assert_abs_diff_eq!(report.lower, 4.0 / 289.0, epsilon = 1e-12);
        assert_abs_diff_eq!(report.upper, 2048.0 / 289.0 + 8192.0, epsilon = 1e-9);
        // θ = 0: untouched bounds
        let r0 = certify(0.0, 4.0, 4096.0, 2, 7, 2).unwrap();
        assert!(r0.certified);
        assert_eq!(r0.lower, 4.0);
        assert_eq!(r0.upper, 8192.0);
        assert!(certify(-0.1, 4.0, 4096.0, 2, 7, 2).is_err());
        assert!(certify(0.1, 0.0, 1.0, 2, 7, 2).is_err());
        assert!(certify(0.1, 2.0, 1.0, 2, 7, 2).is_err());
    }

    #[test]
    fn bound_monotonicity() {
        let base = certify(0.05, 4.0, 10.0, 2, 3, 2).unwrap();
        let more_theta = certify(0.06, 4.0, 10.0, 2, 3, 2).unwrap();
        assert!(more_theta.lower < base.lower);
        assert!(more_theta.upper > base.upper);
        let more_a0 = certify(0.05, 5.0, 10.0, 2, 3, 2).unwrap();
        assert!(more_a0.lower > base.lower);
        let more_b0 = certify(0.05, 4.0, 11.0, 2, 3, 2).unwrap();
        assert!(more_b0.upper > base.upper);
    }

    #[test]
    fn verification_of_reference_perturbation() {
        let spec = demos::tight_frame_spec();
        let v = demos::perturbing_windows();
        let grid = XiGrid::new(*spec.params(), 64).unwrap();
        let report = perturbation_report(&spec, &v, 4.0, 4096.0, &grid).unwrap();
        assert!(report.certified);
        let spec_v = demos::perturbed_spec();
        let check = verify_perturbed(&spec_v, &report, 100, 0, 1e-9).unwrap();
        assert!(check.pass);
        assert!(check.min_ratio >= report.lower);
        assert!(check.max_ratio <= report.upper);
    }

    #[test]
    fn verification_refuses_uncertified_reports() {
        let spec = demos::tight_frame_spec();
        // V_j = W_j doubles the windows: θ = 2·B0-level sup, condition
        // 2^9·16·2 ≫ 4
        let same: Vec<NuSequence> = spec.windows().to_vec();
        let grid = XiGrid::new(*spec.params(), 32).unwrap();
        let report = perturbation_report(&spec, &same, 4.0, 4096.0, &grid).unwrap();
        assert!(!report.certified);
        assert_eq!(
            verify_perturbed(&spec, &report, 10, 0, 1e-9),
            Err(PerturbError::Uncertified)
        );
    }
}
