//! The Gabor system {E_{m/M} R_{2Nλ} W_j} generated by modulated shifts
//! of window sequences: frame elements, analysis/synthesis operators,
//! the frame operator, and a seeded randomized oracle for frame ratios.
//!
//! For finitely supported signals the λ-sum over the translation set is
//! exactly finite: [`active_shift_range`] enumerates the only shifts
//! whose elements can overlap the signal, so no truncation parameter
//! exists anywhere in this module.

use std::collections::{BTreeMap, BTreeSet};

use num_complex::Complex64;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::lambda::{LambdaParams, LambdaPoint};
use crate::linalg::{conjugate_gradient, CgError};
use crate::sequences::{NuSequence, SeqError};

#[derive(Debug, Error, PartialEq)]
pub enum GaborError {
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("{what} index {got} out of range [0, {max}]")]
    OutOfRange {
        what: &'static str,
        got: i64,
        max: i64,
    },
    #[error("a Gabor system needs at least one window")]
    EmptyWindows,
    #[error("modulation count must be positive, got {0}")]
    NonPositiveModulations(i64),
    #[error("trial count must be positive, got {0}")]
    NonPositiveTrials(i64),
    #[error("frame operator inversion stagnated; the system may not be a frame")]
    NotAFrameSuspected,
}

impl From<SeqError> for GaborError {
    fn from(e: SeqError) -> Self {
        match e {
            SeqError::DimensionMismatch(s) => GaborError::DimensionMismatch(s),
            SeqError::ModulationOutOfRange { m, max } => GaborError::OutOfRange {
                what: "modulation",
                got: m,
                max,
            },
        }
    }
}

/// Full parameterization of a Gabor system: lattice parameters, the
/// modulation count M, and the P+1 window sequences (all sharing the
/// same coordinate dimension S).
#[derive(Debug, Clone, PartialEq)]
pub struct GaborSpec {
    params: LambdaParams,
    m_count: i64,
    windows: Vec<NuSequence>,
}

impl GaborSpec {
    pub fn new(
        params: LambdaParams,
        m_count: i64,
        windows: Vec<NuSequence>,
    ) -> Result<Self, GaborError> {
        if m_count < 1 {
            return Err(GaborError::NonPositiveModulations(m_count));
        }
        if windows.is_empty() {
            return Err(GaborError::EmptyWindows);
        }
        let dim = windows[0].dim();
        for (j, w) in windows.iter().enumerate() {
            if w.params() != &params || w.dim() != dim {
                return Err(GaborError::DimensionMismatch(format!(
                    "window {j} does not match the system parameters"
                )));
            }
        }
        Ok(GaborSpec {
            params,
            m_count,
            windows,
        })
    }

    pub fn params(&self) -> &LambdaParams {
        &self.params
    }

    /// Modulation count M; T_1 = {0, …, M−1}.
    pub fn m_count(&self) -> i64 {
        self.m_count
    }

    /// Window index bound P; T_2 = {0, …, P}.
    pub fn p_max(&self) -> i64 {
        self.windows.len() as i64 - 1
    }

    /// Coordinate dimension S.
    pub fn dim(&self) -> usize {
        self.windows[0].dim()
    }

    pub fn windows(&self) -> &[NuSequence] {
        &self.windows
    }

    pub fn has_nonzero_window(&self) -> bool {
        self.windows.iter().any(|w| !w.is_zero())
    }

    /// Rebuilds the spec with transformed windows (dimension may change).
    pub fn map_windows(&self, f: impl Fn(&NuSequence) -> NuSequence) -> Result<Self, GaborError> {
        GaborSpec::new(self.params, self.m_count, self.windows.iter().map(f).collect())
    }

    fn check_signal(&self, z: &NuSequence) -> Result<(), GaborError> {
        if z.params() != &self.params || z.dim() != self.dim() {
            return Err(GaborError::DimensionMismatch(
                "signal does not match the system parameters".into(),
            ));
        }
        Ok(())
    }
}

/// Sparse coefficient family indexed by (λ, m, j) ∈ Λ × T_1 × T_2.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct CoefficientMap {
    entries: BTreeMap<(LambdaPoint, i64, i64), Complex64>,
}

impl CoefficientMap {
    pub fn new() -> Self {
        CoefficientMap::default()
    }

    pub fn insert(&mut self, lam: LambdaPoint, m: i64, j: i64, c: Complex64) {
        if c.re != 0.0 || c.im != 0.0 {
            self.entries.insert((lam, m, j), c);
        }
    }

    pub fn get(&self, lam: &LambdaPoint, m: i64, j: i64) -> Complex64 {
        self.entries
            .get(&(*lam, m, j))
            .copied()
            .unwrap_or(Complex64::new(0.0, 0.0))
    }

    pub fn iter(&self) -> impl Iterator<Item = (&(LambdaPoint, i64, i64), &Complex64)> {
        self.entries.iter()
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn norm_sq(&self) -> f64 {
        self.entries.values().map(|c| c.norm_sqr()).sum::<f64>() + 0.0
    }

    /// ℓ² pairing Σ a·conj(b).
    pub fn inner_product(&self, other: &CoefficientMap) -> Complex64 {
        self.entries
            .iter()
            .filter_map(|(k, a)| other.entries.get(k).map(|b| a * b.conj()))
            .sum()
    }
}

/// The frame element E_{m/M} R_{2Nλ} W_j; a unitary image of W_j.
pub fn frame_element(
    spec: &GaborSpec,
    lam: &LambdaPoint,
    m: i64,
    j: i64,
) -> Result<NuSequence, GaborError> {
    if j < 0 || j > spec.p_max() {
        return Err(GaborError::OutOfRange {
            what: "window",
            got: j,
            max: spec.p_max(),
        });
    }
    Ok(spec.windows[j as usize]
        .shift(lam)
        .modulate(m, spec.m_count)?)
}

/// Decodes a numerator difference d into the unique λ ∈ Λ with
/// d = 4N²n + 2Nεr, if one exists.
fn shift_from_numerator_delta(d: i64, params: &LambdaParams) -> Option<LambdaPoint> {
    let n = params.n();
    let q = 4 * n * n;
    if d.rem_euclid(q) == 0 {
        Some(LambdaPoint::new(d / q, false))
    } else if (d - 2 * n * params.r()).rem_euclid(q) == 0 {
        Some(LambdaPoint::new((d - 2 * n * params.r()) / q, true))
    } else {
        None
    }
}

/// Exactly the shifts λ for which some frame element can overlap Z:
/// supp(Z) ∩ (supp(W_j) + 2Nλ) ≠ ∅ for some j. Every coefficient outside
/// this list is exactly zero.
pub fn active_shift_range(spec: &GaborSpec, z: &NuSequence) -> Result<Vec<LambdaPoint>, GaborError> {
    spec.check_signal(z)?;
    let params = &spec.params;
    let mut shifts = BTreeSet::new();
    for zp in z.support() {
        let pz = zp.numerator(params);
        for w in &spec.windows {
            for wp in w.support() {
                if let Some(s) = shift_from_numerator_delta(pz - wp.numerator(params), params) {
                    shifts.insert(s);
                }
            }
        }
    }
    Ok(shifts.into_iter().collect())
}

/// Analysis operator 𝒯*: Z ↦ {⟨Z, E_{m/M}R_{2Nλ}W_j⟩}. Exact finite
/// computation over the active shifts.
pub fn analysis(spec: &GaborSpec, z: &NuSequence) -> Result<CoefficientMap, GaborError> {
    spec.check_signal(z)?;
    let mut coeffs = CoefficientMap::new();
    for lam in active_shift_range(spec, z)? {
        for m in 0..spec.m_count {
            for j in 0..=spec.p_max() {
                let g = frame_element(spec, &lam, m, j)?;
                let c = z.inner_product(&g)?;
                coeffs.insert(lam, m, j, c);
            }
        }
    }
    Ok(coeffs)
}

/// Synthesis (pre-frame) operator 𝒯: {a_{λ,m,j}} ↦ Σ a·E_{m/M}R_{2Nλ}W_j.
pub fn synthesis(spec: &GaborSpec, coeffs: &CoefficientMap) -> Result<NuSequence, GaborError> {
    let mut acc = NuSequence::zero(spec.params, spec.dim());
    for ((lam, m, j), c) in coeffs.iter() {
        let g = frame_element(spec, lam, *m, *j)?;
        acc = acc.add(&g.scale(*c))?;
    }
    Ok(acc)
}

/// Frame operator Ξ = 𝒯𝒯*; self-adjoint and positive.
pub fn frame_operator_apply(spec: &GaborSpec, z: &NuSequence) -> Result<NuSequence, GaborError> {
    synthesis(spec, &analysis(spec, z)?)
}

/// Σ |⟨Z, E_{m/M}R_{2Nλ}W_j⟩|² — the quantity the frame inequalities
/// sandwich between α‖Z‖² and β‖Z‖².
pub fn energy(spec: &GaborSpec, z: &NuSequence) -> Result<f64, GaborError> {
    Ok(analysis(spec, z)?.norm_sq())
}

/// Seeded random finitely supported test signal: support concentrated
/// within one shift step of the window supports, with occasional far
/// outliers to exercise the disjoint regime. Never the zero sequence.
pub fn random_test_sequence(spec: &GaborSpec, rng: &mut impl Rng) -> NuSequence {
    let params = spec.params;
    let (mut lo, mut hi) = (0i64, 0i64);
    for w in &spec.windows {
        for pt in w.support() {
            lo = lo.min(pt.n);
            hi = hi.max(pt.n);
        }
    }
    let reach = 2 * params.n();
    let dim = spec.dim();
    loop {
        let count = rng.gen_range(1..=4);
        let entries = (0..count).map(|_| {
            let far = if rng.gen_bool(0.15) {
                let sign = if rng.gen() { 1 } else { -1 };
                sign * rng.gen_range(20..30) * 2 * params.n()
            } else {
                0
            };
            let pt = LambdaPoint::new(rng.gen_range(lo - reach..=hi + reach) + far, rng.gen());
            let v = (0..dim)
                .map(|_| Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)))
                .collect();
            (pt, v)
        });
        let z = NuSequence::from_entries(params, dim, entries).expect("dimensions consistent");
        if !z.is_zero() {
            return z;
        }
    }
}

/// Runs `trials` random signals through the energy functional and
/// reports (min, max) of energy(Z)/‖Z‖². The pair brackets the optimal
/// frame bounds from inside.
pub fn empirical_frame_ratio(
    spec: &GaborSpec,
    trials: i64,
    seed: u64,
) -> Result<(f64, f64), GaborError> {
    if trials < 1 {
        return Err(GaborError::NonPositiveTrials(trials));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut min_ratio = f64::INFINITY;
    let mut max_ratio = f64::NEG_INFINITY;
    for _ in 0..trials {
        let z = random_test_sequence(spec, &mut rng);
        let ratio = energy(spec, &z)? / z.norm_sq();
        min_ratio = min_ratio.min(ratio);
        max_ratio = max_ratio.max(ratio);
    }
    Ok((min_ratio, max_ratio))
}

/// Solves Ξ X = Y by conjugate gradients on the finite subspace spanned
/// by every frame-element support that can interact with Y. Exact for
/// tight frames; for general frames the subspace restriction is the
/// approximation documented on the tin.
pub fn invert_frame_operator(
    spec: &GaborSpec,
    y: &NuSequence,
    tol: f64,
) -> Result<NuSequence, GaborError> {
    spec.check_signal(y)?;
    if y.is_zero() {
        return Ok(NuSequence::zero(spec.params, spec.dim()));
    }
    let mut points: BTreeSet<LambdaPoint> = y.support().copied().collect();
    for lam in active_shift_range(spec, y)? {
        for w in &spec.windows {
            for pt in w.support() {
                points.insert(pt.translate(&lam, &spec.params));
            }
        }
    }
    let points: Vec<LambdaPoint> = points.into_iter().collect();
    let dim = spec.dim();
    let n_dof = points.len() * dim;

    let to_vec = |z: &NuSequence| -> Vec<Complex64> {
        let mut v = Vec::with_capacity(n_dof);
        for pt in &points {
            v.extend(z.value(pt));
        }
        v
    };
    let from_vec = |v: &[Complex64]| -> NuSequence {
        NuSequence::from_entries(
            spec.params,
            dim,
            points
                .iter()
                .enumerate()
                .map(|(i, pt)| (*pt, v[i * dim..(i + 1) * dim].to_vec())),
        )
        .expect("dimensions consistent")
    };

    let rhs = to_vec(y);
    let apply = |v: &[Complex64]| -> Vec<Complex64> {
        let z = from_vec(v);
        let out = frame_operator_apply(spec, &z).expect("operator preserves compatibility");
        to_vec(&out)
    };
    match conjugate_gradient(apply, &rhs, tol, 10 * n_dof.max(1)) {
        Ok(x) => Ok(from_vec(&x)),
        Err(CgError::Stagnated) => Err(GaborError::NotAFrameSuspected),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::demos;
    use approx::assert_abs_diff_eq;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn frame_element_examples() {
        let spec = demos::tight_frame_spec();
        let origin = LambdaPoint::origin();
        assert_eq!(
            frame_element(&spec, &origin, 0, 3).unwrap(),
            spec.windows()[3]
        );
        // j = 4, m = 1: entries [i; 0] at λ' = 1/2 and 9/2
        let g = frame_element(&spec, &origin, 1, 4).unwrap();
        assert_eq!(g.value(&LambdaPoint::new(0, true))[0], c(0.0, 1.0));
        assert_eq!(g.value(&LambdaPoint::new(2, true))[0], c(0.0, 1.0));
        // unitary image
        let shifted = frame_element(&spec, &LambdaPoint::new(3, true), 1, 0).unwrap();
        assert_abs_diff_eq!(shifted.norm(), spec.windows()[0].norm(), epsilon = 1e-12);
        assert!(frame_element(&spec, &origin, 0, 8).is_err());
        assert!(frame_element(&spec, &origin, 2, 0).is_err());
    }

    #[test]
    fn active_shifts_for_reference_window() {
        let spec = demos::tight_frame_spec();
        let z = spec.windows()[0].clone();
        assert_eq!(
            active_shift_range(&spec, &z).unwrap(),
            vec![LambdaPoint::origin()]
        );
        let zero = NuSequence::zero(*spec.params(), 2);
        assert!(active_shift_range(&spec, &zero).unwrap().is_empty());
        // numerator 5 sits at distance 4 ≡ 2Nr (mod 16) from the odd
        // windows: exactly the ε-shift reaches it
        let near = NuSequence::delta(*spec.params(), 2, LambdaPoint::new(1, true), 0, c(1.0, 0.0));
        assert_eq!(
            active_shift_range(&spec, &near).unwrap(),
            vec![LambdaPoint::new(0, true)]
        );
    }

    #[test]
    fn unreachable_support_has_no_active_shifts() {
        // single window at numerator 0: shifted supports are ≡ 0 or 4
        // (mod 16), so a signal at numerator 8 never overlaps
        let params = LambdaParams::new(2, 1).unwrap();
        let w = NuSequence::delta(params, 1, LambdaPoint::origin(), 0, c(1.0, 0.0));
        let spec = GaborSpec::new(params, 1, vec![w]).unwrap();
        let z = NuSequence::delta(params, 1, LambdaPoint::new(2, false), 0, c(1.0, 0.0));
        assert!(active_shift_range(&spec, &z).unwrap().is_empty());
        assert_eq!(energy(&spec, &z).unwrap(), 0.0);
    }

    #[test]
    fn analysis_examples() {
        let spec = demos::tight_frame_spec();
        let z = spec.windows()[0].clone();
        let coeffs = analysis(&spec, &z).unwrap();
        assert_eq!(coeffs.get(&LambdaPoint::origin(), 0, 0), c(2.0, 0.0));
        assert_eq!(coeffs.get(&LambdaPoint::origin(), 0, 1), c(0.0, 0.0));
        let zero = NuSequence::zero(*spec.params(), 2);
        assert!(analysis(&spec, &zero).unwrap().is_empty());
    }

    #[test]
    fn synthesis_examples_and_adjointness() {
        let spec = demos::tight_frame_spec();
        assert!(synthesis(&spec, &CoefficientMap::new()).unwrap().is_zero());
        let mut single = CoefficientMap::new();
        let lam = LambdaPoint::new(1, true);
        single.insert(lam, 1, 5, c(1.0, 0.0));
        assert_eq!(
            synthesis(&spec, &single).unwrap(),
            frame_element(&spec, &lam, 1, 5).unwrap()
        );
        // ⟨𝒯c, Z⟩ = ⟨c, 𝒯*Z⟩
        let mut rng = ChaCha8Rng::seed_from_u64(21);
        for _ in 0..5 {
            let z = random_test_sequence(&spec, &mut rng);
            let mut coeffs = CoefficientMap::new();
            for _ in 0..4 {
                coeffs.insert(
                    LambdaPoint::new(rng.gen_range(-2..2), rng.gen()),
                    rng.gen_range(0..2),
                    rng.gen_range(0..8),
                    c(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)),
                );
            }
            let lhs = synthesis(&spec, &coeffs).unwrap().inner_product(&z).unwrap();
            let rhs = coeffs.inner_product(&analysis(&spec, &z).unwrap());
            assert!((lhs - rhs).norm() < 1e-10);
        }
    }

    #[test]
    fn frame_operator_is_scaling_on_tight_spec() {
        let spec = demos::tight_frame_spec();
        let zero = NuSequence::zero(*spec.params(), 2);
        assert!(frame_operator_apply(&spec, &zero).unwrap().is_zero());
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for _ in 0..5 {
            let z = random_test_sequence(&spec, &mut rng);
            let xi_z = frame_operator_apply(&spec, &z).unwrap();
            let diff = xi_z.add(&z.scale(c(-4.0, 0.0))).unwrap();
            assert!(diff.norm() <= 1e-9 * (1.0 + z.norm()));
            // ⟨ΞZ, Z⟩ = energy(Z)
            let quad = xi_z.inner_product(&z).unwrap();
            let e = energy(&spec, &z).unwrap();
            assert!((quad.re - e).abs() <= 1e-10 * (1.0 + e));
            assert!(quad.im.abs() <= 1e-10 * (1.0 + e));
        }
    }

    #[test]
    fn energy_examples() {
        let spec = demos::tight_frame_spec();
        let zero = NuSequence::zero(*spec.params(), 2);
        assert_eq!(energy(&spec, &zero).unwrap(), 0.0);
        let delta = NuSequence::delta(*spec.params(), 2, LambdaPoint::origin(), 0, c(1.0, 0.0));
        assert_abs_diff_eq!(energy(&spec, &delta).unwrap(), 4.0, epsilon = 1e-12);
        // Bessel bound 2^{M+P}B_0²S = 4096 dominates
        let mut rng = ChaCha8Rng::seed_from_u64(31);
        for _ in 0..10 {
            let z = random_test_sequence(&spec, &mut rng);
            assert!(energy(&spec, &z).unwrap() <= 4096.0 * z.norm_sq());
        }
    }

    #[test]
    fn empirical_ratios() {
        let spec = demos::tight_frame_spec();
        let (lo, hi) = empirical_frame_ratio(&spec, 100, 0).unwrap();
        assert_abs_diff_eq!(lo, 4.0, epsilon = 1e-9);
        assert_abs_diff_eq!(hi, 4.0, epsilon = 1e-9);
        assert!(matches!(
            empirical_frame_ratio(&spec, 0, 0),
            Err(GaborError::NonPositiveTrials(0))
        ));
        // scaling all windows by c multiplies both ratios by |c|²
        let scaled = spec.map_windows(|w| w.scale(c(0.0, 3.0))).unwrap();
        let (slo, shi) = empirical_frame_ratio(&scaled, 50, 1).unwrap();
        let (lo1, hi1) = empirical_frame_ratio(&spec, 50, 1).unwrap();
        assert_abs_diff_eq!(slo, 9.0 * lo1, epsilon = 1e-9);
        assert_abs_diff_eq!(shi, 9.0 * hi1, epsilon = 1e-9);
    }

    #[test]
    fn interleaved_delta_windows_form_an_orthonormal_basis() {
        // N = 1, M = 1, windows δ_0 and δ_1: the shifts 2ℤ of each cover
        // the even and odd integers once, so every ratio is exactly 1.
        let params = LambdaParams::new(1, 1).unwrap();
        let w0 = NuSequence::delta(params, 1, LambdaPoint::new(0, false), 0, c(1.0, 0.0));
        let w1 = NuSequence::delta(params, 1, LambdaPoint::new(0, true), 0, c(1.0, 0.0));
        let spec = GaborSpec::new(params, 1, vec![w0, w1]).unwrap();
        let (lo, hi) = empirical_frame_ratio(&spec, 50, 3).unwrap();
        assert_abs_diff_eq!(lo, 1.0, epsilon = 1e-12);
        assert_abs_diff_eq!(hi, 1.0, epsilon = 1e-12);
    }

    #[test]
    fn widening_the_shift_range_changes_nothing() {
        let spec = demos::tight_frame_spec();
        let mut rng = ChaCha8Rng::seed_from_u64(17);
        for _ in 0..5 {
            let z = random_test_sequence(&spec, &mut rng);
            let active = active_shift_range(&spec, &z).unwrap();
            let coeffs = analysis(&spec, &z).unwrap();
            let mut widened: BTreeSet<LambdaPoint> = active.iter().copied().collect();
            for extra_n in -6..=6 {
                widened.insert(LambdaPoint::new(extra_n, false));
                widened.insert(LambdaPoint::new(extra_n, true));
            }
            for lam in widened {
                for m in 0..spec.m_count() {
                    for j in 0..=spec.p_max() {
                        let direct = z
                            .inner_product(&frame_element(&spec, &lam, m, j).unwrap())
                            .unwrap();
                        assert!((direct - coeffs.get(&lam, m, j)).norm() < 1e-14);
                    }
                }
            }
        }
    }

    #[test]
    fn cg_inverts_the_tight_frame_operator() {
        let spec = demos::tight_frame_spec();
        let mut rng = ChaCha8Rng::seed_from_u64(8);
        for _ in 0..3 {
            let z = random_test_sequence(&spec, &mut rng);
            let y = frame_operator_apply(&spec, &z).unwrap();
            let back = invert_frame_operator(&spec, &y, 1e-10).unwrap();
            let diff = back.add(&z.scale(c(-1.0, 0.0))).unwrap();
            assert!(diff.norm() <= 1e-9 * (1.0 + z.norm()));
        }
    }
}
