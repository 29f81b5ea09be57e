//! Reductions from vector-valued systems to scalar ones: the
//! arithmetic-mean system (frame bounds scale by 1/S), the per-row
//! systems of the window matrix (bounds inherited verbatim, converse
//! false), and the per-entry Bessel equivalence with its explicit
//! β₀·2^{S−1}(P+1) aggregate constant.

use std::collections::BTreeMap;

use num_complex::Complex64;
use serde::Serialize;
use thiserror::Error;

use crate::bounds::frame_bounds_grid;
use crate::gabor::{GaborError, GaborSpec};
use crate::lambda::{LambdaPoint, XiGrid};
use crate::sequences::NuSequence;

#[derive(Debug, Error, PartialEq)]
pub enum ReduceError {
    #[error("row index {got} out of range [0, {max}]")]
    RowOutOfRange { got: usize, max: usize },
    #[error("expected a scalar (S = 1) system")]
    NotScalar,
    #[error("counterexample witness must be nonzero")]
    ZeroWitness,
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error(transparent)]
    Gabor(#[from] GaborError),
}

/// The S × (P+1) window matrix: entry (l, l') at λ is [W_{l'}(λ)]_l.
/// Columns reassemble the windows; rows are the coordinate sequences.
#[derive(Debug, Clone)]
pub struct WindowMatrix {
    dim: usize,
    count: usize,
    entries: BTreeMap<LambdaPoint, Vec<Vec<Complex64>>>,
}

impl WindowMatrix {
    pub fn from_spec(spec: &GaborSpec) -> Self {
        let dim = spec.dim();
        let count = spec.windows().len();
        let mut entries: BTreeMap<LambdaPoint, Vec<Vec<Complex64>>> = BTreeMap::new();
        for (j, w) in spec.windows().iter().enumerate() {
            for (pt, v) in w.iter() {
                let mat = entries
                    .entry(*pt)
                    .or_insert_with(|| vec![vec![Complex64::new(0.0, 0.0); count]; dim]);
                for (l, z) in v.iter().enumerate() {
                    mat[l][j] = *z;
                }
            }
        }
        WindowMatrix {
            dim,
            count,
            entries,
        }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn window_count(&self) -> usize {
        self.count
    }

    /// The scalar sequence λ ↦ [W_{col}(λ)]_row.
    pub fn entry_sequence(
        &self,
        params: crate::lambda::LambdaParams,
        row: usize,
        col: usize,
    ) -> NuSequence {
        NuSequence::from_entries(
            params,
            1,
            self.entries
                .iter()
                .map(|(pt, mat)| (*pt, vec![mat[row][col]])),
        )
        .expect("entries are scalar")
    }
}

/// The scalar system generated by the arithmetic means μ_{W_j}. If the
/// parent is a frame with bounds A₀, B₀, this is a frame with bounds
/// A₀/S, B₀/S.
pub fn mean_system(spec: &GaborSpec) -> GaborSpec {
    GaborSpec::new(
        *spec.params(),
        spec.m_count(),
        spec.windows().iter().map(|w| w.arithmetic_mean()).collect(),
    )
    .expect("mean windows share the parent parameters")
}

/// The scalar system generated by row `row` (0-based) of the window
/// matrix. For a parent frame the theorem hands the bounds down
/// unchanged.
pub fn row_system(spec: &GaborSpec, row: usize) -> Result<GaborSpec, ReduceError> {
    if row >= spec.dim() {
        return Err(ReduceError::RowOutOfRange {
            got: row,
            max: spec.dim() - 1,
        });
    }
    Ok(GaborSpec::new(
        *spec.params(),
        spec.m_count(),
        spec.windows().iter().map(|w| w.coordinate(row)).collect(),
    )?)
}

/// Lifts a scalar sequence to S identical coordinates.
pub fn constant_lift(x: &NuSequence, dim: usize) -> Result<NuSequence, ReduceError> {
    if x.dim() != 1 {
        return Err(ReduceError::NotScalar);
    }
    Ok(NuSequence::from_entries(
        *x.params(),
        dim,
        x.iter().map(|(pt, v)| (*pt, vec![v[0]; dim])),
    )
    .expect("entries are consistent"))
}

/// The duplicated-window construction showing the row statement does not
/// reverse: every row of the S = 3 system below generates a scalar frame
/// whenever `scalar_spec` does, yet the witness [z; −z; 0] has zero
/// energy against every frame element.
pub fn converse_counterexample(
    scalar_spec: &GaborSpec,
    witness_seed: &NuSequence,
) -> Result<(GaborSpec, NuSequence), ReduceError> {
    if scalar_spec.dim() != 1 {
        return Err(ReduceError::NotScalar);
    }
    if witness_seed.dim() != 1 || witness_seed.params() != scalar_spec.params() {
        return Err(ReduceError::DimensionMismatch(
            "witness must be a scalar sequence over the same lattice".into(),
        ));
    }
    if witness_seed.is_zero() {
        return Err(ReduceError::ZeroWitness);
    }
    let tripled = scalar_spec.map_windows(|w| {
        constant_lift(w, 3).expect("windows are scalar")
    })?;
    let witness = NuSequence::from_entries(
        *witness_seed.params(),
        3,
        witness_seed
            .iter()
            .map(|(pt, v)| (*pt, vec![v[0], -v[0], Complex64::new(0.0, 0.0)])),
    )
    .expect("entries are consistent");
    Ok((tripled, witness))
}

#[derive(Debug, Clone, Serialize)]
pub struct EntryBound {
    pub row: usize,
    pub col: usize,
    pub bessel_est: f64,
}

/// Per-entry Bessel estimates and the proof constant tying them to the
/// full system.
#[derive(Debug, Clone, Serialize)]
pub struct EntryBesselReport {
    pub entries: Vec<EntryBound>,
    /// β₀ = max per-entry bound.
    pub beta0: f64,
    /// β₀·2^{S−1}(P+1), an upper bound for the full system's optimal
    /// Bessel bound.
    pub aggregate_bound: f64,
    /// Finitely supported windows always generate Bessel sequences, so
    /// the equivalence reduces to the numeric estimates above.
    pub all_entries_bessel: bool,
}

/// Grid Bessel estimate for each single-entry scalar system
/// {E_{m/M}R_{2Nλ}[M]_{ll'}}.
pub fn entry_bessel_report(spec: &GaborSpec, grid: &XiGrid) -> EntryBesselReport {
    let matrix = WindowMatrix::from_spec(spec);
    let mut entries = Vec::new();
    let mut beta0: f64 = 0.0;
    for row in 0..matrix.dim() {
        for col in 0..matrix.window_count() {
            let w = matrix.entry_sequence(*spec.params(), row, col);
            let single = GaborSpec::new(*spec.params(), spec.m_count(), vec![w])
                .expect("entry windows share the parent parameters");
            let (_, b_est) = frame_bounds_grid(&single, grid);
            beta0 = beta0.max(b_est);
            entries.push(EntryBound {
                row,
                col,
                bessel_est: b_est,
            });
        }
    }
    let aggregate_bound =
        beta0 * 2f64.powi(spec.dim() as i32 - 1) * spec.windows().len() as f64;
    EntryBesselReport {
        entries,
        beta0,
        aggregate_bound,
        all_entries_bessel: true,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::demos;
    use crate::gabor::{empirical_frame_ratio, energy, random_test_sequence};
    use crate::lambda::LambdaParams;
    use approx::assert_abs_diff_eq;
    use rand::Rng;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn mean_system_of_tight_spec_is_tight_with_half_the_bound() {
        let spec = demos::tight_frame_spec();
        let mean = mean_system(&spec);
        assert_eq!(mean.dim(), 1);
        let grid = XiGrid::new(*spec.params(), 64).unwrap();
        let (a, b) = frame_bounds_grid(&mean, &grid);
        assert_abs_diff_eq!(a, 2.0, epsilon = 1e-9);
        assert_abs_diff_eq!(b, 2.0, epsilon = 1e-9);
        let (lo, hi) = empirical_frame_ratio(&mean, 50, 0).unwrap();
        assert_abs_diff_eq!(lo, 2.0, epsilon = 1e-9);
        assert_abs_diff_eq!(hi, 2.0, epsilon = 1e-9);
        // sandwich inheritance around the parent's bounds over S
        let (pa, pb) = frame_bounds_grid(&spec, &grid);
        assert!(a >= pa / 2.0 - 1e-9);
        assert!(b <= pb / 2.0 + 1e-9);
    }

    #[test]
    fn mean_system_degenerate_cases() {
        // S = 1: the mean system is the spec itself
        let params = LambdaParams::new(2, 1).unwrap();
        let w = NuSequence::delta(params, 1, LambdaPoint::origin(), 0, c(1.0, 0.0));
        let scalar = GaborSpec::new(params, 2, vec![w]).unwrap();
        assert_eq!(mean_system(&scalar), scalar);
        // coordinates cancelling pointwise yield zero mean windows
        let w = NuSequence::from_entries(
            params,
            2,
            [(LambdaPoint::origin(), vec![c(1.0, 0.0), c(-1.0, 0.0)])],
        )
        .unwrap();
        let cancelling = GaborSpec::new(params, 1, vec![w]).unwrap();
        let mean = mean_system(&cancelling);
        assert!(!mean.has_nonzero_window());
        let grid = XiGrid::new(params, 16).unwrap();
        assert_eq!(frame_bounds_grid(&mean, &grid), (0.0, 0.0));
    }

    #[test]
    fn lift_identity_for_mean_energies() {
        // energy_parent(lift x) = S²·energy_mean(x)
        let spec = demos::tight_frame_spec();
        let mean = mean_system(&spec);
        let mut rng = ChaCha8Rng::seed_from_u64(19);
        for _ in 0..10 {
            let x = random_test_sequence(&mean, &mut rng);
            let lifted = constant_lift(&x, spec.dim()).unwrap();
            let parent = energy(&spec, &lifted).unwrap();
            let reduced = energy(&mean, &x).unwrap();
            assert!((parent - 4.0 * reduced).abs() <= 1e-10 * (1.0 + parent));
        }
    }

    #[test]
    fn row_systems_inherit_the_tight_bound() {
        let spec = demos::tight_frame_spec();
        let grid = XiGrid::new(*spec.params(), 64).unwrap();
        for row in 0..2 {
            let rows = row_system(&spec, row).unwrap();
            let (a, b) = frame_bounds_grid(&rows, &grid);
            assert_abs_diff_eq!(a, 4.0, epsilon = 1e-9);
            assert_abs_diff_eq!(b, 4.0, epsilon = 1e-9);
        }
        assert!(matches!(
            row_system(&spec, 2),
            Err(ReduceError::RowOutOfRange { got: 2, max: 1 })
        ));
    }

    #[test]
    fn coordinate_lift_energy_restricts_exactly() {
        // a signal living in coordinate l0 sees exactly the row system
        let spec = demos::tight_frame_spec();
        let rows = row_system(&spec, 0).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(23);
        for _ in 0..10 {
            let x = random_test_sequence(&rows, &mut rng);
            let lifted = NuSequence::from_entries(
                *spec.params(),
                2,
                x.iter().map(|(pt, v)| (*pt, vec![v[0], c(0.0, 0.0)])),
            )
            .unwrap();
            let parent = energy(&spec, &lifted).unwrap();
            let row_e = energy(&rows, &x).unwrap();
            assert!((parent - row_e).abs() <= 1e-12 * (1.0 + parent));
        }
    }

    #[test]
    fn identical_coordinates_collapse_rows_onto_the_mean() {
        let params = LambdaParams::new(2, 1).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(29);
        let windows: Vec<NuSequence> = (0..3)
            .map(|_| {
                let x = NuSequence::from_entries(
                    params,
                    1,
                    (0..3).map(|_| {
                        (
                            LambdaPoint::new(rng.gen_range(-2..2), rng.gen()),
                            vec![c(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))],
                        )
                    }),
                )
                .unwrap();
                constant_lift(&x, 2).unwrap()
            })
            .collect();
        let spec = GaborSpec::new(params, 2, windows).unwrap();
        let mean = mean_system(&spec);
        for row in 0..2 {
            assert_eq!(row_system(&spec, row).unwrap(), mean);
        }
    }

    #[test]
    fn counterexample_witness_has_exactly_zero_energy() {
        let spec = demos::tight_frame_spec();
        let scalar = mean_system(&spec);
        let seed = NuSequence::delta(*spec.params(), 1, LambdaPoint::origin(), 0, c(1.0, 0.0));
        let (tripled, witness) = converse_counterexample(&scalar, &seed).unwrap();
        assert_eq!(tripled.dim(), 3);
        assert!(witness.norm() > 0.0);
        assert_eq!(energy(&tripled, &witness).unwrap(), 0.0);
        // rows of the tripled system coincide with the scalar windows
        for row in 0..3 {
            assert_eq!(row_system(&tripled, row).unwrap(), scalar);
        }
        let zero = NuSequence::zero(*spec.params(), 1);
        assert_eq!(
            converse_counterexample(&scalar, &zero),
            Err(ReduceError::ZeroWitness)
        );
        assert_eq!(
            converse_counterexample(&spec, &seed),
            Err(ReduceError::NotScalar)
        );
    }

    #[test]
    fn entry_bessel_aggregate_dominates_full_system() {
        let spec = demos::tight_frame_spec();
        let grid = XiGrid::new(*spec.params(), 64).unwrap();
        let report = entry_bessel_report(&spec, &grid);
        assert_eq!(report.entries.len(), 16);
        assert!(report.all_entries_bessel);
        assert_abs_diff_eq!(
            report.aggregate_bound,
            report.beta0 * 2.0 * 8.0,
            epsilon = 1e-12
        );
        let (_, emax) = empirical_frame_ratio(&spec, 50, 0).unwrap();
        assert!(emax <= report.aggregate_bound + 1e-9);
        // zero windows: every entry bound is zero
        let zeroed = spec.map_windows(|w| w.scale(c(0.0, 0.0))).unwrap();
        let zr = entry_bessel_report(&zeroed, &grid);
        assert!(zr.entries.iter().all(|e| e.bessel_est == 0.0));
        assert_eq!(zr.aggregate_bound, 0.0);
    }

    #[test]
    fn window_matrix_round_trips_columns() {
        let spec = demos::tight_frame_spec();
        let matrix = WindowMatrix::from_spec(&spec);
        for (j, w) in spec.windows().iter().enumerate() {
            for row in 0..2 {
                let entry = matrix.entry_sequence(*spec.params(), row, j);
                assert_eq!(entry, w.coordinate(row));
            }
        }
    }
}
