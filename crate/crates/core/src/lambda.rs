//! The nonuniform translation set Λ = {0, r/N} + 2ℤ and its spectral
//! domain Ω = [0, 1/2) ∪ [N/2, (N+1)/2).
//!
//! Points of Λ are kept in exact integer form: λ = 2n + ε·r/N has the
//! integer numerator p = 2nN + εr over the fixed denominator N, and the
//! map (n, ε) ↦ p is a bijection onto the admissible residues
//! p ≡ 0 (mod 2N) and p ≡ r (mod 2N).

use num_rational::Rational64;
use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum ParamError {
    #[error("N must be a positive integer, got {0}")]
    NonPositive(i64),
    #[error("r must be odd, got {0}")]
    NonOdd(i64),
    #[error("r = {r} out of range [1, {max}]")]
    OutOfRange { r: i64, max: i64 },
    #[error("r = {r} is not coprime with N = {n}")]
    NotCoprime { r: i64, n: i64 },
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum GridError {
    #[error("grid resolution must be positive, got {0}")]
    NonPositive(i64),
}

/// Validated parameters (N, r) of the translation set Λ = {0, r/N} + 2ℤ.
///
/// For N = 1 the set collapses to ℤ and the system is a classical
/// uniform discrete Gabor system.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct LambdaParams {
    n: u32,
    r: u32,
}

impl LambdaParams {
    /// Validates N ≥ 1, r odd, 1 ≤ r ≤ 2N−1 and gcd(r, N) = 1.
    pub fn new(n: i64, r: i64) -> Result<Self, ParamError> {
        if n < 1 {
            return Err(ParamError::NonPositive(n));
        }
        if r.rem_euclid(2) != 1 {
            return Err(ParamError::NonOdd(r));
        }
        if r < 1 || r > 2 * n - 1 {
            return Err(ParamError::OutOfRange { r, max: 2 * n - 1 });
        }
        if num_integer::gcd(r, n) != 1 {
            return Err(ParamError::NotCoprime { r, n });
        }
        Ok(LambdaParams {
            n: n as u32,
            r: r as u32,
        })
    }

    pub fn n(&self) -> i64 {
        self.n as i64
    }

    pub fn r(&self) -> i64 {
        self.r as i64
    }

    /// Is the numerator p the exact form (2nN + εr) of some point of Λ?
    pub fn is_lambda_numerator(&self, p: i64) -> bool {
        let rem = p.rem_euclid(2 * self.n());
        rem == 0 || rem == self.r()
    }

    /// The two half-open intervals [0, 1/2) and [N/2, (N+1)/2) making up Ω.
    pub fn omega_bounds(&self) -> [(Rational64, Rational64); 2] {
        let n = self.n();
        [
            (Rational64::new(0, 1), Rational64::new(1, 2)),
            (Rational64::new(n, 2), Rational64::new(n + 1, 2)),
        ]
    }
}

/// A point λ = 2n + ε·r/N of Λ, stored as the pair (n, ε).
///
/// Ordering is by the real value of λ, which coincides with the
/// lexicographic order on (n, ε) because 0 ≤ r/N < 2.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct LambdaPoint {
    pub n: i64,
    pub eps: bool,
}

impl LambdaPoint {
    pub fn new(n: i64, eps: bool) -> Self {
        LambdaPoint { n, eps }
    }

    pub fn origin() -> Self {
        LambdaPoint { n: 0, eps: false }
    }

    /// Integer numerator p with λ = p/N, i.e. p = 2nN + εr.
    pub fn numerator(&self, params: &LambdaParams) -> i64 {
        2 * self.n * params.n() + if self.eps { params.r() } else { 0 }
    }

    /// Decodes a numerator back to (n, ε); rejects p outside the two
    /// admissible residues mod 2N.
    pub fn from_numerator(p: i64, params: &LambdaParams) -> Option<Self> {
        let two_n = 2 * params.n();
        let rem = p.rem_euclid(two_n);
        if rem == 0 {
            Some(LambdaPoint::new(p / two_n, false))
        } else if rem == params.r() {
            Some(LambdaPoint::new((p - params.r()) / two_n, true))
        } else {
            None
        }
    }

    /// Exact value λ = 2n + ε·r/N as a rational.
    pub fn value(&self, params: &LambdaParams) -> Rational64 {
        Rational64::new(self.numerator(params), params.n())
    }

    /// λ as a float, for evaluation boundaries only.
    pub fn value_f64(&self, params: &LambdaParams) -> f64 {
        self.numerator(params) as f64 / params.n() as f64
    }

    /// The point λ + 2Nλ_shift. Since 2Nλ_shift = 4Nn_s + 2ε_s r is an
    /// even integer, the ε component is preserved.
    pub fn translate(&self, shift: &LambdaPoint, params: &LambdaParams) -> LambdaPoint {
        let delta_n = 2 * params.n() * shift.n + if shift.eps { params.r() } else { 0 };
        LambdaPoint::new(self.n + delta_n, self.eps)
    }
}

/// Midpoint sampling grid of the base cell [0, 1/(4N)) together with the
/// 4N translate offsets that tile Ω exactly.
#[derive(Debug, Clone, PartialEq)]
pub struct XiGrid {
    params: LambdaParams,
    resolution: u32,
    base: Vec<Rational64>,
}

impl XiGrid {
    /// Q midpoints ξ_q = (q + 1/2)/(4NQ) of the base cell, q = 0..Q−1.
    pub fn new(params: LambdaParams, resolution: i64) -> Result<Self, GridError> {
        if resolution < 1 {
            return Err(GridError::NonPositive(resolution));
        }
        let n = params.n();
        let base = (0..resolution)
            .map(|q| Rational64::new(2 * q + 1, 8 * n * resolution))
            .collect();
        Ok(XiGrid {
            params,
            resolution: resolution as u32,
            base,
        })
    }

    pub fn params(&self) -> &LambdaParams {
        &self.params
    }

    pub fn resolution(&self) -> i64 {
        self.resolution as i64
    }

    pub fn base_points(&self) -> &[Rational64] {
        &self.base
    }

    /// The 4N offsets t/(4N) and N/2 + t/(4N), t = 0..2N−1. Adding them
    /// to a base cell point lands once in every tile of Ω.
    pub fn translate_offsets(&self) -> Vec<Rational64> {
        let n = self.params.n();
        let mut offs = Vec::with_capacity(4 * n as usize);
        for t in 0..2 * n {
            offs.push(Rational64::new(t, 4 * n));
        }
        for t in 0..2 * n {
            offs.push(Rational64::new(2 * n * n + t, 4 * n));
        }
        offs
    }

    /// All 4NQ sample points of Ω (base points plus translate offsets).
    pub fn omega_points(&self) -> Vec<Rational64> {
        let offs = self.translate_offsets();
        let mut pts = Vec::with_capacity(self.base.len() * offs.len());
        for xi in &self.base {
            for off in &offs {
                pts.push(xi + off);
            }
        }
        pts
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn validates_reference_parameters() {
        assert!(LambdaParams::new(2, 1).is_ok());
        assert!(LambdaParams::new(1, 1).is_ok());
        assert_eq!(LambdaParams::new(2, 2), Err(ParamError::NonOdd(2)));
        assert_eq!(
            LambdaParams::new(2, 5),
            Err(ParamError::OutOfRange { r: 5, max: 3 })
        );
        assert_eq!(
            LambdaParams::new(3, 3),
            Err(ParamError::NotCoprime { r: 3, n: 3 })
        );
        assert_eq!(LambdaParams::new(0, 1), Err(ParamError::NonPositive(0)));
        assert_eq!(LambdaParams::new(-2, 1), Err(ParamError::NonPositive(-2)));
    }

    #[test]
    fn uniform_case_is_all_integers() {
        // N = 1: numerators cover every integer.
        let p = LambdaParams::new(1, 1).unwrap();
        for num in -5..=5 {
            let pt = LambdaPoint::from_numerator(num, &p).unwrap();
            assert_eq!(pt.numerator(&p), num);
        }
    }

    #[test]
    fn lambda_values() {
        let p = LambdaParams::new(2, 1).unwrap();
        assert_eq!(
            LambdaPoint::new(0, false).value(&p),
            Rational64::new(0, 1)
        );
        assert_eq!(LambdaPoint::new(2, false).value(&p), Rational64::new(4, 1));
        assert_eq!(LambdaPoint::new(0, true).value(&p), Rational64::new(1, 2));
    }

    #[test]
    fn translate_preserves_eps_and_adds_even_integers() {
        let p = LambdaParams::new(2, 1).unwrap();
        // shift by λ = 2: 2Nλ = 8 = 2·4
        assert_eq!(
            LambdaPoint::new(0, false).translate(&LambdaPoint::new(1, false), &p),
            LambdaPoint::new(4, false)
        );
        // shift by λ = 1/2: 2Nλ = 2
        assert_eq!(
            LambdaPoint::new(0, true).translate(&LambdaPoint::new(0, true), &p),
            LambdaPoint::new(1, true)
        );
        // identity shift
        assert_eq!(
            LambdaPoint::new(7, true).translate(&LambdaPoint::origin(), &p),
            LambdaPoint::new(7, true)
        );
    }

    #[test]
    fn grid_base_points_match_midpoint_rule() {
        let p = LambdaParams::new(2, 1).unwrap();
        let g = XiGrid::new(p, 2).unwrap();
        assert_eq!(
            g.base_points(),
            &[Rational64::new(1, 32), Rational64::new(3, 32)]
        );
        let p1 = LambdaParams::new(1, 1).unwrap();
        let g1 = XiGrid::new(p1, 1).unwrap();
        assert_eq!(g1.base_points(), &[Rational64::new(1, 8)]);
        assert_eq!(XiGrid::new(p, 0), Err(GridError::NonPositive(0)));
    }

    #[test]
    fn translates_tile_omega() {
        // The 4N intervals [off, off + 1/4N) partition Ω exactly.
        for (n, r) in [(1i64, 1i64), (2, 1), (2, 3), (3, 5)] {
            let p = LambdaParams::new(n, r).unwrap();
            let g = XiGrid::new(p, 2).unwrap();
            let cell = Rational64::new(1, 4 * n);
            let mut tiles: Vec<(Rational64, Rational64)> = g
                .translate_offsets()
                .iter()
                .map(|o| (*o, o + cell))
                .collect();
            tiles.sort();
            // pairwise disjoint
            for w in tiles.windows(2) {
                assert!(w[0].1 <= w[1].0);
            }
            // union is exactly the two Ω intervals
            let [lo, hi] = p.omega_bounds();
            let in_first: Vec<_> = tiles.iter().filter(|t| t.1 <= lo.1).cloned().collect();
            let in_second: Vec<_> = tiles.iter().filter(|t| t.0 >= hi.0).cloned().collect();
            assert_eq!(in_first.len() + in_second.len(), tiles.len());
            assert_eq!(in_first.first().unwrap().0, lo.0);
            assert_eq!(in_first.last().unwrap().1, lo.1);
            assert_eq!(in_second.first().unwrap().0, hi.0);
            assert_eq!(in_second.last().unwrap().1, hi.1);
            for w in in_first.windows(2) {
                assert_eq!(w[0].1, w[1].0);
            }
            for w in in_second.windows(2) {
                assert_eq!(w[0].1, w[1].0);
            }
        }
    }

    proptest! {
        #[test]
        fn numerator_roundtrip(n in -1000i64..1000, eps: bool, np in 1i64..6) {
            // any valid r for this N
            let r = (1..2*np).step_by(2).find(|r| num_integer::gcd(*r, np) == 1).unwrap();
            let params = LambdaParams::new(np, r).unwrap();
            let pt = LambdaPoint::new(n, eps);
            let p = pt.numerator(&params);
            prop_assert_eq!(LambdaPoint::from_numerator(p, &params), Some(pt));
            // residue classes
            let rem = p.rem_euclid(2 * params.n());
            prop_assert_eq!(rem == 0, !eps);
            prop_assert_eq!(rem == params.r(), eps);
        }

        #[test]
        fn shifts_compose_additively(n in -50i64..50, eps: bool,
                                     a_n in -20i64..20, a_e: bool,
                                     b_n in -20i64..20, b_e: bool) {
            let params = LambdaParams::new(2, 1).unwrap();
            let pt = LambdaPoint::new(n, eps);
            let a = LambdaPoint::new(a_n, a_e);
            let b = LambdaPoint::new(b_n, b_e);
            let one_by_one = pt.translate(&a, &params).translate(&b, &params);
            // numerators add: 2N(λ_a + λ_b) moves the numerator by 2N(p_a + p_b)/N
            let combined = pt.numerator(&params)
                + 2 * params.n() * (a.numerator(&params) + b.numerator(&params));
            prop_assert_eq!(one_by_one.numerator(&params), combined);
        }
    }
}
