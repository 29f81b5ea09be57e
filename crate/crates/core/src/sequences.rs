//! Finitely supported vector-valued signals Z: Λ → ℂ^S with the
//! ℓ²(Λ, ℂ^S) inner product, shift and modulation operators, and the
//! arithmetic-mean reduction to scalar signals.
//!
//! Sequences are sparse maps keyed by [`LambdaPoint`]; absent points are
//! the zero vector and stored vectors are never exactly zero, so two
//! equal signals have identical representations.

use std::collections::BTreeMap;

use num_complex::Complex64;
use num_rational::Rational64;
use thiserror::Error;

use crate::lambda::{LambdaParams, LambdaPoint};
use crate::phase::unit_phase;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum SeqError {
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("modulation index {m} out of range [0, {max}]")]
    ModulationOutOfRange { m: i64, max: i64 },
}

/// A finitely supported element of ℓ²(Λ, ℂ^S).
#[derive(Debug, Clone, PartialEq)]
pub struct NuSequence {
    params: LambdaParams,
    dim: usize,
    entries: BTreeMap<LambdaPoint, Vec<Complex64>>,
}

fn is_zero_vec(v: &[Complex64]) -> bool {
    v.iter().all(|z| z.re == 0.0 && z.im == 0.0)
}

impl NuSequence {
    pub fn zero(params: LambdaParams, dim: usize) -> Self {
        assert!(dim >= 1, "coordinate dimension must be positive");
        NuSequence {
            params,
            dim,
            entries: BTreeMap::new(),
        }
    }

    /// Builds a sequence from (point, vector) pairs; vectors must all
    /// have length S and exact zeros are dropped. Later pairs overwrite
    /// earlier ones at the same point.
    pub fn from_entries<I>(
        params: LambdaParams,
        dim: usize,
        entries: I,
    ) -> Result<Self, SeqError>
    where
        I: IntoIterator<Item = (LambdaPoint, Vec<Complex64>)>,
    {
        let mut seq = NuSequence::zero(params, dim);
        for (pt, v) in entries {
            if v.len() != dim {
                return Err(SeqError::DimensionMismatch(format!(
                    "entry at (n={}, eps={}) has {} components, expected {}",
                    pt.n,
                    pt.eps as u8,
                    v.len(),
                    dim
                )));
            }
            if is_zero_vec(&v) {
                seq.entries.remove(&pt);
            } else {
                seq.entries.insert(pt, v);
            }
        }
        Ok(seq)
    }

    /// δ-sequence: value `c` in coordinate `coord` at `pt`, zero elsewhere.
    pub fn delta(
        params: LambdaParams,
        dim: usize,
        pt: LambdaPoint,
        coord: usize,
        c: Complex64,
    ) -> Self {
        let mut v = vec![Complex64::new(0.0, 0.0); dim];
        v[coord] = c;
        NuSequence::from_entries(params, dim, [(pt, v)]).expect("dimension is consistent")
    }

    pub fn params(&self) -> &LambdaParams {
        &self.params
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn is_zero(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn support(&self) -> impl Iterator<Item = &LambdaPoint> {
        self.entries.keys()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&LambdaPoint, &Vec<Complex64>)> {
        self.entries.iter()
    }

    /// The stored vector at `pt`, or the zero vector.
    pub fn value(&self, pt: &LambdaPoint) -> Vec<Complex64> {
        self.entries
            .get(pt)
            .cloned()
            .unwrap_or_else(|| vec![Complex64::new(0.0, 0.0); self.dim])
    }

    fn check_compatible(&self, other: &NuSequence) -> Result<(), SeqError> {
        if self.params != other.params || self.dim != other.dim {
            return Err(SeqError::DimensionMismatch(format!(
                "incompatible sequences: (N={}, r={}, S={}) vs (N={}, r={}, S={})",
                self.params.n(),
                self.params.r(),
                self.dim,
                other.params.n(),
                other.params.r(),
                other.dim
            )));
        }
        Ok(())
    }

    /// ⟨Z, W⟩ = Σ_{λ,k} [Z(λ)]_k conj([W(λ)]_k), conjugate-linear in W.
    pub fn inner_product(&self, other: &NuSequence) -> Result<Complex64, SeqError> {
        self.check_compatible(other)?;
        let mut acc = Complex64::new(0.0, 0.0);
        for (pt, v) in &self.entries {
            if let Some(w) = other.entries.get(pt) {
                for k in 0..self.dim {
                    acc += v[k] * w[k].conj();
                }
            }
        }
        Ok(acc)
    }

    pub fn norm_sq(&self) -> f64 {
        // + 0.0 turns the empty sum's -0.0 into +0.0
        self.entries
            .values()
            .flat_map(|v| v.iter())
            .map(|z| z.norm_sqr())
            .sum::<f64>()
            + 0.0
    }

    pub fn norm(&self) -> f64 {
        self.norm_sq().sqrt()
    }

    /// Shift operator R_{2Nλ}: (R_{2Nλ}Z)(λ') = Z(λ' − 2Nλ). Unitary.
    pub fn shift(&self, lam: &LambdaPoint) -> NuSequence {
        let entries = self
            .entries
            .iter()
            .map(|(pt, v)| (pt.translate(lam, &self.params), v.clone()))
            .collect();
        NuSequence {
            params: self.params,
            dim: self.dim,
            entries,
        }
    }

    /// Modulation operator E_{m/M}: multiplication by e^{2πi(m/M)λ'}.
    /// Unitary. Requires 0 ≤ m ≤ M−1.
    pub fn modulate(&self, m: i64, m_count: i64) -> Result<NuSequence, SeqError> {
        if m < 0 || m >= m_count {
            return Err(SeqError::ModulationOutOfRange {
                m,
                max: m_count - 1,
            });
        }
        let n = self.params.n();
        let entries = self
            .entries
            .iter()
            .map(|(pt, v)| {
                // θ = (m/M)·λ' = m·p/(M·N) with p the numerator of λ'
                let theta = Rational64::new(m * pt.numerator(&self.params), m_count * n);
                let phase = unit_phase(theta);
                (*pt, v.iter().map(|z| z * phase).collect())
            })
            .collect();
        Ok(NuSequence {
            params: self.params,
            dim: self.dim,
            entries,
        })
    }

    /// The scalar sequence of coordinate averages μ_Z(λ) = (1/S)Σ_k [Z(λ)]_k.
    pub fn arithmetic_mean(&self) -> NuSequence {
        let s = self.dim as f64;
        let mut out = NuSequence::zero(self.params, 1);
        for (pt, v) in &self.entries {
            let mean = v.iter().sum::<Complex64>() / s;
            if !(mean.re == 0.0 && mean.im == 0.0) {
                out.entries.insert(*pt, vec![mean]);
            }
        }
        out
    }

    pub fn add(&self, other: &NuSequence) -> Result<NuSequence, SeqError> {
        self.check_compatible(other)?;
        let mut entries = self.entries.clone();
        for (pt, v) in &other.entries {
            match entries.get_mut(pt) {
                Some(cur) => {
                    for k in 0..self.dim {
                        cur[k] += v[k];
                    }
                    if is_zero_vec(cur) {
                        entries.remove(pt);
                    }
                }
                None => {
                    entries.insert(*pt, v.clone());
                }
            }
        }
        Ok(NuSequence {
            params: self.params,
            dim: self.dim,
            entries,
        })
    }

    pub fn scale(&self, c: Complex64) -> NuSequence {
        if c.re == 0.0 && c.im == 0.0 {
            return NuSequence::zero(self.params, self.dim);
        }
        let entries = self
            .entries
            .iter()
            .map(|(pt, v)| (*pt, v.iter().map(|z| z * c).collect()))
            .collect();
        NuSequence {
            params: self.params,
            dim: self.dim,
            entries,
        }
    }

    /// Extracts coordinate `coord` (0-based) as a scalar sequence.
    pub fn coordinate(&self, coord: usize) -> NuSequence {
        assert!(coord < self.dim);
        let mut out = NuSequence::zero(self.params, 1);
        for (pt, v) in &self.entries {
            let z = v[coord];
            if !(z.re == 0.0 && z.im == 0.0) {
                out.entries.insert(*pt, vec![z]);
            }
        }
        out
    }
}
