//! The Fourier transform 𝓕: ℓ²(Λ, ℂ^S) → L²(Ω, ℂ^S), represented
//! exactly.
//!
//! Every point of Λ is p/N for an integer p, so the transform of a
//! finitely supported sequence is a Laurent polynomial in w = e^{2πiξ/N}:
//! F(ξ) = Σ_p c_p w^p. Products, conjugates (on the real line), argument
//! shifts ξ ↦ ξ + c and integrals over rational intervals all stay in
//! closed form, which removes quadrature error from inner products and
//! norm computations.

use std::collections::BTreeMap;

use num_complex::Complex64;
use num_rational::Rational64;
use num_traits::ToPrimitive;
use thiserror::Error;

use crate::lambda::{LambdaParams, LambdaPoint, XiGrid};
use crate::phase::unit_phase;
use crate::sequences::NuSequence;

#[derive(Debug, Error, PartialEq)]
pub enum TransformError {
    #[error("frequency {0} is not the numerator of any point of Λ")]
    FrequencyNotInLambda(i64),
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("interval endpoints must satisfy a < b, got [{0}, {1})")]
    EmptyInterval(Rational64, Rational64),
}

/// A half-open integration interval [a, b) with rational endpoints.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Interval {
    a: Rational64,
    b: Rational64,
}

impl Interval {
    pub fn new(a: Rational64, b: Rational64) -> Result<Self, TransformError> {
        if a >= b {
            return Err(TransformError::EmptyInterval(a, b));
        }
        Ok(Interval { a, b })
    }

    pub fn a(&self) -> Rational64 {
        self.a
    }

    pub fn b(&self) -> Rational64 {
        self.b
    }

    pub fn length(&self) -> Rational64 {
        self.b - self.a
    }
}

/// The two intervals [0, 1/2) and [N/2, (N+1)/2) making up Ω.
pub fn omega_intervals(params: &LambdaParams) -> [Interval; 2] {
    let [(a0, b0), (a1, b1)] = params.omega_bounds();
    [
        Interval::new(a0, b0).expect("nonempty"),
        Interval::new(a1, b1).expect("nonempty"),
    ]
}

/// A scalar trigonometric polynomial Σ_p c_p e^{2πi(p/N)ξ}, keyed by the
/// integer frequency p.
#[derive(Debug, Clone, PartialEq)]
pub struct LaurentPoly {
    denom: i64,
    coeffs: BTreeMap<i64, Complex64>,
}

fn nonzero(z: &Complex64) -> bool {
    z.re != 0.0 || z.im != 0.0
}

impl LaurentPoly {
    pub fn zero(denom: i64) -> Self {
        assert!(denom >= 1);
        LaurentPoly {
            denom,
            coeffs: BTreeMap::new(),
        }
    }

    pub fn monomial(denom: i64, freq: i64, c: Complex64) -> Self {
        let mut p = LaurentPoly::zero(denom);
        if nonzero(&c) {
            p.coeffs.insert(freq, c);
        }
        p
    }

    pub fn denom(&self) -> i64 {
        self.denom
    }

    pub fn coeff(&self, freq: i64) -> Complex64 {
        self.coeffs
            .get(&freq)
            .copied()
            .unwrap_or(Complex64::new(0.0, 0.0))
    }

    pub fn coeffs(&self) -> impl Iterator<Item = (&i64, &Complex64)> {
        self.coeffs.iter()
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn add_term(&mut self, freq: i64, c: Complex64) {
        let entry = self.coeffs.entry(freq).or_insert(Complex64::new(0.0, 0.0));
        *entry += c;
        if !nonzero(entry) {
            self.coeffs.remove(&freq);
        }
    }

    pub fn add(&self, other: &LaurentPoly) -> LaurentPoly {
        debug_assert_eq!(self.denom, other.denom);
        let mut out = self.clone();
        for (f, c) in &other.coeffs {
            out.add_term(*f, *c);
        }
        out
    }

    pub fn scale(&self, c: Complex64) -> LaurentPoly {
        if !nonzero(&c) {
            return LaurentPoly::zero(self.denom);
        }
        LaurentPoly {
            denom: self.denom,
            coeffs: self.coeffs.iter().map(|(f, z)| (*f, z * c)).collect(),
        }
    }

    pub fn mul(&self, other: &LaurentPoly) -> LaurentPoly {
        debug_assert_eq!(self.denom, other.denom);
        let mut out = LaurentPoly::zero(self.denom);
        for (f1, c1) in &self.coeffs {
            for (f2, c2) in &other.coeffs {
                out.add_term(f1 + f2, c1 * c2);
            }
        }
        out
    }

    /// Multiplies by the monomial c·e^{2πi(freq/N)ξ}.
    pub fn mul_monomial(&self, freq: i64, c: Complex64) -> LaurentPoly {
        if !nonzero(&c) {
            return LaurentPoly::zero(self.denom);
        }
        LaurentPoly {
            denom: self.denom,
            coeffs: self
                .coeffs
                .iter()
                .map(|(f, z)| (f + freq, z * c))
                .collect(),
        }
    }

    /// The polynomial agreeing with ξ ↦ conj(F(ξ)) on the real line:
    /// conjugated coefficients at negated frequencies.
    pub fn conj_reflected(&self) -> LaurentPoly {
        LaurentPoly {
            denom: self.denom,
            coeffs: self.coeffs.iter().map(|(f, z)| (-f, z.conj())).collect(),
        }
    }

    /// Precomposition with ξ ↦ ξ + c: each coefficient picks up the
    /// exact phase e^{2πi(p/N)c}.
    pub fn shift_arg(&self, c: Rational64) -> LaurentPoly {
        LaurentPoly {
            denom: self.denom,
            coeffs: self
                .coeffs
                .iter()
                .map(|(f, z)| {
                    let theta = Rational64::new(*f, self.denom) * c;
                    (*f, z * unit_phase(theta))
                })
                .collect(),
        }
    }

    /// Exact evaluation at a rational ξ.
    pub fn eval_exact(&self, xi: Rational64) -> Complex64 {
        let mut acc = Complex64::new(0.0, 0.0);
        for (f, c) in &self.coeffs {
            acc += c * unit_phase(Rational64::new(*f, self.denom) * xi);
        }
        acc
    }

    /// Float evaluation at an arbitrary real ξ.
    pub fn eval_f64(&self, xi: f64) -> Complex64 {
        let mut acc = Complex64::new(0.0, 0.0);
        for (f, c) in &self.coeffs {
            let angle = std::f64::consts::TAU * (*f as f64) * xi / self.denom as f64;
            acc += c * Complex64::new(angle.cos(), angle.sin());
        }
        acc
    }

    /// Closed-form ∫_a^b F(ξ) dξ: the p = 0 term contributes c·(b−a),
    /// every other term N(e^{2πipb/N} − e^{2πipa/N})/(2πip)·c.
    pub fn integrate(&self, iv: &Interval) -> Complex64 {
        let mut acc = Complex64::new(0.0, 0.0);
        for (f, c) in &self.coeffs {
            if *f == 0 {
                acc += c * iv.length().to_f64().expect("interval length fits in f64");
            } else {
                let pb = unit_phase(Rational64::new(*f, self.denom) * iv.b);
                let pa = unit_phase(Rational64::new(*f, self.denom) * iv.a);
                let denom = Complex64::new(0.0, std::f64::consts::TAU * *f as f64);
                acc += c * (self.denom as f64) * (pb - pa) / denom;
            }
        }
        acc
    }

    pub fn integrate_over(&self, domain: &[Interval]) -> Complex64 {
        domain.iter().map(|iv| self.integrate(iv)).sum()
    }
}

/// The S-component Fourier transform of a finitely supported sequence,
/// one Laurent polynomial per coordinate.
#[derive(Debug, Clone, PartialEq)]
pub struct LaurentVector {
    params: LambdaParams,
    comps: Vec<LaurentPoly>,
}

impl LaurentVector {
    pub fn zero(params: LambdaParams, dim: usize) -> Self {
        assert!(dim >= 1);
        LaurentVector {
            params,
            comps: vec![LaurentPoly::zero(params.n()); dim],
        }
    }

    pub fn params(&self) -> &LambdaParams {
        &self.params
    }

    pub fn dim(&self) -> usize {
        self.comps.len()
    }

    pub fn component(&self, k: usize) -> &LaurentPoly {
        &self.comps[k]
    }

    pub fn components(&self) -> &[LaurentPoly] {
        &self.comps
    }

    pub fn is_zero(&self) -> bool {
        self.comps.iter().all(LaurentPoly::is_zero)
    }

    pub fn add(&self, other: &LaurentVector) -> LaurentVector {
        debug_assert_eq!(self.dim(), other.dim());
        LaurentVector {
            params: self.params,
            comps: self
                .comps
                .iter()
                .zip(&other.comps)
                .map(|(a, b)| a.add(b))
                .collect(),
        }
    }

    pub fn eval_exact(&self, xi: Rational64) -> Vec<Complex64> {
        self.comps.iter().map(|p| p.eval_exact(xi)).collect()
    }

    pub fn eval_f64(&self, xi: f64) -> Vec<Complex64> {
        self.comps.iter().map(|p| p.eval_f64(xi)).collect()
    }

    /// ‖F(ξ)‖_{ℂ^S} at an exact grid point.
    pub fn norm_at(&self, xi: Rational64) -> f64 {
        self.eval_exact(xi)
            .iter()
            .map(|z| z.norm_sqr())
            .sum::<f64>()
            .sqrt()
    }
}

/// 𝓕(Z): coefficient at frequency p is the value of Z at the point with
/// numerator p.
pub fn forward(z: &NuSequence) -> LaurentVector {
    let params = *z.params();
    let mut comps = vec![LaurentPoly::zero(params.n()); z.dim()];
    for (pt, v) in z.iter() {
        let p = pt.numerator(&params);
        for (k, c) in v.iter().enumerate() {
            if nonzero(c) {
                comps[k].add_term(p, *c);
            }
        }
    }
    LaurentVector { params, comps }
}

/// 𝓕⁻¹: exact coefficient extraction. Fails if any frequency falls
/// outside the numerator residues of Λ.
pub fn inverse(f: &LaurentVector) -> Result<NuSequence, TransformError> {
    let params = *f.params();
    let dim = f.dim();
    let mut entries: BTreeMap<LambdaPoint, Vec<Complex64>> = BTreeMap::new();
    for (k, comp) in f.comps.iter().enumerate() {
        for (freq, c) in comp.coeffs() {
            let pt = LambdaPoint::from_numerator(*freq, &params)
                .ok_or(TransformError::FrequencyNotInLambda(*freq))?;
            entries
                .entry(pt)
                .or_insert_with(|| vec![Complex64::new(0.0, 0.0); dim])[k] = *c;
        }
    }
    NuSequence::from_entries(params, dim, entries)
        .map_err(|e| TransformError::DimensionMismatch(e.to_string()))
}

/// 𝓕(E_{m/M}W): the coefficient at p picks up the phase e^{2πi(m/M)(p/N)}.
pub fn modulated_transform(
    w: &NuSequence,
    m: i64,
    m_count: i64,
) -> Result<LaurentVector, TransformError> {
    let modded = w
        .modulate(m, m_count)
        .map_err(|e| TransformError::DimensionMismatch(e.to_string()))?;
    Ok(forward(&modded))
}

/// ⟨F, G⟩ = Σ_k ∫ F_k conj(G_k) over the given intervals, in closed form.
pub fn integrate_product(
    f: &LaurentVector,
    g: &LaurentVector,
    domain: &[Interval],
) -> Result<Complex64, TransformError> {
    if f.dim() != g.dim() || f.params != g.params {
        return Err(TransformError::DimensionMismatch(format!(
            "S = {} vs S = {}",
            f.dim(),
            g.dim()
        )));
    }
    let mut acc = Complex64::new(0.0, 0.0);
    for k in 0..f.dim() {
        let prod = f.comps[k].mul(&g.comps[k].conj_reflected());
        acc += prod.integrate_over(domain);
    }
    Ok(acc)
}

/// L²(Ω) inner product of two transforms.
pub fn inner_product_omega(
    f: &LaurentVector,
    g: &LaurentVector,
) -> Result<Complex64, TransformError> {
    integrate_product(f, g, &omega_intervals(&f.params))
}

/// ‖F‖_{L²(Ω)}.
pub fn norm_omega(f: &LaurentVector) -> f64 {
    inner_product_omega(f, f)
        .expect("F is compatible with itself")
        .re
        .max(0.0)
        .sqrt()
}

/// Grid maximum of ‖F(ξ)‖_{ℂ^S} over all Ω sample points. A lower
/// estimate of the essential sup.
pub fn sup_norm_on_grid(f: &LaurentVector, grid: &XiGrid) -> f64 {
    grid.omega_points()
        .iter()
        .map(|xi| f.norm_at(*xi))
        .fold(0.0, f64::max)
}
