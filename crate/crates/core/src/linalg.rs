//! Small dense complex linear algebra: one-sided Jacobi singular values
//! and a conjugate-gradient solver for Hermitian positive-definite
//! operators. Sized for the desk-scale matrices this crate produces
//! (≤ 64×64), not for general use.

use num_complex::Complex64;
use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum CgError {
    #[error("conjugate gradient stagnated; the operator does not look positive definite")]
    Stagnated,
}

/// Row-major dense complex matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct CMat {
    rows: usize,
    cols: usize,
    data: Vec<Complex64>,
}

impl CMat {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        CMat {
            rows,
            cols,
            data: vec![Complex64::new(0.0, 0.0); rows * cols],
        }
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> Complex64) -> Self {
        let mut m = CMat::zeros(rows, cols);
        for i in 0..rows {
            for j in 0..cols {
                m.data[i * cols + j] = f(i, j);
            }
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> Complex64 {
        self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: Complex64) {
        self.data[i * self.cols + j] = v;
    }

    /// Conjugate transpose.
    pub fn adjoint(&self) -> CMat {
        CMat::from_fn(self.cols, self.rows, |i, j| self.get(j, i).conj())
    }

    pub fn matmul(&self, other: &CMat) -> CMat {
        assert_eq!(self.cols, other.rows);
        CMat::from_fn(self.rows, other.cols, |i, j| {
            (0..self.cols).map(|k| self.get(i, k) * other.get(k, j)).sum()
        })
    }

    pub fn apply(&self, x: &[Complex64]) -> Vec<Complex64> {
        assert_eq!(x.len(), self.cols);
        (0..self.rows)
            .map(|i| (0..self.cols).map(|j| self.get(i, j) * x[j]).sum())
            .collect()
    }

    pub fn max_abs(&self) -> f64 {
        self.data.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    fn columns(&self) -> Vec<Vec<Complex64>> {
        (0..self.cols)
            .map(|j| (0..self.rows).map(|i| self.get(i, j)).collect())
            .collect()
    }
}

fn col_dot(a: &[Complex64], b: &[Complex64]) -> Complex64 {
    a.iter().zip(b).map(|(x, y)| x.conj() * y).sum()
}

fn col_norm_sq(a: &[Complex64]) -> f64 {
    a.iter().map(|z| z.norm_sqr()).sum()
}

/// One-sided Jacobi on the columns of a tall matrix: rotations drive the
/// Gram matrix to diagonal form, after which the column norms are the
/// singular values.
fn jacobi_column_norms(mut cols: Vec<Vec<Complex64>>) -> Vec<f64> {
    let n = cols.len();
    let tol = 1e-14;
    let max_sweeps = 64;
    for _ in 0..max_sweeps {
        let mut rotated = false;
        for i in 0..n {
            for j in (i + 1)..n {
                let g = col_dot(&cols[i], &cols[j]);
                let a = col_norm_sq(&cols[i]);
                let b = col_norm_sq(&cols[j]);
                if g.norm_sqr() <= tol * tol * a * b || g.norm() == 0.0 {
                    continue;
                }
                rotated = true;
                // phase factor making the cross term real, then a real
                // Jacobi rotation annihilating it
                let phase = g / g.norm();
                let tau = (b - a) / (2.0 * g.norm());
                let t = if tau >= 0.0 {
                    1.0 / (tau + (1.0 + tau * tau).sqrt())
                } else {
                    -1.0 / (-tau + (1.0 + tau * tau).sqrt())
                };
                let c = 1.0 / (1.0 + t * t).sqrt();
                let s = c * t;
                for k in 0..cols[i].len() {
                    let x = cols[i][k];
                    let y = cols[j][k] * phase.conj();
                    cols[i][k] = c * x - s * y;
                    cols[j][k] = s * x + c * y;
                }
            }
        }
        if !rotated {
            break;
        }
    }
    let mut sv: Vec<f64> = cols.iter().map(|c| col_norm_sq(c).sqrt()).collect();
    sv.sort_by(|a, b| b.partial_cmp(a).expect("singular values are finite"));
    sv
}

/// The min(rows, cols) singular values of `a`, descending.
pub fn singular_values(a: &CMat) -> Vec<f64> {
    if a.rows >= a.cols {
        jacobi_column_norms(a.columns())
    } else {
        jacobi_column_norms(a.adjoint().columns())
    }
}

/// (σ_min, σ_max) of `a` viewed as an operator on its full column space:
/// σ_min is zero whenever cols > rows, since the matrix cannot be
/// injective.
pub fn sigma_extremes(a: &CMat) -> (f64, f64) {
    let sv = singular_values(a);
    let smax = sv.first().copied().unwrap_or(0.0);
    let smin = if a.cols > a.rows {
        0.0
    } else {
        sv.last().copied().unwrap_or(0.0)
    };
    (smin, smax)
}

fn vec_dot(a: &[Complex64], b: &[Complex64]) -> Complex64 {
    a.iter().zip(b).map(|(x, y)| x.conj() * y).sum()
}

fn vec_norm(a: &[Complex64]) -> f64 {
    a.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
}

/// Solves A x = b by conjugate gradients for a Hermitian positive-definite
/// operator given as a closure. Converges when the residual drops below
/// `tol·‖b‖`; errors out when the iteration cap is hit or a search
/// direction has nonpositive curvature.
pub fn conjugate_gradient<F>(
    apply: F,
    b: &[Complex64],
    tol: f64,
    max_iter: usize,
) -> Result<Vec<Complex64>, CgError>
where
    F: Fn(&[Complex64]) -> Vec<Complex64>,
{
    let n = b.len();
    let b_norm = vec_norm(b);
    if b_norm == 0.0 {
        return Ok(vec![Complex64::new(0.0, 0.0); n]);
    }
    let mut x = vec![Complex64::new(0.0, 0.0); n];
    let mut r = b.to_vec();
    let mut p = r.clone();
    let mut rs = vec_dot(&r, &r).re;
    for _ in 0..max_iter {
        if rs.sqrt() <= tol * b_norm {
            return Ok(x);
        }
        let ap = apply(&p);
        let p_ap = vec_dot(&p, &ap).re;
        if p_ap <= 0.0 || !p_ap.is_finite() {
            return Err(CgError::Stagnated);
        }
        let alpha = rs / p_ap;
        for k in 0..n {
            x[k] += alpha * p[k];
            r[k] -= alpha * ap[k];
        }
        let rs_new = vec_dot(&r, &r).re;
        let beta = rs_new / rs;
        for k in 0..n {
            p[k] = r[k] + beta * p[k];
        }
        rs = rs_new;
    }
    if rs.sqrt() <= tol * b_norm {
        Ok(x)
    } else {
        Err(CgError::Stagnated)
    }
}
