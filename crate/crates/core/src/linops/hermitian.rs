//! Hermitian eigen-decomposition by cyclic Jacobi rotations, and the matrix
//! functions built on it.

use num_complex::Complex64;

use super::matrix::ComplexMatrix;
use crate::error::{Error, Result};

/// Tolerance for accepting an input as Hermitian.
pub const HERMITIAN_TOL: f64 = 1e-10;
/// Smallest eigenvalue accepted as positive definite.
pub const PD_TOL: f64 = 1e-12;
const MAX_SWEEPS: usize = 100;

#[derive(Debug, Clone)]
pub struct HermEig {
    /// Eigenvalues in ascending order.
    pub values: Vec<f64>,
    /// Column `k` is the eigenvector for `values[k]`.
    pub vectors: ComplexMatrix,
}

impl HermEig {
    /// `V f(Λ) V†`.
    pub fn apply(&self, f: impl Fn(f64) -> f64) -> ComplexMatrix {
        let d = self.values.len();
        let fv: Vec<f64> = self.values.iter().map(|&x| f(x)).collect();
        let v = &self.vectors;
        ComplexMatrix::from_fn(d, d, |i, j| {
            (0..d).map(|k| v[(i, k)] * v[(j, k)].conj() * fv[k]).sum()
        })
    }

    pub fn reconstruct(&self) -> ComplexMatrix {
        self.apply(|x| x)
    }

    pub fn min(&self) -> f64 {
        self.values.first().copied().unwrap_or(0.0)
    }

    pub fn max(&self) -> f64 {
        self.values.last().copied().unwrap_or(0.0)
    }
}

/// Largest `|H_ij − conj(H_ji)|`.
pub fn hermitian_defect(h: &ComplexMatrix) -> Result<f64> {
    let d = h.dim()?;
    let mut worst = 0.0f64;
    for i in 0..d {
        for j in i..d {
            worst = worst.max((h[(i, j)] - h[(j, i)].conj()).norm());
        }
    }
    Ok(worst)
}

fn off_diagonal(a: &ComplexMatrix) -> f64 {
    let d = a.rows();
    let mut s = 0.0;
    for i in 0..d {
        for j in 0..d {
            if i != j {
                s += a[(i, j)].norm_sqr();
            }
        }
    }
    s.sqrt()
}

/// Eigen-decomposition of a Hermitian matrix.
pub fn herm_eig(h: &ComplexMatrix) -> Result<HermEig> {
    let defect = hermitian_defect(h)?;
    if defect > HERMITIAN_TOL {
        return Err(Error::NotHermitian(defect));
    }
    let d = h.rows();
    let mut a = h.clone();
    // Symmetrise away the tolerated defect.
    for i in 0..d {
        a[(i, i)] = Complex64::new(a[(i, i)].re, 0.0);
        for j in i + 1..d {
            let m = (a[(i, j)] + a[(j, i)].conj()) * 0.5;
            a[(i, j)] = m;
            a[(j, i)] = m.conj();
        }
    }
    let mut v = ComplexMatrix::identity(d);
    let stop = 1e-12 * (1.0 + h.frobenius());
    for _ in 0..MAX_SWEEPS {
        if off_diagonal(&a) < stop {
            break;
        }
        for p in 0..d {
            for q in p + 1..d {
                rotate(&mut a, &mut v, p, q);
            }
        }
    }
    let mut order: Vec<usize> = (0..d).collect();
    order.sort_by(|&x, &y| a[(x, x)].re.total_cmp(&a[(y, y)].re));
    let values = order.iter().map(|&k| a[(k, k)].re).collect();
    let vectors = ComplexMatrix::from_fn(d, d, |i, k| v[(i, order[k])]);
    Ok(HermEig { values, vectors })
}

/// One Jacobi rotation zeroing `a[(p, q)]`.
fn rotate(a: &mut ComplexMatrix, v: &mut ComplexMatrix, p: usize, q: usize) {
    let apq = a[(p, q)];
    let r = apq.norm();
    if r < 1e-300 {
        return;
    }
    let phase = apq / r; // e^{iα}
    let tau = (a[(q, q)].re - a[(p, p)].re) / (2.0 * r);
    let sign = if tau >= 0.0 { 1.0 } else { -1.0 };
    let t = sign / (tau.abs() + (1.0 + tau * tau).sqrt());
    let c = 1.0 / (1.0 + t * t).sqrt();
    let s = t * c;
    let e = phase.conj(); // e^{-iα}
    // G = [[c, s], [-s e, c e]] acting on (p, q).
    let (gpp, gpq, gqp, gqq) = (Complex64::new(c, 0.0), Complex64::new(s, 0.0), -e * s, e * c);
    let d = a.rows();
    for i in 0..d {
        let (x, y) = (a[(i, p)], a[(i, q)]);
        a[(i, p)] = x * gpp + y * gqp;
        a[(i, q)] = x * gpq + y * gqq;
        let (x, y) = (v[(i, p)], v[(i, q)]);
        v[(i, p)] = x * gpp + y * gqp;
        v[(i, q)] = x * gpq + y * gqq;
    }
    for j in 0..d {
        let (x, y) = (a[(p, j)], a[(q, j)]);
        a[(p, j)] = gpp.conj() * x + gqp.conj() * y;
        a[(q, j)] = gpq.conj() * x + gqq.conj() * y;
    }
    a[(p, q)] = Complex64::new(0.0, 0.0);
    a[(q, p)] = Complex64::new(0.0, 0.0);
    a[(p, p)] = Complex64::new(a[(p, p)].re, 0.0);
    a[(q, q)] = Complex64::new(a[(q, q)].re, 0.0);
}

/// Largest singular value.
pub fn spectral_norm(a: &ComplexMatrix) -> Result<f64> {
    if a.rows() == 0 || a.cols() == 0 {
        return Ok(0.0);
    }
    let gram = a.adjoint().mul(a)?;
    Ok(herm_eig(&gram)?.max().max(0.0).sqrt())
}

fn positive_definite(h: &ComplexMatrix) -> Result<HermEig> {
    let eig = herm_eig(h)?;
    if eig.min() <= PD_TOL {
        return Err(Error::Singular(eig.min()));
    }
    Ok(eig)
}

/// Principal square root of a positive-definite Hermitian matrix.
pub fn herm_sqrt(h: &ComplexMatrix) -> Result<ComplexMatrix> {
    Ok(positive_definite(h)?.apply(f64::sqrt))
}

pub fn herm_inv(h: &ComplexMatrix) -> Result<ComplexMatrix> {
    Ok(positive_definite(h)?.apply(|x| 1.0 / x))
}

pub fn herm_inv_sqrt(h: &ComplexMatrix) -> Result<ComplexMatrix> {
    Ok(positive_definite(h)?.apply(|x| 1.0 / x.sqrt()))
}
