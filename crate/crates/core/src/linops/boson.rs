//! Linear-optical amplitudes and the unitary dilation that embeds a scaled
//! matrix as the top-left block of a unitary.

use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::hermitian::{herm_inv, herm_inv_sqrt, herm_sqrt, spectral_norm};
use super::matrix::ComplexMatrix;
use super::permanent::permanent_ryser;
use crate::error::{Error, Result};

/// Minimum gap below 1 required for `c·‖A‖`.
pub const DILATION_MARGIN: f64 = 1e-6;

/// Occupation numbers of `m` modes.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct FockConfig(pub Vec<usize>);

impl FockConfig {
    pub fn modes(&self) -> usize {
        self.0.len()
    }

    pub fn photons(&self) -> usize {
        self.0.iter().sum()
    }

    /// `(1^n, 0^n)`.
    pub fn first_half(n: usize) -> Self {
        FockConfig((0..2 * n).map(|i| usize::from(i < n)).collect())
    }

    /// Mode index repeated once per photon.
    pub fn expand(&self) -> Vec<usize> {
        self.0
            .iter()
            .enumerate()
            .flat_map(|(i, &r)| std::iter::repeat(i).take(r))
            .collect()
    }

    pub fn factorial_product(&self) -> f64 {
        self.0
            .iter()
            .map(|&r| (1..=r).map(|k| k as f64).product::<f64>())
            .product()
    }
}

impl FromStr for FockConfig {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        let t = s.trim().trim_start_matches(['(', '[']).trim_end_matches([')', ']']);
        if t.trim().is_empty() {
            return Ok(FockConfig(Vec::new()));
        }
        t.split(',')
            .map(|p| {
                p.trim().parse::<usize>().map_err(|e| Error::Parse {
                    position: 0,
                    message: format!("bad occupation {p:?}: {e}"),
                })
            })
            .collect::<Result<Vec<_>>>()
            .map(FockConfig)
    }
}

impl fmt::Display for FockConfig {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(usize::to_string).collect();
        write!(f, "({})", parts.join(","))
    }
}

/// `U_{(R,R′)}`: row `i` repeated `r_i` times, column `j` repeated `r′_j` times.
pub fn fock_submatrix(u: &ComplexMatrix, r: &FockConfig, r2: &FockConfig) -> Result<ComplexMatrix> {
    let m = u.dim()?;
    for cfg in [r, r2] {
        if cfg.modes() != m {
            return Err(Error::Dimension(format!(
                "configuration {cfg} has {} modes, unitary has {m}",
                cfg.modes()
            )));
        }
    }
    if r.photons() != r2.photons() {
        return Err(Error::PhotonMismatch {
            input: r.photons(),
            output: r2.photons(),
        });
    }
    let (rows, cols) = (r.expand(), r2.expand());
    Ok(ComplexMatrix::from_fn(rows.len(), cols.len(), |i, j| u[(rows[i], cols[j])]))
}

/// `⟨R|φ(U)|R′⟩ = Per(U_{(R,R′)}) / √(∏ r_i! ∏ r′_j!)`.
pub fn fock_amplitude(u: &ComplexMatrix, r: &FockConfig, r2: &FockConfig) -> Result<Complex64> {
    let sub = fock_submatrix(u, r, r2)?;
    let per = permanent_ryser(&sub)?;
    Ok(per / (r.factorial_product() * r2.factorial_product()).sqrt())
}

/// Default scale `1 / (2·max(1, ‖A‖))`.
pub fn default_scale(a: &ComplexMatrix) -> Result<f64> {
    Ok(0.5 / spectral_norm(a)?.max(1.0))
}

/// Unitary `2d × 2d` dilation of `cA`:
/// `[[cA, D], [S, −S⁻¹·cA†·D]]` with `S = √(I − c²A†A)` and
/// `D = (I + c²A(I − c²A†A)⁻¹A†)^{−1/2}`.
pub fn dilate(a: &ComplexMatrix, c: f64) -> Result<ComplexMatrix> {
    let d = a.dim()?;
    if !(c > 0.0) {
        return Err(Error::InvalidArgument(format!("scale must be positive, got {c}")));
    }
    let norm = spectral_norm(a)?;
    if c * norm > 1.0 - DILATION_MARGIN {
        return Err(Error::ScaleTooLarge(c * norm));
    }
    let id = ComplexMatrix::identity(d);
    let ca = a.scale_re(c);
    let ca_dag = ca.adjoint();
    let inner = id.sub(&ca_dag.mul(&ca)?)?;
    let s = herm_sqrt(&inner)?;
    let s_inv = herm_inv(&s)?;
    let dd = herm_inv_sqrt(&id.add(&ca.mul(&herm_inv(&inner)?)?.mul(&ca_dag)?)?)?;
    let br = s_inv.mul(&ca_dag)?.mul(&dd)?.scale_re(-1.0);
    ComplexMatrix::from_blocks(&ca, &dd, &s, &br)
}

#[derive(Debug, Clone, Serialize)]
pub struct PermanentEncoding {
    pub unitary: ComplexMatrix,
    pub c: f64,
    /// `⟨1ⁿ0ⁿ|φ(U_A)|1ⁿ0ⁿ⟩`.
    pub amplitude: Complex64,
    /// `cⁿ·Per(A)` computed directly.
    pub scaled_permanent: Complex64,
}

impl PermanentEncoding {
    pub fn relative_error(&self) -> f64 {
        let diff = (self.amplitude - self.scaled_permanent).norm();
        diff / self.scaled_permanent.norm().max(f64::MIN_POSITIVE)
    }
}

/// Embed `A` in a unitary and read `cⁿ·Per(A)` off as a Fock amplitude.
pub fn encode_permanent(a: &ComplexMatrix) -> Result<PermanentEncoding> {
    let c = default_scale(a)?;
    encode_permanent_with(a, c)
}

pub fn encode_permanent_with(a: &ComplexMatrix, c: f64) -> Result<PermanentEncoding> {
    let n = a.dim()?;
    let unitary = dilate(a, c)?;
    let cfg = FockConfig::first_half(n);
    let amplitude = fock_amplitude(&unitary, &cfg, &cfg)?;
    let scaled_permanent = permanent_ryser(a)? * c.powi(n as i32);
    Ok(PermanentEncoding {
        unitary,
        c,
        amplitude,
        scaled_permanent,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linops::{permanent_naive, IntMatrix};
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn example_unitary() -> ComplexMatrix {
        let s = 0.5f64.sqrt();
        ComplexMatrix::from_rows(vec![vec![c(s, 0.0), c(0.0, s)], vec![c(0.0, -s), c(-s, 0.0)]]).unwrap()
    }

    #[test]
    fn two_mode_example() {
        let u = example_unitary();
        let r: FockConfig = "(2,1)".parse().unwrap();
        let r2: FockConfig = "1,2".parse().unwrap();
        let sub = fock_submatrix(&u, &r, &r2).unwrap();
        assert_eq!(sub[(1, 2)], u[(0, 1)]);
        assert_eq!(sub[(2, 0)], u[(1, 0)]);
        let amp = fock_amplitude(&u, &r, &r2).unwrap();
        let want = c(0.0, -1.0) / (2.0 * 2f64.sqrt());
        assert!((amp - want).norm() < 1e-12);
    }

    #[test]
    fn identity_and_single_photon() {
        let id = ComplexMatrix::identity(2);
        let r = FockConfig(vec![2, 1]);
        assert!((fock_amplitude(&id, &r, &r).unwrap() - c(1.0, 0.0)).norm() < 1e-14);
        let u = example_unitary();
        for i in 0..2 {
            for j in 0..2 {
                let mut a = vec![0; 2];
                let mut b = vec![0; 2];
                a[i] = 1;
                b[j] = 1;
                let amp = fock_amplitude(&u, &FockConfig(a), &FockConfig(b)).unwrap();
                assert!((amp - u[(i, j)]).norm() < 1e-15);
            }
        }
        let err = fock_amplitude(&u, &FockConfig(vec![1, 1]), &FockConfig(vec![1, 0]));
        assert!(matches!(err, Err(Error::PhotonMismatch { input: 2, output: 1 })));
    }

    #[test]
    fn dilation_examples() {
        let u = dilate(&ComplexMatrix::identity(2), 0.5).unwrap();
        assert!(u.unitarity_defect().unwrap() < 1e-9);
        assert!(u.block(0, 0, 2, 2).max_abs_diff(&ComplexMatrix::identity(2).scale_re(0.5)).unwrap() < 1e-10);

        let a = ComplexMatrix::from_real(&[vec![2.0]]).unwrap();
        let u = dilate(&a, 0.25).unwrap();
        assert!((u[(0, 0)] - c(0.5, 0.0)).norm() < 1e-12);
        assert!(u.unitarity_defect().unwrap() < 1e-9);

        assert!(matches!(dilate(&a, 0.5), Err(Error::ScaleTooLarge(_))));
    }

    #[test]
    fn encoding_examples() {
        let e = encode_permanent(&ComplexMatrix::identity(2)).unwrap();
        assert_eq!(e.c, 0.5);
        assert!((e.amplitude - c(0.25, 0.0)).norm() < 1e-10);
        let ones = ComplexMatrix::from_real(&[vec![1.0, 1.0], vec![1.0, 1.0]]).unwrap();
        let e = encode_permanent(&ones).unwrap();
        assert!((e.c - 0.25).abs() < 1e-12);
        assert!((e.amplitude - c(0.125, 0.0)).norm() < 1e-9);
    }

    #[test]
    fn random_dilations_are_sound() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for trial in 0..100 {
            let d = 1 + trial % 4;
            let rows = (0..d)
                .map(|_| (0..d).map(|_| c(rng.gen_range(-2.0..2.0), rng.gen_range(-2.0..2.0))).collect())
                .collect();
            let a = ComplexMatrix::from_rows(rows).unwrap();
            let e = encode_permanent(&a).unwrap();
            assert!(e.unitary.unitarity_defect().unwrap() < 1e-9, "trial {trial}");
            assert!(e.unitary.block(0, 0, d, d).max_abs_diff(&a.scale_re(e.c)).unwrap() < 1e-10);
            if e.scaled_permanent.norm() > 1e-8 {
                assert!(e.relative_error() < 1e-7, "trial {trial}: {}", e.relative_error());
            }
        }
    }

    #[test]
    fn integer_matrix_relation() {
        let mut rng = ChaCha8Rng::seed_from_u64(6);
        let m = IntMatrix::from_rows((0..4).map(|_| (0..4).map(|_| rng.gen_range(-3..=3)).collect()).collect())
            .unwrap()
            .to_complex();
        let e = encode_permanent(&m).unwrap();
        let per = permanent_naive(&m).unwrap();
        assert!((e.amplitude - per * e.c.powi(4)).norm() <= 1e-7 * (per * e.c.powi(4)).norm().max(1e-300));
    }
}
