//! Matrix permanents.
//!
//! Ryser's inclusion-exclusion formula visits subsets in Gray-code order so
//! that each step updates the row sums by one column. Large instances split
//! the Gray sequence into fixed chunks that are reduced in index order, so the
//! floating result does not depend on the thread count.

use std::collections::HashMap;

use num_bigint::BigInt;
use num_complex::Complex64;
use num_traits::{One, Zero};
use rayon::prelude::*;

use super::matrix::{ComplexMatrix, IntMatrix};
use crate::error::{check_cap, Error, Result};
use crate::limits::Limits;

/// log2 of the Gray-code chunk length used by the parallel Ryser loops.
const CHUNK_BITS: u32 = 14;

fn permutations_visit(d: usize, mut visit: impl FnMut(&[usize])) {
    // Heap's algorithm, iterative.
    let mut perm: Vec<usize> = (0..d).collect();
    let mut c = vec![0usize; d];
    visit(&perm);
    let mut i = 0;
    while i < d {
        if c[i] < i {
            if i % 2 == 0 {
                perm.swap(0, i);
            } else {
                perm.swap(c[i], i);
            }
            visit(&perm);
            c[i] += 1;
            i = 0;
        } else {
            c[i] = 0;
            i += 1;
        }
    }
}

/// Permanent by direct expansion over all `d!` permutations.
pub fn permanent_naive(a: &ComplexMatrix) -> Result<Complex64> {
    let d = a.dim()?;
    check_cap("naive permanent dimension", d, Limits::current().naive_dim)?;
    let mut total = Complex64::zero();
    permutations_visit(d, |p| {
        total += p.iter().enumerate().map(|(i, &j)| a[(i, j)]).product::<Complex64>();
    });
    Ok(total)
}

/// Exact permanent of an integer matrix by direct expansion.
pub fn permanent_naive_int(a: &IntMatrix) -> Result<BigInt> {
    let d = a.dim();
    check_cap("naive permanent dimension", d, Limits::current().naive_dim)?;
    let mut total = BigInt::zero();
    permutations_visit(d, |p| {
        let mut term = BigInt::one();
        for (i, &j) in p.iter().enumerate() {
            let v = a[(i, j)];
            if v == 0 {
                return;
            }
            term *= v;
        }
        total += term;
    });
    Ok(total)
}

/// Gray code of `k`.
fn gray(k: u64) -> u64 {
    k ^ (k >> 1)
}

/// Row sums over the columns in `mask`.
fn complex_row_sums(a: &ComplexMatrix, mask: u64) -> Vec<Complex64> {
    let d = a.rows();
    (0..d)
        .map(|i| {
            (0..d)
                .filter(|&j| mask >> j & 1 == 1)
                .map(|j| a[(i, j)])
                .sum()
        })
        .collect()
}

/// Signed Ryser terms for Gray indices `lo..hi` (with `lo ≥ 1`).
fn ryser_complex_range(a: &ComplexMatrix, lo: u64, hi: u64) -> Complex64 {
    let d = a.rows();
    let mut sums = complex_row_sums(a, gray(lo - 1));
    let mut acc = Complex64::zero();
    for k in lo..hi {
        let j = k.trailing_zeros() as usize;
        let g = gray(k);
        if g >> j & 1 == 1 {
            for (i, s) in sums.iter_mut().enumerate() {
                *s += a[(i, j)];
            }
        } else {
            for (i, s) in sums.iter_mut().enumerate() {
                *s -= a[(i, j)];
            }
        }
        let prod: Complex64 = sums.iter().product();
        if (d as u32 - g.count_ones()) % 2 == 0 {
            acc += prod;
        } else {
            acc -= prod;
        }
    }
    acc
}

/// Permanent by Ryser's formula with Gray-code updates.
pub fn permanent_ryser(a: &ComplexMatrix) -> Result<Complex64> {
    let d = a.dim()?;
    check_cap("Ryser permanent dimension", d, Limits::current().ryser_dim)?;
    if d == 0 {
        return Ok(Complex64::one());
    }
    let total = 1u64 << d;
    let chunk = 1u64 << CHUNK_BITS;
    if total <= chunk {
        return Ok(ryser_complex_range(a, 1, total));
    }
    let parts: Vec<Complex64> = (0..total / chunk)
        .into_par_iter()
        .map(|c| ryser_complex_range(a, (c * chunk).max(1), (c + 1) * chunk))
        .collect();
    Ok(parts.into_iter().sum())
}

/// Checked `i128` Ryser over Gray indices `lo..hi`; `None` on overflow.
fn ryser_i128_range(a: &IntMatrix, lo: u64, hi: u64) -> Option<i128> {
    let d = a.dim();
    let start = gray(lo - 1);
    let mut sums: Vec<i128> = (0..d)
        .map(|i| {
            (0..d)
                .filter(|&j| start >> j & 1 == 1)
                .map(|j| a[(i, j)] as i128)
                .sum()
        })
        .collect();
    let mut acc: i128 = 0;
    for k in lo..hi {
        let j = k.trailing_zeros() as usize;
        let g = gray(k);
        let add = g >> j & 1 == 1;
        for (i, s) in sums.iter_mut().enumerate() {
            let v = a[(i, j)] as i128;
            *s = if add { s.checked_add(v)? } else { s.checked_sub(v)? };
        }
        let mut prod: i128 = 1;
        for &s in &sums {
            if s == 0 {
                prod = 0;
                break;
            }
            prod = prod.checked_mul(s)?;
        }
        acc = if (d as u32 - g.count_ones()) % 2 == 0 {
            acc.checked_add(prod)?
        } else {
            acc.checked_sub(prod)?
        };
    }
    Some(acc)
}

fn ryser_big_range(a: &IntMatrix, lo: u64, hi: u64) -> BigInt {
    let d = a.dim();
    let start = gray(lo - 1);
    let mut sums: Vec<BigInt> = (0..d)
        .map(|i| {
            (0..d)
                .filter(|&j| start >> j & 1 == 1)
                .map(|j| BigInt::from(a[(i, j)]))
                .sum()
        })
        .collect();
    let mut acc = BigInt::zero();
    for k in lo..hi {
        let j = k.trailing_zeros() as usize;
        let g = gray(k);
        let add = g >> j & 1 == 1;
        for (i, s) in sums.iter_mut().enumerate() {
            if add {
                *s += a[(i, j)];
            } else {
                *s -= a[(i, j)];
            }
        }
        if sums.iter().any(Zero::is_zero) {
            continue;
        }
        let prod: BigInt = sums.iter().product();
        if (d as u32 - g.count_ones()) % 2 == 0 {
            acc += prod;
        } else {
            acc -= prod;
        }
    }
    acc
}

/// Exact integer permanent by Ryser's formula.
///
/// Runs in checked `i128` and switches to big integers for any chunk that
/// overflows.
pub fn permanent_ryser_int(a: &IntMatrix) -> Result<BigInt> {
    let d = a.dim();
    check_cap("Ryser permanent dimension", d, Limits::current().ryser_dim)?;
    if d == 0 {
        return Ok(BigInt::one());
    }
    let total = 1u64 << d;
    let chunk = (1u64 << CHUNK_BITS).min(total);
    let eval = |c: u64| -> BigInt {
        let (lo, hi) = ((c * chunk).max(1), (c + 1) * chunk);
        match ryser_i128_range(a, lo, hi) {
            Some(v) => BigInt::from(v),
            None => ryser_big_range(a, lo, hi),
        }
    };
    let parts: Vec<BigInt> = if total / chunk > 1 {
        (0..total / chunk).into_par_iter().map(eval).collect()
    } else {
        vec![eval(0)]
    };
    // Partial sums may overflow even when each chunk fits, so add as BigInt.
    Ok(parts.into_iter().sum())
}

/// Exact permanent by dynamic programming over rows, tracking the set of
/// columns already used. Cost scales with the number of reachable column sets,
/// which stays small for sparse, banded matrices such as gadget graphs.
pub fn permanent_sparse_int(a: &IntMatrix, max_states: usize) -> Result<BigInt> {
    let d = a.dim();
    if d > 128 {
        return Err(Error::CapExceeded {
            what: "sparse permanent dimension",
            requested: d,
            cap: 128,
        });
    }
    let mut states: HashMap<u128, BigInt> = HashMap::new();
    states.insert(0, BigInt::one());
    for i in 0..d {
        let entries: Vec<(usize, i64)> = (0..d)
            .filter(|&j| a[(i, j)] != 0)
            .map(|j| (j, a[(i, j)]))
            .collect();
        let mut next: HashMap<u128, BigInt> = HashMap::with_capacity(states.len() * 2);
        for (mask, val) in &states {
            for &(j, w) in &entries {
                let bit = 1u128 << j;
                if mask & bit == 0 {
                    *next.entry(mask | bit).or_insert_with(BigInt::zero) += val * w;
                }
            }
        }
        next.retain(|_, v| !v.is_zero());
        if next.len() > max_states {
            return Err(Error::CapExceeded {
                what: "sparse permanent states",
                requested: next.len(),
                cap: max_states,
            });
        }
        states = next;
        if states.is_empty() {
            return Ok(BigInt::zero());
        }
    }
    Ok(states.into_values().sum())
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn random_int(rng: &mut ChaCha8Rng, d: usize, lo: i64, hi: i64) -> IntMatrix {
        IntMatrix::from_rows((0..d).map(|_| (0..d).map(|_| rng.gen_range(lo..=hi)).collect()).collect())
            .unwrap()
    }

    #[test]
    fn small_examples() {
        let id = ComplexMatrix::identity(2);
        assert_eq!(permanent_naive(&id).unwrap(), c(1.0, 0.0));
        let ones = ComplexMatrix::from_fn(3, 3, |_, _| c(1.0, 0.0));
        assert_eq!(permanent_naive(&ones).unwrap(), c(6.0, 0.0));
        assert_eq!(permanent_ryser(&ones).unwrap(), c(6.0, 0.0));
        let m = IntMatrix::from_rows(vec![vec![1, 2], vec![3, 4]]).unwrap();
        assert_eq!(permanent_naive_int(&m).unwrap(), BigInt::from(10));
        assert_eq!(permanent_ryser_int(&m).unwrap(), BigInt::from(10));
    }

    #[test]
    fn identity_permanents() {
        for d in 1..=8 {
            let p = permanent_ryser(&ComplexMatrix::identity(d)).unwrap();
            assert!((p - c(1.0, 0.0)).norm() < 1e-14, "d = {d}");
            assert_eq!(permanent_ryser_int(&IntMatrix::identity(d)).unwrap(), BigInt::one());
        }
    }

    #[test]
    fn repeated_rows_matrix() {
        let s = 0.5f64.sqrt();
        let m = ComplexMatrix::from_rows(vec![
            vec![c(s, 0.0), c(0.0, s), c(0.0, s)],
            vec![c(s, 0.0), c(0.0, s), c(0.0, s)],
            vec![c(0.0, -s), c(-s, 0.0), c(-s, 0.0)],
        ])
        .unwrap();
        // Hand expansion along the last row: (-i)(-2) - 2i - 2i = -2i, scaled by 2^{-3/2}.
        let want = c(0.0, -1.0) * s;
        assert!((permanent_ryser(&m).unwrap() - want).norm() < 1e-12);
        assert!((permanent_naive(&m).unwrap() - want).norm() < 1e-12);
    }

    #[test]
    fn ryser_matches_naive_on_random_integers() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for trial in 0..60 {
            let d = 1 + trial % 8;
            let m = random_int(&mut rng, d, -5, 5);
            assert_eq!(permanent_ryser_int(&m).unwrap(), permanent_naive_int(&m).unwrap());
        }
    }

    #[test]
    fn complex_ryser_matches_naive() {
        let mut rng = ChaCha8Rng::seed_from_u64(8);
        for d in 1..=7 {
            let rows = (0..d)
                .map(|_| (0..d).map(|_| c(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))).collect())
                .collect();
            let m = ComplexMatrix::from_rows(rows).unwrap();
            let (r, n) = (permanent_ryser(&m).unwrap(), permanent_naive(&m).unwrap());
            assert!((r - n).norm() <= 1e-8 * n.norm().max(1.0));
        }
    }

    #[test]
    fn overflow_escalates_to_bigint() {
        // 20×20 all-ones-times-big: Per = 20!·(10^12)^20, far beyond i128.
        let big = 1_000_000_000_000i64;
        let m = IntMatrix::from_rows(vec![vec![big; 20]; 20]).unwrap();
        let fact: BigInt = (1..=20u32).map(BigInt::from).product();
        let want = fact * BigInt::from(big).pow(20);
        assert_eq!(permanent_ryser_int(&m).unwrap(), want);
    }

    #[test]
    fn parallel_path_is_exact() {
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        let m = random_int(&mut rng, 16, -1, 1);
        assert_eq!(permanent_ryser_int(&m).unwrap(), permanent_sparse_int(&m, 1 << 20).unwrap());
    }

    #[test]
    fn sparse_dp_matches_ryser() {
        let mut rng = ChaCha8Rng::seed_from_u64(10);
        for d in 1..=9 {
            let m = random_int(&mut rng, d, -2, 2);
            assert_eq!(permanent_sparse_int(&m, 1 << 16).unwrap(), permanent_ryser_int(&m).unwrap());
        }
        let m = random_int(&mut rng, 12, -2, 2);
        assert!(matches!(permanent_sparse_int(&m, 10), Err(Error::CapExceeded { .. })));
    }

    #[test]
    fn caps_are_enforced() {
        assert!(permanent_naive(&ComplexMatrix::identity(11)).is_err());
        assert!(permanent_ryser(&ComplexMatrix::identity(31)).is_err());
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]
        #[test]
        fn row_and_column_permutations_preserve_permanent(
            rows in proptest::collection::vec(proptest::collection::vec(-4i64..=4, 6), 6),
            pr in Just((0..6usize).collect::<Vec<_>>()).prop_shuffle(),
            pc in Just((0..6usize).collect::<Vec<_>>()).prop_shuffle(),
        ) {
            let m = IntMatrix::from_rows(rows).unwrap();
            let q = m.permuted(&pr, &pc);
            prop_assert_eq!(permanent_ryser_int(&m).unwrap(), permanent_ryser_int(&q).unwrap());
        }
    }
}
