//! Counting satisfying assignments of a degree-3 polynomial faster than a
//! plain scan by working with integer polynomials modulo `2^l`.
//!
//! Split the variables into `m = n − t` fixed ones `y` (indices `0..m`) and
//! `t` free ones `a` (indices `m..n`). For each free assignment `a` the
//! polynomial `f(·, a)` is lifted to an integer polynomial `P_a` with the
//! right parity and pushed through the modulus amplifier
//!
//! ```text
//! Q̂(P) = 1 − (1 − P)^l · Σ_{j<l} C(l+j−1, j) P^j
//! ```
//!
//! which is `≡ P mod 2` on 0/1 inputs and lands exactly in `{0, 1} mod 2^l`.
//! Summing over `a` gives `R_l(y) = #{a : f(y, a) = 1} mod 2^l`, and a
//! subset-sum transform evaluates `R_l` at every `y` at once.
//!
//! Counts lie in `0..=2^t`, so `l` must satisfy `2^l > 2^t`; the default is
//! `l = t + 1`.

use std::collections::HashMap;

use num_bigint::BigUint;
use num_integer::binomial;
use num_traits::{One, ToPrimitive, Zero};
use serde::Serialize;

use crate::error::{check_cap, Error, Result};
use crate::limits::Limits;
use crate::poly3::Poly3;

/// Largest supported modulus exponent.
pub const MAX_L: u32 = 62;

/// Integer multilinear polynomial on `m` variables with coefficients mod
/// `2^l`, stored densely by variable-subset mask.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MultilinearPoly {
    m: usize,
    l: u32,
    coeffs: Vec<u64>,
}

impl MultilinearPoly {
    pub fn zero(m: usize, l: u32) -> Result<Self> {
        if l == 0 || l > MAX_L {
            return Err(Error::InvalidArgument(format!(
                "modulus exponent l = {l} must lie in 1..={MAX_L}"
            )));
        }
        check_cap("multilinear variables", m, Limits::current().eval_vars)?;
        Ok(MultilinearPoly {
            m,
            l,
            coeffs: vec![0; 1 << m],
        })
    }

    pub fn constant(m: usize, l: u32, c: u64) -> Result<Self> {
        let mut p = Self::zero(m, l)?;
        p.coeffs[0] = c & p.modmask();
        Ok(p)
    }

    /// Build from `(mask, coefficient)` pairs; repeated masks add up.
    pub fn from_sparse<I>(m: usize, l: u32, terms: I) -> Result<Self>
    where
        I: IntoIterator<Item = (u64, u64)>,
    {
        let mut p = Self::zero(m, l)?;
        let mm = p.modmask();
        for (mask, c) in terms {
            if m < 64 && mask >> m != 0 {
                return Err(Error::InvalidArgument(format!(
                    "monomial mask {mask:#x} exceeds {m} variables"
                )));
            }
            let slot = &mut p.coeffs[mask as usize];
            *slot = slot.wrapping_add(c) & mm;
        }
        Ok(p)
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn l(&self) -> u32 {
        self.l
    }

    fn modmask(&self) -> u64 {
        (1u64 << self.l) - 1
    }

    pub fn coeff(&self, mask: u64) -> u64 {
        self.coeffs[mask as usize]
    }

    /// Nonzero coefficients in increasing mask order.
    pub fn terms(&self) -> impl Iterator<Item = (u64, u64)> + '_ {
        self.coeffs
            .iter()
            .enumerate()
            .filter(|(_, &c)| c != 0)
            .map(|(s, &c)| (s as u64, c))
    }

    pub fn monomial_count(&self) -> usize {
        self.coeffs.iter().filter(|&&c| c != 0).count()
    }

    /// Largest monomial size with a nonzero coefficient (0 for constants and
    /// the zero polynomial).
    pub fn degree(&self) -> u32 {
        self.terms().map(|(s, _)| s.count_ones()).max().unwrap_or(0)
    }

    fn check_compatible(&self, other: &Self) -> Result<()> {
        if self.m != other.m || self.l != other.l {
            return Err(Error::Dimension(format!(
                "polynomials over (m={}, l={}) and (m={}, l={})",
                self.m, self.l, other.m, other.l
            )));
        }
        Ok(())
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.check_compatible(other)?;
        let mm = self.modmask();
        let coeffs = self
            .coeffs
            .iter()
            .zip(&other.coeffs)
            .map(|(a, b)| a.wrapping_add(*b) & mm)
            .collect();
        Ok(MultilinearPoly {
            m: self.m,
            l: self.l,
            coeffs,
        })
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.check_compatible(other)?;
        let mm = self.modmask();
        let coeffs = self
            .coeffs
            .iter()
            .zip(&other.coeffs)
            .map(|(a, b)| a.wrapping_sub(*b) & mm)
            .collect();
        Ok(MultilinearPoly {
            m: self.m,
            l: self.l,
            coeffs,
        })
    }

    pub fn scale(&self, k: u64) -> Self {
        let mm = self.modmask();
        MultilinearPoly {
            m: self.m,
            l: self.l,
            coeffs: self.coeffs.iter().map(|c| c.wrapping_mul(k) & mm).collect(),
        }
    }

    /// Product with `x_i² = x_i` reduction, via evaluation on the cube:
    /// transform both operands, multiply pointwise, transform back.
    pub fn mul(&self, other: &Self) -> Result<Self> {
        self.check_compatible(other)?;
        let mm = self.modmask();
        let mut a = self.coeffs.clone();
        let mut b = other.coeffs.clone();
        zeta_mod(&mut a, self.m, mm);
        zeta_mod(&mut b, self.m, mm);
        for (x, y) in a.iter_mut().zip(&b) {
            *x = x.wrapping_mul(*y) & mm;
        }
        mobius_mod(&mut a, self.m, mm);
        Ok(MultilinearPoly {
            m: self.m,
            l: self.l,
            coeffs: a,
        })
    }

    /// Schoolbook product over nonzero monomials (`S · T = S ∪ T`).
    pub fn mul_sparse(&self, other: &Self) -> Result<Self> {
        self.check_compatible(other)?;
        let mm = self.modmask();
        let mut acc: HashMap<u64, u64> = HashMap::new();
        for (s, c) in self.terms() {
            for (t, d) in other.terms() {
                let e = acc.entry(s | t).or_insert(0);
                *e = e.wrapping_add(c.wrapping_mul(d)) & mm;
            }
        }
        Self::from_sparse(self.m, self.l, acc)
    }

    /// Value at the 0/1 point `y`: `Σ_{S ⊆ y} coeff(S) mod 2^l`.
    pub fn evaluate(&self, y: u64) -> u64 {
        self.terms()
            .filter(|(s, _)| s & !y == 0)
            .fold(0u64, |acc, (_, c)| acc.wrapping_add(c))
            & self.modmask()
    }

    /// Values at all `2^m` points, indexed by `y`.
    pub fn eval_all(&self) -> Result<Vec<u64>> {
        check_cap("multilinear variables", self.m, Limits::current().eval_vars)?;
        let mut v = self.coeffs.clone();
        zeta_mod(&mut v, self.m, self.modmask());
        Ok(v)
    }
}

/// In-place subset sum `v[x] ← Σ_{S ⊆ x} v[S] mod 2^l`.
pub fn zeta_mod(v: &mut [u64], m: usize, modmask: u64) {
    for i in 0..m {
        let bit = 1usize << i;
        for x in 0..v.len() {
            if x & bit != 0 {
                v[x] = v[x].wrapping_add(v[x ^ bit]) & modmask;
            }
        }
    }
}

/// Inverse of [`zeta_mod`].
pub fn mobius_mod(v: &mut [u64], m: usize, modmask: u64) {
    for i in 0..m {
        let bit = 1usize << i;
        for x in 0..v.len() {
            if x & bit != 0 {
                v[x] = v[x].wrapping_sub(v[x ^ bit]) & modmask;
            }
        }
    }
}

fn check_split(f: &Poly3, t: usize, l: u32) -> Result<usize> {
    if t == 0 || t > f.n() {
        return Err(Error::InvalidArgument(format!(
            "free-variable count t = {t} must lie in 1..={}",
            f.n()
        )));
    }
    if l == 0 || l > MAX_L {
        return Err(Error::InvalidArgument(format!(
            "modulus exponent l = {l} must lie in 1..={MAX_L}"
        )));
    }
    Ok(f.n() - t)
}

/// Integer lift of `f(·, a)` over the fixed variables: one `+1` per
/// surviving monomial, so its value has the parity of `f`.
fn restricted_lift(f: &Poly3, m: usize, a: u64, l: u32) -> Result<MultilinearPoly> {
    let fixed_mask = (1u64 << m) - 1;
    let terms = f.term_masks().into_iter().filter_map(|mask| {
        let free = mask >> m;
        (free & !a == 0).then_some((mask & fixed_mask, 1u64))
    });
    MultilinearPoly::from_sparse(m, l, terms)
}

/// `C(l+j−1, j) mod 2^l` for `j < l`.
fn amplifier_coefficients(l: u32) -> Vec<u64> {
    let modulus = BigUint::one() << l;
    (0..l)
        .map(|j| {
            let c: BigUint = binomial(BigUint::from(l + j - 1), BigUint::from(j));
            (c % &modulus).to_u64().expect("residue below 2^62")
        })
        .collect()
}

/// `Q̂` for the free assignment `a` (bit `k` of `a` is variable `m + k`).
/// Its values mod `2^l` are exactly `f(y, a)` at every 0/1 point `y`.
pub fn qhat(f: &Poly3, t: usize, a: u64, l: u32) -> Result<MultilinearPoly> {
    let m = check_split(f, t, l)?;
    if t < 64 && a >> t != 0 {
        return Err(Error::InvalidArgument(format!(
            "free assignment {a:#x} exceeds {t} bits"
        )));
    }
    let p = restricted_lift(f, m, a, l)?;
    let one = MultilinearPoly::constant(m, l, 1)?;
    let coeffs = amplifier_coefficients(l);

    // Horner for Σ_j C(l+j−1, j) P^j.
    let mut s = MultilinearPoly::constant(m, l, coeffs[l as usize - 1])?;
    for &c in coeffs.iter().rev().skip(1) {
        s = s.mul(&p)?.add(&MultilinearPoly::constant(m, l, c)?)?;
    }
    let one_minus_p = one.sub(&p)?;
    let mut pow = one.clone();
    for _ in 0..l {
        pow = pow.mul(&one_minus_p)?;
    }
    one.sub(&pow.mul(&s)?)
}

/// `R_l(y) = Σ_a Q̂_a(y)`, which counts the free completions of `y` with
/// `f = 1` modulo `2^l`.
pub fn r_poly(f: &Poly3, t: usize, l: u32) -> Result<MultilinearPoly> {
    let m = check_split(f, t, l)?;
    if l as usize <= t {
        return Err(Error::InvalidArgument(format!(
            "l = {l} aliases counts up to 2^{t}; need l > t"
        )));
    }
    let mut r = MultilinearPoly::zero(m, l)?;
    for a in 0..1u64 << t {
        r = r.add(&qhat(f, t, a, l)?)?;
    }
    Ok(r)
}

/// The degree bound that `R_l` must respect: `6l − 3`.
pub fn degree_bound(l: u32) -> u32 {
    6 * l - 3
}

/// Outcome of a modular count, with the sizes of the intermediate object.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct LptwyCount {
    pub ones: u64,
    pub l: u32,
    pub fixed_vars: usize,
    pub monomials: usize,
    pub degree: u32,
}

/// Exact number of `x` with `f(x) = 1`, using `t` free variables and
/// `l = t + 1`.
pub fn count_ones_lptwy(f: &Poly3, t: usize) -> Result<u64> {
    Ok(count_ones_lptwy_report(f, t)?.ones)
}

pub fn count_ones_lptwy_report(f: &Poly3, t: usize) -> Result<LptwyCount> {
    let l = u32::try_from(t + 1).unwrap_or(u32::MAX);
    let r = r_poly(f, t, l)?;
    let ones = r.eval_all()?.iter().sum();
    Ok(LptwyCount {
        ones,
        l,
        fixed_vars: r.m(),
        monomials: r.monomial_count(),
        degree: r.degree(),
    })
}

/// Comparison of the monomial count `M(a, b) = C(a+b, b)` at
/// `a = (1−δ)n`, `b = 6δn − 3` against `2^{0.15(1−δ)n}`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MonomialBound {
    pub a: u64,
    pub b: u64,
    pub m_value: BigUint,
    pub log2_m: f64,
    pub log2_threshold: f64,
    pub holds: bool,
}

pub fn monomial_bound_check(n: u64, delta: f64) -> Result<MonomialBound> {
    if !(delta > 0.0 && delta < 1.0) {
        return Err(Error::InvalidArgument(format!(
            "delta = {delta} must lie in (0, 1)"
        )));
    }
    let nf = n as f64;
    let a = ((1.0 - delta) * nf).round().max(0.0) as u64;
    let b_real = (6.0 * delta * nf - 3.0).round();
    let b = if b_real < 0.0 { 0 } else { b_real as u64 };
    let m_value: BigUint = if b == 0 {
        BigUint::one()
    } else {
        big_binomial(a + b, b.min(a))
    };
    let log2_m = log2_big(&m_value);
    let log2_threshold = 0.15 * (1.0 - delta) * nf;
    // Exact where possible: M < 2^k for integer k below the threshold.
    let k = log2_threshold.floor() as u64;
    let holds = if m_value.bits() <= k {
        true
    } else {
        log2_m < log2_threshold
    };
    Ok(MonomialBound {
        a,
        b,
        m_value,
        log2_m,
        log2_threshold,
        holds,
    })
}

/// `C(n, k)` as `(n−k+1)⋯n / k!`, both products by binary splitting so the
/// multiplications stay balanced.
fn big_binomial(n: u64, k: u64) -> BigUint {
    range_product(n - k + 1, n) / range_product(1, k)
}

fn range_product(lo: u64, hi: u64) -> BigUint {
    if lo > hi {
        return BigUint::one();
    }
    if hi - lo < 16 {
        return (lo..=hi).fold(BigUint::one(), |acc, i| acc * i);
    }
    let mid = lo + (hi - lo) / 2;
    range_product(lo, mid) * range_product(mid + 1, hi)
}

fn log2_big(x: &BigUint) -> f64 {
    if x.is_zero() {
        return f64::NEG_INFINITY;
    }
    let bits = x.bits();
    if bits <= 53 {
        return x.to_f64().expect("small").log2();
    }
    let shift = bits - 53;
    let top = (x >> shift).to_f64().expect("53 bits");
    top.log2() + shift as f64
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn random_ml(m: usize, l: u32, rng: &mut ChaCha8Rng) -> MultilinearPoly {
        let terms: Vec<(u64, u64)> = (0..6)
            .map(|_| (rng.gen_range(0..1u64 << m), rng.gen::<u64>()))
            .collect();
        MultilinearPoly::from_sparse(m, l, terms).unwrap()
    }

    #[test]
    fn zero_polynomial_gives_zero_qhat() {
        let f = Poly3::zero(3).unwrap();
        for a in 0..2 {
            let q = qhat(&f, 1, a, 3).unwrap();
            assert!(q.eval_all().unwrap().iter().all(|&v| v == 0));
        }
    }

    #[test]
    fn qhat_cube_example() {
        let f = Poly3::parse("x1*x2*x3", 3).unwrap();
        let q = qhat(&f, 1, 1, 2).unwrap();
        let vals = q.eval_all().unwrap();
        assert_eq!(vals, vec![0, 0, 0, 1]);
    }

    #[test]
    fn qhat_congruence_exhaustive() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for n in 2..=8 {
            let f = Poly3::random(n, &mut rng).unwrap();
            for l in 1..=4 {
                for t in 1..=2.min(n - 1) {
                    for a in 0..1u64 << t {
                        let q = qhat(&f, t, a, l).unwrap();
                        let vals = q.eval_all().unwrap();
                        let m = n - t;
                        for (y, &v) in vals.iter().enumerate() {
                            let x = y as u64 | (a << m);
                            assert_eq!(v, u64::from(f.eval_mask(x)), "n={n} l={l} t={t}");
                        }
                        assert!(q.degree() <= degree_bound(l));
                    }
                }
            }
        }
    }

    #[test]
    fn r_poly_examples() {
        let f = Poly3::parse("x1*x2*x3", 3).unwrap();
        let r = r_poly(&f, 1, 2).unwrap();
        assert_eq!(r.eval_all().unwrap(), vec![0, 0, 0, 1]);
        assert!(r_poly(&Poly3::zero(4).unwrap(), 2, 3)
            .unwrap()
            .terms()
            .next()
            .is_none());
        // Ones per prefix y of x1 + x2 + x1*x2 + x1*x2*x3, from the truth table.
        let g = Poly3::parse("x1 + x2 + x1*x2 + x1*x2*x3", 3).unwrap();
        let r = r_poly(&g, 1, 2).unwrap();
        let mut expect = vec![0u64; 4];
        for x in 0..8u64 {
            if g.eval_mask(x) {
                expect[(x & 3) as usize] += 1;
            }
        }
        assert_eq!(r.eval_all().unwrap(), expect);
    }

    #[test]
    fn r_poly_rejects_aliasing_modulus() {
        let f = Poly3::parse("x1", 2).unwrap();
        assert!(r_poly(&f, 2, 2).is_err());
        assert!(qhat(&f, 1, 0, 63).is_err());
        assert!(qhat(&f, 1, 0, 0).is_err());
    }

    #[test]
    fn count_examples() {
        assert_eq!(count_ones_lptwy(&Poly3::zero(6).unwrap(), 2).unwrap(), 0);
        let g = Poly3::parse("x1 + x2 + x1*x2 + x1*x2*x3", 3).unwrap();
        assert_eq!(count_ones_lptwy(&g, 1).unwrap(), 5);
        // Every free completion satisfied: the count equals 2^t exactly.
        let h = Poly3::parse("x1", 4).unwrap();
        assert_eq!(count_ones_lptwy(&h, 3).unwrap(), 8);
    }

    #[test]
    fn count_matches_bruteforce() {
        let mut rng = ChaCha8Rng::seed_from_u64(21);
        for n in 4..=10 {
            for t in 1..=4 {
                let f = Poly3::random(n, &mut rng).unwrap();
                let brute = (1u64 << n) - f.zeros_count().unwrap();
                assert_eq!(count_ones_lptwy(&f, t).unwrap(), brute);
            }
        }
    }

    #[test]
    fn eval_all_examples() {
        let c = MultilinearPoly::constant(3, 4, 7).unwrap();
        assert!(c.eval_all().unwrap().iter().all(|&v| v == 7));
        let s = MultilinearPoly::from_sparse(3, 4, [(0b101, 1)]).unwrap();
        let vals = s.eval_all().unwrap();
        for (y, v) in vals.iter().enumerate() {
            assert_eq!(*v, u64::from(y & 0b101 == 0b101));
        }
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        let p = random_ml(10, 7, &mut rng);
        let vals = p.eval_all().unwrap();
        for y in 0..1024u64 {
            assert_eq!(vals[y as usize], p.evaluate(y));
        }
    }

    #[test]
    fn dense_and_sparse_products_agree_pointwise() {
        let mut rng = ChaCha8Rng::seed_from_u64(13);
        for m in 1..=8 {
            let l = rng.gen_range(1..=10);
            let p = random_ml(m, l, &mut rng);
            let q = random_ml(m, l, &mut rng);
            let dense = p.mul(&q).unwrap();
            let sparse = p.mul_sparse(&q).unwrap();
            assert_eq!(dense, sparse);
            let mm = (1u64 << l) - 1;
            for y in 0..1u64 << m {
                assert_eq!(
                    dense.evaluate(y),
                    p.evaluate(y).wrapping_mul(q.evaluate(y)) & mm
                );
            }
        }
    }

    #[test]
    fn mismatched_shapes_are_rejected() {
        let p = MultilinearPoly::zero(2, 3).unwrap();
        let q = MultilinearPoly::zero(3, 3).unwrap();
        assert!(matches!(p.add(&q), Err(Error::Dimension(_))));
    }

    #[test]
    fn monomial_bound_examples() {
        let big = monomial_bound_check(1_000_000, 0.0035).unwrap();
        assert!(big.holds, "{} vs {}", big.log2_m, big.log2_threshold);
        let half = monomial_bound_check(10_000, 0.5).unwrap();
        assert!(!half.holds);
        let tiny = monomial_bound_check(100, 0.001).unwrap();
        assert_eq!(tiny.m_value, BigUint::one());
        assert!(tiny.holds);
        assert!(monomial_bound_check(10, 1.0).is_err());
    }

    #[test]
    fn split_binomial_matches_library() {
        for (n, k) in [(10u64, 3u64), (50, 25), (200, 7), (31, 0)] {
            assert_eq!(
                big_binomial(n, k),
                binomial(BigUint::from(n), BigUint::from(k))
            );
        }
    }
}
