//! Statistics of `gap(f)` for uniformly random degree-3 polynomials: exact
//! and sampled moments, the matrix and subspace counts behind them, the
//! Chebyshev mass polynomial, and promise-class frequencies.
//!
//! The normalised moment is `2^{nk}·E[(gap/2^n)^{2k}] = E[gap^{2k}] / 2^{nk}`,
//! which approaches the Gaussian value `(2k−1)!!`.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{check_cap, Error, Result};
use crate::poly3::{term_capacity, Poly3};

/// Samples drawn per independently seeded shard.
const SHARD: usize = 256;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum SgapLabel {
    Yes,
    No,
    NonPromise,
}

/// Label a gap exactly: YES iff `2·gap² ≥ 2^n`, NO iff `4·gap² ≤ 2^n`.
pub fn sgap_label_from_gap(gap: i64, n: usize) -> SgapLabel {
    let g2 = (gap as i128) * (gap as i128);
    let p = 1i128 << n;
    if 2 * g2 >= p {
        SgapLabel::Yes
    } else if 4 * g2 <= p {
        SgapLabel::No
    } else {
        SgapLabel::NonPromise
    }
}

pub fn sgap_classify(f: &Poly3) -> Result<SgapLabel> {
    Ok(sgap_label_from_gap(f.gap_bruteforce()?.0, f.n()))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Estimator {
    Exact,
    Sampled,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MomentReport {
    pub n: usize,
    pub k: u32,
    pub estimator: Estimator,
    pub value: f64,
    /// Exact rational as `num/den`, for exhaustive reports.
    pub exact: Option<String>,
    pub samples: u64,
    pub std_error: f64,
}

/// `(2k−1)!!`, the Gaussian value of the normalised moment.
pub fn double_factorial_odd(k: u32) -> u64 {
    (1..=k as u64).map(|j| 2 * j - 1).product()
}

/// Every gap over all `2^{g₁(n)}` polynomials on `n` variables.
pub fn all_gaps(n: usize) -> Result<Vec<i64>> {
    check_cap("exhaustive polynomial variables", n, 4)?;
    let g = term_capacity(n);
    (0..1u128 << g)
        .into_par_iter()
        .map(|i| Ok(Poly3::from_index(n, i)?.gap_bruteforce()?.0))
        .collect()
}

/// `E[gap^{2k}]` over all polynomials, exactly.
pub fn exact_gap_power_mean(n: usize, k: u32) -> Result<BigRational> {
    check_cap("moment order", k as usize, 4)?;
    let gaps = all_gaps(n)?;
    let total: BigInt = gaps.iter().map(|&g| BigInt::from(g).pow(2 * k)).sum();
    Ok(BigRational::new(total, BigInt::from(gaps.len())))
}

pub fn exact_moment_rational(n: usize, k: u32) -> Result<BigRational> {
    let mean = exact_gap_power_mean(n, k)?;
    Ok(mean / BigRational::from_integer(BigInt::one() << (n as u32 * k)))
}

pub fn exact_moment(n: usize, k: u32) -> Result<MomentReport> {
    let r = exact_moment_rational(n, k)?;
    Ok(MomentReport {
        n,
        k,
        estimator: Estimator::Exact,
        value: r.to_f64().unwrap_or(f64::NAN),
        exact: Some(format!("{}/{}", r.numer(), r.denom())),
        samples: 1 << term_capacity(n),
        std_error: 0.0,
    })
}

/// Gaps of `samples` random polynomials. Shard `i` uses stream `i` of a
/// ChaCha generator keyed by `seed`, and shards are concatenated in order,
/// so the output does not depend on the thread count.
pub fn sample_gaps(n: usize, samples: usize, seed: u64) -> Result<Vec<i64>> {
    let shards = samples.div_ceil(SHARD);
    let parts: Vec<Vec<i64>> = (0..shards)
        .into_par_iter()
        .map(|s| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            rng.set_stream(s as u64);
            let count = SHARD.min(samples - s * SHARD);
            (0..count)
                .map(|_| Ok(Poly3::random(n, &mut rng)?.gap_bruteforce()?.0))
                .collect::<Result<Vec<i64>>>()
        })
        .collect::<Result<_>>()?;
    Ok(parts.concat())
}

/// Mean and jackknife standard error. For the sample mean the leave-one-out
/// replicates reduce to the usual `s/√N`, computed here from the replicates.
fn mean_and_jackknife(values: &[f64]) -> (f64, f64) {
    let m = values.len() as f64;
    let total: f64 = values.iter().sum();
    let mean = total / m;
    if values.len() < 2 {
        return (mean, f64::INFINITY);
    }
    let ss: f64 = values
        .iter()
        .map(|v| {
            let loo = (total - v) / (m - 1.0);
            (loo - mean).powi(2)
        })
        .sum();
    (mean, ((m - 1.0) / m * ss).sqrt())
}

pub fn sampled_moment(n: usize, k: u32, samples: usize, seed: u64) -> Result<MomentReport> {
    if samples == 0 {
        return Err(Error::InvalidArgument("need at least one sample".into()));
    }
    let scale = (n as f64 * k as f64).exp2();
    let values: Vec<f64> = sample_gaps(n, samples, seed)?
        .into_iter()
        .map(|g| (g as f64).powi(2 * k as i32) / scale)
        .collect();
    let (value, std_error) = mean_and_jackknife(&values);
    Ok(MomentReport {
        n,
        k,
        estimator: Estimator::Sampled,
        value,
        exact: None,
        samples: samples as u64,
        std_error,
    })
}

/// Histogram of sampled gaps, for export.
pub fn gap_histogram(n: usize, samples: usize, seed: u64) -> Result<BTreeMap<i64, u64>> {
    let mut h = BTreeMap::new();
    for g in sample_gaps(n, samples, seed)? {
        *h.entry(g).or_insert(0) += 1;
    }
    Ok(h)
}

/// Number of `2k × n` matrices over F₂ whose columns satisfy
/// `⟨X_a, X_b, X_c⟩ = Σ_r X_a[r]X_b[r]X_c[r] = 0` for every triple with
/// repetition. This equals `E[gap^{2k}]`.
pub fn count_matrix_solutions(n: usize, k: u32) -> Result<u64> {
    let rows = 2 * k as usize;
    check_cap("matrix entries 2k·n", rows * n, 24)?;
    if k == 0 {
        return Ok(1);
    }
    let mut cols = Vec::with_capacity(n);
    Ok(extend_columns(&mut cols, n, 1u32 << rows))
}

fn tri(a: u32, b: u32, c: u32) -> bool {
    (a & b & c).count_ones() & 1 == 1
}

fn extend_columns(cols: &mut Vec<u32>, n: usize, choices: u32) -> u64 {
    if cols.len() == n {
        return 1;
    }
    let mut total = 0;
    for v in 0..choices {
        if tri(v, v, v) {
            continue;
        }
        let ok = cols.iter().enumerate().all(|(i, &a)| {
            !tri(a, v, v) && !tri(a, a, v) && cols[..i].iter().all(|&b| !tri(a, b, v))
        });
        if ok {
            cols.push(v);
            total += extend_columns(cols, n, choices);
            cols.pop();
        }
    }
    total
}

/// Number of `k`-dimensional subspaces `H ⊆ F₂^{2k}` with
/// `⟨a, b∘c⟩ = 0` for all `a, b, c ∈ H` (degree 3), or `⟨a, b⟩ = 0` for all
/// `a, b ∈ H` (degree 2). Subspaces are enumerated once each through their
/// reduced row echelon bases.
pub fn count_condition_subspaces(k: u32, degree: u32) -> Result<u64> {
    check_cap("subspace dimension k", k as usize, 4)?;
    if degree != 2 && degree != 3 {
        return Err(Error::InvalidArgument(format!("degree must be 2 or 3, got {degree}")));
    }
    if k == 0 {
        return Ok(1);
    }
    let dim = 2 * k as usize;
    let k = k as usize;
    let mut count = 0;
    for pivots in combinations(dim, k) {
        // Free positions of row r: columns after its pivot that are not pivots.
        let free: Vec<Vec<usize>> = pivots
            .iter()
            .map(|&p| (p + 1..dim).filter(|c| !pivots.contains(c)).collect())
            .collect();
        let nfree: usize = free.iter().map(Vec::len).sum();
        for bits in 0..1u64 << nfree {
            let mut basis = Vec::with_capacity(k);
            let mut used = 0;
            for (r, &p) in pivots.iter().enumerate() {
                let mut row = 1u32 << p;
                for &c in &free[r] {
                    if (bits >> used) & 1 == 1 {
                        row |= 1 << c;
                    }
                    used += 1;
                }
                basis.push(row);
            }
            if satisfies(&basis, degree) {
                count += 1;
            }
        }
    }
    Ok(count)
}

fn satisfies(basis: &[u32], degree: u32) -> bool {
    let k = basis.len();
    for i in 0..k {
        for j in i..k {
            if degree == 2 {
                if (basis[i] & basis[j]).count_ones() & 1 == 1 {
                    return false;
                }
                continue;
            }
            for l in j..k {
                if tri(basis[i], basis[j], basis[l]) {
                    return false;
                }
            }
        }
    }
    true
}

fn combinations(n: usize, k: usize) -> Vec<Vec<usize>> {
    fn go(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            cur.push(i);
            go(i + 1, n, k, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    go(0, n, k, &mut Vec::new(), &mut out);
    out
}

/// Coefficients printed for the degree-15 mass polynomial, used as the
/// reference the recomputation is checked against.
pub const REFERENCE_MASS_COEFFS: [f64; 16] = [
    1.0, -6.0672, 29.9730, -114.8688, 345.0021, -829.2997, 1620.0455, -2593.7392, 3410.0118,
    -3665.1216, 3183.4033, -2188.3186, 1149.8164, -435.1008, 105.8449, -12.4590,
];

/// Lower-bounding polynomial for the indicator `I(x) = [x ≤ 1/4]` on
/// `x ≥ 0`,
///
/// ```text
/// p(x) = δ²/(1−δ²) · (T_L(√(1 + A − 4Ax))² − 1),   A = T_{1/L}(1/δ)² − 1,
/// ```
///
/// written as `Σ_j c_j x^j / (2j−1)!!` so that `E_{x∼N(0,1)} p(x²) = Σ_j c_j`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MassPoly {
    pub degree: u32,
    pub delta: f64,
    pub a: f64,
    /// Monomial coefficients of `p(x)`.
    pub power_coeffs: Vec<f64>,
    /// `c_j = power_coeffs[j] · (2j−1)!!`.
    pub c: Vec<f64>,
    pub gaussian_mass: f64,
}

pub fn mass_poly() -> MassPoly {
    mass_poly_with(15, 0.5)
}

/// The construction for odd degree `l` and `0 < delta < 1`.
pub fn mass_poly_with(l: u32, delta: f64) -> MassPoly {
    let theta0 = (1.0 / delta).acosh() / l as f64;
    let a = theta0.sinh().powi(2);
    let k = delta * delta / (1.0 - delta * delta);
    // T_L(s)² − 1 = (T_L(w) − 1)/2 with w = 2s² − 1 = (1 + 2A) − 8A·x.
    let w = [1.0 + 2.0 * a, -8.0 * a];
    let mut t_prev = vec![1.0];
    let mut t_cur = w.to_vec();
    for _ in 1..l {
        let mut next = vec![0.0; t_cur.len() + 1];
        for (i, &c) in t_cur.iter().enumerate() {
            next[i] += 2.0 * w[0] * c;
            next[i + 1] += 2.0 * w[1] * c;
        }
        for (i, &c) in t_prev.iter().enumerate() {
            next[i] -= c;
        }
        t_prev = t_cur;
        t_cur = next;
    }
    let mut power_coeffs: Vec<f64> = t_cur.iter().map(|&c| k * c / 2.0).collect();
    power_coeffs[0] -= k / 2.0;
    let mut dfact = 1.0;
    let c: Vec<f64> = power_coeffs
        .iter()
        .enumerate()
        .map(|(j, &p)| {
            if j > 0 {
                dfact *= (2 * j - 1) as f64;
            }
            p * dfact
        })
        .collect();
    let gaussian_mass = c.iter().sum();
    MassPoly {
        degree: l,
        delta,
        a,
        power_coeffs,
        c,
        gaussian_mass,
    }
}

impl MassPoly {
    /// `p(x)` in closed form. On `[0, 1/4]` it uses
    /// `k·sinh²(L·asinh(√(1−4x)·sinh θ₀))`, beyond it `cos`/`cosh` of
    /// `L·acos(w)`, which avoids cancellation near the tangency at `x = 0`.
    pub fn eval(&self, x: f64) -> f64 {
        let l = self.degree as f64;
        let k = self.delta * self.delta / (1.0 - self.delta * self.delta);
        if x <= 0.25 {
            let theta0 = (1.0 / self.delta).acosh() / l;
            let phi = ((1.0 - 4.0 * x).sqrt() * theta0.sinh()).asinh();
            return k * (l * phi).sinh().powi(2);
        }
        let w = 1.0 - 8.0 * self.a * (x - 0.25);
        let t = if w >= -1.0 {
            (l * w.acos()).cos()
        } else {
            // Odd degree: T_L(−y) = −T_L(y).
            -(l * (-w).acosh()).cosh()
        };
        k * (t - 1.0) / 2.0
    }

    /// `p(x)` from the monomial coefficients (Horner).
    pub fn eval_power(&self, x: f64) -> f64 {
        self.power_coeffs.iter().rev().fold(0.0, |acc, &c| acc * x + c)
    }
}

pub fn indicator_quarter(x: f64) -> f64 {
    if x <= 0.25 {
        1.0
    } else {
        0.0
    }
}

/// Largest `p(x) − I(x)` on `x = 0, step, 2·step, …, max_x`.
pub fn mass_poly_grid_excess(p: &MassPoly, max_x: f64, step: f64) -> (f64, f64) {
    let steps = (max_x / step).round() as u64;
    (0..=steps)
        .map(|i| {
            let x = i as f64 * step;
            (p.eval(x) - indicator_quarter(x), x)
        })
        .fold((f64::NEG_INFINITY, 0.0), |best, cur| if cur.0 > best.0 { cur } else { best })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PromiseStats {
    pub n: usize,
    pub samples: u64,
    pub exhaustive: bool,
    pub yes: f64,
    pub no: f64,
    pub nonpromise: f64,
    pub yes_se: f64,
    pub no_se: f64,
    pub promise_se: f64,
    pub p0: f64,
    pub p0_se: f64,
}

fn promise_from_gaps(n: usize, gaps: &[i64], exhaustive: bool) -> PromiseStats {
    let (mut y, mut no) = (0u64, 0u64);
    for &g in gaps {
        match sgap_label_from_gap(g, n) {
            SgapLabel::Yes => y += 1,
            SgapLabel::No => no += 1,
            SgapLabel::NonPromise => {}
        }
    }
    let m = gaps.len() as f64;
    let se = |p: f64, m: f64| {
        if exhaustive || m == 0.0 {
            0.0
        } else {
            (p * (1.0 - p) / m).sqrt()
        }
    };
    let (fy, fno) = (y as f64 / m, no as f64 / m);
    let prom = (y + no) as f64;
    let p0 = if prom > 0.0 { y.max(no) as f64 / prom } else { f64::NAN };
    PromiseStats {
        n,
        samples: gaps.len() as u64,
        exhaustive,
        yes: fy,
        no: fno,
        nonpromise: 1.0 - fy - fno,
        yes_se: se(fy, m),
        no_se: se(fno, m),
        promise_se: se(fy + fno, m),
        p0,
        p0_se: se(p0, prom),
    }
}

/// YES/NO/non-promise frequencies and `p₀ = max(YES, NO)/(YES + NO)`.
/// Exhaustive for `n ≤ 4`; otherwise `samples` seeded draws.
pub fn promise_stats(n: usize, samples: usize, seed: u64) -> Result<PromiseStats> {
    if n <= 4 {
        return Ok(promise_from_gaps(n, &all_gaps(n)?, true));
    }
    if samples == 0 {
        return Err(Error::InvalidArgument("need at least one sample".into()));
    }
    Ok(promise_from_gaps(n, &sample_gaps(n, samples, seed)?, false))
}

/// Exact rational from a report string, for callers comparing exhaustively.
pub fn parse_rational(s: &str) -> Option<BigRational> {
    let (a, b) = s.split_once('/')?;
    let b: BigInt = b.parse().ok()?;
    if b.is_zero() {
        return None;
    }
    Some(BigRational::new(a.parse().ok()?, b))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sgap_examples() {
        assert_eq!(
            sgap_classify(&Poly3::parse("x1", 1).unwrap()).unwrap(),
            SgapLabel::No
        );
        let f = Poly3::parse("x1 + x2 + x1*x2 + x1*x2*x3", 3).unwrap();
        assert_eq!(sgap_classify(&f).unwrap(), SgapLabel::Yes);
        assert_eq!(
            sgap_classify(&Poly3::zero(5).unwrap()).unwrap(),
            SgapLabel::Yes
        );
        // n = 5: YES needs gap² ≥ 16, NO needs gap² ≤ 8.
        assert_eq!(sgap_label_from_gap(4, 5), SgapLabel::Yes);
        assert_eq!(sgap_label_from_gap(2, 5), SgapLabel::No);
        assert_eq!(sgap_label_from_gap(2, 4), SgapLabel::No);
        assert_eq!(sgap_label_from_gap(2, 2), SgapLabel::Yes);
    }

    #[test]
    fn exact_second_moment_is_one() {
        for n in 1..=3 {
            let r = exact_moment_rational(n, 1).unwrap();
            assert_eq!(r, BigRational::one(), "n={n}");
        }
        let rep = exact_moment(2, 1).unwrap();
        assert_eq!(rep.exact.as_deref(), Some("1/1"));
        assert_eq!(rep.std_error, 0.0);
    }

    #[test]
    fn exact_moments_of_two_variables() {
        let mut gaps = all_gaps(2).unwrap();
        gaps.sort_unstable();
        assert_eq!(gaps, vec![-2, 0, 0, 0, 2, 2, 2, 4]);
    }

    #[test]
    fn matrix_count_examples() {
        assert_eq!(count_matrix_solutions(1, 1).unwrap(), 2);
        assert_eq!(count_matrix_solutions(2, 1).unwrap(), 4);
        for (n, k) in [(1, 1), (2, 1), (3, 1), (1, 2), (2, 2)] {
            let mean = exact_gap_power_mean(n, k).unwrap();
            assert_eq!(
                BigRational::from_integer(count_matrix_solutions(n, k).unwrap().into()),
                mean,
                "n={n} k={k}"
            );
        }
        assert!(count_matrix_solutions(4, 4).is_err());
    }

    #[test]
    fn subspace_counts() {
        let d3: Vec<u64> = (1..=4).map(|k| count_condition_subspaces(k, 3).unwrap()).collect();
        assert_eq!(d3, vec![1, 3, 15, 105]);
        let d2: Vec<u64> = (1..=4).map(|k| count_condition_subspaces(k, 2).unwrap()).collect();
        assert_eq!(d2, vec![1, 3, 15, 135]);
        assert!(count_condition_subspaces(2, 4).is_err());
    }

    #[test]
    fn mass_poly_matches_reference() {
        let p = mass_poly();
        assert!((p.a - 0.00773).abs() < 5e-6);
        assert_eq!(p.c.len(), 16);
        for (j, (&c, &r)) in p.c.iter().zip(&REFERENCE_MASS_COEFFS).enumerate() {
            assert!((c - r).abs() < 5e-4, "c_{j} = {c}, reference {r}");
        }
        assert!((p.gaussian_mass - 0.1222).abs() < 5e-5);
    }

    #[test]
    fn mass_poly_closed_form_matches_coefficients() {
        let p = mass_poly();
        for i in 0..=100 {
            let x = i as f64 * 0.02;
            let (a, b) = (p.eval(x), p.eval_power(x));
            assert!((a - b).abs() < 1e-8 * (1.0 + a.abs()), "x={x}: {a} vs {b}");
        }
    }

    #[test]
    fn mass_poly_below_indicator() {
        let p = mass_poly();
        let (excess, _) = mass_poly_grid_excess(&p, 20.0, 1e-3);
        assert!(excess <= 0.0, "excess {excess}");
    }

    #[test]
    fn sampling_is_deterministic_across_thread_counts() {
        let run = |threads| {
            rayon::ThreadPoolBuilder::new()
                .num_threads(threads)
                .build()
                .unwrap()
                .install(|| sample_gaps(8, 1000, 99).unwrap())
        };
        assert_eq!(run(1), run(3));
    }

    #[test]
    fn jackknife_matches_textbook_standard_error() {
        let v = [1.0, 2.0, 4.0, 7.0, 11.0];
        let (m, se) = mean_and_jackknife(&v);
        let var = v.iter().map(|x| (x - m).powi(2)).sum::<f64>() / 4.0;
        assert!((se - (var / 5.0).sqrt()).abs() < 1e-12);
    }

    #[test]
    fn exhaustive_promise_stats_small_n() {
        let s = promise_stats(2, 0, 0).unwrap();
        assert!(s.exhaustive);
        // gaps {4,0,0,0,2,2,2,−2}: YES needs gap² ≥ 2, NO needs gap² ≤ 1.
        assert_eq!((s.yes, s.no), (5.0 / 8.0, 3.0 / 8.0));
    }

    #[test]
    fn rational_parsing() {
        assert_eq!(
            parse_rational("3/6"),
            Some(BigRational::new(1.into(), 2.into()))
        );
        assert_eq!(parse_rational("1/0"), None);
    }
}
