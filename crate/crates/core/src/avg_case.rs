//! Average-case tools: the worst-case to quasi-average-case gap recursion,
//! the query algorithm for SB acceptance with its exact acceptance
//! probability, and the certificate verifier for non-balancedness.
//!
//! Probabilities here are tiny (`2^{-10·2^{n/2}}`) and are kept as natural
//! logarithms throughout.

use std::collections::HashSet;

use rand::Rng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{check_cap, Error, Result};
use crate::limits::Limits;
use crate::poly3::{GapValue, Poly3};

fn var_mask(n: usize) -> u64 {
    if n >= 64 {
        u64::MAX
    } else {
        (1u64 << n) - 1
    }
}

/// Uniform member of `[f̄]`: `f`'s quadratic and cubic parts with a uniformly
/// random linear part.
pub fn randomize_linear<R: Rng + ?Sized>(f: &Poly3, rng: &mut R) -> Poly3 {
    let mask = rng.gen::<u64>() & var_mask(f.n());
    f.with_linear_mask(mask).expect("mask fits n variables")
}

/// Change of variables `x_j′ = Σ_k u_k x_k`, `x_k′ = x_k` for `k ≠ j`.
///
/// Substitutes `x_j = x_j′ + Σ_{k≠j} u_k x_k` into every monomial and
/// expands; the map is a bijection on `F₂ⁿ`, so the gap is unchanged.
pub fn substitute_pivot(f: &Poly3, u: u64, j: usize) -> Result<Poly3> {
    let n = f.n();
    if j >= n {
        return Err(Error::IndexOutOfRange { index: j, n });
    }
    if u & !var_mask(n) != 0 {
        return Err(Error::InvalidArgument(format!("mask {u:#x} exceeds {n} variables")));
    }
    if u >> j & 1 == 0 {
        return Err(Error::InvalidArgument(format!(
            "pivot x{} has u_j = 0, substitution is not invertible",
            j + 1
        )));
    }
    let replacement: Vec<usize> = (0..n).filter(|&k| u >> k & 1 == 1).collect();
    let mut out: Vec<Vec<usize>> = Vec::new();
    for t in f.terms() {
        // Each factor is a set of alternatives; expand the product.
        let factors: Vec<Vec<usize>> = t
            .iter()
            .map(|&v| if v == j { replacement.clone() } else { vec![v] })
            .collect();
        let mut partial: Vec<Vec<usize>> = vec![Vec::new()];
        for fac in &factors {
            partial = partial
                .iter()
                .flat_map(|p| {
                    fac.iter().map(move |&v| {
                        let mut q = p.clone();
                        q.push(v);
                        q
                    })
                })
                .collect();
        }
        out.extend(partial);
    }
    Poly3::from_terms(n, out)
}

/// An oracle for `gap(g)` on members of `[f̄]`.
#[derive(Debug, Clone)]
pub enum GapOracle {
    Exact,
    /// Wrong answer (`gap + 2`) on each call independently with probability
    /// `rate`.
    Corrupted { rate: f64, rng: ChaCha8Rng },
}

impl GapOracle {
    pub fn corrupted(rate: f64, seed: u64) -> Result<Self> {
        use rand::SeedableRng;
        if !(0.0..=1.0).contains(&rate) {
            return Err(Error::InvalidArgument(format!("corruption rate {rate} outside [0, 1]")));
        }
        Ok(GapOracle::Corrupted {
            rate,
            rng: ChaCha8Rng::seed_from_u64(seed),
        })
    }

    pub fn query(&mut self, g: &Poly3) -> Result<GapValue> {
        let gap = g.gap_bruteforce()?;
        Ok(match self {
            GapOracle::Exact => gap,
            GapOracle::Corrupted { rate, rng } => {
                if rng.gen::<f64>() < *rate {
                    GapValue(gap.0 + 2)
                } else {
                    gap
                }
            }
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RecursionTrace {
    pub gap: i64,
    pub oracle_calls: usize,
    pub depth: usize,
    /// True when some level drew `g = f` and stopped early.
    pub early_exit: bool,
}

/// Recover `gap(f)` from `gap(f) = gap(g) + 2·gap(f′|x_j′=1)` with one oracle
/// call per level and brute force once a single variable is left.
pub fn gap_from_quasi_avg_oracle<R: Rng + ?Sized>(
    f: &Poly3,
    oracle: &mut GapOracle,
    rng: &mut R,
) -> Result<RecursionTrace> {
    let mut trace = RecursionTrace {
        gap: 0,
        oracle_calls: 0,
        depth: 0,
        early_exit: false,
    };
    // Unrolled recursion: gap(f) = Σ_level coeff·gap(g_level) + coeff_last·base.
    let mut current = f.clone();
    let mut coeff: i64 = 1;
    let mut total: i64 = 0;
    loop {
        if current.n() <= 1 {
            total += coeff * current.gap_bruteforce()?.0;
            break;
        }
        trace.depth += 1;
        let g = randomize_linear(&current, rng);
        let gap_g = oracle.query(&g)?.0;
        trace.oracle_calls += 1;
        let u = current.linear_mask() ^ g.linear_mask();
        if u == 0 {
            total += coeff * gap_g;
            trace.early_exit = true;
            break;
        }
        let j = 63 - u.leading_zeros() as usize;
        let fp = substitute_pivot(&current, u, j)?;
        let (h, constant) = fp.restrict(j, true)?;
        total += coeff * gap_g;
        coeff *= if constant { -2 } else { 2 };
        current = h;
    }
    trace.gap = total;
    Ok(trace)
}

/// Non-deterministic verifier: accept iff `f` takes one value on all of `s`.
/// A valid certificate has `2^{n-1}+1` distinct assignments.
pub fn certificate_verify(f: impl Fn(u64) -> bool, n: usize, s: &[u64]) -> Result<bool> {
    if n == 0 || n > 62 {
        return Err(Error::InvalidArgument(format!("certificate needs 1 ≤ n ≤ 62, got {n}")));
    }
    let need = (1usize << (n - 1)) + 1;
    if s.len() != need {
        return Err(Error::InvalidArgument(format!(
            "certificate has {} assignments, needs {need}",
            s.len()
        )));
    }
    let mut seen = HashSet::with_capacity(s.len());
    for &x in s {
        if x >> n != 0 {
            return Err(Error::InvalidArgument(format!("assignment {x:#x} exceeds {n} bits")));
        }
        if !seen.insert(x) {
            return Err(Error::InvalidArgument(format!("duplicate assignment {x:#x}")));
        }
    }
    let first = f(s[0]);
    Ok(s.iter().all(|&x| f(x) == first))
}

/// An accepting certificate (the first `2^{n-1}+1` inputs of the majority
/// value), or `None` when `f` is balanced.
pub fn find_certificate(f: &Poly3) -> Result<Option<Vec<u64>>> {
    let n = f.n();
    if n == 0 {
        return Err(Error::InvalidArgument("certificate needs n ≥ 1".into()));
    }
    check_cap("brute-force variables", n, Limits::current().brute_force_vars)?;
    let need = (1usize << (n - 1)) + 1;
    let total = 1u64 << n;
    for value in [false, true] {
        let s: Vec<u64> = (0..total).filter(|&x| f.eval_mask(x) == value).take(need).collect();
        if s.len() == need {
            return Ok(Some(s));
        }
    }
    Ok(None)
}

/// Exhaustively test every `(2^{n-1}+1)`-subset; returns the number that
/// the verifier accepts. Intended for `n ≤ 4`.
pub fn count_accepting_certificates(f: &Poly3) -> Result<u64> {
    let n = f.n();
    if n == 0 || n > 4 {
        return Err(Error::CapExceeded {
            what: "certificate enumeration variables",
            requested: n,
            cap: 4,
        });
    }
    let size = 1u32 << n;
    let need = (1u32 << (n - 1)) + 1;
    let mut accepted = 0;
    for mask in 0u32..(1u32 << size) {
        if mask.count_ones() != need {
            continue;
        }
        let s: Vec<u64> = (0..size as u64).filter(|&x| mask >> x & 1 == 1).collect();
        if certificate_verify(|x| f.eval_mask(x), n, &s)? {
            accepted += 1;
        }
    }
    Ok(accepted)
}

/// Query budget and thresholds of the SB query algorithm, in log space.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SbThresholds {
    pub n: usize,
    /// `⌈10·2^{n/2}⌉`.
    pub l: u64,
    /// `ln t(n)`.
    pub log_t: f64,
    pub c: f64,
}

impl SbThresholds {
    /// `t(n) = 2^{-L}·exp(0.9·L·2^{-(n+1)/2})`. For even `n` this equals
    /// `2^{-10·2^{n/2}}·exp(9/√2)`.
    pub fn new(n: usize) -> Self {
        let l = (10.0 * 2f64.powf(n as f64 / 2.0)).ceil() as u64;
        let lf = l as f64;
        let log_t = -lf * std::f64::consts::LN_2 + 0.9 * lf * 2f64.powf(-(n as f64 + 1.0) / 2.0);
        SbThresholds { n, l, log_t, c: 1.5 }
    }

    pub fn log_t_over_c(&self) -> f64 {
        self.log_t - self.c.ln()
    }

    /// Smallest even `|gap|` with `gap² ≥ 2^{n-1}`.
    pub fn yes_gap(&self) -> i64 {
        let mut g = 0i64;
        while (g * g) < (1i64 << (self.n - 1)) {
            g += 2;
        }
        g
    }

    /// Largest even `|gap|` with `gap² ≤ 2^{n-2}`.
    pub fn no_gap(&self) -> i64 {
        let mut g = 0i64;
        while ((g + 2) * (g + 2)) <= (1i64 << (self.n - 2)) {
            g += 2;
        }
        g
    }
}

fn log_add_exp(a: f64, b: f64) -> f64 {
    if a == f64::NEG_INFINITY {
        return b;
    }
    if b == f64::NEG_INFINITY {
        return a;
    }
    let m = a.max(b);
    m + ((a - m).exp() + (b - m).exp()).ln()
}

/// `ln(q₁^L + q₀^L)` with `q₁ = 1/2 + |gap|/2^{n+1}` and `q₀ = 1 − q₁`: the
/// chance that `L` uniform queries (with replacement) all agree.
pub fn sb_acceptance_exact(gap: i64, n: usize, l: u64) -> Result<f64> {
    if n > 62 {
        return Err(Error::InvalidArgument(format!("n = {n} too large")));
    }
    let total = 1i64 << n;
    if gap.abs() > total {
        return Err(Error::InvalidArgument(format!("|gap| = {} exceeds 2^n = {total}", gap.abs())));
    }
    let r = gap.abs() as f64 / total as f64;
    let lf = l as f64;
    let log_q1 = -std::f64::consts::LN_2 + r.ln_1p();
    let log_q0 = if gap.abs() == total {
        f64::NEG_INFINITY
    } else {
        -std::f64::consts::LN_2 + (-r).ln_1p()
    };
    Ok(log_add_exp(lf * log_q1, lf * log_q0))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SbReport {
    pub thresholds: SbThresholds,
    pub gap: i64,
    pub log_accept: f64,
    pub above_t: bool,
    pub below_t_over_c: bool,
}

pub fn sb_report(n: usize, gap: i64) -> Result<SbReport> {
    let thresholds = SbThresholds::new(n);
    let log_accept = sb_acceptance_exact(gap, n, thresholds.l)?;
    Ok(SbReport {
        thresholds,
        gap,
        log_accept,
        above_t: log_accept >= thresholds.log_t,
        below_t_over_c: log_accept <= thresholds.log_t_over_c(),
    })
}
