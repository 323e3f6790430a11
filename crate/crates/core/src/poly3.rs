//! Degree-3 polynomials over F₂ with no constant term.
//!
//! A [`Poly3`] keeps its linear, quadratic and cubic monomials as sorted,
//! deduplicated index tuples (0-based). Assignments are bitmasks with
//! variable `i` at bit `i`.
//!
//! Gap counting builds the full truth table from the algebraic normal form
//! with an in-place XOR subset transform over a packed bitset, so a `2^n`
//! scan costs `O(n 2^n / 64)` word operations.

use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{check_cap, Error, Result};
use crate::limits::Limits;

/// Largest variable count a [`Poly3`] may carry (assignments are `u64` masks).
pub const MAX_VARS: usize = 64;

/// Number of distinct monomials of degree 1..=3 on `n` variables: `(n³+5n)/6`.
pub fn term_capacity(n: usize) -> u64 {
    let n = n as u64;
    (n * n * n + 5 * n) / 6
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "RawPoly3", into = "RawPoly3")]
pub struct Poly3 {
    n: usize,
    linear: Vec<usize>,
    quadratic: Vec<[usize; 2]>,
    cubic: Vec<[usize; 3]>,
}

/// Wire form of [`Poly3`]; validated and normalised on the way in.
#[derive(Debug, Clone, Serialize, Deserialize)]
struct RawPoly3 {
    n: usize,
    #[serde(default)]
    linear: Vec<usize>,
    #[serde(default)]
    quadratic: Vec<[usize; 2]>,
    #[serde(default)]
    cubic: Vec<[usize; 3]>,
}

impl TryFrom<RawPoly3> for Poly3 {
    type Error = Error;

    fn try_from(raw: RawPoly3) -> Result<Self> {
        let terms = raw
            .linear
            .iter()
            .map(|&i| vec![i])
            .chain(raw.quadratic.iter().map(|t| t.to_vec()))
            .chain(raw.cubic.iter().map(|t| t.to_vec()));
        Poly3::from_terms(raw.n, terms)
    }
}

impl From<Poly3> for RawPoly3 {
    fn from(p: Poly3) -> Self {
        RawPoly3 {
            n: p.n,
            linear: p.linear,
            quadratic: p.quadratic,
            cubic: p.cubic,
        }
    }
}

/// Exact value of `Σ_x (-1)^{f(x)}`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct GapValue(pub i64);

impl GapValue {
    pub fn value(self) -> i64 {
        self.0
    }
}

impl fmt::Display for GapValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

impl Poly3 {
    /// The zero polynomial on `n` variables.
    pub fn zero(n: usize) -> Result<Self> {
        if n > MAX_VARS {
            return Err(Error::InvalidArgument(format!(
                "{n} variables exceeds the supported maximum {MAX_VARS}"
            )));
        }
        Ok(Poly3 {
            n,
            linear: Vec::new(),
            quadratic: Vec::new(),
            cubic: Vec::new(),
        })
    }

    /// Build from monomials given as index lists. Repeated indices inside a
    /// monomial collapse (`x² = x`) and repeated monomials cancel mod 2.
    pub fn from_terms<I, T>(n: usize, terms: I) -> Result<Self>
    where
        I: IntoIterator<Item = T>,
        T: AsRef<[usize]>,
    {
        let mut p = Poly3::zero(n)?;
        let mut set: BTreeSet<Vec<usize>> = BTreeSet::new();
        for t in terms {
            let mut vars: Vec<usize> = t.as_ref().to_vec();
            vars.sort_unstable();
            vars.dedup();
            if vars.is_empty() {
                return Err(Error::ConstantTerm);
            }
            if let Some(&bad) = vars.iter().find(|&&i| i >= n) {
                return Err(Error::IndexOutOfRange { index: bad, n });
            }
            if vars.len() > 3 {
                return Err(Error::InvalidArgument(format!(
                    "monomial of degree {} exceeds 3",
                    vars.len()
                )));
            }
            if !set.remove(&vars) {
                set.insert(vars);
            }
        }
        for v in set {
            match v.len() {
                1 => p.linear.push(v[0]),
                2 => p.quadratic.push([v[0], v[1]]),
                _ => p.cubic.push([v[0], v[1], v[2]]),
            }
        }
        Ok(p)
    }

    /// Polynomial with bit `k` of `index` selecting the `k`-th monomial in
    /// canonical order (linear, then pairs, then triples, each lexicographic).
    /// Enumerating `index` over `0..2^{g₁(n)}` lists every polynomial once.
    pub fn from_index(n: usize, index: u128) -> Result<Self> {
        let mut p = Poly3::zero(n)?;
        for (k, t) in canonical_monomials(n).enumerate() {
            if k < 128 && (index >> k) & 1 == 1 {
                p.push_canonical(&t);
            }
        }
        Ok(p)
    }

    fn push_canonical(&mut self, t: &[usize]) {
        match *t {
            [i] => self.linear.push(i),
            [i, j] => self.quadratic.push([i, j]),
            [i, j, k] => self.cubic.push([i, j, k]),
            _ => unreachable!("monomials have degree 1..=3"),
        }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn linear(&self) -> &[usize] {
        &self.linear
    }

    pub fn quadratic(&self) -> &[[usize; 2]] {
        &self.quadratic
    }

    pub fn cubic(&self) -> &[[usize; 3]] {
        &self.cubic
    }

    pub fn term_count(&self) -> usize {
        self.linear.len() + self.quadratic.len() + self.cubic.len()
    }

    pub fn is_zero(&self) -> bool {
        self.term_count() == 0
    }

    /// All monomials in canonical order, as index slices.
    pub fn terms(&self) -> impl Iterator<Item = Vec<usize>> + '_ {
        self.linear
            .iter()
            .map(|&i| vec![i])
            .chain(self.quadratic.iter().map(|t| t.to_vec()))
            .chain(self.cubic.iter().map(|t| t.to_vec()))
    }

    /// Monomials as variable bitmasks.
    pub fn term_masks(&self) -> Vec<u64> {
        self.terms()
            .map(|t| t.iter().fold(0u64, |m, &i| m | (1u64 << i)))
            .collect()
    }

    /// Evaluate at an assignment given as one bit per variable.
    pub fn evaluate(&self, x: &[bool]) -> Result<bool> {
        if x.len() != self.n {
            return Err(Error::BitLength {
                expected: self.n,
                got: x.len(),
            });
        }
        let mask = x
            .iter()
            .enumerate()
            .fold(0u64, |m, (i, &b)| if b { m | (1 << i) } else { m });
        Ok(self.eval_mask(mask))
    }

    /// Evaluate at a bitmask assignment (variable `i` is bit `i`).
    pub fn eval_mask(&self, x: u64) -> bool {
        let bit = |i: usize| (x >> i) & 1;
        let mut acc = 0u64;
        for &i in &self.linear {
            acc ^= bit(i);
        }
        for &[i, j] in &self.quadratic {
            acc ^= bit(i) & bit(j);
        }
        for &[i, j, k] in &self.cubic {
            acc ^= bit(i) & bit(j) & bit(k);
        }
        acc == 1
    }

    /// Packed truth table: bit `x` of the result is `f(x)`.
    pub fn truth_table(&self) -> Result<Vec<u64>> {
        check_cap("brute-force variables", self.n, Limits::current().brute_force_vars)?;
        let len = 1usize << self.n;
        let mut words = vec![0u64; len.div_ceil(64)];
        for m in self.term_masks() {
            words[(m >> 6) as usize] ^= 1u64 << (m & 63);
        }
        xor_subset_transform(&mut words, self.n);
        Ok(words)
    }

    /// Number of assignments with `f(x) = 1`.
    pub fn ones_count(&self) -> Result<u64> {
        Ok(self
            .truth_table()?
            .iter()
            .map(|w| u64::from(w.count_ones()))
            .sum())
    }

    /// `Σ_x (-1)^{f(x)}` over all `2^n` assignments.
    pub fn gap_bruteforce(&self) -> Result<GapValue> {
        let ones = self.ones_count()? as i64;
        Ok(GapValue((1i64 << self.n) - 2 * ones))
    }

    /// Number of assignments with `f(x) = 0`, i.e. `(2^n + gap)/2`.
    pub fn zeros_count(&self) -> Result<u64> {
        Ok((1u64 << self.n) - self.ones_count()?)
    }

    /// Reference scan: evaluates `f` pointwise at every assignment.
    pub fn gap_pointwise(&self) -> Result<GapValue> {
        check_cap("brute-force variables", self.n, Limits::current().brute_force_vars)?;
        let total: i64 = (0..1u64 << self.n)
            .map(|x| if self.eval_mask(x) { -1 } else { 1 })
            .sum();
        Ok(GapValue(total))
    }

    /// Uniform draw over all `2^{g₁(n)}` polynomials: every monomial is kept
    /// independently with probability 1/2, in canonical order.
    pub fn random<R: Rng + ?Sized>(n: usize, rng: &mut R) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidArgument("random polynomial needs n >= 1".into()));
        }
        let mut p = Poly3::zero(n)?;
        for t in canonical_monomials(n) {
            if rng.gen::<bool>() {
                p.push_canonical(&t);
            }
        }
        Ok(p)
    }

    /// `δ^f`: bit `i` set iff the monomial `x_i` appears.
    pub fn linear_mask(&self) -> u64 {
        self.linear.iter().fold(0, |m, &i| m | (1 << i))
    }

    /// `f̄`: the same polynomial with every linear monomial removed.
    pub fn strip_linear(&self) -> Poly3 {
        Poly3 {
            linear: Vec::new(),
            ..self.clone()
        }
    }

    /// Replace the linear part with the monomials selected by `mask`.
    pub fn with_linear_mask(&self, mask: u64) -> Result<Poly3> {
        if self.n < 64 && mask >> self.n != 0 {
            return Err(Error::InvalidArgument(format!(
                "linear mask {mask:#x} has bits beyond {} variables",
                self.n
            )));
        }
        Ok(Poly3 {
            linear: (0..self.n).filter(|&i| (mask >> i) & 1 == 1).collect(),
            ..self.clone()
        })
    }

    /// Fix `x_j = b` and drop the variable, renumbering indices above `j`.
    ///
    /// Fixing a variable that appears as a linear monomial to 1 leaves a
    /// constant, which is returned separately: the restricted function is
    /// `poly(y) + constant`.
    pub fn restrict(&self, j: usize, b: bool) -> Result<(Poly3, bool)> {
        if j >= self.n {
            return Err(Error::IndexOutOfRange { index: j, n: self.n });
        }
        let shift = |i: usize| if i > j { i - 1 } else { i };
        let mut constant = false;
        let mut terms: Vec<Vec<usize>> = Vec::new();
        for t in self.terms() {
            if t.contains(&j) {
                if !b {
                    continue;
                }
                let rest: Vec<usize> = t.iter().filter(|&&i| i != j).map(|&i| shift(i)).collect();
                if rest.is_empty() {
                    constant = !constant;
                } else {
                    terms.push(rest);
                }
            } else {
                terms.push(t.iter().map(|&i| shift(i)).collect());
            }
        }
        Ok((Poly3::from_terms(self.n - 1, terms)?, constant))
    }

    /// Parse the text grammar (`x1 + x2*x3`, 1-based indices) on `n` variables.
    pub fn parse(text: &str, n: usize) -> Result<Self> {
        let mut terms: Vec<Vec<usize>> = Vec::new();
        let bytes = text.as_bytes();
        let mut pos = 0usize;
        let skip_ws = |pos: &mut usize| {
            while *pos < bytes.len() && bytes[*pos].is_ascii_whitespace() {
                *pos += 1;
            }
        };
        skip_ws(&mut pos);
        if pos == bytes.len() {
            return Poly3::zero(n);
        }
        if bytes[pos] == b'0' {
            let mut end = pos + 1;
            skip_ws(&mut end);
            if end == bytes.len() {
                return Poly3::zero(n);
            }
        }
        loop {
            let mut factors = Vec::new();
            loop {
                skip_ws(&mut pos);
                match bytes.get(pos) {
                    Some(b'x') | Some(b'X') => pos += 1,
                    Some(b'1') => return Err(Error::ConstantTerm),
                    Some(&c) => {
                        return Err(Error::Parse {
                            position: pos,
                            message: format!("expected 'x', found '{}'", c as char),
                        })
                    }
                    None => {
                        return Err(Error::Parse {
                            position: pos,
                            message: "expected a variable, found end of input".into(),
                        })
                    }
                }
                let start = pos;
                while pos < bytes.len() && bytes[pos].is_ascii_digit() {
                    pos += 1;
                }
                if start == pos {
                    return Err(Error::Parse {
                        position: pos,
                        message: "expected a variable index".into(),
                    });
                }
                let idx: usize = text[start..pos].parse().map_err(|_| Error::Parse {
                    position: start,
                    message: "variable index too large".into(),
                })?;
                if idx == 0 || idx > n {
                    return Err(Error::IndexOutOfRange {
                        index: idx.wrapping_sub(1),
                        n,
                    });
                }
                factors.push(idx - 1);
                skip_ws(&mut pos);
                if bytes.get(pos) == Some(&b'*') {
                    pos += 1;
                } else {
                    break;
                }
            }
            terms.push(factors);
            skip_ws(&mut pos);
            match bytes.get(pos) {
                Some(b'+') => pos += 1,
                None => break,
                Some(&c) => {
                    return Err(Error::Parse {
                        position: pos,
                        message: format!("expected '+' or end of input, found '{}'", c as char),
                    })
                }
            }
        }
        Poly3::from_terms(n, terms)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("polynomial serialises")
    }

    pub fn from_json(s: &str) -> Result<Self> {
        Ok(serde_json::from_str(s)?)
    }
}

/// Canonical term text, e.g. `x1 + x2 + x1*x2 + x1*x2*x3`; `0` when empty.
impl fmt::Display for Poly3 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let text: Vec<String> = self
            .terms()
            .map(|t| {
                t.iter()
                    .map(|i| format!("x{}", i + 1))
                    .collect::<Vec<_>>()
                    .join("*")
            })
            .collect();
        write!(f, "{}", text.join(" + "))
    }
}

/// Parses text with `n` inferred as the largest index used.
impl FromStr for Poly3 {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let mut n = 0usize;
        let mut cur = None::<usize>;
        for c in s.chars().chain(std::iter::once(' ')) {
            match (c.to_digit(10), cur) {
                (Some(d), Some(v)) => cur = Some(v * 10 + d as usize),
                (Some(d), None) => cur = Some(d as usize),
                (None, Some(v)) => {
                    n = n.max(v);
                    cur = None;
                }
                (None, None) => {}
            }
        }
        Poly3::parse(s, n.min(MAX_VARS))
    }
}

/// Every monomial of degree 1..=3 on `n` variables in canonical order.
pub fn canonical_monomials(n: usize) -> impl Iterator<Item = Vec<usize>> {
    let lin = (0..n).map(|i| vec![i]);
    let quad = (0..n).flat_map(move |i| (i + 1..n).map(move |j| vec![i, j]));
    let cub = (0..n).flat_map(move |i| {
        (i + 1..n).flat_map(move |j| (j + 1..n).map(move |k| vec![i, j, k]))
    });
    lin.chain(quad).chain(cub)
}

const LOW_MASKS: [u64; 6] = [
    0x5555_5555_5555_5555,
    0x3333_3333_3333_3333,
    0x0F0F_0F0F_0F0F_0F0F,
    0x00FF_00FF_00FF_00FF,
    0x0000_FFFF_0000_FFFF,
    0x0000_0000_FFFF_FFFF,
];

/// In-place transform `t[x] = XOR_{S ⊆ x} a[S]` over a packed bitset of
/// `2^n` entries (ANF coefficients in, truth table out). Involutive.
pub fn xor_subset_transform(words: &mut [u64], n: usize) {
    for (i, &lo) in LOW_MASKS.iter().enumerate().take(n.min(6)) {
        let s = 1u32 << i;
        for w in words.iter_mut() {
            *w ^= (*w & lo) << s;
        }
    }
    if n < 6 {
        let keep = (1u64 << (1u32 << n)) - 1;
        words[0] &= keep;
        return;
    }
    let nwords = words.len();
    let mut stride = 1usize;
    while stride < nwords {
        for base in (0..nwords).step_by(2 * stride) {
            let (lo, hi) = words[base..base + 2 * stride].split_at_mut(stride);
            for (a, b) in lo.iter().zip(hi.iter_mut()) {
                *b ^= *a;
            }
        }
        stride <<= 1;
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn paper_f() -> Poly3 {
        Poly3::parse("x1 + x2 + x1*x2 + x1*x2*x3", 3).unwrap()
    }

    #[test]
    fn evaluate_examples() {
        let empty = Poly3::zero(3).unwrap();
        assert!(!empty.evaluate(&[true, false, true]).unwrap());
        assert!(paper_f().evaluate(&[true, true, false]).unwrap());
        let cube = Poly3::parse("x1*x2*x3", 3).unwrap();
        assert!(cube.evaluate(&[true, true, true]).unwrap());
        assert_eq!(
            paper_f().evaluate(&[true, true]),
            Err(Error::BitLength { expected: 3, got: 2 })
        );
    }

    #[test]
    fn gap_and_zero_examples() {
        let empty = Poly3::zero(3).unwrap();
        assert_eq!(empty.gap_bruteforce().unwrap(), GapValue(8));
        assert_eq!(empty.zeros_count().unwrap(), 8);
        let x1 = Poly3::parse("x1", 1).unwrap();
        assert_eq!(x1.gap_bruteforce().unwrap(), GapValue(0));
        assert_eq!(x1.zeros_count().unwrap(), 1);
        assert_eq!(paper_f().gap_bruteforce().unwrap(), GapValue(-2));
        assert_eq!(paper_f().zeros_count().unwrap(), 3);
    }

    #[test]
    fn gap_over_cap_is_refused() {
        let big = Poly3::parse("x1", 29).unwrap();
        assert!(matches!(
            big.gap_bruteforce(),
            Err(Error::CapExceeded { requested: 29, .. })
        ));
    }

    #[test]
    fn transform_matches_pointwise_for_small_and_large_n() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for n in 1..=13 {
            for _ in 0..10 {
                let f = Poly3::random(n, &mut rng).unwrap();
                assert_eq!(f.gap_bruteforce().unwrap(), f.gap_pointwise().unwrap());
            }
        }
    }

    #[test]
    fn linear_part_examples() {
        let f = Poly3::parse("x1 + x1*x2", 2).unwrap();
        assert_eq!(f.linear_mask(), 0b1);
        assert_eq!(f.strip_linear(), Poly3::parse("x1*x2", 2).unwrap());
        let g = Poly3::parse("x1*x2", 2).unwrap();
        assert_eq!(g.linear_mask(), 0);
        assert_eq!(g.strip_linear(), g);
        assert_eq!(paper_f().linear_mask(), 0b011);
        assert_eq!(
            paper_f().strip_linear(),
            Poly3::parse("x1*x2 + x1*x2*x3", 3).unwrap()
        );
    }

    #[test]
    fn restrict_examples() {
        let cube = Poly3::parse("x1*x2*x3", 3).unwrap();
        let (r0, c0) = cube.restrict(2, false).unwrap();
        assert!(r0.is_zero() && !c0 && r0.n() == 2);
        let (r1, c1) = cube.restrict(2, true).unwrap();
        assert_eq!(r1, Poly3::parse("x1*x2", 2).unwrap());
        assert!(!c1);
        let (rp, cp) = paper_f().restrict(2, true).unwrap();
        assert_eq!(rp, Poly3::parse("x1 + x2", 2).unwrap());
        assert!(!cp);
        assert_eq!(
            cube.restrict(3, true),
            Err(Error::IndexOutOfRange { index: 3, n: 3 })
        );
    }

    #[test]
    fn restrict_identity_holds_on_every_input() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..50 {
            let f = Poly3::random(5, &mut rng).unwrap();
            for j in 0..5 {
                for b in [false, true] {
                    let (r, c) = f.restrict(j, b).unwrap();
                    for y in 0..16u64 {
                        let low = y & ((1 << j) - 1);
                        let high = (y >> j) << (j + 1);
                        let x = low | high | (u64::from(b) << j);
                        assert_eq!(f.eval_mask(x), r.eval_mask(y) ^ c);
                    }
                }
            }
        }
    }

    #[test]
    fn parse_examples_and_normalisation() {
        let f = paper_f();
        assert_eq!(f.linear(), &[0, 1]);
        assert_eq!(f.quadratic(), &[[0, 1]]);
        assert_eq!(f.cubic(), &[[0, 1, 2]]);
        assert!(Poly3::parse("", 2).unwrap().is_zero());
        assert_eq!(
            Poly3::parse("x1*x1*x2", 2).unwrap().to_string(),
            "x1*x2"
        );
        assert!(Poly3::parse("x1 + x1", 1).unwrap().is_zero());
        assert_eq!(f.to_string(), "x1 + x2 + x1*x2 + x1*x2*x3");
    }

    #[test]
    fn parse_errors() {
        assert!(matches!(
            Poly3::parse("x1 + y2", 2),
            Err(Error::Parse { position: 5, .. })
        ));
        assert!(matches!(
            Poly3::parse("x3", 2),
            Err(Error::IndexOutOfRange { index: 2, n: 2 })
        ));
        assert_eq!(Poly3::parse("1 + x1", 2), Err(Error::ConstantTerm));
        assert!(matches!(Poly3::parse("x1 +", 2), Err(Error::Parse { .. })));
        assert!(Poly3::parse("x1*x2*x3*x4", 4).is_err());
    }

    #[test]
    fn json_format_is_canonical() {
        let f = paper_f();
        let s = f.to_json();
        assert_eq!(
            s,
            r#"{"n":3,"linear":[0,1],"quadratic":[[0,1]],"cubic":[[0,1,2]]}"#
        );
        assert_eq!(Poly3::from_json(&s).unwrap(), f);
        let messy = r#"{"n":3,"linear":[1,0,1,1],"quadratic":[[1,0]]}"#;
        let p = Poly3::from_json(messy).unwrap();
        assert_eq!(p.linear(), &[0, 1]);
        assert_eq!(p.quadratic(), &[[0, 1]]);
        assert!(Poly3::from_json(r#"{"n":2,"linear":[2]}"#).is_err());
    }

    #[test]
    fn random_is_deterministic_and_bounded() {
        let a = Poly3::random(3, &mut ChaCha8Rng::seed_from_u64(5)).unwrap();
        let b = Poly3::random(3, &mut ChaCha8Rng::seed_from_u64(5)).unwrap();
        assert_eq!(a, b);
        assert!(a.term_count() as u64 <= term_capacity(3));
        let mut seen = [0usize; 2];
        for s in 0..200 {
            let p = Poly3::random(1, &mut ChaCha8Rng::seed_from_u64(s)).unwrap();
            seen[p.term_count()] += 1;
        }
        assert!(seen[0] > 0 && seen[1] > 0);
    }

    #[test]
    fn term_inclusion_frequency_is_one_half() {
        let mut hits = 0;
        let trials = 10_000;
        for s in 0..trials {
            let p = Poly3::random(3, &mut ChaCha8Rng::seed_from_u64(s)).unwrap();
            if p.quadratic().contains(&[0, 1]) {
                hits += 1;
            }
        }
        let freq = hits as f64 / trials as f64;
        assert!((freq - 0.5).abs() < 0.02, "frequency {freq}");
    }

    #[test]
    fn from_index_enumerates_every_polynomial_once() {
        let n = 3;
        let g = term_capacity(n);
        let all: BTreeSet<String> = (0..1u128 << g)
            .map(|i| Poly3::from_index(n, i).unwrap().to_string())
            .collect();
        assert_eq!(all.len(), 1 << g);
    }

    #[test]
    fn from_str_infers_variable_count() {
        let f: Poly3 = "x2*x5".parse().unwrap();
        assert_eq!(f.n(), 5);
    }
}
