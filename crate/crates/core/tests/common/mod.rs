//! Independent oracles shared by the integration tests.
#![allow(dead_code)]

use qcs_core::Poly3;

/// `f(x)` straight from the term lists, bit `i` of `x` being variable `i`.
pub fn eval(f: &Poly3, x: u64) -> bool {
    let bit = |i: usize| (x >> i) & 1 == 1;
    let mut v = false;
    for &i in f.linear() {
        v ^= bit(i);
    }
    for &[i, j] in f.quadratic() {
        v ^= bit(i) && bit(j);
    }
    for &[i, j, k] in f.cubic() {
        v ^= bit(i) && bit(j) && bit(k);
    }
    v
}

/// `Σ_x (−1)^{f(x)}` by enumeration.
pub fn gap(f: &Poly3) -> i64 {
    (0..1u64 << f.n()).map(|x| if eval(f, x) { -1 } else { 1 }).sum()
}

pub fn ones(f: &Poly3) -> u64 {
    (0..1u64 << f.n()).filter(|&x| eval(f, x)).count() as u64
}

/// Permanent by expansion over all permutations.
pub fn permanent_by_permutations(a: &[Vec<i64>]) -> i128 {
    fn go(a: &[Vec<i64>], row: usize, used: &mut Vec<bool>) -> i128 {
        if row == a.len() {
            return 1;
        }
        let mut s = 0;
        for j in 0..a.len() {
            if !used[j] && a[row][j] != 0 {
                used[j] = true;
                s += i128::from(a[row][j]) * go(a, row + 1, used);
                used[j] = false;
            }
        }
        s
    }
    go(a, 0, &mut vec![false; a.len()])
}

/// YES / NO / non-promise from `gap² ≥ 2^{n−1}` and `gap² ≤ 2^{n−2}`.
pub fn promise_label(gap: i64, n: usize) -> Option<bool> {
    let g2 = (gap as i128) * (gap as i128);
    if 2 * g2 >= 1i128 << n {
        Some(true)
    } else if 4 * g2 <= 1i128 << n {
        Some(false)
    } else {
        None
    }
}
