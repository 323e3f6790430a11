//! Dense row-major matrices over `Complex64` and `i64`.
//!
//! JSON form is a list of rows. Complex entries are `[re, im]` pairs; plain
//! numbers are read as real entries.

use std::fmt;
use std::ops::{Index, IndexMut};

use num_complex::Complex64;
use serde::de::{self, Deserializer};
use serde::ser::Serializer;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq)]
pub struct ComplexMatrix {
    rows: usize,
    cols: usize,
    data: Vec<Complex64>,
}

impl ComplexMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        ComplexMatrix {
            rows,
            cols,
            data: vec![Complex64::new(0.0, 0.0); rows * cols],
        }
    }

    pub fn identity(d: usize) -> Self {
        let mut m = Self::zeros(d, d);
        for i in 0..d {
            m[(i, i)] = Complex64::new(1.0, 0.0);
        }
        m
    }

    pub fn from_rows(rows: Vec<Vec<Complex64>>) -> Result<Self> {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|row| row.len() != c) {
            return Err(Error::Dimension("ragged matrix rows".into()));
        }
        Ok(ComplexMatrix {
            rows: r,
            cols: c,
            data: rows.into_iter().flatten().collect(),
        })
    }

    pub fn from_real(rows: &[Vec<f64>]) -> Result<Self> {
        Self::from_rows(
            rows.iter()
                .map(|r| r.iter().map(|&x| Complex64::new(x, 0.0)).collect())
                .collect(),
        )
    }

    pub fn from_fn(rows: usize, cols: usize, f: impl Fn(usize, usize) -> Complex64) -> Self {
        let mut m = Self::zeros(rows, cols);
        for i in 0..rows {
            for j in 0..cols {
                m[(i, j)] = f(i, j);
            }
        }
        m
    }

    pub fn diag(values: &[Complex64]) -> Self {
        let mut m = Self::zeros(values.len(), values.len());
        for (i, &v) in values.iter().enumerate() {
            m[(i, i)] = v;
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn dim(&self) -> Result<usize> {
        if self.is_square() {
            Ok(self.rows)
        } else {
            Err(Error::Dimension(format!(
                "expected a square matrix, got {}×{}",
                self.rows, self.cols
            )))
        }
    }

    pub fn row(&self, i: usize) -> &[Complex64] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn to_rows(&self) -> Vec<Vec<Complex64>> {
        (0..self.rows).map(|i| self.row(i).to_vec()).collect()
    }

    pub fn adjoint(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |i, j| self[(j, i)].conj())
    }

    pub fn scale(&self, s: Complex64) -> Self {
        ComplexMatrix {
            data: self.data.iter().map(|&x| x * s).collect(),
            ..self.clone()
        }
    }

    pub fn scale_re(&self, s: f64) -> Self {
        self.scale(Complex64::new(s, 0.0))
    }

    fn zip_with(&self, other: &Self, f: impl Fn(Complex64, Complex64) -> Complex64) -> Result<Self> {
        if self.rows != other.rows || self.cols != other.cols {
            return Err(Error::Dimension(format!(
                "{}×{} vs {}×{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        Ok(ComplexMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&other.data).map(|(&a, &b)| f(a, b)).collect(),
        })
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.zip_with(other, |a, b| a + b)
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.zip_with(other, |a, b| a - b)
    }

    pub fn mul(&self, other: &Self) -> Result<Self> {
        if self.cols != other.rows {
            return Err(Error::Dimension(format!(
                "cannot multiply {}×{} by {}×{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let mut out = Self::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self[(i, k)];
                if a == Complex64::new(0.0, 0.0) {
                    continue;
                }
                for j in 0..other.cols {
                    out[(i, j)] += a * other[(k, j)];
                }
            }
        }
        Ok(out)
    }

    /// Largest entry modulus of `self − other`.
    pub fn max_abs_diff(&self, other: &Self) -> Result<f64> {
        Ok(self
            .sub(other)?
            .data
            .iter()
            .map(|x| x.norm())
            .fold(0.0, f64::max))
    }

    pub fn max_abs(&self) -> f64 {
        self.data.iter().map(|x| x.norm()).fold(0.0, f64::max)
    }

    pub fn frobenius(&self) -> f64 {
        self.data.iter().map(|x| x.norm_sqr()).sum::<f64>().sqrt()
    }

    /// `max |U†U − I|`.
    pub fn unitarity_defect(&self) -> Result<f64> {
        let d = self.dim()?;
        self.adjoint().mul(self)?.max_abs_diff(&Self::identity(d))
    }

    /// Sub-block starting at `(r0, c0)`.
    pub fn block(&self, r0: usize, c0: usize, rows: usize, cols: usize) -> Self {
        Self::from_fn(rows, cols, |i, j| self[(r0 + i, c0 + j)])
    }

    /// `[[a, b], [c, d]]` from four blocks.
    pub fn from_blocks(a: &Self, b: &Self, c: &Self, d: &Self) -> Result<Self> {
        if a.rows != b.rows || c.rows != d.rows || a.cols != c.cols || b.cols != d.cols {
            return Err(Error::Dimension("incompatible blocks".into()));
        }
        let (r, cc) = (a.rows + c.rows, a.cols + b.cols);
        Ok(Self::from_fn(r, cc, |i, j| match (i < a.rows, j < a.cols) {
            (true, true) => a[(i, j)],
            (true, false) => b[(i, j - a.cols)],
            (false, true) => c[(i - a.rows, j)],
            (false, false) => d[(i - a.rows, j - a.cols)],
        }))
    }

    pub fn from_json(s: &str) -> Result<Self> {
        Ok(serde_json::from_str(s)?)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("matrix serialises")
    }
}

impl Index<(usize, usize)> for ComplexMatrix {
    type Output = Complex64;
    fn index(&self, (i, j): (usize, usize)) -> &Complex64 {
        &self.data[i * self.cols + j]
    }
}

impl IndexMut<(usize, usize)> for ComplexMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut Complex64 {
        &mut self.data[i * self.cols + j]
    }
}

#[derive(Deserialize)]
#[serde(untagged)]
enum Entry {
    Real(f64),
    Pair([f64; 2]),
}

impl<'de> Deserialize<'de> for ComplexMatrix {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let rows: Vec<Vec<Entry>> = Vec::deserialize(d)?;
        let rows = rows
            .into_iter()
            .map(|r| {
                r.into_iter()
                    .map(|e| match e {
                        Entry::Real(x) => Complex64::new(x, 0.0),
                        Entry::Pair([re, im]) => Complex64::new(re, im),
                    })
                    .collect()
            })
            .collect();
        ComplexMatrix::from_rows(rows).map_err(de::Error::custom)
    }
}

impl Serialize for ComplexMatrix {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let rows: Vec<Vec<[f64; 2]>> = (0..self.rows)
            .map(|i| self.row(i).iter().map(|z| [z.re, z.im]).collect())
            .collect();
        rows.serialize(s)
    }
}

/// Square matrix of exact integers.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct IntMatrix {
    d: usize,
    data: Vec<i64>,
}

impl IntMatrix {
    pub fn zeros(d: usize) -> Self {
        IntMatrix {
            d,
            data: vec![0; d * d],
        }
    }

    pub fn identity(d: usize) -> Self {
        let mut m = Self::zeros(d);
        for i in 0..d {
            m[(i, i)] = 1;
        }
        m
    }

    pub fn from_rows(rows: Vec<Vec<i64>>) -> Result<Self> {
        let d = rows.len();
        if rows.iter().any(|r| r.len() != d) {
            return Err(Error::Dimension("integer matrix must be square".into()));
        }
        Ok(IntMatrix {
            d,
            data: rows.into_iter().flatten().collect(),
        })
    }

    pub fn dim(&self) -> usize {
        self.d
    }

    pub fn row(&self, i: usize) -> &[i64] {
        &self.data[i * self.d..(i + 1) * self.d]
    }

    pub fn to_rows(&self) -> Vec<Vec<i64>> {
        (0..self.d).map(|i| self.row(i).to_vec()).collect()
    }

    pub fn to_complex(&self) -> ComplexMatrix {
        ComplexMatrix::from_fn(self.d, self.d, |i, j| Complex64::new(self[(i, j)] as f64, 0.0))
    }

    /// Rows and columns reordered: entry `(i, j)` becomes
    /// `self[(rows[i], cols[j])]`.
    pub fn permuted(&self, rows: &[usize], cols: &[usize]) -> Self {
        let mut m = Self::zeros(self.d);
        for i in 0..self.d {
            for j in 0..self.d {
                m[(i, j)] = self[(rows[i], cols[j])];
            }
        }
        m
    }

    pub fn nonzeros(&self) -> usize {
        self.data.iter().filter(|&&x| x != 0).count()
    }

    pub fn from_json(s: &str) -> Result<Self> {
        let rows: Vec<Vec<i64>> = serde_json::from_str(s)?;
        Self::from_rows(rows)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(&self.to_rows()).expect("matrix serialises")
    }
}

impl Serialize for IntMatrix {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.to_rows().serialize(s)
    }
}

impl<'de> Deserialize<'de> for IntMatrix {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let rows: Vec<Vec<i64>> = Vec::deserialize(d)?;
        IntMatrix::from_rows(rows).map_err(de::Error::custom)
    }
}

impl Index<(usize, usize)> for IntMatrix {
    type Output = i64;
    fn index(&self, (i, j): (usize, usize)) -> &i64 {
        &self.data[i * self.d + j]
    }
}

impl IndexMut<(usize, usize)> for IntMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut i64 {
        &mut self.data[i * self.d + j]
    }
}

impl fmt::Display for IntMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.d {
            let row: Vec<String> = self.row(i).iter().map(|x| format!("{x:>3}")).collect();
            writeln!(f, "{}", row.join(" "))?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn multiplication_and_adjoint() {
        let a = ComplexMatrix::from_rows(vec![vec![c(1.0, 1.0), c(2.0, 0.0)], vec![c(0.0, -1.0), c(3.0, 0.0)]])
            .unwrap();
        let i = ComplexMatrix::identity(2);
        assert_eq!(a.mul(&i).unwrap(), a);
        assert_eq!(a.adjoint()[(0, 1)], c(0.0, 1.0));
        assert_eq!(a.adjoint().adjoint(), a);
        assert!(a.mul(&ComplexMatrix::zeros(3, 3)).is_err());
    }

    #[test]
    fn blocks_round_trip() {
        let a = ComplexMatrix::from_fn(4, 4, |i, j| c(i as f64, j as f64));
        let (tl, tr, bl, br) = (a.block(0, 0, 2, 2), a.block(0, 2, 2, 2), a.block(2, 0, 2, 2), a.block(2, 2, 2, 2));
        assert_eq!(ComplexMatrix::from_blocks(&tl, &tr, &bl, &br).unwrap(), a);
    }

    #[test]
    fn json_formats() {
        let m = ComplexMatrix::from_json("[[1, [0, 2]], [-1.5, [3, -4]]]").unwrap();
        assert_eq!(m[(0, 1)], c(0.0, 2.0));
        assert_eq!(m[(1, 0)], c(-1.5, 0.0));
        assert_eq!(ComplexMatrix::from_json(&m.to_json()).unwrap(), m);
        assert!(ComplexMatrix::from_json("[[1, 2], [3]]").is_err());
        let k = IntMatrix::from_json("[[1, 2], [3, 4]]").unwrap();
        assert_eq!(k[(1, 0)], 3);
        assert_eq!(IntMatrix::from_json(&k.to_json()).unwrap(), k);
        assert!(IntMatrix::from_json("[[1, 2]]").is_err());
    }

    #[test]
    fn identity_is_unitary() {
        assert_eq!(ComplexMatrix::identity(3).unitarity_defect().unwrap(), 0.0);
    }
}
