//! Dense integer matrices with exact determinants and invariant factors.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct IntegerMatrix {
    rows: usize,
    cols: usize,
    entries: Vec<BigInt>,
}

impl IntegerMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        IntegerMatrix {
            rows,
            cols,
            entries: vec![BigInt::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.set(i, i, BigInt::one());
        }
        m
    }

    pub fn from_rows<T: Into<BigInt> + Clone>(rows: &[Vec<T>]) -> Result<Self> {
        let cols = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|r| r.len() != cols) {
            return Err(Error::domain("ragged matrix rows"));
        }
        let entries = rows.iter().flatten().cloned().map(Into::into).collect();
        Ok(IntegerMatrix {
            rows: rows.len(),
            cols,
            entries,
        })
    }

    /// Builds a matrix whose `j`-th column is `columns[j]`.
    pub fn from_columns<T: Into<BigInt> + Clone>(columns: &[Vec<T>]) -> Result<Self> {
        let rows = columns.first().map_or(0, Vec::len);
        if columns.iter().any(|c| c.len() != rows) {
            return Err(Error::domain("ragged matrix columns"));
        }
        let mut m = Self::zeros(rows, columns.len());
        for (j, col) in columns.iter().enumerate() {
            for (i, x) in col.iter().enumerate() {
                m.set(i, j, x.clone().into());
            }
        }
        Ok(m)
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

    pub fn get(&self, i: usize, j: usize) -> &BigInt {
        &self.entries[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, value: BigInt) {
        self.entries[i * self.cols + j] = value;
    }

    pub fn row(&self, i: usize) -> &[BigInt] {
        &self.entries[i * self.cols..(i + 1) * self.cols]
    }

    pub fn column(&self, j: usize) -> Vec<BigInt> {
        (0..self.rows).map(|i| self.get(i, j).clone()).collect()
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t.set(j, i, self.get(i, j).clone());
            }
        }
        t
    }

    pub fn mul(&self, other: &IntegerMatrix) -> Result<Self> {
        if self.cols != other.rows {
            return Err(Error::domain(format!(
                "cannot multiply {}x{} by {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let mut out = Self::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for j in 0..other.cols {
                let s: BigInt = (0..self.cols)
                    .map(|l| self.get(i, l) * other.get(l, j))
                    .sum();
                out.set(i, j, s);
            }
        }
        Ok(out)
    }

    pub fn mul_vec(&self, v: &[BigInt]) -> Vec<BigInt> {
        assert_eq!(v.len(), self.cols, "vector length mismatch");
        (0..self.rows)
            .map(|i| self.row(i).iter().zip(v).map(|(a, b)| a * b).sum())
            .collect()
    }

    pub fn neg(&self) -> Self {
        IntegerMatrix {
            rows: self.rows,
            cols: self.cols,
            entries: self.entries.iter().map(|x| -x).collect(),
        }
    }

    pub fn is_symmetric(&self) -> bool {
        self.is_square()
            && (0..self.rows).all(|i| (0..i).all(|j| self.get(i, j) == self.get(j, i)))
    }

    pub fn submatrix(&self, rows: &[usize], cols: &[usize]) -> Self {
        let mut m = Self::zeros(rows.len(), cols.len());
        for (a, &i) in rows.iter().enumerate() {
            for (b, &j) in cols.iter().enumerate() {
                m.set(a, b, self.get(i, j).clone());
            }
        }
        m
    }

    /// Fraction-free (Bareiss) elimination with row pivoting.
    pub fn determinant(&self) -> Result<BigInt> {
        if !self.is_square() {
            return Err(Error::domain("determinant of a non-square matrix"));
        }
        let n = self.rows;
        if n == 0 {
            return Ok(BigInt::one());
        }
        let mut a: Vec<Vec<BigInt>> = (0..n).map(|i| self.row(i).to_vec()).collect();
        let mut sign = BigInt::one();
        let mut prev = BigInt::one();
        for k in 0..n - 1 {
            if a[k][k].is_zero() {
                match (k + 1..n).find(|&i| !a[i][k].is_zero()) {
                    Some(p) => {
                        a.swap(k, p);
                        sign = -sign;
                    }
                    None => return Ok(BigInt::zero()),
                }
            }
            for i in k + 1..n {
                for j in k + 1..n {
                    let v = &a[i][j] * &a[k][k] - &a[i][k] * &a[k][j];
                    a[i][j] = v / &prev;
                }
                a[i][k] = BigInt::zero();
            }
            prev = a[k][k].clone();
        }
        Ok(sign * &a[n - 1][n - 1])
    }

    /// Determinants of the leading `1x1, 2x2, ..., nxn` blocks.
    pub fn leading_principal_minors(&self) -> Result<Vec<BigInt>> {
        if !self.is_square() {
            return Err(Error::domain("principal minors of a non-square matrix"));
        }
        let idx: Vec<usize> = (0..self.rows).collect();
        (1..=self.rows)
            .map(|m| self.submatrix(&idx[..m], &idx[..m]).determinant())
            .collect()
    }

    /// Sylvester's criterion for `-self`: leading minors alternate in sign
    /// starting negative.
    pub fn is_negative_definite(&self) -> bool {
        if !self.is_symmetric() {
            return false;
        }
        match self.leading_principal_minors() {
            Ok(minors) => minors.iter().enumerate().all(|(m, d)| {
                if m % 2 == 0 {
                    d.is_negative()
                } else {
                    d.is_positive()
                }
            }),
            Err(_) => false,
        }
    }

    /// Nonzero invariant factors `d1 | d2 | ...` of the Smith normal form.
    pub fn invariant_factors(&self) -> Vec<BigInt> {
        let mut a: Vec<Vec<BigInt>> = (0..self.rows).map(|i| self.row(i).to_vec()).collect();
        let (m, n) = (self.rows, self.cols);
        let mut factors = Vec::new();
        let mut t = 0;
        while t < m.min(n) {
            // pivot on the smallest nonzero entry of the remaining block
            let Some((pi, pj)) = smallest_nonzero(&a, t) else {
                break;
            };
            a.swap(t, pi);
            for row in a.iter_mut() {
                row.swap(t, pj);
            }
            loop {
                let mut clean = true;
                for i in t + 1..m {
                    if !a[i][t].is_zero() {
                        let q = a[i][t].div_floor(&a[t][t]);
                        let (top, rest) = a.split_at_mut(i);
                        for (x, p) in rest[0][t..].iter_mut().zip(&top[t][t..]) {
                            *x -= &q * p;
                        }
                        if !a[i][t].is_zero() {
                            clean = false;
                        }
                    }
                }
                for j in t + 1..n {
                    if !a[t][j].is_zero() {
                        let q = a[t][j].div_floor(&a[t][t]);
                        for row in a.iter_mut().skip(t) {
                            let v = &row[j] - &q * &row[t];
                            row[j] = v;
                        }
                        if !a[t][j].is_zero() {
                            clean = false;
                        }
                    }
                }
                if clean {
                    // the pivot must also divide the rest of the block
                    let bad = (t + 1..m)
                        .flat_map(|i| (t + 1..n).map(move |j| (i, j)))
                        .find(|&(i, j)| !(&a[i][j] % &a[t][t]).is_zero());
                    match bad {
                        None => break,
                        Some((i, _)) => {
                            let (top, rest) = a.split_at_mut(i);
                            for (x, y) in top[t][t..].iter_mut().zip(&rest[0][t..]) {
                                *x += y;
                            }
                        }
                    }
                }
                let (pi, pj) = smallest_nonzero(&a, t).expect("block still has a nonzero entry");
                a.swap(t, pi);
                for row in a.iter_mut() {
                    row.swap(t, pj);
                }
            }
            factors.push(a[t][t].abs());
            t += 1;
        }
        factors
    }
}

fn smallest_nonzero(a: &[Vec<BigInt>], t: usize) -> Option<(usize, usize)> {
    let mut best: Option<(usize, usize)> = None;
    for (i, row) in a.iter().enumerate().skip(t) {
        for (j, x) in row.iter().enumerate().skip(t) {
            if !x.is_zero() && best.is_none_or(|(bi, bj)| x.abs() < a[bi][bj].abs()) {
                best = Some((i, j));
            }
        }
    }
    best
}

impl fmt::Debug for IntegerMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for i in 0..self.rows {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{:?}", self.row(i).iter().map(|x| x.to_string()).collect::<Vec<_>>())?;
        }
        write!(f, "]")
    }
}

impl fmt::Display for IntegerMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.rows {
            let line: Vec<String> = self.row(i).iter().map(BigInt::to_string).collect();
            writeln!(f, "{}", line.join(" "))?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn m(rows: &[&[i64]]) -> IntegerMatrix {
        IntegerMatrix::from_rows(&rows.iter().map(|r| r.to_vec()).collect::<Vec<_>>()).unwrap()
    }

    /// Permutation expansion; only usable for tiny matrices.
    fn leibniz(a: &IntegerMatrix) -> BigInt {
        fn perms(n: usize) -> Vec<Vec<usize>> {
            if n == 0 {
                return vec![vec![]];
            }
            let mut out = Vec::new();
            for p in perms(n - 1) {
                for pos in 0..n {
                    let mut q = p.clone();
                    q.insert(pos, n - 1);
                    out.push(q);
                }
            }
            out
        }
        let n = a.rows();
        perms(n)
            .into_iter()
            .map(|p| {
                let inversions = (0..n)
                    .flat_map(|i| (i + 1..n).map(move |j| (i, j)))
                    .filter(|&(i, j)| p[i] > p[j])
                    .count();
                let prod: BigInt = (0..n).map(|i| a.get(i, p[i]).clone()).product();
                if inversions % 2 == 0 {
                    prod
                } else {
                    -prod
                }
            })
            .sum()
    }

    #[test]
    fn determinant_small_cases() {
        assert_eq!(m(&[&[-4]]).determinant().unwrap(), BigInt::from(-4));
        assert_eq!(m(&[&[-2, 1], &[1, -2]]).determinant().unwrap(), BigInt::from(3));
        assert_eq!(m(&[&[0, 1], &[1, 0]]).determinant().unwrap(), BigInt::from(-1));
        assert_eq!(m(&[&[1, 2], &[2, 4]]).determinant().unwrap(), BigInt::zero());
        assert!(m(&[&[1, 2]]).determinant().is_err());
    }

    #[test]
    fn determinant_matches_leibniz() {
        let a = m(&[
            &[0, 3, -1, 2],
            &[4, 0, 0, 1],
            &[-2, 5, 7, 0],
            &[1, 1, 0, -3],
        ]);
        assert_eq!(a.determinant().unwrap(), leibniz(&a));
    }

    #[test]
    fn negative_definite_by_minors() {
        assert!(m(&[&[-2, 1], &[1, -2]]).is_negative_definite());
        assert!(!m(&[&[-1, 1], &[1, -1]]).is_negative_definite());
        assert!(!m(&[&[2]]).is_negative_definite());
        assert!(!m(&[&[-2, 1], &[0, -2]]).is_negative_definite());
    }

    #[test]
    fn invariant_factors_examples() {
        let f = |a: IntegerMatrix| -> Vec<i64> {
            a.invariant_factors().iter().map(|x| x.try_into().unwrap()).collect()
        };
        assert_eq!(f(m(&[&[2]])), vec![2]);
        assert_eq!(f(m(&[&[1], &[1], &[1], &[1]])), vec![1]);
        assert_eq!(f(m(&[&[2, 0], &[0, 3]])), vec![1, 6]);
        assert_eq!(f(m(&[&[2, 4, 4], &[-6, 6, 12], &[10, -4, -16]])), vec![2, 6, 12]);
        assert_eq!(f(m(&[&[0, 0], &[0, 0]])), Vec::<i64>::new());
    }

    #[test]
    fn invariant_factor_product_is_determinant() {
        let a = m(&[&[1, -1, -1, 0], &[1, 0, 0, -1], &[0, 1, -1, 0], &[0, 0, 0, 1]]);
        let prod: BigInt = a.invariant_factors().into_iter().product();
        assert_eq!(prod, a.determinant().unwrap().abs());
        assert_eq!(prod, BigInt::from(2));
    }
}
