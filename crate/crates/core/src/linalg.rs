//! Dense matrices over a finite field.

use crate::coeffring::{FiniteField, GrElem};
use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FqMatrix {
    pub rows: usize,
    pub cols: usize,
    pub data: Vec<GrElem>,
}

impl FqMatrix {
    pub fn zeros(k: &FiniteField, rows: usize, cols: usize) -> Self {
        FqMatrix { rows, cols, data: vec![k.zero(); rows * cols] }
    }

    pub fn identity(k: &FiniteField, n: usize) -> Self {
        let mut m = FqMatrix::zeros(k, n, n);
        for i in 0..n {
            m.data[i * n + i] = k.one();
        }
        m
    }

    pub fn from_ints(k: &FiniteField, rows: usize, cols: usize, vals: &[i64]) -> Self {
        assert_eq!(vals.len(), rows * cols);
        FqMatrix { rows, cols, data: vals.iter().map(|&v| k.from_int(v)).collect() }
    }

    pub fn from_rows(rows: Vec<Vec<GrElem>>) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, |x| x.len());
        FqMatrix { rows: r, cols: c, data: rows.into_iter().flatten().collect() }
    }

    pub fn get(&self, i: usize, j: usize) -> &GrElem {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, x: GrElem) {
        self.data[i * self.cols + j] = x;
    }

    pub fn column(&self, j: usize) -> Vec<GrElem> {
        (0..self.rows).map(|i| self.get(i, j).clone()).collect()
    }

    pub fn add(&self, k: &FiniteField, o: &FqMatrix) -> FqMatrix {
        let data = self.data.iter().zip(&o.data).map(|(a, b)| k.add(a, b)).collect();
        FqMatrix { rows: self.rows, cols: self.cols, data }
    }

    pub fn sub(&self, k: &FiniteField, o: &FqMatrix) -> FqMatrix {
        let data = self.data.iter().zip(&o.data).map(|(a, b)| k.sub(a, b)).collect();
        FqMatrix { rows: self.rows, cols: self.cols, data }
    }

    pub fn scale(&self, k: &FiniteField, s: &[u64]) -> FqMatrix {
        let data = self.data.iter().map(|a| k.mul(a, s)).collect();
        FqMatrix { rows: self.rows, cols: self.cols, data }
    }

    pub fn mul(&self, k: &FiniteField, o: &FqMatrix) -> FqMatrix {
        assert_eq!(self.cols, o.rows);
        let mut out = FqMatrix::zeros(k, self.rows, o.cols);
        for i in 0..self.rows {
            for l in 0..self.cols {
                let a = self.get(i, l);
                if k.is_zero(a) {
                    continue;
                }
                for j in 0..o.cols {
                    let idx = i * o.cols + j;
                    out.data[idx] = k.add(&out.data[idx], &k.mul(a, o.get(l, j)));
                }
            }
        }
        out
    }

    pub fn apply(&self, k: &FiniteField, x: &[GrElem]) -> Vec<GrElem> {
        (0..self.rows)
            .map(|i| {
                (0..self.cols).fold(k.zero(), |acc, j| k.add(&acc, &k.mul(self.get(i, j), &x[j])))
            })
            .collect()
    }

    pub fn transpose(&self) -> FqMatrix {
        let mut data = Vec::with_capacity(self.data.len());
        for j in 0..self.cols {
            for i in 0..self.rows {
                data.push(self.get(i, j).clone());
            }
        }
        FqMatrix { rows: self.cols, cols: self.rows, data }
    }

    pub fn pow(&self, k: &FiniteField, mut e: u64) -> FqMatrix {
        let mut base = self.clone();
        let mut acc = FqMatrix::identity(k, self.rows);
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(k, &base);
            }
            base = base.mul(k, &base);
            e >>= 1;
        }
        acc
    }

    /// `I + A + ... + A^(n-1)`, by doubling.
    pub fn geometric_sum(&self, k: &FiniteField, n: u64) -> FqMatrix {
        let id = FqMatrix::identity(k, self.rows);
        if n == 0 {
            return FqMatrix::zeros(k, self.rows, self.cols);
        }
        if n % 2 == 1 {
            // S(n) = I + A S(n-1)
            return id.add(k, &self.mul(k, &self.geometric_sum(k, n - 1)));
        }
        // S(2m) = S(m) (I + A^m)
        let half = self.geometric_sum(k, n / 2);
        half.mul(k, &id.add(k, &self.pow(k, n / 2)))
    }

    pub fn hstack(&self, o: &FqMatrix) -> FqMatrix {
        assert_eq!(self.rows, o.rows);
        let mut rows = Vec::new();
        for i in 0..self.rows {
            let mut row: Vec<GrElem> = (0..self.cols).map(|j| self.get(i, j).clone()).collect();
            row.extend((0..o.cols).map(|j| o.get(i, j).clone()));
            rows.push(row);
        }
        FqMatrix { rows: self.rows, cols: self.cols + o.cols, data: rows.into_iter().flatten().collect() }
    }

    pub fn vstack(&self, o: &FqMatrix) -> FqMatrix {
        assert_eq!(self.cols, o.cols);
        let mut data = self.data.clone();
        data.extend(o.data.iter().cloned());
        FqMatrix { rows: self.rows + o.rows, cols: self.cols, data }
    }

    /// Reduced row echelon form and pivot columns.
    pub fn rref(&self, k: &FiniteField) -> (FqMatrix, Vec<usize>) {
        let mut m = self.clone();
        let mut pivots = Vec::new();
        let mut row = 0;
        for col in 0..m.cols {
            if row == m.rows {
                break;
            }
            let Some(pr) = (row..m.rows).find(|&i| !k.is_zero(m.get(i, col))) else {
                continue;
            };
            for j in 0..m.cols {
                m.data.swap(row * m.cols + j, pr * m.cols + j);
            }
            let inv = k.inv(m.get(row, col)).expect("nonzero pivot");
            for j in 0..m.cols {
                let x = k.mul(m.get(row, j), &inv);
                m.set(row, j, x);
            }
            for i in 0..m.rows {
                if i == row || k.is_zero(m.get(i, col)) {
                    continue;
                }
                let f = m.get(i, col).clone();
                for j in 0..m.cols {
                    let x = k.sub(m.get(i, j), &k.mul(&f, m.get(row, j)));
                    m.set(i, j, x);
                }
            }
            pivots.push(col);
            row += 1;
        }
        (m, pivots)
    }

    pub fn rank(&self, k: &FiniteField) -> usize {
        self.rref(k).1.len()
    }

    /// Basis of the right kernel.
    pub fn kernel(&self, k: &FiniteField) -> Vec<Vec<GrElem>> {
        let (m, pivots) = self.rref(k);
        let free: Vec<usize> = (0..self.cols).filter(|c| !pivots.contains(c)).collect();
        free.iter()
            .map(|&f| {
                let mut v = vec![k.zero(); self.cols];
                v[f] = k.one();
                for (r, &pc) in pivots.iter().enumerate() {
                    v[pc] = k.neg(m.get(r, f));
                }
                v
            })
            .collect()
    }

    pub fn inverse(&self, k: &FiniteField) -> Result<FqMatrix> {
        let n = self.rows;
        let aug = self.hstack(&FqMatrix::identity(k, n));
        let (m, pivots) = aug.rref(k);
        if pivots.len() < n || pivots[n - 1] >= n {
            return Err(Error::NotInvertible);
        }
        let mut out = FqMatrix::zeros(k, n, n);
        for i in 0..n {
            for j in 0..n {
                out.set(i, j, m.get(i, n + j).clone());
            }
        }
        Ok(out)
    }
}

/// Rank of a list of vectors.
pub fn span_rank(k: &FiniteField, vectors: &[Vec<GrElem>]) -> usize {
    if vectors.is_empty() {
        return 0;
    }
    FqMatrix::from_rows(vectors.to_vec()).rank(k)
}

/// Coordinates of `x` in the span of `basis`, if it lies there.
pub fn solve_in_span(k: &FiniteField, basis: &[Vec<GrElem>], x: &[GrElem]) -> Option<Vec<GrElem>> {
    let n = basis.len();
    if n == 0 {
        return x.iter().all(|c| k.is_zero(c)).then(Vec::new);
    }
    let a = FqMatrix::from_rows(basis.to_vec()).transpose();
    let b = FqMatrix::from_rows(x.iter().map(|c| vec![c.clone()]).collect());
    let (m, pivots) = a.hstack(&b).rref(k);
    if pivots.contains(&n) {
        return None;
    }
    let mut sol = vec![k.zero(); n];
    for (r, &pc) in pivots.iter().enumerate() {
        sol[pc] = m.get(r, n).clone();
    }
    Some(sol)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn kernel_and_inverse() {
        let k = FiniteField::new(5, 1, None).unwrap();
        let a = FqMatrix::from_ints(&k, 2, 3, &[1, 2, 3, 2, 4, 6]);
        let ker = a.kernel(&k);
        assert_eq!(ker.len(), 2);
        for v in &ker {
            assert!(a.apply(&k, v).iter().all(|c| k.is_zero(c)));
        }
        let b = FqMatrix::from_ints(&k, 2, 2, &[1, 2, 3, 4]);
        let bi = b.inverse(&k).unwrap();
        assert_eq!(b.mul(&k, &bi), FqMatrix::identity(&k, 2));
        assert!(FqMatrix::from_ints(&k, 2, 2, &[1, 2, 2, 4]).inverse(&k).is_err());
    }

    #[test]
    fn geometric_sum_matches_naive() {
        let k = FiniteField::new(3, 1, None).unwrap();
        let a = FqMatrix::from_ints(&k, 2, 2, &[1, 1, 0, 1]);
        for n in 0..20u64 {
            let mut naive = FqMatrix::zeros(&k, 2, 2);
            for i in 0..n {
                naive = naive.add(&k, &a.pow(&k, i));
            }
            assert_eq!(a.geometric_sum(&k, n), naive);
        }
    }

    #[test]
    fn span_solution() {
        let k = FiniteField::new(3, 1, None).unwrap();
        let basis = vec![vec![k.from_int(1), k.from_int(0)], vec![k.from_int(1), k.from_int(1)]];
        let x = vec![k.from_int(2), k.from_int(1)];
        let c = solve_in_span(&k, &basis, &x).unwrap();
        assert_eq!(c, vec![k.from_int(1), k.from_int(1)]);
    }
}
