//! Dense matrices over the Gaussian rationals with exact elimination.

use num_traits::{One, Zero};

use crate::scalar::Scalar;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RationalMatrix {
    rows: usize,
    cols: usize,
    data: Vec<Scalar>,
}

impl RationalMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        RationalMatrix { rows, cols, data: vec![Scalar::zero(); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = RationalMatrix::zeros(n, n);
        for i in 0..n {
            m.set(i, i, Scalar::one());
        }
        m
    }

    pub fn from_rows(rows: Vec<Vec<Scalar>>) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        assert!(rows.iter().all(|row| row.len() == c), "ragged matrix rows");
        RationalMatrix { rows: r, cols: c, data: rows.into_iter().flatten().collect() }
    }

    /// Matrix with the given columns, each of length `rows`.
    pub fn from_columns(rows: usize, columns: Vec<Vec<Scalar>>) -> Self {
        let mut m = RationalMatrix::zeros(rows, columns.len());
        for (j, col) in columns.into_iter().enumerate() {
            assert_eq!(col.len(), rows, "column length");
            for (i, v) in col.into_iter().enumerate() {
                m.set(i, j, v);
            }
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &Scalar {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: Scalar) {
        self.data[i * self.cols + j] = v;
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(Zero::is_zero)
    }

    pub fn row(&self, i: usize) -> &[Scalar] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn column(&self, j: usize) -> Vec<Scalar> {
        (0..self.rows).map(|i| self.get(i, j).clone()).collect()
    }

    pub fn mul(&self, other: &RationalMatrix) -> RationalMatrix {
        assert_eq!(self.cols, other.rows, "dimension mismatch in matrix product");
        let mut out = RationalMatrix::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let b = other.get(k, j);
                    if !b.is_zero() {
                        let v = out.get(i, j) + &(a * b);
                        out.set(i, j, v);
                    }
                }
            }
        }
        out
    }

    pub fn mul_vec(&self, v: &[Scalar]) -> Vec<Scalar> {
        assert_eq!(v.len(), self.cols, "dimension mismatch in matrix-vector product");
        (0..self.rows)
            .map(|i| self.row(i).iter().zip(v).map(|(a, b)| a * b).sum())
            .collect()
    }

    /// Reduced row echelon form and pivot columns.
    pub fn rref(&self) -> (RationalMatrix, Vec<usize>) {
        let mut m = self.clone();
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..m.cols {
            if r == m.rows {
                break;
            }
            let Some(p) = (r..m.rows).find(|&i| !m.get(i, c).is_zero()) else {
                continue;
            };
            m.swap_rows(r, p);
            let inv = m.get(r, c).inv().expect("pivot is nonzero");
            for j in c..m.cols {
                let v = m.get(r, j) * &inv;
                m.set(r, j, v);
            }
            for i in 0..m.rows {
                if i == r || m.get(i, c).is_zero() {
                    continue;
                }
                let f = m.get(i, c).clone();
                for j in c..m.cols {
                    let v = m.get(i, j) - &(&f * m.get(r, j));
                    m.set(i, j, v);
                }
            }
            pivots.push(c);
            r += 1;
        }
        (m, pivots)
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for j in 0..self.cols {
            self.data.swap(a * self.cols + j, b * self.cols + j);
        }
    }

    pub fn rank(&self) -> usize {
        self.rref().1.len()
    }
}

/// Rank and a nullspace basis. Every returned vector `v` satisfies `M v = 0`
/// and `rank + basis.len() = cols`.
pub fn rank_nullspace(m: &RationalMatrix) -> (usize, Vec<Vec<Scalar>>) {
    let (r, pivots) = m.rref();
    let mut basis = Vec::new();
    let is_pivot = |c: usize| pivots.contains(&c);
    for free in (0..m.cols()).filter(|&c| !is_pivot(c)) {
        let mut v = vec![Scalar::zero(); m.cols()];
        v[free] = Scalar::one();
        for (row, &pc) in pivots.iter().enumerate() {
            v[pc] = -r.get(row, free);
        }
        basis.push(v);
    }
    (pivots.len(), basis)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn s(n: i64) -> Scalar {
        Scalar::from_int(n)
    }

    #[test]
    fn zero_matrix() {
        let m = RationalMatrix::zeros(3, 3);
        let (rank, ns) = rank_nullspace(&m);
        assert_eq!(rank, 0);
        assert_eq!(ns.len(), 3);
    }

    #[test]
    fn identity_matrix() {
        let (rank, ns) = rank_nullspace(&RationalMatrix::identity(4));
        assert_eq!(rank, 4);
        assert!(ns.is_empty());
    }

    #[test]
    fn empty_shapes() {
        let (rank, ns) = rank_nullspace(&RationalMatrix::zeros(0, 0));
        assert_eq!((rank, ns.len()), (0, 0));
        let (rank, ns) = rank_nullspace(&RationalMatrix::zeros(0, 2));
        assert_eq!((rank, ns.len()), (0, 2));
    }

    #[test]
    fn nullspace_vectors_are_annihilated() {
        let m = RationalMatrix::from_rows(vec![
            vec![s(1), s(2), s(3), s(4)],
            vec![s(2), s(4), s(6), s(8)],
            vec![s(0), s(1), Scalar::from_ratio(1, 2), s(-1)],
        ]);
        let (rank, ns) = rank_nullspace(&m);
        assert_eq!(rank, 2);
        assert_eq!(ns.len(), 2);
        for v in ns {
            assert!(m.mul_vec(&v).iter().all(Zero::is_zero));
        }
    }

    #[test]
    fn complex_entries() {
        // [[1, i], [i, -1]] has rank 1 over ℚ(i)
        let m = RationalMatrix::from_rows(vec![vec![s(1), Scalar::i()], vec![Scalar::i(), s(-1)]]);
        assert_eq!(m.rank(), 1);
    }
}
