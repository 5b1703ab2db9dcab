//! Dense matrices over a [`SeriesRing`].

use std::ops::{Index, IndexMut};

use super::field::Fq;
use super::linalg::FqMatrix;
use super::series::{SeriesRing, TruncSeries};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SeriesMatrix {
    rows: usize,
    cols: usize,
    data: Vec<TruncSeries>,
}

impl SeriesMatrix {
    pub fn zeros(ring: &SeriesRing, rows: usize, cols: usize) -> Self {
        SeriesMatrix {
            rows,
            cols,
            data: vec![ring.zero(); rows * cols],
        }
    }

    pub fn identity(ring: &SeriesRing, n: usize) -> Self {
        let mut m = SeriesMatrix::zeros(ring, n, n);
        for i in 0..n {
            m[(i, i)] = ring.one();
        }
        m
    }

    pub fn from_fn(rows: usize, cols: usize, mut g: impl FnMut(usize, usize) -> TruncSeries) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(g(i, j));
            }
        }
        SeriesMatrix { rows, cols, data }
    }

    /// Matrix with the given columns, each of length `rows`.
    pub fn from_cols(ring: &SeriesRing, rows: usize, cols: &[Vec<TruncSeries>]) -> Self {
        let mut m = SeriesMatrix::zeros(ring, rows, cols.len());
        for (j, col) in cols.iter().enumerate() {
            assert_eq!(col.len(), rows, "column has the wrong length");
            for (i, x) in col.iter().enumerate() {
                m[(i, j)] = ring.coerce(x);
            }
        }
        m
    }

    pub fn from_constant(ring: &SeriesRing, a: &FqMatrix) -> Self {
        SeriesMatrix::from_fn(a.rows(), a.cols(), |i, j| ring.constant(a[(i, j)]))
    }

    /// `diag(u^{e_0}, u^{e_1}, …)`, square of size `exps.len()`.
    pub fn diag_u_pows(ring: &SeriesRing, exps: &[usize]) -> Self {
        let n = exps.len();
        let mut m = SeriesMatrix::zeros(ring, n, n);
        for (i, &e) in exps.iter().enumerate() {
            m[(i, i)] = ring.u_pow(e);
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn col(&self, j: usize) -> Vec<TruncSeries> {
        (0..self.rows).map(|i| self[(i, j)].clone()).collect()
    }

    pub fn row(&self, i: usize) -> Vec<TruncSeries> {
        self.data[i * self.cols..(i + 1) * self.cols].to_vec()
    }

    pub fn columns(&self) -> Vec<Vec<TruncSeries>> {
        (0..self.cols).map(|j| self.col(j)).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(TruncSeries::is_zero)
    }

    /// Least valuation of an entry.
    pub fn min_val(&self) -> usize {
        self.data.iter().map(TruncSeries::val).min().unwrap_or(usize::MAX)
    }

    pub fn map(&self, mut g: impl FnMut(&TruncSeries) -> TruncSeries) -> SeriesMatrix {
        SeriesMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(&mut g).collect(),
        }
    }

    pub fn transpose(&self) -> SeriesMatrix {
        SeriesMatrix::from_fn(self.cols, self.rows, |i, j| self[(j, i)].clone())
    }

    pub fn add(&self, ring: &SeriesRing, other: &SeriesMatrix) -> SeriesMatrix {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols), "dimension mismatch");
        SeriesMatrix::from_fn(self.rows, self.cols, |i, j| ring.add(&self[(i, j)], &other[(i, j)]))
    }

    pub fn sub(&self, ring: &SeriesRing, other: &SeriesMatrix) -> SeriesMatrix {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols), "dimension mismatch");
        SeriesMatrix::from_fn(self.rows, self.cols, |i, j| ring.sub(&self[(i, j)], &other[(i, j)]))
    }

    pub fn neg(&self, ring: &SeriesRing) -> SeriesMatrix {
        self.map(|x| ring.neg(x))
    }

    pub fn scale(&self, ring: &SeriesRing, c: &TruncSeries) -> SeriesMatrix {
        self.map(|x| ring.mul(c, x))
    }

    pub fn mul(&self, ring: &SeriesRing, other: &SeriesMatrix) -> SeriesMatrix {
        assert_eq!(self.cols, other.rows, "dimension mismatch");
        let mut out = SeriesMatrix::zeros(ring, self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = &self[(i, k)];
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let b = &other[(k, j)];
                    if !b.is_zero() {
                        out[(i, j)] = ring.add(&out[(i, j)], &ring.mul(a, b));
                    }
                }
            }
        }
        out
    }

    pub fn mul_vec(&self, ring: &SeriesRing, v: &[TruncSeries]) -> Vec<TruncSeries> {
        assert_eq!(self.cols, v.len(), "dimension mismatch");
        (0..self.rows)
            .map(|i| {
                (0..self.cols).fold(ring.zero(), |acc, k| {
                    if self[(i, k)].is_zero() || v[k].is_zero() {
                        acc
                    } else {
                        ring.add(&acc, &ring.mul(&self[(i, k)], &v[k]))
                    }
                })
            })
            .collect()
    }

    /// Entrywise `σ`.
    pub fn frobenius(&self, ring: &SeriesRing) -> SeriesMatrix {
        self.map(|x| ring.frobenius(x))
    }

    /// Entrywise `σ^k` for `k ≥ 0`.
    pub fn frobenius_pow(&self, ring: &SeriesRing, k: u32) -> SeriesMatrix {
        self.map(|x| ring.frobenius_pow(x, k))
    }

    /// Entrywise `N`.
    pub fn derivation_n(&self, ring: &SeriesRing) -> SeriesMatrix {
        self.map(|x| ring.derivation_n(x))
    }

    /// Entries reduced mod `u^k`.
    pub fn truncate(&self, ring: &SeriesRing, k: usize) -> SeriesMatrix {
        self.map(|x| ring.truncate(x, k))
    }

    /// The same entries read in a ring of another precision.
    pub fn coerce(&self, ring: &SeriesRing) -> SeriesMatrix {
        self.map(|x| ring.coerce(x))
    }

    /// Matrix of the coefficients of `u^k`.
    pub fn coeff_matrix(&self, k: usize) -> FqMatrix {
        let mut m = FqMatrix::zeros(self.rows, self.cols);
        for i in 0..self.rows {
            for j in 0..self.cols {
                m[(i, j)] = self[(i, j)].coeff(k);
            }
        }
        m
    }

    /// Reduction mod `u`.
    pub fn constant_part(&self) -> FqMatrix {
        self.coeff_matrix(0)
    }

    pub fn select_cols(&self, idx: &[usize]) -> SeriesMatrix {
        SeriesMatrix::from_fn(self.rows, idx.len(), |i, j| self[(i, idx[j])].clone())
    }

    pub fn select_rows(&self, idx: &[usize]) -> SeriesMatrix {
        SeriesMatrix::from_fn(idx.len(), self.cols, |i, j| self[(idx[i], j)].clone())
    }

    pub fn hstack(&self, other: &SeriesMatrix) -> SeriesMatrix {
        assert_eq!(self.rows, other.rows, "row counts differ");
        SeriesMatrix::from_fn(self.rows, self.cols + other.cols, |i, j| {
            if j < self.cols {
                self[(i, j)].clone()
            } else {
                other[(i, j - self.cols)].clone()
            }
        })
    }

    pub fn vstack(&self, other: &SeriesMatrix) -> SeriesMatrix {
        assert_eq!(self.cols, other.cols, "column counts differ");
        SeriesMatrix::from_fn(self.rows + other.rows, self.cols, |i, j| {
            if i < self.rows {
                self[(i, j)].clone()
            } else {
                other[(i - self.rows, j)].clone()
            }
        })
    }

    /// Block-diagonal sum.
    pub fn direct_sum(&self, ring: &SeriesRing, other: &SeriesMatrix) -> SeriesMatrix {
        let mut m = SeriesMatrix::zeros(ring, self.rows + other.rows, self.cols + other.cols);
        for i in 0..self.rows {
            for j in 0..self.cols {
                m[(i, j)] = self[(i, j)].clone();
            }
        }
        for i in 0..other.rows {
            for j in 0..other.cols {
                m[(self.rows + i, self.cols + j)] = other[(i, j)].clone();
            }
        }
        m
    }

    /// Apply `g` to every coefficient of every entry.
    pub fn map_coeffs(&self, ring: &SeriesRing, g: impl Fn(Fq) -> Fq) -> SeriesMatrix {
        self.map(|x| ring.from_coeffs(&x.coeffs().iter().map(|&c| g(c)).collect::<Vec<_>>()))
    }
}

impl Index<(usize, usize)> for SeriesMatrix {
    type Output = TruncSeries;
    fn index(&self, (i, j): (usize, usize)) -> &TruncSeries {
        &self.data[i * self.cols + j]
    }
}

impl IndexMut<(usize, usize)> for SeriesMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut TruncSeries {
        &mut self.data[i * self.cols + j]
    }
}
