//! Smith normal form over `F_q[u]/u^P`.
//!
//! The ring is a quotient of the discrete valuation ring `F_q[[u]]`, so every
//! matrix is equivalent to `diag(u^{e_1}, u^{e_2}, …)` with `e_1 ≤ e_2 ≤ …`.
//! An exponent equal to `P` stands for a zero divisor that is zero mod `u^P`.

use super::series::{SeriesRing, TruncSeries};
use super::smatrix::SeriesMatrix;
use super::ArithError;

/// `U·M·V = D` with `D = diag(u^{exponents})` (rectangular), `U`, `V` invertible.
#[derive(Clone, Debug)]
pub struct SmithForm {
    pub u: SeriesMatrix,
    pub u_inv: SeriesMatrix,
    pub v: SeriesMatrix,
    pub v_inv: SeriesMatrix,
    /// Nondecreasing, length `min(rows, cols)`, each at most `P`.
    pub exponents: Vec<usize>,
    prec: usize,
}

impl SmithForm {
    /// Number of exponents below the precision.
    pub fn rank(&self) -> usize {
        self.exponents.iter().filter(|&&e| e < self.prec).count()
    }

    pub fn prec(&self) -> usize {
        self.prec
    }

    /// The diagonal matrix `D`.
    pub fn diagonal(&self, ring: &SeriesRing) -> SeriesMatrix {
        let mut d = SeriesMatrix::zeros(ring, self.u.rows(), self.v.rows());
        for (i, &e) in self.exponents.iter().enumerate() {
            d[(i, i)] = ring.u_pow(e);
        }
        d
    }

    /// Some `X` with `M·X = Y`, if one exists.
    ///
    /// Writing `W = U·Y`, a solution exists iff `u^{e_i} | W_i` for every row
    /// (with `W_i = 0` past the diagonal); then `X = V·Z`, `Z_i = W_i / u^{e_i}`.
    pub fn solve(&self, ring: &SeriesRing, y: &SeriesMatrix) -> Option<SeriesMatrix> {
        let w = self.u.mul(ring, y);
        let n = self.v.rows();
        let mut z = SeriesMatrix::zeros(ring, n, y.cols());
        for i in 0..w.rows() {
            let e = self.exponents.get(i).copied().unwrap_or(self.prec);
            for j in 0..y.cols() {
                let wij = &w[(i, j)];
                if wij.val() < e {
                    return None;
                }
                if i < n {
                    z[(i, j)] = ring.shift_down(wij, e);
                }
            }
        }
        Some(self.v.mul(ring, &z))
    }
}

struct Work<'a> {
    ring: &'a SeriesRing,
    d: SeriesMatrix,
    u: SeriesMatrix,
    u_inv: SeriesMatrix,
    v: SeriesMatrix,
    v_inv: SeriesMatrix,
}

impl Work<'_> {
    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for m in [&mut self.d, &mut self.u] {
            for j in 0..m.cols() {
                let t = m[(a, j)].clone();
                m[(a, j)] = m[(b, j)].clone();
                m[(b, j)] = t;
            }
        }
        for i in 0..self.u_inv.rows() {
            let t = self.u_inv[(i, a)].clone();
            self.u_inv[(i, a)] = self.u_inv[(i, b)].clone();
            self.u_inv[(i, b)] = t;
        }
    }

    fn swap_cols(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for m in [&mut self.d, &mut self.v] {
            for i in 0..m.rows() {
                let t = m[(i, a)].clone();
                m[(i, a)] = m[(i, b)].clone();
                m[(i, b)] = t;
            }
        }
        for j in 0..self.v_inv.cols() {
            let t = self.v_inv[(a, j)].clone();
            self.v_inv[(a, j)] = self.v_inv[(b, j)].clone();
            self.v_inv[(b, j)] = t;
        }
    }

    /// Row `k` times the unit `w`; `U⁻¹` column `k` times `w⁻¹`.
    fn scale_row(&mut self, k: usize, w: &TruncSeries, w_inv: &TruncSeries) {
        let r = self.ring;
        for m in [&mut self.d, &mut self.u] {
            for j in 0..m.cols() {
                m[(k, j)] = r.mul(w, &m[(k, j)]);
            }
        }
        for i in 0..self.u_inv.rows() {
            self.u_inv[(i, k)] = r.mul(&self.u_inv[(i, k)], w_inv);
        }
    }

    /// Row `i` minus `c` times row `k`.
    fn row_op(&mut self, i: usize, k: usize, c: &TruncSeries) {
        let r = self.ring;
        for m in [&mut self.d, &mut self.u] {
            for j in 0..m.cols() {
                if !m[(k, j)].is_zero() {
                    m[(i, j)] = r.sub(&m[(i, j)], &r.mul(c, &m[(k, j)]));
                }
            }
        }
        for row in 0..self.u_inv.rows() {
            if !self.u_inv[(row, i)].is_zero() {
                self.u_inv[(row, k)] = r.add(&self.u_inv[(row, k)], &r.mul(&self.u_inv[(row, i)], c));
            }
        }
    }

    /// Column `j` minus `c` times column `k`.
    fn col_op(&mut self, j: usize, k: usize, c: &TruncSeries) {
        let r = self.ring;
        for m in [&mut self.d, &mut self.v] {
            for i in 0..m.rows() {
                if !m[(i, k)].is_zero() {
                    m[(i, j)] = r.sub(&m[(i, j)], &r.mul(&m[(i, k)], c));
                }
            }
        }
        for col in 0..self.v_inv.cols() {
            if !self.v_inv[(j, col)].is_zero() {
                self.v_inv[(k, col)] = r.add(&self.v_inv[(k, col)], &r.mul(c, &self.v_inv[(j, col)]));
            }
        }
    }
}

/// Smith form of any matrix; exponents equal to the precision are allowed.
pub fn smith(ring: &SeriesRing, m: &SeriesMatrix) -> SmithForm {
    let (rows, cols) = (m.rows(), m.cols());
    let prec = ring.prec();
    let mut w = Work {
        ring,
        d: m.coerce(ring),
        u: SeriesMatrix::identity(ring, rows),
        u_inv: SeriesMatrix::identity(ring, rows),
        v: SeriesMatrix::identity(ring, cols),
        v_inv: SeriesMatrix::identity(ring, cols),
    };
    let mut exponents = Vec::with_capacity(rows.min(cols));
    for k in 0..rows.min(cols) {
        let mut best = (prec, k, k);
        for i in k..rows {
            for j in k..cols {
                let v = w.d[(i, j)].val();
                if v < best.0 {
                    best = (v, i, j);
                }
            }
        }
        let (e, pi, pj) = best;
        exponents.push(e);
        if e == prec {
            exponents.resize(rows.min(cols), prec);
            break;
        }
        w.swap_rows(k, pi);
        w.swap_cols(k, pj);
        let unit = ring.shift_down(&w.d[(k, k)], e);
        let unit_inv = ring.inverse(&unit).expect("pivot has minimal valuation");
        w.scale_row(k, &unit_inv, &unit);
        for i in k + 1..rows {
            if !w.d[(i, k)].is_zero() {
                let c = ring.shift_down(&w.d[(i, k)], e);
                w.row_op(i, k, &c);
            }
        }
        for j in k + 1..cols {
            if !w.d[(k, j)].is_zero() {
                let c = ring.shift_down(&w.d[(k, j)], e);
                w.col_op(j, k, &c);
            }
        }
    }
    SmithForm {
        u: w.u,
        u_inv: w.u_inv,
        v: w.v,
        v_inv: w.v_inv,
        exponents,
        prec,
    }
}

/// Smith form, failing if some elementary divisor vanishes mod `u^P`.
pub fn u_smith_form(ring: &SeriesRing, m: &SeriesMatrix) -> Result<SmithForm, ArithError> {
    let sf = smith(ring, m);
    if let Some((index, &exponent)) = sf.exponents.iter().enumerate().find(|(_, &e)| e >= ring.prec()) {
        return Err(ArithError::PrecisionLoss {
            index,
            exponent,
            prec: ring.prec(),
        });
    }
    Ok(sf)
}

/// Some `X` with `A·X = Y`.
pub fn solve_right(ring: &SeriesRing, a: &SeriesMatrix, y: &SeriesMatrix) -> Option<SeriesMatrix> {
    smith(ring, a).solve(ring, y)
}

/// Inverse of a square matrix invertible over the truncated ring.
pub fn inverse(ring: &SeriesRing, a: &SeriesMatrix) -> Option<SeriesMatrix> {
    assert_eq!(a.rows(), a.cols(), "inverse of a non-square matrix");
    let sf = smith(ring, a);
    sf.exponents
        .iter()
        .all(|&e| e == 0)
        .then(|| sf.v.mul(ring, &sf.u))
}
