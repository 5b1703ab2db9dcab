//! Objects of `L*`: a free `W₁`-module `L` with basis `l_1, …, l_s`, a
//! filtration submodule `F(L)` spanned by the columns `m_j` of `B`, the
//! σ-linear `φ : F(L) → L` normalised by `φ(m_j) = l_j`, and `N` given by
//! the images `N(l_i)` mod `u^{2p}`.

use serde::Serialize;

use super::ObjectError;
use crate::base_arith::smith::smith;
use crate::base_arith::{FieldEmbedding, GaloisField, SeriesMatrix, SeriesRing, SmithForm, TruncSeries};

/// Which axiom a validation failure refers to.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Axiom {
    /// `B` is not invertible over `W₁[1/u]` at this precision.
    Det,
    /// `u^{p−1}L ⊄ F(L)`.
    Filtration,
    /// The N-table has coefficients at `u^{2p}` or above.
    NTruncation,
    /// `u·N(m_j) ∉ F(L)` or `N(φ(m_j)) ≠ φ(u·N(m_j))` mod `u^{2p}`.
    NCompat,
    /// Matrix shapes disagree.
    Shape,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ValidationFailure {
    pub axiom: Axiom,
    pub column: Option<usize>,
    pub witness: Vec<TruncSeries>,
    pub detail: String,
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct ValidationReport {
    pub failures: Vec<ValidationFailure>,
}

impl ValidationReport {
    pub fn is_ok(&self) -> bool {
        self.failures.is_empty()
    }

    pub fn has(&self, axiom: Axiom) -> bool {
        self.failures.iter().any(|f| f.axiom == axiom)
    }

    fn push(&mut self, axiom: Axiom, column: Option<usize>, witness: Vec<TruncSeries>, detail: String) {
        self.failures.push(ValidationFailure {
            axiom,
            column,
            witness,
            detail,
        });
    }

    pub fn summary(&self) -> String {
        self.failures
            .iter()
            .map(|f| match f.column {
                Some(c) => format!("{:?} (column {c}): {}", f.axiom, f.detail),
                None => format!("{:?}: {}", f.axiom, f.detail),
            })
            .collect::<Vec<_>>()
            .join("; ")
    }
}

#[derive(Clone, Debug)]
pub struct PhiNModule {
    ring: SeriesRing,
    filt: SeriesMatrix,
    n_table: SeriesMatrix,
    filt_smith: SmithForm,
}

impl PartialEq for PhiNModule {
    fn eq(&self, other: &Self) -> bool {
        self.ring == other.ring && self.filt == other.filt && self.n_table == other.n_table
    }
}

impl Eq for PhiNModule {}

impl PhiNModule {
    /// Build without checking the axioms; see [`PhiNModule::validate`].
    pub fn from_raw(ring: SeriesRing, filt: SeriesMatrix, n_table: SeriesMatrix) -> Self {
        assert!(
            ring.prec() >= 2 * ring.p() as usize,
            "precision must be at least 2p"
        );
        let filt = filt.coerce(&ring);
        let n_table = n_table.coerce(&ring);
        let filt_smith = smith(&ring, &filt);
        PhiNModule {
            ring,
            filt,
            n_table,
            filt_smith,
        }
    }

    /// Build and validate.
    pub fn new(ring: SeriesRing, filt: SeriesMatrix, n_table: SeriesMatrix) -> Result<Self, ObjectError> {
        if filt.rows() != filt.cols() || n_table.rows() != filt.rows() || n_table.cols() != filt.rows() {
            return Err(ObjectError::Shape(format!(
                "filtration {}x{}, N-table {}x{}",
                filt.rows(),
                filt.cols(),
                n_table.rows(),
                n_table.cols()
            )));
        }
        let module = PhiNModule::from_raw(ring, filt, n_table);
        let report = module.validate();
        if report.is_ok() {
            Ok(module)
        } else {
            Err(ObjectError::Invalid(report.summary()))
        }
    }

    /// The rank-0 object.
    pub fn zero(ring: SeriesRing) -> Self {
        let z = SeriesMatrix::zeros(&ring, 0, 0);
        PhiNModule::from_raw(ring, z.clone(), z)
    }

    /// The unique object with filtration `B` whose N-table reduces to `t1` mod `u^p`.
    ///
    /// For each column, `y = u·N₁(m_j)` is known mod `u^{p+1}`, which fixes
    /// `φ(y)` mod `u^{2p}`; that is the lifted `N(l_j)`.
    pub fn lift_n(ring: SeriesRing, filt: SeriesMatrix, t1: &SeriesMatrix) -> Result<Self, ObjectError> {
        let p = ring.p() as usize;
        let n = filt.rows();
        if filt.cols() != n || t1.rows() != n || t1.cols() != n {
            return Err(ObjectError::Shape("lift_n needs square matrices of equal size".into()));
        }
        let t1 = t1.coerce(&ring).truncate(&ring, p);
        let bare = PhiNModule::from_raw(ring.clone(), filt, SeriesMatrix::zeros(&ring, n, n));
        let mut structural = ValidationReport::default();
        bare.check_structure(&mut structural);
        if !structural.is_ok() {
            return Err(ObjectError::HypothesisFailed {
                column: structural.failures[0].column,
                detail: structural.summary(),
            });
        }
        let mut cols = Vec::with_capacity(n);
        for j in 0..n {
            let m_j = bare.filt.col(j);
            let y: Vec<TruncSeries> = bare
                .n_apply_with(&t1, &m_j)
                .iter()
                .map(|c| ring.truncate(&ring.shift_up(c, 1), p + 1))
                .collect();
            let z = bare.phi(&y).ok_or_else(|| ObjectError::HypothesisFailed {
                column: Some(j),
                detail: "u·N(m_j) does not lie in F(L)".into(),
            })?;
            let z: Vec<TruncSeries> = z.iter().map(|c| ring.truncate(c, 2 * p)).collect();
            let mismatch = (0..n).any(|i| ring.truncate(&z[i], p) != t1[(i, j)]);
            if mismatch {
                return Err(ObjectError::HypothesisFailed {
                    column: Some(j),
                    detail: "N(φ(m_j)) ≢ φ(u·N(m_j)) mod u^p".into(),
                });
            }
            cols.push(z);
        }
        let n_table = SeriesMatrix::from_cols(&ring, n, &cols);
        let module = PhiNModule::from_raw(ring, bare.filt, n_table);
        let report = module.validate();
        if report.is_ok() {
            Ok(module)
        } else {
            Err(ObjectError::HypothesisFailed {
                column: report.failures[0].column,
                detail: report.summary(),
            })
        }
    }

    /// The crystalline object: `N ≡ 0` mod `u^p` on `φ(F(L))`.
    pub fn crystalline(ring: SeriesRing, filt: SeriesMatrix) -> Result<Self, ObjectError> {
        let n = filt.rows();
        let zero = SeriesMatrix::zeros(&ring, n, n);
        PhiNModule::lift_n(ring, filt, &zero)
    }

    pub fn ring(&self) -> &SeriesRing {
        &self.ring
    }

    pub fn field(&self) -> &GaloisField {
        self.ring.field()
    }

    pub fn p(&self) -> u32 {
        self.ring.p()
    }

    pub fn rank(&self) -> usize {
        self.filt.rows()
    }

    /// Columns are the `F(L)`-basis `m_j` in the `l`-basis.
    pub fn filt(&self) -> &SeriesMatrix {
        &self.filt
    }

    /// Columns are `N(l_i)` mod `u^{2p}` in the `l`-basis.
    pub fn n_table(&self) -> &SeriesMatrix {
        &self.n_table
    }

    pub fn filt_smith(&self) -> &SmithForm {
        &self.filt_smith
    }

    /// Elementary divisor exponents of `F(L) ⊂ L`.
    pub fn filtration_exponents(&self) -> &[usize] {
        &self.filt_smith.exponents
    }

    /// Coordinates `y` with `B·y = x`, if `x ∈ F(L)`.
    pub fn filt_coords(&self, x: &[TruncSeries]) -> Option<Vec<TruncSeries>> {
        let col = SeriesMatrix::from_cols(&self.ring, self.rank(), &[x.to_vec()]);
        self.filt_smith.solve(&self.ring, &col).map(|y| y.col(0))
    }

    /// Solve `B·Y = X` column by column.
    pub fn filt_coords_matrix(&self, x: &SeriesMatrix) -> Option<SeriesMatrix> {
        self.filt_smith.solve(&self.ring, x)
    }

    pub fn in_filtration(&self, x: &[TruncSeries]) -> bool {
        self.filt_coords(x).is_some()
    }

    /// `φ(x) = σ(B⁻¹x)` for `x ∈ F(L)`.
    pub fn phi(&self, x: &[TruncSeries]) -> Option<Vec<TruncSeries>> {
        self.filt_coords(x)
            .map(|y| y.iter().map(|c| self.ring.frobenius(c)).collect())
    }

    /// `φ` applied to each column.
    pub fn phi_matrix(&self, x: &SeriesMatrix) -> Option<SeriesMatrix> {
        self.filt_coords_matrix(x).map(|y| y.frobenius(&self.ring))
    }

    /// `N(x)` mod `u^{2p}`.
    pub fn n_apply(&self, x: &[TruncSeries]) -> Vec<TruncSeries> {
        let p = self.p() as usize;
        self.n_apply_with(&self.n_table, x)
            .iter()
            .map(|c| self.ring.truncate(c, 2 * p))
            .collect()
    }

    /// `N` applied to each column, mod `u^{2p}`.
    pub fn n_apply_matrix(&self, x: &SeriesMatrix) -> SeriesMatrix {
        let cols: Vec<_> = x.columns().iter().map(|c| self.n_apply(c)).collect();
        SeriesMatrix::from_cols(&self.ring, self.rank(), &cols)
    }

    fn n_apply_with(&self, table: &SeriesMatrix, x: &[TruncSeries]) -> Vec<TruncSeries> {
        let tx = table.mul_vec(&self.ring, x);
        x.iter()
            .zip(tx)
            .map(|(c, t)| self.ring.add(&self.ring.derivation_n(c), &t))
            .collect()
    }

    fn check_structure(&self, report: &mut ValidationReport) {
        let ring = &self.ring;
        let p = self.p() as usize;
        let sf = &self.filt_smith;
        for (i, &e) in sf.exponents.iter().enumerate() {
            if e >= ring.prec() {
                report.push(
                    Axiom::Det,
                    Some(i),
                    sf.v.col(i),
                    format!("elementary divisor {i} vanishes mod u^{}", ring.prec()),
                );
            } else if e > p - 1 {
                report.push(
                    Axiom::Filtration,
                    Some(i),
                    sf.u_inv.col(i),
                    format!("u^{} times the witness is not in F(L); divisor exponent {e}", p - 1),
                );
            }
        }
    }

    /// Check every axiom; an empty report means the object is valid.
    pub fn validate(&self) -> ValidationReport {
        let mut report = ValidationReport::default();
        let n = self.rank();
        if self.filt.cols() != n || self.n_table.rows() != n || self.n_table.cols() != n {
            report.push(Axiom::Shape, None, Vec::new(), "matrices are not square of equal size".into());
            return report;
        }
        let ring = &self.ring;
        let p = self.p() as usize;
        self.check_structure(&mut report);
        for j in 0..n {
            let col = self.n_table.col(j);
            if col.iter().any(|c| c.coeffs().iter().skip(2 * p).any(|x| !x.is_zero())) {
                report.push(
                    Axiom::NTruncation,
                    Some(j),
                    col,
                    format!("N-table entries must be reduced mod u^{}", 2 * p),
                );
            }
        }
        if report.has(Axiom::Det) {
            return report;
        }
        for j in 0..n {
            let m_j = self.filt.col(j);
            let y: Vec<TruncSeries> = self
                .n_apply(&m_j)
                .iter()
                .map(|c| ring.truncate(&ring.shift_up(c, 1), 2 * p))
                .collect();
            match self.phi(&y) {
                None => report.push(
                    Axiom::NCompat,
                    Some(j),
                    y,
                    "u·N(m_j) does not lie in F(L)".into(),
                ),
                Some(z) => {
                    let diff: Vec<TruncSeries> = (0..n)
                        .map(|i| ring.truncate(&ring.sub(&z[i], &self.n_table[(i, j)]), 2 * p))
                        .collect();
                    if diff.iter().any(|d| !d.is_zero()) {
                        report.push(
                            Axiom::NCompat,
                            Some(j),
                            diff,
                            "φ(u·N(m_j)) − N(l_j) is nonzero mod u^{2p}".into(),
                        );
                    }
                }
            }
        }
        report
    }

    /// `N(φ(F(L))) ⊂ u^pL` mod `u^{2p}`: every N-table entry has valuation `≥ p`.
    pub fn is_crystalline(&self) -> bool {
        let p = self.p() as usize;
        (0..self.rank()).all(|i| (0..self.rank()).all(|j| self.n_table[(i, j)].val() >= p))
    }

    /// The equivalent condition `N(F(L)) ⊂ F(L)` mod `u^{2p}`.
    pub fn is_crystalline_by_filtration(&self) -> bool {
        (0..self.rank()).all(|j| self.in_filtration(&self.n_apply(&self.filt.col(j))))
    }

    pub fn direct_sum(&self, other: &PhiNModule) -> PhiNModule {
        let ring = &self.ring;
        PhiNModule::from_raw(
            ring.clone(),
            self.filt.direct_sum(ring, &other.filt),
            self.n_table.direct_sum(ring, &other.n_table),
        )
    }

    /// The same object over a different precision.
    pub fn with_ring(&self, ring: SeriesRing) -> PhiNModule {
        PhiNModule::from_raw(ring.clone(), self.filt.coerce(&ring), self.n_table.coerce(&ring))
    }

    /// Extension of scalars along `emb` into `ring`, whose field is `emb.target()`.
    pub fn base_change(&self, emb: &FieldEmbedding, ring: &SeriesRing) -> PhiNModule {
        assert_eq!(ring.field(), emb.target(), "ring is not over the embedding target");
        let map = |m: &SeriesMatrix| m.map_coeffs(ring, |c| emb.apply(c)).coerce(ring);
        PhiNModule::from_raw(ring.clone(), map(&self.filt), map(&self.n_table))
    }

    /// `φ̂ : l ↦ φ(u^{p−1}l)` has matrix `σ(G)` with `G = u^{p−1}B⁻¹`; returns `G`.
    pub fn phi_hat_matrix(&self) -> SeriesMatrix {
        let ring = &self.ring;
        let n = self.rank();
        let target = SeriesMatrix::identity(ring, n).scale(ring, &ring.u_pow(self.p() as usize - 1));
        self.filt_coords_matrix(&target)
            .expect("u^{p-1}L lies in F(L) for a valid object")
    }

    /// `V(x) = x^{(0)}` where `x = Σ_{i<p} u^i φ(x^{(i)})`; exact mod `u^{⌈P/p⌉}`.
    pub fn verschiebung(&self, x: &[TruncSeries]) -> Vec<TruncSeries> {
        let d0: Vec<TruncSeries> = x.iter().map(|c| self.ring.sigma_root_part(c)).collect();
        self.filt.mul_vec(&self.ring, &d0)
    }
}
