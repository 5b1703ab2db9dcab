//! Standard extensions `E_cr`, `E_st`, `E_sp` and the decomposition of an
//! arbitrary extension of `L₂` by `L₁` into them.
//!
//! An extension is stored on the basis `l^{(1)}_0, …, l^{(1)}_{s−1}, l_0, …, l_{s−1}`.
//! Column `k < s` of the filtration matrix is `u^{ã_{k−1}}l^{(1)}_{k−1}` and
//! column `s+k` is `u^{b̃_{k−1}}l_{k−1} + v_{k−1}`, so `φ` maps column `c` to the
//! basis vector `c`. The residue `κ_{ij}` is the constant term of the
//! `l^{(1)}_i`-coordinate of `N(l_j)`; coboundaries by `w ∈ F(L₁)` leave it unchanged.

use serde::Serialize;

use super::context::ExtContext;
use super::factor::{drop_inadmissible_crystalline, normalize, FactorSystem};
use super::simple::cyclic_filtration;
use super::ExtError;
use crate::base_arith::{Fq, FqMatrix, GaloisField, SeriesMatrix, SeriesRing};
use crate::objects::PhiNModule;

/// `κ_{ij}`: row `i` indexes `l^{(1)}_i`, column `j` indexes `l_j`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ResidueTable(pub FqMatrix);

impl ResidueTable {
    pub fn zero(s: usize) -> Self {
        ResidueTable(FqMatrix::zeros(s, s))
    }

    pub fn add(&self, field: &GaloisField, other: &ResidueTable) -> ResidueTable {
        ResidueTable(self.0.add(field, &other.0))
    }

    fn bump(&mut self, field: &GaloisField, i: usize, j: usize, c: Fq) {
        self.0[(i, j)] = field.add(self.0[(i, j)], c);
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct PairTerm {
    pub i: usize,
    pub j: usize,
    pub gamma: Fq,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct SpTerm {
    pub j: usize,
    pub gamma: Fq,
}

/// Coefficients of an extension on the standard basis extensions.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct ExtDecomposition {
    pub cr_terms: Vec<PairTerm>,
    pub st_terms: Vec<PairTerm>,
    pub sp_terms: Vec<SpTerm>,
}

impl ExtDecomposition {
    pub fn is_empty(&self) -> bool {
        self.cr_terms.is_empty() && self.st_terms.is_empty() && self.sp_terms.is_empty()
    }

    /// The factor system and residues of `Σ E_cr + Σ E_st + Σ E_sp`.
    pub fn components(&self, ctx: &ExtContext, ring: &SeriesRing) -> Result<(FactorSystem, ResidueTable), ExtError> {
        let field = ring.field();
        let mut fs = FactorSystem::zero(ctx, ring);
        let mut res = ResidueTable::zero(ctx.s());
        for t in &self.cr_terms {
            require(ctx, ctx.cr_admissible(t.i, t.j).is_some(), "cr", t.i, t.j)?;
            fs.add_term(t.i, t.j, ctx.a(t.i as i64), t.gamma);
        }
        for t in &self.st_terms {
            require(ctx, ctx.st_admissible(t.i, t.j).is_some(), "st", t.i, t.j)?;
            fs.add_term(t.i, t.j, ctx.a(t.i as i64) - 1, t.gamma);
            for (i, j, k) in st_residues(ctx, field, t.i, t.j, t.gamma) {
                res.bump(field, i, j, k);
            }
        }
        for t in &self.sp_terms {
            require(ctx, ctx.sp_admissible(t.j), "sp", 0, t.j)?;
            check_sp_gamma(ctx, field, t.gamma)?;
            for (i, j, k) in sp_residues(ctx, field, t.j, t.gamma) {
                res.bump(field, i, j, k);
            }
        }
        Ok((fs, res))
    }

    pub fn build(&self, ctx: &ExtContext, ring: &SeriesRing) -> Result<PhiNModule, ExtError> {
        let (fs, res) = self.components(ctx, ring)?;
        build_extension(&fs, &res)
    }
}

fn require(ctx: &ExtContext, ok: bool, kind: &str, i: usize, j: usize) -> Result<(), ExtError> {
    if ok && i < ctx.s() && j < ctx.s() {
        Ok(())
    } else {
        Err(ExtError::AdmissibilityMismatch(format!(
            "({i}, {j}) is not {kind}-admissible for r₁ = {}, r₂ = {}, s = {}",
            ctx.r1(),
            ctx.r2(),
            ctx.s()
        )))
    }
}

fn check_sp_gamma(ctx: &ExtContext, field: &GaloisField, gamma: Fq) -> Result<(), ExtError> {
    if field.frob(gamma, ctx.s() as i64) != gamma {
        return Err(ExtError::InvalidSystem(format!(
            "γ = {:?} does not lie in F_{{p^{}}}",
            field.coords(gamma),
            ctx.s()
        )));
    }
    Ok(())
}

/// `κ_{i₀+m, j₀+m} = γ^{p^m}(b̃_{j₀} − ã_{i₀} + 1)` for `1 ≤ m ≤ m₀`.
fn st_residues(ctx: &ExtContext, field: &GaloisField, i0: usize, j0: usize, gamma: Fq) -> Vec<(usize, usize, Fq)> {
    let m0 = ctx.st_admissible(i0, j0).expect("caller checked st-admissibility");
    let factor = ctx.b(j0 as i64) as i64 - ctx.a(i0 as i64) as i64 + 1;
    (1..=m0)
        .map(|m| {
            let k = field.scale_int(field.frob(gamma, m as i64), factor);
            (ctx.idx((i0 + m) as i64), ctx.idx((j0 + m) as i64), k)
        })
        .collect()
}

/// `κ_{m, j₀+m} = γ^{p^m}` for `m ∈ Z/s`.
fn sp_residues(ctx: &ExtContext, field: &GaloisField, j0: usize, gamma: Fq) -> Vec<(usize, usize, Fq)> {
    (0..ctx.s())
        .map(|m| (m, ctx.idx((j0 + m) as i64), field.frob(gamma, m as i64)))
        .collect()
}

/// The filtration matrix of the extension with factor system `fs`.
pub fn standard_filtration(fs: &FactorSystem) -> SeriesMatrix {
    let ctx = fs.context();
    let ring = fs.ring();
    let s = ctx.s();
    let mut m = SeriesMatrix::zeros(ring, 2 * s, 2 * s);
    let top = cyclic_filtration(ring, ctx.a_tilde());
    let bottom = cyclic_filtration(ring, ctx.b_tilde());
    for r in 0..s {
        for c in 0..s {
            m[(r, c)] = top[(r, c)].clone();
            m[(s + r, s + c)] = bottom[(r, c)].clone();
        }
    }
    for (i, j, t, g) in fs.terms() {
        let col = s + (j + 1) % s;
        m[(i, col)] = ring.add(&m[(i, col)], &ring.monomial(g, t));
    }
    m
}

/// The object with factor system `fs` and `N(l_j) ≡ Σ_i κ_{ij}l^{(1)}_i` mod `u^p`.
pub fn build_extension(fs: &FactorSystem, residues: &ResidueTable) -> Result<PhiNModule, ExtError> {
    let ring = fs.ring();
    let s = fs.context().s();
    let mut t1 = SeriesMatrix::zeros(ring, 2 * s, 2 * s);
    for i in 0..s {
        for j in 0..s {
            t1[(i, s + j)] = ring.constant(residues.0[(i, j)]);
        }
    }
    Ok(PhiNModule::lift_n(ring.clone(), standard_filtration(fs), &t1)?)
}

pub fn build_e_cr(ctx: &ExtContext, ring: &SeriesRing, i0: usize, j0: usize, gamma: Fq) -> Result<PhiNModule, ExtError> {
    ExtDecomposition {
        cr_terms: vec![PairTerm { i: i0, j: j0, gamma }],
        ..Default::default()
    }
    .build(ctx, ring)
}

pub fn build_e_st(ctx: &ExtContext, ring: &SeriesRing, i0: usize, j0: usize, gamma: Fq) -> Result<PhiNModule, ExtError> {
    ExtDecomposition {
        st_terms: vec![PairTerm { i: i0, j: j0, gamma }],
        ..Default::default()
    }
    .build(ctx, ring)
}

pub fn build_e_sp(ctx: &ExtContext, ring: &SeriesRing, j0: usize, gamma: Fq) -> Result<PhiNModule, ExtError> {
    ExtDecomposition {
        sp_terms: vec![SpTerm { j: j0, gamma }],
        ..Default::default()
    }
    .build(ctx, ring)
}

/// Read the factor system and residues back from an object in the standard layout.
pub fn extract_factor_system(ctx: &ExtContext, object: &PhiNModule) -> Result<(FactorSystem, ResidueTable), ExtError> {
    let ring = object.ring();
    let s = ctx.s();
    if object.rank() != 2 * s || ring.p() != ctx.p() {
        return Err(ExtError::InvalidSystem(format!("expected a rank-{} object over characteristic {}", 2 * s, ctx.p())));
    }
    let layout = standard_filtration(&FactorSystem::zero(ctx, ring));
    let b = object.filt();
    for r in 0..2 * s {
        for c in 0..2 * s {
            let in_factor_block = r < s && c >= s;
            if !in_factor_block && b[(r, c)] != layout[(r, c)] {
                return Err(ExtError::InvalidSystem(format!(
                    "filtration entry ({r}, {c}) does not match the standard layout"
                )));
            }
        }
    }
    let mut fs = FactorSystem::zero(ctx, ring);
    for j in 0..s {
        let col = s + (j + 1) % s;
        for i in 0..s {
            for (t, &g) in b[(i, col)].coeffs().iter().enumerate() {
                fs.add_term(i, j, t, g);
            }
        }
    }
    let mut res = ResidueTable::zero(s);
    for i in 0..s {
        for j in 0..s {
            res.0[(i, j)] = object.n_table()[(i, s + j)].coeff(0);
        }
    }
    Ok((fs, res))
}

/// Coefficients on the cr-admissible `E_cr` of a crystalline system.
pub fn decompose_cr(fs: &FactorSystem) -> Result<ExtDecomposition, ExtError> {
    let ctx = fs.context().clone();
    if let Some((i, j, t, _)) = fs.terms().find(|&(i, _, t, _)| t < ctx.a(i as i64)) {
        return Err(ExtError::NotCrystallineSystem { i, j, t });
    }
    let normal = normalize(fs)?;
    let reduced = drop_inadmissible_crystalline(&normal.system)?;
    let mut cr_terms = Vec::new();
    for (i, j, t, gamma) in reduced.system.terms() {
        if t != ctx.a(i as i64) || ctx.cr_admissible(i, j).is_none() {
            return Err(ExtError::InvalidSystem(format!(
                "term ({i}, {j}, {t}) survived the crystalline reduction"
            )));
        }
        cr_terms.push(PairTerm { i, j, gamma });
    }
    Ok(ExtDecomposition {
        cr_terms,
        ..Default::default()
    })
}

/// Which of the conditions characterising semi-stable factor systems fails.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum StCondition {
    /// `t = b̃_j`.
    C1,
    /// `t ≥ ã_i`.
    C3,
    /// `t = ã_i − 1` with `b̃_j = p − 1` or `ã_i = 0`.
    A,
    /// `t < ã_i − 1`.
    B,
    /// `t = ã_i − 1` and the first step with `ã−1 ≠ b̃` has `ã − 1 > b̃`.
    C,
    /// `t = ã_i − 1` and `ã_{i+m} − 1 = b̃_{j+m}` for all `m`.
    D,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct StViolation {
    pub i: usize,
    pub j: usize,
    pub t: usize,
    pub condition: StCondition,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct StReport {
    pub violations: Vec<StViolation>,
}

impl StReport {
    pub fn is_ok(&self) -> bool {
        self.violations.is_empty()
    }
}

pub fn validate_st(fs: &FactorSystem) -> StReport {
    let ctx = fs.context();
    let p = ctx.p() as usize;
    let violations = fs
        .terms()
        .filter_map(|(i, j, t, _)| {
            let (a, b) = (ctx.a(i as i64), ctx.b(j as i64));
            let condition = if t == b {
                StCondition::C1
            } else if t >= a {
                StCondition::C3
            } else if t + 1 < a {
                StCondition::B
            } else if b == p - 1 || a == 0 {
                StCondition::A
            } else {
                let step = (1..=ctx.s()).find_map(|m| {
                    let lhs = ctx.a((i + m) as i64) as i64 - 1;
                    let rhs = ctx.b((j + m) as i64) as i64;
                    (lhs != rhs).then_some(lhs > rhs)
                });
                match step {
                    None => StCondition::D,
                    Some(true) => StCondition::C,
                    Some(false) => return None,
                }
            };
            Some(StViolation { i, j, t, condition })
        })
        .collect();
    StReport { violations }
}

/// Unique coefficients on `E_cr`, `E_st` and `E_sp`.
///
/// After (C1) and (C2), terms with `t ≥ ã_i` form a crystalline system and
/// terms with `t < ã_i` must pass [`validate_st`]. The residues left after
/// subtracting the `E_st` contributions must be a sum of `E_sp` patterns.
pub fn decompose_full(fs: &FactorSystem, residues: &ResidueTable) -> Result<ExtDecomposition, ExtError> {
    let ctx = fs.context().clone();
    let field = fs.ring().field().clone();
    let s = ctx.s();
    let normal = normalize(fs)?;
    let cr_part = normal.system.filter(|i, _, t| t >= ctx.a(i as i64));
    let st_part = normal.system.filter(|i, _, t| t < ctx.a(i as i64));
    let report = validate_st(&st_part);
    if !report.is_ok() {
        return Err(ExtError::InvalidSystem(format!(
            "semi-stable part violates {:?}",
            report.violations
        )));
    }
    let cr_terms = decompose_cr(&cr_part)?.cr_terms;
    let st_terms: Vec<PairTerm> = st_part.terms().map(|(i, j, _, gamma)| PairTerm { i, j, gamma }).collect();

    let mut residual = residues.clone();
    for t in &st_terms {
        for (i, j, k) in st_residues(&ctx, &field, t.i, t.j, t.gamma) {
            residual.bump(&field, i, j, field.neg(k));
        }
    }
    let mut sp_terms = Vec::new();
    for j0 in (0..s).filter(|&j0| ctx.sp_admissible(j0)) {
        let gamma = residual.0[(0, j0)];
        if gamma.is_zero() {
            continue;
        }
        check_sp_gamma(&ctx, &field, gamma).map_err(|_| {
            ExtError::InconsistentResidues(format!("κ_(0,{j0}) does not lie in F_{{p^{s}}}"))
        })?;
        for (i, j, k) in sp_residues(&ctx, &field, j0, gamma) {
            residual.bump(&field, i, j, field.neg(k));
        }
        sp_terms.push(SpTerm { j: j0, gamma });
    }
    if !residual.0.is_zero() {
        return Err(ExtError::InconsistentResidues(
            "residues remain after removing the semi-stable and special contributions".into(),
        ));
    }
    Ok(ExtDecomposition {
        cr_terms,
        st_terms,
        sp_terms,
    })
}

/// [`decompose_full`] of an object in the standard layout.
pub fn decompose_object(ctx: &ExtContext, object: &PhiNModule) -> Result<ExtDecomposition, ExtError> {
    let (fs, res) = extract_factor_system(ctx, object)?;
    decompose_full(&fs, &res)
}
