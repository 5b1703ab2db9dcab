//! Étale–connected and unipotent–multiplicative exact sequences, and the
//! `φ`-compatible section over the multiplicative quotient.

use super::limits::{cokernel, sub_object};
use super::morphism::Morphism;
use super::{ObjectError, PhiNModule};
use crate::base_arith::linalg::fp_kernel_of;
use crate::base_arith::smith::smith;
use crate::base_arith::{fitting_split, ArithError, FqMatrix, GaloisField, SemilinearOp, SeriesMatrix, SeriesRing, TruncSeries};

/// `0 → sub → L → quotient → 0`.
#[derive(Clone, Debug)]
pub struct Split {
    pub sub: PhiNModule,
    pub embedding: Morphism,
    pub quotient: PhiNModule,
    pub projection: Morphism,
}

/// `φ̂` mod `u` as a semilinear operator: `x ↦ σ(G(0))·σ(x)`.
pub fn phi_hat_reduction(object: &PhiNModule) -> SemilinearOp {
    let g0 = object.phi_hat_matrix().constant_part();
    SemilinearOp::new(g0.frob(object.field(), 1), 1)
}

/// `V` mod `u` as a semilinear operator: `x ↦ B(0)·σ⁻¹(x)`.
pub fn verschiebung_reduction(object: &PhiNModule) -> SemilinearOp {
    SemilinearOp::new(object.filt().constant_part(), -1)
}

pub fn is_etale(object: &PhiNModule) -> bool {
    phi_hat_reduction(object).matrix.inverse(object.field()).is_some()
}

pub fn is_connected(object: &PhiNModule) -> bool {
    phi_hat_reduction(object).is_nilpotent(object.field())
}

pub fn is_multiplicative(object: &PhiNModule) -> bool {
    object.filt().constant_part().inverse(object.field()).is_some()
}

pub fn is_unipotent(object: &PhiNModule) -> bool {
    verschiebung_reduction(object).is_nilpotent(object.field())
}

/// Saturated span of `σ(H)σ²(H)⋯σ^k(H)` once it stabilises, i.e. the
/// maximal submodule on which `x ↦ σ(H)σ(x)` is invertible.
fn stable_image(ring: &SeriesRing, h: &SeriesMatrix) -> Result<SeriesMatrix, ObjectError> {
    let n = h.rows();
    let prec = ring.prec();
    let mut product = h.frobenius(ring);
    for k in 2..=(n * (prec + 1) + 2) {
        let sf = smith(ring, &product);
        if sf.exponents.iter().all(|&e| e == 0 || e >= prec) {
            let cols: Vec<usize> = (0..n).filter(|&i| sf.exponents.get(i) == Some(&0)).collect();
            return Ok(sf.u_inv.select_cols(&cols));
        }
        product = product.mul(ring, &h.frobenius_pow(ring, k as u32));
    }
    Err(ObjectError::NonConvergence("iterated image did not stabilise".into()))
}

fn split_along(object: &PhiNModule, basis: &SeriesMatrix) -> Result<Split, ObjectError> {
    let (sub, emb) = sub_object(object, basis)?;
    let embedding = Morphism::new(sub.clone(), object.clone(), emb)?;
    let coker = cokernel(&embedding)?;
    Ok(Split {
        sub,
        embedding,
        quotient: coker.object,
        projection: coker.projection,
    })
}

/// `0 → L_et → L → L_c → 0` with `L_et` the stable image of `φ̂`.
pub fn etale_split(object: &PhiNModule) -> Result<Split, ObjectError> {
    let field = object.field();
    let expected = fitting_split(field, &phi_hat_reduction(object)).invertible.len();
    let basis = stable_image(object.ring(), &object.phi_hat_matrix())?;
    let split = split_along(object, &basis)?;
    if split.sub.rank() != expected || !is_etale(&split.sub) || !is_connected(&split.quotient) {
        return Err(ObjectError::Invalid(format!(
            "étale part has rank {} but φ̂ mod u has invertible part of rank {expected}",
            split.sub.rank()
        )));
    }
    Ok(split)
}

/// `0 → L_u → L → L_m → 0`; `L_u` is the annihilator of the étale part of the
/// dual, whose `φ̂` matrix is `σ(Bᵀ)`.
pub fn unipotent_split(object: &PhiNModule) -> Result<Split, ObjectError> {
    let ring = object.ring();
    let field = object.field();
    let n = object.rank();
    let expected = fitting_split(field, &verschiebung_reduction(object)).nilpotent.len();
    let dual_etale = stable_image(ring, &object.filt().transpose())?;
    let e = dual_etale.cols();
    let basis = if e == 0 {
        SeriesMatrix::identity(ring, n)
    } else {
        let sf = smith(ring, &dual_etale.transpose());
        let cols: Vec<usize> = (0..n)
            .filter(|&j| sf.exponents.get(j).is_none_or(|&x| x >= ring.prec()))
            .collect();
        sf.v.select_cols(&cols)
    };
    let split = split_along(object, &basis)?;
    if split.sub.rank() != expected || !is_unipotent(&split.sub) || !is_multiplicative(&split.quotient) {
        return Err(ObjectError::Invalid(format!(
            "unipotent part has rank {} but V mod u has nilpotent part of rank {expected}",
            split.sub.rank()
        )));
    }
    Ok(split)
}

/// A section `S : L₀ → F(L)` over the `φ`-fixed lattice of `L_m`.
#[derive(Clone, Debug)]
pub struct SectionData {
    pub split: Split,
    /// `φ`-fixed basis of `L_m`, in its coordinates.
    pub fixed_basis: Vec<Vec<TruncSeries>>,
    /// `S(l₀)` in the coordinates of `L`.
    pub section: Vec<Vec<TruncSeries>>,
    /// `S(l₀) − φ(S(l₀))`, in the coordinates of `L_u`; each lies in `u·L_u`.
    pub defects: Vec<Vec<TruncSeries>>,
    /// Number of terms used in the geometric series `Σ V^i`.
    pub series_terms: usize,
}

/// `F_p`-basis of `{x ∈ F_q^n : x = σ(C·x)}`.
fn frobenius_fixed_points(field: &GaloisField, c: &FqMatrix) -> Vec<Vec<crate::base_arith::Fq>> {
    let n = c.rows();
    let m = field.m();
    let prime = GaloisField::prime(field.p()).expect("characteristic already validated");
    let build = |xs: &[crate::base_arith::Fq]| -> Vec<crate::base_arith::Fq> {
        (0..n).map(|i| field.from_fp_coords(&xs[i * m..(i + 1) * m])).collect()
    };
    fp_kernel_of(&prime, n * m, |xs| {
        let x = build(xs);
        let image: Vec<_> = c.mul_vec(field, &x).into_iter().map(|v| field.frob(v, 1)).collect();
        x.iter()
            .zip(&image)
            .flat_map(|(&a, &b)| field.fp_coords(field.sub(a, b)))
            .collect()
    })
    .iter()
    .map(|v| build(v))
    .collect()
}

/// Lift `l₀` to `S(l₀) ∈ F(L)` with `S(l₀) − φ(S(l₀)) ∈ u·L_u`.
///
/// Start from any `S = B·w` over `l₀` with defect `g = S − φ(S) ∈ L_u`, then add
/// `h = Σ_{i=1}^{n₀+1} V^i(g)`. Modulo `u·F(L_u)` only the reductions of the
/// terms matter, and `V` mod `u` is the nilpotent semilinear map `B_u(0)·σ⁻¹`.
pub fn splitting_section(object: &PhiNModule) -> Result<SectionData, ObjectError> {
    let ring = object.ring();
    let field = ring.field();
    let split = unipotent_split(object)?;
    let (lu, lm) = (&split.sub, &split.quotient);
    let emb = split.embedding.matrix();
    let proj = split.projection.matrix();
    let n_m = lm.rank();
    let series_terms = lu.rank() + 2;

    let bm_inv = crate::base_arith::smith::inverse(ring, lm.filt())
        .ok_or_else(|| ObjectError::Invalid("multiplicative quotient has F ≠ L".into()))?;
    let seeds = frobenius_fixed_points(field, &bm_inv.constant_part());
    let seed_rank = FqMatrix::from_cols(n_m, &seeds).rank(field);
    if seeds.len() < n_m || seed_rank < n_m {
        return Err(ArithError::FieldTooSmall {
            q: field.q(),
            equation: "x = σ(B_m(0)⁻¹·x) on the multiplicative quotient".into(),
        }
        .into());
    }
    let mut fixed_basis = Vec::with_capacity(n_m);
    for seed in seeds.iter().take(n_m) {
        let mut x: Vec<TruncSeries> = seed.iter().map(|&c| ring.constant(c)).collect();
        let mut rounds = 0;
        loop {
            let next = lm.phi(&x).expect("F = L on a multiplicative object");
            if next == x {
                break;
            }
            rounds += 1;
            if rounds > ring.prec() + 1 {
                return Err(ObjectError::NonConvergence("φ-fixed lift did not stabilise".into()));
            }
            x = next;
        }
        fixed_basis.push(x);
    }

    let pb = proj.mul(ring, object.filt());
    let pb_smith = smith(ring, &pb);
    let emb_smith = smith(ring, emb);
    let in_lu = |v: &[TruncSeries]| -> Result<Vec<TruncSeries>, ObjectError> {
        emb_smith
            .solve(ring, &SeriesMatrix::from_cols(ring, v.len(), &[v.to_vec()]))
            .map(|m| m.col(0))
            .ok_or_else(|| ObjectError::Invalid("defect does not lie in L_u".into()))
    };
    let bu0 = lu.filt().constant_part();
    let mut section = Vec::with_capacity(n_m);
    let mut defects = Vec::with_capacity(n_m);
    for l0 in &fixed_basis {
        let target = SeriesMatrix::from_cols(ring, n_m, std::slice::from_ref(l0));
        let w = pb_smith
            .solve(ring, &target)
            .ok_or_else(|| ObjectError::Invalid("projection is not onto on F(L)".into()))?
            .col(0);
        let s = object.filt().mul_vec(ring, &w);
        let phi_s: Vec<TruncSeries> = w.iter().map(|c| ring.frobenius(c)).collect();
        let g = in_lu(&sub_vec(ring, &s, &phi_s))?;

        let mut x: Vec<_> = g.iter().map(|c| c.coeff(0)).collect();
        let mut total = vec![crate::base_arith::Fq::ZERO; lu.rank()];
        for _ in 0..series_terms {
            let y: Vec<_> = x.iter().map(|&c| field.frob(c, -1)).collect();
            total = total.iter().zip(&y).map(|(&a, &b)| field.add(a, b)).collect();
            x = bu0.mul_vec(field, &y);
        }
        let total_series: Vec<TruncSeries> = total.iter().map(|&c| ring.constant(c)).collect();
        let h = lu.filt().mul_vec(ring, &total_series);
        let corrected = add_vec(ring, &s, &emb.mul_vec(ring, &h));
        let phi_corrected = object
            .phi(&corrected)
            .ok_or_else(|| ObjectError::Invalid("corrected section left F(L)".into()))?;
        let defect = in_lu(&sub_vec(ring, &corrected, &phi_corrected))?;
        if defect.iter().any(|c| !c.coeff(0).is_zero()) {
            return Err(ObjectError::Invalid("section defect is not divisible by u".into()));
        }
        if proj.mul_vec(ring, &corrected) != *l0 {
            return Err(ObjectError::Invalid("section does not lift the fixed vector".into()));
        }
        section.push(corrected);
        defects.push(defect);
    }
    Ok(SectionData {
        split,
        fixed_basis,
        section,
        defects,
        series_terms,
    })
}

fn add_vec(ring: &SeriesRing, a: &[TruncSeries], b: &[TruncSeries]) -> Vec<TruncSeries> {
    a.iter().zip(b).map(|(x, y)| ring.add(x, y)).collect()
}

fn sub_vec(ring: &SeriesRing, a: &[TruncSeries], b: &[TruncSeries]) -> Vec<TruncSeries> {
    a.iter().zip(b).map(|(x, y)| ring.sub(x, y)).collect()
}
