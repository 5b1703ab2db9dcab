//! Kernels, cokernels and strictness.
//!
//! Saturations and torsion quotients come from the Smith form: a morphism's
//! elementary divisors are `u^e` with `e` small or zero mod `u^P`, and the
//! columns of `V` (rows of `U`) with a vanishing divisor span the kernel
//! (cut out the saturated image).

use super::morphism::Morphism;
use super::{ObjectError, PhiNModule};
use crate::base_arith::smith::{smith, SmithForm};
use crate::base_arith::{ArithError, SeriesMatrix, SeriesRing};

#[derive(Clone, Debug)]
pub struct Kernel {
    pub object: PhiNModule,
    pub embedding: Morphism,
}

#[derive(Clone, Debug)]
pub struct Cokernel {
    pub object: PhiNModule,
    pub projection: Morphism,
}

/// Smith form of a morphism matrix, rejecting divisors that are neither
/// small nor zero at this precision.
fn morphism_smith(ring: &SeriesRing, m: &SeriesMatrix) -> Result<SmithForm, ObjectError> {
    let sf = smith(ring, m);
    let p = ring.p() as usize;
    if let Some((index, &exponent)) = sf
        .exponents
        .iter()
        .enumerate()
        .find(|(_, &e)| e > p && e < ring.prec())
    {
        return Err(ArithError::PrecisionLoss {
            index,
            exponent,
            prec: ring.prec(),
        }
        .into());
    }
    Ok(sf)
}

/// Basis of the lattice `{y : A·y ∈ F(L)}` for a matrix `A` with `rank(L)` rows.
pub fn preimage_lattice(object: &PhiNModule, a: &SeriesMatrix) -> SeriesMatrix {
    let ring = object.ring();
    let sf = object.filt_smith();
    let top = sf.exponents.iter().copied().max().unwrap_or(0);
    // x ∈ F(L) iff u^{top−e_i}·(U x)_i ≡ 0 mod u^top for every i.
    let scale = SeriesMatrix::diag_u_pows(ring, &sf.exponents.iter().map(|&e| top - e).collect::<Vec<_>>());
    let q = scale.mul(ring, &sf.u.mul(ring, a));
    let sq = smith(ring, &q);
    let k = a.cols();
    let pows: Vec<usize> = (0..k)
        .map(|j| top.saturating_sub(sq.exponents.get(j).copied().unwrap_or(ring.prec())))
        .collect();
    sq.v.mul(ring, &SeriesMatrix::diag_u_pows(ring, &pows))
}

/// The sub-object of `L` whose underlying module is spanned by the saturated
/// columns of `basis`; returns it with its embedding matrix.
pub fn sub_object(object: &PhiNModule, basis: &SeriesMatrix) -> Result<(PhiNModule, SeriesMatrix), ObjectError> {
    let ring = object.ring();
    let p = ring.p() as usize;
    let n = object.rank();
    let k = basis.cols();
    if k == 0 {
        return Ok((PhiNModule::zero(ring.clone()), SeriesMatrix::zeros(ring, n, 0)));
    }
    let filt_k = basis.mul(ring, &preimage_lattice(object, basis));
    let lat = object
        .phi_matrix(&filt_k)
        .expect("columns of the preimage lattice lie in F(L)");
    let lat_smith = smith(ring, &lat);
    if lat_smith.exponents.iter().any(|&e| e != 0) {
        return Err(ObjectError::Invalid(
            "φ(F(L) ∩ K) does not span a saturated submodule".into(),
        ));
    }
    let b_k = lat_smith.solve(ring, &filt_k).ok_or_else(|| {
        ObjectError::Invalid("F(L) ∩ K is not contained in the span of its φ-image".into())
    })?;
    let n_img = object.n_apply_matrix(&lat);
    let n_k = lat_smith
        .solve(ring, &n_img)
        .ok_or_else(|| ObjectError::Invalid("submodule is not stable under N".into()))?
        .truncate(ring, 2 * p);
    let sub = PhiNModule::from_raw(ring.clone(), b_k, n_k);
    let report = sub.validate();
    if !report.is_ok() {
        return Err(ObjectError::Invalid(format!("sub-object fails: {}", report.summary())));
    }
    Ok((sub, lat))
}

pub fn kernel(f: &Morphism) -> Result<Kernel, ObjectError> {
    let source = f.source();
    let ring = source.ring();
    let sf = morphism_smith(ring, f.matrix())?;
    let cols: Vec<usize> = (0..source.rank())
        .filter(|&j| sf.exponents.get(j).is_none_or(|&e| e >= ring.prec()))
        .collect();
    let basis = sf.v.select_cols(&cols);
    let (object, emb) = sub_object(source, &basis)?;
    let embedding = Morphism::new(object.clone(), source.clone(), emb)?;
    Ok(Kernel { object, embedding })
}

pub fn cokernel(f: &Morphism) -> Result<Cokernel, ObjectError> {
    let target = f.target();
    let ring = target.ring();
    let p = ring.p() as usize;
    let sf = morphism_smith(ring, f.matrix())?;
    let rows: Vec<usize> = (0..target.rank())
        .filter(|&i| sf.exponents.get(i).is_none_or(|&e| e >= ring.prec()))
        .collect();
    let nc = rows.len();
    if nc == 0 {
        let object = PhiNModule::zero(ring.clone());
        let projection = Morphism::new(target.clone(), object.clone(), SeriesMatrix::zeros(ring, 0, target.rank()))?;
        return Ok(Cokernel { object, projection });
    }
    let pi0 = sf.u.select_rows(&rows);
    let g = pi0.mul(ring, target.filt());
    let sg = smith(ring, &g);
    if sg.exponents.iter().any(|&e| e >= p) {
        return Err(ObjectError::Invalid("image of F(M) has the wrong rank in the quotient".into()));
    }
    let filt_c = sg.u_inv.mul(ring, &SeriesMatrix::diag_u_pows(ring, &sg.exponents));
    let lifts = sg.v.select_cols(&(0..nc).collect::<Vec<_>>()).frobenius(ring);
    let lat = pi0.mul(ring, &lifts);
    let lat_inv = crate::base_arith::smith::inverse(ring, &lat)
        .ok_or_else(|| ObjectError::Invalid("φ-image of F(C) does not span C".into()))?;
    let b_c = lat_inv.mul(ring, &filt_c);
    let n_c = lat_inv
        .mul(ring, &pi0.mul(ring, &target.n_apply_matrix(&lifts)))
        .truncate(ring, 2 * p);
    let object = PhiNModule::from_raw(ring.clone(), b_c, n_c);
    let report = object.validate();
    if !report.is_ok() {
        return Err(ObjectError::Invalid(format!("cokernel fails: {}", report.summary())));
    }
    let projection = Morphism::new(target.clone(), object.clone(), lat_inv.mul(ring, &pi0))?;
    Ok(Cokernel { object, projection })
}

/// Injective with saturated image and `i(L₁) ∩ F(L) = i(F(L₁))`.
pub fn is_strict_mono(f: &Morphism) -> bool {
    let source = f.source();
    let ring = source.ring();
    let sf = smith(ring, f.matrix());
    let injective = sf.exponents.len() == source.rank() && sf.exponents.iter().all(|&e| e == 0);
    if !injective {
        return false;
    }
    let lattice = preimage_lattice(f.target(), f.matrix());
    source.filt_coords_matrix(&lattice).is_some()
}

/// Surjective with `j(F(L)) = F(L₂)`.
pub fn is_strict_epi(f: &Morphism) -> bool {
    let target = f.target();
    let ring = target.ring();
    let sf = smith(ring, f.matrix());
    let surjective = sf.exponents.len() == target.rank() && sf.exponents.iter().all(|&e| e == 0);
    if !surjective {
        return false;
    }
    let image = f.matrix().mul(ring, f.source().filt());
    smith(ring, &image).solve(ring, target.filt()).is_some()
}

/// The unique `h` with `emb·h = g`, when `g` lands in the image of `emb`.
pub fn factor_through_mono(emb: &Morphism, g: &Morphism) -> Option<Morphism> {
    let ring = emb.source().ring();
    let h = smith(ring, emb.matrix()).solve(ring, g.matrix())?;
    Morphism::new(g.source().clone(), emb.source().clone(), h).ok()
}

/// The unique `h` with `h·proj = g`, when `g` kills the kernel of `proj`.
pub fn factor_through_epi(proj: &Morphism, g: &Morphism) -> Option<Morphism> {
    let ring = proj.source().ring();
    let ht = smith(ring, &proj.matrix().transpose()).solve(ring, &g.matrix().transpose())?;
    Morphism::new(proj.target().clone(), g.target().clone(), ht.transpose()).ok()
}
