//! The Fontaine–Laffaille functor `MF_{p−1} → L*_cr` and its inverse on objects.
//!
//! An FL module is presented by a basis `e_1, …, e_s` adapted to the
//! filtration with jumps `j(i)` and the invertible matrix `A` whose column
//! `i` is `φ_{j(i)}(e_i)`.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::crystalline::special_basis;
use super::morphism::{find_isomorphism, Morphism};
use super::{ObjectError, PhiNModule};
use crate::base_arith::linalg::fp_kernel_of;
use crate::base_arith::field::MAX_FIELD_ORDER;
use crate::base_arith::{ArithError, FieldEmbedding, Fq, FqMatrix, GaloisField, SeriesMatrix, SeriesRing};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FlModule {
    field: GaloisField,
    jumps: Vec<usize>,
    phi: FqMatrix,
}

impl FlModule {
    pub fn new(field: GaloisField, jumps: Vec<usize>, phi: FqMatrix) -> Result<Self, ObjectError> {
        let p = field.p() as usize;
        let s = jumps.len();
        if phi.rows() != s || phi.cols() != s {
            return Err(ObjectError::InvalidFl(format!("φ-matrix must be {s}x{s}")));
        }
        if jumps.iter().any(|&j| j >= p) {
            return Err(ObjectError::InvalidFl(format!("jumps must lie in [0, {p})")));
        }
        if jumps.windows(2).any(|w| w[0] > w[1]) {
            return Err(ObjectError::InvalidFl("jumps must be nondecreasing".into()));
        }
        if phi.inverse(&field).is_none() {
            return Err(ObjectError::InvalidFl("the images of the φ_i do not span M".into()));
        }
        Ok(FlModule { field, jumps, phi })
    }

    pub fn field(&self) -> &GaloisField {
        &self.field
    }

    pub fn dim(&self) -> usize {
        self.jumps.len()
    }

    pub fn jumps(&self) -> &[usize] {
        &self.jumps
    }

    /// Extension of scalars along `emb`.
    pub fn base_change(&self, emb: &FieldEmbedding) -> FlModule {
        FlModule {
            field: emb.target().clone(),
            jumps: self.jumps.clone(),
            phi: self.phi.map(|c| emb.apply(c)),
        }
    }

    /// Column `i` is `φ_{j(i)}(e_i)`.
    pub fn phi(&self) -> &FqMatrix {
        &self.phi
    }
}

/// `L = M ⊗ W₁`, `F(L) = Σ W₁·u^{p−1−j(i)}e_i`, `φ(u^{p−1−j(i)}e_i) = φ_{j(i)}(e_i)`,
/// with the crystalline `N`.
///
/// The object's `l`-basis is the columns of `A`, so `B = A⁻¹·diag(u^{p−1−j})`.
pub fn fl_to_module(m: &FlModule, ring: &SeriesRing) -> Result<PhiNModule, ObjectError> {
    let field = ring.field();
    let p = field.p() as usize;
    let a_inv = m.phi.inverse(field).expect("validated on construction");
    let exps: Vec<usize> = m.jumps.iter().map(|&j| p - 1 - j).collect();
    let filt = SeriesMatrix::from_constant(ring, &a_inv).mul(ring, &SeriesMatrix::diag_u_pows(ring, &exps));
    PhiNModule::crystalline(ring.clone(), filt)
}

#[derive(Clone, Debug)]
pub struct FlNormalization {
    pub module: FlModule,
    /// Isomorphism `fl_to_module(module) → L` after extending scalars to
    /// `F_{q^k}` with `k = extension_degree`; `k = 1` keeps `L` itself.
    pub witness: Morphism,
    pub extension_degree: usize,
}

/// The FL module of a crystalline object.
///
/// A special basis `Λ` spans the `σ(W₁)`-lattice generated by `φ(F(L))`, and
/// `M` is that lattice mod `u^p`. In `Λ`-coordinates the filtration of `M` is
/// the coordinate one with jumps `p−1−c_i`, and `φ_{j(i)}(e_i)` is the
/// constant term of `Λ⁻¹φ(u^{c_i}Λe_i)`.
pub fn fl_module_of(object: &PhiNModule) -> Result<FlModule, ObjectError> {
    let ring = object.ring();
    let field = ring.field();
    let p = field.p() as usize;
    let s = object.rank();
    let sb = special_basis(object)?;
    let diag_c = SeriesMatrix::diag_u_pows(ring, &sb.exponents);
    let image = object
        .phi_matrix(&sb.basis.mul(ring, &diag_c))
        .expect("u^{c_i}·l'_i lies in F(L)");
    let lambda_inv = crate::base_arith::smith::inverse(ring, &sb.basis)
        .ok_or_else(|| ObjectError::Invalid("special basis is not a basis".into()))?;
    let a = lambda_inv.mul(ring, &image).constant_part();
    let jumps_unsorted: Vec<usize> = sb.exponents.iter().map(|&c| p - 1 - c).collect();
    let mut order: Vec<usize> = (0..s).collect();
    order.sort_by_key(|&i| jumps_unsorted[i]);
    let jumps: Vec<usize> = order.iter().map(|&i| jumps_unsorted[i]).collect();
    let mut a_sorted = FqMatrix::zeros(s, s);
    for (x, &i) in order.iter().enumerate() {
        for (y, &j) in order.iter().enumerate() {
            a_sorted[(x, y)] = a[(i, j)];
        }
    }
    FlModule::new(field.clone(), jumps, a_sorted)
}

/// The FL module of `object` with an isomorphism witness.
///
/// Lifting the recovered basis so that `φ` has a constant matrix means
/// solving `x − A(x) = b` for a σ-linear `A`, which may need Artin–Schreier
/// roots outside `F_q` when jumps differ. The witness is searched in
/// `Hom(fl_to_module(M), L)` over `F_q` and then over `F_{q^k}`, `k = 2, 3, …`,
/// while the field tables allow.
pub fn fl_normalize(object: &PhiNModule) -> Result<FlNormalization, ObjectError> {
    let module = fl_module_of(object)?;
    let ring = object.ring();
    let field = ring.field();
    if let Some(witness) = find_isomorphism(&fl_to_module(&module, ring)?, object, 0) {
        return Ok(FlNormalization {
            module,
            witness,
            extension_degree: 1,
        });
    }
    let fits = |k: usize| (field.q() as u64).checked_pow(k as u32).is_some_and(|q| q <= MAX_FIELD_ORDER);
    for k in (2..).take_while(|&k| fits(k)) {
        let big = GaloisField::with_degree(field.p(), field.m() * k).map_err(ArithError::from)?;
        let emb = FieldEmbedding::new(field, &big).map_err(ArithError::from)?;
        let big_ring = SeriesRing::new(big, ring.prec());
        let source = fl_to_module(&module.base_change(&emb), &big_ring)?;
        if let Some(witness) = find_isomorphism(&source, &object.base_change(&emb, &big_ring), 0) {
            return Ok(FlNormalization {
                module,
                witness,
                extension_degree: k,
            });
        }
    }
    Err(ArithError::FieldTooSmall {
        q: field.q(),
        equation: "φ(Λ'D) = Λ'A for a lift Λ' of the recovered FL basis".into(),
    }
    .into())
}

/// Whether `G` (mapping `e_i ↦ Σ_k G_{ki} e'_k`) is a morphism `M₁ → M₂` of FL modules.
pub fn fl_is_morphism(m1: &FlModule, m2: &FlModule, g: &FqMatrix) -> bool {
    let f = &m1.field;
    if g.rows() != m2.dim() || g.cols() != m1.dim() {
        return false;
    }
    for i in 0..m1.dim() {
        for k in 0..m2.dim() {
            if m2.jumps[k] < m1.jumps[i] && !g[(k, i)].is_zero() {
                return false;
            }
        }
        let lhs = g.mul_vec(f, &m1.phi.col(i));
        let mut rhs = vec![Fq::ZERO; m2.dim()];
        for k in (0..m2.dim()).filter(|&k| m2.jumps[k] == m1.jumps[i]) {
            let c = f.frob(g[(k, i)], 1);
            for (r, x) in rhs.iter_mut().enumerate() {
                *x = f.add(*x, f.mul(c, m2.phi[(r, k)]));
            }
        }
        if lhs != rhs {
            return false;
        }
    }
    true
}

/// An isomorphism of FL modules, if one is found among `F_p`-combinations of
/// a basis of the morphism space.
pub fn fl_is_isomorphic(m1: &FlModule, m2: &FlModule, seed: u64) -> Option<FqMatrix> {
    if m1.dim() != m2.dim() || m1.field != m2.field || m1.jumps != m2.jumps {
        return None;
    }
    let f = &m1.field;
    let s = m1.dim();
    let m = f.m();
    let prime = GaloisField::prime(f.p()).expect("characteristic already validated");
    let build = |xs: &[Fq]| -> FqMatrix {
        let mut g = FqMatrix::zeros(s, s);
        for r in 0..s {
            for c in 0..s {
                let base = (r * s + c) * m;
                g[(r, c)] = f.from_fp_coords(&xs[base..base + m]);
            }
        }
        g
    };
    let residual = |xs: &[Fq]| -> Vec<Fq> {
        let g = build(xs);
        let mut out = Vec::new();
        for i in 0..s {
            for k in 0..s {
                if m2.jumps[k] < m1.jumps[i] {
                    out.extend(f.fp_coords(g[(k, i)]));
                }
            }
            let lhs = g.mul_vec(f, &m1.phi.col(i));
            for (r, &l) in lhs.iter().enumerate() {
                let rhs = f.sum(
                    (0..s)
                        .filter(|&k| m2.jumps[k] == m1.jumps[i])
                        .map(|k| f.mul(f.frob(g[(k, i)], 1), m2.phi[(r, k)])),
                );
                out.extend(f.fp_coords(f.sub(l, rhs)));
            }
        }
        out
    };
    let basis: Vec<FqMatrix> = fp_kernel_of(&prime, s * s * m, residual)
        .iter()
        .map(|v| build(v))
        .collect();
    let d = basis.len();
    let p = f.p();
    let combine = |coeffs: &[u32]| -> FqMatrix {
        basis.iter().zip(coeffs).fold(FqMatrix::zeros(s, s), |acc, (b, &c)| {
            acc.add(f, &b.map(|x| f.mul(f.from_int(c as i64), x)))
        })
    };
    let invertible = |g: &FqMatrix| g.inverse(f).is_some();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    match (p as u64).checked_pow(d as u32).filter(|&t| t <= 1 << 14) {
        Some(total) => (1..total)
            .map(|n| {
                let mut k = n;
                (0..d)
                    .map(|_| {
                        let c = (k % p as u64) as u32;
                        k /= p as u64;
                        c
                    })
                    .collect::<Vec<_>>()
            })
            .map(|c| combine(&c))
            .find(invertible),
        None => (0..4096)
            .map(|_| combine(&(0..d).map(|_| rng.gen_range(0..p)).collect::<Vec<_>>()))
            .find(invertible),
    }
}
