//! Morphisms of `L*` and the `F_p`-space of all of them.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::{ObjectError, PhiNModule};
use crate::base_arith::linalg::fp_kernel_of;
use crate::base_arith::smith::inverse;
use crate::base_arith::{Fq, GaloisField, SeriesMatrix, TruncSeries};

/// A `W₁`-linear map `L₁ → L₂` given on `l`-bases, preserving `F`, `φ` and `N`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Morphism {
    source: PhiNModule,
    target: PhiNModule,
    matrix: SeriesMatrix,
}

/// Why `matrix` fails to be a morphism, if it does.
pub fn morphism_defect(source: &PhiNModule, target: &PhiNModule, matrix: &SeriesMatrix) -> Option<String> {
    if matrix.rows() != target.rank() || matrix.cols() != source.rank() {
        return Some(format!(
            "matrix is {}x{}, expected {}x{}",
            matrix.rows(),
            matrix.cols(),
            target.rank(),
            source.rank()
        ));
    }
    let ring = source.ring();
    let p = ring.p() as usize;
    let image_of_filt = matrix.mul(ring, source.filt());
    let Some(x) = target.filt_coords_matrix(&image_of_filt) else {
        return Some("F(L₁) is not mapped into F(L₂)".into());
    };
    if x.frobenius(ring) != *matrix {
        return Some("does not commute with φ".into());
    }
    let lhs = matrix.mul(ring, source.n_table()).truncate(ring, 2 * p);
    let rhs = target.n_apply_matrix(matrix);
    if lhs != rhs {
        return Some("does not commute with N".into());
    }
    None
}

impl Morphism {
    pub fn new(source: PhiNModule, target: PhiNModule, matrix: SeriesMatrix) -> Result<Self, ObjectError> {
        let matrix = matrix.coerce(source.ring());
        match morphism_defect(&source, &target, &matrix) {
            Some(reason) => Err(ObjectError::InvalidMorphism(reason)),
            None => Ok(Morphism {
                source,
                target,
                matrix,
            }),
        }
    }

    pub fn identity(object: &PhiNModule) -> Self {
        Morphism {
            source: object.clone(),
            target: object.clone(),
            matrix: SeriesMatrix::identity(object.ring(), object.rank()),
        }
    }

    pub fn zero(source: &PhiNModule, target: &PhiNModule) -> Self {
        Morphism {
            source: source.clone(),
            target: target.clone(),
            matrix: SeriesMatrix::zeros(source.ring(), target.rank(), source.rank()),
        }
    }

    pub fn source(&self) -> &PhiNModule {
        &self.source
    }

    pub fn target(&self) -> &PhiNModule {
        &self.target
    }

    pub fn matrix(&self) -> &SeriesMatrix {
        &self.matrix
    }

    pub fn is_zero(&self) -> bool {
        self.matrix.is_zero()
    }

    /// `self ∘ first`.
    pub fn compose(&self, first: &Morphism) -> Result<Morphism, ObjectError> {
        if first.target != self.source {
            return Err(ObjectError::Shape("composition of non-composable morphisms".into()));
        }
        Ok(Morphism {
            source: first.source.clone(),
            target: self.target.clone(),
            matrix: self.matrix.mul(self.source.ring(), &first.matrix),
        })
    }

    /// The inverse, if this is an isomorphism in `L*`.
    pub fn inverse(&self) -> Option<Morphism> {
        if self.source.rank() != self.target.rank() {
            return None;
        }
        let inv = inverse(self.source.ring(), &self.matrix)?;
        Morphism::new(self.target.clone(), self.source.clone(), inv).ok()
    }

    pub fn is_isomorphism(&self) -> bool {
        self.inverse().is_some()
    }
}

fn push_coeffs(field: &GaloisField, out: &mut Vec<Fq>, s: &TruncSeries, upto: usize) {
    for k in 0..upto {
        out.extend(field.fp_coords(s.coeff(k)));
    }
}

/// An `F_p`-basis of `Hom(source, target)`.
///
/// A morphism is `M = σ(Y)` with `Y = B₂⁻¹·M·B₁`, and `σ(Y)` mod `u^P` only
/// sees `Y` mod `u^{⌈P/p⌉}`; the conditions are `F_p`-linear in those coefficients.
pub fn hom_basis(source: &PhiNModule, target: &PhiNModule) -> Vec<SeriesMatrix> {
    let ring = source.ring();
    let field = ring.field();
    let p = ring.p() as usize;
    let prec = ring.prec();
    let c = prec.div_ceil(p);
    let (nt, ns) = (target.rank(), source.rank());
    let m = field.m();
    let unknowns = nt * ns * c * m;
    if unknowns == 0 {
        return Vec::new();
    }
    let prime = GaloisField::prime(field.p()).expect("characteristic already validated");
    let sf = target.filt_smith();
    let build_y = |xs: &[Fq]| -> SeriesMatrix {
        SeriesMatrix::from_fn(nt, ns, |i, j| {
            let base = (i * ns + j) * c * m;
            let coeffs: Vec<Fq> = (0..c)
                .map(|k| field.from_fp_coords(&xs[base + k * m..base + (k + 1) * m]))
                .collect();
            ring.from_coeffs(&coeffs)
        })
    };
    let residual = |xs: &[Fq]| -> Vec<Fq> {
        let y = build_y(xs);
        let mm = y.frobenius(ring);
        let w = sf.u.mul(ring, &mm.mul(ring, source.filt()));
        let mut out = Vec::new();
        let mut z = SeriesMatrix::zeros(ring, nt, ns);
        for i in 0..nt {
            let e = sf.exponents[i];
            for j in 0..ns {
                push_coeffs(field, &mut out, &w[(i, j)], e);
                z[(i, j)] = ring.shift_down(&w[(i, j)], e);
            }
        }
        let x = sf.v.mul(ring, &z);
        let diff = x.sub(ring, &y);
        for i in 0..nt {
            for j in 0..ns {
                push_coeffs(field, &mut out, &diff[(i, j)], c);
            }
        }
        let lhs = mm.mul(ring, source.n_table());
        let rhs = target.n_apply_matrix(&mm);
        let dn = lhs.sub(ring, &rhs);
        for i in 0..nt {
            for j in 0..ns {
                push_coeffs(field, &mut out, &dn[(i, j)], 2 * p);
            }
        }
        out
    };
    fp_kernel_of(&prime, unknowns, residual)
        .into_iter()
        .map(|v| build_y(&v).frobenius(ring))
        .collect()
}

/// `Σ c_k·basis_k` for prime-field coefficients `c_k`.
pub fn fp_combination(source: &PhiNModule, basis: &[SeriesMatrix], coeffs: &[u32]) -> SeriesMatrix {
    let ring = source.ring();
    let field = ring.field();
    let (r, c) = basis
        .first()
        .map_or((0, 0), |b| (b.rows(), b.cols()));
    basis
        .iter()
        .zip(coeffs)
        .fold(SeriesMatrix::zeros(ring, r, c), |acc, (b, &k)| {
            acc.add(ring, &b.scale(ring, &ring.constant(field.from_int(k as i64))))
        })
}

/// Some isomorphism `a → b`, searched among `F_p`-combinations of a Hom basis.
///
/// Small spaces are searched exhaustively; larger ones by seeded random trials.
pub fn find_isomorphism(a: &PhiNModule, b: &PhiNModule, seed: u64) -> Option<Morphism> {
    if a.rank() != b.rank() || a.ring() != b.ring() {
        return None;
    }
    if a.rank() == 0 {
        return Some(Morphism::identity(a));
    }
    let basis = hom_basis(a, b);
    let d = basis.len();
    if d == 0 {
        return None;
    }
    let p = a.p();
    let try_coeffs = |coeffs: &[u32]| -> Option<Morphism> {
        let m = fp_combination(a, &basis, coeffs);
        m.constant_part().inverse(a.field())?;
        Morphism::new(a.clone(), b.clone(), m).ok()?.inverse()?.inverse()
    };
    let total = (p as u64).checked_pow(d as u32).filter(|&t| t <= 1 << 14);
    match total {
        Some(total) => (1..total).find_map(|n| {
            let mut k = n;
            let coeffs: Vec<u32> = (0..d)
                .map(|_| {
                    let c = (k % p as u64) as u32;
                    k /= p as u64;
                    c
                })
                .collect();
            try_coeffs(&coeffs)
        }),
        None => {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            (0..4096).find_map(|_| {
                let coeffs: Vec<u32> = (0..d).map(|_| rng.gen_range(0..p)).collect();
                try_coeffs(&coeffs)
            })
        }
    }
}
