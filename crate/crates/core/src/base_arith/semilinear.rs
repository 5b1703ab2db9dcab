//! σ^e-semilinear operators on `F_q^n` and the solvers built on them.
//!
//! Every solve is reduced to an `(n·m) × (n·m)` linear system over the prime
//! field, since `x ↦ x − M·σ^e(x)` is `F_p`-linear.

use super::field::{Fq, GaloisField};
use super::linalg::{fp_matrix_of, FqMatrix};
use super::ArithError;

/// `x ↦ matrix · σ^twist(x)` on `F_q^n`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SemilinearOp {
    pub matrix: FqMatrix,
    pub twist: i64,
}

impl SemilinearOp {
    pub fn new(matrix: FqMatrix, twist: i64) -> Self {
        assert_eq!(matrix.rows(), matrix.cols(), "semilinear operator must be square");
        SemilinearOp { matrix, twist }
    }

    pub fn zero(n: usize, twist: i64) -> Self {
        SemilinearOp::new(FqMatrix::zeros(n, n), twist)
    }

    pub fn dim(&self) -> usize {
        self.matrix.rows()
    }

    pub fn apply(&self, f: &GaloisField, x: &[Fq]) -> Vec<Fq> {
        let twisted: Vec<Fq> = x.iter().map(|&c| f.frob(c, self.twist)).collect();
        self.matrix.mul_vec(f, &twisted)
    }

    /// `self ∘ other`.
    pub fn compose(&self, f: &GaloisField, other: &SemilinearOp) -> SemilinearOp {
        let m = self.matrix.mul(f, &other.matrix.frob(f, self.twist));
        SemilinearOp::new(m, self.twist + other.twist)
    }

    pub fn power(&self, f: &GaloisField, k: usize) -> SemilinearOp {
        let mut acc = SemilinearOp::new(FqMatrix::identity(self.dim()), 0);
        for _ in 0..k {
            acc = self.compose(f, &acc);
        }
        acc
    }

    pub fn is_nilpotent(&self, f: &GaloisField) -> bool {
        self.power(f, self.dim()).matrix.is_zero()
    }

    /// Least `k` with `A^k = 0`, if `A` is nilpotent.
    pub fn nilpotency_order(&self, f: &GaloisField) -> Option<usize> {
        let mut acc = SemilinearOp::new(FqMatrix::identity(self.dim()), 0);
        for k in 0..=self.dim() {
            if acc.matrix.is_zero() {
                return Some(k);
            }
            acc = self.compose(f, &acc);
        }
        None
    }
}

fn flatten(f: &GaloisField, x: &[Fq]) -> Vec<Fq> {
    x.iter().flat_map(|&c| f.fp_coords(c)).collect()
}

fn unflatten(f: &GaloisField, x: &[Fq]) -> Vec<Fq> {
    x.chunks(f.m()).map(|c| f.from_fp_coords(c)).collect()
}

/// Solve `x − A(x) = b`.
///
/// When `A` is nilpotent the solution is unique. Otherwise the returned
/// solution has the free prime-field coordinates set to zero.
pub fn solve_id_minus_a(f: &GaloisField, a: &SemilinearOp, b: &[Fq]) -> Result<Vec<Fq>, ArithError> {
    let n = a.dim();
    assert_eq!(b.len(), n, "right-hand side has the wrong length");
    let prime = GaloisField::prime(f.p()).expect("characteristic already validated");
    let system = fp_matrix_of(&prime, n * f.m(), |xf| {
        let x = unflatten(f, xf);
        let ax = a.apply(f, &x);
        let diff: Vec<Fq> = x.iter().zip(&ax).map(|(&u, &v)| f.sub(u, v)).collect();
        flatten(f, &diff)
    });
    match system.solve(&prime, &flatten(f, b)) {
        Some(xf) => Ok(unflatten(f, &xf)),
        None => Err(ArithError::FieldTooSmall {
            q: f.q(),
            equation: format!(
                "x - M·σ^{}(x) = b with M = {:?}, b = {:?} (encodings)",
                a.twist,
                (0..n)
                    .map(|i| a.matrix.row(i).iter().map(|c| c.encoding()).collect::<Vec<_>>())
                    .collect::<Vec<_>>(),
                b.iter().map(|c| c.encoding()).collect::<Vec<_>>()
            ),
        }),
    }
}

/// Solve `(σ₀g₁, 0) = g·C + a` for a row vector `g = (g₁, g₂) ∈ V^n`.
///
/// `g₁` has `s` entries. Entries of `a` and `g` are vectors in `V = F_q^d`
/// and `σ₀` acts on `V`. With `C⁻¹ = [[D11, D12], [D21, D22]]` and
/// `a' = a·C⁻¹`, the system is `g₁ = (σ₀g₁)·D11 − a'₁`, `g₂ = (σ₀g₁)·D12 − a'₂`.
pub fn solve_sigma_block(
    f: &GaloisField,
    c: &FqMatrix,
    a: &[Vec<Fq>],
    sigma0: &SemilinearOp,
    s: usize,
) -> Result<Vec<Vec<Fq>>, ArithError> {
    let n = c.rows();
    assert_eq!(a.len(), n, "a must have one entry per column of C");
    assert!(s <= n, "block size exceeds the dimension");
    let d = sigma0.dim();
    let dinv = c.inverse(f).ok_or(ArithError::Singular)?;
    let row_times = |g: &[Vec<Fq>], k: usize| -> Vec<Fq> {
        let mut acc = vec![Fq::ZERO; d];
        for (i, gi) in g.iter().enumerate() {
            let coeff = dinv[(i, k)];
            for (t, &x) in gi.iter().enumerate() {
                acc[t] = f.add(acc[t], f.mul(coeff, x));
            }
        }
        acc
    };
    let a_prime: Vec<Vec<Fq>> = (0..n).map(|k| row_times(a, k)).collect();

    // g₁ ↦ (σ₀g₁)·D11 as one semilinear operator on V^s.
    let mut big = FqMatrix::zeros(d * s, d * s);
    for k in 0..s {
        for i in 0..s {
            let coeff = dinv[(i, k)];
            for r in 0..d {
                for t in 0..d {
                    big[(k * d + r, i * d + t)] = f.mul(coeff, sigma0.matrix[(r, t)]);
                }
            }
        }
    }
    let psi = SemilinearOp::new(big, sigma0.twist);
    let rhs: Vec<Fq> = a_prime[..s].iter().flatten().map(|&x| f.neg(x)).collect();
    let g1_flat = solve_id_minus_a(f, &psi, &rhs)?;
    let g1: Vec<Vec<Fq>> = g1_flat.chunks(d).map(<[Fq]>::to_vec).collect();

    let sigma_g1: Vec<Vec<Fq>> = g1.iter().map(|x| sigma0.apply(f, x)).collect();
    let mut g = g1;
    for k in s..n {
        let mut acc = vec![Fq::ZERO; d];
        for (i, sx) in sigma_g1.iter().enumerate() {
            let coeff = dinv[(i, k)];
            for (t, &x) in sx.iter().enumerate() {
                acc[t] = f.add(acc[t], f.mul(coeff, x));
            }
        }
        g.push(acc.iter().zip(&a_prime[k]).map(|(&u, &v)| f.sub(u, v)).collect());
    }
    Ok(g)
}

/// Fitting decomposition `F_q^n = V_inv ⊕ V_nil` of a semilinear operator.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FittingSplit {
    /// Basis of the image of `A^n`.
    pub invertible: Vec<Vec<Fq>>,
    /// Basis of the kernel of `A^n`.
    pub nilpotent: Vec<Vec<Fq>>,
}

pub fn fitting_split(f: &GaloisField, a: &SemilinearOp) -> FittingSplit {
    let n = a.dim();
    let an = a.power(f, n);
    let invertible = an.matrix.column_space(f);
    // A^n(x) = P·σ^{t}(x) vanishes iff σ^{t}(x) ∈ ker P.
    let nilpotent = an
        .matrix
        .kernel(f)
        .into_iter()
        .map(|v| v.into_iter().map(|c| f.frob(c, -an.twist)).collect())
        .collect();
    FittingSplit {
        invertible,
        nilpotent,
    }
}
