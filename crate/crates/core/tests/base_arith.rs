use phimod::base_arith::linalg::fp_kernel_of;
use phimod::base_arith::smith::{inverse, smith, solve_right};
use phimod::base_arith::*;
use proptest::prelude::*;

fn field(p: u32, m: usize) -> GaloisField {
    GaloisField::with_degree(p, m).unwrap()
}

/// Polynomial product of coordinate vectors reduced by a monic modulus, done by hand.
fn poly_mul_mod(a: &[u32], b: &[u32], modulus: &[u32], p: u32) -> Vec<u32> {
    let m = modulus.len() - 1;
    let mut prod = vec![0u64; 2 * m];
    for (i, &x) in a.iter().enumerate() {
        for (j, &y) in b.iter().enumerate() {
            prod[i + j] = (prod[i + j] + x as u64 * y as u64) % p as u64;
        }
    }
    for k in (m..prod.len()).rev() {
        let c = prod[k];
        if c == 0 {
            continue;
        }
        for (t, &mc) in modulus.iter().enumerate() {
            let idx = k - m + t;
            prod[idx] = (prod[idx] + (p as u64 - c) * mc as u64) % p as u64;
        }
    }
    prod[..m].iter().map(|&c| c as u32).collect()
}

fn has_root(poly: &[u32], p: u32) -> bool {
    (0..p as u64).any(|x| poly.iter().rev().fold(0u64, |acc, &c| (acc * x + c as u64) % p as u64) == 0)
}

#[test]
fn first_irreducible_matches_root_search() {
    // Degrees 2 and 3 are irreducible iff rootless.
    for p in [3u32, 5, 7] {
        for m in [2usize, 3] {
            let expected = (0..(p as u64).pow(m as u32))
                .map(|n| {
                    let mut c: Vec<u32> = (0..m).map(|k| ((n / (p as u64).pow(k as u32)) % p as u64) as u32).collect();
                    c.push(1);
                    c
                })
                .find(|c| !has_root(c, p))
                .unwrap();
            assert_eq!(FieldSpec::first_irreducible(p, m).unwrap().modulus, expected, "p={p} m={m}");
        }
    }
    assert_eq!(FieldSpec::first_irreducible(3, 2).unwrap().modulus, vec![1, 0, 1]);
    assert_eq!(FieldSpec::first_irreducible(3, 3).unwrap().modulus, vec![1, 2, 0, 1]);
}

#[test]
fn construction_errors() {
    assert_eq!(GaloisField::prime(2).unwrap_err(), FieldError::BadCharacteristic(2));
    assert_eq!(GaloisField::prime(9).unwrap_err(), FieldError::BadCharacteristic(9));
    let reducible = FieldSpec { p: 3, m: 2, modulus: vec![2, 0, 1] };
    assert!(matches!(GaloisField::new(reducible), Err(FieldError::Reducible { .. })));
    let wrong = FieldSpec { p: 3, m: 3, modulus: vec![1, 0, 1] };
    assert!(matches!(GaloisField::new(wrong), Err(FieldError::BadDegree { .. })));
    assert!(matches!(field(3, 2).from_coords(&[1, 2, 0]), Err(FieldError::BadCoordinates { .. })));
}

#[test]
fn field_tables_agree_with_schoolbook_arithmetic() {
    for (p, m) in [(3, 1), (3, 2), (3, 3), (5, 2), (7, 2)] {
        let f = field(p, m);
        let modulus = f.spec().modulus.clone();
        assert_eq!(f.elements().count() as u32, f.q());
        for a in f.elements() {
            for b in f.elements() {
                let (ca, cb) = (f.coords(a), f.coords(b));
                let sum: Vec<u32> = ca.iter().zip(&cb).map(|(x, y)| (x + y) % p).collect();
                assert_eq!(f.coords(f.add(a, b)), sum);
                assert_eq!(f.coords(f.mul(a, b)), poly_mul_mod(&ca, &cb, &modulus, p));
            }
            assert_eq!(f.from_coords(&f.coords(a)).unwrap(), a);
            assert_eq!(f.from_fp_coords(&f.fp_coords(a)), a);
            assert_eq!(f.frob(a, 1), f.pow(a, p as u64));
            assert_eq!(f.frob(f.frob(a, 1), -1), a);
            assert_eq!(f.frob(a, m as i64), a);
            if !a.is_zero() {
                assert_eq!(f.mul(a, f.inv(a).unwrap()), f.one());
                assert_eq!(f.pow(a, f.q() as u64 - 1), f.one());
            }
            assert_eq!(f.in_subfield(a, 1), f.to_prime(a).is_some());
        }
        assert_eq!(f.inv(f.zero()), None);
    }
}

#[test]
fn series_ring_basics() {
    let r = SeriesRing::with_default_prec(field(3, 2));
    assert_eq!(r.prec(), 9);
    assert_eq!(r.with_prec(4).prec(), 4);
    let f = r.field().clone();
    let g = f.element(4);
    let a = r.from_coeffs(&[f.one(), g, f.zero(), g]);
    assert_eq!(r.shift_down(&r.shift_up(&a, 2), 2), r.truncate(&a, r.prec() - 2));
    assert_eq!(r.u_pow(3).val(), 3);
    assert_eq!(r.zero().val(), r.prec());
    // σ(1 + g u) = 1 + σ(g) u^3.
    let b = r.from_coeffs(&[f.one(), g]);
    assert_eq!(r.frobenius(&b), r.add(&r.one(), &r.monomial(f.frob(g, 1), 3)));
    assert!(r.in_sigma_image(&r.frobenius(&a)));
    assert_eq!(r.frobenius(&r.sigma_root_part(&r.frobenius(&a))), r.frobenius(&a));
    assert!(r.inverse(&r.u_pow(1)).is_none());
}

fn series_strategy(q: u32, prec: usize) -> impl Strategy<Value = Vec<u32>> {
    prop::collection::vec(0..q, prec)
}

proptest! {
    #[test]
    fn series_mul_is_truncated_convolution(a in series_strategy(9, 9), b in series_strategy(9, 9)) {
        let r = SeriesRing::with_default_prec(field(3, 2));
        let f = r.field().clone();
        let sa = r.from_coeffs(&a.iter().map(|&x| f.element(x)).collect::<Vec<_>>());
        let sb = r.from_coeffs(&b.iter().map(|&x| f.element(x)).collect::<Vec<_>>());
        let prod = r.mul(&sa, &sb);
        for k in 0..r.prec() {
            let expected = f.sum((0..=k).map(|i| f.mul(sa.coeff(i), sb.coeff(k - i))));
            prop_assert_eq!(prod.coeff(k), expected);
        }
    }

    #[test]
    fn frobenius_and_n_are_compatible(a in series_strategy(9, 9), b in series_strategy(9, 9)) {
        let r = SeriesRing::with_default_prec(field(3, 2));
        let f = r.field().clone();
        let sa = r.from_coeffs(&a.iter().map(|&x| f.element(x)).collect::<Vec<_>>());
        let sb = r.from_coeffs(&b.iter().map(|&x| f.element(x)).collect::<Vec<_>>());
        prop_assert_eq!(r.frobenius(&r.mul(&sa, &sb)), r.mul(&r.frobenius(&sa), &r.frobenius(&sb)));
        prop_assert_eq!(r.frobenius(&r.add(&sa, &sb)), r.add(&r.frobenius(&sa), &r.frobenius(&sb)));
        let leibniz = r.add(&r.mul(&r.derivation_n(&sa), &sb), &r.mul(&sa, &r.derivation_n(&sb)));
        prop_assert_eq!(r.derivation_n(&r.mul(&sa, &sb)), leibniz);
        prop_assert!(r.derivation_n(&r.frobenius(&sa)).is_zero());
        if let Some(inv) = r.inverse(&sa) {
            prop_assert_eq!(r.mul(&sa, &inv), r.one());
        } else {
            prop_assert!(sa.coeff(0).is_zero());
        }
    }
}

fn series_matrix(r: &SeriesRing, rows: usize, cols: usize, data: &[u32]) -> SeriesMatrix {
    let f = r.field().clone();
    let prec = r.prec();
    SeriesMatrix::from_fn(rows, cols, |i, j| {
        let base = (i * cols + j) * prec;
        let coeffs: Vec<Fq> = data[base..base + prec].iter().map(|&x| f.element(x)).collect();
        r.from_coeffs(&coeffs)
    })
}

/// Valuation of the determinant of a 2×2 matrix.
fn det_val(r: &SeriesRing, m: &SeriesMatrix) -> usize {
    r.sub(&r.mul(&m[(0, 0)], &m[(1, 1)]), &r.mul(&m[(0, 1)], &m[(1, 0)])).val()
}

#[test]
fn smith_exponents_of_a_frozen_matrix() {
    let r = SeriesRing::new(field(3, 1), 6);
    let f = r.field().clone();
    // [[u, u^2], [u^2, u^3 + u^4]] has elementary divisors u, u^4.
    let m = SeriesMatrix::from_fn(2, 2, |i, j| match (i, j) {
        (0, 0) => r.u_pow(1),
        (0, 1) | (1, 0) => r.u_pow(2),
        _ => r.add(&r.u_pow(3), &r.u_pow(4)),
    });
    let sf = smith(&r, &m);
    assert_eq!(sf.exponents, vec![1, 4]);
    assert_eq!(sf.rank(), 2);
    assert!(u_smith_form(&r, &m).is_ok());
    let singular = SeriesMatrix::from_fn(2, 2, |_, _| r.scale(f.one(), &r.u_pow(1)));
    assert_eq!(smith(&r, &singular).exponents, vec![1, 6]);
    assert!(matches!(u_smith_form(&r, &singular), Err(ArithError::PrecisionLoss { index: 1, .. })));
}

proptest! {
    #[test]
    fn smith_form_is_an_equivalence(data in prop::collection::vec(0u32..3, 2 * 3 * 5), vals in prop::collection::vec(0usize..3, 6)) {
        let r = SeriesRing::new(field(3, 1), 5);
        // Push some entries up in valuation so that interesting divisors occur.
        let m = series_matrix(&r, 2, 3, &data);
        let m = SeriesMatrix::from_fn(2, 3, |i, j| r.shift_up(&m[(i, j)], vals[i * 3 + j]));
        let sf = smith(&r, &m);
        prop_assert_eq!(sf.u.mul(&r, &m).mul(&r, &sf.v), sf.diagonal(&r));
        prop_assert_eq!(sf.u.mul(&r, &sf.u_inv), SeriesMatrix::identity(&r, 2));
        prop_assert_eq!(sf.v.mul(&r, &sf.v_inv), SeriesMatrix::identity(&r, 3));
        prop_assert!(sf.exponents.windows(2).all(|w| w[0] <= w[1]));
        prop_assert_eq!(sf.exponents[0], m.min_val());
    }

    #[test]
    fn smith_matches_minor_valuations(data in prop::collection::vec(0u32..9, 2 * 2 * 4), shift in 0usize..2) {
        let r = SeriesRing::new(field(3, 2), 4);
        let m = series_matrix(&r, 2, 2, &data);
        let m = SeriesMatrix::from_fn(2, 2, |i, j| if i == 1 { r.shift_up(&m[(i, j)], shift) } else { m[(i, j)].clone() });
        let sf = smith(&r, &m);
        let total = (sf.exponents[0] + sf.exponents[1]).min(r.prec());
        let dv = det_val(&r, &m);
        if sf.exponents[1] < r.prec() {
            prop_assert_eq!(total, dv);
        } else {
            prop_assert!(dv >= sf.exponents[0]);
        }
        if let Some(inv) = inverse(&r, &m) {
            prop_assert_eq!(m.mul(&r, &inv), SeriesMatrix::identity(&r, 2));
            prop_assert_eq!(dv, 0);
        } else {
            prop_assert!(dv > 0);
        }
        let y = m.mul(&r, &series_matrix(&r, 2, 1, &data[..8]));
        let x = solve_right(&r, &m, &y).expect("y lies in the image");
        prop_assert_eq!(m.mul(&r, &x), y);
    }

    #[test]
    fn fq_matrix_rank_nullity_and_solve(data in prop::collection::vec(0u32..25, 12), b in prop::collection::vec(0u32..25, 3)) {
        let f = field(5, 2);
        let m = FqMatrix::from_rows((0..3).map(|i| (0..4).map(|j| f.element(data[i * 4 + j])).collect()).collect());
        let kernel = m.kernel(&f);
        prop_assert_eq!(m.rank(&f) + kernel.len(), 4);
        for v in &kernel {
            prop_assert!(m.mul_vec(&f, v).iter().all(|c| c.is_zero()));
        }
        let rhs: Vec<Fq> = b.iter().map(|&x| f.element(x)).collect();
        match m.solve(&f, &rhs) {
            Some(x) => prop_assert_eq!(m.mul_vec(&f, &x), rhs),
            None => prop_assert!(m.rank(&f) < 3),
        }
        let sq = FqMatrix::from_rows((0..3).map(|i| (0..3).map(|j| f.element(data[i * 4 + j])).collect()).collect());
        match sq.inverse(&f) {
            Some(inv) => prop_assert_eq!(sq.mul(&f, &inv), FqMatrix::identity(3)),
            None => prop_assert!(sq.rank(&f) < 3),
        }
    }
}

/// Every `x` with `x − M·σ^t(x) = b`, by enumeration.
fn brute_solutions(f: &GaloisField, op: &SemilinearOp, b: &[Fq]) -> Vec<Vec<Fq>> {
    let n = op.dim();
    let q = f.q() as u64;
    (0..q.pow(n as u32))
        .map(|k| (0..n).map(|i| f.element(((k / q.pow(i as u32)) % q) as u32)).collect::<Vec<_>>())
        .filter(|x| {
            let ax = op.apply(f, x);
            x.iter().zip(&ax).zip(b).all(|((&xi, &ai), &bi)| f.sub(xi, ai) == bi)
        })
        .collect()
}

#[test]
fn solve_id_minus_a_against_enumeration() {
    for (p, m) in [(3, 1), (3, 2), (5, 1)] {
        let f = field(p, m);
        for twist in [1i64, -1] {
            for a in f.elements() {
                for b in f.elements() {
                    let op = SemilinearOp::new(FqMatrix::from_rows(vec![vec![a]]), twist);
                    let all = brute_solutions(&f, &op, &[b]);
                    match solve_id_minus_a(&f, &op, &[b]) {
                        Ok(x) => assert!(all.contains(&x)),
                        Err(ArithError::FieldTooSmall { q, .. }) => {
                            assert_eq!(q, f.q());
                            assert!(all.is_empty());
                        }
                        Err(e) => panic!("{e}"),
                    }
                }
            }
        }
    }
}

#[test]
fn nilpotent_operators_have_unique_solutions() {
    let f = field(3, 2);
    let g = f.element(5);
    let op = SemilinearOp::new(FqMatrix::from_rows(vec![vec![f.zero(), g], vec![f.zero(), f.zero()]]), 1);
    assert!(op.is_nilpotent(&f));
    assert_eq!(op.nilpotency_order(&f), Some(2));
    for b0 in f.elements() {
        let b = [b0, f.element(7)];
        let all = brute_solutions(&f, &op, &b);
        assert_eq!(all.len(), 1);
        assert_eq!(solve_id_minus_a(&f, &op, &b).unwrap(), all[0]);
    }
}

#[test]
fn fitting_split_dimensions() {
    let f = field(3, 2);
    let g = f.element(5);
    let m = FqMatrix::from_rows(vec![
        vec![g, f.zero(), f.zero()],
        vec![f.zero(), f.zero(), f.one()],
        vec![f.zero(), f.zero(), f.zero()],
    ]);
    let split = fitting_split(&f, &SemilinearOp::new(m, 1));
    assert_eq!(split.invertible.len(), 1);
    assert_eq!(split.nilpotent.len(), 2);
}

#[test]
fn sigma_block_residual() {
    let f = field(3, 2);
    let g = f.element(5);
    let c = FqMatrix::from_rows(vec![vec![g, f.one()], vec![f.one(), f.zero()]]);
    let sigma0 = SemilinearOp::new(FqMatrix::identity(1), 1);
    let a = vec![vec![f.element(2)], vec![f.element(7)]];
    let sol = solve_sigma_block(&f, &c, &a, &sigma0, 1).unwrap();
    // (σ₀g₁, 0) = g·C + a.
    for k in 0..2 {
        let lhs = if k == 0 { sigma0.apply(&f, &sol[0])[0] } else { f.zero() };
        let rhs = f.add(f.sum((0..2).map(|i| f.mul(sol[i][0], c[(i, k)]))), a[k][0]);
        assert_eq!(lhs, rhs);
    }
}

#[test]
fn fp_kernel_of_a_frobenius_difference() {
    // {x ∈ F_9 : x^3 = x} is F_3, of F_3-dimension 1.
    let f = field(3, 2);
    let prime = GaloisField::prime(3).unwrap();
    let ker = fp_kernel_of(&prime, 2, |xs| {
        let x = f.from_fp_coords(xs);
        f.fp_coords(f.sub(f.frob(x, 1), x))
    });
    assert_eq!(ker.len(), 1);
    assert!(f.in_subfield(f.from_fp_coords(&ker[0]), 1));
}

#[test]
fn embeddings_are_frobenius_equivariant_homomorphisms() {
    for (p, m, n) in [(3, 1, 2), (3, 2, 6), (5, 1, 2), (3, 2, 4)] {
        let (small, big) = (field(p, m), field(p, n));
        let emb = FieldEmbedding::new(&small, &big).unwrap();
        for a in small.elements() {
            for b in small.elements() {
                assert_eq!(emb.apply(small.add(a, b)), big.add(emb.apply(a), emb.apply(b)));
                assert_eq!(emb.apply(small.mul(a, b)), big.mul(emb.apply(a), emb.apply(b)));
            }
            assert_eq!(emb.apply(small.frob(a, 1)), big.frob(emb.apply(a), 1));
            assert!(big.in_subfield(emb.apply(a), m));
        }
    }
    assert!(matches!(
        FieldEmbedding::new(&field(3, 2), &field(3, 3)),
        Err(FieldError::NoEmbedding { from: 9, into: 27 })
    ));
}
