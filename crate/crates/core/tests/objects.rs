use phimod::base_arith::*;
use phimod::digits::DigitRational;
use phimod::objects::morphism::morphism_defect;
use phimod::objects::*;
use phimod::simples_ext::build_simple;
use proptest::prelude::*;

fn ring(p: u32, m: usize) -> SeriesRing {
    SeriesRing::with_default_prec(GaloisField::with_degree(p, m).unwrap())
}

fn simple(r: &SeriesRing, text: &str) -> PhiNModule {
    build_simple(r, &DigitRational::parse(text, r.p()).unwrap()).unwrap()
}

/// Crystalline rank-one objects `F(L) = c·u^e·L` over `F_3` at precision 6.
fn rank_one_objects(r: &SeriesRing) -> Vec<(String, PhiNModule)> {
    let f = r.field().clone();
    let mut out = Vec::new();
    for e in 0..3 {
        for c in 1..3 {
            let b = SeriesMatrix::from_fn(1, 1, |_, _| r.monomial(f.from_int(c), e));
            out.push((format!("{c}u^{e}"), PhiNModule::crystalline(r.clone(), b).unwrap()));
        }
    }
    out
}

#[test]
fn hom_dimensions_match_enumeration_in_rank_one() {
    let r = SeriesRing::new(GaloisField::prime(3).unwrap(), 6);
    let f = r.field().clone();
    let objects = rank_one_objects(&r);
    for (na, a) in &objects {
        for (nb, b) in &objects {
            let count = (0..3u32.pow(6))
                .filter(|&n| {
                    let coeffs: Vec<Fq> = (0..6).map(|k| f.element((n / 3u32.pow(k)) % 3)).collect();
                    let m = SeriesMatrix::from_fn(1, 1, |_, _| r.from_coeffs(&coeffs));
                    morphism_defect(a, b, &m).is_none()
                })
                .count();
            let basis = hom_basis(a, b);
            assert_eq!(3usize.pow(basis.len() as u32), count, "Hom({na}, {nb})");
            for m in &basis {
                assert!(Morphism::new(a.clone(), b.clone(), m.clone()).is_ok());
            }
        }
    }
}

#[test]
fn validation_reports_the_failing_axiom() {
    let r = ring(3, 1);
    let f = r.field().clone();
    let one = |s: TruncSeries| SeriesMatrix::from_fn(1, 1, |_, _| s.clone());
    let zero_n = SeriesMatrix::zeros(&r, 1, 1);
    let deep = PhiNModule::from_raw(r.clone(), one(r.u_pow(3)), zero_n.clone()).validate();
    assert!(deep.has(Axiom::Filtration), "{}", deep.summary());
    let singular = PhiNModule::from_raw(r.clone(), one(r.zero()), zero_n.clone()).validate();
    assert!(singular.has(Axiom::Det) || singular.has(Axiom::Filtration));
    let untruncated = PhiNModule::from_raw(r.clone(), one(r.one()), one(r.monomial(f.one(), 7))).validate();
    assert!(untruncated.has(Axiom::NTruncation));
    let bad_n = PhiNModule::from_raw(r.clone(), one(r.one()), one(r.one())).validate();
    assert!(bad_n.has(Axiom::NCompat));
    assert!(matches!(
        PhiNModule::new(r.clone(), SeriesMatrix::zeros(&r, 1, 2), zero_n),
        Err(ObjectError::Shape(_))
    ));
    assert!(matches!(
        PhiNModule::crystalline(r.clone(), one(r.u_pow(3))),
        Err(ObjectError::HypothesisFailed { .. })
    ));
}

#[test]
fn simples_are_valid_and_classified() {
    let r = ring(3, 2);
    for (text, etale, multiplicative) in [("0", true, false), ("1", false, true), ("1/2", false, false), ("1/4", false, false)] {
        let l = simple(&r, text);
        assert!(l.validate().is_ok(), "{text}");
        assert!(l.is_crystalline());
        assert!(l.is_crystalline_by_filtration());
        assert_eq!(is_etale(&l), etale, "{text}");
        assert_eq!(is_multiplicative(&l), multiplicative, "{text}");
        assert_eq!(is_connected(&l), !etale, "{text}");
        assert_eq!(is_unipotent(&l), !multiplicative, "{text}");
        assert!(special_basis(&l).is_ok());
    }
}

#[test]
fn splittings_of_a_sum_of_simples() {
    let r = ring(3, 2);
    let sum = simple(&r, "0").direct_sum(&simple(&r, "1")).direct_sum(&simple(&r, "1/2"));
    assert!(sum.validate().is_ok());
    let et = etale_split(&sum).unwrap();
    assert_eq!((et.sub.rank(), et.quotient.rank()), (1, 2));
    let un = unipotent_split(&sum).unwrap();
    assert_eq!((un.sub.rank(), un.quotient.rank()), (2, 1));
    assert!(is_strict_mono(&un.embedding));
    assert!(is_strict_epi(&un.projection));
    assert!(un.projection.compose(&un.embedding).unwrap().is_zero());
    let section = splitting_section(&sum).unwrap();
    assert_eq!(section.section.len(), 1);
}

#[test]
fn kernel_and_cokernel_of_trivial_maps() {
    let r = ring(3, 1);
    let l = simple(&r, "1/2").direct_sum(&simple(&r, "1"));
    let id = Morphism::identity(&l);
    assert_eq!(kernel(&id).unwrap().object.rank(), 0);
    assert_eq!(cokernel(&id).unwrap().object.rank(), 0);
    let zero = Morphism::zero(&l, &l);
    assert_eq!(kernel(&zero).unwrap().object.rank(), 2);
    assert_eq!(cokernel(&zero).unwrap().object.rank(), 2);
    assert!(id.is_isomorphism());
    assert!(!zero.is_isomorphism());
}

#[test]
fn sums_in_either_order_are_isomorphic() {
    let r = ring(3, 2);
    let (a, b) = (simple(&r, "1/2"), simple(&r, "1/4"));
    let ab = a.direct_sum(&b);
    let ba = b.direct_sum(&a);
    let iso = find_isomorphism(&ab, &ba, 7).expect("isomorphic");
    assert!(iso.is_isomorphism());
    assert!(find_isomorphism(&ab, &a.direct_sum(&a), 7).is_none());
}

#[test]
fn fl_normalization_with_extreme_jumps() {
    // Jumps equal to p − 1 make the correction equation non-contracting.
    let f = GaloisField::prime(3).unwrap();
    let r = SeriesRing::with_default_prec(f.clone());
    let g = |rows: Vec<Vec<i64>>| FqMatrix::from_rows(rows.into_iter().map(|row| row.into_iter().map(|x| f.from_int(x)).collect()).collect());
    let cases = [
        (vec![0, 0, 1, 2], g(vec![vec![1, 1, 0, 2], vec![0, 1, 2, 0], vec![1, 0, 1, 1], vec![2, 0, 0, 1]])),
        (vec![2, 2], g(vec![vec![0, 1], vec![1, 1]])),
        (vec![0, 2], g(vec![vec![1, 2], vec![1, 0]])),
    ];
    for (jumps, phi) in cases {
        let m = FlModule::new(f.clone(), jumps.clone(), phi).unwrap();
        let l = fl_to_module(&m, &r).unwrap();
        assert!(l.validate().is_ok());
        let norm = fl_normalize(&l).unwrap();
        assert_eq!(norm.module.jumps(), jumps.as_slice());
        assert!(fl_is_isomorphic(&m, &norm.module, 1).is_some(), "jumps {jumps:?}");
        assert!(norm.witness.is_isomorphism());
    }
}

/// Isomorphic FL modules whose objects over `F_9` are isomorphic only over `F_729`.
#[test]
fn fl_witness_may_need_an_extension() {
    let f = GaloisField::with_degree(3, 2).unwrap();
    let r = SeriesRing::with_default_prec(f.clone());
    let e = [3u32, 2, 6, 1, 0, 6, 6, 6, 0];
    let phi = FqMatrix::from_rows((0..3).map(|i| (0..3).map(|j| f.element(e[i * 3 + j])).collect()).collect());
    let module = FlModule::new(f.clone(), vec![0, 1, 2], phi).unwrap();
    let l = fl_to_module(&module, &r).unwrap();
    let recovered = fl_module_of(&l).unwrap();
    assert!(fl_is_isomorphic(&module, &recovered, 0).is_some());
    assert!(find_isomorphism(&fl_to_module(&recovered, &r).unwrap(), &l, 0).is_none());
    let norm = fl_normalize(&l).unwrap();
    assert_eq!(norm.extension_degree, 3);
    assert_eq!(norm.witness.target().field().q(), 729);
    assert!(norm.witness.is_isomorphism());
    let big = GaloisField::with_degree(3, 6).unwrap();
    let emb = FieldEmbedding::new(&f, &big).unwrap();
    assert_eq!(norm.witness.target(), &l.base_change(&emb, &SeriesRing::with_default_prec(big)));
}

#[test]
fn fl_constructor_errors() {
    let f = GaloisField::prime(3).unwrap();
    assert!(FlModule::new(f.clone(), vec![3], FqMatrix::identity(1)).is_err());
    assert!(FlModule::new(f.clone(), vec![1, 0], FqMatrix::identity(2)).is_err());
    assert!(FlModule::new(f.clone(), vec![0, 1], FqMatrix::zeros(2, 2)).is_err());
    assert!(FlModule::new(f, vec![0], FqMatrix::identity(2)).is_err());
    let r = ring(3, 1);
    let n = SeriesMatrix::from_fn(1, 1, |_, _| r.u_pow(1));
    let l11 = PhiNModule::from_raw(r.clone(), SeriesMatrix::identity(&r, 1), n);
    assert_eq!(special_basis(&l11).unwrap_err(), ObjectError::NotCrystalline);
}

fn fl_strategy() -> impl Strategy<Value = (u32, usize, Vec<usize>, Vec<u32>)> {
    (prop::sample::select(vec![3u32, 5]), 1usize..3, 1usize..4).prop_flat_map(|(p, m, dim)| {
        let q = p.pow(m as u32);
        (
            Just(p),
            Just(m),
            prop::collection::vec(0..p as usize, dim),
            prop::collection::vec(0..q, dim * dim),
        )
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(40))]

    #[test]
    fn fl_functor_round_trip((p, m, mut jumps, entries) in fl_strategy()) {
        jumps.sort_unstable();
        let f = GaloisField::with_degree(p, m).unwrap();
        let s = jumps.len();
        let phi = FqMatrix::from_rows((0..s).map(|i| (0..s).map(|j| f.element(entries[i * s + j])).collect()).collect());
        prop_assume!(phi.inverse(&f).is_some());
        let module = FlModule::new(f.clone(), jumps.clone(), phi).unwrap();
        let r = SeriesRing::with_default_prec(f);
        let l = fl_to_module(&module, &r).unwrap();
        prop_assert!(l.validate().is_ok());
        prop_assert!(l.is_crystalline());
        let norm = fl_normalize(&l).unwrap();
        prop_assert_eq!(norm.module.jumps(), jumps.as_slice());
        prop_assert!(fl_is_isomorphic(&module, &norm.module, 3).is_some());
        prop_assert!(norm.witness.is_isomorphism());
        prop_assert_eq!(norm.witness.target().field().q(), r.field().q().pow(norm.extension_degree as u32));
    }

    /// Adding `u^p`-terms to the filtration of `L(r)` keeps its FL module.
    #[test]
    fn perturbed_simples_recover(
        p in prop::sample::select(vec![3u32, 5]),
        s in 1usize..=2,
        pick in any::<prop::sample::Index>(),
        noise in prop::collection::vec(0u32..5, 4 * 15),
    ) {
        let r = ring(p, 1);
        let f = r.field().clone();
        let words = phimod::digits::words_of_period(p, s);
        let x = pick.get(&words);
        let base = build_simple(&r, x).unwrap();
        let tail = r.prec() - p as usize;
        let mut k = 0;
        let perturbation = SeriesMatrix::from_fn(s, s, |_, _| {
            let coeffs: Vec<Fq> = (0..tail).map(|_| { k += 1; f.from_int(noise[k - 1] as i64 % p as i64) }).collect();
            r.shift_up(&r.from_coeffs(&coeffs), p as usize)
        });
        let perturbed = PhiNModule::crystalline(r.clone(), base.filt().add(&r, &perturbation)).unwrap();
        prop_assert!(perturbed.validate().is_ok());
        let norm = fl_normalize(&perturbed).unwrap();
        let mut jumps: Vec<usize> = x.digits().iter().map(|&d| d as usize).collect();
        jumps.sort_unstable();
        prop_assert_eq!(norm.module.jumps(), jumps.as_slice());
        prop_assert!(fl_is_isomorphic(&fl_module_of(&base).unwrap(), &norm.module, 0).is_some());
        prop_assert!(norm.witness.is_isomorphism());
        if norm.extension_degree == 1 {
            prop_assert_eq!(norm.witness.target(), &perturbed);
        }
        prop_assert_eq!(norm.witness.target().rank(), s);
    }

    #[test]
    fn kernel_cokernel_sequence(choice in prop::collection::vec(0usize..4, 2), coeffs in prop::collection::vec(0u32..3, 8)) {
        let r = ring(3, 1);
        let pool = ["0", "1", "1/2", "1/4"];
        let a = simple(&r, pool[choice[0]]).direct_sum(&simple(&r, pool[choice[1]]));
        let b = simple(&r, pool[choice[1]]).direct_sum(&simple(&r, "1/2"));
        let basis = hom_basis(&a, &b);
        let c: Vec<u32> = coeffs.iter().copied().take(basis.len()).collect();
        let matrix = phimod::objects::morphism::fp_combination(&a, &basis, &c);
        let g = Morphism::new(a.clone(), b.clone(), matrix).unwrap();
        let ker = kernel(&g).unwrap();
        let coker = cokernel(&g).unwrap();
        prop_assert!(g.compose(&ker.embedding).unwrap().is_zero());
        prop_assert!(coker.projection.compose(&g).unwrap().is_zero());
        prop_assert!(is_strict_mono(&ker.embedding));
        prop_assert!(is_strict_epi(&coker.projection));
        prop_assert!(ker.object.validate().is_ok());
        prop_assert!(coker.object.validate().is_ok());
    }
}
