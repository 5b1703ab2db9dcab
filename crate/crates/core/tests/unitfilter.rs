use num_bigint::BigInt;
use num_rational::BigRational;
use phimod::unitfilter::*;
use proptest::prelude::*;

fn q(n: i64) -> BigRational {
    BigRational::from_integer(n.into())
}

fn qr(s: &str) -> BigRational {
    match s.split_once('/') {
        Some((n, d)) => BigRational::new(n.parse::<BigInt>().unwrap(), d.parse::<BigInt>().unwrap()),
        None => BigRational::from_integer(s.parse::<BigInt>().unwrap()),
    }
}

fn rationals_units(xs: &[i64]) -> (NumberField, Vec<NfElement>) {
    let field = NumberField::rationals();
    let units = xs.iter().map(|&x| field.from_int(x)).collect();
    (field, units)
}

fn coords(field: &NumberField, xs: &[NfElement]) -> Vec<Vec<BigRational>> {
    xs.iter().map(|x| field.coords(x)).collect()
}

fn frozen(rows: &[&[&str]]) -> Vec<Vec<BigRational>> {
    rows.iter().map(|r| r.iter().map(|c| qr(c)).collect()).collect()
}

#[test]
fn norm_examples() {
    let (field, _) = cube_root_three();
    let alpha = field.generator();
    assert_eq!(field.norm(&field.from_int(1)), q(1));
    assert_eq!(field.norm(&alpha), q(3));
    let x = field.add(&field.from_int(1), &alpha);
    assert_eq!(field.norm(&x), q(4));
    // product of the numerical conjugates of 1 + θ, θ³ = 3
    let r = 3f64.cbrt();
    let w = std::f64::consts::TAU / 3.0;
    let (re, im) = (1.0 + r * w.cos(), r * w.sin());
    let numeric = (1.0 + r) * (re * re + im * im);
    assert!((numeric - 4.0).abs() < 1e-9);
    // norm(c) = c^d
    assert_eq!(field.norm(&field.from_int(-2)), q(-8));
    assert_eq!(field.norm(&field.from_int(0)), q(0));
}

#[test]
fn shifted_norm_examples() {
    let rat = NumberField::rationals();
    let sn = rat.shifted_norm(&rat.from_int(4), 3);
    assert_eq!((sn.shift, sn.norm.clone(), sn.fell_through), (1, q(3), false));
    let sn = rat.shifted_norm(&rat.from_int(0), 3);
    assert_eq!((sn.shift, sn.norm.clone()), (0, q(0)));
    assert_eq!(rat.a_val(&rat.from_int(0), 3), PValuation::Infinite);
    assert_eq!(rat.a_val_finite(&rat.from_int(0), 3), Err(UnitError::UndefinedValuation));
    assert_eq!(rat.a_val_finite(&rat.from_int(4), 3), Ok(1));
    assert_eq!(rat.a_val_finite(&rat.from_int(10), 3), Ok(2));

    let (field, _) = cube_root_three();
    let x = field.add(&field.from_int(1), &field.generator());
    let sn = field.shifted_norm(&x, 3);
    assert_eq!((sn.shift, sn.norm), (1, q(3)));
    assert_eq!(field.a_val_finite(&x, 3), Ok(1));
}

#[test]
fn shifted_norm_fall_through_is_flagged() {
    // In Q(i), i − c has norm c² + 1, which is never divisible by 3.
    let field = NumberField::new(QPoly::from_ints(&[1, 0, 1])).unwrap();
    let sn = field.shifted_norm(&field.generator(), 3);
    assert!(sn.fell_through);
    assert_eq!((sn.shift, sn.norm), (2, q(5)));
}

#[test]
fn irreducibility_certificates() {
    let f = QPoly::from_ints(&[-3, 0, 0, 1]);
    assert!(NumberField::new(f.clone()).unwrap().certify(7).is_ok());
    // mod 2 it is t³ + 1 = (t + 1)(t² + t + 1)
    assert!(NumberField::new(f).unwrap().certify(2).is_err());
    assert!(NumberField::new(QPoly::from_ints(&[1, 1])).is_ok());
    assert!(NumberField::new(QPoly::from_ints(&[1, 2])).is_err());
    assert!(NumberField::new(QPoly::from_ints(&[5])).is_err());
}

#[test]
fn inverse_and_division() {
    let (field, eps) = cube_root_three();
    let inv = field.inv(&eps).unwrap();
    assert_eq!(field.mul(&eps, &inv), field.from_int(1));
    assert!(field.inv(&field.from_int(0)).is_none());
}

#[test]
fn single_unit() {
    let (field, units) = rationals_units(&[10]);
    let r = filtrate(&field, &units, 3).unwrap();
    assert_eq!(coords(&field, &r.basis), vec![vec![q(10)]]);
    assert_eq!(r.af, vec![PValuation::Finite(2)]);
    assert!(r.transcript.is_empty());
}

#[test]
fn rationals_four_ten() {
    // d = 1 restricts the power search to k = 0, and a(4) = 1 < 2 = a(10), so 10 is appended.
    let (field, units) = rationals_units(&[4, 10]);
    let r = filtrate(&field, &units, 3).unwrap();
    assert_eq!(coords(&field, &r.basis), frozen(&[&["4"], &["10"]]));
    assert_eq!(r.af, vec![PValuation::Finite(1), PValuation::Finite(2)]);
    assert!(r.transcript.is_empty());
}

#[test]
fn rationals_four_seven() {
    let (field, units) = rationals_units(&[4, 7]);
    let r = filtrate(&field, &units, 3).unwrap();
    assert_eq!(coords(&field, &r.basis), frozen(&[&["4"], &["7/16"]]));
    assert_eq!(r.af, vec![PValuation::Finite(1), PValuation::Finite(2)]);
    assert_eq!(r.transcript, vec![(2, 0, 0)]);
}

#[test]
fn rationals_four_inputs() {
    let (field, units) = rationals_units(&[7, 4, 10, -2]);
    let r = filtrate(&field, &units, 3).unwrap();
    assert_eq!(
        coords(&field, &r.basis),
        frozen(&[&["7"], &["4/49"], &["-343/8"], &["245/2"]])
    );
    assert_eq!(r.af, [1, 2, 3, 5].map(PValuation::Finite).to_vec());
    assert_eq!(r.transcript, vec![(2, 0, 0), (1, 0, 0), (1, 1, 0), (2, 1, 0)]);
}

#[test]
fn non_unit_reports_no_progress() {
    let (field, units) = rationals_units(&[4, 3]);
    assert!(matches!(
        filtrate(&field, &units, 3),
        Err(UnitError::NoProgress { candidate: 0, basis_index: 0, k: 0, .. })
    ));
}

#[test]
fn empty_input_is_rejected() {
    assert_eq!(filtrate(&NumberField::rationals(), &[], 3).unwrap_err(), UnitError::Empty);
}

#[test]
fn cube_root_three_instance_frozen() {
    let (field, units) = cube_root_three_instance();
    assert_eq!(
        coords(&field, &units),
        frozen(&[&["4", "3", "-4"], &["328", "-213", "-10"], &["-1", "0", "0"]])
    );
    let r = filtrate(&field, &units, 3).unwrap();
    assert_eq!(
        coords(&field, &r.basis),
        frozen(&[
            &["4", "3", "-4"],
            &["-1", "0", "0"],
            &[
                "134019877374190090652967707689",
                "92924192964484236119558589810",
                "64430036851859073681682602312"
            ]
        ])
    );
    assert_eq!(r.af, [2, 3, 11].map(PValuation::Finite).to_vec());
    assert_eq!(r.transcript, vec![(1, 0, 0), (2, 0, 1), (1, 0, 2)]);
    assert_eq!(r.fall_throughs, 0);
    assert_eq!(replay(&field, &units, 3, &r.events).unwrap(), r.basis);
}

#[test]
fn exact_power_reduces_to_one() {
    let (field, eps) = cube_root_three();
    let units = vec![field.pow(&eps, 3), eps.clone()];
    let r = filtrate(&field, &units, 3).unwrap();
    assert_eq!(r.basis, vec![eps, field.from_int(1)]);
    assert_eq!(r.af, vec![PValuation::Finite(2), PValuation::Infinite]);
    assert_eq!(r.transcript, vec![(1, 0, 1)]);
}

#[test]
fn replay_rejects_bad_transcripts() {
    let (field, units) = rationals_units(&[4, 7]);
    let bad = [FilterEvent::Seed { index: 5 }];
    assert!(replay(&field, &units, 3, &bad).is_err());
    let short = [FilterEvent::Seed { index: 0 }];
    assert!(replay(&field, &units, 3, &short).is_err());
}

fn small_poly(max_deg: usize) -> impl Strategy<Value = QPoly> {
    prop::collection::vec((-9i64..=9, 1i64..=4), 1..=max_deg + 1)
        .prop_map(|cs| QPoly::new(cs.into_iter().map(|(n, d)| BigRational::new(n.into(), d.into())).collect()))
}

fn monic_poly(deg: std::ops::RangeInclusive<usize>) -> impl Strategy<Value = QPoly> {
    deg.prop_flat_map(|d| prop::collection::vec(-6i64..=6, d))
        .prop_map(|mut cs| {
            cs.push(1);
            QPoly::from_ints(&cs)
        })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn resultant_algorithms_agree(f in small_poly(5), g in small_poly(5)) {
        let sub = resultant(&f, &g);
        prop_assert_eq!(&sub, &resultant_euclid(&f, &g));
        prop_assert_eq!(&sub, &resultant_sylvester(&f, &g));
    }

    #[test]
    fn resultant_swap_sign(f in small_poly(4), g in small_poly(4)) {
        let (m, n) = (f.degree().unwrap_or(0), g.degree().unwrap_or(0));
        let sign = if m * n % 2 == 1 { q(-1) } else { q(1) };
        prop_assert_eq!(resultant(&f, &g), sign * resultant(&g, &f));
    }

    #[test]
    fn norm_is_multiplicative(f in monic_poly(1..=4), a in small_poly(3), b in small_poly(3)) {
        let field = NumberField::new(f).unwrap();
        let (x, y) = (field.from_poly(&a), field.from_poly(&b));
        prop_assert_eq!(field.norm(&field.mul(&x, &y)), field.norm(&x) * field.norm(&y));
    }

    #[test]
    fn rational_norm_is_power(f in monic_poly(1..=5), c in -20i64..=20) {
        let field = NumberField::new(f).unwrap();
        let d = field.degree();
        prop_assert_eq!(field.norm(&field.from_int(c)), num_traits::pow(q(c), d));
    }

    #[test]
    fn filtration_replays_and_increases(xs in prop::collection::vec(prop::sample::select(vec![4i64, 7, 10, -2, 13, 19, 28, -8, 55, 82]), 1..5)) {
        let (field, units) = rationals_units(&xs);
        if let Ok(r) = filtrate(&field, &units, 3) {
            prop_assert_eq!(replay(&field, &units, 3, &r.events).unwrap(), r.basis.clone());
            prop_assert!(r.af.windows(2).all(|w| w[0] < w[1]) || r.af.contains(&PValuation::Infinite));
            let moves: Vec<_> = r.events.iter().filter_map(|e| match *e {
                FilterEvent::Reduce { i, j, k, .. } => Some((i, j, k)),
                _ => None,
            }).collect();
            prop_assert_eq!(moves, r.transcript);
        }
    }

    #[test]
    fn af_multiset_ignores_order_for_distinct_values(perm in Just(vec![4i64, 10, 28, 82]).prop_shuffle()) {
        // a-values 1, 2, 3, 4 are distinct, so no reduction ever matches.
        let (field, units) = rationals_units(&perm);
        let mut af = filtrate(&field, &units, 3).unwrap().af;
        af.sort();
        prop_assert_eq!(af, [1, 2, 3, 4].map(PValuation::Finite).to_vec());
    }
}
