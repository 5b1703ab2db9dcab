//! Criteria on the category structure: limits, the FL functor and splittings.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::extensions::standard_extensions_p3;
use super::{outcome, Outcome, Tally};
use crate::base_arith::linalg::fp_kernel_of;
use crate::base_arith::{ArithError, Fq, FqMatrix, GaloisField, SeriesMatrix, SeriesRing};
use crate::digits::{words_of_period, DigitRational};
use crate::objects::limits::{factor_through_epi, factor_through_mono};
use crate::objects::morphism::fp_combination;
use crate::objects::{
    cokernel, etale_split, fl_is_isomorphic, fl_is_morphism, fl_normalize, fl_to_module, hom_basis, is_connected,
    is_etale, is_multiplicative, is_strict_epi, is_strict_mono, is_unipotent, kernel, splitting_section,
    unipotent_split, FlModule, Morphism, ObjectError, PhiNModule, Split,
};
use crate::simples_ext::build_simple;

/// Prime-field coordinates of every coefficient of every entry.
fn flatten(ring: &SeriesRing, m: &SeriesMatrix) -> Vec<Fq> {
    let field = ring.field();
    let mut out = Vec::new();
    for i in 0..m.rows() {
        for j in 0..m.cols() {
            for k in 0..ring.prec() {
                out.extend(field.fp_coords(m[(i, j)].coeff(k)));
            }
        }
    }
    out
}

/// Morphisms `X → target` (from a Hom basis) whose composite with `after` vanishes.
fn annihilated(source: &PhiNModule, basis: &[SeriesMatrix], compose: impl Fn(&SeriesMatrix) -> SeriesMatrix) -> Vec<SeriesMatrix> {
    if basis.is_empty() {
        return Vec::new();
    }
    let ring = source.ring();
    let prime = GaloisField::prime(ring.p()).expect("odd prime");
    fp_kernel_of(&prime, basis.len(), |c| {
        let coeffs: Vec<u32> = c.iter().map(|&x| prime.to_prime(x).expect("prime field")).collect();
        flatten(ring, &compose(&fp_combination(source, basis, &coeffs)))
    })
    .into_iter()
    .map(|c| {
        let coeffs: Vec<u32> = c.iter().map(|&x| prime.to_prime(x).expect("prime field")).collect();
        fp_combination(source, basis, &coeffs)
    })
    .collect()
}

fn simple_sum(ring: &SeriesRing, rs: &[DigitRational]) -> PhiNModule {
    rs.iter()
        .map(|r| build_simple(ring, r).expect("simple"))
        .reduce(|a, b| a.direct_sum(&b))
        .unwrap_or_else(|| PhiNModule::zero(ring.clone()))
}

/// Two embeddings with the same image factor through each other isomorphically.
fn same_sub(a: &Morphism, b: &Morphism) -> bool {
    match (factor_through_mono(a, b), factor_through_mono(b, a)) {
        (Some(x), Some(y)) => x.is_isomorphism() && y.is_isomorphism(),
        _ => false,
    }
}

fn same_quotient(a: &Morphism, b: &Morphism) -> bool {
    match (factor_through_epi(a, b), factor_through_epi(b, a)) {
        (Some(x), Some(y)) => x.is_isomorphism() && y.is_isomorphism(),
        _ => false,
    }
}

fn check_limits(t: &mut Tally, f: &Morphism, extra: &PhiNModule, label: &str) -> Result<(), ObjectError> {
    let ring = f.source().ring();
    let ker = kernel(f)?;
    let coker = cokernel(f)?;
    let (emb, proj) = (&ker.embedding, &coker.projection);
    t.check(f.compose(emb)?.is_zero(), || format!("{label}: f∘ker ≠ 0"));
    t.check(proj.compose(f)?.is_zero(), || format!("{label}: coker∘f ≠ 0"));
    t.check(is_strict_mono(emb), || format!("{label}: kernel embedding not strict mono"));
    t.check(is_strict_epi(proj), || format!("{label}: cokernel projection not strict epi"));

    // Kernel universal property on Hom(K ⊕ S, A) ∩ ker(f∘−).
    let x = ker.object.direct_sum(extra);
    let basis = hom_basis(&x, f.source());
    for g in annihilated(&x, &basis, |g| f.matrix().mul(ring, g)) {
        let g = Morphism::new(x.clone(), f.source().clone(), g)?;
        match factor_through_mono(emb, &g) {
            Some(h) => t.check(emb.compose(&h)?.matrix() == g.matrix(), || format!("{label}: kernel factorization wrong")),
            None => t.fail(format!("{label}: f∘g = 0 but g does not factor through the kernel")),
        }
    }
    // Cokernel universal property on Hom(B, Q ⊕ S) ∩ ker(−∘f).
    let y = coker.object.direct_sum(extra);
    let basis = hom_basis(f.target(), &y);
    for g in annihilated(f.target(), &basis, |g| g.mul(ring, f.matrix())) {
        let g = Morphism::new(f.target().clone(), y.clone(), g)?;
        match factor_through_epi(proj, &g) {
            Some(h) => t.check(h.compose(proj)?.matrix() == g.matrix(), || format!("{label}: cokernel factorization wrong")),
            None => t.fail(format!("{label}: g∘f = 0 but g does not factor through the cokernel")),
        }
    }
    // Strict mono and strict epi extend to short exact sequences.
    let q = cokernel(emb)?;
    let back = kernel(&q.projection)?;
    t.check(
        ker.object.rank() + q.object.rank() == f.source().rank(),
        || format!("{label}: ranks do not add up along the kernel sequence"),
    );
    t.check(same_sub(emb, &back.embedding), || format!("{label}: ker(coker(ker f)) ≠ ker f"));
    let k = kernel(proj)?;
    let c = cokernel(&k.embedding)?;
    t.check(same_quotient(proj, &c.projection), || format!("{label}: coker(ker(coker f)) ≠ coker f"));
    Ok(())
}

pub(crate) fn category_laws(seed: u64) -> Outcome {
    let mut t = Tally::default();
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x0004);
    let field = GaloisField::prime(3).expect("F_3");
    let ring = SeriesRing::with_default_prec(field);
    let simples: Vec<DigitRational> = (1..=2).flat_map(|s| words_of_period(3, s)).collect();
    let mut nonzero = 0;
    for n in 0..100 {
        let a: Vec<DigitRational> = (0..rng.gen_range(1..=2)).map(|_| simples.choose(&mut rng).expect("nonempty").clone()).collect();
        let mut b: Vec<DigitRational> = (0..rng.gen_range(0..=1)).map(|_| simples.choose(&mut rng).expect("nonempty").clone()).collect();
        b.push(a.choose(&mut rng).expect("nonempty").clone());
        b.shuffle(&mut rng);
        let extra = simple_sum(&ring, &[simples.choose(&mut rng).expect("nonempty").clone()]);
        let (src, tgt) = (simple_sum(&ring, &a), simple_sum(&ring, &b));
        let basis = hom_basis(&src, &tgt);
        let coeffs: Vec<u32> = (0..basis.len()).map(|_| rng.gen_range(0..3)).collect();
        let m = if basis.is_empty() {
            SeriesMatrix::zeros(&ring, tgt.rank(), src.rank())
        } else {
            fp_combination(&src, &basis, &coeffs)
        };
        let names = |v: &[DigitRational]| v.iter().map(ToString::to_string).collect::<Vec<_>>().join("⊕");
        let label = format!("morphism {n}: L({}) → L({})", names(&a), names(&b));
        let f = match Morphism::new(src, tgt, m) {
            Ok(f) => f,
            Err(e) => {
                t.fail(format!("{label}: {e}"));
                continue;
            }
        };
        if !f.is_zero() {
            nonzero += 1;
        }
        if let Err(e) = check_limits(&mut t, &f, &extra, &label) {
            t.fail(format!("{label}: {e}"));
        }
    }
    outcome(&t, &format!("100 morphisms ({nonzero} nonzero) between sums of simples at p = 3"))
}

fn random_invertible(rng: &mut ChaCha8Rng, field: &GaloisField, n: usize) -> FqMatrix {
    loop {
        let rows: Vec<Vec<Fq>> = (0..n)
            .map(|_| (0..n).map(|_| field.element(rng.gen_range(0..field.q()))).collect())
            .collect();
        let m = FqMatrix::from_rows(rows);
        if m.inverse(field).is_some() {
            return m;
        }
    }
}

pub(crate) fn functor_round_trip(seed: u64) -> Outcome {
    let mut t = Tally::default();
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x0005);
    let mut mixed = 0;
    let mut extended = 0;
    for n in 0..50 {
        let p = *[3u32, 5].choose(&mut rng).expect("nonempty");
        let m = rng.gen_range(1..=2);
        let field = GaloisField::with_degree(p, m).expect("small field");
        let ring = SeriesRing::with_default_prec(field.clone());
        let dim = rng.gen_range(1..=4);
        let mut jumps: Vec<usize> = (0..dim).map(|_| rng.gen_range(0..p as usize)).collect();
        jumps.sort_unstable();
        let phi = random_invertible(&mut rng, &field, dim);
        let label = format!("FL module {n} (p={p}, q={}, jumps {jumps:?})", field.q());
        mixed += usize::from(jumps.windows(2).any(|w| w[0] != w[1]));
        let module = FlModule::new(field.clone(), jumps, phi).expect("valid by construction");
        let result = (|| -> Result<(), ObjectError> {
            let object = fl_to_module(&module, &ring)?;
            t.check(object.is_crystalline(), || format!("{label}: image is not crystalline"));
            let norm = fl_normalize(&object)?;
            extended += usize::from(norm.extension_degree > 1);
            t.check(norm.witness.is_isomorphism(), || format!("{label}: witness is not an isomorphism"));
            match fl_is_isomorphic(&module, &norm.module, seed) {
                Some(g) => t.check(
                    fl_is_morphism(&module, &norm.module, &g) && g.inverse(&field).is_some(),
                    || format!("{label}: reported FL isomorphism fails the checks"),
                ),
                None => t.fail(format!("{label}: normalized module is not isomorphic to the input")),
            }
            Ok(())
        })();
        if let Err(e) = result {
            t.fail(format!("{label}: {e}"));
        }
    }
    outcome(&t, &format!("50 modules ({mixed} with mixed jumps); object witnesses verified, {extended} over an extension of F_q"))
}

fn check_split(t: &mut Tally, split: &Split, total: &PhiNModule, label: &str) {
    let exact = split.projection.compose(&split.embedding).map(|c| c.is_zero()).unwrap_or(false)
        && is_strict_mono(&split.embedding)
        && is_strict_epi(&split.projection)
        && split.sub.rank() + split.quotient.rank() == total.rank();
    t.check(exact, || format!("{label}: not a short exact sequence"));
    let back = kernel(&split.projection).map(|k| same_sub(&k.embedding, &split.embedding));
    t.check(back == Ok(true), || format!("{label}: kernel of the projection is not the subobject"));
}

/// Splits of `build(ring)`; the section is retried over `F_{3^6}` when the
/// quotient's fixed lattice is not defined over the base field.
fn check_object_splits(
    t: &mut Tally,
    ring: &SeriesRing,
    build: impl Fn(&SeriesRing) -> Result<PhiNModule, String>,
    label: &str,
) -> Option<PhiNModule> {
    let object = match build(ring) {
        Ok(o) => o,
        Err(e) => {
            t.fail(format!("{label}: {e}"));
            return None;
        }
    };
    match etale_split(&object) {
        Ok(split) => {
            check_split(t, &split, &object, &format!("{label} étale"));
            t.check(is_etale(&split.sub) && is_connected(&split.quotient), || format!("{label}: étale split has wrong classes"));
        }
        Err(e) => t.fail(format!("{label} étale split: {e}")),
    }
    match unipotent_split(&object) {
        Ok(split) => {
            check_split(t, &split, &object, &format!("{label} unipotent"));
            t.check(is_unipotent(&split.sub) && is_multiplicative(&split.quotient), || format!("{label}: unipotent split has wrong classes"));
        }
        Err(e) => t.fail(format!("{label} unipotent split: {e}")),
    }
    let section = match splitting_section(&object) {
        Err(ObjectError::Arith(ArithError::FieldTooSmall { .. })) => {
            let big = SeriesRing::new(GaloisField::with_degree(3, 6).expect("F_729"), ring.prec());
            build(&big).map_err(ObjectError::Invalid).and_then(|o| splitting_section(&o))
        }
        other => other,
    };
    match section {
        Ok(data) => t.check(
            data.defects.iter().flatten().all(|c| c.coeff(0).is_zero()),
            || format!("{label}: section defect not in u·L_u"),
        ),
        Err(e) => t.fail(format!("{label} section: {e}")),
    }
    Some(object)
}

pub(crate) fn splittings() -> Outcome {
    let mut t = Tally::default();
    let field = GaloisField::with_degree(3, 2).expect("F_9");
    let ring = SeriesRing::with_default_prec(field);
    let simples: Vec<DigitRational> = (1..=2).flat_map(|s| words_of_period(3, s)).collect();
    let zero = DigitRational::zero(3).expect("0");
    let one = DigitRational::one(3).expect("1");
    let half = DigitRational::new(3, vec![1]).expect("1/2");
    for r in &simples {
        let label = format!("L({r})");
        let Some(object) = check_object_splits(&mut t, &ring, |ring| build_simple(ring, r).map_err(|e| e.to_string()), &label) else {
            continue;
        };
        if *r == zero {
            t.check(is_etale(&object), || "L(0) is not étale".into());
        }
        if *r == one {
            t.check(is_multiplicative(&object), || "L(1) is not multiplicative".into());
        }
        if *r == half {
            t.check(is_connected(&object) && is_unipotent(&object), || "L(1/2) is not connected unipotent".into());
        }
    }
    let extensions = standard_extensions_p3();
    for (label, ctx, dec) in &extensions {
        let built = check_object_splits(&mut t, &ring, |ring| dec.build(ctx, ring).map_err(|e| e.to_string()), label);
        if let Some(object) = built.filter(|_| label.starts_with("E_st(0,0) s=1 r1=1/2 r2=1/2")) {
            t.check(is_unipotent(&object), || "E_st(0,0,1) is not unipotent".into());
        }
    }
    let n_ext = extensions.len();
    outcome(&t, &format!("{} simples and {n_ext} standard extensions at p = 3", simples.len()))
}
