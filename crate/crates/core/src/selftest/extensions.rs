//! Criteria on admissible pairs, factor systems and standard extensions.

use std::collections::{BTreeMap, BTreeSet};

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::{outcome, Outcome, Tally};
use crate::base_arith::{Fq, GaloisField, SeriesRing};
use crate::digits::{words_of_period, DigitRational};
use crate::objects::find_isomorphism;
use crate::simples_ext::{
    build_e_st, build_simple, decompose_cr, decompose_object, l11_presentation, q_rational_ext_count, ExtContext,
    ExtDecomposition, ExtError, FactorSystem, PairKind, PairTerm, SpTerm,
};

fn words_up_to(p: u32, max_period: usize) -> Vec<DigitRational> {
    (1..=max_period).flat_map(|s| words_of_period(p, s)).collect()
}

pub(crate) fn admissibility_constants() -> Outcome {
    let mut t = Tally::default();
    let mut counts = [0usize; 3];
    for p in [3u32, 5, 7] {
        let words = words_up_to(p, 3);
        for r1 in &words {
            for r2 in &words {
                let ctx = match ExtContext::new(r1.clone(), r2.clone(), None) {
                    Ok(c) if c.s() <= 6 => c,
                    Ok(_) => continue,
                    Err(e) => {
                        t.fail(format!("context ({r1}, {r2}): {e}"));
                        continue;
                    }
                };
                let pairs = ctx.admissible_pairs();
                let cases = pairs
                    .cr
                    .iter()
                    .map(|&(i, j, _)| (PairKind::Cr, i, j))
                    .chain(pairs.st.iter().map(|&(i, j, _)| (PairKind::St, i, j)))
                    .chain(pairs.sp.iter().map(|&j| (PairKind::Sp, 0, j)));
                for (kind, i, j) in cases {
                    counts[kind as usize] += 1;
                    match ctx.check_pair_constants(kind, i, j) {
                        Ok(c) => t.check(c.bounds_ok, || format!("p={p} r1={r1} r2={r2} {kind:?}({i},{j}): {}", c.detail)),
                        Err(e) => t.fail(format!("p={p} r1={r1} r2={r2} {kind:?}({i},{j}): {e}")),
                    }
                }
            }
        }
    }
    outcome(&t, &format!("{} cr, {} st, {} sp pairs over p ∈ {{3,5,7}}", counts[0], counts[1], counts[2]))
}

/// Row echelon basis over `F_3` with full reduction, for canonical forms mod a subspace.
struct Echelon {
    rows: Vec<(usize, Vec<u32>)>,
}

impl Echelon {
    fn new() -> Self {
        Echelon { rows: Vec::new() }
    }

    fn reduce(&self, v: &[u32]) -> Vec<u32> {
        let mut v = v.to_vec();
        for (pivot, row) in &self.rows {
            let c = v[*pivot];
            if c != 0 {
                for (x, r) in v.iter_mut().zip(row) {
                    *x = (*x + 3 - (c * r) % 3) % 3;
                }
            }
        }
        v
    }

    fn insert(&mut self, v: &[u32]) {
        let mut v = self.reduce(v);
        let Some(pivot) = v.iter().position(|&x| x != 0) else {
            return;
        };
        let inv = if v[pivot] == 1 { 1 } else { 2 };
        v.iter_mut().for_each(|x| *x = *x * inv % 3);
        for (_, row) in self.rows.iter_mut() {
            let c = row[pivot];
            if c != 0 {
                for (x, r) in row.iter_mut().zip(&v) {
                    *x = (*x + 3 - (c * r) % 3) % 3;
                }
            }
        }
        self.rows.push((pivot, v));
    }
}

/// Sparse `(i, j, γ)` coefficients of a factor system.
type SystemKey = Vec<(usize, usize, u32)>;

/// Classes of `F_3`-rational crystalline systems at `s = 1` modulo
/// coboundaries with coefficients in `F_27`, counted by enumeration.
///
/// A system is `v = Σ_t γ_t u^t l^{(1)}`; the coboundary of `w = κu^t l^{(1)}`
/// with `t ≥ ã` adds `κu^t − σ(κ)u^{b̃ + 3(t − ã)}` (dropped past the precision).
pub(crate) fn ext_dimension_oracle() -> Outcome {
    const PREC: usize = 6;
    let mut t = Tally::default();
    let field = GaloisField::with_degree(3, 3).expect("F_27 exists");
    let ring = SeriesRing::new(field.clone(), PREC);
    let m = field.m();
    let basis: Vec<Fq> = (0..m)
        .map(|k| {
            let mut c = vec![0; m];
            c[k] = 1;
            field.from_coords(&c).expect("unit vector")
        })
        .collect();
    let third = DigitRational::new(3, vec![1]).expect("1/2");
    let values = [
        DigitRational::zero(3).expect("0"),
        third,
        DigitRational::one(3).expect("1"),
    ];
    let mut summary = Vec::new();
    for r1 in &values {
        for r2 in &values {
            let ctx = ExtContext::new(r1.clone(), r2.clone(), Some(1)).expect("s = 1");
            let (a, b) = (ctx.a(0), ctx.b(0));
            let to_vec = |coeffs: &[Fq]| -> Vec<u32> { coeffs.iter().flat_map(|&c| field.coords(c)).collect() };
            let mut cob = Echelon::new();
            for deg in a..PREC {
                for &kappa in &basis {
                    let mut v = vec![Fq::ZERO; PREC];
                    v[deg] = field.add(v[deg], kappa);
                    let far = b + 3 * (deg - a);
                    if far < PREC {
                        v[far] = field.sub(v[far], field.frob(kappa, 1));
                    }
                    cob.insert(&to_vec(&v));
                }
            }
            let free = PREC - a;
            let mut classes: BTreeMap<Vec<u32>, BTreeSet<SystemKey>> = BTreeMap::new();
            for n in 0..3u64.pow(free as u32) {
                let mut coeffs = vec![Fq::ZERO; PREC];
                let mut k = n;
                for c in coeffs.iter_mut().skip(a) {
                    *c = field.from_int((k % 3) as i64);
                    k /= 3;
                }
                let key = cob.reduce(&to_vec(&coeffs));
                let fs = FactorSystem::from_terms(
                    &ctx,
                    &ring,
                    coeffs.iter().enumerate().map(|(deg, &g)| (0, 0, deg, g)),
                )
                .expect("indices in range");
                match decompose_cr(&fs) {
                    Ok(dec) => {
                        let tag = dec.cr_terms.iter().map(|p| (p.i, p.j, p.gamma.encoding())).collect();
                        classes.entry(key).or_default().insert(tag);
                    }
                    Err(e) => t.fail(format!("decompose_cr at r1={r1}, r2={r2}: {e}")),
                }
            }
            let n_cr = ctx.admissible_pairs().cr.len();
            let expected = 3usize.pow(n_cr as u32);
            t.check(classes.len() == expected, || {
                format!("r1={r1}, r2={r2}: {} classes, expected 3^{n_cr}", classes.len())
            });
            t.check(classes.values().all(|tags| tags.len() == 1), || {
                format!("r1={r1}, r2={r2}: decompose_cr is not constant on classes")
            });
            let tags: BTreeSet<_> = classes.values().flatten().collect();
            t.check(tags.len() == classes.len(), || {
                format!("r1={r1}, r2={r2}: decompose_cr identifies distinct classes")
            });
            summary.push(format!("({r1},{r2})→{}", classes.len()));
        }
    }
    outcome(&t, &format!("classes {}", summary.join(" ")))
}

fn random_nonzero(rng: &mut ChaCha8Rng, field: &GaloisField) -> Fq {
    field.element(rng.gen_range(1..field.q()))
}

/// Random decomposition over admissible pairs, favouring `kind`; `None` if
/// the context has no pair of that kind.
fn random_decomposition(rng: &mut ChaCha8Rng, ctx: &ExtContext, field: &GaloisField, kind: PairKind) -> Option<ExtDecomposition> {
    let pairs = ctx.admissible_pairs();
    let available = match kind {
        PairKind::Cr => !pairs.cr.is_empty(),
        PairKind::St => !pairs.st.is_empty(),
        PairKind::Sp => !pairs.sp.is_empty(),
    };
    if !available {
        return None;
    }
    let mut dec = ExtDecomposition::default();
    let pick = |forced: bool, rng: &mut ChaCha8Rng| forced || rng.gen_bool(0.4);
    let forced_cr = (kind == PairKind::Cr).then(|| rng.gen_range(0..pairs.cr.len().max(1)));
    for (n, &(i, j, _)) in pairs.cr.iter().enumerate() {
        if pick(forced_cr == Some(n), rng) {
            dec.cr_terms.push(PairTerm { i, j, gamma: random_nonzero(rng, field) });
        }
    }
    let forced_st = (kind == PairKind::St).then(|| rng.gen_range(0..pairs.st.len().max(1)));
    for (n, &(i, j, _)) in pairs.st.iter().enumerate() {
        if pick(forced_st == Some(n), rng) {
            dec.st_terms.push(PairTerm { i, j, gamma: random_nonzero(rng, field) });
        }
    }
    let forced_sp = (kind == PairKind::Sp).then(|| rng.gen_range(0..pairs.sp.len().max(1)));
    for (n, &j) in pairs.sp.iter().enumerate() {
        if pick(forced_sp == Some(n), rng) {
            dec.sp_terms.push(SpTerm { j, gamma: random_nonzero(rng, field) });
        }
    }
    Some(dec)
}

pub(crate) fn decomposition_round_trips(seed: u64) -> Outcome {
    let mut t = Tally::default();
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x0003);
    let kinds = [PairKind::Cr, PairKind::St, PairKind::Sp];
    let mut per_kind = [0usize; 3];
    let mut cycles = 0;
    let mut attempts = 0;
    while cycles < 200 && attempts < 20_000 {
        attempts += 1;
        let p = *[3u32, 5].choose(&mut rng).expect("nonempty");
        let s = rng.gen_range(1..=2usize);
        let words: Vec<DigitRational> = (1..=s).filter(|d| s % d == 0).flat_map(|d| words_of_period(p, d)).collect();
        let r1 = words.choose(&mut rng).expect("nonempty").clone();
        let r2 = words.choose(&mut rng).expect("nonempty").clone();
        let ctx = ExtContext::new(r1, r2, Some(s)).expect("periods divide s");
        let field = GaloisField::with_degree(p, s).expect("small field");
        let ring = SeriesRing::with_default_prec(field.clone());
        let kind = kinds[cycles % 3];
        let Some(dec) = random_decomposition(&mut rng, &ctx, &field, kind) else {
            continue;
        };
        cycles += 1;
        per_kind[kind as usize] += 1;
        let label = || format!("p={p} s={s} r1={} r2={} {dec:?}", ctx.r1(), ctx.r2());
        let object = match dec.build(&ctx, &ring) {
            Ok(o) => o,
            Err(e) => {
                t.fail(format!("build {}: {e}", label()));
                continue;
            }
        };
        t.check(object.validate().is_ok(), || format!("invalid object {}", label()));
        match decompose_object(&ctx, &object) {
            Ok(back) => {
                t.check(back == dec, || format!("decomposed to {back:?} from {}", label()));
                match back.build(&ctx, &ring) {
                    Ok(again) => t.check(again == object, || format!("rebuild differs for {}", label())),
                    Err(e) => t.fail(format!("rebuild {}: {e}", label())),
                }
            }
            Err(e) => t.fail(format!("decompose {}: {e}", label())),
        }
    }
    t.check(cycles == 200, || format!("only {cycles} cycles generated"));
    outcome(
        &t,
        &format!(
            "{cycles} cycles led by cr/st/sp = {}/{}/{}",
            per_kind[0], per_kind[1], per_kind[2]
        ),
    )
}

pub(crate) fn weight_one_scenario(seed: u64) -> Outcome {
    let mut t = Tally::default();
    let field = GaloisField::prime(3).expect("F_3");
    let ring = SeriesRing::with_default_prec(field.clone());
    let ctx = crate::simples_ext::scenario::weight_one_context();
    let result = (|| -> Result<(), ExtError> {
        let ext = build_e_st(&ctx, &ring, 0, 0, field.one())?;
        t.check(ext.validate().is_ok(), || "E_st(0,0,1) fails validation".into());
        t.check(!ext.is_crystalline(), || "E_st(0,0,1) is crystalline".into());
        let half = build_simple(&ring, ctx.r1())?;
        let split = half.direct_sum(&half);
        t.check(find_isomorphism(&ext, &split, seed).is_none(), || "E_st(0,0,1) splits".into());
        let l11 = l11_presentation(&ring)?;
        t.check(l11.validate().is_ok(), || "L(1,1) fails validation".into());
        t.check(find_isomorphism(&l11, &ext, seed).is_some(), || "E_st(0,0,1) is not L(1,1)".into());
        let dec = decompose_object(&ctx, &l11)?;
        t.check(
            dec.st_terms == vec![PairTerm { i: 0, j: 0, gamma: field.one() }] && dec.cr_terms.is_empty() && dec.sp_terms.is_empty(),
            || format!("L(1,1) decomposes as {dec:?}"),
        );
        let count = q_rational_ext_count(3, ctx.r1(), ctx.r2())?;
        t.check(count == 3, || format!("q_rational_ext_count = {count}"));
        Ok(())
    })();
    if let Err(e) = result {
        t.fail(e.to_string());
    }
    outcome(&t, "E_st(0,0,1) ≅ L(1,1), nonsplit, non-crystalline; 3 rational classes")
}

/// Every standard extension at `p = 3` over contexts with `s ≤ 2`, with `γ = 1`.
pub(crate) fn standard_extensions_p3() -> Vec<(String, ExtContext, ExtDecomposition)> {
    let mut out = Vec::new();
    for s in 1..=2usize {
        let words: Vec<DigitRational> = (1..=s).filter(|d| s % d == 0).flat_map(|d| words_of_period(3, d)).collect();
        for r1 in &words {
            for r2 in &words {
                let ctx = ExtContext::new(r1.clone(), r2.clone(), Some(s)).expect("periods divide s");
                let pairs = ctx.admissible_pairs();
                let one = Fq::ONE;
                let label = |name: String| format!("{name} s={s} r1={r1} r2={r2}");
                for &(i, j, _) in &pairs.cr {
                    let dec = ExtDecomposition { cr_terms: vec![PairTerm { i, j, gamma: one }], ..Default::default() };
                    out.push((label(format!("E_cr({i},{j})")), ctx.clone(), dec));
                }
                for &(i, j, _) in &pairs.st {
                    let dec = ExtDecomposition { st_terms: vec![PairTerm { i, j, gamma: one }], ..Default::default() };
                    out.push((label(format!("E_st({i},{j})")), ctx.clone(), dec));
                }
                for &j in &pairs.sp {
                    let dec = ExtDecomposition { sp_terms: vec![SpTerm { j, gamma: one }], ..Default::default() };
                    out.push((label(format!("E_sp({j})")), ctx.clone(), dec));
                }
            }
        }
    }
    out
}
