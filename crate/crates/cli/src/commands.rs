use std::path::Path;

use phimod::base_arith::{GaloisField, SeriesRing};
use phimod::digits::DigitRational;
use phimod::json::{self, Overrides};
use phimod::objects::{
    cokernel, etale_split, fl_normalize, fl_to_module, is_connected, is_etale, is_multiplicative, is_strict_epi,
    is_strict_mono, is_unipotent, kernel, splitting_section, unipotent_split, Morphism, PhiNModule, Split,
};
use phimod::selftest;
use phimod::simples_ext::{
    build_simple, character_of_simple, decompose_full, decompose_object, normalize_c1, ramification_bounds, reduce_c2,
    ExtContext, FactorSystem, Move, PairKind,
};
use phimod::unitfilter::{filtrate, replay, Irreducibility};
use serde_json::{json, Map, Value};

use crate::{Command, Failure, FlDirection, Global, ObjectAction, Outcome};

pub fn dispatch(global: &Global, command: &Command) -> Result<Outcome, Failure> {
    let ov = Overrides {
        prec: global.prec,
        fq_degree: global.fq_degree,
    };
    match command {
        Command::Simple { p, r } => simple(ov, *p, r),
        Command::Admissible { p, r1, r2, s } => admissible(*p, r1, r2, *s),
        Command::Normalize { input } => normalize(ov, &read_json(input)?),
        Command::Decompose { input } => decompose(ov, &read_json(input)?),
        Command::Object { action, input } => object(ov, *action, &read_json(input)?),
        Command::Fl { direction, input } => fl(ov, *direction, &read_json(input)?),
        Command::Bounds { p } => bounds(*p),
        Command::Filtrate { input } => filtrate_units(&read_json(input)?),
        Command::Selftest { criterion } => run_selftest(global.seed, criterion),
    }
}

fn read_json(path: &Path) -> Result<Value, Failure> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Failure::malformed("io_error", format!("cannot read {}: {e}", path.display())))?;
    serde_json::from_str(&text)
        .map_err(|e| Failure::malformed("malformed_input", format!("{} is not JSON: {e}", path.display())))
}

fn done(result: Value, resolved: Map<String, Value>) -> Result<Outcome, Failure> {
    Ok(Outcome { result, resolved, exit: 0 })
}

/// Field spec and precision actually used.
fn ring_config(ring: &SeriesRing) -> Map<String, Value> {
    let mut out = match json::field_json(ring.field()) {
        Value::Object(m) => m,
        _ => unreachable!("field_json builds an object"),
    };
    out.insert("prec".into(), json!(ring.prec()));
    out
}

fn digit_arg(text: &str, p: u32) -> Result<DigitRational, Failure> {
    DigitRational::parse(text, p).map_err(Failure::input)
}

fn split_json(split: &Split) -> Value {
    let field = split.sub.field();
    json!({
        "sub_rank": split.sub.rank(),
        "quotient_rank": split.quotient.rank(),
        "embedding": json::series_matrix_json(field, split.embedding.matrix()),
        "projection": json::series_matrix_json(field, split.projection.matrix()),
    })
}

fn classification(object: &PhiNModule) -> Value {
    json!({
        "etale": is_etale(object),
        "connected": is_connected(object),
        "multiplicative": is_multiplicative(object),
        "unipotent": is_unipotent(object),
    })
}

fn simple(ov: Overrides, p: u32, r: &str) -> Result<Outcome, Failure> {
    let r = digit_arg(r, p)?;
    let field = GaloisField::with_degree(p, ov.fq_degree.unwrap_or(1)).map_err(Failure::input)?;
    let ring = json::ring_for(field, &Map::new(), ov).map_err(Failure::input)?;
    let object = build_simple(&ring, &r).map_err(Failure::domain)?;
    let etale = etale_split(&object).map_err(Failure::domain)?;
    let unipotent = unipotent_split(&object).map_err(Failure::domain)?;
    let character = serde_json::to_value(character_of_simple(&r)).expect("character serialises");
    done(
        json!({
            "r": json::rational_str(&r.value()),
            "digits": r.digits(),
            "period": r.minimal_period(),
            "character": character,
            "classification": classification(&object),
            "etale_split": split_json(&etale),
            "unipotent_split": split_json(&unipotent),
            "module": json::module_json(&object),
        }),
        ring_config(&ring),
    )
}

fn admissible(p: u32, r1: &str, r2: &str, s: Option<usize>) -> Result<Outcome, Failure> {
    let ctx = ExtContext::new(digit_arg(r1, p)?, digit_arg(r2, p)?, s).map_err(Failure::input)?;
    let pairs = ctx.admissible_pairs();
    let with_constants = |kind: PairKind, list: &[(usize, usize, usize)]| -> Result<Vec<Value>, Failure> {
        list.iter()
            .map(|&(i, j, m0)| {
                let c = ctx.check_pair_constants(kind, i, j).map_err(Failure::domain)?;
                Ok(json!({
                    "i": i,
                    "j": j,
                    "m0": m0,
                    "C": c.c.as_ref().map(json::rational_str),
                    "bounds_ok": c.bounds_ok,
                    "detail": c.detail,
                }))
            })
            .collect()
    };
    let cr = with_constants(PairKind::Cr, &pairs.cr)?;
    let st = with_constants(PairKind::St, &pairs.st)?;
    let sp = pairs
        .sp
        .iter()
        .map(|&j| {
            let c = ctx.check_pair_constants(PairKind::Sp, 0, j).map_err(Failure::domain)?;
            Ok(json!({"i": 0, "j": j, "bounds_ok": c.bounds_ok, "detail": c.detail}))
        })
        .collect::<Result<Vec<_>, Failure>>()?;
    let mut resolved = Map::new();
    resolved.insert("s".into(), json!(ctx.s()));
    done(
        json!({
            "context": json::context_json(&ctx),
            "q": ctx.q().to_string(),
            "a_tilde": ctx.a_tilde(),
            "b_tilde": ctx.b_tilde(),
            "cr": cr,
            "st": st,
            "sp": sp,
        }),
        resolved,
    )
}

fn moves_json(fs: &FactorSystem, moves: &[Move]) -> Value {
    let field = fs.ring().field();
    moves
        .iter()
        .map(|m| json!({"j": m.j, "i": m.i, "t": m.t, "kappa": json::fq_json(field, m.kappa)}))
        .collect()
}

fn normalize(ov: Overrides, input: &Value) -> Result<Outcome, Failure> {
    let (fs, _) = json::decode_factor_system(input, ov).map_err(Failure::input)?;
    let c1 = normalize_c1(&fs).map_err(Failure::domain)?;
    let c2 = reduce_c2(&c1.system).map_err(Failure::domain)?;
    let out = &c2.system;
    done(
        json!({
            "input": json::factor_terms_json(&fs),
            "c1": {"terms": json::factor_terms_json(&c1.system), "moves": moves_json(&fs, &c1.moves)},
            "c2": {"terms": json::factor_terms_json(out), "moves": moves_json(&fs, &c2.moves)},
            "satisfies_c1": out.satisfies_c1(),
            "satisfies_c2": out.satisfies_c2(),
            "crystalline": out.is_crystalline(),
        }),
        ring_config(fs.ring()),
    )
}

/// Accepts a decomposition (rebuilt, then decomposed), a module with a
/// context, or a factor system with optional residues.
fn decompose(ov: Overrides, input: &Value) -> Result<Outcome, Failure> {
    let (kind, ctx, ring, dec) = if json::is_decomposition_file(input) {
        let (ctx, ring, dec) = json::decode_decomposition(input, ov).map_err(Failure::input)?;
        let object = dec.build(&ctx, &ring).map_err(Failure::domain)?;
        let again = decompose_object(&ctx, &object).map_err(Failure::domain)?;
        ("decomposition", ctx, ring, again)
    } else if input.get("filt_matrix").is_some() {
        let ctx = json::decode_context(input).map_err(Failure::input)?;
        let object = json::decode_module(input, ov).map_err(Failure::input)?;
        let dec = decompose_object(&ctx, &object).map_err(Failure::domain)?;
        ("module", ctx, object.ring().clone(), dec)
    } else {
        let (fs, residues) = json::decode_factor_system(input, ov).map_err(Failure::input)?;
        let dec = decompose_full(&fs, &residues).map_err(Failure::domain)?;
        ("factor_system", fs.context().clone(), fs.ring().clone(), dec)
    };
    let mut resolved = ring_config(&ring);
    resolved.insert("input_kind".into(), json!(kind));
    done(json::decomposition_json(&ctx, &ring, &dec), resolved)
}

fn decode_morphism(ov: Overrides, input: &Value) -> Result<Morphism, Failure> {
    let part = |key: &str| {
        input
            .get(key)
            .ok_or_else(|| Failure::malformed("malformed_input", format!("morphism file lacks \"{key}\"")))
    };
    let source = json::decode_module(part("source")?, ov).map_err(Failure::input)?;
    let target = json::decode_module(part("target")?, ov).map_err(Failure::input)?;
    if source.ring() != target.ring() {
        return Err(Failure::malformed("malformed_input", "source and target use different fields or precisions"));
    }
    let matrix = json::decode_series_matrix(target.ring(), target.rank(), part("matrix")?).map_err(Failure::input)?;
    if matrix.cols() != source.rank() {
        return Err(Failure::malformed(
            "malformed_input",
            format!("matrix has {} columns, source has rank {}", matrix.cols(), source.rank()),
        ));
    }
    Morphism::new(source, target, matrix).map_err(Failure::domain)
}

fn object(ov: Overrides, action: ObjectAction, input: &Value) -> Result<Outcome, Failure> {
    match action {
        ObjectAction::Validate => {
            let object = json::decode_module_unchecked(input, ov)
                .map_err(Failure::input)?
                .map_err(Failure::domain)?;
            let report = object.validate();
            let failures: Vec<Value> = report
                .failures
                .iter()
                .map(|f| json!({"axiom": f.axiom, "column": f.column, "detail": f.detail}))
                .collect();
            done(
                json!({
                    "valid": report.is_ok(),
                    "rank": object.rank(),
                    "crystalline": report.is_ok() && object.is_crystalline(),
                    "failures": failures,
                }),
                ring_config(object.ring()),
            )
        }
        ObjectAction::Splits => {
            let object = json::decode_module(input, ov).map_err(Failure::input)?;
            let etale = etale_split(&object).map_err(Failure::domain)?;
            let unipotent = unipotent_split(&object).map_err(Failure::domain)?;
            let field = object.field();
            let section = match splitting_section(&object) {
                Ok(sec) => json!({
                    "section": sec.section.iter().map(|v| v.iter().map(|x| json::series_json(field, x)).collect::<Vec<_>>()).collect::<Vec<_>>(),
                    "defects": sec.defects.iter().map(|v| v.iter().map(|x| json::series_json(field, x)).collect::<Vec<_>>()).collect::<Vec<_>>(),
                    "series_terms": sec.series_terms,
                }),
                Err(e) => {
                    let f = Failure::domain(e);
                    json!({"error": {"code": f.code, "message": f.message}})
                }
            };
            done(
                json!({
                    "classification": classification(&object),
                    "etale_split": split_json(&etale),
                    "unipotent_split": split_json(&unipotent),
                    "splitting_section": section,
                }),
                ring_config(object.ring()),
            )
        }
        ObjectAction::Kernel => {
            let f = decode_morphism(ov, input)?;
            let k = kernel(&f).map_err(Failure::domain)?;
            let field = f.source().field();
            done(
                json!({
                    "object": json::module_json(&k.object),
                    "embedding": json::series_matrix_json(field, k.embedding.matrix()),
                    "strict_mono": is_strict_mono(&f),
                    "strict_epi": is_strict_epi(&f),
                }),
                ring_config(f.source().ring()),
            )
        }
        ObjectAction::Cokernel => {
            let f = decode_morphism(ov, input)?;
            let c = cokernel(&f).map_err(Failure::domain)?;
            let field = f.source().field();
            done(
                json!({
                    "object": json::module_json(&c.object),
                    "projection": json::series_matrix_json(field, c.projection.matrix()),
                    "strict_mono": is_strict_mono(&f),
                    "strict_epi": is_strict_epi(&f),
                }),
                ring_config(f.source().ring()),
            )
        }
    }
}

fn fl(ov: Overrides, direction: FlDirection, input: &Value) -> Result<Outcome, Failure> {
    match direction {
        FlDirection::ToModule => {
            let module = json::decode_fl(input, ov).map_err(Failure::input)?;
            let obj = input.as_object().expect("decode_fl accepted an object");
            let ring = json::ring_for(module.field().clone(), obj, ov).map_err(Failure::input)?;
            let object = fl_to_module(&module, &ring).map_err(Failure::domain)?;
            done(json!({"module": json::module_json(&object)}), ring_config(&ring))
        }
        FlDirection::FromModule => {
            let object = json::decode_module(input, ov).map_err(Failure::input)?;
            let n = fl_normalize(&object).map_err(Failure::domain)?;
            let witness_field = n.witness.source().field();
            done(
                json!({
                    "fl": json::fl_json(&n.module),
                    "extension_degree": n.extension_degree,
                    "witness": {
                        "field": json::field_json(witness_field),
                        "matrix": json::series_matrix_json(witness_field, n.witness.matrix()),
                    },
                }),
                ring_config(object.ring()),
            )
        }
    }
}

fn bounds(p: u32) -> Result<Outcome, Failure> {
    GaloisField::prime(p).map_err(Failure::input)?;
    let b = ramification_bounds(p);
    done(
        json!({
            "p": p,
            "upper_v": json::rational_str(&b.upper_v),
            "different": json::rational_str(&b.different_bound),
            "disc": b.disc_decimal(),
        }),
        Map::new(),
    )
}

fn filtrate_units(input: &Value) -> Result<Outcome, Failure> {
    let (field, units, p) = json::decode_unit_file(input).map_err(Failure::input)?;
    let result = filtrate(&field, &units, p).map_err(Failure::domain)?;
    let replayed = replay(&field, &units, p, &result.events).map_err(Failure::domain)?;
    let mut out = json::filtration_json(&field, &result);
    out["replay_matches"] = json!(replayed == result.basis);
    let mut resolved = Map::new();
    resolved.insert("p".into(), json!(p));
    resolved.insert("degree".into(), json!(field.degree()));
    let irreducibility = match field.irreducibility() {
        Irreducibility::Trusted => json!("trusted"),
        Irreducibility::CertifiedModulo(ell) => json!({"certified_modulo": ell}),
    };
    resolved.insert("irreducibility".into(), irreducibility);
    done(out, resolved)
}

fn run_selftest(seed: u64, only: &[u8]) -> Result<Outcome, Failure> {
    let reports = if only.is_empty() {
        selftest::run_all(seed)
    } else {
        only.iter()
            .map(|&id| {
                selftest::run_criterion(id, seed)
                    .ok_or_else(|| Failure::malformed("usage", format!("there is no criterion {id}")))
            })
            .collect::<Result<Vec<_>, _>>()?
    };
    for r in &reports {
        eprintln!("{} ({} ms)", r.line(), r.elapsed_ms);
    }
    let blocking = reports.iter().filter(|r| !r.passed && r.known_deviation.is_none()).count();
    let criteria: Vec<Value> = reports
        .iter()
        .map(|r| {
            json!({
                "id": r.id,
                "title": r.title,
                "passed": r.passed,
                "checks": r.checks,
                "detail": r.detail,
                "known_deviation": r.known_deviation,
            })
        })
        .collect();
    let mut resolved = Map::new();
    resolved.insert("criteria".into(), json!(reports.iter().map(|r| r.id).collect::<Vec<_>>()));
    Ok(Outcome {
        result: json!({
            "criteria": criteria,
            "passed": reports.iter().filter(|r| r.passed).count(),
            "failed": reports.len() - reports.iter().filter(|r| r.passed).count(),
            "blocking_failures": blocking,
        }),
        resolved,
        exit: u8::from(blocking > 0),
    })
}
