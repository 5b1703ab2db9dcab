//! JSON encodings: rationals as `"n/d"` strings, field elements as
//! coordinate arrays, series as arrays of coefficients and matrices as
//! lists of columns. Field specs are flattened into the enclosing object.

use num_bigint::BigInt;
use num_rational::BigRational;
use serde::Serializer;
use serde_json::{json, Map, Value};
use thiserror::Error;

use crate::base_arith::{FieldSpec, Fq, FqMatrix, GaloisField, SeriesMatrix, SeriesRing, TruncSeries};
use crate::digits::DigitRational;
use crate::objects::{FlModule, ObjectError, PhiNModule};
use crate::simples_ext::{ExtContext, ExtDecomposition, FactorSystem, PairTerm, ResidueTable, SpTerm};
use crate::unitfilter::{FiltrationResult, NfElement, NumberField, PValuation, QPoly};

pub fn rational_str(r: &BigRational) -> String {
    format!("{}/{}", r.numer(), r.denom())
}

pub fn ser_rational<S: Serializer>(r: &BigRational, s: S) -> Result<S::Ok, S::Error> {
    s.serialize_str(&rational_str(r))
}

pub fn ser_bigint<S: Serializer>(n: &BigInt, s: S) -> Result<S::Ok, S::Error> {
    s.serialize_str(&n.to_string())
}

/// Input that cannot be turned into the requested object.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
#[error("{0}")]
pub struct DecodeError(pub String);

type DResult<T> = std::result::Result<T, DecodeError>;

fn err<T>(msg: impl Into<String>) -> DResult<T> {
    Err(DecodeError(msg.into()))
}

fn wrap<E: std::fmt::Display>(context: &str) -> impl Fn(E) -> DecodeError + '_ {
    move |e| DecodeError(format!("{context}: {e}"))
}

/// Precision and field-degree overrides supplied outside the file.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct Overrides {
    pub prec: Option<usize>,
    pub fq_degree: Option<usize>,
}

fn as_object<'a>(v: &'a Value, what: &str) -> DResult<&'a Map<String, Value>> {
    v.as_object().ok_or_else(|| DecodeError(format!("{what} must be a JSON object")))
}

fn field_of<'a>(obj: &'a Map<String, Value>, key: &str) -> DResult<&'a Value> {
    obj.get(key).ok_or_else(|| DecodeError(format!("missing field \"{key}\"")))
}

fn uint(v: &Value, what: &str) -> DResult<u64> {
    v.as_u64().ok_or_else(|| DecodeError(format!("{what} must be a nonnegative integer")))
}

fn usize_at(obj: &Map<String, Value>, key: &str) -> DResult<usize> {
    Ok(uint(field_of(obj, key)?, key)? as usize)
}

fn opt_usize(obj: &Map<String, Value>, key: &str) -> DResult<Option<usize>> {
    obj.get(key).map(|v| uint(v, key).map(|n| n as usize)).transpose()
}

fn array<'a>(v: &'a Value, what: &str) -> DResult<&'a Vec<Value>> {
    v.as_array().ok_or_else(|| DecodeError(format!("{what} must be an array")))
}

fn prime_at(obj: &Map<String, Value>) -> DResult<u32> {
    let p = usize_at(obj, "p")?;
    u32::try_from(p).map_err(|_| DecodeError("p is too large".into()))
}

pub fn parse_rational(text: &str) -> DResult<BigRational> {
    let bad = || DecodeError(format!("\"{text}\" is not a rational"));
    let (n, d) = text.trim().split_once('/').unwrap_or((text.trim(), "1"));
    let n: BigInt = n.trim().parse().map_err(|_| bad())?;
    let d: BigInt = d.trim().parse().map_err(|_| bad())?;
    if d == BigInt::from(0) {
        return Err(bad());
    }
    Ok(BigRational::new(n, d))
}

/// A rational given as a `"n/d"` string or a JSON integer.
fn rational_value(v: &Value) -> DResult<BigRational> {
    match v {
        Value::String(s) => parse_rational(s),
        Value::Number(n) => n
            .as_i64()
            .map(|n| BigRational::from_integer(n.into()))
            .ok_or_else(|| DecodeError(format!("{n} is not an integer"))),
        _ => err("rationals must be strings \"n/d\" or integers"),
    }
}

pub fn field_json(field: &GaloisField) -> Value {
    let spec = field.spec();
    json!({"p": spec.p, "m": spec.m, "modulus": spec.modulus})
}

/// Field from `"p"`, `"m"` and optional `"modulus"`; `default_m` applies when `"m"` is absent.
pub fn decode_field(v: &Value, ov: Overrides, default_m: usize) -> DResult<GaloisField> {
    let obj = as_object(v, "field spec")?;
    let p = prime_at(obj)?;
    if let Some(modulus) = obj.get("modulus") {
        let modulus: Vec<u32> = array(modulus, "modulus")?
            .iter()
            .map(|c| uint(c, "modulus coefficient").map(|c| c as u32))
            .collect::<DResult<_>>()?;
        let m = modulus.len().saturating_sub(1);
        if let Some(d) = opt_usize(obj, "m")?.filter(|&d| d != m) {
            return err(format!("m = {d} disagrees with a modulus of degree {m}"));
        }
        if let Some(d) = ov.fq_degree.filter(|&d| d != m) {
            return err(format!("--fq-degree {d} disagrees with the modulus in the file"));
        }
        return GaloisField::new(FieldSpec { p, m, modulus }).map_err(wrap("field"));
    }
    let m = ov.fq_degree.or(opt_usize(obj, "m")?).unwrap_or(default_m);
    GaloisField::with_degree(p, m).map_err(wrap("field"))
}

pub fn ring_for(field: GaloisField, obj: &Map<String, Value>, ov: Overrides) -> DResult<SeriesRing> {
    let p = field.p() as usize;
    let prec = ov.prec.or(opt_usize(obj, "prec")?).unwrap_or(3 * p);
    if prec < 2 * p {
        return err(format!("precision {prec} is below 2p = {}", 2 * p));
    }
    Ok(SeriesRing::new(field, prec))
}

pub fn fq_json(field: &GaloisField, x: Fq) -> Value {
    json!(field.coords(x))
}

/// An element from its coordinate array; a bare integer is read in the prime field.
pub fn decode_fq(field: &GaloisField, v: &Value) -> DResult<Fq> {
    match v {
        Value::Number(n) => n
            .as_i64()
            .map(|n| field.from_int(n))
            .ok_or_else(|| DecodeError(format!("{n} is not an integer"))),
        _ => {
            let coords: Vec<u32> = array(v, "field element")?
                .iter()
                .map(|c| uint(c, "coordinate").map(|c| c as u32))
                .collect::<DResult<_>>()?;
            if coords.iter().any(|&c| c >= field.p()) {
                return err(format!("coordinates must lie in [0, {})", field.p()));
            }
            field.from_coords(&coords).map_err(wrap("field element"))
        }
    }
}

/// Coefficients up to the last nonzero one.
pub fn series_json(field: &GaloisField, s: &TruncSeries) -> Value {
    let coeffs = s.coeffs();
    let len = coeffs.iter().rposition(|c| !c.is_zero()).map_or(0, |k| k + 1);
    Value::Array(coeffs[..len].iter().map(|&c| fq_json(field, c)).collect())
}

pub fn decode_series(ring: &SeriesRing, v: &Value) -> DResult<TruncSeries> {
    let coeffs: Vec<Fq> = array(v, "series")?
        .iter()
        .map(|c| decode_fq(ring.field(), c))
        .collect::<DResult<_>>()?;
    Ok(ring.from_coeffs(&coeffs))
}

pub fn series_matrix_json(field: &GaloisField, m: &SeriesMatrix) -> Value {
    Value::Array(
        m.columns()
            .iter()
            .map(|col| Value::Array(col.iter().map(|s| series_json(field, s)).collect()))
            .collect(),
    )
}

pub fn decode_series_matrix(ring: &SeriesRing, rows: usize, v: &Value) -> DResult<SeriesMatrix> {
    let cols = array(v, "matrix")?
        .iter()
        .map(|col| {
            let col = array(col, "matrix column")?;
            if col.len() != rows {
                return err(format!("matrix column has {} entries, expected {rows}", col.len()));
            }
            col.iter().map(|s| decode_series(ring, s)).collect::<DResult<Vec<_>>>()
        })
        .collect::<DResult<Vec<_>>>()?;
    Ok(SeriesMatrix::from_cols(ring, rows, &cols))
}

pub fn fq_matrix_json(field: &GaloisField, m: &FqMatrix) -> Value {
    Value::Array(
        (0..m.cols())
            .map(|j| Value::Array(m.col(j).into_iter().map(|x| fq_json(field, x)).collect()))
            .collect(),
    )
}

pub fn decode_fq_matrix(field: &GaloisField, rows: usize, v: &Value) -> DResult<FqMatrix> {
    let cols = array(v, "matrix")?
        .iter()
        .map(|col| {
            let col = array(col, "matrix column")?;
            if col.len() != rows {
                return err(format!("matrix column has {} entries, expected {rows}", col.len()));
            }
            col.iter().map(|x| decode_fq(field, x)).collect::<DResult<Vec<_>>>()
        })
        .collect::<DResult<Vec<_>>>()?;
    Ok(FqMatrix::from_cols(rows, &cols))
}

pub fn module_json(object: &PhiNModule) -> Value {
    let field = object.field();
    let mut out = field_json(field);
    let map = out.as_object_mut().expect("object literal");
    map.insert("prec".into(), json!(object.ring().prec()));
    map.insert("rank".into(), json!(object.rank()));
    map.insert("filt_matrix".into(), series_matrix_json(field, object.filt()));
    map.insert("n_table".into(), series_matrix_json(field, object.n_table()));
    out
}

type ModuleParts = (SeriesRing, SeriesMatrix, Option<SeriesMatrix>);

fn decode_module_parts(v: &Value, ov: Overrides) -> DResult<ModuleParts> {
    let obj = as_object(v, "module")?;
    let field = decode_field(v, ov, 1)?;
    let ring = ring_for(field, obj, ov)?;
    let rank = usize_at(obj, "rank")?;
    let filt = decode_series_matrix(&ring, rank, field_of(obj, "filt_matrix")?)?;
    if filt.cols() != rank {
        return err(format!("filt_matrix has {} columns, expected {rank}", filt.cols()));
    }
    let table = match obj.get("n_table") {
        Some(t) => {
            let table = decode_series_matrix(&ring, rank, t)?;
            if table.cols() != rank {
                return err(format!("n_table has {} columns, expected {rank}", table.cols()));
            }
            Some(table)
        }
        None => None,
    };
    Ok((ring, filt, table))
}

/// A module file; without `"n_table"` the crystalline `N` is used.
pub fn decode_module(v: &Value, ov: Overrides) -> DResult<PhiNModule> {
    let (ring, filt, table) = decode_module_parts(v, ov)?;
    let built = match table {
        Some(table) => PhiNModule::new(ring, filt, table),
        None => PhiNModule::crystalline(ring, filt),
    };
    built.map_err(wrap("module"))
}

/// A module file without validation, so that failing axioms can be reported.
/// The crystalline `N` of a file without `"n_table"` still needs an invertible filtration.
pub fn decode_module_unchecked(v: &Value, ov: Overrides) -> DResult<Result<PhiNModule, ObjectError>> {
    let (ring, filt, table) = decode_module_parts(v, ov)?;
    Ok(match table {
        Some(table) => Ok(PhiNModule::from_raw(ring, filt, table)),
        None => PhiNModule::crystalline(ring, filt),
    })
}

pub fn fl_json(m: &FlModule) -> Value {
    let mut out = field_json(m.field());
    let map = out.as_object_mut().expect("object literal");
    map.insert("dim".into(), json!(m.dim()));
    map.insert("jumps".into(), json!(m.jumps()));
    map.insert("phi_blocks".into(), fq_matrix_json(m.field(), m.phi()));
    out
}

/// `"phi_blocks"` lists the columns `φ_{j(i)}(e_i)`.
pub fn decode_fl(v: &Value, ov: Overrides) -> DResult<FlModule> {
    let obj = as_object(v, "FL module")?;
    let field = decode_field(v, ov, 1)?;
    let dim = usize_at(obj, "dim")?;
    let jumps: Vec<usize> = array(field_of(obj, "jumps")?, "jumps")?
        .iter()
        .map(|j| uint(j, "jump").map(|j| j as usize))
        .collect::<DResult<_>>()?;
    if jumps.len() != dim {
        return err(format!("{} jumps given for dimension {dim}", jumps.len()));
    }
    let phi = decode_fq_matrix(&field, dim, field_of(obj, "phi_blocks")?)?;
    FlModule::new(field, jumps, phi).map_err(wrap("FL module"))
}

pub fn context_json(ctx: &ExtContext) -> Value {
    json!({
        "p": ctx.p(),
        "r1": rational_str(&ctx.r1().value()),
        "r2": rational_str(&ctx.r2().value()),
        "s": ctx.s(),
    })
}

fn digit_rational(v: &Value, p: u32, what: &str) -> DResult<DigitRational> {
    match v {
        Value::String(s) => DigitRational::parse(s, p).map_err(wrap(what)),
        Value::Object(_) => {
            let r: DigitRational = serde_json::from_value(v.clone()).map_err(wrap(what))?;
            if r.p() != p {
                return err(format!("{what} is written in base {} but p = {p}", r.p()));
            }
            Ok(r)
        }
        _ => err(format!("{what} must be \"n/d\" or {{\"p\", \"digits\"}}")),
    }
}

/// `{"p", "r1", "r2", "s"?}` with `r` as `"n/d"` or a digit object.
pub fn decode_context(v: &Value) -> DResult<ExtContext> {
    let obj = as_object(v, "context")?;
    let p = prime_at(obj)?;
    let r1 = digit_rational(field_of(obj, "r1")?, p, "r1")?;
    let r2 = digit_rational(field_of(obj, "r2")?, p, "r2")?;
    ExtContext::new(r1, r2, opt_usize(obj, "s")?).map_err(wrap("context"))
}

/// The context, field and ring of a factor-system or decomposition file;
/// the field defaults to `F_{p^s}`.
pub fn decode_setting(v: &Value, ov: Overrides) -> DResult<(ExtContext, SeriesRing)> {
    let ctx = decode_context(v)?;
    let field = decode_field(v, ov, ctx.s())?;
    let ring = ring_for(field, as_object(v, "input")?, ov)?;
    Ok((ctx, ring))
}

fn setting_json(ctx: &ExtContext, ring: &SeriesRing) -> Map<String, Value> {
    let mut out = match context_json(ctx) {
        Value::Object(m) => m,
        _ => unreachable!(),
    };
    let spec = ring.field().spec();
    out.insert("m".into(), json!(spec.m));
    out.insert("modulus".into(), json!(spec.modulus));
    out.insert("prec".into(), json!(ring.prec()));
    out
}

pub fn factor_terms_json(fs: &FactorSystem) -> Value {
    let field = fs.ring().field();
    Value::Array(
        fs.terms()
            .map(|(i, j, t, g)| json!({"i": i, "j": j, "t": t, "gamma": fq_json(field, g)}))
            .collect(),
    )
}

pub fn residues_json(field: &GaloisField, res: &ResidueTable) -> Value {
    let m = &res.0;
    let mut out = Vec::new();
    for i in 0..m.rows() {
        for j in 0..m.cols() {
            if !m[(i, j)].is_zero() {
                out.push(json!({"i": i, "j": j, "kappa": fq_json(field, m[(i, j)])}));
            }
        }
    }
    Value::Array(out)
}

pub fn factor_system_json(fs: &FactorSystem, residues: Option<&ResidueTable>) -> Value {
    let mut out = setting_json(fs.context(), fs.ring());
    out.insert("terms".into(), factor_terms_json(fs));
    if let Some(res) = residues {
        out.insert("residues".into(), residues_json(fs.ring().field(), res));
    }
    Value::Object(out)
}

fn index_at(obj: &Map<String, Value>, key: &str, s: usize) -> DResult<usize> {
    let v = usize_at(obj, key)?;
    if v >= s {
        return err(format!("index {key} = {v} is outside Z/{s}"));
    }
    Ok(v)
}

/// A factor-system file: setting + `"terms"` and optional `"residues"`.
pub fn decode_factor_system(v: &Value, ov: Overrides) -> DResult<(FactorSystem, ResidueTable)> {
    let (ctx, ring) = decode_setting(v, ov)?;
    let obj = as_object(v, "factor system")?;
    let field = ring.field();
    let s = ctx.s();
    let mut terms = Vec::new();
    for term in array(field_of(obj, "terms")?, "terms")? {
        let t = as_object(term, "term")?;
        let (i, j) = (index_at(t, "i", s)?, index_at(t, "j", s)?);
        let deg = usize_at(t, "t")?;
        terms.push((i, j, deg, decode_fq(field, field_of(t, "gamma")?)?));
    }
    let fs = FactorSystem::from_terms(&ctx, &ring, terms).map_err(wrap("factor system"))?;
    let mut res = ResidueTable::zero(s);
    if let Some(list) = obj.get("residues") {
        for entry in array(list, "residues")? {
            let e = as_object(entry, "residue")?;
            let (i, j) = (index_at(e, "i", s)?, index_at(e, "j", s)?);
            let k = decode_fq(field, field_of(e, "kappa")?)?;
            res.0[(i, j)] = field.add(res.0[(i, j)], k);
        }
    }
    Ok((fs, res))
}

pub fn decomposition_json(ctx: &ExtContext, ring: &SeriesRing, dec: &ExtDecomposition) -> Value {
    let field = ring.field();
    let pair = |t: &PairTerm| json!({"i": t.i, "j": t.j, "gamma": fq_json(field, t.gamma)});
    let mut out = setting_json(ctx, ring);
    out.insert("cr".into(), Value::Array(dec.cr_terms.iter().map(pair).collect()));
    out.insert("st".into(), Value::Array(dec.st_terms.iter().map(pair).collect()));
    out.insert(
        "sp".into(),
        Value::Array(
            dec.sp_terms
                .iter()
                .map(|t| json!({"j": t.j, "gamma": fq_json(field, t.gamma)}))
                .collect(),
        ),
    );
    Value::Object(out)
}

pub fn is_decomposition_file(v: &Value) -> bool {
    v.as_object()
        .is_some_and(|o| ["cr", "st", "sp"].iter().any(|k| o.contains_key(*k)))
}

pub fn decode_decomposition(v: &Value, ov: Overrides) -> DResult<(ExtContext, SeriesRing, ExtDecomposition)> {
    let (ctx, ring) = decode_setting(v, ov)?;
    let obj = as_object(v, "decomposition")?;
    let field = ring.field();
    let s = ctx.s();
    let list = |key: &str| -> DResult<Vec<Value>> {
        obj.get(key)
            .map(|l| array(l, key).cloned())
            .transpose()
            .map(Option::unwrap_or_default)
    };
    let pairs = |key: &str| -> DResult<Vec<PairTerm>> {
        list(key)?
            .iter()
            .map(|e| {
                let e = as_object(e, key)?;
                Ok(PairTerm {
                    i: index_at(e, "i", s)?,
                    j: index_at(e, "j", s)?,
                    gamma: decode_fq(field, field_of(e, "gamma")?)?,
                })
            })
            .collect()
    };
    let cr_terms = pairs("cr")?;
    let st_terms = pairs("st")?;
    let sp_terms = list("sp")?
        .iter()
        .map(|e| {
            let e = as_object(e, "sp")?;
            Ok(SpTerm {
                j: index_at(e, "j", s)?,
                gamma: decode_fq(field, field_of(e, "gamma")?)?,
            })
        })
        .collect::<DResult<_>>()?;
    Ok((
        ctx,
        ring,
        ExtDecomposition {
            cr_terms,
            st_terms,
            sp_terms,
        },
    ))
}

pub fn valuation_json(v: PValuation) -> Value {
    match v {
        PValuation::Finite(n) => json!(n),
        PValuation::Infinite => json!("+Infinity"),
    }
}

pub fn nf_element_json(field: &NumberField, x: &NfElement) -> Value {
    Value::Array(field.coords(x).iter().map(|c| json!(rational_str(c))).collect())
}

/// A unit file `{"minpoly", "units", "p", "certificate"?}`; `minpoly` is ascending and monic.
pub fn decode_unit_file(v: &Value) -> DResult<(NumberField, Vec<NfElement>, u32)> {
    let obj = as_object(v, "unit file")?;
    let p = prime_at(obj)?;
    if p < 2 || !(2..p).take_while(|d| d * d <= p).all(|d| p % d != 0) {
        return err(format!("{p} is not prime"));
    }
    let minpoly: Vec<BigRational> = array(field_of(obj, "minpoly")?, "minpoly")?
        .iter()
        .map(rational_value)
        .collect::<DResult<_>>()?;
    let mut field = NumberField::new(QPoly::new(minpoly)).map_err(wrap("minpoly"))?;
    if let Some(ell) = obj.get("certificate") {
        field = field.certify(uint(ell, "certificate")?).map_err(wrap("certificate"))?;
    }
    let units = array(field_of(obj, "units")?, "units")?
        .iter()
        .map(|u| {
            let coeffs = array(u, "unit")?.iter().map(rational_value).collect::<DResult<Vec<_>>>()?;
            field.element(coeffs).map_err(wrap("unit"))
        })
        .collect::<DResult<Vec<_>>>()?;
    Ok((field, units, p))
}

pub fn filtration_json(field: &NumberField, r: &FiltrationResult) -> Value {
    json!({
        "af": r.af.iter().map(|&v| valuation_json(v)).collect::<Vec<_>>(),
        "basis": r.basis.iter().map(|x| nf_element_json(field, x)).collect::<Vec<_>>(),
        "transcript": r.transcript.iter().map(|&(i, j, k)| json!([i, j, k])).collect::<Vec<_>>(),
        "fall_throughs": r.fall_throughs,
    })
}
