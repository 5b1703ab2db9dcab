//! The greedy principal-unit filtration.
//!
//! A line-for-line transcription of the reference loop: `e` holds the
//! candidates, `f` the basis, `h` the reduction moves. Python's
//! `a.index(min(a))` becomes "first index of the minimum".

use super::nf::{NfElement, NumberField};
use super::qpoly::PValuation;
use super::UnitError;

/// One state change of the loop, with positions in the list as it was at that moment.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum FilterEvent {
    /// `f = [e.pop(index)]`.
    Seed { index: usize },
    /// `e[candidate] /= f[j]^(i·p^k)`.
    Reduce { candidate: usize, i: usize, j: usize, k: usize },
    /// `f.append(e.pop(candidate))`.
    Append { candidate: usize },
}

/// `(i, j, k)`: the candidate was divided by `f_j^{i·p^k}`.
pub type Move = (usize, usize, usize);

#[derive(Clone, Debug)]
pub struct FiltrationResult {
    pub basis: Vec<NfElement>,
    pub af: Vec<PValuation>,
    pub transcript: Vec<Move>,
    pub events: Vec<FilterEvent>,
    /// Number of shifted-norm evaluations that fell through.
    pub fall_throughs: usize,
}

fn first_min(values: &[PValuation]) -> (usize, PValuation) {
    let mut best = 0;
    for (idx, v) in values.iter().enumerate() {
        if *v < values[best] {
            best = idx;
        }
    }
    (best, values[best])
}

struct Scanner<'a> {
    field: &'a NumberField,
    p: u32,
    fall_throughs: usize,
}

impl Scanner<'_> {
    fn a(&mut self, x: &NfElement) -> PValuation {
        let sn = self.field.shifted_norm(x, self.p);
        if sn.fell_through {
            self.fall_throughs += 1;
        }
        super::qpoly::p_valuation(&sn.norm, self.p)
    }
}

/// `f_j^{p^k}` for increasing `k`, computed on demand by repeated `p`-th powers.
struct PowerCache {
    powers: Vec<Vec<NfElement>>,
}

impl PowerCache {
    fn get(&mut self, field: &NumberField, p: u32, j: usize, k: usize) -> NfElement {
        let row = &mut self.powers[j];
        while row.len() <= k {
            let next = field.pow(row.last().expect("seeded with f_j"), p as u64);
            row.push(next);
        }
        row[k].clone()
    }
}

pub fn filtrate(field: &NumberField, units: &[NfElement], p: u32) -> Result<FiltrationResult, UnitError> {
    if units.is_empty() {
        return Err(UnitError::Empty);
    }
    let mut scan = Scanner {
        field,
        p,
        fall_throughs: 0,
    };
    let d = field.degree();
    let max_multiplier = ((p - 1) * (p - 1)) as usize;
    let mut e: Vec<NfElement> = units.to_vec();
    let mut events = Vec::new();
    let mut h = Vec::new();

    let a: Vec<PValuation> = e.iter().map(|x| scan.a(x)).collect();
    let (seed, _) = first_min(&a);
    let mut f = vec![e.remove(seed)];
    events.push(FilterEvent::Seed { index: seed });
    let mut cache = PowerCache {
        powers: vec![vec![f[0].clone()]],
    };

    while !e.is_empty() {
        let a: Vec<PValuation> = e.iter().map(|x| scan.a(x)).collect();
        let (i0, min_a) = first_min(&a);
        let basis_len = f.len();
        for j in 0..basis_len {
            let mut matched = None;
            for k in 0..d {
                let ak = scan.a(&cache.get(field, p, j, k));
                if ak > min_a {
                    break;
                }
                if ak == min_a {
                    matched = Some(k);
                    break;
                }
            }
            if let Some(k) = matched {
                let base = cache.get(field, p, j, k);
                let base_inv = field
                    .inv(&base)
                    .ok_or_else(|| UnitError::InvalidElement(format!("basis element {j} is zero")))?;
                let mut reduced = e[i0].clone();
                let mut progressed = false;
                for i in 0..=max_multiplier {
                    if i > 0 {
                        reduced = field.mul(&reduced, &base_inv);
                    }
                    if min_a < scan.a(&reduced) {
                        e[i0] = reduced;
                        h.push((i, j, k));
                        events.push(FilterEvent::Reduce { candidate: i0, i, j, k });
                        progressed = true;
                        break;
                    }
                }
                if !progressed {
                    return Err(UnitError::NoProgress {
                        candidate: i0,
                        basis_index: j,
                        k,
                        valuation: min_a,
                    });
                }
                break;
            }
            if j + 1 == basis_len {
                let moved = e.remove(i0);
                cache.powers.push(vec![moved.clone()]);
                f.push(moved);
                events.push(FilterEvent::Append { candidate: i0 });
            }
        }
    }
    let af = f.iter().map(|x| scan.a(x)).collect();
    Ok(FiltrationResult {
        basis: f,
        af,
        transcript: h,
        events,
        fall_throughs: scan.fall_throughs,
    })
}

/// Re-apply recorded events to the original list without any valuation tests.
pub fn replay(field: &NumberField, units: &[NfElement], p: u32, events: &[FilterEvent]) -> Result<Vec<NfElement>, UnitError> {
    let bad = |msg: String| UnitError::InvalidTranscript(msg);
    let mut e = units.to_vec();
    let mut f: Vec<NfElement> = Vec::new();
    for (step, ev) in events.iter().enumerate() {
        match *ev {
            FilterEvent::Seed { index } => {
                if step != 0 || index >= e.len() {
                    return Err(bad(format!("seed event at step {step} is out of place")));
                }
                f.push(e.remove(index));
            }
            FilterEvent::Reduce { candidate, i, j, k } => {
                if candidate >= e.len() || j >= f.len() {
                    return Err(bad(format!("reduce event at step {step} refers past the lists")));
                }
                let exponent = (i as u64)
                    .checked_mul((p as u64).checked_pow(k as u32).ok_or_else(|| bad("exponent overflow".into()))?)
                    .ok_or_else(|| bad("exponent overflow".into()))?;
                let divisor = field.pow(&f[j], exponent);
                e[candidate] = field
                    .div(&e[candidate], &divisor)
                    .ok_or_else(|| bad(format!("division by zero at step {step}")))?;
            }
            FilterEvent::Append { candidate } => {
                if candidate >= e.len() {
                    return Err(bad(format!("append event at step {step} refers past the list")));
                }
                f.push(e.remove(candidate));
            }
        }
    }
    if !e.is_empty() {
        return Err(bad(format!("{} candidates left unconsumed", e.len())));
    }
    Ok(f)
}
