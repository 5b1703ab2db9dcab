//! Factor systems `v_j = Σ γ_{ijt} u^t l^{(1)}_i` and the coboundary moves
//! that normalise them.
//!
//! A move `(j, i, t, κ)` with `t ≥ ã_i` changes the section by
//! `w_j = κu^t l^{(1)}_i ∈ F(L₁)`, so `v_j += κu^t l_i` and
//! `v_{j+1} −= σ(κ)u^{b̃_{j+1} + p(t − ã_i)} l_{i+1}`.

use std::collections::BTreeMap;

use super::context::ExtContext;
use super::ExtError;
use crate::base_arith::{solve_id_minus_a, Fq, FqMatrix, GaloisField, SemilinearOp, SeriesRing};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FactorSystem {
    ctx: ExtContext,
    ring: SeriesRing,
    /// Keyed by `(i, j, t)`; zero coefficients are never stored and `t < PREC`.
    terms: BTreeMap<(usize, usize, usize), Fq>,
}

/// `w_j = κ·u^t·l^{(1)}_i`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Move {
    pub j: usize,
    pub i: usize,
    pub t: usize,
    pub kappa: Fq,
}

/// A normalised system with the moves that produced it from the input.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Normalized {
    pub system: FactorSystem,
    pub moves: Vec<Move>,
}

impl FactorSystem {
    pub fn zero(ctx: &ExtContext, ring: &SeriesRing) -> Self {
        assert_eq!(ctx.p(), ring.p(), "context and ring disagree on p");
        FactorSystem {
            ctx: ctx.clone(),
            ring: ring.clone(),
            terms: BTreeMap::new(),
        }
    }

    pub fn from_terms(
        ctx: &ExtContext,
        ring: &SeriesRing,
        terms: impl IntoIterator<Item = (usize, usize, usize, Fq)>,
    ) -> Result<Self, ExtError> {
        let mut fs = FactorSystem::zero(ctx, ring);
        for (i, j, t, g) in terms {
            if i >= ctx.s() || j >= ctx.s() {
                return Err(ExtError::InvalidSystem(format!("index ({i}, {j}) outside Z/{}", ctx.s())));
            }
            fs.add_term(i, j, t, g);
        }
        Ok(fs)
    }

    pub fn context(&self) -> &ExtContext {
        &self.ctx
    }

    pub fn ring(&self) -> &SeriesRing {
        &self.ring
    }

    fn field(&self) -> &GaloisField {
        self.ring.field()
    }

    /// Adds `γu^t l_i` to `v_j`; terms at `t ≥ PREC` vanish.
    pub fn add_term(&mut self, i: usize, j: usize, t: usize, gamma: Fq) {
        if t >= self.ring.prec() || gamma.is_zero() {
            return;
        }
        let f = self.ring.field().clone();
        let entry = self.terms.entry((i, j, t)).or_insert(Fq::ZERO);
        *entry = f.add(*entry, gamma);
        if entry.is_zero() {
            self.terms.remove(&(i, j, t));
        }
    }

    pub fn get(&self, i: usize, j: usize, t: usize) -> Fq {
        self.terms.get(&(i, j, t)).copied().unwrap_or(Fq::ZERO)
    }

    /// Nonzero terms `(i, j, t, γ)` in lexicographic order.
    pub fn terms(&self) -> impl Iterator<Item = (usize, usize, usize, Fq)> + '_ {
        self.terms.iter().map(|(&(i, j, t), &g)| (i, j, t, g))
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn add(&self, other: &FactorSystem) -> FactorSystem {
        let mut out = self.clone();
        for (i, j, t, g) in other.terms() {
            out.add_term(i, j, t, g);
        }
        out
    }

    pub fn neg(&self) -> FactorSystem {
        let f = self.field();
        let mut out = FactorSystem::zero(&self.ctx, &self.ring);
        for (i, j, t, g) in self.terms() {
            out.add_term(i, j, t, f.neg(g));
        }
        out
    }

    /// The terms satisfying `keep`.
    pub fn filter(&self, keep: impl Fn(usize, usize, usize) -> bool) -> FactorSystem {
        let mut out = FactorSystem::zero(&self.ctx, &self.ring);
        out.terms = self
            .terms
            .iter()
            .filter(|(&(i, j, t), _)| keep(i, j, t))
            .map(|(&k, &g)| (k, g))
            .collect();
        out
    }

    /// `γ_{ijt} = 0` whenever `t = b̃_j`.
    pub fn satisfies_c1(&self) -> bool {
        self.terms().all(|(_, j, t, _)| t != self.ctx.b(j as i64))
    }

    /// `γ_{ijt} = 0` whenever `t > ã_i`.
    pub fn satisfies_c2(&self) -> bool {
        self.terms().all(|(i, _, t, _)| t <= self.ctx.a(i as i64))
    }

    /// `γ_{ijt} = 0` whenever `t ≥ ã_i`.
    pub fn satisfies_c3(&self) -> bool {
        self.terms().all(|(i, _, t, _)| t < self.ctx.a(i as i64))
    }

    /// Every `v_j` lies in `F(L₁)`.
    pub fn is_crystalline(&self) -> bool {
        self.terms().all(|(i, _, t, _)| t >= self.ctx.a(i as i64))
    }

    pub fn apply_move(&mut self, mv: Move) {
        let ctx = self.ctx.clone();
        let a = ctx.a(mv.i as i64);
        assert!(mv.t >= a, "w_j = κu^t l_i must lie in F(L₁)");
        self.add_term(mv.i, mv.j, mv.t, mv.kappa);
        let next_t = ctx.b(mv.j as i64 + 1) + ctx.p() as usize * (mv.t - a);
        let image = self.field().neg(self.field().frob(mv.kappa, 1));
        self.add_term(ctx.idx(mv.i as i64 + 1), ctx.idx(mv.j as i64 + 1), next_t, image);
    }

    /// The coboundary `{w_j − u^{b̃_j}φ(w_{j−1})}` of a list of moves.
    pub fn coboundary(ctx: &ExtContext, ring: &SeriesRing, moves: &[Move]) -> FactorSystem {
        let mut out = FactorSystem::zero(ctx, ring);
        for &mv in moves {
            out.apply_move(mv);
        }
        out
    }

    fn first_term(&self, pred: impl Fn(usize, usize, usize) -> bool) -> Option<(usize, usize, usize, Fq)> {
        self.terms().find(|&(i, j, t, _)| pred(i, j, t))
    }
}

/// Solve `x − σ^s(x) = c` in `F_q`.
fn artin_schreier(field: &GaloisField, s: usize, c: Fq) -> Result<Fq, ExtError> {
    let op = SemilinearOp::new(FqMatrix::identity(1), s as i64);
    Ok(solve_id_minus_a(field, &op, &[c])?[0])
}

/// Kill every coefficient with `t = b̃_j`.
///
/// A violating term at `(i₀, j₀)` is moved to `(i₀−1, j₀−1, ã_{i₀−1})` by
/// `w_{j₀−1} = σ⁻¹(γ)u^{ã_{i₀−1}}l_{i₀−1}`. When `ã_{i₀+m} = b̃_{j₀+m}` for
/// every `m` this would cycle, and instead `w_{j₀+n} = σ^n(β)u^{b̃}l_{i₀+n}`
/// with `β − σ^s(β) = −γ` removes it outright.
pub fn normalize_c1(fs: &FactorSystem) -> Result<Normalized, ExtError> {
    let ctx = fs.ctx.clone();
    let field = fs.field().clone();
    let s = ctx.s();
    let violating = |_: usize, j: usize, t: usize| t == ctx.b(j as i64);
    let cap = s * fs.terms().filter(|&(i, j, t, _)| violating(i, j, t)).count();
    let mut system = fs.clone();
    let mut moves = Vec::new();
    let mut steps = 0;
    while let Some((i0, j0, _, gamma)) = system.first_term(violating) {
        if steps >= cap {
            return Err(ExtError::IterationCap(format!("(C1) normalisation exceeded {cap} steps")));
        }
        steps += 1;
        let periodic = (0..s).all(|m| ctx.a((i0 + m) as i64) == ctx.b((j0 + m) as i64));
        if periodic {
            let beta = artin_schreier(&field, s, field.neg(gamma))?;
            for n in 0..s {
                let mv = Move {
                    j: ctx.idx((j0 + n) as i64),
                    i: ctx.idx((i0 + n) as i64),
                    t: ctx.b((j0 + n) as i64),
                    kappa: field.frob(beta, n as i64),
                };
                system.apply_move(mv);
                moves.push(mv);
            }
        } else {
            let (i, j) = (ctx.idx(i0 as i64 - 1), ctx.idx(j0 as i64 - 1));
            let mv = Move {
                j,
                i,
                t: ctx.a(i as i64),
                kappa: field.frob(gamma, -1),
            };
            system.apply_move(mv);
            moves.push(mv);
        }
    }
    Ok(Normalized { system, moves })
}

/// Forward propagation of a single term: `(j, i, t, −γ)` moves it to
/// `(i+1, j+1, b̃_{j+1} + p(t − ã_i))`, or solves `κ − σ^s(κ) = −γ` in the
/// context where that exponent stalls at `p`.
fn push_forward(system: &mut FactorSystem, moves: &mut Vec<Move>, i0: usize, j0: usize, t0: usize, gamma: Fq) -> Result<(), ExtError> {
    let ctx = system.ctx.clone();
    let field = system.field().clone();
    let p = ctx.p() as usize;
    if ctx.is_exceptional() && t0 == p {
        let kappa = artin_schreier(&field, ctx.s(), field.neg(gamma))?;
        for n in 0..ctx.s() {
            let mv = Move {
                j: ctx.idx((j0 + n) as i64),
                i: ctx.idx((i0 + n) as i64),
                t: p,
                kappa: field.frob(kappa, n as i64),
            };
            system.apply_move(mv);
            moves.push(mv);
        }
    } else {
        let mv = Move {
            j: j0,
            i: i0,
            t: t0,
            kappa: field.neg(gamma),
        };
        system.apply_move(mv);
        moves.push(mv);
    }
    Ok(())
}

fn propagation_cap(system: &FactorSystem) -> usize {
    (system.len() + 1) * system.ctx.s() * (system.ring.prec() + 1)
}

/// Kill every coefficient with `t > ã_i` by forward propagation past `u^PREC`.
pub fn reduce_c2(fs: &FactorSystem) -> Result<Normalized, ExtError> {
    if !fs.satisfies_c1() {
        return Err(ExtError::InvalidSystem("reduce_c2 expects a system satisfying (C1)".into()));
    }
    let ctx = fs.ctx.clone();
    let mut system = fs.clone();
    let mut moves = Vec::new();
    let cap = propagation_cap(&system);
    let above = |i: usize, _: usize, t: usize| t > ctx.a(i as i64);
    let mut steps = 0;
    while let Some((i0, j0, t0, gamma)) = system.first_term(above) {
        if steps >= cap {
            return Err(ExtError::IterationCap(format!("(C2) reduction exceeded {cap} steps")));
        }
        steps += 1;
        push_forward(&mut system, &mut moves, i0, j0, t0, gamma)?;
    }
    Ok(Normalized { system, moves })
}

/// (C1) followed by (C2), with the combined transcript.
pub fn normalize(fs: &FactorSystem) -> Result<Normalized, ExtError> {
    let first = normalize_c1(fs)?;
    let second = reduce_c2(&first.system)?;
    let mut moves = first.moves;
    moves.extend(second.moves);
    Ok(Normalized {
        system: second.system,
        moves,
    })
}

/// Trivialise the terms at `t = ã_i` on pairs that are not cr-admissible:
/// push them forward through the steps with `ã = b̃` until the exponent
/// exceeds `ã`, then let (C2) reduction finish them off.
pub fn drop_inadmissible_crystalline(fs: &FactorSystem) -> Result<Normalized, ExtError> {
    let ctx = fs.ctx.clone();
    let mut system = fs.clone();
    let mut moves = Vec::new();
    let cap = propagation_cap(&system);
    let trivial = |i: usize, j: usize, t: usize| {
        let a = ctx.a(i as i64);
        t > a || (t == a && ctx.cr_admissible(i, j).is_none())
    };
    let mut steps = 0;
    while let Some((i0, j0, t0, gamma)) = system.first_term(trivial) {
        if steps >= cap {
            return Err(ExtError::IterationCap(format!("trivialisation exceeded {cap} steps")));
        }
        steps += 1;
        push_forward(&mut system, &mut moves, i0, j0, t0, gamma)?;
    }
    Ok(Normalized { system, moves })
}
