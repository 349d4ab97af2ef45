//! Iterated partial derivatives in the `a[i,j]` and the characteristic-2
//! identities they satisfy.
//!
//! Rational functions are differentiated with `T(f/g) = T(f g)/g^2` and
//! `T(f^2 g) = f^2 T(g)`. The expansion itself runs on a slice of the row
//! group that permutes rows sharing a differentiated column: in
//! characteristic 2 the operator is covariant for that group, so an
//! identity between relative invariants holds iff it holds on the slice.

use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use serde::Serialize;

use crate::artinian::{ReductionContext, XMonomial};
use crate::complex::mask_of;
use crate::error::{Error, Result};
use crate::field::bracket::BracketKey;
use crate::field::frame::full_mask;
use crate::field::{Evaluator, ExtField, Factored, FieldConfig, Frac, Frame, Polynomial, RationalFunction, VarIndex};
use crate::linalg;
use crate::psi::Psi;

/// Differentiation once in each of a set of distinct variables.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DiffOperator {
    vars: Vec<VarIndex>,
}

impl fmt::Display for DiffOperator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let v: Vec<String> = self.vars.iter().map(|v| format!("d{v}")).collect();
        write!(f, "{}", v.join(" "))
    }
}

impl DiffOperator {
    pub fn new(vars: Vec<VarIndex>) -> Result<Self> {
        for (i, v) in vars.iter().enumerate() {
            if vars[..i].contains(v) {
                return Err(Error::BadShape(format!("variable {v} repeated")));
            }
        }
        Ok(DiffOperator { vars })
    }

    /// `∂_σ` for odd `n`: row `i` differentiated in column `σ(⌊(i+1)/2⌋)`.
    pub fn sigma(n: usize, sigma: &[u32]) -> Result<Self> {
        if n.is_multiple_of(2) {
            return Err(Error::WrongParity(format!("∂_σ needs odd n, got {n}")));
        }
        if sigma.len() != n.div_ceil(2) {
            return Err(Error::WrongFaceSize { expected: n.div_ceil(2), got: sigma.len() });
        }
        Self::new((1..=n + 1).map(|i| VarIndex::new(i, sigma[i.div_ceil(2) - 1] as usize)).collect())
    }

    /// `∂_{p,σ}` for even `n`: `a[1,p]` and row `i ≥ 2` in column `σ(⌊i/2⌋)`.
    pub fn p_sigma(n: usize, p: u32, sigma: &[u32]) -> Result<Self> {
        if n % 2 == 1 {
            return Err(Error::WrongParity(format!("∂_(p,σ) needs even n, got {n}")));
        }
        if sigma.len() != n / 2 {
            return Err(Error::WrongFaceSize { expected: n / 2, got: sigma.len() });
        }
        if sigma.contains(&p) {
            let mut f = sigma.to_vec();
            f.push(p);
            return Err(Error::NotAFace(f));
        }
        let mut vars = vec![VarIndex::new(1, p as usize)];
        vars.extend((2..=n + 1).map(|i| VarIndex::new(i, sigma[i / 2 - 1] as usize)));
        Self::new(vars)
    }

    /// `∂^mod_σ`: row `i` differentiated in column `σ_i`.
    pub fn modified(sigma: &[u32]) -> Result<Self> {
        Self::new(sigma.iter().enumerate().map(|(i, &c)| VarIndex::new(i + 1, c as usize)).collect())
    }

    pub fn vars(&self) -> &[VarIndex] {
        &self.vars
    }

    pub fn order(&self) -> usize {
        self.vars.len()
    }

    /// Columns differentiated, ascending.
    pub fn columns(&self) -> Vec<u8> {
        let mut c: Vec<u8> = self.vars.iter().map(|v| v.col).collect();
        c.sort_unstable();
        c.dedup();
        c
    }

    /// Row masks grouped by differentiated column, then the undifferentiated
    /// rows (if any) as one more block.
    pub fn row_blocks(&self, rows: usize) -> Vec<u32> {
        let mut by_col: BTreeMap<u8, u32> = BTreeMap::new();
        for v in &self.vars {
            *by_col.entry(v.col).or_insert(0) |= 1 << (v.row - 1);
        }
        let mut blocks: Vec<u32> = by_col.into_values().collect();
        let used = blocks.iter().fold(0, |a, &b| a | b);
        let rest = full_mask(rows) & !used;
        if rest != 0 {
            blocks.push(rest);
        }
        blocks
    }

    fn groups(&self) -> Vec<u32> {
        let mut by_col: BTreeMap<u8, u32> = BTreeMap::new();
        for v in &self.vars {
            *by_col.entry(v.col).or_insert(0) |= 1 << (v.row - 1);
        }
        by_col.into_values().collect()
    }

    pub fn apply_poly(&self, f: &Polynomial) -> Polynomial {
        f.derivative(&self.vars)
    }

    /// `T(f)` for a rational function, expanded on `frame` (characteristic 2).
    pub fn apply(&self, f: &RationalFunction, frame: &Arc<Frame>) -> Result<RationalFunction> {
        let p = f.characteristic();
        if p != 2 {
            return Err(Error::CharNot2(p));
        }
        if let Some(v) = self.vars.iter().find(|v| frame.fixed_value(**v).is_some()) {
            return Err(Error::Precondition(format!("frame fixes the differentiated variable {v}")));
        }
        if let Some(g) = f.frame() {
            if g.id() != frame.id() {
                return Err(Error::Precondition("input lives on a different frame".into()));
            }
        }
        let mut terms = Vec::new();
        for t in f.terms() {
            let mut exps: BTreeMap<BracketKey, u32> = t.num.brackets.clone();
            for (k, &e) in &t.den.brackets {
                *exps.entry(k.clone()).or_insert(0) += e;
            }
            let mut squares = BTreeMap::new();
            let mut factors: Vec<Polynomial> = Vec::new();
            for (k, e) in exps {
                if e >= 2 {
                    squares.insert(k.clone(), e - e % 2);
                }
                if e % 2 == 1 {
                    factors.push(frame.bracket(&k));
                }
            }
            let dres = frame.specialize(&t.den.residual);
            for r in [frame.specialize(&t.num.residual), dres.clone()] {
                if !r.is_one() {
                    factors.push(r);
                }
            }
            let d = leibniz(2, &factors, &self.vars);
            if d.is_zero() {
                continue;
            }
            let den = Factored {
                brackets: t.den.brackets.iter().map(|(k, &e)| (k.clone(), 2 * e)).collect(),
                residual: dres.square(),
            };
            terms.push(Frac { num: Factored { brackets: squares, residual: d }, den });
        }
        let rows = frame.rows();
        let cov = f.cov().derive(&self.groups(), full_mask(rows));
        let out_frame = if frame.is_generic() { None } else { Some(frame.clone()) };
        Ok(RationalFunction::from_terms(2, terms, cov, out_frame))
    }

    /// A slice for this operator on which the given functions have nonzero
    /// denominators; the generic frame if none of the candidates works.
    pub fn slice_for(&self, rows: usize, fs: &[&RationalFunction]) -> Arc<Frame> {
        let blocks = self.row_blocks(rows);
        let forbidden = self.columns();
        let mut freq: BTreeMap<u8, usize> = BTreeMap::new();
        for f in fs {
            for t in f.terms() {
                for k in t.num.brackets.keys().chain(t.den.brackets.keys()) {
                    for &c in k {
                        if !forbidden.contains(&c) {
                            *freq.entry(c).or_insert(0) += 1;
                        }
                    }
                }
            }
        }
        let mut cols: Vec<u8> = freq.keys().copied().collect();
        cols.sort_by(|a, b| freq[b].cmp(&freq[a]).then(a.cmp(b)));
        let width = blocks.iter().map(|m| m.count_ones() as usize).max().unwrap_or(0);
        if cols.len() >= width {
            let mut candidates = vec![cols[..width].to_vec()];
            for drop in (0..width).rev() {
                for extra in width..cols.len() {
                    let mut c = cols[..width].to_vec();
                    c[drop] = cols[extra];
                    candidates.push(c);
                }
            }
            for mut cand in candidates {
                cand.sort_unstable();
                let spec: Vec<(u32, Vec<u8>)> =
                    blocks.iter().map(|&m| (m, cand[..m.count_ones() as usize].to_vec())).collect();
                let Ok(frame) = Frame::slice(2, rows, &spec) else { continue };
                if fs.iter().all(|f| denominators_nonzero(f, &frame)) {
                    return Arc::new(frame);
                }
            }
        }
        Frame::generic(2, rows)
    }
}

fn denominators_nonzero(f: &RationalFunction, frame: &Frame) -> bool {
    f.terms().iter().all(|t| {
        t.den.brackets.keys().all(|k| !frame.bracket(k).is_zero()) && !frame.specialize(&t.den.residual).is_zero()
    })
}

/// `∂_V (∏ F_j)` by the Leibniz rule over subsets of the distinct
/// variables `V`: each variable differentiates exactly one factor.
pub fn leibniz(p: u32, factors: &[Polynomial], vars: &[VarIndex]) -> Polynomial {
    let k = vars.len();
    let full = (1usize << k) - 1;
    // which variables each factor involves
    let present: Vec<usize> = factors
        .iter()
        .map(|f| (0..k).filter(|&i| f.contains_var(vars[i])).fold(0, |a, i| a | 1 << i))
        .collect();
    if present.iter().fold(0, |a, &b| a | b) != full {
        return Polynomial::zero(p);
    }
    let mut later = vec![0usize; factors.len() + 1];
    for j in (0..factors.len()).rev() {
        later[j] = later[j + 1] | present[j];
    }
    let mut cur: Vec<Option<Polynomial>> = vec![None; full + 1];
    cur[0] = Some(Polynomial::one(p));
    for (j, f) in factors.iter().enumerate() {
        let mut ders: Vec<Option<Polynomial>> = vec![None; full + 1];
        ders[0] = Some(f.clone());
        for s in 1..=full {
            if s & !present[j] != 0 {
                continue;
            }
            let low = s.trailing_zeros() as usize;
            if let Some(parent) = &ders[s & (s - 1)] {
                let d = parent.partial_derivative(vars[low]);
                if !d.is_zero() {
                    ders[s] = Some(d);
                }
            }
        }
        let last = j + 1 == factors.len();
        let mut next: Vec<Option<Polynomial>> = vec![None; full + 1];
        for (s, acc) in cur.iter().enumerate() {
            let Some(acc) = acc else { continue };
            for (t, d) in ders.iter().enumerate() {
                let Some(d) = d else { continue };
                if s & t != 0 {
                    continue;
                }
                let u = s | t;
                if (last && u != full) || (full & !u) & !later[j + 1] != 0 {
                    continue;
                }
                let prod = acc.mul(d);
                next[u] = Some(match next[u].take() {
                    Some(x) => x.add(&prod),
                    None => prod,
                });
            }
        }
        cur = next;
    }
    cur[full].take().unwrap_or_else(|| Polynomial::zero(p))
}

/// The same Leibniz rule at a random point, for products of brackets in
/// characteristic 2: `∂_S [K]` is the complementary minor when the
/// variables of `S` sit in distinct rows and in distinct columns of `K`.
pub fn leibniz_brackets_at(ev: &Evaluator, keys: &[BracketKey], vars: &[VarIndex]) -> u64 {
    let f = ev.field();
    let k = vars.len();
    let full = (1usize << k) - 1;
    let mut cur = vec![0u64; full + 1];
    cur[0] = 1;
    for key in keys {
        let rows = key.len();
        let mut ders = vec![0u64; full + 1];
        for (s, slot) in ders.iter_mut().enumerate() {
            let sv: Vec<&VarIndex> = (0..k).filter(|&i| s >> i & 1 == 1).map(|i| &vars[i]).collect();
            let mut rmask = 0u32;
            let mut cset: Vec<u8> = Vec::new();
            let mut ok = true;
            for v in &sv {
                if rmask >> (v.row - 1) & 1 == 1 || cset.contains(&v.col) || !key.contains(&v.col) {
                    ok = false;
                    break;
                }
                rmask |= 1 << (v.row - 1);
                cset.push(v.col);
            }
            if !ok {
                continue;
            }
            let rr: Vec<usize> = (1..=rows).filter(|r| rmask >> (r - 1) & 1 == 0).collect();
            let cc: Vec<u8> = key.iter().copied().filter(|c| !cset.contains(c)).collect();
            let m: Vec<Vec<u64>> =
                rr.iter().map(|&r| cc.iter().map(|&c| ev.var(VarIndex::new(r, c as usize))).collect()).collect();
            *slot = if m.is_empty() { 1 } else { linalg::det(f, &m) };
        }
        let mut next = vec![0u64; full + 1];
        for s in 0..=full {
            if cur[s] == 0 {
                continue;
            }
            let free = full & !s;
            let mut t = free;
            loop {
                if ders[t] != 0 {
                    next[s | t] = f.add(next[s | t], f.mul(cur[s], ders[t]));
                }
                if t == 0 {
                    break;
                }
                t = (t - 1) & free;
            }
        }
        cur = next;
    }
    cur[full]
}

/// The families of the minor-product identities on an `h × (h+1)` matrix.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum MinorFamily {
    N,
    P,
    Q,
}

impl std::str::FromStr for MinorFamily {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "N" | "n" => Ok(MinorFamily::N),
            "P" | "p" => Ok(MinorFamily::P),
            "Q" | "q" => Ok(MinorFamily::Q),
            _ => Err(Error::Parse(format!("unknown minor family {s}"))),
        }
    }
}

/// `T(∏ lhs minors) = ∏ rhs minors^2`, minors indexed by the deleted column.
#[derive(Clone, Debug)]
pub struct MinorIdentity {
    pub family: MinorFamily,
    pub h: usize,
    pub op: DiffOperator,
    pub lhs: Vec<usize>,
    pub rhs: Vec<usize>,
}

impl MinorIdentity {
    /// The identity of the given family and order, with rows renumbered
    /// `1..=h` inside the submatrix.
    pub fn new(family: MinorFamily, h: usize) -> Result<Self> {
        let (vars, lhs, rhs): (Vec<VarIndex>, Vec<usize>, Vec<usize>) = match family {
            MinorFamily::N | MinorFamily::P => {
                if h < 2 || h % 2 == 1 {
                    return Err(Error::BadParity(format!("{family:?} needs even h ≥ 2, got {h}")));
                }
                let shift = usize::from(family == MinorFamily::P);
                let vars = (1..=h).map(|i| VarIndex::new(i, shift + i.div_ceil(2))).collect();
                let rhs = if shift == 0 { (1..=h / 2).collect() } else { (2..=(h + 2) / 2).collect() };
                (vars, (1..=h + 1).collect(), rhs)
            }
            MinorFamily::Q => {
                if h < 3 || h.is_multiple_of(2) {
                    return Err(Error::BadParity(format!("Q needs odd h ≥ 3, got {h}")));
                }
                let mut vars = vec![VarIndex::new(1, 1)];
                vars.extend((2..=h).map(|i| VarIndex::new(i, (i + 2) / 2)));
                (vars, (2..=h + 1).collect(), (2..=h.div_ceil(2)).collect())
            }
        };
        Ok(MinorIdentity { family, h, op: DiffOperator::new(vars)?, lhs, rhs })
    }

    /// Sorted columns of the minor deleting column `i`.
    pub fn key(&self, i: usize) -> BracketKey {
        (1..=self.h as u8 + 1).filter(|&c| c as usize != i).collect()
    }

    fn minor(&self, i: usize) -> RationalFunction {
        let cols: Vec<usize> = self.key(i).iter().map(|&c| c as usize).collect();
        RationalFunction::bracket(2, &cols)
    }

    pub fn lhs_function(&self) -> RationalFunction {
        self.lhs.iter().fold(RationalFunction::one(2), |a, &i| a.mul(&self.minor(i)))
    }

    pub fn rhs_function(&self) -> RationalFunction {
        self.rhs.iter().fold(RationalFunction::one(2), |a, &i| a.mul(&self.minor(i)).mul(&self.minor(i)))
    }

    /// Degree in column `j` of each side, counting `∂/∂a[i,j]` as `-1`.
    fn column_degrees(&self, j: u8) -> (i64, i64) {
        let l = self.lhs.iter().filter(|&&i| i != j as usize).count() as i64
            - self.op.vars().iter().filter(|v| v.col == j).count() as i64;
        let r = 2 * self.rhs.iter().filter(|&&i| i != j as usize).count() as i64;
        (l, r)
    }

    /// Row slice plus one entry per remaining column set to 1 (the column
    /// torus), when both sides scale alike under that torus.
    pub fn exact_frame(&self) -> Result<Arc<Frame>> {
        let h = self.h;
        let blocks = self.op.row_blocks(h);
        let t_cols = self.op.columns();
        let free: Vec<u8> = (1..=h as u8 + 1).filter(|c| !t_cols.contains(c)).collect();
        let width = blocks.iter().map(|m| m.count_ones() as usize).max().unwrap();
        if free.len() < width {
            return Ok(Frame::generic(2, h));
        }
        let spec: Vec<(u32, Vec<u8>)> = blocks.iter().map(|&m| (m, free[..m.count_ones() as usize].to_vec())).collect();
        let mut frame = Frame::slice(2, h, &spec)?;
        for j in 1..=h as u8 + 1 {
            if free[..width].contains(&j) {
                continue;
            }
            let (l, r) = self.column_degrees(j);
            if l != r {
                continue;
            }
            let row = (1..=h).find(|&i| {
                let v = VarIndex::new(i, j as usize);
                frame.fixed_value(v).is_none() && !self.op.vars().contains(&v)
            });
            if let Some(i) = row {
                frame = frame.with_entry(i, j as usize, 1)?;
            }
        }
        Ok(Arc::new(frame))
    }
}

/// How an identity was decided.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Method {
    Exact,
    Probabilistic,
}

#[derive(Clone, Debug, Serialize)]
pub struct MinorCheck {
    pub family: MinorFamily,
    pub h: usize,
    pub holds: bool,
    pub method: Method,
    pub seeds: Vec<u64>,
    /// Both sides on failure.
    pub witness: Option<(String, String)>,
}

/// Exact check of a minor-product identity.
pub fn verify_minor_identity(family: MinorFamily, h: usize) -> Result<MinorCheck> {
    let id = MinorIdentity::new(family, h)?;
    let frame = id.exact_frame()?;
    let lhs = id.op.apply(&id.lhs_function(), &frame)?;
    let rhs = id.rhs_function();
    let holds = lhs.try_equals(&rhs)?;
    let witness = (!holds).then(|| (lhs.to_string(), rhs.to_string()));
    Ok(MinorCheck { family, h, holds, method: Method::Exact, seeds: Vec::new(), witness })
}

/// Randomised check at the points of the given seeds.
pub fn verify_minor_identity_random(family: MinorFamily, h: usize, seeds: &[u64]) -> Result<MinorCheck> {
    let id = MinorIdentity::new(family, h)?;
    let field = ExtField::new(FieldConfig::default())?;
    let lhs_keys: Vec<BracketKey> = id.lhs.iter().map(|&i| id.key(i)).collect();
    let mut holds = true;
    let mut witness = None;
    for &s in seeds {
        let ev = Evaluator::new(&field, s);
        let l = leibniz_brackets_at(&ev, &lhs_keys, id.op.vars());
        let r = id.rhs.iter().fold(1u64, |a, &i| {
            let b = ev.bracket(&id.key(i));
            field.mul(a, field.mul(b, b))
        });
        if l != r {
            holds = false;
            witness = Some((field.display(l), field.display(r)));
            break;
        }
    }
    Ok(MinorCheck { family, h, holds, method: Method::Probabilistic, seeds: seeds.to_vec(), witness })
}

/// Outcome of a square identity or probe: both sides and their comparison.
#[derive(Clone, Debug)]
pub struct SquareCheck {
    pub lhs: RationalFunction,
    pub rhs: RationalFunction,
    pub equal: bool,
}

impl SquareCheck {
    fn decide(lhs: RationalFunction, rhs: RationalFunction) -> Result<Self> {
        let equal = lhs.try_equals(&rhs)?;
        Ok(SquareCheck { lhs, rhs, equal })
    }
}

/// `(∂_σ ∘ Ψ ∘ π)(x_τ^2) = ((Ψ ∘ π)(x_σ x_τ))^2` for odd `n`.
pub fn verify_square_identity_odd(psi: &Psi<'_>, sigma: &[u32], tau: &[u32], r: usize) -> Result<SquareCheck> {
    let ctx = psi.context();
    let n = ctx.n();
    let op = DiffOperator::sigma(n, sigma)?;
    if tau.len() != n.div_ceil(2) {
        return Err(Error::WrongFaceSize { expected: n.div_ceil(2), got: tau.len() });
    }
    let m = ctx.m();
    let inner = if ctx.complex().is_face(tau) { psi.sum_formula(tau, &[], r)? } else { RationalFunction::zero(2) };
    let mut prod = XMonomial::from_face(m, sigma);
    prod = prod.mul(&XMonomial::from_face(m, tau));
    let rhs = psi.monomial(&prod)?.square();
    let frame = op.slice_for(ctx.rows(), &[&inner, &rhs]);
    SquareCheck::decide(op.apply(&inner, &frame)?, rhs)
}

/// `(∂_{p,σ} ∘ Ψ ∘ π)(x_τ^2 x_p) = ((Ψ ∘ π)(x_σ x_τ x_p))^2` for even `n`.
pub fn verify_square_identity_even(
    psi: &Psi<'_>,
    p: u32,
    sigma: &[u32],
    tau: &[u32],
    r: usize,
) -> Result<SquareCheck> {
    let ctx = psi.context();
    let n = ctx.n();
    let op = DiffOperator::p_sigma(n, p, sigma)?;
    let mut sp = sigma.to_vec();
    sp.push(p);
    if !ctx.complex().is_face(&sp) {
        return Err(Error::NotAFace(sp));
    }
    if tau.len() != n / 2 {
        return Err(Error::WrongFaceSize { expected: n / 2, got: tau.len() });
    }
    if tau.contains(&p) {
        return Err(Error::Precondition(format!("p = {p} lies in τ")));
    }
    let m = ctx.m();
    let mut tp = tau.to_vec();
    tp.push(p);
    let inner = if ctx.complex().is_face(&tp) { psi.sum_formula(tau, &[p], r)? } else { RationalFunction::zero(2) };
    let prod = XMonomial::from_face(m, sigma).mul(&XMonomial::from_face(m, tau)).mul(&XMonomial::from_face(m, &[p]));
    let rhs = psi.monomial(&prod)?.square();
    let frame = op.slice_for(ctx.rows(), &[&inner, &rhs]);
    SquareCheck::decide(op.apply(&inner, &frame)?, rhs)
}

/// Every `(σ, τ)` (odd `n`) or `(p, σ, τ)` (even `n`) instance on a complex.
pub fn square_identity_instances(ctx: &ReductionContext) -> Vec<(Option<u32>, Vec<u32>, Vec<u32>)> {
    let cx = ctx.complex();
    let n = cx.n();
    let mut out = Vec::new();
    if n % 2 == 1 {
        let faces = cx.faces_of_size(n.div_ceil(2));
        for s in &faces {
            for t in &faces {
                out.push((None, s.clone(), t.clone()));
            }
        }
    } else {
        let faces = cx.faces_of_size(n / 2);
        for p in 1..=cx.m() {
            for s in &faces {
                if s.contains(&p) || !cx.is_face_mask(mask_of(s) | 1 << (p - 1)) {
                    continue;
                }
                for t in faces.iter().filter(|t| !t.contains(&p)) {
                    out.push((Some(p), s.clone(), t.clone()));
                }
            }
        }
    }
    out
}

/// Column-set identities on the simplex `τ`: for odd `n`,
/// `T(∏_S M_i / ∏_{τ∖S} M_i) = ∏_{S∩c} M_i^2 / ∏_{g∖S} M_i^2` with
/// `M_i = M(τ ∖ {i})`; `S = τ` is the product form. For even `n` pass `b`;
/// then `i` runs over `c ∪ g` only.
pub fn verify_simplex_quotient(c: &[u32], g: &[u32], b: Option<u32>, s: &[u32]) -> Result<SquareCheck> {
    let mut tau: Vec<u32> = c.iter().chain(g).copied().chain(b).collect();
    tau.sort_unstable();
    let n = tau.len() - 2;
    let op = match b {
        None => DiffOperator::sigma(n, c)?,
        Some(b) => DiffOperator::p_sigma(n, b, c)?,
    };
    let mi = |i: u32| -> RationalFunction {
        let cols: Vec<usize> = tau.iter().filter(|&&x| x != i).map(|&x| x as usize).collect();
        RationalFunction::bracket(2, &cols)
    };
    let w: Vec<u32> = c.iter().chain(g).copied().collect();
    let mut lhs = RationalFunction::one(2);
    let mut rhs = RationalFunction::one(2);
    for &i in &w {
        if s.contains(&i) {
            lhs = lhs.mul(&mi(i));
            if c.contains(&i) {
                rhs = rhs.mul(&mi(i).square());
            }
        } else {
            lhs = lhs.div(&mi(i))?;
            if g.contains(&i) {
                rhs = rhs.div(&mi(i).square())?;
            }
        }
    }
    let frame = op.slice_for(n + 1, &[&lhs, &rhs]);
    SquareCheck::decide(op.apply(&lhs, &frame)?, rhs)
}

/// Report of one evaluation of the modified-operator conjecture.
#[derive(Clone, Debug)]
pub struct ConjectureProbe {
    pub sigma: Vec<u32>,
    pub tau: Vec<u32>,
    /// Whether `x_σ x_τ` is a square.
    pub square: bool,
    pub lhs: RationalFunction,
    pub rhs: RationalFunction,
    pub equal: bool,
}

/// Default caps for the probe.
pub const PROBE_MAX_M: u32 = 8;
pub const PROBE_MAX_N: usize = 3;

/// Compares `(∂^mod_σ ∘ Ψ ∘ π)(x_τ)` with its conjectured value. Never
/// asserts; `allow_large` lifts the size caps.
pub fn probe_conjecture(psi: &Psi<'_>, sigma: &[u32], tau: &[u32], allow_large: bool) -> Result<ConjectureProbe> {
    let ctx = psi.context();
    if ctx.characteristic() != 2 {
        return Err(Error::CharNot2(ctx.characteristic()));
    }
    let (m, rows) = (ctx.m(), ctx.rows());
    if !allow_large && (m > PROBE_MAX_M || ctx.n() > PROBE_MAX_N) {
        return Err(Error::Precondition(format!("probe capped at m ≤ {PROBE_MAX_M}, n ≤ {PROBE_MAX_N}")));
    }
    for s in [sigma, tau] {
        if s.len() != rows {
            return Err(Error::WrongLength { expected: rows, got: s.len() });
        }
        if let Some(&v) = s.iter().find(|&&v| v == 0 || v > m) {
            return Err(Error::BadVertex { vertex: v, m });
        }
    }
    let op = DiffOperator::modified(sigma)?;
    let xt = XMonomial::from_pairs(m, &tau.iter().map(|&v| (v, 1)).collect::<Vec<_>>());
    let xs = XMonomial::from_pairs(m, &sigma.iter().map(|&v| (v, 1)).collect::<Vec<_>>());
    let prod = xs.mul(&xt);
    let square = (1..=m).all(|v| prod.exponent(v).is_multiple_of(2));
    let inner = psi.monomial(&xt)?;
    let rhs = if square {
        let half: Vec<(u32, u32)> = (1..=m).map(|v| (v, prod.exponent(v) / 2)).collect();
        psi.monomial(&XMonomial::from_pairs(m, &half))?.square()
    } else {
        RationalFunction::zero(2)
    };
    let frame = op.slice_for(rows, &[&inner, &rhs]);
    let lhs = op.apply(&inner, &frame)?;
    let equal = lhs.try_equals(&rhs)?;
    Ok(ConjectureProbe { sigma: sigma.to_vec(), tau: tau.to_vec(), square, lhs, rhs, equal })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::complex::SimplicialComplex;
    use crate::field::bracket::{bracket, GenericMatrixSpec};

    fn br(c: &[usize]) -> RationalFunction {
        RationalFunction::bracket(2, c)
    }

    fn generic(rows: usize) -> Arc<Frame> {
        Frame::generic(2, rows)
    }

    #[test]
    fn operator_shapes() {
        let op = DiffOperator::sigma(3, &[5, 7]).unwrap();
        let want: Vec<VarIndex> = [(1, 5), (2, 5), (3, 7), (4, 7)].iter().map(|&(i, j)| VarIndex::new(i, j)).collect();
        assert_eq!(op.vars(), &want[..]);
        assert_eq!(op.row_blocks(4), vec![0b0011, 0b1100]);
        let op = DiffOperator::p_sigma(2, 1, &[2]).unwrap();
        assert_eq!(op.vars(), &[VarIndex::new(1, 1), VarIndex::new(2, 2), VarIndex::new(3, 2)]);
        assert_eq!(DiffOperator::p_sigma(4, 1, &[2, 3]).unwrap().order(), 5);
        assert!(matches!(DiffOperator::sigma(2, &[1]), Err(Error::WrongParity(_))));
        assert!(matches!(DiffOperator::p_sigma(2, 1, &[1]), Err(Error::NotAFace(_))));
        assert_eq!(DiffOperator::sigma(1, &[4]).unwrap().vars(), &[VarIndex::new(1, 4), VarIndex::new(2, 4)]);
    }

    #[test]
    fn leibniz_matches_expansion() {
        let spec = GenericMatrixSpec::new(3, 6).unwrap();
        let f: Vec<Polynomial> =
            [[1, 2, 3], [2, 4, 5], [1, 5, 6]].iter().map(|c| bracket(&spec, c, 2).unwrap()).collect();
        let vars = [VarIndex::new(1, 1), VarIndex::new(2, 2), VarIndex::new(3, 5)];
        let direct = Polynomial::product(2, f.iter()).derivative(&vars);
        assert_eq!(leibniz(2, &f, &vars), direct);
        let mut rev = vars;
        rev.reverse();
        assert_eq!(Polynomial::product(2, f.iter()).derivative(&rev), direct);
    }

    #[test]
    fn example_polygon_derivatives() {
        let v = br(&[1, 3]).div(&br(&[1, 2]).mul(&br(&[2, 3]))).unwrap();
        let d1 = DiffOperator::sigma(1, &[1]).unwrap().apply(&v, &generic(2)).unwrap();
        assert!(d1.equals(&br(&[1, 2]).square().inv().unwrap()));
        let d2 = DiffOperator::sigma(1, &[2]).unwrap().apply(&v, &generic(2)).unwrap();
        assert!(d2.equals(&v.square()));
        let d4 = DiffOperator::sigma(1, &[4]).unwrap().apply(&v, &generic(2)).unwrap();
        assert!(d4.is_trivially_zero());
    }

    #[test]
    fn square_rule() {
        let f = br(&[1, 4]).add(&br(&[2, 3]));
        let g = br(&[1, 2]).mul(&br(&[3, 4]));
        let op = DiffOperator::sigma(1, &[1]).unwrap();
        let lhs = op.apply(&f.square().mul(&g), &generic(2)).unwrap();
        let rhs = f.square().mul(&op.apply(&g, &generic(2)).unwrap());
        assert!(lhs.equals(&rhs));
        let frame = op.slice_for(2, &[&g]);
        assert!(!frame.is_generic());
        let on_slice = op.apply(&g, &frame).unwrap();
        assert!(on_slice.equals(&op.apply(&g, &generic(2)).unwrap()));
    }

    #[test]
    fn small_minor_identities() {
        for (f, h) in [(MinorFamily::N, 2), (MinorFamily::P, 2), (MinorFamily::Q, 3), (MinorFamily::N, 4)] {
            let c = verify_minor_identity(f, h).unwrap();
            assert!(c.holds, "{f:?} h={h}: {:?}", c.witness);
            assert!(verify_minor_identity_random(f, h, &[1, 2, 3]).unwrap().holds);
        }
        assert!(matches!(MinorIdentity::new(MinorFamily::N, 3), Err(Error::BadParity(_))));
    }

    #[test]
    fn broken_identity_is_caught() {
        let mut id = MinorIdentity::new(MinorFamily::N, 2).unwrap();
        id.rhs = vec![2];
        let frame = id.exact_frame().unwrap();
        let lhs = id.op.apply(&id.lhs_function(), &frame).unwrap();
        assert!(!lhs.equals(&id.rhs_function()));
    }

    #[test]
    fn polygon_square_identities() {
        let ctx = ReductionContext::char2(SimplicialComplex::polygon(5).unwrap());
        let psi = Psi::new(&ctx).unwrap();
        for (_, s, t) in square_identity_instances(&ctx) {
            let c = verify_square_identity_odd(&psi, &s, &t, 6).unwrap();
            assert!(c.equal, "σ={s:?} τ={t:?}: {} vs {}", c.lhs, c.rhs);
        }
    }

    #[test]
    fn tetrahedron_examples() {
        let ctx = ReductionContext::char2(SimplicialComplex::boundary_simplex(2).unwrap());
        let psi = Psi::new(&ctx).unwrap();
        let c = verify_square_identity_even(&psi, 1, &[3], &[2], 5).unwrap();
        assert!(c.equal);
        assert!(c.lhs.equals(&br(&[1, 2, 3]).square().inv().unwrap()));
        let c = verify_square_identity_even(&psi, 1, &[2], &[2], 5).unwrap();
        let want = br(&[1, 3, 4]).div(&br(&[1, 2, 3]).mul(&br(&[1, 2, 4]))).unwrap().square();
        assert!(c.equal && c.lhs.equals(&want));
    }

    #[test]
    fn simplex_quotients() {
        // n = 1: τ = {1, 2, 3}, c = {1}
        for s in [vec![1, 2, 3], vec![1], vec![2, 3], vec![]] {
            let c = verify_simplex_quotient(&[1], &[2, 3], None, &s).unwrap();
            assert!(c.equal, "S = {s:?}");
        }
        let c = verify_simplex_quotient(&[2], &[3, 4], Some(1), &[2, 4]).unwrap();
        assert!(c.equal);
    }

    #[test]
    fn conjecture_probe_runs() {
        let ctx = ReductionContext::char2(SimplicialComplex::polygon(4).unwrap());
        let psi = Psi::new(&ctx).unwrap();
        let sq = probe_conjecture(&psi, &[1, 1], &[2, 2], false).unwrap();
        assert!(sq.square);
        let a = probe_conjecture(&psi, &[1, 2], &[3, 2], false).unwrap();
        let b = probe_conjecture(&psi, &[3, 2], &[1, 2], false).unwrap();
        assert!(!a.square);
        let _ = (a.equal, b.equal);
    }
}
