//! The socle functional `Ψ: A_{n+1} → k`, normalised by
//! `u = Ψ_e(u)·[e]·π(x_e)` for a reference facet `e`.
//!
//! Two independent routes: reduction to square-free monomials followed by
//! signs propagated along ridges, and the characteristic-2 sum of H-terms
//! over the facets.

use std::sync::Arc;

use rustc_hash::FxHashMap;

use crate::artinian::{ElementRep, ReductionContext, XMonomial};
use crate::complex::{mask_of, Face};
use crate::error::{Error, Result};
use crate::field::{Frame, RationalFunction};

/// `(-1)^{#{x in ridge : x > d}}`: the sign moving `d` from the end of
/// `[ridge, d]` into sorted position.
fn insertion_sign(ridge: &[u32], d: u32) -> i8 {
    if ridge.iter().filter(|&&x| x > d).count() % 2 == 0 {
        1
    } else {
        -1
    }
}

/// Sign of the permutation sorting `seq`.
pub fn sort_sign(seq: &[u32]) -> i8 {
    let mut inv = 0;
    for i in 0..seq.len() {
        for j in i + 1..seq.len() {
            if seq[i] > seq[j] {
                inv += 1;
            }
        }
    }
    if inv % 2 == 0 {
        1
    } else {
        -1
    }
}

/// `M(S)`: bracket of a vertex/column set in increasing order.
pub fn m_set(p: u32, set: &[u32]) -> RationalFunction {
    let mut cols: Vec<usize> = set.iter().map(|&v| v as usize).collect();
    cols.sort_unstable();
    RationalFunction::bracket(p, &cols)
}

/// `Ψ_e` on a reduction context.
pub struct Psi<'a> {
    ctx: &'a ReductionContext,
    reference: Vec<u32>,
    /// `κ(σ) = [σ]·Ψ_e(π(x_σ))` with `[σ]` the sorted bracket.
    kappa: FxHashMap<u64, i8>,
}

impl<'a> Psi<'a> {
    /// Reference facet: the lexicographically smallest one.
    pub fn new(ctx: &'a ReductionContext) -> Result<Self> {
        let e = ctx.complex().facets()[0].clone();
        Self::with_reference(ctx, &e)
    }

    /// Reference given as an ordered facet.
    pub fn with_reference(ctx: &'a ReductionContext, e: &[u32]) -> Result<Self> {
        let c = ctx.complex();
        if !c.is_facet(e) {
            return Err(Error::NotAFace(e.to_vec()));
        }
        let mut sorted = e.to_vec();
        sorted.sort_unstable();
        let mut kappa = FxHashMap::default();
        kappa.insert(mask_of(&sorted), sort_sign(e));
        let mut queue = std::collections::VecDeque::from([sorted]);
        while let Some(s) = queue.pop_front() {
            let ks = kappa[&mask_of(&s)];
            for d1 in &s {
                let ridge: Vec<u32> = s.iter().copied().filter(|x| x != d1).collect();
                let rm = mask_of(&ridge);
                for (t, &fm) in c.facet_masks().iter().enumerate() {
                    if fm & rm != rm || fm == mask_of(&s) || kappa.contains_key(&fm) {
                        continue;
                    }
                    let d2 = (fm & !rm).trailing_zeros() + 1;
                    let k = -insertion_sign(&ridge, *d1) * insertion_sign(&ridge, d2) * ks;
                    kappa.insert(fm, k);
                    queue.push_back(c.facets()[t].clone());
                }
            }
        }
        if kappa.len() != c.facets().len() {
            return Err(Error::NoPath(e.to_vec(), c.facets()[0].clone()));
        }
        Ok(Psi { ctx, reference: e.to_vec(), kappa })
    }

    pub fn context(&self) -> &ReductionContext {
        self.ctx
    }

    pub fn reference(&self) -> &[u32] {
        &self.reference
    }

    fn p(&self) -> u32 {
        self.ctx.characteristic()
    }

    /// Sign `κ(σ)` relative to the reference.
    pub fn sign(&self, facet: &[u32]) -> Result<i8> {
        self.kappa.get(&mask_of(facet)).copied().ok_or_else(|| Error::NotAFace(facet.to_vec()))
    }

    /// Sign propagated along an explicit facet path starting at the reference.
    pub fn sign_along(&self, path: &[Face]) -> Result<i8> {
        let mut k = self.sign(&path[0])?;
        for w in path.windows(2) {
            let (a, b) = (mask_of(&w[0]), mask_of(&w[1]));
            let rm = a & b;
            if (a & !rm).count_ones() != 1 || (b & !rm).count_ones() != 1 {
                return Err(Error::BadShape("consecutive facets do not share a ridge".into()));
            }
            let ridge: Vec<u32> = w[0].iter().copied().filter(|&x| rm >> (x - 1) & 1 == 1).collect();
            let d1 = (a & !rm).trailing_zeros() + 1;
            let d2 = (b & !rm).trailing_zeros() + 1;
            k *= -insertion_sign(&ridge, d1) * insertion_sign(&ridge, d2);
        }
        Ok(k)
    }

    /// Whether the signs agree across every ridge (orientability).
    pub fn signs_consistent(&self) -> bool {
        let c = self.ctx.complex();
        for f in c.facets() {
            for g in c.facets() {
                if (mask_of(f) & mask_of(g)).count_ones() as usize == c.rank() - 1
                    && self.sign_along(&[f.clone(), g.clone()]).ok() != Some(self.kappa[&mask_of(g)]) {
                        return false;
                    }
            }
        }
        true
    }

    /// `Ψ_e(π(x_σ))` for a facet `σ`.
    pub fn facet(&self, sigma: &[u32]) -> Result<RationalFunction> {
        let k = self.sign(sigma)?;
        let v = m_set(self.p(), sigma).inv()?;
        Ok(if k < 0 { v.neg() } else { v })
    }

    /// `Ψ_e(u)` for `u ∈ A_{n+1}`.
    pub fn element(&self, u: &ElementRep) -> Result<RationalFunction> {
        if u.degree() != self.ctx.rows() {
            return Err(Error::WrongDegree { expected: self.ctx.rows(), got: u.degree() });
        }
        let mut acc = RationalFunction::zero(self.p());
        for (f, c) in u.terms() {
            acc = acc.add(&c.mul(&self.facet(f)?));
        }
        Ok(acc)
    }

    /// `Ψ_e(π(g))` through reduction to square-free monomials.
    pub fn monomial(&self, g: &XMonomial) -> Result<RationalFunction> {
        if g.degree() != self.ctx.rows() {
            return Err(Error::WrongDegree { expected: self.ctx.rows(), got: g.degree() });
        }
        self.element(&self.ctx.reduce_to_squarefree(g)?)
    }

    /// `Ψ_e(π(x_c^2 ∏ x_b))` for the codimension-1 face `b ∪ {c}`, from the
    /// two facets `b ∪ {c, d_1}`, `b ∪ {c, d_2}` through it.
    pub fn codim1_square(&self, b: &[u32], c: u32) -> Result<RationalFunction> {
        let cx = self.ctx.complex();
        let mut face = b.to_vec();
        face.push(c);
        let fm = mask_of(&face);
        if face.len() + 1 != cx.rank() || fm.count_ones() as usize != face.len() || !cx.is_face_mask(fm) {
            return Err(Error::NotCodim1(face));
        }
        let ds: Vec<u32> = cx
            .facet_masks()
            .iter()
            .filter(|&&f| f & fm == fm)
            .map(|&f| (f & !fm).trailing_zeros() + 1)
            .collect();
        if ds.len() != 2 {
            return Err(Error::NotCodim1(face));
        }
        let (d1, d2) = (ds[0].min(ds[1]), ds[0].max(ds[1]));
        let p = self.p();
        let cols = |tail: &[u32]| -> Vec<usize> { b.iter().chain(tail).map(|&v| v as usize).collect() };
        let mut tau1 = face.clone();
        tau1.push(d1);
        // [τ1]·Ψ(π(x_τ1)), with [τ1] the ordered bracket (b, c, d1)
        let t1 = RationalFunction::bracket(p, &cols(&[c, d1])).mul(&self.facet(&tau1)?);
        let num = RationalFunction::bracket(p, &cols(&[d1, d2])).mul(&t1).neg();
        let den = RationalFunction::bracket(p, &cols(&[c, d1])).mul(&RationalFunction::bracket(p, &cols(&[c, d2])));
        num.div(&den)
    }

    fn require_char2(&self) -> Result<()> {
        if self.p() != 2 {
            return Err(Error::CharNot2(self.p()));
        }
        Ok(())
    }

    /// `H(τ1, τ2, σ)` with fresh column `r`.
    pub fn h_term(&self, tau1: &[u32], tau2: &[u32], sigma: &[u32], r: usize) -> Result<RationalFunction> {
        self.require_char2()?;
        let cx = self.ctx.complex();
        let (m1, m2) = (mask_of(tau1), mask_of(tau2));
        if m1 & m2 != 0 || !cx.is_facet(sigma) {
            return Err(Error::BadShape("τ1, τ2 must be disjoint and σ a facet".into()));
        }
        if r <= cx.m() as usize || r > self.ctx.columns() {
            return Err(Error::BadColumn { col: r, max: self.ctx.columns() });
        }
        let sm = mask_of(sigma);
        let tm = m1 | m2;
        if sm & tm != tm {
            return Ok(RationalFunction::zero(2));
        }
        let with_r = |skip: u32| -> RationalFunction {
            let mut cols: Vec<usize> = sigma.iter().filter(|&&v| v != skip).map(|&v| v as usize).collect();
            cols.push(r);
            cols.sort_unstable();
            RationalFunction::bracket(2, &cols)
        };
        let mut num = RationalFunction::one(2);
        for &j in tau1 {
            num = num.mul(&with_r(j));
        }
        let mut den = m_set(2, sigma);
        for &j in sigma.iter().filter(|&&j| tm >> (j - 1) & 1 == 0) {
            den = den.mul(&with_r(j));
        }
        num.div(&den)
    }

    fn check_sum_shape(&self, tau1: &[u32], tau2: &[u32]) -> Result<()> {
        self.require_char2()?;
        let mut tau: Vec<u32> = tau1.iter().chain(tau2).copied().collect();
        tau.sort_unstable();
        if !self.ctx.complex().is_face(&tau) || tau.windows(2).any(|w| w[0] == w[1]) {
            return Err(Error::NotAFace(tau));
        }
        if 2 * tau1.len() + tau2.len() != self.ctx.rows() {
            return Err(Error::WrongDegree { expected: self.ctx.rows(), got: 2 * tau1.len() + tau2.len() });
        }
        Ok(())
    }

    /// The H-terms of the facets containing `τ1 ∪ τ2`, in facet order.
    pub fn h_terms(&self, tau1: &[u32], tau2: &[u32], r: usize) -> Result<Vec<(Face, RationalFunction)>> {
        self.check_sum_shape(tau1, tau2)?;
        let tm = mask_of(tau1) | mask_of(tau2);
        let cx = self.ctx.complex();
        let mut out = Vec::new();
        for (f, &fm) in cx.facets().iter().zip(cx.facet_masks()) {
            if fm & tm == tm {
                out.push((f.clone(), self.h_term(tau1, tau2, f, r)?));
            }
        }
        Ok(out)
    }

    /// `Ψ(π(∏_{τ1} x^2 ∏_{τ2} x))` as the sum of H-terms.
    pub fn sum_formula(&self, tau1: &[u32], tau2: &[u32], r: usize) -> Result<RationalFunction> {
        let mut acc = RationalFunction::zero(2);
        for (_, h) in self.h_terms(tau1, tau2, r)? {
            acc = acc.add(&h);
        }
        Ok(acc)
    }

    /// The same sum with column `r` specialised to `(1, 0, …, 0)`; the
    /// result lives on that specialisation.
    pub fn sum_formula_specialized(&self, tau1: &[u32], tau2: &[u32], r: usize) -> Result<RationalFunction> {
        let rows = self.ctx.rows();
        let mut col = vec![0u32; rows];
        col[0] = 1;
        let frame = Arc::try_unwrap(Frame::generic(2, rows)).expect("fresh frame").with_free_column(r as u8, &col)?;
        let frame = Arc::new(frame);
        let s = self.sum_formula(tau1, tau2, r)?;
        Ok(RationalFunction::from_terms(2, s.terms().to_vec(), s.cov().clone(), Some(frame)))
    }

    /// Closed forms on the boundary of a simplex: `∏ x_{c_i}^2` for odd `n`,
    /// `x_b ∏ x_{c_i}^2` for even `n`.
    pub fn simplex_closed_form(&self, c: &[u32], b: Option<u32>) -> Result<RationalFunction> {
        self.require_char2()?;
        let cx = self.ctx.complex();
        let n = cx.n();
        if cx.m() as usize != n + 2 || cx.facets().len() != n + 2 {
            return Err(Error::NotSimplexBoundary("complex is not a simplex boundary".into()));
        }
        let shape_ok = match b {
            None => n % 2 == 1 && c.len() == n.div_ceil(2),
            Some(_) => n.is_multiple_of(2) && c.len() == n / 2,
        };
        let mut used = c.to_vec();
        used.extend(b);
        used.sort_unstable();
        if !shape_ok || used.windows(2).any(|w| w[0] == w[1]) || used.iter().any(|&v| v == 0 || v > cx.m()) {
            return Err(Error::NotSimplexBoundary(format!("shape c = {c:?}, b = {b:?} for n = {n}")));
        }
        let tau: Vec<u32> = (1..=cx.m()).collect();
        let minus = |v: u32| -> Vec<u32> { tau.iter().copied().filter(|&x| x != v).collect() };
        let mut num = RationalFunction::one(2);
        for &ci in c {
            num = num.mul(&m_set(2, &minus(ci)));
        }
        let mut den = RationalFunction::one(2);
        for g in tau.iter().filter(|v| !used.contains(v)) {
            den = den.mul(&m_set(2, &minus(*g)));
        }
        num.div(&den)
    }

    /// `ρ_e(u, w) = Ψ_e(u w)` on the middle degree of an odd-dimensional
    /// complex.
    pub fn rho(&self, u: &ElementRep, w: &ElementRep) -> Result<RationalFunction> {
        let n = self.ctx.n();
        if n.is_multiple_of(2) {
            return Err(Error::EvenDimension);
        }
        let half = n.div_ceil(2);
        for d in [u.degree(), w.degree()] {
            if d != half {
                return Err(Error::WrongDegree { expected: half, got: d });
            }
        }
        self.element(&self.ctx.multiply(u, w)?)
    }
}

/// Square-free degree-`(n+1)` monomials and one-squared-vertex monomials
/// `x_c^2 x_b` (b a face of size `n − 1` with `b ∪ {c}` a face).
pub fn test_monomials(ctx: &ReductionContext) -> (Vec<Face>, Vec<(u32, Face)>) {
    let cx = ctx.complex();
    let facets = cx.facets().to_vec();
    let mut squares = Vec::new();
    for face in cx.faces_of_size(cx.rank() - 1) {
        for &c in &face {
            let b: Vec<u32> = face.iter().copied().filter(|&x| x != c).collect();
            squares.push((c, b));
        }
    }
    (facets, squares)
}
