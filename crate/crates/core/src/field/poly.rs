use std::cmp::Ordering;
use std::collections::BinaryHeap;
use std::fmt;

use rustc_hash::{FxHashMap, FxHashSet};

use super::gf::{invmod, mulmod, ExtField};
use super::monomial::{Monomial, MonomialOrder, VarIndex};
use crate::error::{Error, Result};

/// Sparse polynomial over GF(p) in the variables `a[i,j]`.
///
/// Terms are kept sorted by decreasing monomial in the storage order
/// (lex with a[1,1] > a[1,2] > ... > a[2,1] > ...), without zero
/// coefficients, so equality is structural.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Polynomial {
    p: u32,
    terms: Vec<(Monomial, u32)>,
}

impl Polynomial {
    pub fn zero(p: u32) -> Self {
        Polynomial { p, terms: Vec::new() }
    }

    pub fn one(p: u32) -> Self {
        Self::constant(p, 1)
    }

    pub fn constant(p: u32, c: u32) -> Self {
        let c = c % p;
        if c == 0 {
            return Self::zero(p);
        }
        Polynomial { p, terms: vec![(Monomial::one(), c)] }
    }

    /// Constant from a signed integer.
    pub fn from_i64(p: u32, c: i64) -> Self {
        Self::constant(p, c.rem_euclid(p as i64) as u32)
    }

    pub fn var(p: u32, v: VarIndex) -> Self {
        Self::monomial(p, Monomial::var(v), 1)
    }

    pub fn monomial(p: u32, m: Monomial, c: u32) -> Self {
        let c = c % p;
        if c == 0 {
            return Self::zero(p);
        }
        Polynomial { p, terms: vec![(m, c)] }
    }

    /// Builds a canonical polynomial from arbitrary terms (duplicates summed).
    pub fn from_terms<I: IntoIterator<Item = (Monomial, u32)>>(p: u32, terms: I) -> Self {
        let mut v: Vec<(Monomial, u32)> = terms.into_iter().map(|(m, c)| (m, c % p)).collect();
        v.sort_unstable_by(|a, b| b.0.cmp(&a.0));
        let mut out: Vec<(Monomial, u32)> = Vec::with_capacity(v.len());
        for (m, c) in v {
            match out.last_mut() {
                Some((lm, lc)) if *lm == m => *lc = (*lc + c) % p,
                _ => {
                    if let Some((_, 0)) = out.last() {
                        out.pop();
                    }
                    out.push((m, c));
                }
            }
        }
        if let Some((_, 0)) = out.last() {
            out.pop();
        }
        Polynomial { p, terms: out }
    }

    #[inline]
    pub fn characteristic(&self) -> u32 {
        self.p
    }

    #[inline]
    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.terms.len() == 1 && self.terms[0].0.is_one() && self.terms[0].1 == 1
    }

    pub fn is_constant(&self) -> bool {
        self.terms.is_empty() || (self.terms.len() == 1 && self.terms[0].0.is_one())
    }

    /// Constant value if the polynomial is constant.
    pub fn as_constant(&self) -> Option<u32> {
        match self.terms.as_slice() {
            [] => Some(0),
            [(m, c)] if m.is_one() => Some(*c),
            _ => None,
        }
    }

    #[inline]
    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> &[(Monomial, u32)] {
        &self.terms
    }

    pub fn total_degree(&self) -> u32 {
        self.terms.iter().map(|(m, _)| m.degree()).max().unwrap_or(0)
    }

    pub fn degree_in(&self, v: VarIndex) -> u32 {
        self.terms.iter().map(|(m, _)| m.exponent(v)).max().unwrap_or(0)
    }

    pub fn variables(&self) -> Vec<VarIndex> {
        let mut s: FxHashSet<VarIndex> = FxHashSet::default();
        for (m, _) in &self.terms {
            s.extend(m.vars());
        }
        let mut v: Vec<VarIndex> = s.into_iter().collect();
        v.sort();
        v
    }

    pub fn contains_var(&self, v: VarIndex) -> bool {
        self.terms.iter().any(|(m, _)| m.exponent(v) > 0)
    }

    /// Columns of the variables occurring in the polynomial.
    pub fn columns(&self) -> Vec<u8> {
        let mut cols: Vec<u8> = self.variables().into_iter().map(|v| v.col).collect();
        cols.sort_unstable();
        cols.dedup();
        cols
    }

    fn check(&self, other: &Polynomial) {
        assert_eq!(self.p, other.p, "mixed characteristics");
    }

    pub fn neg(&self) -> Polynomial {
        if self.p == 2 {
            return self.clone();
        }
        let p = self.p;
        Polynomial { p, terms: self.terms.iter().map(|(m, c)| (m.clone(), p - c)).collect() }
    }

    pub fn scale(&self, c: u32) -> Polynomial {
        let c = c % self.p;
        if c == 0 {
            return Self::zero(self.p);
        }
        if c == 1 {
            return self.clone();
        }
        let p = self.p;
        Polynomial { p, terms: self.terms.iter().map(|(m, x)| (m.clone(), mulmod(*x, c, p))).collect() }
    }

    pub fn add(&self, other: &Polynomial) -> Polynomial {
        self.check(other);
        self.combine(other, false)
    }

    pub fn sub(&self, other: &Polynomial) -> Polynomial {
        self.check(other);
        self.combine(other, true)
    }

    fn combine(&self, other: &Polynomial, negate: bool) -> Polynomial {
        let p = self.p;
        let (a, b) = (&self.terms, &other.terms);
        let mut out = Vec::with_capacity(a.len() + b.len());
        let (mut i, mut j) = (0, 0);
        let nb = |c: u32| if negate { (p - c) % p } else { c };
        while i < a.len() && j < b.len() {
            match a[i].0.cmp(&b[j].0) {
                Ordering::Greater => {
                    out.push(a[i].clone());
                    i += 1;
                }
                Ordering::Less => {
                    out.push((b[j].0.clone(), nb(b[j].1)));
                    j += 1;
                }
                Ordering::Equal => {
                    let c = (a[i].1 + nb(b[j].1)) % p;
                    if c != 0 {
                        out.push((a[i].0.clone(), c));
                    }
                    i += 1;
                    j += 1;
                }
            }
        }
        out.extend_from_slice(&a[i..]);
        out.extend(b[j..].iter().map(|(m, c)| (m.clone(), nb(*c))));
        Polynomial { p, terms: out }
    }

    pub fn mul_monomial(&self, m: &Monomial, c: u32) -> Polynomial {
        let c = c % self.p;
        if c == 0 {
            return Self::zero(self.p);
        }
        let p = self.p;
        Polynomial {
            p,
            terms: self.terms.iter().map(|(t, x)| (t.mul(m), mulmod(*x, c, p))).collect(),
        }
    }

    pub fn mul(&self, other: &Polynomial) -> Polynomial {
        self.check(other);
        let p = self.p;
        if self.is_zero() || other.is_zero() {
            return Self::zero(p);
        }
        let (big, small) = if self.len() >= other.len() { (self, other) } else { (other, self) };
        if small.len() == 1 {
            return big.mul_monomial(&small.terms[0].0, small.terms[0].1);
        }
        let cap = (big.len() * small.len()).min(1 << 22);
        let mut acc: FxHashMap<Monomial, u32> = FxHashMap::with_capacity_and_hasher(cap, Default::default());
        if p == 2 {
            for (ms, _) in &small.terms {
                for (mb, _) in &big.terms {
                    let m = mb.mul(ms);
                    match acc.entry(m) {
                        std::collections::hash_map::Entry::Occupied(e) => {
                            e.remove();
                        }
                        std::collections::hash_map::Entry::Vacant(e) => {
                            e.insert(1);
                        }
                    }
                }
            }
        } else {
            for (ms, cs) in &small.terms {
                for (mb, cb) in &big.terms {
                    let m = mb.mul(ms);
                    let c = mulmod(*cs, *cb, p);
                    let e = acc.entry(m).or_insert(0);
                    *e = (*e + c) % p;
                }
            }
        }
        let mut terms: Vec<(Monomial, u32)> = acc.into_iter().filter(|&(_, c)| c != 0).collect();
        terms.sort_unstable_by(|a, b| b.0.cmp(&a.0));
        Polynomial { p, terms }
    }

    /// Product of several polynomials, multiplying small factors first.
    pub fn product<'a, I: IntoIterator<Item = &'a Polynomial>>(p: u32, factors: I) -> Polynomial {
        let mut fs: Vec<&Polynomial> = factors.into_iter().collect();
        if fs.iter().any(|f| f.is_zero()) {
            return Self::zero(p);
        }
        fs.sort_by_key(|f| f.len());
        let mut acc = Self::one(p);
        for f in fs {
            acc = acc.mul(f);
        }
        acc
    }

    pub fn pow(&self, e: u32) -> Polynomial {
        if e == 0 {
            return Self::one(self.p);
        }
        if self.p == 2 && e.is_multiple_of(2) {
            return self.square().pow(e / 2);
        }
        let mut acc = self.clone();
        for _ in 1..e {
            acc = acc.mul(self);
        }
        acc
    }

    /// f^2; termwise in characteristic 2.
    pub fn square(&self) -> Polynomial {
        if self.p == 2 {
            return Polynomial {
                p: 2,
                terms: self.terms.iter().map(|(m, c)| (m.pow(2), *c)).collect(),
            };
        }
        self.mul(self)
    }

    pub fn partial_derivative(&self, v: VarIndex) -> Polynomial {
        let p = self.p;
        let mut out = Vec::new();
        for (m, c) in &self.terms {
            if let Some((e, lowered)) = m.lower(v) {
                let c2 = mulmod(*c, e % p, p);
                if c2 != 0 {
                    out.push((lowered, c2));
                }
            }
        }
        Polynomial { p, terms: out }
    }

    /// Iterated partial derivative with respect to each listed variable.
    pub fn derivative(&self, vars: &[VarIndex]) -> Polynomial {
        let mut f = self.clone();
        for &v in vars {
            if f.is_zero() {
                break;
            }
            f = f.partial_derivative(v);
        }
        f
    }

    /// Replaces each variable `v` with `subst(v)` when that is `Some(c)`.
    pub fn specialize<F: Fn(VarIndex) -> Option<u32>>(&self, subst: F) -> Polynomial {
        let p = self.p;
        let mut out = Vec::with_capacity(self.terms.len());
        'terms: for (m, c) in &self.terms {
            let mut coeff = *c;
            let mut keep = Vec::new();
            for (v, e) in m.iter() {
                match subst(v) {
                    Some(val) => {
                        let val = val % p;
                        if val == 0 {
                            continue 'terms;
                        }
                        coeff = mulmod(coeff, super::gf::powmod(val, e as u64, p), p);
                    }
                    None => keep.push((v, e)),
                }
            }
            out.push((Monomial::from_pairs(keep), coeff));
        }
        Polynomial::from_terms(p, out)
    }

    /// Replaces variable `v` with the polynomial `q`.
    pub fn substitute(&self, v: VarIndex, q: &Polynomial) -> Polynomial {
        let p = self.p;
        let maxe = self.degree_in(v);
        let mut powers = vec![Polynomial::one(p)];
        for i in 1..=maxe as usize {
            let next = powers[i - 1].mul(q);
            powers.push(next);
        }
        let mut groups: FxHashMap<u32, Vec<(Monomial, u32)>> = FxHashMap::default();
        for (m, c) in &self.terms {
            let (e, rest) = m.take_var(v);
            groups.entry(e).or_default().push((rest, *c));
        }
        let mut acc = Polynomial::zero(p);
        let mut keys: Vec<u32> = groups.keys().copied().collect();
        keys.sort_unstable();
        for e in keys {
            let part = Polynomial::from_terms(p, groups.remove(&e).unwrap());
            acc = acc.add(&part.mul(&powers[e as usize]));
        }
        acc
    }

    /// Exact quotient `self / d`, or `None` if `d` does not divide `self`.
    pub fn exact_div(&self, d: &Polynomial) -> Option<Polynomial> {
        self.check(d);
        assert!(!d.is_zero(), "division by zero polynomial");
        let p = self.p;
        if self.is_zero() {
            return Some(Self::zero(p));
        }
        let (dm, dc) = &d.terms[0];
        let dinv = invmod(*dc, p);
        if d.len() == 1 {
            let mut out = Vec::with_capacity(self.len());
            for (m, c) in &self.terms {
                out.push((m.div(dm)?, mulmod(*c, dinv, p)));
            }
            return Some(Polynomial { p, terms: out });
        }

        // Johnson's heap division; heap entries are (monomial, quotient index, divisor index).
        #[derive(PartialEq, Eq)]
        struct Entry(Monomial, usize, usize);
        impl Ord for Entry {
            fn cmp(&self, o: &Self) -> Ordering {
                self.0.cmp(&o.0)
            }
        }
        impl PartialOrd for Entry {
            fn partial_cmp(&self, o: &Self) -> Option<Ordering> {
                Some(self.cmp(o))
            }
        }
        let mut heap: BinaryHeap<Entry> = BinaryHeap::new();
        let mut q: Vec<(Monomial, u32)> = Vec::new();
        let f = &self.terms;
        let mut k = 0usize;
        loop {
            let top = heap.peek().map(|e| e.0.clone());
            let cur = match (k < f.len(), &top) {
                (false, None) => break,
                (true, None) => f[k].0.clone(),
                (false, Some(t)) => t.clone(),
                (true, Some(t)) => {
                    if f[k].0 >= *t {
                        f[k].0.clone()
                    } else {
                        t.clone()
                    }
                }
            };
            let mut c: u32 = 0;
            if k < f.len() && f[k].0 == cur {
                c = f[k].1;
                k += 1;
            }
            while heap.peek().is_some_and(|e| e.0 == cur) {
                let Entry(_, qi, dj) = heap.pop().unwrap();
                let prod = mulmod(q[qi].1, d.terms[dj].1, p);
                c = (c + p - prod) % p;
                if dj + 1 < d.terms.len() {
                    heap.push(Entry(q[qi].0.mul(&d.terms[dj + 1].0), qi, dj + 1));
                }
            }
            if c == 0 {
                continue;
            }
            let qm = cur.div(dm)?;
            let qc = mulmod(c, dinv, p);
            heap.push(Entry(qm.mul(&d.terms[1].0), q.len(), 1));
            q.push((qm, qc));
        }
        Some(Polynomial { p, terms: q })
    }

    /// Leading monomial in the storage (default lex) order.
    pub fn leading_monomial(&self) -> Option<&Monomial> {
        self.terms.first().map(|t| &t.0)
    }

    /// Initial monomial under an arbitrary lex order.
    pub fn initial_monomial(&self, ord: &MonomialOrder) -> Result<Monomial> {
        if self.is_zero() {
            return Err(Error::ZeroPolynomial);
        }
        if ord.is_storage_order() {
            return Ok(self.terms[0].0.clone());
        }
        let mut best = &self.terms[0].0;
        for (m, _) in &self.terms[1..] {
            if ord.compare(m, best) == Ordering::Greater {
                best = m;
            }
        }
        Ok(best.clone())
    }

    /// Evaluates at a point of an extension field; `point` gives each
    /// variable's value.
    pub fn eval<F: Fn(VarIndex) -> u64>(&self, field: &ExtField, point: F) -> u64 {
        let mut cache: FxHashMap<VarIndex, u64> = FxHashMap::default();
        let mut acc = 0u64;
        for (m, c) in &self.terms {
            let mut t = field.from_prime(*c);
            for (v, e) in m.iter() {
                let x = *cache.entry(v).or_insert_with(|| point(v));
                t = field.mul(t, field.pow(x, e as u128));
                if t == 0 {
                    break;
                }
            }
            acc = field.add(acc, t);
        }
        acc
    }

    /// Text form `coeff*a[i,j]^e*... + ...` in storage order; `0` for zero.
    pub fn to_text(&self) -> String {
        self.to_string()
    }
}

impl fmt::Display for Polynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (i, (m, c)) in self.terms.iter().enumerate() {
            if i > 0 {
                write!(f, " + ")?;
            }
            if m.is_one() {
                write!(f, "{c}")?;
            } else {
                write!(f, "{c}*{m}")?;
            }
        }
        Ok(())
    }
}

impl fmt::Debug for Polynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Poly[p={}]({})", self.p, self)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn v(i: usize, j: usize) -> VarIndex {
        VarIndex::new(i, j)
    }

    fn x(p: u32, i: usize, j: usize) -> Polynomial {
        Polynomial::var(p, v(i, j))
    }

    #[test]
    fn arithmetic_basics() {
        let p = 5;
        let a = x(p, 1, 1).add(&x(p, 1, 2));
        let b = x(p, 1, 1).sub(&x(p, 1, 2));
        let prod = a.mul(&b);
        let expect = x(p, 1, 1).square().sub(&x(p, 1, 2).square());
        assert_eq!(prod, expect);
        assert!(a.sub(&a).is_zero());
        assert_eq!(prod.exact_div(&a).unwrap(), b);
        assert!(prod.add(&Polynomial::one(p)).exact_div(&a).is_none());
    }

    #[test]
    fn frobenius_square_char2() {
        let a = x(2, 1, 1).add(&x(2, 2, 3)).add(&Polynomial::one(2));
        assert_eq!(a.square(), a.mul(&a));
    }

    #[test]
    fn derivative_char2_kills_squares() {
        let f = x(2, 1, 1).square();
        assert!(f.partial_derivative(v(1, 1)).is_zero());
        let g = x(2, 1, 1).mul(&x(2, 2, 1));
        assert_eq!(g.partial_derivative(v(1, 1)), x(2, 2, 1));
    }

    #[test]
    fn division_larger() {
        let p = 2;
        let f = x(p, 1, 1).mul(&x(p, 2, 2)).add(&x(p, 1, 2).mul(&x(p, 2, 1)));
        let g = x(p, 1, 3).mul(&x(p, 2, 4)).add(&x(p, 1, 4).mul(&x(p, 2, 3))).add(&x(p, 1, 1));
        let h = f.mul(&g).mul(&f);
        assert_eq!(h.exact_div(&f).unwrap(), f.mul(&g));
        assert_eq!(h.exact_div(&g).unwrap(), f.square());
        let not = h.add(&x(p, 2, 2));
        assert!(not.exact_div(&f).is_none());
    }

    #[test]
    fn specialize_and_substitute() {
        let p = 3;
        let f = x(p, 1, 1).mul(&x(p, 2, 2)).sub(&x(p, 1, 2).mul(&x(p, 2, 1)));
        let s = f.specialize(|w| if w == v(1, 1) { Some(1) } else if w == v(2, 1) { Some(0) } else { None });
        assert_eq!(s, x(p, 2, 2));
        let t = f.substitute(v(1, 1), &x(p, 1, 2));
        assert_eq!(t, x(p, 1, 2).mul(&x(p, 2, 2).sub(&x(p, 2, 1))));
    }

    #[test]
    fn text_form() {
        let f = x(2, 1, 1).mul(&x(2, 2, 2)).add(&x(2, 1, 2).mul(&x(2, 2, 1)));
        assert_eq!(f.to_string(), "1*a[1,1]*a[2,2] + 1*a[1,2]*a[2,1]");
        assert_eq!(Polynomial::zero(2).to_string(), "0");
    }
}
