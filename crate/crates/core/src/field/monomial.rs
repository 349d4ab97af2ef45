use std::cmp::Ordering;
use std::fmt;

use serde::{Deserialize, Serialize};
use smallvec::SmallVec;

/// A variable `a[row, col]` of the generic coefficient matrix (1-based).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct VarIndex {
    pub row: u8,
    pub col: u8,
}

impl VarIndex {
    pub fn new(row: usize, col: usize) -> Self {
        assert!(
            (1..=255).contains(&row) && (1..=255).contains(&col),
            "variable a[{row},{col}] out of range"
        );
        VarIndex { row: row as u8, col: col as u8 }
    }

    #[inline]
    pub(crate) fn packed(self) -> u16 {
        ((self.row as u16) << 8) | self.col as u16
    }

    #[inline]
    pub(crate) fn from_packed(v: u16) -> Self {
        VarIndex { row: (v >> 8) as u8, col: (v & 0xff) as u8 }
    }
}

impl fmt::Display for VarIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "a[{},{}]", self.row, self.col)
    }
}

// Each entry packs `(0xffff - var) << 16 | exponent`, entries sorted by
// variable ascending. With that encoding, the derived slice ordering is
// exactly lex with a[1,1] > a[1,2] > ... > a[2,1] > ...
type Key = u32;

#[inline]
fn key(var: u16, exp: u16) -> Key {
    (((0xffff - var) as u32) << 16) | exp as u32
}

#[inline]
fn key_var(k: Key) -> u16 {
    0xffff - (k >> 16) as u16
}

#[inline]
fn key_exp(k: Key) -> u16 {
    (k & 0xffff) as u16
}

/// A monomial in the `a[i,j]`; zero exponents are never stored.
#[derive(Clone, Default, PartialEq, Eq, Hash)]
pub struct Monomial(SmallVec<[Key; 12]>);

impl Monomial {
    pub fn one() -> Self {
        Monomial(SmallVec::new())
    }

    pub fn var(v: VarIndex) -> Self {
        Self::var_pow(v, 1)
    }

    pub fn var_pow(v: VarIndex, e: u32) -> Self {
        if e == 0 {
            return Self::one();
        }
        let mut s = SmallVec::new();
        s.push(key(v.packed(), checked_exp(e)));
        Monomial(s)
    }

    /// Builds a monomial from `(variable, exponent)` pairs in any order.
    pub fn from_pairs<I: IntoIterator<Item = (VarIndex, u32)>>(pairs: I) -> Self {
        let mut acc: Vec<(u16, u32)> = pairs
            .into_iter()
            .filter(|&(_, e)| e > 0)
            .map(|(v, e)| (v.packed(), e))
            .collect();
        acc.sort_unstable();
        let mut out: SmallVec<[Key; 12]> = SmallVec::new();
        let mut i = 0;
        while i < acc.len() {
            let v = acc[i].0;
            let mut e = 0u32;
            while i < acc.len() && acc[i].0 == v {
                e += acc[i].1;
                i += 1;
            }
            out.push(key(v, checked_exp(e)));
        }
        Monomial(out)
    }

    pub fn is_one(&self) -> bool {
        self.0.is_empty()
    }

    pub fn degree(&self) -> u32 {
        self.0.iter().map(|&k| key_exp(k) as u32).sum()
    }

    pub fn exponent(&self, v: VarIndex) -> u32 {
        let pv = v.packed();
        self.0
            .iter()
            .find(|&&k| key_var(k) == pv)
            .map(|&k| key_exp(k) as u32)
            .unwrap_or(0)
    }

    /// `(variable, exponent)` pairs, variables in ascending (row, col) order.
    pub fn iter(&self) -> impl Iterator<Item = (VarIndex, u32)> + '_ {
        self.0
            .iter()
            .map(|&k| (VarIndex::from_packed(key_var(k)), key_exp(k) as u32))
    }

    pub fn num_vars(&self) -> usize {
        self.0.len()
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        let (a, b) = (&self.0, &other.0);
        let mut out: SmallVec<[Key; 12]> = SmallVec::with_capacity(a.len() + b.len());
        let (mut i, mut j) = (0, 0);
        while i < a.len() && j < b.len() {
            let (va, vb) = (key_var(a[i]), key_var(b[j]));
            match va.cmp(&vb) {
                Ordering::Less => {
                    out.push(a[i]);
                    i += 1;
                }
                Ordering::Greater => {
                    out.push(b[j]);
                    j += 1;
                }
                Ordering::Equal => {
                    let e = key_exp(a[i]) as u32 + key_exp(b[j]) as u32;
                    out.push(key(va, checked_exp(e)));
                    i += 1;
                    j += 1;
                }
            }
        }
        out.extend_from_slice(&a[i..]);
        out.extend_from_slice(&b[j..]);
        Monomial(out)
    }

    /// `self / other` if `other` divides `self`.
    pub fn div(&self, other: &Monomial) -> Option<Monomial> {
        let (a, b) = (&self.0, &other.0);
        let mut out: SmallVec<[Key; 12]> = SmallVec::with_capacity(a.len());
        let (mut i, mut j) = (0, 0);
        while j < b.len() {
            if i >= a.len() {
                return None;
            }
            let (va, vb) = (key_var(a[i]), key_var(b[j]));
            match va.cmp(&vb) {
                Ordering::Less => {
                    out.push(a[i]);
                    i += 1;
                }
                Ordering::Greater => return None,
                Ordering::Equal => {
                    let (ea, eb) = (key_exp(a[i]), key_exp(b[j]));
                    if ea < eb {
                        return None;
                    }
                    if ea > eb {
                        out.push(key(va, ea - eb));
                    }
                    i += 1;
                    j += 1;
                }
            }
        }
        out.extend_from_slice(&a[i..]);
        Some(Monomial(out))
    }

    pub fn pow(&self, e: u32) -> Monomial {
        if e == 0 {
            return Monomial::one();
        }
        Monomial(
            self.0
                .iter()
                .map(|&k| key(key_var(k), checked_exp(key_exp(k) as u32 * e)))
                .collect(),
        )
    }

    /// Lowers the exponent of `v` by one. Returns the old exponent (0 if absent).
    pub(crate) fn lower(&self, v: VarIndex) -> Option<(u32, Monomial)> {
        let pv = v.packed();
        let pos = self.0.iter().position(|&k| key_var(k) == pv)?;
        let e = key_exp(self.0[pos]);
        let mut out = self.0.clone();
        if e == 1 {
            out.remove(pos);
        } else {
            out[pos] = key(pv, e - 1);
        }
        Some((e as u32, Monomial(out)))
    }

    /// Removes `v` entirely, returning its exponent.
    pub(crate) fn take_var(&self, v: VarIndex) -> (u32, Monomial) {
        let pv = v.packed();
        match self.0.iter().position(|&k| key_var(k) == pv) {
            None => (0, self.clone()),
            Some(pos) => {
                let e = key_exp(self.0[pos]) as u32;
                let mut out = self.0.clone();
                out.remove(pos);
                (e, Monomial(out))
            }
        }
    }

    pub fn vars(&self) -> impl Iterator<Item = VarIndex> + '_ {
        self.0.iter().map(|&k| VarIndex::from_packed(key_var(k)))
    }
}

fn checked_exp(e: u32) -> u16 {
    u16::try_from(e).expect("monomial exponent overflow")
}

impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        self.0.as_slice().cmp(other.0.as_slice())
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Debug for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_one() {
            return write!(f, "1");
        }
        let mut first = true;
        for (v, e) in self.iter() {
            if !first {
                write!(f, "*")?;
            }
            first = false;
            if e == 1 {
                write!(f, "{v}")?;
            } else {
                write!(f, "{v}^{e}")?;
            }
        }
        Ok(())
    }
}

/// Lexicographic order with an explicit variable priority (first = largest).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MonomialOrder {
    priority: Vec<VarIndex>,
}

impl MonomialOrder {
    /// Lex with a[1,1] > a[1,2] > ... > a[1,cols] > a[2,1] > ...
    pub fn default_lex(rows: usize, cols: usize) -> Self {
        let priority = (1..=rows)
            .flat_map(|i| (1..=cols).map(move |j| VarIndex::new(i, j)))
            .collect();
        MonomialOrder { priority }
    }

    /// Lex order with the given priority; every variable that occurs in the
    /// compared monomials must be listed.
    pub fn lex(priority: Vec<VarIndex>) -> Self {
        MonomialOrder { priority }
    }

    pub fn priority(&self) -> &[VarIndex] {
        &self.priority
    }

    pub fn compare(&self, a: &Monomial, b: &Monomial) -> Ordering {
        for &v in &self.priority {
            match a.exponent(v).cmp(&b.exponent(v)) {
                Ordering::Equal => continue,
                o => return o,
            }
        }
        debug_assert!(
            a.vars().chain(b.vars()).all(|v| self.priority.contains(&v)),
            "monomial variable missing from order priority"
        );
        Ordering::Equal
    }

    /// Whether this order coincides with the storage order of `Polynomial`.
    pub fn is_storage_order(&self) -> bool {
        self.priority.windows(2).all(|w| w[0] < w[1])
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn v(i: usize, j: usize) -> VarIndex {
        VarIndex::new(i, j)
    }

    #[test]
    fn lex_storage_order() {
        let a11 = Monomial::var(v(1, 1));
        let a12sq = Monomial::var_pow(v(1, 2), 5);
        let a21 = Monomial::var(v(2, 1));
        assert!(a11 > a12sq);
        assert!(a12sq > a21);
        assert!(a11.mul(&a21) > a11);
        assert!(a11 > Monomial::one());
        let m1 = Monomial::from_pairs([(v(1, 1), 1), (v(2, 2), 1)]);
        let m2 = Monomial::from_pairs([(v(1, 2), 1), (v(2, 1), 1)]);
        assert!(m1 > m2);
        let ord = MonomialOrder::default_lex(2, 2);
        assert_eq!(ord.compare(&m1, &m2), Ordering::Greater);
        assert!(ord.is_storage_order());
    }

    #[test]
    fn mul_div_roundtrip() {
        let a = Monomial::from_pairs([(v(1, 1), 2), (v(2, 3), 1)]);
        let b = Monomial::from_pairs([(v(1, 1), 1), (v(1, 2), 4)]);
        let ab = a.mul(&b);
        assert_eq!(ab.exponent(v(1, 1)), 3);
        assert_eq!(ab.degree(), 8);
        assert_eq!(ab.div(&b).unwrap(), a);
        assert_eq!(ab.div(&a).unwrap(), b);
        assert!(a.div(&b).is_none());
    }

    #[test]
    fn display() {
        let a = Monomial::from_pairs([(v(2, 3), 1), (v(1, 1), 2)]);
        assert_eq!(a.to_string(), "a[1,1]^2*a[2,3]");
    }
}
