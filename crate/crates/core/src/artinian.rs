//! The generic Artinian reduction `A = k[D]/(f_1, …, f_{n+1})` with
//! `f_i = Σ_j a[i,j] x_j`.
//!
//! Elements of `A` are combinations of square-free face monomials with
//! rational-function coefficients. Ranks and Hilbert functions use random
//! specialisations of the `a[i,j]` through [`NumericQuotient`].

use std::collections::BTreeMap;
use std::fmt;
use std::sync::Mutex;

use rustc_hash::FxHashMap;

use crate::complex::{face_of, mask_of, Face, SimplicialComplex};
use crate::error::{Error, Result};
use crate::field::{Evaluator, ExtField, FieldConfig, RationalFunction, VarIndex};
use crate::linalg::Echelon;

/// A monomial `∏ x_v^{e_v}` in the face-ring variables.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct XMonomial {
    exps: Vec<u32>,
}

impl XMonomial {
    pub fn one(m: u32) -> Self {
        XMonomial { exps: vec![0; m as usize] }
    }

    pub fn from_face(m: u32, face: &[u32]) -> Self {
        let mut g = Self::one(m);
        for &v in face {
            g.exps[v as usize - 1] += 1;
        }
        g
    }

    /// `∏ x_v^e` from `(vertex, exponent)` pairs.
    pub fn from_pairs(m: u32, pairs: &[(u32, u32)]) -> Self {
        let mut g = Self::one(m);
        for &(v, e) in pairs {
            g.exps[v as usize - 1] += e;
        }
        g
    }

    /// `x_{sq}^2 · x_{lin}`.
    pub fn square_times(m: u32, sq: &[u32], lin: &[u32]) -> Self {
        let mut g = Self::from_face(m, lin);
        for &v in sq {
            g.exps[v as usize - 1] += 2;
        }
        g
    }

    pub fn exponent(&self, v: u32) -> u32 {
        self.exps[v as usize - 1]
    }

    pub fn degree(&self) -> usize {
        self.exps.iter().sum::<u32>() as usize
    }

    pub fn support(&self) -> Face {
        (1..=self.exps.len() as u32).filter(|&v| self.exponent(v) > 0).collect()
    }

    pub fn support_mask(&self) -> u64 {
        mask_of(&self.support())
    }

    /// `Σ e_v − #{v : e_v > 0}`.
    pub fn complexity(&self) -> usize {
        self.degree() - self.exps.iter().filter(|&&e| e > 0).count()
    }

    pub fn is_squarefree(&self) -> bool {
        self.exps.iter().all(|&e| e <= 1)
    }

    pub fn mul(&self, o: &XMonomial) -> XMonomial {
        XMonomial { exps: self.exps.iter().zip(&o.exps).map(|(a, b)| a + b).collect() }
    }

    fn shifted(&self, add: u32, remove: u32) -> XMonomial {
        let mut g = self.clone();
        g.exps[add as usize - 1] += 1;
        g.exps[remove as usize - 1] -= 1;
        g
    }
}

/// Element of `A_d` as a combination of square-free face monomials.
#[derive(Clone)]
pub struct ElementRep {
    degree: usize,
    terms: BTreeMap<Face, RationalFunction>,
}

impl ElementRep {
    pub fn zero(degree: usize) -> Self {
        ElementRep { degree, terms: BTreeMap::new() }
    }

    pub fn unit(p: u32) -> Self {
        Self::monomial(p, &[])
    }

    /// `π(x_face)` for a face given as any vertex list.
    pub fn monomial(p: u32, face: &[u32]) -> Self {
        let mut f = face.to_vec();
        f.sort_unstable();
        let mut terms = BTreeMap::new();
        terms.insert(f, RationalFunction::one(p));
        ElementRep { degree: face.len(), terms }
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn terms(&self) -> &BTreeMap<Face, RationalFunction> {
        &self.terms
    }

    pub fn is_trivially_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn add_term(&mut self, face: Face, c: RationalFunction) {
        assert_eq!(face.len(), self.degree, "term of the wrong degree");
        if c.is_trivially_zero() {
            return;
        }
        match self.terms.get_mut(&face) {
            Some(x) => {
                *x = x.add(&c);
                if x.is_trivially_zero() {
                    self.terms.remove(&face);
                }
            }
            None => {
                self.terms.insert(face, c);
            }
        }
    }

    pub fn add(&self, o: &ElementRep) -> ElementRep {
        assert_eq!(self.degree, o.degree);
        let mut r = self.clone();
        for (f, c) in &o.terms {
            r.add_term(f.clone(), c.clone());
        }
        r
    }

    pub fn scale(&self, c: &RationalFunction) -> ElementRep {
        let mut r = ElementRep::zero(self.degree);
        for (f, x) in &self.terms {
            r.add_term(f.clone(), x.mul(c));
        }
        r
    }

    pub fn neg(&self) -> ElementRep {
        ElementRep { degree: self.degree, terms: self.terms.iter().map(|(f, c)| (f.clone(), c.neg())).collect() }
    }
}

impl fmt::Display for ElementRep {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self
            .terms
            .iter()
            .map(|(face, c)| {
                let x: Vec<String> = face.iter().map(|v| format!("x{v}")).collect();
                format!("({c})*{}", if x.is_empty() { "1".into() } else { x.join("*") })
            })
            .collect();
        write!(f, "{}", parts.join(" + "))
    }
}

impl fmt::Debug for ElementRep {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "ElementRep[{}]({self})", self.degree)
    }
}

/// The complex, the coefficient field and the generic matrix shape.
pub struct ReductionContext {
    complex: SimplicialComplex,
    field: ExtField,
    z: usize,
    cache: Mutex<FxHashMap<XMonomial, ElementRep>>,
}

/// Seeds tried after the caller's list when two runs disagree.
const EXTRA_SEEDS: [u64; 4] = [0xa11ce, 0xb0b, 0xc0ffee, 0xdecade];

impl ReductionContext {
    /// Context with `Z = m + 2n` columns.
    pub fn new(complex: SimplicialComplex, cfg: FieldConfig) -> Result<Self> {
        let z = complex.m() as usize + 2 * complex.n();
        Self::with_columns(complex, cfg, z)
    }

    pub fn with_columns(complex: SimplicialComplex, cfg: FieldConfig, z: usize) -> Result<Self> {
        if z < complex.m() as usize {
            return Err(Error::BadShape(format!("Z = {z} is smaller than m = {}", complex.m())));
        }
        if complex.rank() == 0 {
            return Err(Error::BadShape("complex {∅} has no reduction".into()));
        }
        Ok(ReductionContext { complex, field: ExtField::new(cfg)?, z, cache: Mutex::new(FxHashMap::default()) })
    }

    /// Characteristic-2 context with the default extension degree.
    pub fn char2(complex: SimplicialComplex) -> Self {
        Self::new(complex, FieldConfig::default()).expect("valid default configuration")
    }

    pub fn complex(&self) -> &SimplicialComplex {
        &self.complex
    }

    pub fn characteristic(&self) -> u32 {
        self.field.characteristic()
    }

    pub fn field(&self) -> &ExtField {
        &self.field
    }

    pub fn n(&self) -> usize {
        self.complex.n()
    }

    pub fn m(&self) -> u32 {
        self.complex.m()
    }

    pub fn rows(&self) -> usize {
        self.complex.rank()
    }

    pub fn columns(&self) -> usize {
        self.z
    }

    /// Bracket of the listed columns, in the given order.
    pub fn bracket(&self, cols: &[usize]) -> RationalFunction {
        RationalFunction::bracket(self.characteristic(), cols)
    }

    /// Coefficients `[c_1, …, c_n, t]` of `Σ_t [c, t] x_t`, which vanishes in
    /// `A`. Zero coefficients are omitted.
    pub fn linear_relation(&self, cols: &[usize]) -> Result<Vec<(u32, RationalFunction)>> {
        if cols.len() != self.n() {
            return Err(Error::WrongLength { expected: self.n(), got: cols.len() });
        }
        if let Some(&c) = cols.iter().find(|&&c| c == 0 || c > self.z) {
            return Err(Error::BadColumn { col: c, max: self.z });
        }
        let mut out = Vec::new();
        for t in 1..=self.m() {
            let mut c = cols.to_vec();
            c.push(t as usize);
            let b = self.bracket(&c);
            if !b.is_trivially_zero() {
                out.push((t, b));
            }
        }
        Ok(out)
    }

    /// `π(g)` as a combination of square-free face monomials.
    pub fn reduce_to_squarefree(&self, g: &XMonomial) -> Result<ElementRep> {
        let d = g.degree();
        if d > self.rows() {
            return Err(Error::DegreeTooHigh { got: d, max: self.rows() });
        }
        if let Some(r) = self.cache.lock().unwrap().get(g) {
            return Ok(r.clone());
        }
        let r = self.reduce_uncached(g)?;
        self.cache.lock().unwrap().insert(g.clone(), r.clone());
        Ok(r)
    }

    fn reduce_uncached(&self, g: &XMonomial) -> Result<ElementRep> {
        let d = g.degree();
        let supp = g.support_mask();
        if !self.complex.is_face_mask(supp) {
            return Ok(ElementRep::zero(d));
        }
        if g.is_squarefree() {
            return Ok(ElementRep::monomial(self.characteristic(), &face_of(supp)));
        }
        let v = (1..=self.m()).find(|&v| g.exponent(v) >= 2).unwrap();
        let facet = self.complex.first_facet_containing(supp).unwrap().clone();
        let fmask = mask_of(&facet);
        let base: Vec<usize> = facet.iter().filter(|&&w| w != v).map(|&w| w as usize).collect();
        let mut den_cols = base.clone();
        den_cols.push(v as usize);
        let den = self.bracket(&den_cols);
        let mut out = ElementRep::zero(d);
        for t in 1..=self.m() {
            if fmask >> (t - 1) & 1 == 1 || !self.complex.is_face_mask(supp | 1 << (t - 1)) {
                continue;
            }
            let mut cols = base.clone();
            cols.push(t as usize);
            let coef = self.bracket(&cols).neg().div(&den)?;
            let sub = self.reduce_to_squarefree(&g.shifted(t, v))?;
            for (f, c) in sub.terms {
                out.add_term(f, c.mul(&coef));
            }
        }
        Ok(out)
    }

    /// Rewrites `u` so that no supporting face contains `p`.
    pub fn reduce_avoiding_vertex(&self, u: &ElementRep, p: u32) -> Result<ElementRep> {
        let pm = 1u64 << (p - 1);
        if self.complex.facet_masks().iter().all(|&f| f & pm != 0) {
            return Err(Error::CannotAvoid(p));
        }
        let mut out = ElementRep::zero(u.degree());
        for (face, c) in u.terms() {
            let mask = mask_of(face);
            if mask & pm == 0 {
                out.add_term(face.clone(), c.clone());
                continue;
            }
            let facet = self.complex.first_facet_containing(mask).ok_or_else(|| Error::NotAFace(face.clone()))?;
            let fmask = mask_of(facet);
            let base: Vec<usize> = facet.iter().filter(|&&w| w != p).map(|&w| w as usize).collect();
            let mut den_cols = base.clone();
            den_cols.push(p as usize);
            let den = self.bracket(&den_cols);
            let rest = mask & !pm;
            for t in 1..=self.m() {
                let tm = 1u64 << (t - 1);
                if fmask & tm != 0 || !self.complex.is_face_mask(rest | tm) {
                    continue;
                }
                let mut cols = base.clone();
                cols.push(t as usize);
                let coef = self.bracket(&cols).neg().div(&den)?;
                out.add_term(face_of(rest | tm), c.mul(&coef));
            }
        }
        Ok(out)
    }

    /// `π(u w)`.
    pub fn multiply(&self, u: &ElementRep, w: &ElementRep) -> Result<ElementRep> {
        let d = u.degree() + w.degree();
        if d > self.rows() {
            return Err(Error::DegreeTooHigh { got: d, max: self.rows() });
        }
        let m = self.m();
        let mut out = ElementRep::zero(d);
        for (f, a) in u.terms() {
            for (g, b) in w.terms() {
                let prod = XMonomial::from_face(m, f).mul(&XMonomial::from_face(m, g));
                let red = self.reduce_to_squarefree(&prod)?;
                if red.is_trivially_zero() {
                    continue;
                }
                let ab = a.mul(b);
                for (h, c) in red.terms {
                    out.add_term(h, c.mul(&ab));
                }
            }
        }
        Ok(out)
    }

    /// `A` specialised at the random point of `seed`.
    pub fn numeric(&self, seed: u64) -> NumericQuotient<'_> {
        let ev = Evaluator::new(&self.field, seed);
        let m = self.m() as usize;
        let forms: Vec<Vec<u64>> =
            (1..=self.rows()).map(|i| (1..=m).map(|j| ev.var(VarIndex::new(i, j))).collect()).collect();
        let gens: Vec<u64> = self.complex.minimal_nonfaces().iter().map(|f| mask_of(f)).collect();
        NumericQuotient::new(&self.field, m, &gens, &forms, self.rows() + 1)
    }

    /// Coordinates of `u` in the numeric quotient of the same seed.
    pub fn numeric_vector(&self, nq: &NumericQuotient<'_>, seed: u64, u: &ElementRep) -> Result<Vec<u64>> {
        let ev = Evaluator::new(&self.field, seed);
        let mut terms = Vec::with_capacity(u.terms().len());
        for (face, c) in u.terms() {
            terms.push((XMonomial::from_face(self.m(), face).exps.iter().map(|&e| e as u8).collect(), c.eval(&ev)?));
        }
        Ok(nq.coords(u.degree(), &nq.vector(u.degree(), &terms)))
    }

    /// Whether `u ≠ 0` in `A`, decided at two random points.
    pub fn is_nonzero(&self, u: &ElementRep, seeds: &[u64]) -> Result<bool> {
        if u.is_trivially_zero() {
            return Ok(false);
        }
        agree(seeds, |s| {
            let nq = self.numeric(s);
            Ok(self.numeric_vector(&nq, s, u)?.iter().any(|&x| x != 0))
        })
    }

    /// `dim A_0, …, dim A_{n+1}` by the two-seed rule.
    pub fn hilbert_function(&self, seeds: &[u64]) -> Result<Vec<usize>> {
        let top = self.rows();
        let dims = agree(seeds, |s| {
            let nq = self.numeric(s);
            Ok((0..=top + 1).map(|d| nq.dim(d)).collect::<Vec<usize>>())
        })?;
        if dims[top + 1] != 0 {
            return Err(Error::UnstableRank(format!("A_{} has dimension {}", top + 1, dims[top + 1])));
        }
        Ok(dims[..=top].to_vec())
    }
}

/// Runs `f` on seeds until two runs agree; the caller's seeds come first.
pub fn agree<T: PartialEq + fmt::Debug>(seeds: &[u64], f: impl Fn(u64) -> Result<T>) -> Result<T> {
    let mut seen: Vec<T> = Vec::new();
    for &s in seeds.iter().chain(EXTRA_SEEDS.iter()) {
        let v = match f(s) {
            Ok(v) => v,
            Err(Error::DenominatorVanished) => continue,
            Err(e) => return Err(e),
        };
        if seen.contains(&v) {
            return Ok(v);
        }
        seen.push(v);
    }
    Err(Error::UnstableRank(format!("no two seeds agreed: {seen:?}")))
}

/// One graded piece of a numeric quotient.
struct Piece<'f> {
    monos: Vec<Vec<u8>>,
    index: FxHashMap<Vec<u8>, usize>,
    ech: Echelon<'f>,
    basis: Vec<usize>,
}

/// `GF(p^w)[x_1..x_N] / (square-free monomials + linear forms)`, degree by
/// degree up to a fixed top degree.
pub struct NumericQuotient<'f> {
    field: &'f ExtField,
    nvars: usize,
    pieces: Vec<Piece<'f>>,
}

fn monomials(nvars: usize, d: usize, gens: &[u64]) -> Vec<Vec<u8>> {
    fn go(i: usize, left: usize, cur: &mut Vec<u8>, gens: &[u64], out: &mut Vec<Vec<u8>>) {
        if i == cur.len() {
            if left == 0 {
                out.push(cur.clone());
            }
            return;
        }
        for e in (0..=left).rev() {
            cur[i] = e as u8;
            let supp = cur[..=i].iter().enumerate().filter(|(_, &x)| x > 0).fold(0u64, |a, (j, _)| a | 1 << j);
            if gens.iter().all(|&g| supp & g != g) {
                go(i + 1, left - e, cur, gens, out);
            }
        }
        cur[i] = 0;
    }
    let mut out = Vec::new();
    go(0, d, &mut vec![0u8; nvars], gens, &mut out);
    out
}

impl<'f> NumericQuotient<'f> {
    /// `gens` are variable masks (bit `j` for `x_{j+1}`); `forms` give the
    /// coefficients of each linear form.
    pub fn new(field: &'f ExtField, nvars: usize, gens: &[u64], forms: &[Vec<u64>], top: usize) -> Self {
        let mut pieces: Vec<Piece<'f>> = Vec::new();
        for d in 0..=top {
            let mut monos = monomials(nvars, d, gens);
            // square-free monomials last and in reverse order, so that the
            // standard monomials are square-free and lexicographically small
            monos.sort_by(|a, b| {
                let sa = a.iter().all(|&e| e <= 1);
                let sb = b.iter().all(|&e| e <= 1);
                sa.cmp(&sb).then_with(|| if sa { face_key(b).cmp(&face_key(a)) } else { a.cmp(b) })
            });
            let index: FxHashMap<Vec<u8>, usize> = monos.iter().enumerate().map(|(i, m)| (m.clone(), i)).collect();
            let mut ech = Echelon::new(field, monos.len());
            if d > 0 {
                for h in &pieces[d - 1].monos {
                    for f in forms {
                        let mut row = vec![0u64; monos.len()];
                        for (j, &c) in f.iter().enumerate() {
                            if c == 0 {
                                continue;
                            }
                            let mut g = h.clone();
                            g[j] += 1;
                            if let Some(&k) = index.get(&g) {
                                row[k] = field.add(row[k], c);
                            }
                        }
                        ech.insert(&row);
                    }
                }
            }
            let piv = ech.pivots();
            let mut basis: Vec<usize> = (0..monos.len()).filter(|i| piv.binary_search(i).is_err()).collect();
            basis.sort_by(|&a, &b| face_key(&monos[a]).cmp(&face_key(&monos[b])));
            pieces.push(Piece { monos, index, ech, basis });
        }
        NumericQuotient { field, nvars, pieces }
    }

    pub fn field(&self) -> &ExtField {
        self.field
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn top(&self) -> usize {
        self.pieces.len() - 1
    }

    pub fn dim(&self, d: usize) -> usize {
        self.pieces.get(d).map_or(0, |p| p.basis.len())
    }

    /// Standard monomials of degree `d` (exponent vectors).
    pub fn basis(&self, d: usize) -> Vec<Vec<u8>> {
        let p = &self.pieces[d];
        p.basis.iter().map(|&i| p.monos[i].clone()).collect()
    }

    /// Vector in the monomial coordinates of degree `d`; monomials in the
    /// monomial ideal are dropped.
    pub fn vector(&self, d: usize, terms: &[(Vec<u8>, u64)]) -> Vec<u64> {
        let p = &self.pieces[d];
        let mut v = vec![0u64; p.monos.len()];
        for (m, c) in terms {
            if let Some(&k) = p.index.get(m) {
                v[k] = self.field.add(v[k], *c);
            }
        }
        v
    }

    /// Coordinates on the standard basis of degree `d`.
    pub fn coords(&self, d: usize, v: &[u64]) -> Vec<u64> {
        let p = &self.pieces[d];
        let r = p.ech.reduce(v);
        p.basis.iter().map(|&i| r[i]).collect()
    }

    /// Matrix (rows = basis of degree `d`) of multiplication by a linear form.
    pub fn mul_matrix(&self, d: usize, form: &[u64]) -> Vec<Vec<u64>> {
        self.basis(d)
            .iter()
            .map(|b| self.coords(d + 1, &self.vector(d + 1, &times_form(b, form))))
            .collect()
    }

    /// Images of the degree-`d` basis under multiplication by `form^k`.
    pub fn power_matrix(&self, d: usize, form: &[u64], k: usize) -> Vec<Vec<u64>> {
        let mut rows: Vec<Vec<u64>> = (0..self.dim(d))
            .map(|i| {
                let mut e = vec![0u64; self.dim(d)];
                e[i] = 1;
                e
            })
            .collect();
        for step in 0..k {
            let m = self.mul_matrix(d + step, form);
            rows = rows.iter().map(|r| mat_vec(self.field, r, &m, self.dim(d + step + 1))).collect();
        }
        rows
    }

    /// Monomial-coordinate vector of a basis-coordinate vector.
    pub fn lift(&self, d: usize, coords: &[u64]) -> Vec<(Vec<u8>, u64)> {
        let p = &self.pieces[d];
        p.basis.iter().zip(coords).filter(|(_, &c)| c != 0).map(|(&i, &c)| (p.monos[i].clone(), c)).collect()
    }
}

fn face_key(m: &[u8]) -> Vec<usize> {
    m.iter().enumerate().filter(|(_, &e)| e > 0).map(|(i, _)| i).collect()
}

/// Terms of `x^b · Σ form_j x_j`.
pub fn times_form(b: &[u8], form: &[u64]) -> Vec<(Vec<u8>, u64)> {
    form.iter()
        .enumerate()
        .filter(|(_, &c)| c != 0)
        .map(|(j, &c)| {
            let mut g = b.to_vec();
            g[j] += 1;
            (g, c)
        })
        .collect()
}

/// Row vector times matrix.
pub fn mat_vec(f: &ExtField, v: &[u64], m: &[Vec<u64>], ncols: usize) -> Vec<u64> {
    let mut out = vec![0u64; ncols];
    for (&c, row) in v.iter().zip(m) {
        if c == 0 {
            continue;
        }
        for (o, &x) in out.iter_mut().zip(row) {
            *o = f.add(*o, f.mul(c, x));
        }
    }
    out
}
