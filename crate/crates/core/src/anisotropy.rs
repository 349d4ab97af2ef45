//! Generic anisotropy: square certificates in characteristic 2 and the
//! bilinear form of a polygon in any characteristic.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::artinian::{ElementRep, ReductionContext};
use crate::complex::{Face, SimplicialComplex};
use crate::error::{Error, Result};
use crate::field::bracket::{bracket, normalize_columns, GenericMatrixSpec};
use crate::field::rational::combine_terms;
use crate::field::{Evaluator, Frame, Monomial, MonomialOrder, Polynomial, RationalFunction, VarIndex};
use crate::psi::Psi;

/// Witness that `π(u)^2 ≠ 0`: a face `σ`, a square-free `h` and, for even
/// `n`, a vertex `p`, with `Ψπ(x_σ u h x_p) ≠ 0`.
#[derive(Clone, Debug)]
pub struct Certificate {
    pub sigma: Face,
    pub p: Option<u32>,
    pub h: Face,
    pub value: RationalFunction,
    /// `u^2 ≠ 0` in `A`, checked directly at random points.
    pub square_nonzero: bool,
}

/// Largest degree a certificate is defined for: `⌊(n+1)/2⌋`.
pub fn certificate_degree(n: usize) -> usize {
    n.div_ceil(2)
}

fn nonzero_at_random(ctx: &ReductionContext, f: &RationalFunction, seeds: &[u64]) -> bool {
    seeds.iter().any(|&s| {
        let ev = Evaluator::new(ctx.field(), s);
        matches!(f.eval(&ev), Ok(v) if v != 0)
    })
}

/// Searches faces in lexicographic order for a certificate of `u`.
pub fn nonzero_square_certificate(psi: &Psi<'_>, u: &ElementRep, seeds: &[u64]) -> Result<Certificate> {
    let ctx = psi.context();
    if ctx.characteristic() != 2 {
        return Err(Error::CharNot2(ctx.characteristic()));
    }
    let n = ctx.n();
    let l = certificate_degree(n);
    if u.degree() > l {
        return Err(Error::DegreeTooHigh { got: u.degree(), max: l });
    }
    if !ctx.is_nonzero(u, seeds)? {
        return Err(Error::ZeroInput);
    }
    let p2 = ctx.characteristic();
    let square_nonzero = ctx.is_nonzero(&ctx.multiply(u, u)?, seeds)?;
    let cx = ctx.complex();
    // σ has size l for odd n; for even n it is σ_1 = σ ∪ {p} of size l + 1
    let sigma_size = if n % 2 == 1 { l } else { l + 1 };
    let hs = if l == u.degree() { vec![Vec::new()] } else { cx.faces_of_size(l - u.degree()) };
    for s in cx.faces_of_size(sigma_size) {
        let xs = ctx.multiply(&ElementRep::monomial(p2, &s), u)?;
        if xs.is_trivially_zero() {
            continue;
        }
        for h in &hs {
            let full = if h.is_empty() { xs.clone() } else { ctx.multiply(&xs, &ElementRep::monomial(p2, h))? };
            if full.is_trivially_zero() {
                continue;
            }
            let value = psi.element(&full)?;
            if nonzero_at_random(ctx, &value, seeds) {
                let (sigma, p) = if n % 2 == 1 { (s.clone(), None) } else { (s[1..].to_vec(), Some(s[0])) };
                return Ok(Certificate { sigma, p, h: h.clone(), value, square_nonzero });
            }
        }
    }
    Err(Error::NoCertificateFound(format!("{u}")))
}

/// Certificates for every square-free basis monomial of `A_j`.
pub fn certify_degree(psi: &Psi<'_>, j: usize, seeds: &[u64]) -> Result<Vec<(Face, Certificate)>> {
    let ctx = psi.context();
    let nq = ctx.numeric(seeds.first().copied().unwrap_or(1));
    let mut out = Vec::new();
    for b in nq.basis(j) {
        let face: Face = b.iter().enumerate().filter(|(_, &e)| e > 0).map(|(i, _)| i as u32 + 1).collect();
        if face.len() != j {
            continue;
        }
        let u = ElementRep::monomial(ctx.characteristic(), &face);
        out.push((face, nonzero_square_certificate(psi, &u, seeds)?));
    }
    Ok(out)
}

/// A random combination `u = Σ λ_i b_i` of square-free basis monomials of
/// `A_j`, each `λ_i` either 1 or a single bracket.
#[derive(Clone, Debug)]
pub struct CombinationSample {
    pub u: ElementRep,
    /// `u^2 ≠ 0` in `A` at the random points.
    pub square_nonzero: bool,
    pub certificate: Option<Certificate>,
}

/// Square checks on `samples` random combinations in degree `j`, drawn from
/// `sample_seed`. Combinations that vanish in `A` are skipped.
pub fn sample_combinations(
    psi: &Psi<'_>,
    j: usize,
    samples: usize,
    sample_seed: u64,
    seeds: &[u64],
) -> Result<Vec<CombinationSample>> {
    let ctx = psi.context();
    let p = ctx.characteristic();
    let nq = ctx.numeric(seeds.first().copied().unwrap_or(1));
    let basis: Vec<Face> = nq
        .basis(j)
        .into_iter()
        .map(|b| b.iter().enumerate().filter(|(_, &e)| e > 0).map(|(i, _)| i as u32 + 1).collect::<Face>())
        .filter(|f| f.len() == j)
        .collect();
    if basis.is_empty() {
        return Ok(Vec::new());
    }
    let mut rng = ChaCha8Rng::seed_from_u64(sample_seed);
    let cols: Vec<usize> = (1..=ctx.columns()).collect();
    let mut out = Vec::with_capacity(samples);
    for _ in 0..samples {
        let mut u = ElementRep::zero(j);
        let forced = rng.gen_range(0..basis.len());
        for (i, b) in basis.iter().enumerate() {
            if i != forced && !rng.gen_bool(0.5) {
                continue;
            }
            let lambda = if rng.gen_bool(0.5) {
                RationalFunction::one(p)
            } else {
                let mut c: Vec<usize> = cols.choose_multiple(&mut rng, ctx.rows()).copied().collect();
                c.sort_unstable();
                RationalFunction::bracket(p, &c)
            };
            u = u.add(&ElementRep::monomial(p, b).scale(&lambda));
        }
        if !ctx.is_nonzero(&u, seeds)? {
            continue;
        }
        let square_nonzero = ctx.is_nonzero(&ctx.multiply(&u, &u)?, seeds)?;
        let certificate = match nonzero_square_certificate(psi, &u, seeds) {
            Ok(c) => Some(c),
            Err(Error::NoCertificateFound(_)) => None,
            Err(e) => return Err(e),
        };
        out.push(CombinationSample { u, square_nonzero, certificate });
    }
    Ok(out)
}

/// Symmetric matrix of rational functions.
#[derive(Clone, Debug)]
pub struct GramMatrix {
    pub entries: Vec<Vec<RationalFunction>>,
}

impl GramMatrix {
    pub fn size(&self) -> usize {
        self.entries.len()
    }

    pub fn get(&self, i: usize, j: usize) -> &RationalFunction {
        &self.entries[i][j]
    }

    pub fn is_symmetric(&self) -> bool {
        let k = self.size();
        (0..k).all(|i| (0..i).all(|j| self.entries[i][j].equals(&self.entries[j][i])))
    }

    /// Determinant by expansion over column subsets, each partial minor
    /// collapsed to a single fraction.
    pub fn det(&self) -> RationalFunction {
        let k = self.size();
        let p = self.entries.first().map(|r| r[0].characteristic()).unwrap_or(2);
        let mut dp: Vec<Option<RationalFunction>> = vec![None; 1 << k];
        dp[0] = Some(RationalFunction::one(p));
        for s in 0usize..(1 << k) {
            let Some(cur) = dp[s].take() else { continue };
            let row = s.count_ones() as usize;
            if row == k {
                dp[s] = Some(cur);
                continue;
            }
            let cur = cur.collapse();
            for j in (0..k).filter(|j| s >> j & 1 == 0) {
                let e = &self.entries[row][j];
                if e.is_trivially_zero() {
                    continue;
                }
                let above = (s >> (j + 1)).count_ones();
                let mut t = cur.mul(e);
                if above % 2 == 1 {
                    t = t.neg();
                }
                let u = s | 1 << j;
                dp[u] = Some(match dp[u].take() {
                    Some(x) => x.add(&t),
                    None => t,
                });
            }
        }
        dp[(1 << k) - 1].take().map(|d| d.collapse()).unwrap_or_else(|| RationalFunction::zero(p))
    }

    /// `P^t H P`.
    pub fn conjugate(&self, pm: &[Vec<RationalFunction>]) -> GramMatrix {
        let k = self.size();
        let p = self.entries[0][0].characteristic();
        let mut hp = vec![vec![RationalFunction::zero(p); k]; k];
        for i in 0..k {
            for j in 0..k {
                let mut acc = RationalFunction::zero(p);
                for t in 0..k {
                    if !self.entries[i][t].is_trivially_zero() && !pm[t][j].is_trivially_zero() {
                        acc = acc.add(&self.entries[i][t].mul(&pm[t][j]));
                    }
                }
                hp[i][j] = acc.collapse();
            }
        }
        let mut out = vec![vec![RationalFunction::zero(p); k]; k];
        for i in 0..k {
            for j in 0..k {
                let mut acc = RationalFunction::zero(p);
                for t in 0..k {
                    if !pm[t][i].is_trivially_zero() && !hp[t][j].is_trivially_zero() {
                        acc = acc.add(&pm[t][i].mul(&hp[t][j]));
                    }
                }
                out[i][j] = acc.collapse();
            }
        }
        GramMatrix { entries: out }
    }
}

fn check_polygon(ctx: &ReductionContext) -> Result<u32> {
    let cx = ctx.complex();
    if cx.rank() != 2 {
        return Err(Error::NotPolygon);
    }
    let m = cx.m();
    let want = SimplicialComplex::polygon(m).map_err(|_| Error::NotPolygon)?;
    if want.facets() != cx.facets() {
        return Err(Error::NotPolygon);
    }
    Ok(m)
}

fn basis_vector(p: u32, i: usize) -> ElementRep {
    ElementRep::monomial(p, &[i as u32 + 1])
}

/// Matrix of `ρ` in the basis `e_i = π(x_{i+1})`, `i = 1..m-2`.
pub fn polygon_gram(psi: &Psi<'_>) -> Result<GramMatrix> {
    let ctx = psi.context();
    let m = check_polygon(ctx)? as usize;
    let p = ctx.characteristic();
    let k = m - 2;
    let mut entries = vec![vec![RationalFunction::zero(p); k]; k];
    for i in 0..k {
        for j in i..k {
            let v = psi.rho(&basis_vector(p, i + 1), &basis_vector(p, j + 1))?;
            entries[i][j] = v.clone();
            entries[j][i] = v;
        }
    }
    Ok(GramMatrix { entries })
}

pub fn polygon_gram_det(psi: &Psi<'_>) -> Result<RationalFunction> {
    Ok(polygon_gram(psi)?.det())
}

/// `(-1)^m [1,m] / ∏_{i<m} [i,i+1]`.
pub fn polygon_det_closed_form(p: u32, m: usize) -> RationalFunction {
    let mut den = RationalFunction::one(p);
    for i in 1..m {
        den = den.mul(&RationalFunction::bracket(p, &[i, i + 1]));
    }
    let v = RationalFunction::bracket(p, &[1, m]).div(&den).expect("brackets are nonzero");
    if m % 2 == 1 {
        v.neg()
    } else {
        v
    }
}

/// `ẽ_i = Σ_{t=2}^{i+1} ([1,t]/[1,i+1]) π(x_t)` for `i = 1..m-2`.
pub fn polygon_orthogonal_basis(ctx: &ReductionContext) -> Result<Vec<ElementRep>> {
    let m = check_polygon(ctx)? as usize;
    let p = ctx.characteristic();
    let mut out = Vec::with_capacity(m - 2);
    for i in 1..=m - 2 {
        let mut e = ElementRep::zero(1);
        let d = RationalFunction::bracket(p, &[1, i + 1]);
        for t in 2..=i + 1 {
            let c = if t == i + 1 { RationalFunction::one(p) } else { RationalFunction::bracket(p, &[1, t]).div(&d)? };
            e.add_term(vec![t as u32], c);
        }
        out.push(e);
    }
    Ok(out)
}

/// `-[1,i+2] / ([1,i+1][i+1,i+2])`.
pub fn orthogonal_diagonal_closed_form(p: u32, i: usize) -> RationalFunction {
    let den = RationalFunction::bracket(p, &[1, i + 1]).mul(&RationalFunction::bracket(p, &[i + 1, i + 2]));
    RationalFunction::bracket(p, &[1, i + 2]).div(&den).expect("brackets are nonzero").neg()
}

/// The form in the orthogonal basis, and whether it is diagonal with the
/// expected entries.
pub fn verify_orthogonal_basis(psi: &Psi<'_>) -> Result<(GramMatrix, bool)> {
    let ctx = psi.context();
    let p = ctx.characteristic();
    let basis = polygon_orthogonal_basis(ctx)?;
    let k = basis.len();
    let mut entries = vec![vec![RationalFunction::zero(p); k]; k];
    let mut ok = true;
    for i in 0..k {
        for j in i..k {
            let v = psi.rho(&basis[i], &basis[j])?;
            ok &= if i == j { v.try_equals(&orthogonal_diagonal_closed_form(p, i + 1))? } else { v.is_zero() };
            entries[i][j] = v.clone();
            entries[j][i] = v;
        }
    }
    Ok((GramMatrix { entries }, ok))
}

/// The initial-term argument for `Σ d_t^2 [1,t+2] L_t = 0 ⇒ d = 0`.
#[derive(Clone, Debug, Serialize)]
pub struct AnisotropyProof {
    pub m: usize,
    /// Row `t-1`: exponents of `a[1,1..m]` in `in([1,t+2] L_t)`.
    pub initial_exponents: Vec<Vec<u32>>,
    pub parity_ok: bool,
    pub distinct: bool,
    pub holds: bool,
}

fn bracket_initials(spec: &GenericMatrixSpec, ord: &MonomialOrder, pairs: &[[usize; 2]]) -> Result<Monomial> {
    let mut acc = Monomial::one();
    for c in pairs {
        acc = acc.mul(&bracket(spec, c, 2)?.initial_monomial(ord)?);
    }
    Ok(acc)
}

/// `L_t` as a list of bracket column pairs.
pub fn l_t_factors(m: usize, t: usize) -> Vec<[usize; 2]> {
    let mut out = Vec::new();
    for s in 2..m {
        for c in [[1, s], [s, s + 1]] {
            if c != [1, t + 1] && c != [t + 1, t + 2] {
                out.push(c);
            }
        }
    }
    out
}

pub fn polygon_anisotropy_proof(m: usize) -> Result<AnisotropyProof> {
    if m < 3 {
        return Err(Error::TooSmall { what: "polygon size", got: m, min: 3 });
    }
    // the order is characteristic free; 2 is only the coefficient field
    let spec = GenericMatrixSpec::new(2, m)?;
    let ord = MonomialOrder::default_lex(2, m);
    let mut rows = Vec::new();
    for t in 1..=m - 2 {
        let mut f = l_t_factors(m, t);
        f.push([1, t + 2]);
        let mono = bracket_initials(&spec, &ord, &f)?;
        rows.push((1..=m).map(|j| mono.exponent(VarIndex::new(1, j))).collect::<Vec<u32>>());
    }
    let mut parity_ok = rows.iter().all(|r| r[0] as usize >= m - 2);
    for i in 0..rows.len() {
        for j in i + 1..rows.len() {
            // a[1, j+1] in 1-based terms i+1 < j+1
            let col = j + 1;
            parity_ok &= rows[i][col] % 2 == 1 && rows[j][col] % 2 == 0;
        }
    }
    let parities: Vec<Vec<u32>> = rows.iter().map(|r| r.iter().map(|e| e % 2).collect()).collect();
    let distinct = (0..parities.len()).all(|i| (0..i).all(|j| parities[i] != parities[j]));
    Ok(AnisotropyProof { m, holds: parity_ok && distinct, initial_exponents: rows, parity_ok, distinct })
}

fn divide_out(f: &Polynomial, b: &Polynomial) -> (Polynomial, i64) {
    let mut f = f.clone();
    let mut k = 0;
    while !f.is_constant() {
        match f.exact_div(b) {
            Some(q) => {
                f = q;
                k += 1;
            }
            None => break,
        }
    }
    (f, k)
}

/// Multiplicity of the bracket `[cols]` in `f`: syntactic factors counted,
/// expanded residuals by trial division.
pub fn bracket_valuation(f: &RationalFunction, cols: &[u32]) -> Result<i64> {
    let p = f.characteristic();
    let cols: Vec<usize> = cols.iter().map(|&c| c as usize).collect();
    let (_, key) = normalize_columns(&cols).ok_or(Error::ZeroInput)?;
    let rows = f.rows().unwrap_or(key.len());
    let frame = match f.frame() {
        Some(fr) => fr.clone(),
        None => Frame::generic(p, rows),
    };
    let t = combine_terms(p, f.terms(), &frame).ok_or(Error::ZeroInput)?;
    let b = frame.bracket(&key);
    if b.is_constant() {
        return Err(Error::Precondition(format!("bracket {key:?} is constant on the frame")));
    }
    let e = |m: &std::collections::BTreeMap<_, u32>| m.get(&key).copied().unwrap_or(0) as i64;
    let (_, num) = divide_out(&t.num.residual, &b);
    let (_, den) = divide_out(&t.den.residual, &b);
    Ok(e(&t.num.brackets) - e(&t.den.brackets) + num - den)
}

/// Edges `c < d` with `val_[c,d](det H)` odd.
pub fn recover_polygon_from_form(h: &GramMatrix, m: u32) -> Result<Vec<(u32, u32)>> {
    let det = h.det();
    if det.is_trivially_zero() || det.is_zero() {
        return Err(Error::SingularForm);
    }
    let mut edges = Vec::new();
    for c in 1..=m {
        for d in c + 1..=m {
            if bracket_valuation(&det, &[c, d])? % 2 != 0 {
                edges.push((c, d));
            }
        }
    }
    Ok(edges)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::FieldConfig;

    fn polygon_ctx(m: u32, p: u32) -> ReductionContext {
        ReductionContext::new(SimplicialComplex::polygon(m).unwrap(), FieldConfig::with_char(p).unwrap()).unwrap()
    }

    fn br(p: u32, c: &[usize]) -> RationalFunction {
        RationalFunction::bracket(p, c)
    }

    #[test]
    fn random_combinations_have_nonzero_squares() {
        let ctx = ReductionContext::char2(crate::corpus::octahedron());
        let psi = Psi::new(&ctx).unwrap();
        let got = sample_combinations(&psi, 1, 4, 7, &[1, 2]).unwrap();
        assert!(!got.is_empty());
        for s in &got {
            assert!(s.square_nonzero, "{}", s.u);
            assert!(s.certificate.is_some(), "{}", s.u);
        }
        assert!(sample_combinations(&psi, 1, 4, 7, &[1, 2]).unwrap().iter().zip(&got).all(|(a, b)| a.u.to_string() == b.u.to_string()));
    }

    #[test]
    fn gram_of_the_square() {
        let ctx = polygon_ctx(4, 3);
        let psi = Psi::new(&ctx).unwrap();
        let g = polygon_gram(&psi).unwrap();
        let d00 = br(3, &[1, 3]).div(&br(3, &[1, 2]).mul(&br(3, &[2, 3]))).unwrap().neg();
        let d11 = br(3, &[2, 4]).div(&br(3, &[2, 3]).mul(&br(3, &[3, 4]))).unwrap().neg();
        assert!(g.get(0, 0).equals(&d00));
        assert!(g.get(1, 1).equals(&d11));
        assert!(g.get(0, 1).equals(&br(3, &[2, 3]).inv().unwrap()));
        assert!(g.is_symmetric());
        assert!(g.det().equals(&polygon_det_closed_form(3, 4)));
    }

    #[test]
    fn determinant_closed_form() {
        for p in [2, 5] {
            for m in 3..=6 {
                let ctx = polygon_ctx(m, p);
                let psi = Psi::new(&ctx).unwrap();
                let d = polygon_gram_det(&psi).unwrap();
                assert!(d.equals(&polygon_det_closed_form(p, m as usize)), "p={p} m={m}");
            }
        }
    }

    #[test]
    fn orthogonal_basis() {
        let ctx = polygon_ctx(5, 3);
        let psi = Psi::new(&ctx).unwrap();
        let (g, ok) = verify_orthogonal_basis(&psi).unwrap();
        assert!(ok);
        assert!(g.get(1, 1).equals(&orthogonal_diagonal_closed_form(3, 2)));
    }

    #[test]
    fn initial_terms() {
        for m in 3..=9 {
            assert!(polygon_anisotropy_proof(m).unwrap().holds, "m={m}");
        }
        assert_eq!(l_t_factors(6, 1).len(), 6);
        // compare with the initial monomial of the expanded product
        let m = 5;
        let spec = GenericMatrixSpec::new(2, m).unwrap();
        let ord = MonomialOrder::default_lex(2, m);
        for t in 1..=m - 2 {
            let mut f = l_t_factors(m, t);
            f.push([1, t + 2]);
            let full = Polynomial::product(2, f.iter().map(|c| bracket(&spec, c, 2).unwrap()).collect::<Vec<_>>().iter());
            assert_eq!(full.initial_monomial(&ord).unwrap(), bracket_initials(&spec, &ord, &f).unwrap());
        }
    }

    #[test]
    fn valuations() {
        let f = br(2, &[1, 2]).pow(3).unwrap().mul(&br(2, &[1, 3]));
        assert_eq!(bracket_valuation(&f, &[1, 2]).unwrap(), 3);
        let g = br(2, &[1, 3]).mul(&br(2, &[2, 4])).sub(&br(2, &[1, 2]).mul(&br(2, &[3, 4])));
        let g = g.div(&br(2, &[2, 3]).pow(2).unwrap()).unwrap();
        assert_eq!(bracket_valuation(&g, &[1, 4]).unwrap(), 1);
        assert_eq!(bracket_valuation(&g, &[2, 3]).unwrap(), -1);
        assert!(matches!(bracket_valuation(&RationalFunction::zero(2), &[1, 2]), Err(Error::ZeroInput)));
    }

    #[test]
    fn recover_edges() {
        let ctx = polygon_ctx(5, 3);
        let psi = Psi::new(&ctx).unwrap();
        let g = polygon_gram(&psi).unwrap();
        let want = vec![(1, 2), (1, 5), (2, 3), (3, 4), (4, 5)];
        assert_eq!(recover_polygon_from_form(&g, 5).unwrap(), want);
        // change of basis with a bracket on the diagonal
        let one = RationalFunction::one(3);
        let z = RationalFunction::zero(3);
        let pm = vec![
            vec![br(3, &[2, 4]), one.clone(), z.clone()],
            vec![z.clone(), one.clone(), RationalFunction::constant(3, 2)],
            vec![one.clone(), z.clone(), one.clone()],
        ];
        let h = g.conjugate(&pm);
        assert_eq!(recover_polygon_from_form(&h, 5).unwrap(), want);
    }

    #[test]
    fn certificates_on_small_spheres() {
        let ctx = ReductionContext::char2(SimplicialComplex::polygon(5).unwrap());
        let psi = Psi::new(&ctx).unwrap();
        let certs = certify_degree(&psi, 1, &[1, 2]).unwrap();
        assert_eq!(certs.len(), 3);
        assert!(certs.iter().all(|(_, c)| c.square_nonzero));
        let ctx = ReductionContext::char2(SimplicialComplex::polygon(4).unwrap().suspension());
        let psi = Psi::new(&ctx).unwrap();
        let certs = certify_degree(&psi, 1, &[1, 2]).unwrap();
        assert_eq!(certs.len(), 3);
        assert!(certs.iter().all(|(_, c)| c.p.is_some()));
        let zero = ElementRep::zero(1);
        assert!(matches!(nonzero_square_certificate(&psi, &zero, &[1, 2]), Err(Error::ZeroInput)));
    }
}
