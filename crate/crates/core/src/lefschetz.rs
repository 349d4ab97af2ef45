//! Lefschetz properties through the suspension.
//!
//! For `S(D)` on vertices `1..=m+2` the algebras are
//! `A = k[S(D)]/(f_1..f_{n+2})`, `B = R/(I_D + (x_{m+2}) + (f))` and
//! `C = k[D]/(g_2..g_{n+2})` with `g_i = Σ_j c_{i,j} x_j`. Ranks are taken
//! at random points of the coefficient space.

use serde::Serialize;

use crate::artinian::{agree, mat_vec, NumericQuotient};
use crate::complex::{mask_of, SimplicialComplex};
use crate::error::{Error, Result};
use crate::field::{Evaluator, ExtField, FieldConfig, Polynomial, RationalFunction, VarIndex};
use crate::linalg;

pub struct SuspensionContext {
    base: SimplicialComplex,
    suspension: SimplicialComplex,
    field: ExtField,
}

/// One graded piece of a multiplication map.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct RankRow {
    pub degree: usize,
    pub source_dim: usize,
    pub target_dim: usize,
    pub rank: usize,
}

impl RankRow {
    pub fn max_rank(&self) -> bool {
        self.rank == self.source_dim.min(self.target_dim)
    }

    pub fn injective(&self) -> bool {
        self.rank == self.source_dim
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct LefschetzReport {
    pub holds: bool,
    pub table: Vec<RankRow>,
}

/// The three quotients at one random point.
pub struct Specialized<'f> {
    pub a: NumericQuotient<'f>,
    pub b: NumericQuotient<'f>,
    pub c: NumericQuotient<'f>,
    /// `ω` on `x_1..x_m`.
    pub omega: Vec<u64>,
}

impl SuspensionContext {
    pub fn new(base: SimplicialComplex, cfg: FieldConfig) -> Result<Self> {
        if !base.is_closed_pseudomanifold() {
            return Err(Error::Precondition("not a closed pseudomanifold".into()));
        }
        let suspension = base.suspension();
        Ok(SuspensionContext { base, suspension, field: ExtField::new(cfg)? })
    }

    pub fn base(&self) -> &SimplicialComplex {
        &self.base
    }

    pub fn suspension(&self) -> &SimplicialComplex {
        &self.suspension
    }

    pub fn field(&self) -> &ExtField {
        &self.field
    }

    pub fn n(&self) -> usize {
        self.base.n()
    }

    pub fn m(&self) -> usize {
        self.base.m() as usize
    }

    /// Rows of the coefficient matrix, `n + 2`.
    pub fn rows(&self) -> usize {
        self.n() + 2
    }

    fn p(&self) -> u32 {
        self.field.characteristic()
    }

    fn a(&self, i: usize, j: usize) -> Polynomial {
        Polynomial::var(self.p(), VarIndex::new(i, j))
    }

    /// `c_{i,j} = a_{1,j} a_{i,m+1} − a_{1,m+1} a_{i,j}`.
    pub fn c(&self, i: usize, j: usize) -> Polynomial {
        let m1 = self.m() + 1;
        self.a(1, j).mul(&self.a(i, m1)).sub(&self.a(1, m1).mul(&self.a(i, j)))
    }

    /// Coefficients of `ω = −Σ (a_{1,i}/a_{1,m+1}) x_i`.
    pub fn omega(&self) -> Vec<RationalFunction> {
        let den = RationalFunction::from_polynomial(self.a(1, self.m() + 1));
        (1..=self.m())
            .map(|i| RationalFunction::from_polynomial(self.a(1, i)).div(&den).expect("nonzero variable").neg())
            .collect()
    }

    /// `g_i = a_{i,m+1} f_1 − a_{1,m+1} f_i + x_{m+2}(a_{1,m+1}a_{i,m+2} − a_{i,m+1}a_{1,m+2})`,
    /// compared coefficient by coefficient in `x_1..x_{m+2}`. This is both
    /// inclusions of the ideal identity, since `a_{1,m+1}` is a unit.
    pub fn verify_ideal_identity(&self) -> bool {
        let (m1, m2) = (self.m() + 1, self.m() + 2);
        (2..=self.rows()).all(|i| {
            (1..=m2).all(|j| {
                let g = if j <= self.m() { self.c(i, j) } else { Polynomial::zero(self.p()) };
                let mut rhs = self.a(i, m1).mul(&self.a(1, j)).sub(&self.a(1, m1).mul(&self.a(i, j)));
                if j == m2 {
                    rhs = rhs.add(&self.a(1, m1).mul(&self.a(i, m2)).sub(&self.a(i, m1).mul(&self.a(1, m2))));
                }
                g == rhs
            })
        })
    }

    /// `A`, `B`, `C` and `ω` at the point of `seed`; fails if `a_{1,m+1}`
    /// vanishes there.
    pub fn specialize(&self, seed: u64) -> Result<Specialized<'_>> {
        let f = &self.field;
        let ev = Evaluator::new(f, seed);
        let (m, rows) = (self.m(), self.rows());
        let a = |i: usize, j: usize| ev.var(VarIndex::new(i, j));
        let a1m1 = a(1, m + 1);
        if a1m1 == 0 {
            return Err(Error::DenominatorVanished);
        }
        let forms: Vec<Vec<u64>> = (1..=rows).map(|i| (1..=m + 2).map(|j| a(i, j)).collect()).collect();
        let base_gens: Vec<u64> = self.base.minimal_nonfaces().iter().map(|g| mask_of(g)).collect();
        let susp_gens: Vec<u64> = self.suspension.minimal_nonfaces().iter().map(|g| mask_of(g)).collect();
        let mut b_gens = base_gens.clone();
        b_gens.push(1 << (m + 1));
        let g_forms: Vec<Vec<u64>> = (2..=rows)
            .map(|i| (1..=m).map(|j| f.sub(f.mul(a(1, j), a(i, m + 1)), f.mul(a1m1, a(i, j)))).collect())
            .collect();
        let inv = f.inv(a1m1)?;
        let omega = (1..=m).map(|i| f.neg(f.mul(a(1, i), inv))).collect();
        let top = self.n() + 1;
        Ok(Specialized {
            a: NumericQuotient::new(f, m + 2, &susp_gens, &forms, top + 2),
            b: NumericQuotient::new(f, m + 2, &b_gens, &forms, top + 1),
            c: NumericQuotient::new(f, m, &base_gens, &g_forms, top + 1),
            omega,
        })
    }

    /// Rank of `B_j → A_{j+1}`, `π_B(u) ↦ π_A(x_{m+1} u)`.
    pub fn m_injectivity_rank(&self, j: usize, seeds: &[u64]) -> Result<RankRow> {
        let m = self.m();
        agree(seeds, |s| {
            let sp = self.specialize(s)?;
            if j > sp.b.top() {
                return Ok(RankRow { degree: j, source_dim: 0, target_dim: 0, rank: 0 });
            }
            let rows: Vec<Vec<u64>> = sp
                .b
                .basis(j)
                .iter()
                .map(|b| {
                    let mut g = b.clone();
                    g[m] += 1;
                    sp.a.coords(j + 1, &sp.a.vector(j + 1, &[(g, 1)]))
                })
                .collect();
            Ok(RankRow { degree: j, source_dim: sp.b.dim(j), target_dim: sp.a.dim(j + 1), rank: linalg::rank(&self.field, &rows) })
        })
    }

    pub fn check_m_injectivity(&self, j: usize, seeds: &[u64]) -> Result<bool> {
        Ok(self.m_injectivity_rank(j, seeds)?.injective())
    }

    /// Ranks of multiplication by `ω` on `C`, every degree.
    pub fn omega_ranks(&self, seeds: &[u64]) -> Result<Vec<RankRow>> {
        let top = self.n() + 1;
        agree(seeds, |s| {
            let sp = self.specialize(s)?;
            Ok((0..top)
                .map(|d| RankRow {
                    degree: d,
                    source_dim: sp.c.dim(d),
                    target_dim: sp.c.dim(d + 1),
                    rank: linalg::rank(&self.field, &sp.c.mul_matrix(d, &sp.omega)),
                })
                .collect::<Vec<_>>())
        })
    }

    /// Weak Lefschetz: `ω` has maximal rank in every degree. The middle
    /// degree alone already decides it for Gorenstein `C`.
    pub fn check_wlp(&self, seeds: &[u64]) -> Result<LefschetzReport> {
        let table = self.omega_ranks(seeds)?;
        Ok(LefschetzReport { holds: table.iter().all(RankRow::max_rank), table })
    }

    /// Strong Lefschetz: `ω^{n+1−2i}: C_i → C_{n+1−i}` bijective for
    /// `0 ≤ 2i ≤ n+1`.
    pub fn check_slp(&self, seeds: &[u64]) -> Result<LefschetzReport> {
        let top = self.n() + 1;
        let table = agree(seeds, |s| {
            let sp = self.specialize(s)?;
            Ok((0..=top / 2)
                .map(|i| RankRow {
                    degree: i,
                    source_dim: sp.c.dim(i),
                    target_dim: sp.c.dim(top - i),
                    rank: linalg::rank(&self.field, &sp.c.power_matrix(i, &sp.omega, top - 2 * i)),
                })
                .collect::<Vec<_>>())
        })?;
        Ok(LefschetzReport { holds: table.iter().all(|r| r.injective() && r.source_dim == r.target_dim), table })
    }

    /// `ϕ: B → C` (`x_i ↦ x_i`, `x_{m+1} ↦ ω`, `x_{m+2} ↦ 0`) is a
    /// degree-preserving bijective algebra map, `π_B(x_{m+1}) = π_B(ω)`,
    /// and both socles sit in degree `n+1`.
    pub fn phi_isomorphism_check(&self, seeds: &[u64]) -> Result<bool> {
        agree(seeds, |s| {
            let sp = self.specialize(s)?;
            Ok(self.phi_at(&sp))
        })
    }

    fn phi_at(&self, sp: &Specialized<'_>) -> bool {
        let f = &self.field;
        let (m, top) = (self.m(), self.n() + 1);
        let dims_ok = (0..=top + 1).all(|d| sp.b.dim(d) == sp.c.dim(d)) && sp.b.dim(top) == 1 && sp.c.dim(top + 1) == 0;
        if !dims_ok {
            return false;
        }
        // x_{m+1} − ω vanishes in B_1
        let mut terms: Vec<(Vec<u8>, u64)> = Vec::new();
        let mut e = vec![0u8; m + 2];
        e[m] = 1;
        terms.push((e, 1));
        for (i, &w) in sp.omega.iter().enumerate() {
            let mut e = vec![0u8; m + 2];
            e[i] = 1;
            terms.push((e, f.neg(w)));
        }
        if sp.b.coords(1, &sp.b.vector(1, &terms)).iter().any(|&x| x != 0) {
            return false;
        }
        // ϕ on each B basis monomial, degree by degree
        let phi: Vec<Vec<Vec<u64>>> = (0..=top).map(|d| sp.b.basis(d).iter().map(|b| self.phi_monomial(sp, b)).collect()).collect();
        if (0..=top).any(|d| linalg::rank(f, &phi[d]) != sp.c.dim(d)) {
            return false;
        }
        // multiplicativity: ϕ(x_v b) = ϕ(x_v) ϕ(b)
        for d in 0..top {
            let to_c: Vec<Vec<u64>> = (0..=m).map(|v| self.phi_variable(sp, v)).collect();
            for (bi, b) in sp.b.basis(d).iter().enumerate() {
                for (v, form) in to_c.iter().enumerate() {
                    let mut g = b.clone();
                    g[v] += 1;
                    let lhs_b = sp.b.coords(d + 1, &sp.b.vector(d + 1, &[(g, 1)]));
                    let lhs = mat_vec(f, &lhs_b, &phi[d + 1], sp.c.dim(d + 1));
                    let rhs = mat_vec(f, &phi[d][bi], &sp.c.mul_matrix(d, form), sp.c.dim(d + 1));
                    if lhs != rhs {
                        return false;
                    }
                }
            }
        }
        true
    }

    /// Image of `x_{v+1}` as a linear form on `x_1..x_m`.
    fn phi_variable(&self, sp: &Specialized<'_>, v: usize) -> Vec<u64> {
        if v == self.m() {
            return sp.omega.clone();
        }
        let mut e = vec![0u64; self.m()];
        e[v] = 1;
        e
    }

    /// `ϕ(x^b)` in the standard coordinates of `C`.
    fn phi_monomial(&self, sp: &Specialized<'_>, b: &[u8]) -> Vec<u64> {
        let m = self.m();
        if b[m + 1] > 0 {
            return vec![0; sp.c.dim(b.iter().map(|&e| e as usize).sum())];
        }
        let k = b[m] as usize;
        let rest: Vec<u8> = b[..m].to_vec();
        let d0: usize = rest.iter().map(|&e| e as usize).sum();
        let v = sp.c.coords(d0, &sp.c.vector(d0, &[(rest, 1)]));
        let pm = sp.c.power_matrix(d0, &sp.omega, k);
        mat_vec(&self.field, &v, &pm, sp.c.dim(d0 + k))
    }

    /// Hilbert function of `C`.
    pub fn hilbert_c(&self, seeds: &[u64]) -> Result<Vec<usize>> {
        let top = self.n() + 1;
        agree(seeds, |s| {
            let sp = self.specialize(s)?;
            Ok((0..=top).map(|d| sp.c.dim(d)).collect::<Vec<_>>())
        })
    }
}

/// `rank(C_j → C_{j+1}) = rank(C_{n−j} → C_{n+1−j})` for every `j`.
pub fn ranks_symmetric(table: &[RankRow]) -> bool {
    let n = table.len();
    (0..n).all(|j| table[j].rank == table[n - 1 - j].rank)
}

/// Injective in some degree implies injective in every lower degree.
pub fn injectivity_monotone(table: &[RankRow]) -> bool {
    let last = table.iter().rposition(RankRow::injective);
    last.is_none_or(|s| table[..=s].iter().all(RankRow::injective))
}

#[cfg(test)]
mod tests {
    use super::*;

    const SEEDS: [u64; 2] = [11, 12];

    fn ctx(cx: SimplicialComplex) -> SuspensionContext {
        SuspensionContext::new(cx, FieldConfig::default()).unwrap()
    }

    #[test]
    fn square_suspension() {
        let s = ctx(SimplicialComplex::polygon(4).unwrap());
        assert_eq!(s.suspension().facets().len(), 8);
        assert_eq!(s.rows(), 3);
        assert!(s.verify_ideal_identity());
        assert_eq!(s.omega().len(), 4);
        for j in 0..=4 {
            assert!(s.check_m_injectivity(j, &SEEDS).unwrap(), "j={j}");
        }
        assert_eq!(s.hilbert_c(&SEEDS).unwrap(), vec![1, 2, 1]);
        assert!(s.phi_isomorphism_check(&SEEDS).unwrap());
    }

    #[test]
    fn lefschetz_small() {
        for cx in [SimplicialComplex::polygon(5).unwrap(), SimplicialComplex::boundary_simplex(2).unwrap()] {
            let s = ctx(cx);
            let w = s.check_wlp(&SEEDS).unwrap();
            assert!(w.holds);
            assert!(ranks_symmetric(&w.table));
            assert!(injectivity_monotone(&w.table));
            assert!(s.check_slp(&SEEDS).unwrap().holds);
        }
    }

    #[test]
    fn socle_row_of_injectivity() {
        let s = ctx(SimplicialComplex::polygon(4).unwrap());
        let r = s.m_injectivity_rank(2, &SEEDS).unwrap();
        assert_eq!((r.source_dim, r.rank), (1, 1));
        assert_eq!(s.m_injectivity_rank(7, &SEEDS).unwrap().source_dim, 0);
    }
}
