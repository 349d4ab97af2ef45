use facering::anisotropy::{bracket_valuation, polygon_gram, GramMatrix};
use facering::artinian::{ElementRep, ReductionContext, XMonomial};
use facering::complex::{mask_of, SimplicialComplex};
use facering::corpus;
use facering::diffop::{verify_simplex_quotient, DiffOperator};
use facering::field::{
    bracket, Evaluator, ExtField, FieldConfig, Frame, GenericMatrixSpec, Monomial, MonomialOrder, Polynomial,
    RationalFunction, VarIndex,
};
use facering::lefschetz::{injectivity_monotone, ranks_symmetric, SuspensionContext};
use facering::psi::Psi;
use proptest::prelude::*;
use proptest::sample::{select, subsequence};

const SEEDS: [u64; 2] = [0x11, 0x12];

fn cfg() -> ProptestConfig {
    ProptestConfig { cases: 24, ..ProptestConfig::default() }
}

fn poly_strategy(p: u32) -> impl Strategy<Value = Polynomial> {
    let term = (prop::collection::vec((1usize..=3, 1usize..=4, 1u32..=2), 0..3), 1..p);
    prop::collection::vec(term, 0..4).prop_map(move |terms| {
        Polynomial::from_terms(
            p,
            terms.into_iter().map(|(vars, c)| {
                (Monomial::from_pairs(vars.into_iter().map(|(i, j, e)| (VarIndex::new(i, j), e))), c)
            }),
        )
    })
}

fn with_char<S: Strategy<Value = Polynomial> + 'static>(
    f: impl Fn(u32) -> S + Clone + 'static,
) -> impl Strategy<Value = (u32, Polynomial, Polynomial, Polynomial)> {
    select(vec![2u32, 3, 5]).prop_flat_map(move |p| (Just(p), f(p), f(p), f(p)))
}

proptest! {
    #![proptest_config(cfg())]

    #[test]
    fn ring_axioms((p, f, g, h) in with_char(poly_strategy)) {
        prop_assert_eq!(f.add(&g), g.add(&f));
        prop_assert_eq!(f.mul(&g), g.mul(&f));
        prop_assert_eq!(f.mul(&g).mul(&h), f.mul(&g.mul(&h)));
        prop_assert_eq!(f.add(&g).mul(&h), f.mul(&h).add(&g.mul(&h)));
        prop_assert_eq!(f.add(&g).sub(&g), f.clone());
        prop_assert!(f.sub(&f).is_zero());
        prop_assert_eq!(f.mul(&Polynomial::one(p)), f);
    }

    #[test]
    fn initial_monomial_is_multiplicative((_p, f, g, _h) in with_char(poly_strategy)) {
        prop_assume!(!f.is_zero() && !g.is_zero());
        let ord = MonomialOrder::default_lex(3, 4);
        let prod = f.mul(&g).initial_monomial(&ord).unwrap();
        prop_assert_eq!(prod, f.initial_monomial(&ord).unwrap().mul(&g.initial_monomial(&ord).unwrap()));
    }

    #[test]
    fn eval_is_a_ring_map((p, f, g, _h) in with_char(poly_strategy), seed in any::<u64>()) {
        let field = ExtField::new(FieldConfig::new(p, 3).unwrap()).unwrap();
        let ev = Evaluator::new(&field, seed);
        let at = |q: &Polynomial| ev.poly(q);
        prop_assert_eq!(at(&f.mul(&g)), field.mul(at(&f), at(&g)));
        prop_assert_eq!(at(&f.add(&g)), field.add(at(&f), at(&g)));
    }

    #[test]
    fn bracket_swap_sign(p in select(vec![2u32, 3, 5]), cols in subsequence((1usize..=6).collect::<Vec<_>>(), 3), i in 0usize..2) {
        let mut swapped = cols.clone();
        swapped.swap(i, i + 1);
        let a = RationalFunction::bracket(p, &cols);
        let b = RationalFunction::bracket(p, &swapped);
        let want = if p == 2 { a.clone() } else { a.neg() };
        prop_assert!(b.equals(&want));
        let spec = GenericMatrixSpec::new(3, 6).unwrap();
        let (pa, pb) = (bracket(&spec, &cols, p).unwrap(), bracket(&spec, &swapped, p).unwrap());
        prop_assert_eq!(pb, if p == 2 { pa } else { pa.neg() });
    }

    #[test]
    fn laplace_last_column(p in select(vec![2u32, 3, 7]), cols in subsequence((1usize..=6).collect::<Vec<_>>(), 3)) {
        let n = cols.len();
        let frame = Frame::generic(p, n);
        let spec = GenericMatrixSpec::new(n, 6).unwrap();
        let last = cols[n - 1];
        let mut acc = Polynomial::zero(p);
        for i in 1..=n {
            let rows: Vec<usize> = (1..=n).filter(|&r| r != i).collect();
            let term = Polynomial::var(p, VarIndex::new(i, last)).mul(&frame.minor(&rows, &cols[..n - 1]));
            acc = if (i + n) % 2 == 0 { acc.add(&term) } else { acc.sub(&term) };
        }
        prop_assert_eq!(acc, bracket(&spec, &cols, p).unwrap());
    }

    #[test]
    fn rational_equality_is_an_equivalence(
        p in select(vec![2u32, 3]),
        a in subsequence((1usize..=5).collect::<Vec<_>>(), 2),
        b in subsequence((1usize..=5).collect::<Vec<_>>(), 2),
        c in subsequence((1usize..=5).collect::<Vec<_>>(), 2),
    ) {
        let (ba, bb, bc) = (RationalFunction::bracket(p, &a), RationalFunction::bracket(p, &b), RationalFunction::bracket(p, &c));
        let r = ba.div(&bb).unwrap();
        let r2 = r.mul(&bc).div(&bc).unwrap();
        let r3 = ba.mul(&bc).div(&bb.mul(&bc)).unwrap();
        prop_assert!(r.equals(&r));
        prop_assert!(r.equals(&r2) && r2.equals(&r3) && r.equals(&r3));
        prop_assert!(r.sub(&r2).is_zero());
    }
}

fn complex_strategy() -> impl Strategy<Value = SimplicialComplex> {
    (select(corpus::NAMES.to_vec()), 0usize..=1).prop_filter_map("vertex cap", |(name, k)| {
        let mut c = corpus::by_name(name).ok()?;
        for _ in 0..k {
            c = c.suspension();
        }
        (c.m() <= 10).then_some(c)
    })
}

proptest! {
    #![proptest_config(cfg())]

    #[test]
    fn sphere_invariants(c in complex_strategy()) {
        let rank = c.rank();
        prop_assert!(c.is_closed_pseudomanifold());
        for ridge in c.faces_of_size(rank - 1) {
            let m = mask_of(&ridge);
            prop_assert_eq!(c.facet_masks().iter().filter(|&&f| f & m == m).count(), 2);
        }
        let h = c.h_vector();
        prop_assert!(h.iter().eq(h.iter().rev()));
        let s = c.suspension();
        prop_assert_eq!(s.n(), c.n() + 1);
        prop_assert_eq!(s.facets().len(), 2 * c.facets().len());
        for v in c.vertices() {
            prop_assert!(c.link(&[v]).unwrap().is_closed_pseudomanifold() || rank == 1);
        }
    }

    #[test]
    fn facet_paths_are_adjacent(c in complex_strategy(), i in any::<prop::sample::Index>(), j in any::<prop::sample::Index>()) {
        let fs = c.facets();
        let (a, b) = (&fs[i.index(fs.len())], &fs[j.index(fs.len())]);
        let path = c.facet_path(a, b).unwrap();
        prop_assert_eq!(path.first().unwrap(), a);
        prop_assert_eq!(path.last().unwrap(), b);
        for w in path.windows(2) {
            let common = (mask_of(&w[0]) & mask_of(&w[1])).count_ones() as usize;
            prop_assert_eq!(common, c.n());
        }
    }
}

fn small_context(p: u32) -> impl Strategy<Value = (String, u32)> {
    select(vec!["polygon4", "polygon5", "simplex2", "octahedron"]).prop_map(move |n| (n.to_string(), p))
}

fn context(name: &str, p: u32) -> ReductionContext {
    ReductionContext::new(corpus::by_name(name).unwrap(), FieldConfig::with_char(p).unwrap()).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 16, ..ProptestConfig::default() })]

    #[test]
    fn reduction_respects_products(
        (name, p) in select(vec![2u32, 3]).prop_flat_map(small_context),
        picks in prop::collection::vec(any::<prop::sample::Index>(), 8),
        split in any::<prop::sample::Index>(),
    ) {
        let ctx = context(&name, p);
        let psi = Psi::new(&ctx).unwrap();
        let m = ctx.m();
        let d = ctx.rows();
        let verts: Vec<u32> = picks[..d].iter().map(|i| i.index(m as usize) as u32 + 1).collect();
        let k = split.index(d + 1);
        let mono = |vs: &[u32]| vs.iter().fold(XMonomial::one(m), |acc, &v| acc.mul(&XMonomial::from_pairs(m, &[(v, 1)])));
        let (g, h) = (mono(&verts[..k]), mono(&verts[k..]));
        let u = ctx.reduce_to_squarefree(&g).unwrap();
        let w = ctx.reduce_to_squarefree(&h).unwrap();
        let via_parts = psi.element(&ctx.multiply(&u, &w).unwrap()).unwrap();
        prop_assert!(via_parts.equals(&psi.monomial(&g.mul(&h)).unwrap()));
    }

    #[test]
    fn sum_formula_consistency(name in select(vec!["polygon5", "simplex2", "octahedron", "triangle"]), f in any::<prop::sample::Index>(), t in any::<prop::sample::Index>()) {
        let ctx = context(name, 2);
        let psi = Psi::new(&ctx).unwrap();
        let cx = ctx.complex();
        let sigma = &cx.facets()[f.index(cx.facets().len())];
        let d = ctx.rows();
        let t1 = t.index(d / 2 + 1);
        let (tau1, rest) = sigma.split_at(t1);
        let tau2 = &rest[..d - 2 * t1];
        let pairs: Vec<(u32, u32)> = tau1.iter().map(|&v| (v, 2)).chain(tau2.iter().map(|&v| (v, 1))).collect();
        let want = psi.monomial(&XMonomial::from_pairs(cx.m(), &pairs)).unwrap();
        let r = cx.m() as usize + 1;
        prop_assert!(psi.sum_formula(tau1, tau2, r).unwrap().equals(&want));
        prop_assert!(psi.sum_formula(tau1, tau2, r + 1).unwrap().equals(&want));
        prop_assert!(psi.sum_formula_specialized(tau1, tau2, r).unwrap().equals(&want));
    }
}

#[test]
fn socle_and_facets() {
    for (name, c) in corpus::all() {
        if c.m() > 8 {
            continue;
        }
        let ctx = ReductionContext::char2(c);
        let hf = ctx.hilbert_function(&SEEDS).unwrap();
        assert_eq!(hf[ctx.rows()], 1, "{name}");
        assert!(hf.get(ctx.rows() + 1).is_none_or(|&d| d == 0), "{name}");
        let psi = Psi::new(&ctx).unwrap();
        for f in ctx.complex().facets() {
            assert!(!psi.facet(f).unwrap().is_zero(), "{name} {f:?}");
        }
    }
}

fn bracket_product(p: u32, cols: &[Vec<usize>]) -> RationalFunction {
    cols.iter().fold(RationalFunction::one(p), |acc, c| acc.mul(&RationalFunction::bracket(p, c)))
}

fn pair_strategy() -> impl Strategy<Value = Vec<usize>> {
    subsequence((1usize..=5).collect::<Vec<_>>(), 2)
}

proptest! {
    #![proptest_config(cfg())]

    #[test]
    fn operator_order_is_irrelevant(
        num in prop::collection::vec(pair_strategy(), 1..3),
        den in prop::collection::vec(pair_strategy(), 0..3),
        col in 1u32..=5,
    ) {
        let f = bracket_product(2, &num).div(&bracket_product(2, &den)).unwrap();
        let op = DiffOperator::sigma(1, &[col]).unwrap();
        let mut rev = op.vars().to_vec();
        rev.reverse();
        let rop = DiffOperator::new(rev).unwrap();
        let frame = Frame::generic(2, 2);
        prop_assert!(op.apply(&f, &frame).unwrap().equals(&rop.apply(&f, &frame).unwrap()));
    }

    #[test]
    fn squares_pass_through(
        sq in prop::collection::vec(pair_strategy(), 1..3),
        g in prop::collection::vec(pair_strategy(), 1..3),
        den in pair_strategy(),
        col in 1u32..=5,
    ) {
        let f = bracket_product(2, &sq).add(&RationalFunction::bracket(2, &den));
        let g = bracket_product(2, &g).div(&RationalFunction::bracket(2, &den)).unwrap();
        let op = DiffOperator::sigma(1, &[col]).unwrap();
        let frame = Frame::generic(2, 2);
        let lhs = op.apply(&f.square().mul(&g), &frame).unwrap();
        prop_assert!(lhs.equals(&f.square().mul(&op.apply(&g, &frame).unwrap())));
    }

    #[test]
    fn linear_over_squares(
        l1 in prop::collection::vec(pair_strategy(), 1..3),
        l2 in prop::collection::vec(pair_strategy(), 1..3),
        f1 in prop::collection::vec(pair_strategy(), 1..3),
        f2 in prop::collection::vec(pair_strategy(), 1..3),
        col in 1u32..=5,
    ) {
        let (l1, l2) = (bracket_product(2, &l1), bracket_product(2, &l2));
        let (f1, f2) = (bracket_product(2, &f1), bracket_product(2, &f2));
        let op = DiffOperator::sigma(1, &[col]).unwrap();
        let frame = Frame::generic(2, 2);
        let lhs = op.apply(&l1.square().mul(&f1).add(&l2.square().mul(&f2)), &frame).unwrap();
        let rhs = l1.square().mul(&op.apply(&f1, &frame).unwrap()).add(&l2.square().mul(&op.apply(&f2, &frame).unwrap()));
        prop_assert!(lhs.equals(&rhs));
    }

    #[test]
    fn simplex_quotients_odd(s in subsequence(vec![1u32, 2, 3, 4, 5], 0..=5)) {
        prop_assert!(verify_simplex_quotient(&[1, 2], &[3, 4, 5], None, &s).unwrap().equal);
        let s1: Vec<u32> = s.iter().copied().filter(|&v| v <= 3).collect();
        prop_assert!(verify_simplex_quotient(&[1], &[2, 3], None, &s1).unwrap().equal);
    }

    #[test]
    fn simplex_quotients_even(s in subsequence(vec![2u32, 3, 4], 0..=3)) {
        prop_assert!(verify_simplex_quotient(&[2], &[3, 4], Some(1), &s).unwrap().equal);
    }
}

fn random_basis_change(m: usize, picks: &[(bool, Vec<usize>)]) -> Vec<Vec<RationalFunction>> {
    let mut it = picks.iter().cycle();
    (0..m)
        .map(|i| {
            (0..m)
                .map(|j| {
                    let (on, cols) = it.next().unwrap();
                    match i.cmp(&j) {
                        std::cmp::Ordering::Equal => RationalFunction::bracket(2, cols),
                        std::cmp::Ordering::Less if *on => RationalFunction::bracket(2, cols),
                        _ => RationalFunction::zero(2),
                    }
                })
                .collect()
        })
        .collect()
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 12, ..ProptestConfig::default() })]

    #[test]
    fn valuation_parity_survives_basis_change(
        m in 4u32..=5,
        picks in prop::collection::vec((any::<bool>(), pair_strategy()), 9),
    ) {
        let ctx = ReductionContext::char2(SimplicialComplex::polygon(m).unwrap());
        let psi = Psi::new(&ctx).unwrap();
        let h = polygon_gram(&psi).unwrap();
        let moved: GramMatrix = h.conjugate(&random_basis_change(h.size(), &picks));
        prop_assert!(moved.is_symmetric());
        let (d0, d1) = (h.det(), moved.det());
        for c in 1..m {
            for d in c + 1..=m {
                let v0 = bracket_valuation(&d0, &[c, d]).unwrap();
                let v1 = bracket_valuation(&d1, &[c, d]).unwrap();
                prop_assert_eq!((v0 - v1).rem_euclid(2), 0, "[{},{}]", c, d);
            }
        }
    }
}

#[test]
fn lefschetz_rank_tables_are_symmetric_and_monotone() {
    for name in ["triangle", "polygon4", "polygon5", "simplex2"] {
        let sc = SuspensionContext::new(corpus::by_name(name).unwrap(), FieldConfig::default()).unwrap();
        let table = sc.omega_ranks(&SEEDS).unwrap();
        assert!(ranks_symmetric(&table), "{name}");
        assert!(injectivity_monotone(&table), "{name}");
        let wlp = sc.check_wlp(&SEEDS).unwrap();
        assert!(injectivity_monotone(&wlp.table), "{name}");
    }
}

#[test]
fn element_zero_is_zero() {
    let ctx = ReductionContext::char2(SimplicialComplex::polygon(4).unwrap());
    let psi = Psi::new(&ctx).unwrap();
    assert!(psi.element(&ElementRep::zero(2)).unwrap().is_trivially_zero());
}
