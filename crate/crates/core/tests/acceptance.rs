//! The ten acceptance criteria, one PASS/FAIL line each.
//!
//! Runs without the libtest harness so the lines come out in order. The
//! time budget for the order-5 minor identity is read from
//! `FACERING_BUDGET_SECS` (default 300).

use std::process::ExitCode;
use std::time::{Duration, Instant};

use facering::anisotropy::{
    certificate_degree, certify_degree, polygon_anisotropy_proof, polygon_det_closed_form, polygon_gram_det,
    verify_orthogonal_basis,
};
use facering::artinian::{ReductionContext, XMonomial};
use facering::complex::{subsets, SimplicialComplex};
use facering::corpus;
use facering::diffop::{
    square_identity_instances, verify_minor_identity, verify_square_identity_even, verify_square_identity_odd,
    DiffOperator, MinorFamily,
};
use facering::field::{FieldConfig, Frame, RationalFunction};
use facering::lefschetz::SuspensionContext;
use facering::psi::{test_monomials, Psi};

const SEEDS: [u64; 2] = [0x5eed_0001, 0x5eed_0002];

type Check = Result<(), String>;

fn br(c: &[usize]) -> RationalFunction {
    RationalFunction::bracket(2, c)
}

fn q(num: RationalFunction, den: RationalFunction) -> RationalFunction {
    num.div(&den).expect("nonzero denominator")
}

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Check {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn within(t: Instant, limit: Duration, what: &str) -> Check {
    let e = t.elapsed();
    ensure(e <= limit, || format!("{what} took {e:.2?}, limit {limit:?}"))
}

fn err(e: facering::Error) -> String {
    e.to_string()
}

fn spheres() -> Vec<(&'static str, SimplicialComplex)> {
    corpus::all()
}

fn criterion_1() -> Check {
    for m in 3..=8u32 {
        let t = Instant::now();
        let ctx = ReductionContext::char2(SimplicialComplex::polygon(m).map_err(err)?);
        let psi = Psi::new(&ctx).map_err(err)?;
        let want = q(br(&[1, 3]), br(&[1, 2]).mul(&br(&[2, 3])));
        let a = psi.codim1_square(&[], 2).map_err(err)?;
        let b = psi.sum_formula(&[2], &[], m as usize + 1).map_err(err)?;
        ensure(a.equals(&want), || format!("m={m}: codim-1 value {a}"))?;
        ensure(b.equals(&want), || format!("m={m}: H-sum {b}"))?;
        within(t, Duration::from_secs(1), &format!("m={m}"))?;
    }
    Ok(())
}

fn criterion_2() -> Check {
    let t = Instant::now();
    let ctx = ReductionContext::char2(corpus::join7());
    let psi = Psi::new(&ctx).map_err(err)?;
    let r = 8;
    let h = |a: usize, b: usize| {
        let num = br(&[1, a, b, r]).mul(&br(&[3, a, b, r]));
        let den = br(&[1, 3, a, b]).mul(&br(&[1, 3, a, r])).mul(&br(&[1, 3, b, r]));
        q(num, den)
    };
    let quoted = h(4, 6).add(&h(6, 5)).add(&h(5, 7)).add(&h(7, 4));
    let via_reduction = psi.monomial(&XMonomial::from_pairs(7, &[(1, 2), (3, 2)])).map_err(err)?;
    let via_sum = psi.sum_formula(&[1, 3], &[], r).map_err(err)?;
    ensure(via_reduction.equals(&quoted), || format!("reduction gives {via_reduction}"))?;
    ensure(via_sum.equals(&quoted), || format!("H-sum gives {via_sum}"))?;
    within(t, Duration::from_secs(10), "join7")
}

fn criterion_3() -> Check {
    let budget: u64 = std::env::var("FACERING_BUDGET_SECS").ok().and_then(|s| s.parse().ok()).unwrap_or(300);
    let cases = [
        (MinorFamily::N, 2, 1),
        (MinorFamily::P, 2, 1),
        (MinorFamily::Q, 3, 1),
        (MinorFamily::N, 4, 60),
        (MinorFamily::Q, 5, budget),
    ];
    for (f, h, limit) in cases {
        let t = Instant::now();
        let c = verify_minor_identity(f, h).map_err(err)?;
        ensure(c.holds, || format!("{f:?} h={h} fails: {:?}", c.witness))?;
        within(t, Duration::from_secs(limit), &format!("{f:?} h={h}"))?;
    }
    Ok(())
}

fn criterion_4() -> Check {
    for m in 3..=8u32 {
        let t = Instant::now();
        let ctx = ReductionContext::char2(SimplicialComplex::polygon(m).map_err(err)?);
        let psi = Psi::new(&ctx).map_err(err)?;
        let x22 = q(br(&[1, 3]), br(&[1, 2]).mul(&br(&[2, 3])));
        let r = m as usize + 1;
        let frame = Frame::generic(2, 2);
        let d1 = DiffOperator::sigma(1, &[1]).map_err(err)?.apply(&x22, &frame).map_err(err)?;
        ensure(d1.equals(&br(&[1, 2]).square().inv().map_err(err)?), || format!("m={m}: ∂{{1}} = {d1}"))?;
        let d2 = DiffOperator::sigma(1, &[2]).map_err(err)?.apply(&x22, &frame).map_err(err)?;
        let want2 = q(br(&[1, 3]).square(), br(&[1, 2]).square().mul(&br(&[2, 3]).square()));
        ensure(d2.equals(&want2), || format!("m={m}: ∂{{2}} = {d2}"))?;
        for s in [1u32, 2] {
            let c = verify_square_identity_odd(&psi, &[s], &[2], r).map_err(err)?;
            ensure(c.equal, || format!("m={m}: σ={{{s}}} square rule"))?;
        }
        if m >= 4 {
            let c = verify_square_identity_odd(&psi, &[4], &[2], r).map_err(err)?;
            ensure(c.equal && c.lhs.is_zero(), || format!("m={m}: ∂{{4}} = {}", c.lhs))?;
        }
        within(t, Duration::from_secs(1), &format!("polygon m={m}"))?;
    }
    let t = Instant::now();
    let ctx = ReductionContext::char2(SimplicialComplex::boundary_simplex(2).map_err(err)?);
    let psi = Psi::new(&ctx).map_err(err)?;
    let base = psi.monomial(&XMonomial::from_pairs(4, &[(2, 2), (1, 1)])).map_err(err)?;
    ensure(base.equals(&q(br(&[1, 3, 4]), br(&[1, 2, 3]).mul(&br(&[1, 2, 4])))), || format!("x_2^2 x_1 = {base}"))?;
    let want = [
        (2u32, q(br(&[1, 3, 4]).square(), br(&[1, 2, 3]).square().mul(&br(&[1, 2, 4]).square()))),
        (3, br(&[1, 2, 3]).square().inv().map_err(err)?),
        (4, br(&[1, 2, 4]).square().inv().map_err(err)?),
    ];
    for (s, w) in want {
        let c = verify_square_identity_even(&psi, 1, &[s], &[2], 5).map_err(err)?;
        ensure(c.equal && c.lhs.equals(&w), || format!("σ={{{s}}}: {}", c.lhs))?;
    }
    within(t, Duration::from_secs(1), "tetrahedron")
}

fn criterion_5() -> Check {
    let mut list: Vec<SimplicialComplex> = (4..=6).map(|m| SimplicialComplex::polygon(m).unwrap()).collect();
    list.push(SimplicialComplex::boundary_simplex(2).unwrap());
    list.push(SimplicialComplex::boundary_simplex(3).unwrap());
    list.push(corpus::octahedron());
    for cx in list {
        let ctx = ReductionContext::char2(cx);
        let psi = Psi::new(&ctx).map_err(err)?;
        let r = ctx.m() as usize + 1;
        for (p, s, t) in square_identity_instances(&ctx) {
            let c = match p {
                None => verify_square_identity_odd(&psi, &s, &t, r),
                Some(p) => verify_square_identity_even(&psi, p, &s, &t, r),
            }
            .map_err(err)?;
            ensure(c.equal, || format!("m={} p={p:?} σ={s:?} τ={t:?}: {} ≠ {}", ctx.m(), c.lhs, c.rhs))?;
        }
    }
    Ok(())
}

fn criterion_6() -> Check {
    let t = Instant::now();
    for p in [2, 3, 5] {
        let cfg = FieldConfig::with_char(p).map_err(err)?;
        for m in 3..=8u32 {
            let ctx = ReductionContext::new(SimplicialComplex::polygon(m).map_err(err)?, cfg).map_err(err)?;
            let psi = Psi::new(&ctx).map_err(err)?;
            let d = polygon_gram_det(&psi).map_err(err)?;
            ensure(d.equals(&polygon_det_closed_form(p, m as usize)), || format!("p={p} m={m}: det {d}"))?;
            let (_, ok) = verify_orthogonal_basis(&psi).map_err(err)?;
            ensure(ok, || format!("p={p} m={m}: orthogonal basis"))?;
        }
    }
    for m in 3..=12 {
        let pr = polygon_anisotropy_proof(m).map_err(err)?;
        ensure(pr.holds, || format!("m={m}: initial terms {:?}", pr.initial_exponents))?;
    }
    within(t, Duration::from_secs(120), "polygon suite")
}

fn criterion_7() -> Check {
    let t = Instant::now();
    for (name, cx) in spheres() {
        let h: Vec<usize> = cx.h_vector().iter().map(|&x| x as usize).collect();
        let ctx = ReductionContext::char2(cx);
        let hf = ctx.hilbert_function(&SEEDS).map_err(err)?;
        ensure(hf == h, || format!("{name}: Hilbert {hf:?}, h-vector {h:?}"))?;
    }
    within(t, Duration::from_secs(30), "Hilbert functions")
}

fn criterion_8() -> Check {
    for (name, cx) in spheres() {
        let ctx = ReductionContext::char2(cx);
        let psi = Psi::new(&ctx).map_err(err)?;
        let m = ctx.m();
        let (r1, r2) = (m as usize + 1, m as usize + 2);
        let verts: Vec<u32> = (1..=m).collect();
        for s in subsets(&verts, ctx.rows()) {
            let v = psi.monomial(&XMonomial::from_face(m, &s)).map_err(err)?;
            if !ctx.complex().is_face(&s) {
                ensure(v.is_trivially_zero() || v.is_zero(), || format!("{name}: non-face {s:?} gives {v}"))?;
                continue;
            }
            for r in [r1, r2] {
                let h = psi.sum_formula(&[], &s, r).map_err(err)?;
                ensure(v.equals(&h), || format!("{name}: x_{s:?}, r={r}: {v} vs {h}"))?;
            }
        }
        let (_, squares) = test_monomials(&ctx);
        for (c, b) in squares {
            let g = XMonomial::square_times(m, &[c], &b);
            let v = psi.monomial(&g).map_err(err)?;
            let direct = psi.codim1_square(&b, c).map_err(err)?;
            ensure(v.equals(&direct), || format!("{name}: x_{c}^2 x_{b:?}: {v} vs {direct}"))?;
            for r in [r1, r2] {
                let h = psi.sum_formula(&[c], &b, r).map_err(err)?;
                ensure(v.equals(&h), || format!("{name}: x_{c}^2 x_{b:?}, r={r}: {v} vs {h}"))?;
            }
        }
    }
    Ok(())
}

fn criterion_9() -> Check {
    let t = Instant::now();
    let mut list: Vec<(String, SimplicialComplex)> =
        (4..=8).map(|m| (format!("polygon{m}"), SimplicialComplex::polygon(m).unwrap())).collect();
    list.push(("simplex2".into(), SimplicialComplex::boundary_simplex(2).unwrap()));
    list.push(("simplex3".into(), SimplicialComplex::boundary_simplex(3).unwrap()));
    list.push(("octahedron".into(), corpus::octahedron()));
    for (name, cx) in list {
        let s = SuspensionContext::new(cx, FieldConfig::default()).map_err(err)?;
        let w = s.check_wlp(&SEEDS).map_err(err)?;
        ensure(w.holds, || format!("{name}: WLP table {:?}", w.table))?;
        let l = s.check_slp(&SEEDS).map_err(err)?;
        ensure(l.holds, || format!("{name}: SLP table {:?}", l.table))?;
    }
    within(t, Duration::from_secs(120), "Lefschetz suite")
}

fn criterion_10() -> Check {
    for (name, cx) in spheres() {
        let ctx = ReductionContext::char2(cx);
        let psi = Psi::new(&ctx).map_err(err)?;
        for j in 0..=certificate_degree(ctx.n()) {
            let certs = certify_degree(&psi, j, &SEEDS).map_err(|e| format!("{name}, degree {j}: {e}"))?;
            ensure(!certs.is_empty(), || format!("{name}: empty basis in degree {j}"))?;
            ensure(certs.iter().all(|(_, c)| c.square_nonzero), || format!("{name}: a square vanishes in degree {j}"))?;
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    let criteria: [(&str, fn() -> Check); 10] = [
        ("polygon x_2^2: codimension-1 value and H-sum", criterion_1),
        ("seven-vertex join: x_1^2 x_3^2 as four H-terms", criterion_2),
        ("minor-product identities N2 P2 Q3 N4 Q5", criterion_3),
        ("worked derivative values on polygons and the tetrahedron", criterion_4),
        ("square identities for every valid instance", criterion_5),
        ("polygon Gram determinant, orthogonal basis, initial terms", criterion_6),
        ("Hilbert function equals h-vector", criterion_7),
        ("socle functional: reduction path vs H-sums, r-independence", criterion_8),
        ("weak and strong Lefschetz through the suspension", criterion_9),
        ("nonzero-square certificates on every basis monomial", criterion_10),
    ];
    let mut failed = 0;
    for (i, (name, f)) in criteria.iter().enumerate() {
        let t = Instant::now();
        let res = f();
        let secs = t.elapsed().as_secs_f64();
        match res {
            Ok(()) => println!("PASS {:>2} {name} ({secs:.2}s)", i + 1),
            Err(why) => {
                failed += 1;
                println!("FAIL {:>2} {name} ({secs:.2}s): {why}", i + 1);
            }
        }
    }
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
