use std::sync::mpsc;
use std::time::{Duration, Instant};

use facering::anisotropy::{
    certificate_degree, certify_degree, polygon_anisotropy_proof, sample_combinations, polygon_det_closed_form, polygon_gram,
    recover_polygon_from_form, verify_orthogonal_basis,
};
use facering::artinian::{ReductionContext, XMonomial};
use facering::complex::SimplicialComplex;
use facering::corpus;
use facering::diffop::{
    probe_conjecture, square_identity_instances, verify_minor_identity, verify_minor_identity_random,
    verify_square_identity_even, verify_square_identity_odd, MinorCheck, MinorFamily,
};
use facering::field::{FieldConfig, RationalFunction};
use facering::lefschetz::SuspensionContext;
use facering::psi::{test_monomials, Psi};
use facering::{Error, Result};
use serde_json::{json, Value};

use crate::report::CheckResult;

/// Largest order checked symbolically; above it the randomized route is used.
pub const EXACT_MAX_ORDER: usize = 5;

pub struct Named {
    pub name: String,
    pub complex: SimplicialComplex,
}

impl Named {
    pub fn builtin(name: &str) -> Result<Self> {
        Ok(Named { name: name.to_string(), complex: corpus::by_name(name)? })
    }
}

/// Everything a suite needs besides its own arguments.
pub struct Env {
    pub complex: Option<Named>,
    /// Characteristic given on the command line, if any.
    pub char: Option<u32>,
    pub ext_degree: Option<u32>,
    pub seeds: Vec<u64>,
    pub deadline: Instant,
    pub checks: Vec<CheckResult>,
    pub times: Vec<(String, Duration)>,
}

impl Env {
    pub fn field_config(&self, p: u32) -> Result<FieldConfig> {
        match self.ext_degree {
            Some(w) => FieldConfig::new(p, w),
            None => FieldConfig::with_char(p),
        }
    }

    pub fn config(&self) -> Result<FieldConfig> {
        self.field_config(self.char.unwrap_or(2))
    }

    fn complex(&self) -> Result<&Named> {
        self.complex.as_ref().ok_or_else(|| Error::Config("this command needs --complex".into()))
    }

    fn context(&self) -> Result<ReductionContext> {
        ReductionContext::new(self.complex()?.complex.clone(), self.config()?)
    }

    fn remaining(&self) -> Duration {
        self.deadline.saturating_duration_since(Instant::now())
    }

    fn out_of_time(&self) -> bool {
        Instant::now() >= self.deadline
    }

    fn push(&mut self, check: CheckResult, started: Instant) {
        self.times.push((check.name.clone(), started.elapsed()));
        self.checks.push(check);
    }
}

fn text(f: &RationalFunction) -> Value {
    Value::from(f.to_text())
}

fn pair(lhs: &RationalFunction, rhs: &RationalFunction) -> Value {
    json!({ "lhs": lhs.to_text(), "rhs": rhs.to_text() })
}

fn monomial_name(sq: &[u32], lin: &[u32]) -> String {
    let mut parts: Vec<String> = sq.iter().map(|v| format!("x{v}^2")).collect();
    parts.extend(lin.iter().map(|v| format!("x{v}")));
    if parts.is_empty() {
        "1".into()
    } else {
        parts.join("*")
    }
}

pub fn hilbert(env: &mut Env) -> Result<()> {
    let t = Instant::now();
    let ctx = env.context()?;
    let hf = ctx.hilbert_function(&env.seeds)?;
    let h: Vec<i64> = ctx.complex().h_vector();
    let pass = hf.iter().map(|&x| x as i64).eq(h.iter().copied());
    let name = format!("hilbert {}", env.complex()?.name);
    let check = CheckResult::new(name, pass).detail(json!(hf)).witness(json!({ "hilbert": hf, "h_vector": h }));
    env.push(check, t);
    Ok(())
}

pub fn psi_crosscheck(env: &mut Env) -> Result<()> {
    let ctx = env.context()?;
    let psi = Psi::new(&ctx)?;
    let char2 = ctx.characteristic() == 2;
    let m = ctx.m();
    let rs = [m as usize + 1, m as usize + 2];
    if !char2 {
        let t = Instant::now();
        env.push(CheckResult::new("facet signs path-independent", psi.signs_consistent()), t);
    }
    let (facets, squares) = test_monomials(&ctx);
    let shapes = facets
        .into_iter()
        .map(|f| (None, f))
        .chain(squares.into_iter().map(|(c, b)| (Some(c), b)));
    for (c, b) in shapes {
        let t = Instant::now();
        let sq: Vec<u32> = c.into_iter().collect();
        let name = monomial_name(&sq, &b);
        let via_reduction = psi.monomial(&XMonomial::square_times(m, &sq, &b))?;
        let direct = match c {
            None => psi.facet(&b)?,
            Some(c) => psi.codim1_square(&b, c)?,
        };
        let mut failures = Vec::new();
        if !via_reduction.try_equals(&direct)? {
            failures.push(json!({ "against": "direct", "lhs": via_reduction.to_text(), "rhs": direct.to_text() }));
        }
        if char2 {
            for r in rs {
                let h = psi.sum_formula(&sq, &b, r)?;
                if !via_reduction.try_equals(&h)? {
                    failures.push(json!({ "against": format!("H-sum r={r}"), "lhs": via_reduction.to_text(), "rhs": h.to_text() }));
                }
            }
        }
        let check = CheckResult::new(format!("psi {name}"), failures.is_empty())
            .detail(text(&via_reduction))
            .witness(Value::from(failures));
        env.push(check, t);
    }
    Ok(())
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, clap::ValueEnum)]
pub enum Family {
    /// Minor-product identities for the N, P and Q operators.
    Thm86,
    /// Square identities in odd dimension.
    Prop51,
    /// Square identities in even dimension.
    Prop57,
    /// The modified-operator conjecture probe.
    Conj141,
}

pub fn verify_identities(env: &mut Env, family: Family, max_order: usize) -> Result<()> {
    match family {
        Family::Thm86 => minor_identities(env, max_order),
        Family::Prop51 => square_identities(env, true, max_order),
        Family::Prop57 => square_identities(env, false, max_order),
        Family::Conj141 => conj141_probe(env, false),
    }
}

fn padded_seeds(seeds: &[u64]) -> Vec<u64> {
    let mut s = seeds.to_vec();
    while s.len() < 3 {
        let next = s.last().copied().unwrap_or(1).wrapping_add(0x9e37_79b9);
        s.push(next);
    }
    s
}

fn minor_check_result(c: MinorCheck, note: Option<&str>) -> CheckResult {
    let method = match (&c.method, note) {
        (facering::diffop::Method::Exact, _) => "exact".to_string(),
        (_, None) => "probabilistic".to_string(),
        (_, Some(n)) => format!("probabilistic, {n}"),
    };
    let name = format!("{:?}{}", c.family, c.h);
    let witness = c.witness.as_ref().map(|(l, r)| json!({ "lhs": l, "rhs": r }));
    let mut r = CheckResult::new(name, c.holds).method(method);
    if c.method != facering::diffop::Method::Exact {
        r = r.detail(json!({ "seeds": c.seeds }));
    }
    match witness {
        Some(w) => r.witness(w),
        None => r,
    }
}

fn minor_identities(env: &mut Env, max_order: usize) -> Result<()> {
    let seeds = padded_seeds(&env.seeds);
    for h in 2..=max_order {
        let families: &[MinorFamily] = if h % 2 == 0 { &[MinorFamily::N, MinorFamily::P] } else { &[MinorFamily::Q] };
        for &f in families {
            let t = Instant::now();
            if h > EXACT_MAX_ORDER {
                let c = verify_minor_identity_random(f, h, &seeds)?;
                env.push(minor_check_result(c, None), t);
                continue;
            }
            let (tx, rx) = mpsc::channel();
            std::thread::spawn(move || {
                let _ = tx.send(verify_minor_identity(f, h));
            });
            match rx.recv_timeout(env.remaining()) {
                Ok(c) => env.push(minor_check_result(c?, None), t),
                Err(_) => {
                    let c = verify_minor_identity_random(f, h, &seeds)?;
                    env.push(minor_check_result(c, Some("exact check exceeded the budget")), t);
                }
            }
        }
    }
    Ok(())
}

/// Complexes swept when `--complex` is absent.
const SQUARE_DEFAULTS: [&str; 7] = ["triangle", "polygon4", "polygon5", "polygon6", "simplex2", "octahedron", "simplex3"];

fn square_identities(env: &mut Env, odd: bool, max_order: usize) -> Result<()> {
    let targets: Vec<Named> = match &env.complex {
        Some(c) => vec![Named { name: c.name.clone(), complex: c.complex.clone() }],
        None => SQUARE_DEFAULTS
            .iter()
            .map(|n| Named::builtin(n))
            .collect::<Result<Vec<_>>>()?
            .into_iter()
            .filter(|c| (c.complex.n() % 2 == 1) == odd && c.complex.rank() <= max_order)
            .collect(),
    };
    let cfg = env.config()?;
    for target in targets {
        let n = target.complex.n();
        if (n % 2 == 1) != odd {
            let want = if odd { "odd" } else { "even" };
            return Err(Error::Config(format!("{} has dimension {n}; this family needs {want} dimension", target.name)));
        }
        let t = Instant::now();
        let ctx = ReductionContext::new(target.complex, cfg)?;
        let psi = Psi::new(&ctx)?;
        let r = ctx.m() as usize + 1;
        let instances = square_identity_instances(&ctx);
        let total = instances.len();
        let mut done = 0;
        let mut witness = None;
        for (p, s, tau) in instances {
            if env.out_of_time() {
                witness = Some(json!({ "budget": format!("exhausted after {done} of {total} instances") }));
                break;
            }
            let c = match p {
                None => verify_square_identity_odd(&psi, &s, &tau, r)?,
                Some(p) => verify_square_identity_even(&psi, p, &s, &tau, r)?,
            };
            done += 1;
            if !c.equal {
                witness = Some(json!({ "p": p, "sigma": s, "tau": tau, "lhs": c.lhs.to_text(), "rhs": c.rhs.to_text() }));
                break;
            }
        }
        let check = CheckResult::new(format!("square identities {}", target.name), witness.is_none())
            .method("exact")
            .detail(json!({ "instances": done, "total": total }));
        let check = match witness {
            Some(w) => check.witness(w),
            None => check,
        };
        env.push(check, t);
    }
    Ok(())
}

pub fn anisotropy(env: &mut Env, max_degree: Option<usize>, samples: usize) -> Result<()> {
    let ctx = env.context()?;
    let psi = Psi::new(&ctx)?;
    let top = max_degree.unwrap_or_else(|| certificate_degree(ctx.n()));
    for j in 0..=top {
        let t = Instant::now();
        let certs = certify_degree(&psi, j, &env.seeds)?;
        env.times.push((format!("degree {j}"), t.elapsed()));
        for (face, c) in certs {
            let detail = json!({
                "sigma": c.sigma,
                "p": c.p,
                "h": c.h,
                "value": c.value.to_text(),
            });
            let check = CheckResult::new(format!("u = {}", monomial_name(&[], &face)), c.square_nonzero)
                .detail(detail)
                .witness(json!({ "square": "u^2 vanished at every seed" }));
            env.checks.push(check);
        }
        if j == 0 || samples == 0 {
            continue;
        }
        let t = Instant::now();
        let draws = sample_combinations(&psi, j, samples, env.seeds[0] ^ j as u64, &env.seeds)?;
        for (k, d) in draws.iter().enumerate() {
            let pass = d.square_nonzero && d.certificate.is_some();
            let check = CheckResult::new(format!("random u #{k} in degree {j}"), pass)
                .method("sampled")
                .detail(json!({ "u": d.u.to_string(), "certified": d.certificate.is_some() }))
                .witness(json!({ "u": d.u.to_string(), "square_nonzero": d.square_nonzero }));
            env.checks.push(check);
        }
        env.times.push((format!("samples in degree {j}"), t.elapsed()));
    }
    Ok(())
}

/// Parses `a..b` or `a..=b` (both inclusive) or a single number.
pub fn parse_range(s: &str) -> std::result::Result<(u32, u32), String> {
    let parse = |x: &str| x.trim().parse::<u32>().map_err(|e| format!("bad bound {x:?}: {e}"));
    let (a, b) = match s.split_once("..") {
        Some((a, b)) => (parse(a)?, parse(b.strip_prefix('=').unwrap_or(b))?),
        None => {
            let a = parse(s)?;
            (a, a)
        }
    };
    if a < 3 || b < a {
        return Err(format!("range {s:?} must satisfy 3 <= start <= end"));
    }
    Ok((a, b))
}

pub fn polygon_suite(env: &mut Env, (lo, hi): (u32, u32)) -> Result<()> {
    let chars: Vec<u32> = match env.char {
        Some(p) => vec![p],
        None => vec![2, 3, 5],
    };
    for m in lo..=hi {
        let edges: Vec<(u32, u32)> = {
            let mut e: Vec<(u32, u32)> = (1..m).map(|i| (i, i + 1)).collect();
            e.push((1, m));
            e.sort_unstable();
            e
        };
        for &p in &chars {
            let t = Instant::now();
            let ctx = ReductionContext::new(SimplicialComplex::polygon(m)?, env.field_config(p)?)?;
            let psi = Psi::new(&ctx)?;
            let gram = polygon_gram(&psi)?;
            let det = gram.det();
            let closed = polygon_det_closed_form(p, m as usize);
            let ok = det.try_equals(&closed)?;
            env.push(CheckResult::new(format!("gram det m={m} p={p}"), ok).detail(text(&det)).witness(pair(&det, &closed)), t);

            let t = Instant::now();
            let (diag, ok) = verify_orthogonal_basis(&psi)?;
            let d: Vec<String> = (0..diag.size()).map(|i| diag.get(i, i).to_text()).collect();
            env.push(CheckResult::new(format!("orthogonal basis m={m} p={p}"), ok).witness(json!({ "gram": d })), t);

            let t = Instant::now();
            let got = recover_polygon_from_form(&gram, m)?;
            let ok = got == edges;
            env.push(
                CheckResult::new(format!("edges from form m={m} p={p}"), ok)
                    .detail(json!(got))
                    .witness(json!({ "recovered": got, "expected": edges })),
                t,
            );
        }
        let t = Instant::now();
        let proof = polygon_anisotropy_proof(m as usize)?;
        let check = CheckResult::new(format!("initial terms m={m}"), proof.holds)
            .witness(json!({ "parity_ok": proof.parity_ok, "distinct": proof.distinct, "exponents": proof.initial_exponents }));
        env.push(check, t);
    }
    Ok(())
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, clap::ValueEnum)]
pub enum Property {
    Wlp,
    Slp,
}

pub fn lefschetz(env: &mut Env, property: Property) -> Result<()> {
    let t = Instant::now();
    let named = env.complex()?;
    let name = named.name.clone();
    let sc = SuspensionContext::new(named.complex.clone(), env.config()?)?;
    let rep = match property {
        Property::Wlp => sc.check_wlp(&env.seeds)?,
        Property::Slp => sc.check_slp(&env.seeds)?,
    };
    let tag = match property {
        Property::Wlp => "wlp",
        Property::Slp => "slp",
    };
    let table = serde_json::to_value(&rep.table).expect("rank table is serialisable");
    let bad: Vec<&facering::lefschetz::RankRow> = rep.table.iter().filter(|r| !r.max_rank()).collect();
    let check = CheckResult::new(format!("{tag} {name}"), rep.holds)
        .detail(table)
        .witness(serde_json::to_value(&bad).expect("rank rows are serialisable"));
    env.push(check, t);
    Ok(())
}

/// Complexes probed when `--complex` is absent.
const PROBE_DEFAULTS: [&str; 3] = ["polygon4", "polygon5", "simplex2"];

fn sequences(m: u32, len: usize) -> Vec<Vec<u32>> {
    let mut out = vec![vec![]];
    for _ in 0..len {
        out = out.into_iter().flat_map(|s| (1..=m).map(move |v| [s.clone(), vec![v]].concat())).collect();
    }
    out
}

fn multisets(m: u32, len: usize) -> Vec<Vec<u32>> {
    sequences(m, len).into_iter().filter(|s| s.windows(2).all(|w| w[0] <= w[1])).collect()
}

pub fn conj141_probe(env: &mut Env, allow_large: bool) -> Result<()> {
    let targets: Vec<Named> = match &env.complex {
        Some(c) => vec![Named { name: c.name.clone(), complex: c.complex.clone() }],
        None => PROBE_DEFAULTS.iter().map(|n| Named::builtin(n)).collect::<Result<_>>()?,
    };
    let cfg = env.config()?;
    for target in targets {
        let t = Instant::now();
        let ctx = ReductionContext::new(target.complex, cfg)?;
        let psi = Psi::new(&ctx)?;
        let (m, rows) = (ctx.m(), ctx.rows());
        let taus = multisets(m, rows);
        let (mut probed, mut squares, mut complete) = (0usize, 0usize, true);
        let mut disagreements = Vec::new();
        'outer: for sigma in sequences(m, rows) {
            for tau in &taus {
                if env.out_of_time() {
                    complete = false;
                    break 'outer;
                }
                let pr = probe_conjecture(&psi, &sigma, tau, allow_large)?;
                probed += 1;
                squares += pr.square as usize;
                if !pr.equal && disagreements.len() < 5 {
                    disagreements.push(json!({ "sigma": pr.sigma, "tau": pr.tau, "lhs": pr.lhs.to_text(), "rhs": pr.rhs.to_text() }));
                }
            }
        }
        let check = CheckResult::new(format!("conjecture probe {}", target.name), disagreements.is_empty())
            .method("exact")
            .detail(json!({ "probed": probed, "square_cases": squares, "complete": complete }))
            .witness(Value::from(disagreements));
        env.push(check, t);
    }
    Ok(())
}
