//! Acceptance run: one line per criterion, non-zero exit if any fails.
//!
//! Expected values come from small oracles written here against raw
//! tables, not from the library's own helpers.

use std::collections::BTreeSet;
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::time::{Duration, Instant};

use koca::aks::LemmaScope;
use koca::homega::{
    adequacy_suite, leibniz_check, modular_arithmetic, pa_axioms_check, parse_expr, theory_member, AdequacySetup,
};
use koca::ioca::{boolean, chain3_quadruple};
use koca::lattice::lattice_suite;
use koca::term::{enumerate_terms, lambda_star};
use koca::translate::{aks_to_koca, galois_check, koca_to_aks, roundtrip_tripos_equivalence, streicher_iso_check};
use koca::tripos::{forall_along, koca_tripos_suite, nth_predicate, square_count, FiniteFunction};
use koca::{
    AbstractKrivineStructure, Atom, Coverage, Exec, FilteredOca, Koca, Limits, RealizabilityLattice, Report, Term,
    Witness,
};

const EXEC: Exec = Exec::Parallel;

type Outcome = Result<String, String>;
type Criterion = (u8, &'static str, u64, fn() -> Outcome);

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn clean(r: &Report) -> Result<(), String> {
    match r.failures().next() {
        None => Ok(()),
        Some(c) => match &c.witness {
            Some(w) => Err(format!("{}: {} failed, witness {w}", r.suite, c.name)),
            None => Err(format!("{}: {} failed", r.suite, c.name)),
        },
    }
}

fn exhaustive(r: &Report) -> Result<(), String> {
    match r.checks.iter().find(|c| c.note.as_deref().is_some_and(|n| n.contains("sampled"))) {
        None => Ok(()),
        Some(c) => Err(format!("{} was sampled: {:?}", c.name, c.note)),
    }
}

fn e<E: std::fmt::Display>(err: E) -> String {
    err.to_string()
}

// ---------------------------------------------------------------- 1

fn naive_terms_perp(rows: &[u128], ns: usize, terms: u128) -> u128 {
    (0..ns)
        .filter(|&p| (0..rows.len()).all(|t| terms >> t & 1 == 0 || rows[t] >> p & 1 == 1))
        .fold(0, |acc, p| acc | 1 << p)
}

fn naive_stacks_perp(rows: &[u128], ns: usize, stacks: u128) -> u128 {
    (0..rows.len())
        .filter(|&t| (0..ns).all(|p| stacks >> p & 1 == 0 || rows[t] >> p & 1 == 1))
        .fold(0, |acc, t| acc | 1 << t)
}

fn subset(a: u128, b: u128) -> bool {
    a & !b == 0
}

fn one_lattice(nt: usize, ns: usize, pole: usize, limits: &Limits) -> Result<(), String> {
    let smask = (1u128 << ns) - 1;
    let rows: Vec<u128> = (0..nt).map(|t| (pole as u128 >> (t * ns)) & smask).collect();
    let lat = RealizabilityLattice::anonymous(nt, ns, &rows).map_err(e)?;

    let oracle: Vec<u128> = (0..=smask)
        .filter(|&p| naive_terms_perp(&rows, ns, naive_stacks_perp(&rows, ns, p)) == p)
        .collect();
    let fast: Vec<u128> = lat.enumerate_closed_stack_sets(limits).map_err(e)?.iter().map(|s| s.bits()).collect();
    let brute: Vec<u128> = lat.enumerate_closed_brute_force(limits).map_err(e)?.iter().map(|s| s.bits()).collect();
    ensure(fast == oracle && brute == oracle, || format!("closed sets differ: {fast:?} {brute:?} {oracle:?}"))?;

    let sp = |p: u128| lat.perp_of_stacks(&lat.stack_set(p)).map(|s| s.bits()).map_err(e);
    let tp = |l: u128| lat.perp_of_terms(&lat.term_set(l)).map(|s| s.bits()).map_err(e);
    let tmask = (1u128 << nt) - 1;
    for p in 0..=smask {
        ensure(sp(p)? == naive_stacks_perp(&rows, ns, p), || format!("^⊥{p:b}"))?;
        ensure(sp(tp(sp(p)?)?)? == sp(p)?, || format!("triple perp on stacks {p:b}"))?;
        for q in 0..=smask {
            ensure(!subset(p, q) || subset(sp(q)?, sp(p)?), || format!("antitone on stacks {p:b} {q:b}"))?;
            ensure(sp(p | q)? == sp(p)? & sp(q)?, || format!("De Morgan on stacks {p:b} {q:b}"))?;
        }
    }
    for l in 0..=tmask {
        ensure(tp(l)? == naive_terms_perp(&rows, ns, l), || format!("{l:b}^⊥"))?;
        ensure(tp(sp(tp(l)?)?)? == tp(l)?, || format!("triple perp on terms {l:b}"))?;
        for m in 0..=tmask {
            ensure(!subset(l, m) || subset(tp(m)?, tp(l)?), || format!("antitone on terms {l:b} {m:b}"))?;
            ensure(tp(l | m)? == tp(l)? & tp(m)?, || format!("De Morgan on terms {l:b} {m:b}"))?;
        }
    }
    if pole.is_multiple_of(61) {
        clean(&lattice_suite(&lat, limits, Exec::Sequential).map_err(e)?)?;
    }
    Ok(())
}

fn closure_algebra() -> Outcome {
    let limits = Limits::default();
    let mut total = 0usize;
    for nt in 1..=4 {
        for ns in 1..=4 {
            let poles = 1usize << (nt * ns);
            total += poles;
            let bad = EXEC.find_first(poles, |pole| one_lattice(nt, ns, pole, &limits).err().map(|m| (pole, m)));
            if let Some((pole, m)) = bad {
                return Err(format!("|Λ|={nt} |Π|={ns} pole {pole:#x}: {m}"));
            }
        }
    }
    ensure(total >= 1 << 16, || format!("only {total} lattices"))?;
    Ok(format!("{total} lattices, all poles"))
}

// ---------------------------------------------------------------- 2

fn ev(a: &FilteredOca, t: &Term, y: Option<usize>) -> usize {
    match t {
        Term::Const(Atom::Elem(i)) => *i,
        Term::Const(Atom::K) => a.k(),
        Term::Const(Atom::S) => a.s(),
        Term::Const(other) => panic!("unexpected constant {other:?}"),
        Term::Var(_) => y.expect("closed term"),
        Term::App(f, x) => a.app(ev(a, f, y), ev(a, x, y)),
    }
}

fn leaves_of(t: &Term, out: &mut BTreeSet<String>) {
    match t {
        Term::App(f, x) => {
            leaves_of(f, out);
            leaves_of(x, out);
        }
        Term::Var(v) => {
            out.insert(format!("var {v}"));
        }
        Term::Const(c) => {
            out.insert(format!("{c:?}"));
        }
    }
}

fn bracket_on(a: &FilteredOca) -> Result<u64, String> {
    let n = a.len();
    let mut leaves = vec![Term::var("y"), Term::k(), Term::s()];
    leaves.extend((0..n).map(Term::elem));
    let terms = enumerate_terms(&leaves, 4);
    let closed: Vec<Term> = enumerate_terms(&leaves[1..], 2);
    let small: Vec<&Term> = terms.iter().filter(|t| t.app_nodes() <= 2).collect();

    let bad = EXEC.find_first(terms.len(), |i| {
        let t = &terms[i];
        let l = lambda_star("y", t);
        let mut got = BTreeSet::new();
        leaves_of(&l, &mut got);
        if got.contains("var y") {
            return Some(format!("λ*y({t}) = {l} mentions y"));
        }
        let mut allowed = BTreeSet::new();
        leaves_of(t, &mut allowed);
        allowed.insert(format!("{:?}", Atom::K));
        allowed.insert(format!("{:?}", Atom::S));
        if let Some(x) = got.difference(&allowed).next() {
            return Some(format!("λ*y({t}) introduces {x}"));
        }
        let f = ev(a, &l, None);
        (0..n)
            .find(|&v| !a.le(a.app(f, v), ev(a, t, Some(v))))
            .map(|v| format!("t = {t}, u = {}", a.name(v)))
    });
    if let Some(m) = bad {
        return Err(m);
    }
    // Literal substitution agrees with the by-value reading above.
    for t in &small {
        let l = lambda_star("y", t);
        for u in &closed {
            let lhs = ev(a, &Term::app(l.clone(), u.clone()), None);
            let rhs = ev(a, &t.substitute("y", u), None);
            ensure(a.le(lhs, rhs), || format!("t = {t}, u = {u}"))?;
            ensure(rhs == ev(a, t, Some(ev(a, u, None))), || format!("substitution not compositional at {t}"))?;
        }
    }
    Ok((terms.len() * n + small.len() * closed.len()) as u64)
}

fn bracket_abstraction() -> Outcome {
    // The three-element chain with the derived application and k = s = ⊤.
    let q = chain3_quadruple();
    let chain = FilteredOca::new(
        q.names.clone(),
        q.order.clone(),
        q.derived_app().map_err(e)?,
        2,
        2,
        q.phi,
    )
    .map_err(e)?;
    let b1 = boolean(1).map_err(e)?;
    let b2 = boolean(2).map_err(e)?;
    let carriers: Vec<(&str, FilteredOca)> = vec![
        ("trivial", FilteredOca::trivial()),
        ("boolean:1", b1.oca().clone()),
        ("chain3", chain),
        ("boolean:2", b2.oca().clone()),
    ];
    let mut cases = 0;
    for (name, a) in &carriers {
        clean(&a.check(EXEC))?;
        cases += bracket_on(a).map_err(|m| format!("{name}: {m}"))?;
    }
    Ok(format!("{cases} instances over carriers of size 1..4"))
}

// ---------------------------------------------------------------- 3

fn boolean_kocas() -> Outcome {
    for n in 1..=4 {
        let k = boolean(n).map_err(e)?;
        let size = 1usize << n;
        let top = size - 1;
        ensure(k.len() == size, || format!("boolean:{n} has {} elements", k.len()))?;
        for a in 0..size {
            for b in 0..size {
                ensure(k.le(a, b) == (a & !b == 0), || format!("order at {a},{b}"))?;
                ensure(k.app(a, b) == a & b, || format!("boolean:{n} app {a},{b}"))?;
                ensure(k.imp(a, b) == (!a | b) & top, || format!("boolean:{n} imp {a},{b}"))?;
            }
        }
        ensure(k.phi().iter().collect::<Vec<_>>() == vec![top], || "Φ is not {⊤}".into())?;
        clean(&k.oca().check(EXEC))?;
        clean(&k.ioca().check(EXEC))?;
        clean(&k.check(EXEC))?;
        clean(&k.ioca().heyting_check(EXEC).map_err(e)?)?;
        clean(&k.double_negation_realizer(Some(0), EXEC).map_err(e)?)?;
        clean(&k.suite(EXEC).map_err(e)?)?;
    }
    Ok("boolean:1..4".into())
}

// ---------------------------------------------------------------- 4

fn pole_is_order(aks: &AbstractKrivineStructure, a: &Koca) -> Result<(), String> {
    for t in 0..a.len() {
        for p in 0..a.len() {
            ensure(aks.orth(t, p) == a.le(t, p), || format!("pole at ({t},{p})"))?;
        }
        for p in 0..a.len() {
            ensure(aks.push(t, p) == a.imp(t, p), || format!("push at ({t},{p})"))?;
        }
    }
    Ok(())
}

fn koca_to_aks_criterion() -> Outcome {
    let limits = Limits::default();
    for n in 1..=3 {
        let a = boolean(n).map_err(e)?;
        let aks = koca_to_aks(&a).map_err(e)?;
        pole_is_order(&aks, &a)?;
        clean(&aks.check_axioms(EXEC))?;
        clean(&aks.verify_lemmas(&limits, EXEC, LemmaScope::Closed).map_err(e)?)?;
        let all = aks.verify_lemmas(&limits, EXEC, LemmaScope::AllSubsets).map_err(e)?;
        clean(&all)?;
    }
    Ok("boolean:1..3".into())
}

// ---------------------------------------------------------------- 5

fn round_trip() -> Outcome {
    let limits = Limits::default();
    let a = boolean(2).map_err(e)?;
    let aks = koca_to_aks(&a).map_err(e)?;
    let b = aks_to_koca(&aks, &limits).map_err(e)?;
    clean(&b.check(EXEC))?;
    clean(&galois_check(&a, &limits, EXEC).map_err(e)?)?;
    let closed = aks.lattice().enumerate_closed_stack_sets(&limits).map_err(e)?;
    // Principal up-sets of the carrier, counted from the order table.
    let principal: BTreeSet<Vec<usize>> =
        (0..a.len()).map(|x| (0..a.len()).filter(|&y| a.le(x, y)).collect()).collect();
    let closed_sets: BTreeSet<Vec<usize>> = closed.iter().map(|s| s.iter().collect()).collect();
    ensure(closed_sets == principal, || format!("closed sets {closed_sets:?} vs up-sets {principal:?}"))?;
    ensure(closed.len() == a.len() && b.len() == a.len(), || {
        format!("{} closed sets, {} elements, carrier {}", closed.len(), b.len(), a.len())
    })?;
    Ok(format!("{} closed sets", closed.len()))
}

// ---------------------------------------------------------------- 6

fn tripos_laws() -> Outcome {
    let limits = Limits::default();
    let a = boolean(2).map_err(e)?;
    let cov = Coverage::default();
    let r = koca_tripos_suite(&a, 2, &cov, &limits, EXEC).map_err(e)?;
    clean(&r)?;
    exhaustive(&r)?;
    for needle in [
        "reflexive-by-i",
        "transitive-by-b-composition",
        "meet-implication-equivalence",
        "forall-adjunction",
        "reindex-of-generic-is-exact",
        "c-realizes-not-not-elim",
        "beck-chevalley-pointwise-equality",
    ] {
        ensure(r.checks.iter().any(|c| c.name.contains(needle)), || format!("no {needle} check"))?;
    }
    ensure(square_count() >= 100, || format!("{} squares", square_count()))?;

    // ∀ along f in the Boolean case is the meet over the fiber.
    let mut maps = 0;
    for j in 0..=2 {
        for i in 0..=2 {
            for f in FiniteFunction::all(j, i) {
                for idx in 0..a.len().pow(j as u32) {
                    let psi = nth_predicate(a.len(), j, idx);
                    let got = forall_along(&a, &f, &psi).map_err(e)?;
                    for x in 0..i {
                        let want = (0..j).filter(|&y| f.at(y) == x).fold(a.len() - 1, |m, y| m & psi.values[y]);
                        ensure(got.values[x] == want, || format!("∀ along {:?} of {:?}", f.graph(), psi.values))?;
                    }
                    maps += 1;
                }
            }
        }
    }
    Ok(format!("{} checks, {} squares, {maps} ∀ images", r.checks.len(), square_count()))
}

// ---------------------------------------------------------------- 7

fn streicher() -> Outcome {
    let limits = Limits::default();
    let cov = Coverage::default();
    let mut n_checks = 0;
    for n in 1..=3 {
        let a = boolean(n).map_err(e)?;
        let aks = koca_to_aks(&a).map_err(e)?;
        for size in 0..=2 {
            let s = streicher_iso_check(&aks, size, &cov, &limits, EXEC).map_err(e)?;
            let t = roundtrip_tripos_equivalence(&a, size, &cov, &limits, EXEC).map_err(e)?;
            for r in [&s, &t] {
                clean(r)?;
                exhaustive(r)?;
                n_checks += r.checks.len();
            }
        }
    }
    let b = aks_to_koca(&koca_to_aks(&boolean(2).map_err(e)?).map_err(e)?, &limits).map_err(e)?;
    for size in 0..=2 {
        let t = roundtrip_tripos_equivalence(&b, size, &cov, &limits, EXEC).map_err(e)?;
        clean(&t)?;
        exhaustive(&t)?;
        n_checks += t.checks.len();
    }
    Ok(format!("{n_checks} checks"))
}

// ---------------------------------------------------------------- 8

fn adequacy() -> Outcome {
    let limits = Limits::default();
    let a = boolean(2).map_err(e)?;
    let (setup, sig) = AdequacySetup::standard();
    let interp = AdequacySetup::standard_interpretation();
    let r = adequacy_suite(&a, &setup, &interp, 3, &limits, EXEC).map_err(e)?;
    clean(&r)?;
    let derivs = r.checks.iter().filter(|c| c.name.starts_with("adequate-")).map(|c| c.cases).sum::<u64>();
    ensure(r.checks.iter().filter(|c| c.name.starts_with("adequate-")).all(|c| c.cases > 0), || {
        "some rule has no derivations".into()
    })?;

    let p = |s: &str| parse_expr(s, &sig).map_err(e);
    for (m, n) in [("plus x 0", "x"), ("succ (succ (succ x))", "x"), ("times x (succ 0)", "x"), ("plus 0 x", "x")] {
        let l = leibniz_check(&a, &interp, &p(m)?, &p(n)?, &limits, EXEC).map_err(e)?;
        clean(&l)?;
        ensure(l.checks.iter().all(|c| c.status == koca::Status::Pass), || format!("{m} = {n} not evaluated"))?;
    }

    let (pa_sig, z3) = modular_arithmetic(3);
    ensure(z3 == interp, || "standard interpretation is not Z/3".into())?;
    let pa = pa_axioms_check(&a, &pa_sig, &z3, &limits, EXEC).map_err(e)?;

    let id = p("forall a:o. a => a")?;
    let falsum = p("forall a:o. a")?;
    ensure(theory_member(&a, &interp, &id, &limits).map_err(e)?.is_some(), || "A ⇒ A not in the theory".into())?;
    ensure(theory_member(&a, &interp, &falsum, &limits).map_err(e)?.is_none(), || "⊥ in the theory".into())?;
    ensure(theory_member(&a, &interp, &koca::homega::HoExpr::bot(), &limits).map_err(e)?.is_none(), || {
        "bot in the theory".into()
    })?;
    clean(&pa)?;
    Ok(format!("{derivs} derivations, PA on Z/3"))
}

// ---------------------------------------------------------------- 9

fn detected<T>(
    family: &str,
    candidates: impl Iterator<Item = (String, koca::Result<T>)>,
    check: impl Fn(&T) -> Option<Witness>,
) -> Result<String, String> {
    for (label, m) in candidates {
        let Ok(m) = m else { continue };
        if let Some(w) = check(&m) {
            if !w.0.is_empty() {
                return Ok(format!("{family} by {label}"));
            }
        }
    }
    Err(format!("no single-entry mutation trips {family}"))
}

fn failing(r: Report, name: &str) -> Option<Witness> {
    r.get(name).filter(|c| !c.passed()).and_then(|c| c.witness.clone())
}

fn mutation() -> Outcome {
    let a = boolean(2).map_err(e)?;
    let n = a.len();
    let aks = koca_to_aks(&a).map_err(e)?;
    clean(&aks.check_axioms(EXEC))?;
    clean(&a.check(EXEC))?;
    let (nt, ns) = (aks.n_terms(), aks.n_stacks());

    let aks_mutants = || {
        let push = (0..nt * ns * ns).map(|i| {
            let (t, p, v) = (i / (ns * ns), i / ns % ns, i % ns);
            (format!("push({t},{p}) := {v}"), aks.with_push(t, p, v))
        });
        let app = (0..nt * nt * nt).map(|i| {
            let (t, u, v) = (i / (nt * nt), i / nt % nt, i % nt);
            (format!("app({t},{u}) := {v}"), aks.with_app(t, u, v))
        });
        let store = (0..ns * nt).map(|i| (format!("store({}) := {}", i / nt, i % nt), aks.with_store(i / nt, i % nt)));
        push.chain(app).chain(store)
    };
    let grid = || (0..n * n * n).map(|i| (i / (n * n), i / n % n, i % n));

    let mut found = Vec::new();
    for family in ["S1", "S2", "S3", "S4", "S5"] {
        found.push(detected(family, aks_mutants(), |m| failing(m.check_axioms(EXEC), family))?);
    }
    for family in ["K", "S"] {
        let oca = a.oca();
        let c = grid().map(|(x, y, v)| (format!("app({x},{y}) := {v}"), oca.with_app(x, y, v)));
        found.push(detected(family, c, |m| failing(m.check(EXEC), family))?);
    }
    for family in ["PA", "E"] {
        let c = grid().map(|(x, y, v)| (format!("imp({x},{y}) := {v}"), a.ioca().with_imp(x, y, v)));
        found.push(detected(family, c, |m| failing(m.check_layer(EXEC), family))?);
    }
    let c = grid().map(|(x, y, v)| (format!("imp({x},{y}) := {v}"), a.ioca().with_imp(x, y, v).and_then(|i| a.with_ioca(i))));
    found.push(detected("C", c, |m: &Koca| failing(m.check_layer(EXEC), "C"))?);
    Ok(found.join("; "))
}

// ----------------------------------------------------------------

fn main() {
    let criteria: [Criterion; 9] = [
        (1, "closure algebra", 60, closure_algebra),
        (2, "bracket abstraction", 60, bracket_abstraction),
        (3, "boolean KOCAs", 30, boolean_kocas),
        (4, "KOCA to AKS", 60, koca_to_aks_criterion),
        (5, "AKS to KOCA round trip", 60, round_trip),
        (6, "tripos laws", 120, tripos_laws),
        (7, "Streicher equivalence", 60, streicher),
        (8, "L^ω adequacy and arithmetic", 120, adequacy),
        (9, "mutation sensitivity", 60, mutation),
    ];
    let mut failed = 0;
    for (id, name, budget, run) in criteria {
        let start = Instant::now();
        let out = catch_unwind(AssertUnwindSafe(run)).unwrap_or_else(|p| {
            let msg = p
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| p.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_default();
            Err(format!("panicked: {msg}"))
        });
        let took = start.elapsed();
        let out = match out {
            Ok(_) if took > Duration::from_secs(budget) => Err(format!("over the {budget}s budget")),
            other => other,
        };
        let secs = took.as_secs_f64();
        match out {
            Ok(detail) => println!("criterion {id} {name}: PASS ({detail}; {secs:.2}s of {budget}s)"),
            Err(detail) => {
                failed += 1;
                println!("criterion {id} {name}: FAIL ({detail}; {secs:.2}s of {budget}s)");
            }
        }
    }
    println!("{} of 9 criteria passed", 9 - failed);
    if failed > 0 {
        std::process::exit(1);
    }
}
