//! Leibniz equality, the Peano axioms and theory membership.

use crate::error::{Error, Result};
use crate::exec::{decode, Exec};
use crate::ioca::Koca;
use crate::limits::Limits;
use crate::report::{CheckResult, Report, Witness};
use crate::term::{eval, lambda_star, Term};

use super::derivation::identity_realizer;
use super::parse::Signature;
use super::semantics::{Interpretation, Semantics};
use super::syntax::{HoExpr, Kind};

/// `e(λ*x. x s)`, the realizer of `∀x (succ x = 0 ⇒ ⊥)`.
pub fn succ_not_zero_realizer() -> Term {
    Term::app(Term::e(), lambda_star("x", &Term::app(Term::var("x"), Term::s())))
}

/// Checks `e(λ*x.x) ≤ ⟦M = N⟧` at every assignment of the free variables
/// where `⟦M⟧ = ⟦N⟧`. When the sides differ somewhere the precondition is
/// unmet and the check is skipped.
pub fn leibniz_check(
    a: &Koca,
    interp: &Interpretation,
    m: &HoExpr,
    n: &HoExpr,
    limits: &Limits,
    exec: Exec,
) -> Result<Report> {
    let sem = Semantics::new(a, interp, limits);
    let eq = HoExpr::leibniz(m.clone(), n.clone())?;
    let mut vars = m.free_vars();
    vars.extend(n.free_vars());
    let vars: Vec<(String, Kind)> = vars.into_iter().collect();
    let (dims, total) = sem.assignments(&vars)?;
    let r = eval(a, &identity_realizer())?;
    let o = a.oca();
    let at = |idx: usize| -> Vec<(String, usize)> {
        let vals = if dims.is_empty() { Vec::new() } else { decode(idx, &dims) };
        vars.iter().map(|(x, _)| x.clone()).zip(vals).collect()
    };
    let show = |env: &[(String, usize)]| {
        vars.iter()
            .zip(env)
            .fold(Witness::new(), |w, ((x, k), (_, v))| w.with(x.clone(), sem.show(k, *v)))
    };
    let mut rep = Report::new(format!("leibniz {m} = {n}"));
    let differ = exec.find_first(total, |idx| {
        let mut env = at(idx);
        match (sem.eval(m, &mut env), sem.eval(n, &mut env)) {
            (Ok(x), Ok(y)) if x == y => None,
            (Ok(_), Ok(_)) => Some(Ok(env)),
            (Err(e), _) | (_, Err(e)) => Some(Err(e)),
        }
    });
    if let Some(env) = differ.transpose()? {
        rep.push(CheckResult::skipped(
            "e-id-realizes-equality",
            format!("sides differ at {}", show(&env)),
        ));
        return Ok(rep);
    }
    let bad = exec.find_first(total, |idx| {
        let mut env = at(idx);
        match sem.eval(&eq, &mut env) {
            Ok(v) if o.le(r, v) => None,
            Ok(v) => Some(Ok(show(&env).with("value", o.name(v)))),
            Err(e) => Some(Err(e)),
        }
    });
    let w = bad.transpose()?.map(|w| w.with("realizer", o.name(r)));
    rep.push(CheckResult::from_witness("e-id-realizes-equality", total as u64, w));
    Ok(rep)
}

/// The first element of Φ (then the derived pool) below `⟦f⟧`.
pub fn theory_member(a: &Koca, interp: &Interpretation, f: &HoExpr, limits: &Limits) -> Result<Option<usize>> {
    if !f.kind().is_o() {
        return Err(Error::Contract(format!("`{f}` is not a formula")));
    }
    if let Some((x, _)) = f.free_vars().into_iter().next() {
        return Err(Error::Contract(format!("`{f}` is not closed: `{x}` is free")));
    }
    let v = Semantics::new(a, interp, limits).eval_closed(f)?;
    Ok(a.realizer_pool(true).into_iter().find(|&r| a.le(r, v)))
}

/// `N(z) := ∀x:I→o. (∀y:I. x y ⇒ x (succ y)) ⇒ x 0 ⇒ x z`.
pub fn nat_formula(z: &HoExpr, zero: &HoExpr, succ: &HoExpr) -> Result<HoExpr> {
    let i = z.kind();
    let avoid: std::collections::BTreeSet<String> = z.free_vars().into_iter().map(|(n, _)| n).collect();
    let xn = super::syntax::fresh("x", &avoid);
    let yn = super::syntax::fresh("y", &avoid);
    let xk = Kind::arrow(i.clone(), Kind::o());
    let x = HoExpr::var(&xn, xk.clone());
    let y = HoExpr::var(&yn, i.clone());
    let step = HoExpr::forall(
        &yn,
        i,
        HoExpr::implies(
            HoExpr::app(x.clone(), y.clone())?,
            HoExpr::app(x.clone(), HoExpr::app(succ.clone(), y)?)?,
        )?,
    )?;
    let body = HoExpr::implies(
        step,
        HoExpr::implies(HoExpr::app(x.clone(), zero.clone())?, HoExpr::app(x, z.clone())?)?,
    )?;
    HoExpr::forall(&xn, xk, body)
}

fn closure(vars: &[(&str, &Kind)], body: HoExpr) -> Result<HoExpr> {
    vars.iter()
        .rev()
        .try_fold(body, |acc, (x, k)| HoExpr::forall(x, (*k).clone(), acc))
}

/// The Peano axioms other than induction, for a signature with a kind
/// `I`, constants `0 : I` and `succ : I → I`, and optionally
/// `plus, times : I → I → I`.
pub fn pa_axioms_check(
    a: &Koca,
    sig: &Signature,
    interp: &Interpretation,
    limits: &Limits,
    exec: Exec,
) -> Result<Report> {
    let i = Kind::base("I");
    let ii = Kind::arrow(i.clone(), i.clone());
    let iii = Kind::arrow(i.clone(), ii.clone());
    let need = |name: &str, k: &Kind| -> Result<HoExpr> {
        match sig.const_kind(name) {
            Some(found) if found == k => Ok(HoExpr::constant(name, k.clone())),
            Some(found) => Err(Error::Kind(format!("`{name}` has kind {found}, expected {k}"))),
            None => Err(Error::Contract(format!("the signature lacks `{name} : {k}`"))),
        }
    };
    let zero = need("0", &i)?;
    let succ = need("succ", &ii)?;
    let plus = need("plus", &iii).ok();
    let times = need("times", &iii).ok();
    let x = HoExpr::var("x", i.clone());
    let y = HoExpr::var("y", i.clone());
    let app = |f: &HoExpr, args: &[&HoExpr]| -> Result<HoExpr> {
        args.iter().try_fold(f.clone(), |acc, a| HoExpr::app(acc, (*a).clone()))
    };

    let mut equations: Vec<(&str, HoExpr, HoExpr)> = vec![("zero-reflexive", zero.clone(), zero.clone())];
    if let Some(p) = &plus {
        equations.push(("plus-zero", app(p, &[&x, &zero])?, x.clone()));
        equations.push((
            "plus-succ",
            app(p, &[&x, &app(&succ, &[&y])?])?,
            app(&succ, &[&app(p, &[&x, &y])?])?,
        ));
    }
    if let Some(t) = &times {
        equations.push(("times-zero", app(t, &[&x, &zero])?, zero.clone()));
        if let Some(p) = &plus {
            equations.push((
                "times-succ",
                app(t, &[&x, &app(&succ, &[&y])?])?,
                app(p, &[&app(t, &[&x, &y])?, &x])?,
            ));
        }
    }

    let sem = Semantics::new(a, interp, limits);
    let o = a.oca();
    let id = eval(a, &identity_realizer())?;
    let mut rep = Report::new("peano");
    for (name, m, n) in &equations {
        let sub = leibniz_check(a, interp, m, n, limits, exec)?;
        let mut vars: Vec<(String, Kind)> = m.free_vars().into_iter().collect();
        vars.extend(n.free_vars());
        vars.sort();
        vars.dedup();
        let refs: Vec<(&str, &Kind)> = vars.iter().map(|(x, k)| (x.as_str(), k)).collect();
        let closed = closure(&refs, HoExpr::leibniz(m.clone(), n.clone())?)?;
        let v = sem.eval_closed(&closed)?;
        let pointwise = sub.checks.into_iter().next().expect("one check");
        let check = if o.le(id, v) && pointwise.passed() && pointwise.status != crate::report::Status::Skipped {
            CheckResult::pass(format!("equation/{name}"), pointwise.cases)
        } else {
            let mut w = pointwise.witness.unwrap_or_default();
            w = w.with("closed-value", o.name(v)).with("realizer", o.name(id));
            let c = CheckResult::fail(format!("equation/{name}"), pointwise.cases.max(1), w);
            match pointwise.note {
                Some(note) => c.with_note(note),
                None => c,
            }
        };
        rep.push(check);
    }

    // ∀x (succ x = 0 ⇒ ⊥), realized by e(λ*x. x s).
    let snz_real = eval(a, &succ_not_zero_realizer())?;
    let inner = HoExpr::implies(HoExpr::leibniz(app(&succ, &[&x])?, zero.clone())?, HoExpr::bot())?;
    let snz = HoExpr::forall("x", i.clone(), inner.clone())?;
    let v = sem.eval_closed(&snz)?;
    let w = (!o.le(snz_real, v)).then(|| {
        let n = sem.size(&i).unwrap_or(0);
        let culprit = (0..n).find(|&s| {
            sem.eval(&inner, &mut vec![("x".into(), s)])
                .map(|iv| !o.le(snz_real, iv))
                .unwrap_or(true)
        });
        let mut w = Witness::new();
        if let Some(s) = culprit {
            w = w.with("x", s.to_string());
        }
        w.with("value", o.name(v)).with("realizer", o.name(snz_real))
    });
    rep.push(CheckResult::from_witness("succ-not-zero", 1, w));

    // ∀z (N(z) ⇒ N(z)), realized by e(λ*x.x).
    let z = HoExpr::var("z", i.clone());
    let nz = nat_formula(&z, &zero, &succ)?;
    let ind = HoExpr::forall("z", i, HoExpr::implies(nz.clone(), nz)?)?;
    let v = sem.eval_closed(&ind)?;
    rep.push(CheckResult::from_witness(
        "relativized-induction",
        1,
        (!o.le(id, v)).then(|| Witness::new().with("value", o.name(v)).with("realizer", o.name(id))),
    ));

    let outside: Vec<&str> = [("e(λ*x.x)", id), ("e(λ*x.x s)", snz_real)]
        .into_iter()
        .filter(|&(_, r)| !o.phi().contains(r))
        .map(|(n, _)| n)
        .collect();
    rep.push(CheckResult::from_witness(
        "realizers-in-filter",
        2,
        (!outside.is_empty()).then(|| Witness::new().with("outside", outside.join(", "))),
    ));
    Ok(rep)
}

/// The signature `I`, `0`, `succ`, `plus`, `times` with `⟦I⟧ = Z/m`.
pub fn modular_arithmetic(m: usize) -> (Signature, Interpretation) {
    let i = Kind::base("I");
    let ii = Kind::arrow(i.clone(), i.clone());
    let iii = Kind::arrow(i.clone(), ii.clone());
    let sig = Signature {
        kinds: vec!["I".into()],
        consts: vec![
            ("0".into(), i),
            ("succ".into(), ii),
            ("plus".into(), iii.clone()),
            ("times".into(), iii),
        ],
        vars: Vec::new(),
        defs: Vec::new(),
    };
    let encode = |table: &[usize], base: usize| table.iter().rev().fold(0, |acc, &v| acc * base + v);
    let succ = encode(&(0..m).map(|x| (x + 1) % m).collect::<Vec<_>>(), m);
    let curried = |op: &dyn Fn(usize, usize) -> usize| {
        let inner: Vec<usize> = (0..m)
            .map(|x| encode(&(0..m).map(|y| op(x, y) % m).collect::<Vec<_>>(), m))
            .collect();
        encode(&inner, m.pow(m as u32))
    };
    let interp = Interpretation::new()
        .with_kind("I", m)
        .with_const("0", 0)
        .with_const("succ", succ)
        .with_const("plus", curried(&|x, y| x + y))
        .with_const("times", curried(&|x, y| x * y));
    (sig, interp)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::homega::parse::parse_expr;
    use crate::ioca::{boolean, ProperQuadruple};
    use crate::order::Poset;
    use crate::set::ElemSet;

    #[test]
    fn equal_constants_are_leibniz_equal() {
        let k = boolean(2).unwrap();
        let (sig, interp) = modular_arithmetic(2);
        let m = parse_expr("succ (succ 0)", &sig).unwrap();
        let n = parse_expr("0", &sig).unwrap();
        let r = leibniz_check(&k, &interp, &m, &n, &Limits::default(), Exec::Sequential).unwrap();
        assert!(r.passed() && r.checks[0].status == crate::report::Status::Pass, "{r}");
        let m = parse_expr("succ 0", &sig).unwrap();
        let r = leibniz_check(&k, &interp, &m, &n, &Limits::default(), Exec::Sequential).unwrap();
        assert_eq!(r.checks[0].status, crate::report::Status::Skipped);
    }

    #[test]
    fn theory_membership() {
        let k = boolean(2).unwrap();
        let (sig, interp) = modular_arithmetic(3);
        let l = Limits::default();
        let taut = parse_expr("forall a:o. a => a", &sig).unwrap();
        assert!(theory_member(&k, &interp, &taut, &l).unwrap().is_some());
        let falsum = parse_expr("forall a:o. a", &sig).unwrap();
        assert_eq!(theory_member(&k, &interp, &falsum, &l).unwrap(), None);
        let open = HoExpr::var("a", Kind::o());
        assert!(theory_member(&k, &interp, &open, &l).is_err());
    }

    #[test]
    fn one_element_index_kind() {
        let k = boolean(1).unwrap();
        let (sig, interp) = modular_arithmetic(1);
        let r = pa_axioms_check(&k, &sig, &interp, &Limits::default(), Exec::Sequential).unwrap();
        // succ 0 = 0 in Z/1, so the succ≠0 clause is evaluated honestly.
        assert!(!r.get("succ-not-zero").unwrap().passed());
        assert!(r.get("equation/plus-succ").unwrap().passed());
        assert!(r.get("relativized-induction").unwrap().passed());
    }

    #[test]
    fn succ_not_zero_on_the_trivial_algebra() {
        // On a one-point KOCA every formula is ⊤.
        let q = ProperQuadruple::new(
            vec!["*".into()],
            Poset::from_fn(1, |_, _| true).unwrap(),
            vec![0],
            ElemSet::from_indices(1, [0]).unwrap(),
        )
        .unwrap();
        let k = q.into_koca().unwrap();
        let (sig, interp) = modular_arithmetic(3);
        let r = pa_axioms_check(&k, &sig, &interp, &Limits::default(), Exec::Sequential).unwrap();
        assert!(r.passed(), "{r}");
    }
}
