//! Bounded enumeration of derivations and the adequacy check.

use std::collections::BTreeMap;

use crate::error::Result;
use crate::exec::{decode, Exec};
use crate::ioca::Koca;
use crate::limits::Limits;
use crate::report::{CheckResult, Report, Witness};

use super::arith::modular_arithmetic;
use super::derivation::{check_derivation, Derivation, Rule, Sequent};
use super::parse::{parse_expr, Signature};
use super::semantics::{satisfaction_witness, Interpretation, Semantics};
use super::syntax::{HoExpr, Kind};

/// The material derivations are built from: contexts are prefixes of
/// `hyps`; `alli` ranges over `intro_vars`; `alle` instantiates with the
/// `witnesses` of matching kind.
#[derive(Debug, Clone, Default)]
pub struct AdequacySetup {
    pub hyps: Vec<(String, HoExpr)>,
    pub intro_vars: Vec<(String, Kind)>,
    pub witnesses: Vec<HoExpr>,
}

impl AdequacySetup {
    /// One base kind `I` with `0`, `succ`, `plus`, `times`; variables
    /// `a, b : o`, `x : I`, `y : I → o`; hypotheses `a ⇒ b`, `a`,
    /// `∀x:I. y x`.
    pub fn standard() -> (AdequacySetup, Signature) {
        let (mut sig, _) = modular_arithmetic(3);
        let i = Kind::base("I");
        sig.vars = vec![
            ("a".into(), Kind::o()),
            ("b".into(), Kind::o()),
            ("x".into(), i.clone()),
            ("y".into(), Kind::arrow(i, Kind::o())),
        ];
        let p = |s: &str| parse_expr(s, &sig).expect("standard signature");
        let setup = AdequacySetup {
            hyps: vec![
                ("h1".into(), p("a => b")),
                ("h2".into(), p("a")),
                ("h3".into(), p("forall x:I. y x")),
            ],
            intro_vars: sig.vars.clone(),
            witnesses: ["x", "0", "succ x", "a", "bot", "b => a", "y", "\\z:I. a"]
                .into_iter()
                .map(p)
                .collect(),
        };
        (setup, sig)
    }

    /// `Z/3` for `I`.
    pub fn standard_interpretation() -> Interpretation {
        modular_arithmetic(3).1
    }
}

/// A checked derivation with the length of its context prefix.
#[derive(Debug, Clone)]
pub struct Enumerated {
    pub context_len: usize,
    pub derivation: Derivation,
    pub sequent: Sequent,
}

/// Every derivation of depth at most `max_depth`, deduplicated by sequent,
/// plus the `alli` attempts the side condition rejected.
pub fn enumerate_derivations(setup: &AdequacySetup, max_depth: usize) -> (Vec<Enumerated>, Vec<Enumerated>) {
    let mut all: Vec<Enumerated> = Vec::new();
    let mut rejected: Vec<Enumerated> = Vec::new();
    let mut by_depth: Vec<Vec<usize>> = vec![Vec::new(); max_depth + 1];
    let ctx = |len: usize| setup.hyps[..len].to_vec();

    let add = |all: &mut Vec<Enumerated>, by_depth: &mut Vec<Vec<usize>>, len: usize, d: Derivation| -> bool {
        let depth = d.depth();
        match check_derivation(&ctx(len), &d) {
            Ok(seq) => {
                let dup = all
                    .iter()
                    .any(|e| e.context_len == len && e.sequent.alpha_eq(&seq));
                if !dup && depth <= max_depth {
                    by_depth[depth].push(all.len());
                    all.push(Enumerated { context_len: len, derivation: d, sequent: seq });
                }
                true
            }
            Err(_) => false,
        }
    };

    if max_depth >= 1 {
        for len in 1..=setup.hyps.len() {
            for (h, _) in &setup.hyps[..len] {
                add(&mut all, &mut by_depth, len, Derivation::Ax(h.clone()));
            }
        }
    }
    for depth in 2..=max_depth {
        let prev: Vec<usize> = by_depth[depth - 1].clone();
        let upto: Vec<usize> = (1..depth).flat_map(|d| by_depth[d].clone()).collect();
        for &i in &prev {
            let e = all[i].clone();
            if e.context_len > 0 {
                let (h, f) = setup.hyps[e.context_len - 1].clone();
                let d = Derivation::ImpI { hyp: h, formula: f, body: Box::new(e.derivation.clone()) };
                add(&mut all, &mut by_depth, e.context_len - 1, d);
            }
            for (x, k) in &setup.intro_vars {
                if !e.sequent.conclusion.has_free(x) {
                    continue;
                }
                let d = Derivation::AllI { var: x.clone(), kind: k.clone(), body: Box::new(e.derivation.clone()) };
                if !add(&mut all, &mut by_depth, e.context_len, d.clone()) {
                    let seq = Sequent {
                        context: ctx(e.context_len),
                        realizer: e.sequent.realizer.clone(),
                        conclusion: e.sequent.conclusion.clone(),
                    };
                    rejected.push(Enumerated { context_len: e.context_len, derivation: d, sequent: seq });
                }
            }
            if let HoExpr::Forall { var_kind, .. } = &e.sequent.conclusion {
                for w in setup.witnesses.iter().filter(|w| &w.kind() == var_kind) {
                    let d = Derivation::AllE { body: Box::new(e.derivation.clone()), witness: w.clone() };
                    add(&mut all, &mut by_depth, e.context_len, d);
                }
            }
        }
        // impe with at least one premise of depth exactly depth-1.
        for &i in &upto {
            for &j in &upto {
                if !prev.contains(&i) && !prev.contains(&j) {
                    continue;
                }
                let (p, q) = (&all[i], &all[j]);
                if p.context_len != q.context_len {
                    continue;
                }
                let fits = matches!(&p.sequent.conclusion, HoExpr::Implies(a, _) if a.alpha_eq(&q.sequent.conclusion));
                if fits {
                    let d = Derivation::ImpE(Box::new(p.derivation.clone()), Box::new(q.derivation.clone()));
                    let len = p.context_len;
                    add(&mut all, &mut by_depth, len, d);
                }
            }
        }
    }
    (all, rejected)
}

/// Enumerates derivations up to `max_depth` and checks that the KOCA
/// satisfies every conclusion, grouped by the last rule applied. Also
/// checks the `∀e` substitution property and that `alli` rejects exactly
/// the attempts whose variable is free in the context.
pub fn adequacy_suite(
    a: &Koca,
    setup: &AdequacySetup,
    interp: &Interpretation,
    max_depth: usize,
    limits: &Limits,
    exec: Exec,
) -> Result<Report> {
    let (derivs, rejected) = enumerate_derivations(setup, max_depth);
    let mut rep = Report::new(format!("adequacy-depth{max_depth}"));
    let mut by_rule: BTreeMap<Rule, Vec<&Enumerated>> = BTreeMap::new();
    for e in &derivs {
        by_rule.entry(e.derivation.rule()).or_default().push(e);
    }
    for rule in Rule::ALL {
        let group = by_rule.get(&rule).cloned().unwrap_or_default();
        let mut witness = None;
        for e in &group {
            if let Some(w) = satisfaction_witness(a, interp, &e.sequent, limits, exec)? {
                witness = Some(w.with("sequent", e.sequent.to_string()));
                break;
            }
        }
        rep.push(CheckResult::from_witness(format!("adequate-{}", rule.label()), group.len() as u64, witness));
    }

    let sem = Semantics::new(a, interp, limits);
    let mut subst_cases = 0u64;
    let mut subst_witness = None;
    for e in by_rule.get(&Rule::AllE).into_iter().flatten() {
        let Derivation::AllE { body, witness } = &e.derivation else { continue };
        let premise = check_derivation(&setup.hyps[..e.context_len], body)?;
        let HoExpr::Forall { var, body: inner, .. } = &premise.conclusion else { continue };
        let mut vars: Vec<(String, Kind)> = inner.free_vars().into_iter().filter(|(n, _)| n != var).collect();
        vars.extend(witness.free_vars());
        vars.sort();
        vars.dedup();
        let (dims, total) = sem.assignments(&vars)?;
        let substituted = inner.substitute(var, witness);
        for idx in 0..total {
            subst_cases += 1;
            let vals = if dims.is_empty() { Vec::new() } else { decode(idx, &dims) };
            let mut env: Vec<(String, usize)> = vars.iter().map(|(x, _)| x.clone()).zip(vals.clone()).collect();
            let lhs = sem.eval(&substituted, &mut env)?;
            let m = sem.eval(witness, &mut env)?;
            env.push((var.clone(), m));
            let rhs = sem.eval(inner, &mut env)?;
            if lhs != rhs {
                subst_witness = Some(
                    Witness::new()
                        .with("formula", premise.conclusion.to_string())
                        .with("witness", witness.to_string()),
                );
                break;
            }
        }
        if subst_witness.is_some() {
            break;
        }
    }
    rep.push(CheckResult::from_witness("alle-substitution-sound", subst_cases, subst_witness));

    let wrongly = rejected.iter().find(|e| {
        let Derivation::AllI { var, .. } = &e.derivation else { return true };
        !e.sequent.context.iter().any(|(_, f)| f.has_free(var))
    });
    rep.push(CheckResult::from_witness(
        "alli-side-condition-enforced",
        rejected.len() as u64,
        wrongly.map(|e| Witness::new().with("sequent", e.sequent.to_string())),
    ));
    let covered: Vec<&str> = Rule::ALL
        .iter()
        .filter(|r| by_rule.contains_key(r))
        .map(|r| r.label())
        .collect();
    if let Some(last) = rep.checks.last_mut() {
        last.note = Some(format!("{} derivations; rules used: {}", derivs.len(), covered.join(" ")));
    }
    Ok(rep)
}
