//! Hilbert-style proofs for the implicational fragment of classical logic
//! and their evaluation to combinator terms.

use std::collections::BTreeSet;
use std::fmt;

use crate::aks::{AbstractKrivineStructure, LemmaScope, ALL_SUBSETS_MAX};
use crate::error::{Error, Result};
use crate::exec::Exec;
use crate::limits::Limits;
use crate::report::{CheckResult, Report, Witness};
use crate::term::{eval, Term};

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Formula {
    Var(String),
    Imp(Box<Formula>, Box<Formula>),
}

impl Formula {
    pub fn var(x: &str) -> Formula {
        Formula::Var(x.into())
    }

    pub fn imp(a: Formula, b: Formula) -> Formula {
        Formula::Imp(Box::new(a), Box::new(b))
    }

    pub fn vars(&self) -> BTreeSet<String> {
        match self {
            Formula::Var(x) => BTreeSet::from([x.clone()]),
            Formula::Imp(a, b) => {
                let mut v = a.vars();
                v.extend(b.vars());
                v
            }
        }
    }
}

impl fmt::Display for Formula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Formula::Var(x) => write!(f, "{x}"),
            Formula::Imp(a, b) => match **a {
                Formula::Imp(..) => write!(f, "({a}) -> {b}"),
                _ => write!(f, "{a} -> {b}"),
            },
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum HilbertProof {
    /// `φ → ψ → φ`
    K(Formula, Formula),
    /// `(φ → ψ → θ) → (φ → ψ) → φ → θ`
    S(Formula, Formula, Formula),
    /// `((φ → ψ) → φ) → φ`
    Peirce(Formula, Formula),
    /// From a proof of `A → B` and one of `A`.
    Mp(Box<HilbertProof>, Box<HilbertProof>),
}

impl HilbertProof {
    pub fn mp(major: HilbertProof, minor: HilbertProof) -> HilbertProof {
        HilbertProof::Mp(Box::new(major), Box::new(minor))
    }

    pub fn conclusion(&self) -> Result<Formula> {
        use Formula as F;
        Ok(match self {
            HilbertProof::K(p, q) => F::imp(p.clone(), F::imp(q.clone(), p.clone())),
            HilbertProof::S(p, q, r) => F::imp(
                F::imp(p.clone(), F::imp(q.clone(), r.clone())),
                F::imp(F::imp(p.clone(), q.clone()), F::imp(p.clone(), r.clone())),
            ),
            HilbertProof::Peirce(p, q) => {
                F::imp(F::imp(F::imp(p.clone(), q.clone()), p.clone()), p.clone())
            }
            HilbertProof::Mp(major, minor) => {
                let maj = major.conclusion()?;
                let min = minor.conclusion()?;
                match maj {
                    F::Imp(a, b) if *a == min => *b,
                    other => {
                        return Err(Error::structural(format!(
                            "modus ponens: major premise `{other}` does not start with `{min}`"
                        )))
                    }
                }
            }
        })
    }
}

/// Maps axiom leaves to `K`, `S`, `C` and modus ponens to application.
pub fn hilbert_eval(proof: &HilbertProof) -> Result<Term> {
    proof.conclusion()?;
    Ok(proof_term(proof))
}

fn proof_term(proof: &HilbertProof) -> Term {
    match proof {
        HilbertProof::K(..) => Term::k(),
        HilbertProof::S(..) => Term::s(),
        HilbertProof::Peirce(..) => Term::c(),
        HilbertProof::Mp(a, b) => Term::app(proof_term(a), proof_term(b)),
    }
}

/// The standard `S K K` proof of `φ → φ`.
pub fn identity_proof(phi: &Formula) -> HilbertProof {
    let pp = Formula::imp(phi.clone(), phi.clone());
    HilbertProof::mp(
        HilbertProof::mp(
            HilbertProof::S(phi.clone(), pp.clone(), phi.clone()),
            HilbertProof::K(phi.clone(), pp),
        ),
        HilbertProof::K(phi.clone(), phi.clone()),
    )
}

/// A few small provable formulas: the three axioms, identity and the
/// composition law derived from them.
pub fn sample_proofs() -> Vec<HilbertProof> {
    let (p, q, r) = (Formula::var("P"), Formula::var("Q"), Formula::var("R"));
    let qr = Formula::imp(q.clone(), r.clone());
    let pq = Formula::imp(p.clone(), q.clone());
    // (Q→R) → (P→Q→R) by K, then S distributes: (P→Q)→P→R.
    let k_qr = HilbertProof::K(qr.clone(), p.clone());
    let s_pqr = HilbertProof::S(p.clone(), q.clone(), r.clone());
    let lift_s = HilbertProof::K(
        Formula::imp(
            Formula::imp(p.clone(), qr.clone()),
            Formula::imp(pq.clone(), Formula::imp(p.clone(), r.clone())),
        ),
        qr.clone(),
    );
    let s_outer = HilbertProof::S(
        qr.clone(),
        Formula::imp(p.clone(), qr.clone()),
        Formula::imp(pq, Formula::imp(p.clone(), r)),
    );
    let composition = HilbertProof::mp(
        HilbertProof::mp(s_outer, HilbertProof::mp(lift_s, s_pqr)),
        k_qr,
    );
    vec![
        HilbertProof::K(p.clone(), q.clone()),
        HilbertProof::S(p.clone(), q.clone(), Formula::var("R")),
        HilbertProof::Peirce(p.clone(), q),
        identity_proof(&p),
        composition,
    ]
}

fn eval_formula(
    aks: &AbstractKrivineStructure,
    f: &Formula,
    vars: &[String],
    values: &[u128],
) -> u128 {
    match f {
        Formula::Var(x) => values[vars.iter().position(|v| v == x).expect("bound")],
        Formula::Imp(a, b) => aks.imp_raw(
            eval_formula(aks, a, vars, values),
            eval_formula(aks, b, vars, values),
        ),
    }
}

/// For each proof, the evaluated proof term is a quasi-proof orthogonal to
/// the formula's value under every assignment of stack sets, implication
/// read as `P ⇒ Q = ^⊥P·Q`.
pub fn aks_quasi_proof_check(
    aks: &AbstractKrivineStructure,
    proofs: &[HilbertProof],
    limits: &Limits,
    scope: LemmaScope,
    exec: Exec,
) -> Result<Report> {
    let family: Vec<u128> = match scope {
        LemmaScope::AllSubsets if aks.n_stacks() <= ALL_SUBSETS_MAX => {
            (0..1u128 << aks.n_stacks()).collect()
        }
        _ => aks
            .lattice()
            .enumerate_closed_stack_sets(limits)?
            .iter()
            .map(|p| p.bits())
            .collect(),
    };
    let mut r = Report::new("hilbert-quasi-proofs");
    for (i, proof) in proofs.iter().enumerate() {
        let formula = proof.conclusion()?;
        let term = hilbert_eval(proof)?;
        let t = eval(aks, &term)?;
        let vars: Vec<String> = formula.vars().into_iter().collect();
        let dims = vec![family.len(); vars.len()];
        let name = format!("proof{i}: {formula}");
        if !aks.qp().contains(t) {
            r.push(CheckResult::fail(
                name,
                1,
                Witness::new().with("term", term.show(aks)).with("value", aks.lattice().terms()[t].clone()),
            ));
            continue;
        }
        let w = exec
            .first_violation(&dims, |pt| {
                let values: Vec<u128> = pt.iter().map(|&j| family[j]).collect();
                aks.perp_s(eval_formula(aks, &formula, &vars, &values)) >> t & 1 == 1
            })
            .map(|pt| {
                vars.iter().zip(&pt).fold(Witness::new(), |w, (v, &j)| {
                    w.with(v.clone(), aks.lattice().show_stacks(&aks.lattice().stack_set(family[j])))
                })
            });
        let cases = (family.len() as u64).pow(vars.len() as u32);
        r.push(CheckResult::from_witness(name, cases, w));
    }
    Ok(r)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn axiom_leaves() {
        let p = Formula::var("p");
        assert_eq!(hilbert_eval(&HilbertProof::K(p.clone(), p.clone())).unwrap(), Term::k());
        assert_eq!(
            hilbert_eval(&HilbertProof::Peirce(p.clone(), p.clone())).unwrap(),
            Term::c()
        );
    }

    #[test]
    fn identity_is_skk() {
        let p = Formula::var("p");
        let proof = identity_proof(&p);
        assert_eq!(proof.conclusion().unwrap(), Formula::imp(p.clone(), p));
        assert_eq!(
            hilbert_eval(&proof).unwrap(),
            Term::apps(Term::s(), [Term::k(), Term::k()])
        );
    }

    #[test]
    fn malformed_mp_rejected() {
        let p = Formula::var("p");
        let q = Formula::var("q");
        let bad = HilbertProof::mp(HilbertProof::K(p.clone(), q.clone()), HilbertProof::K(q, p));
        assert!(matches!(hilbert_eval(&bad), Err(Error::Structural(_))));
    }

    #[test]
    fn samples_are_well_formed() {
        for p in sample_proofs() {
            p.conclusion().unwrap();
        }
    }
}
