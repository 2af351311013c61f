//! Typing derivations of L^ω and the realizers they extract.

use std::fmt;

use crate::error::{Error, Result};
use crate::term::{lambda_star, Term};

use super::syntax::{HoExpr, Kind};

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Derivation {
    /// A hypothesis of the context.
    Ax(String),
    /// Discharges `hyp : formula`.
    ImpI { hyp: String, formula: HoExpr, body: Box<Derivation> },
    ImpE(Box<Derivation>, Box<Derivation>),
    AllI { var: String, kind: Kind, body: Box<Derivation> },
    /// Instantiates the outer quantifier of the body's conclusion.
    AllE { body: Box<Derivation>, witness: HoExpr },
}

impl Derivation {
    pub fn rule(&self) -> Rule {
        match self {
            Derivation::Ax(_) => Rule::Ax,
            Derivation::ImpI { .. } => Rule::ImpI,
            Derivation::ImpE(..) => Rule::ImpE,
            Derivation::AllI { .. } => Rule::AllI,
            Derivation::AllE { .. } => Rule::AllE,
        }
    }

    /// Nesting depth; a lone `ax` has depth 1.
    pub fn depth(&self) -> usize {
        1 + match self {
            Derivation::Ax(_) => 0,
            Derivation::ImpI { body, .. } | Derivation::AllI { body, .. } | Derivation::AllE { body, .. } => {
                body.depth()
            }
            Derivation::ImpE(a, b) => a.depth().max(b.depth()),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Rule {
    Ax,
    ImpI,
    ImpE,
    AllI,
    AllE,
}

impl Rule {
    pub const ALL: [Rule; 5] = [Rule::Ax, Rule::ImpI, Rule::ImpE, Rule::AllI, Rule::AllE];

    pub fn label(self) -> &'static str {
        match self {
            Rule::Ax => "ax",
            Rule::ImpI => "impi",
            Rule::ImpE => "impe",
            Rule::AllI => "alli",
            Rule::AllE => "alle",
        }
    }
}

/// `x1 : A1, ..., xk : Ak ⊢ p : B` with `p` a term over the hypothesis
/// names.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Sequent {
    pub context: Vec<(String, HoExpr)>,
    pub realizer: Term,
    pub conclusion: HoExpr,
}

impl Sequent {
    /// Same context (up to α), realizer and conclusion (up to α).
    pub fn alpha_eq(&self, other: &Sequent) -> bool {
        self.realizer == other.realizer
            && self.conclusion.alpha_eq(&other.conclusion)
            && self.context.len() == other.context.len()
            && self
                .context
                .iter()
                .zip(&other.context)
                .all(|((x, a), (y, b))| x == y && a.alpha_eq(b))
    }
}

impl fmt::Display for Sequent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let ctx: Vec<String> = self.context.iter().map(|(x, a)| format!("{x} : {a}")).collect();
        write!(f, "{} |- {} : {}", ctx.join(", "), self.realizer, self.conclusion)
    }
}

fn derr(node: &str, msg: impl Into<String>) -> Error {
    Error::Derivation { node: node.to_string(), msg: msg.into() }
}

/// Recomputes the conclusion of `d` under `context`, bottom-up. The
/// `→i` rule emits `e(λ*x p)`; `→e` emits `p q`; the quantifier rules keep
/// the realizer.
pub fn check_derivation(context: &[(String, HoExpr)], d: &Derivation) -> Result<Sequent> {
    for (i, (x, a)) in context.iter().enumerate() {
        if context[..i].iter().any(|(y, _)| y == x) {
            return Err(derr("context", format!("hypothesis `{x}` declared twice")));
        }
        if !a.kind().is_o() {
            return Err(derr("context", format!("`{a}` is not a formula")));
        }
    }
    let mut ctx = context.to_vec();
    let (realizer, conclusion) = check(&mut ctx, d, "root")?;
    Ok(Sequent { context: context.to_vec(), realizer, conclusion })
}

fn check(ctx: &mut Vec<(String, HoExpr)>, d: &Derivation, node: &str) -> Result<(Term, HoExpr)> {
    match d {
        Derivation::Ax(x) => match ctx.iter().find(|(y, _)| y == x) {
            Some((_, a)) => Ok((Term::var(x.clone()), a.clone())),
            None => Err(derr(node, format!("`{x}` is not in the context"))),
        },
        Derivation::ImpI { hyp, formula, body } => {
            if ctx.iter().any(|(y, _)| y == hyp) {
                return Err(derr(node, format!("hypothesis `{hyp}` is already in the context")));
            }
            if !formula.kind().is_o() {
                return Err(derr(node, format!("`{formula}` is not a formula")));
            }
            ctx.push((hyp.clone(), formula.clone()));
            let r = check(ctx, body, &format!("{node}/impi"));
            ctx.pop();
            let (p, b) = r?;
            let imp = HoExpr::implies(formula.clone(), b).map_err(|e| derr(node, e.to_string()))?;
            Ok((Term::app(Term::e(), lambda_star(hyp, &p)), imp))
        }
        Derivation::ImpE(major, minor) => {
            let (p, ab) = check(ctx, major, &format!("{node}/impe.0"))?;
            let (q, a2) = check(ctx, minor, &format!("{node}/impe.1"))?;
            match ab {
                HoExpr::Implies(a, b) if a.alpha_eq(&a2) => Ok((Term::app(p, q), *b)),
                HoExpr::Implies(a, _) => Err(derr(
                    node,
                    format!("major premise expects `{a}`, minor premise proves `{a2}`"),
                )),
                other => Err(derr(node, format!("major premise `{other}` is not an implication"))),
            }
        }
        Derivation::AllI { var, kind, body } => {
            if let Some((h, a)) = ctx.iter().find(|(_, a)| a.has_free(var)) {
                return Err(derr(
                    node,
                    format!("`{var}` is free in the context (hypothesis `{h} : {a}`)"),
                ));
            }
            let (p, a) = check(ctx, body, &format!("{node}/alli"))?;
            if let Some((_, k)) = a.free_vars().into_iter().find(|(n, _)| n == var) {
                if &k != kind {
                    return Err(derr(node, format!("`{var}` occurs with kind {k}, not {kind}")));
                }
            }
            let all = HoExpr::forall(var, kind.clone(), a).map_err(|e| derr(node, e.to_string()))?;
            Ok((p, all))
        }
        Derivation::AllE { body, witness } => {
            let (p, f) = check(ctx, body, &format!("{node}/alle"))?;
            match f {
                HoExpr::Forall { var, var_kind, body } if var_kind == witness.kind() => {
                    Ok((p, body.substitute(&var, witness)))
                }
                HoExpr::Forall { var_kind, .. } => Err(derr(
                    node,
                    format!("witness `{witness}` has kind {}, expected {var_kind}", witness.kind()),
                )),
                other => Err(derr(node, format!("`{other}` is not universally quantified"))),
            }
        }
    }
}

/// The realizer `e(λ*x.x)` of `A ⇒ A`.
pub fn identity_realizer() -> Term {
    Term::app(Term::e(), lambda_star("x", &Term::var("x")))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn a() -> HoExpr {
        HoExpr::var("a", Kind::o())
    }

    #[test]
    fn ax_yields_the_hypothesis() {
        let s = check_derivation(&[("x1".into(), a())], &Derivation::Ax("x1".into())).unwrap();
        assert_eq!(s.realizer, Term::var("x1"));
        assert_eq!(s.conclusion, a());
    }

    #[test]
    fn identity_shape() {
        let d = Derivation::ImpI { hyp: "x".into(), formula: a(), body: Box::new(Derivation::Ax("x".into())) };
        let s = check_derivation(&[], &d).unwrap();
        assert_eq!(s.realizer, identity_realizer());
        assert_eq!(s.realizer.to_string(), "E (S K K)");
        assert_eq!(s.conclusion, HoExpr::implies(a(), a()).unwrap());
        assert_eq!(d.depth(), 2);
    }

    #[test]
    fn forall_intro_side_condition() {
        let x = HoExpr::var("x", Kind::o());
        let d = Derivation::AllI { var: "x".into(), kind: Kind::o(), body: Box::new(Derivation::Ax("h".into())) };
        let err = check_derivation(&[("h".into(), x)], &d).unwrap_err();
        assert!(matches!(err, Error::Derivation { .. }));
    }

    #[test]
    fn forall_elim_substitutes() {
        let x = HoExpr::var("x", Kind::o());
        let all = HoExpr::forall("x", Kind::o(), HoExpr::implies(x.clone(), x).unwrap()).unwrap();
        let d = Derivation::AllE { body: Box::new(Derivation::Ax("h".into())), witness: HoExpr::bot() };
        let s = check_derivation(&[("h".into(), all)], &d).unwrap();
        assert_eq!(s.conclusion, HoExpr::implies(HoExpr::bot(), HoExpr::bot()).unwrap());
        assert_eq!(s.realizer, Term::var("h"));
    }

    #[test]
    fn mismatched_modus_ponens() {
        let d = Derivation::ImpE(Box::new(Derivation::Ax("h".into())), Box::new(Derivation::Ax("h".into())));
        let imp = HoExpr::implies(a(), HoExpr::bot()).unwrap();
        assert!(check_derivation(&[("h".into(), imp)], &d).is_err());
    }
}
