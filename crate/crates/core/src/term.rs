//! Combinator terms over an algebra: constants, variables and application,
//! with bracket abstraction and evaluation.

use std::collections::BTreeSet;
use std::fmt;

use crate::error::{Error, Result};

/// A constant leaf: a carrier element or one of the distinguished
/// combinators, resolved by the algebra at evaluation time.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Atom {
    Elem(usize),
    K,
    S,
    E,
    C,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Term {
    Const(Atom),
    Var(String),
    App(Box<Term>, Box<Term>),
}

/// Anything with a total binary application on `0..size()`.
pub trait Applicative: Sync {
    fn size(&self) -> usize;
    fn apply(&self, a: usize, b: usize) -> usize;
    /// The carrier element an atom stands for.
    fn atom(&self, atom: Atom) -> Result<usize>;
    /// Display name of a carrier element.
    fn name(&self, a: usize) -> String {
        a.to_string()
    }
}

impl Term {
    pub fn elem(a: usize) -> Term {
        Term::Const(Atom::Elem(a))
    }

    pub fn var(name: impl Into<String>) -> Term {
        Term::Var(name.into())
    }

    pub fn k() -> Term {
        Term::Const(Atom::K)
    }

    pub fn s() -> Term {
        Term::Const(Atom::S)
    }

    pub fn e() -> Term {
        Term::Const(Atom::E)
    }

    pub fn c() -> Term {
        Term::Const(Atom::C)
    }

    pub fn app(f: Term, x: Term) -> Term {
        Term::App(Box::new(f), Box::new(x))
    }

    /// `head a1 a2 ...`, associated to the left.
    pub fn apps<I: IntoIterator<Item = Term>>(head: Term, args: I) -> Term {
        args.into_iter().fold(head, Term::app)
    }

    pub fn app_nodes(&self) -> usize {
        match self {
            Term::App(f, x) => 1 + f.app_nodes() + x.app_nodes(),
            _ => 0,
        }
    }

    pub fn contains_var(&self, y: &str) -> bool {
        match self {
            Term::Var(x) => x == y,
            Term::Const(_) => false,
            Term::App(f, x) => f.contains_var(y) || x.contains_var(y),
        }
    }

    pub fn free_vars(&self) -> BTreeSet<String> {
        let mut out = BTreeSet::new();
        self.collect_vars(&mut out);
        out
    }

    fn collect_vars(&self, out: &mut BTreeSet<String>) {
        match self {
            Term::Var(x) => {
                out.insert(x.clone());
            }
            Term::Const(_) => {}
            Term::App(f, x) => {
                f.collect_vars(out);
                x.collect_vars(out);
            }
        }
    }

    pub fn atoms(&self) -> BTreeSet<Atom> {
        let mut out = BTreeSet::new();
        self.collect_atoms(&mut out);
        out
    }

    fn collect_atoms(&self, out: &mut BTreeSet<Atom>) {
        match self {
            Term::Const(a) => {
                out.insert(*a);
            }
            Term::Var(_) => {}
            Term::App(f, x) => {
                f.collect_atoms(out);
                x.collect_atoms(out);
            }
        }
    }

    pub fn is_closed(&self) -> bool {
        match self {
            Term::Var(_) => false,
            Term::Const(_) => true,
            Term::App(f, x) => f.is_closed() && x.is_closed(),
        }
    }

    /// `self{y := u}`. Terms have no binders, so this is plain replacement.
    pub fn substitute(&self, y: &str, u: &Term) -> Term {
        match self {
            Term::Var(x) if x == y => u.clone(),
            Term::App(f, x) => Term::app(f.substitute(y, u), x.substitute(y, u)),
            other => other.clone(),
        }
    }

    /// Renders with the algebra's element names.
    pub fn show(&self, alg: &dyn Applicative) -> String {
        let mut s = String::new();
        self.write(&mut s, &|a| match a {
            Atom::Elem(i) => alg.name(i),
            other => atom_symbol(other).to_string(),
        }, false);
        s
    }

    fn write(&self, out: &mut String, name: &dyn Fn(Atom) -> String, as_arg: bool) {
        match self {
            Term::Const(a) => out.push_str(&name(*a)),
            Term::Var(x) => out.push_str(x),
            Term::App(f, x) => {
                if as_arg {
                    out.push('(');
                }
                f.write(out, name, false);
                out.push(' ');
                x.write(out, name, true);
                if as_arg {
                    out.push(')');
                }
            }
        }
    }
}

fn atom_symbol(a: Atom) -> &'static str {
    match a {
        Atom::K => "K",
        Atom::S => "S",
        Atom::E => "E",
        Atom::C => "C",
        Atom::Elem(_) => "?",
    }
}

impl fmt::Display for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut s = String::new();
        self.write(&mut s, &|a| match a {
            Atom::Elem(i) => format!("#{i}"),
            other => atom_symbol(other).to_string(),
        }, false);
        f.write_str(&s)
    }
}

/// Bracket abstraction `λ*y(t)`.
pub fn lambda_star(y: &str, t: &Term) -> Term {
    match t {
        Term::Var(x) if x == y => Term::apps(Term::s(), [Term::k(), Term::k()]),
        Term::App(p, q) => Term::apps(Term::s(), [lambda_star(y, p), lambda_star(y, q)]),
        other => Term::app(Term::k(), other.clone()),
    }
}

/// `λ*x1 λ*x2 ... (t)`.
pub fn lambdas(vars: &[&str], t: &Term) -> Term {
    vars.iter().rev().fold(t.clone(), |acc, v| lambda_star(v, &acc))
}

/// Evaluates a closed term.
pub fn eval(alg: &dyn Applicative, t: &Term) -> Result<usize> {
    eval_with(alg, t, &|_| None)
}

/// Evaluates a term, reading variables from `env`.
pub fn eval_with(
    alg: &dyn Applicative,
    t: &Term,
    env: &dyn Fn(&str) -> Option<usize>,
) -> Result<usize> {
    match t {
        Term::Const(Atom::Elem(a)) if *a >= alg.size() => Err(Error::Eval(format!(
            "constant #{a} is not in a carrier of size {}",
            alg.size()
        ))),
        Term::Const(a) => alg.atom(*a),
        Term::Var(x) => env(x).ok_or_else(|| Error::Eval(format!("free variable `{x}`"))),
        Term::App(f, x) => Ok(alg.apply(eval_with(alg, f, env)?, eval_with(alg, x, env)?)),
    }
}

/// Parses `ident`, whitespace application and parentheses. Identifiers
/// accepted by `resolve` become constants, the rest variables.
pub fn parse_term(src: &str, resolve: &dyn Fn(&str) -> Option<Atom>) -> Result<Term> {
    let tokens = tokenize(src)?;
    let mut pos = 0;
    let t = parse_seq(&tokens, &mut pos, resolve)?;
    if pos != tokens.len() {
        return Err(term_parse_error(&tokens, pos, "unexpected `)`"));
    }
    Ok(t)
}

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Open,
    Close,
    Ident(String),
}

fn tokenize(src: &str) -> Result<Vec<(Tok, usize)>> {
    let mut out = Vec::new();
    let mut chars = src.char_indices().peekable();
    while let Some(&(i, ch)) = chars.peek() {
        if ch.is_whitespace() {
            chars.next();
        } else if ch == '(' {
            out.push((Tok::Open, i));
            chars.next();
        } else if ch == ')' {
            out.push((Tok::Close, i));
            chars.next();
        } else if ch.is_alphanumeric() || "_'#{},".contains(ch) {
            let mut s = String::new();
            while let Some(&(_, c)) = chars.peek() {
                if c.is_alphanumeric() || "_'#{},".contains(c) {
                    s.push(c);
                    chars.next();
                } else {
                    break;
                }
            }
            out.push((Tok::Ident(s), i));
        } else {
            return Err(Error::Parse {
                line: 1,
                col: i + 1,
                msg: format!("unexpected character `{ch}`"),
            });
        }
    }
    Ok(out)
}

fn term_parse_error(tokens: &[(Tok, usize)], pos: usize, msg: &str) -> Error {
    let col = tokens.get(pos).map(|t| t.1 + 1).unwrap_or(0);
    Error::Parse {
        line: 1,
        col,
        msg: msg.into(),
    }
}

fn parse_seq(
    tokens: &[(Tok, usize)],
    pos: &mut usize,
    resolve: &dyn Fn(&str) -> Option<Atom>,
) -> Result<Term> {
    let mut acc: Option<Term> = None;
    while let Some((tok, _)) = tokens.get(*pos) {
        let item = match tok {
            Tok::Close => break,
            Tok::Open => {
                *pos += 1;
                let inner = parse_seq(tokens, pos, resolve)?;
                if tokens.get(*pos).map(|t| &t.0) != Some(&Tok::Close) {
                    return Err(term_parse_error(tokens, *pos, "missing `)`"));
                }
                *pos += 1;
                inner
            }
            Tok::Ident(name) => {
                *pos += 1;
                match resolve(name) {
                    Some(a) => Term::Const(a),
                    None => Term::Var(name.clone()),
                }
            }
        };
        acc = Some(match acc {
            None => item,
            Some(f) => Term::app(f, item),
        });
    }
    acc.ok_or_else(|| term_parse_error(tokens, *pos, "empty term"))
}

/// Every term with at most `max_nodes` application nodes over `leaves`,
/// ordered by node count and then by leaf/shape order.
pub fn enumerate_terms(leaves: &[Term], max_nodes: usize) -> Vec<Term> {
    let mut by_size: Vec<Vec<Term>> = vec![leaves.to_vec()];
    for n in 1..=max_nodes {
        let mut level = Vec::new();
        for left in 0..n {
            let right = n - 1 - left;
            for f in &by_size[left] {
                for x in &by_size[right] {
                    level.push(Term::app(f.clone(), x.clone()));
                }
            }
        }
        by_size.push(level);
    }
    by_size.into_iter().flatten().collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Application is the left projection on three elements.
    struct LeftProj;

    impl Applicative for LeftProj {
        fn size(&self) -> usize {
            3
        }
        fn apply(&self, a: usize, _b: usize) -> usize {
            a
        }
        fn atom(&self, atom: Atom) -> Result<usize> {
            match atom {
                Atom::Elem(a) => Ok(a),
                Atom::K | Atom::S => Ok(2),
                _ => Err(Error::Eval("no such combinator".into())),
            }
        }
    }

    #[test]
    fn lambda_star_cases() {
        let skk = Term::apps(Term::s(), [Term::k(), Term::k()]);
        assert_eq!(lambda_star("y", &Term::var("y")), skk);
        assert_eq!(
            lambda_star("y", &Term::var("x")),
            Term::app(Term::k(), Term::var("x"))
        );
        assert_eq!(
            lambda_star("y", &Term::elem(1)),
            Term::app(Term::k(), Term::elem(1))
        );
        let t = Term::app(Term::var("y"), Term::var("x"));
        let l = lambda_star("y", &t);
        assert!(!l.contains_var("y"));
        assert_eq!(
            l,
            Term::apps(Term::s(), [skk, Term::app(Term::k(), Term::var("x"))])
        );
    }

    #[test]
    fn eval_errors() {
        assert!(matches!(eval(&LeftProj, &Term::var("x")), Err(Error::Eval(_))));
        assert!(matches!(eval(&LeftProj, &Term::elem(7)), Err(Error::Eval(_))));
        assert!(eval(&LeftProj, &Term::e()).is_err());
        assert_eq!(eval(&LeftProj, &Term::app(Term::elem(1), Term::k())).unwrap(), 1);
    }

    #[test]
    fn parse_is_left_associative() {
        let resolve = |s: &str| match s {
            "k" => Some(Atom::K),
            "s" => Some(Atom::S),
            _ => None,
        };
        let t = parse_term("s k k x", &resolve).unwrap();
        assert_eq!(
            t,
            Term::apps(Term::s(), [Term::k(), Term::k(), Term::var("x")])
        );
        let t = parse_term("x (y z)", &resolve).unwrap();
        assert_eq!(
            t,
            Term::app(Term::var("x"), Term::app(Term::var("y"), Term::var("z")))
        );
        assert_eq!(t.to_string(), "x (y z)");
        assert!(matches!(parse_term("(x", &resolve), Err(Error::Parse { .. })));
        assert!(parse_term("x)", &resolve).is_err());
        assert!(parse_term("", &resolve).is_err());
    }

    #[test]
    fn enumeration_counts() {
        let leaves = [Term::elem(0), Term::elem(1)];
        // Catalan numbers times leaf choices: 2 + 4 + 16.
        assert_eq!(enumerate_terms(&leaves, 2).len(), 22);
    }
}
