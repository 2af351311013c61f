//! Kinds and kind-annotated expressions of L^ω.

use std::collections::BTreeSet;
use std::fmt;

use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Kind {
    Const(String),
    Arrow(Box<Kind>, Box<Kind>),
}

impl Kind {
    /// The kind of truth values.
    pub fn o() -> Kind {
        Kind::Const("o".into())
    }

    pub fn base(name: &str) -> Kind {
        Kind::Const(name.into())
    }

    pub fn arrow(a: Kind, b: Kind) -> Kind {
        Kind::Arrow(Box::new(a), Box::new(b))
    }

    pub fn is_o(&self) -> bool {
        matches!(self, Kind::Const(c) if c == "o")
    }
}

impl fmt::Display for Kind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Kind::Const(c) => write!(f, "{c}"),
            Kind::Arrow(a, b) => match **a {
                Kind::Arrow(..) => write!(f, "({a}) -> {b}"),
                _ => write!(f, "{a} -> {b}"),
            },
        }
    }
}

/// An expression together with its kind. Constructors check kinds, so
/// every value of this type is kind-correct.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum HoExpr {
    Var { name: String, kind: Kind },
    Const { name: String, kind: Kind },
    Lam { var: String, var_kind: Kind, body: Box<HoExpr>, kind: Kind },
    App { fun: Box<HoExpr>, arg: Box<HoExpr>, kind: Kind },
    Implies(Box<HoExpr>, Box<HoExpr>),
    Forall { var: String, var_kind: Kind, body: Box<HoExpr> },
}

fn kind_err(msg: String) -> Error {
    Error::Kind(msg)
}

impl HoExpr {
    pub fn var(name: &str, kind: Kind) -> HoExpr {
        HoExpr::Var { name: name.into(), kind }
    }

    pub fn constant(name: &str, kind: Kind) -> HoExpr {
        HoExpr::Const { name: name.into(), kind }
    }

    /// The built-in constant `bot : o`.
    pub fn bot() -> HoExpr {
        HoExpr::constant("bot", Kind::o())
    }

    pub fn lam(var: &str, var_kind: Kind, body: HoExpr) -> HoExpr {
        let kind = Kind::arrow(var_kind.clone(), body.kind());
        HoExpr::Lam { var: var.into(), var_kind, body: Box::new(body), kind }
    }

    pub fn app(fun: HoExpr, arg: HoExpr) -> Result<HoExpr> {
        match fun.kind() {
            Kind::Arrow(a, b) if *a == arg.kind() => Ok(HoExpr::App {
                fun: Box::new(fun),
                arg: Box::new(arg),
                kind: *b,
            }),
            Kind::Arrow(a, _) => Err(kind_err(format!(
                "`{fun}` expects an argument of kind {a}, `{arg}` has kind {}",
                arg.kind()
            ))),
            k => Err(kind_err(format!("`{fun}` has kind {k} and cannot be applied"))),
        }
    }

    pub fn implies(a: HoExpr, b: HoExpr) -> Result<HoExpr> {
        for side in [&a, &b] {
            if !side.kind().is_o() {
                return Err(kind_err(format!("`{side}` has kind {}, expected o", side.kind())));
            }
        }
        Ok(HoExpr::Implies(Box::new(a), Box::new(b)))
    }

    pub fn forall(var: &str, var_kind: Kind, body: HoExpr) -> Result<HoExpr> {
        if !body.kind().is_o() {
            return Err(kind_err(format!("`{body}` has kind {}, expected o", body.kind())));
        }
        Ok(HoExpr::Forall { var: var.into(), var_kind, body: Box::new(body) })
    }

    /// Leibniz equality `∀y:σ→o. (y M ⇒ y N)` with a `y` fresh for both
    /// sides.
    pub fn leibniz(m: HoExpr, n: HoExpr) -> Result<HoExpr> {
        let sigma = m.kind();
        if n.kind() != sigma {
            return Err(kind_err(format!(
                "equality between kinds {sigma} and {}",
                n.kind()
            )));
        }
        let mut avoid = m.all_names();
        avoid.extend(n.all_names());
        let y = fresh("y", &avoid);
        let yk = Kind::arrow(sigma, Kind::o());
        let yv = HoExpr::var(&y, yk.clone());
        let body = HoExpr::implies(HoExpr::app(yv.clone(), m)?, HoExpr::app(yv, n)?)?;
        HoExpr::forall(&y, yk, body)
    }

    pub fn kind(&self) -> Kind {
        match self {
            HoExpr::Var { kind, .. } | HoExpr::Const { kind, .. } => kind.clone(),
            HoExpr::Lam { kind, .. } | HoExpr::App { kind, .. } => kind.clone(),
            HoExpr::Implies(..) | HoExpr::Forall { .. } => Kind::o(),
        }
    }

    /// Free variables with their kinds.
    pub fn free_vars(&self) -> BTreeSet<(String, Kind)> {
        let mut out = BTreeSet::new();
        self.collect_free(&mut Vec::new(), &mut out);
        out
    }

    fn collect_free(&self, bound: &mut Vec<String>, out: &mut BTreeSet<(String, Kind)>) {
        match self {
            HoExpr::Var { name, kind } => {
                if !bound.contains(name) {
                    out.insert((name.clone(), kind.clone()));
                }
            }
            HoExpr::Const { .. } => {}
            HoExpr::Lam { var, body, .. } | HoExpr::Forall { var, body, .. } => {
                bound.push(var.clone());
                body.collect_free(bound, out);
                bound.pop();
            }
            HoExpr::App { fun: a, arg: b, .. } | HoExpr::Implies(a, b) => {
                a.collect_free(bound, out);
                b.collect_free(bound, out);
            }
        }
    }

    pub fn has_free(&self, x: &str) -> bool {
        self.free_vars().iter().any(|(n, _)| n == x)
    }

    /// Every variable name occurring, bound or free.
    fn all_names(&self) -> BTreeSet<String> {
        match self {
            HoExpr::Var { name, .. } => BTreeSet::from([name.clone()]),
            HoExpr::Const { .. } => BTreeSet::new(),
            HoExpr::Lam { var, body, .. } | HoExpr::Forall { var, body, .. } => {
                let mut s = body.all_names();
                s.insert(var.clone());
                s
            }
            HoExpr::App { fun: a, arg: b, .. } | HoExpr::Implies(a, b) => {
                let mut s = a.all_names();
                s.extend(b.all_names());
                s
            }
        }
    }

    /// Capture-avoiding `self{x := m}`.
    pub fn substitute(&self, x: &str, m: &HoExpr) -> HoExpr {
        match self {
            HoExpr::Var { name, .. } if name == x => m.clone(),
            HoExpr::Var { .. } | HoExpr::Const { .. } => self.clone(),
            HoExpr::App { fun, arg, kind } => HoExpr::App {
                fun: Box::new(fun.substitute(x, m)),
                arg: Box::new(arg.substitute(x, m)),
                kind: kind.clone(),
            },
            HoExpr::Implies(a, b) => {
                HoExpr::Implies(Box::new(a.substitute(x, m)), Box::new(b.substitute(x, m)))
            }
            HoExpr::Lam { var, var_kind, body, kind } => {
                let (v, b) = self.subst_binder(var, var_kind, body, x, m);
                HoExpr::Lam { var: v, var_kind: var_kind.clone(), body: Box::new(b), kind: kind.clone() }
            }
            HoExpr::Forall { var, var_kind, body } => {
                let (v, b) = self.subst_binder(var, var_kind, body, x, m);
                HoExpr::Forall { var: v, var_kind: var_kind.clone(), body: Box::new(b) }
            }
        }
    }

    fn subst_binder(&self, var: &str, kind: &Kind, body: &HoExpr, x: &str, m: &HoExpr) -> (String, HoExpr) {
        if var == x || !body.has_free(x) {
            return (var.to_string(), body.clone());
        }
        if !m.has_free(var) {
            return (var.to_string(), body.substitute(x, m));
        }
        let mut avoid = body.all_names();
        avoid.extend(m.all_names());
        avoid.insert(x.to_string());
        let v = fresh(var, &avoid);
        let renamed = body.substitute(var, &HoExpr::var(&v, kind.clone()));
        (v, renamed.substitute(x, m))
    }

    /// Equality up to renaming of bound variables.
    pub fn alpha_eq(&self, other: &HoExpr) -> bool {
        alpha(self, other, &mut Vec::new())
    }
}

fn alpha(a: &HoExpr, b: &HoExpr, env: &mut Vec<(String, String)>) -> bool {
    use HoExpr as H;
    match (a, b) {
        (H::Var { name: x, kind: k1 }, H::Var { name: y, kind: k2 }) => {
            k1 == k2
                && match env.iter().rev().find(|(l, r)| l == x || r == y) {
                    Some((l, r)) => l == x && r == y,
                    None => x == y,
                }
        }
        (H::Const { name: x, kind: k1 }, H::Const { name: y, kind: k2 }) => x == y && k1 == k2,
        (H::App { fun: f1, arg: a1, .. }, H::App { fun: f2, arg: a2, .. })
        | (H::Implies(f1, a1), H::Implies(f2, a2)) => alpha(f1, f2, env) && alpha(a1, a2, env),
        (
            H::Lam { var: x, var_kind: k1, body: b1, .. },
            H::Lam { var: y, var_kind: k2, body: b2, .. },
        )
        | (
            H::Forall { var: x, var_kind: k1, body: b1 },
            H::Forall { var: y, var_kind: k2, body: b2 },
        ) => {
            if k1 != k2 {
                return false;
            }
            env.push((x.clone(), y.clone()));
            let r = alpha(b1, b2, env);
            env.pop();
            r
        }
        _ => false,
    }
}

/// `base`, `base'`, `base''`, ... whichever is first not in `avoid`.
pub fn fresh(base: &str, avoid: &BTreeSet<String>) -> String {
    let mut name = base.to_string();
    while avoid.contains(&name) {
        name.push('\'');
    }
    name
}

impl fmt::Display for HoExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.write(f, 0)
    }
}

impl HoExpr {
    /// Precedence levels: 0 binder/implication, 1 application head,
    /// 2 argument.
    fn write(&self, f: &mut fmt::Formatter<'_>, level: u8) -> fmt::Result {
        match self {
            HoExpr::Var { name, .. } | HoExpr::Const { name, .. } => write!(f, "{name}"),
            HoExpr::App { fun, arg, .. } => {
                if level >= 2 {
                    write!(f, "(")?;
                }
                fun.write(f, 1)?;
                write!(f, " ")?;
                arg.write(f, 2)?;
                if level >= 2 {
                    write!(f, ")")?;
                }
                Ok(())
            }
            HoExpr::Implies(a, b) => self.wrap(f, level, |f| {
                a.write(f, 1)?;
                write!(f, " => ")?;
                b.write(f, 0)
            }),
            HoExpr::Lam { var, var_kind, body, .. } => self.wrap(f, level, |f| {
                write!(f, "\\{var}:{}. ", KindArg(var_kind))?;
                body.write(f, 0)
            }),
            HoExpr::Forall { var, var_kind, body } => self.wrap(f, level, |f| {
                write!(f, "forall {var}:{}. ", KindArg(var_kind))?;
                body.write(f, 0)
            }),
        }
    }

    fn wrap(
        &self,
        f: &mut fmt::Formatter<'_>,
        level: u8,
        inner: impl FnOnce(&mut fmt::Formatter<'_>) -> fmt::Result,
    ) -> fmt::Result {
        if level > 0 {
            write!(f, "(")?;
            inner(f)?;
            write!(f, ")")
        } else {
            inner(f)
        }
    }
}

/// Binder annotations parenthesize arrow kinds so the output re-parses.
struct KindArg<'a>(&'a Kind);

impl fmt::Display for KindArg<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.0 {
            Kind::Arrow(..) => write!(f, "({})", self.0),
            k => write!(f, "{k}"),
        }
    }
}
