//! Surface syntax for kinds, expressions and derivations.
//!
//! ```text
//! kind I;
//! const 0 : I;
//! const succ : I -> I;
//! var y : I -> o;
//! def refl := forall x:I. x = x;
//! formula id := bot => bot;
//! derivation id (h : y 0) := (ax h);
//! ```
//!
//! Expressions: `\x:k. e`, `forall x:k. e`, `e1 e2` (left associative),
//! `e1 => e2` (right associative), `M = N` (Leibniz equality) and the
//! constant `bot : o`. Derivation trees are s-expressions over `ax`,
//! `impi`, `impe`, `alli` and `alle`, with embedded expressions in square
//! brackets. `#` starts a comment.

use crate::error::{Error, Result};

use super::derivation::Derivation;
use super::syntax::{HoExpr, Kind};

#[derive(Debug, Clone, PartialEq, Eq)]
enum Tok {
    Ident(String),
    Sym(&'static str),
}

#[derive(Debug, Clone)]
struct Token {
    tok: Tok,
    line: usize,
    col: usize,
}

const SYMBOLS: [&str; 13] = [":=", "=>", "->", "(", ")", "[", "]", ":", ".", ",", ";", "=", "\\"];

fn is_ident_char(c: char) -> bool {
    c.is_ascii_alphanumeric() || c == '_' || c == '\''
}

fn lex(src: &str) -> Result<Vec<Token>> {
    let mut out = Vec::new();
    for (ln, line) in src.lines().enumerate() {
        let chars: Vec<char> = line.chars().collect();
        let mut i = 0;
        while i < chars.len() {
            let c = chars[i];
            let (l, col) = (ln + 1, i + 1);
            if c == '#' {
                break;
            }
            if c.is_whitespace() {
                i += 1;
                continue;
            }
            if !c.is_ascii() {
                return Err(Error::Parse { line: l, col, msg: format!("non-ASCII character `{c}`") });
            }
            if is_ident_char(c) {
                let start = i;
                while i < chars.len() && is_ident_char(chars[i]) {
                    i += 1;
                }
                out.push(Token { tok: Tok::Ident(chars[start..i].iter().collect()), line: l, col });
                continue;
            }
            let rest: String = chars[i..].iter().take(2).collect();
            match SYMBOLS.iter().find(|s| rest.starts_with(*s)) {
                Some(s) => {
                    out.push(Token { tok: Tok::Sym(s), line: l, col });
                    i += s.len();
                }
                None => return Err(Error::Parse { line: l, col, msg: format!("unexpected character `{c}`") }),
            }
        }
    }
    Ok(out)
}

/// Declared kinds, constants, free variables and definitions.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Signature {
    pub kinds: Vec<String>,
    pub consts: Vec<(String, Kind)>,
    pub vars: Vec<(String, Kind)>,
    pub defs: Vec<(String, HoExpr)>,
}

impl Signature {
    pub fn const_kind(&self, name: &str) -> Option<&Kind> {
        self.consts.iter().find(|(n, _)| n == name).map(|(_, k)| k)
    }

    pub fn var_kind(&self, name: &str) -> Option<&Kind> {
        self.vars.iter().find(|(n, _)| n == name).map(|(_, k)| k)
    }

    fn declared(&self, name: &str) -> bool {
        name == "bot"
            || self.const_kind(name).is_some()
            || self.var_kind(name).is_some()
            || self.defs.iter().any(|(n, _)| n == name)
    }
}

/// A parsed `.ho` file.
#[derive(Debug, Clone, Default)]
pub struct Document {
    pub signature: Signature,
    pub formulas: Vec<(String, HoExpr)>,
    pub derivations: Vec<NamedDerivation>,
}

#[derive(Debug, Clone)]
pub struct NamedDerivation {
    pub name: String,
    pub context: Vec<(String, HoExpr)>,
    pub tree: Derivation,
}

const KEYWORDS: [&str; 12] = [
    "kind", "const", "var", "def", "formula", "derivation", "forall", "ax", "impi", "impe", "alli", "alle",
];

struct Parser<'a> {
    toks: Vec<Token>,
    pos: usize,
    sig: &'a mut Signature,
    bound: Vec<(String, Kind)>,
}

impl Parser<'_> {
    fn err_at(&self, pos: usize, msg: impl Into<String>) -> Error {
        let (line, col) = match self.toks.get(pos).or(self.toks.last()) {
            Some(t) => (t.line, t.col),
            None => (1, 1),
        };
        Error::Parse { line, col, msg: msg.into() }
    }

    fn err(&self, msg: impl Into<String>) -> Error {
        self.err_at(self.pos, msg)
    }

    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|t| &t.tok)
    }

    fn at_sym(&self, s: &str) -> bool {
        matches!(self.peek(), Some(Tok::Sym(x)) if *x == s)
    }

    fn at_word(&self, w: &str) -> bool {
        matches!(self.peek(), Some(Tok::Ident(x)) if x == w)
    }

    fn expect_sym(&mut self, s: &str) -> Result<()> {
        if self.at_sym(s) {
            self.pos += 1;
            Ok(())
        } else {
            Err(self.err(format!("expected `{s}`")))
        }
    }

    fn ident(&mut self) -> Result<String> {
        match self.peek() {
            Some(Tok::Ident(x)) => {
                let x = x.clone();
                self.pos += 1;
                Ok(x)
            }
            _ => Err(self.err("expected an identifier")),
        }
    }

    /// Wraps a kind error with the position where the construct began.
    fn located<T>(&self, start: usize, r: Result<T>) -> Result<T> {
        r.map_err(|e| match e {
            Error::Kind(msg) => self.err_at(start, format!("kind error: {msg}")),
            other => other,
        })
    }

    fn kind(&mut self) -> Result<Kind> {
        let head = if self.at_sym("(") {
            self.pos += 1;
            let k = self.kind()?;
            self.expect_sym(")")?;
            k
        } else {
            let start = self.pos;
            let name = self.ident()?;
            if name != "o" && !self.sig.kinds.contains(&name) {
                return Err(self.err_at(start, format!("undeclared kind `{name}`")));
            }
            Kind::Const(name)
        };
        if self.at_sym("->") {
            self.pos += 1;
            Ok(Kind::arrow(head, self.kind()?))
        } else {
            Ok(head)
        }
    }

    fn expr(&mut self) -> Result<HoExpr> {
        let start = self.pos;
        if self.at_word("forall") || self.at_sym("\\") {
            let is_forall = self.at_word("forall");
            self.pos += 1;
            let var = self.ident()?;
            self.expect_sym(":")?;
            let kind = self.kind()?;
            self.expect_sym(".")?;
            self.bound.push((var.clone(), kind.clone()));
            let body = self.expr();
            self.bound.pop();
            let body = body?;
            return if is_forall {
                self.located(start, HoExpr::forall(&var, kind, body))
            } else {
                Ok(HoExpr::lam(&var, kind, body))
            };
        }
        let lhs = self.equation()?;
        if self.at_sym("=>") {
            self.pos += 1;
            let rhs = self.expr()?;
            return self.located(start, HoExpr::implies(lhs, rhs));
        }
        Ok(lhs)
    }

    fn equation(&mut self) -> Result<HoExpr> {
        let start = self.pos;
        let lhs = self.application()?;
        if self.at_sym("=") {
            self.pos += 1;
            let rhs = self.application()?;
            return self.located(start, HoExpr::leibniz(lhs, rhs));
        }
        Ok(lhs)
    }

    fn application(&mut self) -> Result<HoExpr> {
        let start = self.pos;
        let mut acc = self.atom()?;
        while self.at_sym("(") || matches!(self.peek(), Some(Tok::Ident(x)) if x != "forall") {
            let arg_start = self.pos;
            let arg = self.atom()?;
            acc = self.located(start, HoExpr::app(acc, arg)).map_err(|e| match e {
                Error::Parse { msg, .. } => self.err_at(arg_start, msg),
                other => other,
            })?;
        }
        Ok(acc)
    }

    fn atom(&mut self) -> Result<HoExpr> {
        if self.at_sym("(") {
            self.pos += 1;
            let e = self.expr()?;
            self.expect_sym(")")?;
            return Ok(e);
        }
        let start = self.pos;
        let name = self.ident()?;
        if let Some((_, k)) = self.bound.iter().rev().find(|(n, _)| *n == name) {
            return Ok(HoExpr::var(&name, k.clone()));
        }
        if let Some(k) = self.sig.var_kind(&name) {
            return Ok(HoExpr::var(&name, k.clone()));
        }
        if let Some(k) = self.sig.const_kind(&name) {
            return Ok(HoExpr::constant(&name, k.clone()));
        }
        if let Some((_, e)) = self.sig.defs.iter().find(|(n, _)| *n == name) {
            return Ok(e.clone());
        }
        if name == "bot" {
            return Ok(HoExpr::bot());
        }
        Err(self.err_at(start, format!("unbound identifier `{name}`")))
    }

    fn fresh_name(&mut self, what: &str) -> Result<String> {
        let start = self.pos;
        let name = self.ident()?;
        if KEYWORDS.contains(&name.as_str()) || name == "o" {
            return Err(self.err_at(start, format!("`{name}` is reserved")));
        }
        if self.sig.declared(&name) || self.sig.kinds.contains(&name) {
            return Err(self.err_at(start, format!("{what} `{name}` is already declared")));
        }
        Ok(name)
    }

    fn tree(&mut self) -> Result<Derivation> {
        self.expect_sym("(")?;
        let start = self.pos;
        let rule = self.ident()?;
        let d = match rule.as_str() {
            "ax" => Derivation::Ax(self.ident()?),
            "impi" => {
                let hyp = self.ident()?;
                let formula = self.bracketed()?;
                let body = self.tree()?;
                Derivation::ImpI { hyp, formula, body: Box::new(body) }
            }
            "impe" => {
                let major = self.tree()?;
                let minor = self.tree()?;
                Derivation::ImpE(Box::new(major), Box::new(minor))
            }
            "alli" => {
                let var = self.ident()?;
                self.expect_sym(":")?;
                let kind = self.kind()?;
                let body = self.tree()?;
                Derivation::AllI { var, kind, body: Box::new(body) }
            }
            "alle" => {
                let body = self.tree()?;
                let witness = self.bracketed()?;
                Derivation::AllE { body: Box::new(body), witness }
            }
            other => return Err(self.err_at(start, format!("unknown rule `{other}`"))),
        };
        self.expect_sym(")")?;
        Ok(d)
    }

    fn bracketed(&mut self) -> Result<HoExpr> {
        self.expect_sym("[")?;
        let e = self.expr()?;
        self.expect_sym("]")?;
        Ok(e)
    }

    fn formula(&mut self) -> Result<HoExpr> {
        let start = self.pos;
        let e = self.expr()?;
        if !e.kind().is_o() {
            return Err(self.err_at(start, format!("kind error: `{e}` has kind {}, expected o", e.kind())));
        }
        Ok(e)
    }

    fn statement(&mut self, doc: &mut Vec<Stmt>) -> Result<()> {
        let start = self.pos;
        let word = self.ident()?;
        match word.as_str() {
            "kind" => {
                let name = self.fresh_name("kind")?;
                self.sig.kinds.push(name);
            }
            "const" | "var" => {
                let name = self.fresh_name(&word)?;
                self.expect_sym(":")?;
                let k = self.kind()?;
                if word == "const" {
                    self.sig.consts.push((name, k));
                } else {
                    self.sig.vars.push((name, k));
                }
            }
            "def" => {
                let name = self.fresh_name("definition")?;
                self.expect_sym(":=")?;
                let e = self.expr()?;
                self.sig.defs.push((name, e));
            }
            "formula" => {
                let name = self.ident()?;
                self.expect_sym(":=")?;
                let e = self.formula()?;
                doc.push(Stmt::Formula(name, e));
            }
            "derivation" => {
                let name = self.ident()?;
                self.expect_sym("(")?;
                let mut context = Vec::new();
                while !self.at_sym(")") {
                    if !context.is_empty() {
                        self.expect_sym(",")?;
                    }
                    let h = self.ident()?;
                    self.expect_sym(":")?;
                    context.push((h, self.formula()?));
                }
                self.expect_sym(")")?;
                self.expect_sym(":=")?;
                let tree = self.tree()?;
                doc.push(Stmt::Derivation(NamedDerivation { name, context, tree }));
            }
            other => return Err(self.err_at(start, format!("unknown statement `{other}`"))),
        }
        self.expect_sym(";")
    }
}

enum Stmt {
    Formula(String, HoExpr),
    Derivation(NamedDerivation),
}

/// Parses a whole `.ho` file.
pub fn parse_document(src: &str) -> Result<Document> {
    let mut sig = Signature::default();
    let mut stmts = Vec::new();
    {
        let mut p = Parser { toks: lex(src)?, pos: 0, sig: &mut sig, bound: Vec::new() };
        while p.pos < p.toks.len() {
            p.statement(&mut stmts)?;
        }
    }
    let mut doc = Document { signature: sig, ..Document::default() };
    for s in stmts {
        match s {
            Stmt::Formula(n, e) => doc.formulas.push((n, e)),
            Stmt::Derivation(d) => doc.derivations.push(d),
        }
    }
    Ok(doc)
}

fn with_parser<T>(src: &str, sig: &Signature, f: impl FnOnce(&mut Parser) -> Result<T>) -> Result<T> {
    let mut sig = sig.clone();
    let mut p = Parser { toks: lex(src)?, pos: 0, sig: &mut sig, bound: Vec::new() };
    let v = f(&mut p)?;
    if p.pos != p.toks.len() {
        return Err(p.err("trailing input"));
    }
    Ok(v)
}

/// Parses one expression against a signature.
pub fn parse_expr(src: &str, sig: &Signature) -> Result<HoExpr> {
    with_parser(src, sig, |p| p.expr())
}

pub fn parse_kind(src: &str, sig: &Signature) -> Result<Kind> {
    with_parser(src, sig, |p| p.kind())
}

/// Parses a derivation tree against a signature.
pub fn parse_derivation(src: &str, sig: &Signature) -> Result<Derivation> {
    with_parser(src, sig, |p| p.tree())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sig() -> Signature {
        parse_document("kind I; const 0 : I; const succ : I -> I; var y : I -> o; var x : I;")
            .unwrap()
            .signature
    }

    #[test]
    fn forall_formula_has_kind_o() {
        let e = parse_expr("forall x:I. (y x => y x)", &sig()).unwrap();
        assert!(e.kind().is_o());
        assert_eq!(e.to_string(), "forall x:I. y x => y x");
    }

    #[test]
    fn applying_a_base_value_is_a_kind_error() {
        let err = parse_expr("x y", &sig()).unwrap_err();
        match err {
            Error::Parse { line, col, msg } => {
                assert_eq!((line, col), (1, 3));
                assert!(msg.contains("kind error"), "{msg}");
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn unbound_and_malformed() {
        assert!(matches!(parse_expr("z", &sig()), Err(Error::Parse { col: 1, .. })));
        assert!(matches!(parse_expr("forall x:I y x", &sig()), Err(Error::Parse { .. })));
        assert!(matches!(parse_expr("forall x:J. y x", &sig()), Err(Error::Parse { .. })));
    }

    #[test]
    fn leibniz_expansion() {
        let e = parse_expr("succ x = 0", &sig()).unwrap();
        let expected = parse_expr("forall y':I -> o. y' (succ x) => y' 0", &sig()).unwrap();
        assert!(e.alpha_eq(&expected));
    }

    #[test]
    fn arrows_associate_right() {
        let k = parse_kind("I -> I -> o", &sig()).unwrap();
        assert_eq!(k, Kind::arrow(Kind::base("I"), Kind::arrow(Kind::base("I"), Kind::o())));
        let e = parse_expr("bot => bot => bot", &sig()).unwrap();
        match e {
            HoExpr::Implies(a, _) => assert_eq!(*a, HoExpr::bot()),
            _ => unreachable!(),
        }
    }

    #[test]
    fn document_with_derivation() {
        let doc = parse_document(
            "kind I;\nvar a : o;\nderivation id () := (impi h [a] (ax h)); # comment\nformula t := a => a;",
        )
        .unwrap();
        assert_eq!(doc.derivations.len(), 1);
        assert_eq!(doc.formulas.len(), 1);
        assert!(matches!(doc.derivations[0].tree, Derivation::ImpI { .. }));
    }
}
