//! Interpretation of L^ω in a finite KOCA.
//!
//! Every kind denotes a finite set `0..size`. `o` is the carrier; an arrow
//! kind `σ → τ` is the full function space, a function `f` being encoded
//! as `Σ f(s)·|τ|^s`.

use std::collections::BTreeMap;

use serde_json::Value;

use crate::error::{Error, Result};
use crate::exec::{decode, grid_size, Exec};
use crate::ioca::Koca;
use crate::limits::Limits;
use crate::report::Witness;
use crate::term::eval_with;

use super::derivation::Sequent;
use super::parse::Signature;
use super::syntax::{HoExpr, Kind};

/// Largest number of assignments `satisfies` will scan.
pub const ASSIGNMENT_CAP: usize = 1 << 24;

/// Sizes for base kinds and values for constants.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Interpretation {
    pub kinds: BTreeMap<String, usize>,
    pub consts: BTreeMap<String, usize>,
}

impl Interpretation {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn with_kind(mut self, name: &str, size: usize) -> Self {
        self.kinds.insert(name.into(), size);
        self
    }

    pub fn with_const(mut self, name: &str, code: usize) -> Self {
        self.consts.insert(name.into(), code);
        self
    }

    /// `{"kinds": {"I": 3}, "constants": {"0": 0, "succ": [1, 2, 0]}}`.
    /// Function values are nested arrays indexed by argument; values of
    /// kind `o` may be element names.
    pub fn from_json(v: &Value, sig: &Signature, a: &Koca, limits: &Limits) -> Result<Self> {
        let obj = v
            .as_object()
            .ok_or_else(|| Error::structural("interpretation must be a JSON object"))?;
        let mut interp = Interpretation::new();
        if let Some(kinds) = obj.get("kinds") {
            let kinds = kinds
                .as_object()
                .ok_or_else(|| Error::structural("`kinds` must be an object"))?;
            for (k, n) in kinds {
                let n = n
                    .as_u64()
                    .ok_or_else(|| Error::structural(format!("size of kind `{k}` must be a number")))?;
                interp.kinds.insert(k.clone(), n as usize);
            }
        }
        for k in &sig.kinds {
            if !interp.kinds.contains_key(k) {
                return Err(Error::structural(format!("kind `{k}` has no interpretation")));
            }
        }
        let consts = obj.get("constants").and_then(Value::as_object);
        for (name, kind) in &sig.consts {
            let val = consts
                .and_then(|c| c.get(name))
                .ok_or_else(|| Error::structural(format!("constant `{name}` has no interpretation")))?;
            let sem = Semantics::new(a, &interp, limits);
            let code = sem.decode_json(kind, val).map_err(|e| match e {
                Error::Structural(m) => Error::structural(format!("constant `{name}`: {m}")),
                other => other,
            })?;
            interp.consts.insert(name.clone(), code);
        }
        Ok(interp)
    }
}

/// Evaluation context: a KOCA, an interpretation and the size guard.
pub struct Semantics<'a> {
    pub a: &'a Koca,
    pub interp: &'a Interpretation,
    cap: usize,
    bot: usize,
}

impl<'a> Semantics<'a> {
    pub fn new(a: &'a Koca, interp: &'a Interpretation, limits: &Limits) -> Self {
        let bot = a.bottom().unwrap_or(0);
        Semantics { a, interp, cap: limits.function_space_cap, bot }
    }

    /// `|⟦k⟧|`, failing when a function space exceeds the cap.
    pub fn size(&self, k: &Kind) -> Result<usize> {
        match k {
            k if k.is_o() => Ok(self.a.len()),
            Kind::Const(c) => self
                .interp
                .kinds
                .get(c)
                .copied()
                .ok_or_else(|| Error::Eval(format!("kind `{c}` has no interpretation"))),
            Kind::Arrow(s, t) => {
                let (s, t) = (self.size(s)?, self.size(t)?);
                match t.checked_pow(s as u32) {
                    Some(n) if n <= self.cap => Ok(n),
                    other => Err(Error::resource(
                        format!("function space {k}"),
                        other.map_or(u128::MAX, |n| n as u128),
                        self.cap as u128,
                    )),
                }
            }
        }
    }

    /// `f(s)` for `f ∈ ⟦σ → τ⟧`.
    pub fn apply(&self, fun_kind: &Kind, f: usize, s: usize) -> Result<usize> {
        match fun_kind {
            Kind::Arrow(_, t) => {
                let t = self.size(t)?;
                Ok(f / t.pow(s as u32) % t)
            }
            other => Err(Error::Eval(format!("cannot apply a value of kind {other}"))),
        }
    }

    pub fn encode(&self, target_size: usize, table: &[usize]) -> usize {
        table.iter().rev().fold(0, |acc, &v| acc * target_size + v)
    }

    /// `⟦e⟧` under `env` (innermost binding last).
    pub fn eval(&self, e: &HoExpr, env: &mut Vec<(String, usize)>) -> Result<usize> {
        let o = self.a.oca();
        match e {
            HoExpr::Var { name, .. } => env
                .iter()
                .rev()
                .find(|(n, _)| n == name)
                .map(|(_, v)| *v)
                .ok_or_else(|| Error::Eval(format!("no value assigned to `{name}`"))),
            HoExpr::Const { name, .. } if name == "bot" => Ok(self.bot),
            HoExpr::Const { name, .. } => self
                .interp
                .consts
                .get(name)
                .copied()
                .ok_or_else(|| Error::Eval(format!("constant `{name}` has no interpretation"))),
            HoExpr::Lam { var, var_kind, body, .. } => {
                let ns = self.size(var_kind)?;
                let nt = self.size(&body.kind())?;
                self.size(&e.kind())?;
                let mut table = Vec::with_capacity(ns);
                for s in 0..ns {
                    env.push((var.clone(), s));
                    let v = self.eval(body, env);
                    env.pop();
                    table.push(v?);
                }
                Ok(self.encode(nt, &table))
            }
            HoExpr::App { fun, arg, .. } => {
                let f = self.eval(fun, env)?;
                let x = self.eval(arg, env)?;
                self.apply(&fun.kind(), f, x)
            }
            HoExpr::Implies(x, y) => Ok(self.a.imp(self.eval(x, env)?, self.eval(y, env)?)),
            HoExpr::Forall { var, var_kind, body } => {
                let n = self.size(var_kind)?;
                let mut acc = o.order().inf(std::iter::empty())?;
                for s in 0..n {
                    env.push((var.clone(), s));
                    let v = self.eval(body, env);
                    env.pop();
                    acc = o.order().meet(acc, v?)?;
                }
                Ok(acc)
            }
        }
    }

    /// Evaluates a closed expression.
    pub fn eval_closed(&self, e: &HoExpr) -> Result<usize> {
        self.eval(e, &mut Vec::new())
    }

    /// Human-readable value of a kind.
    pub fn show(&self, k: &Kind, v: usize) -> String {
        match k {
            k if k.is_o() => self.a.name(v).to_string(),
            Kind::Const(_) => v.to_string(),
            Kind::Arrow(s, t) => {
                let ns = self.size(s).unwrap_or(0);
                let parts: Vec<String> = (0..ns)
                    .map(|x| self.apply(k, v, x).map(|y| self.show(t, y)).unwrap_or_default())
                    .collect();
                format!("[{}]", parts.join(", "))
            }
        }
    }

    fn decode_json(&self, k: &Kind, v: &Value) -> Result<usize> {
        match k {
            k if k.is_o() => match v {
                Value::String(s) => self
                    .a
                    .index_of(s)
                    .ok_or_else(|| Error::structural(format!("unknown element `{s}`"))),
                Value::Number(n) => n
                    .as_u64()
                    .map(|n| n as usize)
                    .filter(|&n| n < self.a.len())
                    .ok_or_else(|| Error::structural(format!("element index {n} out of range"))),
                _ => Err(Error::structural("expected an element name or index")),
            },
            Kind::Const(c) => {
                let n = self.size(k)?;
                v.as_u64()
                    .map(|x| x as usize)
                    .filter(|&x| x < n)
                    .ok_or_else(|| Error::structural(format!("expected a value of kind {c} below {n}")))
            }
            Kind::Arrow(s, t) => {
                // A constant is one code, not a scan of the space, so only
                // overflow matters here; the cap guards quantification.
                let ns = self.size(s)?;
                let nt = self.size(t)?;
                if nt.checked_pow(ns as u32).is_none() {
                    return Err(Error::resource(format!("code of a constant of kind {k}"), u128::MAX, usize::MAX as u128));
                }
                let arr = v
                    .as_array()
                    .filter(|a| a.len() == ns)
                    .ok_or_else(|| Error::structural(format!("expected a table of {ns} entries for kind {k}")))?;
                let table = arr
                    .iter()
                    .map(|x| self.decode_json(t, x))
                    .collect::<Result<Vec<_>>>()?;
                Ok(self.encode(nt, &table))
            }
        }
    }

    /// Every assignment of the given variables, in mixed-radix order.
    pub fn assignments(&self, vars: &[(String, Kind)]) -> Result<(Vec<usize>, usize)> {
        let dims = vars.iter().map(|(_, k)| self.size(k)).collect::<Result<Vec<_>>>()?;
        let total = if dims.is_empty() { 1 } else { grid_size(&dims).unwrap_or(0) };
        let needed = dims.iter().try_fold(1u128, |acc, &d| acc.checked_mul(d as u128));
        if needed.is_none_or(|n| n > ASSIGNMENT_CAP as u128) {
            return Err(Error::resource(
                "assignments",
                needed.unwrap_or(u128::MAX),
                ASSIGNMENT_CAP as u128,
            ));
        }
        Ok((dims, total))
    }

    fn assignment_witness(&self, vars: &[(String, Kind)], values: &[usize]) -> Witness {
        vars.iter()
            .zip(values)
            .fold(Witness::new(), |w, ((n, k), &v)| w.with(n.clone(), self.show(k, v)))
    }
}

/// Free variables of a sequent's formulas, sorted by name.
pub fn sequent_vars(seq: &Sequent) -> Vec<(String, Kind)> {
    let mut vars = seq.conclusion.free_vars();
    for (_, a) in &seq.context {
        vars.extend(a.free_vars());
    }
    vars.into_iter().collect()
}

/// First assignment and hypothesis values at which the sequent fails:
/// `b_i ≤ ⟦A_i⟧` for every `i` but `p{x := b} ≰ ⟦B⟧`.
pub fn satisfaction_witness(
    a: &Koca,
    interp: &Interpretation,
    seq: &Sequent,
    limits: &Limits,
    exec: Exec,
) -> Result<Option<Witness>> {
    let sem = Semantics::new(a, interp, limits);
    let vars = sequent_vars(seq);
    let (dims, total) = sem.assignments(&vars)?;
    let o = a.oca();
    let n = o.len();
    let names: Vec<&str> = seq.context.iter().map(|(x, _)| x.as_str()).collect();
    let found = exec.find_first(total, |idx| {
        let values = if dims.is_empty() { Vec::new() } else { decode(idx, &dims) };
        let mut env: Vec<(String, usize)> =
            vars.iter().map(|(x, _)| x.clone()).zip(values.iter().copied()).collect();
        let hyps: Vec<usize> = match seq
            .context
            .iter()
            .map(|(_, f)| sem.eval(f, &mut env))
            .collect::<Result<Vec<_>>>()
        {
            Ok(h) => h,
            Err(e) => return Some(Err(e)),
        };
        let goal = match sem.eval(&seq.conclusion, &mut env) {
            Ok(g) => g,
            Err(e) => return Some(Err(e)),
        };
        let below: Vec<Vec<usize>> = hyps
            .iter()
            .map(|&h| (0..n).filter(|&b| o.le(b, h)).collect())
            .collect();
        let bdims: Vec<usize> = below.iter().map(Vec::len).collect();
        let btotal = if bdims.is_empty() { 1 } else { grid_size(&bdims).unwrap_or(0) };
        for bi in 0..btotal {
            let pick = if bdims.is_empty() { Vec::new() } else { decode(bi, &bdims) };
            let bs: Vec<usize> = pick.iter().zip(&below).map(|(&i, d)| d[i]).collect();
            let env_fn = |x: &str| names.iter().position(|&h| h == x).map(|i| bs[i]);
            let v = match eval_with(a, &seq.realizer, &env_fn) {
                Ok(v) => v,
                Err(e) => return Some(Err(e)),
            };
            if !o.le(v, goal) {
                let w = names
                    .iter()
                    .zip(&bs)
                    .fold(sem.assignment_witness(&vars, &values), |w, (h, &b)| w.with(*h, o.name(b)))
                    .with("realizer", o.name(v))
                    .with("formula", o.name(goal));
                return Some(Ok(w));
            }
        }
        None
    });
    found.transpose()
}

/// Whether the KOCA satisfies the sequent under every assignment.
pub fn satisfies(a: &Koca, interp: &Interpretation, seq: &Sequent, limits: &Limits, exec: Exec) -> Result<bool> {
    Ok(satisfaction_witness(a, interp, seq, limits, exec)?.is_none())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::homega::parse::{parse_document, parse_expr};
    use crate::ioca::boolean;

    #[test]
    fn a_implies_a_is_top() {
        let k = boolean(2).unwrap();
        let sig = parse_document("var a : o;").unwrap().signature;
        let e = parse_expr("a => a", &sig).unwrap();
        let interp = Interpretation::new();
        let sem = Semantics::new(&k, &interp, &Limits::default());
        for v in 0..4 {
            assert_eq!(sem.eval(&e, &mut vec![("a".into(), v)]).unwrap(), 3);
        }
    }

    #[test]
    fn singleton_quantifier_and_beta() {
        let k = boolean(2).unwrap();
        let sig = parse_document("kind U; const p : U -> o;").unwrap().signature;
        let interp = Interpretation::new().with_kind("U", 1).with_const("p", 2);
        let sem = Semantics::new(&k, &interp, &Limits::default());
        let all = parse_expr("forall u:U. p u", &sig).unwrap();
        assert_eq!(sem.eval_closed(&all).unwrap(), 2);
        let beta = parse_expr("(\\q:o. q => bot) (forall u:U. p u)", &sig).unwrap();
        let direct = parse_expr("(forall u:U. p u) => bot", &sig).unwrap();
        assert_eq!(sem.eval_closed(&beta).unwrap(), sem.eval_closed(&direct).unwrap());
    }

    #[test]
    fn function_space_cap() {
        let k = boolean(2).unwrap();
        let interp = Interpretation::new().with_kind("I", 7);
        let sem = Semantics::new(&k, &interp, &Limits::default());
        let big = Kind::arrow(Kind::base("I"), Kind::o());
        assert!(matches!(sem.size(&big), Err(Error::Resource { .. })));
    }

    #[test]
    fn json_tables() {
        let k = boolean(1).unwrap();
        let sig = parse_document("kind I; const succ : I -> I; const t : o;").unwrap().signature;
        let v: Value = serde_json::json!({"kinds": {"I": 3}, "constants": {"succ": [1, 2, 0], "t": "{0}"}});
        let interp = Interpretation::from_json(&v, &sig, &k, &Limits::default()).unwrap();
        let sem = Semantics::new(&k, &interp, &Limits::default());
        let succ = interp.consts["succ"];
        let ik = Kind::arrow(Kind::base("I"), Kind::base("I"));
        assert_eq!((0..3).map(|x| sem.apply(&ik, succ, x).unwrap()).collect::<Vec<_>>(), vec![1, 2, 0]);
        assert_eq!(interp.consts["t"], 1);
    }

    #[test]
    fn binary_constant_above_the_cap_loads_like_the_built_in() {
        let k = boolean(1).unwrap();
        let (sig, built) = crate::homega::modular_arithmetic(3);
        let v = serde_json::json!({
            "kinds": {"I": 3},
            "constants": {
                "0": 0,
                "succ": [1, 2, 0],
                "plus": [[0, 1, 2], [1, 2, 0], [2, 0, 1]],
                "times": [[0, 0, 0], [0, 1, 2], [0, 2, 1]]
            }
        });
        let loaded = Interpretation::from_json(&v, &sig, &k, &Limits::default()).unwrap();
        assert_eq!(loaded, built);
    }
}
