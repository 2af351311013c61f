//! Filtered ordered combinatory algebras, their derived combinators and
//! the entailment preorder ⊑_Φ.

use crate::error::{Error, Result};
use crate::exec::Exec;
use crate::order::Poset;
use crate::report::{CheckResult, Report, Witness};
use crate::set::{check_width, ElemSet};
use crate::term::{eval, lambda_star, lambdas, Applicative, Atom, Term};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FilteredOca {
    names: Vec<String>,
    order: Poset,
    app: Vec<usize>,
    k: usize,
    s: usize,
    phi: ElemSet,
}

impl FilteredOca {
    /// Validates shapes and indices only; the axioms are checked by
    /// [`FilteredOca::check`].
    pub fn new(
        names: Vec<String>,
        order: Poset,
        app: Vec<usize>,
        k: usize,
        s: usize,
        phi: ElemSet,
    ) -> Result<Self> {
        let n = names.len();
        check_width(n, "algebra")?;
        let mut seen = std::collections::BTreeSet::new();
        if let Some(dup) = names.iter().find(|x| !seen.insert(x.as_str())) {
            return Err(Error::structural(format!("duplicate element `{dup}`")));
        }
        if order.len() != n {
            return Err(Error::structural("order table does not match the carrier"));
        }
        if app.len() != n * n || app.iter().any(|&x| x >= n) {
            return Err(Error::structural(format!("app table must be a total {n}x{n} map")));
        }
        if k >= n || s >= n {
            return Err(Error::structural("k or s is not an element"));
        }
        if phi.width() != n {
            return Err(Error::structural("filter has the wrong width"));
        }
        Ok(FilteredOca {
            names,
            order,
            app,
            k,
            s,
            phi,
        })
    }

    /// The one-element algebra.
    pub fn trivial() -> Self {
        FilteredOca::new(
            vec!["*".into()],
            Poset::from_fn(1, |_, _| true).expect("one point"),
            vec![0],
            0,
            0,
            ElemSet::from_bits_unchecked(1, 1),
        )
        .expect("trivial algebra")
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.names.iter().position(|n| n == name)
    }

    pub fn order(&self) -> &Poset {
        &self.order
    }

    pub fn le(&self, a: usize, b: usize) -> bool {
        self.order.le(a, b)
    }

    pub fn app(&self, a: usize, b: usize) -> usize {
        self.app[a * self.len() + b]
    }

    pub fn app_table(&self) -> &[usize] {
        &self.app
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn s(&self) -> usize {
        self.s
    }

    pub fn phi(&self) -> ElemSet {
        self.phi
    }

    pub fn name(&self, a: usize) -> &str {
        &self.names[a]
    }

    /// Copy with one application entry replaced.
    pub fn with_app(&self, a: usize, b: usize, value: usize) -> Result<Self> {
        let n = self.len();
        if a >= n || b >= n || value >= n {
            return Err(Error::structural("app mutation out of range"));
        }
        let mut out = self.clone();
        out.app[a * n + b] = value;
        Ok(out)
    }

    pub fn with_combinators(&self, k: usize, s: usize) -> Result<Self> {
        if k >= self.len() || s >= self.len() {
            return Err(Error::structural("k or s is not an element"));
        }
        Ok(FilteredOca {
            k,
            s,
            ..self.clone()
        })
    }

    pub fn with_phi(&self, phi: ElemSet) -> Result<Self> {
        if phi.width() != self.len() {
            return Err(Error::structural("filter has the wrong width"));
        }
        Ok(FilteredOca { phi, ..self.clone() })
    }

    fn w1(&self, l: &str, a: usize) -> Witness {
        Witness::new().with(l, self.name(a))
    }

    fn wn(&self, labels: &[&str], pt: &[usize]) -> Witness {
        labels
            .iter()
            .zip(pt)
            .fold(Witness::new(), |w, (l, &a)| w.with(*l, self.name(a)))
    }

    /// A check over all tuples of carrier elements.
    pub(crate) fn scan<F>(&self, name: &str, exec: Exec, labels: &[&str], holds: F) -> CheckResult
    where
        F: Fn(&[usize]) -> bool + Sync + Send,
    {
        let dims = vec![self.len(); labels.len()];
        let cases = (self.len() as u64).pow(labels.len() as u32);
        let w = exec
            .first_violation(&dims, holds)
            .map(|pt| self.wn(labels, &pt));
        CheckResult::from_witness(name, cases, w)
    }

    /// Every OCA and filter axiom.
    pub fn check(&self, exec: Exec) -> Report {
        let mut r = Report::new("oca");
        let order = match self.order.order_violation() {
            None => CheckResult::pass("partial-order", (self.len() as u64).pow(3)),
            Some((clause, w)) => {
                let named = Witness(
                    w.0.into_iter()
                        .map(|(l, v)| {
                            let i: usize = v.parse().unwrap_or(0);
                            (l, self.name(i).to_string())
                        })
                        .collect(),
                );
                CheckResult::fail("partial-order", 1, named).with_note(clause)
            }
        };
        r.push(order);
        r.push(self.scan("app-monotone-left", exec, &["a", "a'", "b"], |x| {
            !self.le(x[0], x[1]) || self.le(self.app(x[0], x[2]), self.app(x[1], x[2]))
        }));
        r.push(self.scan("app-monotone-right", exec, &["a", "b", "b'"], |x| {
            !self.le(x[1], x[2]) || self.le(self.app(x[0], x[1]), self.app(x[0], x[2]))
        }));
        r.push(self.scan("K", exec, &["a", "b"], |x| {
            self.le(self.app(self.app(self.k, x[0]), x[1]), x[0])
        }));
        r.push(self.scan("S", exec, &["a", "b", "c"], |x| {
            let (a, b, c) = (x[0], x[1], x[2]);
            let lhs = self.app(self.app(self.app(self.s, a), b), c);
            let rhs = self.app(self.app(a, c), self.app(b, c));
            self.le(lhs, rhs)
        }));
        let missing = [("k", self.k), ("s", self.s)]
            .into_iter()
            .find(|&(_, c)| !self.phi.contains(c));
        r.push(CheckResult::from_witness(
            "filter-contains-k-s",
            2,
            missing.map(|(l, c)| self.w1(l, c)),
        ));
        r.push(self.filter_closure_check(exec));
        r
    }

    pub(crate) fn filter_closure_check(&self, exec: Exec) -> CheckResult {
        let phi: Vec<usize> = self.phi.iter().collect();
        let m = phi.len();
        let w = exec
            .first_violation(&[m, m], |pt| self.phi.contains(self.app(phi[pt[0]], phi[pt[1]])))
            .map(|pt| self.wn(&["f", "g"], &[phi[pt[0]], phi[pt[1]]]));
        CheckResult::from_witness("filter-closed-under-app", (m * m) as u64, w)
    }

    /// Search pool for realizers: Φ in load order, then (when
    /// `with_derived`) the basic derived combinators not already listed.
    pub fn realizer_pool(&self, with_derived: bool) -> Vec<usize> {
        let mut pool: Vec<usize> = self.phi.iter().collect();
        if with_derived {
            if let Ok(b) = basic_combinators(self) {
                for c in b.as_array() {
                    if !pool.contains(&c) {
                        pool.push(c);
                    }
                }
            }
        }
        pool
    }

    /// The first `f` of the search pool with `f a ≤ b`.
    pub fn entails(&self, a: usize, b: usize, with_derived: bool) -> Option<usize> {
        self.realizer_pool(with_derived)
            .into_iter()
            .find(|&f| self.le(self.app(f, a), b))
    }

    /// Closed λ*-terms of the basic combinators plus the lemma inequalities
    /// they satisfy.
    pub fn basic_combinator_check(&self, exec: Exec) -> Result<Report> {
        basic_combinator_report(self, &|a, b| self.le(a, b), &self.phi, exec)
    }

    /// The meet-semilattice lemma for `a∧b := pair a b`, `⊤ := k`.
    pub fn meet_top_check(&self, exec: Exec) -> Result<Report> {
        let bc = basic_combinators(self)?;
        let mut r = Report::new("meet-top");
        let meet = |a, b| self.app(self.app(bc.pair, a), b);
        let top = self.k;
        let kk = self.app(self.k, self.k);
        r.push(self.scan("p0-realizes-meet-left", exec, &["a", "b"], |x| {
            self.le(self.app(bc.p0, meet(x[0], x[1])), x[0])
        }));
        r.push(self.scan("p1-realizes-meet-right", exec, &["a", "b"], |x| {
            self.le(self.app(bc.p1, meet(x[0], x[1])), x[1])
        }));
        let n = self.len();
        let a_table: Vec<usize> = (0..n * n)
            .map(|i| combinator_a(self, &bc, i / n, i % n))
            .collect::<Result<_>>()?;
        r.push(self.scan("a-realizes-meet-intro", exec, &["r", "s", "c", "a", "b"], |x| {
            let (rr, s, c, a, b) = (x[0], x[1], x[2], x[3], x[4]);
            let hyp = self.le(self.app(rr, c), a) && self.le(self.app(s, c), b);
            !hyp || self.le(self.app(a_table[rr * n + s], c), meet(a, b))
        }));
        r.push(self.scan("kk-realizes-top", exec, &["a"], |x| {
            self.le(self.app(kk, x[0]), top)
        }));
        let in_phi = [bc.p0, bc.p1, kk].iter().all(|&x| self.phi.contains(x));
        r.push(CheckResult::from_witness(
            "realizers-in-filter",
            3,
            (!in_phi).then(|| self.wn(&["p0", "p1", "kk"], &[bc.p0, bc.p1, kk])),
        ));
        Ok(r)
    }

    /// Reflexivity realized by `i`, transitivity by `b g f`.
    pub fn preorder_check(&self, exec: Exec) -> Result<Report> {
        let bc = basic_combinators(self)?;
        let mut r = Report::new("entailment-preorder");
        r.push(self.scan("reflexive-by-i", exec, &["a"], |x| {
            self.le(self.app(bc.i, x[0]), x[0])
        }));
        let pool = self.realizer_pool(true);
        let w = exec.first_in_grid(&[self.len(); 3], |x| {
            let (a, b, c) = (x[0], x[1], x[2]);
            let f = pool.iter().copied().find(|&f| self.le(self.app(f, a), b))?;
            let g = pool.iter().copied().find(|&g| self.le(self.app(g, b), c))?;
            let h = self.app(self.app(bc.b, g), f);
            (!self.le(self.app(h, a), c))
                .then(|| self.wn(&["a", "b", "c", "f", "g"], &[a, b, c, f, g]))
        });
        r.push(CheckResult::from_witness(
            "transitive-by-b-composition",
            (self.len() as u64).pow(3),
            w,
        ));
        Ok(r)
    }

    /// Everything checkable at the OCA layer.
    pub fn suite(&self, exec: Exec) -> Result<Report> {
        let mut r = Report::new("oca-layer");
        let base = self.check(exec);
        let ok = base.passed();
        r.absorb(base);
        if ok {
            r.absorb(self.basic_combinator_check(exec)?);
            r.absorb(self.meet_top_check(exec)?);
            r.absorb(self.preorder_check(exec)?);
        } else {
            r.push(CheckResult::skipped(
                "derived-combinators",
                "base axioms fail; derived checks not meaningful",
            ));
        }
        Ok(r)
    }
}

impl Applicative for FilteredOca {
    fn size(&self) -> usize {
        self.len()
    }

    fn apply(&self, a: usize, b: usize) -> usize {
        self.app(a, b)
    }

    fn atom(&self, atom: Atom) -> Result<usize> {
        match atom {
            Atom::Elem(a) if a < self.len() => Ok(a),
            Atom::Elem(a) => Err(Error::Eval(format!("element #{a} does not exist"))),
            Atom::K => Ok(self.k),
            Atom::S => Ok(self.s),
            Atom::E | Atom::C => Err(Error::Eval(format!(
                "{atom:?} is not part of a plain OCA"
            ))),
        }
    }

    fn name(&self, a: usize) -> String {
        self.names[a].clone()
    }
}

/// The basic combinators, evaluated in an algebra.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct BasicCombinators {
    pub b: usize,
    pub i: usize,
    pub cflip: usize,
    pub w: usize,
    pub t: usize,
    pub f: usize,
    pub pair: usize,
    pub p0: usize,
    pub p1: usize,
}

impl BasicCombinators {
    pub fn as_array(&self) -> [usize; 9] {
        [
            self.b, self.i, self.cflip, self.w, self.t, self.f, self.pair, self.p0, self.p1,
        ]
    }

    pub const NAMES: [&'static str; 9] = ["b", "i", "c", "w", "t", "f", "pair", "p0", "p1"];
}

fn v(x: &str) -> Term {
    Term::var(x)
}

/// The λ*-terms of the basic combinators, in [`BasicCombinators::NAMES`]
/// order. `c` is the argument-swapping combinator `λxyz. x z y`.
pub fn basic_combinator_terms() -> [Term; 9] {
    let t = lambdas(&["x", "y"], &v("x"));
    let f = lambdas(&["x", "y"], &v("y"));
    [
        lambdas(&["x", "y", "z"], &Term::app(v("x"), Term::app(v("y"), v("z")))),
        lambda_star("x", &v("x")),
        lambdas(&["x", "y", "z"], &Term::apps(v("x"), [v("z"), v("y")])),
        lambdas(&["x", "y"], &Term::apps(v("x"), [v("y"), v("y")])),
        t.clone(),
        f.clone(),
        lambdas(&["x", "y", "z"], &Term::apps(v("z"), [v("x"), v("y")])),
        lambda_star("x", &Term::app(v("x"), t)),
        lambda_star("x", &Term::app(v("x"), f)),
    ]
}

pub fn basic_combinators(alg: &dyn Applicative) -> Result<BasicCombinators> {
    let vals: Vec<usize> = basic_combinator_terms()
        .iter()
        .map(|t| eval(alg, t))
        .collect::<Result<_>>()?;
    Ok(BasicCombinators {
        b: vals[0],
        i: vals[1],
        cflip: vals[2],
        w: vals[3],
        t: vals[4],
        f: vals[5],
        pair: vals[6],
        p0: vals[7],
        p1: vals[8],
    })
}

/// `a(r,s) = λ*x. pair (r x) (s x)`.
pub fn combinator_a(alg: &dyn Applicative, bc: &BasicCombinators, r: usize, s: usize) -> Result<usize> {
    let body = Term::apps(
        Term::elem(bc.pair),
        [
            Term::app(Term::elem(r), v("x")),
            Term::app(Term::elem(s), v("x")),
        ],
    );
    eval(alg, &lambda_star("x", &body))
}

/// `d(f) = λ*x. f (p0 x) (p1 x)`.
pub fn combinator_d(alg: &dyn Applicative, bc: &BasicCombinators, f: usize) -> Result<usize> {
    let body = Term::apps(
        Term::elem(f),
        [
            Term::app(Term::elem(bc.p0), v("x")),
            Term::app(Term::elem(bc.p1), v("x")),
        ],
    );
    eval(alg, &lambda_star("x", &body))
}

pub(crate) fn basic_combinator_report(
    alg: &dyn Applicative,
    le: &(dyn Fn(usize, usize) -> bool + Sync),
    phi: &ElemSet,
    exec: Exec,
) -> Result<Report> {
    let bc = basic_combinators(alg)?;
    let n = alg.size();
    let mut r = Report::new("basic-combinators");
    let ap = |a: usize, b: usize| alg.apply(a, b);
    let ap3 = |f: usize, a: usize, b: usize, c: usize| ap(ap(ap(f, a), b), c);
    let name = |a: usize| alg.name(a);
    let scan = |label: &str, arity: usize, labels: &[&str], holds: &(dyn Fn(&[usize]) -> bool + Sync)| {
        let dims = vec![n; arity];
        let w = exec.first_violation(&dims, holds).map(|pt| {
            labels
                .iter()
                .zip(&pt)
                .fold(Witness::new(), |w, (l, &a)| w.with(*l, name(a)))
        });
        CheckResult::from_witness(label, (n as u64).pow(arity as u32), w)
    };

    let missing = BasicCombinators::NAMES
        .iter()
        .zip(bc.as_array())
        .find(|(_, c)| !phi.contains(*c));
    r.push(CheckResult::from_witness(
        "in-filter",
        9,
        missing.map(|(l, c)| Witness::new().with(*l, name(c))),
    ));
    r.push(scan("b", 3, &["a", "b", "c"], &|x| {
        le(ap3(bc.b, x[0], x[1], x[2]), ap(x[0], ap(x[1], x[2])))
    }));
    r.push(scan("i", 1, &["a"], &|x| le(ap(bc.i, x[0]), x[0])));
    r.push(scan("c", 3, &["a", "b", "c"], &|x| {
        le(ap3(bc.cflip, x[0], x[1], x[2]), ap(ap(x[0], x[2]), x[1]))
    }));
    r.push(scan("w", 2, &["a", "b"], &|x| {
        le(ap(ap(bc.w, x[0]), x[1]), ap(ap(x[0], x[1]), x[1]))
    }));
    r.push(scan("p0-pair", 2, &["a", "b"], &|x| {
        le(ap(bc.p0, ap(ap(bc.pair, x[0]), x[1])), x[0])
    }));
    r.push(scan("p1-pair", 2, &["a", "b"], &|x| {
        le(ap(bc.p1, ap(ap(bc.pair, x[0]), x[1])), x[1])
    }));
    let a_table: Vec<usize> = (0..n * n)
        .map(|i| combinator_a(alg, &bc, i / n, i % n))
        .collect::<Result<_>>()?;
    r.push(scan("a", 5, &["r", "s", "c", "a", "b"], &|x| {
        let (rr, s, c, a, b) = (x[0], x[1], x[2], x[3], x[4]);
        !(le(ap(rr, c), a) && le(ap(s, c), b)) || le(ap(a_table[rr * n + s], c), ap(ap(bc.pair, a), b))
    }));
    let d_table: Vec<usize> = (0..n).map(|f| combinator_d(alg, &bc, f)).collect::<Result<_>>()?;
    r.push(scan("d", 2, &["f", "l"], &|x| {
        let (f, l) = (x[0], x[1]);
        le(ap(d_table[f], l), ap(ap(f, ap(bc.p0, l)), ap(bc.p1, l)))
    }));
    Ok(r)
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Two-element Boolean algebra, app = meet, k = s = ⊤, Φ = {⊤}.
    fn bool2() -> FilteredOca {
        FilteredOca::new(
            vec!["0".into(), "1".into()],
            Poset::from_fn(2, |a, b| a <= b).unwrap(),
            vec![0, 0, 0, 1],
            1,
            1,
            ElemSet::from_indices(2, [1]).unwrap(),
        )
        .unwrap()
    }

    #[test]
    fn boolean_meet_algebra_passes() {
        let o = bool2();
        let r = o.suite(Exec::Sequential).unwrap();
        assert!(r.passed(), "{r}");
        assert!(FilteredOca::trivial().suite(Exec::Sequential).unwrap().passed());
    }

    #[test]
    fn broken_monotonicity_is_reported() {
        // app(1,1) = 0 while app(1,0) = 0 and app(0,1)=1 breaks the left
        // argument: 0 ≤ 1 but app(0,1)=1 ≰ app(1,1)=0.
        let o = bool2().with_app(0, 1, 1).unwrap().with_app(1, 1, 0).unwrap();
        let r = o.check(Exec::Sequential);
        let c = r.get("app-monotone-left").unwrap();
        assert!(!c.passed());
        assert!(c.witness.is_some());
    }

    #[test]
    fn skk_top_is_top() {
        let o = bool2();
        let t = Term::apps(Term::s(), [Term::k(), Term::k(), Term::elem(1)]);
        assert_eq!(eval(&o, &t).unwrap(), 1);
    }

    #[test]
    fn entailment_examples() {
        let o = bool2();
        assert_eq!(o.entails(0, 1, false), Some(1));
        assert_eq!(o.entails(1, 0, true), None);
        assert!(o.entails(1, 1, true).is_some());
    }
}
