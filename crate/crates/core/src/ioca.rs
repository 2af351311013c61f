//! Implicative and Krivine OCAs, proper quadruples and the Boolean
//! instances.

use std::ops::Deref;

use crate::error::{Error, Result};
use crate::exec::Exec;
use crate::oca::{basic_combinators, combinator_d, FilteredOca};
use crate::order::Poset;
use crate::report::{CheckResult, Report, Witness};
use crate::set::{check_width, ElemSet};
use crate::term::{Applicative, Atom};

/// Largest atom count accepted by [`boolean`].
pub const BOOLEAN_MAX_ATOMS: usize = 4;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Ioca {
    oca: FilteredOca,
    imp: Vec<usize>,
    e: usize,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Koca {
    ioca: Ioca,
    c: usize,
}

impl Deref for Ioca {
    type Target = FilteredOca;
    fn deref(&self) -> &FilteredOca {
        &self.oca
    }
}

impl Deref for Koca {
    type Target = Ioca;
    fn deref(&self) -> &Ioca {
        &self.ioca
    }
}

impl Ioca {
    pub fn new(oca: FilteredOca, imp: Vec<usize>, e: usize) -> Result<Self> {
        let n = oca.len();
        if imp.len() != n * n || imp.iter().any(|&x| x >= n) {
            return Err(Error::structural(format!("imp table must be a total {n}x{n} map")));
        }
        if e >= n {
            return Err(Error::structural("e is not an element"));
        }
        Ok(Ioca { oca, imp, e })
    }

    pub fn oca(&self) -> &FilteredOca {
        &self.oca
    }

    pub fn imp(&self, a: usize, b: usize) -> usize {
        self.imp[a * self.len() + b]
    }

    pub fn imp_table(&self) -> &[usize] {
        &self.imp
    }

    pub fn e(&self) -> usize {
        self.e
    }

    pub fn with_imp(&self, a: usize, b: usize, value: usize) -> Result<Self> {
        let n = self.len();
        if a >= n || b >= n || value >= n {
            return Err(Error::structural("imp mutation out of range"));
        }
        let mut out = self.clone();
        out.imp[a * n + b] = value;
        Ok(out)
    }

    pub fn with_e(&self, e: usize) -> Result<Self> {
        Ioca::new(self.oca.clone(), self.imp.clone(), e)
    }

    pub fn with_oca(&self, oca: FilteredOca) -> Result<Self> {
        Ioca::new(oca, self.imp.clone(), self.e)
    }

    /// Least element, when the carrier is a complete lattice.
    pub fn bottom(&self) -> Option<usize> {
        self.order().bottom()
    }

    /// The IOCA axioms beyond the OCA layer.
    pub fn check_layer(&self, exec: Exec) -> Report {
        let mut r = Report::new("ioca");
        let o = &self.oca;
        r.push(CheckResult::from_witness(
            "inf-complete",
            1,
            (!o.order().is_complete_lattice())
                .then(|| Witness::new().with("order", "not a complete lattice")),
        ));
        r.push(o.scan("imp-antitone-left", exec, &["a", "a'", "b"], |x| {
            !o.le(x[0], x[1]) || o.le(self.imp(x[1], x[2]), self.imp(x[0], x[2]))
        }));
        r.push(o.scan("imp-monotone-right", exec, &["a", "b", "b'"], |x| {
            !o.le(x[1], x[2]) || o.le(self.imp(x[0], x[1]), self.imp(x[0], x[2]))
        }));
        r.push(o.scan("PA", exec, &["a", "b", "c"], |x| {
            let (a, b, c) = (x[0], x[1], x[2]);
            !o.le(a, self.imp(b, c)) || o.le(o.app(a, b), c)
        }));
        r.push(o.scan("E", exec, &["a", "b", "c"], |x| {
            let (a, b, c) = (x[0], x[1], x[2]);
            !o.le(o.app(a, b), c) || o.le(o.app(self.e, a), self.imp(b, c))
        }));
        r.push(CheckResult::from_witness(
            "e-in-filter",
            1,
            (!o.phi().contains(self.e)).then(|| Witness::new().with("e", o.name(self.e))),
        ));
        r
    }

    /// OCA axioms plus the IOCA layer.
    pub fn check(&self, exec: Exec) -> Report {
        let mut r = Report::new("ioca-check");
        r.absorb(self.oca.check(exec));
        r.absorb(self.check_layer(exec));
        r
    }

    /// The Heyting-preorder theorem with its explicit realizers.
    pub fn heyting_check(&self, exec: Exec) -> Result<Report> {
        let o = &self.oca;
        let n = o.len();
        let bc = basic_combinators(self)?;
        let phi: Vec<usize> = o.phi().iter().collect();
        let mut r = Report::new("heyting");

        let w = exec.first_in_grid(&[n, n], |x| {
            let (a, b) = (x[0], x[1]);
            let lhs = phi.iter().any(|&f| o.le(o.app(f, a), b));
            let rhs = phi.iter().any(|&f| o.le(f, self.imp(a, b)));
            let transfer = phi.iter().copied().find(|&f| {
                let fwd = !o.le(o.app(f, a), b) || o.le(o.app(self.e, f), self.imp(a, b));
                let back = !o.le(f, self.imp(a, b)) || o.le(o.app(f, a), b);
                !(fwd && back)
            });
            match (lhs == rhs, transfer) {
                (true, None) => None,
                (_, Some(f)) => Some(
                    Witness::new()
                        .with("a", o.name(a))
                        .with("b", o.name(b))
                        .with("f", o.name(f)),
                ),
                (false, None) => Some(Witness::new().with("a", o.name(a)).with("b", o.name(b))),
            }
        });
        r.push(CheckResult::from_witness(
            "entailment-via-implication",
            (n * n) as u64,
            w,
        ));

        let d_table: Vec<usize> = phi
            .iter()
            .map(|&f| combinator_d(self, &bc, f))
            .collect::<Result<_>>()?;
        let conv: Vec<usize> = phi
            .iter()
            .map(|&f| {
                let bbf = o.app(bc.b, o.app(bc.b, f));
                o.app(o.app(bc.b, self.e), o.app(bbf, bc.pair))
            })
            .collect();
        let meet = |a: usize, b: usize| o.app(o.app(bc.pair, a), b);
        let dims = [n, n, n, phi.len().max(1)];
        let w = exec.first_in_grid(&dims, |x| {
            let (a, b, c) = (x[0], x[1], x[2]);
            let &f = phi.get(x[3])?;
            let i = x[3];
            let fwd = !o.le(o.app(f, a), self.imp(b, c)) || o.le(o.app(d_table[i], meet(a, b)), c);
            let back = !o.le(o.app(f, meet(a, b)), c) || o.le(o.app(conv[i], a), self.imp(b, c));
            (!(fwd && back)).then(|| {
                Witness::new()
                    .with("a", o.name(a))
                    .with("b", o.name(b))
                    .with("c", o.name(c))
                    .with("f", o.name(f))
                    .with("direction", if fwd { "converse" } else { "forward" })
            })
        });
        r.push(CheckResult::from_witness(
            "meet-implication-adjunction",
            (n as u64).pow(3) * phi.len() as u64,
            w,
        ));
        let outside = phi
            .iter()
            .enumerate()
            .find(|&(i, _)| !o.phi().contains(d_table[i]) || !o.phi().contains(conv[i]));
        r.push(CheckResult::from_witness(
            "constructed-realizers-in-filter",
            phi.len() as u64,
            outside.map(|(_, &f)| Witness::new().with("f", o.name(f))),
        ));
        Ok(r)
    }

    /// OCA layer suite, IOCA axioms and the Heyting theorem.
    pub fn suite(&self, exec: Exec) -> Result<Report> {
        let mut r = Report::new("ioca-layer");
        r.absorb(self.oca.suite(exec)?);
        let layer = self.check_layer(exec);
        let ok = layer.passed() && r.passed();
        r.absorb(layer);
        if ok {
            r.absorb(self.heyting_check(exec)?);
        } else {
            r.push(CheckResult::skipped("heyting", "IOCA axioms fail"));
        }
        Ok(r)
    }
}

impl Applicative for Ioca {
    fn size(&self) -> usize {
        self.len()
    }
    fn apply(&self, a: usize, b: usize) -> usize {
        self.app(a, b)
    }
    fn atom(&self, atom: Atom) -> Result<usize> {
        match atom {
            Atom::E => Ok(self.e),
            other => self.oca.atom(other),
        }
    }
    fn name(&self, a: usize) -> String {
        self.names()[a].clone()
    }
}

impl Koca {
    pub fn new(ioca: Ioca, c: usize) -> Result<Self> {
        if c >= ioca.len() {
            return Err(Error::structural("c is not an element"));
        }
        Ok(Koca { ioca, c })
    }

    pub fn ioca(&self) -> &Ioca {
        &self.ioca
    }

    pub fn c(&self) -> usize {
        self.c
    }

    pub fn with_c(&self, c: usize) -> Result<Self> {
        Koca::new(self.ioca.clone(), c)
    }

    pub fn with_ioca(&self, ioca: Ioca) -> Result<Self> {
        Koca::new(ioca, self.c)
    }

    /// The Peirce clause and `c ∈ Φ`.
    pub fn check_layer(&self, exec: Exec) -> Report {
        let mut r = Report::new("koca");
        let o = self.oca();
        r.push(o.scan("C", exec, &["a", "b"], |x| {
            let (a, b) = (x[0], x[1]);
            o.le(self.c, self.imp(self.imp(self.imp(a, b), a), a))
        }));
        r.push(CheckResult::from_witness(
            "c-in-filter",
            1,
            (!o.phi().contains(self.c)).then(|| Witness::new().with("c", o.name(self.c))),
        ));
        r
    }

    /// OCA, IOCA and KOCA axioms.
    pub fn check(&self, exec: Exec) -> Report {
        let mut r = Report::new("koca-check");
        r.absorb(self.oca().check(exec));
        r.absorb(self.ioca.check_layer(exec));
        r.absorb(self.check_layer(exec));
        r
    }

    /// `c ((a→⊥)→⊥) ≤ a` for every `a`; `bot` defaults to the least element.
    pub fn double_negation_realizer(&self, bot: Option<usize>, exec: Exec) -> Result<Report> {
        let o = self.oca();
        let bot = match bot.or_else(|| self.bottom()) {
            Some(b) if b < o.len() => b,
            Some(b) => return Err(Error::structural(format!("⊥ index {b} out of range"))),
            None => return Err(Error::Contract("carrier has no least element".into())),
        };
        let mut r = Report::new("double-negation");
        r.push(o.scan("c-realizes-not-not-elim", exec, &["a"], |x| {
            let a = x[0];
            let nn = self.imp(self.imp(a, bot), bot);
            o.le(o.app(self.c, nn), a)
        }));
        Ok(r)
    }

    pub fn suite(&self, exec: Exec) -> Result<Report> {
        let mut r = Report::new("koca-layer");
        r.absorb(self.ioca.suite(exec)?);
        let layer = self.check_layer(exec);
        let ok = layer.passed() && r.passed();
        r.absorb(layer);
        if ok {
            r.absorb(self.double_negation_realizer(None, exec)?);
        } else {
            r.push(CheckResult::skipped("double-negation", "KOCA axioms fail"));
        }
        Ok(r)
    }
}

impl Applicative for Koca {
    fn size(&self) -> usize {
        self.len()
    }
    fn apply(&self, a: usize, b: usize) -> usize {
        self.app(a, b)
    }
    fn atom(&self, atom: Atom) -> Result<usize> {
        match atom {
            Atom::C => Ok(self.c),
            other => self.ioca.atom(other),
        }
    }
    fn name(&self, a: usize) -> String {
        self.names()[a].clone()
    }
}

/// A carrier with order, implication and filter, from which application
/// and the combinators are defined as infima.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ProperQuadruple {
    pub names: Vec<String>,
    pub order: Poset,
    pub imp: Vec<usize>,
    pub phi: ElemSet,
}

impl ProperQuadruple {
    pub fn new(names: Vec<String>, order: Poset, imp: Vec<usize>, phi: ElemSet) -> Result<Self> {
        let n = names.len();
        check_width(n, "algebra")?;
        if order.len() != n {
            return Err(Error::structural("order table does not match the carrier"));
        }
        if imp.len() != n * n || imp.iter().any(|&x| x >= n) {
            return Err(Error::structural(format!("imp table must be a total {n}x{n} map")));
        }
        if phi.width() != n {
            return Err(Error::structural("filter has the wrong width"));
        }
        Ok(ProperQuadruple {
            names,
            order,
            imp,
            phi,
        })
    }

    fn imp(&self, a: usize, b: usize) -> usize {
        self.imp[a * self.names.len() + b]
    }

    /// `ab = inf{c : a ≤ b → c}` for all pairs.
    pub fn derived_app(&self) -> Result<Vec<usize>> {
        let n = self.names.len();
        let mut app = Vec::with_capacity(n * n);
        for a in 0..n {
            for b in 0..n {
                app.push(self.order.inf((0..n).filter(|&c| self.order.le(a, self.imp(b, c))))?);
            }
        }
        Ok(app)
    }

    /// Builds the KOCA, rejecting the quadruple with the first violated
    /// properness clause.
    pub fn into_koca(&self) -> Result<Koca> {
        let n = self.names.len();
        let ord = &self.order;
        if let Some((clause, _)) = ord.order_violation() {
            return Err(Error::Improper(format!("order is not {clause}")));
        }
        if !ord.is_complete_lattice() {
            return Err(Error::Improper("order is not inf-complete".into()));
        }
        for a in 0..n {
            for a2 in 0..n {
                for b in 0..n {
                    if ord.le(a, a2) && !ord.le(self.imp(a2, b), self.imp(a, b)) {
                        return Err(Error::Improper(format!(
                            "implication is not antitone in its first argument at ({},{},{})",
                            self.names[a], self.names[a2], self.names[b]
                        )));
                    }
                    if ord.le(a, a2) && !ord.le(self.imp(b, a), self.imp(b, a2)) {
                        return Err(Error::Improper(format!(
                            "implication is not monotone in its second argument at ({},{},{})",
                            self.names[b], self.names[a], self.names[a2]
                        )));
                    }
                }
            }
        }
        let app = self.derived_app()?;
        let ap = |a: usize, b: usize| app[a * n + b];
        let pairs = || (0..n).flat_map(move |a| (0..n).map(move |b| (a, b)));
        let k = ord.inf(pairs().map(|(a, b)| self.imp(a, self.imp(b, a))))?;
        let mut s_vals = Vec::new();
        for a in 0..n {
            for b in 0..n {
                for c in 0..n {
                    let tail = self.imp(c, ap(ap(a, c), ap(b, c)));
                    s_vals.push(self.imp(a, self.imp(b, tail)));
                }
            }
        }
        let s = ord.inf(s_vals)?;
        let e = ord.inf(pairs().map(|(a, b)| self.imp(a, self.imp(b, ap(a, b)))))?;
        let c = ord.inf(pairs().map(|(a, b)| self.imp(self.imp(self.imp(a, b), a), a)))?;

        if let Some((f, g)) = self
            .phi
            .iter()
            .flat_map(|f| self.phi.iter().map(move |g| (f, g)))
            .find(|&(f, g)| !self.phi.contains(ap(f, g)))
        {
            return Err(Error::Improper(format!(
                "filter is not closed under application: {} {} = {}",
                self.names[f],
                self.names[g],
                self.names[ap(f, g)]
            )));
        }
        for (label, x) in [("k", k), ("s", s), ("e", e), ("c", c)] {
            if !self.phi.contains(x) {
                return Err(Error::Improper(format!(
                    "{label} = {} is not in the filter",
                    self.names[x]
                )));
            }
        }
        let oca = FilteredOca::new(self.names.clone(), self.order.clone(), app, k, s, self.phi)?;
        let ioca = Ioca::new(oca, self.imp.clone(), e)?;
        Koca::new(ioca, c)
    }

    /// `app(a,b)` is the least `c` with `a ≤ b → c`, scanning candidates.
    pub fn app_is_least_check(&self, koca: &Koca, exec: Exec) -> CheckResult {
        let o = koca.oca();
        o.scan("app-is-least-solution", exec, &["a", "b"], |x| {
            let (a, b) = (x[0], x[1]);
            let ab = o.app(a, b);
            let sols: Vec<usize> = (0..o.len()).filter(|&c| o.le(a, self.imp(b, c))).collect();
            sols.iter().all(|&c| o.le(ab, c))
                && sols.iter().any(|&c| o.le(c, ab))
        })
    }
}

/// Wraps [`ProperQuadruple::into_koca`].
pub fn from_proper_quadruple(q: &ProperQuadruple) -> Result<Koca> {
    q.into_koca()
}

fn atom_set_name(mask: usize, n: usize) -> String {
    let members: Vec<String> = (0..n)
        .filter(|i| mask >> i & 1 == 1)
        .map(|i| i.to_string())
        .collect();
    format!("{{{}}}", members.join(","))
}

/// The power set of `n` atoms as a proper quadruple with classical
/// implication and Φ = {⊤}. Elements are ordered by bit pattern and
/// named by their atoms, e.g. `{0,2}`.
pub fn boolean_quadruple(n: usize) -> Result<ProperQuadruple> {
    if n > BOOLEAN_MAX_ATOMS {
        return Err(Error::resource(
            "Boolean algebra atoms",
            n as u128,
            BOOLEAN_MAX_ATOMS as u128,
        ));
    }
    let size = 1usize << n;
    let full = size - 1;
    let names = (0..size).map(|m| atom_set_name(m, n)).collect();
    let order = Poset::from_fn(size, |a, b| a & !b == 0)?;
    let imp = (0..size * size)
        .map(|i| (!(i / size) | (i % size)) & full)
        .collect();
    let phi = ElemSet::from_indices(size, [full])?;
    ProperQuadruple::new(names, order, imp, phi)
}

/// The Boolean KOCA on `n` atoms.
pub fn boolean(n: usize) -> Result<Koca> {
    boolean_quadruple(n)?.into_koca()
}

/// The three-element chain `0 < 1 < 2` with Heyting implication and
/// Φ = {2}.
pub fn chain3_quadruple() -> ProperQuadruple {
    let order = Poset::from_fn(3, |a, b| a <= b).expect("chain");
    let imp = (0..9)
        .map(|i| if i / 3 <= i % 3 { 2 } else { i % 3 })
        .collect();
    ProperQuadruple::new(
        vec!["0".into(), "1".into(), "2".into()],
        order,
        imp,
        ElemSet::from_indices(3, [2]).expect("top"),
    )
    .expect("chain quadruple")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn boolean_two_elements() {
        let k = boolean(1).unwrap();
        assert_eq!(k.len(), 2);
        // app is meet, every combinator is ⊤.
        for a in 0..2 {
            for b in 0..2 {
                assert_eq!(k.app(a, b), a & b);
            }
        }
        assert_eq!((k.k(), k.s(), k.e(), k.c()), (1, 1, 1, 1));
        assert!(k.check(Exec::Sequential).passed());
    }

    #[test]
    fn one_element_quadruple() {
        let q = ProperQuadruple::new(
            vec!["*".into()],
            Poset::from_fn(1, |_, _| true).unwrap(),
            vec![0],
            ElemSet::from_indices(1, [0]).unwrap(),
        )
        .unwrap();
        let k = q.into_koca().unwrap();
        assert!(k.suite(Exec::Sequential).unwrap().passed());
    }

    #[test]
    fn chain_fails_peirce() {
        let q = chain3_quadruple();
        let err = q.into_koca().unwrap_err();
        assert!(matches!(&err, Error::Improper(m) if m.starts_with("c =")), "{err}");
    }

    #[test]
    fn chain_with_forced_c_fails_double_negation() {
        let mut q = chain3_quadruple();
        q.phi = ElemSet::from_indices(3, [1, 2]).unwrap();
        // With Φ widened to include the Peirce infimum the quadruple is
        // proper on paper; force c = ⊤ instead to see the failure.
        let koca = q.into_koca().unwrap();
        let forced = koca.with_c(2).unwrap();
        let r = forced.double_negation_realizer(None, Exec::Sequential).unwrap();
        let c = &r.checks[0];
        assert!(!c.passed());
        assert_eq!(c.witness.as_ref().unwrap().get("a"), Some("1"));
    }

    #[test]
    fn boolean_bound() {
        assert!(matches!(boolean(5), Err(Error::Resource { .. })));
        assert_eq!(boolean(2).unwrap().names()[3], "{0,1}");
    }
}
