//! Abstract Krivine Structures over a finite realizability lattice.

use crate::error::{Error, Result};
use crate::exec::Exec;
use crate::lattice::{lattice_suite, PushLattice, RealizabilityLattice};
use crate::limits::Limits;
use crate::report::{CheckResult, Report, Witness};
use crate::set::{bit_indices, StackSet, TermSet};
use crate::term::{Applicative, Atom};

/// Which stack sets the generally stated lemmas are quantified over.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum LemmaScope {
    /// Closed stack sets only.
    #[default]
    Closed,
    /// Every subset of Π, for the clauses that hold for arbitrary subsets.
    /// Falls back to closed sets (with a note) when |Π| exceeds
    /// [`ALL_SUBSETS_MAX`].
    AllSubsets,
}

/// Largest |Π| for which lemma clauses are quantified over all subsets.
pub const ALL_SUBSETS_MAX: usize = 5;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AbstractKrivineStructure {
    base: PushLattice,
    app: Vec<usize>,
    store: Vec<usize>,
    qp: TermSet,
    k: usize,
    s: usize,
    cc: usize,
}

/// The derived terms `I = SKK`, `B = S(KS)K`, `E = S(KI)` and the
/// adjunctor `EE`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct DerivedTerms {
    pub i: usize,
    pub b: usize,
    pub e: usize,
    pub ee: usize,
}

impl AbstractKrivineStructure {
    /// Validates table shapes and indices. The axioms are not checked
    /// here; see [`AbstractKrivineStructure::check_axioms`].
    pub fn new(
        base: PushLattice,
        app: Vec<usize>,
        store: Vec<usize>,
        qp: TermSet,
        k: usize,
        s: usize,
        cc: usize,
    ) -> Result<Self> {
        let nt = base.lattice().n_terms();
        let ns = base.lattice().n_stacks();
        if app.len() != nt * nt {
            return Err(Error::structural(format!("app table must be {nt}x{nt}")));
        }
        if app.iter().any(|&t| t >= nt) {
            return Err(Error::structural("app value is not a term"));
        }
        if store.len() != ns {
            return Err(Error::structural(format!("store table must have {ns} entries")));
        }
        if store.iter().any(|&t| t >= nt) {
            return Err(Error::structural("store value is not a term"));
        }
        if qp.width() != nt {
            return Err(Error::structural("quasi-proof set has the wrong width"));
        }
        for (name, c) in [("K", k), ("S", s), ("cc", cc)] {
            if c >= nt {
                return Err(Error::structural(format!("combinator {name} is not a term")));
            }
        }
        Ok(AbstractKrivineStructure {
            base,
            app,
            store,
            qp,
            k,
            s,
            cc,
        })
    }

    /// Λ = Π = {∗}, full pole, constant maps.
    pub fn single_point() -> Self {
        let lat =
            RealizabilityLattice::from_pairs(vec!["*".into()], vec!["*".into()], &[(0, 0)])
                .expect("single point lattice");
        let base = PushLattice::new(lat, vec![0]).expect("single point push");
        let qp = TermSet::from_bits_unchecked(1, 1);
        AbstractKrivineStructure::new(base, vec![0], vec![0], qp, 0, 0, 0)
            .expect("single point structure")
    }

    pub fn base(&self) -> &PushLattice {
        &self.base
    }

    pub fn lattice(&self) -> &RealizabilityLattice {
        self.base.lattice()
    }

    pub fn n_terms(&self) -> usize {
        self.lattice().n_terms()
    }

    pub fn n_stacks(&self) -> usize {
        self.lattice().n_stacks()
    }

    pub fn app(&self, t: usize, u: usize) -> usize {
        self.app[t * self.n_terms() + u]
    }

    pub fn push(&self, t: usize, p: usize) -> usize {
        self.base.push(t, p)
    }

    pub fn store(&self, p: usize) -> usize {
        self.store[p]
    }

    pub fn qp(&self) -> TermSet {
        self.qp
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn s(&self) -> usize {
        self.s
    }

    pub fn cc(&self) -> usize {
        self.cc
    }

    pub fn app_table(&self) -> &[usize] {
        &self.app
    }

    pub fn store_table(&self) -> &[usize] {
        &self.store
    }

    pub fn orth(&self, t: usize, p: usize) -> bool {
        self.lattice().orthogonal(t, p)
    }

    /// Copy with one push entry replaced, for mutation experiments.
    pub fn with_push(&self, t: usize, p: usize, value: usize) -> Result<Self> {
        let mut push = self.base.push_table().to_vec();
        let ns = self.n_stacks();
        if t >= self.n_terms() || p >= ns || value >= ns {
            return Err(Error::structural("push mutation out of range"));
        }
        push[t * ns + p] = value;
        let base = PushLattice::new(self.lattice().clone(), push)?;
        Ok(AbstractKrivineStructure { base, ..self.clone() })
    }

    /// Copy with one app entry replaced.
    pub fn with_app(&self, t: usize, u: usize, value: usize) -> Result<Self> {
        let nt = self.n_terms();
        if t >= nt || u >= nt || value >= nt {
            return Err(Error::structural("app mutation out of range"));
        }
        let mut out = self.clone();
        out.app[t * nt + u] = value;
        Ok(out)
    }

    /// Copy with one store entry replaced.
    pub fn with_store(&self, p: usize, value: usize) -> Result<Self> {
        if p >= self.n_stacks() || value >= self.n_terms() {
            return Err(Error::structural("store mutation out of range"));
        }
        let mut out = self.clone();
        out.store[p] = value;
        Ok(out)
    }

    /// Copy with a different pole.
    pub fn with_lattice(&self, lat: RealizabilityLattice) -> Result<Self> {
        if lat.n_terms() != self.n_terms() || lat.n_stacks() != self.n_stacks() {
            return Err(Error::structural("replacement lattice has other dimensions"));
        }
        let base = PushLattice::new(lat, self.base.push_table().to_vec())?;
        Ok(AbstractKrivineStructure { base, ..self.clone() })
    }

    /// Copy with a different quasi-proof set.
    pub fn with_qp(&self, qp: TermSet) -> Result<Self> {
        if qp.width() != self.n_terms() {
            return Err(Error::structural("quasi-proof set has the wrong width"));
        }
        Ok(AbstractKrivineStructure { qp, ..self.clone() })
    }

    /// Copy with other combinators.
    pub fn with_combinators(&self, k: usize, s: usize, cc: usize) -> Result<Self> {
        if [k, s, cc].iter().any(|&c| c >= self.n_terms()) {
            return Err(Error::structural("combinator is not a term"));
        }
        Ok(AbstractKrivineStructure {
            k,
            s,
            cc,
            ..self.clone()
        })
    }

    pub fn derived_combinators(&self) -> DerivedTerms {
        let (k, s) = (self.k, self.s);
        let i = self.app(self.app(s, k), k);
        let b = self.app(self.app(s, self.app(k, s)), k);
        let e = self.app(s, self.app(k, i));
        let ee = self.app(e, e);
        DerivedTerms { i, b, e, ee }
    }

    fn tname(&self, t: usize) -> String {
        self.lattice().terms()[t].clone()
    }

    fn sname(&self, p: usize) -> String {
        self.lattice().stacks()[p].clone()
    }

    fn show_stacks_bits(&self, p: u128) -> String {
        self.lattice().show_stacks(&self.lattice().stack_set(p))
    }

    // Raw bit-level operations. Stack sets are u128 masks over Π, term sets
    // over Λ.

    pub(crate) fn perp_s(&self, p: u128) -> u128 {
        self.lattice().stacks_perp_bits(p)
    }

    pub(crate) fn perp_t(&self, l: u128) -> u128 {
        self.lattice().terms_perp_bits(l)
    }

    pub(crate) fn close(&self, p: u128) -> u128 {
        self.lattice().close_stack_bits(p)
    }

    pub(crate) fn app_sets_bits(&self, l: u128, m: u128) -> u128 {
        let mut out = 0u128;
        for t in bit_indices(l) {
            for u in bit_indices(m) {
                out |= 1 << self.app(t, u);
            }
        }
        out
    }

    /// `P ⇒ Q = ^⊥P · Q`.
    pub(crate) fn imp_raw(&self, p: u128, q: u128) -> u128 {
        self.base.push_set_bits(self.perp_s(p), q)
    }

    pub(crate) fn imp_bits(&self, p: u128, q: u128) -> u128 {
        self.close(self.imp_raw(p, q))
    }

    /// `P ∘ Q = ^⊥Q ⇝ P`.
    pub(crate) fn circ_raw(&self, p: u128, q: u128) -> u128 {
        self.base.conductor_bits(self.perp_s(q), p)
    }

    pub(crate) fn circ_bits(&self, p: u128, q: u128) -> u128 {
        self.close(self.circ_raw(p, q))
    }

    pub(crate) fn diamond_bits(&self, p: u128, q: u128) -> u128 {
        self.perp_t(self.app_sets_bits(self.perp_s(p), self.perp_s(q)))
    }

    fn check_set(&self, p: &StackSet) -> Result<()> {
        if p.width() != self.n_stacks() {
            return Err(Error::structural("stack set has the wrong width"));
        }
        Ok(())
    }

    /// `P ∘⊥ Q = (^⊥(^⊥Q ⇝ P))^⊥`.
    pub fn op_circ(&self, p: &StackSet, q: &StackSet) -> Result<StackSet> {
        self.check_set(p)?;
        self.check_set(q)?;
        Ok(self.lattice().stack_set(self.circ_bits(p.bits(), q.bits())))
    }

    /// `P ⇒⊥ Q = (^⊥(^⊥P · Q))^⊥`.
    pub fn op_imp(&self, p: &StackSet, q: &StackSet) -> Result<StackSet> {
        self.check_set(p)?;
        self.check_set(q)?;
        Ok(self.lattice().stack_set(self.imp_bits(p.bits(), q.bits())))
    }

    /// `P ⇒ Q = ^⊥P · Q`, not closed in general.
    pub fn op_imp_raw(&self, p: &StackSet, q: &StackSet) -> Result<StackSet> {
        self.check_set(p)?;
        self.check_set(q)?;
        Ok(self.lattice().stack_set(self.imp_raw(p.bits(), q.bits())))
    }

    /// `P ⋄ Q = ((^⊥P)(^⊥Q))^⊥`. Accepts arbitrary subsets; the result is
    /// an orthogonal and therefore always closed.
    pub fn op_diamond(&self, p: &StackSet, q: &StackSet) -> Result<StackSet> {
        self.check_set(p)?;
        self.check_set(q)?;
        Ok(self.lattice().stack_set(self.diamond_bits(p.bits(), q.bits())))
    }

    /// `LM = {tu : t∈L, u∈M}`.
    pub fn app_sets(&self, l: &TermSet, m: &TermSet) -> Result<TermSet> {
        if l.width() != self.n_terms() || m.width() != self.n_terms() {
            return Err(Error::structural("term set has the wrong width"));
        }
        Ok(self.lattice().term_set(self.app_sets_bits(l.bits(), m.bits())))
    }

    fn term_check<F>(&self, name: &str, exec: Exec, dims: &[usize], labels: &[char], holds: F) -> CheckResult
    where
        F: Fn(&[usize]) -> bool + Sync + Send,
    {
        let cases = dims.iter().product::<usize>() as u64;
        let w = exec.first_violation(dims, holds).map(|pt| {
            pt.iter().zip(labels).fold(Witness::new(), |w, (&i, &l)| {
                if l == 'p' || l == 'q' {
                    let label = if l == 'p' { "π" } else { "π'" };
                    w.with(label, self.sname(i))
                } else {
                    w.with(l.to_string(), self.tname(i))
                }
            })
        });
        CheckResult::from_witness(name, cases, w)
    }

    fn family_check<F>(&self, name: &str, exec: Exec, family: &[u128], arity: usize, holds: F) -> CheckResult
    where
        F: Fn(&[u128]) -> bool + Sync + Send,
    {
        let dims = vec![family.len(); arity];
        let cases = (family.len() as u64).pow(arity as u32);
        let w = exec
            .first_violation(&dims, |pt| {
                let sets: Vec<u128> = pt.iter().map(|&i| family[i]).collect();
                holds(&sets)
            })
            .map(|pt| {
                pt.iter()
                    .zip(["P", "Q", "R"])
                    .fold(Witness::new(), |w, (&i, l)| w.with(l, self.show_stacks_bits(family[i])))
            });
        CheckResult::from_witness(name, cases, w)
    }

    /// Axioms (S1)–(S5) and the quasi-proof clauses, each with the first
    /// counterexample in load order.
    pub fn check_axioms(&self, exec: Exec) -> Report {
        let mut r = Report::new("aks-axioms");
        let (nt, ns) = (self.n_terms(), self.n_stacks());

        let missing = [("K", self.k), ("S", self.s), ("cc", self.cc)]
            .into_iter()
            .find(|&(_, c)| !self.qp.contains(c));
        r.push(CheckResult::from_witness(
            "qp-contains-combinators",
            3,
            missing.map(|(n, c)| Witness::new().with(n, self.tname(c))),
        ));
        let qp: Vec<usize> = self.qp.iter().collect();
        let m = qp.len();
        let closure_w = exec
            .first_violation(&[m, m], |pt| self.qp.contains(self.app(qp[pt[0]], qp[pt[1]])))
            .map(|pt| {
                Witness::new()
                    .with("t", self.tname(qp[pt[0]]))
                    .with("u", self.tname(qp[pt[1]]))
            });
        r.push(CheckResult::from_witness(
            "qp-closed-under-app",
            (m * m) as u64,
            closure_w,
        ));

        r.push(self.term_check("S1", exec, &[nt, nt, ns], &['t', 's', 'p'], |x| {
            let (t, s, p) = (x[0], x[1], x[2]);
            !self.orth(t, self.push(s, p)) || self.orth(self.app(t, s), p)
        }));
        r.push(self.term_check("S2", exec, &[nt, nt, ns], &['t', 's', 'p'], |x| {
            let (t, s, p) = (x[0], x[1], x[2]);
            !self.orth(t, p) || self.orth(self.k, self.push(t, self.push(s, p)))
        }));
        r.push(self.term_check("S3", exec, &[nt, nt, nt, ns], &['t', 's', 'u', 'p'], |x| {
            let (t, s, u, p) = (x[0], x[1], x[2], x[3]);
            let lhs = self.app(self.app(t, u), self.app(s, u));
            !self.orth(lhs, p) || self.orth(self.s, self.push(t, self.push(s, self.push(u, p))))
        }));
        r.push(self.term_check("S4", exec, &[nt, ns], &['t', 'p'], |x| {
            let (t, p) = (x[0], x[1]);
            !self.orth(t, self.push(self.store(p), p)) || self.orth(self.cc, self.push(t, p))
        }));
        r.push(self.term_check("S5", exec, &[nt, ns, ns], &['t', 'p', 'q'], |x| {
            let (t, p, p2) = (x[0], x[1], x[2]);
            !self.orth(t, p) || self.orth(self.store(p), self.push(t, p2))
        }));
        r
    }

    /// The lemmas on AKS consequences, the ∘⊥/⋄ comparison, both halves of
    /// the adjunction, and the consequences of the Sη rule for `E`.
    pub fn verify_lemmas(&self, limits: &Limits, exec: Exec, scope: LemmaScope) -> Result<Report> {
        let mut r = Report::new("aks-lemmas");
        let (nt, ns) = (self.n_terms(), self.n_stacks());
        let closed: Vec<u128> = self
            .lattice()
            .enumerate_closed_stack_sets(limits)?
            .iter()
            .map(|p| p.bits())
            .collect();
        let general: Vec<u128> = match scope {
            LemmaScope::AllSubsets if ns <= ALL_SUBSETS_MAX => (0..1u128 << ns).collect(),
            _ => closed.clone(),
        };
        let d = self.derived_combinators();
        let in_perp = |t: usize, x: u128| self.perp_s(x) >> t & 1 == 1;

        r.push(self.family_check("item1-closed-vs-raw-nested-imp", exec, &closed, 3, |s| {
            let (p, q, rr) = (s[0], s[1], s[2]);
            let a = self.perp_s(self.imp_bits(self.imp_bits(p, q), rr));
            let b = self.perp_s(self.imp_raw(self.imp_raw(p, q), rr));
            let c = self.perp_s(self.imp_bits(p, self.imp_bits(q, rr)));
            let e = self.perp_s(self.imp_raw(p, self.imp_raw(q, rr)));
            a == b && c & !e == 0
        }));
        r.push(self.family_check("item2-modus-ponens", exec, &general, 2, |s| {
            let (p, q) = (s[0], s[1]);
            let lhs = self.app_sets_bits(self.perp_s(self.imp_bits(p, q)), self.perp_s(p));
            lhs & !self.perp_s(q) == 0
        }));
        r.push(self.family_check("item3-K", exec, &general, 2, |s| {
            in_perp(self.k, self.imp_raw(s[0], self.imp_raw(s[1], s[0])))
        }));
        r.push(self.family_check("item4-S", exec, &general, 3, |s| {
            let (p, q, rr) = (s[0], s[1], s[2]);
            let pqr = self.imp_raw(p, self.imp_raw(q, rr));
            let pq = self.imp_raw(p, q);
            let pr = self.imp_raw(p, rr);
            in_perp(self.s, self.imp_raw(pqr, self.imp_raw(pq, pr)))
        }));
        r.push(self.family_check("item5-cc-closed", exec, &closed, 2, |s| {
            let (p, q) = (s[0], s[1]);
            in_perp(self.cc, self.imp_bits(self.imp_bits(self.imp_bits(p, q), p), p))
        }));
        r.push(self.family_check("item5-cc-raw", exec, &general, 2, |s| {
            let (p, q) = (s[0], s[1]);
            in_perp(self.cc, self.imp_raw(self.imp_raw(self.imp_raw(p, q), p), p))
        }));
        r.push(self.term_check("item6-I-orth", exec, &[nt, ns], &['t', 'p'], |x| {
            !self.orth(x[0], x[1]) || self.orth(d.i, self.push(x[0], x[1]))
        }));
        r.push(self.family_check("item7-I", exec, &general, 1, |s| {
            in_perp(d.i, self.imp_bits(s[0], s[0]))
        }));
        r.push(self.term_check("item8-B-orth", exec, &[nt, nt, nt, ns], &['t', 'u', 'v', 'p'], |x| {
            let (t, u, v, p) = (x[0], x[1], x[2], x[3]);
            !self.orth(t, self.push(self.app(u, v), p))
                || self.orth(d.b, self.push(t, self.push(u, self.push(v, p))))
        }));
        r.push(self.family_check("item9-B", exec, &general, 3, |s| {
            let (p, q, rr) = (s[0], s[1], s[2]);
            let f = self.imp_raw(
                self.imp_raw(q, rr),
                self.imp_raw(self.imp_raw(p, q), self.imp_raw(p, rr)),
            );
            in_perp(d.b, f)
        }));
        r.push(self.term_check("item10-E-orth", exec, &[nt, nt, ns], &['t', 'u', 'p'], |x| {
            let (t, u, p) = (x[0], x[1], x[2]);
            !self.orth(self.app(t, u), p) || self.orth(self.app(d.e, t), self.push(u, p))
        }));

        r.push(self.family_check("circ-within-diamond", exec, &closed, 2, |s| {
            self.circ_bits(s[0], s[1]) & !self.diamond_bits(s[0], s[1]) == 0
        }));
        r.push(self.family_check("app-realizes-circ", exec, &closed, 2, |s| {
            let (p, q) = (s[0], s[1]);
            let ts = self.app_sets_bits(self.perp_s(p), self.perp_s(q));
            ts & !self.perp_s(self.circ_bits(p, q)) == 0
        }));
        r.push(self.family_check("half-adjunction", exec, &closed, 3, |s| {
            let (p, q, rr) = (s[0], s[1], s[2]);
            let hyp = self.imp_bits(q, rr) & !p == 0;
            let special = p & !self.circ_bits(self.imp_bits(q, p), q) == 0;
            (!hyp || rr & !self.circ_bits(p, q) == 0) && special
        }));
        let ee_perp = self.perp_t(1 << d.ee);
        let e_of = |l: u128| self.app_sets_bits(1 << d.e, l);
        r.push(self.family_check("converse-half-adjunction", exec, &closed, 3, |s| {
            let (p, q, rr) = (s[0], s[1], s[2]);
            if rr & !self.circ_bits(p, q) != 0 {
                return true;
            }
            let mid = self.perp_t(e_of(self.perp_s(p)));
            self.imp_bits(q, rr) & !mid == 0 && mid & !self.circ_bits(ee_perp, p) == 0
        }));

        r.push(self.family_check("s-eta-diamond-pointwise", exec, &closed, 2, |s| {
            let (p, q) = (s[0], s[1]);
            let ep = e_of(self.perp_s(p));
            let qp = self.perp_s(q);
            bit_indices(self.diamond_bits(p, q))
                .all(|pi| ep & !self.perp_s(self.base.push_set_bits(qp, 1 << pi)) == 0)
        }));
        r.push(self.family_check("s-eta-diamond-set", exec, &closed, 2, |s| {
            let (p, q) = (s[0], s[1]);
            let rhs = self.perp_s(self.base.push_set_bits(self.perp_s(q), self.diamond_bits(p, q)));
            e_of(self.perp_s(p)) & !rhs == 0
        }));
        r.push(self.family_check("s-eta-below-diamond", exec, &closed, 3, |s| {
            let (p, q, rr) = (s[0], s[1], s[2]);
            if rr & !self.diamond_bits(p, q) != 0 {
                return true;
            }
            let rhs = self.perp_s(self.base.push_set_bits(self.perp_s(q), rr));
            e_of(self.perp_s(p)) & !rhs == 0
        }));
        r.push(self.family_check("s-eta-imp-stable", exec, &closed, 2, |s| {
            let x = self.perp_s(self.imp_bits(s[0], s[1]));
            e_of(x) & !x == 0
        }));
        let m = closed.len();
        let w = exec
            .first_violation(&[nt, m], |pt| {
                let (t, p) = (pt[0], closed[pt[1]]);
                let et_perp = self.perp_t(1 << self.app(d.e, t));
                let lhs = self.perp_t(self.app_sets_bits(1 << t, self.perp_s(p)));
                let mid = self.base.conductor_bits(self.perp_s(p), et_perp);
                lhs & !mid == 0
                    && mid & !self.close(mid) == 0
                    && self.close(mid) == self.circ_bits(et_perp, p)
            })
            .map(|pt| {
                Witness::new()
                    .with("t", self.tname(pt[0]))
                    .with("P", self.show_stacks_bits(closed[pt[1]]))
            });
        r.push(CheckResult::from_witness(
            "s-eta-term-circ",
            (nt * m) as u64,
            w,
        ));
        r.push(self.family_check("s-eta-diamond-circ", exec, &closed, 2, |s| {
            let (p, q) = (s[0], s[1]);
            let ep = self.perp_t(e_of(self.perp_s(p)));
            self.diamond_bits(p, q) & !self.circ_bits(ep, q) == 0
        }));
        r.push(self.family_check("s-eta-adjunctor", exec, &closed, 1, |s| {
            let p = s[0];
            self.perp_t(e_of(self.perp_s(p))) & !self.circ_bits(ee_perp, p) == 0
        }));

        let derived_in_qp = [d.i, d.b, d.e, d.ee].iter().all(|&t| self.qp.contains(t));
        r.push(CheckResult::from_witness(
            "derived-combinators-in-qp",
            4,
            (!derived_in_qp).then(|| {
                Witness::new()
                    .with("I", self.tname(d.i))
                    .with("B", self.tname(d.b))
                    .with("E", self.tname(d.e))
                    .with("EE", self.tname(d.ee))
            }),
        ));
        r.push(self.family_check("imp-orthogonality-ignores-closure", exec, &general, 2, |s| {
            self.perp_s(self.imp_raw(s[0], s[1])) == self.perp_s(self.imp_bits(s[0], s[1]))
        }));
        if scope == LemmaScope::AllSubsets && ns > ALL_SUBSETS_MAX {
            r.push(CheckResult::skipped(
                "all-subsets-scope",
                format!("|Π| = {ns} above {ALL_SUBSETS_MAX}; general clauses used closed sets"),
            ));
        }
        Ok(r)
    }

    /// Lattice, axiom and lemma suites combined.
    pub fn suite(&self, limits: &Limits, exec: Exec, scope: LemmaScope) -> Result<Report> {
        let mut r = Report::new("aks");
        r.absorb(lattice_suite(self.lattice(), limits, exec)?);
        r.absorb(self.check_axioms(exec));
        r.absorb(self.verify_lemmas(limits, exec, scope)?);
        Ok(r)
    }
}

impl Applicative for AbstractKrivineStructure {
    fn size(&self) -> usize {
        self.n_terms()
    }

    fn apply(&self, a: usize, b: usize) -> usize {
        self.app(a, b)
    }

    fn atom(&self, atom: Atom) -> Result<usize> {
        match atom {
            Atom::Elem(t) if t < self.n_terms() => Ok(t),
            Atom::Elem(t) => Err(Error::Eval(format!("term #{t} does not exist"))),
            Atom::K => Ok(self.k),
            Atom::S => Ok(self.s),
            Atom::C => Ok(self.cc),
            Atom::E => Ok(self.derived_combinators().e),
        }
    }

    fn name(&self, a: usize) -> String {
        self.tname(a)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn single_point_passes() {
        let a = AbstractKrivineStructure::single_point();
        assert!(a.check_axioms(Exec::Sequential).passed());
        let r = a
            .verify_lemmas(&Limits::default(), Exec::Sequential, LemmaScope::AllSubsets)
            .unwrap();
        assert!(r.passed(), "{r}");
        let d = a.derived_combinators();
        assert_eq!((d.i, d.b, d.e, d.ee), (0, 0, 0, 0));
        let all = a.lattice().all_stacks();
        assert_eq!(a.op_circ(&all, &all).unwrap(), all);
        assert_eq!(a.op_imp(&all, &all).unwrap(), all);
        assert_eq!(a.op_diamond(&all, &all).unwrap(), all);
    }

    #[test]
    fn empty_pole_breaks_qp_free_axioms_only_where_expected() {
        // With an empty pole every implication in the axioms is vacuous
        // except through hypotheses that never hold.
        let a = AbstractKrivineStructure::single_point();
        let lat = RealizabilityLattice::from_pairs(vec!["*".into()], vec!["*".into()], &[])
            .unwrap();
        let b = a.with_lattice(lat).unwrap();
        let r = b.check_axioms(Exec::Sequential);
        assert!(r.passed(), "{r}");
    }

    #[test]
    fn qp_must_hold_combinators() {
        let a = AbstractKrivineStructure::single_point();
        let b = a.with_qp(TermSet::from_bits(0, 1).unwrap()).unwrap();
        let r = b.check_axioms(Exec::Sequential);
        let c = r.get("qp-contains-combinators").unwrap();
        assert!(!c.passed());
        assert_eq!(c.witness.as_ref().unwrap().get("K"), Some("*"));
    }

    #[test]
    fn shape_validation() {
        let a = AbstractKrivineStructure::single_point();
        assert!(a.with_push(0, 0, 3).is_err());
        assert!(AbstractKrivineStructure::new(
            a.base().clone(),
            vec![0, 0],
            vec![0],
            a.qp(),
            0,
            0,
            0
        )
        .is_err());
    }
}
