//! Finite realizability lattices: a set of terms Λ, a set of stacks Π and a
//! pole relation between them, together with the orthogonality maps and the
//! biorthogonal closure they induce.

use std::collections::BTreeSet;

use crate::error::{Error, Result};
use crate::exec::Exec;
use crate::limits::Limits;
use crate::report::{CheckResult, Report, Witness};
use crate::set::{bit_indices, check_width, mask, StackSet, TermSet};

/// Subset pairs are scanned only on carriers up to this width.
const PAIR_SCAN_MAX: usize = 8;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RealizabilityLattice {
    terms: Vec<String>,
    stacks: Vec<String>,
    /// `rows[t]`: stacks orthogonal to term `t`.
    rows: Vec<u128>,
    /// `cols[p]`: terms orthogonal to stack `p`.
    cols: Vec<u128>,
}

fn check_unique(names: &[String], what: &str) -> Result<()> {
    let mut seen = BTreeSet::new();
    for n in names {
        if !seen.insert(n.as_str()) {
            return Err(Error::structural(format!("duplicate {what} identifier `{n}`")));
        }
    }
    Ok(())
}

impl RealizabilityLattice {
    /// `pole[t][p]` is true iff term `t` is orthogonal to stack `p`.
    pub fn new(terms: Vec<String>, stacks: Vec<String>, pole: &[Vec<bool>]) -> Result<Self> {
        check_width(terms.len(), "term")?;
        check_width(stacks.len(), "stack")?;
        check_unique(&terms, "term")?;
        check_unique(&stacks, "stack")?;
        if pole.len() != terms.len() || pole.iter().any(|r| r.len() != stacks.len()) {
            return Err(Error::structural(format!(
                "pole table must be {}x{}",
                terms.len(),
                stacks.len()
            )));
        }
        let rows: Vec<u128> = pole
            .iter()
            .map(|r| {
                r.iter()
                    .enumerate()
                    .fold(0u128, |acc, (p, &b)| if b { acc | 1 << p } else { acc })
            })
            .collect();
        Ok(Self::from_rows(terms, stacks, rows))
    }

    /// Builds the lattice from `(term, stack)` index pairs in the pole.
    pub fn from_pairs(
        terms: Vec<String>,
        stacks: Vec<String>,
        pole: &[(usize, usize)],
    ) -> Result<Self> {
        let mut table = vec![vec![false; stacks.len()]; terms.len()];
        for &(t, p) in pole {
            if t >= terms.len() || p >= stacks.len() {
                return Err(Error::structural(format!("pole pair ({t},{p}) out of range")));
            }
            table[t][p] = true;
        }
        Self::new(terms, stacks, &table)
    }

    pub(crate) fn from_rows(terms: Vec<String>, stacks: Vec<String>, rows: Vec<u128>) -> Self {
        let mut cols = vec![0u128; stacks.len()];
        for (t, &row) in rows.iter().enumerate() {
            for p in bit_indices(row) {
                cols[p] |= 1 << t;
            }
        }
        RealizabilityLattice {
            terms,
            stacks,
            rows,
            cols,
        }
    }

    /// Generated names `t0..` and `p0..`, convenient for tests and sweeps.
    pub fn anonymous(n_terms: usize, n_stacks: usize, rows: &[u128]) -> Result<Self> {
        check_width(n_terms, "term")?;
        check_width(n_stacks, "stack")?;
        if rows.len() != n_terms || rows.iter().any(|r| r & !mask(n_stacks) != 0) {
            return Err(Error::structural("pole rows do not match dimensions"));
        }
        Ok(Self::from_rows(
            (0..n_terms).map(|i| format!("t{i}")).collect(),
            (0..n_stacks).map(|i| format!("p{i}")).collect(),
            rows.to_vec(),
        ))
    }

    pub fn terms(&self) -> &[String] {
        &self.terms
    }

    pub fn stacks(&self) -> &[String] {
        &self.stacks
    }

    pub fn n_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn n_stacks(&self) -> usize {
        self.stacks.len()
    }

    pub fn orthogonal(&self, t: usize, p: usize) -> bool {
        self.rows[t] >> p & 1 == 1
    }

    pub fn term_index(&self, name: &str) -> Option<usize> {
        self.terms.iter().position(|n| n == name)
    }

    pub fn stack_index(&self, name: &str) -> Option<usize> {
        self.stacks.iter().position(|n| n == name)
    }

    pub fn all_terms(&self) -> TermSet {
        TermSet::from_bits_unchecked(mask(self.n_terms()), self.n_terms())
    }

    pub fn all_stacks(&self) -> StackSet {
        StackSet::from_bits_unchecked(mask(self.n_stacks()), self.n_stacks())
    }

    pub fn term_set(&self, bits: u128) -> TermSet {
        TermSet::from_bits_unchecked(bits, self.n_terms())
    }

    pub fn stack_set(&self, bits: u128) -> StackSet {
        StackSet::from_bits_unchecked(bits, self.n_stacks())
    }

    pub(crate) fn terms_perp_bits(&self, terms: u128) -> u128 {
        bit_indices(terms).fold(mask(self.n_stacks()), |acc, t| acc & self.rows[t])
    }

    pub(crate) fn stacks_perp_bits(&self, stacks: u128) -> u128 {
        bit_indices(stacks).fold(mask(self.n_terms()), |acc, p| acc & self.cols[p])
    }

    /// `{t}^⊥`.
    pub fn term_perp(&self, t: usize) -> StackSet {
        self.stack_set(self.rows[t])
    }

    /// `^⊥{π}`.
    pub fn stack_perp(&self, p: usize) -> TermSet {
        self.term_set(self.cols[p])
    }

    fn check_terms(&self, l: &TermSet) -> Result<()> {
        if l.width() != self.n_terms() {
            return Err(Error::structural(format!(
                "term set of width {} used with |Λ| = {}",
                l.width(),
                self.n_terms()
            )));
        }
        Ok(())
    }

    fn check_stacks(&self, p: &StackSet) -> Result<()> {
        if p.width() != self.n_stacks() {
            return Err(Error::structural(format!(
                "stack set of width {} used with |Π| = {}",
                p.width(),
                self.n_stacks()
            )));
        }
        Ok(())
    }

    /// `L^⊥`: the stacks orthogonal to every term of `l`.
    pub fn perp_of_terms(&self, l: &TermSet) -> Result<StackSet> {
        self.check_terms(l)?;
        Ok(self.stack_set(self.terms_perp_bits(l.bits())))
    }

    /// `^⊥P`: the terms orthogonal to every stack of `p`.
    pub fn perp_of_stacks(&self, p: &StackSet) -> Result<TermSet> {
        self.check_stacks(p)?;
        Ok(self.term_set(self.stacks_perp_bits(p.bits())))
    }

    /// `(^⊥P)^⊥`.
    pub fn closure_stacks(&self, p: &StackSet) -> Result<StackSet> {
        self.check_stacks(p)?;
        Ok(self.stack_set(self.close_stack_bits(p.bits())))
    }

    /// `^⊥(L^⊥)`.
    pub fn closure_terms(&self, l: &TermSet) -> Result<TermSet> {
        self.check_terms(l)?;
        Ok(self.term_set(self.stacks_perp_bits(self.terms_perp_bits(l.bits()))))
    }

    pub(crate) fn close_stack_bits(&self, p: u128) -> u128 {
        self.terms_perp_bits(self.stacks_perp_bits(p))
    }

    pub fn is_closed(&self, p: &StackSet) -> bool {
        p.width() == self.n_stacks() && self.close_stack_bits(p.bits()) == p.bits()
    }

    /// Every biorthogonally closed stack set, as the intersections of the
    /// generators `{t}^⊥` (the empty intersection being Π). Sorted by bit
    /// pattern, without duplicates.
    pub fn enumerate_closed_stack_sets(&self, limits: &Limits) -> Result<Vec<StackSet>> {
        if self.n_stacks() > limits.max_enum {
            return Err(Error::resource(
                "closed stack set enumeration (|Π|)",
                self.n_stacks() as u128,
                limits.max_enum as u128,
            ));
        }
        let mut found = BTreeSet::new();
        found.insert(mask(self.n_stacks()));
        for &generator in &self.rows {
            let current: Vec<u128> = found.iter().copied().collect();
            for x in current {
                found.insert(x & generator);
            }
        }
        Ok(found.into_iter().map(|b| self.stack_set(b)).collect())
    }

    /// Closed stack sets found by testing every subset of Π.
    pub fn enumerate_closed_brute_force(&self, limits: &Limits) -> Result<Vec<StackSet>> {
        if self.n_stacks() > limits.max_brute_force {
            return Err(Error::resource(
                "brute-force subset scan (|Π|)",
                self.n_stacks() as u128,
                limits.max_brute_force as u128,
            ));
        }
        Ok((0..1u128 << self.n_stacks())
            .filter(|&b| self.close_stack_bits(b) == b)
            .map(|b| self.stack_set(b))
            .collect())
    }

    /// Infimum and supremum of a family of closed stack sets under
    /// inclusion: `(∩X, (^⊥(∪X))^⊥)`.
    pub fn sup_inf(&self, family: &[StackSet]) -> Result<(StackSet, StackSet)> {
        for p in family {
            self.check_stacks(p)?;
            if !self.is_closed(p) {
                return Err(Error::Contract(format!(
                    "sup_inf needs closed sets, {} is not closed",
                    p.display_with(&self.stacks)
                )));
            }
        }
        let inf = family
            .iter()
            .fold(mask(self.n_stacks()), |acc, p| acc & p.bits());
        let union = family.iter().fold(0u128, |acc, p| acc | p.bits());
        Ok((self.stack_set(inf), self.stack_set(self.close_stack_bits(union))))
    }

    pub fn show_terms(&self, l: &TermSet) -> String {
        l.display_with(&self.terms)
    }

    pub fn show_stacks(&self, p: &StackSet) -> String {
        p.display_with(&self.stacks)
    }
}

/// A realizability lattice equipped with a push map Λ×Π→Π.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PushLattice {
    lattice: RealizabilityLattice,
    push: Vec<usize>,
}

impl PushLattice {
    /// `push[t * |Π| + p]` is the stack `t·p`.
    pub fn new(lattice: RealizabilityLattice, push: Vec<usize>) -> Result<Self> {
        let (nt, ns) = (lattice.n_terms(), lattice.n_stacks());
        if push.len() != nt * ns {
            return Err(Error::structural(format!("push table must be {nt}x{ns}")));
        }
        if let Some(bad) = push.iter().find(|&&p| p >= ns) {
            return Err(Error::structural(format!("push value {bad} is not a stack")));
        }
        Ok(PushLattice { lattice, push })
    }

    pub fn lattice(&self) -> &RealizabilityLattice {
        &self.lattice
    }

    pub fn push(&self, t: usize, p: usize) -> usize {
        self.push[t * self.lattice.n_stacks() + p]
    }

    pub fn push_table(&self) -> &[usize] {
        &self.push
    }

    pub(crate) fn push_set_bits(&self, terms: u128, stacks: u128) -> u128 {
        let mut out = 0u128;
        for t in bit_indices(terms) {
            for p in bit_indices(stacks) {
                out |= 1 << self.push(t, p);
            }
        }
        out
    }

    pub(crate) fn conductor_bits(&self, terms: u128, target: u128) -> u128 {
        (0..self.lattice.n_stacks())
            .filter(|&p| bit_indices(terms).all(|t| target >> self.push(t, p) & 1 == 1))
            .fold(0u128, |acc, p| acc | 1 << p)
    }

    /// `L·P = {t·π : t∈L, π∈P}`.
    pub fn push_set(&self, l: &TermSet, p: &StackSet) -> Result<StackSet> {
        self.lattice.check_terms(l)?;
        self.lattice.check_stacks(p)?;
        Ok(self.lattice.stack_set(self.push_set_bits(l.bits(), p.bits())))
    }

    /// `L⇝P = {π : L·π ⊆ P}`.
    pub fn right_conductor(&self, l: &TermSet, p: &StackSet) -> Result<StackSet> {
        self.lattice.check_terms(l)?;
        self.lattice.check_stacks(p)?;
        Ok(self.lattice.stack_set(self.conductor_bits(l.bits(), p.bits())))
    }
}

fn subset_pairs_witness<F>(exec: Exec, width: usize, f: F) -> Option<(u128, u128)>
where
    F: Fn(u128, u128) -> bool + Sync + Send,
{
    let n = 1usize << width;
    exec.first_violation(&[n, n], |pt| f(pt[0] as u128, pt[1] as u128))
        .map(|pt| (pt[0] as u128, pt[1] as u128))
}

/// Closure-algebra properties of a lattice: enumeration agreement,
/// antitonicity, De Morgan, triple-perp, the closed-set bijection and
/// sup/inf as least upper and greatest lower bounds.
pub fn lattice_suite(lat: &RealizabilityLattice, limits: &Limits, exec: Exec) -> Result<Report> {
    let mut report = Report::new("lattice");
    let (nt, ns) = (lat.n_terms(), lat.n_stacks());
    let closed = lat.enumerate_closed_stack_sets(limits)?;

    if ns <= limits.max_brute_force {
        let brute = lat.enumerate_closed_brute_force(limits)?;
        let w = (brute != closed).then(|| {
            let diff = brute
                .iter()
                .find(|p| !closed.contains(p))
                .or_else(|| closed.iter().find(|p| !brute.contains(p)));
            Witness::new().with(
                "P",
                diff.map(|p| lat.show_stacks(p)).unwrap_or_default(),
            )
        });
        report.push(CheckResult::from_witness(
            "closed-sets-enumeration-matches-brute-force",
            1u64 << ns,
            w,
        ));
    } else {
        report.push(CheckResult::skipped(
            "closed-sets-enumeration-matches-brute-force",
            format!("|Π| = {ns} above brute-force bound"),
        ));
    }

    let show_t = |b: u128| lat.show_terms(&lat.term_set(b));
    let show_s = |b: u128| lat.show_stacks(&lat.stack_set(b));

    for (name, width, is_terms) in [("terms", nt, true), ("stacks", ns, false)] {
        if width > PAIR_SCAN_MAX {
            report.push(CheckResult::skipped(
                format!("antitone-{name}"),
                "carrier too wide for subset-pair scan",
            ));
            report.push(CheckResult::skipped(
                format!("de-morgan-{name}"),
                "carrier too wide for subset-pair scan",
            ));
            continue;
        }
        let perp = |b: u128| {
            if is_terms {
                lat.terms_perp_bits(b)
            } else {
                lat.stacks_perp_bits(b)
            }
        };
        let show = |b: u128| if is_terms { show_t(b) } else { show_s(b) };
        let cases = 1u64 << (2 * width);
        let anti = subset_pairs_witness(exec, width, |a, b| {
            a & !b != 0 || perp(b) & !perp(a) == 0
        });
        report.push(CheckResult::from_witness(
            format!("antitone-{name}"),
            cases,
            anti.map(|(a, b)| Witness::new().with("X", show(a)).with("X'", show(b))),
        ));
        let dm = subset_pairs_witness(exec, width, |a, b| perp(a | b) == perp(a) & perp(b));
        report.push(CheckResult::from_witness(
            format!("de-morgan-{name}"),
            cases,
            dm.map(|(a, b)| Witness::new().with("X1", show(a)).with("X2", show(b))),
        ));
    }

    if nt < 64 && ns < 64 && nt.max(ns) <= limits.max_brute_force.max(PAIR_SCAN_MAX) {
        let w = exec
            .first_violation(&[1 << nt], |pt| {
                let l = pt[0] as u128;
                let lp = lat.terms_perp_bits(l);
                lat.terms_perp_bits(lat.stacks_perp_bits(lp)) == lp
                    && l & !lat.stacks_perp_bits(lp) == 0
            })
            .map(|pt| Witness::new().with("L", show_t(pt[0] as u128)));
        report.push(CheckResult::from_witness("triple-perp-terms", 1 << nt, w));
        let w = exec
            .first_violation(&[1 << ns], |pt| {
                let p = pt[0] as u128;
                let pp = lat.stacks_perp_bits(p);
                let c = lat.close_stack_bits(p);
                lat.stacks_perp_bits(lat.terms_perp_bits(pp)) == pp
                    && p & !c == 0
                    && lat.close_stack_bits(c) == c
            })
            .map(|pt| Witness::new().with("P", show_s(pt[0] as u128)));
        report.push(CheckResult::from_witness("triple-perp-stacks", 1 << ns, w));
    } else {
        report.push(CheckResult::skipped("triple-perp-terms", "carrier too wide"));
        report.push(CheckResult::skipped("triple-perp-stacks", "carrier too wide"));
    }

    let m = closed.len();
    let w = exec
        .first_violation(&[m, m], |pt| {
            let (p, q) = (closed[pt[0]].bits(), closed[pt[1]].bits());
            let lp = lat.stacks_perp_bits(p);
            let lq = lat.stacks_perp_bits(q);
            let back = lat.terms_perp_bits(lp) == p;
            let term_closed = lat.stacks_perp_bits(lat.terms_perp_bits(lp)) == lp;
            let reversing = (p & !q == 0) == (lq & !lp == 0);
            back && term_closed && reversing
        })
        .map(|pt| {
            Witness::new()
                .with("P", lat.show_stacks(&closed[pt[0]]))
                .with("Q", lat.show_stacks(&closed[pt[1]]))
        });
    report.push(CheckResult::from_witness(
        "closed-sets-order-reversing-bijection",
        (m * m) as u64,
        w,
    ));

    let w = exec
        .first_violation(&[m, m], |pt| {
            let pair = [closed[pt[0]], closed[pt[1]]];
            let Ok((inf, sup)) = lat.sup_inf(&pair) else {
                return false;
            };
            let lower = pair.iter().all(|p| inf.is_subset(p));
            let upper = pair.iter().all(|p| p.is_subset(&sup));
            let glb = closed
                .iter()
                .filter(|c| pair.iter().all(|p| c.is_subset(p)))
                .all(|c| c.is_subset(&inf));
            let lub = closed
                .iter()
                .filter(|c| pair.iter().all(|p| p.is_subset(c)))
                .all(|c| sup.is_subset(c));
            lower && upper && glb && lub && lat.is_closed(&inf) && lat.is_closed(&sup)
        })
        .map(|pt| {
            Witness::new()
                .with("P", lat.show_stacks(&closed[pt[0]]))
                .with("Q", lat.show_stacks(&closed[pt[1]]))
        });
    report.push(CheckResult::from_witness(
        "sup-inf-are-bounds",
        (m * m) as u64,
        w,
    ));

    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Λ={t0,t1}, Π={π0,π1}, pole={(t0,π0),(t1,π0),(t1,π1)}.
    fn two_by_two() -> RealizabilityLattice {
        RealizabilityLattice::from_pairs(
            vec!["t0".into(), "t1".into()],
            vec!["π0".into(), "π1".into()],
            &[(0, 0), (1, 0), (1, 1)],
        )
        .unwrap()
    }

    fn ts(lat: &RealizabilityLattice, idx: &[usize]) -> TermSet {
        TermSet::from_indices(lat.n_terms(), idx.iter().copied()).unwrap()
    }

    fn ss(lat: &RealizabilityLattice, idx: &[usize]) -> StackSet {
        StackSet::from_indices(lat.n_stacks(), idx.iter().copied()).unwrap()
    }

    #[test]
    fn perp_of_terms_examples() {
        let lat = two_by_two();
        assert_eq!(lat.perp_of_terms(&ts(&lat, &[])).unwrap(), lat.all_stacks());
        assert_eq!(lat.perp_of_terms(&ts(&lat, &[0, 1])).unwrap(), ss(&lat, &[0]));
        let full = RealizabilityLattice::anonymous(2, 3, &[0b111, 0b111]).unwrap();
        assert_eq!(
            full.perp_of_terms(&full.all_terms()).unwrap(),
            full.all_stacks()
        );
    }

    #[test]
    fn perp_of_stacks_examples() {
        let lat = two_by_two();
        assert_eq!(lat.perp_of_stacks(&ss(&lat, &[])).unwrap(), lat.all_terms());
        assert_eq!(lat.perp_of_stacks(&ss(&lat, &[1])).unwrap(), ts(&lat, &[1]));
        let empty = RealizabilityLattice::anonymous(2, 2, &[0, 0]).unwrap();
        assert!(empty
            .perp_of_stacks(&empty.all_stacks())
            .unwrap()
            .is_empty());
    }

    #[test]
    fn dimension_mismatch_is_structural() {
        let lat = two_by_two();
        let wrong = TermSet::from_indices(3, [0]).unwrap();
        assert!(matches!(
            lat.perp_of_terms(&wrong),
            Err(Error::Structural(_))
        ));
        assert!(RealizabilityLattice::new(vec!["a".into()], vec![], &[vec![true]]).is_err());
        assert!(RealizabilityLattice::new(
            vec!["a".into(), "a".into()],
            vec![],
            &[vec![], vec![]]
        )
        .is_err());
    }

    #[test]
    fn closure_examples() {
        let lat = two_by_two();
        // closure(∅) = {π : Λ×{π} ⊆ pole} = {π0}... only π0 has both terms.
        // Brute force: ^⊥∅ = Λ, Λ^⊥ = {π0}.
        assert_eq!(lat.closure_stacks(&ss(&lat, &[])).unwrap(), ss(&lat, &[0]));
        for b in 0..4u128 {
            let p = lat.stack_set(b);
            let c = lat.closure_stacks(&p).unwrap();
            assert_eq!(lat.closure_stacks(&c).unwrap(), c);
            assert!(p.is_subset(&c));
        }
        let closed = ss(&lat, &[0, 1]);
        assert_eq!(lat.closure_stacks(&closed).unwrap(), closed);
    }

    #[test]
    fn closure_of_empty_with_empty_pole() {
        let lat = RealizabilityLattice::anonymous(2, 2, &[0, 0]).unwrap();
        assert!(lat.closure_stacks(&lat.stack_set(0)).unwrap().is_empty());
    }

    #[test]
    fn enumeration_examples() {
        let limits = Limits::default();
        // Empty pole: every {t}^⊥ is ∅, so the closed sets are ∅ and Π.
        let lat = RealizabilityLattice::anonymous(2, 3, &[0, 0]).unwrap();
        let got = lat.enumerate_closed_stack_sets(&limits).unwrap();
        assert_eq!(got, vec![lat.stack_set(0), lat.all_stacks()]);
        // No terms: only the empty intersection.
        let lat = RealizabilityLattice::anonymous(0, 3, &[]).unwrap();
        assert_eq!(
            lat.enumerate_closed_stack_sets(&limits).unwrap(),
            vec![lat.all_stacks()]
        );
        let lat = two_by_two();
        assert_eq!(
            lat.enumerate_closed_stack_sets(&limits).unwrap(),
            lat.enumerate_closed_brute_force(&limits).unwrap()
        );
        assert_eq!(
            lat.enumerate_closed_stack_sets(&limits).unwrap(),
            vec![ss(&lat, &[0]), ss(&lat, &[0, 1])]
        );
    }

    #[test]
    fn enumeration_bound() {
        let limits = Limits {
            max_enum: 2,
            ..Limits::default()
        };
        let lat = RealizabilityLattice::anonymous(1, 3, &[0b101]).unwrap();
        assert!(matches!(
            lat.enumerate_closed_stack_sets(&limits),
            Err(Error::Resource { .. })
        ));
    }

    #[test]
    fn sup_inf_examples() {
        let lat = two_by_two();
        let p = ss(&lat, &[0]);
        assert_eq!(lat.sup_inf(&[p]).unwrap(), (p, p));
        assert_eq!(
            lat.sup_inf(&[]).unwrap(),
            (lat.all_stacks(), lat.closure_stacks(&lat.stack_set(0)).unwrap())
        );
        let q = ss(&lat, &[0, 1]);
        assert_eq!(lat.sup_inf(&[p, q]).unwrap(), (p, q));
        assert!(matches!(
            lat.sup_inf(&[ss(&lat, &[1])]),
            Err(Error::Contract(_))
        ));
    }

    #[test]
    fn push_and_conductor() {
        // 3×3 instance with push(t,p) = (t + p) % 3.
        let lat = RealizabilityLattice::anonymous(3, 3, &[0b011, 0b110, 0b101]).unwrap();
        let push: Vec<usize> = (0..9).map(|i| (i / 3 + i % 3) % 3).collect();
        let pl = PushLattice::new(lat.clone(), push).unwrap();
        let empty_l = lat.term_set(0);
        assert!(pl.push_set(&empty_l, &lat.all_stacks()).unwrap().is_empty());
        assert_eq!(
            pl.right_conductor(&empty_l, &lat.stack_set(0)).unwrap(),
            lat.all_stacks()
        );
        assert_eq!(
            pl.right_conductor(&lat.all_terms(), &lat.all_stacks()).unwrap(),
            lat.all_stacks()
        );
        for l in 0..8u128 {
            for p in 0..8u128 {
                for q in 0..8u128 {
                    let lhs = pl.push_set_bits(l, p) & !q == 0;
                    let rhs = p & !pl.conductor_bits(l, q) == 0;
                    assert_eq!(lhs, rhs, "L={l:b} P={p:b} Q={q:b}");
                }
            }
        }
    }

    #[test]
    fn suite_passes_on_small_lattice() {
        let r = lattice_suite(&two_by_two(), &Limits::default(), Exec::Sequential).unwrap();
        assert!(r.passed(), "{r}");
    }
}
