//! Translations between Abstract Krivine Structures and KOCAs, the Galois
//! lemma on the structure built from a KOCA, and the two tripos
//! comparisons.

use crate::aks::AbstractKrivineStructure;
use crate::error::{Error, Result};
use crate::exec::{decode, grid_size, Exec};
use crate::ioca::{Ioca, Koca};
use crate::lattice::{PushLattice, RealizabilityLattice};
use crate::limits::{Coverage, Limits};
use crate::oca::FilteredOca;
use crate::order::Poset;
use crate::report::{CheckResult, Report, Witness};
use crate::set::{bit_indices, mask, ElemSet, TermSet};
use crate::term::{eval, Term};

/// The KOCA of closed stack sets: ordered by reverse inclusion, with
/// `∘⊥` as application and `⇒⊥` as implication.
pub fn aks_to_koca(aks: &AbstractKrivineStructure, limits: &Limits) -> Result<Koca> {
    let lat = aks.lattice();
    let closed: Vec<u128> = lat
        .enumerate_closed_stack_sets(limits)?
        .iter()
        .map(|p| p.bits())
        .collect();
    let m = closed.len();
    let index = |p: u128| -> Result<usize> {
        closed
            .binary_search(&p)
            .map_err(|_| Error::Contract(format!("{p:#x} is not a closed stack set")))
    };
    let names: Vec<String> = closed
        .iter()
        .map(|&p| lat.show_stacks(&lat.stack_set(p)))
        .collect();
    let order = Poset::from_fn(m, |a, b| closed[b] & !closed[a] == 0)?;
    let mut app = Vec::with_capacity(m * m);
    let mut imp = Vec::with_capacity(m * m);
    for &p in &closed {
        for &q in &closed {
            app.push(index(aks.circ_bits(p, q))?);
            imp.push(index(aks.imp_bits(p, q))?);
        }
    }
    let d = aks.derived_combinators();
    let single = |t: usize| index(aks.perp_t(1 << t));
    let (k, s, c, e) = (
        single(aks.k())?,
        single(aks.s())?,
        single(aks.cc())?,
        single(d.ee)?,
    );
    let qp = aks.qp().bits();
    let phi = ElemSet::from_indices(
        m,
        (0..m).filter(|&i| aks.perp_s(closed[i]) & qp != 0),
    )?;
    let oca = FilteredOca::new(names, order, app, k, s, phi)?;
    Koca::new(Ioca::new(oca, imp, e)?, c)
}

/// The structure with Λ = Π = A, the order as pole, implication as push,
/// `π ↦ π → ⊥` as store and Φ as quasi-proofs.
pub fn koca_to_aks(a: &Koca) -> Result<AbstractKrivineStructure> {
    let n = a.len();
    let bot = a
        .bottom()
        .ok_or_else(|| Error::Contract("the carrier has no least element".into()))?;
    let names = a.names().to_vec();
    let rows: Vec<u128> = (0..n).map(|t| a.order().up_set(t)).collect();
    let lat = RealizabilityLattice::from_rows(names.clone(), names, rows);
    let push = (0..n * n).map(|i| a.imp(i / n, i % n)).collect();
    let base = PushLattice::new(lat, push)?;
    let app = a.app_table().to_vec();
    let store = (0..n).map(|p| a.imp(p, bot)).collect();
    let (k, s, cc) = krivine_combinators(a)?;
    let qp = TermSet::from_bits(a.phi().bits(), n)?;
    AbstractKrivineStructure::new(base, app, store, qp, k, s, cc)
}

/// `K = e(B e k)`, `S = e(B (B e (B e)) s)`, `cc = e c` with
/// `B = s(ks)k`, evaluated in the algebra.
pub fn krivine_combinators(a: &Koca) -> Result<(usize, usize, usize)> {
    let b = || Term::apps(Term::s(), [Term::app(Term::k(), Term::s()), Term::k()]);
    let e = Term::e;
    let k_term = Term::app(e(), Term::apps(b(), [e(), Term::k()]));
    let be = Term::app(b(), e());
    let s_term = Term::app(
        e(),
        Term::apps(b(), [Term::apps(b(), [e(), be]), Term::s()]),
    );
    let cc_term = Term::app(e(), Term::c());
    Ok((eval(a, &k_term)?, eval(a, &s_term)?, eval(a, &cc_term)?))
}

/// The four items of the Galois lemma on `koca_to_aks(a)`.
pub fn galois_check(a: &Koca, limits: &Limits, exec: Exec) -> Result<Report> {
    let aks = koca_to_aks(a)?;
    let n = a.len();
    let ord = a.order();
    let mut r = Report::new("galois");
    let up = |x: usize| ord.up_set(x);
    let down = |x: usize| ord.down(x);
    let name = |x: usize| a.name(x).to_string();
    let show = |bits: u128| aks.lattice().show_stacks(&aks.lattice().stack_set(bits));

    if n <= limits.max_enum {
        let w = exec
            .first_violation(&[1usize << n], |pt| {
                let u = pt[0] as u128;
                let (Ok(inf), Ok(sup)) = (ord.inf(bit_indices(u)), ord.sup(bit_indices(u))) else {
                    return false;
                };
                aks.perp_s(u) == down(inf) && aks.perp_t(u) == up(sup)
            })
            .map(|pt| Witness::new().with("U", show(pt[0] as u128)));
        r.push(CheckResult::from_witness("item1-perps-are-principal", 1 << n, w));
    } else {
        return Err(Error::resource("subsets of the carrier", n as u128, limits.max_enum as u128));
    }

    let w = exec
        .first_violation(&[n], |pt| {
            let x = pt[0];
            ord.inf(bit_indices(up(x))).ok() == Some(x) && ord.sup(bit_indices(down(x))).ok() == Some(x)
        })
        .map(|pt| Witness::new().with("a", name(pt[0])));
    r.push(CheckResult::from_witness("item2-inf-up-sup-down", n as u64, w));

    let closed: Vec<u128> = aks
        .lattice()
        .enumerate_closed_stack_sets(limits)?
        .iter()
        .map(|p| p.bits())
        .collect();
    let mut principal: Vec<u128> = (0..n).map(up).collect();
    principal.sort_unstable();
    let bijection = closed == principal
        && (0..n).all(|x| ord.inf(bit_indices(up(x))).ok() == Some(x))
        && closed
            .iter()
            .all(|&p| ord.inf(bit_indices(p)).map(up).ok() == Some(p));
    r.push(CheckResult::from_witness(
        "item3-closed-sets-are-principal-filters",
        closed.len() as u64,
        (!bijection).then(|| {
            Witness::new()
                .with("closed", closed.len().to_string())
                .with("carrier", n.to_string())
        }),
    ));

    let w = exec
        .first_violation(&[n, n], |pt| {
            let (x, y) = (pt[0], pt[1]);
            let (p, q) = (up(x), up(y));
            let closed_inf = ord.inf(bit_indices(aks.imp_bits(p, q))).ok();
            let raw_inf = ord.inf(bit_indices(aks.imp_raw(p, q))).ok();
            closed_inf == Some(a.imp(x, y)) && raw_inf == Some(a.imp(x, y))
        })
        .map(|pt| Witness::new().with("a", name(pt[0])).with("b", name(pt[1])));
    r.push(CheckResult::from_witness("item4-inf-of-implication", (n * n) as u64, w));
    Ok(r)
}

/// Predicates over an index set of size `k`, as carrier indices,
/// enumerated in mixed-radix order.
fn predicate(index: usize, n: usize, k: usize) -> Vec<usize> {
    decode(index, &vec![n; k])
}

fn predicate_count(n: usize, k: usize) -> Option<usize> {
    grid_size(&vec![n; k]).or(if n == 0 { Some(0) } else { None })
}

fn show_pred(values: &[usize], name: &dyn Fn(usize) -> String) -> String {
    let parts: Vec<String> = values.iter().map(|&v| name(v)).collect();
    format!("[{}]", parts.join(", "))
}

fn coverage_note(cov: &Coverage, count: usize, cap: usize) -> Option<String> {
    (!cov.is_exhaustive(count, cap)).then(|| match *cov {
        Coverage::Auto { fallback_samples, seed } | Coverage::Sampled { samples: fallback_samples, seed } => {
            format!("sampled {fallback_samples} pairs, seed {seed}")
        }
    })
}

/// Compares entailment in the tripos of `aks_to_koca(aks)` (a uniform
/// element of Φ below every `φ(i) → ψ(i)`) with entailment in the
/// realizability tripos of `aks` (a uniform quasi-proof orthogonal to
/// every `φ(i) ⇒ ψ(i)`).
pub fn streicher_iso_check(
    aks: &AbstractKrivineStructure,
    index_size: usize,
    coverage: &Coverage,
    limits: &Limits,
    exec: Exec,
) -> Result<Report> {
    let a = aks_to_koca(aks, limits)?;
    let closed: Vec<u128> = aks
        .lattice()
        .enumerate_closed_stack_sets(limits)?
        .iter()
        .map(|p| p.bits())
        .collect();
    let n = a.len();
    let count = predicate_count(n, index_size)
        .ok_or_else(|| Error::resource("predicates", u128::MAX, limits.predicate_cap as u128))?;
    let phi_bits = a.phi().bits();
    let qp = aks.qp().bits();
    // below[x][y]: elements P with P ≤ x → y; orth[x][y]: quasi-proofs
    // orthogonal to x ⇒ y.
    let below: Vec<u128> = (0..n * n)
        .map(|i| {
            let target = a.imp(i / n, i % n);
            (0..n)
                .filter(|&p| a.le(p, target))
                .fold(0u128, |acc, p| acc | 1 << p)
                & phi_bits
        })
        .collect();
    let orth: Vec<u128> = (0..n * n)
        .map(|i| aks.perp_s(aks.imp_raw(closed[i / n], closed[i % n])) & qp)
        .collect();
    let apply_real: Vec<u128> = (0..n * n)
        .map(|i| {
            let (x, y) = (i / n, i % n);
            (0..n)
                .filter(|&r| a.le(a.app(r, x), y))
                .fold(0u128, |acc, r| acc | 1 << r)
                & phi_bits
        })
        .collect();
    let pairs = coverage.pairs(count, limits.predicate_cap);
    let name = |x: usize| a.name(x).to_string();

    let mut r = Report::new(format!("streicher-I{index_size}"));
    let w = exec
        .first_in_grid(&[pairs.len()], |pt| {
            let (pi, qi) = pairs[pt[0]];
            let phi = predicate(pi, n, index_size);
            let psi = predicate(qi, n, index_size);
            let lhs = phi.iter().zip(&psi).fold(mask(n), |acc, (&x, &y)| acc & below[x * n + y]);
            let rhs = phi
                .iter()
                .zip(&psi)
                .fold(mask(aks.n_terms()), |acc, (&x, &y)| acc & orth[x * n + y]);
            let app_form = phi
                .iter()
                .zip(&psi)
                .fold(mask(n), |acc, (&x, &y)| acc & apply_real[x * n + y]);
            let agree = (lhs != 0) == (rhs != 0) && (lhs != 0) == (app_form != 0);
            (!agree).then(|| {
                Witness::new()
                    .with("phi", show_pred(&phi, &name))
                    .with("psi", show_pred(&psi, &name))
                    .with("koca", (lhs != 0).to_string())
                    .with("aks", (rhs != 0).to_string())
            })
        });
    let mut check = CheckResult::from_witness("entailment-agrees", pairs.len() as u64, w);
    if let Some(note) = coverage_note(coverage, count, limits.predicate_cap) {
        check = check.with_note(note);
    }
    r.push(check);
    Ok(r)
}

/// Post-composition with `a ↦ ↑a` preserves and reflects entailment
/// between `T(A)` and the realizability tripos of `koca_to_aks(a)`.
pub fn roundtrip_tripos_equivalence(
    a: &Koca,
    index_size: usize,
    coverage: &Coverage,
    limits: &Limits,
    exec: Exec,
) -> Result<Report> {
    let aks = koca_to_aks(a)?;
    let n = a.len();
    let ord = a.order();
    let count = predicate_count(n, index_size)
        .ok_or_else(|| Error::resource("predicates", u128::MAX, limits.predicate_cap as u128))?;
    let phi_bits = a.phi().bits();
    let realizes: Vec<u128> = (0..n * n)
        .map(|i| {
            let (x, y) = (i / n, i % n);
            (0..n)
                .filter(|&r| a.le(a.app(r, x), y))
                .fold(0u128, |acc, r| acc | 1 << r)
                & phi_bits
        })
        .collect();
    let orth: Vec<u128> = (0..n * n)
        .map(|i| aks.perp_s(aks.imp_raw(ord.up_set(i / n), ord.up_set(i % n))))
        .collect();
    let name = |x: usize| a.name(x).to_string();
    let mut r = Report::new(format!("roundtrip-I{index_size}"));

    let w = exec
        .first_violation(&[n, n, n], |pt| {
            let (t, x, y) = (pt[0], pt[1], pt[2]);
            (orth[x * n + y] >> t & 1 == 1) == a.le(t, a.imp(x, y))
        })
        .map(|pt| {
            Witness::new()
                .with("t", name(pt[0]))
                .with("a", name(pt[1]))
                .with("b", name(pt[2]))
        });
    r.push(CheckResult::from_witness(
        "orthogonality-matches-implication",
        (n as u64).pow(3),
        w,
    ));

    let pairs = coverage.pairs(count, limits.predicate_cap);
    let qp = aks.qp().bits();
    let w = exec.first_in_grid(&[pairs.len()], |pt| {
        let (pi, qi) = pairs[pt[0]];
        let phi = predicate(pi, n, index_size);
        let psi = predicate(qi, n, index_size);
        let lhs = phi
            .iter()
            .zip(&psi)
            .fold(mask(n), |acc, (&x, &y)| acc & realizes[x * n + y]);
        let rhs = phi
            .iter()
            .zip(&psi)
            .fold(mask(n), |acc, (&x, &y)| acc & orth[x * n + y])
            & qp;
        ((lhs != 0) != (rhs != 0)).then(|| {
            Witness::new()
                .with("phi", show_pred(&phi, &name))
                .with("psi", show_pred(&psi, &name))
        })
    });
    let mut check = CheckResult::from_witness("entailment-preserved-and-reflected", pairs.len() as u64, w);
    if let Some(note) = coverage_note(coverage, count, limits.predicate_cap) {
        check = check.with_note(note);
    }
    r.push(check);
    Ok(r)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ioca::boolean;

    #[test]
    fn single_point_round_trip() {
        let aks = AbstractKrivineStructure::single_point();
        let k = aks_to_koca(&aks, &Limits::default()).unwrap();
        assert_eq!(k.len(), 1);
        assert!(k.check(Exec::Sequential).passed());
        let back = koca_to_aks(&k).unwrap();
        assert_eq!(back.n_terms(), 1);
        assert!(back.check_axioms(Exec::Sequential).passed());
    }

    #[test]
    fn boolean_translation_passes_axioms() {
        let k = boolean(1).unwrap();
        let aks = koca_to_aks(&k).unwrap();
        let r = aks.check_axioms(Exec::Sequential);
        assert!(r.passed(), "{r}");
        // (S5) instance from the store map: t ≤ π ⇒ ¬π ≤ t → π'.
        let bot = k.bottom().unwrap();
        for t in 0..2 {
            for p in 0..2 {
                for p2 in 0..2 {
                    if k.le(t, p) {
                        assert!(k.le(k.imp(p, bot), k.imp(t, p2)));
                    }
                }
            }
        }
    }

    #[test]
    fn k_is_in_phi_after_translation() {
        let aks = koca_to_aks(&boolean(2).unwrap()).unwrap();
        let k = aks_to_koca(&aks, &Limits::default()).unwrap();
        assert!(k.phi().contains(k.k()));
        assert_eq!(k.len(), 4);
    }

    #[test]
    fn empty_index_set_is_vacuous() {
        let aks = AbstractKrivineStructure::single_point();
        let r = streicher_iso_check(&aks, 0, &Coverage::default(), &Limits::default(), Exec::Sequential)
            .unwrap();
        assert!(r.passed());
        let r = roundtrip_tripos_equivalence(
            &boolean(1).unwrap(),
            0,
            &Coverage::default(),
            &Limits::default(),
            Exec::Sequential,
        )
        .unwrap();
        assert!(r.passed());
    }
}
