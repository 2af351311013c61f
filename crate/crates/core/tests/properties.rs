use proptest::prelude::*;

use koca::ioca::boolean;
use koca::term::{eval, lambda_star};
use koca::tripos::{reindex, FiniteFunction, Predicate};
use koca::{Exec, Limits, RealizabilityLattice, Term};

fn term(carrier: usize) -> impl Strategy<Value = Term> {
    let leaf = prop_oneof![
        Just(Term::var("y")),
        Just(Term::k()),
        Just(Term::s()),
        (0..carrier).prop_map(Term::elem),
    ];
    leaf.prop_recursive(5, 24, 2, |inner| (inner.clone(), inner).prop_map(|(f, x)| Term::app(f, x)))
}

fn closed_term(carrier: usize) -> impl Strategy<Value = Term> {
    let leaf = prop_oneof![Just(Term::k()), Just(Term::s()), (0..carrier).prop_map(Term::elem)];
    leaf.prop_recursive(4, 12, 2, |inner| (inner.clone(), inner).prop_map(|(f, x)| Term::app(f, x)))
}

fn function(source: usize, target: usize) -> impl Strategy<Value = FiniteFunction> {
    proptest::collection::vec(0..target, source).prop_map(move |g| FiniteFunction::new(source, target, g).unwrap())
}

proptest! {
    #[test]
    fn abstraction_removes_the_variable(t in term(4)) {
        let l = lambda_star("y", &t);
        prop_assert!(!l.contains_var("y"));
        let extra: Vec<_> = l.atoms().difference(&t.atoms()).copied().collect();
        prop_assert!(extra.iter().all(|a| matches!(a, koca::Atom::K | koca::Atom::S)), "{extra:?}");
    }

    #[test]
    fn beta_is_bounded_by_substitution(t in term(4), u in closed_term(4)) {
        let a = boolean(2).unwrap();
        let lhs = eval(&a, &Term::app(lambda_star("y", &t), u.clone())).unwrap();
        let rhs = eval(&a, &t.substitute("y", &u)).unwrap();
        prop_assert!(a.le(lhs, rhs));
    }

    #[test]
    fn closed_sets_agree_with_brute_force(
        nt in 0usize..7,
        ns in 0usize..9,
        seed in proptest::collection::vec(any::<u16>(), 7),
    ) {
        let mask = (1u128 << ns) - 1;
        let rows: Vec<u128> = seed[..nt].iter().map(|&r| r as u128 & mask).collect();
        let lat = RealizabilityLattice::anonymous(nt, ns, &rows).unwrap();
        let limits = Limits::default();
        prop_assert_eq!(
            lat.enumerate_closed_stack_sets(&limits).unwrap(),
            lat.enumerate_closed_brute_force(&limits).unwrap()
        );
    }

    #[test]
    fn reindexing_is_contravariant(
        f in function(3, 2),
        g in function(4, 3),
        values in proptest::collection::vec(0usize..4, 2),
    ) {
        let phi = Predicate::new(values);
        let once = reindex(&f.after(&g).unwrap(), &phi).unwrap();
        let twice = reindex(&g, &reindex(&f, &phi).unwrap()).unwrap();
        prop_assert_eq!(once, twice);
    }

    #[test]
    fn both_modes_find_the_same_witness(
        dims in proptest::collection::vec(1usize..6, 1..4),
        bad in proptest::collection::vec(any::<bool>(), 125),
    ) {
        let holds = |p: &[usize]| !bad[p.iter().fold(0, |acc, &x| acc * 5 + x) % bad.len()];
        prop_assert_eq!(
            Exec::Sequential.first_violation(&dims, holds),
            Exec::Parallel.first_violation(&dims, holds)
        );
    }
}
