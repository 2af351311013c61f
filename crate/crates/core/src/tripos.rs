//! The indexed Heyting preorder `I ↦ (A^I, ⊢)` over finite index sets and
//! executable checks of the tripos laws.

use crate::error::{Error, Result};
use crate::exec::{decode, grid_size, Exec};
use crate::ioca::{Ioca, Koca};
use crate::limits::{Coverage, Limits};
use crate::oca::{basic_combinators, combinator_a, combinator_d, BasicCombinators, FilteredOca};
use crate::report::{CheckResult, Report, Witness};

/// Largest |I|, |J|, |K| used for the Beck–Chevalley square scan.
pub const SQUARE_MAX: usize = 3;

/// Tuples of predicates scanned exhaustively up to this many; larger
/// spaces are sampled.
const TUPLE_CAP: usize = 1 << 20;

/// A predicate on the index set `0..values.len()`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Predicate {
    pub values: Vec<usize>,
}

impl Predicate {
    pub fn new(values: Vec<usize>) -> Self {
        Predicate { values }
    }

    pub fn constant(index_size: usize, a: usize) -> Self {
        Predicate::new(vec![a; index_size])
    }

    pub fn index_size(&self) -> usize {
        self.values.len()
    }

    pub fn show(&self, a: &FilteredOca) -> String {
        let parts: Vec<&str> = self.values.iter().map(|&v| a.name(v)).collect();
        format!("[{}]", parts.join(", "))
    }

    fn check(&self, a: &FilteredOca) -> Result<()> {
        match self.values.iter().find(|&&v| v >= a.len()) {
            Some(v) => Err(Error::structural(format!("predicate value {v} out of range"))),
            None => Ok(()),
        }
    }
}

/// The `index`-th predicate on `0..size` in mixed-radix order.
pub fn nth_predicate(carrier: usize, size: usize, index: usize) -> Predicate {
    Predicate::new(decode(index, &vec![carrier; size]))
}

/// `carrier^size`, or `None` on overflow.
pub fn predicate_count(carrier: usize, size: usize) -> Option<usize> {
    carrier.checked_pow(size as u32)
}

/// A total function `0..source → 0..target`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct FiniteFunction {
    source: usize,
    target: usize,
    graph: Vec<usize>,
}

impl FiniteFunction {
    pub fn new(source: usize, target: usize, graph: Vec<usize>) -> Result<Self> {
        if graph.len() != source {
            return Err(Error::structural(format!(
                "function graph has {} entries, source has {source}",
                graph.len()
            )));
        }
        if let Some(&y) = graph.iter().find(|&&y| y >= target) {
            return Err(Error::structural(format!("function value {y} outside target {target}")));
        }
        Ok(FiniteFunction { source, target, graph })
    }

    pub fn identity(n: usize) -> Self {
        FiniteFunction {
            source: n,
            target: n,
            graph: (0..n).collect(),
        }
    }

    pub fn source(&self) -> usize {
        self.source
    }

    pub fn target(&self) -> usize {
        self.target
    }

    pub fn at(&self, x: usize) -> usize {
        self.graph[x]
    }

    pub fn graph(&self) -> &[usize] {
        &self.graph
    }

    /// `self ∘ g`.
    pub fn after(&self, g: &FiniteFunction) -> Result<FiniteFunction> {
        if g.target != self.source {
            return Err(Error::structural("composition of mismatched functions"));
        }
        FiniteFunction::new(g.source, self.target, g.graph.iter().map(|&x| self.graph[x]).collect())
    }

    /// Every function `source → target`.
    pub fn all(source: usize, target: usize) -> impl Iterator<Item = FiniteFunction> {
        let dims = vec![target; source];
        let total = if source == 0 { 1 } else { grid_size(&dims).unwrap_or(0) };
        (0..total).map(move |i| FiniteFunction {
            source,
            target,
            graph: decode(i, &dims),
        })
    }
}

/// A commuting square `P → J → I ← K ← P` with projections `p`, `q`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PullbackSquare {
    pub p: FiniteFunction,
    pub q: FiniteFunction,
    pub f: FiniteFunction,
    pub g: FiniteFunction,
}

impl PullbackSquare {
    /// Validates shapes, commutation and the unique-existence property.
    pub fn new(
        p: FiniteFunction,
        q: FiniteFunction,
        f: FiniteFunction,
        g: FiniteFunction,
    ) -> Result<Self> {
        if p.source != q.source || p.target != f.source || q.target != g.source || f.target != g.target {
            return Err(Error::structural("square maps do not line up"));
        }
        for j in 0..f.source {
            for k in 0..g.source {
                let hits = (0..p.source).filter(|&x| p.at(x) == j && q.at(x) == k).count();
                let expected = usize::from(f.at(j) == g.at(k));
                if hits != expected {
                    return Err(Error::structural(format!(
                        "not a pullback at (j={j}, k={k}): {hits} points over a pair with f(j){}g(k)",
                        if expected == 1 { "=" } else { "≠" }
                    )));
                }
            }
        }
        Ok(PullbackSquare { p, q, f, g })
    }

    /// `P = {(j, k) : f(j) = g(k)}` with the two projections.
    pub fn canonical(f: FiniteFunction, g: FiniteFunction) -> Result<Self> {
        if f.target != g.target {
            return Err(Error::structural("f and g must share a codomain"));
        }
        let pts: Vec<(usize, usize)> = (0..f.source)
            .flat_map(|j| (0..g.source).map(move |k| (j, k)))
            .filter(|&(j, k)| f.at(j) == g.at(k))
            .collect();
        let p = FiniteFunction::new(pts.len(), f.source, pts.iter().map(|x| x.0).collect())?;
        let q = FiniteFunction::new(pts.len(), g.source, pts.iter().map(|x| x.1).collect())?;
        PullbackSquare::new(p, q, f, g)
    }
}

/// First `r` of the realizer pool with `r φ(i) ≤ ψ(i)` for every `i`.
pub fn entails_pred(a: &FilteredOca, phi: &Predicate, psi: &Predicate) -> Result<Option<usize>> {
    same_index(phi, psi)?;
    phi.check(a)?;
    psi.check(a)?;
    Ok(a.realizer_pool(true).into_iter().find(|&r| realizes(a, r, phi, psi)))
}

fn realizes(a: &FilteredOca, r: usize, phi: &Predicate, psi: &Predicate) -> bool {
    phi.values
        .iter()
        .zip(&psi.values)
        .all(|(&x, &y)| a.le(a.app(r, x), y))
}

fn same_index(phi: &Predicate, psi: &Predicate) -> Result<()> {
    if phi.index_size() != psi.index_size() {
        return Err(Error::structural("predicates over different index sets"));
    }
    Ok(())
}

/// `φ ∘ f`.
pub fn reindex(f: &FiniteFunction, phi: &Predicate) -> Result<Predicate> {
    if phi.index_size() != f.target {
        return Err(Error::structural("reindexing along a map into a different index set"));
    }
    Ok(Predicate::new(f.graph.iter().map(|&j| phi.values[j]).collect()))
}

/// Pointwise `pair φ(i) ψ(i)`.
pub fn meet_pred(a: &FilteredOca, phi: &Predicate, psi: &Predicate) -> Result<Predicate> {
    same_index(phi, psi)?;
    let pair = basic_combinators(a)?.pair;
    Ok(Predicate::new(
        phi.values
            .iter()
            .zip(&psi.values)
            .map(|(&x, &y)| a.app(a.app(pair, x), y))
            .collect(),
    ))
}

/// The constant predicate `k`.
pub fn top_pred(a: &FilteredOca, index_size: usize) -> Predicate {
    Predicate::constant(index_size, a.k())
}

/// Pointwise `φ(i) → ψ(i)`.
pub fn imp_pred(a: &Ioca, phi: &Predicate, psi: &Predicate) -> Result<Predicate> {
    same_index(phi, psi)?;
    Ok(Predicate::new(
        phi.values
            .iter()
            .zip(&psi.values)
            .map(|(&x, &y)| a.imp(x, y))
            .collect(),
    ))
}

/// `∀_f ψ (i) = inf {ψ(j) : f(j) = i}`; an empty fiber gives the top.
pub fn forall_along(a: &FilteredOca, f: &FiniteFunction, psi: &Predicate) -> Result<Predicate> {
    if psi.index_size() != f.source {
        return Err(Error::structural("quantifying a predicate over a different index set"));
    }
    (0..f.target)
        .map(|i| {
            a.order()
                .inf((0..f.source).filter(|&j| f.at(j) == i).map(|j| psi.values[j]))
        })
        .collect::<Result<Vec<_>>>()
        .map(Predicate::new)
}

/// `g*(∀_f φ) = ∀_q(p* φ)` as an exact pointwise equality.
pub fn beck_chevalley_check(a: &FilteredOca, sq: &PullbackSquare, phi: &Predicate) -> Result<Report> {
    let lhs = reindex(&sq.g, &forall_along(a, &sq.f, phi)?)?;
    let rhs = forall_along(a, &sq.q, &reindex(&sq.p, phi)?)?;
    let mut r = Report::new("beck-chevalley");
    let bad = (0..lhs.index_size()).find(|&k| lhs.values[k] != rhs.values[k]);
    r.push(CheckResult::from_witness(
        "pointwise-equality",
        lhs.index_size() as u64,
        bad.map(|k| {
            Witness::new()
                .with("phi", phi.show(a))
                .with("k", k.to_string())
                .with("g*forall_f", a.name(lhs.values[k]))
                .with("forall_q p*", a.name(rhs.values[k]))
        }),
    ));
    Ok(r)
}

/// Every predicate `φ: I → A` is the reindexing of `id_A` along `φ`.
pub fn generic_predicate_check(a: &FilteredOca, index_size: usize, exec: Exec) -> Result<Report> {
    let n = a.len();
    let count = predicate_count(n, index_size)
        .ok_or_else(|| Error::resource("predicates", u128::MAX, u128::MAX))?;
    let generic = Predicate::new((0..n).collect());
    let mut r = Report::new(format!("generic-I{index_size}"));
    let w = exec.find_first(count, |idx| {
        let phi = nth_predicate(n, index_size, idx);
        let chi = FiniteFunction::new(index_size, n, phi.values.clone()).ok()?;
        let back = reindex(&chi, &generic).ok()?;
        (back != phi).then(|| Witness::new().with("phi", phi.show(a)))
    });
    r.push(CheckResult::from_witness("reindex-of-generic-is-exact", count as u64, w));
    Ok(r)
}

/// `c` uniformly realizes `¬¬φ ⊢ φ` with `¬φ := φ → ⊥`.
pub fn classical_check(a: &Koca, index_size: usize, coverage: &Coverage, limits: &Limits, exec: Exec) -> Result<Report> {
    let o = a.oca();
    let n = o.len();
    let bot = a
        .bottom()
        .ok_or_else(|| Error::Contract("carrier has no least element".into()))?;
    let count = predicate_count(n, index_size)
        .ok_or_else(|| Error::resource("predicates", u128::MAX, limits.predicate_cap as u128))?;
    let preds = coverage.tuples(count, 1, limits.predicate_cap);
    let mut r = Report::new(format!("classical-I{index_size}"));
    let w = exec.find_first(preds.len(), |t| {
        let phi = nth_predicate(n, index_size, preds[t][0]);
        let not = |p: &Predicate| Predicate::new(p.values.iter().map(|&x| a.imp(x, bot)).collect());
        let nn = not(&not(&phi));
        (!realizes(o, a.c(), &nn, &phi)).then(|| Witness::new().with("phi", phi.show(o)))
    });
    let mut c = CheckResult::from_witness("c-realizes-not-not-elim", preds.len() as u64, w);
    if let Some(note) = coverage.note(count, 1, limits.predicate_cap) {
        c = c.with_note(note);
    }
    r.push(c);
    r.push(CheckResult::from_witness(
        "c-in-filter",
        1,
        (!o.phi().contains(a.c())).then(|| Witness::new().with("c", o.name(a.c()))),
    ));
    Ok(r)
}

/// Precomputed tables shared by the predicate-level checks.
struct Ctx<'a> {
    a: &'a Ioca,
    n: usize,
    bc: BasicCombinators,
    pool: Vec<usize>,
    /// `real[x*n + y]`: pool positions `r` (as bits) with `r x ≤ y`.
    real: Vec<u128>,
    exec: Exec,
    coverage: Coverage,
    cap: usize,
}

impl<'a> Ctx<'a> {
    fn new(a: &'a Ioca, coverage: Coverage, limits: &Limits, exec: Exec) -> Result<Self> {
        let n = a.len();
        let bc = basic_combinators(a.oca())?;
        let mut pool = a.realizer_pool(true);
        pool.truncate(128);
        let real = (0..n * n)
            .map(|i| {
                let (x, y) = (i / n, i % n);
                pool.iter()
                    .enumerate()
                    .filter(|&(_, &r)| a.le(a.app(r, x), y))
                    .fold(0u128, |acc, (p, _)| acc | 1 << p)
            })
            .collect();
        Ok(Ctx {
            a,
            n,
            bc,
            pool,
            real,
            exec,
            coverage,
            cap: limits.predicate_cap,
        })
    }

    fn o(&self) -> &FilteredOca {
        self.a.oca()
    }

    /// Pool positions uniformly realizing `φ ⊢ ψ`.
    fn uniform(&self, phi: &[usize], psi: &[usize]) -> u128 {
        phi.iter()
            .zip(psi)
            .fold(u128::MAX, |acc, (&x, &y)| acc & self.real[x * self.n + y])
    }

    fn first(&self, phi: &[usize], psi: &[usize]) -> Option<usize> {
        let m = self.uniform(phi, psi);
        (m != 0).then(|| self.pool[m.trailing_zeros() as usize])
    }

    fn realizes(&self, r: usize, phi: &[usize], psi: &[usize]) -> bool {
        phi.iter().zip(psi).all(|(&x, &y)| self.a.le(self.a.app(r, x), y))
    }

    fn meet(&self, phi: &[usize], psi: &[usize]) -> Vec<usize> {
        let o = self.o();
        phi.iter()
            .zip(psi)
            .map(|(&x, &y)| o.app(o.app(self.bc.pair, x), y))
            .collect()
    }

    fn imp(&self, phi: &[usize], psi: &[usize]) -> Vec<usize> {
        phi.iter().zip(psi).map(|(&x, &y)| self.a.imp(x, y)).collect()
    }

    fn show(&self, p: &[usize]) -> String {
        let parts: Vec<&str> = p.iter().map(|&v| self.o().name(v)).collect();
        format!("[{}]", parts.join(", "))
    }

    /// Runs `f` over predicate tuples on `0..size`, exhaustive or sampled.
    fn scan<F>(&self, name: &str, size: usize, arity: usize, labels: &[&str], f: F) -> Result<CheckResult>
    where
        F: Fn(&[Vec<usize>]) -> Option<Witness> + Sync + Send,
    {
        let count = predicate_count(self.n, size)
            .ok_or_else(|| Error::resource("predicates", u128::MAX, self.cap as u128))?;
        let cap = if count <= self.cap { TUPLE_CAP } else { 0 };
        let tuples = self.coverage.tuples(count, arity, cap);
        let w = self.exec.find_first(tuples.len(), |t| {
            let preds: Vec<Vec<usize>> = tuples[t]
                .iter()
                .map(|&i| decode(i, &vec![self.n; size]))
                .collect();
            f(&preds).map(|w| {
                labels
                    .iter()
                    .zip(&preds)
                    .rev()
                    .fold(w, |w, (l, p)| Witness(std::iter::once((l.to_string(), self.show(p))).chain(w.0).collect()))
            })
        });
        let mut c = CheckResult::from_witness(name, tuples.len() as u64, w);
        if let Some(note) = self.coverage.note(count, arity, cap) {
            c = c.with_note(note);
        }
        Ok(c)
    }

    fn preorder(&self, size: usize) -> Result<Vec<CheckResult>> {
        let i = self.bc.i;
        let b = self.bc.b;
        let o = self.o();
        Ok(vec![
            self.scan("reflexive-by-i", size, 1, &["phi"], |p| {
                (!self.realizes(i, &p[0], &p[0])).then(Witness::new)
            })?,
            self.scan("transitive-by-b-composition", size, 3, &["phi", "psi", "theta"], |p| {
                let f = self.first(&p[0], &p[1])?;
                let g = self.first(&p[1], &p[2])?;
                let h = o.app(o.app(b, g), f);
                (!self.realizes(h, &p[0], &p[2])).then(|| {
                    Witness::new().with("f", o.name(f)).with("g", o.name(g))
                })
            })?,
        ])
    }

    fn meets(&self, size: usize) -> Result<Vec<CheckResult>> {
        let o = self.o();
        let bc = &self.bc;
        let kk = o.app(o.k(), o.k());
        let top = vec![o.k(); size];
        let a_of = |r, s| combinator_a(o, bc, r, s);
        Ok(vec![
            self.scan("p0-realizes-meet-left", size, 2, &["phi", "psi"], |p| {
                (!self.realizes(bc.p0, &self.meet(&p[0], &p[1]), &p[0])).then(Witness::new)
            })?,
            self.scan("p1-realizes-meet-right", size, 2, &["phi", "psi"], |p| {
                (!self.realizes(bc.p1, &self.meet(&p[0], &p[1]), &p[1])).then(Witness::new)
            })?,
            self.scan("a-realizes-meet-intro", size, 3, &["theta", "phi", "psi"], |p| {
                let r = self.first(&p[0], &p[1])?;
                let s = self.first(&p[0], &p[2])?;
                let ars = a_of(r, s).ok()?;
                (!self.realizes(ars, &p[0], &self.meet(&p[1], &p[2])))
                    .then(|| Witness::new().with("r", o.name(r)).with("s", o.name(s)))
            })?,
            self.scan("kk-realizes-top", size, 1, &["phi"], |p| {
                (!self.realizes(kk, &p[0], &top)).then(Witness::new)
            })?,
        ])
    }

    fn heyting(&self, size: usize) -> Result<Vec<CheckResult>> {
        let o = self.o();
        let bc = &self.bc;
        let e = self.a.e();
        let conv = |f: usize| {
            let bbf = o.app(bc.b, o.app(bc.b, f));
            o.app(o.app(bc.b, e), o.app(bbf, bc.pair))
        };
        let d: Vec<Option<usize>> = self
            .pool
            .iter()
            .map(|&f| combinator_d(o, bc, f).ok())
            .collect();
        Ok(vec![self.scan(
            "meet-implication-equivalence",
            size,
            3,
            &["phi", "psi", "theta"],
            |p| {
                let m = self.meet(&p[0], &p[1]);
                let im = self.imp(&p[1], &p[2]);
                let left = self.uniform(&m, &p[2]);
                let right = self.uniform(&p[0], &im);
                for (pos, &f) in self.pool.iter().enumerate() {
                    if left >> pos & 1 == 1 && !self.realizes(conv(f), &p[0], &im) {
                        return Some(Witness::new().with("f", o.name(f)).with("direction", "converse"));
                    }
                    if right >> pos & 1 == 1 {
                        let ok = d[pos].is_some_and(|df| self.realizes(df, &m, &p[2]));
                        if !ok {
                            return Some(Witness::new().with("f", o.name(f)).with("direction", "forward"));
                        }
                    }
                }
                None
            },
        )?])
    }

    fn reindexing(&self, size: usize) -> Result<Vec<CheckResult>> {
        let o = self.o();
        let mut out = Vec::new();
        let small = size.min(SQUARE_MAX);
        let id = FiniteFunction::identity(size);
        out.push(self.scan("reindex-identity", size, 1, &["phi"], |p| {
            let phi = Predicate::new(p[0].clone());
            (reindex(&id, &phi).ok()? != phi).then(Witness::new)
        })?);
        // f: J → I with |I| = size, g: L → J.
        let maps: Vec<(FiniteFunction, FiniteFunction)> = (0..=small)
            .flat_map(|j| (0..=small).map(move |l| (j, l)))
            .flat_map(|(j, l)| {
                FiniteFunction::all(j, size).flat_map(move |f| FiniteFunction::all(l, j).map(move |g| (f.clone(), g)))
            })
            .collect();
        let k = o.k();
        out.push(self.scan("reindex-functorial-and-preserves-structure", size, 2, &["phi", "psi"], |p| {
            let (phi, psi) = (Predicate::new(p[0].clone()), Predicate::new(p[1].clone()));
            maps.iter().find_map(|(f, g)| {
                let fg = f.after(g).ok()?;
                let composite = reindex(&fg, &phi).ok()? == reindex(g, &reindex(f, &phi).ok()?).ok()?;
                let fphi = reindex(f, &phi).ok()?;
                let fpsi = reindex(f, &psi).ok()?;
                let meet = reindex(f, &Predicate::new(self.meet(&p[0], &p[1]))).ok()?.values
                    == self.meet(&fphi.values, &fpsi.values);
                let top = reindex(f, &Predicate::constant(size, k)).ok()?.values.iter().all(|&x| x == k);
                let imp = reindex(f, &Predicate::new(self.imp(&p[0], &p[1]))).ok()?.values
                    == self.imp(&fphi.values, &fpsi.values);
                (!(composite && meet && top && imp)).then(|| {
                    Witness::new()
                        .with("f", format!("{:?}", f.graph()))
                        .with("g", format!("{:?}", g.graph()))
                })
            })
        })?);
        Ok(out)
    }

    fn forall(&self, size: usize) -> Result<Vec<CheckResult>> {
        let o = self.o();
        let mut out = Vec::new();
        for j in 0..=size.min(SQUARE_MAX) {
            let maps: Vec<FiniteFunction> = FiniteFunction::all(j, size).collect();
            let count_i = predicate_count(self.n, size).unwrap_or(usize::MAX);
            let count_j = predicate_count(self.n, j).unwrap_or(usize::MAX);
            let name = format!("forall-adjunction-J{j}");
            let dims_i = vec![self.n; size];
            let dims_j = vec![self.n; j];
            let pairs: Vec<(usize, usize)> = if count_i.saturating_mul(count_j) <= self.cap.saturating_mul(self.cap) {
                (0..count_i).flat_map(|a| (0..count_j).map(move |b| (a, b))).collect()
            } else {
                let t = self.coverage.tuples(count_i.max(count_j), 2, 0);
                t.into_iter().map(|v| (v[0] % count_i, v[1] % count_j)).collect()
            };
            let sampled = count_i.saturating_mul(count_j) > self.cap.saturating_mul(self.cap);
            let w = self.exec.find_first(pairs.len() * maps.len().max(1), |t| {
                let f = maps.get(t % maps.len().max(1))?;
                let (pi, qi) = pairs[t / maps.len().max(1)];
                let phi = Predicate::new(decode(pi, &dims_i));
                let psi = Predicate::new(decode(qi, &dims_j));
                let pulled = reindex(f, &phi).ok()?;
                let pushed = forall_along(o, f, &psi).ok()?;
                let bad = self.pool.iter().copied().find(|&r| {
                    self.realizes(r, &pulled.values, &psi.values) != self.realizes(r, &phi.values, &pushed.values)
                })?;
                Some(
                    Witness::new()
                        .with("f", format!("{:?}", f.graph()))
                        .with("phi", phi.show(o))
                        .with("psi", psi.show(o))
                        .with("r", o.name(bad)),
                )
            });
            let mut c = CheckResult::from_witness(name, (pairs.len() * maps.len()) as u64, w);
            if sampled {
                c = c.with_note(format!("sampled predicate pairs, seed {}", self.coverage.seed()));
            }
            out.push(c);
        }
        Ok(out)
    }

    /// Every canonical pullback with |I|, |J|, |K| ≤ [`SQUARE_MAX`] and
    /// every predicate on `J` (sampled beyond the cap).
    fn beck_chevalley(&self) -> Result<(CheckResult, usize)> {
        let o = self.o();
        let mut squares = Vec::new();
        for i in 0..=SQUARE_MAX {
            for j in 0..=SQUARE_MAX {
                for k in 0..=SQUARE_MAX {
                    for f in FiniteFunction::all(j, i) {
                        for g in FiniteFunction::all(k, i) {
                            squares.push(PullbackSquare::canonical(f.clone(), g)?);
                        }
                    }
                }
            }
        }
        let phis: Vec<Vec<Predicate>> = (0..=SQUARE_MAX)
            .map(|j| {
                let count = predicate_count(self.n, j).unwrap_or(usize::MAX);
                self.coverage
                    .tuples(count, 1, self.cap)
                    .into_iter()
                    .map(|t| nth_predicate(self.n, j, t[0]))
                    .collect()
            })
            .collect();
        let cases: usize = squares.iter().map(|sq| phis[sq.f.source].len()).sum();
        let w = self.exec.find_first(squares.len(), |s| {
            let sq = &squares[s];
            phis[sq.f.source].iter().find_map(|phi| {
                let rep = beck_chevalley_check(o, sq, phi).ok()?;
                let c = rep.checks.into_iter().next()?;
                c.witness.map(|w| {
                    Witness::new()
                        .with("f", format!("{:?}", sq.f.graph()))
                        .with("g", format!("{:?}", sq.g.graph()))
                        .with("phi", phi.show(o))
                        .with("detail", w.to_string())
                })
            })
        });
        Ok((
            CheckResult::from_witness("beck-chevalley-pointwise-equality", cases as u64, w)
                .with_note(format!("{} validated pullback squares", squares.len())),
            squares.len(),
        ))
    }
}

/// All tripos laws for `T(A)` at index sizes `0..=index_size`: preorder,
/// meets and top, Heyting implication, reindexing, the `∀` adjunction,
/// Beck–Chevalley and the generic predicate.
pub fn tripos_suite(
    a: &Ioca,
    index_size: usize,
    coverage: &Coverage,
    limits: &Limits,
    exec: Exec,
) -> Result<Report> {
    let cx = Ctx::new(a, *coverage, limits, exec)?;
    let mut r = Report::new("tripos");
    for size in 0..=index_size {
        let mut sub = Report::new(format!("I{size}"));
        for c in cx
            .preorder(size)?
            .into_iter()
            .chain(cx.meets(size)?)
            .chain(cx.heyting(size)?)
            .chain(cx.reindexing(size)?)
            .chain(cx.forall(size)?)
        {
            sub.push(c);
        }
        r.absorb(sub);
        r.absorb(generic_predicate_check(a.oca(), size, exec)?);
    }
    r.push(cx.beck_chevalley()?.0);
    Ok(r)
}

/// [`tripos_suite`] plus the classical law at every index size.
pub fn koca_tripos_suite(
    a: &Koca,
    index_size: usize,
    coverage: &Coverage,
    limits: &Limits,
    exec: Exec,
) -> Result<Report> {
    let mut r = tripos_suite(a.ioca(), index_size, coverage, limits, exec)?;
    for size in 0..=index_size {
        r.absorb(classical_check(a, size, coverage, limits, exec)?);
    }
    Ok(r)
}

/// Number of canonical squares scanned by [`tripos_suite`].
pub fn square_count() -> usize {
    (0..=SQUARE_MAX)
        .map(|i| {
            let maps: usize = (0..=SQUARE_MAX).map(|j| i.pow(j as u32)).sum();
            maps * maps
        })
        .sum()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ioca::boolean;

    #[test]
    fn reflexivity_by_i() {
        let k = boolean(2).unwrap();
        let phi = Predicate::new(vec![0, 3]);
        let r = entails_pred(&k, &phi, &phi).unwrap().unwrap();
        assert!(realizes(&k, r, &phi, &phi));
    }

    #[test]
    fn top_does_not_entail_bottom() {
        let k = boolean(1).unwrap();
        let top = Predicate::constant(1, 1);
        let bot = Predicate::constant(1, 0);
        assert_eq!(entails_pred(&k, &top, &bot).unwrap(), None);
        // Empty index set: the first pool element realizes.
        let e = Predicate::new(vec![]);
        assert_eq!(entails_pred(&k, &e, &e).unwrap(), Some(k.realizer_pool(true)[0]));
    }

    #[test]
    fn forall_empty_fiber_is_top() {
        let k = boolean(2).unwrap();
        let f = FiniteFunction::new(1, 2, vec![0]).unwrap();
        let psi = Predicate::new(vec![1]);
        assert_eq!(forall_along(&k, &f, &psi).unwrap().values, vec![1, 3]);
        let c = FiniteFunction::new(2, 1, vec![0, 0]).unwrap();
        let psi = Predicate::new(vec![1, 2]);
        assert_eq!(forall_along(&k, &c, &psi).unwrap().values, vec![0]);
    }

    #[test]
    fn reindex_composes() {
        let f = FiniteFunction::new(3, 2, vec![1, 0, 1]).unwrap();
        let g = FiniteFunction::new(2, 3, vec![2, 0]).unwrap();
        let phi = Predicate::new(vec![5, 7]);
        let direct = reindex(&f.after(&g).unwrap(), &phi).unwrap();
        assert_eq!(direct, reindex(&g, &reindex(&f, &phi).unwrap()).unwrap());
        assert_eq!(direct.values, vec![7, 7]);
        let constant = FiniteFunction::new(3, 2, vec![1, 1, 1]).unwrap();
        assert_eq!(reindex(&constant, &phi).unwrap().values, vec![7, 7, 7]);
    }

    #[test]
    fn pullback_validation() {
        let f = FiniteFunction::new(2, 1, vec![0, 0]).unwrap();
        let g = FiniteFunction::new(2, 1, vec![0, 0]).unwrap();
        let sq = PullbackSquare::canonical(f.clone(), g.clone()).unwrap();
        assert_eq!(sq.p.source(), 4);
        // Dropping a point breaks unique existence.
        let p = FiniteFunction::new(3, 2, vec![0, 0, 1]).unwrap();
        let q = FiniteFunction::new(3, 2, vec![0, 1, 0]).unwrap();
        assert!(PullbackSquare::new(p, q, f, g).is_err());
    }

    #[test]
    fn square_count_matches() {
        assert_eq!(square_count(), 1842);
    }

    #[test]
    fn boolean_tripos_small() {
        let k = boolean(1).unwrap();
        let r = koca_tripos_suite(&k, 1, &Coverage::default(), &Limits::default(), Exec::Parallel).unwrap();
        assert!(r.passed(), "{r}");
    }
}
