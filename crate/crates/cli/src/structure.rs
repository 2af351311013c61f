//! Structure files: JSON with a top-level `kind` and named tables.
//!
//! Elements are referred to by name everywhere. Relations are lists of
//! pairs, functions lists of triples `[x, y, value]` (or pairs for unary
//! maps). Reflexive pairs may be left out of `leq`.

use std::collections::BTreeMap;

use koca::aks::AbstractKrivineStructure;
use koca::ioca::{boolean, ProperQuadruple};
use koca::{ElemSet, Error, FilteredOca, Ioca, Koca, Poset, PushLattice, RealizabilityLattice, Result, TermSet};
use serde::{Deserialize, Serialize};

#[derive(Debug, Default, Deserialize, Serialize)]
#[serde(deny_unknown_fields)]
pub struct StructureFile {
    pub kind: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub terms: Option<Vec<String>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub stacks: Option<Vec<String>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub pole: Option<Vec<[String; 2]>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub push: Option<Vec<[String; 3]>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub store: Option<Vec<[String; 2]>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub qp: Option<Vec<String>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub elements: Option<Vec<String>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub leq: Option<Vec<[String; 2]>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub app: Option<Vec<[String; 3]>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub imp: Option<Vec<[String; 3]>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub phi: Option<Vec<String>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub k: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub s: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub cc: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub e: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub c: Option<String>,
}

pub enum Structure {
    Lattice(RealizabilityLattice),
    Aks(AbstractKrivineStructure),
    Oca(FilteredOca),
    Ioca(Ioca),
    Koca(Koca),
    Quadruple(ProperQuadruple, Koca),
}

impl Structure {
    pub fn kind(&self) -> &'static str {
        match self {
            Structure::Lattice(_) => "lattice",
            Structure::Aks(_) => "aks",
            Structure::Oca(_) => "oca",
            Structure::Ioca(_) => "ioca",
            Structure::Koca(_) => "koca",
            Structure::Quadruple(..) => "quadruple",
        }
    }

    pub fn koca(&self) -> Option<&Koca> {
        match self {
            Structure::Koca(k) | Structure::Quadruple(_, k) => Some(k),
            _ => None,
        }
    }

    pub fn ioca(&self) -> Option<&Ioca> {
        match self {
            Structure::Ioca(i) => Some(i),
            other => other.koca().map(|k| k.ioca()),
        }
    }
}

fn need<'a, T>(v: &'a Option<T>, field: &str, kind: &str) -> Result<&'a T> {
    v.as_ref()
        .ok_or_else(|| Error::Structural(format!("a `{kind}` structure needs `{field}`")))
}

struct Names<'a> {
    what: &'a str,
    index: BTreeMap<&'a str, usize>,
}

impl<'a> Names<'a> {
    fn new(what: &'a str, names: &'a [String]) -> Result<Self> {
        let mut index = BTreeMap::new();
        for (i, n) in names.iter().enumerate() {
            if index.insert(n.as_str(), i).is_some() {
                return Err(Error::Structural(format!("duplicate {what} `{n}`")));
            }
        }
        Ok(Names { what, index })
    }

    fn get(&self, name: &str) -> Result<usize> {
        self.index
            .get(name)
            .copied()
            .ok_or_else(|| Error::Structural(format!("undeclared {} `{name}`", self.what)))
    }

    fn len(&self) -> usize {
        self.index.len()
    }
}

/// A total table `f(x, y)` from triples; every cell exactly once.
fn table(field: &str, rows: &[[String; 3]], left: &Names, right: &Names, out: &Names) -> Result<Vec<usize>> {
    let (n, m) = (left.len(), right.len());
    let mut t = vec![None; n * m];
    for [x, y, v] in rows {
        let cell = &mut t[left.get(x)? * m + right.get(y)?];
        if cell.replace(out.get(v)?).is_some() {
            return Err(Error::Structural(format!("`{field}` defines ({x}, {y}) twice")));
        }
    }
    t.into_iter()
        .enumerate()
        .map(|(i, v)| {
            v.ok_or_else(|| {
                Error::Structural(format!("`{field}` is not total: ({}, {}) missing", i / m.max(1), i % m.max(1)))
            })
        })
        .collect()
}

fn lattice(f: &StructureFile) -> Result<RealizabilityLattice> {
    let terms = need(&f.terms, "terms", &f.kind)?;
    let stacks = need(&f.stacks, "stacks", &f.kind)?;
    let (tn, sn) = (Names::new("term", terms)?, Names::new("stack", stacks)?);
    let pole = need(&f.pole, "pole", &f.kind)?
        .iter()
        .map(|[t, p]| Ok((tn.get(t)?, sn.get(p)?)))
        .collect::<Result<Vec<_>>>()?;
    RealizabilityLattice::from_pairs(terms.clone(), stacks.clone(), &pole)
}

fn aks(f: &StructureFile) -> Result<AbstractKrivineStructure> {
    let lat = lattice(f)?;
    let terms = lat.terms().to_vec();
    let stacks = lat.stacks().to_vec();
    let (tn, sn) = (Names::new("term", &terms)?, Names::new("stack", &stacks)?);
    let push = table("push", need(&f.push, "push", &f.kind)?, &tn, &sn, &sn)?;
    let app = table("app", need(&f.app, "app", &f.kind)?, &tn, &tn, &tn)?;
    let mut store = vec![None; sn.len()];
    for [p, t] in need(&f.store, "store", &f.kind)? {
        if store[sn.get(p)?].replace(tn.get(t)?).is_some() {
            return Err(Error::Structural(format!("`store` defines `{p}` twice")));
        }
    }
    let store = store
        .into_iter()
        .enumerate()
        .map(|(i, v)| v.ok_or_else(|| Error::Structural(format!("`store` misses stack `{}`", stacks[i]))))
        .collect::<Result<Vec<_>>>()?;
    let qp = need(&f.qp, "qp", &f.kind)?
        .iter()
        .map(|t| tn.get(t))
        .collect::<Result<Vec<_>>>()?;
    let qp = TermSet::from_indices(terms.len(), qp)?;
    let k = tn.get(need(&f.k, "k", &f.kind)?)?;
    let s = tn.get(need(&f.s, "s", &f.kind)?)?;
    let cc = tn.get(need(&f.cc, "cc", &f.kind)?)?;
    AbstractKrivineStructure::new(PushLattice::new(lat, push)?, app, store, qp, k, s, cc)
}

fn order(f: &StructureFile, en: &Names) -> Result<Poset> {
    let mut pairs: Vec<(usize, usize)> = (0..en.len()).map(|i| (i, i)).collect();
    for [a, b] in need(&f.leq, "leq", &f.kind)? {
        pairs.push((en.get(a)?, en.get(b)?));
    }
    Poset::from_pairs(en.len(), &pairs)
}

fn phi(f: &StructureFile, en: &Names) -> Result<ElemSet> {
    let idx = need(&f.phi, "phi", &f.kind)?
        .iter()
        .map(|x| en.get(x))
        .collect::<Result<Vec<_>>>()?;
    ElemSet::from_indices(en.len(), idx)
}

fn oca(f: &StructureFile) -> Result<FilteredOca> {
    let names = need(&f.elements, "elements", &f.kind)?;
    let en = Names::new("element", names)?;
    let app = table("app", need(&f.app, "app", &f.kind)?, &en, &en, &en)?;
    let k = en.get(need(&f.k, "k", &f.kind)?)?;
    let s = en.get(need(&f.s, "s", &f.kind)?)?;
    FilteredOca::new(names.clone(), order(f, &en)?, app, k, s, phi(f, &en)?)
}

fn ioca(f: &StructureFile) -> Result<Ioca> {
    let o = oca(f)?;
    let en = Names::new("element", o.names())?;
    let imp = table("imp", need(&f.imp, "imp", &f.kind)?, &en, &en, &en)?;
    let e = en.get(need(&f.e, "e", &f.kind)?)?;
    Ioca::new(o.clone(), imp, e)
}

fn quadruple(f: &StructureFile) -> Result<ProperQuadruple> {
    let names = need(&f.elements, "elements", &f.kind)?;
    let en = Names::new("element", names)?;
    let imp = table("imp", need(&f.imp, "imp", &f.kind)?, &en, &en, &en)?;
    ProperQuadruple::new(names.clone(), order(f, &en)?, imp, phi(f, &en)?)
}

/// `boolean:n` shorthand, if `spec` is one.
fn boolean_spec(spec: &str) -> Option<Result<usize>> {
    let n = spec.strip_prefix("boolean:")?;
    Some(
        n.parse()
            .map_err(|_| Error::Structural(format!("`{spec}`: atom count must be a number"))),
    )
}

pub fn from_file(f: &StructureFile) -> Result<Structure> {
    if let Some(n) = boolean_spec(&f.kind) {
        return Ok(Structure::Koca(boolean(n?)?));
    }
    Ok(match f.kind.as_str() {
        "lattice" => Structure::Lattice(lattice(f)?),
        "aks" => Structure::Aks(aks(f)?),
        "oca" => Structure::Oca(oca(f)?),
        "ioca" => Structure::Ioca(ioca(f)?),
        "koca" => {
            let names = need(&f.elements, "elements", &f.kind)?;
            let c = Names::new("element", names)?.get(need(&f.c, "c", &f.kind)?)?;
            Structure::Koca(Koca::new(ioca(f)?, c)?)
        }
        "quadruple" => {
            let q = quadruple(f)?;
            let k = q.into_koca()?;
            Structure::Quadruple(q, k)
        }
        other => return Err(Error::Structural(format!("unknown structure kind `{other}`"))),
    })
}

/// Parses `text` as a structure file, or `spec` directly when it is a
/// `boolean:n` shorthand.
pub fn load(spec: &str, text: Option<&str>) -> Result<Structure> {
    match (boolean_spec(spec), text) {
        (Some(n), _) => Ok(Structure::Koca(boolean(n?)?)),
        (None, Some(text)) => {
            let f: StructureFile =
                serde_json::from_str(text).map_err(|e| Error::Parse { line: e.line(), col: e.column(), msg: e.to_string() })?;
            from_file(&f)
        }
        (None, None) => Err(Error::Structural(format!("no structure text for `{spec}`"))),
    }
}

fn names(v: impl IntoIterator<Item = String>) -> Option<Vec<String>> {
    Some(v.into_iter().collect())
}

/// Pretty JSON with one table row per line.
pub fn to_text(f: &StructureFile) -> String {
    let v = serde_json::to_value(f).expect("structure serializes");
    let obj = v.as_object().expect("structure is an object");
    let fields: Vec<String> = obj
        .iter()
        .map(|(k, v)| {
            let key = serde_json::to_string(k).expect("key");
            match v.as_array() {
                Some(rows) if rows.iter().any(|r| r.is_array()) => {
                    let rows: Vec<String> = rows.iter().map(|r| format!("    {r}")).collect();
                    format!("  {key}: [\n{}\n  ]", rows.join(",\n"))
                }
                _ => format!("  {key}: {v}"),
            }
        })
        .collect();
    format!("{{\n{}\n}}\n", fields.join(",\n"))
}

pub fn koca_file(a: &Koca) -> StructureFile {
    let n = a.len();
    let nm = |i: usize| a.name(i).to_string();
    let grid = |f: &dyn Fn(usize, usize) -> usize| {
        (0..n * n).map(|i| [nm(i / n), nm(i % n), nm(f(i / n, i % n))]).collect()
    };
    StructureFile {
        kind: "koca".into(),
        elements: Some(a.names().to_vec()),
        leq: Some(
            (0..n * n)
                .filter(|&i| i / n != i % n && a.le(i / n, i % n))
                .map(|i| [nm(i / n), nm(i % n)])
                .collect(),
        ),
        app: Some(grid(&|x, y| a.app(x, y))),
        imp: Some(grid(&|x, y| a.imp(x, y))),
        phi: names(a.phi().iter().map(nm)),
        k: Some(nm(a.k())),
        s: Some(nm(a.s())),
        e: Some(nm(a.e())),
        c: Some(nm(a.c())),
        ..Default::default()
    }
}

pub fn aks_file(a: &AbstractKrivineStructure) -> StructureFile {
    let lat = a.lattice();
    let (nt, ns) = (a.n_terms(), a.n_stacks());
    let t = |i: usize| lat.terms()[i].clone();
    let p = |i: usize| lat.stacks()[i].clone();
    StructureFile {
        kind: "aks".into(),
        terms: Some(lat.terms().to_vec()),
        stacks: Some(lat.stacks().to_vec()),
        pole: Some(
            (0..nt * ns)
                .filter(|&i| a.orth(i / ns, i % ns))
                .map(|i| [t(i / ns), p(i % ns)])
                .collect(),
        ),
        push: Some((0..nt * ns).map(|i| [t(i / ns), p(i % ns), p(a.push(i / ns, i % ns))]).collect()),
        app: Some((0..nt * nt).map(|i| [t(i / nt), t(i % nt), t(a.app(i / nt, i % nt))]).collect()),
        store: Some((0..ns).map(|i| [p(i), t(a.store(i))]).collect()),
        qp: names(a.qp().iter().map(t)),
        k: Some(t(a.k())),
        s: Some(t(a.s())),
        cc: Some(t(a.cc())),
        ..Default::default()
    }
}
