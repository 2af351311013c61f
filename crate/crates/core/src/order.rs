//! Finite partial orders and the lattice operations they may support.

use crate::error::{Error, Result};
use crate::report::Witness;
use crate::set::{bit_indices, check_width};

/// A finite relation `≤` on `0..n`, stored as up-sets: bit `b` of
/// `up[a]` is set iff `a ≤ b`.
///
/// When the relation is a partial order with a top element and all binary
/// meets, it is a complete lattice and the meet/join tables are cached.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Poset {
    up: Vec<u128>,
    meet: Option<Vec<usize>>,
    join: Option<Vec<usize>>,
    top: Option<usize>,
    bottom: Option<usize>,
}

impl Poset {
    pub fn from_table(table: &[Vec<bool>]) -> Result<Self> {
        let n = table.len();
        check_width(n, "order")?;
        if table.iter().any(|r| r.len() != n) {
            return Err(Error::structural(format!("order table must be {n}x{n}")));
        }
        let up = table
            .iter()
            .map(|r| {
                r.iter()
                    .enumerate()
                    .fold(0u128, |acc, (b, &x)| if x { acc | 1 << b } else { acc })
            })
            .collect();
        Ok(Self::from_up_sets(up))
    }

    /// Builds the order from `(a, b)` pairs meaning `a ≤ b`. Reflexive
    /// pairs are not added implicitly.
    pub fn from_pairs(n: usize, pairs: &[(usize, usize)]) -> Result<Self> {
        check_width(n, "order")?;
        let mut up = vec![0u128; n];
        for &(a, b) in pairs {
            if a >= n || b >= n {
                return Err(Error::structural(format!("order pair ({a},{b}) out of range")));
            }
            up[a] |= 1 << b;
        }
        Ok(Self::from_up_sets(up))
    }

    /// The order `a ≤ b` given by a predicate.
    pub fn from_fn(n: usize, leq: impl Fn(usize, usize) -> bool) -> Result<Self> {
        check_width(n, "order")?;
        let up = (0..n)
            .map(|a| (0..n).filter(|&b| leq(a, b)).fold(0u128, |acc, b| acc | 1 << b))
            .collect();
        Ok(Self::from_up_sets(up))
    }

    pub(crate) fn from_up_sets(up: Vec<u128>) -> Self {
        let mut p = Poset {
            up,
            meet: None,
            join: None,
            top: None,
            bottom: None,
        };
        if p.order_violation().is_none() {
            p.top = (0..p.len()).find(|&t| (0..p.len()).all(|a| p.le(a, t)));
            p.bottom = (0..p.len()).find(|&b| (0..p.len()).all(|a| p.le(b, a)));
            if p.top.is_some() {
                p.meet = p.meet_table();
                if p.meet.is_some() {
                    p.join = p.join_table();
                }
            }
        }
        p
    }

    fn meet_table(&self) -> Option<Vec<usize>> {
        let n = self.len();
        let mut table = Vec::with_capacity(n * n);
        for a in 0..n {
            for b in 0..n {
                let lower = self.down(a) & self.down(b);
                table.push(bit_indices(lower).find(|&g| lower & !self.down(g) == 0)?);
            }
        }
        Some(table)
    }

    fn join_table(&self) -> Option<Vec<usize>> {
        let n = self.len();
        let mut table = Vec::with_capacity(n * n);
        for a in 0..n {
            for b in 0..n {
                let upper = self.up[a] & self.up[b];
                table.push(bit_indices(upper).find(|&l| upper & !self.up[l] == 0)?);
            }
        }
        Some(table)
    }

    pub fn len(&self) -> usize {
        self.up.len()
    }

    pub fn is_empty(&self) -> bool {
        self.up.is_empty()
    }

    pub fn le(&self, a: usize, b: usize) -> bool {
        self.up[a] >> b & 1 == 1
    }

    /// Elements above `a`, as a bit set.
    pub fn up_set(&self, a: usize) -> u128 {
        self.up[a]
    }

    /// Elements below `a`, as a bit set.
    pub fn down(&self, a: usize) -> u128 {
        (0..self.len())
            .filter(|&x| self.le(x, a))
            .fold(0u128, |acc, x| acc | 1 << x)
    }

    /// First failure of reflexivity, antisymmetry or transitivity.
    pub fn order_violation(&self) -> Option<(&'static str, Witness)> {
        let n = self.len();
        if let Some(a) = (0..n).find(|&a| !self.le(a, a)) {
            return Some(("reflexive", Witness::new().with("a", a.to_string())));
        }
        for a in 0..n {
            for b in 0..n {
                if a != b && self.le(a, b) && self.le(b, a) {
                    return Some((
                        "antisymmetric",
                        Witness::new().with("a", a.to_string()).with("b", b.to_string()),
                    ));
                }
            }
        }
        for a in 0..n {
            for b in bit_indices(self.up[a]) {
                if self.up[b] & !self.up[a] != 0 {
                    let c = bit_indices(self.up[b] & !self.up[a]).next().unwrap_or(0);
                    return Some((
                        "transitive",
                        Witness::new()
                            .with("a", a.to_string())
                            .with("b", b.to_string())
                            .with("c", c.to_string()),
                    ));
                }
            }
        }
        None
    }

    pub fn is_complete_lattice(&self) -> bool {
        self.meet.is_some()
    }

    pub fn top(&self) -> Option<usize> {
        self.top
    }

    pub fn bottom(&self) -> Option<usize> {
        self.bottom
    }

    fn need_lattice(&self) -> Result<(&[usize], &[usize], usize)> {
        match (&self.meet, &self.join, self.top) {
            (Some(m), Some(j), Some(t)) => Ok((m, j, t)),
            _ => Err(Error::Contract("order is not a complete lattice".into())),
        }
    }

    pub fn meet(&self, a: usize, b: usize) -> Result<usize> {
        let (m, _, _) = self.need_lattice()?;
        Ok(m[a * self.len() + b])
    }

    pub fn join(&self, a: usize, b: usize) -> Result<usize> {
        let (_, j, _) = self.need_lattice()?;
        Ok(j[a * self.len() + b])
    }

    /// Infimum of a set of elements; the empty infimum is the top.
    pub fn inf<I: IntoIterator<Item = usize>>(&self, items: I) -> Result<usize> {
        let (m, _, t) = self.need_lattice()?;
        let n = self.len();
        Ok(items.into_iter().fold(t, |acc, x| m[acc * n + x]))
    }

    /// Supremum of a set of elements; the empty supremum is the bottom.
    pub fn sup<I: IntoIterator<Item = usize>>(&self, items: I) -> Result<usize> {
        let (_, j, _) = self.need_lattice()?;
        let n = self.len();
        let bottom = self.bottom.ok_or_else(|| Error::Contract("no bottom".into()))?;
        Ok(items.into_iter().fold(bottom, |acc, x| j[acc * n + x]))
    }

    /// The order as a boolean table.
    pub fn table(&self) -> Vec<Vec<bool>> {
        (0..self.len())
            .map(|a| (0..self.len()).map(|b| self.le(a, b)).collect())
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn chain(n: usize) -> Poset {
        Poset::from_fn(n, |a, b| a <= b).unwrap()
    }

    #[test]
    fn chain_is_lattice() {
        let c = chain(3);
        assert!(c.order_violation().is_none());
        assert!(c.is_complete_lattice());
        assert_eq!(c.meet(1, 2).unwrap(), 1);
        assert_eq!(c.join(0, 1).unwrap(), 1);
        assert_eq!(c.inf([]).unwrap(), 2);
        assert_eq!(c.sup([]).unwrap(), 0);
        assert_eq!(c.inf([2, 1]).unwrap(), 1);
    }

    #[test]
    fn antichain_is_not_lattice() {
        let a = Poset::from_fn(2, |a, b| a == b).unwrap();
        assert!(a.order_violation().is_none());
        assert!(!a.is_complete_lattice());
        assert!(a.meet(0, 1).is_err());
    }

    #[test]
    fn detects_violations() {
        let p = Poset::from_pairs(2, &[(0, 0), (1, 1), (0, 1), (1, 0)]).unwrap();
        assert_eq!(p.order_violation().unwrap().0, "antisymmetric");
        let p = Poset::from_pairs(2, &[(0, 0)]).unwrap();
        assert_eq!(p.order_violation().unwrap().0, "reflexive");
        let p = Poset::from_pairs(3, &[(0, 0), (1, 1), (2, 2), (0, 1), (1, 2)]).unwrap();
        assert_eq!(p.order_violation().unwrap().0, "transitive");
    }

    #[test]
    fn diamond_lattice() {
        // Subsets of a 2-element set ordered by inclusion.
        let p = Poset::from_fn(4, |a, b| a & !b == 0).unwrap();
        assert_eq!(p.meet(1, 2).unwrap(), 0);
        assert_eq!(p.join(1, 2).unwrap(), 3);
        assert_eq!(p.top(), Some(3));
        assert_eq!(p.bottom(), Some(0));
    }
}
