//! Fixed-width membership vectors over an ordered carrier.
//!
//! A [`Subset`] is tagged with the carrier it ranges over so that term sets
//! and stack sets cannot be mixed up. Carriers hold at most [`MAX_WIDTH`]
//! elements, which is far above the desk-scale bounds every enumeration in
//! this crate works under.

use std::fmt;
use std::marker::PhantomData;

use crate::error::{Error, Result};

/// Largest carrier a membership vector can index.
pub const MAX_WIDTH: usize = 128;

/// Marker for sets of terms (Λ).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Terms {}

/// Marker for sets of stacks (Π).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Stacks {}

/// Marker for subsets of an algebra carrier.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Elems {}

pub type TermSet = Subset<Terms>;
pub type StackSet = Subset<Stacks>;
pub type ElemSet = Subset<Elems>;

pub(crate) fn mask(width: usize) -> u128 {
    if width >= 128 {
        u128::MAX
    } else {
        (1u128 << width) - 1
    }
}

pub(crate) fn check_width(width: usize, what: &str) -> Result<()> {
    if width > MAX_WIDTH {
        return Err(Error::resource(
            format!("{what} carrier"),
            width as u128,
            MAX_WIDTH as u128,
        ));
    }
    Ok(())
}

/// Iterate the indices of the set bits of `bits`, ascending.
pub(crate) fn bit_indices(mut bits: u128) -> impl Iterator<Item = usize> {
    std::iter::from_fn(move || {
        if bits == 0 {
            None
        } else {
            let i = bits.trailing_zeros() as usize;
            bits &= bits - 1;
            Some(i)
        }
    })
}

pub struct Subset<K> {
    bits: u128,
    width: u8,
    _kind: PhantomData<K>,
}

impl<K> Clone for Subset<K> {
    fn clone(&self) -> Self {
        *self
    }
}
impl<K> Copy for Subset<K> {}

impl<K> PartialEq for Subset<K> {
    fn eq(&self, other: &Self) -> bool {
        self.bits == other.bits && self.width == other.width
    }
}
impl<K> Eq for Subset<K> {}

impl<K> std::hash::Hash for Subset<K> {
    fn hash<H: std::hash::Hasher>(&self, state: &mut H) {
        self.bits.hash(state);
        self.width.hash(state);
    }
}

impl<K> PartialOrd for Subset<K> {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}
impl<K> Ord for Subset<K> {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        (self.width, self.bits).cmp(&(other.width, other.bits))
    }
}

impl<K> fmt::Debug for Subset<K> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.iter()).finish()
    }
}

impl<K> Subset<K> {
    pub(crate) fn from_bits_unchecked(bits: u128, width: usize) -> Self {
        debug_assert!(width <= MAX_WIDTH);
        Subset {
            bits: bits & mask(width),
            width: width as u8,
            _kind: PhantomData,
        }
    }

    pub fn empty(width: usize) -> Result<Self> {
        check_width(width, "set")?;
        Ok(Self::from_bits_unchecked(0, width))
    }

    pub fn full(width: usize) -> Result<Self> {
        check_width(width, "set")?;
        Ok(Self::from_bits_unchecked(mask(width), width))
    }

    /// Builds a set from a bit pattern; bit `i` is element `i`.
    pub fn from_bits(bits: u128, width: usize) -> Result<Self> {
        check_width(width, "set")?;
        if bits & !mask(width) != 0 {
            return Err(Error::structural(format!(
                "bit pattern {bits:#x} has members outside width {width}"
            )));
        }
        Ok(Self::from_bits_unchecked(bits, width))
    }

    pub fn from_indices<I: IntoIterator<Item = usize>>(width: usize, items: I) -> Result<Self> {
        check_width(width, "set")?;
        let mut bits = 0u128;
        for i in items {
            if i >= width {
                return Err(Error::structural(format!(
                    "index {i} out of range for width {width}"
                )));
            }
            bits |= 1 << i;
        }
        Ok(Self::from_bits_unchecked(bits, width))
    }

    /// Builds a set from a boolean membership vector.
    pub fn from_membership(members: &[bool]) -> Result<Self> {
        Self::from_indices(
            members.len(),
            members
                .iter()
                .enumerate()
                .filter_map(|(i, &m)| m.then_some(i)),
        )
    }

    pub fn bits(&self) -> u128 {
        self.bits
    }

    /// Number of elements of the carrier (not of the set).
    pub fn width(&self) -> usize {
        self.width as usize
    }

    pub fn count(&self) -> usize {
        self.bits.count_ones() as usize
    }

    pub fn is_empty(&self) -> bool {
        self.bits == 0
    }

    pub fn is_full(&self) -> bool {
        self.bits == mask(self.width())
    }

    pub fn contains(&self, i: usize) -> bool {
        i < self.width() && self.bits >> i & 1 == 1
    }

    pub fn insert(&mut self, i: usize) {
        assert!(i < self.width(), "index {i} out of range");
        self.bits |= 1 << i;
    }

    pub fn remove(&mut self, i: usize) {
        if i < self.width() {
            self.bits &= !(1 << i);
        }
    }

    pub fn union(&self, other: &Self) -> Self {
        debug_assert_eq!(self.width, other.width);
        Self::from_bits_unchecked(self.bits | other.bits, self.width())
    }

    pub fn intersection(&self, other: &Self) -> Self {
        debug_assert_eq!(self.width, other.width);
        Self::from_bits_unchecked(self.bits & other.bits, self.width())
    }

    pub fn complement(&self) -> Self {
        Self::from_bits_unchecked(!self.bits, self.width())
    }

    pub fn is_subset(&self, other: &Self) -> bool {
        self.bits & !other.bits == 0
    }

    pub fn iter(&self) -> impl Iterator<Item = usize> {
        bit_indices(self.bits)
    }

    pub fn membership(&self) -> Vec<bool> {
        (0..self.width()).map(|i| self.contains(i)).collect()
    }

    /// Renders the set as `{a,b,...}` using the carrier's names.
    pub fn display_with(&self, names: &[String]) -> String {
        let inner: Vec<&str> = self.iter().map(|i| names[i].as_str()).collect();
        format!("{{{}}}", inner.join(","))
    }

    /// Every subset of a carrier of the given width, in bit-pattern order.
    pub fn all(width: usize) -> Result<impl Iterator<Item = Self>> {
        if width >= 64 {
            return Err(Error::resource("subset enumeration", width as u128, 63));
        }
        Ok((0..1u128 << width).map(move |b| Self::from_bits_unchecked(b, width)))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn basic_operations() {
        let a = TermSet::from_indices(5, [0, 2]).unwrap();
        let b = TermSet::from_indices(5, [2, 3]).unwrap();
        assert_eq!(a.union(&b), TermSet::from_indices(5, [0, 2, 3]).unwrap());
        assert_eq!(a.intersection(&b), TermSet::from_indices(5, [2]).unwrap());
        assert!(!a.is_subset(&b));
        assert!(a.intersection(&b).is_subset(&a));
        assert_eq!(a.complement().iter().collect::<Vec<_>>(), vec![1, 3, 4]);
        assert_eq!(a.count(), 2);
    }

    #[test]
    fn width_is_bounded() {
        assert!(StackSet::empty(MAX_WIDTH).is_ok());
        assert!(matches!(
            StackSet::empty(MAX_WIDTH + 1),
            Err(Error::Resource { .. })
        ));
        assert!(StackSet::from_indices(3, [3]).is_err());
        assert!(StackSet::from_bits(0b1000, 3).is_err());
    }

    #[test]
    fn full_width_mask() {
        let s = StackSet::full(128).unwrap();
        assert_eq!(s.count(), 128);
        assert!(s.is_full());
        assert!(s.complement().is_empty());
    }

    #[test]
    fn enumerate_all() {
        assert_eq!(StackSet::all(3).unwrap().count(), 8);
        assert_eq!(StackSet::all(0).unwrap().count(), 1);
    }
}
