//! Finite multisets over places.
//!
//! Places are interned to dense ordinals by the net, so a multiset is stored as
//! a vector of counts indexed by place ordinal. Trailing zero counts are always
//! trimmed, which makes structural equality coincide with multiset equality
//! regardless of how many places the owning net declares.

use std::fmt;

/// Dense place identifier (declaration ordinal inside a [`crate::PtNet`]).
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct PlaceId(pub u32);

impl PlaceId {
    pub fn index(self) -> usize {
        self.0 as usize
    }
}

impl fmt::Display for PlaceId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "p{}", self.0)
    }
}

#[derive(Clone, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Multiset {
    counts: Vec<u32>,
}

impl Multiset {
    /// The empty multiset.
    pub fn empty() -> Self {
        Self::default()
    }

    pub fn from_counts(counts: impl Into<Vec<u32>>) -> Self {
        let mut m = Multiset {
            counts: counts.into(),
        };
        m.trim();
        m
    }

    /// `n · place`.
    pub fn singleton(place: PlaceId, n: u32) -> Self {
        let mut m = Self::empty();
        m.add(place, n);
        m
    }

    /// Builds a multiset from `(place, count)` pairs; repeated places accumulate.
    pub fn from_pairs(pairs: impl IntoIterator<Item = (PlaceId, u32)>) -> Self {
        let mut m = Self::empty();
        for (p, n) in pairs {
            m.add(p, n);
        }
        m
    }

    fn trim(&mut self) {
        while self.counts.last() == Some(&0) {
            self.counts.pop();
        }
    }

    pub fn get(&self, place: PlaceId) -> u32 {
        self.counts.get(place.index()).copied().unwrap_or(0)
    }

    pub fn add(&mut self, place: PlaceId, n: u32) {
        if n == 0 {
            return;
        }
        let i = place.index();
        if self.counts.len() <= i {
            self.counts.resize(i + 1, 0);
        }
        self.counts[i] += n;
    }

    pub fn is_empty(&self) -> bool {
        self.counts.is_empty()
    }

    /// Total number of elements, `|m|`.
    pub fn size(&self) -> u32 {
        self.counts.iter().sum()
    }

    /// Multiset union: `(a ⊕ b)(s) = a(s) + b(s)`.
    pub fn sum(&self, other: &Multiset) -> Multiset {
        let len = self.counts.len().max(other.counts.len());
        let counts = (0..len)
            .map(|i| {
                self.counts.get(i).copied().unwrap_or(0) + other.counts.get(i).copied().unwrap_or(0)
            })
            .collect::<Vec<_>>();
        Multiset::from_counts(counts)
    }

    /// Truncated difference: `(a ⊖ b)(s) = max(a(s) − b(s), 0)`.
    pub fn difference(&self, other: &Multiset) -> Multiset {
        let counts = self
            .counts
            .iter()
            .enumerate()
            .map(|(i, &c)| c.saturating_sub(other.counts.get(i).copied().unwrap_or(0)))
            .collect::<Vec<_>>();
        Multiset::from_counts(counts)
    }

    /// `a ⊆ b` iff `a(s) ≤ b(s)` for every place.
    pub fn is_subset_of(&self, other: &Multiset) -> bool {
        self.counts
            .iter()
            .enumerate()
            .all(|(i, &c)| c <= other.counts.get(i).copied().unwrap_or(0))
    }

    pub fn scale(&self, j: u32) -> Multiset {
        Multiset::from_counts(self.counts.iter().map(|c| c * j).collect::<Vec<_>>())
    }

    /// Places with non-zero multiplicity, in ordinal order.
    pub fn support(&self) -> impl Iterator<Item = PlaceId> + '_ {
        self.iter().map(|(p, _)| p)
    }

    /// Non-zero entries in place order.
    pub fn iter(&self) -> impl Iterator<Item = (PlaceId, u32)> + '_ {
        self.counts
            .iter()
            .enumerate()
            .filter(|(_, &c)| c > 0)
            .map(|(i, &c)| (PlaceId(i as u32), c))
    }

    /// Every unit of the multiset, places repeated by multiplicity, in place order.
    pub fn units(&self) -> impl Iterator<Item = PlaceId> + '_ {
        self.iter()
            .flat_map(|(p, n)| std::iter::repeat_n(p, n as usize))
    }

    /// Largest multiplicity of any place.
    pub fn max_count(&self) -> u32 {
        self.counts.iter().copied().max().unwrap_or(0)
    }
}

impl fmt::Debug for Multiset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_empty() {
            return write!(f, "θ");
        }
        let parts: Vec<String> = self
            .iter()
            .map(|(p, n)| if n == 1 { format!("{p}") } else { format!("{n}·{p}") })
            .collect();
        write!(f, "{}", parts.join(" ⊕ "))
    }
}

impl FromIterator<PlaceId> for Multiset {
    fn from_iter<I: IntoIterator<Item = PlaceId>>(iter: I) -> Self {
        let mut m = Multiset::empty();
        for p in iter {
            m.add(p, 1);
        }
        m
    }
}
