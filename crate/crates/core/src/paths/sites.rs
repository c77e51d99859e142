use std::fmt;

use serde::{Serialize, Serializer};

use crate::subset::Subset;

/// A set of sites on the circle `Z_{2m}`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct SiteSet {
    m: usize,
    mask: u64,
}

impl SiteSet {
    pub fn empty(m: usize) -> SiteSet {
        SiteSet { m, mask: 0 }
    }

    pub fn from_sites<I: IntoIterator<Item = usize>>(m: usize, sites: I) -> SiteSet {
        let mask = sites.into_iter().fold(0u64, |acc, y| acc | 1 << (y % (2 * m)));
        SiteSet { m, mask }
    }

    /// Sites `2l + t` for the slots `l` of `slots`.
    pub fn from_slots(m: usize, slots: Subset, t: usize) -> SiteSet {
        SiteSet::from_sites(m, slots.members().map(|l| 2 * l + t))
    }

    /// Inverse of [`SiteSet::from_slots`]; sites of the other parity are dropped.
    pub fn slots(self, t: usize) -> Subset {
        let n2 = 2 * self.m;
        Subset::from_members(
            self.sites()
                .filter(|&y| (y + n2 - t % n2).is_multiple_of(2))
                .map(|y| ((y + n2 - t % n2) % n2) / 2),
        )
    }

    pub fn m(self) -> usize {
        self.m
    }

    pub fn mask(self) -> u64 {
        self.mask
    }

    pub fn len(self) -> usize {
        self.mask.count_ones() as usize
    }

    pub fn is_empty(self) -> bool {
        self.mask == 0
    }

    pub fn contains(self, y: usize) -> bool {
        self.mask >> y & 1 == 1
    }

    pub fn sites(self) -> impl Iterator<Item = usize> {
        let mask = self.mask;
        (0..2 * self.m).filter(move |&y| mask >> y & 1 == 1)
    }

    /// Common parity of the sites; `None` for mixed sets, `Some(0)` for the empty set.
    pub fn parity(self) -> Option<usize> {
        let even = self.sites().filter(|y| y % 2 == 0).count();
        match (even, self.len()) {
            (0, 0) => Some(0),
            (e, n) if e == n => Some(0),
            (0, _) => Some(1),
            _ => None,
        }
    }

    /// Every site moved by `t` (mod `2m`).
    pub fn shifted(self, t: usize) -> SiteSet {
        SiteSet::from_sites(self.m, self.sites().map(|y| y + t))
    }

    /// Sites in decreasing order.
    pub fn decreasing(self) -> Vec<usize> {
        let mut v: Vec<usize> = self.sites().collect();
        v.reverse();
        v
    }
}

impl fmt::Display for SiteSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.sites().map(|y| y.to_string()).collect();
        write!(f, "{{{}}}", parts.join(","))
    }
}

impl Serialize for SiteSet {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_seq(self.sites())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn slot_round_trip() {
        for t in 0..7 {
            for mask in 0..16u32 {
                let s = Subset(mask);
                let sites = SiteSet::from_slots(4, s, t);
                assert_eq!(sites.slots(t), s);
                assert_eq!(sites.parity(), Some(if s.is_empty() { 0 } else { t % 2 }));
            }
        }
    }

    #[test]
    fn parity_and_shift() {
        let s = SiteSet::from_sites(3, [0, 2]);
        assert_eq!(s.shifted(1), SiteSet::from_sites(3, [1, 3]));
        assert_eq!(s.shifted(5), SiteSet::from_sites(3, [5, 1]));
        assert_eq!(SiteSet::from_sites(3, [0, 1]).parity(), None);
        assert_eq!(s.to_string(), "{0,2}");
        assert_eq!(s.decreasing(), vec![2, 0]);
    }
}
