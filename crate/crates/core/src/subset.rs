use std::fmt;

use serde::ser::{Serialize, SerializeSeq, Serializer};

/// A subset of `{0, .., m-1}` stored as a bit mask (bit `l` set iff `l` is a member).
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Subset(pub u32);

impl Subset {
    pub const EMPTY: Subset = Subset(0);

    pub fn full(m: usize) -> Subset {
        debug_assert!(m <= 32);
        if m == 32 {
            Subset(u32::MAX)
        } else {
            Subset((1u32 << m) - 1)
        }
    }

    pub fn from_members<I: IntoIterator<Item = usize>>(members: I) -> Subset {
        Subset(members.into_iter().fold(0, |acc, l| acc | (1 << l)))
    }

    pub fn contains(self, l: usize) -> bool {
        self.0 >> l & 1 == 1
    }

    pub fn len(self) -> usize {
        self.0.count_ones() as usize
    }

    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    pub fn with(self, l: usize) -> Subset {
        Subset(self.0 | 1 << l)
    }

    pub fn complement(self, m: usize) -> Subset {
        Subset(!self.0 & Subset::full(m).0)
    }

    /// Members in increasing order.
    pub fn members(self) -> impl Iterator<Item = usize> {
        let mut bits = self.0;
        std::iter::from_fn(move || {
            if bits == 0 {
                None
            } else {
                let l = bits.trailing_zeros() as usize;
                bits &= bits - 1;
                Some(l)
            }
        })
    }

    /// Image under the reflection `l -> m-1-l`.
    pub fn reflect(self, m: usize) -> Subset {
        Subset::from_members(self.members().map(|l| m - 1 - l))
    }

    /// Membership string of length `m`, position `l` is `'1'` iff `l` is a member.
    pub fn bit_string(self, m: usize) -> String {
        (0..m).map(|l| if self.contains(l) { '1' } else { '0' }).collect()
    }

    pub fn parse_bit_string(s: &str) -> Option<Subset> {
        s.chars().enumerate().try_fold(Subset::EMPTY, |acc, (l, ch)| match ch {
            '1' => Some(acc.with(l)),
            '0' => Some(acc),
            _ => None,
        })
    }

    /// All subsets of `{0, .., m-1}` of size `p`, in increasing mask order (colex).
    pub fn all_of_size(m: usize, p: usize) -> Vec<Subset> {
        (0u32..1 << m)
            .filter(|mask| mask.count_ones() as usize == p)
            .map(Subset)
            .collect()
    }
}

impl fmt::Display for Subset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("{")?;
        for (i, l) in self.members().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{l}")?;
        }
        f.write_str("}")
    }
}

/// Serialised as the sorted member list.
impl Serialize for Subset {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        let mut seq = serializer.serialize_seq(Some(self.len()))?;
        for l in self.members() {
            seq.serialize_element(&l)?;
        }
        seq.end()
    }
}
