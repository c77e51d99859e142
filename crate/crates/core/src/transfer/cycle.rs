//! Perfect matchings of punctured cycles.
//!
//! Deleting vertices from a cycle leaves a union of paths; a path has exactly
//! one perfect matching when it has an even number of vertices and none
//! otherwise. On the big cycle `C_{2m}` the edge `(w_{2i}, w_{2i+1})` carries
//! weight `b` and `(w_{2i+1}, w_{2i+2})` carries `c`.

use std::fmt;

use crate::subset::Subset;

/// `b^b c^c`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Monomial {
    pub b: u32,
    pub c: u32,
}

impl Monomial {
    pub fn degree(&self) -> u32 {
        self.b + self.c
    }

    pub fn eval(&self, b: f64, c: f64) -> f64 {
        b.powi(self.b as i32) * c.powi(self.c as i32)
    }
}

impl fmt::Display for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "b^{}c^{}", self.b, self.c)
    }
}

/// Sum of unit-coefficient monomials; the weight of one transfer entry.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct BlockWeight {
    pub terms: Vec<Monomial>,
}

impl BlockWeight {
    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Value at `b = c = 1`, i.e. the number of matchings.
    pub fn count(&self) -> u64 {
        self.terms.len() as u64
    }

    pub fn eval(&self, b: f64, c: f64) -> f64 {
        self.terms.iter().map(|t| t.eval(b, c)).sum()
    }
}

impl fmt::Display for BlockWeight {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        for (i, t) in self.terms.iter().enumerate() {
            if i > 0 {
                f.write_str("+")?;
            }
            write!(f, "{t}")?;
        }
        Ok(())
    }
}

/// Maximal runs of surviving vertices as `(first position, length)`, going
/// around the cycle from each deleted vertex. `None` when nothing is deleted.
fn runs(n: usize, deleted: u64) -> Option<Vec<(usize, usize)>> {
    if deleted == 0 {
        return None;
    }
    let holes: Vec<usize> = (0..n).filter(|&i| deleted >> i & 1 == 1).collect();
    Some(
        holes
            .iter()
            .enumerate()
            .map(|(a, &d)| {
                let next = holes[(a + 1) % holes.len()];
                ((d + 1) % n, (next + n - d - 1) % n)
            })
            .collect(),
    )
}

/// Number of perfect matchings of the `n`-cycle with the vertices in `deleted` removed.
pub fn punctured_cycle_matchings(n: usize, deleted: u64) -> u64 {
    match runs(n, deleted) {
        None => {
            if n.is_multiple_of(2) {
                2
            } else {
                0
            }
        }
        Some(runs) => u64::from(runs.iter().all(|&(_, len)| len % 2 == 0)),
    }
}

/// Matched edges of the punctured `n`-cycle, as `(position, position + 1)`
/// pairs. With nothing deleted there are two matchings; `start` picks the one
/// whose edges begin at even (`0`) or odd (`1`) positions. `None` when the
/// punctured cycle has no perfect matching.
pub fn punctured_cycle_matching(n: usize, deleted: u64, start: usize) -> Option<Vec<(usize, usize)>> {
    match runs(n, deleted) {
        None => n.is_multiple_of(2).then(|| (0..n / 2).map(|i| ((2 * i + start) % n, (2 * i + start + 1) % n)).collect()),
        Some(runs) => {
            if runs.iter().any(|&(_, len)| len % 2 == 1) {
                return None;
            }
            Some(
                runs.iter()
                    .flat_map(|&(s, len)| (0..len / 2).map(move |i| ((s + 2 * i) % n, (s + 2 * i + 1) % n)))
                    .collect(),
            )
        }
    }
}

/// Vertices of `C_{2m}` removed by the boundary subsets: left-layer members
/// `l` of `left` occupy even positions `2l`, right-layer members occupy `2l+1`.
pub fn cycle_deletions(left: Subset, right: Subset) -> u64 {
    let mut mask = 0u64;
    for l in left.members() {
        mask |= 1 << (2 * l);
    }
    for l in right.members() {
        mask |= 1 << (2 * l + 1);
    }
    mask
}

/// `<S|A|T>`: perfect matchings of one big cycle once the vertices attached to
/// the matched horizontal edges on its left (`s`) and right (`t`) are removed.
pub fn cycle_block_entry(m: usize, s: Subset, t: Subset) -> u64 {
    punctured_cycle_matchings(2 * m, cycle_deletions(s, t))
}

/// `<S|B|T>` as a sum of `b^i c^j` monomials.
pub fn weighted_block_entry(m: usize, s: Subset, t: Subset) -> BlockWeight {
    let n = 2 * m;
    let terms = match runs(n, cycle_deletions(s, t)) {
        None => vec![Monomial { b: m as u32, c: 0 }, Monomial { b: 0, c: m as u32 }],
        Some(runs) => {
            if runs.iter().any(|&(_, len)| len % 2 == 1) {
                Vec::new()
            } else {
                let mut mono = Monomial { b: 0, c: 0 };
                for (start, len) in runs {
                    if start % 2 == 0 {
                        mono.b += (len / 2) as u32;
                    } else {
                        mono.c += (len / 2) as u32;
                    }
                }
                vec![mono]
            }
        }
    };
    BlockWeight { terms }
}

/// `omega_S`: perfect matchings of the cap cycle `C_m` with the vertices
/// carrying matched pendant edges removed.
pub fn cap_entry(m: usize, s: Subset) -> u64 {
    punctured_cycle_matchings(m, u64::from(s.0))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn set(members: &[usize]) -> Subset {
        Subset::from_members(members.iter().copied())
    }

    /// Brute force over edge subsets of the cycle.
    fn oracle(n: usize, deleted: u64) -> u64 {
        let mut count = 0;
        for edges in 0u64..1 << n {
            let mut covered = 0u64;
            let mut ok = true;
            for i in (0..n).filter(|&i| edges >> i & 1 == 1) {
                let pair = 1 << i | 1 << ((i + 1) % n);
                if covered & pair != 0 || deleted & pair != 0 {
                    ok = false;
                    break;
                }
                covered |= pair;
            }
            if ok && covered | deleted == (1 << n) - 1 {
                count += 1;
            }
        }
        count
    }

    #[test]
    fn matcher_agrees_with_edge_subset_oracle() {
        for n in 3..=10 {
            for deleted in 0u64..1 << n {
                assert_eq!(punctured_cycle_matchings(n, deleted), oracle(n, deleted), "n={n} deleted={deleted:b}");
            }
        }
    }

    #[test]
    fn explicit_matching_is_consistent() {
        for n in 3..=10 {
            for deleted in 0u64..1 << n {
                let count = punctured_cycle_matchings(n, deleted);
                let found = [0, 1]
                    .iter()
                    .filter_map(|&s| punctured_cycle_matching(n, deleted, s))
                    .collect::<std::collections::BTreeSet<_>>();
                assert_eq!(found.len() as u64, count.min(2));
                for mm in found {
                    let mut covered = deleted;
                    for (a, b) in mm {
                        assert_eq!(covered & (1 << a | 1 << b), 0);
                        covered |= 1 << a | 1 << b;
                    }
                    assert_eq!(covered, (1 << n) - 1);
                }
            }
        }
    }

    #[test]
    fn block_entries() {
        for m in 3..=7 {
            assert_eq!(cycle_block_entry(m, Subset::EMPTY, Subset::EMPTY), 2);
        }
        assert_eq!(cycle_block_entry(3, set(&[0]), set(&[0])), 1);
        assert_eq!(cycle_block_entry(4, set(&[0]), set(&[0, 1])), 0);
        assert_eq!(cycle_block_entry(5, set(&[0, 2, 4]), set(&[1])), 0);
    }

    #[test]
    fn weighted_entries() {
        let w = weighted_block_entry(5, Subset::EMPTY, Subset::EMPTY);
        assert_eq!(w.to_string(), "b^5c^0+b^0c^5");
        let w = weighted_block_entry(3, set(&[0]), set(&[0]));
        assert_eq!(w.terms.len(), 1);
        assert_eq!(w.terms[0].degree(), 2);
        for m in 3..=6 {
            for s in 0u32..1 << m {
                for t in 0u32..1 << m {
                    let (s, t) = (Subset(s), Subset(t));
                    let w = weighted_block_entry(m, s, t);
                    assert_eq!(w.count(), cycle_block_entry(m, s, t));
                    if !w.is_zero() && !s.is_empty() {
                        assert_eq!(w.terms.len(), 1);
                        assert_eq!(w.terms[0].degree() as usize, m - s.len());
                    }
                }
            }
        }
    }

    #[test]
    fn cap_entries() {
        assert_eq!(cap_entry(3, Subset::EMPTY), 0);
        for l in 0..3 {
            assert_eq!(cap_entry(3, set(&[l])), 1);
        }
        assert_eq!(cap_entry(3, set(&[0, 1, 2])), 1);
        assert_eq!(cap_entry(3, set(&[0, 1])), 0);
        assert_eq!(cap_entry(4, Subset::EMPTY), 2);
        assert_eq!(cap_entry(4, set(&[0, 2])), 0);
        assert_eq!(cap_entry(4, set(&[0, 1])), 1);
    }
}
