use std::fmt::Write;

use nalgebra::DMatrix;
use num_bigint::BigUint;
use rayon::prelude::*;

use super::cycle::{weighted_block_entry, BlockWeight, Monomial};
use crate::error::{Error, Result};
use crate::subset::Subset;

/// Largest `m` for which the full `2^m` state space is materialised.
pub const DEFAULT_TRANSFER_CAP: usize = 16;

#[derive(Clone, Copy, Debug, PartialEq)]
pub enum OperatorMode {
    /// The counting matrix `A`.
    Exact,
    /// `B` with symbolic `b^i c^j` entries.
    Monomial,
    /// `B` evaluated at fixed weights.
    Numeric { b: f64, c: f64 },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum StateSpace {
    /// All `2^m` subsets.
    Full,
    /// Subsets whose size has the parity of `m`; the only ones reachable from the caps.
    MatchingParity,
    /// Subsets of one fixed size.
    Sector(usize),
}

/// Entry value in the representation selected by the operator mode.
#[derive(Clone, Debug, PartialEq)]
pub enum EntryValue {
    Count(u64),
    Polynomial(BlockWeight),
    Real(f64),
}

/// Sparse subset-indexed transfer operator. Row `S` lists the `T` with
/// `<S|A|T> != 0`; the `(b,c)`-weight of each entry is stored as monomials
/// (the `(∅,∅)` entry appears twice, once per term of `b^m + c^m`).
#[derive(Clone, Debug)]
pub struct TransferOperator {
    m: usize,
    mode: OperatorMode,
    states: Vec<Subset>,
    index: Vec<u32>,
    rows: Vec<Vec<(u32, Monomial)>>,
}

const ABSENT: u32 = u32::MAX;

/// Subsets `T` interlacing with a non-empty `s`: between consecutive members
/// `s_i < s_{i+1}` (cyclically) there is exactly one `t` with `s_i <= t < s_{i+1}`.
fn interlacing(m: usize, s: Subset) -> Vec<Subset> {
    let members: Vec<usize> = s.members().collect();
    let p = members.len();
    let mut out = vec![Subset::EMPTY];
    for i in 0..p {
        let lo = members[i];
        let hi = if i + 1 < p { members[i + 1] } else { members[0] + m };
        out = out
            .into_iter()
            .flat_map(|acc| (lo..hi).map(move |t| acc.with(t % m)))
            .collect();
    }
    out
}

pub fn build_transfer(m: usize, mode: OperatorMode) -> Result<TransferOperator> {
    build_transfer_on(m, mode, StateSpace::Full)
}

pub fn build_transfer_on(m: usize, mode: OperatorMode, space: StateSpace) -> Result<TransferOperator> {
    build_transfer_with_cap(m, mode, space, DEFAULT_TRANSFER_CAP)
}

pub fn build_transfer_with_cap(
    m: usize,
    mode: OperatorMode,
    space: StateSpace,
    cap: usize,
) -> Result<TransferOperator> {
    if m > cap || m > 31 {
        return Err(Error::TooLarge(format!("m = {m} exceeds the transfer cap of {cap}")));
    }
    if m == 0 {
        return Err(Error::InvalidParams("m must be positive".into()));
    }
    let keep = |s: Subset| match space {
        StateSpace::Full => true,
        StateSpace::MatchingParity => s.len() % 2 == m % 2,
        StateSpace::Sector(p) => s.len() == p,
    };
    let states: Vec<Subset> = (0u32..1 << m).map(Subset).filter(|&s| keep(s)).collect();
    let mut index = vec![ABSENT; 1 << m];
    for (i, s) in states.iter().enumerate() {
        index[s.0 as usize] = i as u32;
    }
    let rows = states
        .par_iter()
        .map(|&s| {
            let targets = if s.is_empty() { vec![Subset::EMPTY] } else { interlacing(m, s) };
            let mut row = Vec::with_capacity(targets.len());
            for t in targets {
                let col = index[t.0 as usize];
                debug_assert_ne!(col, ABSENT, "interlacing preserves size");
                for mono in weighted_block_entry(m, s, t).terms {
                    row.push((col, mono));
                }
            }
            row.sort_unstable_by_key(|&(col, mono)| (col, mono));
            row
        })
        .collect();
    Ok(TransferOperator { m, mode, states, index, rows })
}

impl TransferOperator {
    pub fn m(&self) -> usize {
        self.m
    }

    pub fn mode(&self) -> OperatorMode {
        self.mode
    }

    pub fn states(&self) -> &[Subset] {
        &self.states
    }

    pub fn dim(&self) -> usize {
        self.states.len()
    }

    pub fn state_index(&self, s: Subset) -> Option<usize> {
        self.index.get(s.0 as usize).copied().filter(|&i| i != ABSENT).map(|i| i as usize)
    }

    /// Number of stored (row, column, monomial) triples.
    pub fn nnz(&self) -> usize {
        self.rows.iter().map(Vec::len).sum()
    }

    /// Row `S` grouped into `(T, weight)` pairs.
    pub fn row(&self, s: Subset) -> Vec<(Subset, BlockWeight)> {
        let Some(i) = self.state_index(s) else {
            return Vec::new();
        };
        let mut out: Vec<(Subset, BlockWeight)> = Vec::new();
        for &(col, mono) in &self.rows[i] {
            let t = self.states[col as usize];
            match out.last_mut() {
                Some((last, w)) if *last == t => w.terms.push(mono),
                _ => out.push((t, BlockWeight { terms: vec![mono] })),
            }
        }
        out
    }

    pub fn weight(&self, s: Subset, t: Subset) -> BlockWeight {
        let (Some(i), Some(j)) = (self.state_index(s), self.state_index(t)) else {
            return BlockWeight::default();
        };
        BlockWeight {
            terms: self.rows[i].iter().filter(|&&(col, _)| col as usize == j).map(|&(_, m)| m).collect(),
        }
    }

    pub fn count(&self, s: Subset, t: Subset) -> u64 {
        self.weight(s, t).count()
    }

    pub fn entry(&self, s: Subset, t: Subset) -> EntryValue {
        let w = self.weight(s, t);
        match self.mode {
            OperatorMode::Exact => EntryValue::Count(w.count()),
            OperatorMode::Monomial => EntryValue::Polynomial(w),
            OperatorMode::Numeric { b, c } => EntryValue::Real(w.eval(b, c)),
        }
    }

    /// `v -> A v` over big integers; `v` is indexed like [`TransferOperator::states`].
    pub fn apply_exact(&self, v: &[BigUint]) -> Vec<BigUint> {
        assert_eq!(v.len(), self.dim());
        self.rows
            .par_iter()
            .map(|row| {
                let mut acc = BigUint::default();
                for &(col, _) in row {
                    acc += &v[col as usize];
                }
                acc
            })
            .collect()
    }

    /// `v -> B(b,c) v` in floating point.
    pub fn apply_numeric(&self, b: f64, c: f64, v: &[f64]) -> Vec<f64> {
        assert_eq!(v.len(), self.dim());
        self.rows
            .iter()
            .map(|row| row.iter().map(|&(col, mono)| mono.eval(b, c) * v[col as usize]).sum())
            .collect()
    }

    /// Dense block of `B(b,c)` on the subsets of size `p`, rows and columns
    /// ordered by increasing mask.
    pub fn numeric_block(&self, p: usize, b: f64, c: f64) -> (Vec<Subset>, DMatrix<f64>) {
        let basis: Vec<Subset> = self.states.iter().copied().filter(|s| s.len() == p).collect();
        let pos = |s: Subset| basis.binary_search(&s).ok();
        let mut block = DMatrix::zeros(basis.len(), basis.len());
        for (r, &s) in basis.iter().enumerate() {
            let i = self.state_index(s).expect("basis subset is a state");
            for &(col, mono) in &self.rows[i] {
                if let Some(cidx) = pos(self.states[col as usize]) {
                    block[(r, cidx)] += mono.eval(b, c);
                }
            }
        }
        (basis, block)
    }

    /// Whether `<S|A|T> = <T|A|S>` for every pair.
    pub fn is_symmetric(&self) -> bool {
        self.states.iter().all(|&s| self.row(s).iter().all(|(t, w)| self.count(*t, s) == w.count()))
    }

    /// Whether the reflection `l -> m-1-l` conjugates `A` to its transpose:
    /// `<R S|A|R T> = <T|A|S>` for all pairs.
    pub fn reflection_conjugates_to_transpose(&self) -> bool {
        let m = self.m;
        self.states.iter().all(|&s| {
            let row = self.row(s);
            // Every non-zero entry maps to a matching transposed entry, and the
            // transposed row has no extra entries.
            let reflected = self.row(s.reflect(m));
            row.iter().all(|(t, w)| self.count(t.reflect(m), s.reflect(m)) == w.count())
                && reflected.iter().all(|(t, w)| self.count(t.reflect(m), s) == w.count())
        })
    }

    /// Perturbs the first stored entry; used to exercise failure paths of the validator.
    pub fn corrupt_first_entry(&mut self) {
        if let Some(row) = self.rows.iter_mut().find(|r| !r.is_empty()) {
            let first = row[0];
            row.push(first);
        }
    }

    /// Debug dump: one line `S T weight` per non-zero entry, subsets as
    /// membership bit strings of length `m`.
    pub fn dump(&self) -> String {
        let mut out = String::new();
        for &s in &self.states {
            for (t, w) in self.row(s) {
                let value = match self.mode {
                    OperatorMode::Exact => w.count().to_string(),
                    OperatorMode::Monomial => w.to_string(),
                    OperatorMode::Numeric { b, c } => format!("{:.16e}", w.eval(b, c)),
                };
                let _ = writeln!(out, "{} {} {}", s.bit_string(self.m), t.bit_string(self.m), value);
            }
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::transfer::cycle::cycle_block_entry;

    #[test]
    fn block_sizes_are_binomial() {
        let op = build_transfer(3, OperatorMode::Exact).unwrap();
        let sizes: Vec<usize> = (0..=3).map(|p| op.states().iter().filter(|s| s.len() == p).count()).collect();
        assert_eq!(sizes, vec![1, 3, 3, 1]);
        let op = build_transfer(4, OperatorMode::Exact).unwrap();
        let (basis, block) = op.numeric_block(2, 1.0, 1.0);
        assert_eq!(basis.len(), 6);
        assert_eq!(block.shape(), (6, 6));
    }

    #[test]
    fn generator_matches_direct_entries() {
        for m in 3..=8 {
            let op = build_transfer(m, OperatorMode::Exact).unwrap();
            for s in 0u32..1 << m {
                for t in 0u32..1 << m {
                    let (s, t) = (Subset(s), Subset(t));
                    let direct = cycle_block_entry(m, s, t);
                    assert_eq!(op.count(s, t), direct, "m={m} S={s} T={t}");
                    if direct != 0 {
                        assert_eq!(s.len(), t.len());
                    }
                }
            }
        }
    }

    #[test]
    fn entries_are_zero_one_or_two() {
        for m in 3..=9 {
            let op = build_transfer(m, OperatorMode::Exact).unwrap();
            for &s in op.states() {
                for (t, w) in op.row(s) {
                    let v = w.count();
                    assert!(v == 1 || (v == 2 && s.is_empty() && t.is_empty()));
                }
            }
        }
    }

    /// `B|l> = sum_{l'<=l} c^{l-l'} b^{m-1+l'-l} |l'> + sum_{l'>l} b^{l'-l-1} c^{m+l-l'} |l'>`.
    #[test]
    fn singleton_action_matches_closed_expression() {
        for m in 3..=9 {
            let op = build_transfer(m, OperatorMode::Monomial).unwrap();
            for l in 0..m {
                for lp in 0..m {
                    let expected = if lp <= l {
                        Monomial { b: (m - 1 + lp - l) as u32, c: (l - lp) as u32 }
                    } else {
                        Monomial { b: (lp - l - 1) as u32, c: (m + l - lp) as u32 }
                    };
                    let w = op.weight(Subset::from_members([lp]), Subset::from_members([l]));
                    assert_eq!(w.terms, vec![expected], "m={m} l={l} l'={lp}");
                }
            }
        }
    }

    #[test]
    fn empty_sector_weight() {
        let op = build_transfer(6, OperatorMode::Monomial).unwrap();
        let w = op.weight(Subset::EMPTY, Subset::EMPTY);
        assert_eq!(w.to_string(), "b^0c^6+b^6c^0");
        assert!((w.eval(2.0, 0.5) - (64.0 + 1.0 / 64.0)).abs() < 1e-12);
    }

    #[test]
    fn reflection_similarity_and_symmetry_report() {
        for m in 3..=10 {
            let op = build_transfer(m, OperatorMode::Exact).unwrap();
            assert!(op.reflection_conjugates_to_transpose(), "m={m}");
        }
        // The literal entrywise symmetry fails once a sector has two members.
        assert!(!build_transfer(4, OperatorMode::Exact).unwrap().is_symmetric());
    }

    #[test]
    fn numeric_block_spectrum_is_conjugation_closed() {
        for m in 3..=7 {
            let op = build_transfer(m, OperatorMode::Exact).unwrap();
            for p in 0..=m {
                let (_, block) = op.numeric_block(p, 1.3, 0.7);
                let eig = block.complex_eigenvalues();
                for z in eig.iter() {
                    let closest = eig.iter().map(|w| (w - z.conj()).norm()).fold(f64::INFINITY, f64::min);
                    assert!(closest < 1e-9, "m={m} p={p} eigenvalue {z}");
                }
            }
        }
    }

    #[test]
    fn cap_is_enforced() {
        assert!(matches!(build_transfer(17, OperatorMode::Exact), Err(Error::TooLarge(_))));
    }

    #[test]
    fn dump_format() {
        let op = build_transfer(3, OperatorMode::Exact).unwrap();
        let text = op.dump();
        assert!(text.lines().any(|l| l == "000 000 2"));
        assert!(text.lines().all(|l| l.split(' ').count() == 3));
        let first_singleton = text.lines().find(|l| l.starts_with("100 ")).unwrap();
        assert_eq!(first_singleton.split(' ').nth(2), Some("1"));
    }
}
