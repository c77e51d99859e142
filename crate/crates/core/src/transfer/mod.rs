//! Transfer-matrix counting: `Phi(F(m,k)) = <Ω| A^{k+1} |Ω>`.

mod closed_form;
mod cycle;
mod operator;
mod sampler;

pub use closed_form::{closed_form_345, closed_form_sectors};
pub use cycle::{
    cap_entry, cycle_block_entry, cycle_deletions, punctured_cycle_matching,
    punctured_cycle_matchings, weighted_block_entry, BlockWeight, Monomial,
};
pub use operator::{
    build_transfer, build_transfer_on, build_transfer_with_cap, EntryValue, OperatorMode,
    StateSpace, TransferOperator, DEFAULT_TRANSFER_CAP,
};
pub use sampler::{sample_uniform, sample_uniform_many, UniformSampler};

use num_bigint::BigUint;
use num_traits::Zero;

use crate::error::{Error, Result};
use crate::subset::Subset;

/// Arbitrary-precision matching count.
pub type BigCount = BigUint;

/// `omega_S` for every subset `S` of the pendant edges of a cap.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BoundaryVector {
    m: usize,
    weights: Vec<u64>,
}

impl BoundaryVector {
    pub fn m(&self) -> usize {
        self.m
    }

    pub fn get(&self, s: Subset) -> u64 {
        self.weights[s.0 as usize]
    }

    /// Non-zero entries in increasing mask order.
    pub fn support(&self) -> impl Iterator<Item = (Subset, u64)> + '_ {
        self.weights
            .iter()
            .enumerate()
            .filter(|(_, &w)| w != 0)
            .map(|(s, &w)| (Subset(s as u32), w))
    }
}

pub fn boundary_vector(m: usize) -> Result<BoundaryVector> {
    if m == 0 || m > 31 {
        return Err(Error::TooLarge(format!("boundary vector for m = {m}")));
    }
    let weights = (0u32..1 << m).map(|s| cap_entry(m, Subset(s))).collect();
    Ok(BoundaryVector { m, weights })
}

/// Reusable counter: the operator restricted to the parity of `m` plus `Ω`.
#[derive(Clone, Debug)]
pub struct TransferCounter {
    op: TransferOperator,
    omega: Vec<BigUint>,
}

impl TransferCounter {
    pub fn new(m: usize) -> Result<Self> {
        let op = build_transfer_on(m, OperatorMode::Exact, StateSpace::MatchingParity)?;
        Self::from_operator(op)
    }

    pub fn from_operator(op: TransferOperator) -> Result<Self> {
        let bv = boundary_vector(op.m())?;
        let omega = op.states().iter().map(|&s| BigUint::from(bv.get(s))).collect();
        Ok(TransferCounter { op, omega })
    }

    pub fn operator(&self) -> &TransferOperator {
        &self.op
    }

    pub fn omega(&self) -> &[BigUint] {
        &self.omega
    }

    fn restricted_omega(&self, p: Option<usize>) -> Vec<BigUint> {
        self.op
            .states()
            .iter()
            .zip(&self.omega)
            .map(|(s, w)| if p.is_none_or(|p| s.len() == p) { w.clone() } else { BigUint::zero() })
            .collect()
    }

    fn inner(a: &[BigUint], b: &[BigUint]) -> BigUint {
        a.iter().zip(b).filter(|(x, _)| !x.is_zero()).map(|(x, y)| x * y).sum()
    }

    /// `Phi(F(m,k))` for every `k` in `0 ..= k_max`.
    pub fn counts_up_to(&self, k_max: usize) -> Vec<BigUint> {
        self.sector_counts_up_to(None, k_max)
    }

    fn sector_counts_up_to(&self, p: Option<usize>, k_max: usize) -> Vec<BigUint> {
        let start = self.restricted_omega(p);
        let mut v = start.clone();
        (0..=k_max)
            .map(|_| {
                v = self.op.apply_exact(&v);
                Self::inner(&start, &v)
            })
            .collect()
    }

    pub fn count(&self, k: usize) -> BigUint {
        self.counts_up_to(k).pop().expect("non-empty")
    }

    pub fn sector_count(&self, k: usize, p: usize) -> Result<BigUint> {
        let m = self.op.m();
        if p > m || p % 2 != m % 2 {
            return Err(Error::BadParity { m, p });
        }
        Ok(self.sector_counts_up_to(Some(p), k).pop().expect("non-empty"))
    }
}

/// Exact `Phi(F(m,k))` by `k+1` sparse applications of `A` to `Ω`.
pub fn count_matchings_transfer(m: usize, k: usize) -> Result<BigCount> {
    Ok(TransferCounter::new(m)?.count(k))
}

/// Number of perfect matchings whose horizontal layers all have `p` edges.
pub fn sector_count(m: usize, k: usize, p: usize) -> Result<BigCount> {
    TransferCounter::new(m)?.sector_count(k, p)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn boundary_vector_entries() {
        let bv = boundary_vector(3).unwrap();
        for l in 0..3 {
            assert_eq!(bv.get(Subset::from_members([l])), 1);
        }
        assert_eq!(bv.get(Subset::full(3)), 1);
        for s in Subset::all_of_size(3, 0).into_iter().chain(Subset::all_of_size(3, 2)) {
            assert_eq!(bv.get(s), 0);
        }
        let bv = boundary_vector(4).unwrap();
        assert_eq!(bv.get(Subset::EMPTY), 2);
        assert_eq!(bv.get(Subset::from_members([0, 2])), 0);
        assert_eq!(bv.get(Subset::from_members([0, 1])), 1);
    }

    #[test]
    fn boundary_vector_invariants() {
        for m in 3..=12 {
            let bv = boundary_vector(m).unwrap();
            assert_eq!(bv.get(Subset::full(m)), 1);
            assert_eq!(bv.get(Subset::EMPTY), if m % 2 == 0 { 2 } else { 0 });
            for (s, _) in bv.support() {
                assert_eq!((m - s.len()) % 2, 0);
            }
        }
    }

    #[test]
    fn transfer_counts() {
        assert_eq!(count_matchings_transfer(3, 1).unwrap(), BigUint::from(28u32));
        assert_eq!(count_matchings_transfer(5, 1).unwrap(), BigUint::from(151u32));
        assert_eq!(count_matchings_transfer(3, 0).unwrap(), BigUint::from(10u32));
    }

    #[test]
    fn sector_counts() {
        for k in 0..6 {
            assert_eq!(sector_count(3, k, 3).unwrap(), BigUint::from(1u32));
            assert_eq!(sector_count(4, k, 0).unwrap(), BigUint::from(1u64 << (k + 3)));
        }
        let total: BigUint = [1, 3, 5].iter().map(|&p| sector_count(5, 2, p).unwrap()).sum();
        assert_eq!(total, count_matchings_transfer(5, 2).unwrap());
        assert_eq!(sector_count(5, 2, 2), Err(Error::BadParity { m: 5, p: 2 }));
    }

    #[test]
    fn sectors_match_closed_form_decomposition() {
        for m in 3..=5 {
            let counter = TransferCounter::new(m).unwrap();
            for k in 0..=10 {
                for (p, expected) in closed_form_sectors(m, k).unwrap() {
                    assert_eq!(counter.sector_count(k, p).unwrap(), expected, "m={m} k={k} p={p}");
                }
            }
        }
    }
}
