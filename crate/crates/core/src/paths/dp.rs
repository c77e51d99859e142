use std::collections::BTreeMap;

use num_bigint::BigUint;
use num_traits::Zero;
use serde::Serialize;

use super::SiteSet;
use crate::error::{Error, Result};
use crate::subset::Subset;
use crate::transfer::punctured_cycle_matchings;

/// Largest `m` accepted by the path dynamic programme.
pub const PATH_CAP: usize = 12;

/// A start configuration realised by the left cap: the particles sit on the
/// cap vertices covered by m-gon edges, `multiplicity` counts those cap matchings.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct Boundary {
    pub sites: SiteSet,
    #[serde(skip)]
    pub slots: Subset,
    pub multiplicity: u64,
}

impl Boundary {
    pub fn n(&self) -> usize {
        self.slots.len()
    }
}

/// Start configurations of the left cap, by enumerating the `2^m` m-gon edge
/// subsets that are matchings. Sorted by size, then slot mask.
pub fn admissible_boundaries(m: usize) -> Vec<Boundary> {
    let mut found: BTreeMap<(usize, u32), u64> = BTreeMap::new();
    for edges in 0u32..1 << m {
        let mut covered = Subset::EMPTY;
        let mut ok = true;
        for l in Subset(edges).members() {
            let (a, b) = (l, (l + 1) % m);
            if covered.contains(a) || covered.contains(b) {
                ok = false;
                break;
            }
            covered = covered.with(a).with(b);
        }
        if ok {
            *found.entry((covered.len(), covered.0)).or_default() += 1;
        }
    }
    found
        .into_iter()
        .map(|((_, mask), multiplicity)| Boundary {
            sites: SiteSet::from_slots(m, Subset(mask), 0),
            slots: Subset(mask),
            multiplicity,
        })
        .collect()
}

/// Transfer structure for `n` walkers on `Z_{2m}`. States are slot subsets;
/// at time `t` slot `l` is site `2l + t`.
#[derive(Clone, Debug)]
pub struct PathDp {
    m: usize,
    n: usize,
    states: Vec<Subset>,
    /// `steps[t % 2][i]` lists `(j, w)`: from state `i` at time `t` to `j` at `t + 1`.
    steps: [Vec<Vec<(usize, u64)>>; 2],
}

impl PathDp {
    pub fn new(m: usize, n: usize) -> Result<PathDp> {
        if m > PATH_CAP {
            return Err(Error::TooLarge(format!("path dynamic programme limited to m <= {PATH_CAP}")));
        }
        if n > m {
            return Err(Error::InvalidParams(format!("{n} walkers on {m} slots")));
        }
        let states = Subset::all_of_size(m, n);
        let full = (1u64 << (2 * m)) - 1;
        let step = |t: usize| -> Vec<Vec<(usize, u64)>> {
            states
                .iter()
                .map(|&x| {
                    let xs = SiteSet::from_slots(m, x, t).mask();
                    states
                        .iter()
                        .enumerate()
                        .filter_map(|(j, &y)| {
                            let ys = SiteSet::from_slots(m, y, t + 1).mask();
                            let w = punctured_cycle_matchings(2 * m, full & !(xs | ys));
                            (w > 0).then_some((j, w))
                        })
                        .collect()
                })
                .collect()
        };
        let steps = [step(0), step(1)];
        Ok(PathDp { m, n, states, steps })
    }

    pub fn states(&self) -> &[Subset] {
        &self.states
    }

    fn index(&self, s: Subset) -> usize {
        self.states.binary_search_by_key(&s.0, |t| t.0).expect("state of the right size")
    }

    /// One time step from time `t` to `t + 1`.
    pub fn step(&self, v: &[BigUint], t: usize) -> Vec<BigUint> {
        let mut out = vec![BigUint::zero(); v.len()];
        for (i, row) in self.steps[t % 2].iter().enumerate() {
            if v[i].is_zero() {
                continue;
            }
            for &(j, w) in row {
                out[j] += &v[i] * w;
            }
        }
        out
    }

    /// Distribution at time `k + 1` of walkers started from `v` at time 0.
    pub fn evolve(&self, mut v: Vec<BigUint>, k: usize) -> Vec<BigUint> {
        for t in 0..=k {
            v = self.step(&v, t);
        }
        v
    }

    pub fn unit(&self, s: Subset) -> Vec<BigUint> {
        let mut v = vec![BigUint::zero(); self.states.len()];
        v[self.index(s)] = BigUint::from(1u8);
        v
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn n(&self) -> usize {
        self.n
    }
}

/// Number of `(k+1)`-step evolutions from `start` (time 0) to `end` (time `k+1`),
/// windings included.
pub fn path_dp_count(m: usize, k: usize, start: SiteSet, end: SiteSet) -> Result<BigUint> {
    if start.len() != end.len() {
        return Err(Error::SizeMismatch { start: start.len(), end: end.len() });
    }
    if start.m() != m || end.m() != m {
        return Err(Error::InvalidParams(format!("site sets on the wrong circle for m={m}")));
    }
    let (Some(ps), Some(pe)) = (start.parity(), end.parity()) else {
        return Err(Error::ParityViolation("site set mixes parities".into()));
    };
    if !start.is_empty() && (ps + k + 1) % 2 != pe {
        return Err(Error::ParityViolation(format!(
            "start parity {ps} cannot reach end parity {pe} in {} steps",
            k + 1
        )));
    }
    let dp = PathDp::new(m, start.len())?;
    let v = dp.evolve(dp.unit(start.slots(ps)), k);
    let end_slots = end.slots(ps + k + 1);
    Ok(v[dp.index(end_slots)].clone())
}

/// Sum over cap configurations at both ends of the path counts; the right cap
/// configurations are the left ones moved to time `k + 1`. The empty family
/// (all horizontal edges matched) enters as the `n = 0` pair.
pub fn total_via_paths(m: usize, k: usize) -> Result<BigUint> {
    if m > PATH_CAP {
        return Err(Error::TooLarge(format!("path dynamic programme limited to m <= {PATH_CAP}")));
    }
    let bounds = admissible_boundaries(m);
    let mut total = BigUint::zero();
    for n in (0..=m).filter(|&n| bounds.iter().any(|b| b.n() == n)) {
        let dp = PathDp::new(m, n)?;
        let mut v = vec![BigUint::zero(); dp.states().len()];
        for b in bounds.iter().filter(|b| b.n() == n) {
            v[dp.index(b.slots)] += b.multiplicity;
        }
        let out = dp.evolve(v, k);
        for b in bounds.iter().filter(|b| b.n() == n) {
            total += &out[dp.index(b.slots)] * b.multiplicity;
        }
    }
    Ok(total)
}
