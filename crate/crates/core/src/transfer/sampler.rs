//! Exact uniform sampling of perfect matchings.
//!
//! Suffix vectors `f_j = A^j Ω` give, for every layer subset, the number of
//! completions to the right. Layers `S_0, .., S_{k+1}` are drawn left to right
//! with probabilities proportional to these big-integer weights, then the
//! forced cycle and cap matchings are filled in; the only remaining freedom
//! is the two-way choice on an unpunctured even cycle.

use num_bigint::BigUint;
use num_traits::Zero;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::cycle::{cycle_deletions, punctured_cycle_matching, punctured_cycle_matchings};
use super::TransferCounter;
use crate::error::Result;
use crate::graph::{build_graph, BarrelGraph, BarrelParams, Matching, VertexLabel};

pub struct UniformSampler {
    graph: BarrelGraph,
    counter: TransferCounter,
    /// `suffix[j] = A^j Ω`.
    suffix: Vec<Vec<BigUint>>,
}

/// Uniform integer in `[0, n)`, `n > 0`, by rejection on `n.bits()` random bits.
fn uniform_below<R: Rng + ?Sized>(rng: &mut R, n: &BigUint) -> BigUint {
    let bits = n.bits();
    let words = bits.div_ceil(32) as usize;
    let top = bits % 32;
    loop {
        let mut digits: Vec<u32> = (0..words).map(|_| rng.random()).collect();
        if top != 0 {
            if let Some(last) = digits.last_mut() {
                *last &= (1u32 << top) - 1;
            }
        }
        let candidate = BigUint::new(digits);
        if &candidate < n {
            return candidate;
        }
    }
}

/// Index drawn with probability proportional to `weights[i]`.
fn choose<R: Rng + ?Sized>(rng: &mut R, weights: &[BigUint]) -> usize {
    let total: BigUint = weights.iter().sum();
    assert!(!total.is_zero(), "no admissible continuation");
    let mut r = uniform_below(rng, &total);
    for (i, w) in weights.iter().enumerate() {
        if &r < w {
            return i;
        }
        r -= w;
    }
    unreachable!("r < total")
}

impl UniformSampler {
    pub fn new(params: BarrelParams) -> Result<Self> {
        let graph = build_graph(params)?;
        let counter = TransferCounter::new(params.m)?;
        let mut suffix = vec![counter.omega().to_vec()];
        for _ in 0..=params.k {
            let next = counter.operator().apply_exact(suffix.last().expect("non-empty"));
            suffix.push(next);
        }
        Ok(UniformSampler { graph, counter, suffix })
    }

    pub fn graph(&self) -> &BarrelGraph {
        &self.graph
    }

    /// Total number of matchings, `<Ω|A^{k+1}|Ω>`.
    pub fn total(&self) -> BigUint {
        self.counter
            .omega()
            .iter()
            .zip(&self.suffix[self.graph.k() + 1])
            .map(|(a, b)| a * b)
            .sum()
    }

    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> Matching {
        let (m, k) = (self.graph.m(), self.graph.k());
        let op = self.counter.operator();
        let states = op.states();

        // Left cap and S_0.
        let weights: Vec<BigUint> = self
            .counter
            .omega()
            .iter()
            .zip(&self.suffix[k + 1])
            .map(|(w, f)| w * f)
            .collect();
        let mut layers = vec![states[choose(rng, &weights)]];
        for j in 1..=k + 1 {
            let prev = *layers.last().expect("non-empty");
            let row = op.row(prev);
            let weights: Vec<BigUint> = row
                .iter()
                .map(|(t, w)| {
                    let idx = op.state_index(*t).expect("state");
                    &self.suffix[k + 1 - j][idx] * w.count()
                })
                .collect();
            layers.push(row[choose(rng, &weights)].0);
        }

        let g = &self.graph;
        let mut edges = Vec::with_capacity(g.vertex_count() / 2);
        for (j, s) in layers.iter().enumerate() {
            edges.extend(s.members().map(|l| g.horizontal_edge(j, l)));
        }
        let mut flip = |n: usize, deleted: u64| -> Vec<(usize, usize)> {
            let start = if punctured_cycle_matchings(n, deleted) == 2 { rng.random_range(0..2) } else { 0 };
            punctured_cycle_matching(n, deleted, start).expect("weighted choice keeps matchings feasible")
        };
        let mut push = |a: VertexLabel, b: VertexLabel| {
            let e = g.edge_between(g.index_of(a), g.index_of(b)).expect("cycle edge");
            edges.push(e);
        };
        for (a, b) in flip(m, u64::from(layers[0].0)) {
            push(VertexLabel::LeftCap(a), VertexLabel::LeftCap(b));
        }
        for j in 1..=k + 1 {
            for (a, b) in flip(2 * m, cycle_deletions(layers[j - 1], layers[j])) {
                push(VertexLabel::Cycle { layer: j, pos: a }, VertexLabel::Cycle { layer: j, pos: b });
            }
        }
        for (a, b) in flip(m, u64::from(layers[k + 1].0)) {
            push(VertexLabel::RightCap(a), VertexLabel::RightCap(b));
        }
        Matching::from_edges(edges)
    }

    /// Horizontal profile cardinality of a sample is fixed by its first layer.
    pub fn layer_sizes(mm: &Matching, g: &BarrelGraph) -> usize {
        (0..g.m()).filter(|&l| mm.contains(g.horizontal_edge(0, l))).count()
    }
}

/// One uniformly random perfect matching of `F(m,k)`; deterministic in `seed`.
pub fn sample_uniform(m: usize, k: usize, seed: u64) -> Result<Matching> {
    let sampler = UniformSampler::new(BarrelParams::new(m, k)?)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    Ok(sampler.sample(&mut rng))
}

/// `count` independent uniform matchings drawn from one seeded stream.
pub fn sample_uniform_many(m: usize, k: usize, count: usize, seed: u64) -> Result<Vec<Matching>> {
    let sampler = UniformSampler::new(BarrelParams::new(m, k)?)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    Ok((0..count).map(|_| sampler.sample(&mut rng)).collect())
}
