//! The acceptance criteria as runnable checks.

use std::collections::HashMap;
use std::fmt;
use std::time::Instant;

use num_bigint::BigUint;
use num_traits::ToPrimitive;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use statrs::distribution::{ChiSquared, ContinuousCDF};

use crate::bethe::{growth_constant, roots_identity_check, verify_sector, RESIDUAL_TOL};
use crate::entropy::{entropy_of_family, limit_entropy_quadrature, limit_entropy_series, LIMIT_ENTROPY_TEN_DIGITS};
use crate::error::Result;
use crate::graph::{build_graph, count_matchings_brute, enumerate_matchings, BarrelParams};
use crate::paths::{krattenthaler_aggregate, krattenthaler_ratio, leading_n_consistency, total_via_paths, SiteSet};
use crate::transfer::{
    build_transfer_on, closed_form_345, OperatorMode, StateSpace, TransferCounter, UniformSampler,
};

/// Seed for the random `(b, c)` draws and the uniformity test.
pub const VALIDATION_SEED: u64 = 20_160_315;
pub const CHI_SQUARE_SAMPLES: usize = 28_000;
pub const CHI_SQUARE_ALPHA: f64 = 0.001;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Level {
    Fast,
    Full,
}

impl std::str::FromStr for Level {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s {
            "fast" => Ok(Level::Fast),
            "full" => Ok(Level::Full),
            _ => Err(format!("unknown level `{s}` (expected fast or full)")),
        }
    }
}

#[derive(Clone, Copy, Debug, Default)]
pub struct ValidateOptions {
    /// Perturb one transfer entry before counting.
    pub corrupt_transfer: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct CriterionOutcome {
    pub id: u32,
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
    pub millis: u128,
}

impl fmt::Display for CriterionOutcome {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "criterion {:>2} {:<32} {} ({} ms) {}",
            self.id,
            self.name,
            if self.passed { "PASS" } else { "FAIL" },
            self.millis,
            self.detail
        )
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct ValidationReport {
    pub level: Level,
    pub outcomes: Vec<CriterionOutcome>,
    pub millis: u128,
}

impl ValidationReport {
    pub fn passed(&self) -> bool {
        self.outcomes.iter().all(|o| o.passed)
    }

    pub fn failures(&self) -> impl Iterator<Item = &CriterionOutcome> {
        self.outcomes.iter().filter(|o| !o.passed)
    }
}

type Check = std::result::Result<String, String>;

struct Ctx {
    level: Level,
    options: ValidateOptions,
}

impl Ctx {
    fn full(&self) -> bool {
        self.level == Level::Full
    }

    fn counter(&self, m: usize) -> Result<TransferCounter> {
        let mut op = build_transfer_on(m, OperatorMode::Exact, StateSpace::MatchingParity)?;
        if self.options.corrupt_transfer {
            op.corrupt_first_entry();
        }
        TransferCounter::from_operator(op)
    }
}

fn err(e: crate::Error) -> String {
    e.to_string()
}

/// `Phi(F(m,k))` for `m` in 3, 4, 5 and `k` in `0 ..= k_max`.
pub fn golden_table(k_max: usize) -> Result<Vec<(usize, [BigUint; 3])>> {
    let cols = [3, 4, 5].map(|m| TransferCounter::new(m).map(|c| c.counts_up_to(k_max)));
    let [a, b, c] = cols;
    let (a, b, c) = (a?, b?, c?);
    Ok((0..=k_max).map(|k| (k, [a[k].clone(), b[k].clone(), c[k].clone()])).collect())
}

fn golden(ctx: &Ctx) -> Check {
    for m in 3..=5 {
        let counts = ctx.counter(m).map_err(err)?.counts_up_to(20);
        for (k, got) in counts.iter().enumerate() {
            let want = closed_form_345(m, k).map_err(err)?;
            if *got != want {
                return Err(format!("transfer count of F({m},{k}) is {got}, closed form gives {want}"));
            }
        }
    }
    Ok("63 counts equal the closed forms for m in 3..=5, k in 0..=20".into())
}

fn brute_oracle(ctx: &Ctx) -> Check {
    let mut pairs: Vec<(usize, usize)> = Vec::new();
    let ms: &[usize] = if ctx.full() { &[3, 4, 5, 6] } else { &[3, 4, 5] };
    for &m in ms {
        pairs.extend((0..=2).map(|k| (m, k)));
    }
    if ctx.full() {
        pairs.extend([(3, 3), (4, 3)]);
    }
    for &(m, k) in &pairs {
        let g = build_graph(BarrelParams::new(m, k).map_err(err)?).map_err(err)?;
        let brute = count_matchings_brute(&g).map_err(err)?;
        let transfer = ctx.counter(m).map_err(err)?.count(k);
        if brute != transfer {
            return Err(format!("F({m},{k}): backtracking {brute} vs transfer {transfer}"));
        }
    }
    Ok(format!("{} instances agree", pairs.len()))
}

fn path_oracle(ctx: &Ctx) -> Check {
    let (m_max, k_max) = if ctx.full() { (6, 5) } else { (5, 2) };
    for m in 3..=m_max {
        let counts = ctx.counter(m).map_err(err)?.counts_up_to(k_max);
        for (k, transfer) in counts.iter().enumerate() {
            let paths = total_via_paths(m, k).map_err(err)?;
            if paths != *transfer {
                return Err(format!("F({m},{k}): paths {paths} vs transfer {transfer}"));
            }
        }
    }
    Ok(format!("m in 3..={m_max}, k in 0..={k_max}"))
}

fn random_weights(rng: &mut ChaCha8Rng, count: usize) -> Vec<(f64, f64)> {
    (0..count).map(|_| (rng.random_range(0.5..=2.0), rng.random_range(0.5..=2.0))).collect()
}

fn bethe_residuals(ctx: &Ctx) -> Check {
    let (m_max, draws) = if ctx.full() { (8, 10) } else { (5, 2) };
    let mut rng = ChaCha8Rng::seed_from_u64(VALIDATION_SEED);
    let mut worst: f64 = 0.0;
    let mut sectors = 0;
    for (b, c) in random_weights(&mut rng, draws) {
        for m in 3..=m_max {
            for p in 0..=m {
                let s = verify_sector(m, p, b, c, RESIDUAL_TOL).map_err(err)?;
                worst = worst.max(s.max_residual());
                sectors += 1;
            }
        }
    }
    Ok(format!("{sectors} sectors full rank, max residual {worst:.2e}"))
}

fn roots_identity(ctx: &Ctx) -> Check {
    let draws = if ctx.full() { 20 } else { 5 };
    let mut rng = ChaCha8Rng::seed_from_u64(VALIDATION_SEED + 1);
    let mut worst: f64 = 0.0;
    for (b, c) in random_weights(&mut rng, draws) {
        for m in 3..=20 {
            let scale = b.powi(m as i32) + c.powi(m as i32);
            for p in 0..=m {
                let rel = roots_identity_check(m, p, b, c) / scale;
                if rel > 1e-9 {
                    return Err(format!("m={m} p={p} b={b} c={c}: relative deviation {rel:e}"));
                }
                worst = worst.max(rel);
            }
        }
    }
    Ok(format!("max relative deviation {worst:.2e}"))
}

fn growth(_: &Ctx) -> Check {
    for m in 3..=64 {
        growth_constant(m).map_err(err)?;
    }
    for (m, want) in [(3, 3.0), (5, 5.0), (4, 2.0 + 2f64.sqrt())] {
        let rho = growth_constant(m).map_err(err)?;
        if ((rho - want) / want).abs() > 1e-12 {
            return Err(format!("rho({m}) = {rho}, expected {want}"));
        }
    }
    Ok("product form equals the dominant sector maximum for 3 <= m <= 64".into())
}

/// `a / b` to about 30 digits before rounding to `f64`.
fn big_ratio(a: &BigUint, b: &BigUint) -> f64 {
    let scale = BigUint::from(10u8).pow(30);
    (a * &scale / b).to_f64().unwrap_or(f64::INFINITY) / 1e30
}

fn growth_convergence(ctx: &Ctx) -> Check {
    let mut worst: f64 = 0.0;
    for m in 3..=6 {
        let counts = ctx.counter(m).map_err(err)?.counts_up_to(61);
        let rho = growth_constant(m).map_err(err)?;
        let rel = (big_ratio(&counts[61], &counts[60]) - rho).abs() / rho;
        if rel > 1e-6 {
            return Err(format!("m={m}: Phi(61)/Phi(60) is {rel:e} away from rho"));
        }
        worst = worst.max(rel);
    }
    Ok(format!("max relative gap {worst:.2e}"))
}

fn concentration(ctx: &Ctx) -> Check {
    let counter = ctx.counter(5).map_err(err)?;
    let part = counter.sector_count(40, 1).map_err(err)?;
    let total = counter.count(40);
    let share = big_ratio(&part, &total);
    if share >= 0.999 {
        Ok(format!("sector p=1 holds {share:.9} of F(5,40)"))
    } else {
        Err(format!("sector p=1 holds only {share}"))
    }
}

fn eigenterm(_: &Ctx) -> Check {
    for m in 3..=64 {
        leading_n_consistency(m).map_err(err)?;
    }
    Ok("eigenterm equals lambda_max(m - n) and peaks at n0 for 3 <= m <= 64".into())
}

fn aggregate(_: &Ctx) -> Check {
    let a3 = krattenthaler_aggregate(3, 0).map_err(err)?.leading().coefficient * 3.0;
    let a4 = krattenthaler_aggregate(4, 0).map_err(err)?.leading().coefficient;
    if (a3 - 9.0).abs() > 9e-12 || (a4 - 2.0).abs() > 2e-12 {
        return Err(format!("coefficients {a3} (want 9) and {a4} (want 2)"));
    }
    Ok(format!("m=3 coefficient {a3:.15}, m=4 coefficient {a4:.15}"))
}

fn asymptotic_convergence(_: &Ctx) -> Check {
    let start = SiteSet::from_sites(4, [0, 2]);
    let r = |k: usize| krattenthaler_ratio(4, k, start).map_err(err);
    let (r28, r29, r30, r31) = (r(28)?, r(29)?, r(30)?, r(31)?);
    let cauchy = (r28 - r30).abs().max((r29 - r31).abs());
    if cauchy > 1e-3 {
        return Err(format!("same-parity ratio differences {cauchy:e} at k=30"));
    }
    if (r31 - 1.0).abs() > 0.02 {
        return Err(format!("ratio settles at {r31}, outside 1 ± 2%"));
    }
    Ok(format!("exact/estimate ratio {r31:.12} at k=31, Cauchy gap {cauchy:.1e}"))
}

fn entropy(_: &Ctx) -> Check {
    let q = limit_entropy_quadrature(1e-12).map_err(err)?.h;
    let s = limit_entropy_series(1_000_000).map_err(err)?.h;
    if (q - s).abs() > 1e-10 {
        return Err(format!("quadrature {q} vs series {s}"));
    }
    if (q - LIMIT_ENTROPY_TEN_DIGITS).abs() > 1e-8 || (s - LIMIT_ENTROPY_TEN_DIGITS).abs() > 1e-8 {
        return Err(format!("limit {q} differs from {LIMIT_ENTROPY_TEN_DIGITS}"));
    }
    for m in 998..=1000 {
        let h = entropy_of_family(m).map_err(err)?;
        if (h - q).abs() > 1e-3 {
            return Err(format!("h({m}) = {h} is too far from the limit {q}"));
        }
    }
    Ok(format!("limit {q:.12} (series {s:.12})"))
}

/// Chi-square statistic and p-value of `samples` draws on F(3,1).
pub fn uniformity_test(samples: usize, seed: u64) -> Result<(f64, f64)> {
    let sampler = UniformSampler::new(BarrelParams::new(3, 1)?)?;
    let index: HashMap<_, usize> = enumerate_matchings(sampler.graph())?
        .enumerate()
        .map(|(i, mm)| (mm, i))
        .collect();
    let cells = index.len();
    let mut freq = vec![0usize; cells];
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..samples {
        freq[index[&sampler.sample(&mut rng)]] += 1;
    }
    let expected = samples as f64 / cells as f64;
    let stat: f64 = freq.iter().map(|&f| (f as f64 - expected).powi(2) / expected).sum();
    let dist = ChiSquared::new((cells - 1) as f64).expect("positive degrees of freedom");
    Ok((stat, 1.0 - dist.cdf(stat)))
}

fn sampler(_: &Ctx) -> Check {
    let (stat, p) = uniformity_test(CHI_SQUARE_SAMPLES, VALIDATION_SEED).map_err(err)?;
    let detail = format!("chi2 = {stat:.2} on 27 dof, p = {p:.4} (seed {VALIDATION_SEED})");
    if p >= CHI_SQUARE_ALPHA {
        Ok(detail)
    } else {
        Err(detail)
    }
}

type Criterion = (u32, &'static str, fn(&Ctx) -> Check);

const CRITERIA: [Criterion; 13] = [
    (1, "golden closed forms", golden),
    (2, "backtracking = transfer", brute_oracle),
    (3, "paths = transfer", path_oracle),
    (4, "Bethe residuals and rank", bethe_residuals),
    (5, "root-of-unity identity", roots_identity),
    (6, "growth constant", growth),
    (7, "growth convergence", growth_convergence),
    (8, "sector concentration", concentration),
    (9, "eigenterm consistency", eigenterm),
    (10, "asymptotic aggregate identity", aggregate),
    (11, "asymptotic convergence", asymptotic_convergence),
    (12, "entropy", entropy),
    (13, "sampler uniformity", sampler),
];

pub fn criterion_ids() -> impl Iterator<Item = u32> {
    CRITERIA.iter().map(|c| c.0)
}

/// Runs one criterion.
pub fn run_criterion(id: u32, level: Level, options: ValidateOptions) -> Option<CriterionOutcome> {
    let &(id, name, check) = CRITERIA.iter().find(|c| c.0 == id)?;
    let ctx = Ctx { level, options };
    let t = Instant::now();
    let result = check(&ctx);
    let millis = t.elapsed().as_millis();
    let (passed, detail) = match result {
        Ok(d) => (true, d),
        Err(d) => (false, d),
    };
    Some(CriterionOutcome { id, name, passed, detail, millis })
}

pub fn run_validation(level: Level, options: ValidateOptions) -> ValidationReport {
    let t = Instant::now();
    let outcomes = criterion_ids()
        .filter_map(|id| run_criterion(id, level, options))
        .collect();
    ValidationReport { level, outcomes, millis: t.elapsed().as_millis() }
}
