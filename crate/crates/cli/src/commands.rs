use std::collections::BTreeMap;
use std::time::Instant;

use barrel_core::bethe::{growth_constant, growth_product_form, lambda_max_sector, n_zero, p_zero, verify_sector, RESIDUAL_TOL};
use barrel_core::entropy::{convergence_report, family_report, limit_entropy_quadrature, limit_entropy_series};
use barrel_core::graph::{
    build_graph, count_matchings_brute, enumerate_matchings, export_graph, horizontal_profile, BarrelGraph,
    BarrelParams, GraphFormat, Matching,
};
use barrel_core::paths::{
    krattenthaler_aggregate, krattenthaler_estimate, path_dp_count, shift_summed_estimate, total_via_paths,
    SiteSet, ThetaCoordinates, PATH_CAP,
};
use barrel_core::report::{big_to_f64, fmt17, real17};
use barrel_core::transfer::{sample_uniform, sample_uniform_many, TransferCounter, DEFAULT_TRANSFER_CAP};
use barrel_core::validate::{golden_table, run_validation, Level, ValidateOptions};
use serde::Serialize;
use serde_json::value::RawValue;

use crate::{
    render, AsymptoticArgs, BenchArgs, CountArgs, EntropyArgs, Failure, Format, GraphLayout, LevelArg, Method,
    Outcome, RenderArgs, SampleArgs, SpectrumArgs, What,
};

type Real = Box<RawValue>;

fn usage(msg: impl Into<String>) -> (Failure, Option<String>) {
    (Failure::Usage(msg.into()), None)
}

fn core(e: barrel_core::Error) -> (Failure, Option<String>) {
    (Failure::from(e), None)
}

fn pick(requested: Option<Format>, default: Format, allowed: &[Format], command: &str) -> Result<Format, (Failure, Option<String>)> {
    let f = requested.unwrap_or(default);
    if allowed.contains(&f) {
        Ok(f)
    } else {
        Err(usage(format!("{command} does not support --format {f:?}").to_lowercase()))
    }
}

fn json<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("serialisable report");
    s.push('\n');
    s
}

fn method_name(m: Method) -> &'static str {
    match m {
        Method::Transfer => "transfer",
        Method::Brute => "brute",
        Method::Paths => "paths",
        Method::All => "all",
    }
}

#[derive(Serialize)]
struct CountRow {
    k: usize,
    counts: BTreeMap<&'static str, String>,
    agree: bool,
}

#[derive(Serialize)]
struct CountReport<'a> {
    m: usize,
    rows: &'a [CountRow],
}

pub fn count(a: &CountArgs, f: Option<Format>) -> Outcome {
    let format = pick(f, Format::Json, &[Format::Json, Format::Csv, Format::Text], "count")?;
    BarrelParams::new(a.m, 0).map_err(core)?;
    let ks: Vec<usize> = match (a.k, a.k_max) {
        (Some(k), _) => vec![k],
        (None, Some(k_max)) => (0..=k_max).collect(),
        (None, None) => return Err(usage("either --k or --k-max is required")),
    };
    let k_top = *ks.last().expect("non-empty");
    let methods = match a.method {
        Method::All => vec![Method::Transfer, Method::Brute, Method::Paths],
        m => vec![m],
    };
    let mut rows: Vec<CountRow> = ks
        .iter()
        .map(|&k| CountRow { k, counts: BTreeMap::new(), agree: true })
        .collect();
    for &method in &methods {
        let name = method_name(method);
        match method {
            Method::Transfer => {
                let counts = TransferCounter::new(a.m).map_err(core)?.counts_up_to(k_top);
                for row in &mut rows {
                    row.counts.insert(name, counts[row.k].to_string());
                }
            }
            Method::Brute => {
                for row in &mut rows {
                    let g = build_graph(BarrelParams::new(a.m, row.k).map_err(core)?).map_err(core)?;
                    row.counts.insert(name, count_matchings_brute(&g).map_err(core)?.to_string());
                }
            }
            Method::Paths => {
                for row in &mut rows {
                    row.counts.insert(name, total_via_paths(a.m, row.k).map_err(core)?.to_string());
                }
            }
            Method::All => unreachable!("expanded above"),
        }
    }
    for row in &mut rows {
        let mut values = row.counts.values();
        let first = values.next().cloned();
        row.agree = values.all(|v| Some(v) == first.as_ref());
    }
    let disagreeing: Vec<usize> = rows.iter().filter(|r| !r.agree).map(|r| r.k).collect();
    let text = match format {
        Format::Json if a.k.is_some() => {
            #[derive(Serialize)]
            struct Single<'a> {
                m: usize,
                k: usize,
                counts: &'a BTreeMap<&'static str, String>,
                agree: bool,
            }
            let r = &rows[0];
            json(&Single { m: a.m, k: r.k, counts: &r.counts, agree: r.agree })
        }
        Format::Json => json(&CountReport { m: a.m, rows: &rows }),
        Format::Csv => {
            let mut s = String::from("m,k,method,count\n");
            for r in &rows {
                for (name, c) in &r.counts {
                    s.push_str(&format!("{},{},{name},{c}\n", a.m, r.k));
                }
            }
            s
        }
        _ => rows
            .iter()
            .map(|r| {
                let parts: Vec<String> = r.counts.iter().map(|(n, c)| format!("{n} {c}")).collect();
                format!("F({},{}): {}\n", a.m, r.k, parts.join(", "))
            })
            .collect(),
    };
    if disagreeing.is_empty() {
        Ok(text)
    } else {
        Err((Failure::Validation(format!("counting methods disagree for k in {disagreeing:?}")), Some(text)))
    }
}

#[derive(Serialize)]
struct GrowthReport {
    m: usize,
    rho: Real,
    rho_sector: Real,
    delta: Real,
    p0: usize,
    n0: usize,
    h: Real,
}

pub fn growth(m: usize, f: Option<Format>) -> Outcome {
    let format = pick(f, Format::Json, &[Format::Json, Format::Text], "growth")?;
    let rho = growth_constant(m).map_err(core)?;
    let sector = lambda_max_sector(m, p_zero(m));
    let h = rho.ln() / (2.0 * m as f64);
    let delta = growth_product_form(m) - sector;
    Ok(match format {
        Format::Json => json(&GrowthReport {
            m,
            rho: real17(rho),
            rho_sector: real17(sector),
            delta: real17(delta),
            p0: p_zero(m),
            n0: n_zero(m),
            h: real17(h),
        }),
        _ => format!(
            "m = {m}\nrho = {}\nrho (sector p0) = {}\ndelta = {}\np0 = {}\nn0 = {}\nh = {}\n",
            fmt17(rho),
            fmt17(sector),
            fmt17(delta),
            p_zero(m),
            n_zero(m),
            fmt17(h)
        ),
    })
}

pub fn spectrum(a: &SpectrumArgs, f: Option<Format>) -> Outcome {
    let format = pick(f, Format::Json, &[Format::Json, Format::Text], "spectrum")?;
    BarrelParams::new(a.m, 0).map_err(core)?;
    let s = verify_sector(a.m, a.p, a.b, a.c, RESIDUAL_TOL).map_err(|e| match e {
        barrel_core::Error::ResidualExceeded { .. } | barrel_core::Error::RankDeficient { .. } => {
            (Failure::Validation(e.to_string()), None)
        }
        e => core(e),
    })?;
    Ok(match format {
        Format::Json => json(&s),
        _ => {
            let mut out = format!("m = {} p = {} b = {} c = {} rank = {}\n", s.m, s.p, s.b, s.c, s.rank);
            for e in &s.entries {
                out.push_str(&format!(
                    "{:?} eigenvalue {} {}i residual {:.3e} overlap {} {}i\n",
                    e.selection,
                    fmt17(e.eigenvalue.re),
                    fmt17(e.eigenvalue.im),
                    e.residual,
                    fmt17(e.overlap.re),
                    fmt17(e.overlap.im)
                ));
            }
            out
        }
    })
}

#[derive(Serialize)]
struct SingleAsymptotic {
    estimate: barrel_core::paths::AsymptoticEstimate,
    /// Exact number of families between the two site sets, all splits.
    exact: Option<String>,
    shift_summed: Option<Real>,
    ratio: Option<Real>,
}

#[derive(Serialize)]
struct AggregateReport {
    aggregate: barrel_core::paths::AggregateEstimate,
    /// Leading coefficient times the eigenterm: the coefficient on `rho^k`.
    coefficient_on_k_power: Real,
    exact: Option<String>,
    ratio: Option<Real>,
}

pub fn asymptotic(a: &AsymptoticArgs, f: Option<Format>) -> Outcome {
    let format = pick(f, Format::Json, &[Format::Json, Format::Text], "asymptotic")?;
    BarrelParams::new(a.m, a.k).map_err(core)?;
    if a.aggregate {
        let agg = krattenthaler_aggregate(a.m, a.k).map_err(core)?;
        let exact = (a.m <= DEFAULT_TRANSFER_CAP)
            .then(|| TransferCounter::new(a.m).map(|c| c.count(a.k)))
            .transpose()
            .map_err(core)?;
        let ratio = exact.as_ref().map(|e| big_to_f64(e) / agg.total);
        let lead = agg.leading();
        let on_k = lead.coefficient * lead.eigenterm;
        return Ok(match format {
            Format::Json => json(&AggregateReport {
                coefficient_on_k_power: real17(on_k),
                exact: exact.as_ref().map(|e| e.to_string()),
                ratio: ratio.map(real17),
                aggregate: agg,
            }),
            _ => {
                let mut out = format!("m = {} k = {}\n", agg.m, agg.k);
                for t in &agg.terms {
                    out.push_str(&format!(
                        "n = {} pairs = {} coefficient = {} eigenterm = {} value = {}\n",
                        t.n,
                        t.pairs,
                        fmt17(t.coefficient),
                        fmt17(t.eigenterm),
                        fmt17(t.value)
                    ));
                }
                out.push_str(&format!("leading n = {} coefficient on rho^k = {}\n", agg.leading_n, fmt17(on_k)));
                out.push_str(&format!("total estimate = {}\n", fmt17(agg.total)));
                if let (Some(e), Some(r)) = (&exact, ratio) {
                    out.push_str(&format!("exact = {e}\nratio = {}\n", fmt17(r)));
                }
                out
            }
        });
    }
    let (Some(eta), Some(lambda)) = (&a.eta, &a.lambda) else {
        return Err(usage("--eta and --lambda are required without --aggregate"));
    };
    let eta = ThetaCoordinates::parse(eta).map_err(core)?;
    let lambda = ThetaCoordinates::parse(lambda).map_err(core)?;
    let estimate = krattenthaler_estimate(a.m, a.k, &eta, &lambda, a.s.unwrap_or(0)).map_err(core)?;
    let (mut exact, mut shift_summed) = (None, None);
    if a.m <= PATH_CAP {
        let start = SiteSet::from_sites(a.m, eta.sites().iter().copied());
        let end = SiteSet::from_sites(a.m, lambda.sites().iter().copied());
        if let (Ok(x), Ok(s)) = (path_dp_count(a.m, a.k, start, end), shift_summed_estimate(a.m, a.k, start, end)) {
            exact = Some(x);
            shift_summed = Some(s);
        }
    }
    let ratio = exact.as_ref().zip(shift_summed).map(|(x, s)| big_to_f64(x) / s);
    Ok(match format {
        Format::Json => json(&SingleAsymptotic {
            exact: exact.as_ref().map(|x| x.to_string()),
            shift_summed: shift_summed.map(real17),
            ratio: ratio.map(real17),
            estimate,
        }),
        _ => {
            let mut out = format!(
                "estimate = {} (n = {}, s = {}, k = {})\n",
                fmt17(estimate.value),
                estimate.n,
                estimate.s,
                estimate.k
            );
            if let (Some(x), Some(s), Some(r)) = (&exact, shift_summed, ratio) {
                out.push_str(&format!("exact (all splits) = {x}\nshift-summed estimate = {}\nratio = {}\n", fmt17(s), fmt17(r)));
            }
            out
        }
    })
}

#[derive(Serialize)]
struct EntropyTable {
    quadrature: barrel_core::entropy::EntropyReport,
    series: barrel_core::entropy::EntropyReport,
    table: barrel_core::entropy::ConvergenceReport,
}

pub fn entropy(a: &EntropyArgs, f: Option<Format>) -> Outcome {
    if let Some(m) = a.m {
        let format = pick(f, Format::Json, &[Format::Json, Format::Text], "entropy --m")?;
        let r = family_report(m).map_err(core)?;
        return Ok(match format {
            Format::Json => json(&r),
            _ => format!("h({m}) = {}\n", fmt17(r.h)),
        });
    }
    let format = pick(f, Format::Csv, &[Format::Json, Format::Csv, Format::Text], "entropy")?;
    let table = convergence_report(a.m_max).map_err(core)?;
    Ok(match format {
        Format::Csv => table.to_csv(),
        Format::Json => json(&EntropyTable {
            quadrature: limit_entropy_quadrature(1e-12).map_err(core)?,
            series: limit_entropy_series(1_000_000).map_err(core)?,
            table,
        }),
        _ => {
            let mut out = format!("limit = {}\n", fmt17(table.limit));
            for r in &table.rows {
                out.push_str(&format!("{:>5} {} {:+.3e}\n", r.m, fmt17(r.h), r.delta));
            }
            out.push_str(&format!("monotone = {}\n", table.monotone));
            out
        }
    })
}

pub fn validate(level: LevelArg, corrupt: bool, f: Option<Format>) -> Outcome {
    let format = pick(f, Format::Text, &[Format::Json, Format::Text], "validate")?;
    let level = match level {
        LevelArg::Fast => Level::Fast,
        LevelArg::Full => Level::Full,
    };
    let report = run_validation(level, ValidateOptions { corrupt_transfer: corrupt });
    let text = match format {
        Format::Json => json(&report),
        _ => {
            let mut out: String = report.outcomes.iter().map(|o| format!("{o}\n")).collect();
            if level == Level::Full {
                out.push_str("\nk,F(3,k),F(4,k),F(5,k)\n");
                for (k, [a, b, c]) in golden_table(20).map_err(core)? {
                    out.push_str(&format!("{k},{a},{b},{c}\n"));
                }
            }
            out.push_str(&format!(
                "\n{} in {} ms\n",
                if report.passed() { "all criteria passed" } else { "FAILED" },
                report.millis
            ));
            out
        }
    };
    if report.passed() {
        Ok(text)
    } else {
        let names: Vec<String> = report.failures().map(|o| format!("criterion {} ({})", o.id, o.name)).collect();
        Err((Failure::Validation(names.join(", ")), Some(text)))
    }
}

fn edge_text(g: &BarrelGraph, e: usize) -> [String; 2] {
    let edge = g.edge(e);
    [g.label(edge.u).to_string(), g.label(edge.v).to_string()]
}

#[derive(Serialize)]
struct SampleReport {
    m: usize,
    k: usize,
    seed: u64,
    samples: Vec<Vec<[String; 2]>>,
}

pub fn sample(a: &SampleArgs, f: Option<Format>) -> Outcome {
    let format = pick(f, Format::Text, &[Format::Json, Format::Csv, Format::Text], "sample")?;
    let g = build_graph(BarrelParams::new(a.m, a.k).map_err(core)?).map_err(core)?;
    let samples = sample_uniform_many(a.m, a.k, a.samples, a.seed).map_err(core)?;
    Ok(match format {
        Format::Json => json(&SampleReport {
            m: a.m,
            k: a.k,
            seed: a.seed,
            samples: samples.iter().map(|mm| mm.edges().iter().map(|&e| edge_text(&g, e)).collect()).collect(),
        }),
        Format::Csv => {
            if samples.is_empty() {
                return Ok(String::new());
            }
            let mut freq = BTreeMap::new();
            for mm in &samples {
                *freq.entry(horizontal_profile(&g, mm).map_err(core)?.cardinality()).or_insert(0usize) += 1;
            }
            let mut out = String::from("p,count\n");
            for (p, c) in freq {
                out.push_str(&format!("{p},{c}\n"));
            }
            out
        }
        _ => samples
            .iter()
            .map(|mm| {
                let parts: Vec<String> = mm.edges().iter().map(|&e| edge_text(&g, e).join("-")).collect();
                parts.join(" ") + "\n"
            })
            .collect(),
    })
}

pub fn render(a: &RenderArgs, f: Option<Format>) -> Outcome {
    pick(f, Format::Svg, &[Format::Svg], "render")?;
    let g = build_graph(BarrelParams::new(a.m, a.k).map_err(core)?).map_err(core)?;
    let matching: Option<Matching> = match (a.what, a.index) {
        (What::Graph, _) => None,
        (_, Some(i)) => Some(
            enumerate_matchings(&g)
                .map_err(core)?
                .nth(i)
                .ok_or_else(|| usage(format!("F({},{}) has fewer than {} matchings", a.m, a.k, i + 1)))?,
        ),
        (_, None) => Some(sample_uniform(a.m, a.k, a.seed.unwrap_or(0)).map_err(core)?),
    };
    render::svg(&g, a.what, matching.as_ref()).map_err(core)
}

pub fn bench(a: &BenchArgs, f: Option<Format>) -> Outcome {
    let format = pick(f, Format::Csv, &[Format::Csv, Format::Json], "bench")?;
    #[derive(Serialize)]
    struct Row {
        method: &'static str,
        m: usize,
        k: usize,
        millis: Real,
    }
    let mut rows = Vec::new();
    let mut time = |method: &'static str, m: usize, k: usize, run: &dyn Fn() -> barrel_core::Result<()>| {
        let t = Instant::now();
        run().map(|()| rows.push((method, m, k, t.elapsed().as_secs_f64() * 1e3)))
    };
    let ks: Vec<usize> = if a.k_max > 3 { vec![3, a.k_max] } else { vec![a.k_max] };
    for m in 3..=6 {
        for &k in &ks {
            time("transfer", m, k, &|| count_transfer(m, k)).map_err(core)?;
            if BarrelParams::new(m, k).map_err(core)?.vertex_count() <= 72 {
                time("brute", m, k, &|| {
                    count_matchings_brute(&build_graph(BarrelParams::new(m, k)?)?).map(drop)
                })
                .map_err(core)?;
            }
            time("paths", m, k, &|| total_via_paths(m, k).map(drop)).map_err(core)?;
        }
    }
    Ok(match format {
        Format::Json => json(
            &rows
                .iter()
                .map(|&(method, m, k, ms)| Row { method, m, k, millis: real17(ms) })
                .collect::<Vec<_>>(),
        ),
        _ => {
            let mut out = String::from("method,m,k,millis\n");
            for (method, m, k, ms) in rows {
                out.push_str(&format!("{method},{m},{k},{ms:.3}\n"));
            }
            out
        }
    })
}

fn count_transfer(m: usize, k: usize) -> barrel_core::Result<()> {
    TransferCounter::new(m).map(|c| drop(c.count(k)))
}

pub fn export(m: usize, k: usize, layout: GraphLayout, f: Option<Format>) -> Outcome {
    pick(f, Format::Text, &[Format::Text], "export")?;
    let g = build_graph(BarrelParams::new(m, k).map_err(core)?).map_err(core)?;
    let layout = match layout {
        GraphLayout::Edges => GraphFormat::Edges,
        GraphLayout::Adj => GraphFormat::Adjacency,
    };
    Ok(export_graph(&g, layout))
}
