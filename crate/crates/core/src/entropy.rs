//! Dimer entropy `h(m) = log rho(m) / (2m)` and its limit
//! `h = -3/(2π) ∫_0^{π/3} log(2 sin t) dt`.

use std::f64::consts::{LN_2, PI};

use serde::Serialize;

use crate::bethe::growth_constant;
use crate::error::{Error, Result};
use crate::report::fmt17;

/// The limiting entropy to ten digits.
pub const LIMIT_ENTROPY_TEN_DIGITS: f64 = 0.1615329736;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum EntropyMethod {
    Family,
    Quadrature,
    Series,
}

#[derive(Clone, Debug, Serialize)]
pub struct EntropyReport {
    /// `None` for the limit.
    pub m: Option<usize>,
    #[serde(serialize_with = "crate::report::real")]
    pub h: f64,
    pub method: EntropyMethod,
    #[serde(serialize_with = "crate::report::real")]
    pub error_bound: f64,
}

pub fn entropy_of_family(m: usize) -> Result<f64> {
    Ok(growth_constant(m)?.ln() / (2.0 * m as f64))
}

pub fn family_report(m: usize) -> Result<EntropyReport> {
    Ok(EntropyReport { m: Some(m), h: entropy_of_family(m)?, method: EntropyMethod::Family, error_bound: 0.0 })
}

/// `log(2 sin t) = log 2 + log t + log(sin t / t)`; the first two integrate in
/// closed form, the last is smooth and goes to double-exponential quadrature.
pub fn limit_entropy_quadrature(tol: f64) -> Result<EntropyReport> {
    if tol.is_nan() || tol < 1e-12 {
        return Err(Error::ToleranceUnreachable(tol));
    }
    let a = PI / 3.0;
    let scale = 3.0 / (2.0 * PI);
    let smooth = |t: f64| if t == 0.0 { 0.0 } else { (t.sin() / t).ln() };
    let out = quadrature::double_exponential::integrate(smooth, 0.0, a, tol / scale);
    if out.error_estimate.is_nan() || out.error_estimate * scale > tol {
        return Err(Error::ToleranceUnreachable(tol));
    }
    let integral = a * LN_2 + a * (a.ln() - 1.0) + out.integral;
    Ok(EntropyReport {
        m: None,
        h: -scale * integral,
        method: EntropyMethod::Quadrature,
        error_bound: out.error_estimate * scale,
    })
}

/// `∫_0^θ log(2 sin t) dt = -1/2 Σ_{n>=1} sin(2nθ)/n²`, truncated after `terms`
/// terms (summed smallest first). The truncation error is at most `1/(2 terms)`.
pub fn lobachevsky_partial(theta: f64, terms: usize) -> f64 {
    let s: f64 = (1..=terms).rev().map(|n| (2.0 * n as f64 * theta).sin() / (n as f64 * n as f64)).sum();
    -0.5 * s
}

pub fn limit_entropy_series(terms: usize) -> Result<EntropyReport> {
    if terms == 0 {
        return Err(Error::InvalidParams("series needs at least one term".into()));
    }
    let scale = 3.0 / (2.0 * PI);
    Ok(EntropyReport {
        m: None,
        h: -scale * lobachevsky_partial(PI / 3.0, terms),
        method: EntropyMethod::Series,
        error_bound: scale / (2.0 * terms as f64),
    })
}

#[derive(Clone, Debug, Serialize)]
pub struct ConvergenceRow {
    pub m: usize,
    #[serde(serialize_with = "crate::report::real")]
    pub h: f64,
    #[serde(serialize_with = "crate::report::real")]
    pub delta: f64,
}

#[derive(Clone, Debug, Serialize)]
pub struct ConvergenceReport {
    #[serde(serialize_with = "crate::report::real")]
    pub limit: f64,
    pub rows: Vec<ConvergenceRow>,
    /// Whether `h(m)` is non-decreasing in `m` over the table.
    pub monotone: bool,
    /// Rows with `h(m) > limit`.
    pub above_limit: Vec<usize>,
}

impl ConvergenceReport {
    pub fn to_csv(&self) -> String {
        let mut out = String::from("m,h,delta\n");
        for r in &self.rows {
            out.push_str(&format!("{},{},{}\n", r.m, fmt17(r.h), fmt17(r.delta)));
        }
        out
    }
}

pub fn convergence_report(m_max: usize) -> Result<ConvergenceReport> {
    if m_max < 10 {
        return Err(Error::InvalidParams(format!("m_max must be at least 10, got {m_max}")));
    }
    let limit = limit_entropy_quadrature(1e-12)?.h;
    let rows = (3..=m_max)
        .map(|m| entropy_of_family(m).map(|h| ConvergenceRow { m, h, delta: h - limit }))
        .collect::<Result<Vec<_>>>()?;
    if let Some(r) = rows.iter().find(|r| r.m >= 998 && r.m <= 1000 && r.delta.abs() > 1e-3) {
        return Err(Error::InternalMismatch(format!("h({}) is {} away from the limit", r.m, r.delta)));
    }
    let monotone = rows.windows(2).all(|w| w[1].h >= w[0].h);
    let above_limit = rows.iter().filter(|r| r.delta > 0.0).map(|r| r.m).collect();
    Ok(ConvergenceReport { limit, rows, monotone, above_limit })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn family_examples() {
        assert!((entropy_of_family(3).unwrap() - 3f64.ln() / 6.0).abs() < 1e-12);
        assert!((entropy_of_family(5).unwrap() - 5f64.ln() / 10.0).abs() < 1e-12);
        assert!((entropy_of_family(4).unwrap() - (2.0 + 2f64.sqrt()).ln() / 8.0).abs() < 1e-12);
        assert!((entropy_of_family(3).unwrap() - 0.18310).abs() < 1e-5);
        assert!(entropy_of_family(2).is_err());
    }

    #[test]
    fn limit_two_ways() {
        let q = limit_entropy_quadrature(1e-10).unwrap();
        let s = limit_entropy_series(1_000_000).unwrap();
        assert!((q.h - s.h).abs() <= 1e-10, "{} vs {}", q.h, s.h);
        assert!((q.h - LIMIT_ENTROPY_TEN_DIGITS).abs() <= 1e-8);
        assert!((s.h - LIMIT_ENTROPY_TEN_DIGITS).abs() <= 1e-8);
        assert!(q.error_bound <= 1e-10);
        assert!(matches!(limit_entropy_quadrature(1e-13), Err(Error::ToleranceUnreachable(_))));
        let q12 = limit_entropy_quadrature(1e-12).unwrap();
        assert!((q12.h - q.h).abs() <= 1e-10);
    }

    #[test]
    fn integrand_crosses_zero_at_sixth_of_pi() {
        assert!((2.0 * (PI / 6.0).sin()).ln().abs() < 1e-15);
    }

    #[test]
    fn series_partial_sums() {
        let one = -lobachevsky_partial(PI / 3.0, 1);
        assert!((one - 0.5 * 3f64.sqrt() / 2.0).abs() < 1e-15);
        let a = limit_entropy_series(1).unwrap().h;
        let b = limit_entropy_series(1_000_000).unwrap().h;
        assert!((a - b).abs() <= 0.5);
        // Partial sums overshoot after n ≡ 1 and undershoot after n ≡ 2 (mod 3).
        let limit = limit_entropy_series(1_000_000).unwrap().h;
        for n in (4..60).step_by(3) {
            assert!(limit_entropy_series(n).unwrap().h > limit);
            assert!(limit_entropy_series(n + 1).unwrap().h < limit);
            assert_eq!(limit_entropy_series(n + 1).unwrap().h, limit_entropy_series(n + 2).unwrap().h);
        }
        let r = limit_entropy_series(1000).unwrap();
        assert!((r.h - limit).abs() <= r.error_bound);
    }

    #[test]
    fn convergence_table() {
        let r = convergence_report(1000).unwrap();
        assert_eq!(r.rows.len(), 998);
        for m in 998..=1000 {
            assert!(r.rows[m - 3].delta.abs() <= 1e-3);
        }
        assert!(r.rows[5 - 3].h < r.limit);
        assert!(!r.monotone);
        assert!(r.rows[3 - 3].h > r.rows[4 - 3].h);
        // h(6) = log(4 + 2√3)/12 lies above the limit.
        assert!((r.rows[6 - 3].h - (4.0 + 2.0 * 3f64.sqrt()).ln() / 12.0).abs() < 1e-12);
        assert!(r.above_limit.contains(&6));
        for start in 30..33 {
            let errs: Vec<f64> = (start..=1000).step_by(3).map(|m| r.rows[m - 3].delta.abs()).collect();
            assert!(errs.windows(2).all(|w| w[1] < w[0]), "residue class of {start}");
        }
        assert!(r.to_csv().starts_with("m,h,delta\n3,"));
        assert_eq!(r.to_csv().lines().count(), 999);
        assert!(convergence_report(9).is_err());
    }
}
