//! Bethe-Ansatz diagonalisation of the transfer operator.
//!
//! In sector `p` the eigenvectors are Slater determinants built from `p`
//! distinct `m`-th roots of `(-1)^{p+1}`. They do not depend on the weights
//! `(b, c)`; the eigenvalue for a selection `R` is the product of `(b - c z)`
//! over the roots *not* in `R`, which stays finite at `b = c`.

use std::f64::consts::PI;

use nalgebra::DMatrix;
use num_complex::Complex64;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::subset::Subset;
use crate::transfer::{boundary_vector, build_transfer_on, OperatorMode, StateSpace};

pub const RESIDUAL_TOL: f64 = 1e-9;
pub const IDENTITY_TOL: f64 = 1e-12;
/// Largest `m` for the dense numerical sector check.
pub const VERIFY_CAP: usize = 10;

/// The `m` roots of `z^m = (-1)^{p+1}`, `z_r = exp(iπ(2r + ε)/m)` with `ε = 1`
/// for even `p` and `0` for odd `p`, ordered by `r`.
pub fn roots_for_sector(m: usize, p: usize) -> Vec<Complex64> {
    let eps = if p.is_multiple_of(2) { 1.0 } else { 0.0 };
    (0..m)
        .map(|r| Complex64::from_polar(1.0, PI * (2.0 * r as f64 + eps) / m as f64))
        .collect()
}

/// Amplitudes `det(z_i^{l_j})` over the `p`-subsets `{l_1 < .. < l_p}`, in
/// increasing mask order.
#[derive(Clone, Debug, PartialEq)]
pub struct BetheVector {
    pub basis: Vec<Subset>,
    pub amplitudes: Vec<Complex64>,
}

impl BetheVector {
    pub fn norm(&self) -> f64 {
        self.amplitudes.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt()
    }
}

fn slater(roots: &[Complex64], s: Subset) -> Complex64 {
    let p = roots.len();
    if p == 0 {
        return Complex64::new(1.0, 0.0);
    }
    let members: Vec<usize> = s.members().collect();
    let mat = DMatrix::from_fn(p, p, |i, j| roots[i].powu(members[j] as u32));
    mat.determinant()
}

pub fn bethe_vector(m: usize, roots: &[Complex64]) -> BetheVector {
    let basis = Subset::all_of_size(m, roots.len());
    let amplitudes = basis.iter().map(|&s| slater(roots, s)).collect();
    BetheVector { basis, amplitudes }
}

fn check_selection(m: usize, p: usize, selection: &[usize]) -> Result<()> {
    if selection.len() != p {
        return Err(Error::DegenerateRoots(format!("{} roots selected for sector p={p}", selection.len())));
    }
    let mut sorted = selection.to_vec();
    sorted.sort_unstable();
    sorted.dedup();
    if sorted.len() != p || sorted.iter().any(|&r| r >= m) {
        return Err(Error::DegenerateRoots(format!("selection {selection:?} repeats or exceeds m={m}")));
    }
    Ok(())
}

/// `prod_{z in U_{p,m} \ R} (b - c z)`.
pub fn complementary_eigenvalue(m: usize, p: usize, selection: &[usize], b: f64, c: f64) -> Complex64 {
    roots_for_sector(m, p)
        .into_iter()
        .enumerate()
        .filter(|(r, _)| !selection.contains(r))
        .map(|(_, z)| b - c * z)
        .product()
}

/// `(c^m + (-1)^p b^m) / prod_{z in R} (c z - b)`; undefined (0/0) for odd `p` at `b = c`.
pub fn quotient_eigenvalue(m: usize, p: usize, selection: &[usize], b: f64, c: f64) -> Complex64 {
    let roots = roots_for_sector(m, p);
    let sign = if p.is_multiple_of(2) { 1.0 } else { -1.0 };
    let numerator = Complex64::new(c.powi(m as i32) + sign * b.powi(m as i32), 0.0);
    let denominator: Complex64 = selection.iter().map(|&r| c * roots[r] - b).product();
    numerator / denominator
}

pub fn bethe_eigenpair(
    m: usize,
    p: usize,
    selection: &[usize],
    b: f64,
    c: f64,
) -> Result<(BetheVector, Complex64)> {
    check_selection(m, p, selection)?;
    let roots = roots_for_sector(m, p);
    let chosen: Vec<Complex64> = selection.iter().map(|&r| roots[r]).collect();
    Ok((bethe_vector(m, &chosen), complementary_eigenvalue(m, p, selection, b, c)))
}

#[derive(Clone, Debug, Serialize)]
pub struct SpectrumEntry {
    pub selection: Vec<usize>,
    #[serde(serialize_with = "crate::report::complex_list")]
    pub roots: Vec<Complex64>,
    #[serde(serialize_with = "crate::report::complex")]
    pub eigenvalue: Complex64,
    pub residual: f64,
    /// `<Ω|v>` for the normalised vector; reported, never asserted.
    #[serde(serialize_with = "crate::report::complex")]
    pub overlap: Complex64,
}

#[derive(Clone, Debug, Serialize)]
pub struct SectorSpectrum {
    pub m: usize,
    pub p: usize,
    pub b: f64,
    pub c: f64,
    pub rank: usize,
    pub entries: Vec<SpectrumEntry>,
}

impl SectorSpectrum {
    pub fn max_residual(&self) -> f64 {
        self.entries.iter().map(|e| e.residual).fold(0.0, f64::max)
    }
}

/// Numerical rank of a set of vectors (columns), relative threshold `1e-9`.
fn numerical_rank(columns: &[Vec<Complex64>]) -> usize {
    if columns.is_empty() {
        return 0;
    }
    let rows = columns[0].len();
    let mat = DMatrix::from_fn(rows, columns.len(), |i, j| columns[j][i]);
    let sv = mat.singular_values();
    let top = sv.iter().cloned().fold(0.0, f64::max);
    sv.iter().filter(|&&s| s > 1e-9 * top).count()
}

/// Checks every Bethe eigenpair of sector `p` against the dense numeric block
/// of `B(b,c)` and checks that the sector's vectors span it.
pub fn verify_sector(m: usize, p: usize, b: f64, c: f64, tol: f64) -> Result<SectorSpectrum> {
    if m > VERIFY_CAP {
        return Err(Error::TooLarge(format!("dense sector check limited to m <= {VERIFY_CAP}")));
    }
    if p > m {
        return Err(Error::InvalidParams(format!("sector p={p} exceeds m={m}")));
    }
    let op = build_transfer_on(m, OperatorMode::Numeric { b, c }, StateSpace::Sector(p))?;
    let (basis, block) = op.numeric_block(p, b, c);
    let omega = boundary_vector(m)?;
    let roots = roots_for_sector(m, p);
    let mut entries = Vec::with_capacity(basis.len());
    let mut columns = Vec::with_capacity(basis.len());
    for sel in Subset::all_of_size(m, p) {
        let selection: Vec<usize> = sel.members().collect();
        let (vector, eigenvalue) = bethe_eigenpair(m, p, &selection, b, c)?;
        debug_assert_eq!(vector.basis, basis);
        let v = &vector.amplitudes;
        let norm = vector.norm();
        let residual = (0..v.len())
            .map(|i| {
                let bv: Complex64 = (0..v.len()).map(|j| v[j] * block[(i, j)]).sum();
                (bv - eigenvalue * v[i]).norm_sqr()
            })
            .sum::<f64>()
            .sqrt()
            / norm;
        if residual > tol || !residual.is_finite() {
            return Err(Error::ResidualExceeded { m, p, selection, residual, tol });
        }
        let overlap: Complex64 = basis
            .iter()
            .zip(v)
            .map(|(&s, a)| a * omega.get(s) as f64)
            .sum::<Complex64>()
            / norm;
        entries.push(SpectrumEntry {
            roots: selection.iter().map(|&r| roots[r]).collect(),
            selection,
            eigenvalue,
            residual,
            overlap,
        });
        columns.push(v.iter().map(|a| a / norm).collect());
    }
    let rank = numerical_rank(&columns);
    if rank != basis.len() {
        return Err(Error::RankDeficient { m, p, rank, dim: basis.len() });
    }
    Ok(SectorSpectrum { m, p, b, c, rank, entries })
}

/// `|prod_{z in U_{p,m}} (b - c z) - (b^m + (-1)^p c^m)|`.
pub fn roots_identity_check(m: usize, p: usize, b: f64, c: f64) -> f64 {
    let lhs: Complex64 = roots_for_sector(m, p).into_iter().map(|z| b - c * z).product();
    let sign = if p.is_multiple_of(2) { 1.0 } else { -1.0 };
    let rhs = b.powi(m as i32) + sign * c.powi(m as i32);
    (lhs - rhs).norm()
}

/// Largest eigenvalue of `A` in sector `p`:
/// `2 / prod_{r<q} 4 sin²(π(2r+1)/(2m))` for `p = 2q`,
/// `m / prod_{1<=r<=q} 4 sin²(πr/m)` for `p = 2q+1`.
pub fn lambda_max_sector(m: usize, p: usize) -> f64 {
    let mf = m as f64;
    let q = p / 2;
    if p.is_multiple_of(2) {
        let denom: f64 = (0..q)
            .map(|r| 4.0 * (PI * (2 * r + 1) as f64 / (2.0 * mf)).sin().powi(2))
            .product();
        2.0 / denom
    } else {
        let denom: f64 = (1..=q).map(|r| 4.0 * (PI * r as f64 / mf).sin().powi(2)).product();
        mf / denom
    }
}

/// Roots of sector `p` closest to 1 (by argument), as a sorted index selection.
pub fn top_selection(m: usize, p: usize) -> Vec<usize> {
    let roots = roots_for_sector(m, p);
    let mut order: Vec<usize> = (0..m).collect();
    order.sort_by(|&a, &b| roots[a].arg().abs().total_cmp(&roots[b].arg().abs()).then(a.cmp(&b)));
    let mut sel: Vec<usize> = order.into_iter().take(p).collect();
    sel.sort_unstable();
    sel
}

/// Eigenvalue with the largest real part over all selections at `b = c = 1`.
pub fn lambda_max_by_enumeration(m: usize, p: usize) -> Complex64 {
    Subset::all_of_size(m, p)
        .into_iter()
        .map(|s| complementary_eigenvalue(m, p, &s.members().collect::<Vec<_>>(), 1.0, 1.0))
        .max_by(|a, b| a.re.total_cmp(&b.re))
        .expect("at least one selection")
}

/// `p_0 = m - 2⌊(m+1)/3⌋`, the dominant sector.
pub fn p_zero(m: usize) -> usize {
    m - n_zero(m)
}

/// `n_0 = 2⌊(m+1)/3⌋`, the dominant number of paths.
pub fn n_zero(m: usize) -> usize {
    2 * ((m + 1) / 3)
}

/// `prod_{j=1}^{⌊(m+1)/3⌋} (2 cos(π(2j-1)/(2m)))²`.
pub fn growth_product_form(m: usize) -> f64 {
    (1..=(m + 1) / 3)
        .map(|j| (2.0 * (PI * (2 * j - 1) as f64 / (2.0 * m as f64)).cos()).powi(2))
        .product()
}

/// The growth constant `rho(m)`, cross-checked against `lambda_max_sector(m, p_0)`.
pub fn growth_constant(m: usize) -> Result<f64> {
    if m < 3 {
        return Err(Error::InvalidParams(format!("m must be at least 3, got {m}")));
    }
    let product = growth_product_form(m);
    let sector = lambda_max_sector(m, p_zero(m));
    if ((product - sector) / sector).abs() > IDENTITY_TOL {
        return Err(Error::InternalMismatch(format!(
            "growth constant for m={m}: product form {product} vs sector maximum {sector}"
        )));
    }
    Ok(product)
}

#[derive(Clone, Debug, Serialize)]
pub struct PositivityReport {
    pub m: usize,
    pub p: usize,
    pub selection: Vec<usize>,
    /// Smallest amplitude after phase normalisation, relative to the largest.
    pub min_relative_amplitude: f64,
    /// Largest imaginary part after phase normalisation, relative to the largest amplitude.
    pub max_relative_imaginary: f64,
}

/// The top Bethe vector of sector `p`, rotated so that its first amplitude is
/// real positive, must be real and strictly positive.
pub fn positivity_check(m: usize, p: usize) -> Result<PositivityReport> {
    let selection = top_selection(m, p);
    let (vector, _) = bethe_eigenpair(m, p, &selection, 1.0, 1.0)?;
    let first = vector.amplitudes[0];
    let phase = first.conj() / first.norm();
    let rotated: Vec<Complex64> = vector.amplitudes.iter().map(|a| a * phase).collect();
    let scale = rotated.iter().map(|a| a.norm()).fold(0.0, f64::max);
    let min_re = rotated.iter().map(|a| a.re / scale).fold(f64::INFINITY, f64::min);
    let max_im = rotated.iter().map(|a| (a.im / scale).abs()).fold(0.0, f64::max);
    let report = PositivityReport {
        m,
        p,
        selection,
        min_relative_amplitude: min_re,
        max_relative_imaginary: max_im,
    };
    if max_im > RESIDUAL_TOL || min_re <= RESIDUAL_TOL {
        return Err(Error::PositivityViolation { m, detail: format!("{report:?}") });
    }
    Ok(report)
}

pub fn perron_positivity_check(m: usize) -> Result<PositivityReport> {
    if m > VERIFY_CAP {
        return Err(Error::TooLarge(format!("positivity check limited to m <= {VERIFY_CAP}")));
    }
    positivity_check(m, p_zero(m))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn close(a: f64, b: f64, rel: f64) -> bool {
        (a - b).abs() <= rel * b.abs().max(1.0)
    }

    #[test]
    fn sector_roots() {
        let r = roots_for_sector(3, 1);
        let w = Complex64::from_polar(1.0, 2.0 * PI / 3.0);
        assert!((r[0] - 1.0).norm() < 1e-15);
        assert!((r[1] - w).norm() < 1e-15);
        assert!((r[2] - w.conj()).norm() < 1e-15);
        let r = roots_for_sector(4, 2);
        for z in &r {
            assert!((z.powu(4) + 1.0).norm() < 1e-12);
        }
        assert!((r[0] - Complex64::from_polar(1.0, PI / 4.0)).norm() < 1e-15);
        assert!((r[3] - Complex64::from_polar(1.0, -PI / 4.0)).norm() < 1e-15);
        for m in 3..12 {
            for p in 0..=m {
                let sign = if (p + 1) % 2 == 0 { 1.0 } else { -1.0 };
                for z in roots_for_sector(m, p) {
                    assert!((z.powu(m as u32) - sign).norm() < 1e-12);
                }
            }
        }
    }

    #[test]
    fn eigenpair_examples() {
        let (_, l) = bethe_eigenpair(3, 1, &[0], 1.0, 1.0).unwrap();
        assert!((l - 3.0).norm() < 1e-12);
        let (_, l) = bethe_eigenpair(3, 1, &[1], 1.0, 1.0).unwrap();
        assert!(l.norm() < 1e-12);
        let (v, l) = bethe_eigenpair(5, 5, &[0, 1, 2, 3, 4], 1.7, 0.6).unwrap();
        assert!((l - 1.0).norm() < 1e-15);
        assert_eq!(v.basis, vec![Subset::full(5)]);
        let (_, l) = bethe_eigenpair(4, 2, &[0, 3], 1.0, 1.0).unwrap();
        assert!((l - (2.0 + 2f64.sqrt())).norm() < 1e-12);
        assert!(matches!(bethe_eigenpair(4, 2, &[1, 1], 1.0, 1.0), Err(Error::DegenerateRoots(_))));
        assert!(matches!(bethe_eigenpair(4, 2, &[1], 1.0, 1.0), Err(Error::DegenerateRoots(_))));
    }

    #[test]
    fn coinciding_roots_give_zero_vector() {
        let z = roots_for_sector(5, 2)[1];
        let v = bethe_vector(5, &[z, z]);
        assert!(v.norm() < 1e-12);
        let w = roots_for_sector(5, 2)[3];
        let a = bethe_vector(5, &[z, w]);
        let b = bethe_vector(5, &[w, z]);
        for (x, y) in a.amplitudes.iter().zip(&b.amplitudes) {
            assert!((x + y).norm() < 1e-12);
        }
    }

    #[test]
    fn verify_small_sectors() {
        let s = verify_sector(3, 1, 1.0, 1.0, RESIDUAL_TOL).unwrap();
        let mut eig: Vec<f64> = s.entries.iter().map(|e| e.eigenvalue.re).collect();
        eig.sort_by(f64::total_cmp);
        assert!(eig[0].abs() < 1e-12 && eig[1].abs() < 1e-12 && (eig[2] - 3.0).abs() < 1e-12);
        let s = verify_sector(4, 2, 0.8, 1.9, RESIDUAL_TOL).unwrap();
        assert_eq!((s.entries.len(), s.rank), (6, 6));
        for m in 3..=7 {
            for p in 0..=m {
                let s = verify_sector(m, p, 1.3, 0.55, RESIDUAL_TOL).unwrap();
                assert_eq!(s.entries.len(), Subset::all_of_size(m, p).len());
            }
        }
    }

    #[test]
    fn quotient_form_matches_complementary_product() {
        for m in 3..=9 {
            for p in 0..=m {
                for sel in Subset::all_of_size(m, p) {
                    let sel: Vec<usize> = sel.members().collect();
                    let a = complementary_eigenvalue(m, p, &sel, 1.4, 0.8);
                    let b = quotient_eigenvalue(m, p, &sel, 1.4, 0.8);
                    assert!((a - b).norm() <= 1e-9 * a.norm().max(1.0));
                }
            }
        }
    }

    #[test]
    fn identity_examples() {
        assert!(roots_identity_check(5, 1, 2.0, 3.0) <= 1e-9 * (32.0 + 243.0));
        for m in 3..10 {
            for p in 0..=m {
                assert_eq!(roots_identity_check(m, p, 1.0, 0.0), 0.0);
            }
        }
        assert!(roots_identity_check(6, 2, 1.0, 1.0) < 1e-12);
    }

    #[test]
    fn lambda_max_examples() {
        assert!(close(lambda_max_sector(3, 1), 3.0, 1e-12));
        assert!(close(lambda_max_sector(4, 2), 2.0 + 2f64.sqrt(), 1e-12));
        assert!(close(lambda_max_sector(6, 2), 4.0 + 2.0 * 3f64.sqrt(), 1e-12));
        for m in 3..=12 {
            for p in 0..=m {
                let best = lambda_max_by_enumeration(m, p);
                let formula = lambda_max_sector(m, p);
                assert!(close(best.re, formula, 1e-12), "m={m} p={p}: {best} vs {formula}");
                assert!(best.im.abs() <= 1e-12 * formula);
            }
        }
    }

    #[test]
    fn dominant_sector_indices() {
        assert_eq!((p_zero(3), p_zero(4), p_zero(5)), (1, 2, 1));
        assert_eq!((p_zero(6), n_zero(6)), (2, 4));
        assert_eq!(p_zero(7), 3);
        for m in 3..200 {
            assert_eq!(p_zero(m) + n_zero(m), m);
            assert_eq!(p_zero(m) % 2, m % 2);
        }
    }

    #[test]
    fn growth_constant_examples() {
        assert!(close(growth_constant(3).unwrap(), 3.0, 1e-12));
        assert!(close(growth_constant(5).unwrap(), 5.0, 1e-12));
        assert!(close(growth_constant(4).unwrap(), 2.0 + 2f64.sqrt(), 1e-12));
        assert!(matches!(growth_constant(2), Err(Error::InvalidParams(_))));
    }

    #[test]
    fn dominant_sector_maximises_over_parity() {
        for m in 3..=64 {
            let p0 = p_zero(m);
            let best = lambda_max_sector(m, p0);
            for p in (m % 2..=m).step_by(2) {
                assert!(lambda_max_sector(m, p) <= best * (1.0 + 1e-12), "m={m} p={p}");
            }
        }
    }

    #[test]
    fn perron_vectors() {
        for m in 3..=10 {
            perron_positivity_check(m).unwrap();
        }
        let (v, _) = bethe_eigenpair(3, 1, &[0], 1.0, 1.0).unwrap();
        assert!(v.amplitudes.iter().all(|a| (a - 1.0).norm() < 1e-12));
        let (v, _) = bethe_eigenpair(4, 2, &top_selection(4, 2), 1.0, 1.0).unwrap();
        // Amplitudes are proportional to sin(π(l2 - l1)/4).
        let ratios: Vec<Complex64> = v
            .basis
            .iter()
            .zip(&v.amplitudes)
            .map(|(s, a)| {
                let l: Vec<usize> = s.members().collect();
                a / (PI * (l[1] - l[0]) as f64 / 4.0).sin()
            })
            .collect();
        assert!(ratios.iter().all(|r| (r - ratios[0]).norm() < 1e-12));
    }
}
