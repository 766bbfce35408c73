//! Ratios of zeros of a trinomial, their classification (real line, unit
//! circle) and the geometric structure of the zero set.

use std::f64::consts::PI;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::precise;
use crate::roots::{RootSet, SolverOptions};
use crate::trinomial::{self, TrinomialSpec};

/// Default relative classification tolerance.
pub const DEFAULT_TOL: f64 = 1e-6;
/// Ratio values closer than this (relative) count as one value.
pub const VALUE_DEDUP_TOL: f64 = 1e-9;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum RatioKind {
    Real,
    UnitCircle,
    Both,
    Neither,
}

impl RatioKind {
    pub fn is_real(self) -> bool {
        matches!(self, RatioKind::Real | RatioKind::Both)
    }

    pub fn on_circle(self) -> bool {
        matches!(self, RatioKind::UnitCircle | RatioKind::Both)
    }

    pub fn as_str(self) -> &'static str {
        match self {
            RatioKind::Real => "Real",
            RatioKind::UnitCircle => "UnitCircle",
            RatioKind::Both => "Both",
            RatioKind::Neither => "Neither",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct RatioRecord {
    /// `t_i / t_j`
    pub q: Complex64,
    pub i: usize,
    pub j: usize,
    pub kind: RatioKind,
    pub dist_to_real: f64,
    pub dist_to_circle: f64,
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct ZeroGeometry {
    /// Index sets of zeros sharing a modulus.
    pub equimodular_groups: Vec<Vec<usize>>,
    /// Index sets on one line through the origin, with points on both sides.
    pub null_collinear_groups: Vec<Vec<usize>>,
}

pub fn classify_ratio(q: Complex64, tol: f64) -> RatioKind {
    let real = q.im.abs() <= tol * (1.0 + q.norm());
    let circle = (q.norm() - 1.0).abs() <= tol;
    match (real, circle) {
        (true, true) => RatioKind::Both,
        (true, false) => RatioKind::Real,
        (false, true) => RatioKind::UnitCircle,
        (false, false) => RatioKind::Neither,
    }
}

fn record(q: Complex64, i: usize, j: usize, tol: f64) -> RatioRecord {
    RatioRecord {
        q,
        i,
        j,
        kind: classify_ratio(q, tol),
        dist_to_real: q.im.abs(),
        dist_to_circle: (q.norm() - 1.0).abs(),
    }
}

fn check_nonzero(rs: &RootSet) -> Result<()> {
    if rs.roots.iter().any(|r| r.norm() < 1e-12) {
        return Err(Error::ZeroRoot);
    }
    Ok(())
}

/// Ordered ratios `t_i / t_j`, `i != j`, skipping pairs within one cluster.
pub fn all_ratios(rs: &RootSet, tol: f64) -> Result<Vec<RatioRecord>> {
    check_nonzero(rs)?;
    let mut out = Vec::with_capacity(rs.len() * rs.len().saturating_sub(1));
    for i in 0..rs.len() {
        for j in 0..rs.len() {
            if i != j && !rs.same_cluster(i, j) {
                out.push(record(rs.roots[i] / rs.roots[j], i, j, tol));
            }
        }
    }
    Ok(out)
}

/// Ratios of the trinomial's zeros after double-double polishing.
pub fn precise_ratios(tri: &TrinomialSpec, rs: &RootSet, tol: f64) -> Result<Vec<RatioRecord>> {
    check_nonzero(rs)?;
    let polished: Vec<_> = (0..rs.len())
        .map(|i| {
            if rs.clusters.iter().any(|g| g.contains(&i)) {
                precise::dd(rs.roots[i])
            } else {
                trinomial::polish_dd(tri, rs.roots[i])
            }
        })
        .collect();
    let mut out = Vec::new();
    for i in 0..rs.len() {
        for j in 0..rs.len() {
            if i != j && !rs.same_cluster(i, j) {
                out.push(record(precise::to_c64(precise::div(polished[i], polished[j])), i, j, tol));
            }
        }
    }
    Ok(out)
}

/// Values of ratios of distinct zeros (clusters merged), deduplicated.
pub fn distinct_ratio_values(rs: &RootSet) -> Result<Vec<Complex64>> {
    check_nonzero(rs)?;
    let zeros = rs.distinct();
    let mut values: Vec<Complex64> = Vec::new();
    for (i, zi) in zeros.iter().enumerate() {
        for (j, zj) in zeros.iter().enumerate() {
            if i == j {
                continue;
            }
            let q = zi.value / zj.value;
            if !values.iter().any(|v| (v - q).norm() <= VALUE_DEDUP_TOL * (1.0 + q.norm())) {
                values.push(q);
            }
        }
    }
    Ok(values)
}

/// Number of distinct real values among ratios of distinct zeros.
pub fn count_real_ratios(rs: &RootSet, tol: f64) -> Result<usize> {
    Ok(distinct_ratio_values(rs)?
        .into_iter()
        .filter(|&q| classify_ratio(q, tol).is_real())
        .count())
}

/// Splits sorted `(key, index)` pairs into maximal chains with consecutive
/// keys within `gap(key)`.
fn chain_groups(mut keyed: Vec<(f64, usize)>, gap: impl Fn(f64) -> f64) -> Vec<Vec<usize>> {
    keyed.sort_by(|a, b| a.0.total_cmp(&b.0));
    let mut groups: Vec<Vec<(f64, usize)>> = Vec::new();
    for item in keyed {
        match groups.last_mut() {
            Some(g) if item.0 - g.last().unwrap().0 <= gap(item.0) => g.push(item),
            _ => groups.push(vec![item]),
        }
    }
    groups
        .into_iter()
        .map(|g| {
            let mut idx: Vec<usize> = g.into_iter().map(|(_, i)| i).collect();
            idx.sort_unstable();
            idx
        })
        .collect()
}

/// Equimodular and null-collinear groups among the distinct zeros. Indices
/// refer to `rs.roots`; a cluster is represented by its first member.
pub fn zero_geometry(rs: &RootSet, tol: f64) -> ZeroGeometry {
    let zeros: Vec<(usize, Complex64)> = rs
        .distinct()
        .into_iter()
        .map(|d| (d.members[0], d.value))
        .filter(|(_, z)| z.norm() > 0.0)
        .collect();

    let equimodular_groups = chain_groups(
        zeros.iter().map(|&(i, z)| (z.norm().ln(), i)).collect(),
        |_| tol,
    )
    .into_iter()
    .filter(|g| g.len() >= 2)
    .collect();

    // direction modulo pi, wrapped so that angles near 0 and near pi meet
    let mut dirs: Vec<(f64, usize)> = zeros
        .iter()
        .map(|&(i, z)| (z.arg().rem_euclid(PI), i))
        .collect();
    dirs.sort_by(|a, b| a.0.total_cmp(&b.0));
    let mut groups = chain_groups(dirs.clone(), |_| tol);
    if groups.len() >= 2 {
        let first = dirs.first().unwrap().0;
        let last = dirs.last().unwrap().0;
        if first + PI - last <= tol {
            let head = groups.remove(0);
            groups.last_mut().unwrap().extend(head);
            groups.last_mut().unwrap().sort_unstable();
        }
    }
    let value = |i: usize| zeros.iter().find(|(j, _)| *j == i).unwrap().1;
    let null_collinear_groups = groups
        .into_iter()
        .filter(|g| {
            if g.len() < 2 {
                return false;
            }
            let reference = value(g[0]);
            g.iter().any(|&i| (value(i) / reference).re < 0.0)
        })
        .collect();

    ZeroGeometry {
        equimodular_groups,
        null_collinear_groups,
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MainTheoremReport {
    pub holds: bool,
    /// The zeros are not all distinct; the ratio 1 witnesses the claim.
    pub repeated_zero: bool,
    pub witnesses: Vec<RatioRecord>,
    pub ratio_count: usize,
}

/// Some ratio of zeros is real or unimodular.
pub fn verify_main_theorem(tri: &TrinomialSpec, tol: f64, opts: &SolverOptions) -> Result<MainTheoremReport> {
    let rs = trinomial::roots(tri, opts)?;
    main_theorem_for(tri, &rs, tol)
}

pub fn main_theorem_for(tri: &TrinomialSpec, rs: &RootSet, tol: f64) -> Result<MainTheoremReport> {
    let ratios = precise_ratios(tri, rs, tol)?;
    let disc = trinomial::classical_discriminant(tri).norm();
    let repeated_zero =
        rs.has_clusters() || disc <= 1e-12 * trinomial::classical_discriminant_scale(tri);
    let witnesses: Vec<RatioRecord> = ratios
        .iter()
        .filter(|r| r.kind != RatioKind::Neither)
        .copied()
        .collect();
    Ok(MainTheoremReport {
        holds: repeated_zero || !witnesses.is_empty(),
        repeated_zero,
        witnesses,
        ratio_count: ratios.len(),
    })
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct IffReport {
    pub holds: bool,
    /// Ratios where `h` is not real, or where no ratio lies on the real line
    /// or unit circle.
    pub violations: Vec<RatioRecord>,
    /// Ratios whose inverse, conjugate or conjugate inverse is missing.
    pub closure_failures: Vec<RatioRecord>,
}

/// For every ratio `q` in the domain of `h`: `h(q)` is real, and `q` or some
/// other ratio lies on the real line or the unit circle. Also checks that
/// the ratio set is closed under inversion and conjugation.
pub fn verify_iff_characterization(tri: &TrinomialSpec, tol: f64, opts: &SolverOptions) -> Result<IffReport> {
    let rs = trinomial::roots(tri, opts)?;
    iff_characterization_for(tri, &rs, tol)
}

pub fn iff_characterization_for(tri: &TrinomialSpec, rs: &RootSet, tol: f64) -> Result<IffReport> {
    let alpha = tri.alpha();
    if !alpha.is_real {
        return Err(Error::AlphaNotReal { imag: alpha.alpha.im });
    }
    let ratios = precise_ratios(tri, rs, tol)?;
    let any_special = ratios.iter().any(|r| r.kind != RatioKind::Neither);
    let mut violations = Vec::new();
    for r in &ratios {
        let Ok(h) = trinomial::h_eval(r.q, tri.k, tri.l) else {
            continue;
        };
        let h_real = h.im.abs() <= tol * (1.0 + h.norm());
        if !h_real || !(r.kind != RatioKind::Neither || any_special) {
            violations.push(*r);
        }
    }
    let present = |target: Complex64| {
        ratios
            .iter()
            .any(|s| (s.q - target).norm() <= tol * (1.0 + target.norm()))
    };
    let closure_failures: Vec<RatioRecord> = ratios
        .iter()
        .filter(|r| !(present(r.q.inv()) && present(r.q.conj()) && present(r.q.conj().inv())))
        .copied()
        .collect();
    Ok(IffReport {
        holds: violations.is_empty() && closure_failures.is_empty(),
        violations,
        closure_failures,
    })
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CorollaryReport {
    pub holds: bool,
    pub geometry: ZeroGeometry,
    pub via_equimodular: bool,
    pub via_null_collinear: bool,
    /// Null-collinear groups larger than the size the parity rule names.
    pub oversized_groups: Vec<Vec<usize>>,
}

/// Minimum null-collinear group size: three for odd `k`, two for even `k`.
pub fn null_collinear_size(k: u32) -> usize {
    if k % 2 == 1 {
        3
    } else {
        2
    }
}

/// The zeros contain an equimodular pair or a null-collinear group of the
/// size given by the parity of `k`.
pub fn verify_corollary(tri: &TrinomialSpec, tol: f64, opts: &SolverOptions) -> Result<CorollaryReport> {
    let rs = trinomial::roots(tri, opts)?;
    Ok(corollary_for(tri, &rs, tol))
}

pub fn corollary_for(tri: &TrinomialSpec, rs: &RootSet, tol: f64) -> CorollaryReport {
    let geometry = zero_geometry(rs, tol);
    let size = null_collinear_size(tri.k);
    let via_equimodular = !geometry.equimodular_groups.is_empty();
    let via_null_collinear = geometry.null_collinear_groups.iter().any(|g| g.len() >= size);
    let oversized_groups = geometry
        .null_collinear_groups
        .iter()
        .filter(|g| g.len() > size)
        .cloned()
        .collect();
    CorollaryReport {
        holds: via_equimodular || via_null_collinear,
        geometry,
        via_equimodular,
        via_null_collinear,
        oversized_groups,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::ComplexPoly;
    use crate::roots::find_roots;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn roots_of(values: &[Complex64]) -> RootSet {
        find_roots(&ComplexPoly::from_roots(c(1.0, 0.0), values), &SolverOptions::default()).unwrap()
    }

    #[test]
    fn classify_examples() {
        assert_eq!(classify_ratio(c(-1.0, 0.0), 1e-6), RatioKind::Both);
        assert_eq!(classify_ratio(c(0.6444, 0.7647), 1e-3), RatioKind::UnitCircle);
        assert_eq!(classify_ratio(c(1.8190, 0.0), 1e-6), RatioKind::Real);
        assert_eq!(classify_ratio(c(0.4198, 1.1044), 1e-6), RatioKind::Neither);
    }

    #[test]
    fn binomial_ratios_are_roots_of_unity() {
        let s2 = 2f64.sqrt();
        let tri = TrinomialSpec::new(c(25.0 - 22.0 * s2, 4.0 - 2.0 * s2), c(0.0, 0.0), 5, 3).unwrap();
        let rs = trinomial::roots(&tri, &SolverOptions::default()).unwrap();
        let ratios = all_ratios(&rs, DEFAULT_TOL).unwrap();
        assert_eq!(ratios.len(), 20);
        for r in &ratios {
            assert!(r.kind.on_circle());
            assert!((r.q.powu(5) - 1.0).norm() < 1e-12);
        }
        let geometry = zero_geometry(&rs, DEFAULT_TOL);
        assert_eq!(geometry.equimodular_groups, vec![vec![0, 1, 2, 3, 4]]);
        let report = main_theorem_for(&tri, &rs, DEFAULT_TOL).unwrap();
        assert!(report.holds && !report.repeated_zero);
        assert!(corollary_for(&tri, &rs, DEFAULT_TOL).via_equimodular);
        assert!(iff_characterization_for(&tri, &rs, DEFAULT_TOL).unwrap().holds);
    }

    #[test]
    fn plus_minus_one() {
        let rs = roots_of(&[c(1.0, 0.0), c(-1.0, 0.0)]);
        let ratios = all_ratios(&rs, DEFAULT_TOL).unwrap();
        assert_eq!(ratios.len(), 2);
        for r in ratios {
            assert!((r.q + 1.0).norm() < 1e-14);
            assert!(r.kind.is_real());
        }
    }

    #[test]
    fn zero_root_is_rejected() {
        let rs = roots_of(&[c(0.0, 0.0), c(2.0, 0.0)]);
        assert!(matches!(all_ratios(&rs, DEFAULT_TOL), Err(Error::ZeroRoot)));
    }

    #[test]
    fn geometry_of_constructed_roots() {
        let rs = roots_of(&[c(1.0, 0.0), c(-2.0, 0.0), c(0.0, 1.0)]);
        let g = zero_geometry(&rs, DEFAULT_TOL);
        let pos = |v: Complex64| rs.roots.iter().position(|r| (r - v).norm() < 1e-9).unwrap();
        let mut expected = vec![pos(c(1.0, 0.0)), pos(c(0.0, 1.0))];
        expected.sort_unstable();
        assert_eq!(g.equimodular_groups, vec![expected]);
        let mut pair = vec![pos(c(1.0, 0.0)), pos(c(-2.0, 0.0))];
        pair.sort_unstable();
        assert_eq!(g.null_collinear_groups, vec![pair]);

        // {1, -2, 3i}: collinear pair only, rejected by the odd-k rule
        let rs = roots_of(&[c(1.0, 0.0), c(-2.0, 0.0), c(0.0, 3.0)]);
        let g = zero_geometry(&rs, DEFAULT_TOL);
        assert!(g.equimodular_groups.is_empty());
        assert_eq!(g.null_collinear_groups.len(), 1);
        assert!(g.null_collinear_groups[0].len() < null_collinear_size(3));
    }

    #[test]
    fn same_side_points_are_not_null_collinear() {
        let rs = roots_of(&[c(1.0, 1.0), c(2.0, 2.0), c(0.0, 3.0)]);
        assert!(zero_geometry(&rs, DEFAULT_TOL).null_collinear_groups.is_empty());
    }

    #[test]
    fn wraparound_direction() {
        // arguments just above 0 and just below pi lie on one line
        let rs = roots_of(&[c(1.0, 1e-9), c(-2.0, 1e-9), c(0.0, 5.0)]);
        let g = zero_geometry(&rs, DEFAULT_TOL);
        assert_eq!(g.null_collinear_groups.len(), 1);
        assert_eq!(g.null_collinear_groups[0].len(), 2);
    }

    #[test]
    fn symmetric_classification() {
        for q in [c(0.3, 1e-8), c(-2.0, 0.5), c(0.6, 0.8), c(5.0, 0.0)] {
            assert_eq!(classify_ratio(q, 1e-6), classify_ratio(q.conj(), 1e-6));
            assert_eq!(classify_ratio(q, 1e-6).is_real(), classify_ratio(q.inv(), 1e-6).is_real());
        }
    }
}
