//! Reproduction runs: the printed table, curve residuals, `g` profiles, the
//! `alpha*` sweep, full verification of a recurrence and randomized trials.

use std::io::Write;

use num_complex::Complex64;
use rand::{RngExt, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::classify::{self, CorollaryReport, MainTheoremReport, RatioKind, RatioRecord, ZeroGeometry};
use crate::error::{Error, Result};
use crate::poly::{generate_sequence, ComplexPoly, RecurrenceSpec};
use crate::roots::{self, find_roots, RootSet, SolverOptions};
use crate::trinomial::{self, OmegaCount, RotationPlan, TrinomialSpec};
use crate::VERSION;

const ZERO: Complex64 = Complex64::new(0.0, 0.0);

/// Printed values of the reference table (4 decimal places).
pub const TABLE1_PRINTED: &str = include_str!("../tests/data/table1_printed.json");

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Tolerances {
    /// Ratio classification (real line / unit circle).
    pub classify: f64,
    /// Curve residual bound is `max(gamma_floor, gamma_factor * root residual)`.
    pub gamma_floor: f64,
    pub gamma_factor: f64,
    /// `|q-discriminant| <= q_discriminant * |a|^(k-1) |b|^(l-1)` at ratios.
    pub q_discriminant: f64,
    /// `|A(z)| <= exclusion (1+|z|)^deg A ||A||` marks `z` as a zero of `A`;
    /// the same rule snaps `B(z)` to zero.
    pub exclusion: f64,
    /// The real-ratio count is checked only when `|alpha - beta| >= omega_margin * beta`.
    pub omega_margin: f64,
    /// Zeros whose inclusion radius exceeds `resolution (1+|z|)` are listed
    /// as unresolved instead of being verified, unless they are zeros of `B`
    /// (where `P_n` has genuine multiple zeros).
    pub resolution: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Self {
            classify: classify::DEFAULT_TOL,
            gamma_floor: 1e-6,
            gamma_factor: 100.0,
            q_discriminant: 1e-8,
            exclusion: 1e-8,
            omega_margin: 1e-6,
            resolution: 1e-6,
        }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct VerifyConfig {
    pub tolerances: Tolerances,
    pub solver: SolverOptions,
}

/// `|p(z)| <= tol (1 + |z|)^deg ||p||`
pub fn is_near_zero_of(p: &ComplexPoly, z: Complex64, tol: f64) -> bool {
    let deg = p.degree().unwrap_or(0) as i32;
    p.eval(z).norm() <= tol * (1.0 + z.norm()).powi(deg) * p.norm()
}

/// `alpha = (-1)^k B(z)^k / A(z)^l` and `|Im alpha| / (1 + |alpha|)`.
pub fn gamma_residual(spec: &RecurrenceSpec, z: Complex64) -> Result<(Complex64, f64)> {
    if is_near_zero_of(spec.a(), z, Tolerances::default().exclusion) {
        return Err(Error::ZeroOfA);
    }
    let alpha = trinomial::alpha_of(spec.a().eval(z), spec.b().eval(z), spec.k(), spec.l());
    Ok((alpha, alpha.im.abs() / (1.0 + alpha.norm())))
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct RegionFlags {
    /// `k^k / (k-l)^(k-l)`
    pub printed_bound: f64,
    /// `k^k / (l^l (k-l)^(k-l))`
    pub corrected_bound: f64,
    pub in_printed: bool,
    pub in_corrected: bool,
}

pub fn region_membership(alpha: f64, k: u32, l: u32) -> RegionFlags {
    let printed_bound = trinomial::printed_bound(k, l);
    let corrected_bound = trinomial::beta(k, l);
    RegionFlags {
        printed_bound,
        corrected_bound,
        in_printed: (0.0..printed_bound).contains(&alpha),
        in_corrected: (0.0..corrected_bound).contains(&alpha),
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct QDiscriminantCheck {
    /// Largest `|q-discriminant| / (|a|^(k-1) |b|^(l-1))` over the ratios.
    pub max_scaled: f64,
    pub ratios: usize,
    pub ok: bool,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct OmegaCheck {
    pub expected: OmegaCount,
    pub observed: usize,
    pub ok: bool,
}

/// Everything computed at one zero `z0` of `P_n`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ZeroRecord {
    pub z0: Complex64,
    pub multiplicity: usize,
    pub root_residual: f64,
    pub alpha: Complex64,
    pub gamma_residual: f64,
    pub gamma_ok: bool,
    pub region: Option<RegionFlags>,
    /// `B(z0)` was below the exclusion threshold and replaced by 0.
    pub b_snapped: bool,
    pub trinomial: TrinomialSpec,
    pub roots: RootSet,
    pub ratios: Vec<RatioRecord>,
    pub geometry: ZeroGeometry,
    pub main_theorem: MainTheoremReport,
    pub corollary: CorollaryReport,
    pub q_discriminant: Option<QDiscriminantCheck>,
    pub omega: Option<OmegaCheck>,
    pub iff_holds: Option<bool>,
}

impl ZeroRecord {
    pub fn passed(&self) -> bool {
        self.gamma_ok
            && self.main_theorem.holds
            && self.corollary.holds
            && self.q_discriminant.is_none_or(|c| c.ok)
            && self.omega.is_none_or(|c| c.ok)
    }

    fn failures(&self, n: usize) -> Vec<Failure> {
        let mut out = Vec::new();
        let mut push = |check: &str, detail: String| {
            out.push(Failure {
                n,
                z0: Some(self.z0),
                check: check.into(),
                detail,
            })
        };
        if !self.gamma_ok {
            push("gamma", format!("residual {:e}", self.gamma_residual));
        }
        if !self.main_theorem.holds {
            push("main_theorem", "no real or unimodular ratio".into());
        }
        if !self.corollary.holds {
            push("corollary", "no equimodular or null-collinear group".into());
        }
        if let Some(c) = self.q_discriminant.filter(|c| !c.ok) {
            push("q_discriminant", format!("scaled value {:e}", c.max_scaled));
        }
        if let Some(c) = self.omega.filter(|c| !c.ok) {
            push(
                "omega",
                format!("expected {} real ratios, found {}", c.expected.count, c.observed),
            );
        }
        out
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Failure {
    pub n: usize,
    pub z0: Option<Complex64>,
    pub check: String,
    pub detail: String,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SequenceRow {
    pub n: usize,
    pub degree: Option<usize>,
    pub sweeps: usize,
    pub max_root_residual: f64,
    pub clusters: usize,
    /// Zeros of `P_n` that are (numerically) zeros of `A`.
    pub excluded: Vec<Complex64>,
    /// Zeros whose inclusion disks are too wide to verify.
    pub unresolved: Vec<Complex64>,
    pub zeros: Vec<ZeroRecord>,
    pub failures: Vec<Failure>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Timings {
    pub total_seconds: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ExperimentReport {
    pub version: String,
    pub spec: RecurrenceSpec,
    pub config: VerifyConfig,
    pub rows: Vec<SequenceRow>,
    pub passed: bool,
    pub failures: Vec<Failure>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub timings: Option<Timings>,
}

impl ExperimentReport {
    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }

    pub fn from_json(text: &str) -> Result<Self> {
        Ok(serde_json::from_str(text)?)
    }

    pub fn zeros(&self) -> impl Iterator<Item = (usize, &ZeroRecord)> {
        self.rows.iter().flat_map(|r| r.zeros.iter().map(move |z| (r.n, z)))
    }

    /// One CSV row per ratio, preceded by `#` header lines.
    pub fn write_csv<W: Write>(&self, mut out: W, header: &str) -> Result<()> {
        out.write_all(header.as_bytes())?;
        let mut w = csv::Writer::from_writer(out);
        w.write_record(RATIO_COLUMNS)?;
        for (n, z) in self.zeros() {
            for r in &z.ratios {
                w.write_record(ratio_row(n, z.z0, r))?;
            }
        }
        w.flush()?;
        Ok(())
    }
}

pub const RATIO_COLUMNS: [&str; 10] = [
    "n", "z0_re", "z0_im", "i", "j", "q_re", "q_im", "kind", "dist_real", "dist_circle",
];

pub fn fmt_f64(x: f64) -> String {
    format!("{x:.16e}")
}

pub fn ratio_row(n: usize, z0: Complex64, r: &RatioRecord) -> Vec<String> {
    vec![
        n.to_string(),
        fmt_f64(z0.re),
        fmt_f64(z0.im),
        r.i.to_string(),
        r.j.to_string(),
        fmt_f64(r.q.re),
        fmt_f64(r.q.im),
        r.kind.as_str().to_string(),
        fmt_f64(r.dist_to_real),
        fmt_f64(r.dist_to_circle),
    ]
}

/// `# trl <version>` and `# config: <json>` lines.
pub fn header_lines(config_json: &str) -> String {
    format!("# trl {VERSION}\n# config: {config_json}\n")
}

/// Full analysis at an admissible zero.
pub fn analyze_zero(
    spec: &RecurrenceSpec,
    z0: Complex64,
    multiplicity: usize,
    root_residual: f64,
    cfg: &VerifyConfig,
) -> Result<ZeroRecord> {
    let tol = &cfg.tolerances;
    let (alpha, gamma_res) = gamma_residual(spec, z0)?;
    let gamma_ok = gamma_res <= tol.gamma_floor.max(tol.gamma_factor * root_residual);
    let b_snapped = is_near_zero_of(spec.b(), z0, tol.exclusion);
    let mut tri = trinomial::specialize(spec, z0)?;
    if b_snapped {
        tri.b = ZERO;
    }
    let alpha = if b_snapped { ZERO } else { alpha };
    let rs = trinomial::roots(&tri, &cfg.solver)?;
    let ratios = classify::precise_ratios(&tri, &rs, tol.classify)?;
    let main_theorem = classify::main_theorem_for(&tri, &rs, tol.classify)?;
    let corollary = classify::corollary_for(&tri, &rs, tol.classify);

    let q_discriminant = if tri.b != ZERO {
        let scale = trinomial::q_discriminant_scale(&tri);
        let values = trinomial::ratio_discriminants(&tri, &rs)?;
        let max_scaled = values
            .iter()
            .map(|v| v.value.norm() / scale)
            .fold(0.0, f64::max);
        Some(QDiscriminantCheck {
            max_scaled,
            ratios: values.len(),
            ok: max_scaled <= tol.q_discriminant,
        })
    } else {
        None
    };

    let beta = trinomial::beta(tri.k, tri.l);
    let omega = if gamma_ok && (alpha.re - beta).abs() >= tol.omega_margin * beta {
        let expected = trinomial::omega_expected(Complex64::new(alpha.re, 0.0), tri.k, tri.l)?;
        let observed = classify::count_real_ratios(&rs, tol.classify)?;
        Some(OmegaCheck {
            expected,
            observed,
            ok: expected.count as usize == observed,
        })
    } else {
        None
    };

    let iff_holds = if tri.alpha().is_real {
        Some(classify::iff_characterization_for(&tri, &rs, tol.classify)?.holds)
    } else {
        None
    };

    Ok(ZeroRecord {
        z0,
        multiplicity,
        root_residual,
        alpha,
        gamma_residual: gamma_res,
        gamma_ok,
        region: gamma_ok.then(|| region_membership(alpha.re, tri.k, tri.l)),
        b_snapped,
        trinomial: tri,
        geometry: corollary.geometry.clone(),
        roots: rs,
        ratios,
        main_theorem,
        corollary,
        q_discriminant,
        omega,
        iff_holds,
    })
}

#[derive(Clone, Debug, Default, PartialEq)]
pub struct ZeroPartition {
    /// `(z0, multiplicity, max member residual)`
    pub admissible: Vec<(Complex64, usize, f64)>,
    /// Zeros of `A`.
    pub excluded: Vec<Complex64>,
    /// Zeros not separated from their neighbours at working precision.
    pub unresolved: Vec<Complex64>,
}

/// Zeros of `B` that are also zeros of `p` (and not of `A`).
fn shared_b_zeros(spec: &RecurrenceSpec, p: &ComplexPoly, tol: &Tolerances) -> Vec<Complex64> {
    if spec.b().degree().unwrap_or(0) < 1 {
        return Vec::new();
    }
    let Ok(rs) = find_roots(spec.b(), &SolverOptions::default()) else {
        return Vec::new();
    };
    rs.distinct()
        .into_iter()
        .map(|d| roots::refine_root(spec.b(), d.value).unwrap_or(d.value))
        .filter(|&w| is_near_zero_of(p, w, tol.exclusion) && !is_near_zero_of(spec.a(), w, tol.exclusion))
        .collect()
}

/// Zeros of `p`, merged by cluster.
///
/// At a zero `w` of `B`, `P_n` can have a multiple zero that no working
/// precision separates from its neighbours. Unresolved zeros whose inclusion
/// disks contain such a `w` are replaced by `w` itself.
pub fn admissible_zeros(spec: &RecurrenceSpec, p: &ComplexPoly, rs: &RootSet, tol: &Tolerances) -> ZeroPartition {
    let mut out = ZeroPartition::default();
    // (value, radius, multiplicity, residual)
    let mut pending: Vec<(Complex64, f64, usize, f64)> = Vec::new();
    for d in rs.distinct() {
        let near_a = is_near_zero_of(spec.a(), d.value, tol.exclusion)
            || d.members.iter().any(|&m| is_near_zero_of(spec.a(), rs.roots[m], tol.exclusion));
        let residual = d.members.iter().map(|&m| rs.residuals[m]).fold(0.0, f64::max);
        if near_a {
            out.excluded.push(d.value);
        } else if d.radius > tol.resolution * (1.0 + d.value.norm())
            && !is_near_zero_of(spec.b(), d.value, tol.exclusion)
        {
            pending.push((d.value, d.radius, d.multiplicity, residual));
        } else {
            out.admissible.push((d.value, d.multiplicity, residual));
        }
    }
    if !pending.is_empty() {
        for w in shared_b_zeros(spec, p, tol) {
            let (near, far): (Vec<_>, Vec<_>) = pending.into_iter().partition(|e| (e.0 - w).norm() <= e.1);
            pending = far;
            let m: usize = near.iter().map(|e| e.2).sum();
            if m >= 2 {
                let residual = near.iter().map(|e| e.3).fold(0.0, f64::max);
                out.admissible.push((w, m, residual));
            } else {
                pending.extend(near);
            }
        }
    }
    out.unresolved = pending.into_iter().map(|e| e.0).collect();
    out
}

fn analyze_row(spec: &RecurrenceSpec, n: usize, p: &ComplexPoly, cfg: &VerifyConfig) -> SequenceRow {
    let mut row = SequenceRow {
        n,
        degree: p.degree(),
        sweeps: 0,
        max_root_residual: 0.0,
        clusters: 0,
        excluded: Vec::new(),
        unresolved: Vec::new(),
        zeros: Vec::new(),
        failures: Vec::new(),
    };
    if p.degree().unwrap_or(0) < 1 {
        return row;
    }
    let rs = match find_roots(p, &cfg.solver) {
        Ok(rs) => rs,
        Err(e) => {
            row.failures.push(Failure {
                n,
                z0: None,
                check: "root_finder".into(),
                detail: e.to_string(),
            });
            return row;
        }
    };
    row.sweeps = rs.sweeps;
    row.max_root_residual = rs.max_residual();
    row.clusters = rs.clusters.len();
    let ZeroPartition {
        admissible,
        excluded,
        unresolved,
    } = admissible_zeros(spec, p, &rs, &cfg.tolerances);
    row.excluded = excluded;
    row.unresolved = unresolved;
    let results: Vec<Result<ZeroRecord>> = admissible
        .par_iter()
        .map(|&(z0, m, res)| analyze_zero(spec, z0, m, res, cfg))
        .collect();
    for (result, &(z0, _, _)) in results.into_iter().zip(&admissible) {
        match result {
            Ok(record) => {
                row.failures.extend(record.failures(n));
                row.zeros.push(record);
            }
            Err(e) => row.failures.push(Failure {
                n,
                z0: Some(z0),
                check: "analysis".into(),
                detail: e.to_string(),
            }),
        }
    }
    row
}

/// Curve residual, main theorem, corollary, q-discriminant and real-ratio
/// count at every admissible zero of every `P_n`, `n` in `ns`.
pub fn run_full_verification(spec: &RecurrenceSpec, ns: &[usize], cfg: &VerifyConfig) -> ExperimentReport {
    let n_max = ns.iter().copied().max().unwrap_or(0);
    let seq = generate_sequence(spec, n_max);
    let rows: Vec<SequenceRow> = ns
        .par_iter()
        .map(|&n| analyze_row(spec, n, &seq[n], cfg))
        .collect();
    let failures: Vec<Failure> = rows.iter().flat_map(|r| r.failures.clone()).collect();
    ExperimentReport {
        version: VERSION.to_string(),
        spec: spec.clone(),
        config: cfg.clone(),
        passed: failures.is_empty(),
        rows,
        failures,
        timings: None,
    }
}

// ---------------------------------------------------------------------------
// reference table

#[derive(Clone, Debug, Deserialize)]
struct PrintedRatio {
    q: Complex64,
    highlighted: bool,
}

#[derive(Clone, Debug, Deserialize)]
struct PrintedRow {
    n: usize,
    label: String,
    z0: Complex64,
    alpha: f64,
    ratios: Vec<PrintedRatio>,
}

#[derive(Clone, Debug, Deserialize)]
struct PrintedTable {
    rows: Vec<PrintedRow>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Table1Config {
    /// Cell tolerance for zeros and ratios.
    pub tol: f64,
    /// Cell tolerance for `alpha`.
    pub alpha_tol: f64,
    /// Distance within which a printed zero is located among the computed ones.
    pub anchor_tol: f64,
    pub solver: SolverOptions,
}

impl Default for Table1Config {
    fn default() -> Self {
        Self {
            tol: 5e-4,
            alpha_tol: 1e-4,
            anchor_tol: 5e-4,
            solver: SolverOptions::default(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Table1Ratio {
    pub printed: Complex64,
    pub highlighted: bool,
    pub computed: Complex64,
    /// One ordered pair `(i, j)` realising the value.
    pub i: usize,
    pub j: usize,
    pub kind: RatioKind,
    pub diff: f64,
    /// Number of ordered pairs sharing the value.
    pub multiplicity: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Table1Row {
    pub n: usize,
    pub label: String,
    pub printed_z0: Complex64,
    pub z0: Complex64,
    pub z0_diff: f64,
    pub printed_alpha: f64,
    pub alpha: Complex64,
    pub alpha_diff: f64,
    pub trinomial: TrinomialSpec,
    pub rotation: Option<RotationPlan>,
    pub roots: RootSet,
    pub ratios: Vec<Table1Ratio>,
    pub real_ratio_count: usize,
    pub omega_expected: OmegaCount,
    pub main_theorem: bool,
    pub corollary: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Table1Report {
    pub version: String,
    pub config: Table1Config,
    pub rows: Vec<Table1Row>,
    pub max_z0_diff: f64,
    pub max_alpha_diff: f64,
    pub max_ratio_diff: f64,
    pub mismatches: Vec<String>,
    pub passed: bool,
}

impl Table1Report {
    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }

    pub fn from_json(text: &str) -> Result<Self> {
        Ok(serde_json::from_str(text)?)
    }

    /// Ratio rows in the report schema, with printed value, difference and
    /// multiplicity appended.
    pub fn write_csv<W: Write>(&self, mut out: W, header: &str) -> Result<()> {
        out.write_all(header.as_bytes())?;
        let mut w = csv::Writer::from_writer(out);
        let mut columns: Vec<&str> = RATIO_COLUMNS.to_vec();
        columns.extend(["printed_re", "printed_im", "diff", "multiplicity"]);
        w.write_record(&columns)?;
        for row in &self.rows {
            for r in &row.ratios {
                let record = RatioRecord {
                    q: r.computed,
                    i: r.i,
                    j: r.j,
                    kind: r.kind,
                    dist_to_real: r.computed.im.abs(),
                    dist_to_circle: (r.computed.norm() - 1.0).abs(),
                };
                let mut fields = ratio_row(row.n, row.z0, &record);
                fields.extend([
                    fmt_f64(r.printed.re),
                    fmt_f64(r.printed.im),
                    fmt_f64(r.diff),
                    r.multiplicity.to_string(),
                ]);
                w.write_record(&fields)?;
            }
        }
        w.flush()?;
        Ok(())
    }
}

/// Groups ratio records by value; returns `(representative, count)`.
fn ratio_values(ratios: &[RatioRecord]) -> Vec<(RatioRecord, usize)> {
    let mut out: Vec<(RatioRecord, usize)> = Vec::new();
    for r in ratios {
        match out
            .iter_mut()
            .find(|(s, _)| (s.q - r.q).norm() <= classify::VALUE_DEDUP_TOL * (1.0 + r.q.norm()))
        {
            Some((_, count)) => *count += 1,
            None => out.push((*r, 1)),
        }
    }
    out
}

fn table1_row(
    spec: &RecurrenceSpec,
    printed: &PrintedRow,
    rs: &RootSet,
    cfg: &Table1Config,
    mismatches: &mut Vec<String>,
) -> Result<Table1Row> {
    let distinct = rs.distinct();
    let nearest = distinct
        .iter()
        .min_by(|a, b| {
            (a.value - printed.z0)
                .norm()
                .total_cmp(&(b.value - printed.z0).norm())
        })
        .ok_or(Error::NoRoots)?;
    let distance = (nearest.value - printed.z0).norm();
    if distance > cfg.anchor_tol {
        return Err(Error::AnchorNotFound {
            label: printed.label.clone(),
            distance,
        });
    }
    let z0 = nearest.value;
    let tolerances = Tolerances::default();
    let mut tri = trinomial::specialize(spec, z0)?;
    if is_near_zero_of(spec.b(), z0, tolerances.exclusion) {
        tri.b = ZERO;
    }
    let alpha = tri.alpha().alpha;
    let alpha_diff = (alpha - printed.alpha).norm();
    if distance > cfg.tol {
        mismatches.push(format!("{} z0: diff {distance:e}", printed.label));
    }
    if alpha_diff > cfg.alpha_tol {
        mismatches.push(format!("{} alpha: diff {alpha_diff:e}", printed.label));
    }

    let roots = trinomial::roots(&tri, &cfg.solver)?;
    let records = classify::precise_ratios(&tri, &roots, tolerances.classify)?;
    let mut values = ratio_values(&records);
    if values.len() != printed.ratios.len() {
        mismatches.push(format!(
            "{}: {} distinct computed ratios, {} printed",
            printed.label,
            values.len(),
            printed.ratios.len()
        ));
    }
    let mut ratios = Vec::new();
    for p in &printed.ratios {
        let Some(best) = (0..values.len()).min_by(|&a, &b| {
            (values[a].0.q - p.q)
                .norm()
                .total_cmp(&(values[b].0.q - p.q).norm())
        }) else {
            mismatches.push(format!("{}: printed ratio {} unmatched", printed.label, p.q));
            continue;
        };
        let (record, multiplicity) = values.remove(best);
        let diff = (record.q - p.q).norm();
        if diff > cfg.tol {
            mismatches.push(format!("{} ratio {}: diff {diff:e}", printed.label, p.q));
        }
        if p.highlighted && !record.kind.on_circle() {
            mismatches.push(format!("{} ratio {}: highlighted but off the unit circle", printed.label, p.q));
        }
        ratios.push(Table1Ratio {
            printed: p.q,
            highlighted: p.highlighted,
            computed: record.q,
            i: record.i,
            j: record.j,
            kind: record.kind,
            diff,
            multiplicity,
        });
    }
    let main = classify::main_theorem_for(&tri, &roots, tolerances.classify)?;
    let corollary = classify::corollary_for(&tri, &roots, tolerances.classify);
    Ok(Table1Row {
        n: printed.n,
        label: printed.label.clone(),
        printed_z0: printed.z0,
        z0,
        z0_diff: distance,
        printed_alpha: printed.alpha,
        alpha,
        alpha_diff,
        trinomial: tri,
        rotation: trinomial::rotate_to_real(&tri).ok(),
        real_ratio_count: classify::count_real_ratios(&roots, tolerances.classify)?,
        omega_expected: trinomial::omega_expected(Complex64::new(alpha.re, 0.0), tri.k, tri.l)?,
        main_theorem: main.holds,
        corollary: corollary.holds,
        roots,
        ratios,
    })
}

/// Recomputes the reference table and diffs it against the printed values.
pub fn run_table1(cfg: &Table1Config) -> Result<Table1Report> {
    let printed: PrintedTable = serde_json::from_str(TABLE1_PRINTED)?;
    let spec = RecurrenceSpec::table1();
    let n_max = printed.rows.iter().map(|r| r.n).max().unwrap_or(0);
    let seq = generate_sequence(&spec, n_max);
    let mut ns: Vec<usize> = printed.rows.iter().map(|r| r.n).collect();
    ns.dedup();
    let root_sets: Vec<(usize, RootSet)> = ns
        .par_iter()
        .map(|&n| find_roots(&seq[n], &cfg.solver).map(|rs| (n, rs)))
        .collect::<Result<_>>()?;
    let mut mismatches = Vec::new();
    let mut rows = Vec::new();
    for p in &printed.rows {
        let rs = &root_sets.iter().find(|(n, _)| *n == p.n).unwrap().1;
        rows.push(table1_row(&spec, p, rs, cfg, &mut mismatches)?);
    }
    let max_of = |f: &dyn Fn(&Table1Row) -> f64| rows.iter().map(f).fold(0.0, f64::max);
    let max_ratio_diff = max_of(&|r| r.ratios.iter().map(|x| x.diff).fold(0.0, f64::max));
    Ok(Table1Report {
        version: VERSION.to_string(),
        config: cfg.clone(),
        max_z0_diff: max_of(&|r| r.z0_diff),
        max_alpha_diff: max_of(&|r| r.alpha_diff),
        max_ratio_diff,
        passed: mismatches.is_empty(),
        mismatches,
        rows,
    })
}

// ---------------------------------------------------------------------------
// plot series

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct AlphaStarPoint {
    pub n: usize,
    pub alpha_star: Option<f64>,
    pub admissible: usize,
    pub note: Option<String>,
}

/// `max Re alpha(z0)` over the zeros of `P_n` that are not zeros of `A` and
/// whose `alpha` is real within `1e-6`.
pub fn alpha_star_sweep(spec: &RecurrenceSpec, ns: &[usize], solver: &SolverOptions) -> Vec<AlphaStarPoint> {
    let n_max = ns.iter().copied().max().unwrap_or(0);
    let seq = generate_sequence(spec, n_max);
    let tol = Tolerances::default();
    ns.par_iter()
        .map(|&n| {
            let p = &seq[n];
            let skip = |note: String| AlphaStarPoint {
                n,
                alpha_star: None,
                admissible: 0,
                note: Some(note),
            };
            if p.degree().unwrap_or(0) < 1 {
                return skip("P_n has no zeros".into());
            }
            let rs = match find_roots(p, solver) {
                Ok(rs) => rs,
                Err(e) => return skip(e.to_string()),
            };
            // the realness filter below is the accuracy gate here
            let zeros = admissible_zeros(spec, p, &rs, &tol);
            let candidates: Vec<Complex64> = zeros
                .admissible
                .iter()
                .map(|&(z, _, _)| z)
                .chain(zeros.unresolved.iter().copied())
                .collect();
            if candidates.is_empty() {
                return skip("no admissible zeros".into());
            }
            let real: Vec<f64> = candidates
                .iter()
                .filter_map(|&z| gamma_residual(spec, z).ok())
                .filter(|&(_, res)| res <= 1e-6)
                .map(|(a, _)| a.re)
                .collect();
            let alpha_star = real.iter().copied().reduce(f64::max);
            let lost = candidates.len() - real.len();
            let note = match (alpha_star, lost) {
                (None, _) => Some("no real alpha".to_string()),
                (Some(_), 0) => None,
                (Some(_), lost) => Some(format!(
                    "{lost} zeros too ill-conditioned for working precision; alpha_star is a lower bound"
                )),
            };
            AlphaStarPoint {
                n,
                alpha_star,
                admissible: candidates.len(),
                note,
            }
        })
        .collect()
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GProfile {
    pub k: u32,
    pub l: u32,
    /// Reference level `g(1)`.
    pub g1: f64,
    /// `[x, g(x)]` samples on `[-1, 1]`.
    pub samples: Vec<[f64; 2]>,
    pub excluded: Vec<f64>,
}

/// Samples `g` on `points` equally spaced abscissae in `[-1, 1]`
/// (`points` odd puts 0 on the grid, where `g` is undefined).
pub fn g_profile(k: u32, l: u32, points: usize) -> GProfile {
    let points = points.max(2);
    let mut samples = Vec::with_capacity(points);
    let mut excluded = Vec::new();
    for i in 0..points {
        let x = if i == points - 1 {
            1.0
        } else {
            -1.0 + 2.0 * i as f64 / (points - 1) as f64
        };
        match trinomial::g_eval(x, k, l) {
            Ok(g) => samples.push([x, g]),
            Err(_) => excluded.push(x),
        }
    }
    GProfile {
        k,
        l,
        g1: trinomial::beta(k, l),
        samples,
        excluded,
    }
}

// ---------------------------------------------------------------------------
// randomized trials

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FuzzConfig {
    pub trials: usize,
    pub seed: u64,
    /// Coefficients are uniform in `[-coeff_box, coeff_box]^2`.
    pub coeff_box: f64,
    pub max_degree: usize,
    pub k_max: u32,
    pub n_max: usize,
    /// Random points per trial at which the q-discriminant must not vanish.
    pub nonratio_points: usize,
    pub verify: VerifyConfig,
}

impl Default for FuzzConfig {
    fn default() -> Self {
        Self {
            trials: 200,
            seed: 7,
            coeff_box: 5.0,
            max_degree: 3,
            k_max: 6,
            n_max: 20,
            nonratio_points: 20,
            verify: VerifyConfig::default(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ZeroVerdict {
    pub z0: Complex64,
    pub alpha: Complex64,
    pub gamma_ok: bool,
    pub main_theorem: bool,
    pub repeated_zero: bool,
    pub corollary: bool,
    pub oversized_null_collinear: bool,
    pub q_discriminant: Option<QDiscriminantCheck>,
    pub omega: Option<OmegaCheck>,
    pub iff_holds: Option<bool>,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct NonRatioCheck {
    pub points: usize,
    /// Smallest `|q-discriminant| / (|a|^(k-1) |b|^(l-1))` over the points.
    pub min_scaled: f64,
    pub ok: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FuzzTrial {
    pub index: usize,
    pub spec: RecurrenceSpec,
    pub n: usize,
    pub degree: usize,
    pub excluded: usize,
    pub unresolved: Vec<Complex64>,
    pub zeros: Vec<ZeroVerdict>,
    pub nonratio: Option<NonRatioCheck>,
    pub failures: Vec<Failure>,
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct FuzzSummary {
    pub trials: usize,
    pub zeros_checked: usize,
    pub zeros_unresolved: usize,
    pub gamma_violations: usize,
    pub main_violations: usize,
    pub corollary_violations: usize,
    pub q_discriminant_checked: usize,
    pub q_discriminant_violations: usize,
    pub nonratio_checked: usize,
    pub nonratio_violations: usize,
    pub omega_checked: usize,
    pub omega_mismatches: usize,
    pub iff_violations: usize,
    pub analysis_failures: usize,
    pub passed: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FuzzReport {
    pub version: String,
    pub config: FuzzConfig,
    pub summary: FuzzSummary,
    pub trials: Vec<FuzzTrial>,
}

impl FuzzReport {
    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }
}

struct TrialPlan {
    spec: RecurrenceSpec,
    n: usize,
    poly: ComplexPoly,
    probes: Vec<Complex64>,
}

fn random_poly(rng: &mut ChaCha8Rng, degree: usize, r: f64) -> ComplexPoly {
    loop {
        let coeffs: Vec<Complex64> = (0..=degree)
            .map(|_| Complex64::new(rng.random_range(-r..=r), rng.random_range(-r..=r)))
            .collect();
        if coeffs[degree] != ZERO {
            return ComplexPoly::new(coeffs);
        }
    }
}

fn draw_trial(rng: &mut ChaCha8Rng, cfg: &FuzzConfig) -> TrialPlan {
    loop {
        let k = rng.random_range(2..=cfg.k_max);
        let l = rng.random_range(1..k);
        let da = rng.random_range(0..=cfg.max_degree);
        let db = rng.random_range(0..=cfg.max_degree);
        let a = random_poly(rng, da, cfg.coeff_box);
        let b = random_poly(rng, db, cfg.coeff_box);
        let Ok(spec) = RecurrenceSpec::new(a, b, k, l) else {
            continue;
        };
        let seq = generate_sequence(&spec, cfg.n_max);
        let candidates: Vec<usize> = (k as usize..=cfg.n_max)
            .filter(|&n| seq[n].degree().unwrap_or(0) >= 1)
            .collect();
        if candidates.is_empty() {
            continue;
        }
        let n = candidates[rng.random_range(0..candidates.len())];
        let probes = (0..cfg.nonratio_points)
            .map(|_| Complex64::new(rng.random_range(-2.0..=2.0), rng.random_range(-2.0..=2.0)))
            .collect();
        return TrialPlan {
            spec,
            n,
            poly: seq[n].clone(),
            probes,
        };
    }
}

fn nonratio_check(record: &ZeroRecord, probes: &[Complex64], tol: f64) -> Option<NonRatioCheck> {
    let tri = &record.trinomial;
    if tri.b == ZERO {
        return None;
    }
    let scale = trinomial::q_discriminant_scale(tri);
    let mut min_scaled = f64::INFINITY;
    let mut points = 0;
    for &q in probes {
        let far = record.ratios.iter().all(|r| (r.q - q).norm() > 1e-3)
            && (q - 1.0).norm() > 1e-3;
        if !far {
            continue;
        }
        if let Ok(v) = trinomial::q_discriminant(tri, q) {
            points += 1;
            min_scaled = min_scaled.min(v.norm() / scale);
        }
    }
    (points > 0).then_some(NonRatioCheck {
        points,
        min_scaled,
        ok: min_scaled > tol,
    })
}

fn run_trial(index: usize, plan: TrialPlan, cfg: &FuzzConfig) -> FuzzTrial {
    let row = analyze_row(&plan.spec, plan.n, &plan.poly, &cfg.verify);
    let mut failures = row.failures.clone();
    let nonratio = row
        .zeros
        .iter()
        .find(|z| z.trinomial.b != ZERO)
        .and_then(|z| nonratio_check(z, &plan.probes, cfg.verify.tolerances.q_discriminant));
    if let Some(c) = nonratio.filter(|c| !c.ok) {
        failures.push(Failure {
            n: plan.n,
            z0: None,
            check: "q_discriminant_nonratio".into(),
            detail: format!("scaled value {:e} at a non-ratio point", c.min_scaled),
        });
    }
    let zeros = row
        .zeros
        .iter()
        .map(|z| ZeroVerdict {
            z0: z.z0,
            alpha: z.alpha,
            gamma_ok: z.gamma_ok,
            main_theorem: z.main_theorem.holds,
            repeated_zero: z.main_theorem.repeated_zero,
            corollary: z.corollary.holds,
            oversized_null_collinear: !z.corollary.oversized_groups.is_empty(),
            q_discriminant: z.q_discriminant,
            omega: z.omega,
            iff_holds: z.iff_holds,
        })
        .collect();
    FuzzTrial {
        index,
        spec: plan.spec,
        n: plan.n,
        degree: row.degree.unwrap_or(0),
        excluded: row.excluded.len(),
        unresolved: row.unresolved.clone(),
        zeros,
        nonratio,
        failures,
    }
}

/// Seeded random recurrences, each verified at one random `P_n`.
pub fn run_fuzz(cfg: &FuzzConfig) -> FuzzReport {
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let plans: Vec<TrialPlan> = (0..cfg.trials).map(|_| draw_trial(&mut rng, cfg)).collect();
    let trials: Vec<FuzzTrial> = plans
        .into_par_iter()
        .enumerate()
        .map(|(i, plan)| run_trial(i, plan, cfg))
        .collect();

    let mut s = FuzzSummary {
        trials: trials.len(),
        ..FuzzSummary::default()
    };
    for t in &trials {
        s.zeros_checked += t.zeros.len();
        s.zeros_unresolved += t.unresolved.len();
        for z in &t.zeros {
            s.gamma_violations += usize::from(!z.gamma_ok);
            s.main_violations += usize::from(!z.main_theorem);
            s.corollary_violations += usize::from(!z.corollary);
            if let Some(c) = z.q_discriminant {
                s.q_discriminant_checked += 1;
                s.q_discriminant_violations += usize::from(!c.ok);
            }
            if let Some(c) = z.omega {
                s.omega_checked += 1;
                s.omega_mismatches += usize::from(!c.ok);
            }
            s.iff_violations += usize::from(z.iff_holds == Some(false));
        }
        if let Some(c) = t.nonratio {
            s.nonratio_checked += 1;
            s.nonratio_violations += usize::from(!c.ok);
        }
        s.analysis_failures += t
            .failures
            .iter()
            .filter(|f| f.check == "analysis" || f.check == "root_finder")
            .count();
    }
    s.passed = trials.iter().all(|t| t.failures.is_empty());
    FuzzReport {
        version: VERSION.to_string(),
        config: cfg.clone(),
        summary: s,
        trials,
    }
}
