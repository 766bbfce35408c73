//! Simultaneous root finding (Aberth–Ehrlich) with residual certification.
//!
//! Iterates start on the circles of the Newton polygon of `|c_i|`, run in
//! `f64` until a root's correction is small or its value is at the `f64`
//! noise floor, then switch to double-double evaluation. Roots that cannot
//! be separated at the working precision are reported as clusters.

use std::f64::consts::PI;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::poly::ComplexPoly;
use crate::precise::{self, Cdd};

const ZERO: Complex64 = Complex64::new(0.0, 0.0);
const DD_UNIT: f64 = 1.2e-32;
/// Relative value above which a vanishing Aberth step is not convergence.
const STUCK_VALUE: f64 = 1e-8;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SolverOptions {
    pub max_sweeps: usize,
    /// A root is converged once its correction is at most
    /// `step_tol * (1 + |x|)`.
    pub step_tol: f64,
    /// Certification threshold for the relative residual.
    pub residual_tol: f64,
    /// Roots closer than `cluster_tol * (1 + |x|)` are one cluster.
    pub cluster_tol: f64,
    /// Relative coefficient uncertainty used for the inclusion radii; scaled
    /// by `2^-53` for polynomials that carry double-double coefficients.
    pub coeff_noise: f64,
    pub polish: bool,
}

impl Default for SolverOptions {
    fn default() -> Self {
        Self {
            max_sweeps: 500,
            step_tol: 1e-13,
            residual_tol: 1e-10,
            cluster_tol: 1e-4,
            coeff_noise: 1e-15,
            polish: true,
        }
    }
}

/// Numerical zeros of a polynomial.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RootSet {
    /// Sorted by argument in `(-pi, pi]`, then modulus.
    pub roots: Vec<Complex64>,
    /// `|p(x)| / (max_i |c_i| * max(1, |x|)^deg)`
    pub residuals: Vec<f64>,
    /// Set when the root belongs to a cluster or fails certification.
    pub multiplicity_flags: Vec<bool>,
    pub source_degree: usize,
    /// Inclusion radius of each root under the configured coefficient noise;
    /// for clustered roots, the radius around the cluster center.
    pub error_radii: Vec<f64>,
    /// Index groups (size >= 2) of roots that are not separated.
    pub clusters: Vec<Vec<usize>>,
    /// Estimated multiple zero of each cluster.
    pub centers: Vec<Complex64>,
    pub sweeps: usize,
}

/// A zero counted once with its multiplicity.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DistinctZero {
    /// Cluster center, or the root itself.
    pub value: Complex64,
    pub multiplicity: usize,
    pub members: Vec<usize>,
    /// Largest distance from a member to `value`.
    pub spread: f64,
    /// Inclusion radius around `value`.
    pub radius: f64,
}

impl RootSet {
    pub fn len(&self) -> usize {
        self.roots.len()
    }

    pub fn is_empty(&self) -> bool {
        self.roots.is_empty()
    }

    pub fn max_residual(&self) -> f64 {
        self.residuals.iter().copied().fold(0.0, f64::max)
    }

    /// Cluster id of every root (singletons get their own id).
    pub fn cluster_ids(&self) -> Vec<usize> {
        let mut ids: Vec<usize> = (0..self.roots.len()).collect();
        for group in &self.clusters {
            let root = group[0];
            for &m in group {
                ids[m] = root;
            }
        }
        ids
    }

    pub fn same_cluster(&self, i: usize, j: usize) -> bool {
        self.clusters
            .iter()
            .any(|g| g.contains(&i) && g.contains(&j))
    }

    pub fn has_clusters(&self) -> bool {
        !self.clusters.is_empty()
    }

    /// One entry per cluster or isolated root, in root order.
    pub fn distinct(&self) -> Vec<DistinctZero> {
        let ids = self.cluster_ids();
        let mut out: Vec<DistinctZero> = Vec::new();
        for (i, &id) in ids.iter().enumerate() {
            if id != i {
                continue;
            }
            let members: Vec<usize> = (0..ids.len()).filter(|&j| ids[j] == id).collect();
            let value = match self.clusters.iter().position(|g| g[0] == id) {
                Some(c) => self.centers[c],
                None => self.roots[i],
            };
            let spread = members
                .iter()
                .map(|&m| (self.roots[m] - value).norm())
                .fold(0.0, f64::max);
            out.push(DistinctZero {
                value,
                radius: self.error_radii[i],
                multiplicity: members.len(),
                members,
                spread,
            });
        }
        out
    }

    /// `lead * prod (z - root)`
    pub fn reconstruct(&self, lead: Complex64) -> ComplexPoly {
        ComplexPoly::from_roots(lead, &self.roots)
    }
}

/// All roots lie in `|z| < 1 + max_{i<n} |c_i| / |c_n|`.
pub fn cauchy_bound(p: &ComplexPoly) -> Result<f64> {
    let n = match p.degree() {
        Some(n) if n >= 1 => n,
        _ => return Err(Error::NoRoots),
    };
    let lead = p.leading().norm();
    let m = p.coeffs()[..n]
        .iter()
        .map(|c| c.norm())
        .fold(0.0, f64::max);
    Ok(1.0 + m / lead)
}

/// Evaluation of a polynomial with nonzero constant term, switching to the
/// reversed polynomial outside the unit disk to avoid overflow.
struct Evaluator {
    degree: usize,
    coeffs: Vec<Complex64>,
    rev: Vec<Complex64>,
    abs: Vec<f64>,
    abs_rev: Vec<f64>,
    precise: Vec<Cdd>,
    precise_rev: Vec<Cdd>,
    sparse: Option<(Vec<(u32, Cdd)>, Vec<(u32, Cdd)>)>,
    extended: bool,
}

struct Newton {
    /// `p / p'`
    ratio: Complex64,
    /// `|p(x)|` relative to `sum |c_i| |x|^i`.
    relative_value: f64,
}

impl Evaluator {
    /// `tail` holds the low-order parts of double-double coefficients.
    fn new(coeffs: &[Complex64], tail: Option<&[Complex64]>) -> Self {
        let degree = coeffs.len() - 1;
        let rev: Vec<Complex64> = coeffs.iter().rev().copied().collect();
        let precise: Vec<Cdd> = match tail {
            Some(lo) => coeffs.iter().zip(lo).map(|(&h, &l)| precise::join(h, l)).collect(),
            None => coeffs.iter().map(|&c| precise::dd(c)).collect(),
        };
        let precise_rev: Vec<Cdd> = precise.iter().rev().copied().collect();
        let nnz = coeffs.iter().filter(|c| **c != ZERO).count();
        let nonzero = |v: &[Cdd]| -> Vec<(u32, Cdd)> {
            v.iter()
                .enumerate()
                .filter(|(_, c)| precise::to_c64(**c) != ZERO)
                .map(|(i, c)| (i as u32, *c))
                .collect()
        };
        let sparse = (nnz <= 3 || 4 * nnz <= coeffs.len())
            .then(|| (nonzero(&precise), nonzero(&precise_rev)));
        Self {
            degree,
            abs: coeffs.iter().map(|c| c.norm()).collect(),
            abs_rev: rev.iter().map(|c| c.norm()).collect(),
            coeffs: coeffs.to_vec(),
            rev,
            precise,
            precise_rev,
            sparse,
            extended: tail.is_some(),
        }
    }

    fn noise(&self, opts: &SolverOptions) -> f64 {
        if self.extended {
            opts.coeff_noise * f64::EPSILON / 2.0
        } else {
            opts.coeff_noise
        }
    }

    fn max_abs(&self) -> f64 {
        self.abs.iter().copied().fold(0.0, f64::max)
    }

    fn outside(x: Complex64) -> bool {
        x.norm_sqr() > 1.0
    }

    /// `(c, |c|)` for the representation used at `x`, plus the evaluation
    /// point (`x` or `1/x`).
    fn pick(&self, x: Complex64) -> (&[Complex64], &[f64], Complex64, bool) {
        if Self::outside(x) {
            (&self.rev, &self.abs_rev, x.inv(), true)
        } else {
            (&self.coeffs, &self.abs, x, false)
        }
    }

    fn magnitude_sum(abs: &[f64], r: f64) -> f64 {
        abs.iter().rev().fold(0.0, |acc, &a| acc * r + a)
    }

    fn finish(&self, x: Complex64, w: Complex64, reversed: bool, v: Complex64, dv: Complex64) -> Option<Complex64> {
        if v == ZERO {
            return Some(ZERO);
        }
        if reversed {
            let denom = self.degree as f64 - w * dv / v;
            if denom == ZERO {
                return None;
            }
            Some(x / denom)
        } else {
            if dv == ZERO {
                return None;
            }
            Some(v / dv)
        }
    }

    fn newton_f64(&self, x: Complex64) -> Option<Newton> {
        let (coeffs, abs, w, reversed) = self.pick(x);
        let mut v = ZERO;
        let mut dv = ZERO;
        for &c in coeffs.iter().rev() {
            dv = dv * w + v;
            v = v * w + c;
        }
        let scale = Self::magnitude_sum(abs, w.norm());
        let ratio = self.finish(x, w, reversed, v, dv)?;
        Some(Newton {
            ratio,
            relative_value: v.norm() / scale,
        })
    }

    fn eval_dd(&self, w: Cdd, reversed: bool) -> (Cdd, Cdd) {
        match &self.sparse {
            Some((fwd, bwd)) => {
                precise::sparse_with_derivative(if reversed { bwd } else { fwd }, w)
            }
            None => {
                precise::horner_with_derivative(
                if reversed { &self.precise_rev } else { &self.precise },
                w,
            )
            }
        }
    }

    fn newton_dd(&self, x: Complex64) -> Option<Newton> {
        let reversed = Self::outside(x);
        let wdd = if reversed {
            precise::recip(precise::dd(x))
        } else {
            precise::dd(x)
        };
        let (v, dv) = self.eval_dd(wdd, reversed);
        let abs = if reversed { &self.abs_rev } else { &self.abs };
        let w = precise::to_c64(wdd);
        let scale = Self::magnitude_sum(abs, w.norm());
        let vf = precise::to_c64(v);
        let ratio = if vf == ZERO {
            ZERO
        } else if reversed {
            let denom = precise::dd_real(self.degree as f64) - precise::div(wdd * dv, v);
            let denom = precise::to_c64(denom);
            if denom == ZERO {
                return None;
            }
            x / denom
        } else {
            let r = precise::to_c64(precise::div(v, dv));
            if !r.is_finite() {
                return None;
            }
            r
        };
        Some(Newton {
            ratio,
            relative_value: vf.norm() / scale,
        })
    }

    /// `|p(x)| / (max|c| * max(1,|x|)^n)` in double-double.
    fn residual(&self, x: Complex64) -> f64 {
        let reversed = Self::outside(x);
        let w = if reversed {
            precise::recip(precise::dd(x))
        } else {
            precise::dd(x)
        };
        let (v, _) = self.eval_dd(w, reversed);
        precise::abs(v) / self.max_abs()
    }

    /// `ln(max(|p(x)|, noise * sum|c_i||x|^i))`
    fn ln_value_with_noise(&self, x: Complex64, noise: f64) -> f64 {
        let reversed = Self::outside(x);
        let (_, abs, w, _) = self.pick(x);
        let wdd = if reversed {
            precise::recip(precise::dd(x))
        } else {
            precise::dd(x)
        };
        let (v, _) = self.eval_dd(wdd, reversed);
        let floor = noise * Self::magnitude_sum(abs, w.norm());
        let value = precise::abs(v).max(floor);
        let shift = if reversed {
            self.degree as f64 * x.norm().ln()
        } else {
            0.0
        };
        value.ln() + shift
    }
}

/// Initial approximations on the circles given by the upper convex hull of
/// `(i, ln|c_i|)`.
fn initial_guesses(coeffs: &[Complex64]) -> Vec<Complex64> {
    let n = coeffs.len() - 1;
    let pts: Vec<(usize, f64)> = coeffs
        .iter()
        .enumerate()
        .filter(|(_, c)| **c != ZERO)
        .map(|(i, c)| (i, c.norm().ln()))
        .collect();
    let mut hull: Vec<(usize, f64)> = Vec::new();
    for &p in &pts {
        while hull.len() >= 2 {
            let (i1, y1) = hull[hull.len() - 2];
            let (i2, y2) = hull[hull.len() - 1];
            let cross = (i2 as f64 - i1 as f64) * (p.1 - y1) - (y2 - y1) * (p.0 as f64 - i1 as f64);
            if cross >= 0.0 {
                hull.pop();
            } else {
                break;
            }
        }
        hull.push(p);
    }
    let mut guesses = Vec::with_capacity(n);
    for (edge, win) in hull.windows(2).enumerate() {
        let (i0, y0) = win[0];
        let (i1, y1) = win[1];
        let count = i1 - i0;
        let radius = ((y0 - y1) / count as f64).exp();
        let sigma = 0.4 + 2.0 * PI * edge as f64 / (n as f64 + 1.0);
        for j in 0..count {
            let angle = 2.0 * PI * j as f64 / count as f64 + sigma;
            guesses.push(Complex64::from_polar(radius, angle));
        }
    }
    guesses
}

fn aberth(eval: &Evaluator, opts: &SolverOptions) -> Result<(Vec<Complex64>, usize)> {
    let n = eval.degree;
    let mut z = initial_guesses(&eval.coeffs);
    debug_assert_eq!(z.len(), n);
    let mut done = vec![false; n];
    let mut precise_mode = vec![false; n];
    let f64_floor = 4.0 * n as f64 * f64::EPSILON;
    let dd_floor = 4.0 * n as f64 * DD_UNIT;

    for sweep in 1..=opts.max_sweeps {
        for i in 0..n {
            if done[i] {
                continue;
            }
            let newton = if precise_mode[i] {
                eval.newton_dd(z[i])
            } else {
                eval.newton_f64(z[i])
            };
            let Some(newton) = newton else {
                // stationary point: nudge deterministically
                let nudge = Complex64::from_polar(1e-8 * (1.0 + z[i].norm()), 1.0 + i as f64);
                z[i] += nudge;
                continue;
            };
            if precise_mode[i] && newton.relative_value <= dd_floor {
                done[i] = true;
                continue;
            }
            if !precise_mode[i] && newton.relative_value <= f64_floor {
                precise_mode[i] = true;
            }
            let mut s = ZERO;
            for j in 0..n {
                if j != i {
                    s += (z[i] - z[j]).inv();
                }
            }
            let mut step = newton.ratio / (1.0 - newton.ratio * s);
            if !step.is_finite() {
                step = newton.ratio;
            }
            if !step.is_finite() {
                continue;
            }
            z[i] -= step;
            let size = step.norm() / (1.0 + z[i].norm());
            if size <= opts.step_tol && newton.relative_value > STUCK_VALUE {
                // pinned next to another iterate away from any zero
                let kick = Complex64::from_polar(1e-2 * (1.0 + z[i].norm()), 2.0 + (i + sweep) as f64);
                z[i] += kick;
                precise_mode[i] = false;
            } else if size <= opts.step_tol {
                done[i] = true;
            } else if size <= 1e-6 {
                precise_mode[i] = true;
            }
        }
        if done.iter().all(|&d| d) {
            return Ok((z, sweep));
        }
    }
    let residuals = z.iter().map(|&x| eval.residual(x)).collect();
    Err(Error::NoConvergence {
        iterations: opts.max_sweeps,
        best: z,
        residuals,
    })
}

fn newton_polish(eval: &Evaluator, x0: Complex64, max_iter: usize) -> Result<Complex64> {
    let mut x = x0;
    for _ in 0..max_iter {
        let newton = eval.newton_dd(x).ok_or(Error::StationaryPoint)?;
        x -= newton.ratio;
        if !x.is_finite() {
            return Err(Error::StationaryPoint);
        }
        if newton.ratio.norm() <= 1e-15 * (1.0 + x.norm()) {
            break;
        }
    }
    Ok(x)
}

/// Newton iteration (double-double evaluation) until the step is at most
/// `1e-15 (1 + |x|)` or 50 iterations have run.
pub fn refine_root(p: &ComplexPoly, x0: Complex64) -> Result<Complex64> {
    if p.degree().unwrap_or(0) < 1 {
        return Err(Error::NoRoots);
    }
    let eval = Evaluator::new(p.coeffs(), p.tail());
    let (v, dv) = precise::horner_with_derivative(&eval.precise, precise::dd(x0));
    if precise::to_c64(dv) == ZERO && precise::to_c64(v) != ZERO {
        return Err(Error::StationaryPoint);
    }
    newton_polish(&eval, x0, 50)
}

fn sort_key(z: Complex64) -> (f64, f64) {
    let im = if z.im == 0.0 { 0.0 } else { z.im };
    let mut arg = im.atan2(z.re);
    if arg <= -PI {
        arg = PI;
    }
    (arg, z.norm())
}

/// Connected components (including singletons) of the `linked` relation.
fn components(n: usize, mut linked: impl FnMut(usize, usize) -> bool) -> Vec<Vec<usize>> {
    let mut parent: Vec<usize> = (0..n).collect();
    fn find(parent: &mut [usize], mut i: usize) -> usize {
        while parent[i] != i {
            parent[i] = parent[parent[i]];
            i = parent[i];
        }
        i
    }
    for i in 0..n {
        for j in (i + 1)..n {
            if linked(i, j) {
                let (ri, rj) = (find(&mut parent, i), find(&mut parent, j));
                if ri != rj {
                    parent[ri.max(rj)] = ri.min(rj);
                }
            }
        }
    }
    let mut groups: Vec<Vec<usize>> = vec![Vec::new(); n];
    for i in 0..n {
        let r = find(&mut parent, i);
        groups[r].push(i);
    }
    groups.into_iter().filter(|g| !g.is_empty()).collect()
}

/// Inclusion radius of a group of `m` approximations around `c`:
/// `(deg * max(|p(c)|, noise * S(c)) / (|lead| prod_{j not in group} |c - z_j|))^(1/m)`.
/// Around their mean (no `center`) it is at least the spread of the group.
fn group_radius(
    z: &[Complex64],
    group: &[usize],
    eval: &Evaluator,
    noise: f64,
    center: Option<Complex64>,
) -> (Complex64, f64) {
    let c = center
        .unwrap_or_else(|| group.iter().map(|&i| z[i]).sum::<Complex64>() / group.len() as f64);
    let mut ln = (eval.degree as f64).ln() + eval.ln_value_with_noise(c, noise)
        - eval.coeffs[eval.degree].norm().ln();
    for (j, &zj) in z.iter().enumerate() {
        if !group.contains(&j) {
            ln -= (c - zj).norm().ln();
        }
    }
    let spread = if center.is_some() {
        0.0
    } else {
        group.iter().map(|&i| (z[i] - c).norm()).fold(0.0, f64::max)
    };
    let r = if ln.is_nan() {
        f64::MAX
    } else {
        (ln / group.len() as f64).exp().min(f64::MAX)
    };
    (c, r.max(spread))
}

/// Groups approximations that are closer than the cluster tolerance or whose
/// inclusion disks overlap. Returns the groups and each root's radius.
fn cluster(z: &[Complex64], eval: &Evaluator, opts: &SolverOptions) -> (Vec<Vec<usize>>, Vec<f64>) {
    let noise = eval.noise(opts);
    let tight = |d: &(Complex64, f64)| d.1 <= opts.cluster_tol * (1.0 + d.0.norm());
    let mut groups = components(z.len(), |i, j| {
        (z[i] - z[j]).norm() <= opts.cluster_tol * (1.0 + z[i].norm().max(z[j].norm()))
    });
    let mut disks: Vec<(Complex64, f64)> =
        groups.iter().map(|g| group_radius(z, g, eval, noise, None)).collect();
    loop {
        let merged = components(groups.len(), |a, b| {
            (disks[a].0 - disks[b].0).norm() <= disks[a].1 + disks[b].1
        });
        if merged.len() == groups.len() {
            break;
        }
        // a merged disk wider than the cluster tolerance only says the members
        // are poorly conditioned; they stay apart
        let mut next = Vec::new();
        let mut next_disks = Vec::new();
        let mut changed = false;
        for m in merged {
            if m.len() > 1 {
                let mut g: Vec<usize> = m.iter().flat_map(|&a| groups[a].clone()).collect();
                g.sort_unstable();
                let mut d = group_radius(z, &g, eval, noise, None);
                if !tight(&d) {
                    // a multiple zero scatters its approximations; judge it
                    // from the refined center
                    let center = refine_center(eval, d.0, g.len(), d.1);
                    d = group_radius(z, &g, eval, noise, Some(center));
                }
                if tight(&d) {
                    next.push(g);
                    next_disks.push(d);
                    changed = true;
                    continue;
                }
            }
            for a in m {
                next.push(groups[a].clone());
                next_disks.push(disks[a]);
            }
        }
        groups = next;
        disks = next_disks;
        if !changed {
            break;
        }
    }
    let mut radii = vec![0.0; z.len()];
    for (g, d) in groups.iter().zip(&disks) {
        for &i in g {
            radii[i] = d.1;
        }
    }
    (groups, radii)
}

/// Newton iteration on `p^(m-1)`, whose zero is simple at an `m`-fold zero
/// of `p`. Falls back to `mean` when the iterate leaves the inclusion disk.
fn refine_center(eval: &Evaluator, mean: Complex64, m: usize, radius: f64) -> Complex64 {
    let mut d = eval.precise.clone();
    for _ in 1..m {
        d = d
            .iter()
            .enumerate()
            .skip(1)
            .map(|(i, &c)| c * precise::dd_real(i as f64))
            .collect();
    }
    let mut x = precise::dd(mean);
    for _ in 0..50 {
        let (v, dv) = precise::horner_with_derivative(&d, x);
        if precise::to_c64(dv) == ZERO {
            break;
        }
        let step = precise::div(v, dv);
        x = x - step;
        if precise::abs(step) <= 1e-30 * (1.0 + precise::abs(x)) {
            break;
        }
    }
    let center = precise::to_c64(x);
    if center.is_finite() && (center - mean).norm() <= radius {
        center
    } else {
        mean
    }
}

/// All zeros of `p` (degree >= 1).
pub fn find_roots(p: &ComplexPoly, opts: &SolverOptions) -> Result<RootSet> {
    let degree = match p.degree() {
        Some(n) if n >= 1 => n,
        _ => return Err(Error::NoRoots),
    };
    let coeffs = p.coeffs();
    let zero_mult = coeffs.iter().take_while(|c| **c == ZERO).count();
    let reduced = &coeffs[zero_mult..];
    let eval = Evaluator::new(reduced, p.tail().map(|t| &t[zero_mult..]));
    let m = eval.degree;

    let (mut z, sweeps) = match m {
        0 => (Vec::new(), 0),
        1 => (vec![-reduced[0] / reduced[1]], 0),
        _ => aberth(&eval, opts)?,
    };

    let clustering = |z: &[Complex64]| cluster(z, &eval, opts);

    if opts.polish && m >= 1 {
        let (groups, _) = clustering(&z);
        for g in groups.iter().filter(|g| g.len() == 1) {
            let i = g[0];
            let nearest = (0..z.len())
                .filter(|&j| j != i)
                .map(|j| (z[i] - z[j]).norm())
                .fold(f64::INFINITY, f64::min);
            if let Ok(x) = newton_polish(&eval, z[i], 50) {
                if (x - z[i]).norm() <= 0.25 * nearest {
                    z[i] = x;
                }
            }
        }
    }

    let (mut groups, mut radii) = clustering(&z);
    let mut center_of = z.clone();
    for g in groups.iter().filter(|g| g.len() >= 2) {
        let mean = g.iter().map(|&i| z[i]).sum::<Complex64>() / g.len() as f64;
        let center = refine_center(&eval, mean, g.len(), radii[g[0]]);
        let (_, radius) = group_radius(&z, g, &eval, eval.noise(opts), Some(center));
        for &i in g {
            center_of[i] = center;
            radii[i] = radius;
        }
    }
    center_of.extend(std::iter::repeat_n(ZERO, zero_mult));
    let mut residuals: Vec<f64> = z.iter().map(|&x| eval.residual(x)).collect();
    if zero_mult > 0 {
        groups.push((z.len()..z.len() + zero_mult).collect());
    }
    z.extend(std::iter::repeat_n(ZERO, zero_mult));
    radii.extend(std::iter::repeat_n(0.0, zero_mult));
    residuals.extend(std::iter::repeat_n(0.0, zero_mult));

    let mut order: Vec<usize> = (0..z.len()).collect();
    order.sort_by(|&i, &j| {
        let (a1, m1) = sort_key(z[i]);
        let (a2, m2) = sort_key(z[j]);
        a1.total_cmp(&a2).then(m1.total_cmp(&m2))
    });
    let mut position = vec![0; z.len()];
    for (new, &old) in order.iter().enumerate() {
        position[old] = new;
    }
    let roots: Vec<Complex64> = order.iter().map(|&i| z[i]).collect();
    let error_radii: Vec<f64> = order.iter().map(|&i| radii[i]).collect();
    let residuals: Vec<f64> = order.iter().map(|&i| residuals[i]).collect();
    let mut clustered: Vec<(Vec<usize>, Complex64)> = groups
        .into_iter()
        .filter(|g| g.len() >= 2)
        .map(|g| {
            let center = center_of[g[0]];
            let mut g: Vec<usize> = g.into_iter().map(|i| position[i]).collect();
            g.sort_unstable();
            (g, center)
        })
        .collect();
    clustered.sort_by(|a, b| a.0.cmp(&b.0));
    let (clusters, centers): (Vec<Vec<usize>>, Vec<Complex64>) = clustered.into_iter().unzip();
    let multiplicity_flags = (0..roots.len())
        .map(|i| clusters.iter().any(|g| g.contains(&i)) || residuals[i] > opts.residual_tol)
        .collect();

    Ok(RootSet {
        roots,
        residuals,
        multiplicity_flags,
        source_degree: degree,
        error_radii,
        clusters,
        centers,
        sweeps,
    })
}
