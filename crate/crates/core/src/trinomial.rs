//! The trinomial `D(t) = a t^k + b t^l + 1` attached to a point `z0`, the
//! ratio-locus function `h`, its real restriction `g`, q-discriminants and
//! the ratio polynomial.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::poly::{check_shifts, ComplexPoly, RecurrenceSpec};
use crate::precise::{self, Cdd};
use crate::roots::{self, RootSet, SolverOptions};

const ZERO: Complex64 = Complex64::new(0.0, 0.0);
const ONE: Complex64 = Complex64::new(1.0, 0.0);

/// `|Im alpha| <= ALPHA_REAL_TOL * (1 + |alpha|)` counts as real.
pub const ALPHA_REAL_TOL: f64 = 1e-9;
/// Distance to an excluded point of `h` below which evaluation is refused.
pub const DOMAIN_TOL: f64 = 1e-12;
/// Relative distance at which `alpha` is considered equal to `beta`.
pub const BOUNDARY_TOL: f64 = 1e-9;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct TrinomialSpec {
    /// Coefficient of `t^k`.
    pub a: Complex64,
    /// Coefficient of `t^l`.
    pub b: Complex64,
    pub k: u32,
    pub l: u32,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct AlphaValue {
    pub alpha: Complex64,
    pub is_real: bool,
    pub beta: f64,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct RotationPlan {
    /// Rotation angle in units of pi; the rotated coefficients are
    /// `a e^{-i k lambda pi}` and `b e^{-i l lambda pi}`.
    pub lambda: f64,
    /// Phase of `a` in units of pi.
    pub beta_phase: f64,
    /// Phase of `b` in units of pi.
    pub theta_phase: f64,
    /// The integer in `lambda = (beta - theta + gamma) / (k - l)`.
    pub gamma: i64,
    pub rotated: TrinomialSpec,
}

/// Expected number of distinct real ratios of distinct zeros.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct OmegaCount {
    pub count: u32,
    /// `alpha = beta`: the trinomial has a repeated zero, which adds the
    /// ratio 1 of non-distinct zeros.
    pub boundary: bool,
}

/// Ratio `t_i / t_j` with the q-discriminant evaluated there.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct RatioDiscriminant {
    pub i: usize,
    pub j: usize,
    pub q: Complex64,
    pub value: Complex64,
}

fn sign(e: u32) -> f64 {
    if e % 2 == 0 {
        1.0
    } else {
        -1.0
    }
}

pub(crate) fn binomial(n: u32, r: u32) -> f64 {
    (0..r).fold(1.0, |acc, i| acc * (n - i) as f64 / (i + 1) as f64).round()
}

/// `k^k / (l^l (k-l)^(k-l))`, the value `g(1)`.
pub fn beta(k: u32, l: u32) -> f64 {
    let (kf, lf, mf) = (k as f64, l as f64, (k - l) as f64);
    kf.powi(k as i32) / (lf.powi(l as i32) * mf.powi((k - l) as i32))
}

/// `k^k / (k-l)^(k-l)`, the bound printed in the density remark.
pub fn printed_bound(k: u32, l: u32) -> f64 {
    let (kf, mf) = (k as f64, (k - l) as f64);
    kf.powi(k as i32) / mf.powi((k - l) as i32)
}

pub fn alpha_of(a: Complex64, b: Complex64, k: u32, l: u32) -> Complex64 {
    sign(k) * b.powu(k) / a.powu(l)
}

pub fn is_real_alpha(alpha: Complex64) -> bool {
    alpha.im.abs() <= ALPHA_REAL_TOL * (1.0 + alpha.norm())
}

impl TrinomialSpec {
    pub fn new(a: Complex64, b: Complex64, k: u32, l: u32) -> Result<Self> {
        check_shifts(k, l)?;
        if a == ZERO || !a.is_finite() || !b.is_finite() {
            return Err(Error::InvalidSpec("a must be finite and nonzero".into()));
        }
        Ok(Self { a, b, k, l })
    }

    /// A trinomial with real coefficients chosen so that `alpha` takes the
    /// given real value: `a = 1`, `b = (+-alpha)^{1/k}`.
    pub fn with_alpha(alpha: f64, k: u32, l: u32) -> Result<Self> {
        let target = sign(k) * alpha;
        let root = Complex64::new(target.abs().powf(1.0 / k as f64), 0.0);
        if target >= 0.0 {
            Self::new(ONE, root, k, l)
        } else if k % 2 == 1 {
            Self::new(ONE, -root, k, l)
        } else if l % 2 == 1 {
            // b^k > 0, so the sign has to come from a^l
            Self::new(-ONE, root, k, l)
        } else {
            Err(Error::InvalidSpec("negative alpha needs odd l when k is even".into()))
        }
    }

    pub fn poly(&self) -> ComplexPoly {
        let mut c = vec![ZERO; self.k as usize + 1];
        c[0] = ONE;
        c[self.l as usize] = self.b;
        c[self.k as usize] = self.a;
        ComplexPoly::new(c)
    }

    pub fn eval(&self, t: Complex64) -> Complex64 {
        self.a * t.powu(self.k) + self.b * t.powu(self.l) + 1.0
    }

    pub fn alpha(&self) -> AlphaValue {
        let alpha = alpha_of(self.a, self.b, self.k, self.l);
        AlphaValue {
            alpha,
            is_real: is_real_alpha(alpha),
            beta: beta(self.k, self.l),
        }
    }

    pub fn is_binomial(&self) -> bool {
        self.b == ZERO
    }

    fn terms(&self) -> Vec<(u32, Complex64)> {
        let mut t = vec![(0, ONE)];
        if self.b != ZERO {
            t.push((self.l, self.b));
        }
        t.push((self.k, self.a));
        t
    }
}

/// `D(t; z0)` with `a = A(z0)`, `b = B(z0)`.
pub fn specialize(spec: &RecurrenceSpec, z0: Complex64) -> Result<TrinomialSpec> {
    let a = spec.a().eval(z0);
    let deg = spec.a().degree().unwrap_or(0) as i32;
    let scale = spec.a().max_abs_coeff() * z0.norm().max(1.0).powi(deg);
    if a.norm() <= 1e-12 * scale {
        return Err(Error::ZeroOfA);
    }
    TrinomialSpec::new(a, spec.b().eval(z0), spec.k(), spec.l())
}

fn in_excluded_set(q: Complex64, k: u32, l: u32) -> bool {
    q.norm() <= DOMAIN_TOL
        || (q.powu(l) - 1.0).norm() <= DOMAIN_TOL
        || (q.powu(k - l) - 1.0).norm() <= DOMAIN_TOL
}

/// `h(w) = (1 - w^k)^k / ((1 - w^l)^l (w^l - w^k)^(k-l))`
pub fn h_eval(q: Complex64, k: u32, l: u32) -> Result<Complex64> {
    if in_excluded_set(q, k, l) {
        return Err(Error::HPole);
    }
    let (qk, ql) = (q.powu(k), q.powu(l));
    Ok((1.0 - qk).powu(k) / ((1.0 - ql).powu(l) * (ql - qk).powu(k - l)))
}

/// Real restriction of `h` with the removable value `beta` at 1.
pub fn g_eval(x: f64, k: u32, l: u32) -> Result<f64> {
    if (x - 1.0).abs() <= DOMAIN_TOL {
        return Ok(beta(k, l));
    }
    Ok(h_eval(Complex64::new(x, 0.0), k, l)?.re)
}

/// Closed-form derivative of `g`.
pub fn g_prime(q: f64, k: u32, l: u32) -> Result<f64> {
    let z = Complex64::new(q, 0.0);
    if (q - 1.0).abs() <= DOMAIN_TOL || in_excluded_set(z, k, l) {
        return Err(Error::HPole);
    }
    let (ki, li, mi) = (k as i32, l as i32, (k - l) as i32);
    let (kf, lf, mf) = (k as f64, l as f64, (k - l) as f64);
    let (qk, ql, qm) = (q.powi(ki), q.powi(li), q.powi(mi));
    let num = -(1.0 - qk).powi(ki - 1)
        * q.powi(li - 1)
        * (mf + lf * qk - kf * ql)
        * (mf * qk - kf * qm + lf);
    let den = (1.0 - ql).powi(li + 1) * (ql - qk).powi(mi + 1);
    Ok(num / den)
}

/// `(k-l) q^k - k q^(k-l) + l`
pub fn critical_polynomial(k: u32, l: u32) -> ComplexPoly {
    let mut c = vec![ZERO; k as usize + 1];
    c[0] = Complex64::new(l as f64, 0.0);
    c[(k - l) as usize] = Complex64::new(-(k as f64), 0.0);
    c[k as usize] += Complex64::new((k - l) as f64, 0.0);
    ComplexPoly::new(c)
}

/// Real critical points `gamma != 1` of `g`: real zeros of the critical
/// polynomial and of its reciprocal, ascending.
pub fn g_critical_points(k: u32, l: u32) -> Vec<f64> {
    let forward = critical_polynomial(k, l);
    let reversed = ComplexPoly::new(forward.coeffs().iter().rev().copied().collect());
    let opts = SolverOptions::default();
    let mut out: Vec<f64> = Vec::new();
    for p in [&forward, &reversed] {
        let Ok(rs) = roots::find_roots(p, &opts) else {
            continue;
        };
        for &r in &rs.roots {
            if r.im.abs() > 1e-8 * (1.0 + r.norm()) || (r - 1.0).norm() <= 1e-3 {
                continue;
            }
            let x = roots::refine_root(p, Complex64::new(r.re, 0.0)).map_or(r.re, |x| x.re);
            if !out.iter().any(|&y| (y - x).abs() <= 1e-10 * (1.0 + x.abs())) {
                out.push(x);
            }
        }
    }
    out.sort_by(f64::total_cmp);
    out
}

fn dd_alpha(tri: &TrinomialSpec) -> Cdd {
    let a = precise::dd(tri.a);
    let b = precise::dd(tri.b);
    precise::div(precise::powu(b, tri.k), precise::powu(a, tri.l)) * precise::dd_real(sign(tri.k))
}

/// `f(q) = (1 - q^k)^k - alpha (1 - q^l)^l (q^l - q^k)^(k-l)` in double-double.
fn dd_f(q: Cdd, alpha: Cdd, k: u32, l: u32) -> Cdd {
    let one = precise::dd_real(1.0);
    let qk = precise::powu(q, k);
    let ql = precise::powu(q, l);
    precise::powu(one - qk, k) - alpha * precise::powu(one - ql, l) * precise::powu(ql - qk, k - l)
}

fn dd_q_discriminant(tri: &TrinomialSpec, q: Cdd) -> Complex64 {
    let (k, l) = (tri.k, tri.l);
    let one = precise::dd_real(1.0);
    let prefactor = precise::dd_real(sign(k * (k + 3) / 2))
        * precise::powu(precise::dd(tri.a), k - 1)
        * precise::powu(precise::dd(tri.b), l - 1);
    let f = dd_f(q, dd_alpha(tri), k, l);
    precise::to_c64(precise::div(prefactor * f, precise::powu(one - q, k)))
}

/// The q-discriminant of the trinomial. Evaluated as
/// `s a^(k-1) b^(l-1) f(q) / (1-q)^k`, which equals the bracketed product
/// form and stays finite at `q^k = 1`.
///
/// Its terms grow like `|q|^(k^2)`, so at a rounded ratio with `|q| > 1` the
/// value reflects the rounding of `q`; [`ratio_discriminants`] evaluates at
/// double-double ratios instead.
pub fn q_discriminant(tri: &TrinomialSpec, q: Complex64) -> Result<Complex64> {
    if tri.b == ZERO {
        return Err(Error::ZeroB);
    }
    if (q - 1.0).norm() <= 1e-14 {
        return Err(Error::QIsOne);
    }
    Ok(dd_q_discriminant(tri, precise::dd(q)))
}

/// `|a|^(k-1) |b|^(l-1)`, the natural scale of the q-discriminant.
pub fn q_discriminant_scale(tri: &TrinomialSpec) -> f64 {
    tri.a.norm().powi(tri.k as i32 - 1) * tri.b.norm().powi(tri.l as i32 - 1)
}

/// Discriminant of `a t^k + b t^l + 1`:
/// `(-1)^(k(k-1)/2) k^k a^(k-1) (1 - (-1)^k l^l (k-l)^(k-l) b^k / (k^k a^l))`.
pub fn classical_discriminant(tri: &TrinomialSpec) -> Complex64 {
    let (k, l) = (tri.k, tri.l);
    let kk = (k as f64).powi(k as i32);
    let bracket = 1.0 - alpha_of(tri.a, tri.b, k, l) / beta(k, l);
    sign(k * (k - 1) / 2) * kk * tri.a.powu(k - 1) * bracket
}

/// Scale for deciding whether the classical discriminant vanishes.
pub fn classical_discriminant_scale(tri: &TrinomialSpec) -> f64 {
    let (k, l) = (tri.k, tri.l);
    let kk = (k as f64).powi(k as i32);
    kk * tri.a.norm().powi(k as i32 - 1) * (1.0 + alpha_of(tri.a, tri.b, k, l).norm() / beta(k, l))
}

pub fn omega_expected(alpha: Complex64, k: u32, l: u32) -> Result<OmegaCount> {
    if !is_real_alpha(alpha) {
        return Err(Error::AlphaNotReal { imag: alpha.im });
    }
    let x = alpha.re;
    let b = beta(k, l);
    let boundary = (x - b).abs() <= BOUNDARY_TOL * b;
    let count = if k % 2 == 1 {
        if boundary {
            2
        } else if x < b {
            0
        } else {
            6
        }
    } else if x == 0.0 {
        1
    } else if x < 0.0 || (x > b && !boundary) {
        2
    } else {
        0
    };
    Ok(OmegaCount { count, boundary })
}

fn sparse_binomial_power(step: usize, power: u32) -> ComplexPoly {
    // (1 - w^step)^power
    let mut c = vec![ZERO; step * power as usize + 1];
    for i in 0..=power {
        c[step * i as usize] = Complex64::new(sign(i) * binomial(power, i), 0.0);
    }
    ComplexPoly::new(c)
}

/// `f(w) / (w - 1)^k`, degree `k^2 - k`; its zeros are the candidate ratios.
pub fn ratio_polynomial(alpha: Complex64, k: u32, l: u32) -> Result<ComplexPoly> {
    check_shifts(k, l)?;
    let b = beta(k, l);
    if (alpha - b).norm() <= BOUNDARY_TOL * b {
        return Err(Error::Degenerate);
    }
    let m = k - l;
    let first = sparse_binomial_power(k as usize, k);
    let second = &(&sparse_binomial_power(l as usize, l) * &sparse_binomial_power(m as usize, m))
        * &ComplexPoly::monomial(alpha, (l * m) as usize);
    let mut f = &first - &second;
    let scale = f.max_abs_coeff();
    for _ in 0..k {
        let (quotient, remainder) = f.deflate(ONE);
        if remainder.norm() > 1e-9 * scale {
            return Err(Error::Remainder {
                remainder: remainder.norm(),
                scale,
            });
        }
        f = quotient;
    }
    Ok(f)
}

fn phase(z: Complex64) -> f64 {
    let p = z.arg() / std::f64::consts::PI;
    if p <= -1.0 {
        1.0
    } else {
        p
    }
}

/// Finds `lambda` with `a e^{-i k lambda pi}` and `b e^{-i l lambda pi}` both
/// real. Requires real `alpha` and `a b != 0`.
pub fn rotate_to_real(tri: &TrinomialSpec) -> Result<RotationPlan> {
    if tri.b == ZERO {
        return Err(Error::ZeroB);
    }
    let alpha = tri.alpha().alpha;
    if !is_real_alpha(alpha) {
        return Err(Error::AlphaNotReal { imag: alpha.im });
    }
    let (k, l) = (tri.k, tri.l);
    let m = (k - l) as i64;
    let beta_phase = phase(tri.a);
    let theta_phase = phase(tri.b);
    let real_enough = |z: Complex64| z.im.abs() <= 1e-9 * (1.0 + z.norm());
    let limit = (k as i64) * m + 1;
    for step in 0..=2 * limit {
        let gamma = if step % 2 == 0 { step / 2 } else { -(step + 1) / 2 };
        let lambda = (beta_phase - theta_phase + gamma as f64) / m as f64;
        let rot = |c: Complex64, e: u32| c * Complex64::from_polar(1.0, -(e as f64) * lambda * std::f64::consts::PI);
        let (a, b) = (rot(tri.a, k), rot(tri.b, l));
        if real_enough(a) && real_enough(b) {
            return Ok(RotationPlan {
                lambda,
                beta_phase,
                theta_phase,
                gamma,
                rotated: TrinomialSpec { a, b, k, l },
            });
        }
    }
    Err(Error::RotationFailed)
}

/// Zeros of the trinomial, found in the variable `u = t |a|^(1/k)` so that
/// the cluster and separation tolerances act on `O(1)` values.
pub fn roots(tri: &TrinomialSpec, opts: &SolverOptions) -> Result<RootSet> {
    let s = tri.a.norm().powf(-1.0 / tri.k as f64);
    let scaled = TrinomialSpec {
        a: tri.a * s.powi(tri.k as i32),
        b: tri.b * s.powi(tri.l as i32),
        ..*tri
    };
    let mut rs = roots::find_roots(&scaled.poly(), opts)?;
    if rs.roots.iter().any(|r| r.norm() < 1e-12) {
        return Err(Error::ZeroRoot);
    }
    for r in rs.roots.iter_mut().chain(rs.centers.iter_mut()) {
        *r *= s;
    }
    for e in &mut rs.error_radii {
        *e *= s;
    }
    Ok(rs)
}

/// Newton-polishes each root in double-double precision.
pub(crate) fn polish_dd(tri: &TrinomialSpec, x: Complex64) -> Cdd {
    let terms: Vec<(u32, Cdd)> = tri.terms().into_iter().map(|(e, c)| (e, precise::dd(c))).collect();
    let mut z = precise::dd(x);
    for _ in 0..8 {
        let (v, dv) = precise::sparse_with_derivative(&terms, z);
        let step = precise::div(v, dv);
        let s = precise::to_c64(step);
        if !s.is_finite() {
            break;
        }
        z = z - step;
        if s.norm() <= 1e-31 * (1.0 + x.norm()) {
            break;
        }
    }
    z
}

/// q-discriminant at every ordered ratio of distinct zeros, using ratios of
/// double-double polished zeros. Pairs inside one cluster are skipped.
pub fn ratio_discriminants(tri: &TrinomialSpec, rs: &RootSet) -> Result<Vec<RatioDiscriminant>> {
    if tri.b == ZERO {
        return Err(Error::ZeroB);
    }
    let clustered: Vec<bool> = (0..rs.len())
        .map(|i| rs.clusters.iter().any(|g| g.contains(&i)))
        .collect();
    let polished: Vec<Cdd> = rs
        .roots
        .iter()
        .zip(&clustered)
        .map(|(&r, &c)| if c { precise::dd(r) } else { polish_dd(tri, r) })
        .collect();
    let mut out = Vec::new();
    for i in 0..rs.len() {
        for j in 0..rs.len() {
            if i == j || rs.same_cluster(i, j) {
                continue;
            }
            let q = precise::div(polished[i], polished[j]);
            let qc = precise::to_c64(q);
            if (qc - 1.0).norm() <= 1e-14 {
                return Err(Error::QIsOne);
            }
            out.push(RatioDiscriminant {
                i,
                j,
                q: qc,
                value: dd_q_discriminant(tri, q),
            });
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn specialize_examples() {
        let spec = RecurrenceSpec::table1();
        let s2 = 2f64.sqrt();
        let tri = specialize(&spec, c(0.0, 1.0 - 2.0 * s2)).unwrap();
        assert!(tri.b.norm() < 1e-13);
        assert!((tri.a - c(25.0 - 22.0 * s2, 4.0 - 2.0 * s2)).norm() < 1e-12);

        let tri = specialize(&spec, c(-0.6109, -2.2046)).unwrap();
        assert!((tri.a + c(8.85784, -9.47542)).norm() < 5e-3);
        assert!((tri.b + c(1.89645, -3.91559)).norm() < 5e-3);

        let spec = RecurrenceSpec::new(
            ComplexPoly::from_real(&[0.0, 2.0]),
            ComplexPoly::from_real(&[0.0, 3.0]),
            3,
            1,
        )
        .unwrap();
        let tri = specialize(&spec, ONE).unwrap();
        assert_eq!((tri.a, tri.b), (c(2.0, 0.0), c(3.0, 0.0)));
        assert!(matches!(specialize(&spec, ZERO), Err(Error::ZeroOfA)));
    }

    #[test]
    fn h_examples() {
        let q = Complex64::from_polar(1.0, 2.0 * std::f64::consts::PI / 5.0);
        assert!(h_eval(q, 5, 3).unwrap().norm() < 1e-12);
        let h = h_eval(c(0.6444, 0.7647), 5, 3).unwrap();
        assert!((h.re - 0.71429).abs() < 5e-4, "{h}");
        assert!(matches!(h_eval(ZERO, 5, 3), Err(Error::HPole)));
        assert!(matches!(h_eval(ONE, 5, 3), Err(Error::HPole)));
        assert!(matches!(h_eval(c(-1.0, 0.0), 5, 3), Err(Error::HPole)));
    }

    #[test]
    fn g_examples() {
        assert!((g_eval(1.0, 5, 3).unwrap() - 3125.0 / 108.0).abs() < 1e-12);
        assert_eq!(g_eval(-1.0, 4, 1).unwrap(), 0.0);
        assert_eq!(g_eval(0.5, 5, 2).unwrap(), h_eval(c(0.5, 0.0), 5, 2).unwrap().re);
        assert!(g_eval(0.0, 5, 3).is_err());
        assert!(g_eval(-1.0, 5, 3).is_err());
    }

    #[test]
    fn g_prime_matches_central_difference() {
        let (q, step) = (0.3, 1e-6);
        let fd = (g_eval(q + step, 5, 3).unwrap() - g_eval(q - step, 5, 3).unwrap()) / (2.0 * step);
        let exact = g_prime(q, 5, 3).unwrap();
        assert!((fd - exact).abs() <= 1e-6 * exact.abs());
        assert!(g_prime(1.0, 5, 3).is_err());
        assert!(g_prime(0.0, 5, 3).is_err());
        assert_eq!(g_prime(-1.0, 4, 1).unwrap(), 0.0);
    }

    #[test]
    fn critical_points() {
        assert!(g_critical_points(2, 1).is_empty());
        let g1 = beta(5, 3);
        let pts = g_critical_points(5, 3);
        assert!(!pts.is_empty());
        for &x in &pts {
            assert!((g_eval(x, 5, 3).unwrap() - g1).abs() <= 1e-9 * g1);
            assert!(g_prime(x, 5, 3).unwrap().abs() <= 1e-6 * g1);
            assert!(pts.iter().any(|&y| (y - 1.0 / x).abs() <= 1e-10 * (1.0 + y.abs())));
        }
    }

    #[test]
    fn q_discriminant_vanishes_on_ratios_only() {
        let tri = TrinomialSpec::new(c(-8.85784, 9.47542), c(-1.89645, 3.91559), 5, 3).unwrap();
        let rs = roots(&tri, &SolverOptions::default()).unwrap();
        let scale = q_discriminant_scale(&tri);
        let values = ratio_discriminants(&tri, &rs).unwrap();
        assert_eq!(values.len(), 20);
        for v in &values {
            assert!(v.value.norm() <= 1e-8 * scale, "{v:?}");
        }
        assert!(q_discriminant(&tri, c(2.0, 0.0)).unwrap().norm() > 1e-3 * scale);
        assert!(matches!(q_discriminant(&tri, ONE), Err(Error::QIsOne)));
        let binomial = TrinomialSpec::new(ONE, ZERO, 5, 3).unwrap();
        assert!(matches!(q_discriminant(&binomial, c(2.0, 0.0)), Err(Error::ZeroB)));
    }

    #[test]
    fn classical_discriminant_cases() {
        let square = TrinomialSpec::new(ONE, c(2.0, 0.0), 2, 1).unwrap();
        assert!(classical_discriminant(&square).norm() < 1e-14);

        // alpha = 27/4 with (k, l) = (3, 1): -b^3 / a = 27/4
        let tri = TrinomialSpec::new(c(-4.0, 0.0), c(3.0, 0.0), 3, 1).unwrap();
        assert!((tri.alpha().alpha.re - 6.75).abs() < 1e-15);
        assert!(classical_discriminant(&tri).norm() <= 1e-9 * classical_discriminant_scale(&tri));
    }

    #[test]
    fn classical_discriminant_resultant_oracle() {
        // Disc = (-1)^{k(k-1)/2} a^{k-2} prod D'(t_i)
        for (a, b, k, l) in [
            (c(1.3, -0.4), c(-0.7, 2.1), 5, 3),
            (c(-2.0, 0.5), c(0.3, 0.3), 4, 1),
            (c(0.8, 0.0), c(1.5, -1.0), 7, 2),
            (c(1.1, 0.9), ZERO, 5, 2),
        ] {
            let tri = TrinomialSpec::new(a, b, k, l).unwrap();
            let rs = roots(&tri, &SolverOptions::default()).unwrap();
            let dp = tri.poly().derivative();
            let prod: Complex64 = rs.roots.iter().map(|&t| dp.eval(t)).product();
            let oracle = sign(k * (k - 1) / 2) * a.powu(k - 2) * prod;
            let value = classical_discriminant(&tri);
            assert!((value - oracle).norm() <= 1e-8 * oracle.norm(), "{value} vs {oracle}");
        }
    }

    #[test]
    fn q_limit_matches_classical_up_to_b_power() {
        let tri = TrinomialSpec::new(c(1.3, -0.4), c(-0.7, 2.1), 5, 3).unwrap();
        let limit = q_discriminant(&tri, c(1.0 + 1e-6, 0.0)).unwrap() / tri.b.powu(tri.l - 1);
        let value = classical_discriminant(&tri);
        assert!((limit - value).norm() <= 1e-4 * value.norm());
    }

    #[test]
    fn omega_examples() {
        assert_eq!(omega_expected(c(0.71429, 0.0), 5, 3).unwrap().count, 0);
        assert_eq!(omega_expected(c(99.18923, 0.0), 5, 3).unwrap().count, 6);
        assert_eq!(omega_expected(ZERO, 4, 1).unwrap().count, 1);
        assert_eq!(omega_expected(c(-1.0, 0.0), 4, 1).unwrap().count, 2);
        assert_eq!(omega_expected(c(5.0, 0.0), 4, 1).unwrap().count, 0);
        let at = omega_expected(c(beta(3, 1), 0.0), 3, 1).unwrap();
        assert_eq!(at, OmegaCount { count: 2, boundary: true });
        assert!(omega_expected(c(1.0, 0.1), 3, 1).is_err());
    }

    #[test]
    fn ratio_polynomial_degree_and_roots() {
        let tri = TrinomialSpec::new(c(-8.85784, 9.47542), c(-1.89645, 3.91559), 5, 3).unwrap();
        let alpha = c(tri.alpha().alpha.re, 0.0);
        let hat = ratio_polynomial(alpha, 5, 3).unwrap();
        assert_eq!(hat.degree(), Some(20));
        assert!(matches!(ratio_polynomial(c(beta(5, 3), 0.0), 5, 3), Err(Error::Degenerate)));
        let rs = roots::find_roots(&hat, &SolverOptions::default()).unwrap();
        for &q in &rs.roots {
            let inv = q.inv();
            let conj = q.conj();
            for target in [inv, conj] {
                let d = rs.roots.iter().map(|r| (r - target).norm()).fold(f64::INFINITY, f64::min);
                assert!(d < 1e-6);
            }
        }
    }

    #[test]
    fn rotation_examples() {
        let plan = rotate_to_real(&TrinomialSpec::new(c(2.0, 0.0), c(3.0, 0.0), 3, 1).unwrap()).unwrap();
        assert_eq!(plan.lambda, 0.0);
        let plan = rotate_to_real(&TrinomialSpec::new(c(-1.0, 0.0), ONE, 3, 1).unwrap()).unwrap();
        assert_eq!(plan.lambda, 0.0);
        // a = e^{0.3 i pi}, b chosen so that alpha is real
        let a = Complex64::from_polar(2.0, 0.3 * std::f64::consts::PI);
        let b = Complex64::from_polar(1.5, 0.1 * std::f64::consts::PI);
        let tri = TrinomialSpec::new(a, b, 3, 1).unwrap();
        assert!(tri.alpha().is_real);
        let plan = rotate_to_real(&tri).unwrap();
        assert!(plan.rotated.a.im.abs() < 1e-12 && plan.rotated.b.im.abs() < 1e-12);
    }

    #[test]
    fn with_alpha_hits_target() {
        for (alpha, k, l) in [(6.8, 3, 1), (-2.0, 4, 1), (3.0, 4, 3), (0.5, 5, 2), (-1.5, 5, 2)] {
            let tri = TrinomialSpec::with_alpha(alpha, k, l).unwrap();
            assert!((tri.alpha().alpha - alpha).norm() <= 1e-12 * (1.0 + alpha.abs()));
        }
    }

    #[test]
    fn tiny_roots_are_not_clustered() {
        // |t| ~ 1e-5: the absolute part of the cluster tolerance would merge
        // them without rescaling
        let tri = TrinomialSpec::new(c(1e25, 3e24), c(2e10, -1e10), 5, 2).unwrap();
        let rs = roots(&tri, &SolverOptions::default()).unwrap();
        assert_eq!(rs.len(), 5);
        assert!(rs.clusters.is_empty());
        for &t in &rs.roots {
            assert!(t.norm() < 1e-4 && t.norm() > 1e-6);
            let terms = tri.a.norm() * t.norm().powi(5) + tri.b.norm() * t.norm().powi(2) + 1.0;
            assert!(tri.eval(t).norm() <= 1e-13 * terms);
        }
        // product of the zeros is -1/a
        let prod: Complex64 = rs.roots.iter().product();
        assert!((prod * tri.a + 1.0).norm() < 1e-12);
    }
}
