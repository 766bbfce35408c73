//! Independent numerical oracles for the integration tests. Nothing here
//! calls into the library's solver.

#![allow(dead_code)]

use num_complex::Complex64;

pub fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

/// Ascending coefficients, Horner.
pub fn horner(coeffs: &[Complex64], z: Complex64) -> Complex64 {
    coeffs.iter().rev().fold(Complex64::new(0.0, 0.0), |acc, &c| acc * z + c)
}

/// Durand-Kerner (Weierstrass) iteration followed by Newton polishing.
/// Adequate for the small, well separated problems the tests feed it.
pub fn durand_kerner(coeffs: &[Complex64]) -> Vec<Complex64> {
    let mut p: Vec<Complex64> = coeffs.to_vec();
    while p.len() > 1 && p.last().unwrap().norm() == 0.0 {
        p.pop();
    }
    let n = p.len() - 1;
    if n == 0 {
        return Vec::new();
    }
    let lead = p[n];
    let monic: Vec<Complex64> = p.iter().map(|&x| x / lead).collect();
    let bound = 1.0 + monic[..n].iter().map(|x| x.norm()).fold(0.0, f64::max);
    let mut z: Vec<Complex64> = (0..n)
        .map(|i| {
            let angle = 2.0 * std::f64::consts::PI * i as f64 / n as f64 + 0.4;
            Complex64::from_polar(0.5 * bound, angle)
        })
        .collect();
    for _ in 0..2000 {
        let mut worst: f64 = 0.0;
        for i in 0..n {
            let mut den = Complex64::new(1.0, 0.0);
            for j in 0..n {
                if i != j {
                    den *= z[i] - z[j];
                }
            }
            let step = horner(&monic, z[i]) / den;
            if step.is_finite() {
                z[i] -= step;
                worst = worst.max(step.norm() / (1.0 + z[i].norm()));
            }
        }
        if worst < 1e-16 {
            break;
        }
    }
    let deriv: Vec<Complex64> = (1..=n).map(|i| monic[i] * i as f64).collect();
    for zi in &mut z {
        for _ in 0..5 {
            let d = horner(&deriv, *zi);
            if d.norm() == 0.0 {
                break;
            }
            let step = horner(&monic, *zi) / d;
            if !step.is_finite() {
                break;
            }
            *zi -= step;
        }
    }
    z
}

/// Zeros of `a t^k + b t^l + 1`.
pub fn trinomial_zeros(a: Complex64, b: Complex64, k: u32, l: u32) -> Vec<Complex64> {
    let mut coeffs = vec![Complex64::new(0.0, 0.0); k as usize + 1];
    coeffs[0] = Complex64::new(1.0, 0.0);
    coeffs[l as usize] += b;
    coeffs[k as usize] += a;
    durand_kerner(&coeffs)
}

/// Ordered ratios `t_i / t_j`, `i != j`.
pub fn pairwise_ratios(zeros: &[Complex64]) -> Vec<Complex64> {
    let mut out = Vec::new();
    for (i, &x) in zeros.iter().enumerate() {
        for (j, &y) in zeros.iter().enumerate() {
            if i != j {
                out.push(x / y);
            }
        }
    }
    out
}

/// Hausdorff distance between two point sets, with a relative metric
/// `|x - y| / (1 + |y|)`.
pub fn hausdorff(xs: &[Complex64], ys: &[Complex64]) -> f64 {
    let one_way = |p: &[Complex64], q: &[Complex64]| {
        p.iter()
            .map(|&x| {
                q.iter()
                    .map(|&y| (x - y).norm() / (1.0 + y.norm()))
                    .fold(f64::INFINITY, f64::min)
            })
            .fold(0.0, f64::max)
    };
    one_way(xs, ys).max(one_way(ys, xs))
}

/// Greedy one-to-one matching distance; infinite if the sizes differ.
pub fn multiset_distance(xs: &[Complex64], ys: &[Complex64]) -> f64 {
    if xs.len() != ys.len() {
        return f64::INFINITY;
    }
    let mut used = vec![false; ys.len()];
    let mut worst: f64 = 0.0;
    for &x in xs {
        let (j, d) = ys
            .iter()
            .enumerate()
            .filter(|(j, _)| !used[*j])
            .map(|(j, &y)| (j, (x - y).norm() / (1.0 + y.norm())))
            .min_by(|a, b| a.1.total_cmp(&b.1))
            .unwrap();
        used[j] = true;
        worst = worst.max(d);
    }
    worst
}

/// Distinct values up to `tol` (relative).
pub fn distinct_values(values: &[Complex64], tol: f64) -> Vec<Complex64> {
    let mut out: Vec<Complex64> = Vec::new();
    for &v in values {
        if !out.iter().any(|w| (w - v).norm() <= tol * (1.0 + v.norm())) {
            out.push(v);
        }
    }
    out
}

pub fn is_real(q: Complex64, tol: f64) -> bool {
    q.im.abs() <= tol * (1.0 + q.norm())
}

pub fn on_circle(q: Complex64, tol: f64) -> bool {
    (q.norm() - 1.0).abs() <= tol
}

pub fn gcd(a: u32, b: u32) -> u32 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}
