mod common;

use common::*;
use num_complex::Complex64;
use proptest::prelude::*;
use trl_core::classify::{self, classify_ratio, RatioKind};
use trl_core::experiments::{self, VerifyConfig};
use trl_core::poly::{self, generate_sequence, poly_add, poly_mul, ComplexPoly, RecurrenceSpec};
use trl_core::roots::{find_roots, SolverOptions};
use trl_core::trinomial::{self, TrinomialSpec};

fn complex(r: f64) -> impl Strategy<Value = Complex64> {
    (-r..r, -r..r).prop_map(|(re, im)| Complex64::new(re, im))
}

fn poly_of_degree(max: usize, r: f64) -> impl Strategy<Value = ComplexPoly> {
    (0..=max).prop_flat_map(move |d| {
        (prop::collection::vec(complex(r), d), complex(r).prop_filter("lead", |c| c.norm() > 0.1))
            .prop_map(|(mut low, lead)| {
                low.push(lead);
                ComplexPoly::new(low)
            })
    })
}

fn coprime_shifts(k_max: u32) -> impl Strategy<Value = (u32, u32)> {
    (2..=k_max)
        .prop_flat_map(|k| (Just(k), 1..k))
        .prop_filter("coprime", |&(k, l)| gcd(k, l) == 1)
}

fn spec() -> impl Strategy<Value = RecurrenceSpec> {
    (poly_of_degree(2, 3.0), poly_of_degree(2, 3.0), coprime_shifts(6)).prop_filter_map(
        "deg(AB) >= 1",
        |(a, b, (k, l))| RecurrenceSpec::new(a, b, k, l).ok(),
    )
}

fn canonical(p: &ComplexPoly) -> bool {
    match p.degree() {
        None => p.is_zero(),
        Some(d) => p.coeffs().len() == d + 1 && p.leading() != Complex64::new(0.0, 0.0),
    }
}

fn max_coeff_error(p: &ComplexPoly, q: &ComplexPoly) -> f64 {
    let n = p.coeffs().len().max(q.coeffs().len());
    let zero = Complex64::new(0.0, 0.0);
    (0..n)
        .map(|i| {
            let x = p.coeffs().get(i).copied().unwrap_or(zero);
            let y = q.coeffs().get(i).copied().unwrap_or(zero);
            (x - y).norm()
        })
        .fold(0.0, f64::max)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn arithmetic_stays_canonical(p in poly_of_degree(6, 2.0), q in poly_of_degree(6, 2.0)) {
        prop_assert!(canonical(&poly_add(&p, &q)));
        prop_assert!(canonical(&poly_mul(&p, &q)));
        prop_assert!(poly_add(&p, &p.scale(Complex64::new(-1.0, 0.0))).is_zero());
    }

    #[test]
    fn recurrence_residual_vanishes(spec in spec()) {
        let seq = generate_sequence(&spec, 18);
        let (k, l) = (spec.k() as usize, spec.l() as usize);
        for n in 1..=18 {
            let mut sum = seq[n].clone();
            if n >= l {
                sum = poly_add(&sum, &poly_mul(spec.b(), &seq[n - l]));
            }
            if n >= k {
                sum = poly_add(&sum, &poly_mul(spec.a(), &seq[n - k]));
            }
            let scale = seq[n].max_abs_coeff().max(1.0);
            prop_assert!(sum.max_abs_coeff() <= 1e-12 * scale, "n = {}: {:e}", n, sum.max_abs_coeff());
            prop_assert!(canonical(&seq[n]));
        }
    }

    #[test]
    fn generating_function_identity(spec in spec(), z in complex(1.5), u in complex(1.0)) {
        let radius = poly::generating_function_radius(&spec, z);
        let t = u / (1.0 + u.norm()) * radius;
        let residual = poly::generating_function_check(&spec, z, t, 60);
        prop_assert!(residual < 1e-9, "{:e}", residual);
    }

    #[test]
    fn non_coprime_collapse(spec in spec(), d in 2usize..=3) {
        let p = generate_sequence(&spec, 10);
        let r = poly::expand_non_coprime(&spec, d, 10 * d);
        for m in 0..=10 * d {
            if m % d == 0 {
                prop_assert_eq!(r[m].coeffs(), p[m / d].coeffs());
            } else {
                prop_assert!(r[m].is_zero());
            }
        }
    }

    #[test]
    fn roots_reconstruct_polynomial(roots in prop::collection::vec(complex(2.0), 1..=25), lead in complex(3.0)) {
        prop_assume!(lead.norm() > 0.1);
        let p = ComplexPoly::from_roots(lead, &roots);
        let rs = find_roots(&p, &SolverOptions::default()).unwrap();
        prop_assert_eq!(rs.len(), p.degree().unwrap());
        let multiplicity: usize = rs.distinct().iter().map(|d| d.multiplicity).sum();
        prop_assert_eq!(multiplicity, rs.len());
        let back = rs.reconstruct(p.leading());
        prop_assert!(max_coeff_error(&back, &p) <= 1e-8 * p.max_abs_coeff());
        for (i, &res) in rs.residuals.iter().enumerate() {
            prop_assert!(res <= 1e-10 || rs.multiplicity_flags[i]);
        }
    }

    #[test]
    fn real_input_has_conjugate_roots(coeffs in prop::collection::vec(-3.0f64..3.0, 2..=16)) {
        prop_assume!(coeffs.last().unwrap().abs() > 0.1);
        let p = ComplexPoly::from_real(&coeffs);
        let rs = find_roots(&p, &SolverOptions::default()).unwrap();
        let conj: Vec<Complex64> = rs.roots.iter().map(|r| r.conj()).collect();
        prop_assume!(!rs.has_clusters());
        prop_assert!(multiset_distance(&conj, &rs.roots) <= 1e-10);
    }

    #[test]
    fn binomial_roots_are_equimodular(a in complex(10.0), k in 2u32..=9) {
        prop_assume!(a.norm() > 1e-2);
        let mut c = vec![Complex64::new(0.0, 0.0); k as usize + 1];
        c[0] = Complex64::new(1.0, 0.0);
        c[k as usize] = a;
        let rs = find_roots(&ComplexPoly::new(c), &SolverOptions::default()).unwrap();
        let modulus = a.norm().recip().powf(1.0 / k as f64);
        for r in &rs.roots {
            prop_assert!((r.norm() - modulus).abs() <= 1e-12 * modulus.max(1.0));
        }
    }

    #[test]
    fn root_finding_is_deterministic(p in poly_of_degree(12, 2.0)) {
        prop_assume!(p.degree().unwrap_or(0) >= 1);
        let a = find_roots(&p, &SolverOptions::default()).unwrap();
        let b = find_roots(&p, &SolverOptions::default()).unwrap();
        prop_assert_eq!(serde_json::to_string(&a).unwrap(), serde_json::to_string(&b).unwrap());
    }

    #[test]
    fn h_is_real_on_both_loci((k, l) in coprime_shifts(9), x in -4.0f64..4.0, theta in 0.0f64..std::f64::consts::TAU) {
        for q in [Complex64::new(x, 0.0), Complex64::from_polar(1.0, theta)] {
            let Ok(h) = trinomial::h_eval(q, k, l) else { continue };
            prop_assume!(h.norm() < 1e12);
            prop_assert!(h.im.abs() <= 1e-9 * (1.0 + h.norm()), "q = {}, h = {}", q, h);
        }
    }

    #[test]
    fn h_is_inversion_symmetric((k, l) in coprime_shifts(9), q in complex(3.0)) {
        let (Ok(h), Ok(hi)) = (trinomial::h_eval(q, k, l), trinomial::h_eval(q.inv(), k, l)) else {
            return Ok(());
        };
        prop_assume!(h.norm() < 1e12);
        prop_assert!((h - hi).norm() <= 1e-10 * (1.0 + h.norm()));
    }

    #[test]
    fn g_attains_reference_level((k, l) in coprime_shifts(9)) {
        let g1 = trinomial::g_eval(1.0, k, l).unwrap();
        let grid: Vec<f64> = (0..=8000).map(|i| -4.0 + 8.0 * i as f64 / 8000.0).collect();
        let values = |keep: &dyn Fn(f64) -> bool| -> Vec<f64> {
            grid.iter().copied().filter(|&x| keep(x)).filter_map(|x| trinomial::g_eval(x, k, l).ok()).collect()
        };
        if k % 2 == 1 {
            let min = values(&|_| true).into_iter().fold(f64::INFINITY, f64::min);
            prop_assert!((min - g1).abs() <= 1e-6 * g1);
        } else {
            let min = values(&|x| x > 0.0).into_iter().fold(f64::INFINITY, f64::min);
            let max = values(&|x| x < 0.0).into_iter().fold(f64::NEG_INFINITY, f64::max);
            prop_assert!((min - g1).abs() <= 1e-6 * g1);
            prop_assert!(max.abs() <= 1e-6 * g1);
        }
    }

    #[test]
    fn q_discriminant_vanishes_at_ratios(a in complex(3.0), b in complex(3.0), (k, l) in coprime_shifts(6)) {
        prop_assume!(a.norm() > 0.1 && b.norm() > 0.1);
        let tri = TrinomialSpec::new(a, b, k, l).unwrap();
        let zeros = trinomial_zeros(a, b, k, l);
        prop_assume!(distinct_values(&zeros, 1e-4).len() == zeros.len());
        let scale = trinomial::q_discriminant_scale(&tri);
        let alpha = tri.alpha().alpha;
        // the q-discriminant grows like |q|^(k^2), so it is evaluated at the
        // double-double ratios rather than at rounded ones
        let rs = trinomial::roots(&tri, &SolverOptions::default()).unwrap();
        prop_assume!(!rs.has_clusters());
        let values = trinomial::ratio_discriminants(&tri, &rs).unwrap();
        prop_assert_eq!(values.len(), (k * k - k) as usize);
        for v in &values {
            prop_assert!(v.value.norm() <= 1e-8 * scale, "{:e}", v.value.norm() / scale);
        }
        for q in pairwise_ratios(&zeros) {
            if let Ok(h) = trinomial::h_eval(q, k, l) {
                prop_assert!((h - alpha).norm() <= 1e-6 * (1.0 + alpha.norm()));
            }
        }
    }

    #[test]
    fn rotation_of_real_alpha_trinomials(alpha in -50.0f64..50.0, phase in 0.0f64..6.28, (k, l) in coprime_shifts(6)) {
        let Ok(base) = TrinomialSpec::with_alpha(alpha, k, l) else { return Ok(()) };
        // rotating t by e^{i phase} keeps alpha real and the ratios fixed
        let w = Complex64::from_polar(1.0, phase);
        let tri = TrinomialSpec::new(base.a * w.powu(k), base.b * w.powu(l), k, l).unwrap();
        let plan = trinomial::rotate_to_real(&tri).unwrap();
        let r = plan.rotated;
        prop_assert!(r.a.im.abs() <= 1e-9 * (1.0 + r.a.norm()));
        prop_assert!(r.b.im.abs() <= 1e-9 * (1.0 + r.b.norm()));
        let zeros = trinomial_zeros(tri.a, tri.b, k, l);
        prop_assume!(distinct_values(&zeros, 1e-4).len() == zeros.len());
        let before = pairwise_ratios(&zeros);
        let after = pairwise_ratios(&trinomial_zeros(r.a, r.b, k, l));
        prop_assert!(multiset_distance(&before, &after) <= 1e-9);
    }

    #[test]
    fn real_alpha_ratio_set_is_closed(alpha in -50.0f64..50.0, (k, l) in coprime_shifts(6)) {
        let Ok(tri) = TrinomialSpec::with_alpha(alpha, k, l) else { return Ok(()) };
        let rs = trinomial::roots(&tri, &SolverOptions::default()).unwrap();
        prop_assume!(!rs.has_clusters());
        let q: Vec<Complex64> = classify::all_ratios(&rs, 1e-6).unwrap().iter().map(|r| r.q).collect();
        let inv: Vec<Complex64> = q.iter().map(|x| x.inv()).collect();
        let conj: Vec<Complex64> = q.iter().map(|x| x.conj()).collect();
        prop_assert!(multiset_distance(&inv, &q) <= 1e-8);
        prop_assert!(multiset_distance(&conj, &q) <= 1e-8);
    }

    #[test]
    fn classification_symmetries(q in complex(4.0), tol in 1e-9f64..1e-3) {
        prop_assume!(q.norm() > 1e-3);
        prop_assert_eq!(classify_ratio(q, tol), classify_ratio(q.conj(), tol));
        let real = classify_ratio(q, tol).is_real();
        // exactly real values stay real under inversion
        let r = Complex64::new(q.re, 0.0);
        prop_assert!(classify_ratio(r, tol).is_real() && classify_ratio(r.inv(), tol).is_real());
        if q.im == 0.0 {
            prop_assert!(real);
        }
        let k = classify_ratio(q, tol);
        prop_assert_eq!(k.is_real(), matches!(k, RatioKind::Real | RatioKind::Both));
    }

    #[test]
    fn omega_matches_brute_force(alpha in -200.0f64..200.0, (k, l) in coprime_shifts(7)) {
        let beta = trinomial::beta(k, l);
        prop_assume!((alpha - beta).abs() >= 1e-3 * beta && alpha.abs() > 1e-3);
        let Ok(tri) = TrinomialSpec::with_alpha(alpha, k, l) else { return Ok(()) };
        let rs = trinomial::roots(&tri, &SolverOptions::default()).unwrap();
        let observed = classify::count_real_ratios(&rs, 1e-6).unwrap() as u32;
        let expected = trinomial::omega_expected(Complex64::new(alpha, 0.0), k, l).unwrap().count;
        prop_assert_eq!(observed, expected);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(12))]

    #[test]
    fn report_round_trips(spec in spec(), n in 3usize..12) {
        let report = experiments::run_full_verification(&spec, &[n], &VerifyConfig::default());
        let json = report.to_json().unwrap();
        let back = experiments::ExperimentReport::from_json(&json).unwrap();
        prop_assert_eq!(back.to_json().unwrap(), json);
        for (_, z) in report.zeros() {
            prop_assert!(!experiments::is_near_zero_of(spec.a(), z.z0, 1e-8));
        }
    }
}
