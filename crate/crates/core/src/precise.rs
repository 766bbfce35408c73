//! Double-double complex helpers.
//!
//! Newton corrections near clustered roots and q-discriminant values at
//! computed ratios lose most of their digits in plain `f64`; these helpers
//! carry roughly 32 significant digits through the evaluations that need it.

use num_complex::{Complex, Complex64};
use twofloat::TwoFloat;

pub(crate) type Cdd = Complex<TwoFloat>;

pub(crate) fn dd(z: Complex64) -> Cdd {
    Complex::new(TwoFloat::from(z.re), TwoFloat::from(z.im))
}

pub(crate) fn dd_real(x: f64) -> Cdd {
    Complex::new(TwoFloat::from(x), TwoFloat::from(0.0))
}

pub(crate) fn to_c64(z: Cdd) -> Complex64 {
    Complex64::new(z.re.hi() + z.re.lo(), z.im.hi() + z.im.lo())
}

/// `(hi, lo)` with `hi + lo == z` to double-double precision.
pub(crate) fn split(z: Cdd) -> (Complex64, Complex64) {
    (
        Complex64::new(z.re.hi(), z.im.hi()),
        Complex64::new(z.re.lo(), z.im.lo()),
    )
}

pub(crate) fn join(hi: Complex64, lo: Complex64) -> Cdd {
    Complex::new(
        TwoFloat::new_add(hi.re, lo.re),
        TwoFloat::new_add(hi.im, lo.im),
    )
}

/// `1/z`. The division operator of `TwoFloat` keeps only about 17 digits, so
/// the reciprocal is refined with two Newton steps instead.
pub(crate) fn recip(z: Cdd) -> Cdd {
    let one = TwoFloat::from(1.0);
    let n = z.re * z.re + z.im * z.im;
    let mut r = TwoFloat::from(1.0 / n.hi());
    for _ in 0..2 {
        r = r + r * (one - n * r);
    }
    Complex::new(z.re * r, -z.im * r)
}

pub(crate) fn div(a: Cdd, b: Cdd) -> Cdd {
    a * recip(b)
}

pub(crate) fn abs(z: Cdd) -> f64 {
    to_c64(z).norm()
}

pub(crate) fn powu(z: Cdd, n: u32) -> Cdd {
    let mut result = dd_real(1.0);
    let mut base = z;
    let mut e = n;
    while e > 0 {
        if e & 1 == 1 {
            result = result * base;
        }
        base = base * base;
        e >>= 1;
    }
    result
}

/// Horner evaluation of `p` and `p'` at `z` with double-double accumulation.
pub(crate) fn horner_with_derivative(coeffs: &[Cdd], z: Cdd) -> (Cdd, Cdd) {
    let mut p = dd_real(0.0);
    let mut dp = dd_real(0.0);
    for &c in coeffs.iter().rev() {
        dp = dp * z + p;
        p = p * z + c;
    }
    (p, dp)
}

/// Evaluates `sum c_e z^e` and its derivative over a sparse term list.
pub(crate) fn sparse_with_derivative(terms: &[(u32, Cdd)], z: Cdd) -> (Cdd, Cdd) {
    let mut p = dd_real(0.0);
    let mut dp = dd_real(0.0);
    for &(e, c) in terms {
        if e == 0 {
            p = p + c;
            continue;
        }
        let zpow = powu(z, e - 1);
        dp = dp + c * zpow * dd_real(e as f64);
        p = p + c * zpow * z;
    }
    (p, dp)
}
