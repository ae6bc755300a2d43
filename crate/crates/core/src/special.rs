//! Gamma function for the fractional-integral normalisations.

use crate::error::{Error, Result};
use crate::scalar::Scalar;

const LANCZOS_G: f64 = 7.0;
const LANCZOS_COEF: [f64; 9] = [
    0.999_999_999_999_809_9,
    676.520_368_121_885_1,
    -1_259.139_216_722_402_8,
    771.323_428_777_653_1,
    -176.615_029_162_140_6,
    12.507_343_278_686_905,
    -0.138_571_095_265_720_12,
    9.984_369_578_019_572e-6,
    1.505_632_735_149_311_6e-7,
];

/// Lanczos approximation with reflection for `x < 1/2`.
///
/// Returns `Err(GammaPole)` at the non-positive integers.
pub fn gamma<S: Scalar>(x: S) -> Result<S> {
    if x <= S::zero() && x == x.floor() {
        return Err(Error::GammaPole(x.to_f64_lossy()));
    }
    Ok(gamma_unchecked(x))
}

fn gamma_unchecked<S: Scalar>(x: S) -> S {
    let half = S::lit(0.5);
    if x < half {
        let pi = S::PI();
        return pi / ((pi * x).sin() * gamma_unchecked(S::one() - x));
    }
    let x = x - S::one();
    let mut acc = S::lit(LANCZOS_COEF[0]);
    for (i, &c) in LANCZOS_COEF.iter().enumerate().skip(1) {
        acc = acc + S::lit(c) / (x + S::from_usize_lossy(i));
    }
    let t = x + S::lit(LANCZOS_G) + half;
    (S::lit(2.0) * S::PI()).sqrt() * t.powf(x + half) * (-t).exp() * acc
}

/// `Γ(a) / Γ(b)`, both arguments required to avoid the poles.
pub fn gamma_ratio<S: Scalar>(a: S, b: S) -> Result<S> {
    Ok(gamma(a)? / gamma(b)?)
}
