use rand::Rng;

use crate::error::{Error, Result};
use crate::problem::Nonlinearity;
use crate::scalar::Scalar;

pub const SCAN_POINTS: usize = 20_000;
const SCAN_FLOOR: f64 = 1e-12;

/// `h(s) - s^-nu <= a s - b` for `s` in `(0, s_max]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Majorant<S> {
    pub a: S,
    pub b: S,
    pub s_star: S,
    pub scan_range: (S, S),
}

impl<S: Scalar> Majorant<S> {
    /// `(h(s) - s^-nu) - (a s - b)`; non-positive wherever the bound holds.
    pub fn excess(&self, h: &Nonlinearity<S>, nu: S, s: S) -> S {
        (h.eval(s) - s.powf(-nu)) - (self.a * s - self.b)
    }

    /// Largest excess over `count` points drawn log-uniformly from the scan range.
    pub fn worst_sampled_excess<R: Rng + ?Sized>(&self, h: &Nonlinearity<S>, nu: S, count: usize, rng: &mut R) -> S {
        let (lo, hi) = (self.scan_range.0.to_f64_lossy().ln(), self.scan_range.1.to_f64_lossy().ln());
        (0..count)
            .map(|_| {
                let s = S::lit(rng.gen_range(lo..=hi).exp()).min(self.scan_range.1);
                self.excess(h, nu, s)
            })
            .fold(S::neg_infinity(), S::max)
    }
}

fn g<S: Scalar>(h: &Nonlinearity<S>, nu: S, a: S, s: S) -> S {
    a * s - h.eval(s) + s.powf(-nu)
}

/// Infimum `b` of `a s - h(s) + s^-nu` over `(0, s_max]` by a log-spaced scan
/// followed by golden-section refinement around the best scan point.
pub fn linear_majorant<S: Scalar>(h: &Nonlinearity<S>, nu: S, a: S, s_max: S) -> Result<Majorant<S>> {
    if !(a > S::zero()) {
        return Err(Error::InvalidArgument(format!("majorant slope must be positive, got {a}")));
    }
    let s_min = S::lit(SCAN_FLOOR);
    if !(s_max > s_min) || !(h.eval(s_max) / s_max < a) {
        return Err(Error::NotSublinearAtScanEnd { s_max: s_max.to_f64_lossy() });
    }
    let (l0, l1) = (s_min.ln(), s_max.ln());
    let step = (l1 - l0) / S::from_usize_lossy(SCAN_POINTS - 1);
    let at = |k: usize| if k == SCAN_POINTS - 1 { s_max } else { (l0 + step * S::from_usize_lossy(k)).exp() };
    let best = (0..SCAN_POINTS)
        .map(|k| (k, g(h, nu, a, at(k))))
        .fold((0, S::infinity()), |b, c| if c.1 < b.1 { c } else { b })
        .0;
    let mut lo = at(best.saturating_sub(1));
    let mut hi = at((best + 1).min(SCAN_POINTS - 1));
    let ratio = (S::lit(5.0).sqrt() - S::one()) / S::lit(2.0);
    let mut c = hi - ratio * (hi - lo);
    let mut d = lo + ratio * (hi - lo);
    let (mut gc, mut gd) = (g(h, nu, a, c), g(h, nu, a, d));
    for _ in 0..200 {
        if hi - lo <= S::epsilon() * hi {
            break;
        }
        if gc < gd {
            hi = d;
            d = c;
            gd = gc;
            c = hi - ratio * (hi - lo);
            gc = g(h, nu, a, c);
        } else {
            lo = c;
            c = d;
            gc = gd;
            d = lo + ratio * (hi - lo);
            gd = g(h, nu, a, d);
        }
    }
    let (s_star, g_star) = [(at(best), g(h, nu, a, at(best))), (c, gc), (d, gd)]
        .into_iter()
        .fold((S::nan(), S::infinity()), |b, x| if x.1 < b.1 { x } else { b });
    // Shave a few ulps so the bound also holds between refinement points.
    let b = g_star - S::lit(8.0) * S::epsilon() * (S::one() + g_star.abs());
    if !(b > S::zero()) {
        return Err(Error::MajorantSlopeTooSmall { b: b.to_f64_lossy() });
    }
    Ok(Majorant { a, b, s_star, scan_range: (s_min, s_max) })
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn sqrt_half_unit_slope() {
        let m = linear_majorant(&Nonlinearity::sqrt(), 0.5f64, 1.0, 1e6).unwrap();
        assert!((m.b - 1.0).abs() < 1e-10, "{}", m.b);
        assert!((m.s_star - 1.0).abs() < 1e-6);
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        assert!(m.worst_sampled_excess(&Nonlinearity::sqrt(), 0.5, 100_000, &mut rng) <= 0.0);
    }

    #[test]
    fn zero_nonlinearity() {
        let m = linear_majorant(&Nonlinearity::zero(), 0.5, 1.0, 1e6).unwrap();
        assert!((m.b - 3.0 * 2f64.powf(-2.0 / 3.0)).abs() < 1e-10);
        assert!((m.s_star - 2f64.powf(-2.0 / 3.0)).abs() < 1e-6);
    }

    #[test]
    fn larger_slope_raises_infimum() {
        let m = linear_majorant(&Nonlinearity::sqrt(), 0.5, 10.0, 1e6).unwrap();
        assert!(m.b >= 1.0);
    }

    #[test]
    fn failures() {
        let m = linear_majorant(&Nonlinearity::sqrt(), 0.5, 0.01, 1e6);
        assert!(matches!(m, Err(Error::MajorantSlopeTooSmall { .. })));
        let m = linear_majorant(&Nonlinearity::sqrt(), 0.5, 1e-4, 1e6);
        assert!(matches!(m, Err(Error::NotSublinearAtScanEnd { .. })));
    }
}
