//! Gauss-Legendre rules.

use crate::scalar::Scalar;

/// `m`-point Gauss-Legendre nodes and weights on `[0, 1]`.
pub fn gauss_legendre<S: Scalar>(m: usize) -> (Vec<S>, Vec<S>) {
    let mut nodes = vec![S::zero(); m];
    let mut weights = vec![S::zero(); m];
    let mf = m as f64;
    for k in 0..m.div_ceil(2) {
        // Newton on P_m from the Chebyshev-like initial guess, carried out in f64.
        let mut x = (std::f64::consts::PI * (k as f64 + 0.75) / (mf + 0.5)).cos();
        let mut dp = 1.0;
        for _ in 0..100 {
            let (mut p0, mut p1) = (1.0, x);
            for j in 2..=m {
                let jf = j as f64;
                let p2 = ((2.0 * jf - 1.0) * x * p1 - (jf - 1.0) * p0) / jf;
                p0 = p1;
                p1 = p2;
            }
            let pm = if m == 1 { x } else { p1 };
            let pm1 = if m == 1 { 1.0 } else { p0 };
            dp = mf * (x * pm - pm1) / (x * x - 1.0);
            let dx = pm / dp;
            x -= dx;
            if dx.abs() < 1e-16 {
                break;
            }
        }
        let w = 2.0 / ((1.0 - x * x) * dp * dp);
        nodes[k] = S::lit(0.5 * (1.0 - x));
        nodes[m - 1 - k] = S::lit(0.5 * (1.0 + x));
        weights[k] = S::lit(0.5 * w);
        weights[m - 1 - k] = S::lit(0.5 * w);
    }
    (nodes, weights)
}
