use std::ops::{Deref, DerefMut};

use crate::error::{Error, Result};
use crate::problem::PsiFunction;
use crate::scalar::Scalar;

pub const MIN_NODES: usize = 8;

/// Uniform nodes on `[0, T]` together with their psi images.
#[derive(Debug, Clone, PartialEq)]
pub struct Grid<S> {
    t_end: S,
    psi: PsiFunction<S>,
    x: Vec<S>,
    u: Vec<S>,
}

impl<S: Scalar> Grid<S> {
    pub fn new(t_end: S, n: usize, psi: PsiFunction<S>) -> Result<Self> {
        if n < MIN_NODES {
            return Err(Error::GridTooSmall(n));
        }
        if !(t_end > S::zero() && t_end.is_finite()) {
            return Err(Error::InvalidInterval(t_end.to_f64_lossy()));
        }
        let last = S::from_usize_lossy(n - 1);
        let x: Vec<S> = (0..n)
            .map(|i| if i == n - 1 { t_end } else { S::from_usize_lossy(i) * t_end / last })
            .collect();
        let u: Vec<S> = x.iter().map(|&xi| psi.eval(xi)).collect();
        if u.windows(2).any(|w| !(w[1] > w[0])) {
            return Err(Error::InvalidArgument(format!(
                "psi = {} does not separate the grid nodes",
                psi.name()
            )));
        }
        Ok(Self { t_end, psi, x, u })
    }

    pub fn len(&self) -> usize {
        self.x.len()
    }

    pub fn is_empty(&self) -> bool {
        self.x.is_empty()
    }

    pub fn t_end(&self) -> S {
        self.t_end
    }

    pub fn psi(&self) -> PsiFunction<S> {
        self.psi
    }

    /// Physical nodes `x_i`.
    pub fn nodes(&self) -> &[S] {
        &self.x
    }

    /// Transformed nodes `u_i = psi(x_i)`.
    pub fn psi_nodes(&self) -> &[S] {
        &self.u
    }

    pub fn step(&self) -> S {
        self.x[1] - self.x[0]
    }

    pub fn boundary(&self) -> [usize; 2] {
        [0, self.len() - 1]
    }

    pub fn interior(&self) -> std::ops::Range<usize> {
        1..self.len() - 1
    }

    /// Trapezoid weights in the physical variable.
    pub fn trapezoid_weights(&self) -> Vec<S> {
        let n = self.len();
        let half = S::lit(0.5);
        (0..n)
            .map(|i| {
                let left = if i > 0 { self.x[i] - self.x[i - 1] } else { S::zero() };
                let right = if i + 1 < n { self.x[i + 1] - self.x[i] } else { S::zero() };
                half * (left + right)
            })
            .collect()
    }

    pub fn integrate(&self, values: &[S]) -> S {
        self.trapezoid_weights().iter().zip(values).map(|(&w, &v)| w * v).sum()
    }

    /// First node index past the near-origin collar (5% of the nodes).
    pub fn collar_start(&self) -> usize {
        (self.len() as f64 * 0.05).ceil() as usize
    }

    pub fn field_from_fn(&self, f: impl Fn(S) -> S) -> Field<S> {
        Field(self.x.iter().map(|&x| f(x)).collect())
    }
}

/// Values attached to the grid nodes.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct Field<S>(pub Vec<S>);

impl<S: Scalar> Field<S> {
    pub fn zeros(n: usize) -> Self {
        Field(vec![S::zero(); n])
    }

    pub fn constant(n: usize, c: S) -> Self {
        Field(vec![c; n])
    }

    pub fn into_inner(self) -> Vec<S> {
        self.0
    }

    pub fn sup_norm(&self) -> S {
        self.0.iter().fold(S::zero(), |m, v| m.max(v.abs()))
    }

    /// Smallest value over the interior nodes (boundary excluded).
    pub fn min_interior(&self) -> S {
        let n = self.0.len();
        self.0[1..n - 1].iter().fold(S::infinity(), |m, &v| m.min(v))
    }

    pub fn scaled(&self, c: S) -> Self {
        Field(self.0.iter().map(|&v| v * c).collect())
    }

    pub fn max_abs_diff(&self, other: &Self) -> S {
        self.0.iter().zip(&other.0).fold(S::zero(), |m, (&a, &b)| m.max((a - b).abs()))
    }

    /// Sup-norm of the difference over `range` only.
    pub fn max_abs_diff_on(&self, other: &Self, range: std::ops::Range<usize>) -> S {
        self.0[range.clone()]
            .iter()
            .zip(&other.0[range])
            .fold(S::zero(), |m, (&a, &b)| m.max((a - b).abs()))
    }

    pub fn is_ordered_below(&self, upper: &Self) -> bool {
        self.0.iter().zip(&upper.0).all(|(&a, &b)| a <= b)
    }
}

impl<S> Deref for Field<S> {
    type Target = [S];
    fn deref(&self) -> &[S] {
        &self.0
    }
}

impl<S> DerefMut for Field<S> {
    fn deref_mut(&mut self) -> &mut [S] {
        &mut self.0
    }
}

impl<S> From<Vec<S>> for Field<S> {
    fn from(v: Vec<S>) -> Self {
        Field(v)
    }
}
