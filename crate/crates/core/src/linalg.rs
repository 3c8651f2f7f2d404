//! Small dense symmetric solves for normal equations.

#![allow(clippy::needless_range_loop)]

use crate::error::{Error, Result};
use crate::scalar::Scalar;

/// Pivots below this fraction of the largest pivot mark the design singular.
pub(crate) const PIVOT_RATIO: f64 = 1e-12;

/// Lower-triangular Cholesky factor of a symmetric positive-definite matrix.
pub(crate) struct Cholesky<T> {
    l: Vec<Vec<T>>,
}

impl<T: Scalar> Cholesky<T> {
    pub(crate) fn factor(a: &[Vec<T>]) -> Result<Self> {
        let n = a.len();
        let mut l = vec![vec![T::zero(); n]; n];
        let mut pivots = Vec::with_capacity(n);
        for j in 0..n {
            let mut d = a[j][j];
            for k in 0..j {
                d -= l[j][k] * l[j][k];
            }
            pivots.push(d);
            let largest = pivots.iter().copied().fold(T::zero(), T::max);
            if !(d > T::lit(PIVOT_RATIO) * largest) || !d.is_finite() {
                return Err(Error::SingularDesign(format!(
                    "pivot {j} is {d:e}, below {PIVOT_RATIO:e} x largest pivot"
                )));
            }
            let djj = d.sqrt();
            l[j][j] = djj;
            for i in (j + 1)..n {
                let mut s = a[i][j];
                for k in 0..j {
                    s -= l[i][k] * l[j][k];
                }
                l[i][j] = s / djj;
            }
        }
        Ok(Self { l })
    }

    pub(crate) fn solve(&self, b: &[T]) -> Vec<T> {
        let n = self.l.len();
        let mut y = b.to_vec();
        for i in 0..n {
            for k in 0..i {
                let t = self.l[i][k] * y[k];
                y[i] -= t;
            }
            y[i] /= self.l[i][i];
        }
        for i in (0..n).rev() {
            for k in (i + 1)..n {
                let t = self.l[k][i] * y[k];
                y[i] -= t;
            }
            y[i] /= self.l[i][i];
        }
        y
    }

    pub(crate) fn inverse(&self) -> Vec<Vec<T>> {
        let n = self.l.len();
        let mut inv = vec![vec![T::zero(); n]; n];
        for j in 0..n {
            let mut e = vec![T::zero(); n];
            e[j] = T::one();
            let col = self.solve(&e);
            for i in 0..n {
                inv[i][j] = col[i];
            }
        }
        // symmetrize away round-off
        for i in 0..n {
            for j in (i + 1)..n {
                let m = (inv[i][j] + inv[j][i]) / T::lit(2.0);
                inv[i][j] = m;
                inv[j][i] = m;
            }
        }
        inv
    }
}
