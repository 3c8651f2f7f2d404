//! Ordinary least squares with intercept and the usual summary statistics.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{Cholesky, PIVOT_RATIO};
use crate::scalar::{dot, mean, sum_sq, Scalar};

/// Dependent vector and regressor columns.
///
/// An intercept column is added automatically unless `intercept` is false.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RegressionSpec<T> {
    pub dependent: Vec<T>,
    /// Regressors stored column by column, each of length `dependent.len()`.
    pub regressors: Vec<Vec<T>>,
    pub intercept: bool,
}

impl<T: Scalar> RegressionSpec<T> {
    pub fn new(dependent: Vec<T>, regressors: Vec<Vec<T>>) -> Self {
        Self {
            dependent,
            regressors,
            intercept: true,
        }
    }

    pub fn without_intercept(dependent: Vec<T>, regressors: Vec<Vec<T>>) -> Self {
        Self {
            dependent,
            regressors,
            intercept: false,
        }
    }

    pub fn n(&self) -> usize {
        self.dependent.len()
    }

    /// Number of slope regressors (intercept excluded).
    pub fn k(&self) -> usize {
        self.regressors.len()
    }

    /// Number of estimated coefficients.
    pub fn n_params(&self) -> usize {
        self.k() + usize::from(self.intercept)
    }

    fn validate(&self) -> Result<()> {
        let n = self.n();
        if let Some(j) = self.regressors.iter().position(|c| c.len() != n) {
            return Err(Error::Validation(format!(
                "regressor {j} has {} rows, dependent has {n}",
                self.regressors[j].len()
            )));
        }
        if self.n_params() == 0 {
            return Err(Error::Validation("regression has no coefficients".into()));
        }
        if n <= self.n_params() {
            return Err(Error::InsufficientData {
                required: self.n_params(),
                available: n,
            });
        }
        let finite = |v: &[T]| v.iter().all(|x| x.is_finite());
        if !finite(&self.dependent) || !self.regressors.iter().all(|c| finite(c)) {
            return Err(Error::Validation("regression data must be finite".into()));
        }
        Ok(())
    }
}

/// Result of an OLS fit. Coefficient order: intercept (if any), then the
/// regressors in the order given.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OlsFit<T> {
    pub coefficients: Vec<T>,
    pub covariance: Vec<Vec<T>>,
    pub std_errors: Vec<T>,
    pub t_statistics: Vec<T>,
    pub residuals: Vec<T>,
    pub fitted: Vec<T>,
    pub r_squared: T,
    pub adjusted_r_squared: T,
    /// Joint test of all slopes; `None` when there are no slopes.
    pub f_statistic: Option<T>,
    pub ssr: T,
    /// `ssr / (n - k - 1)`
    pub sigma2: T,
    pub n: usize,
    pub k: usize,
    pub intercept: bool,
}

impl<T: Scalar> OlsFit<T> {
    pub fn n_params(&self) -> usize {
        self.k + usize::from(self.intercept)
    }

    pub fn df_resid(&self) -> usize {
        self.n - self.n_params()
    }

    /// Index of slope `j` within `coefficients`.
    pub fn slope_index(&self, j: usize) -> usize {
        j + usize::from(self.intercept)
    }

    pub fn slope(&self, j: usize) -> T {
        self.coefficients[self.slope_index(j)]
    }

    pub fn log_likelihood(&self) -> T {
        let n = T::from_count(self.n);
        let two_pi = T::lit(std::f64::consts::TAU);
        -n / T::lit(2.0) * (two_pi.ln() + (self.ssr / n).ln() + T::one())
    }

    pub fn aic(&self) -> T {
        T::lit(-2.0) * self.log_likelihood() + T::lit(2.0) * T::from_count(self.n_params())
    }

    pub fn durbin_watson(&self) -> Result<T> {
        durbin_watson(&self.residuals)
    }
}

/// Least-squares fit via centered, column-scaled normal equations.
pub fn ols_fit<T: Scalar>(spec: &RegressionSpec<T>) -> Result<OlsFit<T>> {
    spec.validate()?;
    let n = spec.n();
    let k = spec.k();
    let nf = T::from_count(n);
    let y = &spec.dependent;

    let y_bar = if spec.intercept { mean(y) } else { T::zero() };
    let x_bar: Vec<T> = spec
        .regressors
        .iter()
        .map(|c| if spec.intercept { mean(c) } else { T::zero() })
        .collect();

    // Centered (or raw) columns scaled to unit length.
    let mut scale = Vec::with_capacity(k);
    let mut z: Vec<Vec<T>> = Vec::with_capacity(k);
    for (j, col) in spec.regressors.iter().enumerate() {
        let centered: Vec<T> = col.iter().map(|&x| x - x_bar[j]).collect();
        let norm = sum_sq(&centered).sqrt();
        let raw_norm = sum_sq(col).sqrt();
        if !(norm > T::lit(PIVOT_RATIO) * raw_norm) || norm == T::zero() {
            return Err(Error::SingularDesign(format!(
                "regressor {j} has no variation{}",
                if spec.intercept {
                    " around its mean"
                } else {
                    ""
                }
            )));
        }
        scale.push(norm);
        z.push(centered.into_iter().map(|x| x / norm).collect());
    }
    let yc: Vec<T> = y.iter().map(|&v| v - y_bar).collect();

    let (slopes, slope_cov_unit) = if k > 0 {
        let gram: Vec<Vec<T>> = (0..k)
            .map(|i| (0..k).map(|j| dot(&z[i], &z[j])).collect())
            .collect();
        let rhs: Vec<T> = z.iter().map(|c| dot(c, &yc)).collect();
        let chol = Cholesky::factor(&gram)?;
        let scaled = chol.solve(&rhs);
        let slopes: Vec<T> = scaled.iter().zip(&scale).map(|(&b, &s)| b / s).collect();
        let inv = chol.inverse();
        let cov: Vec<Vec<T>> = (0..k)
            .map(|i| (0..k).map(|j| inv[i][j] / (scale[i] * scale[j])).collect())
            .collect();
        (slopes, cov)
    } else {
        (Vec::new(), Vec::new())
    };

    let intercept = y_bar - dot(&x_bar, &slopes);
    let fitted: Vec<T> = (0..n)
        .map(|t| {
            let base = if spec.intercept { intercept } else { T::zero() };
            base + (0..k).map(|j| slopes[j] * spec.regressors[j][t]).sum::<T>()
        })
        .collect();
    let residuals: Vec<T> = y.iter().zip(&fitted).map(|(&a, &b)| a - b).collect();
    let ssr = sum_sq(&residuals);
    let p = spec.n_params();
    let df = T::from_count(n - p);
    let sigma2 = ssr / df;

    let mut coefficients = Vec::with_capacity(p);
    let mut covariance = vec![vec![T::zero(); p]; p];
    let off = usize::from(spec.intercept);
    if spec.intercept {
        coefficients.push(intercept);
        // Var(a) = s2/n + xbar' V xbar, Cov(a, b) = -V xbar
        let v_xbar: Vec<T> = (0..k).map(|i| dot(&slope_cov_unit[i], &x_bar)).collect();
        covariance[0][0] = sigma2 * (T::one() / nf + dot(&x_bar, &v_xbar));
        for i in 0..k {
            covariance[0][i + 1] = -sigma2 * v_xbar[i];
            covariance[i + 1][0] = covariance[0][i + 1];
        }
    }
    coefficients.extend_from_slice(&slopes);
    for i in 0..k {
        for j in 0..k {
            covariance[i + off][j + off] = sigma2 * slope_cov_unit[i][j];
        }
    }
    let std_errors: Vec<T> = (0..p)
        .map(|i| covariance[i][i].max(T::zero()).sqrt())
        .collect();
    let t_statistics: Vec<T> = coefficients
        .iter()
        .zip(&std_errors)
        .map(|(&b, &se)| b / se)
        .collect();

    let tss = if spec.intercept {
        sum_sq(&yc)
    } else {
        sum_sq(y)
    };
    let r_squared = if tss > T::zero() {
        (T::one() - ssr / tss).max(T::zero()).min(T::one())
    } else {
        T::one()
    };
    let adjusted_r_squared = if spec.intercept {
        T::one() - (T::one() - r_squared) * T::from_count(n - 1) / df
    } else {
        T::one() - (T::one() - r_squared) * nf / df
    };
    let f_statistic =
        (k > 0).then(|| (r_squared / T::from_count(k)) / ((T::one() - r_squared) / df));

    Ok(OlsFit {
        coefficients,
        covariance,
        std_errors,
        t_statistics,
        residuals,
        fitted,
        r_squared,
        adjusted_r_squared,
        f_statistic,
        ssr,
        sigma2,
        n,
        k,
        intercept: spec.intercept,
    })
}

/// `sum (e_t - e_{t-1})^2 / sum e_t^2`
pub fn durbin_watson<T: Scalar>(residuals: &[T]) -> Result<T> {
    if residuals.len() < 2 {
        return Err(Error::InsufficientData {
            required: 1,
            available: residuals.len(),
        });
    }
    let denom = sum_sq(residuals);
    if denom == T::zero() {
        return Err(Error::UndefinedStatistic(
            "Durbin-Watson undefined for all-zero residuals".into(),
        ));
    }
    let num: T = residuals
        .windows(2)
        .map(|w| (w[1] - w[0]) * (w[1] - w[0]))
        .sum();
    Ok(num / denom)
}
