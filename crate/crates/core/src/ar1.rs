//! Linear regression with an AR(1) disturbance, estimated by iterated
//! quasi-differencing (Cochrane-Orcutt, optionally keeping the first row
//! with the Prais-Winsten weight).

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::ols::{ols_fit, OlsFit, RegressionSpec};
use crate::scalar::{mean, sum_sq, Scalar};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Ar1Method {
    /// Drop the first observation.
    #[default]
    Difference,
    /// Keep the first observation scaled by `sqrt(1 - rho^2)`.
    FullSample,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Ar1Options<T> {
    pub method: Ar1Method,
    pub tolerance: T,
    pub max_iterations: usize,
}

impl<T: Scalar> Default for Ar1Options<T> {
    fn default() -> Self {
        Self {
            method: Ar1Method::Difference,
            tolerance: T::lit(1e-8),
            max_iterations: 100,
        }
    }
}

/// Regression with AR(1) errors `u_t = rho * u_{t-1} + e_t`.
///
/// `inner_fit` is the OLS fit on quasi-differenced data. Its coefficients
/// are already on the structural scale (intercept first when present), but
/// its R^2 is the uncentered one of the transformed regression; use the
/// top-level `r_squared` for reporting.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Ar1Fit<T> {
    pub rho: T,
    pub rho_std_error: T,
    pub rho_t_statistic: T,
    pub inner_fit: OlsFit<T>,
    /// Coefficient covariance with rho counted in the residual degrees of
    /// freedom: `inner_fit.covariance * df / (df - 1)`.
    pub covariance: Vec<Vec<T>>,
    pub std_errors: Vec<T>,
    pub t_statistics: Vec<T>,
    pub iterations: usize,
    pub converged: bool,
    pub method: Ar1Method,
    pub effective_n: usize,
    /// `y_t - x_t' b` over the full sample.
    pub structural_residuals: Vec<T>,
    /// `1 - SSR(innovations) / TSS(y)` over the estimation sample.
    pub r_squared: T,
    pub adjusted_r_squared: T,
    /// Joint significance of slopes and rho.
    pub f_statistic: Option<T>,
    /// Durbin-Watson of the innovations.
    pub durbin_watson: T,
}

impl<T: Scalar> Ar1Fit<T> {
    pub fn coefficients(&self) -> &[T] {
        &self.inner_fit.coefficients
    }

    pub fn innovations(&self) -> &[T] {
        &self.inner_fit.residuals
    }
}

/// Least-squares AR(1) coefficient of a residual path (no intercept) and
/// its standard error. A path with no variation gives `rho = 0`.
pub fn ar1_coefficient<T: Scalar>(residuals: &[T]) -> Result<(T, T)> {
    if residuals.len() < 3 {
        return Err(Error::InsufficientData {
            required: 2,
            available: residuals.len(),
        });
    }
    let lagged = &residuals[..residuals.len() - 1];
    let current = &residuals[1..];
    let denom = sum_sq(lagged);
    if denom == T::zero() {
        return Ok((T::zero(), T::nan()));
    }
    let rho = lagged.iter().zip(current).map(|(&a, &b)| a * b).sum::<T>() / denom;
    let ssr: T = lagged
        .iter()
        .zip(current)
        .map(|(&a, &b)| (b - rho * a) * (b - rho * a))
        .sum();
    let s2 = ssr / T::from_count(current.len() - 1);
    Ok((rho, (s2 / denom).sqrt()))
}

/// Quasi-differenced regression for a given rho.
pub fn fit_with_fixed_rho<T: Scalar>(
    spec: &RegressionSpec<T>,
    rho: T,
    method: Ar1Method,
) -> Result<OlsFit<T>> {
    ols_fit(&quasi_difference(spec, rho, method)?)
}

fn quasi_difference<T: Scalar>(
    spec: &RegressionSpec<T>,
    rho: T,
    method: Ar1Method,
) -> Result<RegressionSpec<T>> {
    if rho.abs() >= T::one() {
        return Err(Error::ExplosiveDisturbance { rho: rho.as_f64() });
    }
    let n = spec.n();
    if n < 2 {
        return Err(Error::InsufficientData {
            required: 1,
            available: n,
        });
    }
    let qd = |v: &[T], first_weight: Option<T>| -> Vec<T> {
        let mut out = Vec::with_capacity(n);
        if let Some(w) = first_weight {
            out.push(w * v[0]);
        }
        out.extend(v.windows(2).map(|w| w[1] - rho * w[0]));
        out
    };
    let first = match method {
        Ar1Method::Difference => None,
        Ar1Method::FullSample => Some((T::one() - rho * rho).sqrt()),
    };
    let dependent = qd(&spec.dependent, first);
    let mut cols = Vec::with_capacity(spec.n_params());
    if spec.intercept {
        cols.push(qd(&vec![T::one(); n], first));
    }
    for c in &spec.regressors {
        cols.push(qd(c, first));
    }
    Ok(RegressionSpec::without_intercept(dependent, cols))
}

fn structural_residuals<T: Scalar>(spec: &RegressionSpec<T>, coefs: &[T]) -> Vec<T> {
    let off = usize::from(spec.intercept);
    (0..spec.n())
        .map(|t| {
            let mut fit = if spec.intercept { coefs[0] } else { T::zero() };
            for (j, c) in spec.regressors.iter().enumerate() {
                fit += coefs[j + off] * c[t];
            }
            spec.dependent[t] - fit
        })
        .collect()
}

/// Iterated feasible estimation of a regression with AR(1) disturbances.
pub fn fit_with_ar1<T: Scalar>(
    spec: &RegressionSpec<T>,
    options: Ar1Options<T>,
) -> Result<Ar1Fit<T>> {
    if !(options.tolerance > T::zero()) || options.max_iterations == 0 {
        return Err(Error::Validation(
            "AR(1) tolerance must be positive and max_iterations at least 1".into(),
        ));
    }
    let ols = ols_fit(spec)?;
    let y_scale = sum_sq(&spec.dependent).sqrt().max(T::one());
    let negligible = |u: &[T]| sum_sq(u).sqrt() <= T::lit(1e-10) * y_scale;

    let estimate = |u: &[T]| -> Result<(T, T)> {
        if negligible(u) {
            Ok((T::zero(), T::nan()))
        } else {
            ar1_coefficient(u)
        }
    };

    let (mut rho, _) = estimate(&ols.residuals)?;
    let mut last_coefficients = ols.coefficients.clone();
    for iteration in 1..=options.max_iterations {
        if rho.abs() >= T::one() {
            return Err(Error::ExplosiveDisturbance { rho: rho.as_f64() });
        }
        let inner = fit_with_fixed_rho(spec, rho, options.method)?;
        let u = structural_residuals(spec, &inner.coefficients);
        let (next, _) = estimate(&u)?;
        if next.abs() >= T::one() {
            return Err(Error::ExplosiveDisturbance { rho: next.as_f64() });
        }
        if (next - rho).abs() < options.tolerance {
            return finish(spec, inner, u, rho, iteration, options.method);
        }
        last_coefficients = inner.coefficients;
        rho = next;
    }
    Err(Error::Convergence {
        iterations: options.max_iterations,
        last_rho: rho.as_f64(),
        last_coefficients: last_coefficients.iter().map(|c| c.as_f64()).collect(),
    })
}

fn finish<T: Scalar>(
    spec: &RegressionSpec<T>,
    inner: OlsFit<T>,
    structural: Vec<T>,
    rho: T,
    iterations: usize,
    method: Ar1Method,
) -> Result<Ar1Fit<T>> {
    let (_, rho_se) = if sum_sq(&structural) == T::zero() {
        (T::zero(), T::nan())
    } else {
        ar1_coefficient(&structural)?
    };
    let skip = match method {
        Ar1Method::Difference => 1,
        Ar1Method::FullSample => 0,
    };
    let y_est = &spec.dependent[skip..];
    let y_bar = mean(y_est);
    let tss: T = y_est.iter().map(|&v| (v - y_bar) * (v - y_bar)).sum();
    let m = inner.n;
    // intercept, slopes and rho
    let n_coef = spec.n_params() + 1;
    let r_squared = if tss > T::zero() {
        (T::one() - inner.ssr / tss).max(T::zero())
    } else {
        T::one()
    };
    let (adjusted_r_squared, f_statistic) = if m > n_coef {
        let df = T::from_count(m - n_coef);
        let adj = T::one() - (T::one() - r_squared) * T::from_count(m - 1) / df;
        let q = T::from_count(n_coef - 1);
        (adj, Some((r_squared / q) / ((T::one() - r_squared) / df)))
    } else {
        (T::nan(), None)
    };
    let durbin_watson = if inner.ssr > T::zero() {
        crate::ols::durbin_watson(&inner.residuals)?
    } else {
        T::nan()
    };
    let df = inner.df_resid();
    let scale = if df > 1 {
        T::from_count(df) / T::from_count(df - 1)
    } else {
        T::nan()
    };
    let covariance: Vec<Vec<T>> = inner
        .covariance
        .iter()
        .map(|row| row.iter().map(|&v| v * scale).collect())
        .collect();
    let std_errors: Vec<T> = (0..covariance.len())
        .map(|i| covariance[i][i].sqrt())
        .collect();
    let t_statistics = inner
        .coefficients
        .iter()
        .zip(&std_errors)
        .map(|(&b, &se)| b / se)
        .collect();
    Ok(Ar1Fit {
        rho,
        rho_std_error: rho_se,
        rho_t_statistic: rho / rho_se,
        effective_n: m,
        covariance,
        std_errors,
        t_statistics,
        inner_fit: inner,
        iterations,
        converged: true,
        method,
        structural_residuals: structural,
        r_squared,
        adjusted_r_squared,
        f_statistic,
        durbin_watson,
    })
}
