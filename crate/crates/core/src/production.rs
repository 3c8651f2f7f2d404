//! Cobb-Douglas production function `Q = A K^alpha L^beta`, estimated in
//! log-linear form either unrestricted or under constant returns to scale
//! (per-worker form).

use serde::{Deserialize, Serialize};

use crate::ar1::{fit_with_ar1, Ar1Fit, Ar1Options};
use crate::diagnostics::{DiagnosticReport, Distribution};
use crate::error::{Error, Result};
use crate::ols::{ols_fit, OlsFit, RegressionSpec};
use crate::scalar::Scalar;
use crate::series::{per_capita_log_panel, PanelDataset};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CobbDouglasForm {
    /// `ln Q = ln A + alpha ln K + beta ln L`
    Unrestricted,
    /// `ln(Q/L) = ln A + alpha ln(K/L)`, `beta = 1 - alpha`
    Restricted,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CobbDouglasOptions<T> {
    /// AR(1) disturbance correction; `None` for plain OLS.
    pub ar1: Option<Ar1Options<T>>,
    /// Add a linear time trend regressor.
    pub time_trend: bool,
}

impl<T: Scalar> Default for CobbDouglasOptions<T> {
    fn default() -> Self {
        Self {
            ar1: Some(Ar1Options::default()),
            time_trend: false,
        }
    }
}

impl<T: Scalar> CobbDouglasOptions<T> {
    pub fn ols() -> Self {
        Self {
            ar1: None,
            time_trend: false,
        }
    }
}

/// The least-squares fit behind a production-function estimate.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "estimator", rename_all = "snake_case")]
pub enum Estimation<T> {
    Ols(OlsFit<T>),
    Ar1(Ar1Fit<T>),
}

impl<T: Scalar> Estimation<T> {
    /// Structural coefficients, intercept first.
    pub fn coefficients(&self) -> &[T] {
        match self {
            Estimation::Ols(f) => &f.coefficients,
            Estimation::Ar1(f) => f.coefficients(),
        }
    }

    pub fn covariance(&self) -> &[Vec<T>] {
        match self {
            Estimation::Ols(f) => &f.covariance,
            Estimation::Ar1(f) => &f.covariance,
        }
    }

    pub fn std_errors(&self) -> &[T] {
        match self {
            Estimation::Ols(f) => &f.std_errors,
            Estimation::Ar1(f) => &f.std_errors,
        }
    }

    pub fn t_statistics(&self) -> &[T] {
        match self {
            Estimation::Ols(f) => &f.t_statistics,
            Estimation::Ar1(f) => &f.t_statistics,
        }
    }

    /// Observations used in the final regression.
    pub fn n(&self) -> usize {
        match self {
            Estimation::Ols(f) => f.n,
            Estimation::Ar1(f) => f.effective_n,
        }
    }

    /// Residual degrees of freedom (AR coefficient counted for AR(1) fits).
    pub fn df_resid(&self) -> usize {
        match self {
            Estimation::Ols(f) => f.df_resid(),
            Estimation::Ar1(f) => f.inner_fit.df_resid().saturating_sub(1),
        }
    }

    pub fn r_squared(&self) -> T {
        match self {
            Estimation::Ols(f) => f.r_squared,
            Estimation::Ar1(f) => f.r_squared,
        }
    }

    pub fn adjusted_r_squared(&self) -> T {
        match self {
            Estimation::Ols(f) => f.adjusted_r_squared,
            Estimation::Ar1(f) => f.adjusted_r_squared,
        }
    }

    pub fn f_statistic(&self) -> Option<T> {
        match self {
            Estimation::Ols(f) => f.f_statistic,
            Estimation::Ar1(f) => f.f_statistic,
        }
    }

    /// Durbin-Watson of the final residuals (innovations for AR(1) fits).
    pub fn durbin_watson(&self) -> Option<T> {
        match self {
            Estimation::Ols(f) => f.durbin_watson().ok(),
            Estimation::Ar1(f) => f.durbin_watson.is_finite().then_some(f.durbin_watson),
        }
    }

    /// `y - X b` on the original (untransformed) data.
    pub fn structural_residuals(&self) -> &[T] {
        match self {
            Estimation::Ols(f) => &f.residuals,
            Estimation::Ar1(f) => &f.structural_residuals,
        }
    }

    pub fn rho(&self) -> Option<T> {
        match self {
            Estimation::Ols(_) => None,
            Estimation::Ar1(f) => Some(f.rho),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CobbDouglasFit<T> {
    pub form: CobbDouglasForm,
    /// Output elasticity of capital.
    pub alpha: T,
    /// Output elasticity of labor.
    pub beta: T,
    /// Log of the technology level.
    pub ln_a: T,
    pub elasticity_ratio: T,
    pub time_trend: bool,
    pub estimation: Estimation<T>,
    /// Regression the estimate was computed from (untransformed).
    pub regression: RegressionSpec<T>,
}

impl<T: Scalar> CobbDouglasFit<T> {
    pub fn alpha_std_error(&self) -> T {
        self.estimation.std_errors()[1]
    }

    pub fn alpha_t_statistic(&self) -> T {
        self.estimation.t_statistics()[1]
    }

    /// For restricted fits `beta = 1 - alpha` shares alpha's standard error.
    pub fn beta_std_error(&self) -> T {
        match self.form {
            CobbDouglasForm::Restricted => self.alpha_std_error(),
            CobbDouglasForm::Unrestricted => self.estimation.std_errors()[2],
        }
    }

    pub fn beta_t_statistic(&self) -> T {
        self.beta / self.beta_std_error()
    }
}

fn estimate<T: Scalar>(
    spec: &RegressionSpec<T>,
    options: &CobbDouglasOptions<T>,
) -> Result<Estimation<T>> {
    match options.ar1 {
        Some(o) => Ok(Estimation::Ar1(fit_with_ar1(spec, o)?)),
        None => Ok(Estimation::Ols(ols_fit(spec)?)),
    }
}

fn check_length<T: Scalar>(panel: &PanelDataset<T>) -> Result<()> {
    if panel.len() < 6 {
        return Err(Error::InsufficientData {
            required: 5,
            available: panel.len(),
        });
    }
    Ok(())
}

fn trend<T: Scalar>(n: usize) -> Vec<T> {
    (1..=n).map(T::from_count).collect()
}

pub fn fit_unrestricted<T: Scalar>(
    panel: &PanelDataset<T>,
    options: &CobbDouglasOptions<T>,
) -> Result<CobbDouglasFit<T>> {
    check_length(panel)?;
    let (q, l, k) = panel.levels()?;
    let ln = |v: &[T]| v.iter().map(|x| x.ln()).collect::<Vec<T>>();
    let mut cols = vec![ln(&k), ln(&l)];
    if options.time_trend {
        cols.push(trend(panel.len()));
    }
    let spec = RegressionSpec::new(ln(&q), cols);
    let estimation = estimate(&spec, options)?;
    let c = estimation.coefficients();
    let (ln_a, alpha, beta) = (c[0], c[1], c[2]);
    Ok(CobbDouglasFit {
        form: CobbDouglasForm::Unrestricted,
        alpha,
        beta,
        ln_a,
        elasticity_ratio: alpha / beta,
        time_trend: options.time_trend,
        estimation,
        regression: spec,
    })
}

pub fn fit_restricted<T: Scalar>(
    panel: &PanelDataset<T>,
    options: &CobbDouglasOptions<T>,
) -> Result<CobbDouglasFit<T>> {
    check_length(panel)?;
    let (q_per_l, k_per_l) = per_capita_log_panel(panel)?;
    let mut cols = vec![k_per_l.values()?];
    if options.time_trend {
        cols.push(trend(panel.len()));
    }
    let spec = RegressionSpec::new(q_per_l.values()?, cols);
    let estimation = estimate(&spec, options)?;
    let c = estimation.coefficients();
    let (ln_a, alpha) = (c[0], c[1]);
    let beta = T::one() - alpha;
    Ok(CobbDouglasFit {
        form: CobbDouglasForm::Restricted,
        alpha,
        beta,
        ln_a,
        elasticity_ratio: alpha / beta,
        time_trend: options.time_trend,
        estimation,
        regression: spec,
    })
}

/// Wald test of `alpha + beta = 1` on an unrestricted fit.
///
/// Returns the chi-square(1) form; the F(1, n-k-1) form is in `detail`
/// and available from [`wald_crs_f`].
pub fn wald_crs_test<T: Scalar>(fit: &CobbDouglasFit<T>) -> Result<DiagnosticReport<T>> {
    let w = wald_statistic(fit)?;
    let df2 = fit.estimation.df_resid();
    let f_report = DiagnosticReport::new("wald_crs_f", w, Distribution::F { df1: 1, df2 }, None);
    let detail = format!(
        "F(1,{df2})={:.6}, p={}",
        w.as_f64(),
        f_report
            .p_value
            .map_or("undefined".to_string(), |p| format!("{:.6}", p.as_f64()))
    );
    Ok(DiagnosticReport::new(
        "wald_crs",
        w,
        Distribution::ChiSquare { df: 1 },
        Some(detail),
    ))
}

/// The F(1, n-k-1) form of the constant-returns Wald test.
pub fn wald_crs_f<T: Scalar>(fit: &CobbDouglasFit<T>) -> Result<DiagnosticReport<T>> {
    let w = wald_statistic(fit)?;
    Ok(DiagnosticReport::new(
        "wald_crs_f",
        w,
        Distribution::F {
            df1: 1,
            df2: fit.estimation.df_resid(),
        },
        None,
    ))
}

fn wald_statistic<T: Scalar>(fit: &CobbDouglasFit<T>) -> Result<T> {
    if fit.form != CobbDouglasForm::Unrestricted {
        return Err(Error::Validation(
            "constant-returns Wald test needs an unrestricted fit".into(),
        ));
    }
    let v = fit.estimation.covariance();
    wald_from_moments(fit.alpha, fit.beta, v[1][1], v[2][2], v[1][2])
}

/// `(a + b - 1)^2 / (var a + var b + 2 cov)`
pub fn wald_from_moments<T: Scalar>(alpha: T, beta: T, var_a: T, var_b: T, cov: T) -> Result<T> {
    let diff = alpha + beta - T::one();
    let var = var_a + var_b + T::lit(2.0) * cov;
    if !(var > T::zero()) {
        if diff == T::zero() {
            return Ok(T::zero());
        }
        return Err(Error::UndefinedStatistic(
            "restriction variance is not positive".into(),
        ));
    }
    Ok(diff * diff / var)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MarginalProducts<T> {
    pub capital: T,
    pub labor: T,
}

/// `F_K = alpha Q / K`, `F_L = beta Q / L`.
pub fn marginal_products<T: Scalar>(
    alpha: T,
    beta: T,
    output: T,
    capital: T,
    labor: T,
) -> Result<MarginalProducts<T>> {
    if !(output > T::zero() && capital > T::zero() && labor > T::zero()) {
        return Err(Error::Domain(
            "marginal products need positive output, capital and labor".into(),
        ));
    }
    Ok(MarginalProducts {
        capital: alpha * output / capital,
        labor: beta * output / labor,
    })
}

/// Income shares, equal to output elasticities under price-taking.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FactorShares<T> {
    pub capital: T,
    pub labor: T,
    /// `capital + labor` differs from one by more than 1e-9.
    pub sum_not_one: bool,
}

pub fn factor_shares<T: Scalar>(fit: &CobbDouglasFit<T>) -> FactorShares<T> {
    shares_from(fit.alpha, fit.beta)
}

pub fn shares_from<T: Scalar>(alpha: T, beta: T) -> FactorShares<T> {
    FactorShares {
        capital: alpha,
        labor: beta,
        sum_not_one: (alpha + beta - T::one()).abs() > T::lit(1e-9),
    }
}
