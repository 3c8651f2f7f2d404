//! Augmented Dickey-Fuller and Phillips-Perron unit-root tests, integration
//! order classification and the residual-based cointegration check.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::mackinnon::{engle_granger_critical_values, mackinnon_critical_values, CriticalValues};
use crate::ols::{ols_fit, OlsFit, RegressionSpec};
use crate::scalar::{sum_sq, Scalar};

/// Deterministic terms included in the test regression.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum DeterministicSpec {
    None,
    Constant,
    #[default]
    ConstantAndTrend,
}

impl DeterministicSpec {
    fn n_terms(self) -> usize {
        match self {
            DeterministicSpec::None => 0,
            DeterministicSpec::Constant => 1,
            DeterministicSpec::ConstantAndTrend => 2,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
pub enum Significance {
    #[serde(rename = "0.01")]
    One,
    #[default]
    #[serde(rename = "0.05")]
    Five,
    #[serde(rename = "0.10")]
    Ten,
}

impl Significance {
    pub const ALL: [Significance; 3] = [Significance::One, Significance::Five, Significance::Ten];

    pub fn from_level(level: f64) -> Result<Self> {
        const EPS: f64 = 1e-9;
        if (level - 0.01).abs() < EPS {
            Ok(Significance::One)
        } else if (level - 0.05).abs() < EPS {
            Ok(Significance::Five)
        } else if (level - 0.10).abs() < EPS {
            Ok(Significance::Ten)
        } else {
            Err(Error::Validation(format!(
                "significance must be 0.01, 0.05 or 0.10, got {level}"
            )))
        }
    }

    pub fn level(self) -> f64 {
        match self {
            Significance::One => 0.01,
            Significance::Five => 0.05,
            Significance::Ten => 0.10,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Decision {
    Reject,
    FailToReject,
}

impl Decision {
    /// Left-tailed decision: reject when the statistic lies below the critical value.
    pub fn left_tail<T: Scalar>(statistic: T, critical_value: T) -> Self {
        if statistic < critical_value {
            Decision::Reject
        } else {
            Decision::FailToReject
        }
    }

    pub fn is_reject(self) -> bool {
        self == Decision::Reject
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Decisions {
    pub one: Decision,
    pub five: Decision,
    pub ten: Decision,
}

impl Decisions {
    pub fn at(&self, level: Significance) -> Decision {
        match level {
            Significance::One => self.one,
            Significance::Five => self.five,
            Significance::Ten => self.ten,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum UnitRootTest {
    #[serde(rename = "ADF")]
    Adf,
    #[serde(rename = "PP")]
    Pp,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum LagSelection {
    Fixed(usize),
    /// Minimise AIC over `0..=floor(12 (n/100)^(1/4))`.
    #[default]
    Auto,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Bandwidth {
    Fixed(usize),
    /// `floor(4 (n/100)^(2/9))`
    #[default]
    Auto,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct UnitRootReport<T> {
    pub test: UnitRootTest,
    pub statistic: T,
    /// ADF lag order, or PP Newey-West bandwidth.
    pub lags: usize,
    pub spec: DeterministicSpec,
    pub critical_values: CriticalValues<T>,
    pub n_effective: usize,
    pub decisions: Decisions,
}

impl<T: Scalar> UnitRootReport<T> {
    /// Build a report from a statistic and critical values computed elsewhere.
    pub fn replay(
        test: UnitRootTest,
        statistic: T,
        spec: DeterministicSpec,
        critical_values: CriticalValues<T>,
        lags: usize,
        n_effective: usize,
    ) -> Self {
        let d = |cv| Decision::left_tail(statistic, cv);
        Self {
            test,
            statistic,
            lags,
            spec,
            decisions: Decisions {
                one: d(critical_values.one),
                five: d(critical_values.five),
                ten: d(critical_values.ten),
            },
            critical_values,
            n_effective,
        }
    }

    pub fn rejects(&self, level: Significance) -> bool {
        self.decisions.at(level).is_reject()
    }
}

/// Dickey-Fuller regression with `lags` augmentation terms.
struct DfRegression<T> {
    fit: OlsFit<T>,
    /// Position of the lagged level within `fit.coefficients`.
    level_index: usize,
}

fn max_auto_lag(n: usize) -> usize {
    (12.0 * (n as f64 / 100.0).powf(0.25)).floor() as usize
}

fn df_regression<T: Scalar>(
    y: &[T],
    spec: DeterministicSpec,
    lags: usize,
    start: usize,
) -> Result<DfRegression<T>> {
    // observations t = start..n-1 on the differenced scale, start >= lags
    let dy: Vec<T> = y.windows(2).map(|w| w[1] - w[0]).collect();
    let rows: Vec<usize> = (start..dy.len()).collect();
    let n_reg = 1 + lags + spec.n_terms();
    if rows.len() <= n_reg + 2 {
        return Err(Error::InsufficientData {
            required: n_reg + 2,
            available: rows.len(),
        });
    }
    let dependent: Vec<T> = rows.iter().map(|&t| dy[t]).collect();
    let mut cols = vec![rows.iter().map(|&t| y[t]).collect::<Vec<T>>()];
    for j in 1..=lags {
        cols.push(rows.iter().map(|&t| dy[t - j]).collect());
    }
    if spec == DeterministicSpec::ConstantAndTrend {
        cols.push((1..=rows.len()).map(T::from_count).collect());
    }
    let reg = if spec == DeterministicSpec::None {
        RegressionSpec::without_intercept(dependent, cols)
    } else {
        RegressionSpec::new(dependent, cols)
    };
    let fit = ols_fit(&reg)?;
    let level_index = fit.slope_index(0);
    Ok(DfRegression { fit, level_index })
}

fn check_series<T: Scalar>(series: &[T]) -> Result<()> {
    if series.iter().any(|v| !v.is_finite()) {
        return Err(Error::Validation("series must be finite".into()));
    }
    Ok(())
}

/// Augmented Dickey-Fuller t-test on the lagged level.
pub fn adf_test<T: Scalar>(
    series: &[T],
    spec: DeterministicSpec,
    lags: LagSelection,
) -> Result<UnitRootReport<T>> {
    check_series(series)?;
    let k = match lags {
        LagSelection::Fixed(k) => k,
        LagSelection::Auto => select_lag_aic(series, spec)?,
    };
    let reg = df_regression(series, spec, k, k)?;
    let stat = reg.fit.t_statistics[reg.level_index];
    if !stat.is_finite() {
        return Err(Error::UndefinedStatistic(
            "Dickey-Fuller regression fits exactly".into(),
        ));
    }
    let n_eff = reg.fit.n;
    Ok(UnitRootReport::replay(
        UnitRootTest::Adf,
        stat,
        spec,
        mackinnon_critical_values(spec, n_eff),
        k,
        n_eff,
    ))
}

/// AIC lag choice on a common estimation sample.
fn select_lag_aic<T: Scalar>(series: &[T], spec: DeterministicSpec) -> Result<usize> {
    let n = series.len();
    let mut kmax = max_auto_lag(n);
    // shrink until the largest model still fits
    while kmax > 0 && n.saturating_sub(1 + kmax) <= 1 + kmax + spec.n_terms() + 2 {
        kmax -= 1;
    }
    let mut best: Option<(usize, T)> = None;
    for k in 0..=kmax {
        let reg = df_regression(series, spec, k, kmax)?;
        let aic = reg.fit.aic();
        if best.is_none_or(|(_, b)| aic < b) {
            best = Some((k, aic));
        }
    }
    Ok(best.map(|(k, _)| k).unwrap_or(0))
}

/// Bartlett-kernel long-run variance of a residual series (divisor n).
pub fn newey_west_variance<T: Scalar>(residuals: &[T], bandwidth: usize) -> T {
    let n = residuals.len();
    let nf = T::from_count(n);
    let gamma = |j: usize| -> T {
        residuals[j..]
            .iter()
            .zip(residuals)
            .map(|(&a, &b)| a * b)
            .sum::<T>()
            / nf
    };
    let mut lrv = gamma(0);
    for j in 1..=bandwidth.min(n.saturating_sub(1)) {
        let w = T::one() - T::from_count(j) / T::from_count(bandwidth + 1);
        lrv += T::lit(2.0) * w * gamma(j);
    }
    lrv
}

/// Phillips-Perron Z-tau test.
pub fn pp_test<T: Scalar>(
    series: &[T],
    spec: DeterministicSpec,
    bandwidth: Bandwidth,
) -> Result<UnitRootReport<T>> {
    check_series(series)?;
    let reg = df_regression(series, spec, 0, 0)?;
    let fit = &reg.fit;
    let n = fit.n;
    let l = match bandwidth {
        Bandwidth::Fixed(l) => l,
        Bandwidth::Auto => (4.0 * (n as f64 / 100.0).powf(2.0 / 9.0)).floor() as usize,
    };
    let t_rho = fit.t_statistics[reg.level_index];
    let se_rho = fit.std_errors[reg.level_index];
    let gamma0 = sum_sq(&fit.residuals) / T::from_count(n);
    let lrv = newey_west_variance(&fit.residuals, l);
    if !(lrv > T::zero()) || !t_rho.is_finite() {
        return Err(Error::UndefinedStatistic(
            "Phillips-Perron long-run variance is not positive".into(),
        ));
    }
    let s = fit.sigma2.sqrt();
    let lam = lrv.sqrt();
    let stat = (gamma0 / lrv).sqrt() * t_rho
        - (lrv - gamma0) / (T::lit(2.0) * lam) * (T::from_count(n) * se_rho / s);
    Ok(UnitRootReport::replay(
        UnitRootTest::Pp,
        stat,
        spec,
        mackinnon_critical_values(spec, n),
        l,
        n,
    ))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum IntegrationOrder {
    I0,
    I1,
    HigherOrUndetermined,
}

/// Integration order together with the four tests behind it.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct IntegrationClassification<T> {
    pub order: IntegrationOrder,
    pub significance: Significance,
    pub level_adf: UnitRootReport<T>,
    pub level_pp: UnitRootReport<T>,
    pub diff_adf: UnitRootReport<T>,
    pub diff_pp: UnitRootReport<T>,
}

impl<T: Scalar> IntegrationClassification<T> {
    /// I(0) when both level tests reject; I(1) when both level tests fail
    /// to reject and both difference tests reject; otherwise undetermined.
    pub fn from_reports(
        level_adf: UnitRootReport<T>,
        level_pp: UnitRootReport<T>,
        diff_adf: UnitRootReport<T>,
        diff_pp: UnitRootReport<T>,
        significance: Significance,
    ) -> Self {
        let r = |x: &UnitRootReport<T>| x.rejects(significance);
        let order = match (r(&level_adf), r(&level_pp), r(&diff_adf), r(&diff_pp)) {
            (true, true, _, _) => IntegrationOrder::I0,
            (false, false, true, true) => IntegrationOrder::I1,
            _ => IntegrationOrder::HigherOrUndetermined,
        };
        Self {
            order,
            significance,
            level_adf,
            level_pp,
            diff_adf,
            diff_pp,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct UnitRootOptions {
    pub spec: DeterministicSpec,
    pub lags: LagSelection,
    pub bandwidth: Bandwidth,
}

impl Default for UnitRootOptions {
    fn default() -> Self {
        Self {
            spec: DeterministicSpec::ConstantAndTrend,
            lags: LagSelection::Auto,
            bandwidth: Bandwidth::Auto,
        }
    }
}

pub fn classify_integration<T: Scalar>(
    series: &[T],
    options: UnitRootOptions,
    significance: Significance,
) -> Result<IntegrationClassification<T>> {
    let diff: Vec<T> = series.windows(2).map(|w| w[1] - w[0]).collect();
    // A level series that fits its deterministic part exactly is stationary
    // around it; its difference tests are then reported on the same basis.
    use UnitRootTest::{Adf, Pp};
    let level_adf = exact_or(
        adf_test(series, options.spec, options.lags),
        Adf,
        series,
        options,
    )?;
    let level_pp = exact_or(
        pp_test(series, options.spec, options.bandwidth),
        Pp,
        series,
        options,
    )?;
    let diff_adf = exact_or(
        adf_test(&diff, options.spec, options.lags),
        Adf,
        &diff,
        options,
    )?;
    let diff_pp = exact_or(
        pp_test(&diff, options.spec, options.bandwidth),
        Pp,
        &diff,
        options,
    )?;
    Ok(IntegrationClassification::from_reports(
        level_adf,
        level_pp,
        diff_adf,
        diff_pp,
        significance,
    ))
}

/// Maps "regression fits exactly" on a purely deterministic series to a
/// certain rejection (statistic -inf).
fn exact_or<T: Scalar>(
    r: Result<UnitRootReport<T>>,
    test: UnitRootTest,
    series: &[T],
    options: UnitRootOptions,
) -> Result<UnitRootReport<T>> {
    match r {
        Err(Error::UndefinedStatistic(_)) | Err(Error::SingularDesign(_))
            if is_deterministic(series, options.spec) =>
        {
            let n = series.len().saturating_sub(1);
            Ok(UnitRootReport::replay(
                test,
                T::neg_infinity(),
                options.spec,
                mackinnon_critical_values(options.spec, n),
                0,
                n,
            ))
        }
        other => other,
    }
}

fn is_deterministic<T: Scalar>(series: &[T], spec: DeterministicSpec) -> bool {
    let n = series.len();
    if n < 3 {
        return false;
    }
    let scale = sum_sq(series).sqrt().max(T::one());
    let resid: Vec<T> = match spec {
        DeterministicSpec::None => series.to_vec(),
        DeterministicSpec::Constant => {
            let m = crate::scalar::mean(series);
            series.iter().map(|&v| v - m).collect()
        }
        DeterministicSpec::ConstantAndTrend => {
            let t: Vec<T> = (0..n).map(T::from_count).collect();
            match ols_fit(&RegressionSpec::new(series.to_vec(), vec![t])) {
                Ok(f) => f.residuals,
                Err(_) => return false,
            }
        }
    };
    sum_sq(&resid).sqrt() <= T::lit(1e-10) * scale
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CointegrationCriticalValues {
    /// The single-series unit-root surface.
    #[default]
    UnitRoot,
    /// Engle-Granger two-variable residual surface.
    EngleGranger,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CointegrationReport<T> {
    pub adf: UnitRootReport<T>,
    pub pp: UnitRootReport<T>,
    pub significance: Significance,
    pub critical_values_source: CointegrationCriticalValues,
    /// Both the ADF and PP tests reject a unit root in the residuals.
    pub cointegrated: bool,
}

/// Unit-root tests on cointegrating-regression residuals.
pub fn engle_granger_residual_test<T: Scalar>(
    residuals: &[T],
    options: UnitRootOptions,
    significance: Significance,
    source: CointegrationCriticalValues,
) -> Result<CointegrationReport<T>> {
    let mut adf = adf_test(residuals, options.spec, options.lags)?;
    let mut pp = pp_test(residuals, options.spec, options.bandwidth)?;
    if source == CointegrationCriticalValues::EngleGranger {
        adf = UnitRootReport::replay(
            adf.test,
            adf.statistic,
            adf.spec,
            engle_granger_critical_values(adf.spec, adf.n_effective),
            adf.lags,
            adf.n_effective,
        );
        pp = UnitRootReport::replay(
            pp.test,
            pp.statistic,
            pp.spec,
            engle_granger_critical_values(pp.spec, pp.n_effective),
            pp.lags,
            pp.n_effective,
        );
    }
    Ok(CointegrationReport::from_reports(
        adf,
        pp,
        significance,
        source,
    ))
}

impl<T: Scalar> CointegrationReport<T> {
    pub fn from_reports(
        adf: UnitRootReport<T>,
        pp: UnitRootReport<T>,
        significance: Significance,
        source: CointegrationCriticalValues,
    ) -> Self {
        let cointegrated = adf.rejects(significance) && pp.rejects(significance);
        Self {
            adf,
            pp,
            significance,
            critical_values_source: source,
            cointegrated,
        }
    }
}
