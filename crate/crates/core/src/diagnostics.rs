//! Residual diagnostics: heteroskedasticity, serial correlation, normality,
//! residual-regressor correlation and correlograms.

use serde::{Deserialize, Serialize};
use statrs::distribution::{ChiSquared, ContinuousCDF, FisherSnedecor};

use crate::error::{Error, Result};
use crate::ols::{ols_fit, RegressionSpec};
use crate::scalar::{mean, sum_sq, Scalar};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Distribution {
    ChiSquare { df: usize },
    F { df1: usize, df2: usize },
    None,
}

impl Distribution {
    /// Upper-tail probability of `statistic`.
    pub fn p_value(self, statistic: f64) -> Option<f64> {
        if !statistic.is_finite() {
            return (statistic == f64::INFINITY).then_some(0.0);
        }
        let p = match self {
            Distribution::ChiSquare { df } if df > 0 => {
                ChiSquared::new(df as f64).ok()?.sf(statistic.max(0.0))
            }
            Distribution::F { df1, df2 } if df1 > 0 && df2 > 0 => {
                FisherSnedecor::new(df1 as f64, df2 as f64)
                    .ok()?
                    .sf(statistic.max(0.0))
            }
            _ => return None,
        };
        Some(p.clamp(0.0, 1.0))
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DiagnosticReport<T> {
    pub test: String,
    pub statistic: T,
    pub distribution: Distribution,
    pub p_value: Option<T>,
    /// `Some(true)` when the null is rejected at 5%.
    pub reject_at_5: Option<bool>,
    pub detail: Option<String>,
}

impl<T: Scalar> DiagnosticReport<T> {
    pub fn new(
        test: &str,
        statistic: T,
        distribution: Distribution,
        detail: Option<String>,
    ) -> Self {
        let p = distribution.p_value(statistic.as_f64());
        Self {
            test: test.to_string(),
            statistic,
            distribution,
            p_value: p.map(T::lit),
            reject_at_5: p.map(|p| p < 0.05),
            detail,
        }
    }
}

fn aux_r_squared<T: Scalar>(dependent: Vec<T>, regressors: Vec<Vec<T>>) -> Result<T> {
    Ok(ols_fit(&RegressionSpec::new(dependent, regressors))?.r_squared)
}

fn check_columns<T: Scalar>(n: usize, regressors: &[Vec<T>]) -> Result<()> {
    if regressors.iter().any(|c| c.len() != n) {
        return Err(Error::Validation(
            "regressor length differs from residual length".into(),
        ));
    }
    Ok(())
}

/// Breusch-Pagan-Godfrey LM test: `n R^2` of squared residuals on the
/// regressors, chi-square with one degree of freedom per regressor.
pub fn breusch_pagan_godfrey<T: Scalar>(
    residuals: &[T],
    regressors: &[Vec<T>],
) -> Result<DiagnosticReport<T>> {
    let n = residuals.len();
    let k = regressors.len();
    check_columns(n, regressors)?;
    if k == 0 {
        return Err(Error::Validation(
            "Breusch-Pagan-Godfrey needs regressors".into(),
        ));
    }
    if n <= k + 2 {
        return Err(Error::InsufficientData {
            required: k + 2,
            available: n,
        });
    }
    if sum_sq(residuals) == T::zero() {
        return Err(Error::UndefinedStatistic(
            "Breusch-Pagan-Godfrey undefined for all-zero residuals".into(),
        ));
    }
    let sq: Vec<T> = residuals.iter().map(|&e| e * e).collect();
    let r2 = aux_r_squared(sq, regressors.to_vec())?;
    Ok(DiagnosticReport::new(
        "breusch_pagan_godfrey",
        T::from_count(n) * r2,
        Distribution::ChiSquare { df: k },
        None,
    ))
}

/// Breusch-Godfrey serial-correlation LM test of order `lag_order`, with
/// zero-padded lagged residuals; statistic `(n - p) R^2`.
pub fn breusch_godfrey_lm<T: Scalar>(
    residuals: &[T],
    regressors: &[Vec<T>],
    lag_order: usize,
) -> Result<DiagnosticReport<T>> {
    let n = residuals.len();
    let k = regressors.len();
    check_columns(n, regressors)?;
    if lag_order == 0 {
        return Err(Error::Validation("lag order must be at least 1".into()));
    }
    if n <= k + lag_order + 2 {
        return Err(Error::InsufficientData {
            required: k + lag_order + 2,
            available: n,
        });
    }
    if sum_sq(residuals) == T::zero() {
        return Err(Error::UndefinedStatistic(
            "Breusch-Godfrey undefined for all-zero residuals".into(),
        ));
    }
    let mut cols = regressors.to_vec();
    for j in 1..=lag_order {
        cols.push(
            (0..n)
                .map(|t| if t >= j { residuals[t - j] } else { T::zero() })
                .collect(),
        );
    }
    let r2 = aux_r_squared(residuals.to_vec(), cols)?;
    Ok(DiagnosticReport::new(
        "breusch_godfrey_lm",
        T::from_count(n - lag_order) * r2,
        Distribution::ChiSquare { df: lag_order },
        Some(format!("lag_order={lag_order}")),
    ))
}

/// Sample skewness and (non-excess) kurtosis with divisor `n`.
pub fn skewness_kurtosis<T: Scalar>(x: &[T]) -> Result<(T, T)> {
    let m = mean(x);
    let nf = T::from_count(x.len());
    let moment = |p: i32| x.iter().map(|&v| (v - m).powi(p)).sum::<T>() / nf;
    let m2 = moment(2);
    if !(m2 > T::zero()) {
        return Err(Error::UndefinedStatistic("zero variance".into()));
    }
    Ok((moment(3) / m2.powf(T::lit(1.5)), moment(4) / (m2 * m2)))
}

/// `n/6 (S^2 + (K - 3)^2 / 4)`, chi-square(2).
pub fn jarque_bera<T: Scalar>(residuals: &[T]) -> Result<DiagnosticReport<T>> {
    let n = residuals.len();
    if n < 4 {
        return Err(Error::InsufficientData {
            required: 3,
            available: n,
        });
    }
    let (s, k) = skewness_kurtosis(residuals)?;
    let excess = k - T::lit(3.0);
    let jb = T::from_count(n) / T::lit(6.0) * (s * s + excess * excess / T::lit(4.0));
    Ok(DiagnosticReport::new(
        "jarque_bera",
        jb,
        Distribution::ChiSquare { df: 2 },
        Some(format!("skewness={s:.6}, kurtosis={k:.6}")),
    ))
}

/// Residual mean and correlation with each regressor. A constant regressor
/// yields `None` for its correlation.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExogeneityReport<T> {
    pub mean: T,
    pub correlations: Vec<Option<T>>,
}

pub fn pearson<T: Scalar>(a: &[T], b: &[T]) -> Option<T> {
    let (ma, mb) = (mean(a), mean(b));
    let mut sab = T::zero();
    let mut saa = T::zero();
    let mut sbb = T::zero();
    for (&x, &y) in a.iter().zip(b) {
        sab += (x - ma) * (y - mb);
        saa += (x - ma) * (x - ma);
        sbb += (y - mb) * (y - mb);
    }
    let denom = (saa * sbb).sqrt();
    (denom > T::zero()).then(|| (sab / denom).max(-T::one()).min(T::one()))
}

pub fn residual_exogeneity<T: Scalar>(
    residuals: &[T],
    regressors: &[Vec<T>],
) -> Result<ExogeneityReport<T>> {
    check_columns(residuals.len(), regressors)?;
    if residuals.len() < 2 {
        return Err(Error::InsufficientData {
            required: 1,
            available: residuals.len(),
        });
    }
    Ok(ExogeneityReport {
        mean: mean(residuals),
        correlations: regressors.iter().map(|c| pearson(residuals, c)).collect(),
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Correlogram<T> {
    pub acf: Vec<T>,
    pub pacf: Vec<T>,
    /// Half-width of the approximate 95% band, `1.96 / sqrt(n)`.
    pub band: T,
    pub n: usize,
}

impl<T: Scalar> Correlogram<T> {
    pub fn max_lag(&self) -> usize {
        self.acf.len() - 1
    }

    /// `lag,acf,pacf,band` rows, lag 0 included.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("lag,acf,pacf,band\n");
        for (lag, (a, p)) in self.acf.iter().zip(&self.pacf).enumerate() {
            out.push_str(&format!("{lag},{a},{p},{}\n", self.band));
        }
        out
    }
}

pub fn correlogram<T: Scalar>(residuals: &[T], max_lag: usize) -> Result<Correlogram<T>> {
    let n = residuals.len();
    if max_lag == 0 || n <= max_lag {
        return Err(Error::Validation(format!(
            "correlogram needs 1 <= max_lag < n, got max_lag={max_lag}, n={n}"
        )));
    }
    let m = mean(residuals);
    let dev: Vec<T> = residuals.iter().map(|&x| x - m).collect();
    let c0 = sum_sq(&dev);
    if !(c0 > T::zero()) {
        return Err(Error::UndefinedStatistic(
            "correlogram undefined for a constant series".into(),
        ));
    }
    let acf: Vec<T> = (0..=max_lag)
        .map(|k| dev[k..].iter().zip(&dev).map(|(&a, &b)| a * b).sum::<T>() / c0)
        .collect();

    // Durbin-Levinson
    let mut pacf = vec![T::one()];
    let mut phi: Vec<T> = Vec::new();
    let mut v = T::one();
    for k in 1..=max_lag {
        let num = acf[k] - (0..k - 1).map(|j| phi[j] * acf[k - 1 - j]).sum::<T>();
        let a = if v > T::zero() { num / v } else { T::zero() };
        let mut next = vec![T::zero(); k];
        for j in 0..k - 1 {
            next[j] = phi[j] - a * phi[k - 2 - j];
        }
        next[k - 1] = a;
        phi = next;
        v *= T::one() - a * a;
        pacf.push(a);
    }
    Ok(Correlogram {
        acf,
        pacf,
        band: T::lit(1.96) / T::from_count(n).sqrt(),
        n,
    })
}
