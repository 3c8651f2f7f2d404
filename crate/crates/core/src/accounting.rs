//! Solow-residual TFP growth and decomposition of output growth into
//! capital, labor and TFP contributions.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::scalar::{mean, Scalar};
use crate::series::{cagr_between, growth_rates, GrowthConvention, GrowthSeries, PanelDataset};

/// Output elasticities used to weight input growth.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Elasticities<T> {
    pub alpha: T,
    pub beta: T,
}

impl<T: Scalar> Elasticities<T> {
    /// Constant returns: `beta = 1 - alpha`.
    pub fn restricted(alpha: T) -> Result<Self> {
        if !alpha.is_finite() {
            return Err(Error::Validation("alpha must be finite".into()));
        }
        Ok(Self {
            alpha,
            beta: T::one() - alpha,
        })
    }

    /// Elasticities that must sum to one (within 1e-9).
    pub fn new(alpha: T, beta: T) -> Result<Self> {
        let e = Self::unrestricted(alpha, beta)?;
        if (alpha + beta - T::one()).abs() > T::lit(1e-9) {
            return Err(Error::Validation(format!(
                "alpha + beta = {} but constant returns require 1; use an explicit override",
                alpha + beta
            )));
        }
        Ok(e)
    }

    /// Explicit override allowing `alpha + beta != 1`.
    pub fn unrestricted(alpha: T, beta: T) -> Result<Self> {
        if !alpha.is_finite() || !beta.is_finite() {
            return Err(Error::Validation("elasticities must be finite".into()));
        }
        Ok(Self { alpha, beta })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TfpSeries<T> {
    pub growth: GrowthSeries<T>,
    /// Arithmetic mean of the annual rates, percent.
    pub mean: T,
}

/// `tfp_t = v_t - alpha k_t - beta l_t` for every year with a growth rate.
pub fn solow_residual_series<T: Scalar>(
    panel: &PanelDataset<T>,
    elasticities: Elasticities<T>,
    convention: GrowthConvention,
) -> Result<TfpSeries<T>> {
    let v = growth_rates(&panel.value_added, convention)?;
    let l = growth_rates(&panel.labor, convention)?;
    let k = growth_rates(&panel.capital, convention)?;
    let rates: Vec<T> = v
        .rates
        .iter()
        .zip(&k.rates)
        .zip(&l.rates)
        .map(|((&v, &k), &l)| v - elasticities.alpha * k - elasticities.beta * l)
        .collect();
    let growth = GrowthSeries {
        start_year: v.start_year,
        rates,
        convention,
    };
    Ok(TfpSeries {
        mean: growth.mean(),
        growth,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum AveragingConvention {
    /// Mean of the annual growth rates in the window.
    #[default]
    ArithmeticMean,
    /// Compound annual growth between the window's base year and last year.
    Compound,
}

/// Average growth rates (percent) of output and inputs.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AverageGrowth<T> {
    pub value_added: T,
    pub labor: T,
    pub capital: T,
}

impl<T: Scalar> AverageGrowth<T> {
    pub fn new(value_added: T, labor: T, capital: T) -> Self {
        Self {
            value_added,
            labor,
            capital,
        }
    }
}

/// Average growth over the growth-rate years `first..=last`.
///
/// A growth-rate year `t` measures the change from `t - 1` to `t`, so the
/// compound average uses levels from `first - 1` to `last`.
pub fn average_growth<T: Scalar>(
    panel: &PanelDataset<T>,
    first: i32,
    last: i32,
    averaging: AveragingConvention,
    convention: GrowthConvention,
) -> Result<AverageGrowth<T>> {
    check_window(panel, first, last)?;
    match averaging {
        AveragingConvention::ArithmeticMean => {
            let avg = |s| -> Result<T> {
                let g = growth_rates(s, convention)?;
                Ok(mean(g.window(first, last)?))
            };
            Ok(AverageGrowth::new(
                avg(&panel.value_added)?,
                avg(&panel.labor)?,
                avg(&panel.capital)?,
            ))
        }
        AveragingConvention::Compound => {
            let intervals = (last - first + 1) as usize;
            let cagr = |s: &crate::series::AnnualSeries<T>| -> Result<T> {
                let a = s.get(first - 1);
                let b = s.get(last);
                match (a, b) {
                    (Some(a), Some(b)) if a > T::zero() && b > T::zero() => {
                        Ok(cagr_between(a, b, intervals))
                    }
                    _ => Err(Error::Domain(format!(
                        "window {first}-{last} needs positive levels at {} and {last}",
                        first - 1
                    ))),
                }
            };
            Ok(AverageGrowth::new(
                cagr(&panel.value_added)?,
                cagr(&panel.labor)?,
                cagr(&panel.capital)?,
            ))
        }
    }
}

fn check_window<T: Scalar>(panel: &PanelDataset<T>, first: i32, last: i32) -> Result<()> {
    let lo = panel.start_year() + 1;
    let hi = panel.end_year();
    if first > last || first < lo || last > hi {
        return Err(Error::Validation(format!(
            "window {first}-{last} outside growth-rate years {lo}-{hi}"
        )));
    }
    Ok(())
}

/// Contributions in percentage points.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Contributions<T> {
    pub capital: T,
    pub labor: T,
    pub tfp: T,
}

/// Shares of output growth in percent.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Shares<T> {
    pub capital: T,
    pub labor: T,
    pub tfp: T,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GrowthDecomposition<T> {
    /// Growth-rate years covered, when computed from a panel.
    pub period: Option<(i32, i32)>,
    pub averaging: Option<AveragingConvention>,
    pub growth_convention: Option<GrowthConvention>,
    pub rates: AverageGrowth<T>,
    pub elasticities: Elasticities<T>,
    pub contributions: Contributions<T>,
    /// `None` when average output growth is zero.
    pub shares: Option<Shares<T>>,
}

/// `total - a - b`, nudged by at most a few ulps so that `(a + b) + r`
/// reproduces `total` exactly in floating point.
/// `total - (a + b)`, nudged so that `(a + b) + r == total` whenever some
/// representable `r` achieves it. `fl(p + r)` is monotone in `r`, so the
/// walk stops as soon as the sum steps over `total`; when `total` is far
/// smaller than `a + b` no such `r` may exist and the plain difference is
/// returned (off by at most one ulp of `a + b`).
pub(crate) fn exact_residual<T: Scalar>(total: T, a: T, b: T) -> T {
    let partial = a + b;
    let r = total - partial;
    if !r.is_finite() {
        return r;
    }
    let mut cand = r;
    for _ in 0..64 {
        let s = partial + cand;
        if s == total {
            return cand;
        }
        let next = if s < total {
            cand.step_up()
        } else {
            cand.step_down()
        };
        let s_next = partial + next;
        if (s < total) != (s_next < total) && s_next != total {
            return r;
        }
        cand = next;
    }
    r
}

pub fn decompose_period<T: Scalar>(
    rates: AverageGrowth<T>,
    elasticities: Elasticities<T>,
) -> GrowthDecomposition<T> {
    let capital = elasticities.alpha * rates.capital;
    let labor = elasticities.beta * rates.labor;
    let tfp = exact_residual(rates.value_added, capital, labor);
    let hundred = T::lit(100.0);
    let shares = (rates.value_added != T::zero()).then(|| {
        let cs = hundred * capital / rates.value_added;
        let ls = hundred * labor / rates.value_added;
        Shares {
            capital: cs,
            labor: ls,
            tfp: exact_residual(hundred, cs, ls),
        }
    });
    GrowthDecomposition {
        period: None,
        averaging: None,
        growth_convention: None,
        rates,
        elasticities,
        contributions: Contributions {
            capital,
            labor,
            tfp,
        },
        shares,
    }
}

/// Ordered, disjoint windows of growth-rate years.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PeriodSpec {
    windows: Vec<(i32, i32)>,
}

impl PeriodSpec {
    pub fn new(windows: Vec<(i32, i32)>) -> Result<Self> {
        if windows.is_empty() {
            return Err(Error::Validation("period spec has no windows".into()));
        }
        for &(a, b) in &windows {
            if a > b {
                return Err(Error::Validation(format!("window {a}-{b} is reversed")));
            }
        }
        for w in windows.windows(2) {
            if w[1].0 <= w[0].1 {
                return Err(Error::Validation(format!(
                    "windows {}-{} and {}-{} overlap or are out of order",
                    w[0].0, w[0].1, w[1].0, w[1].1
                )));
            }
        }
        Ok(Self { windows })
    }

    /// Parse `a-b,c-d,...`.
    pub fn parse(text: &str) -> Result<Self> {
        let windows = text
            .split(',')
            .map(|part| {
                let part = part.trim();
                let (a, b) = part
                    .split_once('-')
                    .ok_or_else(|| Error::Validation(format!("bad window '{part}'")))?;
                let p = |s: &str| {
                    s.trim()
                        .parse::<i32>()
                        .map_err(|_| Error::Validation(format!("bad year in window '{part}'")))
                };
                Ok((p(a)?, p(b)?))
            })
            .collect::<Result<Vec<_>>>()?;
        Self::new(windows)
    }

    pub(crate) fn empty() -> Self {
        Self {
            windows: Vec::new(),
        }
    }

    pub fn windows(&self) -> &[(i32, i32)] {
        &self.windows
    }

    /// Development-plan windows used in the sector study.
    pub fn plan_windows() -> Self {
        Self {
            windows: vec![
                (1356, 1367),
                (1368, 1373),
                (1374, 1378),
                (1379, 1383),
                (1384, 1385),
            ],
        }
    }
}

/// One decomposition per window, using within-window average growth.
pub fn subperiod_table<T: Scalar>(
    panel: &PanelDataset<T>,
    elasticities: Elasticities<T>,
    periods: &PeriodSpec,
    averaging: AveragingConvention,
    convention: GrowthConvention,
) -> Result<Vec<GrowthDecomposition<T>>> {
    for &(a, b) in periods.windows() {
        check_window(panel, a, b)?;
    }
    periods
        .windows()
        .iter()
        .map(|&(a, b)| {
            let rates = average_growth(panel, a, b, averaging, convention)?;
            let mut d = decompose_period(rates, elasticities);
            d.period = Some((a, b));
            d.averaging = Some(averaging);
            d.growth_convention = Some(convention);
            Ok(d)
        })
        .collect()
}
