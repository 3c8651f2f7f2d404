//! End-to-end workflow: ingest, unit-root pre-tests, restricted
//! Cobb-Douglas fit, residual diagnostics, cointegration check, Solow
//! residual and growth decomposition, plus report rendering.

use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::accounting::{
    average_growth, decompose_period, solow_residual_series, subperiod_table, AveragingConvention,
    Elasticities, GrowthDecomposition, PeriodSpec,
};
use crate::ar1::{Ar1Method, Ar1Options};
use crate::diagnostics::{
    breusch_godfrey_lm, breusch_pagan_godfrey, correlogram, jarque_bera, residual_exogeneity,
    DiagnosticReport, Distribution,
};
use crate::error::{Error, Result};
use crate::ingest::read_panel_path;
use crate::production::{
    fit_restricted, fit_unrestricted, wald_crs_test, CobbDouglasOptions, Estimation,
};
use crate::series::{
    compound_annual_growth, growth_rates, per_capita_log_panel, AnnualSeries, GrowthConvention,
    InterpolationMethod, PanelDataset,
};
use crate::unit_root::{
    classify_integration, engle_granger_residual_test, CointegrationCriticalValues,
    DeterministicSpec, IntegrationOrder, Significance, UnitRootOptions, UnitRootReport,
    UnitRootTest,
};

/// Lag order of the Breusch-Godfrey test in the diagnostics battery.
pub const BG_LAGS: usize = 2;
/// Upper bound on the correlogram lag.
pub const MAX_CORRELOGRAM_LAG: usize = 12;
/// `|rho|` at or above this triggers a warning.
/// Residual RMS, relative to the largest |dependent| (at least 1), below
/// which a fit is treated as exact.
pub const EXACT_FIT_TOLERANCE: f64 = 1e-12;

const EXACT_FIT: &str = "exact fit: residuals are numerically zero";

pub const RHO_WARNING: f64 = 0.9;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum OutputFormat {
    #[default]
    Text,
    Csv,
    Json,
}

#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
#[serde(tag = "source", rename_all = "snake_case")]
pub enum ElasticitySource {
    /// Capital elasticity from the restricted fit.
    #[default]
    Fit,
    Fixed {
        alpha: f64,
    },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PipelineConfig {
    pub input: Option<PathBuf>,
    /// Fill labor gaps by geometric interpolation; with this off, gaps are an error.
    pub interpolation: bool,
    pub convention: GrowthConvention,
    pub averaging: AveragingConvention,
    pub spec: DeterministicSpec,
    pub significance: Significance,
    pub ar1: bool,
    pub time_trend: bool,
    pub elasticity: ElasticitySource,
    /// `None` uses the five plan windows when they fit the sample.
    pub periods: Option<PeriodSpec>,
    pub format: OutputFormat,
    pub output: Option<PathBuf>,
}

impl Default for PipelineConfig {
    fn default() -> Self {
        Self {
            input: None,
            interpolation: true,
            convention: GrowthConvention::Arithmetic,
            averaging: AveragingConvention::ArithmeticMean,
            spec: DeterministicSpec::ConstantAndTrend,
            significance: Significance::Five,
            ar1: true,
            time_trend: false,
            elasticity: ElasticitySource::Fit,
            periods: None,
            format: OutputFormat::Text,
            output: None,
        }
    }
}

impl PipelineConfig {
    pub fn validate(&self) -> Result<()> {
        if let ElasticitySource::Fixed { alpha } = self.elasticity {
            if !(alpha > 0.0 && alpha < 1.0) {
                return Err(Error::Validation(format!(
                    "fixed alpha must lie in (0, 1), got {alpha}"
                )));
            }
        }
        Ok(())
    }

    fn unit_root_options(&self) -> UnitRootOptions {
        UnitRootOptions {
            spec: self.spec,
            ..UnitRootOptions::default()
        }
    }
}

/// A reported number: finite, or null with the reason it is undefined.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Number {
    Value(f64),
    Undefined { value: Option<f64>, reason: String },
}

impl Number {
    pub fn new(x: f64, reason: &str) -> Self {
        if x.is_finite() {
            Number::Value(x)
        } else {
            Number::undefined(reason)
        }
    }

    pub fn undefined(reason: &str) -> Self {
        Number::Undefined {
            value: None,
            reason: reason.to_string(),
        }
    }

    pub fn value(&self) -> Option<f64> {
        match self {
            Number::Value(v) => Some(*v),
            Number::Undefined { .. } => None,
        }
    }

    fn from_option(x: Option<f64>, reason: &str) -> Self {
        x.map_or_else(|| Number::undefined(reason), |v| Number::new(v, reason))
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConfigSummary {
    pub interpolation: bool,
    pub convention: GrowthConvention,
    pub averaging: AveragingConvention,
    pub spec: DeterministicSpec,
    pub significance: Significance,
    pub ar1: bool,
    pub time_trend: bool,
    pub elasticity: ElasticitySource,
    pub periods: Vec<(i32, i32)>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SeriesSummary {
    pub name: String,
    pub first: f64,
    pub last: f64,
    /// Compound annual growth over the sample, percent.
    pub cagr: Number,
    /// Mean annual growth under the configured convention, percent.
    pub mean_growth: Number,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DataSection {
    pub start_year: i32,
    pub end_year: i32,
    pub n_years: usize,
    pub interpolated_labor_years: Vec<i32>,
    pub series: Vec<SeriesSummary>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct UnitRootRow {
    /// `level` or `difference`.
    pub form: String,
    pub test: UnitRootTest,
    pub statistic: Number,
    /// ADF lag order or PP bandwidth.
    pub lags: usize,
    pub n_effective: usize,
    pub critical_1: f64,
    pub critical_5: f64,
    pub critical_10: f64,
    /// Rejected at the configured significance level.
    pub reject: bool,
}

impl UnitRootRow {
    fn from_report(form: &str, r: &UnitRootReport<f64>, significance: Significance) -> Self {
        let statistic = if r.statistic == f64::NEG_INFINITY {
            Number::undefined("series is exactly deterministic; unit root rejected with certainty")
        } else {
            Number::new(r.statistic, "non-finite test statistic")
        };
        Self {
            form: form.to_string(),
            test: r.test,
            statistic,
            lags: r.lags,
            n_effective: r.n_effective,
            critical_1: r.critical_values.one,
            critical_5: r.critical_values.five,
            critical_10: r.critical_values.ten,
            reject: r.rejects(significance),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SeriesIntegration {
    pub series: String,
    /// `None` when the tests could not be run; see `note`.
    pub order: Option<IntegrationOrder>,
    pub note: Option<String>,
    pub tests: Vec<UnitRootRow>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CoefficientRow {
    pub name: String,
    pub estimate: f64,
    pub std_error: Number,
    pub t_statistic: Number,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EstimationSection {
    /// `ols` or `ar1`.
    pub estimator: String,
    pub ar1_method: Option<Ar1Method>,
    pub n: usize,
    pub df_resid: usize,
    pub coefficients: Vec<CoefficientRow>,
    pub alpha: f64,
    pub beta: f64,
    pub ln_a: f64,
    pub rho: Number,
    pub r_squared: f64,
    pub adjusted_r_squared: f64,
    pub f_statistic: Number,
    pub durbin_watson: Number,
    pub iterations: Option<usize>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DiagnosticRow {
    pub test: String,
    pub statistic: Number,
    pub distribution: String,
    pub p_value: Number,
    /// Rejected at the configured significance level; `None` without a p-value.
    pub reject: Option<bool>,
}

impl DiagnosticRow {
    fn from_report(r: &DiagnosticReport<f64>, significance: Significance) -> Self {
        let p = r.p_value.filter(|p| p.is_finite());
        Self {
            test: r.test.clone(),
            statistic: Number::new(r.statistic, "non-finite statistic"),
            distribution: distribution_label(r.distribution),
            p_value: Number::from_option(p, "no reference distribution"),
            reject: p.map(|p| p < significance.level()),
        }
    }
}

fn distribution_label(d: Distribution) -> String {
    match d {
        Distribution::ChiSquare { df } => format!("chi2({df})"),
        Distribution::F { df1, df2 } => format!("F({df1},{df2})"),
        Distribution::None => "none".to_string(),
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CorrelationRow {
    pub regressor: String,
    pub correlation: Number,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CorrelogramRow {
    pub lag: usize,
    pub acf: f64,
    pub pacf: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DiagnosticsSection {
    /// `innovations` for AR(1) fits, `ols` otherwise.
    pub residuals: String,
    pub n: usize,
    pub tests: Vec<DiagnosticRow>,
    pub residual_mean: Number,
    pub correlations: Vec<CorrelationRow>,
    pub correlogram_band: Number,
    pub correlogram: Vec<CorrelogramRow>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CointegrationSection {
    pub spec: DeterministicSpec,
    pub significance: Significance,
    pub critical_values_source: CointegrationCriticalValues,
    pub adf: UnitRootRow,
    pub pp: UnitRootRow,
    pub cointegrated: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TfpRow {
    pub year: i32,
    pub value_added: f64,
    pub labor: f64,
    pub capital: f64,
    pub tfp: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TfpSection {
    pub convention: GrowthConvention,
    pub alpha: f64,
    pub beta: f64,
    pub years: Vec<TfpRow>,
    pub mean: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DecompositionRow {
    pub first_year: i32,
    pub last_year: i32,
    pub value_added: f64,
    pub labor: f64,
    pub capital: f64,
    pub capital_contribution: f64,
    pub labor_contribution: f64,
    pub tfp_contribution: f64,
    pub capital_share: Number,
    pub labor_share: Number,
    pub tfp_share: Number,
}

impl DecompositionRow {
    fn from_decomposition(d: &GrowthDecomposition<f64>, first: i32, last: i32) -> Self {
        let reason = "average value-added growth is zero";
        let share = |f: fn(&crate::accounting::Shares<f64>) -> f64| {
            d.shares
                .as_ref()
                .map_or_else(|| Number::undefined(reason), |s| Number::new(f(s), reason))
        };
        Self {
            first_year: first,
            last_year: last,
            value_added: d.rates.value_added,
            labor: d.rates.labor,
            capital: d.rates.capital,
            capital_contribution: d.contributions.capital,
            labor_contribution: d.contributions.labor,
            tfp_contribution: d.contributions.tfp,
            capital_share: share(|s| s.capital),
            labor_share: share(|s| s.labor),
            tfp_share: share(|s| s.tfp),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DecompositionSection {
    pub averaging: AveragingConvention,
    pub convention: GrowthConvention,
    pub full_sample: DecompositionRow,
    pub subperiods: Vec<DecompositionRow>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PipelineReport {
    pub config: ConfigSummary,
    pub data: DataSection,
    pub unit_root: Vec<SeriesIntegration>,
    pub estimation: EstimationSection,
    pub diagnostics: Option<DiagnosticsSection>,
    pub cointegration: Option<CointegrationSection>,
    pub tfp: TfpSection,
    pub decomposition: DecompositionSection,
    pub warnings: Vec<String>,
}

/// Read `config.input` and run every stage.
pub fn run_pipeline(config: &PipelineConfig) -> Result<PipelineReport> {
    config.validate()?;
    let path = config
        .input
        .as_ref()
        .ok_or_else(|| Error::Validation("no input file given".into()))?;
    let panel = read_panel_path(path)?;
    analyze_panel(&panel, config)
}

/// Run every stage on an in-memory panel. Test outcomes never abort the
/// run; they are recorded as warnings.
pub fn analyze_panel(raw: &PanelDataset<f64>, config: &PipelineConfig) -> Result<PipelineReport> {
    config.validate()?;
    let mut warnings = Vec::new();

    let interpolated_labor_years: Vec<i32> = raw
        .labor
        .years()
        .zip(raw.labor.raw())
        .filter(|(_, v)| v.is_none())
        .map(|(y, _)| y)
        .collect();
    let panel = if raw.has_gaps() {
        if !config.interpolation {
            return Err(Error::Validation(
                "labor series has gaps and interpolation is off".into(),
            ));
        }
        warnings.push(format!(
            "labor interpolated geometrically for {} year(s): {}",
            interpolated_labor_years.len(),
            join_years(&interpolated_labor_years)
        ));
        raw.interpolated(InterpolationMethod::Geometric)?
    } else {
        raw.clone()
    };

    let data = data_section(&panel, config.convention, interpolated_labor_years)?;

    let (ln_q_per_l, ln_k_per_l) = per_capita_log_panel(&panel)?;
    let mut unit_root = Vec::new();
    for (name, series) in [("ln_q_per_l", &ln_q_per_l), ("ln_k_per_l", &ln_k_per_l)] {
        unit_root.push(integration_section(name, series, config, &mut warnings)?);
    }

    let options = CobbDouglasOptions {
        ar1: config.ar1.then(Ar1Options::default),
        time_trend: config.time_trend,
    };
    let fit = fit_restricted(&panel, &options)?;
    let exact = is_exact_fit(
        &fit.regression.dependent,
        fit.estimation.structural_residuals(),
    );
    let estimation = estimation_section(
        &fit.estimation,
        config.time_trend,
        fit.alpha,
        fit.beta,
        fit.ln_a,
        exact,
    );
    if exact {
        warnings.push(format!(
            "{EXACT_FIT}; standard errors, diagnostics and residual unit-root tests are undefined"
        ));
    } else if let Some(rho) = fit.estimation.rho() {
        if rho.abs() >= RHO_WARNING {
            warnings.push(format!(
                "AR(1) coefficient {rho:.4} is close to a unit root"
            ));
        }
    }

    let diagnostics = if exact {
        None
    } else {
        match diagnostics_section(&panel, &fit, &options, config.significance, &mut warnings) {
            Ok(d) => Some(d),
            Err(e) => {
                warnings.push(format!("diagnostics unavailable: {e}"));
                None
            }
        }
    };

    let cointegration = if exact {
        None
    } else {
        cointegration_section(&fit, config, &mut warnings)
    };
    let elasticities = match config.elasticity {
        ElasticitySource::Fit => Elasticities::restricted(fit.alpha)?,
        ElasticitySource::Fixed { alpha } => Elasticities::restricted(alpha)?,
    };
    let tfp = tfp_section(&panel, elasticities, config.convention)?;

    let periods = match &config.periods {
        Some(p) => p.clone(),
        None => {
            let plan = PeriodSpec::plan_windows();
            if plan_fits(&plan, &panel) {
                plan
            } else {
                warnings.push(
                    "default plan windows fall outside the sample; no sub-periods reported".into(),
                );
                PeriodSpec::empty()
            }
        }
    };
    let decomposition =
        decomposition_section(&panel, elasticities, &periods, config, &mut warnings)?;

    Ok(PipelineReport {
        config: ConfigSummary {
            interpolation: config.interpolation,
            convention: config.convention,
            averaging: config.averaging,
            spec: config.spec,
            significance: config.significance,
            ar1: config.ar1,
            time_trend: config.time_trend,
            elasticity: config.elasticity,
            periods: periods.windows().to_vec(),
        },
        data,
        unit_root,
        estimation,
        diagnostics,
        cointegration,
        tfp,
        decomposition,
        warnings,
    })
}

fn cointegration_section(
    fit: &crate::production::CobbDouglasFit<f64>,
    config: &PipelineConfig,
    warnings: &mut Vec<String>,
) -> Option<CointegrationSection> {
    match engle_granger_residual_test(
        fit.estimation.structural_residuals(),
        config.unit_root_options(),
        config.significance,
        CointegrationCriticalValues::UnitRoot,
    ) {
        Ok(c) => {
            if !c.cointegrated {
                warnings.push(format!(
                    "no cointegration: ADF and PP do not both reject a unit root in the levels residuals at {}",
                    config.significance.level()
                ));
            }
            Some(CointegrationSection {
                spec: config.spec,
                significance: config.significance,
                critical_values_source: c.critical_values_source,
                adf: UnitRootRow::from_report("level", &c.adf, config.significance),
                pp: UnitRootRow::from_report("level", &c.pp, config.significance),
                cointegrated: c.cointegrated,
            })
        }
        Err(e) => {
            warnings.push(format!("cointegration test unavailable: {e}"));
            None
        }
    }
}

fn join_years(years: &[i32]) -> String {
    years
        .iter()
        .map(i32::to_string)
        .collect::<Vec<_>>()
        .join(", ")
}

fn plan_fits(plan: &PeriodSpec, panel: &PanelDataset<f64>) -> bool {
    plan.windows()
        .iter()
        .all(|&(a, b)| a > panel.start_year() && b <= panel.end_year())
}

fn data_section(
    panel: &PanelDataset<f64>,
    convention: GrowthConvention,
    interpolated_labor_years: Vec<i32>,
) -> Result<DataSection> {
    let summary = |name: &str, s: &AnnualSeries<f64>| -> Result<SeriesSummary> {
        let v = s.values()?;
        let g = growth_rates(s, convention)?;
        let mean = g.mean();
        Ok(SeriesSummary {
            name: name.to_string(),
            first: v[0],
            last: v[v.len() - 1],
            cagr: Number::new(compound_annual_growth(s)?, "non-finite growth"),
            mean_growth: Number::new(mean, "non-finite growth"),
        })
    };
    Ok(DataSection {
        start_year: panel.start_year(),
        end_year: panel.end_year(),
        n_years: panel.len(),
        interpolated_labor_years,
        series: vec![
            summary("value_added", &panel.value_added)?,
            summary("labor", &panel.labor)?,
            summary("capital", &panel.capital)?,
        ],
    })
}

fn integration_section(
    name: &str,
    series: &AnnualSeries<f64>,
    config: &PipelineConfig,
    warnings: &mut Vec<String>,
) -> Result<SeriesIntegration> {
    let values = series.values()?;
    match classify_integration(&values, config.unit_root_options(), config.significance) {
        Ok(c) => {
            if c.order != IntegrationOrder::I1 {
                warnings.push(format!(
                    "{name} is not classified I(1) at {}: {}",
                    config.significance.level(),
                    order_label(Some(c.order))
                ));
            }
            let s = config.significance;
            Ok(SeriesIntegration {
                series: name.to_string(),
                order: Some(c.order),
                note: None,
                tests: vec![
                    UnitRootRow::from_report("level", &c.level_adf, s),
                    UnitRootRow::from_report("level", &c.level_pp, s),
                    UnitRootRow::from_report("difference", &c.diff_adf, s),
                    UnitRootRow::from_report("difference", &c.diff_pp, s),
                ],
            })
        }
        Err(e) => {
            warnings.push(format!("unit-root tests for {name} unavailable: {e}"));
            Ok(SeriesIntegration {
                series: name.to_string(),
                order: None,
                note: Some(e.to_string()),
                tests: Vec::new(),
            })
        }
    }
}

/// Residuals at rounding level relative to the dependent variable.
fn is_exact_fit(dependent: &[f64], residuals: &[f64]) -> bool {
    let scale = dependent.iter().fold(1.0_f64, |m, v| m.max(v.abs()));
    let rms = (residuals.iter().map(|e| e * e).sum::<f64>() / residuals.len().max(1) as f64).sqrt();
    rms <= EXACT_FIT_TOLERANCE * scale
}

fn estimation_section(
    est: &Estimation<f64>,
    time_trend: bool,
    alpha: f64,
    beta: f64,
    ln_a: f64,
    exact: bool,
) -> EstimationSection {
    let guard = |x: Number| {
        if exact {
            Number::undefined(EXACT_FIT)
        } else {
            x
        }
    };
    let mut names = vec!["ln_a", "alpha"];
    if time_trend {
        names.push("trend");
    }
    let mut coefficients: Vec<CoefficientRow> = names
        .iter()
        .enumerate()
        .map(|(i, name)| CoefficientRow {
            name: name.to_string(),
            estimate: est.coefficients()[i],
            std_error: guard(Number::new(
                est.std_errors()[i],
                "non-finite standard error",
            )),
            t_statistic: guard(Number::new(est.t_statistics()[i], "zero standard error")),
        })
        .collect();
    let (estimator, method, iterations) = match est {
        Estimation::Ols(_) => ("ols", None, None),
        Estimation::Ar1(f) if exact => ("ar1", Some(f.method), Some(f.iterations)),
        Estimation::Ar1(f) => {
            coefficients.push(CoefficientRow {
                name: "rho".into(),
                estimate: f.rho,
                std_error: Number::new(f.rho_std_error, "non-finite standard error"),
                t_statistic: Number::new(f.rho_t_statistic, "zero standard error"),
            });
            ("ar1", Some(f.method), Some(f.iterations))
        }
    };
    EstimationSection {
        estimator: estimator.into(),
        ar1_method: method,
        n: est.n(),
        df_resid: est.df_resid(),
        coefficients,
        alpha,
        beta,
        ln_a,
        rho: match est.rho() {
            Some(_) if exact => Number::undefined(EXACT_FIT),
            r => Number::from_option(r, "AR(1) correction disabled"),
        },
        r_squared: est.r_squared(),
        adjusted_r_squared: est.adjusted_r_squared(),
        f_statistic: guard(Number::from_option(
            est.f_statistic(),
            "no slope regressors or zero residual variance",
        )),
        durbin_watson: guard(Number::from_option(
            est.durbin_watson(),
            "zero residual variance",
        )),
        iterations,
    }
}

fn diagnostics_section(
    panel: &PanelDataset<f64>,
    fit: &crate::production::CobbDouglasFit<f64>,
    options: &CobbDouglasOptions<f64>,
    significance: Significance,
    warnings: &mut Vec<String>,
) -> Result<DiagnosticsSection> {
    let (label, residuals): (&str, Vec<f64>) = match &fit.estimation {
        Estimation::Ols(f) => ("ols", f.residuals.clone()),
        Estimation::Ar1(f) => ("innovations", f.innovations().to_vec()),
    };
    let m = residuals.len();
    let regressors: Vec<Vec<f64>> = fit
        .regression
        .regressors
        .iter()
        .map(|c| c[c.len() - m..].to_vec())
        .collect();
    let regressor_names: Vec<&str> = if fit.time_trend {
        vec!["ln_k_per_l", "trend"]
    } else {
        vec!["ln_k_per_l"]
    };

    let mut tests = Vec::new();
    let mut run = |name: &str, r: Result<DiagnosticReport<f64>>, warn: &str| match r {
        Ok(r) => {
            let row = DiagnosticRow::from_report(&r, significance);
            if row.reject == Some(true) {
                warnings.push(format!(
                    "{warn} ({name} rejects at {})",
                    significance.level()
                ));
            }
            tests.push(row);
        }
        Err(e) => {
            tests.push(DiagnosticRow {
                test: name.to_string(),
                statistic: Number::undefined(&e.to_string()),
                distribution: "none".into(),
                p_value: Number::undefined(&e.to_string()),
                reject: None,
            });
        }
    };
    run(
        "breusch_pagan_godfrey",
        breusch_pagan_godfrey(&residuals, &regressors),
        "heteroskedastic residuals",
    );
    run(
        "breusch_godfrey_lm",
        breusch_godfrey_lm(&residuals, &regressors, BG_LAGS),
        "serially correlated residuals",
    );
    run(
        "jarque_bera",
        jarque_bera(&residuals),
        "non-normal residuals",
    );
    let crs = fit_unrestricted(panel, options).and_then(|u| wald_crs_test(&u));
    run("wald_crs", crs, "constant returns to scale rejected");

    let exo = residual_exogeneity(&residuals, &regressors)?;
    let max_lag = (m / 4).clamp(1, MAX_CORRELOGRAM_LAG);
    let (band, rows) = match correlogram(&residuals, max_lag) {
        Ok(c) => (
            Number::new(c.band, "non-finite band"),
            c.acf
                .iter()
                .zip(&c.pacf)
                .enumerate()
                .map(|(lag, (&acf, &pacf))| CorrelogramRow { lag, acf, pacf })
                .collect(),
        ),
        Err(e) => (Number::undefined(&e.to_string()), Vec::new()),
    };
    Ok(DiagnosticsSection {
        residuals: label.into(),
        n: m,
        tests,
        residual_mean: Number::new(exo.mean, "non-finite mean"),
        correlations: regressor_names
            .iter()
            .zip(&exo.correlations)
            .map(|(name, c)| CorrelationRow {
                regressor: name.to_string(),
                correlation: Number::from_option(*c, "constant regressor or residuals"),
            })
            .collect(),
        correlogram_band: band,
        correlogram: rows,
    })
}

fn tfp_section(
    panel: &PanelDataset<f64>,
    elasticities: Elasticities<f64>,
    convention: GrowthConvention,
) -> Result<TfpSection> {
    let tfp = solow_residual_series(panel, elasticities, convention)?;
    let v = growth_rates(&panel.value_added, convention)?;
    let l = growth_rates(&panel.labor, convention)?;
    let k = growth_rates(&panel.capital, convention)?;
    let years = (0..tfp.growth.rates.len())
        .map(|i| TfpRow {
            year: tfp.growth.start_year + i as i32,
            value_added: v.rates[i],
            labor: l.rates[i],
            capital: k.rates[i],
            tfp: tfp.growth.rates[i],
        })
        .collect();
    Ok(TfpSection {
        convention,
        alpha: elasticities.alpha,
        beta: elasticities.beta,
        years,
        mean: tfp.mean,
    })
}

fn decomposition_section(
    panel: &PanelDataset<f64>,
    elasticities: Elasticities<f64>,
    periods: &PeriodSpec,
    config: &PipelineConfig,
    warnings: &mut Vec<String>,
) -> Result<DecompositionSection> {
    let (first, last) = (panel.start_year() + 1, panel.end_year());
    let rates = average_growth(panel, first, last, config.averaging, config.convention)?;
    let full = decompose_period(rates, elasticities);
    if full.shares.is_none() {
        warnings.push(format!(
            "shares undefined for {first}-{last}: zero output growth"
        ));
    }
    let table = subperiod_table(
        panel,
        elasticities,
        periods,
        config.averaging,
        config.convention,
    )?;
    let mut subperiods = Vec::new();
    for (d, &(a, b)) in table.iter().zip(periods.windows()) {
        if d.shares.is_none() {
            warnings.push(format!("shares undefined for {a}-{b}: zero output growth"));
        }
        subperiods.push(DecompositionRow::from_decomposition(d, a, b));
    }
    Ok(DecompositionSection {
        averaging: config.averaging,
        convention: config.convention,
        full_sample: DecompositionRow::from_decomposition(&full, first, last),
        subperiods,
    })
}

/// Pretty-printed JSON with a trailing newline.
pub fn render_json(report: &PipelineReport) -> String {
    let mut s = serde_json::to_string_pretty(report).expect("report serializes");
    s.push('\n');
    s
}

pub fn parse_json(text: &str) -> Result<PipelineReport> {
    serde_json::from_str(text).map_err(|e| Error::Input(format!("report JSON: {e}")))
}

fn fmt4(x: f64) -> String {
    format!("{x:.4}")
}

fn fmt_num(n: &Number) -> String {
    n.value().map_or_else(|| "NA".to_string(), fmt4)
}

/// Left-aligned first column, right-aligned rest, two spaces between columns.
fn table(out: &mut String, header: &[&str], rows: &[Vec<String>]) {
    let mut widths: Vec<usize> = header.iter().map(|h| h.len()).collect();
    for r in rows {
        for (w, c) in widths.iter_mut().zip(r) {
            *w = (*w).max(c.len());
        }
    }
    let line = |cells: Vec<&str>| -> String {
        let mut s = String::new();
        for (i, (c, w)) in cells.iter().zip(&widths).enumerate() {
            if i == 0 {
                let _ = write!(s, "{c:<w$}");
            } else {
                let _ = write!(s, "  {c:>w$}");
            }
        }
        s.trim_end().to_string()
    };
    out.push_str(&line(header.to_vec()));
    out.push('\n');
    let total: usize = widths.iter().sum::<usize>() + 2 * (widths.len() - 1);
    out.push_str(&"-".repeat(total));
    out.push('\n');
    for r in rows {
        out.push_str(&line(r.iter().map(String::as_str).collect()));
        out.push('\n');
    }
}

fn heading(out: &mut String, title: &str) {
    out.push('\n');
    out.push_str(title);
    out.push('\n');
    out.push_str(&"=".repeat(title.len()));
    out.push('\n');
}

fn test_label(t: UnitRootTest) -> &'static str {
    match t {
        UnitRootTest::Adf => "ADF",
        UnitRootTest::Pp => "PP",
    }
}

fn order_label(o: Option<IntegrationOrder>) -> &'static str {
    match o {
        Some(IntegrationOrder::I0) => "I(0)",
        Some(IntegrationOrder::I1) => "I(1)",
        Some(IntegrationOrder::HigherOrUndetermined) => "undetermined",
        None => "unavailable",
    }
}

fn yes_no(b: bool) -> String {
    if b { "yes" } else { "no" }.to_string()
}

fn unit_root_cells(label: &str, r: &UnitRootRow) -> Vec<String> {
    vec![
        label.to_string(),
        r.form.clone(),
        test_label(r.test).to_string(),
        fmt_num(&r.statistic),
        r.lags.to_string(),
        fmt4(r.critical_1),
        fmt4(r.critical_5),
        fmt4(r.critical_10),
        yes_no(r.reject),
    ]
}

const UNIT_ROOT_HEADER: [&str; 9] = [
    "series", "form", "test", "stat", "lags", "cv1", "cv5", "cv10", "reject",
];

fn decomposition_cells(d: &DecompositionRow) -> Vec<String> {
    vec![
        format!("{}-{}", d.first_year, d.last_year),
        fmt4(d.value_added),
        fmt4(d.labor),
        fmt4(d.capital),
        fmt4(d.labor_contribution),
        fmt4(d.capital_contribution),
        fmt4(d.tfp_contribution),
        fmt_num(&d.labor_share),
        fmt_num(&d.capital_share),
        fmt_num(&d.tfp_share),
    ]
}

/// Fixed-width plain-text report, every number to four decimals.
pub fn render_text(report: &PipelineReport) -> String {
    let mut out = String::from("Growth accounting report\n");

    let d = &report.data;
    heading(
        &mut out,
        &format!("Data {}-{} ({} years)", d.start_year, d.end_year, d.n_years),
    );
    let rows: Vec<Vec<String>> = d
        .series
        .iter()
        .map(|s| {
            vec![
                s.name.clone(),
                fmt4(s.first),
                fmt4(s.last),
                fmt_num(&s.cagr),
                fmt_num(&s.mean_growth),
            ]
        })
        .collect();
    table(
        &mut out,
        &["series", "first", "last", "cagr", "mean_growth"],
        &rows,
    );
    if !d.interpolated_labor_years.is_empty() {
        let _ = writeln!(
            out,
            "interpolated labor years: {}",
            join_years(&d.interpolated_labor_years)
        );
    }

    heading(&mut out, "Unit-root tests");
    let mut rows = Vec::new();
    for s in &report.unit_root {
        for t in &s.tests {
            rows.push(unit_root_cells(&s.series, t));
        }
    }
    table(&mut out, &UNIT_ROOT_HEADER, &rows);
    for s in &report.unit_root {
        let _ = writeln!(out, "{}: {}", s.series, order_label(s.order));
    }

    let e = &report.estimation;
    heading(
        &mut out,
        &format!("Restricted Cobb-Douglas ({})", e.estimator),
    );
    let rows: Vec<Vec<String>> = e
        .coefficients
        .iter()
        .map(|c| {
            vec![
                c.name.clone(),
                fmt4(c.estimate),
                fmt_num(&c.std_error),
                fmt_num(&c.t_statistic),
            ]
        })
        .collect();
    table(
        &mut out,
        &["coefficient", "estimate", "std_error", "t"],
        &rows,
    );
    let stats = vec![
        vec!["alpha".to_string(), fmt4(e.alpha)],
        vec!["beta".to_string(), fmt4(e.beta)],
        vec!["rho".to_string(), fmt_num(&e.rho)],
        vec!["r_squared".to_string(), fmt4(e.r_squared)],
        vec!["adjusted_r_squared".to_string(), fmt4(e.adjusted_r_squared)],
        vec!["f_statistic".to_string(), fmt_num(&e.f_statistic)],
        vec!["durbin_watson".to_string(), fmt_num(&e.durbin_watson)],
        vec!["n".to_string(), e.n.to_string()],
        vec!["df_resid".to_string(), e.df_resid.to_string()],
    ];
    table(&mut out, &["statistic", "value"], &stats);

    heading(&mut out, "Diagnostics");
    match &report.diagnostics {
        Some(dg) => {
            let rows: Vec<Vec<String>> = dg
                .tests
                .iter()
                .map(|t| {
                    vec![
                        t.test.clone(),
                        fmt_num(&t.statistic),
                        t.distribution.clone(),
                        fmt_num(&t.p_value),
                        t.reject.map_or_else(|| "NA".to_string(), yes_no),
                    ]
                })
                .collect();
            table(
                &mut out,
                &["test", "statistic", "distribution", "p_value", "reject"],
                &rows,
            );
            let _ = writeln!(out, "residuals: {} (n = {})", dg.residuals, dg.n);
            let _ = writeln!(out, "residual mean: {}", fmt_num(&dg.residual_mean));
            for c in &dg.correlations {
                let _ = writeln!(
                    out,
                    "corr(residual, {}): {}",
                    c.regressor,
                    fmt_num(&c.correlation)
                );
            }
            let rows: Vec<Vec<String>> = dg
                .correlogram
                .iter()
                .map(|c| vec![c.lag.to_string(), fmt4(c.acf), fmt4(c.pacf)])
                .collect();
            table(&mut out, &["lag", "acf", "pacf"], &rows);
            let _ = writeln!(out, "band: +/-{}", fmt_num(&dg.correlogram_band));
        }
        None => out.push_str("unavailable\n"),
    }

    heading(&mut out, "Cointegration (levels residuals)");
    match &report.cointegration {
        Some(c) => {
            let rows = vec![
                unit_root_cells("residual", &c.adf),
                unit_root_cells("residual", &c.pp),
            ];
            table(&mut out, &UNIT_ROOT_HEADER, &rows);
            let _ = writeln!(out, "cointegrated: {}", yes_no(c.cointegrated));
        }
        None => out.push_str("unavailable\n"),
    }

    let t = &report.tfp;
    heading(
        &mut out,
        &format!(
            "TFP growth (alpha = {}, beta = {})",
            fmt4(t.alpha),
            fmt4(t.beta)
        ),
    );
    let rows: Vec<Vec<String>> = t
        .years
        .iter()
        .map(|r| {
            vec![
                r.year.to_string(),
                fmt4(r.value_added),
                fmt4(r.labor),
                fmt4(r.capital),
                fmt4(r.tfp),
            ]
        })
        .collect();
    table(
        &mut out,
        &["year", "value_added", "labor", "capital", "tfp"],
        &rows,
    );
    let _ = writeln!(out, "mean: {}", fmt4(t.mean));

    heading(&mut out, "Growth decomposition");
    let mut rows = vec![decomposition_cells(&report.decomposition.full_sample)];
    rows.extend(
        report
            .decomposition
            .subperiods
            .iter()
            .map(decomposition_cells),
    );
    table(
        &mut out,
        &[
            "period",
            "v",
            "l",
            "k",
            "labor",
            "capital",
            "tfp",
            "labor_%",
            "capital_%",
            "tfp_%",
        ],
        &rows,
    );

    heading(&mut out, "Warnings");
    if report.warnings.is_empty() {
        out.push_str("none\n");
    }
    for w in &report.warnings {
        let _ = writeln!(out, "- {w}");
    }
    out
}

fn csv_num(n: &Number) -> String {
    n.value().map_or_else(String::new, |v| v.to_string())
}

fn csv_doc(header: &[&str], rows: &[Vec<String>]) -> Result<String> {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(header)?;
    for r in rows {
        w.write_record(r)?;
    }
    let bytes = w.into_inner().map_err(|e| Error::Io(e.to_string()))?;
    String::from_utf8(bytes).map_err(|e| Error::Io(e.to_string()))
}

fn unit_root_csv_cells(label: &str, r: &UnitRootRow) -> Vec<String> {
    vec![
        label.to_string(),
        r.form.clone(),
        test_label(r.test).to_string(),
        csv_num(&r.statistic),
        r.lags.to_string(),
        r.n_effective.to_string(),
        r.critical_1.to_string(),
        r.critical_5.to_string(),
        r.critical_10.to_string(),
        r.reject.to_string(),
    ]
}

const UNIT_ROOT_CSV_HEADER: [&str; 10] = [
    "series",
    "form",
    "test",
    "statistic",
    "lags",
    "n_effective",
    "critical_1",
    "critical_5",
    "critical_10",
    "reject",
];

/// One CSV document per section, as `(file name, contents)`.
pub fn render_csv(report: &PipelineReport) -> Result<Vec<(String, String)>> {
    let mut files = Vec::new();

    let rows: Vec<Vec<String>> = report
        .data
        .series
        .iter()
        .map(|s| {
            vec![
                s.name.clone(),
                s.first.to_string(),
                s.last.to_string(),
                csv_num(&s.cagr),
                csv_num(&s.mean_growth),
            ]
        })
        .collect();
    files.push((
        "data.csv".to_string(),
        csv_doc(&["series", "first", "last", "cagr", "mean_growth"], &rows)?,
    ));

    let mut rows = Vec::new();
    for s in &report.unit_root {
        for t in &s.tests {
            rows.push(unit_root_csv_cells(&s.series, t));
        }
    }
    files.push((
        "unit_root.csv".to_string(),
        csv_doc(&UNIT_ROOT_CSV_HEADER, &rows)?,
    ));

    let e = &report.estimation;
    let mut rows: Vec<Vec<String>> = e
        .coefficients
        .iter()
        .map(|c| {
            vec![
                c.name.clone(),
                c.estimate.to_string(),
                csv_num(&c.std_error),
                csv_num(&c.t_statistic),
            ]
        })
        .collect();
    for (name, v) in [
        ("beta", Number::Value(e.beta)),
        ("r_squared", Number::Value(e.r_squared)),
        ("adjusted_r_squared", Number::Value(e.adjusted_r_squared)),
        ("f_statistic", e.f_statistic.clone()),
        ("durbin_watson", e.durbin_watson.clone()),
        ("n", Number::Value(e.n as f64)),
    ] {
        rows.push(vec![
            name.to_string(),
            csv_num(&v),
            String::new(),
            String::new(),
        ]);
    }
    files.push((
        "estimation.csv".to_string(),
        csv_doc(&["quantity", "value", "std_error", "t_statistic"], &rows)?,
    ));

    let (tests, corr) = match &report.diagnostics {
        Some(d) => (
            d.tests
                .iter()
                .map(|t| {
                    vec![
                        t.test.clone(),
                        csv_num(&t.statistic),
                        t.distribution.clone(),
                        csv_num(&t.p_value),
                        t.reject.map_or_else(String::new, |b| b.to_string()),
                    ]
                })
                .collect(),
            d.correlogram
                .iter()
                .map(|c| {
                    vec![
                        c.lag.to_string(),
                        c.acf.to_string(),
                        c.pacf.to_string(),
                        csv_num(&d.correlogram_band),
                    ]
                })
                .collect(),
        ),
        None => (Vec::new(), Vec::new()),
    };
    files.push((
        "diagnostics.csv".to_string(),
        csv_doc(
            &["test", "statistic", "distribution", "p_value", "reject"],
            &tests,
        )?,
    ));
    files.push((
        "correlogram.csv".to_string(),
        csv_doc(&["lag", "acf", "pacf", "band"], &corr)?,
    ));

    let rows: Vec<Vec<String>> = report
        .cointegration
        .iter()
        .flat_map(|c| {
            [
                unit_root_csv_cells("residual", &c.adf),
                unit_root_csv_cells("residual", &c.pp),
            ]
        })
        .collect();
    files.push((
        "cointegration.csv".to_string(),
        csv_doc(&UNIT_ROOT_CSV_HEADER, &rows)?,
    ));

    let rows: Vec<Vec<String>> = report
        .tfp
        .years
        .iter()
        .map(|r| {
            vec![
                r.year.to_string(),
                r.value_added.to_string(),
                r.labor.to_string(),
                r.capital.to_string(),
                r.tfp.to_string(),
            ]
        })
        .collect();
    files.push((
        "tfp.csv".to_string(),
        csv_doc(&["year", "value_added", "labor", "capital", "tfp"], &rows)?,
    ));

    let dec = &report.decomposition;
    let rows: Vec<Vec<String>> = std::iter::once(&dec.full_sample)
        .chain(&dec.subperiods)
        .map(|d| {
            vec![
                d.first_year.to_string(),
                d.last_year.to_string(),
                d.value_added.to_string(),
                d.labor.to_string(),
                d.capital.to_string(),
                d.labor_contribution.to_string(),
                d.capital_contribution.to_string(),
                d.tfp_contribution.to_string(),
                csv_num(&d.labor_share),
                csv_num(&d.capital_share),
                csv_num(&d.tfp_share),
            ]
        })
        .collect();
    files.push((
        "decomposition.csv".to_string(),
        csv_doc(
            &[
                "first_year",
                "last_year",
                "value_added",
                "labor",
                "capital",
                "labor_contribution",
                "capital_contribution",
                "tfp_contribution",
                "labor_share",
                "capital_share",
                "tfp_share",
            ],
            &rows,
        )?,
    ));

    let rows: Vec<Vec<String>> = report.warnings.iter().map(|w| vec![w.clone()]).collect();
    files.push(("warnings.csv".to_string(), csv_doc(&["warning"], &rows)?));
    Ok(files)
}

/// Write the report. `json` and `text` go to `path` as one file; `csv`
/// treats `path` as a directory and writes one file per section.
pub fn emit_report(
    report: &PipelineReport,
    format: OutputFormat,
    path: &Path,
) -> Result<Vec<PathBuf>> {
    let write = |p: &Path, s: &str| -> Result<()> {
        fs::write(p, s).map_err(|e| Error::Io(format!("{}: {e}", p.display())))
    };
    match format {
        OutputFormat::Json => {
            write(path, &render_json(report))?;
            Ok(vec![path.to_path_buf()])
        }
        OutputFormat::Text => {
            write(path, &render_text(report))?;
            Ok(vec![path.to_path_buf()])
        }
        OutputFormat::Csv => {
            fs::create_dir_all(path).map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
            let mut written = Vec::new();
            for (name, body) in render_csv(report)? {
                let p = path.join(name);
                write(&p, &body)?;
                written.push(p);
            }
            Ok(written)
        }
    }
}
