//! Cobb-Douglas production estimation, unit-root pre-tests, residual
//! diagnostics and Solow-residual growth accounting for annual sector data.
//!
//! Numerical routines are generic over [`Scalar`] (`f32` or `f64`). The
//! `*64` aliases below fix the common case.

// `!(x > 0.0)` style guards deliberately reject NaN along with out-of-range values.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod accounting;
pub mod ar1;
pub mod diagnostics;
pub mod error;
pub mod ingest;
mod linalg;
pub mod mackinnon;
pub mod ols;
pub mod pipeline;
pub mod production;
pub mod scalar;
pub mod series;
pub mod synthetic;
pub mod unit_root;

pub use accounting::{
    decompose_period, solow_residual_series, subperiod_table, AverageGrowth, AveragingConvention,
    Contributions, Elasticities, GrowthDecomposition, PeriodSpec, Shares, TfpSeries,
};
pub use ar1::{fit_with_ar1, Ar1Fit, Ar1Method, Ar1Options};
pub use diagnostics::{
    breusch_godfrey_lm, breusch_pagan_godfrey, correlogram, jarque_bera, residual_exogeneity,
    Correlogram, DiagnosticReport, Distribution, ExogeneityReport,
};
pub use error::{Error, ErrorClass, Result};
pub use mackinnon::{engle_granger_critical_values, mackinnon_critical_values, CriticalValues};
pub use ols::{ols_fit, OlsFit, RegressionSpec};
pub use production::{
    factor_shares, fit_restricted, fit_unrestricted, marginal_products, wald_crs_test,
    CobbDouglasFit, CobbDouglasForm, CobbDouglasOptions, Estimation, FactorShares,
    MarginalProducts,
};
pub use scalar::Scalar;
pub use series::{
    compound_annual_growth, growth_rates, interpolate_gaps, AnnualSeries, GrowthConvention,
    GrowthSeries, InterpolationMethod, PanelDataset,
};
pub use synthetic::{
    generate_economy, recovery_trial, Economy, EconomySpec, EconomyTruth, GrowthPath, RecoveryTrial,
};
pub use unit_root::{
    adf_test, classify_integration, engle_granger_residual_test, pp_test, Bandwidth,
    CointegrationReport, Decision, DeterministicSpec, IntegrationClassification, IntegrationOrder,
    LagSelection, Significance, UnitRootOptions, UnitRootReport, UnitRootTest,
};

pub type AnnualSeries64 = AnnualSeries<f64>;
pub type PanelDataset64 = PanelDataset<f64>;
pub type GrowthSeries64 = GrowthSeries<f64>;
pub type OlsFit64 = OlsFit<f64>;
pub type Ar1Fit64 = Ar1Fit<f64>;
pub type CobbDouglasFit64 = CobbDouglasFit<f64>;
pub type UnitRootReport64 = UnitRootReport<f64>;
pub type DiagnosticReport64 = DiagnosticReport<f64>;
pub type GrowthDecomposition64 = GrowthDecomposition<f64>;
