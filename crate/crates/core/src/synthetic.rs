//! Seeded Cobb-Douglas economies with known parameters.
//!
//! The random source is SplitMix64 with Box-Muller normals, so a given
//! spec and seed produce the same panel on every platform.

use serde::{Deserialize, Serialize};

use crate::accounting::{solow_residual_series, Elasticities};
use crate::ar1::Ar1Options;
use crate::error::{Error, Result};
use crate::production::{
    fit_restricted, fit_unrestricted, wald_crs_f, wald_crs_test, CobbDouglasOptions,
};
use crate::series::{AnnualSeries, GrowthConvention, PanelDataset};

/// SplitMix64 (Steele, Lea & Flood 2014).
#[derive(Debug, Clone)]
pub struct SplitMix64 {
    state: u64,
    spare_normal: Option<f64>,
}

impl SplitMix64 {
    pub fn new(seed: u64) -> Self {
        Self {
            state: seed,
            spare_normal: None,
        }
    }

    pub fn next_u64(&mut self) -> u64 {
        self.state = self.state.wrapping_add(0x9E37_79B9_7F4A_7C15);
        let mut z = self.state;
        z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
        z ^ (z >> 31)
    }

    /// Uniform on the open interval (0, 1).
    pub fn next_uniform(&mut self) -> f64 {
        ((self.next_u64() >> 11) as f64 + 0.5) * (1.0 / (1u64 << 53) as f64)
    }

    /// Standard normal via Box-Muller; the second deviate of each pair is cached.
    pub fn next_normal(&mut self) -> f64 {
        if let Some(z) = self.spare_normal.take() {
            return z;
        }
        let u1 = self.next_uniform();
        let u2 = self.next_uniform();
        let r = (-2.0 * u1.ln()).sqrt();
        let theta = std::f64::consts::TAU * u2;
        self.spare_normal = Some(r * theta.sin());
        r * theta.cos()
    }
}

/// Annual growth in percent (arithmetic: `x_t = x_{t-1} (1 + g/100)`).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum GrowthPath {
    Constant {
        rate: f64,
    },
    PerYear {
        rates: Vec<f64>,
    },
    /// Independent normal draws each year.
    Random {
        mean: f64,
        sd: f64,
    },
}

impl GrowthPath {
    fn realize(&self, steps: usize, rng: &mut SplitMix64) -> Result<Vec<f64>> {
        match self {
            GrowthPath::Constant { rate } => Ok(vec![*rate; steps]),
            GrowthPath::PerYear { rates } => {
                if rates.len() != steps {
                    return Err(Error::Validation(format!(
                        "growth path has {} rates, need {steps}",
                        rates.len()
                    )));
                }
                Ok(rates.clone())
            }
            GrowthPath::Random { mean, sd } => {
                if !(*sd >= 0.0) {
                    return Err(Error::Validation("growth sd must be nonnegative".into()));
                }
                Ok((0..steps).map(|_| mean + sd * rng.next_normal()).collect())
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EconomySpec {
    pub n_years: usize,
    pub start_year: i32,
    pub alpha: f64,
    pub ln_a0: f64,
    pub tfp_growth: GrowthPath,
    pub capital_growth: GrowthPath,
    pub labor_growth: GrowthPath,
    pub capital0: f64,
    /// Initial employment; labor levels are rounded to whole persons.
    pub labor0: f64,
    pub rho: f64,
    pub sigma: f64,
    pub seed: u64,
}

impl EconomySpec {
    /// Sector-study magnitudes: 31 years, alpha 0.52, TFP 3%/yr, capital
    /// ~2.2%/yr, labor ~2.7%/yr, AR(1) disturbance with rho 0.5. Sigma is
    /// set so the restricted fit with trend averages R^2 of about 0.94.
    pub fn sector_magnitudes(seed: u64) -> Self {
        Self {
            n_years: 31,
            start_year: 1355,
            alpha: 0.52,
            ln_a0: 0.0,
            tfp_growth: GrowthPath::Constant { rate: 3.0 },
            capital_growth: GrowthPath::Random { mean: 2.2, sd: 4.0 },
            labor_growth: GrowthPath::Random { mean: 2.7, sd: 4.0 },
            capital0: 2000.0,
            labor0: 60000.0,
            rho: 0.5,
            sigma: 0.0575,
            seed,
        }
    }

    /// Same economy with no disturbance.
    pub fn noise_free(seed: u64) -> Self {
        Self {
            rho: 0.0,
            sigma: 0.0,
            ..Self::sector_magnitudes(seed)
        }
    }

    fn validate(&self) -> Result<()> {
        if self.n_years < 6 {
            return Err(Error::Validation("n_years must be at least 6".into()));
        }
        if !(self.sigma >= 0.0) || !self.sigma.is_finite() {
            return Err(Error::Validation(
                "sigma must be finite and nonnegative".into(),
            ));
        }
        if !(self.rho.abs() < 1.0) {
            return Err(Error::Validation("|rho| must be below 1".into()));
        }
        if !(self.alpha.is_finite() && self.ln_a0.is_finite()) {
            return Err(Error::Validation("alpha and ln_a0 must be finite".into()));
        }
        if !(self.capital0 > 0.0 && self.labor0 >= 1.0) {
            return Err(Error::Validation(
                "initial capital and labor must be positive".into(),
            ));
        }
        Ok(())
    }
}

/// Every latent quantity behind a generated panel.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EconomyTruth {
    pub alpha: f64,
    pub ln_a: Vec<f64>,
    pub disturbance: Vec<f64>,
    pub innovations: Vec<f64>,
    /// `100 (A_t / A_{t-1} - 1)`
    pub tfp_growth: Vec<f64>,
    /// `100 (ln A_t - ln A_{t-1})`
    pub tfp_log_growth: Vec<f64>,
    /// Growth of the whole Hicks-neutral term `A_t exp(u_t)`, arithmetic percent.
    pub measured_tfp_growth: Vec<f64>,
}

impl EconomyTruth {
    pub fn mean_tfp_growth(&self) -> f64 {
        self.tfp_growth.iter().sum::<f64>() / self.tfp_growth.len() as f64
    }

    pub fn mean_measured_tfp_growth(&self) -> f64 {
        self.measured_tfp_growth.iter().sum::<f64>() / self.measured_tfp_growth.len() as f64
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Economy {
    pub panel: PanelDataset<f64>,
    pub truth: EconomyTruth,
}

/// `Q_t = A_t K_t^alpha L_t^(1-alpha) exp(u_t)`, `u_t = rho u_{t-1} + e_t`.
pub fn generate_economy(spec: &EconomySpec) -> Result<Economy> {
    spec.validate()?;
    let n = spec.n_years;
    let mut rng = SplitMix64::new(spec.seed);
    let tfp_g = spec.tfp_growth.realize(n - 1, &mut rng)?;
    let k_g = spec.capital_growth.realize(n - 1, &mut rng)?;
    let l_g = spec.labor_growth.realize(n - 1, &mut rng)?;
    if tfp_g.iter().chain(&k_g).chain(&l_g).any(|&g| !(g > -100.0)) {
        return Err(Error::Validation(
            "growth paths must keep every series positive (rates above -100%)".into(),
        ));
    }

    let mut ln_a = vec![spec.ln_a0];
    let mut k = vec![spec.capital0];
    let mut l_exact = vec![spec.labor0];
    for t in 1..n {
        ln_a.push(ln_a[t - 1] + (1.0 + tfp_g[t - 1] / 100.0).ln());
        k.push(k[t - 1] * (1.0 + k_g[t - 1] / 100.0));
        l_exact.push(l_exact[t - 1] * (1.0 + l_g[t - 1] / 100.0));
    }
    let l: Vec<f64> = l_exact.iter().map(|v| v.round().max(1.0)).collect();

    let innovations: Vec<f64> = (0..n).map(|_| spec.sigma * rng.next_normal()).collect();
    let mut u = Vec::with_capacity(n);
    u.push(innovations[0] / (1.0 - spec.rho * spec.rho).sqrt());
    for t in 1..n {
        u.push(spec.rho * u[t - 1] + innovations[t]);
    }

    let beta = 1.0 - spec.alpha;
    let q: Vec<f64> = (0..n)
        .map(|t| (ln_a[t] + spec.alpha * k[t].ln() + beta * l[t].ln() + u[t]).exp())
        .collect();
    if q.iter().chain(&k).any(|v| !(v.is_finite() && *v > 0.0)) {
        return Err(Error::Validation(
            "generated series are not positive and finite".into(),
        ));
    }

    let growth =
        |x: &[f64]| -> Vec<f64> { x.windows(2).map(|w| 100.0 * (w[1] / w[0] - 1.0)).collect() };
    let a: Vec<f64> = ln_a.iter().map(|v| v.exp()).collect();
    let measured: Vec<f64> = ln_a.iter().zip(&u).map(|(a, u)| (a + u).exp()).collect();
    let truth = EconomyTruth {
        alpha: spec.alpha,
        tfp_growth: growth(&a),
        tfp_log_growth: ln_a.windows(2).map(|w| 100.0 * (w[1] - w[0])).collect(),
        measured_tfp_growth: growth(&measured),
        ln_a,
        disturbance: u,
        innovations,
    };
    let panel = PanelDataset::new(
        AnnualSeries::new(spec.start_year, q)?,
        AnnualSeries::new(spec.start_year, l)?,
        AnnualSeries::new(spec.start_year, k)?,
    )?;
    Ok(Economy { panel, truth })
}

/// Estimates from one generated economy set against its truth.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RecoveryTrial {
    pub seed: u64,
    pub alpha_true: f64,
    /// Restricted fit with time trend.
    pub alpha_hat: f64,
    pub alpha_std_error: f64,
    pub rho_hat: Option<f64>,
    /// Chi-square(1) Wald statistic for `alpha + beta = 1` on the unrestricted fit.
    pub wald_statistic: f64,
    pub wald_p_value: Option<f64>,
    pub wald_f_p_value: Option<f64>,
    /// Mean Solow residual (arithmetic percent) at `alpha_hat`.
    pub tfp_mean: f64,
    pub truth: EconomyTruth,
}

impl RecoveryTrial {
    /// `|alpha_hat - alpha| <= 2 s.e.`
    pub fn alpha_covered(&self) -> bool {
        (self.alpha_hat - self.alpha_true).abs() <= 2.0 * self.alpha_std_error
    }

    pub fn wald_rejects(&self, level: f64) -> bool {
        self.wald_p_value.is_some_and(|p| p < level)
    }

    pub fn wald_f_rejects(&self, level: f64) -> bool {
        self.wald_f_p_value.is_some_and(|p| p < level)
    }

    /// Error of the mean TFP estimate against the growth of `A_t exp(u_t)`.
    pub fn tfp_error(&self) -> f64 {
        self.tfp_mean - self.truth.mean_measured_tfp_growth()
    }
}

/// Generate the economy, fit restricted and unrestricted forms with a time
/// trend, and compute the Solow residual at the fitted alpha.
pub fn recovery_trial(spec: &EconomySpec, ar1: Option<Ar1Options<f64>>) -> Result<RecoveryTrial> {
    let economy = generate_economy(spec)?;
    let options = CobbDouglasOptions {
        ar1,
        time_trend: true,
    };
    let restricted = fit_restricted(&economy.panel, &options)?;
    let unrestricted = fit_unrestricted(&economy.panel, &options)?;
    let wald = wald_crs_test(&unrestricted)?;
    let wald_f = wald_crs_f(&unrestricted)?;
    let tfp = solow_residual_series(
        &economy.panel,
        Elasticities::restricted(restricted.alpha)?,
        GrowthConvention::Arithmetic,
    )?;
    Ok(RecoveryTrial {
        seed: spec.seed,
        alpha_true: spec.alpha,
        alpha_hat: restricted.alpha,
        alpha_std_error: restricted.alpha_std_error(),
        rho_hat: restricted.estimation.rho(),
        wald_statistic: wald.statistic,
        wald_p_value: wald.p_value,
        wald_f_p_value: wald_f.p_value,
        tfp_mean: tfp.mean,
        truth: economy.truth,
    })
}
