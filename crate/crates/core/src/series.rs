//! Year-indexed annual series, growth-rate transforms and gap filling.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::scalar::Scalar;

/// Annual observations on consecutive integer years.
///
/// Year labels are opaque; only their ordering matters. An entry may be
/// `None` (missing) until [`interpolate_gaps`] has been applied.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AnnualSeries<T> {
    start_year: i32,
    values: Vec<Option<T>>,
}

impl<T: Scalar> AnnualSeries<T> {
    /// Complete series starting at `start_year`.
    pub fn new(start_year: i32, values: Vec<T>) -> Result<Self> {
        Self::with_gaps(start_year, values.into_iter().map(Some).collect())
    }

    /// Series that may contain missing entries.
    pub fn with_gaps(start_year: i32, values: Vec<Option<T>>) -> Result<Self> {
        if values.is_empty() {
            return Err(Error::Validation(
                "series must have at least one entry".into(),
            ));
        }
        if values.iter().flatten().any(|v| !v.is_finite()) {
            return Err(Error::Validation("series values must be finite".into()));
        }
        Ok(Self { start_year, values })
    }

    pub fn start_year(&self) -> i32 {
        self.start_year
    }

    pub fn end_year(&self) -> i32 {
        self.start_year + self.values.len() as i32 - 1
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn years(&self) -> impl Iterator<Item = i32> + '_ {
        (0..self.values.len()).map(move |i| self.start_year + i as i32)
    }

    pub fn raw(&self) -> &[Option<T>] {
        &self.values
    }

    pub fn get(&self, year: i32) -> Option<T> {
        let idx = usize::try_from(year - self.start_year).ok()?;
        self.values.get(idx).copied().flatten()
    }

    pub fn has_gaps(&self) -> bool {
        self.values.iter().any(Option::is_none)
    }

    /// All values, or a validation error naming the first missing year.
    pub fn values(&self) -> Result<Vec<T>> {
        self.values
            .iter()
            .enumerate()
            .map(|(i, v)| {
                v.ok_or_else(|| {
                    Error::Validation(format!(
                        "missing value in year {}",
                        self.start_year + i as i32
                    ))
                })
            })
            .collect()
    }

    /// Complete values that must all be strictly positive (level variables).
    pub fn positive_values(&self) -> Result<Vec<T>> {
        let vals = self.values()?;
        if let Some(i) = vals.iter().position(|&v| v <= T::zero()) {
            return Err(Error::Domain(format!(
                "nonpositive level value {} in year {}",
                vals[i],
                self.start_year + i as i32
            )));
        }
        Ok(vals)
    }

    /// Sub-series covering `first..=last`.
    pub fn window(&self, first: i32, last: i32) -> Result<Self> {
        if first > last || first < self.start_year || last > self.end_year() {
            return Err(Error::Validation(format!(
                "window {first}-{last} outside series range {}-{}",
                self.start_year,
                self.end_year()
            )));
        }
        let a = (first - self.start_year) as usize;
        let b = (last - self.start_year) as usize;
        Ok(Self {
            start_year: first,
            values: self.values[a..=b].to_vec(),
        })
    }

    /// First difference of a complete series.
    pub fn diff(&self) -> Result<Self> {
        let vals = self.values()?;
        if vals.len() < 2 {
            return Err(Error::InsufficientData {
                required: 1,
                available: vals.len(),
            });
        }
        let d = vals.windows(2).map(|w| Some(w[1] - w[0])).collect();
        Ok(Self {
            start_year: self.start_year + 1,
            values: d,
        })
    }

    pub fn map(&self, f: impl Fn(T) -> T) -> Self {
        Self {
            start_year: self.start_year,
            values: self.values.iter().map(|v| v.map(&f)).collect(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum GrowthConvention {
    /// `100 * (x_t / x_{t-1} - 1)`
    #[default]
    Arithmetic,
    /// `100 * ln(x_t / x_{t-1})`
    Logarithmic,
}

impl GrowthConvention {
    pub fn rate<T: Scalar>(self, prev: T, cur: T) -> T {
        let hundred = T::lit(100.0);
        match self {
            GrowthConvention::Arithmetic => hundred * (cur / prev - T::one()),
            GrowthConvention::Logarithmic => hundred * (cur / prev).ln(),
        }
    }
}

/// Annual growth rates in percent.
///
/// `start_year` is the first year with a defined rate (base year + 1).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GrowthSeries<T> {
    pub start_year: i32,
    pub rates: Vec<T>,
    pub convention: GrowthConvention,
}

impl<T: Scalar> GrowthSeries<T> {
    pub fn end_year(&self) -> i32 {
        self.start_year + self.rates.len() as i32 - 1
    }

    pub fn get(&self, year: i32) -> Option<T> {
        let idx = usize::try_from(year - self.start_year).ok()?;
        self.rates.get(idx).copied()
    }

    pub fn mean(&self) -> T {
        crate::scalar::mean(&self.rates)
    }

    /// Rates for `first..=last`.
    pub fn window(&self, first: i32, last: i32) -> Result<&[T]> {
        if first > last || first < self.start_year || last > self.end_year() {
            return Err(Error::Validation(format!(
                "window {first}-{last} outside growth-rate range {}-{}",
                self.start_year,
                self.end_year()
            )));
        }
        let a = (first - self.start_year) as usize;
        let b = (last - self.start_year) as usize;
        Ok(&self.rates[a..=b])
    }
}

pub fn growth_rates<T: Scalar>(
    series: &AnnualSeries<T>,
    convention: GrowthConvention,
) -> Result<GrowthSeries<T>> {
    let vals = series.positive_values()?;
    if vals.len() < 2 {
        return Err(Error::InsufficientData {
            required: 1,
            available: vals.len(),
        });
    }
    Ok(GrowthSeries {
        start_year: series.start_year() + 1,
        rates: vals
            .windows(2)
            .map(|w| convention.rate(w[0], w[1]))
            .collect(),
        convention,
    })
}

/// Compound annual growth rate in percent between the first and last entry.
pub fn compound_annual_growth<T: Scalar>(series: &AnnualSeries<T>) -> Result<T> {
    let n = series.len();
    if n < 2 {
        return Err(Error::InsufficientData {
            required: 1,
            available: n,
        });
    }
    let first = series.raw()[0];
    let last = series.raw()[n - 1];
    match (first, last) {
        (Some(a), Some(b)) if a > T::zero() && b > T::zero() => Ok(cagr_between(a, b, n - 1)),
        (Some(_), Some(_)) => Err(Error::Domain("nonpositive endpoint".into())),
        _ => Err(Error::Validation("missing endpoint".into())),
    }
}

pub(crate) fn cagr_between<T: Scalar>(first: T, last: T, intervals: usize) -> T {
    let exponent = T::one() / T::from_count(intervals);
    T::lit(100.0) * ((last / first).powf(exponent) - T::one())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum InterpolationMethod {
    /// Constant growth rate across each gap.
    #[default]
    Geometric,
    /// Constant absolute increment across each gap.
    Linear,
}

/// Fill missing entries from the surrounding benchmark (non-missing) years.
///
/// Interior gaps are bridged between the nearest flanking benchmarks.
/// Leading and trailing gaps are extrapolated with the growth of the
/// nearest benchmark pair. Benchmarks are left untouched.
pub fn interpolate_gaps<T: Scalar>(
    series: &AnnualSeries<T>,
    method: InterpolationMethod,
) -> Result<AnnualSeries<T>> {
    let raw = series.raw();
    let bench: Vec<usize> = (0..raw.len()).filter(|&i| raw[i].is_some()).collect();
    if bench.len() < 2 {
        return Err(Error::Validation(format!(
            "interpolation needs at least two benchmark years, found {}",
            bench.len()
        )));
    }
    let at = |i: usize| raw[i].expect("benchmark index");
    if method == InterpolationMethod::Geometric && bench.iter().any(|&i| at(i) <= T::zero()) {
        return Err(Error::Domain(
            "geometric interpolation requires positive benchmarks".into(),
        ));
    }

    // Value at position `i` on the path through benchmarks (i0, v0) and (i1, v1).
    let through = |i0: usize, i1: usize, i: usize| -> T {
        let (v0, v1) = (at(i0), at(i1));
        let span = T::from_count(i1 - i0);
        let offset = T::from_usize(i).unwrap() - T::from_usize(i0).unwrap();
        match method {
            InterpolationMethod::Geometric => v0 * (v1 / v0).powf(offset / span),
            InterpolationMethod::Linear => v0 + (v1 - v0) * offset / span,
        }
    };

    let mut out = Vec::with_capacity(raw.len());
    for (i, v) in raw.iter().enumerate() {
        if let Some(v) = v {
            out.push(Some(*v));
            continue;
        }
        let filled = match bench.binary_search(&i) {
            Ok(_) => unreachable!("missing entry cannot be a benchmark"),
            Err(0) => through(bench[0], bench[1], i),
            Err(pos) if pos == bench.len() => through(bench[pos - 2], bench[pos - 1], i),
            Err(pos) => through(bench[pos - 1], bench[pos], i),
        };
        if !filled.is_finite() {
            return Err(Error::Domain(format!(
                "interpolated value for year {} is not finite",
                series.start_year() + i as i32
            )));
        }
        out.push(Some(filled));
    }
    AnnualSeries::with_gaps(series.start_year(), out)
}

/// Value added, labor and capital on a common year range.
///
/// Only labor may carry missing entries; value added and capital must be
/// complete and strictly positive.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PanelDataset<T> {
    pub value_added: AnnualSeries<T>,
    pub labor: AnnualSeries<T>,
    pub capital: AnnualSeries<T>,
}

impl<T: Scalar> PanelDataset<T> {
    pub fn new(
        value_added: AnnualSeries<T>,
        labor: AnnualSeries<T>,
        capital: AnnualSeries<T>,
    ) -> Result<Self> {
        for (name, s) in [("labor", &labor), ("capital", &capital)] {
            if s.start_year() != value_added.start_year() || s.len() != value_added.len() {
                return Err(Error::Validation(format!(
                    "{name} covers {}-{} but value added covers {}-{}",
                    s.start_year(),
                    s.end_year(),
                    value_added.start_year(),
                    value_added.end_year()
                )));
            }
        }
        value_added
            .positive_values()
            .map_err(|e| relabel(e, "value_added"))?;
        capital
            .positive_values()
            .map_err(|e| relabel(e, "capital"))?;
        if labor.raw().iter().flatten().any(|&v| v <= T::zero()) {
            return Err(Error::Domain("labor values must be positive".into()));
        }
        Ok(Self {
            value_added,
            labor,
            capital,
        })
    }

    pub fn start_year(&self) -> i32 {
        self.value_added.start_year()
    }

    pub fn end_year(&self) -> i32 {
        self.value_added.end_year()
    }

    pub fn len(&self) -> usize {
        self.value_added.len()
    }

    pub fn is_empty(&self) -> bool {
        self.value_added.is_empty()
    }

    pub fn has_gaps(&self) -> bool {
        self.labor.has_gaps()
    }

    /// Panel with labor gaps filled.
    pub fn interpolated(&self, method: InterpolationMethod) -> Result<Self> {
        if !self.labor.has_gaps() {
            return Ok(self.clone());
        }
        Ok(Self {
            value_added: self.value_added.clone(),
            labor: interpolate_gaps(&self.labor, method)?,
            capital: self.capital.clone(),
        })
    }

    /// Complete, strictly positive `(value_added, labor, capital)` vectors.
    pub fn levels(&self) -> Result<(Vec<T>, Vec<T>, Vec<T>)> {
        Ok((
            self.value_added.positive_values()?,
            self.labor.positive_values()?,
            self.capital.positive_values()?,
        ))
    }

    pub fn window(&self, first: i32, last: i32) -> Result<Self> {
        Ok(Self {
            value_added: self.value_added.window(first, last)?,
            labor: self.labor.window(first, last)?,
            capital: self.capital.window(first, last)?,
        })
    }
}

fn relabel(e: Error, name: &str) -> Error {
    match e {
        Error::Validation(m) => Error::Validation(format!("{name}: {m}")),
        Error::Domain(m) => Error::Domain(format!("{name}: {m}")),
        other => other,
    }
}

/// `ln(Q/L)` and `ln(K/L)` for every year of the panel.
pub fn per_capita_log_panel<T: Scalar>(
    panel: &PanelDataset<T>,
) -> Result<(AnnualSeries<T>, AnnualSeries<T>)> {
    let (q, l, k) = panel.levels()?;
    let ln_q_per_l = q.iter().zip(&l).map(|(&q, &l)| (q / l).ln()).collect();
    let ln_k_per_l = k.iter().zip(&l).map(|(&k, &l)| (k / l).ln()).collect();
    Ok((
        AnnualSeries::new(panel.start_year(), ln_q_per_l)?,
        AnnualSeries::new(panel.start_year(), ln_k_per_l)?,
    ))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn s(v: &[f64]) -> AnnualSeries<f64> {
        AnnualSeries::new(1355, v.to_vec()).unwrap()
    }

    fn close(a: f64, b: f64, tol: f64) -> bool {
        (a - b).abs() <= tol
    }

    #[test]
    fn arithmetic_and_log_growth() {
        let g = growth_rates(&s(&[100.0, 110.0]), GrowthConvention::Arithmetic).unwrap();
        assert!(close(g.rates[0], 10.0, 1e-12));
        assert_eq!(g.start_year, 1356);
        let g = growth_rates(&s(&[100.0, 110.0]), GrowthConvention::Logarithmic).unwrap();
        assert!(close(g.rates[0], 9.531, 1e-3));
        for c in [GrowthConvention::Arithmetic, GrowthConvention::Logarithmic] {
            let g = growth_rates(&s(&[5.0, 5.0, 5.0]), c).unwrap();
            assert_eq!(g.rates, vec![0.0, 0.0]);
        }
    }

    #[test]
    fn growth_rejects_bad_values() {
        let err = growth_rates(&s(&[1.0, -1.0]), GrowthConvention::Arithmetic).unwrap_err();
        assert!(matches!(err, Error::Domain(_)));
        let gappy = AnnualSeries::with_gaps(1, vec![Some(1.0), None, Some(2.0)]).unwrap();
        let err = growth_rates(&gappy, GrowthConvention::Arithmetic).unwrap_err();
        assert!(matches!(err, Error::Validation(_)));
    }

    #[test]
    fn cagr_examples() {
        assert!(close(
            compound_annual_growth(&s(&[100.0, 200.0])).unwrap(),
            100.0,
            1e-12
        ));
        let mut v = vec![0.0; 11];
        v[0] = 100.0;
        v[10] = 200.0;
        for x in v.iter_mut().take(10).skip(1) {
            *x = 150.0;
        }
        assert!(close(compound_annual_growth(&s(&v)).unwrap(), 7.177, 1e-3));
        let path: Vec<f64> = (0..=30).map(|t| 100.0 * 1.0548f64.powi(t)).collect();
        assert!(close(
            compound_annual_growth(&s(&path)).unwrap(),
            5.48,
            1e-10
        ));
        assert!(matches!(
            compound_annual_growth(&s(&[0.0, 1.0])).unwrap_err(),
            Error::Domain(_)
        ));
    }

    #[test]
    fn interpolation_examples() {
        let g = AnnualSeries::with_gaps(1, vec![Some(100.0), None, Some(121.0)]).unwrap();
        let f = interpolate_gaps(&g, InterpolationMethod::Geometric).unwrap();
        assert!(close(f.values().unwrap()[1], 110.0, 1e-10));

        let full = s(&[1.0, 2.0, 3.0]);
        assert_eq!(
            interpolate_gaps(&full, InterpolationMethod::Geometric).unwrap(),
            full
        );

        let g = AnnualSeries::with_gaps(1, vec![None, Some(100.0), Some(110.0)]).unwrap();
        let f = interpolate_gaps(&g, InterpolationMethod::Geometric).unwrap();
        assert!(close(f.values().unwrap()[0], 90.909, 1e-3));

        let g = AnnualSeries::with_gaps(1, vec![Some(100.0), Some(110.0), None]).unwrap();
        let f = interpolate_gaps(&g, InterpolationMethod::Geometric).unwrap();
        assert!(close(f.values().unwrap()[2], 121.0, 1e-9));

        let g = AnnualSeries::with_gaps(1, vec![Some(100.0), None, None, Some(130.0)]).unwrap();
        let f = interpolate_gaps(&g, InterpolationMethod::Linear).unwrap();
        assert_eq!(f.values().unwrap(), vec![100.0, 110.0, 120.0, 130.0]);

        let g = AnnualSeries::with_gaps(1, vec![None, Some(100.0), None]).unwrap();
        assert!(matches!(
            interpolate_gaps(&g, InterpolationMethod::Geometric).unwrap_err(),
            Error::Validation(_)
        ));
    }

    #[test]
    fn per_capita_logs() {
        let e = std::f64::consts::E;
        let panel = PanelDataset::new(s(&[e]), s(&[1.0]), s(&[e * e])).unwrap();
        let (q, k) = per_capita_log_panel(&panel).unwrap();
        assert!(close(q.values().unwrap()[0], 1.0, 1e-15));
        assert!(close(k.values().unwrap()[0], 2.0, 1e-15));

        let panel =
            PanelDataset::new(s(&[100.0, 110.0]), s(&[10.0, 10.0]), s(&[50.0, 55.0])).unwrap();
        let (q, k) = per_capita_log_panel(&panel).unwrap();
        let (q, k) = (q.values().unwrap(), k.values().unwrap());
        assert!(close(q[0], 10f64.ln(), 1e-12) && close(q[1], 11f64.ln(), 1e-12));
        assert!(close(k[0], 1.6094, 1e-4) && close(k[1], 1.7047, 1e-4));

        let panel = PanelDataset::new(s(&[3.0, 4.0]), s(&[3.0, 4.0]), s(&[1.0, 1.0])).unwrap();
        let (q, _) = per_capita_log_panel(&panel).unwrap();
        assert!(q.values().unwrap().iter().all(|&v| v == 0.0));
    }

    #[test]
    fn panel_validation() {
        let err = PanelDataset::new(s(&[1.0, 2.0]), s(&[1.0]), s(&[1.0, 2.0])).unwrap_err();
        assert!(matches!(err, Error::Validation(_)));
        let gappy_va = AnnualSeries::with_gaps(1355, vec![Some(1.0), None]).unwrap();
        assert!(PanelDataset::new(gappy_va, s(&[1.0, 1.0]), s(&[1.0, 1.0])).is_err());
        let gappy_l = AnnualSeries::with_gaps(1355, vec![Some(1.0), None, Some(4.0)]).unwrap();
        let p = PanelDataset::new(s(&[1.0, 2.0, 3.0]), gappy_l, s(&[1.0, 2.0, 3.0])).unwrap();
        let filled = p.interpolated(InterpolationMethod::Geometric).unwrap();
        assert!(close(filled.labor.values().unwrap()[1], 2.0, 1e-12));
    }

    #[test]
    fn works_in_single_precision() {
        let g = growth_rates(
            &AnnualSeries::new(0, vec![100.0f32, 110.0]).unwrap(),
            GrowthConvention::Arithmetic,
        )
        .unwrap();
        assert!((g.rates[0] - 10.0).abs() < 1e-4);
    }
}
