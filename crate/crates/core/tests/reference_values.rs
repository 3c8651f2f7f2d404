//! Reference growth-accounting figures replayed through the library, and
//! hand-solved oracles.

use growthkit::accounting::AverageGrowth;
use growthkit::mackinnon::CriticalValues;
use growthkit::*;

mod common;
use common::{additive_or_unreachable, close};

// Full-sample CAGRs of value added, labor and capital, percent.
const CAGR: (f64, f64, f64) = (5.48, 2.65, 2.21);

#[test]
fn full_sample_decomposition() {
    let d = decompose_period(
        AverageGrowth::new(CAGR.0, CAGR.1, CAGR.2),
        Elasticities::restricted(0.52).unwrap(),
    );
    let c = d.contributions;
    assert!(close(c.capital, 1.15, 0.01));
    assert!(close(c.labor, 1.27, 0.01));
    assert!(close(c.tfp, 3.06, 0.01));
    let s = d.shares.unwrap();
    assert!(close(s.capital, 20.98, 0.1));
    assert!(close(s.labor, 23.18, 0.1));
    assert!(close(s.tfp, 55.84, 0.1));
    // four-decimal values
    assert!(close(c.capital, 1.1492, 1e-12));
    assert!(close(c.labor, 1.2720, 1e-12));
    assert!(close(c.tfp, 3.0588, 1e-12));
}

/// (window, v, k, l, reference labor, reference capital, reference tfp)
type Row = ((i32, i32), f64, f64, f64, f64, f64, f64);

const SUBPERIODS: [Row; 5] = [
    ((1356, 1367), 0.01, 1.26, 3.80, 1.8240, 0.6552, -2.4791),
    ((1368, 1373), 13.91, 9.43, 4.11, 1.9728, 4.9063, 7.0309),
    ((1374, 1378), 5.49, -3.99, 2.65, 1.2720, -2.0748, 6.2928),
    ((1379, 1383), 14.80, 6.01, 0.38, 0.1824, 3.1252, 11.4924),
    ((1384, 1385), 13.38, -0.23, 9.49, 4.5552, 0.1196, 8.7052),
];

#[test]
fn subperiod_rows() {
    let e = Elasticities::restricted(0.52).unwrap();
    for (i, &(_, v, k, l, pl, pk, pt)) in SUBPERIODS.iter().enumerate() {
        let d = decompose_period(AverageGrowth::new(v, l, k), e);
        let c = d.contributions;
        assert!(close(c.labor, pl, 0.01), "row {i} labor");
        match i {
            // reference tfp cell is off by 0.0099 from its own average growth
            0 => {
                assert!(close(c.capital, pk, 0.01));
                assert!(close(c.tfp, -2.4692, 1e-4));
            }
            // reference capital cell has the wrong sign for negative capital growth
            4 => {
                assert!(close(c.capital, -0.1196, 1e-4));
                assert!(close(c.tfp, 8.9444, 1e-4));
            }
            _ => {
                assert!(close(c.capital, pk, 0.01), "row {i} capital");
                assert!(close(c.tfp, pt, 0.01), "row {i} tfp");
            }
        }
        assert!(
            additive_or_unreachable(c.capital, c.labor, c.tfp, v),
            "row {i} additivity"
        );
        let s = d.shares.unwrap();
        assert_eq!(s.capital + s.labor + s.tfp, 100.0, "row {i} shares");
    }
    let d = decompose_period(AverageGrowth::new(5.49, 2.65, -3.99), e);
    assert!(close(d.contributions.capital, -2.0748, 1e-4));
    assert!(close(d.contributions.tfp, 6.2928, 1e-4));
}

const YEARLY_TFP: [f64; 30] = [
    -3.46, -13.88, -10.50, 1.68, 1.52, 14.42, 5.67, 1.20, -5.09, -16.67, 1.44, -5.55, -0.48, 17.36,
    0.95, 1.99, -6.31, 18.05, 2.51, 9.25, -6.00, 8.62, 12.97, -2.82, 6.33, 19.07, 11.38, 5.58,
    10.70, 8.33,
];

#[test]
fn yearly_tfp_mean() {
    let g = GrowthSeries {
        start_year: 1356,
        rates: YEARLY_TFP.to_vec(),
        convention: GrowthConvention::Arithmetic,
    };
    assert!(close(g.mean(), 2.94, 0.01));
    // plan-window means reproduce the arithmetic-mean tfp column
    let expected = [-2.435, 5.26, 5.47, 7.908, 9.515];
    for (&(a, b), want) in PeriodSpec::plan_windows().windows().iter().zip(expected) {
        let w = g.window(a, b).unwrap();
        let m = w.iter().sum::<f64>() / w.len() as f64;
        assert!(close(m, want, 1e-9), "{a}-{b}: {m}");
    }
}

#[test]
fn critical_value_fixtures() {
    let spec = DeterministicSpec::ConstantAndTrend;
    let cv = mackinnon_critical_values::<f64>(spec, 30);
    assert!(close(cv.one, -4.310, 0.02));
    assert!(close(cv.five, -3.568, 0.02));
    assert!(close(cv.ten, -3.218, 0.02));
    let cv = mackinnon_critical_values::<f64>(spec, 29);
    assert!(close(cv.one, -4.310, 0.02));
    assert!(close(cv.five, -3.574, 0.02));
    assert!(close(cv.ten, -3.222, 0.02));
}

fn report(test: UnitRootTest, stat: f64, cv: CriticalValues<f64>, n: usize) -> UnitRootReport<f64> {
    UnitRootReport::replay(test, stat, DeterministicSpec::ConstantAndTrend, cv, 0, n)
}

#[test]
fn integration_decisions() {
    let level_cv = CriticalValues::new(-4.310, -3.568, -3.218);
    let diff_cv = CriticalValues::new(-4.310, -3.568, -3.222);
    // (level ADF, level PP, difference ADF, difference PP)
    for stats in [
        (-1.034, -1.040, -4.764, -4.724),
        (-1.693, -1.804, -5.005, -5.002),
    ] {
        for (lcv, dcv) in [
            (level_cv, diff_cv),
            (
                mackinnon_critical_values(DeterministicSpec::ConstantAndTrend, 30),
                mackinnon_critical_values(DeterministicSpec::ConstantAndTrend, 29),
            ),
        ] {
            let c = IntegrationClassification::from_reports(
                report(UnitRootTest::Adf, stats.0, lcv, 30),
                report(UnitRootTest::Pp, stats.1, lcv, 30),
                report(UnitRootTest::Adf, stats.2, dcv, 29),
                report(UnitRootTest::Pp, stats.3, dcv, 29),
                Significance::Five,
            );
            assert_eq!(c.order, IntegrationOrder::I1);
        }
    }
}

#[test]
fn cointegration_decision() {
    let cv = CriticalValues::new(-4.310, -3.574, -3.222);
    let c = CointegrationReport::from_reports(
        report(UnitRootTest::Adf, -4.999, cv, 29),
        report(UnitRootTest::Pp, -6.019, cv, 29),
        Significance::One,
        unit_root::CointegrationCriticalValues::UnitRoot,
    );
    assert!(c.cointegrated);
}

#[test]
fn ols_three_point_oracle() {
    let fit = ols_fit(&RegressionSpec::new(
        vec![1.0, 2.0, 2.0],
        vec![vec![1.0, 2.0, 3.0]],
    ))
    .unwrap();
    let want_b = [2.0 / 3.0, 0.5];
    let want_se = [0.6236095644623235, 0.28867513459481287];
    let want_t = [1.0690449676496976, 1.7320508075688774];
    for i in 0..2 {
        assert!(close(fit.coefficients[i], want_b[i], 1e-10));
        assert!(close(fit.std_errors[i], want_se[i], 1e-10));
        assert!(close(fit.t_statistics[i], want_t[i], 1e-10));
    }
    assert!(close(fit.r_squared, 0.75, 1e-10));
    assert!(close(fit.sigma2, 1.0 / 6.0, 1e-10));
}

#[test]
fn ols_five_point_oracle() {
    let fit = ols_fit(&RegressionSpec::new(
        vec![3.0, 5.0, 4.0, 8.0, 10.0],
        vec![vec![1.0, 2.0, 3.0, 4.0, 5.0], vec![2.0, 1.0, 4.0, 3.0, 6.0]],
    ))
    .unwrap();
    let want_b = [59.0 / 60.0, 127.0 / 60.0, -5.0 / 12.0];
    let want_se = [1.5376750126227727, 0.8110350040397626, 0.6666666666666666];
    let want_t = [0.6394936025240385, 2.609833923472547, -0.6250000000000001];
    for i in 0..3 {
        assert!(close(fit.coefficients[i], want_b[i], 1e-10));
        assert!(close(fit.std_errors[i], want_se[i], 1e-10));
        assert!(close(fit.t_statistics[i], want_t[i], 1e-10));
    }
    assert!(close(fit.r_squared, 0.8745098039215686, 1e-10));
    assert!(close(fit.sigma2, 32.0 / 15.0, 1e-10));
}

const DF_FIXTURE: [f64; 12] = [1.0, 2.0, 4.0, 3.0, 5.0, 4.0, 6.0, 5.0, 7.0, 6.0, 8.0, 7.0];

#[test]
fn unit_root_statistic_oracles() {
    let c = DeterministicSpec::Constant;
    let adf = adf_test(&DF_FIXTURE, c, LagSelection::Fixed(0)).unwrap();
    assert!(close(adf.statistic, -1.867988163533004, 1e-6));
    let adf_ct = adf_test(
        &DF_FIXTURE,
        DeterministicSpec::ConstantAndTrend,
        LagSelection::Fixed(0),
    )
    .unwrap();
    assert!(close(adf_ct.statistic, -8.0, 1e-6));
    let pp0 = pp_test(&DF_FIXTURE, c, Bandwidth::Fixed(0)).unwrap();
    assert!(close(pp0.statistic, adf.statistic, 1e-12));
    let pp1 = pp_test(&DF_FIXTURE, c, Bandwidth::Fixed(1)).unwrap();
    assert!(close(pp1.statistic, -2.1171987522724605, 1e-6));
}
