use std::fmt::Write as _;
use std::io::Write as _;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use growthkit::accounting::average_growth;
use growthkit::ingest::{read_panel_path, write_panel_csv};
use growthkit::pipeline::{
    analyze_panel, emit_report, render_csv, render_json, render_text, ElasticitySource,
    OutputFormat, PipelineConfig,
};
use growthkit::{
    breusch_godfrey_lm, breusch_pagan_godfrey, classify_integration, decompose_period,
    fit_restricted, fit_unrestricted, generate_economy, jarque_bera, solow_residual_series,
    subperiod_table, wald_crs_test, Ar1Options, AverageGrowth, AveragingConvention, CobbDouglasFit,
    CobbDouglasOptions, DeterministicSpec, DiagnosticReport, EconomySpec, Elasticities, Error,
    ErrorClass, GrowthConvention, GrowthDecomposition, InterpolationMethod, PanelDataset,
    PeriodSpec, Significance, UnitRootOptions, UnitRootReport,
};
use serde_json::json;

const EXIT_USAGE: u8 = 1;
const EXIT_DATA: u8 = 2;
const EXIT_NUMERIC: u8 = 3;

#[derive(Parser)]
#[command(
    name = "growthkit",
    version,
    about = "Cobb-Douglas estimation and growth accounting"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Full workflow: unit roots, estimation, diagnostics, cointegration, accounting
    Run(RunArgs),
    /// Validate an input file, fill labor gaps and echo it as CSV
    Ingest(IngestArgs),
    /// Integration order of ln(Q/L) and ln(K/L)
    Unitroot(UnitrootArgs),
    /// Fit the Cobb-Douglas production function
    Estimate(EstimateArgs),
    /// Residual diagnostics for the restricted fit
    Diagnose(EstimateArgs),
    /// Solow residual and growth decomposition
    Accounting(AccountingArgs),
    /// Generate a synthetic economy in the input CSV format
    Synth(SynthArgs),
}

#[derive(Clone, Copy, ValueEnum)]
enum ConventionArg {
    Arithmetic,
    Log,
}

impl From<ConventionArg> for GrowthConvention {
    fn from(c: ConventionArg) -> Self {
        match c {
            ConventionArg::Arithmetic => GrowthConvention::Arithmetic,
            ConventionArg::Log => GrowthConvention::Logarithmic,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum SpecArg {
    None,
    Constant,
    Trend,
}

impl From<SpecArg> for DeterministicSpec {
    fn from(s: SpecArg) -> Self {
        match s {
            SpecArg::None => DeterministicSpec::None,
            SpecArg::Constant => DeterministicSpec::Constant,
            SpecArg::Trend => DeterministicSpec::ConstantAndTrend,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum AveragingArg {
    Arithmetic,
    Compound,
}

impl From<AveragingArg> for AveragingConvention {
    fn from(a: AveragingArg) -> Self {
        match a {
            AveragingArg::Arithmetic => AveragingConvention::ArithmeticMean,
            AveragingArg::Compound => AveragingConvention::Compound,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum FormatArg {
    Text,
    Csv,
    Json,
}

#[derive(Clone, Copy, ValueEnum)]
enum FormArg {
    Restricted,
    Unrestricted,
}

#[derive(Clone, Copy)]
enum AlphaArg {
    Fit,
    Fixed(f64),
}

fn parse_alpha(s: &str) -> Result<AlphaArg, String> {
    if s == "fit" {
        return Ok(AlphaArg::Fit);
    }
    s.parse::<f64>()
        .map(AlphaArg::Fixed)
        .map_err(|_| format!("expected 'fit' or a number, got '{s}'"))
}

fn parse_significance(s: &str) -> Result<Significance, String> {
    let level: f64 = s.parse().map_err(|_| format!("not a number: '{s}'"))?;
    Significance::from_level(level).map_err(|e| e.to_string())
}

#[derive(Args)]
struct InputArgs {
    /// Panel CSV with header year,value_added,labor,capital
    #[arg(long)]
    input: PathBuf,
    /// Leave labor gaps unfilled (gaps then become an error)
    #[arg(long)]
    no_interpolation: bool,
}

#[derive(Args)]
struct TestArgs {
    /// Deterministic terms in the unit-root regressions
    #[arg(long, value_enum, default_value = "trend")]
    spec: SpecArg,
    /// 0.01, 0.05 or 0.10
    #[arg(long, default_value = "0.05", value_parser = parse_significance)]
    significance: Significance,
}

#[derive(Args)]
struct RunArgs {
    #[command(flatten)]
    input: InputArgs,
    #[command(flatten)]
    tests: TestArgs,
    #[arg(long, value_enum, default_value = "arithmetic")]
    convention: ConventionArg,
    /// Window averaging for the decomposition
    #[arg(long, value_enum, default_value = "arithmetic")]
    averaging: AveragingArg,
    /// Capital elasticity: `fit` or a number in (0, 1)
    #[arg(long, default_value = "fit", value_parser = parse_alpha)]
    alpha: AlphaArg,
    /// Sub-period windows of growth-rate years, e.g. 1356-1367,1368-1373
    #[arg(long)]
    periods: Option<String>,
    /// Plain OLS instead of the AR(1) correction
    #[arg(long)]
    no_ar1: bool,
    /// Add a linear time trend to the production function
    #[arg(long)]
    trend: bool,
    #[arg(long, value_enum, default_value = "text")]
    format: FormatArg,
    /// Output file (directory for csv); stdout when omitted
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct IngestArgs {
    #[command(flatten)]
    input: InputArgs,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct UnitrootArgs {
    #[command(flatten)]
    input: InputArgs,
    #[command(flatten)]
    tests: TestArgs,
    #[arg(long, value_enum, default_value = "text")]
    format: FormatArg,
}

#[derive(Args)]
struct EstimateArgs {
    #[command(flatten)]
    input: InputArgs,
    #[arg(long, value_enum, default_value = "restricted")]
    form: FormArg,
    #[arg(long)]
    no_ar1: bool,
    #[arg(long)]
    trend: bool,
    #[arg(long, value_enum, default_value = "text")]
    format: FormatArg,
}

#[derive(Args)]
struct AccountingArgs {
    /// Panel CSV; omit to decompose given average rates instead
    #[arg(long, required_unless_present = "rates", conflicts_with = "rates")]
    input: Option<PathBuf>,
    /// Average growth rates V,L,K in percent (requires a numeric --alpha)
    #[arg(long)]
    rates: Option<String>,
    #[arg(long)]
    no_interpolation: bool,
    #[arg(long, default_value = "fit", value_parser = parse_alpha)]
    alpha: AlphaArg,
    #[arg(long, value_enum, default_value = "arithmetic")]
    convention: ConventionArg,
    #[arg(long, value_enum, default_value = "arithmetic")]
    averaging: AveragingArg,
    #[arg(long)]
    periods: Option<String>,
    #[arg(long)]
    no_ar1: bool,
    #[arg(long)]
    trend: bool,
    #[arg(long, value_enum, default_value = "text")]
    format: FormatArg,
}

#[derive(Args)]
struct SynthArgs {
    #[arg(long, default_value_t = 1)]
    seed: u64,
    /// [default: 31]
    #[arg(long)]
    years: Option<usize>,
    /// [default: 1355]
    #[arg(long)]
    start_year: Option<i32>,
    /// [default: 0.52]
    #[arg(long)]
    alpha: Option<f64>,
    /// AR(1) coefficient of the log disturbance [default: 0.5]
    #[arg(long)]
    rho: Option<f64>,
    /// Innovation standard deviation of the log disturbance [default: 0.0575]
    #[arg(long)]
    sigma: Option<f64>,
    /// No disturbance (rho = sigma = 0)
    #[arg(long)]
    noise_free: bool,
    /// Output CSV; stdout when omitted
    #[arg(long)]
    out: Option<PathBuf>,
    /// Also write the latent truth record as JSON
    #[arg(long)]
    truth: Option<PathBuf>,
}

enum Failure {
    Usage(String),
    Lib(Error),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Lib(e)
    }
}

type CliResult = Result<(), Failure>;

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() {
                ExitCode::from(EXIT_USAGE)
            } else {
                ExitCode::SUCCESS
            };
        }
    };
    let result = match cli.command {
        Command::Run(a) => run(a),
        Command::Ingest(a) => ingest(a),
        Command::Unitroot(a) => unitroot(a),
        Command::Estimate(a) => estimate(a),
        Command::Diagnose(a) => diagnose(a),
        Command::Accounting(a) => accounting(a),
        Command::Synth(a) => synth(a),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Usage(m)) => {
            eprintln!("error: {m}");
            ExitCode::from(EXIT_USAGE)
        }
        Err(Failure::Lib(e)) => {
            eprintln!("error: {e}");
            match e.class() {
                ErrorClass::Data => ExitCode::from(EXIT_DATA),
                ErrorClass::Numeric => ExitCode::from(EXIT_NUMERIC),
            }
        }
    }
}

fn load(args: &InputArgs) -> Result<PanelDataset<f64>, Error> {
    let panel = read_panel_path(&args.input)?;
    if panel.has_gaps() && !args.no_interpolation {
        return panel.interpolated(InterpolationMethod::Geometric);
    }
    Ok(panel)
}

fn write_out(out: Option<&Path>, text: &str) -> Result<(), Error> {
    match out {
        Some(p) => std::fs::write(p, text).map_err(|e| Error::Io(format!("{}: {e}", p.display()))),
        None => std::io::stdout()
            .write_all(text.as_bytes())
            .map_err(|e| Error::Io(e.to_string())),
    }
}

fn to_json(v: &impl serde::Serialize) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("serializable");
    s.push('\n');
    s
}

fn elasticity_source(alpha: AlphaArg) -> ElasticitySource {
    match alpha {
        AlphaArg::Fit => ElasticitySource::Fit,
        AlphaArg::Fixed(alpha) => ElasticitySource::Fixed { alpha },
    }
}

fn run(a: RunArgs) -> CliResult {
    let periods = a.periods.as_deref().map(PeriodSpec::parse).transpose()?;
    let format = match a.format {
        FormatArg::Text => OutputFormat::Text,
        FormatArg::Csv => OutputFormat::Csv,
        FormatArg::Json => OutputFormat::Json,
    };
    if format == OutputFormat::Csv && a.out.is_none() {
        return Err(Failure::Usage(
            "--format csv needs --out <directory>".into(),
        ));
    }
    let config = PipelineConfig {
        input: Some(a.input.input.clone()),
        interpolation: !a.input.no_interpolation,
        convention: a.convention.into(),
        averaging: a.averaging.into(),
        spec: a.tests.spec.into(),
        significance: a.tests.significance,
        ar1: !a.no_ar1,
        time_trend: a.trend,
        elasticity: elasticity_source(a.alpha),
        periods,
        format,
        output: a.out.clone(),
    };
    config.validate()?;
    let panel = read_panel_path(&a.input.input)?;
    let report = analyze_panel(&panel, &config)?;
    match (&a.out, format) {
        (Some(p), f) => {
            emit_report(&report, f, p)?;
        }
        (None, OutputFormat::Json) => write_out(None, &render_json(&report))?,
        (None, OutputFormat::Text) => write_out(None, &render_text(&report))?,
        (None, OutputFormat::Csv) => {
            for (name, body) in render_csv(&report)? {
                write_out(None, &format!("# {name}\n{body}"))?;
            }
        }
    }
    Ok(())
}

fn ingest(a: IngestArgs) -> CliResult {
    let panel = load(&a.input)?;
    let mut buf = Vec::new();
    write_panel_csv(&panel, &mut buf)?;
    write_out(a.out.as_deref(), &String::from_utf8_lossy(&buf))?;
    Ok(())
}

fn f4(x: f64) -> String {
    if x.is_finite() {
        format!("{x:.4}")
    } else {
        "NA".into()
    }
}

fn unit_root_line(
    out: &mut String,
    series: &str,
    form: &str,
    r: &UnitRootReport<f64>,
    s: Significance,
) {
    let _ = writeln!(
        out,
        "{series:<12} {form:<10} {:<4} {:>10} {:>4} {:>10} {:>10} {:>10} {:>6}",
        format!("{:?}", r.test).to_uppercase(),
        f4(r.statistic),
        r.lags,
        f4(r.critical_values.one),
        f4(r.critical_values.five),
        f4(r.critical_values.ten),
        if r.rejects(s) { "yes" } else { "no" }
    );
}

fn unitroot(a: UnitrootArgs) -> CliResult {
    let panel = load(&a.input)?;
    let (q, k) = growthkit::series::per_capita_log_panel(&panel)?;
    let options = UnitRootOptions {
        spec: a.tests.spec.into(),
        ..UnitRootOptions::default()
    };
    let s = a.tests.significance;
    let qc = classify_integration(&q.values()?, options, s)?;
    let kc = classify_integration(&k.values()?, options, s)?;
    let text = match a.format {
        FormatArg::Json => to_json(&json!({ "ln_q_per_l": qc, "ln_k_per_l": kc })),
        _ => {
            let mut out = format!(
                "{:<12} {:<10} {:<4} {:>10} {:>4} {:>10} {:>10} {:>10} {:>6}\n",
                "series", "form", "test", "stat", "lags", "cv1", "cv5", "cv10", "reject"
            );
            for (name, c) in [("ln_q_per_l", &qc), ("ln_k_per_l", &kc)] {
                unit_root_line(&mut out, name, "level", &c.level_adf, s);
                unit_root_line(&mut out, name, "level", &c.level_pp, s);
                unit_root_line(&mut out, name, "difference", &c.diff_adf, s);
                unit_root_line(&mut out, name, "difference", &c.diff_pp, s);
            }
            for (name, c) in [("ln_q_per_l", &qc), ("ln_k_per_l", &kc)] {
                let _ = writeln!(out, "{name}: {:?}", c.order);
            }
            out
        }
    };
    write_out(None, &text)?;
    Ok(())
}

fn fit(
    panel: &PanelDataset<f64>,
    form: FormArg,
    no_ar1: bool,
    trend: bool,
) -> Result<CobbDouglasFit<f64>, Error> {
    let options = CobbDouglasOptions {
        ar1: (!no_ar1).then(Ar1Options::default),
        time_trend: trend,
    };
    match form {
        FormArg::Restricted => fit_restricted(panel, &options),
        FormArg::Unrestricted => fit_unrestricted(panel, &options),
    }
}

fn estimate(a: EstimateArgs) -> CliResult {
    let panel = load(&a.input)?;
    let f = fit(&panel, a.form, a.no_ar1, a.trend)?;
    let wald = match a.form {
        FormArg::Unrestricted => Some(wald_crs_test(&f)?),
        FormArg::Restricted => None,
    };
    let text = match a.format {
        FormatArg::Json => to_json(&json!({ "fit": f, "wald_crs": wald })),
        _ => {
            let e = &f.estimation;
            let mut out = String::new();
            let _ = writeln!(out, "{:<20} {:>12}", "quantity", "value");
            for (name, v) in [
                ("ln_a", f.ln_a),
                ("alpha", f.alpha),
                ("alpha_se", f.alpha_std_error()),
                ("alpha_t", f.alpha_t_statistic()),
                ("beta", f.beta),
                ("beta_se", f.beta_std_error()),
                ("beta_t", f.beta_t_statistic()),
                ("rho", e.rho().unwrap_or(f64::NAN)),
                ("r_squared", e.r_squared()),
                ("adjusted_r_squared", e.adjusted_r_squared()),
                ("f_statistic", e.f_statistic().unwrap_or(f64::NAN)),
                ("durbin_watson", e.durbin_watson().unwrap_or(f64::NAN)),
            ] {
                let _ = writeln!(out, "{name:<20} {:>12}", f4(v));
            }
            let _ = writeln!(out, "{:<20} {:>12}", "n", e.n());
            if let Some(w) = &wald {
                let _ = writeln!(
                    out,
                    "{:<20} {:>12}\n{:<20} {:>12}",
                    "wald_crs",
                    f4(w.statistic),
                    "wald_crs_p",
                    f4(w.p_value.unwrap_or(f64::NAN))
                );
            }
            out
        }
    };
    write_out(None, &text)?;
    Ok(())
}

fn diagnose(a: EstimateArgs) -> CliResult {
    let panel = load(&a.input)?;
    let f = fit(&panel, a.form, a.no_ar1, a.trend)?;
    let residuals: Vec<f64> = match &f.estimation {
        growthkit::Estimation::Ols(o) => o.residuals.clone(),
        growthkit::Estimation::Ar1(r) => r.innovations().to_vec(),
    };
    let m = residuals.len();
    let regressors: Vec<Vec<f64>> = f
        .regression
        .regressors
        .iter()
        .map(|c| c[c.len() - m..].to_vec())
        .collect();
    let reports: Vec<DiagnosticReport<f64>> = vec![
        breusch_pagan_godfrey(&residuals, &regressors)?,
        breusch_godfrey_lm(&residuals, &regressors, growthkit::pipeline::BG_LAGS)?,
        jarque_bera(&residuals)?,
    ];
    let text = match a.format {
        FormatArg::Json => to_json(&reports),
        _ => {
            let mut out = format!("{:<24} {:>12} {:>10}\n", "test", "statistic", "p_value");
            for r in &reports {
                let _ = writeln!(
                    out,
                    "{:<24} {:>12} {:>10}",
                    r.test,
                    f4(r.statistic),
                    f4(r.p_value.unwrap_or(f64::NAN))
                );
            }
            out
        }
    };
    write_out(None, &text)?;
    Ok(())
}

fn parse_rates(s: &str) -> Result<AverageGrowth<f64>, Failure> {
    let v: Vec<f64> = s
        .split(',')
        .map(|x| x.trim().parse::<f64>())
        .collect::<Result<_, _>>()
        .map_err(|_| Failure::Usage(format!("--rates expects V,L,K numbers, got '{s}'")))?;
    match v.as_slice() {
        [va, l, k] => Ok(AverageGrowth::new(*va, *l, *k)),
        _ => Err(Failure::Usage(
            "--rates expects exactly three numbers V,L,K".into(),
        )),
    }
}

fn decomposition_text(rows: &[(String, GrowthDecomposition<f64>)]) -> String {
    let mut out = format!(
        "{:<12} {:>10} {:>10} {:>10} {:>10} {:>10} {:>10} {:>10} {:>10} {:>10}\n",
        "period", "v", "l", "k", "labor", "capital", "tfp", "labor_%", "capital_%", "tfp_%"
    );
    for (label, d) in rows {
        let (ls, cs, ts) = d.shares.map_or((f64::NAN, f64::NAN, f64::NAN), |s| {
            (s.labor, s.capital, s.tfp)
        });
        let _ = writeln!(
            out,
            "{label:<12} {:>10} {:>10} {:>10} {:>10} {:>10} {:>10} {:>10} {:>10} {:>10}",
            f4(d.rates.value_added),
            f4(d.rates.labor),
            f4(d.rates.capital),
            f4(d.contributions.labor),
            f4(d.contributions.capital),
            f4(d.contributions.tfp),
            f4(ls),
            f4(cs),
            f4(ts)
        );
    }
    out
}

fn accounting(a: AccountingArgs) -> CliResult {
    if let Some(rates) = &a.rates {
        let alpha = match a.alpha {
            AlphaArg::Fixed(v) => v,
            AlphaArg::Fit => return Err(Failure::Usage("--rates needs a numeric --alpha".into())),
        };
        let d = decompose_period(parse_rates(rates)?, Elasticities::restricted(alpha)?);
        let text = match a.format {
            FormatArg::Json => to_json(&d),
            _ => decomposition_text(&[("given".to_string(), d)]),
        };
        write_out(None, &text)?;
        return Ok(());
    }
    let input = InputArgs {
        input: a.input.clone().expect("clap enforces --input or --rates"),
        no_interpolation: a.no_interpolation,
    };
    let panel = load(&input)?;
    let alpha = match a.alpha {
        AlphaArg::Fixed(v) if v > 0.0 && v < 1.0 => v,
        AlphaArg::Fixed(v) => {
            return Err(
                Error::Validation(format!("fixed alpha must lie in (0, 1), got {v}")).into(),
            )
        }
        AlphaArg::Fit => fit(&panel, FormArg::Restricted, a.no_ar1, a.trend)?.alpha,
    };
    let e = Elasticities::restricted(alpha)?;
    let convention: GrowthConvention = a.convention.into();
    let averaging: AveragingConvention = a.averaging.into();
    let tfp = solow_residual_series(&panel, e, convention)?;
    let (first, last) = (panel.start_year() + 1, panel.end_year());
    let mut full = decompose_period(
        average_growth(&panel, first, last, averaging, convention)?,
        e,
    );
    full.period = Some((first, last));
    full.averaging = Some(averaging);
    full.growth_convention = Some(convention);
    let periods = match &a.periods {
        Some(p) => Some(PeriodSpec::parse(p)?),
        None => {
            let plan = PeriodSpec::plan_windows();
            plan.windows()
                .iter()
                .all(|&(x, y)| x > panel.start_year() && y <= panel.end_year())
                .then_some(plan)
        }
    };
    let table = match &periods {
        Some(p) => subperiod_table(&panel, e, p, averaging, convention)?,
        None => Vec::new(),
    };
    let text = match a.format {
        FormatArg::Json => to_json(&json!({
            "alpha": alpha,
            "tfp": tfp,
            "full_sample": full,
            "subperiods": table,
        })),
        _ => {
            let mut out = format!(
                "alpha {}  beta {}\n{:<6} {:>10}\n",
                f4(e.alpha),
                f4(e.beta),
                "year",
                "tfp"
            );
            for (i, g) in tfp.growth.rates.iter().enumerate() {
                let _ = writeln!(
                    out,
                    "{:<6} {:>10}",
                    tfp.growth.start_year + i as i32,
                    f4(*g)
                );
            }
            let _ = writeln!(out, "mean   {:>10}\n", f4(tfp.mean));
            let mut rows = vec![(format!("{first}-{last}"), full)];
            for d in table {
                let (x, y) = d.period.expect("sub-periods carry their window");
                rows.push((format!("{x}-{y}"), d));
            }
            out.push_str(&decomposition_text(&rows));
            out
        }
    };
    write_out(None, &text)?;
    Ok(())
}

fn synth(a: SynthArgs) -> CliResult {
    let mut spec = EconomySpec::sector_magnitudes(a.seed);
    spec.n_years = a.years.unwrap_or(spec.n_years);
    spec.start_year = a.start_year.unwrap_or(spec.start_year);
    spec.alpha = a.alpha.unwrap_or(spec.alpha);
    spec.rho = a.rho.unwrap_or(spec.rho);
    spec.sigma = a.sigma.unwrap_or(spec.sigma);
    if a.noise_free {
        spec.rho = 0.0;
        spec.sigma = 0.0;
    }
    let eco = generate_economy(&spec)?;
    let mut buf = Vec::new();
    write_panel_csv(&eco.panel, &mut buf)?;
    write_out(a.out.as_deref(), &String::from_utf8_lossy(&buf))?;
    if let Some(p) = &a.truth {
        write_out(
            Some(p),
            &to_json(&json!({ "spec": spec, "truth": eco.truth })),
        )?;
    }
    Ok(())
}
