//! Experiment drivers behind the `wyner-zf` binary.
//!
//! Every command produces a [`Table`] written as CSV: header row, `,`
//! separators, numbers to 12 significant digits, and the seed and trial
//! count on every row. Verification commands also report whether all of
//! their checks passed.

use std::io::Write as _;
use std::path::PathBuf;

use crate::analytic;
use crate::error::Error;
use crate::model::{DistKind, Policy, SystemConfig};
use crate::montecarlo::{self, derive_seed, Estimate, RngStream};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Command {
    SinrTable,
    RateVsUsers,
    MatchedLoad,
    VerifyBounds,
    VerifyZf,
    KsSuite,
}

impl Command {
    pub fn name(self) -> &'static str {
        match self {
            Command::SinrTable => "sinr-table",
            Command::RateVsUsers => "rate-vs-users",
            Command::MatchedLoad => "matched-load",
            Command::VerifyBounds => "verify-bounds",
            Command::VerifyZf => "verify-zf",
            Command::KsSuite => "ks-suite",
        }
    }

    /// User grid used when none is given.
    pub fn default_grid(self) -> Vec<usize> {
        match self {
            Command::SinrTable => vec![1, 2, 5, 10, 50],
            Command::RateVsUsers => vec![1, 2, 5, 10, 20, 50, 100, 200, 500, 1000],
            Command::MatchedLoad => vec![2, 5, 10, 20, 50],
            Command::VerifyBounds => (1..=100).collect(),
            Command::VerifyZf => vec![10],
            Command::KsSuite => vec![1, 10],
        }
    }
}

#[derive(Debug)]
pub enum CliError {
    Usage(String),
    Io(std::io::Error),
    Model(Error),
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CliError::Usage(msg) => write!(f, "usage error: {msg}"),
            CliError::Io(e) => write!(f, "i/o error: {e}"),
            CliError::Model(e) => write!(f, "{e}"),
        }
    }
}

impl std::error::Error for CliError {}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        CliError::Model(e)
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Io(e)
    }
}

pub type CliResult<T> = std::result::Result<T, CliError>;

#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentSpec {
    pub command: Command,
    pub config: SystemConfig,
    pub n_grid: Vec<usize>,
    pub trials: usize,
    /// `None` writes to standard output.
    pub output_path: Option<PathBuf>,
    /// Sweep values for `verify-bounds`.
    pub betas: Vec<f64>,
    pub rhos: Vec<f64>,
}

impl ExperimentSpec {
    pub fn new(command: Command, config: SystemConfig) -> Self {
        ExperimentSpec {
            command,
            config,
            n_grid: command.default_grid(),
            trials: 100_000,
            output_path: None,
            betas: vec![0.25, 0.5, 1.0],
            rhos: vec![1.0, 10.0],
        }
    }

    pub fn validate(&self) -> CliResult<()> {
        self.config.validate()?;
        if self.n_grid.is_empty() {
            return Err(CliError::Usage("user grid is empty".into()));
        }
        if self.n_grid[0] == 0 || self.n_grid.windows(2).any(|w| w[1] <= w[0]) {
            return Err(CliError::Usage(
                "user grid must be positive and strictly increasing".into(),
            ));
        }
        if self.trials < 2 {
            return Err(CliError::Usage("--trials must be at least 2".into()));
        }
        if self.command == Command::MatchedLoad && self.n_grid[0] < 2 {
            return Err(CliError::Usage("matched-load needs n >= 2".into()));
        }
        for &beta in &self.betas {
            self.config.with_beta(beta).validate()?;
        }
        for &rho in &self.rhos {
            self.config.with_rho(rho).validate()?;
        }
        Ok(())
    }
}

/// Parses `1,2,5` or `start:stop:step` (inclusive). The result must be
/// positive and strictly increasing.
pub fn parse_users(s: &str) -> CliResult<Vec<usize>> {
    let bad = |what: &str| CliError::Usage(format!("invalid user grid '{s}': {what}"));
    let num = |t: &str| t.trim().parse::<usize>().map_err(|_| bad("not a non-negative integer"));
    let grid = if s.contains(':') {
        let parts: Vec<&str> = s.split(':').collect();
        if parts.len() != 3 {
            return Err(bad("expected start:stop:step"));
        }
        let (start, stop, step) = (num(parts[0])?, num(parts[1])?, num(parts[2])?);
        if step == 0 {
            return Err(bad("step must be positive"));
        }
        (start..=stop).step_by(step).collect()
    } else {
        s.split(',').map(num).collect::<CliResult<Vec<_>>>()?
    };
    if grid.is_empty() {
        return Err(bad("empty"));
    }
    if grid[0] == 0 || grid.windows(2).any(|w| w[1] <= w[0]) {
        return Err(bad("values must be positive and strictly increasing"));
    }
    Ok(grid)
}

/// Parses a comma-separated list of floats.
pub fn parse_floats(s: &str) -> CliResult<Vec<f64>> {
    s.split(',')
        .map(|t| {
            t.trim()
                .parse::<f64>()
                .map_err(|_| CliError::Usage(format!("invalid number '{t}'")))
        })
        .collect()
}

#[derive(Debug, Clone, PartialEq)]
pub enum Value {
    Int(u64),
    Num(f64),
    Text(String),
}

impl From<f64> for Value {
    fn from(x: f64) -> Self {
        Value::Num(x)
    }
}

impl From<usize> for Value {
    fn from(x: usize) -> Self {
        Value::Int(x as u64)
    }
}

impl From<u64> for Value {
    fn from(x: u64) -> Self {
        Value::Int(x)
    }
}

impl From<&str> for Value {
    fn from(x: &str) -> Self {
        Value::Text(x.to_string())
    }
}

/// `x` with 12 significant digits, fixed notation for moderate exponents.
pub fn format_number(x: f64) -> String {
    if x == 0.0 {
        return "0".into();
    }
    if !x.is_finite() {
        return if x.is_nan() {
            "nan".into()
        } else if x > 0.0 {
            "inf".into()
        } else {
            "-inf".into()
        };
    }
    let sci = format!("{x:.11e}");
    let (mantissa, exp) = sci.split_once('e').expect("scientific format");
    let exp: i32 = exp.parse().expect("integer exponent");
    if (-5..12).contains(&exp) {
        let decimals = (11 - exp) as usize;
        let fixed = format!("{x:.decimals$}");
        trim_zeros(&fixed).to_string()
    } else {
        format!("{}e{exp}", trim_zeros(mantissa))
    }
}

fn trim_zeros(s: &str) -> &str {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.')
    } else {
        s
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Table {
    pub header: Vec<String>,
    pub rows: Vec<Vec<Value>>,
}

impl Table {
    pub fn new(header: &[&str]) -> Self {
        Table {
            header: header.iter().map(|s| s.to_string()).collect(),
            rows: Vec::new(),
        }
    }

    pub fn push(&mut self, row: Vec<Value>) {
        assert_eq!(row.len(), self.header.len(), "row width");
        self.rows.push(row);
    }

    pub fn column(&self, name: &str) -> Option<usize> {
        self.header.iter().position(|h| h == name)
    }

    pub fn to_csv(&self) -> String {
        let mut w = csv::Writer::from_writer(Vec::new());
        w.write_record(&self.header).expect("in-memory write");
        for row in &self.rows {
            w.write_record(row.iter().map(|v| match v {
                Value::Int(i) => i.to_string(),
                Value::Num(x) => format_number(*x),
                Value::Text(t) => t.clone(),
            }))
            .expect("in-memory write");
        }
        let bytes = w.into_inner().expect("in-memory flush");
        String::from_utf8(bytes).expect("utf-8 fields")
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Report {
    pub table: Table,
    /// Always true for the data-producing commands.
    pub passed: bool,
}

impl Report {
    pub fn exit_code(&self) -> i32 {
        if self.passed {
            0
        } else {
            1
        }
    }
}

/// Runs the command and returns its table.
pub fn run(spec: &ExperimentSpec) -> CliResult<Report> {
    spec.validate()?;
    let table_only = |table| Report { table, passed: true };
    match spec.command {
        Command::SinrTable => run_sinr_table(spec).map(table_only),
        Command::RateVsUsers => run_rate_vs_users(spec).map(table_only),
        Command::MatchedLoad => run_matched_load(spec).map(table_only),
        Command::VerifyBounds => run_verify(spec),
        Command::VerifyZf => run_verify_zf(spec),
        Command::KsSuite => run_ks_suite(spec),
    }
}

/// Runs the command and writes its CSV to `spec.output_path` or stdout.
pub fn run_and_write(spec: &ExperimentSpec) -> CliResult<Report> {
    let report = run(spec)?;
    let csv = report.table.to_csv();
    match &spec.output_path {
        Some(path) => std::fs::write(path, csv)?,
        None => std::io::stdout().lock().write_all(csv.as_bytes())?,
    }
    Ok(report)
}

fn provenance(spec: &ExperimentSpec) -> [Value; 2] {
    [Value::Int(spec.config.seed), Value::from(spec.trials)]
}

fn push_estimate(row: &mut Vec<Value>, e: Estimate) {
    row.push(e.mean.into());
    row.push(e.stderr.into());
}

/// Mean scheduled SINR per policy: closed forms next to Monte Carlo.
pub fn run_sinr_table(spec: &ExperimentSpec) -> CliResult<Table> {
    let mut table = Table::new(&[
        "n",
        "beta",
        "rho",
        "scn_exact",
        "scn_mc",
        "scn_stderr",
        "zf_exact",
        "zf_lower_bound",
        "zf_mc",
        "zf_stderr",
        "zf2_exact",
        "zf2_upper_bound",
        "zf2_mc",
        "zf2_stderr",
        "zf3_exact",
        "zf3_bound",
        "zf3_mc",
        "zf3_stderr",
        "scp_numeric",
        "scp_mc",
        "scp_stderr",
        "seed",
        "trials",
    ]);
    for &n in &spec.n_grid {
        let cfg = spec.config.with_users(n);
        let nn = n as u64;
        let mut row: Vec<Value> = vec![n.into(), cfg.beta.into(), cfg.rho.into()];
        row.push(analytic::mean_sinr_scn(nn, &cfg).into());
        push_estimate(
            &mut row,
            montecarlo::estimate_mean_sinr(Policy::MaxGain, &cfg.scn(), spec.trials)?,
        );
        row.push(analytic::mean_sinr_zf(nn, &cfg).into());
        row.push(analytic::zf_lower_bound(nn, &cfg).into());
        push_estimate(
            &mut row,
            montecarlo::estimate_mean_sinr(Policy::ZfOptimal, &cfg, spec.trials)?,
        );
        row.push(analytic::mean_sinr_zf2(nn, &cfg).into());
        row.push(analytic::zf2_upper_bound(nn, &cfg).into());
        push_estimate(
            &mut row,
            montecarlo::estimate_mean_sinr(Policy::MaxGain, &cfg, spec.trials)?,
        );
        row.push(analytic::mean_sinr_zf3(nn, &cfg).into());
        row.push(analytic::bound_zf3(&cfg).into());
        push_estimate(
            &mut row,
            montecarlo::estimate_mean_sinr(Policy::ZfRatio, &cfg, spec.trials)?,
        );
        row.push(analytic::mean_sinr_numeric(DistKind::Scp, n as f64, &cfg)?.into());
        push_estimate(
            &mut row,
            montecarlo::estimate_mean_sinr(Policy::ScpSinr, &cfg, spec.trials)?,
        );
        row.extend(provenance(spec));
        table.push(row);
    }
    Ok(table)
}

/// Per-cell sum-rate of SCN, ZF and SCP with the same number of users.
pub fn run_rate_vs_users(spec: &ExperimentSpec) -> CliResult<Table> {
    let mut table = Table::new(&[
        "n",
        "c_scn_analytic",
        "c_scn_mc",
        "c_scn_stderr",
        "c_zf_analytic",
        "c_zf_mc",
        "c_zf_stderr",
        "c_scp_analytic",
        "c_scp_mc",
        "c_scp_stderr",
        "delta_c_analytic",
        "delta_c_mc",
        "delta_c_estimate",
        "seed",
        "trials",
    ]);
    for &n in &spec.n_grid {
        let cfg = spec.config.with_users(n);
        let y = n as f64;
        let scn_a = analytic::sum_rate_numeric(DistKind::Scn, y, &cfg)?;
        let zf_a = analytic::sum_rate_numeric(DistKind::Zf, y, &cfg)?;
        let scp_a = analytic::sum_rate_numeric(DistKind::Scp, y, &cfg)?;
        let scn = montecarlo::estimate_sum_rate(Policy::MaxGain, &cfg.scn(), spec.trials)?;
        let zf = montecarlo::estimate_sum_rate(Policy::ZfOptimal, &cfg, spec.trials)?;
        let scp = montecarlo::estimate_sum_rate(Policy::ScpSinr, &cfg, spec.trials)?;
        // the estimate is defined for n > 1 only
        let estimate = match (n > 1, cfg.beta > 0.0) {
            (true, true) => analytic::delta_c_estimate(y, &cfg)?.into(),
            (true, false) => 0.0.into(),
            (false, _) => Value::Text(String::new()),
        };
        let mut row: Vec<Value> = vec![n.into(), scn_a.into()];
        push_estimate(&mut row, scn);
        row.push(zf_a.into());
        push_estimate(&mut row, zf);
        row.push(scp_a.into());
        push_estimate(&mut row, scp);
        row.extend([(zf_a - scp_a).into(), (zf.mean - scp.mean).into(), estimate]);
        row.extend(provenance(spec));
        table.push(row);
    }
    Ok(table)
}

/// Round half up.
pub fn round_users(x: f64) -> usize {
    (x + 0.5).floor() as usize
}

/// SCN with `n` users against ZF with `n (1 + beta^2)` and SCP with
/// `n (1 + beta^2 rho ln n)` users, the loads at which all three should
/// deliver about the same rate.
pub fn run_matched_load(spec: &ExperimentSpec) -> CliResult<Table> {
    let mut table = Table::new(&[
        "n",
        "n_zf_target",
        "n_zf",
        "n_scp_target",
        "n_scp",
        "c_scn_analytic",
        "c_scn_mc",
        "c_scn_stderr",
        "c_zf_analytic",
        "c_zf_mc",
        "c_zf_stderr",
        "c_scp_analytic",
        "c_scp_mc",
        "c_scp_stderr",
        "seed",
        "trials",
    ]);
    for &n in &spec.n_grid {
        let cfg = spec.config.with_users(n);
        let zf_target = analytic::equivalent_users(DistKind::Zf, n as f64, &cfg)?;
        let scp_target = analytic::equivalent_users(DistKind::Scp, n as f64, &cfg)?;
        let (n_zf, n_scp) = (round_users(zf_target), round_users(scp_target));
        let scn_cfg = cfg.scn();
        let zf_cfg = cfg.with_users(n_zf);
        let scp_cfg = cfg.with_users(n_scp);
        let mut row: Vec<Value> = vec![n.into(), zf_target.into(), n_zf.into(), scp_target.into(), n_scp.into()];
        row.push(analytic::sum_rate_numeric(DistKind::Scn, n as f64, &scn_cfg)?.into());
        push_estimate(
            &mut row,
            montecarlo::estimate_sum_rate(Policy::MaxGain, &scn_cfg, spec.trials)?,
        );
        row.push(analytic::sum_rate_numeric(DistKind::Zf, n_zf as f64, &zf_cfg)?.into());
        push_estimate(
            &mut row,
            montecarlo::estimate_sum_rate(Policy::ZfOptimal, &zf_cfg, spec.trials)?,
        );
        row.push(analytic::sum_rate_numeric(DistKind::Scp, n_scp as f64, &scp_cfg)?.into());
        push_estimate(
            &mut row,
            montecarlo::estimate_sum_rate(Policy::ScpSinr, &scp_cfg, spec.trials)?,
        );
        row.extend(provenance(spec));
        table.push(row);
    }
    Ok(table)
}

const VERIFY_HEADER: [&str; 9] = ["check", "n", "beta", "rho", "lhs", "rhs", "margin", "status", "seed"];

/// Margin below which a quadrature-based inequality is not counted as strict.
fn strict_tolerance(rhs: f64) -> f64 {
    1e-8 * rhs.abs().max(1.0)
}

struct Checks {
    table: Table,
    passed: bool,
}

impl Checks {
    fn new() -> Self {
        let mut header = VERIFY_HEADER.to_vec();
        header.push("trials");
        Checks {
            table: Table::new(&header),
            passed: true,
        }
    }

    /// Records `lhs < rhs`, strict by more than `tol`.
    #[allow(clippy::too_many_arguments)]
    fn less(&mut self, check: &str, n: usize, cfg: &SystemConfig, lhs: f64, rhs: f64, tol: f64, spec: &ExperimentSpec) {
        self.less_with_margin(check, n, cfg, lhs, rhs, rhs - lhs, tol, spec);
    }

    #[allow(clippy::too_many_arguments)]
    fn less_with_margin(
        &mut self,
        check: &str,
        n: usize,
        cfg: &SystemConfig,
        lhs: f64,
        rhs: f64,
        margin: f64,
        tol: f64,
        spec: &ExperimentSpec,
    ) {
        let ok = margin > tol;
        self.passed &= ok;
        let mut row: Vec<Value> = vec![
            check.into(),
            n.into(),
            cfg.beta.into(),
            cfg.rho.into(),
            lhs.into(),
            rhs.into(),
            margin.into(),
            if ok { "PASS" } else { "FAIL" }.into(),
        ];
        row.extend(provenance(spec));
        self.table.push(row);
    }

    fn into_report(self) -> Report {
        Report {
            table: self.table,
            passed: self.passed,
        }
    }
}

/// The inequality suite over `n_grid x betas x rhos`, plus the Monte Carlo
/// check of the gain-ratio bound at n in {1, 10, 100, 1000}.
pub fn run_verify(spec: &ExperimentSpec) -> CliResult<Report> {
    let mut checks = Checks::new();
    inequalities(&mut checks, spec)?;
    zf3_bound(&mut checks, spec, &[1, 10, 100, 1000])?;
    Ok(checks.into_report())
}

/// Quadrature-only part of [`run_verify`].
pub fn verify_inequalities(spec: &ExperimentSpec) -> CliResult<Report> {
    let mut checks = Checks::new();
    inequalities(&mut checks, spec)?;
    Ok(checks.into_report())
}

/// `mean + 4 stderr < 2 rho` for the gain-ratio scheduler at each `n`,
/// next to the exact mean.
pub fn verify_zf3(spec: &ExperimentSpec, users: &[usize]) -> CliResult<Report> {
    let mut checks = Checks::new();
    zf3_bound(&mut checks, spec, users)?;
    Ok(checks.into_report())
}

fn inequalities(checks: &mut Checks, spec: &ExperimentSpec) -> CliResult<()> {
    for &rho in &spec.rhos {
        for &beta in &spec.betas {
            let base = spec.config.with_beta(beta).with_rho(rho);
            for &n in &spec.n_grid {
                verify_point(checks, &base.with_users(n), spec)?;
            }
        }
    }
    Ok(())
}

fn zf3_bound(checks: &mut Checks, spec: &ExperimentSpec, users: &[usize]) -> CliResult<()> {
    for &n in users {
        let cfg = spec.config.with_users(n);
        let bound = analytic::bound_zf3(&cfg);
        checks.less(
            "zf3_exact_bound",
            n,
            &cfg,
            analytic::mean_sinr_zf3(n as u64, &cfg),
            bound,
            0.0,
            spec,
        );
        let e = montecarlo::estimate_mean_sinr(Policy::ZfRatio, &cfg, spec.trials)?;
        checks.less("zf3_mc_bound", n, &cfg, e.mean + 4.0 * e.stderr, bound, 0.0, spec);
    }
    Ok(())
}

fn verify_point(checks: &mut Checks, cfg: &SystemConfig, spec: &ExperimentSpec) -> CliResult<()> {
    let n = cfg.users_per_cell;
    let nf = n as f64;
    let nn = n as u64;
    let b2 = cfg.beta2();
    let scn = analytic::mean_sinr_scn(nn, cfg);

    let zf_low = analytic::mean_sinr_numeric(DistKind::Zf, nf * (1.0 + b2), cfg)?;
    checks.less("zf_load_below_scn", n, cfg, zf_low, scn, strict_tolerance(scn), spec);
    let zf_high = analytic::mean_sinr_numeric(DistKind::Zf, nf * (1.0 + (nf + 1.0) / nf * b2), cfg)?;
    checks.less("zf_load_above_scn", n, cfg, scn, zf_high, strict_tolerance(scn), spec);

    let scp_load = analytic::mean_sinr_numeric(DistKind::Scp, nf * (1.0 + b2 * cfg.rho * nf.ln()), cfg)?;
    checks.less("scp_load_below_scn", n, cfg, scp_load, scn, strict_tolerance(scn), spec);

    let bound = analytic::zf_lower_bound(nn, cfg);
    let exact = analytic::mean_sinr_zf(nn, cfg);
    let gap = analytic::zf_lower_bound_gap(nn, cfg);
    checks.less_with_margin("zf_lower_bound", n, cfg, bound, exact, gap, 0.0, spec);

    let low = (cfg.rho * nf.ln()).ln_1p() / std::f64::consts::LN_2;
    let high = (cfg.rho * crate::specfun::harmonic(nf)?).ln_1p() / std::f64::consts::LN_2;
    for (check, kind, y) in [
        ("rate_bracket_zf", DistKind::Zf, nf * (1.0 + b2)),
        ("rate_bracket_scp", DistKind::Scp, nf * (1.0 + b2 * cfg.rho * nf.ln())),
    ] {
        let rate = analytic::sum_rate_numeric(kind, y, cfg)?;
        checks.less(&format!("{check}_low"), n, cfg, low, rate, strict_tolerance(rate), spec);
        checks.less(
            &format!("{check}_high"),
            n,
            cfg,
            rate,
            high,
            strict_tolerance(rate),
            spec,
        );
    }
    Ok(())
}

/// End-to-end zero-forcing audit: simulates `trials / (cells - 1)` slots
/// (at least one) and compares the pooled decoded SINR of interior cells to
/// the scalar model with a two-sample KS test.
pub fn run_verify_zf(spec: &ExperimentSpec) -> CliResult<Report> {
    let mut checks = Checks::new();
    for &n in &spec.n_grid {
        let cfg = spec.config.with_users(n);
        let slots = (spec.trials / (cfg.num_cells - 1)).max(1);
        let mut max_residual: f64 = 0.0;
        let mut max_interference: f64 = 0.0;
        let mut max_row: f64 = 0.0;
        let mut max_sinr_error: f64 = 0.0;
        for s in 0..slots {
            let slot = montecarlo::end_to_end_slot(RngStream::new(cfg.seed, s as u64), &cfg)?;
            max_row = slot.row_power.iter().copied().fold(max_row, f64::max);
            for c in slot.cells.iter().filter(|c| c.interior && c.cancellable) {
                max_residual = max_residual.max(c.relative_residual);
                let signal = c.signal_gain.norm_sqr();
                if signal > 0.0 {
                    max_interference = max_interference.max(c.interference_power / signal);
                    max_sinr_error = max_sinr_error.max((c.sinr - c.scalar_sinr).abs() / c.scalar_sinr);
                }
            }
        }
        checks.less("zf_relative_residual", n, &cfg, max_residual, 1e-12, 0.0, spec);
        checks.less(
            "zf_interference_over_signal",
            n,
            &cfg,
            max_interference,
            1e-20,
            0.0,
            spec,
        );
        checks.less("zf_sinr_relative_error", n, &cfg, max_sinr_error, 1e-10, 0.0, spec);
        checks.less("row_power_over_one", n, &cfg, max_row - 1.0, 1e-12, 0.0, spec);

        let matrix = montecarlo::matrix_path_sinr_samples(&cfg, spec.trials)?;
        let scalar_cfg = cfg.with_seed(derive_seed(cfg.seed, 1));
        let scalar = montecarlo::sample_post_scheduling_sinr(Policy::ZfOptimal, &scalar_cfg, spec.trials)?;
        let d = montecarlo::ks_two_sample(&matrix, &scalar);
        let crit = montecarlo::ks_two_sample_critical_value(matrix.len(), scalar.len());
        checks.less("ks_matrix_vs_scalar", n, &cfg, d, crit, 0.0, spec);
    }
    Ok(checks.into_report())
}

/// One-sample KS tests of each family's scheduled SINR against `F^n`, and
/// of SCP samples mapped through `x + rho ln(1 + beta^2 x)` against the
/// SCN law.
pub fn run_ks_suite(spec: &ExperimentSpec) -> CliResult<Report> {
    let mut checks = Checks::new();
    for &n in &spec.n_grid {
        let cfg = spec.config.with_users(n);
        let y = n as f64;
        let crit = montecarlo::ks_critical_value(spec.trials);
        let families = [
            ("ks_scn", Policy::MaxGain, DistKind::Scn, cfg.scn()),
            ("ks_scp", Policy::ScpSinr, DistKind::Scp, cfg),
            ("ks_zf", Policy::ZfOptimal, DistKind::Zf, cfg),
        ];
        for (tag, (check, policy, kind, c)) in families.into_iter().enumerate() {
            let c = c.with_seed(derive_seed(cfg.seed, tag as u64));
            let samples = montecarlo::sample_post_scheduling_sinr(policy, &c, spec.trials)?;
            let d = montecarlo::ks_statistic(&samples, |x| analytic::cdf_pow(kind, x, y, &c).unwrap_or(f64::NAN));
            checks.less(check, n, &c, d, crit, 0.0, spec);
        }
        if cfg.beta > 0.0 {
            let c = cfg.with_seed(derive_seed(cfg.seed, 3));
            let mapped: Vec<f64> = montecarlo::sample_post_scheduling_sinr(Policy::ScpSinr, &c, spec.trials)?
                .into_iter()
                .map(|x| analytic::scp_to_scn_transform(x, &c))
                .collect();
            let d = montecarlo::ks_statistic(&mapped, |x| {
                analytic::cdf_pow(DistKind::Scn, x, y, &c).unwrap_or(f64::NAN)
            });
            checks.less("ks_scp_mapped_to_scn", n, &c, d, crit, 0.0, spec);
        }
    }
    Ok(checks.into_report())
}
