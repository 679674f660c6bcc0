//! Command-line surface. Every command renders into an in-memory document so
//! the binary only has to write files and pick the exit code.

use std::fmt::Write as _;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use rayon::prelude::*;
use serde::Serialize;
use serde_json::{json, Value};

use crate::bandlim::BandLimitedTestFn;
use crate::bounds::{error_bound_rhs, BoundConstants, BoundInputs};
use crate::error::Error;
use crate::interp::{max_error_on_grid, Interpolant};
use crate::kernel::Kernel;
use crate::output::{fmt_num, svg_loglog};
use crate::shape::{default_sweep, log_grid, MnProblem};
use crate::simplex::{NodeSet, Point, Simplex};

pub const ARTIFACT: &str = env!("CARGO_PKG_NAME");
pub const VERSION: &str = env!("CARGO_PKG_VERSION");

#[derive(Debug, Clone, Parser)]
#[command(
    name = "rbf-shape",
    version,
    about = "Shape parameter selection for (inverse) multiquadric RBF interpolation"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Subcommand)]
pub enum Command {
    /// Bound constants rho, Delta_0, C, delta_0 and lambda'.
    Constants(Flags),
    /// Evenly spaced lattice points on a simplex (CSV).
    Points(Flags),
    /// Fit an interpolant to a node/value CSV and print its coefficients.
    Fit(Flags),
    /// Sample the MN curve on a log grid.
    MnCurve(Flags),
    /// Locate the minimizer of MN.
    OptimalC(Flags),
    /// Interpolate a band-limited test function and compare with the bound.
    VerifyBound(Flags),
    /// Empirical error, bound and MN side by side over a log grid of c.
    Sweep(Flags),
}

impl Command {
    pub fn name(&self) -> &'static str {
        match self {
            Command::Constants(_) => "constants",
            Command::Points(_) => "points",
            Command::Fit(_) => "fit",
            Command::MnCurve(_) => "mn-curve",
            Command::OptimalC(_) => "optimal-c",
            Command::VerifyBound(_) => "verify-bound",
            Command::Sweep(_) => "sweep",
        }
    }

    pub fn flags(&self) -> &Flags {
        match self {
            Command::Constants(f)
            | Command::Points(f)
            | Command::Fit(f)
            | Command::MnCurve(f)
            | Command::OptimalC(f)
            | Command::VerifyBound(f)
            | Command::Sweep(f) => f,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Csv,
    Json,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum TestFn {
    Sinc,
}

#[derive(Debug, Clone, Args)]
pub struct Flags {
    /// Space dimension.
    #[arg(long)]
    pub n: Option<usize>,
    /// Kernel exponent (not an even nonnegative integer).
    #[arg(long, allow_negative_numbers = true)]
    pub beta: Option<f64>,
    #[arg(long, default_value_t = 1.0)]
    pub b0: f64,
    /// Band radius of the data.
    #[arg(long, default_value_t = 1.0)]
    pub sigma: f64,
    #[arg(long)]
    pub delta: Option<f64>,
    /// Shape parameter(s), comma separated where a list is accepted.
    #[arg(long, value_delimiter = ',')]
    pub c: Vec<f64>,
    #[arg(long)]
    pub c_min: Option<f64>,
    #[arg(long)]
    pub c_max: Option<f64>,
    /// Number of log-spaced samples of c.
    #[arg(long, default_value_t = 400)]
    pub points: usize,
    #[arg(long, value_enum)]
    pub format: Option<Format>,
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long)]
    pub svg: Option<PathBuf>,
    /// The constant S(m, n) of the multiquadric native-norm estimate.
    #[arg(long, default_value_t = 1.0)]
    pub s_mn: f64,
    /// Per-axis band half-width of the sinc test function (default sigma / sqrt(n)).
    #[arg(long)]
    pub sigma0: Option<f64>,
    #[arg(long, value_enum, default_value_t = TestFn::Sinc)]
    pub testfn: TestFn,
    /// Lattice degree; derived from --delta when omitted.
    #[arg(long)]
    pub l: Option<usize>,
    /// Degree of the evaluation lattice for empirical errors (at least 4l).
    #[arg(long)]
    pub grid_degree: Option<usize>,
    /// Multiplier of the test function.
    #[arg(long, default_value_t = 1.0, allow_negative_numbers = true)]
    pub amplitude: f64,
    /// Simplex diameter for `points` (default: 2/(3C) when --delta is given, else unit corner simplex).
    #[arg(long)]
    pub diameter: Option<f64>,
    /// Node/value CSV for `fit`: columns x1..xn and y, optional index and k columns.
    #[arg(long)]
    pub input: Option<PathBuf>,
}

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error(transparent)]
    Core(#[from] Error),
    #[error("{0}")]
    Input(String),
    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Core(Error::Unsupported { .. }) => 3,
            CliError::Core(Error::Conditioning { .. }) => 4,
            CliError::Core(_) | CliError::Input(_) => 2,
            CliError::Io(_) => 1,
        }
    }
}

type CliResult<T> = std::result::Result<T, CliError>;

/// Rendered result of one invocation.
#[derive(Debug, Clone)]
pub struct CommandOutput {
    pub body: String,
    pub svg: Option<String>,
    pub exit_code: i32,
}

impl CommandOutput {
    fn ok(body: String) -> Self {
        CommandOutput {
            body,
            svg: None,
            exit_code: 0,
        }
    }
}

/// Fully resolved configuration echoed into every output.
#[derive(Debug, Clone, Serialize)]
pub struct RunConfig {
    pub subcommand: &'static str,
    pub n: Option<usize>,
    pub beta: Option<f64>,
    pub b0: f64,
    pub sigma: f64,
    pub delta: Option<f64>,
    pub l: Option<usize>,
    pub c: Vec<f64>,
    pub c_min: Option<f64>,
    pub c_max: Option<f64>,
    pub points: usize,
    pub format: Format,
    pub s_mn: f64,
    pub testfn: TestFn,
    pub sigma0: Option<f64>,
    pub amplitude: f64,
    pub grid_degree: Option<usize>,
    pub diameter: Option<f64>,
    pub input: Option<String>,
    pub deterministic: bool,
}

impl RunConfig {
    fn new(cmd: &Command, format: Format) -> Self {
        let f = cmd.flags();
        RunConfig {
            subcommand: cmd.name(),
            n: f.n,
            beta: f.beta,
            b0: f.b0,
            sigma: f.sigma,
            delta: f.delta,
            l: f.l,
            c: f.c.clone(),
            c_min: f.c_min,
            c_max: f.c_max,
            points: f.points,
            format,
            s_mn: f.s_mn,
            testfn: f.testfn,
            sigma0: f.sigma0,
            amplitude: f.amplitude,
            grid_degree: f.grid_degree,
            diameter: f.diameter,
            input: f.input.as_ref().map(|p| p.display().to_string()),
            deterministic: true,
        }
    }
}

fn artifact() -> Value {
    json!({ "name": ARTIFACT, "version": VERSION })
}

fn need<T: Copy>(v: Option<T>, flag: &str, cmd: &str) -> CliResult<T> {
    v.ok_or_else(|| CliError::Input(format!("`{cmd}` requires --{flag}")))
}

fn positive(v: f64, flag: &str) -> CliResult<f64> {
    if v > 0.0 && v.is_finite() {
        Ok(v)
    } else {
        Err(CliError::Input(format!(
            "--{flag} must be positive, got {v}"
        )))
    }
}

fn to_json(v: &Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("serializable");
    s.push('\n');
    s
}

fn csv_preamble(cfg: &RunConfig, case: Option<&str>) -> String {
    let mut s = String::new();
    writeln!(s, "# {ARTIFACT} {VERSION}").unwrap();
    writeln!(
        s,
        "# config: {}",
        serde_json::to_string(cfg).expect("serializable")
    )
    .unwrap();
    writeln!(s, "# case: {}", case.unwrap_or("none")).unwrap();
    s
}

/// Runs one parsed invocation.
pub fn execute(cli: &Cli) -> CliResult<CommandOutput> {
    let cmd = &cli.command;
    match cmd {
        Command::Constants(f) => cmd_constants(cmd, f),
        Command::Points(f) => cmd_points(cmd, f),
        Command::Fit(f) => cmd_fit(cmd, f),
        Command::MnCurve(f) => cmd_mn_curve(cmd, f),
        Command::OptimalC(f) => cmd_optimal_c(cmd, f),
        Command::VerifyBound(f) => cmd_verify_bound(cmd, f),
        Command::Sweep(f) => cmd_sweep(cmd, f),
    }
}

fn json_only(f: &Flags, cmd: &str) -> CliResult<Format> {
    match f.format.unwrap_or(Format::Json) {
        Format::Json => Ok(Format::Json),
        Format::Csv => Err(CliError::Input(format!("`{cmd}` only produces JSON"))),
    }
}

/// Lattice degree: explicit `--l`, else the smallest admissible for `--delta`.
fn resolve_l(f: &Flags, constants: Option<&BoundConstants>, cmd: &str) -> CliResult<usize> {
    match (f.l, f.delta, constants) {
        (Some(0), _, _) => Err(CliError::Input("--l must be at least 1".into())),
        (Some(l), _, _) => Ok(l),
        (None, Some(delta), Some(k)) => Ok(k.admissible_l(delta)?),
        _ => Err(CliError::Input(format!("`{cmd}` requires --l or --delta"))),
    }
}

fn case_tag(n: usize, beta: f64, sigma: f64, l: usize) -> Option<&'static str> {
    MnProblem::new(n, beta, sigma, l)
        .ok()
        .map(|p| p.case.as_str())
}

fn cmd_constants(cmd: &Command, f: &Flags) -> CliResult<CommandOutput> {
    let name = cmd.name();
    let format = json_only(f, name)?;
    let n = need(f.n, "n", name)?;
    let beta = need(f.beta, "beta", name)?;
    let k = BoundConstants::new(n, beta, f.b0)?;
    let mut cfg = RunConfig::new(cmd, format);
    let l = match f.delta {
        Some(_) => Some(resolve_l(f, Some(&k), name)?),
        None => f.l,
    };
    cfg.l = l;
    let case = l.and_then(|l| case_tag(n, beta, f.sigma, l));
    let mut doc = serde_json::to_value(k).expect("serializable");
    let obj = doc.as_object_mut().expect("object");
    obj.insert("artifact".into(), artifact());
    obj.insert("config".into(), serde_json::to_value(&cfg).unwrap());
    obj.insert("case".into(), json!(case));
    if let Some(delta) = f.delta {
        let (lo, hi) = k.l_interval(delta);
        obj.insert("l_interval".into(), json!([lo, hi]));
    }
    let (rmin, rmax) = k.diameter_interval();
    obj.insert("diameter_interval".into(), json!([rmin, rmax]));
    Ok(CommandOutput::ok(to_json(&doc)))
}

fn cmd_points(cmd: &Command, f: &Flags) -> CliResult<CommandOutput> {
    let name = cmd.name();
    let format = f.format.unwrap_or(Format::Csv);
    let n = need(f.n, "n", name)?;
    let constants = match (f.beta, f.delta) {
        (Some(beta), Some(_)) => Some(BoundConstants::new(n, beta, f.b0)?),
        _ => None,
    };
    let l = resolve_l(f, constants.as_ref(), name)?;
    let diameter = match (f.diameter, &constants) {
        (Some(d), _) => Some(positive(d, "diameter")?),
        (None, Some(k)) => Some(k.diameter_interval().1),
        (None, None) => None,
    };
    let mut simplex = Simplex::corner(n)?;
    if let Some(d) = diameter {
        simplex = simplex.scale_to_diameter(d)?;
    }
    let nodes = simplex.evenly_spaced_points(l)?;
    let mut cfg = RunConfig::new(cmd, format);
    cfg.l = Some(l);
    cfg.diameter = Some(simplex.diameter());
    let case = f.beta.and_then(|b| case_tag(n, b, f.sigma, l));

    let body = match format {
        Format::Csv => {
            let mut s = csv_preamble(&cfg, case);
            let mut header = vec!["index".to_string()];
            header.extend((1..=n).map(|i| format!("x{i}")));
            header.extend((1..=n + 1).map(|i| format!("k{i}")));
            writeln!(s, "{}", header.join(",")).unwrap();
            for (i, (p, idx)) in nodes.points.iter().zip(&nodes.indices).enumerate() {
                let mut row = vec![i.to_string()];
                row.extend(p.iter().map(|&x| fmt_num(x)));
                row.extend(idx.k.iter().map(|k| k.to_string()));
                writeln!(s, "{}", row.join(",")).unwrap();
            }
            s
        }
        Format::Json => to_json(&json!({
            "artifact": artifact(),
            "config": cfg,
            "case": case,
            "degree": l,
            "count": nodes.len(),
            "points": nodes.points,
            "indices": nodes.indices.iter().map(|i| &i.k).collect::<Vec<_>>(),
        })),
    };
    Ok(CommandOutput::ok(body))
}

/// Centers, values and (when `k` columns are present) the lattice degree.
pub fn read_node_csv(text: &str) -> CliResult<(Vec<Point>, Vec<f64>, Option<usize>)> {
    let mut rdr = csv::ReaderBuilder::new()
        .comment(Some(b'#'))
        .trim(csv::Trim::All)
        .from_reader(text.as_bytes());
    let headers = rdr
        .headers()
        .map_err(|e| CliError::Input(format!("bad CSV header: {e}")))?
        .clone();
    let column = |name: &str| headers.iter().position(|h| h == name);
    let xcols: Vec<usize> = (1..)
        .map(|i| column(&format!("x{i}")))
        .take_while(Option::is_some)
        .flatten()
        .collect();
    let kcols: Vec<usize> = (1..)
        .map(|i| column(&format!("k{i}")))
        .take_while(Option::is_some)
        .flatten()
        .collect();
    let ycol = column("y").ok_or_else(|| CliError::Input("CSV needs a `y` column".into()))?;
    if xcols.is_empty() {
        return Err(CliError::Input("CSV needs columns x1..xn".into()));
    }
    let mut centers = Vec::new();
    let mut values = Vec::new();
    let mut degree: Option<usize> = None;
    for (line, rec) in rdr.records().enumerate() {
        let rec = rec.map_err(|e| CliError::Input(format!("bad CSV row {}: {e}", line + 1)))?;
        let num = |i: usize| -> CliResult<f64> {
            rec.get(i)
                .and_then(|s| s.parse::<f64>().ok())
                .ok_or_else(|| {
                    CliError::Input(format!(
                        "row {}: column {} is not a number",
                        line + 1,
                        i + 1
                    ))
                })
        };
        centers.push(
            xcols
                .iter()
                .map(|&i| num(i))
                .collect::<CliResult<Point>>()?,
        );
        values.push(num(ycol)?);
        if !kcols.is_empty() {
            let sum = kcols
                .iter()
                .map(|&i| {
                    rec.get(i)
                        .and_then(|s| s.parse::<usize>().ok())
                        .ok_or_else(|| CliError::Input(format!("row {}: bad k entry", line + 1)))
                })
                .sum::<CliResult<usize>>()?;
            match degree {
                None => degree = Some(sum),
                Some(d) if d != sum => {
                    return Err(CliError::Input(format!(
                        "row {}: k entries sum to {sum}, earlier rows to {d}",
                        line + 1
                    )))
                }
                _ => {}
            }
        }
    }
    Ok((centers, values, degree))
}

fn cmd_fit(cmd: &Command, f: &Flags) -> CliResult<CommandOutput> {
    let name = cmd.name();
    let format = json_only(f, name)?;
    let beta = need(f.beta, "beta", name)?;
    let c = match f.c.as_slice() {
        [c] => *c,
        _ => return Err(CliError::Input("`fit` requires exactly one --c".into())),
    };
    let path = f
        .input
        .as_ref()
        .ok_or_else(|| CliError::Input("`fit` requires --input".into()))?;
    let text = std::fs::read_to_string(path)?;
    let (centers, values, degree) = read_node_csv(&text)?;
    let kernel = Kernel::new(beta, c)?;
    let s = Interpolant::fit(kernel, &centers, &values, degree)?;
    let mut cfg = RunConfig::new(cmd, format);
    cfg.n = Some(s.dim());
    cfg.l = degree;
    let case = degree.and_then(|l| case_tag(s.dim(), beta, f.sigma, l));
    Ok(CommandOutput::ok(to_json(&json!({
        "artifact": artifact(),
        "config": cfg,
        "case": case,
        "beta": beta,
        "c": c,
        "m": kernel.m(),
        "n": s.dim(),
        "centers": s.centers,
        "coeffs": s.coeffs,
        "poly_coeffs": s.poly_coeffs,
        "poly_exponents": s.basis.exponents(),
        "cond_estimate": s.cond_estimate,
        "node_residual": s.node_residual,
    }))))
}

fn mn_problem(cmd: &Command, f: &Flags) -> CliResult<(MnProblem, Option<BoundConstants>)> {
    let name = cmd.name();
    let n = need(f.n, "n", name)?;
    let beta = need(f.beta, "beta", name)?;
    let constants = match f.delta {
        Some(_) => Some(BoundConstants::new(n, beta, f.b0)?),
        None => None,
    };
    let l = resolve_l(f, constants.as_ref(), name)?;
    Ok((MnProblem::new(n, beta, f.sigma, l)?, constants))
}

fn sweep_bounds(f: &Flags) -> CliResult<(f64, f64)> {
    let (lo, hi) = default_sweep(positive(f.sigma, "sigma")?);
    Ok((f.c_min.unwrap_or(lo), f.c_max.unwrap_or(hi)))
}

fn cmd_mn_curve(cmd: &Command, f: &Flags) -> CliResult<CommandOutput> {
    let format = f.format.unwrap_or(Format::Csv);
    let (problem, _) = mn_problem(cmd, f)?;
    let (lo, hi) = sweep_bounds(f)?;
    let grid = log_grid(lo, hi, f.points)?;
    let curve = problem.mn_curve(&grid)?;
    let mut cfg = RunConfig::new(cmd, format);
    cfg.l = Some(problem.l);
    cfg.c_min = Some(lo);
    cfg.c_max = Some(hi);
    let case = problem.case.as_str();

    let body = match format {
        Format::Csv => {
            let mut s = csv_preamble(&cfg, Some(case));
            s.push_str("c,mn_value\n");
            for (c, v) in &curve {
                writeln!(s, "{},{}", fmt_num(*c), fmt_num(*v)).unwrap();
            }
            s
        }
        Format::Json => to_json(&json!({
            "artifact": artifact(),
            "config": cfg,
            "case": case,
            "rows": curve.iter().map(|(c, v)| json!({"c": c, "mn_value": v})).collect::<Vec<_>>(),
        })),
    };
    let svg = f.svg.as_ref().map(|_| {
        let marker = problem
            .optimal_c(lo, hi)
            .ok()
            .map(|r| (r.optimal_c, r.mn_at_optimum));
        svg_loglog(
            &curve,
            marker,
            &format!(
                "MN curve: case {case}, n = {}, beta = {}, sigma = {}, l = {}",
                problem.n, problem.beta, problem.sigma, problem.l
            ),
        )
    });
    Ok(CommandOutput {
        body,
        svg,
        exit_code: 0,
    })
}

fn cmd_optimal_c(cmd: &Command, f: &Flags) -> CliResult<CommandOutput> {
    let format = json_only(f, cmd.name())?;
    let (problem, constants) = mn_problem(cmd, f)?;
    let (lo, hi) = sweep_bounds(f)?;
    let result = problem.optimal_c(lo, hi)?;
    let mut cfg = RunConfig::new(cmd, format);
    cfg.l = Some(problem.l);
    cfg.c_min = Some(lo);
    cfg.c_max = Some(hi);

    // bound per unit L2 norm at the selected c, when delta fixes the setting
    let bound = match (constants, f.delta) {
        (Some(k), Some(delta)) if k.l_is_admissible(delta, problem.l) => {
            let inp = BoundInputs {
                n: problem.n,
                beta: problem.beta,
                c: result.optimal_c,
                sigma: problem.sigma,
                l2_norm: 1.0,
                s_mn: positive(f.s_mn, "s-mn")?,
            };
            Some(error_bound_rhs(&k, &inp, delta, problem.l)?)
        }
        _ => None,
    };
    let mut doc = serde_json::to_value(&result).expect("serializable");
    let obj = doc.as_object_mut().expect("object");
    obj.insert("artifact".into(), artifact());
    obj.insert("config".into(), serde_json::to_value(&cfg).unwrap());
    obj.insert("exponent".into(), json!(problem.exponent));
    obj.insert("bound_rhs_per_unit_norm".into(), json!(bound));
    if problem.beta > 0.0 {
        obj.insert(
            "note".into(),
            json!("absolute bound values for beta > 0 are relative to the configured S(m, n)"),
        );
    }
    Ok(CommandOutput::ok(to_json(&doc)))
}

/// Everything that stays fixed while `c` varies in a verification run.
#[derive(Debug, Clone)]
pub struct VerifySetup {
    pub constants: BoundConstants,
    pub delta: f64,
    pub l: usize,
    pub sigma: f64,
    pub s_mn: f64,
    pub nodes: NodeSet,
    pub values: Vec<f64>,
    pub testfn: BandLimitedTestFn,
    pub grid: Vec<Point>,
    pub grid_degree: usize,
    pub problem: MnProblem,
}

impl VerifySetup {
    pub fn new(f: &Flags, cmd: &str) -> CliResult<Self> {
        let n = need(f.n, "n", cmd)?;
        let beta = need(f.beta, "beta", cmd)?;
        let delta = need(f.delta, "delta", cmd)?;
        let sigma = positive(f.sigma, "sigma")?;
        let s_mn = positive(f.s_mn, "s-mn")?;
        let constants = BoundConstants::new(n, beta, f.b0)?;
        let l = resolve_l(f, Some(&constants), cmd)?;
        if !constants.l_is_admissible(delta, l) {
            let (lo, hi) = constants.l_interval(delta);
            return Err(CliError::Input(format!(
                "--l {l} outside the admissible interval [{lo}, {hi}]"
            )));
        }
        let problem = MnProblem::new(n, beta, sigma, l)?;
        let sigma0 = match f.sigma0 {
            Some(s0) => positive(s0, "sigma0")?,
            None => sigma / (n as f64).sqrt(),
        };
        let testfn = match f.testfn {
            TestFn::Sinc => BandLimitedTestFn::with_amplitude(n, sigma0, f.amplitude)?,
        };
        if testfn.band_radius() > sigma * (1.0 + 1e-12) {
            return Err(CliError::Input(format!(
                "test function band radius {} exceeds sigma = {sigma}",
                testfn.band_radius()
            )));
        }
        let r = constants.diameter_interval().1;
        let simplex = Simplex::corner(n)?.scale_to_diameter(r)?;
        let nodes = simplex.evenly_spaced_points(l)?;
        let values = nodes.points.iter().map(|x| testfn.eval(x)).collect();
        let grid_degree = f.grid_degree.unwrap_or((4 * l).max(32));
        if grid_degree < 4 * l {
            return Err(CliError::Input(format!(
                "--grid-degree must be at least 4l = {}",
                4 * l
            )));
        }
        let grid = simplex.evenly_spaced_points(grid_degree)?.points;
        Ok(VerifySetup {
            constants,
            delta,
            l,
            sigma,
            s_mn,
            nodes,
            values,
            testfn,
            grid,
            grid_degree,
            problem,
        })
    }

    pub fn bound_rhs(&self, c: f64) -> CliResult<f64> {
        let inp = BoundInputs {
            n: self.constants.n,
            beta: self.constants.beta,
            c,
            sigma: self.sigma,
            l2_norm: self.testfn.l2_norm(),
            s_mn: self.s_mn,
        };
        Ok(error_bound_rhs(&self.constants, &inp, self.delta, self.l)?)
    }

    /// Fits at `c` and compares the empirical error with the bound.
    pub fn run(&self, c: f64) -> CliResult<VerifyRun> {
        let kernel = Kernel::new(self.constants.beta, c)?;
        let bound_rhs = self.bound_rhs(c)?;
        let mn_value = self.problem.mn_value(c)?;
        match Interpolant::fit_nodes(kernel, &self.nodes, &self.values) {
            Ok(s) => {
                let err = max_error_on_grid(&s, |x| self.testfn.eval(x), &self.grid);
                let ratio = if bound_rhs > 0.0 {
                    Some(err / bound_rhs)
                } else if err == 0.0 {
                    Some(0.0)
                } else {
                    None
                };
                Ok(VerifyRun {
                    c,
                    status: "ok",
                    empirical_max_error: Some(err),
                    bound_rhs,
                    ratio,
                    holds: Some(err <= bound_rhs),
                    cond_estimate: Some(s.cond_estimate),
                    node_residual: Some(s.node_residual),
                    mn_value,
                    message: None,
                })
            }
            Err(e @ Error::Conditioning { .. }) => Ok(VerifyRun {
                c,
                status: "inconclusive",
                empirical_max_error: None,
                bound_rhs,
                ratio: None,
                holds: None,
                cond_estimate: None,
                node_residual: None,
                mn_value,
                message: Some(e.to_string()),
            }),
            Err(e) => Err(e.into()),
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct VerifyRun {
    pub c: f64,
    pub status: &'static str,
    pub empirical_max_error: Option<f64>,
    pub bound_rhs: f64,
    pub ratio: Option<f64>,
    pub holds: Option<bool>,
    pub cond_estimate: Option<f64>,
    pub node_residual: Option<f64>,
    pub mn_value: f64,
    pub message: Option<String>,
}

fn cmd_verify_bound(cmd: &Command, f: &Flags) -> CliResult<CommandOutput> {
    let format = json_only(f, cmd.name())?;
    if f.c.is_empty() {
        return Err(CliError::Input("`verify-bound` requires --c".into()));
    }
    for &c in &f.c {
        positive(c, "c")?;
    }
    let setup = VerifySetup::new(f, cmd.name())?;
    let runs =
        f.c.par_iter()
            .map(|&c| setup.run(c))
            .collect::<CliResult<Vec<_>>>()?;
    let inconclusive = runs.iter().any(|r| r.holds.is_none());
    let all_hold = runs.iter().all(|r| r.holds != Some(false));
    let mut cfg = RunConfig::new(cmd, format);
    cfg.l = Some(setup.l);
    cfg.sigma0 = Some(setup.testfn.sigma0());
    cfg.grid_degree = Some(setup.grid_degree);
    cfg.diameter = Some(setup.nodes.simplex.diameter());
    let doc = json!({
        "artifact": artifact(),
        "config": cfg,
        "case": setup.problem.case.as_str(),
        "l": setup.l,
        "r": setup.nodes.simplex.diameter(),
        "node_count": setup.nodes.len(),
        "grid_points": setup.grid.len(),
        "sigma0": setup.testfn.sigma0(),
        "l2_norm": setup.testfn.l2_norm(),
        "constants": setup.constants,
        "all_hold": all_hold,
        "inconclusive": inconclusive,
        "runs": runs,
    });
    Ok(CommandOutput {
        body: to_json(&doc),
        svg: None,
        exit_code: if inconclusive { 4 } else { 0 },
    })
}

fn cmd_sweep(cmd: &Command, f: &Flags) -> CliResult<CommandOutput> {
    let format = f.format.unwrap_or(Format::Csv);
    let setup = VerifySetup::new(f, cmd.name())?;
    let (lo, hi) = sweep_bounds(f)?;
    let grid = log_grid(lo, hi, f.points)?;
    // parallel evaluation, results kept in grid order
    let runs = grid
        .par_iter()
        .map(|&c| setup.run(c))
        .collect::<CliResult<Vec<_>>>()?;
    let mut cfg = RunConfig::new(cmd, format);
    cfg.l = Some(setup.l);
    cfg.c_min = Some(lo);
    cfg.c_max = Some(hi);
    cfg.sigma0 = Some(setup.testfn.sigma0());
    cfg.grid_degree = Some(setup.grid_degree);
    cfg.diameter = Some(setup.nodes.simplex.diameter());
    let case = setup.problem.case.as_str();
    let body = match format {
        Format::Csv => {
            let mut s = csv_preamble(&cfg, Some(case));
            s.push_str("c,empirical_max_error,bound_rhs,mn_value\n");
            for r in &runs {
                writeln!(
                    s,
                    "{},{},{},{}",
                    fmt_num(r.c),
                    r.empirical_max_error.map(fmt_num).unwrap_or_default(),
                    fmt_num(r.bound_rhs),
                    fmt_num(r.mn_value)
                )
                .unwrap();
            }
            s
        }
        Format::Json => to_json(&json!({
            "artifact": artifact(),
            "config": cfg,
            "case": case,
            "rows": runs,
        })),
    };
    Ok(CommandOutput::ok(body))
}
