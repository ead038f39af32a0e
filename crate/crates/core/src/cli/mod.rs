//! Command-line surface of `btriple`: build or load a model, run the
//! verification suite, solve Robin problems, locate eigenvalues and emit
//! Dirichlet-to-Neumann data.
//!
//! Exit codes: 0 pass, 1 verified failure (or a spectral point hit), 2 usage or
//! I/O error.

use std::collections::BTreeMap;
use std::path::PathBuf;
use std::time::{SystemTime, UNIX_EPOCH};

use clap::{Parser, Subcommand, ValueEnum};
use num_complex::Complex64;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::extensions::{
    eigenvalue_search, krein_resolvent, restricted_solve, robin_pencil, verify_model, BoundaryParameter,
    Region, SearchOptions, SearchResult, Tolerances, VerifyOptions,
};
use crate::models::{
    convection_diffusion_1d, elliptic_2d, load_model, model_to_json, sturm_liouville_1d, synthetic_pair, Coefficients1D,
    Grid2D,
};
use crate::numcore::{c64, pencil_eigenvalues, pencil_eigenvector, zeros, ComplexMatrix};
use crate::triple::{gamma, Side, TripleModel};

pub const EXIT_PASS: i32 = 0;
pub const EXIT_FAIL: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

#[derive(Parser, Debug)]
#[command(name = "btriple", version, about = "Quasi boundary triples on finite weighted-matrix models")]
pub struct Cli {
    #[command(subcommand)]
    pub command: CommandArg,
    /// Builtin model ("sl1d N=16", "cd1d N=32 b=1", "elliptic2d N=12",
    /// "synthetic n=8 m=3 seed=1") or a path to a model JSON file.
    #[arg(long, global = true)]
    pub model: Option<String>,
    /// Boundary parameter: "theta*I:<z>", "dirichlet", or an inline JSON matrix of [re, im] pairs.
    #[arg(long, global = true, default_value = "theta*I:1", allow_hyphen_values = true)]
    pub param: String,
    /// Spectral parameter(s); repeat the flag or separate with ';'.
    #[arg(long, global = true, allow_hyphen_values = true)]
    pub lambda: Vec<String>,
    /// Search rectangle "re_min,re_max,im_min,im_max".
    #[arg(long, global = true, allow_hyphen_values = true)]
    pub region: Option<String>,
    /// Probe points for verify, separated by ';'.
    #[arg(long, global = true, allow_hyphen_values = true)]
    pub probes: Option<String>,
    /// Tolerance override "name=value" (names as in the report), or a bare value for the identity checks.
    #[arg(long, global = true)]
    pub tol: Vec<String>,
    /// Seed for the synthetic model when the model string has none.
    #[arg(long, global = true)]
    pub seed: Option<u64>,
    /// Output file; standard output when absent.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    #[arg(long, global = true, value_enum)]
    pub format: Option<Format>,
    /// Leave the report timestamp empty.
    #[arg(long, global = true)]
    pub no_timestamp: bool,
    /// Right-hand side for solve: "e<k>" (1-based) or "ones".
    #[arg(long, global = true, default_value = "e1")]
    pub rhs: String,
    /// Robin family for sweep: "start:end:count" or a ';'-separated list.
    #[arg(long, global = true, allow_hyphen_values = true)]
    pub thetas: Option<String>,
}

#[derive(Subcommand, Debug, Clone, Copy, PartialEq, Eq)]
pub enum CommandArg {
    /// Run the full verification suite.
    Verify,
    /// Robin resolvent by direct solve and by the Krein formula.
    Solve,
    /// Birman–Schwinger eigenvalue search with pencil cross-check.
    Eig,
    /// Weyl (Dirichlet-to-Neumann) matrix entries.
    Dtn,
    /// Eigenvalue trajectories over theta*I.
    Sweep,
    /// Write the model as JSON.
    Export,
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Format {
    Json,
    Csv,
}

#[derive(Clone, Debug, PartialEq)]
pub enum ModelSource {
    Builtin { name: String, params: BTreeMap<String, String> },
    Path(PathBuf),
}

#[derive(Clone, Debug, PartialEq)]
pub enum ParamSpec {
    Scalar(Complex64),
    Dirichlet,
    /// Single matrix `B` (so `B1 = I`, `B2 = B`).
    Matrix(ComplexMatrix),
}

/// Validated configuration of one invocation.
#[derive(Clone, Debug)]
pub struct RunConfig {
    pub command: CommandArg,
    pub model: ModelSource,
    pub probes: Vec<Complex64>,
    pub param: ParamSpec,
    pub lambdas: Vec<Complex64>,
    pub region: Option<Region>,
    pub thetas: Vec<Complex64>,
    pub rhs: String,
    pub out: Option<PathBuf>,
    pub format: Format,
    pub tolerances: Tolerances,
    pub seed: Option<u64>,
    pub timestamp: bool,
}

/// Result of a run: exit code, primary output and diagnostics for standard error.
#[derive(Clone, Debug)]
pub struct Outcome {
    pub code: i32,
    pub body: String,
    pub diagnostics: Vec<String>,
}

impl Outcome {
    fn new(code: i32, body: String) -> Self {
        Outcome {
            code,
            body,
            diagnostics: Vec::new(),
        }
    }
}

/// Exit code for an error: spectral refusals are verified failures, the rest usage or I/O.
pub fn exit_code_for(err: &Error) -> i32 {
    match err {
        Error::NotResolventPoint { .. }
        | Error::RestrictedSingular { .. }
        | Error::BirmanSchwinger { .. }
        | Error::Pole { .. }
        | Error::Singular { .. }
        | Error::Convergence(_)
        | Error::Invariant { .. } => EXIT_FAIL,
        _ => EXIT_USAGE,
    }
}

/// One-line machine-readable error record.
pub fn error_record(err: &Error) -> String {
    serde_json::json!({ "error": err.reason(), "message": err.to_string() }).to_string()
}

/// Parses `a`, `bi`, `a+bi`, `a-bi`, `i`, `-i` or `a,b`.
pub fn parse_complex(text: &str) -> Result<Complex64> {
    let s: String = text.chars().filter(|c| !c.is_whitespace()).collect();
    let bad = || Error::Parse(format!("not a complex number: '{text}'"));
    let num = |t: &str| -> Result<f64> {
        match t {
            "" | "+" => Ok(1.0),
            "-" => Ok(-1.0),
            t => t.parse::<f64>().map_err(|_| bad()),
        }
    };
    if s.is_empty() {
        return Err(bad());
    }
    if let Some((re, im)) = s.split_once(',') {
        let re: f64 = re.parse().map_err(|_| bad())?;
        let im: f64 = im.parse().map_err(|_| bad())?;
        return Ok(c64(re, im));
    }
    let Some(body) = s.strip_suffix('i').or_else(|| s.strip_suffix('j')) else {
        return s.parse::<f64>().map(|re| c64(re, 0.0)).map_err(|_| bad());
    };
    let bytes = body.as_bytes();
    let split = (1..bytes.len())
        .rev()
        .find(|&k| (bytes[k] == b'+' || bytes[k] == b'-') && !matches!(bytes[k - 1], b'e' | b'E'));
    let z = match split {
        Some(k) => c64(body[..k].parse().map_err(|_| bad())?, num(&body[k..])?),
        None => c64(0.0, num(body)?),
    };
    if z.re.is_finite() && z.im.is_finite() {
        Ok(z)
    } else {
        Err(bad())
    }
}

/// Splits on ';' and parses every non-empty item.
pub fn parse_complex_list(text: &str) -> Result<Vec<Complex64>> {
    text.split(';').map(str::trim).filter(|t| !t.is_empty()).map(parse_complex).collect()
}

pub fn parse_region(text: &str) -> Result<Region> {
    let v: Vec<f64> = text
        .split(',')
        .map(|t| t.trim().parse::<f64>().map_err(|_| Error::Parse(format!("bad region '{text}'"))))
        .collect::<Result<_>>()?;
    match v[..] {
        [a, b, c, d] => Region::new(a, b, c, d),
        _ => Err(Error::Parse(format!("region needs four numbers, got '{text}'"))),
    }
}

/// `start:end:count` (real, inclusive) or a ';'-separated list.
pub fn parse_thetas(text: &str) -> Result<Vec<Complex64>> {
    let parts: Vec<&str> = text.split(':').collect();
    if parts.len() == 3 {
        let bad = || Error::Parse(format!("bad theta range '{text}'"));
        let a: f64 = parts[0].trim().parse().map_err(|_| bad())?;
        let b: f64 = parts[1].trim().parse().map_err(|_| bad())?;
        let k: usize = parts[2].trim().parse().map_err(|_| bad())?;
        if k < 2 || !a.is_finite() || !b.is_finite() {
            return Err(bad());
        }
        return Ok((0..k).map(|j| c64(a + (b - a) * j as f64 / (k - 1) as f64, 0.0)).collect());
    }
    let v = parse_complex_list(text)?;
    if v.is_empty() {
        return Err(Error::Parse("empty theta list".into()));
    }
    Ok(v)
}

pub fn parse_model_source(text: &str) -> Result<ModelSource> {
    let mut words = text.split_whitespace();
    let head = words.next().ok_or_else(|| Error::Parse("empty model".into()))?;
    if !matches!(head, "sl1d" | "cd1d" | "elliptic2d" | "synthetic") {
        return Ok(ModelSource::Path(PathBuf::from(text.trim())));
    }
    let mut params = BTreeMap::new();
    for w in words {
        let (k, v) = w
            .split_once('=')
            .ok_or_else(|| Error::Parse(format!("model parameter '{w}' is not key=value")))?;
        params.insert(k.to_string(), v.to_string());
    }
    Ok(ModelSource::Builtin {
        name: head.to_string(),
        params,
    })
}

pub fn parse_param(text: &str) -> Result<ParamSpec> {
    let t = text.trim();
    if t.eq_ignore_ascii_case("dirichlet") {
        return Ok(ParamSpec::Dirichlet);
    }
    if let Some(z) = t.strip_prefix("theta*I:").or_else(|| t.strip_prefix("theta=")) {
        return Ok(ParamSpec::Scalar(parse_complex(z)?));
    }
    if t.starts_with('[') {
        let rows: Vec<Vec<[f64; 2]>> = serde_json::from_str(t).map_err(|e| Error::Parse(format!("inline matrix: {e}")))?;
        let n = rows.len();
        if n == 0 || rows.iter().any(|r| r.len() != n) {
            return Err(Error::Parse("inline matrix must be square and non-empty".into()));
        }
        return Ok(ParamSpec::Matrix(ComplexMatrix::from_fn(n, n, |i, j| c64(rows[i][j][0], rows[i][j][1]))));
    }
    Err(Error::Parse(format!("unknown boundary parameter '{text}'")))
}

fn parse_tolerances(items: &[String]) -> Result<Tolerances> {
    let mut value = serde_json::to_value(Tolerances::default())?;
    for item in items {
        let (key, v) = item.split_once('=').unwrap_or(("identity", item.as_str()));
        let x: f64 = v.trim().parse().map_err(|_| Error::Parse(format!("bad tolerance '{item}'")))?;
        if !(x > 0.0 && x.is_finite()) {
            return Err(Error::Contract(format!("tolerance '{key}' must be positive")));
        }
        match value.get_mut(key.trim()) {
            Some(slot) => *slot = serde_json::json!(x),
            None => return Err(Error::Parse(format!("unknown tolerance '{key}'"))),
        }
    }
    Ok(serde_json::from_value(value)?)
}

impl RunConfig {
    pub fn from_cli(cli: &Cli) -> Result<RunConfig> {
        let model = parse_model_source(cli.model.as_deref().ok_or_else(|| Error::Parse("--model is required".into()))?)?;
        let mut lambdas = Vec::new();
        for l in &cli.lambda {
            lambdas.extend(parse_complex_list(l)?);
        }
        let probes = match &cli.probes {
            Some(p) => parse_complex_list(p)?,
            None => crate::extensions::default_probes(),
        };
        if probes.is_empty() {
            return Err(Error::Parse("empty probe list".into()));
        }
        let thetas = match &cli.thetas {
            Some(t) => parse_thetas(t)?,
            None => (1..=10).map(|k| c64(0.1 * k as f64, 0.0)).collect(),
        };
        let format = cli.format.unwrap_or(match cli.command {
            CommandArg::Verify | CommandArg::Export => Format::Json,
            _ => Format::Csv,
        });
        Ok(RunConfig {
            command: cli.command,
            model,
            probes,
            param: parse_param(&cli.param)?,
            lambdas,
            region: cli.region.as_deref().map(parse_region).transpose()?,
            thetas,
            rhs: cli.rhs.clone(),
            out: cli.out.clone(),
            format,
            tolerances: parse_tolerances(&cli.tol)?,
            seed: cli.seed,
            timestamp: !cli.no_timestamp,
        })
    }
}

fn get<T: std::str::FromStr>(params: &BTreeMap<String, String>, key: &str, default: T) -> Result<T> {
    match params.get(key) {
        Some(v) => v.parse().map_err(|_| Error::Parse(format!("bad value for {key}: '{v}'"))),
        None => Ok(default),
    }
}

fn get_complex(params: &BTreeMap<String, String>, key: &str, default: Complex64) -> Result<Complex64> {
    params.get(key).map(|v| parse_complex(v)).unwrap_or(Ok(default))
}

/// Builds a builtin model or loads a JSON file.
pub fn load_source(source: &ModelSource, seed: Option<u64>) -> Result<TripleModel> {
    let (name, params) = match source {
        ModelSource::Path(p) => {
            return load_model(p).map_err(|e| match e {
                Error::Io(io) => Error::Io(std::io::Error::new(io.kind(), format!("{}: {io}", p.display()))),
                e => e,
            })
        }
        ModelSource::Builtin { name, params } => (name.as_str(), params),
    };
    let allowed: &[&str] = match name {
        "sl1d" => &["N", "q"],
        "cd1d" => &["N", "b", "c"],
        "elliptic2d" => &["N", "nx", "ny", "bx", "by", "c"],
        _ => &["n", "m", "seed"],
    };
    if let Some(k) = params.keys().find(|k| !allowed.contains(&k.as_str())) {
        return Err(Error::Parse(format!("unknown parameter '{k}' for model {name}")));
    }
    match name {
        "sl1d" => {
            let q: f64 = get(params, "q", 0.0)?;
            sturm_liouville_1d(&Coefficients1D::new(get(params, "N", 16)?, |_| 1.0, move |_| q))
        }
        "cd1d" => {
            let b: f64 = get(params, "b", 1.0)?;
            let c = get_complex(params, "c", c64(0.0, 0.0))?;
            convection_diffusion_1d(&Coefficients1D::laplacian(get(params, "N", 32)?).with_convection(move |_| b).with_potential(move |_| c))
        }
        "elliptic2d" => {
            let n: usize = get(params, "N", 12)?;
            let mut grid = Grid2D::unit_square(get(params, "nx", n)?, get(params, "ny", n)?);
            let (bx, by): (f64, f64) = (get(params, "bx", 0.0)?, get(params, "by", 0.0)?);
            if bx != 0.0 || by != 0.0 {
                grid = grid.with_convection(move |_, _| bx, move |_, _| by);
            }
            let c = get_complex(params, "c", c64(0.0, 0.0))?;
            if c != c64(0.0, 0.0) {
                grid = grid.with_potential(move |_, _| c);
            }
            elliptic_2d(&grid)
        }
        _ => {
            let seed = match params.get("seed") {
                Some(_) => get(params, "seed", 1)?,
                None => seed.unwrap_or(1),
            };
            synthetic_pair(seed, get(params, "n", 8)?, get(params, "m", 3)?)
        }
    }
}

fn boundary_parameter(spec: &ParamSpec, m: usize) -> Result<BoundaryParameter> {
    match spec {
        ParamSpec::Scalar(z) => Ok(BoundaryParameter::scalar(*z, m)),
        ParamSpec::Dirichlet => Ok(BoundaryParameter::dirichlet(m)),
        ParamSpec::Matrix(b) => {
            let p = BoundaryParameter::single(b.clone(), "inline")?;
            p.check_dim(m)?;
            Ok(p)
        }
    }
}

fn csv_text(header: &[&str], rows: &[Vec<String>]) -> Result<String> {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(header)?;
    for r in rows {
        w.write_record(r)?;
    }
    let bytes = w.into_inner().map_err(|e| Error::Io(e.into_error()))?;
    Ok(String::from_utf8(bytes).expect("csv output is UTF-8"))
}

fn json_text<T: Serialize>(value: &T) -> Result<String> {
    let mut s = serde_json::to_string_pretty(value)?;
    s.push('\n');
    Ok(s)
}

/// Shortest round-trip form, with an exponent for very small or large values.
fn f(x: f64) -> String {
    format!("{x:?}")
}

fn cmd_verify(cfg: &RunConfig, model: &TripleModel) -> Result<Outcome> {
    let opts = VerifyOptions {
        probes: cfg.probes.clone(),
        tolerances: cfg.tolerances,
        ..Default::default()
    };
    let mut report = verify_model(model, &opts);
    if cfg.timestamp {
        report.generated_at = SystemTime::now().duration_since(UNIX_EPOCH).ok().map(|d| d.as_secs());
    }
    let code = if report.pass { EXIT_PASS } else { EXIT_FAIL };
    let body = match cfg.format {
        Format::Json => json_text(&report)?,
        Format::Csv => {
            let rows: Vec<Vec<String>> = report
                .entries
                .iter()
                .map(|e| vec![e.name.clone(), e.defect.map(f).unwrap_or_default(), f(e.tolerance), e.pass.to_string()])
                .collect();
            csv_text(&["name", "defect", "tolerance", "pass"], &rows)?
        }
    };
    let mut out = Outcome::new(code, body);
    out.diagnostics = report.failures().map(|e| format!("FAIL {}: {}", e.name, e.detail)).collect();
    Ok(out)
}

#[derive(Serialize)]
struct SolveOutput {
    lambda: [f64; 2],
    param: String,
    rhs: String,
    deviation: f64,
    boundary_residual_direct: f64,
    boundary_residual_krein: f64,
    u_direct: Vec<[f64; 2]>,
    u_krein: Vec<[f64; 2]>,
}

fn rhs_vector(spec: &str, n: usize) -> Result<ComplexMatrix> {
    let mut h = zeros(n, 1);
    if spec == "ones" {
        h.fill(c64(1.0, 0.0));
        return Ok(h);
    }
    let k: usize = spec
        .strip_prefix('e')
        .and_then(|k| k.parse().ok())
        .filter(|&k| k >= 1 && k <= n)
        .ok_or_else(|| Error::Parse(format!("right-hand side '{spec}' is not e1..e{n} or ones")))?;
    h[(k - 1, 0)] = c64(1.0, 0.0);
    Ok(h)
}

fn single_lambda(cfg: &RunConfig) -> Result<Complex64> {
    match cfg.lambdas[..] {
        [z] => Ok(z),
        [] => Err(Error::Parse("--lambda is required".into())),
        _ => Err(Error::Parse("exactly one --lambda expected".into())),
    }
}

fn cmd_solve(cfg: &RunConfig, model: &TripleModel) -> Result<Outcome> {
    let lambda = single_lambda(cfg)?;
    let param = boundary_parameter(&cfg.param, model.m())?;
    let h = rhs_vector(&cfg.rhs, model.n())?;
    // Krein first, so that a Robin eigenvalue is reported through the Birman–Schwinger matrix.
    let uk = krein_resolvent(model, &param, lambda, &h)?;
    let direct = restricted_solve(model, Side::Plain, &param, lambda, &h)?;
    let ud = &direct.u;
    let deviation = (&uk - ud).norm() / ud.norm().max(f64::MIN_POSITIVE);
    let krein_residual = crate::extensions::krein_boundary_residual(model, &param, lambda, &h)?;
    let body = match cfg.format {
        Format::Csv => {
            let rows: Vec<Vec<String>> = (0..model.n())
                .map(|i| vec![i.to_string(), f(ud[(i, 0)].re), f(ud[(i, 0)].im), f(uk[(i, 0)].re), f(uk[(i, 0)].im)])
                .collect();
            csv_text(&["index", "re_u_direct", "im_u_direct", "re_u_krein", "im_u_krein"], &rows)?
        }
        Format::Json => json_text(&SolveOutput {
            lambda: [lambda.re, lambda.im],
            param: param.label.clone(),
            rhs: cfg.rhs.clone(),
            deviation,
            boundary_residual_direct: direct.boundary_residual,
            boundary_residual_krein: krein_residual,
            u_direct: ud.iter().map(|z| [z.re, z.im]).collect(),
            u_krein: uk.iter().map(|z| [z.re, z.im]).collect(),
        })?,
    };
    let mut out = Outcome::new(EXIT_PASS, body);
    out.diagnostics.push(format!(
        "deviation {deviation:.3e}, boundary residuals {:.3e} (direct) {:.3e} (krein)",
        direct.boundary_residual, krein_residual
    ));
    Ok(out)
}

/// Region around the five Robin eigenvalues of smallest modulus.
fn default_region(model: &TripleModel, param: &BoundaryParameter) -> Result<Region> {
    let (a, e) = robin_pencil(model, Side::Plain, param)?;
    let mut ev = pencil_eigenvalues(&a, &e)?.finite;
    ev.sort_by(|x, y| x.norm().total_cmp(&y.norm()));
    ev.truncate(5);
    if ev.is_empty() {
        return Region::new(-1.0, 1.0, -1.0, 1.0);
    }
    let spread = ev.iter().map(|z| z.norm()).fold(0.0, f64::max);
    Region::around(&ev, 0.5_f64.max(0.05 * spread))
}

fn cmd_eig(cfg: &RunConfig, model: &TripleModel) -> Result<Outcome> {
    let param = boundary_parameter(&cfg.param, model.m())?;
    let region = match cfg.region {
        Some(r) => r,
        None => default_region(model, &param)?,
    };
    let opts = SearchOptions {
        match_tol: cfg.tolerances.pencil_match,
        ..Default::default()
    };
    let res = eigenvalue_search(model, &param, region, &opts)?;
    let code = if res.complete() { EXIT_PASS } else { EXIT_FAIL };
    let body = match cfg.format {
        Format::Json => json_text(&res)?,
        Format::Csv => {
            let rows: Vec<Vec<String>> = res
                .roots
                .iter()
                .enumerate()
                .map(|(k, r)| {
                    vec![
                        k.to_string(),
                        f(r.lambda[0]),
                        f(r.lambda[1]),
                        r.multiplicity.to_string(),
                        f(r.bs_residual),
                        f(r.pencil_distance),
                        r.pencil_match.to_string(),
                    ]
                })
                .collect();
            csv_text(
                &["index", "lambda_re", "lambda_im", "multiplicity", "bs_residual", "pencil_distance", "pencil_match"],
                &rows,
            )?
        }
    };
    let mut out = Outcome::new(code, body);
    out.diagnostics.extend(res.warnings.iter().cloned());
    for u in &res.unmatched_pencil {
        out.diagnostics.push(format!("pencil eigenvalue {}{:+}i not found by the search", u[0], u[1]));
    }
    Ok(out)
}

#[derive(Serialize)]
struct DtnSample {
    lambda: [f64; 2],
    weyl: Vec<Vec<[f64; 2]>>,
}

fn cmd_dtn(cfg: &RunConfig, model: &TripleModel) -> Result<Outcome> {
    if cfg.lambdas.is_empty() {
        return Err(Error::Parse("--lambda is required".into()));
    }
    let mut samples = Vec::new();
    for &z in &cfg.lambdas {
        samples.push((z, gamma(model, z)?.weyl));
    }
    let body = match cfg.format {
        Format::Json => json_text(
            &samples
                .iter()
                .map(|(z, w)| DtnSample {
                    lambda: [z.re, z.im],
                    weyl: w.row_iter().map(|r| r.iter().map(|v| [v.re, v.im]).collect()).collect(),
                })
                .collect::<Vec<_>>(),
        )?,
        Format::Csv => {
            let mut rows = Vec::new();
            for (z, w) in &samples {
                for i in 0..w.nrows() {
                    for j in 0..w.ncols() {
                        rows.push(vec![f(z.re), f(z.im), i.to_string(), j.to_string(), f(w[(i, j)].re), f(w[(i, j)].im)]);
                    }
                }
            }
            csv_text(&["lambda_re", "lambda_im", "i", "j", "re", "im"], &rows)?
        }
    };
    Ok(Outcome::new(EXIT_PASS, body))
}

#[derive(Serialize, Clone, Debug)]
struct SweepRow {
    theta: [f64; 2],
    root: usize,
    lambda: [f64; 2],
    /// `|dλ/dθ|` from first-order pencil perturbation.
    sensitivity: f64,
    /// Distance to the matched root at the previous θ (absent for the first θ or a new root).
    jump: Option<f64>,
    continuous: bool,
}

/// `|dλ/dθ|` for a simple eigenvalue of the Robin pencil, whose `θ`-derivative is `[0; -Γ1]`.
fn theta_sensitivity(model: &TripleModel, a: &ComplexMatrix, e: &ComplexMatrix, lambda: Complex64) -> f64 {
    let x = pencil_eigenvector(a, e, lambda);
    let y = pencil_eigenvector(&a.adjoint(), &e.adjoint(), lambda.conj());
    let n = model.n();
    let mut da = zeros(a.nrows(), a.ncols());
    da.view_mut((n, 0), (model.m(), a.ncols())).copy_from(&(-model.g1()));
    let num = (y.adjoint() * da * &x)[(0, 0)];
    let den = (y.adjoint() * e * &x)[(0, 0)];
    if den.norm() == 0.0 {
        f64::INFINITY
    } else {
        (num / den).norm()
    }
}

/// The previous root nearest to `z`, provided `z` is also the current root nearest to it.
fn mutual_nearest(z: Complex64, previous: &[(Complex64, f64)], current: &[(Complex64, f64)]) -> Option<(Complex64, f64)> {
    let nearest = |w: Complex64, set: &[(Complex64, f64)]| {
        set.iter()
            .copied()
            .min_by(|p, q| (p.0 - w).norm().total_cmp(&(q.0 - w).norm()))
    };
    let back = nearest(z, previous)?;
    let forth = nearest(back.0, current)?;
    (forth.0 == z).then_some(back)
}

fn cmd_sweep(cfg: &RunConfig, model: &TripleModel) -> Result<Outcome> {
    let m = model.m();
    let region = match cfg.region {
        Some(r) => r,
        None => default_region(model, &BoundaryParameter::scalar(cfg.thetas[0], m))?,
    };
    let opts = SearchOptions {
        match_tol: cfg.tolerances.pencil_match,
        ..Default::default()
    };
    let mut rows: Vec<SweepRow> = Vec::new();
    let mut prev: Option<(Complex64, Vec<(Complex64, f64)>)> = None;
    let mut diagnostics = Vec::new();
    let mut all_continuous = true;
    for &theta in &cfg.thetas {
        let param = BoundaryParameter::scalar(theta, m);
        let res: SearchResult = eigenvalue_search(model, &param, region, &opts)?;
        let (a, e) = robin_pencil(model, Side::Plain, &param)?;
        let current: Vec<(Complex64, f64)> = res
            .roots
            .iter()
            .map(|r| (r.value(), theta_sensitivity(model, &a, &e, r.value())))
            .collect();
        for (k, &(z, s)) in current.iter().enumerate() {
            let (jump, continuous) = match &prev {
                Some((t0, roots)) => match mutual_nearest(z, roots, &current) {
                    Some((near, s0)) => {
                        let d = (near - z).norm();
                        let bound = 10.0 * (theta - t0).norm() * s.max(s0);
                        (Some(d), d <= bound)
                    }
                    // A root that entered the region.
                    None => (None, true),
                },
                _ => (None, true),
            };
            if !continuous {
                all_continuous = false;
                diagnostics.push(format!("theta {}{:+}i: root {k} jumped by {:.3e}", theta.re, theta.im, jump.unwrap_or(0.0)));
            }
            rows.push(SweepRow {
                theta: [theta.re, theta.im],
                root: k,
                lambda: [z.re, z.im],
                sensitivity: s,
                jump,
                continuous,
            });
        }
        if !res.complete() {
            diagnostics.push(format!("theta {}{:+}i: search incomplete", theta.re, theta.im));
        }
        prev = Some((theta, current));
    }
    let body = match cfg.format {
        Format::Json => json_text(&rows)?,
        Format::Csv => {
            let table: Vec<Vec<String>> = rows
                .iter()
                .map(|r| {
                    vec![
                        f(r.theta[0]),
                        f(r.theta[1]),
                        r.root.to_string(),
                        f(r.lambda[0]),
                        f(r.lambda[1]),
                        f(r.sensitivity),
                        r.jump.map(f).unwrap_or_default(),
                        r.continuous.to_string(),
                    ]
                })
                .collect();
            csv_text(
                &["theta_re", "theta_im", "root", "lambda_re", "lambda_im", "sensitivity", "jump", "continuous"],
                &table,
            )?
        }
    };
    let mut out = Outcome::new(if all_continuous { EXIT_PASS } else { EXIT_FAIL }, body);
    out.diagnostics = diagnostics;
    Ok(out)
}

fn cmd_export(cfg: &RunConfig, model: &TripleModel) -> Result<Outcome> {
    if cfg.format == Format::Csv {
        return Err(Error::Parse("export writes JSON only".into()));
    }
    Ok(Outcome::new(EXIT_PASS, model_to_json(model)?))
}

/// Runs one configured command. Model load failures and usage errors give exit 2.
pub fn run(cfg: &RunConfig) -> Outcome {
    let model = match load_source(&cfg.model, cfg.seed) {
        Ok(m) => m,
        Err(e) => {
            let mut o = Outcome::new(EXIT_USAGE, String::new());
            o.diagnostics.push(error_record(&e));
            return o;
        }
    };
    let result = match cfg.command {
        CommandArg::Verify => cmd_verify(cfg, &model),
        CommandArg::Solve => cmd_solve(cfg, &model),
        CommandArg::Eig => cmd_eig(cfg, &model),
        CommandArg::Dtn => cmd_dtn(cfg, &model),
        CommandArg::Sweep => cmd_sweep(cfg, &model),
        CommandArg::Export => cmd_export(cfg, &model),
    };
    result.unwrap_or_else(|e| {
        let mut o = Outcome::new(exit_code_for(&e), String::new());
        o.diagnostics.push(error_record(&e));
        o
    })
}

/// Parses arguments, runs, writes the output and returns the exit code.
pub fn main_with_args<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_PASS };
            let _ = e.print();
            return code;
        }
    };
    let cfg = match RunConfig::from_cli(&cli) {
        Ok(c) => c,
        Err(e) => {
            eprintln!("{}", error_record(&e));
            return EXIT_USAGE;
        }
    };
    let outcome = run(&cfg);
    for d in &outcome.diagnostics {
        eprintln!("{d}");
    }
    if !outcome.body.is_empty() {
        let written = match &cfg.out {
            Some(path) => std::fs::write(path, &outcome.body).map_err(Error::from),
            None => {
                print!("{}", outcome.body);
                Ok(())
            }
        };
        if let Err(e) = written {
            eprintln!("{}", error_record(&e));
            return EXIT_USAGE;
        }
    }
    outcome.code
}
