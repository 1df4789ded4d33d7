//! Run configuration: built-in defaults, then an optional `key=value` file,
//! then command-line flags, later sources overriding earlier ones.

use std::collections::BTreeMap;
use std::ffi::OsString;
use std::fmt;
use std::path::PathBuf;

use clap::error::ErrorKind;
use clap::Parser;
use hme_core::hermite::MAX_DEGREE;
use hme_core::moment::MomentState;

use crate::CliError;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Mode {
    ShockTube,
    HypRegion,
    MConvergence,
    EigenReport,
}

impl Mode {
    fn parse(s: &str) -> Result<Self, CliError> {
        match s {
            "shocktube" => Ok(Mode::ShockTube),
            "hypregion" => Ok(Mode::HypRegion),
            "mconvergence" => Ok(Mode::MConvergence),
            "eigenreport" => Ok(Mode::EigenReport),
            other => Err(CliError::Usage(format!(
                "unknown mode '{other}' (expected shocktube, hypregion, mconvergence or eigenreport)"
            ))),
        }
    }
}

impl fmt::Display for Mode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Mode::ShockTube => "shocktube",
            Mode::HypRegion => "hypregion",
            Mode::MConvergence => "mconvergence",
            Mode::EigenReport => "eigenreport",
        })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub mode: Mode,
    /// Moment order `M`.
    pub m: usize,
    /// Knudsen number; infinite means collisionless.
    pub kn: f64,
    pub cells: usize,
    pub t_end: f64,
    pub cfl: f64,
    pub x_min: f64,
    pub x_max: f64,
    /// Directory receiving the CSV files.
    pub output: PathBuf,
    /// Also run the discrete-velocity reference.
    pub reference: bool,
    /// Output times, sorted; defaults to `[t_end]`.
    pub snapshots: Vec<f64>,
    /// Primitive Riemann data `(ρ, u, θ, f_3, ...)`, zero-padded to order `M`.
    pub left: Vec<f64>,
    pub right: Vec<f64>,
    /// State analysed by the eigen report.
    pub state: Vec<f64>,
    /// Cells per side of the hyperbolicity scan.
    pub resolution: usize,
    /// Half-width of the scanned `(g_{M-1}, g_M)` box.
    pub half_width: f64,
    /// Orders compared by the convergence study.
    pub m_min: usize,
    pub m_max: usize,
}

impl RunConfig {
    pub fn left_state(&self, m: usize) -> Result<MomentState, CliError> {
        state_of(&self.left, m, "left")
    }

    pub fn right_state(&self, m: usize) -> Result<MomentState, CliError> {
        state_of(&self.right, m, "right")
    }

    pub fn analysed_state(&self) -> Result<MomentState, CliError> {
        state_of(&self.state, self.m, "state")
    }
}

fn state_of(values: &[f64], m: usize, key: &str) -> Result<MomentState, CliError> {
    if values.len() > m + 1 {
        return Err(CliError::Usage(format!(
            "{key} has {} components but M = {m} allows at most {}",
            values.len(),
            m + 1
        )));
    }
    let mut w = values.to_vec();
    w.resize(m + 1, 0.0);
    MomentState::from_vector(&w).map_err(|e| CliError::Usage(format!("{key}: {e}")))
}

#[derive(Debug, Parser)]
#[command(
    name = "hme",
    about = "Hyperbolic moment equations: shock tubes, hyperbolicity scans and eigen reports",
    version
)]
struct Flags {
    /// shocktube | hypregion | mconvergence | eigenreport
    #[arg(long)]
    mode: Option<String>,
    /// Moment order
    #[arg(long = "M", value_name = "ORDER")]
    m: Option<String>,
    /// Knudsen number ("inf" for collisionless)
    #[arg(long)]
    kn: Option<String>,
    #[arg(long)]
    cells: Option<String>,
    #[arg(long = "t-end")]
    t_end: Option<String>,
    #[arg(long)]
    cfl: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    xmin: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    xmax: Option<String>,
    /// Output directory
    #[arg(long)]
    output: Option<String>,
    /// Also run the discrete-velocity reference solver
    #[arg(long)]
    reference: bool,
    /// Comma-separated output times
    #[arg(long)]
    snapshots: Option<String>,
    /// Left state rho,u,theta[,f3,...]
    #[arg(long, allow_hyphen_values = true)]
    left: Option<String>,
    /// Right state rho,u,theta[,f3,...]
    #[arg(long, allow_hyphen_values = true)]
    right: Option<String>,
    /// State for the eigen report rho,u,theta[,f3,...]
    #[arg(long, allow_hyphen_values = true)]
    state: Option<String>,
    #[arg(long)]
    resolution: Option<String>,
    #[arg(long = "half-width")]
    half_width: Option<String>,
    #[arg(long = "m-min")]
    m_min: Option<String>,
    #[arg(long = "m-max")]
    m_max: Option<String>,
    /// File of key=value lines; flags take precedence
    #[arg(long)]
    config: Option<PathBuf>,
}

const KEYS: &[&str] = &[
    "mode",
    "M",
    "kn",
    "cells",
    "t-end",
    "cfl",
    "xmin",
    "xmax",
    "output",
    "reference",
    "snapshots",
    "left",
    "right",
    "state",
    "resolution",
    "half-width",
    "m-min",
    "m-max",
];

impl Flags {
    fn pairs(&self) -> Vec<(&'static str, String)> {
        let opts = [
            ("mode", &self.mode),
            ("M", &self.m),
            ("kn", &self.kn),
            ("cells", &self.cells),
            ("t-end", &self.t_end),
            ("cfl", &self.cfl),
            ("xmin", &self.xmin),
            ("xmax", &self.xmax),
            ("output", &self.output),
            ("snapshots", &self.snapshots),
            ("left", &self.left),
            ("right", &self.right),
            ("state", &self.state),
            ("resolution", &self.resolution),
            ("half-width", &self.half_width),
            ("m-min", &self.m_min),
            ("m-max", &self.m_max),
        ];
        let mut out: Vec<_> = opts
            .into_iter()
            .filter_map(|(k, v)| v.clone().map(|v| (k, v)))
            .collect();
        if self.reference {
            out.push(("reference", "true".into()));
        }
        out
    }
}

/// Parses `key=value` lines; blank lines and `#` comments are skipped.
pub fn parse_config_file(text: &str) -> Result<Vec<(String, String)>, CliError> {
    let mut out = Vec::new();
    for (n, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let (key, value) = line
            .split_once('=')
            .ok_or_else(|| CliError::Usage(format!("config line {}: expected key=value", n + 1)))?;
        let key = key.trim().replace('_', "-");
        let key = if key.eq_ignore_ascii_case("m") {
            "M".to_string()
        } else {
            key
        };
        if !KEYS.contains(&key.as_str()) {
            return Err(CliError::Usage(format!(
                "config line {}: unknown key '{key}'",
                n + 1
            )));
        }
        out.push((key, value.trim().to_string()));
    }
    Ok(out)
}

/// Builds a [`RunConfig`] from command-line arguments (program name first).
pub fn parse_config<I, T>(args: I) -> Result<RunConfig, CliError>
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let flags = Flags::try_parse_from(args).map_err(|e| match e.kind() {
        ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => CliError::Info(e.to_string()),
        _ => CliError::Usage(e.to_string()),
    })?;

    let mut merged: BTreeMap<String, String> = BTreeMap::new();
    if let Some(path) = &flags.config {
        let text = std::fs::read_to_string(path).map_err(|source| CliError::Io {
            path: path.display().to_string(),
            source,
        })?;
        merged.extend(parse_config_file(&text)?);
    }
    merged.extend(flags.pairs().into_iter().map(|(k, v)| (k.to_string(), v)));
    from_pairs(&merged)
}

fn number<T: std::str::FromStr>(key: &str, s: &str) -> Result<T, CliError> {
    s.trim()
        .parse()
        .map_err(|_| CliError::Usage(format!("malformed number for {key}: '{s}'")))
}

fn list(key: &str, s: &str) -> Result<Vec<f64>, CliError> {
    s.split(',').map(|v| number(key, v)).collect()
}

fn from_pairs(kv: &BTreeMap<String, String>) -> Result<RunConfig, CliError> {
    let get = |k: &str| kv.get(k).map(String::as_str);
    let mode = Mode::parse(get("mode").ok_or_else(|| {
        CliError::Usage(
            "missing --mode (shocktube, hypregion, mconvergence or eigenreport); see --help".into(),
        )
    })?)?;

    let m: usize = get("M").map(|v| number("M", v)).transpose()?.unwrap_or(4);
    let kn: f64 = get("kn")
        .map(|v| number("kn", v))
        .transpose()?
        .unwrap_or(0.05);
    let cells = get("cells")
        .map(|v| number("cells", v))
        .transpose()?
        .unwrap_or(400);
    let t_end: f64 = get("t-end")
        .map(|v| number("t-end", v))
        .transpose()?
        .unwrap_or(0.3);
    let cfl = get("cfl")
        .map(|v| number("cfl", v))
        .transpose()?
        .unwrap_or(0.5);
    let x_min = get("xmin")
        .map(|v| number("xmin", v))
        .transpose()?
        .unwrap_or(-2.0);
    let x_max = get("xmax")
        .map(|v| number("xmax", v))
        .transpose()?
        .unwrap_or(2.0);
    let output = PathBuf::from(get("output").unwrap_or("."));
    let reference = match get("reference") {
        None | Some("false") | Some("0") => false,
        Some("true") | Some("1") => true,
        Some(other) => {
            return Err(CliError::Usage(format!(
                "reference must be true or false, got '{other}'"
            )))
        }
    };
    let mut snapshots = match get("snapshots") {
        Some(s) => list("snapshots", s)?,
        None => vec![t_end],
    };
    snapshots.sort_by(f64::total_cmp);
    snapshots.dedup();
    let left = get("left")
        .map(|s| list("left", s))
        .transpose()?
        .unwrap_or(vec![7.0, 0.0, 1.0]);
    let right = get("right")
        .map(|s| list("right", s))
        .transpose()?
        .unwrap_or(vec![1.0, 0.0, 1.0]);
    let state = get("state")
        .map(|s| list("state", s))
        .transpose()?
        .unwrap_or(vec![1.0, 0.0, 1.0]);
    let resolution = get("resolution")
        .map(|v| number("resolution", v))
        .transpose()?
        .unwrap_or(200);
    let half_width = get("half-width")
        .map(|v| number("half-width", v))
        .transpose()?
        .unwrap_or(0.3);
    let m_min = get("m-min")
        .map(|v| number("m-min", v))
        .transpose()?
        .unwrap_or(2);
    let m_max = get("m-max")
        .map(|v| number("m-max", v))
        .transpose()?
        .unwrap_or(10);

    let cfg = RunConfig {
        mode,
        m,
        kn,
        cells,
        t_end,
        cfl,
        x_min,
        x_max,
        output,
        reference,
        snapshots,
        left,
        right,
        state,
        resolution,
        half_width,
        m_min,
        m_max,
    };
    validate(&cfg)?;
    Ok(cfg)
}

fn validate(c: &RunConfig) -> Result<(), CliError> {
    let bad = |msg: String| Err(CliError::Usage(msg));
    // He_{M+1} must stay within the supported root range
    let max_order = MAX_DEGREE - 1;
    let orders = if c.mode == Mode::MConvergence {
        (c.m_min, c.m_max)
    } else {
        (c.m, c.m)
    };
    if orders.0 < 2 || orders.1 > max_order || orders.0 > orders.1 {
        return bad(format!(
            "moment orders must satisfy 2 <= M <= {max_order}, got {orders:?}"
        ));
    }
    if c.mode == Mode::MConvergence && orders.0 == orders.1 {
        return bad("convergence study needs m-min < m-max".into());
    }
    if !(c.kn > 0.0) {
        return bad(format!("kn must be positive, got {}", c.kn));
    }
    if !(c.cfl > 0.0 && c.cfl < 1.0) {
        return bad(format!("cfl must lie in (0, 1), got {}", c.cfl));
    }
    if c.cells < 2 {
        return bad(format!("cells must be at least 2, got {}", c.cells));
    }
    if !(c.t_end > 0.0 && c.t_end.is_finite()) {
        return bad(format!("t-end must be positive, got {}", c.t_end));
    }
    if !(c.x_min < c.x_max) || !c.x_min.is_finite() || !c.x_max.is_finite() {
        return bad(format!("need xmin < xmax, got [{}, {}]", c.x_min, c.x_max));
    }
    if c.snapshots.iter().any(|&t| !(t > 0.0 && t <= c.t_end)) {
        return bad(format!("snapshot times must lie in (0, {}]", c.t_end));
    }
    if c.resolution < 2 {
        return bad(format!(
            "resolution must be at least 2, got {}",
            c.resolution
        ));
    }
    if !(c.half_width > 0.0 && c.half_width.is_finite()) {
        return bad(format!("half-width must be positive, got {}", c.half_width));
    }
    let top = orders.1;
    c.left_state(top)?;
    c.right_state(top)?;
    if c.mode == Mode::EigenReport {
        c.analysed_state()?;
    }
    Ok(())
}
