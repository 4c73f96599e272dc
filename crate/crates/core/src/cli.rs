//! Command-line front end: argument and config-file parsing, and the
//! commands that regenerate the experiment tables, the figure data, the
//! differentiation matrix dump and the audit CSV.
//!
//! Settings come from flags and, optionally, a `key = value` config file
//! given by `--config`. Flags win when both set the same key.

use std::fmt::Write as _;
use std::path::PathBuf;

use clap::{Parser, ValueEnum};

use crate::audit::{default_suite, reports_to_csv, DEFAULT_SEED};
use crate::bvp::{shooting_bvp2, solve_bvp2, solve_hyperbolic, BvpReport};
use crate::error::{Error, Result};
use crate::interp::{uniform_partition, Partition};
use crate::linalg::DEFAULT_REL_TOL;
use crate::operator_1d::diff_matrix;
use crate::operator_nd::MultiIndexSpace;

/// Largest `n` any command accepts.
pub const MAX_N: usize = 20;
/// Largest grid size for commands that realize lifted operators.
pub const MAX_GRID_SIZE: usize = 1024;
pub const SEED_ENV: &str = "LIEALG_SEED";
pub const TABLE_HEADER: &str = "method,n,E,Emax,Eavg,rcond";

const TABLE1_SIZES: [usize; 4] = [4, 8, 12, 16];
const TABLE3_SIZES: [(usize, usize); 2] = [(10, 10), (15, 15)];
const FIGURE1_SIZE: (usize, usize) = (15, 15);

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum CommandKind {
    /// Dump the differentiation matrix of a partition
    #[value(name = "diffmat")]
    Diffmat,
    /// Run the rank/nilpotency audit suite
    #[value(name = "rank-audit")]
    RankAudit,
    /// Error table for the 1-D boundary value problem
    #[value(name = "table1")]
    Table1,
    /// Error table for the 2-D hyperbolic problem
    #[value(name = "table3")]
    Table3,
    /// Gridded surface data of the 2-D solution
    #[value(name = "plot-figure1")]
    PlotFigure1,
}

impl CommandKind {
    fn parse_name(s: &str) -> Result<Self> {
        <Self as ValueEnum>::from_str(s, false)
            .map_err(|_| Error::InvalidInput(format!("unknown command {s:?}")))
    }
}

#[derive(Debug, Parser)]
#[command(
    name = "liealg",
    version,
    about = "Discrete Lie-algebraic operator representations"
)]
pub struct Cli {
    /// Command to run; may also be set as `command = ...` in the config file
    pub command: Option<CommandKind>,

    /// Plain-text `key = value` config file
    #[arg(long)]
    pub config: Option<PathBuf>,

    /// Explicit partition nodes, comma-separated
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    pub nodes: Option<Vec<f64>>,

    /// Partition file, one node per line
    #[arg(long)]
    pub nodes_file: Option<PathBuf>,

    /// Left endpoint for a uniform partition
    #[arg(long, allow_hyphen_values = true)]
    pub a: Option<f64>,

    /// Right endpoint for a uniform partition
    #[arg(long, allow_hyphen_values = true)]
    pub b: Option<f64>,

    /// Number of subintervals
    #[arg(long)]
    pub n: Option<usize>,

    /// Subintervals in x for 2-D runs
    #[arg(long)]
    pub n1: Option<usize>,

    /// Subintervals in y for 2-D runs
    #[arg(long)]
    pub n2: Option<usize>,

    /// Output file (stdout when absent)
    #[arg(long)]
    pub out: Option<PathBuf>,

    /// Relative singular-value threshold for numerical rank
    #[arg(long)]
    pub rel_tol: Option<f64>,

    /// Collocate the 1-D problem on [0, π/2] instead of [0.001, π/2]
    #[arg(long)]
    pub include_zero_endpoint: bool,
}

/// Where the partition for `diffmat` comes from.
#[derive(Debug, Clone, PartialEq)]
pub enum PartitionSpec {
    Nodes(Vec<f64>),
    File(PathBuf),
    Uniform { a: f64, b: f64, n: usize },
}

/// Fully resolved settings for one run.
#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub command: CommandKind,
    pub partition: Option<PartitionSpec>,
    pub n: Option<usize>,
    pub n1: Option<usize>,
    pub n2: Option<usize>,
    pub out: Option<PathBuf>,
    pub rel_tol: f64,
    pub include_zero_endpoint: bool,
    pub seed: u64,
}

#[derive(Debug, Default)]
struct FileSettings {
    command: Option<CommandKind>,
    nodes: Option<Vec<f64>>,
    nodes_file: Option<PathBuf>,
    a: Option<f64>,
    b: Option<f64>,
    n: Option<usize>,
    n1: Option<usize>,
    n2: Option<usize>,
    out: Option<PathBuf>,
    rel_tol: Option<f64>,
    include_zero_endpoint: Option<bool>,
}

fn parse_value<T: std::str::FromStr>(key: &str, value: &str) -> Result<T> {
    value
        .parse()
        .map_err(|_| Error::InvalidInput(format!("config key {key}: cannot parse {value:?}")))
}

fn parse_node_list(key: &str, value: &str) -> Result<Vec<f64>> {
    value
        .split(',')
        .map(|t| parse_value(key, t.trim()))
        .collect()
}

impl FileSettings {
    fn parse(text: &str) -> Result<Self> {
        let mut s = Self::default();
        for (lineno, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (key, value) = line.split_once('=').ok_or_else(|| {
                Error::InvalidInput(format!("config line {}: expected key = value", lineno + 1))
            })?;
            let key = key.trim().replace('-', "_");
            let value = value.trim();
            match key.as_str() {
                "command" => s.command = Some(CommandKind::parse_name(value)?),
                "nodes" => s.nodes = Some(parse_node_list(&key, value)?),
                "nodes_file" => s.nodes_file = Some(PathBuf::from(value)),
                "a" => s.a = Some(parse_value(&key, value)?),
                "b" => s.b = Some(parse_value(&key, value)?),
                "n" => s.n = Some(parse_value(&key, value)?),
                "n1" => s.n1 = Some(parse_value(&key, value)?),
                "n2" => s.n2 = Some(parse_value(&key, value)?),
                "out" => s.out = Some(PathBuf::from(value)),
                "rel_tol" => s.rel_tol = Some(parse_value(&key, value)?),
                "include_zero_endpoint" => {
                    s.include_zero_endpoint = Some(parse_value(&key, value)?)
                }
                other => {
                    return Err(Error::InvalidInput(format!(
                        "config line {}: unknown key {other:?}",
                        lineno + 1
                    )))
                }
            }
        }
        Ok(s)
    }
}

impl RunConfig {
    /// Merges parsed flags with an optional config file body and the seed
    /// environment variable.
    pub fn resolve(cli: Cli, config_text: Option<&str>, seed_env: Option<&str>) -> Result<Self> {
        let file = match config_text {
            Some(text) => FileSettings::parse(text)?,
            None => FileSettings::default(),
        };
        let command = cli
            .command
            .or(file.command)
            .ok_or_else(|| Error::InvalidInput("no command given".into()))?;

        let nodes = cli.nodes.or(file.nodes);
        let nodes_file = cli.nodes_file.or(file.nodes_file);
        let a = cli.a.or(file.a);
        let b = cli.b.or(file.b);
        let n = cli.n.or(file.n);
        let partition = if let Some(nodes) = nodes {
            Some(PartitionSpec::Nodes(nodes))
        } else if let Some(path) = nodes_file {
            Some(PartitionSpec::File(path))
        } else if a.is_some() || b.is_some() {
            let n = n.ok_or_else(|| Error::InvalidInput("a uniform partition needs --n".into()))?;
            Some(PartitionSpec::Uniform {
                a: a.unwrap_or(0.0),
                b: b.unwrap_or(1.0),
                n,
            })
        } else {
            None
        };

        let rel_tol = cli.rel_tol.or(file.rel_tol).unwrap_or(DEFAULT_REL_TOL);
        if !(rel_tol > 0.0 && rel_tol < 1.0) {
            return Err(Error::InvalidInput(format!(
                "rel-tol must lie in (0, 1), got {rel_tol}"
            )));
        }
        let seed = match seed_env {
            Some(s) => s.trim().parse().map_err(|_| {
                Error::InvalidInput(format!("{SEED_ENV} must be an unsigned integer, got {s:?}"))
            })?,
            None => DEFAULT_SEED,
        };

        let config = Self {
            command,
            partition,
            n,
            n1: cli.n1.or(file.n1),
            n2: cli.n2.or(file.n2),
            out: cli.out.or(file.out),
            rel_tol,
            include_zero_endpoint: cli.include_zero_endpoint
                || file.include_zero_endpoint.unwrap_or(false),
            seed,
        };
        config.validate()?;
        Ok(config)
    }

    fn validate(&self) -> Result<()> {
        for (name, value) in [("n", self.n), ("n1", self.n1), ("n2", self.n2)] {
            if let Some(v) = value {
                if v > MAX_N {
                    return Err(Error::InvalidInput(format!("{name} = {v} exceeds {MAX_N}")));
                }
            }
        }
        if let (Some(n1), Some(n2)) = (self.n1, self.n2) {
            let size = (n1 + 1) * (n2 + 1);
            if size > MAX_GRID_SIZE {
                return Err(Error::SizeGuard {
                    size,
                    max: MAX_GRID_SIZE,
                });
            }
        }
        Ok(())
    }

    fn grid_sizes(&self, defaults: &[(usize, usize)]) -> Vec<(usize, usize)> {
        match (self.n1, self.n2) {
            (Some(n1), Some(n2)) => vec![(n1, n2)],
            (Some(n1), None) => vec![(n1, n1)],
            (None, Some(n2)) => vec![(n2, n2)],
            (None, None) => defaults.to_vec(),
        }
    }
}

/// Text produced by a run and the number of failed audit rows.
#[derive(Debug, Clone, PartialEq)]
pub struct RunOutput {
    pub text: String,
    pub failures: usize,
}

/// Scientific notation with `sig` significant digits and a signed,
/// at-least-two-digit exponent, e.g. `2.2788e-04`.
pub fn format_sci(x: f64, sig: usize) -> String {
    let s = format!("{:.*e}", sig.saturating_sub(1), x);
    let (mantissa, exp) = s.split_once('e').expect("exponent present");
    let exp: i32 = exp.parse().expect("integer exponent");
    let sign = if exp < 0 { '-' } else { '+' };
    format!("{mantissa}e{sign}{:02}", exp.abs())
}

fn table_row(report: &BvpReport) -> String {
    let e = &report.errors;
    format!(
        "{},{},{},{},{},{}",
        report.method.name(),
        report.size_label(),
        format_sci(e.sum, 5),
        format_sci(e.max, 5),
        format_sci(e.mean, 5),
        report.rcond.map(|r| format_sci(r, 5)).unwrap_or_default()
    )
}

fn load_partition(spec: &PartitionSpec) -> Result<Partition> {
    let p = match spec {
        PartitionSpec::Nodes(nodes) => Partition::new(nodes.clone())?,
        PartitionSpec::File(path) => Partition::from_node_file(&std::fs::read_to_string(path)?)?,
        PartitionSpec::Uniform { a, b, n } => uniform_partition(*a, *b, *n)?,
    };
    if p.n() > MAX_N {
        return Err(Error::InvalidInput(format!(
            "partition has n = {} subintervals, limit is {MAX_N}",
            p.n()
        )));
    }
    Ok(p)
}

/// Gridded `x y u` triples, x fastest, with a blank line after each
/// constant-y block.
pub fn surface_data(report: &BvpReport) -> Result<String> {
    let space = MultiIndexSpace::from_partitions(&report.grid)?;
    if space.ndim() != 2 {
        return Err(Error::InvalidInput(
            "surface data needs a 2-D report".into(),
        ));
    }
    let mut out = String::new();
    let nx = space.dims()[0];
    for (k, idx) in space.iter().enumerate() {
        let x = report.grid[0].nodes()[idx[0]];
        let y = report.grid[1].nodes()[idx[1]];
        writeln!(out, "{x:.16e} {y:.16e} {:.16e}", report.u_sigma[k]).unwrap();
        if idx[0] == nx {
            out.push('\n');
        }
    }
    Ok(out)
}

/// Executes a resolved configuration and returns the text to emit.
pub fn run(config: &RunConfig) -> Result<RunOutput> {
    let text = match config.command {
        CommandKind::Diffmat => {
            let spec = config.partition.as_ref().ok_or_else(|| {
                Error::InvalidInput("diffmat needs --nodes, --nodes-file or --a/--b/--n".into())
            })?;
            diff_matrix(&load_partition(spec)?).to_text()
        }
        CommandKind::RankAudit => {
            let reports = default_suite(config.seed, config.rel_tol)?;
            let failures = reports.iter().filter(|r| !r.pass()).count();
            return Ok(RunOutput {
                text: reports_to_csv(&reports),
                failures,
            });
        }
        CommandKind::Table1 => {
            let sizes = config.n.map_or_else(|| TABLE1_SIZES.to_vec(), |n| vec![n]);
            let mut out = format!("{TABLE_HEADER}\n");
            for &n in &sizes {
                writeln!(
                    out,
                    "{}",
                    table_row(&solve_bvp2(n, config.include_zero_endpoint)?)
                )
                .unwrap();
            }
            for &n in &sizes {
                writeln!(out, "{}", table_row(&shooting_bvp2(n)?)).unwrap();
            }
            out
        }
        CommandKind::Table3 => {
            let mut out = format!("{TABLE_HEADER}\n");
            for (n1, n2) in config.grid_sizes(&TABLE3_SIZES) {
                writeln!(out, "{}", table_row(&solve_hyperbolic(n1, n2)?)).unwrap();
            }
            out
        }
        CommandKind::PlotFigure1 => {
            let (n1, n2) = config.grid_sizes(&[FIGURE1_SIZE])[0];
            surface_data(&solve_hyperbolic(n1, n2)?)?
        }
    };
    Ok(RunOutput { text, failures: 0 })
}
