//! Command-line grammar, the optional config file and the merged run configuration.

use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use serde::{Deserialize, Serialize};
use topoband::invariants::{ChernMethod, DEFAULT_BZ_SAMPLES};
use topoband::ssh::{Boundary, SshConfig};
use topoband::{Band, Tolerances};

pub const DEFAULT_GRID: &str = "180x360";
pub const DEFAULT_CELLS: usize = 100;

#[derive(Debug, Parser)]
#[command(
    name = "topoband",
    version,
    about = "Berry phases, Chern numbers and SSH-chain topology",
    disable_help_subcommand = true
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    #[command(flatten)]
    pub common: CommonArgs,
}

#[derive(Debug, Args)]
pub struct CommonArgs {
    /// Intra-cell hopping v
    #[arg(short = 'v', global = true, allow_negative_numbers = true)]
    pub v: Option<f64>,
    /// Inter-cell hopping w
    #[arg(short = 'w', global = true, allow_negative_numbers = true)]
    pub w: Option<f64>,
    /// Lattice constant a
    #[arg(long, global = true, allow_negative_numbers = true)]
    pub lattice_const: Option<f64>,
    /// Brillouin-zone or figure samples
    #[arg(short = 'n', long, global = true)]
    pub samples: Option<usize>,
    /// Sphere grid as ROWSxCOLS (theta x phi)
    #[arg(long, global = true, value_name = "RxC")]
    pub grid: Option<String>,
    /// Band: lower or upper
    #[arg(long, global = true)]
    pub band: Option<String>,
    /// Output format: csv or json
    #[arg(long, global = true)]
    pub format: Option<String>,
    /// Write output to PATH instead of standard output
    #[arg(short = 'o', long, global = true, value_name = "PATH")]
    pub output: Option<PathBuf>,
    /// Override a tolerance, e.g. --tol zak-snap=1e-6 (repeatable)
    #[arg(long = "tol", global = true, value_name = "KEY=VAL")]
    pub tol: Vec<String>,
    /// Print the effective configuration as TOML and exit
    #[arg(long, global = true)]
    pub print_config: bool,
    /// Read defaults from a TOML file
    #[arg(long, global = true, value_name = "PATH")]
    pub config: Option<PathBuf>,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Band energies over the Brillouin zone
    Bands {
        /// Emit the d-vector locus (dx, dy) instead of energies
        #[arg(long)]
        locus: bool,
    },
    /// Unwrapped polar angle of d(k) over the Brillouin zone
    Phi,
    /// Berry connection and curvature on the parameter sphere
    Berry,
    /// Chern number of a band on the parameter sphere
    Chern {
        /// plaquette or analytic-quadrature
        #[arg(long)]
        method: Option<String>,
    },
    /// Zak phase of the lower SSH band
    Zak,
    /// Winding number of d(k) around the origin
    Winding,
    /// Gap, Zak phase, winding number and phase label
    Classify,
    /// Spectrum and edge weights of a finite SSH chain
    Chain {
        /// Number of unit cells
        #[arg(long)]
        cells: Option<usize>,
        /// open or periodic
        #[arg(long)]
        boundary: Option<String>,
        /// Absolute threshold for zero modes (default: edge-zero tolerance times max(v, w))
        #[arg(long)]
        zero_tol: Option<f64>,
    },
    /// Classify every point of a (v, w) grid
    Sweep {
        /// START:STOP:COUNT, inclusive
        #[arg(long)]
        v_range: Option<String>,
        /// START:STOP:COUNT, inclusive
        #[arg(long)]
        w_range: Option<String>,
    },
}

impl Command {
    pub fn name(&self) -> &'static str {
        match self {
            Command::Bands { .. } => "bands",
            Command::Phi => "phi",
            Command::Berry => "berry",
            Command::Chern { .. } => "chern",
            Command::Zak => "zak",
            Command::Winding => "winding",
            Command::Classify => "classify",
            Command::Chain { .. } => "chain",
            Command::Sweep { .. } => "sweep",
        }
    }
}

/// Contents of a `--config` file. Keys mirror the long flag names.
#[derive(Debug, Default, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, rename_all = "kebab-case")]
pub struct FileConfig {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub v: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub w: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub lattice_const: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub samples: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub grid: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub band: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub format: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub output: Option<PathBuf>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub locus: Option<bool>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub method: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub cells: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub boundary: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub zero_tol: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub v_range: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub w_range: Option<String>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub tol: Vec<String>,
}

impl FileConfig {
    pub fn load(path: &Path) -> Result<Self, String> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| format!("cannot read config {}: {e}", path.display()))?;
        toml::from_str(&text).map_err(|e| {
            let msg = e.message().to_string();
            format!("invalid config {}: {msg}", path.display())
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Format {
    Csv,
    Json,
}

impl Format {
    fn parse(s: &str) -> Result<Self, String> {
        match s {
            "csv" => Ok(Format::Csv),
            "json" => Ok(Format::Json),
            other => Err(format!("unknown format {other:?} (expected csv or json)")),
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Format::Csv => "csv",
            Format::Json => "json",
        }
    }
}

/// Inclusive, evenly spaced parameter range.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Range {
    pub start: f64,
    pub stop: f64,
    pub count: usize,
}

impl Range {
    pub fn parse(s: &str) -> Result<Self, String> {
        let parts: Vec<&str> = s.split(':').collect();
        let bad = || format!("invalid range {s:?} (expected START:STOP:COUNT)");
        if parts.len() != 3 {
            return Err(bad());
        }
        let start: f64 = parts[0].trim().parse().map_err(|_| bad())?;
        let stop: f64 = parts[1].trim().parse().map_err(|_| bad())?;
        let count: usize = parts[2].trim().parse().map_err(|_| bad())?;
        if !(start.is_finite() && stop.is_finite()) || count == 0 {
            return Err(bad());
        }
        if count == 1 && start != stop {
            return Err(format!("range {s:?} has one point but distinct endpoints"));
        }
        Ok(Range { start, stop, count })
    }

    pub fn values(&self) -> Vec<f64> {
        if self.count == 1 {
            return vec![self.start];
        }
        let step = (self.stop - self.start) / (self.count - 1) as f64;
        (0..self.count)
            .map(|i| {
                if i + 1 == self.count {
                    self.stop
                } else {
                    self.start + step * i as f64
                }
            })
            .collect()
    }

    pub fn to_arg(&self) -> String {
        format!("{:?}:{:?}:{}", self.start, self.stop, self.count)
    }
}

pub fn parse_grid(s: &str) -> Result<(usize, usize), String> {
    let bad = || format!("invalid grid {s:?} (expected ROWSxCOLS, e.g. 24x24)");
    let (r, c) = s.split_once(['x', 'X']).ok_or_else(bad)?;
    let rows: usize = r.trim().parse().map_err(|_| bad())?;
    let cols: usize = c.trim().parse().map_err(|_| bad())?;
    if rows == 0 || cols == 0 {
        return Err(bad());
    }
    Ok((rows, cols))
}

fn parse_tol(entry: &str, tol: &mut Tolerances) -> Result<(), String> {
    let (key, value) = entry
        .split_once('=')
        .ok_or_else(|| format!("invalid tolerance {entry:?} (expected KEY=VAL)"))?;
    let key = key.trim();
    if !Tolerances::KEYS.contains(&key) {
        return Err(format!(
            "unknown tolerance {key:?} (known: {})",
            Tolerances::KEYS.join(", ")
        ));
    }
    let value: f64 = value
        .trim()
        .parse()
        .map_err(|_| format!("tolerance {key} needs a number, got {value:?}"))?;
    tol.set(key, value)
}

/// Fully resolved settings for one run.
#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub command: &'static str,
    pub v: Option<f64>,
    pub w: Option<f64>,
    pub lattice_const: f64,
    pub samples: usize,
    pub grid: (usize, usize),
    pub band: Band,
    pub format: Format,
    pub output: Option<PathBuf>,
    pub locus: bool,
    pub method: ChernMethod,
    pub cells: usize,
    pub boundary: Boundary,
    pub zero_tol: Option<f64>,
    pub v_range: Option<Range>,
    pub w_range: Option<Range>,
    pub tolerances: Tolerances,
}

fn positive(name: &str, value: f64) -> Result<f64, String> {
    if value.is_finite() && value > 0.0 {
        Ok(value)
    } else {
        Err(format!("{name} must be positive, got {value}"))
    }
}

fn non_negative(name: &str, value: f64) -> Result<f64, String> {
    if value.is_finite() && value >= 0.0 {
        Ok(value)
    } else {
        Err(format!("{name} must be non-negative, got {value}"))
    }
}

impl RunConfig {
    /// Flags override the config file, which overrides built-in defaults.
    pub fn resolve(cli: &Cli) -> Result<Self, String> {
        let file = match &cli.common.config {
            Some(path) => FileConfig::load(path)?,
            None => FileConfig::default(),
        };
        let c = &cli.common;

        let (flag_locus, flag_method, flag_cells, flag_boundary, flag_zero, flag_vr, flag_wr) =
            match &cli.command {
                Command::Bands { locus } => {
                    (locus.then_some(true), None, None, None, None, None, None)
                }
                Command::Chern { method } => (None, method.clone(), None, None, None, None, None),
                Command::Chain {
                    cells,
                    boundary,
                    zero_tol,
                } => (None, None, *cells, boundary.clone(), *zero_tol, None, None),
                Command::Sweep { v_range, w_range } => (
                    None,
                    None,
                    None,
                    None,
                    None,
                    v_range.clone(),
                    w_range.clone(),
                ),
                _ => (None, None, None, None, None, None, None),
            };

        let mut tolerances = Tolerances::default();
        for entry in file.tol.iter().chain(&c.tol) {
            parse_tol(entry, &mut tolerances)?;
        }

        let v = c.v.or(file.v).map(|x| non_negative("-v", x)).transpose()?;
        let w = c.w.or(file.w).map(|x| non_negative("-w", x)).transpose()?;
        let lattice_const = positive(
            "--lattice-const",
            c.lattice_const.or(file.lattice_const).unwrap_or(1.0),
        )?;
        let samples = c.samples.or(file.samples).unwrap_or(DEFAULT_BZ_SAMPLES);
        if samples == 0 {
            return Err("--samples must be positive".into());
        }
        let grid = parse_grid(
            c.grid
                .as_deref()
                .or(file.grid.as_deref())
                .unwrap_or(DEFAULT_GRID),
        )?;
        let band = c
            .band
            .as_deref()
            .or(file.band.as_deref())
            .unwrap_or("lower")
            .parse::<Band>()?;
        let format = Format::parse(
            c.format
                .as_deref()
                .or(file.format.as_deref())
                .unwrap_or("json"),
        )?;
        let output = c.output.clone().or(file.output);
        let locus = flag_locus.or(file.locus).unwrap_or(false);
        let method = flag_method
            .as_deref()
            .or(file.method.as_deref())
            .unwrap_or("plaquette")
            .parse::<ChernMethod>()?;
        let cells = flag_cells.or(file.cells).unwrap_or(DEFAULT_CELLS);
        if cells == 0 {
            return Err("--cells must be positive".into());
        }
        let boundary = flag_boundary
            .as_deref()
            .or(file.boundary.as_deref())
            .unwrap_or("open")
            .parse::<Boundary>()?;
        let zero_tol = flag_zero
            .or(file.zero_tol)
            .map(|x| positive("--zero-tol", x))
            .transpose()?;
        let v_range = flag_vr
            .as_deref()
            .or(file.v_range.as_deref())
            .map(Range::parse)
            .transpose()?;
        let w_range = flag_wr
            .as_deref()
            .or(file.w_range.as_deref())
            .map(Range::parse)
            .transpose()?;

        Ok(RunConfig {
            command: cli.command.name(),
            v,
            w,
            lattice_const,
            samples,
            grid,
            band,
            format,
            output,
            locus,
            method,
            cells,
            boundary,
            zero_tol,
            v_range,
            w_range,
            tolerances,
        })
    }

    /// SSH parameters; both hoppings must be given.
    pub fn ssh(&self) -> Result<SshConfig, String> {
        let v = self.v.ok_or("missing -v (intra-cell hopping)")?;
        let w = self.w.ok_or("missing -w (inter-cell hopping)")?;
        SshConfig::new(v, w, self.lattice_const).map_err(|e| e.to_string())
    }

    /// The effective configuration in config-file form.
    pub fn to_file_config(&self) -> FileConfig {
        let t = &self.tolerances;
        let tol = Tolerances::KEYS
            .iter()
            .zip([
                t.chart_eps,
                t.overlap_floor,
                t.flux_margin,
                t.metallic,
                t.zak_snap,
                t.chern_accept,
                t.edge_zero,
                t.absolute,
            ])
            .map(|(k, v)| format!("{k}={v:?}"))
            .collect();
        FileConfig {
            v: self.v,
            w: self.w,
            lattice_const: Some(self.lattice_const),
            samples: Some(self.samples),
            grid: Some(format!("{}x{}", self.grid.0, self.grid.1)),
            band: Some(self.band.to_string()),
            format: Some(self.format.as_str().to_string()),
            output: self.output.clone(),
            locus: Some(self.locus),
            method: Some(self.method.to_string()),
            cells: Some(self.cells),
            boundary: Some(self.boundary.to_string()),
            zero_tol: self.zero_tol,
            v_range: self.v_range.map(|r| r.to_arg()),
            w_range: self.w_range.map(|r| r.to_arg()),
            tol,
        }
    }

    pub fn to_toml(&self) -> String {
        let body = toml::to_string(&self.to_file_config()).expect("config serializes");
        format!(
            "# effective configuration for `topoband {}`\n{body}",
            self.command
        )
    }
}
