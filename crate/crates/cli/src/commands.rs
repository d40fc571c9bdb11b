//! One function per subcommand, each turning a [`RunConfig`] into a [`Report`].

use std::f64::consts::PI;

use topoband::figures::{emit_figure_data, FigureKind};
use topoband::invariants::{chern_number, classify, winding_number, zak_phase, PhaseReport};
use topoband::numerics::{plaquette_flux_sum, PlaquetteGrid};
use topoband::sphere::{connection_analytic, curvature_analytic, SphereGrid};
use topoband::ssh::{build_chain, chain_spectrum, edge_weights, SshConfig};
use topoband::two_level::ChartAtlas;
use topoband::TopoError;

use crate::config::RunConfig;
use crate::output::{Cell, Report, Results};

#[derive(Debug)]
pub enum CliError {
    /// Bad flags, config or parameters (exit 2).
    Usage(String),
    /// The computation itself failed (exit 1).
    Compute(String),
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Usage(_) => 2,
            CliError::Compute(_) => 1,
        }
    }

    pub fn message(&self) -> &str {
        match self {
            CliError::Usage(m) | CliError::Compute(m) => m,
        }
    }
}

impl From<String> for CliError {
    fn from(m: String) -> Self {
        CliError::Usage(m)
    }
}

/// Error conversion that names the quantity a closed gap leaves undefined.
fn compute_err(quantity: &'static str) -> impl Fn(TopoError) -> CliError {
    move |e| match e {
        TopoError::Argument(m) => CliError::Usage(m),
        TopoError::GapClosed { ka } => {
            let at = if (ka.abs() - PI).abs() < 1e-12 {
                "π".to_string()
            } else {
                ka.to_string()
            };
            CliError::Compute(format!(
                "metallic configuration: {quantity} undefined (gap closes at ka = {at}, v = w)"
            ))
        }
        other => CliError::Compute(other.to_string()),
    }
}

fn ssh_inputs(cfg: &RunConfig, ssh: &SshConfig) -> Vec<(&'static str, Cell)> {
    vec![
        ("v", ssh.v().into()),
        ("w", ssh.w().into()),
        ("lattice-const", ssh.a().into()),
        ("samples", cfg.samples.into()),
    ]
}

fn figure(cfg: &RunConfig, kind: FigureKind, quantity: &'static str) -> Result<Report, CliError> {
    let ssh = cfg.ssh()?;
    let table = emit_figure_data(kind, &ssh, cfg.samples).map_err(compute_err(quantity))?;
    let columns: Vec<&str> = table.columns.iter().map(String::as_str).collect();
    let rows = table
        .rows
        .iter()
        .map(|r| r.iter().map(|&x| Cell::Num(x)).collect())
        .collect();
    let mut inputs = ssh_inputs(cfg, &ssh);
    inputs.push(("figure", kind.to_string().into()));
    Ok(Report::new(
        cfg.command,
        inputs,
        Results::table(&columns, rows),
    ))
}

pub fn bands(cfg: &RunConfig) -> Result<Report, CliError> {
    let kind = if cfg.locus {
        FigureKind::DLocus
    } else {
        FigureKind::BandCurve
    };
    figure(cfg, kind, "band structure")
}

pub fn phi(cfg: &RunConfig) -> Result<Report, CliError> {
    figure(cfg, FigureKind::PhiCurve, "d-vector angle")
}

pub fn berry(cfg: &RunConfig) -> Result<Report, CliError> {
    let err = compute_err("Berry curvature");
    let (n_theta, n_phi) = cfg.grid;
    let atlas = ChartAtlas::new(cfg.tolerances.chart_eps).map_err(&err)?;
    let grid = SphereGrid::new(n_theta, n_phi, atlas).map_err(&err)?;
    let states = PlaquetteGrid::from_sphere(&grid, cfg.band).map_err(&err)?;
    let flux = plaquette_flux_sum(&states, &cfg.tolerances).map_err(&err)?;
    let mut rows = Vec::with_capacity(n_theta + 1);
    for row in 0..=n_theta {
        let theta = grid.theta(row);
        let chart = atlas.preferred_chart(theta);
        let a = connection_analytic(&atlas, theta, chart, cfg.band).map_err(&err)?;
        let f = curvature_analytic(theta, cfg.band);
        let ring = (row < n_theta).then(|| flux.region_sum(row..row + 1, 0..n_phi));
        rows.push(vec![
            theta.into(),
            chart.name().into(),
            a.a_phi.into(),
            a.a_theta.into(),
            f.f_theta_phi.into(),
            ring.into(),
        ]);
    }
    Ok(Report::new(
        cfg.command,
        vec![
            ("band", cfg.band.to_string().into()),
            ("grid", format!("{n_theta}x{n_phi}").into()),
        ],
        Results::table(
            &[
                "theta",
                "chart",
                "a_phi",
                "a_theta",
                "f_theta_phi",
                "ring_flux",
            ],
            rows,
        ),
    ))
}

pub fn chern(cfg: &RunConfig) -> Result<Report, CliError> {
    let (n_theta, n_phi) = cfg.grid;
    let c = chern_number(cfg.band, n_theta, n_phi, cfg.method, &cfg.tolerances)
        .map_err(compute_err("Chern number"))?;
    Ok(Report::new(
        cfg.command,
        vec![
            ("band", cfg.band.to_string().into()),
            ("grid", format!("{n_theta}x{n_phi}").into()),
            ("method", cfg.method.to_string().into()),
        ],
        Results::record(vec![
            ("chern", c.value.into()),
            ("raw_total", c.raw_total.into()),
        ]),
    ))
}

pub fn zak(cfg: &RunConfig) -> Result<Report, CliError> {
    let ssh = cfg.ssh()?;
    let z = zak_phase(&ssh, cfg.samples, &cfg.tolerances).map_err(compute_err("Zak phase"))?;
    Ok(Report::new(
        cfg.command,
        ssh_inputs(cfg, &ssh),
        Results::record(vec![
            ("zak", z.phase.into()),
            ("snapped", z.snapped.as_str().into()),
            ("loop_samples", z.samples.into()),
        ]),
    ))
}

pub fn winding(cfg: &RunConfig) -> Result<Report, CliError> {
    let ssh = cfg.ssh()?;
    let n = winding_number(&ssh, cfg.samples, &cfg.tolerances)
        .map_err(compute_err("winding number"))?;
    Ok(Report::new(
        cfg.command,
        ssh_inputs(cfg, &ssh),
        Results::record(vec![("winding", n.into())]),
    ))
}

fn phase_cells(ssh: &SshConfig, r: &PhaseReport) -> Vec<(&'static str, Cell)> {
    vec![
        ("gap", r.gap.into()),
        ("gap_ka", (r.gap_location * ssh.a()).into()),
        ("zak", r.zak.map(|z| z.phase).into()),
        ("snapped", r.zak.map(|z| z.snapped.as_str()).into()),
        ("winding", r.winding.into()),
        ("label", r.label.as_str().into()),
    ]
}

pub fn classify_cmd(cfg: &RunConfig) -> Result<Report, CliError> {
    let ssh = cfg.ssh()?;
    let r = classify(&ssh, cfg.samples, &cfg.tolerances).map_err(compute_err("phase"))?;
    Ok(Report::new(
        cfg.command,
        ssh_inputs(cfg, &ssh),
        Results::record(phase_cells(&ssh, &r)),
    ))
}

pub fn chain(cfg: &RunConfig) -> Result<Report, CliError> {
    let ssh = cfg.ssh()?;
    let err = compute_err("chain spectrum");
    let matrix = build_chain(cfg.cells, &ssh, cfg.boundary).map_err(&err)?;
    let spectrum = chain_spectrum(&matrix).map_err(&err)?;
    let zero_tol = cfg
        .zero_tol
        .unwrap_or(cfg.tolerances.edge_zero * ssh.energy_scale());
    let rows = spectrum
        .values
        .iter()
        .enumerate()
        .map(|(i, &e)| {
            let wts = edge_weights(&spectrum, i, cfg.cells);
            vec![
                i.into(),
                e.into(),
                wts.left.into(),
                wts.right.into(),
                wts.end_sites.into(),
                (e.abs() < zero_tol).into(),
            ]
        })
        .collect();
    Ok(Report::new(
        cfg.command,
        vec![
            ("v", ssh.v().into()),
            ("w", ssh.w().into()),
            ("cells", cfg.cells.into()),
            ("boundary", cfg.boundary.to_string().into()),
            ("zero_tol", zero_tol.into()),
        ],
        Results::table(
            &[
                "index",
                "energy",
                "left_weight",
                "right_weight",
                "end_sites_weight",
                "zero_mode",
            ],
            rows,
        ),
    ))
}

pub fn sweep(cfg: &RunConfig) -> Result<Report, CliError> {
    let v_range = cfg
        .v_range
        .ok_or("sweep needs --v-range START:STOP:COUNT".to_string())?;
    let w_range = cfg
        .w_range
        .ok_or("sweep needs --w-range START:STOP:COUNT".to_string())?;
    let mut rows = Vec::with_capacity(v_range.count * w_range.count);
    for v in v_range.values() {
        for w in w_range.values() {
            let ssh = SshConfig::new(v, w, cfg.lattice_const)
                .map_err(|e| CliError::Usage(e.to_string()))?;
            let r = classify(&ssh, cfg.samples, &cfg.tolerances).map_err(compute_err("phase"))?;
            let mut row: Vec<Cell> = vec![v.into(), w.into()];
            row.extend(phase_cells(&ssh, &r).into_iter().map(|(_, c)| c));
            rows.push(row);
        }
    }
    Ok(Report::new(
        cfg.command,
        vec![
            ("v-range", v_range.to_arg().into()),
            ("w-range", w_range.to_arg().into()),
            ("lattice-const", cfg.lattice_const.into()),
            ("samples", cfg.samples.into()),
        ],
        Results::table(
            &[
                "v", "w", "gap", "gap_ka", "zak", "snapped", "winding", "label",
            ],
            rows,
        ),
    ))
}
