//! Topological invariants: Chern number on S², Zak phase and winding number
//! on the SSH Brillouin zone, and the three-way SSH phase classifier.

use crate::error::{Result, TopoError};
use crate::numerics::{
    angular_distance, plaquette_flux_sum, principal, wilson_loop_phase, PlaquetteGrid, StateChain,
};
use crate::sphere::{curvature_analytic, SphereGrid, ORIENTATION};
use crate::ssh::{bloch_vector, min_gap, momentum_loop, refined_bz_momenta, SshConfig};
use crate::tolerances::Tolerances;
use crate::two_level::{Band, ChartAtlas};
use serde::{Serialize, Serializer};
use std::f64::consts::{FRAC_PI_4, PI, TAU};
use std::fmt;

pub const MIN_SPHERE_GRID: usize = 12;
pub const MIN_BZ_SAMPLES: usize = 16;
pub const DEFAULT_BZ_SAMPLES: usize = 1024;

/// Largest polar-angle change of `d(k)` allowed between neighbouring BZ samples.
const MAX_ANGLE_STEP: f64 = FRAC_PI_4;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum ChernMethod {
    AnalyticQuadrature,
    Plaquette,
}

impl fmt::Display for ChernMethod {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            ChernMethod::AnalyticQuadrature => "analytic-quadrature",
            ChernMethod::Plaquette => "plaquette",
        })
    }
}

impl std::str::FromStr for ChernMethod {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        match s {
            "analytic-quadrature" | "analytic" => Ok(ChernMethod::AnalyticQuadrature),
            "plaquette" => Ok(ChernMethod::Plaquette),
            other => Err(format!(
                "unknown Chern method {other:?} (expected plaquette or analytic-quadrature)"
            )),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ChernResult {
    pub value: i64,
    /// Oriented integral before rounding, in units of 2π.
    pub raw_total: f64,
    pub n_theta: usize,
    pub n_phi: usize,
    pub method: ChernMethod,
}

fn snap_chern(
    raw_total: f64,
    n_theta: usize,
    n_phi: usize,
    method: ChernMethod,
    tol: &Tolerances,
) -> Result<ChernResult> {
    let value = raw_total.round();
    if (raw_total - value).abs() >= tol.chern_accept {
        return Err(TopoError::NotQuantized {
            raw: raw_total,
            tolerance: tol.chern_accept,
        });
    }
    Ok(ChernResult {
        value: value as i64,
        raw_total,
        n_theta,
        n_phi,
        method,
    })
}

/// Chern number of `band` over S² on an `n_theta x n_phi` grid.
pub fn chern_number(
    band: Band,
    n_theta: usize,
    n_phi: usize,
    method: ChernMethod,
    tol: &Tolerances,
) -> Result<ChernResult> {
    if n_theta < MIN_SPHERE_GRID || n_phi < MIN_SPHERE_GRID {
        return Err(TopoError::Argument(format!(
            "sphere grid {n_theta}x{n_phi} is below the {MIN_SPHERE_GRID}x{MIN_SPHERE_GRID} minimum"
        )));
    }
    let grid = SphereGrid::new(n_theta, n_phi, ChartAtlas::new(tol.chart_eps)?)?;
    match method {
        ChernMethod::Plaquette => {
            let states = PlaquetteGrid::from_sphere(&grid, band)?;
            chern_from_plaquettes(&states, tol)
        }
        ChernMethod::AnalyticQuadrature => {
            let raw = ORIENTATION * curvature_integral(&grid, band) / TAU;
            snap_chern(raw, n_theta, n_phi, method, tol)
        }
    }
}

/// Chern number from an arbitrary sphere grid of states (rows = θ nodes).
pub fn chern_from_plaquettes(grid: &PlaquetteGrid, tol: &Tolerances) -> Result<ChernResult> {
    let flux = plaquette_flux_sum(grid, tol)?;
    let raw = ORIENTATION * flux.total / TAU;
    snap_chern(
        raw,
        grid.rows() - 1,
        grid.cols(),
        ChernMethod::Plaquette,
        tol,
    )
}

/// `∫ F_{θφ} dθ dφ` over S²: three-point Gauss-Legendre on every θ cell of
/// the grid, rectangle rule over the periodic φ columns.
fn curvature_integral(grid: &SphereGrid, band: Band) -> f64 {
    const NODES: [f64; 3] = [-0.774_596_669_241_483_4, 0.0, 0.774_596_669_241_483_4];
    const WEIGHTS: [f64; 3] = [5.0 / 9.0, 8.0 / 9.0, 5.0 / 9.0];
    let (h_theta, h_phi) = (grid.d_theta(), grid.d_phi());
    let mut total = 0.0;
    for row in 0..grid.n_theta() {
        let centre = (row as f64 + 0.5) * h_theta;
        let mut cell = 0.0;
        for (x, wt) in NODES.iter().zip(WEIGHTS) {
            let theta = centre + 0.5 * h_theta * x;
            let ring: f64 = (0..grid.n_phi())
                .map(|_| curvature_analytic(theta, band).f_theta_phi)
                .sum();
            cell += wt * ring * h_phi;
        }
        total += 0.5 * h_theta * cell;
    }
    total
}

/// Where a Zak phase landed relative to the two quantized values.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ZakSnap {
    Zero,
    Pi,
    Unquantized,
}

impl ZakSnap {
    pub fn as_str(self) -> &'static str {
        match self {
            ZakSnap::Zero => "0",
            ZakSnap::Pi => "pi",
            ZakSnap::Unquantized => "unquantized",
        }
    }

    /// The quantized value, if any.
    pub fn value(self) -> Option<f64> {
        match self {
            ZakSnap::Zero => Some(0.0),
            ZakSnap::Pi => Some(PI),
            ZakSnap::Unquantized => None,
        }
    }
}

impl fmt::Display for ZakSnap {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl Serialize for ZakSnap {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(self.as_str())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ZakResult {
    /// Raw Wilson-loop phase in `(-π, π]`.
    pub phase: f64,
    pub snapped: ZakSnap,
    /// Number of momenta on the loop after refinement.
    pub samples: usize,
}

pub fn snap_zak(phase: f64, tol: &Tolerances) -> ZakSnap {
    if angular_distance(phase, 0.0) < tol.zak_snap {
        ZakSnap::Zero
    } else if angular_distance(phase, PI) < tol.zak_snap {
        ZakSnap::Pi
    } else {
        ZakSnap::Unquantized
    }
}

fn check_gapped(cfg: &SshConfig, n_samples: usize, tol: &Tolerances) -> Result<()> {
    if n_samples < MIN_BZ_SAMPLES {
        return Err(TopoError::Argument(format!(
            "{n_samples} Brillouin-zone samples is below the minimum of {MIN_BZ_SAMPLES}"
        )));
    }
    if cfg.is_metallic(tol.metallic) {
        return Err(TopoError::GapClosed { ka: PI });
    }
    Ok(())
}

/// Zak phase of the lower band: Wilson loop over the Brillouin zone.
///
/// The loop starts from `n_samples` uniform momenta and is bisected wherever
/// `φ(k)` turns by more than π/4 between neighbours.
pub fn zak_phase(cfg: &SshConfig, n_samples: usize, tol: &Tolerances) -> Result<ZakResult> {
    check_gapped(cfg, n_samples, tol)?;
    let ks = refined_bz_momenta(cfg, n_samples, MAX_ANGLE_STEP)?;
    let chain = momentum_loop(cfg, &ks, Band::Lower)?;
    zak_from_chain(&chain, tol)
}

/// Zak phase of any closed chain of Bloch eigenstates.
pub fn zak_from_chain(chain: &StateChain, tol: &Tolerances) -> Result<ZakResult> {
    let phase = wilson_loop_phase(chain, tol)?;
    Ok(ZakResult {
        phase,
        snapped: snap_zak(phase, tol),
        samples: chain.len(),
    })
}

/// Number of times `d(k)` winds around the origin as `k` crosses the zone.
///
/// Sums wrapped polar-angle increments over the closed loop; sampling is
/// refined the same way as for [`zak_phase`].
pub fn winding_number(cfg: &SshConfig, n_samples: usize, tol: &Tolerances) -> Result<i64> {
    check_gapped(cfg, n_samples, tol)?;
    let ks = refined_bz_momenta(cfg, n_samples, MAX_ANGLE_STEP)?;
    let angles: Vec<f64> = ks.iter().map(|&k| bloch_vector(k, cfg).angle()).collect();
    let n = angles.len();
    let total: f64 = (0..n)
        .map(|i| principal(angles[(i + 1) % n] - angles[i]))
        .sum();
    Ok((total / TAU).round() as i64)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum PhaseLabel {
    TrivialInsulator,
    TopologicalInsulator,
    Metallic,
}

impl PhaseLabel {
    pub fn as_str(self) -> &'static str {
        match self {
            PhaseLabel::TrivialInsulator => "trivial-insulator",
            PhaseLabel::TopologicalInsulator => "topological-insulator",
            PhaseLabel::Metallic => "metallic",
        }
    }
}

impl fmt::Display for PhaseLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PhaseReport {
    pub gap: f64,
    /// Momentum `k` (not `ka`) where the gap is smallest.
    pub gap_location: f64,
    pub zak: Option<ZakResult>,
    pub winding: Option<i64>,
    pub label: PhaseLabel,
}

/// Gap, Zak phase, winding number and phase label of an SSH configuration.
pub fn classify(cfg: &SshConfig, n_samples: usize, tol: &Tolerances) -> Result<PhaseReport> {
    let (gap, gap_location) = min_gap(cfg);
    if cfg.is_metallic(tol.metallic) {
        return Ok(PhaseReport {
            gap,
            gap_location,
            zak: None,
            winding: None,
            label: PhaseLabel::Metallic,
        });
    }
    let zak = zak_phase(cfg, n_samples, tol)?;
    let winding = winding_number(cfg, n_samples, tol)?;
    let label = if winding == 0 {
        PhaseLabel::TrivialInsulator
    } else {
        PhaseLabel::TopologicalInsulator
    };
    Ok(PhaseReport {
        gap,
        gap_location,
        zak: Some(zak),
        winding: Some(winding),
        label,
    })
}
