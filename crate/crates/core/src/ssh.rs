//! The Su-Schrieffer-Heeger chain.
//!
//! Two sites (A, B) per cell, intra-cell hopping `v`, inter-cell hopping `w`,
//! lattice constant `a`. The Bloch Hamiltonian is `H(k) = d(k)·σ` with
//! `d(k) = (v + w cos ka, w sin ka)`, a circle of radius `w` centred at `(v, 0)`.
//! Its eigenstates `(∓e^{-iφ(k)}, 1)/√2` depend on `k` only through the
//! polar angle `φ(k)` of `d(k)`.

use crate::error::{Result, TopoError};
use crate::numerics::{principal, StateChain};
use crate::sphere::ConnectionSample;
use crate::tolerances::METALLIC;
use crate::two_level::{Band, StateVector};
use nalgebra::{DMatrix, SymmetricEigen};
use num_complex::Complex64;
use serde::Serialize;
use std::f64::consts::{FRAC_1_SQRT_2, PI, TAU};
use std::fmt;

/// Number of outermost cells counted on each side by [`edge_state_report`].
pub const EDGE_CELLS: usize = 10;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SshConfig {
    v: f64,
    w: f64,
    a: f64,
}

impl SshConfig {
    pub fn new(v: f64, w: f64, a: f64) -> Result<Self> {
        if !(v.is_finite() && w.is_finite() && v >= 0.0 && w >= 0.0) {
            return Err(TopoError::Argument(format!(
                "hoppings must be finite and non-negative, got v = {v}, w = {w}"
            )));
        }
        if v == 0.0 && w == 0.0 {
            return Err(TopoError::Argument("v and w cannot both be zero".into()));
        }
        if !(a.is_finite() && a > 0.0) {
            return Err(TopoError::Argument(format!(
                "lattice constant must be positive, got {a}"
            )));
        }
        Ok(Self { v, w, a })
    }

    /// Unit lattice constant.
    pub fn hoppings(v: f64, w: f64) -> Result<Self> {
        Self::new(v, w, 1.0)
    }

    pub fn v(&self) -> f64 {
        self.v
    }

    pub fn w(&self) -> f64 {
        self.w
    }

    pub fn a(&self) -> f64 {
        self.a
    }

    pub fn energy_scale(&self) -> f64 {
        self.v.max(self.w)
    }

    /// `|v - w| < rel * max(v, w)`.
    pub fn is_metallic(&self, rel: f64) -> bool {
        (self.v - self.w).abs() < rel * self.energy_scale()
    }

    /// The Brillouin-zone edge `π/a`.
    pub fn zone_edge(&self) -> f64 {
        PI / self.a
    }
}

/// `d(k)` together with the momentum it was evaluated at.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct BlochVector2 {
    pub dx: f64,
    pub dy: f64,
    pub k: f64,
}

impl BlochVector2 {
    pub fn norm(&self) -> f64 {
        self.dx.hypot(self.dy)
    }

    /// Polar angle in `(-π, π]`.
    pub fn angle(&self) -> f64 {
        self.dy.atan2(self.dx)
    }
}

/// `d(k) = (v + w cos ka, w sin ka)`.
pub fn bloch_vector(k: f64, cfg: &SshConfig) -> BlochVector2 {
    let (s, c) = (k * cfg.a).sin_cos();
    BlochVector2 {
        dx: cfg.v + cfg.w * c,
        dy: cfg.w * s,
        k,
    }
}

/// `(-d(k), +d(k))`.
pub fn bands(k: f64, cfg: &SshConfig) -> (f64, f64) {
    let d = bloch_vector(k, cfg).norm();
    (-d, d)
}

fn gapped_vector(k: f64, cfg: &SshConfig) -> Result<BlochVector2> {
    let d = bloch_vector(k, cfg);
    if d.norm() <= METALLIC * cfg.energy_scale() {
        Err(TopoError::GapClosed { ka: k * cfg.a })
    } else {
        Ok(d)
    }
}

/// `(∓e^{-iφ(k)}, 1) e^{iχ}/√2` for the lower/upper band.
pub fn eigenstate(k: f64, cfg: &SshConfig, band: Band, chi: f64) -> Result<StateVector> {
    let phi = gapped_vector(k, cfg)?.angle();
    Ok(state_from_angle(phi, band, chi))
}

/// Eigenstate as a function of the polar angle alone.
pub fn state_from_angle(phi: f64, band: Band, chi: f64) -> StateVector {
    let gauge = Complex64::cis(chi) * FRAC_1_SQRT_2;
    StateVector {
        phi1: Complex64::cis(-phi) * band.sign() * gauge,
        phi2: gauge,
        chi,
    }
}

/// `φ(k) = arg(dx + i dy)` in `(-π, π]`.
pub fn phi_of_k(k: f64, cfg: &SshConfig) -> Result<f64> {
    Ok(gapped_vector(k, cfg)?.angle())
}

/// `φ` along `ks`, unwrapped to a continuous branch that starts in `(-π, π]`.
pub fn phi_path(ks: &[f64], cfg: &SshConfig) -> Result<Vec<f64>> {
    let mut out = Vec::with_capacity(ks.len());
    let mut prev: Option<(f64, f64)> = None;
    for &k in ks {
        let raw = phi_of_k(k, cfg)?;
        let value = match prev {
            None => raw,
            Some((last_raw, last)) => last + principal(raw - last_raw),
        };
        out.push(value);
        prev = Some((raw, value));
    }
    Ok(out)
}

/// Solves `sin(ka + φ) = -(v/w) sin φ` for `ka = -φ - arcsin((v/w) sin φ)`.
///
/// `None` when `|(v/w) sin φ| > 1`: the state with polar angle `φ` is not
/// the image of any momentum.
pub fn projection_solvable(phi: f64, cfg: &SshConfig) -> Option<f64> {
    if cfg.w.is_nan() || cfg.w <= 0.0 {
        return None;
    }
    let x = cfg.v / cfg.w * phi.sin();
    if x.abs() > 1.0 {
        None
    } else {
        Some(-phi - x.asin())
    }
}

/// Berry connection of the lower band in the global φ trivialization: `½ dφ`.
pub fn connection_ssh(_phi: f64) -> ConnectionSample {
    ConnectionSample {
        a_phi: 0.5,
        a_theta: 0.0,
        chart: None,
    }
}

/// Uniform momenta `k_j = (-π + 2πj/n)/a`, `j = 0..n` (the zone edge is not repeated).
pub fn bz_momenta(cfg: &SshConfig, n: usize) -> Vec<f64> {
    (0..n)
        .map(|j| (-PI + TAU * j as f64 / n as f64) / cfg.a)
        .collect()
}

/// Uniform momenta refined until neighbouring polar angles differ by at most
/// `max_step` (including the closing step back to the first momentum).
///
/// Near the gapless line `φ(k)` turns quickly at the zone edge; bisecting
/// there keeps every overlap link on the correct branch.
pub fn refined_bz_momenta(cfg: &SshConfig, n: usize, max_step: f64) -> Result<Vec<f64>> {
    const MAX_DEPTH: u32 = 64;
    let base = bz_momenta(cfg, n);
    let period = TAU / cfg.a;
    let mut out = Vec::with_capacity(base.len());
    for (j, &ka) in base.iter().enumerate() {
        let kb = if j + 1 < base.len() {
            base[j + 1]
        } else {
            base[0] + period
        };
        // depth-first bisection, emitting left endpoints in order
        let mut stack = vec![(ka, kb, phi_of_k(ka, cfg)?, phi_of_k(kb, cfg)?, 0u32)];
        while let Some((lo, hi, p_lo, p_hi, depth)) = stack.pop() {
            if principal(p_hi - p_lo).abs() <= max_step {
                out.push(lo);
                continue;
            }
            if depth >= MAX_DEPTH {
                return Err(TopoError::GapClosed {
                    ka: 0.5 * (lo + hi) * cfg.a,
                });
            }
            let mid = 0.5 * (lo + hi);
            let p_mid = phi_of_k(mid, cfg)?;
            stack.push((mid, hi, p_mid, p_hi, depth + 1));
            stack.push((lo, mid, p_lo, p_mid, depth + 1));
        }
    }
    Ok(out)
}

/// Closed chain of `band` eigenstates on the uniform Brillouin-zone grid.
pub fn bz_loop(cfg: &SshConfig, n: usize, band: Band) -> Result<StateChain> {
    momentum_loop(cfg, &bz_momenta(cfg, n), band)
}

/// Closed chain of `band` eigenstates at the given momenta.
pub fn momentum_loop(cfg: &SshConfig, ks: &[f64], band: Band) -> Result<StateChain> {
    let states = ks
        .iter()
        .map(|&k| eigenstate(k, cfg, band, 0.0))
        .collect::<Result<Vec<_>>>()?;
    StateChain::new(states, true)
}

/// Direct gap `min_k 2 d(k)` and the momentum attaining it.
///
/// `d(k)²` is affine in `cos ka`, so the extremes sit at `ka = 0` and
/// `ka = π`; for non-negative hoppings the minimum is at the zone edge.
pub fn min_gap(cfg: &SshConfig) -> (f64, f64) {
    let edge = cfg.zone_edge();
    let at_edge = bands(edge, cfg).1;
    let at_centre = bands(0.0, cfg).1;
    if at_centre < at_edge {
        (2.0 * at_centre, 0.0)
    } else {
        (2.0 * at_edge, edge)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Boundary {
    Open,
    Periodic,
}

impl fmt::Display for Boundary {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Boundary::Open => "open",
            Boundary::Periodic => "periodic",
        })
    }
}

impl std::str::FromStr for Boundary {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        match s {
            "open" => Ok(Boundary::Open),
            "periodic" => Ok(Boundary::Periodic),
            other => Err(format!(
                "unknown boundary {other:?} (expected open or periodic)"
            )),
        }
    }
}

/// Real-space Hamiltonian on the basis `|A,1>, |B,1>, …, |A,N>, |B,N>`.
#[derive(Debug, Clone, PartialEq)]
pub struct ChainMatrix {
    n_cells: usize,
    boundary: Boundary,
    matrix: DMatrix<f64>,
}

impl ChainMatrix {
    pub fn n_cells(&self) -> usize {
        self.n_cells
    }

    pub fn boundary(&self) -> Boundary {
        self.boundary
    }

    pub fn matrix(&self) -> &DMatrix<f64> {
        &self.matrix
    }

    pub fn dim(&self) -> usize {
        2 * self.n_cells
    }
}

pub fn build_chain(n_cells: usize, cfg: &SshConfig, boundary: Boundary) -> Result<ChainMatrix> {
    if n_cells == 0 {
        return Err(TopoError::Argument(
            "a chain needs at least one cell".into(),
        ));
    }
    if boundary == Boundary::Periodic && n_cells < 2 {
        return Err(TopoError::Argument(
            "a periodic chain needs at least two cells".into(),
        ));
    }
    let dim = 2 * n_cells;
    let mut m = DMatrix::zeros(dim, dim);
    for n in 0..n_cells {
        let (a, b) = (2 * n, 2 * n + 1);
        m[(a, b)] = cfg.v;
        m[(b, a)] = cfg.v;
        if n + 1 < n_cells {
            m[(b, b + 1)] = cfg.w;
            m[(b + 1, b)] = cfg.w;
        }
    }
    if boundary == Boundary::Periodic {
        m[(dim - 1, 0)] = cfg.w;
        m[(0, dim - 1)] = cfg.w;
    }
    Ok(ChainMatrix {
        n_cells,
        boundary,
        matrix: m,
    })
}

/// Eigenpairs sorted by ascending eigenvalue; eigenvectors are the columns.
#[derive(Debug, Clone, PartialEq)]
pub struct Spectrum {
    pub values: Vec<f64>,
    pub vectors: DMatrix<f64>,
}

/// Dense real-symmetric diagonalization (Householder tridiagonalization
/// followed by implicit QR, via `nalgebra`).
pub fn chain_spectrum(m: &ChainMatrix) -> Result<Spectrum> {
    let dim = m.dim();
    let max_iterations = 100 * dim;
    let eig = SymmetricEigen::try_new(m.matrix.clone(), f64::EPSILON, max_iterations).ok_or(
        TopoError::Convergence {
            dim,
            max_iterations,
        },
    )?;
    let mut order: Vec<usize> = (0..dim).collect();
    order.sort_by(|&i, &j| eig.eigenvalues[i].total_cmp(&eig.eigenvalues[j]));
    let values = order.iter().map(|&i| eig.eigenvalues[i]).collect();
    let vectors = DMatrix::from_fn(dim, dim, |r, c| eig.eigenvectors[(r, order[c])]);
    Ok(Spectrum { values, vectors })
}

/// Probability weight of one eigenvector near the chain ends.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct EdgeWeights {
    /// Weight in the first `min(EDGE_CELLS, n/2)` cells.
    pub left: f64,
    /// Weight in the last `min(EDGE_CELLS, n/2)` cells.
    pub right: f64,
    /// Weight on the two terminal sites `|A,1>` and `|B,N>`.
    pub end_sites: f64,
}

impl EdgeWeights {
    pub fn total(&self) -> f64 {
        self.left + self.right
    }
}

pub fn edge_weights(spectrum: &Spectrum, index: usize, n_cells: usize) -> EdgeWeights {
    let column = spectrum.vectors.column(index);
    let dim = column.len();
    let cells = EDGE_CELLS.min(n_cells / 2).max(1).min(n_cells);
    let sites = 2 * cells;
    let weight =
        |range: std::ops::Range<usize>| -> f64 { range.map(|i| column[i] * column[i]).sum() };
    let left = weight(0..sites.min(dim));
    let right = if 2 * sites <= dim {
        weight(dim - sites..dim)
    } else {
        0.0
    };
    EdgeWeights {
        left,
        right,
        end_sites: column[0] * column[0]
            + if dim > 1 {
                column[dim - 1] * column[dim - 1]
            } else {
                0.0
            },
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct EdgeMode {
    pub index: usize,
    pub energy: f64,
    pub weights: EdgeWeights,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EdgeReport {
    pub count: usize,
    pub zero_tol: f64,
    pub modes: Vec<EdgeMode>,
}

/// Eigenvalues with `|E| < zero_tol` and their weight near each end.
pub fn edge_state_report(spectrum: &Spectrum, n_cells: usize, zero_tol: f64) -> EdgeReport {
    let modes: Vec<EdgeMode> = spectrum
        .values
        .iter()
        .enumerate()
        .filter(|(_, e)| e.abs() < zero_tol)
        .map(|(index, &energy)| EdgeMode {
            index,
            energy,
            weights: edge_weights(spectrum, index, n_cells),
        })
        .collect();
    EdgeReport {
        count: modes.len(),
        zero_tol,
        modes,
    }
}
