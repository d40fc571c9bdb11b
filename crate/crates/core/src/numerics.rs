//! Gauge-invariant discrete geometry of sampled state families.
//!
//! Everything here is built from neighbour overlaps `U = <s_i|s_j>`:
//! link phases approximate `∫A` along a link, their product around a closed
//! loop is the Wilson loop (discrete holonomy), and the product around an
//! elementary grid cell is the plaquette flux (discrete curvature). All logs
//! take the principal branch, so phases live in `(-π, π]`.

use crate::error::{Result, TopoError};
use crate::sphere::SphereGrid;
use crate::tolerances::Tolerances;
use crate::two_level::{section, Band, StateVector};
use num_complex::Complex64;
use std::f64::consts::PI;

/// Maps an angle to `(-π, π]`.
pub fn principal(angle: f64) -> f64 {
    let wrapped = angle - (angle / std::f64::consts::TAU).round() * std::f64::consts::TAU;
    if wrapped <= -PI {
        wrapped + std::f64::consts::TAU
    } else if wrapped > PI {
        wrapped - std::f64::consts::TAU
    } else {
        wrapped
    }
}

/// Distance between two angles on the circle.
pub fn angular_distance(a: f64, b: f64) -> f64 {
    principal(a - b).abs()
}

/// An ordered sample of states along a curve; `closed` adds the link from
/// the last state back to the first.
#[derive(Debug, Clone, PartialEq)]
pub struct StateChain {
    states: Vec<StateVector>,
    closed: bool,
}

impl StateChain {
    pub fn new(states: Vec<StateVector>, closed: bool) -> Result<Self> {
        if states.len() < 2 {
            return Err(TopoError::Argument(format!(
                "a state chain needs at least two states, got {}",
                states.len()
            )));
        }
        if let Some(i) = states
            .iter()
            .position(|s| (s.norm_sqr() - 1.0).abs() > 1e-10)
        {
            return Err(TopoError::Argument(format!("state {i} is not normalized")));
        }
        Ok(Self { states, closed })
    }

    pub fn states(&self) -> &[StateVector] {
        &self.states
    }

    pub fn is_closed(&self) -> bool {
        self.closed
    }

    pub fn len(&self) -> usize {
        self.states.len()
    }

    pub fn is_empty(&self) -> bool {
        self.states.is_empty()
    }

    /// Applies an independent gauge phase `gauge(i)` to every state.
    pub fn regauge(&self, mut gauge: impl FnMut(usize) -> f64) -> StateChain {
        StateChain {
            states: self
                .states
                .iter()
                .enumerate()
                .map(|(i, s)| s.gauge_transform(gauge(i)))
                .collect(),
            closed: self.closed,
        }
    }

    fn link_count(&self) -> usize {
        if self.closed {
            self.states.len()
        } else {
            self.states.len() - 1
        }
    }

    fn link(&self, i: usize, floor: f64) -> Result<Complex64> {
        let j = (i + 1) % self.states.len();
        overlap(&self.states[i], &self.states[j], floor).map_err(|modulus| {
            TopoError::OrthogonalNeighbors {
                index: i,
                next: j,
                modulus,
            }
        })
    }
}

/// `<a|b>`, or its modulus as the error when it falls below `floor`.
fn overlap(a: &StateVector, b: &StateVector, floor: f64) -> std::result::Result<Complex64, f64> {
    let u = a.inner(b);
    let modulus = u.norm();
    if modulus < floor {
        Err(modulus)
    } else {
        Ok(u)
    }
}

/// Link phases `α_i = -arg <s_i|s_{i+1}>`, one per link (including the
/// closing link of a closed chain).
pub fn discrete_connection(chain: &StateChain, tol: &Tolerances) -> Result<Vec<f64>> {
    (0..chain.link_count())
        .map(|i| chain.link(i, tol.overlap_floor).map(|u| -u.arg()))
        .collect()
}

/// Berry phase of a closed chain, `-arg Π <s_i|s_{i+1}>` in `(-π, π]`.
///
/// Independent gauge phases on the nodes cancel pairwise in the product.
pub fn wilson_loop_phase(chain: &StateChain, tol: &Tolerances) -> Result<f64> {
    if !chain.closed {
        return Err(TopoError::Argument(
            "a Wilson loop needs a closed chain".into(),
        ));
    }
    let mut product = Complex64::new(1.0, 0.0);
    for i in 0..chain.link_count() {
        let u = chain.link(i, tol.overlap_floor)?;
        product *= u / u.norm();
    }
    Ok(principal(-product.arg()))
}

/// States on a grid of `rows` node rows and `cols` periodic columns.
#[derive(Debug, Clone, PartialEq)]
pub struct PlaquetteGrid {
    rows: usize,
    cols: usize,
    states: Vec<StateVector>,
}

impl PlaquetteGrid {
    pub fn from_fn(
        rows: usize,
        cols: usize,
        mut state: impl FnMut(usize, usize) -> StateVector,
    ) -> Result<Self> {
        if rows < 2 || cols < 2 {
            return Err(TopoError::Argument(format!(
                "plaquette grid needs at least 2x2 nodes, got {rows}x{cols}"
            )));
        }
        let states: Vec<StateVector> = (0..rows)
            .flat_map(|r| (0..cols).map(move |c| (r, c)))
            .map(|(r, c)| state(r, c))
            .collect();
        if let Some(i) = states
            .iter()
            .position(|s| (s.norm_sqr() - 1.0).abs() > 1e-10)
        {
            return Err(TopoError::Argument(format!(
                "grid state ({}, {}) is not normalized",
                i / cols,
                i % cols
            )));
        }
        Ok(Self { rows, cols, states })
    }

    /// Chart-section states of `band` on every node of `grid`, using the
    /// section that is regular at each node (north on the upper half).
    pub fn from_sphere(grid: &SphereGrid, band: Band) -> Result<Self> {
        let atlas = *grid.atlas();
        Self::from_fn(grid.n_theta() + 1, grid.n_phi(), |r, c| {
            let theta = grid.theta(r);
            section(theta, grid.phi(c), band, atlas.preferred_chart(theta), 0.0)
        })
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn state(&self, row: usize, col: usize) -> &StateVector {
        &self.states[row * self.cols + col % self.cols]
    }

    pub fn regauge(&self, mut gauge: impl FnMut(usize, usize) -> f64) -> PlaquetteGrid {
        let cols = self.cols;
        PlaquetteGrid {
            rows: self.rows,
            cols,
            states: self
                .states
                .iter()
                .enumerate()
                .map(|(i, s)| s.gauge_transform(gauge(i / cols, i % cols)))
                .collect(),
        }
    }
}

/// Per-plaquette fluxes (row-major, `(rows - 1) x cols`) and their sum.
#[derive(Debug, Clone, PartialEq)]
pub struct FluxSum {
    pub rows: usize,
    pub cols: usize,
    pub fluxes: Vec<f64>,
    pub total: f64,
}

impl FluxSum {
    pub fn flux(&self, row: usize, col: usize) -> f64 {
        self.fluxes[row * self.cols + col]
    }

    /// Sum over plaquette rows `rows` and columns `cols`, in row-major order.
    pub fn region_sum(&self, rows: std::ops::Range<usize>, cols: std::ops::Range<usize>) -> f64 {
        rows.flat_map(|r| cols.clone().map(move |c| (r, c)))
            .map(|(r, c)| self.flux(r, c))
            .sum()
    }
}

/// Field strength on every plaquette `(i,j) → (i+1,j) → (i+1,j+1) → (i,j+1)`.
///
/// With rows indexing θ and columns φ the loop runs counter-clockwise in the
/// `(θ, φ)` plane, so a small plaquette measures `F_{θφ} δθ δφ`.
pub fn plaquette_flux_sum(grid: &PlaquetteGrid, tol: &Tolerances) -> Result<FluxSum> {
    let rows = grid.rows - 1;
    let cols = grid.cols;
    let mut fluxes = Vec::with_capacity(rows * cols);
    for r in 0..rows {
        for c in 0..cols {
            let corners = [(r, c), (r + 1, c), (r + 1, c + 1), (r, c + 1)];
            let mut product = Complex64::new(1.0, 0.0);
            for k in 0..4 {
                let (a, b) = (corners[k], corners[(k + 1) % 4]);
                let u = overlap(
                    grid.state(a.0, a.1),
                    grid.state(b.0, b.1),
                    tol.overlap_floor,
                )
                .map_err(|modulus| TopoError::OrthogonalNeighbors {
                    index: a.0 * cols + a.1 % cols,
                    next: b.0 * cols + b.1 % cols,
                    modulus,
                })?;
                product *= u / u.norm();
            }
            let flux = principal(-product.arg());
            if PI - flux.abs() < tol.flux_margin {
                return Err(TopoError::FluxBranch {
                    row: r,
                    col: c,
                    flux,
                    margin: tol.flux_margin,
                });
            }
            fluxes.push(flux);
        }
    }
    let total = fluxes.iter().sum();
    Ok(FluxSum {
        rows,
        cols,
        fluxes,
        total,
    })
}
