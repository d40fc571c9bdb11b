//! Chart bookkeeping on S², the U(1) transition function, and closed-form
//! Berry connection and curvature.
//!
//! Connections are written `A = a_phi dφ + a_theta dθ`, with
//! `A = i<ψ|dψ>` evaluated on the chart sections of [`crate::two_level`].
//! Curvature is the coefficient of `dθ∧dφ` in `F = dA`.
//!
//! # Orientation
//!
//! Chern numbers are reported with [`ORIENTATION`] `= -1` applied to the
//! `dθ∧dφ` integral, i.e. S² is integrated with the `dφ∧dθ` orientation.
//! With this convention the lower band carries `C = -1` and the upper band
//! `C = +1`. Plaquette fluxes and curvature values themselves are never
//! sign-flipped; only the final Chern number is.

use crate::error::{Result, TopoError};
use crate::two_level::{Band, Chart, ChartAtlas};
use num_complex::Complex64;
use serde::Serialize;
use std::f64::consts::{PI, TAU};

/// Sign applied to `∫ F_{θφ} dθ dφ / 2π` when reporting Chern numbers.
pub const ORIENTATION: f64 = -1.0;

pub const DEFAULT_GRID: (usize, usize) = (180, 360);

/// Local one-form components. `chart` is `None` for a globally trivial bundle.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ConnectionSample {
    pub a_phi: f64,
    pub a_theta: f64,
    pub chart: Option<Chart>,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CurvatureSample {
    pub f_theta_phi: f64,
}

/// Uniform `(θ, φ)` grid: `n_theta + 1` rows from pole to pole and `n_phi`
/// periodic columns.
#[derive(Debug, Clone, PartialEq)]
pub struct SphereGrid {
    n_theta: usize,
    n_phi: usize,
    atlas: ChartAtlas,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SphereNode {
    pub row: usize,
    pub col: usize,
    pub theta: f64,
    pub phi: f64,
    pub charts: Vec<Chart>,
}

impl SphereGrid {
    pub fn new(n_theta: usize, n_phi: usize, atlas: ChartAtlas) -> Result<Self> {
        if n_theta == 0 || n_phi == 0 {
            return Err(TopoError::Argument(format!(
                "sphere grid {n_theta}x{n_phi} must have positive dimensions"
            )));
        }
        Ok(Self {
            n_theta,
            n_phi,
            atlas,
        })
    }

    pub fn n_theta(&self) -> usize {
        self.n_theta
    }

    pub fn n_phi(&self) -> usize {
        self.n_phi
    }

    pub fn atlas(&self) -> &ChartAtlas {
        &self.atlas
    }

    pub fn overlap_eps(&self) -> f64 {
        self.atlas.eps()
    }

    pub fn d_theta(&self) -> f64 {
        PI / self.n_theta as f64
    }

    pub fn d_phi(&self) -> f64 {
        TAU / self.n_phi as f64
    }

    pub fn theta(&self, row: usize) -> f64 {
        if row == self.n_theta {
            PI
        } else {
            row as f64 * self.d_theta()
        }
    }

    pub fn phi(&self, col: usize) -> f64 {
        (col % self.n_phi) as f64 * self.d_phi()
    }

    pub fn node(&self, row: usize, col: usize) -> SphereNode {
        let theta = self.theta(row);
        SphereNode {
            row,
            col,
            theta,
            phi: self.phi(col),
            charts: self.atlas.charts_at(theta),
        }
    }

    pub fn nodes(&self) -> impl Iterator<Item = SphereNode> + '_ {
        (0..=self.n_theta).flat_map(move |r| (0..self.n_phi).map(move |c| self.node(r, c)))
    }
}

/// Transition function of the lower band, `t_NS = e^{i(-φ + Δχ)}`, with
/// `Δχ = χ_N - χ_S`. Relates the sections by `ψ_N = t_NS ψ_S`.
pub fn transition_function(phi: f64, delta_chi: f64) -> Complex64 {
    transition_function_for(Band::Lower, phi, delta_chi)
}

/// Band-resolved transition function; the upper band winds the other way.
pub fn transition_function_for(band: Band, phi: f64, delta_chi: f64) -> Complex64 {
    let winding = match band {
        Band::Lower => -1.0,
        Band::Upper => 1.0,
    };
    Complex64::cis(winding * phi + delta_chi)
}

/// Closed-form Berry connection of `band` in `chart`.
///
/// | band  | north         | south          |
/// |-------|---------------|----------------|
/// | lower | `sin²(θ/2)`   | `-cos²(θ/2)`   |
/// | upper | `-sin²(θ/2)`  | `cos²(θ/2)`    |
pub fn connection_analytic(
    atlas: &ChartAtlas,
    theta: f64,
    chart: Chart,
    band: Band,
) -> Result<ConnectionSample> {
    atlas.check(chart, theta)?;
    let (s, c) = (theta / 2.0).sin_cos();
    let a_phi = match (band, chart) {
        (Band::Lower, Chart::North) => s * s,
        (Band::Lower, Chart::South) => -c * c,
        (Band::Upper, Chart::North) => -s * s,
        (Band::Upper, Chart::South) => c * c,
    };
    Ok(ConnectionSample {
        a_phi,
        a_theta: 0.0,
        chart: Some(chart),
    })
}

/// `F_{θφ} = ∂θ a_phi`: `½ sin θ` for the lower band, `-½ sin θ` for the upper.
pub fn curvature_analytic(theta: f64, band: Band) -> CurvatureSample {
    CurvatureSample {
        f_theta_phi: -band.sign() * 0.5 * theta.sin(),
    }
}

/// `a_phi(north) - a_phi(south) - 1` for the lower band; zero on the overlap.
pub fn chart_consistency_check(atlas: &ChartAtlas, theta: f64, _phi: f64) -> Result<f64> {
    if !atlas.in_overlap(theta) {
        let (lo, _) = atlas.domain(Chart::South);
        let (_, hi) = atlas.domain(Chart::North);
        return Err(TopoError::ChartDomain {
            chart: "overlap",
            theta,
            lo,
            hi,
        });
    }
    let north = connection_analytic(atlas, theta, Chart::North, Band::Lower)?;
    let south = connection_analytic(atlas, theta, Chart::South, Band::Lower)?;
    Ok(north.a_phi - south.a_phi - 1.0)
}
