//! Exact algebra of the generic two-level Hamiltonian `H = d·σ`.
//!
//! Eigenvectors are produced as local sections of the lower/upper band line
//! bundle over the unit sphere of directions `d/|d|`. Two charts cover the
//! sphere:
//!
//! | band  | north chart (regular at θ = 0)   | south chart (regular at θ = π)   |
//! |-------|----------------------------------|----------------------------------|
//! | lower | `(e^{-iφ} sin θ/2, -cos θ/2)`    | `(sin θ/2, -e^{iφ} cos θ/2)`     |
//! | upper | `(cos θ/2, e^{iφ} sin θ/2)`      | `(e^{-iφ} cos θ/2, sin θ/2)`     |
//!
//! Each section is multiplied by a gauge factor `e^{iχ}`.

use crate::error::{Result, TopoError};
use crate::tolerances::CHART_EPS;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use std::f64::consts::{FRAC_PI_2, PI, TAU};
use std::fmt;

/// Coefficients of `H = dx σx + dy σy + dz σz`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BlochVector3 {
    pub dx: f64,
    pub dy: f64,
    pub dz: f64,
}

impl BlochVector3 {
    pub const fn new(dx: f64, dy: f64, dz: f64) -> Self {
        Self { dx, dy, dz }
    }

    pub fn norm(&self) -> f64 {
        (self.dx * self.dx + self.dy * self.dy + self.dz * self.dz).sqrt()
    }

    pub fn is_origin(&self) -> bool {
        self.dx == 0.0 && self.dy == 0.0 && self.dz == 0.0
    }

    pub fn scaled(&self, factor: f64) -> Self {
        Self::new(self.dx * factor, self.dy * factor, self.dz * factor)
    }

    /// Spherical coordinates with `φ ∈ [0, 2π)`; `φ = 0` on the polar axis.
    pub fn to_spherical(&self) -> Result<SphericalCoords> {
        if self.is_origin() {
            return Err(TopoError::Origin);
        }
        let rho = self.dx.hypot(self.dy);
        let d = self.norm();
        let theta = rho.atan2(self.dz);
        let phi = if rho == 0.0 {
            0.0
        } else {
            canonical_azimuth(self.dy.atan2(self.dx))
        };
        Ok(SphericalCoords { d, theta, phi })
    }
}

/// Maps an angle into `[0, 2π)`.
pub fn canonical_azimuth(phi: f64) -> f64 {
    let wrapped = phi.rem_euclid(TAU);
    if wrapped >= TAU {
        0.0
    } else {
        wrapped
    }
}

/// Radial length `d > 0`, polar angle `θ ∈ [0, π]`, azimuth `φ ∈ [0, 2π)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SphericalCoords {
    pub d: f64,
    pub theta: f64,
    pub phi: f64,
}

impl SphericalCoords {
    pub fn new(d: f64, theta: f64, phi: f64) -> Result<Self> {
        if !d.is_finite() || d <= 0.0 {
            return Err(TopoError::Origin);
        }
        if !(0.0..=PI).contains(&theta) {
            return Err(TopoError::Argument(format!(
                "polar angle {theta} outside [0, pi]"
            )));
        }
        if !phi.is_finite() {
            return Err(TopoError::Argument(format!("azimuth {phi} is not finite")));
        }
        let phi = if theta == 0.0 || theta == PI {
            0.0
        } else {
            canonical_azimuth(phi)
        };
        Ok(Self { d, theta, phi })
    }

    /// A point on the unit sphere.
    pub fn unit(theta: f64, phi: f64) -> Result<Self> {
        Self::new(1.0, theta, phi)
    }

    pub fn to_cartesian(&self) -> BlochVector3 {
        let (st, ct) = self.theta.sin_cos();
        let (sp, cp) = self.phi.sin_cos();
        BlochVector3::new(self.d * st * cp, self.d * st * sp, self.d * ct)
    }
}

/// Which of the two eigenvalues `E∓ = ∓|d|`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Band {
    Lower,
    Upper,
}

impl Band {
    /// `-1` for the lower band, `+1` for the upper band.
    pub fn sign(self) -> f64 {
        match self {
            Band::Lower => -1.0,
            Band::Upper => 1.0,
        }
    }

    pub fn other(self) -> Band {
        match self {
            Band::Lower => Band::Upper,
            Band::Upper => Band::Lower,
        }
    }
}

impl fmt::Display for Band {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Band::Lower => "lower",
            Band::Upper => "upper",
        })
    }
}

impl std::str::FromStr for Band {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        match s {
            "lower" => Ok(Band::Lower),
            "upper" => Ok(Band::Upper),
            other => Err(format!("unknown band {other:?} (expected lower or upper)")),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Chart {
    North,
    South,
}

impl Chart {
    pub fn name(self) -> &'static str {
        match self {
            Chart::North => "north",
            Chart::South => "south",
        }
    }
}

impl fmt::Display for Chart {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// A normalized pair of amplitudes together with the gauge phase it was built with.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StateVector {
    pub phi1: Complex64,
    pub phi2: Complex64,
    pub chi: f64,
}

impl StateVector {
    /// Normalizes `(phi1, phi2)`; fails on the zero vector.
    pub fn new(phi1: Complex64, phi2: Complex64, chi: f64) -> Result<Self> {
        let norm = (phi1.norm_sqr() + phi2.norm_sqr()).sqrt();
        if !norm.is_finite() || norm <= 0.0 {
            return Err(TopoError::Argument("state vector has zero norm".into()));
        }
        Ok(Self {
            phi1: phi1 / norm,
            phi2: phi2 / norm,
            chi,
        })
    }

    pub fn norm_sqr(&self) -> f64 {
        self.phi1.norm_sqr() + self.phi2.norm_sqr()
    }

    /// `<self|other>`.
    pub fn inner(&self, other: &StateVector) -> Complex64 {
        self.phi1.conj() * other.phi1 + self.phi2.conj() * other.phi2
    }

    /// Multiplies both amplitudes by `e^{iΔχ}` and records the new gauge phase.
    pub fn gauge_transform(&self, delta_chi: f64) -> StateVector {
        let u = Complex64::cis(delta_chi);
        StateVector {
            phi1: self.phi1 * u,
            phi2: self.phi2 * u,
            chi: self.chi + delta_chi,
        }
    }

    /// Bundle projection onto the unit sphere of directions.
    ///
    /// `dx = -2 Re(φ1 φ2*)`, `dy = 2 Im(φ1 φ2*)`, `dz = |φ2|² - |φ1|²`. This is
    /// the point whose lower-band eigenspace contains the state.
    pub fn project_to_sphere(&self) -> BlochVector3 {
        let cross = self.phi1 * self.phi2.conj();
        BlochVector3::new(
            -2.0 * cross.re,
            2.0 * cross.im,
            self.phi2.norm_sqr() - self.phi1.norm_sqr(),
        )
    }

    pub fn amplitudes(&self) -> [Complex64; 2] {
        [self.phi1, self.phi2]
    }
}

/// Free-function form of [`StateVector::gauge_transform`].
pub fn gauge_transform(s: &StateVector, delta_chi: f64) -> StateVector {
    s.gauge_transform(delta_chi)
}

/// Free-function form of [`StateVector::project_to_sphere`].
pub fn project_to_sphere(s: &StateVector) -> BlochVector3 {
    s.project_to_sphere()
}

/// 2×2 Hermitian matrix, row-major.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HermitianMatrix2(pub [[Complex64; 2]; 2]);

impl HermitianMatrix2 {
    pub fn entry(&self, row: usize, col: usize) -> Complex64 {
        self.0[row][col]
    }

    pub fn trace(&self) -> Complex64 {
        self.0[0][0] + self.0[1][1]
    }

    pub fn adjoint(&self) -> HermitianMatrix2 {
        let m = &self.0;
        HermitianMatrix2([
            [m[0][0].conj(), m[1][0].conj()],
            [m[0][1].conj(), m[1][1].conj()],
        ])
    }

    pub fn apply(&self, v: [Complex64; 2]) -> [Complex64; 2] {
        let m = &self.0;
        [
            m[0][0] * v[0] + m[0][1] * v[1],
            m[1][0] * v[0] + m[1][1] * v[1],
        ]
    }

    /// `‖(H - E) ψ‖₂`.
    pub fn residual(&self, energy: f64, s: &StateVector) -> f64 {
        let hv = self.apply(s.amplitudes());
        let r0 = hv[0] - s.phi1 * energy;
        let r1 = hv[1] - s.phi2 * energy;
        (r0.norm_sqr() + r1.norm_sqr()).sqrt()
    }
}

/// `[[dz, dx - i dy], [dx + i dy, -dz]]`.
pub fn hamiltonian_from_bloch(d: &BlochVector3) -> HermitianMatrix2 {
    HermitianMatrix2([
        [Complex64::new(d.dz, 0.0), Complex64::new(d.dx, -d.dy)],
        [Complex64::new(d.dx, d.dy), Complex64::new(-d.dz, 0.0)],
    ])
}

/// `(E_lower, E_upper) = (-|d|, +|d|)`.
pub fn eigenvalues(d: &BlochVector3) -> (f64, f64) {
    let n = d.norm();
    (-n, n)
}

pub fn band_energy(d: &BlochVector3, band: Band) -> f64 {
    band.sign() * d.norm()
}

/// The two-chart cover of S²: north `θ ∈ [0, π/2 + ε]`, south `θ ∈ [π/2 - ε, π]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ChartAtlas {
    eps: f64,
}

impl Default for ChartAtlas {
    fn default() -> Self {
        Self { eps: CHART_EPS }
    }
}

impl ChartAtlas {
    pub fn new(eps: f64) -> Result<Self> {
        if !(eps > 0.0 && eps < FRAC_PI_2) {
            return Err(TopoError::Argument(format!(
                "chart overlap half-width {eps} must lie in (0, pi/2)"
            )));
        }
        Ok(Self { eps })
    }

    pub fn eps(&self) -> f64 {
        self.eps
    }

    pub fn domain(&self, chart: Chart) -> (f64, f64) {
        match chart {
            Chart::North => (0.0, FRAC_PI_2 + self.eps),
            Chart::South => (FRAC_PI_2 - self.eps, PI),
        }
    }

    pub fn contains(&self, chart: Chart, theta: f64) -> bool {
        let (lo, hi) = self.domain(chart);
        theta >= lo && theta <= hi
    }

    pub fn in_overlap(&self, theta: f64) -> bool {
        self.contains(Chart::North, theta) && self.contains(Chart::South, theta)
    }

    /// Charts whose domain contains `theta`, north first.
    pub fn charts_at(&self, theta: f64) -> Vec<Chart> {
        [Chart::North, Chart::South]
            .into_iter()
            .filter(|&c| self.contains(c, theta))
            .collect()
    }

    /// The chart used when a single choice is needed: north on the upper half.
    pub fn preferred_chart(&self, theta: f64) -> Chart {
        if theta <= FRAC_PI_2 {
            Chart::North
        } else {
            Chart::South
        }
    }

    pub fn check(&self, chart: Chart, theta: f64) -> Result<()> {
        if self.contains(chart, theta) {
            Ok(())
        } else {
            let (lo, hi) = self.domain(chart);
            Err(TopoError::ChartDomain {
                chart: chart.name(),
                theta,
                lo,
                hi,
            })
        }
    }

    /// Closed-form eigenvector of `band` in `chart`, times `e^{iχ}`.
    pub fn eigenvector(
        &self,
        coords: &SphericalCoords,
        band: Band,
        chart: Chart,
        chi: f64,
    ) -> Result<StateVector> {
        if coords.d.is_nan() || coords.d <= 0.0 {
            return Err(TopoError::Origin);
        }
        self.check(chart, coords.theta)?;
        Ok(section(coords.theta, coords.phi, band, chart, chi))
    }
}

/// Evaluates a chart section without any domain check.
///
/// Outside its chart the section is still a valid unit eigenvector except at
/// the pole where it is singular (where it silently depends on `φ`).
pub fn section(theta: f64, phi: f64, band: Band, chart: Chart, chi: f64) -> StateVector {
    let (s, c) = (theta / 2.0).sin_cos();
    let gauge = Complex64::cis(chi);
    let (phi1, phi2) = match (band, chart) {
        (Band::Lower, Chart::North) => (Complex64::cis(-phi) * s, Complex64::new(-c, 0.0)),
        (Band::Lower, Chart::South) => (Complex64::new(s, 0.0), -Complex64::cis(phi) * c),
        (Band::Upper, Chart::North) => (Complex64::new(c, 0.0), Complex64::cis(phi) * s),
        (Band::Upper, Chart::South) => (Complex64::cis(-phi) * c, Complex64::new(s, 0.0)),
    };
    StateVector {
        phi1: phi1 * gauge,
        phi2: phi2 * gauge,
        chi,
    }
}

/// [`ChartAtlas::eigenvector`] with the default overlap half-width.
pub fn eigenvector_chart(
    coords: &SphericalCoords,
    band: Band,
    chart: Chart,
    chi: f64,
) -> Result<StateVector> {
    ChartAtlas::default().eigenvector(coords, band, chart, chi)
}
