//! Numerical thresholds used throughout the crate.
//!
//! Every default lives here; operations that accept a [`Tolerances`] value
//! read from it, the rest use these constants directly.

use serde::{Deserialize, Serialize};
use std::f64::consts::PI;

/// Half-width of the equatorial band where the north and south charts overlap.
pub const CHART_EPS: f64 = PI / 20.0;
/// Smallest accepted modulus of a neighbour overlap `<s_i|s_{i+1}>`.
pub const OVERLAP_FLOOR: f64 = 1e-8;
/// Plaquette fluxes closer than this to ±π are rejected.
pub const FLUX_MARGIN: f64 = 1e-6;
/// `|v - w| < METALLIC * max(v, w)` is treated as the gapless point.
pub const METALLIC: f64 = 1e-9;
/// Largest distance (mod 2π) between a Zak phase and 0 or π that still snaps.
pub const ZAK_SNAP: f64 = 1e-4;
/// Largest distance between a raw Chern integral and the integer it reports.
pub const CHERN_ACCEPT: f64 = 1e-6;
/// Edge-mode threshold relative to `max(v, w)`.
pub const EDGE_ZERO: f64 = 1e-3;
/// Generic absolute tolerance.
pub const ABSOLUTE: f64 = 1e-10;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, rename_all = "kebab-case", default)]
pub struct Tolerances {
    pub chart_eps: f64,
    pub overlap_floor: f64,
    pub flux_margin: f64,
    pub metallic: f64,
    pub zak_snap: f64,
    pub chern_accept: f64,
    pub edge_zero: f64,
    pub absolute: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Self {
            chart_eps: CHART_EPS,
            overlap_floor: OVERLAP_FLOOR,
            flux_margin: FLUX_MARGIN,
            metallic: METALLIC,
            zak_snap: ZAK_SNAP,
            chern_accept: CHERN_ACCEPT,
            edge_zero: EDGE_ZERO,
            absolute: ABSOLUTE,
        }
    }
}

impl Tolerances {
    pub const KEYS: [&'static str; 8] = [
        "chart-eps",
        "overlap-floor",
        "flux-margin",
        "metallic",
        "zak-snap",
        "chern-accept",
        "edge-zero",
        "absolute",
    ];

    /// Overrides one threshold by its kebab-case key. Values must be finite and positive.
    pub fn set(&mut self, key: &str, value: f64) -> Result<(), String> {
        if !(value.is_finite() && value > 0.0) {
            return Err(format!("tolerance {key} must be positive, got {value}"));
        }
        let slot = match key {
            "chart-eps" => &mut self.chart_eps,
            "overlap-floor" => &mut self.overlap_floor,
            "flux-margin" => &mut self.flux_margin,
            "metallic" => &mut self.metallic,
            "zak-snap" => &mut self.zak_snap,
            "chern-accept" => &mut self.chern_accept,
            "edge-zero" => &mut self.edge_zero,
            "absolute" => &mut self.absolute,
            _ => {
                return Err(format!(
                    "unknown tolerance key {key:?} (expected one of {})",
                    Self::KEYS.join(", ")
                ))
            }
        };
        *slot = value;
        Ok(())
    }
}
