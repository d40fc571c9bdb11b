//! Plot-ready tables for the SSH d-vector angle, the d-locus circle and the
//! band structure.

use crate::error::{Result, TopoError};
use crate::ssh::{bands, bloch_vector, phi_path, SshConfig};
use serde::Serialize;
use std::f64::consts::PI;
use std::fmt;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum FigureKind {
    PhiCurve,
    DLocus,
    BandCurve,
}

impl FigureKind {
    pub fn columns(self) -> &'static [&'static str] {
        match self {
            FigureKind::PhiCurve => &["ka", "phi_unwrapped"],
            FigureKind::DLocus => &["dx", "dy"],
            FigureKind::BandCurve => &["ka", "e_lower", "e_upper"],
        }
    }
}

impl fmt::Display for FigureKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            FigureKind::PhiCurve => "phi-curve",
            FigureKind::DLocus => "d-locus",
            FigureKind::BandCurve => "band-curve",
        })
    }
}

/// A rectangular table of named numeric columns.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Table {
    pub columns: Vec<String>,
    pub rows: Vec<Vec<f64>>,
}

impl Table {
    pub fn new(columns: &[&str]) -> Self {
        Table {
            columns: columns.iter().map(|c| c.to_string()).collect(),
            rows: Vec::new(),
        }
    }

    pub fn push(&mut self, row: Vec<f64>) {
        debug_assert_eq!(row.len(), self.columns.len());
        self.rows.push(row);
    }

    pub fn column(&self, name: &str) -> Option<Vec<f64>> {
        let idx = self.columns.iter().position(|c| c == name)?;
        Some(self.rows.iter().map(|r| r[idx]).collect())
    }
}

/// `n` evenly spaced values of `ka` from `-π` to `π` inclusive.
pub fn ka_grid(n: usize) -> Vec<f64> {
    (0..n)
        .map(|i| {
            if i + 1 == n {
                PI
            } else {
                -PI + 2.0 * PI * i as f64 / (n - 1) as f64
            }
        })
        .collect()
}

pub fn emit_figure_data(kind: FigureKind, cfg: &SshConfig, n: usize) -> Result<Table> {
    if n < 2 {
        return Err(TopoError::Argument(format!(
            "figure needs at least 2 samples, got {n}"
        )));
    }
    let ka = ka_grid(n);
    let ks: Vec<f64> = ka.iter().map(|x| x / cfg.a()).collect();
    let mut table = Table::new(kind.columns());
    match kind {
        FigureKind::PhiCurve => {
            let phi = phi_path(&ks, cfg)?;
            for (x, p) in ka.iter().zip(phi) {
                table.push(vec![*x, p]);
            }
        }
        FigureKind::DLocus => {
            for k in ks {
                let d = bloch_vector(k, cfg);
                table.push(vec![d.dx, d.dy]);
            }
        }
        FigureKind::BandCurve => {
            for (x, k) in ka.iter().zip(ks) {
                let (lo, hi) = bands(k, cfg);
                table.push(vec![*x, lo, hi]);
            }
        }
    }
    Ok(table)
}
