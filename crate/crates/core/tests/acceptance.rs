//! Acceptance suite. Runs every criterion, prints one PASS/FAIL line each and
//! exits non-zero if any of them fails.

use std::f64::consts::{FRAC_PI_2, PI, TAU};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::process::ExitCode;
use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use topoband::figures::{emit_figure_data, FigureKind};
use topoband::invariants::{
    chern_number, classify, winding_number, zak_from_chain, zak_phase, ChernMethod, PhaseLabel,
    ZakSnap,
};
use topoband::numerics::{angular_distance, discrete_connection, StateChain};
use topoband::sphere::{connection_analytic, transition_function};
use topoband::ssh::{
    bands, bloch_vector, build_chain, bz_loop, chain_spectrum, edge_state_report, min_gap,
    Boundary, SshConfig,
};
use topoband::two_level::{section, ChartAtlas};
use topoband::{Band, Chart, SphericalCoords, Tolerances};

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

macro_rules! ensure {
    ($cond:expr, $($fmt:tt)+) => {
        let ok: bool = $cond;
        if !ok {
            return Err(format!($($fmt)+));
        }
    };
}

fn cfg(v: f64, w: f64) -> SshConfig {
    SshConfig::hoppings(v, w).unwrap()
}

fn timed<T>(f: impl FnOnce() -> T) -> (T, Duration) {
    let start = Instant::now();
    let out = f();
    (out, start.elapsed())
}

fn chern_quantization() -> Outcome {
    let tol = Tolerances::default();
    let (results, elapsed) = timed(|| {
        [Band::Lower, Band::Upper].map(|band| {
            (
                chern_number(band, 24, 24, ChernMethod::Plaquette, &tol),
                chern_number(band, 24, 24, ChernMethod::AnalyticQuadrature, &tol),
            )
        })
    });
    let mut worst_raw = 0.0f64;
    let mut worst_gap = 0.0f64;
    for ((plaq, quad), (band, expect)) in results
        .into_iter()
        .zip([(Band::Lower, -1), (Band::Upper, 1)])
    {
        let plaq = plaq.map_err(|e| format!("{band} plaquette: {e}"))?;
        let quad = quad.map_err(|e| format!("{band} quadrature: {e}"))?;
        ensure!(
            plaq.value == expect,
            "{band} band: C = {} (expected {expect})",
            plaq.value
        );
        ensure!(
            quad.value == expect,
            "{band} band quadrature: C = {}",
            quad.value
        );
        worst_raw = worst_raw.max((plaq.raw_total - expect as f64).abs());
        worst_gap = worst_gap.max((plaq.raw_total - quad.raw_total).abs());
    }
    ensure!(worst_raw < 1e-9, "raw total off integer by {worst_raw:e}");
    ensure!(worst_gap < 1e-6, "methods disagree by {worst_gap:e}");
    ensure!(elapsed < Duration::from_secs(1), "took {elapsed:?}");
    Ok(format!(
        "C_lower=-1 C_upper=+1, |raw-int|={worst_raw:.1e}, |plaq-quad|={worst_gap:.1e}, {elapsed:.2?}"
    ))
}

fn zak_dichotomy() -> Outcome {
    let tol = Tolerances::default();
    let mut rng = ChaCha8Rng::seed_from_u64(55);
    let mut notes = Vec::new();
    for (v, w, target, snap) in [(1.0, 2.0, PI, ZakSnap::Pi), (2.0, 1.0, 0.0, ZakSnap::Zero)] {
        let c = cfg(v, w);
        let (zak, elapsed) = timed(|| zak_phase(&c, 1024, &tol));
        let zak = zak.map_err(|e| e.to_string())?;
        let err = angular_distance(zak.phase, target);
        ensure!(
            err < 1e-6,
            "(v,w)=({v},{w}): phase {} off by {err:e}",
            zak.phase
        );
        ensure!(
            zak.snapped == snap,
            "(v,w)=({v},{w}): snapped to {}",
            zak.snapped
        );
        ensure!(
            elapsed < Duration::from_millis(100),
            "(v,w)=({v},{w}) took {elapsed:?}"
        );

        let chain = bz_loop(&c, 1024, Band::Lower).map_err(|e| e.to_string())?;
        let base = zak_from_chain(&chain, &tol).map_err(|e| e.to_string())?;
        let mut drift = 0.0f64;
        for _ in 0..20 {
            let gauged = chain.regauge(|_| rng.gen_range(-PI..PI));
            let z = zak_from_chain(&gauged, &tol).map_err(|e| e.to_string())?;
            drift = drift.max(angular_distance(z.phase, base.phase));
        }
        ensure!(drift < 1e-10, "(v,w)=({v},{w}): gauge drift {drift:e}");
        notes.push(format!(
            "({v},{w})->{} err={err:.1e} gauge={drift:.1e} {elapsed:.1?}",
            zak.snapped
        ));
    }
    Ok(notes.join("; "))
}

fn gap_closing() -> Outcome {
    let tol = Tolerances::default();
    let w = 1.0;
    for ratio in [0.5, 0.9, 1.0, 1.1, 2.0] {
        let c = cfg(ratio * w, w);
        let (gap, k) = min_gap(&c);
        let expect = 2.0 * (c.v() - c.w()).abs();
        ensure!(
            (gap - expect).abs() < 1e-12,
            "v/w={ratio}: gap {gap} vs {expect}"
        );
        ensure!(
            (k * c.a() - PI).abs() < 1e-12,
            "v/w={ratio}: minimum at ka={}",
            k * c.a()
        );
        let (lo, hi) = bands(PI, &c);
        ensure!(
            (hi - lo - expect).abs() < 1e-12,
            "v/w={ratio}: band gap at zone edge {}",
            hi - lo
        );
        let label = classify(&c, 1024, &tol).map_err(|e| e.to_string())?.label;
        ensure!(
            (label == PhaseLabel::Metallic) == (ratio == 1.0),
            "v/w={ratio}: labelled {label}"
        );
    }
    Ok("min gap 2|v-w| at ka=pi, metallic only at v=w".into())
}

fn winding_zak_consistency() -> Outcome {
    let tol = Tolerances::default();
    let mut rng = ChaCha8Rng::seed_from_u64(0x55_4b);
    let mut topological = 0;
    for trial in 0..50 {
        let (v, w) = (rng.gen_range(0.1..=3.0), rng.gen_range(0.1..=3.0));
        let c = cfg(v, w);
        let winding = winding_number(&c, 1024, &tol).map_err(|e| format!("trial {trial}: {e}"))?;
        let zak = zak_phase(&c, 1024, &tol).map_err(|e| format!("trial {trial}: {e}"))?;
        let snapped = zak.snapped.value().ok_or_else(|| {
            format!(
                "trial {trial} (v={v}, w={w}): Zak phase {} unquantized",
                zak.phase
            )
        })?;
        ensure!(
            winding == 0 || winding == 1,
            "trial {trial}: winding {winding}"
        );
        ensure!(
            snapped / PI == winding as f64,
            "trial {trial}: Zak/pi={} winding={winding}",
            snapped / PI
        );
        ensure!(
            (winding == 1) == (v < w),
            "trial {trial} (v={v}, w={w}): winding {winding}"
        );
        topological += winding;
    }
    Ok(format!("50/50 consistent ({topological} topological)"))
}

fn chart_machinery() -> Outcome {
    let atlas = ChartAtlas::default();
    let eps = atlas.eps();
    let mut rng = ChaCha8Rng::seed_from_u64(23);
    let (mut worst_section, mut worst_conn) = (0.0f64, 0.0f64);
    for _ in 0..100 {
        let theta = rng.gen_range(FRAC_PI_2 - eps..=FRAC_PI_2 + eps);
        let phi = rng.gen_range(0.0..TAU);
        let point = SphericalCoords::new(1.0, theta, phi).map_err(|e| e.to_string())?;
        let north = atlas
            .eigenvector(&point, Band::Lower, Chart::North, 0.0)
            .map_err(|e| e.to_string())?;
        let south = atlas
            .eigenvector(&point, Band::Lower, Chart::South, 0.0)
            .map_err(|e| e.to_string())?;
        let t = transition_function(phi, 0.0);
        let diff = (north.phi1 - t * south.phi1)
            .norm()
            .max((north.phi2 - t * south.phi2).norm());
        worst_section = worst_section.max(diff);
        let a_n = connection_analytic(&atlas, theta, Chart::North, Band::Lower)
            .map_err(|e| e.to_string())?;
        let a_s = connection_analytic(&atlas, theta, Chart::South, Band::Lower)
            .map_err(|e| e.to_string())?;
        worst_conn = worst_conn.max((a_n.a_phi - a_s.a_phi - 1.0).abs());
    }
    ensure!(
        worst_section < 1e-12,
        "sections differ by {worst_section:e}"
    );
    ensure!(worst_conn < 1e-12, "a_N - a_S off by {worst_conn:e}");
    Ok(format!(
        "|psi_N - t psi_S|={worst_section:.1e}, |a_N-a_S-1|={worst_conn:.1e}"
    ))
}

fn observed_orders(errors: &[f64]) -> Vec<f64> {
    errors.windows(2).map(|p| (p[0] / p[1]).log2()).collect()
}

fn connection_convergence() -> Outcome {
    let tol = Tolerances::default();
    let sizes = [64usize, 128, 256, 512];

    // S²: a latitude just inside the chart overlap. On the equator itself the
    // link phases are exact, which leaves nothing to converge.
    let theta = FRAC_PI_2 - ChartAtlas::default().eps() / 2.0;
    let a_phi = connection_analytic(&ChartAtlas::default(), theta, Chart::North, Band::Lower)
        .map_err(|e| e.to_string())?
        .a_phi;
    let mut sphere_err = Vec::new();
    for &n in &sizes {
        let states = (0..n)
            .map(|j| {
                section(
                    theta,
                    TAU * j as f64 / n as f64,
                    Band::Lower,
                    Chart::North,
                    0.0,
                )
            })
            .collect();
        let chain = StateChain::new(states, true).map_err(|e| e.to_string())?;
        let total: f64 = discrete_connection(&chain, &tol)
            .map_err(|e| e.to_string())?
            .iter()
            .sum();
        sphere_err.push((total - TAU * a_phi).abs());
    }

    // SSH: link phase per unit momentum against A_k = ½ dφ/dk at the link midpoint.
    let c = cfg(1.0, 2.0);
    let mut ssh_err = Vec::new();
    for &n in &sizes {
        let chain = bz_loop(&c, n, Band::Lower).map_err(|e| e.to_string())?;
        let links = discrete_connection(&chain, &tol).map_err(|e| e.to_string())?;
        let dk = TAU / (n as f64 * c.a());
        let worst = links
            .iter()
            .enumerate()
            .map(|(j, alpha)| {
                let k_mid = -PI / c.a() + (j as f64 + 0.5) * dk;
                let d = bloch_vector(k_mid, &c);
                let dphi_dk = c.a() * (c.w() * c.w() + c.v() * c.w() * (k_mid * c.a()).cos())
                    / (d.norm() * d.norm());
                (alpha / dk - 0.5 * dphi_dk).abs()
            })
            .fold(0.0, f64::max);
        ssh_err.push(worst);
    }

    let sphere_orders = observed_orders(&sphere_err);
    let ssh_orders = observed_orders(&ssh_err);
    let min_sphere = sphere_orders.iter().copied().fold(f64::INFINITY, f64::min);
    let min_ssh = ssh_orders.iter().copied().fold(f64::INFINITY, f64::min);
    ensure!(min_sphere >= 1.9, "S2 orders {sphere_orders:?}");
    ensure!(min_ssh >= 1.9, "SSH orders {ssh_orders:?}");
    Ok(format!("min order S2={min_sphere:.3} SSH={min_ssh:.3}"))
}

fn bloch_consistency() -> Outcome {
    let c = cfg(1.0, 2.0);
    let mut worst = 0.0f64;
    for n in [16usize, 64, 256] {
        let chain = build_chain(n, &c, Boundary::Periodic).map_err(|e| e.to_string())?;
        let spectrum = chain_spectrum(&chain).map_err(|e| e.to_string())?;
        let mut expected: Vec<f64> = (0..n)
            .flat_map(|m| {
                let (lo, hi) = bands(TAU * m as f64 / (n as f64 * c.a()), &c);
                [lo, hi]
            })
            .collect();
        expected.sort_by(f64::total_cmp);
        ensure!(
            spectrum.values.len() == expected.len(),
            "n={n}: dimension mismatch"
        );
        for (a, b) in spectrum.values.iter().zip(&expected) {
            worst = worst.max((a - b).abs());
        }
    }
    ensure!(worst < 1e-8, "largest deviation {worst:e}");
    Ok(format!("n=16,64,256 match +-|d(k)|, max dev {worst:.1e}"))
}

/// Eigenvalues of a symmetric tridiagonal matrix with zero diagonal, by
/// Sturm-sequence bisection.
fn sturm_eigenvalues(off: &[f64]) -> Vec<f64> {
    let dim = off.len() + 1;
    let below = |x: f64| -> usize {
        let mut count = 0;
        let mut q = -x;
        for i in 0..dim {
            if i > 0 {
                let denom = if q == 0.0 { f64::MIN_POSITIVE } else { q };
                q = -x - off[i - 1] * off[i - 1] / denom;
            }
            if q < 0.0 {
                count += 1;
            }
        }
        count
    };
    let bound = 2.0 * off.iter().fold(0.0f64, |m, b| m.max(b.abs())) + 1.0;
    (0..dim)
        .map(|k| {
            let (mut lo, mut hi) = (-bound, bound);
            for _ in 0..200 {
                let mid = 0.5 * (lo + hi);
                if below(mid) > k {
                    hi = mid;
                } else {
                    lo = mid;
                }
            }
            0.5 * (lo + hi)
        })
        .collect()
}

fn open_off_diagonal(n: usize, v: f64, w: f64) -> Vec<f64> {
    (0..2 * n - 1)
        .map(|i| if i % 2 == 0 { v } else { w })
        .collect()
}

fn bulk_boundary() -> Outcome {
    let start = Instant::now();
    let n = 100;

    // oracle checks on the dense solver
    let single =
        chain_spectrum(&build_chain(1, &cfg(0.7, 1.3), Boundary::Open).map_err(|e| e.to_string())?)
            .map_err(|e| e.to_string())?;
    ensure!(
        (single.values[0] + 0.7).abs() < 1e-12 && (single.values[1] - 0.7).abs() < 1e-12,
        "n=1 spectrum {:?}",
        single.values
    );
    let dimer =
        chain_spectrum(&build_chain(n, &cfg(0.0, 1.0), Boundary::Open).map_err(|e| e.to_string())?)
            .map_err(|e| e.to_string())?;
    let zeros = dimer.values.iter().filter(|e| e.abs() < 1e-12).count();
    let minus = dimer
        .values
        .iter()
        .filter(|e| (*e + 1.0).abs() < 1e-12)
        .count();
    let plus = dimer
        .values
        .iter()
        .filter(|e| (*e - 1.0).abs() < 1e-12)
        .count();
    ensure!(
        zeros == 2 && minus == n - 1 && plus == n - 1,
        "(v,w)=(0,1) spectrum {zeros}/{minus}/{plus}"
    );

    let mut notes = Vec::new();
    for (v, w, expect) in [(0.5, 1.0, 2usize), (1.0, 0.5, 0)] {
        let spectrum =
            chain_spectrum(&build_chain(n, &cfg(v, w), Boundary::Open).map_err(|e| e.to_string())?)
                .map_err(|e| e.to_string())?;
        let oracle = sturm_eigenvalues(&open_off_diagonal(n, v, w));
        let dev = spectrum
            .values
            .iter()
            .zip(&oracle)
            .fold(0.0f64, |m, (a, b)| m.max((a - b).abs()));
        ensure!(dev < 1e-10, "(v,w)=({v},{w}): dense vs Sturm {dev:e}");
        let report = edge_state_report(&spectrum, n, 1e-3);
        ensure!(
            report.count == expect,
            "(v,w)=({v},{w}): {} near-zero modes",
            report.count
        );
        for mode in &report.modes {
            let weight = mode.weights.total();
            ensure!(
                weight > 0.9,
                "(v,w)=({v},{w}): mode {} edge weight {weight}",
                mode.index
            );
        }
        let min_weight = report
            .modes
            .iter()
            .map(|m| m.weights.total())
            .fold(f64::INFINITY, f64::min);
        notes.push(if expect > 0 {
            format!(
                "({v},{w}): {} modes, edge weight >= {min_weight:.4}",
                report.count
            )
        } else {
            format!("({v},{w}): 0 modes")
        });
    }
    let elapsed = start.elapsed();
    ensure!(elapsed < Duration::from_secs(5), "took {elapsed:?}");
    notes.push(format!("{elapsed:.2?}"));
    Ok(notes.join("; "))
}

fn figure_reproduction() -> Outcome {
    let winding =
        emit_figure_data(FigureKind::PhiCurve, &cfg(0.8, 1.0), 629).map_err(|e| e.to_string())?;
    let phi = winding.column("phi_unwrapped").ok_or("missing column")?;
    let variation: f64 = phi.windows(2).map(|p| (p[1] - p[0]).abs()).sum();
    let span = (phi[phi.len() - 1] - phi[0]).abs();
    ensure!((span - TAU).abs() < 1e-9, "v/w=0.8: net change {span}");
    ensure!(
        (variation - TAU).abs() < 1e-9,
        "v/w=0.8: total variation {variation}"
    );
    ensure!(phi.iter().all(|p| p.is_finite()), "non-finite angle");

    let confined =
        emit_figure_data(FigureKind::PhiCurve, &cfg(1.25, 1.0), 629).map_err(|e| e.to_string())?;
    let phi = confined.column("phi_unwrapped").ok_or("missing column")?;
    let bound = 0.8f64.asin();
    let peak = phi.iter().fold(0.0f64, |m, p| m.max(p.abs()));
    ensure!(
        peak <= bound + 1e-9,
        "v/w=1.25: |phi| reaches {peak} > {bound}"
    );
    Ok(format!(
        "variation 2pi for 0.8; max |phi|={peak:.6} <= asin(0.8)={bound:.6} for 1.25"
    ))
}

fn main() -> ExitCode {
    let criteria: [Criterion; 9] = [
        ("chern quantization", chern_quantization),
        ("zak dichotomy", zak_dichotomy),
        ("gap closing", gap_closing),
        ("winding/zak consistency", winding_zak_consistency),
        ("chart machinery", chart_machinery),
        ("connection convergence", connection_convergence),
        ("bloch consistency", bloch_consistency),
        ("bulk-boundary", bulk_boundary),
        ("figure reproduction", figure_reproduction),
    ];
    let mut failures = 0;
    for (i, (name, check)) in criteria.iter().enumerate() {
        let outcome =
            catch_unwind(AssertUnwindSafe(check)).unwrap_or_else(|_| Err("panicked".into()));
        match outcome {
            Ok(detail) => println!("criterion {} {name}: PASS ({detail})", i + 1),
            Err(reason) => {
                failures += 1;
                println!("criterion {} {name}: FAIL ({reason})", i + 1);
            }
        }
    }
    println!(
        "acceptance: {}/{} passed",
        criteria.len() - failures,
        criteria.len()
    );
    if failures == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
