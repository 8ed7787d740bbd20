//! End-to-end verification of the centered interval hypothesis.
//!
//! The perturbative machinery applies to a weight symbol on a level window
//! when three conditions hold at every level of the window: the level set
//! is a radial graph whose volume-matched ball stays inside a fixed compact
//! ball, its hyperbolic barycenter can be moved to the origin, and after
//! recentering the radial deviation from the matched sphere is small in
//! `W^{1,infty}`. [`verify_setup`] drives the full pipeline (extraction,
//! barycenter, recentering, deviation norms) over the standard level band
//! and returns a serializable certificate with per-level diagnostics, so a
//! failed hypothesis names the level and the condition that broke it.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::barycenter::{hyperbolic_barycenter, recenter_level_set};
use crate::dominance::{sweep_window, window_level_grid};
use crate::error::{Error, Result};
use crate::geometry::{euclid_of_bergman, WeightParams};
use crate::holo::Holo;
use crate::levels::{extract_level_set, volume_matched_radius, RadialGraphLevelSet};
use crate::sphere::SphereFunction;
use crate::symbol::{LevelSymbol, WeightedSymbol};

/// Bound on the recentered barycenter norm: recentering must return the
/// barycenter to the origin up to solver resolution.
pub const CENTER_TOLERANCE: f64 = 1e-8;

/// Resolution of a setup run.
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct SetupGrid {
    /// Number of levels across the standard band.
    pub level_count: usize,
    /// Rays per level-set extraction.
    pub n_rays: usize,
    /// Radial quadrature order of the symbol normalization.
    pub order: usize,
    /// Circle nodes of the symbol normalization.
    pub n_circ: usize,
}

impl Default for SetupGrid {
    fn default() -> Self {
        Self {
            level_count: 20,
            n_rays: 256,
            order: 64,
            n_circ: 256,
        }
    }
}

/// Verdict for one level of the window.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct LevelCertificate {
    /// The level `t`.
    pub level: f64,
    /// Extraction, barycenter, and recentering all succeeded.
    pub within_regime: bool,
    /// The condition that failed, when one did.
    pub reason: Option<String>,
    /// Euclidean radius of the volume-matched centered ball.
    pub matched_radius: Option<f64>,
    /// Barycenter norm before recentering.
    pub barycenter_norm: Option<f64>,
    /// Barycenter norm after recentering.
    pub recentered_barycenter_norm: Option<f64>,
    /// `W^{1,infty}` norm of the recentered radial deviation.
    pub deviation: Option<f64>,
    /// All three conditions hold at this level.
    pub pass: bool,
}

/// Verdict for the whole window.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SetupCertificate {
    /// First and last level of the grid.
    pub window: (f64, f64),
    /// Euclidean bound `r0` on the matched radii.
    pub radius_bound: f64,
    /// Bound `eps0` on the deviation norms.
    pub deviation_bound: f64,
    /// Bound on the recentered barycenter norms.
    pub center_tolerance: f64,
    /// Per-level verdicts, ascending in `t`.
    pub levels: Vec<LevelCertificate>,
    /// Levels whose graph machinery succeeded.
    pub levels_in_regime: usize,
    /// Every level is in the regime and satisfies all three conditions.
    pub pass: bool,
    /// Reason of the first failing level, when the certificate fails.
    pub reason: Option<String>,
}

/// Runs the full level-set pipeline for the normalized symbol of `f` over
/// the standard window and certifies, per level: matched radius at most
/// `r0`, recentered barycenter at most [`CENTER_TOLERANCE`], and recentered
/// radial deviation at most `eps0` in `W^{1,infty}`.
pub fn verify_setup(
    f: &dyn Holo,
    params: WeightParams,
    r0: f64,
    eps0: f64,
    grid: &SetupGrid,
) -> Result<SetupCertificate> {
    if !(r0 > 0.0 && r0 < 1.0) {
        return Err(Error::Domain(format!(
            "radius bound r0={r0} must lie in (0,1)"
        )));
    }
    if !(eps0 > 0.0) {
        return Err(Error::Domain(format!(
            "deviation bound eps0={eps0} must be positive"
        )));
    }
    let symbol = WeightedSymbol::normalized(f, params, grid.order, grid.n_circ)?;
    let levels = window_level_grid(params.alpha, grid.level_count)?;
    let verdicts: Vec<LevelCertificate> = levels
        .par_iter()
        .map(|&t| certify_level(&symbol, t, grid.n_rays, r0, eps0))
        .collect();

    let levels_in_regime = verdicts.iter().filter(|v| v.within_regime).count();
    let pass = verdicts.iter().all(|v| v.pass);
    let reason = verdicts
        .iter()
        .find(|v| !v.pass)
        .and_then(|v| v.reason.clone());
    Ok(SetupCertificate {
        window: (levels[0], *levels.last().unwrap()),
        radius_bound: r0,
        deviation_bound: eps0,
        center_tolerance: CENTER_TOLERANCE,
        levels: verdicts,
        levels_in_regime,
        pass,
        reason,
    })
}

fn certify_level(
    symbol: &dyn LevelSymbol,
    t: f64,
    n_rays: usize,
    r0: f64,
    eps0: f64,
) -> LevelCertificate {
    let mut cert = LevelCertificate {
        level: t,
        within_regime: false,
        reason: None,
        matched_radius: None,
        barycenter_norm: None,
        recentered_barycenter_norm: None,
        deviation: None,
        pass: false,
    };
    match run_level(symbol, t, n_rays) {
        Err(e) => {
            cert.reason = Some(e.to_string());
        }
        Ok(run) => {
            cert.within_regime = true;
            cert.matched_radius = Some(run.matched_radius);
            cert.barycenter_norm = Some(run.barycenter_norm);
            cert.recentered_barycenter_norm = Some(run.recentered_barycenter_norm);
            cert.deviation = Some(run.deviation);
            if run.matched_radius > r0 {
                cert.reason = Some(format!(
                    "matched radius {:.6} exceeds the bound {r0}",
                    run.matched_radius
                ));
            } else if run.recentered_barycenter_norm > CENTER_TOLERANCE {
                cert.reason = Some(format!(
                    "recentered barycenter norm {:.3e} exceeds {CENTER_TOLERANCE:.0e}",
                    run.recentered_barycenter_norm
                ));
            } else if run.deviation > eps0 {
                cert.reason = Some(format!(
                    "radial deviation {:.6} exceeds the bound {eps0}",
                    run.deviation
                ));
            } else {
                cert.pass = true;
            }
        }
    }
    cert
}

struct LevelRun {
    matched_radius: f64,
    barycenter_norm: f64,
    recentered_barycenter_norm: f64,
    deviation: f64,
}

fn run_level(symbol: &dyn LevelSymbol, t: f64, n_rays: usize) -> Result<LevelRun> {
    let window = sweep_window();
    let graph = extract_level_set(symbol, t, n_rays, &window)?;
    let bar = hyperbolic_barycenter(&graph)?;
    let recentered = recenter_level_set(symbol, &graph, bar.point, &window)?;
    let rebar = hyperbolic_barycenter(&recentered)?;
    let matched = euclid_of_bergman(volume_matched_radius(&recentered)?);
    Ok(LevelRun {
        matched_radius: matched,
        barycenter_norm: bar.point.norm(),
        recentered_barycenter_norm: rebar.point.norm(),
        deviation: deviation_w1_inf(&recentered, matched)?,
    })
}

/// `W^{1,infty}` norm of the relative deviation of the graph radii from the
/// matched radius.
fn deviation_w1_inf(graph: &RadialGraphLevelSet, matched: f64) -> Result<f64> {
    let samples: Vec<f64> = graph.rho.iter().map(|&r| r / matched - 1.0).collect();
    SphereFunction::from_samples(samples)?.w1_inf()
}
