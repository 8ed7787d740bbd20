//! Contraction of normalized weighted norms along lines of constant slope,
//! and the gap the contraction deficit keeps above level-set shape.
//!
//! Along a line `(q, beta) = (s p, s alpha)` with `s > 1`, the normalized
//! mean `||f^||^q = int |f^|^q dmu_beta` of `f^ = f / ||f||_{A^p_alpha}` is
//! at most 1, so the deficit `1 - ||f^||^q` is nonnegative. The deficit is
//! not merely nonnegative: it controls the level-set geometry of the symbol
//! `u = |f^|^p (1 - |z|^2)^alpha` through the weighted shape integral
//! `int w(t)^2_{W^{1,2}} t^{s-1} dt`, where `w(t)` is the relative radial
//! deviation of the recentered level set `{u > t}` from its volume-matched
//! disk.
//!
//! For first-order symbol perturbations `f = 1 + eps z` the recentering
//! removes the entire first harmonic, both the deficit and the shape
//! integral scale like `eps^4`, and their ratio stabilizes near 1.9.

use crate::barycenter::{hyperbolic_barycenter, recenter_level_set};
use crate::dominance::{sweep_window, window_level_grid};
use crate::error::{Error, Result};
use crate::geometry::ContractiveLine;
use crate::holo::{bergman_mean_pow, Holo};
use crate::levels::extract_level_set;
use crate::quad::trapezoid;
use crate::sphere::SphereFunction;
use crate::symbol::WeightedSymbol;

/// Shape integrals below this floor are extraction noise; the deficit to
/// shape ratio is not reported for them.
const SHAPE_FLOOR: f64 = 1e-18;

/// Norm comparison along a contractive line.
#[derive(Debug, Clone, Copy)]
pub struct ContractionReport {
    /// `int |f|^p dmu_alpha` at the base of the line.
    pub base_mean: f64,
    /// `int |f|^q dmu_beta` at the lifted point of the line.
    pub lifted_mean: f64,
    /// The normalized lifted mean `||f^||^q = lifted / base^{q/p}`.
    pub normalized_lifted: f64,
    /// `1 - ||f^||^q`, nonnegative by contraction.
    pub deficit: f64,
}

/// Evaluates the contraction deficit of `f` along a line.
pub fn contraction_check(
    f: &dyn Holo,
    line: &ContractiveLine,
    order: usize,
    n_circ: usize,
) -> Result<ContractionReport> {
    let base = line.base;
    let base_mean = bergman_mean_pow(f, base.p, base.alpha, order, n_circ)?;
    let lifted_mean = bergman_mean_pow(f, line.q, line.beta, order, n_circ)?;
    if !(base_mean > 0.0) {
        return Err(Error::Domain(format!(
            "contraction needs a nonzero base norm, got {base_mean}"
        )));
    }
    let normalized_lifted = lifted_mean / base_mean.powf(line.q / base.p);
    Ok(ContractionReport {
        base_mean,
        lifted_mean,
        normalized_lifted,
        deficit: 1.0 - normalized_lifted,
    })
}

/// One level of a gap sweep.
#[derive(Debug, Clone, Copy)]
pub struct GapLevel {
    /// The level `t`.
    pub level: f64,
    /// `W^{1,2}` square norm of the recentered radial deviation.
    pub shape: f64,
    /// Share of the deviation energy in the first angular harmonic;
    /// recentering drives it to zero.
    pub first_harmonic_share: f64,
    /// Norm of the barycenter removed by recentering.
    pub barycenter_norm: f64,
}

/// Contraction deficit of a symbol against the shape of its level sets.
#[derive(Debug, Clone)]
pub struct GapReport {
    /// The contraction deficit `1 - ||f^||^q`.
    pub deficit: f64,
    /// `int shape(t) t^{s-1} dt` over the sweep levels (trapezoid).
    pub shape_integral: f64,
    /// `deficit / shape_integral`, absent when the shape integral sits
    /// below the extraction noise floor.
    pub ratio: Option<f64>,
    /// Largest first-harmonic share across the sweep.
    pub max_first_harmonic_share: f64,
    /// Per-level diagnostics, ascending in `t`.
    pub levels: Vec<GapLevel>,
}

/// Sweeps the level band of the normalized symbol of `f`, recenters each
/// level set at its hyperbolic barycenter, and compares the contraction
/// deficit with the weighted shape integral of the radial deviations.
///
/// The deviation at each level is measured against the mean extracted
/// radius of the recentered set, `w = rho / mean(rho) - 1`.
pub fn gap_check(
    f: &dyn Holo,
    line: &ContractiveLine,
    level_count: usize,
    n_rays: usize,
    order: usize,
    n_circ: usize,
) -> Result<GapReport> {
    let base = line.base;
    let report = contraction_check(f, line, order, n_circ)?;
    let symbol = WeightedSymbol::normalized(&*f, base, order, n_circ)?;
    let window = sweep_window();
    let grid = window_level_grid(base.alpha, level_count)?;

    let mut levels = Vec::with_capacity(grid.len());
    for &t in &grid {
        let graph = extract_level_set(&symbol, t, n_rays, &window)?;
        let bar = hyperbolic_barycenter(&graph)?;
        let recentered = recenter_level_set(&symbol, &graph, bar.point, &window)?;
        let mean_rho: f64 =
            recentered.rho.iter().sum::<f64>() / recentered.n_rays() as f64;
        let deviation: Vec<f64> = recentered
            .rho
            .iter()
            .map(|&r| r / mean_rho - 1.0)
            .collect();
        let w = SphereFunction::from_samples(deviation)?;
        let total = w.mean_square();
        let share = if total > 0.0 {
            w.harmonic_energy(1) / total
        } else {
            0.0
        };
        levels.push(GapLevel {
            level: t,
            shape: w.w12_sq(),
            first_harmonic_share: share,
            barycenter_norm: bar.point.norm(),
        });
    }

    let s = line.s;
    let points: Vec<(f64, f64)> = levels
        .iter()
        .map(|l| (l.level, l.shape * l.level.powf(s - 1.0)))
        .collect();
    let shape_integral = trapezoid(&points)?;
    let ratio = if shape_integral > SHAPE_FLOOR {
        Some(report.deficit / shape_integral)
    } else {
        None
    };
    let max_first_harmonic_share = levels
        .iter()
        .map(|l| l.first_harmonic_share)
        .fold(0.0, f64::max);
    Ok(GapReport {
        deficit: report.deficit,
        shape_integral,
        ratio,
        max_first_harmonic_share,
        levels,
    })
}
