//! Distribution dominance of level-set volumes against the model profile.
//!
//! For a normalized symbol `u` on the disk, the distribution function
//! `mu(t)` is the invariant volume of the superlevel set `{u > t}`, and the
//! model profile is `mu*(t) = (C_n/2n)(t^{-1/alpha} - 1)^n`, the
//! distribution of the pure weight. Dominance `mu(t) <= mu*(t)` propagates
//! from an anchor level to all higher levels by ODE comparison, because the
//! measured profile satisfies the differential inequality
//!
//! `-mu'(t) >= P(E_t)^2 / J(t) >= Phi(mu(t)) / t`
//!
//! (Cauchy-Schwarz on the coarea formula, then the isoperimetric bound)
//! while the model solves the comparison equation exactly.
//!
//! This module implements the constructive side: [`dominance_margins`] runs
//! the anchor search and records per-level margins, [`ode_comparison`]
//! measures the differential inequality at one level with fresh
//! finite-difference extractions, [`model_ode_residual`] checks the model
//! identity itself, and [`layer_cake_moment`] converts the measured
//! distribution into moment integrals with closed-form model tails.

use crate::error::{Error, Result};
use crate::geometry::{
    comparison_g, iso_profile_phi, model_level, model_volume, sphere_area, WeightParams,
};
use crate::holo::{bergman_mean_pow, Holo};
use crate::levels::{extract_level_set, level_flux, level_perimeter, GraphWindow};
use crate::quad::trapezoid;
use crate::symbol::LevelSymbol;

/// Margin tolerance to which the anchor level is refined by bisection.
const ANCHOR_TOL: f64 = 1e-8;

/// Bisection iteration cap for the anchor refinement.
const ANCHOR_MAX_ITER: usize = 80;

/// Default relative finite-difference step for volume rates in `t`.
pub const FD_STEP_REL: f64 = 1e-4;

/// Extraction window for full-band level sweeps. The accept band is the
/// standard `[0.25, 0.75]` padded to `[0.2, 0.8]`: sweep grids place their
/// endpoint levels exactly on the standard band edges, and a normalized
/// symbol's scale shift would otherwise push an endpoint level just outside
/// the band.
pub fn sweep_window() -> GraphWindow {
    GraphWindow {
        bracket_lo: 0.1,
        bracket_hi: 0.875,
        band_lo: 0.2,
        band_hi: 0.8,
    }
}

/// Ascending level grid whose model radii sweep the standard accept band:
/// `count` levels from `t(0.75) = (1 - 0.75^2)^alpha` up to `t(0.25)`.
pub fn window_level_grid(alpha: f64, count: usize) -> Result<Vec<f64>> {
    if count < 2 {
        return Err(Error::InvalidArgument(format!(
            "level grid needs at least 2 levels, got {count}"
        )));
    }
    let lo = model_level(0.75, alpha)?;
    let hi = model_level(0.25, alpha)?;
    let step = (hi - lo) / (count - 1) as f64;
    Ok((0..count).map(|i| lo + step * i as f64).collect())
}

/// Outcome of the dominance anchor search over a level grid.
#[derive(Debug, Clone)]
pub struct DominanceReport {
    /// The ascending level grid.
    pub levels: Vec<f64>,
    /// Measured superlevel volumes `mu(t)`.
    pub volumes: Vec<f64>,
    /// Model profile values `mu*(t)`.
    pub model_volumes: Vec<f64>,
    /// Per-level margins `mu*(t) - mu(t)`.
    pub margins: Vec<f64>,
    /// Per-level comparison-gauge margins `G(mu) - G(mu*)`; same sign as
    /// `margins` since the gauge is decreasing in volume.
    pub g_margins: Vec<f64>,
    /// Index of the first grid level with `mu <= mu*`.
    pub anchor_index: usize,
    /// The anchor level: the bisection-refined crossing of `mu` and `mu*`
    /// below `levels[anchor_index]`, or the first grid level when the whole
    /// grid is dominated.
    pub anchor_level: f64,
    /// Smallest margin at or above the anchor index.
    pub min_post_anchor_margin: f64,
}

/// Measures `mu(t)` for every grid level and locates the dominance anchor:
/// the first grid level with `mu(t) <= mu*(t)`, refined by bisection to a
/// level where the two volumes agree to 1e-8.
///
/// Fails with a solver error if no grid level is dominated. The levels must
/// be ascending and extraction must succeed at each of them.
pub fn dominance_margins(
    symbol: &dyn LevelSymbol,
    levels: &[f64],
    n_rays: usize,
    window: &GraphWindow,
) -> Result<DominanceReport> {
    if levels.len() < 2 {
        return Err(Error::InvalidArgument(format!(
            "dominance sweep needs at least 2 levels, got {}",
            levels.len()
        )));
    }
    if levels.windows(2).any(|w| w[1] <= w[0]) {
        return Err(Error::InvalidArgument(
            "dominance levels must be strictly ascending".into(),
        ));
    }
    let params = symbol.params();
    let mut volumes = Vec::with_capacity(levels.len());
    let mut model_volumes = Vec::with_capacity(levels.len());
    let mut margins = Vec::with_capacity(levels.len());
    let mut g_margins = Vec::with_capacity(levels.len());
    for &t in levels {
        let graph = extract_level_set(symbol, t, n_rays, window)?;
        let mu_star = model_volume(t, &params)?;
        volumes.push(graph.volume);
        model_volumes.push(mu_star);
        margins.push(mu_star - graph.volume);
        g_margins.push(comparison_g(graph.volume, mu_star, &params)?);
    }

    let anchor_index = margins
        .iter()
        .position(|&m| m >= 0.0)
        .ok_or_else(|| Error::Solver("no dominated level in the sweep window".into()))?;
    let anchor_level = if anchor_index == 0 {
        levels[0]
    } else {
        refine_anchor(
            symbol,
            &params,
            levels[anchor_index - 1],
            levels[anchor_index],
            n_rays,
            window,
        )?
    };
    let min_post_anchor_margin = margins[anchor_index..]
        .iter()
        .cloned()
        .fold(f64::INFINITY, f64::min);
    Ok(DominanceReport {
        levels: levels.to_vec(),
        volumes,
        model_volumes,
        margins,
        g_margins,
        anchor_index,
        anchor_level,
        min_post_anchor_margin,
    })
}

/// Bisection for the level where `mu(t) = mu*(t)`, given a bracketing pair
/// with `mu > mu*` at `lo` and `mu <= mu*` at `hi`. Every probe is a fresh
/// extraction.
fn refine_anchor(
    symbol: &dyn LevelSymbol,
    params: &WeightParams,
    mut lo: f64,
    mut hi: f64,
    n_rays: usize,
    window: &GraphWindow,
) -> Result<f64> {
    for _ in 0..ANCHOR_MAX_ITER {
        let mid = 0.5 * (lo + hi);
        let graph = extract_level_set(symbol, mid, n_rays, window)?;
        let margin = model_volume(mid, params)? - graph.volume;
        if margin.abs() <= ANCHOR_TOL {
            return Ok(mid);
        }
        if margin < 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
        if hi - lo <= f64::EPSILON * hi {
            return Ok(hi);
        }
    }
    Err(Error::Solver(format!(
        "anchor bisection did not reach tolerance {ANCHOR_TOL:.0e} in {ANCHOR_MAX_ITER} steps"
    )))
}

/// One-level measurement of the dominance differential inequality.
#[derive(Debug, Clone, Copy)]
pub struct OdeComparisonPoint {
    /// The level `t`.
    pub level: f64,
    /// Superlevel volume `mu(t)`.
    pub volume: f64,
    /// Invariant perimeter `P(E_t)`.
    pub perimeter: f64,
    /// Boundary flux `J(t)`.
    pub flux: f64,
    /// `-mu'(t)` by a five-point central difference with fresh extractions.
    pub neg_volume_rate: f64,
    /// Relative error in the flux identity `J = 4 n alpha t mu`.
    pub flux_identity_error: f64,
    /// The Cauchy-Schwarz bound `P^2 / J`.
    pub coarea_bound: f64,
    /// The isoperimetric bound `Phi(mu) / t`.
    pub profile_bound: f64,
    /// Relative violation `(P^2/J - (-mu')) / (-mu')`; the differential
    /// inequality holds when this is nonpositive up to difference noise.
    pub violation: f64,
}

/// Measures volume, perimeter, flux, and the finite-difference volume rate
/// at one level, and reports the differential-inequality bounds.
///
/// The step is `h = h_rel * t`; extraction must succeed at `t`, `t +- h`,
/// and `t +- 2h`.
pub fn ode_comparison(
    symbol: &dyn LevelSymbol,
    t: f64,
    n_rays: usize,
    window: &GraphWindow,
    h_rel: f64,
) -> Result<OdeComparisonPoint> {
    if !(h_rel > 0.0 && h_rel < 0.1) {
        return Err(Error::InvalidArgument(format!(
            "relative step h_rel={h_rel} must lie in (0, 0.1)"
        )));
    }
    let params = symbol.params();
    let graph = extract_level_set(symbol, t, n_rays, window)?;
    let perimeter = level_perimeter(&graph, symbol)?;
    let flux = level_flux(&graph, symbol)?;
    let h = h_rel * t;
    let mu_at = |tt: f64| -> Result<f64> {
        Ok(extract_level_set(symbol, tt, n_rays, window)?.volume)
    };
    let rate = (-mu_at(t + 2.0 * h)? + 8.0 * mu_at(t + h)? - 8.0 * mu_at(t - h)?
        + mu_at(t - 2.0 * h)?)
        / (12.0 * h);
    let neg_volume_rate = -rate;
    let ident = 4.0 * params.n as f64 * params.alpha * t * graph.volume;
    let coarea_bound = perimeter * perimeter / flux;
    let profile_bound = iso_profile_phi(graph.volume, &params)? / t;
    Ok(OdeComparisonPoint {
        level: t,
        volume: graph.volume,
        perimeter,
        flux,
        neg_volume_rate,
        flux_identity_error: (flux / ident - 1.0).abs(),
        coarea_bound,
        profile_bound,
        violation: (coarea_bound - neg_volume_rate) / neg_volume_rate,
    })
}

/// Relative residual of the model comparison identity
/// `-d mu*/dt = Phi(mu*(t)) / t`, with the derivative taken by the same
/// five-point scheme used on measured profiles (step `h = h_rel * t`).
pub fn model_ode_residual(t: f64, params: &WeightParams, h_rel: f64) -> Result<f64> {
    if !(h_rel > 0.0 && h_rel < 0.1) {
        return Err(Error::InvalidArgument(format!(
            "relative step h_rel={h_rel} must lie in (0, 0.1)"
        )));
    }
    let h = h_rel * t;
    if !(t - 2.0 * h > 0.0 && t + 2.0 * h < 1.0) {
        return Err(Error::Domain(format!(
            "level t={t} with step {h:.3e} leaves the level range (0,1)"
        )));
    }
    let rate = (-model_volume(t + 2.0 * h, params)? + 8.0 * model_volume(t + h, params)?
        - 8.0 * model_volume(t - h, params)?
        + model_volume(t - 2.0 * h, params)?)
        / (12.0 * h);
    let bound = iso_profile_phi(model_volume(t, params)?, params)? / t;
    Ok((-rate / bound - 1.0).abs())
}

/// Moment of the model profile over `[t0, t1]`:
/// `int_{t0}^{t1} s t^{s-1} mu*(t) dt` in closed form, by binomial
/// expansion of `(t^{-1/alpha} - 1)^n`.
///
/// Requires `s > n/alpha` so the integrand is integrable at `t = 0`.
pub fn model_layer_cake_tail(s: f64, params: &WeightParams, t0: f64, t1: f64) -> Result<f64> {
    let n = params.n;
    let alpha = params.alpha;
    if !(s > n as f64 / alpha) {
        return Err(Error::Domain(format!(
            "moment exponent s={s} must exceed n/alpha={}",
            n as f64 / alpha
        )));
    }
    if !(0.0 <= t0 && t0 <= t1 && t1 <= 1.0) {
        return Err(Error::Domain(format!(
            "tail interval [{t0}, {t1}] must be ordered inside [0, 1]"
        )));
    }
    let scale = s * sphere_area(n) / (2.0 * n as f64);
    let mut acc = 0.0;
    let mut binom = 1.0;
    for j in 0..=n {
        // binomial coefficient C(n, j), sign (-1)^{n-j}, power t^{s - j/alpha}.
        let sign = if (n - j) % 2 == 0 { 1.0 } else { -1.0 };
        let e = s - j as f64 / alpha;
        let antiderivative = |t: f64| if t == 0.0 { 0.0 } else { t.powf(e) / e };
        acc += sign * binom * (antiderivative(t1) - antiderivative(t0));
        binom *= (n - j) as f64 / (j + 1) as f64;
    }
    Ok(scale * acc)
}

/// Moment `int u^s dmu` of a normalized symbol by the layer-cake formula:
/// a trapezoid of `s t^{s-1} mu(t)` over a `level_count`-point sweep grid,
/// with the intervals below and above the grid filled by the closed-form
/// model tails.
///
/// The tails assume the symbol is normalized (its sup is close to 1 and its
/// distribution is model-like outside the window), so the result is an
/// approximation whose accuracy is set by the grid resolution and the
/// symbol's distance from the model.
pub fn layer_cake_moment(
    symbol: &dyn LevelSymbol,
    s: f64,
    level_count: usize,
    n_rays: usize,
) -> Result<f64> {
    let params = symbol.params();
    let levels = window_level_grid(params.alpha, level_count)?;
    let window = sweep_window();
    let mut pts = Vec::with_capacity(levels.len());
    for &t in &levels {
        let graph = extract_level_set(symbol, t, n_rays, &window)?;
        pts.push((t, s * t.powf(s - 1.0) * graph.volume));
    }
    let interior = trapezoid(&pts)?;
    let head = model_layer_cake_tail(s, &params, 0.0, levels[0])?;
    let tail = model_layer_cake_tail(s, &params, *levels.last().unwrap(), 1.0)?;
    Ok(head + interior + tail)
}

/// Direct moment `int u^s dmu` of the normalized weighted symbol built from
/// `f` with parameters `(1, p, alpha)`, by quadrature:
/// `E[|f|^{ps}] / (||f||^p)^s / c_{alpha s, 1}` with the expectation under
/// the probability weight of exponent `alpha s`.
///
/// Planar only; requires `alpha s > 1`.
pub fn symbol_moment(
    f: &dyn Holo,
    params: &WeightParams,
    s: f64,
    order: usize,
    n_circ: usize,
) -> Result<f64> {
    if params.n != 1 {
        return Err(Error::InvalidArgument(format!(
            "direct symbol moments are planar only, got n={}",
            params.n
        )));
    }
    let alpha_s = params.alpha * s;
    if !(alpha_s > 1.0) {
        return Err(Error::Domain(format!(
            "moment weight alpha*s={alpha_s} must exceed 1"
        )));
    }
    let scale = bergman_mean_pow(f, params.p, params.alpha, order, n_circ)?;
    let high = bergman_mean_pow(f, params.p * s, alpha_s, order, n_circ)?;
    Ok(high / scale.powf(s) * std::f64::consts::PI / (alpha_s - 1.0))
}
