//! Superlevel-set extraction and level-set geometry on the disk.
//!
//! For a symbol `u` close to the pure weight, each superlevel set
//! `{u > t}` in the working window is star-shaped with a radial graph
//! boundary `rho = rho_t(theta)`. Extraction solves `log u = log t` on
//! each ray of a uniform angular grid with a safeguarded Newton iteration,
//! after monitoring that the symbol is strictly monotone along every ray
//! of the bracket annulus (the radial-graph regime).
//!
//! The extracted graph carries everything downstream: invariant volume and
//! perimeter, the boundary flux of the coarea identity, and the Bergman
//! radial deviation used by the stability functionals.
//!
//! All level-set computations are two-dimensional (disk, n = 1); the
//! invariant boundary length of a curve is `dH / (1 - |z|^2)` and the
//! invariant flux of `u` equals the Euclidean flux because the metric
//! factors cancel at n = 1.

use num_complex::Complex64;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::fourier::spectral_derivative;
use crate::geometry::{ball_volume_euclid, bergman_of_euclid, euclid_of_bergman, volume_inverse};
use crate::symbol::{angular_derivative, radial_derivative, LevelSymbol};

/// Number of monitor samples per ray for the monotonicity check.
const MONITOR_SAMPLES: usize = 33;

/// Newton iteration cap per ray.
const NEWTON_MAX_ITER: usize = 60;

/// Target residual for the root of `log u - log t`.
const ROOT_TOL: f64 = 1e-13;

/// Residual above which an extraction is rejected as unconverged.
const VERIFY_TOL: f64 = 1e-12;

/// Minimum of `|grad u| = t |grad log u|` on the level set below which the
/// level is declared non-regular.
const REGULAR_MIN: f64 = 1e-10;

/// Extraction gate: largest admissible log-perturbation of the symbol.
const PHI_GATE: f64 = 0.5;

/// Radial window for level-set extraction: a bracket annulus in which the
/// ray roots are searched, and an accept band that the model radius of the
/// level must hit.
#[derive(Debug, Clone, Copy)]
pub struct GraphWindow {
    pub bracket_lo: f64,
    pub bracket_hi: f64,
    pub band_lo: f64,
    pub band_hi: f64,
}

impl GraphWindow {
    /// The standard mid-disk window: accept band `[0.25, 0.75]`, bracket
    /// annulus `[0.125, 0.825]`.
    pub fn standard() -> Self {
        Self {
            bracket_lo: 0.125,
            bracket_hi: 0.825,
            band_lo: 0.25,
            band_hi: 0.75,
        }
    }

    /// A window centered on a prescribed radius: bracket and band both
    /// `[rho/2, (1+rho)/2]`.
    pub fn around(rho: f64) -> Result<Self> {
        if !(rho > 0.0 && rho < 1.0) {
            return Err(Error::Domain(format!(
                "window center rho={rho} must lie in (0,1)"
            )));
        }
        Ok(Self {
            bracket_lo: rho / 2.0,
            bracket_hi: (1.0 + rho) / 2.0,
            band_lo: rho / 2.0,
            band_hi: (1.0 + rho) / 2.0,
        })
    }
}

/// A superlevel-set boundary as a radial graph on a uniform angular grid,
/// with its invariant volume.
///
/// `level` is the extracted level `t`, or `None` for synthetic graphs built
/// directly from radius samples.
#[derive(Debug, Clone)]
pub struct RadialGraphLevelSet {
    pub level: Option<f64>,
    pub theta: Vec<f64>,
    pub rho: Vec<f64>,
    pub rho_prime: Vec<f64>,
    pub volume: f64,
    pub n: u32,
}

impl RadialGraphLevelSet {
    /// Builds a synthetic graph from Bergman radius samples
    /// `r_j = r(theta_j)` on the uniform grid; `rho_prime` is computed
    /// spectrally from the Euclidean radius samples.
    pub fn from_bergman_graph(r: &[f64]) -> Result<Self> {
        if r.len() < 8 {
            return Err(Error::InvalidArgument(format!(
                "synthetic graph needs at least 8 rays, got {}",
                r.len()
            )));
        }
        if let Some(bad) = r.iter().find(|&&ri| !(ri > 0.0) || !ri.is_finite()) {
            return Err(Error::Domain(format!(
                "bergman radius samples must be positive and finite, got {bad}"
            )));
        }
        let n_rays = r.len();
        let rho: Vec<f64> = r.iter().map(|&ri| euclid_of_bergman(ri)).collect();
        let rho_prime = spectral_derivative(&rho)?;
        let theta = uniform_angles(n_rays);
        let volume = graph_volume(&rho)?;
        Ok(Self {
            level: None,
            theta,
            rho,
            rho_prime,
            volume,
            n: 1,
        })
    }

    /// Builds a synthetic graph from Euclidean radius samples
    /// `rho_j = rho(theta_j)` on the uniform grid, with spectral `rho_prime`.
    pub fn from_euclid_graph(rho: &[f64]) -> Result<Self> {
        if rho.len() < 8 {
            return Err(Error::InvalidArgument(format!(
                "synthetic graph needs at least 8 rays, got {}",
                rho.len()
            )));
        }
        if let Some(bad) = rho.iter().find(|&&ri| !(ri > 0.0 && ri < 1.0)) {
            return Err(Error::Domain(format!(
                "euclidean radius samples must lie in (0,1), got {bad}"
            )));
        }
        let rho = rho.to_vec();
        let rho_prime = spectral_derivative(&rho)?;
        let theta = uniform_angles(rho.len());
        let volume = graph_volume(&rho)?;
        Ok(Self {
            level: None,
            theta,
            rho,
            rho_prime,
            volume,
            n: 1,
        })
    }

    pub fn n_rays(&self) -> usize {
        self.rho.len()
    }

    /// Invariant perimeter of the graph curve:
    /// `(2 pi / N) sum_j sqrt(rho_j^2 + rho_j'^2) / (1 - rho_j^2)`.
    pub fn perimeter_invariant(&self) -> f64 {
        let n = self.n_rays() as f64;
        let mut acc = 0.0;
        for (&rho, &rp) in self.rho.iter().zip(&self.rho_prime) {
            acc += (rho * rho + rp * rp).sqrt() / (1.0 - rho * rho);
        }
        2.0 * std::f64::consts::PI / n * acc
    }

    /// Bergman radius samples `2 artanh(rho_j)`.
    pub fn bergman_radii(&self) -> Vec<f64> {
        self.rho.iter().map(|&rho| bergman_of_euclid(rho)).collect()
    }
}

fn uniform_angles(n_rays: usize) -> Vec<f64> {
    (0..n_rays)
        .map(|j| 2.0 * std::f64::consts::PI * j as f64 / n_rays as f64)
        .collect()
}

/// Invariant volume enclosed by a radial graph: the angular mean of the
/// sector volumes `m(rho_j)`.
fn graph_volume(rho: &[f64]) -> Result<f64> {
    let mut acc = 0.0;
    for &r in rho {
        acc += ball_volume_euclid(r, 1)?;
    }
    Ok(acc / rho.len() as f64)
}

/// Extracts the superlevel-set boundary `{u = t}` as a radial graph on
/// `n_rays` uniform rays.
///
/// Preconditions checked, in order:
/// - the symbol's log-perturbation bound is at most 1/2
///   (otherwise the symbol is outside the radial-graph regime);
/// - the model radius of the level lies in the window's accept band
///   (otherwise the level is outside the window);
/// - along every ray, `log u` is strictly monotone across the bracket
///   annulus, in the same direction on all rays;
/// - `log u - log t` changes sign inside the bracket on every ray.
///
/// Each ray root is then found by a bracketed Newton iteration with
/// bisection fallback, and verified to residual 1e-12 in `log u`.
pub fn extract_level_set(
    symbol: &dyn LevelSymbol,
    t: f64,
    n_rays: usize,
    window: &GraphWindow,
) -> Result<RadialGraphLevelSet> {
    if !(t > 0.0) || !t.is_finite() {
        return Err(Error::Domain(format!("level t={t} must be positive")));
    }
    if n_rays < 8 {
        return Err(Error::InvalidArgument(format!(
            "extraction needs at least 8 rays, got {n_rays}"
        )));
    }
    let phi = symbol.phi_c0_bound();
    if !(phi <= PHI_GATE) {
        return Err(Error::OutsideRadialGraphRegime(format!(
            "log-perturbation bound {phi:.6} exceeds the gate {PHI_GATE}"
        )));
    }
    let model_rho = symbol
        .model_radius(t)
        .map_err(|e| Error::LevelOutsideWindow(format!("level t={t} has no model radius: {e}")))?;
    if !(model_rho >= window.band_lo && model_rho <= window.band_hi) {
        return Err(Error::LevelOutsideWindow(format!(
            "model radius {model_rho:.6} of level t={t} outside accept band [{}, {}]",
            window.band_lo, window.band_hi
        )));
    }

    let theta = uniform_angles(n_rays);
    let rays: Vec<Result<(f64, f64, i8)>> = theta
        .par_iter()
        .map(|&th| solve_ray(symbol, t, th, window))
        .collect();

    let mut rho = Vec::with_capacity(n_rays);
    let mut rho_prime = Vec::with_capacity(n_rays);
    let mut direction: Option<i8> = None;
    for (j, ray) in rays.into_iter().enumerate() {
        let (r, rp, dir) = ray?;
        match direction {
            None => direction = Some(dir),
            Some(d) if d != dir => {
                return Err(Error::OutsideRadialGraphRegime(format!(
                    "radial monotonicity direction flips between rays (ray {j})"
                )));
            }
            _ => {}
        }
        rho.push(r);
        rho_prime.push(rp);
    }

    let volume = graph_volume(&rho)?;
    Ok(RadialGraphLevelSet {
        level: Some(t),
        theta,
        rho,
        rho_prime,
        volume,
        n: 1,
    })
}

/// Monitors one ray for strict monotonicity, brackets the root of
/// `log u = log t`, and polishes it with safeguarded Newton. Returns
/// `(rho, rho', direction)`.
fn solve_ray(
    symbol: &dyn LevelSymbol,
    t: f64,
    theta: f64,
    window: &GraphWindow,
) -> Result<(f64, f64, i8)> {
    let target = t.ln();
    let lo = window.bracket_lo;
    let hi = window.bracket_hi;
    let mut samples = [0.0f64; MONITOR_SAMPLES];
    let mut values = [0.0f64; MONITOR_SAMPLES];
    for i in 0..MONITOR_SAMPLES {
        let rho = lo + (hi - lo) * i as f64 / (MONITOR_SAMPLES - 1) as f64;
        let value = symbol.log_u(Complex64::from_polar(rho, theta)) - target;
        if !value.is_finite() {
            return Err(Error::NonFiniteIntegrand { rho, theta });
        }
        samples[i] = rho;
        values[i] = value;
    }

    let dir = (values[1] - values[0]).signum();
    if dir == 0.0 {
        return Err(Error::OutsideRadialGraphRegime(format!(
            "symbol is radially flat near rho={:.4} on ray theta={theta:.4}",
            samples[0]
        )));
    }
    for i in 1..MONITOR_SAMPLES {
        let diff = values[i] - values[i - 1];
        if diff.signum() != dir || diff == 0.0 {
            return Err(Error::OutsideRadialGraphRegime(format!(
                "symbol is not strictly monotone near rho={:.4} on ray theta={theta:.4}",
                samples[i]
            )));
        }
    }

    let bracket = (0..MONITOR_SAMPLES - 1)
        .find(|&i| values[i] == 0.0 || values[i].signum() != values[i + 1].signum());
    let Some(k) = bracket else {
        return Err(Error::LevelOutsideWindow(format!(
            "level t={t} has no crossing in the bracket annulus on ray theta={theta:.4}"
        )));
    };
    if values[k] == 0.0 {
        return finish_ray(symbol, t, samples[k], theta, dir);
    }
    if values[k + 1] == 0.0 {
        return finish_ray(symbol, t, samples[k + 1], theta, dir);
    }

    let (mut a, mut b) = (samples[k], samples[k + 1]);
    let mut f_a = values[k];
    let mut x = 0.5 * (a + b);
    let mut converged = false;
    for _ in 0..NEWTON_MAX_ITER {
        let fx = symbol.log_u(Complex64::from_polar(x, theta)) - target;
        if !fx.is_finite() {
            return Err(Error::NonFiniteIntegrand { rho: x, theta });
        }
        if fx.abs() <= ROOT_TOL {
            converged = true;
            break;
        }
        if fx.signum() == f_a.signum() {
            a = x;
            f_a = fx;
        } else {
            b = x;
        }
        let slope = radial_derivative(symbol, x, theta);
        let newton = x - fx / slope;
        x = if slope != 0.0 && newton > a && newton < b {
            newton
        } else {
            0.5 * (a + b)
        };
        if (b - a) < 1e-16 {
            break;
        }
    }
    if !converged {
        let residual = symbol.log_u(Complex64::from_polar(x, theta)) - target;
        if residual.abs() >= VERIFY_TOL {
            return Err(Error::Solver(format!(
                "ray theta={theta:.4}: newton residual {residual:.3e} above {VERIFY_TOL:.0e}"
            )));
        }
    }
    finish_ray(symbol, t, x, theta, dir)
}

fn finish_ray(
    symbol: &dyn LevelSymbol,
    t: f64,
    rho: f64,
    theta: f64,
    dir: f64,
) -> Result<(f64, f64, i8)> {
    let d_rho = radial_derivative(symbol, rho, theta);
    if d_rho.abs() < 1e-14 {
        return Err(Error::Solver(format!(
            "level t={t} is tangent to the ray theta={theta:.4}"
        )));
    }
    let d_theta = angular_derivative(symbol, rho, theta);
    Ok((rho, -d_theta / d_rho, if dir > 0.0 { 1 } else { -1 }))
}

/// Invariant perimeter of an extracted level set, after checking that the
/// level is regular: `|grad u| = t |grad log u|` must stay above 1e-10 on
/// the whole graph.
pub fn level_perimeter(graph: &RadialGraphLevelSet, symbol: &dyn LevelSymbol) -> Result<f64> {
    let t = graph.level.ok_or_else(|| {
        Error::InvalidArgument(
            "synthetic graph carries no level; use perimeter_invariant directly".into(),
        )
    })?;
    let mut min_grad = f64::INFINITY;
    for (&rho, &theta) in graph.rho.iter().zip(&graph.theta) {
        let g = symbol.grad_log_u(Complex64::from_polar(rho, theta));
        min_grad = min_grad.min(t * g.norm());
    }
    if min_grad < REGULAR_MIN {
        return Err(Error::NonRegularValue(format!(
            "level t={t} has |grad u| as small as {min_grad:.3e} on its graph"
        )));
    }
    Ok(graph.perimeter_invariant())
}

/// Boundary flux `int |grad u| dH` of an extracted level set. At n = 1 this
/// equals the invariant flux, and for weighted symbols it satisfies the
/// coarea identity `J = 4 n alpha t mu(t)`.
pub fn level_flux(graph: &RadialGraphLevelSet, symbol: &dyn LevelSymbol) -> Result<f64> {
    let t = graph.level.ok_or_else(|| {
        Error::InvalidArgument("synthetic graph carries no level for a flux".into())
    })?;
    let n = graph.n_rays() as f64;
    let mut acc = 0.0;
    for ((&rho, &rp), &theta) in graph.rho.iter().zip(&graph.rho_prime).zip(&graph.theta) {
        let g = symbol.grad_log_u(Complex64::from_polar(rho, theta));
        acc += t * g.norm() * (rho * rho + rp * rp).sqrt();
    }
    Ok(2.0 * std::f64::consts::PI / n * acc)
}

/// Bergman radius of the centered ball with the same invariant volume as
/// the graph.
pub fn volume_matched_radius(graph: &RadialGraphLevelSet) -> Result<f64> {
    volume_inverse(graph.volume, graph.n)
}

/// Bergman radius with exactly mean-zero deviation: the angular mean of the
/// Bergman radius samples `2 artanh(rho_j)`.
pub fn mean_zero_radius(graph: &RadialGraphLevelSet) -> f64 {
    graph.bergman_radii().iter().sum::<f64>() / graph.n_rays() as f64
}

/// Radial deviation samples `u_j = 2 artanh(rho_j) / r - 1` of the graph
/// from the centered ball of Bergman radius `r`.
pub fn bergman_deviation(graph: &RadialGraphLevelSet, r: f64) -> Result<Vec<f64>> {
    if !(r > 0.0) {
        return Err(Error::Domain(format!(
            "reference bergman radius r={r} must be positive"
        )));
    }
    Ok(graph
        .bergman_radii()
        .iter()
        .map(|&rj| rj / r - 1.0)
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::{ball_volume, model_level, WeightParams};
    use crate::holo::Poly;
    use crate::symbol::{ModelSymbol, RadiusSymbol, WeightedSymbol};
    use approx::assert_relative_eq;
    use std::f64::consts::PI;

    /// Radial symbol with a small high-frequency wiggle: inside the
    /// perturbation gate, but not radially monotone on the bracket annulus.
    struct WigglySymbol {
        alpha: f64,
    }

    impl LevelSymbol for WigglySymbol {
        fn log_u(&self, z: Complex64) -> f64 {
            let rho = z.norm();
            self.alpha * (1.0 - rho * rho).ln() + 0.05 * (40.0 * rho).sin()
        }

        fn grad_log_u(&self, z: Complex64) -> Complex64 {
            let rho = z.norm();
            (-2.0 * self.alpha / (1.0 - rho * rho) + 2.0 * (40.0 * rho).cos() / rho) * z
        }

        fn params(&self) -> WeightParams {
            WeightParams {
                n: 1,
                p: 1.0,
                alpha: self.alpha,
            }
        }

        fn model_radius(&self, t: f64) -> Result<f64> {
            crate::geometry::model_radius(t, self.alpha)
        }

        fn phi_c0_bound(&self) -> f64 {
            0.05
        }
    }

    #[test]
    fn model_level_set_is_exact_circle() {
        let params = WeightParams::new(1, 2.0, 2.0).unwrap();
        let model = ModelSymbol::new(params);
        let graph = extract_level_set(&model, 0.25, 128, &GraphWindow::standard()).unwrap();
        let rho0 = 0.5f64.sqrt();
        for &r in &graph.rho {
            assert_relative_eq!(r, rho0, epsilon = 1e-12);
        }
        for &rp in &graph.rho_prime {
            assert!(rp.abs() < 1e-11);
        }
        assert_relative_eq!(graph.volume, PI, max_relative = 1e-12);
        assert_relative_eq!(
            level_perimeter(&graph, &model).unwrap(),
            2.0 * PI * 2.0f64.sqrt(),
            max_relative = 1e-12
        );
        // Coarea identity J = 4 alpha t mu: here 4 * 2 * 0.25 * pi = 2 pi.
        assert_relative_eq!(
            level_flux(&graph, &model).unwrap(),
            2.0 * PI,
            max_relative = 1e-12
        );
    }

    #[test]
    fn perturbed_symbol_first_order_graph() {
        // For f = 1 + eps z the level graph moves by
        // p eps (1 - rho0^2) cos(theta) / (2 alpha) to first order.
        let params = WeightParams::new(1, 2.0, 2.0).unwrap();
        let eps = 1e-3;
        let symbol = WeightedSymbol::new(Poly::from_real(&[1.0, eps]), params).unwrap();
        let t = 0.25;
        let rho0 = 0.5f64.sqrt();
        let graph = extract_level_set(&symbol, t, 64, &GraphWindow::standard()).unwrap();
        for (&rho, &theta) in graph.rho.iter().zip(&graph.theta) {
            let predicted =
                rho0 + params.p * eps * (1.0 - rho0 * rho0) * theta.cos() / (2.0 * params.alpha);
            assert!(
                (rho - predicted).abs() < 1e-5,
                "first-order prediction off at theta={theta}"
            );
        }
    }

    #[test]
    fn coarea_identity_for_weighted_symbol() {
        let params = WeightParams::new(1, 2.0, 2.0).unwrap();
        let symbol =
            WeightedSymbol::normalized(Poly::from_real(&[1.0, 0.05]), params, 48, 128).unwrap();
        let t = 0.5;
        let graph = extract_level_set(&symbol, t, 256, &GraphWindow::standard()).unwrap();
        let j = level_flux(&graph, &symbol).unwrap();
        let coarea = 4.0 * params.alpha * t * graph.volume;
        assert_relative_eq!(j, coarea, max_relative = 1e-13);
    }

    #[test]
    fn large_perturbation_is_rejected() {
        let params = WeightParams::new(1, 2.0, 2.0).unwrap();
        let symbol = WeightedSymbol::new(Poly::from_real(&[1.0, 0.5]), params).unwrap();
        for &t in &[0.2, 0.4, 0.6] {
            match extract_level_set(&symbol, t, 32, &GraphWindow::standard()) {
                Err(Error::OutsideRadialGraphRegime(_)) => {}
                other => panic!("expected regime rejection, got {other:?}"),
            }
        }
    }

    #[test]
    fn non_monotone_symbol_is_rejected() {
        let symbol = WigglySymbol { alpha: 2.0 };
        match extract_level_set(&symbol, 0.25, 32, &GraphWindow::standard()) {
            Err(Error::OutsideRadialGraphRegime(msg)) => {
                assert!(msg.contains("monotone"), "unexpected message: {msg}");
            }
            other => panic!("expected monotonicity rejection, got {other:?}"),
        }
    }

    #[test]
    fn levels_outside_band_are_rejected() {
        let params = WeightParams::new(1, 2.0, 2.0).unwrap();
        let model = ModelSymbol::new(params);
        for &t in &[0.95, 0.05] {
            match extract_level_set(&model, t, 32, &GraphWindow::standard()) {
                Err(Error::LevelOutsideWindow(_)) => {}
                other => panic!("expected window rejection at t={t}, got {other:?}"),
            }
        }
        // And a level with no model radius at all.
        match extract_level_set(&model, 1.5, 32, &GraphWindow::standard()) {
            Err(Error::LevelOutsideWindow(_)) => {}
            other => panic!("expected window rejection at t=1.5, got {other:?}"),
        }
    }

    #[test]
    fn radius_symbol_levels_are_circles() {
        let t = 0.5;
        let window = GraphWindow::around(t).unwrap();
        let graph = extract_level_set(&RadiusSymbol, t, 64, &window).unwrap();
        for &r in &graph.rho {
            assert_relative_eq!(r, t, epsilon = 1e-13);
        }
        // Euclidean flux of u = |z| is just the circle length 2 pi t.
        assert_relative_eq!(
            level_flux(&graph, &RadiusSymbol).unwrap(),
            2.0 * PI * t,
            max_relative = 1e-13
        );
        assert_relative_eq!(
            graph.perimeter_invariant(),
            2.0 * PI * t / (1.0 - t * t),
            max_relative = 1e-13
        );
    }

    #[test]
    fn synthetic_graph_from_bergman_samples() {
        let r0 = 1.2;
        let delta = 0.01;
        let n = 128;
        let r: Vec<f64> = (0..n)
            .map(|j| {
                let theta = 2.0 * PI * j as f64 / n as f64;
                r0 + delta * theta.cos()
            })
            .collect();
        let graph = RadialGraphLevelSet::from_bergman_graph(&r).unwrap();
        // Spectral rho' against the chain rule d rho / d theta.
        for j in 0..n {
            let theta = 2.0 * PI * j as f64 / n as f64;
            let rho = euclid_of_bergman(r0 + delta * theta.cos());
            let expect = -(1.0 - rho * rho) / 2.0 * delta * theta.sin();
            assert_relative_eq!(graph.rho_prime[j], expect, epsilon = 1e-9);
        }
        // Constant graph volume matches the closed form.
        let constant = RadialGraphLevelSet::from_bergman_graph(&vec![r0; 64]).unwrap();
        assert_relative_eq!(
            constant.volume,
            ball_volume(r0, 1).unwrap(),
            max_relative = 1e-13
        );
    }

    #[test]
    fn radius_conventions() {
        let r0 = 1.0;
        let n = 64;
        let r: Vec<f64> = (0..n)
            .map(|j| {
                let theta = 2.0 * PI * j as f64 / n as f64;
                r0 * (1.0 + 0.02 * (2.0 * theta).cos())
            })
            .collect();
        let graph = RadialGraphLevelSet::from_bergman_graph(&r).unwrap();
        // The mean-zero radius averages the Bergman samples exactly, so the
        // deviation field has exactly zero grid mean.
        let r_mean = mean_zero_radius(&graph);
        assert_relative_eq!(r_mean, r0, max_relative = 1e-6);
        let u = bergman_deviation(&graph, r_mean).unwrap();
        let mean: f64 = u.iter().sum::<f64>() / u.len() as f64;
        assert!(mean.abs() < 1e-15);
        // The volume-matched radius agrees to second order in the amplitude.
        let r_vol = volume_matched_radius(&graph).unwrap();
        assert!((r_vol - r0).abs() < 1e-3);
        // An exact circle: both radii coincide with the closed form.
        let circle = RadialGraphLevelSet::from_bergman_graph(&vec![0.8; 32]).unwrap();
        assert_relative_eq!(
            volume_matched_radius(&circle).unwrap(),
            0.8,
            max_relative = 1e-12
        );
        assert_relative_eq!(mean_zero_radius(&circle), 0.8, max_relative = 1e-14);
    }

    #[test]
    fn model_level_round_trip() {
        // model_level inverts model_radius along the extraction path.
        let params = WeightParams::new(1, 2.0, 2.5).unwrap();
        let model = ModelSymbol::new(params);
        let t = 0.3;
        let graph = extract_level_set(&model, t, 32, &GraphWindow::standard()).unwrap();
        let back = model_level(graph.rho[0], params.alpha).unwrap();
        assert_relative_eq!(back, t, max_relative = 1e-12);
    }

    #[test]
    fn synthetic_graph_rejects_bad_input() {
        assert!(RadialGraphLevelSet::from_bergman_graph(&[1.0; 4]).is_err());
        assert!(RadialGraphLevelSet::from_bergman_graph(&[1.0, -1.0, 1.0, 1.0, 1.0, 1.0, 1.0, 1.0])
            .is_err());
        let graph = RadialGraphLevelSet::from_bergman_graph(&[1.0; 16]).unwrap();
        assert!(level_flux(&graph, &RadiusSymbol).is_err());
        assert!(level_perimeter(&graph, &RadiusSymbol).is_err());
    }
}
