//! Hinge transforms and the convex order of symbol distributions.
//!
//! The hinge transform of a weight `u` at threshold `k` is
//! `H(k) = int (u - k)_+ dmu`, the invariant integral of the part of `u`
//! above the threshold. Hinges at a knot grid, together with the plain mean
//! `H(0)`, determine expectations of every piecewise-linear convex test
//! function: if `Phi(x) = sum_m g_m (x - k_m)_+` with nonnegative slope
//! increments `g_m`, then `int Phi(u) dmu = sum_m g_m H(k_m)`.
//!
//! Distribution dominance plus equal means therefore yields the convex
//! order: every hinge margin `H_model(k) - H_symbol(k)` is nonnegative, and
//! so is the expectation margin of every convex test function.
//!
//! Three hinge implementations share the [`HingeTransform`] interface: the
//! closed-form [`ModelHinge`] of the pure weight, the quadrature-based
//! [`SymbolHinge`] that extracts the level set at each threshold, and the
//! [`ProfileHinge`] that integrates a tabulated distribution profile.

use crate::error::{Error, Result};
use crate::geometry::{c_alpha_n, model_volume, WeightParams};
use crate::levels::{extract_level_set, GraphWindow};
use crate::quad::{gauss_legendre, RadialRule};
use crate::symbol::LevelSymbol;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Gauss-Legendre order of the per-ray integrals in `SymbolHinge`.
const RAY_QUAD_ORDER: usize = 64;

/// Radial resolution of the sup-of-`u` scan in `SymbolHinge`.
const SUP_SCAN_RADIAL: usize = 512;

/// Largest radius of the sup-of-`u` scan.
const SUP_SCAN_RADIUS: f64 = 0.995;

/// Slack allowed in the convexity check of `ConvexTestFunction::from_values`.
const CONVEXITY_SLACK: f64 = 1e-12;

/// A distribution summarized by its mean and its hinge transform.
pub trait HingeTransform {
    /// The mean `int u dmu = H(0)`.
    fn mean(&self) -> f64;

    /// The hinge `H(k) = int (u - k)_+ dmu` at threshold `k >= 0`.
    fn hinge(&self, k: f64) -> Result<f64>;
}

/// Closed-form hinge transform of the pure weight `(1 - |z|^2)^alpha` on
/// the disk.
#[derive(Debug, Clone, Copy)]
pub struct ModelHinge {
    params: WeightParams,
}

impl ModelHinge {
    /// Planar only (`n = 1`).
    pub fn new(params: WeightParams) -> Result<Self> {
        if params.n != 1 {
            return Err(Error::InvalidArgument(format!(
                "closed-form hinges are planar only, got n={}",
                params.n
            )));
        }
        Ok(Self { params })
    }
}

impl HingeTransform for ModelHinge {
    fn mean(&self) -> f64 {
        std::f64::consts::PI / (self.params.alpha - 1.0)
    }

    fn hinge(&self, k: f64) -> Result<f64> {
        let alpha = self.params.alpha;
        if !(k >= 0.0) || !k.is_finite() {
            return Err(Error::Domain(format!(
                "hinge threshold k={k} must be finite and nonnegative"
            )));
        }
        if k == 0.0 {
            return Ok(self.mean());
        }
        if k >= 1.0 {
            return Ok(0.0);
        }
        let rho_sq = 1.0 - k.powf(1.0 / alpha);
        let upper = (1.0 - k.powf((alpha - 1.0) / alpha)) / (alpha - 1.0);
        Ok(std::f64::consts::PI * (upper - k * rho_sq / (1.0 - rho_sq)))
    }
}

/// Quadrature hinge transform of a level symbol: each threshold extracts
/// the level set `{u > k}` in a window centered on its model radius and
/// integrates `u` over the enclosed subgraph ray by ray.
pub struct SymbolHinge<'a> {
    symbol: &'a dyn LevelSymbol,
    n_rays: usize,
    mean: f64,
    sup: f64,
    nodes: Vec<f64>,
    weights: Vec<f64>,
}

impl<'a> SymbolHinge<'a> {
    /// Measures the mean (by the weighted radial rule of the symbol's
    /// parameters crossed with a circle grid) and the sup of `u` (by a
    /// dense polar scan), and prepares the per-ray quadrature.
    ///
    /// Planar only (`n = 1`).
    pub fn new(
        symbol: &'a dyn LevelSymbol,
        n_rays: usize,
        order: usize,
        n_circ: usize,
    ) -> Result<Self> {
        let params = symbol.params();
        if params.n != 1 {
            return Err(Error::InvalidArgument(format!(
                "symbol hinges are planar only, got n={}",
                params.n
            )));
        }
        if n_rays < 8 || n_circ < 8 {
            return Err(Error::InvalidArgument(format!(
                "hinge grids need at least 8 rays, got {n_rays} and {n_circ}"
            )));
        }
        let alpha = params.alpha;
        let rule = RadialRule::adaptive(order, alpha, 1)?;
        let radial = rule.try_integrate(|rho| {
            let mut acc = 0.0;
            for j in 0..n_circ {
                let theta = 2.0 * std::f64::consts::PI * j as f64 / n_circ as f64;
                let z = num_complex::Complex64::from_polar(rho, theta);
                let v = (symbol.log_u(z) - alpha * (1.0 - rho * rho).ln()).exp();
                if !v.is_finite() {
                    return Err(Error::NonFiniteIntegrand { rho, theta });
                }
                acc += v;
            }
            Ok(acc / n_circ as f64)
        })?;
        let mean = radial / rule.mass() / c_alpha_n(alpha, 1)?;

        let mut sup = f64::MIN;
        for i in 0..=SUP_SCAN_RADIAL {
            let rho = SUP_SCAN_RADIUS * i as f64 / SUP_SCAN_RADIAL as f64;
            for j in 0..n_circ {
                let theta = 2.0 * std::f64::consts::PI * j as f64 / n_circ as f64;
                let z = num_complex::Complex64::from_polar(rho, theta);
                sup = sup.max(symbol.log_u(z).exp());
            }
        }

        let (nodes, weights) = gauss_legendre(RAY_QUAD_ORDER)?;
        Ok(Self {
            symbol,
            n_rays,
            mean,
            sup,
            nodes,
            weights,
        })
    }

    /// The measured sup of `u`; thresholds at or above it have zero hinge.
    pub fn sup(&self) -> f64 {
        self.sup
    }
}

impl HingeTransform for SymbolHinge<'_> {
    fn mean(&self) -> f64 {
        self.mean
    }

    fn hinge(&self, k: f64) -> Result<f64> {
        if !(k >= 0.0) || !k.is_finite() {
            return Err(Error::Domain(format!(
                "hinge threshold k={k} must be finite and nonnegative"
            )));
        }
        if k == 0.0 {
            return Ok(self.mean);
        }
        if k >= self.sup {
            return Ok(0.0);
        }
        let window = GraphWindow::around(self.symbol.model_radius(k)?)?;
        let graph = extract_level_set(self.symbol, k, self.n_rays, &window)?;
        let mut acc = 0.0;
        for (&rho_j, &theta_j) in graph.rho.iter().zip(&graph.theta) {
            // int_0^{rho_j} u(s e^{i theta}) 2 pi s (1-s^2)^{-2} ds.
            let mut ray = 0.0;
            for (&x, &w) in self.nodes.iter().zip(&self.weights) {
                let s = 0.5 * (x + 1.0) * rho_j;
                let z = num_complex::Complex64::from_polar(s, theta_j);
                let d = 1.0 - s * s;
                ray += w * self.symbol.log_u(z).exp() * s / (d * d);
            }
            acc += 0.5 * rho_j * ray * 2.0 * std::f64::consts::PI;
        }
        Ok(acc / graph.n_rays() as f64 - k * graph.volume)
    }
}

/// Hinge transform of a tabulated distribution profile: trapezoid
/// integration of `mu(t)` from the threshold to the end of the table,
/// with the profile linearly interpolated and treated as zero beyond it.
#[derive(Debug, Clone)]
pub struct ProfileHinge {
    levels: Vec<f64>,
    volumes: Vec<f64>,
    mean: f64,
}

impl ProfileHinge {
    /// The levels must be strictly ascending and positive, with one volume
    /// per level; the mean is supplied by the caller (the table alone
    /// cannot see the distribution below its first level).
    pub fn new(levels: Vec<f64>, volumes: Vec<f64>, mean: f64) -> Result<Self> {
        if levels.len() < 2 || levels.len() != volumes.len() {
            return Err(Error::InvalidArgument(format!(
                "profile table needs matching levels and volumes (>= 2), got {} and {}",
                levels.len(),
                volumes.len()
            )));
        }
        if !(levels[0] > 0.0) || levels.windows(2).any(|w| w[1] <= w[0]) {
            return Err(Error::InvalidArgument(
                "profile levels must be positive and strictly ascending".into(),
            ));
        }
        if volumes.iter().any(|&v| !(v >= 0.0) || !v.is_finite()) {
            return Err(Error::Domain("profile volumes must be nonnegative".into()));
        }
        if !mean.is_finite() {
            return Err(Error::Domain(format!("profile mean {mean} must be finite")));
        }
        Ok(Self {
            levels,
            volumes,
            mean,
        })
    }
}

impl HingeTransform for ProfileHinge {
    fn mean(&self) -> f64 {
        self.mean
    }

    fn hinge(&self, k: f64) -> Result<f64> {
        if !(k >= 0.0) || !k.is_finite() {
            return Err(Error::Domain(format!(
                "hinge threshold k={k} must be finite and nonnegative"
            )));
        }
        if k == 0.0 {
            return Ok(self.mean);
        }
        let last = *self.levels.last().unwrap();
        if k >= last {
            return Ok(0.0);
        }
        if k < self.levels[0] {
            return Err(Error::Domain(format!(
                "threshold k={k} below the table start {}",
                self.levels[0]
            )));
        }
        let i = self
            .levels
            .windows(2)
            .position(|w| w[0] <= k && k <= w[1])
            .unwrap();
        let frac = (k - self.levels[i]) / (self.levels[i + 1] - self.levels[i]);
        let mu_k = self.volumes[i] + frac * (self.volumes[i + 1] - self.volumes[i]);
        let mut acc = 0.5 * (mu_k + self.volumes[i + 1]) * (self.levels[i + 1] - k);
        for j in (i + 1)..(self.levels.len() - 1) {
            acc += 0.5 * (self.volumes[j] + self.volumes[j + 1])
                * (self.levels[j + 1] - self.levels[j]);
        }
        Ok(acc)
    }
}

/// A nondecreasing convex piecewise-linear test function
/// `Phi(x) = sum_m g_m (x - k_m)_+` with `Phi(0) = 0`, stored by its knots
/// and nonnegative slope increments.
#[derive(Debug, Clone)]
pub struct ConvexTestFunction {
    knots: Vec<f64>,
    increments: Vec<f64>,
}

impl ConvexTestFunction {
    /// Builds from explicit slope increments; the first knot must be 0 and
    /// every increment nonnegative.
    pub fn from_increments(knots: Vec<f64>, increments: Vec<f64>) -> Result<Self> {
        check_knots(&knots)?;
        if increments.len() != knots.len() {
            return Err(Error::InvalidArgument(format!(
                "need one increment per knot, got {} for {} knots",
                increments.len(),
                knots.len()
            )));
        }
        if increments.iter().any(|&g| !(g >= 0.0) || !g.is_finite()) {
            return Err(Error::Domain(
                "slope increments must be finite and nonnegative".into(),
            ));
        }
        Ok(Self { knots, increments })
    }

    /// Builds from sampled values: `values[0]` must vanish and the segment
    /// slopes must be nonnegative and nondecreasing to slack 1e-12.
    pub fn from_values(knots: Vec<f64>, values: &[f64]) -> Result<Self> {
        check_knots(&knots)?;
        if values.len() != knots.len() {
            return Err(Error::InvalidArgument(format!(
                "need one value per knot, got {} for {} knots",
                values.len(),
                knots.len()
            )));
        }
        if values[0] != 0.0 {
            return Err(Error::Domain(format!(
                "a convex test function must vanish at 0, got {}",
                values[0]
            )));
        }
        let slopes: Vec<f64> = knots
            .windows(2)
            .zip(values.windows(2))
            .map(|(k, v)| (v[1] - v[0]) / (k[1] - k[0]))
            .collect();
        let mut increments = Vec::with_capacity(knots.len());
        let mut prev = 0.0;
        for &s in &slopes {
            let g = s - prev;
            if g < -CONVEXITY_SLACK {
                return Err(Error::Domain(format!(
                    "values are not convex nondecreasing: slope increment {g:.3e}"
                )));
            }
            increments.push(g.max(0.0));
            prev = s;
        }
        increments.push(0.0);
        Ok(Self { knots, increments })
    }

    pub fn knots(&self) -> &[f64] {
        &self.knots
    }

    pub fn increments(&self) -> &[f64] {
        &self.increments
    }

    pub fn eval(&self, x: f64) -> f64 {
        self.knots
            .iter()
            .zip(&self.increments)
            .map(|(&k, &g)| g * (x - k).max(0.0))
            .sum()
    }

    /// Pairs the increments with per-knot values (hinges or hinge margins):
    /// `sum_m g_m v_m`.
    pub fn pairing(&self, knot_values: &[f64]) -> Result<f64> {
        if knot_values.len() != self.knots.len() {
            return Err(Error::InvalidArgument(format!(
                "need one value per knot, got {} for {} knots",
                knot_values.len(),
                self.knots.len()
            )));
        }
        Ok(self
            .increments
            .iter()
            .zip(knot_values)
            .map(|(&g, &v)| g * v)
            .sum())
    }

    /// The expectation `int Phi(u) dmu` of the test function under a hinge
    /// transform.
    pub fn expectation(&self, x: &dyn HingeTransform) -> Result<f64> {
        self.pairing(&knot_hinges(x, &self.knots)?)
    }
}

fn check_knots(knots: &[f64]) -> Result<()> {
    if knots.len() < 2 {
        return Err(Error::InvalidArgument(format!(
            "a convex test function needs at least 2 knots, got {}",
            knots.len()
        )));
    }
    if knots[0] != 0.0 {
        return Err(Error::InvalidArgument(format!(
            "the first knot must be 0, got {}",
            knots[0]
        )));
    }
    if knots.windows(2).any(|w| w[1] <= w[0]) {
        return Err(Error::InvalidArgument(
            "knots must be strictly ascending".into(),
        ));
    }
    Ok(())
}

/// The uniform knot grid `m / (count - 1)` on `[0, 1]`.
pub fn uniform_knots(count: usize) -> Result<Vec<f64>> {
    if count < 2 {
        return Err(Error::InvalidArgument(format!(
            "knot grid needs at least 2 knots, got {count}"
        )));
    }
    Ok((0..count)
        .map(|m| m as f64 / (count - 1) as f64)
        .collect())
}

/// Evaluates a hinge transform on a knot grid.
pub fn knot_hinges(x: &dyn HingeTransform, knots: &[f64]) -> Result<Vec<f64>> {
    knots.iter().map(|&k| x.hinge(k)).collect()
}

/// Per-knot hinge margins `H_upper(k) - H_lower(k)`; all nonnegative when
/// `lower` is dominated by `upper` in the convex order.
pub fn hinge_margins(
    lower: &dyn HingeTransform,
    upper: &dyn HingeTransform,
    knots: &[f64],
) -> Result<Vec<f64>> {
    let lo = knot_hinges(lower, knots)?;
    let hi = knot_hinges(upper, knots)?;
    Ok(lo.iter().zip(&hi).map(|(&l, &h)| h - l).collect())
}

/// A seeded family of random convex test functions on a shared knot grid:
/// independent uniform slope increments in `[0, 1)`, sorted ascending so
/// every sample also has increasing curvature.
pub fn random_convex_family(
    count: usize,
    knots: &[f64],
    seed: u64,
) -> Result<Vec<ConvexTestFunction>> {
    check_knots(knots)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count)
        .map(|_| {
            let mut increments: Vec<f64> = (0..knots.len()).map(|_| rng.gen::<f64>()).collect();
            increments.sort_by(|a, b| a.total_cmp(b));
            ConvexTestFunction::from_increments(knots.to_vec(), increments)
        })
        .collect()
}

/// Closed-form model hinge table for a tabulated-profile cross-check: the
/// model distribution `mu*(t)` sampled on `count` levels from `t0` to 1.
pub fn model_profile_table(params: &WeightParams, t0: f64, count: usize) -> Result<ProfileHinge> {
    if !(t0 > 0.0 && t0 < 1.0) {
        return Err(Error::Domain(format!(
            "table start t0={t0} must lie in (0,1)"
        )));
    }
    if count < 2 {
        return Err(Error::InvalidArgument(format!(
            "profile table needs at least 2 levels, got {count}"
        )));
    }
    let levels: Vec<f64> = (0..count)
        .map(|i| t0 + (1.0 - t0) * i as f64 / (count - 1) as f64)
        .collect();
    let volumes = levels
        .iter()
        .map(|&t| model_volume(t, params))
        .collect::<Result<Vec<f64>>>()?;
    let mean = ModelHinge::new(*params)?.mean();
    ProfileHinge::new(levels, volumes, mean)
}
