//! Hyperbolic barycenters of level sets and recentering.
//!
//! The barycenter of a set `E` with respect to the invariant measure is the
//! minimizer of the log-moment functional
//!
//! `L(a) = int_E [ log|1 - z conj(a)|^2 - log(1-|a|^2) - log(1-|z|^2) ] dv(z)`,
//!
//! the integral of the squared-distance-type kernel of the Bergman metric.
//! `L` is strictly convex along geodesics through the set, so the minimizer
//! is unique; it is found by a damped Newton iteration with a
//! finite-difference Hessian and an Armijo line search, with a certificate
//! bounding the minimizer by the gradient at the origin.
//!
//! Recentering a level set means extracting the same level from the symbol
//! precomposed with the point automorphism that swaps the barycenter with
//! the origin; the recentered set has barycenter at the origin and, by
//! invariance, the same volume and perimeter.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::geometry::ball_volume_euclid;
use crate::levels::{extract_level_set, GraphWindow, RadialGraphLevelSet};
use crate::quad::gauss_legendre_on;
use crate::symbol::{LevelSymbol, RecenteredSymbol};

/// Gauss–Legendre order for the radial integral along each ray.
const RAY_QUAD_ORDER: usize = 64;

/// Gradient norm at which the Newton iteration declares convergence.
const GRAD_TOL: f64 = 1e-10;

/// Gradient norm below which a stalled line search still counts as
/// converged. Near the minimizer the true decrease per step is of order
/// |grad|^2 and falls below the f64 resolution of the moment value well
/// before the gradient itself reaches `GRAD_TOL`, so a stall there is the
/// arithmetic's way of saying the point is optimal.
const STALL_TOL: f64 = 1e-8;

/// Newton iteration cap.
const MAX_ITER: usize = 100;

/// Armijo slope fraction and halving cap for the damped step.
const ARMIJO_C: f64 = 1e-4;
const ARMIJO_MAX_HALVINGS: usize = 30;

/// Finite-difference step for the Hessian of the log-moment.
const HESSIAN_STEP: f64 = 1e-5;

/// Slack added to the barycenter certificate radius.
const CERTIFICATE_SLACK: f64 = 1e-8;

/// Result of a barycenter computation.
#[derive(Debug, Clone, Copy)]
pub struct BarycenterReport {
    /// The minimizer of the log-moment functional.
    pub point: Complex64,
    /// Gradient norm at the reported point.
    pub gradient_norm: f64,
    /// Newton iterations used.
    pub iterations: usize,
    /// Certified bound on |point|: `|grad L(0)| / (2 m0) + slack`, where
    /// `m0` is the volume of the largest centered ball inside the set.
    pub certificate_radius: f64,
}

/// Radial quadrature shared by the moment integrals: a Gauss–Legendre rule
/// on [0, 1], rescaled per ray to [0, rho_j].
struct RayQuad {
    s: Vec<f64>,
    w: Vec<f64>,
}

impl RayQuad {
    fn new() -> Result<Self> {
        let (s, w) = gauss_legendre_on(RAY_QUAD_ORDER, 0.0, 1.0)?;
        Ok(Self { s, w })
    }

    /// Integrates `g` against the invariant measure over the graph region:
    /// `(2 pi / N) sum_j rho_j int_0^1 g(s rho_j e^{i theta_j}) q(s rho_j) ds`
    /// with `q(s) = s (1-s^2)^{-2}` the planar invariant density in polar
    /// coordinates.
    fn integrate(&self, graph: &RadialGraphLevelSet, g: impl Fn(Complex64) -> f64) -> f64 {
        let mut acc = 0.0;
        for (&rho_j, &theta_j) in graph.rho.iter().zip(&graph.theta) {
            let mut ray = 0.0;
            for (&s, &w) in self.s.iter().zip(&self.w) {
                let radius = s * rho_j;
                let z = Complex64::from_polar(radius, theta_j);
                let density = radius / (1.0 - radius * radius).powi(2);
                ray += w * g(z) * density;
            }
            acc += rho_j * ray;
        }
        2.0 * std::f64::consts::PI / graph.n_rays() as f64 * acc
    }
}

fn check_center(a: Complex64) -> Result<()> {
    if !(a.norm() < 1.0) {
        return Err(Error::Domain(format!(
            "barycenter candidate must lie in the open disk, got |a|={}",
            a.norm()
        )));
    }
    Ok(())
}

/// Log-moment functional `L(a)` of a radial-graph set.
pub fn log_moment(graph: &RadialGraphLevelSet, a: Complex64) -> Result<f64> {
    check_center(a)?;
    let quad = RayQuad::new()?;
    Ok(moment_value(&quad, graph, a))
}

/// Gradient of the log-moment functional, as the complex number
/// `dL/dx + i dL/dy`.
pub fn log_moment_gradient(graph: &RadialGraphLevelSet, a: Complex64) -> Result<Complex64> {
    check_center(a)?;
    let quad = RayQuad::new()?;
    Ok(moment_gradient(&quad, graph, a))
}

fn moment_value(quad: &RayQuad, graph: &RadialGraphLevelSet, a: Complex64) -> f64 {
    let log_one_minus_a2 = (1.0 - a.norm_sqr()).ln();
    quad.integrate(graph, |z| {
        let kernel = Complex64::new(1.0, 0.0) - z * a.conj();
        kernel.norm_sqr().ln() - log_one_minus_a2 - (1.0 - z.norm_sqr()).ln()
    })
}

fn moment_gradient(quad: &RayQuad, graph: &RadialGraphLevelSet, a: Complex64) -> Complex64 {
    let center_term = 2.0 / (1.0 - a.norm_sqr()) * a;
    let gx = quad.integrate(graph, |z| {
        let pull = 2.0 * z / (Complex64::new(1.0, 0.0) - z * a.conj());
        (center_term - pull).re
    });
    let gy = quad.integrate(graph, |z| {
        let pull = 2.0 * z / (Complex64::new(1.0, 0.0) - z * a.conj());
        (center_term - pull).im
    });
    Complex64::new(gx, gy)
}

/// Finds the hyperbolic barycenter of a radial-graph set by damped Newton
/// iteration on the log-moment functional.
///
/// Fails with a solver error if the line search stalls away from a critical
/// point, the iteration cap is reached with the gradient above the stall
/// floor, or the minimizer violates its certificate
/// `|a| <= |grad L(0)| / (2 m0) + 1e-8`.
pub fn hyperbolic_barycenter(graph: &RadialGraphLevelSet) -> Result<BarycenterReport> {
    let quad = RayQuad::new()?;
    let grad0 = moment_gradient(&quad, graph, Complex64::new(0.0, 0.0));
    let rho_min = graph
        .rho
        .iter()
        .cloned()
        .fold(f64::INFINITY, f64::min);
    let m0 = ball_volume_euclid(rho_min, 1)?;
    let certificate_radius = grad0.norm() / (2.0 * m0) + CERTIFICATE_SLACK;

    let mut a = Complex64::new(0.0, 0.0);
    let mut value = moment_value(&quad, graph, a);
    let mut grad = grad0;
    let mut iterations = 0;
    while grad.norm() > GRAD_TOL {
        if iterations >= MAX_ITER {
            if grad.norm() <= STALL_TOL {
                break;
            }
            return Err(Error::Solver(format!(
                "barycenter newton did not converge in {MAX_ITER} iterations \
                 (gradient norm {:.3e})",
                grad.norm()
            )));
        }
        iterations += 1;
        let direction = newton_direction(&quad, graph, a, grad);
        let slope = (grad.conj() * direction).re;
        let (descent, descent_slope) = if slope < 0.0 {
            (direction, slope)
        } else {
            (-grad, -grad.norm_sqr())
        };
        let mut step = 1.0;
        let mut accepted = None;
        for _ in 0..ARMIJO_MAX_HALVINGS {
            let candidate = a + step * descent;
            if candidate == a {
                break;
            }
            if candidate.norm() < 0.999 {
                let candidate_value = moment_value(&quad, graph, candidate);
                if candidate_value <= value + ARMIJO_C * step * descent_slope {
                    accepted = Some((candidate, candidate_value));
                    break;
                }
            }
            step /= 2.0;
        }
        let Some((next, next_value)) = accepted else {
            if grad.norm() <= STALL_TOL {
                break;
            }
            return Err(Error::Solver(
                "barycenter line search failed to find a descent step".into(),
            ));
        };
        a = next;
        value = next_value;
        grad = moment_gradient(&quad, graph, a);
    }

    if a.norm() > certificate_radius {
        return Err(Error::Solver(format!(
            "barycenter |a|={:.6e} violates its certificate radius {:.6e}",
            a.norm(),
            certificate_radius
        )));
    }
    Ok(BarycenterReport {
        point: a,
        gradient_norm: grad.norm(),
        iterations,
        certificate_radius,
    })
}

/// Newton direction from a symmetrized finite-difference Hessian; falls
/// back to steepest descent when the Hessian is not positive definite.
fn newton_direction(
    quad: &RayQuad,
    graph: &RadialGraphLevelSet,
    a: Complex64,
    grad: Complex64,
) -> Complex64 {
    let h = HESSIAN_STEP;
    let gx_p = moment_gradient(quad, graph, a + Complex64::new(h, 0.0));
    let gx_m = moment_gradient(quad, graph, a - Complex64::new(h, 0.0));
    let gy_p = moment_gradient(quad, graph, a + Complex64::new(0.0, h));
    let gy_m = moment_gradient(quad, graph, a - Complex64::new(0.0, h));
    let dgdx = (gx_p - gx_m) / (2.0 * h);
    let dgdy = (gy_p - gy_m) / (2.0 * h);
    let h00 = dgdx.re;
    let h11 = dgdy.im;
    let h01 = 0.5 * (dgdx.im + dgdy.re);
    let det = h00 * h11 - h01 * h01;
    if det <= 0.0 || h00 <= 0.0 {
        return -grad;
    }
    let (gx, gy) = (grad.re, grad.im);
    Complex64::new(
        -(h11 * gx - h01 * gy) / det,
        -(h00 * gy - h01 * gx) / det,
    )
}

/// Re-extracts a level set from the symbol recentered at `a`, mapping
/// extraction failures to the recentering error: if the automorphic image
/// of the set leaves the radial-graph class, that is a property of the
/// recentering, not of the original symbol.
pub fn recenter_level_set(
    symbol: &dyn LevelSymbol,
    graph: &RadialGraphLevelSet,
    a: Complex64,
    window: &GraphWindow,
) -> Result<RadialGraphLevelSet> {
    let t = graph.level.ok_or_else(|| {
        Error::InvalidArgument("synthetic graph carries no level to recenter".into())
    })?;
    let recentered = RecenteredSymbol::new(symbol, a)?;
    extract_level_set(&recentered, t, graph.n_rays(), window).map_err(|e| match e {
        Error::OutsideRadialGraphRegime(msg)
        | Error::LevelOutsideWindow(msg)
        | Error::Solver(msg) => Error::RecenteringLeftGraphClass(format!(
            "recentering at a=({:.4}, {:.4}) failed: {msg}",
            a.re, a.im
        )),
        other => other,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::WeightParams;
    use crate::holo::Poly;
    use crate::symbol::{ModelSymbol, WeightedSymbol};
    use approx::assert_relative_eq;
    use std::f64::consts::PI;

    fn model_graph(t: f64) -> RadialGraphLevelSet {
        let params = WeightParams::new(1, 2.0, 2.0).unwrap();
        let model = ModelSymbol::new(params);
        extract_level_set(&model, t, 128, &GraphWindow::standard()).unwrap()
    }

    fn perturbed_graph(eps: f64, t: f64) -> (WeightedSymbol<Poly>, RadialGraphLevelSet) {
        let params = WeightParams::new(1, 2.0, 2.0).unwrap();
        let symbol =
            WeightedSymbol::normalized(Poly::from_real(&[1.0, eps]), params, 48, 128).unwrap();
        let graph = extract_level_set(&symbol, t, 256, &GraphWindow::standard()).unwrap();
        (symbol, graph)
    }

    #[test]
    fn moment_volume_consistency() {
        // Integrating 1 against the invariant measure recovers the volume.
        let graph = model_graph(0.25);
        let quad = RayQuad::new().unwrap();
        let vol = quad.integrate(&graph, |_| 1.0);
        assert_relative_eq!(vol, graph.volume, max_relative = 1e-12);
        assert_relative_eq!(vol, PI, max_relative = 1e-12);
    }

    #[test]
    fn centered_ball_has_origin_barycenter() {
        let graph = model_graph(0.25);
        let grad0 = log_moment_gradient(&graph, Complex64::new(0.0, 0.0)).unwrap();
        assert!(grad0.norm() < 1e-13);
        let report = hyperbolic_barycenter(&graph).unwrap();
        assert!(report.point.norm() < 1e-12);
        assert!(report.iterations == 0);
    }

    #[test]
    fn gradient_matches_finite_differences() {
        let (_, graph) = perturbed_graph(0.05, 0.5);
        let a = Complex64::new(0.1, 0.05);
        let g = log_moment_gradient(&graph, a).unwrap();
        let h = 1e-6;
        let fd_x = (log_moment(&graph, a + Complex64::new(h, 0.0)).unwrap()
            - log_moment(&graph, a - Complex64::new(h, 0.0)).unwrap())
            / (2.0 * h);
        let fd_y = (log_moment(&graph, a + Complex64::new(0.0, h)).unwrap()
            - log_moment(&graph, a - Complex64::new(0.0, h)).unwrap())
            / (2.0 * h);
        assert_relative_eq!(g.re, fd_x, max_relative = 1e-6, epsilon = 1e-9);
        assert_relative_eq!(g.im, fd_y, max_relative = 1e-6, epsilon = 1e-9);
    }

    #[test]
    fn perturbed_level_set_barycenter() {
        // Frozen pipeline values for f = 1 + 0.05 z, p = alpha = 2, t = 0.5.
        let (_, graph) = perturbed_graph(0.05, 0.5);
        assert_relative_eq!(graph.volume, 1.30128963, max_relative = 1e-7);
        let grad0 = log_moment_gradient(&graph, Complex64::new(0.0, 0.0)).unwrap();
        assert_relative_eq!(grad0.re, -6.496060e-2, max_relative = 1e-5);
        assert!(grad0.im.abs() < 1e-12);
        let report = hyperbolic_barycenter(&graph).unwrap();
        assert_relative_eq!(report.point.re, 2.495326e-2, max_relative = 1e-5);
        assert!(report.point.im.abs() < 1e-10);
        assert!(report.gradient_norm <= 1e-10);
        assert!(report.point.norm() <= report.certificate_radius);
    }

    #[test]
    fn recentering_centers_and_preserves_geometry() {
        let (symbol, graph) = perturbed_graph(0.05, 0.5);
        let report = hyperbolic_barycenter(&graph).unwrap();
        let recentered =
            recenter_level_set(&symbol, &graph, report.point, &GraphWindow::standard()).unwrap();
        // The recentered set is centered.
        let new_bar = hyperbolic_barycenter(&recentered).unwrap();
        assert!(new_bar.point.norm() < 1e-9);
        // Volume and invariant perimeter are automorphism invariants.
        assert_relative_eq!(recentered.volume, graph.volume, max_relative = 1e-10);
        assert_relative_eq!(
            recentered.perimeter_invariant(),
            graph.perimeter_invariant(),
            max_relative = 1e-10
        );
    }

    #[test]
    fn symmetric_set_stays_centered() {
        // f = 1 + 0.05 z^2 is symmetric under z -> -z.
        let params = WeightParams::new(1, 2.0, 2.0).unwrap();
        let symbol =
            WeightedSymbol::normalized(Poly::from_real(&[1.0, 0.0, 0.05]), params, 48, 128)
                .unwrap();
        let graph = extract_level_set(&symbol, 0.5, 256, &GraphWindow::standard()).unwrap();
        let report = hyperbolic_barycenter(&graph).unwrap();
        assert!(report.point.norm() < 1e-9);
    }

    #[test]
    fn rejects_points_outside_disk() {
        let graph = model_graph(0.25);
        assert!(log_moment(&graph, Complex64::new(1.0, 0.0)).is_err());
        assert!(log_moment_gradient(&graph, Complex64::new(0.0, 1.2)).is_err());
    }
}
