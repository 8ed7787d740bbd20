//! Level symbols: the weights whose superlevel sets the laboratory studies.
//!
//! A level symbol is a positive function `u` on the disk exposed through
//! `log u` and its Euclidean gradient. The central example is the weighted
//! symbol `u = |f|^p (1-|z|^2)^alpha / scale` built from a holomorphic `f`;
//! the pure weight (`f = 1`) is the model case whose superlevel sets are
//! centered balls. Two auxiliary symbols support testing and negative
//! controls: the plain radius `u = |z|`, and an adversarial radial symbol
//! whose log-perturbation is mean-matched but not of holomorphic type.
//!
//! Gradients are carried as single complex numbers
//! `g = d(log u)/dx + i d(log u)/dy`, so directional derivatives along a ray
//! and along a circle are real parts of products with the ray direction.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::geometry::{self, mobius, mobius_derivative, WeightParams};
use crate::holo::{bergman_mean_pow, Holo};

/// Outer radius of the working annulus on which perturbation sizes are
/// measured; level-set windows stay strictly inside it.
pub const WORK_RADIUS: f64 = 0.9;

/// Grid resolution (radial and angular) for measured perturbation bounds.
const BOUND_GRID: usize = 64;

/// A positive weight on the disk exposed through its logarithm.
pub trait LevelSymbol: Sync {
    /// `log u(z)` for `z` in the open disk.
    fn log_u(&self, z: Complex64) -> f64;

    /// Euclidean gradient of `log u` as a complex number
    /// `d/dx log u + i d/dy log u`.
    fn grad_log_u(&self, z: Complex64) -> Complex64;

    /// Dimension, exponent, and weight parameters attached to the symbol.
    fn params(&self) -> WeightParams;

    /// Radius of the model (pure-weight) level set at level `t`; level-set
    /// extraction uses it to locate and window the true level set.
    fn model_radius(&self, t: f64) -> Result<f64>;

    /// Sup of the log-perturbation `|log u - log model|` on the working
    /// annulus; extraction requires it to be at most 1/2.
    fn phi_c0_bound(&self) -> f64;
}

/// Directional derivative of `log u` along the outward ray at
/// `z = rho e^{i theta}`.
pub fn radial_derivative(symbol: &dyn LevelSymbol, rho: f64, theta: f64) -> f64 {
    let z = Complex64::from_polar(rho, theta);
    let g = symbol.grad_log_u(z);
    (g.conj() * Complex64::from_polar(1.0, theta)).re
}

/// Derivative of `log u(rho e^{i theta})` in `theta` at fixed `rho`.
pub fn angular_derivative(symbol: &dyn LevelSymbol, rho: f64, theta: f64) -> f64 {
    let z = Complex64::from_polar(rho, theta);
    let g = symbol.grad_log_u(z);
    (g.conj() * (Complex64::i() * z)).re
}

/// The model symbol `u = (1 - |z|^2)^alpha`, whose superlevel sets are the
/// centered balls of radius `rho_0(t) = sqrt(1 - t^{1/alpha})`.
#[derive(Debug, Clone, Copy)]
pub struct ModelSymbol {
    params: WeightParams,
}

impl ModelSymbol {
    pub fn new(params: WeightParams) -> Self {
        Self { params }
    }
}

impl LevelSymbol for ModelSymbol {
    fn log_u(&self, z: Complex64) -> f64 {
        self.params.alpha * (1.0 - z.norm_sqr()).ln()
    }

    fn grad_log_u(&self, z: Complex64) -> Complex64 {
        -2.0 * self.params.alpha / (1.0 - z.norm_sqr()) * z
    }

    fn params(&self) -> WeightParams {
        self.params
    }

    fn model_radius(&self, t: f64) -> Result<f64> {
        geometry::model_radius(t, self.params.alpha)
    }

    fn phi_c0_bound(&self) -> f64 {
        0.0
    }
}

/// The weighted symbol `u = |f|^p (1-|z|^2)^alpha e^{-log_scale}` for a
/// holomorphic `f`.
///
/// The constructor measures the log-perturbation
/// `phi = p log|f| - log_scale` on the working annulus; level-set
/// extraction refuses symbols with `sup |phi| > 1/2`.
#[derive(Debug, Clone)]
pub struct WeightedSymbol<F: Holo> {
    f: F,
    params: WeightParams,
    log_scale: f64,
    phi_bound: f64,
}

impl<F: Holo> WeightedSymbol<F> {
    /// Builds the symbol with unit scale (`u = |f|^p (1-|z|^2)^alpha`).
    pub fn new(f: F, params: WeightParams) -> Result<Self> {
        Self::with_scale(f, params, 0.0)
    }

    /// Builds the symbol for `f` normalized in its own weighted space:
    /// `log_scale = log int |f|^p dmu_alpha`, so the underlying holomorphic
    /// function is `f / ||f||` and the symbol integrates like a normalized
    /// weight. Returns the symbol and the measured scale.
    pub fn normalized(f: F, params: WeightParams, order: usize, n_circ: usize) -> Result<Self> {
        if params.n != 1 {
            return Err(Error::Domain(format!(
                "weighted symbols are built on the disk, got n={}",
                params.n
            )));
        }
        let mass = bergman_mean_pow(&f, params.p, params.alpha, order, n_circ)?;
        if !(mass > 0.0) || !mass.is_finite() {
            return Err(Error::Domain(format!(
                "weighted mass of f must be positive and finite, got {mass}"
            )));
        }
        Self::with_scale(f, params, mass.ln())
    }

    fn with_scale(f: F, params: WeightParams, log_scale: f64) -> Result<Self> {
        if params.n != 1 {
            return Err(Error::Domain(format!(
                "weighted symbols are built on the disk, got n={}",
                params.n
            )));
        }
        let mut phi_bound: f64 = 0.0;
        for i in 0..BOUND_GRID {
            let rho = WORK_RADIUS * i as f64 / (BOUND_GRID - 1) as f64;
            for j in 0..BOUND_GRID {
                let theta = 2.0 * std::f64::consts::PI * j as f64 / BOUND_GRID as f64;
                let modulus = f.eval(Complex64::from_polar(rho, theta)).norm();
                let phi = params.p * modulus.ln() - log_scale;
                phi_bound = phi_bound.max(phi.abs());
            }
        }
        Ok(Self {
            f,
            params,
            log_scale,
            phi_bound,
        })
    }

    pub fn log_scale(&self) -> f64 {
        self.log_scale
    }

    pub fn holo(&self) -> &F {
        &self.f
    }

    /// C1 size of the unscaled log-perturbation `log|f|^p` on `|z| <= rho_work`:
    /// `sup |p log|f|| + sup |p f'/f|`, measured on a grid.
    pub fn phi_c1_bound(&self, rho_work: f64) -> Result<f64> {
        if !(rho_work > 0.0 && rho_work < 1.0) {
            return Err(Error::Domain(format!(
                "working radius {rho_work} must lie in (0,1)"
            )));
        }
        let mut sup_phi: f64 = 0.0;
        let mut sup_grad: f64 = 0.0;
        for i in 0..BOUND_GRID {
            let rho = rho_work * i as f64 / (BOUND_GRID - 1) as f64;
            for j in 0..BOUND_GRID {
                let theta = 2.0 * std::f64::consts::PI * j as f64 / BOUND_GRID as f64;
                let z = Complex64::from_polar(rho, theta);
                let value = self.f.eval(z);
                sup_phi = sup_phi.max((self.params.p * value.norm().ln()).abs());
                sup_grad = sup_grad.max(self.params.p * (self.f.deriv(z) / value).norm());
            }
        }
        Ok(sup_phi + sup_grad)
    }
}

impl<F: Holo> LevelSymbol for WeightedSymbol<F> {
    fn log_u(&self, z: Complex64) -> f64 {
        self.params.p * self.f.eval(z).norm().ln() - self.log_scale
            + self.params.alpha * (1.0 - z.norm_sqr()).ln()
    }

    fn grad_log_u(&self, z: Complex64) -> Complex64 {
        let ratio = self.f.deriv(z) / self.f.eval(z);
        self.params.p * ratio.conj() - 2.0 * self.params.alpha / (1.0 - z.norm_sqr()) * z
    }

    fn params(&self) -> WeightParams {
        self.params
    }

    fn model_radius(&self, t: f64) -> Result<f64> {
        geometry::model_radius(t * self.log_scale.exp(), self.params.alpha)
    }

    fn phi_c0_bound(&self) -> f64 {
        self.phi_bound
    }
}

/// The radius symbol `u = |z|`, whose level sets are the Euclidean circles;
/// used to exercise the extraction and flux pipeline on exactly known sets.
///
/// The attached weight parameters are nominal (alpha = 2): no weighted
/// measure enters this symbol.
#[derive(Debug, Clone, Copy)]
pub struct RadiusSymbol;

impl LevelSymbol for RadiusSymbol {
    fn log_u(&self, z: Complex64) -> f64 {
        z.norm().ln()
    }

    fn grad_log_u(&self, z: Complex64) -> Complex64 {
        z / z.norm_sqr()
    }

    fn params(&self) -> WeightParams {
        WeightParams {
            n: 1,
            p: 1.0,
            alpha: 2.0,
        }
    }

    fn model_radius(&self, t: f64) -> Result<f64> {
        if !(t > 0.0 && t < 1.0) {
            return Err(Error::Domain(format!("radius level t={t} must lie in (0,1)")));
        }
        Ok(t)
    }

    fn phi_c0_bound(&self) -> f64 {
        0.0
    }
}

/// Adversarial radial symbol `u = (1-|z|^2)^alpha e^{eps (|z|^2 - c)}` with
/// `c = 1/alpha`, so the log-perturbation `eps (|z|^2 - c)` has zero mean
/// against `dmu_alpha` on the disk.
///
/// The perturbation is radial and not of holomorphic type, so the superlevel
/// distribution of this symbol is NOT dominated by the model profile; it is
/// the negative control for the dominance checks.
#[derive(Debug, Clone, Copy)]
pub struct AdversarialSymbol {
    alpha: f64,
    eps: f64,
    c: f64,
}

impl AdversarialSymbol {
    pub fn new(alpha: f64, eps: f64) -> Result<Self> {
        if !(alpha > 1.0) {
            return Err(Error::Domain(format!(
                "adversarial symbol requires alpha={alpha} > 1"
            )));
        }
        // int |z|^2 dmu_alpha = 1/alpha on the disk.
        Ok(Self {
            alpha,
            eps,
            c: 1.0 / alpha,
        })
    }

    pub fn mean_offset(&self) -> f64 {
        self.c
    }
}

impl LevelSymbol for AdversarialSymbol {
    fn log_u(&self, z: Complex64) -> f64 {
        let r2 = z.norm_sqr();
        self.alpha * (1.0 - r2).ln() + self.eps * (r2 - self.c)
    }

    fn grad_log_u(&self, z: Complex64) -> Complex64 {
        (-2.0 * self.alpha / (1.0 - z.norm_sqr()) + 2.0 * self.eps) * z
    }

    fn params(&self) -> WeightParams {
        WeightParams {
            n: 1,
            p: 1.0,
            alpha: self.alpha,
        }
    }

    fn model_radius(&self, t: f64) -> Result<f64> {
        geometry::model_radius(t, self.alpha)
    }

    fn phi_c0_bound(&self) -> f64 {
        let r2 = WORK_RADIUS * WORK_RADIUS;
        self.eps.abs() * self.c.max((r2 - self.c).abs())
    }
}

/// A symbol precomposed with the point automorphism exchanging `a` and 0:
/// `u_tilde(w) = u(psi_a(w))`. Its level sets are the automorphic images of
/// the inner symbol's level sets, so recentering a level set means
/// extracting from the recentered symbol.
#[derive(Debug, Clone, Copy)]
pub struct RecenteredSymbol<'a, S: LevelSymbol + ?Sized> {
    inner: &'a S,
    a: Complex64,
}

impl<'a, S: LevelSymbol + ?Sized> RecenteredSymbol<'a, S> {
    pub fn new(inner: &'a S, a: Complex64) -> Result<Self> {
        if !(a.norm() < 1.0) {
            return Err(Error::Domain(format!(
                "recentering point must lie in the open disk, got |a|={}",
                a.norm()
            )));
        }
        Ok(Self { inner, a })
    }

    pub fn center(&self) -> Complex64 {
        self.a
    }
}

impl<'a, S: LevelSymbol + ?Sized> LevelSymbol for RecenteredSymbol<'a, S> {
    fn log_u(&self, w: Complex64) -> f64 {
        self.inner.log_u(mobius(self.a, w))
    }

    fn grad_log_u(&self, w: Complex64) -> Complex64 {
        // Chain rule for a real function composed with a holomorphic map:
        // the gradient pulls back by the conjugated complex derivative.
        self.inner.grad_log_u(mobius(self.a, w)) * mobius_derivative(self.a, w).conj()
    }

    fn params(&self) -> WeightParams {
        self.inner.params()
    }

    fn model_radius(&self, t: f64) -> Result<f64> {
        self.inner.model_radius(t)
    }

    fn phi_c0_bound(&self) -> f64 {
        self.inner.phi_c0_bound()
    }
}
