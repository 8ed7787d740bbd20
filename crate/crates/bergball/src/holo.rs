//! Holomorphic functions on the disk and their weighted integral norms.
//!
//! Polynomials are the working class of holomorphic symbols: they are dense
//! in every weighted space in play, extend continuously to the closed disk,
//! and have exact derivatives. Norms against the weighted probability
//! measure `dmu_alpha` are computed by the radial Gauss–Jacobi rule crossed
//! with a uniform circle rule; both converge spectrally for the analytic
//! integrands that arise here.
//!
//! All norm routines work on the disk (n = 1), where the weighted measure
//! has planar density `(alpha-1)/pi * (1-|z|^2)^{alpha-2}`.
//!
//! # Example
//!
//! ```
//! use bergball::holo::{bergman_norm, Poly};
//!
//! // The measure is a probability measure, so ||1|| = 1 for every (p, alpha).
//! let one = Poly::from_real(&[1.0]);
//! let norm = bergman_norm(&one, 2.0, 2.0, 32, 64).unwrap();
//! assert!((norm - 1.0).abs() < 1e-13);
//! ```

use num_complex::Complex64;
use statrs::function::gamma::ln_gamma;

use crate::error::{Error, Result};
use crate::quad::RadialRule;

/// A holomorphic function with an exact complex derivative.
pub trait Holo: Sync {
    fn eval(&self, z: Complex64) -> Complex64;
    fn deriv(&self, z: Complex64) -> Complex64;
}

impl<T: Holo + ?Sized> Holo for &T {
    fn eval(&self, z: Complex64) -> Complex64 {
        (**self).eval(z)
    }

    fn deriv(&self, z: Complex64) -> Complex64 {
        (**self).deriv(z)
    }
}

/// Polynomial in `z` with complex coefficients, lowest degree first.
#[derive(Debug, Clone, PartialEq)]
pub struct Poly {
    coeffs: Vec<Complex64>,
}

impl Poly {
    /// Builds a polynomial from coefficients `c_0 + c_1 z + ...`.
    /// Trailing zero coefficients are trimmed; the zero polynomial keeps
    /// a single zero coefficient.
    pub fn new(mut coeffs: Vec<Complex64>) -> Self {
        while coeffs.len() > 1 && coeffs.last().map_or(false, |c| c.norm() == 0.0) {
            coeffs.pop();
        }
        if coeffs.is_empty() {
            coeffs.push(Complex64::new(0.0, 0.0));
        }
        Self { coeffs }
    }

    /// Builds a polynomial with real coefficients.
    pub fn from_real(coeffs: &[f64]) -> Self {
        Self::new(coeffs.iter().map(|&c| Complex64::new(c, 0.0)).collect())
    }

    /// Coefficients, lowest degree first.
    pub fn coeffs(&self) -> &[Complex64] {
        &self.coeffs
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    /// The polynomial scaled by a real factor.
    pub fn scaled(&self, s: f64) -> Self {
        Self::new(self.coeffs.iter().map(|c| c * s).collect())
    }
}

impl Holo for Poly {
    fn eval(&self, z: Complex64) -> Complex64 {
        let mut acc = Complex64::new(0.0, 0.0);
        for c in self.coeffs.iter().rev() {
            acc = acc * z + c;
        }
        acc
    }

    fn deriv(&self, z: Complex64) -> Complex64 {
        let mut acc = Complex64::new(0.0, 0.0);
        for (k, c) in self.coeffs.iter().enumerate().skip(1).rev() {
            acc = acc * z + c * k as f64;
        }
        acc
    }
}

/// Mean of `|f|^p` over the circle of radius `rho`, the p-th power of the
/// radial mean `M_p(rho, f)`.
pub fn radial_mean_pow(f: &dyn Holo, p: f64, rho: f64, n_circ: usize) -> f64 {
    let mut acc = 0.0;
    for j in 0..n_circ {
        let theta = 2.0 * std::f64::consts::PI * j as f64 / n_circ as f64;
        let z = Complex64::from_polar(rho, theta);
        acc += f.eval(z).norm().powf(p);
    }
    acc / n_circ as f64
}

/// Integral `int |f|^p dmu_alpha` over the disk against the weighted
/// probability measure, via the radial rule crossed with a circle rule.
///
/// Requires `p > 0` and `alpha > 1`.
pub fn bergman_mean_pow(
    f: &dyn Holo,
    p: f64,
    alpha: f64,
    order: usize,
    n_circ: usize,
) -> Result<f64> {
    if !(p > 0.0) {
        return Err(Error::Domain(format!("exponent p={p} must be positive")));
    }
    if n_circ < 8 {
        return Err(Error::InvalidArgument(format!(
            "circle rule needs at least 8 nodes, got {n_circ}"
        )));
    }
    let rule = RadialRule::adaptive(order, alpha, 1)?;
    // dmu = (alpha-1)/pi (1-rho^2)^{alpha-2} rho drho dtheta; the radial rule
    // carries rho (1-rho^2)^{alpha-2} drho, the circle mean carries dtheta/2pi.
    let radial = rule.try_integrate(|rho| {
        let mean = radial_mean_pow(f, p, rho, n_circ);
        if !mean.is_finite() {
            return Err(Error::NonFiniteIntegrand { rho, theta: 0.0 });
        }
        Ok(mean)
    })?;
    Ok(2.0 * (alpha - 1.0) * radial)
}

/// Weighted norm `||f||_{A^p_alpha} = (int |f|^p dmu_alpha)^{1/p}`.
pub fn bergman_norm(
    f: &dyn Holo,
    p: f64,
    alpha: f64,
    order: usize,
    n_circ: usize,
) -> Result<f64> {
    Ok(bergman_mean_pow(f, p, alpha, order, n_circ)?.powf(1.0 / p))
}

/// Boundary mean `int |f|^p dsigma` over the unit circle. Polynomials extend
/// continuously to the boundary, so the limit of radial means is attained.
pub fn hardy_mean_pow(f: &dyn Holo, p: f64, n_circ: usize) -> f64 {
    radial_mean_pow(f, p, 1.0, n_circ)
}

/// Hardy norm `||f||_{H^p} = (int |f|^p dsigma)^{1/p}` for polynomials.
pub fn hardy_norm(f: &dyn Holo, p: f64, n_circ: usize) -> f64 {
    hardy_mean_pow(f, p, n_circ).powf(1.0 / p)
}

/// Closed-form weighted norm of the monomial `z^k`:
/// `||z^k||^p = (alpha-1) B(kp/2 + 1, alpha - 1)`.
pub fn monomial_bergman_norm(k: u32, p: f64, alpha: f64) -> Result<f64> {
    if !(p > 0.0) || !(alpha > 1.0) {
        return Err(Error::Domain(format!(
            "monomial norm requires p={p} > 0 and alpha={alpha} > 1"
        )));
    }
    let a = k as f64 * p / 2.0 + 1.0;
    let ln_pow =
        (alpha - 1.0).ln() + ln_gamma(a) + ln_gamma(alpha - 1.0) - ln_gamma(a + alpha - 1.0);
    Ok((ln_pow / p).exp())
}
