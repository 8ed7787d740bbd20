//! Closed-form geometry of the hyperbolic (Bergman-metric) unit ball.
//!
//! Houses the invariant measure, the probability normalization of the
//! weighted measures, geodesic balls with their volume/perimeter profiles,
//! the isoperimetric comparison function `Phi`, the comparison integral `G`,
//! the model superlevel profile, and the point automorphisms of the ball.
//!
//! Conventions, fixed once for the whole crate:
//! - the invariant measure is `dv = (1 - |z|^2)^{-n-1} dnu` with constant 1
//!   (`dnu` = Lebesgue measure on C^n = R^{2n}); its total mass is infinite;
//! - the weighted probability measure is `dmu_alpha = c_{alpha,n} (1-|z|^2)^alpha dv`
//!   with `1/c_{alpha,n} = (C_n / 2) * B(n, alpha - n)` and `C_n = |S^{2n-1}|`,
//!   which at n = 1 has planar density `(alpha-1)(1-|z|^2)^{alpha-2}/pi`;
//! - the Bergman radius `r` and the Euclidean radius `t` of a centered ball
//!   are related by `t = tanh(r/2)`.

use num_complex::Complex64;

use crate::error::{Error, Result};

/// Relative tolerance for the contractive-line constraint `q/p = beta/alpha`.
const LINE_TOL: f64 = 1e-12;

/// Dimension, integrability exponent, and weight exponent `(n, p, alpha)`.
///
/// The weight exponent must satisfy `alpha > n`; the derived ratio
/// `r = p / alpha` is the exponent carried to the Hardy endpoint.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WeightParams {
    pub n: u32,
    pub p: f64,
    pub alpha: f64,
}

impl WeightParams {
    /// Validates `alpha > n >= 1` and `p > 0`.
    pub fn new(n: u32, p: f64, alpha: f64) -> Result<Self> {
        if n < 1 {
            return Err(Error::Domain(format!("dimension n={n} must be >= 1")));
        }
        if !(p > 0.0) || !p.is_finite() {
            return Err(Error::Domain(format!("exponent p={p} must be positive")));
        }
        if !(alpha > n as f64) || !alpha.is_finite() {
            return Err(Error::Domain(format!(
                "weight exponent alpha={alpha} must exceed n={n}"
            )));
        }
        Ok(Self { n, p, alpha })
    }

    /// The ratio `r = p / alpha`, constant along a contractive line.
    pub fn ratio(&self) -> f64 {
        self.p / self.alpha
    }
}

/// A point `(q, beta)` further along the contractive line through
/// `(p, alpha)`, with `q/p = beta/alpha = s > 1`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ContractiveLine {
    pub base: WeightParams,
    pub q: f64,
    pub beta: f64,
    pub s: f64,
}

impl ContractiveLine {
    /// Validates the line constraint to relative tolerance 1e-12 and `s > 1`.
    pub fn new(base: WeightParams, q: f64, beta: f64) -> Result<Self> {
        let s = q / base.p;
        let s_beta = beta / base.alpha;
        if !((s - s_beta).abs() <= LINE_TOL * s.abs().max(s_beta.abs())) {
            return Err(Error::InvalidArgument(format!(
                "line constraint violated: q/p={s} but beta/alpha={s_beta}"
            )));
        }
        if !(s > 1.0) {
            return Err(Error::InvalidArgument(format!(
                "line parameter s=q/p={s} must exceed 1"
            )));
        }
        if !(beta > base.n as f64) {
            return Err(Error::Domain(format!(
                "target weight beta={beta} must exceed n={}",
                base.n
            )));
        }
        Ok(Self { base, q, beta, s })
    }

    /// Builds the line point at parameter `s`, i.e. `(q, beta) = s (p, alpha)`.
    pub fn at_scale(base: WeightParams, s: f64) -> Result<Self> {
        Self::new(base, s * base.p, s * base.alpha)
    }

    /// Parameters `(n, q, beta)` of the target space on the line.
    pub fn target(&self) -> Result<WeightParams> {
        WeightParams::new(self.base.n, self.q, self.beta)
    }
}

/// Normalization constants shared by every module: the invariant-measure
/// constant (fixed to 1) and the probability normalization `c_{alpha,n}`.
#[derive(Debug, Clone, Copy)]
pub struct NormalizationConstants {
    pub c_n: f64,
    pub c_alpha_n: f64,
}

impl NormalizationConstants {
    pub fn new(alpha: f64, n: u32) -> Result<Self> {
        Ok(Self {
            c_n: 1.0,
            c_alpha_n: c_alpha_n(alpha, n)?,
        })
    }
}

/// Surface area `C_n = |S^{2n-1}| = 2 pi^n / (n-1)!` of the unit sphere in C^n.
pub fn sphere_area(n: u32) -> f64 {
    let mut fact = 1.0;
    for k in 2..n {
        fact *= k as f64;
    }
    2.0 * std::f64::consts::PI.powi(n as i32) / fact
}

/// Probability normalization `c_{alpha,n}` with
/// `1/c_{alpha,n} = (C_n/2) B(n, alpha-n)`.
pub fn c_alpha_n(alpha: f64, n: u32) -> Result<f64> {
    if !(alpha > n as f64) {
        return Err(Error::Domain(format!(
            "c_alpha_n requires alpha={alpha} > n={n}"
        )));
    }
    let ln_b = statrs::function::beta::ln_beta(n as f64, alpha - n as f64);
    Ok(2.0 / (sphere_area(n) * ln_b.exp()))
}

/// Density of the invariant measure, `(1 - |z|^2)^{-n-1}`, at a ball point.
pub fn invariant_measure_density(z: &[Complex64], n: u32) -> Result<f64> {
    let a2 = abs2(z);
    if !(a2 < 1.0) {
        return Err(Error::Domain(format!(
            "point with |z|^2={a2} lies outside the open unit ball"
        )));
    }
    Ok(invariant_density_from_abs2(a2, n))
}

/// Same density as a function of `|z|^2`; no domain check.
pub fn invariant_density_from_abs2(abs2: f64, n: u32) -> f64 {
    (1.0 - abs2).powi(-(n as i32) - 1)
}

/// Squared Euclidean norm of a point in C^n.
pub fn abs2(z: &[Complex64]) -> f64 {
    z.iter().map(|w| w.norm_sqr()).sum()
}

/// Euclidean radius `t = tanh(r/2)` of the Bergman ball of radius `r`.
pub fn euclid_of_bergman(r: f64) -> f64 {
    (r / 2.0).tanh()
}

/// Bergman radius `r = 2 artanh(t)` of the centered ball of Euclidean radius `t`.
pub fn bergman_of_euclid(t: f64) -> f64 {
    2.0 * t.atanh()
}

/// Invariant volume of the centered ball of Euclidean radius `rho`:
/// `V = (C_n / 2n) * (rho^2 / (1 - rho^2))^n`.
pub fn ball_volume_euclid(rho: f64, n: u32) -> Result<f64> {
    if !(0.0..1.0).contains(&rho) {
        return Err(Error::Domain(format!(
            "euclidean radius rho={rho} must lie in [0,1)"
        )));
    }
    let w = rho * rho / (1.0 - rho * rho);
    Ok(sphere_area(n) / (2.0 * n as f64) * w.powi(n as i32))
}

/// Invariant perimeter of the centered ball of Euclidean radius `rho`:
/// `S = C_n * rho^{2n-1} * (1 - rho^2)^{-n}`.
pub fn ball_perimeter_euclid(rho: f64, n: u32) -> Result<f64> {
    if !(rho > 0.0 && rho < 1.0) {
        return Err(Error::Domain(format!(
            "euclidean radius rho={rho} must lie in (0,1)"
        )));
    }
    Ok(sphere_area(n) * rho.powi(2 * n as i32 - 1) * (1.0 - rho * rho).powi(-(n as i32)))
}

/// Invariant volume `V(r)` of the Bergman ball of radius `r >= 0`.
pub fn ball_volume(r: f64, n: u32) -> Result<f64> {
    if !(r >= 0.0) {
        return Err(Error::Domain(format!("bergman radius r={r} must be >= 0")));
    }
    ball_volume_euclid(euclid_of_bergman(r), n)
}

/// Invariant perimeter `S(r)` of the Bergman ball of radius `r > 0`.
pub fn ball_perimeter(r: f64, n: u32) -> Result<f64> {
    if !(r > 0.0) {
        return Err(Error::Domain(format!("bergman radius r={r} must be > 0")));
    }
    ball_perimeter_euclid(euclid_of_bergman(r), n)
}

/// Bergman radius of the centered ball with the given invariant volume.
///
/// Closed-form inverse of `ball_volume`: with `w = (2n xi / C_n)^{1/n}` the
/// Euclidean radius is `rho = sqrt(w / (1 + w))`. The round trip
/// `ball_volume(volume_inverse(xi)) = xi` holds to relative 1e-12, which is
/// what a bracketed root-find would certify.
pub fn volume_inverse(xi: f64, n: u32) -> Result<f64> {
    if !(xi > 0.0) || !xi.is_finite() {
        return Err(Error::Domain(format!("volume xi={xi} must be positive")));
    }
    let w = (2.0 * n as f64 * xi / sphere_area(n)).powf(1.0 / n as f64);
    let rho = (w / (1.0 + w)).sqrt();
    Ok(bergman_of_euclid(rho))
}

/// Isoperimetric comparison function
/// `Phi(xi) = S(V^{-1}(xi))^2 / (4 n alpha xi)`.
///
/// For n = 1 this reduces to the closed form `(pi + xi) / alpha`.
pub fn iso_profile_phi(xi: f64, params: &WeightParams) -> Result<f64> {
    if !(xi > 0.0) {
        return Err(Error::Domain(format!("volume xi={xi} must be positive")));
    }
    let r = volume_inverse(xi, params.n)?;
    let s = ball_perimeter(r, params.n)?;
    Ok(s * s / (4.0 * params.n as f64 * params.alpha * xi))
}

/// Comparison integral `G(x) = int_x^{x_ref} d xi / Phi(xi)`.
///
/// Evaluated in closed form for every n: substituting
/// `w(xi) = (2 n xi / C_n)^{1/n}` gives `G = alpha * log((1+w(x_ref))/(1+w(x)))`,
/// which at n = 1 is `alpha * log((pi + x_ref)/(pi + x))`. `G(x_ref) = 0` and
/// `G` is strictly decreasing in `x`.
pub fn comparison_g(x: f64, x_ref: f64, params: &WeightParams) -> Result<f64> {
    if !(x > 0.0 && x_ref > 0.0) {
        return Err(Error::Domain(format!(
            "comparison G needs positive volumes, got x={x}, x_ref={x_ref}"
        )));
    }
    let n = params.n as f64;
    let cn = sphere_area(params.n);
    let w = (2.0 * n * x / cn).powf(1.0 / n);
    let w_ref = (2.0 * n * x_ref / cn).powf(1.0 / n);
    Ok(params.alpha * ((1.0 + w_ref) / (1.0 + w)).ln())
}

/// Model superlevel volume `mu_*(t)` of the pure weight `w = (1-|z|^2)^alpha`:
/// the set `{w > t}` is the centered Euclidean ball of radius
/// `rho_0(t) = sqrt(1 - t^{1/alpha})`, so
/// `mu_*(t) = (C_n / 2n) (t^{-1/alpha} - 1)^n`.
///
/// Returns 0 for `t >= 1` (empty set).
pub fn model_volume(t: f64, params: &WeightParams) -> Result<f64> {
    if !(t > 0.0) {
        return Err(Error::Domain(format!("level t={t} must be positive")));
    }
    if t >= 1.0 {
        return Ok(0.0);
    }
    let n = params.n as f64;
    let w = t.powf(-1.0 / params.alpha) - 1.0;
    Ok(sphere_area(params.n) / (2.0 * n) * w.powf(n))
}

/// Euclidean radius `rho_0(t) = sqrt(1 - t^{1/alpha})` of the model
/// superlevel set at level `t` in (0, 1].
pub fn model_radius(t: f64, alpha: f64) -> Result<f64> {
    if !(t > 0.0 && t <= 1.0) {
        return Err(Error::Domain(format!("level t={t} must lie in (0,1]")));
    }
    Ok((1.0 - t.powf(1.0 / alpha)).sqrt())
}

/// Level of the model weight on the sphere of Euclidean radius `rho`:
/// `t = (1 - rho^2)^alpha`, the inverse of `model_radius`.
pub fn model_level(rho: f64, alpha: f64) -> Result<f64> {
    if !(0.0..1.0).contains(&rho) {
        return Err(Error::Domain(format!("radius rho={rho} must lie in [0,1)")));
    }
    Ok((1.0 - rho * rho).powf(alpha))
}

/// Point automorphism of the ball exchanging `a` and the origin.
///
/// For `a != 0` this is the standard involution with `psi_a(a) = 0`,
/// `psi_a(0) = a`, and `psi_a(psi_a(z)) = z`; the `a = 0` automorphism is
/// taken to be the identity (both fix the origin, and the involution
/// normalization is only meaningful for `a != 0`).
pub fn point_automorphism(a: &[Complex64], z: &[Complex64]) -> Result<Vec<Complex64>> {
    if a.len() != z.len() {
        return Err(Error::InvalidArgument(format!(
            "dimension mismatch: a has {} components, z has {}",
            a.len(),
            z.len()
        )));
    }
    let a2 = abs2(a);
    let z2 = abs2(z);
    if !(a2 < 1.0) || !(z2 < 1.0) {
        return Err(Error::Domain(format!(
            "automorphism arguments must lie in the open ball, got |a|^2={a2}, |z|^2={z2}"
        )));
    }
    if a2 == 0.0 {
        return Ok(z.to_vec());
    }
    // <z, a> = sum z_i conj(a_i)
    let za: Complex64 = z.iter().zip(a).map(|(zi, ai)| zi * ai.conj()).sum();
    let s = (1.0 - a2).sqrt();
    let denom = Complex64::new(1.0, 0.0) - za;
    let proj = za / Complex64::new(a2, 0.0);
    Ok(a
        .iter()
        .zip(z)
        .map(|(ai, zi)| {
            let p = proj * ai; // projection of z onto span(a)
            let q = zi - p; // orthogonal complement
            (ai - p - s * q) / denom
        })
        .collect())
}

/// One-dimensional Mobius involution `psi_a(w) = (a - w) / (1 - conj(a) w)`
/// (identity when `a = 0`), the n = 1 specialization of `point_automorphism`.
pub fn mobius(a: Complex64, w: Complex64) -> Complex64 {
    if a.norm_sqr() == 0.0 {
        return w;
    }
    (a - w) / (Complex64::new(1.0, 0.0) - a.conj() * w)
}

/// Complex derivative of the n = 1 involution,
/// `psi_a'(w) = -(1 - |a|^2) / (1 - conj(a) w)^2` (1 when `a = 0`).
pub fn mobius_derivative(a: Complex64, w: Complex64) -> Complex64 {
    if a.norm_sqr() == 0.0 {
        return Complex64::new(1.0, 0.0);
    }
    let d = Complex64::new(1.0, 0.0) - a.conj() * w;
    -(1.0 - a.norm_sqr()) / (d * d)
}

/// A geodesic ball: Bergman radius, Euclidean radius, volume, perimeter.
#[derive(Debug, Clone, Copy)]
pub struct GeodesicBall {
    pub bergman_radius: f64,
    pub euclid_radius: f64,
    pub volume: f64,
    pub perimeter: f64,
}

impl GeodesicBall {
    pub fn from_bergman_radius(r: f64, n: u32) -> Result<Self> {
        if !(r > 0.0) {
            return Err(Error::Domain(format!("bergman radius r={r} must be > 0")));
        }
        let t = euclid_of_bergman(r);
        Ok(Self {
            bergman_radius: r,
            euclid_radius: t,
            volume: ball_volume_euclid(t, n)?,
            perimeter: ball_perimeter_euclid(t, n)?,
        })
    }

    pub fn from_euclid_radius(t: f64, n: u32) -> Result<Self> {
        if !(t > 0.0 && t < 1.0) {
            return Err(Error::Domain(format!(
                "euclidean radius t={t} must lie in (0,1)"
            )));
        }
        Ok(Self {
            bergman_radius: bergman_of_euclid(t),
            euclid_radius: t,
            volume: ball_volume_euclid(t, n)?,
            perimeter: ball_perimeter_euclid(t, n)?,
        })
    }
}

/// Polar density of the invariant volume in the Euclidean radius on the
/// disk: `m'(rho) = 2 pi rho / (1 - rho^2)^2`, the derivative of the sector
/// volume `m(rho) = pi rho^2 / (1 - rho^2)`.
pub fn radial_volume_density(rho: f64) -> Result<f64> {
    if !(0.0..1.0).contains(&rho) {
        return Err(Error::Domain(format!("radius rho={rho} must lie in [0,1)")));
    }
    Ok(2.0 * std::f64::consts::PI * rho / (1.0 - rho * rho).powi(2))
}

/// Derivative of the polar density on the disk:
/// `m''(rho) = 2 pi (1 + 3 rho^2) / (1 - rho^2)^3`, the curvature of the
/// sector volume that drives the second variation of enclosed volume.
pub fn radial_volume_density_derivative(rho: f64) -> Result<f64> {
    if !(0.0..1.0).contains(&rho) {
        return Err(Error::Domain(format!("radius rho={rho} must lie in [0,1)")));
    }
    Ok(2.0 * std::f64::consts::PI * (1.0 + 3.0 * rho * rho) / (1.0 - rho * rho).powi(3))
}

/// Second derivative `d^2 V / d r^2` of the ball volume in the Bergman
/// radius, the polar-density derivative used by the second-variation form.
///
/// With `phi(r) = dV/dr = S(rho)/2` and `rho = tanh(r/2)`:
/// `phi'(r) = S'(rho) (1 - rho^2) / 4` where
/// `S'(rho) = C_n rho^{2n-2} (1-rho^2)^{-n-1} (2n - 1 + rho^2)`.
pub fn polar_density_derivative(r: f64, n: u32) -> Result<f64> {
    if !(r > 0.0) {
        return Err(Error::Domain(format!("bergman radius r={r} must be > 0")));
    }
    let rho = euclid_of_bergman(r);
    let nf = n as f64;
    let s_prime = sphere_area(n)
        * rho.powi(2 * n as i32 - 2)
        * (1.0 - rho * rho).powi(-(n as i32) - 1)
        * (2.0 * nf - 1.0 + rho * rho);
    Ok(s_prime * (1.0 - rho * rho) / 4.0)
}
