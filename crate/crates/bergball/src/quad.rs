//! Gauss–Jacobi quadrature and the radial rule for weighted ball measures.
//!
//! The weighted norms integrate `g(rho) rho^{2n-1} (1 - rho^2)^{alpha-n-1}`
//! over `rho` in (0, 1). The substitution `x = 2 rho^2 - 1` turns this into a
//! Jacobi-weighted integral on (-1, 1) with exponents `a = alpha - n - 1`,
//! `b = n - 1`, so an N-point Gauss–Jacobi rule integrates it exactly for
//! radial polynomials of degree up to 2N-1 in `rho^2`, even when
//! `alpha - n` is tiny and the weight is nearly non-integrable.
//!
//! Nodes and weights come from the Golub–Welsch method: the three-term
//! recurrence coefficients of the monic Jacobi polynomials fill a symmetric
//! tridiagonal matrix whose eigenvalues are the nodes, and the squared first
//! components of its normalized eigenvectors give the weights. The
//! eigenproblem is solved with the implicit-shift QL iteration, tracking
//! only the first row of the eigenvector matrix.
//!
//! # Example
//!
//! ```
//! use bergball::quad::RadialRule;
//!
//! // alpha = 2, n = 1: weight rho on (0,1); mass = 1/2, third moment 1/4.
//! let rule = RadialRule::new(16, 2.0, 1).unwrap();
//! assert!((rule.mass() - 0.5).abs() < 1e-14);
//! let m3 = rule.integrate(|rho| rho * rho);
//! assert!((m3 - 0.25).abs() < 1e-14);
//! ```

use crate::error::{Error, Result};

/// Weight-exponent margin below which the radial rule doubles its order to
/// keep borderline weights `(1 - rho^2)^{alpha-n-1}` fully resolved.
pub const BORDERLINE_MARGIN: f64 = 0.02;

/// Nodes and weights of the N-point Gauss–Jacobi rule for
/// `int_{-1}^{1} (1-x)^a (1+x)^b f(x) dx`, nodes ascending.
///
/// Requires `a > -1`, `b > -1`, `order >= 1`.
///
/// ```
/// use bergball::quad::gauss_jacobi;
///
/// let (x, w) = gauss_jacobi(5, 0.0, 0.0).unwrap();
/// let integral: f64 = x.iter().zip(&w).map(|(x, w)| w * x * x).sum();
/// assert!((integral - 2.0 / 3.0).abs() < 1e-14);
/// ```
pub fn gauss_jacobi(order: usize, a: f64, b: f64) -> Result<(Vec<f64>, Vec<f64>)> {
    if order < 1 {
        return Err(Error::InvalidArgument(
            "quadrature order must be at least 1".into(),
        ));
    }
    if !(a > -1.0) || !(b > -1.0) {
        return Err(Error::Domain(format!(
            "jacobi exponents must exceed -1, got a={a}, b={b}"
        )));
    }

    // Monic-recurrence coefficients: x p_k = p_{k+1} + alpha_k p_k + beta_k p_{k-1}.
    let ab = a + b;
    let mut diag = vec![0.0f64; order];
    let mut offdiag = vec![0.0f64; order];
    diag[0] = (b - a) / (ab + 2.0);
    for k in 1..order {
        let kf = k as f64;
        let denom = 2.0 * kf + ab;
        diag[k] = (b * b - a * a) / (denom * (denom + 2.0));
        let beta_k = if k == 1 {
            4.0 * (a + 1.0) * (b + 1.0) / ((ab + 2.0) * (ab + 2.0) * (ab + 3.0))
        } else {
            4.0 * kf * (kf + a) * (kf + b) * (kf + ab)
                / (denom * denom * (denom + 1.0) * (denom - 1.0))
        };
        offdiag[k - 1] = beta_k.sqrt();
    }
    // Total weight mu_0 = 2^{a+b+1} B(a+1, b+1).
    let mu0 = ((ab + 1.0) * std::f64::consts::LN_2
        + statrs::function::beta::ln_beta(a + 1.0, b + 1.0))
    .exp();

    let mut first_row = vec![0.0f64; order];
    first_row[0] = 1.0;
    ql_first_row(&mut diag, &mut offdiag, &mut first_row)?;

    let mut pairs: Vec<(f64, f64)> = diag
        .into_iter()
        .zip(first_row)
        .map(|(x, z)| (x, mu0 * z * z))
        .collect();
    pairs.sort_by(|p, q| p.0.partial_cmp(&q.0).expect("nodes are finite"));
    Ok(pairs.into_iter().unzip())
}

/// Gauss–Legendre rule on (-1, 1): the Jacobi rule with `a = b = 0`.
pub fn gauss_legendre(order: usize) -> Result<(Vec<f64>, Vec<f64>)> {
    gauss_jacobi(order, 0.0, 0.0)
}

/// Gauss–Legendre rule transplanted to (lo, hi).
pub fn gauss_legendre_on(order: usize, lo: f64, hi: f64) -> Result<(Vec<f64>, Vec<f64>)> {
    if !(hi > lo) {
        return Err(Error::InvalidArgument(format!(
            "interval [{lo}, {hi}] must have positive length"
        )));
    }
    let (x, w) = gauss_legendre(order)?;
    let mid = 0.5 * (lo + hi);
    let half = 0.5 * (hi - lo);
    Ok((
        x.iter().map(|xi| mid + half * xi).collect(),
        w.iter().map(|wi| half * wi).collect(),
    ))
}

/// Implicit-shift QL iteration for a symmetric tridiagonal matrix,
/// accumulating only the first row of the eigenvector matrix.
///
/// On entry `diag` holds the diagonal, `offdiag[..n-1]` the subdiagonal, and
/// `z` the first row of the identity. On exit `diag` holds eigenvalues
/// (unordered) and `z` the first components of the normalized eigenvectors.
fn ql_first_row(diag: &mut [f64], offdiag: &mut [f64], z: &mut [f64]) -> Result<()> {
    let n = diag.len();
    if n == 1 {
        return Ok(());
    }
    offdiag[n - 1] = 0.0;
    for l in 0..n {
        let mut iter = 0;
        loop {
            let mut m = l;
            while m + 1 < n {
                let dd = diag[m].abs() + diag[m + 1].abs();
                if offdiag[m].abs() <= f64::EPSILON * dd {
                    break;
                }
                m += 1;
            }
            if m == l {
                break;
            }
            iter += 1;
            if iter > 60 {
                return Err(Error::Solver(
                    "tridiagonal QL iteration failed to converge".into(),
                ));
            }
            let mut g = (diag[l + 1] - diag[l]) / (2.0 * offdiag[l]);
            let mut r = g.hypot(1.0);
            g = diag[m] - diag[l] + offdiag[l] / (g + r.copysign(g));
            let mut s = 1.0f64;
            let mut c = 1.0f64;
            let mut p = 0.0f64;
            let mut underflow = false;
            for i in (l..m).rev() {
                let mut f = s * offdiag[i];
                let h = c * offdiag[i];
                r = f.hypot(g);
                offdiag[i + 1] = r;
                if r == 0.0 {
                    diag[i + 1] -= p;
                    offdiag[m] = 0.0;
                    underflow = true;
                    break;
                }
                s = f / r;
                c = g / r;
                g = diag[i + 1] - p;
                r = (diag[i] - g) * s + 2.0 * c * h;
                p = s * r;
                diag[i + 1] = g + p;
                g = c * r - h;
                f = z[i + 1];
                z[i + 1] = s * z[i] + c * f;
                z[i] = c * z[i] - s * f;
            }
            if underflow {
                continue;
            }
            diag[l] -= p;
            offdiag[l] = g;
            offdiag[m] = 0.0;
        }
    }
    Ok(())
}

/// Quadrature rule for `int_0^1 g(rho) rho^{2n-1} (1-rho^2)^{alpha-n-1} drho`.
///
/// Built from the Gauss–Jacobi rule with `a = alpha - n - 1`, `b = n - 1`
/// under `x = 2 rho^2 - 1`; node `rho_i = sqrt((1+x_i)/2)` carries weight
/// `2^{-alpha} w_i`. The rule mass equals `B(n, alpha-n)/2` exactly.
#[derive(Debug, Clone)]
pub struct RadialRule {
    rho: Vec<f64>,
    weight: Vec<f64>,
    pub order: usize,
    pub alpha: f64,
    pub n: u32,
}

impl RadialRule {
    /// Builds the rule. Requires `order >= 4` and `alpha > n`.
    pub fn new(order: usize, alpha: f64, n: u32) -> Result<Self> {
        if order < 4 {
            return Err(Error::InvalidArgument(format!(
                "radial rule order {order} is below the minimum of 4"
            )));
        }
        if !(alpha > n as f64) {
            return Err(Error::Domain(format!(
                "radial rule requires alpha={alpha} > n={n}"
            )));
        }
        let (x, w) = gauss_jacobi(order, alpha - n as f64 - 1.0, n as f64 - 1.0)?;
        let scale = 2.0f64.powf(-alpha);
        Ok(Self {
            rho: x.iter().map(|xi| ((1.0 + xi) / 2.0).sqrt()).collect(),
            weight: w.iter().map(|wi| scale * wi).collect(),
            order,
            alpha,
            n,
        })
    }

    /// Builds the rule, doubling the order when `alpha - n <= 0.02` so that
    /// borderline weights keep full accuracy.
    pub fn adaptive(order: usize, alpha: f64, n: u32) -> Result<Self> {
        if alpha - n as f64 <= BORDERLINE_MARGIN {
            Self::new(order * 2, alpha, n)
        } else {
            Self::new(order, alpha, n)
        }
    }

    /// Radial nodes, ascending in (0, 1).
    pub fn nodes(&self) -> &[f64] {
        &self.rho
    }

    /// Weights paired with `nodes()`.
    pub fn weights(&self) -> &[f64] {
        &self.weight
    }

    /// Largest node; quantifies how far the rule reaches toward the boundary.
    pub fn max_node(&self) -> f64 {
        *self.rho.last().expect("rule has at least 4 nodes")
    }

    /// Rule mass `sum_i w_i = B(n, alpha-n)/2`.
    pub fn mass(&self) -> f64 {
        self.weight.iter().sum()
    }

    /// Applies the rule to `g`, approximating
    /// `int_0^1 g(rho) rho^{2n-1} (1-rho^2)^{alpha-n-1} drho`.
    pub fn integrate(&self, g: impl Fn(f64) -> f64) -> f64 {
        self.rho
            .iter()
            .zip(&self.weight)
            .map(|(&r, &w)| w * g(r))
            .sum()
    }

    /// Applies the rule to a fallible integrand, propagating the first error.
    pub fn try_integrate(&self, g: impl Fn(f64) -> Result<f64>) -> Result<f64> {
        let mut acc = 0.0;
        for (&r, &w) in self.rho.iter().zip(&self.weight) {
            acc += w * g(r)?;
        }
        Ok(acc)
    }
}

/// Unnormalized radial tail `int_{rho0}^1 rho^{2n-1} (1-rho^2)^{alpha-n-1} drho`,
/// in closed form `B(n, alpha-n)/2 * I_{1-rho0^2}(alpha-n, n)` with `I` the
/// regularized incomplete beta function.
pub fn radial_tail_mass(rho0: f64, alpha: f64, n: u32) -> Result<f64> {
    if !(0.0..1.0).contains(&rho0) {
        return Err(Error::Domain(format!(
            "tail cutoff rho0={rho0} must lie in [0,1)"
        )));
    }
    if !(alpha > n as f64) {
        return Err(Error::Domain(format!(
            "tail mass requires alpha={alpha} > n={n}"
        )));
    }
    let half_beta = 0.5 * statrs::function::beta::ln_beta(n as f64, alpha - n as f64).exp();
    let reg = statrs::function::beta::beta_reg(alpha - n as f64, n as f64, 1.0 - rho0 * rho0);
    Ok(half_beta * reg)
}

/// Composite trapezoid rule over sample pairs `(x_i, y_i)` with ascending,
/// not necessarily uniform, abscissas.
pub fn trapezoid(points: &[(f64, f64)]) -> Result<f64> {
    if points.len() < 2 {
        return Err(Error::InvalidArgument(
            "trapezoid rule needs at least two sample points".into(),
        ));
    }
    let mut acc = 0.0;
    for pair in points.windows(2) {
        let (x0, y0) = pair[0];
        let (x1, y1) = pair[1];
        if !(x1 > x0) {
            return Err(Error::InvalidArgument(format!(
                "trapezoid abscissas must increase, got {x0} then {x1}"
            )));
        }
        acc += 0.5 * (y0 + y1) * (x1 - x0);
    }
    Ok(acc)
}
