//! Boundary deviation fields and quantitative isoperimetric stability.
//!
//! A nearly round set is recorded by its relative radial deviation
//! `u(theta) = rho(theta)/rho_ref - 1` on the uniform circle grid. This
//! module gives that field its Sobolev scales (Fourier-side `W^{1,2}` and
//! grid-side `W^{1,inf}`), the second-variation volume form, and the
//! isoperimetric deficit functional: for a centered set of the same
//! invariant volume as the ball of Euclidean radius `r`,
//!
//! `deficit = (P(E) - P(B_r)) / P(B_r)`
//!
//! is nonnegative and, for small deviations, comparable to `||u||^2_{W^{1,2}}`
//! with the comparison constant `(k^2-1)/(2(k^2+1))` on the pure k-th
//! harmonic. A synthetic family of volume-corrected cosine perturbations
//! exercises exactly this regime.

use crate::barycenter::hyperbolic_barycenter;
use crate::error::{Error, Result};
use crate::fourier::{coefficients, frequency, spectral_derivative};
use crate::geometry::{
    ball_perimeter_euclid, ball_volume_euclid, euclid_of_bergman, radial_volume_density,
    radial_volume_density_derivative,
};
use crate::levels::{volume_matched_radius, RadialGraphLevelSet};
use num_complex::Complex64;

/// Largest barycenter modulus for which a set counts as centered.
const CENTER_GATE: f64 = 1e-6;

/// Largest grid mean admissible in the second-variation form.
const MEAN_GATE: f64 = 1e-6;

/// Largest admissible share of the deviation energy in the first harmonic
/// for the second-variation form (first harmonics are translations at this
/// order, not shape changes).
const FIRST_HARMONIC_SHARE: f64 = 1e-3;

/// A real function on the uniform circle grid with its Fourier data.
#[derive(Debug, Clone)]
pub struct SphereFunction {
    samples: Vec<f64>,
    coeffs: Vec<Complex64>,
}

impl SphereFunction {
    pub fn from_samples(samples: Vec<f64>) -> Result<Self> {
        if let Some(bad) = samples.iter().find(|s| !s.is_finite()) {
            return Err(Error::Domain(format!(
                "sphere function samples must be finite, got {bad}"
            )));
        }
        let coeffs = coefficients(&samples)?;
        Ok(Self { samples, coeffs })
    }

    pub fn len(&self) -> usize {
        self.samples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.samples.is_empty()
    }

    pub fn samples(&self) -> &[f64] {
        &self.samples
    }

    /// Grid mean, the zeroth Fourier coefficient.
    pub fn mean(&self) -> f64 {
        self.coeffs[0].re
    }

    /// Grid mean of `u^2`.
    pub fn mean_square(&self) -> f64 {
        self.samples.iter().map(|&s| s * s).sum::<f64>() / self.samples.len() as f64
    }

    /// Sobolev norm `||u||^2_{W^{1,2}} = sum_k (1 + k^2) |c_k|^2` over all
    /// wrapped frequencies.
    pub fn w12_sq(&self) -> f64 {
        let n = self.coeffs.len();
        self.coeffs
            .iter()
            .enumerate()
            .map(|(idx, c)| {
                let k = frequency(idx, n) as f64;
                (1.0 + k * k) * c.norm_sqr()
            })
            .sum()
    }

    /// Uniform norm `||u||_inf + ||u'||_inf` with a spectral derivative.
    pub fn w1_inf(&self) -> Result<f64> {
        let sup: f64 = self.samples.iter().fold(0.0, |m, &s| m.max(s.abs()));
        let deriv = spectral_derivative(&self.samples)?;
        let sup_d: f64 = deriv.iter().fold(0.0, |m, &s| m.max(s.abs()));
        Ok(sup + sup_d)
    }

    /// Energy `|c_k|^2 + |c_{-k}|^2` in the k-th harmonic pair.
    pub fn harmonic_energy(&self, k: usize) -> f64 {
        let n = self.coeffs.len();
        if k == 0 {
            return self.coeffs[0].norm_sqr();
        }
        if k > n / 2 {
            return 0.0;
        }
        let positive = self.coeffs[k].norm_sqr();
        let negative = if k < n - k {
            self.coeffs[n - k].norm_sqr()
        } else {
            0.0
        };
        positive + negative
    }

    /// Total oscillation energy `sum_{k != 0} |c_k|^2`.
    pub fn oscillation_energy(&self) -> f64 {
        self.coeffs.iter().skip(1).map(|c| c.norm_sqr()).sum()
    }
}

/// Second-variation volume form of a mean-zero deviation `u` around the
/// centered set of Euclidean radius `rho_base`:
///
/// `Q = (1/2) m''(rho_base) rho_base^2 mean(u^2)`,
///
/// the quadratic term of `mu({rho <= rho_base (1+u)}) - m(rho_base)`; the
/// remainder is fourth order in the deviation amplitude.
///
/// Preconditions: the grid mean of `u` must vanish to 1e-6 (volume drift is
/// first order and would swamp `Q`), and the first harmonic may carry at
/// most a 1e-3 share of the oscillation energy (it moves the center, not
/// the shape).
pub fn second_variation_q(u: &SphereFunction, rho_base: f64) -> Result<f64> {
    let mean = u.mean();
    if mean.abs() > MEAN_GATE {
        return Err(Error::MeanMismatch(format!(
            "deviation mean {mean:.3e} exceeds the gate {MEAN_GATE:.0e}"
        )));
    }
    let oscillation = u.oscillation_energy();
    if oscillation > 0.0 {
        let share = u.harmonic_energy(1) / oscillation;
        if share > FIRST_HARMONIC_SHARE {
            return Err(Error::OutsideFugledeRegime(format!(
                "first harmonic carries {share:.3e} of the deviation energy"
            )));
        }
    }
    let m_dd = radial_volume_density_derivative(rho_base)?;
    Ok(0.5 * m_dd * rho_base * rho_base * u.mean_square())
}

/// Builds the volume-corrected cosine family: the Euclidean radial graph
/// `rho(theta) = rho_base (1 + eps cos(k theta) + a0)` with the uniform
/// shift `a0` solved by Newton so that the enclosed invariant volume equals
/// that of the ball of radius `rho_base` exactly. Returns the graph and the
/// shift `a0` (which is `-(1 + 5q + 4q^2)/(4(1+q)) eps^2 + O(eps^4)` with
/// `q = rho_base^2/(1-rho_base^2)`).
pub fn build_volume_corrected_graph(
    rho_base: f64,
    k: u32,
    eps: f64,
    n_rays: usize,
) -> Result<(RadialGraphLevelSet, f64)> {
    if !(rho_base > 0.0 && rho_base < 1.0) {
        return Err(Error::Domain(format!(
            "base radius rho_base={rho_base} must lie in (0,1)"
        )));
    }
    if k < 2 {
        return Err(Error::InvalidArgument(format!(
            "cosine family needs harmonic k >= 2, got {k}"
        )));
    }
    if !(eps >= 0.0) || rho_base * (1.0 + eps) >= 1.0 {
        return Err(Error::Domain(format!(
            "amplitude eps={eps} must be nonnegative and keep the graph in the disk"
        )));
    }
    let target = ball_volume_euclid(rho_base, 1)?;
    let thetas: Vec<f64> = (0..n_rays)
        .map(|j| 2.0 * std::f64::consts::PI * j as f64 / n_rays as f64)
        .collect();
    let radius = |a0: f64| -> Vec<f64> {
        thetas
            .iter()
            .map(|&th| rho_base * (1.0 + eps * (k as f64 * th).cos() + a0))
            .collect()
    };

    let mut a0 = 0.0;
    for _ in 0..50 {
        let rho = radius(a0);
        let mut value = 0.0;
        let mut slope = 0.0;
        for &r in &rho {
            value += ball_volume_euclid(r, 1)?;
            slope += radial_volume_density(r)? * rho_base;
        }
        value = value / n_rays as f64 - target;
        slope /= n_rays as f64;
        if value.abs() <= 1e-15 * target.max(1.0) {
            break;
        }
        a0 -= value / slope;
    }
    let graph = RadialGraphLevelSet::from_euclid_graph(&radius(a0))?;
    Ok((graph, a0))
}

/// Quantitative isoperimetric report for a centered, nearly round set.
#[derive(Debug, Clone, Copy)]
pub struct DeficitReport {
    /// Invariant volume of the set.
    pub volume: f64,
    /// Bergman radius of the volume-matched centered ball.
    pub matched_radius: f64,
    /// Euclidean radius of the volume-matched centered ball.
    pub matched_euclid_radius: f64,
    /// Invariant perimeter of the set.
    pub perimeter: f64,
    /// Invariant perimeter of the matched ball.
    pub ball_perimeter: f64,
    /// Relative isoperimetric deficit `(P(E) - P(B)) / P(B)`.
    pub deficit: f64,
    /// Squared Sobolev norm of the radial deviation from the matched ball.
    pub w12_sq: f64,
    /// Stability ratio `deficit / w12_sq`.
    pub ratio: f64,
    /// Barycenter modulus found by the centering gate.
    pub barycenter_norm: f64,
    /// Uniform C1 size of the deviation.
    pub w1_inf: f64,
}

/// Measures the isoperimetric deficit of a radial-graph set against the
/// volume-matched centered ball, together with the Sobolev size of its
/// radial deviation `u = rho/rho_matched - 1`.
///
/// Preconditions: the set's hyperbolic barycenter must lie within 1e-6 of
/// the origin, and the deviation's `W^{1,inf}` size must not exceed
/// `eps0`; both failures report the set as outside the stability regime.
pub fn fuglede_deficit(graph: &RadialGraphLevelSet, eps0: f64) -> Result<DeficitReport> {
    if !(eps0 > 0.0) {
        return Err(Error::Domain(format!(
            "regime size eps0={eps0} must be positive"
        )));
    }
    let bar = hyperbolic_barycenter(graph)?;
    let barycenter_norm = bar.point.norm();
    if barycenter_norm > CENTER_GATE {
        return Err(Error::OutsideFugledeRegime(format!(
            "barycenter modulus {barycenter_norm:.3e} exceeds the centering gate {CENTER_GATE:.0e}"
        )));
    }
    let matched_radius = volume_matched_radius(graph)?;
    let rho_m = euclid_of_bergman(matched_radius);
    let u = SphereFunction::from_samples(
        graph.rho.iter().map(|&rho| rho / rho_m - 1.0).collect(),
    )?;
    let w1_inf = u.w1_inf()?;
    if w1_inf > eps0 {
        return Err(Error::OutsideFugledeRegime(format!(
            "deviation size {w1_inf:.3e} exceeds the regime bound eps0={eps0:.3e}"
        )));
    }
    let perimeter = graph.perimeter_invariant();
    let ball_perimeter = ball_perimeter_euclid(rho_m, 1)?;
    let deficit = (perimeter - ball_perimeter) / ball_perimeter;
    let w12_sq = u.w12_sq();
    Ok(DeficitReport {
        volume: graph.volume,
        matched_radius,
        matched_euclid_radius: rho_m,
        perimeter,
        ball_perimeter,
        deficit,
        w12_sq,
        ratio: deficit / w12_sq,
        barycenter_norm,
        w1_inf,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;
    use std::f64::consts::PI;

    fn harmonic_samples(n: usize, amp: f64, k: f64) -> Vec<f64> {
        (0..n)
            .map(|j| amp * (k * 2.0 * PI * j as f64 / n as f64).cos())
            .collect()
    }

    #[test]
    fn sobolev_norms_of_pure_harmonic() {
        let u = SphereFunction::from_samples(harmonic_samples(128, 0.1, 2.0)).unwrap();
        assert!(u.mean().abs() < 1e-15);
        // (1 + k^2) * amp^2 / 2 = 5 * 0.01 / 2.
        assert_relative_eq!(u.w12_sq(), 0.025, max_relative = 1e-12);
        // max|u| + max|u'| = 0.1 + 0.2.
        assert_relative_eq!(u.w1_inf().unwrap(), 0.3, max_relative = 1e-10);
        // Parseval: total Fourier energy equals the grid mean square.
        let fourier: f64 = (0..u.len()).map(|k| u.harmonic_energy(k)).sum::<f64>()
            - u.harmonic_energy(0);
        let energy = u.oscillation_energy();
        assert_relative_eq!(energy, u.mean_square(), max_relative = 1e-12);
        assert!(fourier >= energy);
    }

    #[test]
    fn second_variation_matches_volume_expansion() {
        // rho(theta) = rho0 (1 + eps cos k theta): the volume excess minus Q
        // is fourth order in eps.
        let rho0 = 0.5;
        let n = 256;
        for &(eps, bound) in &[(0.02, 3.0e-7), (0.01, 2.0e-8), (0.005, 1.2e-9)] {
            let u = SphereFunction::from_samples(harmonic_samples(n, eps, 2.0)).unwrap();
            let q = second_variation_q(&u, rho0).unwrap();
            let rho: Vec<f64> = u.samples().iter().map(|&s| rho0 * (1.0 + s)).collect();
            let graph = RadialGraphLevelSet::from_euclid_graph(&rho).unwrap();
            let excess = graph.volume - ball_volume_euclid(rho0, 1).unwrap();
            assert!(
                (excess - q).abs() <= bound,
                "remainder {:.3e} above {bound:.1e} at eps={eps}",
                (excess - q).abs()
            );
        }
    }

    #[test]
    fn second_variation_gates() {
        let n = 128;
        let mut shifted = harmonic_samples(n, 0.02, 2.0);
        for s in &mut shifted {
            *s += 0.01;
        }
        let u = SphereFunction::from_samples(shifted).unwrap();
        assert!(matches!(
            second_variation_q(&u, 0.5),
            Err(Error::MeanMismatch(_))
        ));
        let first = SphereFunction::from_samples(harmonic_samples(n, 0.02, 1.0)).unwrap();
        assert!(matches!(
            second_variation_q(&first, 0.5),
            Err(Error::OutsideFugledeRegime(_))
        ));
    }

    #[test]
    fn volume_corrected_family_shift() {
        let (graph, a0) = build_volume_corrected_graph(0.5, 2, 0.02, 256).unwrap();
        // Volume matches the base ball to full precision.
        assert_relative_eq!(
            graph.volume,
            ball_volume_euclid(0.5, 1).unwrap(),
            max_relative = 1e-14
        );
        // a0 = -(1+5q+4q^2)/(4(1+q)) eps^2 + O(eps^4) with q = 1/3.
        assert_relative_eq!(a0, -0.58333333 * 4e-4, max_relative = 1e-3);
        // Same shift for k = 3: the correction only sees mean(cos^2).
        let (_, a0_k3) = build_volume_corrected_graph(0.5, 3, 0.02, 256).unwrap();
        assert_relative_eq!(a0, a0_k3, max_relative = 1e-6);
    }

    #[test]
    fn deficit_of_cosine_family() {
        // deficit/eps^2 -> (k^2-1)/4 and deficit/w12 -> (k^2-1)/(2(k^2+1)).
        for &(k, deficit_c, ratio_c) in &[(2u32, 0.75, 0.3), (3, 2.0, 0.4)] {
            let eps = 0.01;
            let (graph, _) = build_volume_corrected_graph(0.5, k, eps, 256).unwrap();
            let report = fuglede_deficit(&graph, 0.1).unwrap();
            assert_relative_eq!(report.deficit / (eps * eps), deficit_c, max_relative = 1e-2);
            assert_relative_eq!(report.ratio, ratio_c, max_relative = 1e-2);
            assert!(report.deficit > 0.0);
            assert_relative_eq!(report.matched_euclid_radius, 0.5, max_relative = 1e-12);
        }
    }

    #[test]
    fn deficit_of_ball_vanishes() {
        let rho = vec![0.5; 128];
        let graph = RadialGraphLevelSet::from_euclid_graph(&rho).unwrap();
        let report = fuglede_deficit(&graph, 0.1).unwrap();
        assert!(report.deficit.abs() < 1e-12);
        assert!(report.w12_sq < 1e-24);
    }

    #[test]
    fn deficit_gates() {
        // A first-harmonic (nearly translated) set fails the centering gate.
        let n = 128;
        let rho: Vec<f64> = (0..n)
            .map(|j| 0.5 * (1.0 + 0.05 * (2.0 * PI * j as f64 / n as f64).cos()))
            .collect();
        let graph = RadialGraphLevelSet::from_euclid_graph(&rho).unwrap();
        assert!(matches!(
            fuglede_deficit(&graph, 0.1),
            Err(Error::OutsideFugledeRegime(_))
        ));
        // A large-amplitude family fails the W^{1,inf} gate.
        let (big, _) = build_volume_corrected_graph(0.5, 2, 0.02, 128).unwrap();
        assert!(matches!(
            fuglede_deficit(&big, 1e-3),
            Err(Error::OutsideFugledeRegime(_))
        ));
    }
}
