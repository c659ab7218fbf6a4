//! The upper half-plane H, the action of G on it through Ψ⁻¹, the power
//! functions `χ_w(x + iy) = y^w`, their K-averages `φ_w`, and a
//! finite-difference hyperbolic Laplacian `Δ = −y²(∂²ₓ + ∂²ᵧ)`.
//!
//! The spherical function `φ_w` satisfies `Δφ_w = w(1 − w)φ_w`. Under the
//! reparameterization `w = (1 + s)/2` the eigenvalue reads `(1 − s²)/4`.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{domain, Result};
use crate::groups::{psi_inv, rotation, LorentzMatrix, SL2Matrix};
use crate::numeric::{circle_nodes, CompensatedSum};

/// Smallest admissible imaginary part.
pub const MIN_HEIGHT: f64 = 1e-12;

/// Default node count for the K-average.
pub const DEFAULT_PHI_NODES: usize = 512;
/// Default finite-difference step for the Laplacian.
pub const DEFAULT_STEP: f64 = 1e-3;

/// A point `x + iy` of the upper half-plane.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct HPoint {
    pub x: f64,
    pub y: f64,
}

impl HPoint {
    pub fn new(x: f64, y: f64) -> Result<Self> {
        if !(x.is_finite() && y.is_finite()) {
            return domain("point coordinates must be finite");
        }
        if y <= MIN_HEIGHT {
            return domain(format!("imaginary part {y} is not positive"));
        }
        Ok(Self { x, y })
    }

    pub fn i() -> Self {
        Self { x: 0.0, y: 1.0 }
    }

    pub fn as_complex(&self) -> Complex64 {
        Complex64::new(self.x, self.y)
    }

    pub fn distance(&self, other: &Self) -> f64 {
        (self.as_complex() - other.as_complex()).norm()
    }
}

/// The exponent `w` in `y^w`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Exponent(pub Complex64);

impl Exponent {
    pub fn new(w: Complex64) -> Result<Self> {
        if !w.is_finite() {
            return domain("exponent must be finite");
        }
        Ok(Self(w))
    }

    pub fn real(w: f64) -> Self {
        Self(Complex64::new(w, 0.0))
    }

    /// `w = (1 + s)/2`.
    pub fn from_spectral(s: Complex64) -> Self {
        Self((s + 1.0) * 0.5)
    }

    /// `w(1 − w)`.
    pub fn laplace_eigenvalue(&self) -> Complex64 {
        self.0 * (Complex64::new(1.0, 0.0) - self.0)
    }

    pub fn reflected(&self) -> Self {
        Self(Complex64::new(1.0, 0.0) - self.0)
    }
}

pub(crate) fn mobius(g: &SL2Matrix, z: Complex64) -> Complex64 {
    (z * g.a + g.b) / (z * g.c + g.d)
}

/// `g·z` for the Möbius action of `Ψ⁻¹(g)`.
pub fn act(g: &LorentzMatrix, z: &HPoint) -> HPoint {
    let w = mobius(&psi_inv(g).representative(), z.as_complex());
    debug_assert!(w.im > 0.0);
    HPoint { x: w.re, y: w.im }
}

/// `χ_w(z) = y^w`.
pub fn chi(w: &Exponent, z: &HPoint) -> Complex64 {
    (w.0 * z.y.ln()).exp()
}

/// `φ_w(z) = ∫_K χ_w(k·z) dk` by the periodic trapezoid rule in θ.
///
/// `k_θ` acts on H through `rot(θ/2)`, so
/// `Im(k_θ·z) = y / |z sin(θ/2) + cos(θ/2)|²`.
pub fn phi(w: &Exponent, z: &HPoint, nodes: usize) -> Complex64 {
    assert!(nodes >= 16, "at least 16 nodes required, got {nodes}");
    let zc = z.as_complex();
    let mut acc = CompensatedSum::new();
    for theta in circle_nodes(nodes) {
        let (s, c) = (0.5 * theta).sin_cos();
        // rot(φ)·z = (c z − s)/(s z + c)  ⇒  Im = y / |s z + c|²
        let den = (zc * s + c).norm_sqr();
        let y = z.y / den;
        acc.add((w.0 * y.ln()).exp());
    }
    acc.value() / nodes as f64
}

/// Five-point stencil for `Δf(z)` with step `h`, one level of Richardson
/// extrapolation (steps `h` and `h/2`).
pub fn laplacian_fd<F>(f: F, z: &HPoint, h: f64) -> Result<Complex64>
where
    F: Fn(&HPoint) -> Complex64,
{
    if !(h > 0.0 && h < z.y / 4.0) {
        return domain(format!(
            "step {h} must be positive and below y/4 = {}",
            z.y / 4.0
        ));
    }
    let stencil = |h: f64| {
        let at = |dx: f64, dy: f64| f(&HPoint { x: z.x + dx, y: z.y + dy });
        let center = at(0.0, 0.0);
        let sum = at(h, 0.0) + at(-h, 0.0) + at(0.0, h) + at(0.0, -h) - center * 4.0;
        -sum * (z.y * z.y) / (h * h)
    };
    Ok((stencil(0.5 * h) * 4.0 - stencil(h)) / 3.0)
}

/// Both sides of `Δφ_w = w(1 − w)φ_w` at a point.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct EigenCheck {
    pub lhs: Complex64,
    pub rhs: Complex64,
    pub eigenvalue: Complex64,
    pub rel_err: f64,
}

pub fn eigencheck(w: &Exponent, z: &HPoint, h: f64, nodes: usize) -> Result<EigenCheck> {
    let lhs = laplacian_fd(|p| phi(w, p, nodes), z, h)?;
    let value = phi(w, z, nodes);
    let eigenvalue = w.laplace_eigenvalue();
    let rhs = eigenvalue * value;
    Ok(EigenCheck {
        lhs,
        rhs,
        eigenvalue,
        rel_err: (lhs - rhs).norm() / value.norm(),
    })
}

/// The same check indexed by the spectral parameter, `w = (1 + s)/2`,
/// with eigenvalue `(1 − s²)/4`.
pub fn eigencheck_spectral(s: Complex64, z: &HPoint, h: f64, nodes: usize) -> Result<EigenCheck> {
    let w = Exponent::from_spectral(s);
    let mut check = eigencheck(&w, z, h, nodes)?;
    let eigenvalue = (Complex64::new(1.0, 0.0) - s * s) / 4.0;
    let value = phi(&w, z, nodes);
    check.eigenvalue = eigenvalue;
    check.rhs = eigenvalue * value;
    check.rel_err = (check.lhs - check.rhs).norm() / value.norm();
    Ok(check)
}

/// One sample of `φ_w` along a geodesic ray from `i`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct RaySample {
    pub t: f64,
    pub value: Complex64,
}

/// `φ_w(k_α a_t · i)` for `t` on a uniform grid in `[0, t_max]`. Since φ is
/// K-invariant the direction α only changes the sampled points.
pub fn phi_along_ray(
    w: &Exponent,
    alpha: f64,
    t_max: f64,
    steps: usize,
    nodes: usize,
) -> Vec<RaySample> {
    let k = rotation(alpha);
    (0..=steps)
        .map(|j| {
            let t = t_max * j as f64 / steps.max(1) as f64;
            let z = act(&(k * crate::groups::boost(t)), &HPoint::i());
            RaySample {
                t,
                value: phi(w, &z, nodes),
            }
        })
        .collect()
}

pub fn ray_csv(samples: &[RaySample]) -> String {
    let mut out = String::from("t,re,im\n");
    for s in samples {
        out.push_str(&format!("{},{:.17e},{:.17e}\n", s.t, s.value.re, s.value.im));
    }
    out
}

/// Hyperbolic distance between two points of H.
pub fn hyperbolic_distance(z: &HPoint, w: &HPoint) -> f64 {
    let d2 = (z.as_complex() - w.as_complex()).norm_sqr();
    (1.0 + d2 / (2.0 * z.y * w.y)).acosh()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::groups::{make_a, make_k, make_n};

    fn pt(x: f64, y: f64) -> HPoint {
        HPoint::new(x, y).unwrap()
    }

    #[test]
    fn rotations_fix_i() {
        for theta in [0.0, 0.5, 2.0, 4.0, 6.0] {
            let z = act(&make_k(theta).unwrap(), &HPoint::i());
            assert!(z.distance(&HPoint::i()) < 1e-15);
        }
    }

    #[test]
    fn boosts_and_translations() {
        let z = act(&make_a(4f64.ln()).unwrap(), &HPoint::i());
        assert!(z.distance(&pt(0.0, 4.0)) < 1e-14);
        let z = act(&make_n(1.5).unwrap(), &pt(0.3, 2.0));
        assert!(z.distance(&pt(1.8, 2.0)) < 1e-14);
    }

    #[test]
    fn chi_values() {
        let w = Exponent::new(Complex64::new(0.5, 1.0)).unwrap();
        assert!((chi(&w, &HPoint::i()) - 1.0).norm() < 1e-15);
        assert!((chi(&Exponent::real(2.0), &pt(7.0, 2.0)) - 4.0).norm() < 1e-14);
        let e = pt(0.0, std::f64::consts::E);
        assert!((chi(&w, &e) - w.0.exp()).norm() < 1e-14);
    }

    #[test]
    fn phi_at_i_is_one() {
        for w in [0.3, 2.0, -1.0] {
            assert!((phi(&Exponent::real(w), &HPoint::i(), 64) - 1.0).norm() < 1e-14);
        }
    }

    #[test]
    fn phi_is_k_invariant() {
        let w = Exponent(Complex64::new(0.5, 3.0));
        let z = pt(1.0, 2.0);
        let base = phi(&w, &z, 512);
        for theta in [0.3, 1.7, 4.4] {
            let moved = act(&make_k(theta).unwrap(), &z);
            assert!((phi(&w, &moved, 512) - base).norm() < 1e-10);
        }
    }

    #[test]
    fn phi_functional_equation() {
        let z = pt(0.0, 2.0);
        for w in [Complex64::new(0.3, 0.0), Complex64::new(0.5, 2.0)] {
            let a = phi(&Exponent(w), &z, 1024);
            let b = phi(&Exponent(w).reflected(), &z, 1024);
            assert!((a - b).norm() < 1e-9, "{w}: {a} vs {b}");
        }
    }

    #[test]
    fn laplacian_of_power_and_constant() {
        let chi2 = |z: &HPoint| chi(&Exponent::real(2.0), z);
        let v = laplacian_fd(chi2, &HPoint::i(), 1e-3).unwrap();
        assert!((v - (-2.0)).norm() < 1e-6, "{v}");
        let c = laplacian_fd(|_| Complex64::new(3.0, -1.0), &pt(0.5, 1.5), 1e-3).unwrap();
        assert!(c.norm() < 1e-9);
        assert!(laplacian_fd(chi2, &pt(0.0, 0.001), 1e-3).is_err());
    }

    #[test]
    fn spherical_function_eigenvalue() {
        let w = Exponent(Complex64::new(0.5, 3.0));
        let c = eigencheck(&w, &pt(1.0, 2.0), 1e-3, 1024).unwrap();
        assert!(c.rel_err < 1e-5, "{c:?}");
    }

    #[test]
    fn eigencheck_spectral_parameterization() {
        let z = pt(0.5, 1.5);
        let c = eigencheck_spectral(Complex64::new(0.0, 1.0), &z, 1e-3, 1024).unwrap();
        assert!((c.eigenvalue - 0.5).norm() < 1e-15);
        assert!(c.rel_err < 1e-5, "{c:?}");
        let c = eigencheck(&Exponent::real(0.5), &z, 1e-3, 1024).unwrap();
        assert!((c.eigenvalue - 0.25).norm() < 1e-15);
        assert!(c.rel_err < 1e-5, "{c:?}");
        let c = eigencheck(&Exponent::real(1.0), &z, 1e-3, 1024).unwrap();
        assert!(c.rhs.norm() == 0.0);
        assert!(c.rel_err < 1e-6, "{c:?}");
    }

    #[test]
    fn ray_csv_has_header_and_rows() {
        let samples = phi_along_ray(&Exponent::real(0.5), 0.0, 1.0, 4, 64);
        let csv = ray_csv(&samples);
        assert_eq!(csv.lines().count(), 6);
        assert!(csv.starts_with("t,re,im\n0,1.0"));
    }

    #[test]
    fn distance_along_boost() {
        let z = act(&make_a(1.3).unwrap(), &HPoint::i());
        assert!((hyperbolic_distance(&HPoint::i(), &z) - 1.3).abs() < 1e-12);
    }
}
