//! The group G = SO(2,1)° in the time-last convention `J = diag(1, 1, -1)`,
//! its subgroups A, N, K, the covering map Ψ from SL(2,ℝ), and the Iwasawa
//! (ANK) and Cartan (KAK) coordinates.

use std::f64::consts::{PI, TAU};
use std::fmt;
use std::ops::Mul;

use nalgebra::{Matrix2, Matrix3};
use serde::{Deserialize, Serialize};

use crate::error::{domain, Error, Result};

/// Entrywise bound on `gᵀJg − J` for acceptance into G.
pub const FORM_TOL: f64 = 1e-10;
/// Bound on `|det g − 1|`.
pub const DET_TOL: f64 = 1e-10;
/// Slack on the identity-component condition `g₃₃ ≥ 1`.
pub const COMPONENT_TOL: f64 = 1e-12;
/// Bound on `|ad − bc − 1|` for SL(2,ℝ) inputs.
pub const SL2_DET_TOL: f64 = 1e-10;

fn form() -> Matrix3<f64> {
    Matrix3::from_diagonal(&nalgebra::Vector3::new(1.0, 1.0, -1.0))
}

/// Result of testing a 3×3 matrix for membership in SO(2,1)°.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Membership {
    pub form_defect: f64,
    pub det_defect: f64,
    pub component_ok: bool,
}

impl Membership {
    pub fn accepted(&self) -> bool {
        self.form_defect < FORM_TOL && self.det_defect < DET_TOL && self.component_ok
    }
}

/// Diagnose whether `m` lies in SO(2,1)°. Never fails; non-finite entries
/// simply produce non-finite (rejected) defects.
pub fn so21_check(m: &Matrix3<f64>) -> Membership {
    let j = form();
    let defect = m.transpose() * j * m - j;
    let form_defect = defect.iter().fold(0.0_f64, |acc, x| {
        if x.is_nan() {
            f64::NAN
        } else {
            acc.max(x.abs())
        }
    });
    let form_defect = if m.iter().all(|x| x.is_finite()) {
        form_defect
    } else {
        f64::INFINITY
    };
    Membership {
        form_defect,
        det_defect: (m.determinant() - 1.0).abs(),
        component_ok: m[(2, 2)] >= 1.0 - COMPONENT_TOL,
    }
}

/// An element of SO(2,1)°. Construction through [`LorentzMatrix::new`]
/// validates membership; products of members are members.
#[derive(Clone, Copy, PartialEq)]
pub struct LorentzMatrix(Matrix3<f64>);

impl LorentzMatrix {
    pub fn new(m: Matrix3<f64>) -> Result<Self> {
        let report = so21_check(&m);
        if report.accepted() {
            Ok(Self(m))
        } else {
            domain(format!(
                "matrix is not in SO(2,1)°: form defect {:e}, det defect {:e}, component ok {}",
                report.form_defect, report.det_defect, report.component_ok
            ))
        }
    }

    pub fn from_row_slice(rows: &[f64]) -> Result<Self> {
        if rows.len() != 9 {
            return domain(format!("expected 9 entries, got {}", rows.len()));
        }
        Self::new(Matrix3::from_row_slice(rows))
    }

    /// Wrap without checking. Callers guarantee membership (closed-form
    /// constructors, products of members).
    pub(crate) fn from_raw(m: Matrix3<f64>) -> Self {
        Self(m)
    }

    pub fn identity() -> Self {
        Self(Matrix3::identity())
    }

    pub fn matrix(&self) -> &Matrix3<f64> {
        &self.0
    }

    pub fn to_row_array(&self) -> [f64; 9] {
        let m = &self.0;
        [
            m[(0, 0)],
            m[(0, 1)],
            m[(0, 2)],
            m[(1, 0)],
            m[(1, 1)],
            m[(1, 2)],
            m[(2, 0)],
            m[(2, 1)],
            m[(2, 2)],
        ]
    }

    /// `g⁻¹ = J gᵀ J`.
    pub fn inverse(&self) -> Self {
        let j = form();
        Self(j * self.0.transpose() * j)
    }

    /// Max-norm distance between the underlying matrices.
    pub fn distance(&self, other: &Self) -> f64 {
        (self.0 - other.0).amax()
    }

    pub fn membership(&self) -> Membership {
        so21_check(&self.0)
    }
}

impl fmt::Debug for LorentzMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "LorentzMatrix({:?})", self.to_row_array())
    }
}

impl Mul for LorentzMatrix {
    type Output = LorentzMatrix;
    fn mul(self, rhs: Self) -> Self {
        Self(self.0 * rhs.0)
    }
}

impl<'a> Mul<&'a LorentzMatrix> for &'a LorentzMatrix {
    type Output = LorentzMatrix;
    fn mul(self, rhs: &LorentzMatrix) -> LorentzMatrix {
        LorentzMatrix(self.0 * rhs.0)
    }
}

impl Serialize for LorentzMatrix {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.to_row_array().serialize(s)
    }
}

impl<'de> Deserialize<'de> for LorentzMatrix {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let rows = <[f64; 9]>::deserialize(d)?;
        Self::from_row_slice(&rows).map_err(serde::de::Error::custom)
    }
}

fn check_finite(x: f64, what: &str) -> Result<()> {
    if x.is_finite() {
        Ok(())
    } else {
        domain(format!("{what} must be finite, got {x}"))
    }
}

pub(crate) fn boost(t: f64) -> LorentzMatrix {
    let (c, s) = (t.cosh(), t.sinh());
    LorentzMatrix(Matrix3::new(c, 0.0, s, 0.0, 1.0, 0.0, s, 0.0, c))
}

pub(crate) fn unipotent(u: f64) -> LorentzMatrix {
    let h = 0.5 * u * u;
    LorentzMatrix(Matrix3::new(
        1.0 - h,
        u,
        h,
        -u,
        1.0,
        u,
        -h,
        u,
        1.0 + h,
    ))
}

pub(crate) fn rotation(theta: f64) -> LorentzMatrix {
    let theta = theta.rem_euclid(TAU);
    let (s, c) = theta.sin_cos();
    LorentzMatrix(Matrix3::new(c, -s, 0.0, s, c, 0.0, 0.0, 0.0, 1.0))
}

/// `a_t`, the boost in the (1,3)-plane.
pub fn make_a(t: f64) -> Result<LorentzMatrix> {
    check_finite(t, "t")?;
    Ok(boost(t))
}

/// `n_u`, the unipotent element.
pub fn make_n(u: f64) -> Result<LorentzMatrix> {
    check_finite(u, "u")?;
    Ok(unipotent(u))
}

/// `k_θ`, rotation in the (1,2)-plane; depends only on θ mod 2π.
pub fn make_k(theta: f64) -> Result<LorentzMatrix> {
    check_finite(theta, "theta")?;
    Ok(rotation(theta))
}

/// An element `[a b; c d]` of SL(2,ℝ).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SL2Matrix {
    pub a: f64,
    pub b: f64,
    pub c: f64,
    pub d: f64,
}

impl SL2Matrix {
    pub fn new(a: f64, b: f64, c: f64, d: f64) -> Result<Self> {
        let m = Self { a, b, c, d };
        if ![a, b, c, d].iter().all(|x| x.is_finite()) {
            return domain("SL(2) entries must be finite");
        }
        let det_defect = (m.det() - 1.0).abs();
        if det_defect > SL2_DET_TOL {
            return domain(format!("det defect {det_defect:e} exceeds {SL2_DET_TOL:e}"));
        }
        Ok(m)
    }

    pub(crate) fn from_raw(a: f64, b: f64, c: f64, d: f64) -> Self {
        Self { a, b, c, d }
    }

    pub fn identity() -> Self {
        Self::from_raw(1.0, 0.0, 0.0, 1.0)
    }

    pub fn det(&self) -> f64 {
        self.a * self.d - self.b * self.c
    }

    pub fn neg(&self) -> Self {
        Self::from_raw(-self.a, -self.b, -self.c, -self.d)
    }

    pub fn to_matrix(&self) -> Matrix2<f64> {
        Matrix2::new(self.a, self.b, self.c, self.d)
    }

    pub fn to_row_array(&self) -> [f64; 4] {
        [self.a, self.b, self.c, self.d]
    }

    pub fn diagonal(t: f64) -> Self {
        Self::from_raw(t.exp(), 0.0, 0.0, (-t).exp())
    }

    pub fn upper(u: f64) -> Self {
        Self::from_raw(1.0, u, 0.0, 1.0)
    }

    pub fn rotation(phi: f64) -> Self {
        let (s, c) = phi.sin_cos();
        Self::from_raw(c, -s, s, c)
    }

    pub fn max_distance(&self, other: &Self) -> f64 {
        self.to_row_array()
            .iter()
            .zip(other.to_row_array())
            .fold(0.0, |acc, (x, y)| f64::max(acc, (x - y).abs()))
    }
}

impl Mul for SL2Matrix {
    type Output = SL2Matrix;
    fn mul(self, r: Self) -> Self {
        Self::from_raw(
            self.a * r.a + self.b * r.c,
            self.a * r.b + self.b * r.d,
            self.c * r.a + self.d * r.c,
            self.c * r.b + self.d * r.d,
        )
    }
}

/// An element of PSL(2,ℝ) = SL(2,ℝ)/{±I}, stored as the representative whose
/// first entry (in a, b, c, d order) of modulus above 1e-12 is positive.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PSL2Element(SL2Matrix);

impl PSL2Element {
    pub fn canonical(g: SL2Matrix) -> Self {
        let lead = g
            .to_row_array()
            .into_iter()
            .find(|x| x.abs() > 1e-12)
            .unwrap_or(1.0);
        if lead < 0.0 {
            Self(g.neg())
        } else {
            Self(g)
        }
    }

    pub fn representative(&self) -> SL2Matrix {
        self.0
    }
}

/// The covering homomorphism Ψ : SL(2,ℝ) → SO(2,1)° with kernel {±I}.
pub fn psi(g: &SL2Matrix) -> Result<LorentzMatrix> {
    let g = SL2Matrix::new(g.a, g.b, g.c, g.d)?;
    Ok(psi_raw(&g))
}

pub(crate) fn psi_raw(g: &SL2Matrix) -> LorentzMatrix {
    let SL2Matrix { a, b, c, d } = *g;
    let (a2, b2, c2, d2) = (a * a, b * b, c * c, d * d);
    LorentzMatrix(Matrix3::new(
        0.5 * (a2 - b2 - c2 + d2),
        a * b - c * d,
        0.5 * (a2 + b2 - c2 - d2),
        a * c - b * d,
        a * d + b * c,
        a * c + b * d,
        0.5 * (a2 - b2 + c2 - d2),
        a * b + c * d,
        0.5 * (a2 + b2 + c2 + d2),
    ))
}

/// Inverse of Ψ on G. The Iwasawa factors are mapped back individually:
/// `a_t ↦ diag(e^{t/2}, e^{-t/2})`, `n_u ↦ [1 u; 0 1]`, `k_θ ↦ rot(θ/2)`.
pub fn psi_inv(g: &LorentzMatrix) -> PSL2Element {
    let c = iwasawa(g);
    PSL2Element::canonical(sl2_from_iwasawa(&c))
}

pub(crate) fn sl2_from_iwasawa(c: &IwasawaCoords) -> SL2Matrix {
    SL2Matrix::diagonal(0.5 * c.t) * SL2Matrix::upper(c.u) * SL2Matrix::rotation(0.5 * c.theta)
}

/// Coordinates of `g = a_t · n_u · k_θ`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct IwasawaCoords {
    pub t: f64,
    pub u: f64,
    pub theta: f64,
}

impl IwasawaCoords {
    pub fn new(t: f64, u: f64, theta: f64) -> Self {
        Self { t, u, theta }
    }

    pub fn to_matrix(&self) -> LorentzMatrix {
        boost(self.t) * unipotent(self.u) * rotation(self.theta)
    }
}

/// Iwasawa coordinates of `g`.
///
/// K fixes `e₃`, so `g e₃ = a_t n_u e₃`; its second entry is `u` and the
/// difference of the third and first entries is `e^{-t}`. The rotation is
/// read off the residual `(a_t n_u)⁻¹ g`.
pub fn iwasawa(g: &LorentzMatrix) -> IwasawaCoords {
    let m = g.matrix();
    let lightlike = m[(2, 2)] - m[(0, 2)];
    assert!(
        lightlike > 0.0,
        "g₃₃ − g₁₃ must be positive for an element of SO(2,1)°"
    );
    let t = -lightlike.ln();
    let u = m[(1, 2)];
    let k = unipotent(-u) * boost(-t) * *g;
    let km = k.matrix();
    let theta = wrap_angle(km[(1, 0)].atan2(km[(0, 0)]));
    IwasawaCoords { t, u, theta }
}

/// Reduce an angle into `[0, 2π)`.
pub fn wrap_angle(theta: f64) -> f64 {
    let w = theta.rem_euclid(TAU);
    if w >= TAU {
        0.0
    } else {
        w
    }
}

/// Coordinates of `g = k_{θ₁} · a_t · k_{θ₂}` with `t ≥ 0`.
///
/// For `t > 0` the triple is unique with both angles in `[0, 2π)`.
/// For `t = 0` the element is a rotation and is stored as `(0, 0, θ)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CartanCoords {
    pub theta1: f64,
    pub t: f64,
    pub theta2: f64,
}

impl CartanCoords {
    pub fn to_matrix(&self) -> LorentzMatrix {
        rotation(self.theta1) * boost(self.t) * rotation(self.theta2)
    }

    /// `θ₁ + θ₂ mod 2π`, the angle that the bi-equivariant phase depends on.
    pub fn angle_sum(&self) -> f64 {
        wrap_angle(self.theta1 + self.theta2)
    }
}

/// Radius below which an element is treated as a pure rotation in [`cartan`].
const CARTAN_DEGENERATE: f64 = 1e-14;

pub fn cartan(g: &LorentzMatrix) -> CartanCoords {
    let m = g.matrix();
    let (x, y) = (m[(0, 2)], m[(1, 2)]);
    let sinh_t = x.hypot(y);
    let t = sinh_t.asinh();
    if sinh_t < CARTAN_DEGENERATE {
        let theta = wrap_angle(m[(1, 0)].atan2(m[(0, 0)]));
        return CartanCoords {
            theta1: 0.0,
            t: 0.0,
            theta2: theta,
        };
    }
    // g e₃ = k_{θ₁} a_t e₃ = (cos θ₁ sinh t, sin θ₁ sinh t, cosh t)
    let theta1 = wrap_angle(y.atan2(x));
    let k2 = boost(-t) * rotation(-theta1) * *g;
    let km = k2.matrix();
    let theta2 = wrap_angle(km[(1, 0)].atan2(km[(0, 0)]));
    CartanCoords { theta1, t, theta2 }
}

/// The K×K-orbit invariant `t` of the Cartan decomposition, computed as
/// `asinh |(g₁₃, g₂₃)|` (better conditioned than `acosh g₃₃` near K).
pub fn cartan_radius(g: &LorentzMatrix) -> f64 {
    let m = g.matrix();
    m[(0, 2)].hypot(m[(1, 2)]).asinh()
}

/// Density of Haar measure with respect to `dt du dθ/2π` in the ANK
/// coordinates `g = a_t n_u k_θ`.
///
/// The left Haar measure of AN in the parameterization `a_t n_u` is `dt du`
/// (left translation by `n_v` shifts `u` by `e^{-t} v`, left translation by
/// `a_s` shifts `t`), so the density is identically one. This agrees with
/// the pullback of `dx dy / y²` under `g ↦ g·i = e^t u + i e^t`. The
/// translation-invariance tests in `character` certify the value.
pub fn haar_density(_c: &IwasawaCoords) -> f64 {
    1.0
}

/// `2π` times `sinh t`: the radial density of Haar measure in Cartan
/// coordinates, i.e. `∫_G F = 2π ∫₀^∞ F(a_t) sinh t dt` for bi-K-invariant F.
pub fn cartan_radial_density(t: f64) -> f64 {
    2.0 * PI * t.sinh()
}

impl TryFrom<&[f64]> for LorentzMatrix {
    type Error = Error;
    fn try_from(rows: &[f64]) -> Result<Self> {
        Self::from_row_slice(rows)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rows(g: &LorentzMatrix) -> [f64; 9] {
        g.to_row_array()
    }

    #[test]
    fn constructors_match_closed_forms() {
        assert_eq!(make_a(0.0).unwrap(), LorentzMatrix::identity());
        let n1 = rows(&make_n(1.0).unwrap());
        assert_eq!(n1, [0.5, 1.0, 0.5, -1.0, 1.0, 1.0, -0.5, 1.0, 1.5]);
        let kpi = make_k(PI).unwrap();
        let want = [-1.0, 0.0, 0.0, 0.0, -1.0, 0.0, 0.0, 0.0, 1.0];
        for (x, y) in rows(&kpi).iter().zip(want) {
            assert!((x - y).abs() < 1e-15);
        }
        assert!(make_k(0.3).unwrap().distance(&make_k(0.3 + 4.0 * PI).unwrap()) < 1e-14);
    }

    #[test]
    fn non_finite_parameters_are_rejected() {
        assert!(matches!(make_a(f64::NAN), Err(Error::Domain(_))));
        assert!(make_n(f64::INFINITY).is_err());
        assert!(make_k(f64::NEG_INFINITY).is_err());
    }

    #[test]
    fn membership_diagnostic() {
        let id = so21_check(&Matrix3::identity());
        assert!(id.accepted());
        assert_eq!(id.form_defect, 0.0);
        assert_eq!(id.det_defect, 0.0);

        let flip = Matrix3::from_diagonal(&nalgebra::Vector3::new(1.0, 1.0, -1.0));
        let r = so21_check(&flip);
        assert!(!r.accepted());
        assert!((r.det_defect - 2.0).abs() < 1e-15);
        assert!(!r.component_ok);

        let g = make_a(2.0).unwrap() * make_k(1.0).unwrap();
        assert!(so21_check(g.matrix()).accepted());

        let nan = Matrix3::from_element(f64::NAN);
        assert!(!so21_check(&nan).accepted());
        assert!(LorentzMatrix::new(nan).is_err());
    }

    #[test]
    fn psi_special_elements() {
        assert!(psi(&SL2Matrix::identity()).unwrap().distance(&LorentzMatrix::identity()) == 0.0);
        let n = psi(&SL2Matrix::upper(1.0)).unwrap();
        assert!(n.distance(&make_n(1.0).unwrap()) < 1e-15);
        let a = psi(&SL2Matrix::diagonal(1.0)).unwrap();
        assert!(a.distance(&make_a(2.0).unwrap()) < 1e-14);
        let g = SL2Matrix::new(2.0, 1.0, 3.0, 2.0).unwrap();
        assert_eq!(psi(&g).unwrap(), psi(&g.neg()).unwrap());
        assert!(psi(&SL2Matrix::from_raw(1.0, 1.0, 1.0, 1.0)).is_err());
    }

    #[test]
    fn psi_inv_special_elements() {
        let id = psi_inv(&LorentzMatrix::identity()).representative();
        assert_eq!(id, SL2Matrix::identity());

        // k_π = Ψ(rot(π/2)); rot(π/2) = [0 -1; 1 0] canonicalizes to [0 1; -1 0]
        let r = psi_inv(&make_k(PI).unwrap()).representative();
        let want = SL2Matrix::from_raw(0.0, 1.0, -1.0, 0.0);
        assert!(r.max_distance(&want) < 1e-15, "{r:?}");
    }

    #[test]
    fn psl2_canonicalization() {
        let g = SL2Matrix::from_raw(-2.0, 1.0, -1.0, 0.0);
        assert_eq!(PSL2Element::canonical(g).representative(), g.neg());
        let h = SL2Matrix::from_raw(1e-13, -1.0, 1.0, 0.0);
        // tiny first entry is skipped; b decides
        assert_eq!(PSL2Element::canonical(h).representative().b, 1.0);
    }

    #[test]
    fn iwasawa_examples() {
        let c = iwasawa(&LorentzMatrix::identity());
        assert_eq!((c.t, c.u, c.theta), (0.0, 0.0, 0.0));

        let g = make_a(1.0).unwrap() * make_n(2.0).unwrap() * make_k(0.7).unwrap();
        let c = iwasawa(&g);
        assert!((c.t - 1.0).abs() < 1e-12);
        assert!((c.u - 2.0).abs() < 1e-12);
        assert!((c.theta - 0.7).abs() < 1e-12);

        let c = iwasawa(&make_k(PI).unwrap());
        assert!(c.t.abs() < 1e-15 && c.u.abs() < 1e-15);
        assert!((c.theta - PI).abs() < 1e-15);
    }

    #[test]
    fn cartan_examples() {
        for theta in [0.0, 0.4, 2.0, 5.9] {
            assert!(cartan_radius(&make_k(theta).unwrap()) < 1e-15);
            let c = cartan(&make_k(theta).unwrap());
            assert!(c.to_matrix().distance(&make_k(theta).unwrap()) < 1e-14);
        }
        let g = make_a(-3.0).unwrap();
        assert!((cartan_radius(&g) - 3.0).abs() < 1e-14);
        // conjugation identity behind the example
        let conj = make_k(PI).unwrap() * make_a(3.0).unwrap() * make_k(PI).unwrap().inverse();
        assert!(conj.distance(&g) < 1e-13);
        let c = cartan(&g);
        assert!(c.to_matrix().distance(&g) < 1e-12);
        assert!((c.theta1 - PI).abs() < 1e-14);
    }

    #[test]
    fn cartan_angles_are_unique_for_positive_radius() {
        let g = make_k(5.0).unwrap() * make_a(0.8).unwrap() * make_k(4.0).unwrap();
        let c = cartan(&g);
        assert!((c.theta1 - 5.0).abs() < 1e-12);
        assert!((c.theta2 - 4.0).abs() < 1e-12);
        assert!((c.t - 0.8).abs() < 1e-12);
    }

    #[test]
    fn haar_density_at_origin() {
        assert_eq!(haar_density(&IwasawaCoords::new(0.0, 1.0, 2.0)), 1.0);
    }

    #[test]
    fn inverse_is_group_inverse() {
        let g = IwasawaCoords::new(0.7, -1.3, 2.2).to_matrix();
        assert!((g * g.inverse()).distance(&LorentzMatrix::identity()) < 1e-13);
    }
}
