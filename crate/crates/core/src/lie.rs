//! The Lie algebra 𝔰𝔬(2,1) in the time-last convention.
//!
//! Basis: `V1 = e₂₃ + e₃₂`, `V2 = e₁₃ + e₃₁`, `W = e₂₁ − e₁₂`. With this
//! choice `exp(θW) = k_θ`, `exp(tV2) = a_t` and `exp(u(V1 − W)) = n_u`.
//! Brackets: `[W, V1] = −V2`, `[W, V2] = V1`, `[V1, V2] = W`.

use std::ops::{Add, Mul, Sub};

use nalgebra::{Matrix2, Matrix3};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{domain, Error, Result};
use crate::groups::LorentzMatrix;

/// Entrywise bound on `XᵀJ + JX` for algebra membership.
pub const ALGEBRA_TOL: f64 = 1e-13;

/// An element of 𝔰𝔬(2,1), i.e. a real 3×3 matrix with `XᵀJ + JX = 0`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LieElement(Matrix3<f64>);

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum BasisVector {
    V1,
    V2,
    W,
}

impl BasisVector {
    pub const ALL: [BasisVector; 3] = [BasisVector::V1, BasisVector::V2, BasisVector::W];

    pub fn element(self) -> LieElement {
        let mut m = Matrix3::zeros();
        match self {
            BasisVector::V1 => {
                m[(1, 2)] = 1.0;
                m[(2, 1)] = 1.0;
            }
            BasisVector::V2 => {
                m[(0, 2)] = 1.0;
                m[(2, 0)] = 1.0;
            }
            BasisVector::W => {
                m[(1, 0)] = 1.0;
                m[(0, 1)] = -1.0;
            }
        }
        LieElement(m)
    }

    pub fn parse(name: &str) -> Option<Self> {
        match name.to_ascii_uppercase().as_str() {
            "V1" => Some(BasisVector::V1),
            "V2" => Some(BasisVector::V2),
            "W" | "V3" => Some(BasisVector::W),
            _ => None,
        }
    }
}

fn form() -> Matrix3<f64> {
    Matrix3::from_diagonal(&nalgebra::Vector3::new(1.0, 1.0, -1.0))
}

/// Largest entry of `XᵀJ + JX`.
pub fn algebra_defect(m: &Matrix3<f64>) -> f64 {
    let j = form();
    (m.transpose() * j + j * m).amax()
}

impl LieElement {
    pub fn new(m: Matrix3<f64>) -> Result<Self> {
        if !m.iter().all(|x| x.is_finite()) {
            return domain("Lie algebra entries must be finite");
        }
        let defect = algebra_defect(&m);
        if defect > ALGEBRA_TOL * m.amax().max(1.0) {
            return domain(format!("not in so(2,1): defect {defect:e}"));
        }
        Ok(Self(m))
    }

    pub fn from_row_slice(rows: &[f64]) -> Result<Self> {
        if rows.len() != 9 {
            return domain(format!("expected 9 entries, got {}", rows.len()));
        }
        Self::new(Matrix3::from_row_slice(rows))
    }

    /// `a·V1 + b·V2 + c·W`.
    pub fn from_coords(a: f64, b: f64, c: f64) -> Self {
        BasisVector::V1.element() * a + BasisVector::V2.element() * b + BasisVector::W.element() * c
    }

    /// Coordinates in the basis (V1, V2, W).
    pub fn coords(&self) -> [f64; 3] {
        [self.0[(1, 2)], self.0[(0, 2)], self.0[(1, 0)]]
    }

    pub fn zero() -> Self {
        Self(Matrix3::zeros())
    }

    pub fn matrix(&self) -> &Matrix3<f64> {
        &self.0
    }

    pub fn to_row_array(&self) -> [f64; 9] {
        let m = &self.0;
        std::array::from_fn(|k| m[(k / 3, k % 3)])
    }

    pub fn norm_max(&self) -> f64 {
        self.0.amax()
    }

    /// `g X g⁻¹`.
    pub fn conjugate_by(&self, g: &LorentzMatrix) -> Self {
        Self(g.matrix() * self.0 * g.inverse().matrix())
    }
}

impl Add for LieElement {
    type Output = Self;
    fn add(self, r: Self) -> Self {
        Self(self.0 + r.0)
    }
}

impl Sub for LieElement {
    type Output = Self;
    fn sub(self, r: Self) -> Self {
        Self(self.0 - r.0)
    }
}

impl Mul<f64> for LieElement {
    type Output = Self;
    fn mul(self, s: f64) -> Self {
        Self(self.0 * s)
    }
}

impl Serialize for LieElement {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.to_row_array().serialize(s)
    }
}

impl<'de> Deserialize<'de> for LieElement {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let rows = <[f64; 9]>::deserialize(d)?;
        Self::from_row_slice(&rows).map_err(serde::de::Error::custom)
    }
}

/// `[X, Y] = XY − YX`.
pub fn bracket(x: &LieElement, y: &LieElement) -> LieElement {
    LieElement(x.0 * y.0 - y.0 * x.0)
}

/// Complexified algebra element, used for `E± = V1 ± iV2`.
pub type ComplexElement = Matrix3<Complex64>;

pub fn complexify(x: &LieElement) -> ComplexElement {
    x.0.map(|v| Complex64::new(v, 0.0))
}

/// `E⁺ = V1 + iV2` (sign = +1) or `E⁻ = V1 − iV2` (sign = −1).
pub fn e_pm(sign: i8) -> ComplexElement {
    let i = Complex64::new(0.0, f64::from(sign.signum()));
    complexify(&BasisVector::V1.element()) + complexify(&BasisVector::V2.element()) * i
}

/// `(‖[W, E⁺] − iE⁺‖, ‖[W, E⁻] + iE⁻‖)` in the max norm.
pub fn ad_w_eigencheck() -> (f64, f64) {
    let w = complexify(&BasisVector::W.element());
    let defect = |sign: i8| {
        let e = e_pm(sign);
        let lambda = Complex64::new(0.0, f64::from(sign));
        let r = w * e - e * w - e * lambda;
        r.iter().fold(0.0_f64, |acc, z| acc.max(z.norm()))
    };
    (defect(1), defect(-1))
}

const EXP_SERIES_ORDER: usize = 18;
const EXP_SCALING_THRESHOLD: f64 = 0.5;

/// Matrix exponential by scaling and squaring with a truncated Taylor series.
pub fn exp_real(x: &Matrix3<f64>) -> Matrix3<f64> {
    let norm = x.row_iter().map(|r| r.iter().map(|v| v.abs()).sum::<f64>()).fold(0.0, f64::max);
    let mut squarings = 0;
    let mut scale = 1.0;
    while norm * scale > EXP_SCALING_THRESHOLD {
        scale *= 0.5;
        squarings += 1;
    }
    let y = x * scale;
    let mut term = Matrix3::identity();
    let mut sum = Matrix3::identity();
    for k in 1..=EXP_SERIES_ORDER {
        term = term * y / k as f64;
        sum += term;
    }
    for _ in 0..squarings {
        sum = sum * sum;
    }
    sum
}

/// `exp(X)` as a group element.
pub fn exp_matrix(x: &LieElement) -> LorentzMatrix {
    LorentzMatrix::from_raw(exp_real(&x.0))
}

/// Differential of Ψ at the identity:
/// `[α β; γ −α] ↦ 2α·V2 + (β+γ)·V1 + (γ−β)·W`.
pub fn dpsi(x: &Matrix2<f64>) -> Result<LieElement> {
    let trace = x[(0, 0)] + x[(1, 1)];
    if !x.iter().all(|v| v.is_finite()) {
        return domain("sl(2) entries must be finite");
    }
    if trace.abs() > 1e-13 {
        return domain(format!("sl(2) element must be traceless, trace = {trace:e}"));
    }
    let alpha = 0.5 * (x[(0, 0)] - x[(1, 1)]);
    let (beta, gamma) = (x[(0, 1)], x[(1, 0)]);
    Ok(LieElement::from_coords(beta + gamma, 2.0 * alpha, gamma - beta))
}

/// Step bounds accepted by [`casimir_apply`].
pub const CASIMIR_STEP_RANGE: (f64, f64) = (1e-4, 1e-2);

/// `Ωf(g)` with `Ω = V1² + V2² − W²` acting as left-invariant differential
/// operators, each second derivative `d²/ds² f(g·exp(sX))|₀` taken by central
/// differences with step `h`.
pub fn casimir_apply<F>(f: F, g: &LorentzMatrix, h: f64) -> Result<Complex64>
where
    F: Fn(&LorentzMatrix) -> Complex64,
{
    let (lo, hi) = CASIMIR_STEP_RANGE;
    if !(lo..=hi).contains(&h) {
        return domain(format!("step {h} outside [{lo}, {hi}]"));
    }
    let center = f(g);
    let second = |x: BasisVector| -> Result<Complex64> {
        let step = x.element() * h;
        let plus = f(&(*g * exp_matrix(&step)));
        let minus = f(&(*g * exp_matrix(&(step * -1.0))));
        if !(plus.is_finite() && minus.is_finite() && center.is_finite()) {
            return Err(Error::Numeric(format!(
                "non-finite sample along {x:?} at step {h}"
            )));
        }
        Ok((plus - center * 2.0 + minus) / (h * h))
    };
    Ok(second(BasisVector::V1)? + second(BasisVector::V2)? - second(BasisVector::W)?)
}
