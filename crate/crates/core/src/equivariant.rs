//! Functions on G with prescribed behaviour under left and right
//! translation by K, the projectors onto such functions, an explicit
//! separating function for K×K double cosets, and a Gram-matrix test of
//! linear independence for matrix coefficients.

use std::f64::consts::PI;
use std::fmt;
use std::sync::Arc;

use nalgebra::DMatrix;
use num_complex::Complex64;
use serde::Serialize;

use crate::error::{domain, Error, Result};
use crate::groups::{boost, cartan, rotation, LorentzMatrix};
use crate::numeric::{circle_nodes, gauss_legendre, CompensatedSum};
use crate::reps::{k_types, InducedRep, SpectralParam};

/// A complex-valued function on G.
pub type GFn = Arc<dyn Fn(&LorentzMatrix) -> Complex64 + Send + Sync>;

/// `τ_n(k_θ) = e^{inθ}`.
pub fn tau(n: i64, theta: f64) -> Complex64 {
    Complex64::cis(n as f64 * theta)
}

/// A function with `f(k_{θ₁} g k_{θ₂}) = e^{i(n_left θ₁ + n_right θ₂)} f(g)`.
#[derive(Clone)]
pub struct EquivariantFn {
    pub n_left: i64,
    pub n_right: i64,
    /// Cartan-radius interval containing the support, when known.
    pub support: Option<(f64, f64)>,
    eval: GFn,
}

impl fmt::Debug for EquivariantFn {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("EquivariantFn")
            .field("n_left", &self.n_left)
            .field("n_right", &self.n_right)
            .field("support", &self.support)
            .finish_non_exhaustive()
    }
}

impl EquivariantFn {
    pub fn new(n_left: i64, n_right: i64, support: Option<(f64, f64)>, eval: GFn) -> Self {
        Self {
            n_left,
            n_right,
            support,
            eval,
        }
    }

    pub fn eval(&self, g: &LorentzMatrix) -> Complex64 {
        (self.eval)(g)
    }

    pub fn as_gfn(&self) -> GFn {
        Arc::clone(&self.eval)
    }

    /// Largest violation of the declared phase law over the probe triples
    /// `(θ₁, g, θ₂)`.
    pub fn equivariance_defect(&self, probes: &[(f64, LorentzMatrix, f64)]) -> f64 {
        probes
            .iter()
            .map(|(a, g, b)| {
                let moved = self.eval(&(rotation(*a) * *g * rotation(*b)));
                let want = self.eval(g) * tau(self.n_left, *a) * tau(self.n_right, *b);
                (moved - want).norm()
            })
            .fold(0.0, f64::max)
    }

    /// `α·self + β·other`; both must carry the same K-types.
    pub fn combine(&self, alpha: Complex64, other: &Self, beta: Complex64) -> Result<Self> {
        if (self.n_left, self.n_right) != (other.n_left, other.n_right) {
            return domain("cannot combine functions of different K-types");
        }
        let support = match (self.support, other.support) {
            (Some(a), Some(b)) => Some((a.0.min(b.0), a.1.max(b.1))),
            _ => None,
        };
        let (f, g) = (self.as_gfn(), other.as_gfn());
        Ok(Self::new(
            self.n_left,
            self.n_right,
            support,
            Arc::new(move |x| f(x) * alpha + g(x) * beta),
        ))
    }

    /// `f*(g) = conj f(g⁻¹)`, for which `π(f*) = π(f)†` in unitary π.
    pub fn star(&self) -> Self {
        let f = self.as_gfn();
        Self::new(
            self.n_right,
            self.n_left,
            self.support,
            Arc::new(move |g| f(&g.inverse()).conj()),
        )
    }
}

/// Smooth compactly supported profile `exp(−1/(1 − x²))`, `x = (t − t₀)/δ`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct BumpProfile {
    pub center: f64,
    pub width: f64,
}

impl BumpProfile {
    pub fn new(center: f64, width: f64) -> Result<Self> {
        if !(center.is_finite() && center >= 0.0) {
            return domain(format!("bump center must be ≥ 0, got {center}"));
        }
        if !(width.is_finite() && width > 0.0) {
            return domain(format!("bump width must be > 0, got {width}"));
        }
        Ok(Self { center, width })
    }

    pub fn value(&self, t: f64) -> f64 {
        let x = (t - self.center) / self.width;
        if x.abs() >= 1.0 {
            0.0
        } else {
            (-1.0 / (1.0 - x * x)).exp()
        }
    }

    pub fn peak(&self) -> f64 {
        self.value(self.center)
    }

    pub fn support(&self) -> (f64, f64) {
        ((self.center - self.width).max(0.0), self.center + self.width)
    }
}

/// `F(g) = ∫∫ e^{−in(θ₁+θ₂)} f(k_{θ₁} g k_{θ₂}) dθ₁/2π dθ₂/2π` by the
/// tensor-product trapezoid rule.
pub fn project_biequivariant(f: GFn, n: i64, nodes: usize) -> EquivariantFn {
    let thetas = circle_nodes(nodes);
    let rots: Arc<Vec<(LorentzMatrix, Complex64)>> = Arc::new(
        thetas
            .iter()
            .map(|&th| (rotation(th), tau(-n, th)))
            .collect(),
    );
    let norm = (nodes * nodes) as f64;
    EquivariantFn::new(
        n,
        n,
        None,
        Arc::new(move |g| {
            let mut acc = CompensatedSum::new();
            for (k1, c1) in rots.iter() {
                let left = *k1 * *g;
                for (k2, c2) in rots.iter() {
                    acc.add(f(&(left * *k2)) * (c1 * c2));
                }
            }
            acc.value() / norm
        }),
    )
}

/// `h(x) = ∫ e^{−inθ} f(x k_θ) dθ/2π`.
pub fn right_isotype_project(f: GFn, n: i64, nodes: usize) -> GFn {
    let rots: Vec<(LorentzMatrix, Complex64)> = circle_nodes(nodes)
        .into_iter()
        .map(|th| (rotation(th), tau(-n, th)))
        .collect();
    Arc::new(move |x| {
        let mut acc = CompensatedSum::new();
        for (k, c) in &rots {
            acc.add(f(&(*x * *k)) * c);
        }
        acc.value() / rots.len() as f64
    })
}

/// `F(g) = b(t) e^{in(θ₁+θ₂)}` for `g = k_{θ₁} a_t k_{θ₂}`. Supported on the
/// double cosets with Cartan radius in the bump's support, positive on the
/// double coset through `a_{t₀}`.
pub fn separation_witness(n: i64, profile: BumpProfile) -> EquivariantFn {
    EquivariantFn::new(
        n,
        n,
        Some(profile.support()),
        Arc::new(move |g| {
            let c = cartan(g);
            let b = profile.value(c.t);
            if b == 0.0 {
                Complex64::new(0.0, 0.0)
            } else {
                tau(n, c.angle_sum()) * b
            }
        }),
    )
}

/// `|F(x) − F(y)|`, the quantitative separation of two double cosets.
pub fn separation_margin(f: &EquivariantFn, x: &LorentzMatrix, y: &LorentzMatrix) -> f64 {
    (f.eval(x) - f.eval(y)).norm()
}

/// Result of [`gram_min_eig`].
#[derive(Debug, Clone, Serialize)]
pub struct GramReport {
    pub min_eig: f64,
    pub max_eig: f64,
    pub condition: f64,
    /// Row-major `(re, im)` entries.
    pub matrix: Vec<Vec<(f64, f64)>>,
    pub quad_nodes: usize,
}

/// Quadrature settings for [`gram_min_eig`].
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct GramQuadrature {
    /// Gauss–Legendre nodes in the Cartan radius.
    pub radial: usize,
    /// Trapezoid nodes for each matrix coefficient.
    pub angular: usize,
    /// Relative change between `radial` and `2·radial` treated as converged.
    pub tolerance: f64,
}

impl Default for GramQuadrature {
    fn default() -> Self {
        Self {
            radial: 48,
            angular: 256,
            tolerance: 1e-8,
        }
    }
}

fn gram_matrix(
    params: &[SpectralParam],
    n: i64,
    region: (f64, f64),
    radial: usize,
    angular: usize,
) -> DMatrix<Complex64> {
    let (nodes, weights) = gauss_legendre(region.0, region.1, radial);
    let reps: Vec<InducedRep> = params.iter().map(InducedRep::of).collect();
    let samples: Vec<Vec<Complex64>> = nodes
        .iter()
        .map(|&t| {
            let g = boost(t);
            reps.iter().map(|r| r.matcoef(&g, n, n, angular)).collect()
        })
        .collect();
    let r = params.len();
    DMatrix::from_fn(r, r, |j, k| {
        let mut acc = CompensatedSum::new();
        for ((&t, &w), vals) in nodes.iter().zip(&weights).zip(&samples) {
            acc.add(vals[j] * vals[k].conj() * (w * 2.0 * PI * t.sinh()));
        }
        acc.value()
    })
}

/// Smallest eigenvalue of `G_{jk} = ∫ φ_j conj(φ_k) dg` over the set of
/// elements with Cartan radius in `region`, `φ_j = ⟨π_j(g)e_n, e_n⟩`.
///
/// `φ_j conj(φ_k)` is bi-K-invariant, so the integral reduces to
/// `2π ∫ φ_j(a_t) conj(φ_k(a_t)) sinh t dt`. The radial rule is run at two
/// resolutions; disagreement beyond the tolerance is a numeric error.
pub fn gram_min_eig(
    params: &[SpectralParam],
    n: i64,
    region: (f64, f64),
    quad: GramQuadrature,
) -> Result<GramReport> {
    if params.is_empty() {
        return domain("at least one representation is required");
    }
    if !(region.0 >= 0.0 && region.1 > region.0 && region.1.is_finite()) {
        return domain(format!("invalid radius interval {region:?}"));
    }
    for p in params {
        if !k_types(p).contains(n) {
            return domain(format!("{p} is not τ_{n}-spherical"));
        }
    }
    let coarse = gram_matrix(params, n, region, quad.radial, quad.angular);
    let fine = gram_matrix(params, n, region, 2 * quad.radial, quad.angular);
    let scale = fine.iter().map(|z| z.norm()).fold(0.0, f64::max).max(f64::MIN_POSITIVE);
    let change = (&fine - &coarse).iter().map(|z| z.norm()).fold(0.0, f64::max) / scale;
    if change > quad.tolerance {
        return Err(Error::Numeric(format!(
            "Gram quadrature not converged: relative change {change:e} between {} and {} radial nodes",
            quad.radial,
            2 * quad.radial
        )));
    }
    // symmetrize away rounding before the Hermitian eigen-solve
    let herm = (&fine + fine.adjoint()) * Complex64::new(0.5, 0.0);
    let eig = herm.clone().symmetric_eigen();
    let min_eig = eig.eigenvalues.iter().cloned().fold(f64::INFINITY, f64::min);
    let max_eig = eig.eigenvalues.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    let matrix = (0..herm.nrows())
        .map(|j| (0..herm.ncols()).map(|k| (herm[(j, k)].re, herm[(j, k)].im)).collect())
        .collect();
    Ok(GramReport {
        min_eig,
        max_eig,
        condition: if min_eig > 0.0 { max_eig / min_eig } else { f64::INFINITY },
        matrix,
        quad_nodes: 2 * quad.radial,
    })
}
