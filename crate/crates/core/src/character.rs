//! Haar quadrature on G in the coordinates `g = a_t n_u k_θ`, the operator
//! `π(f) = ∫ f(g) ρ(g) dg` for the induced models, and numerical checks of
//! the character identity for bi-equivariant test functions.

use std::f64::consts::PI;
use std::sync::Arc;

use nalgebra::DMatrix;
use num_complex::Complex64;
use rayon::prelude::*;
use serde::Serialize;

use crate::equivariant::{EquivariantFn, GFn};
use crate::error::{domain, Result};
use crate::groups::{boost, rotation, unipotent, IwasawaCoords, LorentzMatrix};
use crate::numeric::{circle_nodes, gauss_legendre, trapezoid_rule, CompensatedSum};
use crate::reps::{check_nodes, k_types, FourierTable, InducedRep, KTypes, RepMatrix, SpectralParam};

/// Boundary values above this are reported as a support violation.
pub const BOUNDARY_TOL: f64 = 1e-12;

/// Weight attached to a grid node besides the quadrature weights.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Density {
    /// Haar measure `dt du dθ/2π`.
    Haar,
    /// `e^t dt du dθ/2π`. Not invariant; kept as a control.
    ExpT,
}

impl Density {
    fn at(self, t: f64) -> f64 {
        match self {
            Density::Haar => 1.0,
            Density::ExpT => t.exp(),
        }
    }
}

/// Tensor-product trapezoid grid on a box in `(t, u)` times the circle.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct HaarGrid {
    pub t_range: (f64, f64),
    pub nt: usize,
    pub u_range: (f64, f64),
    pub nu: usize,
    pub ntheta: usize,
    pub density: Density,
}

impl Default for HaarGrid {
    fn default() -> Self {
        Self::with_nodes(48, 48, 96)
    }
}

impl HaarGrid {
    /// Default box `t ∈ [−3, 3]`, `u ∈ [−4, 4]`.
    pub fn with_nodes(nt: usize, nu: usize, ntheta: usize) -> Self {
        Self {
            t_range: (-3.0, 3.0),
            nt,
            u_range: (-4.0, 4.0),
            nu,
            ntheta,
            density: Density::Haar,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.nt < 2 || self.nu < 2 || self.ntheta < 1 {
            return domain(format!(
                "grid needs at least 2×2×1 nodes, got {}×{}×{}",
                self.nt, self.nu, self.ntheta
            ));
        }
        for (a, b) in [self.t_range, self.u_range] {
            if !(a.is_finite() && b.is_finite() && a < b) {
                return domain(format!("invalid grid interval [{a}, {b}]"));
            }
        }
        Ok(())
    }

    /// Twice the node counts in every direction.
    pub fn refined(&self) -> Self {
        Self {
            nt: 2 * self.nt,
            nu: 2 * self.nu,
            ntheta: 2 * self.ntheta,
            ..*self
        }
    }

    pub fn with_density(self, density: Density) -> Self {
        Self { density, ..self }
    }

    fn t_rule(&self) -> (Vec<f64>, Vec<f64>) {
        trapezoid_rule(self.t_range.0, self.t_range.1, self.nt)
    }

    fn u_rule(&self) -> (Vec<f64>, Vec<f64>) {
        trapezoid_rule(self.u_range.0, self.u_range.1, self.nu)
    }

    /// Sum of all node weights (the integral of 1 over the box).
    pub fn total_weight(&self) -> f64 {
        let (ts, wt) = self.t_rule();
        let (_, wu) = self.u_rule();
        let su: f64 = wu.iter().sum();
        ts.iter()
            .zip(&wt)
            .map(|(&t, &w)| w * self.density.at(t))
            .sum::<f64>()
            * su
    }
}

/// Value of a grid integral together with the largest `|f|` seen on the
/// faces `t = const` and `u = const` of the box.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct GridIntegral {
    pub value: Complex64,
    pub boundary_max: f64,
}

fn warn_boundary(boundary_max: f64) {
    if boundary_max > BOUNDARY_TOL {
        log::warn!("integrand reaches the grid boundary: max |f| = {boundary_max:e}");
    }
}

/// `∫_G f(g) dg` on the grid.
pub fn integrate_g(f: &(dyn Fn(&LorentzMatrix) -> Complex64 + Sync), grid: &HaarGrid) -> Result<GridIntegral> {
    grid.validate()?;
    let (ts, wt) = grid.t_rule();
    let (us, wu) = grid.u_rule();
    let ks: Vec<LorentzMatrix> = circle_nodes(grid.ntheta).into_iter().map(rotation).collect();
    let last_t = ts.len() - 1;
    let last_u = us.len() - 1;
    let rows: Vec<(Complex64, f64)> = (0..ts.len())
        .into_par_iter()
        .map(|i| {
            let a = boost(ts[i]);
            let mut acc = CompensatedSum::new();
            let mut edge = 0.0_f64;
            for (j, (&u, &w)) in us.iter().zip(&wu).enumerate() {
                let an = a * unipotent(u);
                let mut inner = CompensatedSum::new();
                for k in &ks {
                    let v = f(&(an * *k));
                    if i == 0 || i == last_t || j == 0 || j == last_u {
                        edge = edge.max(v.norm());
                    }
                    inner.add(v);
                }
                acc.add(inner.value() * w);
            }
            (acc.value() * (wt[i] * grid.density.at(ts[i])), edge)
        })
        .collect();
    let mut total = CompensatedSum::new();
    let mut boundary_max = 0.0_f64;
    for (v, e) in rows {
        total.add(v);
        boundary_max = boundary_max.max(e);
    }
    warn_boundary(boundary_max);
    Ok(GridIntegral {
        value: total.value() / grid.ntheta as f64,
        boundary_max,
    })
}

/// Which side a translation acts on.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Side {
    Left,
    Right,
}

/// Result of [`haar_invariance`].
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct HaarReport {
    pub base: Complex64,
    pub translated: Complex64,
    pub defect: f64,
}

/// Relative change of `∫ f` under `f ↦ f(g₀ ·)` or `f ↦ f(· g₀)`.
pub fn haar_invariance(f: &GFn, g0: &LorentzMatrix, side: Side, grid: &HaarGrid) -> Result<HaarReport> {
    let base = integrate_g(f.as_ref(), grid)?.value;
    let g0 = *g0;
    let moved: Box<dyn Fn(&LorentzMatrix) -> Complex64 + Sync> = match side {
        Side::Left => Box::new(|g: &LorentzMatrix| f(&(g0 * *g))),
        Side::Right => Box::new(|g: &LorentzMatrix| f(&(*g * g0))),
    };
    let translated = integrate_g(moved.as_ref(), grid)?.value;
    Ok(HaarReport {
        base,
        translated,
        defect: (translated - base).norm() / base.norm().max(f64::MIN_POSITIVE),
    })
}

/// `exp(−1/(1 − r²))` with `r = ‖g − c‖_F / radius`, a smooth bump on a
/// Frobenius ball.
pub fn frobenius_bump(center: LorentzMatrix, radius: f64) -> GFn {
    Arc::new(move |g| {
        let r = (g.matrix() - center.matrix()).norm() / radius;
        if r >= 1.0 {
            Complex64::new(0.0, 0.0)
        } else {
            Complex64::new((-1.0 / (1.0 - r * r)).exp(), 0.0)
        }
    })
}

/// Lifts a function of Iwasawa coordinates to G.
pub fn from_iwasawa(f: impl Fn(&IwasawaCoords) -> Complex64 + Send + Sync + 'static) -> GFn {
    Arc::new(move |g| f(&crate::groups::iwasawa(g)))
}

/// Settings for [`pi_of_f`].
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CharConfig {
    pub grid: HaarGrid,
    /// Fourier truncation `N`.
    pub trunc: usize,
    /// Circle nodes used to build each `ρ(a_t n_u)`.
    pub rep_nodes: usize,
    /// Gauss–Legendre nodes for the radial integral.
    pub radial_nodes: usize,
    /// Circle nodes for the matrix coefficient in the radial integral.
    pub phi_nodes: usize,
}

impl CharConfig {
    pub fn new(grid: HaarGrid, trunc: usize) -> Self {
        Self {
            grid,
            trunc,
            rep_nodes: 4 * trunc + 4,
            radial_nodes: 64,
            phi_nodes: 256,
        }
    }

    pub fn refined(&self) -> Self {
        Self {
            grid: self.grid.refined(),
            ..*self
        }
    }
}

impl Default for CharConfig {
    fn default() -> Self {
        Self::new(HaarGrid::default(), 16)
    }
}

/// Truncated matrix of `π(f)` on `(e_k)_{|k| ≤ N}`.
#[derive(Debug, Clone, PartialEq)]
pub struct OperatorMatrix {
    pub s: Complex64,
    pub n: i64,
    pub trunc: usize,
    pub grid: HaarGrid,
    pub boundary_max: f64,
    data: DMatrix<Complex64>,
}

impl OperatorMatrix {
    pub fn matrix(&self) -> &DMatrix<Complex64> {
        &self.data
    }

    fn index(&self, k: i64) -> usize {
        (k + self.trunc as i64) as usize
    }

    pub fn entry(&self, k: i64, j: i64) -> Complex64 {
        self.data[(self.index(k), self.index(j))]
    }

    pub fn frobenius(&self) -> f64 {
        self.data.norm()
    }

    /// Frobenius norm of everything outside row `row`, relative to the
    /// full Frobenius norm.
    pub fn off_row_fraction(&self, row: i64) -> f64 {
        let total = self.data.norm_squared();
        if total == 0.0 {
            return 0.0;
        }
        let on: f64 = self.data.row(self.index(row)).iter().map(|z| z.norm_sqr()).sum();
        ((total - on).max(0.0) / total).sqrt()
    }

    fn indices(&self) -> impl Iterator<Item = i64> {
        let n = self.trunc as i64;
        -n..=n
    }

    /// Trace of the block on the K-types in `types`.
    pub fn restricted_trace(&self, types: &KTypes) -> Complex64 {
        let mut acc = CompensatedSum::new();
        for k in self.indices().filter(|&k| types.contains(k)) {
            acc.add(self.entry(k, k));
        }
        acc.value()
    }

    /// Frobenius norm of the block on the K-types in `types`.
    pub fn restricted_norm(&self, types: &KTypes) -> f64 {
        let idx: Vec<i64> = self.indices().filter(|&k| types.contains(k)).collect();
        idx.iter()
            .flat_map(|&r| idx.iter().map(move |&c| (r, c)))
            .map(|(r, c)| self.entry(r, c).norm_sqr())
            .sum::<f64>()
            .sqrt()
    }

    pub fn trace(&self) -> Complex64 {
        self.restricted_trace(&KTypes::All)
    }
}

/// `π(f) = ∫ f(g) ρ(g) dg` for the induced model `rep`.
///
/// With `g = a_t n_u k_θ`, `ρ(g) = ρ(a_t n_u) ρ(k_θ)` and `ρ(k_θ)` is
/// diagonal, so each `(t, u)` node contributes `ρ(a_t n_u)·diag(d)` with
/// `d_m = ∫ f(a_t n_u k_θ) e^{imθ} dθ/2π`.
pub fn pi_of_f(rep: &InducedRep, f: &EquivariantFn, cfg: &CharConfig) -> Result<OperatorMatrix> {
    let grid = &cfg.grid;
    grid.validate()?;
    let trunc = cfg.trunc;
    let table = FourierTable::new(trunc, cfg.rep_nodes);
    check_nodes(cfg.rep_nodes, trunc)?;
    let theta_table = FourierTable::new(trunc, grid.ntheta);
    let ks: Vec<LorentzMatrix> = circle_nodes(grid.ntheta).into_iter().map(rotation).collect();
    let (ts, wt) = grid.t_rule();
    let (us, wu) = grid.u_rule();
    let width = 2 * trunc + 1;
    let (last_t, last_u) = (ts.len() - 1, us.len() - 1);
    let rows: Vec<(DMatrix<Complex64>, f64)> = (0..ts.len())
        .into_par_iter()
        .map(|i| {
            let a = boost(ts[i]);
            let mut acc = DMatrix::<Complex64>::zeros(width, width);
            let mut edge = 0.0_f64;
            for (j, (&u, &w)) in us.iter().zip(&wu).enumerate() {
                let an = a * unipotent(u);
                let samples: Vec<Complex64> = ks.iter().map(|k| f.eval(&(an * *k))).collect();
                let peak = samples.iter().map(|z| z.norm()).fold(0.0, f64::max);
                if i == 0 || i == last_t || j == 0 || j == last_u {
                    edge = edge.max(peak);
                }
                if peak == 0.0 {
                    continue;
                }
                let d: Vec<Complex64> = (0..width)
                    .map(|col| {
                        let mut s = CompensatedSum::new();
                        for (r, v) in samples.iter().enumerate() {
                            s.add(v * theta_table.entry(r, col));
                        }
                        s.value() / grid.ntheta as f64
                    })
                    .collect();
                let rho = RepMatrix::with_table(rep, &an, &table).into_matrix();
                let scale = w * wt[i] * grid.density.at(ts[i]);
                for (col, dc) in d.iter().enumerate() {
                    let c = dc * scale;
                    for row in 0..width {
                        acc[(row, col)] += rho[(row, col)] * c;
                    }
                }
            }
            (acc, edge)
        })
        .collect();
    let mut data = DMatrix::<Complex64>::zeros(width, width);
    let mut boundary_max = 0.0_f64;
    for (m, e) in rows {
        data += m;
        boundary_max = boundary_max.max(e);
    }
    warn_boundary(boundary_max);
    Ok(OperatorMatrix {
        s: rep.s,
        n: f.n_left,
        trunc,
        grid: *grid,
        boundary_max,
        data,
    })
}

/// Outcome of a character check.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CharReport {
    pub lhs_trace: Complex64,
    pub rhs_integral: Complex64,
    pub abs_err: f64,
    /// `|lhs − rhs| / |rhs|`, or relative to `‖f‖₁` when `rhs = 0`.
    pub rel_err: f64,
    /// `‖f‖₁` by the radial integral.
    pub f_l1: f64,
    pub off_row_fraction: f64,
    pub boundary_max: f64,
}

/// `2π ∫ h(a_r) sinh r dr` over `support`, by Gauss–Legendre.
fn radial_integral(h: impl Fn(f64) -> Complex64, support: (f64, f64), nodes: usize) -> Complex64 {
    let (rs, ws) = gauss_legendre(support.0, support.1, nodes);
    let mut acc = CompensatedSum::new();
    for (&r, &w) in rs.iter().zip(&ws) {
        acc.add(h(r) * (w * 2.0 * PI * r.sinh()));
    }
    acc.value()
}

/// Compares the trace of `π(f)` on the K-types of `p` with
/// `∫ f(g) ⟨π(g)e_{−n}, e_{−n}⟩ dg` for `f` of type `(n, n)`.
///
/// The trace is the full truncated trace. The right side uses the radial
/// form of the Haar integral (the integrand is bi-K-invariant), so it
/// shares no quadrature with the left side.
pub fn char_identity_check(p: &SpectralParam, n: i64, f: &EquivariantFn, cfg: &CharConfig) -> Result<CharReport> {
    if f.n_left != n || f.n_right != n {
        return domain(format!(
            "test function has type ({}, {}), expected ({n}, {n})",
            f.n_left, f.n_right
        ));
    }
    let Some(support) = f.support else {
        return domain("test function needs a declared radial support");
    };
    if n.unsigned_abs() as usize > cfg.trunc {
        return domain(format!("truncation {} does not contain mode {}", cfg.trunc, -n));
    }
    let types = k_types(p);
    let rep = InducedRep::of(p);
    let op = pi_of_f(&rep, f, cfg)?;
    let lhs = op.restricted_trace(&types);
    let rhs = if types.contains(-n) {
        radial_integral(
            |r| {
                let g = boost(r);
                f.eval(&g) * rep.matcoef(&g, -n, -n, cfg.phi_nodes)
            },
            support,
            cfg.radial_nodes,
        )
    } else {
        Complex64::new(0.0, 0.0)
    };
    let f_l1 = radial_integral(|r| Complex64::new(f.eval(&boost(r)).norm(), 0.0), support, cfg.radial_nodes).re;
    let abs_err = (lhs - rhs).norm();
    let scale = if rhs.norm() > 0.0 { rhs.norm() } else { f_l1 };
    let rel_err = if abs_err == 0.0 { 0.0 } else { abs_err / scale };
    Ok(CharReport {
        lhs_trace: lhs,
        rhs_integral: rhs,
        abs_err,
        rel_err,
        f_l1,
        off_row_fraction: op.off_row_fraction(-n),
        boundary_max: op.boundary_max,
    })
}

/// For τ_n-spherical `p` and `f` of type `(−n, −n)`: trace of `π(f)`
/// against `∫ f(g) ⟨π(g)e_n, e_n⟩ dg`.
pub fn corollary_check(p: &SpectralParam, n: i64, f: &EquivariantFn, cfg: &CharConfig) -> Result<CharReport> {
    if !k_types(p).contains(n) {
        return domain(format!("{p} is not τ_{n}-spherical"));
    }
    char_identity_check(p, -n, f, cfg)
}

/// Character check followed by the same check on the refined grid.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct RefinementReport {
    pub base: CharReport,
    pub refined: CharReport,
}

impl RefinementReport {
    pub fn improves(&self) -> bool {
        self.refined.rel_err <= self.base.rel_err
    }
}

pub fn char_refinement(p: &SpectralParam, n: i64, f: &EquivariantFn, cfg: &CharConfig) -> Result<RefinementReport> {
    Ok(RefinementReport {
        base: char_identity_check(p, n, f, cfg)?,
        refined: char_identity_check(p, n, f, &cfg.refined())?,
    })
}
