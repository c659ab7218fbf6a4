//! Induced representations `V(s)` in the compact picture.
//!
//! A vector of `V(s)` is determined by its restriction to K, which we store
//! as a truncated Fourier series `Σ_{|n|≤N} c_n e^{inθ}`. The basis vector
//! `e_n` extends to G as `e_n(a_t n_u k_θ) = e^{(1+s)t/2} e^{inθ}` and G acts
//! by right translation, so
//!
//! ```text
//! (ρ_s(g)v)(θ) = e^{(1+s)t/2} v(θ')   where   k_θ g = a_t n_u k_θ'.
//! ```
//!
//! The exponent `(1+s)/2` makes `ρ_s` unitary on `L²(K)` for `s ∈ iℝ`
//! (the modular function of AN is `e^t` in these coordinates). The raw
//! exponent `(1+s)` is available as [`Induction::Unnormalized`] for
//! comparison; it is not unitary.

use std::fmt;

use nalgebra::DMatrix;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{domain, Result};
use crate::groups::{iwasawa, rotation, LorentzMatrix};
use crate::numeric::{circle_nodes, CompensatedSum};

/// Number of top modes excluded from equality checks on truncated operators.
pub const GUARD_MODES: usize = 4;

/// Relative energy in the outermost modes above which a truncation warning
/// is emitted.
pub const TRUNCATION_WARN: f64 = 1e-6;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Sign {
    Plus,
    Minus,
}

impl Sign {
    pub fn factor(self) -> i64 {
        match self {
            Sign::Plus => 1,
            Sign::Minus => -1,
        }
    }

    pub fn symbol(self) -> char {
        match self {
            Sign::Plus => '+',
            Sign::Minus => '-',
        }
    }
}

/// Descriptor of a representation of G.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum SpectralParam {
    Trivial,
    /// `ρ_s` with `s = i·nu`, `nu ≥ 0`.
    Principal { nu: f64 },
    /// `ρ_s` with `s ∈ (0, 1)`.
    Complementary { s: f64 },
    /// The (possibly reducible, non-unitary) induced space `V(s)`.
    InducedPoint { s: Complex64 },
    /// `D±(m)`, modelled as a ladder subspace of `V(m − 1)`.
    Discrete { m: u32, sign: Sign },
}

impl SpectralParam {
    pub fn principal(nu: f64) -> Result<Self> {
        if !(nu.is_finite() && nu >= 0.0) {
            return domain(format!("principal series needs s = i·nu with nu ≥ 0, got nu = {nu}"));
        }
        Ok(Self::Principal { nu })
    }

    pub fn complementary(s: f64) -> Result<Self> {
        if !(s > 0.0 && s < 1.0) {
            return domain(format!("complementary series needs s in (0, 1), got {s}"));
        }
        Ok(Self::Complementary { s })
    }

    pub fn induced(s: Complex64) -> Result<Self> {
        if !s.is_finite() {
            return domain("induction parameter must be finite");
        }
        Ok(Self::InducedPoint { s })
    }

    pub fn discrete(m: u32, sign: Sign) -> Result<Self> {
        if m < 2 || !m.is_multiple_of(2) {
            return domain(format!("discrete series needs even m ≥ 2, got {m}"));
        }
        Ok(Self::Discrete { m, sign })
    }

    /// Classify a complex parameter: `s ∈ iℝ≥0` is principal, `s ∈ (0,1)`
    /// complementary, anything else an induced point.
    pub fn from_s(s: Complex64) -> Result<Self> {
        if s.re == 0.0 && s.im >= 0.0 {
            Self::principal(s.im)
        } else if s.im == 0.0 && s.re > 0.0 && s.re < 1.0 {
            Self::complementary(s.re)
        } else {
            Self::induced(s)
        }
    }

    /// The `s` of the induced space that realizes this representation.
    /// The trivial representation is the constants in `V(−1)`.
    pub fn induction_parameter(&self) -> Complex64 {
        match *self {
            Self::Trivial => Complex64::new(-1.0, 0.0),
            Self::Principal { nu } => Complex64::new(0.0, nu),
            Self::Complementary { s } => Complex64::new(s, 0.0),
            Self::InducedPoint { s } => s,
            Self::Discrete { m, .. } => Complex64::new(f64::from(m) - 1.0, 0.0),
        }
    }

    pub fn k_types(&self) -> KTypes {
        k_types(self)
    }
}

impl fmt::Display for SpectralParam {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            Self::Trivial => write!(f, "trivial"),
            Self::Principal { nu } => write!(f, "rho(s={nu}i)"),
            Self::Complementary { s } => write!(f, "rho(s={s})"),
            Self::InducedPoint { s } => write!(f, "V(s={s})"),
            Self::Discrete { m, sign } => write!(f, "D{}{m}", sign.symbol()),
        }
    }
}

/// Set of K-types `τ_n` occurring in a representation.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(tag = "set", rename_all = "snake_case")]
pub enum KTypes {
    Only { n: i64 },
    AtLeast { n: i64 },
    AtMost { n: i64 },
    All,
}

impl KTypes {
    pub fn contains(&self, n: i64) -> bool {
        match *self {
            KTypes::Only { n: k } => n == k,
            KTypes::AtLeast { n: k } => n >= k,
            KTypes::AtMost { n: k } => n <= k,
            KTypes::All => true,
        }
    }

    pub fn describe(&self) -> String {
        match *self {
            KTypes::Only { n } => format!("{{{n}}}"),
            KTypes::AtLeast { n } => format!("{{n >= {n}}}"),
            KTypes::AtMost { n } => format!("{{n <= {n}}}"),
            KTypes::All => "Z".to_string(),
        }
    }
}

/// K-types of each representation: `τ₀` for the trivial representation,
/// `n ≥ m/2` for `D⁺(m)`, `n ≤ −m/2` for `D⁻(m)`, all of ℤ for `ρ_s`.
pub fn k_types(p: &SpectralParam) -> KTypes {
    match *p {
        SpectralParam::Trivial => KTypes::Only { n: 0 },
        SpectralParam::Discrete { m, sign: Sign::Plus } => KTypes::AtLeast { n: i64::from(m / 2) },
        SpectralParam::Discrete { m, sign: Sign::Minus } => KTypes::AtMost { n: -i64::from(m / 2) },
        SpectralParam::Principal { .. }
        | SpectralParam::Complementary { .. }
        | SpectralParam::InducedPoint { .. } => KTypes::All,
    }
}

/// A family of τ_n-spherical representations.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(tag = "family", rename_all = "snake_case")]
pub enum SphericalFamily {
    Trivial,
    Discrete { m: u32, sign: Sign },
    PrincipalSeries,
    ComplementarySeries,
}

/// The unitary representations containing `τ_n`, derived from [`k_types`]:
/// the trivial representation only for `n = 0`, `D^{sign n}(m)` for
/// `m ∈ {2, 4, …, 2|n|}`, and both continuous families.
pub fn tau_spherical_set(n: i64) -> Vec<SphericalFamily> {
    let mut out = Vec::new();
    if k_types(&SpectralParam::Trivial).contains(n) {
        out.push(SphericalFamily::Trivial);
    }
    let sign = if n > 0 { Sign::Plus } else { Sign::Minus };
    for half in 1..=n.unsigned_abs() {
        let m = u32::try_from(2 * half).expect("K-type index too large");
        let p = SpectralParam::Discrete { m, sign };
        debug_assert!(k_types(&p).contains(n));
        out.push(SphericalFamily::Discrete { m, sign });
    }
    out.push(SphericalFamily::PrincipalSeries);
    out.push(SphericalFamily::ComplementarySeries);
    out
}

/// Which power of the boost coordinate the induced action uses.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Induction {
    /// Multiplier `e^{(1+s)t/2}`.
    Normalized,
    /// Multiplier `e^{(1+s)t}`.
    Unnormalized,
}

/// The induced representation `V(s)` with a chosen multiplier convention.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct InducedRep {
    pub s: Complex64,
    pub induction: Induction,
}

impl InducedRep {
    pub fn new(s: Complex64) -> Self {
        Self {
            s,
            induction: Induction::Normalized,
        }
    }

    pub fn unnormalized(s: Complex64) -> Self {
        Self {
            s,
            induction: Induction::Unnormalized,
        }
    }

    pub fn of(p: &SpectralParam) -> Self {
        Self::new(p.induction_parameter())
    }

    pub fn exponent(&self) -> Complex64 {
        let e = self.s + 1.0;
        match self.induction {
            Induction::Normalized => e * 0.5,
            Induction::Unnormalized => e,
        }
    }

    fn multiplier(&self, t: f64) -> Complex64 {
        (self.exponent() * t).exp()
    }

    /// `⟨ρ(g)e_n, e_m⟩` in `L²(K, dθ/2π)`, by the periodic trapezoid rule.
    pub fn matcoef(&self, g: &LorentzMatrix, n: i64, m: i64, nodes: usize) -> Complex64 {
        let mut acc = CompensatedSum::new();
        for theta in circle_nodes(nodes) {
            let (t, theta_out) = cocycle(theta, g);
            let phase = n as f64 * theta_out - m as f64 * theta;
            acc.add(self.multiplier(t) * Complex64::cis(phase));
        }
        acc.value() / nodes as f64
    }
}

/// Iwasawa cocycle: `k_θ·g = a_t n_u k_θ'`, returned as `(t, θ')`.
pub fn cocycle(theta: f64, g: &LorentzMatrix) -> (f64, f64) {
    let c = iwasawa(&(rotation(theta) * *g));
    (c.t, c.theta)
}

/// Truncated Fourier coefficients `(c_n)_{|n| ≤ N}` of a function on K.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct KFourierVector {
    trunc: usize,
    coeffs: Vec<Complex64>,
}

impl KFourierVector {
    pub fn zeros(trunc: usize) -> Self {
        Self {
            trunc,
            coeffs: vec![Complex64::new(0.0, 0.0); 2 * trunc + 1],
        }
    }

    pub fn basis(trunc: usize, n: i64) -> Result<Self> {
        let mut v = Self::zeros(trunc);
        if n.unsigned_abs() as usize > trunc {
            return domain(format!("basis index {n} outside truncation {trunc}"));
        }
        v.coeffs[(n + trunc as i64) as usize] = Complex64::new(1.0, 0.0);
        Ok(v)
    }

    pub fn from_fn(trunc: usize, f: impl Fn(i64) -> Complex64) -> Self {
        let coeffs = (-(trunc as i64)..=trunc as i64).map(f).collect();
        Self { trunc, coeffs }
    }

    pub fn trunc(&self) -> usize {
        self.trunc
    }

    pub fn get(&self, n: i64) -> Complex64 {
        if n.unsigned_abs() as usize > self.trunc {
            Complex64::new(0.0, 0.0)
        } else {
            self.coeffs[(n + self.trunc as i64) as usize]
        }
    }

    pub fn indices(&self) -> impl Iterator<Item = i64> {
        -(self.trunc as i64)..=self.trunc as i64
    }

    pub fn coeffs(&self) -> &[Complex64] {
        &self.coeffs
    }

    pub fn norm(&self) -> f64 {
        self.coeffs.iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt()
    }

    /// Evaluate the Fourier series at θ.
    pub fn eval(&self, theta: f64) -> Complex64 {
        self.indices()
            .zip(&self.coeffs)
            .map(|(n, c)| c * Complex64::cis(n as f64 * theta))
            .sum()
    }

    /// Energy in the `|n| = N` modes relative to the total.
    pub fn edge_energy(&self) -> f64 {
        let total: f64 = self.coeffs.iter().map(|c| c.norm_sqr()).sum();
        if total == 0.0 {
            return 0.0;
        }
        let edge = self.coeffs[0].norm_sqr() + self.coeffs[2 * self.trunc].norm_sqr();
        edge / total
    }
}

fn warn_if_truncated(v: &KFourierVector, context: &str) {
    let edge = v.edge_energy();
    if edge > TRUNCATION_WARN {
        log::warn!("{context}: edge-mode energy fraction {edge:e} exceeds {TRUNCATION_WARN:e}");
    }
}

pub(crate) fn check_nodes(nodes: usize, trunc: usize) -> Result<()> {
    if nodes < 4 * trunc + 4 {
        return domain(format!(
            "{nodes} nodes cannot resolve truncation {trunc}; need at least {}",
            4 * trunc + 4
        ));
    }
    Ok(())
}

/// `ρ(g)v`, re-projected onto `|n| ≤ out_trunc` by a discrete Fourier
/// transform over `nodes` equispaced points.
pub fn act_principal(
    rep: &InducedRep,
    g: &LorentzMatrix,
    v: &KFourierVector,
    out_trunc: usize,
    nodes: usize,
) -> Result<KFourierVector> {
    check_nodes(nodes, out_trunc.max(v.trunc()))?;
    let thetas = circle_nodes(nodes);
    let values: Vec<Complex64> = thetas
        .iter()
        .map(|&theta| {
            let (t, theta_out) = cocycle(theta, g);
            rep.multiplier(t) * v.eval(theta_out)
        })
        .collect();
    let out = KFourierVector::from_fn(out_trunc, |k| {
        let mut acc = CompensatedSum::new();
        for (theta, val) in thetas.iter().zip(&values) {
            acc.add(val * Complex64::cis(-(k as f64) * theta));
        }
        acc.value() / nodes as f64
    });
    warn_if_truncated(&out, "act_principal");
    Ok(out)
}

/// The truncated operator `ρ(g)` on `span{e_n : |n| ≤ N}`; entry `(k, n)`
/// is `⟨ρ(g)e_n, e_k⟩`.
#[derive(Debug, Clone, PartialEq)]
pub struct RepMatrix {
    pub rep: InducedRep,
    pub g: LorentzMatrix,
    pub trunc: usize,
    pub nodes: usize,
    data: DMatrix<Complex64>,
}

/// Precomputed `e^{ikθ_j}` for `|k| ≤ N` on `M` nodes.
#[derive(Debug, Clone)]
pub struct FourierTable {
    trunc: usize,
    thetas: Vec<f64>,
    /// `M × (2N+1)`, entry `(j, k+N) = e^{ikθ_j}`.
    table: DMatrix<Complex64>,
}

impl FourierTable {
    pub fn new(trunc: usize, nodes: usize) -> Self {
        let thetas = circle_nodes(nodes);
        let width = 2 * trunc + 1;
        let table = DMatrix::from_fn(nodes, width, |j, col| {
            let k = col as i64 - trunc as i64;
            Complex64::cis(k as f64 * thetas[j])
        });
        Self {
            trunc,
            thetas,
            table,
        }
    }

    pub fn nodes(&self) -> usize {
        self.thetas.len()
    }

    pub fn trunc(&self) -> usize {
        self.trunc
    }

    /// `e^{ikθ_j}` at column `k + N`.
    pub fn entry(&self, j: usize, col: usize) -> Complex64 {
        self.table[(j, col)]
    }
}

impl RepMatrix {
    pub fn new(rep: &InducedRep, g: &LorentzMatrix, trunc: usize, nodes: usize) -> Result<Self> {
        check_nodes(nodes, trunc)?;
        Ok(Self::with_table(rep, g, &FourierTable::new(trunc, nodes)))
    }

    pub fn with_table(rep: &InducedRep, g: &LorentzMatrix, table: &FourierTable) -> Self {
        let nodes = table.nodes();
        let trunc = table.trunc;
        let width = 2 * trunc + 1;
        let mut sampled = DMatrix::<Complex64>::zeros(nodes, width);
        for (j, &theta) in table.thetas.iter().enumerate() {
            let (t, theta_out) = cocycle(theta, g);
            let mult = rep.multiplier(t);
            for col in 0..width {
                let n = col as f64 - trunc as f64;
                sampled[(j, col)] = mult * Complex64::cis(n * theta_out);
            }
        }
        let data = table.table.adjoint() * sampled / Complex64::new(nodes as f64, 0.0);
        Self {
            rep: *rep,
            g: *g,
            trunc,
            nodes,
            data,
        }
    }

    fn index(&self, n: i64) -> usize {
        assert!(
            n.unsigned_abs() as usize <= self.trunc,
            "index {n} outside truncation {}",
            self.trunc
        );
        (n + self.trunc as i64) as usize
    }

    /// `⟨ρ(g)e_n, e_k⟩`.
    pub fn entry(&self, k: i64, n: i64) -> Complex64 {
        self.data[(self.index(k), self.index(n))]
    }

    pub fn matrix(&self) -> &DMatrix<Complex64> {
        &self.data
    }

    pub fn into_matrix(self) -> DMatrix<Complex64> {
        self.data
    }

    /// Largest entry difference on the central block `|k|, |n| ≤ N − guard`.
    pub fn central_distance(a: &DMatrix<Complex64>, b: &DMatrix<Complex64>, trunc: usize, guard: usize) -> f64 {
        let lo = guard;
        let hi = 2 * trunc - guard;
        let mut worst = 0.0_f64;
        for r in lo..=hi {
            for c in lo..=hi {
                worst = worst.max((a[(r, c)] - b[(r, c)]).norm());
            }
        }
        worst
    }
}

/// `φ_π(g) = ⟨π(g)e_n, e_m⟩` for a representation descriptor, after checking
/// that both K-types occur in π.
pub fn matcoef(p: &SpectralParam, g: &LorentzMatrix, n: i64, m: i64, nodes: usize) -> Result<Complex64> {
    let types = k_types(p);
    for k in [n, m] {
        if !types.contains(k) {
            return domain(format!("K-type {k} does not occur in {p}"));
        }
    }
    Ok(InducedRep::of(p).matcoef(g, n, m, nodes))
}

/// Relative coefficient mass that `ρ_{m−1}(g)` moves from the `D±(m)`
/// ladder into its complement.
///
/// Every basis vector `e_n` of the ladder with `|n| ≤ N − 4` is acted on,
/// and the squared output coefficients are split into ladder and
/// complement (again within `|k| ≤ N − 4`). Returns complement mass over
/// total mass.
pub fn discrete_ladder_leakage(
    m: u32,
    sign: Sign,
    g: &LorentzMatrix,
    trunc: usize,
    nodes: usize,
) -> Result<f64> {
    let p = SpectralParam::discrete(m, sign)?;
    let min_trunc = (m / 2) as usize + 8;
    if trunc < min_trunc {
        return domain(format!("truncation {trunc} below m/2 + 8 = {min_trunc}"));
    }
    ladder_leakage(&InducedRep::of(&p), &k_types(&p), g, trunc, nodes)
}

/// Relative coefficient mass that `rep(g)` moves out of the K-type set
/// `ladder`, measured as in [`discrete_ladder_leakage`].
pub fn ladder_leakage(
    rep: &InducedRep,
    ladder: &KTypes,
    g: &LorentzMatrix,
    trunc: usize,
    nodes: usize,
) -> Result<f64> {
    if trunc <= GUARD_MODES {
        return domain(format!("truncation {trunc} leaves no interior modes"));
    }
    let op = RepMatrix::new(rep, g, trunc, nodes)?;
    let inner = (trunc - GUARD_MODES) as i64;
    let (mut leaked, mut total) = (0.0, 0.0);
    for n in (-inner..=inner).filter(|&n| ladder.contains(n)) {
        for k in -inner..=inner {
            let mass = op.entry(k, n).norm_sqr();
            total += mass;
            if !ladder.contains(k) {
                leaked += mass;
            }
        }
    }
    Ok(if total == 0.0 { 0.0 } else { leaked / total })
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::TAU;
    use crate::groups::{boost, make_a, make_k, IwasawaCoords};
    use crate::hyperbolic::{act, phi, Exponent, HPoint};

    fn ci(im: f64) -> Complex64 {
        Complex64::new(0.0, im)
    }

    #[test]
    fn cocycle_examples() {
        let (t, th) = cocycle(1.3, &LorentzMatrix::identity());
        assert!(t.abs() < 1e-15 && (th - 1.3).abs() < 1e-15);
        let (t, th) = cocycle(0.0, &make_a(0.8).unwrap());
        assert!((t - 0.8).abs() < 1e-14 && th.abs() < 1e-14);
        let (t, th) = cocycle(4.0, &make_k(3.0).unwrap());
        assert!(t.abs() < 1e-14);
        assert!((th - (7.0 - TAU)).abs() < 1e-13);
    }

    #[test]
    fn identity_and_rotation_actions() {
        let rep = InducedRep::new(ci(1.0));
        let e3 = KFourierVector::basis(8, 3).unwrap();
        let out = act_principal(&rep, &LorentzMatrix::identity(), &e3, 8, 64).unwrap();
        for n in out.indices() {
            let want = if n == 3 { 1.0 } else { 0.0 };
            assert!((out.get(n) - want).norm() < 1e-14);
        }
        let theta = 0.9;
        let out = act_principal(&rep, &make_k(theta).unwrap(), &e3, 8, 64).unwrap();
        assert!((out.get(3) - Complex64::cis(3.0 * theta)).norm() < 1e-13);
        assert!(out.norm() - 1.0 < 1e-13);
    }

    #[test]
    fn too_few_nodes_is_rejected() {
        let rep = InducedRep::new(ci(1.0));
        let v = KFourierVector::basis(8, 0).unwrap();
        assert!(act_principal(&rep, &LorentzMatrix::identity(), &v, 8, 20).is_err());
    }

    #[test]
    fn rep_matrix_at_identity_is_identity() {
        let m = RepMatrix::new(&InducedRep::new(ci(2.0)), &LorentzMatrix::identity(), 6, 28).unwrap();
        let id = DMatrix::<Complex64>::identity(13, 13);
        assert!((m.matrix() - id).camax() < 1e-12);
    }

    #[test]
    fn matcoef_identity_is_kronecker() {
        let rep = InducedRep::new(Complex64::new(0.5, 0.0));
        for n in -3..=3 {
            for m in -3..=3 {
                let v = rep.matcoef(&LorentzMatrix::identity(), n, m, 64);
                let want = if n == m { 1.0 } else { 0.0 };
                assert!((v - want).norm() < 1e-14);
            }
        }
    }

    #[test]
    fn matcoef_bi_equivariance() {
        let rep = InducedRep::new(ci(1.0));
        let g = IwasawaCoords::new(0.4, -0.7, 2.0).to_matrix();
        for n in [-2, 0, 3] {
            let base = rep.matcoef(&g, n, n, 256);
            let (a, b) = (0.6, 2.5);
            let moved = rep.matcoef(&(make_k(a).unwrap() * g * make_k(b).unwrap()), n, n, 256);
            let want = base * Complex64::cis(n as f64 * (a + b));
            assert!((moved - want).norm() < 1e-10);
        }
    }

    #[test]
    fn zonal_coefficient_is_spherical_function() {
        for s in [ci(1.0), Complex64::new(0.5, 0.0)] {
            let rep = InducedRep::new(s);
            for t in [0.0, 0.5, 1.2, 2.0] {
                let lhs = rep.matcoef(&boost(t), 0, 0, 256);
                let z = act(&boost(t), &HPoint::i());
                let rhs = phi(&Exponent::from_spectral(s), &z, 256);
                assert!((lhs - rhs).norm() < 1e-7, "s {s} t {t}: {lhs} {rhs}");
            }
        }
    }

    #[test]
    fn k_type_table() {
        let d4 = SpectralParam::discrete(4, Sign::Plus).unwrap();
        assert_eq!(k_types(&d4), KTypes::AtLeast { n: 2 });
        assert!(k_types(&d4).contains(7) && !k_types(&d4).contains(1));
        assert_eq!(k_types(&SpectralParam::Trivial), KTypes::Only { n: 0 });
        let rho = SpectralParam::principal(1.0).unwrap();
        assert_eq!(k_types(&rho), KTypes::All);
        let d2m = SpectralParam::discrete(2, Sign::Minus).unwrap();
        assert_eq!(k_types(&d2m), KTypes::AtMost { n: -1 });
        assert!(SpectralParam::discrete(3, Sign::Plus).is_err());
        assert!(SpectralParam::discrete(0, Sign::Plus).is_err());
        assert!(SpectralParam::complementary(1.0).is_err());
        assert!(SpectralParam::principal(-1.0).is_err());
    }

    #[test]
    fn spherical_sets() {
        use SphericalFamily::*;
        assert_eq!(
            tau_spherical_set(1),
            vec![Discrete { m: 2, sign: Sign::Plus }, PrincipalSeries, ComplementarySeries]
        );
        assert_eq!(tau_spherical_set(0), vec![Trivial, PrincipalSeries, ComplementarySeries]);
        assert_eq!(
            tau_spherical_set(-2),
            vec![
                Discrete { m: 2, sign: Sign::Minus },
                Discrete { m: 4, sign: Sign::Minus },
                PrincipalSeries,
                ComplementarySeries
            ]
        );
    }

    #[test]
    fn matcoef_checks_k_types() {
        let d4 = SpectralParam::discrete(4, Sign::Plus).unwrap();
        assert!(matcoef(&d4, &LorentzMatrix::identity(), 1, 1, 64).is_err());
        assert!(matcoef(&d4, &LorentzMatrix::identity(), 2, 2, 64).is_ok());
        let one = matcoef(&SpectralParam::Trivial, &boost(1.5), 0, 0, 64).unwrap();
        assert!((one - 1.0).norm() < 1e-14);
    }

    #[test]
    fn ladder_is_invariant_at_identity() {
        let l = discrete_ladder_leakage(2, Sign::Plus, &LorentzMatrix::identity(), 16, 68).unwrap();
        assert!(l < 1e-28);
    }

    #[test]
    fn ladder_leaks_when_misplaced() {
        let g = boost(1.0);
        for sign in [Sign::Plus, Sign::Minus] {
            assert!(discrete_ladder_leakage(2, sign, &g, 24, 100).unwrap() < 1e-6);
            assert!(discrete_ladder_leakage(4, sign, &g, 24, 100).unwrap() < 1e-6);
        }
        let rep = InducedRep::new(Complex64::new(1.0, 0.0));
        let shifted = ladder_leakage(&rep, &KTypes::AtLeast { n: 2 }, &g, 24, 100).unwrap();
        assert!(shifted > 1e-3, "{shifted}");
    }

    #[test]
    fn spectral_param_classification() {
        assert_eq!(SpectralParam::from_s(ci(2.0)).unwrap(), SpectralParam::Principal { nu: 2.0 });
        assert_eq!(
            SpectralParam::from_s(Complex64::new(0.5, 0.0)).unwrap(),
            SpectralParam::Complementary { s: 0.5 }
        );
        assert!(matches!(
            SpectralParam::from_s(Complex64::new(1.0, 1.0)).unwrap(),
            SpectralParam::InducedPoint { .. }
        ));
    }
}
