mod args;

use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use clap::{CommandFactory, FromArgMatches, Parser, Subcommand, ValueEnum};
use lh_core::character::{
    char_identity_check, char_refinement, corollary_check, frobenius_bump, haar_invariance, integrate_g, CharConfig,
    Density, HaarGrid, Side,
};
use lh_core::equivariant::{
    gram_min_eig, project_biequivariant, right_isotype_project, separation_margin, separation_witness, tau,
    BumpProfile, GramQuadrature,
};
use lh_core::groups::{
    cartan, haar_density, iwasawa, make_a, make_k, make_n, psi, psi_inv, so21_check, LorentzMatrix,
};
use lh_core::hyperbolic::{
    act, chi, eigencheck, laplacian_fd, phi, phi_along_ray, ray_csv, Exponent, HPoint, DEFAULT_PHI_NODES,
    DEFAULT_STEP,
};
use lh_core::lie::{ad_w_eigencheck, bracket, casimir_apply, dpsi, exp_matrix, LieElement};
use lh_core::numeric::default_nodes;
use lh_core::reps::{
    act_principal, cocycle, discrete_ladder_leakage, k_types, matcoef, tau_spherical_set, InducedRep,
    KFourierVector, RepMatrix, Sign, SpectralParam,
};
use lh_core::suite::{run_all, run_criterion, DEFAULT_SEED, GRAM_THRESHOLD};
use lh_core::{Complex64, Error};

use crate::args::{RepArg, Translation};
use serde_json::{json, Value};

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Csv,
    Text,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum SideArg {
    Left,
    Right,
    Both,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum DensityArg {
    Haar,
    ExpT,
}

/// Numerical harmonic analysis on SO(2,1)° ≅ PSL(2,R).
#[derive(Debug, Parser)]
#[command(name = "lh", version)]
struct Cli {
    /// Output format.
    #[arg(long, global = true, value_enum, default_value = "json")]
    format: Format,
    /// Print only the result, without the run metadata.
    #[arg(long, global = true)]
    no_meta: bool,
    /// Worker threads for parallel loops.
    #[arg(long, global = true, default_value_t = 1)]
    threads: usize,
    /// Seed for randomized checks.
    #[arg(long, global = true, default_value_t = DEFAULT_SEED)]
    seed: u64,
    /// Tolerance for check subcommands (exit 3 when exceeded).
    #[arg(long, global = true)]
    tol: Option<f64>,
    /// Write output to a file instead of stdout.
    #[arg(long, short, global = true)]
    output: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Iwasawa coordinates of a matrix, or the matrix of given coordinates.
    Iwasawa {
        #[arg(long, value_parser = args::nine, conflicts_with = "from", required_unless_present = "from", allow_hyphen_values = true)]
        matrix: Option<[f64; 9]>,
        /// Recompose a_t n_u k_θ from t,u,theta.
        #[arg(long, value_parser = args::triple, allow_hyphen_values = true)]
        from: Option<[f64; 3]>,
    },
    /// Cartan coordinates k_θ1 a_t k_θ2.
    Cartan {
        #[arg(long, value_parser = args::nine, allow_hyphen_values = true)]
        matrix: [f64; 9],
    },
    /// Image of an SL(2,R) matrix, or of an sl(2,R) element with --algebra.
    Psi {
        #[arg(long, value_parser = args::four, required_unless_present = "algebra", allow_hyphen_values = true)]
        sl2: Option<[f64; 4]>,
        /// Traceless 2×2 matrix a,b,c,d.
        #[arg(long, value_parser = args::four, conflicts_with = "sl2", allow_hyphen_values = true)]
        algebra: Option<[f64; 4]>,
    },
    /// Canonical PSL(2,R) preimage.
    PsiInv {
        #[arg(long, value_parser = args::nine, allow_hyphen_values = true)]
        matrix: [f64; 9],
    },
    /// Lie bracket; with no operands, the ad W eigenvector check.
    Bracket {
        #[arg(long, value_parser = args::lie, requires = "y", allow_hyphen_values = true)]
        x: Option<LieElement>,
        #[arg(long, value_parser = args::lie, requires = "x", allow_hyphen_values = true)]
        y: Option<LieElement>,
    },
    /// Matrix exponential of a Lie algebra element.
    Exp {
        #[arg(long, value_parser = args::lie, allow_hyphen_values = true)]
        x: LieElement,
    },
    /// Casimir applied to a matrix coefficient of ρ_s.
    Casimir {
        #[arg(long, value_parser = args::complex, allow_hyphen_values = true)]
        s: Complex64,
        #[arg(long = "g-iwasawa", value_parser = args::triple, default_value = "0.3,0.2,0.5", allow_hyphen_values = true)]
        g: [f64; 3],
        #[arg(long, default_value_t = 0, allow_hyphen_values = true)]
        n: i64,
        #[arg(long, default_value_t = 0, allow_hyphen_values = true)]
        m: i64,
        #[arg(long, default_value_t = 1e-3)]
        h: f64,
        #[arg(long)]
        nodes: Option<usize>,
    },
    /// Spherical function φ_w, or its values along a geodesic ray.
    Spherical {
        #[arg(long, value_parser = args::complex, allow_hyphen_values = true)]
        w: Complex64,
        #[arg(long, value_parser = args::pair, default_value = "0,1", allow_hyphen_values = true)]
        z: [f64; 2],
        /// Move z by a group element first.
        #[arg(long = "g-iwasawa", value_parser = args::triple, allow_hyphen_values = true)]
        g: Option<[f64; 3]>,
        #[arg(long)]
        nodes: Option<usize>,
        /// Emit φ_w along the ray k_α a_t·i, t ∈ [0, tmax], as CSV.
        #[arg(long)]
        ray: bool,
        #[arg(long, default_value_t = 0.0)]
        alpha: f64,
        #[arg(long, default_value_t = 3.0)]
        tmax: f64,
        #[arg(long, default_value_t = 30)]
        steps: usize,
    },
    /// Laplacian eigenvalue check for φ_w (tolerance 1e-4).
    Eigencheck {
        #[arg(long, value_parser = args::complex, allow_hyphen_values = true, required_unless_present = "s")]
        w: Option<Complex64>,
        /// Spectral parameter; uses w = (1+s)/2.
        #[arg(long, value_parser = args::complex, allow_hyphen_values = true, conflicts_with = "w")]
        s: Option<Complex64>,
        #[arg(long, value_parser = args::pair, allow_hyphen_values = true)]
        z: [f64; 2],
        #[arg(long, default_value_t = DEFAULT_STEP)]
        h: f64,
        #[arg(long)]
        nodes: Option<usize>,
    },
    /// Matrix coefficient ⟨π(g)e_n, e_m⟩.
    Matcoef {
        /// Representation: trivial, D+4, D-2, or a spectral parameter.
        #[arg(long = "s", alias = "rep", value_parser = args::rep, allow_hyphen_values = true)]
        rep: RepArg,
        #[arg(long = "g-iwasawa", value_parser = args::triple, allow_hyphen_values = true)]
        g: [f64; 3],
        #[arg(long, allow_hyphen_values = true)]
        n: i64,
        #[arg(long, allow_hyphen_values = true)]
        m: i64,
        /// Also report the same entry of the truncated operator matrix.
        #[arg(long)]
        trunc: Option<usize>,
        #[arg(long)]
        nodes: Option<usize>,
    },
    /// K-types of a representation, or the τ_n-spherical families.
    Ktypes {
        #[arg(long, value_parser = args::rep, allow_hyphen_values = true, required_unless_present = "n")]
        rep: Option<RepArg>,
        #[arg(long, allow_hyphen_values = true)]
        n: Option<i64>,
    },
    /// Leakage of ρ_{m-1}(g) out of the discrete-series ladder (tolerance 1e-6).
    Ladder {
        #[arg(long, default_value_t = 2)]
        m: u32,
        #[arg(long, value_parser = args::sign, default_value = "+", allow_hyphen_values = true)]
        sign: Sign,
        #[arg(long, default_value_t = 24)]
        trunc: usize,
        #[arg(long = "g-iwasawa", value_parser = args::triple, default_value = "1,0,0", allow_hyphen_values = true)]
        g: [f64; 3],
        #[arg(long)]
        nodes: Option<usize>,
    },
    /// Separating function for K×K double cosets.
    Separate {
        #[arg(long, default_value_t = 1, allow_hyphen_values = true)]
        n: i64,
        #[arg(long, default_value_t = 0.8)]
        t0: f64,
        #[arg(long, default_value_t = 0.2)]
        width: f64,
        /// Cartan radii of the two probe points.
        #[arg(long, value_parser = args::pair, default_value = "0.8,1.4", allow_hyphen_values = true)]
        probe: [f64; 2],
        /// Angles θ1,θ2 placing the probes in their double cosets.
        #[arg(long, value_parser = args::pair, default_value = "0.7,2.1", allow_hyphen_values = true)]
        angles: [f64; 2],
        /// Circle nodes for the projection checks.
        #[arg(long, default_value_t = 64)]
        nodes: usize,
    },
    /// Gram matrix of zonal matrix coefficients.
    Gram {
        #[arg(long, value_parser = args::rep, value_delimiter = ',', default_value = "i,2i,0.5", allow_hyphen_values = true)]
        params: Vec<RepArg>,
        #[arg(long, default_value_t = 0, allow_hyphen_values = true)]
        n: i64,
        #[arg(long, default_value_t = 0.0)]
        tmin: f64,
        #[arg(long, default_value_t = 2.0)]
        tmax: f64,
        #[arg(long, default_value_t = 48)]
        radial: usize,
    },
    /// Translation invariance of the Haar quadrature (tolerance 5e-3).
    Haarcheck {
        /// a:T, n:U, k:THETA or an Iwasawa triple.
        #[arg(long, value_parser = args::translation, default_value = "a:0.3", allow_hyphen_values = true)]
        g0: Translation,
        #[arg(long, value_enum, default_value = "both")]
        side: SideArg,
        #[arg(long, value_parser = args::grid, default_value = "96,96,128")]
        grid: [usize; 3],
        #[arg(long, value_enum, default_value = "haar")]
        density: DensityArg,
        #[arg(long, default_value_t = 1.5)]
        radius: f64,
    },
    /// Character identity for a bi-equivariant bump (tolerance 0.02).
    Charcheck {
        /// Representation: a spectral parameter, trivial, or D±m.
        #[arg(long = "s", alias = "rep", value_parser = args::rep, default_value = "i", allow_hyphen_values = true)]
        rep: RepArg,
        #[arg(long, default_value_t = 1, allow_hyphen_values = true)]
        n: i64,
        #[arg(long, value_parser = args::grid, default_value = "48,48,96")]
        grid: [usize; 3],
        #[arg(long, default_value_t = 16)]
        trunc: usize,
        #[arg(long, default_value_t = 0.6)]
        t0: f64,
        #[arg(long, default_value_t = 0.5)]
        width: f64,
        /// Repeat on the grid with doubled node counts.
        #[arg(long)]
        refine: bool,
        /// Treat the representation as τ_n-spherical and test a type −n function.
        #[arg(long)]
        corollary: bool,
    },
    /// Run the acceptance criteria.
    Suite {
        /// Run a single criterion.
        #[arg(long)]
        only: Option<u8>,
    },
}

/// Library operation → subcommand that exposes it.
#[cfg(test)]
const OPERATION_MAP: &[(&str, &str)] = &[
    ("make_a", "iwasawa"),
    ("so21_check", "iwasawa"),
    ("iwasawa", "iwasawa"),
    ("cartan", "cartan"),
    ("psi", "psi"),
    ("dpsi", "psi"),
    ("psi_inv", "psi-inv"),
    ("bracket", "bracket"),
    ("ad_w_eigencheck", "bracket"),
    ("exp_matrix", "exp"),
    ("casimir_apply", "casimir"),
    ("act", "spherical"),
    ("chi", "spherical"),
    ("phi", "spherical"),
    ("laplacian_fd", "eigencheck"),
    ("eigencheck", "eigencheck"),
    ("cocycle", "matcoef"),
    ("act_principal", "matcoef"),
    ("matcoef", "matcoef"),
    ("k_types", "ktypes"),
    ("tau_spherical_set", "ktypes"),
    ("discrete_ladder_leakage", "ladder"),
    ("tau", "separate"),
    ("project_biequivariant", "separate"),
    ("right_isotype_project", "separate"),
    ("separation_witness", "separate"),
    ("gram_min_eig", "gram"),
    ("haar_density", "haarcheck"),
    ("integrate_G", "haarcheck"),
    ("pi_of_f", "charcheck"),
    ("char_identity_check", "charcheck"),
    ("corollary_check", "charcheck"),
    ("run", "suite"),
];

struct Outcome {
    value: Value,
    passed: Option<bool>,
    csv: Option<String>,
}

impl Outcome {
    fn value(value: Value) -> Self {
        Self {
            value,
            passed: None,
            csv: None,
        }
    }

    fn checked(value: Value, passed: bool) -> Self {
        Self {
            value,
            passed: Some(passed),
            csv: None,
        }
    }
}

fn cplx(z: Complex64) -> Value {
    json!({"re": z.re, "im": z.im})
}

fn nodes_or(explicit: Option<usize>, fallback: usize) -> lh_core::Result<usize> {
    match explicit.unwrap_or_else(|| default_nodes(fallback)) {
        n if n >= 16 => Ok(n),
        n => Err(Error::Domain(format!("at least 16 quadrature nodes required, got {n}"))),
    }
}

fn execute(cli: &Cli) -> lh_core::Result<Outcome> {
    let tol = |default: f64| cli.tol.unwrap_or(default);
    Ok(match &cli.command {
        Command::Iwasawa { matrix, from } => match (matrix, from) {
            (Some(m), _) => Outcome::value(serde_json::to_value(iwasawa(&args::matrix(m)?)).expect("serializable")),
            (None, Some([t, u, th])) => {
                let g = make_a(*t)? * make_n(*u)? * make_k(*th)?;
                let check = so21_check(g.matrix());
                Outcome::checked(
                    json!({"matrix": g.to_row_array(), "membership": check}),
                    check.accepted(),
                )
            }
            (None, None) => unreachable!("clap enforces one input"),
        },
        Command::Cartan { matrix } => {
            Outcome::value(serde_json::to_value(cartan(&args::matrix(matrix)?)).expect("serializable"))
        }
        Command::Psi { sl2, algebra } => match (sl2, algebra) {
            (Some(g), _) => Outcome::value(json!(psi(&args::sl2(g)?)?.to_row_array())),
            (None, Some([a, b, c, d])) => {
                let x = dpsi(&nalgebra_matrix(*a, *b, *c, *d))?;
                Outcome::value(json!({"matrix": x.to_row_array(), "coords": x.coords()}))
            }
            (None, None) => unreachable!("clap enforces one input"),
        },
        Command::PsiInv { matrix } => {
            Outcome::value(json!(psi_inv(&args::matrix(matrix)?).representative().to_row_array()))
        }
        Command::Bracket { x, y } => match (x, y) {
            (Some(x), Some(y)) => {
                let b = bracket(x, y);
                Outcome::value(json!({"matrix": b.to_row_array(), "coords": b.coords()}))
            }
            _ => {
                let (plus, minus) = ad_w_eigencheck();
                Outcome::checked(json!({"e_plus_defect": plus, "e_minus_defect": minus}), plus == 0.0 && minus == 0.0)
            }
        },
        Command::Exp { x } => {
            let g = exp_matrix(x);
            let check = g.membership();
            Outcome::checked(json!({"matrix": g.to_row_array(), "membership": check}), check.accepted())
        }
        Command::Casimir { s, g, n, m, h, nodes } => {
            let rep = InducedRep::new(*s);
            let nodes = nodes_or(*nodes, 256)?;
            let g = args::iwasawa_element(*g).to_matrix();
            let f = |x: &LorentzMatrix| rep.matcoef(x, *n, *m, nodes);
            let value = casimir_apply(f, &g, *h)?;
            let base = f(&g);
            Outcome::value(json!({"omega_f": cplx(value), "f": cplx(base), "ratio": cplx(value / base)}))
        }
        Command::Spherical { w, z, g, nodes, ray, alpha, tmax, steps } => {
            let (w, z) = (&args::exponent(*w)?, &args::point(z)?);
            let nodes = nodes_or(*nodes, DEFAULT_PHI_NODES)?;
            if *ray {
                let samples = phi_along_ray(w, *alpha, *tmax, *steps, nodes);
                let csv = ray_csv(&samples);
                let rows: Vec<Value> = samples.iter().map(|r| json!({"t": r.t, "phi": cplx(r.value)})).collect();
                return Ok(Outcome {
                    value: json!({"w": cplx(w.0), "alpha": alpha, "samples": rows}),
                    passed: None,
                    csv: Some(csv),
                });
            }
            let point = match g {
                Some(c) => act(&args::iwasawa_element(*c).to_matrix(), z),
                None => *z,
            };
            Outcome::value(json!({
                "w": cplx(w.0),
                "z": {"x": point.x, "y": point.y},
                "phi": cplx(phi(w, &point, nodes)),
                "chi": cplx(chi(w, &point)),
            }))
        }
        Command::Eigencheck { w, s, z, h, nodes } => {
            let w = match (w, s) {
                (Some(w), _) => args::exponent(*w)?,
                (None, Some(s)) => Exponent::from_spectral(*s),
                (None, None) => unreachable!("clap enforces one input"),
            };
            let z = &args::point(z)?;
            let nodes = nodes_or(*nodes, 1024)?;
            let c = eigencheck(&w, z, *h, nodes)?;
            let direct = laplacian_fd(|p: &HPoint| phi(&w, p, nodes), z, *h)?;
            let limit = tol(1e-4);
            Outcome::checked(
                json!({
                    "w": cplx(w.0),
                    "laplacian": cplx(direct),
                    "lhs": cplx(c.lhs),
                    "rhs": cplx(c.rhs),
                    "eigenvalue": cplx(c.eigenvalue),
                    "rel_err": c.rel_err,
                    "tol": limit,
                }),
                c.rel_err < limit,
            )
        }
        Command::Matcoef { rep, g, n, m, trunc, nodes } => {
            let rep = &rep.resolve()?;
            let nodes = nodes_or(*nodes, DEFAULT_PHI_NODES)?;
            let gm = args::iwasawa_element(*g).to_matrix();
            let value = matcoef(rep, &gm, *n, *m, nodes)?;
            let (t, theta_out) = cocycle(0.0, &gm);
            let mut out = json!({
                "rep": rep.to_string(),
                "n": n,
                "m": m,
                "value": cplx(value),
                "cocycle_at_0": {"t": t, "theta": theta_out},
            });
            if let Some(tr) = trunc {
                let ind = InducedRep::of(rep);
                let table_nodes = 4 * tr + 4;
                let op = RepMatrix::new(&ind, &gm, *tr, table_nodes)?;
                out["matrix_entry"] = cplx(op.entry(*m, *n));
                let e_n = KFourierVector::basis(*tr, *n)?;
                let image = act_principal(&ind, &gm, &e_n, *tr, table_nodes)?;
                out["image_norm"] = json!(image.norm());
            }
            Outcome::value(out)
        }
        Command::Ktypes { rep, n } => {
            let mut out = json!({});
            if let Some(p) = rep {
                let p = &p.resolve()?;
                out["rep"] = json!(p.to_string());
                out["k_types"] = json!(k_types(p).describe());
            }
            if let Some(n) = n {
                out["n"] = json!(n);
                out["spherical"] = serde_json::to_value(tau_spherical_set(*n)).expect("serializable");
            }
            Outcome::value(out)
        }
        Command::Ladder { m, sign, trunc, g, nodes } => {
            let nodes = nodes.unwrap_or(4 * trunc + 4);
            let gm = args::iwasawa_element(*g).to_matrix();
            let leakage = discrete_ladder_leakage(*m, *sign, &gm, *trunc, nodes)?;
            let limit = tol(1e-6);
            Outcome::checked(
                json!({"m": m, "sign": sign.symbol().to_string(), "trunc": trunc, "nodes": nodes, "leakage": leakage, "tol": limit}),
                leakage < limit,
            )
        }
        Command::Separate { n, t0, width, probe, angles, nodes } => {
            if *nodes == 0 {
                return Err(Error::Domain("projection needs at least one circle node".into()));
            }
            let profile = BumpProfile::new(*t0, *width)?;
            let f = separation_witness(*n, profile);
            let place = |t: f64| -> lh_core::Result<LorentzMatrix> {
                Ok(make_k(angles[0])? * make_a(t)? * make_k(angles[1])?)
            };
            let (x, y) = (place(probe[0])?, place(probe[1])?);
            let projected = project_biequivariant(f.as_gfn(), *n, *nodes);
            let right = right_isotype_project(f.as_gfn(), *n, *nodes);
            let projection_defect = (projected.eval(&x) - f.eval(&x)).norm();
            let right_defect = (right(&x) - f.eval(&x)).norm();
            let phase = tau(*n, angles[0] + angles[1]);
            Outcome::value(json!({
                "n": n,
                "peak": profile.peak(),
                "f_x": cplx(f.eval(&x)),
                "f_y": cplx(f.eval(&y)),
                "margin": separation_margin(&f, &x, &y),
                "phase": cplx(phase),
                "projection_defect": projection_defect,
                "right_projection_defect": right_defect,
            }))
        }
        Command::Gram { params, n, tmin, tmax, radial } => {
            let quad = GramQuadrature { radial: *radial, ..GramQuadrature::default() };
            let params: Vec<SpectralParam> = params.iter().map(|p| p.resolve()).collect::<lh_core::Result<_>>()?;
            let r = gram_min_eig(&params, *n, (*tmin, *tmax), quad)?;
            let limit = tol(GRAM_THRESHOLD);
            let names: Vec<String> = params.iter().map(|p| p.to_string()).collect();
            Outcome::checked(
                json!({
                    "params": names,
                    "min_eig": r.min_eig,
                    "max_eig": r.max_eig,
                    "condition": if r.condition.is_finite() { json!(r.condition) } else { Value::Null },
                    "matrix": r.matrix,
                    "threshold": limit,
                }),
                r.min_eig > limit,
            )
        }
        Command::Haarcheck { g0, side, grid, density, radius } => {
            let g0 = &g0.resolve()?;
            let mut hg = HaarGrid::with_nodes(grid[0], grid[1], grid[2]);
            hg.density = match density {
                DensityArg::Haar => Density::Haar,
                DensityArg::ExpT => Density::ExpT,
            };
            let f = frobenius_bump(LorentzMatrix::identity(), *radius);
            let sides = match side {
                SideArg::Left => vec![Side::Left],
                SideArg::Right => vec![Side::Right],
                SideArg::Both => vec![Side::Left, Side::Right],
            };
            let limit = tol(5e-3);
            let mut worst = 0.0_f64;
            let mut reports = Vec::new();
            for s in sides {
                let r = haar_invariance(&f, g0, s, &hg)?;
                worst = worst.max(r.defect);
                reports.push(json!({"side": format!("{s:?}").to_lowercase(), "defect": r.defect}));
            }
            let base = integrate_g(f.as_ref(), &hg)?;
            let density_at_origin = haar_density(&args::iwasawa_element([0.0, 0.0, 0.0]));
            Outcome::checked(
                json!({
                    "integral": cplx(base.value),
                    "boundary_max": base.boundary_max,
                    "haar_density_at_identity": density_at_origin,
                    "translations": reports,
                    "max_defect": worst,
                    "tol": limit,
                }),
                worst < limit,
            )
        }
        Command::Charcheck { rep, n, grid, trunc, t0, width, refine, corollary } => {
            let rep = &rep.resolve()?;
            let cfg = CharConfig::new(HaarGrid::with_nodes(grid[0], grid[1], grid[2]), *trunc);
            let profile = BumpProfile::new(*t0, *width)?;
            let limit = tol(0.02);
            let (type_n, label) = if *corollary { (-*n, "corollary") } else { (*n, "lemma") };
            let f = separation_witness(type_n, profile);
            let report = |c: &lh_core::character::CharReport, g: [usize; 3]| {
                json!({
                    "lhs": cplx(c.lhs_trace),
                    "rhs": cplx(c.rhs_integral),
                    "rel_err": c.rel_err,
                    "abs_err": c.abs_err,
                    "f_l1": c.f_l1,
                    "off_row_fraction": c.off_row_fraction,
                    "grid": g,
                })
            };
            if *refine {
                let r = if *corollary {
                    let base = corollary_check(rep, *n, &f, &cfg)?;
                    let refined = corollary_check(rep, *n, &f, &cfg.refined())?;
                    lh_core::character::RefinementReport { base, refined }
                } else {
                    char_refinement(rep, *n, &f, &cfg)?
                };
                let g2 = [grid[0] * 2, grid[1] * 2, grid[2] * 2];
                let passed = r.base.rel_err < limit && r.refined.rel_err <= r.base.rel_err.max(limit / 2.0);
                Outcome::checked(
                    json!({
                        "rep": rep.to_string(), "n": n, "check": label, "trunc": trunc,
                        "base": report(&r.base, *grid), "refined": report(&r.refined, g2),
                        "improves": r.improves(), "tol": limit,
                    }),
                    passed,
                )
            } else {
                let c = if *corollary {
                    corollary_check(rep, *n, &f, &cfg)?
                } else {
                    char_identity_check(rep, *n, &f, &cfg)?
                };
                let mut v = report(&c, *grid);
                v["rep"] = json!(rep.to_string());
                v["n"] = json!(n);
                v["check"] = json!(label);
                v["trunc"] = json!(trunc);
                v["tol"] = json!(limit);
                Outcome::checked(v, c.rel_err < limit)
            }
        }
        Command::Suite { only } => {
            let results = match only {
                Some(id) => vec![run_criterion(*id, cli.seed)
                    .ok_or_else(|| Error::Domain(format!("no criterion with id {id}")))?],
                None => run_all(cli.seed),
            };
            let passed = results.iter().all(|r| r.passed);
            let table: Vec<String> = results.iter().map(|r| r.line()).collect();
            Outcome {
                value: json!({"criteria": results, "passed": passed}),
                passed: Some(passed),
                csv: Some(suite_csv(&results)),
            }
            .with_table(table)
        }
    })
}

impl Outcome {
    fn with_table(mut self, lines: Vec<String>) -> Self {
        self.value["table"] = json!(lines);
        self
    }
}

fn suite_csv(results: &[lh_core::suite::CriterionResult]) -> String {
    let mut out = String::from("id,name,passed,seconds\n");
    for r in results {
        out.push_str(&format!("{},{},{},{:.3}\n", r.id, r.name, r.passed, r.seconds));
    }
    out
}

fn nalgebra_matrix(a: f64, b: f64, c: f64, d: f64) -> nalgebra::Matrix2<f64> {
    nalgebra::Matrix2::new(a, b, c, d)
}

/// Replaces `-0.0` by `0.0` so that identical values print identically.
fn normalize(v: &mut Value) {
    match v {
        Value::Number(n) => {
            if n.as_f64() == Some(0.0) && n.is_f64() {
                *v = json!(0.0);
            }
        }
        Value::Array(items) => items.iter_mut().for_each(normalize),
        Value::Object(map) => map.values_mut().for_each(normalize),
        _ => {}
    }
}

fn scalar_text(v: &Value) -> String {
    match v {
        Value::String(s) => s.clone(),
        other => other.to_string(),
    }
}

fn render(cli: &Cli, outcome: &Outcome, seconds: f64) -> String {
    let mut value = outcome.value.clone();
    normalize(&mut value);
    match cli.format {
        Format::Json => {
            let doc = if cli.no_meta {
                value
            } else {
                json!({
                    "result": value,
                    "meta": {
                        "command": command_name(&cli.command),
                        "version": env!("CARGO_PKG_VERSION"),
                        "seed": cli.seed,
                        "threads": cli.threads,
                        "runtime_seconds": seconds,
                    }
                })
            };
            format!("{doc}\n")
        }
        Format::Csv => match &outcome.csv {
            Some(csv) => csv.clone(),
            None => match &value {
                Value::Object(map) => {
                    let keys: Vec<&str> = map.keys().map(String::as_str).collect();
                    let vals: Vec<String> = map.values().map(|v| csv_field(&scalar_text(v))).collect();
                    format!("{}\n{}\n", keys.join(","), vals.join(","))
                }
                other => format!("{}\n", scalar_text(other)),
            },
        },
        Format::Text => {
            if let Some(Value::Array(lines)) = value.get("table") {
                let mut out: String = lines.iter().map(|l| format!("{}\n", scalar_text(l))).collect();
                if let Some(p) = value.get("passed") {
                    out.push_str(&format!("all passed: {p}\n"));
                }
                return out;
            }
            match &value {
                Value::Object(map) => map.iter().map(|(k, v)| format!("{k}: {}\n", scalar_text(v))).collect(),
                other => format!("{}\n", scalar_text(other)),
            }
        }
    }
}

fn csv_field(s: &str) -> String {
    if s.contains(',') || s.contains('"') {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}

fn command_name(cmd: &Command) -> &'static str {
    match cmd {
        Command::Iwasawa { .. } => "iwasawa",
        Command::Cartan { .. } => "cartan",
        Command::Psi { .. } => "psi",
        Command::PsiInv { .. } => "psi-inv",
        Command::Bracket { .. } => "bracket",
        Command::Exp { .. } => "exp",
        Command::Casimir { .. } => "casimir",
        Command::Spherical { .. } => "spherical",
        Command::Eigencheck { .. } => "eigencheck",
        Command::Matcoef { .. } => "matcoef",
        Command::Ktypes { .. } => "ktypes",
        Command::Ladder { .. } => "ladder",
        Command::Separate { .. } => "separate",
        Command::Gram { .. } => "gram",
        Command::Haarcheck { .. } => "haarcheck",
        Command::Charcheck { .. } => "charcheck",
        Command::Suite { .. } => "suite",
    }
}

fn command() -> clap::Command {
    Cli::command().mut_subcommands(|c| c.allow_negative_numbers(true))
}

fn parse() -> Result<Cli, clap::Error> {
    let matches = command().try_get_matches()?;
    Cli::from_arg_matches(&matches)
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = match parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    if cli.threads == 0 {
        let _ = command().error(clap::error::ErrorKind::ValueValidation, "--threads must be at least 1").print();
        return ExitCode::from(1);
    }
    if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(cli.threads).build_global() {
        eprintln!("error: {e}");
        return ExitCode::from(2);
    }
    let start = Instant::now();
    let outcome = match execute(&cli) {
        Ok(o) => o,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(2);
        }
    };
    let text = render(&cli, &outcome, start.elapsed().as_secs_f64());
    let written = match &cli.output {
        Some(path) => std::fs::write(path, &text),
        None => std::io::stdout().write_all(text.as_bytes()),
    };
    if let Err(e) = written {
        eprintln!("error: {e}");
        return ExitCode::from(2);
    }
    match outcome.passed {
        Some(false) => ExitCode::from(3),
        _ => ExitCode::SUCCESS,
    }
}
