//! Command-line front end: surface definition files in TOML, sampling to
//! CSV, meshing to OBJ, canonization, Moebius transforms, the associated
//! family, and an invariant report.

use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use nalgebra::Matrix2;
use num_complex::Complex64;
use serde::Deserialize;

use crate::canonical::{canonize, is_canonical, CanonicalType};
use crate::error::{Error, Result};
use crate::family::{associate, conjugate};
use crate::mink4::bilinear_dot;
use crate::motions::{mobius_act, MotionVariant};
use crate::surface::{curvatures_gform, sample, SurfaceGrid};
use crate::weier::{
    build_phi, validate, Component, Domain, Form, GridSpec, WeierData,
};

/// Exit codes: 0 ok, 1 condition violation, 2 parse error, 3 degenerate
/// point, 4 numerical failure, 5 not congruent / not canonical.
pub fn exit_code(e: &Error) -> i32 {
    match e {
        Error::Syntax { .. }
        | Error::UnknownFunction(_)
        | Error::NonIntegerExponent { .. }
        | Error::Config(_)
        | Error::Io(_)
        | Error::UnsupportedDirection { .. } => 2,
        Error::ConditionViolated { .. } => 1,
        Error::DegeneratePoint { .. } | Error::DegenerateMetric(_) => 3,
        Error::NotCongruent(_)
        | Error::NotCanonical(_)
        | Error::NotUnimodular(_)
        | Error::SingularMatrix => 5,
        _ => 4,
    }
}

#[derive(Parser, Debug)]
#[command(name = "minsurf", about = "Minimal space-like surfaces in R^4_1")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Args, Debug, Clone)]
pub struct CommonOpts {
    /// Input surface definition (TOML)
    #[arg(long = "in")]
    pub input: PathBuf,
    /// Output file
    #[arg(long = "out")]
    pub output: Option<PathBuf>,
    /// Grid override, e.g. 21x21
    #[arg(long = "grid", value_parser = parse_grid)]
    pub grid: Option<GridSpec>,
    /// Base point RE,IM for contour integration
    #[arg(long = "t0", value_parser = parse_complex)]
    pub t0: Option<Complex64>,
    /// Tolerance override for checks
    #[arg(long = "tol")]
    pub tol: Option<f64>,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Check the validity conditions on the grid
    Validate(CommonOpts),
    /// Sample positions and invariants to CSV
    Sample(CommonOpts),
    /// Write a projected OBJ mesh
    Mesh {
        #[command(flatten)]
        common: CommonOpts,
        /// drop-x4, drop-x3, or ortho:12 comma-separated reals (3x4,
        /// row-major)
        #[arg(long = "projection", default_value = "drop-x4")]
        projection: String,
    },
    /// Reparametrize to canonical coordinates and sample the result
    Canonize(CommonOpts),
    /// Apply a Moebius transformation and write the transformed surface
    Transform {
        #[command(flatten)]
        common: CommonOpts,
        /// 8 reals: a_re,a_im,b_re,b_im,c_re,c_im,d_re,d_im
        #[arg(long = "mobius", value_parser = parse_mobius)]
        mobius: MobiusArg,
    },
    /// Sample a member of the associated family
    Associate {
        #[command(flatten)]
        common: CommonOpts,
        /// Family angle in radians, in [0, pi/2]
        #[arg(long = "phi")]
        phi: f64,
    },
    /// Sample the conjugate surface
    Conjugate(CommonOpts),
    /// Run the invariant suite and print pass/fail per property
    Report(CommonOpts),
}

#[derive(Debug, Clone)]
pub struct MobiusArg(pub Matrix2<Complex64>);

fn parse_grid(s: &str) -> std::result::Result<GridSpec, String> {
    let (nu, nv) = s
        .split_once(['x', 'X'])
        .ok_or_else(|| format!("expected NUxNV, got `{s}`"))?;
    let nu: usize = nu.trim().parse().map_err(|_| format!("bad grid `{s}`"))?;
    let nv: usize = nv.trim().parse().map_err(|_| format!("bad grid `{s}`"))?;
    if nu < 2 || nv < 2 {
        return Err("grid needs at least 2x2 nodes".into());
    }
    Ok(GridSpec::new(nu, nv))
}

fn parse_complex(s: &str) -> std::result::Result<Complex64, String> {
    let (re, im) = s
        .split_once(',')
        .ok_or_else(|| format!("expected RE,IM, got `{s}`"))?;
    let re: f64 = re.trim().parse().map_err(|_| format!("bad number in `{s}`"))?;
    let im: f64 = im.trim().parse().map_err(|_| format!("bad number in `{s}`"))?;
    Ok(Complex64::new(re, im))
}

fn parse_mobius(s: &str) -> std::result::Result<MobiusArg, String> {
    let vals: Vec<f64> = s
        .split(',')
        .map(|p| p.trim().parse().map_err(|_| format!("bad number in `{s}`")))
        .collect::<std::result::Result<_, _>>()?;
    if vals.len() != 8 {
        return Err(format!("expected 8 reals, got {}", vals.len()));
    }
    let c = |k: usize| Complex64::new(vals[2 * k], vals[2 * k + 1]);
    Ok(MobiusArg(Matrix2::new(c(0), c(1), c(2), c(3))))
}

/// The on-disk surface description; unknown keys are rejected.
#[derive(Deserialize, Debug)]
#[serde(deny_unknown_fields)]
struct SurfaceFile {
    form: String,
    f: Option<String>,
    g1: Option<String>,
    g2: Option<String>,
    h1: Option<String>,
    h2: Option<String>,
    w1: Option<String>,
    w2: Option<String>,
    u_min: Option<f64>,
    u_max: Option<f64>,
    v_min: Option<f64>,
    v_max: Option<f64>,
    nu: Option<usize>,
    nv: Option<usize>,
}

pub fn load_surface(path: &Path) -> Result<(WeierData, GridSpec)> {
    let text =
        std::fs::read_to_string(path).map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
    parse_surface(&text)
}

pub fn parse_surface(text: &str) -> Result<(WeierData, GridSpec)> {
    let raw: SurfaceFile = toml::from_str(text).map_err(|e| Error::Config(e.to_string()))?;
    let need = |field: &Option<String>, name: &str| -> Result<Component> {
        match field {
            Some(s) => Component::parse(s),
            None => Err(Error::Config(format!(
                "form `{}` needs the key `{name}`",
                raw.form
            ))),
        }
    };
    let form = match raw.form.as_str() {
        "trig" => Form::Trig {
            f: need(&raw.f, "f")?,
            h1: need(&raw.h1, "h1")?,
            h2: need(&raw.h2, "h2")?,
        },
        "hyperbolic" => Form::Hyperbolic {
            f: need(&raw.f, "f")?,
            h1: need(&raw.h1, "h1")?,
            h2: need(&raw.h2, "h2")?,
        },
        "wform" => Form::WForm {
            f: need(&raw.f, "f")?,
            w1: need(&raw.w1, "w1")?,
            w2: need(&raw.w2, "w2")?,
        },
        "gform" => Form::GForm {
            f: need(&raw.f, "f")?,
            g1: need(&raw.g1, "g1")?,
            g2: need(&raw.g2, "g2")?,
        },
        "gform-canonical" => Form::GFormCanonical {
            g1: need(&raw.g1, "g1")?,
            g2: need(&raw.g2, "g2")?,
        },
        other => {
            return Err(Error::Config(format!(
                "unknown form `{other}` (expected trig, hyperbolic, wform, gform or gform-canonical)"
            )))
        }
    };
    let domain = Domain::new(
        raw.u_min.unwrap_or(-1.0),
        raw.u_max.unwrap_or(1.0),
        raw.v_min.unwrap_or(-1.0),
        raw.v_max.unwrap_or(1.0),
    );
    let grid = GridSpec::new(raw.nu.unwrap_or(21), raw.nv.unwrap_or(21));
    Ok((WeierData::new(form, domain), grid))
}

/// Serializes a surface whose components all have closed forms.
pub fn surface_to_toml(w: &WeierData, grid: GridSpec) -> Result<String> {
    let expr_of = |c: &Component, name: &str| -> Result<String> {
        match c.expr() {
            Some(e) => Ok(crate::holo::format_expr(e)),
            None => Err(Error::Config(format!(
                "component `{name}` has no closed form and cannot be written"
            ))),
        }
    };
    let mut out = String::new();
    let mut push = |key: &str, value: String| {
        let _ = writeln!(out, "{key} = {value:?}");
    };
    match &w.form {
        Form::Trig { f, h1, h2 } => {
            push("form", "trig".into());
            push("f", expr_of(f, "f")?);
            push("h1", expr_of(h1, "h1")?);
            push("h2", expr_of(h2, "h2")?);
        }
        Form::Hyperbolic { f, h1, h2 } => {
            push("form", "hyperbolic".into());
            push("f", expr_of(f, "f")?);
            push("h1", expr_of(h1, "h1")?);
            push("h2", expr_of(h2, "h2")?);
        }
        Form::WForm { f, w1, w2 } => {
            push("form", "wform".into());
            push("f", expr_of(f, "f")?);
            push("w1", expr_of(w1, "w1")?);
            push("w2", expr_of(w2, "w2")?);
        }
        Form::GForm { f, g1, g2 } => {
            push("form", "gform".into());
            push("f", expr_of(f, "f")?);
            push("g1", expr_of(g1, "g1")?);
            push("g2", expr_of(g2, "g2")?);
        }
        Form::GFormCanonical { g1, g2 } => {
            push("form", "gform-canonical".into());
            push("g1", expr_of(g1, "g1")?);
            push("g2", expr_of(g2, "g2")?);
        }
    }
    let _ = writeln!(out, "u_min = {:?}", w.domain.u_min);
    let _ = writeln!(out, "u_max = {:?}", w.domain.u_max);
    let _ = writeln!(out, "v_min = {:?}", w.domain.v_min);
    let _ = writeln!(out, "v_max = {:?}", w.domain.v_max);
    let _ = writeln!(out, "nu = {}", grid.nu);
    let _ = writeln!(out, "nv = {}", grid.nv);
    Ok(out)
}

fn fmt17(x: f64) -> String {
    format!("{x:.16e}")
}

/// CSV in the fixed column order; nu and mu are blank off canonical charts.
pub fn surface_to_csv(s: &SurfaceGrid) -> String {
    let mut out = String::from("u,v,x1,x2,x3,x4,E,K,kappa,nu,mu,degenerate\n");
    for node in &s.nodes {
        let nu = node.nu.map(fmt17).unwrap_or_default();
        let mu = node.mu.map(fmt17).unwrap_or_default();
        let _ = writeln!(
            out,
            "{},{},{},{},{},{},{},{},{},{},{},{}",
            fmt17(node.t.re),
            fmt17(node.t.im),
            fmt17(node.x[0]),
            fmt17(node.x[1]),
            fmt17(node.x[2]),
            fmt17(node.x[3]),
            fmt17(node.e),
            fmt17(node.k),
            fmt17(node.kappa),
            nu,
            mu,
            node.degenerate
        );
    }
    out
}

enum Projection {
    DropX4,
    DropX3,
    Ortho([[f64; 4]; 3]),
}

fn parse_projection(spec: &str) -> Result<Projection> {
    match spec {
        "drop-x4" => Ok(Projection::DropX4),
        "drop-x3" => Ok(Projection::DropX3),
        _ => {
            let rest = spec.strip_prefix("ortho:").ok_or_else(|| {
                Error::Config(format!(
                    "unknown projection `{spec}` (drop-x4, drop-x3 or ortho:...)"
                ))
            })?;
            let vals: Vec<f64> = rest
                .split(',')
                .map(|p| {
                    p.trim()
                        .parse()
                        .map_err(|_| Error::Config(format!("bad number in `{spec}`")))
                })
                .collect::<Result<_>>()?;
            if vals.len() != 12 {
                return Err(Error::Config(format!(
                    "orthographic projection needs 12 reals, got {}",
                    vals.len()
                )));
            }
            let mut m = [[0.0; 4]; 3];
            for r in 0..3 {
                m[r].copy_from_slice(&vals[4 * r..4 * r + 4]);
            }
            Ok(Projection::Ortho(m))
        }
    }
}

impl Projection {
    fn apply(&self, x: &[f64; 4]) -> [f64; 3] {
        match self {
            Projection::DropX4 => [x[0], x[1], x[2]],
            Projection::DropX3 => [x[0], x[1], x[3]],
            Projection::Ortho(m) => {
                let mut out = [0.0; 3];
                for r in 0..3 {
                    out[r] = (0..4).map(|c| m[r][c] * x[c]).sum();
                }
                out
            }
        }
    }
}

/// OBJ with row-major vertices and each grid quad split into two
/// triangles of consistent winding.
pub fn surface_to_obj(s: &SurfaceGrid, projection_spec: &str) -> Result<String> {
    let projection = parse_projection(projection_spec)?;
    let mut out = format!("# projection: {projection_spec}\n");
    for node in &s.nodes {
        let p = projection.apply(&node.x);
        let _ = writeln!(out, "v {} {} {}", fmt17(p[0]), fmt17(p[1]), fmt17(p[2]));
    }
    let (nu, nv) = (s.grid.nu, s.grid.nv);
    for i in 0..nv - 1 {
        for j in 0..nu - 1 {
            // OBJ indices are 1-based
            let v00 = i * nu + j + 1;
            let v01 = v00 + 1;
            let v10 = v00 + nu;
            let v11 = v10 + 1;
            let _ = writeln!(out, "f {v00} {v01} {v11}");
            let _ = writeln!(out, "f {v00} {v11} {v10}");
        }
    }
    Ok(out)
}

fn write_output(path: &Option<PathBuf>, content: &str) -> Result<()> {
    match path {
        Some(p) => std::fs::write(p, content)
            .map_err(|e| Error::Io(format!("{}: {e}", p.display()))),
        None => {
            print!("{content}");
            Ok(())
        }
    }
}

fn cmd_validate(opts: &CommonOpts) -> Result<()> {
    let (w, file_grid) = load_surface(&opts.input)?;
    let grid = opts.grid.unwrap_or(file_grid);
    let report = validate(&w, grid);
    println!("form: {}", w.kind().name());
    println!("grid: {}x{}", grid.nu, grid.nv);
    println!("f_zero: {}", report.f_zero_count);
    println!("derivative_condition: {}", report.derivative_count);
    println!("hermitian_condition: {}", report.hermitian_count);
    println!("branch_cut: {}", report.branch_cut_count);
    println!("eval_failed: {}", report.eval_failed_count);
    if report.ok() {
        println!("status: ok");
        Ok(())
    } else {
        println!("status: violations");
        for (i, j, t, flags) in report.violations() {
            println!("node: i={i} j={j} t={t} flags={flags:?}");
        }
        Err(Error::ConditionViolated {
            t: report
                .violations()
                .next()
                .map(|(_, _, t, _)| t)
                .unwrap_or_default(),
            msg: "validity conditions violated on the grid".into(),
        })
    }
}

fn sampled(opts: &CommonOpts, w: &WeierData, file_grid: GridSpec) -> Result<SurfaceGrid> {
    let grid = opts.grid.unwrap_or(file_grid);
    let t0 = opts.t0.unwrap_or_else(|| w.domain.center());
    sample(w, grid, t0)
}

fn cmd_sample(opts: &CommonOpts) -> Result<()> {
    let (w, file_grid) = load_surface(&opts.input)?;
    let s = sampled(opts, &w, file_grid)?;
    write_output(&opts.output, &surface_to_csv(&s))
}

fn cmd_mesh(opts: &CommonOpts, projection: &str) -> Result<()> {
    let (w, file_grid) = load_surface(&opts.input)?;
    let s = sampled(opts, &w, file_grid)?;
    write_output(&opts.output, &surface_to_obj(&s, projection)?)
}

fn cmd_canonize(opts: &CommonOpts) -> Result<()> {
    let (w, file_grid) = load_surface(&opts.input)?;
    let t0 = opts.t0.unwrap_or_else(|| w.domain.center());
    let (map, canonical) = canonize(&w, t0, CanonicalType::First)?;
    println!("t0: {t0}");
    println!("image_of_t0: {}", map.forward(t0)?);
    println!(
        "mapped_domain: [{}, {}] x [{}, {}]",
        canonical.domain.u_min, canonical.domain.u_max,
        canonical.domain.v_min, canonical.domain.v_max
    );
    let grid = opts.grid.unwrap_or(file_grid);
    let s = sample(&canonical, grid, Complex64::ZERO)?;
    write_output(&opts.output, &surface_to_csv(&s))
}

fn cmd_transform(opts: &CommonOpts, mobius: &MobiusArg) -> Result<()> {
    let (w, file_grid) = load_surface(&opts.input)?;
    let out = mobius_act(&w, &mobius.0, MotionVariant::ProperOrthochronous)?;
    let grid = opts.grid.unwrap_or(file_grid);
    write_output(&opts.output, &surface_to_toml(&out, grid)?)
}

fn cmd_associate(opts: &CommonOpts, phi: f64) -> Result<()> {
    let (w, file_grid) = load_surface(&opts.input)?;
    let member = if (phi - std::f64::consts::FRAC_PI_2).abs() < 1e-15 {
        conjugate(&w)?
    } else {
        associate(&w, phi)?
    };
    let s = sampled(opts, &member.data, file_grid)?;
    write_output(&opts.output, &surface_to_csv(&s))
}

fn cmd_report(opts: &CommonOpts) -> Result<()> {
    let (w, file_grid) = load_surface(&opts.input)?;
    let grid = opts.grid.unwrap_or(file_grid);
    let tol = opts.tol.unwrap_or(1e-9);
    let mut failed = false;
    let mut show = |name: &str, pass: bool, detail: String| {
        println!("{name}: {} ({detail})", if pass { "pass" } else { "fail" });
        failed |= !pass;
    };

    // validity conditions
    let report = validate(&w, grid);
    show(
        "validity",
        report.ok(),
        format!(
            "{} flagged of {} nodes",
            report.flags.iter().filter(|f| f.any()).count(),
            grid.len()
        ),
    );

    // isothermal identity Phi^2 = 0
    let mut max_sq = 0.0f64;
    let mut eval_ok = true;
    for (_, _, t) in grid.points(&w.domain) {
        match build_phi(&w, t) {
            Ok((phi, _)) => max_sq = max_sq.max(bilinear_dot(&phi, &phi).norm()),
            Err(_) => eval_ok = false,
        }
    }
    show(
        "isothermal",
        eval_ok && max_sq < 1e-10,
        format!("max |Phi^2| = {max_sq:.3e}"),
    );

    // curvature route agreement for g-forms
    if let Form::GForm { f, g1, g2 } = &w.form {
        let mut max_dev = 0.0f64;
        let mut checked = 0u32;
        for (_, _, t) in grid.points(&w.domain) {
            let (Ok(fj), Ok(g1j), Ok(g2j)) = (f.jet(t), g1.jet(t), g2.jet(t)) else {
                continue;
            };
            let (Ok((e1, k1, kap1)), Ok((phi, dphi))) =
                (curvatures_gform(&fj, &g1j, &g2j, t), build_phi(&w, t))
            else {
                continue;
            };
            let Ok(inv) = crate::surface::point_invariants(&phi, &dphi) else {
                continue;
            };
            max_dev = max_dev
                .max((e1 - inv.e).abs() / (1.0 + inv.e.abs()))
                .max((k1 - inv.k).abs() / (1.0 + inv.k.abs()))
                .max((kap1 - inv.kappa).abs() / (1.0 + inv.kappa.abs()));
            checked += 1;
        }
        show(
            "curvature_routes",
            checked > 0 && max_dev < tol,
            format!("max relative deviation {max_dev:.3e} over {checked} nodes"),
        );
    }

    // canonicity
    let first = is_canonical(&w, grid, CanonicalType::First);
    let second = is_canonical(&w, grid, CanonicalType::Second);
    println!(
        "canonical: {} (first: {first}, second: {second})",
        if first || second { "yes" } else { "no" }
    );

    let _ = file_grid;
    if failed {
        Err(Error::ConditionViolated {
            t: Complex64::ZERO,
            msg: "invariant report found failures".into(),
        })
    } else {
        Ok(())
    }
}

/// Runs a parsed command line; returns the process exit code.
pub fn run(cli: &Cli) -> i32 {
    let result = match &cli.command {
        Command::Validate(opts) => cmd_validate(opts),
        Command::Sample(opts) => cmd_sample(opts),
        Command::Mesh { common, projection } => cmd_mesh(common, projection),
        Command::Canonize(opts) => cmd_canonize(opts),
        Command::Transform { common, mobius } => cmd_transform(common, mobius),
        Command::Associate { common, phi } => cmd_associate(common, *phi),
        Command::Conjugate(opts) => cmd_associate(opts, std::f64::consts::FRAC_PI_2),
        Command::Report(opts) => cmd_report(opts),
    };
    match result {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("error: {e}");
            exit_code(&e)
        }
    }
}
