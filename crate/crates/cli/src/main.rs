//! `wedge`: build wedge products, check their surfaces, and write certified
//! realizations.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{Context, Result};
use clap::error::ErrorKind;
use clap::{CommandFactory, Parser, Subcommand, ValueEnum};
use serde_json::json;

use wedge_core::complex::PolygonComplex;
use wedge_core::exact::{parse_rational, Rational};
use wedge_core::export::{write_obj, write_off, DEFAULT_PRECISION};
use wedge_core::moduli::{moduli_report, DEFAULT_SAMPLES, DEFAULT_SEED};
use wedge_core::polytope::{make_polygon, make_simplex, wedge_product};
use wedge_core::projection::{
    build_prism_pipeline, check_preimages, default_delta, default_eps, default_m, realize_surface, Target,
};
use wedge_core::surface::{build_surface, check_flag_transitive, expected_genus};
use wedge_core::wpcombin::{wp_vertices, WpParams};

/// Largest p for which `moduli` also runs the numeric checks on sampled
/// realizations.
const MAX_SAMPLED_P: usize = 6;

#[derive(Parser)]
#[command(name = "wedge", version, about = "Wedge products, their polyhedral surfaces and certified realizations")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum TargetArg {
    #[value(name = "3")]
    Three,
    #[value(name = "4")]
    Four,
}

impl From<TargetArg> for Target {
    fn from(t: TargetArg) -> Self {
        match t {
            TargetArg::Three => Target::R3,
            TargetArg::Four => Target::R4,
        }
    }
}

#[derive(Subcommand)]
enum Command {
    /// Inequalities and combinatorial vertices of wp(p, q-1).
    Build {
        #[arg(long)]
        p: usize,
        #[arg(long, default_value_t = 2)]
        q: usize,
        /// JSON output file; printed to stdout when omitted.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Topology and symmetry checks for the surface Σ_{p,2q}.
    Surface {
        #[arg(long)]
        p: usize,
        #[arg(long, default_value_t = 2)]
        q: usize,
    },
    /// Certified realization of Σ_{p,4} in R^4 or R^3.
    Realize {
        #[arg(long)]
        p: usize,
        #[arg(long, value_parser = rational, default_value = "1/10")]
        eps: Rational,
        #[arg(long = "M", value_parser = rational, default_value = "64")]
        m: Rational,
        #[arg(long, value_enum, default_value = "3")]
        target: TargetArg,
        /// Mesh file (.off or .obj) for target 3, JSON for target 4; the
        /// certificate is written next to it.
        #[arg(long)]
        out: Option<PathBuf>,
        /// Significant digits in mesh files.
        #[arg(long, default_value_t = DEFAULT_PRECISION)]
        precision: usize,
    },
    /// Realization of the dual surface Σ*_{p,4} in R^3.
    Dual {
        #[arg(long)]
        p: usize,
        #[arg(long, value_parser = rational, default_value = "1/10")]
        eps: Rational,
        #[arg(long = "M", value_parser = rational, default_value = "64")]
        m: Rational,
        #[arg(long, value_parser = rational, default_value = "1/4")]
        delta: Rational,
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long, default_value_t = DEFAULT_PRECISION)]
        precision: usize,
    },
    /// Affine support set and moduli bounds for Σ_{p,4}.
    Moduli {
        #[arg(long)]
        p: usize,
        #[arg(long, default_value_t = DEFAULT_SEED)]
        seed: u64,
        /// JSON report file.
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

fn rational(s: &str) -> std::result::Result<Rational, String> {
    parse_rational(s).map_err(|e| e.to_string())
}

fn usage_error(msg: impl std::fmt::Display) -> ! {
    Cli::command().error(ErrorKind::ValueValidation, msg).exit()
}

fn require(ok: bool, msg: &str) {
    if !ok {
        usage_error(msg);
    }
}

fn write_file(path: &Path, contents: &str) -> Result<()> {
    fs::write(path, contents).with_context(|| format!("writing {}", path.display()))
}

/// `s54.off` -> `s54.cert.json`.
fn certificate_path(path: &Path) -> PathBuf {
    path.with_extension("cert.json")
}

fn mesh(r: &wedge_core::complex::RealizedComplex, path: Option<&Path>, precision: usize) -> Result<String> {
    let obj = path.and_then(Path::extension).is_some_and(|e| e.eq_ignore_ascii_case("obj"));
    Ok(if obj { write_obj(r, precision)? } else { write_off(r, precision)? })
}

/// Writes the main artifact to `out`, or stdout when absent; summaries go
/// to stdout in the first case and stderr in the second.
fn emit(out: Option<&Path>, artifact: &str, summary: &str) -> Result<()> {
    match out {
        Some(path) => {
            write_file(path, artifact)?;
            println!("{summary}");
        }
        None => {
            print!("{artifact}");
            eprintln!("{summary}");
        }
    }
    Ok(())
}

fn cmd_build(p: usize, q: usize, out: Option<PathBuf>) -> Result<bool> {
    require(p >= 3, "--p must be at least 3");
    require(q >= 2, "--q must be at least 2");
    let params = WpParams::new(p, q)?;
    let poly = wedge_product(&make_polygon(p)?, &make_simplex(q - 1)?)?;
    let vertices = wp_vertices(params);
    let summary = format!("dim {}, facets {}, vertices {}", poly.dim(), poly.num_facets(), vertices.len());
    let doc = json!({ "p": p, "q": q, "polytope": poly, "vertices": vertices });
    emit(out.as_deref(), &(serde_json::to_string_pretty(&doc)? + "\n"), &summary)?;
    Ok(true)
}

fn octahedron() -> Result<PolygonComplex> {
    let mut faces = Vec::new();
    for x in [0, 1] {
        for y in [2, 3] {
            for z in [4, 5] {
                faces.push(vec![x, y, z]);
            }
        }
    }
    Ok(PolygonComplex::from_faces(6, faces)?)
}

fn cmd_surface(p: usize, q: usize) -> Result<bool> {
    require(p >= 3, "--p must be at least 3");
    require(q >= 2, "--q must be at least 2");
    let params = WpParams::new(p, q)?;
    let s = build_surface(params)?;
    let [f0, f1, f2] = s.f_vector();
    let manifold = s.check_manifold();
    let connected = s.check_connected();
    let orientation = s.check_orientable();
    let genus = s.genus().ok();
    let genus_ok = genus == Some(expected_genus(params));
    let genus_text = genus.map_or_else(|| "?".to_string(), |g| g.to_string());
    let (regular, flags) = match check_flag_transitive(&s) {
        Ok(r) => (if r.transitive { "yes" } else { "no" }, format!("flags {}, orbit {}", r.flags, r.orbit)),
        Err(wedge_core::Error::GuardExceeded(n)) => ("unknown", format!("flag enumeration skipped: {n} flags exceed the guard")),
        Err(e) => return Err(e.into()),
    };
    println!("f=({f0},{f1},{f2}) genus={genus_text} regular={regular}");
    let yes = |b: bool| if b { "yes" } else { "no" };
    println!(
        "manifold={} connected={} orientable={} orientation-rule={}",
        yes(manifold),
        yes(connected),
        yes(orientation.orientable),
        yes(orientation.rule_consistent)
    );
    println!("{flags}");
    if s.complex().isomorphism(&octahedron()?).is_some() {
        println!("octahedron, genus {genus_text}");
    }
    Ok(manifold && connected && orientation.orientable && orientation.rule_consistent && genus_ok && regular != "no")
}

fn cmd_realize(p: usize, eps: Rational, m: Rational, target: Target, out: Option<PathBuf>, precision: usize) -> Result<bool> {
    require(p >= 3, "--p must be at least 3");
    require(eps > Rational::from_integer(0.into()), "--eps must be positive");
    require(m >= Rational::from_integer(2.into()), "--M must be at least 2");
    let r = realize_surface(p, &eps, &m, target)?;
    let s = build_surface(WpParams::new(p, 2)?)?;
    let certificates_ok = r.report.ok() && r.report.verify(&r.deformed);
    let preimages_ok = check_preimages(&r.deformed, &s);
    let ok = certificates_ok && preimages_ok;
    let [f0, _, f2] = r.realized.complex.f_vector();
    let summary = format!(
        "Σ_{{{p},4}} in R^{}: vertices {f0}, faces {f2}, eps {}, M {}, escalations {}, embedding check {:?}, certificates {}",
        target.dim(),
        r.deformed.eps,
        r.deformed.m,
        r.deformed.escalations,
        r.embedding,
        if ok { "verified" } else { "FAILED" }
    );
    let certificate = serde_json::to_string_pretty(&json!({
        "certificates_verified": certificates_ok,
        "preimages_verified": preimages_ok,
        "realization": r,
    }))? + "\n";
    match target {
        Target::R4 => emit(out.as_deref(), &certificate, &summary)?,
        Target::R3 => {
            let text = mesh(&r.realized, out.as_deref(), precision)?;
            if let Some(path) = &out {
                write_file(&certificate_path(path), &certificate)?;
            }
            emit(out.as_deref(), &text, &summary)?;
        }
    }
    Ok(ok)
}

fn cmd_dual(p: usize, eps: Rational, m: Rational, delta: Rational, out: Option<PathBuf>, precision: usize) -> Result<bool> {
    require((4..=5).contains(&p), "--p must be 4 or 5 for the dual pipeline");
    require(eps > Rational::from_integer(0.into()), "--eps must be positive");
    require(m >= Rational::from_integer(2.into()), "--M must be at least 2");
    require(delta > Rational::from_integer(0.into()), "--delta must be positive");
    let d = build_prism_pipeline(p, &eps, &m, &delta)?;
    let ok = d.report.ok() && d.preservation.verify(&d.deformed);
    let [f0, f1, f2] = d.sigma_star.complex.f_vector();
    let summary = format!(
        "Σ*_{{{p},4}} in R^3: f=({f0},{f1},{f2}), projected polytope f={:?}, Schlegel facet {}, certificates {}",
        d.report.projected_f_vector,
        d.report.schlegel_facet,
        if ok { "verified" } else { "FAILED" }
    );
    let text = mesh(&d.sigma_star, out.as_deref(), precision)?;
    if let Some(path) = &out {
        let cert = json!({ "certificates_verified": ok, "pipeline": d });
        write_file(&certificate_path(path), &(serde_json::to_string_pretty(&cert)? + "\n"))?;
    }
    emit(out.as_deref(), &text, &summary)?;
    Ok(ok)
}

fn cmd_moduli(p: usize, seed: u64, out: Option<PathBuf>) -> Result<bool> {
    require(p >= 3, "--p must be at least 3");
    let samples = if p <= MAX_SAMPLED_P { DEFAULT_SAMPLES } else { 0 };
    let r = moduli_report(p, samples, seed)?;
    print!("{}", r.table());
    let bound = r.support_bound.map_or_else(|| "-".to_string(), |b| b.to_string());
    if r.naive_estimate < 0 {
        println!("naive {} (vacuous), bound {bound}", r.naive_estimate);
    } else {
        println!("support set {} vertices, bound {bound}, naive {}", r.support.len(), r.naive_estimate);
    }
    if let Some(path) = out {
        write_file(&path, &(serde_json::to_string_pretty(&r)? + "\n"))?;
    }
    Ok(r.verified() && r.naive_estimate == r.naive_closed_form)
}

fn run(cli: Cli) -> Result<bool> {
    match cli.command {
        Command::Build { p, q, out } => cmd_build(p, q, out),
        Command::Surface { p, q } => cmd_surface(p, q),
        Command::Realize { p, eps, m, target, out, precision } => {
            cmd_realize(p, eps, m, target.into(), out, precision)
        }
        Command::Dual { p, eps, m, delta, out, precision } => cmd_dual(p, eps, m, delta, out, precision),
        Command::Moduli { p, seed, out } => cmd_moduli(p, seed, out),
    }
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::new().filter_or("WEDGE_LOG", "error")).init();
    // keep the documented defaults and the library's in sync
    debug_assert!(default_eps() == parse_rational("1/10").unwrap());
    debug_assert!(default_m() == parse_rational("64").unwrap());
    debug_assert!(default_delta() == parse_rational("1/4").unwrap());
    match run(Cli::parse()) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => {
            eprintln!("error: a certificate or check failed");
            ExitCode::from(1)
        }
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(1)
        }
    }
}
