use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use num_complex::Complex64;
use orbitavg::averaging::{self, HomologicalMode, PeriodicFlow};
use orbitavg::corrections::{self, TorusGrid};
use orbitavg::spectra::{self, BarrierParams, ClusterRectangles, KWindow, LatticePoint, PeriodProfile, QuasiEigLattice, TorusData, WidthConstants};
use orbitavg::sphere;
use orbitavg::symbolalg::{json, parse_poly};
use orbitavg::verify::{self, export, SphereOperatorSpec};
use orbitavg::{Error, PolySymbol, Result};
use serde::Serialize;

#[derive(Parser)]
#[command(name = "orbitavg", version, about = "Averaging, normal forms and spectral clusters for periodic Hamiltonian flows")]
struct Cli {
    /// Plain-text `key = value` file supplying defaults for the subcommand's flags.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Trajectory average of a symbol under the harmonic flow.
    Average(AverageArgs),
    /// Solve the homological equation H_p G = f − ⟨f⟩.
    Homological(HomologicalArgs),
    /// Second and third averaged corrections, or the barrier-top function.
    Corrections(CorrectionsArgs),
    /// Double averages of ⟨t⟩ along the ⟨s⟩ flow and the separation check.
    Hypothesis(HypothesisArgs),
    /// Radon transform of a sphere symbol and its circle-space form.
    SphereRadon(SymbolArg),
    /// Second correction for −h²Δ + iεq on the sphere.
    SphereS(SymbolArg),
    /// Quasi-eigenvalue lattice from a JSON description.
    Lattice(LatticeArgs),
    /// Cluster rectangles (sphere, or from a profile and torus).
    Rectangles(RectanglesArgs),
    /// Eigenvalues of −h²Δ + iεq on a window of spherical harmonics.
    Spectrum(SpectrumArgs),
    /// Cluster a computed spectrum against predicted rectangles.
    Verify(VerifyArgs),
}

#[derive(Args)]
struct AverageArgs {
    /// Frequencies, comma separated.
    #[arg(long, value_delimiter = ',', required = true)]
    lambda: Vec<i64>,
    /// Symbol as an expression or a `.json` file.
    #[arg(long)]
    f: String,
}

#[derive(Args)]
struct HomologicalArgs {
    #[arg(long, value_delimiter = ',', required = true)]
    lambda: Vec<i64>,
    #[arg(long)]
    f: String,
    /// `weighted` or `minimal`.
    #[arg(long, default_value = "weighted")]
    mode: String,
}

#[derive(Args)]
struct CorrectionsArgs {
    #[arg(long, value_delimiter = ',', required = true)]
    lambda: Vec<i64>,
    #[arg(long)]
    q: String,
    #[arg(long, default_value = "0")]
    r: String,
    #[arg(long)]
    w: Option<String>,
    /// Treat q and r as p₃ and p₄ and print the barrier-top function.
    #[arg(long)]
    barrier: bool,
}

#[derive(Args)]
struct HypothesisArgs {
    /// Function averaged along the secondary flow (usually ⟨t⟩).
    #[arg(long)]
    base: String,
    /// ⟨s⟩ generating the secondary flow.
    #[arg(long)]
    s_avg: String,
    #[arg(long)]
    reference: f64,
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true, required = true)]
    offsets: Vec<f64>,
    #[arg(long, default_value_t = 16)]
    angles: usize,
    /// Initial averaging time.
    #[arg(long, default_value_t = 1.0)]
    t: f64,
    #[arg(long)]
    a: f64,
    #[arg(long, value_delimiter = ',', required = true)]
    b: Vec<f64>,
    #[arg(long, default_value_t = 64.0)]
    t_max: f64,
}

#[derive(Args)]
struct SymbolArg {
    #[arg(long)]
    q: String,
}

#[derive(Args)]
struct LatticeArgs {
    /// JSON file holding a quasi-eigenvalue lattice, or barrier parameters with `--barrier`.
    #[arg(long)]
    spec: PathBuf,
    #[arg(long, value_parser = parse_range, allow_hyphen_values = true)]
    k1: (i64, i64),
    #[arg(long, value_parser = parse_range, allow_hyphen_values = true)]
    k2: (i64, i64),
    #[arg(long)]
    barrier: bool,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct RectanglesArgs {
    #[arg(long)]
    h: f64,
    #[arg(long)]
    eps: f64,
    #[arg(long)]
    lmin: Option<u32>,
    #[arg(long)]
    lmax: Option<u32>,
    #[arg(long, default_value_t = 3.0)]
    c_re: f64,
    #[arg(long, default_value_t = 10.0)]
    c_im: f64,
    /// Period profile JSON (general mode).
    #[arg(long)]
    profile: Option<PathBuf>,
    /// Torus data JSON (general mode).
    #[arg(long)]
    torus: Option<PathBuf>,
    #[arg(long, value_parser = parse_frange, allow_hyphen_values = true)]
    window: Option<(f64, f64)>,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct SpectrumArgs {
    #[arg(long)]
    h: f64,
    #[arg(long)]
    eps: f64,
    #[arg(long)]
    q: String,
    #[arg(long)]
    lmin: u32,
    #[arg(long)]
    lmax: u32,
    #[arg(long, default_value_t = 6)]
    pad: u32,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct VerifyArgs {
    #[arg(long)]
    spectrum: PathBuf,
    #[arg(long)]
    rectangles: PathBuf,
    /// Lattice CSV with columns k1,k2,re,im.
    #[arg(long)]
    lattice: Option<PathBuf>,
    #[arg(long)]
    out: Option<PathBuf>,
}

fn parse_range(s: &str) -> std::result::Result<(i64, i64), String> {
    let (a, b) = s.split_once(':').ok_or("expected lo:hi")?;
    Ok((a.trim().parse().map_err(|e| format!("{e}"))?, b.trim().parse().map_err(|e| format!("{e}"))?))
}

fn parse_frange(s: &str) -> std::result::Result<(f64, f64), String> {
    let (a, b) = s.split_once(':').ok_or("expected lo:hi")?;
    Ok((a.trim().parse().map_err(|e| format!("{e}"))?, b.trim().parse().map_err(|e| format!("{e}"))?))
}

fn read_poly(arg: &str, n: Option<usize>) -> Result<PolySymbol> {
    if arg.ends_with(".json") && Path::new(arg).exists() {
        json::from_json(&fs::read_to_string(arg)?)
    } else {
        parse_poly(arg, n, None)
    }
}

fn emit<T: Serialize>(value: &T, out: Option<&Path>) -> Result<()> {
    match out {
        Some(p) => export::save_json(p, value),
        None => {
            let mut w = std::io::stdout().lock();
            match serde_json::to_writer_pretty(&mut w, value).map_err(std::io::Error::from).and_then(|_| writeln!(w)) {
                Err(e) if e.kind() == std::io::ErrorKind::BrokenPipe => Ok(()),
                r => Ok(r?),
            }
        }
    }
}

#[derive(Serialize)]
struct SymbolOut {
    expr: String,
    symbol: PolySymbol,
}

fn sym(p: PolySymbol) -> SymbolOut {
    SymbolOut { expr: p.to_expr(), symbol: p }
}

/// Append `--key=value` for every config entry not already given on the command line.
fn apply_config(mut argv: Vec<String>) -> Result<Vec<String>> {
    let Some(pos) = argv.iter().position(|a| a == "--config" || a.starts_with("--config=")) else {
        return Ok(argv);
    };
    let path = match argv[pos].strip_prefix("--config=") {
        Some(p) => p.to_string(),
        None => argv.get(pos + 1).cloned().ok_or_else(|| Error::Parse("--config needs a path".into()))?,
    };
    let text = fs::read_to_string(&path)?;
    let mut extra = Vec::new();
    for (no, line) in text.lines().enumerate() {
        let line = line.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let (k, v) = line
            .split_once('=')
            .ok_or_else(|| Error::Parse(format!("{path}:{}: expected key = value", no + 1)))?;
        let flag = format!("--{}", k.trim().replace('_', "-"));
        let given = argv.iter().any(|a| *a == flag || a.starts_with(&format!("{flag}=")));
        if !given {
            let v = v.trim();
            extra.push(if v == "true" { flag } else { format!("{flag}={v}") });
        }
    }
    argv.extend(extra);
    Ok(argv)
}

fn read_lattice_csv(path: &Path) -> Result<Vec<LatticePoint>> {
    let mut rd = csv::Reader::from_path(path).map_err(|e| Error::Io(e.to_string()))?;
    let mut out = Vec::new();
    for rec in rd.records() {
        let rec = rec.map_err(|e| Error::Parse(e.to_string()))?;
        let f = |i: usize| rec.get(i).ok_or_else(|| Error::Parse("lattice rows need k1,k2,re,im".into()));
        let num = |s: &str| s.trim().parse::<f64>().map_err(|e| Error::Parse(e.to_string()));
        out.push(LatticePoint {
            k: [num(f(0)?)? as i64, num(f(1)?)? as i64],
            z: Complex64::new(num(f(2)?)?, num(f(3)?)?),
        });
    }
    Ok(out)
}

fn run(cli: Cli) -> Result<()> {
    match cli.cmd {
        Cmd::Average(a) => {
            let flow = PeriodicFlow::new(a.lambda.clone())?;
            let f = read_poly(&a.f, Some(a.lambda.len()))?;
            emit(&sym(averaging::average(&flow, &f)?), None)
        }
        Cmd::Homological(a) => {
            let flow = PeriodicFlow::new(a.lambda.clone())?;
            let f = read_poly(&a.f, Some(a.lambda.len()))?;
            let mode = match a.mode.as_str() {
                "weighted" => HomologicalMode::Weighted,
                "minimal" => HomologicalMode::Minimal,
                m => return Err(Error::Parse(format!("unknown mode {m}"))),
            };
            emit(&sym(averaging::solve_homological(&flow, &f, mode)?), None)
        }
        Cmd::Corrections(a) => {
            let n = a.lambda.len();
            let flow = PeriodicFlow::new(a.lambda)?;
            let q = read_poly(&a.q, Some(n))?;
            let r = read_poly(&a.r, Some(n))?;
            if a.barrier {
                return emit(&sym(corrections::barrier_s(&flow, &q, &r)?), None);
            }
            let w = a.w.as_deref().map(|w| read_poly(w, Some(n))).transpose()?;
            emit(&corrections::correction_bundle(&flow, &q, &r, w.as_ref())?, None)
        }
        Cmd::Hypothesis(a) => {
            let base = read_poly(&a.base, Some(3))?;
            let s = read_poly(&a.s_avg, Some(3))?;
            let grid = TorusGrid::Levels { reference: a.reference, offsets: a.offsets, angles: a.angles, anchor: None };
            let bundle = corrections::double_average(&base, &s, a.t, &grid)?;
            emit(&corrections::check_global_hypothesis(&bundle, a.a, &a.b, a.t_max)?, None)
        }
        Cmd::SphereRadon(a) => {
            let q = read_poly(&a.q, Some(3))?;
            let avg = sphere::radon_average(&q)?;
            let reduced = sphere::reduce_to_circle_space(&avg)?;
            #[derive(Serialize)]
            struct Out {
                radon: SymbolOut,
                reduced: SymbolOut,
            }
            emit(&Out { radon: sym(avg), reduced: sym(reduced) }, None)
        }
        Cmd::SphereS(a) => {
            let q = read_poly(&a.q, Some(3))?;
            emit(&sphere::sphere_second_correction(&q)?, None)
        }
        Cmd::Lattice(a) => {
            let text = fs::read_to_string(&a.spec)?;
            let window = KWindow { k1: a.k1, k2: a.k2 };
            if a.barrier {
                let params: BarrierParams = serde_json::from_str(&text)?;
                emit(&spectra::barrier_lattice(&params, window)?, a.out.as_deref())
            } else {
                let lat: QuasiEigLattice = serde_json::from_str(&text)?;
                emit(&spectra::quasi_lattice(&lat, window)?, a.out.as_deref())
            }
        }
        Cmd::Rectangles(a) => {
            let rects: ClusterRectangles = match (&a.profile, &a.torus) {
                (Some(p), Some(t)) => {
                    let profile: PeriodProfile = export::load_json(p)?;
                    let torus: TorusData = export::load_json(t)?;
                    let window = a.window.ok_or_else(|| Error::Precondition("--window is required with --profile".into()))?;
                    let widths = WidthConstants { re: a.c_re, im: a.c_im, real_s: true };
                    spectra::cluster_rectangles(&spectra::build_profile(profile)?, &torus, a.h, a.eps, window, widths)
                }
                (None, None) => {
                    let (lo, hi) = a.lmin.zip(a.lmax).ok_or_else(|| Error::Precondition("--lmin and --lmax are required".into()))?;
                    verify::sphere_rectangles(a.h, a.eps, lo, hi, a.c_re, a.c_im)
                }
                _ => return Err(Error::Precondition("--profile and --torus go together".into())),
            };
            emit(&rects, a.out.as_deref())
        }
        Cmd::Spectrum(a) => {
            let q = read_poly(&a.q, Some(3))?;
            let spec = SphereOperatorSpec { h: a.h, epsilon: a.eps, q, l_min: a.lmin, l_max: a.lmax, pad: a.pad };
            let op = verify::assemble(&spec)?;
            let eigs = op.eigenvalues()?;
            let rows = export::spectrum_rows(&eigs, None);
            match a.out {
                Some(p) => export::save_spectrum_csv(&p, &rows),
                None => export::write_spectrum_csv(std::io::stdout().lock(), &rows),
            }
        }
        Cmd::Verify(a) => {
            let rows = export::load_spectrum_csv(&a.spectrum)?;
            let rects: ClusterRectangles = export::load_json(&a.rectangles)?;
            let eigs: Vec<Complex64> = rows.iter().map(|r| Complex64::new(r.re, r.im)).collect();
            let window = verify::clusters::report_window(&rects).ok_or_else(|| Error::Precondition("no rectangles".into()))?;
            let eigs = verify::clusters::in_window(&eigs, window);
            let lattice = a.lattice.as_deref().map(read_lattice_csv).transpose()?;
            emit(&verify::extract_clusters(&eigs, &rects, lattice.as_deref())?, a.out.as_deref())
        }
    }
}

fn main() -> ExitCode {
    let argv = match apply_config(std::env::args().collect()) {
        Ok(a) => a,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(2);
        }
    };
    let cli = Cli::parse_from(argv);
    if let Some(n) = std::env::var("ORBITAVG_THREADS").ok().and_then(|v| v.parse::<usize>().ok()) {
        let _ = rayon::ThreadPoolBuilder::new().num_threads(n.max(1)).build_global();
    }
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::FAILURE
        }
    }
}
