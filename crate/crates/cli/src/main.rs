//! `wp-geom`: command-line front end for the wp-geom library.
//!
//! Exit codes: 0 success, 1 a check failed, 2 usage or input error, 3 I/O error.
//! `WP_GEOM_THREADS` caps the worker pool.

mod output;

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_complex::Complex64;
use serde::Serialize;
use serde_json::json;

use output::{to_json, Table};
use wp_geom::cat0_engine::{fr_diagnostic, CuspSpace, Euclidean, FrReport, HyperbolicPlane, ProductCuspSpace, Side};
use wp_geom::circle_fields::{self as circle, FourierVectorField, HarmonicTest, PairingConstants};
use wp_geom::coxeter_curves::{self as cox, CurveSystem, Word};
use wp_geom::cusp_model::{self as cusp, CuspPoint, CuspTangent, ModelParams, ProductCuspPoint};
use wp_geom::funk_metrics::{self as funk, ConvexPolytope};
use wp_geom::harmonic_energy::energy_profile;
use wp_geom::torus_teich::{self as torus, TangentTT, TorusPoint};
use wp_geom::verify::{self, SampleSpace, CRITERIA};
use wp_geom::GeomError;

#[derive(Parser)]
#[command(name = "wp-geom", version, about = "Computable Weil-Petersson geometry")]
struct Cli {
    /// Output format for tabular results; scalar results are always JSON.
    #[arg(long, global = true, value_enum, default_value_t = Format::Csv)]
    format: Format,
    /// Write the result here instead of standard output.
    #[arg(long, short, global = true)]
    output: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Csv,
    Json,
}

#[derive(Subcommand)]
enum Command {
    /// Torus Teichmüller space.
    #[command(subcommand)]
    Torus(TorusCmd),
    /// Harmonic-map energy along WP geodesics.
    #[command(subcommand)]
    Energy(EnergyCmd),
    /// The cusp model near a one-node stratum.
    #[command(subcommand)]
    Cusp(CuspCmd),
    /// Funk and Hilbert metrics of a polytope.
    Funk(FunkArgs),
    /// CAT(0) diagnostics.
    #[command(subcommand)]
    Cat0(Cat0Cmd),
    /// Coxeter groups of curve systems.
    #[command(subcommand)]
    Coxeter(CoxeterCmd),
    /// Vector fields on the circle.
    #[command(subcommand)]
    Circle(CircleCmd),
    /// Run acceptance criteria.
    Verify(VerifyArgs),
}

#[derive(Subcommand)]
enum TorusCmd {
    /// Point of the WP geodesic from tau with initial TT velocity diag-free (a, b).
    Geodesic {
        #[arg(long, allow_hyphen_values = true)]
        tau: String,
        /// Traceless velocity components `a,b` (h = a·TT₁ + b·TT₂ in the normalized frame).
        #[arg(long, allow_hyphen_values = true)]
        h: String,
        #[arg(long, allow_hyphen_values = true)]
        t: f64,
    },
    /// WP distance.
    Dist(PairArgs),
    /// Teichmüller distance as a supremum over curve classes.
    TeichDist(CutoffArgs),
    /// Thurston's asymmetric metric.
    Thurston(CutoffArgs),
    /// Gauss curvature estimate of the WP metric.
    Curvature {
        #[arg(long, allow_hyphen_values = true)]
        tau: String,
        #[arg(long, default_value_t = 1e-2)]
        scale: f64,
    },
}

#[derive(Args)]
struct PairArgs {
    #[arg(long, allow_hyphen_values = true)]
    tau1: String,
    #[arg(long, allow_hyphen_values = true)]
    tau2: String,
}

#[derive(Args)]
struct CutoffArgs {
    #[command(flatten)]
    pair: PairArgs,
    #[arg(long, default_value_t = 50)]
    cutoff: u32,
}

#[derive(Subcommand)]
enum EnergyCmd {
    /// CSV `t,E,E_second` along the WP geodesic from tau0.
    Profile {
        #[arg(long, allow_hyphen_values = true)]
        tau0: String,
        #[arg(long, allow_hyphen_values = true)]
        h: String,
        /// `t0:t1`.
        #[arg(long, allow_hyphen_values = true, default_value = "-1:1")]
        range: String,
        #[arg(long, default_value_t = 201)]
        samples: usize,
    },
}

#[derive(Subcommand)]
enum CuspCmd {
    /// Integrate a geodesic; CSV `t,u,theta,v_radial,v_angular`.
    Geodesic {
        #[arg(long)]
        u0: f64,
        #[arg(long, allow_hyphen_values = true, default_value_t = 0.0)]
        theta0: f64,
        /// Initial velocity `radial,angular` (orthonormal frame).
        #[arg(long, allow_hyphen_values = true)]
        v: String,
        #[arg(long = "T")]
        t_end: f64,
        #[arg(long, default_value_t = 100)]
        samples: usize,
        #[arg(long)]
        prefactor: Option<f64>,
    },
    /// Gaussian curvature at u.
    Curvature {
        #[arg(long)]
        u: f64,
        #[arg(long)]
        prefactor: Option<f64>,
    },
    /// Distance to the stratum, closed form and integrated.
    StrataDistance {
        #[arg(long)]
        u: f64,
        #[arg(long)]
        prefactor: Option<f64>,
    },
    /// Distance between `u,theta` points.
    Dist {
        #[arg(long, allow_hyphen_values = true)]
        p: String,
        #[arg(long, allow_hyphen_values = true)]
        q: String,
        #[arg(long)]
        prefactor: Option<f64>,
    },
}

#[derive(Args)]
struct FunkArgs {
    /// Lines `a_1 … a_d b` for half-spaces `a·x ≤ b`.
    #[arg(long)]
    polytope: PathBuf,
    #[arg(long, allow_hyphen_values = true)]
    x: String,
    #[arg(long, allow_hyphen_values = true)]
    y: String,
    #[arg(long, value_enum, default_value_t = FunkMode::Sup)]
    mode: FunkMode,
}

#[derive(Clone, Copy, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
enum FunkMode {
    Ray,
    Sup,
    Hilbert,
}

#[derive(Subcommand)]
enum Cat0Cmd {
    /// Sampled comparison-inequality slack.
    Check {
        #[arg(long)]
        space: String,
        #[arg(long, default_value_t = 1000)]
        trials: usize,
        #[arg(long, default_value_t = 42)]
        seed: u64,
    },
    /// Diameter over circumradius of a point file.
    Fr {
        #[arg(long)]
        space: String,
        /// One point per line: coordinates (euclid), `x y` (h2), `u theta`
        /// (cusp), `u1 theta1 u2 theta2 …` (product-cusp), `L|R x y`
        /// (glued-halfplanes).
        #[arg(long)]
        points: PathBuf,
    },
}

#[derive(Subcommand)]
enum CoxeterCmd {
    /// Coxeter matrix of a curve system.
    Matrix {
        #[arg(long)]
        curves: PathBuf,
    },
    /// Normal form of a word (default system: the genus-two curves).
    Reduce {
        #[arg(long)]
        word: String,
        #[arg(long)]
        curves: Option<PathBuf>,
    },
    /// Growth series by breadth-first enumeration.
    Enumerate {
        #[arg(long, default_value_t = 8)]
        maxlen: usize,
        #[arg(long)]
        curves: Option<PathBuf>,
    },
}

#[derive(Subcommand)]
enum CircleCmd {
    /// WP pairing, KK form and norms of coefficient files.
    Pair {
        #[arg(long)]
        coeffs: PathBuf,
        /// Second field (defaults to the first).
        #[arg(long)]
        with: Option<PathBuf>,
        #[arg(long, default_value_t = 0.5)]
        b: f64,
    },
    /// Conjugate function of `Σ cos(mθ)` over the given modes; CSV `theta,u,hu`.
    Hilbert {
        #[arg(long, value_delimiter = ',')]
        modes: Vec<u32>,
        #[arg(long, default_value_t = 128)]
        samples: usize,
    },
    /// Ahlfors projection of `y² conj(φ)` for `φ = (eta+A)^-N`.
    Ahlfors {
        #[arg(long)]
        phi: String,
        #[arg(long, allow_hyphen_values = true)]
        z: String,
        #[arg(long, default_value_t = 1e-6)]
        tol: f64,
    },
}

#[derive(Args)]
struct VerifyArgs {
    /// `all` or a comma-separated list of criterion numbers.
    #[arg(long, default_value = "all")]
    suite: String,
    #[arg(long, default_value_t = 42)]
    seed: u64,
}

/// Failure modes mapped to exit codes.
enum Failure {
    Check(String),
    Usage(String),
    Io(String),
}

impl From<GeomError> for Failure {
    fn from(e: GeomError) -> Self {
        match e {
            GeomError::NonConvergence { .. } | GeomError::SingularMode { .. } => Failure::Check(e.to_string()),
            _ => Failure::Usage(e.to_string()),
        }
    }
}

type Outcome = std::result::Result<Report, Failure>;

/// What a command produced, and whether its checks passed.
struct Report {
    text: String,
    pass: bool,
}

impl Report {
    fn ok(text: String) -> Self {
        Self { text, pass: true }
    }
}

fn usage(msg: impl Into<String>) -> Failure {
    Failure::Usage(msg.into())
}

fn parse_complex(s: &str) -> Result<Complex64, Failure> {
    Ok(circle::parse_complex(s)?)
}

fn parse_list(s: &str) -> Result<Vec<f64>, Failure> {
    s.split(',').map(|v| v.trim().parse::<f64>().map_err(|e| usage(format!("`{v}`: {e}")))).collect()
}

fn parse_pair(s: &str) -> Result<(f64, f64), Failure> {
    match parse_list(s)?.as_slice() {
        [a, b] => Ok((*a, *b)),
        _ => Err(usage(format!("expected two comma-separated numbers, got `{s}`"))),
    }
}

fn read(path: &Path) -> Result<String, Failure> {
    std::fs::read_to_string(path).map_err(|e| Failure::Io(format!("{}: {e}", path.display())))
}

fn params(prefactor: Option<f64>) -> Result<ModelParams, Failure> {
    Ok(prefactor.map(ModelParams::new).transpose()?.unwrap_or_default())
}

fn table(t: Table, format: Format) -> String {
    match format {
        Format::Csv => t.to_csv(),
        Format::Json => t.to_json(),
    }
}

fn run(cli: &Cli) -> Outcome {
    match &cli.command {
        Command::Torus(c) => run_torus(c),
        Command::Energy(EnergyCmd::Profile { tau0, h, range, samples }) => {
            let base = TorusPoint::from_tau(parse_complex(tau0)?)?;
            let (a, b) = parse_pair(h)?;
            let (t0, t1) = range
                .split_once(':')
                .and_then(|(a, b)| Some((a.parse().ok()?, b.parse().ok()?)))
                .ok_or_else(|| usage(format!("range must be `t0:t1`, got `{range}`")))?;
            let p = energy_profile(&TangentTT::from_components(base, a, b), (t0, t1), *samples)?;
            let last = p.t.len() - 1;
            let rows = (0..p.t.len())
                .map(|k| {
                    let second = (k > 0 && k < last).then(|| p.second[k - 1]);
                    vec![Some(p.t[k]), Some(p.energy[k]), second]
                })
                .collect();
            Ok(Report::ok(table(Table { headers: vec!["t", "E", "E_second"], rows }, cli.format)))
        }
        Command::Cusp(c) => run_cusp(c, cli.format),
        Command::Funk(a) => {
            let omega = ConvexPolytope::from_text(&read(&a.polytope)?)?;
            let (x, y) = (parse_list(&a.x)?, parse_list(&a.y)?);
            let value = match a.mode {
                FunkMode::Ray => funk::funk_ray(&omega, &x, &y)?,
                FunkMode::Sup => funk::funk_sup(&omega, &x, &y)?,
                FunkMode::Hilbert => funk::hilbert(&omega, &x, &y)?,
            };
            Ok(Report::ok(to_json(&json!({ "value": value, "mode": a.mode }))))
        }
        Command::Cat0(c) => run_cat0(c),
        Command::Coxeter(c) => run_coxeter(c),
        Command::Circle(c) => run_circle(c, cli.format),
        Command::Verify(a) => {
            let ids: Vec<u8> = if a.suite == "all" {
                CRITERIA.iter().map(|c| c.0).collect()
            } else {
                a.suite
                    .split(',')
                    .map(|s| s.trim().parse().map_err(|_| usage(format!("bad criterion `{s}`"))))
                    .collect::<Result<_, _>>()?
            };
            let report = verify::run_suite(&ids, a.seed)?;
            for c in &report.criteria {
                eprintln!("{} {:>2} {} ({:.3}s)", if c.pass { "PASS" } else { "FAIL" }, c.id, c.title, c.seconds);
            }
            Ok(Report { text: to_json(&report), pass: report.pass })
        }
    }
}

fn run_torus(c: &TorusCmd) -> Outcome {
    let point = |s: &str| -> Result<TorusPoint, Failure> { Ok(TorusPoint::from_tau(parse_complex(s)?)?) };
    let text = match c {
        TorusCmd::Geodesic { tau, h, t } => {
            let (a, b) = parse_pair(h)?;
            let g = torus::wp_geodesic(&TangentTT::from_components(point(tau)?, a, b), *t);
            let m = g.metric();
            to_json(&json!({ "tau": [g.tau().re, g.tau().im], "metric": [m.g11(), m.g12(), m.g22()] }))
        }
        TorusCmd::Dist(p) => to_json(&json!({ "value": torus::wp_distance(&point(&p.tau1)?, &point(&p.tau2)?) })),
        TorusCmd::TeichDist(a) => {
            to_json(&torus::teich_distance_ext(&point(&a.pair.tau1)?, &point(&a.pair.tau2)?, a.cutoff)?)
        }
        TorusCmd::Thurston(a) => to_json(&torus::thurston_metric(&point(&a.pair.tau1)?, &point(&a.pair.tau2)?, a.cutoff)?),
        TorusCmd::Curvature { tau, scale } => to_json(&torus::estimate_curvature(parse_complex(tau)?, *scale)?),
    };
    Ok(Report::ok(text))
}

fn run_cusp(c: &CuspCmd, format: Format) -> Outcome {
    let text = match c {
        CuspCmd::Geodesic { u0, theta0, v, t_end, samples, prefactor } => {
            let (radial, angular) = parse_pair(v)?;
            let path = cusp::geodesic(
                &CuspPoint::new(*u0, *theta0)?,
                &CuspTangent { radial, angular },
                *t_end,
                *samples,
                &params(*prefactor)?,
            )?;
            let rows = path
                .samples
                .iter()
                .map(|s| [s.t, s.point.u, s.point.theta, s.velocity.radial, s.velocity.angular].map(Some).to_vec())
                .collect();
            table(Table { headers: vec!["t", "u", "theta", "v_radial", "v_angular"], rows }, format)
        }
        CuspCmd::Curvature { u, prefactor } => to_json(&json!({ "value": cusp::curvature(*u, &params(*prefactor)?)? })),
        CuspCmd::StrataDistance { u, prefactor } => {
            let p = CuspPoint::new(*u, 0.0)?;
            let params = params(*prefactor)?;
            to_json(&json!({
                "value": cusp::distance_to_stratum(&p, &params),
                "integrated": cusp::integrated_radial_distance(&p, &params)?,
            }))
        }
        CuspCmd::Dist { p, q, prefactor } => {
            let (a, b) = (parse_pair(p)?, parse_pair(q)?);
            let (p, q) = (CuspPoint::new(a.0, a.1)?, CuspPoint::new(b.0, b.1)?);
            let params = params(*prefactor)?;
            let g = cusp::CuspGeodesic::new(&p, &q, &params);
            to_json(&json!({ "value": g.length(), "kind": format!("{:?}", g.kind) }))
        }
    };
    Ok(Report::ok(text))
}

fn space(name: &str) -> Result<SampleSpace, Failure> {
    SampleSpace::parse(name).ok_or_else(|| {
        let names: Vec<&str> = SampleSpace::ALL.iter().map(|s| s.name()).collect();
        usage(format!("unknown space `{name}`; expected one of {}", names.join(", ")))
    })
}

fn point_rows(text: &str) -> Vec<Vec<&str>> {
    text.lines()
        .map(str::trim)
        .filter(|l| !l.is_empty() && !l.starts_with('#'))
        .map(|l| l.split_whitespace().collect())
        .collect()
}

fn numbers(fields: &[&str]) -> Result<Vec<f64>, Failure> {
    fields.iter().map(|f| f.parse::<f64>().map_err(|e| usage(format!("`{f}`: {e}")))).collect()
}

fn run_cat0(c: &Cat0Cmd) -> Outcome {
    match c {
        Cat0Cmd::Check { space: name, trials, seed } => {
            let r = space(name)?.slack_report(*trials, *seed)?;
            // Same thresholds as the acceptance suite.
            let pass = r.min_slack >= if name == "euclid" { -1e-12 } else { -1e-9 };
            Ok(Report { text: to_json(&json!({ "space": name, "report": r })), pass })
        }
        Cat0Cmd::Fr { space: name, points } => {
            let text = read(points)?;
            let rows = point_rows(&text);
            let report: FrReport = match space(name)? {
                SampleSpace::Euclid => {
                    let pts = rows.iter().map(|r| numbers(r)).collect::<Result<Vec<_>, _>>()?;
                    let dim = pts.first().map_or(0, Vec::len);
                    if dim == 0 || pts.iter().any(|p| p.len() != dim) {
                        return Err(usage("euclid points need a common positive dimension"));
                    }
                    fr_diagnostic(&Euclidean::new(dim), &pts)?
                }
                SampleSpace::H2 => {
                    let pts = rows
                        .iter()
                        .map(|r| match numbers(r)?.as_slice() {
                            [x, y] => Ok(Complex64::new(*x, *y)),
                            _ => Err(usage("h2 points are `x y`")),
                        })
                        .collect::<Result<Vec<_>, _>>()?;
                    fr_diagnostic(&HyperbolicPlane, &pts)?
                }
                SampleSpace::Cusp => {
                    let pts = rows
                        .iter()
                        .map(|r| match numbers(r)?.as_slice() {
                            [u, t] => Ok(CuspPoint::new(*u, *t)?),
                            _ => Err(usage("cusp points are `u theta`")),
                        })
                        .collect::<Result<Vec<_>, _>>()?;
                    fr_diagnostic(&CuspSpace::default(), &pts)?
                }
                SampleSpace::ProductCusp => {
                    let pts = rows
                        .iter()
                        .map(|r| {
                            let v = numbers(r)?;
                            if v.is_empty() || v.len() % 2 != 0 {
                                return Err(usage("product-cusp points are `u1 theta1 u2 theta2 ...`"));
                            }
                            let f = v.chunks(2).map(|c| CuspPoint::new(c[0], c[1])).collect::<Result<Vec<_>, _>>()?;
                            Ok(ProductCuspPoint::new(f)?)
                        })
                        .collect::<Result<Vec<_>, _>>()?;
                    fr_diagnostic(&ProductCuspSpace::default(), &pts)?
                }
                SampleSpace::GluedHalfplanes => {
                    let pts = rows
                        .iter()
                        .map(|r| {
                            let (side, rest) = r.split_first().ok_or_else(|| usage("empty point"))?;
                            let v = numbers(rest)?;
                            if v.len() != 2 || v[1] < 0.0 {
                                return Err(usage("glued-halfplanes points are `L|R x y` with y >= 0"));
                            }
                            match *side {
                                "L" => Ok(Side::Left(v)),
                                "R" => Ok(Side::Right(v)),
                                s => Err(usage(format!("side must be L or R, got `{s}`"))),
                            }
                        })
                        .collect::<Result<Vec<_>, _>>()?;
                    fr_diagnostic(&verify::glued_halfplanes()?, &pts)?
                }
            };
            Ok(Report::ok(to_json(&json!({ "space": name, "report": report }))))
        }
    }
}

fn curve_matrix(curves: Option<&PathBuf>) -> Result<cox::CoxeterMatrix, Failure> {
    let system = match curves {
        Some(p) => CurveSystem::from_text(&read(p)?)?,
        None => CurveSystem::genus_two(),
    };
    Ok(cox::coxeter_matrix(&system))
}

fn run_coxeter(c: &CoxeterCmd) -> Outcome {
    let text = match c {
        CoxeterCmd::Matrix { curves } => curve_matrix(Some(curves))?.to_text(),
        CoxeterCmd::Reduce { word, curves } => {
            let m = curve_matrix(curves.as_ref())?;
            let w = Word::parse(word)?;
            if let Some(&s) = w.0.iter().find(|&&s| s >= m.rank()) {
                return Err(usage(format!("generator s{s} out of range for rank {}", m.rank())));
            }
            let r = cox::reduce_word(&w, &m)?;
            to_json(&json!({ "word": w.to_string(), "normal_form": r.to_string(), "length": r.len() }))
        }
        CoxeterCmd::Enumerate { maxlen, curves } => {
            let en = cox::enumerate_group(&curve_matrix(curves.as_ref())?, *maxlen)?;
            to_json(&json!({ "growth": en.growth, "order": en.order, "elements": en.elements.len() }))
        }
    };
    Ok(Report::ok(text))
}

fn run_circle(c: &CircleCmd, format: Format) -> Outcome {
    let text = match c {
        CircleCmd::Pair { coeffs, with, b } => {
            let k = PairingConstants::new(*b)?;
            let v = FourierVectorField::from_text(&read(coeffs)?)?;
            let w = match with {
                Some(p) => FourierVectorField::from_text(&read(p)?)?,
                None => v.clone(),
            };
            to_json(&json!({
                "wp": circle::wp_pairing(&v, &w, &k),
                "kk": circle::kk_form(&v, &w, &k),
                "wp_norm": circle::wp_pairing(&v, &v, &k).sqrt(),
                "h32_norm": circle::sobolev_norm(&v, 1.5)?,
                "ratio": circle::wp_h32_ratio(&v, &k),
            }))
        }
        CircleCmd::Hilbert { modes, samples } => {
            if modes.is_empty() {
                return Err(usage("need at least one mode"));
            }
            let n = *samples;
            let theta = |j: usize| std::f64::consts::TAU * j as f64 / n as f64;
            let u: Vec<f64> = (0..n).map(|j| modes.iter().map(|&m| (f64::from(m) * theta(j)).cos()).sum()).collect();
            let hu = circle::hilbert_transform_fn(&u)?;
            let rows = (0..n).map(|j| vec![Some(theta(j)), Some(u[j]), Some(hu[j])]).collect();
            table(Table { headers: vec!["theta", "u", "hu"], rows }, format)
        }
        CircleCmd::Ahlfors { phi, z, tol } => {
            let t = HarmonicTest::parse(phi)?;
            let z = parse_complex(z)?;
            let opts = circle::AhlforsOptions { tol: *tol, ..Default::default() };
            let r = circle::ahlfors_projection(|e| t.mu(e), t.decay(), z, opts)?;
            let mu = t.mu(z);
            let pass = !r.flagged;
            let text = to_json(&json!({
                "value": [r.value.re, r.value.im],
                "mu": [mu.re, mu.im],
                "error_estimate": r.error_estimate(),
                "quadrature_error": r.quadrature_error,
                "tail_bound": r.tail_bound,
                "radius": r.radius,
                "cells": r.cells,
                "flagged": r.flagged,
            }));
            return Ok(Report { text, pass });
        }
    };
    Ok(Report::ok(text))
}

fn configure_threads() -> Result<(), Failure> {
    let Ok(v) = std::env::var("WP_GEOM_THREADS") else {
        return Ok(());
    };
    let n: usize = v.parse().ok().filter(|&n| n > 0).ok_or_else(|| usage(format!("WP_GEOM_THREADS must be a positive integer, got `{v}`")))?;
    rayon::ThreadPoolBuilder::new()
        .num_threads(n)
        .build_global()
        .map_err(|e| usage(format!("thread pool: {e}")))
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    let result = configure_threads().and_then(|()| run(&cli)).and_then(|report| {
        match &cli.output {
            Some(path) => std::fs::write(path, &report.text).map_err(|e| Failure::Io(format!("{}: {e}", path.display())))?,
            None => print!("{}", report.text),
        }
        Ok(report.pass)
    });
    match result {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(Failure::Check(m)) => {
            eprintln!("check failed: {m}");
            ExitCode::from(1)
        }
        Err(Failure::Usage(m)) => {
            eprintln!("error: {m}");
            ExitCode::from(2)
        }
        Err(Failure::Io(m)) => {
            eprintln!("i/o error: {m}");
            ExitCode::from(3)
        }
    }
}
