//! Command-line front end. [`run`] takes the argument list and output
//! streams so the whole tool can be driven in-process.

use std::io::Write;
use std::path::{Path, PathBuf};
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};
use thiserror::Error;

use crate::analyzers::{
    axis_directions, composition_analysis, fiber_report, image_germ_stability, isolated_singular_value_check,
    milnor_zero_fiber_check, polar_directions, product_structure_check, tameness_scan, CompositionConfig,
    FiberConfig, FiberError, ImageConfig, IsvConfig, MilnorCheckConfig, ProductConfig, TamenessConfig, TamenessVerdict,
};
use crate::determinantal::{milnor_ideal, singular_ideal, zero_fiber_ideal};
use crate::germ::MapGerm;
use crate::numerics::{Annulus, PenaltyConfig, RngSpec, SolveConfig};
use crate::parse::{format_germ, parse_germ_file};
use crate::report::{emit_svg, from_json, to_json, AnalysisReport, GermInfo, Meta, PointCloud, TOOL, VERSION};

#[derive(Debug, Parser)]
#[command(name = "milnorlab", version, about = "Milnor sets, tameness witnesses and fibre statistics for polynomial map germs")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Args)]
pub struct Common {
    /// Master seed for all random streams.
    #[arg(long, default_value_t = 42)]
    pub seed: u64,
    /// Solver success threshold on the normalized sum of squares.
    #[arg(long, default_value_t = 1e-12)]
    pub tol: f64,
    /// Output file (stdout when absent).
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Worker threads (does not affect results).
    #[arg(long)]
    pub workers: Option<usize>,
    /// Record wall-clock duration in the report.
    #[arg(long)]
    pub timing: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Which {
    Singular,
    Milnor,
    ZeroFiber,
    All,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Print the singular, Milnor and/or zero-fibre ideal as germ-file syntax.
    Ideal {
        germ: PathBuf,
        #[arg(long, value_enum, default_value_t = Which::All)]
        which: Which,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Isolated singular value check on the shell [r0/2, r0].
    Isv {
        germ: PathBuf,
        #[arg(long, default_value_t = 0.1)]
        r0: f64,
        #[arg(long, default_value_t = 512)]
        seeds: usize,
        #[command(flatten)]
        common: Common,
    },
    /// Tameness witness scan over radii r0·2^-k, k = 0..=stages.
    Tame {
        germ: PathBuf,
        #[arg(long, default_value_t = 0.1)]
        r0: f64,
        #[arg(long, default_value_t = 7)]
        stages: usize,
        /// Random witness-search seeds per stage.
        #[arg(long, default_value_t = 32)]
        seeds: usize,
        #[command(flatten)]
        common: Common,
    },
    /// Components and dimensions of G⁻¹(target) ∩ B_eps.
    Fiber {
        germ: PathBuf,
        /// Comma-separated target value (default: 1e-4 on the first axis).
        #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
        target: Option<Vec<f64>>,
        #[arg(long, default_value_t = 0.5)]
        eps: f64,
        #[arg(long, default_value_t = 4096)]
        seeds: usize,
        #[command(flatten)]
        common: Common,
    },
    /// Image membership grid and stability flags for two ball radii.
    Image {
        germ: PathBuf,
        /// The two radii ε₁ > ε₂.
        #[arg(long, value_delimiter = ',', default_value = "0.5,0.25")]
        eps: Vec<f64>,
        #[arg(long, value_delimiter = ',', default_value = "1e-3,1e-4,1e-5")]
        magnitudes: Vec<f64>,
        /// Number of polar directions (two-dimensional targets only).
        #[arg(long, default_value_t = 16)]
        directions: usize,
        #[arg(long, default_value_t = 64)]
        seeds: usize,
        #[command(flatten)]
        common: Common,
    },
    /// Composition G∘F: chain rule, sampled inclusions and tameness of both.
    Compose {
        /// Outer germ G.
        outer: PathBuf,
        /// Inner germ F.
        inner: PathBuf,
        /// Also write the composed germ to this file.
        #[arg(long)]
        emit: Option<PathBuf>,
        #[arg(long, default_value_t = 0.1)]
        r0: f64,
        #[arg(long, default_value_t = 7)]
        stages: usize,
        /// Minimum samples per inclusion check.
        #[arg(long, default_value_t = 1000)]
        seeds: usize,
        #[command(flatten)]
        common: Common,
    },
    /// Compare fibres of F and of F without its last component.
    Product {
        germ: PathBuf,
        /// δ, the first coordinate of the target.
        #[arg(long, allow_hyphen_values = true, default_value_t = 1e-4)]
        target: f64,
        #[arg(long, default_value_t = 0.5)]
        eps: f64,
        #[arg(long, default_value_t = 4096)]
        seeds: usize,
        #[command(flatten)]
        common: Common,
    },
    /// Run every analyzer with defaults.
    Analyze {
        germ: PathBuf,
        /// Inner germ for a composition analysis (this germ is the outer one).
        #[arg(long)]
        inner: Option<PathBuf>,
        #[arg(long, default_value_t = 0.1)]
        r0: f64,
        #[arg(long, default_value_t = 7)]
        stages: usize,
        #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
        target: Option<Vec<f64>>,
        #[arg(long, default_value_t = 0.5)]
        eps: f64,
        /// Fibre-report seeds.
        #[arg(long, default_value_t = 4096)]
        seeds: usize,
        /// Also write an SVG of the fibre point cloud.
        #[arg(long)]
        svg: Option<PathBuf>,
        #[arg(long, value_delimiter = ',', default_value = "0,1")]
        projection: Vec<usize>,
        #[command(flatten)]
        common: Common,
    },
    /// SVG scatter plot of the point clouds in a report.
    Plot {
        report: PathBuf,
        #[arg(long, value_delimiter = ',', default_value = "0,1")]
        projection: Vec<usize>,
        /// Only plot the cloud with this name.
        #[arg(long)]
        cloud: Option<String>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Debug, Error)]
pub enum CliError {
    /// Bad input: exit code 2.
    #[error("{0}")]
    Input(String),
    /// An analyzer could not produce what was asked for: exit code 1.
    #[error("{0}")]
    Analysis(String),
    #[error("{0}")]
    Io(#[from] std::io::Error),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Input(_) => 2,
            CliError::Analysis(_) | CliError::Io(_) => 1,
        }
    }
}

fn load_germ(path: &Path) -> Result<MapGerm, CliError> {
    let text = std::fs::read_to_string(path).map_err(|e| CliError::Input(format!("{}: {e}", path.display())))?;
    let g = parse_germ_file(&text).map_err(|e| CliError::Input(format!("{}: {e}", path.display())))?;
    Ok(match g.name() {
        Some(_) => g,
        None => {
            let stem = path.file_stem().map(|s| s.to_string_lossy().into_owned()).unwrap_or_default();
            g.with_name(stem)
        }
    })
}

fn solve_cfg(tol: f64) -> Result<SolveConfig, CliError> {
    if !(tol > 0.0 && tol.is_finite()) {
        return Err(CliError::Input(format!("--tol must be positive, got {tol}")));
    }
    Ok(SolveConfig {
        tol_residual: tol,
        ..SolveConfig::default()
    })
}

fn positive(name: &str, v: f64) -> Result<f64, CliError> {
    if v > 0.0 && v.is_finite() {
        Ok(v)
    } else {
        Err(CliError::Input(format!("--{name} must be positive, got {v}")))
    }
}

fn default_target(g: &MapGerm, target: Option<Vec<f64>>) -> Result<Vec<f64>, CliError> {
    let v = target.unwrap_or_else(|| {
        let mut v = vec![0.0; g.target_dim()];
        v[0] = 1e-4;
        v
    });
    if v.len() != g.target_dim() {
        return Err(CliError::Input(format!(
            "--target has {} coordinates but the germ has {} components",
            v.len(),
            g.target_dim()
        )));
    }
    Ok(v)
}

fn tameness_cfg(r0: f64, stages: usize, seeds: usize, solve: SolveConfig) -> Result<TamenessConfig, CliError> {
    let d = TamenessConfig::default();
    Ok(TamenessConfig {
        r0: positive("r0", r0)?,
        stages,
        penalty: PenaltyConfig { n_seeds: seeds, ..d.penalty },
        solve,
        ..d
    })
}

fn image_directions(g: &MapGerm, n: usize) -> Vec<Vec<f64>> {
    if g.target_dim() == 2 {
        polar_directions(n)
    } else {
        axis_directions(g.target_dim())
    }
}

fn fiber_error(e: FiberError) -> CliError {
    match e {
        FiberError::NoSolutionsFound { .. } => CliError::Analysis(e.to_string()),
        _ => CliError::Input(e.to_string()),
    }
}

fn witness_cloud(name: &str, dim: usize, verdict: &TamenessVerdict) -> Option<PointCloud> {
    match verdict {
        TamenessVerdict::NotTame { witnesses, .. } => {
            let pts: Vec<Vec<f64>> = witnesses.iter().map(|w| w.point.clone()).collect();
            let labels = witnesses.iter().map(|w| w.stage as i64).collect();
            Some(PointCloud::new(name, dim, &pts, labels))
        }
        _ => None,
    }
}

struct Outcome {
    command: &'static str,
    germ: GermInfo,
    inner: Option<GermInfo>,
    config: Value,
    verdicts: Value,
    clouds: Vec<PointCloud>,
}

fn write_out(out: &Option<PathBuf>, text: &str, stdout: &mut dyn Write) -> Result<(), CliError> {
    match out {
        Some(p) => std::fs::write(p, text)?,
        None => stdout.write_all(text.as_bytes())?,
    }
    Ok(())
}

fn ser<T: serde::Serialize>(v: &T) -> Value {
    serde_json::to_value(v).expect("serializable")
}

/// Report pieces, the shared flags, and an optional SVG request (path, projection).
type Analysis = (Outcome, Common, Option<(PathBuf, Vec<usize>)>);

fn run_analysis(cmd: Command) -> Result<Analysis, CliError> {
    match cmd {
        Command::Isv { germ, r0, seeds, common } => {
            let g = load_germ(&germ)?;
            let cfg = IsvConfig {
                n_seeds: seeds,
                solve: solve_cfg(common.tol)?,
                ..IsvConfig::default()
            };
            let region = Annulus::new(positive("r0", r0)? / 2.0, r0, g.source_dim())
                .map_err(|e| CliError::Input(e.to_string()))?;
            let r = isolated_singular_value_check(&g, &region, &cfg, RngSpec::new(common.seed));
            let cloud = PointCloud::new("singular_samples", g.source_dim(), &r.evidence, vec![-1; r.evidence.len()]);
            Ok((
                Outcome {
                    command: "isv",
                    germ: GermInfo::of(&g),
                    inner: None,
                    config: json!({"germ_file": germ, "seed": common.seed, "region": region, "isv": cfg}),
                    verdicts: json!({ "isolated_singular_value": ser(&r) }),
                    clouds: vec![cloud],
                },
                common,
                None,
            ))
        }
        Command::Tame {
            germ,
            r0,
            stages,
            seeds,
            common,
        } => {
            let g = load_germ(&germ)?;
            let cfg = tameness_cfg(r0, stages, seeds, solve_cfg(common.tol)?)?;
            let r = tameness_scan(&g, &cfg, RngSpec::new(common.seed));
            let clouds = witness_cloud("witnesses", g.source_dim(), &r.verdict).into_iter().collect();
            Ok((
                Outcome {
                    command: "tame",
                    germ: GermInfo::of(&g),
                    inner: None,
                    config: json!({"germ_file": germ, "seed": common.seed, "tameness": cfg}),
                    verdicts: json!({ "tameness": ser(&r) }),
                    clouds,
                },
                common,
                None,
            ))
        }
        Command::Fiber {
            germ,
            target,
            eps,
            seeds,
            common,
        } => {
            let g = load_germ(&germ)?;
            let v = default_target(&g, target)?;
            let cfg = FiberConfig {
                n_seeds: seeds,
                solve: SolveConfig {
                    tol_residual: solve_cfg(common.tol)?.tol_residual,
                    ..FiberConfig::default().solve
                },
                ..FiberConfig::default()
            };
            let r = fiber_report(&g, &v, positive("eps", eps)?, &cfg, RngSpec::new(common.seed)).map_err(fiber_error)?;
            Ok((
                Outcome {
                    command: "fiber",
                    germ: GermInfo::of(&g),
                    inner: None,
                    config: json!({"germ_file": germ, "seed": common.seed, "target": v, "eps": eps, "fiber": cfg}),
                    verdicts: json!({ "fiber": ser(&r) }),
                    clouds: vec![PointCloud::from_fiber("fiber", &r)],
                },
                common,
                None,
            ))
        }
        Command::Image {
            germ,
            eps,
            magnitudes,
            directions,
            seeds,
            common,
        } => {
            let g = load_germ(&germ)?;
            let [e1, e2] = <[f64; 2]>::try_from(eps.as_slice())
                .map_err(|_| CliError::Input("--eps takes exactly two radii".into()))?;
            if positive("eps", e2)? >= positive("eps", e1)? {
                return Err(CliError::Input("--eps needs ε₁ > ε₂".into()));
            }
            for &t in &magnitudes {
                positive("magnitudes", t)?;
            }
            let cfg = ImageConfig {
                n_seeds: seeds,
                solve: solve_cfg(common.tol)?,
            };
            let dirs = image_directions(&g, directions);
            let r = image_germ_stability(&g, &dirs, &magnitudes, [e1, e2], &cfg, RngSpec::new(common.seed));
            Ok((
                Outcome {
                    command: "image",
                    germ: GermInfo::of(&g),
                    inner: None,
                    config: json!({"germ_file": germ, "seed": common.seed, "image": cfg}),
                    verdicts: json!({ "image": ser(&r) }),
                    clouds: vec![],
                },
                common,
                None,
            ))
        }
        Command::Compose {
            outer,
            inner,
            emit,
            r0,
            stages,
            seeds,
            common,
        } => {
            let g = load_germ(&outer)?;
            let f = load_germ(&inner)?;
            let h = g.compose(&f).map_err(|e| CliError::Input(e.to_string()))?;
            if let Some(p) = &emit {
                std::fs::write(p, format!("# {} composed with {}\n{}", g.name().unwrap_or("G"), f.name().unwrap_or("F"), format_germ(&h)))?;
            }
            let solve = solve_cfg(common.tol)?;
            let cfg = CompositionConfig {
                inner_radius: positive("r0", r0)? / 2.0,
                outer_radius: r0,
                min_samples: seeds,
                tameness: tameness_cfg(r0, stages, TamenessConfig::default().penalty.n_seeds, solve)?,
                solve,
                ..CompositionConfig::default()
            };
            let r = composition_analysis(&g, &f, &cfg, RngSpec::new(common.seed))
                .map_err(|e| CliError::Input(e.to_string()))?;
            Ok((
                Outcome {
                    command: "compose",
                    germ: GermInfo::of(&g),
                    inner: Some(GermInfo::of(&f)),
                    config: json!({"germ_file": outer, "inner_germ_file": inner, "seed": common.seed, "composition": cfg}),
                    verdicts: json!({ "composition": ser(&r) }),
                    clouds: vec![],
                },
                common,
                None,
            ))
        }
        Command::Product {
            germ,
            target,
            eps,
            seeds,
            common,
        } => {
            let g = load_germ(&germ)?;
            if g.target_dim() < 2 {
                return Err(CliError::Input("product check needs at least two components".into()));
            }
            if target == 0.0 || !target.is_finite() {
                return Err(CliError::Input("--target must be nonzero".into()));
            }
            let cfg = ProductConfig {
                delta: target,
                eps: positive("eps", eps)?,
                fiber: FiberConfig {
                    n_seeds: seeds,
                    solve: SolveConfig {
                        tol_residual: solve_cfg(common.tol)?.tol_residual,
                        ..FiberConfig::default().solve
                    },
                    ..FiberConfig::default()
                },
            };
            let r = product_structure_check(&g, &cfg, RngSpec::new(common.seed))
                .map_err(|e| CliError::Input(e.to_string()))?;
            let mut clouds = Vec::new();
            if let Some(f) = &r.fiber {
                clouds.push(PointCloud::from_fiber("fiber", f));
            }
            if let Some(f) = &r.truncated_fiber {
                clouds.push(PointCloud::from_fiber("truncated_fiber", f));
            }
            Ok((
                Outcome {
                    command: "product",
                    germ: GermInfo::of(&g),
                    inner: None,
                    config: json!({"germ_file": germ, "seed": common.seed, "product": cfg}),
                    verdicts: json!({ "product": ser(&r) }),
                    clouds,
                },
                common,
                None,
            ))
        }
        Command::Analyze {
            germ,
            inner,
            r0,
            stages,
            target,
            eps,
            seeds,
            svg,
            projection,
            common,
        } => {
            let g = load_germ(&germ)?;
            let solve = solve_cfg(common.tol)?;
            let rng = RngSpec::new(common.seed);
            let m = g.source_dim();
            let region = Annulus::new(positive("r0", r0)? / 2.0, r0, m).map_err(|e| CliError::Input(e.to_string()))?;
            let v = default_target(&g, target)?;
            let eps = positive("eps", eps)?;

            let isv_cfg = IsvConfig {
                solve,
                ..IsvConfig::default()
            };
            let tame_cfg = tameness_cfg(r0, stages, TamenessConfig::default().penalty.n_seeds, solve)?;
            let fiber_cfg = FiberConfig {
                n_seeds: seeds,
                solve: SolveConfig {
                    tol_residual: solve.tol_residual,
                    ..FiberConfig::default().solve
                },
                ..FiberConfig::default()
            };
            let image_cfg = ImageConfig {
                solve,
                ..ImageConfig::default()
            };
            let check_cfg = MilnorCheckConfig {
                solve,
                ..MilnorCheckConfig::default()
            };
            let product_cfg = ProductConfig {
                delta: v[0],
                eps,
                fiber: fiber_cfg,
            };

            let isv = isolated_singular_value_check(&g, &region, &isv_cfg, rng.fork("isv"));
            let tame = tameness_scan(&g, &tame_cfg, rng.fork("tame"));
            let fiber = fiber_report(&g, &v, eps, &fiber_cfg, rng.fork("fiber"));
            let dirs = image_directions(&g, 16);
            let mags = [1e-3, 1e-4, 1e-5];
            let image = image_germ_stability(&g, &dirs, &mags, [eps, eps / 2.0], &image_cfg, rng.fork("image"));
            let check = milnor_zero_fiber_check(&g, &region, &check_cfg, rng.fork("milnor_check"));
            let product = if g.target_dim() >= 2 && v[0] != 0.0 {
                Some(product_structure_check(&g, &product_cfg, rng.fork("product")).map_err(|e| CliError::Input(e.to_string()))?)
            } else {
                None
            };
            let inner_germ = inner.as_deref().map(load_germ).transpose()?;
            let composition = match &inner_germ {
                Some(f) => {
                    let cfg = CompositionConfig {
                        inner_radius: r0 / 2.0,
                        outer_radius: r0,
                        tameness: tame_cfg,
                        solve,
                        ..CompositionConfig::default()
                    };
                    Some(composition_analysis(&g, f, &cfg, rng.fork("compose")).map_err(|e| CliError::Input(e.to_string()))?)
                }
                None => None,
            };

            let mut clouds = Vec::new();
            let fiber_value = match &fiber {
                Ok(f) => {
                    clouds.push(PointCloud::from_fiber("fiber", f));
                    ser(f)
                }
                Err(e) => json!({ "error": e.to_string() }),
            };
            clouds.extend(witness_cloud("witnesses", m, &tame.verdict));
            let svg_request = svg.map(|p| (p, projection));
            Ok((
                Outcome {
                    command: "analyze",
                    germ: GermInfo::of(&g),
                    inner: inner_germ.as_ref().map(GermInfo::of),
                    config: json!({
                        "germ_file": germ,
                        "inner_germ_file": inner,
                        "seed": common.seed,
                        "region": region,
                        "target": v,
                        "eps": eps,
                        "isv": isv_cfg,
                        "tameness": tame_cfg,
                        "fiber": fiber_cfg,
                        "image": image_cfg,
                        "image_magnitudes": mags,
                        "milnor_check": check_cfg,
                        "product": product_cfg,
                    }),
                    verdicts: json!({
                        "isolated_singular_value": ser(&isv),
                        "tameness": ser(&tame),
                        "fiber": fiber_value,
                        "image": ser(&image),
                        "milnor_zero_fiber_check": ser(&check),
                        "product": product.as_ref().map(ser),
                        "composition": composition.as_ref().map(ser),
                    }),
                    clouds,
                },
                common,
                svg_request,
            ))
        }
        Command::Ideal { .. } | Command::Plot { .. } => unreachable!("handled without a report"),
    }
}

fn dispatch(cli: Cli, stdout: &mut dyn Write) -> Result<(), CliError> {
    match cli.command {
        Command::Ideal { germ, which, out } => {
            let g = load_germ(&germ)?;
            let vars = g.var_names();
            let mut text = String::new();
            let ideals = match which {
                Which::Singular => vec![singular_ideal(&g)],
                Which::Milnor => vec![milnor_ideal(&g)],
                Which::ZeroFiber => vec![zero_fiber_ideal(&g)],
                Which::All => vec![singular_ideal(&g), milnor_ideal(&g), zero_fiber_ideal(&g)],
            };
            for (i, ideal) in ideals.iter().enumerate() {
                if i > 0 {
                    text.push('\n');
                }
                text.push_str(&ideal.to_germ_syntax(vars));
            }
            write_out(&out, &text, stdout)
        }
        Command::Plot {
            report,
            projection,
            cloud,
            out,
        } => {
            let text = std::fs::read_to_string(&report)
                .map_err(|e| CliError::Input(format!("{}: {e}", report.display())))?;
            let r = from_json(&text).map_err(|e| CliError::Input(format!("{}: {e}", report.display())))?;
            let clouds: Vec<PointCloud> = r
                .point_clouds
                .into_iter()
                .filter(|c| cloud.as_ref().is_none_or(|n| &c.name == n))
                .collect();
            let svg = emit_svg(&clouds, &projection).map_err(|e| CliError::Input(e.to_string()))?;
            write_out(&out, &svg, stdout)
        }
        cmd => {
            let workers = match &cmd {
                Command::Isv { common, .. }
                | Command::Tame { common, .. }
                | Command::Fiber { common, .. }
                | Command::Image { common, .. }
                | Command::Compose { common, .. }
                | Command::Product { common, .. }
                | Command::Analyze { common, .. } => common.workers,
                _ => None,
            };
            let mut pool = rayon::ThreadPoolBuilder::new();
            if let Some(n) = workers {
                if n == 0 {
                    return Err(CliError::Input("--workers must be at least 1".into()));
                }
                pool = pool.num_threads(n);
            }
            let pool = pool
                .build()
                .map_err(|e| CliError::Analysis(format!("thread pool: {e}")))?;
            let start = Instant::now();
            let (outcome, common, svg) = pool.install(|| run_analysis(cmd))?;
            let report = AnalysisReport {
                meta: Meta {
                    tool: TOOL.into(),
                    version: VERSION.into(),
                    command: outcome.command.into(),
                    germ: outcome.germ,
                    inner_germ: outcome.inner,
                    duration_seconds: common.timing.then(|| start.elapsed().as_secs_f64()),
                },
                config: outcome.config,
                verdicts: outcome.verdicts,
                point_clouds: outcome.clouds,
            };
            if let Some((path, projection)) = svg {
                let doc = emit_svg(&report.point_clouds, &projection).map_err(|e| CliError::Input(e.to_string()))?;
                std::fs::write(path, doc)?;
            }
            write_out(&common.out, &to_json(&report), stdout)
        }
    }
}

/// Parses `argv` (including the program name) and runs the command.
/// Returns the process exit code: 0 on success (whatever the verdict),
/// 1 when an analyzer fails, 2 on invalid input.
pub fn run<I, S>(argv: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = S>,
    S: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = if code == 0 {
                write!(stdout, "{e}")
            } else {
                write!(stderr, "{e}")
            };
            return code;
        }
    };
    match dispatch(cli, stdout) {
        Ok(()) => 0,
        Err(e) => {
            let _ = writeln!(stderr, "error: {e}");
            e.exit_code()
        }
    }
}
