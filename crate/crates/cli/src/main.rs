mod config;

use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use serde_json::json;

use cubesurf::export::{self, BeamMesh, BeamOptions, BeamProfile};
use cubesurf::metrics::{MetricsPlan, WidthConfig};
use cubesurf::optimizer::{optimize, AgentKind, AgentPolicy, Budget, RewardConfig, SignMode};
use cubesurf::projection::{apply_state, EmbeddingState, ProjectionConstants, ScreenFrom};
use cubesurf::search::{enumerate_closed_surfaces, SearchConfig, SearchMode, SurfaceTarget};
use cubesurf::symmetry::{canonical_signature, signature_hash};
use cubesurf::{classify, is_closed_surface, CubicalComplex, Error};

use config::RunConfig;

/// An error with its exit code: 1 for invalid input, 2 for I/O.
#[derive(Debug)]
pub struct Failure {
    code: u8,
    message: String,
}

impl Failure {
    pub fn invalid(message: impl Into<String>) -> Self {
        Failure {
            code: 1,
            message: message.into(),
        }
    }

    pub fn io(message: impl Into<String>) -> Self {
        Failure {
            code: 2,
            message: message.into(),
        }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure {
            code: if e.is_io() { 2 } else { 1 },
            message: e.to_string(),
        }
    }
}

type CliResult<T> = Result<T, Failure>;

#[derive(Parser, Debug)]
#[command(
    name = "cubesurf",
    version,
    about = "Closed cubical surfaces in the n-cube and their 3D embeddings"
)]
struct Cli {
    /// Emit machine-readable JSON on stdout.
    #[arg(long, global = true)]
    json: bool,

    /// TOML file with default settings; flags take precedence.
    #[arg(long, global = true, value_name = "FILE")]
    config: Option<PathBuf>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Report whether a complex is a closed surface.
    Check { complex: PathBuf },
    /// Classify a complex: connectivity, closure, orientability, genus.
    Classify { complex: PathBuf },
    /// Search the n-cube for closed surfaces.
    Search(SearchArgs),
    /// Intersection counts and clearance of a projected complex.
    Metrics(MetricsArgs),
    /// Search for an embedding state with few intersections and overlaps.
    Optimize(OptimizeArgs),
    /// Write a printable mesh (.stl or .obj) of a projected complex.
    Export(ExportArgs),
}

#[derive(Args, Debug, Clone, Default)]
struct ProjectionArgs {
    /// Screen distance of the 5D-to-4D projection.
    #[arg(long)]
    c5: Option<f64>,
    /// Screen distance of the 4D-to-3D projection.
    #[arg(long)]
    c4: Option<f64>,
    /// Measure screen distances from the camera or from the origin.
    #[arg(long, value_parser = parse_with::<ScreenFrom>)]
    screen_from: Option<ScreenFrom>,
}

impl ProjectionArgs {
    fn resolve(&self, cfg: &RunConfig) -> CliResult<ProjectionConstants> {
        let d = ProjectionConstants::default();
        let k = ProjectionConstants {
            c5: self.c5.or(cfg.c5).unwrap_or(d.c5),
            c4: self.c4.or(cfg.c4).unwrap_or(d.c4),
            screen_from: self
                .screen_from
                .or(cfg.screen_from)
                .unwrap_or(d.screen_from),
        };
        if !(k.c5 > 0.0 && k.c4 > 0.0 && k.c5.is_finite() && k.c4.is_finite()) {
            return Err(Failure::invalid("screen distances must be positive"));
        }
        Ok(k)
    }
}

#[derive(Args, Debug)]
struct SearchArgs {
    #[arg(long)]
    dim: usize,
    #[arg(long)]
    max_faces: usize,
    /// Enumerate every isomorphism class (dimension 4 or less).
    #[arg(long, conflicts_with = "seed")]
    exhaustive: bool,
    /// Run exhaustively in dimension 5. Long-running.
    #[arg(long, conflicts_with = "seed")]
    census: bool,
    /// Seed of the randomized search (the default mode).
    #[arg(long)]
    seed: Option<u64>,
    /// sphere, torus, projective-plane, klein-bottle, or
    /// `orientable=BOOL,chi=INT,min-faces=INT`.
    #[arg(long, value_parser = parse_with::<SurfaceTarget>)]
    target: Option<SurfaceTarget>,
    /// Number of surfaces to return in randomized mode.
    #[arg(long, default_value_t = 1)]
    count: usize,
    #[arg(long)]
    restarts: Option<usize>,
    /// Write complex files and a manifest into this directory.
    #[arg(short, long, value_name = "DIR")]
    output: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct MetricsArgs {
    complex: PathBuf,
    /// Embedding state: a file, or the text or JSON form inline.
    #[arg(long)]
    state: Option<String>,
    /// Beam radius; defaults to 2% of the projection's bounding-box diagonal.
    #[arg(short)]
    r: Option<f64>,
    /// Count edge pairs sharing a vertex as overlaps.
    #[arg(long)]
    count_adjacent_edges: bool,
    #[command(flatten)]
    projection: ProjectionArgs,
}

#[derive(Args, Debug)]
struct OptimizeArgs {
    complex: PathBuf,
    /// Initial state; sampled from the seed when absent.
    #[arg(long)]
    s0: Option<String>,
    #[arg(long)]
    sigma_prop: Option<usize>,
    #[arg(long, value_parser = parse_with::<AgentKind>)]
    agent: Option<AgentKind>,
    #[arg(long, value_parser = parse_with::<SignMode>)]
    sign_mode: Option<SignMode>,
    /// Run seed; repeat for several independent runs.
    #[arg(long)]
    seed: Vec<u64>,
    /// EPISODESxSTEPS, or a total step count.
    #[arg(long, value_parser = parse_with::<Budget>)]
    budget: Option<Budget>,
    #[arg(long)]
    exploration: Option<f64>,
    #[arg(long)]
    learning_rate: Option<f64>,
    #[arg(long)]
    gamma: Option<f64>,
    #[arg(short)]
    r: Option<f64>,
    /// Episode log in JSON lines.
    #[arg(long, value_name = "FILE")]
    log: Option<PathBuf>,
    /// Best state in the text format.
    #[arg(long, value_name = "FILE")]
    best_out: Option<PathBuf>,
    #[command(flatten)]
    projection: ProjectionArgs,
}

#[derive(Args, Debug)]
struct ExportArgs {
    complex: PathBuf,
    #[arg(long)]
    state: Option<String>,
    #[arg(short)]
    r: Option<f64>,
    /// Add a thin slab for every face.
    #[arg(long)]
    panels: bool,
    #[arg(long, value_parser = parse_with::<BeamProfile>)]
    profile: Option<BeamProfile>,
    /// Write the projected vertices, faces and edges instead of beams (.obj only).
    #[arg(long)]
    scene: bool,
    #[arg(short, long, value_name = "PATH")]
    output: Option<PathBuf>,
    #[command(flatten)]
    projection: ProjectionArgs,
}

fn parse_with<T: std::str::FromStr<Err = Error>>(s: &str) -> Result<T, String> {
    s.parse().map_err(|e: Error| e.to_string())
}

fn read_complex(path: &Path) -> CliResult<CubicalComplex> {
    CubicalComplex::read(path).map_err(|e| {
        let code = if e.is_io() { 2 } else { 1 };
        Failure {
            code,
            message: format!("{}: {e}", path.display()),
        }
    })
}

/// A state argument names a file if one exists at that path, otherwise it is parsed inline.
fn read_state(arg: &str) -> CliResult<EmbeddingState> {
    let path = Path::new(arg);
    let text = if path.is_file() {
        fs::read_to_string(path).map_err(|e| Failure::io(format!("{arg}: {e}")))?
    } else {
        arg.to_string()
    };
    EmbeddingState::parse_any(&text).map_err(|e| Failure::invalid(format!("state: {e}")))
}

fn write_file(path: &Path, contents: &[u8]) -> CliResult<()> {
    fs::write(path, contents).map_err(|e| Failure::io(format!("{}: {e}", path.display())))
}

fn cmd_check(path: &Path, json_out: bool) -> CliResult<()> {
    let c = read_complex(path)?;
    let report = is_closed_surface(&c);
    let class = classify(&c);
    if json_out {
        let v = json!({
            "closed": report.closed,
            "connected": class.connected,
            "euler_characteristic": class.euler_characteristic,
            "orientable": class.orientable,
            "genus": class.genus,
            "demigenus": class.demigenus,
            "edge_violations": report.edge_violations,
            "vertex_violations": report.vertex_violations,
        });
        println!("{v}");
    } else if report.closed {
        let kind = match (class.orientable, class.genus, class.demigenus) {
            (Some(true), Some(g), _) => format!("orientable; genus {g}"),
            (Some(false), _, Some(k)) => format!("non-orientable; demigenus {k}"),
            (Some(true), ..) => "orientable; disconnected".into(),
            _ => "non-orientable; disconnected".into(),
        };
        println!(
            "closed surface: yes; χ={}; {kind}",
            class.euler_characteristic
        );
    } else {
        println!("closed surface: no");
    }
    if report.closed {
        return Ok(());
    }
    let mut msg = String::from("not a closed surface");
    if report.empty {
        msg.push_str(": complex has no faces");
    }
    for (e, k) in &report.edge_violations {
        let _ = write!(msg, "\n  edge {e} lies in {k} face(s)");
    }
    for v in &report.vertex_violations {
        let _ = write!(
            msg,
            "\n  vertex {v} has a vertex figure that is not a single cycle"
        );
    }
    Err(Failure::invalid(msg))
}

fn cmd_classify(path: &Path, json_out: bool) -> CliResult<()> {
    let c = read_complex(path)?;
    let class = classify(&c);
    if json_out {
        let mut v = serde_json::to_value(&class).expect("plain data");
        v["name"] = json!(class.name());
        v["faces"] = json!(c.faces().len());
        v["edges"] = json!(c.edges().len());
        v["vertices"] = json!(c.vertices().len());
        println!("{v}");
    } else {
        println!("{}", class.name());
        println!(
            "faces {} edges {} vertices {}",
            c.faces().len(),
            c.edges().len(),
            c.vertices().len()
        );
        println!("connected: {}", class.connected);
        println!("closed: {}", class.closed);
        if let Some(o) = class.orientable {
            println!("orientable: {o}");
        }
        println!("χ = {}", class.euler_characteristic);
        if let Some(g) = class.genus {
            println!("genus {g}");
        }
        if let Some(k) = class.demigenus {
            println!("demigenus {k}");
        }
    }
    Ok(())
}

fn manifest_line(file: &str, c: &CubicalComplex) -> String {
    let class = classify(c);
    let kind = match (class.orientable, class.genus, class.demigenus) {
        (_, Some(g), _) => format!("orientable\tg={g}"),
        (_, _, Some(k)) => format!("non-orientable\tk={k}"),
        (Some(true), ..) => "orientable\t-".into(),
        _ => "non-orientable\t-".into(),
    };
    format!(
        "{file}\t{}\t{}\t{kind}\t{}",
        c.faces().len(),
        class.euler_characteristic,
        signature_hash(&canonical_signature(c))
    )
}

fn cmd_search(a: &SearchArgs, json_out: bool) -> CliResult<()> {
    let mode = if a.exhaustive || a.census {
        SearchMode::Exhaustive
    } else {
        SearchMode::Randomized {
            seed: a.seed.unwrap_or(0),
        }
    };
    let mut cfg = SearchConfig::new(a.dim, a.max_faces, mode);
    cfg.target = a.target.clone();
    cfg.max_results = a.count.max(1);
    cfg.allow_large_exhaustive = a.census;
    if let Some(r) = a.restarts {
        cfg.restarts = r;
    }
    let found = enumerate_closed_surfaces(&cfg)?;
    if let Some(dir) = &a.output {
        fs::create_dir_all(dir).map_err(|e| Failure::io(format!("{}: {e}", dir.display())))?;
    }
    let mut manifest = String::new();
    let mut records = Vec::new();
    for (i, c) in found.iter().enumerate() {
        let name = format!("surface_{i:04}.txt");
        if let Some(dir) = &a.output {
            c.write(dir.join(&name))?;
        }
        manifest.push_str(&manifest_line(&name, c));
        manifest.push('\n');
        let class = classify(c);
        records.push(json!({
            "file": name,
            "faces": c.faces().len(),
            "euler_characteristic": class.euler_characteristic,
            "orientable": class.orientable,
            "genus": class.genus,
            "demigenus": class.demigenus,
            "signature": signature_hash(&canonical_signature(c)),
            "cells": c.faces(),
        }));
    }
    if let Some(dir) = &a.output {
        write_file(&dir.join("manifest.tsv"), manifest.as_bytes())?;
    }
    if json_out {
        println!("{}", serde_json::Value::Array(records));
    } else {
        print!("{manifest}");
    }
    Ok(())
}

fn width_for(r: Option<f64>, scene: &cubesurf::ProjectedScene) -> CliResult<WidthConfig> {
    Ok(match r {
        Some(r) => WidthConfig::new(r)?,
        None => WidthConfig::relative_to(scene)?,
    })
}

fn required<'a>(value: Option<&'a String>, name: &str) -> CliResult<&'a String> {
    value.ok_or_else(|| Failure::invalid(format!("--{name} is required")))
}

fn cmd_metrics(a: &MetricsArgs, cfg: &RunConfig, json_out: bool) -> CliResult<()> {
    let c = read_complex(&a.complex)?;
    let k = a.projection.resolve(cfg)?;
    let state = read_state(required(a.state.as_ref().or(cfg.state.as_ref()), "state")?)?;
    let scene = apply_state(&c, &state, &k)?;
    let width = width_for(a.r.or(cfg.r), &scene)?;
    let mut plan = MetricsPlan::new(&c);
    plan.count_adjacent_edges = a.count_adjacent_edges || cfg.count_adjacent_edges.unwrap_or(false);
    let report = plan.report(&scene, &c, &width)?;
    if json_out {
        println!("{}", report.to_json());
    } else {
        println!("face intersections: {}", report.sigma);
        println!("edge overlaps (r = {}): {}", width.r(), report.overlaps);
        println!("total clearance: {}", report.total_clearance);
        for [f, g] in &report.face_pairs {
            println!("  faces {f} {g}");
        }
        for [e, h] in &report.edge_pairs {
            println!("  edges {e} {h}");
        }
    }
    Ok(())
}

fn cmd_optimize(a: &OptimizeArgs, cfg: &RunConfig, json_out: bool) -> CliResult<()> {
    let c = read_complex(&a.complex)?;
    let k = a.projection.resolve(cfg)?;
    let s0 =
        a.s0.as_ref()
            .or(cfg.s0.as_ref())
            .map(|s| read_state(s))
            .transpose()?;
    let budget = match (a.budget, &cfg.budget) {
        (Some(b), _) => b,
        (None, Some(text)) => text.parse()?,
        (None, None) => Budget::default(),
    };
    let defaults = RewardConfig::default();
    let reward = RewardConfig {
        sigma_prop: a
            .sigma_prop
            .or(cfg.sigma_prop)
            .unwrap_or(defaults.sigma_prop),
        r: a.r.or(cfg.r),
        gamma: a.gamma.or(cfg.gamma).unwrap_or(defaults.gamma),
        sign_mode: a.sign_mode.or(cfg.sign_mode).unwrap_or(defaults.sign_mode),
        weights: cfg.weights.unwrap_or(defaults.weights),
    };
    let seeds = if !a.seed.is_empty() {
        a.seed.clone()
    } else if let Some(s) = &cfg.seeds {
        s.clone()
    } else {
        vec![cfg.seed.unwrap_or(0)]
    };
    let base = AgentPolicy::default();
    let log_path = a.log.as_ref().or(cfg.log.as_ref());
    let best_path = a.best_out.as_ref().or(cfg.best_out.as_ref());
    let mut log = String::new();
    let mut runs = Vec::new();
    let mut overall: Option<(u64, cubesurf::optimizer::OptimizeResult)> = None;
    for &seed in &seeds {
        let policy = AgentPolicy {
            kind: a.agent.or(cfg.agent).unwrap_or(base.kind),
            exploration: a
                .exploration
                .or(cfg.exploration)
                .unwrap_or(base.exploration),
            learning_rate: a
                .learning_rate
                .or(cfg.learning_rate)
                .unwrap_or(base.learning_rate),
            seed,
        };
        let res = optimize(&c, s0.as_ref(), &policy, budget, &reward, &k)?;
        if log_path.is_some() {
            for rec in &res.log {
                let mut v = serde_json::to_value(rec).expect("plain data");
                if seeds.len() > 1 {
                    v["seed"] = json!(seed);
                }
                log.push_str(&v.to_string());
                log.push('\n');
            }
        }
        runs.push(json!({
            "seed": seed,
            "sigma": res.best_measures.sigma,
            "overlaps": res.best_measures.overlaps,
            "L": res.best_measures.l,
            "r": res.width.r(),
            "steps": res.log.len(),
            "reached_target": res.reached_target,
            "best_state": res.best_state,
        }));
        if !json_out {
            println!(
                "seed {seed}: sigma {} overlaps {} L {} after {} steps (r = {})",
                res.best_measures.sigma,
                res.best_measures.overlaps,
                res.best_measures.l,
                res.log.len(),
                res.width.r()
            );
        }
        let better = match &overall {
            None => true,
            Some((_, b)) => cubesurf::optimizer::ranks_before(
                &res.best_measures,
                &b.best_measures,
                reward.sign_mode,
            ),
        };
        if better {
            overall = Some((seed, res));
        }
    }
    let (seed, best) = overall.expect("at least one seed");
    if let Some(p) = log_path {
        write_file(p, log.as_bytes())?;
    }
    if let Some(p) = best_path {
        write_file(p, format!("{}\n", best.best_state).as_bytes())?;
    }
    if json_out {
        let v = json!({
            "best_seed": seed,
            "best_state": best.best_state,
            "report": best.best_report,
            "runs": runs,
        });
        println!("{v}");
    } else {
        println!("best (seed {seed}): {}", best.best_state);
    }
    Ok(())
}

fn cmd_export(a: &ExportArgs, cfg: &RunConfig, json_out: bool) -> CliResult<()> {
    let c = read_complex(&a.complex)?;
    let k = a.projection.resolve(cfg)?;
    let state = read_state(required(a.state.as_ref().or(cfg.state.as_ref()), "state")?)?;
    let out = a
        .output
        .as_ref()
        .or(cfg.output.as_ref())
        .ok_or_else(|| Failure::invalid("-o/--output is required"))?;
    let ext = out
        .extension()
        .and_then(|e| e.to_str())
        .map(str::to_ascii_lowercase);
    let scene = apply_state(&c, &state, &k)?;
    if a.scene {
        if ext.as_deref() != Some("obj") {
            return Err(Failure::invalid(
                "--scene writes OBJ; use a .obj output path",
            ));
        }
        export::write_scene_obj(&scene, &c, out)?;
        if json_out {
            println!(
                "{}",
                json!({"path": out, "vertices": c.vertices().len(), "faces": c.faces().len()})
            );
        } else {
            println!(
                "wrote {} ({} vertices, {} faces)",
                out.display(),
                c.vertices().len(),
                c.faces().len()
            );
        }
        return Ok(());
    }
    let width = width_for(a.r.or(cfg.r), &scene)?;
    let opts = BeamOptions {
        r: width.r(),
        profile: a.profile.or(cfg.profile).unwrap_or_default(),
        panels: a.panels || cfg.panels.unwrap_or(false),
    };
    let mesh = BeamMesh::build(&scene, &c, &opts)?;
    match ext.as_deref() {
        Some("stl") => export::write_stl_binary(&mesh, out)?,
        Some("obj") => export::write_obj(&mesh, out)?,
        _ => return Err(Failure::invalid("output must end in .stl or .obj")),
    }
    if json_out {
        println!(
            "{}",
            json!({"path": out, "triangles": mesh.len(), "r": width.r()})
        );
    } else {
        println!(
            "wrote {} ({} triangles, r = {})",
            out.display(),
            mesh.len(),
            width.r()
        );
    }
    Ok(())
}

fn run(cli: Cli) -> CliResult<()> {
    let cfg = match &cli.config {
        Some(p) => RunConfig::load(p)?,
        None => RunConfig::default(),
    };
    match &cli.command {
        Command::Check { complex } => cmd_check(complex, cli.json),
        Command::Classify { complex } => cmd_classify(complex, cli.json),
        Command::Search(a) => cmd_search(a, cli.json),
        Command::Metrics(a) => cmd_metrics(a, &cfg, cli.json),
        Command::Optimize(a) => cmd_optimize(a, &cfg, cli.json),
        Command::Export(a) => cmd_export(a, &cfg, cli.json),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() {
                ExitCode::from(1)
            } else {
                ExitCode::SUCCESS
            };
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("error: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}
