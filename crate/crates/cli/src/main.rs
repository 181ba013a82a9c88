use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use polyfrac::adapt::Scheme;
use polyfrac::driver::{self, RunMode, RunReport, SimulationConfig};
use polyfrac::geometry::Rect;
use polyfrac::mesh::{self, generate_structured, generate_voronoi, ElementKind};
use polyfrac::problems::{self, MeshFamily};
use polyfrac::{Error, Result, Vec2};

#[derive(Parser)]
#[command(name = "polyfrac", version, about = "Adaptive virtual element fracture simulations")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run the simulation described by a config file.
    Run { config: PathBuf },
    /// Run a named benchmark with its default setup.
    Bench(BenchArgs),
    /// Mesh utilities.
    Mesh {
        #[command(subcommand)]
        command: MeshCommand,
    },
    /// Print configuration templates.
    Config {
        /// Print the full default config.
        #[arg(long)]
        defaults: bool,
    },
}

#[derive(Args)]
struct BenchArgs {
    /// One of patch, timoshenko, neartip, slanted, edge, pmma.
    name: String,
    /// Levels of a convergence study.
    #[arg(long)]
    levels: Option<usize>,
    /// Refinement scheme; on neartip this selects an adaptive run instead of
    /// a uniform convergence study.
    #[arg(long)]
    scheme: Option<Scheme>,
    #[arg(long)]
    family: Option<MeshFamily>,
    #[arg(long)]
    eta_stop: Option<f64>,
    #[arg(long)]
    max_steps: Option<usize>,
    /// Output directory for CSV and VTK files.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Subcommand)]
enum MeshCommand {
    /// Generate a mesh of a rectangle, optionally with a crack and holes.
    Gen(GenArgs),
}

#[derive(Args)]
struct GenArgs {
    /// t3, q4 or voronoi.
    #[arg(long, default_value = "q4")]
    family: MeshFamily,
    /// x0,y0,x1,y1
    #[arg(long, default_value = "0,0,1,1", value_parser = parse_rect)]
    domain: Rect,
    #[arg(long, default_value_t = 4)]
    nx: usize,
    #[arg(long, default_value_t = 4)]
    ny: usize,
    /// Lloyd iterations for Voronoi meshes.
    #[arg(long, default_value_t = 4)]
    lloyd: usize,
    #[arg(long, default_value_t = 1)]
    seed: u64,
    /// Crack polyline x0,y0,x1,y1[,...].
    #[arg(long, value_parser = parse_points)]
    crack: Option<Polyline>,
    /// Circular hole cx,cy,r; repeatable.
    #[arg(long = "hole", value_parser = parse_hole)]
    holes: Vec<(Vec2, f64)>,
    #[arg(long, short)]
    out: PathBuf,
}

fn numbers(s: &str) -> std::result::Result<Vec<f64>, String> {
    s.split(',').map(|t| t.trim().parse::<f64>().map_err(|e| format!("{t:?}: {e}"))).collect()
}

fn parse_rect(s: &str) -> std::result::Result<Rect, String> {
    match numbers(s)?[..] {
        [x0, y0, x1, y1] if x1 > x0 && y1 > y0 => Ok(Rect::new(x0, y0, x1, y1)),
        _ => Err("expected x0,y0,x1,y1 with x1 > x0 and y1 > y0".into()),
    }
}

#[derive(Clone)]
struct Polyline(Vec<Vec2>);

fn parse_points(s: &str) -> std::result::Result<Polyline, String> {
    let v = numbers(s)?;
    if v.len() < 4 || v.len() % 2 != 0 {
        return Err("expected an even number (at least 4) of coordinates".into());
    }
    Ok(Polyline(v.chunks(2).map(|c| Vec2::new(c[0], c[1])).collect()))
}

fn parse_hole(s: &str) -> std::result::Result<(Vec2, f64), String> {
    match numbers(s)?[..] {
        [x, y, r] if r > 0.0 => Ok((Vec2::new(x, y), r)),
        _ => Err("expected cx,cy,r with r > 0".into()),
    }
}

fn bench_config(args: &BenchArgs) -> Result<SimulationConfig> {
    problems::by_name(&args.name)?;
    let mut cfg = SimulationConfig::default();
    cfg.problem.name = args.name.clone();
    cfg.problem.mode = match args.name.as_str() {
        "timoshenko" => RunMode::Convergence,
        "neartip" if args.scheme.is_none() => RunMode::Convergence,
        "slanted" => RunMode::Table,
        "edge" | "pmma" => RunMode::Propagate,
        _ => RunMode::Adaptive,
    };
    if matches!(args.name.as_str(), "edge" | "pmma") {
        // coarse start; the adaptive loop does the rest
        cfg.problem.level = 0;
        cfg.adapt.eta_stop = 0.10;
        cfg.fracture.max_steps = if args.name == "pmma" { 11 } else { 10 };
    }
    if let Some(s) = args.scheme {
        cfg.adapt.scheme = s;
    }
    if let Some(l) = args.levels {
        cfg.study.levels = l;
    }
    if let Some(f) = args.family {
        cfg.problem.family = Some(f);
        cfg.study.families = vec![f];
    }
    if let Some(e) = args.eta_stop {
        cfg.adapt.eta_stop = e;
    }
    if let Some(m) = args.max_steps {
        cfg.fracture.max_steps = m;
    }
    cfg.output.dir = args.out.clone();
    cfg.validate()?;
    Ok(cfg)
}

fn summarize(report: &RunReport) {
    println!("problem: {}", report.problem);
    if let Some(last) = report.refinement.last() {
        println!("refinement steps: {}, final eta: {:.6}, dofs: {}", report.refinement.len(), last.eta, last.n_dofs);
    }
    for s in &report.slopes {
        let f = |v: Option<f64>| v.map_or("-".to_string(), |x| format!("{x:.3}"));
        println!("slopes {}: e_L2 {} e_H1 {} e_SPR {} eta {}", s.family, f(s.e_l2), f(s.e_h1), f(s.e_spr), f(s.eta));
    }
    for r in &report.table {
        println!("beta {:>5.1} alpha {:.2}: K_I {:.4} (exact {:.4}) K_II {:.4} (exact {:.4})", r.beta_deg, r.alpha, r.k1, r.k1_exact, r.k2, r.k2_exact);
    }
    for p in &report.propagation {
        println!("step {:>2} tip ({:.4}, {:.4}) K_I {:.4} K_II {:.4} theta {:.2} deg", p.step, p.tip.x, p.tip.y, p.k1, p.k2, p.theta.to_degrees());
    }
    println!("status: {}", report.status);
}

fn generate(args: &GenArgs) -> Result<()> {
    let m = match args.family {
        MeshFamily::T3 => generate_structured(ElementKind::T3, args.domain, args.nx, args.ny)?,
        MeshFamily::Q4 => generate_structured(ElementKind::Q4, args.domain, args.nx, args.ny)?,
        MeshFamily::Voronoi => generate_voronoi(args.domain, args.nx * args.ny, args.lloyd, args.seed)?,
    };
    let m = if args.holes.is_empty() { m } else { mesh::cut_circular_holes(&m, &args.holes, std::f64::consts::PI / 12.0)? };
    let m = match &args.crack {
        Some(c) => mesh::insert_crack(&m, &c.0)?,
        None => m,
    };
    mesh::io::write_mesh(&m, &args.out)?;
    println!("wrote {} ({} vertices, {} elements)", args.out.display(), m.n_vertices(), m.n_elements());
    Ok(())
}

fn run_config(path: &Path) -> Result<RunReport> {
    let cfg = SimulationConfig::load(path)?;
    driver::run(&cfg)
}

fn execute(cli: Cli) -> Result<()> {
    match cli.command {
        Command::Run { config } => summarize(&run_config(&config)?),
        Command::Bench(args) => {
            summarize(&driver::run(&bench_config(&args)?)?);
        }
        Command::Mesh { command: MeshCommand::Gen(args) } => generate(&args)?,
        Command::Config { defaults } => {
            if !defaults {
                return Err(Error::Config("nothing to print; pass --defaults".into()));
            }
            print!("{}", SimulationConfig::default_toml());
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    match execute(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            let msg = e.to_string().replace('\n', " ");
            eprintln!("error: kind={} message={msg}", e.kind());
            ExitCode::FAILURE
        }
    }
}
