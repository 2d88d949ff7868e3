mod dispatch;
mod render;

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use fairsquare::adversary::{gen_pools, probe_upper_bound, PoolKind};
use fairsquare::geometry::{CakeBase, CakeDomain, Point, Rect, Staircase, Walls};
use fairsquare::io;
use fairsquare::measure::GridDensity;
use fairsquare::protocols::{rait, verify, Agent, PieceFamily};
use fairsquare::Tolerances;

use dispatch::Shape;

#[derive(Parser)]
#[command(name = "fairsquare", version, about = "Fair division of 2D cakes into squares and other fat pieces")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Divide a cake among agents and write the division JSON.
    Divide(DivideArgs),
    /// Generate a water-pool instance and optionally probe it.
    Adversary(AdversaryArgs),
    /// Search for allocations of a shared density beating a bound.
    Probe(ProbeArgs),
    /// Draw a division as SVG.
    Render(RenderArgs),
    /// Re-check a division against the agents' densities.
    Verify(VerifyArgs),
}

#[derive(Args, Clone)]
struct CakeArgs {
    /// square, rect, quarter-plane, half-plane, plane, staircase, triangle, or a JSON file via --cake-file.
    #[arg(long, default_value = "square")]
    cake: String,
    /// Cake JSON; overrides --cake.
    #[arg(long)]
    cake_file: Option<PathBuf>,
    /// Number of walls of a square or rectangle, taken in the order bottom, left, top, right.
    #[arg(long)]
    walls: Option<usize>,
    #[arg(long, default_value_t = 1.0)]
    width: f64,
    #[arg(long)]
    height: Option<f64>,
    /// Staircase corners as "x,y;x,y;..."
    #[arg(long)]
    corners: Option<String>,
}

#[derive(Args)]
struct DivideArgs {
    #[command(flatten)]
    cake: CakeArgs,
    /// squares, fat-rects, square-pairs or ffdp.
    #[arg(long, default_value = "squares")]
    pieces: String,
    #[arg(long, default_value = "auto")]
    procedure: String,
    /// Density files; a file may also hold {"agents": [...]}.
    #[arg(long, num_args = 1.., required = true)]
    agents: Vec<PathBuf>,
    /// Division JSON output; stdout when absent.
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long)]
    svg: Option<PathBuf>,
}

#[derive(Args)]
struct AdversaryArgs {
    /// quarter-plane, square-4-walls or half-plane.
    #[arg(long)]
    cake: String,
    #[arg(short, long)]
    n: usize,
    #[arg(long, default_value_t = 0.01)]
    eps: f64,
    /// Number of probe trials; 0 skips the probe.
    #[arg(long, default_value_t = 0)]
    probe: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Write the pool density JSON here.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Write the cake JSON here.
    #[arg(long)]
    cake_out: Option<PathBuf>,
}

#[derive(Args)]
struct ProbeArgs {
    #[command(flatten)]
    cake: CakeArgs,
    #[arg(long)]
    density: PathBuf,
    #[arg(short, long)]
    n: usize,
    #[arg(long, default_value_t = 1000)]
    trials: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Fail with exit code 3 when the probe beats this bound by more than the probe tolerance.
    #[arg(long)]
    bound: Option<f64>,
}

#[derive(Args)]
struct RenderArgs {
    #[arg(long)]
    division: PathBuf,
    #[arg(long)]
    out: PathBuf,
}

#[derive(Args)]
struct VerifyArgs {
    #[arg(long)]
    division: PathBuf,
    #[arg(long, num_args = 1.., required = true)]
    agents: Vec<PathBuf>,
}

/// Exit status with its message: 2 for invalid input, 3 for a failed guarantee.
enum Fail {
    Invalid(String),
    Guarantee(String),
}

type Res<T> = Result<T, Fail>;

fn invalid(e: impl std::fmt::Display) -> Fail {
    Fail::Invalid(e.to_string())
}

fn read_json(path: &Path) -> Res<serde_json::Value> {
    let text = fs::read_to_string(path).map_err(|e| invalid(format!("{}: {}", path.display(), e)))?;
    io::parse(&text).map_err(|e| invalid(format!("{}: {}", path.display(), e)))
}

/// Writes through a temporary file so readers never see partial output.
fn write_atomic(path: &Path, text: &str) -> Res<()> {
    let tmp = path.with_extension("tmp~");
    fs::write(&tmp, text).and_then(|_| fs::rename(&tmp, path)).map_err(|e| invalid(format!("{}: {}", path.display(), e)))
}

fn load_agents(paths: &[PathBuf]) -> Res<Vec<Agent>> {
    let mut out: Vec<Agent> = Vec::new();
    for p in paths {
        let v = read_json(p)?;
        for (id, d) in io::agents_from_json(&v, out.len()).map_err(|e| invalid(format!("{}: {}", p.display(), e)))? {
            out.push(Agent::new(id, d));
        }
    }
    if out.is_empty() {
        return Err(invalid("at least one agent is required"));
    }
    Ok(out)
}

fn parse_corners(s: &str) -> Res<Vec<Point<f64>>> {
    s.split(';')
        .map(|pair| {
            let (x, y) = pair.split_once(',').ok_or_else(|| invalid(format!("bad corner '{}'", pair)))?;
            let num = |t: &str| t.trim().parse::<f64>().map_err(|_| invalid(format!("bad number '{}'", t)));
            Ok(Point::new(num(x)?, num(y)?))
        })
        .collect()
}

/// The cake plus the bounded rectangle densities are clipped to when open
/// sides were extended to infinity.
fn build_cake(a: &CakeArgs) -> Res<(CakeDomain<f64>, Option<Rect<f64>>)> {
    if let Some(p) = &a.cake_file {
        return Ok((io::cake_from_json(&read_json(p)?).map_err(invalid)?, None));
    }
    let inf = f64::INFINITY;
    let fixed = |k: usize, name: &str| -> Res<()> {
        match a.walls {
            Some(w) if w != k => Err(invalid(format!("a {} has {} walls, not {}", name, k, w))),
            _ => Ok(()),
        }
    };
    let cake = match a.cake.as_str() {
        "square" | "rect" => {
            let w = a.width;
            let h = if a.cake == "square" { w } else { a.height.unwrap_or(w) };
            if !(w > 0.0 && h > 0.0 && w.is_finite() && h.is_finite()) {
                return Err(invalid("width and height must be positive"));
            }
            let walls = a.walls.unwrap_or(4);
            if walls > 4 {
                return Err(invalid("a rectangle has at most 4 walls"));
            }
            let r = Rect::new(0.0, 0.0, w, h);
            let c = CakeDomain::rect(r, Walls::first(walls));
            if walls <= 2 {
                // pieces may cross open sides, so the base becomes the allowed region
                let ext = c.allowance().expect("rectangle cake");
                return Ok((CakeDomain::rect(ext, c.walls), Some(r)));
            }
            c
        }
        "quarter-plane" => {
            fixed(2, "quarter-plane")?;
            CakeDomain::rect(Rect::new(0.0, 0.0, inf, inf), Walls { left: true, bottom: true, ..Walls::none() })
        }
        "half-plane" => {
            fixed(1, "half-plane")?;
            CakeDomain::rect(Rect::new(-inf, 0.0, inf, inf), Walls { bottom: true, ..Walls::none() })
        }
        "plane" => {
            fixed(0, "plane")?;
            CakeDomain::rect(Rect::new(-inf, -inf, inf, inf), Walls::none())
        }
        "staircase" => {
            fixed(2, "staircase")?;
            let c = a.corners.as_deref().ok_or_else(|| invalid("a staircase needs --corners"))?;
            let st = Staircase::new(parse_corners(c)?).map_err(invalid)?;
            CakeDomain { base: CakeBase::Staircase(st), walls: Walls { left: true, bottom: true, ..Walls::none() } }
        }
        "triangle" => {
            fixed(4, "triangle")?;
            rait(0.0, 0.0, a.width)
        }
        k => return Err(invalid(format!("unknown cake kind '{}'", k))),
    };
    Ok((cake, None))
}

fn family(name: &str) -> Res<PieceFamily> {
    io::family_from_name(name).map_err(invalid)
}

fn divide(a: DivideArgs) -> Res<()> {
    let (cake, clip) = build_cake(&a.cake)?;
    let fam = family(&a.pieces)?;
    let shape = Shape::of(&cake);
    let proc_ = dispatch::select(&a.procedure, shape, fam).map_err(Fail::Invalid)?;
    let mut agents = load_agents(&a.agents)?;
    if let Some(r) = clip {
        for ag in agents.iter_mut() {
            ag.density = ag.density.restricted(&r);
        }
    }
    let div = (proc_.run)(&agents, &cake).map_err(|e| match e {
        fairsquare::Error::Invariant(_) => Fail::Guarantee(format!("{}: {}", proc_.name, e)),
        _ => Fail::Invalid(format!("{} (row '{}'): {}", proc_.name, proc_.row, e)),
    })?;
    let doc = io::division_to_json(&div, &cake, proc_.family);
    let text = serde_json::to_string_pretty(&doc).expect("json") + "\n";
    match &a.out {
        Some(p) => write_atomic(p, &text)?,
        None => print!("{}", text),
    }
    if let Some(p) = &a.svg {
        let title = format!("{}: bound {}", div.report.procedure, div.report.bound);
        write_atomic(p, &render::render_svg(&div.report.results, &cake, &title))?;
    }
    eprintln!("{}: n={} bound {} min fraction {:.6}", div.report.procedure, div.report.n, div.report.bound, div.report.min_fraction());
    verify(&div, &agents, &cake, proc_.family, &Tolerances::from_env()).map_err(|e| Fail::Guarantee(e.to_string()))
}

fn adversary(a: AdversaryArgs) -> Res<()> {
    let kind: PoolKind = a.cake.parse().map_err(invalid)?;
    let arr = gen_pools(kind, a.n, a.eps).map_err(invalid)?;
    let d = arr.density().map_err(invalid)?;
    let cake = arr.cake();
    println!("kind: {}", kind);
    println!("agents: {}", a.n);
    println!("pools: {}", arr.pools.len());
    println!("bound: {:.6}", arr.bound());
    if let Some(p) = &a.out {
        write_atomic(p, &(serde_json::to_string_pretty(&io::density_to_json(&d)).expect("json") + "\n"))?;
    }
    if let Some(p) = &a.cake_out {
        write_atomic(p, &(serde_json::to_string_pretty(&io::cake_to_json(&cake)).expect("json") + "\n"))?;
    }
    if a.probe > 0 {
        let best = probe_upper_bound(&d, &cake, a.n, a.probe, a.seed).map_err(invalid)?;
        println!("probe max: {:.6}", best);
        if best > arr.bound() + Tolerances::from_env().probe {
            return Err(Fail::Guarantee(format!("probe found {} above the bound {}", best, arr.bound())));
        }
    }
    Ok(())
}

fn probe(a: ProbeArgs) -> Res<()> {
    let (cake, clip) = build_cake(&a.cake)?;
    let mut d: GridDensity<f64> = io::density_from_json(&read_json(&a.density)?).map_err(invalid)?;
    if let Some(r) = clip {
        d = d.restricted(&r);
    }
    let best = probe_upper_bound(&d, &cake, a.n, a.trials, a.seed).map_err(invalid)?;
    println!("probe max: {:.6}", best);
    match a.bound {
        Some(b) if best > b + Tolerances::from_env().probe => Err(Fail::Guarantee(format!("probe found {} above the bound {}", best, b))),
        _ => Ok(()),
    }
}

fn render(a: RenderArgs) -> Res<()> {
    let doc = io::division_from_json(&read_json(&a.division)?).map_err(invalid)?;
    let r = &doc.division.report;
    let title = format!("{}: bound {}", r.procedure, r.bound);
    write_atomic(&a.out, &render::render_svg(&r.results, &doc.cake, &title))
}

fn verify_cmd(a: VerifyArgs) -> Res<()> {
    let doc = io::division_from_json(&read_json(&a.division)?).map_err(invalid)?;
    let agents = load_agents(&a.agents)?;
    verify(&doc.division, &agents, &doc.cake, doc.family, &Tolerances::from_env()).map_err(|e| Fail::Guarantee(e.to_string()))?;
    println!("ok: {} agents, min fraction {:.6}", agents.len(), doc.division.report.min_fraction());
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let res = match cli.cmd {
        Cmd::Divide(a) => divide(a),
        Cmd::Adversary(a) => adversary(a),
        Cmd::Probe(a) => probe(a),
        Cmd::Render(a) => render(a),
        Cmd::Verify(a) => verify_cmd(a),
    };
    match res {
        Ok(()) => ExitCode::SUCCESS,
        Err(Fail::Invalid(m)) => {
            eprintln!("error: {}", m);
            ExitCode::from(2)
        }
        Err(Fail::Guarantee(m)) => {
            eprintln!("guarantee failed: {}", m);
            ExitCode::from(3)
        }
    }
}
