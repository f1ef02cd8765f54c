use std::fs::File;
use std::io::{self, BufReader, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use transmission_spanner::bfs::bfs_tree;
use transmission_spanner::decomposition::verify::check_decomposition;
use transmission_spanner::geometry::{cone_index, Point, Site};
use transmission_spanner::instance::{generate, Distribution, InstanceSpec, RadiusModel};
use transmission_spanner::io::{read_sites, read_spanner, write_sites, write_spanner};
use transmission_spanner::normalize::radius_ratio;
use transmission_spanner::oracle::{all_pairs, apsp_cap, audit_stretch_against, bfs_oracle, materialize};
use transmission_spanner::par::Execution;
use transmission_spanner::params::spanner_parameters;
use transmission_spanner::reachability::{build_base_oracle, build_geom_oracle};
use transmission_spanner::spanner::{build_spanner, prepare, verify_shorter_edge, BuildOptions, SpannerGraph, Variant};

#[derive(Parser)]
#[command(name = "tspan", version, about = "Spanners, BFS trees and reachability for transmission graphs")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Write a random instance as `x y r` lines.
    Generate(GenerateArgs),
    /// Build a spanner for a site file.
    Build(BuildArgs),
    /// Check a spanner against the brute-force transmission graph.
    Verify(VerifyArgs),
    /// Hop distances from a root, computed with the spanner.
    Bfs(BfsArgs),
    /// Whether a site reaches a point of the plane.
    Reach(ReachArgs),
    /// Size and in-degree statistics of a fresh build.
    Stats(StatsArgs),
    /// Print the quadtree decomposition used by a variant.
    Inspect(InspectArgs),
}

#[derive(Clone, Copy, ValueEnum)]
enum DistArg {
    UniformSquare,
    Clustered,
    Grid,
}

#[derive(Clone, Copy, ValueEnum)]
enum RadiusArg {
    Constant,
    Uniform,
    Pareto,
}

#[derive(Args)]
struct GenerateArgs {
    #[arg(long)]
    n: usize,
    #[arg(long, value_enum, default_value = "uniform-square")]
    distribution: DistArg,
    #[arg(long, value_enum, default_value = "constant")]
    radius: RadiusArg,
    /// Largest radius ratio; the uniform model draws factors from `[1, psi-cap]`.
    #[arg(long, default_value_t = 4.0)]
    psi_cap: f64,
    /// Tail exponent of the pareto model.
    #[arg(long, default_value_t = 1.5)]
    alpha: f64,
    #[arg(long, default_value_t = 1.5)]
    base_radius: f64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct BuildOpts {
    #[arg(long, default_value_t = 2.0)]
    t: f64,
    #[arg(long, default_value = "ratio")]
    variant: Variant,
    /// Run every stage on the calling thread.
    #[arg(long)]
    sequential: bool,
}

impl BuildOpts {
    fn options(&self) -> BuildOptions {
        if self.sequential {
            BuildOptions::sequential()
        } else {
            BuildOptions { execution: Execution::default() }
        }
    }
}

#[derive(Args)]
struct BuildArgs {
    sites: PathBuf,
    #[command(flatten)]
    opts: BuildOpts,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct VerifyArgs {
    sites: PathBuf,
    spanner: PathBuf,
    /// Stretch to check; defaults to the one recorded in the spanner file.
    #[arg(long)]
    t: Option<f64>,
    /// Builder that produced the spanner; selects the witness exemptions and
    /// the decomposition check.
    #[arg(long, default_value = "ratio")]
    variant: Variant,
}

#[derive(Args)]
struct BfsArgs {
    sites: PathBuf,
    spanner: PathBuf,
    #[arg(long)]
    root: usize,
    /// Also compare against a brute-force BFS.
    #[arg(long)]
    check: bool,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct ReachArgs {
    sites: PathBuf,
    #[arg(long)]
    source: usize,
    #[arg(long, allow_hyphen_values = true)]
    target_x: f64,
    #[arg(long, allow_hyphen_values = true)]
    target_y: f64,
    /// Print the cover set used to answer.
    #[arg(long)]
    explain: bool,
}

#[derive(Args)]
struct StatsArgs {
    sites: PathBuf,
    #[command(flatten)]
    opts: BuildOpts,
    /// Comma-separated output.
    #[arg(long)]
    csv: bool,
}

#[derive(Args)]
struct InspectArgs {
    sites: PathBuf,
    #[arg(long, default_value_t = 2.0)]
    t: f64,
    #[arg(long, default_value = "ratio")]
    variant: Variant,
    /// Print every node instead of a per-level summary.
    #[arg(long)]
    dump: bool,
}

/// Outcome of a command that ran to completion.
enum Status {
    Pass,
    Violation,
}

fn output(path: &Option<PathBuf>) -> Result<Box<dyn Write>> {
    Ok(match path {
        Some(p) => Box::new(BufWriter::new(File::create(p).with_context(|| format!("creating {}", p.display()))?)),
        None => Box::new(BufWriter::new(io::stdout().lock())),
    })
}

fn load_sites(path: &Path) -> Result<Vec<Site>> {
    let f = File::open(path).with_context(|| format!("opening {}", path.display()))?;
    read_sites(BufReader::new(f)).with_context(|| format!("reading {}", path.display()))
}

fn load_spanner(path: &Path, n: usize) -> Result<SpannerGraph> {
    let f = File::open(path).with_context(|| format!("opening {}", path.display()))?;
    let h = read_spanner(BufReader::new(f)).with_context(|| format!("reading {}", path.display()))?;
    if h.n != n {
        bail!("spanner has {} vertices but the site file has {n}", h.n);
    }
    Ok(h)
}

fn generate_cmd(a: &GenerateArgs) -> Result<Status> {
    if a.psi_cap < 1.0 {
        bail!("--psi-cap must be at least 1");
    }
    let distribution = match a.distribution {
        DistArg::UniformSquare => Distribution::UniformSquare,
        DistArg::Clustered => Distribution::Clustered,
        DistArg::Grid => Distribution::Grid,
    };
    let radius = match a.radius {
        RadiusArg::Constant => RadiusModel::Constant,
        RadiusArg::Uniform => RadiusModel::Uniform { lo: 1.0, hi: a.psi_cap },
        RadiusArg::Pareto => RadiusModel::Pareto { alpha: a.alpha, cap: a.psi_cap },
    };
    let spec = InstanceSpec { base_radius: a.base_radius, ..InstanceSpec::new(a.n, distribution, radius, a.seed) };
    let sites = generate(&spec);
    let mut w = output(&a.out)?;
    write_sites(&mut w, &sites)?;
    w.flush()?;
    Ok(Status::Pass)
}

fn build_cmd(a: &BuildArgs) -> Result<Status> {
    let sites = load_sites(&a.sites)?;
    let (h, report) = build_spanner(&sites, a.opts.t, a.opts.variant, a.opts.options())?;
    let mut w = output(&a.out)?;
    write_spanner(&mut w, &h)?;
    w.flush()?;
    eprintln!("{} sites, {} edges, {} levels, {} nodes", sites.len(), h.m(), report.levels, report.nodes);
    Ok(Status::Pass)
}

fn verify_cmd(a: &VerifyArgs) -> Result<Status> {
    let sites = load_sites(&a.sites)?;
    let h = load_spanner(&a.spanner, sites.len())?;
    let t = a.t.unwrap_or(h.t);
    let g = materialize(&sites)?;
    let mut ok = true;

    let foreign = h.edges().filter(|&(p, q, _)| !g.contains(p, q)).count();
    println!("subgraph: {foreign} edges outside the transmission graph");
    ok &= foreign == 0;

    if sites.len() <= apsp_cap() {
        let dg = all_pairs(&g, Execution::default())?;
        let r = audit_stretch_against(&dg, &h, t, Execution::default());
        println!("stretch: max {:.6} over {} pairs, {} above t = {t}", r.max_ratio, r.pairs, r.violations.len());
        ok &= r.is_ok();
    } else {
        println!("stretch: skipped, n = {} exceeds the all-pairs cap {}", sites.len(), apsp_cap());
    }

    let w = verify_shorter_edge(&sites, &h, a.variant)?;
    println!(
        "witness: {} missing edges checked, {} exempt, {} without a witness",
        w.checked,
        w.skipped,
        w.violations.len()
    );
    ok &= w.is_ok();

    if sites.len() >= 2 {
        let params = spanner_parameters(t)?;
        let prep = prepare(&sites, &params, a.variant)?;
        let edges: Vec<(usize, usize)> = g.edges().collect();
        let d = check_decomposition(&prep.decomposition, &edges);
        println!(
            "decomposition: {} neighbor pairs, {} separation and {} symmetry violations, {} uncovered edges",
            d.neighbor_pairs,
            d.separation_violations.len(),
            d.symmetry_violations.len(),
            d.uncovered_edges.len()
        );
        ok &= d.is_ok();
        let bound = a.variant.sparsity_bound(&params);
        let density = h.m() as f64 / sites.len() as f64;
        println!("sparsity: m/n = {density:.3}, bound {bound:.0}");
        ok &= density <= bound;
    }
    println!("{}", if ok { "PASS" } else { "FAIL" });
    Ok(if ok { Status::Pass } else { Status::Violation })
}

fn bfs_cmd(a: &BfsArgs) -> Result<Status> {
    let sites = load_sites(&a.sites)?;
    let h = load_spanner(&a.spanner, sites.len())?;
    let r = bfs_tree(&sites, &h, a.root)?;
    let mut w = output(&a.out)?;
    for q in 0..sites.len() {
        let d = r.dist[q].map_or("inf".to_string(), |d| d.to_string());
        let p = r.parent[q].map_or("-".to_string(), |p| p.to_string());
        writeln!(w, "{q} {d} {p}")?;
    }
    w.flush()?;
    if a.check {
        let g = materialize(&sites)?;
        let want = bfs_oracle(&g, a.root);
        let wrong = (0..sites.len()).filter(|&q| want[q] != r.dist[q]).count();
        eprintln!("check: {wrong} sites differ from brute-force BFS");
        if wrong > 0 {
            return Ok(Status::Violation);
        }
    }
    Ok(Status::Pass)
}

fn reach_cmd(a: &ReachArgs) -> Result<Status> {
    let sites = load_sites(&a.sites)?;
    if a.source >= sites.len() {
        bail!("source {} out of range for {} sites", a.source, sites.len());
    }
    let oracle = build_geom_oracle(&sites, build_base_oracle(&sites)?)?;
    let t = Point::new(a.target_x, a.target_y);
    let answer = oracle.geom_reach(a.source, t);
    println!("{answer}");
    if a.explain {
        let q = oracle.cover_set(t);
        println!("cover set ({} sites, bound {}):", q.len(), oracle.cover_set_bound());
        for &s in &q.sites {
            let p = &sites[s];
            let tag = if q.near.contains(&s) { "near" } else { "cone" };
            println!("  {s} ({}, {}) r={} {tag} reached={}", p.x, p.y, p.radius, oracle.base().reach(a.source, s));
        }
    }
    Ok(Status::Pass)
}

/// How many sites have exactly `i` incoming edges from one cone.
fn cone_histogram(sites: &[Site], h: &SpannerGraph) -> Vec<usize> {
    let mut hist = Vec::new();
    let mut per_cone = vec![0usize; h.k];
    for q in 0..sites.len() {
        per_cone.iter_mut().for_each(|c| *c = 0);
        for (r, _) in h.in_edges(q) {
            if let Some(j) = cone_index(sites[q].point(), sites[r].point(), h.k) {
                per_cone[j] += 1;
            }
        }
        for &c in &per_cone {
            if c >= hist.len() {
                hist.resize(c + 1, 0);
            }
            hist[c] += 1;
        }
    }
    hist
}

fn stats_cmd(a: &StatsArgs) -> Result<Status> {
    let sites = load_sites(&a.sites)?;
    let start = Instant::now();
    let (h, report) = build_spanner(&sites, a.opts.t, a.opts.variant, a.opts.options())?;
    let secs = start.elapsed().as_secs_f64();
    let n = sites.len();
    let density = if n == 0 { 0.0 } else { h.m() as f64 / n as f64 };
    let psi = if n == 0 { 1.0 } else { radius_ratio(&sites) };
    let hist = cone_histogram(&sites, &h);
    let rows: Vec<(String, String)> = vec![
        ("variant".into(), a.opts.variant.to_string()),
        ("t".into(), h.t.to_string()),
        ("k".into(), h.k.to_string()),
        ("c".into(), h.c.to_string()),
        ("n".into(), n.to_string()),
        ("m".into(), h.m().to_string()),
        ("m_per_n".into(), format!("{density:.4}")),
        ("psi".into(), format!("{psi:.4}")),
        ("levels".into(), report.levels.to_string()),
        ("nodes".into(), report.nodes.to_string()),
        ("neighbor_pairs".into(), report.neighbor_pairs.to_string()),
        ("clique_edges".into(), report.clique_edges.to_string()),
        ("max_cone_in_degree".into(), report.max_cone_in_degree.to_string()),
        ("build_seconds".into(), format!("{secs:.4}")),
    ];
    let mut w = io::stdout().lock();
    if a.csv {
        writeln!(w, "key,value")?;
        for (k, v) in &rows {
            writeln!(w, "{k},{v}")?;
        }
        writeln!(w)?;
        writeln!(w, "cone_in_degree,sites_times_cones")?;
        for (d, c) in hist.iter().enumerate() {
            writeln!(w, "{d},{c}")?;
        }
    } else {
        let width = rows.iter().map(|r| r.0.len()).max().unwrap_or(0);
        for (k, v) in &rows {
            writeln!(w, "{k:<width$}  {v}")?;
        }
        writeln!(w, "\nin-degree per cone  count")?;
        for (d, c) in hist.iter().enumerate() {
            writeln!(w, "{d:>18}  {c}")?;
        }
    }
    Ok(Status::Pass)
}

fn inspect_cmd(a: &InspectArgs) -> Result<Status> {
    let sites = load_sites(&a.sites)?;
    if sites.len() < 2 {
        bail!("need at least two sites");
    }
    let params = spanner_parameters(a.t)?;
    let prep = prepare(&sites, &params, a.variant)?;
    let dec = &prep.decomposition;
    let s = &dec.structure;
    let mut w = io::stdout().lock();
    writeln!(
        w,
        "variant {} t {} k {} c {} scale {:.6e}",
        a.variant, params.t, params.k, params.c, prep.normalization.scale
    )?;
    if a.dump {
        writeln!(w, "# level ix iy sites m assigned")?;
        dec.dump(&mut w)?;
        return Ok(Status::Pass);
    }
    writeln!(w, "{:>5} {:>8} {:>10} {:>10} {:>10}", "level", "nodes", "assigned", "neighbors", "max_sites")?;
    for level in 0..s.level_count() as u32 {
        let nodes = s.nodes_at_level(level);
        let assigned: usize = nodes.iter().map(|&v| s.nodes[v].assigned.len()).sum();
        let neighbors: usize = nodes.iter().map(|&v| dec.incoming[v].len()).sum();
        let max_sites = nodes.iter().map(|&v| s.nodes[v].len()).max().unwrap_or(0);
        writeln!(w, "{level:>5} {:>8} {assigned:>10} {neighbors:>10} {max_sites:>10}", nodes.len())?;
    }
    Ok(Status::Pass)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match &cli.command {
        Command::Generate(a) => generate_cmd(a),
        Command::Build(a) => build_cmd(a),
        Command::Verify(a) => verify_cmd(a),
        Command::Bfs(a) => bfs_cmd(a),
        Command::Reach(a) => reach_cmd(a),
        Command::Stats(a) => stats_cmd(a),
        Command::Inspect(a) => inspect_cmd(a),
    };
    match result {
        Ok(Status::Pass) => ExitCode::SUCCESS,
        Ok(Status::Violation) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
