//! End-to-end acceptance run. Prints one `PASS`/`FAIL` line per criterion
//! and exits nonzero if a gating criterion fails.

use std::collections::HashSet;
use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use transmission_spanner::bfs::bfs_tree;
use transmission_spanner::decomposition::verify::check_decomposition;
use transmission_spanner::decomposition::{
    build_compressed_quadtree, compute_wspd, partition_components, partition_components_bruteforce,
};
use transmission_spanner::geometry::{cell_distance, Point, Site};
use transmission_spanner::instance::{generate, Distribution, InstanceSpec, RadiusModel};
use transmission_spanner::normalize::{normalize, NormalizeMode};
use transmission_spanner::oracle::{all_pairs, audit_stretch_against, bfs_oracle, geom_reach_oracle, materialize};
use transmission_spanner::par::{map_slice, Execution};
use transmission_spanner::params::spanner_parameters;
use transmission_spanner::reachability::{build_base_oracle, build_geom_oracle};
use transmission_spanner::spanner::{
    build_spanner, prepare, select_edges_bruteforce, select_edges_envelope, verify_shorter_edge, BuildOptions,
    SeparatingLine, Variant,
};

const STRETCHES: [f64; 3] = [1.5, 2.0, 3.0];

fn models() -> [RadiusModel; 3] {
    [RadiusModel::Constant, RadiusModel::Uniform { lo: 1.0, hi: 4.0 }, RadiusModel::Pareto { alpha: 1.5, cap: 32.0 }]
}

fn distribution(seed: u64) -> Distribution {
    if seed.is_multiple_of(2) {
        Distribution::UniformSquare
    } else {
        Distribution::Clustered
    }
}

struct Outcome {
    pass: bool,
    gating: bool,
    detail: String,
}

impl Outcome {
    fn gate(pass: bool, detail: String) -> Self {
        Self { pass, gating: true, detail }
    }
}

/// Results of the shared stretch/witness/bound sweep.
#[derive(Default)]
struct MatrixStats {
    builds: usize,
    pairs: usize,
    max_ratio: f64,
    stretch_violations: usize,
    witness_checked: usize,
    witness_violations: usize,
    bound_violations: usize,
    worst_density: f64,
}

fn run_matrix() -> MatrixStats {
    let mut jobs = Vec::new();
    for n in [50, 200, 500] {
        for model in models() {
            for seed in 0..30u64 {
                jobs.push(InstanceSpec::new(n, distribution(seed), model, 1000 * n as u64 + seed));
            }
        }
    }
    let per_job = map_slice(Execution::default(), &jobs, |spec| {
        let sites = generate(spec);
        let g = materialize(&sites).expect("within materialization cap");
        let dg = all_pairs(&g, Execution::Sequential).expect("within all-pairs cap");
        let mut s = MatrixStats::default();
        for t in STRETCHES {
            let params = spanner_parameters(t).unwrap();
            for v in Variant::ALL {
                let (h, _) = build_spanner(&sites, t, v, BuildOptions::sequential()).unwrap();
                s.builds += 1;
                let r = audit_stretch_against(&dg, &h, t, Execution::Sequential);
                s.pairs += r.pairs;
                s.max_ratio = s.max_ratio.max(r.max_ratio);
                s.stretch_violations += r.violations.len();
                let w = verify_shorter_edge(&sites, &h, v).unwrap();
                s.witness_checked += w.checked;
                s.witness_violations += w.violations.len();
                let density = h.m() as f64 / sites.len() as f64;
                s.worst_density = s.worst_density.max(density / v.sparsity_bound(&params));
                if density > v.sparsity_bound(&params) {
                    s.bound_violations += 1;
                }
            }
        }
        s
    });
    per_job.into_iter().fold(MatrixStats::default(), |mut a, s| {
        a.builds += s.builds;
        a.pairs += s.pairs;
        a.max_ratio = a.max_ratio.max(s.max_ratio);
        a.stretch_violations += s.stretch_violations;
        a.witness_checked += s.witness_checked;
        a.witness_violations += s.witness_violations;
        a.bound_violations += s.bound_violations;
        a.worst_density = a.worst_density.max(s.worst_density);
        a
    })
}

fn stretch(m: &MatrixStats) -> Outcome {
    Outcome::gate(
        m.stretch_violations == 0,
        format!(
            "{} builds, {} ordered pairs, max d_H/d_G over t = {:.6}, {} violations",
            m.builds, m.pairs, m.max_ratio, m.stretch_violations
        ),
    )
}

fn witness(m: &MatrixStats) -> Outcome {
    Outcome::gate(
        m.witness_violations == 0,
        format!("{} missing edges checked, {} without a witness", m.witness_checked, m.witness_violations),
    )
}

fn decomposition() -> Outcome {
    let mut checked = 0;
    let mut bad = Vec::new();
    for (i, model) in models().into_iter().enumerate() {
        for dist in [Distribution::UniformSquare, Distribution::Clustered, Distribution::Grid] {
            let sites = generate(&InstanceSpec::new(200, dist, model, 77 + i as u64));
            let edges: Vec<(usize, usize)> = materialize(&sites).unwrap().edges().collect();
            for t in STRETCHES {
                let params = spanner_parameters(t).unwrap();
                for v in Variant::ALL {
                    let prep = prepare(&sites, &params, v).unwrap();
                    let rep = check_decomposition(&prep.decomposition, &edges);
                    checked += rep.edges_checked;
                    if !rep.is_ok() {
                        bad.push(format!("{v}/t={t}/{model:?}/{dist:?}"));
                    }
                }
            }
        }
    }
    Outcome::gate(bad.is_empty(), format!("{checked} edge checks over 81 decompositions; failing: {bad:?}"))
}

fn sparsity(m: &MatrixStats) -> Vec<Outcome> {
    let bound = Outcome::gate(
        m.bound_violations == 0,
        format!(
            "bound: {} of {} builds above B(k, c); largest m/(nB) = {:.2e}",
            m.bound_violations, m.builds, m.worst_density
        ),
    );
    let sizes = [100, 200, 400, 800];
    let mut increases = Vec::new();
    let mut series = Vec::new();
    for model in models() {
        for v in Variant::ALL {
            let means: Vec<f64> = sizes
                .iter()
                .map(|&n| {
                    let seeds = 5;
                    (0..seeds)
                        .map(|seed| {
                            let sites = generate(&InstanceSpec::new(n, Distribution::UniformSquare, model, 500 + seed));
                            let (h, _) = build_spanner(&sites, 2.0, v, BuildOptions::default()).unwrap();
                            h.m() as f64 / n as f64
                        })
                        .sum::<f64>()
                        / seeds as f64
                })
                .collect();
            for w in means.windows(2) {
                if w[1] > w[0] {
                    increases.push(w[1] / w[0] - 1.0);
                }
            }
            series.push(format!(
                "{v}/{}: {}",
                model_name(model),
                means.iter().map(|x| format!("{x:.2}")).collect::<Vec<_>>().join(" ")
            ));
        }
    }
    let trend = Outcome {
        pass: increases.is_empty(),
        gating: false,
        detail: format!(
            "trend over n = {sizes:?}: {} increasing steps (largest +{:.1}%); m/n tracks the transmission graph's own degree at these sizes\n    {}",
            increases.len(),
            100.0 * increases.iter().copied().fold(0.0, f64::max),
            series.join("\n    ")
        ),
    };
    vec![bound, trend]
}

fn model_name(m: RadiusModel) -> &'static str {
    match m {
        RadiusModel::Constant => "constant",
        RadiusModel::Uniform { .. } => "uniform",
        RadiusModel::Pareto { .. } => "pareto",
    }
}

fn orient(s: &Site, mode: u32) -> Site {
    let (x, y) = match mode {
        0 => (s.x, s.y),
        1 => (s.x, -s.y),
        2 => (s.y, s.x),
        _ => (-s.y, s.x),
    };
    Site::new(s.id, x, y, s.radius)
}

fn envelope() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let mut mismatches = 0;
    let mut covered = 0;
    let mut total = 0;
    for trial in 0..1000u32 {
        let m = rng.gen_range(1..=50);
        let n = rng.gen_range(1..=200);
        let mode = trial % 4;
        let r: Vec<Site> = (0..m)
            .map(|i| {
                orient(
                    &Site::new(
                        1000 + i,
                        rng.gen_range(-20.0..20.0),
                        rng.gen_range(0.05..15.0),
                        rng.gen_range(0.3..25.0),
                    ),
                    mode,
                )
            })
            .collect();
        let mut q: Vec<Site> = (0..n)
            .map(|i| orient(&Site::new(i, rng.gen_range(-30.0..30.0), rng.gen_range(-15.0..-0.01), 1.0), mode))
            .collect();
        let vertical = mode >= 2;
        q.sort_by(|a, b| if vertical { a.y.total_cmp(&b.y) } else { a.x.total_cmp(&b.x) });
        let line = if vertical { SeparatingLine::Vertical(0.0) } else { SeparatingLine::Horizontal(0.0) };
        let got = select_edges_envelope(&q, &r, line).unwrap();
        let want = select_edges_bruteforce(&q, &r);
        let gq: HashSet<usize> = got.iter().map(|e| e.1).collect();
        let wq: HashSet<usize> = want.iter().map(|e| e.1).collect();
        let sound = got.iter().all(|&(rid, qid)| r[rid - 1000].covers(q.iter().find(|s| s.id == qid).unwrap().point()));
        if gq != wq || !sound || gq.len() != got.len() {
            mismatches += 1;
        }
        covered += wq.len();
        total += n;
    }
    Outcome::gate(
        mismatches == 0,
        format!("1000 instances, {covered}/{total} queries covered, {mismatches} mismatches"),
    )
}

fn wspd() -> Outcome {
    let c = spanner_parameters(2.0).unwrap().cf();
    let mut problems = 0;
    let mut pairs_total = 0;
    for (n, seed) in [(60, 1), (150, 2), (300, 3), (300, 4)] {
        let sites = generate(&InstanceSpec::new(n, distribution(seed), RadiusModel::Constant, seed));
        let (norm, _) = normalize(&sites, NormalizeMode::ClosestPair(c + 2.0)).unwrap();
        let tree = build_compressed_quadtree(norm).unwrap();
        let pairs = compute_wspd(&tree, c);
        pairs_total += pairs.len();
        let mut seen = HashSet::new();
        for p in &pairs {
            let (a, b) = (tree.nodes[p.v].cell, tree.nodes[p.w].cell);
            if !p.separation_ok || c * a.diameter().max(b.diameter()) > cell_distance(&a, &b) * (1.0 + 1e-12) {
                problems += 1;
            }
            for &x in tree.sites_of(p.v) {
                for &y in tree.sites_of(p.w) {
                    problems += usize::from(!seen.insert((x, y))) + usize::from(!seen.insert((y, x)));
                }
            }
        }
        problems += n * (n - 1) - seen.len().min(n * (n - 1));
    }
    Outcome::gate(problems == 0, format!("{pairs_total} pairs on n <= 300, {problems} coverage or separation problems"))
}

fn bfs() -> Outcome {
    let mut jobs = Vec::new();
    for (i, model) in models().into_iter().enumerate() {
        for seed in 0..10u64 {
            jobs.push(InstanceSpec::new(300, distribution(seed), model, 9000 + 100 * i as u64 + seed));
        }
    }
    let results = map_slice(Execution::default(), &jobs, |spec| {
        let sites = generate(spec);
        let g = materialize(&sites).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
        let roots: Vec<usize> = (0..10).map(|_| rng.gen_range(0..sites.len())).collect();
        let mut wrong = 0;
        let mut max_relax = 0;
        for v in Variant::ALL {
            let (h, _) = build_spanner(&sites, 2.0, v, BuildOptions::sequential()).unwrap();
            for &root in &roots {
                let r = bfs_tree(&sites, &h, root).unwrap();
                max_relax = max_relax.max(r.max_relaxations());
                if r.dist != bfs_oracle(&g, root) {
                    wrong += 1;
                }
            }
        }
        (wrong, max_relax)
    });
    let wrong: usize = results.iter().map(|r| r.0).sum();
    let relax = results.iter().map(|r| r.1).max().unwrap_or(0);
    Outcome::gate(
        wrong == 0 && relax <= 2,
        format!("30 instances x 10 roots x 3 variants: {wrong} mismatching trees, max relaxations per edge {relax}"),
    )
}

fn sample_point(rng: &mut ChaCha8Rng, sites: &[Site]) -> Point {
    if rng.gen_bool(0.75) {
        let s = sites[rng.gen_range(0..sites.len())];
        let a = rng.gen_range(0.0..std::f64::consts::TAU);
        let d = s.radius * rng.gen_range(0.0f64..1.1).sqrt();
        Point::new(s.x + d * a.cos(), s.y + d * a.sin())
    } else {
        let hi = sites.iter().fold(0.0f64, |m, s| m.max(s.x).max(s.y));
        Point::new(rng.gen_range(-5.0..hi + 5.0), rng.gen_range(-5.0..hi + 5.0))
    }
}

fn geometric_reachability() -> Outcome {
    let mut jobs = Vec::new();
    for (i, model) in models().into_iter().enumerate() {
        for seed in 0..4u64 {
            jobs.push(InstanceSpec::new(300, distribution(seed), model, 7000 + 10 * i as u64 + seed));
        }
    }
    let results = map_slice(Execution::default(), &jobs, |spec| {
        let sites = generate(spec);
        let g = materialize(&sites).unwrap();
        let o = build_geom_oracle(&sites, build_base_oracle(&sites).unwrap()).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
        let (mut wrong, mut oversize, mut uncovered, mut largest) = (0, 0, 0, 0);
        for _ in 0..1000 {
            let t = sample_point(&mut rng, &sites);
            let s = rng.gen_range(0..sites.len());
            let q = o.cover_set(t);
            largest = largest.max(q.len());
            oversize += usize::from(q.len() > o.cover_set_bound());
            uncovered += q.sites.iter().filter(|&&m| !sites[m].covers(t)).count();
            uncovered +=
                sites.iter().filter(|p| p.covers(t) && !q.sites.iter().any(|&m| p.covers(sites[m].point()))).count();
            wrong += usize::from(o.geom_reach(s, t) != geom_reach_oracle(&sites, &g, s, t));
        }
        (wrong, oversize, uncovered, largest, o.cover_set_bound())
    });
    let wrong: usize = results.iter().map(|r| r.0).sum();
    let oversize: usize = results.iter().map(|r| r.1).sum();
    let uncovered: usize = results.iter().map(|r| r.2).sum();
    let largest = results.iter().map(|r| r.3).max().unwrap_or(0);
    let bound = results[0].4;
    Outcome::gate(
        wrong + oversize + uncovered == 0,
        format!(
            "12 instances x 1000 queries: {wrong} wrong answers, {uncovered} coverage failures, largest |Q| = {largest} (bound {bound}, {oversize} over)"
        ),
    )
}

fn components() -> Outcome {
    let mut crossing = 0;
    let mut mismatched = 0;
    let mut groups = 0;
    let mut instances = 0;
    for (seed, dist) in [
        (1, Distribution::Clustered),
        (2, Distribution::UniformSquare),
        (3, Distribution::Grid),
        (4, Distribution::Clustered),
    ] {
        for base_radius in [1.5, 0.3, 0.1] {
            instances += 1;
            let spec = InstanceSpec {
                base_radius,
                ..InstanceSpec::new(500, dist, RadiusModel::Pareto { alpha: 2.0, cap: 16.0 }, seed)
            };
            let sites = generate(&spec);
            let m = sites.iter().map(|s| s.radius).fold(0.0, f64::max);
            let parts = partition_components(&sites, m);
            mismatched += usize::from(parts != partition_components_bruteforce(&sites, m));
            groups += parts.len();
            let mut class = vec![usize::MAX; sites.len()];
            for (g, members) in parts.iter().enumerate() {
                for &p in members {
                    class[p] = g;
                }
            }
            crossing += materialize(&sites).unwrap().edges().filter(|&(p, q)| class[p] != class[q]).count();
        }
    }
    Outcome::gate(
        crossing == 0 && mismatched == 0,
        format!("{groups} classes over {instances} instances, {crossing} crossing edges, {mismatched} sweep/brute-force mismatches"),
    )
}

fn performance() -> Outcome {
    let sites = generate(&InstanceSpec::new(
        100_000,
        Distribution::UniformSquare,
        RadiusModel::Pareto { alpha: 1.5, cap: 64.0 },
        1,
    ));
    let start = Instant::now();
    let (h, _) = build_spanner(&sites, 2.0, Variant::Ratio, BuildOptions::default()).unwrap();
    let took = start.elapsed();
    Outcome {
        pass: took < Duration::from_secs(60),
        gating: false,
        detail: format!("n = 100000, m = {}, {:.1} s", h.m(), took.as_secs_f64()),
    }
}

fn report(id: &str, name: &str, o: &Outcome, failed: &mut bool) {
    let status = if o.pass { "PASS" } else { "FAIL" };
    let note = if o.gating { "" } else { " (recorded, not gating)" };
    println!("criterion {id} {name}: {status}{note}\n    {}", o.detail);
    if o.gating && !o.pass {
        *failed = true;
    }
}

fn main() {
    let start = Instant::now();
    let mut failed = false;
    let matrix = run_matrix();
    report("1", "stretch", &stretch(&matrix), &mut failed);
    report("2", "shorter-edge witness", &witness(&matrix), &mut failed);
    report("3", "decomposition", &decomposition(), &mut failed);
    let sp = sparsity(&matrix);
    report("4a", "sparsity bound", &sp[0], &mut failed);
    report("4b", "sparsity trend", &sp[1], &mut failed);
    report("5", "envelope", &envelope(), &mut failed);
    report("6", "wspd", &wspd(), &mut failed);
    report("7", "bfs", &bfs(), &mut failed);
    report("8", "geometric reachability", &geometric_reachability(), &mut failed);
    report("9", "components", &components(), &mut failed);
    report("10", "performance", &performance(), &mut failed);
    println!("acceptance finished in {:.1} s", start.elapsed().as_secs_f64());
    if failed {
        std::process::exit(1);
    }
}
