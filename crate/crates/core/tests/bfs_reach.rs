use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use transmission_spanner::bfs::bfs_tree;
use transmission_spanner::geometry::{Point, Site};
use transmission_spanner::instance::{generate, Distribution, InstanceSpec, RadiusModel};
use transmission_spanner::oracle::{bfs_oracle, geom_reach_oracle, materialize};
use transmission_spanner::reachability::{build_base_oracle, build_geom_oracle, BaseOracle};
use transmission_spanner::spanner::{build_spanner, BuildOptions, Variant};

fn instances() -> Vec<Vec<Site>> {
    vec![
        generate(&InstanceSpec::new(300, Distribution::UniformSquare, RadiusModel::Constant, 1)),
        generate(&InstanceSpec::new(300, Distribution::Clustered, RadiusModel::Uniform { lo: 1.0, hi: 4.0 }, 2)),
        generate(&InstanceSpec::new(
            250,
            Distribution::UniformSquare,
            RadiusModel::Pareto { alpha: 1.5, cap: 32.0 },
            3,
        )),
    ]
}

#[test]
fn bfs_matches_oracle_for_every_variant() {
    for sites in instances() {
        let g = materialize(&sites).unwrap();
        for v in Variant::ALL {
            let (h, _) = build_spanner(&sites, 2.0, v, BuildOptions::default()).unwrap();
            for root in (0..sites.len()).step_by(37) {
                let r = bfs_tree(&sites, &h, root).unwrap();
                assert_eq!(r.dist, bfs_oracle(&g, root), "{v} root {root}");
                assert!(r.max_relaxations() <= 2);
                for (q, p) in r.parent.iter().enumerate() {
                    if let Some(p) = *p {
                        assert_eq!(r.dist[p].unwrap() + 1, r.dist[q].unwrap());
                        assert!(g.contains(p, q));
                    }
                }
                let reached: usize = r.layers.iter().map(Vec::len).sum();
                assert_eq!(reached, r.dist.iter().filter(|d| d.is_some()).count());
            }
        }
    }
}

fn sample_point(rng: &mut ChaCha8Rng, sites: &[Site]) -> Point {
    if rng.gen_bool(0.7) {
        let s = sites[rng.gen_range(0..sites.len())];
        let a = rng.gen_range(0.0..std::f64::consts::TAU);
        let d = s.radius * rng.gen_range(0.0f64..1.05).sqrt();
        Point::new(s.x + d * a.cos(), s.y + d * a.sin())
    } else {
        let (lo, hi) =
            sites.iter().fold((f64::MAX, f64::MIN), |(lo, hi), s| (lo.min(s.x.min(s.y)), hi.max(s.x.max(s.y))));
        Point::new(rng.gen_range(lo - 5.0..hi + 5.0), rng.gen_range(lo - 5.0..hi + 5.0))
    }
}

#[test]
fn geometric_reachability_matches_oracle() {
    let mut rng = ChaCha8Rng::seed_from_u64(99);
    for sites in instances() {
        let g = materialize(&sites).unwrap();
        let o = build_geom_oracle(&sites, build_base_oracle(&sites).unwrap()).unwrap();
        assert!(o.stored_references() <= sites.len() * o.depth());
        for _ in 0..400 {
            let t = sample_point(&mut rng, &sites);
            let q = o.cover_set(t);
            assert!(q.len() <= o.cover_set_bound());
            for &m in &q.sites {
                assert!(sites[m].covers(t));
            }
            for p in sites.iter().filter(|p| p.covers(t)) {
                assert!(q.sites.iter().any(|&m| p.covers(sites[m].point())), "site {} uncovered at {t:?}", p.id);
            }
            let s = rng.gen_range(0..sites.len());
            assert_eq!(o.geom_reach(s, t), geom_reach_oracle(&sites, &g, s, t), "s {s} t {t:?}");
        }
    }
}

#[test]
fn base_oracle_from_spanner_matches_explicit_graph() {
    let sites = &instances()[1];
    let (h, _) = build_spanner(sites, 2.0, Variant::Ratio, BuildOptions::default()).unwrap();
    let a = BaseOracle::from_graph(&h);
    let b = build_base_oracle(sites).unwrap();
    for s in (0..sites.len()).step_by(11) {
        for q in 0..sites.len() {
            assert_eq!(a.reach(s, q), b.reach(s, q));
        }
    }
}
