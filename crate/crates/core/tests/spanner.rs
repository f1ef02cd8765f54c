use transmission_spanner::geom_query::LinearNn;
use transmission_spanner::geometry::Site;
use transmission_spanner::instance::{generate, Distribution, InstanceSpec, RadiusModel};
use transmission_spanner::oracle::{all_pairs, audit_stretch, audit_stretch_against, materialize};
use transmission_spanner::par::Execution;
use transmission_spanner::params::spanner_parameters;
use transmission_spanner::spanner::{
    build_spanner, build_spanner_general, verify_shorter_edge, BuildOptions, SpannerGraph, Variant,
};

fn models() -> [RadiusModel; 3] {
    [RadiusModel::Constant, RadiusModel::Uniform { lo: 1.0, hi: 4.0 }, RadiusModel::Pareto { alpha: 1.5, cap: 32.0 }]
}

fn subgraph_ok(sites: &[Site], h: &SpannerGraph) -> bool {
    h.edges().all(|(p, q, _)| sites[p].covers(sites[q].point()))
}

#[test]
fn every_variant_is_a_two_spanner() {
    for (i, model) in models().into_iter().enumerate() {
        let sites = generate(&InstanceSpec::new(300, Distribution::UniformSquare, model, 40 + i as u64));
        let g = materialize(&sites).unwrap();
        let dg = all_pairs(&g, Execution::default()).unwrap();
        for v in Variant::ALL {
            let (h, _) = build_spanner(&sites, 2.0, v, BuildOptions::default()).unwrap();
            assert!(subgraph_ok(&sites, &h), "{v}");
            let r = audit_stretch_against(&dg, &h, 2.0, Execution::default());
            assert!(r.is_ok(), "{v} {model:?}: {:?}", &r.violations[..r.violations.len().min(5)]);
            let bound = v.sparsity_bound(&spanner_parameters(2.0).unwrap());
            assert!((h.m() as f64) <= bound * sites.len() as f64);
        }
    }
}

#[test]
fn shorter_edge_witnesses_exist() {
    for (i, model) in models().into_iter().enumerate() {
        let sites = generate(&InstanceSpec::new(200, Distribution::Clustered, model, 7 + i as u64));
        for v in Variant::ALL {
            let (h, _) = build_spanner(&sites, 1.5, v, BuildOptions::default()).unwrap();
            let rep = verify_shorter_edge(&sites, &h, v).unwrap();
            assert!(rep.is_ok(), "{v} {model:?}: {:?}", rep.violations);
        }
    }
}

#[test]
fn removing_an_edge_can_break_the_witness_property() {
    let sites = generate(&InstanceSpec::new(120, Distribution::UniformSquare, RadiusModel::Constant, 3));
    let (h, _) = build_spanner(&sites, 2.0, Variant::Spread, BuildOptions::default()).unwrap();
    let broken = h.edges().take(40).any(|(p, q, _)| {
        let h2 = h.without_edge(p, q);
        !verify_shorter_edge(&sites, &h2, Variant::Spread).unwrap().is_ok()
    });
    assert!(broken);
}

#[test]
fn sequential_and_parallel_builds_match() {
    let sites =
        generate(&InstanceSpec::new(400, Distribution::UniformSquare, RadiusModel::Uniform { lo: 1.0, hi: 8.0 }, 5));
    for v in Variant::ALL {
        let (a, _) = build_spanner(&sites, 2.0, v, BuildOptions::sequential()).unwrap();
        let (b, _) = build_spanner(&sites, 2.0, v, BuildOptions { execution: Execution::Parallel }).unwrap();
        assert_eq!(a, b, "{v}");
    }
}

#[test]
fn general_variant_accepts_any_nearest_neighbor_structure() {
    let sites =
        generate(&InstanceSpec::new(150, Distribution::Clustered, RadiusModel::Pareto { alpha: 1.2, cap: 32.0 }, 9));
    let a = build_spanner_general::<LinearNn>(&sites, 2.0).unwrap();
    let (b, _) = build_spanner(&sites, 2.0, Variant::General, BuildOptions::default()).unwrap();
    assert_eq!(a, b);
    assert!(audit_stretch(&sites, &a, 2.0).unwrap().is_ok());
}

#[test]
fn coincident_sites_in_ratio_variant() {
    let mut sites = generate(&InstanceSpec::new(80, Distribution::Grid, RadiusModel::Constant, 1));
    let n = sites.len();
    for i in 0..10 {
        let s = sites[i];
        sites.push(Site::new(n + i, s.x, s.y, s.radius * 2.0));
    }
    let (h, rep) = build_spanner(&sites, 2.0, Variant::Ratio, BuildOptions::default()).unwrap();
    assert_eq!(rep.clique_rejected, 0);
    assert!(audit_stretch(&sites, &h, 2.0).unwrap().is_ok());
    assert!(build_spanner(&sites, 2.0, Variant::Spread, BuildOptions::default()).is_err());
}
