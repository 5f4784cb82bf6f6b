mod common;

use proptest::prelude::*;
use steklov_core::GraphWithBoundary;

use common::{any_graph, graph};

proptest! {
    #![proptest_config(ProptestConfig::with_cases(1000))]

    #[test]
    fn distances_obey_triangle_inequality(g in any_graph()) {
        let n = g.n();
        let tables: Vec<Vec<usize>> = (0..n)
            .map(|s| g.bfs_distances(s).unwrap().dist)
            .collect();
        for x in 0..n {
            prop_assert_eq!(tables[x][x], 0);
            for y in 0..n {
                prop_assert_eq!(tables[x][y], tables[y][x]);
                for z in 0..n {
                    prop_assert!(tables[x][z] <= tables[x][y] + tables[y][z]);
                }
            }
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(300))]

    #[test]
    fn random_graphs_validate(g in any_graph()) {
        prop_assert!(g.validate().is_ok());
    }

    #[test]
    fn boundary_diameter_at_most_diameter(g in any_graph()) {
        prop_assert!(g.boundary_diameter().unwrap() <= g.diameter().unwrap());
    }

    #[test]
    fn boundary_volume_is_degree_sum(g in graph(false)) {
        let degrees: usize = g.boundary().iter().map(|&i| g.degree(i)).sum();
        prop_assert_eq!(g.boundary_volume(), degrees as f64);
    }

    #[test]
    fn weighted_boundary_volume_is_measure_sum(g in graph(true)) {
        let direct: f64 = g
            .edges()
            .iter()
            .map(|e| e.weight * (g.is_boundary(e.u) as u8 + g.is_boundary(e.v) as u8) as f64)
            .sum();
        prop_assert!((g.boundary_volume() - direct).abs() <= 1e-12 * direct);
    }

    #[test]
    fn json_round_trips(g in any_graph()) {
        let back = GraphWithBoundary::from_json_str(&g.to_json_string()).unwrap();
        prop_assert_eq!(back.n(), g.n());
        prop_assert_eq!(back.boundary(), g.boundary());
        prop_assert_eq!(back.edges(), g.edges());
    }

    #[test]
    fn relabelling_preserves_distances(g in graph(false), rot in 0usize..64) {
        let n = g.n();
        let perm: Vec<usize> = (0..n).map(|i| (i + rot) % n).collect();
        let edges: Vec<(usize, usize)> = g.edges().iter().map(|e| (perm[e.u], perm[e.v])).collect();
        let boundary: Vec<usize> = g.boundary().iter().map(|&i| perm[i]).collect();
        let h = GraphWithBoundary::unweighted(n, &edges, &boundary).unwrap();
        prop_assert!(h.validate().is_ok());
        prop_assert_eq!(h.diameter().unwrap(), g.diameter().unwrap());
        prop_assert_eq!(h.boundary_diameter().unwrap(), g.boundary_diameter().unwrap());
    }
}
