mod common;

use clan_embed::host::ultra_distance;
use clan_embed::metric::strong_diameter;
use clan_embed::*;
use common::*;
use proptest::prelude::*;

#[test]
fn parses_path_graph() {
    let g = WeightedGraphF64::parse("3 2\n0 1 1.0\n1 2 1.0").unwrap();
    assert_eq!((g.n(), g.m()), (3, 2));
    assert_eq!(g.weight(0, 1), Some(1.0));
    assert_eq!(g.weight(0, 2), None);
}

#[test]
fn skips_comments_and_blank_lines() {
    let g =
        WeightedGraphF64::parse("# c8\n8 8\n\n0 1 1\n1 2 1\n2 3 1\n3 4 1\n4 5 1\n5 6 1\n6 7 1\n# closing edge\n7 0 1\n").unwrap();
    assert_eq!((g.n(), g.m()), (8, 8));
}

#[test]
fn rejects_invalid_graphs() {
    let self_loop = WeightedGraphF64::parse("2 2\n0 0 1.0\n0 1 1.0");
    assert!(matches!(self_loop, Err(Error::Invalid(_))), "{self_loop:?}");
    assert!(matches!(WeightedGraphF64::parse("3 1\n0 1 1"), Err(Error::Invalid(_))));
    assert!(matches!(WeightedGraphF64::parse("2 1\n0 1 0"), Err(Error::Invalid(_))));
    assert!(matches!(WeightedGraphF64::parse("2 1\n0 1 -2"), Err(Error::Invalid(_))));
    assert!(matches!(WeightedGraphF64::parse("2 2\n0 1 1\n1 0 2"), Err(Error::Invalid(_))));
    assert!(matches!(WeightedGraphF64::parse("2 1\n0 1"), Err(Error::Parse { line: 2, .. })));
    assert!(matches!(WeightedGraphF64::parse("2 2\n0 1 1"), Err(Error::Parse { .. })));
    assert!(matches!(WeightedGraphF64::parse("2 1\n0 5 1"), Err(Error::Invalid(_))));
}

#[test]
fn missing_file_is_not_found() {
    assert!(matches!(WeightedGraphF64::load("/nonexistent/g.tsv"), Err(Error::NotFound(_))));
}

#[test]
fn text_round_trip() {
    let g = WeightedGraphF64::new(3, vec![(0, 1, 2.0), (1, 2, 0.1)]).unwrap();
    let back = WeightedGraphF64::parse(&g.to_text()).unwrap();
    assert_eq!(back.weights(), g.weights());
}

#[test]
fn shortest_path_examples() {
    let m = MetricSpace::from_graph(&path(3));
    assert_eq!(m.d(0, 2), 2.0);
    let c4 = MetricSpace::from_graph(&cycle(4));
    assert_eq!((c4.d(0, 2), c4.d(0, 3)), (2.0, 1.0));
    let tri = WeightedGraphF64::new(3, vec![(0, 1, 1.0), (1, 2, 1.0), (0, 2, 5.0)]).unwrap();
    assert_eq!(MetricSpace::from_graph(&tri).d(0, 2), 2.0);
}

#[test]
fn dijkstra_breaks_ties_toward_smaller_predecessor() {
    // two shortest 0→3 paths: via 1 and via 2
    let g = WeightedGraphF64::new(4, vec![(0, 2, 1.0), (0, 1, 1.0), (1, 3, 1.0), (2, 3, 1.0)]).unwrap();
    assert_eq!(g.dijkstra(0, None, None).path_to(3).unwrap(), vec![0, 1, 3]);
}

#[test]
fn ball_examples() {
    let m = MetricSpace::from_graph(&path(3));
    assert_eq!(m.ball(&[0, 1, 2], 1, 0.0).unwrap(), vec![1]);
    assert_eq!(m.ball(&[0, 1, 2], 1, 1.0).unwrap(), vec![0, 1, 2]);
    assert_eq!(m.ball(&[0, 2], 0, 1.0).unwrap(), vec![0]);
    assert!(m.ball(&[0, 2], 1, 1.0).is_err());
}

#[test]
fn diameter_examples() {
    let g = cycle(4);
    let m = MetricSpace::from_graph(&g);
    assert_eq!(m.diameter(&[3], DiameterMode::Weak, None).unwrap(), Extent::Finite(0.0));
    assert_eq!(m.diameter(&[0, 1, 2], DiameterMode::Strong, Some(&g)).unwrap(), Extent::Finite(2.0));
    assert_eq!(m.diameter(&[0, 1, 2], DiameterMode::Weak, None).unwrap(), Extent::Finite(2.0));
    assert!(m.diameter(&[], DiameterMode::Weak, None).is_err());
    assert!(m.diameter(&[0, 1], DiameterMode::Strong, None).is_err());
    // {0, 2} induces no edge in C_4
    assert_eq!(strong_diameter(&g, &[0, 2], None), Extent::Infinite);
}

#[test]
fn mu_star_examples() {
    let one = MetricSpace::from_rows(vec![vec![0.0]]).unwrap();
    assert_eq!(one.mu_star(&[0], &Measure::ones(1)).unwrap(), 1.0);
    let two = MetricSpace::from_graph(&path(2));
    assert_eq!(two.mu_star(&[0, 1], &Measure::ones(2)).unwrap(), 1.0);
    let three = MetricSpace::from_graph(&path(3));
    assert_eq!(three.mu_star(&[0, 1, 2], &Measure::ones(3)).unwrap(), 1.0);
}

#[test]
fn measure_kinds() {
    assert_eq!(MeasureF64::parse("0 2\n1 1", 2).unwrap().kind(), MeasureKind::Ge1);
    assert_eq!(MeasureF64::parse("0 0.25\n1 0.75", 2).unwrap().kind(), MeasureKind::Probability);
    assert!(MeasureF64::parse("0 0.25\n1 0.5", 2).is_err());
    assert!(MeasureF64::parse("0 1", 2).is_err());
    assert!(MeasureF64::parse("0 1\n0 1", 2).is_err());
    assert!(MeasureF64::ge1(vec![1.0, 0.5]).is_err());
}

#[test]
fn metric_rows_are_validated() {
    assert!(MetricSpaceF64::from_rows(vec![vec![0.0, 1.0], vec![2.0, 0.0]]).is_err());
    assert!(MetricSpaceF64::from_rows(vec![vec![0.0, 0.0], vec![0.0, 0.0]]).is_err());
    let violates = vec![vec![0.0, 1.0, 5.0], vec![1.0, 0.0, 1.0], vec![5.0, 1.0, 0.0]];
    assert!(MetricSpaceF64::from_rows(violates).is_err());
    let m = MetricSpaceF64::parse_csv("0,1,2\n1,0,1\n2,1,0\n").unwrap();
    assert_eq!(m.d(0, 2), 2.0);
}

fn two_leaf(label: f64) -> Ultrametric<f64> {
    Ultrametric::new(vec![
        UltraNode { label, parent: None, owner: None },
        UltraNode { label: 0.0, parent: Some(0), owner: Some(0) },
        UltraNode { label: 0.0, parent: Some(0), owner: Some(1) },
    ])
    .unwrap()
}

#[test]
fn ultra_distance_examples() {
    let u = two_leaf(5.0);
    assert_eq!(ultra_distance(&u, 0, 0, 1, 1).unwrap(), 0.0);
    assert_eq!(ultra_distance(&u, 0, 1, 1, 2).unwrap(), 5.0);
    assert!(ultra_distance(&u, 0, 1, 1, 7).is_err());
    assert!(ultra_distance(&u, 1, 0, 1, 2).is_err());
    // caterpillar: root 4 over (leaf a, node 2 over leaves b, c)
    let cat = Ultrametric::new(vec![
        UltraNode { label: 4.0, parent: None, owner: None },
        UltraNode { label: 0.0, parent: Some(0), owner: Some(0) },
        UltraNode { label: 2.0, parent: Some(0), owner: None },
        UltraNode { label: 0.0, parent: Some(2), owner: Some(1) },
        UltraNode { label: 0.0, parent: Some(2), owner: Some(2) },
    ])
    .unwrap();
    assert_eq!(cat.distance(3, 4).unwrap(), 2.0);
    assert_eq!(cat.distance(1, 4).unwrap(), 4.0);
}

#[test]
fn ultrametric_structure_is_validated() {
    let increasing = Ultrametric::new(vec![
        UltraNode { label: 1.0, parent: None, owner: None },
        UltraNode { label: 2.0, parent: Some(0), owner: None },
        UltraNode { label: 0.0, parent: Some(1), owner: Some(0) },
    ]);
    assert!(increasing.is_err());
    let unowned_leaf = Ultrametric::new(vec![
        UltraNode { label: 1.0, parent: None, owner: None },
        UltraNode { label: 0.0, parent: Some(0), owner: None },
    ]);
    assert!(unowned_leaf.is_err());
    let nonzero_leaf = Ultrametric::new(vec![
        UltraNode { label: 1.0, parent: None, owner: None },
        UltraNode { label: 0.5, parent: Some(0), owner: Some(0) },
    ]);
    assert!(nonzero_leaf.is_err());
}

#[test]
fn clan_embedding_is_validated() {
    assert!(ClanEmbedding::new(vec![vec![0], vec![]], vec![0, 0]).is_err());
    assert!(ClanEmbedding::new(vec![vec![0], vec![0]], vec![0, 0]).is_err());
    assert!(ClanEmbedding::new(vec![vec![0], vec![1]], vec![0, 0]).is_err());
    assert!(ClanEmbedding::new(vec![vec![0, 2], vec![1]], vec![2, 1]).is_ok());
}

#[test]
fn spanning_tree_checks() {
    let g = path(3);
    let t = SpanningTreeF64::new(vec![0, 1, 2], vec![(0, 1, 1.0), (1, 2, 1.0)]).unwrap();
    t.check_spanning(&g).unwrap();
    let wrong = SpanningTreeF64::new(vec![0, 1, 2], vec![(0, 1, 1.0), (0, 2, 1.0)]).unwrap();
    assert!(wrong.check_spanning(&g).unwrap_err().is_defect());
    let heavy = SpanningTreeF64::new(vec![0, 1, 2], vec![(0, 1, 2.0), (1, 2, 1.0)]).unwrap();
    assert!(heavy.check_spanning(&g).unwrap_err().is_defect());
    assert!(SpanningTreeF64::new(vec![0, 1, 2], vec![(0, 1, 1.0)]).is_err());
    assert!(SpanningTreeF64::new(vec![0, 1, 2, 0], vec![(0, 1, 1.0), (1, 0, 1.0), (2, 3, 1.0)]).is_err());
}

#[test]
fn f32_graphs_work() {
    let g = WeightedGraphF32::new(3, vec![(0, 1, 1.5), (1, 2, 2.5)]).unwrap();
    let m = MetricSpaceF32::from_graph(&g);
    assert_eq!(m.d(0, 2), 4.0f32);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn shortest_path_metric_is_a_metric(n in 2usize..40, seed in any::<u64>()) {
        let m = random_metric(n, seed);
        for x in 0..n {
            for y in 0..n {
                prop_assert_eq!(m.d(x, y), m.d(y, x));
                for z in 0..n {
                    prop_assert!(m.d(x, z) <= m.d(x, y) + m.d(y, z));
                }
            }
        }
    }

    #[test]
    fn balls_grow_with_radius(n in 2usize..30, seed in any::<u64>(), r in 0.0f64..20.0, extra in 0.0f64..10.0) {
        let m = random_metric(n, seed);
        let pts = m.points();
        let small = m.ball(&pts, 0, r).unwrap();
        let big = m.ball(&pts, 0, r + extra).unwrap();
        prop_assert!(small.iter().all(|x| big.contains(x)));
    }

    #[test]
    fn built_ultrametrics_satisfy_strong_triangle(n in 2usize..20, seed in any::<u64>(), k in 1usize..4) {
        let m = random_metric(n, seed);
        let (u, _) = clan_embed_ultrametric(&m, &m.points(), &Measure::ones(n), &ClanParams::k(k)).unwrap();
        let leaves: Vec<usize> = u.leaves().collect();
        for &a in &leaves {
            for &b in &leaves {
                for &c in &leaves {
                    let (ab, bc, ac) = (u.distance(a, b).unwrap(), u.distance(b, c).unwrap(), u.distance(a, c).unwrap());
                    prop_assert!(ac <= ab.max(bc));
                }
            }
        }
        for (i, node) in u.nodes().iter().enumerate() {
            if let Some(p) = node.parent {
                prop_assert!(node.label <= u.nodes()[p].label, "node {}", i);
            }
        }
    }
}
