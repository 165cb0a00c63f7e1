mod common;

use clan_embed::spanning::{
    cone_distance, create_petal, entry_values, hierarchical_petal_decomposition_detailed, petal, petal_decomposition,
    petal_levels, spanning_clan_embed_with, ClusterState, PetalCase,
};
use clan_embed::verify::{verify_clan_distortion, Host};
use clan_embed::*;
use common::*;
use proptest::prelude::*;

fn subset(a: &[usize], b: &[usize]) -> bool {
    a.iter().all(|x| b.contains(x))
}

#[test]
fn cone_distance_examples() {
    let g = path(3);
    let s = ClusterState::new(&g, vec![0, 1, 2], 0, 2, 2.0).unwrap();
    assert_eq!(cone_distance(&s, 0, 2, 1, 1).unwrap(), 0.0);
    assert_eq!(cone_distance(&s, 0, 2, 0, 2).unwrap(), 4.0);
    assert_eq!(cone_distance(&s, 0, 2, 2, 0).unwrap(), 4.0);
    assert!(cone_distance(&s, 0, 2, 0, 7).is_err());
}

#[test]
fn zero_radius_petal_is_the_target() {
    let g = path(3);
    let s = ClusterState::new(&g, vec![0, 1, 2], 0, 2, 2.0).unwrap();
    assert_eq!(petal(&s, 0.0).unwrap(), vec![2]);
    assert_eq!(petal(&s, 1.0).unwrap(), vec![1, 2]);
    assert_eq!(petal(&s, 2.0).unwrap(), vec![0, 1, 2]);
    assert!(petal(&s, -1.0).is_err());
}

#[test]
fn petals_match_the_definition_and_grow() {
    for seed in 0..6 {
        let g = random_graph(24, 5, seed);
        let s = ClusterState::root(&g, 0).unwrap();
        let t = 23;
        let state = ClusterState::new(&g, (0..24).collect(), 0, t, s.delta).unwrap();
        let oracle = PetalOracle::new(&g, &(0..24).collect::<Vec<_>>(), 0, t);
        let mut prev = Vec::new();
        for r in oracle.breakpoints() {
            let w = petal(&state, r).unwrap();
            assert_eq!(w, oracle.petal(r), "seed {seed} r {r}");
            assert!(subset(&prev, &w));
            prev = w;
        }
        let entries = entry_values(&state).unwrap();
        assert_eq!(entries[t], 0.0);
    }
}

#[test]
fn ball_containment_on_small_graphs() {
    for seed in 0..4 {
        let g = random_graph(16, 4, seed);
        let all: Vec<usize> = (0..16).collect();
        let oracle = PetalOracle::new(&g, &all, 0, 15);
        let grid: Vec<f64> = (0..=8).map(|i| i as f64 * 0.5).collect();
        assert_eq!(ball_containment_violations(&g, &oracle, &grid), 0, "seed {seed}");
    }
}

#[test]
fn petal_levels_values() {
    assert_eq!(petal_levels(1.0f64), 1);
    assert_eq!(petal_levels(2.0f64), 1);
    assert_eq!(petal_levels(16.0f64), 3);
    assert_eq!(petal_levels(128.0f64), 4);
}

#[test]
fn degenerate_petal() {
    let g = path(2);
    let s = ClusterState::new(&g, vec![0, 1], 0, 1, 1.0).unwrap();
    let mu = Measure::ones(2);
    let tr = create_petal(&s, &mu, 0.0, 0.125, 1).unwrap();
    assert_eq!(tr.levels, 1);
    assert_eq!(tr.outer, vec![1]);
    assert_eq!(tr.connector, (1, 0));
}

fn check_triple(g: &WeightedGraphF64, s: &ClusterState<'_, f64>, mu: &MeasureF64, lo: f64, hi: f64, k: usize) {
    let tr = create_petal(s, mu, lo, hi, k).unwrap();
    assert!(subset(&tr.inner, &tr.mid) && subset(&tr.mid, &tr.outer));
    assert!(tr.radius - tr.half_gap >= lo - 1e-12 && tr.radius + tr.half_gap <= hi + 1e-12);
    let oracle = PetalOracle::new(g, s.vertices(), s.center, s.target);
    assert_eq!(tr.inner, oracle.petal(tr.radius - tr.half_gap));
    assert_eq!(tr.outer, oracle.petal(tr.radius + tr.half_gap));
    let (x, y) = tr.connector;
    assert!(g.weight(x, y).is_some());
    assert!(tr.outer.contains(&x) && !tr.outer.contains(&y));
    assert!(tr.path.windows(2).any(|w| (w[1], w[0]) == (x, y)));
    let total = mu.of(s.vertices());
    let e = 1.0 + 1.0 / k as f64;
    let scale = total.powf(1.0 / k as f64);
    let out_of = |set: &[usize]| total - mu.of(set);
    let ok = match tr.case {
        PetalCase::Forward => mu.of(&tr.outer).powf(e) <= mu.of(&tr.inner) * scale * (1.0 + 1e-9),
        PetalCase::Backward => out_of(&tr.inner).powf(e) <= out_of(&tr.outer) * scale * (1.0 + 1e-9),
    };
    assert!(ok, "{:?}", tr.case);
}

#[test]
fn create_petal_inequalities() {
    for seed in 0..10 {
        let g = random_graph(30, 6, seed);
        let root = ClusterState::root(&g, 0).unwrap();
        let far =
            (0..30).max_by(|&a, &b| g.dijkstra(0, None, None).dist[a].total_cmp(&g.dijkstra(0, None, None).dist[b])).unwrap();
        let s = ClusterState::new(&g, (0..30).collect(), 0, far, root.delta).unwrap();
        let mu = random_ge1(30, seed);
        for k in 1..=3 {
            check_triple(&g, &s, &mu, 0.0, root.delta / 8.0, k);
            check_triple(&g, &s, &mu, root.delta / 4.0, root.delta / 2.0, k);
        }
    }
}

#[test]
fn no_petals_inside_three_quarters() {
    let g = path(3);
    let s = ClusterState::new(&g, vec![0, 1, 2], 1, 1, 4.0).unwrap();
    let dec = petal_decomposition(&s, &Measure::ones(3), 1).unwrap();
    assert!(dec.petals.is_empty() && !dec.special_first);
    assert_eq!(dec.central.vertices(), &[0, 1, 2]);
}

#[test]
fn special_first_petal_on_nine_path() {
    let g = path(9);
    let s = ClusterState::new(&g, (0..9).collect(), 0, 8, 8.0).unwrap();
    let dec = petal_decomposition(&s, &Measure::ones(9), 1).unwrap();
    assert!(dec.special_first);
    assert_eq!(dec.petals[0].triple.target, 8);
    // d(x0, t0) < Δ/2 once the far end is carved off
    assert!(g.dijkstra(0, None, None).dist[dec.central.target] < 4.0);
    let rooted = ClusterState::root(&g, 0).unwrap();
    assert!(!petal_decomposition(&rooted, &Measure::ones(9), 1).unwrap().special_first);
}

#[test]
fn decomposition_shrinks_the_cluster() {
    for seed in 0..8 {
        let g = random_graph(40, 7, seed);
        let s = ClusterState::root(&g, 0).unwrap();
        let dec = petal_decomposition(&s, &random_ge1(40, seed), 2).unwrap();
        assert!(dec.radii.windows(2).all(|w| w[1] <= w[0]));
        let d = g.dijkstra(0, None, None).dist;
        assert!(dec.central.vertices().iter().all(|&v| d[v] <= 0.75 * s.delta));
        for p in &dec.petals {
            assert!(p.child.delta <= 0.75 * s.delta + 1e-9);
        }
    }
}

/// Rerunning on what remains after petal l reproduces the later petals.
#[test]
fn later_petals_ignore_earlier_ones() {
    for seed in 0..6 {
        let g = random_graph(40, 7, seed);
        let all: Vec<usize> = (0..40).collect();
        let d = g.dijkstra(0, None, None).dist;
        let far = all.iter().copied().max_by(|&a, &b| d[a].total_cmp(&d[b])).unwrap();
        let delta = d[far];
        let mu = random_ge1(40, seed);
        let s = ClusterState::new(&g, all.clone(), 0, far, delta).unwrap();
        let dec = petal_decomposition(&s, &mu, 2).unwrap();
        let t0 = dec.central.target;
        let mut remaining = all.clone();
        for l in 0..dec.petals.len() {
            remaining.retain(|v| dec.petals[l].triple.inner.binary_search(v).is_err());
            let again = petal_decomposition(&ClusterState::new(&g, remaining.clone(), 0, t0, delta).unwrap(), &mu, 2).unwrap();
            assert!(!again.special_first);
            let later: Vec<_> =
                dec.petals[l + 1..].iter().map(|p| (&p.triple.outer, p.triple.radius, p.triple.connector)).collect();
            let redo: Vec<_> = again.petals.iter().map(|p| (&p.triple.outer, p.triple.radius, p.triple.connector)).collect();
            assert_eq!(later, redo, "seed {seed} after petal {l}");
            assert_eq!(again.central.vertices(), dec.central.vertices());
        }
    }
}

#[test]
fn single_vertex_graph() {
    let g = WeightedGraphF64::new(1, vec![]).unwrap();
    let (t, emb) = hierarchical_petal_decomposition(&g, 0, &Measure::ones(1), SpanParams::new(1)).unwrap();
    assert_eq!(t.copy_count(), 1);
    assert_eq!(emb.clan(0), &[0]);
}

#[test]
fn path_rooted_at_an_endpoint() {
    let g = path(8);
    let mu = Measure::ones(8);
    let (t, emb) = hierarchical_petal_decomposition(&g, 0, &mu, SpanParams::new(1).verified()).unwrap();
    assert_eq!(t.copy_count(), 8);
    let mut projected: Vec<(usize, usize)> =
        t.edges().iter().map(|&(a, b, _)| (t.orig(a).min(t.orig(b)), t.orig(a).max(t.orig(b)))).collect();
    projected.sort_unstable();
    assert_eq!(projected, (0..7).map(|i| (i, i + 1)).collect::<Vec<_>>());
    assert!(emb.weighted_copies(&mu) <= 64.0);
}

#[test]
fn grid_six_by_six() {
    let g = grid(6);
    let mu = Measure::ones(36);
    let r = hierarchical_petal_decomposition_detailed(&g, 0, &mu, SpanParams::new(2).verified()).unwrap();
    r.tree.check_spanning(&g).unwrap();
    assert!(r.embedding.weighted_copies(&mu) <= 216.0);
    assert!(r.report.unwrap().passed());
}

#[test]
fn single_edge() {
    let g = path(2);
    let (t, emb) = spanning_clan_embed(&g, Mode::K(1)).unwrap();
    assert_eq!(t.copy_count(), 2);
    assert_eq!(t.edges().len(), 1);
    assert_eq!((emb.clan(0).len(), emb.clan(1).len()), (1, 1));
}

#[test]
fn cycle16_eps_one() {
    let (_, emb) = spanning_clan_embed(&cycle(16), Mode::Eps(1.0)).unwrap();
    assert!(emb.total_copies() as f64 / 16.0 <= 2.0);
}

#[test]
fn cycle64_k2_distortion() {
    let g = cycle(64);
    let r = spanning_clan_embed_with(&g, &Measure::uniform(64), 0, Mode::K(2), true).unwrap();
    assert_eq!(r.distortion_bound, 128.0 * 2.0 * 4.0);
    let m = MetricSpace::from_graph(&g);
    let rep = verify_clan_distortion(&m, Host::Tree(&r.tree), &r.embedding, r.distortion_bound).unwrap();
    assert!(rep.passed());
    assert!(r.radius <= 8.0 * r.delta);
}

#[test]
fn builds_are_deterministic() {
    let g = random_graph(48, 9, 3);
    let a = spanning_clan_embed(&g, Mode::K(2)).unwrap();
    let b = spanning_clan_embed(&g, Mode::K(2)).unwrap();
    assert_eq!(a, b);
}

#[test]
fn rejects_bad_input() {
    let g = path(4);
    assert!(hierarchical_petal_decomposition(&g, 9, &Measure::ones(4), SpanParams::new(1)).is_err());
    assert!(hierarchical_petal_decomposition(&g, 0, &Measure::ones(4), SpanParams::new(0)).is_err());
    assert!(hierarchical_petal_decomposition(&g, 0, &Measure::uniform(4), SpanParams::new(1)).is_err());
    assert!(WeightedGraphF64::new(4, vec![(0, 1, 1.0), (2, 3, 1.0)]).is_err());
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(16))]

    #[test]
    fn random_graphs_pass_every_check(n in 2usize..40, k in 1usize..3, wmax in 1u32..10, seed in any::<u64>(), root in any::<prop::sample::Index>()) {
        let g = random_graph(n, wmax, seed);
        let mu = random_ge1(n, seed);
        let r = hierarchical_petal_decomposition_detailed(&g, root.index(n), &mu, SpanParams::new(k).verified()).unwrap();
        prop_assert!(r.report.unwrap().passed());
        prop_assert!(r.embedding.weighted_copies(&mu) <= mu.total().powf(1.0 + 1.0 / k as f64) * (1.0 + 1e-9));
    }
}
