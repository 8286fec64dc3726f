use noc_topo::analysis::{build_cdg, is_deadlock_free};
use noc_topo::routing::{
    route_trace, router_for, validate_routing, D2dMotRouter, Destination, Hop, MotRouter, RoutingFunction,
    RoutingKind, TableRouter, TorusXyRouter, WrapPolicy, XyRouter,
};
use noc_topo::topology::{build_topology, BuildConfig, Family, NodeId, Size, Topology};
use proptest::prelude::*;

fn build(family: Family, size: Size) -> Topology {
    build_topology(family, size, &BuildConfig::default()).unwrap()
}

/// Leaves are numbered row-major from 0.
fn leaf(t: &Topology, row: u32, col: u32) -> NodeId {
    NodeId(row * t.size().cols + col)
}

#[test]
fn native_routers_deliver_everything() {
    let cases = [
        (Family::Mesh, Size::square(4)),
        (Family::Mesh, Size::new(3, 7)),
        (Family::Torus, Size::square(5)),
        (Family::D2DMesh, Size::square(4)),
        (Family::D2DMesh, Size::square(8)),
        (Family::MoT, Size::square(8)),
        (Family::MoT, Size::new(2, 8)),
        (Family::D2DMoT, Size::square(4)),
        (Family::D2DMoT, Size::square(8)),
        (Family::BinaryTree, Size::single(16)),
    ];
    for (family, size) in cases {
        let t = build(family, size);
        let r = router_for(RoutingKind::native(family), &t).unwrap();
        let report = validate_routing(&r, &t);
        assert_eq!(report.delivery_rate(), 1.0, "{family} {size:?}: {:?}", report.failures.first());
        assert!(report.max_routed_len() as usize <= t.node_count());
    }
}

#[test]
fn minimal_routers() {
    for n in [2, 4, 8] {
        let t = build(Family::MoT, Size::square(n));
        let report = validate_routing(&MotRouter::new(&t).unwrap(), &t);
        assert_eq!((report.delivery_rate(), report.max_stretch()), (1.0, 1.0), "mot {n}");
    }
    for (r, c) in [(2, 2), (3, 5), (8, 8)] {
        let t = build(Family::Mesh, Size::new(r, c));
        assert_eq!(validate_routing(&XyRouter::new(&t).unwrap(), &t).max_stretch(), 1.0);
    }
    for family in [Family::Mesh, Family::Torus, Family::D2DMesh, Family::MoT, Family::D2DMoT] {
        let t = build(family, Size::square(4));
        let report = validate_routing(&TableRouter::new(&t).unwrap(), &t);
        assert_eq!((report.delivery_rate(), report.max_stretch()), (1.0, 1.0), "{family}");
    }
}

#[test]
fn mot_corner_to_corner() {
    let t = build(Family::MoT, Size::square(4));
    let p = route_trace(&MotRouter::new(&t).unwrap(), &t, leaf(&t, 0, 0), Destination::router(leaf(&t, 3, 3))).unwrap();
    assert_eq!(p.distance, 8);
}

#[test]
fn d2d_mot_examples() {
    let t = build(Family::D2DMoT, Size::square(4));
    let r = D2dMotRouter::new(&t).unwrap();
    let p = route_trace(&r, &t, leaf(&t, 0, 0), Destination::router(leaf(&t, 1, 1))).unwrap();
    assert_eq!(p.distance, 1);
    let here = leaf(&t, 0, 0);
    assert_eq!(r.next_hop(here, Destination { node: here, core: 1 }).unwrap(), Hop::Deliver { core: 1 });
}

#[test]
fn d2d_mot_stretch_profile() {
    // measured against the BFS oracle and pinned
    let t = build(Family::D2DMoT, Size::square(4));
    let report = validate_routing(&D2dMotRouter::new(&t).unwrap(), &t);
    assert_eq!(report.delivery_rate(), 1.0);
    assert_eq!(report.max_stretch(), 1.6);
    assert_eq!(report.max_routed_len(), 8);
    assert_eq!(report.non_minimal().count(), 48);
    assert!((report.mean_stretch() - 1.065_158_730_158_730_2).abs() < 1e-12);

    let t8 = build(Family::D2DMoT, Size::square(8));
    let report = validate_routing(&D2dMotRouter::new(&t8).unwrap(), &t8);
    assert_eq!(report.delivery_rate(), 1.0);
    assert_eq!(report.non_minimal().count(), 832);
    assert!((report.max_stretch() - 12.0 / 7.0).abs() < 1e-12);
}

#[test]
fn d2d_mot_same_row_and_column_are_minimal() {
    for n in [4, 8] {
        let t = build(Family::D2DMoT, Size::square(n));
        let report = validate_routing(&D2dMotRouter::new(&t).unwrap(), &t);
        for row in &report.rows {
            let (a, b) = (row.src.0, row.dst.0);
            if a / n == b / n || a % n == b % n {
                assert_eq!(row.stretch, 1.0, "{a} -> {b}");
            }
        }
    }
}

#[test]
fn channel_dependencies() {
    let acyclic = |t: &Topology, r: &dyn RoutingFunction| is_deadlock_free(&build_cdg(t, r).unwrap());
    for n in [4, 8] {
        let mesh = build(Family::Mesh, Size::square(n));
        assert!(acyclic(&mesh, &XyRouter::new(&mesh).unwrap()));
        let mot = build(Family::MoT, Size::square(n));
        assert!(acyclic(&mot, &MotRouter::new(&mot).unwrap()));
        let d2d = build(Family::D2DMoT, Size::square(n));
        assert!(acyclic(&d2d, &D2dMotRouter::new(&d2d).unwrap()));
    }
    let torus = build(Family::Torus, Size::square(3));
    assert!(!acyclic(&torus, &TorusXyRouter::new(&torus, WrapPolicy::Ascending).unwrap()));
    assert!(acyclic(&torus, &TorusXyRouter::new(&torus, WrapPolicy::Shortest).unwrap()));
    let torus = build(Family::Torus, Size::square(4));
    assert!(!acyclic(&torus, &TorusXyRouter::new(&torus, WrapPolicy::Shortest).unwrap()));
}

#[test]
fn validation_is_thread_count_independent() {
    let t = build(Family::D2DMoT, Size::square(8));
    let r = D2dMotRouter::new(&t).unwrap();
    let many = validate_routing(&r, &t);
    let one = rayon::ThreadPoolBuilder::new().num_threads(1).build().unwrap().install(|| validate_routing(&r, &t));
    assert_eq!(many, one);
}

proptest! {
    #[test]
    fn table_router_is_shortest_anywhere(n in 2u32..7, a in 0u32..49, b in 0u32..49) {
        let t = build(Family::Torus, Size::square(n));
        let (a, b) = (NodeId(a % (n * n)), NodeId(b % (n * n)));
        let p = route_trace(&TableRouter::new(&t).unwrap(), &t, a, Destination::router(b)).unwrap();
        let q = route_trace(&TorusXyRouter::new(&t, WrapPolicy::Shortest).unwrap(), &t, a, Destination::router(b)).unwrap();
        prop_assert_eq!(p.distance, q.distance);
    }
}
