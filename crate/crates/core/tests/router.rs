use lgr_core::circuit::*;
use lgr_core::graph::{edge_coloring, heavy_graph, Graph};
use lgr_core::lattices::{checkerboard, complete, kagome, random_line_graph, shuriken};
use lgr_core::router::*;
use lgr_core::sim::{random_bindings, verify_equivalence, Bindings};
use proptest::prelude::*;

fn heis(g: &Graph, p: usize) -> Circuit {
    let (col, _) = edge_coloring(g).unwrap();
    heis_circuit(&col, p, &HeisParams::Symbolic, LayerOrder::default()).unwrap()
}

fn all_options() -> Vec<RouteOptions> {
    let mut out = Vec::new();
    for side in [MediatorSide::First, MediatorSide::Second] {
        for lone_leaf in [true, false] {
            for elide_boundary in [false, true] {
                out.push(RouteOptions { side, lone_leaf, elide_boundary });
            }
        }
    }
    out
}

#[test]
fn small_lattice_metrics() {
    let r = line_graph_route(&heis(&shuriken(1, 1), 1), RouteOptions::default()).unwrap();
    let m = &r.metrics;
    assert_eq!((m.n_swap, m.depth, m.n_qubit), (8, 9, 8));
    let r = line_graph_route(&heis(&kagome(1, 1), 1), RouteOptions::default()).unwrap();
    assert_eq!((r.metrics.n_swap, r.metrics.n_qubit), (12, 12));
}

#[test]
fn kagome_unit_footprint_needs_lone_leaf_removal() {
    // The 8-node patch has two pendant hexagon edges; dropping their
    // mediators brings 14 routed qubits down to 12.
    let c = heis(&kagome(1, 1), 1);
    let without = line_graph_route(&c, RouteOptions { lone_leaf: false, ..Default::default() }).unwrap();
    let with = line_graph_route(&c, RouteOptions::default()).unwrap();
    assert_eq!(lone_leaves(&without.hardware).len(), 2);
    assert_eq!((without.metrics.n_qubit, with.metrics.n_qubit), (14, 12));
}

#[test]
fn lone_leaf_removal_is_a_no_op_without_leaves() {
    let c = heis(&shuriken(2, 2), 1);
    let without = line_graph_route(&c, RouteOptions { lone_leaf: false, ..Default::default() }).unwrap();
    if lone_leaves(&without.hardware).is_empty() {
        assert_eq!(remove_lone_leaves(without.clone()).circuit, without.circuit);
    }
    let tri = Circuit::from_gates(3, [(0, 1), (1, 2), (0, 2)].map(|(a, b)| Gate::cnot(a, b)));
    let r = line_graph_route(&tri, RouteOptions { lone_leaf: false, ..Default::default() }).unwrap();
    assert!(lone_leaves(&r.hardware).is_empty());
    assert_eq!(remove_lone_leaves(r.clone()).circuit, r.circuit);
}

#[test]
fn complete_footprint_is_n_plus_one() {
    for n in [4, 6, 9] {
        let g = complete(n);
        let c = random_circuit(&g, 100 * n, 3).unwrap();
        let r = line_graph_route(&c, RouteOptions::default()).unwrap();
        assert_eq!(r.metrics.n_qubit, n + 1, "n={n}");
        assert!(r.metrics.n_swap <= 2 * c.two_qubit_count());
    }
}

#[test]
fn shared_mediator_cancellation() {
    // The first two gates of a triangle share corner 0 and the mediator: the
    // SWAP pair between them goes away, the outer pair stays.
    let gates = [(0, 1), (0, 2), (1, 2)].map(|(a, b)| Gate::heis(a, b, Param::Value(0.2)));
    let c = Circuit::from_gates(3, gates);
    let opts = RouteOptions { lone_leaf: false, ..Default::default() };
    let r = line_graph_route(&c, opts).unwrap();
    assert_eq!(r.metrics.n_swap, 4);
    let kinds: Vec<GateKind> = r.circuit.gates().iter().map(|g| g.kind).collect();
    use GateKind::{Heis, Swap};
    assert_eq!(kinds, vec![Swap, Heis, Heis, Swap, Swap, Heis, Swap]);
}

#[test]
fn cancel_swaps_examples() {
    let c = Circuit::from_gates(2, [Gate::swap(0, 1), Gate::swap(0, 1)]);
    assert!(cancel_swaps(&c).is_empty());
    let c = Circuit::from_gates(3, [Gate::swap(0, 1), Gate::one(GateKind::H, 2), Gate::swap(1, 0)]);
    assert_eq!(cancel_swaps(&c).gates(), &[Gate::one(GateKind::H, 2)]);
}

#[test]
fn k2_elides_to_the_bare_gate() {
    let c = Circuit::from_gates(2, [Gate::cnot(0, 1)]);
    let r = line_graph_route(&c, RouteOptions { elide_boundary: true, ..Default::default() }).unwrap();
    assert_eq!(r.metrics.n_swap, 0);
    assert_eq!(r.circuit.len(), 1);
}

#[test]
fn empty_circuit_has_zero_metrics() {
    let m = route_metrics(&Circuit::new(0), &Circuit::new(0), 0.0);
    assert_eq!((m.depth, m.n_swap, m.n_qubit, m.lambda, m.total_gates), (0, 0, 0, 0, 0));
}

#[test]
fn routed_hardware_is_heavy_graph() {
    for g in [kagome(2, 2), shuriken(2, 2), checkerboard(2.5, 2.5).unwrap()] {
        let c = random_circuit(&g, 4000, 9).unwrap();
        let r = line_graph_route(&c, RouteOptions { lone_leaf: false, ..Default::default() }).unwrap();
        assert!(respects_hardware(&r.circuit, &r.hardware));
        let n_heavy = heavy_graph(&lgr_core::graph::inverse_line_graph(&g).unwrap().0).heavy_graph.node_count();
        assert_eq!(r.hardware.node_count(), n_heavy);
        assert!(r.metrics.n_qubit <= n_heavy);
    }
}

#[test]
fn naive_route_on_heavy_hex_verifies() {
    let c = heis(&kagome(1, 1), 1);
    let hw = line_graph_route(&c, RouteOptions::default()).unwrap().hardware;
    let r = naive_route(&c, &hw).unwrap();
    assert!(respects_hardware(&r.circuit, &hw));
    let b = random_bindings(&c, 1);
    assert!(verify_equivalence(&c, &r, &b, 5, 2).unwrap().pass);
}

#[test]
fn result_json_round_trip() {
    let c = heis(&shuriken(1, 1), 2);
    let r = line_graph_route(&c, RouteOptions { elide_boundary: true, ..Default::default() }).unwrap();
    let back = RoutingResult::from_json(&r.to_json()).unwrap();
    assert_eq!(back, r);
    let v: serde_json::Value = serde_json::from_str(&r.to_json()).unwrap();
    for key in ["circuit", "initial_layout", "final_permutation", "metrics"] {
        assert!(v.get(key).is_some(), "{key}");
    }
    for key in ["depth", "n_swap", "n_qubit", "wall_time_s"] {
        assert!(v["metrics"].get(key).is_some(), "{key}");
    }
}

#[test]
fn wall_time_has_centisecond_resolution() {
    let m = route_metrics(&Circuit::new(0), &Circuit::new(0), 0.123_456);
    assert_eq!(m.wall_time_s, 0.12);
}

/// Random circuit whose coupling graph is a whole random line graph: one
/// CNOT per edge first, so a sparse draw cannot leave a non-line subgraph.
fn arb_circuit() -> impl Strategy<Value = Circuit> {
    (2usize..9, any::<u64>(), 0usize..120).prop_map(|(n, seed, len)| {
        let g = random_line_graph(n, seed).unwrap();
        let body = random_circuit(&g, len, seed ^ 0x5eed).unwrap();
        let cover = g.edges().map(|(a, b)| Gate::cnot(a, b));
        Circuit::from_gates(body.num_qubits, cover.chain(body.into_gates()))
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn swap_overhead_is_at_most_twice_lambda(c in arb_circuit()) {
        for opts in all_options() {
            let r = line_graph_route(&c, opts).unwrap();
            prop_assert!(r.metrics.n_swap <= 2 * c.two_qubit_count(), "{:?}", opts);
            prop_assert_eq!(r.metrics.lambda, c.two_qubit_count());
            prop_assert_eq!(r.metrics.total_gates, c.len());
        }
    }

    #[test]
    fn routing_is_deterministic(c in arb_circuit()) {
        let mut a = line_graph_route(&c, RouteOptions::default()).unwrap();
        let mut b = line_graph_route(&c, RouteOptions::default()).unwrap();
        a.metrics.wall_time_s = 0.0;
        b.metrics.wall_time_s = 0.0;
        prop_assert_eq!(a, b);
    }

    #[test]
    fn cancellation_is_idempotent(c in arb_circuit(), extra in proptest::collection::vec((0u32..6, 0u32..6), 0..30)) {
        let mut gates = c.gates().to_vec();
        for (k, (a, b)) in extra.into_iter().enumerate() {
            if a != b && (a as usize) < c.num_qubits && (b as usize) < c.num_qubits {
                gates.insert(k.min(gates.len()), Gate::swap(a, b));
            }
        }
        let c = Circuit::from_gates(c.num_qubits, gates);
        let once = cancel_swaps(&c);
        prop_assert_eq!(cancel_swaps(&once), once);
    }

    #[test]
    fn lone_leaf_removal_is_monotone(c in arb_circuit()) {
        for side in [MediatorSide::First, MediatorSide::Second] {
            let without = line_graph_route(&c, RouteOptions { side, lone_leaf: false, elide_boundary: false }).unwrap();
            let pruned = remove_lone_leaves(without.clone());
            prop_assert!(pruned.metrics.n_swap <= without.metrics.n_swap);
            prop_assert!(pruned.metrics.n_qubit <= without.metrics.n_qubit);
            prop_assert!(pruned.metrics.depth <= without.metrics.depth);
            let with = line_graph_route(&c, RouteOptions { side, lone_leaf: true, elide_boundary: false }).unwrap();
            prop_assert!(with.metrics.n_qubit <= without.metrics.n_qubit);
            prop_assert!(with.metrics.n_swap <= without.metrics.n_swap);
        }
    }

    #[test]
    fn routed_gates_follow_hardware(c in arb_circuit()) {
        for opts in all_options() {
            let r = line_graph_route(&c, opts).unwrap();
            prop_assert!(respects_hardware(&r.circuit, &r.hardware));
            let heavy: std::collections::BTreeSet<_> = r.initial_layout.values().collect();
            prop_assert_eq!(heavy.len(), r.initial_layout.len());
        }
    }

    #[test]
    fn pruned_results_still_verify(c in arb_circuit()) {
        let without = line_graph_route(&c, RouteOptions { lone_leaf: false, ..Default::default() }).unwrap();
        let pruned = remove_lone_leaves(without);
        if pruned.circuit.active_qubits().len() <= 12 {
            let rep = verify_equivalence(&c, &pruned, &Bindings::new(), 2, 4).unwrap();
            prop_assert!(rep.pass, "{:?}", rep);
        }
    }
}

#[test]
fn sparse_circuit_routes_on_its_lattice() {
    let g = kagome(3, 3);
    let c = random_circuit(&g, 200, 11).unwrap();
    assert!(line_graph_route(&c, RouteOptions::default()).is_err());
    let r = line_graph_route_on(&c, &g, RouteOptions::default()).unwrap();
    assert!(respects_hardware(&r.circuit, &r.hardware));
    assert!(r.metrics.n_swap <= 2 * c.two_qubit_count());
    assert_eq!(r.initial_layout.len(), g.node_count());
}

#[test]
fn sparse_circuit_on_lattice_verifies() {
    let g = kagome(1, 1);
    for seed in 0..6 {
        let c = random_circuit(&g, 12, seed).unwrap();
        for side in [MediatorSide::First, MediatorSide::Second] {
            let r = line_graph_route_on(&c, &g, RouteOptions { side, ..Default::default() }).unwrap();
            let rep = verify_equivalence(&c, &r, &Bindings::new(), 2, seed).unwrap();
            assert!(rep.pass, "seed {seed}: {rep:?}");
        }
    }
}

#[test]
fn gates_off_the_coupling_graph_are_rejected() {
    let g = kagome(1, 1);
    let (a, b) = (0..8).flat_map(|a| (0..8).map(move |b| (a, b))).find(|&(a, b)| a != b && !g.has_edge(a, b)).unwrap();
    let c = Circuit::from_gates(8, [Gate::cnot(a, b)]);
    assert_eq!(
        line_graph_route_on(&c, &g, RouteOptions::default()),
        Err(RouteError::OffCouplingGraph(vec![a, b]))
    );
    let c = Circuit::from_gates(20, [Gate::one(GateKind::H, 19)]);
    assert!(matches!(line_graph_route_on(&c, &g, RouteOptions::default()), Err(RouteError::OffCouplingGraph(_))));
}
