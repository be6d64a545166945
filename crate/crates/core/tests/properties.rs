use std::collections::BTreeSet;

use copx_core::cone::{cone_member, irreducible_subset_indices, Membership};
use copx_core::facets::{full_description, vertex_facets, MinimalityMode, Variant};
use copx_core::hull::{vrep_to_hrep, VRep};
use copx_core::instances::{argmax_brute, gen_family, Family, GenLimits, Graph, Instance, WeightVector};
use copx_core::lattice::{LatticeCaps, SignVector};
use copx_core::optimality::{OptimalityEngine, Regime};
use copx_core::rational::{Rat, RatVec};
use copx_core::verify::check_facet_claim;
use proptest::prelude::*;

fn sign_vector(n: usize) -> impl Strategy<Value = SignVector> {
    prop::collection::vec(-1i8..=1, n).prop_map(|v| SignVector::new(v).unwrap())
}

fn generators_and_target() -> impl Strategy<Value = (usize, Vec<SignVector>, RatVec)> {
    (1usize..=4).prop_flat_map(|n| (Just(n), prop::collection::vec(sign_vector(n), 1..=8), target(n)))
}

fn target(n: usize) -> impl Strategy<Value = RatVec> {
    prop::collection::vec((-6i64..=6, 1i64..=5), n)
        .prop_map(|v| RatVec::new(v.into_iter().map(|(p, q)| Rat::new(p, q).unwrap()).collect()))
}

fn explicit_instance() -> impl Strategy<Value = Instance> {
    (2usize..=4)
        .prop_flat_map(|n| prop::collection::btree_set(prop::collection::vec(0u8..=1, n), 1..=(1usize << n).min(6)))
        .prop_map(|set| Instance::from_vertices(set.into_iter().collect(), "random").unwrap())
}

/// Membership in cone(G) read off the hull of conv({0} ∪ G): the cone is
/// cut out by the rows of that polytope that are tight at the origin.
fn hull_says_member(n: usize, gens: &[SignVector], t: &RatVec) -> bool {
    let mut points: Vec<RatVec> = gens.iter().map(SignVector::to_rat).collect();
    points.push(RatVec::zeros(n));
    let h = vrep_to_hrep(&VRep::new(points).unwrap(), 8).unwrap();
    h.equalities.iter().all(|e| e.a.dot(t).unwrap().is_zero())
        && h.inequalities.iter().filter(|r| r.b.is_zero()).all(|r| !r.a.dot(t).unwrap().is_positive())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn cone_membership_agrees_with_hull((n, gens, t) in generators_and_target()) {
        let m = cone_member(&gens, &t).unwrap();
        prop_assert!(m.verify(&gens, &t));
        prop_assert_eq!(m.is_member(), hull_says_member(n, &gens, &t));
        for g in &gens {
            prop_assert!(cone_member(&gens, &g.to_rat()).unwrap().is_member());
        }
    }

    #[test]
    fn irreducible_subset_generates_the_same_cone((_n, gens, t) in generators_and_target()) {
        let keep = irreducible_subset_indices(&gens);
        let kept: Vec<SignVector> = keep.iter().map(|&i| gens[i].clone()).collect();
        prop_assert_eq!(cone_member(&gens, &t).unwrap().is_member(), cone_member(&kept, &t).unwrap().is_member());
        for g in &gens {
            prop_assert!(cone_member(&kept, &g.to_rat()).unwrap().is_member());
        }
    }

    #[test]
    fn facet_rows_are_valid_and_source_tight(inst in explicit_instance(), irreducible in any::<bool>()) {
        let mode = if irreducible { MinimalityMode::Irreducible } else { MinimalityMode::Literal };
        let caps = LatticeCaps::default();
        for k in 0..inst.len() {
            for row in vertex_facets(&inst, k, Variant::V, mode, &caps).unwrap() {
                for x in inst.vertices() {
                    prop_assert!(row.h.dot_binary(x) <= row.rhs);
                }
                for &s in &row.sources {
                    prop_assert_eq!(row.h.dot_binary(inst.vertex(s)), row.rhs);
                }
            }
        }
    }

    /// Arbitrary point sets can have facets or an affine hull whose normals
    /// leave {-1,0,1}^n (see `lattice_cones_miss_a_tie_direction`), so the
    /// claim may be refuted, but only with evidence attached.
    #[test]
    fn irreducible_description_matches_or_explains(inst in explicit_instance()) {
        let caps = LatticeCaps::default();
        let report = full_description(&inst, Variant::V, MinimalityMode::Irreducible, &caps, 8).unwrap();
        prop_assert!(report.divergence.is_empty());
        prop_assert!(report.oracle_diff.invalid_rows.is_empty());
        let claim = check_facet_claim(&inst, MinimalityMode::Irreducible, &caps, 8).unwrap();
        let missing = !report.oracle_diff.missing_facets.is_empty();
        if report.polytope_match && !missing {
            prop_assert!(claim.is_confirmed(), "{}", claim.evidence);
        } else {
            prop_assert!(claim.is_refuted());
            let extra = claim.evidence.get("extra_vertices").and_then(|v| v.as_array()).is_some_and(|v| !v.is_empty());
            prop_assert!(extra || missing, "{}", claim.evidence);
        }
    }
}

fn odd_instance() -> Instance {
    Instance::from_vertices(vec![vec![0, 0, 0, 0], vec![0, 1, 0, 1], vec![0, 1, 1, 0], vec![1, 0, 1, 1]], "odd")
        .unwrap()
}

#[test]
fn lattice_cones_miss_a_tie_direction() {
    // c is constant on X, yet the only {-1,0,1} vector orthogonal to X is 0
    let inst = odd_instance();
    let c = WeightVector::from_ints([2, 1, -1, -1]);
    assert_eq!(argmax_brute(&inst, &c).unwrap(), vec![0, 1, 2, 3]);
    let set = OptimalityEngine::new(&inst, LatticeCaps::default()).optimal_set(&c, Regime::General).unwrap();
    assert!(set.optimal.is_empty());
    assert_eq!(set.counterexamples.len(), 4);
    for ce in &set.counterexamples {
        assert!(ce.brute_verdict && !ce.cone_verdict);
        let Membership::Farkas(f) = &ce.certificate else { panic!("expected a separating certificate") };
        // y separates c from every lattice generator of the vertex
        assert!(f.y.dot(c.entries()).unwrap().is_positive());
    }

    let report = full_description(&inst, Variant::V, MinimalityMode::Irreducible, &LatticeCaps::default(), 8).unwrap();
    assert!(!report.polytope_match);
    assert_eq!(report.oracle_diff.missing_equalities.len(), 1);
    assert_eq!(report.oracle_diff.missing_equalities[0].a, RatVec::from_ints([2, 1, -1, -1]));
}

fn is_forest(nodes: usize, edges: &[(usize, usize)]) -> bool {
    let mut parent: Vec<usize> = (0..nodes).collect();
    fn find(p: &mut Vec<usize>, x: usize) -> usize {
        if p[x] != x {
            let r = find(p, p[x]);
            p[x] = r;
        }
        p[x]
    }
    for &(u, v) in edges {
        let (a, b) = (find(&mut parent, u), find(&mut parent, v));
        if a == b {
            return false;
        }
        parent[a] = b;
    }
    true
}

fn chosen(graph: &Graph, v: &[u8]) -> Vec<(usize, usize)> {
    graph.edges.iter().zip(v).filter(|(_, &b)| b == 1).map(|(&e, _)| e).collect()
}

fn degrees(nodes: usize, edges: &[(usize, usize)]) -> Vec<usize> {
    let mut d = vec![0; nodes];
    for &(u, v) in edges {
        d[u] += 1;
        d[v] += 1;
    }
    d
}

#[test]
fn generated_supports_are_feasible() {
    let lim = GenLimits::default();
    for m in 3..=5 {
        let g = Graph::complete(m);
        let trees = gen_family(&Family::SpanningTrees(g.clone()), &lim).unwrap();
        assert_eq!(trees.len(), m.pow(m as u32 - 2));
        for v in trees.vertices() {
            let e = chosen(&g, v);
            assert!(e.len() == m - 1 && is_forest(m, &e));
        }
        let tours = gen_family(&Family::TspTours { cities: m }, &lim).unwrap();
        assert_eq!(tours.len(), (1..m).product::<usize>() / 2);
        for v in tours.vertices() {
            let e = chosen(&g, v);
            assert!(degrees(m, &e).iter().all(|&d| d == 2));
            // 2-regular with m edges is a single cycle iff dropping one edge leaves a spanning tree
            assert!(is_forest(m, &e[1..]));
        }
    }
    for m in [4, 6] {
        let g = Graph::complete(m);
        let matchings = gen_family(&Family::PerfectMatchings(g.clone()), &lim).unwrap();
        assert_eq!(matchings.len(), (1..m).step_by(2).product::<usize>());
        for v in matchings.vertices() {
            assert!(degrees(m, &chosen(&g, v)).iter().all(|&d| d == 1));
        }
    }
    let sorted: BTreeSet<Vec<u8>> =
        gen_family(&Family::SpanningTrees(Graph::complete(4)), &lim).unwrap().vertices().iter().cloned().collect();
    let listed: Vec<Vec<u8>> = sorted.into_iter().collect();
    assert_eq!(listed, gen_family(&Family::SpanningTrees(Graph::complete(4)), &lim).unwrap().vertices());
}
