use proptest::prelude::*;

use ujac_core::assembly::{chi_compactified, torus_trace};
use ujac_core::bijections::{build_bijection, canonical_stability, DegreeWindow};
use ujac_core::equivariant::{EquivariantClass, Partition};
use ujac_core::graphs::{automorphism_group, enumerate_stable_graphs, stable_pairs};
use ujac_core::interior::InteriorProvider;
use ujac_core::motives::MotiveClass;
use ujac_core::{Error, Multidegree, Multigraph, PicardGroup, SpanningSubgraph};

fn arb_connected() -> impl Strategy<Value = Multigraph> {
    (1usize..=5).prop_flat_map(|n| {
        let extra = prop::collection::vec((0..n, 0..n), 0..5);
        (Just(n), prop::collection::vec(0..n.max(1), n.saturating_sub(1)), extra).prop_map(|(n, parents, extra)| {
            // Vertex v > 0 hangs off some earlier vertex, so the graph is connected.
            let mut edges: Vec<_> = parents.iter().enumerate().map(|(i, &p)| (p % (i + 1), i + 1)).collect();
            edges.extend(extra);
            Multigraph::new(n, edges)
        })
    })
}

fn minor_det(m: &[Vec<i64>]) -> i64 {
    let n = m.len();
    if n == 0 {
        return 1;
    }
    let mut a: Vec<Vec<f64>> = m.iter().map(|r| r.iter().map(|&x| x as f64).collect()).collect();
    let mut det = 1.0;
    for c in 0..n {
        let p = (c..n).max_by(|&i, &j| a[i][c].abs().total_cmp(&a[j][c].abs())).unwrap();
        if a[p][c] == 0.0 {
            return 0;
        }
        if p != c {
            a.swap(p, c);
            det = -det;
        }
        det *= a[c][c];
        for r in c + 1..n {
            let f = a[r][c] / a[c][c];
            for k in c..n {
                a[r][k] -= f * a[c][k];
            }
        }
    }
    det.round() as i64
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn picard_order_is_a_laplacian_minor(g in arb_connected()) {
        let pic = PicardGroup::new(&g).unwrap();
        let n = g.num_vertices;
        let mut lap = vec![vec![0i64; n]; n];
        for &(a, b) in &g.edges {
            if a != b {
                lap[a][a] += 1;
                lap[b][b] += 1;
                lap[a][b] -= 1;
                lap[b][a] -= 1;
            }
        }
        let minor: Vec<Vec<i64>> = lap[..n - 1].iter().map(|r| r[..n - 1].to_vec()).collect();
        prop_assert_eq!(pic.order() as i64, minor_det(&minor));
        prop_assert_eq!(pic.invariant_factors().iter().product::<i64>(), pic.order() as i64);
    }

    #[test]
    fn torsor_representatives_are_distinct_classes(g in arb_connected(), d in -6i64..6) {
        let pic = PicardGroup::new(&g).unwrap();
        let reps = pic.torsor_representatives(d);
        prop_assert_eq!(reps.len() as u64, pic.order());
        for (i, a) in reps.iter().enumerate() {
            prop_assert_eq!(a.total(), d);
            for b in &reps[i + 1..] {
                prop_assert!(!pic.are_equivalent(a, b));
            }
        }
    }

    #[test]
    fn class_arithmetic_is_a_group(g in arb_connected(), x in prop::collection::vec(-4i64..4, 5), y in prop::collection::vec(-4i64..4, 5)) {
        let pic = PicardGroup::new(&g).unwrap();
        let n = g.num_vertices;
        let (a, b) = (Multidegree(x[..n].to_vec()), Multidegree(y[..n].to_vec()));
        let sum = pic.add(&pic.project(&a), &pic.project(&b));
        prop_assert_eq!(sum, pic.project(&a.add(&b)));
        prop_assert_eq!(pic.scale(&pic.project(&a), 3), pic.project(&a.scale(3)));
    }

    #[test]
    fn bijections_on_random_degrees(index in 0usize..64, d1 in -25i64..25, d2 in -25i64..25) {
        let graphs = enumerate_stable_graphs(1, &[1, 1]).unwrap();
        let graph = &graphs[index % graphs.len()];
        let window = DegreeWindow::new(1, &[1, 1]);
        prop_assume!(window.contains(d1) && window.contains(d2));
        let b = build_bijection(graph, d1, d2).unwrap();
        let pic = PicardGroup::new(&graph.multigraph()).unwrap();
        prop_assert!(b.is_bijective(&pic));
        for phi in automorphism_group(graph, None).iter() {
            prop_assert!(b.commutes_with(&pic, phi.vertex_permutation()));
        }
    }

    #[test]
    fn inadmissible_degrees_are_rejected(d in -30i64..30) {
        let provider = InteriorProvider::new();
        let result = chi_compactified(1, &[2], d, &provider);
        if d.rem_euclid(2) == 1 {
            prop_assert_eq!(result.unwrap().e_polynomial().unwrap().to_q_string(), "1 + 4q + 4q^2 + q^3");
        } else {
            prop_assert!(matches!(result, Err(Error::InadmissibleDegree { .. })), "expected inadmissible degree error");
        }
    }

    #[test]
    fn type_one_one_at_any_degree(d in -40i64..40) {
        let provider = InteriorProvider::new();
        let e = chi_compactified(1, &[1], d, &provider).unwrap().e_polynomial().unwrap();
        prop_assert_eq!(e.to_q_string(), "1 + 2q + q^2");
    }

    #[test]
    fn induced_products_of_trivial_classes(a in 0usize..4, b in 0usize..4) {
        let l = MotiveClass::l();
        let x = EquivariantClass::trivial(a, &l);
        let y = EquivariantClass::trivial(b, &MotiveClass::one());
        let product = x.product(&y);
        prop_assert_eq!(product.degree(), a + b);
        let binomial = (0..b).fold(1i64, |acc, i| acc * (a + b - i) as i64 / (i + 1) as i64);
        prop_assert_eq!(product.underlying(), l.scale(binomial));
        prop_assert_eq!(product.invariants().unwrap(), l);
    }
}

#[test]
fn stability_conditions_hold() {
    for (g, colors, d) in [(1, vec![1], 0), (1, vec![1, 1], 1), (1, vec![3], 1), (2, vec![], 0), (0, vec![1, 1, 1, 1], 0)] {
        let assignment = canonical_stability(g, &colors, d).unwrap();
        assert!(assignment.condition_i(), "({g},{colors:?}) d={d}");
        assert!(assignment.condition_ii(), "({g},{colors:?}) d={d}");
    }
}

#[test]
fn torus_averages_are_integral() {
    for (g, colors) in [(1, vec![1, 1]), (2, vec![]), (2, vec![1])] {
        for pair in stable_pairs(g, &colors).unwrap() {
            let total = pair.aut.iter().fold(MotiveClass::zero(), |acc, phi| &acc + &torus_trace(&pair.sub, phi).unwrap());
            assert!(total.div_exact(pair.aut.order() as i64).is_ok(), "{}", pair.graph);
        }
    }
}

#[test]
fn merged_and_labeled_legs_agree() {
    let provider = InteriorProvider::new();
    let merged = chi_compactified(1, &[2, 1], 1, &provider).unwrap();
    let labeled = chi_compactified(1, &[1, 1, 1], 1, &provider).unwrap();
    assert_eq!(merged.motive(), labeled.motive());
    let q = merged.quotient_motive().unwrap();
    assert!(q.e_polynomial().unwrap().is_palindromic(4));
    assert_eq!(merged.total.character_at(&[Partition::ones(2), Partition::ones(1)]), labeled.motive());
}

#[test]
fn full_subgraph_of_a_tree_has_trivial_torus() {
    let tree = enumerate_stable_graphs(0, &[1, 1, 1, 1]).unwrap().into_iter().find(|g| g.num_edges() == 1).unwrap();
    let full = SpanningSubgraph::full(&tree);
    for phi in automorphism_group(&tree, None).iter() {
        assert_eq!(torus_trace(&full, phi).unwrap(), MotiveClass::one());
    }
}
