use ujac_core::graphs::{enumerate_stable_graphs, stable_pairs};
use ujac_core::StableGraph;

fn permutations(n: usize) -> Vec<Vec<usize>> {
    if n == 0 {
        return vec![vec![]];
    }
    let mut out = Vec::new();
    for p in permutations(n - 1) {
        for i in 0..n {
            let mut q = p.clone();
            q.insert(i, n - 1);
            out.push(q);
        }
    }
    out
}

/// Half-edge permutations that respect pairing, leg colors and a
/// genus-preserving vertex bijection; no shared code with the library.
fn brute_automorphisms(graph: &StableGraph) -> Vec<Vec<usize>> {
    let he = graph.half_edges();
    let nv = graph.num_vertices();
    permutations(he.len())
        .into_iter()
        .filter(|p| {
            let paired = (0..he.len()).all(|h| he.pairing[h].map(|k| p[k]) == he.pairing[p[h]]);
            let colored = (0..he.len()).all(|h| he.leg_color[h] == he.leg_color[p[h]]);
            let mut f = vec![None; nv];
            let mut vertex_ok = true;
            for h in 0..he.len() {
                let (a, b) = (he.vertex_of[h], he.vertex_of[p[h]]);
                vertex_ok &= *f[a].get_or_insert(b) == b;
            }
            // Isolated vertices only occur in the one-vertex graph.
            let f: Vec<usize> = f.iter().enumerate().map(|(v, x)| x.unwrap_or(v)).collect();
            let mut seen = f.clone();
            seen.sort();
            seen.dedup();
            paired && colored && vertex_ok && seen.len() == nv && (0..nv).all(|v| graph.vertex_genus(v) == graph.vertex_genus(f[v]))
        })
        .collect()
}

fn connected(nv: usize, edges: &[(usize, usize)]) -> bool {
    let mut reach = vec![false; nv];
    reach[0] = true;
    loop {
        let mut grew = false;
        for &(a, b) in edges {
            if reach[a] != reach[b] {
                reach[a] = true;
                reach[b] = true;
                grew = true;
            }
        }
        if !grew {
            return reach.iter().all(|&r| r);
        }
    }
}

/// Burnside count of `Aut(Γ)`-orbits of connected spanning subgraphs, and the
/// number of connected spanning subgraphs.
fn orbit_count(graph: &StableGraph) -> (usize, usize) {
    let he = graph.half_edges();
    let edges = graph.edges();
    let ne = edges.len();
    let subsets: Vec<u64> = (0..1u64 << ne)
        .filter(|m| connected(graph.num_vertices(), &(0..ne).filter(|e| m >> e & 1 == 1).map(|e| edges[e]).collect::<Vec<_>>()))
        .collect();
    let auts = brute_automorphisms(graph);
    let mut fixed = 0;
    for p in &auts {
        let edge_image = |e: usize| (p[he.num_legs + 2 * e] - he.num_legs) / 2;
        fixed += subsets
            .iter()
            .filter(|&&m| (0..ne).all(|e| (m >> e & 1) == (m >> edge_image(e) & 1)))
            .count();
    }
    assert_eq!(fixed % auts.len(), 0);
    (fixed / auts.len(), subsets.len())
}

#[test]
fn stable_graph_counts() {
    // Boundary strata of M̄_{0,5} and M̄_{0,6}: 1 + 10 + 15 and 1 + 25 + 105 + 105.
    assert_eq!(enumerate_stable_graphs(0, &[1; 5]).unwrap().len(), 26);
    assert_eq!(enumerate_stable_graphs(0, &[1; 6]).unwrap().len(), 236);
    assert_eq!(enumerate_stable_graphs(2, &[]).unwrap().len(), 7);
    assert_eq!(enumerate_stable_graphs(1, &[1, 1]).unwrap().len(), 5);
}

#[test]
fn pair_counts_match_burnside() {
    for (g, colors) in [(1u32, vec![1]), (1, vec![1, 1]), (1, vec![2]), (2, vec![]), (2, vec![1]), (0, vec![1; 5]), (0, vec![2, 2])] {
        let pairs = stable_pairs(g, &colors).unwrap();
        for graph in enumerate_stable_graphs(g, &colors).unwrap() {
            let mine: Vec<_> = pairs.iter().filter(|p| p.graph == graph).collect();
            let (orbits, subgraphs) = orbit_count(&graph);
            assert_eq!(mine.len(), orbits, "{graph}");
            let auts = brute_automorphisms(&graph).len();
            let orbit_sizes: usize = mine.iter().map(|p| auts / p.aut.order()).sum();
            assert_eq!(orbit_sizes, subgraphs, "{graph}");
        }
    }
    assert_eq!(stable_pairs(2, &[]).unwrap().len(), 15);
}
