use std::collections::BTreeSet;

use super::{
    automorphism_group, connected, connected_spanning_subgraphs, AutGroup, Color, Multigraph, SpanningSubgraph,
    StableGraph,
};
use crate::error::{Error, Result};

/// One representative per isomorphism class of stable graphs of genus `g`
/// with `colors[k]` legs of color `k + 1`, sorted by (edges, vertices, graph).
pub fn enumerate_stable_graphs(g: u32, colors: &[usize]) -> Result<Vec<StableGraph>> {
    let n: usize = colors.iter().sum();
    if 2 * g as i64 - 2 + n as i64 <= 0 {
        return Err(Error::UnstableType { g, n });
    }
    let max_vertices = (2 * g as usize + n).saturating_sub(2).max(1);
    let mut found = BTreeSet::new();
    for nv in 1..=max_vertices {
        let mut genera = vec![0u32; nv];
        genus_vectors(g, nv, 0, g, &mut genera, &mut |genera| {
            let sum: u32 = genera.iter().sum();
            let ne = (g - sum) as usize + nv - 1;
            let pairs: Vec<(usize, usize)> = (0..nv).flat_map(|a| (a..nv).map(move |b| (a, b))).collect();
            for_each_multiset(pairs.len(), ne, &mut |choice| {
                let edges: Vec<_> = choice.iter().map(|&i| pairs[i]).collect();
                if !connected(nv, edges.iter().copied()) {
                    return;
                }
                // Legs still needed at each vertex for stability.
                let mut need = 0i64;
                for v in 0..nv {
                    let val: usize = edges.iter().map(|&(a, b)| (a == v) as usize + (b == v) as usize).sum();
                    need += (3 - 2 * genera[v] as i64 - val as i64).max(0);
                }
                if need > n as i64 {
                    return;
                }
                distribute_legs(colors, nv, &mut |legs| {
                    if let Ok(graph) = StableGraph::new(genera.to_vec(), legs.to_vec(), edges.clone()) {
                        found.insert(graph.canonical());
                    }
                });
            });
        });
    }
    let mut out: Vec<_> = found.into_iter().collect();
    out.sort_by(|a, b| (a.num_edges(), a.num_vertices(), a).cmp(&(b.num_edges(), b.num_vertices(), b)));
    Ok(out)
}

/// Nonincreasing genus vectors with sum at most `total`.
fn genus_vectors(total: u32, nv: usize, pos: usize, cap: u32, buf: &mut [u32], f: &mut dyn FnMut(&[u32])) {
    if pos == nv {
        f(buf);
        return;
    }
    let used: u32 = buf[..pos].iter().sum();
    for x in 0..=cap.min(total - used) {
        buf[pos] = x;
        genus_vectors(total, nv, pos + 1, x, buf, f);
    }
}

/// Nondecreasing index sequences of length `k` over `0..n`.
fn for_each_multiset(n: usize, k: usize, f: &mut dyn FnMut(&[usize])) {
    fn rec(n: usize, k: usize, start: usize, buf: &mut Vec<usize>, f: &mut dyn FnMut(&[usize])) {
        if buf.len() == k {
            f(buf);
            return;
        }
        for i in start..n {
            buf.push(i);
            rec(n, k, i, buf, f);
            buf.pop();
        }
    }
    if n == 0 && k > 0 {
        return;
    }
    rec(n, k, 0, &mut Vec::with_capacity(k), f);
}

/// All ways to place `colors[k]` indistinguishable legs of color `k + 1`.
fn distribute_legs(colors: &[usize], nv: usize, f: &mut dyn FnMut(&[Vec<Color>])) {
    fn rec(colors: &[usize], k: usize, nv: usize, legs: &mut Vec<Vec<Color>>, f: &mut dyn FnMut(&[Vec<Color>])) {
        if k == colors.len() {
            f(legs);
            return;
        }
        for_each_multiset(nv, colors[k], &mut |slots| {
            for &v in slots {
                legs[v].push(k as Color + 1);
            }
            rec(colors, k + 1, nv, legs, f);
            for &v in slots {
                legs[v].pop();
            }
        });
    }
    rec(colors, 0, nv, &mut vec![Vec::new(); nv], f);
}

/// Connected multigraphs (loops allowed) with at most `max_edges` edges, one
/// per isomorphism class.
pub fn enumerate_multigraphs(max_edges: usize) -> Vec<Multigraph> {
    let mut found = BTreeSet::new();
    for ne in 0..=max_edges {
        for nv in 1..=ne + 1 {
            let pairs: Vec<(usize, usize)> = (0..nv).flat_map(|a| (a..nv).map(move |b| (a, b))).collect();
            for_each_multiset(pairs.len(), ne, &mut |choice| {
                let edges: Vec<_> = choice.iter().map(|&i| pairs[i]).collect();
                if connected(nv, edges.iter().copied()) {
                    found.insert(Multigraph { num_vertices: nv, edges }.canonical());
                }
            });
        }
    }
    found.into_iter().collect()
}

/// Isomorphism class of a pair `(Γ, Γ₀)` with its automorphism group `Aut(Γ, Γ₀)`.
#[derive(Clone, Debug)]
pub struct StablePair {
    pub graph: StableGraph,
    pub sub: SpanningSubgraph,
    pub aut: AutGroup,
}

/// All pairs `(Γ, Γ₀)` of type `(g, colors)` up to isomorphism: for each
/// graph, the minimal-mask representative of each `Aut(Γ)`-orbit of
/// connected spanning subgraphs.
pub fn stable_pairs(g: u32, colors: &[usize]) -> Result<Vec<StablePair>> {
    let mut out = Vec::new();
    for graph in enumerate_stable_graphs(g, colors)? {
        out.extend(pairs_of(&graph));
    }
    Ok(out)
}

pub(crate) fn pairs_of(graph: &StableGraph) -> Vec<StablePair> {
    let full = automorphism_group(graph, None);
    connected_spanning_subgraphs(graph)
        .into_iter()
        .filter(|s| full.orbit_min(s.mask()) == s.mask())
        .map(|sub| StablePair { graph: graph.clone(), aut: full.stabilizer(&sub), sub })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_counts() {
        let g = enumerate_stable_graphs(0, &[1, 1, 1]).unwrap();
        assert_eq!(g.len(), 1);
        assert_eq!(g[0].num_edges(), 0);

        let g = enumerate_stable_graphs(1, &[1]).unwrap();
        assert_eq!(g.len(), 2);

        assert!(matches!(enumerate_stable_graphs(1, &[]), Err(Error::UnstableType { .. })));
        assert!(matches!(enumerate_stable_graphs(0, &[1, 1]), Err(Error::UnstableType { .. })));
    }

    #[test]
    fn every_graph_has_the_requested_type() {
        for (g, colors) in [(2u32, vec![]), (1, vec![1, 1, 1]), (0, vec![1; 6]), (2, vec![1])] {
            for graph in enumerate_stable_graphs(g, &colors).unwrap() {
                assert_eq!(graph.genus(), g);
                assert_eq!(graph.color_profile(), colors.iter().copied().filter(|&c| c > 0).collect::<Vec<_>>());
                assert_eq!(graph.canonical(), graph);
            }
        }
    }

    #[test]
    fn pair_counts() {
        // Smooth; loop with loop kept; loop with loop cut.
        assert_eq!(stable_pairs(1, &[1]).unwrap().len(), 3);
        assert_eq!(stable_pairs(0, &[1, 1, 1]).unwrap().len(), 1);
    }

    #[test]
    fn small_multigraphs() {
        // 0 edges: a point. 1 edge: a loop or a bridge.
        assert_eq!(enumerate_multigraphs(0).len(), 1);
        assert_eq!(enumerate_multigraphs(1).len(), 3);
    }
}
