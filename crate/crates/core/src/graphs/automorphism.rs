use super::{EdgeMask, HalfEdges, SpanningSubgraph, StableGraph};

/// Permutation of half-edges commuting with the edge involution, preserving
/// vertex genera and leg colors.
///
/// The induced vertex and edge permutations are cached. `flips[e]` is set when
/// the first half-edge of `e` goes to the second half-edge of its image.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct GraphAutomorphism {
    half_edges: Vec<usize>,
    vertices: Vec<usize>,
    edges: Vec<usize>,
    flips: Vec<bool>,
}

impl GraphAutomorphism {
    /// Derives the vertex and edge actions of a half-edge permutation.
    /// Returns `None` if it is not an automorphism of `graph`.
    pub fn from_half_edges(graph: &StableGraph, perm: Vec<usize>) -> Option<Self> {
        let he = graph.half_edges();
        if perm.len() != he.len() {
            return None;
        }
        let mut seen = vec![false; perm.len()];
        for &p in &perm {
            if p >= perm.len() || std::mem::replace(&mut seen[p], true) {
                return None;
            }
        }
        let mut vertices = vec![usize::MAX; graph.num_vertices()];
        for h in 0..he.len() {
            let (v, w) = (he.vertex_of[h], he.vertex_of[perm[h]]);
            if vertices[v] == usize::MAX {
                vertices[v] = w;
            } else if vertices[v] != w {
                return None;
            }
            if he.leg_color[h] != he.leg_color[perm[h]] {
                return None;
            }
            if he.pairing[h].map(|p| perm[p]) != he.pairing[perm[h]] {
                return None;
            }
        }
        // Vertices without half-edges only occur in the one-vertex graph.
        for (v, slot) in vertices.iter_mut().enumerate() {
            if *slot == usize::MAX {
                *slot = v;
            }
        }
        if (0..graph.num_vertices()).any(|v| graph.genera[v] != graph.genera[vertices[v]]) {
            return None;
        }
        Some(Self::with_actions(&he, perm, vertices))
    }

    fn with_actions(he: &HalfEdges, half_edges: Vec<usize>, vertices: Vec<usize>) -> Self {
        let ne = (he.len() - he.num_legs) / 2;
        let mut edges = vec![0; ne];
        let mut flips = vec![false; ne];
        for e in 0..ne {
            let first = he.num_legs + 2 * e;
            let img = half_edges[first];
            edges[e] = (img - he.num_legs) / 2;
            flips[e] = (img - he.num_legs) % 2 == 1;
        }
        GraphAutomorphism { half_edges, vertices, edges, flips }
    }

    pub fn identity(graph: &StableGraph) -> Self {
        let he = graph.half_edges();
        let n = he.len();
        Self::with_actions(&he, (0..n).collect(), (0..graph.num_vertices()).collect())
    }

    pub fn half_edge_image(&self, h: usize) -> usize {
        self.half_edges[h]
    }

    pub fn half_edge_permutation(&self) -> &[usize] {
        &self.half_edges
    }

    pub fn vertex_image(&self, v: usize) -> usize {
        self.vertices[v]
    }

    pub fn vertex_permutation(&self) -> &[usize] {
        &self.vertices
    }

    pub fn edge_image(&self, e: usize) -> usize {
        self.edges[e]
    }

    pub fn edge_permutation(&self) -> &[usize] {
        &self.edges
    }

    /// Orientation sign of `e -> edge_image(e)` relative to stored orientations.
    pub fn edge_sign(&self, e: usize) -> i64 {
        if self.flips[e] {
            -1
        } else {
            1
        }
    }

    pub fn map_mask(&self, mask: EdgeMask) -> EdgeMask {
        let mut out = 0;
        for (e, &img) in self.edges.iter().enumerate() {
            if mask >> e & 1 == 1 {
                out |= 1 << img;
            }
        }
        out
    }

    pub fn preserves(&self, sub: &SpanningSubgraph) -> bool {
        self.map_mask(sub.mask()) == sub.mask()
    }

    /// `self ∘ other`: apply `other` first.
    pub fn compose(&self, other: &GraphAutomorphism, graph: &StableGraph) -> GraphAutomorphism {
        let perm = other.half_edges.iter().map(|&h| self.half_edges[h]).collect();
        let vertices = other.vertices.iter().map(|&v| self.vertices[v]).collect();
        Self::with_actions(&graph.half_edges(), perm, vertices)
    }

    pub fn inverse(&self, graph: &StableGraph) -> GraphAutomorphism {
        let mut perm = vec![0; self.half_edges.len()];
        for (h, &img) in self.half_edges.iter().enumerate() {
            perm[img] = h;
        }
        let mut vertices = vec![0; self.vertices.len()];
        for (v, &img) in self.vertices.iter().enumerate() {
            vertices[img] = v;
        }
        Self::with_actions(&graph.half_edges(), perm, vertices)
    }

    pub fn is_identity(&self) -> bool {
        self.half_edges.iter().enumerate().all(|(h, &i)| h == i)
    }

    pub fn order(&self) -> usize {
        let n = self.half_edges.len();
        let mut seen = vec![false; n];
        let mut order = 1;
        for h in 0..n {
            if seen[h] {
                continue;
            }
            let mut len = 0;
            let mut x = h;
            while !seen[x] {
                seen[x] = true;
                x = self.half_edges[x];
                len += 1;
            }
            order = num_integer::lcm(order, len);
        }
        let vorder = cycle_lengths(&self.vertices).into_iter().fold(1, num_integer::lcm);
        num_integer::lcm(order, vorder)
    }
}

/// Cycle lengths of a permutation given as an image table, in decreasing order.
pub(crate) fn cycle_lengths(perm: &[usize]) -> Vec<usize> {
    let mut seen = vec![false; perm.len()];
    let mut out = Vec::new();
    for s in 0..perm.len() {
        if seen[s] {
            continue;
        }
        let mut len = 0;
        let mut x = s;
        while !seen[x] {
            seen[x] = true;
            x = perm[x];
            len += 1;
        }
        out.push(len);
    }
    out.sort_unstable_by(|a, b| b.cmp(a));
    out
}

/// Automorphism group as an explicit element list; the identity comes first.
#[derive(Clone, Debug)]
pub struct AutGroup {
    elements: Vec<GraphAutomorphism>,
}

impl AutGroup {
    pub fn order(&self) -> usize {
        self.elements.len()
    }

    pub fn elements(&self) -> &[GraphAutomorphism] {
        &self.elements
    }

    pub fn iter(&self) -> std::slice::Iter<'_, GraphAutomorphism> {
        self.elements.iter()
    }

    /// Subgroup mapping `sub` to itself.
    pub fn stabilizer(&self, sub: &SpanningSubgraph) -> AutGroup {
        AutGroup { elements: self.elements.iter().filter(|a| a.preserves(sub)).cloned().collect() }
    }

    /// Smallest mask in the orbit of `mask`.
    pub fn orbit_min(&self, mask: EdgeMask) -> EdgeMask {
        self.elements.iter().map(|a| a.map_mask(mask)).min().unwrap_or(mask)
    }
}

/// All automorphisms of `graph`, restricted to those preserving `sub` if given.
pub fn automorphism_group(graph: &StableGraph, sub: Option<&SpanningSubgraph>) -> AutGroup {
    let he = graph.half_edges();
    let mut elements = Vec::new();
    for vperm in vertex_permutations(graph) {
        for perm in half_edge_lifts(graph, &he, &vperm) {
            let a = GraphAutomorphism::with_actions(&he, perm, vperm.clone());
            if sub.is_none_or(|s| a.preserves(s)) {
                elements.push(a);
            }
        }
    }
    // Identity first, then a fixed order.
    elements.sort_by(|a, b| (!a.is_identity(), &a.half_edges).cmp(&(!b.is_identity(), &b.half_edges)));
    AutGroup { elements }
}

fn edge_multiplicity(graph: &StableGraph, a: usize, b: usize) -> usize {
    let key = (a.min(b), a.max(b));
    graph.edges.iter().filter(|&&e| e == key).count()
}

/// Vertex permutations preserving genus, leg colors and edge multiplicities.
fn vertex_permutations(graph: &StableGraph) -> Vec<Vec<usize>> {
    let n = graph.num_vertices();
    let mut out = Vec::new();
    let mut current = Vec::with_capacity(n);
    let mut used = vec![false; n];
    fn rec(
        graph: &StableGraph,
        current: &mut Vec<usize>,
        used: &mut [bool],
        out: &mut Vec<Vec<usize>>,
    ) {
        let v = current.len();
        if v == graph.num_vertices() {
            out.push(current.clone());
            return;
        }
        for w in 0..graph.num_vertices() {
            if used[w] || graph.genera[v] != graph.genera[w] || graph.legs[v] != graph.legs[w] {
                continue;
            }
            if graph.valence(v) != graph.valence(w) {
                continue;
            }
            current.push(w);
            let ok = (0..=v).all(|u| edge_multiplicity(graph, u, v) == edge_multiplicity(graph, current[u], w));
            if ok {
                used[w] = true;
                rec(graph, current, used, out);
                used[w] = false;
            }
            current.pop();
        }
    }
    rec(graph, &mut current, &mut used, &mut out);
    out
}

fn permutations(n: usize) -> Vec<Vec<usize>> {
    let mut p: Vec<usize> = (0..n).collect();
    let mut out = vec![p.clone()];
    while super::next_permutation(&mut p) {
        out.push(p.clone());
    }
    out
}

/// All half-edge permutations lying over a fixed vertex permutation.
fn half_edge_lifts(graph: &StableGraph, he: &HalfEdges, vperm: &[usize]) -> Vec<Vec<usize>> {
    // Each factor lists alternative partial assignments (h -> h').
    let mut factors: Vec<Vec<Vec<(usize, usize)>>> = Vec::new();

    let legs_at = |v: usize, c| -> Vec<usize> {
        (0..he.num_legs).filter(|&h| he.vertex_of[h] == v && he.leg_color[h] == Some(c)).collect()
    };
    for v in 0..graph.num_vertices() {
        let mut colors = graph.legs[v].clone();
        colors.dedup();
        for c in colors {
            let src = legs_at(v, c);
            let dst = legs_at(vperm[v], c);
            let alts = permutations(src.len())
                .into_iter()
                .map(|p| src.iter().zip(p).map(|(&h, i)| (h, dst[i])).collect())
                .collect();
            factors.push(alts);
        }
    }

    let mut classes: Vec<(usize, usize)> = graph.edges.clone();
    classes.dedup();
    for (a, b) in classes {
        let src: Vec<usize> = (0..graph.num_edges()).filter(|&e| graph.edges[e] == (a, b)).collect();
        let (ta, tb) = (vperm[a], vperm[b]);
        let target = (ta.min(tb), ta.max(tb));
        let dst: Vec<usize> = (0..graph.num_edges()).filter(|&e| graph.edges[e] == target).collect();
        let is_loop = a == b;
        let swapped = ta > tb;
        let orientations: Vec<u64> = if is_loop { (0..1u64 << src.len()).collect() } else { vec![0] };
        let mut alts = Vec::new();
        for p in permutations(src.len()) {
            for &bits in &orientations {
                let mut assign = Vec::with_capacity(2 * src.len());
                for (i, &e) in src.iter().enumerate() {
                    let f = dst[p[i]];
                    let flip = if is_loop { bits >> i & 1 == 1 } else { swapped };
                    let (h0, h1) = (he.num_legs + 2 * e, he.num_legs + 2 * e + 1);
                    let (g0, g1) = (he.num_legs + 2 * f, he.num_legs + 2 * f + 1);
                    if flip {
                        assign.push((h0, g1));
                        assign.push((h1, g0));
                    } else {
                        assign.push((h0, g0));
                        assign.push((h1, g1));
                    }
                }
                alts.push(assign);
            }
        }
        factors.push(alts);
    }

    let mut out = vec![vec![usize::MAX; he.len()]];
    for alts in factors {
        let mut next = Vec::with_capacity(out.len() * alts.len());
        for partial in &out {
            for alt in &alts {
                let mut p = partial.clone();
                for &(h, g) in alt {
                    p[h] = g;
                }
                next.push(p);
            }
        }
        out = next;
    }
    out
}

#[cfg(test)]
mod tests {
    use super::super::fixtures::*;
    use super::*;
    use crate::graphs::SpanningSubgraph;

    /// Brute force: every permutation of half-edges, filtered by the
    /// automorphism conditions.
    fn brute_force_order(graph: &StableGraph) -> usize {
        let n = graph.half_edges().len();
        permutations(n)
            .into_iter()
            .filter(|p| GraphAutomorphism::from_half_edges(graph, p.clone()).is_some())
            .count()
    }

    #[test]
    fn orders_match_brute_force() {
        assert_eq!(automorphism_group(&theta(), None).order(), 12);
        assert_eq!(brute_force_order(&theta()), 12);
        let full = SpanningSubgraph::full(&theta());
        assert_eq!(automorphism_group(&theta(), Some(&full)).order(), 12);

        assert_eq!(automorphism_group(&loop_graph(), None).order(), 2);
        assert_eq!(brute_force_order(&loop_graph()), 2);

        assert_eq!(automorphism_group(&banana(1, 2), None).order(), 2);
        assert_eq!(brute_force_order(&banana(1, 2)), 2);
        assert_eq!(automorphism_group(&banana(1, 1), None).order(), 4);
        assert_eq!(brute_force_order(&banana(1, 1)), 4);
    }

    #[test]
    fn closed_under_composition_and_inverse() {
        for g in [theta(), loop_graph(), banana(1, 1)] {
            let group = automorphism_group(&g, None);
            assert!(group.elements()[0].is_identity());
            let set: std::collections::HashSet<_> = group.iter().cloned().collect();
            for a in group.iter() {
                assert!(set.contains(&a.inverse(&g)));
                for b in group.iter() {
                    assert!(set.contains(&a.compose(b, &g)));
                }
            }
        }
    }

    #[test]
    fn subgraph_filter() {
        let t = theta();
        let sub = SpanningSubgraph::new(&t, &[0, 1]).unwrap();
        let group = automorphism_group(&t, Some(&sub));
        // Vertex swap times permutations of the two kept edges.
        assert_eq!(group.order(), 4);
        assert!(group.iter().all(|a| a.preserves(&sub)));
    }
}
