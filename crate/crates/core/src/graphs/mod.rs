//! Stable graphs: the dual graphs of stable marked curves.
//!
//! A [`StableGraph`] stores per-vertex genera, per-vertex leg colors and an
//! edge list in which loops `(v, v)` and parallel edges are ordinary entries.
//! The half-edge picture (an involution on half-edges, legs as its
//! unpaired points) is derived on demand by [`StableGraph::half_edges`] and is
//! what automorphisms act on.
//!
//! Leg colors cover both fully labeled markings (all colors distinct) and
//! markings that are only distinguished up to a Young subgroup `S_n1 x ... x S_np`
//! (colors repeated).

mod automorphism;
mod enumerate;

use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub use automorphism::{automorphism_group, AutGroup, GraphAutomorphism};
pub use enumerate::{enumerate_multigraphs, enumerate_stable_graphs, stable_pairs, StablePair};

/// Leg color. Legs of equal color are indistinguishable.
pub type Color = u32;

/// Bit set of edge indices.
pub type EdgeMask = u64;

/// Undirected multigraph on vertices `0..num_vertices`; loops are `(v, v)`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Multigraph {
    pub num_vertices: usize,
    pub edges: Vec<(usize, usize)>,
}

impl Multigraph {
    pub fn new(num_vertices: usize, edges: Vec<(usize, usize)>) -> Self {
        let edges = edges.into_iter().map(|(a, b)| (a.min(b), a.max(b))).collect();
        Multigraph { num_vertices, edges }
    }

    pub fn is_connected(&self) -> bool {
        connected(self.num_vertices, self.edges.iter().copied())
    }

    /// First Betti number `|E| - |V| + 1` (for a connected graph).
    pub fn betti(&self) -> i64 {
        self.edges.len() as i64 - self.num_vertices as i64 + 1
    }

    /// Non-loop edge ends at each vertex.
    pub fn out_degrees(&self) -> Vec<usize> {
        let mut deg = vec![0; self.num_vertices];
        for &(a, b) in &self.edges {
            if a != b {
                deg[a] += 1;
                deg[b] += 1;
            }
        }
        deg
    }

    /// Canonical relabeling: isomorphic multigraphs give equal results.
    pub fn canonical(&self) -> Multigraph {
        let labels = vec![(); self.num_vertices];
        let order = canonical_order(&labels, &self.edges);
        Multigraph { num_vertices: self.num_vertices, edges: relabel_edges(&self.edges, &order) }
    }
}

pub(crate) fn connected(n: usize, edges: impl Iterator<Item = (usize, usize)>) -> bool {
    if n == 0 {
        return false;
    }
    let mut parent: Vec<usize> = (0..n).collect();
    fn find(p: &mut [usize], mut x: usize) -> usize {
        while p[x] != x {
            p[x] = p[p[x]];
            x = p[x];
        }
        x
    }
    let mut components = n;
    for (a, b) in edges {
        let (ra, rb) = (find(&mut parent, a), find(&mut parent, b));
        if ra != rb {
            parent[ra] = rb;
            components -= 1;
        }
    }
    components == 1
}

/// Derived half-edge structure of a [`StableGraph`].
///
/// Half-edges `0..num_legs` are the legs, listed vertex by vertex in stored
/// color order; edge `e` owns half-edges `num_legs + 2e` (at its first end)
/// and `num_legs + 2e + 1` (at its second end).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HalfEdges {
    pub vertex_of: Vec<usize>,
    pub pairing: Vec<Option<usize>>,
    pub leg_color: Vec<Option<Color>>,
    pub num_legs: usize,
}

impl HalfEdges {
    pub fn len(&self) -> usize {
        self.vertex_of.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vertex_of.is_empty()
    }

    pub fn edge_of(&self, h: usize) -> Option<usize> {
        (h >= self.num_legs).then(|| (h - self.num_legs) / 2)
    }

    /// Half-edges incident to `v`, in index order.
    pub fn at_vertex(&self, v: usize) -> Vec<usize> {
        (0..self.len()).filter(|&h| self.vertex_of[h] == v).collect()
    }
}

/// Dual graph of a stable curve with colored legs.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct StableGraph {
    genera: Vec<u32>,
    legs: Vec<Vec<Color>>,
    edges: Vec<(usize, usize)>,
}

impl StableGraph {
    /// Builds and validates a graph. Leg lists are sorted and edge endpoints
    /// normalized to `(min, max)`; the vertex order is kept.
    pub fn new(genera: Vec<u32>, legs: Vec<Vec<Color>>, edges: Vec<(usize, usize)>) -> Result<Self> {
        let g = Self::new_unchecked(genera, legs, edges)?;
        if !g.is_connected() {
            return Err(Error::Disconnected);
        }
        for v in 0..g.num_vertices() {
            if g.stability(v) <= 0 {
                return Err(Error::InvalidGraph(format!("vertex {v} is unstable")));
            }
        }
        Ok(g)
    }

    fn new_unchecked(genera: Vec<u32>, mut legs: Vec<Vec<Color>>, edges: Vec<(usize, usize)>) -> Result<Self> {
        let nv = genera.len();
        if nv == 0 {
            return Err(Error::InvalidGraph("no vertices".into()));
        }
        if legs.len() != nv {
            return Err(Error::InvalidGraph(format!("{} leg lists for {nv} vertices", legs.len())));
        }
        if edges.len() > 64 {
            return Err(Error::InvalidGraph("more than 64 edges".into()));
        }
        for &(a, b) in &edges {
            if a >= nv || b >= nv {
                return Err(Error::InvalidGraph(format!("edge ({a},{b}) out of range")));
            }
        }
        for l in &mut legs {
            l.sort_unstable();
        }
        let edges = edges.into_iter().map(|(a, b)| (a.min(b), a.max(b))).collect();
        Ok(StableGraph { genera, legs, edges })
    }

    pub fn num_vertices(&self) -> usize {
        self.genera.len()
    }

    pub fn num_edges(&self) -> usize {
        self.edges.len()
    }

    pub fn num_legs(&self) -> usize {
        self.legs.iter().map(Vec::len).sum()
    }

    pub fn genera(&self) -> &[u32] {
        &self.genera
    }

    pub fn vertex_genus(&self, v: usize) -> u32 {
        self.genera[v]
    }

    pub fn legs(&self) -> &[Vec<Color>] {
        &self.legs
    }

    pub fn legs_at(&self, v: usize) -> &[Color] {
        &self.legs[v]
    }

    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    pub fn multigraph(&self) -> Multigraph {
        Multigraph { num_vertices: self.num_vertices(), edges: self.edges.clone() }
    }

    pub fn is_connected(&self) -> bool {
        connected(self.num_vertices(), self.edges.iter().copied())
    }

    pub fn betti(&self) -> i64 {
        self.edges.len() as i64 - self.num_vertices() as i64 + 1
    }

    /// Arithmetic genus `sum g(v) + b_1`.
    pub fn genus(&self) -> u32 {
        (self.genera.iter().map(|&g| g as i64).sum::<i64>() + self.betti()) as u32
    }

    /// All half-edges at `v`: legs plus edge ends (a loop counts twice).
    pub fn degree(&self, v: usize) -> usize {
        self.legs[v].len() + self.valence(v)
    }

    /// Non-leg half-edges at `v`.
    pub fn valence(&self, v: usize) -> usize {
        self.edges.iter().map(|&(a, b)| (a == v) as usize + (b == v) as usize).sum()
    }

    /// `2g(v) - 2 + deg(v)`.
    pub fn stability(&self, v: usize) -> i64 {
        2 * self.genera[v] as i64 - 2 + self.degree(v) as i64
    }

    /// Leg count per color, keyed by color.
    pub fn color_counts(&self) -> BTreeMap<Color, usize> {
        let mut counts = BTreeMap::new();
        for &c in self.legs.iter().flatten() {
            *counts.entry(c).or_insert(0) += 1;
        }
        counts
    }

    /// Multiplicities `(n_1, ..., n_p)` of the colors present, in color order.
    pub fn color_profile(&self) -> Vec<usize> {
        self.color_counts().into_values().collect()
    }

    pub fn half_edges(&self) -> HalfEdges {
        let num_legs = self.num_legs();
        let total = num_legs + 2 * self.edges.len();
        let mut vertex_of = Vec::with_capacity(total);
        let mut pairing = vec![None; total];
        let mut leg_color = vec![None; total];
        for (v, legs) in self.legs.iter().enumerate() {
            for &c in legs {
                leg_color[vertex_of.len()] = Some(c);
                vertex_of.push(v);
            }
        }
        for &(a, b) in &self.edges {
            let h = vertex_of.len();
            vertex_of.push(a);
            vertex_of.push(b);
            pairing[h] = Some(h + 1);
            pairing[h + 1] = Some(h);
        }
        HalfEdges { vertex_of, pairing, leg_color, num_legs }
    }

    /// Isomorphism-invariant canonical form together with the map
    /// `old vertex -> new vertex`.
    pub fn canonical_with_map(&self) -> (StableGraph, Vec<usize>) {
        let nv = self.num_vertices();
        let base: Vec<_> = (0..nv)
            .map(|v| {
                let loops = self.edges.iter().filter(|&&(a, b)| a == v && b == v).count();
                (self.genera[v], self.legs[v].clone(), self.degree(v), loops)
            })
            .collect();
        // One round of refinement by neighbour labels.
        let labels: Vec<_> = (0..nv)
            .map(|v| {
                let mut nbrs: Vec<_> = self
                    .edges
                    .iter()
                    .filter_map(|&(a, b)| match (a == v, b == v) {
                        (true, false) => Some(&base[b]),
                        (false, true) => Some(&base[a]),
                        _ => None,
                    })
                    .collect();
                nbrs.sort();
                (base[v].clone(), nbrs)
            })
            .collect();
        let order = canonical_order(&labels, &self.edges);
        let mut old_to_new = vec![0; nv];
        for (new, &old) in order.iter().enumerate() {
            old_to_new[old] = new;
        }
        let g = StableGraph {
            genera: order.iter().map(|&o| self.genera[o]).collect(),
            legs: order.iter().map(|&o| self.legs[o].clone()).collect(),
            edges: relabel_edges(&self.edges, &order),
        };
        (g, old_to_new)
    }

    pub fn canonical(&self) -> StableGraph {
        self.canonical_with_map().0
    }

    pub fn is_isomorphic(&self, other: &StableGraph) -> bool {
        self.canonical() == other.canonical()
    }

    /// Replaces every leg color by `f(color)`; used to merge colors.
    pub fn recolor(&self, f: impl Fn(Color) -> Color) -> StableGraph {
        let legs = self
            .legs
            .iter()
            .map(|l| {
                let mut l: Vec<_> = l.iter().map(|&c| f(c)).collect();
                l.sort_unstable();
                l
            })
            .collect();
        StableGraph { genera: self.genera.clone(), legs, edges: self.edges.clone() }
    }

    pub fn to_json(&self) -> GraphJson {
        GraphJson {
            vertices: (0..self.num_vertices())
                .map(|v| VertexJson { genus: self.genera[v], legs: self.legs[v].clone() })
                .collect(),
            edges: self.edges.iter().map(|&(a, b)| [a, b]).collect(),
        }
    }

    pub fn from_json(json: &GraphJson) -> Result<Self> {
        StableGraph::new(
            json.vertices.iter().map(|v| v.genus).collect(),
            json.vertices.iter().map(|v| v.legs.clone()).collect(),
            json.edges.iter().map(|e| (e[0], e[1])).collect(),
        )
    }
}

impl fmt::Display for StableGraph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for v in 0..self.num_vertices() {
            if v > 0 {
                write!(f, " ")?;
            }
            write!(f, "g{}", self.genera[v])?;
            if !self.legs[v].is_empty() {
                let legs: Vec<_> = self.legs[v].iter().map(|c| c.to_string()).collect();
                write!(f, "({})", legs.join(","))?;
            }
        }
        write!(f, " |")?;
        for &(a, b) in &self.edges {
            write!(f, " {a}-{b}")?;
        }
        write!(f, "]")
    }
}

/// Interchange format: `{"vertices":[{"genus":g,"legs":[c,...]}], "edges":[[i,j],...]}`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GraphJson {
    pub vertices: Vec<VertexJson>,
    pub edges: Vec<[usize; 2]>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct VertexJson {
    pub genus: u32,
    #[serde(default)]
    pub legs: Vec<Color>,
}

/// Connected subgraph of a stable graph containing every vertex.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct SpanningSubgraph {
    parent: StableGraph,
    mask: EdgeMask,
}

impl SpanningSubgraph {
    pub fn new(parent: &StableGraph, edges: &[usize]) -> Result<Self> {
        let mut mask = 0;
        for &e in edges {
            if e >= parent.num_edges() {
                return Err(Error::InvalidGraph(format!("edge {e} out of range")));
            }
            mask |= 1 << e;
        }
        Self::from_mask(parent, mask)
    }

    pub fn from_mask(parent: &StableGraph, mask: EdgeMask) -> Result<Self> {
        let sub = SpanningSubgraph { parent: parent.clone(), mask };
        if !sub.multigraph().is_connected() {
            return Err(Error::InvalidGraph("spanning subgraph is disconnected".into()));
        }
        Ok(sub)
    }

    /// The whole graph as its own subgraph.
    pub fn full(parent: &StableGraph) -> Self {
        let mask = if parent.num_edges() == 64 { u64::MAX } else { (1u64 << parent.num_edges()) - 1 };
        SpanningSubgraph { parent: parent.clone(), mask }
    }

    pub fn parent(&self) -> &StableGraph {
        &self.parent
    }

    pub fn mask(&self) -> EdgeMask {
        self.mask
    }

    pub fn contains(&self, e: usize) -> bool {
        self.mask >> e & 1 == 1
    }

    pub fn edge_indices(&self) -> Vec<usize> {
        (0..self.parent.num_edges()).filter(|&e| self.contains(e)).collect()
    }

    /// The subgraph as a multigraph on all vertices of the parent.
    pub fn multigraph(&self) -> Multigraph {
        Multigraph {
            num_vertices: self.parent.num_vertices(),
            edges: self.edge_indices().into_iter().map(|e| self.parent.edges[e]).collect(),
        }
    }

    pub fn betti(&self) -> i64 {
        self.mask.count_ones() as i64 - self.parent.num_vertices() as i64 + 1
    }

    /// Number of parent edges outside the subgraph.
    pub fn excluded_edges(&self) -> usize {
        self.parent.num_edges() - self.mask.count_ones() as usize
    }
}

/// All edge subsets whose spanning subgraph is connected, by increasing mask.
pub fn connected_spanning_subgraphs(graph: &StableGraph) -> Vec<SpanningSubgraph> {
    let ne = graph.num_edges();
    let nv = graph.num_vertices();
    (0..1u64 << ne)
        .filter(|&mask| connected(nv, (0..ne).filter(|e| mask >> e & 1 == 1).map(|e| graph.edges[e])))
        .map(|mask| SpanningSubgraph { parent: graph.clone(), mask })
        .collect()
}

/// Cuts every edge of the parent outside `sub`, leaving two legs of the
/// fresh color `max(color) + 1` per cut edge. Vertex indices are unchanged.
pub fn cut_graph(sub: &SpanningSubgraph) -> StableGraph {
    let parent = &sub.parent;
    let fresh = cut_color(parent);
    let mut legs = parent.legs.clone();
    let mut edges = Vec::new();
    for (e, &(a, b)) in parent.edges.iter().enumerate() {
        if sub.contains(e) {
            edges.push((a, b));
        } else {
            legs[a].push(fresh);
            legs[b].push(fresh);
        }
    }
    StableGraph::new_unchecked(parent.genera.clone(), legs, edges).expect("cutting keeps the vertex set")
}

/// Color given to the legs created by [`cut_graph`].
pub fn cut_color(parent: &StableGraph) -> Color {
    parent.legs.iter().flatten().max().map_or(1, |&c| c + 1)
}

fn relabel_edges(edges: &[(usize, usize)], new_to_old: &[usize]) -> Vec<(usize, usize)> {
    let mut old_to_new = vec![0; new_to_old.len()];
    for (new, &old) in new_to_old.iter().enumerate() {
        old_to_new[old] = new;
    }
    let mut out: Vec<_> = edges
        .iter()
        .map(|&(a, b)| {
            let (x, y) = (old_to_new[a], old_to_new[b]);
            (x.min(y), x.max(y))
        })
        .collect();
    out.sort_unstable();
    out
}

/// Vertex order (new -> old) minimizing the relabeled edge list among all
/// orders that sort vertices by `labels`.
fn canonical_order<L: Ord>(labels: &[L], edges: &[(usize, usize)]) -> Vec<usize> {
    let n = labels.len();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| labels[a].cmp(&labels[b]));
    let mut groups = Vec::new();
    let mut start = 0;
    for i in 1..=n {
        if i == n || labels[order[i]] != labels[order[start]] {
            groups.push((start, i));
            start = i;
        }
    }
    let mut best_order = order.clone();
    let mut best = relabel_edges(edges, &order);
    // Odometer over permutations inside each label class.
    'outer: loop {
        let mut gi = 0;
        loop {
            if gi == groups.len() {
                break 'outer;
            }
            let (s, e) = groups[gi];
            if next_permutation(&mut order[s..e]) {
                break;
            }
            gi += 1;
        }
        let cand = relabel_edges(edges, &order);
        if cand < best {
            best = cand;
            best_order.clone_from(&order);
        }
    }
    best_order
}

/// Advances to the next lexicographic permutation; on the last one, resets
/// to the first and returns false.
pub(crate) fn next_permutation<T: Ord>(xs: &mut [T]) -> bool {
    if xs.len() < 2 {
        return false;
    }
    let mut i = xs.len() - 1;
    while i > 0 && xs[i - 1] >= xs[i] {
        i -= 1;
    }
    if i == 0 {
        xs.reverse();
        return false;
    }
    let mut j = xs.len() - 1;
    while xs[j] <= xs[i - 1] {
        j -= 1;
    }
    xs.swap(i - 1, j);
    xs[i..].reverse();
    true
}
