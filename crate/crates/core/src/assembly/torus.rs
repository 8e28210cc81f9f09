use crate::error::{Error, Result};
use crate::graphs::{GraphAutomorphism, SpanningSubgraph};
use crate::motives::MotiveClass;
use crate::picard::IntMatrix;

#[cfg(feature = "mutation")]
pub mod mutation {
    use std::sync::atomic::{AtomicBool, Ordering};

    static TORUS_SIGN_FLIP: AtomicBool = AtomicBool::new(false);

    /// Negates every torus trace of positive rank while set.
    pub fn set_torus_sign_flip(on: bool) {
        TORUS_SIGN_FLIP.store(on, Ordering::SeqCst);
    }

    pub(crate) fn torus_sign_flip() -> bool {
        TORUS_SIGN_FLIP.load(Ordering::SeqCst)
    }
}

/// Fundamental cycles of `sub` with respect to a BFS spanning tree, as signed
/// edge vectors over all edges of the parent; one per chord, chords in
/// increasing edge order.
pub fn cycle_basis(sub: &SpanningSubgraph) -> (Vec<usize>, Vec<Vec<i64>>) {
    let graph = sub.parent();
    let edges = graph.edges();
    let n = graph.num_vertices();
    let ne = edges.len();
    let mut parent: Vec<Option<(usize, usize)>> = vec![None; n];
    let mut seen = vec![false; n];
    let mut tree = vec![false; ne];
    let mut queue = std::collections::VecDeque::from([0]);
    seen[0] = true;
    while let Some(x) = queue.pop_front() {
        for e in sub.edge_indices() {
            let (a, b) = edges[e];
            let y = if a == x { b } else if b == x { a } else { continue };
            if !seen[y] {
                seen[y] = true;
                tree[e] = true;
                parent[y] = Some((x, e));
                queue.push_back(y);
            }
        }
    }
    // Signed edge vector of the tree path from `x` up to the root.
    let to_root = |mut x: usize| {
        let mut path = vec![0i64; ne];
        while let Some((p, e)) = parent[x] {
            path[e] += if edges[e] == (p, x) && p != x { -1 } else { 1 };
            x = p;
        }
        path
    };
    let chords: Vec<usize> = sub.edge_indices().into_iter().filter(|&e| !tree[e]).collect();
    let cycles = chords
        .iter()
        .map(|&c| {
            let (a, b) = edges[c];
            let (pb, pa) = (to_root(b), to_root(a));
            let mut z: Vec<i64> = pb.iter().zip(&pa).map(|(x, y)| x - y).collect();
            z[c] += 1;
            z
        })
        .collect();
    (chords, cycles)
}

/// Matrix of `φ` on `H_1(Γ₀)` in the fundamental-cycle basis:
/// column `c` holds the chord coordinates of `φ(z_c)`.
pub fn homology_action(sub: &SpanningSubgraph, phi: &GraphAutomorphism) -> Result<IntMatrix> {
    if !phi.preserves(sub) {
        return Err(Error::NotPreserving);
    }
    let (chords, cycles) = cycle_basis(sub);
    let b = chords.len();
    let mut a = IntMatrix::zeros(b, b);
    for (col, z) in cycles.iter().enumerate() {
        let mut image = vec![0i64; z.len()];
        for (e, &x) in z.iter().enumerate() {
            if x != 0 {
                image[phi.edge_image(e)] += x * phi.edge_sign(e);
            }
        }
        for (row, &c) in chords.iter().enumerate() {
            a[(row, col)] = image[c];
        }
    }
    Ok(a)
}

/// `tr Λ^k(m)`: the sum of principal `k × k` minors.
pub fn exterior_trace(m: &IntMatrix, k: usize) -> i64 {
    let n = m.rows();
    if k == 0 {
        return 1;
    }
    let mut total = 0;
    for mask in 0u32..1 << n {
        if mask.count_ones() as usize != k {
            continue;
        }
        let idx: Vec<usize> = (0..n).filter(|i| mask >> i & 1 == 1).collect();
        let rows: Vec<Vec<i64>> = idx.iter().map(|&i| idx.iter().map(|&j| m[(i, j)]).collect()).collect();
        total += IntMatrix::from_rows(&rows).det();
    }
    total
}

/// `Σ_j (-1)^{b-j} tr Λ^{b-j}(A^{-1}) L^j` for the torus `Hom(H_1(Γ₀), G_m)`.
pub fn torus_trace(sub: &SpanningSubgraph, phi: &GraphAutomorphism) -> Result<MotiveClass> {
    let a = homology_action(sub, phi)?;
    let b = a.rows();
    let mut inv = IntMatrix::identity(b);
    for _ in 1..phi.order() {
        inv = &inv * &a;
    }
    if &inv * &a != IntMatrix::identity(b) {
        return Err(Error::Invariant("automorphism acts on homology with the wrong order".into()));
    }
    let coeffs: Vec<i64> = (0..=b)
        .map(|j| {
            let sign = if (b - j) % 2 == 0 { 1 } else { -1 };
            sign * exterior_trace(&inv, b - j)
        })
        .collect();
    let trace = MotiveClass::l_polynomial(&coeffs);
    #[cfg(feature = "mutation")]
    if b > 0 && mutation::torus_sign_flip() {
        return Ok(-&trace);
    }
    Ok(trace)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graphs::fixtures::{loop_graph, theta};
    use crate::graphs::{automorphism_group, StableGraph};

    #[test]
    fn rank_zero_and_one() {
        let g = loop_graph();
        let aut = automorphism_group(&g, None);
        let empty = SpanningSubgraph::new(&g, &[]).unwrap();
        let full = SpanningSubgraph::full(&g);
        let l = MotiveClass::l();
        for phi in aut.iter() {
            assert_eq!(torus_trace(&empty, phi).unwrap(), MotiveClass::one());
        }
        let traces: Vec<_> = aut.iter().map(|phi| torus_trace(&full, phi).unwrap()).collect();
        assert_eq!(traces, vec![&l - &MotiveClass::one(), &l + &MotiveClass::one()]);
    }

    #[test]
    fn homology_is_a_representation() {
        let graphs = [
            theta(),
            StableGraph::new(vec![0, 0, 0], vec![vec![], vec![], vec![]], vec![(0, 1), (1, 2), (0, 2), (0, 0), (1, 2)]).unwrap(),
        ];
        for g in graphs {
            let full = SpanningSubgraph::full(&g);
            let aut = automorphism_group(&g, None);
            for x in aut.iter() {
                for y in aut.iter() {
                    let xy = x.compose(y, &g);
                    let lhs = homology_action(&full, &xy).unwrap();
                    let rhs = &homology_action(&full, x).unwrap() * &homology_action(&full, y).unwrap();
                    assert_eq!(lhs, rhs);
                }
            }
            // Average of the torus traces is the class of the quotient: integral.
            let total = aut.iter().fold(MotiveClass::zero(), |acc, phi| &acc + &torus_trace(&full, phi).unwrap());
            assert!(total.div_exact(aut.order() as i64).is_ok());
        }
    }

    #[test]
    fn theta_torus() {
        // Identity on a rank-2 torus: (L - 1)^2.
        let g = theta();
        let full = SpanningSubgraph::full(&g);
        let id = automorphism_group(&g, None).elements()[0].clone();
        assert_eq!(torus_trace(&full, &id).unwrap(), MotiveClass::l_polynomial(&[1, -2, 1]));
        assert!(matches!(torus_trace(&SpanningSubgraph::new(&g, &[0, 1]).unwrap(), &non_preserving(&g)), Err(Error::NotPreserving)));
    }

    fn non_preserving(g: &StableGraph) -> GraphAutomorphism {
        let sub = SpanningSubgraph::new(g, &[0, 1]).unwrap();
        automorphism_group(g, None).iter().find(|a| !a.preserves(&sub)).unwrap().clone()
    }

    #[test]
    fn exterior_traces() {
        let m = IntMatrix::from_rows(&[vec![0, 1], vec![1, 0]]);
        assert_eq!((0..=2).map(|k| exterior_trace(&m, k)).collect::<Vec<_>>(), vec![1, 0, -1]);
    }
}
