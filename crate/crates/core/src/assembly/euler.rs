use num_rational::Ratio;

use crate::equivariant::factorial;
use crate::error::Result;
use crate::graphs::{enumerate_stable_graphs, stable_pairs, StableGraph};
use crate::picard::PicardGroup;

/// `χ(M_{0,m}) = (-1)^{m-3} (m-3)!`.
fn chi_m0n(m: usize) -> i64 {
    let sign = if (m - 3).is_multiple_of(2) { 1 } else { -1 };
    sign * factorial(m as i64 - 3)
}

fn genus0_vertex_product(graph: &StableGraph) -> Option<i64> {
    (0..graph.num_vertices()).map(|v| (graph.vertex_genus(v) == 0).then(|| chi_m0n(graph.degree(v)))).product()
}

/// Orbifold Euler characteristic of the compactified universal Jacobian with
/// labeled legs: only spanning trees `Γ₀` and all-rational `Γ` contribute,
/// each with weight `|Pic(Γ₀)| · Π χ(M_{0,n(v)}) / |Aut(Γ, Γ₀)|`; merged
/// colors are unmerged by the factor `Π n_k!`.
pub fn orbifold_euler(g: u32, colors: &[usize]) -> Result<Ratio<i64>> {
    let mut total = Ratio::from_integer(0);
    for pair in stable_pairs(g, colors)? {
        if pair.sub.betti() != 0 {
            continue;
        }
        let Some(vertices) = genus0_vertex_product(&pair.graph) else {
            continue;
        };
        let torsor = PicardGroup::new(&pair.sub.multigraph())?.order() as i64;
        total += Ratio::new(torsor * vertices, pair.aut.order() as i64);
    }
    let labeling: i64 = colors.iter().map(|&n| factorial(n as i64)).product();
    Ok(total * labeling)
}

/// `χ(M̄_{0,m})` as the sum over stable trees with `m` labeled legs of
/// `Π_v χ(M_{0,n(v)})`.
pub fn chi_m0n_bar(m: usize) -> Result<i64> {
    let mut total = 0;
    for tree in enumerate_stable_graphs(0, &vec![1; m])? {
        total += genus0_vertex_product(&tree).expect("genus 0 graphs have rational vertices");
    }
    Ok(total)
}

/// `χ(M̄_{0,2g+n}) / (2^g g!)`.
pub fn wood_rhs(g: u32, n: usize) -> Result<Ratio<i64>> {
    let chi = chi_m0n_bar(2 * g as usize + n)?;
    Ok(Ratio::new(chi, (1i64 << g) * factorial(g as i64)))
}
