//! Picard groups of graphs: `Pic(Γ) = Z^V / Twist_Γ` and its degree-`d`
//! torsors, computed through the Smith normal form of the twist lattice.

mod snf;

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graphs::Multigraph;

pub use snf::{smith_normal_form, IntMatrix, SmithForm};

/// Integer degree per vertex, in vertex order.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Multidegree(pub Vec<i64>);

impl Multidegree {
    pub fn zeros(n: usize) -> Self {
        Multidegree(vec![0; n])
    }

    pub fn total(&self) -> i64 {
        self.0.iter().sum()
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn add(&self, other: &Multidegree) -> Multidegree {
        Multidegree(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }

    pub fn sub(&self, other: &Multidegree) -> Multidegree {
        Multidegree(self.0.iter().zip(&other.0).map(|(a, b)| a - b).collect())
    }

    pub fn scale(&self, k: i64) -> Multidegree {
        Multidegree(self.0.iter().map(|a| a * k).collect())
    }

    /// Push-forward along a vertex permutation: the result at `perm[v]` is
    /// the value at `v`.
    pub fn permuted(&self, perm: &[usize]) -> Multidegree {
        let mut out = vec![0; self.0.len()];
        for (v, &x) in self.0.iter().enumerate() {
            out[perm[v]] = x;
        }
        Multidegree(out)
    }
}

impl fmt::Display for Multidegree {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<_> = self.0.iter().map(|x| x.to_string()).collect();
        write!(f, "({})", parts.join(","))
    }
}

/// Laplacian of the multigraph: twisting by `v` changes the multidegree by
/// row `v`. Loops contribute nothing.
pub fn twist_lattice(graph: &Multigraph) -> IntMatrix {
    let n = graph.num_vertices;
    let mut m = IntMatrix::zeros(n, n);
    for &(a, b) in &graph.edges {
        if a != b {
            m[(a, a)] += 1;
            m[(b, b)] += 1;
            m[(a, b)] -= 1;
            m[(b, a)] -= 1;
        }
    }
    m
}

/// Element of `Pic^d(Γ)`: torsion coordinates (reduced modulo the invariant
/// factors larger than one) and the total degree.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct PicClass {
    pub torsion: Vec<i64>,
    pub degree: i64,
}

/// `Pic(Γ)` of a connected multigraph, with coordinates
/// `Z^V / Twist ≅ (⊕ Z/d_i) ⊕ Z`.
#[derive(Clone, Debug)]
pub struct PicardGroup {
    graph: Multigraph,
    laplacian: IntMatrix,
    snf: SmithForm,
    /// `(row of the Smith form, d_i)` for every invariant factor `d_i > 1`.
    factors: Vec<(usize, i64)>,
    free_position: usize,
    /// `sum(section of e_free)`, always ±1.
    free_degree: i64,
}

impl PicardGroup {
    pub fn new(graph: &Multigraph) -> Result<Self> {
        if !graph.is_connected() {
            return Err(Error::Disconnected);
        }
        let laplacian = twist_lattice(graph);
        let snf = smith_normal_form(&laplacian);
        let inv = snf.invariant_factors();
        let factors: Vec<_> = inv.iter().enumerate().filter(|(_, &d)| d > 1).map(|(i, &d)| (i, d)).collect();
        let zeros: Vec<_> = inv.iter().enumerate().filter(|(_, &d)| d == 0).map(|(i, _)| i).collect();
        if zeros.len() != 1 {
            return Err(Error::Invariant(format!("twist lattice of a connected graph has corank {}", zeros.len())));
        }
        let free_position = zeros[0];
        let free_degree: i64 = snf.left_inverse.column(free_position).iter().sum();
        if free_degree.abs() != 1 {
            return Err(Error::Invariant("degree map is not primitive on the free part".into()));
        }
        Ok(PicardGroup { graph: graph.clone(), laplacian, snf, factors, free_position, free_degree })
    }

    pub fn graph(&self) -> &Multigraph {
        &self.graph
    }

    pub fn laplacian(&self) -> &IntMatrix {
        &self.laplacian
    }

    pub fn smith_form(&self) -> &SmithForm {
        &self.snf
    }

    /// Invariant factors of `Pic^0` larger than one.
    pub fn invariant_factors(&self) -> Vec<i64> {
        self.factors.iter().map(|&(_, d)| d).collect()
    }

    /// `|Pic^0(Γ)|`.
    pub fn order(&self) -> u64 {
        self.factors.iter().map(|&(_, d)| d as u64).product()
    }

    pub fn num_vertices(&self) -> usize {
        self.graph.num_vertices
    }

    pub fn project(&self, m: &Multidegree) -> PicClass {
        assert_eq!(m.len(), self.num_vertices(), "multidegree has the wrong length");
        let y = self.snf.left.mul_vec(&m.0);
        PicClass { torsion: self.factors.iter().map(|&(i, d)| y[i].rem_euclid(d)).collect(), degree: m.total() }
    }

    /// A multidegree in the class; `section(class(0, d))` is the basepoint of `Pic^d`.
    pub fn section(&self, c: &PicClass) -> Multidegree {
        let n = self.num_vertices();
        let mut y = vec![0; n];
        for (&(i, _), &t) in self.factors.iter().zip(&c.torsion) {
            y[i] = t;
        }
        let base = self.snf.left_inverse.mul_vec(&y);
        let shift = (c.degree - base.iter().sum::<i64>()) * self.free_degree;
        let col = self.snf.left_inverse.column(self.free_position);
        Multidegree(base.iter().zip(&col).map(|(b, c)| b + shift * c).collect())
    }

    pub fn are_equivalent(&self, a: &Multidegree, b: &Multidegree) -> bool {
        self.project(a) == self.project(b)
    }

    /// Every class of `Pic^d`, in lexicographic order of torsion coordinates.
    pub fn classes(&self, degree: i64) -> Vec<PicClass> {
        let mut out = Vec::with_capacity(self.order() as usize);
        let mut t = vec![0i64; self.factors.len()];
        loop {
            out.push(PicClass { torsion: t.clone(), degree });
            let mut k = t.len();
            loop {
                if k == 0 {
                    return out;
                }
                k -= 1;
                t[k] += 1;
                if t[k] < self.factors[k].1 {
                    break;
                }
                t[k] = 0;
            }
        }
    }

    pub fn add(&self, a: &PicClass, b: &PicClass) -> PicClass {
        PicClass {
            torsion: a.torsion.iter().zip(&b.torsion).zip(&self.factors).map(|((x, y), (_, d))| (x + y).rem_euclid(*d)).collect(),
            degree: a.degree + b.degree,
        }
    }

    pub fn scale(&self, a: &PicClass, k: i64) -> PicClass {
        PicClass {
            torsion: a.torsion.iter().zip(&self.factors).map(|(x, (_, d))| (x * k).rem_euclid(*d)).collect(),
            degree: a.degree * k,
        }
    }

    /// Action of a vertex permutation on classes.
    pub fn act(&self, vertex_perm: &[usize], c: &PicClass) -> PicClass {
        self.project(&self.section(c).permuted(vertex_perm))
    }

    /// Number of classes of `Pic^d` fixed by a vertex permutation.
    pub fn fixed_points(&self, vertex_perm: &[usize], degree: i64) -> usize {
        self.classes(degree).iter().filter(|c| &self.act(vertex_perm, c) == *c).count()
    }

    /// One multidegree per class of `Pic^d`: the divisors reduced with
    /// respect to the last vertex, in lexicographic order.
    pub fn torsor_representatives(&self, degree: i64) -> Vec<Multidegree> {
        let n = self.num_vertices();
        let q = n - 1;
        let out_deg = self.graph.out_degrees();
        let mut reps = Vec::new();
        let mut m = vec![0i64; n];
        loop {
            m[q] = degree - m[..q].iter().sum::<i64>();
            if is_reduced(&self.graph, &m, q) {
                reps.push(Multidegree(m.clone()));
            }
            let mut k = q;
            loop {
                if k == 0 {
                    debug_assert_eq!(reps.len() as u64, self.order());
                    return reps;
                }
                k -= 1;
                m[k] += 1;
                if m[k] < out_deg[k] as i64 {
                    break;
                }
                m[k] = 0;
            }
        }
    }
}

/// Dhar's burning test for `q`-reduced divisors.
fn is_reduced(graph: &Multigraph, m: &[i64], q: usize) -> bool {
    let n = graph.num_vertices;
    if (0..n).any(|v| v != q && m[v] < 0) {
        return false;
    }
    let mut burnt = vec![false; n];
    burnt[q] = true;
    let mut changed = true;
    while changed {
        changed = false;
        for v in 0..n {
            if burnt[v] {
                continue;
            }
            let fire = graph
                .edges
                .iter()
                .filter(|&&(a, b)| a != b && ((a == v && burnt[b]) || (b == v && burnt[a])))
                .count() as i64;
            if fire > m[v] {
                burnt[v] = true;
                changed = true;
            }
        }
    }
    burnt.iter().all(|&b| b)
}
