//! Automorphism-equivariant bijections between Picard torsors of different
//! degrees, and the stability assignments they feed.

mod stability;

use num_integer::Integer;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graphs::{cut_graph, AutGroup, Color, GraphJson, SpanningSubgraph, StableGraph};
use crate::picard::{Multidegree, PicClass, PicardGroup};

pub use stability::{canonical_stability, StabilityAssignment, StabilityEntry};

/// The degrees `d` with `gcd(d - g + 1, 2g - 2, n_1, ..., n_p) = 1`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DegreeWindow {
    pub g: u32,
    pub colors: Vec<usize>,
    pub modulus: i64,
}

impl DegreeWindow {
    pub fn new(g: u32, colors: &[usize]) -> Self {
        let modulus = colors.iter().fold(2 * g as i64 - 2, |m, &n| m.gcd(&(n as i64)));
        DegreeWindow { g, colors: colors.to_vec(), modulus }
    }

    /// `d' = d - g + 1`.
    pub fn shifted(&self, d: i64) -> i64 {
        d - self.g as i64 + 1
    }

    pub fn contains(&self, d: i64) -> bool {
        self.shifted(d).gcd(&self.modulus) == 1
    }

    pub fn degrees(&self, range: std::ops::RangeInclusive<i64>) -> Vec<i64> {
        range.filter(|&d| self.contains(d)).collect()
    }

    fn check(&self, d: i64) -> Result<()> {
        if self.contains(d) {
            Ok(())
        } else {
            Err(Error::InadmissibleDegree { g: self.g, colors: self.colors.clone(), d })
        }
    }
}

/// `gcd(g - 1 + d, 2g - 2, n_1, ..., n_p) = 1`.
pub fn degree_admissible(g: u32, colors: &[usize], d: i64) -> bool {
    let m = colors.iter().fold(2 * g as i64 - 2, |m, &n| m.gcd(&(n as i64)));
    (g as i64 - 1 + d).gcd(&m) == 1
}

/// `(2g(v) - 2 + val(v))_v`, with legs not counted in the valence.
pub fn canonical_multidegree(graph: &StableGraph) -> Multidegree {
    Multidegree((0..graph.num_vertices()).map(|v| 2 * graph.vertex_genus(v) as i64 - 2 + graph.valence(v) as i64).collect())
}

/// Number of legs of color `k` at each vertex.
pub fn leg_multidegree(graph: &StableGraph, k: Color) -> Result<Multidegree> {
    let m = Multidegree(graph.legs().iter().map(|l| l.iter().filter(|&&c| c == k).count() as i64).collect());
    if m.total() == 0 {
        return Err(Error::ColorAbsent(k));
    }
    Ok(m)
}

pub(crate) fn is_prime(n: i64) -> bool {
    if n < 2 {
        return false;
    }
    let mut p = 2;
    while p * p <= n {
        if n % p == 0 {
            return false;
        }
        p += 1;
    }
    true
}

/// Smallest odd prime `a ≡ residue (mod modulus)` with `a > bound`.
pub fn select_prime(residue: i64, modulus: i64, bound: u64) -> Result<i64> {
    let r = residue.rem_euclid(modulus);
    if r.gcd(&modulus) != 1 {
        return Err(Error::NotCoprime { residue, modulus });
    }
    let mut a = bound as i64 + 1;
    a += (r - a).rem_euclid(modulus);
    loop {
        if a % 2 == 1 && is_prime(a) {
            return Ok(a);
        }
        a += modulus;
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Step {
    Translate(Multidegree),
    Multiply(i64),
}

impl Step {
    pub fn apply(&self, m: &Multidegree) -> Multidegree {
        match self {
            Step::Translate(t) => m.add(t),
            Step::Multiply(a) => m.scale(*a),
        }
    }

    pub fn degree_after(&self, d: i64) -> i64 {
        match self {
            Step::Translate(t) => d + t.total(),
            Step::Multiply(a) => d * a,
        }
    }
}

/// Translation by `m` as a single step; a bijection `Pic^d → Pic^{d + |m|}`.
pub fn translate(m: Multidegree) -> Step {
    Step::Translate(m)
}

/// Componentwise multiplication by `a` as a step. Well defined on classes
/// for any `a`; bijective on torsors once `a` is prime to `|Pic^0|`.
pub fn multiply(pic: &PicardGroup, a: i64) -> Result<Step> {
    if a % 2 == 0 || !is_prime(a) || a as u64 <= pic.order() {
        return Err(Error::BadMultiplier { a, order: pic.order() });
    }
    Ok(Step::Multiply(a))
}

/// A composite of translations and multiplications `Pic^source → Pic^target`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ComposedBijection {
    pub source: i64,
    pub target: i64,
    pub steps: Vec<Step>,
}

impl ComposedBijection {
    pub fn apply_multidegree(&self, m: &Multidegree) -> Multidegree {
        self.steps.iter().fold(m.clone(), |acc, s| s.apply(&acc))
    }

    pub fn apply(&self, pic: &PicardGroup, c: &PicClass) -> PicClass {
        pic.project(&self.apply_multidegree(&pic.section(c)))
    }

    /// Images of every class of `Pic^source`, in class order.
    pub fn images(&self, pic: &PicardGroup) -> Vec<PicClass> {
        pic.classes(self.source).iter().map(|c| self.apply(pic, c)).collect()
    }

    pub fn is_bijective(&self, pic: &PicardGroup) -> bool {
        let mut images = self.images(pic);
        if images.iter().any(|c| c.degree != self.target) {
            return false;
        }
        images.sort();
        images.dedup();
        images.len() as u64 == pic.order()
    }

    /// `B(φ·c) = φ·B(c)` for one vertex permutation and every class.
    pub fn commutes_with(&self, pic: &PicardGroup, vertex_perm: &[usize]) -> bool {
        pic.classes(self.source)
            .iter()
            .all(|c| self.apply(pic, &pic.act(vertex_perm, c)) == pic.act(vertex_perm, &self.apply(pic, c)))
    }
}

/// Integer `x` with `Σ x_i g_i = target`, from successive extended gcds.
/// Zero generators get coefficient zero.
fn bezout(generators: &[i64], target: i64) -> Option<Vec<i64>> {
    let mut coeffs = vec![0i64; generators.len()];
    let mut acc = 0i64;
    for (i, &gi) in generators.iter().enumerate() {
        if gi == 0 {
            continue;
        }
        if acc == 0 {
            acc = gi.abs();
            coeffs[i] = gi.signum();
            continue;
        }
        let e = acc.extended_gcd(&gi);
        let (g, x, y) = if e.gcd < 0 { (-e.gcd, -e.x, -e.y) } else { (e.gcd, e.x, e.y) };
        for c in coeffs.iter_mut().take(i) {
            *c *= x;
        }
        coeffs[i] = y;
        acc = g;
    }
    if acc == 0 {
        return (target == 0).then_some(coeffs);
    }
    if target % acc != 0 {
        return None;
    }
    let k = target / acc;
    Some(coeffs.into_iter().map(|c| c * k).collect())
}

/// An `Aut(Γ)`-equivariant bijection `Pic^{d1}(Γ) → Pic^{d2}(Γ)` for the leg
/// profile of `graph`: multiply by a prime `a ≡ d2'/d1' (mod M)`, recenter by
/// `-(a-1)/2 · d_can`, then close the remaining gap (a multiple of `M`) with
/// translations by `d_can` and the leg multidegrees. Adjacent translations
/// are merged; the multiplication is skipped when `M = 1`, and `d1 = d2`
/// gives the identity.
pub fn build_bijection(graph: &StableGraph, d1: i64, d2: i64) -> Result<ComposedBijection> {
    let g = graph.genus();
    let counts = graph.color_counts();
    let window = DegreeWindow::new(g, &counts.values().copied().collect::<Vec<_>>());
    window.check(d1)?;
    window.check(d2)?;
    let pic = PicardGroup::new(&graph.multigraph())?;
    let m = window.modulus;
    let dcan = canonical_multidegree(graph);

    if d1 == d2 {
        return Ok(ComposedBijection { source: d1, target: d2, steps: Vec::new() });
    }
    let mut steps = Vec::new();
    let mut dcan_coeff = 0i64;
    let mut current = window.shifted(d1);
    if m != 1 {
        let inv = inverse_mod(window.shifted(d1), m).ok_or(Error::NotCoprime { residue: window.shifted(d1), modulus: m })?;
        let a = select_prime(window.shifted(d2) * inv, m, pic.order())?;
        steps.push(multiply(&pic, a)?);
        dcan_coeff -= (a - 1) / 2;
        current *= a;
    }
    let gap = window.shifted(d2) - current;
    let mut generators = vec![2 * g as i64 - 2];
    generators.extend(counts.values().map(|&n| n as i64));
    let coeffs = bezout(&generators, gap)
        .ok_or_else(|| Error::Invariant(format!("no Bézout solution for gap {gap} with generators {generators:?}")))?;
    dcan_coeff += coeffs[0];
    let mut shift = dcan.scale(dcan_coeff);
    for ((&k, _), &c) in counts.iter().zip(&coeffs[1..]) {
        if c != 0 {
            shift = shift.add(&leg_multidegree(graph, k)?.scale(c));
        }
    }
    if shift.0.iter().any(|&x| x != 0) || steps.is_empty() {
        steps.push(Step::Translate(shift));
    }
    let b = ComposedBijection { source: d1, target: d2, steps };
    let landed = b.steps.iter().fold(d1, |d, s| s.degree_after(d));
    if landed != d2 {
        return Err(Error::Invariant(format!("composite lands in degree {landed}, expected {d2}")));
    }
    Ok(b)
}

fn inverse_mod(x: i64, m: i64) -> Option<i64> {
    let e = x.rem_euclid(m).extended_gcd(&m);
    (e.gcd.abs() == 1).then(|| (e.x * e.gcd).rem_euclid(m))
}

/// `d ≡ ±d' (mod gcd(2g - 2, n))`.
pub fn sn_iso_criterion(g: u32, n: usize, d: i64, d_prime: i64) -> bool {
    let m = (2 * g as i64 - 2).gcd(&(n as i64));
    if m == 0 {
        return d == d_prime || d == -d_prime;
    }
    (d - d_prime) % m == 0 || (d + d_prime) % m == 0
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct EquivarianceWitness {
    pub vertex_permutation: Vec<usize>,
    pub commutes: bool,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct CombinatorialReport {
    pub graph: GraphJson,
    pub subgraph: Vec<usize>,
    pub d: i64,
    pub d_prime: i64,
    pub set_size: u64,
    pub steps: Vec<Step>,
    pub bijective: bool,
    pub equivariant: bool,
    pub witnesses: Vec<EquivarianceWitness>,
}

impl CombinatorialReport {
    pub fn holds(&self) -> bool {
        self.bijective && self.equivariant
    }
}

/// Builds the bijection `Pic^{d-e}(Γ₀') → Pic^{d'-e}(Γ₀')` on the cut graph and
/// checks it exhaustively against every element of `aut` (automorphisms of
/// the parent preserving `sub`).
pub fn verify_combinatorial_claim(sub: &SpanningSubgraph, aut: &AutGroup, d: i64, d_prime: i64) -> Result<CombinatorialReport> {
    let e = sub.excluded_edges() as i64;
    let cut = cut_graph(sub);
    let b = build_bijection(&cut, d - e, d_prime - e)?;
    let pic = PicardGroup::new(&sub.multigraph())?;
    let witnesses: Vec<_> = aut
        .iter()
        .map(|phi| EquivarianceWitness {
            vertex_permutation: phi.vertex_permutation().to_vec(),
            commutes: b.commutes_with(&pic, phi.vertex_permutation()),
        })
        .collect();
    Ok(CombinatorialReport {
        graph: sub.parent().to_json(),
        subgraph: sub.edge_indices(),
        d,
        d_prime,
        set_size: pic.order(),
        bijective: b.is_bijective(&pic),
        equivariant: witnesses.iter().all(|w| w.commutes),
        steps: b.steps,
        witnesses,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graphs::fixtures::{banana, loop_graph, theta};
    use crate::graphs::{automorphism_group, Multigraph};
    use proptest::prelude::*;

    fn smooth(g: u32) -> StableGraph {
        StableGraph::new(vec![g], vec![vec![]], vec![]).unwrap()
    }

    #[test]
    fn admissibility_examples() {
        assert!(degree_admissible(2, &[], 0));
        assert!(!degree_admissible(2, &[], 1));
        assert!(!degree_admissible(1, &[2], 2));
        assert_eq!(DegreeWindow::new(2, &[]).degrees(-3..=3), vec![-2, 0, 2]);
    }

    #[test]
    fn admissibility_matches_window() {
        for g in 0..=6u32 {
            for colors in [vec![], vec![1], vec![2], vec![4], vec![2, 3], vec![6, 4]] {
                if 2 * g as usize + colors.iter().sum::<usize>() <= 2 {
                    continue;
                }
                let w = DegreeWindow::new(g, &colors);
                for d in -20..=20 {
                    assert_eq!(degree_admissible(g, &colors, d), w.contains(d));
                }
            }
        }
    }

    #[test]
    fn canonical_and_leg_multidegrees() {
        assert_eq!(canonical_multidegree(&theta()), Multidegree(vec![1, 1]));
        assert_eq!(canonical_multidegree(&loop_graph()), Multidegree(vec![0]));
        assert_eq!(canonical_multidegree(&smooth(2)), Multidegree(vec![2]));
        assert_eq!(leg_multidegree(&loop_graph(), 1).unwrap(), Multidegree(vec![1]));
        assert_eq!(leg_multidegree(&banana(1, 1), 1).unwrap(), Multidegree(vec![1, 1]));
        assert!(matches!(leg_multidegree(&theta(), 1), Err(Error::ColorAbsent(1))));
        for graph in [theta(), loop_graph(), banana(1, 2)] {
            assert_eq!(canonical_multidegree(&graph).total(), 2 * graph.genus() as i64 - 2);
            for phi in automorphism_group(&graph, None).iter() {
                let m = canonical_multidegree(&graph);
                assert_eq!(m.permuted(phi.vertex_permutation()), m);
            }
        }
    }

    #[test]
    fn translation_examples() {
        let pic = PicardGroup::new(&theta().multigraph()).unwrap();
        let t = ComposedBijection { source: 0, target: 2, steps: vec![translate(canonical_multidegree(&theta()))] };
        assert_eq!(t.apply(&pic, &pic.project(&Multidegree(vec![0, 0]))), pic.project(&Multidegree(vec![1, 1])));
        let there_and_back = ComposedBijection {
            source: 0,
            target: 0,
            steps: vec![translate(Multidegree(vec![3, -1])), translate(Multidegree(vec![-3, 1]))],
        };
        for c in pic.classes(0) {
            assert_eq!(there_and_back.apply(&pic, &c), c);
        }
        let tree = PicardGroup::new(&Multigraph::new(2, vec![(0, 1)])).unwrap();
        let t = ComposedBijection { source: 0, target: 4, steps: vec![translate(Multidegree(vec![1, 3]))] };
        assert!(t.is_bijective(&tree));
    }

    #[test]
    fn prime_selection_examples() {
        assert_eq!(select_prime(1, 2, 3).unwrap(), 5);
        assert_eq!(select_prime(2, 3, 1).unwrap(), 5);
        assert_eq!(select_prime(1, 1, 10).unwrap(), 11);
        assert!(matches!(select_prime(2, 4, 1), Err(Error::NotCoprime { .. })));
    }

    #[test]
    fn multiplication_examples() {
        let pic = PicardGroup::new(&theta().multigraph()).unwrap();
        let five = ComposedBijection { source: 0, target: 0, steps: vec![multiply(&pic, 5).unwrap()] };
        assert!(five.is_bijective(&pic));
        for c in pic.classes(0) {
            assert_eq!(five.apply(&pic, &c), pic.scale(&c, 2));
        }
        assert!(matches!(multiply(&pic, 3), Err(Error::BadMultiplier { a: 3, order: 3 })));
        assert!(multiply(&pic, 9).is_err());
        let tree = PicardGroup::new(&Multigraph::new(2, vec![(0, 1)])).unwrap();
        let b = ComposedBijection { source: 1, target: 5, steps: vec![multiply(&tree, 5).unwrap()] };
        assert!(b.is_bijective(&tree));
    }

    #[test]
    fn build_examples() {
        let theta = theta();
        let pic = PicardGroup::new(&theta.multigraph()).unwrap();
        let b = build_bijection(&theta, 0, 2).unwrap();
        assert_eq!(b.steps, vec![Step::Multiply(5), Step::Translate(Multidegree(vec![1, 1]))]);
        assert_eq!(b.apply(&pic, &pic.project(&Multidegree(vec![0, 0]))), pic.project(&Multidegree(vec![1, 1])));
        assert!(b.is_bijective(&pic));

        let b = build_bijection(&theta, 2, 6).unwrap();
        assert_eq!(b.steps, vec![Step::Multiply(5), Step::Translate(Multidegree(vec![-2, -2]))]);
        assert!(b.is_bijective(&pic));

        assert!(matches!(build_bijection(&theta, 0, 1), Err(Error::InadmissibleDegree { d: 1, .. })));

        let tree = StableGraph::new(vec![1, 1], vec![vec![], vec![]], vec![(0, 1)]).unwrap();
        let tpic = PicardGroup::new(&tree.multigraph()).unwrap();
        for (d1, d2) in [(0, 2), (2, -4), (-2, 0)] {
            assert!(build_bijection(&tree, d1, d2).unwrap().is_bijective(&tpic));
        }
        // M = 1: a pure translation.
        let b = build_bijection(&loop_graph(), 0, 3).unwrap();
        assert_eq!(b.steps, vec![Step::Translate(Multidegree(vec![3]))]);
    }

    #[test]
    fn bezout_solutions() {
        for gens in [vec![2, 3], vec![4, 6, 9], vec![0, 5], vec![-2, 3], vec![6, 10, 15]] {
            let g = gens.iter().fold(0i64, |a, b| a.gcd(b));
            for t in -30..=30 {
                let sol = bezout(&gens, t * g).unwrap();
                assert_eq!(sol.iter().zip(&gens).map(|(a, b)| a * b).sum::<i64>(), t * g);
            }
        }
        assert!(bezout(&[4, 6], 3).is_none());
    }

    #[test]
    fn combinatorial_claim_examples() {
        let theta = theta();
        let full = automorphism_group(&theta, None);
        let two = SpanningSubgraph::new(&theta, &[0, 1]).unwrap();
        let r = verify_combinatorial_claim(&two, &full.stabilizer(&two), 0, 2).unwrap();
        assert_eq!(r.set_size, 2);
        assert!(r.holds());

        let whole = SpanningSubgraph::full(&theta);
        let r = verify_combinatorial_claim(&whole, &full, 2, 2).unwrap();
        assert!(r.holds());
        assert!(r.steps.is_empty());
        assert!(matches!(verify_combinatorial_claim(&whole, &full, 0, 1), Err(Error::InadmissibleDegree { .. })));
        let json = serde_json::to_value(&r).unwrap();
        assert!(json.get("witnesses").is_some());
    }

    #[test]
    fn iso_criterion_examples() {
        assert!(sn_iso_criterion(2, 2, 0, 2));
        assert!(sn_iso_criterion(3, 0, 1, 3));
        assert!(!sn_iso_criterion(3, 0, 1, 2));
    }

    proptest! {
        #[test]
        fn multiplications_compose(a in prop::sample::select(vec![5i64, 7, 11, 13]), b in prop::sample::select(vec![5i64, 7, 11, 13])) {
            let graph = Multigraph::new(3, vec![(0, 1), (1, 2), (0, 2), (0, 2), (1, 2)]);
            let pic = PicardGroup::new(&graph).unwrap();
            let two = ComposedBijection { source: 0, target: 0, steps: vec![Step::Multiply(a), Step::Multiply(b)] };
            for c in pic.classes(0) {
                prop_assert_eq!(two.apply(&pic, &c), pic.scale(&c, a * b));
            }
        }
    }
}
