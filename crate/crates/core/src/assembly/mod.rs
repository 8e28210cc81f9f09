//! Strata sums: per-stratum Hodge–Deligne classes of the compactified
//! universal Jacobian, their total, orbifold Euler characteristics, and
//! degree-independence checks.

mod euler;
mod torus;

use rayon::prelude::*;
use serde::Serialize;

use crate::bijections::{verify_combinatorial_claim, DegreeWindow};
use crate::equivariant::{MultiCharacterJson, MultiClass, Partition};
use crate::error::{Error, Result};
use crate::graphs::{stable_pairs, GraphAutomorphism, GraphJson, HalfEdges, StableGraph, StablePair};
use crate::interior::InteriorProvider;
use crate::motives::{EPolynomial, MotiveClass};
use crate::picard::PicardGroup;

pub use euler::{chi_m0n_bar, orbifold_euler, wood_rhs};
#[cfg(feature = "mutation")]
pub use torus::mutation;
pub use torus::{cycle_basis, exterior_trace, homology_action, torus_trace};

/// Number of classes of `Pic^degree(Γ₀)` fixed by `φ`.
pub fn pic_trace(pic: &PicardGroup, degree: i64, phi: &GraphAutomorphism) -> u64 {
    pic.fixed_points(phi.vertex_permutation(), degree) as u64
}

/// Product over vertex orbits of `φ`: an orbit of size `r` through `v`
/// contributes `ψ^r` of the interior character of `(g(v), n(v))` at the cycle
/// type of `φ^r` on the half-edges at `v`.
pub fn vertex_trace(graph: &StableGraph, phi: &GraphAutomorphism, provider: &InteriorProvider) -> Result<MotiveClass> {
    let he = graph.half_edges();
    let n = graph.num_vertices();
    let mut done = vec![false; n];
    let mut out = MotiveClass::one();
    for v in 0..n {
        if done[v] {
            continue;
        }
        let mut r = 0u32;
        let mut w = v;
        loop {
            done[w] = true;
            w = phi.vertex_image(w);
            r += 1;
            if w == v {
                break;
            }
        }
        let local = he.at_vertex(v);
        let perm: Vec<usize> = local
            .iter()
            .map(|&h| {
                let image = (0..r).fold(h, |x, _| phi.half_edge_image(x));
                local.iter().position(|&k| k == image).expect("φ^r fixes the vertex")
            })
            .collect();
        let nu = Partition::of_permutation(&perm);
        let class = provider.get(graph.vertex_genus(v), local.len())?;
        out = &out * &class.character_at(&nu).adams(r);
    }
    Ok(out)
}

/// Cycle type of `φ` on the legs of each color `1..=shape.len()`.
fn leg_cycle_type(he: &HalfEdges, phi: &GraphAutomorphism, shape: &[usize]) -> Vec<Partition> {
    (0..shape.len())
        .map(|k| {
            let color = k as u32 + 1;
            let legs: Vec<usize> = (0..he.num_legs).filter(|&h| he.leg_color[h] == Some(color)).collect();
            let perm: Vec<usize> = legs
                .iter()
                .map(|&h| legs.iter().position(|&x| x == phi.half_edge_image(h)).expect("legs keep their color"))
                .collect();
            Partition::of_permutation(&perm)
        })
        .collect()
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TraceRecord {
    pub vertex_permutation: Vec<usize>,
    pub leg_cycle_type: Vec<Partition>,
    pub torus: MotiveClass,
    pub pic: u64,
    pub vertex: MotiveClass,
}

impl TraceRecord {
    pub fn product(&self) -> MotiveClass {
        (&self.torus * &self.vertex).scale(self.pic as i64)
    }
}

#[derive(Clone, Debug)]
pub struct StratumContribution {
    pub graph: StableGraph,
    pub subgraph: Vec<usize>,
    pub excluded_edges: usize,
    pub aut_order: usize,
    pub torus_rank: i64,
    pub torsor_size: u64,
    /// Character table over the leg-permuting group; the value at the
    /// identity is the class of the labeled stratum.
    pub equivariant: MultiClass,
    pub traces: Vec<TraceRecord>,
}

impl StratumContribution {
    /// Non-equivariant class of the stratum.
    pub fn motive(&self) -> MotiveClass {
        self.equivariant.underlying()
    }

    pub fn to_json(&self) -> Result<StratumJson> {
        let motive = self.motive();
        Ok(StratumJson {
            graph: self.graph.to_json(),
            subgraph: self.subgraph.clone(),
            excluded_edges: self.excluded_edges,
            aut_order: self.aut_order,
            torus_rank: self.torus_rank,
            torsor_size: self.torsor_size,
            e_polynomial: motive.e_polynomial()?,
            motive,
            characters: self.equivariant.to_json(),
            traces: self.traces.clone(),
        })
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct StratumJson {
    pub graph: GraphJson,
    pub subgraph: Vec<usize>,
    pub excluded_edges: usize,
    pub aut_order: usize,
    pub torus_rank: i64,
    pub torsor_size: u64,
    pub motive: MotiveClass,
    pub e_polynomial: EPolynomial,
    pub characters: Vec<MultiCharacterJson>,
    pub traces: Vec<TraceRecord>,
}

/// Group average of `torus · pic · vertex` over `Aut(Γ, Γ₀)`, resolved by the
/// cycle type of the leg permutation: the character at `μ` is
/// `z_μ / |Aut| · Σ_{φ of leg type μ} trace(φ)`.
pub fn stratum_class(pair: &StablePair, d: i64, shape: &[usize], provider: &InteriorProvider) -> Result<StratumContribution> {
    let graph = &pair.graph;
    let sub = &pair.sub;
    let e = sub.excluded_edges();
    let degree = d - e as i64;
    let pic = PicardGroup::new(&sub.multigraph())?;
    let he = graph.half_edges();
    let mut traces = Vec::with_capacity(pair.aut.order());
    let mut sums: std::collections::BTreeMap<Vec<Partition>, MotiveClass> = Default::default();
    for phi in pair.aut.iter() {
        let record = TraceRecord {
            vertex_permutation: phi.vertex_permutation().to_vec(),
            leg_cycle_type: leg_cycle_type(&he, phi, shape),
            torus: torus_trace(sub, phi)?,
            pic: pic_trace(&pic, degree, phi),
            vertex: vertex_trace(graph, phi, provider)?,
        };
        *sums.entry(record.leg_cycle_type.clone()).or_default() += &record.product();
        traces.push(record);
    }
    let order = pair.aut.order() as i64;
    let mut equivariant = MultiClass::zero(shape);
    for (mus, sum) in sums {
        let z: i64 = mus.iter().map(Partition::z).product();
        let value = sum.scale(z).div_exact(order).map_err(|_| {
            Error::Invariant(format!("stratum average over {order} automorphisms is not integral for {graph} with edges {:?}", sub.edge_indices()))
        })?;
        equivariant.set(mus, value);
    }
    Ok(StratumContribution {
        graph: graph.clone(),
        subgraph: sub.edge_indices(),
        excluded_edges: e,
        aut_order: pair.aut.order(),
        torus_rank: sub.betti(),
        torsor_size: pic.order(),
        equivariant,
        traces,
    })
}

#[derive(Clone, Debug)]
pub struct ChiResult {
    pub g: u32,
    pub colors: Vec<usize>,
    pub degree: i64,
    pub strata: Vec<StratumContribution>,
    pub total: MultiClass,
}

impl ChiResult {
    /// Class of the compactified universal Jacobian with labeled legs.
    pub fn motive(&self) -> MotiveClass {
        self.total.underlying()
    }

    pub fn e_polynomial(&self) -> Result<EPolynomial> {
        self.motive().e_polynomial()
    }

    /// Class of the quotient by the leg-permuting group.
    pub fn quotient_motive(&self) -> Result<MotiveClass> {
        self.total.invariants()
    }

    /// `4g - 3 + n`.
    pub fn dimension(&self) -> u32 {
        (4 * self.g as i64 - 3 + self.colors.iter().sum::<usize>() as i64) as u32
    }

    pub fn symbols(&self) -> Vec<String> {
        let mut out: Vec<_> = self.total.characters().iter().flat_map(|(_, x)| x.symbols()).collect();
        out.sort();
        out.dedup();
        out
    }

    pub fn to_json(&self) -> Result<ChiJson> {
        let quotient = self.quotient_motive()?;
        Ok(ChiJson {
            r#type: (self.g, self.colors.clone()),
            degree: self.degree,
            e_polynomial: self.e_polynomial()?,
            motive: self.motive(),
            quotient_e_polynomial: quotient.e_polynomial()?,
            quotient_motive: quotient,
            characters: self.total.to_json(),
            irreducible: self
                .total
                .irreducible_coordinates()?
                .into_iter()
                .map(|(cycle_type, class)| MultiCharacterJson { cycle_type, class })
                .collect(),
            strata: self.strata.iter().map(StratumContribution::to_json).collect::<Result<_>>()?,
            symbols: self.symbols(),
        })
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct ChiJson {
    pub r#type: (u32, Vec<usize>),
    pub degree: i64,
    pub e_polynomial: EPolynomial,
    pub motive: MotiveClass,
    pub quotient_e_polynomial: EPolynomial,
    pub quotient_motive: MotiveClass,
    pub characters: Vec<MultiCharacterJson>,
    /// Multiplicities of the irreducible representations of the leg-permuting group.
    pub irreducible: Vec<MultiCharacterJson>,
    pub strata: Vec<StratumJson>,
    pub symbols: Vec<String>,
}

/// Sum of [`stratum_class`] over all pairs `(Γ, Γ₀)` of type `(g, colors)`.
/// Strata are evaluated in parallel on the current rayon pool and summed in
/// enumeration order.
pub fn chi_compactified(g: u32, colors: &[usize], d: i64, provider: &InteriorProvider) -> Result<ChiResult> {
    let window = DegreeWindow::new(g, colors);
    if !window.contains(d) {
        return Err(Error::InadmissibleDegree { g, colors: colors.to_vec(), d });
    }
    let pairs = stable_pairs(g, colors)?;
    for pair in &pairs {
        for v in 0..pair.graph.num_vertices() {
            let (gv, nv) = (pair.graph.vertex_genus(v), pair.graph.degree(v));
            if !provider.has(gv, nv) {
                return Err(Error::NeedsPluginTable { g: gv, n: nv });
            }
        }
    }
    let strata = pairs.par_iter().map(|p| stratum_class(p, d, colors, provider)).collect::<Result<Vec<_>>>()?;
    let total = strata.iter().fold(MultiClass::zero(colors), |acc, s| acc.add(&s.equivariant));
    total.irreducible_coordinates()?;
    Ok(ChiResult { g, colors: colors.to_vec(), degree: d, strata, total })
}

#[derive(Clone, Debug, Serialize)]
pub struct DegreeOutcome {
    pub d: i64,
    pub admissible: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub e_polynomial: Option<EPolynomial>,
}

#[derive(Clone, Debug, Serialize)]
pub struct IndependenceReport {
    pub g: u32,
    pub colors: Vec<usize>,
    pub degrees: Vec<DegreeOutcome>,
    /// Degrees that fail the gcd precondition; not counterexamples.
    pub rejected: Vec<i64>,
    pub totals_agree: bool,
    pub strata_agree: bool,
    pub claims_hold: bool,
    pub failures: Vec<String>,
    pub pass: bool,
}

/// Computes every admissible degree in the list and compares the results,
/// in total and stratum by stratum, and checks the equivariant torsor
/// bijections from the first admissible degree to each of the others.
pub fn verify_independence(g: u32, colors: &[usize], degrees: &[i64], provider: &InteriorProvider) -> Result<IndependenceReport> {
    let window = DegreeWindow::new(g, colors);
    let mut outcomes = Vec::new();
    let mut results: Vec<ChiResult> = Vec::new();
    let mut rejected = Vec::new();
    for &d in degrees {
        if !window.contains(d) {
            rejected.push(d);
            outcomes.push(DegreeOutcome { d, admissible: false, e_polynomial: None });
            continue;
        }
        let r = chi_compactified(g, colors, d, provider)?;
        outcomes.push(DegreeOutcome { d, admissible: true, e_polynomial: Some(r.e_polynomial()?) });
        results.push(r);
    }
    let mut failures = Vec::new();
    let mut totals_agree = true;
    let mut strata_agree = true;
    let mut claims_hold = true;
    if let Some((base, rest)) = results.split_first() {
        let pairs = stable_pairs(g, colors)?;
        for r in rest {
            if r.total != base.total {
                totals_agree = false;
                failures.push(format!("totals differ between d={} and d={}", base.degree, r.degree));
            }
            for (i, (a, b)) in base.strata.iter().zip(&r.strata).enumerate() {
                if a.equivariant != b.equivariant {
                    strata_agree = false;
                    failures.push(format!("stratum {i} differs between d={} and d={}", base.degree, r.degree));
                }
            }
            for (i, pair) in pairs.iter().enumerate() {
                let report = verify_combinatorial_claim(&pair.sub, &pair.aut, base.degree, r.degree)?;
                if !report.holds() {
                    claims_hold = false;
                    failures.push(format!("torsor bijection fails for pair {i} between d={} and d={}", base.degree, r.degree));
                }
            }
        }
    }
    let pass = !results.is_empty() && totals_agree && strata_agree && claims_hold;
    Ok(IndependenceReport { g, colors: colors.to_vec(), degrees: outcomes, rejected, totals_agree, strata_agree, claims_hold, failures, pass })
}
