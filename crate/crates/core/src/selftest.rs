//! Acceptance checks with pinned budgets. Each check compares the engine
//! against an oracle that does not share its code path (brute force,
//! hand-derived constants, or a second algorithm) and reports one line.

use std::fmt;
use std::time::{Duration, Instant};

use num_rational::Ratio;

use crate::assembly::{chi_compactified, chi_m0n_bar, orbifold_euler, verify_independence, wood_rhs};
use crate::bijections::{build_bijection, verify_combinatorial_claim, DegreeWindow};
use crate::equivariant::Partition;
use crate::error::{Error, Result};
use crate::graphs::{automorphism_group, connected, enumerate_multigraphs, enumerate_stable_graphs, stable_pairs, Multigraph};
use crate::interior::{configuration_class, genus0_class, genus1_class, InteriorProvider};
use crate::motives::{EPolynomial, MotiveClass};
use crate::picard::PicardGroup;

pub const KIRCHHOFF_MAX_EDGES: usize = 5;
pub const MULTIPLICATION_DEGREES: (i64, i64) = (-6, 6);
pub const MULTIPLICATION_MAX_EDGES: usize = 3;
pub const CLAIM_DEGREES: (i64, i64) = (-4, 4);
pub const INDEPENDENCE_DEGREES: (i64, i64) = (0, 4);
pub const TYPE_ONE_ONE_DEGREES: (i64, i64) = (0, 5);
pub const CONFIGURATION_MAX_N: usize = 6;
pub const GENUS0_MAX_N: usize = 8;
pub const DETERMINISM_THREADS: [usize; 3] = [1, 1, 4];

/// Wall-clock budget per criterion; exceeding it fails the criterion.
pub fn budget(id: u8) -> Duration {
    Duration::from_secs(match id {
        1 => 10,
        2 => 60,
        3 => 120,
        4 => 30,
        5 => 300,
        6 => 60,
        7 => 60,
        8 => 30,
        9 => 300,
        _ => 0,
    })
}

pub fn name(id: u8) -> &'static str {
    match id {
        1 => "kirchhoff",
        2 => "equivariant-multiplication",
        3 => "torsor-bijections",
        4 => "type-1-1-e-polynomial",
        5 => "degree-independence",
        6 => "orbifold-euler",
        7 => "interior-oracles",
        8 => "genus-0-boundary",
        9 => "determinism",
        _ => "unknown",
    }
}

pub const ALL: [u8; 9] = [1, 2, 3, 4, 5, 6, 7, 8, 9];

#[derive(Clone, Debug)]
pub struct Outcome {
    pub id: u8,
    pub pass: bool,
    pub detail: String,
    pub elapsed: Duration,
}

impl fmt::Display for Outcome {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "criterion {} {} [{}] {} ({:.2}s, budget {}s)",
            self.id,
            name(self.id),
            if self.pass { "PASS" } else { "FAIL" },
            self.detail,
            self.elapsed.as_secs_f64(),
            budget(self.id).as_secs()
        )
    }
}

type Check = Result<std::result::Result<String, String>>;

fn verdict(ok: bool, pass: String, fail: impl FnOnce() -> String) -> std::result::Result<String, String> {
    if ok {
        Ok(pass)
    } else {
        Err(fail())
    }
}

/// Runs one criterion. Engine errors count as failures and are named in the detail.
pub fn run(id: u8, provider: &InteriorProvider) -> Outcome {
    let start = Instant::now();
    let result = match id {
        1 => kirchhoff(),
        2 => multiplication(),
        3 => torsor_bijections(),
        4 => type_one_one(provider),
        5 => degree_independence(provider),
        6 => orbifold(),
        7 => interior_oracles(),
        8 => genus_zero_boundary(provider),
        9 => determinism(provider),
        _ => Err(Error::Invariant(format!("no criterion {id}"))),
    };
    let elapsed = start.elapsed();
    let (mut pass, mut detail) = match result {
        Ok(Ok(d)) => (true, d),
        Ok(Err(d)) => (false, d),
        Err(e) => (false, format!("error: {e}")),
    };
    if elapsed > budget(id) {
        pass = false;
        detail = format!("{detail}; over budget");
    }
    Outcome { id, pass, detail, elapsed }
}

pub fn run_all(provider: &InteriorProvider) -> Vec<Outcome> {
    ALL.iter().map(|&id| run(id, provider)).collect()
}

fn spanning_tree_count(g: &Multigraph) -> u64 {
    let k = g.num_vertices - 1;
    let ne = g.edges.len();
    (0..1u64 << ne)
        .filter(|m| m.count_ones() as usize == k)
        .filter(|m| connected(g.num_vertices, (0..ne).filter(|e| m >> e & 1 == 1).map(|e| g.edges[e])))
        .count() as u64
}

fn kirchhoff() -> Check {
    let graphs = enumerate_multigraphs(KIRCHHOFF_MAX_EDGES);
    for g in &graphs {
        let order = PicardGroup::new(g)?.order();
        let trees = spanning_tree_count(g);
        if order != trees {
            return Ok(Err(format!("|Pic^0| = {order} but {trees} spanning trees for {g:?}")));
        }
    }
    Ok(Ok(format!("{} multigraphs with at most {KIRCHHOFF_MAX_EDGES} edges", graphs.len())))
}

fn colorings(n: usize) -> Vec<Vec<usize>> {
    let mut out = vec![vec![1; n]];
    if n >= 2 {
        out.push(vec![n]);
    }
    if n == 3 {
        out.push(vec![2, 1]);
    }
    out
}

fn multiplication() -> Check {
    let (lo, hi) = MULTIPLICATION_DEGREES;
    let mut checks = 0u64;
    for g in 0..=2u32 {
        for n in 0..=3usize {
            if 2 * g as i64 - 2 + n as i64 <= 0 {
                continue;
            }
            for colors in colorings(n) {
                let degrees = DegreeWindow::new(g, &colors).degrees(lo..=hi);
                for graph in enumerate_stable_graphs(g, &colors)? {
                    if graph.num_edges() > MULTIPLICATION_MAX_EDGES {
                        continue;
                    }
                    let pic = PicardGroup::new(&graph.multigraph())?;
                    let aut = automorphism_group(&graph, None);
                    for &d1 in &degrees {
                        for &d2 in &degrees {
                            let b = build_bijection(&graph, d1, d2)?;
                            if !b.is_bijective(&pic) {
                                return Ok(Err(format!("{d1} -> {d2} not bijective on {graph}")));
                            }
                            if let Some(phi) = aut.iter().find(|phi| !b.commutes_with(&pic, phi.vertex_permutation())) {
                                return Ok(Err(format!("{d1} -> {d2} on {graph} fails to commute with {:?}", phi.vertex_permutation())));
                            }
                            checks += 1;
                        }
                    }
                }
            }
        }
    }
    Ok(Ok(format!("{checks} bijections checked")))
}

const CLAIM_TYPES: [(u32, &[usize]); 5] = [(1, &[1]), (1, &[1, 1]), (1, &[2]), (2, &[]), (2, &[1])];

fn torsor_bijections() -> Check {
    let (lo, hi) = CLAIM_DEGREES;
    let mut checks = 0u64;
    for (g, colors) in CLAIM_TYPES {
        let degrees = DegreeWindow::new(g, colors).degrees(lo..=hi);
        for pair in stable_pairs(g, colors)? {
            for &d in &degrees {
                for &dp in &degrees {
                    let report = verify_combinatorial_claim(&pair.sub, &pair.aut, d, dp)?;
                    if !report.holds() {
                        return Ok(Err(format!("type ({g},{colors:?}) {d} -> {dp} fails on {} with edges {:?}", pair.graph, report.subgraph)));
                    }
                    checks += 1;
                }
            }
        }
    }
    Ok(Ok(format!("{checks} pair/degree combinations checked")))
}

fn type_one_one(provider: &InteriorProvider) -> Check {
    let mut expected = EPolynomial::one();
    expected.add_term(1, 1, 2);
    expected.add_term(2, 2, 1);
    let (lo, hi) = TYPE_ONE_ONE_DEGREES;
    for d in lo..=hi {
        let e = chi_compactified(1, &[1], d, provider)?.e_polynomial()?;
        if e != expected {
            return Ok(Err(format!("d={d}: got {}", e.to_q_string())));
        }
    }
    Ok(Ok(format!("1 + 2q + q^2 for d in {lo}..={hi}")))
}

fn sane(e: &EPolynomial, dim: u32) -> bool {
    e.degree() == Some(2 * dim) && e.is_palindromic(dim) && e.terms().all(|(_, _, c)| c >= 0)
}

fn degree_independence(provider: &InteriorProvider) -> Check {
    let pool = rayon::ThreadPoolBuilder::new().num_threads(1).build().map_err(|e| Error::Invariant(e.to_string()))?;
    pool.install(|| {
        let (lo, hi) = INDEPENDENCE_DEGREES;
        let mut summary = Vec::new();
        for (labeled, merged) in [(vec![1, 1], vec![2]), (vec![1, 1, 1], vec![3])] {
            let mut underlying = None;
            for colors in [&labeled, &merged] {
                let degrees: Vec<i64> = (lo..=hi).collect();
                let report = verify_independence(1, colors, &degrees, provider)?;
                if !report.pass {
                    return Ok(Err(format!("(1,{colors:?}): {}", report.failures.join("; "))));
                }
                let d = report.degrees.iter().find(|o| o.admissible).expect("a passing report has an admissible degree").d;
                let r = chi_compactified(1, colors, d, provider)?;
                let dim = r.dimension();
                let (e, quotient) = (r.e_polynomial()?, r.quotient_motive()?.e_polynomial()?);
                if !sane(&e, dim) || !sane(&quotient, dim) {
                    return Ok(Err(format!("(1,{colors:?}): {} / {} not palindromic of degree {}", e.to_q_string(), quotient.to_q_string(), 2 * dim)));
                }
                match &underlying {
                    None => underlying = Some(r.motive()),
                    Some(m) if *m != r.motive() => return Ok(Err(format!("(1,{colors:?}) forgets to a different class"))),
                    Some(_) => {}
                }
                summary.push(format!("(1,{colors:?}) {} over {} degrees", quotient.to_q_string(), degrees.len() - report.rejected.len()));
            }
        }
        Ok(Ok(summary.join("; ")))
    })
}

fn orbifold() -> Check {
    let cases: [(u32, usize, Option<Ratio<i64>>); 5] = [
        (1, 1, Some(Ratio::new(1, 2))),
        (1, 2, Some(Ratio::from_integer(1))),
        (1, 3, None),
        (2, 0, Some(Ratio::new(1, 4))),
        (2, 1, None),
    ];
    let mut values = Vec::new();
    for (g, n, expected) in cases {
        let lhs = orbifold_euler(g, &vec![1; n])?;
        let rhs = wood_rhs(g, n)?;
        if lhs != rhs || expected.is_some_and(|x| x != lhs) {
            return Ok(Err(format!("(g,n)=({g},{n}): engine {lhs}, closed form {rhs}")));
        }
        values.push(format!("({g},{n})={lhs}"));
    }
    Ok(Ok(values.join(" ")))
}

fn falling(x: &MotiveClass, n: usize) -> MotiveClass {
    (0..n as i64).fold(MotiveClass::one(), |acc, i| &acc * &(x - &MotiveClass::int(i)))
}

fn interior_oracles() -> Check {
    let l = MotiveClass::l();
    let samples = [
        l.clone(),
        &(&MotiveClass::one() - &MotiveClass::v(1)) + &l,
        &(&l.pow(2) + &MotiveClass::cusp(12)) + &MotiveClass::int(3),
        &(&MotiveClass::v(2) * &l) - &MotiveClass::int(2),
    ];
    for x in &samples {
        for n in 0..=CONFIGURATION_MAX_N {
            if configuration_class(x, n).underlying() != falling(x, n) {
                return Ok(Err(format!("configuration class of {x} at n={n} is not the falling product")));
            }
        }
    }
    for n in 3..=GENUS0_MAX_N {
        genus0_class(n)?;
    }
    let m04 = genus0_class(4)?;
    let at = |parts: &[u32]| m04.character_at(&Partition::new(parts.to_vec()));
    if at(&[1, 1, 1, 1]) != &l - &MotiveClass::int(2) || at(&[2, 1, 1]) != l {
        return Ok(Err(format!("M_0,4 characters {} and {}", at(&[1, 1, 1, 1]), at(&[2, 1, 1]))));
    }
    let j11 = genus1_class(1)?.underlying();
    if j11 != &l.pow(2) + &l {
        return Ok(Err(format!("J_1,1 has class {j11}")));
    }
    Ok(Ok(format!("{} samples to n={CONFIGURATION_MAX_N}; genus 0 exact to n={GENUS0_MAX_N}; J_1,1 = {j11}", samples.len())))
}

fn genus_zero_boundary(provider: &InteriorProvider) -> Check {
    let expected = [1, 2, 7, 34];
    let mut seen = Vec::new();
    for (m, &x) in (3..).zip(&expected) {
        let chi = chi_compactified(0, &vec![1; m], 0, provider)?.e_polynomial()?.euler_characteristic();
        let tree = chi_m0n_bar(m)?;
        if chi != x || tree != x {
            return Ok(Err(format!("m={m}: strata sum {chi}, tree sum {tree}, expected {x}")));
        }
        seen.push(chi.to_string());
    }
    Ok(Ok(format!("chi = {}", seen.join(", "))))
}

/// Serialized `(1,(1,1,1))` result at `d = 0`.
pub fn reference_output(provider: &InteriorProvider) -> Result<Vec<u8>> {
    Ok(serde_json::to_vec(&chi_compactified(1, &[1, 1, 1], 0, provider)?.to_json()?)?)
}

fn determinism(provider: &InteriorProvider) -> Check {
    let mut outputs = Vec::new();
    for threads in DETERMINISM_THREADS {
        let pool = rayon::ThreadPoolBuilder::new().num_threads(threads).build().map_err(|e| Error::Invariant(e.to_string()))?;
        let start = Instant::now();
        let bytes = pool.install(|| reference_output(provider))?;
        outputs.push((threads, bytes, start.elapsed()));
    }
    let (_, first, single) = &outputs[0];
    if let Some((threads, _, _)) = outputs.iter().find(|(_, b, _)| b != first) {
        return Ok(Err(format!("output with {threads} threads differs")));
    }
    Ok(verdict(
        *single <= budget(9),
        format!("{} identical bytes across thread counts {DETERMINISM_THREADS:?}; single thread {:.2}s", first.len(), single.as_secs_f64()),
        || format!("single thread took {:.2}s", single.as_secs_f64()),
    ))
}
