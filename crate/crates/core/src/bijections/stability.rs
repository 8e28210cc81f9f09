use crate::error::{Error, Result};
use crate::graphs::{stable_pairs, GraphAutomorphism, StablePair};
use crate::picard::{Multidegree, PicClass, PicardGroup};

use super::degree_admissible;

#[derive(Clone, Debug)]
pub struct StabilityEntry {
    pub pair: StablePair,
    /// `d - e` for the pair.
    pub degree: i64,
    pub representatives: Vec<Multidegree>,
}

/// A choice of multidegrees per pair `(Γ, Γ₀)` for total degree `d`.
/// Only the coset-representative and isomorphism-equivariance conditions are
/// modelled.
#[derive(Clone, Debug)]
pub struct StabilityAssignment {
    pub degree: i64,
    pub entries: Vec<StabilityEntry>,
}

impl StabilityEntry {
    fn pic(&self) -> PicardGroup {
        PicardGroup::new(&self.pair.sub.multigraph()).expect("spanning subgraphs are connected")
    }

    /// One representative of each class of `Pic^{d-e}(Γ₀)`, none repeated.
    pub fn condition_i(&self) -> bool {
        let pic = self.pic();
        let mut classes: Vec<_> = self.representatives.iter().map(|m| pic.project(m)).collect();
        classes.sort();
        classes.dedup();
        classes.len() == self.representatives.len()
            && classes.len() as u64 == pic.order()
            && self.representatives.iter().all(|m| m.total() == self.degree)
    }

    /// The set is carried to itself by an automorphism of the pair.
    pub fn is_invariant_under(&self, phi: &GraphAutomorphism) -> bool {
        let mut image: Vec<_> = self.representatives.iter().map(|m| m.permuted(phi.vertex_permutation())).collect();
        let mut own = self.representatives.clone();
        image.sort();
        own.sort();
        image == own
    }

    pub fn condition_ii(&self) -> bool {
        self.pair.aut.iter().all(|phi| self.is_invariant_under(phi))
    }
}

impl StabilityAssignment {
    pub fn condition_i(&self) -> bool {
        self.entries.iter().all(StabilityEntry::condition_i)
    }

    pub fn condition_ii(&self) -> bool {
        self.entries.iter().all(StabilityEntry::condition_ii)
    }
}

/// Assigns to each pair an `Aut(Γ, Γ₀)`-stable set of representatives of
/// `Pic^{d-e}(Γ₀)`: one class per orbit gets a multidegree fixed by its
/// stabilizer, and the rest of the orbit is obtained by transport.
pub fn canonical_stability(g: u32, colors: &[usize], d: i64) -> Result<StabilityAssignment> {
    if !degree_admissible(g, colors, d) {
        return Err(Error::InadmissibleDegree { g, colors: colors.to_vec(), d });
    }
    let mut entries = Vec::new();
    for pair in stable_pairs(g, colors)? {
        let degree = d - pair.sub.excluded_edges() as i64;
        let pic = PicardGroup::new(&pair.sub.multigraph())?;
        let perms: Vec<&[usize]> = pair.aut.iter().map(|a| a.vertex_permutation()).collect();
        let mut chosen: Vec<(PicClass, Multidegree)> = Vec::new();
        for c in pic.classes(degree) {
            if chosen.iter().any(|(k, _)| *k == c) {
                continue;
            }
            let stab: Vec<&[usize]> = perms.iter().copied().filter(|p| pic.act(p, &c) == c).collect();
            let m = fixed_representative(&pic, &c, &stab)
                .ok_or_else(|| Error::Invariant(format!("no stabilizer-fixed multidegree in class {c:?}")))?;
            for p in &perms {
                let image = pic.act(p, &c);
                if !chosen.iter().any(|(k, _)| *k == image) {
                    chosen.push((image, m.permuted(p)));
                }
            }
        }
        chosen.sort();
        let representatives = chosen.into_iter().map(|(_, m)| m).collect();
        entries.push(StabilityEntry { pair, degree, representatives });
    }
    Ok(StabilityAssignment { degree: d, entries })
}

/// A multidegree in `class` constant on the orbits of `stab`, searching boxes
/// of growing radius.
fn fixed_representative(pic: &PicardGroup, class: &PicClass, stab: &[&[usize]]) -> Option<Multidegree> {
    let n = pic.num_vertices();
    let mut orbit_of = vec![usize::MAX; n];
    let mut orbits: Vec<Vec<usize>> = Vec::new();
    for v in 0..n {
        if orbit_of[v] != usize::MAX {
            continue;
        }
        let mut orbit = vec![v];
        let mut i = 0;
        while i < orbit.len() {
            for p in stab {
                let w = p[orbit[i]];
                if !orbit.contains(&w) {
                    orbit.push(w);
                }
            }
            i += 1;
        }
        for &w in &orbit {
            orbit_of[w] = orbits.len();
        }
        orbits.push(orbit);
    }
    let k = orbits.len();
    let last = orbits[k - 1].len() as i64;
    let limit = 4 * (pic.graph().edges.len() as i64 + class.degree.abs() + 2);
    for r in 0..=limit {
        let mut vals = vec![-r; k - 1];
        loop {
            let partial: i64 = vals.iter().zip(&orbits).map(|(x, o)| x * o.len() as i64).sum();
            let rest = class.degree - partial;
            if rest % last == 0 && (rest / last).abs() <= r {
                let mut m = vec![0; n];
                for (v, slot) in m.iter_mut().enumerate() {
                    let o = orbit_of[v];
                    *slot = if o == k - 1 { rest / last } else { vals[o] };
                }
                let m = Multidegree(m);
                if &pic.project(&m) == class {
                    return Some(m);
                }
            }
            if !advance(&mut vals, r) {
                break;
            }
        }
    }
    None
}

fn advance(vals: &mut [i64], r: i64) -> bool {
    for j in (0..vals.len()).rev() {
        vals[j] += 1;
        if vals[j] <= r {
            return true;
        }
        vals[j] = -r;
    }
    false
}
