//! Symmetric-group equivariant classes with motivic coefficients, stored as
//! class functions: the value at `μ` is `z_μ` times the `p_μ` coefficient of
//! the Frobenius characteristic.

mod partition;

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::motives::MotiveClass;

pub use partition::{binomial, factorial, irreducible_character, Partition};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EquivariantClass {
    degree: usize,
    /// Nonzero characters only.
    chars: BTreeMap<Partition, MotiveClass>,
}

impl EquivariantClass {
    pub fn zero(degree: usize) -> Self {
        EquivariantClass { degree, chars: BTreeMap::new() }
    }

    /// Builds a class from its character values; missing partitions are zero.
    pub fn from_characters(degree: usize, chars: impl IntoIterator<Item = (Partition, MotiveClass)>) -> Result<Self> {
        let mut out = Self::zero(degree);
        for (mu, x) in chars {
            if mu.size() != degree {
                return Err(Error::Invariant(format!("partition {mu} does not have size {degree}")));
            }
            out.set(mu, x);
        }
        Ok(out)
    }

    fn set(&mut self, mu: Partition, x: MotiveClass) {
        if x.is_zero() {
            self.chars.remove(&mu);
        } else {
            self.chars.insert(mu, x);
        }
    }

    /// `x · h_n`.
    pub fn trivial(degree: usize, x: &MotiveClass) -> Self {
        Self::from_fn(degree, |_| x.clone())
    }

    /// `e_n`.
    pub fn sign(degree: usize) -> Self {
        Self::from_fn(degree, |mu| MotiveClass::int(mu.sign()))
    }

    /// `x · p_μ`.
    pub fn power_sum(mu: &Partition, x: &MotiveClass) -> Self {
        let mut out = Self::zero(mu.size());
        out.set(mu.clone(), x.scale(mu.z()));
        out
    }

    pub fn from_fn(degree: usize, mut f: impl FnMut(&Partition) -> MotiveClass) -> Self {
        let mut out = Self::zero(degree);
        for mu in Partition::all(degree) {
            let x = f(&mu);
            out.set(mu, x);
        }
        out
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn character_at(&self, mu: &Partition) -> MotiveClass {
        assert_eq!(mu.size(), self.degree, "cycle type of the wrong size");
        self.chars.get(mu).cloned().unwrap_or_default()
    }

    /// The non-equivariant class (character at the identity).
    pub fn underlying(&self) -> MotiveClass {
        self.character_at(&Partition::ones(self.degree))
    }

    /// `(μ, character)` for every partition of the degree, zeros included.
    pub fn characters(&self) -> Vec<(Partition, MotiveClass)> {
        Partition::all(self.degree).into_iter().map(|mu| (mu.clone(), self.character_at(&mu))).collect()
    }

    /// `z_μ^{-1} · character` as `(numerator, z_μ)`.
    pub fn power_sum_coefficient(&self, mu: &Partition) -> (MotiveClass, i64) {
        (self.character_at(mu), mu.z())
    }

    pub fn map(&self, f: impl Fn(&MotiveClass) -> MotiveClass) -> Self {
        let mut out = Self::zero(self.degree);
        for (mu, x) in &self.chars {
            out.set(mu.clone(), f(x));
        }
        out
    }

    pub fn scale(&self, x: &MotiveClass) -> Self {
        self.map(|c| c * x)
    }

    pub fn add(&self, other: &Self) -> Self {
        assert_eq!(self.degree, other.degree);
        let mut out = self.clone();
        for (mu, x) in &other.chars {
            let sum = &out.character_at(mu) + x;
            out.set(mu.clone(), sum);
        }
        out
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.map(|x| -x))
    }

    /// Induction product (product of symmetric functions).
    pub fn product(&self, other: &Self) -> Self {
        let n = self.degree + other.degree;
        Self::from_fn(n, |mu| {
            let mut acc = MotiveClass::zero();
            for (nu, rho, count) in mu.splits(self.degree) {
                let (Some(a), Some(b)) = (self.chars.get(&nu), other.chars.get(&rho)) else {
                    continue;
                };
                acc += &(a * b).scale(count);
            }
            acc
        })
    }

    /// `p_r ∘ F`: `p_μ ↦ p_{rμ}` with `ψ^r` on coefficients. As characters,
    /// the value at `rμ` is `r^{ℓ(μ)} ψ^r(F(μ))` and zero off `r`-divisible types.
    pub fn plethysm_cycle(&self, r: u32) -> Self {
        let mut out = Self::zero(self.degree * r as usize);
        for (mu, x) in &self.chars {
            let factor = (r as i64).pow(mu.len() as u32);
            out.set(mu.scaled(r), x.adams(r).scale(factor));
        }
        out
    }

    /// Multiplicity of the trivial representation, `Σ_μ F(μ) / z_μ`.
    pub fn invariants(&self) -> Result<MotiveClass> {
        let nf = factorial(self.degree as i64);
        let mut acc = MotiveClass::zero();
        for (mu, x) in &self.chars {
            acc += &x.scale(nf / mu.z());
        }
        acc.div_exact(nf)
    }

    /// Inner product with the irreducible character `χ^λ`.
    pub fn multiplicity(&self, lambda: &Partition) -> Result<MotiveClass> {
        let nf = factorial(self.degree as i64);
        let mut acc = MotiveClass::zero();
        for (mu, x) in &self.chars {
            acc += &x.scale(irreducible_character(lambda, mu) * (nf / mu.z()));
        }
        acc.div_exact(nf)
    }

    /// Coordinates in the Schur basis, for every `λ ⊢ n`.
    pub fn schur_coordinates(&self) -> Result<Vec<(Partition, MotiveClass)>> {
        Partition::all(self.degree).into_iter().map(|l| Ok((l.clone(), self.multiplicity(&l)?))).collect()
    }

    /// Restriction to `S_{n_1} × ... × S_{n_p}`.
    pub fn restrict(&self, shape: &[usize]) -> Result<MultiClass> {
        if shape.iter().sum::<usize>() != self.degree {
            return Err(Error::Invariant(format!("shape {shape:?} does not sum to {}", self.degree)));
        }
        Ok(MultiClass::from_fn(shape, |mus| {
            let all = mus.iter().fold(Partition::new(vec![]), |acc, m| acc.union(m));
            self.character_at(&all)
        }))
    }

    /// `z_μ`-scaled values are integral by construction; checks that the class
    /// is a virtual representation with coefficients in the motive ring.
    pub fn check_integral(&self) -> Result<()> {
        for l in Partition::all(self.degree) {
            self.multiplicity(&l)?;
        }
        Ok(())
    }

    pub fn to_json(&self) -> EquivariantJson {
        EquivariantJson { degree: self.degree, characters: self.characters().into_iter().map(|(partition, class)| CharacterJson { partition, class }).collect() }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CharacterJson {
    pub partition: Partition,
    pub class: MotiveClass,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct EquivariantJson {
    pub degree: usize,
    pub characters: Vec<CharacterJson>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MultiCharacterJson {
    pub cycle_type: Vec<Partition>,
    pub class: MotiveClass,
}

/// All tuples `(μ_1, ..., μ_p)` with `μ_i ⊢ shape[i]`.
pub fn multipartitions(shape: &[usize]) -> Vec<Vec<Partition>> {
    let mut out = vec![Vec::new()];
    for &n in shape {
        let mut next = Vec::new();
        for prefix in &out {
            for mu in Partition::all(n) {
                let mut t = prefix.clone();
                t.push(mu);
                next.push(t);
            }
        }
        out = next;
    }
    out
}

/// Class function on `S_{n_1} × ... × S_{n_p}`, keyed by multipartitions.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MultiClass {
    shape: Vec<usize>,
    chars: BTreeMap<Vec<Partition>, MotiveClass>,
}

impl MultiClass {
    pub fn zero(shape: &[usize]) -> Self {
        MultiClass { shape: shape.to_vec(), chars: BTreeMap::new() }
    }

    pub fn from_fn(shape: &[usize], mut f: impl FnMut(&[Partition]) -> MotiveClass) -> Self {
        let mut out = Self::zero(shape);
        for mus in multipartitions(shape) {
            let x = f(&mus);
            out.set(mus, x);
        }
        out
    }

    pub fn set(&mut self, mus: Vec<Partition>, x: MotiveClass) {
        assert!(mus.len() == self.shape.len() && mus.iter().zip(&self.shape).all(|(m, &n)| m.size() == n), "bad multipartition");
        if x.is_zero() {
            self.chars.remove(&mus);
        } else {
            self.chars.insert(mus, x);
        }
    }

    pub fn shape(&self) -> &[usize] {
        &self.shape
    }

    pub fn character_at(&self, mus: &[Partition]) -> MotiveClass {
        self.chars.get(mus).cloned().unwrap_or_default()
    }

    pub fn underlying(&self) -> MotiveClass {
        let id: Vec<_> = self.shape.iter().map(|&n| Partition::ones(n)).collect();
        self.character_at(&id)
    }

    pub fn characters(&self) -> Vec<(Vec<Partition>, MotiveClass)> {
        multipartitions(&self.shape).into_iter().map(|m| (m.clone(), self.character_at(&m))).collect()
    }

    fn z(mus: &[Partition]) -> i64 {
        mus.iter().map(Partition::z).product()
    }

    fn order(&self) -> i64 {
        self.shape.iter().map(|&n| factorial(n as i64)).product()
    }

    /// Multiplicity of `χ^{λ_1} ⊠ ... ⊠ χ^{λ_p}`.
    pub fn multiplicity(&self, lambdas: &[Partition]) -> Result<MotiveClass> {
        let order = self.order();
        let mut acc = MotiveClass::zero();
        for (mus, x) in &self.chars {
            let chi: i64 = lambdas.iter().zip(mus).map(|(l, m)| irreducible_character(l, m)).product();
            acc += &x.scale(chi * (order / Self::z(mus)));
        }
        acc.div_exact(order)
    }

    pub fn invariants(&self) -> Result<MotiveClass> {
        let trivial: Vec<_> = self.shape.iter().map(|&n| Partition::new(if n == 0 { vec![] } else { vec![n as u32] })).collect();
        self.multiplicity(&trivial)
    }

    pub fn irreducible_coordinates(&self) -> Result<Vec<(Vec<Partition>, MotiveClass)>> {
        multipartitions(&self.shape).into_iter().map(|l| Ok((l.clone(), self.multiplicity(&l)?))).collect()
    }

    pub fn add(&self, other: &Self) -> Self {
        assert_eq!(self.shape, other.shape);
        let mut out = self.clone();
        for (mus, x) in &other.chars {
            let sum = &out.character_at(mus) + x;
            out.set(mus.clone(), sum);
        }
        out
    }

    pub fn to_json(&self) -> Vec<MultiCharacterJson> {
        self.characters().into_iter().map(|(cycle_type, class)| MultiCharacterJson { cycle_type, class }).collect()
    }

    pub fn map(&self, f: impl Fn(&MotiveClass) -> MotiveClass) -> Self {
        let mut out = Self::zero(&self.shape);
        for (mus, x) in &self.chars {
            out.set(mus.clone(), f(x));
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(parts: &[u32]) -> Partition {
        Partition::new(parts.to_vec())
    }

    fn one() -> MotiveClass {
        MotiveClass::one()
    }

    fn int(n: i64) -> MotiveClass {
        MotiveClass::int(n)
    }

    /// `e_2 = (p_1^2 - p_2) / 2`.
    fn e2() -> EquivariantClass {
        EquivariantClass::sign(2)
    }

    #[test]
    fn character_examples() {
        for n in 0..=5 {
            let h = EquivariantClass::trivial(n, &one());
            assert!(h.characters().iter().all(|(_, x)| *x == one()));
        }
        assert_eq!(e2().character_at(&p(&[1, 1])), one());
        assert_eq!(e2().character_at(&p(&[2])), int(-1));
        let reg = EquivariantClass::power_sum(&Partition::ones(4), &one());
        assert_eq!(reg.underlying(), int(24));
        assert_eq!(reg.character_at(&p(&[2, 1, 1])), MotiveClass::zero());
    }

    #[test]
    fn product_examples() {
        let h1 = EquivariantClass::trivial(1, &one());
        let prod = h1.product(&h1);
        assert_eq!(prod, EquivariantClass::trivial(2, &one()).add(&e2()));
        assert_eq!(prod, EquivariantClass::power_sum(&Partition::ones(2), &one()));
        let f = EquivariantClass::sign(3).scale(&MotiveClass::l()).add(&EquivariantClass::trivial(3, &one()));
        assert_eq!(f.product(&EquivariantClass::trivial(0, &one())), f);
        let g = e2();
        let fg = f.product(&g);
        assert_eq!(fg.underlying(), (&f.underlying() * &g.underlying()).scale(binomial(5, 2)));
        assert_eq!(fg, g.product(&f));
    }

    #[test]
    fn plethysm_examples() {
        let f = EquivariantClass::sign(3).add(&EquivariantClass::power_sum(&p(&[2, 1]), &MotiveClass::v(1)));
        assert_eq!(f.plethysm_cycle(1), f);
        let x = MotiveClass::v(1);
        let p1 = EquivariantClass::power_sum(&p(&[1]), &x);
        assert_eq!(p1.plethysm_cycle(2), EquivariantClass::power_sum(&p(&[2]), &x.adams(2)));
        let p2 = EquivariantClass::power_sum(&p(&[2]), &one());
        assert_eq!(p2.plethysm_cycle(2), EquivariantClass::power_sum(&p(&[4]), &one()));
        for r in 1..=3 {
            for s in 1..=3 {
                assert_eq!(f.plethysm_cycle(s).plethysm_cycle(r), f.plethysm_cycle(r * s));
            }
        }
        // Character rule at rμ.
        for r in 1..=3u32 {
            let g = f.plethysm_cycle(r);
            for (mu, x) in f.characters() {
                let expected = x.adams(r).scale((r as i64).pow(mu.len() as u32));
                assert_eq!(g.character_at(&mu.scaled(r)), expected);
            }
        }
    }

    #[test]
    fn invariant_examples() {
        for n in 0..=5 {
            assert_eq!(EquivariantClass::power_sum(&Partition::ones(n), &one()).invariants().unwrap(), one());
            assert_eq!(EquivariantClass::trivial(n, &one()).invariants().unwrap(), one());
        }
        assert_eq!(e2().invariants().unwrap(), MotiveClass::zero());
        let bad = EquivariantClass::from_characters(2, [(p(&[2]), one())]).unwrap();
        assert!(matches!(bad.invariants(), Err(Error::InexactDivision(_))));
    }

    /// Invariants of the permutation module on cosets of `S_a × S_b` in `S_n`
    /// restricted to `S_c × S_d`: the double-coset count.
    #[test]
    fn invariants_match_double_cosets() {
        for n in 1..=4usize {
            for a in 0..=n {
                let h = |k| EquivariantClass::trivial(k, &one());
                let module = h(a).product(&h(n - a));
                for c in 0..=n {
                    let restricted = module.restrict(&[c, n - c]).unwrap();
                    // Subsets of size a in {1..n}, up to S_c × S_{n-c}: choose i from the first block.
                    let count = (0..=a).filter(|&i| i <= c && a - i <= n - c).count() as i64;
                    assert_eq!(restricted.invariants().unwrap(), int(count));
                }
                assert_eq!(module.invariants().unwrap(), one());
            }
        }
    }

    #[test]
    fn restriction_examples() {
        let r = EquivariantClass::trivial(2, &one()).restrict(&[1, 1]).unwrap();
        assert_eq!(r.character_at(&[p(&[1]), p(&[1])]), one());
        let r = e2().restrict(&[1, 1]).unwrap();
        assert_eq!(r.underlying(), one());
        let f = EquivariantClass::sign(3);
        let r = f.restrict(&[3]).unwrap();
        for (mu, x) in f.characters() {
            assert_eq!(r.character_at(&[mu]), x);
        }
        // Standard representation of S_3 restricted to S_2 × S_1: trivial plus sign.
        let std = EquivariantClass::from_fn(3, |mu| int(irreducible_character(&p(&[2, 1]), mu)));
        let r = std.restrict(&[2, 1]).unwrap();
        assert_eq!(r.multiplicity(&[p(&[2]), p(&[1])]).unwrap(), one());
        assert_eq!(r.multiplicity(&[p(&[1, 1]), p(&[1])]).unwrap(), one());
    }

    #[test]
    fn schur_coordinates_of_regular_representation() {
        let reg = EquivariantClass::power_sum(&Partition::ones(4), &one());
        for (lambda, m) in reg.schur_coordinates().unwrap() {
            assert_eq!(m, int(irreducible_character(&lambda, &Partition::ones(4))));
        }
        assert!(reg.check_integral().is_ok());
    }
}
