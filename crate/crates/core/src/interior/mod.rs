//! Equivariant classes of the vertex moduli `J_{g,n}`: genus 0 by twisted
//! point counts on the projective line, genus 1 by configuration spaces over
//! `M_{1,1}`, higher genus from plugin tables.

mod poly;

use std::collections::{BTreeMap, HashMap};
use std::path::Path;
use std::sync::{Arc, RwLock};

use serde::{Deserialize, Serialize};

use crate::equivariant::{EquivariantClass, Partition};
use crate::error::{Error, Result};
use crate::motives::MotiveClass;

/// `Σ_μ z_μ^{-1} Π_i ψ^{μ_i}(x) p_μ`, the class of `X^n` with permuted factors.
pub fn power_class(x: &MotiveClass, n: usize) -> EquivariantClass {
    EquivariantClass::from_fn(n, |mu| mu.parts().iter().fold(MotiveClass::one(), |acc, &k| &acc * &x.adams(k)))
}

/// A permutation of `0..n` with the given cycle type.
fn permutation_of_type(mu: &Partition) -> Vec<usize> {
    let mut perm = Vec::with_capacity(mu.size());
    let mut start = 0;
    for &k in mu.parts() {
        let k = k as usize;
        for i in 0..k {
            perm.push(start + (i + 1) % k);
        }
        start += k;
    }
    perm
}

/// Set partitions of `0..n` as block labels (restricted growth strings).
fn set_partitions(n: usize, f: &mut dyn FnMut(&[usize], usize)) {
    fn rec(i: usize, n: usize, blocks: usize, labels: &mut Vec<usize>, f: &mut dyn FnMut(&[usize], usize)) {
        if i == n {
            f(labels, blocks);
            return;
        }
        for b in 0..=blocks {
            labels.push(b);
            rec(i + 1, n, blocks.max(b + 1), labels, f);
            labels.pop();
        }
    }
    rec(0, n, 0, &mut Vec::with_capacity(n), f);
}

/// Class of the ordered configuration space `F(X, n)`, by removing from `X^n`
/// the strata where points collide. A stratum survives in the trace of `σ`
/// only if its set partition is `σ`-stable, and then contributes the
/// configuration class of its blocks at the induced block permutation.
pub fn configuration_class(x: &MotiveClass, n: usize) -> EquivariantClass {
    let mut table: Vec<EquivariantClass> = Vec::with_capacity(n + 1);
    for m in 0..=n {
        let power = power_class(x, m);
        let class = EquivariantClass::from_fn(m, |mu| {
            let sigma = permutation_of_type(mu);
            let mut acc = power.character_at(mu);
            set_partitions(m, &mut |labels, blocks| {
                if blocks == m {
                    return;
                }
                let mut induced = vec![usize::MAX; blocks];
                for i in 0..m {
                    let (b, c) = (labels[i], labels[sigma[i]]);
                    if induced[b] == usize::MAX {
                        induced[b] = c;
                    } else if induced[b] != c {
                        return;
                    }
                }
                acc = &acc - &table[blocks].character_at(&Partition::of_permutation(&induced));
            });
            acc
        });
        table.push(class);
    }
    table.pop().expect("table has n + 1 entries")
}

/// `M_{0,n}` for `n ≥ 3`: the character at `μ` is the number of
/// `Frobenius∘σ`-fixed configurations on the projective line divided by the
/// order of `PGL_2`.
pub fn genus0_class(n: usize) -> Result<EquivariantClass> {
    if n < 3 {
        return Err(Error::UnstableType { g: 0, n });
    }
    let chars = Partition::all(n)
        .into_iter()
        .map(|mu| Ok((mu.clone(), MotiveClass::l_polynomial(&twisted_genus0_count(&mu)?))))
        .collect::<Result<Vec<_>>>()?;
    EquivariantClass::from_characters(n, chars)
}

/// `T_μ(q) = Π_k Π_{j < m_k} (b_k(q) - jk) / (q^3 - q)` as coefficients in `q`.
pub fn twisted_genus0_count(mu: &Partition) -> Result<Vec<i64>> {
    let mut num = vec![1i64];
    for (k, m) in mu.multiplicities() {
        let b = points_of_exact_degree(k);
        for j in 0..m {
            let mut factor = b.clone();
            factor[0] -= (j * k) as i64;
            num = poly::mul(&num, &factor);
        }
    }
    poly::div_exact(&num, &[0, -1, 0, 1]).ok_or_else(|| Error::InexactDivision(format!("twisted count for {mu} by q^3 - q")))
}

/// `b_k(q) = Σ_{d | k} μ(d) (q^{k/d} + 1)`, the points of `P^1(F_{q^k})` of exact degree `k`.
fn points_of_exact_degree(k: u32) -> Vec<i64> {
    let mut out = vec![0i64; k as usize + 1];
    for d in 1..=k {
        if k.is_multiple_of(d) {
            let m = mobius(d);
            out[(k / d) as usize] += m;
            out[0] += m;
        }
    }
    out
}

fn mobius(mut n: u32) -> i64 {
    let mut result = 1;
    let mut p = 2;
    while p * p <= n {
        if n.is_multiple_of(p) {
            n /= p;
            if n.is_multiple_of(p) {
                return 0;
            }
            result = -result;
        }
        p += 1;
    }
    if n > 1 {
        result = -result;
    }
    result
}

/// `J_{1,n}`: the map to `M_{1,1}` has fiber `F(E, n)`, whose class is the
/// configuration class of `1 - V_1 + L`; integrate each character.
pub fn genus1_class(n: usize) -> Result<EquivariantClass> {
    if n == 0 {
        return Err(Error::UnstableType { g: 1, n });
    }
    let fiber = &(&MotiveClass::one() - &MotiveClass::v(1)) + &MotiveClass::l();
    Ok(configuration_class(&fiber, n).map(MotiveClass::integrate_m11))
}

/// Plugin table: character values of `J_{g,n}` keyed by cycle type.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct PluginTable {
    pub g: u32,
    pub n: usize,
    /// Keys are cycle types written `"[2,1,1]"` (brackets optional).
    pub class: BTreeMap<String, MotiveClass>,
}

pub fn parse_partition(s: &str) -> Result<Partition> {
    let t = s.trim().trim_start_matches('[').trim_end_matches(']').trim();
    if t.is_empty() {
        return Ok(Partition::new(vec![]));
    }
    let parts = t
        .split(',')
        .map(|p| p.trim().parse::<u32>().map_err(|_| Error::Plugin(format!("bad partition key {s:?}"))))
        .collect::<Result<Vec<_>>>()?;
    if parts.contains(&0) || parts.windows(2).any(|w| w[0] < w[1]) {
        return Err(Error::Plugin(format!("partition key {s:?} must list positive parts in decreasing order")));
    }
    Ok(Partition::new(parts))
}

impl PluginTable {
    pub fn to_class(&self) -> Result<EquivariantClass> {
        let mut chars = Vec::new();
        for (k, x) in &self.class {
            let mu = parse_partition(k)?;
            if mu.size() != self.n {
                return Err(Error::Plugin(format!("cycle type {k} does not have size {}", self.n)));
            }
            chars.push((mu, x.clone()));
        }
        let class = EquivariantClass::from_characters(self.n, chars)?;
        class
            .check_integral()
            .map_err(|e| Error::Plugin(format!("(g={}, n={}) is not a virtual representation: {e}", self.g, self.n)))?;
        Ok(class)
    }
}

/// Interior classes with memoization; shareable across threads.
#[derive(Debug, Default)]
pub struct InteriorProvider {
    cache: RwLock<HashMap<(u32, usize), Arc<EquivariantClass>>>,
    plugins: HashMap<(u32, usize), Arc<EquivariantClass>>,
}

impl InteriorProvider {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn add_table(&mut self, table: &PluginTable) -> Result<()> {
        if table.g < 2 {
            return Err(Error::Plugin(format!("genus {} is computed internally", table.g)));
        }
        let class = table.to_class()?;
        self.plugins.insert((table.g, table.n), Arc::new(class));
        Ok(())
    }

    /// Loads a JSON table, or an array of tables.
    pub fn load_plugin(&mut self, path: &Path) -> Result<()> {
        let text = std::fs::read_to_string(path)?;
        let value: serde_json::Value = serde_json::from_str(&text)?;
        let tables: Vec<PluginTable> = if value.is_array() {
            serde_json::from_value(value)?
        } else {
            vec![serde_json::from_value(value)?]
        };
        for t in &tables {
            self.add_table(t)?;
        }
        Ok(())
    }

    pub fn has(&self, g: u32, n: usize) -> bool {
        g <= 1 || self.plugins.contains_key(&(g, n))
    }

    pub fn get(&self, g: u32, n: usize) -> Result<Arc<EquivariantClass>> {
        if let Some(c) = self.plugins.get(&(g, n)) {
            return Ok(c.clone());
        }
        if let Some(c) = self.cache.read().expect("interior cache poisoned").get(&(g, n)) {
            return Ok(c.clone());
        }
        let class = Arc::new(interior_class(g, n)?);
        let mut cache = self.cache.write().expect("interior cache poisoned");
        Ok(cache.entry((g, n)).or_insert(class).clone())
    }
}

/// `J_{g,n}` for `g ≤ 1`.
pub fn interior_class(g: u32, n: usize) -> Result<EquivariantClass> {
    match g {
        0 => genus0_class(n),
        1 => genus1_class(n),
        _ => Err(Error::NeedsPluginTable { g, n }),
    }
}
