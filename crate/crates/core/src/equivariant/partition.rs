use std::fmt;

use serde::{Deserialize, Serialize};

/// Weakly decreasing positive parts.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Partition(Vec<u32>);

impl Partition {
    pub fn new(mut parts: Vec<u32>) -> Self {
        parts.retain(|&p| p > 0);
        parts.sort_unstable_by(|a, b| b.cmp(a));
        Partition(parts)
    }

    /// `1^n`.
    pub fn ones(n: usize) -> Self {
        Partition(vec![1; n])
    }

    pub fn parts(&self) -> &[u32] {
        &self.0
    }

    pub fn size(&self) -> usize {
        self.0.iter().map(|&p| p as usize).sum()
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// `(part, multiplicity)` in increasing part order.
    pub fn multiplicities(&self) -> Vec<(u32, u32)> {
        let mut out: Vec<(u32, u32)> = Vec::new();
        for &p in self.0.iter().rev() {
            match out.last_mut() {
                Some((q, m)) if *q == p => *m += 1,
                _ => out.push((p, 1)),
            }
        }
        out
    }

    pub fn multiplicity(&self, k: u32) -> u32 {
        self.0.iter().filter(|&&p| p == k).count() as u32
    }

    /// Order of the centralizer of a permutation of this cycle type.
    pub fn z(&self) -> i64 {
        self.multiplicities().iter().map(|&(k, m)| (k as i64).pow(m) * factorial(m as i64)).product()
    }

    /// `(-1)^{n - ℓ}`.
    pub fn sign(&self) -> i64 {
        if (self.size() - self.len()).is_multiple_of(2) {
            1
        } else {
            -1
        }
    }

    /// Every part multiplied by `r`.
    pub fn scaled(&self, r: u32) -> Partition {
        Partition(self.0.iter().map(|p| p * r).collect())
    }

    /// `μ / r` if every part is divisible by `r`.
    pub fn divided(&self, r: u32) -> Option<Partition> {
        self.0.iter().all(|p| p % r == 0).then(|| Partition(self.0.iter().map(|p| p / r).collect()))
    }

    pub fn union(&self, other: &Partition) -> Partition {
        Partition::new([self.0.as_slice(), other.0.as_slice()].concat())
    }

    /// Cycle type of a permutation given as an image vector.
    pub fn of_permutation(perm: &[usize]) -> Partition {
        let mut seen = vec![false; perm.len()];
        let mut parts = Vec::new();
        for s in 0..perm.len() {
            if seen[s] {
                continue;
            }
            let mut len = 0;
            let mut x = s;
            while !seen[x] {
                seen[x] = true;
                x = perm[x];
                len += 1;
            }
            parts.push(len);
        }
        Partition::new(parts)
    }

    /// All partitions of `n`, in decreasing lexicographic order.
    pub fn all(n: usize) -> Vec<Partition> {
        fn rec(n: u32, max: u32, buf: &mut Vec<u32>, out: &mut Vec<Partition>) {
            if n == 0 {
                out.push(Partition(buf.clone()));
                return;
            }
            for p in (1..=max.min(n)).rev() {
                buf.push(p);
                rec(n - p, p, buf, out);
                buf.pop();
            }
        }
        let mut out = Vec::new();
        rec(n as u32, n as u32, &mut Vec::new(), &mut out);
        out
    }

    /// Ways to split the parts into a sub-multiset of size `k` and its
    /// complement, with the number of index choices `Π binom(m_j(μ), m_j(ν))`.
    pub fn splits(&self, k: usize) -> Vec<(Partition, Partition, i64)> {
        let mults = self.multiplicities();
        let mut out = Vec::new();
        let mut take = vec![0u32; mults.len()];
        loop {
            let size: usize = take.iter().zip(&mults).map(|(&t, &(p, _))| (t * p) as usize).sum();
            if size == k {
                let mut left = Vec::new();
                let mut right = Vec::new();
                let mut count = 1i64;
                for (&t, &(p, m)) in take.iter().zip(&mults) {
                    left.extend(std::iter::repeat_n(p, t as usize));
                    right.extend(std::iter::repeat_n(p, (m - t) as usize));
                    count *= binomial(m as i64, t as i64);
                }
                out.push((Partition::new(left), Partition::new(right), count));
            }
            let mut i = 0;
            loop {
                if i == take.len() {
                    return out;
                }
                take[i] += 1;
                if take[i] <= mults[i].1 {
                    break;
                }
                take[i] = 0;
                i += 1;
            }
        }
    }
}

impl fmt::Display for Partition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<_> = self.0.iter().map(|p| p.to_string()).collect();
        write!(f, "[{}]", parts.join(","))
    }
}

pub fn factorial(n: i64) -> i64 {
    (1..=n).product()
}

pub fn binomial(n: i64, k: i64) -> i64 {
    if k < 0 || k > n {
        return 0;
    }
    (0..k).fold(1, |acc, i| acc * (n - i) / (i + 1))
}

/// Irreducible character `χ^λ(μ)` by the Murnaghan–Nakayama rule on beta sets.
pub fn irreducible_character(lambda: &Partition, mu: &Partition) -> i64 {
    assert_eq!(lambda.size(), mu.size(), "partitions of different sizes");
    let l = lambda.len();
    let beta: Vec<i64> = lambda.parts().iter().enumerate().map(|(i, &p)| p as i64 + (l - 1 - i) as i64).collect();
    mn(beta, mu.parts())
}

fn mn(beta: Vec<i64>, mu: &[u32]) -> i64 {
    let Some((&k, rest)) = mu.split_first() else {
        return 1;
    };
    let k = k as i64;
    let mut total = 0;
    for (i, &b) in beta.iter().enumerate() {
        let t = b - k;
        if t < 0 || beta.contains(&t) {
            continue;
        }
        let between = beta.iter().filter(|&&c| c > t && c < b).count();
        let sign = if between % 2 == 0 { 1 } else { -1 };
        let mut next = beta.clone();
        next[i] = t;
        total += sign * mn(next, rest);
    }
    total
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(parts: &[u32]) -> Partition {
        Partition::new(parts.to_vec())
    }

    #[test]
    fn counts_and_centralizers() {
        let counts: Vec<_> = (0..=8).map(|n| Partition::all(n).len()).collect();
        assert_eq!(counts, vec![1, 1, 2, 3, 5, 7, 11, 15, 22]);
        for n in 1..=7 {
            let total: f64 = Partition::all(n).iter().map(|m| 1.0 / m.z() as f64).sum();
            assert!((total - 1.0).abs() < 1e-12);
        }
        assert_eq!(p(&[2, 1, 1]).z(), 4);
        assert_eq!(p(&[3]).z(), 3);
        assert_eq!(Partition::ones(4).z(), 24);
    }

    #[test]
    fn permutation_cycle_types() {
        assert_eq!(Partition::of_permutation(&[1, 0, 2]), p(&[2, 1]));
        assert_eq!(Partition::of_permutation(&[1, 2, 0, 4, 3]), p(&[3, 2]));
        assert_eq!(Partition::of_permutation(&[]), p(&[]));
    }

    #[test]
    fn splits_count_index_choices() {
        let s = p(&[2, 1, 1]).splits(2);
        assert_eq!(s, vec![(p(&[1, 1]), p(&[2]), 1), (p(&[2]), p(&[1, 1]), 1)]);
        let s = Partition::ones(4).splits(2);
        assert_eq!(s, vec![(p(&[1, 1]), p(&[1, 1]), 6)]);
    }

    #[test]
    fn character_table_orthogonality() {
        for n in 1..=8 {
            let parts = Partition::all(n);
            for a in &parts {
                assert_eq!(irreducible_character(a, &Partition::ones(n)).signum(), 1);
                for b in &parts {
                    let num: i64 = parts
                        .iter()
                        .map(|mu| irreducible_character(a, mu) * irreducible_character(b, mu) * (factorial(n as i64) / mu.z()))
                        .sum();
                    assert_eq!(num, if a == b { factorial(n as i64) } else { 0 });
                }
            }
        }
        assert_eq!(irreducible_character(&p(&[2, 1]), &p(&[3])), -1);
        assert_eq!(irreducible_character(&p(&[1, 1, 1]), &p(&[2, 1])), -1);
        assert_eq!(irreducible_character(&p(&[3, 1]), &Partition::ones(4)), 3);
    }
}
