use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Sub};

use serde::{Deserialize, Serialize};

/// Integer polynomial in `u, v`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct EPolynomial {
    coeffs: BTreeMap<(u32, u32), i64>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct EPolyTerm {
    pub u: u32,
    pub v: u32,
    pub c: i64,
}

impl Serialize for EPolynomial {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let terms: Vec<_> = self.terms().map(|(u, v, c)| EPolyTerm { u, v, c }).collect();
        terms.serialize(s)
    }
}

impl<'de> Deserialize<'de> for EPolynomial {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let mut out = EPolynomial::zero();
        for t in Vec::<EPolyTerm>::deserialize(d)? {
            out.add_term(t.u, t.v, t.c);
        }
        Ok(out)
    }
}

impl EPolynomial {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn one() -> Self {
        Self::monomial(0, 0, 1)
    }

    pub fn monomial(i: u32, j: u32, c: i64) -> Self {
        let mut out = Self::zero();
        out.add_term(i, j, c);
        out
    }

    pub fn add_term(&mut self, i: u32, j: u32, c: i64) {
        if c == 0 {
            return;
        }
        let e = self.coeffs.entry((i, j)).or_insert(0);
        *e += c;
        if *e == 0 {
            self.coeffs.remove(&(i, j));
        }
    }

    pub fn coefficient(&self, i: u32, j: u32) -> i64 {
        self.coeffs.get(&(i, j)).copied().unwrap_or(0)
    }

    /// `(u-exponent, v-exponent, coefficient)` in increasing exponent order.
    pub fn terms(&self) -> impl Iterator<Item = (u32, u32, i64)> + '_ {
        self.coeffs.iter().map(|(&(i, j), &c)| (i, j, c))
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Total degree, or `None` for the zero polynomial.
    pub fn degree(&self) -> Option<u32> {
        self.coeffs.keys().map(|&(i, j)| i + j).max()
    }

    /// `E(u, v) = (uv)^dim E(1/u, 1/v)`.
    pub fn is_palindromic(&self, dim: u32) -> bool {
        self.terms().all(|(i, j, c)| i <= dim && j <= dim && self.coefficient(dim - i, dim - j) == c)
    }

    /// Coefficients of `q = uv` if only diagonal terms occur.
    pub fn as_q_polynomial(&self) -> Option<Vec<i64>> {
        let mut out = Vec::new();
        for (i, j, c) in self.terms() {
            if i != j {
                return None;
            }
            if out.len() <= i as usize {
                out.resize(i as usize + 1, 0);
            }
            out[i as usize] = c;
        }
        Some(out)
    }

    /// Value at `u = v = 1` (the ordinary Euler characteristic).
    pub fn euler_characteristic(&self) -> i64 {
        self.coeffs.values().sum()
    }

    /// `1 + 2q + q^2` when the polynomial is in `q = uv`, the `u, v` form otherwise.
    pub fn to_q_string(&self) -> String {
        let Some(q) = self.as_q_polynomial() else {
            return self.to_string();
        };
        let terms: Vec<_> = q
            .iter()
            .enumerate()
            .filter(|(_, &c)| c != 0)
            .map(|(i, &c)| {
                let var = match i {
                    0 => String::new(),
                    1 => "q".to_string(),
                    _ => format!("q^{i}"),
                };
                (c, var)
            })
            .collect();
        join_terms(&terms)
    }
}

fn join_terms(terms: &[(i64, String)]) -> String {
    if terms.is_empty() {
        return "0".to_string();
    }
    let mut s = String::new();
    for (k, (c, var)) in terms.iter().enumerate() {
        if k == 0 {
            if *c < 0 {
                s.push('-');
            }
        } else {
            s.push_str(if *c < 0 { " - " } else { " + " });
        }
        let a = c.abs();
        if var.is_empty() {
            s.push_str(&a.to_string());
        } else {
            if a != 1 {
                s.push_str(&a.to_string());
            }
            s.push_str(var);
        }
    }
    s
}

fn power(var: char, e: u32) -> String {
    match e {
        0 => String::new(),
        1 => var.to_string(),
        _ => format!("{var}^{e}"),
    }
}

impl fmt::Display for EPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut keys: Vec<_> = self.coeffs.keys().copied().collect();
        keys.sort_by_key(|&(i, j)| (i + j, i));
        let terms: Vec<_> = keys.iter().map(|&(i, j)| (self.coefficient(i, j), power('u', i) + &power('v', j))).collect();
        write!(f, "{}", join_terms(&terms))
    }
}

impl Add for &EPolynomial {
    type Output = EPolynomial;
    fn add(self, rhs: &EPolynomial) -> EPolynomial {
        let mut out = self.clone();
        for (i, j, c) in rhs.terms() {
            out.add_term(i, j, c);
        }
        out
    }
}

impl Sub for &EPolynomial {
    type Output = EPolynomial;
    fn sub(self, rhs: &EPolynomial) -> EPolynomial {
        let mut out = self.clone();
        for (i, j, c) in rhs.terms() {
            out.add_term(i, j, -c);
        }
        out
    }
}

impl Mul for &EPolynomial {
    type Output = EPolynomial;
    fn mul(self, rhs: &EPolynomial) -> EPolynomial {
        let mut out = EPolynomial::zero();
        for (i, j, c) in self.terms() {
            for (k, l, d) in rhs.terms() {
                out.add_term(i + k, j + l, c * d);
            }
        }
        out
    }
}
