//! Coefficient λ-ring: Tate classes `L^i`, local systems `V_k` over `M_{1,1}`,
//! cusp-form symbols `S[m]`, and Hodge–Deligne polynomials.

mod epoly;

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, AddAssign, Mul, Neg, Sub};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub use epoly::EPolynomial;

/// `ψ^adams(S[weight])`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct CuspSymbol {
    pub weight: u32,
    pub adams: u32,
}

impl fmt::Display for CuspSymbol {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.adams == 1 {
            write!(f, "S{}", self.weight)
        } else {
            write!(f, "psi{}(S{})", self.adams, self.weight)
        }
    }
}

/// `L^l · V_v · Π cusps`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct Monomial {
    pub l: u32,
    pub v: u32,
    /// Sorted.
    pub cusps: Vec<CuspSymbol>,
}

impl Monomial {
    pub fn is_absolute(&self) -> bool {
        self.v == 0
    }
}

/// Integer combination of monomials with like terms merged and zero
/// coefficients removed.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct MotiveClass {
    terms: BTreeMap<Monomial, i64>,
}

/// JSON form of one term.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TermJson {
    pub l_exp: u32,
    #[serde(default, skip_serializing_if = "is_zero_u32")]
    pub v_index: u32,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub s_weight: Vec<CuspSymbol>,
    pub coeff: i64,
}

fn is_zero_u32(x: &u32) -> bool {
    *x == 0
}

impl Serialize for MotiveClass {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let terms: Vec<_> = self
            .terms
            .iter()
            .map(|(m, &c)| TermJson { l_exp: m.l, v_index: m.v, s_weight: m.cusps.clone(), coeff: c })
            .collect();
        terms.serialize(s)
    }
}

impl<'de> Deserialize<'de> for MotiveClass {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let terms = Vec::<TermJson>::deserialize(d)?;
        let mut out = MotiveClass::zero();
        for t in terms {
            let mut cusps = t.s_weight;
            cusps.sort();
            out.add_term(Monomial { l: t.l_exp, v: t.v_index, cusps }, t.coeff);
        }
        Ok(out)
    }
}

impl MotiveClass {
    pub fn zero() -> Self {
        MotiveClass::default()
    }

    pub fn one() -> Self {
        Self::int(1)
    }

    pub fn int(n: i64) -> Self {
        Self::monomial(Monomial::default(), n)
    }

    pub fn monomial(m: Monomial, c: i64) -> Self {
        let mut out = Self::zero();
        out.add_term(m, c);
        out
    }

    /// `L^i`.
    pub fn l_pow(i: u32) -> Self {
        Self::monomial(Monomial { l: i, ..Monomial::default() }, 1)
    }

    pub fn l() -> Self {
        Self::l_pow(1)
    }

    /// `V_k`.
    pub fn v(k: u32) -> Self {
        Self::monomial(Monomial { v: k, ..Monomial::default() }, 1)
    }

    /// The symbol `S[m]`, kept opaque.
    pub fn cusp(weight: u32) -> Self {
        Self::monomial(Monomial { cusps: vec![CuspSymbol { weight, adams: 1 }], ..Monomial::default() }, 1)
    }

    /// `Σ c_i L^i`.
    pub fn l_polynomial(coeffs: &[i64]) -> Self {
        let mut out = Self::zero();
        for (i, &c) in coeffs.iter().enumerate() {
            out.add_term(Monomial { l: i as u32, ..Monomial::default() }, c);
        }
        out
    }

    pub fn add_term(&mut self, m: Monomial, c: i64) {
        if c == 0 {
            return;
        }
        let entry = self.terms.entry(m.clone()).or_insert(0);
        *entry += c;
        if *entry == 0 {
            self.terms.remove(&m);
        }
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, i64)> {
        self.terms.iter().map(|(m, &c)| (m, c))
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// No `V_k` with `k ≥ 1`.
    pub fn is_absolute(&self) -> bool {
        self.terms.keys().all(Monomial::is_absolute)
    }

    pub fn scale(&self, k: i64) -> Self {
        if k == 0 {
            return Self::zero();
        }
        MotiveClass { terms: self.terms.iter().map(|(m, &c)| (m.clone(), c * k)).collect() }
    }

    pub fn div_exact(&self, k: i64) -> Result<Self> {
        let mut out = Self::zero();
        for (m, &c) in &self.terms {
            if c % k != 0 {
                return Err(Error::InexactDivision(format!("{self} by {k}")));
            }
            out.add_term(m.clone(), c / k);
        }
        Ok(out)
    }

    pub fn pow(&self, n: u32) -> Self {
        (0..n).fold(Self::one(), |acc, _| &acc * self)
    }

    /// The integer value if the class is a constant.
    pub fn as_integer(&self) -> Option<i64> {
        match self.terms.len() {
            0 => Some(0),
            1 => self.terms.get(&Monomial::default()).copied(),
            _ => None,
        }
    }

    /// Coefficients of `Σ c_i L^i` if the class is a polynomial in `L`.
    pub fn as_l_polynomial(&self) -> Option<Vec<i64>> {
        let mut out = Vec::new();
        for (m, &c) in &self.terms {
            if m.v != 0 || !m.cusps.is_empty() {
                return None;
            }
            if out.len() <= m.l as usize {
                out.resize(m.l as usize + 1, 0);
            }
            out[m.l as usize] = c;
        }
        Some(out)
    }

    /// The Adams operation `ψ^r`.
    pub fn adams(&self, r: u32) -> Self {
        assert!(r >= 1, "Adams operations are indexed by r >= 1");
        if r == 1 {
            return self.clone();
        }
        let mut out = Self::zero();
        for (m, &c) in &self.terms {
            let mut cusps: Vec<_> = m.cusps.iter().map(|s| CuspSymbol { weight: s.weight, adams: s.adams * r }).collect();
            cusps.sort();
            let rest = Self::monomial(Monomial { l: m.l * r, v: 0, cusps }, c);
            out += &(&rest * &adams_v(m.v, r));
        }
        out
    }

    /// The class as seen over a point: each `L^i V_k` goes to `L^i` times the
    /// compactly supported Euler characteristic of `V_k` on `M_{1,1}`.
    pub fn integrate_m11(&self) -> Self {
        let mut out = Self::zero();
        for (m, &c) in &self.terms {
            let rest = Self::monomial(Monomial { l: m.l, v: 0, cusps: m.cusps.clone() }, c);
            out += &(&rest * &eichler_shimura(m.v));
        }
        out
    }

    pub fn e_polynomial(&self) -> Result<EPolynomial> {
        let mut out = EPolynomial::zero();
        for (m, &c) in &self.terms {
            if m.v != 0 {
                return Err(Error::RelativeClass);
            }
            let mut t = EPolynomial::monomial(m.l, m.l, c);
            for s in &m.cusps {
                t = &t * &cusp_e_polynomial(*s);
            }
            out = &out + &t;
        }
        Ok(out)
    }

    /// Cusp symbols that survive in the class, as `S12`, `psi2(S12)`, ...
    pub fn symbols(&self) -> Vec<String> {
        let mut out: Vec<_> = self.terms.keys().flat_map(|m| m.cusps.iter().map(|s| s.to_string())).collect();
        out.sort();
        out.dedup();
        out
    }
}

fn cusp_e_polynomial(s: CuspSymbol) -> EPolynomial {
    let d = cusp_form_dimension(s.weight) as i64;
    let w = s.adams * (s.weight - 1);
    &EPolynomial::monomial(w, 0, d) + &EPolynomial::monomial(0, w, d)
}

/// Dimension of the space of level-one cusp forms of weight `m`.
pub fn cusp_form_dimension(m: u32) -> u32 {
    if m % 2 == 1 || m < 12 {
        return 0;
    }
    let base = m / 12;
    if m % 12 == 2 {
        base - 1
    } else {
        base
    }
}

/// `e_c(M_{1,1}, V_k)`: zero for odd `k`, `L` for `k = 0`, and
/// `-S[k+2] - 1` otherwise, with `S[m] = 0` when there are no cusp forms of
/// weight `m`.
pub fn eichler_shimura(k: u32) -> MotiveClass {
    if k % 2 == 1 {
        return MotiveClass::zero();
    }
    if k == 0 {
        return MotiveClass::l();
    }
    let mut out = MotiveClass::int(-1);
    if cusp_form_dimension(k + 2) > 0 {
        out = &out - &MotiveClass::cusp(k + 2);
    }
    out
}

/// `Σ_k (-1)^k Λ^k V_1` for an elliptic curve; `1` in genus 0.
pub fn jacobian_factor(g: u32) -> Result<MotiveClass> {
    match g {
        0 => Ok(MotiveClass::one()),
        1 => Ok(&(&MotiveClass::one() - &MotiveClass::v(1)) + &MotiveClass::l()),
        _ => Err(Error::NeedsPluginTable { g, n: 0 }),
    }
}

/// Symmetric polynomial in the roots `α, β` of `V_1`, keyed by `(p, q)` for `α^p β^q`.
type RootPoly = BTreeMap<(u32, u32), i64>;

/// Rewrites a symmetric root polynomial as `Σ c L^q V_{p-q}` by peeling off
/// the term with the largest power of `α`.
fn from_roots(mut poly: RootPoly) -> MotiveClass {
    let mut out = MotiveClass::zero();
    while let Some((&(p, q), &c)) = poly.iter().max_by_key(|(&(p, q), _)| (p, q)) {
        assert!(p >= q, "root polynomial is not symmetric");
        let k = p - q;
        for j in 0..=k {
            let key = (q + k - j, q + j);
            let e = poly.entry(key).or_insert(0);
            *e -= c;
            if *e == 0 {
                poly.remove(&key);
            }
        }
        out.add_term(Monomial { l: q, v: k, cusps: Vec::new() }, c);
    }
    out
}

fn adams_v(k: u32, r: u32) -> MotiveClass {
    let poly: RootPoly = (0..=k).map(|j| ((r * (k - j), r * j), 1)).collect();
    from_roots(poly)
}

/// `V_a · V_b = Σ_{i ≤ min(a,b)} L^i V_{a+b-2i}`.
fn clebsch_gordan(a: u32, b: u32) -> impl Iterator<Item = (u32, u32)> {
    (0..=a.min(b)).map(move |i| (i, a + b - 2 * i))
}

impl Mul for &MotiveClass {
    type Output = MotiveClass;
    fn mul(self, rhs: &MotiveClass) -> MotiveClass {
        let mut out = MotiveClass::zero();
        for (x, &c) in &self.terms {
            for (y, &d) in &rhs.terms {
                let mut cusps = [x.cusps.as_slice(), y.cusps.as_slice()].concat();
                cusps.sort();
                for (i, k) in clebsch_gordan(x.v, y.v) {
                    out.add_term(Monomial { l: x.l + y.l + i, v: k, cusps: cusps.clone() }, c * d);
                }
            }
        }
        out
    }
}

impl Add for &MotiveClass {
    type Output = MotiveClass;
    fn add(self, rhs: &MotiveClass) -> MotiveClass {
        let mut out = self.clone();
        out += rhs;
        out
    }
}

impl AddAssign<&MotiveClass> for MotiveClass {
    fn add_assign(&mut self, rhs: &MotiveClass) {
        for (m, &c) in &rhs.terms {
            self.add_term(m.clone(), c);
        }
    }
}

impl Sub for &MotiveClass {
    type Output = MotiveClass;
    fn sub(self, rhs: &MotiveClass) -> MotiveClass {
        self + &(-rhs)
    }
}

impl Neg for &MotiveClass {
    type Output = MotiveClass;
    fn neg(self) -> MotiveClass {
        self.scale(-1)
    }
}

impl fmt::Display for MotiveClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (i, (m, &c)) in self.terms.iter().enumerate() {
            let mut factors = Vec::new();
            match m.l {
                0 => {}
                1 => factors.push("L".to_string()),
                l => factors.push(format!("L^{l}")),
            }
            if m.v > 0 {
                factors.push(format!("V{}", m.v));
            }
            factors.extend(m.cusps.iter().map(|s| s.to_string()));
            let sign = if c < 0 { "-" } else { "+" };
            if i == 0 {
                if c < 0 {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {sign} ")?;
            }
            let a = c.abs();
            if factors.is_empty() {
                write!(f, "{a}")?;
            } else {
                if a != 1 {
                    write!(f, "{a}*")?;
                }
                write!(f, "{}", factors.join("*"))?;
            }
        }
        Ok(())
    }
}

#[cfg(test)]
pub(crate) mod tests {
    use super::*;
    use proptest::prelude::*;

    fn l() -> MotiveClass {
        MotiveClass::l()
    }

    fn v(k: u32) -> MotiveClass {
        MotiveClass::v(k)
    }

    /// Expands a class into root polynomials (cusp-free classes only).
    fn to_roots(x: &MotiveClass) -> RootPoly {
        let mut out = RootPoly::new();
        for (m, c) in x.terms() {
            assert!(m.cusps.is_empty());
            for j in 0..=m.v {
                *out.entry((m.l + m.v - j, m.l + j)).or_insert(0) += c;
            }
        }
        out.retain(|_, c| *c != 0);
        out
    }

    fn roots_mul(a: &RootPoly, b: &RootPoly) -> RootPoly {
        let mut out = RootPoly::new();
        for (&(p, q), &c) in a {
            for (&(r, s), &d) in b {
                *out.entry((p + r, q + s)).or_insert(0) += c * d;
            }
        }
        out.retain(|_, c| *c != 0);
        out
    }

    #[test]
    fn multiplication_examples() {
        assert_eq!(&v(1) * &v(1), &v(2) + &l());
        assert_eq!(&v(1) * &v(2), &v(3) + &(&l() * &v(1)));
        let x = &(&v(3) - &l().scale(2)) + &MotiveClass::cusp(12);
        assert_eq!(&MotiveClass::one() * &x, x);
    }

    #[test]
    fn multiplication_matches_root_oracle() {
        for a in 0..=8 {
            for b in 0..=8 {
                let lhs = to_roots(&(&v(a) * &v(b)));
                let rhs = roots_mul(&to_roots(&v(a)), &to_roots(&v(b)));
                assert_eq!(lhs, rhs, "V{a} V{b}");
            }
        }
    }

    #[test]
    fn adams_examples() {
        assert_eq!(v(1).adams(2), &v(2) - &l());
        assert_eq!(v(2).adams(2), &(&v(4) - &(&l() * &v(2))) + &l().pow(2));
        assert_eq!(l().pow(3).adams(4), l().pow(12));
        assert_eq!(MotiveClass::cusp(12).adams(2).adams(3).symbols(), vec!["psi6(S12)".to_string()]);
    }

    #[test]
    fn adams_composes_and_is_multiplicative() {
        let basis: Vec<_> = (0..=6).map(v).chain([l(), MotiveClass::cusp(12)]).collect();
        for r in 1..=4 {
            for s in 1..=4 {
                for x in &basis {
                    assert_eq!(x.adams(s).adams(r), x.adams(r * s));
                    for y in &basis {
                        assert_eq!((x * y).adams(r), &x.adams(r) * &y.adams(r));
                    }
                }
            }
        }
    }

    #[test]
    fn jacobian_factor_examples() {
        assert_eq!(jacobian_factor(1).unwrap(), &(&MotiveClass::one() - &v(1)) + &l());
        assert_eq!(jacobian_factor(0).unwrap(), MotiveClass::one());
        assert!(matches!(jacobian_factor(2), Err(Error::NeedsPluginTable { g: 2, .. })));
        // Λ²V₁ = L: the antisymmetric part of V₁⊗V₁.
        let sq = &v(1) * &v(1);
        assert_eq!(&(&sq - &v(1).adams(2)).div_exact(2).unwrap(), &l());
    }

    #[test]
    fn eichler_shimura_examples() {
        assert_eq!(eichler_shimura(0), l());
        assert_eq!(eichler_shimura(2), MotiveClass::int(-1));
        assert_eq!(eichler_shimura(1), MotiveClass::zero());
        assert_eq!(eichler_shimura(10), &MotiveClass::int(-1) - &MotiveClass::cusp(12));
        assert_eq!(eichler_shimura(12), MotiveClass::int(-1));
        for k in [2, 4, 6, 8, 12] {
            let e = eichler_shimura(k).e_polynomial().unwrap();
            assert!(e.terms().all(|(i, j, _)| (i + j) % 2 == 0 && i + j <= 2 * (k + 1)));
        }
    }

    #[test]
    fn cusp_dimensions() {
        let dims: Vec<_> = (4..=26).step_by(2).map(cusp_form_dimension).collect();
        assert_eq!(dims, vec![0, 0, 0, 0, 1, 0, 1, 1, 1, 1, 2, 1]);
    }

    #[test]
    fn integration_examples() {
        let fiber = &(&MotiveClass::one() - &v(1)) + &l();
        assert_eq!(fiber.integrate_m11(), &l() + &l().pow(2));
        assert_eq!(v(2).integrate_m11(), MotiveClass::int(-1));
        assert_eq!(v(1).integrate_m11(), MotiveClass::zero());
        // M_{1,2} and M_{1,3} from the fibration over M_{1,1} with fiber E minus the origin.
        let punctured = &l() - &v(1);
        assert_eq!(punctured.integrate_m11(), l().pow(2));
        let f2 = &(&punctured * &punctured) - &punctured;
        assert_eq!(f2.integrate_m11(), &l().pow(3) - &MotiveClass::one());
    }

    #[test]
    fn e_polynomial_examples() {
        let e = (&l().pow(2) + &l()).e_polynomial().unwrap();
        assert_eq!(e.to_string(), "uv + u^2v^2");
        let e = (&MotiveClass::cusp(12) + &MotiveClass::one()).e_polynomial().unwrap();
        assert_eq!(e, &(&EPolynomial::monomial(11, 0, 1) + &EPolynomial::monomial(0, 11, 1)) + &EPolynomial::one());
        assert!(matches!(v(1).e_polynomial(), Err(Error::RelativeClass)));
        assert_eq!(MotiveClass::cusp(12).adams(2).e_polynomial().unwrap().coefficient(22, 0), 1);
    }

    #[test]
    fn json_round_trip() {
        let x = &(&v(3) - &l().scale(2)) + &MotiveClass::cusp(12).adams(2);
        let s = serde_json::to_string(&x).unwrap();
        assert_eq!(serde_json::from_str::<MotiveClass>(&s).unwrap(), x);
        assert_eq!(x.to_string(), "psi2(S12) + V3 - 2*L");
    }

    pub(crate) fn arb_class() -> impl Strategy<Value = MotiveClass> {
        prop::collection::vec((0u32..3, 0u32..4, prop::bool::weighted(0.1), -3i64..4), 0..4).prop_map(|terms| {
            let mut out = MotiveClass::zero();
            for (l, v, cusp, c) in terms {
                let cusps = if cusp { vec![CuspSymbol { weight: 12, adams: 1 }] } else { Vec::new() };
                out.add_term(Monomial { l, v, cusps }, c);
            }
            out
        })
    }

    fn arb_absolute() -> impl Strategy<Value = MotiveClass> {
        arb_class().prop_map(|x| MotiveClass { terms: x.terms.into_iter().filter(|(m, _)| m.v == 0).collect() })
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(1000))]
        #[test]
        fn ring_axioms(x in arb_class(), y in arb_class(), z in arb_class()) {
            prop_assert_eq!(&x * &y, &y * &x);
            prop_assert_eq!(&(&x * &y) * &z, &x * &(&y * &z));
            prop_assert_eq!(&x * &(&y + &z), &(&x * &y) + &(&x * &z));
            prop_assert_eq!(&(&x + &y) + &z, &x + &(&y + &z));
            prop_assert_eq!(&x - &x, MotiveClass::zero());
        }

        #[test]
        fn adams_is_additive(x in arb_class(), y in arb_class(), r in 1u32..5) {
            prop_assert_eq!((&x + &y).adams(r), &x.adams(r) + &y.adams(r));
        }

        #[test]
        fn e_polynomial_is_multiplicative(x in arb_absolute(), y in arb_absolute()) {
            let lhs = (&x * &y).e_polynomial().unwrap();
            let rhs = &x.e_polynomial().unwrap() * &y.e_polynomial().unwrap();
            prop_assert_eq!(lhs, rhs);
        }
    }
}
