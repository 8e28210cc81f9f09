//! Dense integer polynomials, lowest degree first.

pub fn trim(mut p: Vec<i64>) -> Vec<i64> {
    while p.last() == Some(&0) {
        p.pop();
    }
    p
}

pub fn mul(a: &[i64], b: &[i64]) -> Vec<i64> {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![0; a.len() + b.len() - 1];
    for (i, &x) in a.iter().enumerate() {
        for (j, &y) in b.iter().enumerate() {
            out[i + j] += x * y;
        }
    }
    trim(out)
}

/// `a / b` when `b` divides `a` over the integers.
pub fn div_exact(a: &[i64], b: &[i64]) -> Option<Vec<i64>> {
    let b = trim(b.to_vec());
    let lead = *b.last()?;
    let mut rem = trim(a.to_vec());
    if rem.len() < b.len() {
        return rem.is_empty().then(Vec::new);
    }
    let mut q = vec![0; rem.len() - b.len() + 1];
    while rem.len() >= b.len() {
        let top = *rem.last()?;
        if top % lead != 0 {
            return None;
        }
        let c = top / lead;
        let shift = rem.len() - b.len();
        q[shift] = c;
        for (i, &y) in b.iter().enumerate() {
            rem[shift + i] -= c * y;
        }
        rem = trim(rem);
    }
    rem.is_empty().then(|| trim(q))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn division() {
        // (q+1)q(q-1)(q-2) / (q^3 - q) = q - 2
        let num = mul(&mul(&[1, 1], &[0, 1]), &mul(&[-1, 1], &[-2, 1]));
        assert_eq!(div_exact(&num, &[0, -1, 0, 1]), Some(vec![-2, 1]));
        assert_eq!(div_exact(&[1, 1], &[0, 1]), None);
        assert_eq!(div_exact(&[], &[1, 1]), Some(vec![]));
    }
}
