use std::fmt;
use std::ops::Mul;

/// Dense row-major integer matrix.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct IntMatrix {
    rows: usize,
    cols: usize,
    data: Vec<i64>,
}

impl IntMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        IntMatrix { rows, cols, data: vec![0; rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = 1;
        }
        m
    }

    pub fn from_rows(rows: &[Vec<i64>]) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        assert!(rows.iter().all(|row| row.len() == c), "ragged matrix");
        IntMatrix { rows: r, cols: c, data: rows.concat() }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn row(&self, i: usize) -> &[i64] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn to_rows(&self) -> Vec<Vec<i64>> {
        (0..self.rows).map(|i| self.row(i).to_vec()).collect()
    }

    pub fn mul_vec(&self, v: &[i64]) -> Vec<i64> {
        assert_eq!(v.len(), self.cols);
        (0..self.rows).map(|i| self.row(i).iter().zip(v).map(|(a, b)| a * b).sum()).collect()
    }

    pub fn column(&self, j: usize) -> Vec<i64> {
        (0..self.rows).map(|i| self[(i, j)]).collect()
    }

    pub fn is_diagonal(&self) -> bool {
        (0..self.rows).all(|i| (0..self.cols).all(|j| i == j || self[(i, j)] == 0))
    }

    /// Determinant by fraction-free elimination.
    pub fn det(&self) -> i64 {
        assert_eq!(self.rows, self.cols, "determinant of a non-square matrix");
        let n = self.rows;
        let mut a: Vec<Vec<i128>> = (0..n).map(|i| self.row(i).iter().map(|&x| x as i128).collect()).collect();
        let mut sign = 1i128;
        let mut prev = 1i128;
        for k in 0..n {
            if a[k][k] == 0 {
                match (k + 1..n).find(|&i| a[i][k] != 0) {
                    Some(i) => {
                        a.swap(i, k);
                        sign = -sign;
                    }
                    None => return 0,
                }
            }
            for i in k + 1..n {
                for j in k + 1..n {
                    a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) / prev;
                }
            }
            prev = a[k][k];
        }
        if n == 0 {
            return 1;
        }
        (sign * a[n - 1][n - 1]) as i64
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        for j in 0..self.cols {
            self.data.swap(a * self.cols + j, b * self.cols + j);
        }
    }

    fn swap_cols(&mut self, a: usize, b: usize) {
        for i in 0..self.rows {
            self.data.swap(i * self.cols + a, i * self.cols + b);
        }
    }

    /// row[dst] += q * row[src]
    fn add_row(&mut self, dst: usize, src: usize, q: i64) {
        for j in 0..self.cols {
            let v = self[(src, j)];
            self[(dst, j)] += q * v;
        }
    }

    /// col[dst] += q * col[src]
    fn add_col(&mut self, dst: usize, src: usize, q: i64) {
        for i in 0..self.rows {
            let v = self[(i, src)];
            self[(i, dst)] += q * v;
        }
    }

    fn negate_row(&mut self, i: usize) {
        for j in 0..self.cols {
            self[(i, j)] = -self[(i, j)];
        }
    }

    fn negate_col(&mut self, j: usize) {
        for i in 0..self.rows {
            self[(i, j)] = -self[(i, j)];
        }
    }
}

impl std::ops::Index<(usize, usize)> for IntMatrix {
    type Output = i64;
    fn index(&self, (i, j): (usize, usize)) -> &i64 {
        &self.data[i * self.cols + j]
    }
}

impl std::ops::IndexMut<(usize, usize)> for IntMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut i64 {
        &mut self.data[i * self.cols + j]
    }
}

impl Mul for &IntMatrix {
    type Output = IntMatrix;
    fn mul(self, rhs: &IntMatrix) -> IntMatrix {
        assert_eq!(self.cols, rhs.rows);
        let mut out = IntMatrix::zeros(self.rows, rhs.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self[(i, k)];
                if a != 0 {
                    for j in 0..rhs.cols {
                        out[(i, j)] += a * rhs[(k, j)];
                    }
                }
            }
        }
        out
    }
}

impl fmt::Debug for IntMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_list().entries(self.to_rows()).finish()
    }
}

/// `left * m * right == diagonal`, with `left`, `right` unimodular and the
/// diagonal entries nonnegative, each dividing the next (zeros last).
#[derive(Clone, Debug)]
pub struct SmithForm {
    pub diagonal: IntMatrix,
    pub left: IntMatrix,
    pub left_inverse: IntMatrix,
    pub right: IntMatrix,
}

impl SmithForm {
    /// Diagonal entries `d_1 | d_2 | ...`.
    pub fn invariant_factors(&self) -> Vec<i64> {
        (0..self.diagonal.rows.min(self.diagonal.cols)).map(|i| self.diagonal[(i, i)]).collect()
    }

    pub fn rank(&self) -> usize {
        self.invariant_factors().iter().filter(|&&d| d != 0).count()
    }
}

/// Smith normal form by elementary row and column operations, always
/// pivoting on the entry of least absolute value.
pub fn smith_normal_form(m: &IntMatrix) -> SmithForm {
    let (r, c) = (m.rows, m.cols);
    let mut d = m.clone();
    let mut left = IntMatrix::identity(r);
    let mut left_inv = IntMatrix::identity(r);
    let mut right = IntMatrix::identity(c);

    for t in 0..r.min(c) {
        loop {
            let pivot = (t..r)
                .flat_map(|i| (t..c).map(move |j| (i, j)))
                .filter(|&(i, j)| d[(i, j)] != 0)
                .min_by_key(|&(i, j)| (d[(i, j)].abs(), i, j));
            let Some((pi, pj)) = pivot else {
                return SmithForm { diagonal: d, left, left_inverse: left_inv, right };
            };
            if pi != t {
                d.swap_rows(pi, t);
                left.swap_rows(pi, t);
                left_inv.swap_cols(pi, t);
            }
            if pj != t {
                d.swap_cols(pj, t);
                right.swap_cols(pj, t);
            }
            let p = d[(t, t)];
            let mut clean = true;
            for i in t + 1..r {
                let q = d[(i, t)].div_euclid(p);
                if q != 0 {
                    d.add_row(i, t, -q);
                    left.add_row(i, t, -q);
                    left_inv.add_col(t, i, q);
                }
                clean &= d[(i, t)] == 0;
            }
            for j in t + 1..c {
                let q = d[(t, j)].div_euclid(p);
                if q != 0 {
                    d.add_col(j, t, -q);
                    right.add_col(j, t, -q);
                }
                clean &= d[(t, j)] == 0;
            }
            if !clean {
                continue;
            }
            // Divisibility: fold an offending row into the pivot row.
            let bad = (t + 1..r).find(|&i| (t + 1..c).any(|j| d[(i, j)] % p != 0));
            if let Some(i) = bad {
                d.add_row(t, i, 1);
                left.add_row(t, i, 1);
                left_inv.add_col(i, t, -1);
                continue;
            }
            if p < 0 {
                d.negate_row(t);
                left.negate_row(t);
                left_inv.negate_col(t);
            }
            break;
        }
    }
    SmithForm { diagonal: d, left, left_inverse: left_inv, right }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn check(m: &IntMatrix) -> SmithForm {
        let s = smith_normal_form(m);
        assert_eq!(&(&s.left * m) * &s.right, s.diagonal);
        assert!(s.diagonal.is_diagonal());
        assert_eq!(&s.left * &s.left_inverse, IntMatrix::identity(m.rows()));
        assert_eq!(s.left.det().abs(), 1);
        assert_eq!(s.right.det().abs(), 1);
        let f = s.invariant_factors();
        for w in f.windows(2) {
            assert!(w[0] >= 0);
            if w[0] == 0 {
                assert_eq!(w[1], 0);
            } else {
                assert_eq!(w[1] % w[0], 0);
            }
        }
        s
    }

    #[test]
    fn examples() {
        let s = check(&IntMatrix::identity(3));
        assert_eq!(s.invariant_factors(), vec![1, 1, 1]);
        assert_eq!(s.left, IntMatrix::identity(3));
        assert_eq!(s.right, IntMatrix::identity(3));

        let s = check(&IntMatrix::from_rows(&[vec![3, -3], vec![-3, 3]]));
        assert_eq!(s.invariant_factors(), vec![3, 0]);

        let s = check(&IntMatrix::from_rows(&[vec![2, 0], vec![0, 0]]));
        assert_eq!(s.invariant_factors(), vec![2, 0]);

        let s = check(&IntMatrix::from_rows(&[vec![2, 0], vec![0, 3]]));
        assert_eq!(s.invariant_factors(), vec![1, 6]);
    }

    #[test]
    fn determinant() {
        assert_eq!(IntMatrix::from_rows(&[vec![0, 1], vec![1, 0]]).det(), -1);
        assert_eq!(IntMatrix::from_rows(&[vec![2, 1, 0], vec![1, 2, 1], vec![0, 1, 2]]).det(), 4);
        assert_eq!(IntMatrix::zeros(0, 0).det(), 1);
    }

    proptest! {
        #[test]
        fn round_trip(rows in 1usize..5, cols in 1usize..5, seed in proptest::collection::vec(-6i64..7, 25)) {
            let data: Vec<Vec<i64>> = (0..rows).map(|i| (0..cols).map(|j| seed[i * 5 + j]).collect()).collect();
            let m = IntMatrix::from_rows(&data);
            let s = check(&m);
            if rows == cols {
                let prod: i64 = s.invariant_factors().iter().product();
                prop_assert_eq!(prod, m.det().abs());
            }
        }
    }
}
