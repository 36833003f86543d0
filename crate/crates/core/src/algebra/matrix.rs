use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

/// Sparse integer matrix with explicit dimensions; no stored zeros.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct IntMatrix {
    rows: usize,
    cols: usize,
    entries: BTreeMap<(usize, usize), BigInt>,
}

/// Rank and elementary divisors of an integer matrix.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct SmithNormalForm {
    pub rank: usize,
    /// Positive divisors d1 | d2 | ... (length = rank).
    pub divisors: Vec<BigInt>,
}

impl IntMatrix {
    pub fn new(rows: usize, cols: usize) -> Self {
        IntMatrix { rows, cols, entries: BTreeMap::new() }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = IntMatrix::new(n, n);
        for i in 0..n {
            m.set(i, i, BigInt::one());
        }
        m
    }

    pub fn from_rows(data: &[Vec<i64>]) -> Self {
        let rows = data.len();
        let cols = data.iter().map(|r| r.len()).max().unwrap_or(0);
        let mut m = IntMatrix::new(rows, cols);
        for (i, row) in data.iter().enumerate() {
            for (j, &v) in row.iter().enumerate() {
                m.set(i, j, BigInt::from(v));
            }
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn set(&mut self, i: usize, j: usize, v: BigInt) {
        assert!(i < self.rows && j < self.cols, "entry out of bounds");
        if v.is_zero() {
            self.entries.remove(&(i, j));
        } else {
            self.entries.insert((i, j), v);
        }
    }

    pub fn add(&mut self, i: usize, j: usize, v: &BigInt) {
        if v.is_zero() {
            return;
        }
        let cur = self.get(i, j) + v;
        self.set(i, j, cur);
    }

    pub fn get(&self, i: usize, j: usize) -> BigInt {
        self.entries.get(&(i, j)).cloned().unwrap_or_else(BigInt::zero)
    }

    pub fn entries(&self) -> impl Iterator<Item = (usize, usize, &BigInt)> {
        self.entries.iter().map(|(&(i, j), v)| (i, j, v))
    }

    pub fn is_zero(&self) -> bool {
        self.entries.is_empty()
    }

    fn to_dense(&self) -> Vec<Vec<BigInt>> {
        let mut d = vec![vec![BigInt::zero(); self.cols]; self.rows];
        for (&(i, j), v) in &self.entries {
            d[i][j] = v.clone();
        }
        d
    }

    /// Smith normal form by pivoting on a magnitude-minimal nonzero entry,
    /// clearing its row and column with Euclidean steps, then fixing the
    /// divisibility chain.
    pub fn smith_normal_form(&self) -> SmithNormalForm {
        let mut m = self.to_dense();
        let (nr, nc) = (self.rows, self.cols);
        let mut divisors: Vec<BigInt> = Vec::new();
        let mut k = 0usize;
        while k < nr.min(nc) {
            // find magnitude-minimal nonzero entry in the trailing block
            let mut pivot: Option<(usize, usize)> = None;
            for i in k..nr {
                for j in k..nc {
                    if m[i][j].is_zero() {
                        continue;
                    }
                    match &pivot {
                        None => pivot = Some((i, j)),
                        Some((pi, pj)) => {
                            if m[i][j].abs() < m[*pi][*pj].abs() {
                                pivot = Some((i, j));
                            }
                        }
                    }
                }
            }
            let Some((pi, pj)) = pivot else { break };
            m.swap(k, pi);
            for row in m.iter_mut() {
                row.swap(k, pj);
            }

            // reduce row/column k against the pivot until they clear
            loop {
                let mut clean = true;
                for i in (k + 1)..nr {
                    if m[i][k].is_zero() {
                        continue;
                    }
                    let q = div_round(&m[i][k], &m[k][k]);
                    if !q.is_zero() {
                        for j in k..nc {
                            let t = &m[k][j] * &q;
                            m[i][j] -= t;
                        }
                    }
                    if !m[i][k].is_zero() {
                        // remainder strictly smaller; swap it up as pivot
                        m.swap(k, i);
                        clean = false;
                    }
                }
                for j in (k + 1)..nc {
                    if m[k][j].is_zero() {
                        continue;
                    }
                    let q = div_round(&m[k][j], &m[k][k]);
                    if !q.is_zero() {
                        for i in k..nr {
                            let t = &m[i][k] * &q;
                            m[i][j] -= t;
                        }
                    }
                    if !m[k][j].is_zero() {
                        for row in m.iter_mut() {
                            row.swap(k, j);
                        }
                        clean = false;
                    }
                }
                if clean {
                    break;
                }
            }

            // enforce that the pivot divides the rest of the block
            let mut redo = false;
            'scan: for i in (k + 1)..nr {
                for j in (k + 1)..nc {
                    if !(&m[i][j] % &m[k][k]).is_zero() {
                        // fold row i into row k and restart this pivot step
                        for jj in k..nc {
                            let t = m[i][jj].clone();
                            m[k][jj] += t;
                        }
                        redo = true;
                        break 'scan;
                    }
                }
            }
            if redo {
                continue;
            }
            divisors.push(m[k][k].abs());
            k += 1;
        }
        SmithNormalForm { rank: divisors.len(), divisors }
    }

    pub fn rank(&self) -> usize {
        self.smith_normal_form().rank
    }

    /// Exact determinant by fraction-free (Bareiss) elimination.
    pub fn determinant(&self) -> BigInt {
        assert_eq!(self.rows, self.cols, "determinant of a non-square matrix");
        let n = self.rows;
        if n == 0 {
            return BigInt::one();
        }
        let mut m = self.to_dense();
        let mut sign = BigInt::one();
        let mut prev = BigInt::one();
        for k in 0..n - 1 {
            if m[k][k].is_zero() {
                let Some(p) = (k + 1..n).find(|&i| !m[i][k].is_zero()) else {
                    return BigInt::zero();
                };
                m.swap(k, p);
                sign = -sign;
            }
            for i in k + 1..n {
                for j in k + 1..n {
                    let t = &m[i][j] * &m[k][k] - &m[i][k] * &m[k][j];
                    m[i][j] = t / &prev;
                }
            }
            prev = m[k][k].clone();
        }
        sign * m[n - 1][n - 1].clone()
    }
}

/// Quotient rounding toward the nearest integer, which keeps Euclidean
/// remainders at most half the pivot.
fn div_round(a: &BigInt, b: &BigInt) -> BigInt {
    let (q, r) = a.div_rem(b);
    let two_r = r.abs() * BigInt::from(2);
    if two_r > b.abs() {
        if (r.sign() == b.sign()) || r.is_zero() {
            q + BigInt::one()
        } else {
            q - BigInt::one()
        }
    } else {
        q
    }
}

/// Sparse rational matrix with explicit dimensions; no stored zeros.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct RatMatrix {
    rows: usize,
    cols: usize,
    entries: BTreeMap<(usize, usize), BigRational>,
}

impl RatMatrix {
    pub fn new(rows: usize, cols: usize) -> Self {
        RatMatrix { rows, cols, entries: BTreeMap::new() }
    }

    pub fn from_rows_i64(data: &[Vec<i64>]) -> Self {
        let rows = data.len();
        let cols = data.iter().map(|r| r.len()).max().unwrap_or(0);
        let mut m = RatMatrix::new(rows, cols);
        for (i, row) in data.iter().enumerate() {
            for (j, &v) in row.iter().enumerate() {
                m.set(i, j, BigRational::from_integer(BigInt::from(v)));
            }
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn set(&mut self, i: usize, j: usize, v: BigRational) {
        assert!(i < self.rows && j < self.cols, "entry out of bounds");
        if v.is_zero() {
            self.entries.remove(&(i, j));
        } else {
            self.entries.insert((i, j), v);
        }
    }

    pub fn get(&self, i: usize, j: usize) -> BigRational {
        self.entries
            .get(&(i, j))
            .cloned()
            .unwrap_or_else(BigRational::zero)
    }

    pub fn entries(&self) -> impl Iterator<Item = (usize, usize, &BigRational)> {
        self.entries.iter().map(|(&(i, j), v)| (i, j, v))
    }

    /// Rank over `Q` by Gaussian elimination.
    pub fn rank(&self) -> usize {
        let mut d: Vec<Vec<BigRational>> =
            vec![vec![BigRational::zero(); self.cols]; self.rows];
        for (&(i, j), v) in &self.entries {
            d[i][j] = v.clone();
        }
        let mut rank = 0usize;
        let mut row = 0usize;
        for col in 0..self.cols {
            let Some(p) = (row..self.rows).find(|&i| !d[i][col].is_zero()) else {
                continue;
            };
            d.swap(row, p);
            let inv = d[row][col].recip();
            for j in col..self.cols {
                let t = &d[row][j] * &inv;
                d[row][j] = t;
            }
            for i in 0..self.rows {
                if i != row && !d[i][col].is_zero() {
                    let f = d[i][col].clone();
                    for j in col..self.cols {
                        let t = &d[row][j] * &f;
                        d[i][j] -= t;
                    }
                }
            }
            rank += 1;
            row += 1;
            if row == self.rows {
                break;
            }
        }
        rank
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn divisors_i64(m: &IntMatrix) -> Vec<i64> {
        m.smith_normal_form()
            .divisors
            .iter()
            .map(|d| i64::try_from(d).unwrap())
            .collect()
    }

    #[test]
    fn snf_scalar() {
        let m = IntMatrix::from_rows(&[vec![2]]);
        let snf = m.smith_normal_form();
        assert_eq!(snf.rank, 1);
        assert_eq!(divisors_i64(&m), vec![2]);
    }

    #[test]
    fn snf_identity() {
        let m = IntMatrix::identity(3);
        let snf = m.smith_normal_form();
        assert_eq!(snf.rank, 3);
        assert_eq!(divisors_i64(&m), vec![1, 1, 1]);
    }

    #[test]
    fn snf_rank_one_multiple() {
        // [[2,4],[4,8]]: row-reduce by hand: second row = 2 * first, so rank 1
        // and the single divisor is gcd of entries = 2.
        let m = IntMatrix::from_rows(&[vec![2, 4], vec![4, 8]]);
        let snf = m.smith_normal_form();
        assert_eq!(snf.rank, 1);
        assert_eq!(divisors_i64(&m), vec![2]);
    }

    #[test]
    fn snf_divisibility_chain() {
        let m = IntMatrix::from_rows(&[vec![2, 0], vec![0, 3]]);
        assert_eq!(divisors_i64(&m), vec![1, 6]);
    }

    #[test]
    fn snf_known_4x4() {
        let m = IntMatrix::from_rows(&[
            vec![-6, 111, -36, 6],
            vec![5, -672, 210, 74],
            vec![0, -255, 81, 24],
            vec![-7, 255, -81, -10],
        ]);
        assert_eq!(divisors_i64(&m), vec![1, 3, 21]);
    }

    #[test]
    fn rank_q_trivia() {
        assert_eq!(RatMatrix::new(3, 4).rank(), 0);
        let mut id = RatMatrix::new(3, 3);
        for i in 0..3 {
            id.set(i, i, BigRational::from_integer(BigInt::one()));
        }
        assert_eq!(id.rank(), 3);
        let m = RatMatrix::from_rows_i64(&[vec![1, 2], vec![2, 4]]);
        assert_eq!(m.rank(), 1);
    }
}
