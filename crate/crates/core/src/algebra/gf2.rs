/// Dense linear system over GF(2), rows packed into u64 words.
/// Used for the cube sign-assignment solves.
#[derive(Clone, Debug)]
pub struct Gf2System {
    ncols: usize,
    words: usize,
    rows: Vec<Row>,
}

#[derive(Clone, Debug)]
struct Row {
    bits: Vec<u64>,
    rhs: bool,
}

impl Row {
    fn get(&self, j: usize) -> bool {
        self.bits[j / 64] >> (j % 64) & 1 == 1
    }

    fn xor_in(&mut self, other: &Row) {
        for (a, b) in self.bits.iter_mut().zip(&other.bits) {
            *a ^= b;
        }
        self.rhs ^= other.rhs;
    }

    fn is_zero(&self) -> bool {
        self.bits.iter().all(|&w| w == 0)
    }
}

impl Gf2System {
    pub fn new(ncols: usize) -> Self {
        Gf2System { ncols, words: ncols.div_ceil(64), rows: Vec::new() }
    }

    pub fn add_equation(&mut self, vars: &[usize], rhs: bool) {
        let mut row = Row { bits: vec![0u64; self.words], rhs };
        for &v in vars {
            assert!(v < self.ncols, "variable out of range");
            row.bits[v / 64] ^= 1u64 << (v % 64);
        }
        self.rows.push(row);
    }

    /// One solution with free variables set to 0, or None if inconsistent.
    pub fn solve(&self) -> Option<Vec<bool>> {
        let mut rows = self.rows.clone();
        let mut pivot_of_col: Vec<Option<usize>> = vec![None; self.ncols];
        let mut next = 0usize;
        for col in 0..self.ncols {
            let Some(p) = (next..rows.len()).find(|&i| rows[i].get(col)) else {
                continue;
            };
            rows.swap(next, p);
            let pivot_row = rows[next].clone();
            for (i, row) in rows.iter_mut().enumerate() {
                if i != next && row.get(col) {
                    row.xor_in(&pivot_row);
                }
            }
            pivot_of_col[col] = Some(next);
            next += 1;
        }
        if rows[next..].iter().any(|r| r.is_zero() && r.rhs) {
            return None;
        }
        let mut x = vec![false; self.ncols];
        for col in 0..self.ncols {
            if let Some(r) = pivot_of_col[col] {
                // row r is reduced: x[col] = rhs (free variables are zero)
                x[col] = rows[r].rhs;
            }
        }
        Some(x)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn solves_small_system() {
        // x0 + x1 = 1, x1 + x2 = 0, x0 = 0  =>  x = (0,1,1)
        let mut sys = Gf2System::new(3);
        sys.add_equation(&[0, 1], true);
        sys.add_equation(&[1, 2], false);
        sys.add_equation(&[0], false);
        assert_eq!(sys.solve(), Some(vec![false, true, true]));
    }

    #[test]
    fn detects_inconsistency() {
        let mut sys = Gf2System::new(2);
        sys.add_equation(&[0, 1], true);
        sys.add_equation(&[0, 1], false);
        assert_eq!(sys.solve(), None);
    }

    #[test]
    fn free_variables_default_to_zero() {
        let mut sys = Gf2System::new(3);
        sys.add_equation(&[0, 2], true);
        let x = sys.solve().unwrap();
        assert_eq!(x, vec![true, false, false]);
    }
}
