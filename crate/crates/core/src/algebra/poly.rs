use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, AddAssign, Mul, Neg, Sub, SubAssign};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};

/// Exponent vector over the mark variables, trailing zeros trimmed.
/// Ordered graded-lexicographically.
#[derive(Clone, PartialEq, Eq, Hash, Debug, Default)]
pub struct Monomial(Vec<u32>);

impl Monomial {
    pub fn one() -> Self {
        Monomial(Vec::new())
    }

    pub fn var(i: usize) -> Self {
        let mut e = vec![0; i + 1];
        e[i] = 1;
        Monomial(e)
    }

    pub fn from_exponents(mut e: Vec<u32>) -> Self {
        while e.last() == Some(&0) {
            e.pop();
        }
        Monomial(e)
    }

    pub fn exponents(&self) -> &[u32] {
        &self.0
    }

    pub fn total_degree(&self) -> u32 {
        self.0.iter().sum()
    }

    pub fn is_one(&self) -> bool {
        self.0.is_empty()
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        let n = self.0.len().max(other.0.len());
        let mut e = vec![0u32; n];
        for (i, v) in self.0.iter().enumerate() {
            e[i] += v;
        }
        for (i, v) in other.0.iter().enumerate() {
            e[i] += v;
        }
        Monomial::from_exponents(e)
    }

    fn exp(&self, i: usize) -> u32 {
        self.0.get(i).copied().unwrap_or(0)
    }
}

impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        self.total_degree()
            .cmp(&other.total_degree())
            .then_with(|| {
                let n = self.0.len().max(other.0.len());
                for i in 0..n {
                    match self.exp(i).cmp(&other.exp(i)) {
                        Ordering::Equal => continue,
                        // larger exponent on an earlier variable is lex-larger
                        ord => return ord,
                    }
                }
                Ordering::Equal
            })
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Sparse multivariate polynomial over `Z` in the mark variables.
/// No zero coefficients are stored.
#[derive(Clone, PartialEq, Eq, Debug, Default)]
pub struct Poly {
    terms: BTreeMap<Monomial, BigInt>,
}

impl Poly {
    pub fn zero() -> Self {
        Poly { terms: BTreeMap::new() }
    }

    pub fn one() -> Self {
        Poly::constant(BigInt::one())
    }

    pub fn constant(c: BigInt) -> Self {
        let mut p = Poly::zero();
        if !c.is_zero() {
            p.terms.insert(Monomial::one(), c);
        }
        p
    }

    pub fn from_i64(c: i64) -> Self {
        Poly::constant(BigInt::from(c))
    }

    pub fn var(i: usize) -> Self {
        let mut p = Poly::zero();
        p.terms.insert(Monomial::var(i), BigInt::one());
        p
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.terms.len() == 1
            && self
                .terms
                .get(&Monomial::one())
                .map(|c| c.is_one())
                .unwrap_or(false)
    }

    /// The constant `c` such that `self == c`, if the polynomial is constant.
    pub fn as_constant(&self) -> Option<BigInt> {
        if self.is_zero() {
            return Some(BigInt::zero());
        }
        if self.terms.len() == 1 {
            if let Some(c) = self.terms.get(&Monomial::one()) {
                return Some(c.clone());
            }
        }
        None
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &BigInt)> {
        self.terms.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn add_term(&mut self, m: Monomial, c: BigInt) {
        if c.is_zero() {
            return;
        }
        use std::collections::btree_map::Entry;
        match self.terms.entry(m) {
            Entry::Occupied(mut e) => {
                *e.get_mut() += c;
                if e.get().is_zero() {
                    e.remove();
                }
            }
            Entry::Vacant(v) => {
                v.insert(c);
            }
        }
    }

    pub fn scale(&self, c: &BigInt) -> Poly {
        if c.is_zero() {
            return Poly::zero();
        }
        Poly {
            terms: self.terms.iter().map(|(m, v)| (m.clone(), v * c)).collect(),
        }
    }

    /// Ring homomorphism evaluation; `assignment[i]` is the value of variable `i`.
    pub fn eval(&self, assignment: &[BigRational]) -> Result<BigRational> {
        let mut acc = BigRational::zero();
        for (m, c) in &self.terms {
            let mut t = BigRational::from_integer(c.clone());
            for (i, &e) in m.exponents().iter().enumerate() {
                if e == 0 {
                    continue;
                }
                let v = assignment
                    .get(i)
                    .ok_or_else(|| Error::input(format!("missing value for variable {}", i)))?;
                for _ in 0..e {
                    t *= v;
                }
            }
            acc += t;
        }
        Ok(acc)
    }

    /// Reduction mod 2: coefficients mapped to {0,1}.
    pub fn mod2(&self) -> Poly {
        let mut p = Poly::zero();
        for (m, c) in &self.terms {
            if c.abs() % BigInt::from(2) == BigInt::one() {
                p.terms.insert(m.clone(), BigInt::one());
            }
        }
        p
    }

    pub fn max_var(&self) -> Option<usize> {
        self.terms
            .keys()
            .filter_map(|m| {
                if m.exponents().is_empty() {
                    None
                } else {
                    Some(m.exponents().len() - 1)
                }
            })
            .max()
    }

    /// Render with `names[i]` for variable `i`; falls back to `x{i+1}`.
    pub fn render(&self, names: &[String]) -> String {
        if self.is_zero() {
            return "0".to_string();
        }
        let mut out = String::new();
        // highest monomial first reads more naturally
        for (idx, (m, c)) in self.terms.iter().rev().enumerate() {
            let neg = c.is_negative();
            let abs = c.abs();
            if idx == 0 {
                if neg {
                    out.push('-');
                }
            } else if neg {
                out.push_str(" - ");
            } else {
                out.push_str(" + ");
            }
            let mut factors: Vec<String> = Vec::new();
            if !abs.is_one() || m.is_one() {
                factors.push(abs.to_string());
            }
            for (i, &e) in m.exponents().iter().enumerate() {
                if e == 0 {
                    continue;
                }
                let name = names
                    .get(i)
                    .cloned()
                    .unwrap_or_else(|| format!("x{}", i + 1));
                if e == 1 {
                    factors.push(name);
                } else {
                    factors.push(format!("{}^{}", name, e));
                }
            }
            out.push_str(&factors.join("*"));
        }
        out
    }
}

impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.render(&[]))
    }
}

impl Add for &Poly {
    type Output = Poly;
    fn add(self, rhs: &Poly) -> Poly {
        let mut out = self.clone();
        out += rhs;
        out
    }
}

impl AddAssign<&Poly> for Poly {
    fn add_assign(&mut self, rhs: &Poly) {
        for (m, c) in &rhs.terms {
            let entry = self.terms.entry(m.clone()).or_insert_with(BigInt::zero);
            *entry += c;
        }
        self.terms.retain(|_, v| !v.is_zero());
    }
}

impl Sub for &Poly {
    type Output = Poly;
    fn sub(self, rhs: &Poly) -> Poly {
        let mut out = self.clone();
        out -= rhs;
        out
    }
}

impl SubAssign<&Poly> for Poly {
    fn sub_assign(&mut self, rhs: &Poly) {
        for (m, c) in &rhs.terms {
            let entry = self.terms.entry(m.clone()).or_insert_with(BigInt::zero);
            *entry -= c;
        }
        self.terms.retain(|_, v| !v.is_zero());
    }
}

impl Neg for &Poly {
    type Output = Poly;
    fn neg(self) -> Poly {
        Poly {
            terms: self.terms.iter().map(|(m, c)| (m.clone(), -c)).collect(),
        }
    }
}

impl Mul for &Poly {
    type Output = Poly;
    fn mul(self, rhs: &Poly) -> Poly {
        let mut out = Poly::zero();
        for (m1, c1) in &self.terms {
            for (m2, c2) in &rhs.terms {
                let m = m1.mul(m2);
                let entry = out.terms.entry(m).or_insert_with(BigInt::zero);
                *entry += c1 * c2;
            }
        }
        out.terms.retain(|_, v| !v.is_zero());
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64) -> BigRational {
        BigRational::from_integer(BigInt::from(n))
    }

    #[test]
    fn monomial_order_is_graded_lex() {
        let one = Monomial::one();
        let x0 = Monomial::var(0);
        let x1 = Monomial::var(1);
        let x0x1 = x0.mul(&x1);
        let x0sq = x0.mul(&x0);
        assert!(one < x0);
        assert!(x1 < x0); // same degree, x0 is lex-larger
        assert!(x0 < x0x1);
        assert!(x0x1 < x0sq); // same degree, higher power of x0 wins
    }

    #[test]
    fn eval_simple_sum() {
        let p = &Poly::var(0) + &Poly::var(1);
        assert_eq!(p.eval(&[q(1), q(2)]).unwrap(), q(3));
    }

    #[test]
    fn eval_zero() {
        assert_eq!(Poly::zero().eval(&[]).unwrap(), q(0));
    }

    #[test]
    fn eval_product_identity() {
        // (x1+x2)(x1-x2) at (2,3) = 4 - 9 = -5
        let s = &Poly::var(0) + &Poly::var(1);
        let d = &Poly::var(0) - &Poly::var(1);
        let p = &s * &d;
        assert_eq!(p.eval(&[q(2), q(3)]).unwrap(), q(-5));
    }

    #[test]
    fn eval_missing_variable_errors() {
        let p = Poly::var(3);
        assert!(p.eval(&[q(1)]).is_err());
    }

    #[test]
    fn cancellation_drops_terms() {
        let p = &Poly::var(0) - &Poly::var(0);
        assert!(p.is_zero());
    }

    #[test]
    fn render_readable() {
        let p = &(&Poly::var(0) * &Poly::var(1)) - &Poly::from_i64(2);
        assert_eq!(p.render(&[]), "x1*x2 - 2");
    }
}
