use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, AddAssign, Neg, Sub};

use num_bigint::BigInt;

use crate::error::{Error, Result};

use super::poly::Poly;

/// Element of the exterior algebra on `k` circle generators, with `Poly`
/// coefficients. A monomial is a subset of `{0..k-1}` stored as a bitmask;
/// the generator order inside a monomial is always ascending, and products
/// carry the Koszul sign of the merge.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct ExtElement {
    ambient: usize,
    terms: BTreeMap<u64, Poly>,
}

/// Parity of the number of pairs (i in a, j in b) with i > j; this is the
/// sign picked up when sorting the concatenation of two ascending index lists.
pub fn merge_sign(a: u64, b: u64) -> bool {
    let mut sign = false;
    let mut bb = b;
    while bb != 0 {
        let j = bb.trailing_zeros() as u64;
        // generators of a strictly above j must hop over b's generator j
        let above = a >> (j + 1);
        if above.count_ones() % 2 == 1 {
            sign = !sign;
        }
        bb &= bb - 1;
    }
    sign
}

impl ExtElement {
    pub fn zero(ambient: usize) -> Self {
        ExtElement { ambient, terms: BTreeMap::new() }
    }

    pub fn one(ambient: usize) -> Self {
        let mut e = ExtElement::zero(ambient);
        e.terms.insert(0, Poly::one());
        e
    }

    /// The generator `a_i` (0-based circle index).
    pub fn generator(ambient: usize, i: usize) -> Self {
        assert!(i < ambient, "generator index out of range");
        let mut e = ExtElement::zero(ambient);
        e.terms.insert(1u64 << i, Poly::one());
        e
    }

    pub fn monomial(ambient: usize, mask: u64, coeff: Poly) -> Self {
        assert!(mask >> ambient == 0, "monomial outside ambient algebra");
        let mut e = ExtElement::zero(ambient);
        if !coeff.is_zero() {
            e.terms.insert(mask, coeff);
        }
        e
    }

    pub fn ambient(&self) -> usize {
        self.ambient
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (u64, &Poly)> {
        self.terms.iter().map(|(m, p)| (*m, p))
    }

    pub fn coeff(&self, mask: u64) -> Poly {
        self.terms.get(&mask).cloned().unwrap_or_else(Poly::zero)
    }

    pub fn add_term(&mut self, mask: u64, coeff: &Poly) {
        if coeff.is_zero() {
            return;
        }
        let entry = self.terms.entry(mask).or_insert_with(Poly::zero);
        *entry += coeff;
        if entry.is_zero() {
            self.terms.remove(&mask);
        }
    }

    pub fn scale_int(&self, c: i64) -> ExtElement {
        let big = BigInt::from(c);
        let mut out = ExtElement::zero(self.ambient);
        for (m, p) in &self.terms {
            out.add_term(*m, &p.scale(&big));
        }
        out
    }

    pub fn scale_poly(&self, c: &Poly) -> ExtElement {
        let mut out = ExtElement::zero(self.ambient);
        for (m, p) in &self.terms {
            out.add_term(*m, &(p * c));
        }
        out
    }

    pub fn mod2(&self) -> ExtElement {
        let mut out = ExtElement::zero(self.ambient);
        for (m, p) in &self.terms {
            out.add_term(*m, &p.mod2());
        }
        out
    }

    pub fn render(&self, names: &[String]) -> String {
        if self.is_zero() {
            return "0".to_string();
        }
        let parts: Vec<String> = self
            .terms
            .iter()
            .map(|(m, p)| {
                let gens: Vec<String> = (0..self.ambient)
                    .filter(|i| m & (1 << i) != 0)
                    .map(|i| format!("a{}", i + 1))
                    .collect();
                let coeff = p.render(names);
                if gens.is_empty() {
                    format!("({})", coeff)
                } else {
                    format!("({})*{}", coeff, gens.join(""))
                }
            })
            .collect();
        parts.join(" + ")
    }
}

impl fmt::Display for ExtElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.render(&[]))
    }
}

/// Graded-anticommutative product of two exterior elements.
pub fn ext_mul(u: &ExtElement, v: &ExtElement) -> Result<ExtElement> {
    if u.ambient != v.ambient {
        return Err(Error::input(format!(
            "exterior product over mismatched ambient algebras ({} vs {})",
            u.ambient, v.ambient
        )));
    }
    let mut out = ExtElement::zero(u.ambient);
    for (ma, pa) in &u.terms {
        for (mb, pb) in &v.terms {
            if ma & mb != 0 {
                continue; // a_i ^ a_i = 0
            }
            let mut coeff = pa * pb;
            if merge_sign(*ma, *mb) {
                coeff = -&coeff;
            }
            out.add_term(ma | mb, &coeff);
        }
    }
    Ok(out)
}

/// Left multiplication by `w * a_i`.
pub fn left_mult(w: &Poly, i: usize, v: &ExtElement) -> Result<ExtElement> {
    if i >= v.ambient {
        return Err(Error::input(format!(
            "circle index {} out of range for ambient {}",
            i, v.ambient
        )));
    }
    let factor = ExtElement::monomial(v.ambient, 1u64 << i, w.clone());
    ext_mul(&factor, v)
}

impl Add for &ExtElement {
    type Output = ExtElement;
    fn add(self, rhs: &ExtElement) -> ExtElement {
        assert_eq!(self.ambient, rhs.ambient);
        let mut out = self.clone();
        out += rhs;
        out
    }
}

impl AddAssign<&ExtElement> for ExtElement {
    fn add_assign(&mut self, rhs: &ExtElement) {
        assert_eq!(self.ambient, rhs.ambient);
        for (m, p) in &rhs.terms {
            self.add_term(*m, p);
        }
    }
}

impl Sub for &ExtElement {
    type Output = ExtElement;
    fn sub(self, rhs: &ExtElement) -> ExtElement {
        self + &(-rhs)
    }
}

impl Neg for &ExtElement {
    type Output = ExtElement;
    fn neg(self) -> ExtElement {
        self.scale_int(-1)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn gen(k: usize, i: usize) -> ExtElement {
        ExtElement::generator(k, i)
    }

    /// Brute-force sign of sorting a concatenated index list by counting
    /// adjacent transpositions; independent route for the Koszul sign.
    fn bubble_sign(indices: &[usize]) -> Option<bool> {
        let mut v = indices.to_vec();
        let mut sign = false;
        for i in 0..v.len() {
            for j in 0..v.len().saturating_sub(1 + i) {
                if v[j] > v[j + 1] {
                    v.swap(j, j + 1);
                    sign = !sign;
                }
            }
        }
        for w in v.windows(2) {
            if w[0] == w[1] {
                return None; // repeated generator squares to zero
            }
        }
        Some(sign)
    }

    #[test]
    fn square_zero() {
        let a1 = gen(3, 0);
        assert!(ext_mul(&a1, &a1).unwrap().is_zero());
    }

    #[test]
    fn anticommutativity() {
        let a1 = gen(3, 0);
        let a2 = gen(3, 1);
        let p = ext_mul(&a1, &a2).unwrap();
        let q = ext_mul(&a2, &a1).unwrap();
        assert_eq!(p, -&q);
        assert_eq!(p.coeff(0b11), Poly::one());
    }

    #[test]
    fn transposition_sign_matches_bubble_sort() {
        // (x1 a2) * (a1 a3) = -x1 a1a2a3
        let u = ExtElement::monomial(3, 0b010, Poly::var(0));
        let v = ExtElement::monomial(3, 0b101, Poly::one());
        let got = ext_mul(&u, &v).unwrap();
        let sign = bubble_sign(&[1, 0, 2]).unwrap();
        assert!(sign, "one transposition expected");
        let expected = ExtElement::monomial(3, 0b111, -&Poly::var(0));
        assert_eq!(got, expected);
    }

    #[test]
    fn merge_sign_matches_bubble_sort_exhaustively() {
        let k = 5usize;
        for a in 0u64..(1 << k) {
            for b in 0u64..(1 << k) {
                if a & b != 0 {
                    continue;
                }
                let list: Vec<usize> = (0..k)
                    .filter(|i| a & (1 << i) != 0)
                    .chain((0..k).filter(|i| b & (1 << i) != 0))
                    .collect();
                assert_eq!(Some(merge_sign(a, b)), bubble_sign(&list), "a={:b} b={:b}", a, b);
            }
        }
    }

    #[test]
    fn left_mult_examples() {
        // left_mult(x1, 1, 1) = x1 a1
        let one = ExtElement::one(2);
        let r = left_mult(&Poly::var(0), 0, &one).unwrap();
        assert_eq!(r, ExtElement::monomial(2, 0b01, Poly::var(0)));
        // left_mult(x1, 1, a1) = 0
        let a1 = gen(2, 0);
        assert!(left_mult(&Poly::var(0), 0, &a1).unwrap().is_zero());
        // left_mult(x1, 2, a1) = -x1 a1a2
        let r = left_mult(&Poly::var(0), 1, &a1).unwrap();
        assert_eq!(r, ExtElement::monomial(2, 0b11, -&Poly::var(0)));
    }

    #[test]
    fn left_mult_squares_to_zero() {
        for mask in 0u64..8 {
            let v = ExtElement::monomial(3, mask, Poly::one());
            let once = left_mult(&Poly::var(1), 2, &v).unwrap();
            let twice = left_mult(&Poly::var(1), 2, &once).unwrap();
            assert!(twice.is_zero());
        }
    }

    #[test]
    fn mismatched_ambient_rejected() {
        let u = ExtElement::one(2);
        let v = ExtElement::one(3);
        assert!(ext_mul(&u, &v).is_err());
    }
}
