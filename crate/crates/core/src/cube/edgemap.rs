use std::fmt;

use crate::algebra::{ext_mul, ExtElement, Poly};
use crate::diagram::{MarkedDiagram, Resolution, SurgeryArc};
use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum EdgeKind {
    Merge,
    Split,
}

impl fmt::Display for EdgeKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            EdgeKind::Merge => write!(f, "merge"),
            EdgeKind::Split => write!(f, "split"),
        }
    }
}

/// The naive (uncorrected) map induced by surgery along an oriented arc.
///
/// A merge is the ring quotient identifying the two merged circle generators.
/// A split sends x to (b - c) ^ x~, where x~ relabels the split circle to b
/// and (b, c) is ordered by the arc's arrow: b is the circle to the left of
/// the oriented arc. Passive circles relabel with Koszul signs.
#[derive(Clone, Debug)]
pub struct NaiveMap {
    pub kind: EdgeKind,
    pub src_k: usize,
    pub dst_k: usize,
    relabel: Vec<usize>,
    /// (b, c) target circle indices, splits only
    pub split_labels: Option<(usize, usize)>,
}

impl NaiveMap {
    /// Image of a single exterior monomial; coefficient is +-1 or 0.
    pub fn apply_monomial(&self, mask: u64) -> ExtElement {
        let mut out_mask = 0u64;
        let mut sign = false;
        for i in 0..self.src_k {
            if mask & (1 << i) == 0 {
                continue;
            }
            let j = self.relabel[i];
            let bit = 1u64 << j;
            if out_mask & bit != 0 {
                // both merged generators present: a ^ a = 0 in the quotient
                return ExtElement::zero(self.dst_k);
            }
            // appending a_j to the right of the accumulated product hops it
            // over every larger generator already present
            if (out_mask >> (j + 1)).count_ones() % 2 == 1 {
                sign = !sign;
            }
            out_mask |= bit;
        }
        let coeff = if sign { Poly::from_i64(-1) } else { Poly::one() };
        let relabeled = ExtElement::monomial(self.dst_k, out_mask, coeff);
        match self.split_labels {
            None => relabeled,
            Some((b, c)) => {
                let factor = &ExtElement::generator(self.dst_k, b)
                    - &ExtElement::generator(self.dst_k, c);
                ext_mul(&factor, &relabeled).expect("ambient dimensions agree")
            }
        }
    }

    pub fn apply(&self, v: &ExtElement) -> ExtElement {
        let mut out = ExtElement::zero(self.dst_k);
        for (mask, coeff) in v.terms() {
            out += &self.apply_monomial(mask).scale_poly(coeff);
        }
        out
    }
}

/// Build the naive map for surgery along `arc` from `src` to `dst`.
/// `dst` must be the resolution with the arc's crossing bit flipped.
pub fn naive_map(
    _d: &MarkedDiagram,
    src: &Resolution,
    dst: &Resolution,
    arc: &SurgeryArc,
) -> Result<NaiveMap> {
    let c = arc.crossing;
    if dst.bits != src.bits ^ (1 << c) {
        return Err(Error::internal(format!(
            "resolutions {:b} and {:b} are not adjacent at crossing {}",
            src.bits, dst.bits, c
        )));
    }
    let (t, _) = arc.tail_strand();
    let (cu, cv) = src.arc_circles(arc);

    // passive circles keep their edge sets; match them by minimal edge
    let mut dst_by_min = std::collections::BTreeMap::new();
    for (j, circ) in dst.circles.iter().enumerate() {
        dst_by_min.insert(circ.min_edge, j);
    }
    let find_passive = |i: usize| -> Result<usize> {
        dst_by_min
            .get(&src.circles[i].min_edge)
            .copied()
            .ok_or_else(|| Error::internal(format!("passive circle {} lost under surgery", i)))
    };

    let src_k = src.circle_count();
    let dst_k = dst.circle_count();
    let mut relabel = vec![usize::MAX; src_k];

    if cu != cv {
        // merge
        if dst_k + 1 != src_k {
            return Err(Error::internal("merge did not decrease circle count".to_string()));
        }
        let w = dst.circle_at_corner(c, t);
        for i in 0..src_k {
            relabel[i] = if i == cu || i == cv { w } else { find_passive(i)? };
        }
        Ok(NaiveMap { kind: EdgeKind::Merge, src_k, dst_k, relabel, split_labels: None })
    } else {
        // split: b is the circle left of the oriented arc
        if dst_k != src_k + 1 {
            return Err(Error::internal("split did not increase circle count".to_string()));
        }
        let b = dst.circle_at_corner(c, (t + 3) % 4);
        let cc = dst.circle_at_corner(c, (t + 1) % 4);
        if b == cc {
            return Err(Error::internal("split produced a single circle".to_string()));
        }
        for i in 0..src_k {
            relabel[i] = if i == cu { b } else { find_passive(i)? };
        }
        Ok(NaiveMap {
            kind: EdgeKind::Split,
            src_k,
            dst_k,
            relabel,
            split_labels: Some((b, cc)),
        })
    }
}

/// Forward map of the cube edge at crossing `c` (bit 0 -> 1): surgery along
/// the source resolution's own arc.
pub fn forward_map(
    d: &MarkedDiagram,
    src: &Resolution,
    dst: &Resolution,
    c: usize,
) -> Result<NaiveMap> {
    if src.bit(c) != 0 {
        return Err(Error::internal(format!("forward map needs bit {} = 0", c)));
    }
    let arc = src.arc(d, c);
    naive_map(d, src, dst, &arc)
}

/// Backward map at crossing `c` (bit 1 -> 0): surgery along the source
/// resolution's own arc, whose orientation is the forward arc rotated 90
/// degrees counterclockwise.
pub fn backward_map(
    d: &MarkedDiagram,
    src: &Resolution,
    dst: &Resolution,
    c: usize,
) -> Result<NaiveMap> {
    if src.bit(c) != 1 {
        return Err(Error::internal(format!("backward map needs bit {} = 1", c)));
    }
    let arc = src.arc(d, c);
    naive_map(d, src, dst, &arc)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus;

    /// 1-crossing unknot: 0-resolution has 2 circles, the edge is a join.
    #[test]
    fn kink_edge_is_merge() {
        let d = corpus::unknot_one();
        let r0 = d.resolve(0);
        let r1 = d.resolve(1);
        let m = forward_map(&d, &r0, &r1, 0).unwrap();
        assert_eq!(m.kind, EdgeKind::Merge);
        // merge of b,c into a: bc -> 0
        assert!(m.apply_monomial(0b11).is_zero());
        // 1 -> 1
        assert_eq!(m.apply_monomial(0), ExtElement::one(1));
        // generators map to the merged generator
        assert_eq!(m.apply_monomial(0b01), ExtElement::generator(1, 0));
        assert_eq!(m.apply_monomial(0b10), ExtElement::generator(1, 0));
    }

    #[test]
    fn split_sends_one_to_b_minus_c_and_a_to_bc() {
        let d = corpus::unknot_one();
        let r1 = d.resolve(1);
        let r0 = d.resolve(0);
        // going 1 -> 0 splits the single circle
        let m = backward_map(&d, &r1, &r0, 0).unwrap();
        assert_eq!(m.kind, EdgeKind::Split);
        let (b, c) = m.split_labels.unwrap();
        let img1 = m.apply_monomial(0);
        let expect =
            &ExtElement::generator(2, b) - &ExtElement::generator(2, c);
        assert_eq!(img1, expect, "1 -> b - c");
        let img_a = m.apply_monomial(0b1);
        assert_eq!(
            img_a,
            ExtElement::monomial(2, 0b11, Poly::one()),
            "a -> bc"
        );
    }

    #[test]
    fn passive_relabel_carries_koszul_signs() {
        // trefoil edge from (0,0,0) (2 circles) along crossing 0
        let d = corpus::trefoil();
        let r0 = d.resolve(0);
        let r1 = d.resolve(1);
        let m = forward_map(&d, &r0, &r1, 0).unwrap();
        // whatever the kind, applying to every monomial must give coefficient
        // entries in {0, +-1} and respect exterior degree
        let deg_shift = match m.kind {
            EdgeKind::Merge => 0i64,
            EdgeKind::Split => 1,
        };
        for mask in 0u64..(1 << r0.circle_count()) {
            let img = m.apply_monomial(mask);
            for (mm, p) in img.terms() {
                assert_eq!(
                    mm.count_ones() as i64 - mask.count_ones() as i64,
                    deg_shift
                );
                let c = p.as_constant().unwrap();
                assert!(c.magnitude() <= &1u32.into());
            }
        }
    }

    #[test]
    fn surgery_round_trip_restores_circles() {
        // surgery along an arc then along the induced arc in the new
        // resolution returns to the original circle structure
        for (_, d) in corpus::corpus_diagrams() {
            for bits in 0u64..(1 << d.n()) {
                let r = d.resolve(bits);
                for c in 0..d.n() {
                    let flipped = bits ^ (1 << c);
                    let r2 = d.resolve(flipped);
                    let back = d.resolve(flipped ^ (1 << c));
                    assert_eq!(r.circle_count(), back.circle_count());
                    let fwd = naive_map(&d, &r, &r2, &r.arc(&d, c)).unwrap();
                    let bwd = naive_map(&d, &r2, &back, &r2.arc(&d, c)).unwrap();
                    assert!(matches!(
                        (fwd.kind, bwd.kind),
                        (EdgeKind::Merge, EdgeKind::Split) | (EdgeKind::Split, EdgeKind::Merge)
                    ));
                }
            }
        }
    }
}
