use std::collections::{BTreeMap, BTreeSet};

use crate::algebra::Poly;
use crate::error::{Error, Result};

use super::{EdgeId, MarkedDiagram};

/// One step of a circle traversal: an edge, or a passage through a smoothed
/// crossing entering at position `enter` and leaving at its pairing partner.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum TrailStep {
    Edge(EdgeId),
    Corner { crossing: usize, enter: u8, exit: u8 },
}

#[derive(Clone, Debug)]
pub struct Circle {
    pub edges: BTreeSet<EdgeId>,
    pub min_edge: EdgeId,
    pub trail: Vec<TrailStep>,
}

/// The oriented surgery arc at a crossing of a complete resolution. The tail
/// strand occupies positions {tail_anchor, tail_anchor+1}, the head strand the
/// opposite pair; surgery along the arc flips the crossing's resolution bit.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SurgeryArc {
    pub crossing: usize,
    pub tail_anchor: u8,
}

impl SurgeryArc {
    pub fn tail_strand(&self) -> (u8, u8) {
        (self.tail_anchor, (self.tail_anchor + 1) % 4)
    }

    pub fn head_strand(&self) -> (u8, u8) {
        ((self.tail_anchor + 2) % 4, (self.tail_anchor + 3) % 4)
    }
}

/// A cube vertex: the complete resolution of the diagram at a bit vector.
#[derive(Clone, Debug)]
pub struct Resolution {
    pub bits: u64,
    pub n: usize,
    pub circles: Vec<Circle>,
    /// per crossing, per position: index of the circle through that corner
    circle_of_corner: Vec<[usize; 4]>,
    circle_of_edge: BTreeMap<EdgeId, usize>,
}

impl Resolution {
    pub fn bit(&self, c: usize) -> u8 {
        ((self.bits >> c) & 1) as u8
    }

    pub fn weight(&self) -> u32 {
        self.bits.count_ones()
    }

    pub fn circle_count(&self) -> usize {
        self.circles.len()
    }

    pub fn circle_at_corner(&self, c: usize, p: u8) -> usize {
        self.circle_of_corner[c][(p % 4) as usize]
    }

    pub fn circle_of_edge(&self, e: EdgeId) -> Option<usize> {
        self.circle_of_edge.get(&e).copied()
    }

    /// The resolution's own oriented surgery arc at crossing `c`.
    pub fn arc(&self, d: &MarkedDiagram, c: usize) -> SurgeryArc {
        SurgeryArc { crossing: c, tail_anchor: d.arc_tail_anchor(c, self.bit(c)) }
    }

    /// Circles touched by the arc at its tail and head strands.
    pub fn arc_circles(&self, arc: &SurgeryArc) -> (usize, usize) {
        let (t, _) = arc.tail_strand();
        let (h, _) = arc.head_strand();
        (
            self.circle_at_corner(arc.crossing, t),
            self.circle_at_corner(arc.crossing, h),
        )
    }
}

impl MarkedDiagram {
    /// Pairing partner of position `p` at crossing `c` under resolution bit `r`.
    pub fn smoothing_partner(&self, c: usize, r: u8, p: u8) -> u8 {
        let q = self.pairing_parity(c, r);
        let rel = (p + 4 - q) % 4;
        (q + (rel ^ 1)) % 4
    }

    /// Trace the complete resolution at the bit vector `bits`.
    pub fn resolve(&self, bits: u64) -> Resolution {
        let n = self.n();
        assert!(n <= 64, "at most 64 crossings supported");
        let mut circle_of_corner = vec![[usize::MAX; 4]; n];
        let mut circle_of_edge: BTreeMap<EdgeId, usize> = BTreeMap::new();
        let mut circles: Vec<Circle> = Vec::new();
        let mut visited: BTreeSet<EdgeId> = BTreeSet::new();

        for &start in self.edges() {
            if visited.contains(&start) {
                continue;
            }
            if self.slots_of(start).is_empty() {
                // free loop
                visited.insert(start);
                let idx = circles.len();
                circle_of_edge.insert(start, idx);
                circles.push(Circle {
                    edges: BTreeSet::from([start]),
                    min_edge: start,
                    trail: vec![TrailStep::Edge(start)],
                });
                continue;
            }
            let idx = circles.len();
            let mut trail = Vec::new();
            let mut edges = BTreeSet::new();
            let mut e = start;
            let mut from = self.slots_of(start)[0];
            loop {
                visited.insert(e);
                edges.insert(e);
                circle_of_edge.insert(e, idx);
                trail.push(TrailStep::Edge(e));
                let to = self.opposite_slot(e, from);
                let (c, p) = to;
                let r = ((bits >> c) & 1) as u8;
                let exit = self.smoothing_partner(c, r, p);
                trail.push(TrailStep::Corner { crossing: c, enter: p, exit });
                circle_of_corner[c][p as usize] = idx;
                circle_of_corner[c][exit as usize] = idx;
                e = self.crossings()[c].ends[exit as usize];
                from = (c, exit);
                if e == start {
                    // each edge-end is consumed exactly once, so the walk can
                    // only return to the start edge at its original slot
                    debug_assert_eq!(from, self.slots_of(start)[0]);
                    break;
                }
            }
            circles.push(Circle { edges: edges.clone(), min_edge: start, trail });
        }

        Resolution { bits, n, circles, circle_of_corner, circle_of_edge }
    }

    /// Per-circle weights: the sum of the variables of the marks on each circle.
    pub fn circle_weights(&self, r: &Resolution) -> Vec<Poly> {
        let by_edge = self.marks_by_edge();
        let mut weights = vec![Poly::zero(); r.circle_count()];
        for (&e, vars) in &by_edge {
            let Some(ci) = r.circle_of_edge(e) else { continue };
            for &v in vars {
                weights[ci] += &Poly::var(v);
            }
        }
        weights
    }

    /// All bit vectors whose resolution is a single circle.
    pub fn connected_vertices(&self) -> Vec<u64> {
        let n = self.n();
        (0u64..1 << n)
            .filter(|&bits| self.resolve(bits).circle_count() == 1)
            .collect()
    }

    /// The circle index carrying the basepoint, if one is set.
    pub fn basepoint_circle(&self, r: &Resolution) -> Result<usize> {
        let b = self
            .basepoint()
            .ok_or_else(|| Error::input("no basepoint set"))?;
        r.circle_of_edge(b)
            .ok_or_else(|| Error::internal(format!("basepoint edge {} not on any circle", b)))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus;

    /// Independent circle-count oracle: union-find on edge-ends.
    fn circle_count_union_find(d: &MarkedDiagram, bits: u64) -> usize {
        #[derive(Clone)]
        struct Uf(Vec<usize>);
        impl Uf {
            fn find(&mut self, x: usize) -> usize {
                if self.0[x] != x {
                    let r = self.find(self.0[x]);
                    self.0[x] = r;
                }
                self.0[x]
            }
            fn union(&mut self, a: usize, b: usize) {
                let (ra, rb) = (self.find(a), self.find(b));
                self.0[ra] = rb;
            }
        }
        // nodes: one per crossing slot
        let n = d.n();
        let mut uf = Uf((0..4 * n).collect());
        let slot_id = |c: usize, p: u8| 4 * c + p as usize;
        for &e in d.edges() {
            let ss = d.slots_of(e);
            if ss.len() == 2 {
                uf.union(slot_id(ss[0].0, ss[0].1), slot_id(ss[1].0, ss[1].1));
            }
        }
        for c in 0..n {
            let r = ((bits >> c) & 1) as u8;
            for p in 0..4u8 {
                let q = d.smoothing_partner(c, r, p);
                uf.union(slot_id(c, p), slot_id(c, q));
            }
        }
        let mut roots = BTreeSet::new();
        for x in 0..4 * n {
            roots.insert(uf.find(x));
        }
        roots.len() + d.free_loops().len()
    }

    #[test]
    fn kink_resolutions() {
        let d = corpus::unknot_one();
        assert_eq!(d.resolve(0).circle_count(), 2);
        assert_eq!(d.resolve(1).circle_count(), 1);
    }

    #[test]
    fn trefoil_circle_counts_match_union_find_oracle() {
        let d = corpus::trefoil();
        for bits in 0u64..8 {
            let got = d.resolve(bits).circle_count();
            assert_eq!(got, circle_count_union_find(&d, bits), "bits={:03b}", bits);
        }
        // all-0 resolution of the positive braid closure is the Seifert state
        assert_eq!(d.resolve(0).circle_count(), 2);
    }

    #[test]
    fn corpus_circle_counts_match_union_find_oracle() {
        for (name, d) in corpus::corpus_diagrams() {
            for bits in 0u64..(1 << d.n()) {
                assert_eq!(
                    d.resolve(bits).circle_count(),
                    circle_count_union_find(&d, bits),
                    "{} bits={:b}",
                    name,
                    bits
                );
            }
        }
    }

    #[test]
    fn flipping_one_bit_changes_circle_count_by_one() {
        for d in corpus::random_diagrams(11, 20, 5) {
            let n = d.n();
            for bits in 0u64..(1 << n) {
                let k = d.resolve(bits).circle_count() as i64;
                for c in 0..n {
                    let k2 = d.resolve(bits ^ (1 << c)).circle_count() as i64;
                    assert_eq!((k - k2).abs(), 1);
                }
            }
        }
    }

    #[test]
    fn weights_sum_to_all_marks() {
        let d = corpus::trefoil().auto_marked().unwrap();
        for bits in 0u64..8 {
            let r = d.resolve(bits);
            let ws = d.circle_weights(&r);
            let mut total = Poly::zero();
            for w in &ws {
                total += w;
            }
            let mut expect = Poly::zero();
            for v in 0..d.marks().len() {
                expect += &Poly::var(v);
            }
            assert_eq!(total, expect, "bits={:03b}", bits);
        }
    }

    #[test]
    fn kink_weights_example() {
        // marks x1 on the kink loop edge, x2 on another edge; in the
        // 0-resolution each mark sits on its own circle
        let d = corpus::unknot_one();
        // the loop edge is the one whose both slots share the crossing
        let loop_edge = *d
            .edges()
            .iter()
            .find(|&&e| {
                let ss = d.slots_of(e);
                ss[0].0 == ss[1].0
            })
            .unwrap();
        let other = *d.edges().iter().find(|&&e| e != loop_edge).unwrap();
        let d = d
            .with_marks(vec![
                crate::diagram::Mark { id: "x1".into(), edge: loop_edge },
                crate::diagram::Mark { id: "x2".into(), edge: other },
            ])
            .unwrap();
        let r = d.resolve(0);
        assert_eq!(r.circle_count(), 2);
        let ws = d.circle_weights(&r);
        let mut sorted: Vec<String> = ws.iter().map(|w| w.to_string()).collect();
        sorted.sort();
        assert_eq!(sorted, vec!["x1".to_string(), "x2".to_string()]);
    }

    #[test]
    fn connected_vertices_kink() {
        let d = corpus::unknot_one();
        assert_eq!(d.connected_vertices(), vec![1]);
    }

    #[test]
    fn resolve_is_deterministic() {
        let d = corpus::figure_eight();
        for bits in 0u64..16 {
            let a = d.resolve(bits);
            let b = d.resolve(bits);
            assert_eq!(a.circles.len(), b.circles.len());
            for (x, y) in a.circles.iter().zip(&b.circles) {
                assert_eq!(x.trail, y.trail);
            }
        }
    }

    #[test]
    fn free_loop_is_its_own_circle() {
        let d = corpus::unknot_zero();
        let r = d.resolve(0);
        assert_eq!(r.circle_count(), 1);
        assert_eq!(r.circles[0].min_edge, 0);
    }
}
