//! Marked oriented link diagrams: parsing, validation, and the planar
//! combinatorics (rotation system, faces, crossing signs) everything else
//! builds on.
//!
//! A crossing records its four incident edge-ends in counterclockwise planar
//! order. `over` is the parity of the positions occupied by the over-strand
//! (`over = 1` matches PD codes, whose first entry is the incoming
//! under-strand). `arrow` picks one of the two orientations of the crossing's
//! surgery arc in the 0-resolution; the arc in the 1-resolution is the same
//! arc rotated 90 degrees counterclockwise.

mod resolution;
mod tait;

pub use resolution::{Circle, Resolution, SurgeryArc, TrailStep};
pub use tait::TaitGraph;

use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub type EdgeId = usize;

/// A crossing slot: (crossing index, position 0..3 in counterclockwise order).
pub type Slot = (usize, u8);

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Crossing {
    pub ends: [EdgeId; 4],
    pub over: u8,
    pub arrow: u8,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Mark {
    pub id: String,
    pub edge: EdgeId,
}

#[derive(Clone, Debug)]
pub struct MarkedDiagram {
    crossings: Vec<Crossing>,
    edges: Vec<EdgeId>,
    free_loops: Vec<EdgeId>,
    marks: Vec<Mark>,
    basepoint: Option<EdgeId>,
    /// edge id -> its two slots, sorted; free loops have no slots
    slots: BTreeMap<EdgeId, Vec<Slot>>,
    /// edge id -> (from slot, to slot) under the traversal orientation
    edge_dir: BTreeMap<EdgeId, (Slot, Slot)>,
    /// components of the underlying curve, as edge cycles in traversal order
    components: Vec<Vec<EdgeId>>,
    n_plus: usize,
    n_minus: usize,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
struct CrossingJson {
    ends: [EdgeId; 4],
    over: u8,
    arrow: u8,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(untagged)]
enum FreeLoopsJson {
    Count(usize),
    List(Vec<EdgeId>),
}

impl Default for FreeLoopsJson {
    fn default() -> Self {
        FreeLoopsJson::Count(0)
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
struct DiagramJson {
    #[serde(default)]
    crossings: Vec<CrossingJson>,
    #[serde(default)]
    marks: Vec<Mark>,
    #[serde(default)]
    basepoint: Option<EdgeId>,
    #[serde(default)]
    free_loops: FreeLoopsJson,
}

impl MarkedDiagram {
    /// Parse and validate the documented JSON format.
    pub fn parse(text: &str) -> Result<MarkedDiagram> {
        let json: DiagramJson = serde_json::from_str(text)
            .map_err(|e| Error::input(format!("malformed diagram JSON: {}", e)))?;
        let crossings: Vec<Crossing> = json
            .crossings
            .iter()
            .map(|c| Crossing { ends: c.ends, over: c.over, arrow: c.arrow })
            .collect();
        let max_edge = crossings
            .iter()
            .flat_map(|c| c.ends.iter().copied())
            .max();
        let free_loops = match json.free_loops {
            FreeLoopsJson::List(ids) => ids,
            FreeLoopsJson::Count(k) => {
                let start = max_edge.map(|m| m + 1).unwrap_or(0);
                (start..start + k).collect()
            }
        };
        MarkedDiagram::new(crossings, free_loops, json.marks, json.basepoint)
    }

    pub fn to_json(&self) -> String {
        let json = DiagramJson {
            crossings: self
                .crossings
                .iter()
                .map(|c| CrossingJson { ends: c.ends, over: c.over, arrow: c.arrow })
                .collect(),
            marks: self.marks.clone(),
            basepoint: self.basepoint,
            free_loops: FreeLoopsJson::List(self.free_loops.clone()),
        };
        serde_json::to_string_pretty(&json).expect("diagram serialization")
    }

    pub fn new(
        crossings: Vec<Crossing>,
        free_loops: Vec<EdgeId>,
        marks: Vec<Mark>,
        basepoint: Option<EdgeId>,
    ) -> Result<MarkedDiagram> {
        for (ci, c) in crossings.iter().enumerate() {
            if c.over > 1 {
                return Err(Error::input(format!(
                    "crossing {}: over must be 0 or 1, got {}",
                    ci, c.over
                )));
            }
            if c.arrow > 1 {
                return Err(Error::input(format!(
                    "crossing {}: arrow must be 0 or 1, got {}",
                    ci, c.arrow
                )));
            }
        }

        // collect slots and check edge multiplicities
        let mut slots: BTreeMap<EdgeId, Vec<Slot>> = BTreeMap::new();
        for (ci, c) in crossings.iter().enumerate() {
            for (p, &e) in c.ends.iter().enumerate() {
                slots.entry(e).or_default().push((ci, p as u8));
            }
        }
        for (e, ss) in &slots {
            if ss.len() != 2 {
                let at: Vec<String> = ss.iter().map(|(c, p)| format!("{}:{}", c, p)).collect();
                return Err(Error::input(format!(
                    "edge multiplicity: edge {} appears {} time(s) (at crossing:position {:?}), expected 2",
                    e,
                    ss.len(),
                    at
                )));
            }
        }
        let loop_set: BTreeSet<EdgeId> = free_loops.iter().copied().collect();
        if loop_set.len() != free_loops.len() {
            return Err(Error::input("duplicate free loop id".to_string()));
        }
        for l in &free_loops {
            if slots.contains_key(l) {
                return Err(Error::input(format!(
                    "free loop id {} collides with a crossing edge",
                    l
                )));
            }
        }

        let mut edges: Vec<EdgeId> = slots.keys().copied().collect();
        edges.extend(free_loops.iter().copied());
        edges.sort_unstable();
        let edge_set: BTreeSet<EdgeId> = edges.iter().copied().collect();

        // marks: distinct ids, each on an existing edge
        let mut seen = BTreeSet::new();
        for m in &marks {
            if !seen.insert(m.id.clone()) {
                return Err(Error::input(format!("duplicate mark id {:?}", m.id)));
            }
            if !edge_set.contains(&m.edge) {
                return Err(Error::input(format!(
                    "mark {:?} placed on unknown edge {}",
                    m.id, m.edge
                )));
            }
        }
        if let Some(b) = basepoint {
            if !edge_set.contains(&b) {
                return Err(Error::input(format!("unknown basepoint edge {}", b)));
            }
        }

        let mut d = MarkedDiagram {
            crossings,
            edges,
            free_loops,
            marks,
            basepoint,
            slots,
            edge_dir: BTreeMap::new(),
            components: Vec::new(),
            n_plus: 0,
            n_minus: 0,
        };
        d.orient()?;
        d.check_planarity()?;
        d.count_signs()?;
        Ok(d)
    }

    pub fn n(&self) -> usize {
        self.crossings.len()
    }

    pub fn crossings(&self) -> &[Crossing] {
        &self.crossings
    }

    pub fn edges(&self) -> &[EdgeId] {
        &self.edges
    }

    pub fn free_loops(&self) -> &[EdgeId] {
        &self.free_loops
    }

    pub fn marks(&self) -> &[Mark] {
        &self.marks
    }

    /// Variable names, one per mark, in variable-index order.
    pub fn mark_names(&self) -> Vec<String> {
        self.marks.iter().map(|m| m.id.clone()).collect()
    }

    pub fn basepoint(&self) -> Option<EdgeId> {
        self.basepoint
    }

    pub fn signed_crossing_counts(&self) -> (usize, usize) {
        (self.n_plus, self.n_minus)
    }

    pub fn slots_of(&self, e: EdgeId) -> &[Slot] {
        self.slots.get(&e).map(|v| v.as_slice()).unwrap_or(&[])
    }

    pub fn edge_at(&self, slot: Slot) -> EdgeId {
        self.crossings[slot.0].ends[slot.1 as usize]
    }

    /// The other slot of edge `e`, given one of its slots.
    pub fn opposite_slot(&self, e: EdgeId, s: Slot) -> Slot {
        let ss = &self.slots[&e];
        if ss[0] == s {
            ss[1]
        } else {
            ss[0]
        }
    }

    pub fn edge_direction(&self, e: EdgeId) -> Option<(Slot, Slot)> {
        self.edge_dir.get(&e).copied()
    }

    /// Edge cycles of the underlying curve components, in traversal order.
    pub fn components(&self) -> &[Vec<EdgeId>] {
        &self.components
    }

    /// Number of link components including free loops.
    pub fn component_count(&self) -> usize {
        self.components.len() + self.free_loops.len()
    }

    pub fn is_knot(&self) -> bool {
        self.component_count() == 1
    }

    /// True if every edge carries at least one mark.
    pub fn fully_marked(&self) -> bool {
        let marked: BTreeSet<EdgeId> = self.marks.iter().map(|m| m.edge).collect();
        self.edges.iter().all(|e| marked.contains(e))
    }

    pub fn with_marks(&self, marks: Vec<Mark>) -> Result<MarkedDiagram> {
        MarkedDiagram::new(
            self.crossings.clone(),
            self.free_loops.clone(),
            marks,
            self.basepoint,
        )
    }

    pub fn with_basepoint(&self, basepoint: Option<EdgeId>) -> Result<MarkedDiagram> {
        MarkedDiagram::new(
            self.crossings.clone(),
            self.free_loops.clone(),
            self.marks.clone(),
            basepoint,
        )
    }

    /// Same diagram with the arrow at crossing `c` reversed.
    pub fn with_arrow_flipped(&self, c: usize) -> Result<MarkedDiagram> {
        let mut crossings = self.crossings.clone();
        crossings[c].arrow ^= 1;
        MarkedDiagram::new(
            crossings,
            self.free_loops.clone(),
            self.marks.clone(),
            self.basepoint,
        )
    }

    /// One mark per edge, named x1..xm in edge order.
    pub fn auto_marked(&self) -> Result<MarkedDiagram> {
        let marks: Vec<Mark> = self
            .edges
            .iter()
            .enumerate()
            .map(|(i, &e)| Mark { id: format!("x{}", i + 1), edge: e })
            .collect();
        self.with_marks(marks)
    }

    /// Relocate every mark to the basepoint edge (keeping names); if there is
    /// no mark at all, a single mark x1 is created there.
    pub fn marks_at_basepoint(&self) -> Result<MarkedDiagram> {
        let b = self
            .basepoint
            .ok_or_else(|| Error::input("marks_at_basepoint requires a basepoint"))?;
        let mut marks: Vec<Mark> = self
            .marks
            .iter()
            .map(|m| Mark { id: m.id.clone(), edge: b })
            .collect();
        if marks.is_empty() {
            marks.push(Mark { id: "x1".to_string(), edge: b });
        }
        self.with_marks(marks)
    }

    /// Traverse every component, fixing an orientation per edge.
    fn orient(&mut self) -> Result<()> {
        let mut directed: BTreeSet<EdgeId> = BTreeSet::new();
        let crossing_edges: Vec<EdgeId> = self.slots.keys().copied().collect();
        for &start in &crossing_edges {
            if directed.contains(&start) {
                continue;
            }
            let mut cycle = Vec::new();
            let mut e = start;
            // direct the starting edge from its first slot to its second
            let mut from = self.slots[&e][0];
            loop {
                let to = self.opposite_slot(e, from);
                if directed.contains(&e) {
                    return Err(Error::internal(format!(
                        "orientation traversal revisited edge {}",
                        e
                    )));
                }
                directed.insert(e);
                self.edge_dir.insert(e, (from, to));
                cycle.push(e);
                // the strand continues straight through the crossing
                let (c, p) = to;
                let p_next = (p + 2) % 4;
                let e_next = self.crossings[c].ends[p_next as usize];
                from = (c, p_next);
                e = e_next;
                if e == start && from == self.slots[&start][0] {
                    break;
                }
                if e == start {
                    // arrived back at the start edge from its other slot: the
                    // start edge would be traversed twice in one direction,
                    // which cannot happen in a 4-valent curve
                    return Err(Error::input(format!(
                        "inconsistent strand structure around edge {}",
                        start
                    )));
                }
            }
            self.components.push(cycle);
        }
        Ok(())
    }

    /// Face tracing over the rotation system; checks the Euler characteristic
    /// of each connected component of the 4-valent graph.
    fn check_planarity(&self) -> Result<()> {
        if self.crossings.is_empty() {
            return Ok(());
        }
        let faces = self.faces();
        // group crossings into connected components via edges
        let mut comp = vec![usize::MAX; self.crossings.len()];
        let mut next = 0usize;
        for c0 in 0..self.crossings.len() {
            if comp[c0] != usize::MAX {
                continue;
            }
            let mut stack = vec![c0];
            comp[c0] = next;
            while let Some(c) = stack.pop() {
                for &e in &self.crossings[c].ends {
                    for &(c2, _) in &self.slots[&e] {
                        if comp[c2] == usize::MAX {
                            comp[c2] = next;
                            stack.push(c2);
                        }
                    }
                }
            }
            next += 1;
        }
        let mut v = vec![0isize; next];
        let mut e = vec![0isize; next];
        let mut f = vec![0isize; next];
        for c in 0..self.crossings.len() {
            v[comp[c]] += 1;
        }
        for (id, ss) in &self.slots {
            let _ = id;
            e[comp[ss[0].0]] += 1;
        }
        for face in &faces {
            f[comp[face[0].0 .0]] += 1;
        }
        for k in 0..next {
            if v[k] - e[k] + f[k] != 2 {
                return Err(Error::input(format!(
                    "rotation system is not planar (component {}: V-E+F = {} - {} + {} != 2)",
                    k, v[k], e[k], f[k]
                )));
            }
        }
        Ok(())
    }

    /// Faces of the diagram's 4-valent graph. Each face is a cyclic list of
    /// (slot arrived at, sector index at that crossing), where sector `p` is
    /// the region between rays `p` and `p+1`. Faces keep the region on the
    /// left of the traversal.
    pub(crate) fn faces(&self) -> Vec<Vec<(Slot, u8)>> {
        // directed edge = (edge, slot it points to)
        let mut seen: BTreeSet<(EdgeId, Slot)> = BTreeSet::new();
        let mut faces = Vec::new();
        let mut all: Vec<(EdgeId, Slot)> = Vec::new();
        for (&e, ss) in &self.slots {
            all.push((e, ss[0]));
            all.push((e, ss[1]));
        }
        all.sort_unstable();
        for &(e0, to0) in &all {
            if seen.contains(&(e0, to0)) {
                continue;
            }
            let mut face = Vec::new();
            let (mut e, mut to) = (e0, to0);
            loop {
                seen.insert((e, to));
                let (c, p) = to;
                face.push((to, p));
                // depart along the next ray counterclockwise
                let p_next = (p + 1) % 4;
                let e_next = self.crossings[c].ends[p_next as usize];
                let to_next = self.opposite_slot(e_next, (c, p_next));
                e = e_next;
                to = to_next;
                if (e, to) == (e0, to0) {
                    break;
                }
            }
            faces.push(face);
        }
        faces
    }

    /// Crossing signs from the traversal orientation.
    fn count_signs(&mut self) -> Result<()> {
        let (mut np, mut nm) = (0usize, 0usize);
        for (ci, c) in self.crossings.iter().enumerate() {
            let outgoing = |p: u8| -> bool {
                let e = c.ends[p as usize];
                self.edge_dir[&e].0 == (ci, p)
            };
            let over_positions = [c.over, c.over + 2];
            let under_positions = [(c.over + 1) % 4, (c.over + 3) % 4];
            let o_out = over_positions
                .into_iter()
                .find(|&p| outgoing(p))
                .ok_or_else(|| Error::internal(format!("crossing {}: no outgoing over end", ci)))?;
            let u_out = under_positions
                .into_iter()
                .find(|&p| outgoing(p))
                .ok_or_else(|| Error::internal(format!("crossing {}: no outgoing under end", ci)))?;
            if (o_out + 1) % 4 == u_out {
                np += 1;
            } else {
                nm += 1;
            }
        }
        self.n_plus = np;
        self.n_minus = nm;
        Ok(())
    }

    /// Pairing parity of the smoothing at crossing `c` under resolution bit
    /// `r`: strands connect positions {q, q+1} and {q+2, q+3}.
    pub fn pairing_parity(&self, c: usize, r: u8) -> u8 {
        (self.crossings[c].over + r + 1) % 2
    }

    /// Tail anchor position of the oriented surgery arc at crossing `c` in a
    /// resolution where the bit at `c` is `r`. The tail strand occupies
    /// positions {t, t+1}; the head strand {t+2, t+3}. Rotating by 90 degrees
    /// counterclockwise adds 1 (and flips the arrow after a half turn).
    pub fn arc_tail_anchor(&self, c: usize, r: u8) -> u8 {
        let x = &self.crossings[c];
        (x.over + 1 + r + 2 * x.arrow) % 4
    }

    /// Variable index of each mark, grouped by edge.
    pub fn marks_by_edge(&self) -> BTreeMap<EdgeId, Vec<usize>> {
        let mut out: BTreeMap<EdgeId, Vec<usize>> = BTreeMap::new();
        for (i, m) in self.marks.iter().enumerate() {
            out.entry(m.edge).or_default().push(i);
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus;

    #[test]
    fn parse_zero_crossing_unknot() {
        let d = MarkedDiagram::parse(
            r#"{"crossings":[],"marks":[{"id":"x1","edge":0}],"basepoint":0,"free_loops":1}"#,
        )
        .unwrap();
        assert_eq!(d.n(), 0);
        assert_eq!(d.free_loops(), &[0]);
        assert_eq!(d.marks().len(), 1);
        assert_eq!(d.component_count(), 1);
    }

    #[test]
    fn parse_trefoil_counts() {
        let d = corpus::trefoil().auto_marked().unwrap();
        assert_eq!(d.n(), 3);
        assert_eq!(d.edges().len(), 6);
        assert_eq!(d.marks().len(), 6);
        assert!(d.is_knot());
    }

    #[test]
    fn edge_multiplicity_error() {
        let text = r#"{"crossings":[{"ends":[1,2,7,2],"over":1,"arrow":0},{"ends":[1,3,3,5],"over":1,"arrow":0}],"marks":[],"basepoint":null,"free_loops":0}"#;
        let err = MarkedDiagram::parse(text).unwrap_err();
        assert!(err.to_string().contains("edge multiplicity"), "{}", err);
    }

    #[test]
    fn unknown_basepoint_error() {
        let text = r#"{"crossings":[],"marks":[],"basepoint":5,"free_loops":1}"#;
        let err = MarkedDiagram::parse(text).unwrap_err();
        assert!(err.to_string().contains("basepoint"), "{}", err);
    }

    #[test]
    fn duplicate_mark_error() {
        let text = r#"{"crossings":[],"marks":[{"id":"x1","edge":0},{"id":"x1","edge":0}],"basepoint":null,"free_loops":1}"#;
        let err = MarkedDiagram::parse(text).unwrap_err();
        assert!(err.to_string().contains("duplicate mark"), "{}", err);
    }

    #[test]
    fn trefoil_is_all_positive() {
        // closure of sigma_1^3 with all-positive letters
        let d = corpus::trefoil();
        assert_eq!(d.signed_crossing_counts(), (3, 0));
    }

    #[test]
    fn figure_eight_signs_split_evenly() {
        let d = corpus::figure_eight();
        let (np, nm) = d.signed_crossing_counts();
        assert_eq!(np + nm, 4);
        assert_eq!(np, 2);
    }

    #[test]
    fn faces_satisfy_euler_formula() {
        for d in [corpus::trefoil(), corpus::figure_eight(), corpus::hopf_link()] {
            let v = d.n() as isize;
            let e = d.edges().len() as isize;
            let f = d.faces().len() as isize;
            assert_eq!(v - e + f, 2);
        }
    }

    #[test]
    fn round_trip_json() {
        let d = corpus::trefoil().auto_marked().unwrap();
        let d2 = MarkedDiagram::parse(&d.to_json()).unwrap();
        assert_eq!(d.crossings(), d2.crossings());
        assert_eq!(d.marks(), d2.marks());
    }
}
