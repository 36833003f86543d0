use std::collections::BTreeMap;

use num_bigint::BigInt;

use crate::algebra::IntMatrix;
use crate::error::{Error, Result};

use super::{MarkedDiagram, Slot};

/// Checkerboard graph of a connected diagram: one vertex per shaded region,
/// one signed edge per crossing.
#[derive(Clone, Debug)]
pub struct TaitGraph {
    /// number of shaded regions
    pub vertex_count: usize,
    /// per crossing: (shaded face, shaded face, sign)
    pub edges: Vec<(usize, usize, i8)>,
    /// total number of faces of the diagram (shaded + unshaded)
    pub face_count: usize,
}

impl TaitGraph {
    /// Number of spanning trees by the matrix-tree theorem (exact integers).
    pub fn spanning_tree_count(&self) -> BigInt {
        if self.vertex_count == 0 {
            return BigInt::from(0);
        }
        if self.vertex_count == 1 {
            // every edge is a self-loop; the empty tree is the only one
            return BigInt::from(1);
        }
        let n = self.vertex_count - 1;
        let mut lap = IntMatrix::new(n, n);
        for &(a, b, _) in &self.edges {
            if a == b {
                continue;
            }
            for (i, j) in [(a, b), (b, a)] {
                if i < n {
                    lap.add(i, i, &BigInt::from(1));
                    if j < n {
                        lap.add(i, j, &BigInt::from(-1));
                    }
                }
            }
        }
        lap.determinant()
    }
}

impl MarkedDiagram {
    /// Checkerboard-color the faces and build the Tait graph on the shaded
    /// class. The shaded class is the one containing the face on the left of
    /// the lowest-numbered edge directed toward its lexicographically smallest
    /// slot.
    pub fn tait_graph(&self) -> Result<TaitGraph> {
        if self.n() == 0 {
            return Err(Error::input("tait graph requires at least one crossing"));
        }
        if !self.free_loops().is_empty() {
            return Err(Error::input("tait graph requires a connected diagram"));
        }
        let faces = self.faces();
        // every sector (crossing, region between rays p and p+1) -> face index
        let mut face_of_sector: BTreeMap<(usize, u8), usize> = BTreeMap::new();
        // directed edge (edge, to-slot) -> face index
        let mut face_of_directed: BTreeMap<(usize, Slot), usize> = BTreeMap::new();
        for (fi, face) in faces.iter().enumerate() {
            for &(slot, sector) in face {
                let (c, _) = slot;
                face_of_sector.insert((c, sector), fi);
                let e = self.edge_at(slot);
                face_of_directed.insert((e, slot), fi);
            }
        }
        // connectivity: one crossing component expected
        let mut seen_crossings = vec![false; self.n()];
        for ((c, _), _) in face_of_sector.iter() {
            seen_crossings[*c] = true;
        }
        if !seen_crossings.iter().all(|&b| b) {
            return Err(Error::internal("face tracing missed a crossing".to_string()));
        }
        if self.components().len() != 1 {
            // multi-component underlying curve may still be connected as a
            // graph (e.g. a link with every component crossing another), so
            // check graph connectivity directly
            let mut comp: BTreeMap<usize, usize> = BTreeMap::new();
            let mut stack = vec![0usize];
            comp.insert(0, 0);
            while let Some(c) = stack.pop() {
                for &e in &self.crossings()[c].ends {
                    for &(c2, _) in self.slots_of(e) {
                        if !comp.contains_key(&c2) {
                            comp.insert(c2, 0);
                            stack.push(c2);
                        }
                    }
                }
            }
            if comp.len() != self.n() {
                return Err(Error::input("tait graph requires a connected diagram"));
            }
        }

        // two-color faces: faces across an edge get opposite colors
        let mut color: Vec<Option<bool>> = vec![None; faces.len()];
        let mut stack = vec![(0usize, false)];
        while let Some((f, col)) = stack.pop() {
            match color[f] {
                Some(c) if c == col => continue,
                Some(_) => {
                    return Err(Error::input(
                        "faces are not checkerboard colorable".to_string(),
                    ))
                }
                None => color[f] = Some(col),
            }
            for &(slot, _) in &faces[f] {
                // the two sides of edge e are the faces of its two directions
                let e = self.edge_at(slot);
                let other_slot = self.opposite_slot(e, slot);
                let g1 = face_of_directed[&(e, slot)];
                let g2 = face_of_directed[&(e, other_slot)];
                let other = if g1 == f { g2 } else { g1 };
                stack.push((other, !col));
            }
        }
        let color: Vec<bool> = color
            .into_iter()
            .map(|c| c.ok_or_else(|| Error::internal("uncolored face".to_string())))
            .collect::<Result<_>>()?;

        // shaded class: the face left of the minimal edge directed toward its
        // smallest slot
        let min_edge = *self.edges().first().expect("nonempty diagram");
        let min_slot = self.slots_of(min_edge)[0];
        let shaded_color = color[face_of_directed[&(min_edge, min_slot)]];

        let mut shaded_index: BTreeMap<usize, usize> = BTreeMap::new();
        for (fi, &c) in color.iter().enumerate() {
            if c == shaded_color {
                let k = shaded_index.len();
                shaded_index.insert(fi, k);
            }
        }

        let mut edges = Vec::new();
        for c in 0..self.n() {
            let shaded_sectors: Vec<u8> = (0..4u8)
                .filter(|&s| color[face_of_sector[&(c, s)]] == shaded_color)
                .collect();
            if shaded_sectors.len() != 2 || (shaded_sectors[0] + 2) % 4 != shaded_sectors[1] {
                return Err(Error::internal(format!(
                    "crossing {}: shaded sectors not an opposite pair: {:?}",
                    c, shaded_sectors
                )));
            }
            let a = shaded_index[&face_of_sector[&(c, shaded_sectors[0])]];
            let b = shaded_index[&face_of_sector[&(c, shaded_sectors[1])]];
            // sign +1 when the 0-resolution opens the shaded channel: the
            // 0-smoothing merges the sectors of parity (pairing parity + 1)
            let open_parity = (self.pairing_parity(c, 0) + 1) % 2;
            let sign = if shaded_sectors[0] % 2 == open_parity { 1 } else { -1 };
            edges.push((a, b, sign));
        }

        Ok(TaitGraph {
            vertex_count: shaded_index.len(),
            edges,
            face_count: faces.len(),
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus;

    /// Brute-force spanning tree count: enumerate edge subsets.
    fn tree_count_brute(g: &TaitGraph) -> usize {
        let v = g.vertex_count;
        let m = g.edges.len();
        if v == 0 {
            return 0;
        }
        let mut count = 0usize;
        for mask in 0u64..(1 << m) {
            if mask.count_ones() as usize != v - 1 {
                continue;
            }
            // connected and acyclic on v vertices with v-1 edges: check connectivity
            let mut parent: Vec<usize> = (0..v).collect();
            fn find(p: &mut Vec<usize>, x: usize) -> usize {
                if p[x] != x {
                    let r = find(p, p[x]);
                    p[x] = r;
                }
                p[x]
            }
            let mut ok = true;
            for (i, &(a, b, _)) in g.edges.iter().enumerate() {
                if mask & (1 << i) == 0 {
                    continue;
                }
                let (ra, rb) = (find(&mut parent, a), find(&mut parent, b));
                if ra == rb {
                    ok = false; // cycle (includes self-loops)
                    break;
                }
                parent[ra] = rb;
            }
            if ok {
                let root = find(&mut parent, 0);
                if (0..v).all(|x| find(&mut parent, x) == root) {
                    count += 1;
                }
            }
        }
        count
    }

    #[test]
    fn euler_count_of_regions() {
        // faces = n + 2 for a connected diagram
        for (name, d) in corpus::corpus_diagrams() {
            if d.n() == 0 {
                continue;
            }
            let g = d.tait_graph().unwrap();
            assert_eq!(g.face_count, d.n() + 2, "{}", name);
        }
    }

    #[test]
    fn trefoil_has_three_spanning_trees() {
        let g = corpus::trefoil().tait_graph().unwrap();
        assert_eq!(g.spanning_tree_count(), BigInt::from(3));
        assert_eq!(tree_count_brute(&g), 3);
    }

    #[test]
    fn figure_eight_has_five_spanning_trees() {
        let g = corpus::figure_eight().tait_graph().unwrap();
        assert_eq!(g.spanning_tree_count(), BigInt::from(5));
        assert_eq!(tree_count_brute(&g), 5);
    }

    #[test]
    fn kink_has_one_spanning_tree() {
        let g = corpus::unknot_one().tait_graph().unwrap();
        assert_eq!(g.spanning_tree_count(), BigInt::from(1));
    }

    #[test]
    fn known_determinants() {
        // spanning tree count of an alternating knot диагram = determinant
        assert_eq!(
            corpus::cinquefoil().tait_graph().unwrap().spanning_tree_count(),
            BigInt::from(5)
        );
        assert_eq!(
            corpus::five_two().tait_graph().unwrap().spanning_tree_count(),
            BigInt::from(7)
        );
        assert_eq!(
            corpus::hopf_link().tait_graph().unwrap().spanning_tree_count(),
            BigInt::from(2)
        );
    }

    #[test]
    fn matrix_tree_matches_brute_force_on_corpus() {
        for (name, d) in corpus::corpus_diagrams() {
            if d.n() == 0 {
                continue;
            }
            let g = d.tait_graph().unwrap();
            assert_eq!(
                g.spanning_tree_count(),
                BigInt::from(tree_count_brute(&g)),
                "{}",
                name
            );
        }
    }

    #[test]
    fn connected_vertices_match_tree_count() {
        for (name, d) in corpus::corpus_diagrams() {
            if d.n() == 0 || !d.is_knot() {
                continue;
            }
            let g = d.tait_graph().unwrap();
            let trees = g.spanning_tree_count();
            let conn = d.connected_vertices().len();
            assert_eq!(BigInt::from(conn), trees, "{}", name);
        }
    }

    #[test]
    fn disconnected_diagram_rejected() {
        let d = corpus::unknot_zero();
        assert!(d.tait_graph().is_err());
    }
}
