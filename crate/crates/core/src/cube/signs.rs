use std::collections::BTreeMap;

use crate::algebra::Gf2System;
use crate::error::{Error, Result};

/// The four sign cochains of the cube: tau labels edges by kind (split 0,
/// join 1), sigma flips vertical differentials so that split edges keep and
/// join edges flip the endpoint signs, psi labels faces by their naive
/// commutation type, and eps corrects the horizontal maps so that every face
/// anticommutes.
#[derive(Clone, Debug)]
pub struct SignData {
    pub n: usize,
    /// edge (rho, c) with bit c clear -> true for a join (merge)
    pub tau: BTreeMap<(u64, usize), bool>,
    /// per-vertex flip of the vertical differential, sigma(0..0) = 0
    pub sigma: Vec<bool>,
    /// face (rho, i, j) with i < j, both bits clear -> label in Z/2
    pub psi: BTreeMap<(u64, usize, usize), bool>,
    /// edge sign corrections solving delta eps = psi + 1
    pub eps: BTreeMap<(u64, usize), bool>,
}

/// All cube edges (rho, c) with bit c clear, in lexicographic order.
pub fn cube_edges(n: usize) -> Vec<(u64, usize)> {
    let mut edges = Vec::new();
    for rho in 0u64..(1 << n) {
        for c in 0..n {
            if rho & (1 << c) == 0 {
                edges.push((rho, c));
            }
        }
    }
    edges
}

/// All cube faces (rho, i, j), i < j, both bits clear.
pub fn cube_faces(n: usize) -> Vec<(u64, usize, usize)> {
    let mut faces = Vec::new();
    for rho in 0u64..(1 << n) {
        for i in 0..n {
            for j in (i + 1)..n {
                if rho & (1 << i) == 0 && rho & (1 << j) == 0 {
                    faces.push((rho, i, j));
                }
            }
        }
    }
    faces
}

/// Check that `tau` sums to zero around the boundary of every face.
pub fn tau_is_cocycle(n: usize, tau: &BTreeMap<(u64, usize), bool>) -> bool {
    cube_faces(n).into_iter().all(|(rho, i, j)| {
        let sum = tau[&(rho, i)]
            ^ tau[&(rho | (1 << i), j)]
            ^ tau[&(rho, j)]
            ^ tau[&(rho | (1 << j), i)];
        !sum
    })
}

/// Solve delta sigma = tau with sigma(0..0) = 0 by propagating along the
/// lexicographic spanning tree, then verify every edge. The solution is the
/// unique normalized one, so the propagation order cannot matter.
pub fn solve_vertex_signs(
    n: usize,
    tau: &BTreeMap<(u64, usize), bool>,
) -> Result<Vec<bool>> {
    let size = 1usize << n;
    let mut sigma = vec![false; size];
    for rho in 1u64..(size as u64) {
        let low = rho.trailing_zeros() as usize;
        let parent = rho & (rho - 1);
        sigma[rho as usize] = sigma[parent as usize] ^ tau[&(parent, low)];
    }
    for (&(rho, c), &t) in tau {
        let other = rho | (1 << c);
        if sigma[rho as usize] ^ sigma[other as usize] != t {
            return Err(Error::internal(format!(
                "tau is not a coboundary: edge ({:b}, {}) inconsistent",
                rho, c
            )));
        }
    }
    Ok(sigma)
}

/// Check that psi+1 sums to zero over the six faces of every 3-cell.
pub fn psi_plus_one_is_cocycle(n: usize, psi: &BTreeMap<(u64, usize, usize), bool>) -> bool {
    for rho in 0u64..(1 << n) {
        for i in 0..n {
            for j in (i + 1)..n {
                for k in (j + 1)..n {
                    if rho & (1 << i) != 0 || rho & (1 << j) != 0 || rho & (1 << k) != 0 {
                        continue;
                    }
                    // six 2-faces of the 3-cell; psi+1 contributes 6 ones,
                    // which vanish mod 2, so the condition is sum psi = 0
                    let sum = psi[&(rho, i, j)]
                        ^ psi[&(rho, i, k)]
                        ^ psi[&(rho, j, k)]
                        ^ psi[&(rho | (1 << k), i, j)]
                        ^ psi[&(rho | (1 << j), i, k)]
                        ^ psi[&(rho | (1 << i), j, k)];
                    if sum {
                        return false;
                    }
                }
            }
        }
    }
    true
}

/// Solve delta eps = psi + 1 over GF(2), gauge-fixed to vanish on the
/// lexicographic spanning tree of the cube's 1-skeleton (each vertex connects
/// to the vertex with its lowest set bit cleared).
pub fn solve_edge_signs(
    n: usize,
    psi: &BTreeMap<(u64, usize, usize), bool>,
) -> Result<BTreeMap<(u64, usize), bool>> {
    if !psi_plus_one_is_cocycle(n, psi) {
        return Err(Error::internal(
            "psi + 1 is not a cocycle; face classification is inconsistent".to_string(),
        ));
    }
    let edges = cube_edges(n);
    let index: BTreeMap<(u64, usize), usize> =
        edges.iter().enumerate().map(|(k, &e)| (e, k)).collect();
    let mut sys = Gf2System::new(edges.len());
    for (rho, i, j) in cube_faces(n) {
        let vars = [
            index[&(rho, i)],
            index[&(rho | (1 << i), j)],
            index[&(rho, j)],
            index[&(rho | (1 << j), i)],
        ];
        sys.add_equation(&vars, !psi[&(rho, i, j)]);
    }
    // gauge: tree edge of vertex rho != 0 clears its lowest set bit
    for rho in 1u64..(1 << n) {
        let low = rho.trailing_zeros() as usize;
        sys.add_equation(&[index[&(rho & (rho - 1), low)]], false);
    }
    let solution = sys
        .solve()
        .ok_or_else(|| Error::internal("edge sign system is inconsistent".to_string()))?;
    let eps: BTreeMap<(u64, usize), bool> = edges
        .iter()
        .map(|&e| (e, solution[index[&e]]))
        .collect();
    // verify the coboundary condition exactly
    for (rho, i, j) in cube_faces(n) {
        let sum = eps[&(rho, i)]
            ^ eps[&(rho | (1 << i), j)]
            ^ eps[&(rho, j)]
            ^ eps[&(rho | (1 << j), i)];
        if sum == psi[&(rho, i, j)] {
            return Err(Error::internal(format!(
                "delta eps != psi + 1 on face ({:b}, {}, {})",
                rho, i, j
            )));
        }
    }
    Ok(eps)
}
