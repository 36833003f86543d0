//! The twisted complex: per-vertex exterior modules over Z[x], the
//! sign-corrected horizontal differential, the sign-flipped vertical
//! differential, and the delta-grading making both homogeneous of degree -2.

mod edgemap;
mod faces;
mod signs;

pub use edgemap::{backward_map, forward_map, naive_map, EdgeKind, NaiveMap};
pub use faces::{classify_face, classify_square, FaceType};
pub use signs::{
    cube_edges, cube_faces, psi_plus_one_is_cocycle, solve_edge_signs, solve_vertex_signs,
    tau_is_cocycle, SignData,
};

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_rational::BigRational;
use serde_json::json;

use crate::algebra::{ExtElement, Poly};
use crate::diagram::{MarkedDiagram, Resolution};
use crate::error::{Error, Result};
use crate::homology::{GenInfo, GradedComplex};

#[derive(Clone, Debug)]
pub struct VertexData {
    pub rho: u64,
    pub resolution: Resolution,
    pub weights: Vec<Poly>,
    pub sigma: bool,
    pub basepoint_circle: Option<usize>,
    /// exterior monomials in graded-lexicographic order (reduced bases omit
    /// the basepoint circle)
    pub basis: Vec<u64>,
    pub basis_index: BTreeMap<u64, usize>,
    pub delta: Vec<i64>,
    pub offset: usize,
}

#[derive(Clone, Debug)]
pub struct EdgeData {
    pub from: u64,
    pub to: u64,
    pub crossing: usize,
    pub kind: EdgeKind,
    pub eps: bool,
    /// naive image of each source basis monomial, projected to the reduced
    /// quotient when the complex is reduced (the eps sign is not applied)
    pub images: Vec<ExtElement>,
}

#[derive(Clone, Debug)]
pub struct TwistedComplex {
    pub diagram: MarkedDiagram,
    pub reduced: bool,
    pub n: usize,
    pub vertices: Vec<VertexData>,
    pub edges: Vec<EdgeData>,
    pub psi: BTreeMap<(u64, usize, usize), bool>,
    pub tau: BTreeMap<(u64, usize), bool>,
    pub total_dim: usize,
}

/// Sort masks by exterior degree, then lexicographically on the ascending
/// generator lists.
pub fn monomial_order(a: u64, b: u64) -> std::cmp::Ordering {
    a.count_ones().cmp(&b.count_ones()).then_with(|| {
        // compare index lists: the first differing generator decides
        let (mut x, mut y) = (a, b);
        while x != 0 && y != 0 {
            let (i, j) = (x.trailing_zeros(), y.trailing_zeros());
            match i.cmp(&j) {
                std::cmp::Ordering::Equal => {
                    x &= x - 1;
                    y &= y - 1;
                }
                ord => return ord,
            }
        }
        std::cmp::Ordering::Equal
    })
}

pub fn render_monomial(mask: u64, k: usize) -> String {
    if mask == 0 {
        return "1".to_string();
    }
    (0..k)
        .filter(|i| mask & (1 << i) != 0)
        .map(|i| format!("a{}", i + 1))
        .collect::<Vec<_>>()
        .join("")
}

pub fn parse_monomial_name(name: &str, k: usize) -> Result<u64> {
    if name == "1" {
        return Ok(0);
    }
    let mut mask = 0u64;
    for part in name.split('a').filter(|s| !s.is_empty()) {
        let i: usize = part
            .parse()
            .map_err(|_| Error::input(format!("bad monomial {:?}", name)))?;
        if i == 0 || i > k {
            return Err(Error::input(format!("generator a{} out of range", i)));
        }
        mask |= 1 << (i - 1);
    }
    Ok(mask)
}

/// The vertical differential on one vertex: (-1)^sigma sum_i w_i a_i ^ (.),
/// with basepoint-circle terms dropped in the reduced quotient.
pub fn vertical_image(
    weights: &[Poly],
    sigma: bool,
    mask: u64,
    basepoint_circle: Option<usize>,
) -> ExtElement {
    let k = weights.len();
    let mut out = ExtElement::zero(k);
    for (i, w) in weights.iter().enumerate() {
        if w.is_zero() || mask & (1 << i) != 0 {
            continue;
        }
        if Some(i) == basepoint_circle {
            continue; // lands in the killed submodule
        }
        // a_i hops over the smaller generators already in the monomial
        let below = (mask & ((1u64 << i) - 1)).count_ones();
        let coeff = if (below % 2 == 1) ^ sigma { -w } else { w.clone() };
        out.add_term(mask | (1 << i), &coeff);
    }
    out
}

impl TwistedComplex {
    pub fn build(d: &MarkedDiagram, reduced: bool) -> Result<TwistedComplex> {
        Self::build_with_jobs(d, reduced, 1)
    }

    pub fn build_with_jobs(d: &MarkedDiagram, reduced: bool, jobs: usize) -> Result<TwistedComplex> {
        let n = d.n();
        if n > 16 {
            return Err(Error::input(format!("{} crossings is beyond desk scale", n)));
        }
        if reduced && d.basepoint().is_none() {
            return Err(Error::input("reduced complex requires a basepoint".to_string()));
        }
        let (n_plus, _) = d.signed_crossing_counts();
        let size = 1usize << n;

        let resolutions: Vec<Resolution> = if jobs > 1 {
            use rayon::prelude::*;
            let pool = rayon::ThreadPoolBuilder::new()
                .num_threads(jobs)
                .build()
                .map_err(|e| Error::internal(format!("thread pool: {}", e)))?;
            pool.install(|| (0..size as u64).into_par_iter().map(|rho| d.resolve(rho)).collect())
        } else {
            (0..size as u64).map(|rho| d.resolve(rho)).collect()
        };

        // tau and sigma
        let mut tau: BTreeMap<(u64, usize), bool> = BTreeMap::new();
        for (rho, c) in cube_edges(n) {
            let k0 = resolutions[rho as usize].circle_count();
            let k1 = resolutions[(rho | (1 << c)) as usize].circle_count();
            let join = match k1 as i64 - k0 as i64 {
                -1 => true,
                1 => false,
                _ => {
                    return Err(Error::internal(format!(
                        "edge ({:b}, {}) changes circle count by {}",
                        rho,
                        c,
                        k1 as i64 - k0 as i64
                    )))
                }
            };
            tau.insert((rho, c), join);
        }
        let sigma = solve_vertex_signs(n, &tau)?;

        // face classification and edge signs
        let mut psi: BTreeMap<(u64, usize, usize), bool> = BTreeMap::new();
        let mut face_types: BTreeMap<(u64, usize, usize), FaceType> = BTreeMap::new();
        for (rho, i, j) in cube_faces(n) {
            let r00 = &resolutions[rho as usize];
            let arc_a = r00.arc(d, i);
            let arc_b = r00.arc(d, j);
            let t = classify_square(d, r00, &arc_a, &arc_b)?;
            face_types.insert((rho, i, j), t);
            psi.insert((rho, i, j), t.label());
        }
        let eps = solve_edge_signs(n, &psi)?;

        // vertices
        let mut vertices = Vec::with_capacity(size);
        let mut offset = 0usize;
        for rho in 0..size as u64 {
            let resolution = resolutions[rho as usize].clone();
            let weights = d.circle_weights(&resolution);
            let k = resolution.circle_count();
            let basepoint_circle = if reduced {
                Some(d.basepoint_circle(&resolution)?)
            } else {
                None
            };
            let mut basis: Vec<u64> = (0u64..(1 << k))
                .filter(|m| match basepoint_circle {
                    Some(p) => m & (1 << p) == 0,
                    None => true,
                })
                .collect();
            basis.sort_by(|&a, &b| monomial_order(a, b));
            let basis_index: BTreeMap<u64, usize> =
                basis.iter().enumerate().map(|(i, &m)| (m, i)).collect();
            let delta: Vec<i64> = basis
                .iter()
                .map(|m| {
                    k as i64 - 2 * m.count_ones() as i64 - rho.count_ones() as i64
                        + n_plus as i64
                })
                .collect();
            let dim = basis.len();
            vertices.push(VertexData {
                rho,
                resolution,
                weights,
                sigma: sigma[rho as usize],
                basepoint_circle,
                basis,
                basis_index,
                delta,
                offset,
            });
            offset += dim;
        }
        let total_dim = offset;

        // edges with naive images on the chosen bases
        let mut edges = Vec::new();
        for (rho, c) in cube_edges(n) {
            let to = rho | (1 << c);
            let src = &vertices[rho as usize];
            let dst = &vertices[to as usize];
            let map = forward_map(d, &src.resolution, &dst.resolution, c)?;
            if reduced {
                check_descent(&map, src, dst)?;
            }
            let images: Vec<ExtElement> = src
                .basis
                .iter()
                .map(|&m| project(map.apply_monomial(m), dst.basepoint_circle))
                .collect();
            edges.push(EdgeData {
                from: rho,
                to,
                crossing: c,
                kind: map.kind,
                eps: eps[&(rho, c)],
                images,
            });
        }

        let complex = TwistedComplex {
            diagram: d.clone(),
            reduced,
            n,
            vertices,
            edges,
            psi,
            tau,
            total_dim,
        };
        complex.verify_structure()?;
        Ok(complex)
    }

    pub fn vertex(&self, rho: u64) -> &VertexData {
        &self.vertices[rho as usize]
    }

    pub fn face_type(&self, rho: u64, i: usize, j: usize) -> Result<FaceType> {
        classify_face(&self.diagram, rho, i, j)
    }

    pub fn gen_index(&self, rho: u64, mask: u64) -> Option<usize> {
        let v = &self.vertices[rho as usize];
        v.basis_index.get(&mask).map(|&p| v.offset + p)
    }

    /// (vertex, mask, delta) of a global generator index.
    pub fn gen_data(&self, g: usize) -> (u64, u64, i64) {
        // vertices have contiguous offsets in rho order
        let mut lo = 0usize;
        let mut hi = self.vertices.len();
        while lo + 1 < hi {
            let mid = (lo + hi) / 2;
            if self.vertices[mid].offset <= g {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        let v = &self.vertices[lo];
        let pos = g - v.offset;
        (v.rho, v.basis[pos], v.delta[pos])
    }

    fn ext_to_entries(&self, rho: u64, elt: &ExtElement) -> Vec<(usize, Poly)> {
        let v = &self.vertices[rho as usize];
        elt.terms()
            .map(|(m, p)| (v.offset + v.basis_index[&m], p.clone()))
            .collect()
    }

    /// Vertical differential of a generator, as global sparse entries.
    pub fn d_vertical(&self, g: usize) -> Vec<(usize, Poly)> {
        let (rho, mask, _) = self.gen_data(g);
        let v = &self.vertices[rho as usize];
        let img = vertical_image(&v.weights, v.sigma, mask, v.basepoint_circle);
        self.ext_to_entries(rho, &img)
    }

    /// Horizontal (odd) differential of a generator, with eps corrections.
    pub fn d_horizontal(&self, g: usize) -> Vec<(usize, Poly)> {
        let (rho, mask, _) = self.gen_data(g);
        let v = &self.vertices[rho as usize];
        let pos = v.basis_index[&mask];
        let mut out = Vec::new();
        for e in self.edges.iter().filter(|e| e.from == rho) {
            let img = &e.images[pos];
            let signed = if e.eps { -img } else { img.clone() };
            out.extend(self.ext_to_entries(e.to, &signed));
        }
        out
    }

    pub fn d_total(&self, g: usize) -> Vec<(usize, Poly)> {
        let mut out = self.d_vertical(g);
        out.extend(self.d_horizontal(g));
        out
    }

    fn gen_infos(&self) -> Vec<GenInfo> {
        let mut gens = Vec::with_capacity(self.total_dim);
        for v in &self.vertices {
            for (pos, &m) in v.basis.iter().enumerate() {
                gens.push(GenInfo { delta: v.delta[pos], vertex: v.rho as usize, key: m });
            }
        }
        gens
    }

    /// The full complex over Z[x].
    pub fn graded_complex(&self) -> Result<GradedComplex<Poly>> {
        let mut c = GradedComplex::new(self.gen_infos());
        for g in 0..self.total_dim {
            for (t, coeff) in self.d_total(g) {
                c.add_entry(g, t, &coeff)?;
            }
        }
        Ok(c)
    }

    /// The complex with mark variables evaluated at rationals.
    pub fn evaluated(&self, assignment: &[BigRational]) -> Result<GradedComplex<BigRational>> {
        let mut c = GradedComplex::new(self.gen_infos());
        for g in 0..self.total_dim {
            for (t, coeff) in self.d_total(g) {
                c.add_entry(g, t, &coeff.eval(assignment)?)?;
            }
        }
        Ok(c)
    }

    /// The complex as an integer complex; errors if any entry involves marks.
    pub fn integer_complex(&self) -> Result<GradedComplex<BigInt>> {
        let mut c = GradedComplex::new(self.gen_infos());
        for g in 0..self.total_dim {
            for (t, coeff) in self.d_total(g) {
                let k = coeff.as_constant().ok_or_else(|| {
                    Error::input("complex has non-constant coefficients".to_string())
                })?;
                c.add_entry(g, t, &k)?;
            }
        }
        Ok(c)
    }

    /// True if the vertical differential vanishes identically.
    pub fn d_vertical_is_zero(&self) -> bool {
        (0..self.total_dim).all(|g| self.d_vertical(g).is_empty())
    }

    /// Structural invariants: both squares vanish, the two differentials
    /// anticommute, and every entry is homogeneous of delta degree -2.
    fn verify_structure(&self) -> Result<()> {
        let dim = self.total_dim;
        let dh: Vec<Vec<(usize, Poly)>> = (0..dim).map(|g| self.d_horizontal(g)).collect();
        let dv: Vec<Vec<(usize, Poly)>> = (0..dim).map(|g| self.d_vertical(g)).collect();

        for (name, rows) in [("d_odd", &dh), ("d_v", &dv)] {
            for g in 0..dim {
                let (_, _, delta) = self.gen_data(g);
                for (t, coeff) in &rows[g] {
                    if coeff.is_zero() {
                        continue;
                    }
                    let (_, _, delta_t) = self.gen_data(*t);
                    if delta_t != delta - 2 {
                        return Err(Error::internal(format!(
                            "{} entry {} -> {} has delta change {}",
                            name,
                            g,
                            t,
                            delta_t - delta
                        )));
                    }
                }
            }
        }

        let compose = |a: &Vec<Vec<(usize, Poly)>>, b: &Vec<Vec<(usize, Poly)>>, g: usize| {
            let mut acc: BTreeMap<usize, Poly> = BTreeMap::new();
            for (mid, c1) in &b[g] {
                for (end, c2) in &a[*mid] {
                    let entry = acc.entry(*end).or_insert_with(Poly::zero);
                    *entry += &(c1 * c2);
                }
            }
            acc
        };
        for g in 0..dim {
            let hh = compose(&dh, &dh, g);
            if hh.values().any(|p| !p.is_zero()) {
                return Err(Error::internal(format!("d_odd^2 != 0 at generator {}", g)));
            }
            let vv = compose(&dv, &dv, g);
            if vv.values().any(|p| !p.is_zero()) {
                return Err(Error::internal(format!("d_v^2 != 0 at generator {}", g)));
            }
            let mut anti = compose(&dh, &dv, g);
            for (t, c) in compose(&dv, &dh, g) {
                let entry = anti.entry(t).or_insert_with(Poly::zero);
                *entry += &c;
            }
            if anti.values().any(|p| !p.is_zero()) {
                return Err(Error::internal(format!(
                    "d_v and d_odd do not anticommute at generator {}",
                    g
                )));
            }
        }
        Ok(())
    }

    /// Mod-2 comparison with the unsigned (Jaeger-form) complex: naive edge
    /// maps and plain left multiplication, no sign corrections.
    pub fn mod2_equals_unsigned(&self) -> Result<bool> {
        for v in &self.vertices {
            for (pos, &mask) in v.basis.iter().enumerate() {
                let g = v.offset + pos;
                // vertical: (-1)^sigma drops mod 2
                let twisted: BTreeMap<usize, Poly> = self
                    .d_vertical(g)
                    .into_iter()
                    .map(|(t, p)| (t, p.mod2()))
                    .filter(|(_, p)| !p.is_zero())
                    .collect();
                let unsigned_v = vertical_image(&v.weights, false, mask, v.basepoint_circle);
                let unsigned: BTreeMap<usize, Poly> = self
                    .ext_to_entries(v.rho, &unsigned_v)
                    .into_iter()
                    .map(|(t, p)| (t, p.mod2()))
                    .filter(|(_, p)| !p.is_zero())
                    .collect();
                if twisted != unsigned {
                    return Ok(false);
                }
                // horizontal: eps signs drop mod 2
                let twisted: BTreeMap<usize, Poly> = self
                    .d_horizontal(g)
                    .into_iter()
                    .fold(BTreeMap::new(), |mut acc, (t, p)| {
                        let e = acc.entry(t).or_insert_with(Poly::zero);
                        *e += &p;
                        acc
                    })
                    .into_iter()
                    .map(|(t, p)| (t, p.mod2()))
                    .filter(|(_, p)| !p.is_zero())
                    .collect();
                let mut unsigned: BTreeMap<usize, Poly> = BTreeMap::new();
                for e in self.edges.iter().filter(|e| e.from == v.rho) {
                    for (t, p) in self.ext_to_entries(e.to, &e.images[pos]) {
                        let entry = unsigned.entry(t).or_insert_with(Poly::zero);
                        *entry += &p;
                    }
                }
                let unsigned: BTreeMap<usize, Poly> = unsigned
                    .into_iter()
                    .map(|(t, p)| (t, p.mod2()))
                    .filter(|(_, p)| !p.is_zero())
                    .collect();
                if twisted != unsigned {
                    return Ok(false);
                }
            }
        }
        Ok(true)
    }

    /// Export: vertex bases with deltas, and all map entries as
    /// (source vertex, source monomial, target vertex, target monomial,
    /// polynomial coefficient) tuples.
    pub fn export_json(&self) -> serde_json::Value {
        let names = self.diagram.mark_names();
        let (np, nm) = self.diagram.signed_crossing_counts();
        let rho_str = |rho: u64| -> String {
            (0..self.n)
                .map(|c| if rho & (1 << c) != 0 { '1' } else { '0' })
                .collect()
        };
        let vertices: Vec<serde_json::Value> = self
            .vertices
            .iter()
            .map(|v| {
                let k = v.resolution.circle_count();
                json!({
                    "rho": rho_str(v.rho),
                    "circles": k,
                    "sigma": u8::from(v.sigma),
                    "weights": v.weights.iter().map(|w| w.render(&names)).collect::<Vec<_>>(),
                    "basis": v.basis.iter().enumerate().map(|(i, &m)| json!({
                        "monomial": render_monomial(m, k),
                        "delta": v.delta[i],
                    })).collect::<Vec<_>>(),
                })
            })
            .collect();
        let mut maps = Vec::new();
        for g in 0..self.total_dim {
            let (rho, mask, _) = self.gen_data(g);
            let k = self.vertices[rho as usize].resolution.circle_count();
            for (kind, entries) in
                [("vertical", self.d_vertical(g)), ("odd", self.d_horizontal(g))]
            {
                for (t, coeff) in entries {
                    if coeff.is_zero() {
                        continue;
                    }
                    let (trho, tmask, _) = self.gen_data(t);
                    let tk = self.vertices[trho as usize].resolution.circle_count();
                    maps.push(json!({
                        "kind": kind,
                        "from_vertex": rho_str(rho),
                        "from_monomial": render_monomial(mask, k),
                        "to_vertex": rho_str(trho),
                        "to_monomial": render_monomial(tmask, tk),
                        "coeff": coeff.render(&names),
                    }));
                }
            }
        }
        json!({
            "crossings": self.n,
            "reduced": self.reduced,
            "n_plus": np,
            "n_minus": nm,
            "variables": names,
            "total_dim": self.total_dim,
            "vertices": vertices,
            "maps": maps,
        })
    }
}

fn project(elt: ExtElement, basepoint_circle: Option<usize>) -> ExtElement {
    match basepoint_circle {
        None => elt,
        Some(p) => {
            let mut out = ExtElement::zero(elt.ambient());
            for (m, coeff) in elt.terms() {
                if m & (1 << p) == 0 {
                    out.add_term(m, coeff);
                }
            }
            out
        }
    }
}

/// Reduced maps must send basepoint multiples to basepoint multiples.
fn check_descent(map: &NaiveMap, src: &VertexData, dst: &VertexData) -> Result<()> {
    let (Some(ps), Some(pd)) = (src.basepoint_circle, dst.basepoint_circle) else {
        return Err(Error::internal("descent check without basepoints".to_string()));
    };
    let k = src.resolution.circle_count();
    for mask in 0u64..(1 << k) {
        if mask & (1 << ps) == 0 {
            continue;
        }
        let img = map.apply_monomial(mask);
        for (m, coeff) in img.terms() {
            if !coeff.is_zero() && m & (1 << pd) == 0 {
                return Err(Error::internal(format!(
                    "edge map does not descend to the reduced quotient at mask {:b}",
                    mask
                )));
            }
        }
    }
    Ok(())
}

/// Spec-level face label accessor used by reports.
pub fn face_label(t: FaceType) -> u8 {
    u8::from(t.label())
}
