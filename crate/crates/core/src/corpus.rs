//! Test and demo diagrams: braid closures, the named small knots and links,
//! kink insertion, and seeded random diagrams.
//!
//! Braid closures are planar by construction, which makes them a convenient
//! source of valid rotation systems. Positions at a crossing are numbered
//! counterclockwise [bottom-left, bottom-right, top-right, top-left]; a
//! positive braid letter puts the strand entering bottom-left on top.

use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::diagram::{Crossing, EdgeId, MarkedDiagram};
use crate::error::{Error, Result};

/// Closure of a braid word on `strands` strands. Letter `i` (1-based) is the
/// positive generator crossing lanes i-1 and i; negative letters invert.
/// Lanes never used by the word close up into free loops.
pub fn braid_closure(strands: usize, word: &[i32]) -> Result<MarkedDiagram> {
    assert!(strands >= 1);
    let mut cur: Vec<EdgeId> = (0..strands).collect();
    let mut next_edge = strands;
    let mut crossings: Vec<Crossing> = Vec::new();
    for &letter in word {
        let i = letter.unsigned_abs() as usize;
        if i == 0 || i >= strands {
            return Err(Error::input(format!(
                "braid letter {} out of range for {} strands",
                letter, strands
            )));
        }
        let (bl, br) = (cur[i - 1], cur[i]);
        let tr = next_edge;
        let tl = next_edge + 1;
        next_edge += 2;
        let over = if letter > 0 { 0 } else { 1 };
        crossings.push(Crossing { ends: [bl, br, tr, tl], over, arrow: 0 });
        cur[i - 1] = tl;
        cur[i] = tr;
    }
    // close up: identify each lane's final edge with its initial edge
    let mut free_loops = Vec::new();
    for j in 0..strands {
        if cur[j] == j {
            free_loops.push(j);
            continue;
        }
        let old = cur[j];
        for c in crossings.iter_mut() {
            for e in c.ends.iter_mut() {
                if *e == old {
                    *e = j;
                }
            }
        }
    }
    MarkedDiagram::new(crossings, free_loops, Vec::new(), None)
}

/// Same closure with explicit arrow bits, one per crossing.
pub fn braid_closure_with_arrows(
    strands: usize,
    word: &[i32],
    arrows: &[u8],
) -> Result<MarkedDiagram> {
    let d = braid_closure(strands, word)?;
    assert_eq!(arrows.len(), d.n());
    let mut crossings = d.crossings().to_vec();
    for (c, &a) in crossings.iter_mut().zip(arrows) {
        c.arrow = a % 2;
    }
    MarkedDiagram::new(crossings, d.free_loops().to_vec(), Vec::new(), None)
}

pub fn unknot_zero() -> MarkedDiagram {
    MarkedDiagram::new(Vec::new(), vec![0], Vec::new(), None).unwrap()
}

/// Unknot with a single positive kink.
pub fn unknot_one() -> MarkedDiagram {
    braid_closure(2, &[1]).unwrap()
}

/// Unknot with a cancelling pair of crossings (an R2 picture).
pub fn unknot_two() -> MarkedDiagram {
    braid_closure(2, &[1, -1]).unwrap()
}

pub fn hopf_link() -> MarkedDiagram {
    braid_closure(2, &[1, 1]).unwrap()
}

pub fn trefoil() -> MarkedDiagram {
    braid_closure(2, &[1, 1, 1]).unwrap()
}

pub fn figure_eight() -> MarkedDiagram {
    braid_closure(3, &[1, -2, 1, -2]).unwrap()
}

/// Torus knot/link T(2,n) as the closure of sigma_1^n.
pub fn torus_2n(n: usize) -> MarkedDiagram {
    braid_closure(2, &vec![1; n]).unwrap()
}

pub fn cinquefoil() -> MarkedDiagram {
    torus_2n(5)
}

/// The twist knot 5_2, from its standard planar code.
pub fn five_two() -> MarkedDiagram {
    pd_diagram(&[
        [1, 4, 2, 5],
        [3, 8, 4, 9],
        [5, 10, 6, 1],
        [9, 6, 10, 7],
        [7, 2, 8, 3],
    ])
    .unwrap()
}

/// A 6-crossing non-alternating diagram (granny knot as a positive braid).
pub fn six_nonalternating() -> MarkedDiagram {
    braid_closure(3, &[1, 1, 1, 2, 2, 2]).unwrap()
}

/// Diagram from PD-style quadruples: entries counterclockwise starting at the
/// incoming under-strand, so the over-strand occupies positions 1 and 3.
pub fn pd_diagram(codes: &[[EdgeId; 4]]) -> Result<MarkedDiagram> {
    let crossings = codes
        .iter()
        .map(|&ends| Crossing { ends, over: 1, arrow: 0 })
        .collect();
    MarkedDiagram::new(crossings, Vec::new(), Vec::new(), None)
}

/// Insert a kink on `edge`; `positive` selects the handedness.
pub fn add_kink(d: &MarkedDiagram, edge: EdgeId, positive: bool) -> Result<MarkedDiagram> {
    let slots = d.slots_of(edge);
    if slots.is_empty() {
        return Err(Error::input("cannot kink a free loop".to_string()));
    }
    let (s_a, s_b) = (slots[0], slots[1]);
    let max_edge = d.edges().iter().copied().max().unwrap_or(0);
    let loop_edge = max_edge + 1;
    let out_edge = max_edge + 2;
    let n = d.n();
    let mut crossings = d.crossings().to_vec();
    // the old edge keeps slot s_a; its continuation toward s_b is renamed
    let (cb, pb) = s_b;
    // if the edge is a loop at one crossing, rename only one occurrence
    if s_a == s_b {
        return Err(Error::internal("degenerate edge slots".to_string()));
    }
    crossings[cb].ends[pb as usize] = out_edge;
    crossings.push(Crossing {
        ends: [edge, loop_edge, loop_edge, out_edge],
        over: if positive { 0 } else { 1 },
        arrow: 0,
    });
    let _ = n;
    MarkedDiagram::new(
        crossings,
        d.free_loops().to_vec(),
        d.marks().to_vec(),
        d.basepoint(),
    )
}

/// True if every component alternates over/under passes.
pub fn is_alternating(d: &MarkedDiagram) -> bool {
    for cycle in d.components() {
        let mut passes = Vec::new();
        for &e in cycle {
            let (_, to) = d.edge_direction(e).unwrap();
            let (c, p) = to;
            let over = p % 2 == d.crossings()[c].over % 2;
            passes.push(over);
        }
        for i in 0..passes.len() {
            if passes[i] == passes[(i + 1) % passes.len()] {
                return false;
            }
        }
    }
    true
}

/// A deterministic batch of random braid-closure diagrams with random arrows
/// and one or two marks per edge.
pub fn random_diagrams(seed: u64, count: usize, max_crossings: usize) -> Vec<MarkedDiagram> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = Vec::new();
    while out.len() < count {
        let strands = rng.gen_range(2..=3usize);
        let len = rng.gen_range(1..=max_crossings);
        let word: Vec<i32> = (0..len)
            .map(|_| {
                let i = rng.gen_range(1..strands as i32);
                if rng.gen_bool(0.5) {
                    i
                } else {
                    -i
                }
            })
            .collect();
        let Ok(d) = braid_closure(strands, &word) else { continue };
        let arrows: Vec<u8> = (0..d.n()).map(|_| rng.gen_range(0..2u8)).collect();
        let Ok(d) = braid_closure_with_arrows(strands, &word, &arrows) else { continue };
        // random marks: one per edge, sometimes a second
        let mut marks = Vec::new();
        let mut var = 0usize;
        for &e in d.edges() {
            let copies = 1 + usize::from(rng.gen_bool(0.3));
            for _ in 0..copies {
                var += 1;
                marks.push(crate::diagram::Mark { id: format!("x{}", var), edge: e });
            }
        }
        let Ok(d) = d.with_marks(marks) else { continue };
        out.push(d);
    }
    out
}

/// R-move related diagram pairs (same link, diagrams differing by one move).
pub fn invariance_pairs() -> Vec<(&'static str, MarkedDiagram, MarkedDiagram)> {
    vec![
        ("unknot-r1", unknot_zero(), unknot_one()),
        (
            "unknot-r2",
            braid_closure(2, &[1]).unwrap(),
            braid_closure(3, &[1, 2, -2]).unwrap(),
        ),
        (
            "unknot-r3",
            braid_closure(3, &[1, 2, 1, -1]).unwrap(),
            braid_closure(3, &[2, 1, 2, -1]).unwrap(),
        ),
        ("trefoil-r1", trefoil(), braid_closure(3, &[1, 1, 1, 2]).unwrap()),
        (
            "trefoil-r2",
            trefoil(),
            braid_closure(3, &[1, 1, 1, 2, -2]).unwrap(),
        ),
        (
            "trefoil-r3",
            braid_closure(3, &[1, 2, 1, 2]).unwrap(),
            braid_closure(3, &[2, 1, 2, 2]).unwrap(),
        ),
    ]
}

/// The knot corpus used by the structural acceptance suites.
pub fn corpus_diagrams() -> Vec<(&'static str, MarkedDiagram)> {
    vec![
        ("unknot0", unknot_zero()),
        ("unknot1", unknot_one()),
        ("unknot2", unknot_two()),
        ("hopf", hopf_link()),
        ("trefoil", trefoil()),
        ("figure8", figure_eight()),
        ("5_1", cinquefoil()),
        ("5_2", five_two()),
        ("6_nonalt", six_nonalternating()),
    ]
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn braid_closures_are_valid() {
        for (name, d) in corpus_diagrams() {
            assert!(d.n() <= 6, "{}", name);
        }
    }

    #[test]
    fn unknot_one_is_positive_kink() {
        let d = unknot_one();
        assert_eq!(d.signed_crossing_counts(), (1, 0));
        assert!(d.is_knot());
    }

    #[test]
    fn torus_knots_are_knots() {
        assert!(trefoil().is_knot());
        assert!(cinquefoil().is_knot());
        assert!(!hopf_link().is_knot());
        assert!(figure_eight().is_knot());
        assert!(five_two().is_knot());
        assert!(six_nonalternating().is_knot());
    }

    #[test]
    fn alternation_flags() {
        assert!(is_alternating(&trefoil()));
        assert!(is_alternating(&figure_eight()));
        assert!(is_alternating(&five_two()));
        assert!(!is_alternating(&six_nonalternating()));
    }

    #[test]
    fn kink_preserves_validity() {
        let d = trefoil().auto_marked().unwrap();
        let k = add_kink(&d, d.edges()[0], true).unwrap();
        assert_eq!(k.n(), 4);
        assert!(k.is_knot());
        let (np, nm) = d.signed_crossing_counts();
        let (np2, nm2) = k.signed_crossing_counts();
        assert_eq!((np2, nm2), (np + 1, nm));
        let k = add_kink(&d, d.edges()[0], false).unwrap();
        assert_eq!(k.signed_crossing_counts(), (np, nm + 1));
    }

    #[test]
    fn random_diagrams_deterministic() {
        let a = random_diagrams(7, 10, 6);
        let b = random_diagrams(7, 10, 6);
        assert_eq!(a.len(), 10);
        for (x, y) in a.iter().zip(&b) {
            assert_eq!(x.crossings(), y.crossings());
        }
    }

    #[test]
    fn invariance_pairs_are_valid() {
        for (name, a, b) in invariance_pairs() {
            assert!(a.is_knot(), "{} lhs", name);
            assert!(b.is_knot(), "{} rhs", name);
        }
    }
}
