//! Spanning-tree complex (placeholder while the cube is under construction).

pub struct Evaluation;
pub struct SpanningTreeComplex;
