//! Theorem verification (placeholder while the cube is under construction).
