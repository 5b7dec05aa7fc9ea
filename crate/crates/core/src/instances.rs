//! Reference instances: two 4-subsystem sparsity plants and a 4×4 delay
//! problem with integer data.

use crate::delay::DelayMatrix;
use crate::pattern::BinaryPattern;

fn pattern(rows: &[[u8; 4]; 4]) -> BinaryPattern {
    BinaryPattern::from_rows(rows).expect("valid reference pattern")
}

/// Inputs 1 and 2 also affect the next subsystem; input 4 also affects the previous one.
pub fn plant_one() -> BinaryPattern {
    pattern(&[[1, 0, 0, 0], [1, 1, 0, 0], [0, 1, 1, 1], [0, 0, 0, 1]])
}

/// Open daisy chain: each input affects its own and the next subsystem.
pub fn plant_two() -> BinaryPattern {
    pattern(&[[1, 0, 0, 0], [1, 1, 0, 0], [0, 1, 1, 0], [0, 0, 1, 1]])
}

/// Block-diagonal controller pattern.
pub fn block_diagonal() -> BinaryPattern {
    BinaryPattern::identity(4)
}

/// Closest QI superset of [`block_diagonal`] under [`plant_one`].
pub fn superset_one() -> BinaryPattern {
    pattern(&[[1, 0, 0, 0], [1, 1, 0, 0], [1, 1, 1, 1], [0, 0, 0, 1]])
}

/// Closest QI superset of [`block_diagonal`] under [`plant_two`]: lower triangular.
pub fn superset_two() -> BinaryPattern {
    pattern(&[[1, 0, 0, 0], [1, 1, 0, 0], [1, 1, 1, 0], [1, 1, 1, 1]])
}

pub fn propagation_delays() -> DelayMatrix {
    DelayMatrix::from_rows(&[
        [9.0, 0.0, 8.0, 4.0],
        [0.0, 7.0, 8.0, 7.0],
        [3.0, 5.0, 7.0, 1.0],
        [5.0, 5.0, 3.0, 1.0],
    ])
    .expect("valid reference delays")
}

pub fn transmission_delays() -> DelayMatrix {
    DelayMatrix::from_rows(&[
        [2.0, 3.0, 6.0, 5.0],
        [5.0, 2.0, 2.0, 9.0],
        [9.0, 8.0, 0.0, 0.0],
        [7.0, 9.0, 8.0, 5.0],
    ])
    .expect("valid reference delays")
}

/// `t − t̃` of the closest QI superset of [`transmission_delays`].
pub fn superset_delta() -> [[f64; 4]; 4] {
    [
        [0.0, 0.0, -2.0, 0.0],
        [-1.0, 0.0, 0.0, -2.0],
        [-4.0, -2.0, 0.0, 0.0],
        [0.0, 0.0, 0.0, 0.0],
    ]
}
