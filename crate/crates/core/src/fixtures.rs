//! Matrices shipped with the crate for worked examples and benchmarks.

use crate::gf2::BitMatrix;

/// 5-line function on which the pair descent stalls at its initial cost of 20.
pub const NONCONVERGENT_5: &str = include_str!("../fixtures/nonconvergent_5.txt");
pub const NONCONVERGENT_5_INVERSE: &str = include_str!("../fixtures/nonconvergent_5_inverse.txt");
/// Remainder pairs after each committed step of MCG on [`NONCONVERGENT_5`].
pub const NONCONVERGENT_5_STEPS: [(&str, &str); 3] = [
    (
        include_str!("../fixtures/nonconvergent_5_step1.txt"),
        include_str!("../fixtures/nonconvergent_5_step1_inverse.txt"),
    ),
    (
        include_str!("../fixtures/nonconvergent_5_step2.txt"),
        include_str!("../fixtures/nonconvergent_5_step2_inverse.txt"),
    ),
    (
        include_str!("../fixtures/nonconvergent_5_step3.txt"),
        include_str!("../fixtures/nonconvergent_5_step3_inverse.txt"),
    ),
];
/// 6-line comparison function.
pub const REFERENCE_6: &str = include_str!("../fixtures/reference_6.txt");
/// [`REFERENCE_6`] with outputs reordered as `[y2, y1, y4, y6, y3, y5]`.
pub const REFERENCE_6_REORDERED: &str = include_str!("../fixtures/reference_6_reordered.txt");
/// Output order of [`REFERENCE_6_REORDERED`], 0-based.
pub const REFERENCE_6_PERMUTATION: [usize; 6] = [1, 0, 3, 5, 2, 4];
/// 16-line function used for the repeated probabilistic runs.
pub const TEST_16: &str = include_str!("../fixtures/test_16.txt");
/// `y = [x₁, x₁⊕x₂, x₁⊕x₂⊕x₃, x₁⊕x₂⊕x₃⊕x₄]`
pub const PREFIX_XOR_4: &str = include_str!("../fixtures/prefix_xor_4.txt");

pub fn load(text: &str) -> BitMatrix {
    BitMatrix::parse(text).expect("bundled fixture parses")
}

pub fn nonconvergent_5() -> BitMatrix {
    load(NONCONVERGENT_5)
}

pub fn reference_6() -> BitMatrix {
    load(REFERENCE_6)
}

pub fn reference_6_reordered() -> BitMatrix {
    load(REFERENCE_6_REORDERED)
}

pub fn test_16() -> BitMatrix {
    load(TEST_16)
}

pub fn prefix_xor_4() -> BitMatrix {
    load(PREFIX_XOR_4)
}
