//! Reference data for the knot 8_20: spanning trees, generator placement,
//! incidences and homology.

#![allow(dead_code)]

/// PD code whose black Tait graph is the 7-vertex graph with edge `k` at crossing `k`.
pub const PD: &str = "[[1,13,2,12],[7,16,8,1],[15,8,16,9],[3,15,4,14],[13,3,14,2],[6,11,7,12],[10,5,11,6],[4,9,5,10]]";

/// Edge sets (1-based edge labels) of the reference trees T1..T21.
pub const TREES: [&[usize]; 21] = [
    &[2, 3, 4, 5, 7, 8],
    &[1, 3, 4, 5, 7, 8],
    &[1, 2, 4, 5, 7, 8],
    &[1, 2, 3, 5, 7, 8],
    &[1, 2, 3, 4, 7, 8],
    &[2, 3, 4, 5, 6, 8],
    &[1, 3, 4, 5, 6, 8],
    &[1, 2, 4, 5, 6, 8],
    &[1, 2, 3, 5, 6, 8],
    &[1, 2, 3, 4, 6, 8],
    &[2, 3, 4, 5, 6, 7],
    &[1, 3, 4, 5, 6, 7],
    &[1, 2, 4, 5, 6, 7],
    &[1, 2, 3, 5, 6, 7],
    &[1, 2, 3, 4, 6, 7],
    &[3, 4, 5, 6, 7, 8],
    &[2, 4, 5, 6, 7, 8],
    &[1, 3, 5, 6, 7, 8],
    &[1, 3, 4, 6, 7, 8],
    &[1, 2, 5, 6, 7, 8],
    &[1, 2, 4, 6, 7, 8],
];

/// Printed activity words of T1..T21 (a trailing `'` marks a negative edge).
pub const WORDS: [&str; 21] = [
    "lDDDDd'D'D'",
    "LdDDDd'D'D'",
    "LLdDDd'D'D'",
    "LLLdDd'D'D'",
    "LLLLdd'D'D'",
    "lDDDDL'd'D'",
    "LdDDDL'd'D'",
    "LLdDDL'd'D'",
    "LLLdDL'd'D'",
    "LLLLdL'd'D'",
    "lDDDDL'L'd'",
    "LdDDDL'L'd'",
    "LLdDDL'L'd'",
    "LLLdDL'L'd'",
    "LLLLdL'L'd'",
    "llDDDD'D'D'",
    "lLdDDD'D'D'",
    "lDDDDd'D'D'",
    "LlDLdD'D'D'",
    "LLddDD'D'D'",
    "LLdLdD'D'D'",
];

/// Generators `(tree, plus)` placed at one bidegree `(i, j)`.
pub type Placement = (i64, i64, &'static [(usize, bool)]);

/// Generator placement: `(i, j, [(tree, plus)])`.
pub const GENERATORS: &[Placement] = &[
    (-5, -9, &[(11, true)]),
    (-5, -11, &[(11, false)]),
    (-4, -7, &[(6, true)]),
    (-4, -9, &[(6, false)]),
    (-3, -5, &[(12, true), (1, true)]),
    (-3, -7, &[(12, false), (1, false)]),
    (-2, -3, &[(13, true), (7, true)]),
    (-2, -5, &[(16, true), (13, false), (7, false)]),
    (-2, -7, &[(16, false)]),
    (-1, -1, &[(14, true), (8, true), (2, true)]),
    (-1, -3, &[(14, false), (8, false), (2, false)]),
    (0, 1, &[(15, true), (9, true), (3, true)]),
    (
        0,
        -1,
        &[(17, true), (15, false), (18, true), (9, false), (3, false)],
    ),
    (0, -3, &[(17, false), (18, false)]),
    (1, 3, &[(10, true), (4, true)]),
    (1, 1, &[(19, true), (10, false), (4, false)]),
    (1, -1, &[(19, false)]),
    (2, 5, &[(5, true)]),
    (2, 3, &[(20, true), (5, false)]),
    (2, 1, &[(20, false)]),
    (3, 5, &[(21, true)]),
    (3, 3, &[(21, false)]),
];

type G = (usize, bool);
const fn p(t: usize) -> G {
    (t, true)
}
const fn m(t: usize) -> G {
    (t, false)
}

/// Printed incidences `source ↦ Σ c·target`.
pub const INCIDENCES: &[(G, &[(i64, G)])] = &[
    (p(11), &[(2, m(6))]),
    (p(6), &[]),
    (m(12), &[]),
    (p(12), &[(2, m(13))]),
    (p(1), &[(1, p(16))]),
    (p(13), &[]),
    (p(7), &[(-2, m(8)), (-2, m(2))]),
    (m(14), &[(1, m(18))]),
    (m(8), &[(-1, m(17))]),
    (m(2), &[(1, m(17))]),
    (p(14), &[(-2, m(15)), (2, m(9)), (1, p(18))]),
    (p(8), &[(-1, p(17)), (2, m(3))]),
    (p(2), &[(1, p(17)), (-2, m(3))]),
    (p(20), &[(-2, m(21))]),
    (p(17), &[]),
    (p(18), &[(-2, m(19))]),
    (m(15), &[(1, m(19))]),
    (m(9), &[(1, m(19))]),
    (m(3), &[(1, m(19))]),
    (p(15), &[(1, p(19)), (-2, m(10))]),
    (p(9), &[(1, p(19)), (-2, m(10))]),
    (p(3), &[(1, p(19))]),
    (p(19), &[]),
    (m(10), &[]),
    (m(4), &[(1, m(20))]),
    (p(10), &[]),
    (p(4), &[(1, p(20)), (-2, m(5))]),
    (p(5), &[(-1, p(21))]),
    (m(5), &[(-1, m(21))]),
];

/// Homology `(i, j, rank, torsion)`.
pub const HOMOLOGY: &[(i64, i64, usize, &[u64])] = &[
    (1, 3, 1, &[]),
    (0, 1, 1, &[]),
    (1, 1, 0, &[2]),
    (-1, -1, 1, &[]),
    (0, -1, 2, &[]),
    (-2, -3, 1, &[]),
    (-1, -3, 0, &[2]),
    (-2, -5, 1, &[2]),
    (-4, -7, 1, &[]),
    (-3, -7, 1, &[]),
    (-4, -9, 0, &[2]),
    (-5, -11, 1, &[]),
];
