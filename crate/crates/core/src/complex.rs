//! The birack chain complex C_n(X) of a finite bikei over the basis X^n,
//! its boundary maps as integer matrices, and the generators of the bikei
//! degenerate subgroups.
//!
//! Basis tuples are ordered lexicographically, which fixes every matrix
//! layout and makes dumps byte-reproducible.

use num_bigint::BigInt;
use num_traits::{One, Zero};
use thiserror::Error;

use crate::algebra::{Bikei, Element};
use crate::intlinalg::IntMatrix;

pub const MAX_DEGREE: usize = 5;
pub const MAX_BASIS: usize = 1_000_000;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum ComplexError {
    #[error("chain degree must be at least 1, got {0}")]
    DegreeTooSmall(usize),
    #[error("degree {degree} with {elements} elements needs a basis of {needed} tuples, over the guard {guard}")]
    GuardExceeded { degree: usize, elements: usize, needed: u128, guard: usize },
}

fn check_degree(x: &Bikei, degree: usize) -> Result<(), ComplexError> {
    if degree < 1 {
        return Err(ComplexError::DegreeTooSmall(degree));
    }
    let needed = (x.size() as u128).pow(degree as u32);
    if degree > MAX_DEGREE || needed > MAX_BASIS as u128 {
        return Err(ComplexError::GuardExceeded {
            degree,
            elements: x.size(),
            needed,
            guard: MAX_BASIS,
        });
    }
    Ok(())
}

/// The ordered basis X^n of C_n(X), with index lookups both ways.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ChainBasis {
    elements: usize,
    degree: usize,
}

impl ChainBasis {
    pub fn new(x: &Bikei, degree: usize) -> Result<Self, ComplexError> {
        check_degree(x, degree)?;
        Ok(ChainBasis { elements: x.size(), degree })
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn size(&self) -> usize {
        self.elements.pow(self.degree as u32)
    }

    pub fn index(&self, tuple: &[Element]) -> usize {
        assert_eq!(tuple.len(), self.degree);
        tuple.iter().fold(0, |acc, &e| {
            debug_assert!(e < self.elements);
            acc * self.elements + e
        })
    }

    pub fn tuple(&self, mut index: usize) -> Vec<Element> {
        let mut t = vec![0; self.degree];
        for slot in (0..self.degree).rev() {
            t[slot] = index % self.elements;
            index /= self.elements;
        }
        t
    }
}

/// Face maps of the birack boundary: d1 deletes entry k, d2 acts on the
/// remaining entries through the deleted one (1-based k).
pub fn face_delete(tuple: &[Element], k: usize) -> Vec<Element> {
    let mut t = tuple.to_vec();
    t.remove(k - 1);
    t
}

pub fn face_act(x: &Bikei, tuple: &[Element], k: usize) -> Vec<Element> {
    let xk = tuple[k - 1];
    let mut t = Vec::with_capacity(tuple.len() - 1);
    for (i, &e) in tuple.iter().enumerate() {
        if i + 1 < k {
            t.push(x.under(e, xk));
        } else if i + 1 > k {
            t.push(x.over(e, xk));
        }
    }
    t
}

/// Matrix of the boundary map C_n -> C_{n-1}; for n = 1 the target is {0},
/// giving a 0-row matrix.
pub fn boundary_matrix(x: &Bikei, degree: usize) -> Result<IntMatrix, ComplexError> {
    check_degree(x, degree)?;
    let basis = ChainBasis::new(x, degree)?;
    if degree == 1 {
        return Ok(IntMatrix::zero(0, basis.size()));
    }
    let target = ChainBasis::new(x, degree - 1)?;
    let mut m = IntMatrix::zero(target.size(), basis.size());
    for col in 0..basis.size() {
        let t = basis.tuple(col);
        for k in 1..=degree {
            let sign = if k % 2 == 1 { BigInt::one() } else { -BigInt::one() };
            let r1 = target.index(&face_delete(&t, k));
            let v = m.at(r1, col) + &sign;
            m.set(r1, col, v);
            let r2 = target.index(&face_act(x, &t, k));
            let v = m.at(r2, col) - &sign;
            m.set(r2, col, v);
        }
    }
    Ok(m)
}

/// Boundary of a single basis tuple as (coefficient, tuple) pairs, summed.
/// This is the direct transcription of the defining formula; tests use it as
/// an independent oracle against `boundary_matrix`.
pub fn boundary_of_tuple(x: &Bikei, tuple: &[Element]) -> Vec<(i64, Vec<Element>)> {
    use std::collections::BTreeMap;
    let mut acc: BTreeMap<Vec<Element>, i64> = BTreeMap::new();
    for k in 1..=tuple.len() {
        let sign = if k % 2 == 1 { 1 } else { -1 };
        *acc.entry(face_delete(tuple, k)).or_insert(0) += sign;
        *acc.entry(face_act(x, tuple, k)).or_insert(0) -= sign;
    }
    acc.into_iter().filter(|(_, c)| *c != 0).map(|(t, c)| (c, t)).collect()
}

/// Which degenerate subcomplex to build: the bikei one, or the biquandle
/// (adjacent-repeat tuples only) one used for the high-degree comparison.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DegeneracyMode {
    Bikei,
    AdjacentOnly,
}

/// Generating chains of the degenerate subgroup in `ChainBasis` coordinates.
/// Columns may be redundant; downstream lattice code canonicalizes.
#[derive(Debug, Clone)]
pub struct DegenerateGenerators {
    pub degree: usize,
    pub matrix: IntMatrix,
}

pub fn degenerate_generators(
    x: &Bikei,
    degree: usize,
    mode: DegeneracyMode,
) -> Result<DegenerateGenerators, ComplexError> {
    check_degree(x, degree)?;
    let basis = ChainBasis::new(x, degree)?;
    let n = x.size();
    let mut cols: Vec<Vec<BigInt>> = Vec::new();
    let mut push_combo = |terms: &[(i64, Vec<Element>)]| {
        let mut col = vec![BigInt::zero(); basis.size()];
        for (c, t) in terms {
            let idx = basis.index(t);
            col[idx] += BigInt::from(*c);
        }
        cols.push(col);
    };

    match (degree, mode) {
        (1, DegeneracyMode::Bikei) => {
            for a in 0..n {
                for b in 0..n {
                    push_combo(&[(1, vec![a]), (-1, vec![x.under(a, b)])]);
                }
            }
            for a in 0..n {
                for b in 0..n {
                    push_combo(&[(1, vec![a]), (-1, vec![x.over(a, b)])]);
                }
            }
        }
        (1, DegeneracyMode::AdjacentOnly) => {}
        (2, DegeneracyMode::Bikei) => {
            for a in 0..n {
                push_combo(&[(1, vec![a, a])]);
            }
            for a in 0..n {
                for b in 0..n {
                    push_combo(&[(1, vec![a, b]), (-1, vec![x.under(a, b), x.over(b, a)])]);
                }
            }
            for a in 0..n {
                for b in 0..n {
                    push_combo(&[(1, vec![a, b]), (1, vec![a, x.over(b, a)])]);
                }
            }
            for a in 0..n {
                for b in 0..n {
                    push_combo(&[(1, vec![a, b]), (1, vec![x.under(a, b), b])]);
                }
            }
        }
        _ => {
            // degree >= 3 (or biquandle mode): tuples with an adjacent repeat
            for idx in 0..basis.size() {
                let t = basis.tuple(idx);
                if t.windows(2).any(|w| w[0] == w[1]) {
                    push_combo(&[(1, t)]);
                }
            }
        }
    }

    Ok(DegenerateGenerators { degree, matrix: IntMatrix::from_columns(basis.size(), &cols) })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{alexander_bikei, constant_action_bikei};
    use crate::intlinalg::{solve_integer, spans_contain};

    fn z8_31() -> Bikei {
        alexander_bikei(8, 3, 1).unwrap()
    }

    fn trivial(n: usize) -> Bikei {
        constant_action_bikei(&(0..n).collect::<Vec<_>>()).unwrap()
    }

    #[test]
    fn basis_round_trip() {
        let b = ChainBasis::new(&trivial(3), 3).unwrap();
        assert_eq!(b.size(), 27);
        for i in 0..27 {
            assert_eq!(b.index(&b.tuple(i)), i);
        }
        assert_eq!(b.tuple(0), vec![0, 0, 0]);
        assert_eq!(b.tuple(26), vec![2, 2, 2]);
    }

    #[test]
    fn boundary_degree_two_matches_proof_formula() {
        // residues x=1, y=2: boundary is (y) - (y ov x) - (x) + (x un y)
        //                            = (2) - (6)      - (1) + (5)
        let x = z8_31();
        let m = boundary_matrix(&x, 2).unwrap();
        let basis2 = ChainBasis::new(&x, 2).unwrap();
        let col = basis2.index(&[1, 2]);
        let mut expected = vec![0i64; 8];
        expected[2] += 1;
        expected[6] -= 1;
        expected[1] -= 1;
        expected[5] += 1;
        for r in 0..8 {
            assert_eq!(*m.at(r, col), BigInt::from(expected[r]), "row {r}");
        }
        // sparse oracle agrees
        let sparse = boundary_of_tuple(&x, &[1, 2]);
        assert_eq!(
            sparse,
            vec![(-1, vec![1]), (1, vec![2]), (1, vec![5]), (-1, vec![6])]
        );
    }

    #[test]
    fn boundary_of_diagonal_tuple_vanishes() {
        for x in [trivial(3), z8_31()] {
            for a in 0..x.size() {
                assert!(boundary_of_tuple(&x, &[a, a]).is_empty());
            }
        }
    }

    #[test]
    fn boundary_degree_one_has_no_rows() {
        let x = trivial(2);
        let m = boundary_matrix(&x, 1).unwrap();
        assert_eq!((m.rows(), m.cols()), (0, 2));
        assert!(boundary_matrix(&x, 0).is_err());
    }

    #[test]
    fn boundary_squares_to_zero() {
        for x in [trivial(2), trivial(4)] {
            for degree in 2..=3 {
                let d_n = boundary_matrix(&x, degree).unwrap();
                let d_n1 = boundary_matrix(&x, degree + 1).unwrap();
                assert!(d_n.mul(&d_n1).is_zero(), "d{degree} . d{} != 0", degree + 1);
            }
        }
        // 8 elements: degree 2 only, the degree-4 basis is 4096 tuples
        let x = z8_31();
        let d2 = boundary_matrix(&x, 2).unwrap();
        let d3 = boundary_matrix(&x, 3).unwrap();
        assert!(d2.mul(&d3).is_zero());
    }

    #[test]
    fn degenerate_generators_degree_one_alexander() {
        let x = z8_31();
        let g = degenerate_generators(&x, 1, DegeneracyMode::Bikei).unwrap();
        // the column e_a - e_{3a} must be present for each residue a
        for a in 0..8usize {
            let target = (0..8)
                .map(|i| {
                    let mut v = BigInt::zero();
                    if i == a {
                        v += 1;
                    }
                    if i == (3 * a) % 8 {
                        v -= 1;
                    }
                    v
                })
                .collect::<Vec<_>>();
            let found = (0..g.matrix.cols()).any(|c| g.matrix.column(c) == target);
            assert!(found, "missing generator e_{a} - e_{}", (3 * a) % 8);
        }
    }

    #[test]
    fn degree_three_degenerates_are_adjacent_repeats_only() {
        let x = z8_31();
        let bikei = degenerate_generators(&x, 3, DegeneracyMode::Bikei).unwrap();
        let adj = degenerate_generators(&x, 3, DegeneracyMode::AdjacentOnly).unwrap();
        assert_eq!(bikei.matrix, adj.matrix);
        // each column is a single adjacent-repeat tuple
        let basis = ChainBasis::new(&x, 3).unwrap();
        for c in 0..adj.matrix.cols() {
            let col = adj.matrix.column(c);
            let support: Vec<usize> =
                (0..col.len()).filter(|&i| !col[i].is_zero()).collect();
            assert_eq!(support.len(), 1);
            let t = basis.tuple(support[0]);
            assert!(t.windows(2).any(|w| w[0] == w[1]));
        }
    }

    #[test]
    fn one_element_bikei_degree_two_generators_collapse() {
        let x = trivial(1);
        let g = degenerate_generators(&x, 2, DegeneracyMode::Bikei).unwrap();
        // the only tuple is (1,1); the plus-families give 2*(1,1)
        let cols = g.matrix.columns();
        assert!(cols.contains(&vec![BigInt::from(1)]));
        assert!(cols.contains(&vec![BigInt::from(2)]));
        assert!(cols.contains(&vec![BigInt::from(0)]));
    }

    #[test]
    fn subcomplex_closure_small() {
        for x in [trivial(2), z8_31()] {
            for degree in 2..=3 {
                let d = boundary_matrix(&x, degree).unwrap();
                let g_n = degenerate_generators(&x, degree, DegeneracyMode::Bikei).unwrap();
                let g_prev =
                    degenerate_generators(&x, degree - 1, DegeneracyMode::Bikei).unwrap();
                let image = d.mul(&g_n.matrix);
                assert!(
                    spans_contain(&g_prev.matrix, &image),
                    "boundary of degree-{degree} degenerates escapes the subcomplex"
                );
            }
        }
        // degree 1: the target is {0}, so closure is vacuous but must not panic
        let x = trivial(2);
        let d1 = boundary_matrix(&x, 1).unwrap();
        let g1 = degenerate_generators(&x, 1, DegeneracyMode::Bikei).unwrap();
        let image = d1.mul(&g1.matrix);
        assert_eq!(image.rows(), 0);
        for c in 0..image.cols() {
            assert!(solve_integer(&IntMatrix::zero(0, 0), &image.column(c)).is_some());
        }
    }

    #[test]
    fn guard_rejects_huge_requests() {
        let x = z8_31();
        assert!(matches!(
            boundary_matrix(&x, 9),
            Err(ComplexError::GuardExceeded { .. }) | Err(ComplexError::DegreeTooSmall(_))
        ));
    }
}
