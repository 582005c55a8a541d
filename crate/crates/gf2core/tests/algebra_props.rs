//! Property tests for the linear algebra layer: algebraic laws that must
//! hold for arbitrary matrices, plus consistency between elimination results
//! and exhaustive counting.

use gf2core::oracle;
use gf2core::{BitVec, Gf2Matrix, QuotientBasis};
use proptest::prelude::*;

const MAX_SIDE: usize = 6;

fn matrix(rows: usize, cols: usize) -> impl Strategy<Value = Gf2Matrix> {
    proptest::collection::vec(proptest::bool::ANY, rows * cols).prop_map(move |bits| {
        let entries = bits
            .iter()
            .enumerate()
            .filter(|(_, &b)| b)
            .map(|(i, _)| (i / cols.max(1), i % cols.max(1)));
        Gf2Matrix::from_entries(rows, cols, entries).unwrap()
    })
}

fn sized_triple() -> impl Strategy<Value = (Gf2Matrix, Gf2Matrix, Gf2Matrix)> {
    (1..=MAX_SIDE, 1..=MAX_SIDE, 1..=MAX_SIDE, 1..=MAX_SIDE).prop_flat_map(|(a, b, c, d)| {
        (matrix(a, b), matrix(b, c), matrix(c, d))
    })
}

fn as_mask(v: &BitVec) -> u64 {
    v.ones().fold(0u64, |m, i| m | (1 << i))
}

proptest! {
    #[test]
    fn composition_is_associative((a, b, c) in sized_triple()) {
        let left = a.compose(&b).unwrap().compose(&c).unwrap();
        let right = a.compose(&b.compose(&c).unwrap()).unwrap();
        prop_assert_eq!(left, right);
    }

    #[test]
    fn composition_distributes(dims in (1..=MAX_SIDE, 1..=MAX_SIDE, 1..=MAX_SIDE),
                               seeds in (any::<u64>(), any::<u64>(), any::<u64>())) {
        let (r, k, c) = dims;
        let a1 = deterministic_matrix(r, k, seeds.0);
        let a2 = deterministic_matrix(r, k, seeds.1);
        let b = deterministic_matrix(k, c, seeds.2);
        let lhs = a1.add(&a2).unwrap().compose(&b).unwrap();
        let rhs = a1.compose(&b).unwrap().add(&a2.compose(&b).unwrap()).unwrap();
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn transpose_reverses_products((a, b, _c) in sized_triple()) {
        let lhs = a.compose(&b).unwrap().transpose();
        let rhs = b.transpose().compose(&a.transpose()).unwrap();
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn rank_is_transpose_invariant(rows in 1..=MAX_SIDE, cols in 1..=MAX_SIDE, seed in any::<u64>()) {
        let m = deterministic_matrix(rows, cols, seed);
        prop_assert_eq!(m.rank(), m.transpose().rank());
    }

    #[test]
    fn rank_nullity_and_kernel_annihilation(rows in 1..=MAX_SIDE, cols in 1..=MAX_SIDE, seed in any::<u64>()) {
        let m = deterministic_matrix(rows, cols, seed);
        let order: Vec<usize> = (0..cols).collect();
        let kernel = m.kernel_basis(&order);
        prop_assert_eq!(kernel.len() + m.rank(), cols);
        for v in &kernel {
            prop_assert!(m.apply(v).is_zero());
        }
        prop_assert_eq!(m.image_basis().len(), m.rank());
    }

    #[test]
    fn apply_is_linear(rows in 1..=MAX_SIDE, cols in 1..=MAX_SIDE, seed in any::<u64>(),
                       bits in proptest::collection::vec(proptest::bool::ANY, 2 * MAX_SIDE)) {
        let m = deterministic_matrix(rows, cols, seed);
        let mut x = BitVec::zeros(cols);
        let mut y = BitVec::zeros(cols);
        for i in 0..cols {
            if bits[i] { x.set(i, true); }
            if bits[MAX_SIDE + i] { y.set(i, true); }
        }
        let mut xy = x.clone();
        xy.xor_assign(&y);
        let mut sum = m.apply(&x);
        sum.xor_assign(&m.apply(&y));
        prop_assert_eq!(m.apply(&xy), sum);
    }

    #[test]
    fn solve_finds_constructed_solutions(rows in 1..=MAX_SIDE, cols in 1..=MAX_SIDE, seed in any::<u64>()) {
        let m = deterministic_matrix(rows, cols, seed);
        let y = deterministic_vector(cols, seed ^ 0x9e37_79b9);
        let rhs = m.apply(&y);
        let x = m.solve(&rhs).expect("constructed right-hand side is solvable");
        prop_assert_eq!(m.apply(&x), rhs);
    }

    #[test]
    fn inverse_roundtrips_when_it_exists(n in 1..=MAX_SIDE, seed in any::<u64>()) {
        let m = deterministic_matrix(n, n, seed);
        match m.inverse() {
            Ok(inv) => {
                prop_assert_eq!(m.compose(&inv).unwrap(), Gf2Matrix::identity(n));
                prop_assert_eq!(inv.compose(&m).unwrap(), Gf2Matrix::identity(n));
            }
            Err(_) => prop_assert!(m.rank() < n),
        }
    }

    #[test]
    fn quotient_rank_matches_counting(dim in 1..=MAX_SIDE, seed in any::<u64>()) {
        let denom: Vec<BitVec> = (0..3).map(|i| deterministic_vector(dim, seed.wrapping_add(i))).collect();
        let numer: Vec<BitVec> = (0..3).map(|i| deterministic_vector(dim, seed.wrapping_add(100 + i))).collect();
        let order: Vec<usize> = (0..dim).collect();
        let qb = QuotientBasis::new(dim, &order, &denom, &numer);
        let denom_masks: Vec<u64> = denom.iter().map(as_mask).collect();
        let numer_masks: Vec<u64> = numer.iter().map(as_mask).collect();
        prop_assert_eq!(qb.rank(), oracle::quotient_rank(&denom_masks, &numer_masks));
    }

    #[test]
    fn express_reconstructs_classes(dim in 1..=MAX_SIDE, seed in any::<u64>()) {
        let denom: Vec<BitVec> = (0..2).map(|i| deterministic_vector(dim, seed.wrapping_add(i))).collect();
        let numer: Vec<BitVec> = (0..3).map(|i| deterministic_vector(dim, seed.wrapping_add(7 + i))).collect();
        let order: Vec<usize> = (0..dim).collect();
        let qb = QuotientBasis::new(dim, &order, &denom, &numer);
        for v in &numer {
            let coords = qb.express(v).expect("candidates lie in the span");
            // v + sum of chosen representatives must land in span(denom).
            let mut residue = v.clone();
            for i in coords.ones() {
                residue.xor_assign(&qb.representatives()[i]);
            }
            let denom_masks: Vec<u64> = denom.iter().map(as_mask).collect();
            let size_with = oracle::span_size(
                &denom_masks
                    .iter()
                    .copied()
                    .chain([as_mask(&residue)])
                    .collect::<Vec<_>>(),
            );
            prop_assert_eq!(size_with, oracle::span_size(&denom_masks));
        }
    }
}

/// Deterministic pseudo-random matrix from a seed, so shrinking stays stable.
fn deterministic_matrix(rows: usize, cols: usize, seed: u64) -> Gf2Matrix {
    let mut state = seed | 1;
    let mut m = Gf2Matrix::zero(rows, cols);
    for r in 0..rows {
        for c in 0..cols {
            state = state
                .wrapping_mul(6364136223846793005)
                .wrapping_add(1442695040888963407);
            if state >> 63 == 1 {
                m.flip(r, c);
            }
        }
    }
    m
}

fn deterministic_vector(len: usize, seed: u64) -> BitVec {
    let mut state = seed | 1;
    let mut v = BitVec::zeros(len);
    for i in 0..len {
        state = state
            .wrapping_mul(6364136223846793005)
            .wrapping_add(1442695040888963407);
        if state >> 63 == 1 {
            v.set(i, true);
        }
    }
    v
}
