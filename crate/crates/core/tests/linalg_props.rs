mod common;

use common::*;
use num::Zero;
use proptest::prelude::*;
use subdirect::linalg::{kernel_basis, rref, subspaces_intersect_trivially};
use subdirect::{RationalMatrix, Subspace};

fn matrix() -> impl Strategy<Value = (usize, Vec<Vec<Q>>)> {
    (1usize..=4, 1usize..=4).prop_flat_map(|(r, c)| (Just(c), prop::collection::vec(small_vector(c), r)))
}

fn square() -> impl Strategy<Value = Vec<Vec<Q>>> {
    (1usize..=4).prop_flat_map(|n| prop::collection::vec(small_vector(n), n))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn rref_is_idempotent_and_preserves_row_space((c, rows) in matrix()) {
        let m = RationalMatrix::from_rows(c, &rows).unwrap();
        let (r, pivots) = rref(&m);
        prop_assert_eq!(rref(&r).0, r.clone());
        prop_assert_eq!(pivots.len(), rank(&rows, c));
        let stacked: Vec<Vec<Q>> = rows.iter().cloned().chain(r.to_rows()).collect();
        prop_assert_eq!(rank(&stacked, c), pivots.len());
    }

    #[test]
    fn kernel_is_annihilated_and_complementary((c, rows) in matrix()) {
        let m = RationalMatrix::from_rows(c, &rows).unwrap();
        let k = kernel_basis(&m);
        prop_assert_eq!(k.dim() + rank(&rows, c), c);
        for v in k.basis().rows_iter() {
            prop_assert!(m.mul_vec(v).unwrap().iter().all(Zero::is_zero));
        }
    }

    #[test]
    fn inverse_exists_iff_full_rank(rows in square()) {
        let n = rows.len();
        let m = RationalMatrix::from_rows(n, &rows).unwrap();
        let full = rank(&rows, n) == n;
        prop_assert_eq!(!m.determinant().unwrap().is_zero(), full);
        match m.inverse() {
            Ok(inv) => {
                prop_assert!(full);
                prop_assert_eq!(m.mul(&inv).unwrap(), RationalMatrix::identity(n));
            }
            Err(_) => prop_assert!(!full),
        }
    }

    #[test]
    fn trivial_intersection_matches_dimension_count(
        (n, u, v) in (1usize..=4).prop_flat_map(|n| (Just(n), prop::collection::vec(small_vector(n), 0..=3), prop::collection::vec(small_vector(n), 0..=3)))
    ) {
        let su = Subspace::span(n, &u).unwrap();
        let sv = Subspace::span(n, &v).unwrap();
        let both: Vec<Vec<Q>> = u.iter().chain(&v).cloned().collect();
        let expected = rank(&both, n) == rank(&u, n) + rank(&v, n);
        prop_assert_eq!(subspaces_intersect_trivially(&su, &sv).unwrap(), expected);
    }

    #[test]
    fn membership_matches_constraint_matrix(
        (n, u, x) in (1usize..=4).prop_flat_map(|n| (Just(n), prop::collection::vec(small_vector(n), 0..=3), small_vector(n)))
    ) {
        let s = Subspace::span(n, &u).unwrap();
        let with_x: Vec<Vec<Q>> = u.iter().cloned().chain(std::iter::once(x.clone())).collect();
        let expected = rank(&with_x, n) == rank(&u, n);
        prop_assert_eq!(s.contains(&x).unwrap(), expected);
        let k = s.constraint_matrix();
        prop_assert_eq!(k.mul_vec(&x).unwrap().iter().all(Zero::is_zero), expected);
    }
}
