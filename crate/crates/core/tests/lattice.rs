use dmon::exactlin::{in_lattice, is_unimodular, FreeQuotient, IntMatrix, Lattice};
use proptest::prelude::*;

fn matrix() -> impl Strategy<Value = IntMatrix> {
    (1usize..=3, 1usize..=3).prop_flat_map(|(r, c)| {
        prop::collection::vec(prop::collection::vec(-4i64..=4, c), r)
            .prop_map(|rows| IntMatrix::from_rows(&rows).unwrap())
    })
}

/// Exhaustive search for `m x = v` with entries in `[-b, b]`.
fn brute(m: &IntMatrix, v: &[i64], b: i64) -> bool {
    let mut c = vec![-b; m.cols()];
    loop {
        if m.mul_vec(&c).unwrap() == v {
            return true;
        }
        let mut k = 0;
        while k < c.len() && c[k] == b {
            c[k] = -b;
            k += 1;
        }
        if k == c.len() {
            return false;
        }
        c[k] += 1;
    }
}

proptest! {
    #[test]
    fn membership_matches_search((m, v) in matrix().prop_flat_map(|m| {
        let r = m.rows();
        (Just(m), prop::collection::vec(-5i64..=5, r))
    })) {
        let fast = in_lattice(&m, &v).unwrap();
        if let Some(x) = &fast {
            prop_assert_eq!(m.mul_vec(x).unwrap(), v.clone());
        }
        if brute(&m, &v, 6) {
            prop_assert!(fast.is_some());
        }
        prop_assert_eq!(Lattice::from_columns(&m).unwrap().contains(&v).unwrap(), fast.is_some());
    }

    #[test]
    fn images_are_members((m, c) in matrix().prop_flat_map(|m| {
        let k = m.cols();
        (Just(m), prop::collection::vec(-3i64..=3, k))
    })) {
        let v = m.mul_vec(&c).unwrap();
        prop_assert!(in_lattice(&m, &v).unwrap().is_some());
    }

    #[test]
    fn free_quotient_splits(m in matrix()) {
        let lat = Lattice::from_columns(&m).unwrap();
        if let Some(q) = FreeQuotient::new(&lat).unwrap() {
            prop_assert_eq!(q.projection.mul(&q.lift).unwrap(), IntMatrix::identity(q.rank()));
            prop_assert!(q.projection.mul(&m).unwrap().is_zero());
            prop_assert_eq!(q.rank() + lat.rank(), lat.dim());
        }
    }
}

#[test]
fn torsion_quotient_is_refused() {
    let lat = Lattice::from_columns(&IntMatrix::from_rows(&[vec![2]]).unwrap()).unwrap();
    assert!(FreeQuotient::new(&lat).unwrap().is_none());
}

#[test]
fn unimodular_examples() {
    assert!(is_unimodular(&IntMatrix::from_rows(&[vec![2, 1], vec![1, 1]]).unwrap()).unwrap());
    assert!(!is_unimodular(&IntMatrix::from_rows(&[vec![2, 0], vec![0, 1]]).unwrap()).unwrap());
}
