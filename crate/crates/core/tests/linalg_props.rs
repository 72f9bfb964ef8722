use covrep::io::{hexfloat, parse_hexfloat, rep_from_json, rep_to_json};
use covrep::linalg::{pinv, rank, svd, ComplexMatrix, C64};
use covrep::CovariantRep;
use proptest::prelude::*;

fn matrix(rows: usize, cols: usize) -> impl Strategy<Value = ComplexMatrix> {
    proptest::collection::vec((-3.0f64..3.0, -3.0f64..3.0), rows * cols)
        .prop_map(move |v| ComplexMatrix::new(rows, cols, v.into_iter().map(|(a, b)| C64::new(a, b)).collect()).unwrap())
}

fn shaped() -> impl Strategy<Value = ComplexMatrix> {
    (1usize..=5, 1usize..=5).prop_flat_map(|(r, c)| matrix(r, c))
}

/// Product of two random factors with a forced inner dimension, so rank ≤ k.
fn low_rank() -> impl Strategy<Value = ComplexMatrix> {
    (1usize..=5, 1usize..=5, 1usize..=3).prop_flat_map(|(r, c, k)| (matrix(r, k), matrix(k, c)).prop_map(|(a, b)| &a * &b))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn penrose_equations(a in prop_oneof![shaped(), low_rank()]) {
        let w = pinv(&a, Some(1e-9 * (1.0 + a.frobenius_norm()))).unwrap();
        let s = 1.0 + a.frobenius_norm() * w.frobenius_norm();
        let aw = &a * &w;
        let wa = &w * &a;
        prop_assert!((&aw * &a).dist(&a) <= 1e-9 * s * (1.0 + a.frobenius_norm()));
        prop_assert!((&wa * &w).dist(&w) <= 1e-9 * s * (1.0 + w.frobenius_norm()));
        prop_assert!(aw.dist(&aw.adjoint()) <= 1e-9 * s);
        prop_assert!(wa.dist(&wa.adjoint()) <= 1e-9 * s);
    }

    #[test]
    fn svd_reconstructs_and_orders(a in shaped()) {
        let f = svd(&a).unwrap();
        prop_assert!(f.reconstruct().dist(&a) <= 1e-11 * (1.0 + a.frobenius_norm()));
        prop_assert!(f.singular_values.windows(2).all(|w| w[0] >= w[1]));
    }

    #[test]
    fn low_rank_rank_is_bounded(a in low_rank()) {
        let r = rank(&a, 1e-9).unwrap();
        prop_assert!(r <= a.rows().min(a.cols()));
        let w = pinv(&a, Some(1e-9 * (1.0 + a.frobenius_norm()))).unwrap();
        prop_assert_eq!(rank(&w, 1e-9).unwrap(), r);
    }

    #[test]
    fn kron_lift_matches_blocks(a in matrix(2, 4), copies in 1usize..=3) {
        let lifted = a.kron_identity_left(copies);
        let want = ComplexMatrix::identity(copies).kron(&a);
        prop_assert_eq!(lifted.data(), want.data());
    }

    #[test]
    fn hexfloat_roundtrip(x in proptest::num::f64::ANY) {
        let y = parse_hexfloat(&hexfloat(x)).unwrap();
        prop_assert!(x.to_bits() == y.to_bits() || (x.is_nan() && y.is_nan()));
    }

    #[test]
    fn rep_json_roundtrip(h in 1usize..=3, n in 1usize..=2, seed in any::<u64>()) {
        let rep = covrep::random::random_rep(seed, h, n, covrep::random::RepKind::Dense, &covrep::Config::default()).unwrap();
        let back: CovariantRep = rep_from_json(&rep_to_json(&rep, serde_json::Value::Null)).unwrap();
        prop_assert_eq!(back.v_tilde().data(), rep.v_tilde().data());
    }
}
