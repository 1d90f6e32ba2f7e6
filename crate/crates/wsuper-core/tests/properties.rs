//! Randomized invariants: restricted structure, Koszul associativity, parity
//! change and the arithmetic of the divisibility bounds.

use proptest::prelude::*;
use wsuper_core::algebra_data::{build_gl, Parity};
use wsuper_core::linalg::{vec_add, SparseVec};
use wsuper_core::modular::{jacobson_terms, reduce_mod_p};
use wsuper_core::scalar::Scalar;
use wsuper_core::superstructure::{direct_sum_bound, graded_tensor, natural_module, simple_algebra, simple_types};

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn jacobson_formula_on_random_even_elements(cx in prop::collection::vec(0i64..5, 5), cy in prop::collection::vec(0i64..5, 5)) {
        let g = build_gl(2, 1).unwrap();
        let m = reduce_mod_p(&g, 5).unwrap();
        let evens = m.base.indices_of_parity(Parity::Even);
        let mut x = m.base.zero();
        let mut y = m.base.zero();
        for (k, &i) in evens.iter().enumerate() {
            x[i] = Scalar::fp(cx[k], 5);
            y[i] = Scalar::fp(cy[k], 5);
        }
        let lhs = m.pmap_of(&vec_add(&x, &y)).unwrap();
        let mut rhs = vec_add(&m.pmap_of(&x).unwrap(), &m.pmap_of(&y).unwrap());
        for s in jacobson_terms(&m.base, &x, &y, 5).unwrap() {
            rhs = vec_add(&rhs, &s);
        }
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn graded_tensor_is_associative(a in 0usize..7, b in 0usize..7, i in 0usize..1000, j in 0usize..1000, k in 0usize..1000) {
        let types = simple_types(2);
        let t = graded_tensor(&simple_algebra(types[a % types.len()]).unwrap(), &simple_algebra(types[b % types.len()]).unwrap());
        let n = t.dim();
        let e = |x: usize| -> SparseVec<usize> { [(x % n, Scalar::one())].into_iter().collect() };
        let left = t.mul(&t.mul(&e(i), &e(j)), &e(k));
        let right = t.mul(&e(i), &t.mul(&e(j), &e(k)));
        prop_assert_eq!(left, right);
    }

    #[test]
    fn parity_change_flips_and_squares_to_identity(a in 0usize..7) {
        let types = simple_types(2);
        let t = types[a % types.len()];
        let v = natural_module(t);
        let pv = v.parity_change();
        prop_assert_eq!(pv.dims(), (v.dims().1, v.dims().0));
        prop_assert_eq!(&pv.parity_change().parity, &v.parity);
        prop_assert!(pv.is_module_over(&simple_algebra(t).unwrap()));
    }

    #[test]
    fn direct_sum_exponents_are_integral(ds in prop::collection::vec((0usize..4, 0usize..5), 1..5)) {
        let summands: Vec<(usize, usize)> = ds.iter().map(|&(a, b)| (2 * a, b)).collect();
        let b = direct_sum_bound(&summands, 3).unwrap();
        prop_assert_eq!((b.d1 + b.l) % 2, 0);
        prop_assert_eq!(&b.bound % &b.floor_bound, num_bigint::BigInt::from(0));
        prop_assert!(b.l > 1 || b.bound == &b.floor_bound * (1 + b.l));
    }
}
