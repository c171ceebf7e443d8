use proptest::prelude::*;

use super::{confirm_zero, partial, Atom, Expr, MultiIndex};
use crate::jet::{JetSpace, TotalDerivative};
use crate::random::strategies::{expr, poly};

fn space() -> JetSpace {
    JetSpace::new(1, 1, 1, 3).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn add_and_mul_commute(a in expr(), b in expr()) {
        prop_assert_eq!(a.add(&b), b.add(&a));
        prop_assert_eq!(a.mul(&b), b.mul(&a));
    }

    #[test]
    fn mul_distributes(a in expr(), b in expr(), c in expr()) {
        prop_assert_eq!(a.mul(&b.add(&c)), a.mul(&b).add(&a.mul(&c)));
    }

    #[test]
    fn add_associates(a in expr(), b in expr(), c in expr()) {
        prop_assert_eq!(a.add(&b).add(&c), a.add(&b.add(&c)));
    }

    #[test]
    fn normalization_is_idempotent(a in expr()) {
        let rebuilt = Expr::from_poly(a.num().clone()).div(&Expr::from_poly(a.den().clone())).unwrap();
        prop_assert_eq!(&rebuilt, &a);
        prop_assert!(a.den().leading_coeff() == num_traits::One::one());
    }

    #[test]
    fn division_inverts_multiplication(a in expr(), b in expr()) {
        prop_assume!(!b.is_zero());
        prop_assert_eq!(a.mul(&b).div(&b).unwrap(), a);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn total_derivative_is_leibniz(a in expr(), b in expr()) {
        let s = space();
        let d = TotalDerivative::new(&s, 0);
        let lhs = d.apply(&a.mul(&b)).unwrap();
        let rhs = d.apply(&a).unwrap().mul(&b).add(&a.mul(&d.apply(&b).unwrap()));
        prop_assert!(lhs.sub(&rhs).is_zero());
    }

    #[test]
    fn partial_is_leibniz(a in expr(), b in expr()) {
        let u = Atom::jet(0, MultiIndex::zero(1));
        let lhs = partial(&a.mul(&b), &u).unwrap();
        let rhs = partial(&a, &u).unwrap().mul(&b).add(&a.mul(&partial(&b, &u).unwrap()));
        prop_assert_eq!(lhs, rhs);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(40))]

    /// An exact zero samples to zero.
    #[test]
    fn zero_samples_to_zero(a in expr(), b in expr(), c in poly(), seed in any::<u64>()) {
        let e = a.mul(&b.add(&c)).sub(&a.mul(&b)).sub(&a.mul(&c));
        prop_assert!(e.is_zero());
        prop_assert!(confirm_zero(&e, 30, seed).unwrap());
        let q = a.div(&c).ok();
        if let Some(q) = q {
            prop_assert!(confirm_zero(&q.mul(&c).sub(&a), 30, seed).unwrap());
        }
    }
}
