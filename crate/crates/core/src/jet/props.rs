use proptest::prelude::*;

use super::{prolong, prolong_lambda, prolong_mu, prolong_standard, JetSpace, Twist};
use crate::forms::MatrixOneForm;
use crate::random::{first_order_atoms, random_field, random_mu, random_poly};
use crate::symbolic::{MultiIndex, Sampler};

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn total_derivatives_commute(seed in any::<u64>()) {
        let s = JetSpace::new(2, 1, 0, 3).unwrap();
        let e = random_poly(&mut Sampler::new(seed), &first_order_atoms(&s), 3, 4);
        let xt = s.total_derivative(&s.total_derivative(&e, 1).unwrap(), 0).unwrap();
        let tx = s.total_derivative(&s.total_derivative(&e, 0).unwrap(), 1).unwrap();
        prop_assert_eq!(xt, tx);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn standard_prolongation_is_coherent(seed in any::<u64>(), p in 1usize..3, q in 1usize..3, n in 1usize..3) {
        let s = JetSpace::new(p, q, 0, n + 1).unwrap();
        let x = random_field(&mut Sampler::new(seed), &s, 2);
        let hi = prolong_standard(&x, n + 1, &s).unwrap();
        prop_assert_eq!(hi.restrict(n), prolong_standard(&x, n, &s).unwrap());
    }

    #[test]
    fn lambda_prolongation_is_coherent(seed in any::<u64>(), n in 1usize..3) {
        let s = JetSpace::new(1, 1, 0, n + 2).unwrap();
        let mut smp = Sampler::new(seed);
        let x = random_field(&mut smp, &s, 2);
        let lambda = random_poly(&mut smp, &first_order_atoms(&s), 2, 3);
        let hi = prolong_lambda(&x, &lambda, n + 1, &s).unwrap();
        prop_assert_eq!(hi.restrict(n), prolong_lambda(&x, &lambda, n, &s).unwrap());
    }

    #[test]
    fn mu_prolongation_is_coherent(seed in any::<u64>(), q in 1usize..3, n in 1usize..3) {
        let s = JetSpace::new(1, q, 0, n + 2).unwrap();
        let mut smp = Sampler::new(seed);
        let x = random_field(&mut smp, &s, 1);
        let mu = random_mu(&mut smp, &s, 1);
        let hi = prolong_mu(&x, &mu, n + 1, &s).unwrap();
        prop_assert_eq!(hi.restrict(n), prolong_mu(&x, &mu, n, &s).unwrap());
    }

    /// `μ = λ I dx` stretches every component by `λ`.
    #[test]
    fn scalar_mu_is_lambda(seed in any::<u64>(), q in 1usize..4) {
        let s = JetSpace::new(1, q, 0, 3).unwrap();
        let mut smp = Sampler::new(seed);
        let x = random_field(&mut smp, &s, 2);
        let lambda = random_poly(&mut smp, &first_order_atoms(&s), 2, 3);
        let by_mu = prolong_mu(&x, &MatrixOneForm::stretching(&lambda, 1, q), 2, &s).unwrap();
        let by_lambda = prolong(&x, &Twist::Lambda(lambda), 2, &s, None).unwrap();
        for a in 0..q {
            for idx in MultiIndex::up_to(1, 2) {
                prop_assert_eq!(by_mu.psi(a, &idx), by_lambda.psi(a, &idx));
            }
        }
    }
}
