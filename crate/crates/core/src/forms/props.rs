use proptest::prelude::*;

use super::{check_mu_prolongation, d_mu, lie_mu, DiffForm};
use crate::jet::{prolong_mu, JetSpace};
use crate::random::{random_field, random_form, random_mu, random_poly};
use crate::symbolic::{Atom, Expr, MultiIndex, Sampler};

fn coords() -> Vec<Atom> {
    vec![
        Atom::indep(0),
        Atom::indep(1),
        Atom::jet(0, MultiIndex::zero(2)),
        Atom::jet(0, MultiIndex::unit(2, 0)),
    ]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn d_is_nilpotent(seed in any::<u64>(), k in 0usize..3) {
        let c = coords();
        let a = random_form(&mut Sampler::new(seed), k, &c, &c, 2);
        prop_assert!(a.d().unwrap().d().unwrap().is_zero());
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    /// For `μ = df`: `d_μ = e^{-f} d e^f`, `d_μ² = 0` and `L^μ_X = e^{-f} L_{e^f X}`.
    #[test]
    fn exact_mu_is_a_gauge(seed in any::<u64>(), k in 0usize..3) {
        let c = coords();
        let mut smp = Sampler::new(seed);
        let f = random_poly(&mut smp, &c[..3], 2, 3);
        let (ef, emf) = (Expr::exp(&f), Expr::exp(&f.neg()));
        let mu = DiffForm::function(f).d().unwrap();
        let a = random_form(&mut smp, k, &c, &c, 2);
        let lhs = d_mu(&a, &mu).unwrap();
        prop_assert!(lhs.sub(&a.scale(&ef).d().unwrap().scale(&emf)).unwrap().is_zero());
        prop_assert!(d_mu(&lhs, &mu).unwrap().is_zero());
        let s = JetSpace::new(2, 1, 0, 1).unwrap();
        let x = random_field(&mut smp, &s, 1).as_prolonged(2);
        let scaled = x.map(|e| Ok(e.mul(&ef))).unwrap();
        // The field is not prolonged, so the form lives on the base.
        let b = random_form(&mut smp, k, &c[..3], &c[..3], 2);
        let gauge = b.lie(&scaled).unwrap().scale(&emf);
        prop_assert!(lie_mu(&x, &b, &mu).unwrap().sub(&gauge).unwrap().is_zero());
    }

    #[test]
    fn contact_criterion_accepts_mu_prolongations(seed in any::<u64>(), q in 1usize..3) {
        let s = JetSpace::new(1, q, 0, 3).unwrap();
        let mut smp = Sampler::new(seed);
        let mu = random_mu(&mut smp, &s, 1);
        let y = prolong_mu(&random_field(&mut smp, &s, 1), &mu, 2, &s).unwrap();
        prop_assert!(check_mu_prolongation(&y, &mu, &s).unwrap().pass);
    }
}
