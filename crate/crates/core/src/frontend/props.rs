use proptest::prelude::*;

use super::{parse_expression, Declarations};
use crate::random::strategies::{expr, names, poly};

fn decl() -> Declarations {
    Declarations {
        names: names(),
        constants: vec!["m".into()],
        functions: vec![("g".into(), 1)],
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn print_parse_round_trip(e in expr()) {
        let d = decl();
        let text = d.print(&e);
        prop_assert_eq!(parse_expression(&text, &d).unwrap(), e, "{}", text);
    }

    #[test]
    fn factored_print_round_trip(a in expr(), b in poly(), k in 1i64..4) {
        prop_assume!(!b.is_zero());
        let e = a.div(&b.powi(k).unwrap()).unwrap();
        let d = decl();
        let text = d.names.print_factored(&e);
        prop_assert_eq!(parse_expression(&text, &d).unwrap(), e, "{}", text);
    }
}
