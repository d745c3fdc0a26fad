mod common;

use common::poly;
use freereg::expr::{format, lower, parse, Expr};
use proptest::prelude::*;

proptest! {
    #![proptest_config(ProptestConfig::with_cases(500))]

    #[test]
    fn format_parse_round_trip(p in (1usize..=4).prop_flat_map(|n| poly(n, 5, 6))) {
        let text = format(&p);
        let back = lower(&parse(&text).unwrap(), p.n()).unwrap();
        prop_assert_eq!(back, p);
    }

    #[test]
    fn parser_never_panics(s in "[x0-9i+*^() ./a-z-]{0,24}") {
        if let Err(e) = parse(&s) {
            prop_assert!(e.offset <= s.len());
            prop_assert!(!e.reason.is_empty() && !e.reason.contains('\n'));
        }
    }
}

#[test]
fn precedence_fixture() {
    assert_eq!(parse("-x1^2").unwrap(), Expr::Neg(Box::new(Expr::Pow(Box::new(Expr::Var(1)), 2))));
    assert_eq!(parse("−x1^2").unwrap(), parse("-x1^2").unwrap());
}
