use forcing::GradedRing;
use forcing_cli::case::{parse_case_files, Case, CaseFile, CaseOptions};
use proptest::prelude::*;

fn monomial() -> impl Strategy<Value = String> {
    (0u32..4, 0u32..4, 0u32..4, 1u32..7).prop_map(|(a, b, c, k)| format!("{k}*x^{a}*y^{b}*z^{c}"))
}

fn form() -> impl Strategy<Value = String> {
    prop::collection::vec(monomial(), 1..4).prop_map(|ms| ms.join("+"))
}

fn options() -> impl Strategy<Value = CaseOptions> {
    (
        prop::option::of(0u32..4),
        prop::option::of(0usize..2000),
        prop::option::of(any::<u64>()),
        prop::option::of(1usize..50_000),
    )
        .prop_map(|(e_max, budget, seed, degree_cap)| CaseOptions {
            e_max,
            budget,
            seed,
            degree_cap,
            test_element: None,
        })
}

fn case() -> impl Strategy<Value = Case> {
    (
        prop::option::of("[a-z]{1,8}"),
        prop::collection::vec(form(), 1..4),
        form(),
        prop::option::of(-3i64..10),
        options(),
    )
        .prop_map(|(name, generators, candidate, twist, options)| Case {
            name,
            generators,
            candidate,
            twist,
            options,
        })
}

proptest! {
    #[test]
    fn case_files_survive_print_and_parse(
        p in prop::sample::select(vec![2u64, 3, 5, 7]),
        relation in prop::option::of(form()),
        cases in prop::collection::vec(case(), 0..4),
    ) {
        let file = CaseFile {
            characteristic: p,
            variables: vec!["x".into(), "y".into(), "z".into()],
            relation,
            deg_h: None,
            cases,
        };
        let text = serde_json::to_string_pretty(&file).unwrap();
        prop_assert_eq!(parse_case_files(&text).unwrap(), vec![file.clone()]);
        let suite = serde_json::to_string(&vec![file.clone(), file.clone()]).unwrap();
        prop_assert_eq!(parse_case_files(&suite).unwrap(), vec![file.clone(), file]);
    }

    #[test]
    fn printed_polynomials_reparse(text in form(), p in prop::sample::select(vec![2u64, 3, 5, 7])) {
        let ring = GradedRing::from_text(p, 3, None).unwrap();
        let f = ring.parse(&text).unwrap();
        let printed = ring.format(&f);
        prop_assert_eq!(ring.parse(&printed).unwrap(), f);
        prop_assert_eq!(ring.format(&ring.parse(&printed).unwrap()), printed);
    }
}
