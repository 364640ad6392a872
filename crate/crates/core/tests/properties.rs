use ifcwod::rdf::{self, Format, Graph, Literal, Term, Triple};
use ifcwod::sparql::parse_query;
use ifcwod::step::{decode_string, encode_string, parse_spf, StepModel};
use proptest::prelude::*;

proptest! {
    #![proptest_config(ProptestConfig { cases: 100, rng_seed: proptest::test_runner::RngSeed::Fixed(17), ..ProptestConfig::default() })]

    #[test]
    fn step_strings_round_trip(s in "\\PC*") {
        prop_assert_eq!(decode_string(&encode_string(&s)).unwrap(), s);
    }

    #[test]
    fn step_string_params_survive_a_file(s in "\\PC{0,40}") {
        let text = format!("ISO-10303-21;\nHEADER;\nENDSEC;\nDATA;\n#1=IFCLABEL('{}');\nENDSEC;\nEND-ISO-10303-21;\n", encode_string(&s));
        let m: StepModel = parse_spf(&text).unwrap();
        prop_assert_eq!(m.get(1).unwrap().params[0].as_str(), Some(s.as_str()));
    }

    #[test]
    fn literals_round_trip(s in "\\PC*", lang in proptest::option::of("[a-z]{2}(-[A-Z]{2})?")) {
        let lit = match lang {
            Some(l) => Literal::lang(s, l).unwrap(),
            None => Literal::string(s),
        };
        let mut g = Graph::new();
        g.insert(Triple::new(Term::iri("http://e.org/s").unwrap(), Term::iri("http://e.org/p").unwrap(), Term::Literal(lit)).unwrap());
        for f in [Format::Turtle, Format::NTriples] {
            let back = rdf::parse(&rdf::serialize(&g, f), f).unwrap();
            prop_assert!(back.is_isomorphic(&g));
        }
    }

    #[test]
    fn query_parser_never_panics(s in "[?a-zA-Z{}<>:. ;,\"\\n]{0,60}") {
        let _ = parse_query(&format!("SELECT * WHERE {{ {s} }}"));
        let _ = parse_query(&s);
    }
}
