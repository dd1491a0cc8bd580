use calf::format::{
    parse_dfa, parse_machine, parse_wfa, parse_words, serialize_dfa, serialize_wfa, serialize_words, Machine,
};
use calf_core::dfa::fixtures::{ab, even_a};
use calf_core::weighted::wfa::fixtures::count_a;
use calf_core::weighted::{ratio, Wfa};
use calf_core::{Alphabet, Dfa, Word};
use proptest::prelude::*;

const D1: &str = "\
dfa
# even number of a
alphabet: a b
states: even odd
initial: even
accepting: even
even a -> odd
even b -> even
odd a -> even   # back
odd b -> odd
";

#[test]
fn reads_named_states_in_file_order() {
    let d = parse_dfa(D1).unwrap();
    assert_eq!(d, even_a());
}

#[test]
fn missing_transition_is_named() {
    let text = D1.replace("odd b -> odd\n", "");
    let e = parse_dfa(&text).unwrap_err();
    assert!(e.message.contains("(odd, b)"), "{e}");
}

#[test]
fn errors_carry_line_numbers() {
    let cases = [
        (D1.replace("even b -> even", "even c -> even"), 8, "unknown symbol `c`"),
        (D1.replace("odd a -> even", "odd a -> nowhere"), 9, "unknown state `nowhere`"),
        (D1.replace("odd b -> odd", "odd a -> odd"), 10, "duplicate transition"),
        (D1.replace("alphabet: a b", "alphabet: a eps"), 3, "reserved"),
        (D1.replace("initial: even", "initial: x"), 5, "unknown state `x`"),
        (D1.replace("even b -> even", "even b even"), 8, "expected"),
        (D1.replace("dfa\n", "dfb\n"), 1, "expected `dfa`"),
    ];
    for (text, line, needle) in cases {
        let e = parse_dfa(&text).unwrap_err();
        assert_eq!(e.line, line, "{e}");
        assert!(e.to_string().contains(needle), "{e}");
        assert!(e.to_string().starts_with(&format!("line {line}: ")));
    }
}

#[test]
fn serialized_dfa_uses_canonical_names() {
    let text = serialize_dfa(&even_a());
    assert!(text.starts_with("dfa\nalphabet: a b\nstates: q0 q1\ninitial: q0\naccepting: q0\n"));
    assert!(text.contains("q1 a -> q0\n"));
}

#[test]
fn no_accepting_states() {
    let d = Dfa::from_fn(ab(), 1, 0, |_| false, |_, _| 0).unwrap();
    let text = serialize_dfa(&d);
    assert!(text.contains("accepting:\n"));
    assert_eq!(parse_dfa(&text).unwrap(), d);
}

#[test]
fn wfa_example_file() {
    let text = "wfa\nalphabet: a b\ndim: 2\ninit: 1 0\nout: 0 1\na: 1 1 / 0 1\nb: 1 0 / 0 1\n";
    let w = parse_wfa(text).unwrap();
    assert_eq!(w, count_a());
    assert_eq!(serialize_wfa(&w), text);
}

#[test]
fn wfa_fractions_and_errors() {
    let text = "wfa\nalphabet: a\ndim: 1\ninit: 1/2\nout: -3/4\na: 2/6\n";
    let w = parse_wfa(text).unwrap();
    assert_eq!(w.eval(&[0]).unwrap(), ratio(-1, 8));
    assert_eq!(parse_wfa(&serialize_wfa(&w)).unwrap(), w);

    let e = parse_wfa(&text.replace("2/6", "0.5")).unwrap_err();
    assert_eq!(e.line, 6);
    let e = parse_wfa(&text.replace("init: 1/2", "init: 1 2")).unwrap_err();
    assert_eq!(e.line, 4);
    let e = parse_wfa(&text.replace("a: 2/6\n", "")).unwrap_err();
    assert!(e.message.contains("missing matrix"), "{e}");
    let e = parse_wfa(&text.replace("1/2", "1/0")).unwrap_err();
    assert_eq!(e.line, 4);
}

#[test]
fn zero_dimensional_wfa() {
    let z = Wfa::zero(ab());
    let text = serialize_wfa(&z);
    assert_eq!(text, "wfa\nalphabet: a b\ndim: 0\ninit:\nout:\na:\nb:\n");
    assert_eq!(parse_wfa(&text).unwrap(), z);
}

#[test]
fn machine_dispatch() {
    assert!(matches!(parse_machine(D1), Ok(Machine::Dfa(_))));
    assert!(matches!(parse_machine(&serialize_wfa(&count_a())), Ok(Machine::Wfa(_))));
    assert_eq!(parse_machine("\n# nothing\n").unwrap_err().line, 1);
}

#[test]
fn word_lists() {
    let a = ab();
    let words = parse_words("eps\na b a\n\n# c\nb\n", &a).unwrap();
    assert_eq!(words, vec![Word::empty(), Word::from([0, 1, 0]), Word::from([1])]);
    assert_eq!(serialize_words(&words, &a), "eps\na b a\nb\n");
    assert_eq!(parse_words("a\na c\n", &a).unwrap_err().line, 2);
}

fn dfas() -> impl Strategy<Value = Dfa> {
    (any::<u64>(), 1usize..8, 1usize..4).prop_map(|(seed, n, k)| {
        let tokens = ["a", "b", "long_symbol"];
        Dfa::random(seed, n, &Alphabet::new(tokens[..k].iter().copied()).unwrap()).unwrap()
    })
}

proptest! {
    #[test]
    fn dfa_round_trip(d in dfas()) {
        prop_assert_eq!(parse_dfa(&serialize_dfa(&d)).unwrap(), d);
    }

    #[test]
    fn wfa_round_trip(seed in any::<u64>(), dim in 0usize..4) {
        let w = Wfa::random(seed, dim, &ab(), &[-2, -1, 0, 1, 3]).unwrap().scale(&ratio(1, 3));
        prop_assert_eq!(parse_wfa(&serialize_wfa(&w)).unwrap(), w);
    }

    #[test]
    fn words_round_trip(words in proptest::collection::vec(proptest::collection::vec(0usize..2, 0..5), 0..10)) {
        let words: Vec<Word> = words.into_iter().map(Word::from).collect();
        prop_assert_eq!(parse_words(&serialize_words(&words, &ab()), &ab()).unwrap(), words);
    }
}
