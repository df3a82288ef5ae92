use proptest::prelude::*;

use vunify::parse::TermContext;
use vunify::theories;
use vunify::unifier::{Engine, Mode, UnificationProblem, UnifierSet};
use vunify::Theory;

const MODES: [Mode; 4] = [Mode::PLAIN, Mode::FAST, Mode::POST, Mode::FAST_POST];

fn xor_atom() -> impl Strategy<Value = String> {
    prop::sample::select(vec!["X", "Y", "Z", "a", "b", "mt"]).prop_map(str::to_string)
}

fn xor_sum() -> impl Strategy<Value = String> {
    prop::collection::vec(xor_atom(), 1..=2).prop_map(|xs| xs.join(" * "))
}

/// Small xor terms over three variables: sums of atoms, possibly under `f1`.
fn xor_term() -> impl Strategy<Value = String> {
    prop_oneof![
        3 => xor_sum(),
        1 => (xor_sum(), prop::collection::vec(xor_atom(), 0..=1)).prop_map(|(inner, rest)| {
            std::iter::once(format!("f1({inner})")).chain(rest).collect::<Vec<_>>().join(" * ")
        }),
    ]
}

fn problem(th: &Theory, text: &str) -> UnificationProblem {
    UnificationProblem::new(TermContext::new(th).parse_equations(text).unwrap()).unwrap()
}

fn solve(th: &Theory, p: &UnificationProblem, mode: Mode) -> (Engine, UnifierSet) {
    let mut engine = Engine::new(th).unwrap();
    let set = engine.unify(p, mode).unwrap();
    (engine, set)
}

fn check_sound(th: &Theory, p: &UnificationProblem) {
    for mode in MODES {
        let (engine, set) = solve(th, p, mode);
        for u in &set.unifiers {
            assert!(engine.is_unifier(p, u).unwrap(), "{mode:?}: {u} is not a unifier");
        }
    }
}

fn check_fast_covers_plain(th: &Theory, p: &UnificationProblem) {
    let (mut engine, plain) = solve(th, p, Mode::PLAIN);
    let fast = engine.unify(p, Mode::FAST).unwrap();
    for u in &plain.unifiers {
        let mut covered = false;
        for g in &fast.unifiers {
            if engine.subsumes_eb(g, u, &plain.vars).unwrap() {
                covered = true;
                break;
            }
        }
        assert!(covered, "plain unifier {u} is not covered by the fast set");
    }
}

fn check_minimal(th: &Theory, p: &UnificationProblem) {
    for mode in [Mode { quotient: false, ..Mode::POST }, Mode::POST, Mode::FAST_POST] {
        let (mut engine, set) = solve(th, p, mode);
        let us = &set.unifiers;
        for i in 0..us.len() {
            for j in 0..us.len() {
                if i == j {
                    continue;
                }
                let ij = engine.subsumes_eb(&us[i], &us[j], &set.vars).unwrap();
                let ji = engine.subsumes_eb(&us[j], &us[i], &set.vars).unwrap();
                assert!(!(ij && !ji), "{mode:?}: {} strictly subsumes {}", us[i], us[j]);
                if mode.quotient {
                    assert!(!(ij && ji), "{mode:?}: {} and {} are equivalent", us[i], us[j]);
                }
            }
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 24, ..ProptestConfig::default() })]

    #[test]
    fn random_xor_problems(l in xor_term(), r in xor_term()) {
        let th = theories::xor();
        let p = problem(&th, &format!("{l} =? {r}"));
        check_sound(&th, &p);
        check_fast_covers_plain(&th, &p);
        check_minimal(&th, &p);
    }
}

#[test]
fn xor_examples() {
    let th = theories::xor();
    for text in ["X =? U * V", "X * Y =? U * V", "X * a =? Y * b", "f1(X) * f1(Y) =? f1(Z) * f1(Z * U)"] {
        let p = problem(&th, text);
        check_sound(&th, &p);
        check_fast_covers_plain(&th, &p);
        check_minimal(&th, &p);
    }
}

#[test]
fn ag_examples() {
    let th = theories::abelian_group();
    for text in ["X + Y =? a", "X + -(Y) =? 0", "X + a =? Y + b"] {
        let p = problem(&th, text);
        check_sound(&th, &p);
        check_fast_covers_plain(&th, &p);
        check_minimal(&th, &p);
    }
}

#[test]
fn systems_of_equations() {
    let th = theories::xor();
    let p = problem(&th, "X * Y =? a /\\ Y * Z =? b");
    check_sound(&th, &p);
    check_fast_covers_plain(&th, &p);
    check_minimal(&th, &p);
    let (_, set) = solve(&th, &p, Mode::FAST_POST);
    assert_eq!(set.len(), 1);
}
