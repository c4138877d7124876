use omega_weights::algebra::*;
use omega_weights::automata::*;
use omega_weights::instances::{Bool, Nat};
use omega_weights::ratexpr::*;
use omega_weights::series::*;
use omega_weights::valuation::RealValuation;
use proptest::prelude::*;

fn ab() -> Alphabet {
    Alphabet::from_str("ab")
}

fn t<E>(from: usize, to: usize, letter: char, weight: E) -> Transition<E> {
    Transition { from, to, letter, weight }
}

fn buchi_ab() -> MatrixAutomaton<bool> {
    MatrixAutomaton::new(2, 1, ab(), vec![1, 0], vec![0, 0], vec![t(0, 1, 'a', true), t(1, 0, 'b', true)]).unwrap()
}

fn disc_loop() -> MatrixAutomaton<f64> {
    MatrixAutomaton::new(1, 1, Alphabet::from_str("a"), vec![1], vec![1], vec![t(0, 0, 'a', 1.0)]).unwrap()
}

fn lasso(s: &str) -> OmegaWord {
    OmegaWord::parse(s).unwrap()
}

fn word(s: &str) -> Vec<char> {
    s.chars().collect()
}

/// Büchi acceptance on the explicit (state, position) graph, by transitive
/// closure.
fn buchi_oracle(a: &MatrixAutomaton<bool>, w: &OmegaWord) -> bool {
    let (u, v) = (w.prefix().len(), w.period().len());
    let positions = u + v;
    let n = a.n * positions;
    let mut r = vec![vec![false; n]; n];
    for tr in a.transitions.iter().filter(|tr| tr.weight) {
        for p in 0..positions {
            if w.letter_at(p) == tr.letter {
                let q = if p + 1 < positions { p + 1 } else { u };
                r[tr.from * positions + p][tr.to * positions + q] = true;
            }
        }
    }
    for k in 0..n {
        for i in 0..n {
            if r[i][k] {
                for j in 0..n {
                    if r[k][j] {
                        r[i][j] = true;
                    }
                }
            }
        }
    }
    let repeated = |x: usize| x / positions < a.k;
    (0..a.n).filter(|&s| a.alpha[s] > 0).any(|s| {
        let start = s * positions;
        (0..n).any(|x| repeated(x) && r[x][x] && (x == start || r[start][x]))
    })
}

/// Sum over successful runs of `α·β·∏weights`.
fn nat_run_sum(a: &MatrixAutomaton<u64>, w: &[char]) -> u64 {
    enumerate_runs(a, w)
        .iter()
        .map(|r| a.alpha[r.states[0]] * a.beta[*r.states.last().unwrap()] * r.weights.iter().product::<u64>())
        .sum()
}

/// Best discounted run weight `Σ λ^i w_i` over successful runs.
fn disc_run_max(a: &MatrixAutomaton<f64>, lambda: f64, w: &[char]) -> f64 {
    enumerate_runs(a, w)
        .iter()
        .filter(|r| a.alpha[r.states[0]] > 0 && a.beta[*r.states.last().unwrap()] > 0)
        .map(|r| r.weights.iter().enumerate().map(|(i, x)| lambda.powi(i as i32) * x).sum::<f64>())
        .fold(f64::NEG_INFINITY, f64::max)
}

#[test]
fn finitary_examples() {
    let a = compile(&Bool, &parse("a^+").unwrap(), &Alphabet::from_str("a")).unwrap();
    assert!(finitary_coeff(&Bool, &a, &word("aaa")).unwrap());
    let par = MatrixAutomaton::new(2, 0, Alphabet::from_str("a"), vec![1, 0], vec![0, 1], vec![t(0, 1, 'a', 1), t(0, 1, 'a', 1)])
        .unwrap();
    assert_eq!(finitary_coeff(&Nat, &par, &word("a")).unwrap(), nat_run_sum(&par, &word("a")));
    assert_eq!(finitary_coeff(&Nat, &par, &word("a")).unwrap(), 2);
    let d = RealValuation::disc(0.5).unwrap();
    assert!((finitary_coeff(&d, &disc_loop(), &word("aa")).unwrap() - 1.5).abs() < 1e-12);
    assert!(matches!(finitary_coeff(&Bool, &a, &[]), Err(AutomataError::EmptyWord)));
}

#[test]
fn infinitary_examples() {
    let a = buchi_ab();
    assert!(infinitary_coeff(&Bool, &a, &lasso("(ab)^w")).unwrap().value);
    assert!(!infinitary_coeff(&Bool, &a, &lasso("(a)^w")).unwrap().value);
    assert!(!infinitary_coeff(&Bool, &a, &lasso("(ba)^w")).unwrap().value);
    let d = RealValuation::disc(0.5).unwrap();
    let e = infinitary_coeff(&d, &disc_loop(), &lasso("(a)^w")).unwrap();
    assert!((e.value - 2.0).abs() < 1e-9, "{}", e.value);
    let mut k0 = buchi_ab();
    k0.k = 0;
    for w in OmegaWord::enumerate(&ab(), 2, 2) {
        assert!(!infinitary_coeff(&Bool, &k0, &w).unwrap().value);
    }
}

#[test]
fn invalid_automata_are_rejected() {
    assert!(MatrixAutomaton::<bool>::new(1, 2, ab(), vec![1], vec![1], vec![]).is_err());
    assert!(MatrixAutomaton::<bool>::new(1, 0, ab(), vec![1, 0], vec![1], vec![]).is_err());
    assert!(MatrixAutomaton::new(1, 0, ab(), vec![1], vec![1], vec![t(0, 1, 'a', true)]).is_err());
    assert!(MatrixAutomaton::new(1, 0, ab(), vec![1], vec![1], vec![t(0, 0, 'c', true)]).is_err());
}

#[test]
fn degenerate_automata_have_zero_behavior() {
    let empty_init = MatrixAutomaton::new(2, 1, ab(), vec![0, 0], vec![1, 1], vec![t(0, 1, 'a', true), t(1, 0, 'b', true)]).unwrap();
    let lone = MatrixAutomaton::<bool>::new(1, 1, ab(), vec![1], vec![1], vec![]).unwrap();
    for a in [&empty_init, &lone] {
        for w in ab().words_upto(4).into_iter().filter(|w| !w.is_empty()) {
            assert!(!finitary_coeff(&Bool, a, w.letters()).unwrap());
        }
        for w in OmegaWord::enumerate(&ab(), 2, 2) {
            assert!(!infinitary_coeff(&Bool, a, &w).unwrap().value);
        }
    }
    assert!(to_run_automata(&empty_init).is_empty());
}

#[test]
fn buchi_run_round_trip() {
    let a = buchi_ab();
    let parts = to_run_automata(&a);
    let behavior = matrix_finitary_behavior(&Bool, &a).unwrap();
    for w in ab().words_upto(6).into_iter().filter(|w| !w.is_empty()) {
        let direct = finitary_coeff(&Bool, &a, w.letters()).unwrap();
        assert_eq!(run_finitary_coeff(&Bool, &parts, w.letters()).unwrap(), direct);
        assert_eq!(coeff(&Bool, &behavior, w.letters()), direct);
    }
    let inf = matrix_infinitary_behavior(&Bool, &a).unwrap();
    for w in OmegaWord::enumerate(&ab(), 3, 3) {
        let direct = infinitary_coeff(&Bool, &a, &w).unwrap().value;
        assert_eq!(direct, buchi_oracle(&a, &w), "{w}");
        assert_eq!(run_infinitary_coeff(&Bool, &parts, &w).unwrap().value, direct, "{w}");
        assert_eq!(lasso_member(&inf, &w), direct, "{w}");
    }
}

#[test]
fn compile_examples() {
    let c = compile(&Bool, &parse("(ab)^w").unwrap(), &ab()).unwrap();
    assert!(infinitary_coeff(&Bool, &c, &lasso("(ab)^w")).unwrap().value);
    assert!(infinitary_coeff(&Bool, &c, &lasso("a(ba)^w")).unwrap().value);
    assert!(!infinitary_coeff(&Bool, &c, &lasso("b(ab)^w")).unwrap().value);
    let two = compile(&Nat, &parse("2a").unwrap(), &ab()).unwrap();
    assert_eq!(finitary_coeff(&Nat, &two, &word("a")).unwrap(), 2);
    let plus = compile(&Bool, &parse("a^+").unwrap(), &Alphabet::from_str("a")).unwrap();
    assert!(plus.n <= 2);
    assert!(finitary_coeff(&Bool, &plus, &word("a")).unwrap());
}

#[test]
fn eliminate_examples() {
    let (_, omega) = eliminate(&Bool, &buchi_ab()).unwrap();
    let target = eval_omega(&Bool, &parse_omega("(ab)^w").unwrap());
    let got = eval_omega(&Bool, &omega);
    for w in OmegaWord::enumerate(&ab(), 3, 3) {
        assert_eq!(lasso_member(&got, &w), lasso_member(&target, &w), "{omega} at {w}");
    }
    let a_loop = MatrixAutomaton::new(1, 0, ab(), vec![1], vec![1], vec![t(0, 0, 'a', true)]).unwrap();
    let (fin, _) = eliminate(&Bool, &a_loop).unwrap();
    let h = language_instance(ab()).with_bound(7);
    assert!(h.bounded_eq(&eval_fin(&Bool, &fin), &eval_fin(&Bool, &parse_fin("a^+").unwrap())).passed(), "{fin}");
    let zero = MatrixAutomaton::<bool>::new(0, 0, ab(), vec![], vec![], vec![]).unwrap();
    let (fin, omega) = eliminate(&Bool, &zero).unwrap();
    assert!(h.bounded_eq(&eval_fin(&Bool, &fin), &Series::zero()).passed());
    for w in OmegaWord::enumerate(&ab(), 2, 2) {
        assert!(!lasso_member(&eval_omega(&Bool, &omega), &w));
    }
}

#[test]
fn json_round_trip_is_one_based() {
    let a = buchi_ab();
    let j = automaton_to_json(&Bool, &a);
    assert_eq!(j.transitions[0].from, 1);
    let text = serde_json::to_string(&j).unwrap();
    assert_eq!(parse_automaton(&Bool, &text).unwrap(), a);
    let bad = text.replace("\"from\":1", "\"from\":0");
    assert!(parse_automaton(&Bool, &bad).is_err());
    assert!(parse_automaton(&Bool, "{").is_err());
}

#[test]
fn disc_truncation_converges() {
    let d = RealValuation::disc(0.5).unwrap();
    let a = MatrixAutomaton::new(
        2,
        1,
        ab(),
        vec![1, 0],
        vec![0, 0],
        vec![t(0, 1, 'a', 1.0), t(1, 0, 'b', 3.0), t(1, 1, 'b', 2.0), t(0, 0, 'a', 0.5)],
    )
    .unwrap();
    let g = ProductGraph::build(&d, &a, &lasso("(ab)^w"));
    let exact = infinitary_coeff(&d, &a, &lasso("(ab)^w")).unwrap().value;
    // Only the run 1→2→1→… reads (ab)^ω: 1 + 3λ repeated with period λ².
    assert!((exact - (1.0 + 1.5) / (1.0 - 0.25)).abs() < 1e-9, "{exact}");
    let mut previous: Option<(f64, f64)> = None;
    for depth in [1, 2, 4, 8, 16, 32] {
        let e = omega_weights::valuation::disc_value_iteration(&g, 0.5, depth);
        let bound = e.error_bound.unwrap();
        assert!((e.value - exact).abs() <= bound + 1e-12);
        if let Some((v, b)) = previous {
            assert!((e.value - v).abs() <= b + 1e-12);
            assert!(bound < b);
        }
        previous = Some((e.value, bound));
    }
}

fn nat_automaton() -> impl Strategy<Value = MatrixAutomaton<u64>> {
    (1usize..4).prop_flat_map(|n| {
        (
            Just(n),
            0..=n,
            proptest::collection::vec(0u64..3, n),
            proptest::collection::vec(0u64..3, n),
            proptest::collection::vec((0..n, 0..n, prop::sample::select(vec!['a', 'b']), 1u64..4), 0..7),
        )
            .prop_map(|(n, k, alpha, beta, ts)| {
                let ts = ts.into_iter().map(|(f, to, l, w)| t(f, to, l, w)).collect();
                MatrixAutomaton::new(n, k, ab(), alpha, beta, ts).unwrap()
            })
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn matrix_and_run_forms_agree_nat(a in nat_automaton(), w in "[ab]{1,6}") {
        let w: Vec<char> = w.chars().collect();
        let oracle = nat_run_sum(&a, &w);
        prop_assert_eq!(finitary_coeff(&Nat, &a, &w).unwrap(), oracle);
        prop_assert_eq!(run_finitary_coeff(&Nat, &to_run_automata(&a), &w).unwrap(), oracle);
        prop_assert_eq!(coeff(&Nat, &matrix_finitary_behavior(&Nat, &a).unwrap(), &w), oracle);
    }

    #[test]
    fn matrix_and_run_forms_agree_bool(a in nat_automaton(), w in "[ab]{1,6}") {
        let b = a.map_weights(&|x: &u64| *x > 0);
        let w: Vec<char> = w.chars().collect();
        let oracle = nat_run_sum(&a, &w) > 0;
        prop_assert_eq!(finitary_coeff(&Bool, &b, &w).unwrap(), oracle);
        prop_assert_eq!(coeff(&Bool, &matrix_finitary_behavior(&Bool, &b).unwrap(), &w), oracle);
    }

    #[test]
    fn matrix_and_run_forms_agree_disc(a in nat_automaton(), w in "[ab]{1,6}") {
        let d = RealValuation::disc(0.5).unwrap();
        let r = a.map_weights(&|x: &u64| *x as f64 * 0.5);
        let w: Vec<char> = w.chars().collect();
        let oracle = disc_run_max(&r, 0.5, &w);
        let direct = finitary_coeff(&d, &r, &w).unwrap();
        prop_assert!(d.equal(&direct, &oracle), "{} vs {}", direct, oracle);
        prop_assert!(d.equal(&run_finitary_coeff(&d, &to_run_automata(&r), &w).unwrap(), &oracle));
    }

    #[test]
    fn infinitary_forms_agree_bool(a in nat_automaton()) {
        let b = a.map_weights(&|x: &u64| *x > 0);
        let parts = to_run_automata(&b);
        let inf = matrix_infinitary_behavior(&Bool, &b).unwrap();
        for w in OmegaWord::enumerate(&ab(), 2, 3) {
            let oracle = buchi_oracle(&b, &w);
            prop_assert_eq!(infinitary_coeff(&Bool, &b, &w).unwrap().value, oracle);
            prop_assert_eq!(run_infinitary_coeff(&Bool, &parts, &w).unwrap().value, oracle);
            prop_assert_eq!(lasso_member(&inf, &w), oracle);
        }
    }

    #[test]
    fn kleene_round_trip_finitary(seed in any::<u64>()) {
        let Expr::Fin(e) = random_expr(seed, 4, ExprKind::Finitary, &['a', 'b']) else { unreachable!() };
        let a = compile(&Nat, &Expr::Fin(e.clone()), &ab()).unwrap();
        let s = eval_fin(&Nat, &e);
        for w in ab().words_upto(8).into_iter().filter(|w| !w.is_empty()) {
            prop_assert_eq!(finitary_coeff(&Nat, &a, w.letters()).unwrap(), coeff(&Nat, &s, w.letters()), "{} at {}", e, w);
        }
    }

    #[test]
    fn kleene_round_trip_omega(seed in any::<u64>()) {
        let Expr::Omega(e) = random_expr(seed, 3, ExprKind::Omega, &['a', 'b']) else { unreachable!() };
        let a = compile(&Bool, &Expr::Omega(e.clone()), &ab()).unwrap();
        let v = eval_omega(&Bool, &e);
        for w in OmegaWord::enumerate(&ab(), 4, 4) {
            let direct = infinitary_coeff(&Bool, &a, &w).unwrap().value;
            prop_assert_eq!(direct, lasso_member(&v, &w), "{} at {}", e, w);
            prop_assert_eq!(direct, buchi_oracle(&a, &w));
        }
    }

    #[test]
    fn eliminate_after_compile_preserves_behavior(seed in any::<u64>()) {
        let Expr::Omega(e) = random_expr(seed, 3, ExprKind::Omega, &['a', 'b']) else { unreachable!() };
        let a = compile(&Bool, &Expr::Omega(e.clone()), &ab()).unwrap();
        let (_, omega) = eliminate(&Bool, &a).unwrap();
        let (v, back) = (eval_omega(&Bool, &e), eval_omega(&Bool, &omega));
        for w in OmegaWord::enumerate(&ab(), 2, 3) {
            prop_assert_eq!(lasso_member(&back, &w), lasso_member(&v, &w), "{} vs {} at {}", e, omega, w);
        }
        let Expr::Fin(f) = random_expr(seed, 3, ExprKind::Finitary, &['a', 'b']) else { unreachable!() };
        let a = compile(&Nat, &Expr::Fin(f.clone()), &ab()).unwrap();
        let (fin, _) = eliminate(&Nat, &a).unwrap();
        let h = nat_series_instance(ab()).with_bound(6);
        prop_assert!(h.bounded_eq(&eval_fin(&Nat, &fin), &eval_fin(&Nat, &f)).passed(), "{} vs {}", f, fin);
    }
}
