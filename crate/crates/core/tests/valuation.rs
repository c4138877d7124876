use omega_weights::algebra::Monoid;
use omega_weights::automata::{compile, ProductGraph};
use omega_weights::instances::{real_eq, Bool, Lattice};
use omega_weights::series::*;
use omega_weights::valuation::*;
use proptest::prelude::*;

fn ab() -> Alphabet {
    Alphabet::from_str("ab")
}

/// Letter-level values of the first `n` letters of `prefix · block^ω`.
fn letters(seq: &WeightedSeq<f64>, n: usize, disc: bool) -> Vec<f64> {
    let mut out = Vec::new();
    for (len, d) in seq.entries() {
        for j in 0..*len {
            out.push(if disc && j > 0 { 0.0 } else { *d });
        }
        if out.len() >= n {
            break;
        }
    }
    out.truncate(n);
    out
}

/// Independent limit estimates from a long letter-level expansion.
fn simulate(kind: ValuationKind, seq: &WeightedSeq<f64>) -> f64 {
    let n = 4000;
    match kind {
        ValuationKind::Sup => letters(seq, n, false).into_iter().fold(f64::NEG_INFINITY, f64::max),
        ValuationKind::Limsup => letters(seq, n, false)[n / 2..].iter().copied().fold(f64::NEG_INFINITY, f64::max),
        ValuationKind::Liminf => letters(seq, n, false)[n / 2..].iter().copied().fold(f64::INFINITY, f64::min),
        ValuationKind::LimsupAvg => {
            let xs = letters(seq, n, false);
            xs.iter().sum::<f64>() / n as f64
        }
        ValuationKind::Disc { lambda } => {
            letters(seq, n, true).iter().enumerate().map(|(i, d)| lambda.powi(i as i32) * d).sum()
        }
    }
}

fn seq_strategy() -> impl Strategy<Value = WeightedSeq<f64>> {
    let entry = (1u64..4, 0u32..=16).prop_map(|(n, v)| (n, f64::from(v) / 4.0));
    (proptest::collection::vec(entry.clone(), 0..3), proptest::collection::vec(entry, 1..4))
        .prop_map(|(p, b)| WeightedSeq::new(p, b).unwrap())
}

#[test]
fn induced_valuations() {
    let avg = RealValuation::limsup_avg();
    assert!(real_eq(induced_val(&avg, &[1.0, 2.0, 3.0]).unwrap(), 2.0));
    let disc = RealValuation::disc(0.5).unwrap();
    assert!(real_eq(induced_val(&disc, &[1.0, 1.0, 1.0]).unwrap(), 1.75));
    for d in [0.0, 2.5, f64::INFINITY] {
        assert_eq!(induced_val(&RealValuation::sup(), &[d]).unwrap(), d);
    }
}

#[test]
fn exact_limit_examples() {
    let seq = WeightedSeq::new(vec![(1, 3.0)], vec![(1, 5.0)]).unwrap();
    assert_eq!(RealValuation::sup().val_exact(&seq), 5.0);
    assert_eq!(RealValuation::limsup().val_exact(&seq), 5.0);
    let ones = WeightedSeq::periodic(vec![(1, 1.0)]).unwrap();
    assert!(real_eq(RealValuation::disc(0.5).unwrap().val_exact(&ones), 2.0));
    let alt = WeightedSeq::new(vec![(1, 9.0)], vec![(1, 0.0), (3, 2.0)]).unwrap();
    assert_eq!(RealValuation::liminf().val_exact(&alt), 0.0);
    assert!(real_eq(RealValuation::limsup_avg().val_exact(&alt), 1.5));
    let with_zero = WeightedSeq::new(vec![(1, 1.0)], vec![(1, f64::NEG_INFINITY)]).unwrap();
    for c in [RealValuation::sup(), RealValuation::limsup_avg(), RealValuation::disc(0.3).unwrap()] {
        assert_eq!(c.val_exact(&with_zero), f64::NEG_INFINITY);
    }
}

#[test]
fn unsupported_strategies() {
    let seq = WeightedSeq::periodic(vec![(1, 1.0)]).unwrap();
    let truncate = TruncationStrategy::Truncate { depth: 3 };
    assert!(matches!(RealValuation::sup().val_omega(&seq, truncate), Err(ValuationError::Unsupported { .. })));
    assert!(matches!(
        RealValuation::disc(0.5).unwrap().val_omega(&seq, TruncationStrategy::Window { depth: 3 }),
        Err(ValuationError::Unsupported { .. })
    ));
    assert!(matches!(
        RealValuation::limsup().val_omega(&seq, TruncationStrategy::Window { depth: 0 }),
        Err(ValuationError::InvalidDepth(0))
    ));
    let c = FromComplete { hemiring: Bool };
    assert!(c.val_omega(&WeightedSeq::periodic(vec![(1, true)]).unwrap(), truncate).is_err());
}

#[test]
fn windows_settle_on_periodic_input() {
    let seq = WeightedSeq::new(vec![(1, 7.0)], vec![(1, 1.0), (2, 3.0)]).unwrap();
    for (c, exact) in [(RealValuation::limsup(), 3.0), (RealValuation::liminf(), 1.0)] {
        let e = c.val_omega(&seq, TruncationStrategy::Window { depth: 4 }).unwrap();
        assert_eq!(e.value, exact);
        assert_eq!(e.error_bound, Some(0.0));
    }
    let avg = RealValuation::limsup_avg();
    let exact = avg.val_exact(&seq);
    for depth in [4, 16, 64, 256] {
        let e = avg.val_omega(&seq, TruncationStrategy::Window { depth }).unwrap();
        assert!((e.value - exact).abs() <= e.error_bound.unwrap() + 1e-12, "depth {depth}");
    }
}

#[test]
fn multi_hemiring_laws_hold_for_every_instance() {
    let params = ValuationParams { lambda: Some(0.5), lattice_base: Some(3), hemiring: None };
    for name in VALUATION_NAMES {
        let inst = make_valuation_instance(name, &params).unwrap();
        let r = inst.multi_hemiring_laws(7, 200);
        assert!(r.passed(), "{name}: {}", r.to_json());
    }
}

#[test]
fn omega_valuation_laws_per_instance() {
    let params = ValuationParams { lambda: Some(0.5), ..Default::default() };
    for name in ["sup", "limsup", "disc", "lattice-inf", "from-complete"] {
        let r = make_valuation_instance(name, &params).unwrap().omega_valuation_laws(3, 300);
        assert!(r.passed(), "{name}: {}", r.to_json());
    }
    for name in ["liminf", "limsup-avg"] {
        let r = make_valuation_instance(name, &params).unwrap().omega_valuation_laws(3, 300);
        assert!(!r.passed(), "{name} should fail");
        for law in r.failed_laws() {
            assert!(law.starts_with("infinitary associativity"), "{name}: unexpected failure {law}");
        }
    }
    let avg = make_valuation_instance("limsup-avg", &params).unwrap().omega_valuation_laws(3, 10);
    assert!(avg.failed_laws().contains(&"infinitary associativity (doubling witness)"));
}

#[test]
fn complete_omega_hemiring_laws() {
    let params = ValuationParams { lattice_base: Some(3), ..Default::default() };
    for name in ["sup", "lattice-inf", "from-complete"] {
        let r = make_valuation_instance(name, &params).unwrap().complete_omega_hemiring_laws(5, 300);
        assert!(r.passed(), "{name}: {}", r.to_json());
    }
    let r = make_valuation_instance("limsup", &params).unwrap().complete_omega_hemiring_laws(5, 300);
    assert!(r.failed_laws().contains(&"infinite product unfolding"), "{}", r.to_json());
}

#[test]
fn induced_valuation_of_complete_hemiring_is_the_product() {
    let l = Lattice::new(3).unwrap();
    let c = FromComplete { hemiring: l };
    let vals: Vec<u32> = (0..8).collect();
    for a in &vals {
        for b in &vals {
            for d in &vals {
                let expected = a & b & d;
                assert_eq!(induced_val(&c, &[*a, *b, *d]).unwrap(), expected);
            }
        }
    }
    let b = FromComplete { hemiring: Bool };
    assert!(induced_val(&b, &[true, true]).unwrap());
    assert!(!induced_val(&b, &[true, false, true]).unwrap());
}

#[test]
fn registry() {
    let p = ValuationParams::default();
    assert_eq!(make_valuation_instance("disc", &p).unwrap().name(), "disc(0.5)");
    assert_eq!(make_valuation_instance("from-complete", &p).unwrap().name(), "from-complete(bool)");
    assert!(matches!(
        make_valuation_instance("disc", &ValuationParams { lambda: Some(1.5), ..p.clone() }),
        Err(ValuationError::InvalidLambda(_))
    ));
    assert!(matches!(
        make_valuation_instance("from-complete", &ValuationParams { hemiring: Some("nat".into()), ..p.clone() }),
        Err(ValuationError::InvalidParam(_))
    ));
    assert!(matches!(make_valuation_instance("median", &p), Err(ValuationError::Unknown(_))));
    let manifest = ValuationManifest {
        name: "disc".into(),
        params: ValuationParams { lambda: Some(0.25), ..Default::default() },
        strategy: TruncationStrategy::Truncate { depth: 10 },
    };
    let text = serde_json::to_string(&manifest).unwrap();
    assert_eq!(serde_json::from_str::<ValuationManifest>(&text).unwrap(), manifest);
    let parsed: ValuationManifest = serde_json::from_str(r#"{"name":"sup","strategy":{"kind":"exact-limit"}}"#).unwrap();
    assert_eq!(parsed.strategy, TruncationStrategy::ExactLimit);
}

fn letter(a: char, w: f64) -> Series<f64> {
    Series::letter(a, w)
}

/// Finitary and omega series over `{a, b}` with real letter weights.
fn real_fixtures() -> (Series<f64>, Series<f64>, OmegaSeries<f64>) {
    let r1 = Series::sum(&letter('a', 1.0), &letter('b', 3.0));
    let r2 = Series::plus(&letter('a', 2.0)).unwrap();
    let s = OmegaSeries::omega(&Series::sum(&Series::prod(&letter('a', 1.0), &letter('b', 0.5)), &letter('b', 2.0))).unwrap();
    (r1, r2, s)
}

#[test]
fn associativity_and_tail_law_on_automaton_series() {
    let instances = [RealValuation::sup(), RealValuation::limsup(), RealValuation::disc(0.5).unwrap()];
    let (r1, r2, s) = real_fixtures();
    let lassos = OmegaWord::enumerate(&ab(), 2, 2);
    for c in instances {
        let left = OmegaSeries::act(&r1, &OmegaSeries::act(&r2, &s));
        let right = OmegaSeries::act(&Series::prod(&r1, &r2), &s);
        let r = Series::sum(&letter('a', 1.0), &Series::prod(&letter('b', 2.0), &letter('a', 0.5)));
        let power = OmegaSeries::omega(&r).unwrap();
        let unrolled = OmegaSeries::act(&r, &power);
        for w in &lassos {
            let (x, y) = (c.omega_coeff(&left, w).unwrap(), c.omega_coeff(&right, w).unwrap());
            assert!(estimates_agree(&c, &x, &y), "{}: associativity at {w:?}: {x:?} vs {y:?}", c.name());
            let (x, y) = (c.omega_coeff(&power, w).unwrap(), c.omega_coeff(&unrolled, w).unwrap());
            assert!(estimates_agree(&c, &x, &y), "{}: tail law at {w:?}: {x:?} vs {y:?}", c.name());
        }
    }
    let l = FromComplete { hemiring: Lattice::new(3).unwrap() };
    let lr1 = Series::sum(&Series::letter('a', 0b011u32), &Series::letter('b', 0b110));
    let lr2 = Series::plus(&Series::letter('a', 0b111)).unwrap();
    let ls = OmegaSeries::omega(&Series::sum(&Series::letter('a', 0b101), &Series::letter('b', 0b011))).unwrap();
    let left = OmegaSeries::act(&lr1, &OmegaSeries::act(&lr2, &ls));
    let right = OmegaSeries::act(&Series::prod(&lr1, &lr2), &ls);
    for w in &lassos {
        assert_eq!(l.omega_coeff(&left, w).unwrap().value, l.omega_coeff(&right, w).unwrap().value, "{w:?}");
    }
}

#[test]
fn disc_coefficient_of_a_product() {
    let c = RealValuation::disc(0.5).unwrap();
    let r = letter('a', 1.0);
    let s = OmegaSeries::omega(&letter('b', 1.0)).unwrap();
    let w = OmegaWord::parse("a(b)^w").unwrap();
    let sv = c.omega_coeff(&s, &OmegaWord::parse("(b)^w").unwrap()).unwrap();
    assert!((sv.value - 2.0).abs() <= sv.error_bound.unwrap_or(0.0) + 1e-9);
    let e = c.omega_coeff(&OmegaSeries::act(&r, &s), &w).unwrap();
    assert!((e.value - 2.0).abs() <= e.error_bound.unwrap_or(0.0) + 1e-9, "{e:?}");
    let zero = c.omega_coeff(&OmegaSeries::act(&Series::zero(), &s), &w).unwrap();
    assert_eq!(zero.value, f64::NEG_INFINITY);
}

#[test]
fn boolean_instance_agrees_with_lasso_membership() {
    let c = FromComplete { hemiring: Bool };
    let a = Series::letter('a', true);
    let b = Series::letter('b', true);
    let r = Series::plus(&Series::sum(&a, &Series::prod(&a, &b))).unwrap();
    let series = [
        OmegaSeries::omega(&Series::prod(&a, &b)).unwrap(),
        OmegaSeries::act(&r, &OmegaSeries::omega(&b).unwrap()),
        OmegaSeries::sum(&OmegaSeries::omega(&a).unwrap(), &OmegaSeries::act(&b, &OmegaSeries::omega(&r).unwrap())),
    ];
    for v in &series {
        for w in OmegaWord::enumerate(&ab(), 2, 3) {
            assert_eq!(c.omega_coeff(v, &w).unwrap().value, lasso_member(v, &w), "{w:?}");
        }
    }
}

#[test]
fn alternating_regrouping_witness() {
    let t = counterexample_regroup_liminf();
    assert_eq!(t.name, "13.8c");
    assert_eq!((t.first, t.second), (0.0, 1.0));
    assert!(t.points.iter().all(|p| p.first == 0.0 && p.second == 1.0));
    for c in [RealValuation::sup(), RealValuation::limsup(), RealValuation::disc(0.5).unwrap()] {
        let t = alternating_witness(&c);
        assert!(c.equal(&t.first, &t.second), "{}", c.name());
    }
}

#[test]
fn doubling_regrouping_witness() {
    let t = counterexample_regroup_avg(DEFAULT_DOUBLING_BLOCKS);
    assert_eq!(t.name, "13.8e");
    assert!((t.first - 2.0 / 3.0).abs() < AVG_TOLERANCE, "{}", t.first);
    assert!((t.second - 1.0 / 3.0).abs() < AVG_TOLERANCE, "{}", t.second);
    let small = counterexample_regroup_avg(2);
    assert!(real_eq(small.first, 2.0 / 3.0));
    let back: CounterexampleTrace = serde_json::from_str(&t.to_json()).unwrap();
    assert_eq!(back, t);
}

/// Letter-level averages of the two groupings of `u₁v₁u₂v₂…`.
fn product_omega_oracle(schedule: Schedule, k: usize) -> (f64, f64) {
    let n = |i: usize| schedule.length(i).unwrap() as usize;
    let mut w: Vec<f64> = Vec::new();
    for i in 1..=k + 1 {
        w.extend(std::iter::repeat(1.0).take(n(i)));
        w.extend(std::iter::repeat(0.0).take(n(i)));
    }
    let mean = |xs: &[f64]| xs.iter().sum::<f64>() / xs.len() as f64;
    let lhs_len: usize = (1..=k).map(|i| 2 * n(i)).sum();
    let rhs_len = lhs_len + n(k + 1);
    (mean(&w[..lhs_len]), mean(&w[..rhs_len]))
}

#[test]
fn product_omega_trace_matches_letter_level_averages() {
    assert!(matches!(counterexample_product_omega(3, Schedule::Power4), Err(ValuationError::InvalidDepth(3))));
    for schedule in [Schedule::Power4, Schedule::Superexponential] {
        let t = counterexample_product_omega(6, schedule).unwrap();
        assert_eq!((t.name.as_str(), t.first_label.as_str(), t.second_label.as_str()), ("13.10", "(rs)^w", "r(sr)^w"));
        for p in &t.points {
            let (lhs, rhs) = product_omega_oracle(schedule, p.depth);
            assert!(real_eq(p.first, lhs) && real_eq(p.first, 0.5), "{schedule:?} k={}", p.depth);
            assert!(real_eq(p.second, rhs), "{schedule:?} k={}: {} vs {rhs}", p.depth, p.second);
            assert!(real_eq(p.second, product_omega_rhs_closed_form(schedule, p.depth).unwrap()));
        }
    }
}

#[test]
fn product_omega_limits() {
    let power4: Vec<f64> = (1..=20).map(|k| product_omega_rhs_closed_form(Schedule::Power4, k).unwrap()).collect();
    assert!(power4.windows(2).all(|w| w[1] <= w[0]));
    assert!((power4[19] - 0.8).abs() < 1e-6);
    let superexp: Vec<f64> = (1..=9).map(|k| product_omega_rhs_closed_form(Schedule::Superexponential, k).unwrap()).collect();
    assert!(superexp.windows(2).all(|w| w[1] >= w[0]));
    assert!(superexp[8] > 0.99);
    assert!(matches!(counterexample_product_omega(20, Schedule::Superexponential), Err(ValuationError::Overflow(_))));
}

#[test]
fn disc_value_iteration_bounds() {
    let c = RealValuation::disc(0.5).unwrap();
    let aut = compile(&c, &omega_weights::ratexpr::parse("(ab)^w").unwrap(), &ab()).unwrap();
    let w = OmegaWord::parse("(ab)^w").unwrap();
    let g = ProductGraph::build(&c, &aut, &w);
    let exact = c.val_exact(&WeightedSeq::periodic(vec![(1, 1.0), (1, 1.0)]).unwrap());
    let coeff = c.omega_coeff(&OmegaSeries::automaton(aut.clone()), &w).unwrap();
    assert!((coeff.value - exact).abs() <= coeff.error_bound.unwrap_or(0.0) + 1e-9, "{coeff:?}");
    for depth in [1, 2, 4, 8, 16, 32] {
        let e = disc_value_iteration(&g, 0.5, depth);
        assert!((exact - e.value).abs() <= e.error_bound.unwrap() + 1e-12, "depth {depth}");
    }
}

proptest! {
    #[test]
    fn exact_limits_match_simulation(seq in seq_strategy()) {
        let kinds = [
            ValuationKind::Sup,
            ValuationKind::Limsup,
            ValuationKind::Liminf,
            ValuationKind::LimsupAvg,
            ValuationKind::Disc { lambda: 0.5 },
        ];
        for kind in kinds {
            let c = RealValuation::new(kind).unwrap();
            let exact = c.val_exact(&seq);
            let sim = simulate(kind, &seq);
            let tol = if kind == ValuationKind::LimsupAvg { 4.0 * 12.0 / 4000.0 } else { 1e-9 };
            prop_assert!((exact - sim).abs() <= tol, "{}: {} vs {}", c.name(), exact, sim);
        }
    }

    #[test]
    fn disc_truncation_brackets_the_limit(seq in seq_strategy(), depth in 0usize..40) {
        let c = RealValuation::disc(0.5).unwrap();
        let exact = c.val_exact(&seq);
        let e = c.val_omega(&seq, TruncationStrategy::Truncate { depth }).unwrap();
        prop_assert!(e.value <= exact + 1e-12);
        prop_assert!(exact - e.value <= e.error_bound.unwrap() + 1e-12);
    }

    #[test]
    fn combined_groups_keep_lengths(entries in proptest::collection::vec((1u64..5, 0u32..8), 1..6)) {
        let es: Vec<(u64, f64)> = entries.iter().map(|(n, v)| (*n, f64::from(*v))).collect();
        let total: u64 = es.iter().map(|e| e.0).sum();
        let avg = RealValuation::limsup_avg();
        let (len, v) = combine_group(&avg, &es);
        prop_assert_eq!(len, total);
        let mean = es.iter().map(|(n, d)| *n as f64 * d).sum::<f64>() / total as f64;
        prop_assert!(real_eq(v, mean));
    }
}
