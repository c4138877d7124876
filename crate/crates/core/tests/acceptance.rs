//! Acceptance suite. Prints one PASS/FAIL line per criterion and exits
//! nonzero when a criterion's outcome differs from the expected one.

use std::time::{Duration, Instant};

use omega_weights::algebra::*;
use omega_weights::automata::*;
use omega_weights::extension::*;
use omega_weights::instances::*;
use omega_weights::matrix::*;
use omega_weights::ratexpr::*;
use omega_weights::series::*;
use omega_weights::valuation::*;
use rand::{seq::SliceRandom, Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

struct Outcome {
    passed: bool,
    detail: String,
}

impl Outcome {
    fn new(passed: bool, detail: impl Into<String>) -> Self {
        Outcome { passed, detail: detail.into() }
    }
}

fn ab() -> Alphabet {
    Alphabet::from_str("ab")
}

fn all_pass(reports: &[(&str, LawReport)]) -> Outcome {
    let failed: Vec<String> =
        reports.iter().filter(|(_, r)| !r.passed()).map(|(n, r)| format!("{n}: {:?}", r.failed_laws())).collect();
    let trials: usize = reports.iter().map(|(_, r)| r.trials).sum();
    if failed.is_empty() {
        Outcome::new(true, format!("{} suites, {trials} trials, no failures", reports.len()))
    } else {
        Outcome::new(false, failed.join("; "))
    }
}

fn law_suites() -> Outcome {
    let m = MinPlus::default();
    let l = Lattice::new(3).unwrap();
    all_pass(&[
        ("bool semiring", conway_semiring_laws(&Bool, &Bool.sampler(), 1)),
        ("lattice semiring", conway_semiring_laws(&l, &l.sampler(), 1)),
        ("minplus semiring", conway_semiring_laws(&m, &m.sampler(DEFAULT_SEED), 1000)),
        ("bool hemiring", conway_hemiring_laws(&plus_from_star(Bool), &Bool.sampler(), 1)),
        ("lattice hemiring", conway_hemiring_laws(&plus_from_star(l), &l.sampler(), 1)),
        ("minplus hemiring", conway_hemiring_laws(&plus_from_star(m), &m.sampler(DEFAULT_SEED), 1000)),
    ])
}

fn hemimodule_suite() -> Outcome {
    let pair = language_pair(ab()).with_bounds(8, 4, 4);
    all_pass(&[("language pair", hemimodule_pair_laws(&pair, &pair.hemiring.sampler(DEFAULT_SEED), 40))])
}

fn group_identities() -> Outcome {
    let m = MinPlus::default();
    let l = Lattice::new(3).unwrap();
    let lattice_random = l.random_sampler(DEFAULT_SEED);
    let lang = language_instance(ab()).with_bound(6);
    let pair = language_pair(ab()).with_bounds(6, 2, 2);
    let mut reports = Vec::new();
    for g in GroupTable::builtin(6) {
        let bool_trials = 1 << g.order();
        reports.push(("bool plus", group_identity_check(&g, &plus_from_star(Bool), &Bool.sampler(), bool_trials)));
        reports.push(("bool omega", omega_group_identity_check(&g, &SelfPair(Bool), &Bool.sampler(), bool_trials)));
        reports.push(("minplus plus", group_identity_check(&g, &plus_from_star(m), &m.sampler(11), 200)));
        reports.push(("minplus omega", omega_group_identity_check(&g, &SelfPair(m), &m.sampler(13), 200)));
        reports.push(("lattice plus", group_identity_check(&g, &plus_from_star(l), &lattice_random, 200)));
        reports.push(("lattice omega", omega_group_identity_check(&g, &SelfPair(l), &lattice_random, 200)));
        reports.push(("language plus", group_identity_check(&g, &lang, &lang.sampler(17), 10)));
        reports.push(("language omega", omega_group_identity_check(&g, &pair, &lang.sampler(19), 5)));
    }
    all_pass(&reports)
}

/// Shortest paths by Floyd–Warshall, including the empty path.
fn shortest_paths(a: &Matrix<Tropical>) -> Matrix<Tropical> {
    let m = MinPlus::default();
    let n = a.rows();
    let mut d = a.clone();
    for k in 0..n {
        for i in 0..n {
            for j in 0..n {
                let via = m.mul(d.get(i, k), d.get(k, j));
                d.set(i, j, m.add(d.get(i, j), &via));
            }
        }
    }
    for i in 0..n {
        d.set(i, i, m.add(d.get(i, i), &Tropical::Fin(0)));
    }
    d
}

fn random_matrix(rng: &mut ChaCha8Rng, n: usize) -> Matrix<Tropical> {
    let es = (0..n * n)
        .map(|_| match rng.gen_range(0..6) {
            0 | 1 => Tropical::Inf,
            2 => Tropical::Fin(0),
            _ => Tropical::Fin(rng.gen_range(1..20)),
        })
        .collect();
    Matrix::new(n, n, es).unwrap()
}

fn matrix_formulas() -> Outcome {
    let m = MinPlus::default();
    let mut rng = ChaCha8Rng::seed_from_u64(DEFAULT_SEED);
    let mut failures = Vec::new();
    let samples = 200;
    for n in [3, 4] {
        for i in 0..samples {
            let a = random_matrix(&mut rng, n);
            let star = mat_star(&m, &a, None).unwrap();
            if star != shortest_paths(&a) {
                failures.push(format!("{n}x{n} #{i}: star differs from shortest paths"));
            }
            for k in 1..n {
                if mat_star(&m, &a, Some(k)).unwrap() != star {
                    failures.push(format!("{n}x{n} #{i}: star depends on split {k}"));
                }
            }
            if mat_plus(&m, &a).unwrap() != mat_mul(&m, &a, &star) {
                failures.push(format!("{n}x{n} #{i}: plus differs from M·M*"));
            }
            let mut images: Vec<usize> = (0..n).collect();
            images.shuffle(&mut rng);
            let pi = Permutation::new(images).unwrap();
            if !plus_permutation_check(&m, &a, &pi).unwrap().holds {
                failures.push(format!("{n}x{n} #{i}: plus permutation identity"));
            }
            if !omega_permutation_check(&SelfPair(m), &a, &pi).unwrap().holds {
                failures.push(format!("{n}x{n} #{i}: omega permutation identity"));
            }
        }
    }
    if failures.is_empty() {
        Outcome::new(true, format!("{} matrices of sizes 3 and 4", 2 * samples))
    } else {
        Outcome::new(false, failures.join("; "))
    }
}

fn extension() -> Outcome {
    let e = ExtensionAlgebra::new(Bool, language_instance(ab()).with_bound(8), biaction_nat());
    let a = e.h.letter('a');
    let lhs = e.star(&e.elem(true, a.clone()));
    let rhs = e.elem(true, Series::plus(&a).unwrap());
    let witness = e.equal(&lhs, &rhs);
    let mut fixed_point_failures = 0;
    let samples = e.sampler(DEFAULT_SEED, Bool.sampler(), language_instance(ab()).sampler(5)).draw(200);
    for s in &samples {
        let st = e.star(s);
        if !e.equal(&e.add(&e.mul(s, &st), &e.one()), &st) {
            fixed_point_failures += 1;
        }
    }
    let n = ExtensionAlgebra::new(Nat, nat_series_instance(ab()).with_bound(5), biaction_nat());
    let target = SeriesSemiring::new(Nat, ab()).unwrap().with_bound(5);
    let s = n.sampler(6, Nat.sampler(2), nat_series_instance(ab()).sampler(7));
    let morphism = match ext_morphism(&n, &target, |x: &u64| Series::monomial(Word::empty(), *x), |f: &Series<u64>| f.clone(), &s, 30) {
        Ok(tau) => morphism_laws(&n, &tau, &s, 30).passed(),
        Err(_) => false,
    };
    Outcome::new(
        witness && fixed_point_failures == 0 && morphism,
        format!(
            "(1 + a)* = a* up to length 8: {witness}; fixed point failures {fixed_point_failures}/{}; morphism checks: {morphism}",
            samples.len()
        ),
    )
}

fn kleene_round_trips() -> Outcome {
    let disc = RealValuation::disc(0.5).unwrap();
    let words: Vec<Word> = ab().words_upto(8).into_iter().filter(|w| !w.is_empty()).collect();
    let lassos = OmegaWord::enumerate(&ab(), 4, 4);
    let mut failures = Vec::new();
    for seed in 0..500u64 {
        let expr = random_expr(seed, 4, ExprKind::Finitary, &['a', 'b']);
        let Expr::Fin(e) = &expr else { unreachable!() };
        let (bool_aut, nat_aut, disc_aut) =
            (compile(&Bool, &expr, &ab()).unwrap(), compile(&Nat, &expr, &ab()).unwrap(), compile(&disc, &expr, &ab()).unwrap());
        let (bs, ns, ds) = (eval_fin(&Bool, e), eval_fin(&Nat, e), eval_fin(&disc, e));
        let nat_back = eliminate(&Nat, &nat_aut).map(|(f, _)| eval_fin(&Nat, &f));
        for w in &words {
            let w = w.letters();
            let ok_bool = finitary_coeff(&Bool, &bool_aut, w).unwrap() == coeff(&Bool, &bs, w);
            let nat = coeff(&Nat, &ns, w);
            let ok_nat = finitary_coeff(&Nat, &nat_aut, w).unwrap() == nat;
            let (x, y) = (finitary_coeff(&disc, &disc_aut, w).unwrap(), coeff(&disc, &ds, w));
            let ok_disc = x == y || (x - y).abs() <= 1e-9;
            let ok_elim = nat_back.as_ref().is_ok_and(|f| coeff(&Nat, f, w) == nat);
            if !(ok_bool && ok_nat && ok_disc && ok_elim) {
                failures.push(format!("finitary {e} at {}", w.iter().collect::<String>()));
                break;
            }
        }
    }
    for seed in 0..200u64 {
        let expr = random_expr(seed, 3, ExprKind::Omega, &['a', 'b']);
        let Expr::Omega(e) = &expr else { unreachable!() };
        let aut = compile(&Bool, &expr, &ab()).unwrap();
        let v = eval_omega(&Bool, e);
        if let Some(w) = lassos.iter().find(|w| infinitary_coeff(&Bool, &aut, w).unwrap().value != lasso_member(&v, w)) {
            failures.push(format!("omega {e} at {w}"));
            continue;
        }
        let (_, back) = eliminate(&Bool, &aut).unwrap();
        let back = eval_omega(&Bool, &back);
        if let Some(w) = lassos.iter().find(|w| lasso_member(&back, w) != lasso_member(&v, w)) {
            failures.push(format!("eliminated omega {e} at {w}"));
        }
    }
    if failures.is_empty() {
        Outcome::new(true, "500 finitary and 200 omega expressions agree")
    } else {
        Outcome::new(false, format!("{} mismatches, first: {}", failures.len(), failures[0]))
    }
}

fn regroup_liminf() -> Outcome {
    let t = counterexample_regroup_liminf();
    Outcome::new(t.first == 0.0 && t.second == 1.0, format!("direct {}, regrouped {}", t.first, t.second))
}

fn regroup_avg() -> Outcome {
    let t = counterexample_regroup_avg(DEFAULT_DOUBLING_BLOCKS);
    let ok = (t.first - 2.0 / 3.0).abs() <= AVG_TOLERANCE && (t.second - 1.0 / 3.0).abs() <= AVG_TOLERANCE;
    Outcome::new(ok, format!("direct {:.4}, regrouped {:.4} at {DEFAULT_DOUBLING_BLOCKS} blocks", t.first, t.second))
}

fn product_omega(schedule: Schedule) -> Outcome {
    let t = match counterexample_product_omega(8, schedule) {
        Ok(t) => t,
        Err(e) => return Outcome::new(false, e.to_string()),
    };
    let lhs_exact = t.points.iter().all(|p| p.first == 0.5);
    let closed = t.points.iter().all(|p| (p.second - product_omega_rhs_closed_form(schedule, p.depth).unwrap()).abs() < 1e-12);
    let monotone = t.points.windows(2).all(|w| w[1].second >= w[0].second);
    let reaches = t.second >= 0.9;
    let rhs: Vec<String> = t.points.iter().map(|p| format!("{:.3}", p.second)).collect();
    Outcome::new(
        lhs_exact && closed && monotone && reaches,
        format!("lhs 1/2 at every depth: {lhs_exact}; rhs [{}]; increasing: {monotone}; rhs >= 0.9 at k = 8: {reaches}", rhs.join(", ")),
    )
}

fn disc_unit_loop() -> Outcome {
    let d = RealValuation::disc(0.5).unwrap();
    let a = MatrixAutomaton::new(
        1,
        1,
        Alphabet::from_str("a"),
        vec![1],
        vec![1],
        vec![Transition { from: 0, to: 0, letter: 'a', weight: 1.0 }],
    )
    .unwrap();
    let g = ProductGraph::build(&d, &a, &OmegaWord::parse("(a)^w").unwrap());
    let dominated = (0..=60).all(|depth| {
        let e = disc_value_iteration(&g, 0.5, depth);
        (e.value - 2.0).abs() <= e.error_bound.unwrap() + 1e-15
    });
    let full = infinitary_coeff(&d, &a, &OmegaWord::parse("(a)^w").unwrap()).unwrap();
    let ok = dominated && (full.value - 2.0).abs() <= 1e-6;
    Outcome::new(ok, format!("value {:.12}, bound dominates at depths 0..=60: {dominated}", full.value))
}

fn main() {
    type Criterion = (&'static str, fn() -> Outcome, Duration, bool);
    let criteria: Vec<Criterion> = vec![
        ("1 Conway law suites", law_suites, Duration::from_secs(5), true),
        ("2 hemimodule identities on languages", hemimodule_suite, Duration::from_secs(30), true),
        ("3 group identities up to order 6", group_identities, Duration::from_secs(60), true),
        ("4 matrix formulas", matrix_formulas, Duration::from_secs(10), true),
        ("5 extension star and morphism", extension, Duration::from_secs(20), true),
        ("6 Kleene round trips", kleene_round_trips, Duration::from_secs(300), true),
        ("7 liminf regrouping", regroup_liminf, Duration::MAX, true),
        ("8 average regrouping", regroup_avg, Duration::MAX, true),
        ("9 product omega, n_i = 4^i", || product_omega(Schedule::Power4), Duration::MAX, false),
        ("9' product omega, n_i = 2^(i(i+1)/2)", || product_omega(Schedule::Superexponential), Duration::MAX, true),
        ("10 discounted unit loop", disc_unit_loop, Duration::MAX, true),
    ];
    let mut unexpected = 0;
    for (name, run, limit, expected) in criteria {
        let start = Instant::now();
        let outcome = run();
        let elapsed = start.elapsed();
        let in_time = elapsed <= limit;
        let passed = outcome.passed && in_time;
        let limit_text = if limit == Duration::MAX { String::new() } else { format!(" (limit {}s)", limit.as_secs()) };
        let note = if passed == expected { "" } else { "  <-- unexpected" };
        let known = if !expected && !passed { " [known failure]" } else { "" };
        println!(
            "{} criterion {name}: {}; {:.2}s{limit_text}{known}{note}",
            if passed { "PASS" } else { "FAIL" },
            outcome.detail,
            elapsed.as_secs_f64()
        );
        if passed != expected {
            unexpected += 1;
        }
    }
    if unexpected > 0 {
        println!("{unexpected} criteria did not match their expected outcome");
        std::process::exit(1);
    }
}
