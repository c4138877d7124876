use omega_weights::algebra::*;
use omega_weights::instances::*;
use omega_weights::matrix::*;
use proptest::prelude::*;

fn mp(rows: Vec<Vec<Option<u64>>>) -> Matrix<Tropical> {
    Matrix::from_rows(rows.into_iter().map(|r| r.into_iter().map(|e| e.map_or(Tropical::Inf, Tropical::Fin)).collect()).collect())
        .unwrap()
}

fn tmin(a: Tropical, b: Tropical) -> Tropical {
    MinPlus::default().add(&a, &b)
}

fn tadd(a: Tropical, b: Tropical) -> Tropical {
    MinPlus::default().mul(&a, &b)
}

/// Shortest paths by Floyd–Warshall; `nonempty` excludes the empty path.
fn shortest_paths(m: &Matrix<Tropical>, nonempty: bool) -> Matrix<Tropical> {
    let n = m.rows();
    let mut d = m.clone();
    for k in 0..n {
        for i in 0..n {
            for j in 0..n {
                let via = tadd(*d.get(i, k), *d.get(k, j));
                d.set(i, j, tmin(*d.get(i, j), via));
            }
        }
    }
    if !nonempty {
        for i in 0..n {
            d.set(i, i, tmin(*d.get(i, i), Tropical::Fin(0)));
        }
    }
    d
}

/// Cheapest infinite path from each index: reach a node on a zero cycle.
fn cheapest_infinite(m: &Matrix<Tropical>) -> Vec<Tropical> {
    let n = m.rows();
    let zero_edges = m.map(|e| if *e == Tropical::Fin(0) { Tropical::Fin(0) } else { Tropical::Inf });
    let zc = shortest_paths(&zero_edges, true);
    let dist = shortest_paths(m, false);
    (0..n)
        .map(|i| (0..n).filter(|&j| *zc.get(j, j) == Tropical::Fin(0)).fold(Tropical::Inf, |acc, j| tmin(acc, *dist.get(i, j))))
        .collect()
}

fn bool_reach(m: &Matrix<bool>) -> Matrix<bool> {
    let n = m.rows();
    let mut d = m.clone();
    for k in 0..n {
        for i in 0..n {
            for j in 0..n {
                if *d.get(i, k) && *d.get(k, j) {
                    d.set(i, j, true);
                }
            }
        }
    }
    d
}

/// Büchi oracle: some path from `i` revisits an index below `k` forever.
fn bool_omega_k(m: &Matrix<bool>, k: usize) -> Vec<bool> {
    let r = bool_reach(m);
    let n = m.rows();
    (0..n).map(|i| (0..k).any(|j| (i == j || *r.get(i, j)) && *r.get(j, j))).collect()
}

#[test]
fn minplus_two_by_two_example() {
    let m = MinPlus::default();
    let a = mp(vec![vec![None, Some(1)], vec![Some(2), None]]);
    let star = mat_star(&m, &a, None).unwrap();
    assert_eq!(star, mp(vec![vec![Some(0), Some(1)], vec![Some(2), Some(0)]]));
    let plus = mat_plus(&m, &a).unwrap();
    assert_eq!(plus, mp(vec![vec![Some(3), Some(1)], vec![Some(2), Some(3)]]));
    assert_eq!(mat_plus_elim(&m, &a).unwrap(), plus);
}

#[test]
fn split_point_is_validated() {
    let m = MinPlus::default();
    let a = mp(vec![vec![Some(1); 3]; 3]);
    assert!(matches!(mat_star(&m, &a, Some(0)), Err(MatrixError::Split { .. })));
    assert!(matches!(mat_star(&m, &a, Some(3)), Err(MatrixError::Split { .. })));
    assert!(matches!(mat_plus(&m, &Matrix::filled(2, 3, Tropical::Inf)), Err(MatrixError::NotSquare)));
    assert!(matches!(mat_omega_k(&SelfPair(m), &a, 4), Err(MatrixError::Split { .. })));
}

#[test]
fn empty_and_singleton_matrices() {
    let m = MinPlus::default();
    let e = Matrix::<Tropical>::new(0, 0, vec![]).unwrap();
    assert_eq!(mat_star(&m, &e, None).unwrap().rows(), 0);
    assert!(mat_omega(&SelfPair(m), &e).unwrap().is_empty());
    let one = mp(vec![vec![Some(4)]]);
    assert_eq!(mat_star(&m, &one, None).unwrap(), mp(vec![vec![Some(0)]]));
}

#[test]
fn omega_k_zero_and_full() {
    let p = SelfPair(Bool);
    let a = Matrix::from_rows(vec![vec![true, true], vec![false, false]]).unwrap();
    assert_eq!(mat_omega_k(&p, &a, 0).unwrap(), vec![false, false]);
    assert_eq!(mat_omega_k(&p, &a, 2).unwrap(), mat_omega(&p, &a).unwrap());
    assert_eq!(mat_omega(&p, &a).unwrap(), vec![true, false]);
}

#[test]
fn matrix_json_round_trip() {
    let m = MinPlus::default();
    let a = mp(vec![vec![None, Some(1)], vec![Some(2), None]]);
    let j = matrix_to_json(&m, &a);
    let text = serde_json::to_string(&j).unwrap();
    let back: MatrixJson = serde_json::from_str(&text).unwrap();
    assert_eq!(matrix_from_json(&m, &back).unwrap(), a);
}

#[test]
fn builtin_groups() {
    let gs = GroupTable::builtin(6);
    let names: Vec<_> = gs.iter().map(|g| g.name.clone()).collect();
    for n in GROUP_NAMES {
        assert!(names.iter().any(|x| x == n), "{n} missing");
    }
    let s3 = GroupTable::symmetric3();
    assert_eq!(s3.order(), 6);
    assert!((0..6).any(|a| (0..6).any(|b| s3.mul(a, b) != s3.mul(b, a))));
    for a in 0..6 {
        assert_eq!(s3.mul(a, s3.inv(a)), 0);
    }
    assert!(GroupTable::by_name("Q8").is_err());
    assert!(GroupTable::new("bad", vec![vec![0, 1], vec![1, 1]]).is_err());
}

#[test]
fn group_matrix_rows_are_permutations_of_inputs() {
    let g = GroupTable::klein();
    let xs = vec![10u64, 20, 30, 40];
    let m = group_matrix(&g, &xs).unwrap();
    for i in 0..4 {
        let mut row = m.row(i);
        row.sort();
        assert_eq!(row, xs);
    }
    assert!(group_matrix(&g, &xs[..3]).is_err());
}

#[test]
fn group_identities_over_bool_exhaustive() {
    let s = Bool.sampler();
    for g in GroupTable::builtin(6) {
        let trials = 1 << g.order();
        assert!(group_identity_check(&g, &plus_from_star(Bool), &s, trials).passed(), "{}", g.name);
        assert!(star_group_identity_check(&g, &Bool, &s, trials).passed(), "{}", g.name);
        assert!(omega_group_identity_check(&g, &SelfPair(Bool), &s, trials).passed(), "{}", g.name);
    }
}

#[test]
fn group_identities_over_minplus_and_lattice() {
    let m = MinPlus::default();
    let l = Lattice::new(3).unwrap();
    for g in GroupTable::builtin(6) {
        assert!(group_identity_check(&g, &plus_from_star(m), &m.sampler(11), 200).passed(), "{}", g.name);
        assert!(star_group_identity_check(&g, &m, &m.sampler(12), 200).passed(), "{}", g.name);
        assert!(omega_group_identity_check(&g, &SelfPair(m), &m.sampler(13), 200).passed(), "{}", g.name);
        assert!(group_identity_check(&g, &plus_from_star(l), &l.sampler(), 300).passed(), "{}", g.name);
    }
}

#[test]
fn permutation_basics() {
    let pi = Permutation::new(vec![2, 0, 1]).unwrap();
    assert_eq!(pi.inverse().apply(pi.apply(1)), 1);
    assert!(Permutation::new(vec![0, 0, 1]).is_err());
    let m = MinPlus::default();
    let pm = pi.matrix(&m);
    let a = mp(vec![vec![Some(1), Some(2), Some(3)], vec![Some(4), Some(5), Some(6)], vec![Some(7), Some(8), Some(9)]]);
    let conj = mat_mul(&m, &mat_mul(&m, &pi.inverse().matrix(&m), &a), &pm);
    assert_eq!(conj, permutation_conjugate(&a, &pi).unwrap());
}

fn mp_matrix(n: usize) -> impl Strategy<Value = Matrix<Tropical>> {
    proptest::collection::vec(prop_oneof![2 => Just(Tropical::Inf), 1 => Just(Tropical::Fin(0)), 3 => (1u64..20).prop_map(Tropical::Fin)], n * n)
        .prop_map(move |es| Matrix::new(n, n, es).unwrap())
}

fn sized_mp() -> impl Strategy<Value = Matrix<Tropical>> {
    (1usize..6).prop_flat_map(mp_matrix)
}

fn bool_matrix() -> impl Strategy<Value = Matrix<bool>> {
    (1usize..6).prop_flat_map(|n| proptest::collection::vec(prop::bool::weighted(0.3), n * n).prop_map(move |es| Matrix::new(n, n, es).unwrap()))
}

proptest! {
    #[test]
    fn star_is_shortest_paths(a in sized_mp()) {
        let m = MinPlus::default();
        prop_assert_eq!(mat_star(&m, &a, None).unwrap(), shortest_paths(&a, false));
        prop_assert_eq!(mat_plus(&m, &a).unwrap(), shortest_paths(&a, true));
        prop_assert_eq!(mat_plus_elim(&m, &a).unwrap(), shortest_paths(&a, true));
    }

    #[test]
    fn star_and_plus_do_not_depend_on_split(a in sized_mp(), k in 1usize..6) {
        let m = MinPlus::default();
        let n = a.rows();
        prop_assume!(k < n);
        prop_assert_eq!(mat_star(&m, &a, Some(k)).unwrap(), mat_star(&m, &a, None).unwrap());
        prop_assert_eq!(mat_plus_split(&m, &a, Some(k)).unwrap(), mat_plus(&m, &a).unwrap());
        let p = SelfPair(m);
        prop_assert_eq!(mat_omega_split(&p, &a, Some(k)).unwrap(), mat_omega(&p, &a).unwrap());
    }

    #[test]
    fn plus_is_m_times_star(a in sized_mp()) {
        let m = MinPlus::default();
        let star = mat_star(&m, &a, None).unwrap();
        prop_assert_eq!(mat_plus(&m, &a).unwrap(), mat_mul(&m, &a, &star));
        prop_assert_eq!(mat_plus(&m, &a).unwrap(), mat_mul(&m, &star, &a));
    }

    #[test]
    fn omega_is_cheapest_infinite_path(a in sized_mp()) {
        let p = SelfPair(MinPlus::default());
        let expected = cheapest_infinite(&a);
        prop_assert_eq!(mat_omega(&p, &a).unwrap(), expected.clone());
        prop_assert_eq!(mat_omega_elim(&p, &a).unwrap(), expected);
    }

    #[test]
    fn omega_k_is_buchi_acceptance(a in bool_matrix(), k in 0usize..6) {
        let p = SelfPair(Bool);
        prop_assume!(k <= a.rows());
        prop_assert_eq!(mat_omega_k(&p, &a, k).unwrap(), bool_omega_k(&a, k));
    }

    #[test]
    fn conjugation_commutes_with_plus_and_omega(a in sized_mp(), seed in any::<u64>()) {
        use rand::{seq::SliceRandom, SeedableRng};
        let n = a.rows();
        let mut images: Vec<usize> = (0..n).collect();
        images.shuffle(&mut rand_chacha::ChaCha8Rng::seed_from_u64(seed));
        let pi = Permutation::new(images).unwrap();
        let m = MinPlus::default();
        prop_assert!(plus_permutation_check(&m, &a, &pi).unwrap().holds);
        prop_assert!(omega_permutation_check(&SelfPair(m), &a, &pi).unwrap().holds);
    }
}
