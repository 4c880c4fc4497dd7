use itertools::Itertools;
use proptest::prelude::*;
use symtrop::matching::is_singular;
use symtrop::*;

fn square(max_n: usize) -> impl Strategy<Value = IntMatrix> {
    (1..=max_n).prop_flat_map(|n| {
        prop::collection::vec(-9i64..=9, n * n)
            .prop_map(move |v| IntMatrix::from_fn(n, n, |i, j| v[i * n + j]).unwrap())
    })
}

fn symmetric(max_n: usize) -> impl Strategy<Value = IntMatrix> {
    (1..=max_n).prop_flat_map(|n| {
        prop::collection::vec(-6i64..=6, n * n).prop_map(move |v| {
            IntMatrix::from_fn(n, n, |i, j| v[i.min(j) * n + i.max(j)]).unwrap()
        })
    })
}

fn permutation(n: usize) -> impl Strategy<Value = Permutation> {
    Just((0..n).collect::<Vec<_>>()).prop_shuffle().prop_map(|v| Permutation::from_images(v).unwrap())
}

fn permutation_pair(max_n: usize) -> impl Strategy<Value = (Permutation, Permutation)> {
    (1..=max_n).prop_flat_map(|n| (permutation(n), permutation(n)))
}

fn brute_det(a: &IntMatrix) -> i64 {
    let n = a.n_rows();
    (0..n).permutations(n).map(|p| p.iter().enumerate().map(|(i, &j)| a.get(i, j)).sum()).min().unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn determinant_matches_permutation_minimum(a in square(6)) {
        prop_assert_eq!(trop_det(&a).unwrap(), brute_det(&a));
    }

    #[test]
    fn optimal_bijections_all_attain_the_determinant(a in square(5)) {
        let n = a.n_rows();
        let all: Vec<usize> = (0..n).collect();
        let det = trop_det(&a).unwrap();
        let found = enumerate_optimal_bijections(&a, &all, &all, Mode::Standard, usize::MAX).unwrap();
        let expected = (0..n).permutations(n)
            .filter(|p| p.iter().enumerate().map(|(i, &j)| a.get(i, j)).sum::<i64>() == det)
            .count();
        prop_assert_eq!(found.len(), expected);
        for b in &found {
            prop_assert_eq!(b.cost(&a), det);
        }
    }

    #[test]
    fn symmetric_singular_implies_singular(a in symmetric(5)) {
        let all: Vec<usize> = (0..a.n_rows()).collect();
        if is_singular(&a, &all, &all, Mode::Symmetric).unwrap() {
            prop_assert!(is_singular(&a, &all, &all, Mode::Standard).unwrap());
        }
    }

    #[test]
    fn pair_multisets_agree_exactly_for_cycle_similar((s, t) in permutation_pair(7)) {
        let same = PairMultiset::of_permutation(&s) == PairMultiset::of_permutation(&t);
        prop_assert_eq!(same, cycle_similar(&s, &t).unwrap());
    }

    #[test]
    fn cycle_class_members_are_cycle_similar(s in (1usize..=6).prop_flat_map(permutation)) {
        let members = CycleClass::of(&s).members();
        prop_assert!(members.contains(&s));
        for m in &members {
            prop_assert!(cycle_similar(&s, m).unwrap());
        }
    }

    #[test]
    fn rank_matches_oracle(a in symmetric(5)) {
        prop_assert_eq!(tropical_rank(&a).rank, brute_rank_oracle(&a, Mode::Standard).unwrap());
        prop_assert_eq!(symmetric_tropical_rank(&a).unwrap().rank, brute_rank_oracle(&a, Mode::Symmetric).unwrap());
    }

    #[test]
    fn symmetric_rank_bounds(a in symmetric(5)) {
        let trop = tropical_rank(&a).rank;
        let sym = symmetric_tropical_rank(&a).unwrap().rank;
        prop_assert!(sym >= trop);
        prop_assert!(sym <= a.n_rows());
        prop_assert!(trop >= 1);
    }

    #[test]
    fn ranks_invariant_under_scaling_and_permutation(
        (a, c, sigma) in symmetric(5).prop_flat_map(|a| {
            let n = a.n_rows();
            (Just(a), prop::collection::vec(-5i64..=5, n), permutation(n))
        })
    ) {
        let trop = tropical_rank(&a).rank;
        let sym = symmetric_tropical_rank(&a).unwrap().rank;
        let scaled = a.symmetric_scale(&ScalingVector(c)).unwrap();
        let moved = a.diagonal_permute(&sigma).unwrap();
        prop_assert_eq!(tropical_rank(&scaled).rank, trop);
        prop_assert_eq!(symmetric_tropical_rank(&scaled).unwrap().rank, sym);
        prop_assert_eq!(tropical_rank(&moved).rank, trop);
        prop_assert_eq!(symmetric_tropical_rank(&moved).unwrap().rank, sym);
    }

    #[test]
    fn rank_witness_is_nonsingular(a in symmetric(5)) {
        let report = symmetric_tropical_rank(&a).unwrap();
        let (rows, cols) = &report.witness;
        prop_assert_eq!(rows.len(), report.rank);
        prop_assert!(!is_singular(&a, rows, cols, Mode::Symmetric).unwrap());
    }

    #[test]
    fn normalization_is_a_symmetric_scaling(a in symmetric(6)) {
        let a: Matrix = a.convert().unwrap();
        let (b, c) = a.normalize().unwrap();
        prop_assert!(b.is_normalized());
        prop_assert_eq!(&b, &a.symmetric_scale(&c).unwrap());
    }

    #[test]
    fn text_round_trip(a in square(5)) {
        prop_assert_eq!(IntMatrix::parse(&a.to_text()).unwrap(), a);
    }
}
