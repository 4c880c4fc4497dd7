use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use symtrop::blocks::{random_block_matrix, BlockSizes};
use symtrop::witness::{border_matrix, duplicate_matrix};
use symtrop::*;

fn sizes() -> impl Strategy<Value = BlockSizes> {
    (0usize..=2, 0usize..=3, 0usize..=2, 0usize..=2, 0usize..=2)
        .prop_map(|(zero, b1, b2, k, l)| if k == 0 || l == 0 { BlockSizes { zero: zero + k + l, b1, b2, k: 0, l: 0 } } else { BlockSizes { zero, b1, b2, k, l } })
}

/// Normalized symmetric rank-2 matrices from the block generator.
fn rank_two() -> impl Strategy<Value = Matrix> {
    (sizes(), any::<u64>()).prop_filter_map("not of symmetric rank 2", |(s, seed)| {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let a: Matrix = random_block_matrix(&mut rng, s, 4)?;
        (a.n_rows() <= 7 && symmetric_tropical_rank(&a).ok()?.rank == 2).then_some(a)
    })
}

fn symmetric(max_n: usize) -> impl Strategy<Value = Matrix> {
    (1..=max_n).prop_flat_map(|n| {
        prop::collection::vec(-6i64..=6, n * n).prop_map(move |v| {
            Matrix::from_fn(n, n, |i, j| Rational::from_integer(v[i.min(j) * n + i.max(j)])).unwrap()
        })
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn block_form_reassembles(a in rank_two()) {
        let (b, _) = a.normalize().unwrap();
        let dec = block_decompose(&b, true).unwrap();
        prop_assert_eq!(&dec.reassemble(), &b);
        prop_assert_eq!(&dec.permuted, &b.diagonal_permute(&dec.sigma).unwrap());
    }

    #[test]
    fn rank_two_lifts_verify(a in rank_two(), seed in any::<u64>()) {
        let cert = rank2_symmetric_lift(&a, &LiftOptions { seed, ..LiftOptions::default() }).unwrap();
        prop_assert!(cert.is_valid());
        prop_assert_eq!(&cert.matrix.degrees().unwrap(), &a);
        prop_assert!(cert.matrix.is_symmetric());
    }

    #[test]
    fn rank_one_lifts_verify(v in prop::collection::vec(-5i64..=5, 1..6)) {
        let n = v.len();
        let a = Matrix::from_fn(n, n, |i, j| Rational::from_integer(v[i] + v[j])).unwrap();
        let cert = rank1_lift(&a).unwrap();
        prop_assert!(cert.is_valid());
    }

    #[test]
    fn duplicate_keeps_and_border_raises_rank(a in symmetric(4)) {
        let rank = symmetric_tropical_rank(&a).unwrap().rank;
        let one = Rational::from_integer(1);
        let dup = duplicate_matrix(&a).unwrap();
        let bordered = border_matrix(&a, &(*a.max_entry() + one), &(*a.min_entry() - one)).unwrap();
        prop_assert_eq!(symmetric_tropical_rank(&dup).unwrap().rank, rank);
        prop_assert_eq!(symmetric_tropical_rank(&bordered).unwrap().rank, rank + 1);
    }
}
