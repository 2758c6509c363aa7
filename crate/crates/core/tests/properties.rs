use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use cohen_lenstra::arith::{q_pochhammer, Prime, Rational};
use cohen_lenstra::fplinalg::{random_gl, random_invertible, ModMatrix};
use cohen_lenstra::measure::weight;
use cohen_lenstra::partitions::{partitions_of, Partition};
use cohen_lenstra::young::{step2_distribution, path_weight_sum, ChainState, PATH_BUDGET};

fn small_partition(max_size: u32) -> impl Strategy<Value = Partition> {
    proptest::collection::vec(1u32..5, 0..6)
        .prop_map(Partition::from_unsorted)
        .prop_filter("size bound", move |l| l.size() <= max_size)
}

fn prime() -> impl Strategy<Value = Prime> {
    prop::sample::select(vec![2u64, 3, 5, 7]).prop_map(|p| Prime::new(p).unwrap())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn row_probabilities_form_a_distribution(lam in small_partition(20), extra in 0u32..6, p in prime()) {
        let state = ChainState::new(lam.clone(), lam.largest().max(1) + extra);
        let dist = step2_distribution(&state, p);
        prop_assert_eq!(dist.len(), lam.len() + 1);
        prop_assert!(dist.iter().all(|(_, x)| *x >= Rational::from_integer(0.into())));
        let total: Rational = dist.into_iter().map(|(_, x)| x).sum();
        prop_assert_eq!(total, Rational::from_integer(1.into()));
    }

    #[test]
    fn path_sums_are_weights(lam in small_partition(9), p in prime()) {
        prop_assert_eq!(path_weight_sum(&lam, p, PATH_BUDGET).unwrap(), weight(&lam, p));
    }

    #[test]
    fn weights_of_fixed_size_sum_to_hall_total(n in 0u32..9, p in prime()) {
        let total: Rational = partitions_of(n, n, n).iter().map(|l| weight(l, p)).sum();
        prop_assert_eq!(total, p.q_pow(n) / q_pochhammer(p, 1, n));
    }

    #[test]
    fn jordan_data_is_a_conjugacy_invariant(seed in any::<u64>(), n in 1usize..6, p in prime()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let m = random_gl(n, p, &mut rng).unwrap();
        let g = random_gl(n, p, &mut rng).unwrap();
        let conj = g.inverse().unwrap().mul(&m).mul(&g);
        let mut total = 0;
        for a in 1..p.get() {
            let lam = m.partition_at(a);
            prop_assert_eq!(&lam, &conj.partition_at(a));
            total += lam.size();
        }
        prop_assert!(total as usize <= n);
    }

    #[test]
    fn smith_form_ignores_unimodular_changes(seed in any::<u64>(), rows in 1usize..5, cols in 1usize..5, k in 1u32..6, p in prime()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let a = ModMatrix::random(rows, cols, p, k, &mut rng).unwrap();
        let (u, _) = random_invertible(rows, p, k, &mut rng).unwrap();
        let (v, _) = random_invertible(cols, p, k, &mut rng).unwrap();
        let exps = a.smith_exponents();
        prop_assert_eq!(exps.len(), rows);
        prop_assert_eq!(exps, u.mul(&a).mul(&v).smith_exponents());
    }
}
