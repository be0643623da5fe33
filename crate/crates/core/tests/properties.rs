use gridga::benchmarks::{BooleanFn, ContinuousFn};
use gridga::encoding::{
    binary_to_gray, bits_per_var, decode_genome, gray_to_binary, is_permutation, BitCoding, Genome,
    GridSpec,
};
use gridga::fitness::{hyperbolic_fitness, penalized_objective, AdaptiveState, PenaltyKind};
use gridga::operators::{
    apply_elitism, crossover_binary, crossover_order, mutate_permutation, CrossoverKind,
    ElitismMode, MutationKind,
};
use proptest::prelude::*;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn grid() -> impl Strategy<Value = GridSpec> {
    (-1e3f64..1e3, 1e-3f64..1e3, -6i32..2).prop_map(|(lower, width, e)| {
        let step = 10f64.powi(e);
        GridSpec {
            lower,
            upper: lower + width.max(step),
            step,
        }
    })
}

proptest! {
    #[test]
    fn gray_round_trip_any_width(v in any::<u64>()) {
        prop_assert_eq!(gray_to_binary(binary_to_gray(v)), v);
    }

    #[test]
    fn gray_neighbours_differ_in_one_bit(v in 0u64..u64::MAX) {
        prop_assert_eq!((binary_to_gray(v) ^ binary_to_gray(v + 1)).count_ones(), 1);
    }

    #[test]
    fn bits_per_var_is_minimal(spec in grid()) {
        let bits = bits_per_var(&spec).unwrap() as u32;
        let m = spec.point_count();
        prop_assert!(m <= 1u64 << bits);
        prop_assert!(bits == 1 || (1u64 << (bits - 1)) < m);
    }

    #[test]
    fn decoded_values_lie_on_the_lattice(
        spec in grid(),
        seed in any::<u64>(),
        dim in 1usize..5,
        gray in any::<bool>(),
    ) {
        let width = bits_per_var(&spec).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let bits = (0..dim * width).map(|_| rng.gen_bool(0.5)).collect();
        let coding = if gray { BitCoding::Gray } else { BitCoding::Plain };
        let x = decode_genome(&Genome::Bits { coding, bits }, &spec, dim).unwrap();
        for v in x {
            prop_assert!(v >= spec.lower && v <= spec.upper);
            let k = (v - spec.lower) / spec.step;
            prop_assert!((k - k.round()).abs() <= 1e-9 * k.abs().max(1.0), "{} is off-lattice", v);
        }
    }

    #[test]
    fn binary_crossover_conserves_genes_per_locus(
        seed in any::<u64>(),
        len in 3usize..64,
        kind in prop::sample::select(vec![CrossoverKind::OnePoint, CrossoverKind::TwoPoint, CrossoverKind::Uniform]),
    ) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let p1: Vec<bool> = (0..len).map(|_| rng.gen_bool(0.5)).collect();
        let p2: Vec<bool> = (0..len).map(|_| rng.gen_bool(0.5)).collect();
        let (c1, c2) = crossover_binary(kind, &p1, &p2, &mut rng).unwrap();
        for i in 0..len {
            let mut parents = [p1[i], p2[i]];
            let mut children = [c1[i], c2[i]];
            parents.sort();
            children.sort();
            prop_assert_eq!(parents, children);
        }
    }

    #[test]
    fn permutation_operators_keep_bijections(seed in any::<u64>(), n in 2usize..40) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut p1: Vec<usize> = (0..n).collect();
        let mut p2 = p1.clone();
        p1.shuffle(&mut rng);
        p2.shuffle(&mut rng);
        let (c1, c2) = crossover_order(&p1, &p2, &mut rng).unwrap();
        prop_assert!(is_permutation(&c1) && is_permutation(&c2));
        for kind in [MutationKind::Inversion, MutationKind::Swap, MutationKind::Shift, MutationKind::Movement] {
            let mut p = c1.clone();
            mutate_permutation(kind, &mut p, &mut rng).unwrap();
            prop_assert!(is_permutation(&p), "{} broke {:?}", kind, p);
        }
    }

    #[test]
    fn elitism_never_loses_the_best(
        prev in prop::collection::vec(0.0f64..1.0, 2..30),
        seed in any::<u64>(),
        fraction in 0.0f64..0.5,
        random in any::<bool>(),
    ) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let offspring: Vec<f64> = prev.iter().map(|_| rng.gen_range(0.0..1.0)).collect();
        let mode = if random { ElitismMode::Random } else { ElitismMode::Best };
        let next = apply_elitism(&prev, offspring, fraction, mode, |&f| f, &mut rng).unwrap();
        prop_assert_eq!(next.len(), prev.len());
        if mode == ElitismMode::Best {
            let best_prev = prev.iter().cloned().fold(f64::MIN, f64::max);
            let best_next = next.iter().cloned().fold(f64::MIN, f64::max);
            prop_assert!(best_next >= best_prev);
        }
    }

    #[test]
    fn fitness_is_positive_and_monotone(a in -1e12f64..1e12, b in -1e12f64..1e12, opt in -1e3f64..1e3) {
        let fa = hyperbolic_fitness(a, opt);
        prop_assert!(fa > 0.0 && fa <= 1.0);
        if (a - opt).abs() < (b - opt).abs() {
            prop_assert!(fa >= hyperbolic_fitness(b, opt));
        }
    }

    #[test]
    fn penalties_raise_infeasible_objectives(
        f in -1e3f64..1e3,
        v in prop::collection::vec(1e-2f64..1e2, 1..5),
        generation in 1u64..1000,
        weight in 1e-2f64..1e3,
    ) {
        let kinds = [
            PenaltyKind::Static { weight },
            PenaltyKind::Dynamic { c: 0.5, alpha: 2.0, beta: 2.0 },
            PenaltyKind::Adaptive { lambda0: weight, shrink: 2.0, grow: 2.0, window: 3 },
        ];
        for kind in kinds {
            let state = AdaptiveState::new(&kind);
            prop_assert!(penalized_objective(f, &v, &kind, generation, &state) > f, "{}", kind);
            prop_assert_eq!(penalized_objective(f, &vec![0.0; v.len()], &kind, generation, &state), f);
        }
    }

    #[test]
    fn nonnegative_functions_stay_nonnegative(x in prop::collection::vec(-100.0f64..100.0, 2..30)) {
        for f in [
            ContinuousFn::BentCigar,
            ContinuousFn::Zakharov,
            ContinuousFn::Rastrigin,
            ContinuousFn::Elliptic,
            ContinuousFn::Discus,
            ContinuousFn::Griewank,
        ] {
            prop_assert!(f.eval(&x) >= 0.0, "{} negative at {:?}", f.name(), x);
        }
    }
}

#[test]
fn boolean_optima_exhaustive() {
    for n in 1..=16usize {
        for f in BooleanFn::ALL {
            let mut best = f64::MIN;
            let mut argbest = 0u32;
            for code in 0u32..(1 << n) {
                let bits: Vec<bool> = (0..n).map(|i| code >> i & 1 == 1).collect();
                let v = f.eval(&bits);
                if v > best {
                    best = v;
                    argbest = code;
                }
            }
            assert_eq!(best, f.maximum(n), "{} n={n}", f.name());
            assert_eq!(argbest, (1 << n) - 1, "{} n={n}", f.name());
        }
    }
}
