use iptree::gamble::{embed_from_cut, project_to_cut};
use iptree::oracle::{credal_enumeration_lower, default_cap, gamble_process};
use iptree::random::{random_chain, random_cut, random_gamble, random_ipt, random_state_gamble, TreeConfig};
use iptree::{Gamble, ImpreciseProbabilityTree, NodeId, Rational, Scalar};
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const TOL: f64 = 1e-9;

fn instance(seed: u64) -> (ChaCha8Rng, ImpreciseProbabilityTree<f64>) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let ipt = random_ipt(&mut rng, &TreeConfig::default());
    (rng, ipt)
}

fn pick(rng: &mut ChaCha8Rng, ipt: &ImpreciseProbabilityTree<f64>) -> NodeId {
    NodeId(rng.gen_range(0..ipt.tree().len()))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn lower_is_coherent(seed in any::<u64>(), lambda in 0.0f64..5.0, c in -5.0f64..5.0) {
        let (mut rng, ipt) = instance(seed);
        let tree = ipt.tree();
        let t = pick(&mut rng, &ipt);
        let f = random_gamble::<f64>(&mut rng, tree);
        let g = random_gamble::<f64>(&mut rng, tree);
        let lower = |h: &Gamble<f64>| ipt.predictive_lower_at(h, t).unwrap();
        let fv = f.terminal_values(tree, t).unwrap();
        let (lo, hi) = fv.iter().fold((f64::INFINITY, f64::NEG_INFINITY), |(a, b), v| (a.min(*v), b.max(*v)));

        // Bounds, conjugacy, homogeneity, constant additivity, super-additivity.
        prop_assert!(lower(&f) >= lo - TOL);
        prop_assert!(ipt.predictive_upper_at(&f, t).unwrap() <= hi + TOL);
        prop_assert!(lower(&f) <= ipt.predictive_upper_at(&f, t).unwrap() + TOL);
        prop_assert!((lower(&f.scale(&lambda)) - lambda * lower(&f)).abs() <= TOL);
        prop_assert!((lower(&f.shift(&c)) - lower(&f) - c).abs() <= TOL);
        prop_assert!(lower(&f.try_add(&g).unwrap()) >= lower(&f) + lower(&g) - TOL);

        // Monotonicity.
        let smaller = f.pointwise_min(&g).unwrap();
        prop_assert!(lower(&smaller) <= lower(&f) + TOL);
    }

    #[test]
    fn terminal_situations_read_the_gamble(seed in any::<u64>()) {
        let (mut rng, ipt) = instance(seed);
        let tree = ipt.tree();
        let f = random_gamble::<f64>(&mut rng, tree);
        for &w in tree.terminals() {
            prop_assert_eq!(ipt.predictive_lower_at(&f, w).unwrap(), *f.get(tree.label(w)).unwrap());
        }
    }

    #[test]
    fn iterated_over_a_cut(seed in any::<u64>()) {
        let (mut rng, ipt) = instance(seed);
        let tree = ipt.tree();
        let t = pick(&mut rng, &ipt);
        let f = random_gamble::<f64>(&mut rng, tree);
        let cut = random_cut(&mut rng, tree, t, false);
        let on_cut = ipt.predictive_lower_on_cut(&f, &cut).unwrap();
        let lifted = embed_from_cut(tree, &on_cut, &cut).unwrap();
        prop_assert_eq!(project_to_cut(tree, &lifted, &cut).unwrap(), on_cut);
        let direct = ipt.predictive_lower_at(&f, t).unwrap();
        prop_assert!((ipt.predictive_lower_at(&lifted, t).unwrap() - direct).abs() <= TOL);
    }

    #[test]
    fn optimal_selection_telescopes(seed in any::<u64>(), eps in 0.0f64..1.0) {
        let (mut rng, ipt) = instance(seed);
        let tree = ipt.tree();
        let t = pick(&mut rng, &ipt);
        let f = random_gamble::<f64>(&mut rng, tree);
        let lower = ipt.predictive_lower_at(&f, t).unwrap();
        let sel = ipt.optimal_selection_at(&f, t, eps).unwrap();
        let (_, g) = gamble_process(&ipt, &sel, t).unwrap();
        let fv = f.terminal_values(tree, t).unwrap();
        for (a, b) in fv.iter().zip(g.values()) {
            prop_assert!(a - lower + eps >= b - TOL);
        }
    }

    #[test]
    fn float_and_exact_agree(seed in any::<u64>()) {
        let cfg = TreeConfig::default();
        let mut r1 = ChaCha8Rng::seed_from_u64(seed);
        let mut r2 = ChaCha8Rng::seed_from_u64(seed);
        let a: ImpreciseProbabilityTree<f64> = random_ipt(&mut r1, &cfg);
        let b: ImpreciseProbabilityTree<Rational> = random_ipt(&mut r2, &cfg);
        let fa = random_gamble::<f64>(&mut r1, a.tree());
        let fb = random_gamble::<Rational>(&mut r2, b.tree());
        let root = a.tree().root();
        let va = a.predictive_lower_at(&fa, root).unwrap();
        let vb = b.predictive_lower_at(&fb, root).unwrap();
        prop_assert!((va - vb.to_f64_lossy()).abs() <= TOL);
        let e = credal_enumeration_lower(&b, &fb, b.tree().label(root), &default_cap()).unwrap();
        prop_assert_eq!(e.value, vb);
    }

    #[test]
    fn markov_conjugacy_and_monotonicity(seed in any::<u64>(), n in 1usize..8) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let chain = random_chain::<f64>(&mut rng, 3, 3);
        let f = random_state_gamble::<f64>(&mut rng, chain.states());
        let g = random_state_gamble::<f64>(&mut rng, chain.states());
        let up = chain.state_upper_prevision(&f, n).unwrap();
        prop_assert!((up + chain.state_lower_prevision(&-&f, n).unwrap()).abs() <= TOL);
        let tf = chain.apply_t(&f).unwrap();
        let tmin = chain.apply_t(&f.pointwise_min(&g).unwrap()).unwrap();
        for (a, b) in tmin.values().iter().zip(tf.values()) {
            prop_assert!(*a <= b + TOL);
        }
        let sum = chain.apply_t(&f.try_add(&g).unwrap()).unwrap();
        let tg = chain.apply_t(&g).unwrap();
        for i in 0..sum.len() {
            prop_assert!(sum.values()[i] >= tf.values()[i] + tg.values()[i] - TOL);
        }
    }
}
