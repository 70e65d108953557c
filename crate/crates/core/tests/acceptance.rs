//! Acceptance suite: one PASS/FAIL line per criterion, non-zero exit on any
//! failure. Every tolerance, corpus size and time limit is pinned below.

use std::panic::{catch_unwind, AssertUnwindSafe};
use std::time::{Duration, Instant};

use iptree::gamble::embed_from_cut;
use iptree::inference::Selection;
use iptree::laws::{check_hedge, gain_gamble, prequential_score, verify_wlln, wlln_witness_selection};
use iptree::markov::{BenchOptions, EnumTiming};
use iptree::oracle::{
    assignment_count, avoids_uniform_loss, certified_lower, credal_enumeration_lower, cut_decomposition_holds,
    default_cap, enumerate, gamble_process, EnumerationRun,
};
use iptree::random::{
    perturb_off_path, random_chain, random_cut, random_gamble, random_ipt, random_plan, random_selection,
    random_state_gamble, TreeConfig,
};
use iptree::{catalog, Gamble, ImpreciseMarkovChain, LocalModel, NodeId, Rational, Scalar};
use num_bigint::BigUint;
use num_traits::One;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

// Criterion 1.
const URN_FLOAT_TOL: f64 = 1e-12;
const URN_TIME: Duration = Duration::from_secs(1);
// Criterion 2.
const COINS_REL_TOL: f64 = 1e-12;
const COINS_TIME: Duration = Duration::from_secs(1);
// Criteria 3 and 4.
const CORPUS_SIZE: u64 = 500;
const GAMBLES_PER_TREE: usize = 5;
const ORACLE_TOL: f64 = 1e-9;
const ORACLE_TIME: Duration = Duration::from_secs(60);
const ITERATED_TOL: f64 = 1e-9;
/// Situations with more cuts than this are checked on a seeded sample.
const CUTS_PER_SITUATION: usize = 4096;
// Criterion 5.
const MATCHING_INSTANCES: u64 = 200;
const SELECTIONS_PER_INSTANCE: usize = 1000;
const MATCHING_TOL: f64 = 1e-9;
// Criterion 6.
const WLLN_INSTANCES: u64 = 200;
const WLLN_TOL: f64 = 1e-12;
// Criterion 7.
const PREQUENTIAL_TRIALS: u64 = 100;
// Criterion 8.
const CHAINS: u64 = 100;
const CHAIN_HORIZON: usize = 5;
const CHAIN_TOL: f64 = 1e-12;
/// Enumeration of an unrolled chain runs when it has at most this many
/// vertex assignments.
const CHAIN_ENUM_CAP: u64 = 1 << 16;
// Criterion 9.
const BENCH_HORIZONS: [usize; 5] = [10, 100, 1_000, 10_000, 100_000];
const LINEAR_SLACK: f64 = 2.0;
const BIG_CHAIN_TIME: Duration = Duration::from_secs(5);
const ENUM_SPEEDUP: f64 = 100.0;
const ENUM_BUDGET: Duration = Duration::from_millis(250);
// Criterion 10.
const LEMMA_TRIPLES: u64 = 1000;

fn corpus_seed(i: u64) -> u64 {
    0x5eed_0000 + i
}

fn cfg() -> TreeConfig {
    TreeConfig::default()
}

type Check = Result<String, String>;
type Criterion = (&'static str, fn() -> Check);

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn q(n: i64, d: i64) -> Rational {
    Rational::new(n.into(), d.into())
}

fn criterion_1() -> Check {
    let start = Instant::now();
    fn values<S: Scalar>() -> Result<[S; 4], String> {
        let a = catalog::urn_assessment::<S>();
        let g = Gamble::indicator(catalog::urn_space(), &["g"]);
        let e = |r: iptree::Result<S>| r.map_err(|e| e.to_string());
        let lower = e(a.lower(&g))?;
        let given_rg = e(a.conditional_lower(&g, &["r", "g"]))?;
        let given_b = e(a.conditional_lower(&g, &["b"]))?;
        let on_b = a
            .conditional_lower_on_partition(&g, &[vec!["r", "g"], vec!["b"]])
            .map_err(|e| e.to_string())?;
        let nested = e(a.lower(&on_b))?;
        Ok([lower, given_rg, given_b, nested])
    }
    let exact = values::<Rational>()?;
    let expected = [q(1, 4), q(1, 3), q(0, 1), q(1, 6)];
    ensure(exact == expected, || format!("rational values {exact:?}"))?;
    ensure(exact[0] > exact[3], || "P(g) > P(P(g|B)) fails".into())?;
    let float = values::<f64>()?;
    for (f, e) in float.iter().zip(&expected) {
        let e = e.to_f64_lossy();
        ensure((f - e).abs() <= URN_FLOAT_TOL, || format!("float {f} vs {e}"))?;
    }
    ensure(float[0] > float[3], || "float strict inequality fails".into())?;
    let elapsed = start.elapsed();
    ensure(elapsed < URN_TIME, || format!("took {elapsed:?}"))?;
    Ok(format!("1/4, 1/3, 0, 1/6 exact; float within {URN_FLOAT_TOL:e}; {elapsed:.2?}"))
}

fn criterion_2() -> Check {
    let start = Instant::now();
    let mut worst = 0.0f64;
    let mut checked = 0;
    for n in 1..=12usize {
        for delta in [0.0f64, 0.1, 0.25] {
            let ipt = catalog::coins(n, delta);
            let target = format!("h{n}");
            let f = Gamble::on_terminals(ipt.tree(), |l| if l == target { 1.0 } else { 0.0 });
            for k in 0..n {
                let at = format!("h{k}");
                let lower = ipt.predictive_lower(&f, &at).map_err(|e| e.to_string())?;
                let upper = ipt.predictive_upper(&f, &at).map_err(|e| e.to_string())?;
                let e = (n - k) as i32;
                for (got, want) in [(lower, (0.5 - delta).powi(e)), (upper, (0.5 + delta).powi(e))] {
                    let rel = if want == 0.0 { got.abs() } else { ((got - want) / want).abs() };
                    worst = worst.max(rel);
                    ensure(rel <= COINS_REL_TOL, || format!("n={n} δ={delta} k={k}: {got} vs {want}"))?;
                    checked += 1;
                }
            }
        }
    }
    let elapsed = start.elapsed();
    ensure(elapsed < COINS_TIME, || format!("took {elapsed:?}"))?;
    Ok(format!("{checked} values, worst relative error {worst:.1e}; {elapsed:.2?}"))
}

fn criterion_3() -> Check {
    let start = Instant::now();
    let cap = default_cap();
    let mut worst = 0.0f64;
    let mut comparisons = 0usize;
    for i in 0..CORPUS_SIZE {
        let mut rng = ChaCha8Rng::seed_from_u64(corpus_seed(i));
        let ipt = random_ipt::<f64>(&mut rng, &cfg());
        let tree = ipt.tree();
        for _ in 0..GAMBLES_PER_TREE {
            let f = random_gamble::<f64>(&mut rng, tree);
            let values = ipt.backward_values(&f, tree.root()).map_err(|e| e.to_string())?;
            for s in tree.nodes() {
                let oracle = credal_enumeration_lower(&ipt, &f, tree.label(s), &cap)
                    .map_err(|e| e.to_string())?
                    .value;
                let diff = (values[s.0] - oracle).abs();
                worst = worst.max(diff);
                ensure(diff <= ORACLE_TOL, || format!("seed {i} at {}: {} vs {oracle}", tree.label(s), values[s.0]))?;
                comparisons += 1;
            }
        }
    }
    let elapsed = start.elapsed();
    ensure(elapsed < ORACLE_TIME, || format!("took {elapsed:?}"))?;
    Ok(format!(
        "{CORPUS_SIZE} trees x {GAMBLES_PER_TREE} gambles, {comparisons} situations, max |diff| {worst:.1e}; {elapsed:.2?}"
    ))
}

fn criterion_4() -> Check {
    let start = Instant::now();
    let mut worst = 0.0f64;
    let (mut exhaustive, mut sampled, mut checks) = (0usize, 0usize, 0usize);
    for i in 0..CORPUS_SIZE {
        let mut rng = ChaCha8Rng::seed_from_u64(corpus_seed(i));
        let ipt = random_ipt::<f64>(&mut rng, &cfg());
        let tree = ipt.tree();
        let gambles: Vec<Gamble<f64>> = (0..GAMBLES_PER_TREE).map(|_| random_gamble(&mut rng, tree)).collect();
        let mut cut_rng = ChaCha8Rng::seed_from_u64(corpus_seed(i) ^ 0xc0de);
        for t in tree.nodes() {
            let cuts = match tree.all_cuts(t, CUTS_PER_SITUATION) {
                Some(c) => {
                    exhaustive += 1;
                    c
                }
                None => {
                    sampled += 1;
                    (0..CUTS_PER_SITUATION).map(|_| random_cut(&mut cut_rng, tree, t, false)).collect()
                }
            };
            for f in &gambles {
                let direct = ipt.predictive_lower_at(f, t).map_err(|e| e.to_string())?;
                for cut in &cuts {
                    let on_cut = ipt.predictive_lower_on_cut(f, cut).map_err(|e| e.to_string())?;
                    let lifted = embed_from_cut(tree, &on_cut, cut).map_err(|e| e.to_string())?;
                    let iterated = ipt.predictive_lower_at(&lifted, t).map_err(|e| e.to_string())?;
                    let diff = (direct - iterated).abs();
                    worst = worst.max(diff);
                    ensure(diff <= ITERATED_TOL, || format!("seed {i} at {}: {direct} vs {iterated}", tree.label(t)))?;
                    checks += 1;
                }
            }
        }
    }
    Ok(format!(
        "{checks} (f, t, U) checks; all cuts at {exhaustive} situations, {CUTS_PER_SITUATION} sampled cuts at {sampled}; max |diff| {worst:.1e}; {:.2?}",
        start.elapsed()
    ))
}

fn add_selections(tree: &iptree::EventTree, a: &Selection<f64>, b: &Selection<f64>) -> Selection<f64> {
    let mut out = Selection::zero(tree, a.base());
    for s in tree.non_terminals_from(a.base()) {
        let k = tree.children(s).len();
        let x = a.choice(s).map(<[f64]>::to_vec).unwrap_or_else(|| vec![0.0; k]);
        let y = b.choice(s).map(<[f64]>::to_vec).unwrap_or_else(|| vec![0.0; k]);
        out.set(tree, s, x.iter().zip(&y).map(|(p, q)| p + q).collect()).expect("aligned");
    }
    out
}

fn criterion_5() -> Check {
    let start = Instant::now();
    let mut worst_gap = f64::NEG_INFINITY;
    for i in 0..MATCHING_INSTANCES {
        let mut rng = ChaCha8Rng::seed_from_u64(0xa7c4_0000 + i);
        let ipt = random_ipt::<f64>(&mut rng, &cfg());
        let tree = ipt.tree();
        let f = random_gamble::<f64>(&mut rng, tree);
        let non_terminals: Vec<NodeId> = tree.nodes().filter(|&s| !tree.is_terminal(s)).collect();
        let t = non_terminals[rng.gen_range(0..non_terminals.len())];
        let lower = ipt.predictive_lower_at(&f, t).map_err(|e| e.to_string())?;
        let best = ipt.optimal_selection_at(&f, t, 0.0).map_err(|e| e.to_string())?;
        let (_, g) = gamble_process(&ipt, &best, t).map_err(|e| e.to_string())?;
        let fv = f.terminal_values(tree, t).map_err(|e| e.to_string())?;
        for (fw, gw) in fv.iter().zip(g.values()) {
            ensure(fw - lower >= gw - MATCHING_TOL, || {
                format!("instance {i}: f − P = {} < G = {gw}", fw - lower)
            })?;
        }
        for j in 0..SELECTIONS_PER_INSTANCE {
            let rho = random_selection(&mut rng, &ipt, t);
            let sigma = if j % 2 == 0 { rho } else { add_selections(tree, &best, &rho) };
            let certified = certified_lower(&ipt, &f, &sigma).map_err(|e| e.to_string())?;
            worst_gap = worst_gap.max(certified - lower);
            ensure(certified <= lower + MATCHING_TOL, || {
                format!("instance {i}: selection certifies {certified} > {lower}")
            })?;
        }
    }
    Ok(format!(
        "{MATCHING_INSTANCES} instances, {} random selections; largest certified − lower = {worst_gap:.1e}; {:.2?}",
        MATCHING_INSTANCES as usize * SELECTIONS_PER_INSTANCE,
        start.elapsed()
    ))
}

fn criterion_6() -> Check {
    let start = Instant::now();
    let cap = default_cap();
    let mut min_margin = f64::INFINITY;
    let mut hedges = 0usize;
    let mut nontrivial = 0usize;
    for i in 0..WLLN_INSTANCES {
        let mut rng = ChaCha8Rng::seed_from_u64(0x771_0000 + i);
        let ipt = random_ipt::<f64>(&mut rng, &cfg());
        let plan = random_plan(&mut rng, &ipt).map_err(|e| e.to_string())?;
        let b = *plan.bound();
        for k in 1..=9 {
            let eps = k as f64 / 10.0 * b;
            let report = verify_wlln(&ipt, &plan, &eps, Some(&cap)).map_err(|e| e.to_string())?;
            let oracle = report.oracle_lower.expect("requested");
            ensure((oracle - report.exact_lower).abs() <= ORACLE_TOL, || {
                format!("instance {i} ε={eps}: recursion {} vs oracle {oracle}", report.exact_lower)
            })?;
            ensure(report.exact_lower >= report.bound - WLLN_TOL, || {
                format!("instance {i} ε={eps}: {} < {}", report.exact_lower, report.bound)
            })?;
            min_margin = min_margin.min(report.exact_lower - report.bound);
            if report.exact_lower < 1.0 {
                nontrivial += 1;
            }
            let witness = wlln_witness_selection(&ipt, &plan, &eps).map_err(|e| e.to_string())?;
            let hedge = check_hedge(&ipt, &plan, &eps, &witness).map_err(|e| e.to_string())?;
            ensure(hedge.holds, || format!("instance {i} ε={eps}: hedge slack {}", hedge.min_slack))?;
            hedges += 1;
        }
    }
    Ok(format!(
        "{WLLN_INSTANCES} plans x 9 ε; min(exact − bound) = {min_margin:.3}; {nontrivial} cases with P < 1; {hedges} hedges hold; {:.2?}",
        start.elapsed()
    ))
}

fn criterion_7() -> Check {
    let start = Instant::now();
    let mut below_one = 0usize;
    let mut perturbed_models = 0usize;
    for i in 0..PREQUENTIAL_TRIALS {
        let mut rng = ChaCha8Rng::seed_from_u64(0x9e0_0000 + i);
        let ipt = random_ipt::<f64>(&mut rng, &cfg());
        let plan = random_plan(&mut rng, &ipt).map_err(|e| e.to_string())?;
        let tree = ipt.tree();
        let gain = gain_gamble(&ipt, &plan).map_err(|e| e.to_string())?;
        // Prefer a realised situation with a loss so the score is informative.
        let members = plan.horizon().members();
        let pos = (0..members.len())
            .min_by(|&a, &b| gain.values()[a].total_cmp(&gain.values()[b]))
            .expect("non-empty");
        let u = members[pos];
        let label = tree.label(u);
        let before = prequential_score(&ipt, &plan, label).map_err(|e| e.to_string())?;
        let (ipt2, plan2) = perturb_off_path(&mut rng, &ipt, &plan, u, 3).map_err(|e| e.to_string())?;
        perturbed_models += tree
            .nodes()
            .filter(|&s| ipt.local(s) != ipt2.local(s))
            .count();
        let after = prequential_score(&ipt2, &plan2, label).map_err(|e| e.to_string())?;
        ensure(before.to_bits() == after.to_bits(), || format!("trial {i}: {before} vs {after}"))?;
        if before < 1.0 {
            below_one += 1;
        }
    }
    Ok(format!(
        "{PREQUENTIAL_TRIALS} trials bit-identical; {below_one} with score < 1; {perturbed_models} off-path models changed; {:.2?}",
        start.elapsed()
    ))
}

fn criterion_8() -> Check {
    let start = Instant::now();
    let cap = BigUint::from(CHAIN_ENUM_CAP);
    let node_cap = iptree::markov::default_node_cap();
    let (mut tree_checks, mut enum_checks, mut skipped) = (0usize, 0usize, 0usize);
    let mut worst = 0.0f64;
    for i in 0..CHAINS {
        let mut rng = ChaCha8Rng::seed_from_u64(0x3a2_0000 + i);
        let chain = random_chain::<f64>(&mut rng, 3, 3);
        let f = random_state_gamble::<f64>(&mut rng, chain.states());
        for n in 1..=CHAIN_HORIZON {
            let op = chain.state_lower_prevision(&f, n).map_err(|e| e.to_string())?;
            let unrolled = chain.unroll_to_tree(n, &node_cap).map_err(|e| e.to_string())?;
            let lifted = unrolled.lift(&f).map_err(|e| e.to_string())?;
            let rec = unrolled.ipt.predictive_lower(&lifted, "root").map_err(|e| e.to_string())?;
            worst = worst.max((op - rec).abs());
            ensure((op - rec).abs() <= CHAIN_TOL, || format!("chain {i} n={n}: operator {op} vs tree {rec}"))?;
            tree_checks += 1;
            let count = chain.enumeration_count(n);
            ensure(count == assignment_count(&unrolled.ipt, unrolled.ipt.tree().root()), || {
                format!("chain {i} n={n}: predicted count differs")
            })?;
            if count > cap {
                skipped += 1;
                continue;
            }
            let e = credal_enumeration_lower(&unrolled.ipt, &lifted, "root", &cap).map_err(|e| e.to_string())?;
            worst = worst.max((op - e.value).abs());
            ensure((op - e.value).abs() <= CHAIN_TOL, || {
                format!("chain {i} n={n}: operator {op} vs enumeration {}", e.value)
            })?;
            enum_checks += 1;
        }
    }
    Ok(format!(
        "{tree_checks} (chain, n) pairs operator = tree; {enum_checks} also = enumeration, {skipped} over the {CHAIN_ENUM_CAP} cap; max |diff| {worst:.1e}; {:.2?}",
        start.elapsed()
    ))
}

fn two_state_two_vertex() -> ImpreciseMarkovChain<f64> {
    let states: Vec<String> = vec!["a".into(), "b".into()];
    let m = |p: f64, r: f64| LocalModel::credal(states.clone(), vec![vec![p, 1.0 - p], vec![r, 1.0 - r]]).unwrap();
    ImpreciseMarkovChain::new(states.clone(), m(0.5, 0.3), vec![m(0.8, 0.6), m(0.3, 0.1)]).unwrap()
}

/// Best-of-five seconds per call, with enough calls per trial to measure.
fn operator_seconds(chain: &ImpreciseMarkovChain<f64>, f: &Gamble<f64>, n: usize) -> f64 {
    let reps = (200_000 / n).max(1);
    (0..5)
        .map(|_| {
            let start = Instant::now();
            for _ in 0..reps {
                std::hint::black_box(chain.state_lower_prevision(std::hint::black_box(f), n).unwrap());
            }
            start.elapsed().as_secs_f64() / reps as f64
        })
        .fold(f64::INFINITY, f64::min)
}

/// Best-of-five seconds to unroll and fully enumerate horizon `n`.
fn enumeration_seconds(chain: &ImpreciseMarkovChain<f64>, f: &Gamble<f64>, n: usize) -> f64 {
    let node_cap = iptree::markov::default_node_cap();
    (0..5)
        .map(|_| {
            let start = Instant::now();
            let unrolled = chain.unroll_to_tree(n, &node_cap).unwrap();
            let lifted = unrolled.lift(f).unwrap();
            std::hint::black_box(credal_enumeration_lower(&unrolled.ipt, &lifted, "root", &default_cap()).unwrap());
            start.elapsed().as_secs_f64()
        })
        .fold(f64::INFINITY, f64::min)
}

fn criterion_9() -> Check {
    let chain = two_state_two_vertex();
    let f = Gamble::new(chain.states().to_vec(), vec![1.0, 0.0]).unwrap();

    // Operator: at most linear growth between consecutive horizons.
    let times: Vec<f64> = BENCH_HORIZONS.iter().map(|&n| operator_seconds(&chain, &f, n)).collect();
    for w in 0..BENCH_HORIZONS.len() - 1 {
        let (n1, n2) = (BENCH_HORIZONS[w] as f64, BENCH_HORIZONS[w + 1] as f64);
        let ratio = times[w + 1] / times[w];
        ensure(ratio <= LINEAR_SLACK * n2 / n1, || {
            format!("t({n2})/t({n1}) = {ratio:.1} exceeds {LINEAR_SLACK} x {}", n2 / n1)
        })?;
    }

    // Ten states, four vertices each, horizon 10^5.
    let states: Vec<String> = (0..10).map(|i| format!("x{i}")).collect();
    let mut rng = ChaCha8Rng::seed_from_u64(0xb16);
    let model = |rng: &mut ChaCha8Rng| {
        let points = (0..4).map(|_| iptree::random::random_mass::<f64>(rng, 10)).collect();
        LocalModel::credal(states.clone(), points).unwrap()
    };
    let initial = model(&mut rng);
    let transitions = (0..10).map(|_| model(&mut rng)).collect();
    let big = ImpreciseMarkovChain::new(states.clone(), initial, transitions).unwrap();
    let g = random_state_gamble::<f64>(&mut rng, &states);
    let start = Instant::now();
    big.state_lower_prevision(&g, 100_000).unwrap();
    let big_time = start.elapsed();
    ensure(big_time < BIG_CHAIN_TIME, || format!("|X| = 10, n = 10^5 took {big_time:?}"))?;

    // Enumeration: counts follow the vertex power 2^(2^n − 1).
    for n in 2..=14usize {
        let predicted = BigUint::one() << ((1u64 << n) - 1);
        ensure(chain.enumeration_count(n) == predicted, || format!("count at n={n}"))?;
    }
    let unrolled = chain.unroll_to_tree(14, &iptree::markov::default_node_cap()).unwrap();
    ensure(
        assignment_count(&unrolled.ipt, unrolled.ipt.tree().root()) == chain.enumeration_count(14),
        || "unrolled tree at n=14 has a different vertex count".into(),
    )?;
    // Feasible horizons complete, agree with the operator, and the ratio of
    // enumeration time to operator time grows with n.
    let rows = chain
        .benchmark_scaling(&f, &[1, 2, 3, 4], &BenchOptions::default())
        .map_err(|e| e.to_string())?;
    for row in &rows {
        match &row.enumeration {
            EnumTiming::Completed { value, .. } => {
                ensure((value - row.value_operator).abs() <= CHAIN_TOL, || format!("value at n={}", row.n))?;
            }
            other => return Err(format!("n={} not completed: {other:?}", row.n)),
        }
    }
    let mut previous_ratio = 0.0;
    for n in 2..=4usize {
        let ratio = enumeration_seconds(&chain, &f, n) / operator_seconds(&chain, &f, n);
        ensure(ratio > previous_ratio, || format!("enumeration/operator ratio fell at n={n}"))?;
        previous_ratio = ratio;
    }
    // n = 14: the budgeted run is a lower bound on the full enumeration time.
    let lifted = unrolled.lift(&f).unwrap();
    let op14 = operator_seconds(&chain, &f, 14);
    let start = Instant::now();
    let run = enumerate(&unrolled.ipt, &lifted, unrolled.ipt.tree().root(), None, Some(ENUM_BUDGET)).unwrap();
    let enum14 = start.elapsed().as_secs_f64();
    let visited = match run {
        EnumerationRun::Exhausted { visited, .. } => visited,
        EnumerationRun::Completed { .. } => return Err("n=14 enumeration cannot complete".into()),
    };
    let speedup = enum14 / op14;
    ensure(speedup >= ENUM_SPEEDUP, || format!("enumeration/operator at n=14 = {speedup:.0}"))?;
    let projected_log10 = (enum14 / visited as f64).log10() + ((1u64 << 14) - 1) as f64 * 2f64.log10();
    Ok(format!(
        "operator {:.2e}s..{:.2e}s over n=10..1e5; |X|=10 n=1e5 in {big_time:.2?}; n=14 count 2^16383, \
         {visited} assignments in {enum14:.2}s (>= {speedup:.0}x operator, full run ~1e{projected_log10:.0}s)",
        times[0],
        times[BENCH_HORIZONS.len() - 1]
    ))
}

fn criterion_10() -> Check {
    let start = Instant::now();
    let cfg = TreeConfig {
        max_assignments: 1 << 20,
        ..TreeConfig::default()
    };
    let mut nontrivial_cuts = 0usize;
    for i in 0..LEMMA_TRIPLES {
        let mut rng = ChaCha8Rng::seed_from_u64(0x1e44_0000 + i);
        let ipt = random_ipt::<Rational>(&mut rng, &cfg);
        let tree = ipt.tree();
        let non_terminals: Vec<NodeId> = tree.nodes().filter(|&s| !tree.is_terminal(s)).collect();
        let t = non_terminals[rng.gen_range(0..non_terminals.len())];
        let sigma = random_selection(&mut rng, &ipt, t);
        let proper = rng.gen_bool(0.75);
        let cut = random_cut(&mut rng, tree, t, proper);
        if cut.members() != [t] {
            nontrivial_cuts += 1;
        }
        ensure(avoids_uniform_loss(&ipt, &sigma).map_err(|e| e.to_string())?, || {
            format!("triple {i}: uniformly negative gamble process")
        })?;
        ensure(cut_decomposition_holds(&ipt, &sigma, &cut).map_err(|e| e.to_string())?, || {
            format!("triple {i}: cut decomposition fails")
        })?;
    }
    Ok(format!(
        "{LEMMA_TRIPLES} exact triples ({nontrivial_cuts} with a non-trivial cut); {:.2?}",
        start.elapsed()
    ))
}

fn main() {
    let criteria: [Criterion; 10] = [
        ("urn lower previsions", criterion_1),
        ("coin tree closed form", criterion_2),
        ("recursion equals credal enumeration", criterion_3),
        ("iterated lower previsions over cuts", criterion_4),
        ("optimal selections match", criterion_5),
        ("weak law bound and hedge", criterion_6),
        ("prequential invariance", criterion_7),
        ("Markov operator cross-check", criterion_8),
        ("linear versus exponential scaling", criterion_9),
        ("gamble process lemmas", criterion_10),
    ];
    let mut failures = 0;
    for (i, (name, run)) in criteria.iter().enumerate() {
        let outcome = catch_unwind(AssertUnwindSafe(run)).unwrap_or_else(|p| {
            let msg = p
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| p.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_default();
            Err(format!("panicked: {msg}"))
        });
        match outcome {
            Ok(detail) => println!("PASS  {:>2} {name}: {detail}", i + 1),
            Err(detail) => {
                failures += 1;
                println!("FAIL  {:>2} {name}: {detail}", i + 1);
            }
        }
    }
    println!("{} of {} criteria passed", criteria.len() - failures, criteria.len());
    if failures > 0 {
        std::process::exit(1);
    }
}
