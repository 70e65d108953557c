//! Each command returns its stdout payload; `main` prints it and maps errors
//! to exit codes.

use std::fmt::Write as _;
use std::time::{Duration, Instant};

use iptree::laws::{
    check_hedge, gain_gamble, prequential_score, verify_wlln, wlln_witness_selection,
};
use iptree::markov::{default_node_cap, BenchOptions, EnumTiming};
use iptree::oracle::{credal_enumeration_lower, default_cap};
use iptree::{catalog, Gamble, ImpreciseMarkovChain, LocalModel, Rational, Scalar};
use num_bigint::BigUint;
use num_traits::{One, Zero};
use serde_json::{json, Value};

use crate::doc::{ChainDoc, GambleDoc, Num, PlanDoc, SelectionDoc, TreeDoc};
use crate::error::CliError;
use crate::format::{format_f64, format_scalar};

pub const CAP_ENV: &str = "IPTREE_ORACLE_CAP";

/// Parses `"4194304"` or `"2^22"`.
pub fn parse_cap(text: &str) -> Result<BigUint, CliError> {
    let bad = || CliError::Parse(format!("cap `{text}` is not a positive integer or 2^k"));
    let text = text.trim();
    let cap = match text.split_once('^') {
        Some((base, exp)) => {
            let base: BigUint = base.trim().parse().map_err(|_| bad())?;
            let exp: u32 = exp.trim().parse().map_err(|_| bad())?;
            num_traits::pow(base, exp as usize)
        }
        None => text.parse().map_err(|_| bad())?,
    };
    if cap.is_zero() {
        return Err(bad());
    }
    Ok(cap)
}

/// `--cap`, then the environment, then 2^22.
pub fn resolve_cap(flag: Option<&str>) -> Result<BigUint, CliError> {
    match flag {
        Some(f) => parse_cap(f),
        None => match std::env::var(CAP_ENV) {
            Ok(v) => parse_cap(&v),
            Err(_) => Ok(default_cap()),
        },
    }
}

/// Parses `"2..12"`, `"1,5,10"` or a mix such as `"1..3,10"`.
pub fn parse_horizons(text: &str) -> Result<Vec<usize>, CliError> {
    let bad = |part: &str| CliError::Parse(format!("horizon `{part}` is not a positive integer or a range a..b"));
    let mut out = Vec::new();
    for part in text.split(',').map(str::trim).filter(|p| !p.is_empty()) {
        match part.split_once("..") {
            Some((a, b)) => {
                let a: usize = a.trim().parse().map_err(|_| bad(part))?;
                let b: usize = b.trim().trim_start_matches('=').parse().map_err(|_| bad(part))?;
                if a == 0 || b < a {
                    return Err(bad(part));
                }
                out.extend(a..=b);
            }
            None => {
                let n: usize = part.parse().map_err(|_| bad(part))?;
                if n == 0 {
                    return Err(bad(part));
                }
                out.push(n);
            }
        }
    }
    if out.is_empty() {
        return Err(CliError::Parse("no horizons given".into()));
    }
    Ok(out)
}

fn json_scalar<S: Scalar>(v: &S) -> Value {
    if S::is_exact() {
        Value::String(v.to_string())
    } else {
        json_f64(v.to_f64_lossy())
    }
}

fn json_f64(x: f64) -> Value {
    serde_json::from_str(&format_f64(x)).unwrap_or(Value::Null)
}

pub fn infer<S: Scalar>(
    tree_doc: &TreeDoc,
    gamble_doc: &GambleDoc,
    at: Option<&str>,
    upper: bool,
    witness: bool,
) -> Result<String, CliError> {
    let ipt = tree_doc.build::<S>()?;
    let tree = ipt.tree();
    let f: Gamble<S> = gamble_doc.on_tree(tree_doc, tree)?;
    let t = match at {
        Some(label) => tree.node(label)?,
        None => tree.root(),
    };
    let value = if upper {
        ipt.predictive_upper_at(&f, t)?
    } else {
        ipt.predictive_lower_at(&f, t)?
    };
    let mut out = format!("{}\n", format_scalar(&value));
    if witness {
        // The upper price is certified by a selection for −f.
        let target = if upper { -&f } else { f };
        let sel = ipt.optimal_selection_at(&target, t, S::zero())?;
        out.push_str(&crate::doc::serialize(&SelectionDoc::from_selection(tree, &sel)));
    }
    Ok(out)
}

pub fn oracle<S: Scalar>(
    tree_doc: &TreeDoc,
    gamble_doc: &GambleDoc,
    at: Option<&str>,
    cap: &BigUint,
) -> Result<String, CliError> {
    let ipt = tree_doc.build::<S>()?;
    let tree = ipt.tree();
    let f: Gamble<S> = gamble_doc.on_tree(tree_doc, tree)?;
    let t = at.unwrap_or_else(|| tree.label(tree.root()));
    let e = credal_enumeration_lower(&ipt, &f, t, cap)?;
    let mut out = format!("{}\n", format_scalar(&e.value));
    for (label, vertex) in e.argmin.describe(tree) {
        writeln!(out, "{label}\t{vertex}").expect("write to string");
    }
    Ok(out)
}

pub fn wlln<S: Scalar>(
    tree_doc: &TreeDoc,
    plan_doc: &PlanDoc,
    epsilon: &Num,
    oracle_cap: Option<&BigUint>,
) -> Result<String, CliError> {
    let ipt = tree_doc.build::<S>()?;
    let plan = plan_doc.build(&ipt)?;
    let eps: S = epsilon.value("epsilon")?;
    if eps <= S::zero() {
        return Err(CliError::Parse(format!("epsilon must be positive, got {}", epsilon.text())));
    }
    let report = verify_wlln(&ipt, &plan, &eps, oracle_cap)?;
    let (alpha, hedge) = if eps < *plan.bound() {
        let w = wlln_witness_selection(&ipt, &plan, &eps)?;
        let check = check_hedge(&ipt, &plan, &eps, &w)?;
        (json_scalar(&w.alpha), Value::Bool(check.holds))
    } else {
        (Value::Null, Value::Null)
    };
    let mut obj = json!({
        "exact_lower": json_scalar(&report.exact_lower),
        "bound": json_f64(report.bound),
        "holds": report.holds,
        "witness_alpha": alpha,
        "hedge_holds": hedge,
        "n_u": plan.min_distance(),
        "b": json_scalar(plan.bound()),
    });
    if let Some(o) = &report.oracle_lower {
        obj["oracle_lower"] = json_scalar(o);
    }
    Ok(format!("{}\n", serde_json::to_string_pretty(&obj).expect("json")))
}

pub fn score<S: Scalar>(tree_doc: &TreeDoc, plan_doc: &PlanDoc, realized: &str) -> Result<String, CliError> {
    let ipt = tree_doc.build::<S>()?;
    let plan = plan_doc.build(&ipt)?;
    let s = prequential_score(&ipt, &plan, realized)?;
    Ok(format!("{}\n", format_f64(s)))
}

/// The horizon gains `G_U`, one `member<TAB>value` line per cut member.
pub fn gains<S: Scalar>(tree_doc: &TreeDoc, plan_doc: &PlanDoc) -> Result<String, CliError> {
    let ipt = tree_doc.build::<S>()?;
    let plan = plan_doc.build(&ipt)?;
    let g = gain_gamble(&ipt, &plan)?;
    let mut out = String::new();
    for (label, v) in g.iter() {
        writeln!(out, "{label}\t{}", format_scalar(v)).expect("write to string");
    }
    Ok(out)
}

pub fn markov<S: Scalar>(chain_doc: &ChainDoc, gamble_doc: &GambleDoc, n: usize, upper: bool) -> Result<String, CliError> {
    let chain = chain_doc.build::<S>()?;
    let f = gamble_doc.on_states(chain.states())?;
    let v = if upper {
        chain.state_upper_prevision(&f, n)?
    } else {
        chain.state_lower_prevision(&f, n)?
    };
    Ok(format!("{}\n", format_scalar(&v)))
}

fn ms(d: Duration) -> String {
    format!("{:.6}", d.as_secs_f64() * 1e3)
}

/// CSV with columns `n,t_operator_ms,t_enum_ms,value_operator,value_enum`;
/// the enumeration columns are empty above the cap.
pub fn markov_bench<S: Scalar>(
    chain_doc: &ChainDoc,
    gamble_doc: &GambleDoc,
    horizons: &[usize],
    cap: &BigUint,
) -> Result<String, CliError> {
    let chain = chain_doc.build::<S>()?;
    let f = gamble_doc.on_states(chain.states())?;
    let options = BenchOptions {
        enum_cap: cap.clone(),
        ..BenchOptions::default()
    };
    let rows = chain.benchmark_scaling(&f, horizons, &options)?;
    let mut out = String::from("n,t_operator_ms,t_enum_ms,value_operator,value_enum\n");
    for row in rows {
        let (t_enum, v_enum) = match &row.enumeration {
            EnumTiming::Completed { elapsed, value, .. } => (ms(*elapsed), format_scalar(value)),
            _ => (String::new(), String::new()),
        };
        writeln!(
            out,
            "{},{},{},{},{}",
            row.n,
            ms(row.t_operator),
            t_enum,
            format_scalar(&row.value_operator),
            v_enum
        )
        .expect("write to string");
    }
    Ok(out)
}

/// Two states, two extreme points per model.
pub fn bench_chain() -> ImpreciseMarkovChain<f64> {
    let states: Vec<String> = vec!["a".into(), "b".into()];
    let m = |p: f64, r: f64| {
        LocalModel::credal(states.clone(), vec![vec![p, 1.0 - p], vec![r, 1.0 - r]]).expect("valid masses")
    };
    ImpreciseMarkovChain::new(states.clone(), m(0.5, 0.3), vec![m(0.8, 0.6), m(0.3, 0.1)]).expect("shared carrier")
}

/// Operator iteration against time-budgeted enumeration on the built-in
/// two-state chain. Budgeted rows report the time spent before stopping,
/// which bounds the full enumeration from below.
pub fn bench(horizons: &[usize], budget: Duration) -> Result<String, CliError> {
    let chain = bench_chain();
    let f = Gamble::new(chain.states().to_vec(), vec![1.0, 0.0]).expect("aligned");
    let options = BenchOptions {
        enum_budget: Some(budget),
        ..BenchOptions::default()
    };
    let mut out = String::from("n,t_operator_ms,t_enum_ms,value_operator,value_enum,log2_assignments,enum_status\n");
    for &n in horizons {
        let row = chain.benchmark_scaling(&f, &[n], &options)?.remove(0);
        let log2 = row.count.bits().saturating_sub(1);
        let (t_enum, v_enum, status) = match &row.enumeration {
            EnumTiming::Completed { elapsed, value, .. } => (ms(*elapsed), format_f64(*value), "completed"),
            EnumTiming::Exhausted { elapsed, .. } => (ms(*elapsed), String::new(), "budget"),
            EnumTiming::Skipped { .. } => (String::new(), String::new(), "skipped"),
        };
        writeln!(
            out,
            "{n},{},{t_enum},{},{v_enum},{log2},{status}",
            ms(row.t_operator),
            format_f64(row.value_operator)
        )
        .expect("write to string");
    }
    Ok(out)
}

/// Quick end-to-end checks; returns the report and whether all passed.
pub fn selfcheck() -> (String, bool) {
    use rand::SeedableRng;
    let mut out = String::new();
    let mut ok = true;
    let mut line = |name: &str, pass: bool, detail: String| {
        ok &= pass;
        writeln!(out, "{}  {name}: {detail}", if pass { "PASS" } else { "FAIL" }).expect("write to string");
    };

    let show = |x: &Option<Rational>| x.as_ref().map(|v| v.to_string()).unwrap_or_else(|| "error".into());
    let urn = catalog::urn_assessment::<Rational>();
    let g = Gamble::indicator(catalog::urn_space(), &["g"]);
    let v = urn.lower(&g).ok();
    let c = urn.conditional_lower(&g, &["r", "g"]).ok();
    let quarter = Rational::new(1.into(), 4.into());
    let third = Rational::new(1.into(), 3.into());
    line(
        "urn",
        v.as_ref() == Some(&quarter) && c.as_ref() == Some(&third),
        format!("P(g) = {}, P(g|r,g) = {}", show(&v), show(&c)),
    );

    let coins = catalog::coins(3, Rational::new(1.into(), 10.into()));
    let f = Gamble::on_terminals(coins.tree(), |l| if l == "h3" { Rational::one() } else { Rational::zero() });
    let v = coins.predictive_lower(&f, "h0").ok();
    line(
        "coins",
        v == Some(Rational::new(8.into(), 125.into())),
        format!("P(h3) = {}", v.map(|x| x.to_string()).unwrap_or_default()),
    );

    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(1);
    let start = Instant::now();
    let mut worst = 0.0f64;
    for _ in 0..50 {
        let ipt = iptree::random::random_ipt::<f64>(&mut rng, &iptree::random::TreeConfig::default());
        let f = iptree::random::random_gamble::<f64>(&mut rng, ipt.tree());
        let root = ipt.tree().label(ipt.tree().root()).to_owned();
        let a = ipt.predictive_lower(&f, &root).unwrap_or(f64::NAN);
        let b = credal_enumeration_lower(&ipt, &f, &root, &default_cap())
            .map(|e| e.value)
            .unwrap_or(f64::NAN);
        worst = worst.max((a - b).abs());
    }
    line(
        "oracle",
        worst <= 1e-9,
        format!("50 random trees, max |diff| {worst:.1e} in {:.2?}", start.elapsed()),
    );

    let chain = bench_chain();
    let f = Gamble::new(chain.states().to_vec(), vec![1.0, 0.0]).expect("aligned");
    let op = chain.state_lower_prevision(&f, 4).unwrap_or(f64::NAN);
    let tree_value = chain
        .unroll_to_tree(4, &default_node_cap())
        .and_then(|u| {
            let lifted = u.lift(&f)?;
            u.ipt.predictive_lower(&lifted, "root")
        })
        .unwrap_or(f64::NAN);
    line(
        "markov",
        (op - tree_value).abs() <= 1e-12,
        format!("operator {} vs unrolled tree {}", format_f64(op), format_f64(tree_value)),
    );
    (out, ok)
}
