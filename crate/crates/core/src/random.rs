//! Seeded generators for trees, models, gambles, selections, cuts, plans and
//! chains. Every number is drawn as a small-denominator rational and then
//! converted, so the same seed yields the same instance in every scalar type.

use std::collections::HashMap;

use rand::Rng;

use crate::error::Result;
use crate::gamble::Gamble;
use crate::inference::{ImpreciseProbabilityTree, Selection};
use crate::laws::{Commitment, CommitmentPlan};
use crate::local::LocalModel;
use crate::markov::ImpreciseMarkovChain;
use crate::scalar::Scalar;
use crate::tree::{Cut, EventTree, NodeId, TreeDescription};

#[derive(Debug, Clone)]
pub struct TreeConfig {
    pub max_depth: usize,
    pub max_branching: usize,
    /// Probability that a situation below the root is non-terminal.
    pub grow: f64,
    pub max_vertices: usize,
    /// Bound on the product of vertex counts (the enumeration size).
    pub max_assignments: u64,
}

impl Default for TreeConfig {
    fn default() -> Self {
        Self {
            max_depth: 4,
            max_branching: 3,
            grow: 0.55,
            max_vertices: 3,
            max_assignments: 1 << 10,
        }
    }
}

/// A random event tree; situations are labelled `s0, s1, …` in creation order.
pub fn random_tree(rng: &mut impl Rng, cfg: &TreeConfig) -> EventTree {
    let mut desc = TreeDescription::new("s0");
    let mut next = 1usize;
    // (label, depth)
    let mut stack = vec![("s0".to_string(), 0usize)];
    while let Some((label, depth)) = stack.pop() {
        let expand = depth == 0 || (depth < cfg.max_depth && rng.gen_bool(cfg.grow));
        if !expand {
            continue;
        }
        let k = rng.gen_range(2..=cfg.max_branching.max(2));
        let kids: Vec<String> = (0..k)
            .map(|_| {
                let l = format!("s{next}");
                next += 1;
                l
            })
            .collect();
        for kid in kids.iter().rev() {
            stack.push((kid.clone(), depth + 1));
        }
        desc = desc.node(label, kids);
    }
    EventTree::build(&desc).expect("generated trees are valid")
}

/// A random mass function with denominators up to `12`.
pub fn random_mass<S: Scalar>(rng: &mut impl Rng, n: usize) -> Vec<S> {
    let weights: Vec<i64> = (0..n).map(|_| rng.gen_range(0..=6)).collect();
    let total: i64 = weights.iter().sum();
    if total == 0 {
        return vec![S::from_ratio(1, n as i64); n];
    }
    weights.iter().map(|&w| S::from_ratio(w, total)).collect()
}

/// A random local model with at most `max_vertices` extreme points.
pub fn random_model<S: Scalar>(rng: &mut impl Rng, carrier: Vec<String>, max_vertices: usize) -> LocalModel<S> {
    let n = carrier.len();
    let choice = if max_vertices <= 1 { 0 } else { rng.gen_range(0..4) };
    match choice {
        1 if n <= max_vertices => LocalModel::vacuous(carrier),
        2 if n <= max_vertices => {
            let delta = S::from_ratio(rng.gen_range(0..=4), 4);
            let center = random_mass(rng, n);
            LocalModel::linear_vacuous(carrier, center, delta).expect("valid mass")
        }
        1..=3 => {
            let k = rng.gen_range(2..=max_vertices);
            let points = (0..k).map(|_| random_mass(rng, n)).collect();
            LocalModel::credal(carrier, points).expect("valid masses")
        }
        _ => LocalModel::precise(carrier, random_mass(rng, n)).expect("valid mass"),
    }
}

/// A random imprecise probability tree whose enumeration stays within
/// `cfg.max_assignments`.
pub fn random_ipt<S: Scalar>(rng: &mut impl Rng, cfg: &TreeConfig) -> ImpreciseProbabilityTree<S> {
    let tree = random_tree(rng, cfg);
    let mut budget = cfg.max_assignments.max(1);
    ImpreciseProbabilityTree::from_fn(tree, |tree, s| {
        let allowed = (budget.min(cfg.max_vertices as u64)) as usize;
        let m = random_model(rng, tree.child_labels(s), allowed);
        budget /= m.vertex_count() as u64;
        Ok(m)
    })
    .expect("generated models match their situations")
}

/// Integer-valued-ish gamble on the terminals, values in `[-5, 5]` with
/// denominators up to 4.
pub fn random_gamble<S: Scalar>(rng: &mut impl Rng, tree: &EventTree) -> Gamble<S> {
    let labels = tree.terminal_labels();
    let values = labels.iter().map(|_| random_value(rng, 5)).collect();
    Gamble::new(labels, values).expect("distinct terminals")
}

fn random_value<S: Scalar>(rng: &mut impl Rng, range: i64) -> S {
    S::from_ratio(rng.gen_range(-4 * range..=4 * range), 4)
}

/// A random cut of `t`. With `proper`, the cut is not `{t}`.
pub fn random_cut(rng: &mut impl Rng, tree: &EventTree, t: NodeId, proper: bool) -> Cut {
    let mut members = Vec::new();
    let mut stack = vec![t];
    while let Some(s) = stack.pop() {
        let stop = tree.is_terminal(s) || ((s != t || !proper) && rng.gen_bool(0.4));
        if stop {
            members.push(s);
        } else {
            stack.extend(tree.children(s).iter().rev());
        }
    }
    tree.cut_from_nodes(t, members).expect("generated cuts are valid")
}

/// A random locally desirable selection from `t`: each choice is a random
/// gamble shifted up to non-negative local lower prevision (or zero).
pub fn random_selection<S: Scalar>(
    rng: &mut impl Rng,
    ipt: &ImpreciseProbabilityTree<S>,
    t: NodeId,
) -> Selection<S> {
    let tree = ipt.tree();
    let mut sel = Selection::zero(tree, t);
    for s in tree.non_terminals_from(t).collect::<Vec<_>>() {
        if rng.gen_bool(0.15) {
            continue;
        }
        let raw: Vec<S> = tree.children(s).iter().map(|_| random_value(rng, 3)).collect();
        let lower = ipt.local(s).expect("model").lower_values(&raw);
        let lift = if rng.gen_bool(0.5) {
            S::zero()
        } else {
            S::from_ratio(rng.gen_range(0..=4), 8)
        };
        let choice = raw
            .into_iter()
            .map(|v| v - lower.clone() + lift.clone())
            .collect();
        sel.set(tree, s, choice).expect("aligned with children");
    }
    sel
}

/// A random valid commitment plan from the root with `h_s ∈ [0, 1]` and
/// `B = 1`.
pub fn random_plan<S: Scalar>(rng: &mut impl Rng, ipt: &ImpreciseProbabilityTree<S>) -> Result<CommitmentPlan<S>> {
    let tree = ipt.tree();
    let horizon = random_cut(rng, tree, tree.root(), true);
    let commitments = random_commitments(rng, ipt, &horizon, |_| true);
    CommitmentPlan::new(ipt, horizon, commitments, Some(S::one()))
}

fn random_commitments<S: Scalar>(
    rng: &mut impl Rng,
    ipt: &ImpreciseProbabilityTree<S>,
    horizon: &Cut,
    mut wanted: impl FnMut(NodeId) -> bool,
) -> HashMap<NodeId, Commitment<S>> {
    let tree = ipt.tree();
    let mut out = HashMap::new();
    for s in tree.non_terminals_from(horizon.base()) {
        if !tree.strictly_before_cut(horizon, s) || !wanted(s) {
            continue;
        }
        let h: Vec<S> = tree
            .children(s)
            .iter()
            .map(|_| S::from_ratio(rng.gen_range(0..=8), 8))
            .collect();
        let lower = ipt.local(s).expect("model").lower_values(&h);
        let lo = h.iter().fold(h[0].clone(), |a, v| if *v < a { v.clone() } else { a });
        // m uniformly on a small grid of [inf h, P̲(h)].
        let step = rng.gen_range(0..=4);
        let m = lo.clone() + (lower - lo) * S::from_ratio(step, 4);
        out.insert(s, Commitment { h, m });
    }
    out
}

/// Replaces the local model of every situation that does not precede
/// `realized`, and redraws the plan's commitments there. Models and
/// commitments on the path to `realized` are kept as they are.
pub fn perturb_off_path<S: Scalar>(
    rng: &mut impl Rng,
    ipt: &ImpreciseProbabilityTree<S>,
    plan: &CommitmentPlan<S>,
    realized: NodeId,
    max_vertices: usize,
) -> Result<(ImpreciseProbabilityTree<S>, CommitmentPlan<S>)> {
    let tree = ipt.tree();
    let on_path = |s: NodeId| tree.precedes_node(s, realized);
    let perturbed = ImpreciseProbabilityTree::from_fn(tree.clone(), |tree, s| {
        Ok(if on_path(s) {
            ipt.local(s).expect("model").clone()
        } else {
            random_model(rng, tree.child_labels(s), max_vertices)
        })
    })?;
    let mut commitments = random_commitments(rng, &perturbed, plan.horizon(), |s| !on_path(s));
    for (s, c) in plan.commitments() {
        if on_path(s) {
            commitments.insert(s, c.clone());
        }
    }
    let plan = CommitmentPlan::new(&perturbed, plan.horizon().clone(), commitments, Some(plan.bound().clone()))?;
    Ok((perturbed, plan))
}

/// A random chain on `2..=max_states` states.
pub fn random_chain<S: Scalar>(rng: &mut impl Rng, max_states: usize, max_vertices: usize) -> ImpreciseMarkovChain<S> {
    let n = rng.gen_range(2..=max_states.max(2));
    let states: Vec<String> = (0..n).map(|i| format!("x{i}")).collect();
    let initial = random_model(rng, states.clone(), max_vertices);
    let transitions = (0..n).map(|_| random_model(rng, states.clone(), max_vertices)).collect();
    ImpreciseMarkovChain::new(states, initial, transitions).expect("shared carrier")
}

/// A random gamble on a chain's states.
pub fn random_state_gamble<S: Scalar>(rng: &mut impl Rng, states: &[String]) -> Gamble<S> {
    let values = states.iter().map(|_| random_value(rng, 5)).collect();
    Gamble::new(states.to_vec(), values).expect("distinct states")
}
