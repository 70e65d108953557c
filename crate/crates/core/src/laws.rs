//! The weak law of large numbers for imprecise probability trees, its
//! explicit hedging selection, and prequential scoring.
//!
//! Forecaster commits, in every situation `s` before a horizon cut `U`, to buy
//! a gamble `h_s` for the price `m_s`. The average gain `G_U` along a path can
//! only fall below `−ε` with upper probability at most `exp(−N_U ε²/4B²)`.

use std::collections::HashMap;

use crate::error::{Error, Result};
use crate::gamble::{embed_from_cut, Gamble};
use crate::inference::{ImpreciseProbabilityTree, Selection};
use crate::oracle::{credal_enumeration_lower, gamble_process};
use crate::scalar::{approx_ge, Scalar};
use crate::tree::{Cut, EventTree, NodeId};

use num_bigint::BigUint;

/// Forecaster's commitment in one situation: buy `h` (in child order) for `m`.
#[derive(Debug, Clone, PartialEq)]
pub struct Commitment<S> {
    pub h: Vec<S>,
    pub m: S,
}

#[derive(Debug, Clone, PartialEq)]
pub struct CommitmentPlan<S> {
    base: NodeId,
    horizon: Cut,
    commitments: Vec<Option<Commitment<S>>>,
    bound: S,
    /// `n_U(u)` per cut member, aligned with `horizon.members()`.
    distances: Vec<usize>,
}

impl<S: Scalar> CommitmentPlan<S> {
    /// Validates a plan against the tree's local models. Every situation
    /// strictly before the horizon needs exactly one commitment. `bound` is
    /// computed as `max(sup h_s − inf h_s)` when omitted and must dominate it
    /// when given.
    pub fn new(
        ipt: &ImpreciseProbabilityTree<S>,
        horizon: Cut,
        commitments: HashMap<NodeId, Commitment<S>>,
        bound: Option<S>,
    ) -> Result<Self> {
        let tree = ipt.tree();
        let base = horizon.base();
        if horizon.members() == [base] {
            return Err(Error::InvalidPlan(format!(
                "horizon is the trivial cut {{{}}}; n_U must be positive",
                tree.label(base)
            )));
        }
        let mut commitments = commitments;
        let mut slots: Vec<Option<Commitment<S>>> = vec![None; tree.len()];
        let mut spread = S::zero();
        for s in tree.non_terminals_from(base) {
            if !tree.strictly_before_cut(&horizon, s) {
                continue;
            }
            let label = tree.label(s);
            let c = commitments
                .remove(&s)
                .ok_or_else(|| Error::InvalidPlan(format!("no commitment at `{label}`")))?;
            if c.h.len() != tree.children(s).len() {
                return Err(Error::InvalidPlan(format!(
                    "commitment at `{label}` has {} values for {} moves",
                    c.h.len(),
                    tree.children(s).len()
                )));
            }
            let model = ipt.local(s).expect("non-terminal has a model");
            let lower = model.lower_values(&c.h);
            if !approx_ge(&lower, &c.m) {
                return Err(Error::InvalidPlan(format!(
                    "at `{label}` the price {} exceeds the lower prevision {lower} of h",
                    c.m
                )));
            }
            let (lo, hi) = min_max(&c.h);
            if !approx_ge(&c.m, &lo) {
                return Err(Error::InvalidPlan(format!(
                    "at `{label}` the price {} is below inf h = {lo}",
                    c.m
                )));
            }
            if hi.clone() - lo.clone() > spread {
                spread = hi - lo;
            }
            slots[s.0] = Some(c);
        }
        if let Some(extra) = commitments.keys().next() {
            return Err(Error::InvalidPlan(format!(
                "commitment at `{}`, which is not strictly before the horizon",
                tree.label(*extra)
            )));
        }
        let bound = match bound {
            Some(b) if b <= S::zero() => return Err(Error::NonPositiveParameter(format!("B = {b}"))),
            Some(b) if !approx_ge(&b, &spread) => {
                return Err(Error::InvalidPlan(format!(
                    "B = {b} is smaller than the largest spread sup h − inf h = {spread}"
                )))
            }
            Some(b) => b,
            None if spread.is_zero() => {
                return Err(Error::InvalidPlan(
                    "every commitment is constant; supply a positive B".into(),
                ))
            }
            None => spread,
        };
        let distances = horizon
            .members()
            .iter()
            .map(|&u| tree.depth(u) - tree.depth(base))
            .collect();
        Ok(Self {
            base,
            horizon,
            commitments: slots,
            bound,
            distances,
        })
    }

    /// Same as [`Self::new`], with commitments keyed by situation label.
    pub fn from_labels(
        ipt: &ImpreciseProbabilityTree<S>,
        horizon: Cut,
        commitments: impl IntoIterator<Item = (String, Commitment<S>)>,
        bound: Option<S>,
    ) -> Result<Self> {
        let mut map = HashMap::new();
        for (label, c) in commitments {
            let s = ipt.tree().node(&label)?;
            if map.insert(s, c).is_some() {
                return Err(Error::DuplicateId(label));
            }
        }
        Self::new(ipt, horizon, map, bound)
    }

    pub fn base(&self) -> NodeId {
        self.base
    }

    pub fn horizon(&self) -> &Cut {
        &self.horizon
    }

    pub fn bound(&self) -> &S {
        &self.bound
    }

    pub fn commitment(&self, s: NodeId) -> Option<&Commitment<S>> {
        self.commitments.get(s.0)?.as_ref()
    }

    /// Commitments in preorder.
    pub fn commitments(&self) -> impl Iterator<Item = (NodeId, &Commitment<S>)> {
        self.commitments
            .iter()
            .enumerate()
            .filter_map(|(i, c)| Some((NodeId(i), c.as_ref()?)))
    }

    /// `n_U(u)`, the number of moves from the base to `u`.
    pub fn distance(&self, u: NodeId) -> Option<usize> {
        let pos = self.horizon.members().iter().position(|&m| m == u)?;
        Some(self.distances[pos])
    }

    /// `N_U = min_u n_U(u)`.
    pub fn min_distance(&self) -> usize {
        *self.distances.iter().min().expect("non-empty cut")
    }

    /// `h_s(c) − m_s` for the move from `s` to its child `c`.
    fn excess(&self, tree: &EventTree, s: NodeId, c: NodeId) -> S {
        let k = self.commitment(s).expect("committed");
        k.h[tree.child_position(c)].clone() - k.m.clone()
    }
}

fn min_max<S: Scalar>(values: &[S]) -> (S, S) {
    let mut lo = values[0].clone();
    let mut hi = values[0].clone();
    for v in &values[1..] {
        if *v < lo {
            lo = v.clone();
        }
        if *v > hi {
            hi = v.clone();
        }
    }
    (lo, hi)
}

/// `G_U(u) = (1/n_U(u)) Σ_{t ⊑ s ⊏ u} (h_s(u) − m_s)`, a gamble on the cut.
pub fn gain_gamble<S: Scalar>(ipt: &ImpreciseProbabilityTree<S>, plan: &CommitmentPlan<S>) -> Result<Gamble<S>> {
    let tree = ipt.tree();
    let values = plan
        .horizon
        .members()
        .iter()
        .zip(&plan.distances)
        .map(|(&u, &n)| path_gain(tree, plan, u) / S::from_usize(n).expect("small integer"))
        .collect();
    Gamble::new(
        plan.horizon.member_labels(tree).map(str::to_owned).collect(),
        values,
    )
}

/// `Σ (h_s − m_s)` along the path from the base to `u`, touching only the
/// commitments on that path.
fn path_gain<S: Scalar>(tree: &EventTree, plan: &CommitmentPlan<S>, u: NodeId) -> S {
    let mut total = S::zero();
    let mut node = u;
    while node != plan.base {
        let p = tree.parent(node).expect("below the base");
        total = total + plan.excess(tree, p, node);
        node = p;
    }
    total
}

/// `1 − exp(−N ε² / 4B²)`.
pub fn wlln_bound(n: usize, epsilon: f64, bound: f64) -> Result<f64> {
    if n == 0 {
        return Err(Error::NonPositiveParameter("N_U = 0".into()));
    }
    if epsilon.is_nan() || epsilon <= 0.0 {
        return Err(Error::NonPositiveParameter(format!("epsilon = {epsilon}")));
    }
    if bound.is_nan() || bound <= 0.0 {
        return Err(Error::NonPositiveParameter(format!("B = {bound}")));
    }
    Ok(-(-(n as f64) * epsilon * epsilon / (4.0 * bound * bound)).exp_m1())
}

#[derive(Debug, Clone, PartialEq)]
pub struct WllnReport<S> {
    /// `P̲({G_U >= −ε}|t)` by backwards recursion.
    pub exact_lower: S,
    /// The same quantity by credal enumeration, when requested.
    pub oracle_lower: Option<S>,
    pub bound: f64,
    pub holds: bool,
}

/// The indicator of `{G_U >= −ε}` on the paths through the plan's base.
pub fn deviation_event<S: Scalar>(
    ipt: &ImpreciseProbabilityTree<S>,
    plan: &CommitmentPlan<S>,
    epsilon: &S,
) -> Result<Gamble<S>> {
    let gain = gain_gamble(ipt, plan)?;
    let floor = -epsilon.clone();
    let on_cut = gain.map(|g| if approx_ge(g, &floor) { S::one() } else { S::zero() });
    embed_from_cut(ipt.tree(), &on_cut, &plan.horizon)
}

/// Computes `P̲({G_U >= −ε}|t)` exactly and compares it with
/// [`wlln_bound`]. With `oracle_cap`, the value is also computed by credal
/// enumeration.
pub fn verify_wlln<S: Scalar>(
    ipt: &ImpreciseProbabilityTree<S>,
    plan: &CommitmentPlan<S>,
    epsilon: &S,
    oracle_cap: Option<&BigUint>,
) -> Result<WllnReport<S>> {
    let bound = wlln_bound(plan.min_distance(), epsilon.to_f64_lossy(), plan.bound.to_f64_lossy())?;
    let event = deviation_event(ipt, plan, epsilon)?;
    let exact_lower = ipt.predictive_lower_at(&event, plan.base)?;
    let oracle_lower = match oracle_cap {
        Some(cap) => Some(credal_enumeration_lower(ipt, &event, ipt.tree().label(plan.base), cap)?.value),
        None => None,
    };
    let holds = exact_lower.to_f64_lossy() >= bound - 1e-12;
    Ok(WllnReport {
        exact_lower,
        oracle_lower,
        bound,
        holds,
    })
}

/// The hedging selection from the proof of the weak law.
#[derive(Debug, Clone, PartialEq)]
pub struct Witness<S> {
    pub selection: Selection<S>,
    /// `exp(−N_U ε²/4B²)`, rounded to `S`.
    pub alpha: S,
    /// `ε/2B²`.
    pub delta: S,
}

/// `σ(s) = λ_s (h_s − m_s)` with `λ_s = αδ Π_{t ⊑ v ⊏ s} (1 + δ(m_v − h_v(s)))`
/// before the horizon and zero from the horizon on. Requires `0 < ε < B`.
pub fn wlln_witness_selection<S: Scalar>(
    ipt: &ImpreciseProbabilityTree<S>,
    plan: &CommitmentPlan<S>,
    epsilon: &S,
) -> Result<Witness<S>> {
    let b = plan.bound.clone();
    if *epsilon <= S::zero() || *epsilon >= b {
        return Err(Error::EpsilonOutOfRange {
            epsilon: epsilon.to_f64_lossy(),
            bound: b.to_f64_lossy(),
        });
    }
    let tree = ipt.tree();
    let two = S::one() + S::one();
    let delta = epsilon.clone() / (two * b.clone() * b.clone());
    let n = plan.min_distance() as f64;
    let (e, bf) = (epsilon.to_f64_lossy(), b.to_f64_lossy());
    let alpha = S::from_f64_lossy((-n * e * e / (4.0 * bf * bf)).exp());

    let t = plan.base;
    let mut weight = vec![S::zero(); tree.subtree_len(t)];
    weight[0] = alpha.clone() * delta.clone();
    let mut sel = Selection::zero(tree, t);
    for s in tree.subtree(t) {
        if tree.is_terminal(s) || !tree.strictly_before_cut(&plan.horizon, s) {
            continue;
        }
        let lambda = weight[s.0 - t.0].clone();
        let k = plan.commitment(s).expect("committed");
        let choice = k.h.iter().map(|h| lambda.clone() * (h.clone() - k.m.clone())).collect();
        sel.set(tree, s, choice)?;
        for &c in tree.children(s) {
            let factor = S::one() - delta.clone() * plan.excess(tree, s, c);
            if factor <= S::zero() {
                return Err(Error::InvalidPlan(format!(
                    "non-positive hedging factor {factor} at `{}`",
                    tree.label(s)
                )));
            }
            weight[c.0 - t.0] = lambda.clone() * factor;
        }
    }
    Ok(Witness {
        selection: sel,
        alpha,
        delta,
    })
}

#[derive(Debug, Clone, PartialEq)]
pub struct HedgeCheck<S> {
    pub holds: bool,
    /// `min_ω (α − G^σ_Ω(ω) − I_{G_U < −ε}(ω))`.
    pub min_slack: S,
}

/// Checks `α − G^σ_Ω >= I_{G_U < −ε}` on every path through the base, with
/// the scalar tolerance (α is a rounded transcendental).
pub fn check_hedge<S: Scalar>(
    ipt: &ImpreciseProbabilityTree<S>,
    plan: &CommitmentPlan<S>,
    epsilon: &S,
    witness: &Witness<S>,
) -> Result<HedgeCheck<S>> {
    let (_, g) = gamble_process(ipt, &witness.selection, plan.base)?;
    let event = deviation_event(ipt, plan, epsilon)?;
    let tree = ipt.tree();
    let inside = event.terminal_values(tree, plan.base)?;
    let mut min_slack: Option<S> = None;
    for (gv, ev) in g.values().iter().zip(&inside) {
        let below = S::one() - ev.clone();
        let slack = witness.alpha.clone() - gv.clone() - below;
        if min_slack.as_ref().is_none_or(|m| slack < *m) {
            min_slack = Some(slack);
        }
    }
    let min_slack = min_slack.expect("at least one path");
    // Relative slack on α covers the f64 rounding of exp.
    let tol = S::tolerance() + S::from_f64_lossy(1e-12);
    Ok(HedgeCheck {
        holds: min_slack.clone() + tol >= S::zero(),
        min_slack,
    })
}

/// `S_N(x) = exp(−(N/4) x²)`.
pub fn scoring_function(n: usize, x: f64) -> f64 {
    (-(n as f64) / 4.0 * x * x).exp()
}

/// `S_{N_U}(γ)` with `γ = G_U(u_o)/B` when the realised gain is negative,
/// otherwise 1. Only commitments on the path to `u_o` are read.
pub fn prequential_score<S: Scalar>(
    ipt: &ImpreciseProbabilityTree<S>,
    plan: &CommitmentPlan<S>,
    realized: &str,
) -> Result<f64> {
    let tree = ipt.tree();
    let u = tree
        .node(realized)
        .ok()
        .filter(|u| plan.horizon.contains(*u))
        .ok_or_else(|| Error::RealizedNotInHorizon(realized.to_owned()))?;
    let n_u = plan.distance(u).expect("member");
    let gain = path_gain(tree, plan, u) / S::from_usize(n_u).expect("small integer");
    if gain >= S::zero() {
        return Ok(1.0);
    }
    let gamma = (gain / plan.bound.clone()).to_f64_lossy();
    Ok(scoring_function(plan.min_distance(), gamma))
}
