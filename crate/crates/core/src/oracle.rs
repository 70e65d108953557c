//! Brute-force checks that share no code path with the backwards recursion.
//!
//! [`credal_enumeration_lower`] picks one extreme point per non-terminal,
//! computes the precise expectation of the resulting probability tree, and
//! minimises over all picks. Cost is the product of the vertex counts, so
//! every entry point takes a cap and refuses rather than sampling.
//!
//! The module also builds gamble processes for arbitrary selections, the
//! called-off selections, and the checks for the decomposition and
//! no-uniform-loss lemmas.

use std::time::{Duration, Instant};

use num_bigint::BigUint;
use num_traits::One;

use crate::error::{Error, Result};
use crate::gamble::{Gamble, TreeProcess};
use crate::inference::{ImpreciseProbabilityTree, Selection};
use crate::scalar::{approx_eq, approx_ge, dot, max_of, min_of, Scalar};
use crate::tree::{Cut, EventTree, NodeId};

/// Default enumeration cap: 2^22 vertex assignments.
pub fn default_cap() -> BigUint {
    BigUint::one() << 22u32
}

/// A probability tree: one mass function per non-terminal.
#[derive(Debug, Clone, PartialEq)]
pub struct PreciseTree<S> {
    tree: EventTree,
    masses: Vec<Option<Vec<S>>>,
}

impl<S: Scalar> PreciseTree<S> {
    pub fn new(tree: EventTree, mut mass_at: impl FnMut(&EventTree, NodeId) -> Vec<S>) -> Result<Self> {
        let mut masses = vec![None; tree.len()];
        for s in tree.nodes() {
            if tree.is_terminal(s) {
                continue;
            }
            let m = mass_at(&tree, s);
            // Reuse the local-model validation of a mass function.
            crate::local::LocalModel::precise(tree.child_labels(s), m.clone())?;
            masses[s.0] = Some(m);
        }
        Ok(Self { tree, masses })
    }

    pub fn tree(&self) -> &EventTree {
        &self.tree
    }

    pub fn mass(&self, s: NodeId) -> Option<&[S]> {
        self.masses[s.0].as_deref()
    }
}

/// `E(f|t)` in a probability tree, by backward expectation.
pub fn precise_expectation<S: Scalar>(pt: &PreciseTree<S>, f: &Gamble<S>, t: &str) -> Result<S> {
    let t = pt.tree.node(t)?;
    let terminal_values = f.terminal_values(&pt.tree, t)?;
    Ok(expectation(&pt.tree, t, &terminal_values, |s| {
        pt.masses[s.0].as_deref().expect("non-terminal has a mass")
    }))
}

fn expectation<'a, S: Scalar>(
    tree: &EventTree,
    t: NodeId,
    terminal_values: &[S],
    mass: impl Fn(NodeId) -> &'a [S],
) -> S {
    let base = t.0;
    let first_terminal = tree.terminal_range(t).start;
    let mut values = vec![S::zero(); tree.subtree_len(t)];
    let mut scratch = Vec::new();
    for s in tree.subtree(t).rev() {
        values[s.0 - base] = if tree.is_terminal(s) {
            terminal_values[tree.terminal_range(s).start - first_terminal].clone()
        } else {
            scratch.clear();
            scratch.extend(tree.children(s).iter().map(|c| values[c.0 - base].clone()));
            dot(mass(s), &scratch)
        };
    }
    values.swap_remove(0)
}

/// An extreme-point index for each non-terminal following `base`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VertexAssignment {
    pub base: NodeId,
    pub picks: Vec<(NodeId, usize)>,
}

impl VertexAssignment {
    /// `label=index` pairs, in preorder.
    pub fn describe(&self, tree: &EventTree) -> Vec<(String, usize)> {
        self.picks
            .iter()
            .map(|&(s, i)| (tree.label(s).to_owned(), i))
            .collect()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Enumeration<S> {
    pub value: S,
    /// Lexicographically first assignment attaining `value`.
    pub argmin: VertexAssignment,
    pub count: BigUint,
}

/// Outcome of a time-budgeted enumeration.
#[derive(Debug, Clone, PartialEq)]
pub enum EnumerationRun<S> {
    Completed { result: Enumeration<S>, elapsed: Duration },
    /// Budget ran out after visiting `visited` of `count` assignments.
    Exhausted { visited: u64, count: BigUint, elapsed: Duration },
}

/// Number of vertex assignments for the subtree of `t`.
pub fn assignment_count<S: Scalar>(ipt: &ImpreciseProbabilityTree<S>, t: NodeId) -> BigUint {
    ipt.tree()
        .non_terminals_from(t)
        .map(|s| BigUint::from(ipt.local(s).expect("model").vertex_count()))
        .product()
}

/// `min` over vertex assignments of the precise expectation of `f` given `t`.
pub fn credal_enumeration_lower<S: Scalar>(
    ipt: &ImpreciseProbabilityTree<S>,
    f: &Gamble<S>,
    t: &str,
    cap: &BigUint,
) -> Result<Enumeration<S>> {
    let t = ipt.tree().node(t)?;
    match enumerate(ipt, f, t, Some(cap), None)? {
        EnumerationRun::Completed { result, .. } => Ok(result),
        EnumerationRun::Exhausted { .. } => unreachable!("no budget given"),
    }
}

/// Conjugate: `max` over vertex assignments.
pub fn credal_enumeration_upper<S: Scalar>(
    ipt: &ImpreciseProbabilityTree<S>,
    f: &Gamble<S>,
    t: &str,
    cap: &BigUint,
) -> Result<S> {
    Ok(-credal_enumeration_lower(ipt, &-f, t, cap)?.value)
}

/// Enumeration with an optional cap on the assignment count and an optional
/// wall-clock budget.
pub fn enumerate<S: Scalar>(
    ipt: &ImpreciseProbabilityTree<S>,
    f: &Gamble<S>,
    t: NodeId,
    cap: Option<&BigUint>,
    budget: Option<Duration>,
) -> Result<EnumerationRun<S>> {
    let start = Instant::now();
    let tree = ipt.tree();
    let count = assignment_count(ipt, t);
    if let Some(cap) = cap {
        if &count > cap {
            return Err(Error::EnumerationCapExceeded {
                required: count,
                cap: cap.clone(),
            });
        }
    }
    let terminal_values = f.terminal_values(tree, t)?;

    let nts: Vec<NodeId> = tree.non_terminals_from(t).collect();
    let points: Vec<Vec<Vec<S>>> = nts
        .iter()
        .map(|&s| ipt.local(s).expect("model").extreme_points())
        .collect();
    let mut slot = vec![usize::MAX; tree.len()];
    for (i, s) in nts.iter().enumerate() {
        slot[s.0] = i;
    }

    let mut digits = vec![0usize; nts.len()];
    let mut best: Option<(S, Vec<usize>)> = None;
    let mut visited: u64 = 0;
    loop {
        let value = expectation(tree, t, &terminal_values, |s| &points[slot[s.0]][digits[slot[s.0]]]);
        if best.as_ref().is_none_or(|(b, _)| value < *b) {
            best = Some((value, digits.clone()));
        }
        visited += 1;
        if let Some(budget) = budget {
            if visited.is_multiple_of(256) && start.elapsed() >= budget {
                return Ok(EnumerationRun::Exhausted {
                    visited,
                    count,
                    elapsed: start.elapsed(),
                });
            }
        }
        // Odometer: the first non-terminal (in preorder) is most significant.
        let mut pos = digits.len();
        loop {
            if pos == 0 {
                let (value, digits) = best.expect("at least one assignment");
                let argmin = VertexAssignment {
                    base: t,
                    picks: nts.iter().copied().zip(digits).collect(),
                };
                return Ok(EnumerationRun::Completed {
                    result: Enumeration {
                        value,
                        argmin,
                        count,
                    },
                    elapsed: start.elapsed(),
                });
            }
            pos -= 1;
            digits[pos] += 1;
            if digits[pos] < points[pos].len() {
                break;
            }
            digits[pos] = 0;
        }
    }
}

/// The probability tree induced by a vertex assignment (situations outside
/// the assignment take their first extreme point).
pub fn induced_precise_tree<S: Scalar>(
    ipt: &ImpreciseProbabilityTree<S>,
    assignment: &VertexAssignment,
) -> Result<PreciseTree<S>> {
    let mut pick = vec![0usize; ipt.tree().len()];
    for &(s, i) in &assignment.picks {
        let n = ipt.local(s).map(|m| m.vertex_count()).unwrap_or(0);
        if i >= n {
            return Err(Error::InvalidModel(format!(
                "vertex {i} out of range at `{}`",
                ipt.tree().label(s)
            )));
        }
        pick[s.0] = i;
    }
    PreciseTree::new(ipt.tree().clone(), |_, s| {
        ipt.local(s).expect("model").extreme_points().swap_remove(pick[s.0])
    })
}

/// The gamble process of `σ` started at `t` (`G(t) = 0`,
/// `G(sw) = G(s) + σ(s)(w)`), and its terminal gamble `G^σ_Ω`.
pub fn gamble_process<S: Scalar>(
    ipt: &ImpreciseProbabilityTree<S>,
    sel: &Selection<S>,
    t: NodeId,
) -> Result<(TreeProcess<S>, Gamble<S>)> {
    let tree = ipt.tree();
    if !tree.precedes_node(sel.base(), t) {
        return Err(Error::InvalidSelection(format!(
            "selection starts at `{}`, which does not precede `{}`",
            tree.label(sel.base()),
            tree.label(t)
        )));
    }
    sel.validate(ipt)?;
    let process = raw_process(tree, sel, t);
    let terminal = process.terminal_gamble(tree);
    Ok((process, terminal))
}

fn raw_process<S: Scalar>(tree: &EventTree, sel: &Selection<S>, t: NodeId) -> TreeProcess<S> {
    let base = t.0;
    let mut values = vec![S::zero(); tree.subtree_len(t)];
    for s in tree.subtree(t).skip(1) {
        let p = tree.parent(s).expect("below t");
        values[s.0 - base] = values[p.0 - base].clone() + sel.value(tree, p, s);
    }
    TreeProcess::new(tree, t, values).expect("sized to the subtree")
}

/// `sup{α : f − α >= G^σ_Ω}` on the paths through the selection's base.
pub fn certified_lower<S: Scalar>(
    ipt: &ImpreciseProbabilityTree<S>,
    f: &Gamble<S>,
    sel: &Selection<S>,
) -> Result<S> {
    let (_, g) = gamble_process(ipt, sel, sel.base())?;
    let fv = f.terminal_values(ipt.tree(), sel.base())?;
    let slack: Vec<S> = fv
        .iter()
        .zip(g.values())
        .map(|(a, b)| a.clone() - b.clone())
        .collect();
    Ok(min_of(&slack).expect("at least one path"))
}

/// `σ^U`: keeps `σ(s)` for `s` strictly before `U`, zero elsewhere.
pub fn call_off_selection<S: Scalar>(tree: &EventTree, sel: &Selection<S>, cut: &Cut) -> Result<Selection<S>> {
    if cut.base() != sel.base() {
        return Err(Error::NotAPartition(format!(
            "cut of `{}` used with a selection from `{}`",
            tree.label(cut.base()),
            tree.label(sel.base())
        )));
    }
    let mut out = Selection::zero(tree, sel.base());
    for s in tree.non_terminals_from(sel.base()) {
        if tree.strictly_before_cut(cut, s) {
            if let Some(v) = sel.choice(s) {
                out.set(tree, s, v.to_vec())?;
            }
        }
    }
    Ok(out)
}

/// `σ_u`: the `u`-selection keeping `σ(s)` for `s ⊒ u`.
pub fn restrict_selection<S: Scalar>(tree: &EventTree, sel: &Selection<S>, u: NodeId) -> Result<Selection<S>> {
    if !tree.precedes_node(sel.base(), u) {
        return Err(Error::InvalidSelection(format!(
            "`{}` does not follow `{}`",
            tree.label(u),
            tree.label(sel.base())
        )));
    }
    let mut out = Selection::zero(tree, u);
    for s in tree.non_terminals_from(u) {
        if let Some(v) = sel.choice(s) {
            out.set(tree, s, v.to_vec())?;
        }
    }
    Ok(out)
}

/// A valid selection never yields a gamble process that is negative on every
/// path: `max G^σ_Ω >= 0`.
pub fn avoids_uniform_loss<S: Scalar>(ipt: &ImpreciseProbabilityTree<S>, sel: &Selection<S>) -> Result<bool> {
    let (_, g) = gamble_process(ipt, sel, sel.base())?;
    Ok(approx_ge(&max_of(g.values()).expect("at least one path"), &S::zero()))
}

/// Checks `G^σ_Ω = G^{σ^U}_Ω + Σ_{u ∈ U \ Ω} I_{↑u} G^{σ_u}_Ω` and
/// `G^{σ^U}_Ω = G^σ_U` (lifted) on every path, for a cut `U` of the
/// selection's base.
pub fn cut_decomposition_holds<S: Scalar>(
    ipt: &ImpreciseProbabilityTree<S>,
    sel: &Selection<S>,
    cut: &Cut,
) -> Result<bool> {
    let tree = ipt.tree();
    let t = sel.base();
    let (full, full_terminal) = gamble_process(ipt, sel, t)?;
    let called_off = call_off_selection(tree, sel, cut)?;
    let (_, stopped_terminal) = gamble_process(ipt, &called_off, t)?;

    let mut rhs = stopped_terminal.values().to_vec();
    let first = tree.terminal_range(t).start;
    for &u in cut.members() {
        let range = tree.terminal_range(u);
        // Stopped gamble equals the full process frozen at the cut.
        for i in range.clone() {
            if !approx_eq(&rhs[i - first], full.at(u)) {
                return Ok(false);
            }
        }
        if tree.is_terminal(u) {
            continue;
        }
        let sub = restrict_selection(tree, sel, u)?;
        let (_, tail) = gamble_process(ipt, &sub, u)?;
        for (i, v) in range.zip(tail.values()) {
            rhs[i - first] = rhs[i - first].clone() + v.clone();
        }
    }
    Ok(full_terminal
        .values()
        .iter()
        .zip(&rhs)
        .all(|(a, b)| approx_eq(a, b)))
}
