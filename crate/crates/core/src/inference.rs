//! Predictive lower and upper previsions on imprecise probability trees.
//!
//! `P̲(f|t)` is computed by a single bottom-up pass over the situations
//! following `t`: terminals take the value of `f`, and each non-terminal takes
//! the local lower prevision of its children's values. The same pass yields
//! the cut-conditional gambles `P̲(f|U)` and a selection certifying the price.

use std::collections::HashMap;

use crate::error::{Error, Result};
use crate::gamble::Gamble;
use crate::local::LocalModel;
use crate::scalar::{approx_ge, Scalar};
use crate::tree::{Cut, EventTree, NodeId};

/// An event tree with a local model attached to every non-terminal situation.
#[derive(Debug, Clone, PartialEq)]
pub struct ImpreciseProbabilityTree<S> {
    tree: EventTree,
    locals: Vec<Option<LocalModel<S>>>,
}

impl<S: Scalar> ImpreciseProbabilityTree<S> {
    /// Attaches models keyed by situation label. Every non-terminal needs one,
    /// and its carrier must equal the situation's child labels.
    pub fn new(tree: EventTree, models: HashMap<String, LocalModel<S>>) -> Result<Self> {
        let mut models = models;
        let mut locals = vec![None; tree.len()];
        for s in tree.nodes() {
            let label = tree.label(s);
            match models.remove(label) {
                Some(m) if tree.is_terminal(s) => {
                    let _ = m;
                    return Err(Error::InvalidModel(format!(
                        "terminal situation `{label}` cannot carry a local model"
                    )));
                }
                Some(m) => {
                    check_carrier(&tree, s, &m)?;
                    locals[s.0] = Some(m);
                }
                None if !tree.is_terminal(s) => {
                    return Err(Error::InvalidModel(format!(
                        "no local model for `{label}`"
                    )));
                }
                None => {}
            }
        }
        if let Some(extra) = models.keys().next() {
            return Err(Error::UnknownId(extra.clone()));
        }
        Ok(Self { tree, locals })
    }

    /// Builds models for every non-terminal with `make(tree, s)`.
    pub fn from_fn(
        tree: EventTree,
        mut make: impl FnMut(&EventTree, NodeId) -> Result<LocalModel<S>>,
    ) -> Result<Self> {
        let mut locals = vec![None; tree.len()];
        for s in tree.nodes() {
            if !tree.is_terminal(s) {
                let m = make(&tree, s)?;
                check_carrier(&tree, s, &m)?;
                locals[s.0] = Some(m);
            }
        }
        Ok(Self { tree, locals })
    }

    /// Replaces the local model at one non-terminal.
    pub fn with_local(&self, s: NodeId, model: LocalModel<S>) -> Result<Self> {
        if self.tree.is_terminal(s) {
            return Err(Error::TerminalSituation(self.tree.label(s).to_owned()));
        }
        check_carrier(&self.tree, s, &model)?;
        let mut next = self.clone();
        next.locals[s.0] = Some(model);
        Ok(next)
    }

    pub fn tree(&self) -> &EventTree {
        &self.tree
    }

    /// Local model of a non-terminal situation.
    pub fn local(&self, s: NodeId) -> Option<&LocalModel<S>> {
        self.locals[s.0].as_ref()
    }

    fn local_at(&self, s: NodeId) -> &LocalModel<S> {
        self.locals[s.0].as_ref().expect("non-terminal has a model")
    }

    /// Recursion values `V(s)` for every `s ⊒ t`, indexed by preorder offset
    /// from `t`.
    pub fn backward_values(&self, f: &Gamble<S>, t: NodeId) -> Result<Vec<S>> {
        let tree = &self.tree;
        let terminal_values = f.terminal_values(tree, t)?;
        let base = t.0;
        let first_terminal = tree.terminal_range(t).start;
        let mut values: Vec<S> = vec![S::zero(); tree.subtree_len(t)];
        let mut scratch: Vec<S> = Vec::new();
        for s in tree.subtree(t).rev() {
            values[s.0 - base] = if tree.is_terminal(s) {
                terminal_values[tree.terminal_range(s).start - first_terminal].clone()
            } else {
                scratch.clear();
                scratch.extend(tree.children(s).iter().map(|c| values[c.0 - base].clone()));
                self.local_at(s).lower_values(&scratch)
            };
        }
        Ok(values)
    }

    /// `P̲(f|t)`.
    pub fn predictive_lower(&self, f: &Gamble<S>, t: &str) -> Result<S> {
        self.predictive_lower_at(f, self.tree.node(t)?)
    }

    pub fn predictive_lower_at(&self, f: &Gamble<S>, t: NodeId) -> Result<S> {
        Ok(self.backward_values(f, t)?.swap_remove(0))
    }

    /// `P̄(f|t) = −P̲(−f|t)`.
    pub fn predictive_upper(&self, f: &Gamble<S>, t: &str) -> Result<S> {
        self.predictive_upper_at(f, self.tree.node(t)?)
    }

    pub fn predictive_upper_at(&self, f: &Gamble<S>, t: NodeId) -> Result<S> {
        Ok(-self.predictive_lower_at(&-f, t)?)
    }

    /// `P̲(f|U)`: the gamble on the members of `U` with value `P̲(f|u)`.
    pub fn predictive_lower_on_cut(&self, f: &Gamble<S>, cut: &Cut) -> Result<Gamble<S>> {
        let base = cut.base();
        let values = self.backward_values(f, base)?;
        let (carrier, vals) = cut
            .members()
            .iter()
            .map(|&u| (self.tree.label(u).to_owned(), values[u.0 - base.0].clone()))
            .unzip();
        Gamble::new(carrier, vals)
    }

    /// Whether `f` belongs to the natural extension of the local models,
    /// i.e. `f >= G^σ_Ω` for some selection `σ` from the root.
    pub fn natural_extension_member(&self, f: &Gamble<S>) -> Result<bool> {
        let v = self.predictive_lower_at(f, self.tree.root())?;
        Ok(approx_ge(&v, &S::zero()))
    }

    /// A `t`-selection with `f − P̲(f|t) + ε >= G^σ_Ω` on every path through
    /// `t`. Each choice is the recursion's value gamble at `s` recentred to
    /// local price zero, so the guarantee telescopes to equality and holds
    /// for every `ε >= 0`.
    pub fn optimal_selection(&self, f: &Gamble<S>, t: &str, epsilon: S) -> Result<Selection<S>> {
        self.optimal_selection_at(f, self.tree.node(t)?, epsilon)
    }

    pub fn optimal_selection_at(&self, f: &Gamble<S>, t: NodeId, epsilon: S) -> Result<Selection<S>> {
        if epsilon < S::zero() {
            return Err(Error::EpsilonNegative);
        }
        let values = self.backward_values(f, t)?;
        let mut sel = Selection::zero(&self.tree, t);
        for s in self.tree.non_terminals_from(t) {
            let here = values[s.0 - t.0].clone();
            let choice = self
                .tree
                .children(s)
                .iter()
                .map(|c| values[c.0 - t.0].clone() - here.clone())
                .collect();
            sel.set(&self.tree, s, choice)?;
        }
        Ok(sel)
    }
}

fn check_carrier<S: Scalar>(tree: &EventTree, s: NodeId, m: &LocalModel<S>) -> Result<()> {
    let kids = tree.child_labels(s);
    if m.carrier() != kids.as_slice() {
        return Err(Error::CarrierMismatch(format!(
            "model at `{}` is on {:?}, children are {:?}",
            tree.label(s),
            m.carrier(),
            kids
        )));
    }
    Ok(())
}

/// A `t`-selection: one gamble on the move space of every non-terminal
/// following `base`. Unset situations select the zero gamble.
#[derive(Debug, Clone, PartialEq)]
pub struct Selection<S> {
    base: NodeId,
    choices: Vec<Option<Vec<S>>>,
}

impl<S: Scalar> Selection<S> {
    pub fn zero(tree: &EventTree, base: NodeId) -> Self {
        Self {
            base,
            choices: vec![None; tree.len()],
        }
    }

    pub fn base(&self) -> NodeId {
        self.base
    }

    /// Sets the gamble chosen at `s`, given in child order.
    pub fn set(&mut self, tree: &EventTree, s: NodeId, values: Vec<S>) -> Result<()> {
        if !tree.precedes_node(self.base, s) {
            return Err(Error::InvalidSelection(format!(
                "`{}` does not follow `{}`",
                tree.label(s),
                tree.label(self.base)
            )));
        }
        if tree.is_terminal(s) {
            return Err(Error::TerminalSituation(tree.label(s).to_owned()));
        }
        if values.len() != tree.children(s).len() {
            return Err(Error::CarrierMismatch(format!(
                "choice at `{}` has {} values for {} moves",
                tree.label(s),
                values.len(),
                tree.children(s).len()
            )));
        }
        self.choices[s.0] = Some(values);
        Ok(())
    }

    pub fn clear(&mut self, s: NodeId) {
        self.choices[s.0] = None;
    }

    /// Chosen values at `s` in child order; `None` means the zero gamble.
    pub fn choice(&self, s: NodeId) -> Option<&[S]> {
        self.choices.get(s.0)?.as_deref()
    }

    /// Value of the gamble chosen at `s` for the move towards `child`.
    pub fn value(&self, tree: &EventTree, s: NodeId, child: NodeId) -> S {
        match self.choice(s) {
            Some(v) => v[tree.child_position(child)].clone(),
            None => S::zero(),
        }
    }

    pub fn choice_gamble(&self, tree: &EventTree, s: NodeId) -> Option<Gamble<S>> {
        self.choice(s)
            .map(|v| Gamble::new(tree.child_labels(s), v.to_vec()).expect("aligned with children"))
    }

    /// Checks that every chosen gamble is locally desirable (`P̲_s(σ(s)) >= 0`
    /// up to tolerance).
    pub fn validate(&self, ipt: &ImpreciseProbabilityTree<S>) -> Result<()> {
        let tree = ipt.tree();
        for s in tree.non_terminals_from(self.base) {
            if let Some(v) = self.choice(s) {
                let lower = ipt.local_at(s).lower_values(v);
                if !approx_ge(&lower, &S::zero()) {
                    return Err(Error::InvalidSelection(format!(
                        "gamble at `{}` has local lower prevision {lower}",
                        tree.label(s)
                    )));
                }
            }
        }
        Ok(())
    }
}
